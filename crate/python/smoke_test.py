"""Smoke test for the thetaglue Python module.

Build and install first, e.g. `cd crates/py && maturin develop`.
"""

import thetaglue as tg


def main():
    cache = tg.ModformCache(12)

    e4 = cache.e4()
    assert [e4.coeff(n) for n in (0, 2, 4, 6)] == [1, 240, 2160, 6720]
    assert cache.h(0).terms() == [(0, 3)]
    assert cache.rho(0).terms() == [(0, 3)]
    assert cache.tau(2) == -24

    t2, t3, t4 = (cache.theta(i) for i in (2, 3, 4))
    assert (t2 ** 4 + t4 ** 4).agrees_with(t3 ** 4)

    d24 = tg.LatticeSpec("ODD_8M", [3])
    assert d24.dims == [24] and d24.rank == 24
    cosets = tg.theta_by_cosets(d24, cache)
    assert cosets.coeff(2) == 1104
    e3 = e4 ** 3
    assert cosets.agrees_with(e3 + cache.delta24() * tg.QSeries([(0, 384)], e3.trunc_quarters))
    assert tg.theta_by_theorem(d24, cache).agrees_with(cosets)

    d6 = tg.LatticeSpec.parse("family: FOUR_BLOCK\nm: 0,0,0,0\nepsilon: 1\n")
    assert len(d6.generators()) == 4 and len(d6.glue_group()) == 16
    low = tg.theta_by_enumeration(d6, 3)
    assert low.agrees_with(tg.theta_by_cosets(d6, cache).truncate(low.trunc_quarters))
    assert tg.check_even_unimodular(d6) == (True, True, "1")

    even = tg.LatticeSpec("EVEN_8M4", [0, 0, 1, 1])
    shown = tg.theta_by_theorem(even, cache)
    derived = tg.theta_by_theorem(even, cache, reading="derivation")
    assert derived.agrees_with(tg.theta_by_cosets(even, cache))
    assert shown.coeff(2) - derived.coeff(2) == 288

    terms = tg.sym_expand([("h", 2, 1), ("rho", 1, -1), ("rho", 1, -1)])
    assert len(terms) == 6

    try:
        tg.LatticeSpec("ODD_8M", [0])
    except ValueError:
        pass
    else:
        raise AssertionError("m=0 accepted for ODD_8M")
    try:
        tg.theta_by_enumeration(d24, 32)
    except RuntimeError:
        pass
    else:
        raise AssertionError("enumeration guard did not trigger")

    print("smoke test passed")


if __name__ == "__main__":
    main()
