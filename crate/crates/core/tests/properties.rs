use std::collections::BTreeSet;

use num_bigint::BigInt;
use proptest::prelude::*;

use thetaglue_core::bivar::{h_poly, rho_poly, BPoly};
use thetaglue_core::lattices::glue::GlueVector;
use thetaglue_core::lattices::{
    check_even_unimodular, glue_group, theorem_expr, theta_by_cosets, theta_by_enumeration, theta_by_theorem_with,
    LatticeFamily, LatticeSpec, RangeReading,
};
use thetaglue_core::symexpand::{enumerate_assignments, sym_eval, Role, SymPattern, SymSlot};
use thetaglue_core::{ModformCache, QExp, QSeries};

fn series() -> impl Strategy<Value = QSeries> {
    (prop::collection::vec((0u32..40, -20i64..20), 0..12), 8u32..48)
        .prop_map(|(terms, t)| QSeries::from_terms(terms.into_iter().map(|(e, c)| (QExp(e), BigInt::from(c))), QExp(t)))
}

fn unit_series() -> impl Strategy<Value = QSeries> {
    (prop::sample::select(vec![1i64, -1]), prop::collection::vec((1u32..40, -5i64..5), 0..8), 8u32..48).prop_map(
        |(c0, terms, t)| {
            let mut all = vec![(QExp(0), BigInt::from(c0))];
            all.extend(terms.into_iter().map(|(e, c)| (QExp(e), BigInt::from(c))));
            QSeries::from_terms(all, QExp(t))
        },
    )
}

fn bpoly() -> impl Strategy<Value = BPoly> {
    prop::collection::vec(((0u32..5, 0u32..5), -9i64..9), 0..6)
        .prop_map(|t| BPoly::from_terms(t.into_iter().map(|(m, c)| (m, BigInt::from(c)))))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn series_ring_laws(a in series(), b in series(), c in series()) {
        prop_assert!(a.mul(&b).agrees_with(&b.mul(&a)));
        prop_assert!(a.mul(&b).mul(&c).agrees_with(&a.mul(&b.mul(&c))));
        prop_assert!(a.mul(&(&b + &c)).agrees_with(&(&a.mul(&b) + &a.mul(&c))));
        prop_assert!((&(&a - &b) + &b).agrees_with(&a));
    }

    #[test]
    fn series_division_undoes_multiplication(a in series(), u in unit_series()) {
        let prod = a.mul(&u);
        let back = prod.div_exact(&u).unwrap();
        prop_assert!(back.agrees_with(&a));
    }

    #[test]
    fn series_text_round_trip(a in series()) {
        let back = QSeries::from_qs_text(&a.to_qs_text()).unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn polynomial_division_undoes_multiplication(p in bpoly(), q in bpoly()) {
        prop_assume!(!q.is_zero());
        let prod = &p * &q;
        prop_assert_eq!(prod.div_exact(&q).unwrap(), p);
    }

    #[test]
    fn h_and_rho_are_symmetric_and_homogeneous(n in 0u32..16) {
        let h = h_poly(n);
        prop_assert!(h.is_symmetric());
        prop_assert_eq!(h.homogeneous_degree(), Some(2 * n));
        let r = rho_poly(n as i64).unwrap();
        prop_assert!(r.is_symmetric());
        prop_assert_eq!(r.homogeneous_degree(), Some(2 * n));
    }
}

fn slot() -> impl Strategy<Value = SymSlot> {
    (prop::sample::select(vec![Role::H, Role::Rho]), 1usize..4, -1i64..2)
        .prop_map(|(role, block_size, shift)| SymSlot { role, block_size, shift })
}

/// Every ordered labelling of `0..k` by slot, keyed by the unordered
/// collection of (slot, block) pairs.
fn brute_force(p: &SymPattern, k: usize) -> usize {
    let sizes: Vec<usize> = p.slots.iter().map(|s| s.block_size).collect();
    let mut seen = BTreeSet::new();
    let total = sizes.len().pow(k as u32);
    for code in 0..total {
        let mut labels = Vec::with_capacity(k);
        let mut c = code;
        for _ in 0..k {
            labels.push(c % sizes.len());
            c /= sizes.len();
        }
        let mut key: Vec<(SymSlot, Vec<usize>)> = p
            .slots
            .iter()
            .enumerate()
            .map(|(s, slot)| (*slot, (0..k).filter(|&i| labels[i] == s).collect::<Vec<_>>()))
            .collect();
        if key.iter().zip(&sizes).any(|((_, b), &n)| b.len() != n) {
            continue;
        }
        key.sort();
        seen.insert(key);
    }
    seen.len()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn assignment_counts_match_multiset_formula(slots in prop::collection::vec(slot(), 1..5)) {
        let p = SymPattern::new(slots);
        let k = p.arity();
        prop_assume!(k <= 8);
        let listed = enumerate_assignments(&p, k).unwrap();
        prop_assert_eq!(BigInt::from(listed.len()), p.assignment_count());
        prop_assert_eq!(listed.len(), brute_force(&p, k));
    }
}

fn cache() -> &'static ModformCache {
    use std::sync::OnceLock;
    static CACHE: OnceLock<ModformCache> = OnceLock::new();
    CACHE.get_or_init(|| ModformCache::with_order(8).unwrap())
}

fn permuted(m: &[i64], seed: usize) -> Vec<i64> {
    let mut v = m.to_vec();
    let n = v.len();
    let mut s = seed;
    for i in (1..n).rev() {
        v.swap(i, s % (i + 1));
        s /= i + 1;
    }
    v
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn sym_eval_is_symmetric(m in prop::collection::vec(1i64..3, 4), seed in 0usize..24) {
        let pats = [
            SymPattern::new(vec![SymSlot::h(2, 1), SymSlot::h(2, 1)]),
            SymPattern::new(vec![SymSlot::h(2, 1), SymSlot::rho(1, -1), SymSlot::rho(1, -1)]),
            SymPattern::new(vec![SymSlot::rho(1, 0), SymSlot::h(3, 0)]),
        ];
        let pm = permuted(&m, seed);
        for p in &pats {
            prop_assert_eq!(sym_eval(p, &m, cache()).unwrap(), sym_eval(p, &pm, cache()).unwrap());
        }
    }

    #[test]
    fn theorem_expression_is_symmetric(m in prop::collection::vec(0i64..2, 6), seed in 0usize..720) {
        let spec = LatticeSpec::even(&m).unwrap();
        let pm = permuted(&m, seed);
        let e = theorem_expr(&spec, RangeReading::Derivation);
        prop_assert_eq!(e.evaluate(&m, cache()).unwrap(), e.evaluate(&pm, cache()).unwrap());
    }
}

/// Valid specs of total rank at most 32.
fn small_spec() -> impl Strategy<Value = LatticeSpec> {
    (0usize..3, 1usize..5, prop::collection::vec(0i64..4, 8), 0u8..2)
        .prop_map(|(fam, half, m, eps)| match fam {
            0 => LatticeSpec::odd(&m[..2 * (half % 2) + 1].iter().map(|x| x + 1).collect::<Vec<_>>()),
            1 => LatticeSpec::even(&m[..2 * half]),
            _ => LatticeSpec::four_block(&m[..4], eps),
        })
        .prop_filter_map("valid spec of rank <= 32", |s| s.ok().filter(|s| s.rank() <= 32))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn three_routes_agree(spec in small_spec()) {
        let c = cache();
        let cosets = theta_by_cosets(&spec, c).unwrap();
        let theorem = theta_by_theorem_with(&spec, c, RangeReading::Derivation).unwrap();
        prop_assert!(cosets.agrees_with(&theorem), "{} {:?}", spec, cosets.diff(&theorem));
        let low = QExp::from_power(6);
        let counted = theta_by_enumeration(&spec, low).unwrap();
        prop_assert!(counted.agrees_with(&cosets.truncate(low)), "{}", spec);
    }

    #[test]
    fn even_lattice_shape(spec in small_spec()) {
        let t = theta_by_cosets(&spec, cache()).unwrap();
        prop_assert_eq!(t.coeff(QExp(0)).unwrap(), BigInt::from(1));
        for (e, c) in t.terms() {
            prop_assert!(*c > BigInt::from(0));
            prop_assert_eq!(e.quarters() % 8, 0);
        }
    }

    #[test]
    fn roots_come_from_components(spec in small_spec()) {
        let dims = spec.dims();
        let glue_min = glue_group(&spec).iter().filter(|g| !g.is_zero()).map(|g| g.min_norm_quarters(&dims)).min();
        prop_assume!(glue_min.is_none_or(|q| q > 8));
        let t = theta_by_cosets(&spec, cache()).unwrap();
        prop_assert_eq!(t.coeff_at_power(2).unwrap(), BigInt::from(spec.root_count()));
    }

    #[test]
    fn glue_group_is_elementary_abelian(spec in small_spec()) {
        let g = glue_group(&spec);
        prop_assert_eq!(g.len(), 1 << spec.k());
        for x in &g {
            prop_assert_eq!(GlueVector::of(&spec, x).norm_quarters() % 8, 0);
            for y in &g {
                prop_assert!(g.contains(&x.add(y)));
            }
        }
    }

    #[test]
    fn glued_lattice_is_even_unimodular(spec in small_spec()) {
        let r = check_even_unimodular(&spec);
        prop_assert!(r.passed(), "{}: {}", spec, r);
    }
}

#[test]
fn all_fours_give_half_h() {
    for l in 1..=4 {
        let spec = LatticeSpec::new(LatticeFamily::Even8m4, vec![0; 2 * l], 0).unwrap();
        let t = theta_by_cosets(&spec, cache()).unwrap();
        let half = cache().h(l as i64).unwrap().halve_exact().unwrap();
        assert!(t.agrees_with(&half), "l={l}");
    }
}
