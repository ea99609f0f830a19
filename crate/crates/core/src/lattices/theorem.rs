//! Closed-form theta series of the glued lattices as weighted sym-sums of
//! `h_n`, `ρ_n` and `Δ24`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::spec::{LatticeFamily, LatticeSpec};
use super::LatticeError;
use crate::combinatorics::{pow_big, trinomial};
use crate::modforms::ModformCache;
use crate::qseries::QSeries;
use crate::symexpand::{SymExpr, SymPattern, SymSlot};

/// How to read the range of the `Δ24 ρ ρ h` sum for an even number of
/// components.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum RangeReading {
    /// `1 <= j1, j2` and `j1 + j2 <= l - 2`, as stated with the theorem.
    #[default]
    Displayed,
    /// `0 <= j1 <= j2` and `j1 + j2 <= l - 2`, as reached at the end of the proof.
    Derivation,
}

impl std::str::FromStr for RangeReading {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "displayed" => Ok(RangeReading::Displayed),
            "derivation" => Ok(RangeReading::Derivation),
            other => Err(format!("unknown range reading {other:?}")),
        }
    }
}

fn rat(n: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(n.into())
}

fn sym(slots: Vec<SymSlot>, coeff: BigRational) -> SymPattern {
    SymPattern::new(slots).with_prefactor(coeff)
}

fn s(n: i64) -> usize {
    n as usize
}

/// Theorem for `k = 2l+1` components `D_{8 m_i}`.
fn odd_expr(l: i64) -> SymExpr {
    let k = 2 * l + 1;
    let pre = BigRational::new(BigInt::one(), pow_big(2, (2 * l + 1) as u32));
    let mut e = SymExpr::new(s(k));
    for j1 in 1..=l {
        for j2 in j1..=l - j1 {
            e.push_sym(sym(vec![SymSlot::h(s(2 * j1), 0), SymSlot::h(s(2 * j2), 0), SymSlot::h(s(k - 2 * j1 - 2 * j2), 0)], pre.clone()));
        }
    }
    for j1 in 0..=l {
        for j2 in j1..=l {
            if j2 > l - j1 - j2 - 1 {
                continue;
            }
            e.push_sym(sym(
                vec![SymSlot::h(s(2 * j1 + 1), 0), SymSlot::h(s(2 * j2 + 1), 0), SymSlot::h(s(k - 2 * j1 - 2 * j2 - 2), 0)],
                -pre.clone(),
            ));
        }
    }
    for j in 1..=l {
        let c = rat(3 - pow_big(4, (l - j) as u32));
        e.push_sym(sym(vec![SymSlot::h(s(2 * j), 0), SymSlot::h(s(k - 2 * j), 0)], c * &pre));
    }
    let mut tri = BigInt::zero();
    for j1 in 0..l {
        for j2 in 0..l - j1 {
            tri += trinomial(k, 2 * j1 + 1, 2 * j2 + 1);
        }
    }
    let constant = rat(4 - 3 * pow_big(4, l as u32)) + BigRational::new(2 * tri, 3.into());
    e.push_sym(sym(vec![SymSlot::h(s(k), 0)], constant * &pre));
    e
}

/// Theorem for `k = 2l` components `D_{8 m_i + 4}`.
fn even_expr(l: i64, reading: RangeReading) -> SymExpr {
    let k = 2 * l;
    let pre = BigRational::new(BigInt::one(), pow_big(2, (2 * l) as u32));
    let delta = pre.clone() * rat(256);
    let mut e = SymExpr::new(s(k));
    for j1 in 1..=l {
        for j2 in j1..=l {
            if j2 > l - j1 - j2 {
                continue;
            }
            e.push_sym(sym(
                vec![
                    SymSlot::h(s(2 * j1), j1),
                    SymSlot::h(s(2 * j2), j2),
                    SymSlot::h(s(k - 2 * j1 - 2 * j2), l - j1 - j2),
                ],
                pre.clone(),
            ));
        }
    }
    let pairs: Vec<(i64, i64)> = match reading {
        RangeReading::Displayed => (1..=l).flat_map(|a| (1..=l).map(move |b| (a, b))).filter(|(a, b)| a + b <= l - 2).collect(),
        RangeReading::Derivation => (0..=l).flat_map(|a| (a..=l).map(move |b| (a, b))).filter(|(a, b)| a + b <= l - 2).collect(),
    };
    for (j1, j2) in pairs {
        e.push_sym(
            sym(
                vec![
                    SymSlot::rho(s(2 * j1 + 1), j1 - 1),
                    SymSlot::rho(s(2 * j2 + 1), j2 - 1),
                    SymSlot::h(s(k - 2 * j1 - 2 * j2 - 2), l - j1 - j2 - 1),
                ],
                -delta.clone(),
            )
            .with_delta(1),
        );
    }
    for j in 1..=l / 2 {
        e.push_sym(sym(vec![SymSlot::h(s(2 * j), j), SymSlot::h(s(k - 2 * j), l - j)], rat(3) * &pre));
    }
    for j in 0..=(l - 1) / 2 {
        let c = pow_big(4, j as u32) + pow_big(4, (l - j - 1) as u32) - 3;
        e.push_sym(
            sym(vec![SymSlot::rho(s(2 * j + 1), j - 1), SymSlot::rho(s(k - 2 * j - 1), l - j - 2)], rat(c) * &delta)
                .with_delta(1),
        );
    }
    let mut tri = BigInt::zero();
    for j1 in 0..=l {
        for j2 in 0..=l - j1 {
            tri += trinomial(k, 2 * j1, 2 * j2);
        }
    }
    let constant = rat(4) - BigRational::new(2 * tri, 3.into());
    e.push_sym(sym(vec![SymSlot::h(s(k), l)], constant * &pre));
    e
}

/// Theorem for the four-block lattice.
fn four_block_expr(epsilon: i64) -> SymExpr {
    let mut e = SymExpr::new(4);
    e.push_sym(sym(vec![SymSlot::h(4, 2 * epsilon + 1)], BigRational::new(1.into(), 2.into())));
    e.push_sym(sym(vec![SymSlot::rho(2, epsilon - 1), SymSlot::rho(2, epsilon - 1)], rat(-32)).with_delta(1));
    e
}

/// The sym expression for the spec's family and size.
pub fn theorem_expr(spec: &LatticeSpec, reading: RangeReading) -> SymExpr {
    let l = spec.ell() as i64;
    match spec.family() {
        LatticeFamily::Odd8m => odd_expr(l),
        LatticeFamily::Even8m4 => even_expr(l, reading),
        LatticeFamily::FourBlock => four_block_expr(spec.epsilon() as i64),
    }
}

/// Weight every summand of the theorem must carry.
pub fn expected_weight(spec: &LatticeSpec) -> i64 {
    let total: i64 = spec.m().iter().sum();
    match spec.family() {
        LatticeFamily::Odd8m => total,
        LatticeFamily::Even8m4 => total + spec.ell() as i64,
        LatticeFamily::FourBlock => total + 2 * spec.epsilon() as i64 + 1,
    }
}

pub fn theta_by_theorem_with(
    spec: &LatticeSpec,
    cache: &ModformCache,
    reading: RangeReading,
) -> Result<QSeries, LatticeError> {
    Ok(theorem_expr(spec, reading).evaluate(spec.m(), cache)?)
}

/// Theorem value with the summation ranges exactly as stated.
pub fn theta_by_theorem(spec: &LatticeSpec, cache: &ModformCache) -> Result<QSeries, LatticeError> {
    theta_by_theorem_with(spec, cache, RangeReading::Displayed)
}
