//! The small-`k` theta formulas as printed, and the four rank-24 cases,
//! compared against the coset computation.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;

use super::cosets::theta_by_cosets;
use super::spec::LatticeSpec;
use super::LatticeError;
use crate::modforms::ModformCache;
use crate::qseries::{QExp, QSeries};
use crate::symexpand::{Factor, Monomial, Role, SymExpr, SymPattern, SymSlot};

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn lit(coeff: BigRational, delta_power: u32, factors: &[(Role, &[usize], i64)]) -> Monomial {
    Monomial {
        coeff,
        delta_power,
        factors: factors
            .iter()
            .map(|&(role, idx, shift)| Factor { role, indices: idx.iter().map(|i| i - 1).collect(), shift })
            .collect(),
    }
}

fn sym(slots: Vec<SymSlot>, coeff: BigRational, delta: u32) -> SymPattern {
    SymPattern::new(slots).with_prefactor(coeff).with_delta(delta)
}

use Role::{Rho, H};

/// The printed formula for `k` components, term by term as displayed.
/// Returns `None` for `k` outside `1..=6`.
pub fn printed_formula(k: usize) -> Option<SymExpr> {
    let mut e = SymExpr::new(k);
    match k {
        1 => e.push_literal(lit(q(1, 2), 0, &[(H, &[1], 0)])),
        2 => {
            e.push_literal(lit(q(1, 2), 0, &[(H, &[1, 2], 1)]));
            e.push_literal(lit(q(-64, 1), 1, &[(Rho, &[1], -1), (Rho, &[2], -1)]));
        }
        3 => {
            e.push_literal(lit(q(-1, 2), 0, &[(H, &[1, 2, 3], 0)]));
            e.push_literal(lit(q(1, 4), 0, &[(H, &[1], 0), (H, &[2, 3], 0)]));
            e.push_literal(lit(q(1, 4), 0, &[(H, &[2], 0), (H, &[1, 3], 0)]));
            e.push_literal(lit(q(1, 4), 0, &[(H, &[3], 0), (H, &[1, 2], 0)]));
            e.push_literal(lit(q(-1, 8), 0, &[(H, &[1], 0), (H, &[2], 0), (H, &[3], 0)]));
        }
        4 => {
            e.push_sym(sym(vec![SymSlot::rho(1, -1), SymSlot::rho(3, 0)], q(32, 1), 1));
            e.push_sym(sym(vec![SymSlot::h(2, 1), SymSlot::rho(1, -1), SymSlot::rho(1, -1)], q(-16, 1), 1));
            e.push_sym(sym(vec![SymSlot::h(2, 1), SymSlot::h(2, 1)], q(3, 16), 0));
            e.push_literal(lit(q(-10, 16), 0, &[(H, &[1, 2, 3, 4], 2)]));
        }
        5 => {
            // the operator before the third sym is missing in print; read as +
            e.push_sym(sym(vec![SymSlot::h(1, 0), SymSlot::h(2, 0), SymSlot::h(2, 0)], q(1, 32), 0));
            e.push_sym(sym(vec![SymSlot::h(1, 0), SymSlot::h(1, 0), SymSlot::h(3, 0)], q(-1, 32), 0));
            e.push_sym(sym(vec![SymSlot::h(1, 0), SymSlot::h(4, 0)], q(2, 32), 0));
            e.push_sym(sym(vec![SymSlot::h(2, 0), SymSlot::h(3, 0)], q(-1, 32), 0));
            e.push_literal(lit(q(-4, 32), 0, &[(H, &[1, 2, 4, 5], 0)]));
        }
        6 => {
            e.push_literal(lit(q(-118, 64), 0, &[(H, &[1, 2, 3, 4, 5, 6], 3)]));
            e.push_sym(sym(vec![SymSlot::h(2, 1), SymSlot::h(4, 2)], q(3, 64), 0));
            e.push_sym(sym(vec![SymSlot::h(2, 1), SymSlot::h(2, 1), SymSlot::h(2, 1)], q(1, 64), 0));
            e.push_sym(sym(vec![SymSlot::h(2, 1), SymSlot::rho(1, -1), SymSlot::rho(3, 0)], q(-4, 1), 1));
            e.push_sym(sym(vec![SymSlot::h(4, 2), SymSlot::rho(1, -1), SymSlot::rho(1, -1)], q(-4, 1), 1));
            e.push_sym(sym(vec![SymSlot::rho(1, -1), SymSlot::rho(5, 1)], q(56, 1), 1));
            e.push_sym(sym(vec![SymSlot::rho(3, 0), SymSlot::rho(3, 0)], q(20, 1), 1));
        }
        _ => return None,
    }
    Some(e)
}

/// Printed formulas for five and six components are reported, not asserted.
pub fn is_asserted(k: usize) -> bool {
    k <= 4
}

pub fn default_points(k: usize) -> Vec<Vec<i64>> {
    match k {
        1 => vec![vec![1], vec![2], vec![3]],
        2 => vec![vec![1, 1], vec![0, 0], vec![0, 2]],
        3 => vec![vec![1, 1, 1], vec![1, 1, 2], vec![1, 2, 3]],
        4 => vec![vec![0, 0, 0, 0], vec![0, 0, 1, 1], vec![1, 1, 1, 1], vec![0, 1, 1, 2]],
        5 => vec![vec![1, 1, 1, 1, 1], vec![1, 1, 2, 1, 1]],
        6 => vec![vec![0; 6], vec![0, 0, 0, 1, 1, 1], vec![1; 6]],
        _ => Vec::new(),
    }
}

#[derive(Clone, Debug)]
pub struct SpecializationRow {
    pub k: usize,
    pub m: Vec<i64>,
    pub asserted: bool,
    /// Evaluation failure of the printed formula, if any.
    pub error: Option<String>,
    /// `(exponent, printed formula, coset sum)` wherever they differ.
    pub diff: Vec<(QExp, BigInt, BigInt)>,
}

impl SpecializationRow {
    pub fn matched(&self) -> bool {
        self.error.is_none() && self.diff.is_empty()
    }
}

pub fn specialization_audit(k: usize, m: &[i64], cache: &ModformCache) -> Result<SpecializationRow, LatticeError> {
    let formula = printed_formula(k)
        .ok_or_else(|| LatticeError::InvalidSpec(format!("no printed formula for {k} components")))?;
    let spec = if k % 2 == 1 { LatticeSpec::odd(m)? } else { LatticeSpec::even(m)? };
    let oracle = theta_by_cosets(&spec, cache)?;
    let mut row = SpecializationRow { k, m: m.to_vec(), asserted: is_asserted(k), error: None, diff: Vec::new() };
    match formula.evaluate(m, cache) {
        Ok(value) => row.diff = value.diff(&oracle),
        Err(e) => row.error = Some(e.to_string()),
    }
    Ok(row)
}

/// All default points for `k = 1..=kmax`.
pub fn specialization_report(kmax: usize, cache: &ModformCache) -> Result<Vec<SpecializationRow>, LatticeError> {
    let mut rows = Vec::new();
    for k in 1..=kmax.min(6) {
        for m in default_points(k) {
            rows.push(specialization_audit(k, &m, cache)?);
        }
    }
    Ok(rows)
}

pub fn render_specializations(rows: &[SpecializationRow]) -> String {
    let mut out = String::new();
    for r in rows {
        let m: Vec<String> = r.m.iter().map(|x| x.to_string()).collect();
        let status = match (r.matched(), r.asserted) {
            (true, _) => "MATCH",
            (false, true) => "MISMATCH",
            (false, false) => "MISMATCH (informational)",
        };
        let _ = writeln!(out, "k={} m=({})\t{}\t{}", r.k, m.join(","), if r.asserted { "asserted" } else { "informational" }, status);
        if let Some(e) = &r.error {
            let _ = writeln!(out, "  error: {e}");
        }
        for (e, got, want) in &r.diff {
            let _ = writeln!(out, "  q^{e}: printed {got} coset sum {want}");
        }
    }
    out
}

#[derive(Clone, Debug)]
pub struct NiemeierRow {
    pub name: &'static str,
    pub spec: LatticeSpec,
    /// `c` in `E4^3 + c Δ24`.
    pub delta_coeff: i64,
    pub q2: BigInt,
    pub root_count: u64,
    pub diff: Vec<(QExp, BigInt, BigInt)>,
}

impl NiemeierRow {
    pub fn passed(&self) -> bool {
        self.diff.is_empty() && self.q2 == BigInt::from(self.root_count) && self.q2 == BigInt::from(720 + self.delta_coeff)
    }
}

pub fn niemeier_cases() -> Vec<(&'static str, LatticeSpec, i64)> {
    vec![
        ("D24", LatticeSpec::odd(&[3]).expect("valid"), 384),
        ("D12^2", LatticeSpec::even(&[1, 1]).expect("valid"), -192),
        ("D8^3", LatticeSpec::odd(&[1, 1, 1]).expect("valid"), -384),
        ("D6^4", LatticeSpec::four_block(&[0, 0, 0, 0], 1).expect("valid"), -480),
    ]
}

pub fn niemeier_audit(cache: &ModformCache) -> Result<Vec<NiemeierRow>, LatticeError> {
    let e3 = cache.e4().pow(3);
    niemeier_cases()
        .into_iter()
        .map(|(name, spec, c)| {
            let theta = theta_by_cosets(&spec, cache)?;
            let form: QSeries = &e3 + &cache.delta24().scale(&BigInt::from(c));
            Ok(NiemeierRow {
                name,
                q2: theta.coeff_at_power(2)?,
                root_count: spec.root_count(),
                diff: theta.diff(&form),
                spec,
                delta_coeff: c,
            })
        })
        .collect()
}

pub fn render_niemeier(rows: &[NiemeierRow]) -> String {
    let mut out = String::new();
    for r in rows {
        let sign = if r.delta_coeff < 0 { '-' } else { '+' };
        let _ = writeln!(
            out,
            "{}\t{}\tE4^3 {} {}*Delta24\tq^2 {} roots {}\t{}",
            r.name,
            r.spec,
            sign,
            r.delta_coeff.abs(),
            r.q2,
            r.root_count,
            if r.passed() { "PASS" } else { "FAIL" }
        );
        for (e, got, want) in &r.diff {
            let _ = writeln!(out, "  q^{e}: coset sum {got} formula {want}");
        }
    }
    out
}
