//! Theta series by listing lattice vectors. Each component coset is counted
//! coordinate by coordinate; no theta function identities are used.

use num_bigint::BigInt;

use super::cosets::assemble;
use super::glue::Label;
use super::spec::LatticeSpec;
use super::LatticeError;
use crate::qseries::{QExp, QSeries};

/// Upper limit on the number of vectors visited for one component coset.
pub const VISIT_LIMIT: u128 = 100_000_000;

/// Number of vectors of `Z^n` (or `(½+Z)^n`) with norm below `trunc`,
/// ignoring the parity condition. Used only to refuse infeasible requests.
pub fn visit_estimate(half: bool, n: u32, trunc: QExp) -> u128 {
    let t = trunc.quarters() as usize;
    let mut counts = vec![0u128; t.max(1)];
    if t == 0 {
        return 0;
    }
    counts[0] = 1;
    let values = coordinate_values(half, trunc);
    for _ in 0..n {
        let mut next = vec![0u128; t];
        for (q, &c) in counts.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for &d in &values {
                let nq = q + (d * d) as usize;
                if nq < t {
                    next[nq] = next[nq].saturating_add(c);
                }
            }
        }
        counts = next;
    }
    counts.iter().fold(0u128, |a, &c| a.saturating_add(c))
}

/// Doubled coordinate values whose square lies below the truncation.
fn coordinate_values(half: bool, trunc: QExp) -> Vec<i64> {
    let t = trunc.quarters() as i64;
    let start = if half { 1 } else { 0 };
    let mut out = Vec::new();
    let mut d = start;
    while d * d < t {
        out.push(d);
        if d != 0 {
            out.push(-d);
        }
        d += 2;
    }
    out
}

/// Count the vectors of one coset of `D_n` by norm.
pub fn enumerate_component(label: Label, n: u32, trunc: QExp) -> Result<QSeries, LatticeError> {
    let half = matches!(label, Label::X1 | Label::X3);
    let estimate = visit_estimate(half, n, trunc);
    if estimate > VISIT_LIMIT {
        return Err(LatticeError::BoundsTooLarge { rank: n, bound: trunc.to_string(), estimate });
    }
    // O, X1: even coordinate parity sum; X2, X3: odd
    let want_odd = matches!(label, Label::X2 | Label::X3);
    let t = trunc.quarters() as i64;
    let values = coordinate_values(half, trunc);
    let floor = if half { 1 } else { 0 };
    let mut counts = vec![0u64; t.max(0) as usize];
    let mut walk = Walk { n: n as i64, t, floor, values: &values, half, want_odd, counts: &mut counts };
    walk.go(0, 0, false);
    Ok(QSeries::from_terms(
        counts.iter().enumerate().filter(|(_, &c)| c > 0).map(|(q, &c)| (QExp(q as u32), BigInt::from(c))),
        trunc,
    ))
}

struct Walk<'a> {
    n: i64,
    t: i64,
    /// smallest possible square of a coordinate
    floor: i64,
    values: &'a [i64],
    half: bool,
    want_odd: bool,
    counts: &'a mut Vec<u64>,
}

impl Walk<'_> {
    fn go(&mut self, pos: i64, norm: i64, odd: bool) {
        if pos == self.n {
            if odd == self.want_odd {
                self.counts[norm as usize] += 1;
            }
            return;
        }
        let rest = (self.n - pos - 1) * self.floor;
        for i in 0..self.values.len() {
            let d = self.values[i];
            let nn = norm + d * d;
            if nn + rest >= self.t {
                continue;
            }
            // integer part of the coordinate: d/2, or (d-1)/2 in half-integer cosets
            let c = if self.half { (d - 1).div_euclid(2) } else { d / 2 };
            self.go(pos + 1, nn, odd ^ (c.rem_euclid(2) == 1));
        }
    }
}

pub fn theta_by_enumeration(spec: &LatticeSpec, trunc: QExp) -> Result<QSeries, LatticeError> {
    assemble(spec, trunc, |label, n| enumerate_component(label, n, trunc))
}
