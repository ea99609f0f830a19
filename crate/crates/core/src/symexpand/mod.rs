//! The `sym{…}` operator: a representative product of `h`/`ρ` factors whose
//! index sums are spread over the free variables `m_1..m_k` in every distinct way.

pub mod counting;

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::modforms::{ModformCache, ModformError};
use crate::qseries::QSeries;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SymError {
    #[error("block sizes sum to {blocks} but {k} indices were supplied")]
    SizeMismatch { blocks: usize, k: usize },
    #[error("{role} index {index} is not admissible")]
    InadmissibleIndex { role: Role, index: i64 },
    #[error("weighted sum does not reduce to an integer series (denominator {0})")]
    NonIntegerResult(BigInt),
    #[error("block of size zero")]
    EmptyBlock,
    #[error(transparent)]
    Modform(#[from] ModformError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Role {
    H,
    Rho,
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Role::H => "h",
            Role::Rho => "rho",
        })
    }
}

/// One factor of the representative term: `role_{m_i + … + m_j + shift}` with
/// `block_size` indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SymSlot {
    pub role: Role,
    pub block_size: usize,
    pub shift: i64,
}

impl SymSlot {
    pub fn h(block_size: usize, shift: i64) -> Self {
        SymSlot { role: Role::H, block_size, shift }
    }

    pub fn rho(block_size: usize, shift: i64) -> Self {
        SymSlot { role: Role::Rho, block_size, shift }
    }
}

/// `prefactor * Δ24^delta_power * sym{∏ slots}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymPattern {
    pub slots: Vec<SymSlot>,
    pub delta_power: u32,
    pub prefactor: BigRational,
}

impl SymPattern {
    pub fn new(slots: Vec<SymSlot>) -> Self {
        SymPattern { slots, delta_power: 0, prefactor: BigRational::one() }
    }

    pub fn with_delta(mut self, power: u32) -> Self {
        self.delta_power = power;
        self
    }

    pub fn with_prefactor(mut self, c: BigRational) -> Self {
        self.prefactor = c;
        self
    }

    pub fn arity(&self) -> usize {
        self.slots.iter().map(|s| s.block_size).sum()
    }

    /// `k! / (∏ sizes! · ∏ multiplicities!)`.
    pub fn assignment_count(&self) -> BigInt {
        use crate::combinatorics::factorial;
        let mut den = BigInt::one();
        let mut mult: BTreeMap<SymSlot, u64> = BTreeMap::new();
        for s in &self.slots {
            den *= factorial(s.block_size as u64);
            *mult.entry(*s).or_default() += 1;
        }
        for m in mult.values() {
            den *= factorial(*m);
        }
        factorial(self.arity() as u64) / den
    }

    /// Every summand of the sym-sum as a literal monomial.
    pub fn expand(&self, k: usize) -> Result<Vec<Monomial>, SymError> {
        Ok(enumerate_assignments(self, k)?
            .into_iter()
            .map(|blocks| Monomial {
                coeff: self.prefactor.clone(),
                delta_power: self.delta_power,
                factors: self
                    .slots
                    .iter()
                    .zip(blocks)
                    .map(|(s, indices)| Factor { role: s.role, indices, shift: s.shift })
                    .collect(),
            })
            .collect())
    }
}

impl fmt::Display for SymPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.prefactor)?;
        if self.delta_power > 0 {
            write!(f, " * Delta24^{}", self.delta_power)?;
        }
        // show the representative term on consecutive indices
        let mut next = 0;
        let factors: Vec<Factor> = self
            .slots
            .iter()
            .map(|s| {
                let indices = (next..next + s.block_size).collect();
                next += s.block_size;
                Factor { role: s.role, indices, shift: s.shift }
            })
            .collect();
        write!(f, " * sym{{{}}}", join_factors(&factors))
    }
}

/// Set partitions of `{0..k}` into the pattern's blocks, one list of sorted
/// indices per slot. Identical slots are unordered: the minimum elements of
/// their blocks increase in slot order.
pub fn enumerate_assignments(pattern: &SymPattern, k: usize) -> Result<Vec<Vec<Vec<usize>>>, SymError> {
    if pattern.slots.iter().any(|s| s.block_size == 0) {
        return Err(SymError::EmptyBlock);
    }
    let blocks = pattern.arity();
    if blocks != k {
        return Err(SymError::SizeMismatch { blocks, k });
    }
    let prev_twin: Vec<Option<usize>> = (0..pattern.slots.len())
        .map(|i| (0..i).rev().find(|&j| pattern.slots[j] == pattern.slots[i]))
        .collect();
    let mut out = Vec::new();
    let mut chosen: Vec<Vec<usize>> = Vec::with_capacity(pattern.slots.len());
    let remaining: Vec<usize> = (0..k).collect();
    assign(&pattern.slots, &prev_twin, &remaining, &mut chosen, &mut out);
    Ok(out)
}

fn assign(
    slots: &[SymSlot],
    prev_twin: &[Option<usize>],
    remaining: &[usize],
    chosen: &mut Vec<Vec<usize>>,
    out: &mut Vec<Vec<Vec<usize>>>,
) {
    let s = chosen.len();
    if s == slots.len() {
        out.push(chosen.clone());
        return;
    }
    let floor = prev_twin[s].map(|t| chosen[t][0]);
    let mut pick = Vec::with_capacity(slots[s].block_size);
    combinations(remaining, slots[s].block_size, 0, &mut pick, &mut |block| {
        if floor.is_some_and(|f| block[0] <= f) {
            return;
        }
        let rest: Vec<usize> = remaining.iter().copied().filter(|i| !block.contains(i)).collect();
        chosen.push(block.to_vec());
        assign(slots, prev_twin, &rest, chosen, out);
        chosen.pop();
    });
}

fn combinations(pool: &[usize], size: usize, start: usize, pick: &mut Vec<usize>, visit: &mut dyn FnMut(&[usize])) {
    if pick.len() == size {
        visit(pick);
        return;
    }
    let need = size - pick.len();
    for i in start..=pool.len().saturating_sub(need) {
        if pool.len() - i < need {
            break;
        }
        pick.push(pool[i]);
        combinations(pool, size, i + 1, pick, visit);
        pick.pop();
    }
}

/// `role_{Σ_{i ∈ indices} m_i + shift}`; indices are 0-based.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Factor {
    pub role: Role,
    pub indices: Vec<usize>,
    pub shift: i64,
}

impl Factor {
    pub fn index_value(&self, m: &[i64]) -> i64 {
        self.indices.iter().map(|&i| m[i]).sum::<i64>() + self.shift
    }
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sum: Vec<String> = self.indices.iter().map(|i| format!("m{}", i + 1)).collect();
        write!(f, "{}[{}", self.role, sum.join("+"))?;
        match self.shift.cmp(&0) {
            std::cmp::Ordering::Greater => write!(f, "+{}", self.shift)?,
            std::cmp::Ordering::Less => write!(f, "{}", self.shift)?,
            std::cmp::Ordering::Equal => {}
        }
        f.write_str("]")
    }
}

fn join_factors(factors: &[Factor]) -> String {
    factors.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("*")
}

/// `coeff * Δ24^delta_power * ∏ factors`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Monomial {
    pub coeff: BigRational,
    pub delta_power: u32,
    pub factors: Vec<Factor>,
}

impl Monomial {
    /// Grading with `wt Δ24 = 3`, `wt h_n = wt ρ_n = n`.
    pub fn weight(&self, m: &[i64]) -> i64 {
        3 * self.delta_power as i64 + self.factors.iter().map(|f| f.index_value(m)).sum::<i64>()
    }

    /// Order-independent key: equal keys mean the same product of functions.
    pub fn shape(&self) -> (u32, Vec<Factor>) {
        let mut fs: Vec<Factor> = self.factors.clone();
        fs.sort();
        (self.delta_power, fs)
    }

    /// The product without its coefficient.
    pub fn series(&self, m: &[i64], cache: &ModformCache) -> Result<QSeries, SymError> {
        let mut acc = if self.delta_power == 0 {
            QSeries::one(cache.trunc())
        } else {
            (*cache.delta24_pow(self.delta_power)).clone()
        };
        for f in &self.factors {
            let n = f.index_value(m);
            let s = match f.role {
                Role::H if n >= 0 => cache.h(n)?,
                Role::Rho if n >= -1 => cache.rho(n)?,
                role => return Err(SymError::InadmissibleIndex { role, index: n }),
            };
            if s.is_zero() {
                return Ok(QSeries::zero(cache.trunc()));
            }
            acc = acc.mul(&s);
        }
        Ok(acc.truncate(cache.trunc()))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.coeff)?;
        if self.delta_power > 0 {
            write!(f, " * Delta24^{}", self.delta_power)?;
        }
        if !self.factors.is_empty() {
            write!(f, " * {}", join_factors(&self.factors))?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Term {
    Sym(SymPattern),
    Literal(Monomial),
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Sym(p) => p.fmt(f),
            Term::Literal(m) => m.fmt(f),
        }
    }
}

/// A linear combination of sym-sums and literal monomials in `k` variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymExpr {
    pub k: usize,
    pub terms: Vec<Term>,
}

impl SymExpr {
    pub fn new(k: usize) -> Self {
        SymExpr { k, terms: Vec::new() }
    }

    pub fn push_sym(&mut self, p: SymPattern) {
        if !p.prefactor.is_zero() {
            self.terms.push(Term::Sym(p));
        }
    }

    pub fn push_literal(&mut self, m: Monomial) {
        if !m.coeff.is_zero() {
            self.terms.push(Term::Literal(m));
        }
    }

    pub fn monomials(&self) -> Result<Vec<Monomial>, SymError> {
        let mut out = Vec::new();
        for t in &self.terms {
            match t {
                Term::Sym(p) => out.extend(p.expand(self.k)?),
                Term::Literal(m) => out.push(m.clone()),
            }
        }
        Ok(out)
    }

    /// Summands whose weight differs from `expected`, with their weights.
    pub fn weight_violations(&self, m: &[i64], expected: i64) -> Result<Vec<(Monomial, i64)>, SymError> {
        Ok(self
            .monomials()?
            .into_iter()
            .filter_map(|mono| {
                let w = mono.weight(m);
                (w != expected).then_some((mono, w))
            })
            .collect())
    }

    pub fn evaluate(&self, m: &[i64], cache: &ModformCache) -> Result<QSeries, SymError> {
        if m.len() != self.k {
            return Err(SymError::SizeMismatch { blocks: self.k, k: m.len() });
        }
        combine(&self.monomials()?, m, cache)
    }
}

impl fmt::Display for SymExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str("\n")?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

/// `Σ coeff · series` over the monomials; the result must be integral.
fn combine(monos: &[Monomial], m: &[i64], cache: &ModformCache) -> Result<QSeries, SymError> {
    let den = monos.iter().fold(BigInt::one(), |acc, mono| acc.lcm(mono.coeff.denom()));
    let mut total = QSeries::zero(cache.trunc());
    for mono in monos {
        let c = mono.coeff.numer() * (&den / mono.coeff.denom());
        if c.is_zero() {
            continue;
        }
        total = &total + &mono.series(m, cache)?.scale(&c);
    }
    total.div_scalar_exact(&den.abs()).map_err(|_| SymError::NonIntegerResult(den))
}

/// `sym_eval`: the weighted sym-sum of one pattern at the point `m`.
pub fn sym_eval(pattern: &SymPattern, m: &[i64], cache: &ModformCache) -> Result<QSeries, SymError> {
    combine(&pattern.expand(m.len())?, m, cache)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn brute_force(pattern: &SymPattern, k: usize) -> BTreeSet<Vec<(SymSlot, Vec<usize>)>> {
        // all ordered labellings of 0..k by slot number, then dedup by the multiset
        let sizes: Vec<usize> = pattern.slots.iter().map(|s| s.block_size).collect();
        let mut out = BTreeSet::new();
        let mut labels = vec![0usize; k];
        loop {
            let mut counts = vec![0usize; sizes.len()];
            for &l in &labels {
                counts[l] += 1;
            }
            if counts == sizes {
                let mut key: Vec<(SymSlot, Vec<usize>)> = pattern
                    .slots
                    .iter()
                    .enumerate()
                    .map(|(s, slot)| (*slot, (0..k).filter(|&i| labels[i] == s).collect()))
                    .collect();
                key.sort();
                out.insert(key);
            }
            let mut i = 0;
            loop {
                if i == k {
                    return out;
                }
                labels[i] += 1;
                if labels[i] < sizes.len() {
                    break;
                }
                labels[i] = 0;
                i += 1;
            }
        }
    }

    #[test]
    fn worked_example_counts() {
        let p = SymPattern::new(vec![SymSlot::h(2, 1), SymSlot::h(2, 1)]);
        assert_eq!(enumerate_assignments(&p, 4).unwrap().len(), 3);
        let p = SymPattern::new(vec![SymSlot::h(2, 1), SymSlot::rho(1, -1), SymSlot::rho(1, -1)]);
        assert_eq!(enumerate_assignments(&p, 4).unwrap().len(), 6);
        let p = SymPattern::new(vec![SymSlot::h(5, 0)]);
        assert_eq!(enumerate_assignments(&p, 5).unwrap().len(), 1);
    }

    #[test]
    fn size_mismatch() {
        let p = SymPattern::new(vec![SymSlot::h(2, 0)]);
        assert_eq!(enumerate_assignments(&p, 3), Err(SymError::SizeMismatch { blocks: 2, k: 3 }));
    }

    #[test]
    fn different_shifts_do_not_collapse() {
        let p = SymPattern::new(vec![SymSlot::h(2, 1), SymSlot::h(2, 2)]);
        assert_eq!(enumerate_assignments(&p, 4).unwrap().len(), 6);
    }

    #[test]
    fn matches_brute_force() {
        let patterns = vec![
            vec![SymSlot::h(2, 1), SymSlot::h(2, 1), SymSlot::h(2, 1)],
            vec![SymSlot::h(1, 0), SymSlot::h(2, 0), SymSlot::h(2, 0)],
            vec![SymSlot::rho(1, -1), SymSlot::rho(3, 0), SymSlot::h(2, 1)],
            vec![SymSlot::h(1, 0), SymSlot::h(1, 0), SymSlot::h(1, 0), SymSlot::h(4, 0)],
            vec![SymSlot::rho(1, 0), SymSlot::h(1, 0), SymSlot::rho(1, 0), SymSlot::h(1, 0)],
        ];
        for slots in patterns {
            let p = SymPattern::new(slots);
            let k = p.arity();
            let fast = enumerate_assignments(&p, k).unwrap();
            let brute = brute_force(&p, k);
            assert_eq!(fast.len(), brute.len());
            assert_eq!(BigInt::from(fast.len()), p.assignment_count());
            let fast_keys: BTreeSet<_> = fast
                .into_iter()
                .map(|blocks| {
                    let mut key: Vec<_> = p.slots.iter().copied().zip(blocks).collect();
                    key.sort();
                    key
                })
                .collect();
            assert_eq!(fast_keys, brute);
        }
    }

    #[test]
    fn rendering() {
        let p = SymPattern::new(vec![SymSlot::h(2, 1), SymSlot::rho(1, -1), SymSlot::rho(1, -1)]);
        let monos = p.expand(4).unwrap();
        assert_eq!(join_factors(&monos[0].factors), "h[m1+m2+1]*rho[m3-1]*rho[m4-1]");
        assert_eq!(p.to_string(), "1 * sym{h[m1+m2+1]*rho[m3-1]*rho[m4-1]}");
    }

    #[test]
    fn evaluation_examples() {
        let cache = ModformCache::with_order(8).unwrap();
        let e4 = cache.e4();
        let p = SymPattern::new(vec![SymSlot::h(2, 1), SymSlot::h(2, 1)]);
        let got = sym_eval(&p, &[0, 0, 0, 0], &cache).unwrap();
        assert!(got.agrees_with(&e4.mul(&e4).scale(&BigInt::from(12))));

        let p = SymPattern::new(vec![SymSlot::h(2, 1), SymSlot::rho(1, -1), SymSlot::rho(1, -1)]);
        let got = sym_eval(&p, &[1, 1, 1, 1], &cache).unwrap();
        let e3 = e4.pow(3);
        let d = cache.delta24().scale(&BigInt::from(256));
        // six summands, each h_3 * rho_0^2 = 9 h_3
        let want = (&e3.scale(&BigInt::from(2)) + &d.scale(&BigInt::from(3))).scale(&BigInt::from(54));
        assert!(got.agrees_with(&want));

        let p = SymPattern::new(vec![SymSlot::h(3, 0)]);
        let got = sym_eval(&p, &[1, 0, 2], &cache).unwrap();
        assert!(got.agrees_with(&cache.h(3).unwrap()));
    }

    #[test]
    fn half_integral_sum_is_rejected() {
        let cache = ModformCache::with_order(4).unwrap();
        let p = SymPattern::new(vec![SymSlot::h(1, 0)]).with_prefactor(BigRational::new(1.into(), 7.into()));
        assert!(matches!(sym_eval(&p, &[1], &cache), Err(SymError::NonIntegerResult(_))));
    }
}
