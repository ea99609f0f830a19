//! Truncated power series in the nome `q` with exact integer coefficients.
//!
//! Exponents live on a quarter-integer grid: a [`QExp`] stores the exponent
//! multiplied by four, so `q^(1/4)` is `QExp(1)` and `q^2` is `QExp(8)`.
//! A [`QSeries`] is only known strictly below its truncation point and every
//! operation propagates the weakest truncation that is still honest.
//!
//! Truncation rules:
//!
//! * `add`/`sub`: `min(a.trunc, b.trunc)`.
//! * `mul`: `min(a.trunc + val(b), b.trunc + val(a))`, where `val(x)` is the
//!   lowest stored exponent of `x` (or `x.trunc` when `x` is the zero series).
//!   When both valuations are zero this is `min(a.trunc, b.trunc)`.
//! * `div_exact`: `min(num.trunc - val(den), den.trunc + val(num) - 2 val(den))`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// An exponent of `q`, stored in quarters.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct QExp(pub u32);

impl QExp {
    pub const ZERO: QExp = QExp(0);

    /// The exponent `q^n` for an integer power `n`.
    pub fn from_power(n: u32) -> Self {
        QExp(4 * n)
    }

    pub fn quarters(self) -> u32 {
        self.0
    }

    /// Integer power of `q` when the exponent is integral.
    pub fn as_integer_power(self) -> Option<u32> {
        self.0.is_multiple_of(4).then_some(self.0 / 4)
    }
}

impl fmt::Display for QExp {
    /// Exact decimal form: `2`, `0.25`, `2.5`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let whole = self.0 / 4;
        match self.0 % 4 {
            0 => write!(f, "{whole}"),
            1 => write!(f, "{whole}.25"),
            2 => write!(f, "{whole}.5"),
            _ => write!(f, "{whole}.75"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeriesError {
    #[error("quotient is not an integer series (first failure at exponent {0})")]
    NotDivisible(QExp),
    #[error("division by the zero series")]
    DivisionByZero,
    #[error("coefficient at {exp} requested but series is only known below {trunc}")]
    BeyondTruncation { exp: QExp, trunc: QExp },
    #[error("odd coefficient at exponent {0}; cannot halve exactly")]
    OddCoefficient(QExp),
    #[error("quotient would need a negative exponent")]
    NegativeExponent,
    #[error("malformed series text: {0}")]
    Parse(String),
}

/// A truncated `q`-series with arbitrary-precision integer coefficients.
///
/// Stored sparsely; zero coefficients are never kept and every stored
/// exponent is below `trunc`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QSeries {
    terms: BTreeMap<u32, BigInt>,
    trunc: u32,
}

impl QSeries {
    pub fn zero(trunc: QExp) -> Self {
        QSeries { terms: BTreeMap::new(), trunc: trunc.0 }
    }

    pub fn constant(c: impl Into<BigInt>, trunc: QExp) -> Self {
        Self::from_terms([(QExp::ZERO, c.into())], trunc)
    }

    pub fn one(trunc: QExp) -> Self {
        Self::constant(1, trunc)
    }

    /// Builds a normalized series; repeated exponents are summed and
    /// anything at or beyond `trunc` is dropped.
    pub fn from_terms<I, C>(pairs: I, trunc: QExp) -> Self
    where
        I: IntoIterator<Item = (QExp, C)>,
        C: Into<BigInt>,
    {
        let mut terms: BTreeMap<u32, BigInt> = BTreeMap::new();
        for (e, c) in pairs {
            if e.0 >= trunc.0 {
                continue;
            }
            *terms.entry(e.0).or_insert_with(BigInt::zero) += c.into();
        }
        terms.retain(|_, c| !c.is_zero());
        QSeries { terms, trunc: trunc.0 }
    }

    pub fn trunc(&self) -> QExp {
        QExp(self.trunc)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Lowest exponent with a nonzero coefficient, or `None` for the zero series.
    pub fn min_exp(&self) -> Option<QExp> {
        self.terms.keys().next().map(|&e| QExp(e))
    }

    /// Valuation used by the truncation rules: `min_exp`, or `trunc` if zero.
    fn valuation(&self) -> u32 {
        self.terms.keys().next().copied().unwrap_or(self.trunc)
    }

    pub fn terms(&self) -> impl Iterator<Item = (QExp, &BigInt)> + '_ {
        self.terms.iter().map(|(&e, c)| (QExp(e), c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, e: QExp) -> Result<BigInt, SeriesError> {
        if e.0 >= self.trunc {
            return Err(SeriesError::BeyondTruncation { exp: e, trunc: self.trunc() });
        }
        Ok(self.terms.get(&e.0).cloned().unwrap_or_default())
    }

    /// Coefficient of `q^n` for integral `n`.
    pub fn coeff_at_power(&self, n: u32) -> Result<BigInt, SeriesError> {
        self.coeff(QExp::from_power(n))
    }

    /// Forget everything at or above `trunc` (no-op if already coarser).
    pub fn truncate(&self, trunc: QExp) -> QSeries {
        if trunc.0 >= self.trunc {
            return self.clone();
        }
        let terms = self.terms.range(..trunc.0).map(|(&e, c)| (e, c.clone())).collect();
        QSeries { terms, trunc: trunc.0 }
    }

    pub fn scale(&self, k: &BigInt) -> QSeries {
        if k.is_zero() {
            return QSeries::zero(self.trunc());
        }
        let terms = self.terms.iter().map(|(&e, c)| (e, c * k)).collect();
        QSeries { terms, trunc: self.trunc }
    }

    pub fn mul(&self, other: &QSeries) -> QSeries {
        let trunc = self
            .trunc
            .saturating_add(other.valuation())
            .min(other.trunc.saturating_add(self.valuation()));
        if self.is_zero() || other.is_zero() {
            return QSeries::zero(QExp(trunc));
        }
        // dense accumulator over the result window
        let base = self.valuation() + other.valuation();
        if base >= trunc {
            return QSeries::zero(QExp(trunc));
        }
        let width = (trunc - base) as usize;
        let mut acc: Vec<BigInt> = vec![BigInt::zero(); width];
        let rhs: Vec<(u32, &BigInt)> = other.terms.iter().map(|(&e, c)| (e, c)).collect();
        for (&ea, ca) in &self.terms {
            for &(eb, cb) in &rhs {
                let e = ea + eb;
                if e >= trunc {
                    break;
                }
                acc[(e - base) as usize] += ca * cb;
            }
        }
        let terms = acc
            .into_iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (base + i as u32, c))
            .collect();
        QSeries { terms, trunc }
    }

    /// `self^n` by repeated squaring. `pow(0)` is the constant 1 with the
    /// truncation of `self`.
    pub fn pow(&self, mut n: u32) -> QSeries {
        let mut result: Option<QSeries> = None;
        let mut base = self.clone();
        while n > 0 {
            if n & 1 == 1 {
                result = Some(match result {
                    None => base.clone(),
                    Some(r) => r.mul(&base),
                });
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base);
            }
        }
        result.unwrap_or_else(|| QSeries::one(self.trunc()))
    }

    /// Exact quotient `num / den` by long division from the lowest exponent.
    pub fn div_exact(&self, den: &QSeries) -> Result<QSeries, SeriesError> {
        let (&vd, lead) = den.terms.iter().next().ok_or(SeriesError::DivisionByZero)?;
        let vn = self.valuation();
        if !self.is_zero() && vn < vd {
            return Err(SeriesError::NegativeExponent);
        }
        let qtrunc = self
            .trunc
            .saturating_sub(vd)
            .min((den.trunc + vn).saturating_sub(2 * vd));
        let limit = qtrunc + vd;
        let mut rem: BTreeMap<u32, BigInt> = self.terms.range(..limit).map(|(&e, c)| (e, c.clone())).collect();
        let mut quotient = BTreeMap::new();
        while let Some((&e, r)) = rem.iter().next() {
            let qe = e - vd;
            if !r.is_multiple_of(lead) {
                return Err(SeriesError::NotDivisible(QExp(qe)));
            }
            let q = r / lead;
            for (&f, d) in &den.terms {
                let target = qe + f;
                if target >= limit {
                    break;
                }
                let slot = rem.entry(target).or_insert_with(BigInt::zero);
                *slot -= &q * d;
                if slot.is_zero() {
                    rem.remove(&target);
                }
            }
            quotient.insert(qe, q);
        }
        Ok(QSeries { terms: quotient, trunc: qtrunc })
    }

    /// Divide every coefficient by `d`, which must divide each one exactly.
    pub fn div_scalar_exact(&self, d: &BigInt) -> Result<QSeries, SeriesError> {
        if d.is_zero() {
            return Err(SeriesError::DivisionByZero);
        }
        let mut terms = BTreeMap::new();
        for (&e, c) in &self.terms {
            let (q, r) = c.div_rem(d);
            if !r.is_zero() {
                return Err(SeriesError::NotDivisible(QExp(e)));
            }
            terms.insert(e, q);
        }
        Ok(QSeries { terms, trunc: self.trunc })
    }

    /// Coefficientwise division by two.
    pub fn halve_exact(&self) -> Result<QSeries, SeriesError> {
        let two = BigInt::from(2);
        self.div_scalar_exact(&two).map_err(|e| match e {
            SeriesError::NotDivisible(at) => SeriesError::OddCoefficient(at),
            other => other,
        })
    }

    /// True when both series have identical coefficients below the smaller
    /// of the two truncations.
    pub fn agrees_with(&self, other: &QSeries) -> bool {
        self.diff(other).is_empty()
    }

    /// Exponents below the shared truncation where the coefficients differ,
    /// as `(exponent, self_coeff, other_coeff)`.
    pub fn diff(&self, other: &QSeries) -> Vec<(QExp, BigInt, BigInt)> {
        let t = self.trunc.min(other.trunc);
        let mut keys: Vec<u32> = self
            .terms
            .range(..t)
            .map(|(&e, _)| e)
            .chain(other.terms.range(..t).map(|(&e, _)| e))
            .collect();
        keys.sort_unstable();
        keys.dedup();
        keys.into_iter()
            .filter_map(|e| {
                let a = self.terms.get(&e).cloned().unwrap_or_default();
                let b = other.terms.get(&e).cloned().unwrap_or_default();
                (a != b).then_some((QExp(e), a, b))
            })
            .collect()
    }

    /// Serialize as `trunc=<quarters>` followed by `quarters<TAB>coefficient` lines.
    pub fn to_qs_text(&self) -> String {
        let mut out = format!("trunc={}\n", self.trunc);
        for (e, c) in &self.terms {
            out.push_str(&format!("{e}\t{c}\n"));
        }
        out
    }

    pub fn from_qs_text(text: &str) -> Result<QSeries, SeriesError> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let header = lines.next().ok_or_else(|| SeriesError::Parse("empty input".into()))?;
        let trunc: u32 = header
            .strip_prefix("trunc=")
            .and_then(|t| t.trim().parse().ok())
            .ok_or_else(|| SeriesError::Parse(format!("bad header {header:?}")))?;
        let mut pairs = Vec::new();
        for line in lines {
            let (e, c) = line
                .split_once('\t')
                .ok_or_else(|| SeriesError::Parse(format!("expected a tab in {line:?}")))?;
            let e: u32 = e.trim().parse().map_err(|_| SeriesError::Parse(format!("bad exponent {e:?}")))?;
            let c: BigInt = c.trim().parse().map_err(|_| SeriesError::Parse(format!("bad coefficient {c:?}")))?;
            if e >= trunc {
                return Err(SeriesError::Parse(format!("exponent {e} not below trunc {trunc}")));
            }
            pairs.push((QExp(e), c));
        }
        Ok(QSeries::from_terms(pairs, QExp(trunc)))
    }

    /// CSV with header `exponent,coefficient`; exponents in powers of `q`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("exponent,coefficient\n");
        for (e, c) in self.terms() {
            out.push_str(&format!("{e},{c}\n"));
        }
        out
    }
}

fn add_into(terms: &mut BTreeMap<u32, BigInt>, e: u32, c: &BigInt, negate: bool) {
    let slot = terms.entry(e).or_insert_with(BigInt::zero);
    if negate {
        *slot -= c;
    } else {
        *slot += c;
    }
    if slot.is_zero() {
        terms.remove(&e);
    }
}

fn combine(a: &QSeries, b: &QSeries, negate_b: bool) -> QSeries {
    let trunc = a.trunc.min(b.trunc);
    let mut terms: BTreeMap<u32, BigInt> = a.terms.range(..trunc).map(|(&e, c)| (e, c.clone())).collect();
    for (&e, c) in b.terms.range(..trunc) {
        add_into(&mut terms, e, c, negate_b);
    }
    QSeries { terms, trunc }
}

impl Add for &QSeries {
    type Output = QSeries;
    fn add(self, rhs: &QSeries) -> QSeries {
        combine(self, rhs, false)
    }
}

impl Sub for &QSeries {
    type Output = QSeries;
    fn sub(self, rhs: &QSeries) -> QSeries {
        combine(self, rhs, true)
    }
}

impl Neg for &QSeries {
    type Output = QSeries;
    fn neg(self) -> QSeries {
        QSeries { terms: self.terms.iter().map(|(&e, c)| (e, -c)).collect(), trunc: self.trunc }
    }
}

fn fmt_power(f: &mut fmt::Formatter<'_>, e: u32) -> fmt::Result {
    match (e / 4, e % 4) {
        (1, 0) => write!(f, "q"),
        (w, 0) => write!(f, "q^{w}"),
        _ => {
            let (num, den) = if e.is_multiple_of(2) { (e / 2, 2) } else { (e, 4) };
            write!(f, "q^({num}/{den})")
        }
    }
}

impl fmt::Display for QSeries {
    /// Human-readable form, e.g. `1 + 240*q^2 + O(q^4)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (&e, c) in &self.terms {
            let (sign, mag) = if c.is_negative() { ("-", -c) } else { ("+", c.clone()) };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            if e == 0 {
                write!(f, "{mag}")?;
            } else {
                if !mag.is_one() {
                    write!(f, "{mag}*")?;
                }
                fmt_power(f, e)?;
            }
        }
        if !first {
            write!(f, " + ")?;
        }
        write!(f, "O(")?;
        if self.trunc == 0 {
            write!(f, "1")?;
        } else {
            fmt_power(f, self.trunc)?;
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(pairs: &[(u32, i64)], trunc: u32) -> QSeries {
        QSeries::from_terms(pairs.iter().map(|&(e, c)| (QExp(e), c)), QExp(trunc))
    }

    #[test]
    fn from_terms_normalizes() {
        let a = s(&[(0, 1), (4, 2)], 8);
        assert_eq!(a.coeff(QExp(4)).unwrap(), BigInt::from(2));
        assert_eq!(a.num_terms(), 2);
        assert!(s(&[(0, 1), (0, -1)], 4).is_zero());
        let beyond = s(&[(16, 5)], 8);
        assert!(beyond.is_zero());
        assert_eq!(beyond.trunc(), QExp(8));
    }

    #[test]
    fn add_sub_basics() {
        let a = s(&[(0, 1), (4, 2)], 16);
        let b = s(&[(0, 1), (4, -2)], 16);
        assert_eq!(&a + &b, s(&[(0, 2)], 16));
        assert_eq!(&a + &QSeries::zero(QExp(16)), a);
        assert!((&a - &a).is_zero());
        assert_eq!((&a + &s(&[], 8)).trunc(), QExp(8));
        assert_eq!(-&a, s(&[(0, -1), (4, -2)], 16));
    }

    #[test]
    fn mul_basics() {
        let a = s(&[(0, 1), (4, 1)], 20);
        let b = s(&[(0, 1), (4, -1)], 20);
        assert_eq!(a.mul(&b), s(&[(0, 1), (8, -1)], 20));
        assert_eq!(a.mul(&QSeries::one(QExp(20))), a);
    }

    #[test]
    fn mul_truncation_uses_valuations() {
        // q^(1/4) known below q^1, times q^2 known below q^3
        let a = s(&[(1, 2)], 4);
        let b = s(&[(8, 1)], 12);
        let p = a.mul(&b);
        // min(4 + 8, 12 + 1) = 12
        assert_eq!(p.trunc(), QExp(12));
        assert_eq!(p.coeff(QExp(9)).unwrap(), BigInt::from(2));
        // zero times anything: valuation of zero is its trunc
        let z = QSeries::zero(QExp(4));
        assert_eq!(z.mul(&b).trunc(), QExp(12));
    }

    #[test]
    fn pow_basics() {
        let a = s(&[(0, 1), (4, 1)], 20);
        assert_eq!(a.pow(2), s(&[(0, 1), (4, 2), (8, 1)], 20));
        assert_eq!(a.pow(1), a);
        assert_eq!(a.pow(0), QSeries::one(QExp(20)));
        // (2 q^(1/4) + ...)^4 leads with 16 q
        let t2 = s(&[(1, 2), (9, 2)], 40);
        let p = t2.pow(4);
        assert_eq!(p.min_exp(), Some(QExp(4)));
        assert_eq!(p.coeff(QExp(4)).unwrap(), BigInt::from(16));
    }

    #[test]
    fn div_exact_basics() {
        let a = s(&[(0, 3), (4, 1), (12, -7)], 32);
        assert_eq!(a.div_exact(&QSeries::one(QExp(32))).unwrap(), a);
        let den = s(&[(0, 1), (4, 1)], 32);
        let prod = a.mul(&den);
        assert_eq!(prod.div_exact(&den).unwrap(), a);
        assert_eq!(a.div_exact(&QSeries::zero(QExp(8))), Err(SeriesError::DivisionByZero));
        let two = s(&[(0, 2)], 32);
        assert!(matches!(s(&[(0, 1)], 32).div_exact(&two), Err(SeriesError::NotDivisible(_))));
        assert_eq!(s(&[(0, 1)], 32).div_exact(&s(&[(4, 1)], 32)), Err(SeriesError::NegativeExponent));
    }

    #[test]
    fn div_exact_shifts_and_truncates() {
        // (q + q^2) / q = 1 + q, known below min(32 - 4, 32 + 4 - 8) = 28
        let num = s(&[(4, 1), (8, 1)], 32);
        let den = s(&[(4, 1)], 32);
        let q = num.div_exact(&den).unwrap();
        assert_eq!(q, s(&[(0, 1), (4, 1)], 28));
    }

    #[test]
    fn coeff_beyond_truncation() {
        let a = s(&[(0, 1), (4, 2)], 8);
        assert_eq!(a.coeff(QExp::from_power(1)).unwrap(), BigInt::from(2));
        assert_eq!(QSeries::zero(QExp(4)).coeff(QExp(0)).unwrap(), BigInt::zero());
        assert!(matches!(a.coeff(QExp(8)), Err(SeriesError::BeyondTruncation { .. })));
    }

    #[test]
    fn halve_exact_cases() {
        assert_eq!(s(&[(0, 2), (8, 4)], 16).halve_exact().unwrap(), s(&[(0, 1), (8, 2)], 16));
        assert_eq!(s(&[(0, 1), (4, 1)], 16).halve_exact(), Err(SeriesError::OddCoefficient(QExp(0))));
    }

    #[test]
    fn text_roundtrip_and_display() {
        let big: BigInt = "123456789012345678901234567890".parse().unwrap();
        let a = QSeries::from_terms([(QExp(0), BigInt::from(1)), (QExp(9), -big)], QExp(20));
        assert_eq!(QSeries::from_qs_text(&a.to_qs_text()).unwrap(), a);
        assert_eq!(a.to_string(), "1 - 123456789012345678901234567890*q^(9/4) + O(q^5)");
        assert!(QSeries::from_qs_text("nope").is_err());
        assert!(QSeries::from_qs_text("trunc=4\n8\t1\n").is_err());
        assert_eq!(s(&[(0, 1), (2, 3)], 8).to_csv(), "exponent,coefficient\n0,1\n0.5,3\n");
    }
}
