//! Exact polynomials in two commuting variables `a`, `b` over the integers.
//!
//! With `a = θ2^4` and `b = θ4^4` (so `θ3^4 = a + b`) the families `h_n`,
//! `ρ_n`, `E4` and `Δ = 2^8 Δ24` become honest polynomials, which lets the
//! closed forms in `E` and `Δ` be checked with no truncation at all.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::combinatorics::binomial;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("division leaves a nonzero remainder")]
    NotDivisible,
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("polynomial is not a polynomial in E and Delta (stuck at a^{0} b^{1})")]
    NotInEDeltaRing(u32, u32),
    #[error("closed-form coefficient {0} is not an integer")]
    NonIntegerCoefficient(BigRational),
    #[error("index {0} is outside the supported range")]
    IndexOutOfRange(i64),
}

/// Exponent pair `(deg_a, deg_b)`. Tuple order is lexicographic with `a > b`.
pub type Monomial = (u32, u32);

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct BPoly {
    terms: BTreeMap<Monomial, BigInt>,
}

impl BPoly {
    pub fn zero() -> Self {
        BPoly::default()
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::monomial((0, 0), c)
    }

    pub fn monomial(m: Monomial, c: impl Into<BigInt>) -> Self {
        let c = c.into();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        BPoly { terms }
    }

    pub fn a() -> Self {
        Self::monomial((1, 0), 1)
    }

    pub fn b() -> Self {
        Self::monomial((0, 1), 1)
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, BigInt)>>(it: I) -> Self {
        let mut p = BPoly::zero();
        for (m, c) in it {
            p.add_term(m, &c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: &BigInt) {
        let slot = self.terms.entry(m).or_insert_with(BigInt::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: Monomial) -> BigInt {
        self.terms.get(&m).cloned().unwrap_or_default()
    }

    /// Leading term in lex order with `a > b`.
    pub fn leading(&self) -> Option<(Monomial, &BigInt)> {
        self.terms.iter().next_back().map(|(&m, c)| (m, c))
    }

    /// Total degree if every term has the same degree.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut degs = self.terms.keys().map(|&(i, j)| i + j);
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    pub fn swap_ab(&self) -> BPoly {
        BPoly { terms: self.terms.iter().map(|(&(i, j), c)| ((j, i), c.clone())).collect() }
    }

    pub fn is_symmetric(&self) -> bool {
        *self == self.swap_ab()
    }

    pub fn scale(&self, k: &BigInt) -> BPoly {
        if k.is_zero() {
            return BPoly::zero();
        }
        BPoly { terms: self.terms.iter().map(|(&m, c)| (m, c * k)).collect() }
    }

    pub fn pow(&self, mut n: u32) -> BPoly {
        let mut result = BPoly::constant(1);
        let mut base = self.clone();
        while n > 0 {
            if n & 1 == 1 {
                result = &result * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Exact quotient by multivariate division (lex, `a > b`); any remainder
    /// is an error.
    pub fn div_exact(&self, den: &BPoly) -> Result<BPoly, PolyError> {
        let (lm, lc) = den.leading().ok_or(PolyError::DivisionByZero)?;
        let lc = lc.clone();
        let mut p = self.clone();
        let mut quotient = BPoly::zero();
        while let Some((m, c)) = p.leading() {
            if m.0 < lm.0 || m.1 < lm.1 || !c.is_multiple_of(&lc) {
                return Err(PolyError::NotDivisible);
            }
            let t = BPoly::monomial((m.0 - lm.0, m.1 - lm.1), c / &lc);
            p = &p - &(&t * den);
            quotient = &quotient + &t;
        }
        Ok(quotient)
    }

    /// Re-express a polynomial in the basis `Δ^i E^j` by matching leading
    /// terms. Fails if the polynomial does not lie in `Z[E, Δ]`.
    pub fn to_e_delta(&self) -> Result<EDeltaForm, PolyError> {
        let e = e_poly();
        let d = delta_poly();
        let mut e_pows = vec![BPoly::constant(1)];
        let mut d_pows = vec![BPoly::constant(1)];
        let mut form = EDeltaForm::default();
        let mut p = self.clone();
        while let Some(((alpha, beta), c)) = p.leading() {
            // LT(Δ^i E^j) = a^(2j+4i) b^(2i)
            if beta % 2 == 1 || alpha % 2 == 1 || alpha < 2 * beta {
                return Err(PolyError::NotInEDeltaRing(alpha, beta));
            }
            let i = (beta / 2) as usize;
            let j = ((alpha - 4 * i as u32) / 2) as usize;
            while d_pows.len() <= i {
                let next = d_pows.last().unwrap() * &d;
                d_pows.push(next);
            }
            while e_pows.len() <= j {
                let next = e_pows.last().unwrap() * &e;
                e_pows.push(next);
            }
            let c = c.clone();
            let basis = &d_pows[i] * &e_pows[j];
            p = &p - &basis.scale(&c);
            form.add(i as u32, j as u32, &c);
        }
        Ok(form)
    }
}

impl Add for &BPoly {
    type Output = BPoly;
    fn add(self, rhs: &BPoly) -> BPoly {
        let mut out = self.clone();
        for (&m, c) in &rhs.terms {
            out.add_term(m, c);
        }
        out
    }
}

impl Sub for &BPoly {
    type Output = BPoly;
    fn sub(self, rhs: &BPoly) -> BPoly {
        let mut out = self.clone();
        for (&m, c) in &rhs.terms {
            out.add_term(m, &-c);
        }
        out
    }
}

impl Neg for &BPoly {
    type Output = BPoly;
    fn neg(self) -> BPoly {
        BPoly { terms: self.terms.iter().map(|(&m, c)| (m, -c)).collect() }
    }
}

impl Mul for &BPoly {
    type Output = BPoly;
    fn mul(self, rhs: &BPoly) -> BPoly {
        let mut out = BPoly::zero();
        for (&(i1, j1), c1) in &self.terms {
            for (&(i2, j2), c2) in &rhs.terms {
                out.add_term((i1 + i2, j1 + j2), &(c1 * c2));
            }
        }
        out
    }
}

fn write_signed(f: &mut fmt::Formatter<'_>, first: bool, c: &BigInt, body: &str) -> fmt::Result {
    let mag = c.abs();
    match (first, c.is_negative()) {
        (true, true) => write!(f, "-")?,
        (true, false) => {}
        (false, true) => write!(f, " - ")?,
        (false, false) => write!(f, " + ")?,
    }
    if body.is_empty() {
        write!(f, "{mag}")
    } else if mag.is_one() {
        write!(f, "{body}")
    } else {
        write!(f, "{mag}*{body}")
    }
}

fn var_power(name: &str, k: u32) -> Option<String> {
    match k {
        0 => None,
        1 => Some(name.to_string()),
        _ => Some(format!("{name}^{k}")),
    }
}

impl fmt::Display for BPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (n, (&(i, j), c)) in self.terms.iter().rev().enumerate() {
            let body: Vec<String> = [var_power("a", i), var_power("b", j)].into_iter().flatten().collect();
            write_signed(f, n == 0, c, &body.join("*"))?;
        }
        Ok(())
    }
}

/// A polynomial in `Δ` and `E`, keyed by `(delta_power, e_power)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EDeltaForm {
    terms: BTreeMap<(u32, u32), BigInt>,
}

impl EDeltaForm {
    pub fn from_terms<I: IntoIterator<Item = ((u32, u32), BigInt)>>(it: I) -> Self {
        let mut form = EDeltaForm::default();
        for ((i, j), c) in it {
            form.add(i, j, &c);
        }
        form
    }

    fn add(&mut self, delta_pow: u32, e_pow: u32, c: &BigInt) {
        let slot = self.terms.entry((delta_pow, e_pow)).or_insert_with(BigInt::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&(delta_pow, e_pow));
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &BigInt)> {
        self.terms.iter()
    }

    pub fn coeff(&self, delta_pow: u32, e_pow: u32) -> BigInt {
        self.terms.get(&(delta_pow, e_pow)).cloned().unwrap_or_default()
    }

    pub fn to_bpoly(&self) -> BPoly {
        let e = e_poly();
        let d = delta_poly();
        self.terms
            .iter()
            .fold(BPoly::zero(), |acc, (&(i, j), c)| &acc + &(&d.pow(i) * &e.pow(j)).scale(c))
    }
}

impl fmt::Display for EDeltaForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (n, (&(i, j), c)) in self.terms.iter().enumerate() {
            let body: Vec<String> = [var_power("Delta", i), var_power("E", j)].into_iter().flatten().collect();
            write_signed(f, n == 0, c, &body.join("*"))?;
        }
        Ok(())
    }
}

/// `E = a^2 + ab + b^2`.
pub fn e_poly() -> BPoly {
    BPoly::from_terms([((2, 0), 1.into()), ((1, 1), 1.into()), ((0, 2), 1.into())])
}

/// `Δ = a^2 b^2 (a + b)^2`.
pub fn delta_poly() -> BPoly {
    BPoly::from_terms([((4, 2), 1.into()), ((3, 3), 2.into()), ((2, 4), 1.into())])
}

fn a_plus_b() -> BPoly {
    &BPoly::a() + &BPoly::b()
}

/// `h_n = a^(2n) + b^(2n) + (a+b)^(2n)`.
pub fn h_poly(n: u32) -> BPoly {
    let two_n = 2 * n;
    &(&BPoly::a().pow(two_n) + &BPoly::b().pow(two_n)) + &a_plus_b().pow(two_n)
}

/// `ρ_n = ((a+b)^(2n+3) - a^(2n+3) - b^(2n+3)) / (ab(a+b))`, with `ρ_{-1} = 0`.
pub fn rho_poly(n: i64) -> Result<BPoly, PolyError> {
    match n {
        -1 => Ok(BPoly::zero()),
        n if n < -1 => Err(PolyError::IndexOutOfRange(n)),
        n => {
            let e = (2 * n + 3) as u32;
            let num = &(&a_plus_b().pow(e) - &BPoly::a().pow(e)) - &BPoly::b().pow(e);
            let den = &BPoly::monomial((1, 1), 1) * &a_plus_b();
            num.div_exact(&den)
        }
    }
}

fn integral(r: BigRational) -> Result<BigInt, PolyError> {
    if r.is_integer() {
        Ok(r.to_integer())
    } else {
        Err(PolyError::NonIntegerCoefficient(r))
    }
}

/// Closed form `h_n = 2E^n + Σ_{i=1}^{⌊n/3⌋} (n/i) C(n-i-1, 2i-1) Δ^i E^(n-3i)`, `n >= 1`.
pub fn h_closed_form(n: u32) -> Result<EDeltaForm, PolyError> {
    if n == 0 {
        return Err(PolyError::IndexOutOfRange(0));
    }
    let mut form = EDeltaForm::default();
    form.add(0, n, &BigInt::from(2));
    let nn = n as i64;
    for i in 1..=(n / 3) {
        let ii = i as i64;
        let c = BigRational::new(BigInt::from(nn) * binomial(nn - ii - 1, 2 * ii - 1), BigInt::from(ii));
        form.add(i, n - 3 * i, &integral(c)?);
    }
    Ok(form)
}

/// Closed form `ρ_n = Σ_{i=0}^{⌊n/3⌋} (2n+3)/(2i+1) C(n-i, 2i) Δ^i E^(n-3i)`.
pub fn rho_closed_form(n: u32) -> Result<EDeltaForm, PolyError> {
    let mut form = EDeltaForm::default();
    let nn = n as i64;
    for i in 0..=(n / 3) {
        let ii = i as i64;
        let c = BigRational::new(BigInt::from(2 * nn + 3) * binomial(nn - ii, 2 * ii), BigInt::from(2 * ii + 1));
        form.add(i, n - 3 * i, &integral(c)?);
    }
    Ok(form)
}

pub fn h_closed_poly(n: u32) -> Result<BPoly, PolyError> {
    Ok(h_closed_form(n)?.to_bpoly())
}

pub fn rho_closed_poly(n: u32) -> Result<BPoly, PolyError> {
    Ok(rho_closed_form(n)?.to_bpoly())
}

fn recurrence_holds(f: impl Fn(u32) -> Result<BPoly, PolyError>, n: u32) -> Result<bool, PolyError> {
    if n < 3 {
        return Err(PolyError::IndexOutOfRange(n as i64));
    }
    let e = e_poly();
    let rhs = &(&(&e * &f(n - 1)?).scale(&BigInt::from(2)) - &(&e.pow(2) * &f(n - 2)?)) + &(&delta_poly() * &f(n - 3)?);
    Ok(f(n)? == rhs)
}

/// `h_n == 2E h_{n-1} - E^2 h_{n-2} + Δ h_{n-3}` exactly, for `n >= 3`.
pub fn check_recurrence_h(n: u32) -> Result<bool, PolyError> {
    recurrence_holds(|k| Ok(h_poly(k)), n)
}

/// Same three-term recurrence for `ρ_n`, `n >= 3`.
pub fn check_recurrence_rho(n: u32) -> Result<bool, PolyError> {
    recurrence_holds(|k| rho_poly(k as i64), n)
}
