//! Concrete q-series: the theta constants, `E4`, `Δ24`, and the families
//! `h_n = θ2^(8n) + θ3^(8n) + θ4^(8n)` and
//! `ρ_n = (θ3^(8n+12) - θ2^(8n+12) - θ4^(8n+12)) / (θ2 θ3 θ4)^4`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use thiserror::Error;

use crate::bivar::{self, BPoly, EDeltaForm, PolyError};
use crate::combinatorics::pow_big;
use crate::qseries::{QExp, QSeries, SeriesError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModformError {
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("index {0} is outside the admissible range")]
    IndexOutOfRange(i64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ThetaKind {
    Two,
    Three,
    Four,
}

impl ThetaKind {
    pub fn from_index(i: u8) -> Option<Self> {
        match i {
            2 => Some(ThetaKind::Two),
            3 => Some(ThetaKind::Three),
            4 => Some(ThetaKind::Four),
            _ => None,
        }
    }
}

/// Direct summation of a theta constant below `trunc`.
///
/// `θ2 = Σ q^((m+1/2)^2)` sits on odd quarters `(2m+1)^2`; `θ3 = Σ q^(m^2)`;
/// `θ4 = Σ (-1)^m q^(m^2)`.
pub fn theta(kind: ThetaKind, trunc: QExp) -> QSeries {
    let mut pairs: Vec<(QExp, i64)> = Vec::new();
    match kind {
        ThetaKind::Two => {
            // m and -1-m give the same exponent
            let mut odd = 1u64;
            while odd * odd < trunc.0 as u64 {
                pairs.push((QExp((odd * odd) as u32), 2));
                odd += 2;
            }
        }
        ThetaKind::Three | ThetaKind::Four => {
            pairs.push((QExp::ZERO, 1));
            let mut m = 1u64;
            while 4 * m * m < trunc.0 as u64 {
                let sign = if kind == ThetaKind::Four && m % 2 == 1 { -2 } else { 2 };
                pairs.push((QExp((4 * m * m) as u32), sign));
                m += 1;
            }
        }
    }
    QSeries::from_terms(pairs, trunc)
}

/// `E4 = (θ2^8 + θ3^8 + θ4^8) / 2`.
pub fn e4_series(trunc: QExp) -> Result<QSeries, ModformError> {
    let sum = &(&theta(ThetaKind::Two, trunc).pow(8) + &theta(ThetaKind::Three, trunc).pow(8))
        + &theta(ThetaKind::Four, trunc).pow(8);
    Ok(sum.halve_exact()?.truncate(trunc))
}

/// `1 + 240 Σ σ3(m) q^(2m)`, computed from divisor sums alone.
pub fn e4_divisor_sum(trunc: QExp) -> QSeries {
    let mut pairs = vec![(QExp::ZERO, BigInt::from(1))];
    let mut m = 1u32;
    while 8 * m < trunc.0 {
        let sigma3: u64 = (1..=m).filter(|d| m.is_multiple_of(*d)).map(|d| (d as u64).pow(3)).sum();
        pairs.push((QExp(8 * m), BigInt::from(240u64 * sigma3)));
        m += 1;
    }
    QSeries::from_terms(pairs, trunc)
}

/// `Δ24 = (θ2 θ3 θ4 / 2)^8`.
pub fn delta24_series(trunc: QExp) -> Result<QSeries, ModformError> {
    let prod = theta(ThetaKind::Two, trunc)
        .mul(&theta(ThetaKind::Three, trunc))
        .mul(&theta(ThetaKind::Four, trunc));
    Ok(prod.pow(8).div_scalar_exact(&BigInt::from(256))?.truncate(trunc))
}

/// Coefficient of `q^(2m)` in `Δ24`, derived by expanding the theta product.
pub fn tau(m: u32) -> Result<BigInt, ModformError> {
    let trunc = QExp::from_power(2 * m + 1);
    Ok(delta24_series(trunc)?.coeff_at_power(2 * m)?)
}

/// Extra working precision: the `ρ_n` quotient loses `val((θ2θ3θ4)^4) = q^1`.
const GUARD_QUARTERS: u32 = 4;

type Memo = Mutex<HashMap<i64, Arc<QSeries>>>;

/// Series bound to one truncation, with memoized powers and `h`/`ρ` values.
///
/// Everything handed out is truncated to [`ModformCache::trunc`]; the
/// theta powers are kept at a slightly higher working precision.
pub struct ModformCache {
    trunc: QExp,
    work: QExp,
    theta2: QSeries,
    theta3: QSeries,
    theta4: QSeries,
    e4: Arc<QSeries>,
    delta24: Arc<QSeries>,
    theta_pows: Mutex<HashMap<(ThetaKind, u32), Arc<QSeries>>>,
    e4_pows: Memo,
    delta24_pows: Memo,
    memo_h: Memo,
    memo_rho: Memo,
}

impl std::fmt::Debug for ModformCache {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ModformCache").field("trunc", &self.trunc).finish_non_exhaustive()
    }
}

fn memo_get(memo: &Memo, key: i64) -> Option<Arc<QSeries>> {
    memo.lock().expect("memo lock").get(&key).cloned()
}

fn memo_put(memo: &Memo, key: i64, value: QSeries) -> Arc<QSeries> {
    let value = Arc::new(value);
    memo.lock().expect("memo lock").entry(key).or_insert(value).clone()
}

impl ModformCache {
    pub fn new(trunc: QExp) -> Result<Self, ModformError> {
        let work = QExp(trunc.0 + GUARD_QUARTERS);
        let theta2 = theta(ThetaKind::Two, work);
        let theta3 = theta(ThetaKind::Three, work);
        let theta4 = theta(ThetaKind::Four, work);
        let e4 = e4_series(trunc)?;
        let delta24 = delta24_series(trunc)?;
        Ok(ModformCache {
            trunc,
            work,
            theta2,
            theta3,
            theta4,
            e4: Arc::new(e4),
            delta24: Arc::new(delta24),
            theta_pows: Mutex::new(HashMap::new()),
            e4_pows: Mutex::new(HashMap::new()),
            delta24_pows: Mutex::new(HashMap::new()),
            memo_h: Mutex::new(HashMap::new()),
            memo_rho: Mutex::new(HashMap::new()),
        })
    }

    /// Cache truncated at `q^order`.
    pub fn with_order(order: u32) -> Result<Self, ModformError> {
        Self::new(QExp::from_power(order))
    }

    pub fn trunc(&self) -> QExp {
        self.trunc
    }

    pub fn theta(&self, kind: ThetaKind) -> QSeries {
        let base = match kind {
            ThetaKind::Two => &self.theta2,
            ThetaKind::Three => &self.theta3,
            ThetaKind::Four => &self.theta4,
        };
        base.truncate(self.trunc)
    }

    /// `θ_kind^n` at working precision.
    fn theta_pow_work(&self, kind: ThetaKind, n: u32) -> Arc<QSeries> {
        if let Some(hit) = self.theta_pows.lock().expect("theta lock").get(&(kind, n)) {
            return hit.clone();
        }
        let base = match kind {
            ThetaKind::Two => &self.theta2,
            ThetaKind::Three => &self.theta3,
            ThetaKind::Four => &self.theta4,
        };
        let value = Arc::new(base.pow(n).truncate(self.work));
        self.theta_pows.lock().expect("theta lock").entry((kind, n)).or_insert(value).clone()
    }

    /// `θ_kind^n` truncated to the cache truncation.
    pub fn theta_pow(&self, kind: ThetaKind, n: u32) -> QSeries {
        self.theta_pow_work(kind, n).truncate(self.trunc)
    }

    pub fn e4(&self) -> Arc<QSeries> {
        self.e4.clone()
    }

    pub fn delta24(&self) -> Arc<QSeries> {
        self.delta24.clone()
    }

    pub fn e4_pow(&self, j: u32) -> Arc<QSeries> {
        if let Some(hit) = memo_get(&self.e4_pows, j as i64) {
            return hit;
        }
        memo_put(&self.e4_pows, j as i64, self.e4.pow(j).truncate(self.trunc))
    }

    pub fn delta24_pow(&self, i: u32) -> Arc<QSeries> {
        if let Some(hit) = memo_get(&self.delta24_pows, i as i64) {
            return hit;
        }
        memo_put(&self.delta24_pows, i as i64, self.delta24.pow(i).truncate(self.trunc))
    }

    /// Ramanujan `τ(m)`, requires `q^(2m)` below the cache truncation.
    pub fn tau(&self, m: u32) -> Result<BigInt, ModformError> {
        Ok(self.delta24.coeff_at_power(2 * m)?)
    }

    /// `h_n` from its definition; `n >= 0`.
    pub fn h(&self, n: i64) -> Result<Arc<QSeries>, ModformError> {
        if n < 0 {
            return Err(ModformError::IndexOutOfRange(n));
        }
        if let Some(hit) = memo_get(&self.memo_h, n) {
            return Ok(hit);
        }
        let e = 8 * n as u32;
        let sum = &(&*self.theta_pow_work(ThetaKind::Two, e) + &*self.theta_pow_work(ThetaKind::Three, e))
            + &*self.theta_pow_work(ThetaKind::Four, e);
        Ok(memo_put(&self.memo_h, n, sum.truncate(self.trunc)))
    }

    /// `ρ_n` from its definition by exact series division; `ρ_{-1} = 0`.
    pub fn rho(&self, n: i64) -> Result<Arc<QSeries>, ModformError> {
        if n < -1 {
            return Err(ModformError::IndexOutOfRange(n));
        }
        if let Some(hit) = memo_get(&self.memo_rho, n) {
            return Ok(hit);
        }
        if n == -1 {
            return Ok(memo_put(&self.memo_rho, n, QSeries::zero(self.trunc)));
        }
        let e = (8 * (n + 1) + 4) as u32;
        let num = &(&*self.theta_pow_work(ThetaKind::Three, e) - &*self.theta_pow_work(ThetaKind::Two, e))
            - &*self.theta_pow_work(ThetaKind::Four, e);
        let den = self.theta2.mul(&self.theta3).mul(&self.theta4).pow(4).truncate(self.work);
        let quotient = num.div_exact(&den)?;
        Ok(memo_put(&self.memo_rho, n, quotient.truncate(self.trunc)))
    }

    /// Evaluate `Σ c Δ^i E^j` with `Δ = 2^8 Δ24`, `E = E4`.
    pub fn eval_e_delta(&self, form: &EDeltaForm) -> QSeries {
        form.terms().fold(QSeries::zero(self.trunc), |acc, (&(i, j), c)| {
            let coeff = c * pow_big(2, 8 * i);
            let term = self.delta24_pow(i).mul(&self.e4_pow(j)).scale(&coeff);
            &acc + &term.truncate(self.trunc)
        })
    }

    /// Right-hand side of the `h_n` closed form in `E4` and `Δ24`, `n >= 1`.
    pub fn h_closed(&self, n: u32) -> Result<QSeries, ModformError> {
        Ok(self.eval_e_delta(&bivar::h_closed_form(n)?))
    }

    /// Right-hand side of the `ρ_n` closed form in `E4` and `Δ24`.
    pub fn rho_closed(&self, n: u32) -> Result<QSeries, ModformError> {
        Ok(self.eval_e_delta(&bivar::rho_closed_form(n)?))
    }

    /// Substitute `a = θ2^4`, `b = θ4^4` into a polynomial.
    pub fn substitute(&self, p: &BPoly) -> QSeries {
        p.terms().fold(QSeries::zero(self.trunc), |acc, (&(i, j), c)| {
            let term = self
                .theta_pow_work(ThetaKind::Two, 4 * i)
                .mul(&self.theta_pow_work(ThetaKind::Four, 4 * j))
                .scale(c)
                .truncate(self.trunc);
            &acc + &term
        })
    }

    /// Three-term recurrence `f_n = 2E f_{n-1} - E^2 f_{n-2} + 2^8 Δ24 f_{n-3}`
    /// at series level, for `f = h` or `f = ρ`.
    pub fn check_recurrence(&self, family: Family, n: i64) -> Result<bool, ModformError> {
        if n < 3 {
            return Err(ModformError::IndexOutOfRange(n));
        }
        let f = |k: i64| match family {
            Family::H => self.h(k),
            Family::Rho => self.rho(k),
        };
        let two = BigInt::from(2);
        let e = self.e4();
        let rhs = &(&e.mul(&*f(n - 1)?).scale(&two) - &self.e4_pow(2).mul(&*f(n - 2)?))
            + &self.delta24.mul(&*f(n - 3)?).scale(&pow_big(2, 8));
        Ok(f(n)?.agrees_with(&rhs))
    }
}

/// Selects `h` or `ρ` where an operation applies to both families.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    H,
    Rho,
}
