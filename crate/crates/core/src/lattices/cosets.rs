//! Theta series of the lattice as a sum over glue classes of products of
//! component coset theta series.

use std::collections::HashMap;

use super::glue::{glue_group, Label};
use super::spec::LatticeSpec;
use super::LatticeError;
use crate::modforms::{ModformCache, ThetaKind};
use crate::qseries::{QExp, QSeries};

/// Theta series of one coset of `D_n` in `D_n^*`, from theta functions.
pub fn coset_theta_component(label: Label, n: u32, cache: &ModformCache) -> Result<QSeries, LatticeError> {
    let t3 = || cache.theta_pow(ThetaKind::Three, n);
    let t4 = || cache.theta_pow(ThetaKind::Four, n);
    let twice = match label {
        Label::O => &t3() + &t4(),
        Label::X1 | Label::X3 => cache.theta_pow(ThetaKind::Two, n),
        Label::X2 => &t3() - &t4(),
    };
    Ok(twice.halve_exact()?)
}

/// `Σ_{glue classes} ∏_i component(label_i, n_i)`, with component series
/// supplied by the caller and computed once per distinct `(label, n)`.
pub(crate) fn assemble<F>(spec: &LatticeSpec, trunc: QExp, mut component: F) -> Result<QSeries, LatticeError>
where
    F: FnMut(Label, u32) -> Result<QSeries, LatticeError>,
{
    let dims = spec.dims();
    let mut memo: HashMap<(Label, u32), QSeries> = HashMap::new();
    let mut total = QSeries::zero(trunc);
    for class in glue_group(spec) {
        // classes whose smallest norm is past the truncation contribute nothing
        if class.min_norm_quarters(&dims) >= trunc.quarters() {
            continue;
        }
        let mut prod = QSeries::one(trunc);
        for (&label, &n) in class.0.iter().zip(&dims) {
            if let std::collections::hash_map::Entry::Vacant(e) = memo.entry((label, n)) {
                let s = component(label, n)?;
                e.insert(s);
            }
            prod = prod.mul(&memo[&(label, n)]);
        }
        total = &total + &prod;
    }
    Ok(total.truncate(trunc))
}

pub fn theta_by_cosets(spec: &LatticeSpec, cache: &ModformCache) -> Result<QSeries, LatticeError> {
    assemble(spec, cache.trunc(), |label, n| coset_theta_component(label, n, cache))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    #[test]
    fn component_examples() {
        let cache = ModformCache::with_order(4).unwrap();
        let o = coset_theta_component(Label::O, 8, &cache).unwrap();
        assert_eq!(o.coeff_at_power(0).unwrap(), BigInt::from(1));
        assert_eq!(o.coeff_at_power(2).unwrap(), BigInt::from(112));
        let x1 = coset_theta_component(Label::X1, 8, &cache).unwrap();
        assert_eq!(x1.min_exp(), Some(QExp::from_power(2)));
        assert_eq!(x1.coeff_at_power(2).unwrap(), BigInt::from(128));
        let x2 = coset_theta_component(Label::X2, 8, &cache).unwrap();
        assert_eq!(x2.coeff_at_power(0).unwrap(), BigInt::from(0));
    }

    #[test]
    fn rank_eight_and_twenty_four() {
        let cache = ModformCache::with_order(8).unwrap();
        let t = theta_by_cosets(&LatticeSpec::odd(&[1]).unwrap(), &cache).unwrap();
        assert!(t.agrees_with(&cache.e4()));
        let t = theta_by_cosets(&LatticeSpec::odd(&[3]).unwrap(), &cache).unwrap();
        assert_eq!(t.coeff_at_power(2).unwrap(), BigInt::from(1104));
        let t = theta_by_cosets(&LatticeSpec::four_block(&[0, 0, 0, 0], 1).unwrap(), &cache).unwrap();
        assert_eq!(t.coeff_at_power(2).unwrap(), BigInt::from(240));
    }
}
