//! Integrality, evenness and determinant of the glued lattice, from an
//! explicit basis.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::glue::{generators, Label};
use super::spec::LatticeSpec;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnimodularReport {
    pub rank: u32,
    /// Every inner product of basis vectors is an integer.
    pub integral: bool,
    /// Every basis vector has even norm.
    pub even: bool,
    pub determinant: BigRational,
}

impl UnimodularReport {
    pub fn passed(&self) -> bool {
        self.integral && self.even && self.determinant.is_one()
    }
}

impl fmt::Display for UnimodularReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "rank {} integral {} even {} det {} => {}",
            self.rank,
            self.integral,
            self.even,
            self.determinant,
            if self.passed() { "PASS" } else { "FAIL" }
        )
    }
}

/// Generating vectors of the lattice in doubled coordinates: the standard
/// basis `2e_1, e_2-e_1, …` of each `D_n` and one vector per glue generator.
pub fn generating_rows(spec: &LatticeSpec) -> Vec<Vec<BigInt>> {
    let dims = spec.dims();
    let n: usize = dims.iter().map(|&d| d as usize).sum();
    let mut rows = Vec::new();
    let mut offset = 0usize;
    for &d in &dims {
        let d = d as usize;
        let mut r = vec![BigInt::zero(); n];
        r[offset] = BigInt::from(4);
        rows.push(r);
        for j in 1..d {
            let mut r = vec![BigInt::zero(); n];
            r[offset + j - 1] = BigInt::from(-2);
            r[offset + j] = BigInt::from(2);
            rows.push(r);
        }
        offset += d;
    }
    for g in generators(spec) {
        let mut r = Vec::with_capacity(n);
        for (label, &d) in g.0.iter().zip(&dims) {
            r.extend(Label::representative(*label, d).into_iter().map(BigInt::from));
        }
        rows.push(r);
    }
    rows
}

/// Row-reduce over the integers to an upper triangular basis.
pub fn triangular_basis(mut rows: Vec<Vec<BigInt>>) -> Vec<Vec<BigInt>> {
    let n = rows.first().map_or(0, |r| r.len());
    let mut top = 0;
    for col in 0..n {
        loop {
            let pivot = (top..rows.len())
                .filter(|&i| !rows[i][col].is_zero())
                .min_by(|&a, &b| rows[a][col].abs().cmp(&rows[b][col].abs()));
            let Some(p) = pivot else { break };
            rows.swap(top, p);
            let mut done = true;
            for i in top + 1..rows.len() {
                if rows[i][col].is_zero() {
                    continue;
                }
                let q = rows[i][col].div_floor(&rows[top][col]);
                let pivot_row = rows[top].clone();
                for (x, y) in rows[i].iter_mut().zip(&pivot_row) {
                    *x -= &q * y;
                }
                if !rows[i][col].is_zero() {
                    done = false;
                }
            }
            if done {
                if rows[top][col].is_negative() {
                    rows[top].iter_mut().for_each(|x| *x = -&*x);
                }
                top += 1;
                break;
            }
        }
    }
    rows.truncate(top);
    rows
}

/// Fraction-free Gaussian elimination.
pub fn bareiss_det(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = v;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

pub fn check_even_unimodular(spec: &LatticeSpec) -> UnimodularReport {
    let basis = triangular_basis(generating_rows(spec));
    let n = basis.len();
    // inner products in quarters
    let gram4: Vec<Vec<BigInt>> = basis
        .iter()
        .map(|r| basis.iter().map(|s| r.iter().zip(s).map(|(a, b)| a * b).sum()).collect())
        .collect();
    let four = BigInt::from(4);
    let integral = gram4.iter().flatten().all(|x| (x % &four).is_zero());
    let even = (0..n).all(|i| (&gram4[i][i] % BigInt::from(8)).is_zero());
    let det4 = bareiss_det(gram4);
    let determinant = BigRational::new(det4, num_traits::pow(four, n));
    UnimodularReport { rank: n as u32, integral, even, determinant }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    #[test]
    fn determinants() {
        assert_eq!(bareiss_det(big(&[&[2, 1], &[1, 2]])), BigInt::from(3));
        assert_eq!(bareiss_det(big(&[&[0, 1], &[1, 0]])), BigInt::from(-1));
        assert_eq!(bareiss_det(big(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 10]])), BigInt::from(-3));
    }

    #[test]
    fn triangular_preserves_lattice_volume() {
        let b = triangular_basis(big(&[&[2, 0], &[0, 2], &[1, 1]]));
        assert_eq!(b.len(), 2);
        let vol: BigInt = (0..2).map(|i| b[i][i].clone()).product();
        assert_eq!(vol, BigInt::from(2));
    }

    #[test]
    fn known_lattices() {
        for spec in [
            LatticeSpec::odd(&[1]).unwrap(),
            LatticeSpec::even(&[1, 1]).unwrap(),
            LatticeSpec::even(&[0, 0]).unwrap(),
            LatticeSpec::four_block(&[0, 0, 0, 0], 0).unwrap(),
        ] {
            let r = check_even_unimodular(&spec);
            assert!(r.passed(), "{spec}: {r}");
            assert_eq!(r.rank, spec.rank());
        }
    }

    #[test]
    fn plain_root_lattice_is_not_unimodular() {
        // D8 alone: drop the glue by using its root basis only
        let spec = LatticeSpec::odd(&[1]).unwrap();
        let mut rows = generating_rows(&spec);
        rows.pop();
        let basis = triangular_basis(rows);
        let vol: BigInt = (0..basis.len()).map(|i| basis[i][i].clone()).product();
        // det of the Gram matrix of D8 is 4
        assert_eq!(vol.pow(2) / num_traits::pow(BigInt::from(4), 8), BigInt::from(4));
    }
}
