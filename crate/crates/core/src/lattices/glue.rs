//! Glue classes: each component contributes a class of `D_n^* / D_n`, a
//! Klein four-group written additively.

use std::fmt;

use super::spec::{LatticeFamily, LatticeSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    /// `D_n` itself.
    O,
    /// `½(1,…,1) + D_n`.
    X1,
    /// `e_1 + D_n`.
    X2,
    /// `X1 + X2`.
    X3,
}

impl Label {
    pub const ALL: [Label; 4] = [Label::O, Label::X1, Label::X2, Label::X3];

    fn bits(self) -> u8 {
        match self {
            Label::O => 0b00,
            Label::X1 => 0b10,
            Label::X2 => 0b01,
            Label::X3 => 0b11,
        }
    }

    fn from_bits(b: u8) -> Label {
        match b & 0b11 {
            0b00 => Label::O,
            0b10 => Label::X1,
            0b01 => Label::X2,
            _ => Label::X3,
        }
    }


    /// Smallest norm in the class, in quarters, for a component of rank `n`.
    pub fn min_norm_quarters(self, n: u32) -> u32 {
        match self {
            Label::O => 0,
            Label::X2 => 4,
            Label::X1 | Label::X3 => n,
        }
    }

    /// Class representative in doubled coordinates.
    pub fn representative(self, n: u32) -> Vec<i64> {
        let n = n as usize;
        let mut v = vec![0i64; n];
        match self {
            Label::O => {}
            Label::X1 => v.iter_mut().for_each(|x| *x = 1),
            Label::X2 => v[0] = 2,
            Label::X3 => {
                v.iter_mut().for_each(|x| *x = 1);
                v[0] = 3;
            }
        }
        v
    }
}

impl std::ops::Add for Label {
    type Output = Label;

    // the glue group is (Z/2)^2, so addition is xor on the bits
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn add(self, other: Label) -> Label {
        Label::from_bits(self.bits() ^ other.bits())
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Label::O => "O",
            Label::X1 => "X1",
            Label::X2 => "X2",
            Label::X3 => "X3",
        })
    }
}

/// One glue class of the whole lattice: a label per component.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CosetLabel(pub Vec<Label>);

impl CosetLabel {
    pub fn zero(k: usize) -> Self {
        CosetLabel(vec![Label::O; k])
    }

    pub fn add(&self, other: &CosetLabel) -> CosetLabel {
        CosetLabel(self.0.iter().zip(&other.0).map(|(&a, &b)| a + b).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&l| l == Label::O)
    }

    /// Smallest norm of the coset, in quarters.
    pub fn min_norm_quarters(&self, dims: &[u32]) -> u32 {
        self.0.iter().zip(dims).map(|(l, &n)| l.min_norm_quarters(n)).sum()
    }
}

impl fmt::Display for CosetLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|l| l.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// A vector of `½ Z^n` stored as twice its coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GlueVector {
    pub doubled_coords: Vec<i64>,
}

impl GlueVector {
    pub fn of(spec: &LatticeSpec, label: &CosetLabel) -> Self {
        let doubled_coords = label
            .0
            .iter()
            .zip(spec.dims())
            .flat_map(|(l, n)| l.representative(n))
            .collect();
        GlueVector { doubled_coords }
    }

    /// Norm in quarters.
    pub fn norm_quarters(&self) -> i64 {
        self.doubled_coords.iter().map(|d| d * d).sum()
    }
}

/// Generators of the glue group. For the odd and even families generator
/// `i` carries `X1` at component `i` and `X2` elsewhere. The four-block
/// lattice uses `X2` at component `i` and `X3` at two fixed others.
pub fn generators(spec: &LatticeSpec) -> Vec<CosetLabel> {
    let k = spec.k();
    match spec.family() {
        LatticeFamily::Odd8m | LatticeFamily::Even8m4 => (0..k)
            .map(|i| CosetLabel((0..k).map(|j| if j == i { Label::X1 } else { Label::X2 }).collect()))
            .collect(),
        LatticeFamily::FourBlock => [(0, 2, 3), (1, 3, 0), (2, 0, 1), (3, 1, 2)]
            .iter()
            .map(|&(x2, a, b)| {
                let mut v = vec![Label::O; 4];
                v[x2] = Label::X2;
                v[a] = Label::X3;
                v[b] = Label::X3;
                CosetLabel(v)
            })
            .collect(),
    }
}

/// All sums of subsets of the generators, deduplicated, in a fixed order.
pub fn glue_group(spec: &LatticeSpec) -> Vec<CosetLabel> {
    let gens = generators(spec);
    let mut out: Vec<CosetLabel> = (0u64..1 << gens.len())
        .map(|mask| {
            gens.iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .fold(CosetLabel::zero(spec.k()), |acc, (_, g)| acc.add(g))
        })
        .collect();
    out.sort();
    out.dedup();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn group_law() {
        assert_eq!(Label::X1 + Label::X2, Label::X3);
        for l in Label::ALL {
            assert_eq!(l + l, Label::O);
            assert_eq!(l + Label::O, l);
        }
    }

    #[test]
    fn group_sizes() {
        let s = LatticeSpec::odd(&[1]).unwrap();
        assert_eq!(glue_group(&s), vec![CosetLabel(vec![Label::O]), CosetLabel(vec![Label::X1])]);
        assert_eq!(glue_group(&LatticeSpec::odd(&[1, 1, 1]).unwrap()).len(), 8);
        assert_eq!(glue_group(&LatticeSpec::even(&[0, 0, 0, 0, 0, 0]).unwrap()).len(), 64);
        assert_eq!(glue_group(&LatticeSpec::four_block(&[0, 0, 0, 0], 1).unwrap()).len(), 16);
    }

    #[test]
    fn glue_norms_are_even() {
        let specs = [
            LatticeSpec::odd(&[1, 2, 1]).unwrap(),
            LatticeSpec::even(&[0, 1]).unwrap(),
            LatticeSpec::four_block(&[0, 1, 0, 2], 0).unwrap(),
        ];
        for s in specs {
            for g in glue_group(&s) {
                assert_eq!(GlueVector::of(&s, &g).norm_quarters() % 8, 0, "{s} {g}");
                assert_eq!(g.min_norm_quarters(&s.dims()) % 8, 0);
            }
        }
    }
}
