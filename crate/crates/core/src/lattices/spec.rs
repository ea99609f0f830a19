//! Lattice specifications and their text format.

use std::fmt;
use std::str::FromStr;

use super::LatticeError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LatticeFamily {
    /// `k = 2l+1` components `D_{8 m_i}`, `m_i >= 1`.
    Odd8m,
    /// `k = 2l` components `D_{8 m_i + 4}`, `m_i >= 0`.
    Even8m4,
    /// Four components `D_{8 m_i + 4 eps + 2}`.
    FourBlock,
}

impl LatticeFamily {
    pub fn name(self) -> &'static str {
        match self {
            LatticeFamily::Odd8m => "ODD_8M",
            LatticeFamily::Even8m4 => "EVEN_8M4",
            LatticeFamily::FourBlock => "FOUR_BLOCK",
        }
    }
}

impl fmt::Display for LatticeFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for LatticeFamily {
    type Err = LatticeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_uppercase().replace('-', "_").as_str() {
            "ODD_8M" => Ok(LatticeFamily::Odd8m),
            "EVEN_8M4" => Ok(LatticeFamily::Even8m4),
            "FOUR_BLOCK" => Ok(LatticeFamily::FourBlock),
            other => Err(LatticeError::InvalidSpec(format!("unknown family {other:?}"))),
        }
    }
}

/// A validated lattice specification.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LatticeSpec {
    family: LatticeFamily,
    m: Vec<i64>,
    epsilon: u8,
}

impl LatticeSpec {
    pub fn new(family: LatticeFamily, m: Vec<i64>, epsilon: u8) -> Result<Self, LatticeError> {
        let bad = |msg: String| Err(LatticeError::InvalidSpec(msg));
        let k = m.len();
        match family {
            LatticeFamily::Odd8m => {
                if k.is_multiple_of(2) {
                    return bad(format!("{family} needs an odd number of components, got {k}"));
                }
                if let Some(x) = m.iter().find(|&&x| x < 1) {
                    return bad(format!("{family} needs every m_i >= 1, got {x}"));
                }
            }
            LatticeFamily::Even8m4 => {
                if k == 0 || k % 2 == 1 {
                    return bad(format!("{family} needs a positive even number of components, got {k}"));
                }
            }
            LatticeFamily::FourBlock => {
                if k != 4 {
                    return bad(format!("{family} needs exactly 4 components, got {k}"));
                }
            }
        }
        if family != LatticeFamily::Odd8m {
            if let Some(x) = m.iter().find(|&&x| x < 0) {
                return bad(format!("{family} needs every m_i >= 0, got {x}"));
            }
        }
        if epsilon > 1 {
            return bad(format!("epsilon must be 0 or 1, got {epsilon}"));
        }
        if family != LatticeFamily::FourBlock && epsilon != 0 {
            return bad(format!("epsilon only applies to FOUR_BLOCK, got {epsilon} for {family}"));
        }
        if m.iter().any(|&x| x > 1 << 20) {
            return bad("m_i is unreasonably large".into());
        }
        Ok(LatticeSpec { family, m, epsilon })
    }

    pub fn odd(m: &[i64]) -> Result<Self, LatticeError> {
        Self::new(LatticeFamily::Odd8m, m.to_vec(), 0)
    }

    pub fn even(m: &[i64]) -> Result<Self, LatticeError> {
        Self::new(LatticeFamily::Even8m4, m.to_vec(), 0)
    }

    pub fn four_block(m: &[i64], epsilon: u8) -> Result<Self, LatticeError> {
        Self::new(LatticeFamily::FourBlock, m.to_vec(), epsilon)
    }

    pub fn family(&self) -> LatticeFamily {
        self.family
    }

    pub fn m(&self) -> &[i64] {
        &self.m
    }

    pub fn epsilon(&self) -> u8 {
        self.epsilon
    }

    pub fn k(&self) -> usize {
        self.m.len()
    }

    /// `l` with `k = 2l+1` (odd family) or `k = 2l` (even family); 1 for four blocks.
    pub fn ell(&self) -> usize {
        match self.family {
            LatticeFamily::Odd8m => (self.k() - 1) / 2,
            LatticeFamily::Even8m4 => self.k() / 2,
            LatticeFamily::FourBlock => 2,
        }
    }

    /// Component ranks `n_i`.
    pub fn dims(&self) -> Vec<u32> {
        self.m
            .iter()
            .map(|&m| match self.family {
                LatticeFamily::Odd8m => 8 * m as u32,
                LatticeFamily::Even8m4 => 8 * m as u32 + 4,
                LatticeFamily::FourBlock => 8 * m as u32 + 4 * self.epsilon as u32 + 2,
            })
            .collect()
    }

    /// Partial sums `n_1, n_1+n_2, …`.
    pub fn partial_sums(&self) -> Vec<u32> {
        self.dims()
            .into_iter()
            .scan(0, |acc, n| {
                *acc += n;
                Some(*acc)
            })
            .collect()
    }

    pub fn rank(&self) -> u32 {
        self.dims().iter().sum()
    }

    /// Number of roots of the component root system, `Σ 2 n_i (n_i - 1)`.
    pub fn root_count(&self) -> u64 {
        self.dims().iter().map(|&n| 2 * n as u64 * (n as u64).saturating_sub(1)).sum()
    }

    /// Parse `key = value` lines with keys `family`, `k`, `m`, `epsilon`.
    /// A single `m` value with `k` given is repeated `k` times.
    pub fn parse(text: &str) -> Result<Self, LatticeError> {
        let bad = |msg: String| LatticeError::InvalidSpec(msg);
        let mut family = None;
        let mut k: Option<usize> = None;
        let mut m: Option<Vec<i64>> = None;
        let mut epsilon = 0u8;
        for (no, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .or_else(|| line.split_once(':'))
                .ok_or_else(|| bad(format!("line {}: expected key = value", no + 1)))?;
            let value = value.trim();
            match key.trim().to_ascii_lowercase().as_str() {
                "family" => family = Some(value.parse::<LatticeFamily>()?),
                "k" => k = Some(value.parse().map_err(|_| bad(format!("line {}: bad k {value:?}", no + 1)))?),
                "m" => {
                    let list = value.trim_start_matches(['(', '[']).trim_end_matches([')', ']']);
                    let parsed: Result<Vec<i64>, _> = list.split(',').map(|x| x.trim().parse::<i64>()).collect();
                    m = Some(parsed.map_err(|_| bad(format!("line {}: bad m list {value:?}", no + 1)))?);
                }
                "epsilon" | "eps" => {
                    epsilon = value.parse().map_err(|_| bad(format!("line {}: bad epsilon {value:?}", no + 1)))?
                }
                other => return Err(bad(format!("line {}: unknown key {other:?}", no + 1))),
            }
        }
        let family = family.ok_or_else(|| bad("missing family".into()))?;
        let mut m = m.ok_or_else(|| bad("missing m".into()))?;
        if let Some(k) = k {
            if m.len() == 1 && k > 1 {
                m = vec![m[0]; k];
            }
            if m.len() != k {
                return Err(bad(format!("k = {k} but m has {} entries", m.len())));
            }
        }
        Self::new(family, m, epsilon)
    }

    pub fn to_text(&self) -> String {
        let m: Vec<String> = self.m.iter().map(|x| x.to_string()).collect();
        let mut s = format!("family = {}\nk = {}\nm = {}\n", self.family, self.k(), m.join(","));
        if self.family == LatticeFamily::FourBlock {
            s.push_str(&format!("epsilon = {}\n", self.epsilon));
        }
        s
    }
}

impl fmt::Display for LatticeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m: Vec<String> = self.m.iter().map(|x| x.to_string()).collect();
        write!(f, "{} m=({})", self.family, m.join(","))?;
        if self.family == LatticeFamily::FourBlock {
            write!(f, " eps={}", self.epsilon)?;
        }
        Ok(())
    }
}
