use crate::error::{Error, Result};
use serde::Serialize;
use std::fmt;
use std::str::FromStr;

/// A rational Heisenberg manifold `(H_l / Γ_r, g_l)` of dimension `2l + 1`.
///
/// The spectrum depends only on `l` and the divisor chain `r_1 | r_2 | ... | r_l`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct HeisenbergManifold {
    ell: u32,
    r: Vec<u64>,
}

impl HeisenbergManifold {
    pub fn new(ell: u32, r: Vec<u64>) -> Result<Self> {
        if ell == 0 {
            return Err(Error::InvalidManifold("ell must be >= 1".into()));
        }
        if r.len() != ell as usize {
            return Err(Error::InvalidManifold(format!(
                "r must have exactly ell = {ell} entries, got {}",
                r.len()
            )));
        }
        if let Some(pos) = r.iter().position(|&x| x == 0) {
            return Err(Error::InvalidManifold(format!("r_{} must be positive", pos + 1)));
        }
        for (j, pair) in r.windows(2).enumerate() {
            if pair[1] % pair[0] != 0 {
                return Err(Error::InvalidManifold(format!(
                    "divisibility chain broken: r_{} = {} does not divide r_{} = {}",
                    j + 1,
                    pair[0],
                    j + 2,
                    pair[1]
                )));
            }
        }
        let manifold = Self { ell, r };
        manifold
            .r
            .iter()
            .try_fold(1u128, |acc, &x| acc.checked_mul(x as u128))
            .ok_or_else(|| Error::InvalidManifold("r_1···r_l overflows".into()))?;
        Ok(manifold)
    }

    /// `r = (1, ..., 1)`.
    pub fn standard(ell: u32) -> Result<Self> {
        Self::new(ell, vec![1; ell as usize])
    }

    pub fn ell(&self) -> u32 {
        self.ell
    }

    pub fn r(&self) -> &[u64] {
        &self.r
    }

    /// `r_1 · r_2 ··· r_l`, the volume factor.
    pub fn r_product(&self) -> u128 {
        self.r.iter().map(|&x| x as u128).product()
    }

    pub fn is_standard(&self) -> bool {
        self.r.iter().all(|&x| x == 1)
    }
}

impl fmt::Display for HeisenbergManifold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r: Vec<String> = self.r.iter().map(|x| x.to_string()).collect();
        write!(f, "H_{}/Γ({})", self.ell, r.join(","))
    }
}

/// Parses a comma-separated `r` vector such as `1,2`.
pub fn parse_r_vector(s: &str) -> Result<Vec<u64>> {
    s.split(',')
        .map(|p| {
            u64::from_str(p.trim()).map_err(|e| Error::Parse(format!("r entry {p:?}: {e}")))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validates_divisibility() {
        assert!(HeisenbergManifold::new(2, vec![1, 2]).is_ok());
        assert!(HeisenbergManifold::new(3, vec![2, 4, 8]).is_ok());
        let err = HeisenbergManifold::new(2, vec![2, 3]).unwrap_err().to_string();
        assert!(err.contains("divid"), "{err}");
        assert!(HeisenbergManifold::new(2, vec![1]).is_err());
        assert!(HeisenbergManifold::new(0, vec![]).is_err());
        assert!(HeisenbergManifold::new(1, vec![0]).is_err());
    }

    #[test]
    fn product_and_parse() {
        let m = HeisenbergManifold::new(2, parse_r_vector("2, 4").unwrap()).unwrap();
        assert_eq!(m.r_product(), 8);
        assert!(!m.is_standard());
        assert!(HeisenbergManifold::standard(4).unwrap().is_standard());
        assert!(parse_r_vector("1,x").is_err());
    }
}
