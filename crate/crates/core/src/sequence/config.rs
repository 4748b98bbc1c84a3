use std::path::Path;

use serde::{Deserialize, Serialize};

use super::perm::{is_prime, validate_perm_polynomial, PermPolynomial, Permutation};
use crate::{Error, Result};

/// How a `(d-1)`-dimensional sequence is lifted to a `d`-dimensional
/// Hammersley point set with `N` points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HammersleyConvention {
    /// `(i/N, x_i)` for `i = 1, ..., N-1`, where `x_i` is the element with
    /// index `i` (`N - 1` points).
    #[default]
    Indexed,
    /// `(i/N, y_i)` for `i = 0, ..., N-1`, where `y_i` is the `i`-th generated
    /// element starting from `start_index` (`N` points).
    Classic,
}

impl std::fmt::Display for HammersleyConvention {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Indexed => "indexed",
            Self::Classic => "classic",
        })
    }
}

impl std::str::FromStr for HammersleyConvention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "indexed" => Ok(Self::Indexed),
            "classic" => Ok(Self::Classic),
            other => Err(Error::Parse(format!("unknown Hammersley convention `{other}`"))),
        }
    }
}

fn default_start_index() -> u64 {
    1
}

/// Everything needed to regenerate a scrambled Halton subsequence: one prime,
/// index map and digit permutation per coordinate.
///
/// Coordinate `i` of point `n` is `phi_{p_i, pi_i}(f_i(n))` where `f_i` is
/// `poly[i]` when present and `shifts[i] * n` otherwise.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScrambleConfig {
    pub primes: Vec<u32>,
    pub shifts: Vec<u64>,
    pub perms: Vec<Permutation>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub poly: Option<Vec<PermPolynomial>>,
    #[serde(default = "default_start_index")]
    pub start_index: u64,
    #[serde(default)]
    pub convention: HammersleyConvention,
}

impl ScrambleConfig {
    /// Shifted, scrambled Halton subsequence with the default index start.
    pub fn new(primes: Vec<u32>, shifts: Vec<u64>, perms: Vec<Permutation>) -> Result<Self> {
        let cfg =
            Self { primes, shifts, perms, poly: None, start_index: 1, convention: HammersleyConvention::default() };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Plain Halton sequence in the given bases.
    pub fn halton(primes: &[u32]) -> Result<Self> {
        let perms = primes.iter().map(|&p| Permutation::identity(p.max(2))).collect();
        Self::new(primes.to_vec(), vec![1; primes.len()], perms)
    }

    /// One-dimensional scrambled van der Corput subsequence.
    pub fn van_der_corput(p: u32, shift: u64, perm: Permutation) -> Result<Self> {
        Self::new(vec![p], vec![shift], vec![perm])
    }

    /// Builder-style setter for `start_index`.
    pub fn with_start_index(mut self, start: u64) -> Self {
        self.start_index = start;
        self
    }

    pub fn with_convention(mut self, convention: HammersleyConvention) -> Self {
        self.convention = convention;
        self
    }

    pub fn dims(&self) -> usize {
        self.primes.len()
    }

    /// Index map for coordinate `i`.
    pub fn polynomial(&self, i: usize) -> PermPolynomial {
        match &self.poly {
            Some(polys) => polys[i].clone(),
            None => PermPolynomial::affine(self.shifts[i] as i64, 0),
        }
    }

    /// Restriction to the first `k` coordinates.
    pub fn prefix(&self, k: usize) -> Self {
        Self {
            primes: self.primes[..k].to_vec(),
            shifts: self.shifts[..k].to_vec(),
            perms: self.perms[..k].to_vec(),
            poly: self.poly.as_ref().map(|p| p[..k].to_vec()),
            start_index: self.start_index,
            convention: self.convention,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let d = self.primes.len();
        if d == 0 {
            return Err(Error::Config("at least one dimension is required".into()));
        }
        if self.shifts.len() != d || self.perms.len() != d {
            return Err(Error::Config(format!(
                "expected {d} shifts and permutations, got {} and {}",
                self.shifts.len(),
                self.perms.len()
            )));
        }
        if let Some(polys) = &self.poly {
            if polys.len() != d {
                return Err(Error::Config(format!("expected {d} polynomials, got {}", polys.len())));
            }
        }
        for (i, &p) in self.primes.iter().enumerate() {
            if !is_prime(u64::from(p)) {
                return Err(Error::Config(format!("base {p} is not prime")));
            }
            if self.primes[..i].contains(&p) {
                return Err(Error::Config(format!("prime {p} repeated")));
            }
            if self.perms[i].base() != p {
                return Err(Error::Config(format!(
                    "permutation {i} acts on {} digits but the base is {p}",
                    self.perms[i].base()
                )));
            }
            if self.poly.is_none() && self.shifts[i].is_multiple_of(u64::from(p)) {
                return Err(Error::Config(format!("shift {} is not coprime to {p}", self.shifts[i])));
            }
            if !validate_perm_polynomial(&self.polynomial(i), u64::from(p), 2)? {
                return Err(Error::Config(format!("index map {i} is not a permutation polynomial mod {p}^2")));
            }
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json() + "\n")?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn perm(v: &[u32]) -> Permutation {
        Permutation::new(v.to_vec()).unwrap()
    }

    #[test]
    fn rejects_bad_configs() {
        let ok = ScrambleConfig::new(vec![2, 3], vec![1, 2], vec![perm(&[0, 1]), perm(&[0, 2, 1])]);
        assert!(ok.is_ok());
        assert!(ScrambleConfig::new(vec![2, 2], vec![1, 1], vec![perm(&[0, 1]), perm(&[0, 1])]).is_err());
        assert!(ScrambleConfig::new(vec![3], vec![3], vec![perm(&[0, 1, 2])]).is_err());
        assert!(ScrambleConfig::new(vec![4], vec![1], vec![perm(&[0, 1, 2, 3])]).is_err());
        assert!(ScrambleConfig::new(vec![3], vec![1], vec![perm(&[0, 1])]).is_err());
        assert!(ScrambleConfig::new(vec![], vec![], vec![]).is_err());
    }

    #[test]
    fn json_keys_and_defaults() {
        let text = r#"{"primes":[2,3],"shifts":[9,28],"perms":[[0,1],[0,2,1]]}"#;
        let cfg = ScrambleConfig::from_json(text).unwrap();
        assert_eq!(cfg.start_index, 1);
        assert_eq!(cfg.convention, HammersleyConvention::Indexed);
        let back = ScrambleConfig::from_json(&cfg.to_json()).unwrap();
        assert_eq!(back, cfg);

        let with_poly =
            r#"{"primes":[3],"shifts":[1],"perms":[[0,1,2]],"poly":[[1,2]],"start_index":0,"convention":"classic"}"#;
        let cfg = ScrambleConfig::from_json(with_poly).unwrap();
        assert_eq!(cfg.polynomial(0), PermPolynomial::affine(2, 1));
        assert_eq!(cfg.convention, HammersleyConvention::Classic);

        let bad_perm = r#"{"primes":[3],"shifts":[1],"perms":[[0,1,1]]}"#;
        assert!(ScrambleConfig::from_json(bad_perm).is_err());
        let bad_poly = r#"{"primes":[2],"shifts":[1],"perms":[[0,1]],"poly":[[0,1,1]]}"#;
        assert!(ScrambleConfig::from_json(bad_poly).is_err());
    }
}
