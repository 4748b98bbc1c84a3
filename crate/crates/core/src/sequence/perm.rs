use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Largest modulus that [`validate_perm_polynomial`] and related counting
/// checks will enumerate.
pub const ENUMERATION_GUARD: u64 = 1 << 24;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// A bijection on the digit set `{0, ..., b-1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Permutation {
    map: Vec<u32>,
}

impl Permutation {
    pub fn new(map: Vec<u32>) -> Result<Self> {
        let b = map.len();
        if b < 2 {
            return Err(Error::Config(format!("permutation must act on at least 2 digits, got {b}")));
        }
        let mut seen = vec![false; b];
        for &v in &map {
            let slot = seen
                .get_mut(v as usize)
                .ok_or_else(|| Error::Config(format!("permutation entry {v} out of range for base {b}")))?;
            if *slot {
                return Err(Error::Config(format!("permutation entry {v} repeated")));
            }
            *slot = true;
        }
        Ok(Self { map })
    }

    pub fn identity(b: u32) -> Self {
        assert!(b >= 2, "base must be at least 2");
        Self { map: (0..b).collect() }
    }

    pub fn base(&self) -> u32 {
        self.map.len() as u32
    }

    #[inline]
    pub fn apply(&self, digit: u32) -> u32 {
        self.map[digit as usize]
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.map
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(i, &v)| i as u32 == v)
    }

    pub fn fixes_zero(&self) -> bool {
        self.map[0] == 0
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.map.len()];
        for (i, &v) in self.map.iter().enumerate() {
            inv[v as usize] = i as u32;
        }
        Self { map: inv }
    }

    /// Relabel the lowest `depth` base-`b` digits of `value`; higher digits
    /// are left untouched.
    pub fn relabel_digits(&self, value: u64, depth: u32) -> u64 {
        let b = u64::from(self.base());
        let mut rest = value;
        let mut out = 0u64;
        let mut scale = 1u64;
        for _ in 0..depth {
            out += u64::from(self.apply((rest % b) as u32)) * scale;
            rest /= b;
            scale = scale.saturating_mul(b);
        }
        out + rest.saturating_mul(scale)
    }
}

impl TryFrom<Vec<u32>> for Permutation {
    type Error = Error;

    fn try_from(map: Vec<u32>) -> Result<Self> {
        Self::new(map)
    }
}

impl From<Permutation> for Vec<u32> {
    fn from(p: Permutation) -> Self {
        p.map
    }
}

/// Integer polynomial `f(n) = sum c_i n^i`, constant term first, used as an
/// index map. The affine case `a n + b` covers shifts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<i64>", into = "Vec<i64>")]
pub struct PermPolynomial {
    coefficients: Vec<i64>,
}

impl PermPolynomial {
    pub fn new(coefficients: Vec<i64>) -> Result<Self> {
        if coefficients.is_empty() {
            return Err(Error::Config("polynomial needs at least one coefficient".into()));
        }
        Ok(Self { coefficients })
    }

    /// `f(n) = slope * n + offset`.
    pub fn affine(slope: i64, offset: i64) -> Self {
        Self { coefficients: vec![offset, slope] }
    }

    pub fn coefficients(&self) -> &[i64] {
        &self.coefficients
    }

    /// Slope of an affine polynomial, if it is one.
    pub fn affine_slope(&self) -> Option<i64> {
        match self.coefficients.as_slice() {
            [_] => Some(0),
            [_, a] => Some(*a),
            _ => None,
        }
    }

    /// Exact evaluation; `None` on overflow.
    pub fn eval(&self, n: i128) -> Option<i128> {
        self.coefficients.iter().rev().try_fold(0i128, |acc, &c| acc.checked_mul(n)?.checked_add(i128::from(c)))
    }

    /// Evaluation modulo `m`, result in `[0, m)`.
    pub fn eval_mod(&self, n: u64, m: u64) -> u64 {
        let m = i128::from(m);
        let n = i128::from(n) % m;
        let r = self.coefficients.iter().rev().fold(0i128, |acc, &c| (acc * n + i128::from(c)).rem_euclid(m));
        r as u64
    }
}

impl TryFrom<Vec<i64>> for PermPolynomial {
    type Error = Error;

    fn try_from(c: Vec<i64>) -> Result<Self> {
        Self::new(c)
    }
}

impl From<PermPolynomial> for Vec<i64> {
    fn from(p: PermPolynomial) -> Self {
        p.coefficients
    }
}

/// Whether `f` induces a bijection on `Z / p^k Z`, by direct enumeration.
pub fn validate_perm_polynomial(f: &PermPolynomial, p: u64, k: u32) -> Result<bool> {
    if p < 2 || k < 1 {
        return Err(Error::Domain(format!("need p >= 2 and k >= 1, got p={p}, k={k}")));
    }
    let m = p
        .checked_pow(k)
        .filter(|&m| m <= ENUMERATION_GUARD)
        .ok_or_else(|| Error::Resource(format!("modulus {p}^{k} exceeds the enumeration guard {ENUMERATION_GUARD}")))?;
    let mut seen = vec![false; m as usize];
    for x in 0..m {
        let y = f.eval_mod(x, m) as usize;
        if seen[y] {
            return Ok(false);
        }
        seen[y] = true;
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_bijections() {
        assert!(Permutation::new(vec![0, 0, 1]).is_err());
        assert!(Permutation::new(vec![0, 3, 1]).is_err());
        assert!(Permutation::new(vec![0]).is_err());
        assert!(Permutation::new(vec![2, 0, 1]).is_ok());
    }

    #[test]
    fn inverse_round_trip() {
        let p = Permutation::new(vec![0, 5, 3, 1, 2, 4, 6]).unwrap();
        let inv = p.inverse();
        for d in 0..7 {
            assert_eq!(inv.apply(p.apply(d)), d);
        }
    }

    #[test]
    fn relabel_digits_depth() {
        let p = Permutation::new(vec![0, 2, 1]).unwrap();
        // 5 = 12_3 -> digits (2,1) -> (1,2) = 2*3 + 1 = 7
        assert_eq!(p.relabel_digits(5, 2), 7);
        // depth 1 only touches the lowest digit: 5 -> 1*3 + 1 = 4
        assert_eq!(p.relabel_digits(5, 1), 4);
    }

    #[test]
    fn polynomial_validation_examples() {
        assert!(validate_perm_polynomial(&PermPolynomial::affine(2, 1), 3, 2).unwrap());
        assert!(!validate_perm_polynomial(&PermPolynomial::new(vec![0, 1, 1]).unwrap(), 2, 1).unwrap());
        assert!(!validate_perm_polynomial(&PermPolynomial::new(vec![0, 0, 0, 1]).unwrap(), 5, 2).unwrap());
    }

    #[test]
    fn polynomial_validation_guard() {
        let f = PermPolynomial::affine(1, 0);
        assert!(matches!(validate_perm_polynomial(&f, 2, 25), Err(Error::Resource(_))));
        assert!(validate_perm_polynomial(&f, 2, 24).unwrap());
    }

    #[test]
    fn cube_map_collides_mod_25() {
        // Independent check of the n^3 example: 0 and 5 both map to 0.
        let f = PermPolynomial::new(vec![0, 0, 0, 1]).unwrap();
        assert_eq!(f.eval_mod(0, 25), 0);
        assert_eq!(f.eval_mod(5, 25), 0);
    }

    #[test]
    fn affine_unit_slopes_are_permutations() {
        for p in [2u64, 3, 5, 7, 11] {
            for a in 1..30i64 {
                let ok = validate_perm_polynomial(&PermPolynomial::affine(a, 3), p, 2).unwrap();
                assert_eq!(ok, !(a as u64).is_multiple_of(p), "a={a} p={p}");
            }
        }
    }

    #[test]
    fn primality() {
        let primes: Vec<u64> = (0..30).filter(|&n| is_prime(n)).collect();
        assert_eq!(primes, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
    }
}
