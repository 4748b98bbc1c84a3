use super::perm::Permutation;
use crate::Rational;

/// Largest integer below which every `u64` converts to `f64` exactly.
const F64_EXACT_INT: u128 = 1 << 53;

/// Base-`b` digits of `n`, least significant first. `0` has no digits.
fn digits(mut n: u64, b: u32) -> Vec<u32> {
    let b = u64::from(b);
    let mut out = Vec::with_capacity(64);
    while n > 0 {
        out.push((n % b) as u32);
        n /= b;
    }
    out
}

/// Value `numer / denom` as `f64`. When both fit in 53 bits this is a single
/// correctly rounded division.
fn ratio_to_f64(numer: u128, denom: u128) -> Option<f64> {
    (numer < F64_EXACT_INT && denom < F64_EXACT_INT).then(|| numer as f64 / denom as f64)
}

/// Radical inverse `phi_b(n) = sum e_j b^{-j-1}` where `n = sum e_j b^j`.
pub fn radical_inverse(n: u64, b: u32) -> f64 {
    assert!(b >= 2, "base must be at least 2");
    let ds = digits(n, b);
    let base = u128::from(b);
    // Reversed digits as an integer over b^L.
    let mut numer: u128 = 0;
    let mut denom: u128 = 1;
    let mut fits = true;
    for &e in &ds {
        match (numer.checked_mul(base), denom.checked_mul(base)) {
            (Some(m), Some(d)) => {
                numer = m + u128::from(e);
                denom = d;
            }
            _ => {
                fits = false;
                break;
            }
        }
    }
    if fits {
        if let Some(v) = ratio_to_f64(numer, denom) {
            return v;
        }
    }
    // Fallback: accumulate the smallest contributions first.
    let bf = f64::from(b);
    ds.iter().rev().fold(0.0, |acc, &e| (acc + f64::from(e)) / bf)
}

/// Exact radical inverse as a reduced fraction.
pub fn radical_inverse_exact(n: u64, b: u32) -> Rational {
    assert!(b >= 2, "base must be at least 2");
    let base = i128::from(b);
    let mut numer: i128 = 0;
    let mut denom: i128 = 1;
    for e in digits(n, b) {
        numer = numer * base + i128::from(e);
        denom *= base;
    }
    Rational::new(numer, denom)
}

/// A scrambled radical inverse together with its boundary flag.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScrambledValue {
    pub value: f64,
    /// Set when the value is exactly `1.0`, which happens only for `n = 0`
    /// with `pi(0) = b - 1`. The value is reported unchanged.
    pub hits_one: bool,
}

/// Scrambled radical inverse `sum pi(e_j) b^{-j-1}` including the infinite
/// tail of permuted zero digits, `pi(0) b^{-L} / (b - 1)`, where `L` is the
/// number of digits of `n`.
pub fn scrambled_radical_inverse(n: u64, b: u32, perm: &Permutation) -> ScrambledValue {
    assert_eq!(perm.base(), b, "permutation base does not match");
    if perm.is_identity() {
        return ScrambledValue { value: radical_inverse(n, b), hits_one: false };
    }
    let exact = scrambled_radical_inverse_exact(n, b, perm);
    let value = ratio_to_f64(*exact.numer() as u128, *exact.denom() as u128).unwrap_or_else(|| {
        let bf = f64::from(b);
        let tail = f64::from(perm.apply(0)) / (bf - 1.0);
        digits(n, b).iter().rev().fold(tail, |acc, &e| (acc + f64::from(perm.apply(e))) / bf)
    });
    ScrambledValue { value, hits_one: value == 1.0 }
}

/// Exact scrambled radical inverse, tail included.
pub fn scrambled_radical_inverse_exact(n: u64, b: u32, perm: &Permutation) -> Rational {
    assert_eq!(perm.base(), b, "permutation base does not match");
    let base = i128::from(b);
    let mut numer: i128 = 0;
    let mut denom: i128 = 1;
    for e in digits(n, b) {
        numer = numer * base + i128::from(perm.apply(e));
        denom *= base;
    }
    // numer/denom + pi(0) / (denom (b - 1))
    let tail = i128::from(perm.apply(0));
    Rational::new(numer * (base - 1) + tail, denom * (base - 1))
}
