//! p-adic discrepancy of integer sequences and the residue-counting
//! invariants behind the subsequence discrepancy bounds.
//!
//! All quantities here are exact: counts are integers and disc measures are
//! `p^{-k}` as fractions.

use std::collections::HashMap;

use num_traits::{Signed, Zero};

use crate::sequence::{validate_perm_polynomial, PermPolynomial, Permutation, ENUMERATION_GUARD};
use crate::{Error, Rational, Result};

/// Occupancy of the residue classes modulo `p^level`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidueProfile {
    pub p: u64,
    pub level: u32,
    pub counts: HashMap<u64, usize>,
}

impl ResidueProfile {
    pub fn new(values: &[u64], p: u64, level: u32) -> Self {
        let mut counts = HashMap::new();
        match p.checked_pow(level) {
            Some(m) => values.iter().for_each(|&v| *counts.entry(v % m).or_insert(0) += 1),
            None => values.iter().for_each(|&v| *counts.entry(v).or_insert(0) += 1),
        }
        Self { p, level, counts }
    }

    pub fn total(&self) -> usize {
        self.counts.values().sum()
    }

    pub fn max_count(&self) -> usize {
        self.counts.values().copied().max().unwrap_or(0)
    }
}

/// Where the supremum of the p-adic discrepancy came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AttainedAt {
    Level(u32),
    /// Limit of `m / N - p^{-k}` for a stabilised occupied disc as `k -> oo`.
    Tail,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PadicDiscResult {
    pub value: Rational,
    pub attained: AttainedAt,
    /// Largest disc occupancy at the stopping level.
    pub m_max_tail: usize,
    pub stop_level: u32,
}

fn inv_pow(p: u64, k: u32) -> Option<Rational> {
    i128::from(p).checked_pow(k).map(|d| Rational::new(1, d))
}

/// `sup_{k, z} |#(Disc(z, k) ∩ {x_1..x_N}) / N - p^{-k}|` for non-negative
/// integers.
///
/// Levels are enumerated until all distinct values occupy distinct classes;
/// beyond that level every occupied disc keeps its count `m` and its deviation
/// increases towards `m / N`, so the supremum is the larger of the enumerated
/// maximum and `m_max / N`.
pub fn padic_discrepancy(values: &[u64], p: u64) -> Result<PadicDiscResult> {
    if values.is_empty() {
        return Err(Error::Domain("p-adic discrepancy of an empty sequence".into()));
    }
    if p < 2 {
        return Err(Error::Domain(format!("p must be at least 2, got {p}")));
    }
    let n = values.len() as i128;
    let distinct = {
        let mut v = values.to_vec();
        v.sort_unstable();
        v.dedup();
        v.len()
    };
    let mut best = Rational::zero();
    let mut attained = AttainedAt::Level(0);
    let mut level = 0u32;
    let profile = loop {
        let measure = inv_pow(p, level)
            .ok_or_else(|| Error::Resource(format!("p^{level} exceeds 128-bit range before values separate")))?;
        let profile = ResidueProfile::new(values, p, level);
        let mut worst = profile
            .counts
            .values()
            .map(|&c| (Rational::new(c as i128, n) - measure).abs())
            .max()
            .unwrap_or_else(Rational::zero);
        // empty classes deviate by the full measure
        let classes = i128::from(p).checked_pow(level);
        if classes.is_none_or(|c| c > profile.counts.len() as i128) && measure > worst {
            worst = measure;
        }
        if worst > best {
            best = worst;
            attained = AttainedAt::Level(level);
        }
        if profile.counts.len() == distinct {
            break profile;
        }
        level += 1;
    };
    let m_max = profile.max_count();
    let tail = Rational::new(m_max as i128, n);
    if tail > best {
        best = tail;
        attained = AttainedAt::Tail;
    }
    Ok(PadicDiscResult { value: best, attained, m_max_tail: m_max, stop_level: level })
}

/// Number of base-`p` digits needed for residues modulo `p^k`.
fn relabel_mod(value: u64, perm: &Permutation, k: u32) -> u64 {
    perm.relabel_digits(value, k)
}

/// Whether every residue class modulo `p^k`, `k <= k_max`, holds
/// `floor(N p^{-k})` or `floor(N p^{-k}) + 1` of the digitwise relabelled
/// values `pi(f(n))`, `n = 1..N`.
pub fn verify_equidistribution(f: &PermPolynomial, perm: &Permutation, p: u64, n: usize, k_max: u32) -> Result<bool> {
    if u64::from(perm.base()) != p {
        return Err(Error::Config(format!("permutation base {} does not match p = {p}", perm.base())));
    }
    let top = p
        .checked_pow(k_max)
        .filter(|&m| m <= ENUMERATION_GUARD)
        .ok_or_else(|| Error::Resource(format!("{p}^{k_max} exceeds the enumeration guard")))?;
    let values: Vec<u64> = (1..=n as u64).map(|i| relabel_mod(f.eval_mod(i, top), perm, k_max)).collect();
    for k in 0..=k_max {
        let m = p.pow(k);
        let mut counts = vec![0usize; m as usize];
        for &v in &values {
            counts[(v % m) as usize] += 1;
        }
        let lo = n / m as usize;
        if counts.iter().any(|&c| c != lo && c != lo + 1) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Relabelled values `pi(f(n))`, `n = 1..N`, with the digit depth of the
/// largest value. Used to feed [`padic_discrepancy`].
pub fn relabelled_values(f: &PermPolynomial, perm: &Permutation, p: u64, n: usize) -> Result<Vec<u64>> {
    let raw: Vec<u64> = (1..=n as i128)
        .map(|i| {
            f.eval(i)
                .filter(|v| (0..=i128::from(u64::MAX)).contains(v))
                .map(|v| v as u64)
                .ok_or_else(|| Error::Domain(format!("f({i}) is not a non-negative 64-bit integer")))
        })
        .collect::<Result<_>>()?;
    let max = raw.iter().copied().max().unwrap_or(0);
    let mut depth = 0u32;
    let mut rest = max;
    while rest > 0 {
        depth += 1;
        rest /= p;
    }
    Ok(raw.into_iter().map(|v| relabel_mod(v, perm, depth)).collect())
}

/// Minimum and maximum occupancy over all joint residue boxes
/// `(z_i mod p_i^{k_i})` of `(a_1 n, ..., a_d n)`, `n = 1..N`.
pub fn crt_count_range(shifts: &[u64], primes: &[u64], levels: &[u32], n: usize) -> Result<(usize, usize)> {
    if shifts.len() != primes.len() || primes.len() != levels.len() {
        return Err(Error::Domain("shifts, primes and levels must have equal length".into()));
    }
    for (&a, &p) in shifts.iter().zip(primes) {
        if num_integer::gcd(a, p) != 1 {
            return Err(Error::Domain(format!("shift {a} is not coprime to {p}")));
        }
    }
    let moduli: Vec<u64> = primes.iter().zip(levels).map(|(&p, &k)| p.checked_pow(k).unwrap_or(u64::MAX)).collect();
    let total = moduli
        .iter()
        .try_fold(1u64, |acc, &m| acc.checked_mul(m))
        .filter(|&t| t <= ENUMERATION_GUARD)
        .ok_or_else(|| Error::Resource(format!("modulus product exceeds the guard {ENUMERATION_GUARD}")))?;
    let mut counts = vec![0usize; total as usize];
    for i in 1..=n as u64 {
        let mut idx = 0u64;
        for (&a, &m) in shifts.iter().zip(&moduli) {
            idx = idx * m + (a % m) * (i % m) % m;
        }
        counts[idx as usize] += 1;
    }
    let min = counts.iter().copied().min().unwrap_or(0);
    let max = counts.iter().copied().max().unwrap_or(0);
    Ok((min, max))
}

/// Meijer's transfer bound `delta (2 + 2(p-1)/ln p * ln(1/delta))` on the
/// extreme discrepancy of `phi_p(x_n)` given the p-adic discrepancy `delta`.
pub fn meijer_transfer_bound(delta: f64, p: u64) -> Result<f64> {
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(Error::Domain(format!("delta must lie in (0, 1], got {delta}")));
    }
    if p < 2 {
        return Err(Error::Domain(format!("p must be at least 2, got {p}")));
    }
    let pf = p as f64;
    Ok(delta * (2.0 + 2.0 * (pf - 1.0) / pf.ln() * (1.0 / delta).ln()))
}

/// Check `validate_perm_polynomial(f, p, 2)` and report a configuration error
/// otherwise.
pub fn require_perm_polynomial(f: &PermPolynomial, p: u64) -> Result<()> {
    if validate_perm_polynomial(f, p, 2)? {
        Ok(())
    } else {
        Err(Error::Config(format!("{:?} is not a permutation polynomial mod {p}^2", f.coefficients())))
    }
}

/// Parameters of [`padic_suite`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PadicSuiteParams {
    pub primes: Vec<u64>,
    /// Shifts `1..=max_shift` coprime to each prime.
    pub max_shift: u64,
    /// Random zero-fixing permutations per (prime, shift).
    pub perms: usize,
    pub sizes: Vec<usize>,
    pub seed: u64,
}

impl Default for PadicSuiteParams {
    fn default() -> Self {
        Self { primes: vec![2, 3, 5, 7, 11], max_shift: 20, perms: 5, sizes: vec![10, 100, 1000], seed: 0 }
    }
}

/// Outcome of one invariant over all cases of the suite.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvariantReport {
    pub name: &'static str,
    pub cases: usize,
    pub failures: usize,
    pub first_failure: Option<String>,
}

impl InvariantReport {
    fn new(name: &'static str) -> Self {
        Self { name, cases: 0, failures: 0, first_failure: None }
    }

    fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(what());
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

impl std::fmt::Display for InvariantReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        write!(f, "{status} {} ({} cases, {} failures)", self.name, self.cases, self.failures)?;
        if let Some(w) = &self.first_failure {
            write!(f, " first: {w}")?;
        }
        Ok(())
    }
}

fn ceil_log(n: usize, p: u64) -> u32 {
    let mut k = 0;
    let mut m = 1u64;
    while m < n as u64 {
        m *= p;
        k += 1;
    }
    k
}

/// Check the residue invariants of scrambled subsequences `pi(a n)` over a
/// grid of primes, coprime shifts, random permutations and sizes:
/// equidistribution up to level `ceil(log_p N) + 1`, p-adic discrepancy
/// exactly `1/N`, the transfer bound dominating the measured extreme
/// discrepancy, and joint residue counts spreading by at most one.
pub fn padic_suite(params: &PadicSuiteParams) -> Result<Vec<InvariantReport>> {
    use rayon::prelude::*;

    use crate::discrepancy::extreme_disc_1d;
    use crate::rng::SplitMix64;
    use crate::search::random_permutation_zero_fixed;
    use crate::sequence::generate_point_set;
    use crate::ScrambleConfig;

    let mut cases = Vec::new();
    for &p in &params.primes {
        if !crate::sequence::is_prime(p) {
            return Err(Error::Domain(format!("{p} is not prime")));
        }
        let mut rng = SplitMix64::substream(params.seed, p);
        for a in (1..=params.max_shift).filter(|a| a % p != 0) {
            for _ in 0..params.perms {
                let perm = random_permutation_zero_fixed(p as u32, &mut rng);
                for &n in &params.sizes {
                    cases.push((p, a, perm.clone(), n));
                }
            }
        }
    }
    let outcomes = cases
        .par_iter()
        .map(|(p, a, perm, n)| -> Result<[bool; 3]> {
            let (p, a, n) = (*p, *a, *n);
            let f = PermPolynomial::affine(a as i64, 0);
            let equi = verify_equidistribution(&f, perm, p, n, ceil_log(n, p) + 1)?;
            let disc = padic_discrepancy(&relabelled_values(&f, perm, p, n)?, p)?;
            let exact = disc.value == Rational::new(1, n as i128);
            let cfg = ScrambleConfig::van_der_corput(p as u32, a, perm.clone())?;
            let measured = extreme_disc_1d(&generate_point_set(&cfg, n)?)?.value;
            let transfer = n < 2 || meijer_transfer_bound(1.0 / n as f64, p)? >= measured;
            Ok([equi, exact, transfer])
        })
        .collect::<Result<Vec<_>>>()?;

    let names = ["equidistribution", "padic_discrepancy_is_1/N", "transfer_bound_dominates"];
    let mut reports: Vec<InvariantReport> = names.iter().map(|n| InvariantReport::new(n)).collect();
    for ((p, a, perm, n), res) in cases.iter().zip(&outcomes) {
        for (r, &ok) in reports.iter_mut().zip(res) {
            r.record(ok, || format!("p={p} a={a} perm={:?} N={n}", perm.as_slice()));
        }
    }

    let mut crt = InvariantReport::new("crt_spread_at_most_1");
    let mut rng = SplitMix64::substream(params.seed, 0);
    let primes = &params.primes;
    for _ in 0..200 {
        let dims = 1 + rng.below(primes.len().min(3) as u64) as usize;
        let mut ps: Vec<u64> = primes.clone();
        for i in 0..dims {
            let j = i + rng.below((ps.len() - i) as u64) as usize;
            ps.swap(i, j);
        }
        ps.truncate(dims);
        let mut levels = Vec::new();
        let mut modulus = 1u64;
        for &p in &ps {
            let mut k = rng.below(3) as u32;
            while k > 0 && modulus * p.pow(k) > 10_000 {
                k -= 1;
            }
            modulus *= p.pow(k);
            levels.push(k);
        }
        let shifts: Vec<u64> = ps
            .iter()
            .map(|&p| loop {
                let a = 1 + rng.below(50);
                if !a.is_multiple_of(p) {
                    break a;
                }
            })
            .collect();
        let n = 1 + rng.below(2000) as usize;
        let (lo, hi) = crt_count_range(&shifts, &ps, &levels, n)?;
        crt.record(hi - lo <= 1, || format!("primes={ps:?} shifts={shifts:?} levels={levels:?} N={n}"));
    }
    reports.push(crt);
    Ok(reports)
}
