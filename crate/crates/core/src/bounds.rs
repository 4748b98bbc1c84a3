//! Closed-form discrepancy bounds and the constants of the probabilistic
//! `c sqrt(d / N)` bound. All logarithms are natural.
//!
//! The asymptotic bounds for shifted subsequences and Halton subsequences
//! return their leading terms only; the lower-order terms carry unspecified
//! constants.

use std::f64::consts::{LN_2, PI};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// The constant `c` of the `c sqrt(d / N)` bound as printed.
pub const C_STAR: f64 = 2.463_183_2;
/// Slope and offset of the printed exponent `-(1.6728349 c^2 - 10.1495427) d`.
pub const PROB_SLOPE: f64 = 1.672_834_9;
pub const PROB_OFFSET: f64 = 10.149_542_7;
/// Printed scale of the quantile form, `1 / sqrt(PROB_SLOPE)` up to rounding.
pub const QUANTILE_SCALE: f64 = 0.773_167_3;
/// Additive offset in `tau_mu = ln 2 / (mu - sigma) + offset`.
pub const TAU_OFFSET: f64 = 0.021_201_08;
/// Earlier constant, kept for comparison.
pub const C_PREVIOUS: f64 = 2.4968;

fn need(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Domain(msg()))
    }
}

fn ln_n(n: u64) -> f64 {
    (n as f64).ln()
}

/// `1/N + (b+1)/(2N) + (b-1)/(2 ln b) * ln N / N`.
pub fn vdc_star_bound(b: u32, n: u64) -> Result<f64> {
    need(b >= 2, || format!("base must be at least 2, got {b}"))?;
    need(n >= 1, || "N must be at least 1".into())?;
    let (b, nf) = (f64::from(b), n as f64);
    Ok(1.0 / nf + (b + 1.0) / (2.0 * nf) + (b - 1.0) / (2.0 * b.ln()) * ln_n(n) / nf)
}

/// Leading term `(p-1)/(2 ln p) * ln N / N` of the extreme discrepancy bound
/// for `phi_{p,pi}(f(n))` with a permutation polynomial `f`.
pub fn subsequence_extreme_bound(p: u32, n: u64) -> Result<f64> {
    need(p >= 2, || format!("p must be at least 2, got {p}"))?;
    need(n >= 2, || "N must be at least 2".into())?;
    let pf = f64::from(p);
    Ok((pf - 1.0) / (2.0 * pf.ln()) * ln_n(n) / n as f64)
}

/// Leading term `(ln N)^d / N * prod 2(p_i - 1)/ln p_i` for scrambled Halton
/// subsequences.
pub fn halton_extreme_bound(primes: &[u32], n: u64) -> Result<f64> {
    need(!primes.is_empty(), || "at least one prime is required".into())?;
    need(n >= 2, || "N must be at least 2".into())?;
    let mut sorted = primes.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    need(sorted.len() == primes.len(), || format!("primes must be distinct: {primes:?}"))?;
    need(primes.iter().all(|&p| p >= 2), || format!("invalid base in {primes:?}"))?;
    let factor: f64 = primes.iter().map(|&p| 2.0 * (f64::from(p) - 1.0) / f64::from(p).ln()).product();
    Ok(ln_n(n).powi(primes.len() as i32) / n as f64 * factor)
}

/// Reading of the free `s` in Atanassov's bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum AtanassovS {
    /// `s` equals the number of bases.
    #[default]
    Dimension,
    Value(f64),
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|i| i as f64).product()
}

/// Atanassov's bound on the star discrepancy of the Halton sequence:
/// `(1/d! prod_j (floor(b_j/2) ln N / ln b_j + s)
///   + sum_{k<d} b_{k+1}/k! prod_{j<=k} (floor(b_j/2) ln N / ln b_j + k)) / N`.
pub fn atanassov_star_bound(bases: &[u32], n: u64, s: AtanassovS) -> Result<f64> {
    need(!bases.is_empty(), || "at least one base is required".into())?;
    need(bases.iter().all(|&b| b >= 2), || format!("invalid base in {bases:?}"))?;
    need(n >= 2, || "N must be at least 2".into())?;
    let d = bases.len();
    let s = match s {
        AtanassovS::Dimension => d as f64,
        AtanassovS::Value(v) => v,
    };
    let l = ln_n(n);
    let t: Vec<f64> = bases.iter().map(|&b| f64::from(b / 2) * l / f64::from(b).ln()).collect();
    let lead = t.iter().map(|x| x + s).product::<f64>() / factorial(d);
    let sum: f64 =
        (0..d).map(|k| f64::from(bases[k]) / factorial(k) * t[..k].iter().map(|x| x + k as f64).product::<f64>()).sum();
    Ok((lead + sum) / n as f64)
}

/// Bracketing-number bound `d^d / d! * eps^{-d}`.
pub fn bracketing_bound(d: u32, eps: f64) -> Result<f64> {
    need(d >= 3, || format!("the bracketing bound needs d >= 3, got {d}"))?;
    need(eps > 0.0 && eps <= 1.0, || format!("eps must lie in (0, 1], got {eps}"))?;
    let df = f64::from(d);
    Ok((df.ln() * df - ln_factorial(d) - df * eps.ln()).exp())
}

fn ln_factorial(d: u32) -> f64 {
    (1..=d).map(|i| f64::from(i).ln()).sum()
}

/// Stirling form `sqrt(2 / (pi d)) e^d 2^{mu d}` of the `2^{-mu}`-cover size.
pub fn cover_size_stirling(d: u32, mu: u32) -> f64 {
    let df = f64::from(d);
    ((2.0 / (PI * df)).ln() / 2.0 + df + f64::from(mu) * df * LN_2).exp()
}

/// Auxiliary constants of the cover argument for a `2^{-mu}`-cover.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoverParams {
    pub mu: u32,
    pub d: u32,
    pub sigma: f64,
    pub zeta: f64,
    pub tau_mu: f64,
    pub c_mu: f64,
    pub c0: f64,
    pub c1: f64,
    pub c: f64,
    /// Value of the bracketed factor of the probability bound.
    pub bracket: f64,
    /// Whether `bracket <= sqrt(pi d / 2)`.
    pub bracket_ok: bool,
}

impl CoverParams {
    pub fn mu_minus_sigma(&self) -> f64 {
        f64::from(self.mu) - self.sigma
    }

    /// Largest deviation between the stored fields and a fresh evaluation of
    /// their defining formulas.
    pub fn consistency_error(&self) -> f64 {
        let (mu, d) = (f64::from(self.mu), f64::from(self.d));
        let checks = [
            self.sigma - (mu - mu * LN_2 - 1.0 - LN_2 / d),
            self.zeta - (1.0 + LN_2 + LN_2 / d),
            self.c0 - ((mu - self.sigma) / 2.0).sqrt(),
            self.c_mu - 1.0 / (1.0 - ((mu + 1.0) / (2.0 * mu)).sqrt()),
            self.tau_mu - (LN_2 / (mu - self.sigma) + TAU_OFFSET),
            self.c1 - (4.0 * self.tau_mu * (1.0 + 1.0 / (3.0 * self.c_mu))).sqrt(),
            self.c - self.c0 * (1.0 + self.c1 * self.c_mu * (mu / 2f64.powf(mu)).sqrt()),
        ];
        checks.iter().map(|x| x.abs()).fold(0.0, f64::max)
    }
}

pub fn cover_constant_pipeline(mu: u32, d: u32) -> Result<CoverParams> {
    need(mu >= 2, || format!("mu must be at least 2, got {mu}"))?;
    need(d >= 5, || format!("the pipeline needs d >= 5, got {d}"))?;
    let (muf, df) = (f64::from(mu), f64::from(d));
    let sigma = muf - muf * LN_2 - 1.0 - LN_2 / df;
    let zeta = 1.0 + LN_2 + LN_2 / df;
    let gap = muf - sigma;
    let c0 = (gap / 2.0).sqrt();
    let c_mu = 1.0 / (1.0 - ((muf + 1.0) / (2.0 * muf)).sqrt());
    let tau_mu = LN_2 / gap + TAU_OFFSET;
    let c1 = (4.0 * tau_mu * (1.0 + 1.0 / (3.0 * c_mu))).sqrt();
    let c = c0 * (1.0 + c1 * c_mu * (muf / 2f64.powf(muf)).sqrt());
    let num = (-(gap * (muf * tau_mu - 1.0) + (1.0 - LN_2) * muf - zeta - sigma) * df).exp();
    let den = 1.0 - (-(gap * tau_mu - LN_2) * df).exp();
    let bracket = 1.0 + num / den;
    let bracket_ok = den > 0.0 && bracket <= (PI * df / 2.0).sqrt();
    Ok(CoverParams { mu, d, sigma, zeta, tau_mu, c_mu, c0, c1, c, bracket, bracket_ok })
}

/// `(1 - exp(-(PROB_SLOPE c^2 - PROB_OFFSET) d), QUANTILE_SCALE sqrt(PROB_OFFSET + ln(1/(1-q))/d))`.
pub fn probability_forms(c: f64, d: u32, q: f64) -> Result<(f64, f64)> {
    need(d >= 5, || format!("the probability bound needs d >= 5, got {d}"))?;
    need(q > 0.0 && q < 1.0, || format!("q must lie in (0, 1), got {q}"))?;
    let df = f64::from(d);
    let prob = 1.0 - (-(PROB_SLOPE * c * c - PROB_OFFSET) * df).exp();
    let quantile = QUANTILE_SCALE * (PROB_OFFSET + (1.0 / (1.0 - q)).ln() / df).sqrt();
    Ok((prob, quantile))
}

/// `c sqrt(d / N)`.
pub fn sqrt_bound(c: f64, d: u32, n: u64) -> Result<f64> {
    need(n >= 1, || "N must be at least 1".into())?;
    Ok(c * (f64::from(d) / n as f64).sqrt())
}

/// `ceil(c^2 d / eps^2)`: the fewest points with `c sqrt(d / N) <= eps`, an
/// upper bound on the inverse star discrepancy.
pub fn inverse_sqrt_bound(c: f64, d: u32, eps: f64) -> Result<u64> {
    need(eps > 0.0 && eps <= 1.0, || format!("eps must lie in (0, 1], got {eps}"))?;
    Ok((c * c * f64::from(d) / (eps * eps)).ceil() as u64)
}

/// Explicit upper bounds on the star discrepancy of Hammersley point sets.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HammersleyBound {
    /// `7/(2N) + ln N / (2 ln 2 N)`, base 2.
    Base2,
    /// `3/N + (ln N / (2 ln 2) + 3/2)(ln N / ln 3 + 2) / N`, bases 2 and 3.
    Base23,
    /// Atanassov's bound for the underlying Halton sequence plus `1/N`.
    Atanassov { bases: Vec<u32>, s: AtanassovS },
}

impl HammersleyBound {
    pub fn eval(&self, n: u64) -> Result<f64> {
        need(n >= 1, || "N must be at least 1".into())?;
        let nf = n as f64;
        let l = nf.ln();
        Ok(match self {
            HammersleyBound::Base2 => 7.0 / (2.0 * nf) + l / (2.0 * LN_2 * nf),
            HammersleyBound::Base23 => 3.0 / nf + (l / (2.0 * LN_2) + 1.5) * (l / 3f64.ln() + 2.0) / nf,
            HammersleyBound::Atanassov { bases, s } => {
                if n == 1 {
                    // the Halton bound needs N >= 2; a single point has D* < 1
                    return Ok(f64::INFINITY);
                }
                atanassov_star_bound(bases, n, *s)? + 1.0 / nf
            }
        })
    }

    /// Dimension of the lifted point set.
    pub fn dim(&self) -> u32 {
        match self {
            HammersleyBound::Base2 => 2,
            HammersleyBound::Base23 => 3,
            HammersleyBound::Atanassov { bases, .. } => bases.len() as u32 + 1,
        }
    }
}

impl fmt::Display for HammersleyBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HammersleyBound::Base2 => f.write_str("hammersley-2"),
            HammersleyBound::Base23 => f.write_str("hammersley-2-3"),
            HammersleyBound::Atanassov { bases, s } => {
                let b: Vec<String> = bases.iter().map(u32::to_string).collect();
                match s {
                    AtanassovS::Dimension => write!(f, "atanassov-{}+1/N", b.join("-")),
                    AtanassovS::Value(v) => write!(f, "atanassov-{}(s={v})+1/N", b.join("-")),
                }
            }
        }
    }
}

const CROSSOVER_LIMIT: u64 = 1_000_000_000;

/// The last `N*` with `bound(N*) >= c sqrt(d / N*)`, such that the bound stays
/// below on `(N*, 10 N*]`. Returns 0 when the bound is below everywhere
/// scanned.
///
/// Every `N` up to `10 N*` is checked, then a geometric grid of 1000 points
/// up to `1000 N*` confirms that the crossing is not followed by another.
pub fn crossover_threshold(d: u32, bound: &HammersleyBound, c: f64) -> Result<u64> {
    let above = |n: u64| -> Result<bool> { Ok(bound.eval(n)? >= sqrt_bound(c, d, n)?) };
    let mut last = 0u64;
    let mut n = 1u64;
    let mut limit = 1000u64;
    loop {
        while n <= limit {
            if above(n)? {
                last = n;
            }
            n += 1;
        }
        if limit >= last.saturating_mul(10).max(1000) {
            break;
        }
        limit = limit.saturating_mul(10);
        if limit > CROSSOVER_LIMIT {
            return Err(Error::NotFound(format!("no crossover of {bound} below {CROSSOVER_LIMIT}")));
        }
    }
    let lo = (last.max(1) as f64) * 10.0;
    let hi = lo * 100.0;
    for i in 0..1000 {
        let m = (lo * (hi / lo).powf(i as f64 / 999.0)).round() as u64;
        if above(m)? {
            return Err(Error::NotFound(format!("{bound} crosses back above at N = {m}")));
        }
    }
    Ok(last)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum JumpMode {
    Sequence,
    Pointset,
}

/// How far the star discrepancy bound certifies ahead of a computed value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JumpPlan {
    pub n0: u64,
    pub n1: u64,
    pub d0: f64,
    pub b: f64,
    pub alpha: f64,
    pub mode: JumpMode,
    /// The triangle-inequality estimate at `n1` stays below `c sqrt(d / n0)`.
    pub valid: bool,
}

/// With `b = c sqrt(d / N0) - D0`, any `N1 <= alpha N0` satisfies
/// `D_{N1} <= D0 / alpha + (alpha - 1)/alpha`, where `alpha = 1/(1 - b)` for
/// sequences and `(1 - 1/N0)/(1 - b)` for Hammersley point sets.
pub fn jump_plan(n0: u64, d0: f64, d: u32, c: f64, mode: JumpMode) -> Result<JumpPlan> {
    need(n0 >= 1, || "N0 must be at least 1".into())?;
    let target = sqrt_bound(c, d, n0)?;
    let b = target - d0;
    if b <= 0.0 {
        return Err(Error::Domain(format!("D0 = {d0} already exceeds c sqrt(d/N0) = {target}")));
    }
    need(b < 1.0, || format!("slack b = {b} must be below 1"))?;
    let alpha = match mode {
        JumpMode::Sequence => 1.0 / (1.0 - b),
        JumpMode::Pointset => (1.0 - 1.0 / n0 as f64) / (1.0 - b),
    };
    need(alpha > 1.0, || format!("no jump possible: alpha = {alpha}"))?;
    let n1 = (alpha * n0 as f64).floor() as u64;
    let mut estimate = d0 / alpha + (alpha - 1.0) / alpha;
    if mode == JumpMode::Pointset {
        estimate += 1.0 / n1 as f64;
    }
    let valid = estimate <= target * (1.0 + 1e-12);
    Ok(JumpPlan { n0, n1, d0, b, alpha, mode, valid })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn vdc_examples() {
        assert!(close(vdc_star_bound(2, 100).unwrap(), 0.0582193, 1e-6));
        assert_eq!(vdc_star_bound(2, 1).unwrap(), 2.5);
        assert!(vdc_star_bound(1, 4).is_err());
    }

    #[test]
    fn leading_terms() {
        assert!(close(subsequence_extreme_bound(3, 1000).unwrap(), 0.006287, 1e-5));
        let n = 777u64;
        let expect = (n as f64).ln() / (2.0 * LN_2 * n as f64);
        assert!(close(subsequence_extreme_bound(2, n).unwrap(), expect, 1e-15));
        assert!(close(halton_extreme_bound(&[2, 3], 1000).unwrap(), 0.5014, 1e-3));
        // d = 1: factor 2(p-1)/ln p against (p-1)/(2 ln p)
        let ratio = halton_extreme_bound(&[2], n).unwrap() / subsequence_extreme_bound(2, n).unwrap();
        assert!(close(ratio, 4.0, 1e-12));
        assert!(halton_extreme_bound(&[2, 3, 5], 10).unwrap() > 1.0);
        assert!(halton_extreme_bound(&[2, 2], 10).is_err());
    }

    #[test]
    fn atanassov_examples() {
        let v = atanassov_star_bound(&[2], 100, AtanassovS::Dimension).unwrap();
        assert!(close(v, 0.09644, 1e-5));
        assert!(v > 0.0231);
        let s1 = atanassov_star_bound(&[2, 3, 5], 5000, AtanassovS::Value(3.0)).unwrap();
        assert_eq!(s1, atanassov_star_bound(&[2, 3, 5], 5000, AtanassovS::Dimension).unwrap());
    }

    #[test]
    fn bracketing() {
        assert!(close(bracketing_bound(3, 0.5).unwrap(), 36.0, 1e-9));
        assert!(close(bracketing_bound(3, 1.0).unwrap(), 4.5, 1e-12));
        assert!(bracketing_bound(2, 0.5).is_err());
        assert!(bracketing_bound(5, 2f64.powi(-13)).unwrap() <= cover_size_stirling(5, 13));
    }

    #[test]
    fn pipeline_at_mu_13_d_5() {
        let p = cover_constant_pipeline(13, 5).unwrap();
        assert!(close(p.mu_minus_sigma(), 10.1495427, 1e-6));
        assert!(close(p.c, 2.46319, 1e-4));
        assert!(p.bracket_ok);
        assert!(p.consistency_error() < 1e-12);
    }

    #[test]
    fn pipeline_monotone_in_d() {
        let mut prev = f64::INFINITY;
        for d in (5..=1000).chain([1_000_000]) {
            let p = cover_constant_pipeline(13, d).unwrap();
            assert!(p.c <= prev + 1e-15, "d={d}");
            assert!(p.c <= C_STAR + 1e-4);
            assert!(p.bracket_ok, "d={d}");
            prev = p.c;
        }
    }

    #[test]
    fn probability() {
        let (p, _) = probability_forms(C_STAR, 5, 0.5).unwrap();
        assert!(p.abs() < 1e-4);
        let (_, q) = probability_forms(2.0, 5, 0.95).unwrap();
        assert!(close(q, 2.53484, 1e-4));
        assert!(close(QUANTILE_SCALE * QUANTILE_SCALE * PROB_SLOPE, 1.0, 1e-6));
    }

    #[test]
    fn sqrt_bounds() {
        for d in [1u32, 5, 40, 1000] {
            assert!(sqrt_bound(C_STAR, d, 98 * u64::from(d)).unwrap() <= 0.25);
            assert!(close(sqrt_bound(C_STAR, d, 10 * u64::from(d)).unwrap(), 0.7789269, 1e-6));
            assert!(close(sqrt_bound(C_PREVIOUS, d, 10 * u64::from(d)).unwrap(), 0.78956, 1e-5));
        }
        for d in [1u32, 3, 17] {
            for eps in [0.9, 0.25, 0.05, 0.013] {
                let n = inverse_sqrt_bound(C_STAR, d, eps).unwrap();
                assert!(sqrt_bound(C_STAR, d, n).unwrap() <= eps * (1.0 + 1e-12));
                assert!(n == 1 || sqrt_bound(C_STAR, d, n - 1).unwrap() > eps);
            }
        }
    }

    #[test]
    fn explicit_crossovers() {
        assert_eq!(crossover_threshold(2, &HammersleyBound::Base2, 2.463).unwrap(), 1);
        assert_eq!(crossover_threshold(3, &HammersleyBound::Base23, 2.463).unwrap(), 28);
        let b = HammersleyBound::Base23;
        assert!(b.eval(28).unwrap() >= sqrt_bound(2.463, 3, 28).unwrap());
        assert!(b.eval(29).unwrap() < sqrt_bound(2.463, 3, 29).unwrap());
    }

    #[test]
    fn jump() {
        let seq = jump_plan(5000, 0.0045, 4, 2.463, JumpMode::Sequence).unwrap();
        let b = 2.463 * (4.0f64 / 5000.0).sqrt() - 0.0045;
        assert_eq!(seq.n1, (5000.0 / (1.0 - b)).floor() as u64);
        assert!(seq.valid);
        let ps = jump_plan(5000, 0.0045, 4, 2.463, JumpMode::Pointset).unwrap();
        assert!(ps.n1 < seq.n1);
        assert!(close(ps.alpha, (1.0 - 1.0 / 5000.0) / (1.0 - b), 1e-15));
        assert!(jump_plan(100, 0.9, 4, 2.463, JumpMode::Sequence).is_err());
    }

    #[test]
    fn bounds_positive_and_continuous() {
        assert!(vdc_star_bound(2, 2).unwrap() > 0.0);
        let mut n = 100.0f64;
        let mut prev: Option<[f64; 4]> = None;
        while n < 1e9 {
            let m = n as u64;
            let v = [
                vdc_star_bound(3, m).unwrap(),
                subsequence_extreme_bound(5, m).unwrap(),
                halton_extreme_bound(&[2, 3], m).unwrap(),
                atanassov_star_bound(&[2, 3, 5], m, AtanassovS::Dimension).unwrap(),
            ];
            assert!(v.iter().all(|x| *x >= 0.0 && x.is_finite()));
            if let Some(p) = prev {
                // small relative steps on a fine geometric grid
                for (a, b) in p.iter().zip(&v) {
                    assert!((a - b).abs() <= 0.05 * a.max(*b));
                }
            }
            prev = Some(v);
            n *= 1.01;
        }
    }
}
