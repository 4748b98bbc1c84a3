//! Greedy search over shifts and zero-fixing digit permutations.
//!
//! Dimensions are optimised one after another with all earlier dimensions
//! frozen. Each stage's candidate pool is the baseline (shift 1, identity)
//! followed by, for every admissible shift in increasing order, a batch of
//! random permutations drawn from the stage's own stream. The stage winner
//! is the lexicographic minimum of (value, position in the pool), so the
//! outcome does not depend on how evaluations are scheduled.

use num_integer::Integer;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::discrepancy::{
    estimate_work, star_disc_1d, star_disc_exact, star_disc_exact_with, star_disc_ta, work_budget, DiscMethod,
    DiscrepancyResult, ExactOptions,
};
use crate::rng::SplitMix64;
use crate::sequence::{generate_point_set, hammersley_lift, is_prime};
use crate::{Error, HammersleyConvention, Permutation, PointSet, Result, ScrambleConfig};

/// Candidates evaluated between two updates of the pruning cutoff.
const CHUNK: usize = 32;

/// Default cap for [`inverse_star_search`].
pub const INVERSE_SEARCH_CAP: usize = 1000;

/// `pi(0) = 0`, the remaining entries shuffled by Fisher-Yates with
/// `j = draw mod (i + 1)`.
pub fn random_permutation_zero_fixed(p: u32, rng: &mut SplitMix64) -> Permutation {
    let mut map: Vec<u32> = (0..p).collect();
    let tail = &mut map[1..];
    for i in (1..tail.len()).rev() {
        let j = rng.below(i as u64 + 1) as usize;
        tail.swap(i, j);
    }
    Permutation::new(map).expect("shuffle of a permutation")
}

/// The `d` smallest primes.
pub fn first_primes(d: usize) -> Vec<u32> {
    (2u32..).filter(|&n| is_prime(u64::from(n))).take(d).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBudget {
    pub n_shifts: Vec<u64>,
    pub m_perms: Vec<usize>,
    pub seed: u64,
}

impl SearchBudget {
    pub fn new(n_shifts: Vec<u64>, m_perms: Vec<usize>, seed: u64) -> Result<Self> {
        let b = Self { n_shifts, m_perms, seed };
        b.check(b.n_shifts.len())?;
        Ok(b)
    }

    /// One shift and no random draws per dimension: the plain Halton baseline.
    pub fn baseline(d: usize) -> Self {
        Self { n_shifts: vec![1; d], m_perms: vec![0; d], seed: 0 }
    }

    fn check(&self, d: usize) -> Result<()> {
        if self.n_shifts.len() != d || self.m_perms.len() != d {
            return Err(Error::Config(format!(
                "budget lengths {} / {} do not match dimension {d}",
                self.n_shifts.len(),
                self.m_perms.len()
            )));
        }
        if self.n_shifts.contains(&0) {
            return Err(Error::Config("every dimension needs at least one shift".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StageRecord {
    pub dim: usize,
    pub prime: u32,
    pub shift: u64,
    pub perm: Permutation,
    pub value: f64,
    pub candidates: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchResult {
    pub config: ScrambleConfig,
    pub n: usize,
    pub value: f64,
    pub is_exact: bool,
    pub trace: Vec<StageRecord>,
    pub evaluations: usize,
}

impl SearchResult {
    /// Human-readable stage log.
    pub fn trace_text(&self) -> String {
        let mut out = String::new();
        for r in &self.trace {
            out.push_str(&format!(
                "dim {} p={} shift={} perm={:?} value={:.6} candidates={}\n",
                r.dim + 1,
                r.prime,
                r.shift,
                r.perm.as_slice(),
                r.value,
                r.candidates
            ));
        }
        out.push_str(&format!(
            "final value={:.6} exact={} evaluations={}\n",
            self.value, self.is_exact, self.evaluations
        ));
        out
    }
}

#[derive(Debug, Clone)]
struct Candidate {
    shift: u64,
    perm: Permutation,
}

fn candidate_pool(p: u32, n_shifts: u64, m_perms: usize, rng: &mut SplitMix64) -> Vec<Candidate> {
    let mut pool = vec![Candidate { shift: 1, perm: Permutation::identity(p) }];
    for a in 1..=n_shifts {
        if a.gcd(&u64::from(p)) != 1 {
            continue;
        }
        for _ in 0..m_perms {
            pool.push(Candidate { shift: a, perm: random_permutation_zero_fixed(p, rng) });
        }
    }
    pool
}

/// Outcome of one candidate: its value, and whether that value is complete
/// (a run stopped at the cutoff only proves `value >= cutoff`).
fn evaluate(points: &PointSet, method: &DiscMethod, cutoff: Option<f64>) -> Result<DiscrepancyResult> {
    let exact = |cutoff| star_disc_exact_with(points, &ExactOptions { budget: work_budget(), cutoff });
    match method {
        DiscMethod::Exact => {
            if points.dim() == 1 {
                star_disc_1d(points)
            } else {
                exact(cutoff)
            }
        }
        DiscMethod::Ta(params) => star_disc_ta(points, params),
        DiscMethod::Auto(params) => {
            if points.dim() == 1 {
                star_disc_1d(points)
            } else if estimate_work(points.len(), points.dim()) <= work_budget() {
                exact(cutoff)
            } else {
                star_disc_ta(points, params)
            }
        }
    }
}

/// Lexicographic minimum of (value, pool index) over the pool, evaluated in
/// fixed chunks so that the cutoff sequence is schedule independent.
fn best_of<F>(pool_len: usize, eval: F) -> Result<(usize, DiscrepancyResult)>
where
    F: Fn(usize, Option<f64>) -> Result<DiscrepancyResult> + Sync,
{
    let mut best_idx = 0;
    let mut best = eval(0, None)?;
    for start in (1..pool_len).step_by(CHUNK) {
        let end = (start + CHUNK).min(pool_len);
        let cutoff = best.value;
        let results: Vec<Result<DiscrepancyResult>> =
            (start..end).into_par_iter().map(|k| eval(k, Some(cutoff))).collect();
        for (k, r) in (start..end).zip(results) {
            let r = r?;
            if r.value < best.value {
                best_idx = k;
                best = r;
            }
        }
    }
    Ok((best_idx, best))
}

/// Coordinate-wise greedy search at a fixed `N`.
pub fn greedy_search(primes: &[u32], n: usize, budget: &SearchBudget, method: &DiscMethod) -> Result<SearchResult> {
    if n == 0 {
        return Err(Error::Domain("N must be at least 1".into()));
    }
    budget.check(primes.len())?;
    ScrambleConfig::halton(primes)?;
    let mut config = ScrambleConfig {
        primes: vec![],
        shifts: vec![],
        perms: vec![],
        poly: None,
        start_index: 1,
        convention: HammersleyConvention::default(),
    };
    let mut trace = Vec::with_capacity(primes.len());
    let mut evaluations = 0;
    let mut last = None;
    for (i, &p) in primes.iter().enumerate() {
        let mut rng = SplitMix64::substream(budget.seed, i as u64);
        let pool = candidate_pool(p, budget.n_shifts[i], budget.m_perms[i], &mut rng);
        let build = |c: &Candidate| {
            let mut cfg = config.clone();
            cfg.primes.push(p);
            cfg.shifts.push(c.shift);
            cfg.perms.push(c.perm.clone());
            cfg
        };
        let (idx, res) = best_of(pool.len(), |k, cutoff| {
            let ps = generate_point_set(&build(&pool[k]), n)?;
            evaluate(&ps, method, cutoff)
        })?;
        evaluations += pool.len();
        config = build(&pool[idx]);
        trace.push(StageRecord {
            dim: i,
            prime: p,
            shift: pool[idx].shift,
            perm: pool[idx].perm.clone(),
            value: res.value,
            candidates: pool.len(),
        });
        last = Some(res);
    }
    let mut res = last.ok_or_else(|| Error::Config("search needs at least one prime".into()))?;
    if !res.is_exact && primes.len() > 1 && estimate_work(n, primes.len()) <= work_budget() {
        res = star_disc_exact(&generate_point_set(&config, n)?)?;
    }
    Ok(SearchResult { config, n, value: res.value, is_exact: res.is_exact, trace, evaluations })
}

/// Table-1 style search: every coprime shift `a <= n_shifts` with `n_perms`
/// random permutations each, exact 1-D discrepancy.
pub fn search_1d(p: u32, n: usize, n_shifts: u64, n_perms: usize, seed: u64) -> Result<SearchResult> {
    let budget = SearchBudget::new(vec![n_shifts], vec![n_perms], seed)?;
    greedy_search(&[p], n, &budget, &DiscMethod::Exact)
}

/// Smallest `N <= cap` for which the greedy search reaches `target`.
pub fn inverse_star_search(
    d: usize,
    target: f64,
    budget: &SearchBudget,
    method: &DiscMethod,
    cap: usize,
) -> Result<(usize, SearchResult)> {
    if !(target > 0.0 && target <= 1.0) {
        return Err(Error::Domain(format!("target must lie in (0, 1], got {target}")));
    }
    let primes = first_primes(d);
    for n in 1..=cap {
        let r = greedy_search(&primes, n, budget, method)?;
        if r.value <= target {
            return Ok((n, r));
        }
    }
    Err(Error::NotFound(format!("no N <= {cap} reached {target} in d = {d}")))
}

/// Scrambled Hammersley search: for each candidate prime, `shift_budgets[k]`
/// shifts with enough random permutations per shift that every prime gets
/// about `total_tries` candidates.
pub fn hammersley_search(
    n: usize,
    candidate_primes: &[u32],
    shift_budgets: &[u64],
    total_tries: usize,
    seed: u64,
    convention: HammersleyConvention,
) -> Result<SearchResult> {
    if candidate_primes.len() != shift_budgets.len() || candidate_primes.is_empty() {
        return Err(Error::Config("one shift budget per candidate prime is required".into()));
    }
    let mut best: Option<(f64, ScrambleConfig, Candidate, usize)> = None;
    let mut evaluations = 0;
    for (k, (&p, &shifts)) in candidate_primes.iter().zip(shift_budgets).enumerate() {
        if shifts == 0 {
            return Err(Error::Config(format!("prime {p} has an empty shift budget")));
        }
        let per_shift = total_tries.div_ceil(shifts as usize).max(1);
        let mut rng = SplitMix64::substream(seed, k as u64);
        let pool = candidate_pool(p, shifts, per_shift, &mut rng);
        let build = |c: &Candidate| {
            ScrambleConfig::van_der_corput(p, c.shift, c.perm.clone()).map(|cfg| cfg.with_convention(convention))
        };
        let (idx, res) = best_of(pool.len(), |i, cutoff| {
            let ps = hammersley_lift(&build(&pool[i])?, n, convention)?;
            star_disc_exact_with(&ps, &ExactOptions { budget: work_budget(), cutoff })
        })?;
        evaluations += pool.len();
        if best.as_ref().is_none_or(|b| res.value < b.0) {
            best = Some((res.value, build(&pool[idx])?, pool[idx].clone(), pool.len()));
        }
    }
    let (value, config, cand, count) = best.expect("at least one prime");
    let trace = vec![StageRecord {
        dim: 0,
        prime: config.primes[0],
        shift: cand.shift,
        perm: cand.perm,
        value,
        candidates: count,
    }];
    Ok(SearchResult { config, n, value, is_exact: true, trace, evaluations })
}
