//! Exact star discrepancy by enumerating critical boxes.
//!
//! Upper corners are chosen axis by axis. On axis `j` only coordinates of
//! points still inside the partial box (plus 1.0) can be critical, so the
//! candidate set shrinks with the box. The last axis is a linear scan over
//! points kept sorted by their last coordinate. Subtrees whose deviation
//! bound cannot reach the best value found so far are skipped; boxes tying
//! the best are never skipped, so the witness is independent of scheduling.

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

use rayon::prelude::*;

use super::{star_disc_1d, Best, BoxSide, DiscrepancyResult, Method};
use crate::{Error, PointSet, Result};

pub const DEFAULT_WORK_BUDGET: f64 = 1e10;

const PRUNE_SLACK: f64 = 1e-12;

/// Work cap from `LOWDISC_WORK_BUDGET`, or [`DEFAULT_WORK_BUDGET`].
pub fn work_budget() -> f64 {
    std::env::var("LOWDISC_WORK_BUDGET")
        .ok()
        .and_then(|v| v.trim().parse::<f64>().ok())
        .filter(|v| *v > 0.0)
        .unwrap_or(DEFAULT_WORK_BUDGET)
}

/// Expected number of enumerated boxes, `sum_j C(d, j) N^j / j!`: boxes
/// with `j` axes below 1.0 nest like chains of shrinking point subsets.
pub fn estimate_work(n: usize, d: usize) -> f64 {
    let n = n as f64;
    let mut binom = 1.0;
    let mut term = 1.0; // n^j / j!
    let mut total = 0.0;
    for j in 0..=d {
        if j > 0 {
            binom *= (d - j + 1) as f64 / j as f64;
            term *= n / j as f64;
        }
        total += binom * term;
    }
    total
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExactOptions {
    /// Refuse inputs whose [`estimate_work`] exceeds this.
    pub budget: f64,
    /// Stop as soon as a box with deviation at least this large is found;
    /// the result is then a lower bound flagged `is_exact = false`.
    pub cutoff: Option<f64>,
}

impl Default for ExactOptions {
    fn default() -> Self {
        Self { budget: work_budget(), cutoff: None }
    }
}

pub fn star_disc_exact(points: &PointSet) -> Result<DiscrepancyResult> {
    star_disc_exact_with(points, &ExactOptions::default())
}

pub fn star_disc_exact_with(points: &PointSet, opts: &ExactOptions) -> Result<DiscrepancyResult> {
    if points.is_empty() {
        return Err(Error::Domain("discrepancy of an empty point set".into()));
    }
    points.check_half_open()?;
    let (n, d) = (points.len(), points.dim());
    let work = estimate_work(n, d);
    if work > opts.budget {
        return Err(Error::Resource(format!(
            "exact evaluation of N = {n}, d = {d} needs about {work:.3e} steps, over the budget {:.3e}; \
             use the threshold-accepting estimate instead",
            opts.budget
        )));
    }
    let cutoff = opts.cutoff.unwrap_or(f64::INFINITY);

    // Every 1-D projection box is a genuine box: a cheap starting value.
    let mut seed = Best::new(d);
    for j in 0..d {
        let r = star_disc_1d(&PointSet::one_dim(points.column(j))?)?;
        let mut corner = vec![1.0; d];
        corner[j] = r.witness.corner[0];
        seed.offer(r.value, &corner, r.witness.side);
    }
    if seed.value >= cutoff {
        return Ok(finish(seed, false));
    }

    let engine = Engine::new(points, cutoff, seed.value);
    let all: Vec<u32> = (0..n as u32).collect();
    let strict = vec![true; n];
    let best = if d == 1 {
        let mut w = Worker::new(&engine);
        w.leaf(&all, &strict, 1.0);
        w.best
    } else {
        let mut cand: Vec<f64> = engine.cols[0].clone();
        cand.push(1.0);
        cand.sort_by(f64::total_cmp);
        cand.dedup();
        cand.reverse();
        cand.par_iter()
            .map(|&y| {
                let mut w = Worker::new(&engine);
                w.enter_child(0, &all, &strict, 1.0, y);
                w.best
            })
            .reduce(|| Best::new(d), Best::merge)
    };
    let best = seed.merge(best);
    let stopped = engine.stop.load(Ordering::Relaxed);
    Ok(finish(best, !stopped))
}

fn finish(best: Best, exact: bool) -> DiscrepancyResult {
    DiscrepancyResult { value: best.value, witness: best.witness, method: Method::ExactGrid, is_exact: exact }
}

struct Engine {
    d: usize,
    n: f64,
    /// `cols[j][i]`: coordinate `j` of point `i`, points sorted by their
    /// last coordinate.
    cols: Vec<Vec<f64>>,
    /// `tail[j][i]`: product of the coordinates of point `i` after axis `j`.
    tail: Vec<Vec<f64>>,
    cutoff: f64,
    best_bits: AtomicU64,
    stop: AtomicBool,
}

impl Engine {
    fn new(points: &PointSet, cutoff: f64, seed: f64) -> Self {
        let d = points.dim();
        let mut order: Vec<usize> = (0..points.len()).collect();
        order.sort_by(|&a, &b| points.point(a)[d - 1].total_cmp(&points.point(b)[d - 1]));
        let cols: Vec<Vec<f64>> = (0..d).map(|j| order.iter().map(|&i| points.point(i)[j]).collect()).collect();
        let tail = (0..d)
            .map(|j| (0..order.len()).map(|i| cols[j + 1..].iter().fold(1.0, |acc, c| acc * c[i])).collect())
            .collect();
        Self {
            d,
            n: points.len() as f64,
            cols,
            tail,
            cutoff,
            best_bits: AtomicU64::new(seed.max(0.0).to_bits()),
            stop: AtomicBool::new(false),
        }
    }

    fn global_best(&self) -> f64 {
        f64::from_bits(self.best_bits.load(Ordering::Relaxed))
    }

    fn publish(&self, value: f64) {
        // non-negative doubles order like their bit patterns
        if value > 0.0 {
            self.best_bits.fetch_max(value.to_bits(), Ordering::Relaxed);
        }
        if value >= self.cutoff {
            self.stop.store(true, Ordering::Relaxed);
        }
    }
}

struct Worker<'a> {
    e: &'a Engine,
    corner: Vec<f64>,
    best: Best,
    items: Vec<Vec<u32>>,
    strict: Vec<Vec<bool>>,
    cand: Vec<Vec<f64>>,
}

impl<'a> Worker<'a> {
    fn new(e: &'a Engine) -> Self {
        let d = e.d;
        Self {
            e,
            corner: vec![1.0; d],
            best: Best::new(d),
            items: vec![Vec::new(); d + 1],
            strict: vec![Vec::new(); d + 1],
            cand: vec![Vec::new(); d],
        }
    }

    fn offer(&mut self, value: f64, side: BoxSide) {
        if value >= self.best.value {
            self.best.offer(value, &self.corner, side);
            self.e.publish(value);
        }
    }

    fn threshold(&self) -> f64 {
        self.best.value.max(self.e.global_best())
    }

    /// Fix `corner[level] = y`, filter the parent's points into the child
    /// box and descend unless the child's deviation bound is hopeless.
    fn enter_child(&mut self, level: usize, items: &[u32], strict: &[bool], p: f64, y: f64) {
        let col = &self.e.cols[level];
        let tail = &self.e.tail[level];
        let mut ci = std::mem::take(&mut self.items[level + 1]);
        let mut cs = std::mem::take(&mut self.strict[level + 1]);
        ci.clear();
        cs.clear();
        let mut min_tail = f64::INFINITY;
        for (&i, &s) in items.iter().zip(strict) {
            let x = col[i as usize];
            if x <= y {
                ci.push(i);
                cs.push(s && x < y);
                min_tail = min_tail.min(tail[i as usize]);
            }
        }
        let p = p * y;
        let closed_ub = if ci.is_empty() { 0.0 } else { ci.len() as f64 / self.e.n - p * min_tail };
        let ub = closed_ub.max(p);
        if ub + PRUNE_SLACK >= self.threshold() {
            self.corner[level] = y;
            if level + 1 == self.e.d - 1 {
                self.leaf(&ci, &cs, p);
            } else {
                self.node(level + 1, &ci, &cs, p);
            }
            self.corner[level] = 1.0;
        }
        self.items[level + 1] = ci;
        self.strict[level + 1] = cs;
    }

    fn node(&mut self, level: usize, items: &[u32], strict: &[bool], p: f64) {
        if self.e.stop.load(Ordering::Relaxed) {
            return;
        }
        let mut cand = std::mem::take(&mut self.cand[level]);
        cand.clear();
        let col = &self.e.cols[level];
        cand.extend(items.iter().map(|&i| col[i as usize]));
        cand.push(1.0);
        cand.sort_unstable_by(|a, b| b.total_cmp(a));
        cand.dedup();
        for &y in &cand {
            self.enter_child(level, items, strict, p, y);
        }
        self.cand[level] = cand;
    }

    /// Scan the last axis. `items` are ordered by last coordinate.
    fn leaf(&mut self, items: &[u32], strict: &[bool], p: f64) {
        let last = self.e.d - 1;
        let col = &self.e.cols[last];
        let n = self.e.n;
        let (mut closed, mut open) = (0usize, 0usize);
        let mut i = 0;
        while i < items.len() {
            let y = col[items[i] as usize];
            self.corner[last] = y;
            let vol = p * y;
            self.offer(vol - open as f64 / n, BoxSide::Open);
            while i < items.len() && col[items[i] as usize] == y {
                closed += 1;
                open += usize::from(strict[i]);
                i += 1;
            }
            self.offer(closed as f64 / n - vol, BoxSide::Closed);
        }
        self.corner[last] = 1.0;
        self.offer(p - open as f64 / n, BoxSide::Open);
        self.offer(closed as f64 / n - p, BoxSide::Closed);
    }
}
