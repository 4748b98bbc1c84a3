//! Star and extreme discrepancy.
//!
//! Every evaluator reports the deviation of a concrete anchored box, so the
//! heuristic estimator is a lower bound of the exact value by construction.
//! Box deviations are always computed as `count / N - volume` (closed side)
//! or `volume - count / N` (open side) with the volume multiplied in axis
//! order, so the exact engine, the oracle and the estimator agree bit for bit
//! on a shared box.

mod exact;
mod one_dim;
mod oracle;
mod series;
mod ta;

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

pub use exact::{estimate_work, star_disc_exact, star_disc_exact_with, work_budget, ExactOptions, DEFAULT_WORK_BUDGET};
pub use one_dim::{extreme_disc_1d, extreme_disc_1d_exact, star_disc_1d, star_disc_1d_exact};
pub use oracle::{extreme_disc_1d_oracle, star_disc_oracle, ORACLE_GUARD};
pub use series::{scaled_series, scaled_series_of};
pub use ta::{star_disc_ta, TaParams, ThresholdSchedule};

use crate::{PointSet, Result};

/// Which limit of half-open boxes a witness corner stands for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoxSide {
    /// `[0, y]`: too many points, deviation `count / N - volume`.
    Closed,
    /// `[0, y)`: too few points, deviation `volume - count / N`.
    Open,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    ClosedForm1d,
    ExactGrid,
    Oracle,
    TaEstimate,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::ClosedForm1d => "closed_form_1d",
            Method::ExactGrid => "exact_grid",
            Method::Oracle => "oracle",
            Method::TaEstimate => "ta_estimate",
        })
    }
}

/// Upper corner of the box attaining (or approaching) the reported value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub corner: Vec<f64>,
    pub side: BoxSide,
}

impl Witness {
    /// Deterministic preference among equal values: closed before open, then
    /// the lexicographically smaller corner.
    fn precedes(&self, other: &Witness) -> bool {
        match self.side.cmp(&other.side) {
            Ordering::Less => true,
            Ordering::Greater => false,
            Ordering::Equal => {
                for (a, b) in self.corner.iter().zip(&other.corner) {
                    match a.total_cmp(b) {
                        Ordering::Less => return true,
                        Ordering::Greater => return false,
                        Ordering::Equal => {}
                    }
                }
                false
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscrepancyResult {
    pub value: f64,
    pub witness: Witness,
    pub method: Method,
    /// `false` for estimates and for runs stopped early at a cutoff; the
    /// value is then a lower bound.
    pub is_exact: bool,
}

impl fmt::Display for DiscrepancyResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let corner: Vec<String> = self.witness.corner.iter().map(|c| format!("{c}")).collect();
        let side = match self.witness.side {
            BoxSide::Closed => "closed",
            BoxSide::Open => "open",
        };
        write!(f, "{:.10} {} {} {}", self.value, self.method, side, corner.join(" "))?;
        if !self.is_exact {
            f.write_str(" lower-bound")?;
        }
        Ok(())
    }
}

/// Best box seen so far under the (value, witness order) ranking.
#[derive(Debug, Clone)]
pub(crate) struct Best {
    pub value: f64,
    pub witness: Witness,
}

impl Best {
    pub fn new(dim: usize) -> Self {
        Self { value: f64::NEG_INFINITY, witness: Witness { corner: vec![1.0; dim], side: BoxSide::Closed } }
    }

    pub fn offer(&mut self, value: f64, corner: &[f64], side: BoxSide) {
        if value > self.value || (value == self.value && self.preferred(corner, side)) {
            self.value = value;
            self.witness.corner.clear();
            self.witness.corner.extend_from_slice(corner);
            self.witness.side = side;
        }
    }

    fn preferred(&self, corner: &[f64], side: BoxSide) -> bool {
        Witness { corner: corner.to_vec(), side }.precedes(&self.witness)
    }

    pub fn merge(mut self, other: Best) -> Best {
        self.offer(other.value, &other.witness.corner, other.witness.side);
        self
    }
}

/// Closed and open deviation of the anchored box with upper corner `y`.
pub(crate) fn box_deviation(points: &PointSet, y: &[f64]) -> (f64, f64) {
    let n = points.len() as f64;
    let mut closed = 0usize;
    let mut open = 0usize;
    for p in points.points() {
        if p.iter().zip(y).all(|(x, c)| x <= c) {
            closed += 1;
            if p.iter().zip(y).all(|(x, c)| x < c) {
                open += 1;
            }
        }
    }
    let vol = volume(y);
    (closed as f64 / n - vol, vol - open as f64 / n)
}

pub(crate) fn volume(y: &[f64]) -> f64 {
    y.iter().fold(1.0, |acc, c| acc * c)
}

/// Sorted distinct coordinates along one axis with 1.0 appended.
pub(crate) fn axis_grid(points: &PointSet, axis: usize) -> Vec<f64> {
    let mut g = points.column(axis);
    g.push(1.0);
    g.sort_by(f64::total_cmp);
    g.dedup();
    g
}

/// How the star discrepancy should be obtained.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DiscMethod {
    Exact,
    Ta(TaParams),
    /// Closed form in one dimension, the exact engine when its work estimate
    /// fits the budget, the estimator otherwise.
    Auto(TaParams),
}

impl Default for DiscMethod {
    fn default() -> Self {
        DiscMethod::Auto(TaParams::default())
    }
}

pub fn star_discrepancy(points: &PointSet, method: &DiscMethod) -> Result<DiscrepancyResult> {
    match method {
        DiscMethod::Exact => star_disc_exact(points),
        DiscMethod::Ta(params) => star_disc_ta(points, params),
        DiscMethod::Auto(params) => {
            if points.dim() == 1 {
                star_disc_1d(points)
            } else if estimate_work(points.len(), points.dim()) <= work_budget() {
                star_disc_exact(points)
            } else {
                star_disc_ta(points, params)
            }
        }
    }
}
