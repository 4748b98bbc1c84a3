//! Closed forms over the sorted sample.

use num_traits::Zero;

use super::{BoxSide, DiscrepancyResult, Method, Witness};
use crate::{Error, PointSet, Rational, Result};

fn sorted_column(points: &PointSet) -> Result<Vec<f64>> {
    if points.dim() != 1 {
        return Err(Error::Unsupported(format!("closed form needs d = 1, got d = {}", points.dim())));
    }
    if points.is_empty() {
        return Err(Error::Domain("discrepancy of an empty point set".into()));
    }
    points.check_half_open()?;
    let mut xs = points.column(0);
    xs.sort_by(f64::total_cmp);
    Ok(xs)
}

/// `D* = max_i max(i/N - x_(i), x_(i) - (i-1)/N)`.
pub fn star_disc_1d(points: &PointSet) -> Result<DiscrepancyResult> {
    let xs = sorted_column(points)?;
    let n = xs.len() as f64;
    let mut value = f64::NEG_INFINITY;
    let mut witness = Witness { corner: vec![1.0], side: BoxSide::Closed };
    for (i, &x) in xs.iter().enumerate() {
        let closed = (i + 1) as f64 / n - x;
        let open = x - i as f64 / n;
        if closed > value {
            value = closed;
            witness = Witness { corner: vec![x], side: BoxSide::Closed };
        }
        if open > value {
            value = open;
            witness = Witness { corner: vec![x], side: BoxSide::Open };
        }
    }
    Ok(DiscrepancyResult { value, witness, method: Method::ClosedForm1d, is_exact: true })
}

/// `D = 1/N + max_i (i/N - x_(i)) - min_i (i/N - x_(i))`.
///
/// The witness corner holds the interval end points `[a, b]`; a closed side
/// means the closed interval holds too many points, an open side means the
/// open interval holds too few.
pub fn extreme_disc_1d(points: &PointSet) -> Result<DiscrepancyResult> {
    let xs = sorted_column(points)?;
    let n = xs.len() as f64;
    let gap = |i: usize| (i + 1) as f64 / n - xs[i];
    let (mut hi, mut lo) = (0, 0);
    for i in 1..xs.len() {
        if gap(i) > gap(hi) {
            hi = i;
        }
        if gap(i) < gap(lo) {
            lo = i;
        }
    }
    let value = 1.0 / n + gap(hi) - gap(lo);
    let witness = if hi >= lo {
        Witness { corner: vec![xs[lo], xs[hi]], side: BoxSide::Closed }
    } else {
        Witness { corner: vec![xs[hi], xs[lo]], side: BoxSide::Open }
    };
    Ok(DiscrepancyResult { value, witness, method: Method::ClosedForm1d, is_exact: true })
}

fn sorted_exact(values: &[Rational]) -> Result<Vec<Rational>> {
    if values.is_empty() {
        return Err(Error::Domain("discrepancy of an empty point set".into()));
    }
    let one = Rational::from_integer(1);
    if let Some(v) = values.iter().find(|v| **v < Rational::zero() || **v >= one) {
        return Err(Error::Domain(format!("coordinate {v} outside [0, 1)")));
    }
    let mut xs = values.to_vec();
    xs.sort();
    Ok(xs)
}

/// Rational form of [`star_disc_1d`].
pub fn star_disc_1d_exact(values: &[Rational]) -> Result<Rational> {
    let xs = sorted_exact(values)?;
    let n = xs.len() as i128;
    Ok(xs
        .iter()
        .enumerate()
        .map(|(i, x)| {
            let closed = Rational::new(i as i128 + 1, n) - x;
            let open = x - Rational::new(i as i128, n);
            closed.max(open)
        })
        .max()
        .expect("non-empty"))
}

/// Rational form of [`extreme_disc_1d`].
pub fn extreme_disc_1d_exact(values: &[Rational]) -> Result<Rational> {
    let xs = sorted_exact(values)?;
    let n = xs.len() as i128;
    let gaps: Vec<Rational> = xs.iter().enumerate().map(|(i, x)| Rational::new(i as i128 + 1, n) - x).collect();
    let max = gaps.iter().max().expect("non-empty");
    let min = gaps.iter().min().expect("non-empty");
    Ok(Rational::new(1, n) + max - min)
}
