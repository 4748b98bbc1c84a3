//! Definitional brute force, used as ground truth for small inputs.

use super::{axis_grid, box_deviation, Best, BoxSide, DiscrepancyResult, Method};
use crate::{Error, PointSet, Result};

/// Largest number of grid corners the oracle will visit.
pub const ORACLE_GUARD: u64 = 10_000_000;

/// Visits every corner of `{coordinates, 1}^d` and evaluates both the open
/// and the closed box there.
pub fn star_disc_oracle(points: &PointSet) -> Result<DiscrepancyResult> {
    if points.is_empty() {
        return Err(Error::Domain("discrepancy of an empty point set".into()));
    }
    points.check_half_open()?;
    let d = points.dim();
    let grids: Vec<Vec<f64>> = (0..d).map(|j| axis_grid(points, j)).collect();
    let corners = grids.iter().try_fold(1u64, |acc, g| acc.checked_mul(g.len() as u64));
    if corners.is_none_or(|c| c > ORACLE_GUARD) {
        return Err(Error::Resource(format!("oracle would visit more than {ORACLE_GUARD} corners")));
    }
    let mut idx = vec![0usize; d];
    let mut y: Vec<f64> = grids.iter().map(|g| g[0]).collect();
    let mut best = Best::new(d);
    loop {
        let (closed, open) = box_deviation(points, &y);
        best.offer(closed, &y, BoxSide::Closed);
        best.offer(open, &y, BoxSide::Open);
        // odometer increment
        let mut j = 0;
        loop {
            if j == d {
                return Ok(DiscrepancyResult {
                    value: best.value,
                    witness: best.witness,
                    method: Method::Oracle,
                    is_exact: true,
                });
            }
            idx[j] += 1;
            if idx[j] < grids[j].len() {
                y[j] = grids[j][idx[j]];
                break;
            }
            idx[j] = 0;
            y[j] = grids[j][0];
            j += 1;
        }
    }
}

/// Extreme discrepancy of a 1-D set by enumerating interval end points in
/// `{0, coordinates, 1}` with both closed and open intervals.
pub fn extreme_disc_1d_oracle(points: &PointSet) -> Result<f64> {
    if points.dim() != 1 || points.is_empty() {
        return Err(Error::Domain("extreme oracle needs a non-empty 1-D set".into()));
    }
    let xs = points.column(0);
    let n = xs.len() as f64;
    let mut ends = xs.clone();
    ends.extend([0.0, 1.0]);
    ends.sort_by(f64::total_cmp);
    ends.dedup();
    let mut best = f64::NEG_INFINITY;
    for (i, &a) in ends.iter().enumerate() {
        for &b in &ends[i..] {
            let closed = xs.iter().filter(|&&x| a <= x && x <= b).count() as f64;
            let open = xs.iter().filter(|&&x| a < x && x < b).count() as f64;
            best = best.max(closed / n - (b - a)).max((b - a) - open / n);
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::discrepancy::star_disc_1d;
    use crate::rng::SplitMix64;

    #[test]
    fn single_point() {
        let ps = PointSet::from_flat(2, vec![0.5, 0.5]).unwrap();
        let r = star_disc_oracle(&ps).unwrap();
        assert_eq!(r.value, 0.75);
        assert_eq!(r.witness.side, BoxSide::Closed);
        assert_eq!(r.witness.corner, vec![0.5, 0.5]);
    }

    #[test]
    fn agrees_with_closed_form_in_one_dimension() {
        let mut rng = SplitMix64::new(1);
        for _ in 0..300 {
            let n = 1 + rng.below(30) as usize;
            let v: Vec<f64> = (0..n).map(|_| rng.next_f64()).collect();
            let ps = PointSet::one_dim(v).unwrap();
            let a = star_disc_oracle(&ps).unwrap().value;
            let b = star_disc_1d(&ps).unwrap().value;
            assert!((a - b).abs() <= 1e-15);
        }
    }

    #[test]
    fn guard() {
        let v: Vec<f64> = (0..3000).map(|i| i as f64 / 3000.0).collect();
        let ps = PointSet::from_flat(3, v).unwrap();
        assert!(matches!(star_disc_oracle(&ps), Err(Error::Resource(_))));
    }
}
