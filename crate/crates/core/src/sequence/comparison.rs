use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::point_set::PointSet;
use crate::{Error, Rational, Result};

pub const GOLDEN_RATIO: f64 = 1.618_033_988_749_895;

/// Kronecker sequence `{n alpha}` for `n = 1, ..., count`.
///
/// Rational `alpha` is accepted; such sequences are periodic and therefore
/// degenerate as low-discrepancy sequences.
pub fn kronecker_sequence(alpha: f64, count: usize) -> Result<PointSet> {
    if !alpha.is_finite() {
        return Err(Error::Domain(format!("alpha must be finite, got {alpha}")));
    }
    if count == 0 {
        return Err(Error::Domain("point count must be at least 1".into()));
    }
    let values = (1..=count).map(|n| (n as f64 * alpha).rem_euclid(1.0)).collect();
    PointSet::one_dim(values)
}

/// Objective minimised by the greedy Kritzinger construction, given the
/// first `n` elements `K_1..K_n`:
///
/// * `Printed`: `-2 sum max(K_k, x) + (x + 1) x^2 - x`
/// * `Quadratic`: `-2 sum max(K_k, x) + (n + 1) x^2 - x`
///
/// Both are minimised over the grid `(2k - 1) / (2(n + 1))`. For `Quadratic`
/// the continuous minimiser on `[0, 1)` always lies on that grid; for
/// `Printed` it does not in general.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum KritzingerObjective {
    #[default]
    Printed,
    Quadratic,
}

struct Kritzinger {
    objective: KritzingerObjective,
    /// Elements as reduced (numerator, denominator) pairs.
    elems: Vec<(i128, i128)>,
    /// Float values kept sorted for the prefix-sum evaluation.
    sorted: Vec<f64>,
}

impl Kritzinger {
    fn new(objective: KritzingerObjective) -> Self {
        Self { objective, elems: vec![(1, 2)], sorted: vec![0.5] }
    }

    fn quad_coeff_f64(&self, x: f64) -> f64 {
        match self.objective {
            KritzingerObjective::Printed => x + 1.0,
            KritzingerObjective::Quadratic => (self.elems.len() + 1) as f64,
        }
    }

    fn objective_f64(&self, x: f64, suffix: &[f64]) -> f64 {
        // number of elements <= x, the rest contribute themselves
        let below = self.sorted.partition_point(|&k| k <= x);
        let sum_max = x * below as f64 + suffix[below];
        -2.0 * sum_max + self.quad_coeff_f64(x) * x * x - x
    }

    fn objective_exact(&self, x: &BigRational) -> BigRational {
        let mut sum_max = BigRational::zero();
        for &(p, q) in &self.elems {
            let k = BigRational::new(BigInt::from(p), BigInt::from(q));
            sum_max += if &k > x { k } else { x.clone() };
        }
        let coeff = match self.objective {
            KritzingerObjective::Printed => x + BigRational::from_integer(1.into()),
            KritzingerObjective::Quadratic => BigRational::from_integer(BigInt::from(self.elems.len() + 1)),
        };
        let two = BigRational::from_integer(2.into());
        -(two * sum_max) + coeff * x * x - x
    }

    fn push_next(&mut self) {
        let m = self.elems.len() as i128 + 1;
        let mut suffix = vec![0.0; self.sorted.len() + 1];
        for i in (0..self.sorted.len()).rev() {
            suffix[i] = suffix[i + 1] + self.sorted[i];
        }
        let values: Vec<f64> =
            (1..=m).map(|k| self.objective_f64((2 * k - 1) as f64 / (2 * m) as f64, &suffix)).collect();
        let min = values.iter().copied().fold(f64::INFINITY, f64::min);
        let tol = 1e-9 * (1.0 + min.abs());
        // Resolve near-ties exactly; the smallest exact minimiser wins.
        let mut best: Option<(BigRational, i128)> = None;
        for (k, &v) in (1..=m).zip(&values) {
            if v > min + tol {
                continue;
            }
            let x = BigRational::new(BigInt::from(2 * k - 1), BigInt::from(2 * m));
            let f = self.objective_exact(&x);
            if best.as_ref().is_none_or(|(bf, _)| &f < bf) {
                best = Some((f, k));
            }
        }
        let k = best.expect("grid is non-empty").1;
        let r = Rational::new(2 * k - 1, 2 * m);
        self.elems.push((*r.numer(), *r.denom()));
        let xf = (2 * k - 1) as f64 / (2 * m) as f64;
        let pos = self.sorted.partition_point(|&v| v <= xf);
        self.sorted.insert(pos, xf);
    }
}

/// First `count` elements of the Kritzinger sequence as exact fractions.
pub fn kritzinger_sequence_exact(count: usize, objective: KritzingerObjective) -> Result<Vec<Rational>> {
    if count == 0 {
        return Err(Error::Domain("point count must be at least 1".into()));
    }
    let mut state = Kritzinger::new(objective);
    while state.elems.len() < count {
        state.push_next();
    }
    Ok(state.elems.iter().map(|&(p, q)| Rational::new(p, q)).collect())
}

/// First `count` elements of the Kritzinger sequence.
pub fn kritzinger_sequence(count: usize, objective: KritzingerObjective) -> Result<PointSet> {
    let exact = kritzinger_sequence_exact(count, objective)?;
    PointSet::one_dim(exact.iter().map(|r| *r.numer() as f64 / *r.denom() as f64).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kronecker_examples() {
        let ps = kronecker_sequence(GOLDEN_RATIO, 2).unwrap();
        assert!((ps.flat()[0] - 0.618_033_988_7).abs() < 1e-10);
        assert!((ps.flat()[1] - 0.236_067_977_5).abs() < 1e-9);
        let degenerate = kronecker_sequence(0.5, 4).unwrap();
        assert_eq!(degenerate.flat(), &[0.5, 0.0, 0.5, 0.0]);
    }

    #[test]
    fn kritzinger_first_elements() {
        let k = kritzinger_sequence_exact(2, KritzingerObjective::Printed).unwrap();
        assert_eq!(k[0], Rational::new(1, 2));
        assert_eq!(k[1], Rational::new(3, 4));
    }

    #[test]
    fn quadratic_objective_breaks_tie_low() {
        // With (n+1) x^2 both grid points 1/4 and 3/4 give -9/8; the smaller wins.
        let k = kritzinger_sequence_exact(2, KritzingerObjective::Quadratic).unwrap();
        assert_eq!(k[1], Rational::new(1, 4));
    }

    #[test]
    fn grid_form_holds() {
        for objective in [KritzingerObjective::Printed, KritzingerObjective::Quadratic] {
            let k = kritzinger_sequence_exact(60, objective).unwrap();
            for (i, r) in k.iter().enumerate() {
                let n = i as i128 + 1;
                let twice = *r * Rational::from_integer(2 * n);
                assert!(twice.is_integer(), "{r} at n={n}");
                let odd = twice.to_integer();
                assert!(odd % 2 == 1 && (1..2 * n).contains(&odd));
            }
        }
    }

    fn golden_section_min(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
        let g = (5f64.sqrt() - 1.0) / 2.0;
        for _ in 0..200 {
            let c = b - g * (b - a);
            let d = a + g * (b - a);
            if f(c) < f(d) {
                b = d;
            } else {
                a = c;
            }
        }
        let x = 0.5 * (a + b);
        f(x)
    }

    /// Continuous minimum of the objective by golden-section search on each
    /// piece between consecutive elements (the objective is smooth there).
    fn continuous_min(prev: &[f64], objective: KritzingerObjective) -> f64 {
        let n = prev.len();
        let f = |x: f64| {
            let s: f64 = prev.iter().map(|&k| k.max(x)).sum();
            let coeff = match objective {
                KritzingerObjective::Printed => x + 1.0,
                KritzingerObjective::Quadratic => (n + 1) as f64,
            };
            -2.0 * s + coeff * x * x - x
        };
        let mut knots: Vec<f64> = prev.to_vec();
        knots.push(0.0);
        knots.push(1.0);
        knots.sort_by(f64::total_cmp);
        knots.windows(2).map(|w| golden_section_min(f, w[0], w[1]).min(f(w[0]))).fold(f64::INFINITY, f64::min)
    }

    #[test]
    fn quadratic_grid_minimum_is_the_continuous_minimum() {
        let k = kritzinger_sequence(40, KritzingerObjective::Quadratic).unwrap();
        let xs = k.flat();
        for n in 1..xs.len() {
            let prev = &xs[..n];
            let cont = continuous_min(prev, KritzingerObjective::Quadratic);
            let s: f64 = prev.iter().map(|&v| v.max(xs[n])).sum();
            let at_grid = -2.0 * s + (n + 1) as f64 * xs[n] * xs[n] - xs[n];
            assert!((at_grid - cont).abs() < 1e-9, "n={n}: grid {at_grid} vs continuous {cont}");
        }
    }

    #[test]
    fn printed_grid_minimum_is_not_below_continuous() {
        let k = kritzinger_sequence(40, KritzingerObjective::Printed).unwrap();
        let xs = k.flat();
        // n = 1: continuous minimiser near 0.7208 beats the grid point 3/4.
        let cont = continuous_min(&xs[..1], KritzingerObjective::Printed);
        assert!(cont < -1.265625 - 1e-4);
        for n in 1..xs.len() {
            let prev = &xs[..n];
            let cont = continuous_min(prev, KritzingerObjective::Printed);
            let s: f64 = prev.iter().map(|&v| v.max(xs[n])).sum();
            let at_grid = -2.0 * s + (xs[n] + 1.0) * xs[n] * xs[n] - xs[n];
            assert!(at_grid >= cont - 1e-12);
        }
    }
}
