//! Prefix discrepancies of 1-D sequences, rescaled by `n / ln n`.

use crate::sequence::generate_point_set;
use crate::{Error, PointSet, Result, ScrambleConfig};

/// `(n, n D*_n / ln n)` for the prefixes `n = 2..=n_max` of the sequence
/// described by `cfg`.
pub fn scaled_series(cfg: &ScrambleConfig, n_max: usize) -> Result<Vec<(usize, f64)>> {
    if cfg.dims() != 1 {
        return Err(Error::Unsupported(format!("series are one-dimensional, config has d = {}", cfg.dims())));
    }
    if n_max < 2 {
        return Err(Error::Domain(format!("series need N_max >= 2, got {n_max}")));
    }
    let ps = generate_point_set(cfg, n_max)?;
    scaled_series_of(&ps)
}

/// Same as [`scaled_series`] for an already generated 1-D sequence.
pub fn scaled_series_of(points: &PointSet) -> Result<Vec<(usize, f64)>> {
    if points.dim() != 1 {
        return Err(Error::Unsupported(format!("series are one-dimensional, got d = {}", points.dim())));
    }
    points.check_half_open()?;
    let mut sorted: Vec<f64> = Vec::with_capacity(points.len());
    let mut out = Vec::with_capacity(points.len().saturating_sub(1));
    for (k, p) in points.points().enumerate() {
        let x = p[0];
        let at = sorted.partition_point(|&v| v <= x);
        sorted.insert(at, x);
        let n = k + 1;
        if n < 2 {
            continue;
        }
        let nf = n as f64;
        let disc = sorted
            .iter()
            .enumerate()
            .map(|(i, &v)| ((i + 1) as f64 / nf - v).max(v - i as f64 / nf))
            .fold(f64::NEG_INFINITY, f64::max);
        out.push((n, nf * disc / nf.ln()));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::discrepancy::star_disc_1d;
    use crate::Permutation;

    #[test]
    fn length_and_consistency() {
        let cfg = ScrambleConfig::van_der_corput(3, 1, Permutation::identity(3)).unwrap();
        let s = scaled_series(&cfg, 100).unwrap();
        assert_eq!(s.len(), 99);
        assert_eq!(s[0].0, 2);
        assert!(s.iter().all(|(_, v)| v.is_finite()));
        let ps = generate_point_set(&cfg, 100).unwrap();
        let d = star_disc_1d(&ps).unwrap().value;
        assert_eq!(s[98].1, 100.0 * d / 100f64.ln());
        assert!((s[98].1 - 0.569).abs() < 2e-3);
    }

    #[test]
    fn rejects_bad_input() {
        let cfg = ScrambleConfig::halton(&[2, 3]).unwrap();
        assert!(matches!(scaled_series(&cfg, 10), Err(Error::Unsupported(_))));
        let cfg = ScrambleConfig::halton(&[2]).unwrap();
        assert!(scaled_series(&cfg, 1).is_err());
    }
}
