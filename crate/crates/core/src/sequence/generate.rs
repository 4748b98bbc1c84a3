use super::config::{HammersleyConvention, ScrambleConfig};
use super::point_set::{PointSet, Provenance};
use super::radical::scrambled_radical_inverse;
use crate::{Error, Rational, Result};

/// Coordinates of the sequence element with index `index`.
fn element(cfg: &ScrambleConfig, index: u64, out: &mut Vec<f64>) -> Result<()> {
    for i in 0..cfg.dims() {
        let f = cfg.polynomial(i);
        let arg = f
            .eval(i128::from(index))
            .filter(|v| (0..=i128::from(u64::MAX)).contains(v))
            .ok_or_else(|| Error::Config(format!("index map {i} leaves the non-negative u64 range at n = {index}")))?;
        out.push(scrambled_radical_inverse(arg as u64, cfg.primes[i], &cfg.perms[i]).value);
    }
    Ok(())
}

/// Points for indices `start_index, ..., start_index + n - 1`.
pub fn generate_point_set(cfg: &ScrambleConfig, n: usize) -> Result<PointSet> {
    cfg.validate()?;
    if n == 0 {
        return Err(Error::Domain("point count must be at least 1".into()));
    }
    let mut coords = Vec::with_capacity(n * cfg.dims());
    for k in 0..n as u64 {
        element(cfg, cfg.start_index + k, &mut coords)?;
    }
    let mut ps = PointSet::from_flat(cfg.dims(), coords)?;
    ps.provenance = Some(Provenance { config: cfg.clone(), n, lifted: false });
    Ok(ps)
}

/// Lift the `(d-1)`-dimensional configured sequence to a `d`-dimensional
/// Hammersley set with first coordinate `i / n`.
///
/// The `convention` argument overrides `cfg.convention`.
pub fn hammersley_lift(cfg: &ScrambleConfig, n: usize, convention: HammersleyConvention) -> Result<PointSet> {
    cfg.validate()?;
    if n < 2 {
        return Err(Error::Domain("a Hammersley set needs n >= 2".into()));
    }
    let dim = cfg.dims() + 1;
    let rows: Box<dyn Iterator<Item = (u64, u64)>> = match convention {
        // (i/N, element i) with element 0 at start_index
        HammersleyConvention::Classic => Box::new((0..n as u64).map(|i| (i, cfg.start_index + i))),
        // (i/N, element i-1) for i = 1..N-1, i.e. x_i with the default start
        HammersleyConvention::Indexed => Box::new((1..n as u64).map(|i| (i, cfg.start_index + i - 1))),
    };
    let mut coords = Vec::with_capacity(n * dim);
    for (i, index) in rows {
        coords.push(i as f64 / n as f64);
        element(cfg, index, &mut coords)?;
    }
    let mut ps = PointSet::from_flat(dim, coords)?;
    ps.provenance = Some(Provenance { config: cfg.clone().with_convention(convention), n, lifted: true });
    Ok(ps)
}

/// Exact first coordinates `i / n` of [`hammersley_lift`] for the given
/// convention.
pub fn hammersley_lift_exact_first_coords(n: usize, convention: HammersleyConvention) -> Vec<Rational> {
    let start = match convention {
        HammersleyConvention::Classic => 0,
        HammersleyConvention::Indexed => 1,
    };
    (start..n as i128).map(|i| Rational::new(i, n as i128)).collect()
}
