use std::fmt::Write as _;
use std::path::Path;

use super::config::ScrambleConfig;
use crate::{Error, Result};

/// How a point set was generated.
#[derive(Debug, Clone, PartialEq)]
pub struct Provenance {
    pub config: ScrambleConfig,
    pub n: usize,
    /// Set for Hammersley lifts.
    pub lifted: bool,
}

/// `N` points in `[0, 1)^d`, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet {
    dim: usize,
    coords: Vec<f64>,
    pub provenance: Option<Provenance>,
}

impl PointSet {
    /// Build from row-major coordinates. Coordinates must be finite and in
    /// `[0, 1]`; the value `1.0` is tolerated so that the scrambling boundary
    /// case can be represented, but discrepancy routines reject it.
    pub fn from_flat(dim: usize, coords: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Domain("dimension must be at least 1".into()));
        }
        if !coords.len().is_multiple_of(dim) {
            return Err(Error::Domain(format!("{} coordinates do not split into rows of {dim}", coords.len())));
        }
        if let Some(bad) = coords.iter().find(|c| !(0.0..=1.0).contains(*c)) {
            return Err(Error::Domain(format!("coordinate {bad} outside [0, 1]")));
        }
        Ok(Self { dim, coords, provenance: None })
    }

    pub fn from_rows<R: AsRef<[f64]>>(dim: usize, rows: &[R]) -> Result<Self> {
        let mut coords = Vec::with_capacity(rows.len() * dim);
        for row in rows {
            let row = row.as_ref();
            if row.len() != dim {
                return Err(Error::Domain(format!("row of length {} in a {dim}-dimensional set", row.len())));
            }
            coords.extend_from_slice(row);
        }
        Self::from_flat(dim, coords)
    }

    pub fn one_dim(values: Vec<f64>) -> Result<Self> {
        Self::from_flat(1, values)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn points(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.coords.chunks_exact(self.dim)
    }

    pub fn flat(&self) -> &[f64] {
        &self.coords
    }

    /// Values of one coordinate across all points.
    pub fn column(&self, axis: usize) -> Vec<f64> {
        self.points().map(|p| p[axis]).collect()
    }

    /// Projection onto the first `k` coordinates.
    pub fn project(&self, k: usize) -> Self {
        assert!(k >= 1 && k <= self.dim);
        let coords = self.points().flat_map(|p| p[..k].iter().copied()).collect();
        Self { dim: k, coords, provenance: None }
    }

    /// Number of coordinates equal to exactly `1.0`.
    pub fn unit_coordinates(&self) -> usize {
        self.coords.iter().filter(|&&c| c == 1.0).count()
    }

    /// Fails unless every coordinate lies in `[0, 1)`.
    pub fn check_half_open(&self) -> Result<()> {
        match self.coords.iter().find(|&&c| c >= 1.0) {
            Some(c) => Err(Error::Domain(format!("coordinate {c} is not in [0, 1)"))),
            None => Ok(()),
        }
    }

    /// Text format: a `# lowdisc d=<d> n=<N>` header followed by one line per
    /// point with 17 significant digits per coordinate.
    pub fn to_text(&self) -> String {
        let mut out = String::with_capacity(self.coords.len() * 21 + 32);
        writeln!(out, "# lowdisc d={} n={}", self.dim, self.len()).unwrap();
        for p in self.points() {
            for (j, &c) in p.iter().enumerate() {
                if j > 0 {
                    out.push(' ');
                }
                out.push_str(&format_17(c));
            }
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| Error::Parse("empty point-set file".into()))?;
        let (d, n) = parse_header(header)?;
        let mut coords = Vec::with_capacity(d * n);
        let mut rows = 0;
        for (lineno, line) in lines.enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let before = coords.len();
            for tok in line.split_whitespace() {
                let v: f64 =
                    tok.parse().map_err(|_| Error::Parse(format!("line {}: bad number `{tok}`", lineno + 2)))?;
                coords.push(v);
            }
            if coords.len() - before != d {
                return Err(Error::Parse(format!("line {}: expected {d} values", lineno + 2)));
            }
            rows += 1;
        }
        if rows != n {
            return Err(Error::Parse(format!("header announces {n} points, found {rows}")));
        }
        Self::from_flat(d, coords)
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_text(&std::fs::read_to_string(path)?)
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_text())?;
        Ok(())
    }
}

fn parse_header(line: &str) -> Result<(usize, usize)> {
    let bad = || Error::Parse(format!("bad header `{line}`"));
    let rest = line.strip_prefix("# lowdisc ").ok_or_else(bad)?;
    let mut d = None;
    let mut n = None;
    for field in rest.split_whitespace() {
        match field.split_once('=') {
            Some(("d", v)) => d = v.parse().ok(),
            Some(("n", v)) => n = v.parse().ok(),
            _ => return Err(bad()),
        }
    }
    Ok((d.ok_or_else(bad)?, n.ok_or_else(bad)?))
}

/// Plain decimal with 17 significant digits.
fn format_17(v: f64) -> String {
    if v == 0.0 {
        return format!("{:.16}", 0.0);
    }
    let sci = format!("{v:.16e}");
    let exp: i32 = sci.rsplit_once('e').and_then(|(_, e)| e.parse().ok()).unwrap_or(0);
    let decimals = (16 - exp).max(0) as usize;
    format!("{v:.decimals$}")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn text_format_layout() {
        let ps = PointSet::from_rows(2, &[[0.5, 0.25], [0.0, 0.1]]).unwrap();
        let text = ps.to_text();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "# lowdisc d=2 n=2");
        assert_eq!(lines[1], "0.50000000000000000 0.25000000000000000");
        assert_eq!(lines[2], "0.0000000000000000 0.10000000000000001");
    }

    #[test]
    fn rejects_malformed_text() {
        assert!(PointSet::from_text("").is_err());
        assert!(PointSet::from_text("# lowdisc d=2 n=1\n0.5\n").is_err());
        assert!(PointSet::from_text("# lowdisc d=1 n=2\n0.5\n").is_err());
        assert!(PointSet::from_text("# other d=1 n=1\n0.5\n").is_err());
        assert!(PointSet::from_text("# lowdisc d=1 n=1\n1.5\n").is_err());
    }

    #[test]
    fn small_magnitudes_keep_precision() {
        for v in [1e-5, 3.0e-12, 0.012345678901234567, 0.9999999999999999] {
            let s = format_17(v);
            assert_eq!(s.parse::<f64>().unwrap(), v, "{s}");
        }
    }

    proptest! {
        #[test]
        fn round_trip_is_bit_exact(values in proptest::collection::vec(0.0f64..1.0, 1..60), dim in 1usize..4) {
            let n = values.len() / dim;
            prop_assume!(n > 0);
            let ps = PointSet::from_flat(dim, values[..n * dim].to_vec()).unwrap();
            let back = PointSet::from_text(&ps.to_text()).unwrap();
            prop_assert_eq!(ps.flat().iter().map(|v| v.to_bits()).collect::<Vec<_>>(),
                            back.flat().iter().map(|v| v.to_bits()).collect::<Vec<_>>());
        }
    }
}
