//! Reproduction manifests: checked-in parameter sets bound to the values
//! they are expected to produce, plus CSV emission of rescaled series.

use std::fmt;
use std::io::Write;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::discrepancy::{
    scaled_series, star_disc_1d, star_disc_exact, star_disc_ta, DiscMethod, DiscrepancyResult, TaParams,
};
use crate::search::search_1d;
use crate::sequence::{generate_point_set, hammersley_lift};
use crate::{Error, HammersleyConvention, Result, ScrambleConfig};

/// How the points of an entry are produced.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Generator {
    Sequence {
        config: ScrambleConfig,
    },
    /// Lift of a 1-D sequence. An empty convention list tries both and
    /// passes if either matches.
    Hammersley {
        config: ScrambleConfig,
        #[serde(default)]
        conventions: Vec<HammersleyConvention>,
    },
    /// Best value of a 1-D shift/permutation search.
    #[serde(rename = "search_1d")]
    Search1d {
        p: u32,
        shifts: u64,
        perms: usize,
        seed: u64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Expectation {
    Approx { value: f64, tol: f64 },
    AtMost { target: f64, slack: f64 },
    Range { lo: f64, hi: f64 },
}

impl Expectation {
    pub fn accepts(&self, v: f64) -> bool {
        match *self {
            Expectation::Approx { value, tol } => (v - value).abs() <= tol,
            Expectation::AtMost { target, slack } => v <= target + slack,
            Expectation::Range { lo, hi } => lo <= v && v <= hi,
        }
    }
}

impl fmt::Display for Expectation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expectation::Approx { value, tol } => write!(f, "{value} +- {tol:e}"),
            Expectation::AtMost { target, .. } => write!(f, "<= {target}"),
            Expectation::Range { lo, hi } => write!(f, "in [{lo:.6}, {hi:.6}]"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EntryMethod {
    ClosedForm,
    Exact,
    Ta,
    Auto,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub label: String,
    pub generator: Generator,
    pub n: usize,
    pub expect: Expectation,
    pub method: EntryMethod,
    #[serde(default)]
    pub ta: TaParams,
    #[serde(default)]
    pub long_running: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReproductionManifest {
    pub table_id: String,
    #[serde(default)]
    pub description: String,
    pub entries: Vec<ManifestEntry>,
}

const BUILTIN: [(&str, &str); 4] = [
    ("table1", include_str!("../manifests/table1.json")),
    ("table2", include_str!("../manifests/table2.json")),
    ("table3", include_str!("../manifests/table3.json")),
    ("table4", include_str!("../manifests/table4.json")),
];

impl ReproductionManifest {
    pub fn from_json(text: &str) -> Result<Self> {
        let m: Self = serde_json::from_str(text)?;
        m.validate()?;
        Ok(m)
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    /// Names of the manifests compiled into the library.
    pub fn builtin_names() -> Vec<&'static str> {
        BUILTIN.iter().map(|(n, _)| *n).collect()
    }

    pub fn builtin(name: &str) -> Result<Self> {
        let (_, text) = BUILTIN
            .iter()
            .find(|(n, _)| *n == name)
            .ok_or_else(|| Error::NotFound(format!("no built-in manifest `{name}`")))?;
        Self::from_json(text)
    }

    fn validate(&self) -> Result<()> {
        for e in &self.entries {
            if e.n == 0 {
                return Err(Error::Config(format!("entry `{}` has N = 0", e.label)));
            }
            match &e.generator {
                Generator::Sequence { config } => config.validate()?,
                Generator::Hammersley { config, .. } => {
                    config.validate()?;
                    if config.dims() != 1 {
                        return Err(Error::Config(format!("entry `{}`: lifts take a 1-D config", e.label)));
                    }
                }
                Generator::Search1d { .. } => {}
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skipped => "SKIPPED",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntryReport {
    pub label: String,
    pub status: Status,
    pub measured: Option<f64>,
    pub expected: Expectation,
    pub detail: String,
}

impl fmt::Display for EntryReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let measured = self.measured.map_or_else(|| "-".to_string(), |v| format!("{v:.7}"));
        write!(f, "{:<7} {:<28} measured={measured} expected {}", self.status, self.label, self.expected)?;
        if !self.detail.is_empty() {
            write!(f, " ({})", self.detail)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub table_id: String,
    pub entries: Vec<EntryReport>,
}

impl Report {
    pub fn failures(&self) -> usize {
        self.entries.iter().filter(|e| e.status == Status::Fail).count()
    }

    pub fn passed(&self) -> bool {
        self.failures() == 0
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "# {}", self.table_id)?;
        for e in &self.entries {
            writeln!(f, "{e}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ReproduceOptions {
    pub include_long: bool,
}

fn measure(points: &crate::PointSet, method: EntryMethod, ta: &TaParams) -> Result<DiscrepancyResult> {
    match method {
        EntryMethod::ClosedForm => star_disc_1d(points),
        EntryMethod::Exact => {
            if points.dim() == 1 {
                star_disc_1d(points)
            } else {
                star_disc_exact(points)
            }
        }
        EntryMethod::Ta => star_disc_ta(points, ta),
        EntryMethod::Auto => crate::discrepancy::star_discrepancy(points, &DiscMethod::Auto(ta.clone())),
    }
}

fn run_entry(e: &ManifestEntry) -> Result<(f64, bool, String)> {
    match &e.generator {
        Generator::Sequence { config } => {
            let ps = generate_point_set(config, e.n)?;
            let r = measure(&ps, e.method, &e.ta)?;
            Ok((r.value, e.expect.accepts(r.value), r.method.to_string()))
        }
        Generator::Hammersley { config, conventions } => {
            let tried: Vec<HammersleyConvention> = if conventions.is_empty() {
                vec![HammersleyConvention::Indexed, HammersleyConvention::Classic]
            } else {
                conventions.clone()
            };
            let mut parts = Vec::new();
            let mut best: Option<(f64, bool)> = None;
            for conv in tried {
                let ps = hammersley_lift(config, e.n, conv)?;
                let v = measure(&ps, e.method, &e.ta)?.value;
                let ok = e.expect.accepts(v);
                parts.push(format!("{conv}={v:.7}{}", if ok { " matches" } else { "" }));
                // report the matching convention, else the first one
                if best.is_none_or(|(_, was_ok)| ok && !was_ok) {
                    best = Some((v, ok));
                }
            }
            let (v, ok) = best.expect("at least one convention");
            Ok((v, ok, parts.join(", ")))
        }
        Generator::Search1d { p, shifts, perms, seed } => {
            let r = search_1d(*p, e.n, *shifts, *perms, *seed)?;
            let t = &r.trace[0];
            Ok((r.value, e.expect.accepts(r.value), format!("shift={} perm={:?}", t.shift, t.perm.as_slice())))
        }
    }
}

/// Regenerate and evaluate every entry. Entries run in parallel; the report
/// keeps manifest order. Evaluation errors are reported as failures.
pub fn reproduce(manifest: &ReproductionManifest, opts: ReproduceOptions) -> Report {
    let entries = manifest
        .entries
        .par_iter()
        .map(|e| {
            if e.long_running && !opts.include_long {
                return EntryReport {
                    label: e.label.clone(),
                    status: Status::Skipped,
                    measured: None,
                    expected: e.expect,
                    detail: "long-running".into(),
                };
            }
            match run_entry(e) {
                Ok((v, ok, detail)) => EntryReport {
                    label: e.label.clone(),
                    status: if ok { Status::Pass } else { Status::Fail },
                    measured: Some(v),
                    expected: e.expect,
                    detail,
                },
                Err(err) => EntryReport {
                    label: e.label.clone(),
                    status: Status::Fail,
                    measured: None,
                    expected: e.expect,
                    detail: err.to_string(),
                },
            }
        })
        .collect();
    Report { table_id: manifest.table_id.clone(), entries }
}

/// Write `n,scaled` rows for `n = 2..=n_max`.
pub fn emit_series<W: Write>(cfg: &ScrambleConfig, n_max: usize, out: &mut W) -> Result<()> {
    write_series(&scaled_series(cfg, n_max)?, out)
}

pub fn write_series<W: Write>(series: &[(usize, f64)], out: &mut W) -> Result<()> {
    writeln!(out, "n,scaled")?;
    for (n, v) in series {
        writeln!(out, "{n},{v}")?;
    }
    Ok(())
}

pub fn read_series(text: &str) -> Result<Vec<(usize, f64)>> {
    let mut lines = text.lines();
    if lines.next().map(str::trim) != Some("n,scaled") {
        return Err(Error::Parse("series must start with the header `n,scaled`".into()));
    }
    lines
        .filter(|l| !l.trim().is_empty())
        .map(|l| {
            let (n, v) = l.split_once(',').ok_or_else(|| Error::Parse(format!("bad series row `{l}`")))?;
            let n = n.trim().parse().map_err(|_| Error::Parse(format!("bad n in `{l}`")))?;
            let v = v.trim().parse().map_err(|_| Error::Parse(format!("bad value in `{l}`")))?;
            Ok((n, v))
        })
        .collect()
}

/// Per series, the number of `n` at which it attains the smallest value.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WinnerCounts {
    /// Every series sharing the minimum gets the point.
    pub ties_count_for_all: Vec<usize>,
    /// Only a unique minimum gets the point.
    pub ties_count_for_none: Vec<usize>,
}

/// Compare series over the `n` they have in common (matched by position).
pub fn count_winners(series: &[Vec<(usize, f64)>]) -> Result<WinnerCounts> {
    let k = series.len();
    let len = series.iter().map(Vec::len).min().unwrap_or(0);
    for s in series {
        if s[..len].iter().zip(&series[0][..len]).any(|(a, b)| a.0 != b.0) {
            return Err(Error::Domain("series are not aligned on n".into()));
        }
    }
    let mut all = vec![0; k];
    let mut none = vec![0; k];
    for i in 0..len {
        let min = series.iter().map(|s| s[i].1).fold(f64::INFINITY, f64::min);
        let winners: Vec<usize> = (0..k).filter(|&j| series[j][i].1 == min).collect();
        for &w in &winners {
            all[w] += 1;
        }
        if winners.len() == 1 {
            none[winners[0]] += 1;
        }
    }
    Ok(WinnerCounts { ties_count_for_all: all, ties_count_for_none: none })
}
