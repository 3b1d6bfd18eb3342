//! Sweep configuration: `key = value` files with CLI-style overrides.
//!
//! ```text
//! # comment
//! n_range = 3..6
//! d_range = 2..4
//! samples = 100
//! q_grid = epi:25          # 25 points over the proven q range
//! beta_grid = 0..1:11      # 11 evenly spaced points, endpoints included
//! checks = epi_triple, triangle
//! seed = 7
//! ```

use std::fmt;
use std::ops::RangeInclusive;
use std::path::PathBuf;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::inequalities::CLOSED_FORM_TOL;
use crate::measures::{in_epi_window, Q_WINDOW_MAX, Q_WINDOW_MIN};

/// Checks a sweep can run against each sampled state.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SweepCheck {
    EpiTriple,
    Triangle,
    EpiPartition,
    WeightedEpi,
    Monogamy,
    Moe,
    BipartiteSum,
}

impl SweepCheck {
    pub const ALL: [SweepCheck; 7] = [
        SweepCheck::EpiTriple,
        SweepCheck::Triangle,
        SweepCheck::EpiPartition,
        SweepCheck::WeightedEpi,
        SweepCheck::Monogamy,
        SweepCheck::Moe,
        SweepCheck::BipartiteSum,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SweepCheck::EpiTriple => "epi_triple",
            SweepCheck::Triangle => "triangle",
            SweepCheck::EpiPartition => "epi_partition",
            SweepCheck::WeightedEpi => "weighted_epi",
            SweepCheck::Monogamy => "monogamy",
            SweepCheck::Moe => "moe",
            SweepCheck::BipartiteSum => "bipartite_sum",
        }
    }

    /// Whether rows of this check depend on `q`.
    pub fn uses_q(self) -> bool {
        !matches!(self, SweepCheck::Monogamy | SweepCheck::Moe)
    }
}

impl FromStr for SweepCheck {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown check `{s}`")))
    }
}

impl fmt::Display for SweepCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Which party subsets partition-based checks range over.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SubsetScope {
    /// Only the full party set.
    Full,
    /// Every subset with at least three parties.
    All,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepConfig {
    pub n_range: RangeInclusive<usize>,
    pub d_range: RangeInclusive<usize>,
    pub samples: usize,
    pub q_grid: Vec<f64>,
    pub beta_grid: Vec<f64>,
    pub seed: u64,
    pub tol: f64,
    pub checks: Vec<SweepCheck>,
    pub out: Option<PathBuf>,
    pub exploratory: bool,
    pub max_blocks: usize,
    pub partition_subsets: SubsetScope,
    /// Tsallis `q` values certified by the roof oracle.
    pub oracle_q: Vec<f64>,
    pub restarts: usize,
    pub iters: usize,
    pub m_extra: Option<usize>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            n_range: 3..=6,
            d_range: 2..=4,
            samples: 100,
            q_grid: epi_q_grid(25),
            beta_grid: linspace(0.0, 1.0, 11),
            seed: 0,
            tol: CLOSED_FORM_TOL,
            checks: SweepCheck::ALL.to_vec(),
            out: None,
            exploratory: false,
            max_blocks: 5,
            partition_subsets: SubsetScope::Full,
            oracle_q: vec![0.8, 2.0, 3.5],
            restarts: 200,
            iters: 500,
            m_extra: None,
        }
    }
}

impl SweepConfig {
    /// Parses a config file on top of the defaults.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or(Error::Parse {
                line: i + 1,
                msg: format!("expected `key = value`, got `{line}`"),
            })?;
            cfg.set(key.trim(), value.trim()).map_err(|e| Error::Parse {
                line: i + 1,
                msg: e.to_string(),
            })?;
        }
        Ok(cfg)
    }

    /// Sets one option from its textual form. Used by both the file parser and CLI overrides.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "n_range" => self.n_range = parse_range(value)?,
            "d_range" => self.d_range = parse_range(value)?,
            "samples" => self.samples = parse_scalar(key, value)?,
            "q_grid" => self.q_grid = parse_grid(value)?,
            "beta_grid" => self.beta_grid = parse_grid(value)?,
            "seed" => self.seed = parse_scalar(key, value)?,
            "tol" => self.tol = parse_scalar(key, value)?,
            "checks" => self.checks = split_list(value).map(str::parse).collect::<Result<Vec<SweepCheck>>>()?,
            "out" => self.out = Some(PathBuf::from(value)),
            "exploratory" => self.exploratory = parse_scalar(key, value)?,
            "max_blocks" => self.max_blocks = parse_scalar(key, value)?,
            "partition_subsets" => {
                self.partition_subsets = match value {
                    "full" => SubsetScope::Full,
                    "all" => SubsetScope::All,
                    other => {
                        return Err(Error::Config(format!(
                            "partition_subsets must be full or all, got `{other}`"
                        )))
                    }
                }
            }
            "oracle_q" => self.oracle_q = parse_grid(value)?,
            "restarts" => self.restarts = parse_scalar(key, value)?,
            "iters" => self.iters = parse_scalar(key, value)?,
            "m_extra" => self.m_extra = Some(parse_scalar(key, value)?),
            other => return Err(Error::Config(format!("unknown key `{other}`"))),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        if self.samples == 0 {
            return Err(Error::Config("samples must be at least 1".into()));
        }
        if self.n_range.is_empty() || *self.n_range.start() < 2 {
            return Err(Error::Config(format!(
                "n_range {:?} must be nonempty with n >= 2",
                self.n_range
            )));
        }
        if self.d_range.is_empty() || *self.d_range.start() < 2 {
            return Err(Error::Config(format!(
                "d_range {:?} must be nonempty with d >= 2",
                self.d_range
            )));
        }
        if self.q_grid.is_empty() || self.beta_grid.is_empty() {
            return Err(Error::Config("grids must be nonempty".into()));
        }
        if self
            .q_grid
            .iter()
            .chain(&self.oracle_q)
            .any(|&q| !(q > 0.0 && q.is_finite()))
        {
            return Err(Error::Config("q values must be positive".into()));
        }
        if !self.exploratory {
            if let Some(q) = self.q_grid.iter().find(|&&q| !in_epi_window(q)) {
                return Err(Error::Config(format!(
                    "q = {q} is outside the proven range; pass exploratory to sweep it"
                )));
            }
        }
        if self.beta_grid.iter().any(|b| !(0.0..=1.0).contains(b)) {
            return Err(Error::Config("beta values must lie in [0, 1]".into()));
        }
        if self.tol.is_nan() || self.tol < 0.0 {
            return Err(Error::Config("tol must be nonnegative".into()));
        }
        if self.checks.is_empty() {
            return Err(Error::Config("no checks selected".into()));
        }
        if self.restarts == 0 {
            return Err(Error::Config("restarts must be at least 1".into()));
        }
        Ok(())
    }
}

fn parse_scalar<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::Config(format!("cannot parse `{value}` for `{key}`")))
}

fn split_list(value: &str) -> impl Iterator<Item = &str> {
    value.split(',').map(str::trim).filter(|s| !s.is_empty())
}

/// `a..b`, `a-b` or a single integer, inclusive.
fn parse_range(value: &str) -> Result<RangeInclusive<usize>> {
    let bad = || Error::Config(format!("cannot parse range `{value}`"));
    let (lo, hi) = match value.split_once("..").or_else(|| value.split_once('-')) {
        Some((lo, hi)) => (lo.trim(), hi.trim().trim_start_matches('=')),
        None => (value.trim(), value.trim()),
    };
    Ok(lo.parse().map_err(|_| bad())?..=hi.parse().map_err(|_| bad())?)
}

/// Comma-separated numbers; `epi:N` expands to [`epi_q_grid`] and `a..b:N` to [`linspace`].
pub fn parse_grid(value: &str) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for tok in split_list(value) {
        let bad = || Error::Config(format!("cannot parse grid token `{tok}`"));
        if let Some(count) = tok.strip_prefix("epi:") {
            out.extend(epi_q_grid(count.parse().map_err(|_| bad())?));
        } else if let Some((span, count)) = tok.split_once(':') {
            let (lo, hi) = span.split_once("..").ok_or_else(bad)?;
            out.extend(linspace(
                lo.parse().map_err(|_| bad())?,
                hi.parse().map_err(|_| bad())?,
                count.parse().map_err(|_| bad())?,
            ));
        } else {
            out.push(tok.parse().map_err(|_| bad())?);
        }
    }
    Ok(out)
}

/// `count` evenly spaced points from `lo` to `hi` inclusive.
pub fn linspace(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..count)
            .map(|i| {
                if i == count - 1 {
                    hi
                } else {
                    lo + (hi - lo) * i as f64 / (count - 1) as f64
                }
            })
            .collect(),
    }
}

/// `count` points over `[(5-√13)/2, 2] ∪ [3, (5+√13)/2]`: the two intervals have
/// equal length, so the first gets `⌈count/2⌉` evenly spaced points and the
/// second the rest, endpoints included.
pub fn epi_q_grid(count: usize) -> Vec<f64> {
    let first = count.div_ceil(2);
    let mut grid = linspace(Q_WINDOW_MIN, 2.0, first);
    grid.extend(linspace(3.0, Q_WINDOW_MAX, count - first));
    grid
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate() {
        SweepConfig::default().validate().unwrap();
    }

    #[test]
    fn parse_full_file() {
        let text = "# sweep\nn_range = 3..4\nd_range = 2-3\nsamples = 10\nq_grid = 2\n\
                    beta_grid = 0..1:3\nchecks = epi_triple, triangle\nseed = 42\nexploratory = false\n";
        let cfg = SweepConfig::parse(text).unwrap();
        assert_eq!(cfg.n_range, 3..=4);
        assert_eq!(cfg.d_range, 2..=3);
        assert_eq!(cfg.samples, 10);
        assert_eq!(cfg.q_grid, vec![2.0]);
        assert_eq!(cfg.beta_grid, vec![0.0, 0.5, 1.0]);
        assert_eq!(cfg.checks, vec![SweepCheck::EpiTriple, SweepCheck::Triangle]);
        assert_eq!(cfg.seed, 42);
        cfg.validate().unwrap();
    }

    #[test]
    fn list_syntax() {
        assert_eq!(parse_grid("0.7, 1.0, 2.0").unwrap(), vec![0.7, 1.0, 2.0]);
        assert_eq!(parse_range("5").unwrap(), 5..=5);
    }

    #[test]
    fn config_errors() {
        assert!(SweepConfig::parse("samples 3").is_err());
        assert!(SweepConfig::parse("bogus = 1").is_err());
        assert!(SweepConfig::parse("checks = nope").is_err());
        let cfg = SweepConfig {
            samples: 0,
            ..SweepConfig::default()
        };
        assert!(matches!(cfg.validate(), Err(Error::Config(_))));
        let cfg = SweepConfig::parse("q_grid = 2.5").unwrap();
        assert!(cfg.validate().is_err());
        let cfg = SweepConfig::parse("q_grid = 2.5\nexploratory = true").unwrap();
        cfg.validate().unwrap();
        let cfg = SweepConfig::parse("beta_grid = 1.5").unwrap();
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn epi_grid_shape() {
        let g = epi_q_grid(25);
        assert_eq!(g.len(), 25);
        assert_eq!(g[0], Q_WINDOW_MIN);
        assert_eq!(g[12], 2.0);
        assert_eq!(g[13], 3.0);
        assert_eq!(g[24], Q_WINDOW_MAX);
        assert!(g.iter().all(|&q| in_epi_window(q)));
    }
}
