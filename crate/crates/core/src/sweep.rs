//! Random GW ensembles, partition enumeration, inequality sweeps and oracle
//! certification runs.
//!
//! Sample `s` of a sweep draws its `(n, d)` and state seed from a generator
//! keyed by `(seed, s)`, so a sweep is a pure function of its configuration.
//! Samples are evaluated in parallel and emitted in sample order.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::fs::File;
use std::io::{BufWriter, Write};

use num_complex::Complex64;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::config::{SubsetScope, SweepCheck, SweepConfig};
use crate::error::{Error, Result};
use crate::inequalities::{
    block_label, check_bipartite_sum, check_epi_partition, check_epi_triple, check_moe, check_monogamy_identity,
    check_triangle, check_weighted_epi, InequalityReport, Partition, ORACLE_TOL,
};
use crate::measures::{f_q, gw_tangle, Bipartition, MeasureKind, MeasureSpec};
use crate::oracle::{roof_extremize, RoofMode, RoofOptions};
use crate::states::GwState;

/// Header of sweep CSV output.
pub const SWEEP_CSV_HEADER: &str = "check,n,d,sample,q,beta,focus,lhs,rhs,gap,satisfied,exploratory";
/// Header of oracle certification CSV output.
pub const ORACLE_CSV_HEADER: &str = "sample,n,d,subset,block,measure,q,closed_form,roof_min,roof_max,pass";

/// Largest set whose partitions may be enumerated.
pub const MAX_PARTITION_SET: usize = 10;
const SAMPLE_CHUNK: usize = 32;

/// GW state with i.i.d. standard complex Gaussian coefficients, normalized.
/// Deterministic in `(n, d, seed)`.
pub fn random_gw(n: usize, d: usize, seed: u64) -> Result<GwState> {
    if n < 2 || d < 2 {
        return Err(Error::InvalidDimensions(format!("n = {n}, d = {d}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((n as u64) << 32) | d as u64);
    let raw: Vec<Complex64> = (0..n * (d - 1))
        .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect();
    let norm = raw.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    GwState::new(n, d, raw.into_iter().map(|z| z / norm).collect())
}

/// The `(n, d, state)` drawn for sample `sample` of a sweep.
pub fn sample_state(cfg: &SweepConfig, sample: usize) -> Result<GwState> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(sample as u64);
    let n = rng.random_range(cfg.n_range.clone());
    let d = rng.random_range(cfg.d_range.clone());
    random_gw(n, d, rng.next_u64())
}

/// All set partitions of `subset` with at most `max_blocks` blocks, ordered by
/// their restricted growth strings lexicographically. Blocks appear in order of
/// their first element's position in `subset`.
pub fn enumerate_partitions(subset: &[usize], max_blocks: Option<usize>) -> Result<Vec<Partition>> {
    let n = subset.len();
    if n > MAX_PARTITION_SET {
        return Err(Error::OutOfRange(format!(
            "refusing to enumerate partitions of {n} > {MAX_PARTITION_SET} elements"
        )));
    }
    if n == 0 {
        return Err(Error::InvalidPartition("cannot partition an empty set".into()));
    }
    let cap = max_blocks.unwrap_or(n).min(n);
    let mut out = Vec::new();
    // growth[i] is the block of element i; maxes[i] = max(growth[..=i]).
    let mut growth = vec![0usize; n];
    let mut maxes = vec![0usize; n];
    loop {
        if maxes[n - 1] < cap {
            let mut blocks = vec![Vec::new(); maxes[n - 1] + 1];
            for (i, &b) in growth.iter().enumerate() {
                blocks[b].push(subset[i]);
            }
            out.push(Partition::new(subset.to_vec(), blocks)?);
        }
        // Advance to the next restricted growth string: bump the last position
        // that may still grow, then reset everything after it.
        let Some(i) = (1..n).rev().find(|&i| growth[i] <= maxes[i - 1]) else {
            return Ok(out);
        };
        growth[i] += 1;
        maxes[i] = maxes[i - 1].max(growth[i]);
        for j in (i + 1)..n {
            growth[j] = 0;
            maxes[j] = maxes[i];
        }
    }
}

/// All `k`-element subsets of `0..n` in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= n {
        rec(0, n, k, &mut Vec::new(), &mut out);
    }
    out
}

/// Identifies the state a report belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SampleInfo {
    pub sample: usize,
    pub n: usize,
    pub d: usize,
}

/// Per-check aggregate of a sweep.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct CheckStats {
    pub rows: usize,
    pub min_gap: f64,
    pub violations: usize,
    pub exploratory_rows: usize,
    pub exploratory_failures: usize,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct SweepSummary {
    pub per_check: BTreeMap<String, CheckStats>,
    pub total_rows: usize,
    /// Partitions with fewer than three blocks skipped by polygon checks.
    pub trivial_skipped: usize,
}

impl SweepSummary {
    fn record(&mut self, report: &InequalityReport) {
        let stats = self
            .per_check
            .entry(report.check.name().to_string())
            .or_insert(CheckStats {
                min_gap: f64::INFINITY,
                ..CheckStats::default()
            });
        stats.rows += 1;
        self.total_rows += 1;
        let gap = match report.relation {
            crate::inequalities::Relation::AtMost => report.gap,
            crate::inequalities::Relation::Equal => -report.gap.abs(),
        };
        if report.exploratory {
            stats.exploratory_rows += 1;
            stats.exploratory_failures += usize::from(!report.satisfied);
        } else {
            stats.min_gap = stats.min_gap.min(gap);
            stats.violations += usize::from(!report.satisfied);
        }
    }

    pub fn violations(&self) -> usize {
        self.per_check.values().map(|s| s.violations).sum()
    }

    pub fn has_violations(&self) -> bool {
        self.violations() > 0
    }
}

impl fmt::Display for SweepSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{:<16} {:>10} {:>14} {:>10} {:>12}",
            "check", "rows", "min_gap", "violations", "exploratory"
        )?;
        for (name, s) in &self.per_check {
            writeln!(
                f,
                "{:<16} {:>10} {:>14.6e} {:>10} {:>12}",
                name, s.rows, s.min_gap, s.violations, s.exploratory_rows
            )?;
        }
        writeln!(f, "total rows: {}", self.total_rows)?;
        if self.trivial_skipped > 0 {
            writeln!(f, "two-block partitions skipped as trivial: {}", self.trivial_skipped)?;
        }
        write!(
            f,
            "result: {}",
            if self.has_violations() {
                "VIOLATIONS FOUND"
            } else {
                "all non-exploratory checks satisfied"
            }
        )
    }
}

/// Every report of the configured checks for one state, in a fixed order.
/// Also returns the number of two-block partitions skipped.
pub fn evaluate_state(g: &GwState, cfg: &SweepConfig) -> Result<(Vec<InequalityReport>, usize)> {
    let n = g.n();
    let tol = cfg.tol;
    let mut out = Vec::new();
    let mut skipped = 0;
    let triples: Vec<[usize; 3]> = combinations(n, 3).into_iter().map(|t| [t[0], t[1], t[2]]).collect();
    let rotations = |[a, b, c]: [usize; 3]| [[a, b, c], [b, c, a], [c, a, b]];
    let triple_label = |t: &[usize; 3]| format!("{}@{}|{}|{}", t[0], t[0], t[1], t[2]);

    let partitions = if cfg.checks.iter().any(|c| {
        matches!(
            c,
            SweepCheck::EpiPartition | SweepCheck::WeightedEpi | SweepCheck::Monogamy
        )
    }) {
        partitions_for(n, cfg)?
    } else {
        Vec::new()
    };

    for &check in &cfg.checks {
        match check {
            SweepCheck::EpiTriple => {
                for &q in &cfg.q_grid {
                    for &t in &triples {
                        for rt in rotations(t) {
                            let r = check_epi_triple(g, rt, q, cfg.exploratory)?;
                            out.push(retol(r, tol).with_focus(triple_label(&rt)));
                        }
                    }
                }
            }
            SweepCheck::Triangle => {
                for &q in &cfg.q_grid {
                    for &t in &triples {
                        for rt in rotations(t) {
                            let (lo, hi, _) = check_triangle(g, rt, q, cfg.exploratory)?;
                            out.push(retol(lo, tol).with_focus(triple_label(&rt)));
                            out.push(retol(hi, tol).with_focus(triple_label(&rt)));
                        }
                    }
                }
            }
            SweepCheck::EpiPartition => {
                for &q in &cfg.q_grid {
                    for p in &partitions {
                        if p.len() < 3 {
                            skipped += 1;
                            continue;
                        }
                        for k in 0..p.len() {
                            let r = check_epi_partition(g, p, k, q, cfg.exploratory)?;
                            out.push(retol(r, tol).with_focus(partition_label(p, k)));
                        }
                    }
                }
            }
            SweepCheck::WeightedEpi => {
                for &q in &cfg.q_grid {
                    for p in partitions.iter().filter(|p| p.len() >= 3) {
                        for &beta in &cfg.beta_grid {
                            let r = check_weighted_epi(g, p, q, beta, cfg.exploratory)?;
                            let k = p.blocks().iter().position(|b| block_label(b) == r.focus).unwrap_or(0);
                            out.push(retol(r, tol).with_focus(partition_label(p, k)));
                        }
                    }
                }
            }
            SweepCheck::Monogamy => {
                for p in partitions.iter().filter(|p| p.len() >= 2) {
                    for k in 0..p.len() {
                        let r = check_monogamy_identity(g, p, k)?;
                        out.push(retol_equal(r, tol).with_focus(partition_label(p, k)));
                    }
                }
            }
            SweepCheck::Moe => {
                for &t in &triples {
                    for rt in rotations(t) {
                        out.push(retol(check_moe(g, rt)?, tol).with_focus(triple_label(&rt)));
                    }
                }
            }
            SweepCheck::BipartiteSum => {
                for &q in &cfg.q_grid {
                    for (a, b) in pair_splits(n) {
                        let a_blocks: Vec<Vec<usize>> = a.iter().map(|&p| vec![p]).collect();
                        let b_blocks: Vec<Vec<usize>> = b.iter().map(|&p| vec![p]).collect();
                        let r = check_bipartite_sum(g, &a_blocks, &b_blocks, q, cfg.exploratory)?;
                        out.push(retol(r, tol));
                    }
                }
            }
        }
    }
    Ok((out, skipped))
}

fn retol(mut r: InequalityReport, tol: f64) -> InequalityReport {
    r.tol = tol;
    r.satisfied = r.gap >= -tol;
    r
}

fn retol_equal(mut r: InequalityReport, tol: f64) -> InequalityReport {
    r.tol = tol;
    r.satisfied = r.gap.abs() <= tol;
    r
}

fn partition_label(p: &Partition, focus: usize) -> String {
    format!("{}@{}", block_label(&p.blocks()[focus]), p)
}

fn partitions_for(n: usize, cfg: &SweepConfig) -> Result<Vec<Partition>> {
    let subsets: Vec<Vec<usize>> = match cfg.partition_subsets {
        SubsetScope::Full => vec![(0..n).collect()],
        SubsetScope::All => (3..=n).flat_map(|k| combinations(n, k)).collect(),
    };
    let mut out = Vec::new();
    for s in subsets {
        out.extend(enumerate_partitions(&s, Some(cfg.max_blocks))?);
    }
    Ok(out)
}

/// Splits of four distinct parties into two unordered pairs `(A, B)`.
pub fn pair_splits(n: usize) -> Vec<([usize; 2], [usize; 2])> {
    let mut out = Vec::new();
    for four in combinations(n, 4) {
        let [a, b, c, d] = [four[0], four[1], four[2], four[3]];
        out.push(([a, b], [c, d]));
        out.push(([a, c], [b, d]));
        out.push(([a, d], [b, c]));
    }
    out
}

/// Runs the configured checks over the sampled ensemble, handing each report to
/// `sink` in sample order.
pub fn sweep_reports(
    cfg: &SweepConfig,
    mut sink: impl FnMut(SampleInfo, &InequalityReport) -> Result<()>,
) -> Result<SweepSummary> {
    cfg.validate()?;
    let mut summary = SweepSummary::default();
    let indices: Vec<usize> = (0..cfg.samples).collect();
    for chunk in indices.chunks(SAMPLE_CHUNK) {
        let evaluated: Vec<Result<(SampleInfo, Vec<InequalityReport>, usize)>> = chunk
            .par_iter()
            .map(|&s| {
                let g = sample_state(cfg, s)?;
                let (reports, skipped) = evaluate_state(&g, cfg)?;
                Ok((
                    SampleInfo {
                        sample: s,
                        n: g.n(),
                        d: g.d(),
                    },
                    reports,
                    skipped,
                ))
            })
            .collect();
        for item in evaluated {
            let (info, reports, skipped) = item?;
            log::debug!(
                "sample {}: n={} d={}, {} rows",
                info.sample,
                info.n,
                info.d,
                reports.len()
            );
            summary.trivial_skipped += skipped;
            for r in &reports {
                summary.record(r);
                sink(info, r)?;
            }
        }
    }
    Ok(summary)
}

/// One CSV row in [`SWEEP_CSV_HEADER`] order.
pub fn sweep_csv_row(info: SampleInfo, r: &InequalityReport) -> String {
    let opt = |x: Option<f64>| x.map(|v| v.to_string()).unwrap_or_default();
    format!(
        "{},{},{},{},{},{},{},{},{},{},{},{}",
        r.check,
        info.n,
        info.d,
        info.sample,
        opt(r.q),
        opt(r.beta),
        r.focus,
        r.lhs,
        r.rhs,
        r.gap,
        r.satisfied,
        r.exploratory
    )
}

/// Runs a sweep and writes its CSV to `cfg.out`.
pub fn run_sweep(cfg: &SweepConfig) -> Result<SweepSummary> {
    let path = cfg
        .out
        .as_ref()
        .ok_or_else(|| Error::Config("sweep needs an output path".into()))?;
    cfg.validate()?;
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "{SWEEP_CSV_HEADER}")?;
    let summary = sweep_reports(cfg, |info, r| {
        writeln!(w, "{}", sweep_csv_row(info, r))?;
        Ok(())
    })?;
    w.flush()?;
    Ok(summary)
}

/// Reports for a single given state (sample index 0), in sweep order.
pub fn check_state(g: &GwState, cfg: &SweepConfig) -> Result<(Vec<InequalityReport>, SweepSummary)> {
    let mut check_cfg = cfg.clone();
    check_cfg.samples = 1;
    check_cfg.validate()?;
    let (reports, skipped) = evaluate_state(g, &check_cfg)?;
    let mut summary = SweepSummary {
        trivial_skipped: skipped,
        ..SweepSummary::default()
    };
    for r in &reports {
        summary.record(r);
    }
    Ok((reports, summary))
}

/// Closed form versus convex-roof bounds for one block of one reduction.
#[derive(Clone, Debug, PartialEq)]
pub struct OracleRow {
    pub sample: usize,
    pub n: usize,
    pub d: usize,
    pub subset: Vec<usize>,
    pub block: Vec<usize>,
    pub measure: MeasureKind,
    pub q: Option<f64>,
    pub closed_form: f64,
    pub roof_min: f64,
    pub roof_max: Option<f64>,
    pub pass: bool,
}

impl OracleRow {
    pub fn csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{}",
            self.sample,
            self.n,
            self.d,
            block_label(&self.subset),
            block_label(&self.block),
            match self.measure {
                MeasureKind::Concurrence => "concurrence",
                MeasureKind::Tsallis => "tsallis",
            },
            self.q.map(|q| q.to_string()).unwrap_or_default(),
            self.closed_form,
            self.roof_min,
            self.roof_max.map(|v| v.to_string()).unwrap_or_default(),
            self.pass
        )
    }

    /// `roof_min - closed_form`.
    pub fn min_excess(&self) -> f64 {
        self.roof_min - self.closed_form
    }
}

/// Which measures a certification run covers.
#[derive(Clone, Debug, PartialEq)]
pub struct CertificationPlan {
    pub concurrence: bool,
    pub tsallis_q: Vec<f64>,
}

/// Every `(subset, block)` pair certified for an `n`-party state: single- and
/// two-party blocks of every 2- and 3-party subset, excluding the block equal
/// to the whole subset.
pub fn certification_cuts(n: usize) -> Vec<(Vec<usize>, Vec<usize>)> {
    let mut out = Vec::new();
    for size in [2, 3] {
        for subset in combinations(n, size) {
            for bsize in 1..size {
                for pick in combinations(size, bsize) {
                    out.push((subset.clone(), pick.iter().map(|&i| subset[i]).collect()));
                }
            }
        }
    }
    out
}

/// Certifies a single block of a single state against the roof oracle.
pub fn certify_block(
    g: &GwState,
    subset: &[usize],
    block: &[usize],
    measure: MeasureSpec,
    opts: &RoofOptions,
) -> Result<(f64, f64, Option<f64>)> {
    let (min, max) = roof_values(g, subset, block, measure, opts)?;
    Ok((closed_form(g, subset, block, measure)?, min, max))
}

fn closed_form(g: &GwState, subset: &[usize], block: &[usize], measure: MeasureSpec) -> Result<f64> {
    let tangle = gw_tangle(g, subset, block)?;
    match measure.kind {
        MeasureKind::Concurrence => Ok(tangle.sqrt()),
        MeasureKind::Tsallis => f_q(tangle, measure.q),
    }
}

/// Oracle min (and, for concurrence, max) across the cut `block | subset \ block`.
fn roof_values(
    g: &GwState,
    subset: &[usize],
    block: &[usize],
    measure: MeasureSpec,
    opts: &RoofOptions,
) -> Result<(f64, Option<f64>)> {
    let rho = g.to_sparse().reduced_density(subset)?;
    let left: Vec<usize> = block
        .iter()
        .map(|p| {
            subset
                .iter()
                .position(|s| s == p)
                .ok_or_else(|| Error::InvalidParties(format!("block party {p} not in subset {subset:?}")))
        })
        .collect::<Result<_>>()?;
    let cut = Bipartition::split_off(left, subset.len())?;
    let min = roof_extremize(&rho, &cut, &measure, RoofMode::Min, opts)?.value;
    let max = match measure.kind {
        MeasureKind::Concurrence => Some(roof_extremize(&rho, &cut, &measure, RoofMode::Max, opts)?.value),
        MeasureKind::Tsallis => None,
    };
    Ok((min, max))
}

/// The side of the cut `block | subset \ block` that contains `subset[0]`.
/// Both blocks of a cut describe the same bipartition, so the roof is searched once.
fn canonical_block(subset: &[usize], block: &[usize]) -> Vec<usize> {
    if block.contains(&subset[0]) {
        block.to_vec()
    } else {
        subset.iter().copied().filter(|p| !block.contains(p)).collect()
    }
}

/// PASS iff `roof_min - closed ∈ [-1e-9, 5e-3]` and, when present,
/// `roof_max ≥ closed - 5e-3`.
pub fn certification_pass(closed: f64, min: f64, max: Option<f64>) -> bool {
    let excess = min - closed;
    (-1e-9..=ORACLE_TOL).contains(&excess) && max.is_none_or(|m| m >= closed - ORACLE_TOL)
}

/// Certifies closed-form GW entanglement against the roof oracle on the sampled
/// ensemble. Rows are handed to `sink` in sample order.
pub fn run_oracle_certification(
    cfg: &SweepConfig,
    plan: &CertificationPlan,
    mut sink: impl FnMut(&OracleRow) -> Result<()>,
) -> Result<OracleSummary> {
    cfg.validate()?;
    let opts = RoofOptions {
        m_extra: cfg.m_extra,
        restarts: cfg.restarts,
        iters: cfg.iters,
        tol: 1e-8,
        seed: cfg.seed,
    };
    let mut measures = Vec::new();
    if plan.concurrence {
        measures.push(MeasureSpec::concurrence());
    }
    for &q in &plan.tsallis_q {
        let mut m = MeasureSpec::tsallis(q);
        m.exploratory = cfg.exploratory;
        measures.push(m);
    }

    let mut summary = OracleSummary::default();
    for s in 0..cfg.samples {
        let g = sample_state(cfg, s)?;
        let cuts = certification_cuts(g.n());
        let distinct: Vec<(Vec<usize>, Vec<usize>)> = cuts
            .iter()
            .map(|(subset, block)| (subset.clone(), canonical_block(subset, block)))
            .filter(|(subset, block)| block.len() < subset.len())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        log::debug!(
            "sample {s}: n={} d={}, {} cuts, {} distinct",
            g.n(),
            g.d(),
            cuts.len(),
            distinct.len()
        );
        let jobs: Vec<(usize, usize)> = (0..measures.len())
            .flat_map(|m| (0..distinct.len()).map(move |c| (m, c)))
            .collect();
        let roofs: Vec<Result<(f64, Option<f64>)>> = jobs
            .par_iter()
            .map(|&(m, c)| roof_values(&g, &distinct[c].0, &distinct[c].1, measures[m], &opts))
            .collect();
        let mut lookup = BTreeMap::new();
        for (&(m, c), roof) in jobs.iter().zip(roofs) {
            lookup.insert((m, &distinct[c]), roof?);
        }
        let rows: Vec<Result<OracleRow>> = (0..measures.len())
            .flat_map(|m| cuts.iter().map(move |cut| (m, cut)))
            .map(|(m, (subset, block))| {
                let measure = measures[m];
                let key = (subset.clone(), canonical_block(subset, block));
                let (min, max) = lookup[&(m, &key)];
                let closed = closed_form(&g, subset, block, measure)?;
                Ok(OracleRow {
                    sample: s,
                    n: g.n(),
                    d: g.d(),
                    subset: subset.clone(),
                    block: block.clone(),
                    measure: measure.kind,
                    q: (measure.kind == MeasureKind::Tsallis).then_some(measure.q),
                    closed_form: closed,
                    roof_min: min,
                    roof_max: max,
                    pass: certification_pass(closed, min, max),
                })
            })
            .collect();
        for row in rows {
            let row = row?;
            summary.record(&row);
            sink(&row)?;
        }
    }
    Ok(summary)
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct OracleSummary {
    pub rows: usize,
    pub failures: usize,
    /// Extremes of `roof_min - closed_form`.
    pub min_excess: f64,
    pub max_excess: f64,
    /// Largest `|roof_max - roof_min|` over concurrence rows.
    pub max_assistance_gap: f64,
}

impl OracleSummary {
    fn record(&mut self, row: &OracleRow) {
        let excess = row.min_excess();
        if self.rows == 0 {
            self.min_excess = excess;
            self.max_excess = excess;
        }
        self.rows += 1;
        self.failures += usize::from(!row.pass);
        self.min_excess = self.min_excess.min(excess);
        self.max_excess = self.max_excess.max(excess);
        if let Some(max) = row.roof_max {
            self.max_assistance_gap = self.max_assistance_gap.max((max - row.roof_min).abs());
        }
    }
}

impl fmt::Display for OracleSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "certified blocks: {}", self.rows)?;
        writeln!(
            f,
            "roof_min - closed_form in [{:.3e}, {:.3e}]",
            self.min_excess, self.max_excess
        )?;
        writeln!(
            f,
            "max |roof_max - roof_min| (concurrence): {:.3e}",
            self.max_assistance_gap
        )?;
        write!(f, "failures: {}", self.failures)
    }
}
