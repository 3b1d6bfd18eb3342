//! Entanglement polygon inequalities for GW reductions, evaluated in closed form.
//!
//! Each check returns an [`InequalityReport`] with both sides, the gap
//! `rhs - lhs` and the tolerance it was judged at. Checks that only hold in the
//! `q` range `[(5-√13)/2, 2] ∪ [3, (5+√13)/2]` refuse other `q` unless run in
//! exploratory mode, in which case the report is flagged and never counts as a
//! failure.

use std::fmt;

use crate::error::{Error, Result};
use crate::measures::{gw_tangle, gw_tsallis, in_epi_window};
use crate::states::GwState;

/// Slack for checks evaluated from closed forms.
pub const CLOSED_FORM_TOL: f64 = 1e-9;
/// Slack for checks that depend on convex-roof optimization.
pub const ORACLE_TOL: f64 = 5e-3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Check {
    EpiTriple,
    TriangleLower,
    TriangleUpper,
    EpiPartition,
    WeightedEpi,
    Monogamy,
    Moe,
    BipartiteSum,
    BetaPower,
}

impl Check {
    pub fn name(self) -> &'static str {
        match self {
            Check::EpiTriple => "epi_triple",
            Check::TriangleLower => "triangle_lower",
            Check::TriangleUpper => "triangle_upper",
            Check::EpiPartition => "epi_partition",
            Check::WeightedEpi => "weighted_epi",
            Check::Monogamy => "monogamy",
            Check::Moe => "moe",
            Check::BipartiteSum => "bipartite_sum",
            Check::BetaPower => "beta_power",
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// `lhs ≤ rhs` or `lhs = rhs`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    AtMost,
    Equal,
}

/// One right-hand term of the weighted polygon inequality.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedTerm {
    /// Index of the block in the partition.
    pub block: usize,
    /// Position among right-hand blocks, 0 = most entangled.
    pub rank: usize,
    pub hamming_weight: u32,
    /// `(2^β - 1)^{hamming_weight}`.
    pub coefficient: f64,
    /// Tsallis-q entanglement of the block against the rest.
    pub entanglement: f64,
    /// `coefficient · entanglement^β`.
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct InequalityReport {
    pub check: Check,
    pub relation: Relation,
    pub q: Option<f64>,
    pub beta: Option<f64>,
    pub focus: String,
    pub lhs: f64,
    pub rhs: f64,
    /// `rhs - lhs`.
    pub gap: f64,
    pub satisfied: bool,
    pub tol: f64,
    pub exploratory: bool,
    pub terms: Vec<WeightedTerm>,
}

/// Column header matching [`InequalityReport::csv_fields`].
pub const REPORT_CSV_HEADER: &str = "check,q,beta,focus,lhs,rhs,gap,satisfied,exploratory";

impl InequalityReport {
    pub fn at_most(check: Check, lhs: f64, rhs: f64, tol: f64) -> Self {
        let gap = rhs - lhs;
        Self {
            check,
            relation: Relation::AtMost,
            q: None,
            beta: None,
            focus: String::new(),
            lhs,
            rhs,
            gap,
            satisfied: gap >= -tol,
            tol,
            exploratory: false,
            terms: Vec::new(),
        }
    }

    pub fn equal(check: Check, lhs: f64, rhs: f64, tol: f64) -> Self {
        let gap = rhs - lhs;
        Self {
            relation: Relation::Equal,
            satisfied: gap.abs() <= tol,
            ..Self::at_most(check, lhs, rhs, tol)
        }
    }

    pub fn with_q(mut self, q: f64) -> Self {
        self.q = Some(q);
        self
    }

    pub fn with_beta(mut self, beta: f64) -> Self {
        self.beta = Some(beta);
        self
    }

    pub fn with_focus(mut self, focus: impl Into<String>) -> Self {
        self.focus = focus.into();
        self
    }

    pub fn flagged(mut self, exploratory: bool) -> Self {
        self.exploratory = exploratory;
        self
    }

    /// A failure that counts: unsatisfied and not exploratory.
    pub fn is_violation(&self) -> bool {
        !self.satisfied && !self.exploratory
    }

    /// Fields in [`REPORT_CSV_HEADER`] order.
    pub fn csv_fields(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{}",
            self.check,
            opt(self.q),
            opt(self.beta),
            self.focus,
            self.lhs,
            self.rhs,
            self.gap,
            self.satisfied,
            self.exploratory
        )
    }
}

fn opt(x: Option<f64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

/// `"0+2+3"` style label for a block of parties.
pub fn block_label(block: &[usize]) -> String {
    block.iter().map(usize::to_string).collect::<Vec<_>>().join("+")
}

/// Decides whether `q` is inside the proven range; outside it the caller must
/// have opted into exploratory mode. Returns the exploratory flag for the report.
pub fn epi_q_flag(q: f64, exploratory: bool) -> Result<bool> {
    if !(q > 0.0 && q.is_finite()) {
        return Err(Error::OutOfRange(format!("q must be positive, got {q}")));
    }
    if in_epi_window(q) {
        Ok(false)
    } else if exploratory {
        Ok(true)
    } else {
        Err(Error::QOutOfRange {
            q,
            window: "[(5-sqrt13)/2, 2] U [3, (5+sqrt13)/2]",
        })
    }
}

/// An ordered list of disjoint nonempty blocks covering a party subset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    subset: Vec<usize>,
    blocks: Vec<Vec<usize>>,
}

impl Partition {
    pub fn new(subset: Vec<usize>, blocks: Vec<Vec<usize>>) -> Result<Self> {
        for (i, p) in subset.iter().enumerate() {
            if subset[..i].contains(p) {
                return Err(Error::InvalidPartition(format!("party {p} repeated in subset")));
            }
        }
        if blocks.is_empty() || blocks.iter().any(Vec::is_empty) {
            return Err(Error::InvalidPartition("blocks must be nonempty".into()));
        }
        let mut covered = Vec::new();
        for p in blocks.iter().flatten() {
            if !subset.contains(p) {
                return Err(Error::InvalidPartition(format!("party {p} not in subset")));
            }
            if covered.contains(p) {
                return Err(Error::InvalidPartition(format!("party {p} in two blocks")));
            }
            covered.push(*p);
        }
        if covered.len() != subset.len() {
            return Err(Error::InvalidPartition("blocks do not cover the subset".into()));
        }
        Ok(Self { subset, blocks })
    }

    pub fn singletons(subset: Vec<usize>) -> Result<Self> {
        let blocks = subset.iter().map(|&p| vec![p]).collect();
        Self::new(subset, blocks)
    }

    pub fn subset(&self) -> &[usize] {
        &self.subset
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    fn check_parties(&self, n: usize) -> Result<()> {
        match self.subset.iter().find(|&&p| p >= n) {
            Some(p) => Err(Error::InvalidPartition(format!("party {p} out of range for n = {n}"))),
            None => Ok(()),
        }
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels: Vec<String> = self.blocks.iter().map(|b| block_label(b)).collect();
        write!(f, "{}", labels.join("|"))
    }
}

fn check_triple(g: &GwState, t: [usize; 3]) -> Result<()> {
    if t.iter().any(|&p| p >= g.n()) || t[0] == t[1] || t[0] == t[2] || t[1] == t[2] {
        return Err(Error::InvalidParties(format!("invalid triple {t:?} for n = {}", g.n())));
    }
    Ok(())
}

/// Tsallis-q entanglement of each party of a triple against the other two,
/// in triple order. These are the side lengths of the entanglement triangle.
pub fn triangle_sides(g: &GwState, triple: [usize; 3], q: f64, exploratory: bool) -> Result<[f64; 3]> {
    check_triple(g, triple)?;
    let flag = epi_q_flag(q, exploratory)?;
    let mut sides = [0.0; 3];
    for (side, &p) in sides.iter_mut().zip(&triple) {
        *side = gw_tsallis(g, &triple, &[p], q, flag)?;
    }
    Ok(sides)
}

/// `T_q(j1 | j2 j3) ≤ T_q(j2 | j1 j3) + T_q(j3 | j1 j2)` on the reduction to the triple.
pub fn check_epi_triple(g: &GwState, triple: [usize; 3], q: f64, exploratory: bool) -> Result<InequalityReport> {
    let flag = epi_q_flag(q, exploratory)?;
    let [a, b, c] = triangle_sides(g, triple, q, exploratory)?;
    Ok(InequalityReport::at_most(Check::EpiTriple, a, b + c, CLOSED_FORM_TOL)
        .with_q(q)
        .with_focus(triple[0].to_string())
        .flagged(flag))
}

/// The tripartite check with each party of the triple taking the focus in turn.
pub fn check_epi_triple_all_foci(
    g: &GwState,
    triple: [usize; 3],
    q: f64,
    exploratory: bool,
) -> Result<Vec<InequalityReport>> {
    cyclic(triple)
        .into_iter()
        .map(|t| check_epi_triple(g, t, q, exploratory))
        .collect()
}

fn cyclic([a, b, c]: [usize; 3]) -> [[usize; 3]; 3] {
    [[a, b, c], [b, c, a], [c, a, b]]
}

/// Both triangle bounds for the focus party `j1`:
/// `|T(j2) - T(j3)| ≤ T(j1)` and `T(j1) ≤ T(j2) + T(j3)`, plus the three side lengths.
pub fn check_triangle(
    g: &GwState,
    triple: [usize; 3],
    q: f64,
    exploratory: bool,
) -> Result<(InequalityReport, InequalityReport, [f64; 3])> {
    let flag = epi_q_flag(q, exploratory)?;
    let sides = triangle_sides(g, triple, q, exploratory)?;
    let [a, b, c] = sides;
    let focus = triple[0].to_string();
    let lower = InequalityReport::at_most(Check::TriangleLower, (b - c).abs(), a, CLOSED_FORM_TOL)
        .with_q(q)
        .with_focus(focus.clone())
        .flagged(flag);
    let upper = InequalityReport::at_most(Check::TriangleUpper, a, b + c, CLOSED_FORM_TOL)
        .with_q(q)
        .with_focus(focus)
        .flagged(flag);
    Ok((lower, upper, sides))
}

/// Tsallis-q entanglement of every block against the rest of the partition's subset.
pub fn block_entanglements(g: &GwState, partition: &Partition, q: f64, exploratory: bool) -> Result<Vec<f64>> {
    partition.check_parties(g.n())?;
    partition
        .blocks()
        .iter()
        .map(|b| gw_tsallis(g, partition.subset(), b, q, exploratory))
        .collect()
}

/// `T_q(P_k | rest) ≤ Σ_{l≠k} T_q(P_l | rest)` over a partition with at least three blocks.
pub fn check_epi_partition(
    g: &GwState,
    partition: &Partition,
    focus: usize,
    q: f64,
    exploratory: bool,
) -> Result<InequalityReport> {
    if partition.len() < 3 {
        return Err(Error::InvalidPartition(format!(
            "polygon check needs at least 3 blocks, got {} (two blocks are trivially symmetric)",
            partition.len()
        )));
    }
    if focus >= partition.len() {
        return Err(Error::InvalidPartition(format!("focus block {focus} out of range")));
    }
    let flag = epi_q_flag(q, exploratory)?;
    let values = block_entanglements(g, partition, q, flag)?;
    let rhs: f64 = values
        .iter()
        .enumerate()
        .filter(|&(l, _)| l != focus)
        .map(|(_, v)| v)
        .sum();
    Ok(
        InequalityReport::at_most(Check::EpiPartition, values[focus], rhs, CLOSED_FORM_TOL)
            .with_q(q)
            .with_focus(block_label(&partition.blocks()[focus]))
            .flagged(flag),
    )
}

/// `C²_{P_k | rest} = Σ_{l≠k} C²_{P_k | P_l}` for GW reductions.
pub fn check_monogamy_identity(g: &GwState, partition: &Partition, focus: usize) -> Result<InequalityReport> {
    partition.check_parties(g.n())?;
    let blocks = partition.blocks();
    if focus >= blocks.len() {
        return Err(Error::InvalidPartition(format!("focus block {focus} out of range")));
    }
    let target = &blocks[focus];
    let lhs = gw_tangle(g, partition.subset(), target)?;
    let mut rhs = 0.0;
    for (l, other) in blocks.iter().enumerate() {
        if l != focus {
            let pair: Vec<usize> = target.iter().chain(other).copied().collect();
            rhs += gw_tangle(g, &pair, target)?;
        }
    }
    Ok(InequalityReport::equal(Check::Monogamy, lhs, rhs, CLOSED_FORM_TOL).with_focus(block_label(target)))
}

/// Squared-concurrence monogamy `C²_{a|b} + C²_{a|c} ≤ C²_{a|bc}` on the reduction to `{a, b, c}`.
pub fn check_moe(g: &GwState, triple: [usize; 3]) -> Result<InequalityReport> {
    check_triple(g, triple)?;
    let [a, b, c] = triple;
    let lhs = gw_tangle(g, &[a, b], &[a])? + gw_tangle(g, &[a, c], &[a])?;
    let rhs = gw_tangle(g, &triple, &[a])?;
    Ok(InequalityReport::at_most(Check::Moe, lhs, rhs, CLOSED_FORM_TOL).with_focus(a.to_string()))
}

pub fn hamming_weight(k: u64) -> u32 {
    k.count_ones()
}

fn pow_beta(t: f64, beta: f64) -> f64 {
    // Zero-entanglement terms contribute nothing, including at β = 0.
    if t <= 0.0 {
        0.0
    } else {
        t.powf(beta)
    }
}

fn check_beta(beta: f64) -> Result<()> {
    if (0.0..=1.0).contains(&beta) {
        Ok(())
    } else {
        Err(Error::OutOfRange(format!("beta must lie in [0, 1], got {beta}")))
    }
}

fn weighted_report(
    values: &[f64],
    partition: &Partition,
    lhs_block: usize,
    q: f64,
    beta: f64,
    flag: bool,
) -> InequalityReport {
    let key = |i: usize| partition.blocks()[i].iter().copied().min().unwrap_or(usize::MAX);
    let mut rest: Vec<usize> = (0..values.len()).filter(|&i| i != lhs_block).collect();
    rest.sort_by(|&x, &y| values[y].total_cmp(&values[x]).then(key(x).cmp(&key(y))));

    let base = 2f64.powf(beta) - 1.0;
    let terms: Vec<WeightedTerm> = rest
        .iter()
        .enumerate()
        .map(|(rank, &block)| {
            let w = hamming_weight(rank as u64);
            let coefficient = base.powi(w as i32);
            WeightedTerm {
                block,
                rank,
                hamming_weight: w,
                coefficient,
                entanglement: values[block],
                value: coefficient * pow_beta(values[block], beta),
            }
        })
        .collect();
    let rhs = terms.iter().map(|t| t.value).sum();
    let mut report = InequalityReport::at_most(
        Check::WeightedEpi,
        pow_beta(values[lhs_block], beta),
        rhs,
        CLOSED_FORM_TOL,
    )
    .with_q(q)
    .with_beta(beta)
    .with_focus(block_label(&partition.blocks()[lhs_block]))
    .flagged(flag);
    report.terms = terms;
    report
}

/// Weighted polygon inequality
/// `T_0^β ≤ Σ_k (2^β - 1)^{popcount(k)} T_{(k)}^β`.
///
/// The left block is the most entangled one (ties to the lowest party index);
/// the right-hand blocks are ranked by descending entanglement and the `k`-th
/// (from 0) gets coefficient `(2^β - 1)^{popcount(k)}`.
pub fn check_weighted_epi(
    g: &GwState,
    partition: &Partition,
    q: f64,
    beta: f64,
    exploratory: bool,
) -> Result<InequalityReport> {
    let (values, flag) = weighted_inputs(g, partition, q, beta, exploratory)?;
    let key = |i: usize| partition.blocks()[i].iter().copied().min().unwrap_or(usize::MAX);
    let lhs_block = (0..values.len())
        .min_by(|&x, &y| values[y].total_cmp(&values[x]).then(key(x).cmp(&key(y))))
        .expect("partition has blocks");
    Ok(weighted_report(&values, partition, lhs_block, q, beta, flag))
}

/// The weighted inequality with every block taking the left-hand side in turn.
pub fn check_weighted_epi_exhaustive(
    g: &GwState,
    partition: &Partition,
    q: f64,
    beta: f64,
    exploratory: bool,
) -> Result<Vec<InequalityReport>> {
    let (values, flag) = weighted_inputs(g, partition, q, beta, exploratory)?;
    Ok((0..values.len())
        .map(|lhs| weighted_report(&values, partition, lhs, q, beta, flag))
        .collect())
}

fn weighted_inputs(
    g: &GwState,
    partition: &Partition,
    q: f64,
    beta: f64,
    exploratory: bool,
) -> Result<(Vec<f64>, bool)> {
    check_beta(beta)?;
    if partition.len() < 2 {
        return Err(Error::InvalidPartition("weighted check needs at least 2 blocks".into()));
    }
    let flag = epi_q_flag(q, exploratory)?;
    Ok((block_entanglements(g, partition, q, flag)?, flag))
}

/// `(1 + x)^β ≤ 1 + (2^β - 1) x^β` for `x ∈ (0, 1]`, `β ∈ [0, 1]`.
pub fn beta_power_bound(x: f64, beta: f64) -> Result<InequalityReport> {
    check_beta(beta)?;
    if !(x > 0.0 && x <= 1.0) {
        return Err(Error::OutOfRange(format!("x must lie in (0, 1], got {x}")));
    }
    let lhs = (1.0 + x).powf(beta);
    let rhs = 1.0 + (2f64.powf(beta) - 1.0) * x.powf(beta);
    Ok(InequalityReport::at_most(Check::BetaPower, lhs, rhs, CLOSED_FORM_TOL)
        .with_beta(beta)
        .with_focus(format!("x={x}")))
}

/// `T_q(A | B) ≤ Σ_{i,j} T_q(A_i | B_j)` with `A = ∪ A_i`, `B = ∪ B_j` and every
/// other party traced out.
pub fn check_bipartite_sum(
    g: &GwState,
    a_blocks: &[Vec<usize>],
    b_blocks: &[Vec<usize>],
    q: f64,
    exploratory: bool,
) -> Result<InequalityReport> {
    if a_blocks.is_empty() || b_blocks.is_empty() {
        return Err(Error::InvalidPartition("both sides need at least one block".into()));
    }
    let a: Vec<usize> = a_blocks.iter().flatten().copied().collect();
    let b: Vec<usize> = b_blocks.iter().flatten().copied().collect();
    let all: Vec<usize> = a.iter().chain(&b).copied().collect();
    Partition::new(all.clone(), a_blocks.iter().chain(b_blocks).cloned().collect())?.check_parties(g.n())?;
    let flag = epi_q_flag(q, exploratory)?;

    let lhs = gw_tsallis(g, &all, &a, q, flag)?;
    let mut rhs = 0.0;
    for ai in a_blocks {
        for bj in b_blocks {
            let pair: Vec<usize> = ai.iter().chain(bj).copied().collect();
            rhs += gw_tsallis(g, &pair, ai, q, flag)?;
        }
    }
    Ok(
        InequalityReport::at_most(Check::BipartiteSum, lhs, rhs, CLOSED_FORM_TOL)
            .with_q(q)
            .with_focus(format!("{}|{}", block_label(&a), block_label(&b)))
            .flagged(flag),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn epi_triple_anchors() {
        let w4 = GwState::uniform_w(4).unwrap();
        let r = check_epi_triple(&w4, [0, 1, 2], 2.0, false).unwrap();
        assert!(close(r.lhs, 0.25, 1e-15) && close(r.rhs, 0.5, 1e-15) && close(r.gap, 0.25, 1e-15));

        let g = GwState::from_weights(&[0.7, 0.2, 0.1]).unwrap();
        let r = check_epi_triple(&g, [0, 1, 2], 2.0, false).unwrap();
        assert!(close(r.lhs, 0.42, 1e-14) && close(r.rhs, 0.50, 1e-14) && close(r.gap, 0.08, 1e-14));

        let w3 = GwState::uniform_w(3).unwrap();
        let r = check_epi_triple(&w3, [0, 1, 2], 2.0, false).unwrap();
        assert!(close(r.lhs, 4.0 / 9.0, 1e-15) && close(r.rhs, 8.0 / 9.0, 1e-15));
        assert!(r.satisfied && !r.exploratory);
    }

    #[test]
    fn epi_triple_q_policy() {
        let w3 = GwState::uniform_w(3).unwrap();
        assert!(matches!(
            check_epi_triple(&w3, [0, 1, 2], 2.5, false),
            Err(Error::QOutOfRange { .. })
        ));
        let r = check_epi_triple(&w3, [0, 1, 2], 2.5, true).unwrap();
        assert!(r.exploratory && !r.is_violation());
        assert!(check_epi_triple(&w3, [0, 0, 2], 2.0, false).is_err());
        assert_eq!(check_epi_triple_all_foci(&w3, [0, 1, 2], 2.0, false).unwrap().len(), 3);
    }

    #[test]
    fn triangle_anchors() {
        let g = GwState::from_weights(&[0.7, 0.2, 0.1]).unwrap();
        let (lower, upper, sides) = check_triangle(&g, [0, 1, 2], 2.0, false).unwrap();
        for (s, e) in sides.iter().zip([0.42, 0.32, 0.18]) {
            assert!(close(*s, e, 1e-12));
        }
        assert!(close(lower.lhs, 0.14, 1e-12) && close(lower.rhs, 0.42, 1e-12));
        assert!(close(upper.rhs, 0.50, 1e-12));

        let w3 = GwState::uniform_w(3).unwrap();
        let (lower, upper, _) = check_triangle(&w3, [0, 1, 2], 2.0, false).unwrap();
        assert!(close(lower.lhs, 0.0, 1e-15) && close(lower.rhs, 4.0 / 9.0, 1e-15));
        assert!(close(upper.rhs, 8.0 / 9.0, 1e-15));

        let degenerate = GwState::from_weights(&[1.0, 0.0, 0.0]).unwrap();
        let (lower, upper, sides) = check_triangle(&degenerate, [0, 1, 2], 2.0, false).unwrap();
        assert_eq!(sides, [0.0; 3]);
        assert!(lower.satisfied && upper.satisfied && lower.gap == 0.0 && upper.gap == 0.0);
    }

    #[test]
    fn partition_anchors() {
        let w5 = GwState::uniform_w(5).unwrap();
        let p = Partition::new(vec![0, 1, 2, 3], vec![vec![0], vec![1], vec![2, 3]]).unwrap();
        let r = check_epi_partition(&w5, &p, 2, 2.0, false).unwrap();
        assert!(close(r.lhs, 0.32, 1e-14) && close(r.rhs, 0.48, 1e-14));
        assert_eq!(r.focus, "2+3");

        let w4 = GwState::uniform_w(4).unwrap();
        let p = Partition::singletons(vec![0, 1, 2, 3]).unwrap();
        let r = check_epi_partition(&w4, &p, 0, 2.0, false).unwrap();
        assert!(close(r.lhs, 3.0 / 8.0, 1e-15) && close(r.rhs, 9.0 / 8.0, 1e-14));

        let g = GwState::from_weights(&[0.0, 0.5, 0.3, 0.2]).unwrap();
        let p = Partition::singletons(vec![0, 1, 2, 3]).unwrap();
        let r = check_epi_partition(&g, &p, 0, 3.0, false).unwrap();
        assert_eq!(r.lhs, 0.0);
        assert!(r.satisfied);
    }

    #[test]
    fn partition_validation() {
        assert!(Partition::new(vec![0, 1, 2], vec![vec![0], vec![1]]).is_err());
        assert!(Partition::new(vec![0, 1], vec![vec![0, 1], vec![1]]).is_err());
        assert!(Partition::new(vec![0, 1], vec![vec![0], vec![]]).is_err());
        assert!(Partition::new(vec![0, 1], vec![vec![0], vec![2]]).is_err());
        let two = Partition::new(vec![0, 1, 2], vec![vec![0], vec![1, 2]]).unwrap();
        let w3 = GwState::uniform_w(3).unwrap();
        assert!(check_epi_partition(&w3, &two, 0, 2.0, false).is_err());
        let out = Partition::singletons(vec![0, 1, 5]).unwrap();
        assert!(check_epi_partition(&w3, &out, 0, 2.0, false).is_err());
    }

    #[test]
    fn monogamy_anchors() {
        let w3 = GwState::uniform_w(3).unwrap();
        let p = Partition::singletons(vec![0, 1, 2]).unwrap();
        let r = check_monogamy_identity(&w3, &p, 0).unwrap();
        assert!(close(r.lhs, 8.0 / 9.0, 1e-15) && close(r.rhs, 8.0 / 9.0, 1e-15) && r.satisfied);
        assert_eq!(r.relation, Relation::Equal);

        let w4 = GwState::uniform_w(4).unwrap();
        let p = Partition::singletons(vec![0, 1, 2]).unwrap();
        let r = check_monogamy_identity(&w4, &p, 0).unwrap();
        assert!(close(r.lhs, 0.5, 1e-15) && close(r.rhs, 0.5, 1e-15));

        let whole = Partition::new(vec![0, 1, 2], vec![vec![0, 1, 2]]).unwrap();
        let r = check_monogamy_identity(&w4, &whole, 0).unwrap();
        assert_eq!((r.lhs, r.rhs), (0.0, 0.0));
    }

    #[test]
    fn moe_is_tight_for_gw() {
        let g = GwState::from_weights(&[0.4, 0.3, 0.2, 0.1]).unwrap();
        let r = check_moe(&g, [0, 1, 2]).unwrap();
        assert!(r.satisfied && r.gap.abs() < 1e-15);
    }

    #[test]
    fn hamming_weights() {
        assert_eq!(hamming_weight(5), 2);
        assert_eq!(hamming_weight(0), 0);
        assert_eq!(hamming_weight(7), 3);
    }

    #[test]
    fn weighted_anchor() {
        let w4 = GwState::uniform_w(4).unwrap();
        let p = Partition::singletons(vec![0, 1, 2, 3]).unwrap();
        let r = check_weighted_epi(&w4, &p, 2.0, 0.5, false).unwrap();
        let lhs = 0.375f64.sqrt();
        let rhs = lhs * (1.0 + 2.0 * (2f64.sqrt() - 1.0));
        assert!(close(r.lhs, 0.612372, 1e-6) && close(r.rhs, rhs, 1e-12));
        assert!(close(r.rhs, 1.119678, 1e-6));
        let coeffs: Vec<f64> = r.terms.iter().map(|t| t.coefficient).collect();
        assert!(close(coeffs[0], 1.0, 0.0));
        assert!(close(coeffs[1], 2f64.sqrt() - 1.0, 1e-15) && close(coeffs[2], 2f64.sqrt() - 1.0, 1e-15));
        assert_eq!(r.focus, "0");
    }

    #[test]
    fn weighted_beta_one_matches_partition() {
        let g = GwState::from_weights(&[0.35, 0.25, 0.2, 0.15, 0.05]).unwrap();
        let p = Partition::new(vec![0, 1, 2, 3, 4], vec![vec![0], vec![1, 4], vec![2], vec![3]]).unwrap();
        let w = check_weighted_epi(&g, &p, 3.0, 1.0, false).unwrap();
        assert!(w.terms.iter().all(|t| t.coefficient == 1.0));
        let focus = p.blocks().iter().position(|b| block_label(b) == w.focus).unwrap();
        let plain = check_epi_partition(&g, &p, focus, 3.0, false).unwrap();
        assert!((w.gap - plain.gap).abs() < 1e-12);
    }

    #[test]
    fn weighted_degenerate_and_errors() {
        let g = GwState::from_weights(&[1.0, 0.0, 0.0]).unwrap();
        let p = Partition::singletons(vec![0, 1, 2]).unwrap();
        let r = check_weighted_epi(&g, &p, 2.0, 0.5, false).unwrap();
        assert_eq!((r.lhs, r.rhs, r.gap), (0.0, 0.0, 0.0));
        assert!(r.satisfied);
        assert!(check_weighted_epi(&g, &p, 2.0, 1.5, false).is_err());
        assert!(check_weighted_epi(&g, &p, 2.0, -0.1, false).is_err());

        let w3 = GwState::uniform_w(3).unwrap();
        let r = check_weighted_epi(&w3, &p, 2.0, 0.0, false).unwrap();
        assert!(close(r.lhs, 1.0, 0.0) && close(r.rhs, 1.0, 0.0) && r.satisfied);
        assert_eq!(
            check_weighted_epi_exhaustive(&w3, &p, 2.0, 0.3, false).unwrap().len(),
            3
        );
    }

    #[test]
    fn beta_power_anchors() {
        let r = beta_power_bound(1.0, 0.5).unwrap();
        assert!(close(r.lhs, 2f64.sqrt(), 1e-15) && r.gap.abs() < 1e-15);
        let r = beta_power_bound(0.25, 0.5).unwrap();
        assert!(close(r.lhs, 1.118034, 1e-6) && close(r.rhs, 1.207107, 1e-6));
        let r = beta_power_bound(0.3, 1.0).unwrap();
        assert!(r.gap.abs() < 1e-15);
        assert!(beta_power_bound(0.0, 0.5).is_err());
        assert!(beta_power_bound(0.5, 2.0).is_err());
    }

    #[test]
    fn bipartite_anchors() {
        let w5 = GwState::uniform_w(5).unwrap();
        let a = vec![vec![0], vec![1]];
        let b = vec![vec![2], vec![3]];
        let r = check_bipartite_sum(&w5, &a, &b, 2.0, false).unwrap();
        assert!(close(r.lhs, 0.32, 1e-14) && close(r.rhs, 0.32, 1e-14) && r.gap.abs() < 1e-12);

        // f_4(x) = x/3 - x²/24
        let f4 = |x: f64| x / 3.0 - x * x / 24.0;
        let r = check_bipartite_sum(&w5, &a, &b, 4.0, false).unwrap();
        assert!(close(r.lhs, f4(0.64), 1e-12) && close(r.rhs, 4.0 * f4(0.16), 1e-12));
        assert!(r.gap > 0.0);

        let g = GwState::from_weights(&[0.0, 0.0, 0.5, 0.5]).unwrap();
        let r = check_bipartite_sum(&g, &a, &[vec![2], vec![3]], 2.0, false).unwrap();
        assert_eq!((r.lhs, r.rhs), (0.0, 0.0));

        assert!(check_bipartite_sum(&w5, &a, &[vec![1], vec![3]], 2.0, false).is_err());
    }

    #[test]
    fn csv_fields_layout() {
        let r = beta_power_bound(0.5, 0.5).unwrap();
        let fields = r.csv_fields();
        assert_eq!(fields.split(',').count(), REPORT_CSV_HEADER.split(',').count());
        assert!(fields.starts_with("beta_power,,0.5,x=0.5,"));
    }
}
