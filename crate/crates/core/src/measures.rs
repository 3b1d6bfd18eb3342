//! Concurrence, Tsallis-q entropy and entanglement, the tangle-to-Tsallis map `f_q`,
//! and closed-form entanglement of GW reductions.
//!
//! For a reduction of a GW state onto a party subset `S` cut as `P | S∖P`, the
//! squared concurrence depends only on the party weights:
//! `C² = 4 Λ_P Λ_{S∖P}` with `Λ_X = Σ_{i∈X} Λ_i`. Pairwise tangles are the
//! special case of two-block subsets, so the one-vs-rest tangle is exactly the
//! sum of the pairwise ones. The convex-roof oracle in [`crate::oracle`]
//! certifies these closed forms numerically.

use crate::error::{Error, Result};
use crate::states::{DensityMatrix, GwState, SparseState};

/// Lower end of the `q` window where `f_q` is monotone and concave: `(5 - √13)/2`.
pub const Q_WINDOW_MIN: f64 = 0.697_224_362_268_005_4;
/// Upper end of the `q` window: `(5 + √13)/2`.
pub const Q_WINDOW_MAX: f64 = 4.302_775_637_731_995;

/// Below this distance from `q = 1` the von Neumann / binary-entropy limit is used.
pub const Q_ONE_BAND: f64 = 1e-6;
/// Inputs to `f_q` may overshoot `[0, 1]` by this much and are clamped.
pub const X_CLAMP: f64 = 1e-12;

const WINDOW_SLACK: f64 = 1e-12;

/// `q` lies in `[(5-√13)/2, (5+√13)/2]`, where Tsallis entanglement of GW reductions is `f_q(C²)`.
pub fn in_q_window(q: f64) -> bool {
    (Q_WINDOW_MIN - WINDOW_SLACK..=Q_WINDOW_MAX + WINDOW_SLACK).contains(&q)
}

/// `q` lies in `[(5-√13)/2, 2] ∪ [3, (5+√13)/2]`, the range in which the polygon inequalities are proven.
pub fn in_epi_window(q: f64) -> bool {
    in_q_window(q) && (q <= 2.0 + WINDOW_SLACK || q >= 3.0 - WINDOW_SLACK)
}

/// Which pure-state measure a convex roof is built from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MeasureKind {
    Concurrence,
    Tsallis,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MeasureSpec {
    pub kind: MeasureKind,
    /// Tsallis parameter; ignored for concurrence.
    pub q: f64,
    /// Permit `q` outside the proven q window.
    pub exploratory: bool,
}

impl MeasureSpec {
    pub fn concurrence() -> Self {
        Self {
            kind: MeasureKind::Concurrence,
            q: 2.0,
            exploratory: false,
        }
    }

    pub fn tsallis(q: f64) -> Self {
        Self {
            kind: MeasureKind::Tsallis,
            q,
            exploratory: false,
        }
    }

    pub fn exploratory(mut self) -> Self {
        self.exploratory = true;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.kind == MeasureKind::Tsallis {
            if !(self.q > 0.0 && self.q.is_finite()) {
                return Err(Error::OutOfRange(format!("q must be positive, got {}", self.q)));
            }
            if !self.exploratory && !in_q_window(self.q) {
                return Err(Error::QOutOfRange {
                    q: self.q,
                    window: "[(5-sqrt13)/2, (5+sqrt13)/2]",
                });
            }
        }
        Ok(())
    }

    /// Pure-state value from the spectrum of one side's reduction.
    pub fn of_spectrum(&self, spectrum: &[f64]) -> f64 {
        match self.kind {
            MeasureKind::Concurrence => {
                let purity: f64 = spectrum.iter().map(|l| l * l).sum();
                concurrence_from_purity(purity)
            }
            MeasureKind::Tsallis => tsallis_of_spectrum(spectrum, self.q),
        }
    }
}

/// A cut of a set of parties into two nonempty sides.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bipartition {
    left: Vec<usize>,
    right: Vec<usize>,
}

impl Bipartition {
    /// Validates that the sides are nonempty, disjoint and jointly cover `0..parties`.
    pub fn new(left: Vec<usize>, right: Vec<usize>, parties: usize) -> Result<Self> {
        if left.is_empty() || right.is_empty() {
            return Err(Error::InvalidParties("both sides of a cut must be nonempty".into()));
        }
        let mut seen = vec![false; parties];
        for &p in left.iter().chain(&right) {
            if p >= parties {
                return Err(Error::InvalidParties(format!("party {p} out of range")));
            }
            if std::mem::replace(&mut seen[p], true) {
                return Err(Error::InvalidParties(format!("party {p} appears twice")));
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::InvalidParties("cut does not cover every party".into()));
        }
        Ok(Self { left, right })
    }

    /// `left` versus everything else.
    pub fn split_off(left: Vec<usize>, parties: usize) -> Result<Self> {
        let right = (0..parties).filter(|p| !left.contains(p)).collect();
        Self::new(left, right, parties)
    }

    pub fn left(&self) -> &[usize] {
        &self.left
    }

    pub fn right(&self) -> &[usize] {
        &self.right
    }

    pub fn swapped(&self) -> Self {
        Self {
            left: self.right.clone(),
            right: self.left.clone(),
        }
    }

    pub fn parties(&self) -> usize {
        self.left.len() + self.right.len()
    }
}

fn check_cut(s: &SparseState, cut: &Bipartition) -> Result<()> {
    if cut.parties() != s.parties() {
        return Err(Error::InvalidParties(format!(
            "cut covers {} parties, state has {}",
            cut.parties(),
            s.parties()
        )));
    }
    Ok(())
}

pub(crate) fn concurrence_from_purity(purity: f64) -> f64 {
    (2.0 * (1.0 - purity)).max(0.0).sqrt()
}

/// `√(2(1 - tr ρ_left²))` for a pure state.
pub fn concurrence_pure(s: &SparseState, cut: &Bipartition) -> Result<f64> {
    check_cut(s, cut)?;
    let rho = s.reduced_density(cut.left())?;
    Ok(concurrence_from_purity(rho.purity()))
}

/// von Neumann entropy in nats.
pub fn von_neumann_of_spectrum(spectrum: &[f64]) -> f64 {
    -spectrum.iter().filter(|&&l| l > 0.0).map(|&l| l * l.ln()).sum::<f64>()
}

/// `(1 - Σ λ^q)/(q - 1)`, switching to the von Neumann limit within [`Q_ONE_BAND`] of `q = 1`.
pub fn tsallis_of_spectrum(spectrum: &[f64], q: f64) -> f64 {
    if (q - 1.0).abs() < Q_ONE_BAND {
        return von_neumann_of_spectrum(spectrum);
    }
    let power_sum: f64 = spectrum.iter().filter(|&&l| l > 0.0).map(|&l| l.powf(q)).sum();
    (1.0 - power_sum) / (q - 1.0)
}

/// Tsallis-q entropy of a density matrix.
pub fn tsallis_entropy(rho: &DensityMatrix, q: f64) -> Result<f64> {
    if !(q > 0.0 && q.is_finite()) {
        return Err(Error::OutOfRange(format!("q must be positive, got {q}")));
    }
    Ok(tsallis_of_spectrum(&rho.eigenvalues()?, q))
}

fn binary_entropy(p: f64) -> f64 {
    von_neumann_of_spectrum(&[p, 1.0 - p])
}

/// Tsallis-q entanglement of a pure state with a rank-2 reduction, as a function
/// of its tangle `x = C²`:
/// `((1+√(1-x))^q + (1-√(1-x))^q - 2^q) / ((1-q) 2^q)`.
pub fn f_q(x: f64, q: f64) -> Result<f64> {
    if !(q > 0.0 && q.is_finite()) {
        return Err(Error::OutOfRange(format!("q must be positive, got {q}")));
    }
    if !(-X_CLAMP..=1.0 + X_CLAMP).contains(&x) {
        return Err(Error::OutOfRange(format!("f_q argument {x} outside [0, 1]")));
    }
    Ok(f_q_unchecked(x.clamp(0.0, 1.0), q))
}

pub(crate) fn f_q_unchecked(x: f64, q: f64) -> f64 {
    let s = (1.0 - x).sqrt();
    if (q - 1.0).abs() < Q_ONE_BAND {
        return binary_entropy((1.0 + s) / 2.0);
    }
    let two_q = 2f64.powf(q);
    ((1.0 + s).powf(q) + (1.0 - s).powf(q) - two_q) / ((1.0 - q) * two_q)
}

/// Tsallis-q entropy of the left reduction of a pure state.
pub fn tsallis_entanglement_pure(s: &SparseState, cut: &Bipartition, q: f64) -> Result<f64> {
    check_cut(s, cut)?;
    tsallis_entropy(&s.reduced_density(cut.left())?, q)
}

fn validate_subset(g: &GwState, subset: &[usize], block: &[usize]) -> Result<()> {
    if subset.is_empty() || block.is_empty() {
        return Err(Error::InvalidParties("subset and block must be nonempty".into()));
    }
    for (i, &p) in subset.iter().enumerate() {
        if p >= g.n() {
            return Err(Error::InvalidParties(format!("party {p} out of range")));
        }
        if subset[..i].contains(&p) {
            return Err(Error::InvalidParties(format!("party {p} repeated")));
        }
    }
    for (i, &p) in block.iter().enumerate() {
        if !subset.contains(&p) {
            return Err(Error::InvalidParties(format!("block party {p} not in subset")));
        }
        if block[..i].contains(&p) {
            return Err(Error::InvalidParties(format!("party {p} repeated in block")));
        }
    }
    Ok(())
}

/// Squared concurrence `C²_{P | S∖P}` of the GW reduction onto `subset`,
/// computed as `4 Λ_P Λ_{S∖P}`. Zero when the block is the whole subset.
pub fn gw_tangle(g: &GwState, subset: &[usize], block: &[usize]) -> Result<f64> {
    validate_subset(g, subset, block)?;
    let lambda = g.lambda_weights();
    let in_block: f64 = block.iter().map(|&p| lambda[p]).sum();
    let rest: f64 = subset.iter().filter(|p| !block.contains(p)).map(|&p| lambda[p]).sum();
    Ok((4.0 * in_block * rest).clamp(0.0, 1.0))
}

/// Tsallis-q entanglement `f_q(C²_{P | S∖P})` of a GW reduction.
///
/// Outside the proven q window the value is only returned in exploratory mode.
pub fn gw_tsallis(g: &GwState, subset: &[usize], block: &[usize], q: f64, exploratory: bool) -> Result<f64> {
    MeasureSpec {
        kind: MeasureKind::Tsallis,
        q,
        exploratory,
    }
    .validate()?;
    f_q(gw_tangle(g, subset, block)?, q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::CMatrix;
    use num_complex::Complex64;

    fn bell() -> SparseState {
        let h = Complex64::new(1.0 / 2f64.sqrt(), 0.0);
        SparseState::new(vec![2, 2], [(vec![0, 0], h), (vec![1, 1], h)]).unwrap()
    }

    #[test]
    fn window_constants() {
        assert!((Q_WINDOW_MIN - (5.0 - 13f64.sqrt()) / 2.0).abs() < 1e-15);
        assert!((Q_WINDOW_MAX - (5.0 + 13f64.sqrt()) / 2.0).abs() < 1e-15);
        assert!(in_epi_window(2.0) && in_epi_window(3.0) && !in_epi_window(2.5));
        assert!(in_q_window(2.5) && !in_q_window(0.5) && !in_q_window(4.5));
    }

    #[test]
    fn concurrence_examples() {
        let cut = Bipartition::new(vec![0], vec![1], 2).unwrap();
        assert!((concurrence_pure(&bell(), &cut).unwrap() - 1.0).abs() < 1e-15);

        let w3 = GwState::uniform_w(3).unwrap().to_sparse();
        let cut = Bipartition::split_off(vec![0], 3).unwrap();
        let c = concurrence_pure(&w3, &cut).unwrap();
        assert!((c - 8f64.sqrt() / 3.0).abs() < 1e-12);
        assert!((c - concurrence_pure(&w3, &cut.swapped()).unwrap()).abs() < 1e-10);

        let prod = SparseState::basis(vec![2, 2], vec![0, 0]).unwrap();
        let cut = Bipartition::new(vec![0], vec![1], 2).unwrap();
        assert_eq!(concurrence_pure(&prod, &cut).unwrap(), 0.0);
    }

    #[test]
    fn invalid_cuts_rejected() {
        assert!(Bipartition::new(vec![], vec![0, 1], 2).is_err());
        assert!(Bipartition::new(vec![0], vec![0, 1], 2).is_err());
        assert!(Bipartition::new(vec![0], vec![1], 3).is_err());
        let cut = Bipartition::new(vec![0], vec![1], 2).unwrap();
        let w3 = GwState::uniform_w(3).unwrap().to_sparse();
        assert!(concurrence_pure(&w3, &cut).is_err());
    }

    #[test]
    fn tsallis_entropy_examples() {
        let mixed = DensityMatrix::new(vec![2], CMatrix::from_real_diagonal(&[0.5, 0.5])).unwrap();
        assert!((tsallis_entropy(&mixed, 2.0).unwrap() - 0.5).abs() < 1e-15);

        let pure = DensityMatrix::from_pure(&bell());
        for q in [0.8, 1.0, 2.0, 3.5] {
            assert!(tsallis_entropy(&pure, q).unwrap().abs() < 1e-12);
        }

        let rho = DensityMatrix::new(vec![2], CMatrix::from_real_diagonal(&[2.0 / 3.0, 1.0 / 3.0])).unwrap();
        let vn = 3f64.ln() - 2.0 / 3.0 * 2f64.ln();
        assert!((vn - 0.636514).abs() < 1e-6);
        assert!((tsallis_entropy(&rho, 1.000001).unwrap() - vn).abs() < 1e-5);
        assert!((tsallis_entropy(&rho, 1.0).unwrap() - vn).abs() < 1e-15);
        assert!(tsallis_entropy(&rho, 0.0).is_err());
    }

    #[test]
    fn f_q_anchor_values() {
        for q in [0.8, 2.0, 3.0, 4.3] {
            assert!(f_q(0.0, q).unwrap().abs() < 1e-15);
        }
        assert!((f_q(0.84, 2.0).unwrap() - 0.42).abs() < 1e-14);
        assert!((f_q(1.0, 3.0).unwrap() - 0.375).abs() < 1e-14);
        // binary entropy limit at maximal entanglement
        assert!((f_q(1.0, 1.0).unwrap() - 2f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn f_q_domain() {
        assert!(f_q(1.0 + 5e-13, 2.0).is_ok());
        assert!(f_q(-5e-13, 2.0).is_ok());
        assert!(f_q(1.1, 2.0).is_err());
        assert!(f_q(-0.1, 2.0).is_err());
        assert!(f_q(0.5, -1.0).is_err());
    }

    #[test]
    fn pure_tsallis_examples() {
        let w3 = GwState::uniform_w(3).unwrap().to_sparse();
        let cut = Bipartition::split_off(vec![0], 3).unwrap();
        assert!((tsallis_entanglement_pure(&w3, &cut, 2.0).unwrap() - 4.0 / 9.0).abs() < 1e-14);

        let cut = Bipartition::new(vec![0], vec![1], 2).unwrap();
        assert!((tsallis_entanglement_pure(&bell(), &cut, 2.0).unwrap() - 0.5).abs() < 1e-14);

        let prod = SparseState::basis(vec![3, 3], vec![0, 0]).unwrap();
        assert!(tsallis_entanglement_pure(&prod, &cut, 3.5).unwrap().abs() < 1e-15);
    }

    #[test]
    fn gw_tangle_examples() {
        let w3 = GwState::uniform_w(3).unwrap();
        let t = gw_tangle(&w3, &[0, 1, 2], &[0]).unwrap();
        assert!((t - 8.0 / 9.0).abs() < 1e-15);
        let c = concurrence_pure(&w3.to_sparse(), &Bipartition::split_off(vec![0], 3).unwrap()).unwrap();
        assert!((t - c * c).abs() < 1e-12);

        let w4 = GwState::uniform_w(4).unwrap();
        assert!((gw_tangle(&w4, &[0, 1, 2], &[0]).unwrap() - 0.5).abs() < 1e-15);
        assert_eq!(gw_tangle(&w4, &[0, 1, 2], &[0, 1, 2]).unwrap(), 0.0);
        assert!(gw_tangle(&w4, &[0, 1], &[2]).is_err());
        assert!(gw_tangle(&w4, &[], &[]).is_err());
    }

    #[test]
    fn gw_tsallis_examples() {
        let w4 = GwState::uniform_w(4).unwrap();
        assert!((gw_tsallis(&w4, &[0, 1, 2], &[0], 2.0, false).unwrap() - 0.25).abs() < 1e-15);
        let w3 = GwState::uniform_w(3).unwrap();
        assert!((gw_tsallis(&w3, &[0, 1, 2], &[0], 2.0, false).unwrap() - 4.0 / 9.0).abs() < 1e-15);
        assert_eq!(gw_tsallis(&w3, &[0, 1], &[0, 1], 3.0, false).unwrap(), 0.0);

        assert!(matches!(
            gw_tsallis(&w3, &[0, 1, 2], &[0], 5.0, false),
            Err(Error::QOutOfRange { .. })
        ));
        assert!(gw_tsallis(&w3, &[0, 1, 2], &[0], 5.0, true).is_ok());
    }
}
