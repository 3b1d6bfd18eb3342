//! Numerical convex roofs: extremize `Σ p_k E(ψ_k)` over pure-state decompositions.
//!
//! Every decomposition of a rank-`r` state `ρ = Σ_l λ_l |e_l⟩⟨e_l|` into `m ≥ r`
//! members is `|φ̃_k⟩ = Σ_l W_kl √λ_l |e_l⟩` for an `m × r` isometry `W`. The
//! search starts from random isometries and applies 2×2 unitary rotations to
//! pairs of rows of `W` (equivalently, to pairs of ensemble members), choosing
//! each rotation angle by a coarse scan followed by golden-section refinement.
//! Rotations keep `W` exactly isometric, so every intermediate ensemble is
//! feasible and the returned value is a certified bound: an upper bound on a
//! minimum roof, a lower bound on a maximum roof.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::measures::{concurrence_from_purity, tsallis_of_spectrum, Bipartition, MeasureKind, MeasureSpec};
use crate::states::{clean_spectrum, mixed_radix, DensityMatrix, SparseState};

/// Eigenvalues below this are dropped before the decomposition is parametrized.
pub const RANK_CUTOFF: f64 = 1e-12;
/// Tolerance on `W†W = 1` for caller-supplied isometries.
pub const ISOMETRY_TOL: f64 = 1e-10;

const SUPPORT_CUTOFF: f64 = 1e-13;
const MEMBER_CUTOFF: f64 = 1e-14;
const SCAN_POINTS: usize = 8;
const GOLDEN_STEPS: usize = 14;
const PHASES: [f64; 2] = [0.0, FRAC_PI_2];
const SMALL_SIDE: usize = 3;
const NEWTON_STEPS: usize = 100;
const RANK_ONE_MINORS: f64 = 1e-14;

type Small = [[Complex64; SMALL_SIDE]; SMALL_SIDE];
/// (diagonal, anti-diagonal) support index products of one 2x2 minor.
type Minor = (Option<(usize, usize)>, Option<(usize, usize)>);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RoofMode {
    Min,
    Max,
}

/// Which side of the true roof the returned value is guaranteed to lie on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CertifiedDirection {
    UpperBoundOnMin,
    LowerBoundOnMax,
}

#[derive(Clone, Debug)]
pub struct RoofOptions {
    /// Extra members beyond the rank; `None` means `m = 2r`.
    pub m_extra: Option<usize>,
    pub restarts: usize,
    /// Maximum number of full pair sweeps per restart.
    pub iters: usize,
    /// A sweep improving the objective by less than this ends the restart.
    pub tol: f64,
    pub seed: u64,
}

impl Default for RoofOptions {
    fn default() -> Self {
        Self {
            m_extra: None,
            restarts: 200,
            iters: 500,
            tol: 1e-8,
            seed: 0,
        }
    }
}

/// Spectral data of a density matrix truncated to its support.
#[derive(Clone, Debug)]
pub struct Eigenensemble {
    dims: Vec<usize>,
    values: Vec<f64>,
    vectors: Vec<Vec<Complex64>>,
}

impl Eigenensemble {
    pub fn of(rho: &DensityMatrix) -> Result<Self> {
        let eig = rho.eigen()?;
        let keep: Vec<usize> = (0..eig.values.len())
            .filter(|&k| eig.values[k] >= RANK_CUTOFF)
            .collect();
        let mut values: Vec<f64> = keep.iter().map(|&k| eig.values[k]).collect();
        let total: f64 = values.iter().sum();
        for v in values.iter_mut() {
            *v /= total;
        }
        Ok(Self {
            dims: rho.dims().to_vec(),
            vectors: keep.iter().map(|&k| eig.vectors.column(k)).collect(),
            values,
        })
    }

    pub fn rank(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }
}

#[derive(Clone, Debug)]
pub struct EnsembleMember {
    pub probability: f64,
    pub state: SparseState,
}

/// A pure-state decomposition `{p_k, |ψ_k⟩}`.
#[derive(Clone, Debug)]
pub struct Ensemble {
    dims: Vec<usize>,
    members: Vec<EnsembleMember>,
}

impl Ensemble {
    pub fn members(&self) -> &[EnsembleMember] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn total_probability(&self) -> f64 {
        self.members.iter().map(|m| m.probability).sum()
    }

    /// `Σ p_k |ψ_k⟩⟨ψ_k|` as a dense matrix.
    pub fn mixture(&self) -> CMatrix {
        let side: usize = self.dims.iter().product();
        let mut out = CMatrix::zeros(side, side);
        for m in &self.members {
            out.add_assign_scaled(&CMatrix::projector(&m.state.to_dense()), m.probability);
        }
        out
    }

    /// Ensemble average of a pure-state measure, evaluated member by member
    /// through explicit partial traces.
    pub fn average(&self, cut: &Bipartition, measure: &MeasureSpec) -> Result<f64> {
        let mut total = 0.0;
        for m in &self.members {
            let reduced = m.state.reduced_density(cut.left())?;
            let value = match measure.kind {
                MeasureKind::Concurrence => concurrence_from_purity(reduced.purity()),
                MeasureKind::Tsallis => tsallis_of_spectrum(&reduced.eigenvalues()?, measure.q),
            };
            total += m.probability * value;
        }
        Ok(total)
    }
}

#[derive(Clone, Debug)]
pub struct RoofResult {
    pub value: f64,
    pub mode: RoofMode,
    pub ensemble: Ensemble,
    /// Isometry that produced `ensemble`.
    pub isometry: CMatrix,
    pub restarts_used: usize,
    pub best_restart: usize,
    pub certified_direction: CertifiedDirection,
}

/// Builds the decomposition `|φ̃_k⟩ = Σ_l W_kl √λ_l |e_l⟩`, dropping members of zero weight.
pub fn ensemble_from_isometry(eig: &Eigenensemble, w: &CMatrix) -> Result<Ensemble> {
    let r = eig.rank();
    if w.cols() != r || w.rows() < r {
        return Err(Error::InvalidDimensions(format!(
            "isometry must be m x {r} with m >= {r}, got {}x{}",
            w.rows(),
            w.cols()
        )));
    }
    let dev = linalg::isometry_deviation(w);
    if dev > ISOMETRY_TOL {
        return Err(Error::NotIsometry(dev));
    }
    let side: usize = eig.dims.iter().product();
    let mut members = Vec::with_capacity(w.rows());
    for k in 0..w.rows() {
        let mut v = vec![Complex64::new(0.0, 0.0); side];
        for l in 0..r {
            let coef = w[(k, l)] * eig.values[l].sqrt();
            for (slot, e) in v.iter_mut().zip(&eig.vectors[l]) {
                *slot += coef * e;
            }
        }
        let p: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if p <= MEMBER_CUTOFF {
            continue;
        }
        let norm = p.sqrt();
        let entries = v
            .iter()
            .enumerate()
            .filter(|(_, z)| z.norm_sqr() > 0.0)
            .map(|(i, z)| (split_index(i, &eig.dims), z / norm));
        members.push(EnsembleMember {
            probability: p,
            state: SparseState::new(eig.dims.clone(), entries)?,
        });
    }
    Ok(Ensemble {
        dims: eig.dims.clone(),
        members,
    })
}

fn split_index(mut index: usize, dims: &[usize]) -> Vec<usize> {
    let mut digits = vec![0; dims.len()];
    for (slot, &d) in digits.iter_mut().zip(dims).rev() {
        *slot = index % d;
        index /= d;
    }
    digits
}

/// Extremizes the ensemble average of `measure` across `cut` over decompositions of `rho`.
///
/// The cut indexes the subsystems of `rho`. Restarts are independent and seeded
/// by `(seed, restart index)`; the best restart wins with the lowest index as
/// tiebreak, so the result does not depend on scheduling.
pub fn roof_extremize(
    rho: &DensityMatrix,
    cut: &Bipartition,
    measure: &MeasureSpec,
    mode: RoofMode,
    opts: &RoofOptions,
) -> Result<RoofResult> {
    measure.validate()?;
    if cut.parties() != rho.dims().len() {
        return Err(Error::InvalidParties(format!(
            "cut covers {} subsystems, state has {}",
            cut.parties(),
            rho.dims().len()
        )));
    }
    if opts.restarts == 0 {
        return Err(Error::Config("roof search needs at least one restart".into()));
    }
    let eig = Eigenensemble::of(rho)?;
    let problem = RoofProblem::new(&eig, cut, *measure, mode);
    let r = eig.rank();
    let m = r + opts.m_extra.unwrap_or(r);

    let best = (0..opts.restarts)
        .into_par_iter()
        .map(|restart| {
            let w = random_isometry(m, r, opts.seed, restart as u64);
            let (w, score) = problem.local_search(w, opts);
            (score, restart, w)
        })
        .reduce_with(|a, b| if b.0 < a.0 || (b.0 == a.0 && b.1 < a.1) { b } else { a })
        .expect("at least one restart");

    let (_, best_restart, w) = best;
    let ensemble = ensemble_from_isometry(&eig, &w)?;
    let value = problem.value_of(&w);
    Ok(RoofResult {
        value,
        mode,
        ensemble,
        isometry: w,
        restarts_used: opts.restarts,
        best_restart,
        certified_direction: match mode {
            RoofMode::Min => CertifiedDirection::UpperBoundOnMin,
            RoofMode::Max => CertifiedDirection::LowerBoundOnMax,
        },
    })
}

/// QR-orthonormalized complex Gaussian `m × r` matrix, keyed by `(seed, stream)`.
pub fn random_isometry(m: usize, r: usize, seed: u64, stream: u64) -> CMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    loop {
        let data = (0..m * r)
            .map(|_| {
                let re: f64 = rng.sample(StandardNormal);
                let im: f64 = rng.sample(StandardNormal);
                Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
            })
            .collect();
        let mut w = CMatrix::from_vec(m, r, data);
        if linalg::orthonormalize_columns(&mut w) {
            return w;
        }
    }
}

/// Precomputed data for fast evaluation of ensemble averages.
///
/// Member vectors are restricted to the union of the eigenvector supports and
/// each support index is split into (small side, large side) coordinates; the
/// reduction onto the side with fewer distinct indices has the same nonzero
/// spectrum as the other side's.
struct RoofProblem {
    measure: MeasureSpec,
    sign: f64,
    /// `basis[l][s] = √λ_l e_l[support s]`.
    basis: Vec<Vec<Complex64>>,
    side_dim: usize,
    /// Support pairs `(i, j, a_i, a_j)` sharing the traced coordinate.
    pairs: Vec<(usize, usize, usize, usize)>,
    /// 2x2 minors of the coefficient matrix as (diagonal, anti-diagonal) support
    /// index products; a missing product is an absent entry.
    minors: Vec<Minor>,
}

impl RoofProblem {
    fn new(eig: &Eigenensemble, cut: &Bipartition, measure: MeasureSpec, mode: RoofMode) -> Self {
        let dims = &eig.dims;
        let side: usize = dims.iter().product();
        let support: Vec<usize> = (0..side)
            .filter(|&i| eig.vectors.iter().any(|v| v[i].norm() > SUPPORT_CUTOFF))
            .collect();

        let left_dims: Vec<usize> = cut.left().iter().map(|&p| dims[p]).collect();
        let right_dims: Vec<usize> = cut.right().iter().map(|&p| dims[p]).collect();
        let coords: Vec<(usize, usize)> = support
            .iter()
            .map(|&i| {
                let digits = split_index(i, dims);
                let l: Vec<usize> = cut.left().iter().map(|&p| digits[p]).collect();
                let r: Vec<usize> = cut.right().iter().map(|&p| digits[p]).collect();
                (mixed_radix(&l, &left_dims), mixed_radix(&r, &right_dims))
            })
            .collect();

        let compress = |keys: Vec<usize>| -> (Vec<usize>, usize) {
            let mut ids = BTreeMap::new();
            let out = keys
                .into_iter()
                .map(|k| {
                    let next = ids.len();
                    *ids.entry(k).or_insert(next)
                })
                .collect();
            (out, ids.len())
        };
        let (left_ids, left_n) = compress(coords.iter().map(|c| c.0).collect());
        let (right_ids, right_n) = compress(coords.iter().map(|c| c.1).collect());
        let (kept, traced, side_dim) = if left_n <= right_n {
            (left_ids, right_ids, left_n)
        } else {
            (right_ids, left_ids, right_n)
        };

        let mut pairs = Vec::new();
        for i in 0..support.len() {
            for j in 0..support.len() {
                if traced[i] == traced[j] {
                    pairs.push((i, j, kept[i], kept[j]));
                }
            }
        }

        // Minor over rows a < a' and columns c < c' is M[a,c] M[a',c'] - M[a,c'] M[a',c].
        let mut grouped: BTreeMap<(usize, usize, usize, usize), Minor> = BTreeMap::new();
        for x in 0..support.len() {
            for y in 0..support.len() {
                if kept[x] < kept[y] && traced[x] != traced[y] {
                    let key = (kept[x], kept[y], traced[x].min(traced[y]), traced[x].max(traced[y]));
                    let slot = grouped.entry(key).or_default();
                    if traced[x] < traced[y] {
                        slot.0 = Some((x, y));
                    } else {
                        slot.1 = Some((x, y));
                    }
                }
            }
        }
        let minors = grouped.into_values().collect();

        let basis = eig
            .vectors
            .iter()
            .zip(&eig.values)
            .map(|(v, &lam)| support.iter().map(|&i| v[i] * lam.sqrt()).collect())
            .collect();

        Self {
            measure,
            sign: match mode {
                RoofMode::Min => 1.0,
                RoofMode::Max => -1.0,
            },
            basis,
            side_dim,
            pairs,
            minors,
        }
    }

    fn members_of(&self, w: &CMatrix) -> Vec<Vec<Complex64>> {
        (0..w.rows())
            .map(|k| {
                let mut v = vec![Complex64::new(0.0, 0.0); self.basis.first().map_or(0, Vec::len)];
                for (l, b) in self.basis.iter().enumerate() {
                    let coef = w[(k, l)];
                    for (slot, x) in v.iter_mut().zip(b) {
                        *slot += coef * x;
                    }
                }
                v
            })
            .collect()
    }

    /// `p · E(u/√p)` for a subnormalized member `u`.
    fn weighted_measure(&self, u: &[Complex64]) -> f64 {
        let p: f64 = u.iter().map(|z| z.norm_sqr()).sum();
        if p <= MEMBER_CUTOFF {
            return 0.0;
        }
        if self.measure.kind == MeasureKind::Concurrence {
            return self.unnormalized_concurrence(u);
        }
        if self.side_dim <= SMALL_SIDE {
            return p * self.small_measure(u, p);
        }
        let mut reduced = CMatrix::zeros(self.side_dim, self.side_dim);
        for &(i, j, a, b) in &self.pairs {
            reduced[(a, b)] += u[i] * u[j].conj();
        }
        let value = match self.measure.kind {
            MeasureKind::Concurrence => unreachable!("concurrence is evaluated from minors"),
            MeasureKind::Tsallis => {
                let spectrum = clean_spectrum(linalg::hermitian_eigenvalues_unchecked(&reduced.scale(1.0 / p)));
                tsallis_of_spectrum(&spectrum, self.measure.q)
            }
        };
        p * value
    }

    /// `p · C(u/√p) = 2 √(Σ |minor|²)`, since `1 - tr ρ² = 2 Σ |minor|²`. Every term is nonnegative, so nearly
    /// product members keep full relative accuracy, unlike `√(2(1 - tr ρ²))`.
    fn unnormalized_concurrence(&self, u: &[Complex64]) -> f64 {
        let product = |t: Option<(usize, usize)>| t.map_or(Complex64::new(0.0, 0.0), |(i, j)| u[i] * u[j]);
        let sum: f64 = self
            .minors
            .iter()
            .map(|&(d, a)| (product(d) - product(a)).norm_sqr())
            .sum();
        2.0 * sum.sqrt()
    }

    /// Allocation-free evaluation for reductions of dimension at most three.
    fn small_measure(&self, u: &[Complex64], p: f64) -> f64 {
        let n = self.side_dim;
        let mut reduced: Small = [[Complex64::new(0.0, 0.0); SMALL_SIDE]; SMALL_SIDE];
        for &(i, j, a, b) in &self.pairs {
            reduced[a][b] += u[i] * u[j].conj();
        }
        let inv = 1.0 / p;
        for row in reduced.iter_mut().take(n) {
            for z in row.iter_mut().take(n) {
                *z *= inv;
            }
        }
        match self.measure.kind {
            MeasureKind::Concurrence => unreachable!("concurrence is evaluated from minors"),
            MeasureKind::Tsallis => {
                let mut spectrum = small_eigenvalues(&reduced, n);
                let spectrum = &mut spectrum[..n];
                for v in spectrum.iter_mut() {
                    *v = v.clamp(0.0, 1.0);
                }
                let sum: f64 = spectrum.iter().sum();
                if sum > 0.0 && (sum - 1.0).abs() < crate::states::NEGATIVE_EIGEN_TOL {
                    for v in spectrum.iter_mut() {
                        *v /= sum;
                    }
                }
                tsallis_of_spectrum(spectrum, self.measure.q)
            }
        }
    }

    fn value_of(&self, w: &CMatrix) -> f64 {
        self.members_of(w).iter().map(|u| self.weighted_measure(u)).sum()
    }

    /// Coordinate descent over row-pair rotations. Returns the final isometry and
    /// its signed objective.
    fn local_search(&self, mut w: CMatrix, opts: &RoofOptions) -> (CMatrix, f64) {
        let m = w.rows();
        let mut members = self.members_of(&w);
        let mut scores: Vec<f64> = members.iter().map(|u| self.sign * self.weighted_measure(u)).collect();
        let mut total: f64 = scores.iter().sum();

        let len = members.first().map_or(0, Vec::len);
        let mut buf_a = vec![Complex64::new(0.0, 0.0); len];
        let mut buf_b = vec![Complex64::new(0.0, 0.0); len];
        for _ in 0..opts.iters {
            let before = total;
            for k in 0..m {
                for l in (k + 1)..m {
                    for &phi in &PHASES {
                        let rot = Complex64::from_polar(1.0, phi);
                        let current = scores[k] + scores[l];
                        let (theta, best) = line_search(current, |theta| {
                            rotate_into(&members[k], &members[l], theta, rot, &mut buf_a, &mut buf_b);
                            self.sign * (self.weighted_measure(&buf_a) + self.weighted_measure(&buf_b))
                        });
                        if best < current - 1e-15 {
                            rotate_into(&members[k], &members[l], theta, rot, &mut buf_a, &mut buf_b);
                            scores[k] = self.sign * self.weighted_measure(&buf_a);
                            scores[l] = self.sign * self.weighted_measure(&buf_b);
                            members[k].copy_from_slice(&buf_a);
                            members[l].copy_from_slice(&buf_b);
                            rotate_rows(&mut w, k, l, theta, rot);
                        }
                    }
                }
            }
            total = scores.iter().sum();
            if before - total < opts.tol {
                break;
            }
        }
        // Re-derive from the isometry so the score matches the returned ensemble exactly.
        let final_score = self.sign * self.value_of(&w);
        (w, final_score)
    }
}

/// `(x, y) ↦ (c x - e^{iφ} s y, e^{-iφ} s x + c y)`, written into `(a, b)`.
fn rotate_into(x: &[Complex64], y: &[Complex64], theta: f64, rot: Complex64, a: &mut [Complex64], b: &mut [Complex64]) {
    let (s, c) = theta.sin_cos();
    let rs = rot * s;
    let rcs = rot.conj() * s;
    for i in 0..x.len() {
        a[i] = x[i] * c - rs * y[i];
        b[i] = rcs * x[i] + y[i] * c;
    }
}

/// Eigenvalues of the leading `n × n` block (`n ≤ 3`) of a positive semidefinite
/// Hermitian matrix.
///
/// For `n = 3` the smallest root of the characteristic polynomial is found by
/// Newton iteration from zero, which approaches it monotonically from below
/// (the cubic is increasing and concave there), and the remaining pair comes
/// from the deflated quadratic. Small eigenvalues are therefore resolved to
/// absolute round-off, which matters for `λ^q` with `q < 1`.
fn small_eigenvalues(a: &Small, n: usize) -> [f64; SMALL_SIDE] {
    match n {
        0 => [0.0; SMALL_SIDE],
        1 => [a[0][0].re, 0.0, 0.0],
        2 => {
            let (lo, hi) = quadratic_roots(a[0][0].re + a[1][1].re, a[0][0].re * a[1][1].re - a[0][1].norm_sqr());
            [hi, lo, 0.0]
        }
        _ => {
            let (x, y, z) = (a[0][0].re, a[1][1].re, a[2][2].re);
            let (b01, b02, b12) = (a[0][1].norm_sqr(), a[0][2].norm_sqr(), a[1][2].norm_sqr());
            let c1 = x + y + z;
            let c2 = x * y + x * z + y * z - b01 - b02 - b12;
            let c3 = x * y * z + 2.0 * (a[0][1] * a[1][2] * a[2][0]).re - x * b12 - y * b02 - z * b01;
            let cubic = |l: f64| ((l - c1) * l + c2) * l - c3;
            let slope = |l: f64| (3.0 * l - 2.0 * c1) * l + c2;
            if c2 <= RANK_ONE_MINORS * c1 * c1 {
                // Double root at zero; its perturbation is below round-off.
                let second = c2.max(0.0) / c1;
                return [c1 - second, second, 0.0];
            }
            let mut smallest = 0.0f64;
            if c3 > 0.0 {
                for _ in 0..NEWTON_STEPS {
                    let d = slope(smallest);
                    if d <= 0.0 {
                        break;
                    }
                    let next = smallest - cubic(smallest) / d;
                    if next <= smallest {
                        break;
                    }
                    smallest = next;
                }
            }
            let sum = c1 - smallest;
            let product = c2 - smallest * sum;
            let (lo, hi) = quadratic_roots(sum, product);
            [hi, lo, smallest]
        }
    }
}

/// Roots of `λ² - s λ + p` with real, nonnegative roots expected; returns `(lo, hi)`.
fn quadratic_roots(s: f64, p: f64) -> (f64, f64) {
    let disc = (s * s - 4.0 * p).max(0.0).sqrt();
    let hi = 0.5 * (s + disc);
    let lo = if hi > 0.0 { p / hi } else { 0.5 * (s - disc) };
    (lo, hi)
}

fn rotate_rows(w: &mut CMatrix, k: usize, l: usize, theta: f64, rot: Complex64) {
    let (s, c) = theta.sin_cos();
    for col in 0..w.cols() {
        let xk = w[(k, col)];
        let xl = w[(l, col)];
        w[(k, col)] = xk * c - rot * s * xl;
        w[(l, col)] = rot.conj() * s * xk + xl * c;
    }
}

/// Minimizes `f` over one period `[0, π/2)` of the rotation angle: coarse scan,
/// then golden-section refinement around the best scan point. `f(0)` is given.
fn line_search(f0: f64, mut f: impl FnMut(f64) -> f64) -> (f64, f64) {
    let step = FRAC_PI_2 / SCAN_POINTS as f64;
    let (mut best_t, mut best_v) = (0.0, f0);
    for i in 1..SCAN_POINTS {
        let t = i as f64 * step;
        let v = f(t);
        if v < best_v {
            best_t = t;
            best_v = v;
        }
    }

    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut lo, mut hi) = (best_t - step, best_t + step);
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..GOLDEN_STEPS {
        if f1 < f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        }
    }
    for (t, v) in [(x1, f1), (x2, f2)] {
        if v < best_v {
            best_t = t;
            best_v = v;
        }
    }
    (best_t, best_v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::GwState;

    fn diag(values: &[f64]) -> DensityMatrix {
        DensityMatrix::new(vec![values.len()], CMatrix::from_real_diagonal(values)).unwrap()
    }

    fn quick() -> RoofOptions {
        RoofOptions {
            restarts: 8,
            ..RoofOptions::default()
        }
    }

    #[test]
    fn identity_isometry_gives_eigen_ensemble() {
        let rho = diag(&[2.0 / 3.0, 1.0 / 3.0]);
        let eig = Eigenensemble::of(&rho).unwrap();
        let ens = ensemble_from_isometry(&eig, &CMatrix::identity(2)).unwrap();
        assert_eq!(ens.len(), 2);
        assert!((ens.members()[0].probability - 2.0 / 3.0).abs() < 1e-15);
        assert!((ens.members()[1].probability - 1.0 / 3.0).abs() < 1e-15);
        assert!(ens.mixture().max_abs_diff(rho.matrix()) < 1e-15);
    }

    #[test]
    fn random_isometry_reproduces_state() {
        let rho = diag(&[2.0 / 3.0, 1.0 / 3.0]);
        let eig = Eigenensemble::of(&rho).unwrap();
        let w = random_isometry(4, 2, 7, 3);
        let ens = ensemble_from_isometry(&eig, &w).unwrap();
        assert_eq!(ens.len(), 4);
        assert!((ens.total_probability() - 1.0).abs() < 1e-12);
        assert!(ens.mixture().max_abs_diff(rho.matrix()) < 1e-12);
    }

    #[test]
    fn non_isometry_rejected() {
        let rho = diag(&[0.5, 0.5]);
        let eig = Eigenensemble::of(&rho).unwrap();
        let w = CMatrix::identity(2).scale(2.0);
        assert!(matches!(ensemble_from_isometry(&eig, &w), Err(Error::NotIsometry(_))));
        assert!(ensemble_from_isometry(&eig, &CMatrix::identity(3)).is_err());
    }

    #[test]
    fn random_isometry_is_deterministic() {
        assert_eq!(random_isometry(4, 2, 11, 5), random_isometry(4, 2, 11, 5));
        assert_ne!(random_isometry(4, 2, 11, 5), random_isometry(4, 2, 11, 6));
    }

    #[test]
    fn pure_input_returns_pure_measure() {
        let g = GwState::from_weights(&[0.6, 0.4]).unwrap();
        let rho = DensityMatrix::from_pure(&g.to_sparse());
        let cut = Bipartition::new(vec![0], vec![1], 2).unwrap();
        let expect = 2.0 * (0.6f64 * 0.4).sqrt();
        for mode in [RoofMode::Min, RoofMode::Max] {
            let res = roof_extremize(&rho, &cut, &MeasureSpec::concurrence(), mode, &quick()).unwrap();
            assert!((res.value - expect).abs() < 1e-12, "{mode:?}: {}", res.value);
        }
    }

    #[test]
    fn separable_diagonal_mixture_has_zero_roof() {
        let mut m = CMatrix::zeros(4, 4);
        m[(0, 0)] = Complex64::new(0.3, 0.0);
        m[(3, 3)] = Complex64::new(0.7, 0.0);
        let rho = DensityMatrix::new(vec![2, 2], m).unwrap();
        let cut = Bipartition::new(vec![0], vec![1], 2).unwrap();
        let res = roof_extremize(&rho, &cut, &MeasureSpec::concurrence(), RoofMode::Min, &quick()).unwrap();
        assert!(res.value >= -1e-12 && res.value < 5e-3, "{}", res.value);
    }

    #[test]
    fn value_matches_generic_evaluation() {
        let g = GwState::from_weights(&[0.5, 0.3, 0.2]).unwrap();
        let rho = g.to_sparse().reduced_density(&[0, 1]).unwrap();
        let cut = Bipartition::new(vec![0], vec![1], 2).unwrap();
        let measure = MeasureSpec::tsallis(2.0);
        let res = roof_extremize(&rho, &cut, &measure, RoofMode::Min, &quick()).unwrap();
        let generic = res.ensemble.average(&cut, &measure).unwrap();
        assert!((res.value - generic).abs() < 1e-10);
        assert!(res.ensemble.mixture().max_abs_diff(rho.matrix()) < 1e-8);
        assert_eq!(res.certified_direction, CertifiedDirection::UpperBoundOnMin);
    }

    #[test]
    fn out_of_window_q_rejected() {
        let rho = diag(&[0.5, 0.5]);
        let rho = DensityMatrix::new(vec![1, 2], rho.matrix().clone()).unwrap();
        let cut = Bipartition::new(vec![0], vec![1], 2).unwrap();
        let err = roof_extremize(&rho, &cut, &MeasureSpec::tsallis(6.0), RoofMode::Min, &quick());
        assert!(matches!(err, Err(Error::QOutOfRange { .. })));
        assert!(roof_extremize(
            &rho,
            &cut,
            &MeasureSpec::tsallis(6.0).exploratory(),
            RoofMode::Min,
            &quick()
        )
        .is_ok());
    }

    #[test]
    fn small_eigenvalues_match_general_solver() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in 1..=3 {
            for trial in 0..300 {
                let g = random_isometry(n, n, rng.random(), 0);
                let mut weights: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
                match trial % 4 {
                    1 if n > 1 => weights[n - 1] = 0.0,
                    2 => weights.iter_mut().skip(1).for_each(|w| *w = 0.0),
                    3 if n > 1 => weights[1] = weights[0],
                    _ => {}
                }
                let total: f64 = weights.iter().sum();
                let mut m = CMatrix::zeros(n, n);
                for (k, &wk) in weights.iter().enumerate() {
                    m.add_assign_scaled(&CMatrix::projector(&g.column(k)), wk / total);
                }
                let mut small: Small = [[Complex64::new(0.0, 0.0); SMALL_SIDE]; SMALL_SIDE];
                for r in 0..n {
                    for c in 0..n {
                        small[r][c] = m[(r, c)];
                    }
                }
                let mut got = small_eigenvalues(&small, n)[..n].to_vec();
                got.sort_by(|a, b| b.total_cmp(a));
                let want = linalg::hermitian_eigenvalues_unchecked(&m);
                for q in [0.7, 2.0, 4.3] {
                    let (a, b) = (
                        tsallis_of_spectrum(&clean_spectrum(got.clone()), q),
                        tsallis_of_spectrum(&clean_spectrum(want.clone()), q),
                    );
                    assert!((a - b).abs() < 1e-9, "n={n} trial={trial} q={q}: {got:?} vs {want:?}");
                }
                if trial % 4 != 3 {
                    for (a, b) in got.iter().zip(&want) {
                        assert!((a - b).abs() < 1e-10, "{got:?} vs {want:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn minor_concurrence_is_accurate_near_product() {
        let m = CMatrix::from_real_diagonal(&[0.4, 0.3, 0.2, 0.1]);
        let rho = DensityMatrix::new(vec![2, 2], m).unwrap();
        let eig = Eigenensemble::of(&rho).unwrap();
        let cut = Bipartition::new(vec![0], vec![1], 2).unwrap();
        let problem = RoofProblem::new(&eig, &cut, MeasureSpec::concurrence(), RoofMode::Min);
        let at = |u: [f64; 4]| problem.unnormalized_concurrence(&u.map(|x| Complex64::new(x, 0.0)));
        // Two qubits: p C = 2 |u00 u11 - u01 u10|.
        let delta = 1e-9;
        assert!((at([1.0, 0.0, 0.0, delta]) - 2.0 * delta).abs() < 1e-24);
        assert!((at([0.3, 0.5, -0.2, 0.7]) - 2.0 * (0.3f64 * 0.7 + 0.5 * 0.2)).abs() < 1e-15);
        assert_eq!(at([0.6, 0.3, 0.4, 0.2]), 0.0);

        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let rho = GwState::from_weights(&[0.4, 0.3, 0.2, 0.1])
            .unwrap()
            .to_sparse()
            .reduced_density(&[0, 1, 3])
            .unwrap();
        let eig = Eigenensemble::of(&rho).unwrap();
        let cut = Bipartition::new(vec![1], vec![0, 2], 3).unwrap();
        let problem = RoofProblem::new(&eig, &cut, MeasureSpec::concurrence(), RoofMode::Min);
        for _ in 0..50 {
            let w = random_isometry(4, eig.vectors.len(), rng.random(), 0);
            let rows = problem.members_of(&w);
            let generic = ensemble_from_isometry(&eig, &w).unwrap();
            let live: Vec<_> = rows
                .iter()
                .filter(|u| u.iter().map(|z| z.norm_sqr()).sum::<f64>() > MEMBER_CUTOFF)
                .collect();
            for (u, member) in live.iter().zip(generic.members()) {
                let purity = member.state.reduced_density(cut.left()).unwrap().purity();
                let want = member.probability * concurrence_from_purity(purity);
                assert!((problem.unnormalized_concurrence(u) - want).abs() < 1e-7);
            }
        }
    }

    #[test]
    fn line_search_finds_interior_minimum() {
        let (t, v) = line_search(1.0, |t| (t - 0.9).powi(2));
        assert!((t - 0.9).abs() < 1e-4 && v < 1e-8);
    }
}
