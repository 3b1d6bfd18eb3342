//! Generalized W-class states, sparse pure states and reduced density matrices.
//!
//! A GW state on `n` qudits of dimension `d` is the single-excitation superposition
//! `Σ_j Σ_i a_ij |0…j…0⟩` with the excitation `j ∈ 1..d` sitting on party `i`.
//! It has at most `n(d-1)` nonzero amplitudes, so states are stored sparsely and
//! the dense `d^n` vector is never formed on the hot paths.
//!
//! Party indices are 0-based throughout the library.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, HermitianEigen};

/// Tolerance on the squared norm of pure states and GW coefficient matrices.
pub const NORM_TOL: f64 = 1e-12;
/// Tolerance on trace and Hermiticity of density matrices.
pub const DENSITY_TOL: f64 = 1e-10;
/// Eigenvalues below this are treated as a genuinely invalid (non-PSD) input.
pub const NEGATIVE_EIGEN_TOL: f64 = 1e-8;

/// Coefficient matrix `a_ij` of a GW state: row `i` is a party, column `j-1` the level `j`.
#[derive(Clone, Debug, PartialEq)]
pub struct GwState {
    n: usize,
    d: usize,
    coeffs: Vec<Complex64>,
}

impl GwState {
    /// Validates dimensions and normalization of a row-major `n × (d-1)` coefficient matrix.
    pub fn new(n: usize, d: usize, coeffs: Vec<Complex64>) -> Result<Self> {
        if n < 2 || d < 2 {
            return Err(Error::InvalidDimensions(format!(
                "GW state needs n >= 2 and d >= 2, got n = {n}, d = {d}"
            )));
        }
        if coeffs.len() != n * (d - 1) {
            return Err(Error::InvalidDimensions(format!(
                "expected {} coefficients for n = {n}, d = {d}, got {}",
                n * (d - 1),
                coeffs.len()
            )));
        }
        if coeffs.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::OutOfRange("non-finite coefficient".into()));
        }
        let norm: f64 = coeffs.iter().map(|z| z.norm_sqr()).sum();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized(norm));
        }
        Ok(Self { n, d, coeffs })
    }

    /// Qubit GW state with real amplitudes `√Λ_i`.
    pub fn from_weights(weights: &[f64]) -> Result<Self> {
        if weights.iter().any(|&w| w < 0.0) {
            return Err(Error::OutOfRange("negative party weight".into()));
        }
        let coeffs = weights.iter().map(|&w| Complex64::new(w.sqrt(), 0.0)).collect();
        Self::new(weights.len(), 2, coeffs)
    }

    /// The uniform n-qubit W state.
    pub fn uniform_w(n: usize) -> Result<Self> {
        Self::from_weights(&vec![1.0 / n as f64; n])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// Amplitude `a_ij` for party `party` and level `level ∈ 1..d`.
    pub fn coeff(&self, party: usize, level: usize) -> Complex64 {
        assert!(party < self.n && (1..self.d).contains(&level));
        self.coeffs[party * (self.d - 1) + level - 1]
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Per-party weights `Λ_i = Σ_j |a_ij|²`.
    pub fn lambda_weights(&self) -> Vec<f64> {
        self.coeffs
            .chunks(self.d - 1)
            .map(|row| row.iter().map(|z| z.norm_sqr()).sum())
            .collect()
    }

    /// The sparse state vector `|W_n^d⟩`.
    pub fn to_sparse(&self) -> SparseState {
        let mut amplitudes = BTreeMap::new();
        for i in 0..self.n {
            for j in 1..self.d {
                let a = self.coeff(i, j);
                if a.norm_sqr() > 0.0 {
                    let mut tuple = vec![0; self.n];
                    tuple[i] = j;
                    amplitudes.insert(tuple, a);
                }
            }
        }
        SparseState {
            dims: vec![self.d; self.n],
            amplitudes,
        }
    }

    /// Parses the plain-text state format: a `n d` header line followed by one
    /// line per party holding `d-1` whitespace-separated `re im` pairs.
    /// Lines starting with `#` and blank lines are ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

        let (hline, header) = lines.next().ok_or(Error::Parse {
            line: 0,
            msg: "missing `n d` header".into(),
        })?;
        let dims = parse_numbers::<usize>(header, hline)?;
        let [n, d] = dims[..] else {
            return Err(Error::Parse {
                line: hline,
                msg: "header must be `n d`".into(),
            });
        };
        if n < 2 || d < 2 {
            return Err(Error::InvalidDimensions(format!("n = {n}, d = {d}")));
        }

        let mut coeffs = Vec::with_capacity(n * (d - 1));
        for party in 0..n {
            let (lno, line) = lines.next().ok_or(Error::Parse {
                line: hline,
                msg: format!("expected {n} party rows, found {party}"),
            })?;
            let vals = parse_numbers::<f64>(line, lno)?;
            if vals.len() != 2 * (d - 1) {
                return Err(Error::Parse {
                    line: lno,
                    msg: format!("expected {} numbers (re im pairs), got {}", 2 * (d - 1), vals.len()),
                });
            }
            coeffs.extend(vals.chunks(2).map(|p| Complex64::new(p[0], p[1])));
        }
        if let Some((lno, _)) = lines.next() {
            return Err(Error::Parse {
                line: lno,
                msg: "trailing data after party rows".into(),
            });
        }
        Self::new(n, d, coeffs)
    }

    /// Renders the state in the format accepted by [`GwState::parse`].
    pub fn to_file_string(&self) -> String {
        let mut out = format!("{} {}\n", self.n, self.d);
        for row in self.coeffs.chunks(self.d - 1) {
            let fields: Vec<String> = row.iter().map(|z| format!("{:e} {:e}", z.re, z.im)).collect();
            let _ = writeln!(out, "{}", fields.join(" "));
        }
        out
    }
}

fn parse_numbers<T: std::str::FromStr>(line: &str, lno: usize) -> Result<Vec<T>> {
    line.split_whitespace()
        .map(|tok| {
            tok.parse::<T>().map_err(|_| Error::Parse {
                line: lno,
                msg: format!("cannot parse `{tok}`"),
            })
        })
        .collect()
}

/// Pure state stored as a map from basis tuples to amplitudes.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseState {
    dims: Vec<usize>,
    amplitudes: BTreeMap<Vec<usize>, Complex64>,
}

impl SparseState {
    pub fn new(dims: Vec<usize>, entries: impl IntoIterator<Item = (Vec<usize>, Complex64)>) -> Result<Self> {
        if dims.is_empty() || dims.contains(&0) {
            return Err(Error::InvalidDimensions(format!("{dims:?}")));
        }
        let mut amplitudes = BTreeMap::new();
        for (tuple, amp) in entries {
            if tuple.len() != dims.len() || tuple.iter().zip(&dims).any(|(t, d)| t >= d) {
                return Err(Error::TupleOutOfRange { tuple, dims });
            }
            if amp.norm_sqr() > 0.0 {
                *amplitudes.entry(tuple).or_insert(Complex64::new(0.0, 0.0)) += amp;
            }
        }
        let norm: f64 = amplitudes.values().map(|z| z.norm_sqr()).sum();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized(norm));
        }
        Ok(Self { dims, amplitudes })
    }

    /// Computational basis state `|tuple⟩`.
    pub fn basis(dims: Vec<usize>, tuple: Vec<usize>) -> Result<Self> {
        Self::new(dims, [(tuple, Complex64::new(1.0, 0.0))])
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn parties(&self) -> usize {
        self.dims.len()
    }

    pub fn amplitude(&self, tuple: &[usize]) -> Complex64 {
        self.amplitudes.get(tuple).copied().unwrap_or(Complex64::new(0.0, 0.0))
    }

    pub fn amplitudes(&self) -> &BTreeMap<Vec<usize>, Complex64> {
        &self.amplitudes
    }

    /// Dense amplitude vector in mixed-radix order (party 0 most significant).
    pub fn to_dense(&self) -> Vec<Complex64> {
        let total: usize = self.dims.iter().product();
        let mut v = vec![Complex64::new(0.0, 0.0); total];
        for (tuple, amp) in &self.amplitudes {
            v[mixed_radix(tuple, &self.dims)] = *amp;
        }
        v
    }

    /// Partial trace over every party not in `keep`. The retained subsystems
    /// appear in the order given by `keep`.
    pub fn reduced_density(&self, keep: &[usize]) -> Result<DensityMatrix> {
        validate_keep(keep, self.parties())?;
        let traced: Vec<usize> = (0..self.parties()).filter(|p| !keep.contains(p)).collect();
        let kept_dims: Vec<usize> = keep.iter().map(|&p| self.dims[p]).collect();
        let side: usize = kept_dims.iter().product();

        let mut groups: BTreeMap<Vec<usize>, Vec<(usize, Complex64)>> = BTreeMap::new();
        for (tuple, amp) in &self.amplitudes {
            let env: Vec<usize> = traced.iter().map(|&p| tuple[p]).collect();
            let sys: Vec<usize> = keep.iter().map(|&p| tuple[p]).collect();
            groups
                .entry(env)
                .or_default()
                .push((mixed_radix(&sys, &kept_dims), *amp));
        }

        let mut rho = CMatrix::zeros(side, side);
        for members in groups.values() {
            for &(a, x) in members {
                for &(b, y) in members {
                    rho[(a, b)] += x * y.conj();
                }
            }
        }
        Ok(DensityMatrix {
            dims: kept_dims,
            matrix: rho,
        })
    }
}

fn validate_keep(keep: &[usize], parties: usize) -> Result<()> {
    if keep.is_empty() {
        return Err(Error::InvalidParties("keep set is empty".into()));
    }
    for (i, &p) in keep.iter().enumerate() {
        if p >= parties {
            return Err(Error::InvalidParties(format!(
                "party {p} out of range for {parties} parties"
            )));
        }
        if keep[..i].contains(&p) {
            return Err(Error::InvalidParties(format!("party {p} repeated")));
        }
    }
    Ok(())
}

pub(crate) fn mixed_radix(digits: &[usize], dims: &[usize]) -> usize {
    digits.iter().zip(dims).fold(0, |acc, (&x, &d)| acc * d + x)
}

fn split_radix(mut index: usize, dims: &[usize]) -> Vec<usize> {
    let mut digits = vec![0; dims.len()];
    for (slot, &d) in digits.iter_mut().zip(dims).rev() {
        *slot = index % d;
        index /= d;
    }
    digits
}

/// Hermitian, unit-trace, positive semidefinite matrix over named subsystems.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    dims: Vec<usize>,
    matrix: CMatrix,
}

impl DensityMatrix {
    /// Validates shape, Hermiticity and trace. Positivity is checked when the
    /// spectrum is requested.
    pub fn new(dims: Vec<usize>, matrix: CMatrix) -> Result<Self> {
        let side: usize = dims.iter().product();
        if dims.is_empty() || !matrix.is_square() || matrix.rows() != side {
            return Err(Error::InvalidDimensions(format!(
                "matrix {}x{} does not match dims {dims:?}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        let dev = matrix.hermitian_deviation();
        if dev > DENSITY_TOL {
            return Err(Error::NotHermitian(dev));
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > DENSITY_TOL || tr.im.abs() > DENSITY_TOL {
            return Err(Error::InvalidTrace(tr.re));
        }
        Ok(Self { dims, matrix })
    }

    /// `|ψ⟩⟨ψ|` for a pure state.
    pub fn from_pure(state: &SparseState) -> Self {
        Self {
            dims: state.dims().to_vec(),
            matrix: CMatrix::projector(&state.to_dense()),
        }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn purity(&self) -> f64 {
        // tr ρ² = Σ |ρ_ab|² for Hermitian ρ
        self.matrix.frobenius_sq()
    }

    /// Full eigen-decomposition, with the same positivity check as [`Self::eigenvalues`].
    pub fn eigen(&self) -> Result<HermitianEigen> {
        let e = linalg::hermitian_eigen(&self.matrix)?;
        if let Some(&min) = e.values.last() {
            if min < -NEGATIVE_EIGEN_TOL {
                return Err(Error::NotPsd(min));
            }
        }
        Ok(e)
    }

    /// Spectrum sorted descending, clamped to `[0, 1]` and renormalized when the
    /// clamping drift is below `1e-8`.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        Ok(clean_spectrum(self.eigen()?.values))
    }

    /// Partial trace keeping the listed subsystems (indices into `dims`), in that order.
    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityMatrix> {
        validate_keep(keep, self.dims.len())?;
        let traced: Vec<usize> = (0..self.dims.len()).filter(|p| !keep.contains(p)).collect();
        let kept_dims: Vec<usize> = keep.iter().map(|&p| self.dims[p]).collect();
        let env_dims: Vec<usize> = traced.iter().map(|&p| self.dims[p]).collect();
        let side: usize = kept_dims.iter().product();

        let coords: Vec<(usize, usize)> = (0..self.dim())
            .map(|i| {
                let digits = split_radix(i, &self.dims);
                let sys: Vec<usize> = keep.iter().map(|&p| digits[p]).collect();
                let env: Vec<usize> = traced.iter().map(|&p| digits[p]).collect();
                (mixed_radix(&sys, &kept_dims), mixed_radix(&env, &env_dims))
            })
            .collect();

        let mut out = CMatrix::zeros(side, side);
        for (i, &(a, ei)) in coords.iter().enumerate() {
            for (j, &(b, ej)) in coords.iter().enumerate() {
                if ei == ej {
                    out[(a, b)] += self.matrix[(i, j)];
                }
            }
        }
        Ok(DensityMatrix {
            dims: kept_dims,
            matrix: out,
        })
    }
}

pub(crate) fn clean_spectrum(mut values: Vec<f64>) -> Vec<f64> {
    for v in values.iter_mut() {
        *v = v.clamp(0.0, 1.0);
    }
    let sum: f64 = values.iter().sum();
    if sum > 0.0 && (sum - 1.0).abs() < NEGATIVE_EIGEN_TOL {
        for v in values.iter_mut() {
            *v /= sum;
        }
    }
    values
}
