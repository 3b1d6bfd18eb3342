//! Finite-difference grid checks of `f_q` and of the β-power bound used by the
//! weighted polygon inequality.
//!
//! Every check reduces to "the worst deviation is at most `tol`", so a report is
//! a single number plus the point count it was taken over.

use std::fmt;

use crate::config::{epi_q_grid, linspace};
use crate::error::Result;
use crate::inequalities::beta_power_bound;
use crate::measures::{f_q, von_neumann_of_spectrum, Q_WINDOW_MAX, Q_WINDOW_MIN};

/// Slack for finite-difference sign conditions.
pub const GRID_SLACK: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub struct GridCheck {
    pub name: &'static str,
    pub points: usize,
    /// Largest deviation in the failing direction (negative means margin to spare).
    pub worst: f64,
    pub tol: f64,
}

impl GridCheck {
    fn new(name: &'static str, tol: f64) -> Self {
        Self {
            name,
            points: 0,
            worst: f64::NEG_INFINITY,
            tol,
        }
    }

    fn push(&mut self, deviation: f64) {
        self.points += 1;
        self.worst = self.worst.max(deviation);
    }

    pub fn passed(&self) -> bool {
        self.points > 0 && self.worst <= self.tol
    }
}

impl fmt::Display for GridCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {}: {} points, worst deviation {:.3e} (tol {:.0e})",
            if self.passed() { "PASS" } else { "FAIL" },
            self.name,
            self.points,
            self.worst,
            self.tol
        )
    }
}

/// Interior grid `i / (count + 1)` for `i = 1..=count`.
fn open_unit_grid(count: usize) -> Vec<f64> {
    (1..=count).map(|i| i as f64 / (count + 1) as f64).collect()
}

/// `f_2(x) = x/2` and `f_3(x) = 3x/8` on `points` evenly spaced `x ∈ [0, 1]`.
pub fn linear_identities(points: usize) -> Result<GridCheck> {
    let mut check = GridCheck::new("f_2 = x/2, f_3 = 3x/8", 1e-12);
    for x in linspace(0.0, 1.0, points) {
        check.push((f_q(x, 2.0)? - x / 2.0).abs());
        check.push((f_q(x, 3.0)? - 3.0 * x / 8.0).abs());
    }
    Ok(check)
}

/// `f_4(x) = x/3 - x²/24`, a nonlinear member of the family.
pub fn quartic_identity(points: usize) -> Result<GridCheck> {
    let mut check = GridCheck::new("f_4 = x/3 - x^2/24", 1e-12);
    for x in linspace(0.0, 1.0, points) {
        check.push((f_q(x, 4.0)? - (x / 3.0 - x * x / 24.0)).abs());
    }
    Ok(check)
}

/// Monotone increase and concavity of `x ↦ f_q(x)` for `q` on the polygon window.
pub fn monotone_and_concave(q_count: usize, x_count: usize) -> Result<(GridCheck, GridCheck)> {
    let mut mono = GridCheck::new("f_q nondecreasing in x", GRID_SLACK);
    let mut concave = GridCheck::new("f_q concave in x", GRID_SLACK);
    let xs = open_unit_grid(x_count);
    for q in epi_q_grid(q_count) {
        let f: Vec<f64> = xs.iter().map(|&x| f_q(x, q)).collect::<Result<_>>()?;
        for w in f.windows(2) {
            mono.push(w[0] - w[1]);
        }
        for w in f.windows(3) {
            concave.push(w[0] - 2.0 * w[1] + w[2]);
        }
    }
    Ok((mono, concave))
}

/// Convexity of `x ↦ f_q(x²)` across the full window, and its monotone increase
/// for every `q ∈ (0, (5+√13)/2]`.
pub fn square_argument(q_count: usize, x_count: usize) -> Result<(GridCheck, GridCheck)> {
    let mut convex = GridCheck::new("f_q(x^2) convex in x", GRID_SLACK);
    let mut mono = GridCheck::new("f_q(x^2) nondecreasing in x", GRID_SLACK);
    let xs = linspace(0.0, 1.0, x_count);
    let values = |q: f64| -> Result<Vec<f64>> { xs.iter().map(|&x| f_q(x * x, q)).collect() };
    for q in linspace(Q_WINDOW_MIN, Q_WINDOW_MAX, q_count) {
        for w in values(q)?.windows(3) {
            convex.push(-(w[0] - 2.0 * w[1] + w[2]));
        }
    }
    for q in linspace(Q_WINDOW_MAX / q_count as f64, Q_WINDOW_MAX, q_count) {
        for w in values(q)?.windows(2) {
            mono.push(w[0] - w[1]);
        }
    }
    Ok((convex, mono))
}

/// `(1+x)^β ≤ 1 + (2^β-1) x^β` on `x ∈ {0.01, …, 1.00}` × `β ∈ {0, 0.05, …, 1}`,
/// plus equality at `x = 1`.
pub fn beta_power_grid() -> Result<(GridCheck, GridCheck)> {
    let mut bound = GridCheck::new("(1+x)^b <= 1 + (2^b-1) x^b", GRID_SLACK);
    let mut equality = GridCheck::new("equality at x = 1", 1e-12);
    for bi in 0..=20 {
        let beta = bi as f64 * 0.05;
        for xi in 1..=100 {
            let x = xi as f64 * 0.01;
            let r = beta_power_bound(x, beta)?;
            bound.push(r.lhs - r.rhs);
            if xi == 100 {
                equality.push((r.lhs - r.rhs).abs());
            }
        }
    }
    Ok((bound, equality))
}

/// `f_q` at `q = 1 ± ε` against the binary von Neumann entropy of the
/// reduction's spectrum `((1 ± √(1-x))/2)`.
pub fn q_one_limit(eps: f64, x_count: usize, tol: f64) -> Result<GridCheck> {
    let mut check = GridCheck::new("f_q -> von Neumann as q -> 1", tol);
    for x in linspace(0.0, 1.0, x_count) {
        let s = (1.0 - x).sqrt();
        let reference = von_neumann_of_spectrum(&[(1.0 + s) / 2.0, (1.0 - s) / 2.0]);
        for q in [1.0 - eps, 1.0 + eps] {
            check.push((f_q(x, q)? - reference).abs());
        }
    }
    Ok(check)
}

/// Every grid check at the default sizes, in a fixed order.
pub fn standard_suite() -> Result<Vec<GridCheck>> {
    let (mono, concave) = monotone_and_concave(50, 200)?;
    let (convex, square_mono) = square_argument(50, 200)?;
    let (bound, equality) = beta_power_grid()?;
    Ok(vec![
        linear_identities(1001)?,
        quartic_identity(1001)?,
        mono,
        concave,
        convex,
        square_mono,
        bound,
        equality,
        q_one_limit(1e-6, 1001, 1e-5)?,
    ])
}
