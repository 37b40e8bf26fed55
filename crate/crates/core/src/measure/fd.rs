//! Finite-difference oracle on the unit disk: solves Δu − B·∇u = 0 in polar
//! coordinates on a radially graded mesh with Dirichlet data on the circle.
//!
//! The radial stencil is a nonuniform 3-point formula; convection terms
//! switch to first-order upwinding when the local cell Péclet number exceeds
//! 2, which keeps the system an M-matrix. The center is handled by coupling
//! the innermost ring to itself across the origin, u(−r, θ) = u(r, θ+π).

use thiserror::Error;

use crate::drift::DriftFieldSpec;
use crate::geometry::Point;

#[derive(Debug, Error)]
pub enum FdError {
    #[error("stencil sign pattern violates the M-matrix property at (i={0}, j={1}); refusing to solve")]
    NotMMatrix(usize, usize),
    #[error("SOR failed to reach tolerance {tol:e} in {iters} iterations (residual {residual:e})")]
    NoConvergence { tol: f64, iters: usize, residual: f64 },
}

#[derive(Debug, Clone)]
pub struct FdConfig {
    /// Interior radial rings (plus one boundary ring).
    pub n_r: usize,
    pub n_theta: usize,
    /// Radial grading exponent γ ≥ 1: nodes r = 1 − (1 − s)^γ cluster
    /// toward the circle.
    pub grading: f64,
    /// SOR relaxation factor.
    pub omega: f64,
    pub tol: f64,
    pub max_iters: usize,
}

impl Default for FdConfig {
    fn default() -> Self {
        FdConfig {
            n_r: 96,
            n_theta: 256,
            grading: 1.6,
            omega: 1.85,
            tol: 1e-10,
            max_iters: 200_000,
        }
    }
}

/// The solved field on the polar mesh, with bilinear evaluation.
#[derive(Debug, Clone)]
pub struct SolutionGrid {
    /// Radii r_1 < … < r_{n_r} = 1 (index 0 is the innermost ring).
    pub r: Vec<f64>,
    pub theta: Vec<f64>,
    /// u[i][j] at (r_i, θ_j); the last ring carries the boundary data.
    pub u: Vec<Vec<f64>>,
}

impl SolutionGrid {
    /// Mesh spacing measure for error budgets: the largest radial step.
    pub fn h_max(&self) -> f64 {
        self.r
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(self.r[0], f64::max)
    }

    /// Bilinear interpolation in (r, θ); for r below the innermost ring the
    /// value interpolates toward the across-center sample.
    pub fn eval(&self, x: &Point) -> f64 {
        let nt = self.theta.len();
        let tau = std::f64::consts::TAU;
        let r = x.norm().min(1.0);
        let th = x.angle().rem_euclid(tau);
        let ht = tau / nt as f64;
        let jf = th / ht;
        let j0 = (jf.floor() as usize) % nt;
        let j1 = (j0 + 1) % nt;
        let wt = jf - jf.floor();
        let ring = |i: usize| -> f64 {
            (1.0 - wt) * self.u[i][j0] + wt * self.u[i][j1]
        };
        if r <= self.r[0] {
            // between the across-center sample at −r_0 and the first ring
            let j0o = (j0 + nt / 2) % nt;
            let j1o = (j1 + nt / 2) % nt;
            let opposite = (1.0 - wt) * self.u[0][j0o] + wt * self.u[0][j1o];
            let t = (r + self.r[0]) / (2.0 * self.r[0]);
            return (1.0 - t) * opposite + t * ring(0);
        }
        let mut i = self.r.partition_point(|&ri| ri < r);
        if i >= self.r.len() {
            i = self.r.len() - 1;
        }
        let (i0, i1) = (i - 1, i);
        let wr = (r - self.r[i0]) / (self.r[i1] - self.r[i0]);
        (1.0 - wr) * ring(i0) + wr * ring(i1)
    }
}

struct Stencil {
    /// Coefficients of (inner, outer, cw, ccw) neighbors; diagonal is `diag`.
    inner: f64,
    outer: f64,
    cw: f64,
    ccw: f64,
    diag: f64,
}

/// Solves Lu = Δu − B·∇u = 0 with u = g(θ) on the unit circle.
pub fn fd_solve(
    field: &DriftFieldSpec,
    g: &dyn Fn(f64) -> f64,
    cfg: &FdConfig,
) -> Result<SolutionGrid, FdError> {
    assert_eq!(field.dim, 2, "the finite-difference oracle is planar");
    let (n_r, nt) = (cfg.n_r, cfg.n_theta);
    let tau = std::f64::consts::TAU;
    let ht = tau / nt as f64;
    let r: Vec<f64> = (1..=n_r)
        .map(|i| {
            let s = i as f64 / n_r as f64;
            1.0 - (1.0 - s).powf(cfg.grading)
        })
        .collect();
    let theta: Vec<f64> = (0..nt).map(|j| j as f64 * ht).collect();

    // precompute stencils row by row
    let mut stencils: Vec<Vec<Stencil>> = Vec::with_capacity(n_r - 1);
    for i in 0..n_r - 1 {
        let ri = r[i];
        let h_m = if i == 0 { 2.0 * r[0] } else { r[i] - r[i - 1] };
        let h_p = r[i + 1] - r[i];
        let mut row = Vec::with_capacity(nt);
        for j in 0..nt {
            let x = Point::from_polar(ri, theta[j]);
            let b = field.eval(&x);
            let (s, c) = theta[j].sin_cos();
            let b_r = b.coords[0] * c + b.coords[1] * s;
            let b_t = -b.coords[0] * s + b.coords[1] * c;
            // u_rr + (1/r − B_r) u_r + (1/r²) u_θθ − (B_θ/r) u_θ = 0
            let conv_r = 1.0 / ri - b_r;
            let conv_t = -b_t / ri;
            let diff_t = 1.0 / (ri * ri);

            // diffusion parts
            let mut inner = 2.0 / (h_m * (h_m + h_p));
            let mut outer = 2.0 / (h_p * (h_m + h_p));
            let mut diag = -2.0 / (h_m * h_p);
            let mut cw = diff_t / (ht * ht);
            let mut ccw = diff_t / (ht * ht);
            diag -= 2.0 * diff_t / (ht * ht);

            // radial convection, upwinded beyond Péclet 2
            let pe_r = conv_r.abs() * h_m.max(h_p);
            if pe_r > 2.0 {
                if conv_r > 0.0 {
                    outer += conv_r / h_p;
                    diag -= conv_r / h_p;
                } else {
                    inner += -conv_r / h_m;
                    diag -= -conv_r / h_m;
                }
            } else {
                let a = -h_p / (h_m * (h_m + h_p));
                let bmid = (h_p - h_m) / (h_m * h_p);
                let cpls = h_m / (h_p * (h_m + h_p));
                inner += conv_r * a;
                diag += conv_r * bmid;
                outer += conv_r * cpls;
            }

            // angular convection (diffusion coefficient 1/r²)
            let pe_t = conv_t.abs() * ht / diff_t;
            if pe_t > 2.0 {
                if conv_t > 0.0 {
                    ccw += conv_t / ht;
                    diag -= conv_t / ht;
                } else {
                    cw += -conv_t / ht;
                    diag -= -conv_t / ht;
                }
            } else {
                ccw += conv_t / (2.0 * ht);
                cw -= conv_t / (2.0 * ht);
            }

            if inner < 0.0 || outer < 0.0 || cw < 0.0 || ccw < 0.0 || diag >= 0.0 {
                return Err(FdError::NotMMatrix(i, j));
            }
            row.push(Stencil { inner, outer, cw, ccw, diag });
        }
        stencils.push(row);
    }

    let mut u = vec![vec![0.0f64; nt]; n_r];
    let boundary: Vec<f64> = theta.iter().map(|&t| g(t)).collect();
    u[n_r - 1].copy_from_slice(&boundary);
    let (g_min, g_max) = boundary
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));

    let mut residual = f64::INFINITY;
    let mut iters = 0;
    while iters < cfg.max_iters {
        residual = 0.0;
        for i in 0..n_r - 1 {
            for j in 0..nt {
                let st = &stencils[i][j];
                let u_inner = if i == 0 {
                    u[0][(j + nt / 2) % nt]
                } else {
                    u[i - 1][j]
                };
                let u_outer = u[i + 1][j];
                let u_cw = u[i][(j + nt - 1) % nt];
                let u_ccw = u[i][(j + 1) % nt];
                let res = st.inner * u_inner
                    + st.outer * u_outer
                    + st.cw * u_cw
                    + st.ccw * u_ccw
                    + st.diag * u[i][j];
                // diagonally scaled residual: measured in solution units so
                // the tolerance is meaningful on strongly graded meshes
                let scaled = res / st.diag;
                residual = residual.max(scaled.abs());
                u[i][j] -= cfg.omega * scaled;
            }
        }
        iters += 1;
        if residual < cfg.tol {
            break;
        }
    }
    if residual >= cfg.tol {
        return Err(FdError::NoConvergence { tol: cfg.tol, iters, residual });
    }

    // discrete maximum principle: interior values stay within the data
    // range, up to the iterative-solve accuracy
    for row in &u[..n_r - 1] {
        for &v in row {
            assert!(
                v >= g_min - 1e-6 && v <= g_max + 1e-6,
                "maximum principle violated: {v} outside [{g_min}, {g_max}]"
            );
        }
    }

    Ok(SolutionGrid { r, theta, u })
}
