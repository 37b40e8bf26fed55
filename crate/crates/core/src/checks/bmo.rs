//! BMO Carleson functional: sup over surface balls of the normalized
//! Carleson integral of |∇u|²·δ, compared against the dyadic BMO norm of
//! the boundary data.

use crate::dyadic::DyadicGrid;
use crate::geometry::{CubeExtent, Point};
use crate::measure::fd::SolutionGrid;

#[derive(Debug, Clone)]
pub struct BmoResult {
    /// sup over the (x, r) lattice of (1/σ(Δ(x,r))) ∫_{B(x,r)∩Ω} |∇u|²δ.
    pub carleson_sup: f64,
    /// Dyadic BMO norm of the boundary data over the grid cubes.
    pub bmo_norm: f64,
    /// carleson_sup / bmo_norm²; infinite when the norm vanishes.
    pub ratio: f64,
    /// Outermost ring radius where the gradient is still formed by centered
    /// differences; integrals beyond it use one-sided values.
    pub radial_cutoff: f64,
    /// Per-window table rows (theta, r, normalized integral).
    pub rows: Vec<Vec<f64>>,
}

/// |∇u|² = u_r² + (u_θ/r)² at every interior mesh node, by centered
/// differences (one-sided at the first/last ring).
pub fn gradient_squared(sol: &SolutionGrid) -> Vec<Vec<f64>> {
    let (nr, nt) = (sol.r.len(), sol.theta.len());
    let ht = std::f64::consts::TAU / nt as f64;
    let mut g = vec![vec![0.0; nt]; nr];
    for i in 0..nr {
        for j in 0..nt {
            let u_r = if i == 0 {
                (sol.u[1][j] - sol.u[0][(j + nt / 2) % nt]) / (sol.r[1] + sol.r[0])
            } else if i == nr - 1 {
                (sol.u[i][j] - sol.u[i - 1][j]) / (sol.r[i] - sol.r[i - 1])
            } else {
                (sol.u[i + 1][j] - sol.u[i - 1][j]) / (sol.r[i + 1] - sol.r[i - 1])
            };
            let u_t = (sol.u[i][(j + 1) % nt] - sol.u[i][(j + nt - 1) % nt]) / (2.0 * ht);
            g[i][j] = u_r * u_r + (u_t / sol.r[i]).powi(2);
        }
    }
    g
}

/// σ(Δ(x, r)) on the unit circle for chordal radius r.
fn sigma_delta(r: f64) -> f64 {
    4.0 * (0.5 * r.min(2.0)).asin()
}

/// Carleson integral ∫_{B(x,r)∩Ω} |∇u|²·(1−|y|) dA over the mesh, for the
/// boundary point at angle `theta0`.
fn carleson_integral(sol: &SolutionGrid, g: &[Vec<f64>], theta0: f64, radius: f64) -> f64 {
    let (nr, nt) = (sol.r.len(), sol.theta.len());
    let ht = std::f64::consts::TAU / nt as f64;
    let x = Point::from_polar(1.0, theta0);
    let mut total = 0.0;
    for i in 0..nr {
        let r_lo = if i == 0 { 0.0 } else { 0.5 * (sol.r[i - 1] + sol.r[i]) };
        let r_hi = if i == nr - 1 { 1.0 } else { 0.5 * (sol.r[i] + sol.r[i + 1]) };
        let cell_area = sol.r[i] * (r_hi - r_lo) * ht;
        let delta = 1.0 - sol.r[i];
        for j in 0..nt {
            let y = Point::from_polar(sol.r[i], sol.theta[j]);
            if y.dist(&x) <= radius {
                total += g[i][j] * delta * cell_area;
            }
        }
    }
    total
}

/// Dyadic BMO norm of `f` over all generations of the grid: the largest
/// mean oscillation over a cube (means by midpoint sampling).
pub fn dyadic_bmo_norm(f: &dyn Fn(f64) -> f64, grid: &DyadicGrid) -> f64 {
    let mut worst: f64 = 0.0;
    for k in 1..=grid.k_max {
        for c in grid.generation(k) {
            let CubeExtent::Arc { theta_lo, theta_hi } = c.extent else {
                panic!("dyadic BMO norm is planar");
            };
            let m = 32;
            let vals: Vec<f64> = (0..m)
                .map(|i| f(theta_lo + (i as f64 + 0.5) / m as f64 * (theta_hi - theta_lo)))
                .collect();
            let mean = vals.iter().sum::<f64>() / m as f64;
            let osc = vals.iter().map(|v| (v - mean).abs()).sum::<f64>() / m as f64;
            worst = worst.max(osc);
        }
    }
    worst
}

/// Computes the Carleson functional of a solved field over a lattice of
/// boundary points (every 1/16 turn) and radii 2^{−k}, k = 0..4, and the
/// BMO norm of the data; returns the full result.
pub fn bmo_carleson_functional(
    sol: &SolutionGrid,
    f: &dyn Fn(f64) -> f64,
    grid: &DyadicGrid,
) -> BmoResult {
    let g = gradient_squared(sol);
    let mut rows = Vec::new();
    let mut sup: f64 = 0.0;
    for t in 0..16 {
        let theta0 = t as f64 / 16.0 * std::f64::consts::TAU;
        for k in 0..=4u32 {
            let radius = 0.5f64.powi(k as i32);
            let val = carleson_integral(sol, &g, theta0, radius) / sigma_delta(radius);
            sup = sup.max(val);
            rows.push(vec![theta0, radius, val]);
        }
    }
    let bmo = dyadic_bmo_norm(f, grid);
    let ratio = if bmo > 0.0 { sup / (bmo * bmo) } else { f64::INFINITY };
    let nr = sol.r.len();
    BmoResult {
        carleson_sup: sup,
        bmo_norm: bmo,
        ratio,
        radial_cutoff: sol.r[nr - 2],
        rows,
    }
}

/// Oracle for u = r cos θ (|∇u|² ≡ 1): the normalized Carleson integral
/// reduces to a one-dimensional radial integral of (1−ρ)·ρ·Δφ(ρ), with
/// Δφ(ρ) the angular width of B(x, r) at radius ρ.
pub fn unit_gradient_oracle(radius: f64) -> f64 {
    let rho_lo = (1.0 - radius).max(0.0);
    let n = 40_000;
    let h = (1.0 - rho_lo) / n as f64;
    let width = |rho: f64| -> f64 {
        if rho == 0.0 {
            return if radius >= 1.0 { std::f64::consts::TAU } else { 0.0 };
        }
        let c = (rho * rho + 1.0 - radius * radius) / (2.0 * rho);
        2.0 * c.clamp(-1.0, 1.0).acos()
    };
    let f = |rho: f64| (1.0 - rho) * rho * width(rho);
    let mut total = 0.0;
    for i in 0..n {
        let a = rho_lo + i as f64 * h;
        total += h / 6.0 * (f(a) + 4.0 * f(a + 0.5 * h) + f(a + h));
    }
    total / sigma_delta(radius)
}
