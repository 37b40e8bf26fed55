//! Harmonic measure on the unit disk via the Poisson kernel, used as the
//! analytic cross-check for the zero-drift walker.

use crate::dyadic::DyadicGrid;
use crate::geometry::{CubeExtent, Point};

/// Poisson kernel of the unit disk against arc-length/2π:
/// P(x, θ) = (1 − |x|²) / |x − e^{iθ}|².
fn poisson_kernel(x: &Point, theta: f64) -> f64 {
    let q = Point::from_polar(1.0, theta);
    let d2 = x.dist(&q).powi(2);
    (1.0 - x.norm().powi(2)) / d2
}

fn simpson(x: &Point, a: f64, b: f64) -> f64 {
    let m = 0.5 * (a + b);
    (b - a) / 6.0 * (poisson_kernel(x, a) + 4.0 * poisson_kernel(x, m) + poisson_kernel(x, b))
}

fn adaptive(x: &Point, a: f64, b: f64, whole: f64, tol: f64, depth: u32) -> f64 {
    let m = 0.5 * (a + b);
    let left = simpson(x, a, m);
    let right = simpson(x, m, b);
    let err = left + right - whole;
    if err.abs() < 15.0 * tol || depth >= 48 {
        return left + right + err / 15.0;
    }
    adaptive(x, a, m, left, 0.5 * tol, depth + 1) + adaptive(x, m, b, right, 0.5 * tol, depth + 1)
}

/// Harmonic measure ω(x, arc(θ_lo, θ_hi)) in the unit disk, by adaptive
/// Simpson quadrature to absolute tolerance 1e-10.
pub fn poisson_arc_measure(x: &Point, theta_lo: f64, theta_hi: f64) -> f64 {
    assert!(x.dim == 2 && x.norm() < 1.0);
    let w = simpson(x, theta_lo, theta_hi);
    adaptive(x, theta_lo, theta_hi, w, 1e-10, 0) / std::f64::consts::TAU
}

/// Harmonic measure of every generation-`k` arc of a 2-D grid.
pub fn poisson_cell_masses(x: &Point, grid: &DyadicGrid, k: u32) -> Vec<f64> {
    grid.generation(k)
        .iter()
        .map(|c| match c.extent {
            CubeExtent::Arc { theta_lo, theta_hi } => poisson_arc_measure(x, theta_lo, theta_hi),
            CubeExtent::Patch { .. } => unreachable!("2-D grid expected"),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dyadic::build_grid;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{PI, TAU};

    /// Independent oracle: harmonic measure is conformally invariant, so the
    /// Möbius map φ_z(w) = (w − z)/(1 − z̄ w) sends ω(z, ·) to normalized
    /// arc length at the origin.
    fn mobius_arc_measure(z: &Point, theta_lo: f64, theta_hi: f64) -> f64 {
        let phi = |theta: f64| -> f64 {
            let (zx, zy) = (z.coords[0], z.coords[1]);
            let (wx, wy) = (theta.cos(), theta.sin());
            let (nx, ny) = (wx - zx, wy - zy);
            let (dx, dy) = (1.0 - (zx * wx + zy * wy), zy * wx - zx * wy);
            // complex division (n/d)
            let den = dx * dx + dy * dy;
            let px = (nx * dx + ny * dy) / den;
            let py = (ny * dx - nx * dy) / den;
            py.atan2(px)
        };
        // wrap into (0, TAU]: the map is orientation-preserving, and a full
        // circle maps to a full circle
        let mut d = phi(theta_hi) - phi(theta_lo);
        while d <= 0.0 {
            d += TAU;
        }
        while d > TAU {
            d -= TAU;
        }
        d / TAU
    }

    #[test]
    fn origin_is_uniform() {
        let x = Point::new2(0.0, 0.0);
        assert_abs_diff_eq!(poisson_arc_measure(&x, 0.0, PI), 0.5, epsilon = 1e-10);
        assert_abs_diff_eq!(poisson_arc_measure(&x, 0.3, 0.3 + PI / 4.0), 0.125, epsilon = 1e-10);
    }

    #[test]
    fn matches_mobius_oracle() {
        let pts = [
            Point::new2(0.5, 0.0),
            Point::new2(-0.3, 0.6),
            Point::new2(0.1, -0.85),
        ];
        let arcs = [(0.0, 1.0), (2.5, 4.0), (5.0, 6.2), (1.0, 1.0 + 0.999 * TAU)];
        for p in &pts {
            for &(a, b) in &arcs {
                assert_abs_diff_eq!(
                    poisson_arc_measure(p, a, b),
                    mobius_arc_measure(p, a, b),
                    epsilon = 1e-9
                );
            }
        }
    }

    #[test]
    fn cell_masses_sum_to_one() {
        let g = build_grid(2, 3).unwrap();
        let x = Point::new2(0.5, 0.0);
        let masses = poisson_cell_masses(&x, &g, 3);
        assert_eq!(masses.len(), 32);
        let sum: f64 = masses.iter().sum();
        assert_abs_diff_eq!(sum, 1.0, epsilon = 1e-9);
        // mass concentrates near θ = 0
        let max_idx = masses
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .unwrap()
            .0;
        assert!(max_idx == 0 || max_idx == 31);
    }
}
