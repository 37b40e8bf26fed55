//! Euler–Maruyama walker for the diffusion dX = −B(X)dt + √2 dW, absorbed
//! at the domain boundary.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::drift::DriftFieldSpec;
use crate::geometry::{BoundaryFeature, DomainHandle, Point};

/// Walker parameters. The time step adapts to the boundary distance:
/// dt = ρ²·δ(X)² / max(1, M).
#[derive(Debug, Clone, Copy)]
pub struct WalkerConfig {
    /// ρ, the step-size factor.
    pub step_factor: f64,
    /// Absorb once δ(X) drops below this depth; the exit point is the
    /// nearest boundary point.
    pub absorb_depth: f64,
    pub max_steps: u64,
    pub seed: u64,
}

impl Default for WalkerConfig {
    fn default() -> Self {
        WalkerConfig { step_factor: 0.1, absorb_depth: 1e-4, max_steps: 10_000_000, seed: 0 }
    }
}

/// Outcome of a single walker.
#[derive(Debug, Clone)]
pub enum Exit {
    Absorbed { point: Point, feature: BoundaryFeature },
    /// The step budget ran out; never redistributed over the boundary.
    Escaped,
}

fn standard_normal(rng: &mut ChaCha8Rng) -> (f64, f64) {
    // Box–Muller on open-interval uniforms
    let u1: f64 = loop {
        let u: f64 = rng.gen();
        if u > 0.0 {
            break u;
        }
    };
    let u2: f64 = rng.gen();
    let r = (-2.0 * u1.ln()).sqrt();
    let (s, c) = (std::f64::consts::TAU * u2).sin_cos();
    (r * c, r * s)
}

/// Runs one walker from `x0`. Each walker draws from its own RNG stream of
/// the seeded generator, so results are independent of scheduling order.
pub fn simulate_exit(
    dom: &DomainHandle<'_>,
    field: &DriftFieldSpec,
    x0: &Point,
    cfg: &WalkerConfig,
    stream: u64,
) -> Exit {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(stream);
    let dim = dom.dim();
    let m = field.declared_m.max(1.0);
    let mut x = *x0;
    for _ in 0..cfg.max_steps {
        let (delta, proj, feature) = dom.boundary_projection_unchecked(&x);
        if delta < cfg.absorb_depth {
            return Exit::Absorbed { point: proj, feature };
        }
        let dt = cfg.step_factor.powi(2) * delta * delta / m;
        let b = field.eval(&x);
        let sigma = (2.0 * dt).sqrt();
        let (g0, g1) = standard_normal(&mut rng);
        let mut y = x;
        y.coords[0] += -b.coords[0] * dt + sigma * g0;
        y.coords[1] += -b.coords[1] * dt + sigma * g1;
        if dim == 3 {
            let (g2, _) = standard_normal(&mut rng);
            y.coords[2] += -b.coords[2] * dt + sigma * g2;
        }
        if !dom.contains(&y) {
            // the increment crossed the boundary; absorb at the nearest
            // boundary point of the pre-step position
            return Exit::Absorbed { point: proj, feature };
        }
        x = y;
    }
    Exit::Escaped
}
