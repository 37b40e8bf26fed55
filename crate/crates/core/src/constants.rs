//! Derived constants of the construction: the subdivision count l₀, the
//! comparability constant c, the slab scales τ_k and the generation bound N₀.

/// The derived constants for given (M, ε, η) and ambient dimension n+1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Constants {
    pub m: f64,
    pub eps: f64,
    pub eta: f64,
    /// Ambient dimension n+1 (2 or 3); the boundary dimension is n.
    pub dim: usize,
    /// l₀ = ⌈M/ε⌉.
    pub l0: u64,
    /// c = M/(ε·l₀) ∈ (0, 1].
    pub c: f64,
    /// N₀ = ⌈2ⁿ·M/(ε·η)⌉, the bound on the number of stopping-time
    /// generations.
    pub n0: u64,
}

impl Constants {
    pub fn derive(m: f64, eps: f64, eta: f64, dim: usize) -> Constants {
        assert!(m > 0.0 && eps > 0.0 && eta > 0.0);
        assert!(dim == 2 || dim == 3);
        let l0 = (m / eps).ceil() as u64;
        let c = m / (eps * l0 as f64);
        let n = (dim - 1) as u32;
        let n0 = (2f64.powi(n as i32) * m / (eps * eta)).ceil() as u64;
        Constants { m, eps, eta, dim, l0, c, n0 }
    }

    /// τ_k = (c·ε/M)·2^{-k}.
    pub fn tau(&self, k: u32) -> f64 {
        (self.c * self.eps / self.m) * 0.5f64.powi(k as i32)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        s.push_str(&format!(
            "M = {}\neps = {}\neta = {}\ndim = {}\nl0 = {}\nc = {}\nN0 = {}\n",
            self.m, self.eps, self.eta, self.dim, self.l0, self.c, self.n0
        ));
        for k in 1..=8 {
            s.push_str(&format!("tau_{k} = {}\n", self.tau(k)));
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spot_values() {
        let c = Constants::derive(1.0, 0.1, 0.1, 2);
        assert_eq!(c.l0, 10);
        assert_eq!(c.c, 1.0);
        assert_eq!(c.n0, 200);
        assert_eq!(c.tau(3), 0.0125);
    }

    #[test]
    fn c_in_unit_interval_and_tau_halves() {
        for &(m, eps) in &[(1.0, 0.1), (2.5, 0.3), (1.0, 0.7), (3.0, 1.0)] {
            let c = Constants::derive(m, eps, 0.1, 3);
            assert!(c.c > 0.0 && c.c <= 1.0);
            assert!((c.l0 as f64) >= m / eps);
            for k in 1..6 {
                assert_eq!(c.tau(k + 1), 0.5 * c.tau(k));
            }
        }
    }
}
