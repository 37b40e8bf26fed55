//! Numerical verification of the analytic claims: Bourgain lower bounds,
//! twin-ball estimates, boundary Hölder decay, the (1−θ, c₀) criterion, the
//! BMO Carleson functional and weak-A∞ envelope fits.

pub mod ainfty;
pub mod bmo;
pub mod bourgain;
pub mod claim1;
pub mod criterion;
pub mod holder;
pub mod report;

use thiserror::Error;

use crate::constants::Constants;
use crate::drift::DriftFieldSpec;
use crate::geometry::GeomError;

#[derive(Debug, Error)]
pub enum CheckError {
    #[error("pointwise smallness precondition failed near {0:?}: |B|δ = {1:.4} > ε = {2}")]
    SmallnessViolated(crate::geometry::Point, f64, f64),
    #[error("pole outside the domain: {0:?}")]
    PoleOutside(crate::geometry::Point),
    #[error("twin-ball construction infeasible: {0}")]
    Construction(String),
    #[error(transparent)]
    Geometry(#[from] GeomError),
    #[error(transparent)]
    Fd(#[from] crate::measure::fd::FdError),
}

/// Verdict of a claim check. `Violated` requires failure by more than
/// 3 combined standard errors; anything softer is `Inconclusive`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClaimVerdict {
    Supported,
    Inconclusive,
    Violated,
}

impl std::fmt::Display for ClaimVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ClaimVerdict::Supported => "supported",
            ClaimVerdict::Inconclusive => "inconclusive",
            ClaimVerdict::Violated => "violated",
        })
    }
}

/// Outcome of one claim check with its raw data table.
#[derive(Debug, Clone)]
pub struct ClaimReport {
    pub claim: String,
    /// Named scalar parameters the check ran with.
    pub params: Vec<(String, f64)>,
    /// Named empirical constants (β, c₀, α, C₀, θ, …) with their values.
    pub constants: Vec<(String, f64)>,
    pub verdict: ClaimVerdict,
    pub details: String,
    pub data_header: Vec<String>,
    pub data_rows: Vec<Vec<f64>>,
}

impl ClaimReport {
    pub fn constant(&self, name: &str) -> Option<f64> {
        self.constants.iter().find(|(n, _)| n == name).map(|&(_, v)| v)
    }
}

/// The operator L = Δ − B·∇ together with its construction constants.
#[derive(Debug, Clone)]
pub struct OperatorSpec {
    /// Ellipticity of the principal part (identity matrix ⇒ 1).
    pub lambda: f64,
    pub drift: DriftFieldSpec,
    pub constants: Constants,
}

impl OperatorSpec {
    pub fn new(drift: DriftFieldSpec, constants: Constants) -> Self {
        let spec = OperatorSpec { lambda: 1.0, drift, constants };
        spec.assert_invariants();
        spec
    }

    /// τ_k = (cε/M)·2^{−k} and l₀·τ_k = 2^{−k}.
    pub fn assert_invariants(&self) {
        let c = &self.constants;
        for k in 1..=12u32 {
            let tau = c.tau(k);
            let expect = (c.c * c.eps / c.m) * 0.5f64.powi(k as i32);
            assert!((tau - expect).abs() <= 1e-15 * expect.max(1e-300));
            let prod = c.l0 as f64 * tau;
            assert!(
                (prod - 0.5f64.powi(k as i32)).abs() <= 1e-12,
                "l0·tau_{k} = {prod} ≠ 2^-{k}"
            );
        }
    }
}

/// The constants table: l₀, c, N₀ and the τ_k ladder.
pub fn constants_table(spec: &OperatorSpec) -> String {
    spec.assert_invariants();
    spec.constants.to_text()
}

/// Ordinary least squares for y ≈ a + b·x; returns (a, b, stderr_b).
pub(crate) fn ols(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    let n = xs.len() as f64;
    assert!(n >= 2.0);
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let b = sxy / sxx;
    let a = my - b * mx;
    let dof = (n - 2.0).max(1.0);
    let sse: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| (y - a - b * x).powi(2))
        .sum();
    let se_b = (sse / dof / sxx).sqrt();
    (a, b, se_b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn operator_invariants_hold() {
        let c = Constants::derive(1.0, 0.1, 0.1, 2);
        let spec = OperatorSpec::new(DriftFieldSpec::zero(2), c);
        let table = constants_table(&spec);
        assert!(table.contains("l0 = 10"));
        assert!(table.contains("N0 = 200"));
        assert!(table.contains("tau_3 = 0.0125"));
    }

    #[test]
    fn ols_recovers_line() {
        let xs = [0.0, 1.0, 2.0, 3.0];
        let ys = [1.0, 3.0, 5.0, 7.0];
        let (a, b, se) = ols(&xs, &ys);
        assert!((a - 1.0).abs() < 1e-12 && (b - 2.0).abs() < 1e-12);
        assert!(se < 1e-12);
    }
}
