//! Boundary Hölder decay: with data vanishing on 2Δ₂ around q, the solution
//! decays like u(y_k) ≤ C·(|y_k − q|/r)^α along the inward normal; the
//! exponent α is fitted from the solver values.

use crate::checks::{ols, CheckError, ClaimReport, ClaimVerdict, OperatorSpec};
use crate::measure::fd::{fd_solve, FdConfig};
use crate::geometry::Point;

/// Fits the Hölder exponent from u at y_k = q·(1 − r·10^{−k}), k = 0..4.
/// Points whose boundary distance undercuts twice the finest mesh step are
/// truncated from the fit and reported. An optional β (from the twin-ball
/// check) adds the (1−β)^k cross-check rows.
pub fn holder_exponent_fit(
    q: &Point,
    r: f64,
    spec: &OperatorSpec,
    f: &dyn Fn(f64) -> f64,
    fd_cfg: &FdConfig,
    beta: Option<f64>,
) -> Result<ClaimReport, CheckError> {
    assert!((q.norm() - 1.0).abs() < 1e-12, "q must be a boundary point");
    assert!(r > 0.0 && r < 1.0);
    let theta_q = q.angle();
    // precondition: f vanishes on Δ(q, 2r) and stays within [0, 1]
    let half_angle = 2.0 * (r.min(1.0)).asin();
    for i in 0..512 {
        let th = i as f64 / 512.0 * std::f64::consts::TAU;
        let v = f(th);
        assert!((0.0..=1.0).contains(&v), "boundary data must lie in [0, 1]");
        let d = crate::geometry::angle_diff(th, theta_q).abs();
        if d <= half_angle {
            assert!(v == 0.0, "boundary data must vanish on 2*Delta_2 (theta = {th})");
        }
    }

    let sol = fd_solve(&spec.drift, f, fd_cfg)?;
    let h_fine = sol.r[sol.r.len() - 1] - sol.r[sol.r.len() - 2];

    let mut rows = Vec::new();
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    let mut truncated = 0;
    for k in 0..=4u32 {
        let dist = r * 10f64.powi(-(k as i32));
        if dist < 2.0 * h_fine {
            truncated += 1;
            continue;
        }
        let y = q.scale(1.0 - dist);
        let u = sol.eval(&y);
        if u <= 0.0 {
            truncated += 1;
            continue;
        }
        rows.push(vec![k as f64, dist, u]);
        xs.push((dist / r).ln());
        ys.push(u.ln());
    }
    if xs.len() < 3 {
        return Err(CheckError::Construction(format!(
            "only {} usable decay points (mesh step {h_fine:.2e})",
            xs.len()
        )));
    }
    let (ln_c, alpha, se_alpha) = ols(&xs, &ys);
    let c_fit = ln_c.exp();

    // envelope check with the fitted constants, allowing the fit residual
    let mut residual_max: f64 = 0.0;
    for (x, y) in xs.iter().zip(&ys) {
        residual_max = residual_max.max((y - (ln_c + alpha * x)).abs());
    }
    let envelope_ok = rows.iter().zip(&xs).all(|(row, &x)| {
        row[2] <= c_fit * (x * alpha).exp() * (2.0 * residual_max).exp() + 1e-300
    });

    let mut constants = vec![
        ("alpha".into(), alpha),
        ("alpha_stderr".into(), se_alpha),
        ("c_fit".into(), c_fit),
        ("residual_max".into(), residual_max),
        ("truncated".into(), truncated as f64),
    ];
    let mut details = format!(
        "fit over {} points, {truncated} truncated below mesh resolution {h_fine:.2e}",
        xs.len()
    );
    if let Some(beta) = beta {
        // (1−β)^k cross-check: the claim's iteration constant implies decay
        // exponent −log(1−β)/log 10 per decade
        let alpha_beta = -(1.0 - beta).ln() / 10f64.ln();
        constants.push(("alpha_from_beta".into(), alpha_beta));
        details.push_str(&format!("; (1-beta)^k cross-check exponent {alpha_beta:.4}"));
    }

    // positive with 95% confidence: alpha − 2·se > 0
    let verdict = if alpha - 2.0 * se_alpha > 0.0 && envelope_ok {
        ClaimVerdict::Supported
    } else {
        ClaimVerdict::Inconclusive
    };
    Ok(ClaimReport {
        claim: "holder_decay".into(),
        params: vec![("r".into(), r), ("theta_q".into(), theta_q)],
        constants,
        verdict,
        details,
        data_header: vec!["k".into(), "dist".into(), "u".into()],
        data_rows: rows,
    })
}
