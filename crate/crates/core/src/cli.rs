//! Command orchestration: resolves a run configuration (TOML file plus flag
//! overrides), builds the pipeline artifacts, and writes reports, tables and
//! plots under the output directory. All outputs are deterministic for a
//! fixed config and seed.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::checks::report::{ainfty_plot, holder_plot, report_text, report_tsv};
use crate::checks::{
    ainfty::{build_ainfty_pairs, weak_ainfty_fit},
    bmo::bmo_carleson_functional,
    bourgain::bourgain_check,
    claim1::{claim1_twin_balls, Claim1Params},
    constants_table,
    criterion::{criterion_scan, criterion_scan_poisson},
    holder::holder_exponent_fit,
    ClaimReport, ClaimVerdict, OperatorSpec,
};
use crate::constants::Constants;
use crate::drift::{asa_test, DriftFamily, DriftFieldSpec, Verdict};
use crate::dyadic::{build_grid, verify_grid_properties, CubeId, DyadicGrid};
use crate::geometry::Point;
use crate::measure::fd::{fd_solve, FdConfig};
use crate::measure::walk::WalkerConfig;
use crate::measure::{estimate_measure, BoundaryPartition};
use crate::sawtooth::build_ample_sawtooth;
use crate::whitney::build_refinement;

/// Environment variable naming the default output root.
pub const OUT_ENV: &str = "SAWTOOTH_LAB_OUT";

#[derive(Debug, Error)]
pub enum CliError {
    /// Invalid configuration or unreadable input (exit 2).
    #[error("input error: {0}")]
    Input(String),
    /// Stopping-time construction violation (exit 3).
    #[error("construction violation: {0}")]
    Construction(String),
    /// A claim check came back violated (exit 4).
    #[error("claim violated: {0}")]
    ClaimViolated(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Construction(_) => 3,
            CliError::ClaimViolated(_) => 4,
        }
    }
}

fn io_err(e: std::io::Error, what: &str) -> CliError {
    CliError::Input(format!("{what}: {e}"))
}

/// Resolved run configuration; serialized into every output directory.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub dim: usize,
    pub k_max: u32,
    /// Drift spec: `zero`, `uniform-small:EPS`, `cone:AMP:k,j[;k,j...]`,
    /// or `file:PATH`.
    pub drift: String,
    pub eps: f64,
    pub eta: f64,
    /// Declared pointwise bound M.
    pub m_bound: f64,
    pub walkers: u64,
    pub seed: u64,
    /// 0 = rayon default.
    pub threads: usize,
    pub out: PathBuf,
    /// Pole (r, θ) for measure estimates and pole-based checks.
    pub pole: [f64; 2],
    /// Estimation generation for boundary partitions.
    pub k_est: u32,
    /// Checks run by verify-claims; empty = all.
    pub checks: Vec<String>,
    /// Twin-ball construction scales (a₀, a).
    pub claim_a0: f64,
    pub claim_a: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        let out = std::env::var_os(OUT_ENV)
            .map(PathBuf::from)
            .unwrap_or_else(|| PathBuf::from("out"));
        RunConfig {
            dim: 2,
            k_max: 6,
            drift: "zero".into(),
            eps: 0.1,
            eta: 0.1,
            m_bound: 1.0,
            walkers: 20_000,
            seed: 0,
            threads: 0,
            out,
            pole: [0.5, 0.0],
            k_est: 3,
            checks: Vec::new(),
            claim_a0: 0.01,
            claim_a: 0.01,
        }
    }
}

impl RunConfig {
    pub fn from_toml_file(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(|e| io_err(e, "config file"))?;
        toml::from_str(&text).map_err(|e| CliError::Input(format!("config parse: {e}")))
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.dim != 2 && self.dim != 3 {
            return Err(CliError::Input(format!("dim must be 2 or 3, got {}", self.dim)));
        }
        let limit = if self.dim == 2 { 24 } else { 10 };
        if self.k_max < 1 || self.k_max > limit {
            return Err(CliError::Input(format!(
                "k_max must be in 1..={limit} for dim {}, got {}",
                self.dim, self.k_max
            )));
        }
        if !(self.eps > 0.0 && self.eps <= self.m_bound) {
            return Err(CliError::Input(format!(
                "need 0 < eps <= M, got eps {} M {}",
                self.eps, self.m_bound
            )));
        }
        if !(self.eta > 0.0 && self.eta < 1.0) {
            return Err(CliError::Input(format!("eta must be in (0, 1), got {}", self.eta)));
        }
        if self.walkers == 0 {
            return Err(CliError::Input("walkers must be positive".into()));
        }
        if !(self.pole[0] >= 0.0 && self.pole[0] < 1.0) {
            return Err(CliError::Input(format!("pole radius {} outside [0, 1)", self.pole[0])));
        }
        if self.k_est < 1 || self.k_est > self.k_max {
            return Err(CliError::Input(format!(
                "k_est must be in 1..=k_max, got {}",
                self.k_est
            )));
        }
        Ok(())
    }

    pub fn constants(&self) -> Constants {
        Constants::derive(self.m_bound, self.eps, self.eta, self.dim)
    }

    pub fn pole_point(&self) -> Point {
        let mut p = Point::origin(self.dim);
        p.coords[0] = self.pole[0] * self.pole[1].cos();
        p.coords[1] = self.pole[0] * self.pole[1].sin();
        p
    }

    pub fn walker(&self) -> WalkerConfig {
        WalkerConfig { seed: self.seed, ..WalkerConfig::default() }
    }

    /// Builds the drift field from the textual spec (the cone family needs
    /// the grid for its target boxes).
    pub fn drift_field(&self, grid: &DyadicGrid) -> Result<DriftFieldSpec, CliError> {
        let parts: Vec<&str> = self.drift.splitn(3, ':').collect();
        let built = match parts[0] {
            "zero" => Ok(DriftFieldSpec::zero(self.dim)),
            "uniform-small" => {
                let eps_hat: f64 = parts
                    .get(1)
                    .ok_or_else(|| CliError::Input("uniform-small needs :EPS".into()))?
                    .parse()
                    .map_err(|e| CliError::Input(format!("drift eps: {e}")))?;
                DriftFieldSpec::new(DriftFamily::UniformSmall { eps_hat }, self.m_bound, self.dim)
            }
            "cone" => {
                let amp: f64 = parts
                    .get(1)
                    .ok_or_else(|| CliError::Input("cone needs :AMP:k,j;...".into()))?
                    .parse()
                    .map_err(|e| CliError::Input(format!("cone amplitude: {e}")))?;
                let mut targets = Vec::new();
                for tok in parts
                    .get(2)
                    .ok_or_else(|| CliError::Input("cone needs target cubes k,j;...".into()))?
                    .split(';')
                {
                    let (k, j) = tok
                        .split_once(',')
                        .ok_or_else(|| CliError::Input(format!("bad cube token {tok:?}")))?;
                    let id = CubeId {
                        k: k.trim().parse().map_err(|e| CliError::Input(format!("cube k: {e}")))?,
                        j: j.trim().parse().map_err(|e| CliError::Input(format!("cube j: {e}")))?,
                    };
                    if id.k < 1 || id.k > grid.k_max || id.j >= grid.generation(id.k).len() {
                        return Err(CliError::Input(format!("cube ({},{}) outside grid", id.k, id.j)));
                    }
                    targets.push(id);
                }
                DriftFieldSpec::cone_singular(grid, &targets, amp, self.m_bound)
            }
            "file" => {
                let path = parts
                    .get(1)
                    .ok_or_else(|| CliError::Input("file drift needs :PATH".into()))?;
                DriftFieldSpec::from_file(Path::new(path), self.m_bound)
            }
            other => return Err(CliError::Input(format!("unknown drift family {other:?}"))),
        };
        built.map_err(|e| CliError::Input(format!("drift rejected: {e}")))
    }

    fn write_resolved(&self, dir: &Path) -> Result<(), CliError> {
        let text = toml::to_string_pretty(self)
            .map_err(|e| CliError::Input(format!("config serialize: {e}")))?;
        fs::write(dir.join("config.toml"), text).map_err(|e| io_err(e, "config.toml"))
    }
}

fn prepare_out(cfg: &RunConfig, sub: &str) -> Result<PathBuf, CliError> {
    let dir = cfg.out.join(sub);
    fs::create_dir_all(&dir).map_err(|e| io_err(e, "output directory"))?;
    cfg.write_resolved(&dir)?;
    Ok(dir)
}

fn init_threads(cfg: &RunConfig) {
    if cfg.threads > 0 {
        // a second init in the same process is a no-op; ignore it
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.threads)
            .build_global();
    }
}

/// `decompose`: grid + refinement artifacts and the property report.
pub fn cmd_decompose(cfg: &RunConfig) -> Result<String, CliError> {
    cfg.validate()?;
    let dir = prepare_out(cfg, "decompose")?;
    let grid = build_grid(cfg.dim, cfg.k_max)
        .map_err(|e| CliError::Input(e.to_string()))?;
    fs::write(dir.join("grid.tsv"), grid.to_text()).map_err(|e| io_err(e, "grid.tsv"))?;
    let refinement = build_refinement(&grid);
    let mut boxes = String::from("k\tj\toctant\tside\n");
    for k in 1..=grid.k_max {
        for c in grid.generation(k) {
            for rb in refinement.of(c.id) {
                boxes.push_str(&format!(
                    "{}\t{}\t{}\t{:.12e}\n",
                    k, c.id.j, rb.octant_index, rb.side_length
                ));
            }
        }
    }
    fs::write(dir.join("refined_boxes.tsv"), boxes).map_err(|e| io_err(e, "refined_boxes.tsv"))?;
    let report = verify_grid_properties(&grid);
    let text = report.to_text();
    fs::write(dir.join("property_report.txt"), &text)
        .map_err(|e| io_err(e, "property_report.txt"))?;
    if !report.all_pass() {
        return Err(CliError::Construction(format!("grid property failure:\n{text}")));
    }
    Ok(text)
}

/// `classify-drift`: ASA verdicts for every refined box of the grid.
pub fn cmd_classify_drift(cfg: &RunConfig) -> Result<String, CliError> {
    cfg.validate()?;
    let dir = prepare_out(cfg, "classify")?;
    let grid = build_grid(cfg.dim, cfg.k_max).map_err(|e| CliError::Input(e.to_string()))?;
    let field = cfg.drift_field(&grid)?;
    let refinement = build_refinement(&grid);
    let mut table = String::from("k\tj\toctant\tintegral\tthreshold\tverdict\n");
    let (mut bad, mut inconclusive, mut total) = (0usize, 0usize, 0usize);
    for k in 1..=grid.k_max {
        for c in grid.generation(k) {
            for rb in refinement.of(c.id) {
                total += 1;
                match asa_test(rb, &field, cfg.eps) {
                    Ok(v) => {
                        if v.verdict == Verdict::Bad {
                            bad += 1;
                        }
                        table.push_str(&format!(
                            "{}\t{}\t{}\t{:.12e}\t{:.12e}\t{}\n",
                            k,
                            c.id.j,
                            rb.octant_index,
                            v.integral_value,
                            v.threshold,
                            if v.verdict == Verdict::Bad { "bad" } else { "good" }
                        ));
                    }
                    Err(_) => {
                        inconclusive += 1;
                        table.push_str(&format!(
                            "{}\t{}\t{}\tnan\tnan\tinconclusive\n",
                            k, c.id.j, rb.octant_index
                        ));
                    }
                }
            }
        }
    }
    fs::write(dir.join("asa_verdicts.tsv"), table).map_err(|e| io_err(e, "asa_verdicts.tsv"))?;
    let summary = format!(
        "refined boxes {total}, bad {bad}, inconclusive {inconclusive}\n"
    );
    fs::write(dir.join("summary.txt"), &summary).map_err(|e| io_err(e, "summary.txt"))?;
    Ok(summary)
}

/// `build-sawtooth`: the full stopping-time construction with a summary.
pub fn cmd_build_sawtooth(cfg: &RunConfig) -> Result<String, CliError> {
    cfg.validate()?;
    let dir = prepare_out(cfg, "sawtooth")?;
    let grid = build_grid(cfg.dim, cfg.k_max).map_err(|e| CliError::Input(e.to_string()))?;
    let field = cfg.drift_field(&grid)?;
    let st = build_ample_sawtooth(&grid, &field, &cfg.constants())
        .map_err(|e| CliError::Construction(e.to_string()))?;
    let summary = st.to_text();
    fs::write(dir.join("sawtooth.txt"), &summary).map_err(|e| io_err(e, "sawtooth.txt"))?;
    if !st.inconclusive.is_empty() {
        return Err(CliError::Construction(format!(
            "{} inconclusive boxes during classification; first at cube ({}, {})",
            st.inconclusive.len(),
            st.inconclusive[0].k,
            st.inconclusive[0].j
        )));
    }
    Ok(summary)
}

/// `estimate-measure`: Monte Carlo exit masses from the configured pole.
pub fn cmd_estimate_measure(cfg: &RunConfig) -> Result<String, CliError> {
    cfg.validate()?;
    init_threads(cfg);
    let dir = prepare_out(cfg, "measure")?;
    let grid = build_grid(cfg.dim, cfg.k_max).map_err(|e| CliError::Input(e.to_string()))?;
    let field = cfg.drift_field(&grid)?;
    let st = build_ample_sawtooth(&grid, &field, &cfg.constants())
        .map_err(|e| CliError::Construction(e.to_string()))?;
    let dom = st.omega_eta();
    let partition =
        BoundaryPartition::for_sawtooth(&grid, cfg.k_est, st.removed_t_boxes(st.levels()));
    let pole = cfg.pole_point();
    if !dom.contains(&pole) {
        return Err(CliError::Input(format!("pole {:?} outside the sawtooth", cfg.pole)));
    }
    let est = estimate_measure(&dom, &field, &pole, &grid, &partition, cfg.walkers, &cfg.walker());
    let text = est.to_text();
    fs::write(dir.join("measure.tsv"), &text).map_err(|e| io_err(e, "measure.tsv"))?;
    Ok(text)
}

/// `constants`: the derived constants table.
pub fn cmd_constants(cfg: &RunConfig) -> Result<String, CliError> {
    cfg.validate()?;
    let dir = prepare_out(cfg, "constants")?;
    let grid = build_grid(cfg.dim, cfg.k_max.min(3)).map_err(|e| CliError::Input(e.to_string()))?;
    let field = cfg.drift_field(&grid)?;
    let spec = OperatorSpec::new(field, cfg.constants());
    let text = constants_table(&spec);
    fs::write(dir.join("constants.txt"), &text).map_err(|e| io_err(e, "constants.txt"))?;
    Ok(text)
}

const ALL_CHECKS: [&str; 6] = ["bourgain", "claim1", "holder", "criterion", "bmo", "ainfty"];

/// `verify-claims`: runs the selected checks on the configured operator and
/// writes reports, TSV tables and SVG plots. Fails with `ClaimViolated` if
/// any verdict is violated.
pub fn cmd_verify_claims(cfg: &RunConfig) -> Result<String, CliError> {
    cfg.validate()?;
    init_threads(cfg);
    let dir = prepare_out(cfg, "claims")?;
    let selected: Vec<&str> = if cfg.checks.is_empty() {
        ALL_CHECKS.to_vec()
    } else {
        let mut v = Vec::new();
        for c in &cfg.checks {
            if !ALL_CHECKS.contains(&c.as_str()) {
                return Err(CliError::Input(format!("unknown check {c:?}")));
            }
            v.push(c.as_str());
        }
        v
    };

    let grid = build_grid(cfg.dim, cfg.k_max).map_err(|e| CliError::Input(e.to_string()))?;
    let field = cfg.drift_field(&grid)?;
    let spec = OperatorSpec::new(field.clone(), cfg.constants());
    let st = build_ample_sawtooth(&grid, &field, &cfg.constants())
        .map_err(|e| CliError::Construction(e.to_string()))?;
    let dom = st.omega_eta();
    let pole = cfg.pole_point();
    let walker = cfg.walker();

    let mut summary = String::new();
    summary.push_str(&format!("operator constants:\n{}\n", cfg.constants().to_text()));
    summary.push_str(&format!(
        "sawtooth: {} levels, ample fraction {:.6}\n\n",
        st.levels(),
        st.ampleness_fraction()
    ));
    let mut reports: Vec<ClaimReport> = Vec::new();

    let emit = |dir: &Path, rep: &ClaimReport| -> Result<(), CliError> {
        let base = dir.join(&rep.claim);
        fs::write(base.with_extension("txt"), report_text(rep))
            .map_err(|e| io_err(e, "report"))?;
        fs::write(base.with_extension("tsv"), report_tsv(rep))
            .map_err(|e| io_err(e, "table"))?;
        Ok(())
    };

    for &check in &selected {
        let rep = match check {
            "bourgain" => bourgain_check(&pole, &dom, &spec, cfg.walkers, &walker)
                .map_err(|e| CliError::Input(e.to_string()))?,
            "claim1" => {
                let params = Claim1Params {
                    a0: cfg.claim_a0,
                    a: cfg.claim_a,
                    n_walkers: cfg.walkers,
                    walker,
                };
                claim1_twin_balls(&pole, &st, &spec, &grid, &params)
                    .map_err(|e| CliError::Input(e.to_string()))?
            }
            "holder" => {
                // data vanishing near θ = 0, supported on the far half
                let f = |t: f64| {
                    if (std::f64::consts::FRAC_PI_2..3.0 * std::f64::consts::FRAC_PI_2)
                        .contains(&t)
                    {
                        1.0
                    } else {
                        0.0
                    }
                };
                let q = Point::new2(1.0, 0.0);
                let fd = FdConfig { n_r: 160, grading: 2.0, ..FdConfig::default() };
                let rep = holder_exponent_fit(&q, 0.15, &spec, &f, &fd, None)
                    .map_err(|e| CliError::Input(e.to_string()))?;
                fs::write(dir.join("holder_decay.svg"), holder_plot(&rep))
                    .map_err(|e| io_err(e, "holder plot"))?;
                rep
            }
            "criterion" => {
                let thetas = [0.05, 0.1, 0.2];
                let depth_ks = [2, 3, 4];
                let rep = criterion_scan(
                    &dom, &spec, &grid, cfg.k_est, &thetas, &depth_ks, cfg.walkers, &walker,
                );
                if matches!(spec.drift.family, DriftFamily::Zero) {
                    let oracle = criterion_scan_poisson(&grid, cfg.k_est, &thetas, &depth_ks);
                    emit(&dir, &oracle)?;
                }
                rep
            }
            "bmo" => {
                let f = |t: f64| 0.5 * (1.0 + t.cos());
                let fd = FdConfig { n_r: 128, ..FdConfig::default() };
                let sol = fd_solve(&spec.drift, &f, &fd)
                    .map_err(|e| CliError::Input(e.to_string()))?;
                let res = bmo_carleson_functional(&sol, &f, &grid);
                ClaimReport {
                    claim: "bmo_carleson".into(),
                    params: vec![("n_r".into(), fd.n_r as f64)],
                    constants: vec![
                        ("carleson_sup".into(), res.carleson_sup),
                        ("bmo_norm".into(), res.bmo_norm),
                        ("ratio".into(), res.ratio),
                    ],
                    verdict: if res.carleson_sup.is_finite() {
                        ClaimVerdict::Supported
                    } else {
                        ClaimVerdict::Inconclusive
                    },
                    details: format!("radial cutoff {:.4e}", res.radial_cutoff),
                    data_header: vec!["theta".into(), "radius".into(), "normalized".into()],
                    data_rows: res.rows,
                }
            }
            "ainfty" => {
                let (pairs, excluded) = build_ainfty_pairs(
                    &dom,
                    &spec.drift,
                    &grid,
                    cfg.k_est,
                    16,
                    cfg.walkers,
                    &walker,
                    cfg.seed.wrapping_add(1),
                );
                let rep = weak_ainfty_fit(&pairs, excluded);
                fs::write(dir.join("weak_a_infinity.svg"), ainfty_plot(&rep))
                    .map_err(|e| io_err(e, "envelope plot"))?;
                rep
            }
            _ => unreachable!(),
        };
        emit(&dir, &rep)?;
        summary.push_str(&format!("{:<22} {:<13} {}\n", rep.claim, rep.verdict, rep.details));
        reports.push(rep);
    }

    fs::write(dir.join("summary.txt"), &summary).map_err(|e| io_err(e, "summary.txt"))?;
    let violated: Vec<&str> = reports
        .iter()
        .filter(|r| r.verdict == ClaimVerdict::Violated)
        .map(|r| r.claim.as_str())
        .collect();
    if !violated.is_empty() {
        return Err(CliError::ClaimViolated(violated.join(", ")));
    }
    Ok(summary)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg_in(tmp: &Path) -> RunConfig {
        RunConfig {
            k_max: 4,
            walkers: 2_000,
            out: tmp.to_path_buf(),
            ..RunConfig::default()
        }
    }

    fn tmpdir(tag: &str) -> PathBuf {
        let d = std::env::temp_dir().join(format!("sawtooth-cli-{tag}-{}", std::process::id()));
        fs::create_dir_all(&d).unwrap();
        d
    }

    #[test]
    fn invalid_kmax_is_input_error() {
        let tmp = tmpdir("kmax");
        let cfg = RunConfig { k_max: 30, ..cfg_in(&tmp) };
        let err = cmd_decompose(&cfg).unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn decompose_writes_expected_arc_count() {
        let tmp = tmpdir("decompose");
        let cfg = cfg_in(&tmp);
        cmd_decompose(&cfg).unwrap();
        let grid = fs::read_to_string(tmp.join("decompose/grid.tsv")).unwrap();
        // 8 + 16 + 32 + 64 arcs for k_max = 4 (plus the header line)
        let data_lines = grid.lines().filter(|l| !l.starts_with('#')).count();
        assert_eq!(data_lines, 120);
        assert!(tmp.join("decompose/config.toml").exists());
    }

    #[test]
    fn hostile_drift_rejected_as_input() {
        let tmp = tmpdir("hostile");
        let cfg = RunConfig { drift: "uniform-small:5.0".into(), ..cfg_in(&tmp) };
        let err = cmd_build_sawtooth(&cfg).unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn zero_drift_sawtooth_summary() {
        let tmp = tmpdir("zero-st");
        let summary = cmd_build_sawtooth(&cfg_in(&tmp)).unwrap();
        assert!(summary.contains("ample_fraction=1.000000000000"), "{summary}");
    }

    #[test]
    fn drift_spec_parsing() {
        let grid = build_grid(2, 4).unwrap();
        let cfg = RunConfig::default();
        assert!(cfg.drift_field(&grid).is_ok());
        let cone = RunConfig { drift: "cone:0.5:2,3".into(), ..RunConfig::default() };
        assert!(cone.drift_field(&grid).is_ok());
        let bad = RunConfig { drift: "vortex".into(), ..RunConfig::default() };
        assert!(matches!(bad.drift_field(&grid), Err(CliError::Input(_))));
        let oob = RunConfig { drift: "cone:0.5:2,99".into(), ..RunConfig::default() };
        assert!(matches!(oob.drift_field(&grid), Err(CliError::Input(_))));
    }

    #[test]
    fn toml_roundtrip_preserves_config() {
        let cfg = RunConfig { drift: "uniform-small:0.05".into(), seed: 7, ..RunConfig::default() };
        let text = toml::to_string_pretty(&cfg).unwrap();
        let back: RunConfig = toml::from_str(&text).unwrap();
        assert_eq!(back.drift, cfg.drift);
        assert_eq!(back.seed, 7);
    }

    #[test]
    fn verify_claims_criterion_deterministic() {
        let tmp_a = tmpdir("det-a");
        let tmp_b = tmpdir("det-b");
        let mk = |out: &Path| RunConfig {
            checks: vec!["criterion".into()],
            walkers: 2_000,
            ..cfg_in(out)
        };
        cmd_verify_claims(&mk(&tmp_a)).unwrap();
        cmd_verify_claims(&mk(&tmp_b)).unwrap();
        let a = fs::read(tmp_a.join("claims/criterion_scan.tsv")).unwrap();
        let b = fs::read(tmp_b.join("claims/criterion_scan.tsv")).unwrap();
        assert!(!a.is_empty());
        assert_eq!(a, b);
    }
}
