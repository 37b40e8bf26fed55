//! Elliptic-measure estimation: boundary partitions, the Monte Carlo
//! estimator, the analytic Poisson cross-check, a finite-difference oracle
//! and the Markov-chain identity check.

pub mod fd;
pub mod markov;
pub mod poisson;
pub mod walk;

use rayon::prelude::*;
use std::collections::HashMap;

use crate::drift::DriftFieldSpec;
use crate::dyadic::DyadicGrid;
use crate::geometry::{BoundaryFeature, DomainHandle, FaceKind, Point, ProductBox};

pub use walk::{simulate_exit, Exit, WalkerConfig};

/// A finite partition of ∂Ω into cells: the spherical part is split into the
/// generation-`k_est` grid cubes; each exposed face of a removed box is one
/// cell of its own.
#[derive(Debug, Clone)]
pub struct BoundaryPartition {
    pub k_est: u32,
    pub sphere_cells: usize,
    /// (removed-box index, face) in enumeration order.
    pub face_cells: Vec<(usize, FaceKind)>,
    face_index: HashMap<(usize, FaceKind), usize>,
}

impl BoundaryPartition {
    /// Partition for a domain whose boundary is entirely the sphere.
    pub fn sphere_only(grid: &DyadicGrid, k_est: u32) -> Self {
        BoundaryPartition {
            k_est,
            sphere_cells: grid.generation(k_est).len(),
            face_cells: Vec::new(),
            face_index: HashMap::new(),
        }
    }

    /// Partition for a sawtooth domain: sphere cells plus one cell per face
    /// of each removed box.
    pub fn for_sawtooth(grid: &DyadicGrid, k_est: u32, removed: &[ProductBox]) -> Self {
        let mut face_cells = Vec::new();
        let mut face_index = HashMap::new();
        let lateral_count = if grid.dim == 2 { 2 } else { 4 };
        for (idx, _) in removed.iter().enumerate() {
            let mut kinds = vec![FaceKind::Top, FaceKind::Bottom];
            for l in 0..lateral_count {
                kinds.push(FaceKind::Lateral(l));
            }
            for kind in kinds {
                face_index.insert((idx, kind), grid.generation(k_est).len() + face_cells.len());
                face_cells.push((idx, kind));
            }
        }
        BoundaryPartition {
            k_est,
            sphere_cells: grid.generation(k_est).len(),
            face_cells,
            face_index,
        }
    }

    pub fn cell_count(&self) -> usize {
        self.sphere_cells + self.face_cells.len()
    }

    /// Cell index of an absorbed exit.
    pub fn classify(&self, grid: &DyadicGrid, point: &Point, feature: &BoundaryFeature) -> usize {
        match feature {
            BoundaryFeature::Sphere => grid.locate(&point.dir(), self.k_est),
            BoundaryFeature::RemovedBoxFace { idx, face } => *self
                .face_index
                .get(&(*idx, *face))
                .unwrap_or_else(|| panic!("unregistered face cell ({idx}, {face:?})")),
            BoundaryFeature::SectorPiece(_) => {
                panic!("sector boundaries are not partitioned into cells")
            }
        }
    }
}

/// Monte Carlo estimate of elliptic measure against a boundary partition.
#[derive(Debug, Clone)]
pub struct MeasureEstimate {
    pub counts: Vec<u64>,
    pub escaped: u64,
    pub total: u64,
    /// counts / total; escaped walkers are never redistributed, so the
    /// masses sum to 1 − escaped/total.
    pub masses: Vec<f64>,
    /// Binomial standard error per cell.
    pub stderr: Vec<f64>,
}

impl MeasureEstimate {
    pub fn escaped_fraction(&self) -> f64 {
        self.escaped as f64 / self.total as f64
    }

    /// Mass of a union of cells with its combined standard error.
    pub fn mass_of(&self, cells: &[usize]) -> (f64, f64) {
        let n: u64 = cells.iter().map(|&c| self.counts[c]).sum();
        let p = n as f64 / self.total as f64;
        (p, (p * (1.0 - p) / self.total as f64).sqrt())
    }

    pub fn to_text(&self) -> String {
        let mut s = format!(
            "walkers {} escaped {} ({:.4}%)\n",
            self.total,
            self.escaped,
            100.0 * self.escaped_fraction()
        );
        for (i, (&c, (&m, &e))) in self
            .counts
            .iter()
            .zip(self.masses.iter().zip(self.stderr.iter()))
            .enumerate()
        {
            s.push_str(&format!("cell {i}: count {c} mass {m:.6} stderr {e:.6}\n"));
        }
        s
    }
}

/// Runs `n_walkers` independent walkers from `x0` and tallies exits by cell.
/// Walker i uses RNG stream i of the seeded generator and the tally merges
/// integer counts, so the result is a pure function of (inputs, seed),
/// independent of thread count and scheduling.
pub fn estimate_measure(
    dom: &DomainHandle<'_>,
    field: &DriftFieldSpec,
    x0: &Point,
    grid: &DyadicGrid,
    partition: &BoundaryPartition,
    n_walkers: u64,
    cfg: &WalkerConfig,
) -> MeasureEstimate {
    assert!(dom.contains(x0), "start point must lie in the domain");
    let cells: Vec<Option<usize>> = (0..n_walkers)
        .into_par_iter()
        .map(|i| match simulate_exit(dom, field, x0, cfg, i) {
            Exit::Absorbed { point, feature } => {
                Some(partition.classify(grid, &point, &feature))
            }
            Exit::Escaped => None,
        })
        .collect();
    let mut counts = vec![0u64; partition.cell_count()];
    let mut escaped = 0u64;
    for c in cells {
        match c {
            Some(i) => counts[i] += 1,
            None => escaped += 1,
        }
    }
    let total = n_walkers;
    let masses: Vec<f64> = counts.iter().map(|&c| c as f64 / total as f64).collect();
    let stderr = masses
        .iter()
        .map(|&p| (p * (1.0 - p) / total as f64).sqrt())
        .collect();
    if escaped as f64 > 0.01 * total as f64 {
        eprintln!(
            "warning: {escaped} of {total} walkers escaped (> 1%); estimates are biased low"
        );
    }
    MeasureEstimate { counts, escaped, total, masses, stderr }
}
