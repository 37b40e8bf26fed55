//! Dyadic grid 𝔻_k on the boundary sphere/circle.
//!
//! Generation k ≥ 1. In the plane generation k is 2^{k+2} equal half-open
//! arcs, with exact arc-length measures. On S^2 the grid is the cubed sphere:
//! six gnomonic quadtrees, 6·4^{k-1} patches at generation k, with patch
//! areas computed by adaptive quadrature.

use std::f64::consts::PI;
use std::fmt::Write as _;

use thiserror::Error;

use crate::geometry::{cube_face_dir, sphere_to_face, CubeExtent, Point};

#[derive(Debug, Error)]
pub enum GridError {
    #[error("k_max = {0} out of range (1..={1} for dimension {2})")]
    KMaxOutOfRange(u32, u32, usize),
    #[error("dimension {0} not supported (must be 2 or 3)")]
    BadDimension(usize),
}

/// Identifier (generation, index-within-generation) of a dyadic cube.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CubeId {
    pub k: u32,
    pub j: usize,
}

/// A boundary cell Q_j^k.
#[derive(Debug, Clone)]
pub struct DyadicCube {
    pub id: CubeId,
    pub extent: CubeExtent,
    /// Center point x_j^k on the boundary.
    pub center: Point,
    /// σ(Q_j^k): exact arc length in 2-D, quadrature area in 3-D.
    pub surface_measure: f64,
}

impl DyadicCube {
    /// Diameter of the cube (chord diameter; exact in 2-D, sampled in 3-D).
    pub fn diam(&self) -> f64 {
        match self.extent {
            CubeExtent::Arc { theta_lo, theta_hi } => 2.0 * (0.5 * (theta_hi - theta_lo)).sin(),
            CubeExtent::Patch { face, u_lo, u_hi, v_lo, v_hi } => {
                // Extremal chords of a gnomonic patch are realized on the
                // boundary; sample corners plus edge midpoints densely.
                let mut pts = Vec::new();
                let n = 8;
                for i in 0..=n {
                    let s = i as f64 / n as f64;
                    let u = u_lo + s * (u_hi - u_lo);
                    let v = v_lo + s * (v_hi - v_lo);
                    pts.push(cube_face_dir(face, u, v_lo));
                    pts.push(cube_face_dir(face, u, v_hi));
                    pts.push(cube_face_dir(face, u_lo, v));
                    pts.push(cube_face_dir(face, u_hi, v));
                }
                let mut d: f64 = 0.0;
                for i in 0..pts.len() {
                    for j in i + 1..pts.len() {
                        d = d.max(pts[i].dist(&pts[j]));
                    }
                }
                d
            }
        }
    }

    /// Largest radius ρ with Δ(center, ρ) ⊆ Q (Lemma-2.1(v) witness).
    pub fn inscribed_ball_radius(&self) -> f64 {
        match self.extent {
            CubeExtent::Arc { theta_lo, theta_hi } => {
                let half = 0.5 * (theta_hi - theta_lo);
                2.0 * (0.5 * half).sin()
            }
            CubeExtent::Patch { .. } => {
                let c = self.center;
                self.extent
                    .boundary_dirs(16)
                    .iter()
                    .map(|q| q.dist(&c))
                    .fold(f64::INFINITY, f64::min)
            }
        }
    }
}

/// The grid 𝔻(S(0,1)) = ⊔_{k≥1} 𝔻_k up to generation `k_max`.
#[derive(Debug, Clone)]
pub struct DyadicGrid {
    pub dim: usize,
    pub k_max: u32,
    /// generations[k-1] holds 𝔻_k in index order.
    generations: Vec<Vec<DyadicCube>>,
}

pub const K_MAX_2D: u32 = 24;
pub const K_MAX_3D: u32 = 10;

/// Total boundary measure: 2π (circle) or 4π (sphere).
pub fn total_boundary_measure(dim: usize) -> f64 {
    match dim {
        2 => 2.0 * PI,
        3 => 4.0 * PI,
        _ => panic!("dimension {dim} not supported"),
    }
}

/// Exact arc length in 2-D; adaptive tensor quadrature (relative error 1e-8)
/// of the gnomonic area element in 3-D.
pub fn surface_measure(extent: &CubeExtent) -> f64 {
    match *extent {
        CubeExtent::Arc { theta_lo, theta_hi } => theta_hi - theta_lo,
        CubeExtent::Patch { u_lo, u_hi, v_lo, v_hi, .. } => {
            patch_area_quadrature(u_lo, u_hi, v_lo, v_hi, 1e-8)
        }
    }
}

/// Gnomonic area element dσ = (1 + u² + v²)^{-3/2} du dv.
fn gnomonic_density(u: f64, v: f64) -> f64 {
    (1.0 + u * u + v * v).powf(-1.5)
}

fn simpson2(f: &dyn Fn(f64, f64) -> f64, u0: f64, u1: f64, v0: f64, v1: f64, n: usize) -> f64 {
    // composite 2-D Simpson on an n×n panel grid (n even)
    let w = |i: usize, n: usize| -> f64 {
        if i == 0 || i == n {
            1.0
        } else if i % 2 == 1 {
            4.0
        } else {
            2.0
        }
    };
    let hu = (u1 - u0) / n as f64;
    let hv = (v1 - v0) / n as f64;
    let mut s = 0.0;
    for i in 0..=n {
        for j in 0..=n {
            s += w(i, n) * w(j, n) * f(u0 + i as f64 * hu, v0 + j as f64 * hv);
        }
    }
    s * hu * hv / 9.0
}

fn patch_area_quadrature(u0: f64, u1: f64, v0: f64, v1: f64, rel_tol: f64) -> f64 {
    let f: &dyn Fn(f64, f64) -> f64 = &gnomonic_density;
    let mut n = 4;
    let mut prev = simpson2(f, u0, u1, v0, v1, n);
    loop {
        n *= 2;
        let cur = simpson2(f, u0, u1, v0, v1, n);
        if (cur - prev).abs() <= rel_tol * cur.abs() || n >= 256 {
            return cur;
        }
        prev = cur;
    }
}

/// Builds the grid up to `k_max` generations.
pub fn build_grid(dim: usize, k_max: u32) -> Result<DyadicGrid, GridError> {
    let limit = match dim {
        2 => K_MAX_2D,
        3 => K_MAX_3D,
        d => return Err(GridError::BadDimension(d)),
    };
    if k_max < 1 || k_max > limit {
        return Err(GridError::KMaxOutOfRange(k_max, limit, dim));
    }
    let mut generations = Vec::with_capacity(k_max as usize);
    for k in 1..=k_max {
        let mut cubes = Vec::new();
        match dim {
            2 => {
                let count = 1usize << (k + 2);
                let step = 2.0 * PI / count as f64;
                for j in 0..count {
                    let theta_lo = j as f64 * step;
                    let theta_hi = (j + 1) as f64 * step;
                    let extent = CubeExtent::Arc { theta_lo, theta_hi };
                    cubes.push(DyadicCube {
                        id: CubeId { k, j },
                        center: Point::from_polar(1.0, 0.5 * (theta_lo + theta_hi)),
                        surface_measure: step,
                        extent,
                    });
                }
            }
            3 => {
                let per_side = 1usize << (k - 1);
                let cell = 2.0 / per_side as f64;
                for face in 0..6u8 {
                    for iv in 0..per_side {
                        for iu in 0..per_side {
                            let u_lo = -1.0 + iu as f64 * cell;
                            let v_lo = -1.0 + iv as f64 * cell;
                            let extent = CubeExtent::Patch {
                                face,
                                u_lo,
                                u_hi: u_lo + cell,
                                v_lo,
                                v_hi: v_lo + cell,
                            };
                            let j = face as usize * per_side * per_side + iv * per_side + iu;
                            cubes.push(DyadicCube {
                                id: CubeId { k, j },
                                center: extent.center_dir(),
                                surface_measure: surface_measure(&extent),
                                extent,
                            });
                        }
                    }
                }
            }
            _ => unreachable!(),
        }
        generations.push(cubes);
    }
    Ok(DyadicGrid { dim, k_max, generations })
}

impl DyadicGrid {
    pub fn generation(&self, k: u32) -> &[DyadicCube] {
        &self.generations[(k - 1) as usize]
    }

    pub fn cube(&self, id: CubeId) -> &DyadicCube {
        &self.generations[(id.k - 1) as usize][id.j]
    }

    pub fn generation_count(&self, k: u32) -> usize {
        self.generation(k).len()
    }

    /// Index of the generation-k cube containing a boundary direction.
    pub fn locate(&self, dir: &Point, k: u32) -> usize {
        let guess = match self.dim {
            2 => {
                let count = 1usize << (k + 2);
                let t = dir.angle() / (2.0 * PI);
                ((t * count as f64).floor() as usize).min(count - 1)
            }
            3 => {
                let per_side = 1usize << (k - 1);
                let (face, u, v) = sphere_to_face(dir);
                let iu = (((u + 1.0) / 2.0 * per_side as f64).floor() as usize).min(per_side - 1);
                let iv = (((v + 1.0) / 2.0 * per_side as f64).floor() as usize).min(per_side - 1);
                face as usize * per_side * per_side + iv * per_side + iu
            }
            _ => unreachable!(),
        };
        // the index arithmetic can land one cube off when dir sits within an
        // ulp of a cube boundary; defer to the stored extents in that case
        let gen = self.generation(k);
        if gen[guess].extent.contains_dir(dir) {
            return guess;
        }
        gen.iter()
            .position(|c| c.extent.contains_dir(dir))
            .unwrap_or(guess)
    }

    /// Parent id (k must be ≥ 2).
    pub fn parent(&self, id: CubeId) -> CubeId {
        assert!(id.k >= 2, "generation-1 cubes have no parent in the grid");
        match self.dim {
            2 => CubeId { k: id.k - 1, j: id.j / 2 },
            3 => {
                let per_side = 1usize << (id.k - 1);
                let face = id.j / (per_side * per_side);
                let rem = id.j % (per_side * per_side);
                let (iv, iu) = (rem / per_side, rem % per_side);
                let ps = per_side / 2;
                CubeId { k: id.k - 1, j: face * ps * ps + (iv / 2) * ps + iu / 2 }
            }
            _ => unreachable!(),
        }
    }

    /// Child ids (k must be < k_max).
    pub fn children(&self, id: CubeId) -> Vec<CubeId> {
        assert!(id.k < self.k_max);
        match self.dim {
            2 => vec![
                CubeId { k: id.k + 1, j: 2 * id.j },
                CubeId { k: id.k + 1, j: 2 * id.j + 1 },
            ],
            3 => {
                let per_side = 1usize << (id.k - 1);
                let face = id.j / (per_side * per_side);
                let rem = id.j % (per_side * per_side);
                let (iv, iu) = (rem / per_side, rem % per_side);
                let ps = per_side * 2;
                let mut out = Vec::with_capacity(4);
                for dv in 0..2 {
                    for du in 0..2 {
                        out.push(CubeId {
                            k: id.k + 1,
                            j: face * ps * ps + (2 * iv + dv) * ps + 2 * iu + du,
                        });
                    }
                }
                out
            }
            _ => unreachable!(),
        }
    }

    /// Ancestor of `id` at generation `k_anc ≤ id.k`.
    pub fn ancestor(&self, mut id: CubeId, k_anc: u32) -> CubeId {
        while id.k > k_anc {
            id = self.parent(id);
        }
        id
    }

    /// True when `a` is contained in `b` (dyadic containment, `a.k ≥ b.k`).
    pub fn is_descendant(&self, a: CubeId, b: CubeId) -> bool {
        a.k >= b.k && self.ancestor(a, b.k) == b
    }

    /// Structured-text serialization: one line per cube.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        writeln!(s, "# dyadic grid dim={} k_max={}", self.dim, self.k_max).unwrap();
        for gen in &self.generations {
            for c in gen {
                match c.extent {
                    CubeExtent::Arc { theta_lo, theta_hi } => {
                        writeln!(
                            s,
                            "{} {} {:.17e} {:.17e} {:.17e}",
                            c.id.k, c.id.j, theta_lo, theta_hi, c.surface_measure
                        )
                        .unwrap();
                    }
                    CubeExtent::Patch { face, u_lo, u_hi, v_lo, v_hi } => {
                        writeln!(
                            s,
                            "{} {} {} {:.17e} {:.17e} {:.17e} {:.17e} {:.17e}",
                            c.id.k, c.id.j, face, u_lo, u_hi, v_lo, v_hi, c.surface_measure
                        )
                        .unwrap();
                    }
                }
            }
        }
        s
    }
}

// ---------------------------------------------------------------------------
// Property verification (Lemma-2.1 style grid axioms).
// ---------------------------------------------------------------------------

/// One verified grid property.
#[derive(Debug, Clone)]
pub struct PropertyEntry {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

/// Verification report with the fitted grid constants.
#[derive(Debug, Clone)]
pub struct PropertyReport {
    pub entries: Vec<PropertyEntry>,
    /// Fitted diameter constant: max over cubes of diam(Q)·2^k.
    pub c_star: f64,
    /// Fitted inscribed-ball constant: min over cubes of ρ(Q)·2^k.
    pub a0: f64,
    /// Fitted thin-boundary exponent.
    pub gamma: f64,
    /// Fitted thin-boundary constant.
    pub c_star_collar: f64,
}

impl PropertyReport {
    pub fn all_pass(&self) -> bool {
        self.entries.iter().all(|e| e.pass)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for e in &self.entries {
            writeln!(s, "[{}] {}: {}", if e.pass { "PASS" } else { "FAIL" }, e.name, e.detail)
                .unwrap();
        }
        writeln!(
            s,
            "fitted constants: C_* = {:.6}, a0 = {:.6}, gamma = {:.6}, C_collar = {:.6}",
            self.c_star, self.a0, self.gamma, self.c_star_collar
        )
        .unwrap();
        s
    }
}

/// 2-D exact length of the ϱ-collar of an arc: the set of arc points within
/// chord distance d of the complement consists of two end pieces of geodesic
/// length 2·asin(d/2) each, capped at the full arc length.
pub fn arc_collar_length(arc_len: f64, d: f64) -> f64 {
    (2.0 * 2.0 * (0.5 * d.min(2.0)).asin()).min(arc_len)
}

/// Checks Lemma-2.1 properties (i)-(vi) and fits the grid constants.
pub fn verify_grid_properties(grid: &DyadicGrid) -> PropertyReport {
    let mut entries = Vec::new();
    let total = total_boundary_measure(grid.dim);
    let tol = if grid.dim == 2 { 1e-10 } else { 1e-6 };

    // (i) cover: measures per generation sum to the full boundary measure.
    {
        let mut pass = true;
        let mut detail = String::new();
        for k in 1..=grid.k_max {
            let s: f64 = grid.generation(k).iter().map(|c| c.surface_measure).sum();
            if (s - total).abs() > tol {
                pass = false;
                write!(detail, "generation {k}: total measure {s} vs {total}; ").unwrap();
            }
        }
        if pass {
            detail = format!("every generation sums to {total:.12} within {tol:e}");
        }
        entries.push(PropertyEntry { name: "(i) cover".into(), pass, detail });
    }

    // (ii)/(iii) nesting: each child extent is inside its parent, and locate()
    // agrees with the arithmetic hierarchy on sampled directions.
    {
        let mut pass = true;
        let mut detail = String::new();
        'outer: for k in 2..=grid.k_max {
            for c in grid.generation(k) {
                let par = grid.parent(c.id);
                let pc = grid.cube(par);
                for d in c.extent.sample_dirs(3) {
                    if !pc.extent.contains_dir(&d) {
                        pass = false;
                        detail = format!("cube {:?} not inside parent {:?}", c.id, par);
                        break 'outer;
                    }
                    if grid.locate(&d, k) != c.id.j {
                        pass = false;
                        detail = format!("locate mismatch at {:?}", c.id);
                        break 'outer;
                    }
                }
            }
        }
        if pass {
            detail = "children nest in parents; locate agrees with hierarchy".into();
        }
        entries.push(PropertyEntry { name: "(ii)-(iii) nesting".into(), pass, detail });
    }

    // (iv) diameter bound diam(Q) ≤ C_* 2^{-k}: fit C_*.
    let mut c_star: f64 = 0.0;
    {
        for k in 1..=grid.k_max {
            for c in grid.generation(k) {
                c_star = c_star.max(c.diam() * (1u64 << k) as f64);
            }
        }
        entries.push(PropertyEntry {
            name: "(iv) diameter".into(),
            pass: c_star.is_finite(),
            detail: format!("fitted C_* = {c_star:.6}"),
        });
    }

    // (v) contained surface ball of radius a0·2^{-k}: fit a0.
    let mut a0 = f64::INFINITY;
    {
        for k in 1..=grid.k_max {
            for c in grid.generation(k) {
                a0 = a0.min(c.inscribed_ball_radius() * (1u64 << k) as f64);
            }
        }
        entries.push(PropertyEntry {
            name: "(v) inner ball".into(),
            pass: a0 > 0.0,
            detail: format!("fitted a0 = {a0:.6}"),
        });
    }

    // (vi) thin boundary: collar(ϱ) ≤ C ϱ^γ σ(Q) over ϱ ∈ {a0/2, a0/4, a0/8}.
    let mut gamma = f64::NAN;
    let mut c_collar: f64 = 0.0;
    {
        let rhos = [a0 / 2.0, a0 / 4.0, a0 / 8.0];
        // log-log fit of the worst collar fraction against ϱ
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        let mut pass = true;
        let k_cap = if grid.dim == 2 { grid.k_max } else { grid.k_max.min(4) };
        for &rho in &rhos {
            let mut worst_frac: f64 = 0.0;
            for k in 1..=k_cap {
                let d = rho * 0.5f64.powi(k as i32);
                for c in grid.generation(k) {
                    let collar = match c.extent {
                        CubeExtent::Arc { .. } => arc_collar_length(c.surface_measure, d),
                        CubeExtent::Patch { .. } => patch_collar_measure(c, d),
                    };
                    worst_frac = worst_frac.max(collar / c.surface_measure);
                }
            }
            if worst_frac <= 0.0 {
                pass = false;
            }
            xs.push(rho.ln());
            ys.push(worst_frac.ln());
        }
        if pass {
            let (slope, intercept) = linear_fit(&xs, &ys);
            gamma = slope;
            c_collar = intercept.exp();
            pass = gamma > 0.0 && c_collar.is_finite();
        }
        entries.push(PropertyEntry {
            name: "(vi) thin boundary".into(),
            pass,
            detail: format!("fitted gamma = {gamma:.6}, C_collar = {c_collar:.6}"),
        });
    }

    PropertyReport { entries, c_star, a0, gamma, c_star_collar: c_collar }
}

/// Sampled collar measure of a 3-D patch: fraction of an interior lattice
/// within chord distance `d` of the patch boundary, times the patch area.
fn patch_collar_measure(c: &DyadicCube, d: f64) -> f64 {
    let m = 24;
    let boundary = c.extent.boundary_dirs(48);
    let samples = c.extent.sample_dirs(m);
    let hits = samples
        .iter()
        .filter(|s| boundary.iter().any(|b| b.dist(s) <= d))
        .count();
    c.surface_measure * hits as f64 / samples.len() as f64
}

/// Least-squares slope/intercept.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let sx: f64 = xs.iter().sum();
    let sy: f64 = ys.iter().sum();
    let sxx: f64 = xs.iter().map(|x| x * x).sum();
    let sxy: f64 = xs.iter().zip(ys.iter()).map(|(x, y)| x * y).sum();
    let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    let intercept = (sy - slope * sx) / n;
    (slope, intercept)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn generation_counts() {
        let g = build_grid(2, 3).unwrap();
        assert_eq!(g.generation_count(1), 8);
        assert_eq!(g.generation_count(3), 32);
        let g3 = build_grid(3, 2).unwrap();
        assert_eq!(g3.generation_count(1), 6);
        assert_eq!(g3.generation_count(2), 24);
    }

    #[test]
    fn generation_one_arcs() {
        let g = build_grid(2, 1).unwrap();
        for c in g.generation(1) {
            assert_abs_diff_eq!(c.surface_measure, PI / 4.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn k_max_out_of_range() {
        assert!(build_grid(2, 25).is_err());
        assert!(build_grid(3, 11).is_err());
        assert!(build_grid(2, 0).is_err());
        assert!(build_grid(4, 3).is_err());
    }

    #[test]
    fn partition_measure_2d() {
        let g = build_grid(2, 8).unwrap();
        for k in 1..=8 {
            let s: f64 = g.generation(k).iter().map(|c| c.surface_measure).sum();
            assert_abs_diff_eq!(s, 2.0 * PI, epsilon = 1e-10);
        }
    }

    /// Closed-form solid angle of a gnomonic rectangle, as the quadrature
    /// oracle: Ω = Σ ± arctan(uv/√(1+u²+v²)) over the corners.
    fn patch_area_exact(u0: f64, u1: f64, v0: f64, v1: f64) -> f64 {
        let term = |u: f64, v: f64| (u * v / (1.0 + u * u + v * v).sqrt()).atan();
        term(u1, v1) - term(u0, v1) - term(u1, v0) + term(u0, v0)
    }

    #[test]
    fn patch_measure_matches_closed_form() {
        let g = build_grid(3, 3).unwrap();
        for k in 1..=3 {
            for c in g.generation(k) {
                if let CubeExtent::Patch { u_lo, u_hi, v_lo, v_hi, .. } = c.extent {
                    let exact = patch_area_exact(u_lo, u_hi, v_lo, v_hi);
                    assert_abs_diff_eq!(
                        c.surface_measure,
                        exact,
                        epsilon = 1e-7 * exact.max(1e-3)
                    );
                }
            }
        }
    }

    #[test]
    fn partition_measure_3d() {
        let g = build_grid(3, 4).unwrap();
        for k in 1..=4 {
            let s: f64 = g.generation(k).iter().map(|c| c.surface_measure).sum();
            assert_abs_diff_eq!(s, 4.0 * PI, epsilon = 1e-6);
        }
    }

    #[test]
    fn exhaustive_nesting() {
        let g = build_grid(2, 8).unwrap();
        for k in 2..=8u32 {
            for c in g.generation(k) {
                let p = g.parent(c.id);
                // contained in exactly one coarser cube per generation
                for m in 1..k {
                    let anc = g.ancestor(c.id, m);
                    let pc = g.cube(anc);
                    for d in c.extent.sample_dirs(2) {
                        assert!(pc.extent.contains_dir(&d));
                    }
                    // every *other* cube at generation m misses it
                    let d = c.extent.center_dir();
                    assert_eq!(g.locate(&d, m), anc.j);
                }
                assert!(g.children(p).contains(&c.id));
            }
        }
    }

    #[test]
    fn properties_pass_2d() {
        let g = build_grid(2, 6).unwrap();
        let rep = verify_grid_properties(&g);
        assert!(rep.all_pass(), "{}", rep.to_text());
        assert!(rep.a0 >= 0.2);
        assert!(rep.c_star <= 4.0);
        assert_abs_diff_eq!(rep.gamma, 1.0, epsilon = 0.05);
    }

    #[test]
    fn properties_pass_3d() {
        let g = build_grid(3, 3).unwrap();
        let rep = verify_grid_properties(&g);
        assert!(rep.all_pass(), "{}", rep.to_text());
        assert!(rep.c_star <= 8.0);
    }

    #[test]
    fn fitted_constants_stable_across_generations() {
        let g = build_grid(2, 8).unwrap();
        // per-generation fits of a0 and C_* for k = 3..8 must agree within 5%
        let mut a0s = Vec::new();
        let mut cstars = Vec::new();
        for k in 3..=8u32 {
            let mut a0 = f64::INFINITY;
            let mut cs: f64 = 0.0;
            for c in g.generation(k) {
                a0 = a0.min(c.inscribed_ball_radius() * (1u64 << k) as f64);
                cs = cs.max(c.diam() * (1u64 << k) as f64);
            }
            a0s.push(a0);
            cstars.push(cs);
        }
        for w in [&a0s, &cstars] {
            let lo = w.iter().cloned().fold(f64::INFINITY, f64::min);
            let hi = w.iter().cloned().fold(0.0, f64::max);
            assert!((hi - lo) / lo < 0.05, "unstable fit: {w:?}");
        }
    }

    #[test]
    fn arc_collar_exact_small_rho() {
        // collar ≈ 2·ϱ2^{-k} for two endpoints, so γ = 1 fits
        let d = 0.01;
        let got = arc_collar_length(PI / 4.0, d);
        assert_abs_diff_eq!(got, 2.0 * d, epsilon = 1e-5);
    }

    #[test]
    fn serialization_lines() {
        let g = build_grid(2, 2).unwrap();
        let txt = g.to_text();
        // 8 + 16 cubes + header
        assert_eq!(txt.lines().count(), 25);
    }
}
