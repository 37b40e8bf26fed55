//! Stopping-time sawtooth construction: generations of maximal ASA-bad
//! cubes, the sawtooth domains Ω_p = B ∖ ⋃ T_Q and Λ_p = B ∖ ⋃ S_Q, and the
//! ample sawtooth Ω_η whose boundary retains at least a (1−η) fraction of
//! the sphere.

use std::collections::HashMap;

use thiserror::Error;

use crate::constants::Constants;
use crate::drift::{asa_test, DriftError, DriftFieldSpec, Verdict};
use crate::dyadic::{CubeId, DyadicGrid};
use crate::geometry::{DomainHandle, Point, ProductBox};
use crate::whitney::{build_refinement, carleson_box, Refinement};

#[derive(Debug, Error)]
pub enum SawtoothError {
    #[error("stopping time exceeded the generation bound N0 = {n0}")]
    GenerationBound { n0: u64 },
    #[error(transparent)]
    Drift(#[from] DriftError),
}

/// One generation of the stopping time: a maximal antichain of bad cubes.
#[derive(Debug, Clone)]
pub struct StoppingFamily {
    /// 1-based level p.
    pub level: usize,
    /// Selected cubes in (generation, index) order.
    pub cubes: Vec<CubeId>,
    /// σ(⋃ Q), the shadow measure of the family on the sphere.
    pub shadow: f64,
}

/// The full stopping-time output for a drift field on a grid.
#[derive(Debug, Clone)]
pub struct SawtoothDomain {
    pub dim: usize,
    pub eta: f64,
    pub constants: Constants,
    pub families: Vec<StoppingFamily>,
    /// Per-level removed Carleson boxes T_Q (defining Ω_p).
    removed_t: Vec<Vec<ProductBox>>,
    /// Per-level removed boundary regions S_Q (defining Λ_p).
    removed_s: Vec<Vec<ProductBox>>,
    /// Cubes whose ASA quadrature could not be resolved; classified bad.
    pub inconclusive: Vec<CubeId>,
    /// σ(S), the total boundary measure of the sphere.
    pub sigma_total: f64,
}

/// A cube is bad when at least one refined child of its Whitney box fails
/// the ASA test. Quadrature-inconclusive children make the cube bad and are
/// recorded.
fn cube_is_bad(
    grid: &DyadicGrid,
    refinement: &Refinement,
    b: &DriftFieldSpec,
    eps: f64,
    q: CubeId,
    inconclusive: &mut Vec<CubeId>,
) -> bool {
    let _ = grid;
    let mut bad = false;
    for p in refinement.of(q) {
        match asa_test(p, b, eps) {
            Ok(v) => {
                if v.verdict == Verdict::Bad {
                    bad = true;
                }
            }
            Err(DriftError::Inconclusive(..)) => {
                if !inconclusive.contains(&q) {
                    inconclusive.push(q);
                }
                bad = true;
            }
            Err(_) => unreachable!("asa_test only fails with Inconclusive"),
        }
    }
    bad
}

/// Memoizing badness table shared across family extractions.
pub struct BadnessCache<'a> {
    grid: &'a DyadicGrid,
    refinement: &'a Refinement,
    field: &'a DriftFieldSpec,
    eps: f64,
    verdicts: HashMap<CubeId, bool>,
    pub inconclusive: Vec<CubeId>,
}

impl<'a> BadnessCache<'a> {
    pub fn new(
        grid: &'a DyadicGrid,
        refinement: &'a Refinement,
        field: &'a DriftFieldSpec,
        eps: f64,
    ) -> Self {
        BadnessCache { grid, refinement, field, eps, verdicts: HashMap::new(), inconclusive: Vec::new() }
    }

    pub fn is_bad(&mut self, q: CubeId) -> bool {
        if let Some(&v) = self.verdicts.get(&q) {
            return v;
        }
        let v = cube_is_bad(self.grid, self.refinement, self.field, self.eps, q, &mut self.inconclusive);
        self.verdicts.insert(q, v);
        v
    }
}

/// First generation: maximal bad cubes over the whole grid, found by a
/// deterministic coarse-to-fine scan in index order.
pub fn extract_family_first(cache: &mut BadnessCache<'_>) -> Vec<CubeId> {
    extract_maximal(cache, None)
}

/// Generation p+1: maximal bad cubes strictly contained in the cubes of
/// generation p.
pub fn extract_family_next(cache: &mut BadnessCache<'_>, prev: &[CubeId]) -> Vec<CubeId> {
    extract_maximal(cache, Some(prev))
}

fn extract_maximal(cache: &mut BadnessCache<'_>, within: Option<&[CubeId]>) -> Vec<CubeId> {
    let grid = cache.grid;
    let mut selected: Vec<CubeId> = Vec::new();
    for k in 1..=grid.k_max {
        for c in grid.generation(k) {
            let id = c.id;
            if let Some(prev) = within {
                // strict containment in a previous-generation cube
                let ok = prev
                    .iter()
                    .any(|&p| id.k > p.k && grid.is_descendant(id, p));
                if !ok {
                    continue;
                }
            }
            if selected.iter().any(|&s| grid.is_descendant(id, s)) {
                continue;
            }
            if cache.is_bad(id) {
                selected.push(id);
            }
        }
    }
    selected
}

fn family_shadow(grid: &DyadicGrid, cubes: &[CubeId]) -> f64 {
    cubes.iter().map(|&q| grid.cube(q).surface_measure).sum()
}

/// Runs the stopping time until the current family's shadow measure drops to
/// at most η·σ(S) (an empty family has shadow 0), so the final sawtooth is
/// η-ample. Errors if more than N₀ generations would be needed.
pub fn build_ample_sawtooth(
    grid: &DyadicGrid,
    field: &DriftFieldSpec,
    constants: &Constants,
) -> Result<SawtoothDomain, SawtoothError> {
    let refinement = build_refinement(grid);
    let mut cache = BadnessCache::new(grid, &refinement, field, constants.eps);
    let sigma_total = grid.generation(1).iter().map(|c| c.surface_measure).sum::<f64>();
    let eta = constants.eta;

    let mut families: Vec<StoppingFamily> = Vec::new();
    let mut removed_t: Vec<Vec<ProductBox>> = Vec::new();
    let mut removed_s: Vec<Vec<ProductBox>> = Vec::new();
    loop {
        let level = families.len() + 1;
        if level as u64 > constants.n0 {
            return Err(SawtoothError::GenerationBound { n0: constants.n0 });
        }
        let cubes = match families.last() {
            None => extract_family_first(&mut cache),
            Some(prev) => extract_family_next(&mut cache, &prev.cubes),
        };
        let shadow = family_shadow(grid, &cubes);
        let boxes: Vec<_> = cubes.iter().map(|&q| carleson_box(grid, q)).collect();
        removed_t.push(boxes.iter().map(|t| t.region.clone()).collect());
        removed_s.push(boxes.iter().map(|t| t.s_region.clone()).collect());
        families.push(StoppingFamily { level, cubes, shadow });
        if shadow <= eta * sigma_total {
            break;
        }
    }

    Ok(SawtoothDomain {
        dim: grid.dim,
        eta,
        constants: *constants,
        families,
        removed_t,
        removed_s,
        inconclusive: cache.inconclusive,
        sigma_total,
    })
}

impl SawtoothDomain {
    /// Number of stopping-time generations actually built.
    pub fn levels(&self) -> usize {
        self.families.len()
    }

    /// Removed T-boxes backing Ω_p (p is 1-based); index order matches the
    /// `RemovedBoxFace` indices reported by that level's domain handle.
    pub fn removed_t_boxes(&self, p: usize) -> &[ProductBox] {
        &self.removed_t[p - 1]
    }

    /// Ω_p = B ∖ ⋃_{Q ∈ family p} T_Q (p is 1-based).
    pub fn omega(&self, p: usize) -> DomainHandle<'_> {
        DomainHandle::Sawtooth { dim: self.dim, removed: &self.removed_t[p - 1] }
    }

    /// Λ_p = B ∖ ⋃_{Q ∈ family p} S_Q.
    pub fn lambda(&self, p: usize) -> DomainHandle<'_> {
        DomainHandle::Sawtooth { dim: self.dim, removed: &self.removed_s[p - 1] }
    }

    /// The final, η-ample sawtooth Ω_η.
    pub fn omega_eta(&self) -> DomainHandle<'_> {
        self.omega(self.levels())
    }

    pub fn membership(&self, x: &Point, p: usize) -> bool {
        self.omega(p).contains(x)
    }

    /// Shadow fraction of the final family: ampleness means this is ≤ η.
    pub fn final_shadow_fraction(&self) -> f64 {
        self.families.last().map_or(0.0, |f| f.shadow) / self.sigma_total
    }

    /// Exact fraction of the sphere retained by ∂Ω_η.
    pub fn ampleness_fraction(&self) -> f64 {
        1.0 - self.final_shadow_fraction()
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        s.push_str(&format!(
            "sawtooth dim={} eta={} levels={} ample_fraction={:.12}\n",
            self.dim,
            self.eta,
            self.levels(),
            self.ampleness_fraction()
        ));
        for f in &self.families {
            s.push_str(&format!(
                "family {}: {} cubes, shadow {:.12} ({:.6} of sigma)\n",
                f.level,
                f.cubes.len(),
                f.shadow,
                f.shadow / self.sigma_total
            ));
            for q in &f.cubes {
                s.push_str(&format!("  k={} j={}\n", q.k, q.j));
            }
        }
        if !self.inconclusive.is_empty() {
            s.push_str(&format!("inconclusive (classified bad): {:?}\n", self.inconclusive));
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dyadic::build_grid;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn cone_field(grid: &DyadicGrid, targets: &[CubeId], amp: f64) -> DriftFieldSpec {
        DriftFieldSpec::cone_singular(grid, targets, amp, 1.0).unwrap()
    }

    /// Brute-force oracle: classify every cube, then select maximal
    /// antichains by pairwise ancestor checks rather than by ordered scan.
    fn oracle_families(
        grid: &DyadicGrid,
        field: &DriftFieldSpec,
        eps: f64,
    ) -> Vec<Vec<CubeId>> {
        let refinement = build_refinement(grid);
        let mut bad = Vec::new();
        for k in 1..=grid.k_max {
            for c in grid.generation(k) {
                let mut scratch = Vec::new();
                if cube_is_bad(grid, &refinement, field, eps, c.id, &mut scratch) {
                    bad.push(c.id);
                }
            }
        }
        let mut families = Vec::new();
        let mut prev: Option<Vec<CubeId>> = None;
        loop {
            let pool: Vec<CubeId> = bad
                .iter()
                .copied()
                .filter(|&q| match &prev {
                    None => true,
                    Some(ps) => ps.iter().any(|&p| q.k > p.k && grid.is_descendant(q, p)),
                })
                .collect();
            let maximal: Vec<CubeId> = pool
                .iter()
                .copied()
                .filter(|&q| {
                    !pool
                        .iter()
                        .any(|&o| o != q && q.k > o.k && grid.is_descendant(q, o))
                })
                .collect();
            if maximal.is_empty() {
                families.push(maximal);
                break;
            }
            families.push(maximal.clone());
            prev = Some(maximal);
        }
        families
    }

    #[test]
    fn zero_drift_trivial_sawtooth() {
        let grid = build_grid(2, 4).unwrap();
        let c = Constants::derive(1.0, 0.1, 0.1, 2);
        let st = build_ample_sawtooth(&grid, &DriftFieldSpec::zero(2), &c).unwrap();
        assert_eq!(st.levels(), 1);
        assert!(st.families[0].cubes.is_empty());
        assert_eq!(st.ampleness_fraction(), 1.0);
        // Ω_η is the whole ball
        assert!(st.membership(&Point::new2(0.0, 0.9), 1));
    }

    #[test]
    fn single_cone_families() {
        let grid = build_grid(2, 4).unwrap();
        let c = Constants::derive(1.0, 0.01, 0.2, 2);
        let field = cone_field(&grid, &[CubeId { k: 2, j: 0 }], 0.9);
        let st = build_ample_sawtooth(&grid, &field, &c).unwrap();
        assert!(st.levels() >= 1);
        let f1 = &st.families[0];
        assert!(!f1.cubes.is_empty());
        // selected cubes cluster near the cone: sup_local reaches half a δ
        // sideways, so neighbors may join, but nothing far away does
        let target_mid = std::f64::consts::TAU / 32.0;
        for q in &f1.cubes {
            let th = grid.cube(*q).center.angle();
            assert!(
                crate::geometry::angle_diff(th, target_mid).abs() < 1.0,
                "far-away cube {q:?} selected"
            );
        }
        // antichain property
        for a in &f1.cubes {
            for b in &f1.cubes {
                if a != b {
                    assert!(!grid.is_descendant(*a, *b));
                }
            }
        }
    }

    #[test]
    fn omega_lambda_nesting() {
        let grid = build_grid(2, 4).unwrap();
        let c = Constants::derive(1.0, 0.01, 0.05, 2);
        let field = cone_field(&grid, &[CubeId { k: 1, j: 2 }], 1.0);
        let st = build_ample_sawtooth(&grid, &field, &c).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..2000 {
            let r: f64 = rng.gen::<f64>();
            let th = rng.gen::<f64>() * std::f64::consts::TAU;
            let x = Point::from_polar(r.sqrt(), th);
            for p in 1..=st.levels() {
                // Ω_p ⊂ Λ_p, and Λ_p ⊂ Ω_{p+1}
                if st.omega(p).contains(&x) {
                    assert!(st.lambda(p).contains(&x));
                }
                if p < st.levels() && st.lambda(p).contains(&x) {
                    assert!(st.omega(p + 1).contains(&x));
                }
            }
        }
    }

    #[test]
    fn shadows_nest_and_shrink() {
        let grid = build_grid(2, 5).unwrap();
        let c = Constants::derive(1.0, 0.005, 0.02, 2);
        let field = cone_field(&grid, &[CubeId { k: 1, j: 0 }, CubeId { k: 1, j: 5 }], 1.0);
        let st = build_ample_sawtooth(&grid, &field, &c).unwrap();
        for w in st.families.windows(2) {
            assert!(w[1].shadow <= w[0].shadow + 1e-12);
            // every next-family cube sits strictly inside some current cube
            for q in &w[1].cubes {
                assert!(w[0]
                    .cubes
                    .iter()
                    .any(|&p| q.k > p.k && grid.is_descendant(*q, p)));
            }
        }
        assert!(st.final_shadow_fraction() <= c.eta + 1e-12);
        assert!((st.levels() as u64) <= c.n0);
    }

    #[test]
    fn matches_brute_force_oracle_on_random_cones() {
        let grid = build_grid(2, 4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for trial in 0..10 {
            let n_targets = rng.gen_range(1..=3);
            let mut targets = Vec::new();
            for _ in 0..n_targets {
                let k = rng.gen_range(1..=3u32);
                let j = rng.gen_range(0..grid.generation(k).len());
                targets.push(CubeId { k, j });
            }
            let amp = rng.gen_range(0.3..1.0);
            let eps = rng.gen_range(0.005..0.05);
            let field = cone_field(&grid, &targets, amp);
            let oracle = oracle_families(&grid, &field, eps);

            let refinement = build_refinement(&grid);
            let mut cache = BadnessCache::new(&grid, &refinement, &field, eps);
            let mut got = vec![extract_family_first(&mut cache)];
            while !got.last().unwrap().is_empty() {
                let prev = got.last().unwrap().clone();
                got.push(extract_family_next(&mut cache, &prev));
            }
            let mut want = oracle.clone();
            for f in want.iter_mut() {
                f.sort();
            }
            for f in got.iter_mut() {
                f.sort();
            }
            assert_eq!(got, want, "trial {trial} targets {targets:?}");
        }
    }

    #[test]
    fn eta_monotone_prefix() {
        let grid = build_grid(2, 4).unwrap();
        let field = cone_field(&grid, &[CubeId { k: 1, j: 3 }], 1.0);
        let loose = Constants::derive(1.0, 0.01, 0.5, 2);
        let tight = Constants::derive(1.0, 0.01, 0.02, 2);
        let a = build_ample_sawtooth(&grid, &field, &loose).unwrap();
        let b = build_ample_sawtooth(&grid, &field, &tight).unwrap();
        assert!(a.levels() <= b.levels());
        for (fa, fb) in a.families.iter().zip(&b.families) {
            assert_eq!(fa.cubes, fb.cubes);
        }
        assert!(a.final_shadow_fraction() <= 0.5 + 1e-12);
        assert!(b.final_shadow_fraction() <= 0.02 + 1e-12);
    }

    #[test]
    fn serialization_mentions_levels() {
        let grid = build_grid(2, 3).unwrap();
        let c = Constants::derive(1.0, 0.05, 0.2, 2);
        let field = cone_field(&grid, &[CubeId { k: 2, j: 4 }], 0.8);
        let st = build_ample_sawtooth(&grid, &field, &c).unwrap();
        let text = st.to_text();
        assert!(text.contains("levels="));
        assert!(text.contains("family 1:"));
    }
}
