//! Whitney decomposition of the unit ball in boundary-cube × radial-slab
//! form, the 2^{n+1}-fold refinement 𝒲′, Carleson boxes T_Q = S_Q ⊔ U_Q and
//! face bookkeeping.
//!
//! For Q ∈ 𝔻_k the Whitney box is U_Q = Q × (1−2^{-k}, 1−2^{-k-1}] in the
//! radial variable (distance-to-sphere between 2^{-k-1} and 2^{-k}, radial
//! width 2^{-(k+1)}). T_Q = Q × (1−2^{-k}, 1) and S_Q = T_Q ∖ U_Q is the
//! boundary-adjacent part.

use crate::dyadic::{surface_measure, CubeId, DyadicCube, DyadicGrid};
use crate::geometry::{CubeExtent, Point, ProductBox};

/// Angular measure of an extent (arc length / solid angle).
fn angular_measure(extent: &CubeExtent) -> f64 {
    surface_measure(extent)
}

/// Volume of a product region (angular extent) × (radial interval).
pub fn product_volume(b: &ProductBox) -> f64 {
    let d = b.extent.dim() as f64;
    angular_measure(&b.extent) * (b.r_hi.powf(d) - b.r_lo.powf(d)) / d
}

/// The Whitney box U_Q over a grid cube.
#[derive(Debug, Clone, PartialEq)]
pub struct WhitneyBox {
    pub cube: CubeId,
    pub region: ProductBox,
    /// l(U_Q) = 2^{-k}.
    pub side_length: f64,
}

/// One of the 2^{n+1} congruent children of a Whitney box.
#[derive(Debug, Clone, PartialEq)]
pub struct RefinedBox {
    pub parent: CubeId,
    /// 0..2^{n+1}-1; low bit(s) index the angular half/quadrant, the high bit
    /// the radial half.
    pub octant_index: u8,
    pub region: ProductBox,
    /// l(P) = half the parent side length.
    pub side_length: f64,
}

/// Carleson box T_Q = S_Q ⊔ U_Q over a root cube.
#[derive(Debug, Clone, PartialEq)]
pub struct CarlesonBox {
    pub root_cube: CubeId,
    /// T_Q = Q × (1−2^{-k}, 1).
    pub region: ProductBox,
    /// S_Q = Q × (1−2^{-k-1}, 1), the boundary-adjacent remainder.
    pub s_region: ProductBox,
    /// U_Q, the innermost slab.
    pub u_region: ProductBox,
}

/// Role of a face of a product region.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FaceRole {
    /// Constant-radius face at the smaller radius r0 (closer to the origin).
    Top,
    /// Constant-radius face at the larger radius r1.
    Bottom,
    Lateral,
}

/// An enumerated face δ_{Q,i} of a Whitney or Carleson box.
#[derive(Debug, Clone, PartialEq)]
pub struct Face {
    /// 1 = top, 2 = bottom, 3.. = lateral.
    pub index: u8,
    pub role: FaceRole,
    /// Radius of the face for the two constant-radius faces.
    pub radius: Option<f64>,
    /// For 2-D lateral faces, the constant angle; for 3-D lateral faces the
    /// index of the patch edge.
    pub lateral_coord: Option<f64>,
}

fn slab(k: u32) -> (f64, f64) {
    let w = 0.5f64.powi(k as i32);
    (1.0 - w, 1.0 - 0.5 * w)
}

/// U_Q = Q × (1−2^{-k}, 1−2^{-k-1}].
pub fn whitney_box(grid: &DyadicGrid, q: CubeId) -> WhitneyBox {
    let cube = grid.cube(q);
    let (r_lo, r_hi) = slab(q.k);
    WhitneyBox {
        cube: q,
        region: ProductBox { extent: cube.extent, r_lo, r_hi },
        side_length: 0.5f64.powi(q.k as i32),
    }
}

/// T_Q = Q × (1−2^{-k}, 1) split into S_Q ⊔ U_Q.
pub fn carleson_box(grid: &DyadicGrid, q: CubeId) -> CarlesonBox {
    let cube = grid.cube(q);
    let (r_lo, r_mid) = slab(q.k);
    CarlesonBox {
        root_cube: q,
        region: ProductBox { extent: cube.extent, r_lo, r_hi: 1.0 },
        s_region: ProductBox { extent: cube.extent, r_lo: r_mid, r_hi: 1.0 },
        u_region: ProductBox { extent: cube.extent, r_lo, r_hi: r_mid },
    }
}

fn split_extent(extent: &CubeExtent) -> Vec<CubeExtent> {
    match *extent {
        CubeExtent::Arc { theta_lo, theta_hi } => {
            let mid = 0.5 * (theta_lo + theta_hi);
            vec![
                CubeExtent::Arc { theta_lo, theta_hi: mid },
                CubeExtent::Arc { theta_lo: mid, theta_hi },
            ]
        }
        CubeExtent::Patch { face, u_lo, u_hi, v_lo, v_hi } => {
            let um = 0.5 * (u_lo + u_hi);
            let vm = 0.5 * (v_lo + v_hi);
            vec![
                CubeExtent::Patch { face, u_lo, u_hi: um, v_lo, v_hi: vm },
                CubeExtent::Patch { face, u_lo: um, u_hi, v_lo, v_hi: vm },
                CubeExtent::Patch { face, u_lo, u_hi: um, v_lo: vm, v_hi },
                CubeExtent::Patch { face, u_lo: um, u_hi, v_lo: vm, v_hi },
            ]
        }
    }
}

/// Bisects each edge: 2^{n+1} congruent children partitioning U exactly.
pub fn refine(u: &WhitneyBox) -> Vec<RefinedBox> {
    let halves = split_extent(&u.region.extent);
    let r_mid = 0.5 * (u.region.r_lo + u.region.r_hi);
    let mut out = Vec::with_capacity(2 * halves.len());
    for (ri, (r_lo, r_hi)) in [(u.region.r_lo, r_mid), (r_mid, u.region.r_hi)]
        .into_iter()
        .enumerate()
    {
        for (ai, ext) in halves.iter().enumerate() {
            out.push(RefinedBox {
                parent: u.cube,
                octant_index: (ri * halves.len() + ai) as u8,
                region: ProductBox { extent: *ext, r_lo, r_hi },
                side_length: 0.5 * u.side_length,
            });
        }
    }
    out
}

/// Enumerates the 2(n+1) faces of a product region: index 1 is the top
/// surface (smaller radius r0 < r1), index 2 the bottom surface, the rest
/// lateral constant-angle sheets.
pub fn faces(region: &ProductBox) -> Vec<Face> {
    let mut out = vec![
        Face { index: 1, role: FaceRole::Top, radius: Some(region.r_lo), lateral_coord: None },
        Face { index: 2, role: FaceRole::Bottom, radius: Some(region.r_hi), lateral_coord: None },
    ];
    match region.extent {
        CubeExtent::Arc { theta_lo, theta_hi } => {
            out.push(Face {
                index: 3,
                role: FaceRole::Lateral,
                radius: None,
                lateral_coord: Some(theta_lo),
            });
            out.push(Face {
                index: 4,
                role: FaceRole::Lateral,
                radius: None,
                lateral_coord: Some(theta_hi),
            });
        }
        CubeExtent::Patch { .. } => {
            for i in 0..4 {
                out.push(Face {
                    index: 3 + i,
                    role: FaceRole::Lateral,
                    radius: None,
                    lateral_coord: Some(i as f64),
                });
            }
        }
    }
    out
}

/// All Whitney boxes of the grid restricted to T_Q for a root cube: the boxes
/// over Q and its descendants, coarse to fine, in index order.
pub fn whitney_boxes_in_carleson(grid: &DyadicGrid, root: CubeId) -> Vec<WhitneyBox> {
    let mut out = Vec::new();
    let mut frontier = vec![root];
    while let Some(id) = frontier.pop() {
        out.push(whitney_box(grid, id));
        if id.k < grid.k_max {
            frontier.extend(grid.children(id));
        }
    }
    out.sort_by_key(|w| (w.cube.k, w.cube.j));
    out
}

/// Looks up the grid cube whose Whitney box contains `x`, if any.
/// Points with |x| ≤ 1/2 or beyond the finest slab belong to no box.
pub fn locate_whitney_cube(grid: &DyadicGrid, x: &Point) -> Option<CubeId> {
    let r = x.norm();
    if r <= 0.5 || r >= 1.0 {
        return None;
    }
    // slab (1-2^{-k}, 1-2^{-k-1}]  <=>  2^{-k-1} ≤ 1-r < 2^{-k}
    let mut k = (-(1.0 - r).log2()).ceil() as i64 - 1;
    // guard the exact-power rounding cases
    if k >= 0 && 1.0 - r >= 0.5f64.powi(k as i32) {
        k -= 1;
    } else if k >= 0 && 1.0 - r < 0.5f64.powi(k as i32 + 1) {
        k += 1;
    }
    if k < 1 || k as u32 > grid.k_max {
        return None;
    }
    let k = k as u32;
    let j = grid.locate(&x.dir(), k);
    let id = CubeId { k, j };
    debug_assert!(whitney_box(grid, id).region.contains(x));
    Some(id)
}

/// A full refinement table 𝒲′ for the boxes of every generation of a grid.
#[derive(Debug, Clone)]
pub struct Refinement {
    /// refined[k-1][j] = the 2^{n+1} children of U_{Q_j^k}.
    pub refined: Vec<Vec<Vec<RefinedBox>>>,
}

pub fn build_refinement(grid: &DyadicGrid) -> Refinement {
    let mut refined = Vec::new();
    for k in 1..=grid.k_max {
        let gen: Vec<Vec<RefinedBox>> = grid
            .generation(k)
            .iter()
            .map(|c: &DyadicCube| refine(&whitney_box(grid, c.id)))
            .collect();
        refined.push(gen);
    }
    Refinement { refined }
}

impl Refinement {
    pub fn of(&self, id: CubeId) -> &[RefinedBox] {
        &self.refined[(id.k - 1) as usize][id.j]
    }
}
