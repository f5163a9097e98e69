//! Intersection geometry between the immersed curve `γ`, the active mesh,
//! and a boundary partition `σ`: `γ` is cut into maximal subsegments lying
//! in a single active triangle and a single `σ`-interval. All boundary
//! integrals (`∫_γ χ v ds`, residuals, traces) are exact sums over these
//! subsegments because the integrands are polynomial on each of them.

use crate::boundary::{BoundaryCurve, BoundaryPartition};
use crate::geom::{barycentric, Point};
use crate::mesh::Triangulation;
use crate::quadrature::kahan_sum;

#[derive(Debug, thiserror::Error)]
pub enum CouplingError {
    #[error("curve point at arc length {0} lies outside the mesh")]
    CurveOutsideMesh(f64),
    #[error("subsegments fail to partition the curve (gap {0:.3e})")]
    PartitionGap(f64),
    #[error("partition and curve lengths disagree")]
    PartitionMismatch,
}

/// A maximal piece of `γ` inside one active triangle and one `σ`-interval.
#[derive(Clone, Copy, Debug)]
pub struct SubSegment {
    pub tri: u32,
    pub interval: usize,
    pub s0: f64,
    pub s1: f64,
    pub p0: Point,
    pub p1: Point,
}

impl SubSegment {
    pub fn len(&self) -> f64 {
        self.s1 - self.s0
    }

    pub fn midpoint(&self) -> Point {
        self.p0.mid(self.p1)
    }
}

/// The full decomposition of `γ` for one (mesh, partition) pair.
#[derive(Clone, Debug)]
pub struct CouplingGeometry {
    pub segs: Vec<SubSegment>,
    pub partition: BoundaryPartition,
}

impl CouplingGeometry {
    /// Sum of subsegment lengths (compensated); equals `|γ|` up to rounding.
    pub fn total_len(&self) -> f64 {
        kahan_sum(self.segs.iter().map(|s| s.len()))
    }

    /// Active triangles hosting at least one subsegment, ascending.
    pub fn host_tris(&self) -> Vec<u32> {
        let mut out: Vec<u32> = self.segs.iter().map(|s| s.tri).collect();
        out.sort_unstable();
        out.dedup();
        out
    }
}

/// Uniform background grid for point-in-triangle location near the curve.
struct TriGrid {
    lo: Point,
    inv_cell: f64,
    nx: usize,
    ny: usize,
    cells: Vec<Vec<u32>>,
}

impl TriGrid {
    fn build(mesh: &Triangulation, curve_lo: Point, curve_hi: Point) -> Self {
        let pad = 1e-9 * (curve_hi.sub(curve_lo).norm() + 1.0);
        let lo = Point::new(curve_lo.x - pad, curve_lo.y - pad);
        let hi = Point::new(curve_hi.x + pad, curve_hi.y + pad);
        let n = mesh.n_active().max(1);
        let nx = ((n as f64).sqrt().ceil() as usize).clamp(8, 1024);
        let ny = nx;
        let cell = ((hi.x - lo.x) / nx as f64).max((hi.y - lo.y) / ny as f64);
        let inv_cell = 1.0 / cell;
        let mut cells = vec![Vec::new(); nx * ny];
        for t in mesh.active_tris() {
            let [a, b, c] = mesh.tri_points(t);
            let bx0 = a.x.min(b.x).min(c.x);
            let bx1 = a.x.max(b.x).max(c.x);
            let by0 = a.y.min(b.y).min(c.y);
            let by1 = a.y.max(b.y).max(c.y);
            if bx1 < lo.x || bx0 > hi.x || by1 < lo.y || by0 > hi.y {
                continue;
            }
            let ix0 = (((bx0 - lo.x) * inv_cell).floor() as i64).clamp(0, nx as i64 - 1) as usize;
            let ix1 = (((bx1 - lo.x) * inv_cell).floor() as i64).clamp(0, nx as i64 - 1) as usize;
            let iy0 = (((by0 - lo.y) * inv_cell).floor() as i64).clamp(0, ny as i64 - 1) as usize;
            let iy1 = (((by1 - lo.y) * inv_cell).floor() as i64).clamp(0, ny as i64 - 1) as usize;
            for iy in iy0..=iy1 {
                for ix in ix0..=ix1 {
                    cells[iy * nx + ix].push(t);
                }
            }
        }
        Self {
            lo,
            inv_cell,
            nx,
            ny,
            cells,
        }
    }

    fn candidates(&self, p: Point) -> &[u32] {
        let ix = (((p.x - self.lo.x) * self.inv_cell).floor() as i64).clamp(0, self.nx as i64 - 1);
        let iy = (((p.y - self.lo.y) * self.inv_cell).floor() as i64).clamp(0, self.ny as i64 - 1);
        &self.cells[iy as usize * self.nx + ix as usize]
    }
}

/// Locates the active triangle containing `p`; on ties (point on a shared
/// edge or vertex) the smallest triangle id wins.
fn locate(mesh: &Triangulation, grid: &TriGrid, p: Point) -> Option<u32> {
    let mut best: Option<(u32, f64)> = None;
    let mut cands = grid.candidates(p).to_vec();
    cands.sort_unstable();
    cands.dedup();
    for t in cands {
        let [a, b, c] = mesh.tri_points(t);
        let l = barycentric(p, a, b, c);
        let m = l[0].min(l[1]).min(l[2]);
        match best {
            Some((_, bm)) if m <= bm + 1e-13 => {}
            _ => best = Some((t, m)),
        }
    }
    match best {
        Some((t, m)) if m >= -1e-9 => Some(t),
        _ => None,
    }
}

/// Cuts `γ` into subsegments against the active triangles of `mesh` and the
/// intervals of `partition`. Split points include all `σ` breakpoints, all
/// curve corners, and all crossings with mesh edges (collinear overlaps with
/// a mesh edge contribute both overlap endpoints; the containing triangle is
/// then either neighbor, resolved deterministically by smaller id).
pub fn intersect_curve_mesh(
    mesh: &Triangulation,
    curve: &BoundaryCurve,
    partition: &BoundaryPartition,
) -> Result<CouplingGeometry, CouplingError> {
    if (partition.total_len - curve.len()).abs() > 1e-9 * curve.len() {
        return Err(CouplingError::PartitionMismatch);
    }
    let (clo, chi) = curve.bbox();
    let grid = TriGrid::build(mesh, clo, chi);
    let edges = mesh.all_edges();
    let breaks = partition.breakpoints();
    let mut segs: Vec<SubSegment> = Vec::new();

    for (sa, sb, pa, pb) in curve.legs() {
        let leg_len = sb - sa;
        let dir = pb.sub(pa);
        let snap = 1e-12 * leg_len;
        let mut params: Vec<f64> = vec![sa, sb];
        for &s in &breaks {
            if s > sa + snap && s < sb - snap {
                params.push(s);
            }
        }
        for &(va, vb) in &edges {
            let q1 = mesh.point(va);
            let q2 = mesh.point(vb);
            edge_crossings(pa, pb, sa, sb, q1, q2, &mut params);
        }
        params.sort_by(|a, b| a.partial_cmp(b).unwrap());
        params.dedup_by(|a, b| (*a - *b).abs() <= snap);
        for w in params.windows(2) {
            let (s0, s1) = (w[0], w[1]);
            if s1 - s0 <= snap {
                continue;
            }
            let t0 = (s0 - sa) / leg_len;
            let t1 = (s1 - sa) / leg_len;
            let p0 = pa.add(dir.scale(t0));
            let p1 = pa.add(dir.scale(t1));
            let mid = p0.mid(p1);
            let tri = locate(mesh, &grid, mid).ok_or(CouplingError::CurveOutsideMesh(s0))?;
            let interval = partition.interval_of(0.5 * (s0 + s1));
            segs.push(SubSegment {
                tri,
                interval,
                s0,
                s1,
                p0,
                p1,
            });
        }
    }

    let geometry = CouplingGeometry {
        segs,
        partition: *partition,
    };
    let gap = (geometry.total_len() - curve.len()).abs();
    if gap > 1e-10 * curve.len() {
        return Err(CouplingError::PartitionGap(gap));
    }
    Ok(geometry)
}

/// Appends arc-length parameters where the mesh edge `[q1,q2]` meets the leg
/// `[pa,pb]` (arc range `[sa,sb]`), including both endpoints of a collinear
/// overlap.
fn edge_crossings(pa: Point, pb: Point, sa: f64, sb: f64, q1: Point, q2: Point, out: &mut Vec<f64>) {
    let d = pb.sub(pa);
    let e = q2.sub(q1);
    let denom = d.cross(e);
    let w = q1.sub(pa);
    let leg_len = sb - sa;
    let scale = d.norm() * e.norm();
    if denom.abs() > 1e-14 * scale {
        let t = w.cross(e) / denom;
        let u = w.cross(d) / denom;
        if (-1e-12..=1.0 + 1e-12).contains(&t) && (-1e-12..=1.0 + 1e-12).contains(&u) {
            out.push(sa + t.clamp(0.0, 1.0) * leg_len);
        }
        return;
    }
    // Parallel. Collinear iff q1 sits on the leg's line.
    if w.cross(d).abs() > 1e-12 * d.norm() * (w.norm() + e.norm()) {
        return;
    }
    let len2 = d.dot(d);
    let t1 = w.dot(d) / len2;
    let t2 = q2.sub(pa).dot(d) / len2;
    for t in [t1, t2] {
        if (-1e-12..=1.0 + 1e-12).contains(&t) {
            out.push(sa + t.clamp(0.0, 1.0) * leg_len);
        }
    }
}
