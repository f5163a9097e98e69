//! Conforming triangulations generated from a bottom mesh by newest vertex
//! bisection (NVB).
//!
//! Triangles store their newest vertex first, so the refinement edge is the
//! edge opposite `v[0]`. Bisecting a triangle `(v0, v1, v2)` with refinement
//! edge `(v1, v2)` and midpoint `m` produces the children `(m, v0, v1)` and
//! `(m, v2, v0)`; both are counterclockwise when the parent is, both have `m`
//! as their newest vertex, and each has half the parent's area.
//!
//! The whole refinement forest is kept: inactive triangles remember their
//! children, active triangles are the leaves. Vertex ids are creation-ordered
//! (midpoints always have larger ids than the edge endpoints they bisect),
//! which downstream code relies on for interpolation.

use std::collections::HashMap;

use serde::Serialize;

use crate::geom::{signed_area2, Point};

const NONE: u32 = u32::MAX;

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum MeshError {
    #[error("triangle {0} has non-positive area")]
    NonPositiveArea(usize),
    #[error("vertex index {0} out of range")]
    BadVertexIndex(u32),
    #[error("vertex coordinates must be finite")]
    NonFiniteCoordinate,
    #[error("edge ({0}, {1}) is shared by more than two triangles")]
    NonConforming(u32, u32),
    #[error("vertex {0} hangs on an edge of another triangle")]
    HangingVertex(u32),
    #[error("newest-vertex assignment incompatible across edge ({0}, {1})")]
    IncompatibleAssignment(u32, u32),
    #[error("unknown vertex id {0}")]
    UnknownVertex(u32),
    #[error("conforming closure exceeded recursion cap (corrupt forest?)")]
    ClosureDepth,
}

/// One triangle of the refinement forest. `v[0]` is the newest vertex.
#[derive(Clone, Copy, Debug)]
pub struct Triangle {
    pub v: [u32; 3],
    pub generation: u32,
    pub parent: u32,
    children: [u32; 2],
}

impl Triangle {
    pub fn is_active(&self) -> bool {
        self.children[0] == NONE
    }

    pub fn children(&self) -> Option<[u32; 2]> {
        if self.is_active() {
            None
        } else {
            Some(self.children)
        }
    }

    pub fn parent(&self) -> Option<u32> {
        (self.parent != NONE).then_some(self.parent)
    }

    /// Refinement edge, as a sorted vertex pair.
    pub fn refinement_edge(&self) -> (u32, u32) {
        sorted(self.v[1], self.v[2])
    }
}

/// Vertex patch `ω_z`: the active triangles touching `z`, the interior patch
/// edges `Γ(ω_z)` (edges incident to `z` not lying on `∂Ω`), and the patch
/// weight `|ω_{τ,z}|` = maximum triangle area over the patch.
#[derive(Clone, Debug)]
pub struct VertexPatch {
    pub vertex: u32,
    pub tris: Vec<u32>,
    pub interior_edges: Vec<(u32, u32)>,
    pub weight: f64,
}

/// An interior (non-`∂Ω`) edge together with its two active triangles.
#[derive(Clone, Copy, Debug)]
pub struct InteriorEdge {
    pub v: (u32, u32),
    pub tris: [u32; 2],
}

#[derive(Clone, Copy, Debug)]
struct EdgeSlot {
    t0: u32,
    t1: u32,
}

impl EdgeSlot {
    fn new(t: u32) -> Self {
        Self { t0: t, t1: NONE }
    }

    fn insert(&mut self, t: u32) -> Result<(), ()> {
        if self.t1 == NONE {
            self.t1 = t;
            Ok(())
        } else {
            Err(())
        }
    }

    fn remove(&mut self, t: u32) {
        if self.t0 == t {
            self.t0 = self.t1;
            self.t1 = NONE;
        } else if self.t1 == t {
            self.t1 = NONE;
        }
    }

    fn is_empty(&self) -> bool {
        self.t0 == NONE
    }

    fn other(&self, t: u32) -> Option<u32> {
        if self.t0 == t {
            (self.t1 != NONE).then_some(self.t1)
        } else {
            (self.t0 != NONE).then_some(self.t0)
        }
    }
}

fn sorted(a: u32, b: u32) -> (u32, u32) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

/// A conforming NVB triangulation with its full refinement forest.
#[derive(Clone, Debug)]
pub struct Triangulation {
    points: Vec<Point>,
    tris: Vec<Triangle>,
    /// Active triangles adjacent to each edge of the active mesh.
    edges: HashMap<(u32, u32), EdgeSlot>,
    /// Active triangles incident to each vertex.
    vertex_tris: Vec<Vec<u32>>,
    /// Midpoint vertex created on an edge, shared across bisections.
    midpoints: HashMap<(u32, u32), u32>,
    /// Edge endpoints a midpoint vertex was created from.
    vertex_parents: Vec<Option<(u32, u32)>>,
    boundary_vertex: Vec<bool>,
    n_active: usize,
    n_bottom: usize,
}

impl Triangulation {
    /// Builds the bottom mesh `τ_⊥` from explicit vertices and triangles.
    ///
    /// Each triangle lists its newest vertex first. The input must be
    /// conforming, counterclockwise, and satisfy the NVB compatibility rule:
    /// an interior edge that is the refinement edge of one of its triangles
    /// must be the refinement edge of the other as well.
    pub fn make_bottom_mesh(points: Vec<Point>, tris: &[[u32; 3]]) -> Result<Self, MeshError> {
        let n = points.len() as u32;
        if points.iter().any(|p| !p.x.is_finite() || !p.y.is_finite()) {
            return Err(MeshError::NonFiniteCoordinate);
        }
        let mut mesh = Self {
            points,
            tris: Vec::with_capacity(tris.len()),
            edges: HashMap::new(),
            vertex_tris: vec![Vec::new(); n as usize],
            midpoints: HashMap::new(),
            vertex_parents: vec![None; n as usize],
            boundary_vertex: vec![false; n as usize],
            n_active: 0,
            n_bottom: tris.len(),
        };
        for (it, t) in tris.iter().enumerate() {
            for &v in t {
                if v >= n {
                    return Err(MeshError::BadVertexIndex(v));
                }
            }
            let [a, b, c] = [
                mesh.points[t[0] as usize],
                mesh.points[t[1] as usize],
                mesh.points[t[2] as usize],
            ];
            if signed_area2(a, b, c) <= 0.0 {
                return Err(MeshError::NonPositiveArea(it));
            }
            mesh.tris.push(Triangle {
                v: *t,
                generation: 0,
                parent: NONE,
                children: [NONE; 2],
            });
            let id = it as u32;
            for k in 0..3 {
                let e = sorted(t[k], t[(k + 1) % 3]);
                match mesh.edges.entry(e) {
                    std::collections::hash_map::Entry::Occupied(mut o) => {
                        o.get_mut().insert(id).map_err(|_| MeshError::NonConforming(e.0, e.1))?;
                    }
                    std::collections::hash_map::Entry::Vacant(v) => {
                        v.insert(EdgeSlot::new(id));
                    }
                }
                mesh.vertex_tris[t[k] as usize].push(id);
            }
            mesh.n_active += 1;
        }
        // Hanging-vertex check: a vertex may not lie strictly inside an edge.
        for (&(a, b), _) in mesh.edges.iter() {
            let pa = mesh.points[a as usize];
            let pb = mesh.points[b as usize];
            let tol = 1e-12 * pa.dist(pb);
            for v in 0..n {
                if v == a || v == b {
                    continue;
                }
                let p = mesh.points[v as usize];
                if crate::geom::dist_point_segment(p, pa, pb) < tol
                    && p.dist(pa) > tol
                    && p.dist(pb) > tol
                {
                    return Err(MeshError::HangingVertex(v));
                }
            }
        }
        // Compatibility rule on interior edges.
        for (&e, slot) in mesh.edges.iter() {
            if slot.t1 == NONE {
                continue;
            }
            let r0 = mesh.tris[slot.t0 as usize].refinement_edge() == e;
            let r1 = mesh.tris[slot.t1 as usize].refinement_edge() == e;
            if r0 != r1 {
                return Err(MeshError::IncompatibleAssignment(e.0, e.1));
            }
        }
        // Boundary vertices: endpoints of edges with a single adjacent triangle.
        for (&(a, b), slot) in mesh.edges.iter() {
            if slot.t1 == NONE {
                mesh.boundary_vertex[a as usize] = true;
                mesh.boundary_vertex[b as usize] = true;
            }
        }
        Ok(mesh)
    }

    /// The canonical criss-cross bottom mesh of the square `(-w, w)²`:
    /// four corner vertices, the center vertex, four triangles whose
    /// refinement edges are the boundary sides (compatibility then holds
    /// vacuously).
    pub fn criss_cross(w: f64) -> Self {
        let points = vec![
            Point::new(-w, -w),
            Point::new(w, -w),
            Point::new(w, w),
            Point::new(-w, w),
            Point::new(0.0, 0.0),
        ];
        let tris = [[4, 0, 1], [4, 1, 2], [4, 2, 3], [4, 3, 0]];
        Self::make_bottom_mesh(points, &tris).expect("criss-cross bottom mesh is valid")
    }

    pub fn n_vertices(&self) -> usize {
        self.points.len()
    }

    pub fn n_active(&self) -> usize {
        self.n_active
    }

    pub fn n_bottom(&self) -> usize {
        self.n_bottom
    }

    pub fn n_tris_total(&self) -> usize {
        self.tris.len()
    }

    pub fn point(&self, v: u32) -> Point {
        self.points[v as usize]
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn tri(&self, t: u32) -> &Triangle {
        &self.tris[t as usize]
    }

    pub fn is_active(&self, t: u32) -> bool {
        self.tris[t as usize].is_active()
    }

    pub fn is_boundary_vertex(&self, v: u32) -> bool {
        self.boundary_vertex[v as usize]
    }

    /// Edge endpoints a midpoint vertex was bisected from; `None` for bottom
    /// vertices. Parent ids are always smaller than the vertex id.
    pub fn vertex_parents(&self, v: u32) -> Option<(u32, u32)> {
        self.vertex_parents[v as usize]
    }

    /// Ids of the active triangles, ascending.
    pub fn active_tris(&self) -> impl Iterator<Item = u32> + '_ {
        self.tris
            .iter()
            .enumerate()
            .filter(|(_, t)| t.is_active())
            .map(|(i, _)| i as u32)
    }

    pub fn tri_points(&self, t: u32) -> [Point; 3] {
        let v = self.tris[t as usize].v;
        [
            self.points[v[0] as usize],
            self.points[v[1] as usize],
            self.points[v[2] as usize],
        ]
    }

    pub fn tri_area(&self, t: u32) -> f64 {
        let [a, b, c] = self.tri_points(t);
        0.5 * signed_area2(a, b, c)
    }

    pub fn tri_diam(&self, t: u32) -> f64 {
        let [a, b, c] = self.tri_points(t);
        a.dist(b).max(b.dist(c)).max(c.dist(a))
    }

    /// Walks the forest to decide whether `t` descends from `anc` (or is it).
    pub fn is_descendant(&self, t: u32, anc: u32) -> bool {
        let mut cur = t;
        loop {
            if cur == anc {
                return true;
            }
            match self.tris[cur as usize].parent() {
                Some(p) => cur = p,
                None => return false,
            }
        }
    }

    /// Active triangles incident to `z`, ascending.
    pub fn tris_at_vertex(&self, z: u32) -> Vec<u32> {
        let mut out = self.vertex_tris[z as usize].clone();
        out.sort_unstable();
        out
    }

    /// Patch data for vertex `z`: triangles of `ω_z`, the interior patch
    /// edges `Γ(ω_z)`, and the patch weight (max member area).
    pub fn patch_data(&self, z: u32) -> Result<VertexPatch, MeshError> {
        if z as usize >= self.points.len() {
            return Err(MeshError::UnknownVertex(z));
        }
        let tris = self.tris_at_vertex(z);
        let mut weight: f64 = 0.0;
        let mut interior_edges = Vec::new();
        for &t in &tris {
            weight = weight.max(self.tri_area(t));
            let v = self.tris[t as usize].v;
            for k in 0..3 {
                let e = sorted(v[k], v[(k + 1) % 3]);
                if (e.0 == z || e.1 == z) && e.0 < e.1 {
                    let slot = self.edges[&e];
                    // Count each interior edge once (from its lower-id triangle).
                    if slot.t1 != NONE && slot.t0 == t {
                        interior_edges.push(e);
                    }
                }
            }
        }
        interior_edges.sort_unstable();
        Ok(VertexPatch {
            vertex: z,
            tris,
            interior_edges,
            weight,
        })
    }

    /// Patch weights `|ω_{τ,z}|` for all vertices in one sweep.
    pub fn patch_weights(&self) -> Vec<f64> {
        let mut w = vec![0.0f64; self.points.len()];
        for (i, t) in self.tris.iter().enumerate() {
            if !t.is_active() {
                continue;
            }
            let area = self.tri_area(i as u32);
            for &v in &t.v {
                let slot = &mut w[v as usize];
                if area > *slot {
                    *slot = area;
                }
            }
        }
        w
    }

    /// All edges of the active mesh not lying on `∂Ω`, sorted by vertex pair.
    pub fn interior_edges(&self) -> Vec<InteriorEdge> {
        let mut out: Vec<InteriorEdge> = self
            .edges
            .iter()
            .filter(|(_, slot)| slot.t1 != NONE)
            .map(|(&v, slot)| InteriorEdge {
                v,
                tris: [slot.t0.min(slot.t1), slot.t0.max(slot.t1)],
            })
            .collect();
        out.sort_unstable_by_key(|e| e.v);
        out
    }

    /// All edges of the active mesh (interior and boundary), sorted.
    pub fn all_edges(&self) -> Vec<(u32, u32)> {
        let mut out: Vec<(u32, u32)> = self.edges.keys().copied().collect();
        out.sort_unstable();
        out
    }

    fn other_active_across(&self, e: (u32, u32), t: u32) -> Option<u32> {
        self.edges.get(&e).and_then(|slot| slot.other(t))
    }

    fn midpoint_of(&mut self, e: (u32, u32)) -> u32 {
        if let Some(&m) = self.midpoints.get(&e) {
            return m;
        }
        let p = self.points[e.0 as usize].mid(self.points[e.1 as usize]);
        let id = self.points.len() as u32;
        self.points.push(p);
        self.vertex_parents.push(Some(e));
        // The midpoint lies on ∂Ω iff the split edge does.
        let on_boundary = self.edges.get(&e).map(|s| s.t1 == NONE).unwrap_or(false);
        self.boundary_vertex.push(on_boundary);
        self.vertex_tris.push(Vec::new());
        self.midpoints.insert(e, id);
        id
    }

    fn detach(&mut self, t: u32) {
        let v = self.tris[t as usize].v;
        for k in 0..3 {
            let e = sorted(v[k], v[(k + 1) % 3]);
            if let Some(slot) = self.edges.get_mut(&e) {
                slot.remove(t);
                if slot.is_empty() {
                    self.edges.remove(&e);
                }
            }
            let list = &mut self.vertex_tris[v[k] as usize];
            if let Some(pos) = list.iter().position(|&x| x == t) {
                list.swap_remove(pos);
            }
        }
    }

    fn attach(&mut self, t: u32) {
        let v = self.tris[t as usize].v;
        for k in 0..3 {
            let e = sorted(v[k], v[(k + 1) % 3]);
            self.edges
                .entry(e)
                .and_modify(|slot| {
                    slot.insert(t).expect("edge shared by more than two active triangles");
                })
                .or_insert_with(|| EdgeSlot::new(t));
            self.vertex_tris[v[k] as usize].push(t);
        }
    }

    /// Splits active `t` across its refinement edge with midpoint `m`.
    fn split(&mut self, t: u32, m: u32) {
        let tri = self.tris[t as usize];
        debug_assert!(tri.is_active());
        self.detach(t);
        let [v0, v1, v2] = tri.v;
        let gen = tri.generation + 1;
        let c0 = self.tris.len() as u32;
        let c1 = c0 + 1;
        self.tris.push(Triangle {
            v: [m, v0, v1],
            generation: gen,
            parent: t,
            children: [NONE; 2],
        });
        self.tris.push(Triangle {
            v: [m, v2, v0],
            generation: gen,
            parent: t,
            children: [NONE; 2],
        });
        self.tris[t as usize].children = [c0, c1];
        self.attach(c0);
        self.attach(c1);
        self.n_active += 1;
    }

    /// Bisects active triangle `t`, recursively bisecting neighbors first so
    /// the mesh stays conforming. Recursion terminates for compatible bottom
    /// meshes (the neighbor chain has strictly decreasing generation).
    fn bisect(&mut self, t: u32, depth: u32) -> Result<(), MeshError> {
        if depth > 4096 {
            return Err(MeshError::ClosureDepth);
        }
        debug_assert!(self.is_active(t));
        let e = self.tris[t as usize].refinement_edge();
        if let Some(n) = self.other_active_across(e, t) {
            if self.tris[n as usize].refinement_edge() != e {
                self.bisect(n, depth + 1)?;
            }
        }
        // The active triangle across e (if any) now has e as refinement edge.
        let m = self.midpoint_of(e);
        let neighbor = self.other_active_across(e, t);
        self.split(t, m);
        if let Some(n) = neighbor {
            debug_assert_eq!(self.tris[n as usize].refinement_edge(), e);
            self.split(n, m);
        }
        Ok(())
    }

    /// Ensures the subtree below `t` is bisected for `gens` more generations
    /// (so `t` ends up with at least `2^gens` descendants).
    fn ensure_generations(&mut self, t: u32, gens: u32) -> Result<(), MeshError> {
        if gens == 0 {
            return Ok(());
        }
        if self.is_active(t) {
            self.bisect(t, 0)?;
        }
        let [c0, c1] = self.tris[t as usize].children;
        self.ensure_generations(c0, gens - 1)?;
        self.ensure_generations(c1, gens - 1)
    }

    /// `refine(τ, M)`: the smallest conforming NVB refinement in which every
    /// active triangle touching a marked vertex is replaced by at least four
    /// subtriangles (two generations of bisection plus conforming closure).
    pub fn refine(&mut self, marked: &[u32]) -> Result<(), MeshError> {
        let mut targets: Vec<u32> = Vec::new();
        for &z in marked {
            if z as usize >= self.points.len() {
                return Err(MeshError::UnknownVertex(z));
            }
            targets.extend_from_slice(&self.vertex_tris[z as usize]);
        }
        targets.sort_unstable();
        targets.dedup();
        for t in targets {
            self.ensure_generations(t, 2)?;
        }
        Ok(())
    }

    /// Bisects every active triangle twice; conforming without closure.
    pub fn uniform_refine(&mut self) -> Result<(), MeshError> {
        let targets: Vec<u32> = self.active_tris().collect();
        for t in targets {
            self.ensure_generations(t, 2)?;
        }
        Ok(())
    }

    /// Verifies conformity of the active mesh (each edge borders one or two
    /// active triangles, and the adjacency bookkeeping is consistent).
    pub fn check_conforming(&self) -> Result<(), MeshError> {
        let mut count: HashMap<(u32, u32), u32> = HashMap::new();
        for t in self.active_tris() {
            let v = self.tris[t as usize].v;
            for k in 0..3 {
                *count.entry(sorted(v[k], v[(k + 1) % 3])).or_insert(0) += 1;
            }
        }
        if count.len() != self.edges.len() {
            return Err(MeshError::NonConforming(NONE, NONE));
        }
        for (&e, &c) in &count {
            if c > 2 {
                return Err(MeshError::NonConforming(e.0, e.1));
            }
            let slot = self.edges.get(&e).ok_or(MeshError::NonConforming(e.0, e.1))?;
            let stored = 1 + (slot.t1 != NONE) as u32;
            if stored != c {
                return Err(MeshError::NonConforming(e.0, e.1));
            }
        }
        Ok(())
    }

    /// Smallest interior angle over the active triangles, in radians.
    pub fn min_angle(&self) -> f64 {
        let mut best = f64::INFINITY;
        for t in self.active_tris() {
            let [a, b, c] = self.tri_points(t);
            for (p, q, r) in [(a, b, c), (b, c, a), (c, a, b)] {
                let u = q.sub(p);
                let v = r.sub(p);
                let ang = (u.dot(v) / (u.norm() * v.norm())).clamp(-1.0, 1.0).acos();
                best = best.min(ang);
            }
        }
        best
    }

    /// JSON dump of the active mesh: vertex array plus
    /// `(v0, v1, v2, generation)` per triangle.
    pub fn dump_json(&self) -> String {
        #[derive(Serialize)]
        struct Dump {
            vertices: Vec<[f64; 2]>,
            triangles: Vec<[u32; 4]>,
        }
        let dump = Dump {
            vertices: self.points.iter().map(|p| [p.x, p.y]).collect(),
            triangles: self
                .active_tris()
                .map(|t| {
                    let tri = &self.tris[t as usize];
                    [tri.v[0], tri.v[1], tri.v[2], tri.generation]
                })
                .collect(),
        };
        serde_json::to_string(&dump).expect("mesh dump serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_tri_square(newest_on_diagonal: bool) -> Result<Triangulation, MeshError> {
        // Unit square split by the diagonal (0,0)-(1,1).
        let points = vec![
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(1.0, 1.0),
            Point::new(0.0, 1.0),
        ];
        let tris = if newest_on_diagonal {
            // Newest vertices off the diagonal: refinement edge = diagonal for both.
            [[1, 2, 0], [3, 0, 2]]
        } else {
            // One triangle keeps the diagonal, the other picks a boundary edge.
            [[1, 2, 0], [2, 3, 0]]
        };
        Triangulation::make_bottom_mesh(points, &tris)
    }

    #[test]
    fn square_shared_diagonal_is_valid() {
        let mesh = two_tri_square(true).unwrap();
        assert_eq!(mesh.n_active(), 2);
        mesh.check_conforming().unwrap();
    }

    #[test]
    fn square_mismatched_newest_vertices_errors() {
        let err = two_tri_square(false).unwrap_err();
        assert!(matches!(err, MeshError::IncompatibleAssignment(_, _)));
    }

    #[test]
    fn criss_cross_is_valid_and_conforming() {
        let mesh = Triangulation::criss_cross(1.5);
        assert_eq!(mesh.n_active(), 4);
        assert_eq!(mesh.n_vertices(), 5);
        mesh.check_conforming().unwrap();
        // Edge-count oracle: interior edges appear exactly twice among
        // triangle edge lists. Criss-cross has the 4 half-diagonals interior.
        assert_eq!(mesh.interior_edges().len(), 4);
        // Euler-style oracle: E = (3T + B)/2 where B = #boundary edges.
        let t = mesh.n_active();
        let b = mesh.all_edges().len() - mesh.interior_edges().len();
        assert_eq!(mesh.all_edges().len(), (3 * t + b) / 2);
    }

    #[test]
    fn refine_empty_marking_is_identity() {
        let mut mesh = Triangulation::criss_cross(1.5);
        mesh.refine(&[]).unwrap();
        assert_eq!(mesh.n_active(), 4);
    }

    #[test]
    fn refine_center_vertex_of_criss_cross() {
        let mut mesh = Triangulation::criss_cross(1.5);
        mesh.refine(&[4]).unwrap();
        mesh.check_conforming().unwrap();
        // Hand enumeration: each of the 4 triangles is bisected twice and no
        // closure beyond the marked patches is needed: 16 active triangles.
        assert_eq!(mesh.n_active(), 16);
        for t in mesh.active_tris() {
            assert_eq!(mesh.tri(t).generation, 2);
        }
    }

    #[test]
    fn uniform_refine_quadruples_and_quarters_areas() {
        let mut mesh = Triangulation::criss_cross(1.5);
        let parent_area = mesh.tri_area(0);
        mesh.uniform_refine().unwrap();
        mesh.check_conforming().unwrap();
        assert_eq!(mesh.n_active(), 16);
        for t in mesh.active_tris() {
            assert!((mesh.tri_area(t) - parent_area / 4.0).abs() < 1e-14);
        }
    }

    #[test]
    fn patch_of_center_and_corner() {
        let mesh = Triangulation::criss_cross(1.5);
        let center = mesh.patch_data(4).unwrap();
        assert_eq!(center.tris.len(), 4);
        assert_eq!(center.interior_edges.len(), 4);
        assert!((center.weight - 2.25).abs() < 1e-14);
        let corner = mesh.patch_data(0).unwrap();
        assert_eq!(corner.tris.len(), 2);
        // Both half-diagonals at the corner are interior edges; the two
        // boundary sides are on ∂ω_z.
        assert_eq!(corner.interior_edges.len(), 1);
        assert!(mesh.patch_data(99).is_err());
    }

    #[test]
    fn patch_weight_quarters_after_marking() {
        let mut mesh = Triangulation::criss_cross(1.5);
        mesh.uniform_refine().unwrap();
        let z = 4u32; // center vertex
        let before = mesh.patch_data(z).unwrap();
        let old_tris = before.tris.clone();
        let old_weight = before.weight;
        mesh.refine(&[z]).unwrap();
        // Every vertex whose new patch sits inside the old ω_z has weight
        // at most a quarter of the old one.
        for v in 0..mesh.n_vertices() as u32 {
            let patch = mesh.patch_data(v).unwrap();
            if patch.tris.is_empty() {
                continue;
            }
            let inside = patch
                .tris
                .iter()
                .all(|&t| old_tris.iter().any(|&a| mesh.is_descendant(t, a)));
            if inside {
                assert!(patch.weight <= 0.25 * old_weight + 1e-15);
            }
        }
    }

    #[test]
    fn interior_edge_count_euler_oracle() {
        let mut mesh = Triangulation::criss_cross(1.5);
        mesh.refine(&[4]).unwrap();
        mesh.refine(&[0]).unwrap();
        let t = mesh.n_active();
        let all = mesh.all_edges().len();
        let interior = mesh.interior_edges().len();
        let boundary = all - interior;
        assert_eq!(3 * t + boundary, 2 * all);
        // Euler: V - E + F = 1 for a disk (triangles only).
        assert_eq!(
            mesh.active_tris().count() as i64 - all as i64
                + mesh
                    .points()
                    .iter()
                    .enumerate()
                    .filter(|(v, _)| !mesh.tris_at_vertex(*v as u32).is_empty())
                    .count() as i64,
            1
        );
    }

    #[test]
    fn two_triangle_square_interior_edge_is_diagonal() {
        let mesh = two_tri_square(true).unwrap();
        let edges = mesh.interior_edges();
        assert_eq!(edges.len(), 1);
        assert_eq!(edges[0].v, (0, 2));
    }

    #[test]
    fn shape_regularity_preserved() {
        let mut mesh = Triangulation::criss_cross(1.5);
        let mut reference = Triangulation::criss_cross(1.5);
        reference.uniform_refine().unwrap();
        reference.uniform_refine().unwrap();
        let baseline = reference.min_angle();
        for k in 0..30 {
            let z = (k * 7 % mesh.n_vertices()) as u32;
            mesh.refine(&[z]).unwrap();
        }
        assert!(mesh.min_angle() >= baseline - 1e-12);
    }

    #[test]
    fn refinement_is_monotone() {
        let mut mesh = Triangulation::criss_cross(1.5);
        mesh.refine(&[4]).unwrap();
        let old_active: Vec<u32> = mesh.active_tris().collect();
        mesh.refine(&[0, 3]).unwrap();
        // Every previously active triangle is still in the forest and every
        // currently active triangle descends from one of them or a root.
        for t in mesh.active_tris() {
            let mut cur = t;
            let mut covered = false;
            loop {
                if old_active.contains(&cur) {
                    covered = true;
                    break;
                }
                match mesh.tri(cur).parent() {
                    Some(p) => cur = p,
                    None => break,
                }
            }
            assert!(covered || old_active.contains(&t));
        }
    }
}
