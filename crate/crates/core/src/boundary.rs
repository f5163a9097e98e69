//! The immersed closed curve `γ`, its uniform dyadic partitions `σ_i`, the
//! piecewise-constant multiplier spaces `Λ_{σ_i}`, and the multilevel
//! Haar-wavelet preconditioner for `H^{-1/2}(γ)`.
//!
//! The preconditioner is the Riesz map induced by a periodic piecewise
//! constant wavelet basis on the arc-length circle: the block of single-scale
//! functions on the bottom partition `σ_⊥`, plus Haar wavelets per dyadic
//! level, scaled so that the basis is (approximately) normalized in
//! `H^{-1/2}`. In single-scale coordinates the inverse preconditioner is
//! `𝐌⁻¹ = 𝐓 𝐓ᵀ`, with `𝐓` the wavelet-to-single-scale transform; both `𝐓`
//! and `𝐓ᵀ` are applied in linear time.

use serde::Serialize;

use crate::geom::Point;
use crate::quadrature::integrate_adaptive;

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum BoundaryError {
    #[error("curve needs at least 3 vertices")]
    TooFewVertices,
    #[error("curve must be oriented counterclockwise")]
    NotCounterclockwise,
    #[error("curve is not simple (self-intersection)")]
    NotSimple,
    #[error("degenerate curve segment {0}")]
    DegenerateSegment(usize),
    #[error("bottom partition needs n0 >= 2 (got {0})")]
    BottomTooCoarse(usize),
    #[error("partition level must be >= 1")]
    BadLevel,
    #[error("coefficient vector has length {got}, expected {expected}")]
    DimensionMismatch { got: usize, expected: usize },
    #[error("non-finite sample of boundary data")]
    NonFiniteSample,
}

/// Global scale of the wavelet basis, calibrated once against the spectral
/// bounds of the preconditioned approximate Schur complement so that the
/// damping β = 2.5 of the Richardson iteration sits inside its convergence
/// window (see `diagnostics::schur_spectrum`).
pub const WAVELET_SCALE: f64 = 0.27;

/// A closed polyline, counterclockwise, parametrized by arc length.
#[derive(Clone, Debug)]
pub struct BoundaryCurve {
    verts: Vec<Point>,
    /// Cumulative arc length; `cum[0] = 0`, `cum[n] = total length`.
    cum: Vec<f64>,
    total: f64,
}

impl BoundaryCurve {
    pub fn new(verts: Vec<Point>) -> Result<Self, BoundaryError> {
        let n = verts.len();
        if n < 3 {
            return Err(BoundaryError::TooFewVertices);
        }
        let mut cum = Vec::with_capacity(n + 1);
        cum.push(0.0);
        let mut area2 = 0.0;
        for k in 0..n {
            let a = verts[k];
            let b = verts[(k + 1) % n];
            let len = a.dist(b);
            if len == 0.0 {
                return Err(BoundaryError::DegenerateSegment(k));
            }
            cum.push(cum[k] + len);
            area2 += a.cross(b);
        }
        if area2 <= 0.0 {
            return Err(BoundaryError::NotCounterclockwise);
        }
        // Simplicity: no two non-adjacent segments may intersect.
        for i in 0..n {
            for j in i + 1..n {
                if j == i || (j + 1) % n == i || (i + 1) % n == j {
                    continue;
                }
                let (a, b) = (verts[i], verts[(i + 1) % n]);
                let (c, d) = (verts[j], verts[(j + 1) % n]);
                if segments_properly_intersect(a, b, c, d) {
                    return Err(BoundaryError::NotSimple);
                }
            }
        }
        Ok(Self {
            verts,
            total: cum[n],
            cum,
        })
    }

    pub fn len(&self) -> f64 {
        self.total
    }

    pub fn n_corners(&self) -> usize {
        self.verts.len()
    }

    /// Arc-length positions of the polyline corners, ascending in `[0, |γ|)`.
    pub fn corner_params(&self) -> &[f64] {
        &self.cum[..self.verts.len()]
    }

    pub fn corner(&self, k: usize) -> Point {
        self.verts[k]
    }

    /// Point at arc length `s` (taken modulo the total length).
    pub fn point_at(&self, s: f64) -> Point {
        let s = s.rem_euclid(self.total);
        let k = match self.cum.binary_search_by(|c| c.partial_cmp(&s).unwrap()) {
            Ok(k) => k.min(self.verts.len() - 1),
            Err(k) => k - 1,
        };
        let a = self.verts[k];
        let b = self.verts[(k + 1) % self.verts.len()];
        let t = (s - self.cum[k]) / (self.cum[k + 1] - self.cum[k]);
        a.lerp(b, t)
    }

    /// Straight legs as `(s_start, s_end, p_start, p_end)`.
    pub fn legs(&self) -> Vec<(f64, f64, Point, Point)> {
        let n = self.verts.len();
        (0..n)
            .map(|k| {
                (
                    self.cum[k],
                    self.cum[k + 1],
                    self.verts[k],
                    self.verts[(k + 1) % n],
                )
            })
            .collect()
    }

    pub fn bbox(&self) -> (Point, Point) {
        let mut lo = self.verts[0];
        let mut hi = self.verts[0];
        for p in &self.verts {
            lo.x = lo.x.min(p.x);
            lo.y = lo.y.min(p.y);
            hi.x = hi.x.max(p.x);
            hi.y = hi.y.max(p.y);
        }
        (lo, hi)
    }
}

fn segments_properly_intersect(a: Point, b: Point, c: Point, d: Point) -> bool {
    let d1 = b.sub(a).cross(c.sub(a));
    let d2 = b.sub(a).cross(d.sub(a));
    let d3 = d.sub(c).cross(a.sub(c));
    let d4 = d.sub(c).cross(b.sub(c));
    (d1 * d2 < 0.0) && (d3 * d4 < 0.0)
}

/// Uniform dyadic partition `σ_i` of `γ` into `2^{i-1}·n₀` equal arc-length
/// intervals, nested across levels.
#[derive(Clone, Copy, Debug)]
pub struct BoundaryPartition {
    pub n0: usize,
    pub level: u32,
    pub total_len: f64,
}

impl BoundaryPartition {
    pub fn new(curve: &BoundaryCurve, n0: usize, level: u32) -> Result<Self, BoundaryError> {
        if n0 < 2 {
            return Err(BoundaryError::BottomTooCoarse(n0));
        }
        if level < 1 {
            return Err(BoundaryError::BadLevel);
        }
        Ok(Self {
            n0,
            level,
            total_len: curve.len(),
        })
    }

    pub fn n_intervals(&self) -> usize {
        self.n0 << (self.level - 1)
    }

    pub fn interval_len(&self) -> f64 {
        self.total_len / self.n_intervals() as f64
    }

    pub fn breakpoint(&self, k: usize) -> f64 {
        k as f64 * self.interval_len()
    }

    pub fn breakpoints(&self) -> Vec<f64> {
        (0..=self.n_intervals()).map(|k| self.breakpoint(k)).collect()
    }

    /// Index of the interval containing arc length `s`.
    pub fn interval_of(&self, s: f64) -> usize {
        let s = s.rem_euclid(self.total_len);
        ((s / self.interval_len()) as usize).min(self.n_intervals() - 1)
    }
}

/// A piecewise-constant function on `γ`: one coefficient per interval of its
/// partition, with respect to the single-scale characteristic basis.
#[derive(Clone, Debug, PartialEq)]
pub struct MultiplierFn {
    pub partition: BoundaryPartition,
    pub coeffs: Vec<f64>,
}

impl MultiplierFn {
    pub fn zero(partition: BoundaryPartition) -> Self {
        Self {
            coeffs: vec![0.0; partition.n_intervals()],
            partition,
        }
    }

    pub fn new(partition: BoundaryPartition, coeffs: Vec<f64>) -> Result<Self, BoundaryError> {
        if coeffs.len() != partition.n_intervals() {
            return Err(BoundaryError::DimensionMismatch {
                got: coeffs.len(),
                expected: partition.n_intervals(),
            });
        }
        Ok(Self { partition, coeffs })
    }

    pub fn level(&self) -> u32 {
        self.partition.level
    }

    pub fn value_at(&self, s: f64) -> f64 {
        self.coeffs[self.partition.interval_of(s)]
    }

    /// Same function on the next-finer partition (coefficients duplicated).
    pub fn prolongate(&self) -> Self {
        let part = BoundaryPartition {
            n0: self.partition.n0,
            level: self.partition.level + 1,
            total_len: self.partition.total_len,
        };
        let mut coeffs = Vec::with_capacity(self.coeffs.len() * 2);
        for &c in &self.coeffs {
            coeffs.push(c);
            coeffs.push(c);
        }
        Self {
            partition: part,
            coeffs,
        }
    }

    pub fn prolongate_to(&self, level: u32) -> Self {
        assert!(level >= self.level());
        let mut cur = self.clone();
        while cur.level() < level {
            cur = cur.prolongate();
        }
        cur
    }

    /// `L₂(γ)`-orthogonal projection of `w` onto the partition: per-interval
    /// mean values by adaptive composite Gauss quadrature, split at the curve
    /// corners lying inside an interval.
    pub fn project_l2(
        w: &dyn Fn(f64) -> f64,
        partition: BoundaryPartition,
        corners: &[f64],
    ) -> Result<Self, BoundaryError> {
        let n = partition.n_intervals();
        let mut coeffs = Vec::with_capacity(n);
        for k in 0..n {
            let a = partition.breakpoint(k);
            let b = partition.breakpoint(k + 1);
            let mut splits = vec![a];
            for &c in corners {
                if c > a && c < b {
                    splits.push(c);
                }
            }
            splits.push(b);
            splits.sort_by(|x, y| x.partial_cmp(y).unwrap());
            let mut val = 0.0;
            for pair in splits.windows(2) {
                val += integrate_adaptive(w, pair[0], pair[1], 1e-12);
            }
            if !val.is_finite() {
                return Err(BoundaryError::NonFiniteSample);
            }
            coeffs.push(val / (b - a));
        }
        Self::new(partition, coeffs)
    }

    /// `∫_γ` of this function against `w` (for tests and diagnostics).
    pub fn integrate_against(&self, w: &dyn Fn(f64) -> f64, corners: &[f64]) -> f64 {
        let part = self.partition;
        let mut total = 0.0;
        for (k, &c) in self.coeffs.iter().enumerate() {
            let a = part.breakpoint(k);
            let b = part.breakpoint(k + 1);
            let mut splits = vec![a];
            for &s in corners {
                if s > a && s < b {
                    splits.push(s);
                }
            }
            splits.push(b);
            splits.sort_by(|x, y| x.partial_cmp(y).unwrap());
            for pair in splits.windows(2) {
                total += c * integrate_adaptive(w, pair[0], pair[1], 1e-12);
            }
        }
        total
    }

    pub fn dump_json(&self) -> String {
        #[derive(Serialize)]
        struct Dump<'a> {
            level: u32,
            coefficients: &'a [f64],
        }
        serde_json::to_string(&Dump {
            level: self.level(),
            coefficients: &self.coeffs,
        })
        .expect("multiplier dump serializes")
    }
}

/// Factored wavelet transform `𝐓_i` between wavelet coordinates and the
/// single-scale basis at level `i`, with its `H^{-1/2}` level scalings.
#[derive(Clone, Copy, Debug)]
pub struct WaveletTransform {
    pub n0: usize,
    pub level: u32,
    pub total_len: f64,
}

impl WaveletTransform {
    pub fn for_partition(partition: &BoundaryPartition) -> Self {
        Self {
            n0: partition.n0,
            level: partition.level,
            total_len: partition.total_len,
        }
    }

    pub fn dim(&self) -> usize {
        self.n0 << (self.level - 1)
    }

    /// Height scale of the bottom single-scale block.
    fn alpha0(&self) -> f64 {
        let h1 = self.total_len / self.n0 as f64;
        WAVELET_SCALE / h1.sqrt()
    }

    /// Height scale of the block-`b` Haar wavelets (`b ≥ 1`): the
    /// `L₂`-normalized Haar function on a `σ_b` interval times `2^{b/2}`.
    fn beta(&self, b: u32) -> f64 {
        let hb = self.total_len / (self.n0 as f64 * (1u64 << (b - 1)) as f64);
        WAVELET_SCALE * 2f64.powf(0.5 * b as f64) / hb.sqrt()
    }

    fn check_dim(&self, len: usize) -> Result<(), BoundaryError> {
        if len != self.dim() {
            return Err(BoundaryError::DimensionMismatch {
                got: len,
                expected: self.dim(),
            });
        }
        Ok(())
    }

    /// `𝐓 c`: wavelet coordinates to single-scale coefficients.
    pub fn synthesis(&self, c: &[f64]) -> Result<Vec<f64>, BoundaryError> {
        self.check_dim(c.len())?;
        let mut s: Vec<f64> = c[..self.n0].iter().map(|&x| x * self.alpha0()).collect();
        let mut off = self.n0;
        for b in 1..self.level {
            let nb = self.n0 << (b - 1);
            let beta = self.beta(b);
            let mut next = Vec::with_capacity(2 * nb);
            for k in 0..nb {
                let d = beta * c[off + k];
                next.push(s[k] + d);
                next.push(s[k] - d);
            }
            off += nb;
            s = next;
        }
        Ok(s)
    }

    /// `𝐓ᵀ r`: adjoint of the synthesis, applied to a dual (residual) vector.
    pub fn synthesis_t(&self, r: &[f64]) -> Result<Vec<f64>, BoundaryError> {
        self.check_dim(r.len())?;
        let mut out = vec![0.0; self.dim()];
        let mut cur = r.to_vec();
        for b in (1..self.level).rev() {
            let nb = self.n0 << (b - 1);
            let beta = self.beta(b);
            let off = block_offset(self.n0, b);
            let mut coarse = Vec::with_capacity(nb);
            for k in 0..nb {
                out[off + k] = beta * (cur[2 * k] - cur[2 * k + 1]);
                coarse.push(cur[2 * k] + cur[2 * k + 1]);
            }
            cur = coarse;
        }
        for k in 0..self.n0 {
            out[k] = self.alpha0() * cur[k];
        }
        Ok(out)
    }

    /// `𝐓⁻¹ m`: single-scale coefficients to wavelet coordinates.
    pub fn analysis(&self, m: &[f64]) -> Result<Vec<f64>, BoundaryError> {
        self.check_dim(m.len())?;
        let mut out = vec![0.0; self.dim()];
        let mut s = m.to_vec();
        for b in (1..self.level).rev() {
            let nb = self.n0 << (b - 1);
            let beta = self.beta(b);
            let off = block_offset(self.n0, b);
            let mut coarse = Vec::with_capacity(nb);
            for k in 0..nb {
                out[off + k] = (s[2 * k] - s[2 * k + 1]) / (2.0 * beta);
                coarse.push(0.5 * (s[2 * k] + s[2 * k + 1]));
            }
            s = coarse;
        }
        for k in 0..self.n0 {
            out[k] = s[k] / self.alpha0();
        }
        Ok(out)
    }

    /// `𝐌⁻¹ r = 𝐓 𝐓ᵀ r` together with the quadratic form `⟨𝐌⁻¹ r, r⟩`.
    pub fn apply_inverse(&self, r: &[f64]) -> Result<(Vec<f64>, f64), BoundaryError> {
        let tt = self.synthesis_t(r)?;
        let form = tt.iter().map(|x| x * x).sum();
        Ok((self.synthesis(&tt)?, form))
    }

    /// Quadratic form `(𝐌 μ)(μ) = ‖𝐓⁻¹ μ‖²` of the preconditioner itself.
    pub fn apply_form(&self, m: &[f64]) -> Result<f64, BoundaryError> {
        let c = self.analysis(m)?;
        Ok(c.iter().map(|x| x * x).sum())
    }
}

fn block_offset(n0: usize, b: u32) -> usize {
    // Block 0 holds n0 entries; block b >= 1 holds n0·2^{b-1} and starts
    // right after all previous blocks, which also totals n0·2^{b-1}.
    n0 << (b - 1)
}

/// `‖μ‖_{H^{-1/2}(γ)}`-equivalent norm: prolongate to `ref_level` and return
/// `√((𝐌 μ)(μ))` there.
pub fn h_minus_half_norm(mu: &MultiplierFn, ref_level: u32) -> f64 {
    let fine = mu.prolongate_to(ref_level.max(mu.level()));
    let transform = WaveletTransform::for_partition(&fine.partition);
    transform
        .apply_form(&fine.coeffs)
        .expect("dimensions agree by construction")
        .sqrt()
}

/// `H¹(γ)` norm of boundary data given by a closure of arc length, using
/// composite Gauss between curve corners and a central-difference tangential
/// derivative.
pub fn h1_norm(g: &dyn Fn(f64) -> f64, curve: &BoundaryCurve) -> f64 {
    let corners = curve.corner_params();
    let total = curve.len();
    let mut sq = 0.0;
    let h = 1e-6 * total;
    for k in 0..corners.len() {
        let a = corners[k];
        let b = if k + 1 < corners.len() { corners[k + 1] } else { total };
        sq += integrate_adaptive(&|s| g(s) * g(s), a, b, 1e-12);
        sq += integrate_adaptive(
            &|s| {
                let d = (g(s + h) - g(s - h)) / (2.0 * h);
                d * d
            },
            a + h,
            b - h,
            1e-10,
        );
    }
    sq.sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lshape::LShapeProblem;

    fn lshape_curve() -> BoundaryCurve {
        LShapeProblem::curve()
    }

    #[test]
    fn partition_counts_match_dyadic_rule() {
        let curve = lshape_curve();
        assert!((curve.len() - 8.0).abs() < 1e-14);
        let p1 = BoundaryPartition::new(&curve, 8, 1).unwrap();
        assert_eq!(p1.n_intervals(), 8);
        assert!((p1.interval_len() - 1.0).abs() < 1e-14);
        let p3 = BoundaryPartition::new(&curve, 8, 3).unwrap();
        assert_eq!(p3.n_intervals(), 32);
        let sum: f64 = (0..p3.n_intervals()).map(|_| p3.interval_len()).sum();
        assert!((sum - 8.0).abs() < 1e-12);
        assert!(BoundaryPartition::new(&curve, 1, 1).is_err());
    }

    #[test]
    fn partition_nesting() {
        let curve = lshape_curve();
        let coarse = BoundaryPartition::new(&curve, 8, 2).unwrap();
        let fine = BoundaryPartition::new(&curve, 8, 3).unwrap();
        let fine_breaks = fine.breakpoints();
        for b in coarse.breakpoints() {
            assert!(fine_breaks.iter().any(|&f| (f - b).abs() < 1e-13));
        }
    }

    #[test]
    fn prolongation_preserves_values_and_integrals() {
        let curve = lshape_curve();
        let part = BoundaryPartition::new(&curve, 8, 2).unwrap();
        let chi = MultiplierFn::new(part, (0..16).map(|k| k as f64).collect()).unwrap();
        let fine = chi.prolongate();
        assert_eq!(fine.coeffs.len(), 32);
        for k in 0..200 {
            let s = 8.0 * (k as f64 + 0.37) / 200.0;
            assert_eq!(chi.value_at(s), fine.value_at(s));
        }
        // ∫ χ μ ds invariant for a fixed μ.
        let mu = |s: f64| (0.7 * s).sin();
        let corners: Vec<f64> = curve.corner_params().to_vec();
        let i0 = chi.integrate_against(&mu, &corners);
        let i1 = fine.integrate_against(&mu, &corners);
        assert!((i0 - i1).abs() < 1e-9 * i0.abs().max(1.0));
    }

    #[test]
    fn project_constant_and_linear() {
        let curve = lshape_curve();
        let part = BoundaryPartition::new(&curve, 8, 1).unwrap();
        let c = MultiplierFn::project_l2(&|_| 3.25, part, curve.corner_params()).unwrap();
        for &v in &c.coeffs {
            assert!((v - 3.25).abs() < 1e-12);
        }
        // Linear in arc length on one interval -> midpoint value.
        let lin = MultiplierFn::project_l2(&|s| 2.0 * s - 1.0, part, curve.corner_params()).unwrap();
        assert!((lin.coeffs[0] - (2.0 * 0.5 - 1.0)).abs() < 1e-12);
    }

    #[test]
    fn project_exact_lambda_matches_graded_oracle() {
        let problem = LShapeProblem::new();
        let curve = lshape_curve();
        let part = BoundaryPartition::new(&curve, 8, 6).unwrap();
        let proj =
            MultiplierFn::project_l2(&|s| problem.lambda(s), part, curve.corner_params()).unwrap();
        // Oracle: 10^4-point composite midpoint rule per interval, graded
        // cubically toward the reentrant corner where λ ~ r^{-1/3}
        // (substitution s = end ± (b-a)·t³).
        for k in 0..part.n_intervals() {
            let a = part.breakpoint(k);
            let b = part.breakpoint(k + 1);
            let n = 10_000;
            let len = b - a;
            let from_high_end = a >= 4.0; // second leg: singularity at s = 8
            let mut acc = 0.0;
            for j in 0..n {
                let t = (j as f64 + 0.5) / n as f64;
                let s = if from_high_end {
                    b - len * t.powi(3)
                } else {
                    a + len * t.powi(3)
                };
                acc += problem.lambda(s) * 3.0 * len * t * t / n as f64;
            }
            let oracle = acc / len;
            let rel = (proj.coeffs[k] - oracle).abs() / oracle.abs().max(1e-14);
            assert!(
                rel < 1e-8 || (proj.coeffs[k] - oracle).abs() < 1e-12,
                "interval {k}: proj {} vs oracle {}",
                proj.coeffs[k],
                oracle
            );
        }
    }

    #[test]
    fn transform_roundtrip_is_identity() {
        let curve = lshape_curve();
        for level in 1..=6u32 {
            let part = BoundaryPartition::new(&curve, 8, level).unwrap();
            let t = WaveletTransform::for_partition(&part);
            let n = t.dim();
            let m: Vec<f64> = (0..n).map(|k| ((k * 37 + 11) % 17) as f64 - 8.0).collect();
            let c = t.analysis(&m).unwrap();
            let back = t.synthesis(&c).unwrap();
            for (x, y) in m.iter().zip(&back) {
                assert!((x - y).abs() < 1e-12 * (1.0 + x.abs()));
            }
        }
    }

    #[test]
    fn quadratic_forms_are_spd_and_mutually_inverse() {
        let curve = lshape_curve();
        let part = BoundaryPartition::new(&curve, 8, 4).unwrap();
        let t = WaveletTransform::for_partition(&part);
        let n = t.dim();
        let r: Vec<f64> = (0..n).map(|k| ((k * 13 + 5) % 23) as f64 / 7.0 - 1.0).collect();
        let (vec, form) = t.apply_inverse(&r).unwrap();
        assert!(form > 0.0);
        let zero = vec![0.0; n];
        assert_eq!(t.apply_inverse(&zero).unwrap().1, 0.0);
        // Round trip: (M (M⁻¹ r))(M⁻¹ r) = ⟨M⁻¹ r, r⟩.
        let back = t.apply_form(&vec).unwrap();
        assert!((back - form).abs() < 1e-12 * form);
        // Homogeneity of the direct form.
        let m: Vec<f64> = r.iter().map(|&x| 3.0 * x).collect();
        let f1 = t.apply_form(&r).unwrap();
        let f9 = t.apply_form(&m).unwrap();
        assert!((f9 - 9.0 * f1).abs() < 1e-12 * f9);
        assert!(t.apply_form(&vec![0.0; n + 1]).is_err());
    }

    #[test]
    fn h_minus_half_scales_like_haar_level() {
        let curve = lshape_curve();
        // L2-normalized Haar wavelet at level ℓ: ±1/√(2 h_ℓ) on the first two
        // intervals. Its H^{-1/2} norm should scale like 2^{-ℓ/2}.
        let mut scaled = Vec::new();
        for level in 2..=8u32 {
            let part = BoundaryPartition::new(&curve, 8, level).unwrap();
            let h = part.interval_len();
            let c = 1.0 / (2.0 * h).sqrt();
            let mut coeffs = vec![0.0; part.n_intervals()];
            coeffs[0] = c;
            coeffs[1] = -c;
            let mu = MultiplierFn::new(part, coeffs).unwrap();
            let norm = h_minus_half_norm(&mu, 10);
            scaled.push(norm * 2f64.powf(0.5 * level as f64));
        }
        let base = scaled[0];
        for v in &scaled {
            assert!(*v < 2.0 * base && *v > base / 2.0, "scaled norms {scaled:?}");
        }
    }

    #[test]
    fn h_minus_half_norm_homogeneous_and_zero() {
        let curve = lshape_curve();
        let part = BoundaryPartition::new(&curve, 8, 3).unwrap();
        let zero = MultiplierFn::zero(part);
        assert_eq!(h_minus_half_norm(&zero, 6), 0.0);
        let mu = MultiplierFn::new(part, (0..32).map(|k| (k as f64).sin()).collect()).unwrap();
        let n1 = h_minus_half_norm(&mu, 6);
        let mu2 = MultiplierFn::new(part, mu.coeffs.iter().map(|x| -2.5 * x).collect()).unwrap();
        let n2 = h_minus_half_norm(&mu2, 6);
        assert!((n2 - 2.5 * n1).abs() < 1e-12 * n2);
    }

    #[test]
    fn curve_validation() {
        assert!(BoundaryCurve::new(vec![Point::new(0.0, 0.0), Point::new(1.0, 0.0)]).is_err());
        // Clockwise square rejected.
        let cw = vec![
            Point::new(0.0, 0.0),
            Point::new(0.0, 1.0),
            Point::new(1.0, 1.0),
            Point::new(1.0, 0.0),
        ];
        assert_eq!(
            BoundaryCurve::new(cw).unwrap_err(),
            BoundaryError::NotCounterclockwise
        );
        // Self-intersecting bowtie rejected.
        let bowtie = vec![
            Point::new(0.0, 0.0),
            Point::new(1.0, 1.0),
            Point::new(1.0, 0.0),
            Point::new(0.0, 1.0),
        ];
        assert!(BoundaryCurve::new(bowtie).is_err());
    }

    #[test]
    fn point_at_walks_the_lshape() {
        let curve = lshape_curve();
        let p = curve.point_at(0.5);
        assert!((p.x - 0.0).abs() < 1e-14 && (p.y + 0.5).abs() < 1e-14);
        let q = curve.point_at(8.0); // wraps to the anchor corner
        assert!(q.dist(Point::new(0.0, 0.0)) < 1e-12);
    }
}
