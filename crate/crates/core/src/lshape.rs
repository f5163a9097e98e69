//! Manufactured test problem on the L-shaped physical domain
//! `(-1,1)² \ (-1,0)²` embedded in the box `(-1.5,1.5)²`.
//!
//! In polar coordinates centered at the reentrant corner, the exact solution
//! is `u = h(r) r^{2/3} sin(2/3(φ + π/2))` inside the L-shape and zero
//! outside, where `h` is a `C¹` cutoff equal to one for `r ≤ 1/4` and zero
//! for `r ≥ 3/4`. The boundary data is `g ≡ 0`; the multiplier is the jump
//! of the normal derivative across the curve, `λ = (2/3) h(r) r^{-1/3}`,
//! supported on the two legs meeting at the reentrant corner. The angular
//! factor vanishes on both reentrant edges, so `u` extends continuously by
//! zero and the forcing reduces to the cutoff terms
//! `f = -[2h' ∂_r v + (h'' + h'/r) v]` with the harmonic `v = r^{2/3} sin ψ`.

use std::f64::consts::PI;

use crate::boundary::BoundaryCurve;
use crate::fem::{BoundaryData, ExactSolution, SourceTerm};
use crate::geom::{dist_point_segment, Point};
use crate::quadrature::{gauss_legendre, integrate_adaptive, integrate_gauss};

/// Radial cutoff `h(r) = w(3/4-r) / (w(r-1/4) + w(3/4-r))`, `w(t) = t²·[t>0]`.
pub fn cutoff(r: f64) -> f64 {
    if r <= 0.25 {
        1.0
    } else if r >= 0.75 {
        0.0
    } else {
        let a = r - 0.25;
        let b = 0.75 - r;
        b * b / (a * a + b * b)
    }
}

/// `h'(r)`; on `(1/4, 3/4)` the quotient rule collapses to `-ab/(a²+b²)²`
/// using `a + b = 1/2`.
pub fn cutoff_d1(r: f64) -> f64 {
    if r <= 0.25 || r >= 0.75 {
        0.0
    } else {
        let a = r - 0.25;
        let b = 0.75 - r;
        let d = a * a + b * b;
        -a * b / (d * d)
    }
}

/// `h''(r) = (a-b)(a²+b²+4ab)/(a²+b²)³` on `(1/4, 3/4)`, zero outside;
/// discontinuous at the kinks (h is `C¹`, not `C²`).
pub fn cutoff_d2(r: f64) -> f64 {
    if r <= 0.25 || r >= 0.75 {
        0.0
    } else {
        let a = r - 0.25;
        let b = 0.75 - r;
        let d = a * a + b * b;
        (a - b) * (d + 4.0 * a * b) / (d * d * d)
    }
}

/// The manufactured problem with cached data norms.
#[derive(Clone, Debug)]
pub struct LShapeProblem {
    f_l2: f64,
}

impl Default for LShapeProblem {
    fn default() -> Self {
        Self::new()
    }
}

impl LShapeProblem {
    pub fn new() -> Self {
        // ‖f‖²_{L₂(Ω)} = (3π/4) ∫_{1/4}^{3/4} F(r)² r dr with the radial
        // factor F below; the angular integral of sin²ψ over the L-shape
        // sector is 3π/4.
        let g = gauss_legendre(128);
        let radial = integrate_gauss(
            &|r| {
                let fr = Self::radial_forcing(r);
                fr * fr * r
            },
            0.25,
            0.75,
            &g,
        );
        Self {
            f_l2: (0.75 * PI * radial).sqrt(),
        }
    }

    /// The boundary curve `γ` of the L-shape, counterclockwise, anchored at
    /// the reentrant corner `(0,0)`. Perimeter 8; corners at integer arc
    /// lengths `0, 1, 2, 4, 6, 7`.
    pub fn curve() -> BoundaryCurve {
        BoundaryCurve::new(vec![
            Point::new(0.0, 0.0),
            Point::new(0.0, -1.0),
            Point::new(1.0, -1.0),
            Point::new(1.0, 1.0),
            Point::new(-1.0, 1.0),
            Point::new(-1.0, 0.0),
        ])
        .expect("L-shape curve is valid")
    }

    /// Side half-width of the fictitious box `Ω = (-1.5, 1.5)²`.
    pub fn box_half_width() -> f64 {
        1.5
    }

    fn in_lshape(p: Point) -> bool {
        p.x.abs() < 1.0 && p.y.abs() < 1.0 && !(p.x <= 0.0 && p.y <= 0.0)
    }

    /// Radial factor of the forcing: `f = F(r)·sin(2/3(φ+π/2))` with
    /// `F(r) = -[(4/3) h' r^{-1/3} + (h'' + h'/r) r^{2/3}]`.
    fn radial_forcing(r: f64) -> f64 {
        let h1 = cutoff_d1(r);
        let h2 = cutoff_d2(r);
        -((4.0 / 3.0) * h1 * r.powf(-1.0 / 3.0) + (h2 + h1 / r) * r.powf(2.0 / 3.0))
    }

    pub fn eval_u(&self, p: Point) -> f64 {
        if !Self::in_lshape(p) {
            return 0.0;
        }
        let r = p.norm();
        if r == 0.0 {
            return 0.0;
        }
        let phi = p.y.atan2(p.x);
        let psi = (2.0 / 3.0) * (phi + 0.5 * PI);
        cutoff(r) * r.powf(2.0 / 3.0) * psi.sin()
    }

    pub fn eval_grad_u(&self, p: Point) -> Point {
        if !Self::in_lshape(p) {
            return Point::new(0.0, 0.0);
        }
        let r = p.norm();
        if r == 0.0 {
            return Point::new(0.0, 0.0);
        }
        let phi = p.y.atan2(p.x);
        let psi = (2.0 / 3.0) * (phi + 0.5 * PI);
        let h = cutoff(r);
        let dh = cutoff_d1(r);
        let ur = (dh * r.powf(2.0 / 3.0) + (2.0 / 3.0) * h * r.powf(-1.0 / 3.0)) * psi.sin();
        let ut_over_r = h * r.powf(-1.0 / 3.0) * (2.0 / 3.0) * psi.cos();
        let (sin_phi, cos_phi) = phi.sin_cos();
        Point::new(
            ur * cos_phi - ut_over_r * sin_phi,
            ur * sin_phi + ut_over_r * cos_phi,
        )
    }

    pub fn eval_f(&self, p: Point) -> f64 {
        if !Self::in_lshape(p) {
            return 0.0;
        }
        let r = p.norm();
        if r <= 0.25 || r >= 0.75 {
            return 0.0;
        }
        let phi = p.y.atan2(p.x);
        let psi = (2.0 / 3.0) * (phi + 0.5 * PI);
        Self::radial_forcing(r) * psi.sin()
    }

    /// Exact multiplier as a function of arc length: `(2/3) h(r) r^{-1/3}` on
    /// the two legs incident to the reentrant corner, zero elsewhere.
    pub fn lambda(&self, s: f64) -> f64 {
        let s = s.rem_euclid(8.0);
        let r = if s <= 1.0 {
            s
        } else if s >= 7.0 {
            8.0 - s
        } else {
            return 0.0;
        };
        (2.0 / 3.0) * cutoff(r) * r.powf(-1.0 / 3.0)
    }

    /// `|u|_{H¹(Ω)}` by separable polar quadrature (used by error oracles).
    pub fn u_h1_seminorm(&self) -> f64 {
        // |∇u|² = A(r)² sin²ψ + B(r)² cos²ψ; both angular integrals are 3π/4.
        let radial = integrate_adaptive(
            &|r: f64| {
                let h = cutoff(r);
                let dh = cutoff_d1(r);
                let a = dh * r.powf(2.0 / 3.0) + (2.0 / 3.0) * h * r.powf(-1.0 / 3.0);
                let b = (2.0 / 3.0) * h * r.powf(-1.0 / 3.0);
                (a * a + b * b) * r
            },
            1e-300,
            0.75,
            1e-12,
        );
        (0.75 * PI * radial).sqrt()
    }

    /// `‖λ‖_{L₂(γ)}` (occasionally useful as a scale reference).
    pub fn lambda_l2_norm(&self) -> f64 {
        let one_leg = integrate_adaptive(
            &|r: f64| {
                let l = (2.0 / 3.0) * cutoff(r) * r.powf(-1.0 / 3.0);
                l * l
            },
            1e-300,
            0.75,
            1e-12,
        );
        (2.0 * one_leg).sqrt()
    }
}

impl SourceTerm for LShapeProblem {
    fn eval(&self, p: Point) -> f64 {
        self.eval_f(p)
    }

    fn l2_norm(&self) -> f64 {
        self.f_l2
    }

    fn rough_on(&self, tri: [Point; 3]) -> bool {
        // f jumps across the circles r = 1/4 and r = 3/4.
        let origin = Point::new(0.0, 0.0);
        let dmax = tri.iter().map(|p| p.norm()).fold(0.0f64, f64::max);
        let inside = crate::geom::barycentric(origin, tri[0], tri[1], tri[2])
            .iter()
            .all(|&l| l >= 0.0);
        let dmin = if inside {
            0.0
        } else {
            dist_point_segment(origin, tri[0], tri[1])
                .min(dist_point_segment(origin, tri[1], tri[2]))
                .min(dist_point_segment(origin, tri[2], tri[0]))
        };
        (dmin < 0.25 && dmax > 0.25) || (dmin < 0.75 && dmax > 0.75)
    }
}

impl ExactSolution for LShapeProblem {
    fn grad_u(&self, p: Point) -> Point {
        self.eval_grad_u(p)
    }

    fn lambda(&self, s: f64) -> f64 {
        self.lambda(s)
    }

    fn u_h1_seminorm(&self) -> f64 {
        self.u_h1_seminorm()
    }
}

/// Homogeneous boundary data `g ≡ 0` used by the manufactured problem.
#[derive(Clone, Copy, Debug, Default)]
pub struct ZeroBoundaryData;

impl BoundaryData for ZeroBoundaryData {
    fn eval(&self, _s: f64) -> f64 {
        0.0
    }

    fn h1_norm(&self) -> f64 {
        0.0
    }
}
