//! Quadrature rules: Gauss-Legendre on intervals (fixed and adaptive) and a
//! symmetric degree-4 rule on triangles, with optional uniform subdivision
//! for triangles flagged as crossing a data interface.

use crate::geom::Point;

/// Nodes/weights of `n`-point Gauss-Legendre on `[-1, 1]`, computed by Newton
/// iteration on the Legendre recurrence.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        // Initial guess (Chebyshev-like).
        let mut x = (std::f64::consts::PI * (k as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, dp) = legendre(n, x);
        out.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
    }
    out.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    out
}

fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for j in 2..=n {
        let p2 = ((2 * j - 1) as f64 * x * p1 - (j - 1) as f64 * p0) / j as f64;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// Integrates `f` over `[a, b]` with a fixed `n`-point Gauss rule.
pub fn integrate_gauss(f: &dyn Fn(f64) -> f64, a: f64, b: f64, nodes: &[(f64, f64)]) -> f64 {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut sum = 0.0;
    for &(x, w) in nodes {
        sum += w * f(mid + half * x);
    }
    sum * half
}

/// Adaptive composite Gauss: bisects panels until the 8-point and 16-point
/// answers agree to `tol` (relative to the running global magnitude), grading
/// automatically into integrable endpoint singularities.
pub fn integrate_adaptive(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    let g8 = gauss_legendre(8);
    let g16 = gauss_legendre(16);
    let scale = integrate_gauss(f, a, b, &g16).abs().max(1e-30);
    let mut total = 0.0;
    let mut stack = vec![(a, b, 0u32)];
    while let Some((lo, hi, depth)) = stack.pop() {
        let coarse = integrate_gauss(f, lo, hi, &g8);
        let fine = integrate_gauss(f, lo, hi, &g16);
        if (fine - coarse).abs() <= tol * scale.max(fine.abs()) || depth >= 52 {
            total += fine;
        } else {
            let mid = 0.5 * (lo + hi);
            stack.push((lo, mid, depth + 1));
            stack.push((mid, hi, depth + 1));
        }
    }
    total
}

/// Degree-4 symmetric triangle rule (6 points, positive weights); weights sum
/// to one and are applied to the physical triangle area.
pub const TRI_RULE_DEG4: [([f64; 3], f64); 6] = [
    (
        [0.816847572980459, 0.091576213509771, 0.091576213509771],
        0.109951743655322,
    ),
    (
        [0.091576213509771, 0.816847572980459, 0.091576213509771],
        0.109951743655322,
    ),
    (
        [0.091576213509771, 0.091576213509771, 0.816847572980459],
        0.109951743655322,
    ),
    (
        [0.108103018168070, 0.445948490915965, 0.445948490915965],
        0.223381589678011,
    ),
    (
        [0.445948490915965, 0.108103018168070, 0.445948490915965],
        0.223381589678011,
    ),
    (
        [0.445948490915965, 0.445948490915965, 0.108103018168070],
        0.223381589678011,
    ),
];

/// Integrates `f(point, barycentric)` over the triangle `(a, b, c)` with the
/// degree-4 rule, after `depth` levels of uniform subdivision (each level
/// splits every cell into 4 similar children). The barycentric argument
/// refers to the original triangle.
pub fn integrate_tri(
    a: Point,
    b: Point,
    c: Point,
    depth: u32,
    f: &mut dyn FnMut(Point, [f64; 3]) -> f64,
) -> f64 {
    integrate_tri_bary(
        a,
        b,
        c,
        [1.0, 0.0, 0.0],
        [0.0, 1.0, 0.0],
        [0.0, 0.0, 1.0],
        depth,
        f,
    )
}

#[allow(clippy::too_many_arguments)]
fn integrate_tri_bary(
    a: Point,
    b: Point,
    c: Point,
    la: [f64; 3],
    lb: [f64; 3],
    lc: [f64; 3],
    depth: u32,
    f: &mut dyn FnMut(Point, [f64; 3]) -> f64,
) -> f64 {
    if depth == 0 {
        let area = 0.5 * crate::geom::signed_area2(a, b, c).abs();
        let mut sum = 0.0;
        for (l, w) in TRI_RULE_DEG4 {
            let p = Point::new(
                l[0] * a.x + l[1] * b.x + l[2] * c.x,
                l[0] * a.y + l[1] * b.y + l[2] * c.y,
            );
            let bary = [
                l[0] * la[0] + l[1] * lb[0] + l[2] * lc[0],
                l[0] * la[1] + l[1] * lb[1] + l[2] * lc[1],
                l[0] * la[2] + l[1] * lb[2] + l[2] * lc[2],
            ];
            sum += w * f(p, bary);
        }
        return sum * area;
    }
    let mab = a.mid(b);
    let mbc = b.mid(c);
    let mca = c.mid(a);
    let lab = mid3(la, lb);
    let lbc = mid3(lb, lc);
    let lca = mid3(lc, la);
    integrate_tri_bary(a, mab, mca, la, lab, lca, depth - 1, f)
        + integrate_tri_bary(mab, b, mbc, lab, lb, lbc, depth - 1, f)
        + integrate_tri_bary(mca, mbc, c, lca, lbc, lc, depth - 1, f)
        + integrate_tri_bary(mab, mbc, mca, lab, lbc, lca, depth - 1, f)
}

fn mid3(u: [f64; 3], v: [f64; 3]) -> [f64; 3] {
    [0.5 * (u[0] + v[0]), 0.5 * (u[1] + v[1]), 0.5 * (u[2] + v[2])]
}

/// Compensated (Kahan) sum.
pub fn kahan_sum(values: impl Iterator<Item = f64>) -> f64 {
    let mut s = 0.0;
    let mut c = 0.0;
    for v in values {
        let y = v - c;
        let t = s + y;
        c = (t - s) - y;
        s = t;
    }
    s
}
