//! Independent oracles shared by the integration tests.

#![allow(dead_code)]

use plate_ham::{BoundaryKind, BoundarySpec};

pub const KINDS: [BoundaryKind; 4] = [
    BoundaryKind::Clamped,
    BoundaryKind::MoveableClamped,
    BoundaryKind::SimpleSupport,
    BoundaryKind::SimpleHingedSupport,
];

pub fn boundary(kind: BoundaryKind) -> BoundarySpec {
    BoundarySpec::new(kind, 0.3).unwrap()
}

/// Piecewise kernel with boundary parameter `p`, written from its definition.
pub fn kernel(p: f64, y: f64, e: f64) -> f64 {
    if y <= e {
        (p - 1.0) * y * e + y
    } else {
        (p - 1.0) * y * e + e
    }
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn adapt(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        left + right + delta / 15.0
    } else {
        adapt(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
            + adapt(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
    }
}

/// Adaptive Simpson quadrature of `f` on `[a, b]`.
pub fn quad(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    if b <= a {
        return 0.0;
    }
    let (fa, fm, fb) = (f(a), f(0.5 * (a + b)), f(b));
    let whole = simpson(a, b, fa, fm, fb);
    adapt(f, a, b, fa, fm, fb, whole, tol, 50)
}

/// `int_0^1 k(y, e) f(e) de`, split at the kink `e = y`.
pub fn kernel_image(p: f64, y: f64, f: &dyn Fn(f64) -> f64) -> f64 {
    let g = |e: f64| kernel(p, y, e) * f(e);
    quad(&g, 0.0, y, 1e-14) + quad(&g, y, 1.0, 1e-14)
}
