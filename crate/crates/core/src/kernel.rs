//! Integral operators with the plate kernels `K(y, e)` and `G(y, e)`.
//!
//! Both kernels have the form
//!
//! ```text
//! k(y, e) = (p - 1) y e + y   for y <= e
//!         = (p - 1) y e + e   for y >  e
//! ```
//!
//! with `p = lambda` for `K` and `p = mu` for `G`. Splitting `int_0^1` at
//! `e = y` gives the image of a monomial in closed form:
//!
//! ```text
//! int_0^1 k(y, e) e^m de = [p/(m+2) + 1/((m+1)(m+2))] y - y^(m+2) / ((m+1)(m+2))
//! ```
//!
//! which is applied term by term, so no quadrature is involved.

use serde::{Deserialize, Serialize};

use crate::error::{PlateError, Result};
use crate::polyseries::PolySeries;
use crate::scalar::Real;

/// Edge condition of the circular plate at `y = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundaryKind {
    Clamped,
    MoveableClamped,
    SimpleSupport,
    SimpleHingedSupport,
}

impl std::str::FromStr for BoundaryKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "clamped" => Ok(BoundaryKind::Clamped),
            "moveable" | "moveable-clamped" => Ok(BoundaryKind::MoveableClamped),
            "simple" | "simple-support" => Ok(BoundaryKind::SimpleSupport),
            "hinged" | "simple-hinged-support" => Ok(BoundaryKind::SimpleHingedSupport),
            other => Err(format!(
                "unknown boundary '{other}' (expected clamped|moveable|simple|hinged)"
            )),
        }
    }
}

/// Boundary kind with its kernel parameters.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundarySpec {
    pub kind: BoundaryKind,
    pub lambda: f64,
    pub mu: f64,
    pub nu: f64,
}

impl BoundarySpec {
    pub fn new(kind: BoundaryKind, nu: f64) -> Result<Self> {
        if !(nu > 0.0 && nu < 0.5) {
            return Err(PlateError::Domain(format!(
                "Poisson ratio {nu} outside (0, 0.5)"
            )));
        }
        let (lambda, mu) = match kind {
            BoundaryKind::Clamped => (0.0, 2.0 / (1.0 - nu)),
            BoundaryKind::MoveableClamped => (0.0, 0.0),
            BoundaryKind::SimpleSupport => (2.0 / (1.0 + nu), 0.0),
            BoundaryKind::SimpleHingedSupport => (2.0 / (1.0 + nu), 2.0 / (1.0 - nu)),
        };
        Ok(Self {
            kind,
            lambda,
            mu,
            nu,
        })
    }

    /// Clamped edge with `nu = 0.3`.
    pub fn clamped() -> Self {
        Self::new(BoundaryKind::Clamped, 0.3).expect("0.3 is a valid Poisson ratio")
    }

    /// `int_0^1 load_forcing(e)/e de = (2 lambda + 1) / 4`.
    pub fn forcing_weight(&self) -> f64 {
        (2.0 * self.lambda + 1.0) / 4.0
    }
}

/// Applies `int_0^1 k(y, e) f(e) de` for a kernel with parameter `p`,
/// keeping at most degree `max_degree` of the output when given.
fn apply_kernel<T: Real>(f: &PolySeries<T>, p: f64, max_degree: Option<usize>) -> PolySeries<T> {
    if f.is_zero() {
        return PolySeries::zero();
    }
    let p = T::from_f64(p);
    let full = f.degree() + 3;
    let len = max_degree.map_or(full, |n| full.min(n + 1).max(2));
    let mut out = vec![T::ZERO; len];
    let mut linear = T::ZERO;
    for (m, &c) in f.coeffs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let m1 = T::from_usize(m + 1);
        let m2 = T::from_usize(m + 2);
        let inv = T::ONE / (m1 * m2);
        linear += c * (p / m2 + inv);
        if let Some(slot) = out.get_mut(m + 2) {
            *slot -= c * inv;
        }
    }
    out[1] += linear;
    PolySeries::new(out)
}

/// `int_0^1 K(y, e) f(e) de`
pub fn apply_k<T: Real>(f: &PolySeries<T>, b: &BoundarySpec) -> PolySeries<T> {
    apply_kernel(f, b.lambda, None)
}

/// `int_0^1 G(y, e) f(e) de`
pub fn apply_g<T: Real>(f: &PolySeries<T>, b: &BoundarySpec) -> PolySeries<T> {
    apply_kernel(f, b.mu, None)
}

/// [`apply_k`] followed by truncation to `order`, without forming the
/// discarded high-degree terms.
pub fn apply_k_truncated<T: Real>(
    f: &PolySeries<T>,
    b: &BoundarySpec,
    order: usize,
) -> PolySeries<T> {
    apply_kernel(f, b.lambda, Some(order))
}

pub fn apply_g_truncated<T: Real>(
    f: &PolySeries<T>,
    b: &BoundarySpec,
    order: usize,
) -> PolySeries<T> {
    apply_kernel(f, b.mu, Some(order))
}

/// Image of a unit load under `K`: `((lambda + 1) y - y^2) / 2`.
pub fn load_forcing<T: Real>(b: &BoundarySpec) -> PolySeries<T> {
    let half = T::from_f64(0.5);
    PolySeries::new(vec![
        T::ZERO,
        half * (T::from_f64(b.lambda) + T::ONE),
        -half,
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(c: &[f64]) -> PolySeries {
        PolySeries::from_f64_slice(c)
    }

    fn all_kinds() -> Vec<BoundarySpec> {
        [
            BoundaryKind::Clamped,
            BoundaryKind::MoveableClamped,
            BoundaryKind::SimpleSupport,
            BoundaryKind::SimpleHingedSupport,
        ]
        .into_iter()
        .map(|k| BoundarySpec::new(k, 0.3).unwrap())
        .collect()
    }

    #[test]
    fn boundary_parameters() {
        let c = BoundarySpec::clamped();
        assert_eq!((c.lambda, c.mu), (0.0, 2.0 / 0.7));
        let s = BoundarySpec::new(BoundaryKind::SimpleSupport, 0.3).unwrap();
        assert_eq!((s.lambda, s.mu), (2.0 / 1.3, 0.0));
        let h = BoundarySpec::new(BoundaryKind::SimpleHingedSupport, 0.25).unwrap();
        assert_eq!((h.lambda, h.mu), (2.0 / 1.25, 2.0 / 0.75));
        assert!(BoundarySpec::new(BoundaryKind::Clamped, 0.5).is_err());
        assert!(BoundarySpec::new(BoundaryKind::Clamped, 0.0).is_err());
        for b in all_kinds() {
            assert!(2.0 * b.lambda + 1.0 > 0.0);
        }
        assert_eq!(
            "hinged".parse::<BoundaryKind>().unwrap(),
            BoundaryKind::SimpleHingedSupport
        );
        assert!("free".parse::<BoundaryKind>().is_err());
    }

    #[test]
    fn unit_density_maps_to_load_forcing() {
        let moveable = BoundarySpec::new(BoundaryKind::MoveableClamped, 0.3).unwrap();
        let image = apply_k(&p(&[1.0]), &moveable);
        assert_eq!(image.coeffs(), &[0.0, 0.5, -0.5]);
        for b in all_kinds() {
            let diff = &apply_k(&p(&[1.0]), &b) - &load_forcing(&b);
            assert!(diff.max_abs_coeff() < 1e-15, "{diff:?}");
        }
        assert!(apply_k(&PolySeries::<f64>::zero(), &moveable).is_zero());
        assert!(apply_g(&PolySeries::<f64>::zero(), &moveable).is_zero());
    }

    #[test]
    fn linear_monomial_clamped() {
        let image = apply_k(&p(&[0.0, 1.0]), &BoundarySpec::clamped());
        assert!((image.coeff(1) - 1.0 / 6.0).abs() < 1e-16);
        assert_eq!(image.coeff(2), 0.0);
        assert!((image.coeff(3) + 1.0 / 6.0).abs() < 1e-16);
    }

    #[test]
    fn g_of_square_monomial_clamped() {
        let image = apply_g(&p(&[0.0, 0.0, 1.0]), &BoundarySpec::clamped());
        let mu = 2.0 / 0.7;
        assert!((image.coeff(1) - ((mu - 1.0) / 4.0 + 1.0 / 3.0)).abs() < 1e-15);
        assert!((image.coeff(1) - 0.797_619_047_619_047_6).abs() < 1e-15);
        assert!((image.coeff(4) + 1.0 / 12.0).abs() < 1e-16);
    }

    #[test]
    fn load_forcing_simple_support() {
        let b = BoundarySpec::new(BoundaryKind::SimpleSupport, 0.3).unwrap();
        let l: PolySeries = load_forcing(&b);
        assert!((l.coeff(1) - 0.5 * (2.0 / 1.3 + 1.0)).abs() < 1e-15);
        assert!((l.coeff(1) - 1.269_230_769_230_769).abs() < 1e-14);
        assert_eq!(l.coeff(2), -0.5);
        assert_eq!(l.unit_weighted_integral().unwrap(), b.forcing_weight());
    }

    #[test]
    fn truncated_apply_matches_full_then_truncate() {
        let f = p(&[0.3, -1.0, 2.0, 0.5, 0.25, -0.125]);
        let b = BoundarySpec::clamped();
        for order in [1, 2, 3, 5, 7, 20] {
            assert_eq!(
                apply_k_truncated(&f, &b, order),
                apply_k(&f, &b).truncate(order)
            );
            assert_eq!(
                apply_g_truncated(&f, &b, order),
                apply_g(&f, &b).truncate(order)
            );
        }
    }

    fn coeff_vec() -> impl Strategy<Value = Vec<f64>> {
        prop::collection::vec(-10.0f64..10.0, 1..=51)
    }

    proptest! {
        #[test]
        fn operators_are_linear(a in coeff_vec(), bcoef in coeff_vec(), alpha in -3.0f64..3.0, beta in -3.0f64..3.0, kind in 0usize..4) {
            let b = all_kinds()[kind];
            let (f, g) = (p(&a), p(&bcoef));
            let mut combo = f.scale(alpha);
            combo.add_scaled(&g, beta);
            for op in [apply_k::<f64>, apply_g::<f64>] {
                let lhs = op(&combo, &b);
                let mut rhs = op(&f, &b).scale(alpha);
                rhs.add_scaled(&op(&g, &b), beta);
                let scale = lhs.max_abs_coeff().max(rhs.max_abs_coeff()).max(1.0);
                for m in 0..=lhs.degree().max(rhs.degree()) {
                    prop_assert!((lhs.coeff(m) - rhs.coeff(m)).abs() <= 1e-12 * scale);
                }
            }
        }

        #[test]
        fn image_structure(a in coeff_vec(), kind in 0usize..4) {
            let b = all_kinds()[kind];
            let f = p(&a);
            let img = apply_k(&f, &b);
            prop_assert_eq!(img.evaluate(0.0).unwrap(), 0.0);
            if !f.is_zero() {
                prop_assert_eq!(img.degree(), f.degree() + 2);
                prop_assert_eq!(apply_g(&f, &b).degree(), f.degree() + 2);
            }
            // value at the edge is sum_m c_m lambda/(m+2)
            let edge: f64 = a.iter().enumerate().map(|(m, c)| c * b.lambda / (m as f64 + 2.0)).sum();
            let scale: f64 = a.iter().map(|c| c.abs()).sum::<f64>().max(1.0);
            prop_assert!((img.evaluate(1.0).unwrap() - edge).abs() <= 1e-13 * scale);
        }
    }
}
