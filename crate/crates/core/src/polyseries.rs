//! Dense polynomials in `y` on `[0, 1]`.
//!
//! Every unknown of the plate problem (the slope variable `phi`, the membrane
//! variable `S`, the deformation terms and the deflection `W`) is carried as a
//! finite power series `sum_m c_m y^m`. The monomial basis is closed under all
//! the operators the solvers apply, so arithmetic here is exact up to rounding.

use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{PlateError, Result};
use crate::scalar::Real;

/// Coefficients with magnitude below this are flushed to zero.
pub const FLUSH_THRESHOLD: f64 = 1e-300;

/// Polynomial `sum_m coeffs[m] * y^m` in canonical form: the trailing
/// coefficient is nonzero, or the polynomial is the single coefficient `0`.
#[derive(Clone, Debug, PartialEq)]
pub struct PolySeries<T: Real = f64> {
    coeffs: Vec<T>,
}

impl<T: Real> Default for PolySeries<T> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<T: Real> PolySeries<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        let flush = T::from_f64(FLUSH_THRESHOLD);
        for c in coeffs.iter_mut() {
            if c.abs() < flush {
                *c = T::ZERO;
            }
        }
        while coeffs.len() > 1 && coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(T::ZERO);
        }
        Self { coeffs }
    }

    pub fn from_f64_slice(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| T::from_f64(c)).collect())
    }

    pub fn zero() -> Self {
        Self {
            coeffs: vec![T::ZERO],
        }
    }

    /// `c * y^power`
    pub fn monomial(c: T, power: usize) -> Self {
        let mut coeffs = vec![T::ZERO; power + 1];
        coeffs[power] = c;
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    /// Coefficient of `y^m`, zero beyond the degree.
    pub fn coeff(&self, m: usize) -> T {
        self.coeffs.get(m).copied().unwrap_or(T::ZERO)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_zero()
    }

    /// Index of the lowest nonzero coefficient; `None` for the zero polynomial.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    fn require_valuation(&self, op: &'static str, required: usize) -> Result<()> {
        match self.valuation() {
            Some(found) if found < required => Err(PlateError::Valuation {
                op,
                required,
                found,
            }),
            _ => Ok(()),
        }
    }

    /// Exact coefficient convolution.
    pub fn multiply(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![T::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (o, &b) in out[i..].iter_mut().zip(other.coeffs.iter()) {
                *o += a * b;
            }
        }
        Self::new(out)
    }

    pub fn scale(&self, factor: T) -> Self {
        Self::new(self.coeffs.iter().map(|&c| c * factor).collect())
    }

    /// `self += factor * other`
    pub fn add_scaled(&mut self, other: &Self, factor: T) {
        if self.coeffs.len() < other.coeffs.len() {
            self.coeffs.resize(other.coeffs.len(), T::ZERO);
        }
        for (s, &o) in self.coeffs.iter_mut().zip(other.coeffs.iter()) {
            *s += o * factor;
        }
        *self = Self::new(std::mem::take(&mut self.coeffs));
    }

    /// Shift every coefficient down two places; requires valuation >= 2.
    pub fn divide_by_y_squared(&self) -> Result<Self> {
        self.require_valuation("divide_by_y_squared", 2)?;
        if self.is_zero() {
            return Ok(Self::zero());
        }
        Ok(Self::new(self.coeffs[2..].to_vec()))
    }

    /// Multiply by `y^2` (inverse of [`divide_by_y_squared`](Self::divide_by_y_squared)).
    pub fn multiply_by_y_squared(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![T::ZERO, T::ZERO];
        coeffs.extend_from_slice(&self.coeffs);
        Self::new(coeffs)
    }

    /// Horner evaluation for `y` in `[0, 1]`.
    pub fn evaluate(&self, y: T) -> Result<T> {
        if !(y >= T::ZERO && y <= T::ONE) {
            return Err(PlateError::Domain(format!(
                "evaluation point {:?} outside [0, 1]",
                y
            )));
        }
        Ok(self.horner(y))
    }

    pub(crate) fn horner(&self, y: T) -> T {
        let mut iter = self.coeffs.iter().rev();
        let mut acc = *iter.next().expect("canonical series is never empty");
        for &c in iter {
            acc = acc * y + c;
        }
        acc
    }

    /// `int_0^1 f(e)/e de = sum_{m>=1} c_m / m`; requires valuation >= 1.
    pub fn unit_weighted_integral(&self) -> Result<T> {
        self.require_valuation("unit_weighted_integral", 1)?;
        Ok(self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(m, &c)| c / T::from_usize(m))
            .sum())
    }

    /// Deflection `W(y) = -int_y^1 phi(z)/z dz` of a slope series `phi`.
    ///
    /// The constant term is the negated Horner sum of the other coefficients
    /// at `y = 1`, so `evaluate(W, 1)` is exactly zero.
    pub fn deflection_from_phi(&self) -> Result<Self> {
        self.require_valuation("deflection_from_phi", 1)?;
        if self.is_zero() {
            return Ok(Self::zero());
        }
        let mut coeffs: Vec<T> = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(m, &c)| {
                if m == 0 {
                    T::ZERO
                } else {
                    c / T::from_usize(m)
                }
            })
            .collect();
        let mut edge = T::ZERO;
        let mut first = true;
        for &c in coeffs.iter().skip(1).rev() {
            edge = if first { c } else { edge + c };
            first = false;
        }
        coeffs[0] = -edge;
        Ok(Self::new(coeffs))
    }

    /// Drop every monomial of degree above `order`.
    pub fn truncate(&self, order: usize) -> Self {
        if self.degree() <= order {
            return self.clone();
        }
        Self::new(self.coeffs[..=order].to_vec())
    }

    /// Convert the coefficients to another scalar type.
    pub fn convert<U: Real>(&self) -> PolySeries<U> {
        PolySeries::new(
            self.coeffs
                .iter()
                .map(|&c| U::from_f64(c.to_f64()))
                .collect(),
        )
    }

    pub fn to_f64_vec(&self) -> Vec<f64> {
        self.coeffs.iter().map(|c| c.to_f64()).collect()
    }

    /// Largest absolute coefficient.
    pub fn max_abs_coeff(&self) -> T {
        self.coeffs
            .iter()
            .fold(T::ZERO, |m, &c| if c.abs() > m { c.abs() } else { m })
    }
}

impl<T: Real> Add for &PolySeries<T> {
    type Output = PolySeries<T>;

    fn add(self, rhs: Self) -> PolySeries<T> {
        let mut out = self.clone();
        out.add_scaled(rhs, T::ONE);
        out
    }
}

impl<T: Real> Sub for &PolySeries<T> {
    type Output = PolySeries<T>;

    fn sub(self, rhs: Self) -> PolySeries<T> {
        let mut out = self.clone();
        out.add_scaled(rhs, -T::ONE);
        out
    }
}

impl<T: Real> Mul for &PolySeries<T> {
    type Output = PolySeries<T>;

    fn mul(self, rhs: Self) -> PolySeries<T> {
        self.multiply(rhs)
    }
}

impl<T: Real> Neg for &PolySeries<T> {
    type Output = PolySeries<T>;

    fn neg(self) -> PolySeries<T> {
        self.scale(-T::ONE)
    }
}

impl<T: Real> std::iter::Sum for PolySeries<T> {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::zero(), |acc, p| &acc + &p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::DoubleDouble;
    use proptest::prelude::*;

    fn p(c: &[f64]) -> PolySeries {
        PolySeries::from_f64_slice(c)
    }

    #[test]
    fn canonical_form() {
        assert_eq!(p(&[1.0, 2.0, 0.0, 0.0]).coeffs(), &[1.0, 2.0]);
        assert_eq!(p(&[]).coeffs(), &[0.0]);
        assert_eq!(p(&[0.0, 0.0]).coeffs(), &[0.0]);
        assert_eq!(p(&[1.0, 1e-301, 1e-305]).coeffs(), &[1.0]);
        assert_eq!(p(&[0.0, 0.0, 3.0]).valuation(), Some(2));
        assert_eq!(PolySeries::<f64>::zero().valuation(), None);
    }

    #[test]
    fn multiply_examples() {
        let f = p(&[0.0, 1.0, -1.0]);
        assert_eq!(f.multiply(&f).coeffs(), &[0.0, 0.0, 1.0, -2.0, 1.0]);
        assert!(f.multiply(&PolySeries::zero()).is_zero());

        // (y + 2y^2)(3y) checked pointwise at 11 points
        let g = p(&[0.0, 1.0, 2.0]);
        let h = p(&[0.0, 3.0]);
        let prod = g.multiply(&h);
        assert_eq!(prod.coeffs(), &[0.0, 0.0, 3.0, 6.0]);
        for i in 0..=10 {
            let y = i as f64 / 10.0;
            let lhs = prod.evaluate(y).unwrap();
            let rhs = g.evaluate(y).unwrap() * h.evaluate(y).unwrap();
            assert!((lhs - rhs).abs() <= 1e-15 * rhs.abs().max(1.0));
        }
    }

    #[test]
    fn divide_by_y_squared_examples() {
        let f = p(&[0.0, 0.0, 1.0, -2.0, 1.0]);
        assert_eq!(f.divide_by_y_squared().unwrap().coeffs(), &[1.0, -2.0, 1.0]);
        assert!(PolySeries::<f64>::zero()
            .divide_by_y_squared()
            .unwrap()
            .is_zero());
        assert_eq!(
            p(&[0.0, 0.0, 0.0, 5.0])
                .divide_by_y_squared()
                .unwrap()
                .coeffs(),
            &[0.0, 5.0]
        );
        let err = p(&[0.0, 1.0]).divide_by_y_squared().unwrap_err();
        assert!(matches!(err, PlateError::Valuation { found: 1, .. }));
    }

    #[test]
    fn evaluate_examples() {
        assert_eq!(p(&[0.0, 1.0, -1.0]).evaluate(0.5).unwrap(), 0.25);
        assert_eq!(p(&[7.0, 1.0, -1.0]).evaluate(0.0).unwrap(), 7.0);
        assert_eq!(p(&[1.0, 2.0, 3.0]).evaluate(1.0).unwrap(), 6.0);
        assert!(p(&[1.0]).evaluate(1.5).is_err());
        assert!(p(&[1.0]).evaluate(-0.1).is_err());
        assert!(p(&[1.0]).evaluate(f64::NAN).is_err());
    }

    #[test]
    fn unit_weighted_integral_examples() {
        assert_eq!(p(&[0.0, 1.0, -1.0]).unit_weighted_integral().unwrap(), 0.5);
        assert_eq!(
            p(&[0.0, -10.0, 10.0]).unit_weighted_integral().unwrap(),
            -5.0
        );
        assert_eq!(
            PolySeries::<f64>::zero().unit_weighted_integral().unwrap(),
            0.0
        );
        assert!(p(&[1.0, 1.0]).unit_weighted_integral().is_err());
    }

    #[test]
    fn deflection_examples() {
        let w = p(&[0.0, 1.0, -1.0]).deflection_from_phi().unwrap();
        assert_eq!(w.coeffs(), &[-0.5, 1.0, -0.5]);
        assert_eq!(w.evaluate(0.0).unwrap(), -0.5);
        assert!(PolySeries::<f64>::zero()
            .deflection_from_phi()
            .unwrap()
            .is_zero());
        assert!(p(&[2.0, 1.0]).deflection_from_phi().is_err());

        // W(y) = -int_y^1 phi(z)/z dz against midpoint quadrature
        let phi = p(&[0.0, 0.3, -1.7, 0.25, 2.0]);
        let w = phi.deflection_from_phi().unwrap();
        let y0 = 0.2;
        let n = 20_000;
        let h = (1.0 - y0) / n as f64;
        let quad: f64 = (0..n)
            .map(|i| {
                let z = y0 + (i as f64 + 0.5) * h;
                phi.evaluate(z).unwrap() / z * h
            })
            .sum();
        assert!((w.evaluate(y0).unwrap() + quad).abs() < 1e-8);
    }

    #[test]
    fn truncate_examples() {
        let f = p(&[1.0, 1.0, 0.0, 0.0, 0.0, 1.0]);
        assert_eq!(f.truncate(3).coeffs(), &[1.0, 1.0]);
        assert_eq!(f.truncate(5), f);
        assert_eq!(f.truncate(50), f);
        let mut c = vec![0.0; 102];
        c[100] = 1.0;
        c[101] = 1.0;
        let g = p(&c).truncate(100);
        assert_eq!(g.degree(), 100);
        assert_eq!(g.coeff(100), 1.0);
    }

    #[test]
    fn extended_precision_deflection_edge_is_exact() {
        let phi: PolySeries<DoubleDouble> =
            PolySeries::from_f64_slice(&[0.0, 0.1, 0.7, -0.3, 1.0 / 3.0]);
        let w = phi.deflection_from_phi().unwrap();
        assert_eq!(w.evaluate(DoubleDouble::ONE).unwrap(), DoubleDouble::ZERO);
    }

    fn coeff_vec(max_len: usize) -> impl Strategy<Value = Vec<f64>> {
        prop::collection::vec(-10.0f64..10.0, 1..=max_len)
    }

    fn int_coeff_vec() -> impl Strategy<Value = Vec<f64>> {
        prop::collection::vec((-20i32..=20).prop_map(f64::from), 1..=21)
    }

    proptest! {
        #[test]
        fn product_matches_pointwise_product(a in coeff_vec(51), b in coeff_vec(51)) {
            let (f, g) = (p(&a), p(&b));
            let fg = f.multiply(&g);
            let abs_f = PolySeries::<f64>::new(a.iter().map(|c| c.abs()).collect());
            let abs_g = PolySeries::<f64>::new(b.iter().map(|c| c.abs()).collect());
            for i in 0..=100 {
                let y = i as f64 / 100.0;
                let lhs = fg.evaluate(y).unwrap();
                let rhs = f.evaluate(y).unwrap() * g.evaluate(y).unwrap();
                // relative to |f|(y)|g|(y), the conditioning of both sides
                let scale = abs_f.evaluate(y).unwrap() * abs_g.evaluate(y).unwrap();
                prop_assert!((lhs - rhs).abs() <= 1e-12 * scale.max(1e-300));
            }
        }

        #[test]
        fn integer_products_are_exact_and_commutative(a in int_coeff_vec(), b in int_coeff_vec(), c in int_coeff_vec()) {
            let (f, g, h) = (p(&a), p(&b), p(&c));
            prop_assert_eq!(f.multiply(&g), g.multiply(&f));
            prop_assert_eq!(f.multiply(&g).multiply(&h), f.multiply(&g.multiply(&h)));
        }

        #[test]
        fn real_products_commute_and_associate(a in coeff_vec(20), b in coeff_vec(20), c in coeff_vec(20)) {
            let (f, g, h) = (p(&a), p(&b), p(&c));
            let fg = f.multiply(&g);
            let gf = g.multiply(&f);
            prop_assert_eq!(fg.degree(), gf.degree());
            let left = fg.multiply(&h);
            let right = f.multiply(&g.multiply(&h));
            let scale = left.max_abs_coeff().max(1.0);
            for m in 0..=left.degree().max(right.degree()) {
                prop_assert!((fg.coeff(m) - gf.coeff(m)).abs() <= 1e-13 * fg.max_abs_coeff().max(1.0));
                prop_assert!((left.coeff(m) - right.coeff(m)).abs() <= 1e-13 * scale * 10.0);
            }
        }

        #[test]
        fn y_squared_shift_round_trips(a in coeff_vec(40)) {
            let f = p(&a);
            prop_assert_eq!(f.multiply_by_y_squared().divide_by_y_squared().unwrap(), f.clone());
            let y2 = p(&[0.0, 0.0, 1.0]);
            prop_assert_eq!(f.multiply(&y2).divide_by_y_squared().unwrap(), f);
        }

        #[test]
        fn deflection_vanishes_at_edge(a in coeff_vec(60)) {
            let mut c = a;
            c[0] = 0.0;
            let w = p(&c).deflection_from_phi().unwrap();
            prop_assert_eq!(w.evaluate(1.0).unwrap(), 0.0);
        }

        #[test]
        fn valuation_adds_under_product(a in coeff_vec(10), b in coeff_vec(10), sa in 0usize..4, sb in 0usize..4) {
            let mut ca = vec![0.0; sa];
            ca.extend(a.iter().map(|x| x + 11.0));
            let mut cb = vec![0.0; sb];
            cb.extend(b.iter().map(|x| x + 11.0));
            let (f, g) = (p(&ca), p(&cb));
            let fg = f.multiply(&g);
            prop_assert_eq!(fg.valuation(), Some(sa + sb));
            prop_assert_eq!(fg.degree(), f.degree() + g.degree());
        }
    }
}
