//! Exponential-power-polynomial terms `P(A)·e^{aA}·A^b`.
//!
//! The family is closed under differentiation, which is what makes the
//! Rodrigues relation computable exactly: `dⁿ/dAⁿ [σⁿρ]` stays in the family
//! when `σ` is linear and `ρ` is an exponential times a power.

use alloc::vec::Vec;
use core::ops::Mul;

// inherent f64 methods win whenever std is in the build graph
#[allow(unused_imports)]
use num_traits::Float;

use crate::poly::{Poly, ZERO_TOL};
use crate::{Complex, Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct ExpPowerTerm {
    pub poly: Poly,
    /// Exponential rate `a`.
    pub rate: Complex,
    /// Power `b` of `A`, principal branch.
    pub power: Complex,
}

impl ExpPowerTerm {
    /// Builds a term in canonical form: a zero polynomial zeroes the whole
    /// term, and factors of `A` in the polynomial are moved into the power.
    pub fn new(poly: Poly, rate: Complex, power: Complex) -> Self {
        ExpPowerTerm { poly, rate, power }.normalized()
    }

    pub fn zero() -> Self {
        ExpPowerTerm {
            poly: Poly::zero(),
            rate: Complex::new(0.0, 0.0),
            power: Complex::new(0.0, 0.0),
        }
    }

    /// `e^{aA}·A^b`.
    pub fn monomial(rate: Complex, power: Complex) -> Self {
        Self::new(Poly::constant(Complex::new(1.0, 0.0)), rate, power)
    }

    pub fn from_poly(poly: Poly) -> Self {
        Self::new(poly, Complex::new(0.0, 0.0), Complex::new(0.0, 0.0))
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    fn normalized(self) -> Self {
        if self.poly.is_zero() {
            return Self::zero();
        }
        let scale = self.poly.scale();
        let lowest = self
            .poly
            .coeffs()
            .iter()
            .take_while(|c| c.norm() <= ZERO_TOL * scale)
            .count();
        if lowest == 0 {
            return self;
        }
        let coeffs: Vec<Complex> = self.poly.coeffs()[lowest..].to_vec();
        ExpPowerTerm {
            poly: Poly::new(coeffs),
            rate: self.rate,
            power: self.power + lowest as f64,
        }
    }

    /// `d/dA`, returned in canonical form.
    pub fn derive(&self) -> ExpPowerTerm {
        if self.is_zero() {
            return Self::zero();
        }
        let p = &self.poly;
        let inner = &p.derive() + &p.scaled(self.rate);
        let poly = &inner.shifted(1) + &p.scaled(self.power);
        Self::new(poly, self.rate, self.power - 1.0)
    }

    /// `P(z)·e^{az}·z^b` on the principal branch.
    pub fn eval(&self, z: Complex) -> Result<Complex> {
        if self.is_zero() {
            return Ok(Complex::new(0.0, 0.0));
        }
        Ok(self.poly.eval(z) * (self.rate * z).exp() * principal_pow(z, self.power)?)
    }

    /// Multiplies the polynomial part.
    pub fn mul_poly(&self, p: &Poly) -> ExpPowerTerm {
        Self::new(&self.poly * p, self.rate, self.power)
    }
}

impl Mul for &ExpPowerTerm {
    type Output = ExpPowerTerm;
    fn mul(self, rhs: &ExpPowerTerm) -> ExpPowerTerm {
        ExpPowerTerm::new(
            &self.poly * &rhs.poly,
            self.rate + rhs.rate,
            self.power + rhs.power,
        )
    }
}

/// Non-negative integer value of `b`, if it has one.
fn as_natural(b: Complex) -> Option<i32> {
    (b.im == 0.0 && b.re >= 0.0 && b.re.fract() == 0.0 && b.re < i32::MAX as f64)
        .then_some(b.re as i32)
}

/// `z^b` with the cut along the negative real axis.
pub fn principal_pow(z: Complex, b: Complex) -> Result<Complex> {
    if let Some(k) = as_natural(b) {
        return Ok(z.powi(k));
    }
    if z.re == 0.0 && z.im == 0.0 {
        return Err(Error::BranchPoint);
    }
    if b.im == 0.0 && b.re.fract() == 0.0 && b.re.abs() < i32::MAX as f64 {
        return Ok(z.powi(b.re as i32));
    }
    Ok((b * z.ln()).exp())
}

/// Free-function form of [`ExpPowerTerm::derive`].
pub fn ept_derive(t: &ExpPowerTerm) -> ExpPowerTerm {
    t.derive()
}

/// Free-function form of [`ExpPowerTerm::eval`].
pub fn ept_eval(t: &ExpPowerTerm, z: Complex) -> Result<Complex> {
    t.eval(z)
}
