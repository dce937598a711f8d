//! Dense polynomials with complex coefficients.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Mul, Neg, Sub};

use crate::{Complex, Error, Result};

/// Relative size below which a sum counts as complete cancellation.
pub const ZERO_TOL: f64 = 1e-14;

/// Polynomial `c₀ + c₁s + … + c_d s^d`, coefficients stored in ascending degree.
///
/// Trailing zeros are trimmed on construction, so the empty vector is the
/// only representation of zero. Arithmetic flushes a coefficient to exactly
/// zero when it is below `1e-14` of the terms that were summed to produce
/// it. A small coefficient is only treated as zero if it came from
/// cancellation, never because the others are large: `1 + 10⁻¹⁶s⁸` is a
/// legitimate degree-8 polynomial after rescaling `s`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Poly {
    coeffs: Vec<Complex>,
}

impl Poly {
    /// Builds a polynomial, trimming negligible trailing coefficients.
    ///
    /// Panics on NaN or infinite coefficients; use [`Poly::try_new`] to get
    /// an error instead.
    pub fn new(coeffs: Vec<Complex>) -> Self {
        Self::try_new(coeffs).expect("polynomial coefficients must be finite")
    }

    pub fn try_new(coeffs: Vec<Complex>) -> Result<Self> {
        if coeffs
            .iter()
            .any(|c| !c.re.is_finite() || !c.im.is_finite())
        {
            return Err(Error::NonFinite);
        }
        let mut p = Poly { coeffs };
        p.trim();
        Ok(p)
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Complex::new(c, 0.0)).collect())
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: Complex) -> Self {
        Self::new(vec![c])
    }

    /// The monomial `s`.
    pub fn identity() -> Self {
        Self::from_real(&[0.0, 1.0])
    }

    fn trim(&mut self) {
        while self
            .coeffs
            .last()
            .is_some_and(|c| c.re == 0.0 && c.im == 0.0)
        {
            self.coeffs.pop();
        }
    }

    pub fn coeffs(&self) -> &[Complex] {
        &self.coeffs
    }

    /// Coefficient of `s^i`; zero past the degree.
    pub fn coeff(&self, i: usize) -> Complex {
        self.coeffs.get(i).copied().unwrap_or_default()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Largest coefficient modulus.
    pub fn scale(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Horner evaluation.
    pub fn eval(&self, z: Complex) -> Complex {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    /// Formal derivative.
    pub fn derive(&self) -> Poly {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| c * i as f64)
                .collect(),
        )
    }

    pub fn scaled(&self, k: Complex) -> Poly {
        Poly::new(self.coeffs.iter().map(|&c| c * k).collect())
    }

    /// Multiplies by `s^k`.
    pub fn shifted(&self, k: usize) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![Complex::new(0.0, 0.0); k];
        coeffs.extend_from_slice(&self.coeffs);
        Poly { coeffs }
    }

    /// Both roots of a linear or quadratic polynomial.
    ///
    /// A linear input returns its single root twice. Roots are ordered by
    /// real part, then imaginary part.
    pub fn quadratic_roots(&self) -> Result<(Complex, Complex)> {
        let (r1, r2) = match self.degree() {
            Some(1) => {
                let r = -self.coeff(0) / self.coeff(1);
                (r, r)
            }
            Some(2) => {
                let (a, b, c) = (self.coeff(2), self.coeff(1), self.coeff(0));
                let sq = (b * b - a * c * 4.0).sqrt();
                // pick the sign that avoids cancellation in b ± sq
                let sign = if (b.conj() * sq).re >= 0.0 { 1.0 } else { -1.0 };
                let q = -(b + sq * sign) * 0.5;
                if q.norm() == 0.0 {
                    (Complex::new(0.0, 0.0), Complex::new(0.0, 0.0))
                } else {
                    (q / a, c / q)
                }
            }
            degree => return Err(Error::Degree { degree }),
        };
        let key = |z: &Complex| (z.re, z.im);
        if key(&r2) < key(&r1) {
            Ok((r2, r1))
        } else {
            Ok((r1, r2))
        }
    }
}

/// Free-function form of [`Poly::eval`].
pub fn poly_eval(p: &Poly, z: Complex) -> Complex {
    p.eval(z)
}

/// Free-function form of [`Poly::derive`].
pub fn poly_derive(p: &Poly) -> Poly {
    p.derive()
}

/// Free-function form of [`Poly::quadratic_roots`].
pub fn quadratic_roots(p: &Poly) -> Result<(Complex, Complex)> {
    p.quadratic_roots()
}

/// `sum`, or exact zero if it is rounding residue of terms totalling `size`.
fn flush(sum: Complex, size: f64) -> Complex {
    if sum.norm() <= ZERO_TOL * size {
        Complex::new(0.0, 0.0)
    } else {
        sum
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new(
            (0..n)
                .map(|i| {
                    let (a, b) = (self.coeff(i), rhs.coeff(i));
                    flush(a + b, a.norm() + b.norm())
                })
                .collect(),
        )
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self + &(-rhs)
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let len = self.coeffs.len() + rhs.coeffs.len() - 1;
        let mut out = vec![Complex::new(0.0, 0.0); len];
        let mut size = vec![0.0; len];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
                size[i + j] += a.norm() * b.norm();
            }
        }
        Poly::new(
            out.into_iter()
                .zip(size)
                .map(|(c, s)| flush(c, s))
                .collect(),
        )
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::new(self.coeffs.iter().map(|&c| -c).collect())
    }
}
