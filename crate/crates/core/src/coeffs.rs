//! Coefficient functionals of the subordination subclass.
//!
//! For `f(z)/z = 1 / ((1 - ω)(1 - λω)) = 1 + Σ q_n(λ) ωⁿ` with
//! `q_n(λ) = 1 + λ + … + λⁿ`, the Taylor coefficients of `f` are polynomials
//! in the Schwarz coefficients `c1..c4`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::schwarz::CoeffTuple;

/// The class parameter `λ ∈ (0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Lambda(f64);

impl Lambda {
    pub fn new(value: f64) -> Result<Self> {
        if value > 0.0 && value <= 1.0 {
            Ok(Self(value))
        } else {
            Err(Error::InvalidLambda(value))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for Lambda {
    type Error = Error;

    fn try_from(value: f64) -> Result<Self> {
        Self::new(value)
    }
}

/// `1 + λ + … + λⁿ`, summed directly so that `λ = 1` needs no special case.
pub fn q(n: u32, lambda: Lambda) -> f64 {
    let l = lambda.value();
    let mut term = 1.0;
    let mut sum = 1.0;
    for _ in 0..n {
        term *= l;
        sum += term;
    }
    sum
}

/// Taylor coefficients `a2..a5` of `f`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ACoeffs {
    pub a2: Complex64,
    pub a3: Complex64,
    pub a4: Complex64,
    pub a5: Complex64,
}

/// Carathéodory coefficients of `p = (1 + ω) / (1 - ω)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PCoeffs {
    pub p1: Complex64,
    pub p2: Complex64,
    pub p3: Complex64,
    pub p4: Complex64,
}

impl PCoeffs {
    pub fn as_array(&self) -> [Complex64; 4] {
        [self.p1, self.p2, self.p3, self.p4]
    }
}

pub fn a_coeffs(lambda: Lambda, c: &CoeffTuple) -> ACoeffs {
    let (q1, q2, q3, q4) = (q(1, lambda), q(2, lambda), q(3, lambda), q(4, lambda));
    let CoeffTuple { c1, c2, c3, c4 } = *c;
    let c1_sq = c1 * c1;
    ACoeffs {
        a2: c1 * q1,
        a3: c2 * q1 + c1_sq * q2,
        a4: c3 * q1 + c1 * c2 * (2.0 * q2) + c1_sq * c1 * q3,
        a5: c4 * q1 + (c1 * c3 * 2.0 + c2 * c2) * q2 + c1_sq * c2 * (3.0 * q3) + c1_sq * c1_sq * q4,
    }
}

pub fn p_from_c(c: &CoeffTuple) -> PCoeffs {
    let CoeffTuple { c1, c2, c3, c4 } = *c;
    let c1_sq = c1 * c1;
    PCoeffs {
        p1: c1 * 2.0,
        p2: (c2 + c1_sq) * 2.0,
        p3: (c3 + c1 * c2 * 2.0 + c1_sq * c1) * 2.0,
        p4: (c4 + c1 * c3 * 2.0 + c2 * c2 + c1_sq * c2 * 3.0 + c1_sq * c1_sq) * 2.0,
    }
}

/// `a_n` of the extremal function `z / ((1 + z)(1 + λz))`, i.e.
/// `(-1)^(n-1) q_{n-1}(λ)`. `n = 0` is treated as `n = 1`.
pub fn extremal_coeff(lambda: Lambda, n: u32) -> f64 {
    let n = n.max(1);
    let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
    sign * q(n - 1, lambda)
}
