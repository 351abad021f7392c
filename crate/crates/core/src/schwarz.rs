//! Truncated Schwarz functions `ω(z) = c1 z + c2 z² + c3 z³ + c4 z⁴ + …`.
//!
//! A Schwarz function is determined (to the order studied here) by the
//! first four Schur parameters of `φ = ω / z`. The Schur recursion
//!
//! ```text
//! φ_0 = φ,  γ_k = φ_k(0),  φ_{k+1}(z) = (φ_k(z) - γ_k) / (z (1 - conj(γ_k) φ_k(z)))
//! ```
//!
//! is a bijection between the closed polydisk of parameters (with the
//! convention that a unimodular `γ_k` ends the sequence) and the body of
//! attainable tuples `(c1, c2, c3, c4)`. Running it forward decides
//! admissibility; running it backward charts the body.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::series;
use crate::tolerance::{ADMISSIBLE_SLACK, BOUNDARY_DEFECT};

/// Four Schur parameters of `ω(z)/z`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchurVector {
    gamma: [Complex64; 4],
    boundary: Option<usize>,
}

impl SchurVector {
    /// Validates `|γ_k| <= 1` (with [`ADMISSIBLE_SLACK`]) and records the
    /// first unimodular index, if any.
    pub fn new(gamma: [Complex64; 4]) -> Result<Self> {
        for (index, g) in gamma.iter().enumerate() {
            let modulus = g.norm();
            if !modulus.is_finite() || modulus > 1.0 + ADMISSIBLE_SLACK {
                return Err(Error::SchurOutOfDisk { index, modulus });
            }
        }
        Ok(Self {
            gamma,
            boundary: first_boundary(&gamma),
        })
    }

    /// Parameters are taken as given; no range check.
    fn raw(gamma: [Complex64; 4], boundary: Option<usize>) -> Self {
        Self { gamma, boundary }
    }

    pub fn gamma(&self) -> &[Complex64; 4] {
        &self.gamma
    }

    /// Index of the first parameter on the unit circle. Parameters after it
    /// do not influence the function.
    pub fn boundary(&self) -> Option<usize> {
        self.boundary
    }
}

fn first_boundary(gamma: &[Complex64; 4]) -> Option<usize> {
    gamma
        .iter()
        .position(|g| 1.0 - g.norm_sqr() < BOUNDARY_DEFECT)
}

/// Taylor coefficients `c1..c4` of a Schwarz function.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CoeffTuple {
    pub c1: Complex64,
    pub c2: Complex64,
    pub c3: Complex64,
    pub c4: Complex64,
}

impl CoeffTuple {
    pub fn new(c1: Complex64, c2: Complex64, c3: Complex64, c4: Complex64) -> Self {
        Self { c1, c2, c3, c4 }
    }

    /// Real coefficients, mostly useful in tests and examples.
    pub fn real(c1: f64, c2: f64, c3: f64, c4: f64) -> Self {
        Self::new(c1.into(), c2.into(), c3.into(), c4.into())
    }

    pub fn as_array(&self) -> [Complex64; 4] {
        [self.c1, self.c2, self.c3, self.c4]
    }

    pub fn from_array(c: [Complex64; 4]) -> Self {
        Self::new(c[0], c[1], c[2], c[3])
    }

    /// `[re c1, im c1, …, re c4, im c4]`.
    pub fn to_reals(&self) -> [f64; 8] {
        let mut out = [0.0; 8];
        for (k, c) in self.as_array().iter().enumerate() {
            out[2 * k] = c.re;
            out[2 * k + 1] = c.im;
        }
        out
    }

    pub fn from_reals(x: &[f64; 8]) -> Self {
        Self::new(
            Complex64::new(x[0], x[1]),
            Complex64::new(x[2], x[3]),
            Complex64::new(x[4], x[5]),
            Complex64::new(x[6], x[7]),
        )
    }
}

/// Inverse Schur recursion: the first four coefficients of the Schwarz
/// function whose Schur parameters are `g`.
pub fn schur_to_coeffs(g: &SchurVector) -> CoeffTuple {
    let last = g.boundary.unwrap_or(3);
    // φ_last truncated to 4 - last terms; a unimodular parameter makes it constant.
    let mut phi = vec![Complex64::default(); 4 - last];
    phi[0] = g.gamma[last];
    for k in (0..last).rev() {
        let n = 4 - k;
        let gk = g.gamma[k];
        let mut z_phi = vec![Complex64::default(); n];
        z_phi[1..].copy_from_slice(&phi[..n - 1]);
        let mut num = z_phi.clone();
        num[0] += gk;
        let mut den: Vec<Complex64> = z_phi.iter().map(|t| gk.conj() * t).collect();
        den[0] += 1.0;
        phi = series::div(&num, &den);
    }
    CoeffTuple::new(phi[0], phi[1], phi[2], phi[3])
}

/// Relative rounding noise carried into `γ_0`; each level of the forward
/// recursion divides it by `1 - |γ_k|²`.
const NOISE_SEED: f64 = 16.0 * f64::EPSILON;

/// Forward Schur recursion on `c1 + c2 z + c3 z² + c4 z³`.
///
/// Returns the recovered parameters and whether every one lies in the closed
/// disk. The slack on `|γ_k| <= 1` and on the tail test at a unimodular
/// parameter is [`ADMISSIBLE_SLACK`] or the propagated rounding noise of
/// level `k`, whichever is larger. When the flag is false the vector is only
/// diagnostic and need not satisfy the [`SchurVector`] invariants; parameters
/// after the point where the recursion stopped are zero.
pub fn coeffs_to_schur(c: &CoeffTuple) -> (SchurVector, bool) {
    let mut phi: Vec<Complex64> = c.as_array().to_vec();
    let mut gamma = [Complex64::default(); 4];
    let mut admissible = true;
    let mut boundary = None;
    let mut noise = NOISE_SEED;

    for k in 0..4 {
        let g = phi[0];
        gamma[k] = g;
        if !(g.re.is_finite() && g.im.is_finite()) {
            admissible = false;
            break;
        }
        if g.norm() > 1.0 + ADMISSIBLE_SLACK.max(noise) {
            admissible = false;
        }
        let tail = &phi[1..];
        let defect = 1.0 - g.norm_sqr();
        if defect < BOUNDARY_DEFECT {
            // A unimodular parameter forces φ_k to be constant.
            if admissible && series::norm(tail) < BOUNDARY_DEFECT.max(noise) {
                boundary = Some(k);
            } else {
                admissible = false;
            }
            break;
        }
        if tail.is_empty() {
            break;
        }
        let mut den: Vec<Complex64> = phi.iter().map(|t| -g.conj() * t).collect();
        den[0] += 1.0;
        phi = series::div(tail, &den);
        noise /= defect;
    }
    (SchurVector::raw(gamma, boundary), admissible)
}

/// True iff some Schwarz function has these first four coefficients.
pub fn is_admissible(c: &CoeffTuple) -> bool {
    coeffs_to_schur(c).1
}

/// Area-uniform point of the closed unit disk with the given modulus law.
fn disk_point<R: Rng>(rng: &mut R, radius: f64) -> Complex64 {
    let theta = rng.gen::<f64>() * std::f64::consts::TAU;
    Complex64::from_polar(radius, theta)
}

fn area_uniform<R: Rng>(rng: &mut R) -> Complex64 {
    let r = rng.gen::<f64>().sqrt();
    disk_point(rng, r)
}

/// Deterministic admissible tuples drawn through the Schur chart.
///
/// Each parameter is area-uniform in the disk. With `stratified`, draws are
/// assigned to strata by index modulo 10:
///
/// | index % 10 | stratum |
/// |---|---|
/// | 0 | `|γ0| = 1` (so `c = (γ0, 0, 0, 0)`) |
/// | 1 | `|γ0|` uniform in `[0.99, 0.999]` |
/// | 2 | `|γ1| = 1` |
/// | 3..9 | unconstrained |
pub fn sample(seed: u64, count: usize, stratified: bool) -> Result<Vec<CoeffTuple>> {
    if count == 0 {
        return Err(Error::EmptySample);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    for i in 0..count {
        let mut gamma = [Complex64::default(); 4];
        for g in gamma.iter_mut() {
            *g = area_uniform(&mut rng);
        }
        if stratified {
            match i % 10 {
                0 => gamma[0] = disk_point(&mut rng, 1.0),
                1 => {
                    let r = 0.99 + 0.009 * rng.gen::<f64>();
                    gamma[0] = disk_point(&mut rng, r);
                }
                2 => gamma[1] = disk_point(&mut rng, 1.0),
                _ => {}
            }
        }
        let g = SchurVector::new(gamma).expect("draws lie in the closed disk");
        out.push(schur_to_coeffs(&g));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn cx(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sv(g: [Complex64; 4]) -> SchurVector {
        SchurVector::new(g).unwrap()
    }

    fn assert_tuple(c: &CoeffTuple, want: [Complex64; 4], eps: f64) {
        for (a, b) in c.as_array().iter().zip(want.iter()) {
            assert!((a - b).norm() <= eps, "{a} vs {b}");
        }
    }

    #[test]
    fn unimodular_first_parameter_is_rotation() {
        let z = Complex64::default();
        let c = schur_to_coeffs(&sv([cx(1.0, 0.0), cx(0.7, 0.1), cx(-0.3, 0.0), z]));
        assert_tuple(&c, [cx(1.0, 0.0), z, z, z], 0.0);
    }

    #[test]
    fn second_parameter_unimodular_gives_z_squared() {
        let z = Complex64::default();
        let c = schur_to_coeffs(&sv([z, cx(1.0, 0.0), cx(0.5, 0.5), z]));
        assert_tuple(&c, [z, cx(1.0, 0.0), z, z], 0.0);
    }

    #[test]
    fn half_half_example() {
        // Exact rational expansion of (1/2 + z/2) / (1 + z/4).
        let z = Complex64::default();
        let c = schur_to_coeffs(&sv([cx(0.5, 0.0), cx(0.5, 0.0), z, z]));
        assert_tuple(
            &c,
            [
                cx(0.5, 0.0),
                cx(0.375, 0.0),
                cx(-3.0 / 32.0, 0.0),
                cx(3.0 / 128.0, 0.0),
            ],
            1e-15,
        );
        // c2 = γ1 (1 - |γ0|²)
        assert_abs_diff_eq!(c.c2.re, 0.5 * (1.0 - 0.25), epsilon = 1e-15);
    }

    #[test]
    fn complex_parameters_match_symbolic_expansion() {
        let g = [
            cx(0.3, 0.2),
            cx(-0.25, 0.5),
            cx(1.0 / 3.0, 0.0),
            cx(0.0, 0.4),
        ];
        let c = schur_to_coeffs(&sv(g));
        assert_tuple(
            &c,
            [
                cx(0.3, 0.2),
                cx(-87.0 / 400.0, 87.0 / 200.0),
                cx(4669.0 / 16000.0, 261.0 / 8000.0),
                cx(20851.0 / 1920000.0, 140969.0 / 960000.0),
            ],
            1e-14,
        );
    }

    #[test]
    fn forward_zero_and_boundary() {
        let (g, ok) = coeffs_to_schur(&CoeffTuple::default());
        assert!(ok);
        assert_eq!(g.gamma(), &[Complex64::default(); 4]);
        assert_eq!(g.boundary(), None);

        let (g, ok) = coeffs_to_schur(&CoeffTuple::real(1.0, 0.0, 0.0, 0.0));
        assert!(ok);
        assert_eq!(g.boundary(), Some(0));
        assert_eq!(g.gamma()[0], cx(1.0, 0.0));
    }

    #[test]
    fn forward_rejects_second_coefficient_too_large() {
        let (g, ok) = coeffs_to_schur(&CoeffTuple::real(0.9, 0.5, 0.0, 0.0));
        assert!(!ok);
        assert!(g.gamma()[1].norm() > 1.0);
        assert_abs_diff_eq!(g.gamma()[1].re, 0.5 / 0.19, epsilon = 1e-12);
    }

    #[test]
    fn admissibility_examples() {
        assert!(is_admissible(&CoeffTuple::real(0.3, 0.2, 0.1, 0.05)));
        assert!(!is_admissible(&CoeffTuple::real(1.0, 0.1, 0.0, 0.0)));
        assert!(is_admissible(&CoeffTuple::real(0.0, 0.0, 0.0, 1.0)));
        assert!(!is_admissible(&CoeffTuple::real(0.0, 0.0, 0.0, 1.01)));
        assert!(!is_admissible(&CoeffTuple::real(f64::NAN, 0.0, 0.0, 0.0)));
    }

    #[test]
    fn forward_parameters_of_real_example() {
        // γ1 = c2 / (1 - c1²) = 0.2 / 0.91
        let (g, ok) = coeffs_to_schur(&CoeffTuple::real(0.3, 0.2, 0.1, 0.05));
        assert!(ok);
        assert_abs_diff_eq!(g.gamma()[1].re, 0.2 / 0.91, epsilon = 1e-15);
        assert!(g.gamma().iter().all(|x| x.norm() < 1.0));
    }

    #[test]
    fn out_of_disk_parameter_rejected() {
        let z = Complex64::default();
        let err = SchurVector::new([z, cx(1.1, 0.0), z, z]).unwrap_err();
        assert_eq!(
            err,
            Error::SchurOutOfDisk {
                index: 1,
                modulus: 1.1
            }
        );
    }

    #[test]
    fn sample_is_deterministic_and_admissible() {
        let a = sample(7, 3, false).unwrap();
        let b = sample(7, 3, false).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, sample(8, 3, false).unwrap());
        for c in sample(11, 2000, true).unwrap() {
            assert!(is_admissible(&c), "{c:?}");
        }
    }

    #[test]
    fn stratified_sample_covers_extremal_region() {
        let s = sample(3, 1000, true).unwrap();
        let near = s.iter().filter(|c| c.c1.norm() > 0.99).count();
        assert!(near >= 100, "only {near} tuples with |c1| > 0.99");
    }

    #[test]
    fn sample_rejects_zero_count() {
        assert_eq!(sample(1, 0, true), Err(Error::EmptySample));
    }
}
