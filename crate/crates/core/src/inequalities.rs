//! Scalar analysis behind the final bound: the quadratic `F(λ, t)`, its
//! vertex, the critical parameter `λ0`, and the Prokhorov–Szynal estimate
//! `|c3 + μ c1 c2 + ν c1³| <= ν`.

use crate::coeffs::Lambda;
use crate::error::{Error, Result};
use crate::schwarz::CoeffTuple;

/// Coefficients of `F(λ, t) = a t² + b t + d`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Fpoly {
    pub lambda: Lambda,
    pub a: f64,
    pub b: f64,
    pub d: f64,
}

impl Fpoly {
    pub fn new(lambda: Lambda) -> Self {
        let l = lambda.value();
        let l2 = l * l;
        let l3 = l2 * l;
        let l4 = l2 * l2;
        Self {
            lambda,
            a: 3.0 * l4 * (3.0 * l2 - 2.0 * l - 1.0),
            b: 2.0 * l2 * (3.0 * l3 + 4.0 * l2 + 2.0 * l - 1.0),
            d: -l2 * (9.0 * l4 + 5.0 * l2 + 4.0 * l - 2.0),
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        (self.a * t + self.b) * t + self.d
    }

    /// Maximum of `F(λ, ·)` over `[0, 1]` as `(t, value)`.
    pub fn max_on_unit(&self) -> (f64, f64) {
        let mut best = (0.0, self.eval(0.0));
        let one = (1.0, self.eval(1.0));
        if one.1 > best.1 {
            best = one;
        }
        if self.a < 0.0 {
            let vertex = -self.b / (2.0 * self.a);
            if vertex > 0.0 && vertex < 1.0 {
                let v = self.eval(vertex);
                if v > best.1 {
                    best = (vertex, v);
                }
            }
        }
        best
    }
}

/// A value of `F` together with whether `t` was in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FEval {
    pub value: f64,
    pub t_in_range: bool,
}

pub fn f(lambda: Lambda, t: f64) -> FEval {
    FEval {
        value: Fpoly::new(lambda).eval(t),
        t_in_range: (0.0..=1.0).contains(&t),
    }
}

/// Vertex of `F(λ, ·)`:
/// `λ²(3λ³+4λ²+2λ-1) / (3λ⁴(1+2λ-3λ²))`.
pub fn t_star(lambda: Lambda) -> Result<f64> {
    let l = lambda.value();
    let den_factor = 1.0 + 2.0 * l - 3.0 * l * l;
    if l == 1.0 || den_factor == 0.0 {
        return Err(Error::Degenerate);
    }
    let l2 = l * l;
    Ok(l2 * (3.0 * l2 * l + 4.0 * l2 + 2.0 * l - 1.0) / (3.0 * l2 * l2 * den_factor))
}

/// `9λ⁴ - 3λ³ + λ² + 2λ - 1`.
pub fn lambda0_poly(x: f64) -> f64 {
    (((9.0 * x - 3.0) * x + 1.0) * x + 2.0) * x - 1.0
}

fn lambda0_poly_deriv(x: f64) -> f64 {
    ((36.0 * x - 9.0) * x + 2.0) * x + 2.0
}

const LAMBDA0_BRACKET: (f64, f64) = (0.3, 0.5);

/// The positive root of `9λ⁴ - 3λ³ + λ² + 2λ - 1`, by bisection on
/// `[0.3, 0.5]` followed by Newton polishing.
pub fn lambda0() -> f64 {
    let (mut lo, mut hi) = LAMBDA0_BRACKET;
    assert!(
        lambda0_poly(lo) < 0.0 && lambda0_poly(hi) > 0.0,
        "no sign change on the lambda0 bracket"
    );
    while hi - lo > 1e-9 {
        let mid = 0.5 * (lo + hi);
        if lambda0_poly(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut x = 0.5 * (lo + hi);
    for _ in 0..8 {
        let step = lambda0_poly(x) / lambda0_poly_deriv(x);
        let next = x - step;
        if !(lo..=hi).contains(&next) {
            break;
        }
        x = next;
        if step.abs() <= f64::EPSILON * x {
            break;
        }
    }
    x
}

/// `(√52 - 4) / 9`, the smallest `λ` for which [`ps_params`] falls in the
/// lemma region. It is the positive root of `9λ² + 8λ - 4`.
pub fn ps_threshold() -> f64 {
    (52f64.sqrt() - 4.0) / 9.0
}

/// `9λ² + 8λ - 4`; `ν - (μ² + 8)/12 = λ² (9λ² + 8λ - 4) / (4 (1 + λ)²)` for
/// the parameters of [`ps_params`].
pub fn ps_threshold_poly(x: f64) -> f64 {
    (9.0 * x + 8.0) * x - 4.0
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PSParams {
    pub mu: f64,
    pub nu: f64,
    pub in_region: bool,
}

/// `2 <= |μ| <= 4` and `ν >= (μ² + 8) / 12`.
pub fn ps_region(mu: f64, nu: f64) -> bool {
    (2.0..=4.0).contains(&mu.abs()) && nu >= (mu * mu + 8.0) / 12.0
}

/// `μ = 2 + 3λ²/(1+λ)`, `ν = 1 + 3λ³/(1+λ)`.
pub fn ps_params(lambda: Lambda) -> PSParams {
    let l = lambda.value();
    let mu = 2.0 + 3.0 * l * l / (1.0 + l);
    let nu = 1.0 + 3.0 * l * l * l / (1.0 + l);
    PSParams {
        mu,
        nu,
        in_region: ps_region(mu, nu),
    }
}

/// `|c3 + μ c1 c2 + ν c1³|`, for any real `μ, ν`.
pub fn ps_functional(mu: f64, nu: f64, c: &CoeffTuple) -> f64 {
    (c.c3 + c.c1 * c.c2 * mu + c.c1 * c.c1 * c.c1 * nu).norm()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn lam(x: f64) -> Lambda {
        Lambda::new(x).unwrap()
    }

    #[test]
    fn f_at_lambda_one_is_linear() {
        let p = Fpoly::new(lam(1.0));
        assert_eq!(p.a, 0.0);
        for (t, want) in [(0.0, -16.0), (0.5, -8.0), (1.0, 0.0)] {
            assert_abs_diff_eq!(f(lam(1.0), t).value, want, epsilon = 1e-14);
        }
    }

    #[test]
    fn f_vanishes_at_t_one() {
        for l in [0.41, 0.7, 0.9] {
            assert!(f(lam(l), 1.0).value.abs() <= 1e-12);
        }
    }

    #[test]
    fn f_positive_below_lambda0() {
        let l = lam(0.3);
        let t0 = t_star(l).unwrap();
        assert!(t0 < 1.0);
        let v = f(l, t0);
        assert!(v.value > 0.0 && v.t_in_range);
        assert!(!f(l, 1.5).t_in_range);
    }

    #[test]
    fn vertex_two_ways() {
        let l = lam(0.5);
        let p = Fpoly::new(l);
        assert_abs_diff_eq!(t_star(l).unwrap(), -p.b / (2.0 * p.a), epsilon = 1e-12);
        assert_eq!(t_star(lam(1.0)), Err(Error::Degenerate));
    }

    #[test]
    fn lambda0_root() {
        let x = lambda0();
        assert!(lambda0_poly(x).abs() <= 1e-14);
        assert_eq!(format!("{x:.6}"), "0.400436");
        assert!(lambda0_poly(0.3) < 0.0 && lambda0_poly(0.5) > 0.0);
        assert_abs_diff_eq!(t_star(lam(x)).unwrap(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn region_examples() {
        assert!(ps_region(2.0, 1.0));
        assert!(ps_region(-3.0, 2.0));
        assert!(!ps_region(5.0, 10.0));
        assert!(!ps_region(3.0, 1.0));
        assert!(!ps_region(1.5, 10.0));
    }

    #[test]
    fn params_examples() {
        let p = ps_params(lam(1.0));
        assert_eq!((p.mu, p.nu, p.in_region), (3.5, 2.5, true));
        assert!(!ps_params(lam(0.2)).in_region);

        let th = ps_threshold();
        assert!(ps_threshold_poly(th).abs() <= 1e-14);
        let p = ps_params(lam(th));
        assert_abs_diff_eq!(p.nu, (p.mu * p.mu + 8.0) / 12.0, epsilon = 1e-12);
        assert!(ps_params(lam(th + 1e-12)).in_region);
        assert!(!ps_params(lam(th - 1e-12)).in_region);
    }

    #[test]
    fn functional_examples() {
        assert_eq!(
            ps_functional(3.0, 1.7, &CoeffTuple::real(1.0, 0.0, 0.0, 0.3)),
            1.7
        );
        assert_eq!(
            ps_functional(3.0, 1.7, &CoeffTuple::real(0.0, 0.0, 1.0, 0.3)),
            1.0
        );
    }
}
