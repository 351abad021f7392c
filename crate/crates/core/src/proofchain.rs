//! The quadratic-form argument for the fifth coefficient.
//!
//! For a Carathéodory function `p = 1 + p1 z + p2 z² + …` and any finitely
//! supported sequence `z_0..z_K`, the Leverenz form
//!
//! ```text
//! Σ_j |2 z_j + Σ_{k>=1} p_k z_{k+j}|² - |Σ_{k>=0} p_{k+1} z_{k+j}|²
//! ```
//!
//! is nonnegative. With `K = 3` and the witness of [`witness`] the `j = 0`
//! negative term is `L = 4|a5|²`, and the rest `R` is bounded step by step
//! until it reaches `4 q4(λ)²`; [`chain`] records every step.

use num_complex::Complex64;

use crate::coeffs::{a_coeffs, p_from_c, q, Lambda, PCoeffs};
use crate::error::{Error, Result};
use crate::inequalities::{lambda0, ps_threshold, Fpoly};
use crate::schwarz::CoeffTuple;
use crate::tolerance::{le, RELATIVE};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WitnessVector {
    pub z0: Complex64,
    pub z1: Complex64,
    pub z2: Complex64,
    pub z3: Complex64,
}

impl WitnessVector {
    pub fn as_array(&self) -> [Complex64; 4] {
        [self.z0, self.z1, self.z2, self.z3]
    }
}

/// A real quantity with a stable name, used in reports.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NamedValue {
    pub name: &'static str,
    pub value: f64,
}

/// Truncated Leverenz form with `z_k = 0` for `k > K`, where
/// `p = (p_1..p_{K+1})` and `z = (z_0..z_K)`.
pub fn leverenz_form(p: &[Complex64], z: &[Complex64]) -> Result<f64> {
    if p.len() != z.len() {
        return Err(Error::LengthMismatch {
            p: p.len(),
            z: z.len(),
        });
    }
    if z.is_empty() {
        return Err(Error::EmptySequence);
    }
    let big_k = z.len() - 1;
    let mut total = 0.0;
    for j in 0..=big_k {
        // p[k - 1] is p_k.
        let mut plus = z[j] * 2.0;
        for k in 1..=(big_k - j) {
            plus += p[k - 1] * z[k + j];
        }
        let mut minus = Complex64::default();
        for k in 0..=(big_k - j) {
            minus += p[k] * z[k + j];
        }
        total += plus.norm_sqr() - minus.norm_sqr();
    }
    Ok(total)
}

/// `z0 = λ²(1-λ)² c1³`, `z1 = λ² c2 + (3λ³ - 2λ²) c1²`, `z2 = 2λ² c1`,
/// `z3 = 1 + λ`.
pub fn witness(lambda: Lambda, c: &CoeffTuple) -> WitnessVector {
    let l = lambda.value();
    let l2 = l * l;
    let c1_sq = c.c1 * c.c1;
    WitnessVector {
        z0: c1_sq * c.c1 * (l2 * (1.0 - l) * (1.0 - l)),
        z1: c.c2 * l2 + c1_sq * (3.0 * l2 * l - 2.0 * l2),
        z2: c.c1 * (2.0 * l2),
        z3: Complex64::new(1.0 + l, 0.0),
    }
}

/// `L = |p1 z0 + p2 z1 + p3 z2 + p4 z3|²`.
pub fn compute_l(p: &PCoeffs, z: &WitnessVector) -> f64 {
    (p.p1 * z.z0 + p.p2 * z.z1 + p.p3 * z.z2 + p.p4 * z.z3).norm_sqr()
}

/// `R`, grouped as the positive and negative halves of the form with the
/// `j = 0` negative term removed.
pub fn compute_r(p: &PCoeffs, z: &WitnessVector) -> f64 {
    let PCoeffs { p1, p2, p3, .. } = *p;
    let WitnessVector { z0, z1, z2, z3 } = *z;
    let g0 = (z0 * 2.0 + p1 * z1 + p2 * z2 + p3 * z3).norm_sqr()
        - (p1 * z1 + p2 * z2 + p3 * z3).norm_sqr();
    let g1 = (z1 * 2.0 + p1 * z2 + p2 * z3).norm_sqr() - (p1 * z2 + p2 * z3).norm_sqr();
    let g2 = (z2 * 2.0 + p1 * z3).norm_sqr() - (p1 * z3).norm_sqr();
    let g3 = (z3 * 2.0).norm_sqr();
    g0 + g1 + g2 + g3
}

/// `|L - 4|a5|²|` for the witness built from `c`.
pub fn identity_residual(lambda: Lambda, c: &CoeffTuple) -> f64 {
    let l = compute_l(&p_from_c(c), &witness(lambda, c));
    let a5 = a_coeffs(lambda, c).a5;
    (l - 4.0 * a5.norm_sqr()).abs()
}

/// The seven summands of `R / 4`, each from its closed form in `λ` and `c`.
pub fn r_expansion_terms(lambda: Lambda, c: &CoeffTuple) -> Vec<NamedValue> {
    let l = lambda.value();
    let l2 = l * l;
    let l3 = l2 * l;
    let l4 = l2 * l2;
    let one_minus_sq = (1.0 - l) * (1.0 - l);
    let CoeffTuple { c1, c2, c3, .. } = *c;
    let m1 = c1.norm_sqr();
    let m2 = c2.norm_sqr();
    let c1_cube = c1 * c1 * c1;
    let cross = c2 * (c1.conj() * c1.conj());
    let s = 3.0 * l3 - 2.0 * l2;

    // p1 z1 + p2 z2 + p3 z3 = 2[(1+λ)c3 + (3λ²+2λ+2)c1c2 + (3λ³+λ+1)c1³]
    let group0 =
        (c3 * (1.0 + l) + c1 * c2 * (3.0 * l2 + 2.0 * l + 2.0) + c1_cube * (3.0 * l3 + l + 1.0))
            * 2.0;
    let z0_conj = c1_cube.conj() * (l2 * one_minus_sq);

    vec![
        NamedValue {
            name: "abs_z0_sq",
            value: l4 * one_minus_sq * one_minus_sq * m1 * m1 * m1,
        },
        NamedValue {
            name: "re_group_z0",
            value: (group0 * z0_conj).re,
        },
        NamedValue {
            name: "abs_z1_sq",
            value: l4 * m2 + s * s * m1 * m1 + 2.0 * l2 * s * cross.re,
        },
        NamedValue {
            name: "re_group_z1",
            value: 2.0 * l2 * (1.0 + l) * m2
                + 2.0 * (2.0 * l2 + l + 1.0) * s * m1 * m1
                + (2.0 * l2 * (2.0 * l2 + l + 1.0) + 2.0 * (1.0 + l) * s) * cross.re,
        },
        NamedValue {
            name: "abs_z2_sq",
            value: 4.0 * l4 * m1,
        },
        NamedValue {
            name: "re_p1z3_z2",
            value: 4.0 * l2 * (1.0 + l) * m1,
        },
        NamedValue {
            name: "abs_z3_sq",
            value: (1.0 + l) * (1.0 + l),
        },
    ]
}

/// Successive upper bounds on `R`, from the exact value to `4 q4(λ)²`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainReport {
    pub lambda: f64,
    pub r_exact: f64,
    /// The `z̄0` group bounded by the coefficient lemma and `Re <= |·|`, and
    /// `Re{c2 c̄1²}` replaced by `|c2||c1|²`.
    pub bound_after_ps: f64,
    /// `|c2|` replaced by `1 - |c1|²`.
    pub bound_after_c2: f64,
    /// `4[(λ²(1-λ)²|c1|³ + 3λ³+λ+1)² + F(λ, |c1|²)]`.
    pub bound_f_form: f64,
    /// `4 q4(λ)²`.
    pub bound_final: f64,
    /// λ is below the region where the coefficient lemma applies.
    pub lemma_out_of_region: bool,
    /// λ is below `λ0`; monotonicity is not guaranteed.
    pub below_lambda0: bool,
    /// Indices `i` with `entries[i] > entries[i + 1]` beyond tolerance.
    pub decreases: Vec<usize>,
}

impl ChainReport {
    pub const NAMES: [&'static str; 5] = [
        "r_exact",
        "bound_after_ps",
        "bound_after_c2",
        "bound_f_form",
        "bound_final",
    ];

    pub fn values(&self) -> [f64; 5] {
        [
            self.r_exact,
            self.bound_after_ps,
            self.bound_after_c2,
            self.bound_f_form,
            self.bound_final,
        ]
    }

    pub fn entries(&self) -> Vec<NamedValue> {
        Self::NAMES
            .iter()
            .zip(self.values())
            .map(|(&name, value)| NamedValue { name, value })
            .collect()
    }

    pub fn is_monotone(&self) -> bool {
        self.decreases.is_empty()
    }
}

pub fn chain(lambda: Lambda, c: &CoeffTuple) -> ChainReport {
    let l = lambda.value();
    let l2 = l * l;
    let l3 = l2 * l;
    let x = c.c1.norm();
    let y = c.c2.norm();
    let x2 = x * x;
    let x3 = x2 * x;
    let k = 3.0 * l3 + l + 1.0;
    let lead = l2 * (1.0 - l) * (1.0 - l) * x3 + k;

    let r_exact = compute_r(&p_from_c(c), &witness(lambda, c));

    let bound_in = |y: f64| {
        4.0 * (lead * lead - k * k
            + l2 * (l2 + 2.0 * l + 2.0) * y * y
            + (3.0 * l3 - 2.0 * l2) * (3.0 * l3 + 2.0 * l2 + 2.0 * l + 2.0) * x2 * x2
            + 4.0 * l2 * (l2 + l + 1.0) * x2
            + 2.0 * l2 * (3.0 * l3 + 3.0 * l2 + 2.0 * l - 1.0) * y * x2
            + (1.0 + l) * (1.0 + l))
    };
    let bound_after_ps = bound_in(y);
    let bound_after_c2 = bound_in(1.0 - x2);
    let bound_f_form = 4.0 * (lead * lead + Fpoly::new(lambda).eval(x2));
    let q4 = q(4, lambda);
    let bound_final = 4.0 * q4 * q4;

    let mut report = ChainReport {
        lambda: l,
        r_exact,
        bound_after_ps,
        bound_after_c2,
        bound_f_form,
        bound_final,
        lemma_out_of_region: l < ps_threshold(),
        below_lambda0: l < lambda0(),
        decreases: Vec::new(),
    };
    let v = report.values();
    report.decreases = (0..4).filter(|&i| !le(v[i], v[i + 1], RELATIVE)).collect();
    report
}
