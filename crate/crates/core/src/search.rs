//! Multi-start derivative-free maximization over the Schwarz coefficient body.
//!
//! Points live in the square chart `[-1, 1]^8`: coordinates `(x_{2k}, x_{2k+1})`
//! give `γ_k = x_{2k} + i x_{2k+1}`, radially projected onto the closed disk
//! when it falls outside. Each start runs Nelder–Mead with reflection at the
//! chart bounds and restarts around its incumbent until its evaluation
//! budget is spent. Start 0 is pinned at `γ = (1, 0, 0, 0)`; start `i > 0`
//! draws its initial point from stream `i` of a ChaCha generator seeded with
//! `seed`, so a run with more starts extends a run with fewer.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::coeffs::{a_coeffs, q, Lambda};
use crate::error::{Error, Result};
use crate::inequalities::ps_functional;
use crate::schwarz::{schur_to_coeffs, CoeffTuple, SchurVector};

const DIM: usize = 8;
const MIN_BUDGET: usize = 100;

const REFLECT: f64 = 1.0;
const EXPAND: f64 = 2.0;
const CONTRACT: f64 = 0.5;
const SHRINK: f64 = 0.5;

const INITIAL_STEP: f64 = 0.25;
const RESTART_STEP: f64 = 0.05;
const SIMPLEX_TOL: f64 = 1e-11;

#[derive(Debug, Clone, PartialEq)]
pub struct SearchResult {
    pub best_value: f64,
    pub argmax: CoeffTuple,
    pub starts: usize,
    pub evaluations: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub lambda: f64,
    pub max_a5: f64,
    /// `q4(λ)`.
    pub bound: f64,
    /// `bound - max_a5`.
    pub gap: f64,
}

/// Maps a chart point to the Schwarz coefficients it represents.
pub fn chart_to_coeffs(x: &[f64; DIM]) -> CoeffTuple {
    let mut gamma = [Complex64::default(); 4];
    for (k, g) in gamma.iter_mut().enumerate() {
        let z = Complex64::new(x[2 * k], x[2 * k + 1]);
        let r = z.norm();
        *g = if r > 1.0 { z / r } else { z };
    }
    let g = SchurVector::new(gamma).expect("projected parameters lie in the closed disk");
    schur_to_coeffs(&g)
}

fn fold_into_bounds(v: f64) -> f64 {
    let mut v = v;
    // At most a couple of passes for steps of moderate size.
    for _ in 0..4 {
        if v > 1.0 {
            v = 2.0 - v;
        } else if v < -1.0 {
            v = -2.0 - v;
        } else {
            return v;
        }
    }
    v.clamp(-1.0, 1.0)
}

fn fold(mut x: [f64; DIM]) -> [f64; DIM] {
    for v in x.iter_mut() {
        *v = fold_into_bounds(*v);
    }
    x
}

fn combine(a: &[f64; DIM], b: &[f64; DIM], t: f64) -> [f64; DIM] {
    // a + t (b - a)
    let mut out = [0.0; DIM];
    for i in 0..DIM {
        out[i] = a[i] + t * (b[i] - a[i]);
    }
    fold(out)
}

struct Counter<'a, F> {
    objective: &'a F,
    evaluations: usize,
    limit: usize,
}

impl<F: Fn(&CoeffTuple) -> f64> Counter<'_, F> {
    fn exhausted(&self) -> bool {
        self.evaluations >= self.limit
    }

    /// Negated objective; non-finite values and calls past the limit rank last.
    fn cost(&mut self, x: &[f64; DIM]) -> f64 {
        if self.exhausted() {
            return f64::INFINITY;
        }
        self.evaluations += 1;
        let v = (self.objective)(&chart_to_coeffs(x));
        if v.is_finite() {
            -v
        } else {
            f64::INFINITY
        }
    }
}

/// One Nelder–Mead run from `start`; returns the best point and its cost.
fn nelder_mead<F: Fn(&CoeffTuple) -> f64>(
    counter: &mut Counter<'_, F>,
    start: [f64; DIM],
    step: f64,
) -> ([f64; DIM], f64) {
    let mut simplex: Vec<([f64; DIM], f64)> = Vec::with_capacity(DIM + 1);
    let f0 = counter.cost(&start);
    simplex.push((start, f0));
    for i in 0..DIM {
        let mut p = start;
        p[i] += if p[i] + step <= 1.0 { step } else { -step };
        let p = fold(p);
        let fp = counter.cost(&p);
        simplex.push((p, fp));
    }

    while !counter.exhausted() {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let spread = simplex[DIM].1 - simplex[0].1;
        let size = simplex[1..]
            .iter()
            .map(|(p, _)| {
                p.iter()
                    .zip(simplex[0].0.iter())
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max)
            })
            .fold(0.0, f64::max);
        if size < SIMPLEX_TOL || (spread.abs() < 1e-15 && size < 1e-8) {
            break;
        }

        let mut centroid = [0.0; DIM];
        for (p, _) in &simplex[..DIM] {
            for i in 0..DIM {
                centroid[i] += p[i] / DIM as f64;
            }
        }
        let worst = simplex[DIM];

        let reflected = combine(&centroid, &worst.0, -REFLECT);
        let fr = counter.cost(&reflected);
        if fr < simplex[0].1 {
            let expanded = combine(&centroid, &worst.0, -EXPAND);
            let fe = counter.cost(&expanded);
            simplex[DIM] = if fe < fr {
                (expanded, fe)
            } else {
                (reflected, fr)
            };
            continue;
        }
        if fr < simplex[DIM - 1].1 {
            simplex[DIM] = (reflected, fr);
            continue;
        }
        let (contracted, fc) = if fr < worst.1 {
            let p = combine(&centroid, &reflected, CONTRACT);
            let f = counter.cost(&p);
            (p, f)
        } else {
            let p = combine(&centroid, &worst.0, CONTRACT);
            let f = counter.cost(&p);
            (p, f)
        };
        if fc < worst.1.min(fr) {
            simplex[DIM] = (contracted, fc);
            continue;
        }
        let best = simplex[0].0;
        for entry in simplex[1..].iter_mut() {
            let p = combine(&best, &entry.0, SHRINK);
            let f = counter.cost(&p);
            *entry = (p, f);
        }
    }
    simplex
        .into_iter()
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("simplex is nonempty")
}

fn initial_point(seed: u64, index: usize) -> [f64; DIM] {
    let mut x = [0.0; DIM];
    if index == 0 {
        x[0] = 1.0;
        return x;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    for v in x.iter_mut() {
        *v = rng.gen_range(-1.0..=1.0);
    }
    x
}

struct StartOutcome {
    point: [f64; DIM],
    value: f64,
    evaluations: usize,
}

fn run_start<F: Fn(&CoeffTuple) -> f64>(
    objective: &F,
    seed: u64,
    index: usize,
    budget: usize,
) -> StartOutcome {
    let mut counter = Counter {
        objective,
        evaluations: 0,
        limit: budget,
    };
    let start = initial_point(seed, index);
    let mut best = (start, counter.cost(&start));
    let mut step = INITIAL_STEP;
    while counter.evaluations + DIM < budget {
        let (p, f) = nelder_mead(&mut counter, best.0, step);
        if f < best.1 {
            best = (p, f);
        }
        step = RESTART_STEP;
    }
    StartOutcome {
        point: best.0,
        value: -best.1,
        evaluations: counter.evaluations,
    }
}

fn validate(starts: usize, budget: usize) -> Result<()> {
    if starts == 0 {
        return Err(Error::InvalidSearch("starts must be at least 1".into()));
    }
    if budget < MIN_BUDGET {
        return Err(Error::InvalidSearch(format!(
            "budget must be at least {MIN_BUDGET}, got {budget}"
        )));
    }
    Ok(())
}

/// Maximizes `objective` over the coefficient body with `starts` starts of
/// `budget` evaluations each. Starts run in parallel and are merged in index
/// order; ties keep the earlier start.
pub fn maximize<F>(objective: F, starts: usize, budget: usize, seed: u64) -> Result<SearchResult>
where
    F: Fn(&CoeffTuple) -> f64 + Sync,
{
    validate(starts, budget)?;
    let outcomes: Vec<StartOutcome> = (0..starts)
        .into_par_iter()
        .map(|i| run_start(&objective, seed, i, budget))
        .collect();

    let mut evaluations = 0;
    let mut best: Option<&StartOutcome> = None;
    for o in &outcomes {
        evaluations += o.evaluations;
        if best.is_none_or(|b| o.value > b.value) {
            best = Some(o);
        }
    }
    let best = best.expect("at least one start");
    let argmax = chart_to_coeffs(&best.point);
    Ok(SearchResult {
        best_value: objective(&argmax),
        argmax,
        starts,
        evaluations,
        seed,
    })
}

/// Largest `|a5|` found for the given `λ`.
pub fn maximize_a5(
    lambda: Lambda,
    starts: usize,
    budget: usize,
    seed: u64,
) -> Result<SearchResult> {
    maximize(move |c| a_coeffs(lambda, c).a5.norm(), starts, budget, seed)
}

/// Largest `|c3 + μ c1 c2 + ν c1³|` found.
pub fn maximize_ps(
    mu: f64,
    nu: f64,
    starts: usize,
    budget: usize,
    seed: u64,
) -> Result<SearchResult> {
    maximize(move |c| ps_functional(mu, nu, c), starts, budget, seed)
}

pub fn sweep(grid: &[Lambda], starts: usize, budget: usize, seed: u64) -> Result<Vec<SweepRow>> {
    if grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    grid.iter()
        .map(|&lambda| {
            let r = maximize_a5(lambda, starts, budget, seed)?;
            let bound = q(4, lambda);
            Ok(SweepRow {
                lambda: lambda.value(),
                max_a5: r.best_value,
                bound,
                gap: bound - r.best_value,
            })
        })
        .collect()
}
