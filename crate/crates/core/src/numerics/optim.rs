//! Derivative-free minimization (Nelder-Mead simplex).

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimizerOptions {
    /// Budget per simplex run; restarts get their own budget.
    pub max_iterations: usize,
    /// Stop when the spread of simplex values falls below this.
    pub ftol: f64,
    /// Initial simplex edge along each coordinate.
    pub initial_step: f64,
    /// Extra runs started from the best point with a shrunken simplex.
    pub restarts: usize,
    /// Factor applied to the step at each restart.
    pub restart_shrink: f64,
}

impl Default for OptimizerOptions {
    fn default() -> Self {
        Self {
            max_iterations: 5_000,
            ftol: 1e-8,
            initial_step: 0.1,
            restarts: 1,
            restart_shrink: 0.5,
        }
    }
}

impl OptimizerOptions {
    pub fn validate(&self) -> Result<()> {
        if self.max_iterations == 0 {
            return Err(Error::InvalidArgument("max_iterations must be >= 1".into()));
        }
        if !(self.ftol > 0.0) || !(self.initial_step > 0.0) {
            return Err(Error::InvalidArgument("tolerance and step must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizerResult {
    pub argmin: Vec<f64>,
    pub minimum: f64,
    pub iterations: usize,
    pub converged: bool,
}

const REFLECT: f64 = 1.0;
const EXPAND: f64 = 2.0;
const CONTRACT: f64 = 0.5;
const SHRINK: f64 = 0.5;

/// Minimizes `objective` starting at `x0`.
///
/// Non-finite objective values met during the search are treated as `+inf`,
/// so callers can signal infeasible regions with `NaN` or `f64::INFINITY`.
pub fn nelder_mead<F>(objective: F, x0: &[f64], opts: &OptimizerOptions) -> Result<OptimizerResult>
where
    F: Fn(&[f64]) -> f64,
{
    opts.validate()?;
    let f0 = objective(x0);
    if !f0.is_finite() {
        return Err(Error::InvalidStart);
    }
    if x0.is_empty() {
        return Ok(OptimizerResult { argmin: vec![], minimum: f0, iterations: 0, converged: true });
    }
    let eval = |x: &[f64]| {
        let v = objective(x);
        if v.is_finite() {
            v
        } else {
            f64::INFINITY
        }
    };

    let mut best = (x0.to_vec(), f0);
    let mut step = opts.initial_step;
    let mut iterations = 0;
    let mut converged = false;
    for _ in 0..=opts.restarts {
        let run = simplex_run(&eval, &best.0, best.1, step, opts);
        iterations += run.iterations;
        converged = run.converged;
        if run.minimum <= best.1 {
            best = (run.argmin, run.minimum);
        }
        step *= opts.restart_shrink;
    }
    Ok(OptimizerResult { argmin: best.0, minimum: best.1, iterations, converged })
}

fn simplex_run<F>(eval: &F, x0: &[f64], f0: f64, step: f64, opts: &OptimizerOptions) -> OptimizerResult
where
    F: Fn(&[f64]) -> f64,
{
    let n = x0.len();
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    simplex.push((x0.to_vec(), f0));
    for i in 0..n {
        let mut x = x0.to_vec();
        x[i] += step;
        let mut fx = eval(&x);
        if !fx.is_finite() {
            // try the other side before giving up on this vertex
            x[i] = x0[i] - step;
            fx = eval(&x);
        }
        simplex.push((x, fx));
    }

    let mut iterations = 0;
    let mut converged = false;
    let mut centroid = vec![0.0; n];
    let mut trial = vec![0.0; n];
    while iterations < opts.max_iterations {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let spread = simplex[n].1 - simplex[0].1;
        if spread.is_finite() && spread <= opts.ftol {
            converged = true;
            break;
        }
        iterations += 1;

        centroid.iter_mut().for_each(|c| *c = 0.0);
        for (x, _) in &simplex[..n] {
            for (c, xi) in centroid.iter_mut().zip(x) {
                *c += xi / n as f64;
            }
        }
        let worst = simplex[n].clone();
        let point = |coef: f64, out: &mut Vec<f64>| {
            for ((o, c), w) in out.iter_mut().zip(&centroid).zip(&worst.0) {
                *o = c + coef * (c - w);
            }
        };

        point(REFLECT, &mut trial);
        let fr = eval(&trial);
        if fr < simplex[0].1 {
            let reflected = trial.clone();
            point(EXPAND, &mut trial);
            let fe = eval(&trial);
            simplex[n] = if fe < fr { (trial.clone(), fe) } else { (reflected, fr) };
            continue;
        }
        if fr < simplex[n - 1].1 {
            simplex[n] = (trial.clone(), fr);
            continue;
        }
        let (coef, bound) = if fr < worst.1 { (CONTRACT, fr) } else { (-CONTRACT, worst.1) };
        point(coef, &mut trial);
        let fc = eval(&trial);
        if fc < bound {
            simplex[n] = (trial.clone(), fc);
            continue;
        }
        let anchor = simplex[0].0.clone();
        for (x, fx) in simplex.iter_mut().skip(1) {
            for (xi, ai) in x.iter_mut().zip(&anchor) {
                *xi = ai + SHRINK * (*xi - ai);
            }
            *fx = eval(x);
        }
    }
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    let (argmin, minimum) = simplex.swap_remove(0);
    OptimizerResult { argmin, minimum, iterations, converged }
}
