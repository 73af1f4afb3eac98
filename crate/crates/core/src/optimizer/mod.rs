//! Restarted simplex search over probe families.
//!
//! The search harness runs in `f64`.

mod chart;
mod nelder_mead;

pub use chart::Family;
pub use nelder_mead::{minimize, SimplexOptions, SimplexOutcome};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hamiltonian::Hamiltonian;
use crate::probes::StateVector;
use crate::qfim::{figure_of_merit, qfim_pure, InversePolicy};
use crate::weights::Weight;
use chart::Chart;

/// Step of the fresh simplex built around a converged point.
const POLISH_STEP: f64 = 0.05;
const POLISH_ROUNDS: usize = 2;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchSettings {
    pub restarts: usize,
    pub max_iters: usize,
    pub seed: u64,
    pub tol_step: f64,
    pub tol_val: f64,
}

impl Default for SearchSettings {
    fn default() -> Self {
        Self {
            restarts: 16,
            max_iters: 5000,
            seed: 0,
            tol_step: 1e-8,
            tol_val: 1e-10,
        }
    }
}

impl SearchSettings {
    fn validate(&self) -> Result<()> {
        if self.restarts == 0 {
            return Err(Error::InvalidParams("restarts must be at least 1".into()));
        }
        if !(self.tol_step > 0.0 && self.tol_val > 0.0) {
            return Err(Error::InvalidParams("tolerances must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizationTask {
    pub family: Family,
    pub weight: Weight<f64>,
    pub hamiltonian: Hamiltonian<f64>,
    pub settings: SearchSettings,
}

impl OptimizationTask {
    pub fn new(family: Family, weight: Weight<f64>, hamiltonian: Hamiltonian<f64>) -> Self {
        Self {
            family,
            weight,
            hamiltonian,
            settings: SearchSettings::default(),
        }
    }

    pub fn with_settings(mut self, settings: SearchSettings) -> Self {
        self.settings = settings;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.settings.seed = seed;
        self
    }

    pub fn with_restarts(mut self, restarts: usize) -> Self {
        self.settings.restarts = restarts;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TracePoint {
    pub restart: usize,
    pub iteration: usize,
    pub value: f64,
}

/// Final point of one restart.
#[derive(Debug, Clone, PartialEq)]
pub struct RestartOutcome {
    pub value: f64,
    pub params: Vec<f64>,
    pub state: StateVector<f64>,
    pub iterations: usize,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizationResult {
    pub family: Family,
    pub best_value: f64,
    pub best_params: Vec<f64>,
    pub best_state: StateVector<f64>,
    /// Best-so-far values, per restart, in the direction of the search
    /// (non-increasing when minimizing, non-decreasing when maximizing).
    pub trace: Vec<TracePoint>,
    /// Whether the restart that produced the best value converged.
    pub converged: bool,
    pub restarts: Vec<RestartOutcome>,
}

/// Objective as seen by the simplex, and its sign relative to the reported value.
struct Objective<'a> {
    chart: &'a Chart,
    eval: Box<dyn Fn(&StateVector<f64>) -> Result<f64> + 'a>,
    sign: f64,
}

impl Objective<'_> {
    fn reported(&self, x: &[f64]) -> Result<f64> {
        let s = self.chart.state(x)?;
        (self.eval)(&s)
    }

    fn minimized(&self, x: &[f64]) -> f64 {
        self.reported(x).map_or(f64::INFINITY, |v| self.sign * v)
    }
}

fn search(obj: &Objective<'_>, family: Family, settings: &SearchSettings) -> Result<OptimizationResult> {
    settings.validate()?;
    let opts = SimplexOptions {
        max_iters: settings.max_iters,
        tol_step: settings.tol_step,
        tol_val: settings.tol_val,
        ..Default::default()
    };
    let mut rng = ChaCha8Rng::seed_from_u64(settings.seed);
    let mut trace = Vec::new();
    let mut restarts = Vec::with_capacity(settings.restarts);
    let mut best: Option<usize> = None;

    for r in 0..settings.restarts {
        let restart_seed: u64 = rng.random();
        let mut local = ChaCha8Rng::seed_from_u64(restart_seed);
        let x0 = obj.chart.random_start(&mut local);
        let mut out = minimize(|x| obj.minimized(x), &x0, &opts);
        let mut offset = out.iterations;
        let mut points: Vec<(usize, f64)> = out.trace.clone();
        for _ in 0..POLISH_ROUNDS {
            let polish = minimize(
                |x| obj.minimized(x),
                &out.x,
                &SimplexOptions {
                    initial_step: POLISH_STEP,
                    ..opts
                },
            );
            for &(it, v) in &polish.trace {
                if v < points.last().map_or(f64::INFINITY, |p| p.1) {
                    points.push((offset + it, v));
                }
            }
            offset += polish.iterations;
            let improved = polish.value < out.value - settings.tol_val;
            if polish.value <= out.value {
                out = SimplexOutcome {
                    iterations: offset,
                    trace: Vec::new(),
                    ..polish
                };
            }
            if !improved {
                break;
            }
        }
        trace.extend(points.into_iter().map(|(iteration, v)| TracePoint {
            restart: r,
            iteration,
            value: obj.sign * v,
        }));

        let params = obj.chart.canonical(&out.x);
        let state = obj.chart.state(&params)?;
        let value = (obj.eval)(&state)?;
        restarts.push(RestartOutcome {
            value,
            params,
            state,
            iterations: offset,
            converged: out.converged,
        });
        let better = match best {
            None => true,
            Some(b) => obj.sign * value < obj.sign * restarts[b].value - settings.tol_val,
        };
        if better {
            best = Some(r);
        }
    }

    let b = &restarts[best.expect("at least one restart")];
    Ok(OptimizationResult {
        family,
        best_value: b.value,
        best_params: b.params.clone(),
        best_state: b.state.clone(),
        trace,
        converged: b.converged,
        restarts,
    })
}

/// Minimizes `Tr(W F^-1)` (pseudo-inverse policy) over the task's family.
pub fn minimize_fom(task: &OptimizationTask) -> Result<OptimizationResult> {
    let h = &task.hamiltonian;
    if task.weight.dim() != h.n_sites() {
        return Err(Error::DimensionMismatch {
            expected: h.n_sites(),
            found: task.weight.dim(),
        });
    }
    let chart = Chart::new(task.family, h, task.weight.alpha())?;
    let w = &task.weight;
    let obj = Objective {
        chart: &chart,
        eval: Box::new(move |s| figure_of_merit(w, &qfim_pure(s, h)?, InversePolicy::Pseudo)),
        sign: 1.0,
    };
    search(&obj, task.family, &task.settings)
}

/// Maximizes `Tr F` over a family. The three-qubit parametric family needs a
/// correlation parameter, passed as `alpha`.
pub fn maximize_trace_fq(
    h: &Hamiltonian<f64>,
    family: Family,
    alpha: Option<f64>,
    settings: &SearchSettings,
) -> Result<OptimizationResult> {
    let chart = Chart::new(family, h, alpha)?;
    let obj = Objective {
        chart: &chart,
        eval: Box::new(move |s| Ok(qfim_pure(s, h)?.trace())),
        sign: -1.0,
    };
    search(&obj, family, settings)
}

/// Runs tasks independently with per-task seeds `seed + index`; results come
/// back in task order and failures do not abort the others.
pub fn sweep(tasks: &[OptimizationTask]) -> Vec<Result<OptimizationResult>> {
    tasks
        .par_iter()
        .enumerate()
        .map(|(i, t)| {
            let mut task = t.clone();
            task.settings.seed = t.settings.seed.wrapping_add(i as u64);
            minimize_fom(&task)
        })
        .collect()
}

/// [`sweep`] on a dedicated pool of `jobs` threads (`None`: the global pool).
pub fn sweep_with_jobs(tasks: &[OptimizationTask], jobs: Option<usize>) -> Result<Vec<Result<OptimizationResult>>> {
    match jobs {
        None => Ok(sweep(tasks)),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build()
                .map_err(|e| Error::InvalidParams(format!("thread pool: {e}")))?;
            Ok(pool.install(|| sweep(tasks)))
        }
    }
}
