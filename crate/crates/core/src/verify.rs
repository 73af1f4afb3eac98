//! Self-check suite for the correlated-field instance `(sigma_z, W(N, alpha))`.
//! Each check prints as `name value expected target ... PASS|FAIL`.

use std::fmt;

use crate::bounds::{
    attainability_residual, mixed_trace_bound, probe_optimized_bound, product_probe_bound,
};
use crate::error::{Error, Result};
use crate::hamiltonian::Hamiltonian;
use crate::linalg::{sqrt_psd, CMatrix};
use crate::optimizer::{minimize_fom, Family, OptimizationTask, SearchSettings};
use crate::probes::{
    ghz, gme_certify, haar_random_pure, n3_interval, parametric_n3, product, random_mixed,
    DensityOp, GhzParams, N3Params,
};
use crate::qfim::{figure_of_merit, qfim_mixed, qfim_pure, saturability_check, InversePolicy};
use crate::tol;
use crate::weights::{build_w_bar, weight_sqrt_closed_form};

pub const MAX_SITES: usize = 6;
const RANDOM_PURE: u64 = 50;
const RANDOM_MIXED: u64 = 10;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub value: f64,
    /// Human-readable target, e.g. `8 (4N)` or `<= 1e-10`.
    pub expected: String,
    pub passed: bool,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {:.6} expected {} {}",
            self.name,
            self.value,
            self.expected,
            if self.passed { "PASS" } else { "FAIL" }
        )
    }
}

fn near(name: &str, value: f64, target: f64, tol: f64, label: String) -> Check {
    Check {
        name: name.into(),
        value,
        expected: label,
        passed: (value - target).abs() <= tol,
    }
}

fn at_most(name: &str, value: f64, limit: f64) -> Check {
    Check {
        name: name.into(),
        value,
        expected: format!("<= {limit:e}"),
        passed: value <= limit,
    }
}

fn above(name: &str, value: f64, limit: f64) -> Check {
    Check {
        name: name.into(),
        value,
        expected: format!("> {limit:e}"),
        passed: value > limit,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub n: usize,
    pub alpha: f64,
    pub seed: u64,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

pub fn run_suite(n: usize, alpha: f64, seed: u64) -> Result<SuiteReport> {
    if !(2..=MAX_SITES).contains(&n) {
        return Err(Error::InvalidParams(format!(
            "verification supports 2 <= N <= {MAX_SITES}, got {n}"
        )));
    }
    let h = Hamiltonian::<f64>::pauli_z(n)?;
    let w = build_w_bar(n, alpha)?;
    let four_n = 4.0 * n as f64;
    let label_4n = format!("{} (4N)", 4 * n);
    let pbound = product_probe_bound(n, alpha)?;
    let mut checks = Vec::new();

    checks.push(near("bound", probe_optimized_bound(&w, &h)?, four_n, 1e-10, label_4n.clone()));
    let spectral = sqrt_psd(w.matrix())?;
    checks.push(at_most(
        "w_sqrt_closed_form",
        weight_sqrt_closed_form(n, alpha)?.max_abs_diff(&spectral),
        1e-9,
    ));
    checks.push(near("trace_w_sqrt", w.trace_sqrt(), four_n, 1e-10, label_4n.clone()));

    // attaining GHZ probe
    let g = ghz(GhzParams::optimal(n, alpha))?;
    let fg = qfim_pure(&g, &h)?;
    let target = CMatrix::from_fn(n, n, |i, j| {
        crate::scalar::c(if i == j { 4.0 } else { 4.0 * alpha }, 0.0)
    });
    checks.push(at_most("ghz_qfim", fg.matrix().max_abs_diff(&target), 1e-9));
    checks.push(near(
        "ghz_fom",
        figure_of_merit(&w, &fg, InversePolicy::Pseudo)?,
        four_n,
        1e-8,
        label_4n.clone(),
    ));
    checks.push(at_most("ghz_equality_residual", attainability_residual(&fg, &w)?, 1e-9));
    checks.push(above(
        "ghz_gme_min_schmidt",
        gme_certify(&g, tol::SCHMIDT)?.min_second(),
        tol::SCHMIDT,
    ));

    // |+>^N: maximal Tr F, yet only the product value
    let plus = product(&vec![(std::f64::consts::FRAC_PI_2, 0.0); n])?;
    let fp = qfim_pure(&plus, &h)?;
    checks.push(near("plus_trace_fq", fp.trace(), four_n, 1e-9, label_4n.clone()));
    checks.push(near(
        "plus_equality_residual",
        attainability_residual(&fp, &w)?,
        4.0 * alpha,
        1e-9,
        format!("{} (4 alpha)", 4.0 * alpha),
    ));
    checks.push(near(
        "plus_fom",
        figure_of_merit(&w, &fp, InversePolicy::Pseudo)?,
        pbound,
        1e-8 * pbound,
        format!("{pbound} (4N[(N-1)alpha^2+1])"),
    ));
    checks.push(above(
        "product_gap",
        pbound - four_n,
        four_n * (n as f64 - 1.0) * alpha * alpha - 1e-6,
    ));

    // random pure probes
    let mut worst_gap = f64::INFINITY;
    let mut worst_sat: f64 = 0.0;
    for k in 0..RANDOM_PURE {
        let s = haar_random_pure::<f64>(&vec![2; n], seed.wrapping_add(k))?;
        let f = qfim_pure(&s, &h)?;
        worst_gap = worst_gap.min(figure_of_merit(&w, &f, InversePolicy::Pseudo)? - four_n);
        worst_sat = worst_sat.max(saturability_check(&s, &h)?);
    }
    checks.push(Check {
        name: "random_pure_bound_gap".into(),
        value: worst_gap,
        expected: ">= -1e-8".into(),
        passed: worst_gap >= -1e-8,
    });
    checks.push(at_most("random_pure_saturability", worst_sat, 1e-10));

    // random mixed probes
    let dim = 1usize << n;
    let mut worst_ineq = f64::NEG_INFINITY;
    let mut worst_mixed_gap = f64::INFINITY;
    for rank in [2, dim] {
        for k in 0..RANDOM_MIXED {
            let rho = random_mixed::<f64>(&vec![2; n], rank, seed.wrapping_add(1000 + k))?;
            let m = mixed_trace_bound(&rho, &h)?;
            worst_ineq = worst_ineq.max(m.lhs - m.rhs);
            let f = qfim_mixed(&rho, &h)?;
            worst_mixed_gap = worst_mixed_gap.min(figure_of_merit(&w, &f, InversePolicy::Pseudo)? - four_n);
        }
    }
    checks.push(at_most("mixed_trace_inequality", worst_ineq, 1e-8));
    checks.push(above("mixed_fom_gap", worst_mixed_gap, 1e-6));
    let mm = DensityOp::maximally_mixed(vec![2; n])?;
    checks.push(at_most("maximally_mixed_qfim", qfim_mixed(&mm, &h)?.matrix().max_abs(), 1e-12));

    // search
    let settings = SearchSettings {
        restarts: 4,
        seed,
        ..Default::default()
    };
    let run = |family| {
        minimize_fom(&OptimizationTask::new(family, w.clone(), h.clone()).with_settings(settings))
    };
    checks.push(near("search_ghz", run(Family::Ghz)?.best_value, four_n, 1e-6, label_4n.clone()));
    checks.push(near(
        "search_product",
        run(Family::Product)?.best_value,
        pbound,
        1e-5 * pbound,
        format!("{pbound} (4N[(N-1)alpha^2+1])"),
    ));

    if n == 3 {
        let (lo, hi) = n3_interval(alpha);
        let mut worst: f64 = 0.0;
        for k in 1..5 {
            let s2 = lo + (hi - lo) * k as f64 / 5.0;
            let p = N3Params {
                alpha,
                chi: s2.sqrt().asin(),
                phases: [0.3, 1.1, -0.4, 2.0, 0.0, -2.5, 0.9],
            };
            let f = qfim_pure(&parametric_n3(p)?, &h)?;
            worst = worst.max((figure_of_merit(&w, &f, InversePolicy::Pseudo)? - four_n).abs());
        }
        checks.push(at_most("parametric_n3_fom_deviation", worst, 1e-8));
    }

    Ok(SuiteReport {
        n,
        alpha,
        seed,
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_passes_and_formats() {
        let r = run_suite(2, 0.3, 7).unwrap();
        for c in &r.checks {
            assert!(c.passed, "{c}");
        }
        let line = r.checks.iter().find(|c| c.name == "ghz_fom").unwrap().to_string();
        assert!(line.starts_with("ghz_fom 8.000000 expected 8 (4N)"), "{line}");
    }

    #[test]
    fn scale_cap() {
        assert!(run_suite(MAX_SITES + 1, 0.5, 0).is_err());
        assert!(run_suite(1, 0.5, 0).is_err());
        assert!(matches!(run_suite(3, 1.0, 0), Err(Error::InvalidAlpha(_))));
    }
}
