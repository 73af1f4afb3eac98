use std::fs;
use std::path::Path;
use std::process::ExitCode;

use locfield::bounds::{attainability_residual, probe_optimized_bound, BoundReport};
use locfield::io::{self, ProbeFile};
use locfield::linalg::CMatrix;
use locfield::optimizer::{sweep_with_jobs, Family, OptimizationTask, SearchSettings};
use locfield::probes::{ghz, gme_certify, product, GhzParams};
use locfield::qfim::{figure_of_merit, qfim_mixed, qfim_pure, FisherInfo, InversePolicy};
use locfield::verify::{run_suite, MAX_SITES};
use locfield::weights::{build_w_bar, validate_psd_weight};
use locfield::{tol, Error, LocalHamiltonian, WeightMatrix};
use serde_json::json;

use crate::{BoundArgs, Format, PolicyArg, ProbeArgs, ProbeKind, QfimArgs, SweepArgs, VerifyArgs};

const DEFAULT_ALPHA: f64 = 0.5;

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

fn usage(message: impl Into<String>) -> CliError {
    CliError {
        code: 2,
        message: message.into(),
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse { .. }
            | Error::InvalidAlpha(_)
            | Error::InvalidParams(_)
            | Error::UnsupportedFamily { .. } => 2,
            _ => 3,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

type CliResult = Result<ExitCode, CliError>;

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))
}

fn emit(path: Option<&Path>, content: &str) -> Result<(), CliError> {
    match path {
        None => {
            print!("{content}");
            Ok(())
        }
        Some(p) => fs::write(p, content).map_err(|e| CliError {
            code: 2,
            message: format!("cannot write {}: {e}", p.display()),
        }),
    }
}

/// Float formatting shared by every CSV column: 17 significant digits.
fn num(v: f64) -> String {
    format!("{v:.16e}")
}

fn policy(p: PolicyArg) -> InversePolicy {
    match p {
        PolicyArg::Strict => InversePolicy::Strict,
        PolicyArg::Pseudo => InversePolicy::Pseudo,
    }
}

fn check_alpha(alpha: f64) -> Result<f64, CliError> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(alpha)
    } else {
        Err(Error::InvalidAlpha(alpha).into())
    }
}

fn load_weight(choice: &str, alpha: Option<f64>, n: usize) -> Result<WeightMatrix, CliError> {
    match choice {
        "w-bar" => Ok(build_w_bar(n, check_alpha(alpha.unwrap_or(DEFAULT_ALPHA))?)?),
        _ if alpha.is_some() => Err(usage("--alpha only applies to --weight w-bar")),
        "identity" => Ok(validate_psd_weight(CMatrix::identity(n))?),
        path => Ok(validate_psd_weight(io::parse_matrix(&read(Path::new(path))?)?)?),
    }
}

pub fn bound(a: BoundArgs) -> CliResult {
    if let Some(alpha) = a.alpha {
        check_alpha(alpha)?;
    }
    let h = match (&a.hamiltonian, a.n) {
        (Some(path), _) => io::parse_hamiltonian(&read(path)?)?,
        (None, Some(n)) if n >= 1 => LocalHamiltonian::pauli_z(n)?,
        (None, Some(_)) => return Err(usage("--n must be at least 1")),
        (None, None) => return Err(usage("either --n or --hamiltonian is required")),
    };
    let w = load_weight(&a.weight, a.alpha, h.n_sites())?;
    let b = probe_optimized_bound(&w, &h)?;
    let alpha = w.alpha();

    let Some(state_path) = &a.state else {
        let text = match a.out.format {
            Format::Csv => format!(
                "N,alpha,weight,bound\n{},{},{},{}\n",
                h.n_sites(),
                alpha.map(num).unwrap_or_default(),
                a.weight,
                num(b)
            ),
            Format::Json => format!(
                "{}\n",
                json!({ "N": h.n_sites(), "alpha": alpha, "weight": a.weight, "bound": b })
            ),
        };
        emit(a.out.output.as_deref(), &text)?;
        return Ok(ExitCode::SUCCESS);
    };

    let report = match io::parse_state(&read(state_path)?)? {
        ProbeFile::Pure(s) => {
            if a.policy == PolicyArg::Strict {
                figure_of_merit(&w, &qfim_pure(&s, &h)?, InversePolicy::Strict)?;
            }
            BoundReport::for_pure_probe(&w, &h, &s, "file")?
        }
        ProbeFile::Mixed(rho) => {
            let f = qfim_mixed(&rho, &h)?;
            let achieved = figure_of_merit(&w, &f, policy(a.policy))?;
            BoundReport {
                n: h.n_sites(),
                alpha,
                family: "file".into(),
                bound: b,
                achieved,
                residual: achieved - b,
                equality_residual: attainability_residual(&f, &w)?,
                gme: None,
            }
        }
    };
    let text = match a.out.format {
        Format::Csv => format!("{}\n{}\n", BoundReport::CSV_HEADER, report.csv_row()),
        Format::Json => format!("{}\n", serde_json::to_string(&report).map_err(|e| usage(e.to_string()))?),
    };
    emit(a.out.output.as_deref(), &text)?;
    Ok(ExitCode::SUCCESS)
}

pub fn verify(a: VerifyArgs) -> CliResult {
    if !(2..=MAX_SITES).contains(&a.n) {
        return Err(usage(format!("--n must lie in 2..={MAX_SITES}, got {}", a.n)));
    }
    check_alpha(a.alpha)?;
    let report = run_suite(a.n, a.alpha, a.seed)?;
    let failed = report.checks.iter().filter(|c| !c.passed).count();
    let text = match a.out.format {
        Format::Csv => {
            let mut t: String = report.checks.iter().map(|c| format!("{c}\n")).collect();
            t.push_str(&format!(
                "{} checks, {} failed (N={}, alpha={}, seed={})\n",
                report.checks.len(),
                failed,
                report.n,
                report.alpha,
                report.seed
            ));
            t
        }
        Format::Json => {
            let checks: Vec<_> = report
                .checks
                .iter()
                .map(|c| json!({ "name": c.name, "value": c.value, "expected": c.expected, "passed": c.passed }))
                .collect();
            format!(
                "{}\n",
                json!({ "N": report.n, "alpha": report.alpha, "seed": report.seed, "passed": failed == 0, "checks": checks })
            )
        }
    };
    emit(a.out.output.as_deref(), &text)?;
    Ok(if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

/// `start:stop:step`, inclusive of `stop` up to rounding.
fn parse_grid(grid: &str) -> Result<Vec<f64>, CliError> {
    let parts: Vec<&str> = grid.split(':').collect();
    let bad = || usage(format!("invalid --alpha-grid `{grid}` (expected start:stop:step)"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let v: Vec<f64> = parts
        .iter()
        .map(|p| p.trim().parse::<f64>().map_err(|_| bad()))
        .collect::<Result<_, _>>()?;
    let (start, stop, step) = (v[0], v[1], v[2]);
    if !(step > 0.0) || !(start <= stop) || !start.is_finite() || !stop.is_finite() {
        return Err(bad());
    }
    let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
    let grid: Vec<f64> = (0..count)
        .map(|k| ((start + k as f64 * step) * 1e12).round() / 1e12)
        .collect();
    for &alpha in &grid {
        check_alpha(alpha)?;
    }
    Ok(grid)
}

pub fn sweep(a: SweepArgs) -> CliResult {
    let grid = parse_grid(&a.alpha_grid)?;
    let families = a
        .families
        .iter()
        .map(|f| f.trim().parse::<Family>())
        .collect::<Result<Vec<_>, _>>()?;
    if families.is_empty() {
        return Err(usage("--families is empty"));
    }
    if let Some(&bad) = a.n.iter().find(|&&n| n < 2) {
        return Err(usage(format!("--n must be at least 2, got {bad}")));
    }
    if a.jobs == Some(0) {
        return Err(usage("--jobs must be at least 1"));
    }
    let settings = SearchSettings {
        restarts: a.restarts,
        max_iters: a.max_iters,
        seed: a.seed,
        ..Default::default()
    };
    let mut tasks = Vec::new();
    for &n in &a.n {
        let h = LocalHamiltonian::pauli_z(n)?;
        for &alpha in &grid {
            let w = build_w_bar(n, alpha)?;
            for &family in &families {
                tasks.push(OptimizationTask::new(family, w.clone(), h.clone()).with_settings(settings));
            }
        }
    }
    let results = sweep_with_jobs(&tasks, a.jobs)?;

    if let Some(dir) = &a.trace_dir {
        fs::create_dir_all(dir).map_err(|e| usage(format!("cannot create {}: {e}", dir.display())))?;
        for (i, (t, r)) in tasks.iter().zip(&results).enumerate() {
            let Ok(r) = r else { continue };
            let trace: Vec<_> = r.trace.iter().map(|p| json!([p.restart, p.iteration, p.value])).collect();
            let doc = json!({
                "index": i,
                "n": t.hamiltonian.n_sites(),
                "alpha": t.weight.alpha(),
                "family": t.family.name(),
                "seed": t.settings.seed.wrapping_add(i as u64),
                "best_value": r.best_value,
                "best_params": r.best_params,
                "trace_columns": ["restart", "iteration", "value"],
                "trace": trace,
            });
            let path = dir.join(format!("task{i:04}_{}_n{}.json", t.family.name(), t.hamiltonian.n_sites()));
            emit(Some(&path), &format!("{doc}\n"))?;
        }
    }

    let mut rows = Vec::with_capacity(tasks.len());
    let mut first_error: Option<CliError> = None;
    for (i, (t, r)) in tasks.iter().zip(results).enumerate() {
        let n = t.hamiltonian.n_sites();
        let alpha = t.weight.alpha().unwrap_or(f64::NAN);
        match r.and_then(|r| {
            let bound = probe_optimized_bound(&t.weight, &t.hamiltonian)?;
            let gme = gme_certify(&r.best_state, tol::SCHMIDT)?.is_gme;
            Ok((r, bound, gme))
        }) {
            Ok((r, bound, gme)) => rows.push((n, alpha, t.family, Some((bound, r.best_value, gme, r.converged)))),
            Err(e) => {
                eprintln!("task {i} ({} N={n} alpha={alpha}): {e}", t.family);
                first_error.get_or_insert(e.into());
                rows.push((n, alpha, t.family, None));
            }
        }
    }

    let text = match a.out.format {
        Format::Csv => {
            let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
            let io_err = |e: csv::Error| usage(e.to_string());
            w.write_record(["n", "alpha", "family", "bound", "achieved", "residual", "gme", "converged"])
                .map_err(io_err)?;
            for (n, alpha, family, v) in &rows {
                let mut rec = vec![n.to_string(), num(*alpha), family.name().to_string()];
                match v {
                    Some((bound, achieved, gme, conv)) => rec.extend([
                        num(*bound),
                        num(*achieved),
                        num(achieved - bound),
                        gme.to_string(),
                        conv.to_string(),
                    ]),
                    None => rec.extend(std::iter::repeat_n(String::new(), 5)),
                }
                w.write_record(&rec).map_err(io_err)?;
            }
            let bytes = w.into_inner().map_err(|e| usage(e.to_string()))?;
            String::from_utf8(bytes).map_err(|e| usage(e.to_string()))?
        }
        Format::Json => {
            let items: Vec<_> = rows
                .iter()
                .map(|(n, alpha, family, v)| match v {
                    Some((bound, achieved, gme, conv)) => json!({
                        "n": n, "alpha": alpha, "family": family.name(), "bound": bound,
                        "achieved": achieved, "residual": achieved - bound, "gme": gme, "converged": conv,
                    }),
                    None => json!({ "n": n, "alpha": alpha, "family": family.name(), "error": true }),
                })
                .collect();
            format!("{}\n", serde_json::Value::Array(items))
        }
    };
    emit(a.out.output.as_deref(), &text)?;
    match first_error {
        Some(e) => Err(CliError {
            code: e.code,
            message: format!("some sweep tasks failed; first: {}", e.message),
        }),
        None => Ok(ExitCode::SUCCESS),
    }
}

pub fn qfim(a: QfimArgs) -> CliResult {
    let probe = io::parse_state(&read(&a.state)?)?;
    let dims = match &probe {
        ProbeFile::Pure(s) => s.site_dims().to_vec(),
        ProbeFile::Mixed(r) => r.site_dims().to_vec(),
    };
    let h = match &a.hamiltonian {
        Some(path) => io::parse_hamiltonian(&read(path)?)?,
        None if dims.iter().all(|&d| d == 2) => LocalHamiltonian::pauli_z(dims.len())?,
        None => return Err(usage("non-qubit state needs --hamiltonian")),
    };
    let f: FisherInfo<f64> = match &probe {
        ProbeFile::Pure(s) => qfim_pure(s, &h)?,
        ProbeFile::Mixed(r) => qfim_mixed(r, &h)?,
    };
    emit(a.output.as_deref(), &io::write_matrix(f.matrix()))?;
    Ok(ExitCode::SUCCESS)
}

pub fn probe(a: ProbeArgs) -> CliResult {
    if a.n == 0 {
        return Err(usage("--n must be at least 1"));
    }
    let state = match a.kind {
        ProbeKind::Ghz => {
            let p = match (a.theta, a.phi) {
                (Some(theta), Some(phi)) => GhzParams { theta, phi, n: a.n },
                _ => GhzParams::optimal(a.n, check_alpha(a.alpha)?),
            };
            ghz(p)?
        }
        ProbeKind::Plus => product(&vec![(std::f64::consts::FRAC_PI_2, 0.0); a.n])?,
    };
    emit(a.output.as_deref(), &io::write_state(&state))?;
    Ok(ExitCode::SUCCESS)
}
