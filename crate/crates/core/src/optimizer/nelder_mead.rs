//! Derivative-free simplex minimization with dimension-adaptive coefficients
//! (reflection 1, expansion 1 + 2/n, contraction 0.75 - 1/2n, shrink 1 - 1/n).

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimplexOptions {
    pub max_iters: usize,
    /// Converged when every vertex is within this distance (max-norm) of the best.
    pub tol_step: f64,
    /// ... or when the vertex values, and the value at the centroid, agree to within this.
    pub tol_val: f64,
    /// Edge length of the initial simplex.
    pub initial_step: f64,
}

impl Default for SimplexOptions {
    fn default() -> Self {
        Self {
            max_iters: 5000,
            tol_step: 1e-8,
            tol_val: 1e-10,
            initial_step: 0.3,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimplexOutcome {
    pub x: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    pub converged: bool,
    /// `(iteration, best value)` recorded whenever the best value improves.
    pub trace: Vec<(usize, f64)>,
}

fn sanitize(v: f64) -> f64 {
    if v.is_nan() {
        f64::INFINITY
    } else {
        v
    }
}

fn affine(a: &[f64], b: &[f64], t: f64) -> Vec<f64> {
    // a + t (b - a)
    a.iter().zip(b).map(|(x, y)| x + t * (y - x)).collect()
}

pub fn minimize(mut f: impl FnMut(&[f64]) -> f64, x0: &[f64], opts: &SimplexOptions) -> SimplexOutcome {
    let n = x0.len();
    let mut eval = |x: &[f64]| sanitize(f(x));
    if n == 0 {
        let value = eval(x0);
        return SimplexOutcome {
            x: Vec::new(),
            value,
            iterations: 0,
            converged: true,
            trace: vec![(0, value)],
        };
    }
    let nf = n as f64;
    let (rho, chi, gamma, sigma) = (1.0, 1.0 + 2.0 / nf, 0.75 - 0.5 / nf, 1.0 - 1.0 / nf);

    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    simplex.push((x0.to_vec(), eval(x0)));
    for k in 0..n {
        let mut x = x0.to_vec();
        x[k] += opts.initial_step;
        let v = eval(&x);
        simplex.push((x, v));
    }
    let order = |s: &mut Vec<(Vec<f64>, f64)>| {
        // stable: earlier vertices win ties
        s.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(std::cmp::Ordering::Equal));
    };
    order(&mut simplex);
    let mut trace = vec![(0, simplex[0].1)];
    let mut converged = false;
    let mut iterations = 0;

    while iterations < opts.max_iters {
        let best = &simplex[0];
        let spread = simplex[n].1 - best.1;
        let diameter = simplex[1..]
            .iter()
            .flat_map(|(x, _)| x.iter().zip(&best.0).map(|(a, b)| (a - b).abs()))
            .fold(0.0, f64::max);
        if diameter < opts.tol_step {
            converged = true;
            break;
        }
        if best.1.is_finite() && spread.is_finite() && spread < opts.tol_val {
            // Equal vertex values can also mean the simplex straddles a valley;
            // accept only if the objective is flat at the centroid too.
            let mid: Vec<f64> = (0..n)
                .map(|k| simplex.iter().map(|(x, _)| x[k]).sum::<f64>() / (nf + 1.0))
                .collect();
            if (eval(&mid) - best.1).abs() < opts.tol_val {
                converged = true;
                break;
            }
        }
        iterations += 1;

        let mut centroid = vec![0.0; n];
        for (x, _) in &simplex[..n] {
            for (c, xi) in centroid.iter_mut().zip(x) {
                *c += xi / nf;
            }
        }
        let worst = simplex[n].0.clone();
        let f_worst = simplex[n].1;
        let f_second = simplex[n - 1].1;
        let f_best = simplex[0].1;

        let xr = affine(&centroid, &worst, -rho);
        let fr = eval(&xr);
        let mut shrink = false;
        if fr < f_best {
            let xe = affine(&centroid, &worst, -rho * chi);
            let fe = eval(&xe);
            simplex[n] = if fe < fr { (xe, fe) } else { (xr, fr) };
        } else if fr < f_second {
            simplex[n] = (xr, fr);
        } else if fr < f_worst {
            let xc = affine(&centroid, &worst, -rho * gamma);
            let fc = eval(&xc);
            if fc <= fr {
                simplex[n] = (xc, fc);
            } else {
                shrink = true;
            }
        } else {
            let xc = affine(&centroid, &worst, gamma);
            let fc = eval(&xc);
            if fc < f_worst {
                simplex[n] = (xc, fc);
            } else {
                shrink = true;
            }
        }
        if shrink {
            let x_best = simplex[0].0.clone();
            for vertex in simplex.iter_mut().skip(1) {
                let x = affine(&x_best, &vertex.0, sigma);
                let v = eval(&x);
                *vertex = (x, v);
            }
        }
        order(&mut simplex);
        if simplex[0].1 < trace.last().map_or(f64::INFINITY, |t| t.1) {
            trace.push((iterations, simplex[0].1));
        }
    }

    let (x, value) = simplex.swap_remove(0);
    SimplexOutcome {
        x,
        value,
        iterations,
        converged,
        trace,
    }
}
