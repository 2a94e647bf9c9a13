//! Compact Nelder-Mead simplex minimizer for the CSS objective.

pub(crate) struct NelderMeadOutcome {
    pub best: Vec<f64>,
    pub best_objective: f64,
    /// Best objective after each iteration; non-increasing by construction.
    pub trace: Vec<f64>,
    pub converged: bool,
    pub iterations: usize,
}

const REFLECT: f64 = 1.0;
const EXPAND: f64 = 2.0;
const CONTRACT: f64 = 0.5;
const SHRINK: f64 = 0.5;

pub(crate) fn minimize<F: FnMut(&[f64]) -> f64>(
    mut objective: F,
    start: &[f64],
    initial_step: f64,
    objective_tol: f64,
    param_tol: f64,
    max_iterations: usize,
) -> NelderMeadOutcome {
    let dim = start.len();
    debug_assert!(dim > 0);

    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(dim + 1);
    simplex.push(start.to_vec());
    for i in 0..dim {
        let mut v = start.to_vec();
        v[i] += initial_step;
        simplex.push(v);
    }
    let mut values: Vec<f64> = simplex.iter().map(|v| objective(v)).collect();

    let mut trace = Vec::with_capacity(max_iterations.min(4096));
    let mut converged = false;
    let mut iterations = 0;

    for iter in 0..max_iterations {
        iterations = iter + 1;

        // order simplex: best first
        let mut order: Vec<usize> = (0..=dim).collect();
        order.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).expect("finite objective"));
        simplex = order.iter().map(|&i| simplex[i].clone()).collect();
        values = order.iter().map(|&i| values[i]).collect();

        trace.push(values[0]);

        let spread = values[dim] - values[0];
        let mut max_param_spread = 0.0f64;
        for v in &simplex[1..] {
            for (a, b) in v.iter().zip(&simplex[0]) {
                max_param_spread = max_param_spread.max((a - b).abs());
            }
        }
        if spread <= objective_tol * (1.0 + values[0].abs()) || max_param_spread <= param_tol {
            converged = true;
            break;
        }

        // centroid of all but the worst vertex
        let mut centroid = vec![0.0; dim];
        for v in &simplex[..dim] {
            for (c, x) in centroid.iter_mut().zip(v) {
                *c += x / dim as f64;
            }
        }

        let point_at = |coef: f64, centroid: &[f64], worst: &[f64]| -> Vec<f64> {
            centroid
                .iter()
                .zip(worst)
                .map(|(c, w)| c + coef * (c - w))
                .collect()
        };

        let reflected = point_at(REFLECT, &centroid, &simplex[dim]);
        let f_reflected = objective(&reflected);

        if f_reflected < values[0] {
            let expanded = point_at(EXPAND, &centroid, &simplex[dim]);
            let f_expanded = objective(&expanded);
            if f_expanded < f_reflected {
                simplex[dim] = expanded;
                values[dim] = f_expanded;
            } else {
                simplex[dim] = reflected;
                values[dim] = f_reflected;
            }
        } else if f_reflected < values[dim - 1] {
            simplex[dim] = reflected;
            values[dim] = f_reflected;
        } else {
            let contracted = if f_reflected < values[dim] {
                point_at(CONTRACT, &centroid, &simplex[dim])
            } else {
                point_at(-CONTRACT, &centroid, &simplex[dim])
            };
            let f_contracted = objective(&contracted);
            if f_contracted < values[dim].min(f_reflected) {
                simplex[dim] = contracted;
                values[dim] = f_contracted;
            } else {
                // shrink toward the best vertex
                let best_vertex = simplex[0].clone();
                for i in 1..=dim {
                    for (x, b) in simplex[i].iter_mut().zip(&best_vertex) {
                        *x = b + SHRINK * (*x - b);
                    }
                    values[i] = objective(&simplex[i]);
                }
            }
        }
    }

    // final ordering for the reported best
    let mut best_idx = 0;
    for i in 1..=dim {
        if values[i] < values[best_idx] {
            best_idx = i;
        }
    }
    trace.push(values[best_idx]);

    NelderMeadOutcome {
        best: simplex[best_idx].clone(),
        best_objective: values[best_idx],
        trace,
        converged,
        iterations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimizes_quadratic_bowl() {
        let out = minimize(
            |x| (x[0] - 3.0).powi(2) + (x[1] + 1.0).powi(2),
            &[0.0, 0.0],
            0.1,
            1e-12,
            1e-10,
            2000,
        );
        assert!(out.converged);
        assert!((out.best[0] - 3.0).abs() < 1e-6);
        assert!((out.best[1] + 1.0).abs() < 1e-6);
    }

    #[test]
    fn trace_is_monotone_non_increasing() {
        let out = minimize(
            |x| x[0].powi(4) + (x[1] - 2.0).powi(2) + x[0].abs(),
            &[1.5, -1.0],
            0.1,
            1e-12,
            1e-10,
            2000,
        );
        for w in out.trace.windows(2) {
            assert!(w[1] <= w[0] + 1e-15, "trace increased: {} -> {}", w[0], w[1]);
        }
    }
}
