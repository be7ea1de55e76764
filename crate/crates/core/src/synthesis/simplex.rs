/// Outcome of a simplex search. `x`/`fx` is the best point ever evaluated.
#[derive(Clone, Debug, PartialEq)]
pub struct SimplexResult {
    pub x: Vec<f64>,
    pub fx: f64,
    pub iterations: usize,
    pub evaluations: usize,
    pub converged: bool,
}

const REFLECT: f64 = 1.0;
const EXPAND: f64 = 2.0;
const CONTRACT: f64 = 0.5;
const SHRINK: f64 = 0.5;
/// Simplex diameter (max-norm) below which a flat simplex counts as converged.
const XTOL: f64 = 1e-9;

/// Nelder–Mead minimization from `x0` with an axis-aligned initial simplex
/// of per-coordinate size `steps`. Stops after `max_evals` evaluations or
/// once the simplex has collapsed and the spread of its values is below
/// `ftol`.
pub fn nelder_mead<F>(mut f: F, x0: &[f64], steps: &[f64], max_evals: usize, ftol: f64) -> SimplexResult
where
    F: FnMut(&[f64]) -> f64,
{
    let n = x0.len();
    assert_eq!(steps.len(), n, "one step per coordinate");
    let mut evals = 0usize;
    let mut best = (x0.to_vec(), f64::INFINITY);
    let mut eval = |x: &[f64], evals: &mut usize, best: &mut (Vec<f64>, f64)| {
        *evals += 1;
        let v = f(x);
        let v = if v.is_nan() { f64::INFINITY } else { v };
        if v < best.1 {
            *best = (x.to_vec(), v);
        }
        v
    };

    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    let f0 = eval(x0, &mut evals, &mut best);
    simplex.push((x0.to_vec(), f0));
    for i in 0..n {
        if evals >= max_evals {
            break;
        }
        let mut x = x0.to_vec();
        x[i] += steps[i];
        let v = eval(&x, &mut evals, &mut best);
        simplex.push((x, v));
    }

    let mut iterations = 0;
    let mut converged = false;
    while simplex.len() == n + 1 && evals < max_evals {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let diameter = simplex[1..]
            .iter()
            .flat_map(|(x, _)| x.iter().zip(&simplex[0].0).map(|(a, b)| (a - b).abs()))
            .fold(0.0, f64::max);
        if simplex[n].1 - simplex[0].1 <= ftol && diameter <= XTOL {
            converged = true;
            break;
        }
        iterations += 1;
        let centroid: Vec<f64> =
            (0..n).map(|j| simplex[..n].iter().map(|(x, _)| x[j]).sum::<f64>() / n as f64).collect();
        let toward = |coef: f64, worst: &[f64]| -> Vec<f64> {
            centroid.iter().zip(worst).map(|(c, w)| c + coef * (c - w)).collect()
        };
        let worst = simplex[n].0.clone();
        let xr = toward(REFLECT, &worst);
        let fr = eval(&xr, &mut evals, &mut best);
        if fr < simplex[0].1 {
            if evals >= max_evals {
                simplex[n] = (xr, fr);
                break;
            }
            let xe = toward(EXPAND, &worst);
            let fe = eval(&xe, &mut evals, &mut best);
            simplex[n] = if fe < fr { (xe, fe) } else { (xr, fr) };
        } else if fr < simplex[n - 1].1 {
            simplex[n] = (xr, fr);
        } else {
            if evals >= max_evals {
                break;
            }
            let (xc, fc) = if fr < simplex[n].1 {
                let xc = toward(CONTRACT, &worst);
                let fc = eval(&xc, &mut evals, &mut best);
                (xc, fc)
            } else {
                let xc = toward(-CONTRACT, &worst);
                let fc = eval(&xc, &mut evals, &mut best);
                (xc, fc)
            };
            if fc < simplex[n].1.min(fr) {
                simplex[n] = (xc, fc);
            } else {
                let x0 = simplex[0].0.clone();
                for vertex in simplex.iter_mut().skip(1) {
                    if evals >= max_evals {
                        break;
                    }
                    let x: Vec<f64> = x0.iter().zip(&vertex.0).map(|(a, b)| a + SHRINK * (b - a)).collect();
                    let v = eval(&x, &mut evals, &mut best);
                    *vertex = (x, v);
                }
            }
        }
    }
    SimplexResult { x: best.0, fx: best.1, iterations, evaluations: evals, converged }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimizes_rosenbrock() {
        let rosen = |x: &[f64]| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2);
        let r = nelder_mead(rosen, &[-1.2, 1.0], &[0.1, 0.1], 2000, 1e-14);
        assert!(r.fx < 1e-8, "{r:?}");
        assert!((r.x[0] - 1.0).abs() < 1e-3);
        assert!(r.converged);
    }

    #[test]
    fn respects_eval_budget_and_best_seen() {
        let mut calls = 0;
        let r = nelder_mead(
            |x: &[f64]| {
                calls += 1;
                x.iter().map(|v| v * v).sum()
            },
            &[1.0, 2.0, 3.0],
            &[0.5; 3],
            17,
            0.0,
        );
        assert_eq!(calls, 17);
        assert_eq!(r.evaluations, 17);
        assert!(r.fx <= 14.0);
    }

    #[test]
    fn infinite_values_are_tolerated() {
        let f = |x: &[f64]| if x[0] < 0.0 { f64::NAN } else { (x[0] - 0.3).powi(2) };
        let r = nelder_mead(f, &[0.05], &[-0.1], 200, 1e-16);
        assert!((r.x[0] - 0.3).abs() < 1e-4, "{r:?}");
    }
}
