//! Nelder-Mead simplex search on scaled coordinates.
//!
//! Coefficients: reflection 1, expansion 2, contraction 0.5, shrink 0.5.
//! Proposed points are clamped into the unit box; a candidate that lands
//! exactly on an existing vertex after clamping is never accepted as a
//! replacement (that would collapse the simplex against a bound), the step
//! falls through to a contraction or shrink instead.

use super::{
    clip_unit, coincides, initial_simplex, simplex_converged, scale, Eval, Flow, OptResult,
    Runner, ScaledProblem, Termination,
};

pub fn nelder_mead<F>(mut p: ScaledProblem<F>, max_fev: usize) -> OptResult
where
    F: FnMut(&[f64]) -> Eval,
{
    let scaled_tol = p.scaled_tol();
    let u0 = scale(&p.init, &p.lb, &p.ub).expect("init validated at construction");
    let mut runner = Runner::new(&p.lb, &p.ub, &mut p.objective, max_fev);

    // Evaluate the initial simplex; bail out early on budget/abort.
    let mut vertices: Vec<(Vec<f64>, f64)> = Vec::new();
    for v in initial_simplex(&u0, &scaled_tol) {
        match runner.eval(&v) {
            Flow::Val(f) => vertices.push((v, f)),
            Flow::Stop => return runner.finish(Termination::ToleranceReached, &p.init),
        }
    }

    let n = p.dim();
    loop {
        // stable sort keeps the earlier vertex first on ties
        vertices.sort_by(|a, b| a.1.total_cmp(&b.1));
        if simplex_converged(&vertices, &scaled_tol) {
            return runner.finish(Termination::ToleranceReached, &p.init);
        }

        let mut centroid = vec![0.0; n];
        for (v, _) in vertices.iter().take(n) {
            for c in 0..n {
                centroid[c] += v[c];
            }
        }
        for c in centroid.iter_mut() {
            *c /= n as f64;
        }

        let worst = vertices[n].0.clone();
        let f_best = vertices[0].1;
        let f_second_worst = vertices[n - 1].1;
        let f_worst = vertices[n].1;

        let propose = |coeff: f64| -> Vec<f64> {
            let mut u: Vec<f64> = (0..n)
                .map(|c| centroid[c] + coeff * (centroid[c] - worst[c]))
                .collect();
            clip_unit(&mut u);
            u
        };
        let degenerate = |u: &[f64], vs: &[(Vec<f64>, f64)]| vs.iter().any(|(v, _)| coincides(u, v));

        let reflected = propose(1.0);
        let f_reflected = if degenerate(&reflected, &vertices) {
            None
        } else {
            match runner.eval(&reflected) {
                Flow::Val(f) => Some(f),
                Flow::Stop => return runner.finish(Termination::ToleranceReached, &p.init),
            }
        };

        let mut shrink = false;
        match f_reflected {
            Some(f_r) if f_r < f_best => {
                // try to expand
                let expanded = propose(2.0);
                if degenerate(&expanded, &vertices) || coincides(&expanded, &reflected) {
                    vertices[n] = (reflected, f_r);
                } else {
                    match runner.eval(&expanded) {
                        Flow::Val(f_e) => {
                            if f_e < f_r {
                                vertices[n] = (expanded, f_e);
                            } else {
                                vertices[n] = (reflected, f_r);
                            }
                        }
                        Flow::Stop => {
                            return runner.finish(Termination::ToleranceReached, &p.init)
                        }
                    }
                }
            }
            Some(f_r) if f_r < f_second_worst => {
                vertices[n] = (reflected, f_r);
            }
            Some(f_r) if f_r < f_worst => {
                // outside contraction
                let outside = {
                    let mut u: Vec<f64> = (0..n)
                        .map(|c| centroid[c] + 0.5 * (reflected[c] - centroid[c]))
                        .collect();
                    clip_unit(&mut u);
                    u
                };
                if degenerate(&outside, &vertices) || coincides(&outside, &reflected) {
                    shrink = true;
                } else {
                    match runner.eval(&outside) {
                        Flow::Val(f_oc) => {
                            if f_oc <= f_r {
                                vertices[n] = (outside, f_oc);
                            } else {
                                shrink = true;
                            }
                        }
                        Flow::Stop => {
                            return runner.finish(Termination::ToleranceReached, &p.init)
                        }
                    }
                }
            }
            _ => {
                // reflection failed (worse than worst, or degenerate): inside contraction
                let inside = propose(-0.5);
                if degenerate(&inside, &vertices) {
                    shrink = true;
                } else {
                    match runner.eval(&inside) {
                        Flow::Val(f_ic) => {
                            if f_ic < f_worst {
                                vertices[n] = (inside, f_ic);
                            } else {
                                shrink = true;
                            }
                        }
                        Flow::Stop => {
                            return runner.finish(Termination::ToleranceReached, &p.init)
                        }
                    }
                }
            }
        }

        if shrink {
            let best = vertices[0].0.clone();
            for k in 1..=n {
                let u: Vec<f64> = (0..n)
                    .map(|c| best[c] + 0.5 * (vertices[k].0[c] - best[c]))
                    .collect();
                match runner.eval(&u) {
                    Flow::Val(f) => vertices[k] = (u, f),
                    Flow::Stop => return runner.finish(Termination::ToleranceReached, &p.init),
                }
            }
        }
    }
}
