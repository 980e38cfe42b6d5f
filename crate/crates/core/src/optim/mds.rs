//! Multidimensional search: rotation, expansion, and contraction of the
//! whole simplex through the current best vertex (expansion 2,
//! contraction 0.5). Like the Nelder-Mead variant here, proposals are
//! clamped into the unit box; a rotated or expanded vertex that clamps onto
//! the pivot reuses the pivot's cost instead of spending an acquisition.

use super::{
    clip_unit, coincides, initial_simplex, simplex_converged, scale, Eval, Flow, OptResult,
    Runner, ScaledProblem, Termination,
};

pub fn multidimensional_search<F>(mut p: ScaledProblem<F>, max_fev: usize) -> OptResult
where
    F: FnMut(&[f64]) -> Eval,
{
    let scaled_tol = p.scaled_tol();
    let u0 = scale(&p.init, &p.lb, &p.ub).expect("init validated at construction");
    let mut runner = Runner::new(&p.lb, &p.ub, &mut p.objective, max_fev);

    let mut vertices: Vec<(Vec<f64>, f64)> = Vec::new();
    for v in initial_simplex(&u0, &scaled_tol) {
        match runner.eval(&v) {
            Flow::Val(f) => vertices.push((v, f)),
            Flow::Stop => return runner.finish(Termination::ToleranceReached, &p.init),
        }
    }

    let n = p.dim();
    // index of the pivot (best) vertex; first index wins ties
    let mut best = argmin(&vertices);
    loop {
        if simplex_converged(&vertices, &scaled_tol) {
            return runner.finish(Termination::ToleranceReached, &p.init);
        }
        let pivot = vertices[best].0.clone();
        let f_pivot = vertices[best].1;
        let others: Vec<usize> = (0..=n).filter(|&k| k != best).collect();

        // transform every non-pivot vertex through the pivot
        let transformed = |coeff: f64, runner: &mut Runner<F>| -> Option<Vec<(Vec<f64>, f64)>> {
            let mut out = Vec::with_capacity(n);
            for &k in &others {
                let mut u: Vec<f64> = (0..n)
                    .map(|c| pivot[c] + coeff * (pivot[c] - vertices[k].0[c]))
                    .collect();
                clip_unit(&mut u);
                let f = if coincides(&u, &pivot) {
                    f_pivot
                } else {
                    match runner.eval(&u) {
                        Flow::Val(f) => f,
                        Flow::Stop => return None,
                    }
                };
                out.push((u, f));
            }
            Some(out)
        };

        let rotated = match transformed(1.0, &mut runner) {
            Some(set) => set,
            None => return runner.finish(Termination::ToleranceReached, &p.init),
        };
        let rotated_best = min_cost(&rotated);

        let accepted = if rotated_best < f_pivot {
            let expanded = match transformed(2.0, &mut runner) {
                Some(set) => set,
                None => return runner.finish(Termination::ToleranceReached, &p.init),
            };
            if min_cost(&expanded) < rotated_best {
                expanded
            } else {
                rotated
            }
        } else {
            match transformed(-0.5, &mut runner) {
                Some(set) => set,
                None => return runner.finish(Termination::ToleranceReached, &p.init),
            }
        };

        for (slot, vertex) in others.into_iter().zip(accepted) {
            vertices[slot] = vertex;
        }
        best = argmin(&vertices);
    }
}

fn argmin(vertices: &[(Vec<f64>, f64)]) -> usize {
    let mut idx = 0;
    for (i, (_, f)) in vertices.iter().enumerate().skip(1) {
        if *f < vertices[idx].1 {
            idx = i;
        }
    }
    idx
}

fn min_cost(set: &[(Vec<f64>, f64)]) -> f64 {
    set.iter().map(|(_, f)| *f).fold(f64::INFINITY, f64::min)
}
