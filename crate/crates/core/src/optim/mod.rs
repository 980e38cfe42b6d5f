//! Bound-constrained derivative-free optimisers.
//!
//! All algorithms work internally on `[0,1]^n` scaled coordinates so that
//! per-parameter tolerances in heterogeneous units (microseconds, seconds,
//! hertz) become commensurate; trajectories are recorded in native units.
//! Every point handed to the objective is clamped into the box first.

mod grid;
mod mds;
mod nelder_mead;
mod trust_region;

pub use grid::grid_search;
pub use mds::multidimensional_search;
pub use nelder_mead::nelder_mead;
pub use trust_region::trust_region_interp;

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum OptimError {
    #[error("{what} has length {got}, expected {expected}")]
    DimensionMismatch {
        what: &'static str,
        got: usize,
        expected: usize,
    },
    #[error("problem dimension must be at least 1")]
    ZeroDim,
    #[error("lb[{index}] = {lb} is not below ub[{index}] = {ub}")]
    BoundOrder { index: usize, lb: f64, ub: f64 },
    #[error("init[{index}] = {init} lies outside [{lb}, {ub}]")]
    InitOutOfBounds {
        index: usize,
        init: f64,
        lb: f64,
        ub: f64,
    },
    #[error("tol[{index}] = {tol} must be positive and smaller than ub - lb = {range}")]
    BadTol { index: usize, tol: f64, range: f64 },
    #[error("x[{index}] = {value} lies outside [{lb}, {ub}]")]
    ScaleOutOfBounds {
        index: usize,
        value: f64,
        lb: f64,
        ub: f64,
    },
    #[error("grid steps[{index}] = {steps} must be at least 2")]
    GridSteps { index: usize, steps: usize },
}

/// Outcome of one objective evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Eval {
    Cost(f64),
    /// The backend asked the optimisation to stop; the best point so far is
    /// returned with `Termination::Aborted`.
    Abort,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    ToleranceReached,
    MaxFev,
    Aborted,
}

impl std::fmt::Display for Termination {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Termination::ToleranceReached => "tolerance_reached",
            Termination::MaxFev => "max_fev",
            Termination::Aborted => "aborted",
        };
        f.write_str(s)
    }
}

impl std::str::FromStr for Termination {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "tolerance_reached" => Ok(Termination::ToleranceReached),
            "max_fev" => Ok(Termination::MaxFev),
            "aborted" => Ok(Termination::Aborted),
            other => Err(format!("unknown termination `{other}`")),
        }
    }
}

/// Result of one optimisation run. `x_best` is the first-encountered
/// minimum of the trajectory; `nfev` equals the trajectory length.
#[derive(Debug, Clone, PartialEq)]
pub struct OptResult {
    pub x_best: Vec<f64>,
    pub f_best: f64,
    pub nfev: usize,
    pub trajectory: Vec<(Vec<f64>, f64)>,
    pub termination: Termination,
}

/// A box-constrained minimisation problem with per-coordinate tolerances.
///
/// The objective receives points in native units and reports either a cost
/// or an abort request.
pub struct ScaledProblem<F> {
    lb: Vec<f64>,
    ub: Vec<f64>,
    init: Vec<f64>,
    tol: Vec<f64>,
    objective: F,
}

impl<F: FnMut(&[f64]) -> Eval> ScaledProblem<F> {
    pub fn new(
        lb: Vec<f64>,
        ub: Vec<f64>,
        init: Vec<f64>,
        tol: Vec<f64>,
        objective: F,
    ) -> Result<Self, OptimError> {
        let dim = lb.len();
        if dim == 0 {
            return Err(OptimError::ZeroDim);
        }
        for (what, v) in [("ub", &ub), ("init", &init), ("tol", &tol)] {
            if v.len() != dim {
                return Err(OptimError::DimensionMismatch {
                    what,
                    got: v.len(),
                    expected: dim,
                });
            }
        }
        for i in 0..dim {
            if !(lb[i] < ub[i]) {
                return Err(OptimError::BoundOrder {
                    index: i,
                    lb: lb[i],
                    ub: ub[i],
                });
            }
            if !(lb[i] <= init[i] && init[i] <= ub[i]) {
                return Err(OptimError::InitOutOfBounds {
                    index: i,
                    init: init[i],
                    lb: lb[i],
                    ub: ub[i],
                });
            }
            let range = ub[i] - lb[i];
            if !(tol[i] > 0.0 && tol[i] < range) {
                return Err(OptimError::BadTol {
                    index: i,
                    tol: tol[i],
                    range,
                });
            }
        }
        Ok(Self {
            lb,
            ub,
            init,
            tol,
            objective,
        })
    }

    pub fn dim(&self) -> usize {
        self.lb.len()
    }

    pub fn lb(&self) -> &[f64] {
        &self.lb
    }

    pub fn ub(&self) -> &[f64] {
        &self.ub
    }

    pub fn init(&self) -> &[f64] {
        &self.init
    }

    pub fn tol(&self) -> &[f64] {
        &self.tol
    }

    /// Per-coordinate tolerances mapped onto `[0,1]` scaled space.
    pub fn scaled_tol(&self) -> Vec<f64> {
        (0..self.dim())
            .map(|i| self.tol[i] / (self.ub[i] - self.lb[i]))
            .collect()
    }
}

/// Map native-unit `x` into `[0,1]^n`. Out-of-bounds input is an error.
pub fn scale(x: &[f64], lb: &[f64], ub: &[f64]) -> Result<Vec<f64>, OptimError> {
    assert_eq!(x.len(), lb.len());
    assert_eq!(x.len(), ub.len());
    let mut out = Vec::with_capacity(x.len());
    for i in 0..x.len() {
        if !(lb[i] <= x[i] && x[i] <= ub[i]) {
            return Err(OptimError::ScaleOutOfBounds {
                index: i,
                value: x[i],
                lb: lb[i],
                ub: ub[i],
            });
        }
        out.push((x[i] - lb[i]) / (ub[i] - lb[i]));
    }
    Ok(out)
}

/// Map scaled `u` back to native units, clamped into `[lb, ub]`.
pub fn unscale(u: &[f64], lb: &[f64], ub: &[f64]) -> Vec<f64> {
    assert_eq!(u.len(), lb.len());
    let mut out = Vec::with_capacity(u.len());
    for i in 0..u.len() {
        let x = if u[i] >= 1.0 {
            ub[i]
        } else if u[i] <= 0.0 {
            lb[i]
        } else {
            (lb[i] + u[i] * (ub[i] - lb[i])).clamp(lb[i], ub[i])
        };
        out.push(x);
    }
    out
}

pub(crate) fn clip_unit(u: &mut [f64]) {
    for v in u.iter_mut() {
        *v = v.clamp(0.0, 1.0);
    }
}

/// Points closer than this in every scaled coordinate are treated as the
/// same acquisition.
pub(crate) const COINCIDENCE_EPS: f64 = 1e-12;

pub(crate) fn coincides(a: &[f64], b: &[f64]) -> bool {
    a.iter().zip(b).all(|(x, y)| (x - y).abs() <= COINCIDENCE_EPS)
}

pub(crate) enum Flow {
    Val(f64),
    Stop,
}

/// Shared evaluation bookkeeping: budget enforcement, abort handling, and
/// the native-unit trajectory that every algorithm reports.
pub(crate) struct Runner<'a, F> {
    lb: &'a [f64],
    ub: &'a [f64],
    objective: &'a mut F,
    max_fev: usize,
    pub trajectory: Vec<(Vec<f64>, f64)>,
    stop: Option<Termination>,
}

impl<'a, F: FnMut(&[f64]) -> Eval> Runner<'a, F> {
    pub fn new(lb: &'a [f64], ub: &'a [f64], objective: &'a mut F, max_fev: usize) -> Self {
        Self {
            lb,
            ub,
            objective,
            max_fev,
            trajectory: Vec::new(),
            stop: None,
        }
    }

    /// Evaluate at scaled point `u` (already inside the unit box).
    pub fn eval(&mut self, u: &[f64]) -> Flow {
        if self.stop.is_some() {
            return Flow::Stop;
        }
        if self.trajectory.len() >= self.max_fev {
            self.stop = Some(Termination::MaxFev);
            return Flow::Stop;
        }
        let x = unscale(u, self.lb, self.ub);
        match (self.objective)(&x) {
            Eval::Cost(f) => {
                self.trajectory.push((x, f));
                Flow::Val(f)
            }
            Eval::Abort => {
                self.stop = Some(Termination::Aborted);
                Flow::Stop
            }
        }
    }

    pub fn stopped(&self) -> bool {
        self.stop.is_some()
    }

    /// Build the result; `natural` is the termination to report when neither
    /// the budget nor an abort cut the run short.
    pub fn finish(self, natural: Termination, init: &[f64]) -> OptResult {
        let termination = self.stop.unwrap_or(natural);
        let trajectory = self.trajectory;
        let mut best_idx = None;
        for (i, (_, f)) in trajectory.iter().enumerate() {
            match best_idx {
                None => best_idx = Some(i),
                Some(b) => {
                    if *f < trajectory[b].1 {
                        best_idx = Some(i);
                    }
                }
            }
        }
        let (x_best, f_best) = match best_idx {
            Some(i) => (trajectory[i].0.clone(), trajectory[i].1),
            None => (init.to_vec(), f64::NAN),
        };
        OptResult {
            x_best,
            f_best,
            nfev: trajectory.len(),
            trajectory,
            termination,
        }
    }
}

/// Initial simplex shared by the two simplex algorithms: the scaled initial
/// point plus one vertex per coordinate, offset by `max(0.1, 10*tol)` and
/// reflected inward when that would leave the box.
pub(crate) fn initial_simplex(u0: &[f64], scaled_tol: &[f64]) -> Vec<Vec<f64>> {
    let n = u0.len();
    let mut vertices = Vec::with_capacity(n + 1);
    vertices.push(u0.to_vec());
    for i in 0..n {
        let off = (10.0 * scaled_tol[i]).max(0.1);
        let mut v = u0.to_vec();
        v[i] = if u0[i] + off <= 1.0 {
            u0[i] + off
        } else {
            u0[i] - off
        };
        clip_unit(&mut v);
        vertices.push(v);
    }
    vertices
}

/// Simplex convergence test: the per-coordinate spread of the vertices must
/// fall below the scaled tolerance in every coordinate.
pub(crate) fn simplex_converged(vertices: &[(Vec<f64>, f64)], scaled_tol: &[f64]) -> bool {
    let n = scaled_tol.len();
    for c in 0..n {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for (v, _) in vertices {
            lo = lo.min(v[c]);
            hi = hi.max(v[c]);
        }
        if hi - lo >= scaled_tol[c] {
            return false;
        }
    }
    true
}
