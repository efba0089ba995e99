//! Latent budget model: `π(j|i) = Σ_k α(k|i) β(j|k)`, fitted by EM.
//!
//! Rows of `A` (mixing parameters) and columns of `B` (latent budgets) lie on
//! the probability simplex. EM keeps both constraints by construction, so no
//! projection step is needed.

use ndarray::{Array1, Array2, Axis};
use rand::Rng;
use rand_distr::{Distribution, Exp1};
use rayon::prelude::*;

use crate::data::{CompositionMatrix, ContingencyTable};
use crate::error::{Error, Result};
use crate::scalar::{argmax, Scalar};

/// Floor applied to `π` inside logarithms and divisions.
pub const PI_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct FitConfig {
    pub k: usize,
    pub max_iterations: usize,
    /// Stop when the log-likelihood gain of one EM step falls below this.
    pub tolerance: f64,
    pub restarts: usize,
    pub seed: u64,
}

impl FitConfig {
    pub fn new(k: usize) -> Self {
        FitConfig {
            k,
            max_iterations: 5000,
            tolerance: 1e-9,
            restarts: 10,
            seed: 1,
        }
    }

    fn validate(&self, n_rows: usize, n_cols: usize) -> Result<()> {
        let k_max = n_rows.min(n_cols);
        if self.k < 1 || self.k > k_max {
            return Err(Error::invalid(format!(
                "K = {} outside 1..={k_max}",
                self.k
            )));
        }
        if !(self.tolerance > 0.0) {
            return Err(Error::invalid("tolerance must be positive"));
        }
        if self.restarts < 1 {
            return Err(Error::invalid("at least one restart is required"));
        }
        if self.max_iterations < 1 {
            return Err(Error::invalid("max_iterations must be at least 1"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LbaModel<T> {
    /// Mixing parameters, I×K, rows on the simplex.
    pub a: Array2<T>,
    /// Latent budgets, J×K, columns on the simplex.
    pub b: Array2<T>,
    /// Log-likelihood of the starting point followed by one entry per EM step.
    pub loglik_trace: Vec<T>,
    pub converged: bool,
    pub row_labels: Vec<String>,
    pub col_labels: Vec<String>,
    pub seed: u64,
    /// Index of the restart that produced this model.
    pub restart: usize,
}

impl<T: Scalar> LbaModel<T> {
    pub fn k(&self) -> usize {
        self.a.ncols()
    }

    pub fn loglik(&self) -> T {
        *self.loglik_trace.last().expect("trace holds the starting point")
    }

    pub fn iterations(&self) -> usize {
        self.loglik_trace.len() - 1
    }

    /// Applies the same permutation to the columns of `A` and `B`.
    pub fn permute_budgets(&self, perm: &[usize]) -> Self {
        let mut out = self.clone();
        out.a = self.a.select(Axis(1), perm);
        out.b = self.b.select(Axis(1), perm);
        out
    }
}

/// Log-likelihood `Σ n_ij log π_ij` with `π` floored at [`PI_FLOOR`].
pub fn log_likelihood<T: Scalar>(counts: &Array2<T>, pi: &Array2<T>) -> T {
    let floor = T::lit(PI_FLOOR);
    counts
        .iter()
        .zip(pi.iter())
        .filter(|(n, _)| **n > T::zero())
        .map(|(&n, &p)| n * p.max(floor).ln())
        .sum()
}

/// One EM run from a given starting point.
#[derive(Debug, Clone)]
pub struct EmState<T> {
    counts: Array2<T>,
    row_totals: Array1<T>,
    pub a: Array2<T>,
    pub b: Array2<T>,
    pi: Array2<T>,
    loglik: T,
}

impl<T: Scalar> EmState<T> {
    pub fn new(ct: &ContingencyTable, a: Array2<T>, b: Array2<T>) -> Result<Self> {
        let (i, j) = ct.counts.dim();
        if a.nrows() != i || b.nrows() != j || a.ncols() != b.ncols() {
            return Err(Error::shape(format!(
                "A is {:?}, B is {:?} for a {i}x{j} table",
                a.dim(),
                b.dim()
            )));
        }
        let counts = ct.counts.mapv(|n| T::lit(n as f64));
        let row_totals = counts.sum_axis(Axis(1));
        if let Some(r) = row_totals.iter().position(|t| *t <= T::zero()) {
            return Err(Error::ZeroRow(ct.row_labels[r].clone()));
        }
        let pi = a.dot(&b.t());
        let loglik = log_likelihood(&counts, &pi);
        Ok(EmState {
            counts,
            row_totals,
            a,
            b,
            pi,
            loglik,
        })
    }

    /// Dirichlet(1) rows of `A` and columns of `B`.
    pub fn random<R: Rng>(ct: &ContingencyTable, k: usize, rng: &mut R) -> Result<Self> {
        let a = dirichlet_rows(ct.n_rows(), k, rng);
        let b = dirichlet_rows(k, ct.n_cols(), rng).reversed_axes();
        Self::new(ct, a, b)
    }

    pub fn loglik(&self) -> T {
        self.loglik
    }

    /// One E step plus M step; returns the new log-likelihood.
    pub fn step(&mut self) -> T {
        let (n_i, n_j) = self.counts.dim();
        let k = self.a.ncols();
        let floor = T::lit(PI_FLOOR);
        let mut a_acc = Array2::<T>::zeros((n_i, k));
        let mut b_acc = Array2::<T>::zeros((n_j, k));
        for i in 0..n_i {
            for j in 0..n_j {
                let n = self.counts[[i, j]];
                if n <= T::zero() {
                    continue;
                }
                let w = n / self.pi[[i, j]].max(floor);
                for kk in 0..k {
                    let mass = w * self.a[[i, kk]] * self.b[[j, kk]];
                    a_acc[[i, kk]] = a_acc[[i, kk]] + mass;
                    b_acc[[j, kk]] = b_acc[[j, kk]] + mass;
                }
            }
        }
        for i in 0..n_i {
            let total = self.row_totals[i];
            for kk in 0..k {
                self.a[[i, kk]] = a_acc[[i, kk]] / total;
            }
        }
        for kk in 0..k {
            let col_mass: T = b_acc.column(kk).sum();
            // An unused budget keeps its previous profile.
            if col_mass > T::zero() {
                for j in 0..n_j {
                    self.b[[j, kk]] = b_acc[[j, kk]] / col_mass;
                }
            }
        }
        self.pi = self.a.dot(&self.b.t());
        self.loglik = log_likelihood(&self.counts, &self.pi);
        self.loglik
    }

    /// Iterates until the gain drops below `tolerance` or `max_iterations`
    /// steps were taken. Returns the trace and the convergence flag.
    pub fn run(&mut self, max_iterations: usize, tolerance: f64) -> (Vec<T>, bool) {
        let tol = T::lit(tolerance);
        let mut trace = vec![self.loglik];
        for _ in 0..max_iterations {
            let prev = self.loglik;
            let next = self.step();
            trace.push(next);
            if (next - prev).abs() < tol {
                return (trace, true);
            }
        }
        (trace, false)
    }
}

fn dirichlet_rows<T: Scalar, R: Rng>(rows: usize, cols: usize, rng: &mut R) -> Array2<T> {
    let mut m = Array2::<T>::zeros((rows, cols));
    for mut row in m.rows_mut() {
        let draws: Vec<f64> = (0..cols).map(|_| Exp1.sample(rng)).collect();
        let total: f64 = draws.iter().sum();
        for (cell, d) in row.iter_mut().zip(draws) {
            *cell = T::lit(d / total);
        }
    }
    m
}

/// Maximum-likelihood fit over `cfg.restarts` random starts. The restart
/// with the highest final log-likelihood wins; ties go to the lowest index.
pub fn fit_lba<T: Scalar>(ct: &ContingencyTable, cfg: &FitConfig) -> Result<LbaModel<T>> {
    cfg.validate(ct.n_rows(), ct.n_cols())?;
    let runs: Vec<Result<LbaModel<T>>> = (0..cfg.restarts)
        .into_par_iter()
        .map(|restart| {
            let mut rng = crate::seeded_rng_stream(cfg.seed, restart as u64);
            let mut state = EmState::<T>::random(ct, cfg.k, &mut rng)?;
            let (trace, converged) = state.run(cfg.max_iterations, cfg.tolerance);
            Ok(LbaModel {
                a: state.a,
                b: state.b,
                loglik_trace: trace,
                converged,
                row_labels: ct.row_labels.clone(),
                col_labels: ct.col_labels.clone(),
                seed: cfg.seed,
                restart,
            })
        })
        .collect();
    let mut best: Option<LbaModel<T>> = None;
    for run in runs {
        let run = run?;
        let better = match &best {
            None => true,
            Some(b) => run.loglik() > b.loglik(),
        };
        if better {
            best = Some(run);
        }
    }
    Ok(best.expect("at least one restart"))
}

/// `Π = A Bᵀ`, the model's reconstruction of the observed budgets.
pub fn expected_budgets<T: Scalar>(m: &LbaModel<T>) -> CompositionMatrix<T> {
    CompositionMatrix {
        profiles: m.a.dot(&m.b.t()),
        row_labels: m.row_labels.clone(),
        col_labels: m.col_labels.clone(),
    }
}

/// Row-mass-weighted column means of `A`.
pub fn budget_proportions<T: Scalar>(m: &LbaModel<T>, ct: &ContingencyTable) -> Result<Array1<T>> {
    if m.row_labels != ct.row_labels || m.col_labels != ct.col_labels {
        return Err(Error::shape("model labels do not match the table"));
    }
    let grand = T::lit(ct.grand_total() as f64);
    let mass: Array1<T> = ct
        .row_totals()
        .into_iter()
        .map(|t| T::lit(t as f64) / grand)
        .collect();
    Ok(mass.dot(&m.a))
}

/// Scores and arg-max labels for a batch of records.
#[derive(Debug, Clone, PartialEq)]
pub struct Prediction<T> {
    pub scores: Array2<T>,
    pub labels: Vec<usize>,
}

impl<T: Scalar> Prediction<T> {
    pub(crate) fn from_scores(scores: Array2<T>) -> Self {
        let labels = scores.rows().into_iter().map(|r| argmax(r.iter().copied())).collect();
        Prediction { scores, labels }
    }
}

/// Predicts through `X A Bᵀ`. A record with several explanatory variables
/// gets the mean of the `Π` rows of its active levels.
pub fn lba_predict<T: Scalar>(m: &LbaModel<T>, x: &Array2<T>) -> Result<Prediction<T>> {
    if x.ncols() != m.a.nrows() {
        return Err(Error::shape(format!(
            "design has {} columns, model has {} rows",
            x.ncols(),
            m.a.nrows()
        )));
    }
    let pi = m.a.dot(&m.b.t());
    let mut scores = x.dot(&pi);
    for (mut row, active) in scores.rows_mut().into_iter().zip(x.rows()) {
        let n_active: T = active.sum();
        if n_active <= T::zero() {
            return Err(Error::shape("design row has no active level"));
        }
        row.mapv_inplace(|v| v / n_active);
    }
    Ok(Prediction::from_scores(scores))
}
