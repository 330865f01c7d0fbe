//! The least-squares linear prediction filter: fitting, application, and the
//! companion-matrix view of the fitted coefficients.
//!
//! Convention, used everywhere: a filter of depth `d` stores coefficients
//! `c_0 .. c_{d-1}` and predicts
//!
//! ```text
//! y_hat[t + 1] = sum_j c_j * y[t - j]
//! ```
//!
//! so `c_j` weights the observation `j` steps in the past. Windows are passed
//! oldest-first (newest entry last).

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::numerics::{
    companion_eigenvalues, least_squares_solve, spd_solve, ComplexSpectrum, DenseMatrix,
};

/// Where a scalar series came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Provenance {
    pub system: String,
    pub observable: String,
    pub seed: u64,
    pub length: usize,
}

impl Provenance {
    pub fn unknown() -> Self {
        Self {
            system: String::from("unknown"),
            observable: String::from("unknown"),
            seed: 0,
            length: 0,
        }
    }
}

/// A scalar observation sequence `y_0 .. y_m` with provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryBuffer {
    pub values: Vec<f64>,
    pub provenance: Provenance,
}

impl TrajectoryBuffer {
    pub fn new(values: Vec<f64>, provenance: Provenance) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptyInput("observation buffer"));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("observation buffer"));
        }
        Ok(Self { values, provenance })
    }

    pub fn from_values(values: Vec<f64>) -> Result<Self> {
        let mut p = Provenance::unknown();
        p.length = values.len();
        Self::new(values, p)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// A fitted filter: delay depth, coefficients, and a degeneracy flag set when
/// the delayed-observable family was numerically rank-deficient and the
/// ridge-regularized minimizer was returned instead.
#[derive(Debug, Clone, PartialEq)]
pub struct FilterModel {
    pub delay: usize,
    pub coeffs: Vec<f64>,
    pub degenerate_fit: bool,
}

impl FilterModel {
    pub fn new(coeffs: Vec<f64>, degenerate_fit: bool) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::EmptyInput("filter coefficients"));
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite("filter coefficients"));
        }
        Ok(Self {
            delay: coeffs.len(),
            coeffs,
            degenerate_fit,
        })
    }
}

/// The result of an empirical fit: the model plus the minimized objective
/// (mean squared one-step error over the training rows) and the residual of
/// the final training row.
#[derive(Debug, Clone)]
pub struct FitOutcome {
    pub model: FilterModel,
    pub objective: f64,
    pub last_residual: f64,
    pub rows_used: usize,
}

/// The result of an infinite-data (autocorrelation-based) fit.
#[derive(Debug, Clone)]
pub struct GramFit {
    pub model: FilterModel,
    /// `A(0) - 2 b.c + c.Gc`, the value of the quadratic objective at the
    /// solution. Near-perfect fits sit at the cancellation floor of roughly
    /// `1e-16 * A(0)`; evaluate exactly on an oracle when more is needed.
    pub objective: f64,
}

/// How an autocorrelation sequence was estimated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GramSource {
    EmpiricalTimeAverage,
    SnippetEnsemble,
    ExactOracle,
}

/// Autocorrelations `A(0 .. n_max)` with `A(n) = <U^n f, f>`, together with
/// the provenance of the estimate. The Gram matrix of the delayed family is
/// `G[i][j] = A(|i - j|)` by measure invariance.
#[derive(Debug, Clone)]
pub struct GramSummary {
    pub autocorr: Vec<f64>,
    pub source: GramSource,
    pub sample_size: usize,
}

impl GramSummary {
    pub fn new(autocorr: Vec<f64>, source: GramSource, sample_size: usize) -> Result<Self> {
        if autocorr.is_empty() {
            return Err(Error::EmptyInput("autocorrelation sequence"));
        }
        if autocorr.iter().any(|a| !a.is_finite()) {
            return Err(Error::NonFinite("autocorrelation sequence"));
        }
        Ok(Self {
            autocorr,
            source,
            sample_size,
        })
    }

    pub fn max_lag(&self) -> usize {
        self.autocorr.len() - 1
    }

    /// The `d x d` Gram matrix `G[i][j] = A(|i - j|)`.
    pub fn gram_matrix(&self, d: usize) -> Result<DenseMatrix> {
        if self.max_lag() + 1 < d {
            return Err(Error::LengthMismatch {
                what: "autocorrelation lags for Gram matrix",
                expected: d,
                got: self.max_lag() + 1,
            });
        }
        let mut g = DenseMatrix::zeros(d, d);
        for i in 0..d {
            for j in 0..d {
                g[(i, j)] = self.autocorr[i.abs_diff(j)];
            }
        }
        Ok(g)
    }
}

/// Builds the delay matrix and one-step targets for depth `d`: rows are
/// indexed by `t = d-1 .. m-1`, entry `(t, j) = y[t - j]`, target `y[t + 1]`.
pub fn build_hankel(y: &TrajectoryBuffer, d: usize) -> Result<(DenseMatrix, Vec<f64>)> {
    if d == 0 {
        return Err(Error::InvalidParameter("delay depth must be at least 1"));
    }
    let m = y.len() - 1;
    if y.len() < d + 1 {
        return Err(Error::TrajectoryTooShort {
            needed: d + 1,
            got: y.len(),
        });
    }
    let rows = m - d + 1;
    let mut entries = Vec::with_capacity(rows * d);
    let mut rhs = Vec::with_capacity(rows);
    for t in (d - 1)..m {
        for j in 0..d {
            entries.push(y.values[t - j]);
        }
        rhs.push(y.values[t + 1]);
    }
    Ok((DenseMatrix::new(rows, d, entries)?, rhs))
}

/// Minimizes the empirical mean squared one-step prediction error over rows
/// `t = max(d-1, row_start) .. m-1`.
///
/// `row_start` fixes a common sample window across different depths, so that
/// objectives for growing `d` minimize over nested ansatz spaces on identical
/// data (and are therefore nonincreasing in `d`).
pub fn fit(y: &TrajectoryBuffer, d: usize, row_start: Option<usize>) -> Result<FitOutcome> {
    if d == 0 {
        return Err(Error::InvalidParameter("delay depth must be at least 1"));
    }
    let m = y.len().saturating_sub(1);
    let start = row_start.unwrap_or(0).max(d - 1);
    if start >= m {
        return Err(Error::TrajectoryTooShort {
            needed: start + 2,
            got: y.len(),
        });
    }
    let rows = m - start;
    let mut entries = Vec::with_capacity(rows * d);
    let mut rhs = Vec::with_capacity(rows);
    for t in start..m {
        for j in 0..d {
            entries.push(y.values[t - j]);
        }
        rhs.push(y.values[t + 1]);
    }
    let a = DenseMatrix::new(rows, d, entries)?;
    let sol = least_squares_solve(&a, &rhs)?;
    let model = FilterModel::new(sol.coefficients, sol.degenerate)?;

    // Residuals re-evaluated explicitly, in fixed row order, so the recorded
    // objective and the last-row residual are reproducible observations of
    // the returned coefficients.
    let mut sum_sq = 0.0;
    let mut last_residual = 0.0;
    for (r, target) in rhs.iter().enumerate() {
        let row = a.row(r);
        let mut pred = 0.0;
        for (c, v) in model.coeffs.iter().zip(row) {
            pred += c * v;
        }
        last_residual = target - pred;
        sum_sq += last_residual * last_residual;
    }
    Ok(FitOutcome {
        model,
        objective: sum_sq / rows as f64,
        last_residual,
        rows_used: rows,
    })
}

/// Solves the Toeplitz normal equations `G c = b` with `G[i][j] = A(|i-j|)`
/// and `b_i = A(i + 1)`. With exact autocorrelations this is the
/// infinite-data filter.
pub fn fit_from_gram(g: &GramSummary, d: usize) -> Result<GramFit> {
    if d == 0 {
        return Err(Error::InvalidParameter("delay depth must be at least 1"));
    }
    if g.max_lag() < d {
        return Err(Error::LengthMismatch {
            what: "autocorrelation lags",
            expected: d + 1,
            got: g.max_lag() + 1,
        });
    }
    let gram = g.gram_matrix(d)?;
    let b = &g.autocorr[1..=d];
    let sol = spd_solve(&gram, b)?;
    let model = FilterModel::new(sol.x, sol.jittered)?;

    let gc = gram.mul_vec(&model.coeffs);
    let mut objective = g.autocorr[0];
    for j in 0..d {
        objective += model.coeffs[j] * (gc[j] - 2.0 * b[j]);
    }
    Ok(GramFit { model, objective })
}

/// Stationarized fit: estimates autocorrelations by time averages over the
/// full buffer and solves the same Toeplitz system as [`fit_from_gram`]. The
/// two produce identical coefficients by construction; this entry point
/// exists so callers with a raw series do not have to assemble the summary.
pub fn fit_yule_walker(y: &TrajectoryBuffer, d: usize) -> Result<GramFit> {
    let g = crate::diagnostics::gram_from_series(y, d)?;
    fit_from_gram(&g, d)
}

/// One-step prediction from a window passed oldest-first.
pub fn predict_one(model: &FilterModel, window: &[f64]) -> Result<f64> {
    let d = model.delay;
    if window.len() != d {
        return Err(Error::LengthMismatch {
            what: "prediction window",
            expected: d,
            got: window.len(),
        });
    }
    let mut acc = 0.0;
    for (j, c) in model.coeffs.iter().enumerate() {
        acc += c * window[d - 1 - j];
    }
    Ok(acc)
}

/// Autoregressive rollout: repeatedly appends the one-step prediction and
/// drops the oldest window entry. Returns the `steps` generated values.
pub fn predict_iterated(
    model: &FilterModel,
    seed_window: &[f64],
    steps: usize,
) -> Result<Vec<f64>> {
    if steps == 0 {
        return Err(Error::InvalidParameter("rollout needs at least one step"));
    }
    let d = model.delay;
    if seed_window.len() != d {
        return Err(Error::LengthMismatch {
            what: "seed window",
            expected: d,
            got: seed_window.len(),
        });
    }
    let mut window = seed_window.to_vec();
    let mut out = Vec::with_capacity(steps);
    for _ in 0..steps {
        let next = predict_one(model, &window)?;
        window.rotate_left(1);
        window[d - 1] = next;
        out.push(next);
    }
    Ok(out)
}

/// The `d x d` companion matrix of the filter: first column holds the
/// coefficients, the first superdiagonal holds ones. This is the matrix of
/// the projected one-step operator in the delayed-observable basis
/// `(f, f o T^-1, ..., f o T^-(d-1))`.
pub fn companion(model: &FilterModel) -> DenseMatrix {
    let d = model.delay;
    let mut u = DenseMatrix::zeros(d, d);
    for (i, c) in model.coeffs.iter().enumerate() {
        u[(i, 0)] = *c;
    }
    for i in 1..d {
        u[(i - 1, i)] = 1.0;
    }
    u
}

/// Eigenvalues of the companion matrix, with per-root residuals.
pub fn spectrum(model: &FilterModel) -> Result<ComplexSpectrum> {
    companion_eigenvalues(&model.coeffs)
}

/// Coordinates of the eigenvector of the companion matrix for eigenvalue
/// `lambda`, in the delayed-observable basis, normalized to leading entry 1.
///
/// For this companion structure the eigenvector has the closed form
/// `v_i = p_i(lambda)` with `p_0 = 1`, `p_{i+1} = lambda p_i - c_i` (the
/// Horner prefixes of the characteristic polynomial).
pub fn companion_eigenvector(
    model: &FilterModel,
    lambda: num_complex::Complex64,
) -> Vec<num_complex::Complex64> {
    let d = model.delay;
    let mut v = Vec::with_capacity(d);
    let mut p = num_complex::Complex64::new(1.0, 0.0);
    v.push(p);
    for i in 0..(d - 1) {
        p = lambda * p - model.coeffs[i];
        v.push(p);
    }
    v
}

/// Mean squared value of the buffer; the objective of the trivial depth-0
/// predictor, occasionally useful as a scale reference.
pub fn mean_square(y: &TrajectoryBuffer) -> f64 {
    let mut s = 0.0;
    for v in &y.values {
        s += v * v;
    }
    s / y.len() as f64
}
