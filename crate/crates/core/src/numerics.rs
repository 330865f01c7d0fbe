//! Dense linear-algebra kernel: pivoted least squares, symmetric
//! positive-definite solves, companion-matrix eigenvalues and the discrete
//! Fourier transform.
//!
//! Everything here is hand-rolled on purpose: the sizes are small (a few
//! hundred columns at most), the summation orders are fixed so outputs are
//! reproducible, and no BLAS/LAPACK backend is required.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::math;

/// Relative rank threshold: a pivot below `1e-6 * max column norm` marks the
/// column space as numerically deficient. Squared, this is the ridge weight
/// `1e-12 * (max column norm)^2` used by the regularized fallback.
const RANK_REL_TOL: f64 = 1e-6;

/// Row-major dense matrix of `f64` entries.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<f64>,
}

impl DenseMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::EmptyInput("matrix"));
        }
        if entries.len() != rows * cols {
            return Err(Error::ShapeMismatch {
                expected: rows * cols,
                got: entries.len(),
            });
        }
        Ok(Self {
            rows,
            cols,
            entries,
        })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn all_finite(&self) -> bool {
        self.entries.iter().all(|x| x.is_finite())
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        if !self.is_square() {
            return false;
        }
        for i in 0..self.rows {
            for j in (i + 1)..self.cols {
                if math::abs(self[(i, j)] - self[(j, i)]) > tol {
                    return false;
                }
            }
        }
        true
    }

    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        debug_assert_eq!(v.len(), self.cols);
        let mut out = Vec::with_capacity(self.rows);
        for i in 0..self.rows {
            let row = self.row(i);
            let mut acc = 0.0;
            for (a, x) in row.iter().zip(v) {
                acc += a * x;
            }
            out.push(acc);
        }
        out
    }

    /// `A^T v` without forming the transpose.
    pub fn mul_transpose_vec(&self, v: &[f64]) -> Vec<f64> {
        debug_assert_eq!(v.len(), self.rows);
        let mut out = vec![0.0; self.cols];
        for i in 0..self.rows {
            let row = self.row(i);
            let vi = v[i];
            for (o, a) in out.iter_mut().zip(row) {
                *o += a * vi;
            }
        }
        out
    }

    fn max_column_norm(&self) -> f64 {
        let mut best = 0.0f64;
        for j in 0..self.cols {
            let mut s = 0.0;
            for i in 0..self.rows {
                let a = self[(i, j)];
                s += a * a;
            }
            best = best.max(math::sqrt(s));
        }
        best
    }
}

impl core::ops::Index<(usize, usize)> for DenseMatrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.entries[i * self.cols + j]
    }
}

impl core::ops::IndexMut<(usize, usize)> for DenseMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.entries[i * self.cols + j]
    }
}

/// Solution of an (in general overdetermined) least-squares problem.
#[derive(Debug, Clone)]
pub struct LeastSquares {
    pub coefficients: Vec<f64>,
    /// Set when the columns were numerically rank-deficient and the ridge
    /// fallback produced the answer.
    pub degenerate: bool,
}

/// Householder QR with column pivoting. Reflectors are stored below the
/// diagonal of the column-major working copy, `rdiag` holds the R diagonal.
struct PivotedQr {
    m: usize,
    n: usize,
    /// Column-major storage, `a[j * m + i]`.
    a: Vec<f64>,
    rdiag: Vec<f64>,
    perm: Vec<usize>,
    /// Number of reflectors actually formed (stops early at an exactly zero
    /// trailing block).
    steps: usize,
}

fn pivoted_qr(mat: &DenseMatrix) -> PivotedQr {
    let m = mat.rows;
    let n = mat.cols;
    let mut a = vec![0.0; m * n];
    for j in 0..n {
        for i in 0..m {
            a[j * m + i] = mat[(i, j)];
        }
    }
    let mut perm: Vec<usize> = (0..n).collect();
    let mut rdiag = vec![0.0; n.min(m)];
    let p = m.min(n);
    let mut steps = 0;

    for k in 0..p {
        // Pivot on the largest trailing column norm. Norms are recomputed
        // each step; cheaper downdating drifts for long thin factors.
        let mut best_j = k;
        let mut best_norm = -1.0;
        for j in k..n {
            let mut s = 0.0;
            for i in k..m {
                let v = a[j * m + i];
                s += v * v;
            }
            if s > best_norm {
                best_norm = s;
                best_j = j;
            }
        }
        if best_j != k {
            for i in 0..m {
                a.swap(k * m + i, best_j * m + i);
            }
            perm.swap(k, best_j);
        }

        let sigma = math::sqrt(best_norm.max(0.0));
        if sigma == 0.0 {
            break;
        }
        let x0 = a[k * m + k];
        let alpha = if x0 >= 0.0 { -sigma } else { sigma };
        // v = x - alpha e1, H = I - v v^T / (sigma (sigma + |x0|))
        let beta = 1.0 / (sigma * (sigma + math::abs(x0)));
        a[k * m + k] = x0 - alpha;
        rdiag[k] = alpha;
        steps = k + 1;

        for j in (k + 1)..n {
            let mut dot = 0.0;
            for i in k..m {
                dot += a[k * m + i] * a[j * m + i];
            }
            let scale = beta * dot;
            for i in k..m {
                a[j * m + i] -= scale * a[k * m + i];
            }
        }
    }

    PivotedQr {
        m,
        n,
        a,
        rdiag,
        perm,
        steps,
    }
}

impl PivotedQr {
    /// Applies `Q^T` to a length-`m` vector in place.
    fn apply_qt(&self, v: &mut [f64]) {
        for k in 0..self.steps {
            let col = &self.a[k * self.m..(k + 1) * self.m];
            let v_head = col[k]; // stored reflector head x0 - alpha, |v_head| = sigma + |x0|
            let sigma = math::abs(self.rdiag[k]);
            if sigma == 0.0 {
                continue;
            }
            let beta = 1.0 / (sigma * math::abs(v_head));
            let mut dot = 0.0;
            for i in k..self.m {
                dot += col[i] * v[i];
            }
            let scale = beta * dot;
            for i in k..self.m {
                v[i] -= scale * col[i];
            }
        }
    }

    /// Back-substitution `R x = v[0..n]`, undoing the column permutation.
    /// Requires a full set of `n` reflectors.
    fn solve_upper(&self, v: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut y = vec![0.0; n];
        for k in (0..n).rev() {
            let mut acc = v[k];
            for j in (k + 1)..n {
                // R[k, j] lives at row k of column j (above the reflector).
                acc -= self.a[j * self.m + k] * y[j];
            }
            y[k] = acc / self.rdiag[k];
        }
        let mut x = vec![0.0; n];
        for (slot, &col) in self.perm.iter().enumerate() {
            x[col] = y[slot];
        }
        x
    }

    fn rank(&self, tol: f64) -> usize {
        self.rdiag[..self.steps]
            .iter()
            .take_while(|r| math::abs(**r) > tol)
            .count()
    }
}

/// Numerical rank at a relative threshold on the pivoted R diagonal.
pub fn matrix_rank(mat: &DenseMatrix, rel_tol: f64) -> usize {
    let qr = pivoted_qr(mat);
    let scale = mat.max_column_norm();
    qr.rank(rel_tol * scale)
}

/// Minimizes `||A x - y||_2`.
///
/// Well-posed systems go through Householder QR with column pivoting. When
/// the columns are rank-deficient at the relative threshold `1e-6` (so the
/// normal-equations spectrum is deficient at `1e-12 * (max column norm)^2`),
/// the Tikhonov-regularized system with exactly that ridge is solved instead
/// and the result is flagged degenerate.
pub fn least_squares_solve(mat: &DenseMatrix, rhs: &[f64]) -> Result<LeastSquares> {
    if rhs.len() != mat.rows {
        return Err(Error::LengthMismatch {
            what: "least-squares right-hand side",
            expected: mat.rows,
            got: rhs.len(),
        });
    }
    if !mat.all_finite() {
        return Err(Error::NonFinite("least-squares matrix"));
    }
    if rhs.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite("least-squares right-hand side"));
    }

    let scale = mat.max_column_norm();
    if scale == 0.0 {
        // Zero matrix: every coefficient vector is a minimizer; return zero.
        return Ok(LeastSquares {
            coefficients: vec![0.0; mat.cols],
            degenerate: true,
        });
    }

    let qr = pivoted_qr(mat);
    let full_rank = qr.rank(RANK_REL_TOL * scale) == mat.cols;
    if full_rank {
        let mut v = rhs.to_vec();
        qr.apply_qt(&mut v);
        return Ok(LeastSquares {
            coefficients: qr.solve_upper(&v),
            degenerate: false,
        });
    }

    // Ridge fallback: (A^T A + tau I) x = A^T y with tau = 1e-12 * scale^2.
    let tau = RANK_REL_TOL * RANK_REL_TOL * scale * scale;
    let n = mat.cols;
    let mut gram = DenseMatrix::zeros(n, n);
    for i in 0..mat.rows {
        let row = mat.row(i);
        for j in 0..n {
            let rij = row[j];
            if rij == 0.0 {
                continue;
            }
            for k in j..n {
                gram[(j, k)] += rij * row[k];
            }
        }
    }
    for j in 0..n {
        for k in 0..j {
            gram[(j, k)] = gram[(k, j)];
        }
        gram[(j, j)] += tau;
    }
    let atb = mat.mul_transpose_vec(rhs);
    let chol = cholesky_solve(&gram, &atb).ok_or(Error::FactorizationFailed)?;
    Ok(LeastSquares {
        coefficients: chol,
        degenerate: true,
    })
}

/// In-place Cholesky solve; `None` when a pivot drops to (numerical) zero.
fn cholesky_solve(g: &DenseMatrix, b: &[f64]) -> Option<Vec<f64>> {
    let n = g.rows;
    let mut l = g.entries.clone();
    let mut max_diag = 0.0f64;
    for i in 0..n {
        max_diag = max_diag.max(math::abs(l[i * n + i]));
    }
    let pivot_floor = 1e-14 * max_diag;

    for k in 0..n {
        let mut d = l[k * n + k];
        for j in 0..k {
            let lkj = l[k * n + j];
            d -= lkj * lkj;
        }
        if !(d > pivot_floor) || !d.is_finite() {
            return None;
        }
        let dk = math::sqrt(d);
        l[k * n + k] = dk;
        for i in (k + 1)..n {
            let mut s = l[i * n + k];
            for j in 0..k {
                s -= l[i * n + j] * l[k * n + j];
            }
            l[i * n + k] = s / dk;
        }
    }

    // forward then backward substitution
    let mut y = b.to_vec();
    for i in 0..n {
        let mut acc = y[i];
        for j in 0..i {
            acc -= l[i * n + j] * y[j];
        }
        y[i] = acc / l[i * n + i];
    }
    for i in (0..n).rev() {
        let mut acc = y[i];
        for j in (i + 1)..n {
            acc -= l[j * n + i] * y[j];
        }
        y[i] = acc / l[i * n + i];
    }
    Some(y)
}

/// Solution of a symmetric positive-definite system.
#[derive(Debug, Clone)]
pub struct SpdSolution {
    pub x: Vec<f64>,
    /// Set when the plain factorization failed and diagonal jitter was needed.
    pub jittered: bool,
}

/// Solves `G x = b` for symmetric positive-definite `G` by Cholesky
/// factorization. A failed factorization is retried with diagonal jitter
/// `1e-12 * trace(G) / n`, escalated by a factor of 100 at most three times.
pub fn spd_solve(g: &DenseMatrix, b: &[f64]) -> Result<SpdSolution> {
    if !g.is_square() {
        return Err(Error::ShapeMismatch {
            expected: g.rows * g.rows,
            got: g.rows * g.cols,
        });
    }
    if b.len() != g.rows {
        return Err(Error::LengthMismatch {
            what: "spd right-hand side",
            expected: g.rows,
            got: b.len(),
        });
    }
    if !g.all_finite() || b.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite("spd system"));
    }
    let mut max_abs = 0.0f64;
    for e in g.entries() {
        max_abs = max_abs.max(math::abs(*e));
    }
    if !g.is_symmetric(1e-12 * max_abs.max(1.0)) {
        return Err(Error::NotSymmetric);
    }

    if let Some(x) = cholesky_solve(g, b) {
        return Ok(SpdSolution { x, jittered: false });
    }

    let n = g.rows;
    let mut trace = 0.0;
    for i in 0..n {
        trace += g[(i, i)];
    }
    let tau0 = 1e-12 * trace / n as f64;
    if tau0 > 0.0 {
        let mut tau = tau0;
        for _ in 0..4 {
            let mut jittered = g.clone();
            for i in 0..n {
                jittered[(i, i)] += tau;
            }
            if let Some(x) = cholesky_solve(&jittered, b) {
                return Ok(SpdSolution { x, jittered: true });
            }
            tau *= 100.0;
        }
    }
    Err(Error::FactorizationFailed)
}

/// Eigenvalues with a per-root characteristic-polynomial residual.
#[derive(Debug, Clone)]
pub struct ComplexSpectrum {
    pub values: Vec<Complex64>,
    /// `|p(lambda)| / (1 + |lambda|^d)` per root.
    pub residuals: Vec<f64>,
}

impl ComplexSpectrum {
    pub fn max_modulus(&self) -> f64 {
        self.values.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }
}

/// All `d` roots of `p(lambda) = lambda^d - sum_j c_j lambda^(d-1-j)` — the
/// characteristic polynomial of the companion matrix whose first column is
/// `c` with ones on the first superdiagonal.
///
/// Roots come from Ehrlich–Aberth simultaneous iteration; the residual
/// contract is `<= 1e-8` for `d <= 256` with `||c||_1 <= 10`.
pub fn companion_eigenvalues(c: &[f64]) -> Result<ComplexSpectrum> {
    let d = c.len();
    if d == 0 {
        return Err(Error::EmptyInput("companion coefficients"));
    }
    if c.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite("companion coefficients"));
    }

    // Ascending monic coefficients: poly[k] is the weight of lambda^k.
    let mut poly = vec![0.0; d + 1];
    poly[d] = 1.0;
    for (j, cj) in c.iter().enumerate() {
        poly[d - 1 - j] = -cj;
    }

    let values = if d == 1 {
        vec![Complex64::new(c[0], 0.0)]
    } else {
        aberth_roots(&poly)
    };

    let residuals = values
        .iter()
        .map(|z| {
            let p = horner_abs_scaled(&poly, *z).0.norm();
            p / (1.0 + math::powi(z.norm(), d as i32))
        })
        .collect();

    Ok(ComplexSpectrum { values, residuals })
}

/// Horner evaluation of `p` and `p'`, plus the coefficient-magnitude scale
/// `sum |a_k| |z|^k` used as a backward-stability stopping yardstick.
fn horner_abs_scaled(poly: &[f64], z: Complex64) -> (Complex64, Complex64, f64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    let mut s = 0.0;
    let az = z.norm();
    for &a in poly.iter().rev() {
        dp = dp * z + p;
        p = p * z + a;
        s = s * az + math::abs(a);
    }
    (p, dp, s)
}

fn aberth_roots(poly: &[f64]) -> Vec<Complex64> {
    let d = poly.len() - 1;
    let max_low = poly[..d].iter().map(|a| math::abs(*a)).fold(0.0, f64::max);
    let radius = 1.0 + max_low; // Cauchy bound for a monic polynomial
    let mut z: Vec<Complex64> = (0..d)
        .map(|k| {
            let theta = math::TAU * k as f64 / d as f64 + 0.5 / d as f64 + 0.3;
            Complex64::new(radius * math::cos(theta), radius * math::sin(theta))
        })
        .collect();

    let mut converged = vec![false; d];
    for _ in 0..500 {
        let mut all_done = true;
        for i in 0..d {
            if converged[i] {
                continue;
            }
            let (p, dp, scale) = horner_abs_scaled(poly, z[i]);
            if p.norm() <= 1e-15 * scale {
                converged[i] = true;
                continue;
            }
            if dp.norm() == 0.0 {
                let nudge = 1e-6 * (1.0 + z[i].norm());
                z[i] += Complex64::new(nudge, 1e-6);
                all_done = false;
                continue;
            }
            let newton = p / dp;
            let mut repulsion = Complex64::new(0.0, 0.0);
            for j in 0..d {
                if j != i {
                    let diff = z[i] - z[j];
                    if diff.norm() > 0.0 {
                        repulsion += Complex64::new(1.0, 0.0) / diff;
                    }
                }
            }
            let denom = Complex64::new(1.0, 0.0) - newton * repulsion;
            let correction = if denom.norm() < 1e-12 {
                newton
            } else {
                newton / denom
            };
            z[i] -= correction;
            if correction.norm() > 1e-14 * (1.0 + z[i].norm()) {
                all_done = false;
            } else {
                converged[i] = true;
            }
        }
        if all_done {
            break;
        }
    }
    z
}

/// Discrete Fourier transform, `(F v)(k) = sum_n v(n) exp(-2 pi i k n / N)`.
/// Direct O(N^2) summation; intended sizes are a few thousand at most.
pub fn dft(v: &[Complex64]) -> Result<Vec<Complex64>> {
    if v.is_empty() {
        return Err(Error::EmptyInput("dft input"));
    }
    let n = v.len();
    let twiddle: Vec<Complex64> = (0..n)
        .map(|j| {
            let angle = -math::TAU * j as f64 / n as f64;
            Complex64::new(math::cos(angle), math::sin(angle))
        })
        .collect();
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        let mut acc = Complex64::new(0.0, 0.0);
        for (idx, value) in v.iter().enumerate() {
            acc += value * twiddle[(k * idx) % n];
        }
        out.push(acc);
    }
    Ok(out)
}

/// Inverse of [`dft`]: conjugate transform divided by `N`.
pub fn idft(v: &[Complex64]) -> Result<Vec<Complex64>> {
    if v.is_empty() {
        return Err(Error::EmptyInput("idft input"));
    }
    let n = v.len();
    let conj: Vec<Complex64> = v.iter().map(|z| z.conj()).collect();
    let fwd = dft(&conj)?;
    Ok(fwd
        .into_iter()
        .map(|z| z.conj() / n as f64)
        .collect())
}

/// Real DFT convenience wrapper.
pub fn dft_real(v: &[f64]) -> Result<Vec<Complex64>> {
    let cv: Vec<Complex64> = v.iter().map(|x| Complex64::new(*x, 0.0)).collect();
    dft(&cv)
}

/// Gaussian elimination with partial pivoting for complex square systems.
/// Used by the spectral interpolation construction.
pub(crate) fn complex_solve(a: &mut [Complex64], n: usize, b: &mut [Complex64]) -> Result<()> {
    debug_assert_eq!(a.len(), n * n);
    debug_assert_eq!(b.len(), n);
    for k in 0..n {
        let mut best = k;
        let mut best_mod = a[k * n + k].norm();
        for i in (k + 1)..n {
            let m = a[i * n + k].norm();
            if m > best_mod {
                best_mod = m;
                best = i;
            }
        }
        if best_mod == 0.0 {
            return Err(Error::FactorizationFailed);
        }
        if best != k {
            for j in 0..n {
                a.swap(k * n + j, best * n + j);
            }
            b.swap(k, best);
        }
        let pivot = a[k * n + k];
        for i in (k + 1)..n {
            let factor = a[i * n + k] / pivot;
            if factor.norm() == 0.0 {
                continue;
            }
            a[i * n + k] = Complex64::new(0.0, 0.0);
            for j in (k + 1)..n {
                let akj = a[k * n + j];
                a[i * n + j] -= factor * akj;
            }
            let bk = b[k];
            b[i] -= factor * bk;
        }
    }
    for i in (0..n).rev() {
        let mut acc = b[i];
        for j in (i + 1)..n {
            acc -= a[i * n + j] * b[j];
        }
        b[i] = acc / a[i * n + i];
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "expected {b}, got {a} (tol {tol})");
    }

    #[test]
    fn least_squares_identity() {
        let a = DenseMatrix::identity(2);
        let sol = least_squares_solve(&a, &[3.0, 4.0]).unwrap();
        assert!(!sol.degenerate);
        assert_close(sol.coefficients[0], 3.0, 1e-14);
        assert_close(sol.coefficients[1], 4.0, 1e-14);
    }

    #[test]
    fn least_squares_collinear_columns() {
        // Two identical columns: rank one, must flag and still fit the data.
        let a = DenseMatrix::new(3, 2, vec![1.0, 1.0, 1.0, 1.0, 1.0, 1.0]).unwrap();
        let y = [2.0, 2.0, 2.0];
        let sol = least_squares_solve(&a, &y).unwrap();
        assert!(sol.degenerate);
        let fitted = a.mul_vec(&sol.coefficients);
        let res: f64 = fitted
            .iter()
            .zip(&y)
            .map(|(f, t)| (f - t) * (f - t))
            .sum::<f64>()
            .sqrt();
        assert!(res <= 1e-6, "residual {res}");
    }

    #[test]
    fn least_squares_period_three_signal() {
        // Delay-3 rows of the signal 1,0,0,1,0,0,1. Brute-force normal
        // equations over one period give exactly (0, 0, 1).
        let y = [1.0, 0.0, 0.0, 1.0, 0.0, 0.0, 1.0];
        let mut rows = Vec::new();
        let mut rhs = Vec::new();
        for t in 2..=5usize {
            rows.extend_from_slice(&[y[t], y[t - 1], y[t - 2]]);
            rhs.push(y[t + 1]);
        }
        let a = DenseMatrix::new(4, 3, rows).unwrap();
        let sol = least_squares_solve(&a, &rhs).unwrap();
        assert!(!sol.degenerate);
        assert_close(sol.coefficients[0], 0.0, 1e-12);
        assert_close(sol.coefficients[1], 0.0, 1e-12);
        assert_close(sol.coefficients[2], 1.0, 1e-12);
    }

    #[test]
    fn least_squares_first_order_optimality() {
        // Perturbing the minimizer must not reduce the residual.
        let a = DenseMatrix::new(
            4,
            2,
            vec![1.0, 0.5, 2.0, -1.0, 0.0, 3.0, 1.5, 1.0],
        )
        .unwrap();
        let y = [1.0, 0.0, 2.0, -1.0];
        let sol = least_squares_solve(&a, &y).unwrap();
        let res_norm = |x: &[f64]| -> f64 {
            a.mul_vec(x)
                .iter()
                .zip(&y)
                .map(|(f, t)| (f - t) * (f - t))
                .sum::<f64>()
                .sqrt()
        };
        let base = res_norm(&sol.coefficients);
        let eps = 1e-6;
        for dir in [[1.0, 0.0], [0.0, 1.0], [0.7, -0.7], [-0.3, 0.9]] {
            let perturbed: Vec<f64> = sol
                .coefficients
                .iter()
                .zip(dir)
                .map(|(c, e)| c + eps * e)
                .collect();
            assert!(res_norm(&perturbed) >= base - 1e-8);
        }
    }

    #[test]
    fn spd_identity() {
        let g = DenseMatrix::identity(3);
        let sol = spd_solve(&g, &[1.0, -2.0, 0.5]).unwrap();
        assert!(!sol.jittered);
        assert_eq!(sol.x, vec![1.0, -2.0, 0.5]);
    }

    #[test]
    fn spd_scaled_identity_hand_solve() {
        // (1/3) I x = (0, 0, 1/3) has the hand solution (0, 0, 1).
        let third = 1.0 / 3.0;
        let mut g = DenseMatrix::zeros(3, 3);
        for i in 0..3 {
            g[(i, i)] = third;
        }
        let sol = spd_solve(&g, &[0.0, 0.0, third]).unwrap();
        assert!(!sol.jittered);
        assert_close(sol.x[0], 0.0, 1e-15);
        assert_close(sol.x[1], 0.0, 1e-15);
        assert_close(sol.x[2], 1.0, 1e-15);
    }

    #[test]
    fn spd_singular_jitters() {
        // One zero eigenvalue, right-hand side inside the range: the
        // jittered solve must be flagged and nearly consistent.
        let g = DenseMatrix::new(
            3,
            3,
            vec![1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0],
        )
        .unwrap();
        let b = [1.0, 2.0, 0.0];
        let sol = spd_solve(&g, &b).unwrap();
        assert!(sol.jittered);
        let gx = g.mul_vec(&sol.x);
        let res: f64 = gx
            .iter()
            .zip(&b)
            .map(|(u, v)| (u - v) * (u - v))
            .sum::<f64>()
            .sqrt();
        let bnorm: f64 = b.iter().map(|v| v * v).sum::<f64>().sqrt();
        assert!(res <= 1e-6 * bnorm, "residual {res}");
    }

    #[test]
    fn spd_rejects_asymmetry() {
        let g = DenseMatrix::new(2, 2, vec![1.0, 0.5, 0.0, 1.0]).unwrap();
        assert!(matches!(
            spd_solve(&g, &[1.0, 1.0]),
            Err(Error::NotSymmetric)
        ));
    }

    #[test]
    fn companion_single_coefficient() {
        let spec = companion_eigenvalues(&[0.5]).unwrap();
        assert_eq!(spec.values.len(), 1);
        assert_close(spec.values[0].re, 0.5, 1e-15);
        assert_close(spec.values[0].im, 0.0, 1e-15);
    }

    #[test]
    fn companion_cube_roots_of_unity() {
        // c = (0,0,1) gives p(z) = z^3 - 1.
        let spec = companion_eigenvalues(&[0.0, 0.0, 1.0]).unwrap();
        assert_eq!(spec.values.len(), 3);
        let mut mods: Vec<f64> = spec.values.iter().map(|z| z.norm()).collect();
        mods.sort_by(f64::total_cmp);
        for m in mods {
            assert_close(m, 1.0, 1e-10);
        }
        for z in &spec.values {
            let cube = z * z * z;
            assert_close(cube.re, 1.0, 1e-9);
            assert_close(cube.im, 0.0, 1e-9);
        }
        assert!(spec.max_residual() <= 1e-10);
    }

    #[test]
    fn companion_residual_contract_large_degree() {
        // Pseudo-random coefficients with ||c||_1 <= 10 at d = 256.
        let mut rng = crate::rng::SplitMix64::new(2024);
        let mut c: Vec<f64> = (0..256).map(|_| rng.next_signed()).collect();
        let l1: f64 = c.iter().map(|x| x.abs()).sum();
        for x in &mut c {
            *x *= 9.5 / l1;
        }
        let spec = companion_eigenvalues(&c).unwrap();
        assert!(
            spec.max_residual() <= 1e-8,
            "max residual {}",
            spec.max_residual()
        );
    }

    #[test]
    fn companion_vieta_identities() {
        let cases: [&[f64]; 4] = [
            &[0.3, -0.2, 0.7],
            &[1.0, 0.0, 0.0, -0.5],
            &[-0.9, 0.1],
            &[0.0, 0.0, 0.0, 0.0, 1.0],
        ];
        for c in cases {
            let d = c.len();
            let spec = companion_eigenvalues(c).unwrap();
            let sum: Complex64 = spec.values.iter().sum();
            assert_close(sum.re, c[0], 1e-6);
            assert_close(sum.im, 0.0, 1e-6);
            let prod = spec
                .values
                .iter()
                .fold(Complex64::new(1.0, 0.0), |acc, z| acc * z);
            let expected = if d % 2 == 0 { -c[d - 1] } else { c[d - 1] };
            let scale = c[d - 1].abs().max(1.0);
            assert!((prod.re - expected).abs() <= 1e-6 * scale);
            assert!(prod.im.abs() <= 1e-6 * scale);
        }
    }

    #[test]
    fn dft_delta_is_flat() {
        let mut v = vec![Complex64::new(0.0, 0.0); 8];
        v[0] = Complex64::new(1.0, 0.0);
        let f = dft(&v).unwrap();
        for z in f {
            assert_close(z.re, 1.0, 1e-12);
            assert_close(z.im, 0.0, 1e-12);
        }
    }

    #[test]
    fn dft_constant_concentrates() {
        let v = vec![Complex64::new(1.0, 0.0); 4];
        let f = dft(&v).unwrap();
        assert_close(f[0].re, 4.0, 1e-12);
        for z in &f[1..] {
            assert!(z.norm() <= 1e-12);
        }
    }

    #[test]
    fn dft_three_point_delta() {
        // v = (1,0,0): direct summation gives all-ones output.
        let v = vec![
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
        ];
        let f = dft(&v).unwrap();
        for z in f {
            assert_close(z.re, 1.0, 1e-12);
            assert_close(z.im, 0.0, 1e-12);
        }
    }

    #[test]
    fn dft_round_trip() {
        let mut rng = crate::rng::SplitMix64::new(5);
        for n in [1usize, 2, 3, 64, 257] {
            let v: Vec<Complex64> = (0..n)
                .map(|_| Complex64::new(rng.next_signed(), rng.next_signed()))
                .collect();
            let back = idft(&dft(&v).unwrap()).unwrap();
            for (a, b) in v.iter().zip(&back) {
                assert!((a - b).norm() <= 1e-10);
            }
        }
    }

    #[test]
    fn rank_detects_deficiency() {
        let a = DenseMatrix::new(3, 2, vec![1.0, 2.0, 1.0, 2.0, 1.0, 2.0]).unwrap();
        assert_eq!(matrix_rank(&a, 1e-10), 1);
        assert_eq!(matrix_rank(&DenseMatrix::identity(4), 1e-10), 4);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(companion_eigenvalues(&[]).is_err());
        assert!(companion_eigenvalues(&[f64::NAN]).is_err());
        assert!(dft(&[]).is_err());
        let a = DenseMatrix::new(2, 2, vec![1.0, 0.0, 0.0, f64::INFINITY]).unwrap();
        assert!(least_squares_solve(&a, &[1.0, 1.0]).is_err());
        assert!(DenseMatrix::new(0, 2, vec![]).is_err());
    }
}
