//! Exact finite-state systems: permutations of `N` atoms carrying uniform
//! measure. Every operator-theoretic quantity used elsewhere (Koopman matrix,
//! autocorrelations, cyclicity, spectral atoms and their weights) is
//! computable here to machine precision, which makes this module the
//! brute-force ground truth for the property tests of the whole crate.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::dynamics::SystemSpec;
use crate::error::{Error, Result};
use crate::filter::{FilterModel, GramSource, GramSummary};
use crate::math;
use crate::numerics::{self, DenseMatrix};
use crate::rng::SplitMix64;

/// Relative threshold below which a DFT coefficient or a QR pivot counts as
/// zero: separates exact-arithmetic zeros from genuinely small values at the
/// atom counts used here.
const SPECTRAL_REL_TOL: f64 = 1e-10;

/// A bijection on `{0 .. N-1}` with uniform measure `1/N` per atom.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteSystem {
    perm: Vec<usize>,
    inverse: Vec<usize>,
}

impl FiniteSystem {
    pub fn new(perm: Vec<usize>) -> Result<Self> {
        if perm.is_empty() {
            return Err(Error::EmptyInput("permutation"));
        }
        let n = perm.len();
        let mut inverse = vec![usize::MAX; n];
        for (i, &p) in perm.iter().enumerate() {
            if p >= n || inverse[p] != usize::MAX {
                return Err(Error::NotABijection);
            }
            inverse[p] = i;
        }
        Ok(Self { perm, inverse })
    }

    /// The shift `i -> i + r (mod n)`.
    pub fn shift(n: usize, r: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyInput("atom count"));
        }
        Self::new((0..n).map(|i| (i + r) % n).collect())
    }

    pub fn atoms(&self) -> usize {
        self.perm.len()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.perm[i]
    }

    pub fn apply_inverse(&self, i: usize) -> usize {
        self.inverse[i]
    }

    pub fn permutation(&self) -> &[usize] {
        &self.perm
    }

    /// View as a [`SystemSpec`] for use with the trajectory machinery.
    pub fn as_system_spec(&self) -> SystemSpec {
        SystemSpec::FinitePermutation {
            perm: self.perm.clone(),
        }
    }
}

fn check_atom_vector(sys: &FiniteSystem, f: &[f64]) -> Result<()> {
    if f.len() != sys.atoms() {
        return Err(Error::LengthMismatch {
            what: "atom vector",
            expected: sys.atoms(),
            got: f.len(),
        });
    }
    if f.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("atom vector"));
    }
    Ok(())
}

/// Norm in the uniform inner product `<f, g> = (1/N) sum f(i) g(i)`.
pub fn uniform_norm(v: &[f64]) -> f64 {
    let mut s = 0.0;
    for x in v {
        s += x * x;
    }
    math::sqrt(s / v.len() as f64)
}

/// The composition operator as an `N x N` permutation matrix: entry
/// `(i, perm(i)) = 1`, so that `(U f)(i) = f(perm(i))`. Unitary with respect
/// to the uniform inner product.
pub fn koopman_matrix(sys: &FiniteSystem) -> DenseMatrix {
    let n = sys.atoms();
    let mut u = DenseMatrix::zeros(n, n);
    for i in 0..n {
        u[(i, sys.apply(i))] = 1.0;
    }
    u
}

/// `(U v)(i) = v(perm(i))` without forming the matrix.
pub fn koopman_apply(sys: &FiniteSystem, v: &[f64]) -> Vec<f64> {
    (0..sys.atoms()).map(|i| v[sys.apply(i)]).collect()
}

/// Exact autocorrelations `A(n) = (1/N) sum_i f(perm^n(i)) f(i)`.
pub fn exact_autocorr(sys: &FiniteSystem, f: &[f64], n_max: usize) -> Result<GramSummary> {
    check_atom_vector(sys, f)?;
    let n_atoms = sys.atoms();
    let mut forward: Vec<usize> = (0..n_atoms).collect();
    let mut autocorr = Vec::with_capacity(n_max + 1);
    for _ in 0..=n_max {
        let mut acc = 0.0;
        for i in 0..n_atoms {
            acc += f[forward[i]] * f[i];
        }
        autocorr.push(acc / n_atoms as f64);
        for slot in forward.iter_mut() {
            *slot = sys.apply(*slot);
        }
    }
    GramSummary::new(autocorr, GramSource::ExactOracle, n_atoms)
}

/// The table of delayed observables `table[j][i] = f(perm^-j (i))` for
/// `j = 0 .. d-1`: the coordinates of the Krylov family on the atom space.
pub fn delayed_observables(sys: &FiniteSystem, f: &[f64], d: usize) -> Result<Vec<Vec<f64>>> {
    check_atom_vector(sys, f)?;
    if d == 0 {
        return Err(Error::InvalidParameter("need at least one delay"));
    }
    let n = sys.atoms();
    let mut table = Vec::with_capacity(d);
    table.push(f.to_vec());
    for j in 1..d {
        let prev = &table[j - 1];
        // f o T^-j (i) = (f o T^-(j-1)) (T^-1 i)
        let next: Vec<f64> = (0..n).map(|i| prev[sys.apply_inverse(i)]).collect();
        table.push(next);
    }
    Ok(table)
}

/// The one-step mean squared prediction error of a filter, evaluated exactly
/// on the atom space: `(1/N) sum_i (f(perm(i)) - sum_j c_j f(perm^-j(i)))^2`.
pub fn exact_objective(sys: &FiniteSystem, f: &[f64], model: &FilterModel) -> Result<f64> {
    let table = delayed_observables(sys, f, model.delay)?;
    let n = sys.atoms();
    let mut acc = 0.0;
    for i in 0..n {
        let target = f[sys.apply(i)];
        let mut pred = 0.0;
        for (c, row) in model.coeffs.iter().zip(&table) {
            pred += c * row[i];
        }
        let r = target - pred;
        acc += r * r;
    }
    Ok(acc / n as f64)
}

/// Brute-force cyclicity: the Krylov matrix `(f, Uf, ..., U^(N-1) f)` has
/// numerical rank `N`. Rank comes from pivoted orthogonal factorization at
/// the relative threshold `1e-10 * (largest column norm)`.
pub fn is_cyclic(sys: &FiniteSystem, f: &[f64]) -> Result<bool> {
    check_atom_vector(sys, f)?;
    let n = sys.atoms();
    let mut entries = vec![0.0; n * n];
    let mut current = f.to_vec();
    for k in 0..n {
        for i in 0..n {
            entries[i * n + k] = current[i];
        }
        if k + 1 < n {
            current = koopman_apply(sys, &current);
        }
    }
    let krylov = DenseMatrix::new(n, n, entries)?;
    Ok(numerics::matrix_rank(&krylov, SPECTRAL_REL_TOL) == n)
}

fn gcd(a: usize, b: usize) -> usize {
    let (mut a, mut b) = (a, b);
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Spectral cyclicity criterion for the ergodic shift by `r` on `Z_N`:
/// `f` is cyclic exactly when every DFT coefficient is nonzero.
pub fn dft_cyclicity(n: usize, r: usize, f: &[f64]) -> Result<bool> {
    if n == 0 {
        return Err(Error::EmptyInput("atom count"));
    }
    if gcd(r % n, n) != 1 {
        return Err(Error::NotCoprime {
            shift: r,
            modulus: n,
        });
    }
    if f.len() != n {
        return Err(Error::LengthMismatch {
            what: "atom vector",
            expected: n,
            got: f.len(),
        });
    }
    let coeffs = numerics::dft_real(f)?;
    let mut min_mod = f64::INFINITY;
    let mut max_mod = 0.0f64;
    for z in &coeffs {
        let m = z.norm();
        min_mod = min_mod.min(m);
        max_mod = max_mod.max(m);
    }
    Ok(min_mod > SPECTRAL_REL_TOL * max_mod)
}

/// Samples `trials` probe weights `lambda` uniformly from `[-1, 1]` and
/// returns the fraction for which `f + lambda p` is cyclic for the shift by
/// `r` on `Z_n` (checked by the brute-force rank oracle). The exceptional set
/// is finite, so the expected fraction is one.
pub fn prevalence_probe(
    n: usize,
    r: usize,
    f: &[f64],
    p: &[f64],
    trials: usize,
    seed: u64,
) -> Result<f64> {
    if trials == 0 {
        return Err(Error::InvalidParameter("need at least one trial"));
    }
    if !dft_cyclicity(n, r, p)? {
        return Err(Error::InvalidProbe(
            "probe must have all DFT coefficients nonzero",
        ));
    }
    if f.len() != n {
        return Err(Error::LengthMismatch {
            what: "atom vector",
            expected: n,
            got: f.len(),
        });
    }
    let sys = FiniteSystem::shift(n, r)?;
    let mut rng = SplitMix64::new(seed);
    let mut hits = 0usize;
    for _ in 0..trials {
        let lambda = rng.next_signed();
        let perturbed: Vec<f64> = f.iter().zip(p).map(|(a, b)| a + lambda * b).collect();
        if is_cyclic(&sys, &perturbed)? {
            hits += 1;
        }
    }
    Ok(hits as f64 / trials as f64)
}

/// One atom of the trace measure: a unit-circle eigenvalue and the squared
/// modulus of the observable's component along it.
#[derive(Debug, Clone)]
pub struct TraceAtom {
    pub value: Complex64,
    pub weight: f64,
}

/// The trace of the spectral measure associated with an observable:
/// `nu = sum_i |c_i|^2 delta_{lambda_i}` over the eigenbasis of the
/// permutation operator.
#[derive(Debug, Clone)]
pub struct TraceMeasure {
    pub atoms: Vec<TraceAtom>,
}

impl TraceMeasure {
    pub fn total_weight(&self) -> f64 {
        self.atoms.iter().map(|a| a.weight).sum()
    }

    /// `sum_i w_i lambda_i^n`; equals `A(n)` by the spectral theorem.
    pub fn moment(&self, n: usize) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for atom in &self.atoms {
            acc += atom.weight * cpow(atom.value, n);
        }
        acc
    }
}

fn cpow(z: Complex64, n: usize) -> Complex64 {
    let mut acc = Complex64::new(1.0, 0.0);
    let mut base = z;
    let mut e = n;
    while e > 0 {
        if e & 1 == 1 {
            acc *= base;
        }
        base *= base;
        e >>= 1;
    }
    acc
}

/// Diagonalizes the permutation exactly by cycle decomposition: a cycle of
/// length `L` contributes the eigenvalues `exp(2 pi i k / L)` with DFT
/// eigenvectors along the cycle. Weights are squared moduli of the
/// observable's coefficients in this eigenbasis under the uniform inner
/// product. Coincident eigenvalues (equal reduced fractions `k/L` across
/// cycles) are merged by weight addition; weights below `1e-14` are dropped.
pub fn trace_measure(sys: &FiniteSystem, f: &[f64]) -> Result<TraceMeasure> {
    check_atom_vector(sys, f)?;
    let n = sys.atoms();
    let mut visited = vec![false; n];
    // key: reduced fraction (k/L) as (num, den); value: accumulated weight
    let mut weights: BTreeMap<(usize, usize), f64> = BTreeMap::new();

    for start in 0..n {
        if visited[start] {
            continue;
        }
        let mut cycle = Vec::new();
        let mut i = start;
        loop {
            visited[i] = true;
            cycle.push(i);
            i = sys.apply(i);
            if i == start {
                break;
            }
        }
        let len = cycle.len();
        let values: Vec<Complex64> = cycle
            .iter()
            .map(|&atom| Complex64::new(f[atom], 0.0))
            .collect();
        let coeffs = numerics::dft(&values)?;
        for (k, z) in coeffs.iter().enumerate() {
            // |<f, phi_k>|^2 with phi_k normalized in the uniform product
            let weight = z.norm_sqr() / (n as f64 * len as f64);
            let g = gcd(k, len);
            let key = (k / g, len / g);
            *weights.entry(key).or_insert(0.0) += weight;
        }
    }

    let mut atoms: Vec<TraceAtom> = weights
        .into_iter()
        .filter(|(_, w)| *w >= 1e-14)
        .map(|((num, den), weight)| {
            let angle = math::TAU * num as f64 / den as f64;
            TraceAtom {
                value: Complex64::new(math::cos(angle), math::sin(angle)),
                weight,
            }
        })
        .collect();
    atoms.sort_by(|a, b| {
        let fa = a.value.arg();
        let fb = b.value.arg();
        fa.partial_cmp(&fb).unwrap()
    });
    Ok(TraceMeasure { atoms })
}

/// Coefficients (ascending degree) of the polynomial `p` of degree `k-1`
/// interpolating `p(lambda_i) = 1 / lambda_i` on the spectral atoms: the
/// finite-dimensional certificate that one step back is reachable from
/// forward iterates.
pub fn weak_pred_vandermonde(nu: &TraceMeasure) -> Result<Vec<Complex64>> {
    let k = nu.atoms.len();
    if k == 0 {
        return Err(Error::EmptyInput("trace measure"));
    }
    if k > 64 {
        return Err(Error::TooManyAtoms { count: k, max: 64 });
    }
    for i in 0..k {
        for j in (i + 1)..k {
            if (nu.atoms[i].value - nu.atoms[j].value).norm() <= 1e-8 {
                return Err(Error::CoincidentAtoms);
            }
        }
    }
    let mut a = vec![Complex64::new(0.0, 0.0); k * k];
    let mut b = vec![Complex64::new(0.0, 0.0); k];
    for (i, atom) in nu.atoms.iter().enumerate() {
        let mut power = Complex64::new(1.0, 0.0);
        for j in 0..k {
            a[i * k + j] = power;
            power *= atom.value;
        }
        b[i] = Complex64::new(1.0, 0.0) / atom.value;
    }
    numerics::complex_solve(&mut a, k, &mut b)?;
    Ok(b)
}

/// Evaluation of an ascending-coefficient complex polynomial.
pub fn polyval(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for c in coeffs.iter().rev() {
        acc = acc * z + c;
    }
    acc
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SzegoFlag {
    /// The density vanishes on a whole arc: the log-integral diverges.
    Holds,
    /// The density is bounded below by the floor: the log-integral is finite.
    Fails,
    /// Neither certificate applies at this floor; no verdict.
    Inconclusive,
}

impl core::fmt::Display for SzegoFlag {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            SzegoFlag::Holds => write!(f, "szego-holds"),
            SzegoFlag::Fails => write!(f, "szego-fails"),
            SzegoFlag::Inconclusive => write!(f, "inconclusive"),
        }
    }
}

/// Trapezoid quadrature of `log(max(w, floor))` over a uniform grid of
/// `[0, 2 pi)`, plus a heuristic divergence classification: `Holds` when the
/// samples vanish identically on a contiguous arc of at least two grid
/// points (cyclically), `Fails` when `min(w) >= floor`, `Inconclusive`
/// otherwise.
pub fn szego_log_integral(w: &[f64], floor: f64) -> Result<(f64, SzegoFlag)> {
    if w.len() < 8 {
        return Err(Error::InvalidParameter("need at least 8 grid samples"));
    }
    if !(floor > 0.0) {
        return Err(Error::InvalidParameter("floor must be positive"));
    }
    for (i, v) in w.iter().enumerate() {
        if !v.is_finite() || *v < 0.0 {
            return Err(Error::NegativeSample { index: i });
        }
    }
    let m = w.len();
    let mut acc = 0.0;
    for v in w {
        acc += math::ln(v.max(floor));
    }
    let value = acc * math::TAU / m as f64;

    let zero_arc = (0..m).any(|i| w[i] == 0.0 && w[(i + 1) % m] == 0.0);
    let min = w.iter().copied().fold(f64::INFINITY, f64::min);
    let flag = if zero_arc {
        SzegoFlag::Holds
    } else if min >= floor {
        SzegoFlag::Fails
    } else {
        SzegoFlag::Inconclusive
    };
    Ok((value, flag))
}
