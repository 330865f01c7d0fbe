//! Cross-module properties checked exactly on finite-state systems.

use koopman_core::diagnostics::{pseudospec_epsilon, verify_pseudospectrum};
use koopman_core::filter::{companion, fit_from_gram};
use koopman_core::numerics::{dft_real, idft};
use koopman_core::oracle::{
    dft_cyclicity, exact_autocorr, exact_objective, is_cyclic, polyval, trace_measure,
    uniform_norm, weak_pred_vandermonde, FiniteSystem,
};
use koopman_core::rng::SplitMix64;
use koopman_core::Complex64;

fn random_vec(rng: &mut SplitMix64, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.next_signed()).collect()
}

/// A vector with one conjugate pair of spectral coefficients removed.
fn vec_with_zeroed_mode(rng: &mut SplitMix64, n: usize, k: usize) -> Vec<f64> {
    let f = random_vec(rng, n);
    let mut spectrum = dft_real(&f).unwrap();
    spectrum[k] = Complex64::new(0.0, 0.0);
    if k != 0 && (n - k) != k {
        spectrum[n - k] = Complex64::new(0.0, 0.0);
    }
    let back = idft(&spectrum).unwrap();
    back.iter().map(|z| z.re).collect()
}

#[test]
fn spectral_criterion_agrees_with_rank_oracle_exhaustively() {
    let mut rng = SplitMix64::new(2718);
    let cases = [(4usize, 1usize), (8, 3), (16, 5), (31, 12), (64, 7)];
    let mut checked = 0usize;
    for (n, r) in cases {
        let sys = FiniteSystem::shift(n, r).unwrap();
        let mut vectors: Vec<Vec<f64>> = Vec::new();
        vectors.push(vec![1.0; n]);
        for atom in 0..n {
            let mut delta = vec![0.0; n];
            delta[atom] = 1.0;
            vectors.push(delta);
        }
        for k in 0..n {
            vectors.push(vec_with_zeroed_mode(&mut rng, n, k));
        }
        for _ in 0..100 {
            vectors.push(random_vec(&mut rng, n));
        }
        for f in &vectors {
            let spectral = dft_cyclicity(n, r, f).unwrap();
            let brute = is_cyclic(&sys, f).unwrap();
            assert_eq!(spectral, brute, "disagreement at n={n}, r={r}");
            checked += 1;
        }
    }
    assert!(checked > 500);
}

#[test]
fn spectral_moments_match_autocorrelations() {
    let mut rng = SplitMix64::new(99);
    // shifts and scrambled permutations alike
    let systems = vec![
        FiniteSystem::shift(8, 3).unwrap(),
        FiniteSystem::shift(12, 5).unwrap(),
        FiniteSystem::new(vec![2, 0, 5, 1, 7, 3, 6, 4]).unwrap(),
        FiniteSystem::new(vec![1, 0, 3, 2, 5, 4]).unwrap(),
    ];
    for sys in &systems {
        let n = sys.atoms();
        for _ in 0..5 {
            let f = random_vec(&mut rng, n);
            let nu = trace_measure(sys, &f).unwrap();
            let g = exact_autocorr(sys, &f, n).unwrap();
            assert!((nu.total_weight() - g.autocorr[0]).abs() <= 1e-10);
            for lag in 0..=n {
                let mom = nu.moment(lag);
                assert!(
                    (mom - Complex64::new(g.autocorr[lag], 0.0)).norm() <= 1e-10,
                    "lag {lag}"
                );
            }
        }
    }
}

#[test]
fn cyclic_vector_full_depth_filter_is_exact() {
    let mut rng = SplitMix64::new(31415);
    for (n, r) in [(4usize, 1usize), (8, 3), (16, 5)] {
        let sys = FiniteSystem::shift(n, r).unwrap();
        // rejection-sample a cyclic observable
        let f = loop {
            let candidate = random_vec(&mut rng, n);
            if is_cyclic(&sys, &candidate).unwrap() {
                break candidate;
            }
        };
        let g = exact_autocorr(&sys, &f, n).unwrap();
        let fitted = fit_from_gram(&g, n).unwrap();
        let objective = exact_objective(&sys, &f, &fitted.model).unwrap();
        assert!(objective <= 1e-20, "n={n}: objective {objective}");

        let report = verify_pseudospectrum(&sys, &f, n).unwrap();
        assert!(report.all_within);
        for pair in &report.eigenpairs {
            assert!(pair.residual <= 1e-8);
        }
    }
}

#[test]
fn pseudospectral_bound_holds_across_depths() {
    let mut rng = SplitMix64::new(5050);
    for (n, r) in [(8usize, 3usize), (16, 7)] {
        let sys = FiniteSystem::shift(n, r).unwrap();
        let f = loop {
            let candidate = random_vec(&mut rng, n);
            if is_cyclic(&sys, &candidate).unwrap() {
                break candidate;
            }
        };
        for d in 1..=n {
            let report = verify_pseudospectrum(&sys, &f, d).unwrap();
            assert!(report.all_within, "n={n}, d={d}");
            assert_eq!(report.eigenpairs.len(), d);
        }
    }
}

#[test]
fn epsilon_numerator_is_a_nested_residual() {
    // epsilon itself need not be monotone, but its numerator is a nested
    // least-squares residual, hence nonincreasing in the depth.
    use koopman_core::diagnostics::uf_residual_sq;
    let mut rng = SplitMix64::new(8080);
    let sys = FiniteSystem::shift(16, 3).unwrap();
    for _ in 0..10 {
        let f = random_vec(&mut rng, 16);
        let g = exact_autocorr(&sys, &f, 16).unwrap();
        let mut prev = f64::INFINITY;
        for d in 1..=16usize {
            let r = uf_residual_sq(&g, d).unwrap();
            assert!(r <= prev + 1e-12);
            prev = r;
        }
    }
}

#[test]
fn vandermonde_certificate_reproduces_one_step_back() {
    // The interpolating polynomial applied to the full-depth companion must
    // send the observable to its one-step-back delay, exactly realized on
    // the atom space.
    let mut rng = SplitMix64::new(64);
    for (n, r) in [(4usize, 1usize), (8, 3)] {
        let sys = FiniteSystem::shift(n, r).unwrap();
        let f = loop {
            let candidate = random_vec(&mut rng, n);
            if is_cyclic(&sys, &candidate).unwrap() {
                break candidate;
            }
        };
        let nu = trace_measure(&sys, &f).unwrap();
        assert_eq!(nu.atoms.len(), n);
        let p = weak_pred_vandermonde(&nu).unwrap();

        // certificate residual on the measure itself
        let mut residual = 0.0;
        for atom in &nu.atoms {
            let err = polyval(&p, atom.value) - Complex64::new(1.0, 0.0) / atom.value;
            residual += atom.weight * err.norm_sqr();
        }
        assert!(residual <= 1e-16, "interpolation residual {residual}");

        // apply p to the companion of the full-depth filter: w = p(U_n) e_0
        let g = exact_autocorr(&sys, &f, n).unwrap();
        let fitted = fit_from_gram(&g, n).unwrap();
        let u = companion(&fitted.model);
        let mut w = vec![Complex64::new(0.0, 0.0); n];
        for coeff in p.iter().rev() {
            // w <- U w + coeff * e0
            let mut next = vec![Complex64::new(0.0, 0.0); n];
            for i in 0..n {
                for j in 0..n {
                    let uij = u[(i, j)];
                    if uij != 0.0 {
                        next[i] += uij * w[j];
                    }
                }
            }
            next[0] += coeff;
            w = next;
        }

        // resolve the coordinates against the delayed observables
        let table = koopman_core::oracle::delayed_observables(&sys, &f, n).unwrap();
        let mut predicted = vec![Complex64::new(0.0, 0.0); n];
        for (wi, row) in w.iter().zip(&table) {
            for (slot, value) in predicted.iter_mut().zip(row) {
                *slot += wi * value;
            }
        }
        let back: Vec<f64> = (0..n).map(|i| f[sys.apply_inverse(i)]).collect();
        let mut diff_sq = 0.0;
        for (pred, target) in predicted.iter().zip(&back) {
            diff_sq += (pred - Complex64::new(*target, 0.0)).norm_sqr();
        }
        let norm = (diff_sq / n as f64).sqrt();
        assert!(norm <= 1e-8, "n={n}: one-step-back defect {norm}");
    }
}

#[test]
fn full_depth_epsilon_vanishes_for_structured_cyclic_vectors() {
    // At full depth on a cyclic vector the projection residual vanishes.
    // The primal atom-space evaluation resolves this to rounding level; the
    // Gram formula bottoms out at its square-root cancellation floor.
    use koopman_core::diagnostics::pseudospec_epsilon_exact;
    for (n, r) in [(4usize, 1usize), (8, 3), (16, 5), (64, 7)] {
        let sys = FiniteSystem::shift(n, r).unwrap();
        let mut delta = vec![0.0; n];
        delta[0] = 1.0;
        let eps = pseudospec_epsilon_exact(&sys, &delta, n).unwrap();
        assert!(eps <= 1e-8, "n={n}: epsilon {eps}");
        let g = exact_autocorr(&sys, &delta, n).unwrap();
        let eps_gram = pseudospec_epsilon(&g, n).unwrap();
        assert!(eps_gram <= 1e-6, "n={n}: gram-route epsilon {eps_gram}");
        let fitted = fit_from_gram(&g, n).unwrap();
        let objective = exact_objective(&sys, &delta, &fitted.model).unwrap();
        assert!(objective <= 1e-20);
    }
}

#[test]
fn primal_and_gram_epsilon_agree_at_moderate_depths() {
    let mut rng = SplitMix64::new(123);
    let sys = FiniteSystem::shift(16, 5).unwrap();
    for _ in 0..5 {
        let f = random_vec(&mut rng, 16);
        let g = exact_autocorr(&sys, &f, 16).unwrap();
        for d in 1..=8usize {
            let gram_route = pseudospec_epsilon(&g, d).unwrap();
            let primal = koopman_core::diagnostics::pseudospec_epsilon_exact(&sys, &f, d).unwrap();
            assert!(
                (gram_route - primal).abs() <= 1e-8 + 1e-6 * primal,
                "d={d}: {gram_route} vs {primal}"
            );
        }
    }
}

#[test]
fn norms_are_preserved_by_the_permutation_operator() {
    let mut rng = SplitMix64::new(3);
    let sys = FiniteSystem::new(vec![4, 2, 0, 5, 3, 1]).unwrap();
    for _ in 0..100 {
        let v = random_vec(&mut rng, 6);
        let uv = koopman_core::oracle::koopman_apply(&sys, &v);
        assert!((uniform_norm(&uv) - uniform_norm(&v)).abs() <= 1e-12);
    }
}
