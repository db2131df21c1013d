//! End-to-end acceptance checks. Each test prints one `PASS`/`FAIL` line;
//! run with `cargo test -p mel-core --test acceptance -- --nocapture`.

use mel_core::entropy::{matrix_phi_entropy, MatrixEnsemble};
use mel_core::membership::{
    check_condition, cross_equivalence, random_canonical_measure, random_hermitian, random_unitary, sample_pd, sample_pd_in,
    search_counterexample, Condition, Outcome, SearchConfig, ViolationReport, DEFAULT_COND_CAP,
    DEFAULT_TOL,
};
use mel_core::phi::{
    canonical_fprime, canonical_phi, gauss_legendre_64, hermite_check, zero_limit_estimate,
    CanonicalMeasure, ScalarFunctionSpec,
};
use mel_core::rng::{self, TrialRng};
use mel_core::spectral::{
    apply_univariate, bivariate_calculus, frechet_diff, frechet_diff_inverse, FrechetDifferential,
    HermitianMatrix,
};
use mel_core::{CMat, Complex64};
use nalgebra::DVector;
use rand::Rng;

const SEED: u64 = 20_261_018;

fn report(id: usize, name: &str, ok: bool, detail: String) {
    println!("criterion {id} {name}: {} ({detail})", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "criterion {id} {name} failed: {detail}");
}

fn power(p: f64) -> ScalarFunctionSpec {
    ScalarFunctionSpec::Power { p }
}

fn members() -> Vec<ScalarFunctionSpec> {
    let mut v = vec![ScalarFunctionSpec::Affine { c0: 1.0, c1: 2.0 }, ScalarFunctionSpec::StandardEntropy];
    v.extend([1.0, 1.25, 1.5, 1.75, 2.0].map(power));
    v
}

fn random_measures(count: usize, stream: u64) -> Vec<CanonicalMeasure> {
    let mut r = rng::stream(SEED, stream);
    (0..count).map(|_| random_canonical_measure(&mut r)).collect()
}

fn catalog_with_measures(stream: u64) -> Vec<ScalarFunctionSpec> {
    let mut v = vec![ScalarFunctionSpec::StandardEntropy];
    v.extend([1.25, 1.5, 1.75, 2.0, 2.5, 3.0].map(power));
    v.extend(random_measures(5, stream).into_iter().map(ScalarFunctionSpec::Canonical));
    v
}

fn fro(m: &CMat) -> f64 {
    m.norm()
}

#[test]
fn criterion_1_membership() {
    let mut failures = vec![];
    let mut runs = 0;
    for spec in members() {
        for n in [2, 3, 4] {
            for c in Condition::ALL {
                let v = check_condition(c, &spec, n, 200, SEED, DEFAULT_TOL).unwrap();
                runs += 1;
                if !v.passed {
                    failures.push(format!("{} n={n} {c}: {:.3e}", spec.label(), v.worst_gap));
                }
            }
        }
    }
    report(1, "membership", failures.is_empty(), format!("{runs} verdicts, failures {failures:?}"));
}

#[test]
fn criterion_2_equivalence() {
    let mut specs = members();
    specs.extend(random_measures(20, 2).into_iter().map(ScalarFunctionSpec::Canonical));
    specs.extend([2.5, 3.0].map(power));
    specs.push(power(1.9));
    let mut problems = vec![];
    let mut runs = 0;
    for spec in &specs {
        let expected = match spec {
            ScalarFunctionSpec::Power { p } if *p > 2.0 => Outcome::Violation,
            _ => Outcome::Pass,
        };
        for n in [2, 3, 4] {
            for seed in [SEED, SEED + 1] {
                let r = cross_equivalence(spec, n, 200, seed, DEFAULT_TOL).unwrap();
                runs += 1;
                if !r.agree || r.outcome != expected {
                    problems.push(format!("{} n={n} seed={seed}: {:?}", spec.label(), r.outcome));
                }
            }
        }
    }
    let ok = specs.len() >= 30 && problems.is_empty();
    report(2, "equivalence", ok, format!("{} specs, {runs} runs, problems {problems:?}", specs.len()));
}

fn load_fixture(name: &str) -> (String, ViolationReport) {
    let path = format!("{}/tests/fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
    let text = std::fs::read_to_string(path).unwrap();
    let report = serde_json::from_str(&text).unwrap();
    (text, report)
}

#[test]
fn criterion_3_non_members() {
    let mut details = vec![];
    let mut ok = true;
    for (p, name) in [(2.5, "violation_power_2_5.json"), (3.0, "violation_power_3.json")] {
        let (text, pinned) = load_fixture(name);
        let spec = power(p);
        let replay = pinned.replay().unwrap();
        let fresh = search_counterexample(&spec, &SearchConfig::new(2, 10_000, pinned.seed)).unwrap();
        let found = fresh.report.expect("search finds a violation");
        let rerun = serde_json::to_string_pretty(&found).unwrap() + "\n";
        let this = pinned.spec == spec
            && pinned.dimension <= 2
            && pinned.gap() < -1e-6
            && (replay.gap - pinned.gap()).abs() <= 1e-12
            && found.evaluations <= 10_000
            && rerun == text;
        ok &= this;
        details.push(format!("p={p}: n={} gap={:.3e} after {} evaluations", pinned.dimension, pinned.gap(), pinned.evaluations));
    }
    report(3, "non-members", ok, details.join("; "));
}

#[test]
fn criterion_4_calculus_oracles() {
    let catalog = catalog_with_measures(4);
    let mut r = rng::stream(SEED, 40);
    let (mut fd_worst, mut inv_worst, mut trace_worst) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..100 {
        let spec = &catalog[r.gen_range(0..catalog.len())];
        let role = spec.derivative_role();
        let n = r.gen_range(1..=4);
        let x = sample_pd(n, &mut r, DEFAULT_COND_CAP);
        let h = random_hermitian(n, &mut r);
        let h = h.scale(x.min_eigenvalue().unwrap() / fro(h.as_matrix()));

        let eps = 1e-5;
        let plus = apply_univariate(&role, &x.add(&h.scale(eps)).unwrap()).unwrap();
        let minus = apply_univariate(&role, &x.sub(&h.scale(eps)).unwrap()).unwrap();
        let fd = (plus.as_matrix() - minus.as_matrix()) / Complex64::new(2.0 * eps, 0.0);
        let exact = frechet_diff(&role, &x, h.as_matrix()).unwrap();
        fd_worst = fd_worst.max(fro(&(fd - &exact)) / fro(&exact));

        let g = random_hermitian(n, &mut r);
        let back = frechet_diff(&role, &x, &frechet_diff_inverse(&role, &x, g.as_matrix()).unwrap()).unwrap();
        inv_worst = inv_worst.max(fro(&(back - g.as_matrix())) / fro(g.as_matrix()));

        let x = sample_pd_in(n, &mut r, 0.1, 10.0, DEFAULT_COND_CAP);
        let y = sample_pd_in(n, &mut r, 0.1, 10.0, DEFAULT_COND_CAP);
        let d = y.sub(&x).unwrap();
        let fdiff = apply_univariate(&role, &y).unwrap().sub(&apply_univariate(&role, &x).unwrap()).unwrap();
        let direct = (d.as_matrix() * fdiff.as_matrix()).trace().re;
        let integrated = gauss_legendre_64().integrate(0.0, 1.0, |t| {
            let xt = y.lerp(&x, t).unwrap();
            FrechetDifferential::new(&role, &xt).unwrap().quadratic_form(d.as_matrix()).unwrap()
        });
        trace_worst = trace_worst.max((direct - integrated).abs() / (1.0 + direct.abs()));
    }
    let ok = fd_worst < 1e-6 && inv_worst < 1e-10 && trace_worst < 1e-7;
    report(
        4,
        "calculus oracles",
        ok,
        format!("finite difference {fd_worst:.2e}, inverse composition {inv_worst:.2e}, trace identity {trace_worst:.2e}"),
    );
}

#[test]
fn criterion_5_bivariate_identities() {
    let catalog = catalog_with_measures(5);
    let mut r = rng::stream(SEED, 50);
    let (mut diag_worst, mut block_worst) = (0.0f64, 0.0f64);
    for _ in 0..100 {
        let spec = &catalog[r.gen_range(0..catalog.len())];
        let g = |t: f64, s: f64| mel_core::phi::g_kernel(spec, t, s);
        let n = r.gen_range(1..=3);
        let x = sample_pd(n, &mut r, DEFAULT_COND_CAP);
        let y = sample_pd(n, &mut r, DEFAULT_COND_CAP);
        let h = random_hermitian(n, &mut r);

        let lhs = bivariate_calculus(g, &x, &x).unwrap().pairing(h.as_matrix()).unwrap().re;
        let inv = frechet_diff_inverse(&spec.derivative_role(), &x, h.as_matrix()).unwrap();
        let rhs = (h.as_matrix().adjoint() * inv).trace().re;
        diag_worst = diag_worst.max((lhs - rhs).abs() / (1.0 + rhs.abs()));

        let mut k = CMat::zeros(n, n);
        for v in k.iter_mut() {
            *v = Complex64::new(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0));
        }
        let mut z = CMat::zeros(2 * n, 2 * n);
        z.view_mut((0, 0), (n, n)).copy_from(x.as_matrix());
        z.view_mut((n, n), (n, n)).copy_from(y.as_matrix());
        let mut big = CMat::zeros(2 * n, 2 * n);
        big.view_mut((0, n), (n, n)).copy_from(&k);
        let small = bivariate_calculus(g, &x, &y).unwrap().pairing(&k).unwrap().re;
        let z = HermitianMatrix::new(z).unwrap();
        let embedded = bivariate_calculus(g, &z, &z).unwrap().pairing(&big).unwrap().re;
        block_worst = block_worst.max((small - embedded).abs() / (1.0 + small.abs()));
    }
    let ok = diag_worst < 1e-10 && block_worst < 1e-10;
    report(5, "bivariate identities", ok, format!("diagonal {diag_worst:.2e}, block {block_worst:.2e}"));
}

/// `f'` applied to the Hermitian `n² × n²` matrix `λ L_x + (1-λ) R_x`, built
/// from Kronecker products and diagonalized by nalgebra.
fn fprime_of_mixed(spec: &ScalarFunctionSpec, x: &HermitianMatrix, lambda: f64) -> CMat {
    let n = x.dim();
    let id = CMat::identity(n, n);
    let left = id.kronecker(x.as_matrix());
    let right = x.as_matrix().transpose().kronecker(&id);
    let m = left * Complex64::new(lambda, 0.0) + right * Complex64::new(1.0 - lambda, 0.0);
    let eig = m.symmetric_eigen();
    let d = CMat::from_diagonal(&eig.eigenvalues.map(|l| Complex64::new(spec.fprime(l), 0.0)));
    &eig.eigenvectors * d * eig.eigenvectors.adjoint()
}

#[test]
fn criterion_6_hermite() {
    let mut catalog = catalog_with_measures(6);
    catalog.push(ScalarFunctionSpec::Affine { c0: 0.0, c1: 2.0 });
    let mut r = rng::stream(SEED, 60);
    let mut scalar_worst = 0.0f64;
    for spec in &catalog {
        for _ in 0..200 {
            let t = r.gen_range(1e-2f64.ln()..1e2f64.ln()).exp();
            let s = r.gen_range(1e-2f64.ln()..1e2f64.ln()).exp();
            scalar_worst = scalar_worst.max(hermite_check(spec, t, s).unwrap());
        }
    }
    let mut matrix_worst = 0.0f64;
    for i in 0..100 {
        let spec = &catalog[i % catalog.len()];
        let n = r.gen_range(1..=3);
        let x = sample_pd_in(n, &mut r, 0.1, 10.0, DEFAULT_COND_CAP);
        let h = random_hermitian(n, &mut r);
        let vh = DVector::from_column_slice(h.as_matrix().as_slice());
        let direct = FrechetDifferential::new(&spec.derivative_role(), &x).unwrap().quadratic_form(h.as_matrix()).unwrap();
        let integrated = gauss_legendre_64()
            .integrate(0.0, 1.0, |l| (vh.adjoint() * fprime_of_mixed(spec, &x, l) * &vh)[(0, 0)].re);
        matrix_worst = matrix_worst.max((direct - integrated).abs() / (1.0 + direct.abs()));
    }
    let ok = scalar_worst < 1e-8 && matrix_worst < 1e-7;
    report(6, "hermite", ok, format!("scalar {scalar_worst:.2e}, matrix {matrix_worst:.2e}"));
}

#[test]
fn criterion_7_canonical_form() {
    let measures = random_measures(50, 7);
    let mut second_worst = 0.0f64;
    for m in &measures {
        for i in 0..=40 {
            let x = 10f64.powf(-2.0 + 4.0 * i as f64 / 40.0);
            let phi = |u: f64| canonical_phi(m, u).unwrap();
            let second = |step: f64| (phi(x + step) - 2.0 * phi(x) + phi(x - step)) / (step * step);
            let step = 1e-2 * x;
            let fd = (4.0 * second(step) - second(2.0 * step)) / 3.0;
            let exact = canonical_fprime(m, x);
            second_worst = second_worst.max((fd - exact).abs() / exact.abs());
        }
    }

    let mut r = rng::stream(SEED, 70);
    let mut reference_exact = true;
    for m in &measures {
        let (phi1, dphi1) = (r.gen_range(-2.0..2.0), r.gen_range(-2.0..2.0));
        let atoms = m.atoms.iter().map(|a| (a.lambda, a.weight)).collect();
        let built = CanonicalMeasure::from_reference(phi1, dphi1, m.beta, atoms).unwrap();
        reference_exact &= built.a == phi1 - dphi1 + m.beta / 2.0 && built.b == dphi1 - m.beta;
        reference_exact &= (canonical_phi(&built, 1.0).unwrap() - phi1).abs() < 1e-12;
    }

    let mut zero_ok = true;
    let mut tight_ok = true;
    for m in &measures {
        match zero_limit_estimate(m) {
            Ok(z) => {
                zero_ok &= z.limit <= z.loose_bound + 1e-9;
                tight_ok &= z.limit <= z.tight_bound + 1e-9;
            }
            Err(_) => zero_ok = false,
        }
    }
    let ok = second_worst < 1e-6 && reference_exact && zero_ok && tight_ok;
    report(
        7,
        "canonical form",
        ok,
        format!("second difference {second_worst:.2e}, reference identities {reference_exact}, zero limits {zero_ok}/{tight_ok}"),
    );
}

fn random_ensemble(n: usize, outcomes: usize, r: &mut TrialRng) -> MatrixEnsemble {
    let weights: Vec<f64> = (0..outcomes).map(|_| r.gen_range(0.05..1.0)).collect();
    let total: f64 = weights.iter().sum();
    MatrixEnsemble::from_pairs(weights.iter().map(|w| (w / total, sample_pd(n, r, DEFAULT_COND_CAP))).collect()).unwrap()
}

#[test]
fn criterion_8_entropy() {
    let catalog = catalog_with_measures(8);
    let mut r = rng::stream(SEED, 80);
    let mut lowest = f64::INFINITY;
    let mut invariance = 0.0f64;
    for spec in &catalog {
        for _ in 0..100 {
            let n = r.gen_range(1..=4);
            let outcomes = r.gen_range(1..=5);
            let z = random_ensemble(n, outcomes, &mut r);
            let value = matrix_phi_entropy(spec, &z).unwrap();
            lowest = lowest.min(value);
            let u = random_unitary(n, &mut r);
            let turned = matrix_phi_entropy(spec, &z.conjugate_by(&u).unwrap()).unwrap();
            invariance = invariance.max((turned - value).abs() / (1.0 + value.abs()));
        }
    }

    let mut exact_zero = 0.0f64;
    let affine = ScalarFunctionSpec::Affine { c0: 0.7, c1: -1.3 };
    for _ in 0..50 {
        let n = r.gen_range(1..=4);
        let one = MatrixEnsemble::from_pairs(vec![(1.0, sample_pd(n, &mut r, DEFAULT_COND_CAP))]).unwrap();
        for spec in &catalog {
            exact_zero = exact_zero.max(matrix_phi_entropy(spec, &one).unwrap().abs());
        }
        let z = random_ensemble(n, 4, &mut r);
        exact_zero = exact_zero.max(matrix_phi_entropy(&affine, &z).unwrap().abs());
    }

    let scalar: Vec<(ScalarFunctionSpec, fn(f64) -> f64)> = vec![
        (ScalarFunctionSpec::StandardEntropy, |t| t * t.ln()),
        (power(1.5), |t| t.powf(1.5)),
        (power(3.0), |t| t * t * t),
    ];
    let mut reduction = 0.0f64;
    for (spec, phi) in &scalar {
        for _ in 0..50 {
            let z = random_ensemble(1, 3, &mut r);
            let pairs: Vec<(f64, f64)> = z.outcomes().iter().map(|o| (o.p, o.matrix.as_matrix()[(0, 0)].re)).collect();
            let mean: f64 = pairs.iter().map(|(p, v)| p * v).sum();
            let classical = pairs.iter().map(|(p, v)| p * phi(*v)).sum::<f64>() - phi(mean);
            let value = matrix_phi_entropy(spec, &z).unwrap();
            reduction = reduction.max((value - classical).abs() / (1.0 + classical.abs()));
        }
    }
    let ok = lowest >= -1e-10 && exact_zero < 1e-12 && invariance < 1e-10 && reduction < 1e-12;
    report(
        8,
        "entropy",
        ok,
        format!("min {lowest:.2e}, zero cases {exact_zero:.2e}, invariance {invariance:.2e}, scalar reduction {reduction:.2e}"),
    );
}

fn suite_json() -> String {
    let mut out = vec![];
    for spec in [ScalarFunctionSpec::StandardEntropy, power(1.5), power(3.0), ScalarFunctionSpec::Affine { c0: 0.0, c1: 1.0 }] {
        out.push(serde_json::to_string(&cross_equivalence(&spec, 3, 100, SEED, DEFAULT_TOL).unwrap()).unwrap());
        out.push(serde_json::to_string(&search_counterexample(&spec, &SearchConfig::new(2, 2_000, SEED)).unwrap()).unwrap());
    }
    let mut r = rng::stream(SEED, 90);
    let z = random_ensemble(3, 4, &mut r);
    out.push(serde_json::to_string(&z).unwrap());
    out.push(serde_json::to_string(&matrix_phi_entropy(&ScalarFunctionSpec::StandardEntropy, &z).unwrap()).unwrap());
    out.join("\n")
}

#[test]
fn criterion_9_reproducibility() {
    let first = suite_json();
    let second = suite_json();
    let ok = first == second;
    report(9, "reproducibility", ok, format!("{} bytes compared", first.len()));
}
