use rand::Rng;
use serde::{Deserialize, Serialize};

use super::conditions::{straddling_pairs, TrialPoint};
use super::sampling::{sample_pd, DEFAULT_COND_CAP};
use super::verdict::{Condition, Slack, Witness, DEFAULT_TOL};
use crate::phi::ScalarFunctionSpec;
use crate::spectral::HermitianMatrix;
use crate::{rng, CMat, Complex64, Error, Result};

/// Hill-climbing steps spent on each random restart.
const REFINE_STEPS: usize = 24;
const INITIAL_STEP: f64 = 0.25;
const STEP_SHRINK: f64 = 0.6;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub n_max: usize,
    /// Total number of slack evaluations.
    pub budget: usize,
    pub seed: u64,
    pub tol: f64,
}

impl SearchConfig {
    pub fn new(n_max: usize, budget: usize, seed: u64) -> Self {
        Self { n_max, budget, seed, tol: DEFAULT_TOL }
    }
}

/// A violation of condition III found by the search, with everything needed
/// to replay it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ViolationReport {
    pub spec: ScalarFunctionSpec,
    pub condition: Condition,
    pub dimension: usize,
    pub seed: u64,
    pub restart: usize,
    pub evaluations: usize,
    pub tol: f64,
    pub witness: Witness,
}

impl ViolationReport {
    /// Recomputes the slack from the recorded matrices and λ.
    pub fn replay(&self) -> Result<Slack> {
        TrialPoint::from_named(self.condition, self.witness.lambda, &self.witness.matrices)?.evaluate(&self.spec)
    }

    pub fn gap(&self) -> f64 {
        self.witness.gap
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchOutcome {
    pub config: SearchConfig,
    pub evaluations: usize,
    /// Most negative relative slack seen.
    pub worst_gap: f64,
    pub report: Option<ViolationReport>,
    pub note: Option<String>,
}

/// Escalating random search for a violation of condition III: dimensions
/// `1..=n_max` share the budget, each restart draws a fresh point (alternating
/// pairs of restarts between independent and straddling draws) and then
/// hill-climbs on the relative slack by perturbing one matrix entry at a time.
/// The first restart that ends in a violation is reported.
pub fn search_counterexample(spec: &ScalarFunctionSpec, config: &SearchConfig) -> Result<SearchOutcome> {
    if config.n_max == 0 {
        return Err(Error::EmptyMatrix);
    }
    if spec.is_affine() {
        return Ok(SearchOutcome {
            config: config.clone(),
            evaluations: 0,
            worst_gap: 0.0,
            report: None,
            note: Some("affine: member by definition".into()),
        });
    }
    spec.require_increasing()?;

    let condition = Condition::III;
    let mut evaluations = 0;
    let mut worst = f64::INFINITY;
    let per_dim = (config.budget / config.n_max).max(1);

    for n in 1..=config.n_max {
        let end = if n == config.n_max { config.budget } else { (evaluations + per_dim).min(config.budget) };
        let mut restart = 0;
        while evaluations < end {
            let mut r = rng::stream(config.seed, ((n as u64) << 40) | restart as u64);
            let mut point = random_point(condition, n, restart, &mut r);
            let mut slack = point.evaluate(spec)?;
            evaluations += 1;
            worst = worst.min(slack.relative());

            let mut step = INITIAL_STEP;
            let mut refine = 0;
            while refine < REFINE_STEPS && evaluations < end {
                refine += 1;
                let Some(candidate) = perturb(&point, step, &mut r) else {
                    step *= STEP_SHRINK;
                    continue;
                };
                let trial = candidate.evaluate(spec)?;
                evaluations += 1;
                worst = worst.min(trial.relative());
                if trial.relative() < slack.relative() {
                    point = candidate;
                    slack = trial;
                } else {
                    step *= STEP_SHRINK;
                }
            }
            if slack.violates(config.tol) {
                let report = ViolationReport {
                    spec: spec.clone(),
                    condition,
                    dimension: n,
                    seed: config.seed,
                    restart,
                    evaluations,
                    tol: config.tol,
                    witness: point.witness(restart, slack),
                };
                return Ok(SearchOutcome {
                    config: config.clone(),
                    evaluations,
                    worst_gap: worst,
                    report: Some(report),
                    note: None,
                });
            }
            restart += 1;
        }
    }

    Ok(SearchOutcome {
        config: config.clone(),
        evaluations,
        worst_gap: if worst.is_finite() { worst } else { 0.0 },
        report: None,
        note: None,
    })
}

fn random_point<R: Rng>(condition: Condition, n: usize, restart: usize, r: &mut R) -> TrialPoint {
    let lambda = if restart % 2 == 0 { 0.5 } else { r.gen_range(0.0..1.0) };
    let matrices = if restart % 4 >= 2 {
        straddling_pairs(n, lambda, r)
    } else {
        condition.matrix_names().iter().map(|_| sample_pd(n, r, DEFAULT_COND_CAP)).collect()
    };
    TrialPoint { condition, lambda, matrices }
}

/// Perturbs one Hermitian entry pair of one matrix by a Gaussian step scaled
/// to that matrix's size. Returns `None` when the result leaves the positive
/// definite cone.
fn perturb<R: Rng>(point: &TrialPoint, step: f64, r: &mut R) -> Option<TrialPoint> {
    let k = r.gen_range(0..point.matrices.len());
    let m = &point.matrices[k];
    let n = m.dim();
    let (i, j) = (r.gen_range(0..n), r.gen_range(0..n));
    let scale = step * m.as_matrix().iter().map(|z| z.norm()).fold(0.0, f64::max);
    let delta: f64 = r.sample::<f64, _>(rand_distr::StandardNormal) * scale;
    let mut e = CMat::zeros(n, n);
    if i == j {
        e[(i, i)] = Complex64::new(delta, 0.0);
    } else {
        let phase: f64 = r.gen_range(0.0..std::f64::consts::TAU);
        let z = Complex64::from_polar(delta, phase);
        e[(i, j)] = z;
        e[(j, i)] = z.conj();
    }
    let next = HermitianMatrix::new(m.as_matrix() + e).ok()?;
    let d = next.eigh().ok()?;
    if d.min() <= 1e-6 * d.max().max(1e-300) {
        return None;
    }
    let mut candidate = point.clone();
    candidate.matrices[k] = next;
    Some(candidate)
}
