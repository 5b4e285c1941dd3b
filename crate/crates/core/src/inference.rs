//! Likelihood-free posterior estimation: reference tables, ABC rejection,
//! and adaptive ABC-SMC.
//!
//! A [`ReferenceTable`] of (prior draw, summary, seed) rows plays the role of
//! a training set: rejection keeps the rows whose standardized summaries lie
//! closest to the observation, and SMC refines that population with Gaussian
//! perturbation kernels, per-generation tolerances from distance quantiles,
//! and importance weights. Everything is keyed by derived per-row /
//! per-candidate seeds, so batches are reproducible on any worker count.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dynamics::{simulate, SimError};
use crate::env::{BeaconSet, RoomConfig};
use crate::observables::augment;
use crate::params::{FixedParams, GlobalParams, ParamName, SimConfig};
use crate::prior::PriorSpec;
use crate::seeds::{derive_seed, family_seed, role};
use crate::summaries::{standardize, summarize, SummaryTransform, SummaryVector};

#[derive(Debug, thiserror::Error)]
pub enum InferenceError {
    #[error("reference table is empty")]
    EmptyTable,
    #[error("accept fraction must lie in (0, 1], got {0}")]
    BadAcceptFraction(f64),
    #[error("summary length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("invalid SMC schedule: {0}")]
    BadSchedule(String),
    #[error("degenerate generation {generation}: {reason}")]
    DegenerateGeneration { generation: usize, reason: String },
    #[error("row {index}: {source}")]
    Row { index: usize, source: SimError },
    #[error(transparent)]
    Summary(#[from] crate::summaries::SummaryError),
}

/// Everything that stays fixed across simulations of one experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimSetup {
    pub fixed: FixedParams<f64>,
    pub room: RoomConfig<f64>,
    pub beacons: BeaconSet<f64>,
    /// Template configuration; the seed field is overridden per run.
    pub config: SimConfig<f64>,
}

impl SimSetup {
    /// One simulation → summary under this setup.
    pub fn summarize_run(
        &self,
        params: &GlobalParams<f64>,
        seed: u64,
    ) -> Result<SummaryVector<f64>, SimError> {
        let config = SimConfig { seed, ..self.config };
        let traj = simulate(params, &self.fixed, &self.room, &self.beacons, &config)?;
        let aug = augment(traj).expect("config.num_steps >= 2 validated by simulate callers");
        Ok(summarize(&aug))
    }
}

/// Precomputed (prior draw, summary, seed) rows sharing one setup.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceTable {
    pub prior: PriorSpec,
    pub setup: SimSetup,
    pub base_seed: u64,
    pub params: Vec<GlobalParams<f64>>,
    pub summaries: Vec<SummaryVector<f64>>,
    pub seeds: Vec<u64>,
}

impl ReferenceTable {
    pub fn len(&self) -> usize {
        self.params.len()
    }

    pub fn is_empty(&self) -> bool {
        self.params.is_empty()
    }

    pub fn summary_len(&self) -> usize {
        self.summaries.first().map_or(0, SummaryVector::len)
    }
}

/// Optional progress sink: called with (rows done, rows total).
pub type Progress<'a> = Option<&'a (dyn Fn(usize, usize) + Sync)>;

/// Builds an N-row reference table: each row draws parameters from the prior
/// and simulates with its own derived seed, in parallel, order-deterministic.
pub fn build_reference_table(
    prior: &PriorSpec,
    setup: &SimSetup,
    rows: usize,
    base_seed: u64,
    progress: Progress,
) -> Result<ReferenceTable, InferenceError> {
    if rows == 0 {
        return Err(InferenceError::EmptyTable);
    }
    let family = family_seed(base_seed, role::ROWS);
    let done = std::sync::atomic::AtomicUsize::new(0);
    let results: Result<Vec<_>, InferenceError> = (0..rows)
        .into_par_iter()
        .map(|i| {
            let row_seed = derive_seed(family, i as u64);
            let mut prior_rng = ChaCha8Rng::seed_from_u64(row_seed);
            prior_rng.set_stream(1);
            let params = prior.sample(&mut prior_rng);
            let summary = setup
                .summarize_run(&params, row_seed)
                .map_err(|source| InferenceError::Row { index: i, source })?;
            if let Some(report) = progress {
                let n = done.fetch_add(1, std::sync::atomic::Ordering::Relaxed) + 1;
                if n % 100 == 0 || n == rows {
                    report(n, rows);
                }
            }
            Ok((params, summary, row_seed))
        })
        .collect();
    let mut params = Vec::with_capacity(rows);
    let mut summaries = Vec::with_capacity(rows);
    let mut seeds = Vec::with_capacity(rows);
    for (p, s, seed) in results? {
        params.push(p);
        summaries.push(s);
        seeds.push(seed);
    }
    Ok(ReferenceTable {
        prior: *prior,
        setup: setup.clone(),
        base_seed,
        params,
        summaries,
        seeds,
    })
}

/// Euclidean distance between two standardized summary vectors.
pub fn distance(a: &SummaryVector<f64>, b: &SummaryVector<f64>) -> Result<f64, InferenceError> {
    if a.len() != b.len() {
        return Err(InferenceError::LengthMismatch {
            expected: a.len(),
            got: b.len(),
        });
    }
    Ok(a.values
        .iter()
        .zip(&b.values)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt())
}

/// Weighted posterior sample; rejection output carries uniform weights.
#[derive(Debug, Clone, PartialEq)]
pub struct PosteriorSamples {
    pub draws: Vec<GlobalParams<f64>>,
    /// Non-negative, summing to 1.
    pub weights: Vec<f64>,
}

impl PosteriorSamples {
    pub fn uniform(draws: Vec<GlobalParams<f64>>) -> Self {
        let w = 1.0 / draws.len() as f64;
        let weights = vec![w; draws.len()];
        Self { draws, weights }
    }

    pub fn len(&self) -> usize {
        self.draws.len()
    }

    pub fn is_empty(&self) -> bool {
        self.draws.is_empty()
    }

    /// Effective sample size 1/Σw².
    pub fn effective_sample_size(&self) -> f64 {
        1.0 / self.weights.iter().map(|w| w * w).sum::<f64>()
    }

    pub fn weighted_mean(&self, param: ParamName) -> f64 {
        self.draws
            .iter()
            .zip(&self.weights)
            .map(|(d, w)| w * d.get(param))
            .sum()
    }

    /// Weighted population variance around the weighted mean.
    pub fn weighted_variance(&self, param: ParamName) -> f64 {
        let mean = self.weighted_mean(param);
        self.draws
            .iter()
            .zip(&self.weights)
            .map(|(d, w)| {
                let e = d.get(param) - mean;
                w * e * e
            })
            .sum()
    }

    pub fn median(&self, param: ParamName) -> f64 {
        posterior_quantile(self, param, 0.5)
    }
}

/// Weighted empirical quantile under the inverse-CDF convention: the smallest
/// draw whose cumulative weight reaches `beta`.
pub fn posterior_quantile(samples: &PosteriorSamples, param: ParamName, beta: f64) -> f64 {
    assert!(
        !samples.is_empty() && (0.0..=1.0).contains(&beta),
        "quantile of empty samples or beta outside [0, 1]"
    );
    let mut order: Vec<usize> = (0..samples.len()).collect();
    order.sort_by(|&i, &j| {
        samples.draws[i]
            .get(param)
            .partial_cmp(&samples.draws[j].get(param))
            .expect("posterior draws are finite")
            .then(i.cmp(&j))
    });
    let mut cum = 0.0;
    for &i in &order {
        cum += samples.weights[i];
        if cum >= beta {
            return samples.draws[i].get(param);
        }
    }
    samples.draws[*order.last().expect("non-empty")].get(param)
}

/// Rejection output plus the bookkeeping SMC needs.
struct RejectionFull {
    posterior: PosteriorSamples,
    accepted_distances: Vec<f64>,
    transform: SummaryTransform,
}

/// Keeps the `keep` table rows closest to `observed` (ties at the cutoff
/// break by row index).
fn rejection_by_count(
    observed: &SummaryVector<f64>,
    table: &ReferenceTable,
    keep: usize,
) -> Result<RejectionFull, InferenceError> {
    if table.is_empty() {
        return Err(InferenceError::EmptyTable);
    }
    if observed.len() != table.summary_len() {
        return Err(InferenceError::LengthMismatch {
            expected: table.summary_len(),
            got: observed.len(),
        });
    }
    let (standardized, transform) = standardize(&table.summaries)?;
    let observed_std = transform.apply(observed);
    let mut dists: Vec<(usize, f64)> = standardized
        .iter()
        .enumerate()
        .map(|(i, row)| Ok((i, distance(&observed_std, row)?)))
        .collect::<Result<_, InferenceError>>()?;
    dists.sort_by(|a, b| {
        a.1.partial_cmp(&b.1)
            .expect("distances are finite")
            .then(a.0.cmp(&b.0))
    });
    let keep = keep.clamp(1, table.len());
    let accepted = &dists[..keep];
    let draws = accepted.iter().map(|&(i, _)| table.params[i]).collect();
    Ok(RejectionFull {
        posterior: PosteriorSamples::uniform(draws),
        accepted_distances: accepted.iter().map(|&(_, d)| d).collect(),
        transform,
    })
}

/// ABC rejection: keeps the ⌈accept_fraction·N⌉ nearest rows with uniform
/// weights, after standardizing by the table's median/MAD transform.
pub fn abc_rejection(
    observed: &SummaryVector<f64>,
    table: &ReferenceTable,
    accept_fraction: f64,
) -> Result<PosteriorSamples, InferenceError> {
    if !(accept_fraction > 0.0 && accept_fraction <= 1.0) {
        return Err(InferenceError::BadAcceptFraction(accept_fraction));
    }
    let keep = (accept_fraction * table.len() as f64).ceil() as usize;
    Ok(rejection_by_count(observed, table, keep)?.posterior)
}

/// ABC-SMC schedule: target population size M, number of generations G, and
/// the distance quantile q that sets each generation's tolerance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SmcSchedule {
    pub population: usize,
    pub generations: usize,
    pub quantile: f64,
}

impl SmcSchedule {
    fn validate(&self) -> Result<(), InferenceError> {
        if self.population < 2 {
            return Err(InferenceError::BadSchedule(format!(
                "population must be >= 2, got {}",
                self.population
            )));
        }
        if self.generations == 0 {
            return Err(InferenceError::BadSchedule(
                "generations must be >= 1".into(),
            ));
        }
        if !(self.quantile > 0.0 && self.quantile < 1.0) {
            return Err(InferenceError::BadSchedule(format!(
                "quantile must lie in (0, 1), got {}",
                self.quantile
            )));
        }
        Ok(())
    }
}

/// Final population plus per-generation diagnostics.
#[derive(Debug, Clone)]
pub struct SmcOutput {
    pub posterior: PosteriorSamples,
    /// Acceptance tolerance used by each perturbation generation.
    pub tolerances: Vec<f64>,
    /// Effective sample size after each generation (including generation 0).
    pub ess: Vec<f64>,
    /// Simulations spent per generation.
    pub simulations: Vec<usize>,
}

/// Unweighted inverse-CDF quantile.
fn quantile_of(values: &[f64], q: f64) -> f64 {
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    let rank = ((q * sorted.len() as f64).ceil() as usize).clamp(1, sorted.len());
    sorted[rank - 1]
}

/// Bounded redraws when a perturbed proposal leaves the prior support.
const SUPPORT_RETRIES: usize = 1000;
/// Candidate waves per generation before declaring degeneracy.
const MAX_WAVES: usize = 64;

fn ln_normal_pdf(x: f64, mean: f64, std: f64) -> f64 {
    let z = (x - mean) / std;
    -0.5 * z * z - std.ln() - 0.5 * (2.0 * std::f64::consts::PI).ln()
}

fn logsumexp(values: impl Iterator<Item = f64>) -> f64 {
    let vals: Vec<f64> = values.collect();
    let max = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !max.is_finite() {
        return max;
    }
    max + vals.iter().map(|v| (v - max).exp()).sum::<f64>().ln()
}

/// ABC-SMC seeded from a fresh ⌈M/q⌉-row table.
///
/// Generation 0 is exactly `abc_rejection` at fraction q on that table, so
/// G = 1 reproduces rejection bit for bit under the same seed policy.
pub fn abc_smc(
    observed: &SummaryVector<f64>,
    prior: &PriorSpec,
    setup: &SimSetup,
    schedule: SmcSchedule,
    base_seed: u64,
    progress: Progress,
) -> Result<SmcOutput, InferenceError> {
    schedule.validate()?;
    let rows = (schedule.population as f64 / schedule.quantile).ceil() as usize;
    let table = build_reference_table(prior, setup, rows, base_seed, progress)?;
    let keep = (schedule.quantile * table.len() as f64).ceil() as usize;
    smc_generations(observed, &table, schedule, base_seed, keep)
}

/// ABC-SMC whose generation 0 keeps the `population` nearest rows of an
/// existing (amortized) reference table.
pub fn abc_smc_with_table(
    observed: &SummaryVector<f64>,
    table: &ReferenceTable,
    schedule: SmcSchedule,
    base_seed: u64,
) -> Result<SmcOutput, InferenceError> {
    schedule.validate()?;
    smc_generations(observed, table, schedule, base_seed, schedule.population)
}

fn smc_generations(
    observed: &SummaryVector<f64>,
    table: &ReferenceTable,
    schedule: SmcSchedule,
    base_seed: u64,
    gen0_keep: usize,
) -> Result<SmcOutput, InferenceError> {
    let gen0 = rejection_by_count(observed, table, gen0_keep)?;
    let observed_std = gen0.transform.apply(observed);
    let prior = &table.prior;
    let setup = &table.setup;

    let mut population = gen0.posterior;
    let mut accepted_distances = gen0.accepted_distances;
    let mut output = SmcOutput {
        posterior: PosteriorSamples::uniform(vec![GlobalParams::new(0.5, 1.0, 0.5, 0.2)]),
        tolerances: Vec::new(),
        ess: vec![population.effective_sample_size()],
        simulations: vec![table.len()],
    };

    let candidate_family = family_seed(base_seed, role::SMC);
    for generation in 1..schedule.generations {
        let tolerance = quantile_of(&accepted_distances, schedule.quantile);
        output.tolerances.push(tolerance);

        // Kernel scale: √2 × weighted std per parameter.
        let kernel_std: [f64; 4] = {
            let mut out = [0.0; 4];
            for (k, name) in ParamName::ALL.iter().enumerate() {
                out[k] = (2.0 * population.weighted_variance(*name))
                    .sqrt()
                    .max(1e-12);
            }
            out
        };
        let cum_weights: Vec<f64> = population
            .weights
            .iter()
            .scan(0.0, |acc, w| {
                *acc += w;
                Some(*acc)
            })
            .collect();

        let target = schedule.population;
        let mut accepted: Vec<(u64, GlobalParams<f64>, f64)> = Vec::with_capacity(target);
        let mut sims_this_gen = 0usize;
        let mut next_attempt: u64 = 0;
        let wave_size = target.max(64) as u64;

        for _wave in 0..MAX_WAVES {
            if accepted.len() >= target {
                break;
            }
            let attempts: Vec<u64> = (next_attempt..next_attempt + wave_size).collect();
            next_attempt += wave_size;
            let wave: Vec<Option<(u64, GlobalParams<f64>, f64)>> = attempts
                .par_iter()
                .map(|&j| {
                    let cand_index = ((generation as u64) << 32) | j;
                    let cand_seed = derive_seed(candidate_family, cand_index);
                    let mut rng = ChaCha8Rng::seed_from_u64(cand_seed);
                    rng.set_stream(3);

                    // Weighted ancestor pick, then Gaussian perturbation with
                    // bounded redraws back into the prior support.
                    let u: f64 = rng.random();
                    let ancestor_idx = cum_weights
                        .iter()
                        .position(|&c| c > u)
                        .unwrap_or(population.len() - 1);
                    let ancestor = population.draws[ancestor_idx];
                    let mut proposal = None;
                    for _ in 0..SUPPORT_RETRIES {
                        let mut cand = ancestor;
                        for (k, name) in ParamName::ALL.iter().enumerate() {
                            let z: f64 = crate::real::Real::standard_normal(&mut rng);
                            cand.set(*name, ancestor.get(*name) + kernel_std[k] * z);
                        }
                        if cand.is_valid() && prior.log_density(&cand).is_finite() {
                            proposal = Some(cand);
                            break;
                        }
                    }
                    let params = proposal?;
                    let summary = setup.summarize_run(&params, cand_seed).ok()?;
                    let d = distance(&gen0.transform.apply(&summary), &observed_std).ok()?;
                    (d <= tolerance).then_some((j, params, d))
                })
                .collect();
            sims_this_gen += wave.len();
            accepted.extend(wave.into_iter().flatten());
        }

        if accepted.len() < target {
            return Err(InferenceError::DegenerateGeneration {
                generation,
                reason: format!(
                    "only {} of {} particles accepted after {} attempts",
                    accepted.len(),
                    target,
                    next_attempt
                ),
            });
        }
        accepted.truncate(target);
        output.simulations.push(sims_this_gen);

        // Importance weights ∝ prior density / kernel mixture density.
        let prev = &population;
        let mut log_weights = Vec::with_capacity(target);
        for (_, cand, _) in &accepted {
            let ln_prior = prior.log_density(cand);
            let ln_mixture = logsumexp(prev.draws.iter().zip(&prev.weights).map(|(anc, w)| {
                let mut ln_kernel = w.ln();
                for (k, name) in ParamName::ALL.iter().enumerate() {
                    ln_kernel += ln_normal_pdf(cand.get(*name), anc.get(*name), kernel_std[k]);
                }
                ln_kernel
            }));
            log_weights.push(ln_prior - ln_mixture);
        }
        let ln_norm = logsumexp(log_weights.iter().copied());
        if !ln_norm.is_finite() {
            return Err(InferenceError::DegenerateGeneration {
                generation,
                reason: "non-finite importance weights".into(),
            });
        }
        let weights: Vec<f64> = log_weights.iter().map(|lw| (lw - ln_norm).exp()).collect();

        accepted_distances = accepted.iter().map(|&(_, _, d)| d).collect();
        population = PosteriorSamples {
            draws: accepted.into_iter().map(|(_, p, _)| p).collect(),
            weights,
        };
        output.ess.push(population.effective_sample_size());
    }

    output.posterior = population;
    Ok(output)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::env::place_beacons;
    use approx::assert_relative_eq;

    fn small_setup(steps: usize) -> SimSetup {
        let room = RoomConfig::default();
        let beacons = place_beacons(&room, 8, &mut ChaCha8Rng::seed_from_u64(500)).unwrap();
        SimSetup {
            fixed: FixedParams::default(),
            room,
            beacons,
            config: SimConfig {
                num_agents: 12,
                num_beacons: 8,
                num_steps: steps,
                dt: 0.1,
                seed: 0,
                reassign_beacons: false,
            },
        }
    }

    fn small_table(rows: usize, base_seed: u64) -> ReferenceTable {
        build_reference_table(
            &PriorSpec::default(),
            &small_setup(40),
            rows,
            base_seed,
            None,
        )
        .unwrap()
    }

    #[test]
    fn table_is_deterministic_with_distinct_row_seeds() {
        let a = small_table(50, 9);
        let b = small_table(50, 9);
        assert_eq!(a, b);
        let mut seeds = a.seeds.clone();
        seeds.sort_unstable();
        seeds.dedup();
        assert_eq!(seeds.len(), 50);
        assert_eq!(a.len(), 50);
    }

    #[test]
    fn distance_contract() {
        let a = SummaryVector {
            values: vec![1.0, 2.0, 3.0],
        };
        let b = SummaryVector {
            values: vec![1.0, 2.0, 4.0],
        };
        assert_eq!(distance(&a, &a).unwrap(), 0.0);
        assert_eq!(distance(&a, &b).unwrap(), distance(&b, &a).unwrap());
        assert_eq!(distance(&a, &b).unwrap(), 1.0);
        let short = SummaryVector { values: vec![0.0] };
        assert!(matches!(
            distance(&a, &short),
            Err(InferenceError::LengthMismatch { .. })
        ));
    }

    #[test]
    fn rejection_with_full_acceptance_returns_the_prior_rows() {
        let table = small_table(64, 2);
        let observed = table.summaries[0].clone();
        let posterior = abc_rejection(&observed, &table, 1.0).unwrap();
        assert_eq!(posterior.len(), table.len());
        let mut sorted_posterior: Vec<f64> = posterior.draws.iter().map(|d| d.w).collect();
        let mut sorted_table: Vec<f64> = table.params.iter().map(|d| d.w).collect();
        sorted_posterior.sort_by(|a, b| a.partial_cmp(b).unwrap());
        sorted_table.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_eq!(sorted_posterior, sorted_table);
        assert_relative_eq!(posterior.weights.iter().sum::<f64>(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn rejection_recovers_an_exact_row() {
        let table = small_table(64, 3);
        let observed = table.summaries[17].clone();
        let posterior = abc_rejection(&observed, &table, 1.0 / 64.0).unwrap();
        assert_eq!(posterior.len(), 1);
        assert_eq!(posterior.draws[0], table.params[17]);
    }

    #[test]
    fn shrinking_acceptance_never_worsens_the_cutoff() {
        let table = small_table(64, 4);
        let observed = table.summaries[5].clone();
        let full = rejection_by_count(&observed, &table, 64).unwrap();
        let mut prev_worst = f64::INFINITY;
        for keep in [64usize, 32, 16, 8, 4, 2, 1] {
            let r = rejection_by_count(&observed, &table, keep).unwrap();
            let worst = r.accepted_distances.last().copied().unwrap();
            assert!(worst <= prev_worst + 1e-15);
            prev_worst = worst;
        }
        assert!(full.accepted_distances.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn posterior_quantile_inverse_cdf_convention() {
        let draws = vec![1.0, 2.0, 3.0, 4.0]
            .into_iter()
            .map(|v| GlobalParams::new(v, 1.0, 0.5, 0.2))
            .collect();
        let samples = PosteriorSamples::uniform(draws);
        assert_eq!(posterior_quantile(&samples, ParamName::W, 0.5), 2.0);
        assert_eq!(posterior_quantile(&samples, ParamName::W, 1.0), 4.0);
        assert_eq!(posterior_quantile(&samples, ParamName::W, 0.51), 3.0);

        let constant = PosteriorSamples::uniform(vec![GlobalParams::new(0.3, 1.0, 0.5, 0.2); 5]);
        for beta in [0.01, 0.5, 0.99, 1.0] {
            assert_eq!(posterior_quantile(&constant, ParamName::W, beta), 0.3);
        }
    }

    #[test]
    fn smc_single_generation_equals_rejection() {
        let setup = small_setup(40);
        let prior = PriorSpec::default();
        let observed = setup
            .summarize_run(&GlobalParams::new(0.5, 1.0, 0.5, 0.2), 777)
            .unwrap();
        let schedule = SmcSchedule {
            population: 16,
            generations: 1,
            quantile: 0.25,
        };
        let smc = abc_smc(&observed, &prior, &setup, schedule, 21, None).unwrap();

        let rows = (16.0f64 / 0.25).ceil() as usize;
        let table = build_reference_table(&prior, &setup, rows, 21, None).unwrap();
        let rejection = abc_rejection(&observed, &table, 0.25).unwrap();
        assert_eq!(smc.posterior, rejection);
    }

    #[test]
    fn smc_tolerances_are_non_increasing_and_weights_normalized() {
        let setup = small_setup(40);
        let prior = PriorSpec::default();
        let truth = GlobalParams::new(0.6, 1.2, 0.4, 0.15);
        let observed = setup.summarize_run(&truth, 1234).unwrap();
        let schedule = SmcSchedule {
            population: 24,
            generations: 3,
            quantile: 0.5,
        };
        let out = abc_smc(&observed, &prior, &setup, schedule, 77, None).unwrap();
        assert!(out.tolerances.windows(2).all(|w| w[1] <= w[0] + 1e-12));
        assert_relative_eq!(
            out.posterior.weights.iter().sum::<f64>(),
            1.0,
            epsilon = 1e-9
        );
        assert!(out.posterior.effective_sample_size() >= 1.0);
        assert!(out.posterior.draws.iter().all(|d| d.is_valid()));
        assert_eq!(out.posterior.len(), 24);

        // Determinism end to end.
        let again = abc_smc(&observed, &prior, &setup, schedule, 77, None).unwrap();
        assert_eq!(out.posterior, again.posterior);
    }
}
