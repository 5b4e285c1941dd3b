//! Validation metrics and the end-to-end calibration/recovery experiment.
//!
//! Empirical coverage of central credible intervals, expected calibration
//! error, posterior contraction, normalized RMSE, and the Pearson recovery
//! correlation, plus a driver that evaluates them over an ensemble of test
//! simulations with prior-drawn ground truths.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::ContinuousCDF;

use crate::inference::{
    abc_rejection, abc_smc_with_table, posterior_quantile, InferenceError, PosteriorSamples,
    Progress, ReferenceTable, SmcSchedule,
};
use crate::params::ParamName;

#[derive(Debug, thiserror::Error)]
pub enum DiagnosticsError {
    #[error("need at least {needed} test cases, got {got}")]
    TooFewCases { needed: usize, got: usize },
    #[error("correlation undefined: {0} values are constant")]
    ConstantInput(&'static str),
    #[error("case {index}: {source}")]
    Case {
        index: usize,
        source: InferenceError,
    },
    #[error("case {index}: {source}")]
    CaseSim {
        index: usize,
        source: crate::dynamics::SimError,
    },
}

/// Fraction of test cases whose truth falls inside the central credible
/// interval of size `alpha` (closed bounds at the (1−α)/2 and (1+α)/2
/// weighted quantiles).
pub fn empirical_coverage(
    truths: &[f64],
    posteriors: &[PosteriorSamples],
    param: ParamName,
    alpha: f64,
) -> f64 {
    assert_eq!(truths.len(), posteriors.len());
    assert!(!truths.is_empty() && alpha > 0.0 && alpha < 1.0);
    let beta = (1.0 - alpha) / 2.0;
    let covered = truths
        .iter()
        .zip(posteriors)
        .filter(|(truth, post)| {
            let lo = posterior_quantile(post, param, beta);
            let hi = posterior_quantile(post, param, 1.0 - beta);
            lo <= **truth && **truth <= hi
        })
        .count();
    covered as f64 / truths.len() as f64
}

/// Expected calibration error: mean absolute gap between empirical and
/// nominal coverage over the α grid.
pub fn ece(
    truths: &[f64],
    posteriors: &[PosteriorSamples],
    param: ParamName,
    alpha_grid: &[f64],
) -> f64 {
    assert!(!alpha_grid.is_empty());
    alpha_grid
        .iter()
        .map(|&alpha| (empirical_coverage(truths, posteriors, param, alpha) - alpha).abs())
        .sum::<f64>()
        / alpha_grid.len() as f64
}

/// Default credibility grid: 20 equally spaced levels on [0.05, 0.995].
pub fn default_alpha_grid() -> Vec<f64> {
    let k = 20;
    (0..k)
        .map(|i| 0.05 + (0.995 - 0.05) * i as f64 / (k - 1) as f64)
        .collect()
}

/// Posterior contraction 1 − Var_post/Var_prior for one test case; the
/// flag marks a degenerate (single-draw) posterior, reported as PC = 1.
pub fn posterior_contraction(
    posterior: &PosteriorSamples,
    prior_variance: f64,
    param: ParamName,
) -> (f64, bool) {
    assert!(prior_variance > 0.0);
    if posterior.len() < 2 {
        return (1.0, true);
    }
    (
        1.0 - posterior.weighted_variance(param) / prior_variance,
        false,
    )
}

/// Bayesian normalized RMSE over S cases and their posterior draws,
/// normalized by `support = (λ_min, λ_max)`. Weighted draws generalize the
/// equal-weight average over posterior samples.
pub fn nrmse(
    truths: &[f64],
    posteriors: &[PosteriorSamples],
    param: ParamName,
    support: (f64, f64),
) -> f64 {
    assert_eq!(truths.len(), posteriors.len());
    assert!(!truths.is_empty());
    let (lo, hi) = support;
    assert!(hi > lo, "support must have positive width");
    let mean_sq = truths
        .iter()
        .zip(posteriors)
        .map(|(truth, post)| {
            post.draws
                .iter()
                .zip(&post.weights)
                .map(|(d, w)| {
                    let e = d.get(param) - truth;
                    w * e * e
                })
                .sum::<f64>()
        })
        .sum::<f64>()
        / truths.len() as f64;
    mean_sq.sqrt() / (hi - lo)
}

/// Pearson correlation between ground truths and posterior medians.
pub fn recovery_correlation(truths: &[f64], medians: &[f64]) -> Result<f64, DiagnosticsError> {
    assert_eq!(truths.len(), medians.len());
    if truths.len() < 2 {
        return Err(DiagnosticsError::TooFewCases {
            needed: 2,
            got: truths.len(),
        });
    }
    let n = truths.len() as f64;
    let mean_t = truths.iter().sum::<f64>() / n;
    let mean_m = medians.iter().sum::<f64>() / n;
    let mut cov = 0.0;
    let mut var_t = 0.0;
    let mut var_m = 0.0;
    for (t, m) in truths.iter().zip(medians) {
        cov += (t - mean_t) * (m - mean_m);
        var_t += (t - mean_t) * (t - mean_t);
        var_m += (m - mean_m) * (m - mean_m);
    }
    if var_t == 0.0 {
        return Err(DiagnosticsError::ConstantInput("truth"));
    }
    if var_m == 0.0 {
        return Err(DiagnosticsError::ConstantInput("median"));
    }
    Ok(cov / (var_t * var_m).sqrt())
}

/// Clopper–Pearson interval for `k` successes out of `n` at the given
/// confidence level.
pub fn clopper_pearson(k: usize, n: usize, confidence: f64) -> (f64, f64) {
    assert!(k <= n && n > 0 && confidence > 0.0 && confidence < 1.0);
    let delta = 1.0 - confidence;
    let (kf, nf) = (k as f64, n as f64);
    let lo = if k == 0 {
        0.0
    } else {
        statrs::distribution::Beta::new(kf, nf - kf + 1.0)
            .expect("valid shapes")
            .inverse_cdf(delta / 2.0)
    };
    let hi = if k == n {
        1.0
    } else {
        statrs::distribution::Beta::new(kf + 1.0, nf - kf)
            .expect("valid shapes")
            .inverse_cdf(1.0 - delta / 2.0)
    };
    (lo, hi)
}

/// Reference band around the nominal coverage α: the Clopper–Pearson
/// interval had exactly round(α·n) of n cases been covered.
pub fn coverage_band(alpha: f64, n: usize, confidence: f64) -> (f64, f64) {
    let k = (alpha * n as f64).round().clamp(0.0, n as f64) as usize;
    clopper_pearson(k, n, confidence)
}

/// How each test case's posterior is produced.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "snake_case")]
pub enum InferenceMethod {
    /// ABC rejection against the shared reference table.
    Rejection { accept_fraction: f64 },
    /// ABC-SMC seeded from the shared reference table.
    Smc { schedule: SmcSchedule },
    /// Null estimator: the posterior is fresh prior draws, ignoring the
    /// observation. Separates metric validation from inference quality.
    PriorNull { draws: usize },
}

/// Study configuration for [`run_recovery_study`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudySettings {
    /// Number of test simulations S.
    pub cases: usize,
    pub method: InferenceMethod,
    /// Credibility levels of the coverage curve.
    pub alpha_grid: Vec<f64>,
    /// Confidence of the binomial reference band on the coverage curve.
    pub band_confidence: f64,
}

impl StudySettings {
    pub fn new(cases: usize, method: InferenceMethod) -> Self {
        Self {
            cases,
            method,
            alpha_grid: default_alpha_grid(),
            band_confidence: 0.95,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoveragePoint {
    pub alpha: f64,
    pub coverage: f64,
    pub band_lo: f64,
    pub band_hi: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamReport {
    pub ece: f64,
    pub nrmse: f64,
    /// (λ_min, λ_max) used to normalize the RMSE: prior support for bounded
    /// parameters, empirical truth range for r.
    pub nrmse_normalization: (f64, f64),
    /// Mean over test cases of 1 − Var_post/Var_prior.
    pub posterior_contraction: f64,
    pub contraction_degenerate_cases: usize,
    pub recovery_correlation: f64,
    pub coverage: Vec<CoveragePoint>,
}

/// Per-parameter metrics over an ensemble of test simulations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecoveryReport {
    pub cases: usize,
    pub alpha_grid: Vec<f64>,
    pub band_confidence: f64,
    pub method: InferenceMethod,
    pub base_seed: u64,
    pub w: ParamReport,
    pub r: ParamReport,
    pub v: ParamReport,
    pub eta: ParamReport,
}

impl RecoveryReport {
    pub fn param(&self, name: ParamName) -> &ParamReport {
        match name {
            ParamName::W => &self.w,
            ParamName::R => &self.r,
            ParamName::V => &self.v,
            ParamName::Eta => &self.eta,
        }
    }
}

/// Draws S (truth, observation) pairs from the prior predictive, runs the
/// chosen inference per observation, and computes all metrics per parameter.
///
/// Case seeds derive from the CASES family of `base_seed` and are disjoint
/// from the table's row seeds; identical inputs reproduce the report exactly.
pub fn run_recovery_study(
    table: &ReferenceTable,
    settings: &StudySettings,
    base_seed: u64,
    progress: Progress,
) -> Result<RecoveryReport, DiagnosticsError> {
    use crate::seeds::{derive_seed, family_seed, role};

    if settings.cases < 2 {
        return Err(DiagnosticsError::TooFewCases {
            needed: 2,
            got: settings.cases,
        });
    }
    let family = family_seed(base_seed, role::CASES);
    let done = std::sync::atomic::AtomicUsize::new(0);
    let cases: Result<Vec<_>, DiagnosticsError> = (0..settings.cases)
        .into_par_iter()
        .map(|i| {
            let case_seed = derive_seed(family, i as u64);
            let mut truth_rng = ChaCha8Rng::seed_from_u64(case_seed);
            truth_rng.set_stream(1);
            let truth = table.prior.sample(&mut truth_rng);
            let observed = table
                .setup
                .summarize_run(&truth, case_seed)
                .map_err(|source| DiagnosticsError::CaseSim { index: i, source })?;
            let posterior = match settings.method {
                InferenceMethod::Rejection { accept_fraction } => {
                    abc_rejection(&observed, table, accept_fraction)
                        .map_err(|source| DiagnosticsError::Case { index: i, source })?
                }
                InferenceMethod::Smc { schedule } => {
                    abc_smc_with_table(&observed, table, schedule, derive_seed(case_seed, 0))
                        .map_err(|source| DiagnosticsError::Case { index: i, source })?
                        .posterior
                }
                InferenceMethod::PriorNull { draws } => {
                    let mut rng = ChaCha8Rng::seed_from_u64(case_seed);
                    rng.set_stream(2);
                    PosteriorSamples::uniform(
                        (0..draws.max(2)).map(|_| table.prior.sample(&mut rng)).collect(),
                    )
                }
            };
            if let Some(report) = progress {
                let n = done.fetch_add(1, std::sync::atomic::Ordering::Relaxed) + 1;
                report(n, settings.cases);
            }
            Ok((truth, posterior))
        })
        .collect();
    let cases = cases?;
    let truths_all: Vec<crate::params::GlobalParams<f64>> =
        cases.iter().map(|(t, _)| *t).collect();
    let posteriors: Vec<PosteriorSamples> = cases.into_iter().map(|(_, p)| p).collect();

    let mut reports: Vec<ParamReport> = Vec::with_capacity(4);
    for name in ParamName::ALL {
        let truths: Vec<f64> = truths_all.iter().map(|t| t.get(name)).collect();
        let coverage = settings
            .alpha_grid
            .iter()
            .map(|&alpha| {
                let c = empirical_coverage(&truths, &posteriors, name, alpha);
                let (band_lo, band_hi) =
                    coverage_band(alpha, truths.len(), settings.band_confidence);
                CoveragePoint {
                    alpha,
                    coverage: c,
                    band_lo,
                    band_hi,
                }
            })
            .collect();
        let ece_value = ece(&truths, &posteriors, name, &settings.alpha_grid);

        let prior_variance = table.prior.marginal_variance(name);
        let mut degenerate = 0usize;
        let pc_mean = posteriors
            .iter()
            .map(|p| {
                let (pc, flag) = posterior_contraction(p, prior_variance, name);
                if flag {
                    degenerate += 1;
                }
                pc
            })
            .sum::<f64>()
            / posteriors.len() as f64;

        let support = crate::prior::PriorSpec::bounded_support(name).unwrap_or_else(|| {
            let lo = truths.iter().cloned().fold(f64::INFINITY, f64::min);
            let hi = truths.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            (lo, hi)
        });
        let nrmse_value = nrmse(&truths, &posteriors, name, support);

        let medians: Vec<f64> = posteriors.iter().map(|p| p.median(name)).collect();
        let correlation = recovery_correlation(&truths, &medians)?;

        reports.push(ParamReport {
            ece: ece_value,
            nrmse: nrmse_value,
            nrmse_normalization: support,
            posterior_contraction: pc_mean,
            contraction_degenerate_cases: degenerate,
            recovery_correlation: correlation,
            coverage,
        });
    }
    let eta = reports.pop().expect("four params");
    let v = reports.pop().expect("four params");
    let r = reports.pop().expect("four params");
    let w = reports.pop().expect("four params");
    Ok(RecoveryReport {
        cases: settings.cases,
        alpha_grid: settings.alpha_grid.clone(),
        band_confidence: settings.band_confidence,
        method: settings.method,
        base_seed,
        w,
        r,
        v,
        eta,
    })
}
