//! Joint prior over the estimated parameters (complete pooling).
//!
//! The four marginals are mutually independent:
//! w ~ Beta(2,2), r ~ LogNormal(0, 0.5), eta ~ Beta(2,5), v ~ Beta(2,2).

use rand::Rng;
use rand_distr::Distribution;
use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::params::{GlobalParams, ParamName};

/// Beta(α, β) marginal on (0, 1).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BetaMarginal {
    pub alpha: f64,
    pub beta: f64,
}

impl BetaMarginal {
    pub fn new(alpha: f64, beta: f64) -> Self {
        Self { alpha, beta }
    }

    pub fn mean(&self) -> f64 {
        self.alpha / (self.alpha + self.beta)
    }

    pub fn variance(&self) -> f64 {
        let s = self.alpha + self.beta;
        self.alpha * self.beta / (s * s * (s + 1.0))
    }

    /// Log density; −∞ outside the open support (0, 1).
    pub fn ln_pdf(&self, x: f64) -> f64 {
        if !(x > 0.0 && x < 1.0) {
            return f64::NEG_INFINITY;
        }
        let ln_beta_fn = ln_gamma(self.alpha) + ln_gamma(self.beta) - ln_gamma(self.alpha + self.beta);
        (self.alpha - 1.0) * x.ln() + (self.beta - 1.0) * (1.0 - x).ln() - ln_beta_fn
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        rand_distr::Beta::new(self.alpha, self.beta)
            .expect("shape parameters validated at construction")
            .sample(rng)
    }
}

/// LogNormal(μ, σ) marginal on (0, ∞); σ is the log-scale standard deviation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogNormalMarginal {
    pub mu: f64,
    pub sigma: f64,
}

impl LogNormalMarginal {
    pub fn new(mu: f64, sigma: f64) -> Self {
        Self { mu, sigma }
    }

    pub fn median(&self) -> f64 {
        self.mu.exp()
    }

    pub fn mean(&self) -> f64 {
        (self.mu + 0.5 * self.sigma * self.sigma).exp()
    }

    pub fn variance(&self) -> f64 {
        let s2 = self.sigma * self.sigma;
        (s2.exp() - 1.0) * (2.0 * self.mu + s2).exp()
    }

    /// Log density; −∞ for x ≤ 0.
    pub fn ln_pdf(&self, x: f64) -> f64 {
        if !(x > 0.0) {
            return f64::NEG_INFINITY;
        }
        let z = (x.ln() - self.mu) / self.sigma;
        -x.ln() - self.sigma.ln() - 0.5 * (2.0 * std::f64::consts::PI).ln() - 0.5 * z * z
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        rand_distr::LogNormal::new(self.mu, self.sigma)
            .expect("scale parameter validated at construction")
            .sample(rng)
    }
}

/// Independent joint prior over (w, r, v, eta).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PriorSpec {
    pub w: BetaMarginal,
    pub r: LogNormalMarginal,
    pub v: BetaMarginal,
    pub eta: BetaMarginal,
}

impl Default for PriorSpec {
    fn default() -> Self {
        Self {
            w: BetaMarginal::new(2.0, 2.0),
            r: LogNormalMarginal::new(0.0, 0.5),
            v: BetaMarginal::new(2.0, 2.0),
            eta: BetaMarginal::new(2.0, 5.0),
        }
    }
}

impl PriorSpec {
    pub fn validate(&self) -> Result<(), String> {
        for (name, a, b) in [
            ("w", self.w.alpha, self.w.beta),
            ("v", self.v.alpha, self.v.beta),
            ("eta", self.eta.alpha, self.eta.beta),
        ] {
            if !(a > 0.0 && b > 0.0) {
                return Err(format!("prior for {name}: shape parameters must be > 0"));
            }
        }
        if !(self.r.sigma > 0.0) {
            return Err("prior for r: sigma must be > 0".into());
        }
        Ok(())
    }

    /// One independent draw from the joint prior.
    ///
    /// Draw order is fixed (w, r, v, eta) so a given random stream always
    /// yields the same parameter vector. Draws at the open-support boundary
    /// are rejected and redrawn; with the default shapes this never triggers
    /// in practice.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> GlobalParams<f64> {
        for _ in 0..100 {
            let draw = GlobalParams {
                w: self.w.sample(rng),
                r: self.r.sample(rng),
                v: self.v.sample(rng),
                eta: self.eta.sample(rng),
            };
            if draw.is_valid() {
                return draw;
            }
        }
        unreachable!("prior support equals parameter support; repeated invalid draws are impossible")
    }

    /// Sum of the four marginal log densities; −∞ outside the joint support.
    pub fn log_density(&self, params: &GlobalParams<f64>) -> f64 {
        self.w.ln_pdf(params.w)
            + self.r.ln_pdf(params.r)
            + self.v.ln_pdf(params.v)
            + self.eta.ln_pdf(params.eta)
    }

    pub fn marginal_variance(&self, name: ParamName) -> f64 {
        match name {
            ParamName::W => self.w.variance(),
            ParamName::R => self.r.variance(),
            ParamName::V => self.v.variance(),
            ParamName::Eta => self.eta.variance(),
        }
    }

    pub fn marginal_mean(&self, name: ParamName) -> f64 {
        match name {
            ParamName::W => self.w.mean(),
            ParamName::R => self.r.mean(),
            ParamName::V => self.v.mean(),
            ParamName::Eta => self.eta.mean(),
        }
    }

    /// Finite support bounds where they exist (w, v, eta); `None` for r.
    pub fn bounded_support(name: ParamName) -> Option<(f64, f64)> {
        match name {
            ParamName::W | ParamName::V | ParamName::Eta => Some((0.0, 1.0)),
            ParamName::R => None,
        }
    }

    /// The eight scalar shape values, in serialization order.
    pub fn to_array(&self) -> [f64; 8] {
        [
            self.w.alpha,
            self.w.beta,
            self.r.mu,
            self.r.sigma,
            self.v.alpha,
            self.v.beta,
            self.eta.alpha,
            self.eta.beta,
        ]
    }

    pub fn from_array(a: [f64; 8]) -> Self {
        Self {
            w: BetaMarginal::new(a[0], a[1]),
            r: LogNormalMarginal::new(a[2], a[3]),
            v: BetaMarginal::new(a[4], a[5]),
            eta: BetaMarginal::new(a[6], a[7]),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use statrs::distribution::Continuous;

    /// Composite Simpson quadrature of `f` on [a, b].
    fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, intervals: usize) -> f64 {
        let n = intervals + intervals % 2; // even
        let h = (b - a) / n as f64;
        let mut acc = f(a) + f(b);
        for i in 1..n {
            let x = a + h * i as f64;
            acc += f(x) * if i % 2 == 1 { 4.0 } else { 2.0 };
        }
        acc * h / 3.0
    }

    #[test]
    fn marginal_densities_integrate_to_one() {
        let p = PriorSpec::default();
        let beta22 = simpson(|x| p.w.ln_pdf(x).exp(), 1e-12, 1.0 - 1e-12, 100_000);
        let beta25 = simpson(|x| p.eta.ln_pdf(x).exp(), 1e-12, 1.0 - 1e-12, 100_000);
        // ±6σ in log space leaves ~2e-9 of mass outside.
        let lognorm = simpson(|x| p.r.ln_pdf(x).exp(), (-3.0f64).exp(), (3.0f64).exp(), 100_000);
        assert_relative_eq!(beta22, 1.0, epsilon = 1e-6);
        assert_relative_eq!(beta25, 1.0, epsilon = 1e-6);
        assert_relative_eq!(lognorm, 1.0, epsilon = 1e-6);
    }

    #[test]
    fn log_density_matches_closed_form() {
        let p = PriorSpec::default();
        let params = GlobalParams::new(0.5, 1.0, 0.5, 2.0 / 7.0);
        // Hand-evaluated pdfs: Beta(2,2) at 0.5 is 6·0.5·0.5; LogNormal(0,0.5)
        // at 1 is 1/(0.5·√(2π)); Beta(2,5) at 2/7 is 30·(2/7)·(5/7)^4.
        let expected = (6.0f64 * 0.25).ln()
            + (1.0 / (0.5 * (2.0 * std::f64::consts::PI).sqrt())).ln()
            + (6.0f64 * 0.25).ln()
            + (30.0 * (2.0 / 7.0) * (5.0f64 / 7.0).powi(4)).ln();
        assert_relative_eq!(p.log_density(&params), expected, epsilon = 1e-12);

        // Cross-check each marginal against statrs' independent implementation.
        let s_beta22 = statrs::distribution::Beta::new(2.0, 2.0).unwrap();
        let s_beta25 = statrs::distribution::Beta::new(2.0, 5.0).unwrap();
        let s_logn = statrs::distribution::LogNormal::new(0.0, 0.5).unwrap();
        assert_relative_eq!(p.w.ln_pdf(0.5), s_beta22.ln_pdf(0.5), epsilon = 1e-12);
        assert_relative_eq!(
            p.eta.ln_pdf(2.0 / 7.0),
            s_beta25.ln_pdf(2.0 / 7.0),
            epsilon = 1e-12
        );
        assert_relative_eq!(p.r.ln_pdf(1.0), s_logn.ln_pdf(1.0), epsilon = 1e-12);
    }

    #[test]
    fn out_of_support_is_neg_infinity() {
        let p = PriorSpec::default();
        let mut params = GlobalParams::new(1.5, 1.0, 0.5, 0.2);
        assert_eq!(p.log_density(&params), f64::NEG_INFINITY);
        params.w = 0.0; // exact boundary: Beta(2,2) density is 0 there
        assert_eq!(p.log_density(&params), f64::NEG_INFINITY);
        params.w = 0.5;
        params.r = -1.0;
        assert_eq!(p.log_density(&params), f64::NEG_INFINITY);
    }

    #[test]
    fn prior_draws_always_valid() {
        let p = PriorSpec::default();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100_000 {
            let draw = p.sample(&mut rng);
            assert!(draw.is_valid(), "invalid prior draw: {draw:?}");
        }
    }

    #[test]
    fn sample_moments_match_analytic() {
        let p = PriorSpec::default();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let n = 1_000_000usize;
        let mut draws = Vec::with_capacity(n);
        for _ in 0..n {
            draws.push(p.sample(&mut rng));
        }
        let nf = n as f64;

        // Means of w and eta within 3 standard errors.
        let mean_w = draws.iter().map(|d| d.w).sum::<f64>() / nf;
        let se_w = (p.w.variance() / nf).sqrt();
        assert!((mean_w - 0.5).abs() < 3.0 * se_w, "mean_w = {mean_w}");

        let mean_eta = draws.iter().map(|d| d.eta).sum::<f64>() / nf;
        let se_eta = (p.eta.variance() / nf).sqrt();
        assert!(
            (mean_eta - 2.0 / 7.0).abs() < 3.0 * se_eta,
            "mean_eta = {mean_eta}"
        );

        // Median of r within 3 standard errors of the sample median
        // (SE ≈ 1/(2 f(m) √n) with f the LogNormal pdf at the median).
        let mut rs: Vec<f64> = draws.iter().map(|d| d.r).collect();
        rs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let median_r = 0.5 * (rs[n / 2 - 1] + rs[n / 2]);
        let pdf_at_median = p.r.ln_pdf(1.0).exp();
        let se_median = 1.0 / (2.0 * pdf_at_median * nf.sqrt());
        assert!(
            (median_r - 1.0).abs() < 3.0 * se_median,
            "median_r = {median_r}"
        );

        // Variances within 3 standard errors (normal-theory SE for Beta;
        // generous 4th-moment bound is unnecessary at n = 10^6).
        let var_w = draws.iter().map(|d| (d.w - mean_w).powi(2)).sum::<f64>() / nf;
        assert_relative_eq!(var_w, 0.05, epsilon = 3.0 * 0.05 * (2.0 / nf).sqrt() * 2.0);
        let var_eta = draws.iter().map(|d| (d.eta - mean_eta).powi(2)).sum::<f64>() / nf;
        assert_relative_eq!(
            var_eta,
            10.0 / 392.0,
            epsilon = 3.0 * (10.0 / 392.0) * (2.0 / nf).sqrt() * 2.0
        );

        // LogNormal mean e^{0.125}.
        let mean_r = rs.iter().sum::<f64>() / nf;
        let se_r = (p.r.variance() / nf).sqrt();
        assert!(
            (mean_r - 0.125f64.exp()).abs() < 3.0 * se_r,
            "mean_r = {mean_r}"
        );
    }

    #[test]
    fn same_stream_same_draw() {
        let p = PriorSpec::default();
        let a = p.sample(&mut ChaCha8Rng::seed_from_u64(42));
        let b = p.sample(&mut ChaCha8Rng::seed_from_u64(42));
        assert_eq!(a, b);
    }
}
