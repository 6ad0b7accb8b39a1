//! Exhaustive certification sweeps over every step of the bound.
//!
//! Each [`ClaimId`] is one finite numerical statement. [`run_claim`] evaluates
//! it over the range declared by a [`SweepConfig`] and returns a
//! [`CertificateReport`] carrying the smallest margin seen and where it
//! occurred.
//!
//! Independent `m` cells may be evaluated in parallel. Cell results are merged
//! in ascending `m`, and ties keep the earlier witness, so the serialized
//! report depends only on the config, never on scheduling.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::bound_chain::{
    beta, beta_sufficiency_limit, corollary2_bound, corollary2_upper, grid_camp_paulson_argument,
    grid_camp_paulson_bound, lambda_polynomial, lemma2_argument, lemma2_bound, lemma3_bound,
    log_series_bound, phi_ratio, ratio_alpha_beta, ratio_in_lambda, ratio_in_lambda_derivative,
    rho, rho_prime, rho_real, theta,
};
use crate::camp_paulson::{camp_paulson_cdf, camp_paulson_terms, std_normal_cdf};
use crate::exact::{
    cdf_row, cmp_rational_f64, grid_cdf, grid_upper_tail, rational_grid, rational_to_f64,
    tail_at_or_above_mean, tail_at_or_below_mean, BinomialParams, ExactProbability, TrialCount,
};
use crate::margin::{Margin, Witness};
use crate::{Error, Result};

/// Largest `k` for the `alpha_k / beta_k <= theta` sweep.
pub const RATIO_K_MAX: i64 = 10_000;
/// Random `beta` draws for the endpoint check.
pub const ENDPOINT_SAMPLES: usize = 200;
/// Points of the `gamma` grid on `[0, 1]` for the endpoint check.
pub const GAMMA_GRID_POINTS: usize = 1000;
/// Slack allowed on the endpoint comparison.
pub const ENDPOINT_SLACK: f64 = 1e-12;
/// Real `m` samples for the `rho'` checks.
pub const RHO_PRIME_SAMPLES: usize = 50;
/// Relative tolerance between `rho'` and its difference quotient.
pub const RHO_PRIME_REL_TOL: f64 = 1e-6;
/// Tolerance for `alpha_1 / beta_1 = theta`.
pub const RATIO_EQUALITY_TOL: f64 = 1e-12;
/// At most this many failing or flagged witnesses are listed per report.
pub const MAX_LISTED: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ClaimId {
    Lemma1Monotone,
    Lemma1GridLb,
    Cor1Reduction,
    Lemma2Domination,
    Lemma2Ratio,
    Lemma3Endpoint,
    Cor2Constant,
    Lemma4Rho,
    CampPaulsonErr,
    TheoremMain,
    Cor3Symmetry,
}

impl ClaimId {
    pub const ALL: [ClaimId; 11] = [
        ClaimId::Lemma1Monotone,
        ClaimId::Lemma1GridLb,
        ClaimId::Cor1Reduction,
        ClaimId::Lemma2Domination,
        ClaimId::Lemma2Ratio,
        ClaimId::Lemma3Endpoint,
        ClaimId::Cor2Constant,
        ClaimId::Lemma4Rho,
        ClaimId::CampPaulsonErr,
        ClaimId::TheoremMain,
        ClaimId::Cor3Symmetry,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ClaimId::Lemma1Monotone => "LEMMA1_MONOTONE",
            ClaimId::Lemma1GridLb => "LEMMA1_GRID_LB",
            ClaimId::Cor1Reduction => "COR1_REDUCTION",
            ClaimId::Lemma2Domination => "LEMMA2_DOMINATION",
            ClaimId::Lemma2Ratio => "LEMMA2_RATIO",
            ClaimId::Lemma3Endpoint => "LEMMA3_ENDPOINT",
            ClaimId::Cor2Constant => "COR2_CONSTANT",
            ClaimId::Lemma4Rho => "LEMMA4_RHO",
            ClaimId::CampPaulsonErr => "CAMP_PAULSON_ERR",
            ClaimId::TheoremMain => "THEOREM_MAIN",
            ClaimId::Cor3Symmetry => "COR3_SYMMETRY",
        }
    }

    /// The inequality the claim certifies.
    pub fn statement(self) -> &'static str {
        match self {
            ClaimId::Lemma1Monotone => {
                "F(m,p) is strictly increasing in p on each (k/m, (k+1)/m]"
            }
            ClaimId::Lemma1GridLb => {
                "F(m,p) >= P[X >= k+1 | B(m,k/m)] for p in (k/m, (k+1)/m]"
            }
            ClaimId::Cor1Reduction => {
                "F(m,p) >= 1 - max_k P[X <= k | B(m,k/m)] for p in (1/m, 1)"
            }
            ClaimId::Lemma2Domination => {
                "P[X <= k | B(m,k/m)] <= Phi((beta_k theta + gamma/3)/sqrt(beta_k + gamma)) + 0.007/sqrt(1 - 1/m)"
            }
            ClaimId::Lemma2Ratio => "alpha_k / beta_k <= theta, with equality only at k = 1",
            ClaimId::Lemma3Endpoint => {
                "phi(gamma) = (beta theta + gamma/3)/sqrt(beta + gamma) is maximised at gamma = 1 on [0, 1]"
            }
            ClaimId::Cor2Constant => "P[X <= k | B(m,k/m)] <= 0.7152 for k >= 2",
            ClaimId::Lemma4Rho => "rho(m) = P[X <= 1 | B(m,1/m)] <= 3/4 and rho is non-increasing",
            ClaimId::CampPaulsonErr => {
                "|P[X <= j] - Phi((c - mu)/sigma)| <= 0.007/sqrt(m p (1-p))"
            }
            ClaimId::TheoremMain => "P[X >= mp] > 1/4 for p > 1/m",
            ClaimId::Cor3Symmetry => "P[X <= mp] = F(m, 1-p) > 1/4 for p < 1 - 1/m",
        }
    }

    /// Whether the claim needs a strictly positive margin.
    pub fn is_strict(self) -> bool {
        matches!(
            self,
            ClaimId::Lemma1Monotone
                | ClaimId::Lemma2Ratio
                | ClaimId::TheoremMain
                | ClaimId::Cor3Symmetry
        )
    }
}

impl fmt::Display for ClaimId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ClaimId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let normalized = s.trim().to_ascii_uppercase().replace('-', "_");
        ClaimId::ALL
            .into_iter()
            .find(|c| c.as_str() == normalized)
            .ok_or_else(|| Error::UnknownClaim(s.to_string()))
    }
}

impl Serialize for ClaimId {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(self.as_str())
    }
}

/// Declared range of a sweep. Every field is at least 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SweepConfig {
    pub max_m: u32,
    pub p_denominator_limit: u32,
    pub grid_points_per_interval: u32,
    pub seed: u64,
}

impl SweepConfig {
    pub fn new(
        max_m: u32,
        p_denominator_limit: u32,
        grid_points_per_interval: u32,
        seed: u64,
    ) -> Result<Self> {
        let config = SweepConfig {
            max_m,
            p_denominator_limit,
            grid_points_per_interval,
            seed,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        TrialCount::new(self.max_m)?;
        if self.p_denominator_limit == 0 {
            return Err(Error::domain("p_denominator_limit must be >= 1"));
        }
        if self.grid_points_per_interval == 0 {
            return Err(Error::domain("grid_points_per_interval must be >= 1"));
        }
        Ok(())
    }
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            max_m: 100,
            p_denominator_limit: 200,
            grid_points_per_interval: 99,
            seed: 0x5EED,
        }
    }
}

/// Outcome of one claim over one config.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CertificateReport {
    pub claim: ClaimId,
    pub config: SweepConfig,
    pub strict: bool,
    pub pass: bool,
    /// `None` when the swept domain is empty.
    pub worst_margin: Option<Margin>,
    pub worst_witness: Option<Witness>,
    pub checked_count: u64,
    pub failure_count: u64,
    /// The first [`MAX_LISTED`] failing checks.
    pub failures: Vec<Witness>,
    pub flagged_count: u64,
    /// Boundary cases worth a look that do not fail the claim.
    pub flagged: Vec<Witness>,
    /// Wall-clock time. Not serialized, so reports stay byte-reproducible.
    #[serde(skip)]
    pub elapsed: Duration,
}

impl CertificateReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("reports always serialize")
    }
}

/// One JSON object per line, in the order given.
pub fn reports_to_json_lines(reports: &[CertificateReport]) -> String {
    let mut out = String::new();
    for r in reports {
        out.push_str(&r.to_json());
        out.push('\n');
    }
    out
}

#[derive(Debug, Default)]
struct Tally {
    checked: u64,
    worst: Option<(Margin, Witness)>,
    failure_count: u64,
    failures: Vec<Witness>,
    flagged_count: u64,
    flagged: Vec<Witness>,
}

impl Tally {
    fn observe(&mut self, margin: Margin, witness: impl FnOnce() -> Witness) {
        self.checked += 1;
        let better = match &self.worst {
            None => true,
            Some((w, _)) => margin.total_cmp(w).is_lt(),
        };
        if better {
            self.worst = Some((margin, witness()));
        }
    }

    fn check(&mut self, ok: bool, witness: impl FnOnce() -> Witness) {
        self.checked += 1;
        if !ok {
            self.failure_count += 1;
            if self.failures.len() < MAX_LISTED {
                self.failures.push(witness());
            }
        }
    }

    fn flag(&mut self, witness: Witness) {
        self.flagged_count += 1;
        if self.flagged.len() < MAX_LISTED {
            self.flagged.push(witness);
        }
    }

    fn merge(&mut self, later: Tally) {
        self.checked += later.checked;
        if let Some((m, w)) = later.worst {
            self.observe(m, || w);
            self.checked -= 1;
        }
        self.failure_count += later.failure_count;
        for w in later.failures {
            if self.failures.len() < MAX_LISTED {
                self.failures.push(w);
            }
        }
        self.flagged_count += later.flagged_count;
        for w in later.flagged {
            if self.flagged.len() < MAX_LISTED {
                self.flagged.push(w);
            }
        }
    }
}

/// Runs `cell` for every `m` in `lo..=hi` (possibly in parallel) and merges in order.
fn sweep_m<F>(lo: u32, hi: u32, cell: F) -> Result<Tally>
where
    F: Fn(TrialCount) -> Result<Tally> + Sync + Send,
{
    let cells: Vec<Tally> = (lo..=hi)
        .into_par_iter()
        .map(|m| cell(TrialCount::new(m).expect("m >= 1")))
        .collect::<Result<_>>()?;
    let mut total = Tally::default();
    for t in cells {
        total.merge(t);
    }
    Ok(total)
}

fn rat(a: u64, b: u64) -> BigRational {
    BigRational::new(a.into(), b.into())
}

fn prob(q: BigRational) -> ExactProbability {
    ExactProbability::new(q).expect("constructed inside [0, 1]")
}

fn tail_above(m: TrialCount, p: &ExactProbability) -> TailValueParts {
    let t = tail_at_or_above_mean(&BinomialParams::new(m, p.clone()));
    TailValueParts {
        value: t.value.into_inner(),
        threshold: t.threshold_index,
    }
}

struct TailValueParts {
    value: BigRational,
    threshold: u32,
}

/// Points `k/m + i / ((N+1) m)` for `i = 1..=N+1`: `N` interior samples plus
/// the right endpoint of `(k/m, (k+1)/m]`.
fn interval_points(m: u32, k: u32, n: u32) -> Vec<ExactProbability> {
    let den = u64::from(m) * u64::from(n + 1);
    (1..=u64::from(n) + 1)
        .map(|i| prob(rat(u64::from(k) * u64::from(n + 1) + i, den)))
        .collect()
}

fn lemma1_monotone(config: &SweepConfig) -> Result<Tally> {
    let n = config.grid_points_per_interval;
    sweep_m(2, config.max_m, |m| {
        let mut t = Tally::default();
        for k in 1..m.get() {
            let points = interval_points(m.get(), k, n);
            let tails: Vec<TailValueParts> = points.iter().map(|p| tail_above(m, p)).collect();
            for (p, tail) in points.iter().zip(&tails) {
                t.check(tail.threshold == k + 1, || {
                    Witness::new()
                        .label("check", "threshold ceil(mp) = k+1")
                        .int("m", m.get())
                        .int("k", k)
                        .rational("p", p.value())
                });
            }
            for i in 1..points.len() {
                let diff = &tails[i].value - &tails[i - 1].value;
                t.observe(Margin::Exact(diff), || {
                    Witness::new()
                        .int("m", m.get())
                        .int("k", k)
                        .rational("p_lo", points[i - 1].value())
                        .rational("p_hi", points[i].value())
                });
            }
        }
        Ok(t)
    })
}

fn lemma1_grid_lb(config: &SweepConfig) -> Result<Tally> {
    let n = config.grid_points_per_interval;
    sweep_m(2, config.max_m, |m| {
        let mut t = Tally::default();
        for k in 1..m.get() {
            let lower = grid_upper_tail(m, i64::from(k))?.into_inner();
            for p in interval_points(m.get(), k, n) {
                let f = tail_above(m, &p).value;
                t.observe(Margin::Exact(f - &lower), || {
                    Witness::new()
                        .int("m", m.get())
                        .int("k", k)
                        .rational("p", p.value())
                });
            }
        }
        Ok(t)
    })
}

fn cor1_reduction(config: &SweepConfig, grid: &[ExactProbability]) -> Result<Tally> {
    sweep_m(2, config.max_m, |m| {
        let mut t = Tally::default();
        let mut max_cdf = BigRational::zero();
        let mut min_upper = BigRational::one();
        for k in 1..m.get() {
            max_cdf = max_cdf.max(grid_cdf(m, i64::from(k))?.into_inner());
            min_upper = min_upper.min(grid_upper_tail(m, i64::from(k))?.into_inner());
        }
        let floor = BigRational::one() - &max_cdf;
        t.check(min_upper == floor, || {
            Witness::new()
                .label("check", "min upper tail = 1 - max cdf")
                .int("m", m.get())
        });
        let inv_m = rat(1, u64::from(m.get()));
        for p in grid.iter().filter(|p| p.value() > &inv_m && !p.is_one()) {
            let f = tail_above(m, p).value;
            t.observe(Margin::Exact(f - &floor), || {
                Witness::new().int("m", m.get()).rational("p", p.value())
            });
        }
        Ok(t)
    })
}

/// `bound - exact` evaluated exactly, then rounded.
fn float_minus_exact(bound: f64, exact: &BigRational) -> Margin {
    let b = BigRational::from_float(bound).expect("finite bound");
    Margin::Approx(rational_to_f64(&(b - exact)))
}

fn lemma2_domination(config: &SweepConfig) -> Result<Tally> {
    sweep_m(2, config.max_m, |m| {
        let mut t = Tally::default();
        for k in 1..i64::from(m.get()) {
            let exact = grid_cdf(m, k)?.into_inner();
            let bound = lemma2_bound(m, k)?;
            t.observe(float_minus_exact(bound, &exact), || {
                Witness::new().int("m", m.get()).int("k", k)
            });

            let cp_bound = grid_camp_paulson_bound(m, k)?;
            t.check(cmp_rational_f64(&exact, cp_bound).is_le(), || {
                Witness::new()
                    .label("check", "grid cdf <= Camp-Paulson bound")
                    .int("m", m.get())
                    .int("k", k)
            });
            t.check(cp_bound <= bound, || {
                Witness::new()
                    .label("check", "Camp-Paulson bound <= theta-form bound")
                    .int("m", m.get())
                    .int("k", k)
            });
            let p = prob(rat(k as u64, u64::from(m.get())));
            let z = camp_paulson_terms(m, &p, k)?.z();
            let substituted = grid_camp_paulson_argument(m, k)?;
            t.check((z - substituted).abs() <= 1e-12 * z.abs().max(1.0), || {
                Witness::new()
                    .label("check", "substituted quantile matches terms")
                    .int("m", m.get())
                    .int("k", k)
            });
        }
        Ok(t)
    })
}

fn lemma2_ratio() -> Result<Tally> {
    let mut t = Tally::default();
    let th = theta();
    let top = 2f64.cbrt();
    t.check(lambda_polynomial(top) < 9.0, || {
        Witness::new()
            .label("check", "lambda polynomial < 9")
            .real("lambda", top)
    });
    let mut prev_beta = f64::INFINITY;
    for k in 1..=RATIO_K_MAX {
        let ratio = ratio_alpha_beta(k)?;
        let lambda = (1.0 + 1.0 / k as f64).cbrt();
        if k == 1 {
            t.check((ratio - th).abs() <= RATIO_EQUALITY_TOL, || {
                Witness::new()
                    .label("check", "alpha_1/beta_1 = theta")
                    .int("k", 1)
            });
        } else {
            t.observe(Margin::Approx(th - ratio), || Witness::new().int("k", k));
        }
        t.check((ratio - ratio_in_lambda(lambda)).abs() <= 1e-12, || {
            Witness::new()
                .label("check", "ratio in lambda form")
                .int("k", k)
        });
        t.check(ratio_in_lambda_derivative(lambda) > 0.0, || {
            Witness::new()
                .label("check", "ratio increasing in lambda")
                .int("k", k)
        });
        let b = beta(k)?;
        t.check(b < prev_beta, || {
            Witness::new()
                .label("check", "beta_k decreasing")
                .int("k", k)
        });
        prev_beta = b;
    }
    Ok(t)
}

fn lemma3_endpoint(config: &SweepConfig) -> Result<Tally> {
    let mut t = sweep_m(2, config.max_m, |m| {
        let mut t = Tally::default();
        for k in 1..i64::from(m.get()) {
            let inner = std_normal_cdf(lemma2_argument(m, k)?)?;
            let outer = lemma3_bound(k)?;
            t.observe(Margin::Approx(outer - inner), || {
                Witness::new().int("m", m.get()).int("k", k)
            });
        }
        Ok(t)
    })?;

    let limit = beta_sufficiency_limit();
    for k in 1..=i64::from(config.max_m) {
        let b = beta(k)?;
        t.check(b <= limit, || {
            Witness::new()
                .label("check", "beta_k <= 1/(theta(9 theta - 6))")
                .int("k", k)
        });
    }

    let beta_1 = beta(1)?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let last = (GAMMA_GRID_POINTS - 1) as f64;
    for sample in 0..ENDPOINT_SAMPLES {
        let u: f64 = rng.gen();
        let b = beta_1 * (1.0 - u);
        let mut interior_max = f64::NEG_INFINITY;
        for i in 0..GAMMA_GRID_POINTS {
            interior_max = interior_max.max(phi_ratio(b, i as f64 / last)?);
        }
        let at_zero = phi_ratio(b, 0.0)?;
        let at_one = phi_ratio(b, 1.0)?;
        t.check(interior_max <= at_zero.max(at_one) + ENDPOINT_SLACK, || {
            Witness::new()
                .label("check", "grid max <= endpoint max")
                .int("sample", sample as i64)
                .real("beta", b)
        });
        t.check(at_zero <= at_one, || {
            Witness::new()
                .label("check", "phi(0) <= phi(1)")
                .int("sample", sample as i64)
                .real("beta", b)
        });
    }
    Ok(t)
}

fn cor2_constant(config: &SweepConfig) -> Result<Tally> {
    let bound = corollary2_bound();
    sweep_m(3, config.max_m, |m| {
        let mut t = Tally::default();
        for k in 2..i64::from(m.get()) {
            let exact = grid_cdf(m, k)?.into_inner();
            t.observe(Margin::Exact(&bound - &exact), || {
                Witness::new().int("m", m.get()).int("k", k)
            });
            t.check(corollary2_upper(m, k)?.holds(), || {
                Witness::new()
                    .label("check", "componentwise certificate")
                    .int("m", m.get())
                    .int("k", k)
            });
            let chain = lemma2_bound(m, k)?;
            t.check(cmp_rational_f64(&bound, chain).is_ge(), || {
                Witness::new()
                    .label("check", "lemma-2 bound <= 0.7152")
                    .int("m", m.get())
                    .int("k", k)
            });
        }
        Ok(t)
    })
}

/// Five-point central difference of the real extension of `rho`.
fn rho_difference_quotient(m: f64) -> Result<f64> {
    let h = m / 200.0;
    let f = |x: f64| rho_real(x);
    Ok((f(m - 2.0 * h)? - 8.0 * f(m - h)? + 8.0 * f(m + h)? - f(m + 2.0 * h)?) / (12.0 * h))
}

fn lemma4_rho(config: &SweepConfig) -> Result<Tally> {
    let three_quarters = rat(3, 4);
    let max_m = config.max_m;
    let mut t = sweep_m(2, max_m, |m| {
        let mut t = Tally::default();
        let r = rho(m)?.into_inner();
        let margin = &three_quarters - &r;
        if margin.is_zero() {
            t.flag(
                Witness::new()
                    .label("note", "equality rho(m) = 3/4")
                    .int("m", m.get()),
            );
        }
        t.observe(Margin::Exact(margin), || Witness::new().int("m", m.get()));
        t.check(grid_cdf(m, 1)?.value() == &r, || {
            Witness::new()
                .label("check", "rho(m) = grid cdf(m, 1)")
                .int("m", m.get())
        });
        if m.get() < max_m {
            let next = rho(TrialCount::new(m.get() + 1)?)?.into_inner();
            t.check(next < r, || {
                Witness::new()
                    .label("check", "rho(m+1) < rho(m)")
                    .int("m", m.get())
            });
        }
        let mf = f64::from(m.get());
        t.check(rho_prime(mf)? <= 0.0, || {
            Witness::new()
                .label("check", "rho'(m) <= 0")
                .int("m", m.get())
        });
        let two = BigRational::from_integer(BigInt::from(2));
        t.check(log_series_bound(m.get())? >= two, || {
            Witness::new()
                .label("check", "series bound >= 2")
                .int("m", m.get())
        });
        Ok(t)
    })?;

    if max_m >= 2 {
        let span = f64::from(max_m - 2);
        for i in 0..RHO_PRIME_SAMPLES {
            let m = 2.0 + span * i as f64 / (RHO_PRIME_SAMPLES - 1) as f64;
            let d = rho_prime(m)?;
            let fd = rho_difference_quotient(m)?;
            t.check(d <= 0.0, || {
                Witness::new()
                    .label("check", "rho'(m) <= 0 at real m")
                    .real("m", m)
            });
            t.check((d - fd).abs() <= RHO_PRIME_REL_TOL * d.abs(), || {
                Witness::new()
                    .label("check", "rho' matches difference quotient")
                    .real("m", m)
                    .real("derivative", d)
                    .real("difference_quotient", fd)
            });
        }
    }
    Ok(t)
}

/// `error_bound - |estimate - exact|`, evaluated exactly then rounded.
fn envelope_margin(estimate: f64, error_bound: f64, exact: &BigRational) -> Margin {
    let est = BigRational::from_float(estimate).expect("finite estimate");
    let eb = BigRational::from_float(error_bound).expect("finite bound");
    let gap = (est - exact).abs();
    Margin::Approx(rational_to_f64(&(eb - gap)))
}

fn camp_paulson_err(config: &SweepConfig) -> Result<Tally> {
    sweep_m(2, config.max_m, |m| {
        let mut t = Tally::default();
        for tenth in 1..=9u64 {
            let p = prob(rat(tenth, 10));
            let row = cdf_row(&BinomialParams::new(m, p.clone()));
            for j in 0..m.get() {
                let approx = camp_paulson_cdf(m, &p, i64::from(j))?;
                let exact = row[j as usize].value();
                t.observe(
                    envelope_margin(approx.estimate, approx.error_bound, exact),
                    || {
                        Witness::new()
                            .int("m", m.get())
                            .rational("p", p.value())
                            .int("j", j)
                    },
                );
            }
        }
        for k in 1..m.get() {
            let p = prob(rat(u64::from(k), u64::from(m.get())));
            let approx = camp_paulson_cdf(m, &p, i64::from(k))?;
            let exact = grid_cdf(m, i64::from(k))?.into_inner();
            t.observe(
                envelope_margin(approx.estimate, approx.error_bound, &exact),
                || {
                    Witness::new()
                        .int("m", m.get())
                        .rational("p", p.value())
                        .int("j", k)
                },
            );
        }
        Ok(t)
    })
}

fn theorem_main(config: &SweepConfig, grid: &[ExactProbability]) -> Result<Tally> {
    let quarter = rat(1, 4);
    sweep_m(2, config.max_m, |m| {
        let mut t = Tally::default();
        let inv_m = rat(1, u64::from(m.get()));
        for p in grid.iter().filter(|p| p.value() > &inv_m) {
            let f = tail_above(m, p).value;
            t.observe(Margin::Exact(f - &quarter), || {
                Witness::new().int("m", m.get()).rational("p", p.value())
            });
        }
        Ok(t)
    })
}

fn cor3_symmetry(config: &SweepConfig, grid: &[ExactProbability]) -> Result<Tally> {
    let quarter = rat(1, 4);
    sweep_m(2, config.max_m, |m| {
        let mut t = Tally::default();
        let limit = BigRational::one() - rat(1, u64::from(m.get()));
        for p in grid {
            let g = tail_at_or_below_mean(&BinomialParams::new(m, p.clone()))
                .value
                .into_inner();
            let f = tail_above(m, &p.complement()).value;
            t.check(g == f, || {
                Witness::new()
                    .label("check", "G(m,p) = F(m,1-p)")
                    .int("m", m.get())
                    .rational("p", p.value())
            });
            if p.value() < &limit {
                t.observe(Margin::Exact(g - &quarter), || {
                    Witness::new().int("m", m.get()).rational("p", p.value())
                });
            }
        }
        Ok(t)
    })
}

/// Evaluates one claim over the configured range.
pub fn run_claim(claim: ClaimId, config: &SweepConfig) -> Result<CertificateReport> {
    config.validate()?;
    let start = Instant::now();
    let needs_grid = matches!(
        claim,
        ClaimId::Cor1Reduction | ClaimId::TheoremMain | ClaimId::Cor3Symmetry
    );
    let grid = if needs_grid {
        rational_grid(config.p_denominator_limit)
    } else {
        Vec::new()
    };

    let tally = match claim {
        ClaimId::Lemma1Monotone => lemma1_monotone(config)?,
        ClaimId::Lemma1GridLb => lemma1_grid_lb(config)?,
        ClaimId::Cor1Reduction => cor1_reduction(config, &grid)?,
        ClaimId::Lemma2Domination => lemma2_domination(config)?,
        ClaimId::Lemma2Ratio => lemma2_ratio()?,
        ClaimId::Lemma3Endpoint => lemma3_endpoint(config)?,
        ClaimId::Cor2Constant => cor2_constant(config)?,
        ClaimId::Lemma4Rho => lemma4_rho(config)?,
        ClaimId::CampPaulsonErr => camp_paulson_err(config)?,
        ClaimId::TheoremMain => theorem_main(config, &grid)?,
        ClaimId::Cor3Symmetry => cor3_symmetry(config, &grid)?,
    };

    let strict = claim.is_strict();
    let margin_ok = match &tally.worst {
        None => true,
        Some((m, _)) if strict => m.is_positive(),
        Some((m, _)) => m.is_nonnegative(),
    };
    let (worst_margin, worst_witness) = match tally.worst {
        Some((m, w)) => (Some(m), Some(w)),
        None => (None, None),
    };
    Ok(CertificateReport {
        claim,
        config: *config,
        strict,
        pass: margin_ok && tally.failure_count == 0,
        worst_margin,
        worst_witness,
        checked_count: tally.checked,
        failure_count: tally.failure_count,
        failures: tally.failures,
        flagged_count: tally.flagged_count,
        flagged: tally.flagged,
        elapsed: start.elapsed(),
    })
}

/// One report per claim, in [`ClaimId::ALL`] order.
pub fn run_all(config: &SweepConfig) -> Result<Vec<CertificateReport>> {
    ClaimId::ALL.iter().map(|&c| run_claim(c, config)).collect()
}
