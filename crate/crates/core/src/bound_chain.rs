//! Constants and intermediate bounds of the argument for `P[X >= mp] > 1/4`.
//!
//! The argument runs:
//!
//! 1. On each interval `(k/m, (k+1)/m]` the tail `F(m, p)` is increasing in `p`,
//!    so it suffices to bound the grid CDFs `P[X <= k]` under `B(m, k/m)`
//!    by `3/4`.
//! 2. For `k >= 2` the Camp-Paulson approximation, after replacing `alpha_k` by
//!    `theta * beta_k` and `gamma_{m,k}` by 1, bounds every grid CDF by `0.7152`.
//! 3. For `k = 1` the grid CDF is `rho(m)`, which decreases from `rho(2) = 3/4`.
//!
//! Each step is exposed here so that it can be evaluated and checked on its own.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::camp_paulson::{std_normal_cdf, ERROR_CONSTANT};
use crate::exact::{
    tail_at_or_above_mean, tail_at_or_below_mean, BinomialParams, ExactProbability, TrialCount,
};
use crate::margin::{Margin, MarginResult, Witness};
use crate::{Error, Result};

/// Upper bound on the grid CDFs for `k >= 2`.
pub const COROLLARY2_BOUND: f64 = 0.7152;
/// Cap on the normal part of the `k >= 2` bound.
pub const COROLLARY2_PHI_CAP: f64 = 0.7053;
/// Cap on `0.007 / sqrt(1 - 1/m)` for `m >= 2`.
pub const COROLLARY2_ERROR_CAP: f64 = 0.0099;
/// Cap on `g(beta_2)`.
pub const G_BETA2_CAP: f64 = 0.53968;

/// `0.7152` as the exact rational `447/625`.
pub fn corollary2_bound() -> BigRational {
    BigRational::new(447.into(), 625.into())
}

/// `theta = 17 / (3 * 2^(1/3)) - 3 * 2^(1/3)`, about `0.7178732`.
pub fn theta() -> f64 {
    let c = 2f64.cbrt();
    17.0 / (3.0 * c) - 3.0 * c
}

fn check_k(k: i64) -> Result<f64> {
    if k < 1 {
        return Err(Error::domain(format!("k = {k} violates k >= 1")));
    }
    Ok(k as f64)
}

/// `lambda - 1` with `lambda = (1 + 1/k)^(1/3)`, without cancellation for large `k`.
fn lambda_minus_one(k: f64) -> f64 {
    ((1.0 / k).ln_1p() / 3.0).exp_m1()
}

/// `beta_k = (1 + 1/k)^(2/3) / (1 + k)`.
pub fn beta(k: i64) -> Result<f64> {
    let k = check_k(k)?;
    let lambda = 1.0 + lambda_minus_one(k);
    Ok(lambda * lambda / (1.0 + k))
}

/// `gamma_{m,k} = 1 / (m - k)` for `1 <= k <= m - 1`.
pub fn gamma(m: TrialCount, k: i64) -> Result<f64> {
    let mi = i64::from(m.get());
    if k < 1 || k > mi - 1 {
        return Err(Error::domain(format!(
            "k = {k} violates 1 <= k <= m - 1 (m = {mi})"
        )));
    }
    Ok(1.0 / (mi - k) as f64)
}

/// `alpha_k = (1 + 1/k)^(1/3) (3 - 1/(3(1+k))) - 3`.
pub fn alpha(k: i64) -> Result<f64> {
    let k = check_k(k)?;
    let s = 1.0 / (3.0 * (1.0 + k));
    // lambda (3 - s) - 3 rearranged as (lambda - 1)(3 - s) - s.
    Ok(lambda_minus_one(k) * (3.0 - s) - s)
}

/// The constants entering the bound at grid point `(m, k)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundConstants {
    pub theta: f64,
    pub beta_k: f64,
    pub gamma_mk: f64,
    pub alpha_k: f64,
}

impl BoundConstants {
    pub fn new(m: TrialCount, k: i64) -> Result<Self> {
        Ok(BoundConstants {
            theta: theta(),
            beta_k: beta(k)?,
            gamma_mk: gamma(m, k)?,
            alpha_k: alpha(k)?,
        })
    }
}

/// `alpha_k / beta_k`, bounded above by `theta` with equality at `k = 1`.
pub fn ratio_alpha_beta(k: i64) -> Result<f64> {
    Ok(alpha(k)? / beta(k)?)
}

/// The same ratio written in `lambda = (1 + 1/k)^(1/3)`:
/// `3 lambda / (1 + lambda + lambda^2) - 1 / (3 lambda)`.
pub fn ratio_in_lambda(lambda: f64) -> f64 {
    3.0 * lambda / (1.0 + lambda + lambda * lambda) - 1.0 / (3.0 * lambda)
}

/// `d/dlambda` of [`ratio_in_lambda`] in factored form:
/// `(9 - 8 l^4 - 30 l^3 - 30 l^2) / (3 lambda^2 (1 + lambda + lambda^2)^2)`, `l = lambda - 1`.
pub fn ratio_in_lambda_derivative(lambda: f64) -> f64 {
    let q = 1.0 + lambda + lambda * lambda;
    (9.0 - lambda_polynomial(lambda)) / (3.0 * lambda * lambda * q * q)
}

/// `8 l^4 + 30 l^3 + 30 l^2` with `l = lambda - 1`; below 9 keeps the ratio increasing.
pub fn lambda_polynomial(lambda: f64) -> f64 {
    let l = lambda - 1.0;
    l * l * (30.0 + l * (30.0 + 8.0 * l))
}

/// Normal quantile of the `k`-th grid bound before `alpha_k` is replaced:
/// `(alpha_k + gamma/3) / sqrt(beta_k + gamma)`.
pub fn grid_camp_paulson_argument(m: TrialCount, k: i64) -> Result<f64> {
    let c = BoundConstants::new(m, k)?;
    Ok((c.alpha_k + c.gamma_mk / 3.0) / (c.beta_k + c.gamma_mk).sqrt())
}

/// Camp-Paulson upper bound on `P[X <= k]` under `B(m, k/m)`:
/// `Phi(grid argument) + 0.007 / sqrt(k (1 - k/m))`.
pub fn grid_camp_paulson_bound(m: TrialCount, k: i64) -> Result<f64> {
    let arg = grid_camp_paulson_argument(m, k)?;
    let kf = k as f64;
    let spread = kf * (1.0 - kf / f64::from(m.get()));
    Ok(std_normal_cdf(arg)? + ERROR_CONSTANT / spread.sqrt())
}

/// `(beta_k theta + gamma/3) / sqrt(beta_k + gamma)`.
pub fn lemma2_argument(m: TrialCount, k: i64) -> Result<f64> {
    let c = BoundConstants::new(m, k)?;
    phi_ratio(c.beta_k, c.gamma_mk)
}

/// `0.007 / sqrt(1 - 1/m)`, the worst case over `k` of the Camp-Paulson envelope.
pub fn lemma2_error_term(m: TrialCount) -> Result<f64> {
    if m.get() < 2 {
        return Err(Error::domain(format!("m = {m} violates m >= 2")));
    }
    Ok(ERROR_CONSTANT / (1.0 - 1.0 / f64::from(m.get())).sqrt())
}

/// `Phi((beta_k theta + gamma_{m,k}/3) / sqrt(beta_k + gamma_{m,k})) + 0.007 / sqrt(1 - 1/m)`.
pub fn lemma2_bound(m: TrialCount, k: i64) -> Result<f64> {
    let arg = lemma2_argument(m, k)?;
    Ok(std_normal_cdf(arg)? + lemma2_error_term(m)?)
}

/// `phi(gamma) = (beta theta + gamma/3) / sqrt(beta + gamma)` for `gamma` in `[0, 1]`.
///
/// `phi` decreases up to `gamma = beta (3 theta - 2)` and increases after, so its
/// maximum on `[0, 1]` sits at an endpoint.
pub fn phi_ratio(beta: f64, gamma: f64) -> Result<f64> {
    if !beta.is_finite() || beta <= 0.0 {
        return Err(Error::domain(format!("beta = {beta} violates beta > 0")));
    }
    if !(0.0..=1.0).contains(&gamma) {
        return Err(Error::domain(format!(
            "gamma = {gamma} violates 0 <= gamma <= 1"
        )));
    }
    Ok((beta * theta() + gamma / 3.0) / (beta + gamma).sqrt())
}

/// The minimiser `beta (3 theta - 2)` of [`phi_ratio`] in `gamma`.
pub fn phi_ratio_turning_point(beta: f64) -> f64 {
    beta * (3.0 * theta() - 2.0)
}

/// `1 / (theta (9 theta - 6))`: while `beta <= ` this, `phi(0) <= phi(1)`.
pub fn beta_sufficiency_limit() -> f64 {
    let t = theta();
    1.0 / (t * (9.0 * t - 6.0))
}

/// `g(beta) = (beta theta + 1/3) / sqrt(beta + 1)`.
pub fn g_of_beta(beta: f64) -> Result<f64> {
    if !beta.is_finite() || beta < 0.0 {
        return Err(Error::domain(format!("beta = {beta} violates beta >= 0")));
    }
    Ok((beta * theta() + 1.0 / 3.0) / (beta + 1.0).sqrt())
}

/// `g'(beta) = (3 (beta + 2) theta - 1) / (6 (beta + 1)^(3/2))`.
pub fn g_derivative(beta: f64) -> f64 {
    (3.0 * (beta + 2.0) * theta() - 1.0) / (6.0 * (beta + 1.0).powf(1.5))
}

/// `g(beta_k)`, the normal quantile of the `gamma = 1` bound.
pub fn lemma3_argument(k: i64) -> Result<f64> {
    g_of_beta(beta(k)?)
}

/// `Phi((beta_k theta + 1/3) / sqrt(beta_k + 1))`.
pub fn lemma3_bound(k: i64) -> Result<f64> {
    std_normal_cdf(lemma3_argument(k)?)
}

/// Componentwise evidence that the `k >= 2` grid CDFs are at most `0.7152`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Corollary2Certificate {
    /// `0.7152`.
    pub bound: f64,
    /// `Phi(g(beta_k))` for this `k`.
    pub phi_part: f64,
    /// `Phi(g(beta_2))`, the largest normal part over `k >= 2`.
    pub phi_part_max: f64,
    pub phi_cap: f64,
    /// `0.007 / sqrt(1 - 1/m)` for this `m`.
    pub error_part: f64,
    pub error_cap: f64,
}

impl Corollary2Certificate {
    pub fn holds(&self) -> bool {
        self.phi_part <= self.phi_part_max
            && self.phi_part_max < self.phi_cap
            && self.error_part <= self.error_cap
            && self.phi_part + self.error_part <= self.bound
    }
}

/// The `k >= 2` bound `P[X <= k] <= 0.7152` under `B(m, k/m)` with its certificate.
///
/// `k = 1` is handled by [`rho`].
pub fn corollary2_upper(m: TrialCount, k: i64) -> Result<Corollary2Certificate> {
    if k < 2 {
        return Err(Error::domain(format!(
            "k = {k} violates k >= 2; the k = 1 grid CDF is rho(m)"
        )));
    }
    let mi = i64::from(m.get());
    if k > mi - 1 {
        return Err(Error::domain(format!(
            "k = {k} violates k <= m - 1 (m = {mi})"
        )));
    }
    Ok(Corollary2Certificate {
        bound: COROLLARY2_BOUND,
        phi_part: lemma3_bound(k)?,
        phi_part_max: lemma3_bound(2)?,
        phi_cap: COROLLARY2_PHI_CAP,
        error_part: lemma2_error_term(m)?,
        error_cap: COROLLARY2_ERROR_CAP,
    })
}

/// `rho(m) = (1 - 1/m)^m + (1 - 1/m)^(m-1) = (m-1)^(m-1) (2m-1) / m^m`, exactly.
pub fn rho(m: TrialCount) -> Result<ExactProbability> {
    let m = m.get();
    if m < 2 {
        return Err(Error::domain(format!("m = {m} violates m >= 2")));
    }
    let num = BigInt::from(m - 1).pow(m - 1) * BigInt::from(2 * m - 1);
    let den = BigInt::from(m).pow(m);
    ExactProbability::new(BigRational::new(num, den))
}

/// `rho` extended to real `m > 1`.
pub fn rho_real(m: f64) -> Result<f64> {
    if !m.is_finite() || m <= 1.0 {
        return Err(Error::domain(format!("m = {m} violates m > 1")));
    }
    Ok(((m - 1.0) * (-1.0 / m).ln_1p()).exp() * (2.0 - 1.0 / m))
}

/// `rho'(m) = (m-1)^(m-1) m^(-m) (2 + (2m-1) log(1 - 1/m))` for real `m >= 2`.
pub fn rho_prime(m: f64) -> Result<f64> {
    if !m.is_finite() || m < 2.0 {
        return Err(Error::domain(format!("m = {m} violates m >= 2")));
    }
    let scale = ((m - 1.0) * (m - 1.0).ln() - m * m.ln()).exp();
    Ok(scale * (2.0 + (2.0 * m - 1.0) * (-1.0 / m).ln_1p()))
}

/// `(2m - 1)(1/m + 1/(2m^2) + 1/(3m^3))`, the three-term lower bound on
/// `-(2m - 1) log(1 - 1/m)`, exactly.
pub fn log_series_bound(m: u32) -> Result<BigRational> {
    if m < 2 {
        return Err(Error::domain(format!("m = {m} violates m >= 2")));
    }
    let mq = BigRational::from_integer(m.into());
    let inv = mq.recip();
    let series = &inv + &inv * &inv / BigInt::from(2) + &inv * &inv * &inv / BigInt::from(3);
    Ok((mq * BigInt::from(2) - BigRational::one()) * series)
}

fn quarter() -> BigRational {
    BigRational::new(1.into(), 4.into())
}

/// `F(m, p) - 1/4` for `m >= 2`, `p > 1/m`; holds iff `F(m, p) > 1/4`.
pub fn theorem_margin(m: TrialCount, p: &ExactProbability) -> Result<MarginResult> {
    let inv_m = BigRational::new(1.into(), m.get().into());
    if m.get() < 2 || p.value() <= &inv_m {
        return Err(Error::precondition(format!(
            "the bound P[X >= E[X]] > 1/4 assumes the hypothesis p > 1/m (and m >= 2); \
             got m = {m}, p = {p}"
        )));
    }
    let f = tail_at_or_above_mean(&BinomialParams::new(m, p.clone()));
    let margin = f.value.into_inner() - quarter();
    Ok(MarginResult {
        holds: margin > BigRational::zero(),
        margin: Margin::Exact(margin),
        witness: Witness::new().int("m", m.get()).rational("p", p.value()),
    })
}

/// `G(m, p) - 1/4` for `m >= 2`, `p < 1 - 1/m`.
///
/// Holds iff `G(m, p) > 1/4` and `G(m, p) = F(m, 1 - p)` exactly.
pub fn corollary3_margin(m: TrialCount, p: &ExactProbability) -> Result<MarginResult> {
    let limit = BigRational::one() - BigRational::new(1.into(), m.get().into());
    if m.get() < 2 || p.value() >= &limit {
        return Err(Error::precondition(format!(
            "the bound P[X <= E[X]] > 1/4 assumes the hypothesis p < 1 - 1/m (and m >= 2); \
             got m = {m}, p = {p}"
        )));
    }
    let g = tail_at_or_below_mean(&BinomialParams::new(m, p.clone())).value;
    let mirrored = tail_at_or_above_mean(&BinomialParams::new(m, p.complement())).value;
    let symmetric = g == mirrored;
    let margin = g.into_inner() - quarter();
    Ok(MarginResult {
        holds: symmetric && margin > BigRational::zero(),
        margin: Margin::Exact(margin),
        witness: Witness::new().int("m", m.get()).rational("p", p.value()),
    })
}
