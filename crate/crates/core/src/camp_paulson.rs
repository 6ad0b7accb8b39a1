//! Standard normal CDF and the Camp-Paulson approximation to the binomial CDF.
//!
//! The approximation applies a cube-root transform to the ratio
//! `r = (j+1)(1-p) / (p(m-j))` and reads the result off the standard normal:
//!
//! ```text
//! P[X <= j] ~ Phi((c - mu) / sigma)
//! a = 1/(9(m-j)),  b = 1/(9(j+1)),
//! c = (1-b) r^(1/3),  mu = 1 - a,  sigma = sqrt(b r^(2/3) + a)
//! ```
//!
//! with absolute error at most `0.007 / sqrt(m p (1-p))`.
//!
//! All arithmetic here is in `f64`. Exact inputs are converted once, on entry,
//! by [`ExactProbability::to_f64`] (correctly rounded).

use std::f64::consts::FRAC_1_SQRT_2;

use crate::exact::{ExactProbability, TrialCount};
use crate::{Error, Result};

/// Numerator of the absolute error envelope.
pub const ERROR_CONSTANT: f64 = 0.007;

/// `Phi(x)`, the standard normal CDF.
///
/// Evaluated as `erfc(-x / sqrt 2) / 2` with the fdlibm `erfc` (via `libm`),
/// which is accurate to under one ulp; the absolute error of `Phi` is below
/// `1e-15` on the whole line. Tails keep full relative accuracy because
/// `erfc` is never formed as `1 - erf`.
pub fn std_normal_cdf(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::domain(format!(
            "normal CDF needs a finite argument, got {x}"
        )));
    }
    Ok(0.5 * libm::erfc(-x * FRAC_1_SQRT_2))
}

/// The six intermediate quantities of the approximation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CampPaulsonTerms {
    pub a: f64,
    pub b: f64,
    pub r: f64,
    pub c: f64,
    pub mu: f64,
    pub sigma: f64,
}

impl CampPaulsonTerms {
    /// The normal quantile `(c - mu) / sigma`.
    pub fn z(&self) -> f64 {
        (self.c - self.mu) / self.sigma
    }
}

/// Approximate CDF value with its certified absolute error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ApproxCdfResult {
    pub estimate: f64,
    pub error_bound: f64,
}

impl ApproxCdfResult {
    pub fn lower(&self) -> f64 {
        self.estimate - self.error_bound
    }

    pub fn upper(&self) -> f64 {
        self.estimate + self.error_bound
    }
}

/// How [`camp_paulson_cdf_with`] treats `j = m`, where `a` is undefined.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FullSupport {
    /// Report a domain error.
    #[default]
    Reject,
    /// Return the exact value 1 with a zero error bound.
    ExactOne,
}

fn interior_probability(p: &ExactProbability) -> Result<()> {
    if p.is_zero() || p.is_one() {
        return Err(Error::domain(format!(
            "Camp-Paulson approximation needs 0 < p < 1, got p = {p}"
        )));
    }
    Ok(())
}

pub fn camp_paulson_terms(m: TrialCount, p: &ExactProbability, j: i64) -> Result<CampPaulsonTerms> {
    interior_probability(p)?;
    let mi = i64::from(m.get());
    if j == mi {
        return Err(Error::domain(
            "j = m: a diverges; CDF is exactly 1".to_string(),
        ));
    }
    if j < 0 || j > mi {
        return Err(Error::domain(format!(
            "j = {j} violates 0 <= j <= m - 1 (m = {mi})"
        )));
    }
    let pf = p.to_f64();
    let qf = p.complement().to_f64();
    let mf = mi as f64;
    let jf = j as f64;

    let a = 1.0 / (9.0 * (mf - jf));
    let b = 1.0 / (9.0 * (jf + 1.0));
    let r = (jf + 1.0) * qf / (pf * (mf - jf));
    let cbrt_r = r.cbrt();
    Ok(CampPaulsonTerms {
        a,
        b,
        r,
        c: (1.0 - b) * cbrt_r,
        mu: 1.0 - a,
        sigma: (b * cbrt_r * cbrt_r + a).sqrt(),
    })
}

/// `0.007 / sqrt(m p (1-p))`.
pub fn camp_paulson_error_bound(m: TrialCount, p: &ExactProbability) -> Result<f64> {
    interior_probability(p)?;
    let variance = f64::from(m.get()) * p.to_f64() * p.complement().to_f64();
    Ok(ERROR_CONSTANT / variance.sqrt())
}

/// Camp-Paulson estimate of `P[X <= j]`; `j = m` is a domain error.
pub fn camp_paulson_cdf(m: TrialCount, p: &ExactProbability, j: i64) -> Result<ApproxCdfResult> {
    camp_paulson_cdf_with(m, p, j, FullSupport::Reject)
}

pub fn camp_paulson_cdf_with(
    m: TrialCount,
    p: &ExactProbability,
    j: i64,
    full_support: FullSupport,
) -> Result<ApproxCdfResult> {
    if j == i64::from(m.get()) && full_support == FullSupport::ExactOne {
        interior_probability(p)?;
        return Ok(ApproxCdfResult {
            estimate: 1.0,
            error_bound: 0.0,
        });
    }
    let terms = camp_paulson_terms(m, p, j)?;
    let estimate = std_normal_cdf(terms.z())?.clamp(0.0, 1.0);
    Ok(ApproxCdfResult {
        estimate,
        error_bound: camp_paulson_error_bound(m, p)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    fn tc(m: u32) -> TrialCount {
        TrialCount::new(m).unwrap()
    }

    fn pr(a: u64, b: u64) -> ExactProbability {
        ExactProbability::from_fraction(a, b).unwrap()
    }

    #[test]
    fn normal_cdf_examples() {
        assert_eq!(std_normal_cdf(0.0).unwrap(), 0.5);
        assert!(std_normal_cdf(0.53968).unwrap() < 0.7053);
        let far = std_normal_cdf(-10.0).unwrap();
        assert!(far > 0.0 && far < 1e-22, "{far}");
        assert!(std_normal_cdf(f64::NAN).is_err());
        assert!(std_normal_cdf(f64::INFINITY).is_err());
    }

    #[test]
    fn terms_examples() {
        let t = camp_paulson_terms(tc(2), &pr(1, 2), 1).unwrap();
        assert!(close(t.b, 1.0 / 18.0, 1e-15));
        assert!(close(t.a, 1.0 / 9.0, 1e-15));
        assert!(close(t.r, 2.0, 1e-15));
        assert!(close(t.mu, 1.0 - t.a, 0.0));
        assert!(close(t.c, (1.0 - t.b) * 2f64.cbrt(), 1e-15));
        assert!(close(
            t.sigma,
            (t.b * 2f64.cbrt().powi(2) + t.a).sqrt(),
            1e-15
        ));

        let t = camp_paulson_terms(tc(3), &pr(1, 3), 1).unwrap();
        assert!(close(t.r, 2.0, 1e-15));

        let t = camp_paulson_terms(tc(2), &pr(1, 2), 0).unwrap();
        assert!(close(t.b, 1.0 / 9.0, 1e-15));
        assert!(close(t.a, 1.0 / 18.0, 1e-15));
    }

    #[test]
    fn terms_domain_errors() {
        let err = camp_paulson_terms(tc(4), &pr(1, 2), 4).unwrap_err();
        assert!(err.to_string().contains("a diverges"));
        assert!(camp_paulson_terms(tc(4), &pr(1, 2), 5).is_err());
        assert!(camp_paulson_terms(tc(4), &pr(1, 2), -1).is_err());
        assert!(camp_paulson_terms(tc(4), &pr(0, 1), 1).is_err());
        assert!(camp_paulson_terms(tc(4), &pr(1, 1), 1).is_err());
        assert!(camp_paulson_error_bound(tc(4), &pr(1, 1)).is_err());
    }

    #[test]
    fn error_bound_examples() {
        let e = camp_paulson_error_bound(tc(2), &pr(1, 2)).unwrap();
        assert!(close(e, 0.007 / 0.5f64.sqrt(), 1e-17));
        assert!(e <= 0.0099);
        let e = camp_paulson_error_bound(tc(100), &pr(1, 2)).unwrap();
        assert!(close(e, 0.0014, 1e-15));
        for m in [2u32, 3, 7, 40] {
            let e = camp_paulson_error_bound(tc(m), &pr(1, u64::from(m))).unwrap();
            let expected = 0.007 / (1.0 - 1.0 / f64::from(m)).sqrt();
            assert!(close(e, expected, 1e-15), "m = {m}");
        }
    }

    #[test]
    fn full_support_option() {
        let p = pr(1, 3);
        assert!(camp_paulson_cdf(tc(3), &p, 3).is_err());
        let r = camp_paulson_cdf_with(tc(3), &p, 3, FullSupport::ExactOne).unwrap();
        assert_eq!(
            r,
            ApproxCdfResult {
                estimate: 1.0,
                error_bound: 0.0
            }
        );
    }

    #[test]
    fn estimate_is_within_envelope_of_three_quarters() {
        let r = camp_paulson_cdf(tc(2), &pr(1, 2), 1).unwrap();
        assert!((r.estimate - 0.75).abs() <= r.error_bound);
        assert!(r.lower() <= 0.75 && 0.75 <= r.upper());
    }
}
