//! Exact binomial probabilities over arbitrary-precision rationals.
//!
//! With `p = a/b` in lowest terms and `c = b - a`, every pmf term of `B(m, p)`
//! is `C(m, j) a^j c^(m-j) / b^m`. Sums are accumulated as big integers over
//! the common denominator `b^m` and reduced once at the end, so no value in
//! this module is ever rounded.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::{Error, Result};

/// Largest decimal exponent accepted by [`parse_rational`].
const MAX_DECIMAL_EXPONENT: u32 = 4096;

/// Number of Bernoulli trials, `m >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TrialCount(u32);

impl TrialCount {
    pub fn new(m: u32) -> Result<Self> {
        if m == 0 {
            return Err(Error::domain(
                "number of trials must satisfy m >= 1, got m = 0",
            ));
        }
        Ok(TrialCount(m))
    }

    #[inline]
    pub fn get(self) -> u32 {
        self.0
    }
}

impl TryFrom<i64> for TrialCount {
    type Error = Error;

    fn try_from(m: i64) -> Result<Self> {
        if m < 1 {
            return Err(Error::domain(format!(
                "number of trials must satisfy m >= 1, got m = {m}"
            )));
        }
        let m = u32::try_from(m)
            .map_err(|_| Error::domain(format!("number of trials m = {m} is too large")))?;
        TrialCount::new(m)
    }
}

impl fmt::Display for TrialCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A probability held as an exact rational in `[0, 1]`, always in lowest terms.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExactProbability(BigRational);

impl ExactProbability {
    pub fn new(value: BigRational) -> Result<Self> {
        if value.is_negative() || value > BigRational::one() {
            return Err(Error::domain(format!(
                "probability must lie in [0, 1], got {}",
                crate::format::rational(&value)
            )));
        }
        Ok(ExactProbability(value))
    }

    /// Builds `numer / denom`, reducing it.
    pub fn from_fraction(numer: u64, denom: u64) -> Result<Self> {
        if denom == 0 {
            return Err(Error::domain("probability denominator must be non-zero"));
        }
        Self::new(BigRational::new(numer.into(), denom.into()))
    }

    pub(crate) fn from_unchecked(value: BigRational) -> Self {
        debug_assert!(!value.is_negative() && value <= BigRational::one());
        ExactProbability(value)
    }

    pub fn zero() -> Self {
        ExactProbability(BigRational::zero())
    }

    pub fn one() -> Self {
        ExactProbability(BigRational::one())
    }

    #[inline]
    pub fn value(&self) -> &BigRational {
        &self.0
    }

    pub fn into_inner(self) -> BigRational {
        self.0
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    /// `1 - p`.
    pub fn complement(&self) -> Self {
        ExactProbability(BigRational::one() - &self.0)
    }

    /// Nearest double. Exact values far below `f64::MIN_POSITIVE` flush to zero.
    pub fn to_f64(&self) -> f64 {
        rational_to_f64(&self.0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }
}

impl fmt::Display for ExactProbability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::format::rational(&self.0))
    }
}

impl FromStr for ExactProbability {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ExactProbability::new(parse_rational(s)?)
    }
}

/// Converts a rational to the nearest `f64`.
pub fn rational_to_f64(q: &BigRational) -> f64 {
    if let Some(x) = q.to_f64() {
        return x;
    }
    // Ratios whose parts overflow f64 but whose quotient does not.
    let shift = q.numer().bits() as i64 - q.denom().bits() as i64;
    let scaled = if shift > 60 {
        BigRational::new(q.numer().clone(), q.denom() << ((shift - 60) as usize))
    } else {
        BigRational::new(q.numer() << ((60 - shift) as usize), q.denom().clone())
    };
    scaled.to_f64().unwrap_or(f64::NAN) * 2f64.powi((shift - 60) as i32)
}

/// Parses `"a/b"` or a decimal such as `"0.125"`, `".5"` or `"1.5e-3"` into an
/// exact rational. Decimals are scaled by a power of ten and never pass through
/// binary floating point.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let text = s.trim();
    if text.is_empty() {
        return Err(Error::parse("empty number"));
    }
    if let Some((num, den)) = text.split_once('/') {
        let num = parse_integer(num.trim(), text)?;
        let den = parse_integer(den.trim(), text)?;
        if den.is_zero() {
            return Err(Error::parse(format!("zero denominator in `{text}`")));
        }
        return Ok(BigRational::new(num, den));
    }

    let (negative, body) = match text.as_bytes()[0] {
        b'-' => (true, &text[1..]),
        b'+' => (false, &text[1..]),
        _ => (false, text),
    };
    let (mantissa, exponent) = match body.find(['e', 'E']) {
        Some(pos) => {
            let exp: i64 = body[pos + 1..]
                .parse()
                .map_err(|_| Error::parse(format!("bad exponent in `{text}`")))?;
            (&body[..pos], exp)
        }
        None => (body, 0),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(Error::parse(format!("no digits in `{text}`")));
    }
    if !int_part
        .bytes()
        .chain(frac_part.bytes())
        .all(|c| c.is_ascii_digit())
    {
        return Err(Error::parse(format!("`{text}` is not a number")));
    }
    let digits: BigInt = format!("{int_part}{frac_part}")
        .parse()
        .map_err(|_| Error::parse(format!("`{text}` is not a number")))?;
    let scale = exponent - frac_part.len() as i64;
    if scale.unsigned_abs() > u64::from(MAX_DECIMAL_EXPONENT) {
        return Err(Error::parse(format!("exponent out of range in `{text}`")));
    }
    let ten_pow = BigInt::from(10u32).pow(scale.unsigned_abs() as u32);
    let mut value = if scale >= 0 {
        BigRational::from_integer(digits * ten_pow)
    } else {
        BigRational::new(digits, ten_pow)
    };
    if negative {
        value = -value;
    }
    Ok(value)
}

fn parse_integer(part: &str, whole: &str) -> Result<BigInt> {
    let unsigned = part.strip_prefix(['+', '-']).unwrap_or(part);
    if unsigned.is_empty() || !unsigned.bytes().all(|c| c.is_ascii_digit()) {
        return Err(Error::parse(format!("`{whole}` is not a fraction a/b")));
    }
    part.parse()
        .map_err(|_| Error::parse(format!("`{whole}` is not a fraction a/b")))
}

/// The pair `(m, p)` defining `B(m, p)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BinomialParams {
    m: TrialCount,
    p: ExactProbability,
}

impl BinomialParams {
    pub fn new(m: TrialCount, p: ExactProbability) -> Self {
        BinomialParams { m, p }
    }

    pub fn trials(&self) -> TrialCount {
        self.m
    }

    pub fn probability(&self) -> &ExactProbability {
        &self.p
    }

    /// `m p`.
    pub fn mean(&self) -> BigRational {
        self.p.value() * BigInt::from(self.m.get())
    }

    /// `m p (1 - p)`.
    pub fn variance(&self) -> BigRational {
        self.mean() * self.p.complement().into_inner()
    }

    /// `ceil(m p)`, computed on integers.
    pub fn mean_ceil(&self) -> u32 {
        let (num, den) = self.mean_parts();
        let q = Integer::div_ceil(&num, &den);
        q.to_u32().expect("ceil(mp) lies in [0, m]")
    }

    /// `floor(m p)`, computed on integers.
    pub fn mean_floor(&self) -> u32 {
        let (num, den) = self.mean_parts();
        (num / den).to_u32().expect("floor(mp) lies in [0, m]")
    }

    fn mean_parts(&self) -> (BigUint, BigUint) {
        let num = self.p.numer().magnitude() * self.m.get();
        (num, self.p.denom().magnitude().clone())
    }
}

/// A mean-threshold tail together with the summation bound it used.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TailValue {
    pub value: ExactProbability,
    /// `ceil(mp)` for the upper tail, `floor(mp)` for the lower one.
    pub threshold_index: u32,
}

/// `C(m, k)` by the multiplicative recurrence `C(m, j+1) = C(m, j) (m-j) / (j+1)`.
pub fn binomial_coefficient(m: u32, k: u32) -> BigUint {
    if k > m {
        return BigUint::zero();
    }
    let k = k.min(m - k);
    let mut c = BigUint::one();
    for j in 0..k {
        c *= m - j;
        c /= j + 1;
    }
    c
}

/// `sum_{j=lo}^{hi} C(m,j) p^j (1-p)^(m-j)` for `lo <= hi <= m`; zero when `lo > hi`.
fn term_sum(m: u32, p: &ExactProbability, lo: u32, hi: u32) -> ExactProbability {
    if lo > hi {
        return ExactProbability::zero();
    }
    debug_assert!(hi <= m);
    let a = p.numer().magnitude();
    let b = p.denom().magnitude();
    let c = b - a;

    // c_pows[i] = c^(m - hi + i), so term j uses index hi - j.
    let span = (hi - lo) as usize;
    let mut c_pows = Vec::with_capacity(span + 1);
    c_pows.push(c.pow(m - hi));
    for i in 0..span {
        let next = &c_pows[i] * &c;
        c_pows.push(next);
    }

    let mut coeff = binomial_coefficient(m, lo);
    let mut a_pow = a.pow(lo);
    let mut sum = BigUint::zero();
    for j in lo..=hi {
        sum += &coeff * &a_pow * &c_pows[(hi - j) as usize];
        if j < hi {
            coeff *= m - j;
            coeff /= j + 1;
            a_pow *= a;
        }
    }
    ExactProbability::from_unchecked(BigRational::new(BigInt::from(sum), BigInt::from(b.pow(m))))
}

fn check_index(k: i64, m: u32, upper: u32, upper_name: &str) -> Result<u32> {
    if k < 0 {
        return Err(Error::domain(format!("k = {k} violates k >= 0")));
    }
    if k > i64::from(upper) {
        return Err(Error::domain(format!(
            "k = {k} violates k <= {upper_name} = {upper} (m = {m})"
        )));
    }
    Ok(k as u32)
}

fn check_grid_index(m: TrialCount, k: i64) -> Result<u32> {
    let m = m.get();
    if k < 1 || k > i64::from(m) - 1 {
        return Err(Error::domain(format!(
            "grid index k = {k} violates 1 <= k <= m - 1 (m = {m})"
        )));
    }
    Ok(k as u32)
}

/// `P[X = k]`.
pub fn pmf(params: &BinomialParams, k: i64) -> Result<ExactProbability> {
    let m = params.m.get();
    let k = check_index(k, m, m, "m")?;
    Ok(term_sum(m, &params.p, k, k))
}

/// `P[X <= k]`.
pub fn cdf(params: &BinomialParams, k: i64) -> Result<ExactProbability> {
    let m = params.m.get();
    let k = check_index(k, m, m, "m")?;
    Ok(term_sum(m, &params.p, 0, k))
}

/// `P[X >= k]`; `k = m + 1` is allowed and gives zero.
pub fn upper_tail(params: &BinomialParams, k: i64) -> Result<ExactProbability> {
    let m = params.m.get();
    let k = check_index(k, m, m + 1, "m + 1")?;
    if k > m {
        return Ok(ExactProbability::zero());
    }
    Ok(term_sum(m, &params.p, k, m))
}

/// `F(m, p) = P[X >= mp]`, summed from `ceil(mp)`.
pub fn tail_at_or_above_mean(params: &BinomialParams) -> TailValue {
    let t = params.mean_ceil();
    TailValue {
        value: term_sum(params.m.get(), &params.p, t, params.m.get()),
        threshold_index: t,
    }
}

/// `G(m, p) = P[X <= mp]`, summed up to `floor(mp)`.
pub fn tail_at_or_below_mean(params: &BinomialParams) -> TailValue {
    let t = params.mean_floor();
    TailValue {
        value: term_sum(params.m.get(), &params.p, 0, t),
        threshold_index: t,
    }
}

/// `[P[X <= 0], P[X <= 1], ..., P[X <= m]]`, sharing one pass over the terms.
pub fn cdf_row(params: &BinomialParams) -> Vec<ExactProbability> {
    let m = params.m.get();
    let a = params.p.numer().magnitude();
    let b = params.p.denom().magnitude();
    let c = b - a;
    let denom = BigInt::from(b.pow(m));

    let mut c_pows = Vec::with_capacity(m as usize + 1);
    c_pows.push(BigUint::one());
    for i in 0..m as usize {
        let next = &c_pows[i] * &c;
        c_pows.push(next);
    }
    let mut coeff = BigUint::one();
    let mut a_pow = BigUint::one();
    let mut running = BigUint::zero();
    let mut row = Vec::with_capacity(m as usize + 1);
    for j in 0..=m {
        running += &coeff * &a_pow * &c_pows[(m - j) as usize];
        row.push(ExactProbability::from_unchecked(BigRational::new(
            BigInt::from(running.clone()),
            denom.clone(),
        )));
        if j < m {
            coeff *= m - j;
            coeff /= j + 1;
            a_pow *= a;
        }
    }
    row
}

fn grid_probability(m: TrialCount, k: u32) -> ExactProbability {
    ExactProbability::from_unchecked(BigRational::new(k.into(), m.get().into()))
}

/// `P[X >= k + 1]` under `B(m, k/m)`, for `1 <= k <= m - 1`.
pub fn grid_upper_tail(m: TrialCount, k: i64) -> Result<ExactProbability> {
    let k = check_grid_index(m, k)?;
    Ok(term_sum(m.get(), &grid_probability(m, k), k + 1, m.get()))
}

/// `P[X <= k]` under `B(m, k/m)`, for `1 <= k <= m - 1`.
pub fn grid_cdf(m: TrialCount, k: i64) -> Result<ExactProbability> {
    let k = check_grid_index(m, k)?;
    Ok(term_sum(m.get(), &grid_probability(m, k), 0, k))
}

/// All reduced fractions `a/b` in `[0, 1]` with `b <= max_denominator`, ascending.
pub fn rational_grid(max_denominator: u32) -> Vec<ExactProbability> {
    let mut pairs: Vec<(u64, u64)> = Vec::new();
    for b in 1..=u64::from(max_denominator) {
        for a in 0..=b {
            if a.gcd(&b) == 1 {
                pairs.push((a, b));
            }
        }
    }
    pairs.sort_by(|x, y| (x.0 * y.1).cmp(&(y.0 * x.1)));
    pairs
        .into_iter()
        .map(|(a, b)| ExactProbability::from_unchecked(BigRational::new(a.into(), b.into())))
        .collect()
}

/// Exact comparison of a rational with a double (every finite double is rational).
pub fn cmp_rational_f64(q: &BigRational, x: f64) -> Ordering {
    match BigRational::from_float(x) {
        Some(r) => q.cmp(&r),
        None if x > 0.0 => Ordering::Less,
        None => Ordering::Greater,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    fn params(m: u32, a: u64, b: u64) -> BinomialParams {
        BinomialParams::new(
            TrialCount::new(m).unwrap(),
            ExactProbability::from_fraction(a, b).unwrap(),
        )
    }

    fn tc(m: u32) -> TrialCount {
        TrialCount::new(m).unwrap()
    }

    #[test]
    fn pmf_examples() {
        assert_eq!(pmf(&params(2, 1, 2), 1).unwrap().value(), &q(1, 2));
        assert_eq!(pmf(&params(3, 1, 3), 0).unwrap().value(), &q(8, 27));
        assert_eq!(pmf(&params(5, 0, 1), 0).unwrap().value(), &q(1, 1));
        assert!(pmf(&params(5, 0, 1), 3).unwrap().is_zero());
        assert!(pmf(&params(4, 1, 1), 4).unwrap().is_one());
    }

    #[test]
    fn pmf_rejects_out_of_range() {
        let err = pmf(&params(3, 1, 2), 4).unwrap_err();
        assert!(matches!(&err, Error::Domain(msg) if msg.contains("k <= m")));
        let err = pmf(&params(3, 1, 2), -1).unwrap_err();
        assert!(matches!(&err, Error::Domain(msg) if msg.contains("k >= 0")));
    }

    #[test]
    fn cdf_examples() {
        assert_eq!(cdf(&params(2, 1, 2), 1).unwrap().value(), &q(3, 4));
        assert!(cdf(&params(4, 1, 1), 3).unwrap().is_zero());
        assert!(cdf(&params(2, 1, 2), 2).unwrap().is_one());
        assert!(cdf(&params(2, 1, 2), 3).is_err());
    }

    #[test]
    fn upper_tail_examples() {
        assert_eq!(upper_tail(&params(3, 1, 2), 2).unwrap().value(), &q(1, 2));
        assert_eq!(upper_tail(&params(2, 3, 5), 2).unwrap().value(), &q(9, 25));
        assert!(upper_tail(&params(4, 1, 4), 0).unwrap().is_one());
        assert!(upper_tail(&params(4, 1, 4), 5).unwrap().is_zero());
        assert!(upper_tail(&params(4, 1, 4), 6).is_err());
        assert!(upper_tail(&params(4, 1, 4), -1).is_err());
    }

    #[test]
    fn mean_tails() {
        let f = tail_at_or_above_mean(&params(2, 3, 5));
        assert_eq!(f.value.value(), &q(9, 25));
        assert_eq!(f.threshold_index, 2);

        let f = tail_at_or_above_mean(&params(3, 1, 2));
        assert_eq!(f.value.value(), &q(1, 2));
        assert_eq!(f.threshold_index, 2);

        // mp = 2 exactly: the threshold is inclusive.
        let p = params(5, 2, 5);
        let f = tail_at_or_above_mean(&p);
        assert_eq!(f.threshold_index, 2);
        assert_eq!(f.value, upper_tail(&p, 2).unwrap());

        let g = tail_at_or_below_mean(&params(3, 1, 2));
        assert_eq!(g.value.value(), &q(1, 2));
        assert_eq!(g.threshold_index, 1);

        let g = tail_at_or_below_mean(&params(2, 2, 5));
        assert_eq!(g.value.value(), &q(9, 25));
        assert_eq!(g.threshold_index, 0);

        let g = tail_at_or_below_mean(&params(4, 1, 1));
        assert!(g.value.is_one());
        assert_eq!(g.threshold_index, 4);
    }

    #[test]
    fn grid_examples() {
        assert_eq!(grid_upper_tail(tc(2), 1).unwrap().value(), &q(1, 4));
        assert_eq!(grid_upper_tail(tc(3), 1).unwrap().value(), &q(7, 27));
        assert_eq!(grid_upper_tail(tc(4), 3).unwrap().value(), &q(81, 256));
        assert_eq!(grid_cdf(tc(2), 1).unwrap().value(), &q(3, 4));
        assert_eq!(grid_cdf(tc(3), 1).unwrap().value(), &q(20, 27));
        assert_eq!(grid_cdf(tc(4), 2).unwrap().value(), &q(11, 16));
    }

    #[test]
    fn grid_rejects_endpoints() {
        for k in [0, 4, 5, -2] {
            assert!(grid_cdf(tc(4), k).is_err());
            assert!(grid_upper_tail(tc(4), k).is_err());
        }
        assert!(grid_cdf(tc(1), 0).is_err());
        assert!(grid_cdf(tc(1), 1).is_err());
    }

    #[test]
    fn cdf_row_matches_pointwise_cdf() {
        let p = params(9, 2, 7);
        let row = cdf_row(&p);
        assert_eq!(row.len(), 10);
        for (k, v) in row.iter().enumerate() {
            assert_eq!(v, &cdf(&p, k as i64).unwrap());
        }
        assert!(row[9].is_one());
    }

    #[test]
    fn binomial_coefficients() {
        assert_eq!(binomial_coefficient(5, 2), BigUint::from(10u32));
        assert_eq!(binomial_coefficient(5, 6), BigUint::zero());
        assert_eq!(binomial_coefficient(0, 0), BigUint::one());
        let c = binomial_coefficient(300, 150);
        assert_eq!(c.bits(), 296);
        assert_eq!(
            binomial_coefficient(300, 150),
            binomial_coefficient(300, 150)
        );
    }

    #[test]
    fn trial_count_validation() {
        assert!(TrialCount::new(0).is_err());
        assert!(TrialCount::try_from(-3).is_err());
        assert_eq!(TrialCount::try_from(7).unwrap().get(), 7);
    }

    #[test]
    fn parse_fractions_and_decimals() {
        assert_eq!(parse_rational("3/5").unwrap(), q(3, 5));
        assert_eq!(parse_rational(" 6/10 ").unwrap(), q(3, 5));
        assert_eq!(parse_rational("0.6").unwrap(), q(3, 5));
        assert_eq!(parse_rational(".125").unwrap(), q(1, 8));
        assert_eq!(parse_rational("1").unwrap(), q(1, 1));
        assert_eq!(parse_rational("5e-1").unwrap(), q(1, 2));
        assert_eq!(parse_rational("1.5E-3").unwrap(), q(3, 2000));
        assert_eq!(parse_rational("-0.25").unwrap(), q(-1, 4));
        // 0.1 is not the double nearest 1/10.
        assert_eq!(parse_rational("0.1").unwrap(), q(1, 10));
        for bad in [
            "", "abc", "1/0", "1/", "/2", "0.5.5", "1e", "e3", "1/2/3", ".",
        ] {
            assert!(matches!(parse_rational(bad), Err(Error::Parse(_))), "{bad}");
        }
    }

    #[test]
    fn probability_range_is_enforced() {
        assert!(matches!(
            "3/2".parse::<ExactProbability>(),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            "-0.1".parse::<ExactProbability>(),
            Err(Error::Domain(_))
        ));
        assert!(ExactProbability::from_fraction(1, 0).is_err());
        let p: ExactProbability = "0.75".parse().unwrap();
        assert_eq!(p.to_string(), "3/4");
        assert_eq!(p.complement().value(), &q(1, 4));
    }

    #[test]
    fn mean_and_variance() {
        let p = params(10, 3, 10);
        assert_eq!(p.mean(), q(3, 1));
        assert_eq!(p.variance(), q(21, 10));
        assert_eq!(p.mean_ceil(), 3);
        assert_eq!(p.mean_floor(), 3);
        let p = params(7, 1, 3);
        assert_eq!(p.mean_ceil(), 3);
        assert_eq!(p.mean_floor(), 2);
    }

    #[test]
    fn rational_grid_is_sorted_and_reduced() {
        let grid = rational_grid(5);
        // Farey sequence F_5 has 11 terms.
        assert_eq!(grid.len(), 11);
        assert!(grid.windows(2).all(|w| w[0] < w[1]));
        assert!(grid[0].is_zero() && grid[10].is_one());
    }

    #[test]
    fn f64_conversion_handles_huge_parts() {
        let m = TrialCount::new(2000).unwrap();
        let v = grid_cdf(m, 1).unwrap();
        assert!(v.numer().bits() > 2000);
        let x = v.to_f64();
        assert!((x - 2.0 / std::f64::consts::E).abs() < 1e-3, "{x}");
    }

    #[test]
    fn rational_float_comparison() {
        assert_eq!(cmp_rational_f64(&q(1, 10), 0.1), Ordering::Less);
        assert_eq!(cmp_rational_f64(&q(1, 4), 0.25), Ordering::Equal);
        assert_eq!(cmp_rational_f64(&q(1, 4), f64::INFINITY), Ordering::Less);
    }
}
