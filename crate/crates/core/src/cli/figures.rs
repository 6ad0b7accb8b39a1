//! Series behind the three figures: pmf panels, mean-threshold tail curves,
//! and grid CDFs against their Camp-Paulson bound.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::bound_chain::lemma2_bound;
use crate::exact::{
    grid_cdf, pmf, tail_at_or_above_mean, BinomialParams, ExactProbability, TrialCount,
};
use crate::format;
use crate::{Error, Result};

/// Panels used when none are given: symmetric, skewed, and skewed with few trials.
pub fn default_pmf_panels() -> Vec<BinomialParams> {
    [(20, 1, 2), (20, 1, 10), (5, 1, 10)]
        .into_iter()
        .map(|(m, a, b)| {
            BinomialParams::new(
                TrialCount::new(m).expect("m >= 1"),
                ExactProbability::from_fraction(a, b).expect("valid probability"),
            )
        })
        .collect()
}

pub fn default_tail_curve_trials() -> Vec<TrialCount> {
    (2..=8)
        .map(|m| TrialCount::new(m).expect("m >= 1"))
        .collect()
}

pub fn default_grid_trials() -> Vec<TrialCount> {
    [2, 22, 42, 62, 72]
        .into_iter()
        .map(|m| TrialCount::new(m).expect("m >= 1"))
        .collect()
}

/// `(k, P[X = k])` for `k = 0..=m`.
pub fn pmf_panel(params: &BinomialParams) -> Vec<(u32, ExactProbability)> {
    (0..=params.trials().get())
        .map(|k| (k, pmf(params, i64::from(k)).expect("k in range")))
        .collect()
}

pub fn pmf_panel_csv(params: &BinomialParams) -> String {
    let mut out = String::from("k,probability\n");
    for (k, v) in pmf_panel(params) {
        let _ = writeln!(out, "{k},{}", format::real(v.to_f64()));
    }
    out
}

/// File name for one panel, e.g. `pmf_m20_p1-10.csv`.
pub fn pmf_panel_file_name(params: &BinomialParams) -> String {
    let p = params.probability();
    format!("pmf_m{}_p{}-{}.csv", params.trials(), p.numer(), p.denom())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Region {
    /// `p <= 1/m`, outside the theorem's hypothesis.
    Dotted,
    /// `p > 1/m`.
    Solid,
}

impl Region {
    pub fn as_str(self) -> &'static str {
        match self {
            Region::Dotted => "dotted",
            Region::Solid => "solid",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TailCurveRow {
    pub p: ExactProbability,
    pub m: TrialCount,
    pub tail: ExactProbability,
    pub region: Region,
}

/// Offset of the optional points placed just right of each jump `k/m`.
fn jump_offset() -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(10u64.pow(9)))
}

/// `F(m, p)` for every `m` on the grid `0, step, 2 step, ... <= 1`, merged with
/// the jump points `k/m` (and `k/m + 1e-9` when `jump_points` is set).
pub fn tail_curves(
    trials: &[TrialCount],
    step: &BigRational,
    jump_points: bool,
) -> Result<Vec<TailCurveRow>> {
    if !step.is_positive() || step > &BigRational::one() {
        return Err(Error::domain(format!(
            "p-step must satisfy 0 < step <= 1, got {}",
            format::rational(step)
        )));
    }
    let mut uniform = Vec::new();
    let mut p = BigRational::zero();
    while p <= BigRational::one() {
        uniform.push(p.clone());
        p += step;
    }

    let mut rows = Vec::new();
    for &m in trials {
        let mut points = uniform.clone();
        let mi = m.get();
        for k in 0..=mi {
            let grid = BigRational::new(k.into(), mi.into());
            if jump_points && k < mi {
                points.push(&grid + jump_offset());
            }
            points.push(grid);
        }
        points.sort();
        points.dedup();

        let inv_m = BigRational::new(1.into(), mi.into());
        for p in points {
            let region = if p <= inv_m {
                Region::Dotted
            } else {
                Region::Solid
            };
            let p = ExactProbability::new(p)?;
            let tail = tail_at_or_above_mean(&BinomialParams::new(m, p.clone())).value;
            rows.push(TailCurveRow { p, m, tail, region });
        }
    }
    Ok(rows)
}

pub fn tail_curves_csv(rows: &[TailCurveRow]) -> String {
    let mut out = String::from("p,m,\"F(m,p)\",region\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            format::real(r.p.to_f64()),
            r.m,
            format::real(r.tail.to_f64()),
            r.region.as_str()
        );
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridBoundRow {
    pub m: TrialCount,
    pub k: u32,
    pub exact_grid_cdf: ExactProbability,
    pub lemma2_bound: f64,
}

/// Exact `P[X <= k]` under `B(m, k/m)` next to its Camp-Paulson bound, `1 <= k <= m-1`.
pub fn grid_vs_bound(trials: &[TrialCount]) -> Result<Vec<GridBoundRow>> {
    let mut rows = Vec::new();
    for &m in trials {
        for k in 1..m.get() {
            rows.push(GridBoundRow {
                m,
                k,
                exact_grid_cdf: grid_cdf(m, i64::from(k))?,
                lemma2_bound: lemma2_bound(m, i64::from(k))?,
            });
        }
    }
    Ok(rows)
}

pub fn grid_vs_bound_csv(rows: &[GridBoundRow]) -> String {
    let mut out = String::from("m,k,exact_grid_cdf,lemma2_bound,reference_0.75\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},0.75",
            r.m,
            r.k,
            format::real(r.exact_grid_cdf.to_f64()),
            format::real(r.lemma2_bound)
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::cmp_rational_f64;

    fn tc(m: u32) -> TrialCount {
        TrialCount::new(m).unwrap()
    }

    #[test]
    fn fair_coin_panel() {
        let params = BinomialParams::new(tc(2), ExactProbability::from_fraction(1, 2).unwrap());
        let rows: Vec<(u32, String)> = pmf_panel(&params)
            .into_iter()
            .map(|(k, v)| (k, v.to_string()))
            .collect();
        assert_eq!(
            rows,
            vec![
                (0, "1/4".to_string()),
                (1, "1/2".to_string()),
                (2, "1/4".to_string())
            ]
        );
        assert_eq!(
            pmf_panel_csv(&params),
            "k,probability\n0,0.25\n1,0.5\n2,0.25\n"
        );
        assert_eq!(pmf_panel_file_name(&params), "pmf_m2_p1-2.csv");
    }

    #[test]
    fn tail_curve_regions_and_grid_points() {
        let step = BigRational::new(1.into(), 4.into());
        let rows = tail_curves(&[tc(3)], &step, false).unwrap();
        let ps: Vec<String> = rows.iter().map(|r| r.p.to_string()).collect();
        assert_eq!(ps, ["0/1", "1/4", "1/3", "1/2", "2/3", "3/4", "1/1"]);
        assert_eq!(rows[2].region, Region::Dotted);
        assert_eq!(rows[3].region, Region::Solid);

        let with_jumps = tail_curves(&[tc(3)], &step, true).unwrap();
        assert_eq!(with_jumps.len(), rows.len() + 3);
    }

    #[test]
    fn tail_curve_step_validation() {
        assert!(tail_curves(&[tc(3)], &BigRational::zero(), false).is_err());
        assert!(tail_curves(&[tc(3)], &BigRational::from_integer(2.into()), false).is_err());
    }

    #[test]
    fn grid_rows_are_dominated() {
        let rows = grid_vs_bound(&default_grid_trials()).unwrap();
        assert_eq!(rows.len(), 1 + 21 + 41 + 61 + 71);
        for r in &rows {
            assert!(cmp_rational_f64(r.exact_grid_cdf.value(), r.lemma2_bound).is_le());
        }
        let csv = grid_vs_bound_csv(&rows);
        assert!(csv.starts_with("m,k,exact_grid_cdf,lemma2_bound,reference_0.75\n2,1,0.75,"));
    }
}
