//! Scaling exponents from multi-scale curvature data.
//!
//! The direct exponent is read from a log–log least-squares slope. The
//! average exponent works with logarithmic (Cesàro) averages of
//! `ε^{s-k} C_k(ε)` and locates the `s` at which those averages stop
//! growing as the lower cutoff shrinks.

use serde::Serialize;

use crate::arcs::CurvatureSample;
use crate::error::{Error, Result};

/// Minimum number of positive rows a fit accepts.
pub const MIN_ROWS: usize = 8;
/// Minimum span of the fitted rows, in decades of ε.
pub const MIN_DECADES: f64 = 2.0;

/// Rows `(ε, C_k^var(ε))` with ε strictly decreasing.
#[derive(Clone, Debug, PartialEq)]
pub struct ScalingSeries {
    k: usize,
    rows: Vec<(f64, f64)>,
}

impl ScalingSeries {
    /// Sorts rows by decreasing ε. Repeated ε, non-positive ε and negative or
    /// non-finite values are rejected.
    pub fn new(k: usize, mut rows: Vec<(f64, f64)>) -> Result<Self> {
        if k > 2 {
            return Err(Error::InvalidArgument(format!("curvature order k must be 0, 1 or 2, got {k}")));
        }
        for &(e, v) in &rows {
            if !(e > 0.0 && e.is_finite()) {
                return Err(Error::InvalidArgument(format!("eps {e} is not positive")));
            }
            if !v.is_finite() {
                return Err(Error::InvalidArgument(format!("value at eps {e:e} is not finite")));
            }
            if v < 0.0 {
                return Err(Error::NegativeValue {
                    quantity: "scaling series",
                    eps: e,
                    value: v,
                });
            }
        }
        rows.sort_by(|a, b| b.0.total_cmp(&a.0));
        if let Some(w) = rows.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(Error::InvalidArgument(format!("eps {:e} appears twice", w[0].0)));
        }
        Ok(ScalingSeries { k, rows })
    }

    /// `C_k^var` column of a curvature sweep.
    pub fn from_samples(k: usize, samples: &[CurvatureSample]) -> Result<Self> {
        let rows = samples
            .iter()
            .map(|s| {
                s.value(k)
                    .map(|v| (s.eps, v))
                    .ok_or_else(|| Error::InvalidArgument(format!("no curvature of order {k}")))
            })
            .collect::<Result<Vec<_>>>()?;
        ScalingSeries::new(k, rows)
    }

    /// Samples `f` on the geometric grid `eps_max · ratio^j ≥ eps_min`.
    pub fn from_fn<F: FnMut(f64) -> f64>(k: usize, eps_min: f64, eps_max: f64, ratio: f64, mut f: F) -> Result<Self> {
        let grid = geometric_grid(eps_min, eps_max, ratio)?;
        ScalingSeries::new(k, grid.into_iter().map(|e| (e, f(e))).collect())
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn rows(&self) -> &[(f64, f64)] {
        &self.rows
    }

    /// Rows with `lo ≤ ε ≤ hi`.
    pub fn window(&self, lo: f64, hi: f64) -> ScalingSeries {
        ScalingSeries {
            k: self.k,
            rows: self.rows.iter().copied().filter(|r| r.0 >= lo && r.0 <= hi).collect(),
        }
    }

    /// Positive rows and the number of zero rows dropped, checked for range.
    fn usable(&self) -> Result<(Vec<(f64, f64)>, usize)> {
        let pos: Vec<(f64, f64)> = self.rows.iter().copied().filter(|r| r.1 > 0.0).collect();
        let dropped = self.rows.len() - pos.len();
        if pos.len() < MIN_ROWS {
            return Err(Error::InsufficientScaleRange(format!(
                "{} positive rows, need at least {MIN_ROWS}",
                pos.len()
            )));
        }
        let decades = (pos[0].0 / pos[pos.len() - 1].0).log10();
        if decades < MIN_DECADES - 1e-9 {
            return Err(Error::InsufficientScaleRange(format!(
                "rows span {decades:.3} decades, need at least {MIN_DECADES}"
            )));
        }
        Ok((pos, dropped))
    }
}

/// Geometric grid from `eps_max` down to `eps_min` (inclusive up to
/// rounding), in decreasing order.
pub fn geometric_grid(eps_min: f64, eps_max: f64, ratio: f64) -> Result<Vec<f64>> {
    if !(eps_min > 0.0 && eps_min < eps_max && eps_max.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "need 0 < eps_min < eps_max, got {eps_min} and {eps_max}"
        )));
    }
    if !(ratio > 0.0 && ratio < 1.0) {
        return Err(Error::InvalidArgument(format!("grid ratio must lie in (0, 1), got {ratio}")));
    }
    let n = ((eps_min / eps_max).ln() / ratio.ln() + 1e-9).floor() as i32;
    Ok((0..=n).map(|j| eps_max * ratio.powi(j)).collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Direct,
    Averaged,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ExponentEstimate {
    pub s_hat: f64,
    /// Standard error of the log–log slope.
    pub stderr: f64,
    pub residual_rms: f64,
    /// Largest `|ln C − fit|` within one log-period at the fine end (over all
    /// rows when no period is given).
    pub oscillation_amp: f64,
    pub method: Method,
    pub rows_used: usize,
    /// Zero rows left out of the fit.
    pub dropped: usize,
}

struct LineFit {
    slope: f64,
    intercept: f64,
    stderr: f64,
}

fn least_squares(x: &[f64], y: &[f64]) -> LineFit {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sse: f64 = x
        .iter()
        .zip(y)
        .map(|(a, b)| (b - intercept - slope * a).powi(2))
        .sum();
    let stderr = if x.len() > 2 {
        (sse / (n - 2.0) / sxx).sqrt()
    } else {
        0.0
    };
    LineFit {
        slope,
        intercept,
        stderr,
    }
}

/// Direct exponent `k − slope` of `ln C` against `ln ε`.
pub fn fit_exponent(series: &ScalingSeries) -> Result<ExponentEstimate> {
    fit_exponent_with_period(series, None)
}

/// As [`fit_exponent`], measuring the oscillation over the finest
/// `period` (in `ln ε`) of the data.
pub fn fit_exponent_with_period(series: &ScalingSeries, period: Option<f64>) -> Result<ExponentEstimate> {
    let (rows, dropped) = series.usable()?;
    let x: Vec<f64> = rows.iter().map(|r| r.0.ln()).collect();
    let y: Vec<f64> = rows.iter().map(|r| r.1.ln()).collect();
    let fit = least_squares(&x, &y);
    let res: Vec<f64> = x
        .iter()
        .zip(&y)
        .map(|(a, b)| b - fit.intercept - fit.slope * a)
        .collect();
    let rms = (res.iter().map(|r| r * r).sum::<f64>() / res.len() as f64).sqrt();
    let x_min = x[x.len() - 1];
    let osc = x
        .iter()
        .zip(&res)
        .filter(|(a, _)| period.is_none_or(|p| **a <= x_min + p))
        .map(|(_, r)| r.abs())
        .fold(0.0, f64::max);
    Ok(ExponentEstimate {
        s_hat: series.k as f64 - fit.slope,
        stderr: fit.stderr,
        residual_rms: rms,
        oscillation_amp: osc,
        method: Method::Direct,
        rows_used: rows.len(),
        dropped,
    })
}

/// `∫_δ^{ε_max} ε^{s-k-1} C(ε) dε` for every grid value `δ = ε_j`, with `C`
/// interpolated as a power law between neighboring rows. Entry `j` belongs
/// to `rows[j]`; entry 0 is zero.
fn cesaro_integrals(rows: &[(f64, f64)], s: f64, k: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(rows.len());
    let mut acc = 0.0;
    out.push(0.0);
    for w in rows.windows(2) {
        let ((eb, cb), (ea, ca)) = (w[0], w[1]);
        let l = (eb / ea).ln();
        let p = (cb / ca).ln() / l;
        let q = s - k as f64 + p;
        // C_a ε_a^{s-k} ∫_0^L e^{q t} dt
        let base = ca * ea.powf(s - k as f64);
        let seg = if (q * l).abs() < 1e-12 {
            base * l
        } else {
            base * (q * l).exp_m1() / q
        };
        acc += seg;
        out.push(acc);
    }
    out
}

/// Logarithmic averages `I(s, δ_j) / ln(ε_max/δ_j)` for `j ≥ 1`.
fn cesaro_averages(rows: &[(f64, f64)], s: f64, k: usize) -> Vec<(f64, f64)> {
    let ints = cesaro_integrals(rows, s, k);
    let top = rows[0].0;
    rows.iter()
        .zip(ints)
        .skip(1)
        .map(|(&(d, _), i)| (d, i / (top / d).ln()))
        .collect()
}

/// Slope of `ln avg(δ)` against `ln(1/δ)` over the finer half of the rows.
fn average_slope(rows: &[(f64, f64)], s: f64, k: usize) -> f64 {
    let avg = cesaro_averages(rows, s, k);
    let tail = &avg[avg.len() / 2..];
    let x: Vec<f64> = tail.iter().map(|r| -r.0.ln()).collect();
    let y: Vec<f64> = tail.iter().map(|r| r.1.ln()).collect();
    least_squares(&x, &y).slope
}

/// Average exponent: the `s` where the logarithmic averages of
/// `ε^{s-k} C` switch from growing to decaying as `δ → 0`, found by
/// bisection on the sign of their fitted log-slope. Diagnostics other than
/// `s_hat` come from the direct fit.
pub fn fit_average_exponent(series: &ScalingSeries) -> Result<ExponentEstimate> {
    let direct = fit_exponent(series)?;
    let (rows, _) = series.usable()?;
    let k = series.k;
    let slope = |s: f64| average_slope(&rows, s, k);
    let (mut lo, mut hi) = (direct.s_hat - 3.0, direct.s_hat + 3.0);
    let mut widen = 0;
    while slope(lo) <= 0.0 || slope(hi) > 0.0 {
        widen += 1;
        if widen > 20 {
            return Err(Error::InsufficientScaleRange(
                "no sign change of the averaged slope".into(),
            ));
        }
        lo -= 3.0;
        hi += 3.0;
    }
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if slope(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-12 {
            break;
        }
    }
    Ok(ExponentEstimate {
        s_hat: 0.5 * (lo + hi),
        method: Method::Averaged,
        ..direct
    })
}

/// A fractal-curvature reading with its oscillation band.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FractalCurvature {
    pub value: f64,
    /// Half the spread of the readings that produced `value`.
    pub band: f64,
    pub method: Method,
}

/// Direct mode: mean of `ε^{s-k} C` over the last decade of ε. Averaged mode:
/// the logarithmic average at the smallest δ, with the band taken over the
/// averages of the last decade.
pub fn fractal_curvature(series: &ScalingSeries, s: f64, averaged: bool) -> Result<FractalCurvature> {
    let rows: Vec<(f64, f64)> = series.rows.iter().copied().filter(|r| r.1 > 0.0).collect();
    if rows.len() < 2 {
        return Err(Error::InsufficientScaleRange(format!(
            "{} positive rows, need at least 2",
            rows.len()
        )));
    }
    let k = series.k as f64;
    let fine = rows[rows.len() - 1].0;
    let band = |v: &[f64]| {
        let (lo, hi) = v
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &x| (a.min(x), b.max(x)));
        0.5 * (hi - lo)
    };
    if averaged {
        let avg = cesaro_averages(&rows, s, series.k);
        let last: Vec<f64> = avg.iter().filter(|r| r.0 <= 10.0 * fine).map(|r| r.1).collect();
        Ok(FractalCurvature {
            value: avg[avg.len() - 1].1,
            band: band(&last),
            method: Method::Averaged,
        })
    } else {
        let vals: Vec<f64> = rows
            .iter()
            .filter(|r| r.0 <= 10.0 * fine * (1.0 + 1e-12))
            .map(|r| r.0.powf(s - k) * r.1)
            .collect();
        Ok(FractalCurvature {
            value: vals.iter().sum::<f64>() / vals.len() as f64,
            band: band(&vals),
            method: Method::Direct,
        })
    }
}

/// JSON report of both exponents.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Report {
    pub k: usize,
    pub s_hat: f64,
    pub a_hat: f64,
    pub stderr: f64,
    pub oscillation: f64,
    pub rows_used: usize,
}

impl Report {
    pub fn from_series(series: &ScalingSeries) -> Result<Report> {
        let d = fit_exponent(series)?;
        let a = fit_average_exponent(series)?;
        Ok(Report {
            k: series.k,
            s_hat: d.s_hat,
            a_hat: a.s_hat,
            stderr: d.stderr,
            oscillation: d.oscillation_amp,
            rows_used: d.rows_used,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ifs::{Ifs, Similarity};
    use crate::string::string_from_ifs;
    use proptest::prelude::*;

    fn power(k: usize, a: f64, c: f64) -> ScalingSeries {
        let rows = (1..=20).map(|j| {
            let e = 2f64.powi(-j);
            (e, c * e.powf(-a))
        });
        ScalingSeries::new(k, rows.collect()).unwrap()
    }

    fn cantor_line(ratio: f64) -> ScalingSeries {
        cantor_line_to(1e-6, 15, ratio)
    }

    fn cantor_line_to(eps_min: f64, depth: usize, ratio: f64) -> ScalingSeries {
        let ifs = Ifs::new(vec![
            Similarity::new_1d(1.0 / 3.0, false, 0.0).unwrap(),
            Similarity::new_1d(1.0 / 3.0, false, 2.0 / 3.0).unwrap(),
        ])
        .unwrap();
        let s = string_from_ifs(&ifs, depth).unwrap();
        ScalingSeries::from_fn(0, eps_min, 0.3, ratio, |e| s.c0var_line(e)).unwrap()
    }

    #[test]
    fn exact_power_law() {
        let d = 2f64.ln() / 3f64.ln();
        let e = fit_exponent(&power(0, d, 1.0)).unwrap();
        assert!((e.s_hat - d).abs() < 1e-9);
        assert!(e.residual_rms < 1e-12 && e.stderr < 1e-12);
        assert_eq!(e.method, Method::Direct);
        assert_eq!(fit_exponent(&power(0, 0.0, 1.0)).unwrap().s_hat, 0.0);
    }

    #[test]
    fn too_few_rows_or_decades() {
        let short = ScalingSeries::new(0, (1..=7).map(|j| (10f64.powi(-j), 1.0)).collect()).unwrap();
        assert!(matches!(fit_exponent(&short), Err(Error::InsufficientScaleRange(_))));
        let narrow = ScalingSeries::new(0, (0..20).map(|j| (1.0 - 0.01 * j as f64, 1.0)).collect()).unwrap();
        assert!(matches!(fit_exponent(&narrow), Err(Error::InsufficientScaleRange(_))));
        let mut rows: Vec<(f64, f64)> = (1..=10).map(|j| (10f64.powi(-j), 1.0)).collect();
        rows[3].1 = 0.0;
        rows[4].1 = 0.0;
        let zeros = ScalingSeries::new(0, rows).unwrap();
        let e = fit_exponent(&zeros).unwrap();
        assert_eq!((e.rows_used, e.dropped), (8, 2));
    }

    #[test]
    fn series_validation() {
        assert!(ScalingSeries::new(3, vec![]).is_err());
        assert!(ScalingSeries::new(0, vec![(0.1, -1.0)]).is_err());
        assert!(ScalingSeries::new(0, vec![(0.1, 1.0), (0.1, 2.0)]).is_err());
        let s = ScalingSeries::new(1, vec![(0.1, 1.0), (0.5, 2.0)]).unwrap();
        assert_eq!(s.rows()[0].0, 0.5);
    }

    #[test]
    fn cantor_string_direct_exponent() {
        let e = fit_exponent(&cantor_line(0.9)).unwrap();
        assert!((e.s_hat - 2f64.ln() / 3f64.ln()).abs() <= 0.02, "{e:?}");
        assert!(e.oscillation_amp > 0.0);
    }

    #[test]
    fn average_exponent_examples() {
        let a = fit_average_exponent(&power(0, 0.7, 2.0)).unwrap();
        assert!((a.s_hat - 0.7).abs() < 1e-6, "{a:?}");
        assert_eq!(a.method, Method::Averaged);
        let c = fit_average_exponent(&power(0, 0.0, 1.0)).unwrap();
        assert!(c.s_hat.abs() < 1e-6);

        let series = cantor_line(0.9);
        let d = fit_exponent(&series).unwrap();
        let a = fit_average_exponent(&series).unwrap();
        assert!((a.s_hat - 2f64.ln() / 3f64.ln()).abs() <= 0.02, "{a:?}");
        assert!((a.s_hat - d.s_hat).abs() <= 0.01);
        assert!(a.s_hat <= d.s_hat + 0.01);
    }

    #[test]
    fn fractal_curvature_examples() {
        for k in 0..=2 {
            let s = 0.8;
            let series = ScalingSeries::from_fn(k, 1e-5, 1.0, 0.8, |e| 3.0 * e.powf(k as f64 - s)).unwrap();
            for averaged in [false, true] {
                let f = fractal_curvature(&series, s, averaged).unwrap();
                assert!((f.value - 3.0).abs() < 1e-9, "{f:?}");
            }
        }

        let series = cantor_line(0.9);
        let s = 2f64.ln() / 3f64.ln();
        let full = fractal_curvature(&series, s, true).unwrap();
        assert!(full.value > 0.0 && full.value.is_finite());
        let lo = series.rows()[series.rows().len() - 1].0;
        let half = series.window(2.0 * lo, 1.0);
        let v2 = fractal_curvature(&half, s, true).unwrap().value;
        assert!((v2 / full.value - 1.0).abs() < 0.05, "{v2} vs {}", full.value);

        // a 0.2 excess needs five decades between the decade means
        let series = cantor_line_to(1e-9, 21, 0.9);
        let d = fit_exponent(&series).unwrap().s_hat + 0.2;
        let first = fractal_curvature(&series.window(0.03, 0.3), d, false).unwrap().value;
        let last = fractal_curvature(&series.window(1e-9, 1e-8), d, false).unwrap().value;
        assert!(first / last >= 10.0, "{first} {last}");
    }

    #[test]
    fn geometric_grid_endpoints() {
        let g = geometric_grid(1e-3, 1.0, 0.5).unwrap();
        assert_eq!(g[0], 1.0);
        assert_eq!(g.len(), 10);
        assert!(geometric_grid(1.0, 0.5, 0.5).is_err());
        assert!(geometric_grid(0.1, 1.0, 1.0).is_err());
    }

    #[test]
    fn report_fields() {
        let r = Report::from_series(&power(1, 0.5, 1.0)).unwrap();
        assert!((r.s_hat - 1.5).abs() < 1e-9 && (r.a_hat - 1.5).abs() < 1e-6);
        let v = serde_json::to_value(r).unwrap();
        for key in ["k", "s_hat", "a_hat", "stderr", "oscillation", "rows_used"] {
            assert!(v.get(key).is_some());
        }
    }

    proptest! {
        #[test]
        fn k_shift(a in -1.0f64..2.0, c in -1.0f64..1.0, k in 0usize..3) {
            let base = ScalingSeries::from_fn(k, 1e-6, 0.5, 0.8, |e| e.powf(-a) * (1.0 + 0.3 * (e.ln() * 2.0).sin())).unwrap();
            let shifted = ScalingSeries::new(k, base.rows().iter().map(|&(e, v)| (e, e.powf(c) * v)).collect()).unwrap();
            let s0 = fit_exponent(&base).unwrap().s_hat;
            let s1 = fit_exponent(&shifted).unwrap().s_hat;
            prop_assert!((s1 - (s0 - c)).abs() < 1e-9);
        }

        #[test]
        fn refining_grid_stays_within_stderr(a in 0.1f64..1.9, amp in 0.0f64..0.3, phase in 0.0f64..6.3) {
            let f = |e: f64| e.powf(-a) * (1.0 + amp * (e.ln() * 2.0 * std::f64::consts::PI / 3f64.ln() + phase).sin());
            let coarse = ScalingSeries::from_fn(0, 1e-6, 1.0, 0.8, f).unwrap();
            let fine = ScalingSeries::from_fn(0, 1e-6, 1.0, 0.8f64.sqrt(), f).unwrap();
            let c = fit_exponent(&coarse).unwrap();
            let f = fit_exponent(&fine).unwrap();
            prop_assert!((c.s_hat - f.s_hat).abs() <= c.stderr.max(f.stderr) + 1e-12,
                "{} {} {}", c.s_hat, f.s_hat, c.stderr);
        }
    }
}
