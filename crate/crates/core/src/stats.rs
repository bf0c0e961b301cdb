//! Student-t distribution, one-tailed two-sample tests, simple OLS and
//! Pearson correlation.

use serde::{Deserialize, Serialize};
use statrs::function::beta::beta_reg;

use crate::error::{Error, Result};

/// Cumulative distribution function of Student's t with `df` degrees of
/// freedom.
pub fn t_cdf(t: f64, df: f64) -> Result<f64> {
    if !(df > 0.0) || df.is_nan() {
        return Err(Error::Domain(format!("t distribution needs df > 0, got {df}")));
    }
    if t.is_nan() {
        return Err(Error::Domain("t statistic is NaN".into()));
    }
    if t == f64::INFINITY {
        return Ok(1.0);
    }
    if t == f64::NEG_INFINITY {
        return Ok(0.0);
    }
    // P(T < -|t|) = I_{df/(df+t²)}(df/2, 1/2) / 2
    let x = df / (df + t * t);
    let lower_tail = 0.5 * beta_reg(df / 2.0, 0.5, x);
    Ok(if t > 0.0 { 1.0 - lower_tail } else { lower_tail })
}

/// Size, mean and n−1 standard deviation of a sample.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SampleSummary {
    pub n: usize,
    pub mean: f64,
    pub sd: f64,
}

impl SampleSummary {
    pub fn new(n: usize, mean: f64, sd: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::Domain(format!("sample of size {n} has no standard deviation")));
        }
        if !(sd >= 0.0) || !mean.is_finite() || !sd.is_finite() {
            return Err(Error::Domain(format!("invalid summary mean={mean} sd={sd}")));
        }
        Ok(SampleSummary { n, mean, sd })
    }

    pub fn from_slice(values: &[f64]) -> Result<Self> {
        let n = values.len();
        if n < 2 {
            return Err(Error::Domain(format!("sample of size {n} has no standard deviation")));
        }
        let mean = values.iter().sum::<f64>() / n as f64;
        let ss: f64 = values.iter().map(|v| (v - mean).powi(2)).sum();
        Self::new(n, mean, (ss / (n - 1) as f64).sqrt())
    }

    fn var_over_n(&self) -> f64 {
        self.sd * self.sd / self.n as f64
    }
}

/// Which side of the shift the null hypothesis sits on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Tail {
    /// H₀: μ_a − μ_b ≥ shift, rejected for small t.
    Left,
    /// H₀: μ_a − μ_b ≤ shift, rejected for large t.
    Right,
}

/// Variance treatment of the two-sample t test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TestFlavor {
    /// Unequal variances, Welch–Satterthwaite df.
    #[default]
    Welch,
    /// Pooled variance, n_a + n_b − 2 df.
    Pooled,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TestResult {
    pub t_statistic: f64,
    pub degrees_of_freedom: f64,
    pub p_value: f64,
    pub rejected: bool,
}

pub fn one_tailed_welch_test(
    a: &SampleSummary,
    b: &SampleSummary,
    shift: f64,
    tail: Tail,
    alpha: f64,
) -> Result<TestResult> {
    one_tailed_test(a, b, shift, tail, alpha, TestFlavor::Welch)
}

/// Standard error and degrees of freedom of μ_a − μ_b.
pub fn standard_error(a: &SampleSummary, b: &SampleSummary, flavor: TestFlavor) -> (f64, f64) {
    match flavor {
        TestFlavor::Welch => {
            let (va, vb) = (a.var_over_n(), b.var_over_n());
            let se2 = va + vb;
            let denom = va * va / (a.n - 1) as f64 + vb * vb / (b.n - 1) as f64;
            let df = if denom > 0.0 { se2 * se2 / denom } else { (a.n + b.n - 2) as f64 };
            (se2.sqrt(), df)
        }
        TestFlavor::Pooled => {
            let df = (a.n + b.n - 2) as f64;
            let pooled = ((a.n - 1) as f64 * a.sd * a.sd + (b.n - 1) as f64 * b.sd * b.sd) / df;
            let se = (pooled * (1.0 / a.n as f64 + 1.0 / b.n as f64)).sqrt();
            (se, df)
        }
    }
}

/// One-tailed two-sample t test of μ_a − μ_b against `shift`.
///
/// With both standard deviations zero the outcome follows the sign of
/// (difference − shift): p = 0.5 when it is exactly zero, otherwise 0 or 1.
pub fn one_tailed_test(
    a: &SampleSummary,
    b: &SampleSummary,
    shift: f64,
    tail: Tail,
    alpha: f64,
    flavor: TestFlavor,
) -> Result<TestResult> {
    if a.n < 2 || b.n < 2 {
        return Err(Error::Domain("both samples need n >= 2".into()));
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::Domain(format!("significance level {alpha} outside (0, 1)")));
    }
    let (se, df) = standard_error(a, b, flavor);
    let excess = (a.mean - b.mean) - shift;
    let (t, p) = if se == 0.0 {
        let t = if excess == 0.0 { 0.0 } else { excess.signum() * f64::INFINITY };
        let p = match (excess.partial_cmp(&0.0), tail) {
            (Some(std::cmp::Ordering::Equal), _) => 0.5,
            (Some(std::cmp::Ordering::Less), Tail::Left) | (Some(std::cmp::Ordering::Greater), Tail::Right) => 0.0,
            _ => 1.0,
        };
        (t, p)
    } else {
        let t = excess / se;
        let p = match tail {
            Tail::Left => t_cdf(t, df)?,
            Tail::Right => t_cdf(-t, df)?,
        };
        (t, p)
    };
    Ok(TestResult { t_statistic: t, degrees_of_freedom: df, p_value: p.clamp(0.0, 1.0), rejected: p < alpha })
}

/// Simple linear regression y = intercept + slope·x.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinearModel {
    pub intercept: f64,
    pub slope: f64,
    pub se_intercept: f64,
    pub se_slope: f64,
    pub p_intercept: f64,
    pub p_slope: f64,
    pub r_squared: f64,
    pub n: usize,
}

impl LinearModel {
    pub fn predict(&self, x: f64) -> f64 {
        self.intercept + self.slope * x
    }
}

fn two_sided_p(coef: f64, se: f64, df: f64) -> Result<f64> {
    if se == 0.0 {
        return Ok(if coef == 0.0 { 1.0 } else { 0.0 });
    }
    Ok((2.0 * t_cdf(-(coef / se).abs(), df)?).min(1.0))
}

pub fn ols_fit(x: &[f64], y: &[f64]) -> Result<LinearModel> {
    if x.len() != y.len() {
        return Err(Error::Domain(format!("x has {} points but y has {}", x.len(), y.len())));
    }
    let n = x.len();
    if n < 3 {
        return Err(Error::Domain(format!("regression needs at least 3 points, got {n}")));
    }
    if x.iter().chain(y).any(|v| !v.is_finite()) {
        return Err(Error::Domain("regression input is not finite".into()));
    }
    let nf = n as f64;
    let mx = x.iter().sum::<f64>() / nf;
    let my = y.iter().sum::<f64>() / nf;
    let sxx: f64 = x.iter().map(|v| (v - mx).powi(2)).sum();
    let scale: f64 = x.iter().map(|v| v * v).sum();
    if sxx <= 1e-14 * scale || sxx == 0.0 {
        return Err(Error::SingularDesign);
    }
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let syy: f64 = y.iter().map(|v| (v - my).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ssr: f64 = x.iter().zip(y).map(|(a, b)| (b - intercept - slope * a).powi(2)).sum();
    let df = nf - 2.0;
    let s2 = ssr / df;
    let se_slope = (s2 / sxx).sqrt();
    let se_intercept = (s2 * (1.0 / nf + mx * mx / sxx)).sqrt();
    let r_squared = if syy > 0.0 { (1.0 - ssr / syy).clamp(0.0, 1.0) } else { 1.0 };
    Ok(LinearModel {
        intercept,
        slope,
        se_intercept,
        se_slope,
        p_intercept: two_sided_p(intercept, se_intercept, df)?,
        p_slope: two_sided_p(slope, se_slope, df)?,
        r_squared,
        n,
    })
}

/// Sample Pearson correlation.
pub fn pearson(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::Domain(format!("x has {} points but y has {}", x.len(), y.len())));
    }
    if x.len() < 2 {
        return Err(Error::UndefinedCorrelation);
    }
    let nf = x.len() as f64;
    let mx = x.iter().sum::<f64>() / nf;
    let my = y.iter().sum::<f64>() / nf;
    let sxx: f64 = x.iter().map(|v| (v - mx).powi(2)).sum();
    let syy: f64 = y.iter().map(|v| (v - my).powi(2)).sum();
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::UndefinedCorrelation);
    }
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    Ok((sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0))
}
