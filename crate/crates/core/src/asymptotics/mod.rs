//! Growth constants and limit laws.
//!
//! Logarithms in the run-length laws are to base `1/r`; [`LogBase`] is the
//! only place where that conversion happens.

mod gamma;

use std::f64::consts::PI;
use std::str::FromStr;

use num_bigint::BigUint;
use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};

pub use gamma::{complex_gamma, ln_complex_gamma};

use crate::count::{count_series, mean_variance_profile, ExactDistribution};
use crate::digraph::ClassDigraph;
use crate::parts::Letter;
use crate::runs::to_f64;
use crate::series::CoeffSeries;
use crate::{Error, Result};

/// Euler's constant to the six places used by the run-length law.
pub const EULER_GAMMA: f64 = 0.577216;

/// Fewest trailing nonzero coefficients accepted by the estimators.
const MIN_TRAILING: usize = 16;

/// A value with an error indicator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

/// Constants of the growth and run-length laws.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticParams {
    /// Radius of convergence of the class ogf.
    pub r: f64,
    /// `|A_n| ~ A r^-n`, when known.
    pub a: Option<f64>,
    /// `v_k ~ C r^|l_k|`.
    pub c: f64,
    /// `|c|` of the marked subcomposition.
    pub csize: u32,
}

/// Logarithms to base `1/r`.
#[derive(Debug, Clone, Copy)]
pub struct LogBase {
    ln_base: f64,
}

impl LogBase {
    pub fn new(r: f64) -> Result<Self> {
        if !(r > 0.0 && r < 1.0) {
            return Err(Error::InvalidArgument(format!("radius {r} is not in (0, 1)")));
        }
        Ok(LogBase { ln_base: -r.ln() })
    }

    pub fn log(self, x: f64) -> f64 {
        x.ln() / self.ln_base
    }

    /// `log e = 1 / ln(1/r)`.
    pub fn log_e(self) -> f64 {
        1.0 / self.ln_base
    }
}

/// Natural log of a big integer, without overflow.
fn ln_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    let shift = bits.saturating_sub(60);
    (x >> shift).to_f64().expect("60-bit value").ln() + shift as f64 * std::f64::consts::LN_2
}

/// `a / b` for big integers of any size.
fn ratio(a: &BigUint, b: &BigUint) -> f64 {
    (ln_big(a) - ln_big(b)).exp()
}

/// One Aitken step on the last three terms; the raw last term when the
/// second difference vanishes.
fn aitken(x: &[f64]) -> f64 {
    let [a, b, c] = x[x.len() - 3..] else { unreachable!() };
    let denom = c - 2.0 * b + a;
    let accel = c - (c - b) * (c - b) / denom;
    if denom.abs() < 1e-300 || !accel.is_finite() { c } else { accel }
}

fn trailing_nonzero(series: &CoeffSeries) -> Result<&[BigUint]> {
    let coeffs = series.coeffs();
    let start = coeffs.iter().rposition(Zero::is_zero).map_or(0, |i| i + 1);
    let tail = &coeffs[start..];
    if tail.len() < MIN_TRAILING {
        return Err(Error::InvalidArgument(format!(
            "need {MIN_TRAILING} trailing nonzero coefficients, have {}",
            tail.len()
        )));
    }
    Ok(tail)
}

/// `r` from the ratios `a_n / a_(n+1)` with one Aitken step; the error is the
/// gap between the last two accelerated values.
pub fn estimate_r(series: &CoeffSeries) -> Result<Estimate> {
    let tail = trailing_nonzero(series)?;
    let ratios: Vec<f64> = tail.windows(2).map(|w| ratio(&w[0], &w[1])).collect();
    let last = aitken(&ratios);
    let prev = aitken(&ratios[..ratios.len() - 1]);
    Ok(Estimate { value: last, error: (last - prev).abs() })
}

/// `A` from `a_n r^n` with one Aitken step. Fails when the last eight
/// values spread by more than 1% of their size.
pub fn estimate_a(series: &CoeffSeries, r: f64) -> Result<Estimate> {
    let tail = trailing_nonzero(series)?;
    let offset = series.coeffs().len() - tail.len();
    let scaled: Vec<f64> =
        tail.iter().enumerate().map(|(i, a)| (ln_big(a) + (offset + i) as f64 * r.ln()).exp()).collect();
    let window = &scaled[scaled.len() - 8..];
    let (lo, hi) = window.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), &x| (lo.min(x), hi.max(x)));
    let last = aitken(&scaled);
    if !(last.is_finite() && last > 0.0) || hi - lo > 1e-2 * last {
        return Err(Error::Numerical(format!("a_n r^n does not settle: range [{lo}, {hi}]")));
    }
    let prev = aitken(&scaled[..scaled.len() - 1]);
    Ok(Estimate { value: last, error: (last - prev).abs() })
}

/// `sum_{j >= 1} r^j / (1 + r^j) - 1`, with the tail beyond the truncation
/// below `slack`.
fn carlitz_g(r: f64, slack: f64) -> (f64, f64) {
    let (mut sum, mut deriv) = (0.0, 0.0);
    let mut j = 1;
    loop {
        let rj = r.powi(j);
        sum += rj / (1.0 + rj);
        deriv += j as f64 * rj / (r * (1.0 + rj) * (1.0 + rj));
        // sum_{i > j} r^i / (1 + r^i) <= r^(j+1) / (1 - r)
        if rj * r / (1.0 - r) < slack {
            return (sum - 1.0, deriv);
        }
        j += 1;
    }
}

/// The root of `sum_{j >= 1} r^j / (1 + r^j) = 1` in `[0.5, 0.6]`, to `tol`.
pub fn carlitz_r(tol: f64) -> Result<f64> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidArgument("tolerance must be positive".into()));
    }
    let slack = (tol * 1e-3).max(1e-17);
    let (mut lo, mut hi) = (0.5f64, 0.6f64);
    while hi - lo > tol.max(1e-9) {
        let mid = 0.5 * (lo + hi);
        if carlitz_g(mid, slack).0 < 0.0 { lo = mid } else { hi = mid }
    }
    let mut r = 0.5 * (lo + hi);
    for _ in 0..8 {
        let (g, dg) = carlitz_g(r, slack);
        let next = r - g / dg;
        if !(lo - tol..=hi + tol).contains(&next) {
            break;
        }
        let done = (next - r).abs() < 1e-16;
        r = next;
        if done {
            break;
        }
    }
    Ok(r)
}

/// Classes with a closed-form radius.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClosedForm {
    Free,
    NColor,
    Multiset(u32),
}

impl FromStr for ClosedForm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "free" => Ok(ClosedForm::Free),
            "ncolor" => Ok(ClosedForm::NColor),
            _ => s
                .strip_prefix("multiset(")
                .and_then(|rest| rest.strip_suffix(')'))
                .and_then(|n| n.parse().ok())
                .map(ClosedForm::Multiset)
                .ok_or_else(|| Error::InvalidArgument(format!("unknown class tag {s:?}"))),
        }
    }
}

pub fn closed_form_r(class: ClosedForm) -> Result<f64> {
    match class {
        ClosedForm::Free => Ok(0.5),
        ClosedForm::NColor => Ok((3.0 - 5f64.sqrt()) / 2.0),
        ClosedForm::Multiset(0) => Err(Error::InvalidArgument("multiset needs at least one color".into())),
        ClosedForm::Multiset(n) => Ok(1.0 - 2f64.powf(-1.0 / n as f64)),
    }
}

/// `C` for all compositions: `(1 - 2^-|c|)^2 / 2`.
pub fn allcomp_c(csize: u32) -> f64 {
    let x = 1.0 - 0.5f64.powi(csize as i32);
    0.5 * x * x
}

/// `C` for Carlitz compositions and `c = ab`:
/// `(1 - r^(a+b))^2 / ((1 + r^a)(1 + r^b)) / sum_j j r^j / (1 + r^j)^2`.
pub fn carlitz_c(a: u32, b: u32, r: f64) -> Result<f64> {
    if a == b || a == 0 || b == 0 {
        return Err(Error::InvalidArgument(format!("c = {a}{b} needs distinct positive parts")));
    }
    let mut sum = 0.0;
    let mut j = 1;
    loop {
        let rj = r.powi(j);
        sum += j as f64 * rj / ((1.0 + rj) * (1.0 + rj));
        // The tail is at most sum_{i > j} i r^i.
        let next = (j + 1) as f64;
        if next * rj * r / ((1.0 - r) * (1.0 - r)) < 1e-17 {
            break;
        }
        j += 1;
    }
    let rab = r.powi((a + b) as i32);
    Ok((1.0 - rab).powi(2) / ((1.0 + r.powi(a as i32)) * (1.0 + r.powi(b as i32))) / sum)
}

/// Result of [`estimate_c`].
#[derive(Debug, Clone, PartialEq)]
pub struct CEstimate {
    pub c: f64,
    pub r: Estimate,
    /// `(|l_k|, v_k r^-|l_k|)` over the averaging window.
    pub window: Vec<(u32, f64)>,
    /// Number of usable free parts, those with `|l_k| <= log_(1/r) nmax`.
    pub usable: usize,
}

/// `C` from `v_k = E(zeta_k(nmax)) / nmax`, averaging `v_k r^-|l_k|` over
/// the middle third of the usable free parts.
pub fn estimate_c(d: &ClassDigraph, free_set: &[Letter], nmax: u32) -> Result<CEstimate> {
    let mut free: Vec<Letter> = free_set.to_vec();
    free.sort_by_key(|l| l.size());
    if free.windows(2).any(|w| w[0].size() == w[1].size()) {
        return Err(Error::InvalidArgument("free parts must have distinct sizes".into()));
    }
    let r = estimate_r(&count_series(d, nmax)?)?;
    let limit = LogBase::new(r.value)?.log(nmax as f64);
    let usable = free.iter().take_while(|l| l.size() as f64 <= limit).count();
    let (from, to) = (usable as f64 / 3.0, 2.0 * usable as f64 / 3.0);
    let mut window = Vec::new();
    for (i, &l) in free[..usable].iter().enumerate() {
        let k = (i + 1) as f64;
        if k < from || k > to {
            continue;
        }
        let row = mean_variance_profile(d, l, nmax)?.pop().expect("nmax row");
        let v = to_f64(&row.mean) / nmax as f64;
        window.push((l.size(), v * r.value.powi(-(l.size() as i32))));
    }
    if window.is_empty() {
        return Err(Error::InvalidArgument(format!("averaging window is empty ({usable} usable parts)")));
    }
    let c = window.iter().map(|w| w.1).sum::<f64>() / window.len() as f64;
    Ok(CEstimate { c, r, window, usable })
}

/// Terms of the oscillating series stop once below this magnitude.
const TERM_FLOOR: f64 = 1e-15;
/// Default largest `l` in the oscillating series.
pub const DEFAULT_TERMS: u32 = 16;

/// `P_k(x) = (log e / |c|) sum_{l != 0} Gamma(k + 2 pi i l log e / |c|) exp(-2 pi i l log x / |c|)`,
/// summed symmetrically over `0 < |l| <= L`. With `terms = None`, `L` is the
/// first index whose term falls below 1e-15, capped at [`DEFAULT_TERMS`].
pub fn oscillation_p(k: u32, x: f64, csize: u32, r: f64, terms: Option<u32>) -> Result<f64> {
    if terms == Some(0) {
        return Err(Error::InvalidArgument("the oscillating series needs at least one term".into()));
    }
    if x.is_nan() || x <= 0.0 || csize == 0 {
        return Err(Error::InvalidArgument("oscillation needs x > 0 and |c| > 0".into()));
    }
    let base = LogBase::new(r)?;
    let scale = base.log_e() / csize as f64;
    let phase = base.log(x) / csize as f64;
    let cap = terms.unwrap_or(DEFAULT_TERMS);
    let mut sum = 0.0;
    for l in 1..=cap {
        let l = l as f64;
        let g = complex_gamma(Complex64::new(k as f64, 2.0 * PI * l * scale))?;
        let term = g * Complex64::from_polar(1.0, -2.0 * PI * l * phase);
        // The -l term is the conjugate.
        sum += 2.0 * term.re;
        if terms.is_none() && term.norm() * scale < TERM_FLOOR {
            break;
        }
    }
    Ok(scale * sum)
}

/// `x = C n / (1 - r^|c|)`, the argument of the run-length laws.
fn run_scale(n: f64, p: &AsymptoticParams) -> f64 {
    p.c * n / (1.0 - p.r.powi(p.csize as i32))
}

/// `P(R_n < k) ~ exp(-C n r^(k |c|) / (1 - r^|c|))`.
pub fn thm2_cdf(k: u32, n: f64, p: &AsymptoticParams) -> f64 {
    (-run_scale(n, p) * p.r.powf(k as f64 * p.csize as f64)).exp()
}

/// `E(R_n) ~ log(x) / |c| + gamma log e / |c| - 1/2 - P_0(x)`.
pub fn thm2_mean(n: f64, p: &AsymptoticParams) -> Result<f64> {
    let base = LogBase::new(p.r)?;
    let x = run_scale(n, p);
    let c = p.csize as f64;
    Ok(base.log(x) / c + EULER_GAMMA * base.log_e() / c - 0.5 - oscillation_p(0, x, p.csize, p.r, None)?)
}

/// `g_n(k) ~ (1 - r^|c|)^k / k! P_k(x) + (1 - r^|c|)^k log e / (k |c|)`.
pub fn thm2_gnk(k: u32, n: f64, p: &AsymptoticParams) -> Result<f64> {
    if k == 0 {
        return Err(Error::InvalidArgument("g_n(k) needs k >= 1".into()));
    }
    let base = LogBase::new(p.r)?;
    let q = (1.0 - p.r.powi(p.csize as i32)).powi(k as i32);
    let fact: f64 = (1..=k).map(|i| i as f64).product();
    let x = run_scale(n, p);
    Ok(q / fact * oscillation_p(k, x, p.csize, p.r, None)? + q * base.log_e() / (k as f64 * p.csize as f64))
}

/// Poisson probabilities `P(X = j)`, `j = 0..len`.
fn poisson_pmf(mu: f64, len: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(len);
    let mut p = (-mu).exp();
    for j in 0..len {
        out.push(p);
        p *= mu / (j + 1) as f64;
    }
    out
}

/// Total variation distance between `dist` and Poisson(`mu`). A lumped last
/// bucket is compared with the Poisson tail from the same value.
pub fn poisson_tv(dist: &ExactDistribution, mu: f64) -> Result<f64> {
    if mu.is_nan() || mu <= 0.0 {
        return Err(Error::InvalidArgument("Poisson mean must be positive".into()));
    }
    let top = dist.support.last().copied().unwrap_or(0) as usize;
    // Extend far enough that the Poisson tail is below 1e-12.
    let mut len = top + 2;
    loop {
        let pmf = poisson_pmf(mu, len);
        let tail = 1.0 - pmf.iter().sum::<f64>();
        if tail < 1e-12 || len > 100_000 {
            break;
        }
        len *= 2;
    }
    let pmf = poisson_pmf(mu, len);
    let exact = |j: usize| dist.probability(j as u32);
    let mut diff = 0.0;
    match dist.lumped_from {
        Some(from) => {
            let from = from as usize;
            for (j, &p) in pmf.iter().enumerate().take(from) {
                diff += (to_f64(&exact(j)) - p).abs();
            }
            let tail = (1.0 - pmf[..from].iter().sum::<f64>()).max(0.0);
            diff += (to_f64(&exact(from)) - tail).abs();
        }
        None => {
            for (j, &p) in pmf.iter().enumerate() {
                diff += (to_f64(&exact(j)) - p).abs();
            }
            diff += (1.0 - pmf.iter().sum::<f64>()).max(0.0);
        }
    }
    Ok(0.5 * diff)
}
