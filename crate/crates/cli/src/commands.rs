use std::str::FromStr;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;

use locomp::asymptotics::{
    allcomp_c, carlitz_c, carlitz_r, closed_form_r, estimate_a, estimate_c, estimate_r, thm2_cdf, thm2_mean,
    AsymptoticParams, ClosedForm,
};
use locomp::count::count_series;
use locomp::parts::render;
use locomp::runs::{to_f64, RunLaw};
use locomp::{ClassDigraph, Letter, RunDescriptor};

use crate::report::{Cell, Report};
use crate::spec_file::{ClassSpecFile, PartsDef, RuleDef};
use crate::CliError;

/// Inclusive size range, written `N` or `LO..HI`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NRange {
    pub lo: u32,
    pub hi: u32,
}

impl FromStr for NRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let num = |t: &str| t.trim().parse::<u32>().map_err(|_| format!("bad size {t:?} in range {s:?}"));
        let (lo, hi) = match s.split_once("..") {
            Some((a, b)) => (num(a)?, num(b.strip_prefix('=').unwrap_or(b))?),
            None => (num(s)?, num(s)?),
        };
        if lo > hi {
            return Err(format!("empty range {s:?}"));
        }
        Ok(NRange { lo, hi })
    }
}

pub fn count(spec: &ClassSpecFile, range: NRange) -> Result<Report, CliError> {
    let d = spec.digraph()?;
    let series = count_series(&d, range.hi)?;
    let mut report = Report::new("count", &["n", "count"]);
    for n in range.lo..=range.hi {
        report.push(vec![Cell::Int(n.into()), Cell::Int(series.coeff(n as usize))]);
    }
    Ok(report)
}

pub fn enumerate(spec: &ClassSpecFile, n: u32, cap: usize) -> Result<Report, CliError> {
    let d = spec.digraph()?;
    let mut report = Report::new("enumerate", &["n", "index", "structure"]);
    for (i, s) in d.enumerate_structures(n, cap)?.iter().enumerate() {
        report.push(vec![Cell::Int(n.into()), Cell::Int(i.into()), Cell::text(render(s))]);
    }
    Ok(report)
}

/// Structural checks on the digraph: the three walk conditions, the two
/// regularity certificates up to `kmax`, and walk uniqueness at `sample`.
pub fn validate(spec: &ClassSpecFile, kmax: usize, sample: u32, cap: usize) -> Result<Report, CliError> {
    let d = spec.digraph()?;
    let v = d.validate();
    let mut report = Report::new("validate", &["check", "pass", "detail"]);
    let mut row = |name: &str, pass: bool, detail: String| {
        report.push(vec![Cell::text(name), Cell::Bool(pass), Cell::text(detail)]);
    };
    row("start_reaches_core", v.a.pass, v.a.detail.clone());
    row("core_reaches_finish", v.b.pass, v.b.detail.clone());
    let components = v.components.as_ref().map(|c| format!("; components {c:?}")).unwrap_or_default();
    row("core_strongly_connected", v.c.pass, format!("{}{components}", v.c.detail));
    match d.check_regular(kmax) {
        Ok(reg) => {
            row("cycle_gcd_one", reg.cycle_gcd == 1, format!("gcd {}", reg.cycle_gcd));
            let witness = match reg.witness {
                Some((a, b, k)) => format!("walks of length {k} from {a} to {b}"),
                None => format!("no witness with k <= {kmax}"),
            };
            row("size_aperiodic", reg.size_aperiodic, witness);
        }
        Err(e) => {
            row("cycle_gcd_one", false, e.to_string());
            row("size_aperiodic", false, e.to_string());
        }
    }
    let sample = sample.min(d.budget());
    row("unique_walks", d.check_unique_walks(sample, cap)?, format!("sizes up to {sample}"));
    Ok(report)
}

/// The closed-form radius of a recognized class.
fn closed_radius(spec: &ClassSpecFile) -> Result<Option<f64>, CliError> {
    let class = match (&spec.parts, &spec.rule) {
        (PartsDef::Ordinary, RuleDef::Free) => ClosedForm::Free,
        (PartsDef::NColor, RuleDef::Free) => ClosedForm::NColor,
        (PartsDef::Multiset { colors }, RuleDef::Free) => ClosedForm::Multiset(*colors),
        (PartsDef::Ordinary, RuleDef::Carlitz { distance: 1 }) => return Ok(Some(carlitz_r(1e-12)?)),
        _ => return Ok(None),
    };
    Ok(Some(closed_form_r(class)?))
}

/// `C` for the run of `rd`: closed forms for all and Carlitz compositions,
/// otherwise estimated from the image class at the full budget.
fn run_constant(spec: &ClassSpecFile, law: &RunLaw, rd: &RunDescriptor) -> Result<(f64, &'static str), CliError> {
    let plain = rd.parts().iter().all(|p| p.color == 0);
    match (&spec.parts, &spec.rule, rd.parts()) {
        (PartsDef::Ordinary, RuleDef::Free, _) => return Ok((allcomp_c(rd.size()), "closed form")),
        (PartsDef::Ordinary, RuleDef::Carlitz { distance: 1 }, &[a, b]) if plain && a != b => {
            return Ok((carlitz_c(a.size, b.size, carlitz_r(1e-12)?)?, "closed form"));
        }
        _ => {}
    }
    let b = law.image().budget();
    let free: Vec<Letter> = (1..=b / rd.size()).map(|k| Letter::Run { k, unit: rd.size() }).collect();
    Ok((estimate_c(law.image(), &free, b)?.c, "estimated"))
}

fn radius(spec: &ClassSpecFile, d: &ClassDigraph) -> Result<f64, CliError> {
    match closed_radius(spec)? {
        Some(r) => Ok(r),
        None => Ok(estimate_r(&count_series(d, d.budget())?)?.value),
    }
}

fn deviation_cells(exact: f64, asymptotic: f64) -> [Cell; 3] {
    let abs = (exact - asymptotic).abs();
    [Cell::Float(asymptotic), Cell::Float(abs), Cell::Float(abs / exact.abs())]
}

/// Exact `P(R_n < k)` for `k = 1..=kmax` and exact `E(R_n)` against the
/// limit laws.
pub fn run_stats(spec: &ClassSpecFile, n: u32, kmax: u32) -> Result<Report, CliError> {
    let rd = spec.run_descriptor()?.ok_or_else(|| CliError::Spec("run-stats needs a \"run\" entry".into()))?;
    rd.require_border_free()?;
    if kmax == 0 {
        return Err(CliError::Spec("kmax must be at least 1".into()));
    }
    let d = spec.digraph()?;
    let law = RunLaw::new(&d, &rd)?;
    let top = n / rd.size();
    let cdf: Vec<BigRational> =
        (1..=kmax.max(top)).into_par_iter().map(|k| law.cdf(n, k)).collect::<Result<_, _>>()?;
    let mean: BigRational = cdf[..top as usize].iter().map(|p| BigRational::one() - p).sum();

    let (c, _) = run_constant(spec, &law, &rd)?;
    let params = AsymptoticParams { r: radius(spec, &d)?, a: None, c, csize: rd.size() };
    let mut report =
        Report::new("run-stats", &["n", "quantity", "k", "exact", "exact_float", "asymptotic", "abs_dev", "rel_dev"]);
    for k in 1..=kmax {
        let exact = &cdf[k as usize - 1];
        let mut row = vec![Cell::Int(n.into()), Cell::text("cdf"), Cell::Int(k.into()), Cell::Ratio(exact.clone())];
        row.push(Cell::Float(to_f64(exact)));
        row.extend(deviation_cells(to_f64(exact), thm2_cdf(k, n as f64, &params)));
        report.push(row);
    }
    let mut row = vec![Cell::Int(n.into()), Cell::text("mean"), Cell::Empty, Cell::Ratio(mean.clone())];
    row.push(Cell::Float(to_f64(&mean)));
    row.extend(deviation_cells(to_f64(&mean), thm2_mean(n as f64, &params)?));
    report.push(row);
    Ok(report)
}

/// Growth constants at `budget` (default: the file's budget).
pub fn asym(spec: &ClassSpecFile, budget: Option<u32>) -> Result<Report, CliError> {
    let mut spec = spec.clone();
    if let Some(b) = budget {
        spec.budget = b;
    }
    let d = spec.digraph()?;
    let series = count_series(&d, spec.budget)?;
    let r_est = estimate_r(&series)?;
    let r_closed = closed_radius(&spec)?;
    let r = r_closed.unwrap_or(r_est.value);
    let mut notes = Vec::new();
    let (a, a_err) = match estimate_a(&series, r) {
        Ok(a) => (Cell::Float(a.value), Cell::Float(a.error)),
        Err(e) => {
            notes.push(e.to_string());
            (Cell::Empty, Cell::Empty)
        }
    };
    let (c, c_source, csize) = match spec.run_descriptor()? {
        Some(rd) => {
            let law = RunLaw::new(&d, &rd)?;
            let (c, source) = run_constant(&spec, &law, &rd)?;
            (Cell::Float(c), Cell::text(source), Cell::Int(rd.size().into()))
        }
        None => (Cell::Empty, Cell::Empty, Cell::Empty),
    };
    let mut report =
        Report::new("asym", &["budget", "r_est", "r_err", "r_closed", "a", "a_err", "c", "c_source", "csize", "note"]);
    report.push(vec![
        Cell::Int(spec.budget.into()),
        Cell::Float(r_est.value),
        Cell::Float(r_est.error),
        r_closed.map_or(Cell::Empty, Cell::Float),
        a,
        a_err,
        c,
        c_source,
        csize,
        Cell::text(notes.join("; ")),
    ]);
    Ok(report)
}

fn ln_big(x: &BigUint) -> f64 {
    let shift = x.bits().saturating_sub(60);
    (x >> shift).to_f64().expect("60-bit value").ln() + shift as f64 * std::f64::consts::LN_2
}

/// Exact counts against `A r^-n`.
pub fn compare(spec: &ClassSpecFile, range: NRange) -> Result<Report, CliError> {
    let d = spec.digraph()?;
    let series = count_series(&d, d.budget())?;
    if range.hi > d.budget() {
        return Err(locomp::Error::BudgetExceeded { requested: range.hi, budget: d.budget() }.into());
    }
    let r = radius(spec, &d)?;
    let a = estimate_a(&series, r)?.value;
    let mut report = Report::new("compare", &["n", "exact", "asymptotic", "abs_dev", "rel_dev"]);
    for n in range.lo..=range.hi {
        let exact = series.coeff(n as usize);
        let mut row = vec![Cell::Int(n.into()), Cell::Int(exact.clone())];
        if exact.bits() == 0 {
            row.extend([Cell::Float(a * r.powi(-(n as i32))), Cell::Empty, Cell::Empty]);
        } else {
            // Relative deviation through logarithms so large counts stay finite.
            let ratio = (a.ln() - n as f64 * r.ln() - ln_big(&exact)).exp();
            let scale = exact.to_f64().unwrap_or(f64::INFINITY);
            row.extend([
                Cell::Float(a * r.powi(-(n as i32))),
                Cell::Float(scale * (1.0 - ratio).abs()),
                Cell::Float((1.0 - ratio).abs()),
            ]);
        }
        report.push(row);
    }
    Ok(report)
}
