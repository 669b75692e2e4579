//! Acceptance suite. Prints one PASS/FAIL line per criterion and fails if
//! any criterion fails.

use std::collections::BTreeSet;
use std::io::Write;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};

use locomp::asymptotics::{
    carlitz_c, carlitz_r, closed_form_r, estimate_c, estimate_r, oscillation_p, poisson_tv, thm2_cdf, thm2_mean,
    AsymptoticParams, ClosedForm,
};
use locomp::count::{count_brute, count_series, mean_variance_profile, occurrence_distribution};
use locomp::parts::{Letter, Part, PartSpec};
use locomp::runs::{max_run, max_run_part, theta, to_f64, RunDescriptor, RunLaw};
use locomp::{ClassDigraph, LocalRule, Result};

fn build(spec: PartSpec, rule: LocalRule, span: u32, budget: u32) -> ClassDigraph {
    ClassDigraph::build(spec, rule, span, budget).expect("valid class")
}

fn word_rule() -> LocalRule {
    LocalRule::AvoidPatterns(vec![vec![Part::new(1, 0); 3]])
}

fn run(sizes: &[u32]) -> RunDescriptor {
    RunDescriptor::new(sizes.iter().map(|&s| Part::plain(s)).collect()).unwrap()
}

type Check = fn() -> Result<Outcome>;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Result<Outcome> {
    Ok(Outcome { pass, detail: detail.into() })
}

fn within(limit: Duration, start: Instant) -> (bool, String) {
    let spent = start.elapsed();
    (spent <= limit, format!("{:.2}s of {}s", spent.as_secs_f64(), limit.as_secs()))
}

fn oracle_equivalence() -> Result<Outcome> {
    let start = Instant::now();
    let classes = [
        ("free", PartSpec::Ordinary, LocalRule::Free, 1),
        ("carlitz", PartSpec::Ordinary, LocalRule::CarlitzDistance(1), 1),
        ("2-carlitz", PartSpec::Ordinary, LocalRule::CarlitzDistance(2), 2),
        ("alternating", PartSpec::Ordinary, LocalRule::Alternating, 2),
        ("ncolor", PartSpec::NColor, LocalRule::Free, 1),
        ("multiset(2)", PartSpec::MultisetColor(2), LocalRule::Free, 1),
        ("words avoiding aaa", PartSpec::Alphabet(2), word_rule(), 2),
    ];
    let mut mismatches = Vec::new();
    let mut largest = BigUint::zero();
    for (name, spec, rule, m) in classes {
        let d = build(spec, rule, m, 14);
        let series = count_series(&d, 14)?;
        // One exhaustive pass yields count_brute(n) for every n <= 14.
        let counts = d.structure_counts(14, 1 << 26)?;
        for (n, &brute) in counts.iter().enumerate() {
            if series.coeff(n) != BigUint::from(brute) {
                mismatches.push(format!("{name} n={n}"));
            }
        }
        if count_brute(&d, 10, 1 << 26)? != series.coeff(10) {
            mismatches.push(format!("{name} count_brute"));
        }
        largest = largest.max(series.coeff(14));
    }
    let (fast, time) = within(Duration::from_secs(60), start);
    outcome(mismatches.is_empty() && fast, format!("mismatches {mismatches:?}; largest A_14 = {largest}; {time}"))
}

fn carlitz_radius() -> Result<Outcome> {
    let start = Instant::now();
    let r = carlitz_r(1e-9)?;
    let est = estimate_r(&count_series(&build(PartSpec::Ordinary, LocalRule::CarlitzDistance(1), 1, 80), 80)?)?;
    let (fast, time) = within(Duration::from_secs(10), start);
    let pass = (r - 0.571350).abs() <= 5e-6 && (est.value - r).abs() <= 1e-3 && fast;
    outcome(pass, format!("carlitz_r = {r:.9}, estimate_r = {:.6}; {time}", est.value))
}

fn closed_form_radii() -> Result<Outcome> {
    let start = Instant::now();
    let mut pass = true;
    let mut detail = Vec::new();
    let mut check = |name: &str, spec: PartSpec, rule: LocalRule, m: u32, target: f64| -> Result<()> {
        let est = estimate_r(&count_series(&build(spec, rule, m, 80), 80)?)?.value;
        pass &= (est - target).abs() <= 1e-3;
        detail.push(format!("{name} {est:.6} vs {target:.6}"));
        Ok(())
    };
    check("ncolor", PartSpec::NColor, LocalRule::Free, 1, closed_form_r(ClosedForm::NColor)?)?;
    for n in 1..=3 {
        let target = closed_form_r(ClosedForm::Multiset(n))?;
        check(&format!("multiset({n})"), PartSpec::MultisetColor(n), LocalRule::Free, 1, target)?;
    }
    check("alternating", PartSpec::Ordinary, LocalRule::Alternating, 2, 0.6363)?;
    let (fast, time) = within(Duration::from_secs(30), start);
    outcome(pass && fast, format!("{}; {time}", detail.join(", ")))
}

fn theta_bijection() -> Result<Outcome> {
    let cases = [
        ("free c=1", build(PartSpec::Ordinary, LocalRule::Free, 1, 14), run(&[1])),
        ("free c=12", build(PartSpec::Ordinary, LocalRule::Free, 2, 14), run(&[1, 2])),
        ("carlitz c=12", build(PartSpec::Ordinary, LocalRule::CarlitzDistance(1), 2, 14), run(&[1, 2])),
        ("alternating c=21", build(PartSpec::Ordinary, LocalRule::Alternating, 2, 14), run(&[2, 1])),
    ];
    let mut failures = Vec::new();
    let mut checked = 0usize;
    for (name, d, rd) in cases {
        let image = RunLaw::new(&d, &rd)?.image().clone();
        let image_series = count_series(&image, 14)?;
        for n in 0..=14u32 {
            let structures = d.enumerate_structures(n, 1 << 22)?;
            let mut seen = BTreeSet::new();
            let image_set: BTreeSet<Vec<Letter>> = image.enumerate_structures(n, 1 << 22)?.into_iter().collect();
            for s in &structures {
                let parts: Vec<Part> = s.iter().map(|l| l.atom().unwrap()).collect();
                let t = theta(&parts, &rd)?;
                let size: u32 = t.iter().map(|l| l.size()).sum();
                if size != n {
                    failures.push(format!("{name}: size changed at n={n}"));
                }
                if max_run(&parts, &rd) != max_run_part(&t) {
                    failures.push(format!("{name}: max run differs at n={n}"));
                }
                if !image_set.contains(&t) {
                    failures.push(format!("{name}: image outside the run class at n={n}"));
                }
                if !seen.insert(t) {
                    failures.push(format!("{name}: not injective at n={n}"));
                }
            }
            if image_series.coeff(n as usize) != BigUint::from(structures.len()) {
                failures.push(format!("{name}: |A'_{n}| != |A_{n}|"));
            }
            checked += structures.len();
        }
    }
    failures.truncate(5);
    outcome(failures.is_empty(), format!("{checked} structures; failures {failures:?}"))
}

fn free_run_law() -> RunLaw {
    RunLaw::new(&build(PartSpec::Ordinary, LocalRule::Free, 1, 1024), &run(&[1])).unwrap()
}

fn free_params() -> AsymptoticParams {
    AsymptoticParams { r: 0.5, a: Some(0.5), c: 0.125, csize: 1 }
}

fn expected_longest_run() -> Result<Outcome> {
    let start = Instant::now();
    let exact = to_f64(&free_run_law().expected_max(1024)?);
    let predicted = thm2_mean(1024.0, &free_params())?;
    let (fast, time) = within(Duration::from_secs(300), start);
    let gap = (exact - predicted).abs();
    outcome(gap <= 0.05 && fast, format!("exact {exact:.6}, predicted {predicted:.6}, gap {gap:.2e}; {time}"))
}

fn cdf_shape() -> Result<Outcome> {
    let law = free_run_law();
    let mut worst = (0.0f64, 0);
    for k in 6..=16 {
        let gap = (to_f64(&law.cdf(1024, k)?) - thm2_cdf(k, 1024.0, &free_params())).abs();
        if gap > worst.0 {
            worst = (gap, k);
        }
    }
    outcome(worst.0 <= 0.02, format!("max gap {:.4} at k = {}", worst.0, worst.1))
}

fn poisson_law() -> Result<Outcome> {
    let start = Instant::now();
    let law = RunLaw::new(&build(PartSpec::Ordinary, LocalRule::Free, 1, 2048), &run(&[1]))?;
    let dist = occurrence_distribution(law.image(), Letter::Run { k: 11, unit: 1 }, 2048, 32)?;
    let mu = to_f64(&dist.mean());
    let tv = poisson_tv(&dist, mu)?;
    outcome(tv <= 0.05, format!("mean {mu:.6}, TV {tv:.2e}; {:.2}s", start.elapsed().as_secs_f64()))
}

fn oscillation() -> Result<Outcome> {
    let cr = carlitz_r(1e-12)?;
    let mut worst_period = 0.0f64;
    let mut sup_p0 = 0.0f64;
    for &(csize, r) in &[(1u32, 0.5), (2, 0.5), (1, cr), (3, cr)] {
        let period = (1.0 / r).powi(csize as i32);
        for i in 0..100 {
            let x = 10.0 * period.powf(i as f64 / 100.0);
            for k in 0..=3 {
                let a = oscillation_p(k, x, csize, r, None)?;
                let b = oscillation_p(k, x * period, csize, r, None)?;
                worst_period = worst_period.max((a - b).abs());
                if k == 0 && csize == 1 && r == 0.5 {
                    sup_p0 = sup_p0.max(a.abs());
                }
            }
        }
    }
    outcome(
        worst_period <= 1e-12 && sup_p0 <= 1e-4,
        format!("periodicity defect {worst_period:.2e}, sup |P_0| {sup_p0:.2e}"),
    )
}

fn empirical_c() -> Result<Outcome> {
    let free = RunLaw::new(&build(PartSpec::Ordinary, LocalRule::Free, 1, 512), &run(&[1]))?;
    let free_set: Vec<Letter> = (1..=512).map(|k| Letter::Run { k, unit: 1 }).collect();
    let free_c = estimate_c(free.image(), &free_set, 512)?;

    let nmax = 400;
    let base = build(PartSpec::Ordinary, LocalRule::CarlitzDistance(1), 2, nmax);
    let carlitz = RunLaw::new(&base, &run(&[1, 2]))?;
    let run_set: Vec<Letter> = (1..=nmax / 3).map(|k| Letter::Run { k, unit: 3 }).collect();
    let carlitz_est = estimate_c(carlitz.image(), &run_set, nmax)?;
    let target = carlitz_c(1, 2, carlitz_r(1e-12)?)?;
    let rel = (carlitz_est.c - target).abs() / target;

    let pass = (0.10..=0.15).contains(&free_c.c) && rel <= 0.15;
    outcome(
        pass,
        format!(
            "free C {:.5} (window {:?}); carlitz c=12 C {:.5} vs {target:.5} ({:.1}% off, nmax {nmax}, window {:?})",
            free_c.c,
            free_c.window.iter().map(|w| w.0).collect::<Vec<_>>(),
            carlitz_est.c,
            100.0 * rel,
            carlitz_est.window.iter().map(|w| w.0).collect::<Vec<_>>(),
        ),
    )
}

fn regularity() -> Result<Outcome> {
    let carlitz = build(PartSpec::Ordinary, LocalRule::CarlitzDistance(1), 1, 6).check_regular(4)?;
    let words = build(PartSpec::Alphabet(2), word_rule(), 2, 6).check_regular(4)?;
    outcome(
        carlitz.cycle_gcd == 1 && carlitz.size_aperiodic && !words.size_aperiodic,
        format!(
            "carlitz gcd {} aperiodic {}; words gcd {} aperiodic {}",
            carlitz.cycle_gcd, carlitz.size_aperiodic, words.cycle_gcd, words.size_aperiodic
        ),
    )
}

fn moment_growth() -> Result<Outcome> {
    let d = build(PartSpec::Ordinary, LocalRule::CarlitzDistance(1), 1, 64);
    let rows = mean_variance_profile(&d, Letter::Atom(Part::plain(1)), 64)?;
    let two = BigRational::one() + BigRational::one();
    let mean = to_f64(&(&rows[64].mean / &rows[32].mean / &two));
    let var = to_f64(&(&rows[64].variance / &rows[32].variance / &two));
    let ok = |x: f64| (0.9..=1.1).contains(&x);
    outcome(ok(mean) && ok(var), format!("mean ratio {mean:.4}, variance ratio {var:.4}"))
}

#[test]
fn acceptance_suite() {
    let criteria: [(&str, Check); 11] = [
        ("1 oracle equivalence", oracle_equivalence),
        ("2 carlitz radius", carlitz_radius),
        ("3 closed-form radii", closed_form_radii),
        ("4 theta bijection", theta_bijection),
        ("5 expected longest run", expected_longest_run),
        ("6 longest run cdf", cdf_shape),
        ("7 poisson law", poisson_law),
        ("8 oscillation function", oscillation),
        ("9 empirical C", empirical_c),
        ("10 regularity flags", regularity),
        ("moment growth", moment_growth),
    ];
    let mut failed = Vec::new();
    for (name, check) in criteria {
        let (pass, detail) = match check() {
            Ok(o) => (o.pass, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        // Written past the test harness capture so the lines always show.
        writeln!(std::io::stdout(), "{} {name}: {detail}", if pass { "PASS" } else { "FAIL" }).unwrap();
        if !pass {
            failed.push(name);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
