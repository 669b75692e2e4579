//! Runs of a marked subcomposition `c` and their replacement by run parts.
//!
//! For border-free `c` (no decomposition `c = x y x` with `x` nonempty) two
//! occurrences of `c` never overlap, so maximal runs `c^k` are well defined
//! and replacing each by a run part `[k]` of size `k |c|` is a size-preserving
//! bijection onto its image class.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::count::count_series_where;
use crate::digraph::{ClassDigraph, LocalRule, Role, EPS_S};
use crate::parts::{atoms, render, Letter, Part};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RunDescriptor {
    c: Vec<Part>,
    csize: u32,
}

impl RunDescriptor {
    pub fn new(c: Vec<Part>) -> Result<Self> {
        if c.is_empty() || c.iter().any(|p| p.size == 0) {
            return Err(Error::InvalidSpec("run composition must be nonempty with positive parts".into()));
        }
        let csize = c.iter().map(|p| p.size).sum();
        Ok(RunDescriptor { c, csize })
    }

    pub fn parts(&self) -> &[Part] {
        &self.c
    }

    /// Number of parts of `c`.
    pub fn len(&self) -> usize {
        self.c.len()
    }

    pub fn is_empty(&self) -> bool {
        self.c.is_empty()
    }

    /// `|c|`.
    pub fn size(&self) -> u32 {
        self.csize
    }

    pub fn is_border_free(&self) -> bool {
        self.border().is_none()
    }

    /// The shortest `x` with `c = x y x`, together with `y`.
    pub fn border(&self) -> Option<(Vec<Part>, Vec<Part>)> {
        let n = self.c.len();
        (1..=n / 2)
            .find(|&l| self.c[..l] == self.c[n - l..])
            .map(|l| (self.c[..l].to_vec(), self.c[l..n - l].to_vec()))
    }

    pub fn require_border_free(&self) -> Result<()> {
        match self.border() {
            None => Ok(()),
            Some((x, y)) => Err(Error::NotBorderFree {
                c: render(&atoms(&self.c)),
                x: render(&atoms(&x)),
                y: render(&atoms(&y)),
            }),
        }
    }

    fn run(&self, k: u32) -> Letter {
        Letter::Run { k, unit: self.csize }
    }
}

/// Whether `c` admits no decomposition `x y x` with `x` nonempty.
pub fn is_xyx_free(c: &[Part]) -> bool {
    let n = c.len();
    (1..=n / 2).all(|l| c[..l] != c[n - l..])
}

/// Expand run parts into copies of `c`.
pub fn expand(seq: &[Letter], rd: &RunDescriptor) -> Vec<Part> {
    expand_capped(seq, rd, u32::MAX)
}

/// Expand run parts into at most two copies of `c`: enough for every window
/// of at most `|c| + 1` parts to look the same as in the full expansion.
pub(crate) fn expand_truncated(seq: &[Letter], rd: &RunDescriptor) -> Vec<Part> {
    expand_capped(seq, rd, 2)
}

fn expand_capped(seq: &[Letter], rd: &RunDescriptor, cap: u32) -> Vec<Part> {
    let mut out = Vec::new();
    for l in seq {
        match *l {
            Letter::Atom(p) => out.push(p),
            Letter::Run { k, .. } => {
                for _ in 0..k.min(cap) {
                    out.extend_from_slice(&rd.c);
                }
            }
        }
    }
    out
}

/// Replace every maximal run `c^k` by the run part `[k]`.
pub fn theta(a: &[Part], rd: &RunDescriptor) -> Result<Vec<Letter>> {
    rd.require_border_free()?;
    Ok(theta_earliest(a, rd))
}

/// Left-to-right replacement taking each copy of `c` at the earliest
/// opportunity. Agrees with [`theta`] for border-free `c`; for other `c` it
/// is an exploratory map with no run-length guarantee.
pub fn theta_earliest(a: &[Part], rd: &RunDescriptor) -> Vec<Letter> {
    let c = &rd.c;
    let mut out = Vec::new();
    let mut i = 0;
    while i < a.len() {
        let mut k = 0;
        while a[i + k * c.len()..].starts_with(c) {
            k += 1;
        }
        if k > 0 {
            out.push(rd.run(k as u32));
            i += k * c.len();
        } else {
            out.push(Letter::Atom(a[i]));
            i += 1;
        }
    }
    out
}

/// Inverse of [`theta`] on its image.
pub fn theta_inv(image: &[Letter], rd: &RunDescriptor) -> Result<Vec<Part>> {
    rd.require_border_free()?;
    if image.windows(2).any(|w| w[0].is_run() && w[1].is_run()) {
        return Err(Error::MalformedImage("consecutive run parts".into()));
    }
    if let Some(l) = image.iter().find(|l| matches!(l, Letter::Run { k, unit } if *k == 0 || *unit != rd.csize)) {
        return Err(Error::MalformedImage(format!("run part {l:?} does not match c")));
    }
    let a = expand(image, rd);
    if theta_earliest(&a, rd) != image {
        return Err(Error::MalformedImage(format!(
            "expansion {} contains a run of c not represented by a run part",
            render(&atoms(&a))
        )));
    }
    Ok(a)
}

/// Largest `k` such that `c^k` is a factor of `a`.
pub fn max_run(a: &[Part], rd: &RunDescriptor) -> u32 {
    let c = &rd.c;
    (0..a.len())
        .map(|i| {
            let mut k = 0;
            while a[i + k * c.len()..].starts_with(c) {
                k += 1;
            }
            k as u32
        })
        .max()
        .unwrap_or(0)
}

/// Largest run-part index in an image sequence; 0 without run parts.
pub fn max_run_part(image: &[Letter]) -> u32 {
    image.iter().filter_map(|l| if let Letter::Run { k, .. } = l { Some(*k) } else { None }).max().unwrap_or(0)
}

/// The digraph of the image class `theta(A)` at the same span and budget.
///
/// Requires `c` to be a recurrent vertex with a self-arc. A start set other
/// than `{eps_s}` is accepted only for the alternating digraph, whose image
/// class is built over `S = {eps_s}` like every other.
pub fn build_run_class(d: &ClassDigraph, rd: &RunDescriptor) -> Result<ClassDigraph> {
    rd.require_border_free()?;
    let base = match d.rule() {
        Some(LocalRule::RunAugmented { .. }) => {
            return Err(Error::Hypothesis("the class already carries run parts".into()));
        }
        Some(rule) => rule.clone(),
        None => return Err(Error::Hypothesis("run classes need a rule-based digraph".into())),
    };
    let c = atoms(&rd.c);
    let c_id = d
        .with_role(Role::Recurrent)
        .into_iter()
        .find(|&v| d.vertex(v).letters == c)
        .ok_or_else(|| Error::Hypothesis(format!("c = {} is not a recurrent vertex", render(&c))))?;
    if !d.has_arc(c_id, c_id) {
        return Err(Error::Hypothesis(format!("no arc from c = {} to itself", render(&c))));
    }
    if base != LocalRule::Alternating && d.with_role(Role::Start) != [EPS_S] {
        return Err(Error::Hypothesis("the start set must be {eps_s}".into()));
    }
    let rule = LocalRule::RunAugmented { base: Box::new(base), run: rd.clone() };
    ClassDigraph::build(d.spec().clone(), rule, d.span(), d.budget())
}

/// Exact law of the longest run `R_n` of `c`, through counts on the image
/// class with capped run parts.
#[derive(Debug, Clone)]
pub struct RunLaw {
    image: ClassDigraph,
    run: RunDescriptor,
}

impl RunLaw {
    pub fn new(d: &ClassDigraph, rd: &RunDescriptor) -> Result<Self> {
        Ok(RunLaw { image: build_run_class(d, rd)?, run: rd.clone() })
    }

    pub fn image(&self) -> &ClassDigraph {
        &self.image
    }

    /// `|A_n|` and the number of structures of size `n` with every run part
    /// below `k`.
    fn capped(&self, n: u32, k: u32) -> Result<(BigUint, BigUint)> {
        let all = count_series_where(&self.image, n, |_| true)?.coeff(n as usize);
        let below = count_series_where(&self.image, n, |v| {
            v.letters.iter().all(|l| !matches!(l, Letter::Run { k: j, .. } if *j >= k))
        })?
        .coeff(n as usize);
        Ok((all, below))
    }

    /// `P(R_n < k)`.
    pub fn cdf(&self, n: u32, k: u32) -> Result<BigRational> {
        if k == 0 {
            return Ok(BigRational::zero());
        }
        let (all, below) = self.capped(n, k)?;
        if all.is_zero() {
            return Err(Error::InvalidArgument(format!("no structure of size {n}")));
        }
        Ok(BigRational::new(below.into(), all.into()))
    }

    /// `P(R_n < k)` for `k = 1..=kmax`.
    pub fn cdf_table(&self, n: u32, kmax: u32) -> Result<Vec<BigRational>> {
        (1..=kmax).map(|k| self.cdf(n, k)).collect()
    }

    /// `E(R_n) = sum_{k=1}^{n/|c|} P(R_n >= k)`, exactly.
    pub fn expected_max(&self, n: u32) -> Result<BigRational> {
        let kmax = n / self.run.size();
        let mut acc = BigRational::zero();
        for k in 1..=kmax {
            acc += BigRational::one() - self.cdf(n, k)?;
        }
        Ok(acc)
    }
}

/// `P(R_n < k)` on the class of `d`.
pub fn run_cdf_exact(d: &ClassDigraph, rd: &RunDescriptor, n: u32, k: u32) -> Result<BigRational> {
    RunLaw::new(d, rd)?.cdf(n, k)
}

/// Joint law of the longest run length and the number of runs attaining it,
/// by enumeration of the structures of size `n`.
pub fn max_run_multiplicity_exact(
    d: &ClassDigraph,
    rd: &RunDescriptor,
    n: u32,
    cap: usize,
) -> Result<BTreeMap<(u32, u32), BigRational>> {
    rd.require_border_free()?;
    let all = d.enumerate_structures(n, cap)?;
    if all.is_empty() {
        return Err(Error::InvalidArgument(format!("no structure of size {n}")));
    }
    let mut counts: BTreeMap<(u32, u32), u64> = BTreeMap::new();
    for s in &all {
        let parts: Vec<Part> = s
            .iter()
            .map(|l| l.atom().ok_or_else(|| Error::InvalidArgument("structure already has run parts".into())))
            .collect::<Result<_>>()?;
        let image = theta_earliest(&parts, rd);
        let top = max_run_part(&image);
        let ties = if top == 0 { 0 } else { image.iter().filter(|l| **l == rd.run(top)).count() as u32 };
        *counts.entry((top, ties)).or_default() += 1;
    }
    let total = BigUint::from(all.len());
    Ok(counts
        .into_iter()
        .map(|(key, c)| (key, BigRational::new(BigUint::from(c).into(), total.clone().into())))
        .collect())
}

/// `f64` value of an exact rational.
pub fn to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::count::count_series;
    use crate::parts::{composition, PartSpec};
    use crate::DEFAULT_ENUM_CAP;

    fn plain(sizes: &[u32]) -> Vec<Part> {
        sizes.iter().map(|&s| Part::plain(s)).collect()
    }

    fn rd(sizes: &[u32]) -> RunDescriptor {
        RunDescriptor::new(plain(sizes)).unwrap()
    }

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    fn digits(s: &str) -> Vec<Part> {
        s.chars().map(|ch| Part::plain(ch.to_digit(10).unwrap())).collect()
    }

    #[test]
    fn border_free() {
        assert!(!is_xyx_free(&plain(&[1, 2, 1])));
        assert!(is_xyx_free(&plain(&[1, 2])));
        assert!(is_xyx_free(&plain(&[1])));
        assert!(!is_xyx_free(&plain(&[1, 1])));
        let err = rd(&[1, 2, 1]).require_border_free().unwrap_err();
        assert!(matches!(err, Error::NotBorderFree { ref x, ref y, .. } if x == "1" && y == "2"));
    }

    #[test]
    fn theta_examples() {
        let c = rd(&[1, 2]);
        let run = |k| Letter::Run { k, unit: 3 };
        let a = Letter::Atom;
        let image = theta(&digits("12123122121"), &c).unwrap();
        assert_eq!(image, vec![run(2), a(Part::plain(3)), run(1), a(Part::plain(2)), run(1), a(Part::plain(1))]);
        assert_eq!(theta(&digits("3445"), &c).unwrap(), composition(&[3, 4, 4, 5]));
        assert_eq!(theta(&digits("121212"), &c).unwrap(), vec![run(3)]);
        assert!(theta(&digits("121"), &rd(&[1, 2, 1])).is_err());
    }

    #[test]
    fn theta_inverse() {
        let c = rd(&[1, 2]);
        let image = theta(&digits("12123122121"), &c).unwrap();
        assert_eq!(theta_inv(&image, &c).unwrap(), digits("12123122121"));
        let plain_image = composition(&[3, 1, 1]);
        assert_eq!(theta_inv(&plain_image, &c).unwrap(), digits("311"));
        let run = |k| Letter::Run { k, unit: 3 };
        assert!(matches!(theta_inv(&[run(1), run(1)], &c), Err(Error::MalformedImage(_))));
        // atoms spelling c next to a run part
        let bad = [run(1), Letter::Atom(Part::plain(1)), Letter::Atom(Part::plain(2))];
        assert!(matches!(theta_inv(&bad, &c), Err(Error::MalformedImage(_))));
    }

    #[test]
    fn overlapping_example() {
        // c = 121 overlaps itself; earliest replacement of 12121121121.
        let c = rd(&[1, 2, 1]);
        let image = theta_earliest(&digits("12121121121"), &c);
        let run = |k| Letter::Run { k, unit: 4 };
        assert_eq!(image, vec![run(1), Letter::Atom(Part::plain(2)), Letter::Atom(Part::plain(1)), run(2)]);
        assert_eq!(max_run_part(&image), 2);
        assert_eq!(max_run(&digits("12121121121"), &c), 3);
    }

    #[test]
    fn max_run_examples() {
        assert_eq!(max_run(&digits("12123122121"), &rd(&[1, 2])), 2);
        assert_eq!(max_run(&digits("3443"), &rd(&[1, 2])), 0);
        assert_eq!(max_run(&digits("111"), &rd(&[1])), 3);
    }

    #[test]
    fn run_class_preconditions() {
        let carlitz = ClassDigraph::build(PartSpec::Ordinary, LocalRule::CarlitzDistance(1), 1, 6).unwrap();
        // c = 1 has no self-arc in Carlitz compositions.
        assert!(matches!(build_run_class(&carlitz, &rd(&[1])), Err(Error::Hypothesis(_))));
        let free2 = ClassDigraph::build(PartSpec::Ordinary, LocalRule::Free, 2, 6).unwrap();
        assert!(build_run_class(&free2, &rd(&[1, 2])).is_ok());
        assert!(matches!(build_run_class(&free2, &rd(&[1, 1])), Err(Error::NotBorderFree { .. })));
        let alt = ClassDigraph::build(PartSpec::Ordinary, LocalRule::Alternating, 2, 8).unwrap();
        // 12 is not a recurrent vertex of the alternating digraph.
        assert!(matches!(build_run_class(&alt, &rd(&[1, 2])), Err(Error::Hypothesis(_))));
        assert!(build_run_class(&alt, &rd(&[2, 1])).is_ok());
    }

    #[test]
    fn free_run_class_has_no_vertex_one() {
        let free = ClassDigraph::build(PartSpec::Ordinary, LocalRule::Free, 1, 6).unwrap();
        let image = build_run_class(&free, &rd(&[1])).unwrap();
        let rec = image.with_role(Role::Recurrent);
        assert!(rec.iter().all(|&v| image.vertex(v).letters != composition(&[1])));
        for &a in &rec {
            for &b in &rec {
                let both_runs = image.vertex(a).letters[0].is_run() && image.vertex(b).letters[0].is_run();
                assert_eq!(image.has_arc(a, b), !both_runs);
            }
        }
        assert_eq!(count_series(&image, 6).unwrap(), count_series(&free, 6).unwrap());
    }

    #[test]
    fn cdf_examples() {
        let free = ClassDigraph::build(PartSpec::Ordinary, LocalRule::Free, 1, 8).unwrap();
        let c = rd(&[1]);
        assert_eq!(run_cdf_exact(&free, &c, 3, 3).unwrap(), q(3, 4));
        assert_eq!(run_cdf_exact(&free, &c, 3, 1).unwrap(), q(1, 4));
        assert_eq!(run_cdf_exact(&free, &c, 3, 4).unwrap(), q(1, 1));
        let law = RunLaw::new(&free, &c).unwrap();
        // E(R_3) = (0 + 1 + 1 + 3) / 4
        assert_eq!(law.expected_max(3).unwrap(), q(5, 4));
    }

    #[test]
    fn multiplicity_examples() {
        let free = ClassDigraph::build(PartSpec::Ordinary, LocalRule::Free, 1, 8).unwrap();
        let table = max_run_multiplicity_exact(&free, &rd(&[1]), 3, DEFAULT_ENUM_CAP).unwrap();
        let expected: BTreeMap<(u32, u32), BigRational> =
            [((0, 0), q(1, 4)), ((1, 1), q(1, 2)), ((3, 1), q(1, 4))].into_iter().collect();
        assert_eq!(table, expected);
        let table = max_run_multiplicity_exact(&free, &rd(&[1, 2]), 1, DEFAULT_ENUM_CAP).unwrap();
        assert_eq!(table.into_iter().collect::<Vec<_>>(), vec![((0, 0), q(1, 1))]);
        // Of the 8 compositions of 4, 112 and 121 contain 12 once.
        let table = max_run_multiplicity_exact(&free, &rd(&[1, 2]), 4, DEFAULT_ENUM_CAP).unwrap();
        assert_eq!(table[&(0, 0)], q(6, 8));
        assert_eq!(table[&(1, 1)], q(2, 8));
    }
}
