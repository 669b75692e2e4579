//! Exact counting by size-graded walk sums.
//!
//! Let `W(v, s)` be the weighted number of walk prefixes from `eps_s` ending
//! at `v` with total size `s`. Then
//! `W(w, s) = shift_w( sum_{v -> w} W(v, s - |w|) )`, and the answer at size
//! `s` is the inflow into `eps_f`. Vertices enter only through their head key
//! and leave only through their tail key, so the engine keeps
//! `G[s][t] = sum_{tail(v) = t} W(v, s)` and
//! `Inflow[s][h] = sum_{t compatible with h} G[s][t]`.
//! Vertices sharing (tail, head, occurrence count) whose sizes form an
//! arithmetic progression are summed in one step through prefix sums of the
//! inflow along that step.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::digraph::{ClassDigraph, Role, TailSet, Vertex, EPS_F, EPS_S, NO_KEY};
use crate::parts::Letter;
use crate::series::CoeffSeries;
use crate::{Error, Result};

/// What a walk register accumulates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Tally {
    /// Number of walks.
    Count,
    /// Walks by occurrence count `0..cap`, with `>= cap` lumped into the last bucket.
    Capped(u32),
    /// `(sum 1, sum occ, sum occ^2)` over walks.
    Moments,
}

impl Tally {
    fn width(self) -> usize {
        match self {
            Tally::Count => 1,
            Tally::Capped(cap) => cap as usize + 1,
            Tally::Moments => 3,
        }
    }

    fn unit(self) -> Reg {
        let mut r = vec![BigUint::zero(); self.width()];
        r[0] = BigUint::one();
        r
    }

    /// Append `occ` occurrences to every walk in `r`.
    fn shift(self, r: Reg, occ: u32) -> Reg {
        if occ == 0 {
            return r;
        }
        match self {
            Tally::Count => r,
            Tally::Capped(cap) => {
                let mut out = vec![BigUint::zero(); r.len()];
                for (c, x) in r.into_iter().enumerate() {
                    out[(c as u32 + occ).min(cap) as usize] += x;
                }
                out
            }
            Tally::Moments => {
                let [s0, s1, s2]: [BigUint; 3] = r.try_into().expect("three moments");
                let o = BigUint::from(occ);
                let s2 = s2 + &s1 * &o * 2u32 + &s0 * &o * &o;
                let s1 = s1 + &s0 * &o;
                vec![s0, s1, s2]
            }
        }
    }
}

type Reg = Vec<BigUint>;

fn add_into(acc: &mut Reg, x: &Reg) {
    for (a, b) in acc.iter_mut().zip(x) {
        *a += b;
    }
}

fn is_zero(r: &Reg) -> bool {
    r.iter().all(Zero::is_zero)
}

/// Sizes `start, start + step, ...` (`len` terms), each with `mult` vertices.
#[derive(Debug, Clone, Copy)]
struct Segment {
    start: u32,
    step: u32,
    len: u32,
    mult: u64,
}

fn segments(mut sizes: Vec<(u32, u64)>) -> Vec<Segment> {
    sizes.sort_unstable();
    let mut out = Vec::new();
    let mut i = 0;
    while i < sizes.len() {
        let (start, mult) = sizes[i];
        let mut seg = Segment { start, step: 1, len: 1, mult };
        if i + 1 < sizes.len() && sizes[i + 1].1 == mult {
            seg.step = sizes[i + 1].0 - start;
            while i + (seg.len as usize) < sizes.len() {
                let (s, m) = sizes[i + seg.len as usize];
                if m != mult || s != start + seg.len * seg.step {
                    break;
                }
                seg.len += 1;
            }
        }
        i += seg.len as usize;
        out.push(seg);
    }
    out
}

/// Registers at `eps_f` for every size `0..=nmax`.
pub(crate) fn walk_sums(
    d: &ClassDigraph,
    nmax: u32,
    tally: Tally,
    occ: impl Fn(&Vertex) -> u32,
    keep: impl Fn(&Vertex) -> bool,
) -> Result<Vec<Reg>> {
    d.require_budget(nmax)?;
    let n = nmax as usize;
    let heads = d.compat().len();
    let tails = d.tail_count();
    let zero = vec![BigUint::zero(); tally.width()];

    // Group the contributing vertices.
    let mut groups: HashMap<(u32, u32, u32), BTreeMap<u32, u64>> = HashMap::new();
    for (id, v) in d.vertices().iter().enumerate() {
        if id == EPS_S || id == EPS_F || v.size == 0 || v.size > nmax || v.tail == NO_KEY || !keep(v) {
            continue;
        }
        *groups.entry((v.tail, v.head, occ(v))).or_default().entry(v.size).or_default() += 1;
    }
    let mut plan: Vec<(u32, u32, u32, Segment)> = Vec::new();
    for ((t, h, o), sizes) in groups {
        for seg in segments(sizes.into_iter().collect()) {
            plan.push((t, h, o, seg));
        }
    }
    plan.sort_by_key(|&(t, h, o, s)| (t, h, o, s.start, s.step));
    // Prefix sums are kept only for (head, step) pairs used by a long segment.
    let mut prefix_index: HashMap<(u32, u32), usize> = HashMap::new();
    for &(_, h, _, seg) in &plan {
        if seg.len > 1 {
            let next = prefix_index.len();
            prefix_index.entry((h, seg.step)).or_insert(next);
        }
    }
    let mut prefix_keys: Vec<(u32, u32)> = vec![(0, 0); prefix_index.len()];
    for (&k, &i) in &prefix_index {
        prefix_keys[i] = k;
    }

    let mut inflow: Vec<Vec<Reg>> = Vec::with_capacity(n + 1);
    let mut prefix: Vec<Vec<Reg>> = vec![Vec::with_capacity(n + 1); prefix_keys.len()];
    let mut out = Vec::with_capacity(n + 1);
    let eps_f_head = d.vertex(EPS_F).head;

    for s in 0..=n {
        let mut g = vec![zero.clone(); tails];
        if s == 0 {
            let t = d.vertex(EPS_S).tail;
            if t != NO_KEY {
                g[t as usize] = tally.unit();
            }
        } else {
            for &(t, h, o, seg) in &plan {
                let a = seg.start as usize;
                if a > s {
                    continue;
                }
                let mut sum = if seg.len == 1 {
                    inflow[s - a][h as usize].clone()
                } else {
                    let p = &prefix[prefix_index[&(h, seg.step)]];
                    let mut x = p[s - a].clone();
                    let span = (seg.len * seg.step) as usize;
                    if s - a >= span {
                        for (xi, yi) in x.iter_mut().zip(&p[s - a - span]) {
                            *xi -= yi;
                        }
                    }
                    x
                };
                if is_zero(&sum) {
                    continue;
                }
                if seg.mult != 1 {
                    let m = BigUint::from(seg.mult);
                    sum.iter_mut().for_each(|x| *x *= &m);
                }
                add_into(&mut g[t as usize], &tally.shift(sum, o));
            }
        }

        let mut total = zero.clone();
        g.iter().for_each(|r| add_into(&mut total, r));
        let level: Vec<Reg> = d
            .compat()
            .iter()
            .map(|set| match set {
                TailSet::Only(list) => {
                    let mut acc = zero.clone();
                    list.iter().for_each(|&t| add_into(&mut acc, &g[t as usize]));
                    acc
                }
                TailSet::AllBut(list) => {
                    let mut acc = total.clone();
                    for &t in list {
                        for (a, b) in acc.iter_mut().zip(&g[t as usize]) {
                            *a -= b;
                        }
                    }
                    acc
                }
            })
            .collect();
        for (i, &(h, step)) in prefix_keys.iter().enumerate() {
            let mut x = level[h as usize].clone();
            if s >= step as usize {
                add_into(&mut x, &prefix[i][s - step as usize]);
            }
            prefix[i].push(x);
        }
        out.push(if eps_f_head == NO_KEY { zero.clone() } else { level[eps_f_head as usize].clone() });
        inflow.push(level);
    }
    debug_assert_eq!(heads, inflow.first().map_or(heads, Vec::len));
    Ok(out)
}

/// `|A_n|` for `n = 0..=bound`.
pub fn count_series(d: &ClassDigraph, bound: u32) -> Result<CoeffSeries> {
    count_series_where(d, bound, |_| true)
}

/// Counts over the walks that use only vertices accepted by `keep`.
pub fn count_series_where(d: &ClassDigraph, bound: u32, keep: impl Fn(&Vertex) -> bool) -> Result<CoeffSeries> {
    let regs = walk_sums(d, bound, Tally::Count, |_| 0, keep)?;
    Ok(CoeffSeries::new(regs.into_iter().map(|mut r| r.swap_remove(0)).collect()))
}

/// Exponent `|r_i| + |r_j|` of the transfer matrix entry between the `i`-th
/// and `j`-th recurrent vertices (in id order), or `None` without an arc.
pub fn transfer_entry(d: &ClassDigraph, i: usize, j: usize) -> Result<Option<u32>> {
    let rec = d.with_role(Role::Recurrent);
    let get = |k: usize| rec.get(k).copied().ok_or(Error::IndexOutOfRange { index: k, len: rec.len() });
    let (a, b) = (get(i)?, get(j)?);
    Ok(d.has_arc(a, b).then(|| d.vertex(a).size + d.vertex(b).size))
}

/// Coefficients of `F_R(z^2) = s(z)^t (sum_k T(z)^k) f(z)` up to `z^(2 bound)`,
/// by explicit products over the vertex lists. `F_R` counts the structures
/// whose walk visits `R`.
pub fn transfer_series(d: &ClassDigraph, bound: u32) -> Result<CoeffSeries> {
    d.require_budget(bound)?;
    let top = 2 * bound as usize;
    let rec = d.with_role(Role::Recurrent);
    let start = d.with_role(Role::Start);
    let fin = d.with_role(Role::Finish);
    let sz = |v: usize| d.vertex(v).size as usize;
    let shifted_add = |acc: &mut [BigUint], x: &[BigUint], by: usize| {
        for e in by..acc.len() {
            acc[e] += &x[e - by];
        }
    };

    // Walks eps_s -> ... -> v inside S, weighted z^(2 size).
    let mut s_walk: Vec<Vec<BigUint>> = vec![vec![BigUint::zero(); top + 1]; start.len()];
    s_walk[start.iter().position(|&v| v == EPS_S).expect("eps_s is a start vertex")][0] = BigUint::one();
    for _ in 0..start.len() {
        for (j, &w) in start.iter().enumerate() {
            let mut acc = vec![BigUint::zero(); top + 1];
            if w == EPS_S {
                acc[0] = BigUint::one();
            }
            for (i, &v) in start.iter().enumerate() {
                if d.has_arc(v, w) {
                    shifted_add(&mut acc, &s_walk[i], 2 * sz(w));
                }
            }
            s_walk[j] = acc;
        }
    }
    // Walks v -> ... -> eps_f inside F, weighted z^(2 size) excluding eps_f itself.
    let mut f_walk: Vec<Vec<BigUint>> = vec![vec![BigUint::zero(); top + 1]; fin.len()];
    for _ in 0..fin.len() {
        for (j, &v) in fin.iter().enumerate() {
            let mut acc = vec![BigUint::zero(); top + 1];
            if v == EPS_F {
                acc[0] = BigUint::one();
            } else {
                for (i, &w) in fin.iter().enumerate() {
                    if d.has_arc(v, w) {
                        shifted_add(&mut acc, &f_walk[i], 2 * sz(v));
                    }
                }
            }
            f_walk[j] = acc;
        }
    }

    // s_i(z): enter r_i from S, weight z^(2|S part| + |r_i|).
    let mut x: Vec<Vec<BigUint>> = rec
        .iter()
        .map(|&r| {
            let mut acc = vec![BigUint::zero(); top + 1];
            for (i, &v) in start.iter().enumerate() {
                if d.has_arc(v, r) {
                    shifted_add(&mut acc, &s_walk[i], sz(r));
                }
            }
            acc
        })
        .collect();
    // f_j(z): leave r_j into F, weight z^(|r_j| + 2|F part|).
    let f: Vec<Vec<BigUint>> = rec
        .iter()
        .map(|&r| {
            let mut acc = vec![BigUint::zero(); top + 1];
            for (i, &w) in fin.iter().enumerate() {
                if d.has_arc(r, w) {
                    shifted_add(&mut acc, &f_walk[i], sz(r));
                }
            }
            acc
        })
        .collect();
    let arcs: Vec<Vec<usize>> =
        rec.iter().map(|&a| (0..rec.len()).filter(|&j| d.has_arc(a, rec[j])).collect()).collect();

    let mut series = vec![BigUint::zero(); top + 1];
    // Every factor of T carries a positive power of z, so the sum over k is finite.
    while x.iter().any(|v| !v.iter().all(Zero::is_zero)) {
        for (j, fj) in f.iter().enumerate() {
            for a in 0..=top {
                if x[j][a].is_zero() {
                    continue;
                }
                for b in 0..=top - a {
                    if !fj[b].is_zero() {
                        series[a + b] += &x[j][a] * &fj[b];
                    }
                }
            }
        }
        let mut next = vec![vec![BigUint::zero(); top + 1]; rec.len()];
        for (i, out) in arcs.iter().enumerate() {
            for &j in out {
                shifted_add(&mut next[j], &x[i], sz(rec[i]) + sz(rec[j]));
            }
        }
        x = next;
    }
    Ok(CoeffSeries::new(series))
}

/// Number of structures of size `n`, by exhaustive enumeration.
pub fn count_brute(d: &ClassDigraph, n: u32, cap: usize) -> Result<BigUint> {
    Ok(BigUint::from(d.structure_counts(n, cap)?[n as usize]))
}

/// Exact law of a non-negative integer variable on a finite support.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactDistribution {
    /// Strictly increasing values with positive probability.
    pub support: Vec<u32>,
    pub probabilities: Vec<BigRational>,
    /// When set, the last support value stands for every value `>=` it.
    pub lumped_from: Option<u32>,
}

impl ExactDistribution {
    pub fn probability(&self, value: u32) -> BigRational {
        self.support
            .iter()
            .position(|&v| v == value)
            .map_or_else(BigRational::zero, |i| self.probabilities[i].clone())
    }

    /// Mean, exact unless the last bucket is lumped.
    pub fn mean(&self) -> BigRational {
        self.support
            .iter()
            .zip(&self.probabilities)
            .map(|(&v, p)| p * BigRational::from_integer(v.into()))
            .sum()
    }

    fn from_counts(counts: Vec<BigUint>, lumped: Option<u32>) -> Result<Self> {
        let total: BigUint = counts.iter().sum();
        if total.is_zero() {
            return Err(Error::InvalidArgument("no structure of this size".into()));
        }
        let total = BigRational::from_integer(total.into());
        let last = counts.len() as u32 - 1;
        let (support, probabilities) = counts
            .into_iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(v, c)| (v as u32, BigRational::from_integer(c.into()) / &total))
            .unzip::<_, _, Vec<_>, Vec<_>>();
        let lumped_from = lumped.filter(|_| support.last() == Some(&last));
        Ok(ExactDistribution { support, probabilities, lumped_from })
    }
}

/// Occurrences of `target` as a letter.
fn occurrences(target: Letter) -> impl Fn(&Vertex) -> u32 {
    move |v| v.letters.iter().filter(|&&l| l == target).count() as u32
}

/// Law of the number of occurrences of `target` in a uniform structure of
/// size `n`; counts of `cap` or more share the last bucket.
pub fn occurrence_distribution(d: &ClassDigraph, target: Letter, n: u32, cap: u32) -> Result<ExactDistribution> {
    if cap == 0 {
        return Err(Error::InvalidArgument("occurrence cap must be positive".into()));
    }
    let regs = walk_sums(d, n, Tally::Capped(cap), occurrences(target), |_| true)?;
    ExactDistribution::from_counts(regs.into_iter().last().expect("size 0 is always present"), Some(cap))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MomentRow {
    pub n: u32,
    pub count: BigUint,
    pub mean: BigRational,
    pub variance: BigRational,
}

/// Exact mean and variance of the number of occurrences of `target` for
/// each size `0..=nmax`. Sizes without structures get mean and variance 0.
pub fn mean_variance_profile(d: &ClassDigraph, target: Letter, nmax: u32) -> Result<Vec<MomentRow>> {
    let regs = walk_sums(d, nmax, Tally::Moments, occurrences(target), |_| true)?;
    Ok(regs
        .into_iter()
        .enumerate()
        .map(|(n, r)| {
            let [s0, s1, s2]: [BigUint; 3] = r.try_into().expect("three moments");
            let (mean, variance) = if s0.is_zero() {
                (BigRational::zero(), BigRational::zero())
            } else {
                let total = BigRational::from_integer(s0.clone().into());
                let mean = BigRational::from_integer(s1.into()) / &total;
                let second = BigRational::from_integer(s2.into()) / &total;
                let variance = second - &mean * &mean;
                (mean, variance)
            };
            MomentRow { n: n as u32, count: s0, mean, variance }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digraph::LocalRule;
    use crate::parts::{Part, PartSpec};
    use crate::DEFAULT_ENUM_CAP;
    use num_traits::ToPrimitive;

    fn build(spec: PartSpec, rule: LocalRule, m: u32, b: u32) -> ClassDigraph {
        ClassDigraph::build(spec, rule, m, b).unwrap()
    }

    fn u64s(s: &CoeffSeries) -> Vec<u64> {
        s.coeffs().iter().map(|c| c.to_u64().unwrap()).collect()
    }

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn segments_compress_progressions() {
        let segs = segments(vec![(1, 1), (2, 1), (3, 1), (5, 2), (7, 2), (9, 2), (10, 1)]);
        let shape: Vec<_> = segs.iter().map(|s| (s.start, s.step, s.len, s.mult)).collect();
        assert_eq!(shape, vec![(1, 1, 3, 1), (5, 2, 3, 2), (10, 1, 1, 1)]);
    }

    #[test]
    fn free_compositions() {
        let d = build(PartSpec::Ordinary, LocalRule::Free, 1, 6);
        assert_eq!(u64s(&count_series(&d, 6).unwrap()), vec![1, 1, 2, 4, 8, 16, 32]);
        assert_eq!(count_brute(&d, 4, DEFAULT_ENUM_CAP).unwrap(), BigUint::from(8u32));
    }

    #[test]
    fn carlitz_counts() {
        let d = build(PartSpec::Ordinary, LocalRule::CarlitzDistance(1), 1, 10);
        assert_eq!(u64s(&count_series(&d, 10).unwrap()), vec![1, 1, 1, 3, 4, 7, 14, 23, 39, 71, 124]);
        assert_eq!(count_brute(&d, 5, DEFAULT_ENUM_CAP).unwrap(), BigUint::from(7u32));
    }

    #[test]
    fn ncolor_counts() {
        let d = build(PartSpec::NColor, LocalRule::Free, 1, 3);
        assert_eq!(count_series(&d, 3).unwrap().coeff(3), BigUint::from(8u32));
    }

    #[test]
    fn alternating_matches_brute() {
        let d = build(PartSpec::Ordinary, LocalRule::Alternating, 2, 12);
        let series = count_series(&d, 12).unwrap();
        let brute = d.structure_counts(12, DEFAULT_ENUM_CAP).unwrap();
        assert_eq!(u64s(&series), brute);
        assert_eq!(series.coeff(2), BigUint::one());
    }

    #[test]
    fn budget_is_enforced() {
        let d = build(PartSpec::Ordinary, LocalRule::Free, 1, 6);
        assert!(matches!(count_series(&d, 7), Err(Error::BudgetExceeded { requested: 7, budget: 6 })));
    }

    #[test]
    fn transfer_entries() {
        let carlitz = build(PartSpec::Ordinary, LocalRule::CarlitzDistance(1), 1, 4);
        assert_eq!(transfer_entry(&carlitz, 0, 1).unwrap(), Some(3));
        assert_eq!(transfer_entry(&carlitz, 1, 1).unwrap(), None);
        assert!(transfer_entry(&carlitz, 0, 9).is_err());
        let free = build(PartSpec::Ordinary, LocalRule::Free, 1, 4);
        assert_eq!(transfer_entry(&free, 0, 0).unwrap(), Some(2));
    }

    #[test]
    fn transfer_series_counts_recurrent_walks() {
        let d = build(PartSpec::Ordinary, LocalRule::CarlitzDistance(1), 1, 10);
        let fr = transfer_series(&d, 10).unwrap();
        let counts = count_series(&d, 10).unwrap();
        for n in 0..=10usize {
            // Every nonempty Carlitz structure visits R; the empty one does not.
            let expected = if n == 0 { BigUint::zero() } else { counts.coeff(n) };
            assert_eq!(fr.coeff(2 * n), expected, "n={n}");
            if n < 10 {
                assert!(fr.coeff(2 * n + 1).is_zero());
            }
        }
    }

    #[test]
    fn occurrence_examples() {
        let free = build(PartSpec::Ordinary, LocalRule::Free, 1, 6);
        let one = Letter::Atom(Part::plain(1));
        let dist = occurrence_distribution(&free, one, 3, 4).unwrap();
        assert_eq!(dist.support, vec![0, 1, 3]);
        assert_eq!(dist.probabilities, vec![q(1, 4), q(1, 2), q(1, 4)]);
        assert_eq!(dist.lumped_from, None);

        let big = Letter::Atom(Part::plain(6));
        let point = occurrence_distribution(&free, big, 3, 4).unwrap();
        assert_eq!((point.support.clone(), point.probabilities.clone()), (vec![0], vec![q(1, 1)]));

        let carlitz = build(PartSpec::Ordinary, LocalRule::CarlitzDistance(1), 1, 6);
        let two = Letter::Atom(Part::plain(2));
        let dist = occurrence_distribution(&carlitz, two, 4, 4).unwrap();
        assert_eq!(dist.probabilities, vec![q(3, 4), q(1, 4)]);
        assert!(occurrence_distribution(&carlitz, two, 4, 0).is_err());
    }

    #[test]
    fn lumped_bucket() {
        let free = build(PartSpec::Ordinary, LocalRule::Free, 1, 6);
        let one = Letter::Atom(Part::plain(1));
        let dist = occurrence_distribution(&free, one, 3, 2).unwrap();
        assert_eq!(dist.support, vec![0, 1, 2]);
        assert_eq!(dist.probability(2), q(1, 4));
        assert_eq!(dist.lumped_from, Some(2));
    }

    #[test]
    fn moment_examples() {
        let free = build(PartSpec::Ordinary, LocalRule::Free, 1, 6);
        let one = Letter::Atom(Part::plain(1));
        let rows = mean_variance_profile(&free, one, 3).unwrap();
        assert_eq!(rows[3].mean, q(5, 4));
        // second moment (0 + 1 + 1 + 9) / 4, minus (5/4)^2
        assert_eq!(rows[3].variance, q(11, 4) - q(25, 16));

        let carlitz = build(PartSpec::Ordinary, LocalRule::CarlitzDistance(1), 1, 6);
        let rows = mean_variance_profile(&carlitz, one, 5).unwrap();
        assert_eq!(rows[5].mean, q(5, 7));
        assert_eq!(rows[5].count, BigUint::from(7u32));

        let big = Letter::Atom(Part::plain(9));
        let rows = mean_variance_profile(&carlitz, big, 6).unwrap();
        assert!(rows.iter().all(|r| r.mean.is_zero() && r.variance.is_zero()));
    }
}
