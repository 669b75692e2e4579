//! Part classes: how many parts of each size exist.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use crate::series::CoeffSeries;
use crate::{Error, Result};

/// The counting sequence `P_n` of a part class.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum PartSpec {
    /// One part of every size: ordinary compositions.
    Ordinary,
    /// `k` parts of size one and nothing else: words over a `k`-letter alphabet.
    Alphabet(u32),
    /// `n` colors for a part of size `n`.
    NColor,
    /// A part of size `n` is a multiset of `n` balls in `N` colors.
    MultisetColor(u32),
    /// `P_n = counts[n]` inside the list and zero beyond; `counts[0]` must be zero.
    Explicit(Vec<u64>),
}

impl PartSpec {
    pub fn validate(&self) -> Result<()> {
        match self {
            PartSpec::Alphabet(0) => Err(Error::InvalidSpec("alphabet size must be positive".into())),
            PartSpec::MultisetColor(0) => {
                Err(Error::InvalidSpec("multiset color count must be positive".into()))
            }
            PartSpec::Explicit(counts) if counts.first().is_some_and(|&c| c != 0) => {
                Err(Error::InvalidSpec("explicit counts must have counts[0] = 0".into()))
            }
            _ => Ok(()),
        }
    }

    /// `P_n`. Zero for `n = 0`.
    pub fn coefficient(&self, n: u32) -> BigUint {
        if n == 0 {
            return BigUint::zero();
        }
        match self {
            PartSpec::Ordinary => BigUint::from(1u32),
            PartSpec::Alphabet(k) => {
                if n == 1 {
                    BigUint::from(*k)
                } else {
                    BigUint::zero()
                }
            }
            PartSpec::NColor => BigUint::from(n),
            PartSpec::MultisetColor(colors) => binomial(n as u64 + *colors as u64 - 1, *colors as u64 - 1),
            PartSpec::Explicit(counts) => counts
                .get(n as usize)
                .map_or_else(BigUint::zero, |&c| BigUint::from(c)),
        }
    }

    /// `P_n` as a machine integer, for materializing colored parts.
    pub fn colors(&self, n: u32) -> Result<u32> {
        self.coefficient(n).to_u32().ok_or_else(|| {
            Error::InvalidSpec(format!("too many parts of size {n} to materialize"))
        })
    }

    /// The truncated ogf `P(z) = sum P_n z^n` up to `z^bound`.
    pub fn part_ogf(&self, bound: u32) -> CoeffSeries {
        CoeffSeries::new((0..=bound).map(|n| self.coefficient(n)).collect())
    }

    /// Radius of convergence of `P(z)`.
    pub fn radius(&self) -> Radius {
        match self {
            PartSpec::Ordinary | PartSpec::NColor | PartSpec::MultisetColor(_) => Radius::Finite(1.0),
            PartSpec::Alphabet(_) | PartSpec::Explicit(_) => Radius::Infinite,
        }
    }

    /// Every part of size `n`, colors in increasing order.
    pub fn parts_of_size(&self, n: u32) -> Result<impl Iterator<Item = Part>> {
        let colors = self.colors(n)?;
        Ok((0..colors).map(move |color| Part { size: n, color }))
    }

    /// All parts with size at most `bound`, ordered by (size, color).
    pub fn parts_up_to(&self, bound: u32) -> Result<Vec<Part>> {
        let mut out = Vec::new();
        for n in 1..=bound {
            out.extend(self.parts_of_size(n)?);
        }
        Ok(out)
    }

    pub fn contains(&self, part: Part) -> bool {
        part.size > 0 && BigUint::from(part.color) < self.coefficient(part.size)
    }
}

fn binomial(n: u64, k: u64) -> BigUint {
    let k = k.min(n - k);
    let mut acc = BigUint::from(1u32);
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// An extended real radius; polynomial ogfs have radius `Infinite`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Radius {
    Finite(f64),
    Infinite,
}

impl Radius {
    pub fn is_infinite(self) -> bool {
        matches!(self, Radius::Infinite)
    }

    /// True when `r` is strictly inside this radius.
    pub fn exceeds(self, r: f64) -> bool {
        match self {
            Radius::Finite(rho) => r < rho,
            Radius::Infinite => true,
        }
    }
}

/// A part of positive size; `color` indexes the `P_size` parts of that size.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Part {
    pub size: u32,
    pub color: u32,
}

impl Part {
    pub const fn new(size: u32, color: u32) -> Self {
        Part { size, color }
    }

    /// A part of an ordinary composition.
    pub const fn plain(size: u32) -> Self {
        Part { size, color: 0 }
    }
}

impl fmt::Display for Part {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.color == 0 {
            write!(f, "{}", self.size)
        } else {
            write!(f, "{}:{}", self.size, self.color)
        }
    }
}

/// A letter of a structure: an ordinary part, or a run part standing for
/// `k` consecutive copies of a fixed subcomposition of size `unit`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    Atom(Part),
    Run { k: u32, unit: u32 },
}

impl Letter {
    pub fn size(self) -> u32 {
        match self {
            Letter::Atom(p) => p.size,
            Letter::Run { k, unit } => k * unit,
        }
    }

    pub fn is_run(self) -> bool {
        matches!(self, Letter::Run { .. })
    }

    pub fn atom(self) -> Option<Part> {
        match self {
            Letter::Atom(p) => Some(p),
            Letter::Run { .. } => None,
        }
    }
}

impl From<Part> for Letter {
    fn from(p: Part) -> Self {
        Letter::Atom(p)
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Letter::Atom(p) => p.fmt(f),
            Letter::Run { k, .. } => write!(f, "[{k}]"),
        }
    }
}

/// Total size of a letter sequence.
pub fn size_of(letters: &[Letter]) -> u32 {
    letters.iter().map(|l| l.size()).sum()
}

/// Lift plain parts to letters.
pub fn atoms(parts: &[Part]) -> Vec<Letter> {
    parts.iter().copied().map(Letter::Atom).collect()
}

/// Ordinary composition from part sizes.
pub fn composition(sizes: &[u32]) -> Vec<Letter> {
    sizes.iter().map(|&s| Letter::Atom(Part::plain(s))).collect()
}

/// Render a structure compactly, e.g. `1 2 [3] 1`; the empty structure is `()`.
pub fn render(letters: &[Letter]) -> String {
    if letters.is_empty() {
        return "()".into();
    }
    letters.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(" ")
}
