//! Built-in local restrictions.
//!
//! Every rule is window-local: a sequence is admissible iff each window of
//! at most `reach + 1` consecutive parts is. Two consecutive blocks of a
//! walk therefore interact only through the last `reach` parts of the first
//! and the first `reach` parts of the second, which is what [`EdgeSig`]
//! records.

use crate::parts::{Letter, Part, PartSpec};
use crate::runs::{self, RunDescriptor};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum LocalRule {
    /// No restriction.
    Free,
    /// `p_i != p_j` (as size-color pairs) whenever `|i - j| <= k`.
    CarlitzDistance(u32),
    /// Parts alternately greater and less than the preceding part. Ordinary
    /// parts only, span 2.
    Alternating,
    /// No pattern occurs as a contiguous factor.
    AvoidPatterns(Vec<Vec<Part>>),
    /// The image of a base class under the run replacement: runs of `run.c`
    /// become single run letters.
    RunAugmented { base: Box<LocalRule>, run: RunDescriptor },
}

impl LocalRule {
    /// Largest distance between two parts that constrain each other.
    pub fn reach(&self) -> usize {
        match self {
            LocalRule::Free => 0,
            LocalRule::CarlitzDistance(k) => *k as usize,
            LocalRule::Alternating => 2,
            LocalRule::AvoidPatterns(patterns) => {
                patterns.iter().map(Vec::len).max().unwrap_or(1).saturating_sub(1)
            }
            LocalRule::RunAugmented { base, run } => base.reach().max(run.len()),
        }
    }

    /// Check that the rule can be realized with span `span` over `spec`.
    pub fn check_span(&self, span: u32, spec: &PartSpec) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidSpec(msg));
        match self {
            LocalRule::Free => Ok(()),
            LocalRule::CarlitzDistance(0) => bad("Carlitz distance must be positive".into()),
            LocalRule::CarlitzDistance(k) if span < *k => {
                bad(format!("{k}-Carlitz needs span >= {k}, got {span}"))
            }
            LocalRule::CarlitzDistance(_) => Ok(()),
            LocalRule::Alternating => {
                if span != 2 {
                    bad(format!("alternating compositions use span 2, got {span}"))
                } else if *spec != PartSpec::Ordinary {
                    bad("alternating compositions need ordinary parts".into())
                } else {
                    Ok(())
                }
            }
            LocalRule::AvoidPatterns(patterns) => {
                if patterns.is_empty() || patterns.iter().any(Vec::is_empty) {
                    return bad("avoided patterns must be nonempty".into());
                }
                if let Some(p) = patterns.iter().flatten().find(|p| !spec.contains(**p)) {
                    return bad(format!("pattern part {p} is not a part of the class"));
                }
                if self.reach() > span as usize {
                    return bad(format!(
                        "patterns of length {} need span >= {}",
                        self.reach() + 1,
                        self.reach()
                    ));
                }
                Ok(())
            }
            LocalRule::RunAugmented { base, run } => {
                if matches!(**base, LocalRule::RunAugmented { .. }) {
                    return bad("run augmentation cannot be nested".into());
                }
                base.check_span(span, spec)?;
                if run.len() != span as usize {
                    return bad(format!(
                        "run composition has length {}, span is {span}",
                        run.len()
                    ));
                }
                if let Some(p) = run.parts().iter().find(|p| !spec.contains(**p)) {
                    return bad(format!("run part {p} is not a part of the class"));
                }
                run.require_border_free()
            }
        }
    }

    /// Whether `seq` may occur as a factor of a structure in the class; with
    /// `at_start`/`at_end` it must also be able to start/end one. Both flags
    /// together ask whether `seq` is itself a structure of the class.
    pub fn admits(&self, seq: &[Letter], at_start: bool, at_end: bool) -> bool {
        match self {
            LocalRule::RunAugmented { base, run } => {
                if seq.windows(2).any(|w| w[0].is_run() && w[1].is_run()) {
                    return false;
                }
                if seq.iter().any(|l| matches!(l, Letter::Run { k, unit } if *k == 0 || *unit != run.size())) {
                    return false;
                }
                let edge: Vec<Option<Part>> = seq.iter().map(|l| l.atom()).collect();
                if contains_factor(&edge, run.parts()) {
                    return false;
                }
                base.admits_parts(&runs::expand_truncated(seq, run), at_start, at_end)
            }
            _ => match as_parts(seq) {
                Some(parts) => self.admits_parts(&parts, at_start, at_end),
                None => false,
            },
        }
    }

    fn admits_parts(&self, parts: &[Part], at_start: bool, at_end: bool) -> bool {
        match self {
            LocalRule::Free => true,
            LocalRule::CarlitzDistance(k) => {
                let k = *k as usize;
                (0..parts.len()).all(|i| parts[i + 1..parts.len().min(i + k + 1)].iter().all(|q| *q != parts[i]))
            }
            LocalRule::Alternating => {
                // The single composition "1" has no walk in the alternating digraph.
                if at_start && at_end && parts == [Part::plain(1)] {
                    return false;
                }
                if parts.windows(2).any(|w| w[0].size == w[1].size) {
                    return false;
                }
                parts.windows(3).all(|w| (w[1].size > w[0].size) != (w[2].size > w[1].size))
            }
            LocalRule::AvoidPatterns(patterns) => {
                let edge: Vec<Option<Part>> = parts.iter().copied().map(Some).collect();
                !patterns.iter().any(|p| contains_factor(&edge, p))
            }
            LocalRule::RunAugmented { .. } => unreachable!("run augmentation has no plain-part form"),
        }
    }

    /// Boundary signature of the end of a block.
    pub(crate) fn tail_edge(&self, block: &[Letter]) -> EdgeSig {
        self.edge(block, true)
    }

    /// Boundary signature of the beginning of a block.
    pub(crate) fn head_edge(&self, block: &[Letter]) -> EdgeSig {
        self.edge(block, false)
    }

    fn edge(&self, block: &[Letter], tail: bool) -> EdgeSig {
        fn take<T: Copy>(v: &[T], n: usize, tail: bool) -> Vec<T> {
            let n = n.min(v.len());
            if tail { v[v.len() - n..].to_vec() } else { v[..n].to_vec() }
        }
        match self {
            LocalRule::RunAugmented { base, run } => {
                let boundary = if tail { block.last() } else { block.first() };
                let letters: Vec<Option<Part>> = block.iter().map(|l| l.atom()).collect();
                EdgeSig {
                    run: boundary.is_some_and(|l| l.is_run()),
                    letters: take(&letters, run.len() - 1, tail),
                    atoms: take(&runs::expand_truncated(block, run), base.reach(), tail),
                }
            }
            _ => EdgeSig {
                run: false,
                letters: take(block, self.reach(), tail).into_iter().map(|l| l.atom()).collect(),
                atoms: Vec::new(),
            },
        }
    }

    /// Whether a block ending in `tail` may be followed by one starting with `head`.
    pub(crate) fn crosses(&self, tail: &EdgeSig, head: &EdgeSig) -> bool {
        match self {
            LocalRule::RunAugmented { base, run } => {
                if tail.run && head.run {
                    return false;
                }
                let joined: Vec<Option<Part>> = tail.letters.iter().chain(&head.letters).copied().collect();
                if contains_factor(&joined, run.parts()) {
                    return false;
                }
                let atoms: Vec<Part> = tail.atoms.iter().chain(&head.atoms).copied().collect();
                base.admits_parts(&atoms, false, false)
            }
            _ => {
                let parts: Option<Vec<Part>> = tail.letters.iter().chain(&head.letters).copied().collect();
                parts.is_some_and(|p| self.admits_parts(&p, false, false))
            }
        }
    }
}

/// What one side of a block boundary exposes to the other side.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub(crate) struct EdgeSig {
    /// The boundary letter is a run part.
    run: bool,
    /// Boundary letters, run parts as `None`.
    letters: Vec<Option<Part>>,
    /// Boundary parts of the expanded block (run augmentation only).
    atoms: Vec<Part>,
}

fn as_parts(seq: &[Letter]) -> Option<Vec<Part>> {
    seq.iter().map(|l| l.atom()).collect()
}

fn contains_factor(seq: &[Option<Part>], pattern: &[Part]) -> bool {
    pattern.len() <= seq.len()
        && seq
            .windows(pattern.len())
            .any(|w| w.iter().zip(pattern).all(|(a, b)| *a == Some(*b)))
}
