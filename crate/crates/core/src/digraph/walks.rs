//! Exhaustive enumeration: structures by letter-level search, walks by
//! vertex-level search. Both are oracles for the counting engine.

use super::{ClassDigraph, EPS_F, EPS_S};
use crate::parts::Letter;
use crate::{Error, Result};

/// A point inside a walk: `done` letters of vertex `vertex` consumed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
struct Pos {
    vertex: u32,
    done: u32,
}

/// The vertices of size at most `n` with their out-neighbours among them,
/// ordered by size.
struct Local {
    succ: Vec<Vec<usize>>,
}

/// Candidate moves, one buffer per search depth.
type Moves = Vec<Vec<(Letter, Pos)>>;

impl ClassDigraph {
    fn local(&self, n: u32) -> Local {
        let mut small: Vec<usize> = (0..self.len()).filter(|&v| self.vertex(v).size <= n).collect();
        small.sort_by_key(|&v| self.vertex(v).size);
        let mut succ = vec![Vec::new(); self.len()];
        for &u in &small {
            succ[u] = small.iter().copied().filter(|&v| self.has_arc(u, v)).collect();
        }
        Local { succ }
    }

    /// Walk through letter sequences of size at most `n`, tracking the set of
    /// digraph positions consistent with the prefix. Each sequence is visited
    /// at most once, so `visit` sees every structure of the class exactly once.
    fn search_structures(&self, n: u32, mut visit: impl FnMut(&[Letter], u32) -> Result<()>) -> Result<()> {
        let local = self.local(n);
        let mut start = vec![Pos { vertex: EPS_S as u32, done: 0 }];
        self.close(&local, &mut start);
        let mut prefix = Vec::new();
        let mut moves = Moves::new();
        self.descend(&local, n, &start, &mut prefix, 0, &mut moves, &mut visit)
    }

    /// Add empty successors of completed positions.
    fn close(&self, local: &Local, state: &mut Vec<Pos>) {
        let mut i = 0;
        while i < state.len() {
            let p = state[i];
            if self.complete(p) {
                for &w in &local.succ[p.vertex as usize] {
                    let q = Pos { vertex: w as u32, done: 0 };
                    if self.vertex(w).letters.is_empty() && !state.contains(&q) {
                        state.push(q);
                    }
                }
            }
            i += 1;
        }
        state.sort_unstable();
        state.dedup();
    }

    fn complete(&self, p: Pos) -> bool {
        p.done as usize == self.vertex(p.vertex as usize).letters.len()
    }

    #[allow(clippy::too_many_arguments)]
    fn descend(
        &self,
        local: &Local,
        n: u32,
        state: &[Pos],
        prefix: &mut Vec<Letter>,
        size: u32,
        moves: &mut Moves,
        visit: &mut impl FnMut(&[Letter], u32) -> Result<()>,
    ) -> Result<()> {
        if state.iter().any(|&p| p.vertex as usize == EPS_F) {
            visit(prefix, size)?;
        }
        let depth = prefix.len();
        if moves.len() <= depth {
            moves.push(Vec::new());
        }
        let mut here = std::mem::take(&mut moves[depth]);
        here.clear();
        for &p in state {
            let v = self.vertex(p.vertex as usize);
            if !self.complete(p) {
                here.push((v.letters[p.done as usize], Pos { done: p.done + 1, ..p }));
                continue;
            }
            for &w in &local.succ[p.vertex as usize] {
                let wv = self.vertex(w);
                // Every letter of `w` is still to come.
                if size + wv.size > n {
                    break;
                }
                if let Some(&l) = wv.letters.first() {
                    here.push((l, Pos { vertex: w as u32, done: 1 }));
                }
            }
        }
        here.sort_unstable();
        let mut next = Vec::new();
        let mut i = 0;
        let mut result = Ok(());
        while i < here.len() {
            let l = here[i].0;
            let j = i + here[i..].iter().take_while(|m| m.0 == l).count();
            next.clear();
            next.extend(here[i..j].iter().map(|m| m.1));
            i = j;
            self.close(local, &mut next);
            prefix.push(l);
            result = self.descend(local, n, &next, prefix, size + l.size(), moves, visit);
            prefix.pop();
            if result.is_err() {
                break;
            }
        }
        moves[depth] = here;
        result
    }

    /// All structures of size exactly `n`, ordered by length and then
    /// lexicographically.
    pub fn enumerate_structures(&self, n: u32, cap: usize) -> Result<Vec<Vec<Letter>>> {
        self.require_budget(n)?;
        let mut out = Vec::new();
        self.search_structures(n, |s, size| {
            if size == n {
                if out.len() == cap {
                    return Err(Error::EnumerationTooLarge { cap });
                }
                out.push(s.to_vec());
            }
            Ok(())
        })?;
        out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        Ok(out)
    }

    /// Number of distinct structures of each size `0..=n`, without storing them.
    pub fn structure_counts(&self, n: u32, cap: usize) -> Result<Vec<u64>> {
        self.require_budget(n)?;
        let mut counts = vec![0u64; n as usize + 1];
        let mut total = 0usize;
        self.search_structures(n, |_, size| {
            total += 1;
            if total > cap {
                return Err(Error::EnumerationTooLarge { cap });
            }
            counts[size as usize] += 1;
            Ok(())
        })?;
        Ok(counts)
    }

    /// Number of `eps_s -> eps_f` walks producing a structure of each size `0..=n`.
    pub fn walk_counts(&self, n: u32, cap: usize) -> Result<Vec<u64>> {
        self.require_budget(n)?;
        let local = self.local(n);
        let mut counts = vec![0u64; n as usize + 1];
        let mut total = 0usize;
        let mut stack = vec![(EPS_S, 0u32)];
        while let Some((v, size)) = stack.pop() {
            for &w in &local.succ[v] {
                let s = size + self.vertex(w).size;
                if s > n {
                    continue;
                }
                if w == EPS_F {
                    total += 1;
                    if total > cap {
                        return Err(Error::EnumerationTooLarge { cap });
                    }
                    counts[s as usize] += 1;
                } else {
                    stack.push((w, s));
                }
            }
        }
        Ok(counts)
    }

    /// Whether no structure of size at most `n` arises from two walks.
    pub fn check_unique_walks(&self, n: u32, cap: usize) -> Result<bool> {
        Ok(self.walk_counts(n, cap)? == self.structure_counts(n, cap)?)
    }

    pub(crate) fn require_budget(&self, n: u32) -> Result<()> {
        if n > self.budget() {
            return Err(Error::BudgetExceeded { requested: n, budget: self.budget() });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digraph::{LocalRule, Role};
    use crate::parts::{composition, render, PartSpec};
    use crate::DEFAULT_ENUM_CAP;

    fn listed(d: &ClassDigraph, n: u32) -> Vec<String> {
        d.enumerate_structures(n, DEFAULT_ENUM_CAP)
            .unwrap()
            .iter()
            .map(|s| render(s).replace(' ', ""))
            .collect()
    }

    #[test]
    fn free_and_carlitz_listings() {
        let free = ClassDigraph::build(PartSpec::Ordinary, LocalRule::Free, 1, 6).unwrap();
        assert_eq!(listed(&free, 3), ["3", "12", "21", "111"]);
        assert_eq!(listed(&free, 0), ["()"]);
        let carlitz = ClassDigraph::build(PartSpec::Ordinary, LocalRule::CarlitzDistance(1), 1, 6).unwrap();
        assert_eq!(listed(&carlitz, 4), ["4", "13", "31", "121"]);
    }

    #[test]
    fn alternating_small_sizes() {
        let d = ClassDigraph::build(PartSpec::Ordinary, LocalRule::Alternating, 2, 6).unwrap();
        assert!(listed(&d, 1).is_empty());
        assert_eq!(listed(&d, 2), ["2"]);
        assert_eq!(listed(&d, 3), ["3", "12", "21"]);
        assert_eq!(listed(&d, 4), ["4", "13", "31", "121"]);
    }

    #[test]
    fn cap_is_enforced() {
        let d = ClassDigraph::build(PartSpec::Ordinary, LocalRule::Free, 1, 10).unwrap();
        assert!(matches!(d.enumerate_structures(10, 100), Err(Error::EnumerationTooLarge { cap: 100 })));
        assert!(d.enumerate_structures(11, 10_000).is_err());
    }

    #[test]
    fn unique_walks_for_builtins() {
        let carlitz = ClassDigraph::build(PartSpec::Ordinary, LocalRule::CarlitzDistance(1), 1, 8).unwrap();
        assert!(carlitz.check_unique_walks(8, DEFAULT_ENUM_CAP).unwrap());
        let alt = ClassDigraph::build(PartSpec::Ordinary, LocalRule::Alternating, 2, 8).unwrap();
        assert!(alt.check_unique_walks(8, DEFAULT_ENUM_CAP).unwrap());
    }

    #[test]
    fn ambiguous_digraph() {
        // "1 2" arises as S(1) R(2) and as eps_s R(1) R(2).
        let d = ClassDigraph::from_arcs(
            PartSpec::Ordinary,
            1,
            4,
            vec![
                (Role::Start, composition(&[1])),
                (Role::Recurrent, composition(&[1])),
                (Role::Recurrent, composition(&[2])),
            ],
            &[(EPS_S, 2), (EPS_S, 3), (2, 4), (3, 4), (4, 3), (4, EPS_F)],
        )
        .unwrap();
        assert!(!d.check_unique_walks(4, DEFAULT_ENUM_CAP).unwrap());
        assert_eq!(listed(&d, 3), ["12"]);
    }
}
