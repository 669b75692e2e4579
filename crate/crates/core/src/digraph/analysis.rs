//! Structural checks on a class digraph: the start/finish/recurrent
//! conditions, strong connectivity of the recurrent core, and regularity.

use std::collections::VecDeque;

use num_integer::Integer;
use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;

use super::{ClassDigraph, Role, EPS_F, EPS_S};
use crate::parts::render;
use crate::{Error, Result};

/// Recurrent cores up to this size get an explicit component decomposition
/// as a failure witness.
const SCC_WITNESS_LIMIT: usize = 4000;
/// Arc budget for analyses that materialize the recurrent core.
const ARC_LIMIT: usize = 50_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Condition {
    pub pass: bool,
    /// Empty on success, otherwise a human-readable witness.
    pub detail: String,
}

impl Condition {
    fn ok() -> Self {
        Condition { pass: true, detail: String::new() }
    }

    fn fail(detail: String) -> Self {
        Condition { pass: false, detail }
    }
}

#[derive(Debug, Clone)]
pub struct Validation {
    /// `eps_s` reaches every start vertex; some start vertex reaches `R`.
    pub a: Condition,
    /// Every finish vertex reaches `eps_f`; some recurrent vertex reaches `F`.
    pub b: Condition,
    /// `D_R` is strongly connected with at least two vertices and `S ∪ F` is acyclic.
    pub c: Condition,
    /// Strongly connected components of `D_R` (vertex ids), when `c` fails
    /// and the core is small enough to decompose.
    pub components: Option<Vec<Vec<usize>>>,
}

impl Validation {
    pub fn passed(&self) -> bool {
        self.a.pass && self.b.pass && self.c.pass
    }
}

/// Regularity certificates on the truncated core. `cycle_gcd` is 0 when
/// `D_R` has no cycle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Regularity {
    pub cycle_gcd: u64,
    pub size_aperiodic: bool,
    /// `(v_0, v_k, k)` whose walk sizes have coprime differences.
    pub witness: Option<(usize, usize, usize)>,
}

impl ClassDigraph {
    pub fn validate(&self) -> Validation {
        let start = self.with_role(Role::Start);
        let rec = self.with_role(Role::Recurrent);
        let fin = self.with_role(Role::Finish);
        let name = |v: usize| format!("#{v} ({})", render(&self.vertex(v).letters));

        let a = match start.iter().find(|&&v| v != EPS_S && !self.has_arc(EPS_S, v)) {
            Some(&v) => Condition::fail(format!("no arc from eps_s to start vertex {}", name(v))),
            None if !self.any_arc(&start, &rec) => Condition::fail("no arc from S to R".into()),
            None => Condition::ok(),
        };
        let b = match fin.iter().find(|&&v| v != EPS_F && !self.has_arc(v, EPS_F)) {
            Some(&v) => Condition::fail(format!("no arc from finish vertex {} to eps_f", name(v))),
            None if !self.any_arc(&rec, &fin) => Condition::fail("no arc from R to F".into()),
            None => Condition::ok(),
        };

        let mut components = None;
        let c = if rec.len() < 2 {
            Condition::fail(format!("|R| = {} < 2", rec.len()))
        } else if let Some(cycle) = self.cycle_in(&[start, fin].concat()) {
            let path: Vec<String> = cycle.into_iter().map(name).collect();
            Condition::fail(format!("cycle in S ∪ F: {}", path.join(" -> ")))
        } else if !self.strongly_connected(&rec) {
            if rec.len() <= SCC_WITNESS_LIMIT {
                components = Some(self.recurrent_components(&rec));
            }
            Condition::fail("D_R is not strongly connected".into())
        } else {
            Condition::ok()
        };
        Validation { a, b, c, components }
    }

    /// Cycle-length gcd of `D_R` and a size-aperiodicity witness over walk
    /// lengths `1..=kmax`.
    pub fn check_regular(&self, kmax: usize) -> Result<Regularity> {
        let rec = self.with_role(Role::Recurrent);
        let adj = self.recurrent_adjacency(&rec)?;
        let graph = DiGraph::<(), ()>::from_edges(
            adj.iter().enumerate().flat_map(|(u, out)| out.iter().map(move |&v| (u as u32, v as u32))),
        );
        let mut comp = vec![usize::MAX; rec.len()];
        for (c, members) in tarjan_scc(&graph).into_iter().enumerate() {
            for v in members {
                comp[v.index()] = c;
            }
        }

        // Period of each component from BFS levels: gcd of level(u) + 1 - level(v).
        let mut cycle_gcd = 0u64;
        let mut level = vec![u64::MAX; rec.len()];
        for root in 0..rec.len() {
            if level[root] != u64::MAX {
                continue;
            }
            level[root] = 0;
            let mut queue = VecDeque::from([root]);
            while let Some(u) = queue.pop_front() {
                for &v in adj[u].iter().filter(|&&v| comp[v] == comp[u]) {
                    if level[v] == u64::MAX {
                        level[v] = level[u] + 1;
                        queue.push_back(v);
                    } else {
                        cycle_gcd = cycle_gcd.gcd(&(level[u] + 1).abs_diff(level[v]));
                    }
                }
            }
        }

        let sizes: Vec<u64> = rec.iter().map(|&v| self.vertex(v).size as u64).collect();
        let mut witness = None;
        'search: for v0 in 0..rec.len() {
            // Per end vertex: one walk size and the gcd of differences so far.
            let mut state: Vec<Option<(u64, u64)>> = vec![None; rec.len()];
            state[v0] = Some((sizes[v0], 0));
            for k in 1..=kmax {
                let mut next: Vec<Option<(u64, u64)>> = vec![None; rec.len()];
                for (u, s) in state.iter().enumerate() {
                    let Some((base, g)) = *s else { continue };
                    for &w in &adj[u] {
                        let cand = base + sizes[w];
                        next[w] = Some(match next[w] {
                            None => (cand, g),
                            Some((b, h)) => (b, h.gcd(&g).gcd(&b.abs_diff(cand))),
                        });
                    }
                }
                if let Some(w) = next.iter().position(|s| matches!(s, Some((_, 1)))) {
                    witness = Some((rec[v0], rec[w], k));
                    break 'search;
                }
                state = next;
            }
        }
        Ok(Regularity { cycle_gcd, size_aperiodic: witness.is_some(), witness })
    }

    /// Whether some arc leads from `from` to `to`, decided per key pair.
    fn any_arc(&self, from: &[usize], to: &[usize]) -> bool {
        let mut tails: Vec<u32> = from.iter().map(|&v| self.vertex(v).tail).collect();
        let mut heads: Vec<u32> = to.iter().map(|&v| self.vertex(v).head).collect();
        tails.sort_unstable();
        tails.dedup();
        heads.sort_unstable();
        heads.dedup();
        heads
            .iter()
            .filter(|&&h| h != super::NO_KEY)
            .any(|&h| tails.iter().any(|&t| self.compat()[h as usize].contains(t)))
    }

    /// A directed cycle inside `set`, if any.
    fn cycle_in(&self, set: &[usize]) -> Option<Vec<usize>> {
        let adj: Vec<Vec<usize>> = set
            .iter()
            .map(|&u| set.iter().enumerate().filter(|&(_, &v)| self.has_arc(u, v)).map(|(j, _)| j).collect())
            .collect();
        // 0 unvisited, 1 on stack, 2 done.
        let mut mark = vec![0u8; set.len()];
        let mut stack: Vec<usize> = Vec::new();
        fn dfs(u: usize, adj: &[Vec<usize>], mark: &mut [u8], stack: &mut Vec<usize>) -> Option<Vec<usize>> {
            mark[u] = 1;
            stack.push(u);
            for &v in &adj[u] {
                if mark[v] == 1 {
                    let at = stack.iter().position(|&x| x == v).unwrap();
                    let mut cycle = stack[at..].to_vec();
                    cycle.push(v);
                    return Some(cycle);
                }
                if mark[v] == 0 {
                    if let Some(c) = dfs(v, adj, mark, stack) {
                        return Some(c);
                    }
                }
            }
            stack.pop();
            mark[u] = 2;
            None
        }
        (0..set.len())
            .find_map(|u| if mark[u] == 0 { dfs(u, &adj, &mut mark, &mut stack) } else { None })
            .map(|c| c.into_iter().map(|j| set[j]).collect())
    }

    /// Forward and backward reachability from one recurrent vertex, expanding
    /// each tail and head key once.
    fn strongly_connected(&self, rec: &[usize]) -> bool {
        let heads = self.compat().len();
        let tails = self.tail_count();
        let mut by_tail = vec![Vec::new(); tails];
        let mut by_head = vec![Vec::new(); heads];
        for (i, &v) in rec.iter().enumerate() {
            by_tail[self.vertex(v).tail as usize].push(i);
            by_head[self.vertex(v).head as usize].push(i);
        }
        let reach = |forward: bool| {
            let mut seen = vec![false; rec.len()];
            let mut tail_done = vec![false; tails];
            let mut head_done = vec![false; heads];
            let mut queue = vec![0usize];
            seen[0] = true;
            let mut count = 1;
            while let Some(i) = queue.pop() {
                let v = self.vertex(rec[i]);
                let next: Vec<usize> = if forward {
                    let t = v.tail as usize;
                    if std::mem::replace(&mut tail_done[t], true) {
                        continue;
                    }
                    let mut out = Vec::new();
                    for h in 0..heads {
                        if !head_done[h] && self.compat()[h].contains(t as u32) {
                            head_done[h] = true;
                            out.extend_from_slice(&by_head[h]);
                        }
                    }
                    out
                } else {
                    let h = v.head as usize;
                    if std::mem::replace(&mut head_done[h], true) {
                        continue;
                    }
                    let mut out = Vec::new();
                    for t in 0..tails {
                        if !tail_done[t] && self.compat()[h].contains(t as u32) {
                            tail_done[t] = true;
                            out.extend_from_slice(&by_tail[t]);
                        }
                    }
                    out
                };
                for j in next {
                    if !seen[j] {
                        seen[j] = true;
                        count += 1;
                        queue.push(j);
                    }
                }
            }
            count == rec.len()
        };
        reach(true) && reach(false)
    }

    fn recurrent_components(&self, rec: &[usize]) -> Vec<Vec<usize>> {
        let Ok(adj) = self.recurrent_adjacency(rec) else { return Vec::new() };
        let mut graph = DiGraph::<(), ()>::new();
        let nodes: Vec<_> = rec.iter().map(|_| graph.add_node(())).collect();
        for (u, out) in adj.iter().enumerate() {
            for &v in out {
                graph.add_edge(nodes[u], nodes[v], ());
            }
        }
        let mut comps: Vec<Vec<usize>> = tarjan_scc(&graph)
            .into_iter()
            .map(|c| {
                let mut ids: Vec<usize> = c.into_iter().map(|n| rec[n.index()]).collect();
                ids.sort_unstable();
                ids
            })
            .collect();
        comps.sort();
        comps
    }

    /// Out-neighbour lists of `D_R`, as indices into `rec`.
    fn recurrent_adjacency(&self, rec: &[usize]) -> Result<Vec<Vec<usize>>> {
        let mut by_head = vec![Vec::new(); self.compat().len()];
        for (i, &v) in rec.iter().enumerate() {
            by_head[self.vertex(v).head as usize].push(i);
        }
        let mut total = 0usize;
        rec.iter()
            .map(|&u| {
                let t = self.vertex(u).tail;
                let mut out: Vec<usize> = (0..by_head.len())
                    .filter(|&h| self.compat()[h].contains(t))
                    .flat_map(|h| by_head[h].iter().copied())
                    .collect();
                out.sort_unstable();
                total += out.len();
                if total > ARC_LIMIT {
                    return Err(Error::EnumerationTooLarge { cap: ARC_LIMIT });
                }
                Ok(out)
            })
            .collect()
    }
}
