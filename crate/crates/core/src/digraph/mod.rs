//! Size-truncated class digraphs.
//!
//! A structure of the class is the concatenation of the vertex contents along
//! a walk from `eps_s` to `eps_f`. Only vertices of total size at most the
//! budget are materialized; no structure of size at most the budget can pass
//! through a larger one, so all counts up to the budget are exact.
//!
//! Arcs are not stored. Each vertex carries a tail key (what its end exposes)
//! and a head key (what its beginning exposes); for every head key the set of
//! compatible tail keys is stored once, as a list or as a complement list,
//! whichever is shorter.

mod analysis;
mod rules;
mod walks;

use std::collections::HashMap;
use std::hash::Hash;

pub use analysis::{Condition, Regularity, Validation};
pub use rules::LocalRule;
pub(crate) use rules::EdgeSig;

use crate::parts::{size_of, Letter, PartSpec};
use crate::{Error, Result};

/// Id of the empty start vertex.
pub const EPS_S: usize = 0;
/// Id of the empty finish vertex.
pub const EPS_F: usize = 1;

/// No key: `eps_f` has no out-arcs and `eps_s` no in-arcs.
pub(crate) const NO_KEY: u32 = u32::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Role {
    Start,
    Recurrent,
    Finish,
}

#[derive(Debug, Clone)]
pub struct Vertex {
    pub role: Role,
    pub letters: Vec<Letter>,
    pub size: u32,
    pub(crate) tail: u32,
    pub(crate) head: u32,
}

/// Tail keys compatible with one head key.
#[derive(Debug, Clone)]
pub(crate) enum TailSet {
    Only(Vec<u32>),
    AllBut(Vec<u32>),
}

impl TailSet {
    pub(crate) fn contains(&self, tail: u32) -> bool {
        match self {
            TailSet::Only(list) => list.binary_search(&tail).is_ok(),
            TailSet::AllBut(list) => tail != NO_KEY && list.binary_search(&tail).is_err(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ClassDigraph {
    spec: PartSpec,
    rule: Option<LocalRule>,
    span: u32,
    budget: u32,
    vertices: Vec<Vertex>,
    tails: usize,
    compat: Vec<TailSet>,
}

impl ClassDigraph {
    /// The digraph of a built-in class, truncated at `budget`.
    pub fn build(spec: PartSpec, rule: LocalRule, span: u32, budget: u32) -> Result<Self> {
        spec.validate()?;
        if span == 0 {
            return Err(Error::InvalidSpec("span must be positive".into()));
        }
        if budget < span {
            return Err(Error::InvalidSpec(format!(
                "budget {budget} is below the span {span}: no recurrent vertex fits"
            )));
        }
        rule.check_span(span, &spec)?;
        let mut d = match rule {
            LocalRule::Alternating => alternating(budget),
            _ => generic(&spec, &rule, span, budget)?,
        };
        d.spec = spec;
        d.rule = Some(rule);
        d.span = span;
        d.budget = budget;
        Ok(d)
    }

    /// A digraph given by explicit vertices and arcs. Ids `EPS_S` and
    /// `EPS_F` are implicit; `vertices[i]` receives id `i + 2`.
    pub fn from_arcs(
        spec: PartSpec,
        span: u32,
        budget: u32,
        vertices: Vec<(Role, Vec<Letter>)>,
        arcs: &[(usize, usize)],
    ) -> Result<Self> {
        spec.validate()?;
        if vertices.iter().any(|(_, letters)| letters.is_empty()) {
            return Err(Error::InvalidSpec("only eps_s and eps_f may be empty".into()));
        }
        let total = vertices.len() + 2;
        if let Some(&(a, b)) = arcs.iter().find(|&&(a, b)| a >= total || b >= total) {
            return Err(Error::IndexOutOfRange { index: a.max(b), len: total });
        }
        let mut raw = vec![(Role::Start, Vec::new()), (Role::Finish, Vec::new())];
        raw.extend(vertices);
        let arcs: std::collections::HashSet<(usize, usize)> = arcs.iter().copied().collect();
        let mut d = assemble(
            raw,
            |id, _| (id != EPS_F).then_some(id),
            |id, _| (id != EPS_S).then_some(id),
            |a, b| arcs.contains(&(*a, *b)),
        );
        d.spec = spec;
        d.span = span;
        d.budget = budget;
        Ok(d)
    }

    pub fn spec(&self) -> &PartSpec {
        &self.spec
    }

    /// The generating rule; `None` for digraphs given by explicit arcs.
    pub fn rule(&self) -> Option<&LocalRule> {
        self.rule.as_ref()
    }

    pub fn span(&self) -> u32 {
        self.span
    }

    pub fn budget(&self) -> u32 {
        self.budget
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn vertex(&self, id: usize) -> &Vertex {
        &self.vertices[id]
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Ids of the vertices with role `role`, in id order.
    pub fn with_role(&self, role: Role) -> Vec<usize> {
        (0..self.len()).filter(|&v| self.vertices[v].role == role).collect()
    }

    pub fn has_arc(&self, from: usize, to: usize) -> bool {
        let (t, h) = (self.vertices[from].tail, self.vertices[to].head);
        t != NO_KEY && h != NO_KEY && self.compat[h as usize].contains(t)
    }

    /// Out-neighbours of `from` in id order.
    pub fn successors(&self, from: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(move |&to| self.has_arc(from, to))
    }

    pub(crate) fn tail_count(&self) -> usize {
        self.tails
    }

    pub(crate) fn compat(&self) -> &[TailSet] {
        &self.compat
    }
}

/// Intern tail and head keys and tabulate their compatibility.
fn assemble<T: Hash + Eq + Clone, H: Hash + Eq + Clone>(
    raw: Vec<(Role, Vec<Letter>)>,
    tail_key: impl Fn(usize, &(Role, Vec<Letter>)) -> Option<T>,
    head_key: impl Fn(usize, &(Role, Vec<Letter>)) -> Option<H>,
    arc: impl Fn(&T, &H) -> bool,
) -> ClassDigraph {
    fn intern<K: Hash + Eq + Clone>(key: Option<K>, ids: &mut HashMap<K, u32>, keys: &mut Vec<K>) -> u32 {
        match key {
            None => NO_KEY,
            Some(k) => *ids.entry(k.clone()).or_insert_with(|| {
                keys.push(k);
                keys.len() as u32 - 1
            }),
        }
    }
    let (mut tail_ids, mut tails) = (HashMap::new(), Vec::new());
    let (mut head_ids, mut heads) = (HashMap::new(), Vec::new());
    let vertices: Vec<Vertex> = raw
        .iter()
        .enumerate()
        .map(|(id, v)| Vertex {
            role: v.0,
            size: size_of(&v.1),
            tail: intern(tail_key(id, v), &mut tail_ids, &mut tails),
            head: intern(head_key(id, v), &mut head_ids, &mut heads),
            letters: v.1.clone(),
        })
        .collect();
    let compat = heads
        .iter()
        .map(|h| {
            let (yes, no): (Vec<u32>, Vec<u32>) = (0..tails.len() as u32).partition(|&t| arc(&tails[t as usize], h));
            if yes.len() <= no.len() { TailSet::Only(yes) } else { TailSet::AllBut(no) }
        })
        .collect();
    ClassDigraph {
        spec: PartSpec::Ordinary,
        rule: None,
        span: 0,
        budget: 0,
        vertices,
        tails: tails.len(),
        compat,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct TailKey {
    role: Role,
    edge: EdgeSig,
    end_ok: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct HeadKey {
    role: Role,
    edge: EdgeSig,
    start_ok: bool,
    eps: bool,
}

/// `S = {eps_s}`; `R` and `F` are the admissible sequences of length `m` and
/// below `m`; arcs join blocks whose concatenation is admissible.
fn generic(spec: &PartSpec, rule: &LocalRule, span: u32, budget: u32) -> Result<ClassDigraph> {
    let mut alphabet: Vec<Letter> = spec.parts_up_to(budget)?.into_iter().map(Letter::Atom).collect();
    if let LocalRule::RunAugmented { run, .. } = rule {
        alphabet.extend((1..=budget / run.size()).map(|k| Letter::Run { k, unit: run.size() }));
    }
    alphabet.sort_by_key(|l| (l.size(), *l));

    let mut raw = vec![(Role::Start, Vec::new()), (Role::Finish, Vec::new())];
    let mut seq = Vec::new();
    extend_blocks(rule, &alphabet, span as usize, budget, &mut seq, 0, &mut raw);

    let empty = EdgeSig::default();
    let tail_key = |id: usize, (role, v): &(Role, Vec<Letter>)| match (id, role) {
        (EPS_F, _) => None,
        (_, Role::Recurrent) => Some(TailKey {
            role: Role::Recurrent,
            edge: rule.tail_edge(v),
            end_ok: rule.admits(v, false, true),
        }),
        _ => Some(TailKey { role: *role, edge: empty.clone(), end_ok: false }),
    };
    let head_key = |id: usize, (role, v): &(Role, Vec<Letter>)| match id {
        EPS_S => None,
        _ => Some(HeadKey {
            role: *role,
            edge: rule.head_edge(v),
            start_ok: rule.admits(v, true, *role == Role::Finish),
            eps: id == EPS_F,
        }),
    };
    let arc = |t: &TailKey, h: &HeadKey| match (t.role, h.role) {
        (_, Role::Start) => false,
        (Role::Start, _) => h.start_ok,
        (Role::Finish, _) => h.eps,
        (Role::Recurrent, Role::Finish) if h.eps => t.end_ok,
        (Role::Recurrent, _) => rule.crosses(&t.edge, &h.edge),
    };
    Ok(assemble(raw, tail_key, head_key, arc))
}

/// Depth-first generation of admissible blocks of length at most `span`.
fn extend_blocks(
    rule: &LocalRule,
    alphabet: &[Letter],
    span: usize,
    budget: u32,
    seq: &mut Vec<Letter>,
    size: u32,
    out: &mut Vec<(Role, Vec<Letter>)>,
) {
    for &l in alphabet {
        if size + l.size() > budget {
            break;
        }
        seq.push(l);
        if rule.admits(seq, false, false) {
            if seq.len() == span {
                out.push((Role::Recurrent, seq.clone()));
            } else {
                if rule.admits(seq, false, true) {
                    out.push((Role::Finish, seq.clone()));
                }
                extend_blocks(rule, alphabet, span, budget, seq, size + l.size(), out);
            }
        }
        seq.pop();
    }
}

/// The alternating digraph exactly as specified for span 2: `S` holds
/// `eps_s` and every singleton, `R` the pairs `i > j`, and `F` holds `eps_f`
/// and the singletons other than `1`.
fn alternating(budget: u32) -> ClassDigraph {
    use crate::parts::composition;
    let mut raw = vec![(Role::Start, Vec::new()), (Role::Finish, Vec::new())];
    raw.extend((1..=budget).map(|i| (Role::Start, composition(&[i]))));
    for i in 2..=budget {
        for j in 1..i.min(budget - i + 1) {
            raw.push((Role::Recurrent, composition(&[i, j])));
        }
    }
    raw.extend((2..=budget).map(|j| (Role::Finish, composition(&[j]))));

    // Keys are (role, boundary part size), with 0 for the empty vertices.
    let first = |v: &[Letter]| v.first().map_or(0, |l| l.size());
    let last = |v: &[Letter]| v.last().map_or(0, |l| l.size());
    let tail_key = |id: usize, (role, v): &(Role, Vec<Letter>)| match role {
        _ if id == EPS_F => None,
        Role::Finish => Some((Role::Finish, 0)),
        _ => Some((*role, last(v))),
    };
    let head_key = |id: usize, (role, v): &(Role, Vec<Letter>)| (id != EPS_S).then(|| (*role, first(v)));
    let arc = |&(tr, t): &(Role, u32), &(hr, h): &(Role, u32)| match (tr, hr) {
        (Role::Start, _) if t == 0 => true,
        (Role::Start, Role::Recurrent) => t < h,
        (Role::Start, Role::Finish) => h != 0 && t < h,
        (Role::Recurrent, Role::Recurrent) => t < h,
        (Role::Recurrent, Role::Finish) => h == 0 || t < h,
        (Role::Finish, Role::Finish) => h == 0,
        _ => false,
    };
    assemble(raw, tail_key, head_key, arc)
}
