//! The JSON class-definition format.
//!
//! ```json
//! {"v": 1,
//!  "parts": {"kind": "ordinary"},
//!  "rule": {"kind": "carlitz", "distance": 1},
//!  "span": 1, "budget": 40,
//!  "run": {"c": [[1, 0], [2, 0]]}}
//! ```
//!
//! Parts are `[size, color]` pairs. An explicit digraph lists its vertices
//! in order; arc endpoints use id 0 for `eps_s`, 1 for `eps_f` and `i + 2`
//! for `vertices[i]`.

use serde::{Deserialize, Serialize};

use locomp::{ClassDigraph, Letter, LocalRule, Part, PartSpec, Role, RunDescriptor};

use crate::CliError;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassSpecFile {
    pub v: u32,
    pub parts: PartsDef,
    pub rule: RuleDef,
    pub span: u32,
    pub budget: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub run: Option<RunDef>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum PartsDef {
    Ordinary,
    Alphabet { letters: u32 },
    NColor,
    Multiset { colors: u32 },
    Explicit { counts: Vec<u64> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum RuleDef {
    Free,
    Carlitz { distance: u32 },
    Alternating,
    Avoid { patterns: Vec<Vec<[u32; 2]>> },
    Explicit { vertices: Vec<VertexDef>, arcs: Vec<[usize; 2]> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VertexDef {
    pub role: RoleDef,
    pub parts: Vec<[u32; 2]>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RoleDef {
    Start,
    Recurrent,
    Finish,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunDef {
    pub c: Vec<[u32; 2]>,
}

fn part([size, color]: [u32; 2]) -> Part {
    Part::new(size, color)
}

impl PartsDef {
    pub fn to_spec(&self) -> PartSpec {
        match self {
            PartsDef::Ordinary => PartSpec::Ordinary,
            PartsDef::Alphabet { letters } => PartSpec::Alphabet(*letters),
            PartsDef::NColor => PartSpec::NColor,
            PartsDef::Multiset { colors } => PartSpec::MultisetColor(*colors),
            PartsDef::Explicit { counts } => PartSpec::Explicit(counts.clone()),
        }
    }
}

impl RuleDef {
    /// The built-in rule, or `None` for an explicit digraph.
    pub fn to_rule(&self) -> Option<LocalRule> {
        match self {
            RuleDef::Free => Some(LocalRule::Free),
            RuleDef::Carlitz { distance } => Some(LocalRule::CarlitzDistance(*distance)),
            RuleDef::Alternating => Some(LocalRule::Alternating),
            RuleDef::Avoid { patterns } => Some(LocalRule::AvoidPatterns(
                patterns.iter().map(|p| p.iter().copied().map(part).collect()).collect(),
            )),
            RuleDef::Explicit { .. } => None,
        }
    }
}

impl ClassSpecFile {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let spec: ClassSpecFile =
            serde_json::from_str(text).map_err(|e| CliError::Spec(format!("malformed spec file: {e}")))?;
        if spec.v != SCHEMA_VERSION {
            return Err(CliError::Spec(format!("unsupported schema version {} (expected {SCHEMA_VERSION})", spec.v)));
        }
        Ok(spec)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spec files always serialize")
    }

    pub fn digraph(&self) -> Result<ClassDigraph, CliError> {
        let spec = self.parts.to_spec();
        let d = match &self.rule {
            RuleDef::Explicit { vertices, arcs } => {
                let vertices = vertices
                    .iter()
                    .map(|v| {
                        let role = match v.role {
                            RoleDef::Start => Role::Start,
                            RoleDef::Recurrent => Role::Recurrent,
                            RoleDef::Finish => Role::Finish,
                        };
                        (role, v.parts.iter().map(|&p| Letter::Atom(part(p))).collect())
                    })
                    .collect();
                let arcs: Vec<(usize, usize)> = arcs.iter().map(|&[a, b]| (a, b)).collect();
                ClassDigraph::from_arcs(spec, self.span, self.budget, vertices, &arcs)?
            }
            rule => ClassDigraph::build(spec, rule.to_rule().expect("built-in rule"), self.span, self.budget)?,
        };
        Ok(d)
    }

    pub fn run_descriptor(&self) -> Result<Option<RunDescriptor>, CliError> {
        self.run
            .as_ref()
            .map(|r| RunDescriptor::new(r.c.iter().copied().map(part).collect()).map_err(CliError::from))
            .transpose()
    }
}
