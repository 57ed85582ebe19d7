use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{Extension, ExtensionMode, Model};
use crate::syntax::{Name, Prop, SyntaxError};

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("malformed model document: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unknown mode `{0}`")]
    Mode(String),
    #[error("{context}: undeclared {kind} `{id}`")]
    UnknownId {
        kind: &'static str,
        id: String,
        context: String,
    },
    #[error("duplicate {kind} id `{id}`")]
    DuplicateId { kind: &'static str, id: String },
    #[error("bad {kind} id `{id}`: {source}")]
    BadId {
        kind: &'static str,
        id: String,
        source: SyntaxError,
    },
    #[error("extension: {0}")]
    Extension(String),
    #[error("invalid model: {}", .0.join("; "))]
    Invalid(Vec<String>),
}

/// The JSON form of a model.
///
/// ```json
/// { "mode": "rigid",
///   "worlds": ["w", "u"], "agents": ["a", "b"], "names": ["Ann"], "props": ["p"],
///   "indist": { "a": [["w", "u"]], "b": [["w"], ["u"]] },
///   "extension": { "w": { "Ann": "a" }, "u": { "Ann": "b" } },
///   "valuation": { "p": [["w", "a"], ["u", "b"]] } }
/// ```
///
/// In agent-specific mode `extension` maps world, then agent, then name.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelDoc {
    pub mode: String,
    pub worlds: Vec<String>,
    pub agents: Vec<String>,
    pub names: Vec<String>,
    pub props: Vec<String>,
    pub indist: BTreeMap<String, Vec<Vec<String>>>,
    pub extension: serde_json::Value,
    pub valuation: BTreeMap<String, Vec<(String, String)>>,
}

struct Index<'a> {
    kind: &'static str,
    map: HashMap<&'a str, usize>,
}

impl<'a> Index<'a> {
    fn new(kind: &'static str, ids: &'a [String]) -> Result<Self, ModelError> {
        let mut map = HashMap::new();
        for (i, id) in ids.iter().enumerate() {
            if map.insert(id.as_str(), i).is_some() {
                return Err(ModelError::DuplicateId {
                    kind,
                    id: id.clone(),
                });
            }
        }
        Ok(Index { kind, map })
    }

    fn get(&self, id: &str, context: impl Into<String>) -> Result<usize, ModelError> {
        self.map.get(id).copied().ok_or_else(|| ModelError::UnknownId {
            kind: self.kind,
            id: id.to_string(),
            context: context.into(),
        })
    }
}

fn object<'v>(
    v: &'v serde_json::Value,
    at: &str,
) -> Result<&'v serde_json::Map<String, serde_json::Value>, ModelError> {
    v.as_object()
        .ok_or_else(|| ModelError::Extension(format!("{at}: expected an object")))
}

impl ModelDoc {
    pub fn from_json(text: &str) -> Result<Self, ModelError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("model documents always serialize")
    }

    /// Resolves ids to indices and validates the result.
    pub fn to_model(&self) -> Result<Model, ModelError> {
        let mode: ExtensionMode = self.mode.parse().map_err(|_| ModelError::Mode(self.mode.clone()))?;
        let worlds = Index::new("world", &self.worlds)?;
        let agents = Index::new("agent", &self.agents)?;
        let names_idx = Index::new("name", &self.names)?;
        let props_idx = Index::new("prop", &self.props)?;

        let names = self
            .names
            .iter()
            .map(|n| Name::new(n).map_err(|source| ModelError::BadId { kind: "name", id: n.clone(), source }))
            .collect::<Result<Vec<_>, _>>()?;
        let props = self
            .props
            .iter()
            .map(|p| Prop::new(p).map_err(|source| ModelError::BadId { kind: "prop", id: p.clone(), source }))
            .collect::<Result<Vec<_>, _>>()?;

        let mut indist = vec![Vec::new(); self.agents.len()];
        for (agent, blocks) in &self.indist {
            let a = agents.get(agent, "indist")?;
            indist[a] = blocks
                .iter()
                .map(|b| {
                    b.iter()
                        .map(|w| worlds.get(w, format!("indist[{agent}]")))
                        .collect::<Result<Vec<_>, _>>()
                })
                .collect::<Result<_, _>>()?;
        }

        let fill = |row: &serde_json::Map<String, serde_json::Value>, at: &str| -> Result<Vec<usize>, ModelError> {
            let mut out = vec![usize::MAX; self.names.len()];
            for (name, referent) in row {
                let n = names_idx.get(name, at)?;
                let r = referent
                    .as_str()
                    .ok_or_else(|| ModelError::Extension(format!("{at}[{name}]: expected an agent id")))?;
                out[n] = agents.get(r, format!("{at}[{name}]"))?;
            }
            if let Some(n) = out.iter().position(|&r| r == usize::MAX) {
                return Err(ModelError::Extension(format!("{at}: no referent for name `{}`", self.names[n])));
            }
            Ok(out)
        };

        let top = object(&self.extension, "extension")?;
        for w in top.keys() {
            worlds.get(w, "extension")?;
        }
        let world_entry = |w: &String| {
            top.get(w)
                .ok_or_else(|| ModelError::Extension(format!("missing world `{w}`")))
        };
        let extension = match mode {
            ExtensionMode::Rigid => Extension::Rigid(
                self.worlds
                    .iter()
                    .map(|w| fill(object(world_entry(w)?, w)?, &format!("[{w}]")))
                    .collect::<Result<_, _>>()?,
            ),
            ExtensionMode::AgentSpecific => Extension::AgentSpecific(
                self.worlds
                    .iter()
                    .map(|w| {
                        let per_agent = object(world_entry(w)?, w)?;
                        for a in per_agent.keys() {
                            agents.get(a, format!("extension[{w}]"))?;
                        }
                        self.agents
                            .iter()
                            .map(|a| {
                                let row = per_agent.get(a).ok_or_else(|| {
                                    ModelError::Extension(format!("[{w}]: missing agent `{a}`"))
                                })?;
                                fill(object(row, a)?, &format!("[{w}][{a}]"))
                            })
                            .collect::<Result<Vec<_>, _>>()
                    })
                    .collect::<Result<_, _>>()?,
            ),
        };

        let mut valuation = vec![Vec::new(); self.props.len()];
        for (prop, pairs) in &self.valuation {
            let p = props_idx.get(prop, "valuation")?;
            for (w, a) in pairs {
                let ctx = format!("valuation[{prop}]");
                valuation[p].push((worlds.get(w, ctx.clone())?, agents.get(a, ctx)?));
            }
        }

        let model = Model {
            worlds: self.worlds.clone(),
            agents: self.agents.clone(),
            names,
            props,
            indist,
            extension,
            valuation,
        };
        let violations = model.validate();
        if violations.is_empty() {
            Ok(model)
        } else {
            Err(ModelError::Invalid(violations))
        }
    }

    pub fn from_model(m: &Model) -> Self {
        let name_map = |row: &[usize]| -> serde_json::Value {
            m.names
                .iter()
                .zip(row)
                .map(|(n, &r)| (n.to_string(), serde_json::Value::String(m.agents[r].clone())))
                .collect::<serde_json::Map<_, _>>()
                .into()
        };
        let extension: serde_json::Map<String, serde_json::Value> = match &m.extension {
            Extension::Rigid(t) => m.worlds.iter().cloned().zip(t.iter().map(|row| name_map(row))).collect(),
            Extension::AgentSpecific(t) => m
                .worlds
                .iter()
                .cloned()
                .zip(t.iter().map(|per_agent| {
                    m.agents
                        .iter()
                        .cloned()
                        .zip(per_agent.iter().map(|row| name_map(row)))
                        .collect::<serde_json::Map<_, _>>()
                        .into()
                }))
                .collect(),
        };
        ModelDoc {
            mode: m.mode().as_str().to_string(),
            worlds: m.worlds.clone(),
            agents: m.agents.clone(),
            names: m.names.iter().map(|n| n.to_string()).collect(),
            props: m.props.iter().map(|p| p.to_string()).collect(),
            indist: m
                .agents
                .iter()
                .zip(&m.indist)
                .map(|(a, blocks)| {
                    (
                        a.clone(),
                        blocks
                            .iter()
                            .map(|b| b.iter().map(|&w| m.worlds[w].clone()).collect())
                            .collect(),
                    )
                })
                .collect(),
            extension: extension.into(),
            valuation: m
                .props
                .iter()
                .zip(&m.valuation)
                .map(|(p, pairs)| {
                    (
                        p.to_string(),
                        pairs
                            .iter()
                            .map(|&(w, a)| (m.worlds[w].clone(), m.agents[a].clone()))
                            .collect(),
                    )
                })
                .collect(),
        }
    }
}

impl Model {
    pub fn from_json(text: &str) -> Result<Model, ModelError> {
        ModelDoc::from_json(text)?.to_model()
    }

    pub fn to_json(&self) -> String {
        ModelDoc::from_model(self).to_json()
    }
}
