//! Finite epistemic models with extensions.
//!
//! Worlds, agents, names and propositions are declared in order; every
//! other component refers to them by index into those lists. The
//! indistinguishability relation of each agent is stored as a partition
//! of the worlds.

mod doc;
mod fixtures;
mod random;
mod search;

use std::collections::HashSet;
use std::fmt;

pub use doc::{ModelDoc, ModelError};
pub use fixtures::{fixture, Fixture, UnknownFixture};
pub use random::{random_model, random_partition, ParamsError, RandomModelParams};
pub use search::{
    search_agent_specific_counterexample, SearchBounds, SearchOutcome, FAMILY_SHAPE, SEARCH_SIGNATURE, SEARCH_TARGET,
};

use crate::syntax::{Name, Prop};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ExtensionMode {
    Rigid,
    AgentSpecific,
}

impl ExtensionMode {
    pub fn as_str(self) -> &'static str {
        match self {
            ExtensionMode::Rigid => "rigid",
            ExtensionMode::AgentSpecific => "agent-specific",
        }
    }
}

impl fmt::Display for ExtensionMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for ExtensionMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "rigid" => Ok(ExtensionMode::Rigid),
            "agent-specific" => Ok(ExtensionMode::AgentSpecific),
            other => Err(format!("unknown mode `{other}` (expected rigid or agent-specific)")),
        }
    }
}

/// The extension function, indexed by declaration positions.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Extension {
    /// `table[world][name]` is the referent.
    Rigid(Vec<Vec<usize>>),
    /// `table[world][agent][name]` is the referent for that agent.
    AgentSpecific(Vec<Vec<Vec<usize>>>),
}

impl Extension {
    pub fn mode(&self) -> ExtensionMode {
        match self {
            Extension::Rigid(_) => ExtensionMode::Rigid,
            Extension::AgentSpecific(_) => ExtensionMode::AgentSpecific,
        }
    }
}

/// An epistemic model with extensions.
///
/// Construction does not validate; call [`Model::validate`] (loading from
/// JSON, the fixtures and the generator all do). Evaluation assumes a
/// valid model.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Model {
    pub worlds: Vec<String>,
    pub agents: Vec<String>,
    pub names: Vec<Name>,
    pub props: Vec<Prop>,
    /// `indist[agent]` lists the blocks of that agent's partition.
    pub indist: Vec<Vec<Vec<usize>>>,
    pub extension: Extension,
    /// `valuation[prop]` lists the `(world, agent)` pairs where it holds.
    pub valuation: Vec<Vec<(usize, usize)>>,
}

/// A world–agent evaluation point, by index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PointedQuery {
    pub world: usize,
    pub agent: usize,
}

impl Model {
    pub fn mode(&self) -> ExtensionMode {
        self.extension.mode()
    }

    pub fn n_points(&self) -> usize {
        self.worlds.len() * self.agents.len()
    }

    /// Row-major position of a point: `world * |agents| + agent`.
    pub fn point_index(&self, q: PointedQuery) -> usize {
        q.world * self.agents.len() + q.agent
    }

    pub fn point(&self, index: usize) -> PointedQuery {
        let n = self.agents.len();
        PointedQuery {
            world: index / n,
            agent: index % n,
        }
    }

    pub fn points(&self) -> impl Iterator<Item = PointedQuery> + '_ {
        (0..self.n_points()).map(|i| self.point(i))
    }

    pub fn point_label(&self, q: PointedQuery) -> String {
        format!("{}:{}", self.worlds[q.world], self.agents[q.agent])
    }

    pub fn world_index(&self, id: &str) -> Option<usize> {
        self.worlds.iter().position(|w| w == id)
    }

    pub fn agent_index(&self, id: &str) -> Option<usize> {
        self.agents.iter().position(|a| a == id)
    }

    pub fn name_index(&self, name: &Name) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn prop_index(&self, prop: &Prop) -> Option<usize> {
        self.props.iter().position(|p| p == prop)
    }

    pub fn query(&self, world: &str, agent: &str) -> Option<PointedQuery> {
        Some(PointedQuery {
            world: self.world_index(world)?,
            agent: self.agent_index(agent)?,
        })
    }

    /// The agent that `agent` refers to by name `name` in `world`.
    pub fn referent(&self, world: usize, agent: usize, name: usize) -> usize {
        match &self.extension {
            Extension::Rigid(t) => t[world][name],
            Extension::AgentSpecific(t) => t[world][agent][name],
        }
    }

    /// For each agent, the block index of each world.
    pub fn block_lookup(&self) -> Vec<Vec<usize>> {
        self.indist
            .iter()
            .map(|blocks| {
                let mut of = vec![usize::MAX; self.worlds.len()];
                for (b, block) in blocks.iter().enumerate() {
                    for &w in block {
                        if w < of.len() {
                            of[w] = b;
                        }
                    }
                }
                of
            })
            .collect()
    }

    /// Every invariant violation, each with a locating message.
    pub fn validate(&self) -> Vec<String> {
        let mut out = Vec::new();
        let (nw, na, nn) = (self.worlds.len(), self.agents.len(), self.names.len());

        for (kind, ids) in [
            ("world", self.worlds.clone()),
            ("agent", self.agents.clone()),
            ("name", self.names.iter().map(|n| n.to_string()).collect()),
            ("prop", self.props.iter().map(|p| p.to_string()).collect()),
        ] {
            let mut seen = HashSet::new();
            for id in &ids {
                if !seen.insert(id) {
                    out.push(format!("duplicate {kind} id `{id}`"));
                }
            }
        }

        if nn > 0 && nw > 0 && na == 0 {
            out.push("extension cannot be total: no agents".to_string());
        }

        if self.indist.len() != na {
            out.push(format!(
                "indist: {} partitions given for {} agents",
                self.indist.len(),
                na
            ));
        }
        for (a, blocks) in self.indist.iter().enumerate() {
            let label = self.agents.get(a).map_or_else(|| format!("#{a}"), Clone::clone);
            let mut seen = vec![false; nw];
            for block in blocks {
                if block.is_empty() {
                    out.push(format!("indist[{label}]: empty block"));
                }
                for &w in block {
                    match seen.get_mut(w) {
                        None => out.push(format!("indist[{label}]: unknown world #{w}")),
                        Some(s) if *s => out.push(format!("indist[{label}]: duplicate world {}", self.worlds[w])),
                        Some(s) => *s = true,
                    }
                }
            }
            for (w, s) in seen.iter().enumerate() {
                if !s {
                    out.push(format!("indist[{label}]: world {} not covered", self.worlds[w]));
                }
            }
        }

        let check_ref = |out: &mut Vec<String>, at: String, r: usize| {
            if r >= na {
                out.push(format!("extension{at}: referent #{r} is not an agent"));
            }
        };
        match &self.extension {
            Extension::Rigid(table) => {
                if table.len() != nw {
                    out.push(format!("extension: {} rows for {} worlds", table.len(), nw));
                }
                for (w, row) in table.iter().enumerate().take(nw) {
                    if row.len() != nn {
                        out.push(format!("extension[{}]: {} entries for {} names", self.worlds[w], row.len(), nn));
                    }
                    for (n, &r) in row.iter().enumerate().take(nn) {
                        check_ref(&mut out, format!("[{}][{}]", self.worlds[w], self.names[n]), r);
                    }
                }
                if self.names.iter().any(Name::is_self) {
                    out.push("name `se` requires agent-specific mode".to_string());
                }
            }
            Extension::AgentSpecific(table) => {
                if table.len() != nw {
                    out.push(format!("extension: {} rows for {} worlds", table.len(), nw));
                }
                let se = self.names.iter().position(Name::is_self);
                for (w, per_agent) in table.iter().enumerate().take(nw) {
                    if per_agent.len() != na {
                        out.push(format!(
                            "extension[{}]: {} entries for {} agents",
                            self.worlds[w],
                            per_agent.len(),
                            na
                        ));
                    }
                    for (a, row) in per_agent.iter().enumerate().take(na) {
                        let at = format!("[{}][{}]", self.worlds[w], self.agents[a]);
                        if row.len() != nn {
                            out.push(format!("extension{at}: {} entries for {} names", row.len(), nn));
                        }
                        for (n, &r) in row.iter().enumerate().take(nn) {
                            check_ref(&mut out, format!("{at}[{}]", self.names[n]), r);
                        }
                        if let Some(&r) = se.and_then(|s| row.get(s)) {
                            if r != a {
                                out.push(format!("extension{at}[se]: must denote the agent itself"));
                            }
                        }
                    }
                }
            }
        }

        if self.valuation.len() != self.props.len() {
            out.push(format!(
                "valuation: {} entries for {} props",
                self.valuation.len(),
                self.props.len()
            ));
        }
        for (p, pairs) in self.valuation.iter().enumerate() {
            let label = self.props.get(p).map_or_else(|| format!("#{p}"), |p| p.to_string());
            for &(w, a) in pairs {
                if w >= nw || a >= na {
                    out.push(format!("valuation[{label}]: point (#{w}, #{a}) outside W x A"));
                }
            }
        }
        out
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }
}

/// Free-function form of [`Model::validate`].
pub fn validate_model(m: &Model) -> Vec<String> {
    m.validate()
}
