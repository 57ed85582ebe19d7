use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use super::{Extension, Model};
use crate::syntax::{Name, Prop};

/// The built-in models.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Fixture {
    /// Four worlds, two agents, both agents confuse w/u and v/t; `Ann`
    /// names a in w, v and b in u, t. Separates D from R.
    MDr,
    /// Two worlds, two agents; only a confuses w/u; `Ann` names a in w
    /// and b in u. Separates R from D and @.
    MRd,
}

impl Fixture {
    pub const ALL: [Fixture; 2] = [Fixture::MDr, Fixture::MRd];

    pub fn id(self) -> &'static str {
        match self {
            Fixture::MDr => "M_DR",
            Fixture::MRd => "M_RD",
        }
    }
}

impl fmt::Display for Fixture {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

#[derive(Debug, Clone, Error)]
#[error("unknown fixture `{0}` (expected M_DR or M_RD)")]
pub struct UnknownFixture(pub String);

impl FromStr for Fixture {
    type Err = UnknownFixture;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "M_DR" => Ok(Fixture::MDr),
            "M_RD" => Ok(Fixture::MRd),
            other => Err(UnknownFixture(other.to_string())),
        }
    }
}

fn ids(xs: &[&str]) -> Vec<String> {
    xs.iter().map(|s| s.to_string()).collect()
}

pub fn fixture(which: Fixture) -> Model {
    let ann = Name::new("Ann").expect("valid name");
    let p = Prop::new("p").expect("valid prop");
    const A: usize = 0;
    const B: usize = 1;
    match which {
        Fixture::MDr => {
            // worlds w=0, u=1, v=2, t=3
            let blocks = vec![vec![0, 1], vec![2, 3]];
            Model {
                worlds: ids(&["w", "u", "v", "t"]),
                agents: ids(&["a", "b"]),
                names: vec![ann],
                props: vec![p],
                indist: vec![blocks.clone(), blocks],
                extension: Extension::Rigid(vec![vec![A], vec![B], vec![A], vec![B]]),
                valuation: vec![vec![(0, A), (1, B), (2, B), (3, A)]],
            }
        }
        Fixture::MRd => Model {
            worlds: ids(&["w", "u"]),
            agents: ids(&["a", "b"]),
            names: vec![ann],
            props: vec![p],
            indist: vec![vec![vec![0, 1]], vec![vec![0], vec![1]]],
            extension: Extension::Rigid(vec![vec![A], vec![B]]),
            valuation: vec![vec![(0, A), (1, B)]],
        },
    }
}
