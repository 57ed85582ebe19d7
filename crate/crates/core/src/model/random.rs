use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use super::{Extension, ExtensionMode, Model};
use crate::syntax::{Name, Prop, SELF_NAME};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RandomModelParams {
    pub n_worlds: usize,
    pub n_agents: usize,
    pub n_names: usize,
    pub n_props: usize,
    pub mode: ExtensionMode,
    /// Adds the self name `se` (agent-specific mode only) on top of the
    /// `n_names` generated names.
    pub with_se: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParamsError {
    #[error("names need at least one agent to refer to")]
    NamesWithoutAgents,
    #[error("the self name `se` needs agent-specific mode")]
    SelfInRigidMode,
}

/// Number of ways to finish a restricted-growth string of length `n`
/// once `i` positions are filled using `m` distinct labels.
fn completions(n: usize) -> Vec<Vec<u128>> {
    let mut table = vec![vec![0u128; n + 2]; n + 1];
    table[n].fill(1);
    for i in (0..n).rev() {
        for m in 0..=i {
            table[i][m] = m as u128 * table[i + 1][m] + table[i + 1][m + 1];
        }
    }
    table
}

/// A uniformly random set partition of `0..n`, drawn as a
/// restricted-growth string: position `i` joins one of the `m` blocks
/// opened so far with weight `completions[i+1][m]` each, or opens a new
/// block with weight `completions[i+1][m+1]`.
pub fn random_partition<R: Rng>(n: usize, rng: &mut R) -> Vec<Vec<usize>> {
    let table = completions(n);
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    for i in 0..n {
        let m = blocks.len();
        let join = table[i + 1][m];
        let total = m as u128 * join + table[i + 1][m + 1];
        let pick = rng.gen_range(0..total);
        let block = (pick / join.max(1)) as usize;
        if block < m {
            blocks[block].push(i);
        } else {
            blocks.push(vec![i]);
        }
    }
    blocks
}

/// A valid model drawn deterministically from `(params, seed)`.
///
/// Ids are `w0..`, `a0..`, `n0..`, `p0..`. Each agent's partition is
/// uniform over set partitions of the worlds; referents are uniform over
/// agents; each point is in each valuation with probability 1/2.
pub fn random_model(params: &RandomModelParams, seed: u64) -> Result<Model, ParamsError> {
    let RandomModelParams {
        n_worlds,
        n_agents,
        n_names,
        n_props,
        mode,
        with_se,
    } = *params;
    if with_se && mode == ExtensionMode::Rigid {
        return Err(ParamsError::SelfInRigidMode);
    }
    let total_names = n_names + usize::from(with_se);
    if total_names > 0 && n_agents == 0 && n_worlds > 0 {
        return Err(ParamsError::NamesWithoutAgents);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut names: Vec<Name> = (0..n_names)
        .map(|i| Name::new(&format!("n{i}")).expect("generated names are valid"))
        .collect();
    if with_se {
        names.push(Name::new(SELF_NAME).expect("valid name"));
    }

    let indist = (0..n_agents).map(|_| random_partition(n_worlds, &mut rng)).collect();
    let referent = |agent: usize, name: usize, rng: &mut ChaCha8Rng| {
        if with_se && name == n_names {
            agent
        } else {
            rng.gen_range(0..n_agents)
        }
    };
    let extension = match mode {
        ExtensionMode::Rigid => Extension::Rigid(
            (0..n_worlds)
                .map(|_| (0..total_names).map(|n| referent(0, n, &mut rng)).collect())
                .collect(),
        ),
        ExtensionMode::AgentSpecific => Extension::AgentSpecific(
            (0..n_worlds)
                .map(|_| {
                    (0..n_agents)
                        .map(|a| (0..total_names).map(|n| referent(a, n, &mut rng)).collect())
                        .collect()
                })
                .collect(),
        ),
    };
    let valuation = (0..n_props)
        .map(|_| {
            let mut pairs = Vec::new();
            for w in 0..n_worlds {
                for a in 0..n_agents {
                    if rng.gen_bool(0.5) {
                        pairs.push((w, a));
                    }
                }
            }
            pairs
        })
        .collect();

    Ok(Model {
        worlds: (0..n_worlds).map(|i| format!("w{i}")).collect(),
        agents: (0..n_agents).map(|i| format!("a{i}")).collect(),
        names,
        props: (0..n_props)
            .map(|i| Prop::new(&format!("p{i}")).expect("generated props are valid"))
            .collect(),
        indist,
        extension,
        valuation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashMap;

    fn params(mode: ExtensionMode, with_se: bool) -> RandomModelParams {
        RandomModelParams {
            n_worlds: 4,
            n_agents: 3,
            n_names: 2,
            n_props: 2,
            mode,
            with_se,
        }
    }

    #[test]
    fn bell_numbers() {
        let bell: Vec<u128> = (0..8).map(|n| completions(n)[0][0]).collect();
        assert_eq!(bell, [1, 1, 2, 5, 15, 52, 203, 877]);
    }

    #[test]
    fn partitions_are_uniform() {
        // 15 partitions of 4 elements, 15000 draws: each ~1000.
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut counts: HashMap<Vec<Vec<usize>>, usize> = HashMap::new();
        for _ in 0..15_000 {
            *counts.entry(random_partition(4, &mut rng)).or_default() += 1;
        }
        assert_eq!(counts.len(), 15);
        assert!(counts.values().all(|&c| (850..1150).contains(&c)), "{counts:?}");
    }

    #[test]
    fn deterministic_per_seed() {
        let p = params(ExtensionMode::AgentSpecific, true);
        assert_eq!(random_model(&p, 7).unwrap(), random_model(&p, 7).unwrap());
        assert_ne!(random_model(&p, 7).unwrap(), random_model(&p, 8).unwrap());
    }

    #[test]
    fn generated_models_validate() {
        for seed in 0..1000 {
            let m = random_model(&params(ExtensionMode::Rigid, false), seed).unwrap();
            assert_eq!(m.validate(), Vec::<String>::new(), "seed {seed}");
        }
        for seed in 0..300 {
            let m = random_model(&params(ExtensionMode::AgentSpecific, true), seed).unwrap();
            assert!(m.is_valid(), "seed {seed}");
            let se = m.names.iter().position(Name::is_self).unwrap();
            for w in 0..4 {
                for a in 0..3 {
                    assert_eq!(m.referent(w, a, se), a);
                }
            }
        }
    }

    #[test]
    fn single_agent_partitions_are_valid() {
        let p = RandomModelParams {
            n_agents: 1,
            ..params(ExtensionMode::Rigid, false)
        };
        for seed in 0..50 {
            assert!(random_model(&p, seed).unwrap().is_valid());
        }
    }

    #[test]
    fn inconsistent_params() {
        let p = RandomModelParams {
            n_worlds: 2,
            n_agents: 0,
            n_names: 1,
            n_props: 0,
            mode: ExtensionMode::Rigid,
            with_se: false,
        };
        assert_eq!(random_model(&p, 0), Err(ParamsError::NamesWithoutAgents));
        assert_eq!(
            random_model(&params(ExtensionMode::Rigid, true), 0),
            Err(ParamsError::SelfInRigidMode)
        );
    }
}
