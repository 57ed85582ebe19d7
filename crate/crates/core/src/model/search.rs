use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Extension, Model};
use crate::algebra::{decide_definability, Certificate, Verdict};
use crate::semantics::{truth_set, TruthSet};
use crate::syntax::{parse_formula, Formula, Name, Prop, Signature};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchBounds {
    pub max_worlds: usize,
    pub max_agents: usize,
}

#[derive(Clone, Debug)]
pub enum SearchOutcome {
    Found {
        model: Model,
        certificate: Box<Certificate>,
        /// Candidate models examined before the hit, this one included.
        examined: u64,
    },
    NotFound {
        examined: u64,
    },
}

/// Spaces up to this many models are enumerated in full.
const EXHAUSTIVE_LIMIT: u128 = 1 << 20;
/// Random draws per model size when the space is too large to enumerate.
const SAMPLES_PER_SIZE: u64 = 200_000;

pub const SEARCH_SIGNATURE: &str = "p;not,or;@[bf],R[bf]";
pub const SEARCH_TARGET: &str = "D[bf] p";

/// The eight formulas whose truth sets make up the family a witness model
/// must have.
pub const FAMILY_SHAPE: [&str; 8] = [
    "@[bf] p",
    "false",
    "p",
    "true",
    "!@[bf] p",
    "!p",
    "!p & !@[bf] p",
    "p | @[bf] p",
];

fn world_ids(n: usize) -> Vec<String> {
    const FIXTURE_LABELS: [&str; 4] = ["w", "u", "v", "t"];
    (0..n)
        .map(|i| FIXTURE_LABELS.get(i).map_or_else(|| format!("w{i}"), |s| s.to_string()))
        .collect()
}

fn agent_ids(n: usize) -> Vec<String> {
    (0..n)
        .map(|i| {
            if i < 26 {
                ((b'a' + i as u8) as char).to_string()
            } else {
                format!("a{i}")
            }
        })
        .collect()
}

fn all_partitions(n: usize) -> Vec<Vec<Vec<usize>>> {
    fn go(i: usize, n: usize, blocks: &mut Vec<Vec<usize>>, out: &mut Vec<Vec<Vec<usize>>>) {
        if i == n {
            out.push(blocks.clone());
            return;
        }
        for b in 0..blocks.len() {
            blocks[b].push(i);
            go(i + 1, n, blocks, out);
            blocks[b].pop();
        }
        blocks.push(vec![i]);
        go(i + 1, n, blocks, out);
        blocks.pop();
    }
    let mut out = Vec::new();
    go(0, n, &mut Vec::new(), &mut out);
    out
}

/// One point of the search space for a fixed number of worlds and agents.
struct Space {
    n_worlds: usize,
    n_agents: usize,
    partitions: Vec<Vec<Vec<usize>>>,
}

impl Space {
    fn n_points(&self) -> usize {
        self.n_worlds * self.n_agents
    }

    fn size(&self) -> Option<u128> {
        let p = (self.partitions.len() as u128).checked_pow(self.n_agents as u32)?;
        let e = (self.n_agents as u128).checked_pow(self.n_points() as u32)?;
        let v = 1u128.checked_shl(self.n_points() as u32)?;
        p.checked_mul(e)?.checked_mul(v)
    }

    fn build(&self, partition_of: &[usize], referents: &[usize], valuation: u64) -> Model {
        let (nw, na) = (self.n_worlds, self.n_agents);
        Model {
            worlds: world_ids(nw),
            agents: agent_ids(na),
            names: vec![Name::new("bf").expect("valid name")],
            props: vec![Prop::new("p").expect("valid prop")],
            indist: partition_of.iter().map(|&i| self.partitions[i].clone()).collect(),
            extension: Extension::AgentSpecific(
                (0..nw)
                    .map(|w| (0..na).map(|a| vec![referents[w * na + a]]).collect())
                    .collect(),
            ),
            valuation: vec![(0..nw * na)
                .filter(|i| valuation >> i & 1 == 1)
                .map(|i| (i / na, i % na))
                .collect()],
        }
    }

    /// Mixed-radix decoding of a model index.
    fn decode(&self, mut index: u128) -> Model {
        let np = self.n_points();
        let valuation = (index % (1u128 << np)) as u64;
        index >>= np;
        let mut referents = Vec::with_capacity(np);
        for _ in 0..np {
            referents.push((index % self.n_agents as u128) as usize);
            index /= self.n_agents as u128;
        }
        let mut partition_of = Vec::with_capacity(self.n_agents);
        for _ in 0..self.n_agents {
            partition_of.push((index % self.partitions.len() as u128) as usize);
            index /= self.partitions.len() as u128;
        }
        self.build(&partition_of, &referents, valuation)
    }

    fn sample(&self, rng: &mut ChaCha8Rng) -> Model {
        let np = self.n_points();
        let partition_of: Vec<usize> = if rng.gen_bool(0.5) {
            // all agents share one partition half of the time
            vec![rng.gen_range(0..self.partitions.len()); self.n_agents]
        } else {
            (0..self.n_agents).map(|_| rng.gen_range(0..self.partitions.len())).collect()
        };
        let referents: Vec<usize> = (0..np).map(|_| rng.gen_range(0..self.n_agents)).collect();
        let valuation = rng.gen::<u64>() & ((1u64 << np) - 1);
        self.build(&partition_of, &referents, valuation)
    }
}

struct Probe {
    family: Vec<Formula>,
    target: Formula,
    sig: Signature,
}

impl Probe {
    fn new() -> Self {
        Probe {
            family: FAMILY_SHAPE.iter().map(|s| parse_formula(s).expect("valid formula")).collect(),
            target: parse_formula(SEARCH_TARGET).expect("valid formula"),
            sig: SEARCH_SIGNATURE.parse().expect("valid signature"),
        }
    }

    /// Cheap pre-check: the eight shape sets are distinct, miss the target,
    /// and are closed under the signature. If so the closure of `p` is
    /// exactly those eight sets.
    fn shape_holds(&self, m: &Model) -> bool {
        let sets: Vec<TruthSet> = self
            .family
            .iter()
            .map(|f| truth_set(m, f).expect("vocabulary matches"))
            .collect();
        let distinct: BTreeSet<&TruthSet> = sets.iter().collect();
        if distinct.len() != sets.len() {
            return false;
        }
        if distinct.contains(&truth_set(m, &self.target).expect("vocabulary matches")) {
            return false;
        }
        let closed_unary = self.sig.unary_connectives().iter().all(|op| {
            sets.iter().all(|s| {
                let out = crate::semantics::apply_op(m, op, &[s]).expect("vocabulary matches");
                distinct.contains(&out)
            })
        });
        closed_unary && sets.iter().all(|a| sets.iter().all(|b| distinct.contains(&a.union(b))))
    }

    fn certify(&self, m: &Model) -> Option<Certificate> {
        if !self.shape_holds(m) {
            return None;
        }
        let cert = decide_definability(m, &self.target, &self.sig).ok()?;
        match &cert.verdict {
            Verdict::Undefinable { family } if family.len() == FAMILY_SHAPE.len() => Some(cert),
            _ => None,
        }
    }
}

/// Looks for an agent-specific model with one name `bf` and one prop `p`
/// on which `D[bf] p` is not expressible with `!`, `|`, `@[bf]`, `R[bf]`,
/// and whose closure of `p` is the eight-set family [`FAMILY_SHAPE`].
///
/// Sizes are tried smallest first (by points, then worlds). Small spaces
/// are enumerated completely; larger ones are sampled from `seed`.
pub fn search_agent_specific_counterexample(bounds: SearchBounds, seed: u64) -> SearchOutcome {
    let probe = Probe::new();
    let mut sizes: Vec<(usize, usize)> = (1..=bounds.max_worlds)
        .flat_map(|w| (1..=bounds.max_agents).map(move |a| (w, a)))
        .filter(|(w, a)| w * a <= 64)
        .collect();
    sizes.sort_by_key(|&(w, a)| (w * a, w));

    let mut examined = 0u64;
    for (n_worlds, n_agents) in sizes {
        let space = Space {
            n_worlds,
            n_agents,
            partitions: all_partitions(n_worlds),
        };
        let found = match space.size() {
            Some(size) if size <= EXHAUSTIVE_LIMIT => (0..size).find_map(|i| {
                examined += 1;
                let m = space.decode(i);
                probe.certify(&m).map(|c| (m, c))
            }),
            _ => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed ^ ((n_worlds as u64) << 32 | n_agents as u64));
                (0..SAMPLES_PER_SIZE).find_map(|_| {
                    examined += 1;
                    let m = space.sample(&mut rng);
                    probe.certify(&m).map(|c| (m, c))
                })
            }
        };
        if let Some((model, certificate)) = found {
            return SearchOutcome::Found {
                model,
                certificate: Box::new(certificate),
                examined,
            };
        }
    }
    SearchOutcome::NotFound { examined }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partition_counts() {
        let counts: Vec<usize> = (0..6).map(|n| all_partitions(n).len()).collect();
        assert_eq!(counts, [1, 1, 2, 5, 15, 52]);
    }

    #[test]
    fn single_point_space_has_no_witness() {
        match search_agent_specific_counterexample(SearchBounds { max_worlds: 1, max_agents: 1 }, 0) {
            SearchOutcome::NotFound { examined } => assert_eq!(examined, 2),
            SearchOutcome::Found { model, .. } => panic!("unexpected witness {model:?}"),
        }
    }

    #[test]
    fn decoded_models_are_valid() {
        let space = Space {
            n_worlds: 2,
            n_agents: 2,
            partitions: all_partitions(2),
        };
        assert_eq!(space.size(), Some(2 * 2 * 16 * 16));
        for i in 0..space.size().unwrap() {
            assert!(space.decode(i).is_valid());
        }
    }
}
