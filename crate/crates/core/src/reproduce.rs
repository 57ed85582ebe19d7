//! One-shot reproduction of the definability and undefinability results
//! on the built-in fixtures, random models and bounded search.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{close, decide_definability, verify_certificate, Verdict};
use crate::model::{
    fixture, random_model, search_agent_specific_counterexample, Extension, ExtensionMode, Fixture, Model, FAMILY_SHAPE,
    RandomModelParams, SearchBounds, SearchOutcome,
};
use crate::semantics::{truth_set, TruthSet};
use crate::syntax::{parse_formula, Formula, Signature};
use crate::testgen::FormulaGen;

/// Fault injection for exercising the failure path.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Fault {
    /// Makes `Ann` rigid in M_DR (it names `a` everywhere), which collapses
    /// the difference between de re and de dicto knowledge on it.
    CorruptMdr,
}

#[derive(Clone, Debug)]
pub struct ReproOptions {
    pub seed: u64,
    pub random_models: usize,
    pub formulas_per_model: usize,
    pub fault: Option<Fault>,
}

impl Default for ReproOptions {
    fn default() -> Self {
        ReproOptions {
            seed: 0,
            random_models: 1000,
            formulas_per_model: 50,
            fault: None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Check {
    pub theorem: &'static str,
    pub claim: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
}

fn f(text: &str) -> Formula {
    parse_formula(text).expect("built-in formula")
}

fn sig(text: &str) -> Signature {
    text.parse().expect("built-in signature")
}

fn fixture_with(which: Fixture, fault: Option<Fault>) -> Model {
    let mut m = fixture(which);
    if which == Fixture::MDr && fault == Some(Fault::CorruptMdr) {
        m.extension = Extension::Rigid(vec![vec![0]; m.worlds.len()]);
    }
    m
}

fn four_sets(m: &Model) -> BTreeSet<TruthSet> {
    ["p", "false", "!p", "true"]
        .iter()
        .map(|s| truth_set(m, &f(s)).expect("fixture vocabulary"))
        .collect()
}

/// Random rigid models of at most 5 worlds, 4 agents, 2 names, 2 props.
pub fn random_rigid_model(rng: &mut ChaCha8Rng) -> Model {
    let params = RandomModelParams {
        n_worlds: rng.gen_range(1..=5),
        n_agents: rng.gen_range(1..=4),
        n_names: rng.gen_range(1..=2),
        n_props: rng.gen_range(1..=2),
        mode: ExtensionMode::Rigid,
        with_se: false,
    };
    random_model(&params, rng.gen()).expect("consistent params")
}

/// Random agent-specific models with `se`, same size limits.
pub fn random_self_model(rng: &mut ChaCha8Rng) -> Model {
    let params = RandomModelParams {
        n_worlds: rng.gen_range(1..=5),
        n_agents: rng.gen_range(1..=4),
        n_names: rng.gen_range(1..=2),
        n_props: rng.gen_range(1..=2),
        mode: ExtensionMode::AgentSpecific,
        with_se: true,
    };
    random_model(&params, rng.gen()).expect("consistent params")
}

/// Counts points where `D[n] φ` and `R[m] @[n] φ` disagree, over every
/// name pair `n, m` of the model.
pub fn de_dicto_via_de_re_violations(m: &Model, phi: &Formula) -> usize {
    let mut bad = 0;
    for n in &m.names {
        let lhs = truth_set(m, &Formula::de_dicto(n.clone(), phi.clone())).expect("model vocabulary");
        for k in &m.names {
            let rhs = Formula::de_re(k.clone(), Formula::at(n.clone(), phi.clone()));
            let rhs = truth_set(m, &rhs).expect("model vocabulary");
            bad += lhs.union(&rhs).count() - lhs.intersection(&rhs).count();
        }
    }
    bad
}

fn uniform_definability(opts: &ReproOptions) -> (bool, String) {
    let mut fixture_bad = 0;
    for which in Fixture::ALL {
        let m = fixture_with(which, opts.fault);
        for phi in ["p", "!p", "R[Ann] p", "D[Ann] p"] {
            fixture_bad += de_dicto_via_de_re_violations(&m, &f(phi));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut random_bad = 0;
    for _ in 0..opts.random_models {
        let m = random_rigid_model(&mut rng);
        let gen = FormulaGen::for_model(&m, 3);
        for _ in 0..opts.formulas_per_model {
            random_bad += de_dicto_via_de_re_violations(&m, &gen.generate(&mut rng));
        }
    }
    (
        fixture_bad == 0 && random_bad == 0,
        format!(
            "fixtures: {fixture_bad} violations; {} random rigid models x {} formulas: {random_bad} violations",
            opts.random_models, opts.formulas_per_model
        ),
    )
}

fn undefinability(m: &Model, target: &str, signature: &str, expected_target: &TruthSet) -> (bool, String) {
    let s = sig(signature);
    let family = match close(m, &s) {
        Ok(fam) => fam,
        Err(e) => return (false, e.to_string()),
    };
    let four = four_sets(m);
    let closure_ok = family.sets() == four;
    let target_ok = truth_set(m, &f(target)).as_ref() == Ok(expected_target);
    let (verdict_ok, verified) = match decide_definability(m, &f(target), &s) {
        Ok(c) => (!c.is_definable(), verify_certificate(&c)),
        Err(_) => (false, false),
    };
    (
        closure_ok && target_ok && verdict_ok && verified,
        format!(
            "closure of p under {{{signature}}}: {} sets{}; target set {}; verdict {}; certificate {}",
            family.len(),
            if closure_ok { " = {p, false, !p, true}" } else { " (expected the 4-set family)" },
            if target_ok { "as expected" } else { "WRONG" },
            if verdict_ok { "undefinable" } else { "definable" },
            if verified { "verified" } else { "REJECTED" },
        ),
    )
}

fn de_dicto_from_de_re(opts: &ReproOptions) -> (bool, String) {
    let m = fixture_with(Fixture::MDr, opts.fault);
    let expected = TruthSet::from_labels(&m, &[("w", "a"), ("w", "b"), ("u", "a"), ("u", "b")]);
    undefinability(&m, "D[Ann] p", "p;not,or;R[Ann]", &expected)
}

fn de_re_from_de_dicto(opts: &ReproOptions) -> (bool, String) {
    let m = fixture_with(Fixture::MRd, opts.fault);
    let expected = TruthSet::from_labels(&m, &[("w", "b"), ("u", "b")]);
    undefinability(&m, "R[Ann] p", "p;not,or;D[Ann],@[Ann]", &expected)
}

fn agent_specific_search(opts: &ReproOptions) -> (bool, String) {
    let bounds = SearchBounds {
        max_worlds: 4,
        max_agents: 3,
    };
    match search_agent_specific_counterexample(bounds, opts.seed) {
        SearchOutcome::NotFound { examined } => (false, format!("no witness among {examined} models")),
        SearchOutcome::Found {
            model,
            certificate,
            examined,
        } => {
            let shape: BTreeSet<TruthSet> = FAMILY_SHAPE
                .iter()
                .map(|s| truth_set(&model, &f(s)).expect("search vocabulary"))
                .collect();
            let family_ok = match &certificate.verdict {
                Verdict::Undefinable { family } => family.sets() == shape && shape.len() == 8,
                Verdict::Definable { .. } => false,
            };
            let verified = verify_certificate(&certificate);
            (
                family_ok && verified,
                format!(
                    "witness with {} worlds, {} agents after {examined} candidates; family of {} sets; certificate {}",
                    model.worlds.len(),
                    model.agents.len(),
                    shape.len(),
                    if verified { "verified" } else { "REJECTED" }
                ),
            )
        }
    }
}

/// Runs every check in a fixed order.
pub fn verify_paper(opts: &ReproOptions) -> Vec<Check> {
    type Runner = fn(&ReproOptions) -> (bool, String);
    let checks: [(&str, &str, Runner); 4] = [
        ("Theorem 1", "D[n] phi == R[m] @[n] phi", uniform_definability),
        ("Theorem 3", "D[Ann] p undefinable from R", de_dicto_from_de_re),
        ("Theorem 4", "R[Ann] p undefinable from D and @", de_re_from_de_dicto),
        ("Theorem 5", "D[bf] p undefinable from R and @ with agent-specific names", agent_specific_search),
    ];
    checks
        .iter()
        .map(|(theorem, claim, run)| {
            let start = Instant::now();
            let (passed, detail) = run(opts);
            Check {
                theorem,
                claim,
                passed,
                detail,
                elapsed: start.elapsed(),
            }
        })
        .collect()
}
