//! Truth-set algebra: closing a family of truth sets under a signature,
//! definability verdicts, and certificates that can be re-checked
//! independently.
//!
//! A formula over a signature can only denote truth sets in the closure of
//! the seeds under the signature's connectives, because each connective's
//! truth set depends only on the truth sets of its arguments. So a target
//! truth set outside the closure is not expressible on that model, and one
//! such model refutes every candidate definition.

mod certificate_json;

use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap, HashMap};

use indexmap::IndexMap;
use thiserror::Error;

pub use certificate_json::CertificateError;

use crate::model::Model;
use crate::semantics::{check_formula, truth_set, truth_set_pointwise, EvalError, Transformer, TruthSet};
use crate::syntax::{enumerate_formulas, print_formula, Connective, Formula, Signature};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("closure exceeded {limit} members; internal error")]
    Guard { limit: u128 },
}

/// A family of truth sets with a minimal witness formula for each member.
///
/// Members are kept in the order they were finalized, which is
/// nondecreasing in witness size.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosureFamily {
    pub signature: Signature,
    pub members: IndexMap<TruthSet, Formula>,
    pub saturated: bool,
}

impl ClosureFamily {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, t: &TruthSet) -> bool {
        self.members.contains_key(t)
    }

    pub fn witness(&self, t: &TruthSet) -> Option<&Formula> {
        self.members.get(t)
    }

    pub fn sets(&self) -> BTreeSet<TruthSet> {
        self.members.keys().cloned().collect()
    }

    /// Exhaustively checks that every enabled connective maps members to
    /// members.
    pub fn is_closed_on(&self, m: &Model) -> Result<bool, AlgebraError> {
        let tf = Transformer::new(m);
        let sets: Vec<&TruthSet> = self.members.keys().collect();
        for op in self.signature.unary_connectives() {
            for s in &sets {
                if !self.contains(&tf.apply(&op, &[s])?) {
                    return Ok(false);
                }
            }
        }
        if self.signature.allow_or {
            for a in &sets {
                for b in &sets {
                    if !self.contains(&tf.apply(&Connective::Or, &[a, b])?) {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Definable { witness: Formula },
    Undefinable { family: ClosureFamily },
}

/// The outcome of a definability question on one model.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub model: Model,
    pub signature: Signature,
    pub target: Formula,
    pub target_set: TruthSet,
    pub verdict: Verdict,
}

impl Certificate {
    pub fn is_definable(&self) -> bool {
        matches!(self.verdict, Verdict::Definable { .. })
    }
}

fn seeds(sig: &Signature) -> Vec<Formula> {
    let mut out: Vec<Formula> = sig.props.iter().cloned().map(Formula::Prop).collect();
    if sig.allow_true {
        out.push(Formula::True);
    }
    if sig.allow_false {
        out.push(Formula::False);
    }
    out
}

fn check_signature(m: &Model, sig: &Signature) -> Result<(), EvalError> {
    let mut probe = Formula::True;
    for s in seeds(sig) {
        probe = Formula::or(probe, s);
    }
    for c in sig.unary_connectives() {
        probe = Formula::apply(&c, probe, None);
    }
    check_formula(m, &probe)
}

// Candidate ordered by (size, printed form); the heap pops the smallest.
type Candidate = Reverse<(usize, String, TruthSet)>;

/// Closes the seeds of `sig` under its connectives on `m`.
///
/// Worklist fixed point in the style of a shortest-path search: candidates
/// are finalized in order of witness size, ties broken by printed form, so
/// every member gets a minimal witness and the result is deterministic.
pub fn close(m: &Model, sig: &Signature) -> Result<ClosureFamily, AlgebraError> {
    check_signature(m, sig)?;
    let tf = Transformer::new(m);
    let limit: u128 = 1u128.checked_shl(m.n_points() as u32).unwrap_or(u128::MAX);
    let unary = sig.unary_connectives();

    let mut members: IndexMap<TruthSet, Formula> = IndexMap::new();
    let mut best: HashMap<TruthSet, (usize, String, Formula)> = HashMap::new();
    let mut heap: BinaryHeap<Candidate> = BinaryHeap::new();

    let offer = |f: Formula,
                 set: TruthSet,
                 members: &IndexMap<TruthSet, Formula>,
                 best: &mut HashMap<TruthSet, (usize, String, Formula)>,
                 heap: &mut BinaryHeap<Candidate>| {
        if members.contains_key(&set) {
            return;
        }
        let key = (f.size(), print_formula(&f));
        if let Some((size, text, _)) = best.get(&set) {
            if (*size, text) <= (key.0, &key.1) {
                return;
            }
        }
        heap.push(Reverse((key.0, key.1.clone(), set.clone())));
        best.insert(set, (key.0, key.1, f));
    };

    for s in seeds(sig) {
        let set = truth_set(m, &s)?;
        offer(s, set, &members, &mut best, &mut heap);
    }

    while let Some(Reverse((size, text, set))) = heap.pop() {
        if members.contains_key(&set) {
            continue;
        }
        match best.get(&set) {
            Some((s, t, _)) if (*s, t) == (size, &text) => {}
            _ => continue,
        }
        let (_, _, witness) = best.remove(&set).expect("present");
        members.insert(set.clone(), witness.clone());
        if members.len() as u128 > limit {
            return Err(AlgebraError::Guard { limit });
        }

        for op in &unary {
            let out = tf.apply(op, &[&set])?;
            offer(Formula::apply(op, witness.clone(), None), out, &members, &mut best, &mut heap);
        }
        if sig.allow_or {
            let finalized: Vec<(TruthSet, Formula)> =
                members.iter().map(|(t, f)| (t.clone(), f.clone())).collect();
            for (other, other_witness) in finalized {
                let out = tf.apply(&Connective::Or, &[&set, &other])?;
                let (a, b) = (witness.clone(), other_witness.clone());
                offer(Formula::or(a.clone(), b.clone()), out.clone(), &members, &mut best, &mut heap);
                offer(Formula::or(b, a), out, &members, &mut best, &mut heap);
            }
        }
    }

    Ok(ClosureFamily {
        signature: sig.clone(),
        members,
        saturated: true,
    })
}

/// Decides whether the truth set of `target` on `m` is denoted by some
/// formula over `sig`.
///
/// An undefinable verdict on one model shows the target is not equivalent
/// to any formula over the signature. A definable verdict holds for this
/// model only.
pub fn decide_definability(m: &Model, target: &Formula, sig: &Signature) -> Result<Certificate, AlgebraError> {
    let target_set = truth_set(m, target)?;
    let family = close(m, sig)?;
    let verdict = match family.witness(&target_set) {
        Some(w) => Verdict::Definable { witness: w.clone() },
        None => Verdict::Undefinable { family },
    };
    Ok(Certificate {
        model: m.clone(),
        signature: sig.clone(),
        target: target.clone(),
        target_set,
        verdict,
    })
}

/// Re-checks every claim of a certificate from scratch, evaluating
/// formulas point by point with the satisfaction relation only.
///
/// For an undefinable verdict this checks that each member's witness is
/// over the signature and denotes the member, that every seed is a member,
/// that applying each connective to member witnesses lands in the family,
/// and that the target's truth set is not a member.
pub fn verify_certificate(c: &Certificate) -> bool {
    if !c.model.is_valid() {
        return false;
    }
    let m = &c.model;
    let eval = |f: &Formula| truth_set_pointwise(m, f).ok();
    if eval(&c.target).as_ref() != Some(&c.target_set) {
        return false;
    }
    match &c.verdict {
        Verdict::Definable { witness } => witness.within(&c.signature) && eval(witness).as_ref() == Some(&c.target_set),
        Verdict::Undefinable { family } => {
            if !family.saturated || family.signature != c.signature || family.contains(&c.target_set) {
                return false;
            }
            for (set, witness) in &family.members {
                if !witness.within(&c.signature) || eval(witness).as_ref() != Some(set) {
                    return false;
                }
            }
            let lands = |f: Formula| eval(&f).is_some_and(|t| family.contains(&t));
            if !seeds(&c.signature).into_iter().all(&lands) {
                return false;
            }
            let witnesses: Vec<&Formula> = family.members.values().collect();
            for op in c.signature.unary_connectives() {
                if !witnesses.iter().all(|w| lands(Formula::apply(&op, (*w).clone(), None))) {
                    return false;
                }
            }
            if c.signature.allow_or {
                for a in &witnesses {
                    for b in &witnesses {
                        if !lands(Formula::or((*a).clone(), (*b).clone())) {
                            return false;
                        }
                    }
                }
            }
            true
        }
    }
}

/// Truth sets of all formulas over `sig` up to `max_size`, each evaluated
/// point by point. Converges to `close(m, sig)` as `max_size` grows.
pub fn oracle_family(m: &Model, sig: &Signature, max_size: usize) -> Result<BTreeSet<TruthSet>, AlgebraError> {
    check_signature(m, sig)?;
    let mut out = BTreeSet::new();
    for f in enumerate_formulas(sig, max_size) {
        out.insert(truth_set_pointwise(m, &f)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{fixture, Fixture};
    use crate::syntax::parse_formula;

    fn f(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    fn sig(s: &str) -> Signature {
        s.parse().unwrap()
    }

    fn ts(m: &Model, s: &str) -> TruthSet {
        truth_set(m, &f(s)).unwrap()
    }

    fn lemma2_family(m: &Model) -> BTreeSet<TruthSet> {
        ["p", "false", "!p", "true"].iter().map(|s| ts(m, s)).collect()
    }

    #[test]
    fn boolean_closure_of_one_prop() {
        let m = fixture(Fixture::MDr);
        assert_eq!(close(&m, &sig("p;not,or")).unwrap().sets(), lemma2_family(&m));
    }

    #[test]
    fn de_re_closure_on_m_dr() {
        let m = fixture(Fixture::MDr);
        let fam = close(&m, &sig("p;not,or;R[Ann]")).unwrap();
        assert_eq!(fam.sets(), lemma2_family(&m));
        assert!(fam.is_closed_on(&m).unwrap());
        // minimal witnesses in finalization order
        let listed: Vec<String> = fam.members.values().map(print_formula).collect();
        assert_eq!(listed, ["p", "!p", "R[Ann] p", "!R[Ann] p"]);
    }

    #[test]
    fn de_dicto_and_at_closure_on_m_rd() {
        let m = fixture(Fixture::MRd);
        let fam = close(&m, &sig("p;not,or;D[Ann],@[Ann]")).unwrap();
        assert_eq!(fam.sets(), lemma2_family(&m));
    }

    #[test]
    fn de_dicto_closure_on_m_dr_contains_target() {
        let m = fixture(Fixture::MDr);
        let fam = close(&m, &sig("p;not,or;D[Ann]")).unwrap();
        let target = TruthSet::from_labels(&m, &[("w", "a"), ("w", "b"), ("u", "a"), ("u", "b")]);
        assert_eq!(fam.witness(&target), Some(&f("D[Ann] p")));
        assert!(fam.is_closed_on(&m).unwrap());
    }

    #[test]
    fn witnesses_are_sound_and_minimal_against_enumeration() {
        let m = fixture(Fixture::MDr);
        let s = sig("p;not,or;D[Ann]");
        let fam = close(&m, &s).unwrap();
        for (set, w) in &fam.members {
            assert_eq!(&truth_set(&m, w).unwrap(), set);
            if w.size() > 6 {
                continue;
            }
            let first = enumerate_formulas(&s, w.size())
                .find(|g| truth_set(&m, g).unwrap() == *set)
                .unwrap();
            assert_eq!(first.size(), w.size(), "witness {w} is not minimal");
        }
    }

    #[test]
    fn constants_seed_only_when_enabled() {
        let m = fixture(Fixture::MDr);
        assert_eq!(close(&m, &sig("p")).unwrap().len(), 1);
        assert_eq!(close(&m, &sig("p,false")).unwrap().len(), 2);
        assert_eq!(close(&m, &sig("true")).unwrap().len(), 1);
        assert!(close(&m, &sig("")).unwrap().is_empty());
    }

    #[test]
    fn decide_examples() {
        let dr = fixture(Fixture::MDr);
        let c = decide_definability(&dr, &f("D[Ann] p"), &sig("p;not,or;R[Ann]")).unwrap();
        match &c.verdict {
            Verdict::Undefinable { family } => assert_eq!(family.len(), 4),
            v => panic!("{v:?}"),
        }
        assert!(verify_certificate(&c));

        let rd = fixture(Fixture::MRd);
        let c = decide_definability(&rd, &f("R[Ann] p"), &sig("p;not,or;D[Ann],@[Ann]")).unwrap();
        assert!(!c.is_definable());
        assert_eq!(c.target_set, TruthSet::from_labels(&rd, &[("w", "b"), ("u", "b")]));
        assert!(verify_certificate(&c));

        let c = decide_definability(&dr, &f("D[Ann] p"), &sig("p;not,or;R[Ann],@[Ann]")).unwrap();
        assert!(c.is_definable());
        assert!(verify_certificate(&c));
        assert!(equivalent(&dr, "R[Ann] @[Ann] p", "D[Ann] p"));
    }

    fn equivalent(m: &Model, a: &str, b: &str) -> bool {
        crate::semantics::equivalent_on(m, &f(a), &f(b)).unwrap()
    }

    #[test]
    fn tampered_certificates_fail() {
        let m = fixture(Fixture::MDr);
        let good = decide_definability(&m, &f("D[Ann] p"), &sig("p;not,or;R[Ann]")).unwrap();

        let mut dropped = good.clone();
        if let Verdict::Undefinable { family } = &mut dropped.verdict {
            family.members.shift_remove_index(2);
        }
        assert!(!verify_certificate(&dropped));

        let mut wrong_witness = good.clone();
        if let Verdict::Undefinable { family } = &mut wrong_witness.verdict {
            let first = family.members.get_index_mut(0).unwrap().1;
            *first = f("!p");
        }
        assert!(!verify_certificate(&wrong_witness));

        let mut wrong_target = good.clone();
        wrong_target.target_set = wrong_target.target_set.complement();
        assert!(!verify_certificate(&wrong_target));

        let definable = decide_definability(&m, &f("D[Ann] p"), &sig("p;not,or;R[Ann],@[Ann]")).unwrap();
        let mut bad = definable.clone();
        bad.verdict = Verdict::Definable { witness: f("R[Ann] p") };
        assert!(!verify_certificate(&bad));
        let mut off_signature = definable;
        off_signature.verdict = Verdict::Definable { witness: f("D[Ann] p") };
        assert!(!verify_certificate(&off_signature));
    }

    #[test]
    fn oracle_examples() {
        let dr = fixture(Fixture::MDr);
        let s = sig("p;not,or;R[Ann]");
        assert_eq!(oracle_family(&dr, &s, 6).unwrap(), close(&dr, &s).unwrap().sets());
        assert_eq!(oracle_family(&dr, &sig("p"), 1).unwrap(), BTreeSet::from([ts(&dr, "p")]));

        let rd = fixture(Fixture::MRd);
        let s = sig("p;not,or;D[Ann],@[Ann]");
        let oracle = oracle_family(&rd, &s, 6).unwrap();
        assert_eq!(oracle.len(), 4);
        assert!(!oracle.contains(&ts(&rd, "R[Ann] p")));
    }

    #[test]
    fn undeclared_signature_members() {
        let m = fixture(Fixture::MDr);
        assert!(matches!(
            close(&m, &sig("p;not;R[Bob]")),
            Err(AlgebraError::Eval(EvalError::UndeclaredName(_)))
        ));
        assert!(matches!(
            close(&m, &sig("q;not")),
            Err(AlgebraError::Eval(EvalError::UndeclaredProp(_)))
        ));
    }
}
