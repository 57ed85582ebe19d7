//! Satisfaction, truth sets and per-model equivalence.
//!
//! Formulas are evaluated at a world–agent pair. With `R[n]` the referent
//! of `n` is fixed at the evaluation world; with `D[n]` it is looked up
//! again in every indistinguishable world. In agent-specific models the
//! lookup is always made on behalf of the evaluating agent.

mod truth_set;

use std::collections::HashMap;

use thiserror::Error;

pub use truth_set::TruthSet;

use crate::model::{ExtensionMode, Model, PointedQuery};
use crate::syntax::{Connective, Formula, Name, Prop};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("undeclared name `{0}`")]
    UndeclaredName(Name),
    #[error("undeclared proposition `{0}`")]
    UndeclaredProp(Prop),
    #[error("the self name `se` is only available in agent-specific models")]
    SelfInRigidMode,
    #[error("point out of range")]
    PointOutOfRange,
    #[error("{op} takes {expected} argument(s), got {got}")]
    Arity {
        op: Connective,
        expected: usize,
        got: usize,
    },
    #[error("truth set of length {got} does not belong to a model with {expected} points")]
    ForeignTruthSet { expected: usize, got: usize },
}

fn name_index(m: &Model, n: &Name) -> Result<usize, EvalError> {
    if n.is_self() && m.mode() == ExtensionMode::Rigid {
        return Err(EvalError::SelfInRigidMode);
    }
    m.name_index(n).ok_or_else(|| EvalError::UndeclaredName(n.clone()))
}

/// Checks that every name and proposition of `f` is usable on `m`.
pub fn check_formula(m: &Model, f: &Formula) -> Result<(), EvalError> {
    for n in f.names() {
        name_index(m, n)?;
    }
    for p in f.props() {
        m.prop_index(p).ok_or_else(|| EvalError::UndeclaredProp(p.clone()))?;
    }
    Ok(())
}

/// Whether `f` holds at `q`, by direct recursion on the satisfaction
/// clauses. Independent of the truth-set machinery below.
pub fn satisfies(m: &Model, q: PointedQuery, f: &Formula) -> Result<bool, EvalError> {
    if q.world >= m.worlds.len() || q.agent >= m.agents.len() {
        return Err(EvalError::PointOutOfRange);
    }
    check_formula(m, f)?;
    Ok(holds(m, q.world, q.agent, f))
}

fn same_block(m: &Model, agent: usize, world: usize) -> &[usize] {
    m.indist[agent]
        .iter()
        .find(|b| b.contains(&world))
        .map(Vec::as_slice)
        .expect("valid partition covers every world")
}

fn holds(m: &Model, w: usize, a: usize, f: &Formula) -> bool {
    let name = |n: &Name| m.name_index(n).expect("checked");
    match f {
        Formula::True => true,
        Formula::False => false,
        Formula::Prop(p) => {
            let i = m.prop_index(p).expect("checked");
            m.valuation[i].contains(&(w, a))
        }
        Formula::Not(g) => !holds(m, w, a, g),
        Formula::Or(g, h) => holds(m, w, a, g) || holds(m, w, a, h),
        Formula::And(g, h) => holds(m, w, a, g) && holds(m, w, a, h),
        Formula::Implies(g, h) => !holds(m, w, a, g) || holds(m, w, a, h),
        Formula::At(n, g) => holds(m, w, m.referent(w, a, name(n)), g),
        Formula::DeRe(n, g) => {
            let r = m.referent(w, a, name(n));
            same_block(m, a, w).iter().all(|&u| holds(m, u, r, g))
        }
        Formula::DeDicto(n, g) => {
            let n = name(n);
            same_block(m, a, w).iter().all(|&u| holds(m, u, m.referent(u, a, n), g))
        }
    }
}

/// Applies one connective to truth sets of `m`.
pub fn apply_op(m: &Model, op: &Connective, args: &[&TruthSet]) -> Result<TruthSet, EvalError> {
    Transformer::new(m).apply(op, args)
}

/// Connectives as truth-set transformers over one model, with the
/// partition lookup computed once.
pub(crate) struct Transformer<'m> {
    m: &'m Model,
    block_of: Vec<Vec<usize>>,
}

impl<'m> Transformer<'m> {
    pub(crate) fn new(m: &'m Model) -> Self {
        Transformer {
            m,
            block_of: m.block_lookup(),
        }
    }

    pub(crate) fn apply(&self, op: &Connective, args: &[&TruthSet]) -> Result<TruthSet, EvalError> {
        let m = self.m;
        if args.len() != op.arity() {
            return Err(EvalError::Arity {
                op: op.clone(),
                expected: op.arity(),
                got: args.len(),
            });
        }
        let expected = m.n_points();
        if let Some(bad) = args.iter().find(|t| t.len() != expected) {
            return Err(EvalError::ForeignTruthSet { expected, got: bad.len() });
        }
        match op {
            Connective::Not => Ok(args[0].complement()),
            Connective::Or => Ok(args[0].union(args[1])),
            Connective::At(n) | Connective::DeRe(n) | Connective::DeDicto(n) => {
                let n = name_index(m, n)?;
                Ok(self.modal(op, n, args[0]))
            }
        }
    }

    fn modal(&self, op: &Connective, n: usize, arg: &TruthSet) -> TruthSet {
        let m = self.m;
        let na = m.agents.len();
        let at = |w: usize, a: usize| arg.contains(w * na + a);
        let mut out = TruthSet::empty_for(m);
        for a in 0..na {
            let blocks = &m.indist[a];
            for w in 0..m.worlds.len() {
                let block = &blocks[self.block_of[a][w]];
                let value = match op {
                    Connective::At(_) => at(w, m.referent(w, a, n)),
                    Connective::DeRe(_) => {
                        let r = m.referent(w, a, n);
                        block.iter().all(|&u| at(u, r))
                    }
                    Connective::DeDicto(_) => block.iter().all(|&u| at(u, m.referent(u, a, n))),
                    Connective::Not | Connective::Or => unreachable!("boolean connectives are not modal"),
                };
                out.set(w * na + a, value);
            }
        }
        out
    }
}

/// The truth set of `f`, computed bottom-up with one transformer
/// application per distinct subformula.
pub fn truth_set(m: &Model, f: &Formula) -> Result<TruthSet, EvalError> {
    check_formula(m, f)?;
    let modal = Transformer::new(m);
    let mut memo: HashMap<&Formula, TruthSet> = HashMap::new();
    let mut failed = None;
    f.visit_post_order(&mut |g| {
        if failed.is_some() || memo.contains_key(g) {
            return;
        }
        let sub = |h: &Formula| memo.get(h).expect("children first");
        let set = match g {
            Formula::True => TruthSet::full_for(m),
            Formula::False => TruthSet::empty_for(m),
            Formula::Prop(p) => {
                let i = m.prop_index(p).expect("checked");
                TruthSet::from_points(
                    m,
                    m.valuation[i].iter().map(|&(world, agent)| PointedQuery { world, agent }),
                )
            }
            Formula::Not(h) => sub(h).complement(),
            Formula::Or(h, k) => sub(h).union(sub(k)),
            Formula::And(h, k) => sub(h).intersection(sub(k)),
            Formula::Implies(h, k) => sub(h).complement().union(sub(k)),
            Formula::At(n, h) | Formula::DeRe(n, h) | Formula::DeDicto(n, h) => {
                let conn = match g {
                    Formula::At(..) => Connective::At(n.clone()),
                    Formula::DeRe(..) => Connective::DeRe(n.clone()),
                    _ => Connective::DeDicto(n.clone()),
                };
                match name_index(m, n) {
                    Ok(i) => modal.modal(&conn, i, sub(h)),
                    Err(e) => {
                        failed = Some(e);
                        return;
                    }
                }
            }
        };
        memo.insert(g, set);
    });
    if let Some(e) = failed {
        return Err(e);
    }
    Ok(memo.remove(f).expect("root evaluated"))
}

/// The truth set of `f` built point by point from [`satisfies`].
pub fn truth_set_pointwise(m: &Model, f: &Formula) -> Result<TruthSet, EvalError> {
    check_formula(m, f)?;
    let mut out = TruthSet::empty_for(m);
    for (i, q) in m.points().enumerate() {
        out.set(i, holds(m, q.world, q.agent, f));
    }
    Ok(out)
}

/// Whether `f` and `g` have the same truth set on `m`.
pub fn equivalent_on(m: &Model, f: &Formula, g: &Formula) -> Result<bool, EvalError> {
    Ok(first_difference(m, f, g)?.is_none())
}

/// The first point, in row-major order, where `f` and `g` disagree.
pub fn first_difference(m: &Model, f: &Formula, g: &Formula) -> Result<Option<PointedQuery>, EvalError> {
    let a = truth_set(m, f)?;
    let b = truth_set(m, g)?;
    Ok(a.first_difference(&b).map(|i| m.point(i)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{fixture, Fixture};
    use crate::syntax::parse_formula;

    fn f(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    fn sat(fx: Fixture, w: &str, a: &str, s: &str) -> bool {
        let m = fixture(fx);
        satisfies(&m, m.query(w, a).unwrap(), &f(s)).unwrap()
    }

    #[test]
    fn satisfaction_on_fixtures() {
        assert!(sat(Fixture::MRd, "w", "b", "R[Ann] p"));
        assert!(!sat(Fixture::MRd, "w", "a", "R[Ann] p"));
        assert!(!sat(Fixture::MRd, "u", "a", "R[Ann] p"));
        assert!(sat(Fixture::MDr, "w", "a", "D[Ann] p"));
        assert!(!sat(Fixture::MDr, "v", "b", "D[Ann] p"));
        assert!(sat(Fixture::MDr, "t", "b", "true"));
        assert!(!sat(Fixture::MDr, "t", "b", "false"));
    }

    #[test]
    fn truth_sets_on_fixtures() {
        let dr = fixture(Fixture::MDr);
        assert_eq!(
            truth_set(&dr, &f("p")).unwrap(),
            TruthSet::from_labels(&dr, &[("w", "a"), ("u", "b"), ("v", "b"), ("t", "a")])
        );
        assert_eq!(
            truth_set(&dr, &f("D[Ann] p")).unwrap(),
            TruthSet::from_labels(&dr, &[("w", "a"), ("w", "b"), ("u", "a"), ("u", "b")])
        );
        assert_eq!(truth_set(&dr, &f("false")).unwrap(), TruthSet::empty_for(&dr));
        let rd = fixture(Fixture::MRd);
        assert_eq!(
            truth_set(&rd, &f("R[Ann] p")).unwrap(),
            TruthSet::from_labels(&rd, &[("w", "b"), ("u", "b")])
        );
    }

    #[test]
    fn apply_op_examples() {
        let m = fixture(Fixture::MDr);
        let p = truth_set(&m, &f("p")).unwrap();
        assert_eq!(
            apply_op(&m, &Connective::Not, &[&p]).unwrap(),
            TruthSet::from_labels(&m, &[("w", "b"), ("u", "a"), ("v", "a"), ("t", "b")])
        );
        let ann = Name::new("Ann").unwrap();
        let r = Connective::DeRe(ann);
        assert_eq!(apply_op(&m, &r, &[&p]).unwrap(), TruthSet::empty_for(&m));
        let full = TruthSet::full_for(&m);
        assert_eq!(apply_op(&m, &r, &[&full]).unwrap(), full);
    }

    #[test]
    fn apply_op_errors() {
        let m = fixture(Fixture::MDr);
        let p = truth_set(&m, &f("p")).unwrap();
        assert!(matches!(apply_op(&m, &Connective::Or, &[&p]), Err(EvalError::Arity { .. })));
        let foreign = TruthSet::empty(3);
        assert!(matches!(
            apply_op(&m, &Connective::Not, &[&foreign]),
            Err(EvalError::ForeignTruthSet { expected: 8, got: 3 })
        ));
        let bob = Connective::At(Name::new("Bob").unwrap());
        assert!(matches!(apply_op(&m, &bob, &[&p]), Err(EvalError::UndeclaredName(_))));
    }

    #[test]
    fn equivalence_examples() {
        let dr = fixture(Fixture::MDr);
        assert!(equivalent_on(&dr, &f("D[Ann] p"), &f("R[Ann] @[Ann] p")).unwrap());
        assert!(equivalent_on(&dr, &f("p"), &f("p | p")).unwrap());
        let rd = fixture(Fixture::MRd);
        assert!(!equivalent_on(&rd, &f("D[Ann] p"), &f("R[Ann] p")).unwrap());
        assert_eq!(
            first_difference(&rd, &f("D[Ann] p"), &f("R[Ann] p")).unwrap(),
            rd.query("w", "a")
        );
    }

    #[test]
    fn evaluation_errors() {
        let m = fixture(Fixture::MRd);
        let q = m.query("w", "a").unwrap();
        assert_eq!(
            satisfies(&m, q, &f("R[Bob] p")),
            Err(EvalError::UndeclaredName(Name::new("Bob").unwrap()))
        );
        assert_eq!(
            truth_set(&m, &f("q")),
            Err(EvalError::UndeclaredProp(Prop::new("q").unwrap()))
        );
        assert_eq!(truth_set(&m, &f("R[se] p")), Err(EvalError::SelfInRigidMode));
        assert_eq!(
            satisfies(&m, PointedQuery { world: 9, agent: 0 }, &f("p")),
            Err(EvalError::PointOutOfRange)
        );
    }

    #[test]
    fn empty_model_has_empty_truth_sets() {
        let m = Model {
            worlds: vec![],
            agents: vec![],
            names: vec![],
            props: vec![Prop::new("p").unwrap()],
            indist: vec![],
            extension: crate::model::Extension::Rigid(vec![]),
            valuation: vec![vec![]],
        };
        assert!(truth_set(&m, &f("true")).unwrap().is_empty());
        assert!(equivalent_on(&m, &f("p"), &f("!p")).unwrap());
    }
}
