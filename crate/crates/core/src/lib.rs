//! Egocentric epistemic logic with nonrigid names.
//!
//! Formulas are evaluated at a world and an agent. Besides the Boolean
//! connectives the language has `@[n]` (about the agent named `n`),
//! `R[n]` (de re knowledge) and `D[n]` (de dicto knowledge). The crate
//! model-checks such formulas on finite models and decides, per model,
//! whether a truth set is reachable from a signature of connectives.

pub mod algebra;
pub mod model;
pub mod reproduce;
pub mod semantics;
pub mod syntax;
pub mod testgen;

pub use algebra::{close, decide_definability, oracle_family, verify_certificate, Certificate, ClosureFamily, Verdict};
pub use model::{fixture, validate_model, Fixture, Model, PointedQuery};
pub use semantics::{apply_op, equivalent_on, satisfies, truth_set, TruthSet};
pub use syntax::{enumerate_formulas, parse_formula, print_formula, Formula, Name, Prop, Signature};
