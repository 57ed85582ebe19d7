//! Random formulas for property checks over random models.

use rand::Rng;

use crate::model::Model;
use crate::syntax::{Formula, Name, Prop};

/// Vocabulary and shape bounds for random formulas.
#[derive(Clone, Debug)]
pub struct FormulaGen {
    pub props: Vec<Prop>,
    pub names: Vec<Name>,
    pub max_depth: usize,
    /// Also emit `&`, `->`, `true` and `false`.
    pub derived: bool,
}

impl FormulaGen {
    /// Uses every prop and name declared in `m`.
    pub fn for_model(m: &Model, max_depth: usize) -> Self {
        FormulaGen {
            props: m.props.clone(),
            names: m.names.clone(),
            max_depth,
            derived: true,
        }
    }

    pub fn without_names(mut self, exclude: impl Fn(&Name) -> bool) -> Self {
        self.names.retain(|n| !exclude(n));
        self
    }

    fn leaf<R: Rng>(&self, rng: &mut R) -> Formula {
        let constants = if self.derived || self.props.is_empty() { 2 } else { 0 };
        let pick = rng.gen_range(0..self.props.len() + constants);
        match self.props.get(pick) {
            Some(p) => Formula::Prop(p.clone()),
            None if pick == self.props.len() => Formula::True,
            None => Formula::False,
        }
    }

    pub fn generate<R: Rng>(&self, rng: &mut R) -> Formula {
        self.generate_at(rng, self.max_depth)
    }

    fn generate_at<R: Rng>(&self, rng: &mut R, depth: usize) -> Formula {
        if depth == 0 || rng.gen_ratio(1, 4) {
            return self.leaf(rng);
        }
        let kinds = if self.names.is_empty() { 2 } else { 5 } + if self.derived { 2 } else { 0 };
        let kind = rng.gen_range(0..kinds);
        let sub = |rng: &mut R| self.generate_at(rng, depth - 1);
        let name = |rng: &mut R| self.names[rng.gen_range(0..self.names.len())].clone();
        match (kind, self.names.is_empty()) {
            (0, _) => Formula::not(sub(rng)),
            (1, _) => Formula::or(sub(rng), sub(rng)),
            (2, false) => Formula::at(name(rng), sub(rng)),
            (3, false) => Formula::de_re(name(rng), sub(rng)),
            (4, false) => Formula::de_dicto(name(rng), sub(rng)),
            (k, _) if k == kinds - 2 => Formula::and(sub(rng), sub(rng)),
            _ => Formula::implies(sub(rng), sub(rng)),
        }
    }
}
