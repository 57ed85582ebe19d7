use super::{print_formula, Connective, Formula, Signature};

/// Streams every formula over a signature up to a size bound.
///
/// Order: by [`Formula::size`], then by the printed form compared as
/// bytes. Only primitive connectives are generated (`!`, `|`, the enabled
/// modalities, props and enabled constants), so each formula appears once.
pub struct FormulaEnumerator {
    sig: Signature,
    max_size: usize,
    unary: Vec<Connective>,
    // layers[k] holds all formulas of size k + 1
    layers: Vec<Vec<Formula>>,
    next: usize,
}

impl FormulaEnumerator {
    pub fn new(sig: &Signature, max_size: usize) -> Self {
        FormulaEnumerator {
            unary: sig.unary_connectives(),
            sig: sig.clone(),
            max_size,
            layers: Vec::new(),
            next: 0,
        }
    }

    fn build_layer(&self, size: usize) -> Vec<Formula> {
        let mut out: Vec<Formula> = Vec::new();
        if size == 1 {
            out.extend(self.sig.props.iter().cloned().map(Formula::Prop));
            if self.sig.allow_true {
                out.push(Formula::True);
            }
            if self.sig.allow_false {
                out.push(Formula::False);
            }
        } else {
            for conn in &self.unary {
                for f in &self.layers[size - 2] {
                    out.push(Formula::apply(conn, f.clone(), None));
                }
            }
            if self.sig.allow_or {
                // left operand size i, right size size - 1 - i
                for i in 1..size - 1 {
                    let j = size - 1 - i;
                    for a in &self.layers[i - 1] {
                        for b in &self.layers[j - 1] {
                            out.push(Formula::or(a.clone(), b.clone()));
                        }
                    }
                }
            }
        }
        let mut keyed: Vec<(String, Formula)> = out.into_iter().map(|f| (print_formula(&f), f)).collect();
        keyed.sort_by(|a, b| a.0.cmp(&b.0));
        keyed.into_iter().map(|(_, f)| f).collect()
    }
}

impl Iterator for FormulaEnumerator {
    type Item = Formula;

    fn next(&mut self) -> Option<Formula> {
        loop {
            let layer = self.layers.len();
            if layer > 0 && self.next < self.layers[layer - 1].len() {
                self.next += 1;
                return Some(self.layers[layer - 1][self.next - 1].clone());
            }
            if layer >= self.max_size || self.sig.is_empty() {
                return None;
            }
            let built = self.build_layer(layer + 1);
            self.layers.push(built);
            self.next = 0;
        }
    }
}

/// All formulas over `sig` of size at most `max_size`, smallest first.
pub fn enumerate_formulas(sig: &Signature, max_size: usize) -> FormulaEnumerator {
    FormulaEnumerator::new(sig, max_size)
}
