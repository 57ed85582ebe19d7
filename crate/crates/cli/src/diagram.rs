use dere_core::{Model, TruthSet};

/// A truth set drawn as a grid: one row per world, one column per agent,
/// `#` for members and `.` otherwise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagram {
    pub rows: Vec<String>,
    pub cols: Vec<String>,
    pub cells: Vec<Vec<bool>>,
}

impl Diagram {
    pub fn new(m: &Model, t: &TruthSet) -> Self {
        let na = m.agents.len();
        Diagram {
            rows: m.worlds.clone(),
            cols: m.agents.clone(),
            cells: (0..m.worlds.len())
                .map(|w| (0..na).map(|a| t.contains(w * na + a)).collect())
                .collect(),
        }
    }

    pub fn to_truth_set(&self) -> TruthSet {
        let mut t = TruthSet::empty(self.rows.len() * self.cols.len());
        for (i, cell) in self.cells.iter().flatten().enumerate() {
            t.set(i, *cell);
        }
        t
    }

    pub fn render(&self) -> String {
        let label = self.rows.iter().map(String::len).max().unwrap_or(0);
        let width = self.cols.iter().map(String::len).max().unwrap_or(1);
        let mut out = format!("{:label$}", "");
        for c in &self.cols {
            out.push_str(&format!(" {c:>width$}"));
        }
        out.push('\n');
        for (r, row) in self.rows.iter().zip(&self.cells) {
            out.push_str(&format!("{r:label$}"));
            for &cell in row {
                out.push_str(&format!(" {:>width$}", if cell { '#' } else { '.' }));
            }
            out.push('\n');
        }
        out
    }

    /// Reads back the output of [`Diagram::render`].
    pub fn parse(text: &str) -> Option<Self> {
        let mut lines = text.lines();
        let cols: Vec<String> = lines.next()?.split_whitespace().map(str::to_string).collect();
        let mut rows = Vec::new();
        let mut cells = Vec::new();
        for line in lines {
            let mut parts = line.split_whitespace();
            rows.push(parts.next()?.to_string());
            let row: Option<Vec<bool>> = parts
                .map(|c| match c {
                    "#" => Some(true),
                    "." => Some(false),
                    _ => None,
                })
                .collect();
            let row = row?;
            if row.len() != cols.len() {
                return None;
            }
            cells.push(row);
        }
        Some(Diagram { rows, cols, cells })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use dere_core::{fixture, parse_formula, truth_set, Fixture};

    #[test]
    fn p_on_m_dr() {
        let m = fixture(Fixture::MDr);
        let d = Diagram::new(&m, &truth_set(&m, &parse_formula("p").unwrap()).unwrap());
        assert_eq!(d.render(), "  a b\nw # .\nu . #\nv . #\nt # .\n");
    }

    #[test]
    fn render_round_trips() {
        for fx in Fixture::ALL {
            let m = fixture(fx);
            for f in ["p", "D[Ann] p", "R[Ann] p", "!@[Ann] p", "true", "false"] {
                let t = truth_set(&m, &parse_formula(f).unwrap()).unwrap();
                let d = Diagram::new(&m, &t);
                let back = Diagram::parse(&d.render()).unwrap();
                assert_eq!(back, d);
                assert_eq!(back.to_truth_set(), t);
            }
        }
    }
}
