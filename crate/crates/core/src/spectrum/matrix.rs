//! Hermitian adjacency matrices with entries in `{0, 1, i, -i}`, plus their
//! CSV and DOT renderings.

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::classes::SymbolSet;
use crate::group::{GroupError, GroupSpec};
use crate::Limits;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Entry {
    Zero,
    /// Undirected edge.
    One,
    /// Arc from row to column.
    PlusI,
    /// Arc from column to row.
    MinusI,
}

impl Entry {
    pub fn conj(self) -> Self {
        match self {
            Entry::PlusI => Entry::MinusI,
            Entry::MinusI => Entry::PlusI,
            other => other,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Entry::Zero => "0",
            Entry::One => "1",
            Entry::PlusI => "i",
            Entry::MinusI => "-i",
        }
    }

    /// `(re, im)` as small integers.
    pub fn parts(self) -> (i8, i8) {
        match self {
            Entry::Zero => (0, 0),
            Entry::One => (1, 0),
            Entry::PlusI => (0, 1),
            Entry::MinusI => (0, -1),
        }
    }
}

impl fmt::Display for Entry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Serialize for Entry {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatrixError {
    #[error("entry ({row}, {col}) is not the conjugate of its transpose")]
    NotHermitian { row: usize, col: usize },
    #[error("diagonal entry {0} is nonzero")]
    NonzeroDiagonal(usize),
    #[error("expected {expected} entries, got {found}")]
    BadShape { expected: usize, found: usize },
    #[error("DOT line {line}: {message}")]
    Dot { line: usize, message: String },
}

/// Dense code matrix, rows and columns in group enumeration order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HermitianMatrix {
    dim: usize,
    entries: Vec<Entry>,
}

impl HermitianMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            entries: vec![Entry::Zero; dim * dim],
        }
    }

    /// Validates a row-major entry list.
    pub fn from_entries(dim: usize, entries: Vec<Entry>) -> Result<Self, MatrixError> {
        if entries.len() != dim * dim {
            return Err(MatrixError::BadShape {
                expected: dim * dim,
                found: entries.len(),
            });
        }
        let m = Self { dim, entries };
        m.validate()?;
        Ok(m)
    }

    fn validate(&self) -> Result<(), MatrixError> {
        for u in 0..self.dim {
            if self.get(u, u) != Entry::Zero {
                return Err(MatrixError::NonzeroDiagonal(u));
            }
            for v in u + 1..self.dim {
                if self.get(u, v) != self.get(v, u).conj() {
                    return Err(MatrixError::NotHermitian { row: u, col: v });
                }
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> Entry {
        self.entries[row * self.dim + col]
    }

    fn set(&mut self, row: usize, col: usize, e: Entry) {
        self.entries[row * self.dim + col] = e;
    }

    pub fn row(&self, row: usize) -> &[Entry] {
        &self.entries[row * self.dim..(row + 1) * self.dim]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Entry]> {
        self.entries.chunks(self.dim.max(1)).take(self.dim)
    }

    /// One line per row, entries comma-separated.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for row in self.rows() {
            let line: Vec<_> = row.iter().map(|e| e.as_str()).collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }

    /// DOT digraph: undirected edges appear once as `u -> v [dir=none]`,
    /// arcs as plain `u -> v`. Nodes are declared in index order.
    pub fn to_dot(&self, name: &str, labels: &[String]) -> String {
        assert_eq!(labels.len(), self.dim);
        let mut out = format!("digraph \"{name}\" {{\n");
        for label in labels {
            out.push_str(&format!("  \"{label}\";\n"));
        }
        for u in 0..self.dim {
            for v in 0..self.dim {
                match self.get(u, v) {
                    Entry::One if u < v => {
                        out.push_str(&format!("  \"{}\" -> \"{}\" [dir=none];\n", labels[u], labels[v]))
                    }
                    Entry::PlusI => out.push_str(&format!("  \"{}\" -> \"{}\";\n", labels[u], labels[v])),
                    _ => {}
                }
            }
        }
        out.push_str("}\n");
        out
    }

    /// Inverse of [`to_dot`](Self::to_dot): returns node labels and matrix.
    pub fn parse_dot(text: &str) -> Result<(Vec<String>, Self), MatrixError> {
        let mut labels: Vec<String> = Vec::new();
        let mut index: HashMap<String, usize> = HashMap::new();
        let mut edges: Vec<(usize, String, String, bool)> = Vec::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.trim();
            let err = |message: &str| MatrixError::Dot {
                line: n + 1,
                message: message.to_string(),
            };
            if line.is_empty() || line == "}" || line.starts_with("digraph") {
                continue;
            }
            let body = line.strip_suffix(';').ok_or_else(|| err("missing `;`"))?;
            let (body, undirected) = match body.strip_suffix("[dir=none]") {
                Some(rest) => (rest.trim(), true),
                None => (body, false),
            };
            match body.split_once("->") {
                Some((from, to)) => {
                    let from = unquote(from).ok_or_else(|| err("bad node name"))?;
                    let to = unquote(to).ok_or_else(|| err("bad node name"))?;
                    edges.push((n + 1, from, to, undirected));
                }
                None => {
                    let label = unquote(body).ok_or_else(|| err("bad node name"))?;
                    index.insert(label.clone(), labels.len());
                    labels.push(label);
                }
            }
        }
        let mut m = Self::zeros(labels.len());
        for (line, from, to, undirected) in edges {
            let lookup = |name: &str| {
                index.get(name).copied().ok_or_else(|| MatrixError::Dot {
                    line,
                    message: format!("undeclared node {name:?}"),
                })
            };
            let (u, v) = (lookup(&from)?, lookup(&to)?);
            if undirected {
                m.set(u, v, Entry::One);
                m.set(v, u, Entry::One);
            } else {
                m.set(u, v, Entry::PlusI);
                m.set(v, u, Entry::MinusI);
            }
        }
        m.validate()?;
        Ok((labels, m))
    }

    /// The real symmetric `2n x 2n` matrix `[[A, -B], [B, A]]` for
    /// `H = A + iB`, row-major, with rows and columns permuted so that index
    /// `2u` carries the real part of coordinate `u` and `2u + 1` the
    /// imaginary part. Each entry `a + ib` becomes the block `[[a, -b], [b, a]]`.
    ///
    /// The permutation does not change the spectrum. It matters for the
    /// cyclic Jacobi solver: in the split `[A; B]` order the two copies of a
    /// doubled eigenvalue sit `n` indices apart and row-cyclic sweeps can
    /// stall at a linear rate on oriented circulants (`Z5`, `S = {1}` needs
    /// more than 30 sweeps).
    pub fn real_embedding<F: num_traits::Float>(&self) -> Vec<F> {
        let n = self.dim;
        let w = 2 * n;
        let mut out = vec![F::zero(); w * w];
        let f = |x: i8| F::from(x).unwrap();
        for u in 0..n {
            for v in 0..n {
                let (re, im) = self.get(u, v).parts();
                out[2 * u * w + 2 * v] = f(re);
                out[(2 * u + 1) * w + 2 * v + 1] = f(re);
                out[2 * u * w + 2 * v + 1] = f(-im);
                out[(2 * u + 1) * w + 2 * v] = f(im);
            }
        }
        out
    }
}

fn unquote(s: &str) -> Option<String> {
    s.trim().strip_prefix('"')?.strip_suffix('"').map(str::to_string)
}

/// `H(a, b) = 1` if `b - a` is in the symmetric part, `i` if `b - a` is in
/// the skew part, `-i` if `a - b` is, else `0`.
pub fn hermitian_matrix(set: &SymbolSet, limits: &Limits) -> Result<HermitianMatrix, GroupError> {
    let g: &GroupSpec = set.group();
    limits.check_dense(g)?;
    let n = g.order() as usize;
    let (sym, skew) = set.skew_split();
    let mut m = HermitianMatrix::zeros(n);
    let elements: Vec<_> = g.elements().collect();
    for (ia, a) in elements.iter().enumerate() {
        for s in sym.iter() {
            let b = g.add_unchecked(a, s);
            m.set(ia, g.index_of(&b), Entry::One);
        }
        for s in skew.iter() {
            let b = g.add_unchecked(a, s);
            let ib = g.index_of(&b);
            m.set(ia, ib, Entry::PlusI);
            m.set(ib, ia, Entry::MinusI);
        }
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::parse_group_spec;

    fn matrix(group: &str, set: &str) -> HermitianMatrix {
        let g = parse_group_spec(group).unwrap();
        hermitian_matrix(&SymbolSet::parse(&g, set).unwrap(), &Limits::default()).unwrap()
    }

    fn first_row(m: &HermitianMatrix) -> Vec<&'static str> {
        m.row(0).iter().map(|e| e.as_str()).collect()
    }

    #[test]
    fn first_rows() {
        assert_eq!(first_row(&matrix("Z4", "1")), ["0", "i", "0", "-i"]);
        assert_eq!(first_row(&matrix("Z4", "1,3")), ["0", "1", "0", "1"]);
        assert_eq!(matrix("Z2xZ3", ""), HermitianMatrix::zeros(6));
    }

    #[test]
    fn matrices_are_hermitian() {
        let m = matrix("Z12", "1,2,3,9,10");
        assert!(HermitianMatrix::from_entries(m.dim(), m.entries.clone()).is_ok());
    }

    #[test]
    fn from_entries_validates() {
        use Entry::*;
        assert_eq!(
            HermitianMatrix::from_entries(2, vec![Zero, PlusI, PlusI, Zero]),
            Err(MatrixError::NotHermitian { row: 0, col: 1 })
        );
        assert_eq!(
            HermitianMatrix::from_entries(2, vec![One, Zero, Zero, Zero]),
            Err(MatrixError::NonzeroDiagonal(0))
        );
        assert!(HermitianMatrix::from_entries(2, vec![Zero]).is_err());
    }

    #[test]
    fn csv_rows() {
        assert_eq!(matrix("Z4", "1").to_csv(), "0,i,0,-i\n-i,0,i,0\n0,-i,0,i\ni,0,-i,0\n");
    }

    #[test]
    fn dot_round_trip() {
        let g = parse_group_spec("Z2xZ4").unwrap();
        let m = matrix("Z2xZ4", "0,1;1,0;1,2;1,3");
        let labels: Vec<_> = g.elements().map(|x| x.to_string()).collect();
        let dot = m.to_dot("Z2xZ4", &labels);
        let (parsed_labels, parsed) = HermitianMatrix::parse_dot(&dot).unwrap();
        assert_eq!(parsed_labels, labels);
        assert_eq!(parsed, m);
    }

    #[test]
    fn dot_parse_errors() {
        assert!(matches!(
            HermitianMatrix::parse_dot("digraph \"x\" {\n  \"0\";\n  \"0\" -> \"1\";\n}\n"),
            Err(MatrixError::Dot { line: 3, .. })
        ));
        assert!(matches!(
            HermitianMatrix::parse_dot("digraph \"x\" {\n  \"0\"\n}\n"),
            Err(MatrixError::Dot { line: 2, .. })
        ));
    }

    #[test]
    fn embedding_is_symmetric() {
        let m = matrix("Z5", "1,2,3");
        let e: Vec<f64> = m.real_embedding();
        let w = 10;
        for r in 0..w {
            for c in 0..w {
                assert_eq!(e[r * w + c], e[c * w + r]);
            }
        }
    }

    #[test]
    fn embedding_interleaves_real_and_imaginary_parts() {
        // Z4, S = {1}: H(0, 1) = i becomes [[0, -1], [1, 0]]
        let m = matrix("Z4", "1");
        let e: Vec<f64> = m.real_embedding();
        let w = 8;
        assert_eq!([e[2], e[3], e[w + 2], e[w + 3]], [0.0, -1.0, 1.0, 0.0]);
    }
}
