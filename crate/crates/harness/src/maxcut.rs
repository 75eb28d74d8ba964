//! MaxCut instances and their cost Hamiltonians.

use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use vdcut_core::{Error, PauliObservable, PauliString, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MaxCutProblem {
    vertices: usize,
    edges: Vec<(usize, usize)>,
}

impl MaxCutProblem {
    /// Edges are stored as given; self-loops, duplicates (in either
    /// orientation) and out-of-range vertices are rejected.
    pub fn new(vertices: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for &(a, b) in &edges {
            if a >= vertices || b >= vertices {
                return Err(Error::Invalid(format!("edge ({a}, {b}) outside {vertices} vertices")));
            }
            if a == b {
                return Err(Error::Invalid(format!("self-loop on vertex {a}")));
            }
            if !seen.insert((a.min(b), a.max(b))) {
                return Err(Error::Invalid(format!("duplicate edge ({a}, {b})")));
            }
        }
        Ok(Self { vertices, edges })
    }

    /// Cycle graph on `n` vertices; two vertices give a single edge.
    pub fn ring(n: usize) -> Result<Self> {
        match n {
            0 | 1 => Err(Error::Invalid(format!("a ring needs at least 2 vertices, got {n}"))),
            2 => Self::new(2, vec![(0, 1)]),
            _ => Self::new(n, (0..n).map(|i| (i, (i + 1) % n)).collect()),
        }
    }

    /// Parses one `a b` edge per line. `#` starts a comment; an optional
    /// `vertices N` line fixes the vertex count (default: largest index + 1).
    pub fn from_edge_list(text: &str) -> Result<Self> {
        let mut vertices = None;
        let mut edges = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let parse = |s: &str| s.parse::<usize>().map_err(|e| Error::Parse { line: i + 1, msg: e.to_string() });
            let fields: Vec<&str> = line.split_whitespace().collect();
            match fields.as_slice() {
                ["vertices", n] => vertices = Some(parse(n)?),
                [a, b] => edges.push((parse(a)?, parse(b)?)),
                _ => return Err(Error::Parse { line: i + 1, msg: format!("expected `a b`, got `{line}`") }),
            }
        }
        let needed = edges.iter().map(|&(a, b)| a.max(b) + 1).max().unwrap_or(0);
        Self::new(vertices.unwrap_or(needed), edges)
    }

    pub fn vertices(&self) -> usize {
        self.vertices
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// `Σ_(a,b) ½(1 − Z_a Z_b)`.
    pub fn hamiltonian(&self) -> PauliObservable {
        let n = self.vertices;
        let mut h = PauliObservable::new(n);
        for &(a, b) in &self.edges {
            h.add_term(0.5, PauliString::identity(n)).expect("width matches");
            h.add_term(-0.5, PauliString::z_on(n, &[a, b])).expect("width matches");
        }
        h
    }

    /// Number of edges cut by the assignment (bit `v` is vertex `v`'s side).
    pub fn cut_value(&self, assignment: usize) -> usize {
        self.edges.iter().filter(|&&(a, b)| ((assignment >> a) ^ (assignment >> b)) & 1 == 1).count()
    }

    /// Best cut by enumeration; ties go to the smallest assignment.
    pub fn max_cut(&self) -> (usize, usize) {
        (0..1usize << self.vertices).map(|x| (self.cut_value(x), x)).fold((0, 0), |best, (v, x)| if v > best.0 { (v, x) } else { best })
    }
}
