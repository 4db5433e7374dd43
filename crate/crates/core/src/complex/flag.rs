//! Rips complexes as flag complexes over a proximity graph. A vertex
//! tuple is a simplex iff all pairs are proximate, so enumeration is
//! clique enumeration and every simplicial check reduces to vertex and
//! edge conditions.

use crate::cayley::{Ball, DistanceMatrix};
use crate::error::ComplexError;
use crate::groups::{GroupElement, GroupOracle};

use super::ExplicitComplex;

/// Dense symmetric adjacency bitmap.
#[derive(Clone)]
pub(crate) struct BitGrid {
    words_per_row: usize,
    bits: Vec<u64>,
}

impl BitGrid {
    pub(crate) fn new(n: usize) -> Self {
        let words_per_row = n.div_ceil(64);
        BitGrid {
            words_per_row,
            bits: vec![0; n * words_per_row],
        }
    }

    pub(crate) fn set(&mut self, i: usize, j: usize) {
        self.bits[i * self.words_per_row + j / 64] |= 1 << (j % 64);
        self.bits[j * self.words_per_row + i / 64] |= 1 << (i % 64);
    }

    pub(crate) fn get(&self, i: usize, j: usize) -> bool {
        self.bits[i * self.words_per_row + j / 64] & (1 << (j % 64)) != 0
    }
}

/// The Rips complex P_d restricted to a ball: the proximity graph
/// 1 ≤ d(u,v) ≤ d_param whose cliques are the simplices.
pub struct FlagComplex {
    d_param: u32,
    vertices: Vec<GroupElement>,
    labels: Vec<String>,
    adj: BitGrid,
}

/// Builds the Rips flag complex on the ball's vertex set. The 0-skeleton
/// is the ball; u ~ v iff 1 ≤ d(u,v) ≤ d.
pub fn rips_complex(o: &GroupOracle, ball: &Ball, d: u32) -> FlagComplex {
    let n = ball.vertex_count();
    let m = DistanceMatrix::from_ball(o, ball);
    let mut adj = BitGrid::new(n);
    for i in 0..n {
        for j in (i + 1)..n {
            let dist = m.get(i, j);
            if dist >= 1 && dist <= d {
                adj.set(i, j);
            }
        }
    }
    FlagComplex {
        d_param: d,
        vertices: ball.vertices().to_vec(),
        labels: ball.vertices().iter().map(|v| o.render(v)).collect(),
        adj,
    }
}

impl FlagComplex {
    pub fn d_param(&self) -> u32 {
        self.d_param
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertex(&self, i: u32) -> &GroupElement {
        &self.vertices[i as usize]
    }

    pub fn label(&self, i: u32) -> &str {
        &self.labels[i as usize]
    }

    pub fn is_edge(&self, i: u32, j: u32) -> bool {
        i != j && self.adj.get(i as usize, j as usize)
    }

    pub fn edge_count(&self) -> usize {
        let n = self.vertex_count();
        let mut count = 0;
        for i in 0..n {
            for j in (i + 1)..n {
                if self.adj.get(i, j) {
                    count += 1;
                }
            }
        }
        count
    }

    /// All cliques of size ≤ max_dim + 1, each once, sorted by
    /// (dimension, lexicographic vertex order).
    pub fn enumerate_simplices(
        &self,
        max_dim: usize,
        guard: usize,
    ) -> Result<Vec<Vec<u32>>, ComplexError> {
        let n = self.vertex_count();
        let mut out: Vec<Vec<u32>> = Vec::new();
        let mut clique: Vec<u32> = Vec::new();
        for v in 0..n {
            clique.push(v as u32);
            self.extend_cliques(&mut clique, max_dim, guard, &mut out)?;
            clique.pop();
        }
        out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        Ok(out)
    }

    fn extend_cliques(
        &self,
        clique: &mut Vec<u32>,
        max_dim: usize,
        guard: usize,
        out: &mut Vec<Vec<u32>>,
    ) -> Result<(), ComplexError> {
        if out.len() >= guard {
            return Err(ComplexError::EnumerationGuard {
                emitted: out.len(),
                guard,
            });
        }
        out.push(clique.clone());
        if clique.len() == max_dim + 1 {
            return Ok(());
        }
        let last = *clique.last().unwrap() as usize;
        for v in (last + 1)..self.vertex_count() {
            if clique.iter().all(|&u| self.adj.get(u as usize, v)) {
                clique.push(v as u32);
                self.extend_cliques(clique, max_dim, guard, out)?;
                clique.pop();
            }
        }
        Ok(())
    }

    /// Materializes the dimension-capped skeleton as an explicit complex.
    pub fn to_explicit(&self, max_dim: usize, guard: usize) -> Result<ExplicitComplex, ComplexError> {
        let simplices = self.enumerate_simplices(max_dim, guard)?;
        ExplicitComplex::from_simplices(self.labels.clone(), &simplices, guard)
    }

    /// DOT rendering of the proximity graph.
    pub fn dot(&self) -> String {
        let mut out = String::from("graph rips {\n");
        for (i, l) in self.labels.iter().enumerate() {
            out.push_str(&format!("  v{i} [label=\"{l}\"];\n"));
        }
        let n = self.vertex_count();
        for i in 0..n {
            for j in (i + 1)..n {
                if self.adj.get(i, j) {
                    out.push_str(&format!("  v{i} -- v{j};\n"));
                }
            }
        }
        out.push_str("}\n");
        out
    }
}
