//! Explicit finite simplicial complexes: a face-closed set of sorted
//! vertex tuples with display labels. Small by design — the implicit
//! Rips complex is only ever materialized through dimension caps or on
//! tiny vertex sets.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::ComplexError;

/// Largest simplex (vertex count) accepted into an explicit complex;
/// face closure is exponential in this.
const MAX_SIMPLEX_VERTICES: usize = 24;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExplicitComplex {
    labels: Vec<String>,
    simplices: BTreeSet<Vec<u32>>,
}

impl ExplicitComplex {
    pub fn empty() -> Self {
        ExplicitComplex {
            labels: Vec::new(),
            simplices: BTreeSet::new(),
        }
    }

    /// Builds the face closure of the given simplices (vertex indices
    /// into `labels`, not necessarily sorted). `guard` caps the total
    /// number of stored simplices.
    pub fn from_simplices(
        labels: Vec<String>,
        simplices: &[Vec<u32>],
        guard: usize,
    ) -> Result<Self, ComplexError> {
        let mut ec = ExplicitComplex {
            labels,
            simplices: BTreeSet::new(),
        };
        for s in simplices {
            ec.insert_closed(s, guard)?;
        }
        Ok(ec)
    }

    /// Inserts a simplex together with all of its faces.
    pub fn insert_closed(&mut self, simplex: &[u32], guard: usize) -> Result<(), ComplexError> {
        let mut s: Vec<u32> = simplex.to_vec();
        s.sort_unstable();
        s.dedup();
        assert!(
            s.iter().all(|&v| (v as usize) < self.labels.len()),
            "vertex index out of range"
        );
        if s.is_empty() {
            return Ok(());
        }
        if s.len() > MAX_SIMPLEX_VERTICES {
            return Err(ComplexError::SimplexTooLarge {
                simplex: s
                    .iter()
                    .map(|&v| self.labels[v as usize].clone())
                    .collect(),
                cap: MAX_SIMPLEX_VERTICES,
            });
        }
        // Every nonempty subset, by bitmask.
        let k = s.len();
        for mask in 1u32..(1 << k) {
            let face: Vec<u32> = (0..k)
                .filter(|&i| mask & (1 << i) != 0)
                .map(|i| s[i])
                .collect();
            if self.simplices.len() >= guard && !self.simplices.contains(&face) {
                return Err(ComplexError::EnumerationGuard {
                    emitted: self.simplices.len(),
                    guard,
                });
            }
            self.simplices.insert(face);
        }
        Ok(())
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn simplex_count(&self) -> usize {
        self.simplices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    pub fn contains(&self, simplex: &[u32]) -> bool {
        let mut s = simplex.to_vec();
        s.sort_unstable();
        self.simplices.contains(&s)
    }

    pub fn simplices(&self) -> impl Iterator<Item = &Vec<u32>> {
        self.simplices.iter()
    }

    /// Vertices actually used by some simplex.
    pub fn vertex_ids(&self) -> Vec<u32> {
        let mut out: BTreeSet<u32> = BTreeSet::new();
        for s in &self.simplices {
            out.extend(s.iter().copied());
        }
        out.into_iter().collect()
    }

    /// Dimension of the complex, or None when empty.
    pub fn dim(&self) -> Option<usize> {
        self.simplices.iter().map(|s| s.len() - 1).max()
    }

    /// Simplex counts per dimension 0..=dim.
    pub fn counts_by_dim(&self) -> Vec<usize> {
        let Some(dim) = self.dim() else {
            return Vec::new();
        };
        let mut counts = vec![0usize; dim + 1];
        for s in &self.simplices {
            counts[s.len() - 1] += 1;
        }
        counts
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.counts_by_dim()
            .iter()
            .enumerate()
            .map(|(d, &c)| if d % 2 == 0 { c as i64 } else { -(c as i64) })
            .sum()
    }

    /// Connectivity of the 1-skeleton (on the used vertices).
    pub fn is_connected(&self) -> bool {
        let verts = self.vertex_ids();
        if verts.is_empty() {
            return false;
        }
        let pos: BTreeMap<u32, usize> = verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut parent: Vec<usize> = (0..verts.len()).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for s in &self.simplices {
            if s.len() == 2 {
                let a = find(&mut parent, pos[&s[0]]);
                let b = find(&mut parent, pos[&s[1]]);
                parent[a] = b;
            }
        }
        let root = find(&mut parent, 0);
        (0..verts.len()).all(|i| find(&mut parent, i) == root)
    }

    /// The cone over this complex with a fresh apex vertex.
    pub fn cone(&self, apex_label: &str, guard: usize) -> Result<ExplicitComplex, ComplexError> {
        let apex = self.labels.len() as u32;
        let mut labels = self.labels.clone();
        labels.push(apex_label.to_string());
        let mut out = ExplicitComplex {
            labels,
            simplices: self.simplices.clone(),
        };
        out.insert_closed(&[apex], guard)?;
        for s in self.simplices.clone() {
            let mut coned = s.clone();
            coned.push(apex);
            out.insert_closed(&coned, guard)?;
        }
        Ok(out)
    }

    /// The simplices sorted by (dimension, lex): the vertex order used by
    /// [`ExplicitComplex::barycentric_subdivision`], so vertex i of the
    /// subdivision corresponds to the i-th entry here.
    pub fn face_poset_elements(&self) -> Vec<Vec<u32>> {
        let mut v: Vec<Vec<u32>> = self.simplices.iter().cloned().collect();
        v.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        v
    }

    /// The order complex of the face poset: one vertex per simplex, one
    /// simplex per chain under strict inclusion.
    pub fn barycentric_subdivision(&self, guard: usize) -> Result<ExplicitComplex, ComplexError> {
        let elems = self.face_poset_elements();
        let labels: Vec<String> = elems
            .iter()
            .map(|s| {
                s.iter()
                    .map(|&v| self.labels[v as usize].clone())
                    .collect::<Vec<_>>()
                    .join("|")
            })
            .collect();
        order_complex(labels, &elems, guard)
    }

    /// One simplex per line as sorted vertex labels, lines sorted by
    /// (dimension, labels). The text is re-parseable by `parse_faces`.
    pub fn faces_text(&self) -> String {
        let mut lines: Vec<(usize, Vec<&str>)> = self
            .simplices
            .iter()
            .map(|s| {
                let mut labels: Vec<&str> =
                    s.iter().map(|&v| self.labels[v as usize].as_str()).collect();
                labels.sort_unstable();
                (s.len(), labels)
            })
            .collect();
        lines.sort();
        let mut out = String::new();
        for (_, labels) in lines {
            out.push_str(&labels.join(" "));
            out.push('\n');
        }
        out
    }

    /// Parses a face list (whitespace-separated labels, one simplex per
    /// line; `#` starts a comment) and closes it under faces.
    pub fn parse_faces(text: &str, guard: usize) -> Result<ExplicitComplex, ComplexError> {
        let mut label_set: BTreeSet<String> = BTreeSet::new();
        let mut raw: Vec<(usize, Vec<String>)> = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let tokens: Vec<String> = line.split_whitespace().map(str::to_string).collect();
            let mut dedup = tokens.clone();
            dedup.sort();
            dedup.dedup();
            if dedup.len() != tokens.len() {
                return Err(ComplexError::FacesParse {
                    line: lineno + 1,
                    reason: "repeated vertex label in one simplex".to_string(),
                });
            }
            label_set.extend(tokens.iter().cloned());
            raw.push((lineno + 1, tokens));
        }
        let labels: Vec<String> = label_set.into_iter().collect();
        let pos: BTreeMap<&str, u32> = labels
            .iter()
            .enumerate()
            .map(|(i, l)| (l.as_str(), i as u32))
            .collect();
        let mut ec = ExplicitComplex {
            labels: labels.clone(),
            simplices: BTreeSet::new(),
        };
        for (_line, tokens) in raw {
            let simplex: Vec<u32> = tokens.iter().map(|t| pos[t.as_str()]).collect();
            ec.insert_closed(&simplex, guard)?;
        }
        Ok(ec)
    }
}

/// Order complex of a finite poset presented by strict inclusion of
/// supports. `supports` must be sorted by (size, lex) — a linear
/// extension — and vertex i of the result is `supports[i]`. Simplices
/// are the chains under strict inclusion.
pub fn order_complex(
    labels: Vec<String>,
    supports: &[Vec<u32>],
    guard: usize,
) -> Result<ExplicitComplex, ComplexError> {
    let m = supports.len();
    for w in supports.windows(2) {
        assert!(
            w[0].len() < w[1].len() || (w[0].len() == w[1].len() && w[0] <= w[1]),
            "supports must be sorted by (size, lex)"
        );
    }
    let mut above: Vec<Vec<u32>> = vec![Vec::new(); m];
    for i in 0..m {
        for j in (i + 1)..m {
            if supports[i].len() < supports[j].len() && is_subset(&supports[i], &supports[j]) {
                above[i].push(j as u32);
            }
        }
    }
    let mut out = ExplicitComplex {
        labels,
        simplices: BTreeSet::new(),
    };
    let mut chain: Vec<u32> = Vec::new();
    for i in 0..m {
        chain.push(i as u32);
        extend_chains(&above, &mut chain, &mut out.simplices, guard)?;
        chain.pop();
    }
    Ok(out)
}

pub(crate) fn is_subset(a: &[u32], b: &[u32]) -> bool {
    // Both sorted.
    let mut it = b.iter();
    'outer: for x in a {
        for y in it.by_ref() {
            if y == x {
                continue 'outer;
            }
            if y > x {
                return false;
            }
        }
        return false;
    }
    true
}

fn extend_chains(
    above: &[Vec<u32>],
    chain: &mut Vec<u32>,
    out: &mut BTreeSet<Vec<u32>>,
    guard: usize,
) -> Result<(), ComplexError> {
    if out.len() >= guard {
        return Err(ComplexError::ChainGuard { guard });
    }
    out.insert(chain.clone());
    let last = *chain.last().unwrap() as usize;
    for &next in &above[last] {
        chain.push(next);
        extend_chains(above, chain, out, guard)?;
        chain.pop();
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(n: usize) -> Vec<String> {
        (0..n).map(|i| format!("v{i}")).collect()
    }

    #[test]
    fn closure_and_counts() {
        let ec = ExplicitComplex::from_simplices(labels(4), &[vec![0, 1, 2, 3]], 100).unwrap();
        assert_eq!(ec.simplex_count(), 15, "2^4 - 1 faces of a full simplex");
        assert_eq!(ec.counts_by_dim(), vec![4, 6, 4, 1]);
        assert_eq!(ec.euler_characteristic(), 1);
        assert!(ec.is_connected());
    }

    #[test]
    fn subdivision_examples() {
        let point = ExplicitComplex::from_simplices(labels(1), &[vec![0]], 10).unwrap();
        let sd = point.barycentric_subdivision(100).unwrap();
        assert_eq!(sd.counts_by_dim(), vec![1]);

        let edge = ExplicitComplex::from_simplices(labels(2), &[vec![0, 1]], 10).unwrap();
        let sd = edge.barycentric_subdivision(100).unwrap();
        assert_eq!(sd.counts_by_dim(), vec![3, 2], "path with 3 vertices");

        let triangle = ExplicitComplex::from_simplices(labels(3), &[vec![0, 1, 2]], 100).unwrap();
        let sd = triangle.barycentric_subdivision(1000).unwrap();
        assert_eq!(sd.counts_by_dim(), vec![7, 12, 6]);
    }

    #[test]
    fn subdivision_preserves_euler_characteristic() {
        let hollow = ExplicitComplex::from_simplices(
            labels(3),
            &[vec![0, 1], vec![1, 2], vec![0, 2]],
            100,
        )
        .unwrap();
        let sd = hollow.barycentric_subdivision(1000).unwrap();
        assert_eq!(sd.euler_characteristic(), hollow.euler_characteristic());

        let solid = ExplicitComplex::from_simplices(labels(4), &[vec![0, 1, 2, 3]], 100).unwrap();
        let sd = solid.barycentric_subdivision(10_000).unwrap();
        assert_eq!(sd.euler_characteristic(), 1);
    }

    #[test]
    fn faces_round_trip() {
        let ec = ExplicitComplex::from_simplices(
            labels(4),
            &[vec![0, 1, 2], vec![2, 3]],
            100,
        )
        .unwrap();
        let text = ec.faces_text();
        let back = ExplicitComplex::parse_faces(&text, 100).unwrap();
        assert_eq!(back.counts_by_dim(), ec.counts_by_dim());
        assert_eq!(back.euler_characteristic(), ec.euler_characteristic());
    }

    #[test]
    fn disconnected_detected() {
        let ec = ExplicitComplex::from_simplices(labels(4), &[vec![0, 1], vec![2, 3]], 100)
            .unwrap();
        assert!(!ec.is_connected());
    }

    #[test]
    fn parse_rejects_repeated_vertex() {
        let err = ExplicitComplex::parse_faces("a a b\n", 100).unwrap_err();
        assert!(matches!(err, ComplexError::FacesParse { line: 1, .. }));
    }
}
