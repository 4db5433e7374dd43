//! Finite metric snapshots of Cayley graphs: balls around the identity,
//! exact word distances, deterministic geodesics, and set distances.
//!
//! Convention warning: [`set_distance`] is the MAX over all pairs,
//! d(K,L) = max d(k,l) — not the usual min-distance and not a Hausdorff
//! distance. The diameter of K is d(K,K). All metric queries run against
//! explicit guards and fail loudly instead of truncating.

use std::collections::HashMap;

use serde_json::json;

use crate::error::MetricError;
use crate::groups::{GenId, GroupElement, GroupOracle};

/// A radius-R snapshot of the Cayley graph rooted at the identity.
/// Vertices are indexed in shortlex order (distance first, then label
/// order), which makes vertex indexing deterministic given the spec.
#[derive(Debug)]
pub struct Ball {
    radius: u32,
    vertices: Vec<GroupElement>,
    index: HashMap<GroupElement, u32>,
    adjacency: Vec<Vec<(u32, GenId)>>,
    dist: Vec<u32>,
}

impl Ball {
    pub fn radius(&self) -> u32 {
        self.radius
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertex(&self, i: u32) -> &GroupElement {
        &self.vertices[i as usize]
    }

    pub fn vertices(&self) -> &[GroupElement] {
        &self.vertices
    }

    pub fn index_of(&self, v: &GroupElement) -> Option<u32> {
        self.index.get(v).copied()
    }

    pub fn contains(&self, v: &GroupElement) -> bool {
        self.index.contains_key(v)
    }

    pub fn dist_to_center(&self, i: u32) -> u32 {
        self.dist[i as usize]
    }

    /// Neighbors inside the ball, as (vertex index, generator label).
    pub fn neighbors(&self, i: u32) -> &[(u32, GenId)] {
        &self.adjacency[i as usize]
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(|n| n.len()).sum::<usize>() / 2
    }

    /// Vertex counts per distance layer 0..=radius.
    pub fn layer_counts(&self) -> Vec<usize> {
        let mut layers = vec![0usize; self.radius as usize + 1];
        for &d in &self.dist {
            layers[d as usize] += 1;
        }
        layers
    }
}

/// Breadth-first realization of the ball of the given radius around e.
/// Fails with a resource error when the vertex count would exceed
/// `size_guard`.
pub fn build_ball(o: &GroupOracle, radius: u32, size_guard: usize) -> Result<Ball, MetricError> {
    let mut vertices = vec![o.identity()];
    let mut dist = vec![0u32];
    let mut index: HashMap<GroupElement, u32> = HashMap::new();
    index.insert(o.identity(), 0);
    let mut head = 0;
    while head < vertices.len() {
        let d = dist[head];
        if d == radius {
            break; // vertices are layered, so the frontier is done
        }
        for g in o.generators().iter() {
            let next = o.mul_gen(&vertices[head], g);
            if !index.contains_key(&next) {
                if vertices.len() >= size_guard {
                    return Err(MetricError::SizeGuard {
                        reached: vertices.len() + 1,
                        guard: size_guard,
                    });
                }
                index.insert(next.clone(), vertices.len() as u32);
                dist.push(d + 1);
                vertices.push(next);
            }
        }
        head += 1;
    }

    // Canonical forms are geodesic, so the BFS layer must equal the word
    // length; sort into shortlex order and rebuild the index.
    for (v, &d) in vertices.iter().zip(dist.iter()) {
        assert_eq!(
            v.len() as u32,
            d,
            "backend normal form is not geodesic; this is a bug"
        );
    }
    vertices.sort();
    index.clear();
    for (i, v) in vertices.iter().enumerate() {
        index.insert(v.clone(), i as u32);
    }
    let dist: Vec<u32> = vertices.iter().map(|v| v.len() as u32).collect();

    let mut adjacency = vec![Vec::new(); vertices.len()];
    for (i, v) in vertices.iter().enumerate() {
        for g in o.generators().iter() {
            let next = o.mul_gen(v, g);
            if let Some(&j) = index.get(&next) {
                if j as usize != i {
                    adjacency[i].push((j, g));
                }
            }
        }
    }

    Ok(Ball {
        radius,
        vertices,
        index,
        adjacency,
        dist,
    })
}

/// Exact word distance d_S(x, y) = |x⁻¹y|. Canonical forms are geodesic
/// for every backend, so no search is needed; the guard preserves the
/// locality contract and fails loudly when exceeded.
pub fn word_distance(
    o: &GroupOracle,
    x: &GroupElement,
    y: &GroupElement,
    guard: u32,
) -> Result<u32, MetricError> {
    o.validate(x)?;
    o.validate(y)?;
    let d = o.difference(x, y).len() as u32;
    if d > guard {
        return Err(MetricError::OutOfRange { distance: d, guard });
    }
    Ok(d)
}

/// A geodesic from x to y: generator steps s₁…s_d with x·s₁⋯s_d = y.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeodesicPath {
    pub from: GroupElement,
    pub to: GroupElement,
    pub steps: Vec<GenId>,
}

impl GeodesicPath {
    pub fn len(&self) -> u32 {
        self.steps.len() as u32
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// All vertices along the path, from `from` to `to` inclusive.
    pub fn vertices(&self, o: &GroupOracle) -> Vec<GroupElement> {
        let mut out = Vec::with_capacity(self.steps.len() + 1);
        let mut cur = self.from.clone();
        out.push(cur.clone());
        for &g in &self.steps {
            cur = o.mul_gen(&cur, g);
            out.push(cur.clone());
        }
        out
    }
}

/// Deterministic geodesic: at every step the least generator label (in
/// the fixed label order) that strictly decreases the distance to the
/// target. Geodesics are not unique; this picks the stepwise
/// lexicographically least one.
pub fn geodesic(
    o: &GroupOracle,
    x: &GroupElement,
    y: &GroupElement,
    guard: u32,
) -> Result<GeodesicPath, MetricError> {
    let total = word_distance(o, x, y, guard)?;
    let mut steps = Vec::with_capacity(total as usize);
    let mut cur = x.clone();
    let mut remaining = total;
    while remaining > 0 {
        let mut advanced = false;
        for g in o.generators().iter() {
            let next = o.mul_gen(&cur, g);
            if o.difference(&next, y).len() as u32 == remaining - 1 {
                steps.push(g);
                cur = next;
                remaining -= 1;
                advanced = true;
                break;
            }
        }
        assert!(advanced, "some generator must decrease a positive distance");
    }
    Ok(GeodesicPath {
        from: x.clone(),
        to: y.clone(),
        steps,
    })
}

/// Anything that can answer exact pairwise distance queries.
pub trait DistanceSource {
    fn distance(&self, x: &GroupElement, y: &GroupElement) -> Result<u32, MetricError>;
}

impl DistanceSource for GroupOracle {
    fn distance(&self, x: &GroupElement, y: &GroupElement) -> Result<u32, MetricError> {
        word_distance(self, x, y, u32::MAX)
    }
}

/// The max-convention set distance d(K,L) = max over pairs.
pub fn set_distance(
    dm: &impl DistanceSource,
    k: &[GroupElement],
    l: &[GroupElement],
) -> Result<u32, MetricError> {
    if k.is_empty() || l.is_empty() {
        return Err(MetricError::EmptySet);
    }
    let mut best = 0;
    for x in k {
        for y in l {
            best = best.max(dm.distance(x, y)?);
        }
    }
    Ok(best)
}

/// d(K) = d(K,K), the diameter of K under the max convention.
pub fn diameter(dm: &impl DistanceSource, k: &[GroupElement]) -> Result<u32, MetricError> {
    set_distance(dm, k, k)
}

/// Dense pairwise distance table over an indexed vertex list.
pub struct DistanceMatrix {
    n: usize,
    d: Vec<u32>,
}

impl DistanceMatrix {
    pub fn from_ball(o: &GroupOracle, ball: &Ball) -> Self {
        let n = ball.vertex_count();
        let mut d = vec![0u32; n * n];
        for i in 0..n {
            for j in (i + 1)..n {
                let dist = o
                    .difference(ball.vertex(i as u32), ball.vertex(j as u32))
                    .len() as u32;
                d[i * n + j] = dist;
                d[j * n + i] = dist;
            }
        }
        DistanceMatrix { n, d }
    }

    /// Wraps a precomputed symmetric table (row-major, n×n).
    pub fn from_raw(n: usize, d: Vec<u32>) -> Self {
        assert_eq!(d.len(), n * n, "distance table must be n*n");
        DistanceMatrix { n, d }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.d[i * self.n + j]
    }
}

/// DOT rendering of the ball's graph with canonical words as labels.
pub fn ball_dot(o: &GroupOracle, ball: &Ball) -> String {
    let mut out = String::from("graph ball {\n");
    for (i, v) in ball.vertices().iter().enumerate() {
        out.push_str(&format!("  v{} [label=\"{}\"];\n", i, o.render(v)));
    }
    for i in 0..ball.vertex_count() as u32 {
        for &(j, g) in ball.neighbors(i) {
            if i < j {
                out.push_str(&format!(
                    "  v{} -- v{} [label=\"{}\"];\n",
                    i,
                    j,
                    o.generators().label(g)
                ));
            }
        }
    }
    out.push_str("}\n");
    out
}

/// Structured table of the ball: vertices with distances plus the edge
/// list, one generator label per ordered adjacency.
pub fn ball_table(o: &GroupOracle, ball: &Ball) -> serde_json::Value {
    let vertices: Vec<serde_json::Value> = ball
        .vertices()
        .iter()
        .enumerate()
        .map(|(i, v)| {
            json!({
                "index": i,
                "word": o.render(v),
                "dist": ball.dist_to_center(i as u32),
            })
        })
        .collect();
    let mut edges = Vec::new();
    for i in 0..ball.vertex_count() as u32 {
        for &(j, g) in ball.neighbors(i) {
            if i < j {
                edges.push(json!([i, j, o.generators().label(g)]));
            }
        }
    }
    json!({
        "radius": ball.radius(),
        "vertex_count": ball.vertex_count(),
        "edge_count": ball.edge_count(),
        "layers": ball.layer_counts(),
        "vertices": vertices,
        "edges": edges,
    })
}
