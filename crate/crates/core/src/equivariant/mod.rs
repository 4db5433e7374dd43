//! The left G-action on the Rips complex, finite subgroups and their
//! orbits, the subcomplex F of faces of H-invariant simplices, and the
//! fixed-point model P^H.
//!
//! F has a flag description: a simplex σ lies in F iff the orbit closure
//! H·σ has diameter ≤ d, which holds iff every vertex pair of σ
//! satisfies the pairwise orbit condition d(H{u,v}) ≤ d. The fixed-point
//! set P^H is modeled as the order complex of the poset of H-invariant
//! simplices (unions of vertex orbits with diameter ≤ d); its barycenters
//! are exactly the points fixed by H.

mod rips_checks;
mod small_orbit;
mod subgroups;

pub use rips_checks::{
    rips_theorem_checks, simplex_stabilizer, OrbitRepReport, RipsCheckParams, RipsTheoremReport,
    StabilizerSample, StarDisjointnessReport,
};
pub use small_orbit::{small_orbit_vertex, CertCheck, SmallOrbitOutcome};
pub use subgroups::{
    conjugacy_classes, enumerate_finite_subgroups, subgroup_window_radius, ConjugacyClass,
    ConjugacyClasses, SubgroupEnumGuards,
};

use std::collections::BTreeSet;

use crate::cayley::{diameter, set_distance, Ball};
use crate::complex::{order_complex, ExplicitComplex};
use crate::error::{ComplexError, EquivariantError, MetricError};
use crate::groups::{GroupElement, GroupOracle};

/// A finite subgroup given by its full element list (shortlex sorted).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubgroupRecord {
    elements: Vec<GroupElement>,
    order: usize,
    max_word_length: u32,
}

impl SubgroupRecord {
    pub fn trivial() -> Self {
        SubgroupRecord {
            elements: vec![GroupElement::identity()],
            order: 1,
            max_word_length: 0,
        }
    }

    /// Builds a record from an element list, verifying closure under
    /// multiplication and inversion and the presence of the identity.
    pub fn from_elements(
        o: &GroupOracle,
        elements: Vec<GroupElement>,
    ) -> Result<Self, EquivariantError> {
        let mut sorted = elements;
        sorted.sort();
        sorted.dedup();
        for e in &sorted {
            o.validate(e).map_err(EquivariantError::Group)?;
        }
        let set: BTreeSet<&GroupElement> = sorted.iter().collect();
        let identity = GroupElement::identity();
        if !set.contains(&identity) {
            return Err(EquivariantError::Validation(
                "subgroup element list must contain the identity".to_string(),
            ));
        }
        for a in &sorted {
            let inv = o.inv_unchecked(a);
            if !set.contains(&inv) {
                return Err(EquivariantError::Validation(format!(
                    "element list is not closed under inversion (inverse of `{}` missing)",
                    o.render(a)
                )));
            }
            for b in &sorted {
                let prod = o.mul_unchecked(a, b);
                if !set.contains(&prod) {
                    return Err(EquivariantError::Validation(format!(
                        "element list is not closed under multiplication (`{}`·`{}` missing)",
                        o.render(a),
                        o.render(b)
                    )));
                }
            }
        }
        let order = sorted.len();
        let max_word_length = sorted.iter().map(|e| e.len() as u32).max().unwrap_or(0);
        Ok(SubgroupRecord {
            elements: sorted,
            order,
            max_word_length,
        })
    }

    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn max_word_length(&self) -> u32 {
        self.max_word_length
    }

    pub fn is_trivial(&self) -> bool {
        self.order == 1
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        self.elements.binary_search(g).is_ok()
    }
}

/// Guards for subgroup closure.
#[derive(Clone, Copy, Debug)]
pub struct ClosureGuards {
    pub max_order: usize,
    pub max_word_length: u32,
}

impl Default for ClosureGuards {
    fn default() -> Self {
        ClosureGuards {
            max_order: 10_000,
            max_word_length: 64,
        }
    }
}

/// Closure of the given generators under multiplication and inversion.
/// Fails with a guard error when the closure grows past `max_order`
/// elements or produces an element longer than `max_word_length` — the
/// signal that the generated subgroup is infinite or escapes the window.
pub fn subgroup_closure(
    o: &GroupOracle,
    generators: &[GroupElement],
    guards: &ClosureGuards,
) -> Result<SubgroupRecord, EquivariantError> {
    let mut seeds: Vec<GroupElement> = Vec::new();
    for g in generators {
        o.validate(g).map_err(EquivariantError::Group)?;
        seeds.push(g.clone());
        seeds.push(o.inv_unchecked(g));
    }
    let mut known: BTreeSet<GroupElement> = BTreeSet::new();
    known.insert(GroupElement::identity());
    let mut frontier: Vec<GroupElement> = vec![GroupElement::identity()];
    while let Some(current) = frontier.pop() {
        for s in &seeds {
            let next = o.mul_unchecked(&current, s);
            if next.len() as u32 > guards.max_word_length {
                return Err(EquivariantError::ClosureGuard {
                    detail: format!(
                        "element of word length {} exceeds the {}-ball window",
                        next.len(),
                        guards.max_word_length
                    ),
                });
            }
            if known.insert(next.clone()) {
                if known.len() > guards.max_order {
                    return Err(EquivariantError::ClosureGuard {
                        detail: format!("more than {} elements", guards.max_order),
                    });
                }
                frontier.push(next);
            }
        }
    }
    SubgroupRecord::from_elements(o, known.into_iter().collect())
}

/// Left translation of a vertex set: g·σ. Distances are preserved, so
/// simplices map to simplices.
pub fn act(
    o: &GroupOracle,
    g: &GroupElement,
    sigma: &[GroupElement],
) -> Result<Vec<GroupElement>, EquivariantError> {
    o.validate(g).map_err(EquivariantError::Group)?;
    let mut out = Vec::with_capacity(sigma.len());
    for v in sigma {
        o.validate(v).map_err(EquivariantError::Group)?;
        out.push(o.mul_unchecked(g, v));
    }
    out.sort();
    out.dedup();
    if out.len() != sigma.len() {
        return Err(EquivariantError::Validation(
            "input vertex set contained duplicates".to_string(),
        ));
    }
    Ok(out)
}

/// Like [`act`], but errors when any image leaves the working ball.
pub fn act_within(
    o: &GroupOracle,
    ball: &Ball,
    g: &GroupElement,
    sigma: &[GroupElement],
) -> Result<Vec<GroupElement>, EquivariantError> {
    let image = act(o, g, sigma)?;
    for v in &image {
        if !ball.contains(v) {
            return Err(EquivariantError::Metric(MetricError::OutOfRange {
                distance: v.len() as u32,
                guard: ball.radius(),
            }));
        }
    }
    Ok(image)
}

/// The orbit Hx, shortlex sorted. Left multiplication is free on
/// vertices, so the orbit always has exactly |H| elements.
pub fn orbit_of(o: &GroupOracle, h: &SubgroupRecord, x: &GroupElement) -> Vec<GroupElement> {
    let mut orbit: Vec<GroupElement> = h
        .elements()
        .iter()
        .map(|g| o.mul_unchecked(g, x))
        .collect();
    orbit.sort();
    orbit.dedup();
    assert_eq!(
        orbit.len(),
        h.order(),
        "left multiplication acts freely on vertices"
    );
    orbit
}

/// Orbit union H·σ of a vertex set, shortlex sorted.
pub fn orbit_union(
    o: &GroupOracle,
    h: &SubgroupRecord,
    sigma: &[GroupElement],
) -> Vec<GroupElement> {
    let mut out: Vec<GroupElement> = Vec::with_capacity(h.order() * sigma.len());
    for g in h.elements() {
        for v in sigma {
            out.push(o.mul_unchecked(g, v));
        }
    }
    out.sort();
    out.dedup();
    out
}

/// An orbit with its diameter d(Hx).
#[derive(Clone, Debug)]
pub struct OrbitSummary {
    pub subgroup: SubgroupRecord,
    pub base: GroupElement,
    pub orbit: Vec<GroupElement>,
    pub diameter: u32,
}

/// Computes Hx and d(Hx), checking the invariance identity
/// d(Hx) = d({x}, Hx) along the way.
pub fn orbit_summary(
    o: &GroupOracle,
    h: &SubgroupRecord,
    x: &GroupElement,
) -> Result<OrbitSummary, EquivariantError> {
    o.validate(x).map_err(EquivariantError::Group)?;
    let orbit = orbit_of(o, h, x);
    let diam = diameter(o, &orbit).map_err(EquivariantError::Metric)?;
    let from_base =
        set_distance(o, std::slice::from_ref(x), &orbit).map_err(EquivariantError::Metric)?;
    if diam != from_base {
        return Err(EquivariantError::Certificate {
            name: "orbit_diameter_identity".to_string(),
            lhs_x2: 2 * diam as i64,
            rhs_x2: 2 * from_base as i64,
            context: format!("d(Hx) != d({{x}}, Hx) for x = {}", o.render(x)),
        });
    }
    Ok(OrbitSummary {
        subgroup: h.clone(),
        base: x.clone(),
        orbit,
        diameter: diam,
    })
}

/// σ ∈ F ⟺ the orbit closure H·σ has diameter ≤ d, i.e. σ is a face of
/// the H-invariant simplex spanned by its orbit closure.
pub fn f_membership(
    o: &GroupOracle,
    h: &SubgroupRecord,
    sigma: &[GroupElement],
    d: u32,
) -> Result<bool, EquivariantError> {
    if sigma.is_empty() {
        return Err(EquivariantError::Metric(MetricError::EmptySet));
    }
    let union = orbit_union(o, h, sigma);
    let diam = diameter(o, &union).map_err(EquivariantError::Metric)?;
    Ok(diam <= d)
}

fn is_subset(a: &[u32], b: &[u32]) -> bool {
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

/// The poset of H-invariant simplices within a ball: unions of vertex
/// orbits (orbits fully contained in the ball) with diameter ≤ d,
/// ordered by inclusion. Its order complex models the fixed-point set.
#[derive(Debug)]
pub struct InvariantSimplexPoset {
    d_param: u32,
    /// Usable orbits (diameter ≤ d, fully inside the ball).
    orbit_elements: Vec<Vec<GroupElement>>,
    /// Poset elements as sorted orbit-index sets, ordered (size, lex).
    elements: Vec<Vec<u32>>,
}

impl InvariantSimplexPoset {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn d_param(&self) -> u32 {
        self.d_param
    }

    pub fn orbit_count(&self) -> usize {
        self.orbit_elements.len()
    }

    pub fn element_support(&self, i: usize) -> &[u32] {
        &self.elements[i]
    }

    /// The vertex set of poset element i (union of its orbits).
    pub fn element_vertices(&self, i: usize) -> Vec<GroupElement> {
        let mut out = Vec::new();
        for &orb in &self.elements[i] {
            out.extend(self.orbit_elements[orb as usize].iter().cloned());
        }
        out.sort();
        out
    }

    pub fn label(&self, o: &GroupOracle, i: usize) -> String {
        let words: Vec<String> = self
            .element_vertices(i)
            .iter()
            .map(|v| o.render(v))
            .collect();
        format!("{{{}}}", words.join(","))
    }

    /// Comparability-graph connectivity; equals the connectivity of the
    /// order complex, and dismantling preserves it.
    pub fn is_connected(&self) -> bool {
        let n = self.elements.len();
        if n == 0 {
            return false;
        }
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if self.strictly_below(i, j) || self.strictly_below(j, i) {
                    let a = find(&mut parent, i);
                    let b = find(&mut parent, j);
                    parent[a] = b;
                }
            }
        }
        let root = find(&mut parent, 0);
        (0..n).all(|i| find(&mut parent, i) == root)
    }

    fn strictly_below(&self, i: usize, j: usize) -> bool {
        self.elements[i].len() < self.elements[j].len()
            && is_subset(&self.elements[i], &self.elements[j])
    }
}

/// Enumerates all H-invariant simplices with vertices in the ball:
/// nonempty unions of vertex orbits with total diameter ≤ d. Orbits that
/// leave the ball are excluded (the poset is the restriction to the
/// ball); `guard` caps the element count.
pub fn invariant_simplex_poset(
    o: &GroupOracle,
    h: &SubgroupRecord,
    ball: &Ball,
    d: u32,
    guard: usize,
) -> Result<InvariantSimplexPoset, EquivariantError> {
    // Orbit partition of the ball's vertices.
    let mut seen: BTreeSet<GroupElement> = BTreeSet::new();
    let mut orbit_elements: Vec<Vec<GroupElement>> = Vec::new();
    let mut orbit_diameter: Vec<u32> = Vec::new();
    for v in ball.vertices() {
        if seen.contains(v) {
            continue;
        }
        let orbit = orbit_of(o, h, v);
        for w in &orbit {
            seen.insert(w.clone());
        }
        if !orbit.iter().all(|w| ball.contains(w)) {
            continue;
        }
        let diam = diameter(o, &orbit).map_err(EquivariantError::Metric)?;
        if diam <= d {
            orbit_elements.push(orbit);
            orbit_diameter.push(diam);
        }
    }
    let m = orbit_elements.len();

    // Pairwise orbit distances (max convention) for incremental diameters.
    let mut pair = vec![0u32; m * m];
    for i in 0..m {
        for j in (i + 1)..m {
            let dij = set_distance(o, &orbit_elements[i], &orbit_elements[j])
                .map_err(EquivariantError::Metric)?;
            pair[i * m + j] = dij;
            pair[j * m + i] = dij;
        }
    }

    // Depth-first union enumeration; adding an orbit can only grow the
    // diameter, so pruning at > d is exact.
    struct Dfs<'a> {
        m: usize,
        d: u32,
        orbit_diameter: &'a [u32],
        pair: &'a [u32],
        guard: usize,
    }
    impl Dfs<'_> {
        fn extend(
            &self,
            first_free: usize,
            diam: u32,
            stack: &mut Vec<u32>,
            elements: &mut Vec<Vec<u32>>,
        ) -> Result<(), EquivariantError> {
            for j in first_free..self.m {
                let mut new_diam = diam.max(self.orbit_diameter[j]);
                for &i in stack.iter() {
                    new_diam = new_diam.max(self.pair[i as usize * self.m + j]);
                }
                if new_diam > self.d {
                    continue;
                }
                if elements.len() >= self.guard {
                    return Err(EquivariantError::PosetGuard { guard: self.guard });
                }
                stack.push(j as u32);
                elements.push(stack.clone());
                self.extend(j + 1, new_diam, stack, elements)?;
                stack.pop();
            }
            Ok(())
        }
    }
    let mut elements: Vec<Vec<u32>> = Vec::new();
    let mut stack: Vec<u32> = Vec::new();
    Dfs {
        m,
        d,
        orbit_diameter: &orbit_diameter,
        pair: &pair,
        guard,
    }
    .extend(0, 0, &mut stack, &mut elements)?;
    elements.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));

    Ok(InvariantSimplexPoset {
        d_param: d,
        orbit_elements,
        elements,
    })
}

/// Outcome of beat-point dismantling: which poset elements survive, and
/// the removal log (removed element, witness) for audit.
#[derive(Debug)]
pub struct DismantleOutcome {
    pub alive: Vec<usize>,
    pub removed: Vec<(usize, usize)>,
}

/// Repeatedly removes beat points: elements whose strict up-set has a
/// minimum or whose strict down-set has a maximum. Each removal is a
/// strong deformation retraction of the order complex, so the core has
/// the same homotopy type as the full fixed-point model.
pub fn dismantle(poset: &InvariantSimplexPoset) -> DismantleOutcome {
    let n = poset.len();
    let mut alive = vec![true; n];
    let mut removed: Vec<(usize, usize)> = Vec::new();
    loop {
        let mut changed = false;
        for x in 0..n {
            if !alive[x] {
                continue;
            }
            if let Some(witness) = beat_witness(poset, &alive, x) {
                alive[x] = false;
                removed.push((x, witness));
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    DismantleOutcome {
        alive: (0..n).filter(|&i| alive[i]).collect(),
        removed,
    }
}

fn beat_witness(poset: &InvariantSimplexPoset, alive: &[bool], x: usize) -> Option<usize> {
    let n = poset.len();
    let ups: Vec<usize> = (0..n)
        .filter(|&j| alive[j] && poset.strictly_below(x, j))
        .collect();
    if !ups.is_empty() {
        let mut candidate = ups[0];
        for &u in &ups[1..] {
            if poset.strictly_below(u, candidate) {
                candidate = u;
            }
        }
        if ups
            .iter()
            .all(|&u| u == candidate || poset.strictly_below(candidate, u))
        {
            return Some(candidate);
        }
    }
    let downs: Vec<usize> = (0..n)
        .filter(|&j| alive[j] && poset.strictly_below(j, x))
        .collect();
    if !downs.is_empty() {
        let mut candidate = downs[0];
        for &u in &downs[1..] {
            if poset.strictly_below(candidate, u) {
                candidate = u;
            }
        }
        if downs
            .iter()
            .all(|&u| u == candidate || poset.strictly_below(u, candidate))
        {
            return Some(candidate);
        }
    }
    None
}

/// Order complex of the poset restricted to the given elements
/// (ascending original indices).
pub fn poset_order_complex(
    o: &GroupOracle,
    poset: &InvariantSimplexPoset,
    alive: &[usize],
    chain_guard: usize,
) -> Result<ExplicitComplex, ComplexError> {
    let mut picked: Vec<(Vec<u32>, String)> = alive
        .iter()
        .map(|&i| (poset.elements[i].clone(), poset.label(o, i)))
        .collect();
    picked.sort_by(|a, b| a.0.len().cmp(&b.0.len()).then_with(|| a.0.cmp(&b.0)));
    let supports: Vec<Vec<u32>> = picked.iter().map(|(s, _)| s.clone()).collect();
    let labels: Vec<String> = picked.into_iter().map(|(_, l)| l).collect();
    order_complex(labels, &supports, chain_guard)
}

/// The fixed-point model: the order complex of the dismantled core of
/// the invariant-simplex poset, plus reduction metadata. Dismantling is
/// homotopy-faithful, so homology/collapse verdicts on the model apply
/// to the full fixed-point set restricted to the ball.
#[derive(Debug)]
pub struct FixedPointModel {
    pub complex: ExplicitComplex,
    pub poset_size: usize,
    pub core_size: usize,
    pub beat_points_removed: usize,
}

pub fn fixed_point_complex(
    o: &GroupOracle,
    poset: &InvariantSimplexPoset,
    chain_guard: usize,
) -> Result<FixedPointModel, EquivariantError> {
    let outcome = dismantle(poset);
    let complex = poset_order_complex(o, poset, &outcome.alive, chain_guard)
        .map_err(EquivariantError::Complex)?;
    Ok(FixedPointModel {
        complex,
        poset_size: poset.len(),
        core_size: outcome.alive.len(),
        beat_points_removed: outcome.removed.len(),
    })
}
