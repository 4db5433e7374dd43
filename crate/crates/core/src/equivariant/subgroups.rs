//! Finite-subgroup enumeration inside the 8δ+4 window and bounded
//! conjugacy classification. Every finite subgroup has a conjugate whose
//! elements all lie in B(e, 8δ+4), so enumerating subgroups with
//! elements in that ball finds a representative of every conjugacy
//! class; the list being finite is the desk-scale finiteness check.

use std::collections::{BTreeMap, BTreeSet};

use crate::cayley::build_ball;
use crate::error::EquivariantError;
use crate::groups::{GroupElement, GroupOracle};
use crate::half::HalfInt;

use super::{subgroup_closure, ClosureGuards, SubgroupRecord};

#[derive(Clone, Copy, Debug)]
pub struct SubgroupEnumGuards {
    /// Ball vertex guard for the 8δ+4 window.
    pub vertex_guard: usize,
    /// Cap on the number of distinct subgroups collected.
    pub max_subgroups: usize,
}

impl Default for SubgroupEnumGuards {
    fn default() -> Self {
        SubgroupEnumGuards {
            vertex_guard: 200_000,
            max_subgroups: 10_000,
        }
    }
}

/// The enumeration window 8δ + 4 (an integer for half-integral δ):
/// every finite subgroup is conjugate to one whose elements lie in the
/// ball of this radius.
pub fn subgroup_window_radius(delta: HalfInt) -> u32 {
    let t = delta.twice();
    assert!(t >= 0, "delta must be non-negative");
    (4 * t + 4) as u32
}

/// All subgroups whose elements lie in B(e, 8δ+4): cyclic closures of
/// torsion elements in the ball, closed under pairwise joins; joins that
/// escape the window are discarded. δ must be (an upper bound for) the
/// true constant for the window to be complete; the caller's report
/// should name the δ used.
pub fn enumerate_finite_subgroups(
    o: &GroupOracle,
    delta: HalfInt,
    guards: &SubgroupEnumGuards,
) -> Result<Vec<SubgroupRecord>, EquivariantError> {
    let window = subgroup_window_radius(delta);
    let ball = build_ball(o, window, guards.vertex_guard).map_err(EquivariantError::Metric)?;
    let closure_guards = ClosureGuards {
        max_order: ball.vertex_count(),
        max_word_length: window,
    };

    let mut found: BTreeSet<Vec<GroupElement>> = BTreeSet::new();
    found.insert(vec![GroupElement::identity()]);

    // Torsion seeds: cyclic subgroups fully inside the window. An
    // element of a window-bounded subgroup has order at most the ball
    // size, so the order guard is the ball size.
    for v in ball.vertices() {
        if v.is_identity() {
            continue;
        }
        let order = o
            .order_of(v, ball.vertex_count() as u64)
            .map_err(EquivariantError::Group)?;
        if order.is_none() {
            continue;
        }
        match subgroup_closure(o, std::slice::from_ref(v), &closure_guards) {
            Ok(record) => {
                found.insert(record.elements().to_vec());
            }
            Err(EquivariantError::ClosureGuard { .. }) => continue,
            Err(other) => return Err(other),
        }
    }

    // Pairwise joins to fixpoint: every finite subgroup is the join of
    // its cyclic subgroups.
    loop {
        let snapshot: Vec<Vec<GroupElement>> = found.iter().cloned().collect();
        let mut grew = false;
        for (i, a) in snapshot.iter().enumerate() {
            for b in snapshot.iter().skip(i + 1) {
                let mut gens: Vec<GroupElement> = a.clone();
                gens.extend(b.iter().cloned());
                match subgroup_closure(o, &gens, &closure_guards) {
                    Ok(record) => {
                        if record.max_word_length() <= window
                            && found.insert(record.elements().to_vec())
                        {
                            grew = true;
                            if found.len() > guards.max_subgroups {
                                return Err(EquivariantError::ClosureGuard {
                                    detail: format!(
                                        "more than {} subgroups in the window",
                                        guards.max_subgroups
                                    ),
                                });
                            }
                        }
                    }
                    Err(EquivariantError::ClosureGuard { .. }) => continue,
                    Err(other) => return Err(other),
                }
            }
        }
        if !grew {
            break;
        }
    }

    let mut records = Vec::with_capacity(found.len());
    for elements in found {
        records.push(SubgroupRecord::from_elements(o, elements)?);
    }
    records.sort_by(|a, b| {
        a.order()
            .cmp(&b.order())
            .then_with(|| a.elements().cmp(b.elements()))
    });
    Ok(records)
}

/// One conjugacy class over the input list; indices refer to the input.
#[derive(Clone, Debug)]
pub struct ConjugacyClass {
    /// Index of the member with the lexicographically least element list.
    pub representative: usize,
    pub members: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct ConjugacyClasses {
    pub classes: Vec<ConjugacyClass>,
    pub conjugator_radius: u32,
}

impl ConjugacyClasses {
    /// Classes whose representative is a nontrivial subgroup.
    pub fn nontrivial_count(&self, subs: &[SubgroupRecord]) -> usize {
        self.classes
            .iter()
            .filter(|c| subs[c.representative].order() > 1)
            .count()
    }
}

/// Partitions the input list under g·H·g⁻¹ with g ranging over the ball
/// of the given radius. A too-small radius may fail to merge genuinely
/// conjugate subgroups (over-counting); the radius is recorded so the
/// report is honest about the search window.
pub fn conjugacy_classes(
    o: &GroupOracle,
    subs: &[SubgroupRecord],
    conjugator_radius: u32,
    vertex_guard: usize,
) -> Result<ConjugacyClasses, EquivariantError> {
    let by_elements: BTreeMap<&[GroupElement], usize> = subs
        .iter()
        .enumerate()
        .map(|(i, s)| (s.elements(), i))
        .collect();
    let ball = build_ball(o, conjugator_radius, vertex_guard).map_err(EquivariantError::Metric)?;

    let mut parent: Vec<usize> = (0..subs.len()).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }

    for (i, sub) in subs.iter().enumerate() {
        for g in ball.vertices() {
            let g_inv = o.inv_unchecked(g);
            let mut image: Vec<GroupElement> = sub
                .elements()
                .iter()
                .map(|h| o.mul_unchecked(&o.mul_unchecked(g, h), &g_inv))
                .collect();
            image.sort();
            if let Some(&j) = by_elements.get(image.as_slice()) {
                let a = find(&mut parent, i);
                let b = find(&mut parent, j);
                parent[a] = b;
            }
        }
    }

    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..subs.len() {
        let root = find(&mut parent, i);
        groups.entry(root).or_default().push(i);
    }
    let mut classes: Vec<ConjugacyClass> = groups
        .into_values()
        .map(|mut members| {
            members.sort();
            let representative = *members
                .iter()
                .min_by(|&&a, &&b| subs[a].elements().cmp(subs[b].elements()))
                .unwrap();
            ConjugacyClass {
                representative,
                members,
            }
        })
        .collect();
    classes.sort_by(|a, b| {
        let ra = &subs[a.representative];
        let rb = &subs[b.representative];
        ra.order()
            .cmp(&rb.order())
            .then_with(|| ra.elements().cmp(rb.elements()))
    });
    Ok(ConjugacyClasses {
        classes,
        conjugator_radius,
    })
}
