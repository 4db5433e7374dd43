//! Property checks for the action on P_d at d ≥ 4δ + 2: exact setwise
//! stabilizers of sampled simplices, star disjointness on explicit
//! second barycentric subdivisions of small subcomplexes, counting of
//! translation-orbit representatives of simplices, and torsion scanning
//! (torsion-free evidence implies the sampled action is free).

use std::collections::HashMap;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::cayley::{Ball, DistanceMatrix};
use crate::error::EquivariantError;
use crate::groups::{GroupElement, GroupOracle};
use crate::half::HalfInt;

use super::SubgroupRecord;

#[derive(Clone, Copy, Debug)]
pub struct RipsCheckParams {
    pub seed: u64,
    /// How many simplices to sample for stabilizer computation.
    pub simplex_samples: usize,
    /// Largest sampled simplex (vertex count) for stabilizers.
    pub max_sample_size: usize,
    /// How many small subcomplexes get the explicit sd² star check.
    pub subcomplex_count: usize,
    /// Size cap (vertex count) for orbit-representative enumeration.
    pub orbit_rep_max_size: usize,
    /// Order guard for the torsion scan.
    pub torsion_guard: u64,
}

impl Default for RipsCheckParams {
    fn default() -> Self {
        RipsCheckParams {
            seed: 0,
            simplex_samples: 12,
            max_sample_size: 3,
            subcomplex_count: 10,
            orbit_rep_max_size: 3,
            torsion_guard: 512,
        }
    }
}

#[derive(Clone, Debug)]
pub struct StabilizerSample {
    pub simplex: Vec<GroupElement>,
    pub stabilizer: SubgroupRecord,
}

#[derive(Clone, Debug, Default)]
pub struct StarDisjointnessReport {
    pub subcomplexes: usize,
    pub pairs_checked: usize,
    pub violations: usize,
    /// Vertex pairs skipped because the translate left the subcomplex.
    pub escaped: usize,
}

#[derive(Clone, Debug)]
pub struct OrbitRepReport {
    pub max_simplex_size: usize,
    pub count: usize,
}

#[derive(Clone, Debug)]
pub struct RipsTheoremReport {
    pub d: u32,
    pub delta: HalfInt,
    pub stabilizers: Vec<StabilizerSample>,
    pub star: StarDisjointnessReport,
    pub orbit_reps: OrbitRepReport,
    pub torsion_found: bool,
    /// All sampled stabilizers trivial (the free-action evidence when no
    /// torsion was found).
    pub action_free_on_samples: bool,
}

/// The exact setwise stabilizer of a simplex under left translation. Any
/// g with g·σ = σ sends a vertex of σ to a vertex of σ, so the finite
/// candidate set {w·u⁻¹ : u, w ∈ σ} is exhaustive and the computation is
/// exact, not sampled.
pub fn simplex_stabilizer(
    o: &GroupOracle,
    sigma: &[GroupElement],
) -> Result<SubgroupRecord, EquivariantError> {
    let mut sorted: Vec<GroupElement> = sigma.to_vec();
    sorted.sort();
    sorted.dedup();
    let mut stab: Vec<GroupElement> = Vec::new();
    for u in &sorted {
        let u_inv = o.inv_unchecked(u);
        for w in &sorted {
            let g = o.mul_unchecked(w, &u_inv);
            let mut image: Vec<GroupElement> =
                sorted.iter().map(|v| o.mul_unchecked(&g, v)).collect();
            image.sort();
            if image == sorted {
                stab.push(g);
            }
        }
    }
    stab.sort();
    stab.dedup();
    SubgroupRecord::from_elements(o, stab)
}

/// Runs all four checks on the Rips complex of the given ball.
/// Requires d ≥ 4δ + 2 and ball radius ≥ d.
pub fn rips_theorem_checks(
    o: &GroupOracle,
    ball: &Ball,
    d: u32,
    delta: HalfInt,
    params: &RipsCheckParams,
) -> Result<RipsTheoremReport, EquivariantError> {
    let t = delta.twice();
    if (2 * d as i64) < 4 * t + 4 {
        return Err(EquivariantError::Validation(format!(
            "d = {d} is below the threshold 4δ+2 = {} for δ = {delta}",
            HalfInt::from_twice(4 * t + 4)
        )));
    }
    if ball.radius() < d {
        return Err(EquivariantError::Validation(format!(
            "ball radius {} is smaller than d = {d}",
            ball.radius()
        )));
    }

    let matrix = DistanceMatrix::from_ball(o, ball);
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);

    // (i) Exact stabilizers of sampled simplices.
    let mut stabilizers = Vec::new();
    for _ in 0..params.simplex_samples {
        let sigma = sample_simplex(ball, &matrix, d, params.max_sample_size, &mut rng);
        let stab = simplex_stabilizer(o, &sigma)?;
        stabilizers.push(StabilizerSample {
            simplex: sigma,
            stabilizer: stab,
        });
    }

    // (ii) Star disjointness on explicit second subdivisions.
    let mut star = StarDisjointnessReport::default();
    for _ in 0..params.subcomplex_count {
        let sigma = sample_simplex(ball, &matrix, d, 2, &mut rng);
        let g = pick_mover(o, &sigma, ball, &mut rng, &stabilizers);
        check_star_disjointness(o, d, &sigma, &g, &mut star)?;
        star.subcomplexes += 1;
    }

    // (iii) Orbit representatives of marked simplices.
    let orbit_reps = OrbitRepReport {
        max_simplex_size: params.orbit_rep_max_size,
        count: count_orbit_representatives(o, ball, &matrix, d, params.orbit_rep_max_size),
    };

    // (iv) Torsion scan; with no torsion, sampled stabilizers must all
    // be trivial.
    let mut torsion_found = false;
    for v in ball.vertices() {
        if v.is_identity() {
            continue;
        }
        if o.order_of(v, params.torsion_guard)
            .map_err(EquivariantError::Group)?
            .is_some()
        {
            torsion_found = true;
            break;
        }
    }
    let action_free_on_samples = stabilizers.iter().all(|s| s.stabilizer.is_trivial());

    Ok(RipsTheoremReport {
        d,
        delta,
        stabilizers,
        star,
        orbit_reps,
        torsion_found,
        action_free_on_samples,
    })
}

/// A random simplex of P_d with vertices in the ball: greedy extension
/// by random compatible vertices up to the target size.
fn sample_simplex(
    ball: &Ball,
    matrix: &DistanceMatrix,
    d: u32,
    max_size: usize,
    rng: &mut ChaCha8Rng,
) -> Vec<GroupElement> {
    let n = ball.vertex_count();
    let target = rng.gen_range(1..=max_size.max(1));
    let mut picked: Vec<usize> = vec![rng.gen_range(0..n)];
    let mut attempts = 0;
    while picked.len() < target && attempts < 8 * n {
        attempts += 1;
        let candidate = rng.gen_range(0..n);
        if picked.contains(&candidate) {
            continue;
        }
        let ok = picked.iter().all(|&u| {
            let dist = matrix.get(u, candidate);
            dist >= 1 && dist <= d
        });
        if ok {
            picked.push(candidate);
        }
    }
    let mut sigma: Vec<GroupElement> = picked
        .into_iter()
        .map(|i| ball.vertex(i as u32).clone())
        .collect();
    sigma.sort();
    sigma
}

/// Chooses the element whose translate gets the star check: a nontrivial
/// stabilizer element when one has been seen, otherwise a random short
/// nontrivial ball element.
fn pick_mover(
    o: &GroupOracle,
    sigma: &[GroupElement],
    ball: &Ball,
    rng: &mut ChaCha8Rng,
    stabilizers: &[StabilizerSample],
) -> GroupElement {
    if let Ok(stab) = simplex_stabilizer(o, sigma) {
        if let Some(g) = stab.elements().iter().find(|g| !g.is_identity()) {
            return g.clone();
        }
    }
    if let Some(g) = stabilizers
        .iter()
        .flat_map(|s| s.stabilizer.elements())
        .find(|g| !g.is_identity())
    {
        return g.clone();
    }
    loop {
        let i = rng.gen_range(0..ball.vertex_count());
        let g = ball.vertex(i as u32);
        if !g.is_identity() {
            return g.clone();
        }
    }
}

/// Builds the flag subcomplex C on W = σ ∪ gσ, materializes its second
/// barycentric subdivision, pushes the partial action of g through both
/// subdivisions, and verifies that p ≠ gp implies star(p) ∩ star(gp) = ∅
/// — equivalently (by face closure) that {p, gp} is never a simplex.
fn check_star_disjointness(
    o: &GroupOracle,
    d: u32,
    sigma: &[GroupElement],
    g: &GroupElement,
    report: &mut StarDisjointnessReport,
) -> Result<(), EquivariantError> {
    let mut w: Vec<GroupElement> = sigma.to_vec();
    for v in sigma {
        w.push(o.mul_unchecked(g, v));
    }
    w.sort();
    w.dedup();

    // Partial action of g on W.
    let vmap: Vec<Option<u32>> = w
        .iter()
        .map(|v| {
            let gv = o.mul_unchecked(g, v);
            w.binary_search(&gv).ok().map(|i| i as u32)
        })
        .collect();

    // C: all P_d-cliques within W.
    let k = w.len();
    let mut cliques: Vec<Vec<u32>> = Vec::new();
    for mask in 1u32..(1 << k) {
        let members: Vec<u32> = (0..k).filter(|&i| mask & (1 << i) != 0).map(|i| i as u32).collect();
        let ok = members.iter().enumerate().all(|(a, &i)| {
            members[a + 1..].iter().all(|&j| {
                o.difference(&w[i as usize], &w[j as usize]).len() as u32 <= d
            })
        });
        if ok {
            cliques.push(members);
        }
    }
    let labels: Vec<String> = w.iter().map(|v| o.render(v)).collect();
    let c = crate::complex::ExplicitComplex::from_simplices(labels, &cliques, 1 << 20)
        .map_err(EquivariantError::Complex)?;

    // First subdivision and the induced partial map on its vertices.
    let sd1 = c
        .barycentric_subdivision(1 << 20)
        .map_err(EquivariantError::Complex)?;
    let elems1 = c.face_poset_elements();
    let vmap1 = induced_vertex_map(&elems1, &vmap);

    let sd2 = sd1
        .barycentric_subdivision(1 << 21)
        .map_err(EquivariantError::Complex)?;
    let elems2 = sd1.face_poset_elements();
    let vmap2 = induced_vertex_map(&elems2, &vmap1);

    for (p, image) in vmap2.iter().enumerate() {
        match image {
            None => report.escaped += 1,
            Some(q) if *q as usize == p => {}
            Some(q) => {
                report.pairs_checked += 1;
                if sd2.contains(&[p as u32, *q]) {
                    report.violations += 1;
                }
            }
        }
    }
    Ok(())
}

/// Pushes a partial vertex map through one barycentric subdivision:
/// vertex i of sd(X) is elems[i] (a simplex of X); its image is the
/// elementwise image when fully defined and still a simplex of X.
fn induced_vertex_map(elems: &[Vec<u32>], vmap: &[Option<u32>]) -> Vec<Option<u32>> {
    let index: HashMap<&Vec<u32>, u32> = elems
        .iter()
        .enumerate()
        .map(|(i, s)| (s, i as u32))
        .collect();
    elems
        .iter()
        .map(|s| {
            let mut image = Vec::with_capacity(s.len());
            for &v in s {
                match vmap[v as usize] {
                    Some(gv) => image.push(gv),
                    None => return None,
                }
            }
            image.sort_unstable();
            image.dedup();
            if image.len() != s.len() {
                return None;
            }
            index.get(&image).copied()
        })
        .collect()
}

/// Counts translation-orbit representatives of simplices: subsets of
/// B(e, d) containing e with diameter ≤ d and at most `max_size`
/// vertices, identified under σ ~ u⁻¹σ for u ∈ σ, via the canonical
/// (lexicographically least) translate.
fn count_orbit_representatives(
    o: &GroupOracle,
    ball: &Ball,
    matrix: &DistanceMatrix,
    d: u32,
    max_size: usize,
) -> usize {
    let e_ix = ball
        .index_of(&o.identity())
        .expect("ball contains the identity") as usize;
    let candidates: Vec<usize> = (0..ball.vertex_count())
        .filter(|&i| i != e_ix && ball.dist_to_center(i as u32) <= d)
        .collect();

    let mut canonical: std::collections::BTreeSet<Vec<GroupElement>> =
        std::collections::BTreeSet::new();
    let mut stack: Vec<usize> = Vec::new();

    fn canonical_translate(o: &GroupOracle, sigma: &[GroupElement]) -> Vec<GroupElement> {
        let mut best: Option<Vec<GroupElement>> = None;
        for u in sigma {
            let u_inv = o.inv_unchecked(u);
            let mut translated: Vec<GroupElement> =
                sigma.iter().map(|v| o.mul_unchecked(&u_inv, v)).collect();
            translated.sort();
            if best.as_ref().is_none_or(|b| translated < *b) {
                best = Some(translated);
            }
        }
        best.expect("sigma is nonempty")
    }

    struct Dfs<'a> {
        o: &'a GroupOracle,
        ball: &'a Ball,
        matrix: &'a DistanceMatrix,
        d: u32,
        e_ix: usize,
        max_size: usize,
        candidates: &'a [usize],
    }
    impl Dfs<'_> {
        fn run(
            &self,
            from: usize,
            stack: &mut Vec<usize>,
            canonical: &mut std::collections::BTreeSet<Vec<GroupElement>>,
        ) {
            let sigma: Vec<GroupElement> = std::iter::once(self.e_ix)
                .chain(stack.iter().copied())
                .map(|i| self.ball.vertex(i as u32).clone())
                .collect();
            canonical.insert(canonical_translate(self.o, &sigma));
            if stack.len() + 1 >= self.max_size {
                return;
            }
            for (pos, &cand) in self.candidates.iter().enumerate().skip(from) {
                let ok = self.matrix.get(self.e_ix, cand) <= self.d
                    && stack
                        .iter()
                        .all(|&u| self.matrix.get(u, cand) <= self.d);
                if ok {
                    stack.push(cand);
                    self.run(pos + 1, stack, canonical);
                    stack.pop();
                }
            }
        }
    }
    Dfs {
        o,
        ball,
        matrix,
        d,
        e_ix,
        max_size,
        candidates: &candidates,
    }
    .run(0, &mut stack, &mut canonical);
    canonical.len()
}
