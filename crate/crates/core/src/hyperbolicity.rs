//! Exact four-point hyperbolicity on finite metric snapshots.
//!
//! The defect of a quadruple is (s₁ − s₂)/2 where s₁ ≥ s₂ ≥ s₃ are the
//! three pairing sums — the least δ making the four-point inequality hold
//! for that quadruple under every labeling. δ of a ball is the maximum
//! defect over all 4-subsets. A ball only ever certifies a lower bound
//! for the group's δ; reports carry the radius used.
//!
//! The pruned enumeration uses defect ≤ ecc(v)/2 for every member v of a
//! quadruple (the defect is at most half the quadruple's diameter, which
//! is at most any member's eccentricity), visits vertices in decreasing
//! eccentricity so large defects surface early, and partitions work into
//! per-vertex chunks whose local state makes the result — including the
//! examined-quadruple count — independent of thread scheduling.

use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::cayley::{Ball, DistanceMatrix};
use crate::error::MetricError;
use crate::groups::{GroupElement, GroupOracle};
use crate::half::HalfInt;

/// Twice the defect of a quadruple given its six pairwise distances.
fn defect_x2(d_xy: u32, d_zt: u32, d_xz: u32, d_yt: u32, d_xt: u32, d_yz: u32) -> i64 {
    let mut sums = [
        d_xy as i64 + d_zt as i64,
        d_xz as i64 + d_yt as i64,
        d_xt as i64 + d_yz as i64,
    ];
    sums.sort_unstable();
    sums[2] - sums[1]
}

/// Defect of four vertices over any pairwise-distance source.
pub fn quadruple_defect(
    dm: &impl crate::cayley::DistanceSource,
    x: &GroupElement,
    y: &GroupElement,
    z: &GroupElement,
    t: &GroupElement,
) -> Result<HalfInt, MetricError> {
    let d = defect_x2(
        dm.distance(x, y)?,
        dm.distance(z, t)?,
        dm.distance(x, z)?,
        dm.distance(y, t)?,
        dm.distance(x, t)?,
        dm.distance(y, z)?,
    );
    Ok(HalfInt::from_twice(d))
}

/// Defect of four indexed vertices of a distance matrix.
pub fn quadruple_defect_indices(m: &DistanceMatrix, q: [usize; 4]) -> HalfInt {
    let [i, j, k, l] = q;
    HalfInt::from_twice(defect_x2(
        m.get(i, j),
        m.get(k, l),
        m.get(i, k),
        m.get(j, l),
        m.get(i, l),
        m.get(j, k),
    ))
}

/// Resource limits for the quadruple enumeration.
#[derive(Clone, Copy, Debug, Default)]
pub struct DeltaBudget {
    /// Soft cap on examined quadruples, checked at deterministic chunk
    /// boundaries; when exceeded the report is flagged non-exhaustive.
    pub max_quadruples: Option<u64>,
}

/// Result of a δ computation over a distance matrix.
#[derive(Clone, Debug)]
pub struct MatrixDelta {
    pub delta: HalfInt,
    /// Matrix indices of a quadruple realizing the maximum defect.
    pub witness: Option<[usize; 4]>,
    pub quadruples_examined: u64,
    pub exhaustive: bool,
}

/// δ report for a ball, with the witness as group elements.
#[derive(Clone, Debug)]
pub struct DeltaReport {
    pub delta: HalfInt,
    pub witness: Option<[GroupElement; 4]>,
    pub ball_radius: u32,
    pub quadruples_examined: u64,
    pub exhaustive: bool,
    pub elapsed: Duration,
}

struct ChunkResult {
    best_x2: i64,
    /// Positions in the eccentricity ordering, ascending.
    witness: Option<[usize; 4]>,
    examined: u64,
}

fn eccentricities(m: &DistanceMatrix) -> Vec<u32> {
    let n = m.n();
    (0..n)
        .map(|i| (0..n).map(|j| m.get(i, j)).max().unwrap_or(0))
        .collect()
}

/// Vertices ordered by decreasing eccentricity (index ascending on ties).
fn scan_order(ecc: &[u32]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..ecc.len()).collect();
    order.sort_by(|&a, &b| ecc[b].cmp(&ecc[a]).then(a.cmp(&b)));
    order
}

fn chunk_scan(m: &DistanceMatrix, order: &[usize], ecc: &[u32], p1: usize) -> ChunkResult {
    let n = order.len();
    let v1 = order[p1];
    let mut best_x2 = 0i64;
    let mut witness: Option<[usize; 4]> = None;
    let mut examined = 0u64;
    for p2 in (p1 + 1)..n {
        let v2 = order[p2];
        // defect ≤ ecc(v2)/2 for every quadruple containing v2, and the
        // ordering is by decreasing eccentricity.
        if (ecc[v2] as i64) <= best_x2 && witness.is_some() {
            break;
        }
        let d12 = m.get(v1, v2);
        for p3 in (p2 + 1)..n {
            let v3 = order[p3];
            if (ecc[v3] as i64) <= best_x2 && witness.is_some() {
                break;
            }
            let d13 = m.get(v1, v3);
            let d23 = m.get(v2, v3);
            for p4 in (p3 + 1)..n {
                let v4 = order[p4];
                if (ecc[v4] as i64) <= best_x2 && witness.is_some() {
                    break;
                }
                examined += 1;
                let d = defect_x2(
                    d12,
                    m.get(v3, v4),
                    d13,
                    m.get(v2, v4),
                    m.get(v1, v4),
                    d23,
                );
                if d > best_x2 || witness.is_none() {
                    best_x2 = d;
                    witness = Some([p1, p2, p3, p4]);
                }
            }
        }
    }
    ChunkResult {
        best_x2,
        witness,
        examined,
    }
}

/// Chunk indices are processed in fixed-size waves so the budget check
/// happens at the same deterministic boundaries regardless of the number
/// of worker threads. The first wave is a single chunk so that small
/// budgets take effect even on small matrices.
const WAVE: usize = 16;

/// Maximum quadruple defect over a distance matrix, with pruning and
/// per-vertex parallel chunks. Deterministic: the same matrix and budget
/// always produce the same (delta, witness, examined, exhaustive) tuple.
pub fn delta_of_matrix(m: &DistanceMatrix, budget: &DeltaBudget) -> MatrixDelta {
    let n = m.n();
    if n < 4 {
        return MatrixDelta {
            delta: HalfInt::ZERO,
            witness: None,
            quadruples_examined: 0,
            exhaustive: true,
        };
    }
    let ecc = eccentricities(m);
    let order = scan_order(&ecc);
    let mut best_x2 = 0i64;
    let mut witness: Option<[usize; 4]> = None;
    let mut examined = 0u64;
    let mut exhaustive = true;
    let chunk_count = n - 3;
    let mut next = 0usize;
    while next < chunk_count {
        if let Some(cap) = budget.max_quadruples {
            if examined >= cap {
                exhaustive = false;
                break;
            }
        }
        let wave_end = if next == 0 {
            1
        } else {
            (next + WAVE).min(chunk_count)
        };
        let results: Vec<ChunkResult> = (next..wave_end)
            .into_par_iter()
            .map(|p1| chunk_scan(m, &order, &ecc, p1))
            .collect();
        for r in results {
            examined += r.examined;
            if let Some(w) = r.witness {
                if witness.is_none() || r.best_x2 > best_x2 {
                    best_x2 = r.best_x2;
                    witness = Some(w);
                }
            }
        }
        next = wave_end;
    }
    let witness = witness.map(|w| {
        let mut ids = [order[w[0]], order[w[1]], order[w[2]], order[w[3]]];
        ids.sort_unstable();
        ids
    });
    MatrixDelta {
        delta: HalfInt::from_twice(best_x2),
        witness,
        quadruples_examined: examined,
        exhaustive,
    }
}

/// Reference implementation: plain O(n⁴) enumeration in index order, no
/// pruning, no parallelism. The pruned path must match it exactly.
pub fn delta_naive(m: &DistanceMatrix) -> (HalfInt, Option<[usize; 4]>) {
    let n = m.n();
    let mut best = 0i64;
    let mut witness = None;
    for i in 0..n {
        for j in (i + 1)..n {
            for k in (j + 1)..n {
                for l in (k + 1)..n {
                    let d = defect_x2(
                        m.get(i, j),
                        m.get(k, l),
                        m.get(i, k),
                        m.get(j, l),
                        m.get(i, l),
                        m.get(j, k),
                    );
                    if d > best || witness.is_none() {
                        best = d;
                        witness = Some([i, j, k, l]);
                    }
                }
            }
        }
    }
    (HalfInt::from_twice(best), witness)
}

/// Exhaustive (budget permitting) δ of a ball with a witness quadruple.
pub fn delta_of_ball(o: &GroupOracle, ball: &Ball, budget: &DeltaBudget) -> DeltaReport {
    let start = Instant::now();
    let m = DistanceMatrix::from_ball(o, ball);
    let md = delta_of_matrix(&m, budget);
    DeltaReport {
        delta: md.delta,
        witness: md.witness.map(|w| {
            [
                ball.vertex(w[0] as u32).clone(),
                ball.vertex(w[1] as u32).clone(),
                ball.vertex(w[2] as u32).clone(),
                ball.vertex(w[3] as u32).clone(),
            ]
        }),
        ball_radius: ball.radius(),
        quadruples_examined: md.quadruples_examined,
        exhaustive: md.exhaustive,
        elapsed: start.elapsed(),
    }
}

/// First quadruple (in index order) violating the four-point inequality
/// for the given δ, if any.
pub fn check_delta_matrix(m: &DistanceMatrix, delta: HalfInt) -> Option<[usize; 4]> {
    let n = m.n();
    let t = delta.twice();
    let ecc = eccentricities(m);
    for i in 0..n {
        if (ecc[i] as i64) <= t {
            continue;
        }
        for j in (i + 1)..n {
            if (ecc[j] as i64) <= t {
                continue;
            }
            for k in (j + 1)..n {
                if (ecc[k] as i64) <= t {
                    continue;
                }
                for l in (k + 1)..n {
                    let d = defect_x2(
                        m.get(i, j),
                        m.get(k, l),
                        m.get(i, k),
                        m.get(j, l),
                        m.get(i, l),
                        m.get(j, k),
                    );
                    if d > t {
                        return Some([i, j, k, l]);
                    }
                }
            }
        }
    }
    None
}

/// Ball-level [`check_delta_matrix`], returning the violator as words.
pub fn check_delta(
    o: &GroupOracle,
    ball: &Ball,
    delta: HalfInt,
) -> Option<[GroupElement; 4]> {
    let m = DistanceMatrix::from_ball(o, ball);
    check_delta_matrix(&m, delta).map(|w| {
        [
            ball.vertex(w[0] as u32).clone(),
            ball.vertex(w[1] as u32).clone(),
            ball.vertex(w[2] as u32).clone(),
            ball.vertex(w[3] as u32).clone(),
        ]
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cayley::build_ball;
    use crate::groups::GroupSpec;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn oracle(spec: GroupSpec) -> GroupOracle {
        GroupOracle::load(spec).unwrap()
    }

    #[test]
    fn defect_examples() {
        let free = oracle(GroupSpec::free(2));
        let e = free.identity();
        let a = free.parse_word("a").unwrap();
        let b = free.parse_word("b").unwrap();
        let ab = free.parse_word("ab").unwrap();

        // Repeated point: two pairing sums coincide.
        assert_eq!(
            quadruple_defect(&free, &e, &e, &a, &b).unwrap(),
            HalfInt::ZERO
        );
        // Pairing sums 4, 4, 2.
        assert_eq!(
            quadruple_defect(&free, &e, &ab, &a, &b).unwrap(),
            HalfInt::ZERO
        );

        let z2 = oracle(GroupSpec::free_abelian(2));
        for n in 1..=4i64 {
            let xy = z2.parse_word(&format!("a^{n}b^{n}")).unwrap();
            let x = z2.parse_word(&format!("a^{n}")).unwrap();
            let y = z2.parse_word(&format!("b^{n}")).unwrap();
            assert_eq!(
                quadruple_defect(&z2, &z2.identity(), &xy, &x, &y).unwrap(),
                HalfInt::from_int(n),
                "coordinate quadruple has defect n"
            );
        }
    }

    #[test]
    fn defect_is_permutation_invariant() {
        let o = oracle(GroupSpec::free_product_cyclic(&[2, 3]));
        let ball = build_ball(&o, 3, 10_000).unwrap();
        let m = DistanceMatrix::from_ball(&o, &ball);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..30 {
            let mut q: Vec<usize> = (0..m.n()).collect();
            q.shuffle(&mut rng);
            let q: Vec<usize> = q.into_iter().take(4).collect();
            let base = quadruple_defect_indices(&m, [q[0], q[1], q[2], q[3]]);
            let mut perm = q.clone();
            // All 24 orderings via repeated next-permutation-style shuffles.
            for _ in 0..24 {
                perm.shuffle(&mut rng);
                assert_eq!(
                    quadruple_defect_indices(&m, [perm[0], perm[1], perm[2], perm[3]]),
                    base
                );
            }
        }
    }

    #[test]
    fn trees_have_delta_zero() {
        let free = oracle(GroupSpec::free(2));
        for r in 1..=3 {
            let ball = build_ball(&free, r, 100_000).unwrap();
            let report = delta_of_ball(&free, &ball, &DeltaBudget::default());
            assert_eq!(report.delta, HalfInt::ZERO, "free group ball radius {r}");
            assert!(report.exhaustive);
        }

        let dinf = oracle(GroupSpec::infinite_dihedral());
        let ball = build_ball(&dinf, 8, 100).unwrap();
        let report = delta_of_ball(&dinf, &ball, &DeltaBudget::default());
        assert_eq!(report.delta, HalfInt::ZERO);
    }

    /// The triangle cactus Z/2 * Z/3 with S = {a, b, b²} glues triangles
    /// at vertices, so its path metric is a tree metric and δ = 0; the
    /// hexagon (S₃) has δ = 1.
    #[test]
    fn small_backends_exact_delta() {
        let z2z3 = oracle(GroupSpec::free_product_cyclic(&[2, 3]));
        let ball = build_ball(&z2z3, 4, 100_000).unwrap();
        let report = delta_of_ball(&z2z3, &ball, &DeltaBudget::default());
        assert_eq!(report.delta, HalfInt::ZERO);

        let s3 = oracle(GroupSpec::symmetric_3());
        let ball = build_ball(&s3, 3, 100).unwrap();
        assert_eq!(ball.vertex_count(), 6);
        let report = delta_of_ball(&s3, &ball, &DeltaBudget::default());
        assert_eq!(report.delta, HalfInt::from_int(1), "hexagon has delta 1");
        let w = report.witness.unwrap();
        assert_eq!(
            quadruple_defect(&s3, &w[0], &w[1], &w[2], &w[3]).unwrap(),
            HalfInt::from_int(1),
            "witness defect equals delta"
        );
    }

    #[test]
    fn abelian_delta_grows_with_radius() {
        let z2 = oracle(GroupSpec::free_abelian(2));
        let mut last = HalfInt::ZERO;
        for r in 1..=3u32 {
            let ball = build_ball(&z2, 2 * r, 100_000).unwrap();
            let report = delta_of_ball(&z2, &ball, &DeltaBudget::default());
            assert!(report.delta >= HalfInt::from_int(r as i64));
            assert!(report.delta >= last, "monotone in radius");
            last = report.delta;
        }

        // The non-hyperbolic control: at radius 6 a violator of δ = 1
        // exists (the coordinate quadruple family).
        let ball = build_ball(&z2, 6, 100_000).unwrap();
        assert!(check_delta(&z2, &ball, HalfInt::from_int(1)).is_some());
    }

    #[test]
    fn check_delta_matches_delta_of_ball() {
        let s3 = oracle(GroupSpec::symmetric_3());
        let ball = build_ball(&s3, 3, 100).unwrap();
        let report = delta_of_ball(&s3, &ball, &DeltaBudget::default());
        assert!(check_delta(&s3, &ball, report.delta).is_none());
        let below = HalfInt::from_twice(report.delta.twice() - 1);
        let violator = check_delta(&s3, &ball, below).unwrap();
        assert!(
            quadruple_defect(&s3, &violator[0], &violator[1], &violator[2], &violator[3])
                .unwrap()
                > below
        );

        // δ = ball diameter is always enough.
        let m = DistanceMatrix::from_ball(&s3, &ball);
        let diam = (0..m.n())
            .flat_map(|i| (0..m.n()).map(move |j| (i, j)))
            .map(|(i, j)| m.get(i, j))
            .max()
            .unwrap();
        assert!(check_delta(&s3, &ball, HalfInt::from_int(diam as i64)).is_none());
    }

    fn random_graph_matrix(rng: &mut impl Rng, n: usize) -> DistanceMatrix {
        // Random spanning tree plus extra edges, then BFS all-pairs.
        let mut adj = vec![vec![]; n];
        for v in 1..n {
            let u = rng.gen_range(0..v);
            adj[u].push(v);
            adj[v].push(u);
        }
        for _ in 0..n {
            let u = rng.gen_range(0..n);
            let v = rng.gen_range(0..n);
            if u != v && !adj[u].contains(&v) {
                adj[u].push(v);
                adj[v].push(u);
            }
        }
        let mut d = vec![0u32; n * n];
        for s in 0..n {
            let mut dist = vec![u32::MAX; n];
            dist[s] = 0;
            let mut q = std::collections::VecDeque::from([s]);
            while let Some(u) = q.pop_front() {
                for &v in &adj[u] {
                    if dist[v] == u32::MAX {
                        dist[v] = dist[u] + 1;
                        q.push_back(v);
                    }
                }
            }
            for t in 0..n {
                d[s * n + t] = dist[t];
            }
        }
        DistanceMatrix::from_raw(n, d)
    }

    #[test]
    fn pruned_equals_naive_on_random_graphs() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for _ in 0..8 {
            let n = rng.gen_range(10..=60);
            let m = random_graph_matrix(&mut rng, n);
            let pruned = delta_of_matrix(&m, &DeltaBudget::default());
            let (naive, naive_w) = delta_naive(&m);
            assert_eq!(pruned.delta, naive);
            assert!(pruned.exhaustive);
            if let (Some(w), Some(nw)) = (pruned.witness, naive_w) {
                assert_eq!(quadruple_defect_indices(&m, w), naive);
                assert_eq!(quadruple_defect_indices(&m, nw), naive);
            }
        }
    }

    #[test]
    fn budget_flags_non_exhaustive() {
        let z2 = oracle(GroupSpec::free_abelian(2));
        let ball = build_ball(&z2, 4, 100_000).unwrap();
        let report = delta_of_ball(
            &z2,
            &ball,
            &DeltaBudget {
                max_quadruples: Some(10),
            },
        );
        assert!(!report.exhaustive, "tiny budget must flag the report");
        // Still a sound lower bound.
        let full = delta_of_ball(&z2, &ball, &DeltaBudget::default());
        assert!(report.delta <= full.delta);
    }

    #[test]
    fn determinism_across_runs() {
        let z2 = oracle(GroupSpec::free_abelian(2));
        let ball = build_ball(&z2, 4, 100_000).unwrap();
        let a = delta_of_ball(&z2, &ball, &DeltaBudget::default());
        let b = delta_of_ball(&z2, &ball, &DeltaBudget::default());
        assert_eq!(a.delta, b.delta);
        assert_eq!(a.witness, b.witness);
        assert_eq!(a.quadruples_examined, b.quadruples_examined);
    }
}
