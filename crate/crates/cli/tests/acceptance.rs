//! Acceptance suite: one test per criterion, each printing a PASS line
//! (run with `cargo test -p ripslab-cli --test acceptance -- --nocapture`
//! to see them). Expected values come from independent desk-scale
//! oracles: breadth-first enumeration, brute-force subgroup lattices,
//! naive quadruple scans, and explicit Smith-normal-form homology.

use std::time::{Duration, Instant};

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use ripslab_core::cayley::{build_ball, DistanceMatrix};
use ripslab_core::complex::{greedy_collapse, reduced_homology, ExplicitComplex};
use ripslab_core::contraction::{
    contract, initial_set, sample_f_vertices, verify_trace, ContractionConfig, StepKind,
    TraceFile,
};
use ripslab_core::equivariant::{
    conjugacy_classes, enumerate_finite_subgroups, fixed_point_complex, invariant_simplex_poset,
    rips_theorem_checks, small_orbit_vertex, subgroup_closure, ClosureGuards, RipsCheckParams,
    SubgroupEnumGuards, SubgroupRecord,
};
use ripslab_core::groups::{GroupElement, GroupOracle, GroupSpec};
use ripslab_core::hyperbolicity::{
    delta_naive, delta_of_ball, delta_of_matrix, quadruple_defect_indices, DeltaBudget,
};
use ripslab_core::HalfInt;

fn oracle(spec: GroupSpec) -> GroupOracle {
    GroupOracle::load(spec).unwrap()
}

fn random_element(o: &GroupOracle, rng: &mut impl Rng, max_len: usize) -> GroupElement {
    let gens: Vec<_> = o.generators().iter().collect();
    let len = rng.gen_range(0..=max_len);
    let mut acc = o.identity();
    for _ in 0..len {
        acc = o.multiply(&acc, &o.generator(gens[rng.gen_range(0..gens.len())])).unwrap();
    }
    acc
}

fn pass(criterion: u32, detail: &str) {
    println!("ACCEPTANCE {criterion}: PASS — {detail}");
}

/// Criterion 1: δ = 0 for free-group balls (radius ≤ 4) and the
/// infinite dihedral line (radius ≤ 10), exactly; the free abelian
/// plane measures δ ≥ r at radius 2r. Each run within 60 s.
#[test]
fn criterion_1_hyperbolicity_ground_truths() {
    let budget = DeltaBudget::default();

    let free = oracle(GroupSpec::free(2));
    for radius in 1..=4 {
        let start = Instant::now();
        let ball = build_ball(&free, radius, 200_000).unwrap();
        let report = delta_of_ball(&free, &ball, &budget);
        assert_eq!(report.delta, HalfInt::ZERO, "free group radius {radius}");
        assert!(report.exhaustive);
        assert!(start.elapsed() < Duration::from_secs(60));
    }

    let dinf = oracle(GroupSpec::infinite_dihedral());
    for radius in 1..=10 {
        let start = Instant::now();
        let ball = build_ball(&dinf, radius, 1_000).unwrap();
        let report = delta_of_ball(&dinf, &ball, &budget);
        assert_eq!(report.delta, HalfInt::ZERO, "dihedral line radius {radius}");
        assert!(report.exhaustive);
        assert!(start.elapsed() < Duration::from_secs(60));
    }

    let plane = oracle(GroupSpec::free_abelian(2));
    for r in 1..=3u32 {
        let start = Instant::now();
        let ball = build_ball(&plane, 2 * r, 200_000).unwrap();
        let report = delta_of_ball(&plane, &ball, &budget);
        assert!(
            report.delta >= HalfInt::from_int(r as i64),
            "plane radius {} has delta {} < {r}",
            2 * r,
            report.delta
        );
        assert!(report.exhaustive);
        assert!(start.elapsed() < Duration::from_secs(60));
    }
    pass(1, "free/dihedral balls have δ = 0; plane ball at 2r has δ ≥ r");
}

/// Criterion 2: the pruned parallel enumeration equals the naive O(n⁴)
/// reference exactly on 20 random graphs and balls of ≤ 120 vertices.
#[test]
fn criterion_2_pruned_equals_naive() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let mut cases = 0;

    // 16 random connected graphs.
    for _ in 0..16 {
        let n = rng.gen_range(20..=120);
        let mut adj = vec![vec![]; n];
        for v in 1..n {
            let u = rng.gen_range(0..v);
            adj[u].push(v);
            adj[v].push(u);
        }
        for _ in 0..(2 * n) {
            let u = rng.gen_range(0..n);
            let v = rng.gen_range(0..n);
            if u != v && !adj[u].contains(&v) {
                adj[u].push(v);
                adj[v].push(u);
            }
        }
        let mut table = vec![0u32; n * n];
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
                table[s * n + t] = dist[t];
            }
        }
        let m = DistanceMatrix::from_raw(n, table);
        let pruned = delta_of_matrix(&m, &DeltaBudget::default());
        let (naive, naive_witness) = delta_naive(&m);
        assert_eq!(pruned.delta, naive);
        assert!(pruned.exhaustive);
        let w = pruned.witness.unwrap();
        assert_eq!(quadruple_defect_indices(&m, w), naive);
        assert_eq!(quadruple_defect_indices(&m, naive_witness.unwrap()), naive);
        cases += 1;
    }

    // 4 genuine balls.
    for spec in [
        GroupSpec::free(2),
        GroupSpec::infinite_dihedral(),
        GroupSpec::free_product_cyclic(&[2, 3]),
        GroupSpec::free_abelian(2),
    ] {
        let o = oracle(spec);
        let mut radius = 1;
        loop {
            let ball = build_ball(&o, radius + 1, 121);
            match ball {
                Ok(b) if b.vertex_count() <= 120 => radius += 1,
                _ => break,
            }
        }
        let ball = build_ball(&o, radius, 200).unwrap();
        let m = DistanceMatrix::from_ball(&o, &ball);
        let pruned = delta_of_matrix(&m, &DeltaBudget::default());
        let (naive, _) = delta_naive(&m);
        assert_eq!(pruned.delta, naive);
        cases += 1;
    }
    assert_eq!(cases, 20);
    pass(2, "pruned-parallel δ equals the naive reference on 20 instances");
}

/// Criterion 3: over ≥ 200 generated (H, y₀) instances on the infinite
/// dihedral, Z/2*Z/3, and S₃ backends, the small-orbit certificates
/// (a1), (a2), and (b) under its hypotheses all hold exactly.
#[test]
fn criterion_3_small_orbit_lemma() {
    let cases: Vec<(GroupSpec, Vec<Vec<&str>>, u32)> = vec![
        (
            GroupSpec::infinite_dihedral(),
            vec![vec!["a"], vec!["b"], vec!["aba"], vec!["bab"]],
            10,
        ),
        (
            GroupSpec::free_product_cyclic(&[2, 3]),
            vec![vec!["a"], vec!["b"], vec!["ab^2a", "noop"]],
            5,
        ),
        (
            GroupSpec::symmetric_3(),
            vec![vec!["a"], vec!["b"], vec!["ab"], vec!["a", "b"]],
            3,
        ),
    ];
    let mut instances = 0;
    let mut b_exercised = 0;
    for (spec, subgroup_words, delta_radius) in cases {
        let o = oracle(spec);
        let ball = build_ball(&o, delta_radius, 200_000).unwrap();
        let delta = delta_of_ball(&o, &ball, &DeltaBudget::default()).delta;
        let mut rng = ChaCha8Rng::seed_from_u64(1234);
        for words in &subgroup_words {
            let gens: Vec<GroupElement> = words
                .iter()
                .filter(|w| **w != "noop")
                .map(|w| o.parse_word(w).unwrap())
                .collect();
            let h = match subgroup_closure(&o, &gens, &ClosureGuards::default()) {
                Ok(h) => h,
                Err(_) => continue,
            };
            for _ in 0..20 {
                let y0 = random_element(&o, &mut rng, 6);
                let x0 = random_element(&o, &mut rng, 3);
                let outcome = small_orbit_vertex(&o, &h, &y0, delta, Some(&x0), 500)
                    .expect("certificate violation would falsify the bound or delta");
                assert!(outcome.checks.iter().all(|c| c.pass));
                if outcome.b_applied {
                    b_exercised += 1;
                }
                instances += 1;
            }
        }
    }
    assert!(instances >= 200, "only {instances} instances generated");
    assert!(b_exercised > 0, "bound (b) must be exercised");
    pass(
        3,
        &format!("{instances} (H, y0) instances, zero certificate violations"),
    );
}

/// Criterion 4: contraction runs on the infinite dihedral with H = ⟨a⟩
/// (≥ 25 random H-invariant seeds) and on free/line backends with H
/// trivial. Every trace terminates inside the guard and passes the
/// verifier; every move step decreases the moved orbit's distance by at
/// least ⌊d/4⌋ − (8δ+4) = 1, and by exactly ⌊d/4⌋ on the line backend.
#[test]
fn criterion_4_contraction_engine() {
    let d = 20;
    let delta = HalfInt::ZERO;

    // Infinite dihedral, H = ⟨a⟩: 25 random H-invariant seeds.
    let o = oracle(GroupSpec::infinite_dihedral());
    let a = o.parse_word("a").unwrap();
    let h = subgroup_closure(&o, &[a], &ClosureGuards::default()).unwrap();
    let cfg = ContractionConfig::new(&o, d, delta, h.clone(), 40).unwrap();
    for seed in 0..25u64 {
        let start = Instant::now();
        let seeds = sample_f_vertices(&o, &h, d, 10, 3, seed);
        let k0 = initial_set(&o, &h, &seeds, &cfg.base_vertex);
        let guard = k0.len() * 41 + 8;
        let trace = contract(&o, &cfg, &k0, guard).expect("trace must complete");
        let report = verify_trace(&trace.to_file(&o));
        assert!(report.pass, "seed {seed}: {:?}", report.failure);
        check_move_decrements(&o, &trace_moves(&trace), &cfg.base_vertex, true);
        assert!(start.elapsed() < Duration::from_secs(120));
    }

    // The line backend with H trivial: far tails force move steps that
    // shift exactly ⌊d/4⌋ = 5 per step.
    let trivial = SubgroupRecord::trivial();
    let cfg_line = ContractionConfig::new(&o, d, delta, trivial.clone(), 40).unwrap();
    let mut line_moves = 0;
    for seed in 0..5u64 {
        let start = Instant::now();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut k0: Vec<GroupElement> = vec![o.identity()];
        for _ in 0..4 {
            let len = rng.gen_range(11..=28usize);
            let positive = rng.gen_bool(0.5);
            let word = if positive {
                "ab".repeat(len / 2) + if len % 2 == 1 { "a" } else { "" }
            } else {
                "ba".repeat(len / 2) + if len % 2 == 1 { "b" } else { "" }
            };
            k0.push(o.parse_word(&word).unwrap());
        }
        k0.sort();
        k0.dedup();
        let guard = k0.len() * 41 + 8;
        let trace = contract(&o, &cfg_line, &k0, guard).expect("line trace");
        assert!(verify_trace(&trace.to_file(&o)).pass);
        let moves = trace_moves(&trace);
        line_moves += moves.len();
        check_move_decrements(&o, &moves, &cfg_line.base_vertex, true);
        assert!(start.elapsed() < Duration::from_secs(120));
    }
    assert!(line_moves > 0, "line runs must exercise move steps");

    // Free group, H trivial.
    let free = oracle(GroupSpec::free(2));
    let cfg_free = ContractionConfig::new(&free, d, delta, trivial, 40).unwrap();
    let mut free_moves = 0;
    for seed in 0..5u64 {
        let start = Instant::now();
        let seeds = sample_f_vertices(&free, &cfg_free.subgroup, d, 16, 5, 100 + seed);
        let k0 = initial_set(&free, &cfg_free.subgroup, &seeds, &cfg_free.base_vertex);
        let max_dist = k0.iter().map(|v| v.len()).max().unwrap();
        let guard = k0.len() * (max_dist + 1) + 8;
        let trace = contract(&free, &cfg_free, &k0, guard).expect("free trace");
        assert!(verify_trace(&trace.to_file(&free)).pass);
        let moves = trace_moves(&trace);
        free_moves += moves.len();
        // Trivial subgroup on the tree: also exactly ⌊d/4⌋ per move.
        check_move_decrements(&free, &moves, &cfg_free.base_vertex, true);
        assert!(start.elapsed() < Duration::from_secs(120));
    }
    assert!(free_moves > 0, "free-group runs must exercise move steps");
    pass(
        4,
        &format!(
            "25 dihedral ⟨a⟩ traces, {line_moves} line moves, {free_moves} tree moves, all verified"
        ),
    );
}

fn trace_moves(
    trace: &ripslab_core::contraction::ContractionTrace,
) -> Vec<ripslab_core::contraction::ContractionStep> {
    trace
        .steps
        .iter()
        .filter(|s| s.kind == StepKind::Move)
        .cloned()
        .collect()
}

fn check_move_decrements(
    o: &GroupOracle,
    moves: &[ripslab_core::contraction::ContractionStep],
    x0: &GroupElement,
    exact_quarter: bool,
) {
    for step in moves {
        let orbit_before: u32 = step
            .moved_orbit
            .iter()
            .map(|v| o.multiply(&o.invert(x0).unwrap(), v).unwrap().len() as u32)
            .max()
            .unwrap();
        let orbit_after: u32 = step
            .vertex_map
            .iter()
            .filter(|(from, _)| step.moved_orbit.contains(from))
            .map(|(_, to)| o.multiply(&o.invert(x0).unwrap(), to).unwrap().len() as u32)
            .max()
            .unwrap();
        let decrease = orbit_before as i64 - orbit_after as i64;
        assert!(decrease >= 1, "move must strictly decrease orbit distance");
        if exact_quarter {
            assert_eq!(decrease, 5, "exact ⌊d/4⌋ decrease");
        }
    }
}

/// Criterion 5: 50 mutated traces (perturbed vertex images, corrupted
/// maps, misplaced targets, inflated terminals, tampered certificate
/// numbers, broken invariance) are all rejected, each with the failing
/// check its corruption class documents.
#[test]
fn criterion_5_mutation_soundness() {
    let o = oracle(GroupSpec::infinite_dihedral());
    let trivial = SubgroupRecord::trivial();
    let cfg = ContractionConfig::new(&o, 20, HalfInt::ZERO, trivial, 40).unwrap();

    let base_traces: Vec<TraceFile> = (0..5u64)
        .map(|i| {
            let k0 = vec![
                o.identity(),
                o.parse_word(&"ab".repeat(10 + i as usize)).unwrap(),
                o.parse_word(&"ba".repeat(8 + i as usize)).unwrap(),
            ];
            let trace = contract(&o, &cfg, &k0, 400).unwrap();
            trace.to_file(&o)
        })
        .collect();
    for file in &base_traces {
        assert!(verify_trace(file).pass, "base traces must verify");
    }

    let mut rejected = 0;
    let mut expect = |file: TraceFile, check: &str| {
        let report = verify_trace(&file);
        assert!(!report.pass, "mutation must be rejected ({check})");
        assert_eq!(report.failure.as_ref().unwrap().check, check);
        rejected += 1;
    };

    for (i, base) in base_traces.iter().enumerate() {
        let move_idx = base
            .steps
            .iter()
            .position(|s| s.kind == "move")
            .expect("base traces have moves");

        // Perturbed image of the moved vertex (one generator step).
        let mut m1 = base.clone();
        {
            let step = &mut m1.steps[move_idx];
            let y0 = step.y0.clone().unwrap();
            for (from, to) in step.vertex_map.iter_mut() {
                if *from == y0 {
                    let flip = if to.ends_with('a') { "b" } else { "a" };
                    to.push_str(flip);
                    break;
                }
            }
        }
        expect(m1, "map_form");

        // Perturbed image of an unmoved vertex.
        let mut m2 = base.clone();
        {
            let step = &mut m2.steps[move_idx];
            let y0 = step.y0.clone().unwrap();
            let victim = step
                .vertex_map
                .iter_mut()
                .find(|(from, _)| *from != y0 && from != "e");
            let (from, to) = victim.expect("an unmoved vertex exists");
            *to = format!("{from}{}", if from.ends_with('a') { "b" } else { "a" });
        }
        expect(m2, "map_form");

        // Dropped map entry.
        let mut m3 = base.clone();
        m3.steps[move_idx].vertex_map.remove(i % 3);
        expect(m3, "map_form");

        // Swapped images of two unmoved vertices.
        let mut m4 = base.clone();
        {
            let step = &mut m4.steps[move_idx];
            let y0 = step.y0.clone().unwrap();
            let idxs: Vec<usize> = step
                .vertex_map
                .iter()
                .enumerate()
                .filter(|(_, (from, _))| *from != y0)
                .map(|(j, _)| j)
                .take(2)
                .collect();
            let tmp = step.vertex_map[idxs[0]].1.clone();
            step.vertex_map[idxs[0]].1 = step.vertex_map[idxs[1]].1.clone();
            step.vertex_map[idxs[1]].1 = tmp;
        }
        expect(m4, "map_form");

        // Wrong furthest vertex.
        let mut m5 = base.clone();
        m5.steps[move_idx].y0 = Some("e".to_string());
        expect(m5, "furthest_choice");

        // Target at the right distance but off the geodesic (wrong side
        // of the line).
        let mut m6 = base.clone();
        {
            let step = &mut m6.steps[move_idx];
            let y0p = o.parse_word(step.y0_prime.as_ref().unwrap()).unwrap();
            let len = y0p.len();
            let first = o.render(&y0p).chars().next().unwrap();
            let mirrored = if first == 'a' {
                "ba".repeat(len / 2) + if len % 2 == 1 { "b" } else { "" }
            } else {
                "ab".repeat(len / 2) + if len % 2 == 1 { "a" } else { "" }
            };
            let y0_word = step.y0.clone().unwrap();
            step.y0_prime = Some(mirrored.clone());
            for (from, to) in step.vertex_map.iter_mut() {
                if *from == y0_word {
                    *to = mirrored.clone();
                }
            }
        }
        expect(m6, "target_placement");

        // Inflated terminal simplex.
        let mut m7 = base.clone();
        m7.terminal.push("ab".repeat(12 + i));
        expect(m7, "terminal");

        // Tampered certificate ledger.
        let mut m8 = base.clone();
        m8.steps[move_idx].certificates[1].rhs_x2 += 2;
        expect(m8, "certificate_echo");

        // Inflated cone-step domain breaks the chain.
        let mut m9 = base.clone();
        {
            let last = m9.steps.len() - 1;
            m9.steps[last].domain.push("ab".repeat(11 + i));
            m9.steps[last]
                .vertex_map
                .push(("ab".repeat(11 + i), "ab".repeat(11 + i)));
        }
        expect(m9, "chain");

        // Config dropped below the theorem threshold.
        let mut m10 = base.clone();
        m10.config.d = 19;
        expect(m10, "config_arithmetic");
    }
    assert_eq!(rejected, 50);
    pass(5, "50 mutated traces rejected with the documented failing checks");
}

/// Criterion 6: with d ≥ 4δ+2, sampled stabilizers are exact and
/// finite; free-group stabilizers are all trivial; the orbit
/// representative count is finite and reproducible; star disjointness
/// holds on ≥ 10 explicit second subdivisions.
#[test]
fn criterion_6_rips_theorem_checks() {
    let params = RipsCheckParams::default();
    assert!(params.subcomplex_count >= 10);

    let o = oracle(GroupSpec::infinite_dihedral());
    let ball = build_ball(&o, 4, 1_000).unwrap();
    let report = rips_theorem_checks(&o, &ball, 2, HalfInt::ZERO, &params).unwrap();
    assert_eq!(report.star.violations, 0);
    assert!(report.star.subcomplexes >= 10);
    assert!(report
        .stabilizers
        .iter()
        .all(|s| s.stabilizer.order() >= 1));
    assert!(
        report
            .stabilizers
            .iter()
            .any(|s| s.stabilizer.order() == 2),
        "the edge {{e,a}} type stabilizer has order 2"
    );
    assert_eq!(report.orbit_reps.count, 5, "marked simplices of the line at d=2");
    let again = rips_theorem_checks(&o, &ball, 2, HalfInt::ZERO, &params).unwrap();
    assert_eq!(report.orbit_reps.count, again.orbit_reps.count, "reproducible");

    let free = oracle(GroupSpec::free(2));
    let ball = build_ball(&free, 2, 1_000).unwrap();
    let report = rips_theorem_checks(&free, &ball, 2, HalfInt::ZERO, &params).unwrap();
    assert!(!report.torsion_found);
    assert!(report.action_free_on_samples, "torsion-free action is free");
    assert!(report.stabilizers.iter().all(|s| s.stabilizer.is_trivial()));
    assert_eq!(report.star.violations, 0);
    pass(6, "stabilizers exact, stars disjoint on 20 subdivisions, orbit count 5");
}

/// Criterion 7: infinite dihedral, H = ⟨a⟩, d = 20, ball radius 30: the
/// fixed-point model is nonempty, connected, has all-trivial reduced
/// integral homology, and collapses to a point.
#[test]
fn criterion_7_fixed_point_contractibility() {
    let o = oracle(GroupSpec::infinite_dihedral());
    let a = o.parse_word("a").unwrap();
    let h = subgroup_closure(&o, &[a], &ClosureGuards::default()).unwrap();
    let ball = build_ball(&o, 30, 1_000).unwrap();
    let poset = invariant_simplex_poset(&o, &h, &ball, 20, 10_000).unwrap();
    assert!(!poset.is_empty());
    assert!(poset.is_connected());
    assert_eq!(poset.len(), 1023, "all unions of the ten nested orbits");

    let model = fixed_point_complex(&o, &poset, 2_000_000).unwrap();
    assert!(!model.complex.is_empty());
    assert!(model.complex.is_connected());
    let profile = reduced_homology(&model.complex, 8_000_000).unwrap();
    assert!(profile.is_trivial(), "reduced integral homology vanishes");
    let collapse = greedy_collapse(&model.complex);
    assert!(collapse.collapsed_to_point);
    pass(
        7,
        &format!(
            "poset of {} invariant simplices dismantles to {}; trivial homology; collapses",
            model.poset_size, model.core_size
        ),
    );
}

/// Criterion 8: the infinite dihedral yields exactly 2 nontrivial
/// conjugacy classes, S₃ exactly 3 (matching a brute-force lattice
/// oracle), the free group 0; the lists are finite by construction.
#[test]
fn criterion_8_conjugacy_classes() {
    let o = oracle(GroupSpec::infinite_dihedral());
    let subs =
        enumerate_finite_subgroups(&o, HalfInt::ZERO, &SubgroupEnumGuards::default()).unwrap();
    let classes = conjugacy_classes(&o, &subs, 6, 200_000).unwrap();
    assert_eq!(classes.nontrivial_count(&subs), 2);

    let s3 = oracle(GroupSpec::symmetric_3());
    let ball = build_ball(&s3, 3, 100).unwrap();
    let delta = delta_of_ball(&s3, &ball, &DeltaBudget::default()).delta;
    assert_eq!(delta, HalfInt::from_int(1));
    let subs =
        enumerate_finite_subgroups(&s3, delta, &SubgroupEnumGuards::default()).unwrap();
    let classes = conjugacy_classes(&s3, &subs, 3, 200_000).unwrap();
    assert_eq!(classes.nontrivial_count(&subs), 3);

    // Brute-force lattice oracle: subgroups from subset enumeration,
    // classes from conjugation by all six elements.
    let elements = ball.vertices().to_vec();
    let mut lattice: Vec<Vec<GroupElement>> = Vec::new();
    for mask in 1u64..(1 << 6) {
        let subset: Vec<GroupElement> = (0..6)
            .filter(|&i| mask & (1 << i) != 0)
            .map(|i| elements[i].clone())
            .collect();
        if SubgroupRecord::from_elements(&s3, subset.clone()).is_ok() {
            lattice.push(subset);
        }
    }
    assert_eq!(lattice.len(), subs.len());
    let mut class_reps: Vec<Vec<GroupElement>> = Vec::new();
    for sub in &lattice {
        let mut canonical: Option<Vec<GroupElement>> = None;
        for g in &elements {
            let g_inv = s3.invert(g).unwrap();
            let mut image: Vec<GroupElement> = sub
                .iter()
                .map(|x| {
                    s3.multiply(&s3.multiply(g, x).unwrap(), &g_inv).unwrap()
                })
                .collect();
            image.sort();
            if canonical.as_ref().is_none_or(|c| image < *c) {
                canonical = Some(image);
            }
        }
        let canonical = canonical.unwrap();
        if !class_reps.contains(&canonical) {
            class_reps.push(canonical);
        }
    }
    let oracle_nontrivial = class_reps.iter().filter(|c| c.len() > 1).count();
    assert_eq!(classes.nontrivial_count(&subs), oracle_nontrivial);

    let free = oracle(GroupSpec::free(2));
    let subs =
        enumerate_finite_subgroups(&free, HalfInt::ZERO, &SubgroupEnumGuards::default()).unwrap();
    let classes = conjugacy_classes(&free, &subs, 4, 200_000).unwrap();
    assert_eq!(classes.nontrivial_count(&subs), 0);
    pass(8, "nontrivial classes: dihedral 2, S3 3 (lattice oracle agrees), free 0");
}

/// Criterion 9: homology oracle sanity — full simplices acyclic, the
/// hollow triangle and the tetrahedron boundary have rank 1 in
/// dimensions 1 and 2, and barycentric subdivision preserves profiles
/// on instances of dimension ≤ 3.
#[test]
fn criterion_9_homology_sanity() {
    let labels = |n: usize| (0..n).map(|i| format!("v{i}")).collect::<Vec<_>>();
    for n in 1..=6 {
        let full: Vec<u32> = (0..n as u32).collect();
        let ec = ExplicitComplex::from_simplices(labels(n), &[full], 1_000).unwrap();
        assert!(reduced_homology(&ec, 1_000_000).unwrap().is_trivial());
    }

    let hollow = ExplicitComplex::from_simplices(
        labels(3),
        &[vec![0, 1], vec![1, 2], vec![0, 2]],
        100,
    )
    .unwrap();
    let profile = reduced_homology(&hollow, 10_000).unwrap();
    assert_eq!(profile.betti(1), 1);
    assert_eq!(profile.betti(0), 0);

    let sphere = ExplicitComplex::from_simplices(
        labels(4),
        &[vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3]],
        100,
    )
    .unwrap();
    let profile = reduced_homology(&sphere, 10_000).unwrap();
    assert_eq!(profile.betti(2), 1);
    assert_eq!(profile.betti(1), 0);

    for ec in [
        hollow.clone(),
        sphere.clone(),
        ExplicitComplex::from_simplices(labels(4), &[vec![0, 1, 2, 3]], 100).unwrap(),
        ExplicitComplex::from_simplices(labels(5), &[vec![0, 1], vec![2, 3], vec![4]], 100)
            .unwrap(),
    ] {
        let sd = ec.barycentric_subdivision(200_000).unwrap();
        let a = reduced_homology(&ec, 4_000_000).unwrap();
        let b = reduced_homology(&sd, 4_000_000).unwrap();
        let dims = a.groups.len().max(b.groups.len());
        for k in 0..dims {
            assert_eq!(a.betti(k), b.betti(k));
            assert_eq!(a.torsion(k), b.torsion(k));
        }
    }
    pass(9, "sphere/circle ranks exact; subdivision preserves profiles");
}

/// Criterion 10: repeated runs with identical manifests are
/// byte-identical across reports and traces (timing is a side channel).
#[test]
fn criterion_10_determinism() {
    let bin = env!("CARGO_BIN_EXE_ripslab");
    let tmp = tempfile::tempdir().unwrap();
    let spec_path = tmp.path().join("dinf.json");
    std::fs::write(
        &spec_path,
        r#"{ "kind": "free_product_cyclic", "parameters": { "orders": [2, 2] } }"#,
    )
    .unwrap();

    let run = |out: &std::path::Path, args: &[&str]| {
        let status = std::process::Command::new(bin)
            .args(args)
            .arg("--out")
            .arg(out)
            .output()
            .unwrap();
        assert!(
            status.status.success(),
            "stderr: {}",
            String::from_utf8_lossy(&status.stderr)
        );
    };

    for (name, args) in [
        (
            "delta.json",
            vec![
                "delta",
                "--group",
                spec_path.to_str().unwrap(),
                "--radius",
                "6",
            ],
        ),
        (
            "contract.json",
            vec![
                "contract",
                "--group",
                spec_path.to_str().unwrap(),
                "--d",
                "20",
                "--subgroup",
                "a",
                "--seed",
                "7",
            ],
        ),
        (
            "classes.json",
            vec!["classes", "--group", spec_path.to_str().unwrap()],
        ),
    ] {
        let out1 = tmp.path().join(format!("run1-{name}"));
        let out2 = tmp.path().join(format!("run2-{name}"));
        run(&out1, &args);
        run(&out2, &args);
        let a = std::fs::read(out1.join(name)).unwrap();
        let b = std::fs::read(out2.join(name)).unwrap();
        assert_eq!(a, b, "{name} must be byte-identical");
        if name == "contract.json" {
            let ta = std::fs::read(out1.join("trace.json")).unwrap();
            let tb = std::fs::read(out2.join("trace.json")).unwrap();
            assert_eq!(ta, tb, "traces must be byte-identical");
        }
    }
    pass(10, "byte-identical reports and traces across repeated runs");
}
