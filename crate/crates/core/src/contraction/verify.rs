//! Independent trace verification. The verifier consumes exactly the
//! serialized trace format, rebuilds the oracle from the embedded group
//! spec, and re-derives every check from raw distance queries — it
//! shares no intermediate state with the engine.
//!
//! Checks run per step in a fixed, documented order; the report names
//! the first failing check:
//!   config: load_group, load_words, config_subgroup, config_arithmetic,
//!           config_base
//!   structure: empty_trace, bad_kind, cone_is_last, ends_in_cone
//!   initial: initial_base_in_k, initial_invariant, initial_in_f, radius
//!   move step: chain, radius, move_case, furthest_choice,
//!              target_placement, map_form, c1_base_not_moved,
//!              c2_target_in_f, c2_subcase_a / c2b_*, c3_simplicial,
//!              c4_carrier, c5_progress_bound, c5_progress_strict,
//!              certificate_echo
//!   cone step: chain, radius, cone_within_half_d, cone_pairwise,
//!              cone_invariant, map_form, terminal, certificate_echo
//! The echo compares stored certificate numbers (name, bounds, verdict)
//! against the re-derived ones, catching tampered ledger values even
//! when the underlying geometry still holds.

use std::collections::BTreeMap;

use crate::equivariant::{orbit_of, small_orbit_vertex, SubgroupRecord};
use crate::groups::{GroupElement, GroupOracle};
use crate::half::HalfInt;

use super::{
    diameter_of, orbit_pair_diameter, set_max, CertFile, Certificate, StepFile, TraceFile,
};

#[derive(Clone, Debug)]
pub struct VerifyFailure {
    pub step: Option<usize>,
    pub check: String,
    pub detail: String,
}

#[derive(Clone, Debug)]
pub struct VerifyReport {
    pub pass: bool,
    pub steps_checked: usize,
    pub failure: Option<VerifyFailure>,
}

struct Fail(Option<usize>, String, String);

fn fail<T>(step: Option<usize>, check: &str, detail: impl Into<String>) -> Result<T, Fail> {
    Err(Fail(step, check.to_string(), detail.into()))
}

/// Re-checks a trace from scratch. Always returns a report; any load or
/// check problem is a verification failure, never a panic.
pub fn verify_trace(file: &TraceFile) -> VerifyReport {
    match run(file) {
        Ok(steps_checked) => VerifyReport {
            pass: true,
            steps_checked,
            failure: None,
        },
        Err(Fail(step, check, detail)) => VerifyReport {
            pass: false,
            steps_checked: 0,
            failure: Some(VerifyFailure {
                step,
                check,
                detail,
            }),
        },
    }
}

fn run(file: &TraceFile) -> Result<usize, Fail> {
    let o = GroupOracle::load(file.config.group.clone())
        .map_err(|e| Fail(None, "load_group".to_string(), e.to_string()))?;
    let parse = |w: &str| -> Result<GroupElement, Fail> {
        o.parse_word(w)
            .map_err(|e| Fail(None, "load_words".to_string(), e.to_string()))
    };
    let parse_vec = |ws: &[String]| -> Result<Vec<GroupElement>, Fail> {
        let mut out = Vec::with_capacity(ws.len());
        for w in ws {
            out.push(parse(w)?);
        }
        Ok(out)
    };

    let d = file.config.d;
    let t = file.config.delta_x2;
    let w_radius = file.config.working_radius;
    let q = (d / 4) as i64;
    if t < 0 {
        return fail(None, "config_arithmetic", "delta is negative");
    }

    let subgroup_elements = parse_vec(&file.config.subgroup)?;
    let h = SubgroupRecord::from_elements(&o, subgroup_elements)
        .map_err(|e| Fail(None, "config_subgroup".to_string(), e.to_string()))?;

    if (2 * d as i64) < 32 * t + 40 {
        return fail(
            None,
            "config_arithmetic",
            format!("d = {d} below 32δ+20 for 2δ = {t}"),
        );
    }
    if !(2 * q > 8 * t + 8 && 2 * q >= 4 * t + 2 && 2 * q >= 2 * t) {
        return fail(None, "config_arithmetic", "derived floor(d/4) facts fail");
    }

    let x0 = parse(&file.config.base_vertex)?;
    let x0_orbit = orbit_of(&o, &h, &x0);
    let x0_diam = diameter_of(&o, &x0_orbit) as i64;
    if 2 * x0_diam > 8 * t + 8 {
        return fail(
            None,
            "config_base",
            format!("d(Hx0) = {x0_diam} exceeds 8δ+4"),
        );
    }

    // Structure: moves then one final cone.
    if file.steps.is_empty() {
        return fail(None, "empty_trace", "trace has no steps");
    }
    for (i, s) in file.steps.iter().enumerate() {
        match s.kind.as_str() {
            "move" | "cone" => {}
            other => return fail(Some(i), "bad_kind", format!("unknown step kind `{other}`")),
        }
        if s.kind == "cone" && i + 1 != file.steps.len() {
            return fail(Some(i), "cone_is_last", "cone step before the end");
        }
    }
    if file.steps.last().unwrap().kind != "cone" {
        return fail(
            Some(file.steps.len() - 1),
            "ends_in_cone",
            "final step is not a cone",
        );
    }

    // Initial set.
    let initial = {
        let mut v = parse_vec(&file.initial)?;
        v.sort();
        v.dedup();
        v
    };
    if initial.binary_search(&x0).is_err() {
        return fail(None, "initial_base_in_k", "x0 missing from initial set");
    }
    check_invariant(&o, &h, &initial, None, "initial_invariant")?;
    for v in &initial {
        let orbit = orbit_of(&o, &h, v);
        let diam = diameter_of(&o, &orbit);
        if diam > d {
            return fail(
                None,
                "initial_in_f",
                format!("{} has orbit diameter {diam} > d", o.render(v)),
            );
        }
    }
    check_radius(&o, &initial, w_radius, None)?;

    let mut expected = initial;
    for (i, step) in file.steps.iter().enumerate() {
        let si = Some(i);
        let domain = {
            let mut v = parse_vec(&step.domain)?;
            v.sort();
            v.dedup();
            v
        };
        if domain != expected {
            return fail(si, "chain", "domain differs from the previous image");
        }
        check_radius(&o, &domain, w_radius, si)?;

        let dist_x0 = |v: &GroupElement| o.difference(&x0, v).len() as u32;
        let m = domain.iter().map(&dist_x0).max().unwrap();

        if step.kind == "cone" {
            verify_cone(&o, &h, step, &domain, &x0, d, m, i)?;
            let terminal = {
                let mut v = parse_vec(&file.terminal)?;
                v.sort();
                v.dedup();
                v
            };
            if terminal != domain {
                return fail(si, "terminal", "terminal set differs from the cone domain");
            }
            return Ok(file.steps.len());
        }

        expected = verify_move(&o, &h, step, &domain, &x0, d, t, q, m, w_radius, i)?;
    }
    unreachable!("the structural pass guarantees a final cone step");
}

fn check_radius(
    o: &GroupOracle,
    set: &[GroupElement],
    w_radius: u32,
    step: Option<usize>,
) -> Result<(), Fail> {
    for v in set {
        if v.len() as u32 > w_radius {
            return fail(
                step,
                "radius",
                format!("{} escapes the working radius {w_radius}", o.render(v)),
            );
        }
    }
    Ok(())
}

fn check_invariant(
    o: &GroupOracle,
    h: &SubgroupRecord,
    set: &[GroupElement],
    step: Option<usize>,
    name: &str,
) -> Result<(), Fail> {
    for g in h.elements() {
        let mut image: Vec<GroupElement> = set.iter().map(|v| o.mul_unchecked(g, v)).collect();
        image.sort();
        if image != set {
            return fail(
                step,
                name,
                format!("set is not invariant under {}", o.render(g)),
            );
        }
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn verify_cone(
    o: &GroupOracle,
    h: &SubgroupRecord,
    step: &StepFile,
    domain: &[GroupElement],
    _x0: &GroupElement,
    d: u32,
    m: u32,
    i: usize,
) -> Result<(), Fail> {
    let si = Some(i);
    if 2 * m as i64 > d as i64 {
        return fail(
            si,
            "cone_within_half_d",
            format!("max distance to x0 is {m} > d/2"),
        );
    }
    let diam = diameter_of(o, domain);
    if diam > d {
        return fail(si, "cone_pairwise", format!("diameter {diam} > d"));
    }
    check_invariant(o, h, domain, si, "cone_invariant")?;

    // The stored map must be the identity on the domain.
    let map = parse_map(o, step, i)?;
    if map.len() != domain.len()
        || !domain.iter().all(|v| map.get(v) == Some(v))
    {
        return fail(si, "map_form", "cone map is not the identity on the domain");
    }

    let recomputed = vec![
        Certificate {
            name: "cone_within_half_d".into(),
            lhs_x2: 2 * m as i64,
            rhs_x2: d as i64,
            strict: false,
            pass: true,
            witness: None,
        },
        Certificate {
            name: "cone_pairwise".into(),
            lhs_x2: 2 * diam as i64,
            rhs_x2: 2 * d as i64,
            strict: false,
            pass: true,
            witness: None,
        },
        Certificate {
            name: "cone_invariant".into(),
            lhs_x2: 0,
            rhs_x2: 0,
            strict: false,
            pass: true,
            witness: None,
        },
    ];
    certificate_echo(&recomputed, &step.certificates, i)
}

#[allow(clippy::too_many_arguments)]
fn verify_move(
    o: &GroupOracle,
    h: &SubgroupRecord,
    step: &StepFile,
    domain: &[GroupElement],
    x0: &GroupElement,
    d: u32,
    t: i64,
    q: i64,
    m: u32,
    w_radius: u32,
    i: usize,
) -> Result<Vec<GroupElement>, Fail> {
    let si = Some(i);
    if 2 * m as i64 <= d as i64 {
        return fail(si, "move_case", "move step although max distance ≤ d/2");
    }

    let dist_x0 = |v: &GroupElement| o.difference(x0, v).len() as u32;
    let expected_y0 = domain
        .iter()
        .find(|v| dist_x0(v) == m)
        .expect("maximum realized")
        .clone();
    let y0 = match &step.y0 {
        Some(w) => o
            .parse_word(w)
            .map_err(|e| Fail(si, "load_words".into(), e.to_string()))?,
        None => return fail(si, "furthest_choice", "move step without y0"),
    };
    if y0 != expected_y0 {
        return fail(
            si,
            "furthest_choice",
            format!(
                "y0 = {} is not the shortlex-least furthest vertex {}",
                o.render(&y0),
                o.render(&expected_y0)
            ),
        );
    }

    let y0_prime = match &step.y0_prime {
        Some(w) => o
            .parse_word(w)
            .map_err(|e| Fail(si, "load_words".into(), e.to_string()))?,
        None => return fail(si, "target_placement", "move step without y0'"),
    };
    let to_x0 = dist_x0(&y0_prime) as i64;
    let to_y0 = o.difference(&y0_prime, &y0).len() as i64;
    if to_x0 != m as i64 - q || to_x0 + to_y0 != m as i64 {
        return fail(
            si,
            "target_placement",
            format!(
                "d(x0,y0') = {to_x0}, d(y0',y0) = {to_y0}, need {} and geodesic sum {m}",
                m as i64 - q
            ),
        );
    }
    check_radius(o, std::slice::from_ref(&y0_prime), w_radius, si)?;

    // Map form: total, equivariant, identity off the orbit.
    let orbit = orbit_of(o, h, &y0);
    let target_orbit = orbit_of(o, h, &y0_prime);
    check_radius(o, &target_orbit, w_radius, si)?;
    {
        let mut stored_orbit = Vec::new();
        for w in &step.moved_orbit {
            stored_orbit.push(
                o.parse_word(w)
                    .map_err(|e| Fail(si, "load_words".into(), e.to_string()))?,
            );
        }
        stored_orbit.sort();
        if stored_orbit != orbit {
            return fail(si, "map_form", "stored moved_orbit is not H·y0");
        }
    }
    let map = parse_map(o, step, i)?;
    let keys: Vec<GroupElement> = map.keys().cloned().collect();
    if keys != domain {
        return fail(si, "map_form", "vertex map is not total on the domain");
    }
    let y0_inv = o.inv_unchecked(&y0);
    for (from, to) in &map {
        if orbit.binary_search(from).is_ok() {
            // from = h·y0 for h = from·y0⁻¹; image must be h·y0'.
            let h_elt = o.mul_unchecked(from, &y0_inv);
            if !h.contains(&h_elt) {
                return fail(si, "map_form", "orbit member does not factor through H");
            }
            let want = o.mul_unchecked(&h_elt, &y0_prime);
            if *to != want {
                return fail(
                    si,
                    "map_form",
                    format!(
                        "image of {} is {}, expected {}",
                        o.render(from),
                        o.render(to),
                        o.render(&want)
                    ),
                );
            }
        } else if to != from {
            return fail(
                si,
                "map_form",
                format!("{} moved although not in H·y0", o.render(from)),
            );
        }
    }
    let f = |v: &GroupElement| -> GroupElement { map.get(v).cloned().unwrap() };

    let mut recomputed: Vec<Certificate> = Vec::new();

    // C1.
    let base_moved = orbit.binary_search(x0).is_ok();
    if base_moved {
        return fail(si, "c1_base_not_moved", "x0 lies in the moved orbit");
    }
    recomputed.push(Certificate {
        name: "c1_base_not_moved".into(),
        lhs_x2: 0,
        rhs_x2: 0,
        strict: false,
        pass: true,
        witness: None,
    });

    // C2 direct.
    let target_diam = diameter_of(o, &target_orbit);
    if target_diam > d {
        return fail(
            si,
            "c2_target_in_f",
            format!("d(Hy0') = {target_diam} > d"),
        );
    }
    recomputed.push(Certificate {
        name: "c2_target_in_f".into(),
        lhs_x2: 2 * target_diam as i64,
        rhs_x2: 2 * d as i64,
        strict: false,
        pass: true,
        witness: None,
    });

    // C2 subcase split.
    let source_diam = diameter_of(o, &orbit);
    if 2 * source_diam as i64 <= d as i64 {
        if step.case_b_vertex.is_some() {
            return fail(si, "c2_subcase_a", "case (b) vertex stored in subcase (a)");
        }
        recomputed.push(Certificate {
            name: "c2_subcase_a".into(),
            lhs_x2: 2 * source_diam as i64,
            rhs_x2: d as i64,
            strict: false,
            pass: true,
            witness: None,
        });
    } else {
        let outcome = small_orbit_vertex(o, h, &y0, HalfInt::from_twice(t), Some(x0), w_radius)
            .map_err(|e| Fail(si, "c2b_small_orbit".into(), e.to_string()))?;
        let orbit_x = orbit_of(o, h, &outcome.x);
        let small = diameter_of(o, &orbit_x) as i64;
        if 2 * small > 8 * t + 8 {
            return fail(si, "c2b_small_orbit", format!("d(Hx) = {small} > 8δ+4"));
        }
        let b_to_y0 = set_max(o, &orbit_x, std::slice::from_ref(&y0)) as i64;
        if 2 * b_to_y0 > d as i64 + 2 * t + 2 {
            return fail(
                si,
                "c2b_orbit_to_y0",
                format!("d(Hx, y0) = {b_to_y0} > d/2 + 2δ + 1"),
            );
        }
        let hyp = set_max(o, &orbit, std::slice::from_ref(x0));
        if hyp != m {
            return fail(
                si,
                "c2b_hyp_furthest",
                format!("d(Hy0, x0) = {hyp} ≠ d(y0, x0) = {m}"),
            );
        }
        let b_to_x0 = set_max(o, &orbit_x, std::slice::from_ref(x0)) as i64;
        if b_to_x0 > m as i64 {
            return fail(
                si,
                "c2b_orbit_to_base",
                format!("d(Hx, x0) = {b_to_x0} > d(x0, y0) = {m}"),
            );
        }
        match &step.case_b_vertex {
            Some(w) => {
                let stored = o
                    .parse_word(w)
                    .map_err(|e| Fail(si, "load_words".into(), e.to_string()))?;
                if stored != outcome.x {
                    return fail(si, "c2b_vertex_echo", "stored case-b vertex differs");
                }
            }
            None => return fail(si, "c2b_vertex_echo", "case-b vertex missing"),
        }
        recomputed.push(Certificate {
            name: "c2b_small_orbit".into(),
            lhs_x2: 2 * small,
            rhs_x2: 8 * t + 8,
            strict: false,
            pass: true,
            witness: None,
        });
        recomputed.push(Certificate {
            name: "c2b_orbit_to_y0".into(),
            lhs_x2: 2 * b_to_y0,
            rhs_x2: d as i64 + 2 * t + 2,
            strict: false,
            pass: true,
            witness: None,
        });
        recomputed.push(Certificate {
            name: "c2b_hyp_furthest".into(),
            lhs_x2: 0,
            rhs_x2: 0,
            strict: false,
            pass: true,
            witness: None,
        });
        recomputed.push(Certificate {
            name: "c2b_orbit_to_base".into(),
            lhs_x2: 2 * b_to_x0,
            rhs_x2: 2 * m as i64,
            strict: false,
            pass: true,
            witness: None,
        });
    }

    // C3 on the stored map.
    let mut c3_worst = 0i64;
    for y in domain {
        for w in &orbit {
            if y == w || orbit_pair_diameter(o, h, y, w) > d {
                continue;
            }
            let image_dist = o.difference(&f(y), &f(w)).len() as i64;
            c3_worst = c3_worst.max(2 * image_dist);
            if image_dist > d as i64 {
                return fail(
                    si,
                    "c3_simplicial",
                    format!(
                        "edge {}-{} maps to distance {image_dist} > d",
                        o.render(y),
                        o.render(w)
                    ),
                );
            }
        }
    }
    recomputed.push(Certificate {
        name: "c3_simplicial".into(),
        lhs_x2: c3_worst,
        rhs_x2: 2 * d as i64,
        strict: false,
        pass: true,
        witness: None,
    });

    // C4 on the stored map.
    let mut c4_worst = 0i64;
    {
        let mut check_pair = |a: &GroupElement, b: &GroupElement| -> Result<(), Fail> {
            if a == b {
                return Ok(());
            }
            let diam = orbit_pair_diameter(o, h, a, b) as i64;
            c4_worst = c4_worst.max(2 * diam);
            if diam > d as i64 {
                return fail(
                    si,
                    "c4_carrier",
                    format!(
                        "pair {}-{} has orbit diameter {diam} > d",
                        o.render(a),
                        o.render(b)
                    ),
                );
            }
            Ok(())
        };
        for (a, u) in domain.iter().enumerate() {
            check_pair(u, &f(u))?;
            for v in &domain[a + 1..] {
                if orbit_pair_diameter(o, h, u, v) > d {
                    continue;
                }
                check_pair(u, &f(v))?;
                check_pair(v, &f(u))?;
                check_pair(&f(u), &f(v))?;
            }
        }
    }
    recomputed.push(Certificate {
        name: "c4_carrier".into(),
        lhs_x2: c4_worst,
        rhs_x2: 2 * d as i64,
        strict: false,
        pass: true,
        witness: None,
    });

    // C5 on the stored images of the moved orbit.
    let mut c5_worst = 0i64;
    for w in &orbit {
        let dist = o.difference(x0, &f(w)).len() as i64;
        c5_worst = c5_worst.max(2 * dist);
    }
    let c5_bound = 2 * (m as i64 - q) + 8 * t + 8;
    if c5_worst > c5_bound {
        return fail(
            si,
            "c5_progress_bound",
            format!("moved orbit distance {c5_worst}/2 exceeds bound {c5_bound}/2"),
        );
    }
    recomputed.push(Certificate {
        name: "c5_progress_bound".into(),
        lhs_x2: c5_worst,
        rhs_x2: c5_bound,
        strict: false,
        pass: true,
        witness: None,
    });
    if c5_worst >= 2 * m as i64 {
        return fail(
            si,
            "c5_progress_strict",
            "moved orbit is not strictly closer to x0",
        );
    }
    recomputed.push(Certificate {
        name: "c5_progress_strict".into(),
        lhs_x2: c5_worst,
        rhs_x2: 2 * m as i64,
        strict: true,
        pass: true,
        witness: None,
    });

    certificate_echo(&recomputed, &step.certificates, i)?;

    let mut image: Vec<GroupElement> = map.values().cloned().collect();
    image.sort();
    image.dedup();
    Ok(image)
}

fn parse_map(
    o: &GroupOracle,
    step: &StepFile,
    i: usize,
) -> Result<BTreeMap<GroupElement, GroupElement>, Fail> {
    let mut map = BTreeMap::new();
    for (from, to) in &step.vertex_map {
        let from = o
            .parse_word(from)
            .map_err(|e| Fail(Some(i), "load_words".into(), e.to_string()))?;
        let to = o
            .parse_word(to)
            .map_err(|e| Fail(Some(i), "load_words".into(), e.to_string()))?;
        if map.insert(from, to).is_some() {
            return fail(Some(i), "map_form", "duplicate vertex in the map");
        }
    }
    Ok(map)
}

/// Stored certificate records must agree with the re-derived values on
/// (name, lhs, rhs, strictness, verdict); witness strings are
/// presentation and not compared.
fn certificate_echo(
    recomputed: &[Certificate],
    stored: &[CertFile],
    i: usize,
) -> Result<(), Fail> {
    if stored.len() != recomputed.len() {
        return fail(
            Some(i),
            "certificate_echo",
            format!(
                "{} certificates stored, {} recomputed",
                stored.len(),
                recomputed.len()
            ),
        );
    }
    for (s, r) in stored.iter().zip(recomputed.iter()) {
        if s.name != r.name
            || s.lhs_x2 != r.lhs_x2
            || s.rhs_x2 != r.rhs_x2
            || s.strict != r.strict
            || s.pass != r.pass
        {
            return fail(
                Some(i),
                "certificate_echo",
                format!(
                    "stored `{}` ({}/2 vs {}/2, pass {}) disagrees with \
                     recomputed `{}` ({}/2 vs {}/2, pass {})",
                    s.name, s.lhs_x2, s.rhs_x2, s.pass, r.name, r.lhs_x2, r.rhs_x2, r.pass
                ),
            );
        }
    }
    Ok(())
}
