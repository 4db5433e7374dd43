//! Subcommand implementations. Every numeric in a report comes from a
//! core operation; the CLI only formats. Failures carry machine-readable
//! reasons and map onto the exit-code contract via the error classes.

use std::path::Path;
use std::time::Instant;

use serde_json::{json, Value};

use ripslab_core::cayley::{ball_dot, ball_table, build_ball, Ball};
use ripslab_core::complex::{
    greedy_collapse, reduced_homology, rips_complex, ExplicitComplex, HomologyProfile,
};
use ripslab_core::contraction::{
    contract, initial_set, sample_f_vertices, verify_trace, ContractionConfig, TraceFile,
};
use ripslab_core::equivariant::{
    conjugacy_classes, enumerate_finite_subgroups, fixed_point_complex, invariant_simplex_poset,
    rips_theorem_checks, subgroup_closure, subgroup_window_radius, ClosureGuards,
    RipsCheckParams, SubgroupEnumGuards, SubgroupRecord,
};
use ripslab_core::error::ErrorClass;
use ripslab_core::groups::{GroupOracle, GroupSpec};
use ripslab_core::hyperbolicity::{delta_of_ball, DeltaBudget};
use ripslab_core::HalfInt;

use crate::io::{out_dir, write_artifact, write_report, write_timing, Manifest};
use crate::{Command, CommonArgs, DeltaArgs, GroupArg};

pub struct Failure {
    pub code: i32,
    pub value: Value,
    pub human: String,
}

type CmdResult = Result<(), Failure>;

fn class_code(class: ErrorClass) -> i32 {
    match class {
        ErrorClass::Validation => 1,
        ErrorClass::Certificate => 2,
        ErrorClass::Resource => 3,
    }
}

fn fail(code: i32, value: Value, human: impl Into<String>) -> Failure {
    Failure {
        code,
        value,
        human: human.into(),
    }
}

fn fail_str(code: i32, reason: impl Into<String>) -> Failure {
    let reason = reason.into();
    fail(code, json!({ "error": { "reason": reason } }), reason)
}

fn from_group_error(e: ripslab_core::error::GroupError) -> Failure {
    let code = class_code(e.class());
    let value = match &e {
        ripslab_core::error::GroupError::Spec { field, reason } => {
            json!({ "error": { "field": field, "reason": reason } })
        }
        other => json!({ "error": { "reason": other.to_string() } }),
    };
    fail(code, value, e.to_string())
}

fn load_group(path: &Path) -> Result<(GroupOracle, Vec<u8>), Failure> {
    let bytes = std::fs::read(path).map_err(|e| {
        fail_str(1, format!("cannot read group spec {}: {e}", path.display()))
    })?;
    let text = String::from_utf8(bytes.clone())
        .map_err(|_| fail_str(1, "group spec is not UTF-8"))?;
    let spec = GroupSpec::from_json_str(&text).map_err(from_group_error)?;
    let oracle = GroupOracle::load(spec).map_err(from_group_error)?;
    Ok((oracle, bytes))
}

fn parse_margin(text: &str) -> Result<HalfInt, Failure> {
    let text = text.trim();
    if let Some((num, den)) = text.split_once('/') {
        if den.trim() != "2" {
            return Err(fail_str(1, "delta margin denominator must be 2"));
        }
        let n: i64 = num
            .trim()
            .parse()
            .map_err(|_| fail_str(1, format!("bad delta margin `{text}`")))?;
        Ok(HalfInt::from_twice(n))
    } else {
        let n: i64 = text
            .parse()
            .map_err(|_| fail_str(1, format!("bad delta margin `{text}`")))?;
        Ok(HalfInt::from_int(n))
    }
}

fn parse_subgroup(
    o: &GroupOracle,
    words: &str,
    guards: &ClosureGuards,
) -> Result<SubgroupRecord, Failure> {
    let mut gens = Vec::new();
    for w in words.split(',') {
        let w = w.trim();
        if w.is_empty() {
            continue;
        }
        gens.push(o.parse_word(w).map_err(from_group_error)?);
    }
    if gens.is_empty() {
        return Ok(SubgroupRecord::trivial());
    }
    subgroup_closure(o, &gens, guards).map_err(from_equivariant)
}

fn from_metric(e: ripslab_core::error::MetricError) -> Failure {
    fail_str(class_code(e.class()), e.to_string())
}

fn from_equivariant(e: ripslab_core::error::EquivariantError) -> Failure {
    fail_str(class_code(e.class()), e.to_string())
}

fn from_complex(e: ripslab_core::error::ComplexError) -> Failure {
    fail_str(class_code(e.class()), e.to_string())
}

fn half_json(h: HalfInt) -> Value {
    json!({ "numerator": h.twice(), "denominator": 2 })
}

fn measure_delta(
    o: &GroupOracle,
    args: &DeltaArgs,
    guard_vertices: usize,
) -> Result<(HalfInt, HalfInt, Ball), Failure> {
    let ball = build_ball(o, args.delta_radius, guard_vertices).map_err(from_metric)?;
    let report = delta_of_ball(o, &ball, &DeltaBudget::default());
    let margin = parse_margin(&args.delta_margin)?;
    let used = HalfInt::from_twice(report.delta.twice() + margin.twice());
    Ok((report.delta, used, ball))
}

fn homology_json(profile: &HomologyProfile) -> Value {
    json!({
        "reduced": profile.reduced,
        "dims": profile
            .groups
            .iter()
            .enumerate()
            .map(|(dim, g)| json!({ "dim": dim, "betti": g.betti, "torsion": g.torsion }))
            .collect::<Vec<_>>(),
        "trivial": profile.is_trivial(),
    })
}

fn subgroup_json(o: &GroupOracle, s: &SubgroupRecord) -> Value {
    json!({
        "order": s.order(),
        "max_word_length": s.max_word_length(),
        "elements": s.elements().iter().map(|g| o.render(g)).collect::<Vec<_>>(),
    })
}

pub fn run(command: Command) -> i32 {
    let result = match command {
        Command::Validate { group, common } => cmd_validate(&group, &common),
        Command::Ball {
            group,
            radius,
            guard_vertices,
            format,
            common,
        } => cmd_ball(&group, radius, guard_vertices, format.as_deref(), &common),
        Command::Delta {
            group,
            radius,
            guard_vertices,
            budget,
            common,
        } => cmd_delta(&group, radius, guard_vertices, budget, &common),
        Command::Rips {
            group,
            radius,
            d,
            max_dim,
            guard_vertices,
            format,
            common,
        } => cmd_rips(&group, radius, d, max_dim, guard_vertices, format.as_deref(), &common),
        Command::Homology { faces, common } => cmd_homology(&faces, &common),
        Command::Subgroups {
            group,
            delta,
            common,
        } => cmd_subgroups(&group, &delta, &common),
        Command::Classes {
            group,
            delta,
            conjugator_radius,
            common,
        } => cmd_classes(&group, &delta, conjugator_radius, &common),
        Command::FixedPoints {
            group,
            subgroup,
            d,
            radius,
            guard_vertices,
            format,
            common,
        } => cmd_fixed_points(
            &group,
            &subgroup,
            d,
            radius,
            guard_vertices,
            format.as_deref(),
            &common,
        ),
        Command::Contract {
            group,
            d,
            subgroup,
            seed,
            seed_count,
            radius,
            guard_steps,
            delta,
            unsafe_d,
            common,
        } => cmd_contract(
            &group,
            d,
            &subgroup,
            seed,
            seed_count,
            radius,
            guard_steps,
            &delta,
            unsafe_d,
            &common,
        ),
        Command::Verify { trace, common } => cmd_verify(&trace, &common),
        Command::CheckRipsTheorem {
            group,
            d,
            radius,
            seed,
            guard_vertices,
            delta,
            common,
        } => cmd_check_rips(&group, d, radius, seed, guard_vertices, &delta, &common),
        Command::Export {
            group,
            what,
            format,
            radius,
            d,
            subgroup,
            max_dim,
            guard_vertices,
            common,
        } => cmd_export(
            &group,
            &what,
            &format,
            radius,
            d,
            &subgroup,
            max_dim,
            guard_vertices,
            &common,
        ),
    };
    match result {
        Ok(()) => 0,
        Err(failure) => {
            println!(
                "{}",
                serde_json::to_string_pretty(&failure.value).unwrap_or_default()
            );
            eprintln!("error: {}", failure.human);
            failure.code
        }
    }
}

fn cmd_validate(group: &GroupArg, common: &CommonArgs) -> CmdResult {
    let (o, bytes) = load_group(&group.group)?;
    let dir = out_dir(&common.out);
    let manifest = Manifest::new("validate", &bytes);
    let gens = o.generators();
    let involution: Vec<Value> = gens
        .iter()
        .map(|g| json!([gens.label(g), gens.label(gens.inverse_of(g))]))
        .collect();
    let report = json!({
        "manifest": manifest.to_value(),
        "ok": true,
        "spec": o.spec().to_json(),
        "generators": gens.labels(),
        "involution": involution,
    });
    write_report(&dir, "validate.json", &report).map_err(|e| fail_str(1, e.to_string()))?;
    Ok(())
}

fn cmd_ball(
    group: &GroupArg,
    radius: u32,
    guard_vertices: usize,
    format: Option<&str>,
    common: &CommonArgs,
) -> CmdResult {
    let start = Instant::now();
    let (o, bytes) = load_group(&group.group)?;
    let ball = build_ball(&o, radius, guard_vertices).map_err(from_metric)?;
    let dir = out_dir(&common.out);
    let manifest = Manifest::new("ball", &bytes)
        .param("radius", radius)
        .param("guard_vertices", guard_vertices);
    let report = json!({
        "manifest": manifest.to_value(),
        "table": ball_table(&o, &ball),
    });
    write_report(&dir, "ball.json", &report).map_err(|e| fail_str(1, e.to_string()))?;
    if format == Some("dot") {
        write_artifact(&dir, "ball.dot", &ball_dot(&o, &ball))
            .map_err(|e| fail_str(1, e.to_string()))?;
    }
    write_timing(&dir, "ball", start.elapsed()).map_err(|e| fail_str(1, e.to_string()))?;
    Ok(())
}

fn cmd_delta(
    group: &GroupArg,
    radius: u32,
    guard_vertices: usize,
    budget: Option<u64>,
    common: &CommonArgs,
) -> CmdResult {
    let start = Instant::now();
    let (o, bytes) = load_group(&group.group)?;
    let ball = build_ball(&o, radius, guard_vertices).map_err(from_metric)?;
    let report = delta_of_ball(
        &o,
        &ball,
        &DeltaBudget {
            max_quadruples: budget,
        },
    );
    let dir = out_dir(&common.out);
    let manifest = Manifest::new("delta", &bytes)
        .param("radius", radius)
        .param("guard_vertices", guard_vertices)
        .param("budget", budget.map(Value::from).unwrap_or(Value::Null));
    let witness: Value = match &report.witness {
        Some(w) => json!(w.iter().map(|v| o.render(v)).collect::<Vec<_>>()),
        None => Value::Null,
    };
    let value = json!({
        "manifest": manifest.to_value(),
        "delta_numerator": report.delta.twice(),
        "denominator": 2,
        "witness": witness,
        "radius": report.ball_radius,
        "exhaustive": report.exhaustive,
        "quadruples": report.quadruples_examined,
    });
    write_report(&dir, "delta.json", &value).map_err(|e| fail_str(1, e.to_string()))?;
    write_timing(&dir, "delta", start.elapsed()).map_err(|e| fail_str(1, e.to_string()))?;
    Ok(())
}

fn cmd_rips(
    group: &GroupArg,
    radius: u32,
    d: u32,
    max_dim: usize,
    guard_vertices: usize,
    format: Option<&str>,
    common: &CommonArgs,
) -> CmdResult {
    let start = Instant::now();
    let (o, bytes) = load_group(&group.group)?;
    let ball = build_ball(&o, radius, guard_vertices).map_err(from_metric)?;
    let fc = rips_complex(&o, &ball, d);
    let dir = out_dir(&common.out);
    let manifest = Manifest::new("rips", &bytes)
        .param("radius", radius)
        .param("d", d)
        .param("max_dim", max_dim as u64)
        .param("guard_vertices", guard_vertices);
    let mut counts: Option<Vec<usize>> = None;
    if format == Some("faces") {
        let ec = fc.to_explicit(max_dim, 2_000_000).map_err(from_complex)?;
        counts = Some(ec.counts_by_dim());
        write_artifact(&dir, "rips.faces", &ec.faces_text())
            .map_err(|e| fail_str(1, e.to_string()))?;
    }
    if format == Some("dot") {
        write_artifact(&dir, "rips.dot", &fc.dot()).map_err(|e| fail_str(1, e.to_string()))?;
    }
    let report = json!({
        "manifest": manifest.to_value(),
        "d": d,
        "vertex_count": fc.vertex_count(),
        "edge_count": fc.edge_count(),
        "counts_by_dim": counts,
        "boundary_note": if radius < d {
            Value::from("ball radius below d: boundary effects apply")
        } else {
            Value::Null
        },
    });
    write_report(&dir, "rips.json", &report).map_err(|e| fail_str(1, e.to_string()))?;
    write_timing(&dir, "rips", start.elapsed()).map_err(|e| fail_str(1, e.to_string()))?;
    Ok(())
}

fn cmd_homology(faces: &Path, common: &CommonArgs) -> CmdResult {
    let start = Instant::now();
    let bytes = std::fs::read(faces)
        .map_err(|e| fail_str(1, format!("cannot read faces file: {e}")))?;
    let text = String::from_utf8(bytes.clone())
        .map_err(|_| fail_str(1, "faces file is not UTF-8"))?;
    let ec = ExplicitComplex::parse_faces(&text, 2_000_000).map_err(from_complex)?;
    let profile = reduced_homology(&ec, 8_000_000).map_err(from_complex)?;
    let dir = out_dir(&common.out);
    let manifest = Manifest::new("homology", &bytes);
    let report = json!({
        "manifest": manifest.to_value(),
        "simplices": ec.simplex_count(),
        "euler_characteristic": ec.euler_characteristic(),
        "connected": ec.is_connected(),
        "homology": homology_json(&profile),
    });
    write_report(&dir, "homology.json", &report).map_err(|e| fail_str(1, e.to_string()))?;
    write_timing(&dir, "homology", start.elapsed()).map_err(|e| fail_str(1, e.to_string()))?;
    Ok(())
}

fn cmd_subgroups(group: &GroupArg, delta: &DeltaArgs, common: &CommonArgs) -> CmdResult {
    let start = Instant::now();
    let (o, bytes) = load_group(&group.group)?;
    let (measured, used, _) = measure_delta(&o, delta, 200_000)?;
    let subs = enumerate_finite_subgroups(&o, used, &SubgroupEnumGuards::default())
        .map_err(from_equivariant)?;
    let dir = out_dir(&common.out);
    let manifest = Manifest::new("subgroups", &bytes)
        .param("delta_radius", delta.delta_radius)
        .param("delta_margin", delta.delta_margin.clone())
        .param("delta_used_x2", used.twice());
    let report = json!({
        "manifest": manifest.to_value(),
        "delta_measured": half_json(measured),
        "delta_used": half_json(used),
        "window_radius": subgroup_window_radius(used),
        "subgroups": subs.iter().map(|s| subgroup_json(&o, s)).collect::<Vec<_>>(),
    });
    write_report(&dir, "subgroups.json", &report).map_err(|e| fail_str(1, e.to_string()))?;
    write_timing(&dir, "subgroups", start.elapsed()).map_err(|e| fail_str(1, e.to_string()))?;
    Ok(())
}

fn cmd_classes(
    group: &GroupArg,
    delta: &DeltaArgs,
    conjugator_radius: u32,
    common: &CommonArgs,
) -> CmdResult {
    let start = Instant::now();
    let (o, bytes) = load_group(&group.group)?;
    let (measured, used, _) = measure_delta(&o, delta, 200_000)?;
    let subs = enumerate_finite_subgroups(&o, used, &SubgroupEnumGuards::default())
        .map_err(from_equivariant)?;
    let classes = conjugacy_classes(&o, &subs, conjugator_radius, 200_000)
        .map_err(from_equivariant)?;
    let dir = out_dir(&common.out);
    let manifest = Manifest::new("classes", &bytes)
        .param("delta_radius", delta.delta_radius)
        .param("delta_margin", delta.delta_margin.clone())
        .param("delta_used_x2", used.twice())
        .param("conjugator_radius", conjugator_radius);
    let class_values: Vec<Value> = classes
        .classes
        .iter()
        .enumerate()
        .map(|(id, c)| {
            json!({
                "class_id": id,
                "representative": subgroup_json(&o, &subs[c.representative]),
                "members": c.members,
                "size": c.members.len(),
            })
        })
        .collect();
    let report = json!({
        "manifest": manifest.to_value(),
        "delta_measured": half_json(measured),
        "delta_used": half_json(used),
        "conjugator_radius": classes.conjugator_radius,
        "subgroups": subs.iter().map(|s| subgroup_json(&o, s)).collect::<Vec<_>>(),
        "classes": class_values,
        "nontrivial_classes": classes.nontrivial_count(&subs),
    });
    write_report(&dir, "classes.json", &report).map_err(|e| fail_str(1, e.to_string()))?;
    write_timing(&dir, "classes", start.elapsed()).map_err(|e| fail_str(1, e.to_string()))?;
    Ok(())
}

fn cmd_fixed_points(
    group: &GroupArg,
    subgroup: &str,
    d: u32,
    radius: u32,
    guard_vertices: usize,
    format: Option<&str>,
    common: &CommonArgs,
) -> CmdResult {
    let start = Instant::now();
    let (o, bytes) = load_group(&group.group)?;
    let guards = ClosureGuards {
        max_order: 10_000,
        max_word_length: radius,
    };
    let h = parse_subgroup(&o, subgroup, &guards)?;
    let ball = build_ball(&o, radius, guard_vertices).map_err(from_metric)?;
    let poset = invariant_simplex_poset(&o, &h, &ball, d, 200_000).map_err(from_equivariant)?;
    let model = fixed_point_complex(&o, &poset, 2_000_000).map_err(from_equivariant)?;
    let profile = reduced_homology(&model.complex, 8_000_000).map_err(from_complex)?;
    let collapse = greedy_collapse(&model.complex);
    let dir = out_dir(&common.out);
    let manifest = Manifest::new("fixed-points", &bytes)
        .param("subgroup", subgroup)
        .param("d", d)
        .param("radius", radius)
        .param("guard_vertices", guard_vertices);
    let report = json!({
        "manifest": manifest.to_value(),
        "subgroup": subgroup_json(&o, &h),
        "d": d,
        "poset_size": model.poset_size,
        "core_size": model.core_size,
        "beat_points_removed": model.beat_points_removed,
        "nonempty": !poset.is_empty(),
        "connected": poset.is_connected(),
        "model_simplices": model.complex.simplex_count(),
        "homology": homology_json(&profile),
        "collapsed_to_point": collapse.collapsed_to_point,
    });
    write_report(&dir, "fixedpoints.json", &report).map_err(|e| fail_str(1, e.to_string()))?;
    if format == Some("faces") {
        write_artifact(&dir, "fixedpoints.faces", &model.complex.faces_text())
            .map_err(|e| fail_str(1, e.to_string()))?;
    }
    write_timing(&dir, "fixed-points", start.elapsed())
        .map_err(|e| fail_str(1, e.to_string()))?;
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_contract(
    group: &GroupArg,
    d: u32,
    subgroup: &str,
    seed: u64,
    seed_count: usize,
    radius: u32,
    guard_steps: Option<usize>,
    delta: &DeltaArgs,
    unsafe_d: bool,
    common: &CommonArgs,
) -> CmdResult {
    let start = Instant::now();
    let (o, bytes) = load_group(&group.group)?;
    let (measured, used, _) = measure_delta(&o, delta, 200_000)?;
    let guards = ClosureGuards {
        max_order: 10_000,
        max_word_length: radius,
    };
    let h = parse_subgroup(&o, subgroup, &guards)?;
    let cfg = if unsafe_d {
        ContractionConfig::with_unchecked_threshold(&o, d, used, h.clone(), radius)
    } else {
        ContractionConfig::new(&o, d, used, h.clone(), radius)
    }
    .map_err(|e| fail_str(class_code(e.class()), e.to_string()))?;

    let sample_len = (radius / 2).max(1);
    let seeds = sample_f_vertices(&o, &h, d, sample_len, seed_count, seed);
    let k0 = initial_set(&o, &h, &seeds, &cfg.base_vertex);
    let max_dist = k0
        .iter()
        .map(|v| v.len())
        .max()
        .unwrap_or(0);
    let step_guard = guard_steps.unwrap_or(k0.len() * (max_dist + 1) + 8);

    let dir = out_dir(&common.out);
    let manifest = Manifest::new("contract", &bytes)
        .param("d", d)
        .param("subgroup", subgroup)
        .param("seed", seed)
        .param("seed_count", seed_count as u64)
        .param("radius", radius)
        .param("delta_radius", delta.delta_radius)
        .param("delta_margin", delta.delta_margin.clone())
        .param("delta_used_x2", used.twice())
        .param("guard_steps", step_guard as u64)
        .param("unsafe_d", unsafe_d);

    match contract(&o, &cfg, &k0, step_guard) {
        Ok(trace) => {
            let file = trace.to_file(&o);
            write_artifact(
                &dir,
                "trace.json",
                &format!("{}\n", serde_json::to_string_pretty(&file).unwrap()),
            )
            .map_err(|e| fail_str(1, e.to_string()))?;
            let verify = verify_trace(&file);
            let moves = file.steps.iter().filter(|s| s.kind == "move").count();
            let report = json!({
                "manifest": manifest.to_value(),
                "delta_measured": half_json(measured),
                "delta_used": half_json(used),
                "unsafe_d": unsafe_d,
                "initial_size": file.initial.len(),
                "steps": file.steps.len(),
                "moves": moves,
                "terminal_size": file.terminal.len(),
                "verify": {
                    "pass": verify.pass,
                    "steps_checked": verify.steps_checked,
                    "failure": verify.failure.as_ref().map(|f| json!({
                        "step": f.step,
                        "check": f.check,
                        "detail": f.detail,
                    })),
                },
            });
            write_report(&dir, "contract.json", &report)
                .map_err(|e| fail_str(1, e.to_string()))?;
            write_timing(&dir, "contract", start.elapsed())
                .map_err(|e| fail_str(1, e.to_string()))?;
            if !verify.pass {
                return Err(fail_str(2, "trace failed independent verification"));
            }
            Ok(())
        }
        Err(failure) => {
            // Emit the partial trace for diagnosis, then fail with the
            // engine error's class.
            let partial = json!({
                "config": serde_json::to_value(&failure.partial.config).unwrap(),
                "initial": failure
                    .partial
                    .initial
                    .iter()
                    .map(|v| o.render(v))
                    .collect::<Vec<_>>(),
                "steps_completed": failure.partial.steps.len(),
                "error": failure.error.to_string(),
            });
            let _ = write_artifact(
                &dir,
                "partial_trace.json",
                &format!("{}\n", serde_json::to_string_pretty(&partial).unwrap()),
            );
            Err(fail_str(
                class_code(failure.error.class()),
                failure.error.to_string(),
            ))
        }
    }
}

fn cmd_verify(trace: &Path, common: &CommonArgs) -> CmdResult {
    let start = Instant::now();
    let bytes = std::fs::read(trace)
        .map_err(|e| fail_str(1, format!("cannot read trace file: {e}")))?;
    let file: TraceFile = serde_json::from_slice(&bytes)
        .map_err(|e| fail_str(1, format!("trace file is not valid JSON: {e}")))?;
    let report = verify_trace(&file);
    let dir = out_dir(&common.out);
    let manifest = Manifest::new("verify", &bytes);
    let value = json!({
        "manifest": manifest.to_value(),
        "pass": report.pass,
        "steps_checked": report.steps_checked,
        "failure": report.failure.as_ref().map(|f| json!({
            "step": f.step,
            "check": f.check,
            "detail": f.detail,
        })),
    });
    write_report(&dir, "verify.json", &value).map_err(|e| fail_str(1, e.to_string()))?;
    write_timing(&dir, "verify", start.elapsed()).map_err(|e| fail_str(1, e.to_string()))?;
    if report.pass {
        Ok(())
    } else {
        let f = report.failure.unwrap();
        Err(fail_str(
            2,
            format!("verification failed at `{}`: {}", f.check, f.detail),
        ))
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_check_rips(
    group: &GroupArg,
    d: u32,
    radius: u32,
    seed: u64,
    guard_vertices: usize,
    delta: &DeltaArgs,
    common: &CommonArgs,
) -> CmdResult {
    let start = Instant::now();
    let (o, bytes) = load_group(&group.group)?;
    let (measured, used, _) = measure_delta(&o, delta, guard_vertices)?;
    let ball = build_ball(&o, radius, guard_vertices).map_err(from_metric)?;
    let params = RipsCheckParams {
        seed,
        ..RipsCheckParams::default()
    };
    let report = rips_theorem_checks(&o, &ball, d, used, &params).map_err(from_equivariant)?;
    let pass = report.star.violations == 0
        && (report.torsion_found || report.action_free_on_samples);
    let dir = out_dir(&common.out);
    let manifest = Manifest::new("check-rips-theorem", &bytes)
        .param("d", d)
        .param("radius", radius)
        .param("seed", seed)
        .param("delta_radius", delta.delta_radius)
        .param("delta_margin", delta.delta_margin.clone())
        .param("delta_used_x2", used.twice());
    let value = json!({
        "manifest": manifest.to_value(),
        "d": d,
        "delta_measured": half_json(measured),
        "delta_used": half_json(used),
        "stabilizers": report
            .stabilizers
            .iter()
            .map(|s| json!({
                "simplex": s.simplex.iter().map(|v| o.render(v)).collect::<Vec<_>>(),
                "order": s.stabilizer.order(),
                "elements": s.stabilizer.elements().iter().map(|g| o.render(g)).collect::<Vec<_>>(),
            }))
            .collect::<Vec<_>>(),
        "star_disjointness": {
            "subcomplexes": report.star.subcomplexes,
            "pairs_checked": report.star.pairs_checked,
            "violations": report.star.violations,
            "escaped": report.star.escaped,
        },
        "orbit_representatives": {
            "max_simplex_size": report.orbit_reps.max_simplex_size,
            "count": report.orbit_reps.count,
        },
        "torsion_found": report.torsion_found,
        "action_free_on_samples": report.action_free_on_samples,
        "pass": pass,
    });
    write_report(&dir, "ripscheck.json", &value).map_err(|e| fail_str(1, e.to_string()))?;
    write_timing(&dir, "check-rips-theorem", start.elapsed())
        .map_err(|e| fail_str(1, e.to_string()))?;
    if pass {
        Ok(())
    } else {
        Err(fail_str(2, "a Rips-property check failed"))
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_export(
    group: &GroupArg,
    what: &str,
    format: &str,
    radius: u32,
    d: Option<u32>,
    subgroup: &str,
    max_dim: usize,
    guard_vertices: usize,
    common: &CommonArgs,
) -> CmdResult {
    let (o, _bytes) = load_group(&group.group)?;
    let dir = out_dir(&common.out);
    match (what, format) {
        ("ball", "dot") => {
            let ball = build_ball(&o, radius, guard_vertices).map_err(from_metric)?;
            write_artifact(&dir, "ball.dot", &ball_dot(&o, &ball))
                .map_err(|e| fail_str(1, e.to_string()))?;
        }
        ("ball", "json") => {
            let ball = build_ball(&o, radius, guard_vertices).map_err(from_metric)?;
            let value = ball_table(&o, &ball);
            write_report(&dir, "ball_table.json", &value)
                .map_err(|e| fail_str(1, e.to_string()))?;
        }
        ("rips", fmt @ ("dot" | "faces")) => {
            let d = d.ok_or_else(|| fail_str(1, "`--d` is required for rips export"))?;
            let ball = build_ball(&o, radius, guard_vertices).map_err(from_metric)?;
            let fc = rips_complex(&o, &ball, d);
            if fmt == "dot" {
                write_artifact(&dir, "rips.dot", &fc.dot())
                    .map_err(|e| fail_str(1, e.to_string()))?;
            } else {
                let ec = fc.to_explicit(max_dim, 2_000_000).map_err(from_complex)?;
                write_artifact(&dir, "rips.faces", &ec.faces_text())
                    .map_err(|e| fail_str(1, e.to_string()))?;
            }
        }
        ("fixed-points", "faces") => {
            let d = d.ok_or_else(|| fail_str(1, "`--d` is required for fixed-points export"))?;
            let guards = ClosureGuards {
                max_order: 10_000,
                max_word_length: radius,
            };
            let h = parse_subgroup(&o, subgroup, &guards)?;
            let ball = build_ball(&o, radius, guard_vertices).map_err(from_metric)?;
            let poset =
                invariant_simplex_poset(&o, &h, &ball, d, 200_000).map_err(from_equivariant)?;
            let model = fixed_point_complex(&o, &poset, 2_000_000).map_err(from_equivariant)?;
            write_artifact(&dir, "fixedpoints.faces", &model.complex.faces_text())
                .map_err(|e| fail_str(1, e.to_string()))?;
        }
        _ => {
            return Err(fail_str(
                1,
                format!("unsupported export pairing: {what} as {format}"),
            ));
        }
    }
    Ok(())
}
