//! The equivariant contraction engine: iteratively retract a finite
//! H-invariant vertex set K ⊆ F toward a base orbit until it spans an
//! H-invariant simplex, emitting a certificate trace that an independent
//! verifier can re-check from raw distances alone.
//!
//! A move step picks the furthest vertex y₀ from the base x₀ (shortlex
//! tie-break), slides its whole orbit ⌊d/4⌋ steps toward x₀ along a
//! deterministic geodesic, and certifies:
//!   C1 the base is not in the moved orbit;
//!   C2 the target orbit stays in F (d(Hy₀') ≤ d), with the subcase
//!      split — triangle route when d(Hy₀) ≤ d/2, otherwise the
//!      small-orbit route with its intermediate bounds — recorded as
//!      metadata on top of the direct check;
//!   C3 the vertex map is simplicial on F-edges into the moved orbit;
//!   C4 σ ∪ f(σ) spans a simplex of F, checked edgewise by flagness;
//!   C5 the moved orbit lands strictly closer to x₀, with the exact
//!      quantitative bound.
//! When every vertex is within d/2 of x₀ the set spans an H-invariant
//! simplex and the trace ends with a cone step. On any certificate
//! failure the engine aborts with the failing check and its numbers; it
//! never retries with different choices — a failure falsifies δ or a
//! precondition and is diagnostic, not recoverable.
//!
//! Two fine points. The map h·y₀ ↦ h·y₀' is well defined because left
//! multiplication acts freely on vertices (h·y₀ determines h), which
//! [`crate::equivariant::orbit_of`] asserts on every orbit. C5 certifies
//! the full chain d(f(hy₀), x₀) ≤ d(y₀,x₀) − ⌊d/4⌋ + 8δ + 4 < d(y₀,x₀);
//! the quantity is also < d whenever d(y₀,x₀) ≤ d, but the strict
//! comparison against d(y₀,x₀) is the one termination rests on, so that
//! is what C5 pins.

mod verify;

pub use verify::{verify_trace, VerifyReport};

use std::collections::BTreeMap;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cayley::geodesic;
use crate::equivariant::{orbit_of, orbit_union, small_orbit_vertex, SubgroupRecord};
use crate::error::{ContractionError, EquivariantError, MetricError};
use crate::groups::{GroupElement, GroupOracle, GroupSpec};
use crate::half::HalfInt;

/// Validated parameters for a contraction run. The working ball is kept
/// as an explicit radius guard: the metric layer is exact, so queries
/// need no materialized ball, but anything escaping the radius fails
/// loudly rather than silently truncating.
#[derive(Clone, Debug)]
pub struct ContractionConfig {
    pub d: u32,
    pub delta: HalfInt,
    pub subgroup: SubgroupRecord,
    pub base_vertex: GroupElement,
    pub working_radius: u32,
}

impl ContractionConfig {
    /// Validates d ≥ 32δ + 20, re-derives the arithmetic facts the
    /// contraction relies on, and computes the base vertex x₀ with its
    /// certified small orbit.
    pub fn new(
        o: &GroupOracle,
        d: u32,
        delta: HalfInt,
        subgroup: SubgroupRecord,
        working_radius: u32,
    ) -> Result<Self, ContractionError> {
        let t = delta.twice();
        if t < 0 {
            return Err(ContractionError::Validation(
                "delta must be non-negative".to_string(),
            ));
        }
        if (2 * d as i64) < 32 * t + 40 {
            return Err(ContractionError::Validation(format!(
                "d = {d} is below the threshold 32δ+20 = {} for δ = {delta}",
                HalfInt::from_twice(32 * t + 40)
            )));
        }
        Self::with_unchecked_threshold(o, d, delta, subgroup, working_radius)
    }

    /// Builds the config without the 32δ+20 threshold (certificates may
    /// then legitimately fail at run time). The derived arithmetic is
    /// still re-checked whenever the threshold does hold.
    pub fn with_unchecked_threshold(
        o: &GroupOracle,
        d: u32,
        delta: HalfInt,
        subgroup: SubgroupRecord,
        working_radius: u32,
    ) -> Result<Self, ContractionError> {
        let t = delta.twice();
        let q = (d / 4) as i64;
        if (2 * d as i64) >= 32 * t + 40 {
            let facts = [
                ("floor(d/4) > 8*delta+4", 2 * q > 8 * t + 8),
                ("floor(d/4) >= 4*delta+1", 2 * q >= 4 * t + 2),
                ("floor(d/4) >= 2*delta", 2 * q >= 2 * t),
            ];
            for (label, ok) in facts {
                if !ok {
                    return Err(ContractionError::Validation(format!(
                        "arithmetic precondition {label} failed for d = {d}, delta = {delta}"
                    )));
                }
            }
        }
        let base_vertex = base_point(o, &subgroup, delta, working_radius)?;
        Ok(ContractionConfig {
            d,
            delta,
            subgroup,
            base_vertex,
            working_radius,
        })
    }

    pub fn quarter_d(&self) -> u32 {
        self.d / 4
    }
}

/// The base vertex x₀ with certified d(Hx₀) ≤ 8δ + 4, produced by the
/// small-orbit construction from y₀ = e. Under the 32δ+20 threshold
/// 8δ+4 ≤ d, so x₀ is an F-vertex.
pub fn base_point(
    o: &GroupOracle,
    h: &SubgroupRecord,
    delta: HalfInt,
    working_radius: u32,
) -> Result<GroupElement, ContractionError> {
    let outcome =
        small_orbit_vertex(o, h, &GroupElement::identity(), delta, None, working_radius)
            .map_err(ContractionError::Equivariant)?;
    Ok(outcome.x)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StepKind {
    Move,
    Cone,
}

/// One evaluated certificate. Values are exact half-integers stored as
/// twice-units; `strict` selects < instead of ≤. Set-shaped checks are
/// encoded as violation counts against zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub name: String,
    pub lhs_x2: i64,
    pub rhs_x2: i64,
    pub strict: bool,
    pub pass: bool,
    pub witness: Option<String>,
}

impl Certificate {
    fn le(name: &str, lhs_x2: i64, rhs_x2: i64, witness: Option<String>) -> Self {
        Certificate {
            name: name.to_string(),
            lhs_x2,
            rhs_x2,
            strict: false,
            pass: lhs_x2 <= rhs_x2,
            witness,
        }
    }

    fn lt(name: &str, lhs_x2: i64, rhs_x2: i64, witness: Option<String>) -> Self {
        Certificate {
            name: name.to_string(),
            lhs_x2,
            rhs_x2,
            strict: true,
            pass: lhs_x2 < rhs_x2,
            witness,
        }
    }

    fn holds(name: &str, violations: i64, witness: Option<String>) -> Self {
        Certificate {
            name: name.to_string(),
            lhs_x2: violations,
            rhs_x2: 0,
            strict: false,
            pass: violations == 0,
            witness,
        }
    }
}

#[derive(Clone, Debug)]
pub struct ContractionStep {
    pub kind: StepKind,
    /// The vertex set this step acts on (shortlex sorted).
    pub domain: Vec<GroupElement>,
    pub y0: Option<GroupElement>,
    pub y0_prime: Option<GroupElement>,
    /// H·y₀ for a move step, empty for a cone.
    pub moved_orbit: Vec<GroupElement>,
    /// Total map on the domain, identity off the moved orbit.
    pub vertex_map: Vec<(GroupElement, GroupElement)>,
    /// The small-orbit vertex of the C2 subcase (b), when that applied.
    pub case_b_vertex: Option<GroupElement>,
    pub certificates: Vec<Certificate>,
}

impl ContractionStep {
    /// Image vertex set: (K \ Hy₀) ∪ Hy₀' for a move, the domain itself
    /// for a cone.
    pub fn image(&self) -> Vec<GroupElement> {
        let mut out: Vec<GroupElement> =
            self.vertex_map.iter().map(|(_, to)| to.clone()).collect();
        out.sort();
        out.dedup();
        out
    }
}

/// Echo of everything needed to rebuild the oracle and re-run the
/// checks; embedded in every trace so trace files are self-contained.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TraceConfig {
    pub group: GroupSpec,
    pub d: u32,
    pub delta_x2: i64,
    /// Full element list of H, as words.
    pub subgroup: Vec<String>,
    pub base_vertex: String,
    pub working_radius: u32,
}

#[derive(Clone, Debug)]
pub struct ContractionTrace {
    pub config: TraceConfig,
    pub initial: Vec<GroupElement>,
    pub steps: Vec<ContractionStep>,
    pub terminal: Vec<GroupElement>,
}

/// Serialized certificate (exactly what the verifier re-derives).
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct CertFile {
    pub name: String,
    pub lhs_x2: i64,
    pub rhs_x2: i64,
    pub strict: bool,
    pub pass: bool,
    pub witness: Option<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StepFile {
    pub kind: String,
    pub domain: Vec<String>,
    pub y0: Option<String>,
    pub y0_prime: Option<String>,
    pub moved_orbit: Vec<String>,
    pub vertex_map: Vec<(String, String)>,
    pub case_b_vertex: Option<String>,
    pub certificates: Vec<CertFile>,
}

/// The on-disk trace format; the verifier consumes exactly this.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TraceFile {
    pub config: TraceConfig,
    pub initial: Vec<String>,
    pub steps: Vec<StepFile>,
    pub terminal: Vec<String>,
}

impl ContractionTrace {
    pub fn to_file(&self, o: &GroupOracle) -> TraceFile {
        let words = |vs: &[GroupElement]| vs.iter().map(|v| o.render(v)).collect::<Vec<_>>();
        TraceFile {
            config: self.config.clone(),
            initial: words(&self.initial),
            steps: self.steps.iter().map(|s| step_to_file(o, s)).collect(),
            terminal: words(&self.terminal),
        }
    }
}

fn step_to_file(o: &GroupOracle, s: &ContractionStep) -> StepFile {
    let words = |vs: &[GroupElement]| vs.iter().map(|v| o.render(v)).collect::<Vec<_>>();
    StepFile {
        kind: match s.kind {
            StepKind::Move => "move".to_string(),
            StepKind::Cone => "cone".to_string(),
        },
        domain: words(&s.domain),
        y0: s.y0.as_ref().map(|v| o.render(v)),
        y0_prime: s.y0_prime.as_ref().map(|v| o.render(v)),
        moved_orbit: words(&s.moved_orbit),
        vertex_map: s
            .vertex_map
            .iter()
            .map(|(a, b)| (o.render(a), o.render(b)))
            .collect(),
        case_b_vertex: s.case_b_vertex.as_ref().map(|v| o.render(v)),
        certificates: s
            .certificates
            .iter()
            .map(|c| CertFile {
                name: c.name.clone(),
                lhs_x2: c.lhs_x2,
                rhs_x2: c.rhs_x2,
                strict: c.strict,
                pass: c.pass,
                witness: c.witness.clone(),
            })
            .collect(),
    }
}

fn guard_radius(vertices: &[GroupElement], working_radius: u32) -> Result<(), ContractionError> {
    for v in vertices {
        if v.len() as u32 > working_radius {
            return Err(ContractionError::Metric(MetricError::OutOfRange {
                distance: v.len() as u32,
                guard: working_radius,
            }));
        }
    }
    Ok(())
}

/// d(H{u, v}) — the pairwise orbit condition defining F-edges.
pub(crate) fn orbit_pair_diameter(
    o: &GroupOracle,
    h: &SubgroupRecord,
    u: &GroupElement,
    v: &GroupElement,
) -> u32 {
    let union = orbit_union(o, h, &[u.clone(), v.clone()]);
    diameter_of(o, &union)
}

pub(crate) fn diameter_of(o: &GroupOracle, set: &[GroupElement]) -> u32 {
    let mut best = 0;
    for (i, a) in set.iter().enumerate() {
        for b in &set[i + 1..] {
            best = best.max(o.difference(a, b).len() as u32);
        }
    }
    best
}

pub(crate) fn set_max(o: &GroupOracle, a: &[GroupElement], b: &[GroupElement]) -> u32 {
    let mut best = 0;
    for x in a {
        for y in b {
            best = best.max(o.difference(x, y).len() as u32);
        }
    }
    best
}

fn check_preconditions(
    o: &GroupOracle,
    cfg: &ContractionConfig,
    k: &[GroupElement],
    step: usize,
) -> Result<(), ContractionError> {
    let h = &cfg.subgroup;
    guard_radius(k, cfg.working_radius)?;
    if k.binary_search(&cfg.base_vertex).is_err() {
        return Err(ContractionError::Certificate {
            step,
            name: "pre_base_in_k".to_string(),
            detail: format!(
                "x0 = {} is not in the vertex set",
                o.render(&cfg.base_vertex)
            ),
        });
    }
    for g in h.elements() {
        let mut image: Vec<GroupElement> = k.iter().map(|v| o.mul_unchecked(g, v)).collect();
        image.sort();
        if image != k {
            return Err(ContractionError::Certificate {
                step,
                name: "pre_invariant".to_string(),
                detail: format!("K is not invariant under {}", o.render(g)),
            });
        }
    }
    for v in k {
        let orbit = orbit_of(o, h, v);
        let diam = diameter_of(o, &orbit);
        if diam > cfg.d {
            return Err(ContractionError::Certificate {
                step,
                name: "pre_in_f".to_string(),
                detail: format!(
                    "vertex {} has orbit diameter {diam} > d = {}",
                    o.render(v),
                    cfg.d
                ),
            });
        }
    }
    Ok(())
}

/// One step of the contraction on the (sorted, H-invariant, F-contained)
/// vertex set K.
pub fn contraction_step(
    o: &GroupOracle,
    cfg: &ContractionConfig,
    k: &[GroupElement],
    step: usize,
) -> Result<ContractionStep, ContractionError> {
    check_preconditions(o, cfg, k, step)?;
    let h = &cfg.subgroup;
    let x0 = &cfg.base_vertex;
    let d = cfg.d;
    let t = cfg.delta.twice();

    let dist_x0 = |v: &GroupElement| o.difference(x0, v).len() as u32;
    let m = k.iter().map(&dist_x0).max().expect("K is nonempty");

    if 2 * m as i64 <= d as i64 {
        // Cone: K spans an H-invariant simplex around x₀.
        let mut diam = 0;
        let mut worst = None;
        for (i, a) in k.iter().enumerate() {
            for b in &k[i + 1..] {
                let dist = o.difference(a, b).len() as u32;
                if dist > diam {
                    diam = dist;
                    worst = Some(format!("{}-{}", o.render(a), o.render(b)));
                }
            }
        }
        let certificates = vec![
            Certificate::le("cone_within_half_d", 2 * m as i64, d as i64, None),
            Certificate::le("cone_pairwise", 2 * diam as i64, 2 * d as i64, worst),
            Certificate::holds("cone_invariant", 0, None),
        ];
        let step_out = ContractionStep {
            kind: StepKind::Cone,
            domain: k.to_vec(),
            y0: None,
            y0_prime: None,
            moved_orbit: Vec::new(),
            vertex_map: k.iter().map(|v| (v.clone(), v.clone())).collect(),
            case_b_vertex: None,
            certificates,
        };
        return fail_on_bad_cert(step_out, step);
    }

    // Move: slide the furthest orbit ⌊d/4⌋ steps toward x₀.
    let q = cfg.quarter_d();
    let y0 = k
        .iter()
        .find(|v| dist_x0(v) == m)
        .expect("some vertex realizes the maximum")
        .clone();
    let path = geodesic(o, x0, &y0, cfg.working_radius.max(2 * m)).map_err(ContractionError::Metric)?;
    let path_vertices = path.vertices(o);
    guard_radius(&path_vertices, cfg.working_radius)?;
    let y0_prime = path_vertices[(m - q) as usize].clone();

    let orbit = orbit_of(o, h, &y0);
    let target_orbit = orbit_of(o, h, &y0_prime);
    guard_radius(&target_orbit, cfg.working_radius)?;

    // f: h·y₀ ↦ h·y₀', identity elsewhere.
    let mut image_of: BTreeMap<GroupElement, GroupElement> = BTreeMap::new();
    for g in h.elements() {
        image_of.insert(o.mul_unchecked(g, &y0), o.mul_unchecked(g, &y0_prime));
    }
    let vertex_map: Vec<(GroupElement, GroupElement)> = k
        .iter()
        .map(|v| {
            let to = image_of.get(v).cloned().unwrap_or_else(|| v.clone());
            (v.clone(), to)
        })
        .collect();
    let f =
        |v: &GroupElement| -> GroupElement { image_of.get(v).cloned().unwrap_or_else(|| v.clone()) };

    let mut certificates = Vec::new();

    let base_moved = orbit.binary_search(x0).is_ok();
    certificates.push(Certificate::holds(
        "c1_base_not_moved",
        i64::from(base_moved),
        base_moved.then(|| o.render(x0)),
    ));

    // C2, checked directly: the target orbit stays in F.
    let target_diam = diameter_of(o, &target_orbit);
    certificates.push(Certificate::le(
        "c2_target_in_f",
        2 * target_diam as i64,
        2 * d as i64,
        Some(o.render(&y0_prime)),
    ));

    // C2 subcase metadata.
    let source_diam = diameter_of(o, &orbit);
    let mut case_b_vertex = None;
    if 2 * source_diam as i64 <= d as i64 {
        certificates.push(Certificate::le(
            "c2_subcase_a",
            2 * source_diam as i64,
            d as i64,
            None,
        ));
    } else {
        let outcome = small_orbit_vertex(o, h, &y0, cfg.delta, Some(x0), cfg.working_radius)
            .map_err(|e| certificate_from_equivariant(e, step))?;
        let orbit_x = orbit_of(o, h, &outcome.x);
        let small = diameter_of(o, &orbit_x);
        certificates.push(Certificate::le(
            "c2b_small_orbit",
            2 * small as i64,
            8 * t + 8,
            Some(o.render(&outcome.x)),
        ));
        let to_y0 = set_max(o, &orbit_x, std::slice::from_ref(&y0));
        certificates.push(Certificate::le(
            "c2b_orbit_to_y0",
            2 * to_y0 as i64,
            d as i64 + 2 * t + 2,
            None,
        ));
        let hyp = set_max(o, &orbit, std::slice::from_ref(x0));
        certificates.push(Certificate::holds(
            "c2b_hyp_furthest",
            i64::from(hyp != m),
            Some(format!("d(Hy0, x0) = {hyp}, d(y0, x0) = {m}")),
        ));
        let to_x0 = set_max(o, &orbit_x, std::slice::from_ref(x0));
        certificates.push(Certificate::le(
            "c2b_orbit_to_base",
            2 * to_x0 as i64,
            2 * m as i64,
            None,
        ));
        case_b_vertex = Some(outcome.x);
    }

    // C3: f is simplicial on F-edges into the moved orbit.
    let mut c3_worst = 0i64;
    let mut c3_witness = None;
    let mut c3_violations = 0i64;
    for y in k {
        for w in &orbit {
            if y == w {
                continue;
            }
            if orbit_pair_diameter(o, h, y, w) > d {
                continue; // not an F-edge
            }
            let image_dist = o.difference(&f(y), &f(w)).len() as i64;
            if 2 * image_dist > c3_worst {
                c3_worst = 2 * image_dist;
                c3_witness = Some(format!("{}-{}", o.render(y), o.render(w)));
            }
            if image_dist > d as i64 {
                c3_violations += 1;
            }
        }
    }
    certificates.push(Certificate {
        name: "c3_simplicial".to_string(),
        lhs_x2: c3_worst,
        rhs_x2: 2 * d as i64,
        strict: false,
        pass: c3_violations == 0,
        witness: c3_witness,
    });

    // C4: σ ∪ f(σ) spans a simplex of F — edgewise by flagness.
    let mut c4_worst = 0i64;
    let mut c4_witness = None;
    let mut c4_violations = 0i64;
    {
        let mut check_pair = |a: &GroupElement, b: &GroupElement, ctx: &str| {
            if a == b {
                return;
            }
            let diam = orbit_pair_diameter(o, h, a, b) as i64;
            if 2 * diam > c4_worst {
                c4_worst = 2 * diam;
                c4_witness = Some(ctx.to_string());
            }
            if diam > d as i64 {
                c4_violations += 1;
            }
        };
        for (i, u) in k.iter().enumerate() {
            check_pair(u, &f(u), &format!("{}-f", o.render(u)));
            for v in &k[i + 1..] {
                if orbit_pair_diameter(o, h, u, v) > d {
                    continue; // not an F-edge of K
                }
                let ctx = format!("{}-{}", o.render(u), o.render(v));
                check_pair(u, &f(v), &ctx);
                check_pair(v, &f(u), &ctx);
                check_pair(&f(u), &f(v), &ctx);
            }
        }
    }
    certificates.push(Certificate {
        name: "c4_carrier".to_string(),
        lhs_x2: c4_worst,
        rhs_x2: 2 * d as i64,
        strict: false,
        pass: c4_violations == 0,
        witness: c4_witness,
    });

    // C5: the whole orbit moves closer to x₀.
    let mut c5_worst = 0i64;
    let mut c5_witness = None;
    for to in &target_orbit {
        let dist = o.difference(x0, to).len() as i64;
        if 2 * dist > c5_worst {
            c5_worst = 2 * dist;
            c5_witness = Some(o.render(to));
        }
    }
    certificates.push(Certificate::le(
        "c5_progress_bound",
        c5_worst,
        2 * (m as i64 - q as i64) + 8 * t + 8,
        c5_witness.clone(),
    ));
    certificates.push(Certificate::lt(
        "c5_progress_strict",
        c5_worst,
        2 * m as i64,
        c5_witness,
    ));

    let step_out = ContractionStep {
        kind: StepKind::Move,
        domain: k.to_vec(),
        y0: Some(y0),
        y0_prime: Some(y0_prime),
        moved_orbit: orbit,
        vertex_map,
        case_b_vertex,
        certificates,
    };
    fail_on_bad_cert(step_out, step)
}

fn fail_on_bad_cert(
    step_out: ContractionStep,
    step: usize,
) -> Result<ContractionStep, ContractionError> {
    if let Some(bad) = step_out.certificates.iter().find(|c| !c.pass) {
        return Err(ContractionError::Certificate {
            step,
            name: bad.name.clone(),
            detail: format!(
                "{} = {} vs {} (strict: {}); witness: {}",
                bad.name,
                HalfInt::from_twice(bad.lhs_x2),
                HalfInt::from_twice(bad.rhs_x2),
                bad.strict,
                bad.witness.as_deref().unwrap_or("-")
            ),
        });
    }
    Ok(step_out)
}

fn certificate_from_equivariant(e: EquivariantError, step: usize) -> ContractionError {
    match e {
        EquivariantError::Certificate {
            name,
            lhs_x2,
            rhs_x2,
            context,
        } => ContractionError::Certificate {
            step,
            name,
            detail: format!(
                "{} vs {} ({context})",
                HalfInt::from_twice(lhs_x2),
                HalfInt::from_twice(rhs_x2)
            ),
        },
        other => ContractionError::Equivariant(other),
    }
}

/// A partial trace accompanying a failed run, for diagnosis.
#[derive(Clone, Debug)]
pub struct PartialTrace {
    pub config: TraceConfig,
    pub initial: Vec<GroupElement>,
    pub steps: Vec<ContractionStep>,
}

/// A contraction failure carrying the full partial trace.
#[derive(Debug)]
pub struct ContractFailure {
    pub error: ContractionError,
    pub partial: PartialTrace,
}

impl std::fmt::Display for ContractFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{} (after {} steps)",
            self.error,
            self.partial.steps.len()
        )
    }
}

impl std::error::Error for ContractFailure {}

fn trace_config(o: &GroupOracle, cfg: &ContractionConfig) -> TraceConfig {
    TraceConfig {
        group: o.spec().clone(),
        d: cfg.d,
        delta_x2: cfg.delta.twice(),
        subgroup: cfg
            .subgroup
            .elements()
            .iter()
            .map(|g| o.render(g))
            .collect(),
        base_vertex: o.render(&cfg.base_vertex),
        working_radius: cfg.working_radius,
    }
}

/// Runs the contraction to its cone step. After each move the engine
/// recurses on the image vertex set (K \ Hy₀) ∪ Hy₀' with its induced
/// flag structure in F. Termination is guaranteed because C5 strictly
/// reduces the furthest-orbit distance; the step guard enforces it.
pub fn contract(
    o: &GroupOracle,
    cfg: &ContractionConfig,
    k0: &[GroupElement],
    step_guard: usize,
) -> Result<ContractionTrace, Box<ContractFailure>> {
    let mut initial: Vec<GroupElement> = k0.to_vec();
    initial.sort();
    initial.dedup();
    let config = trace_config(o, cfg);
    let mut steps: Vec<ContractionStep> = Vec::new();
    let mut k = initial.clone();
    loop {
        if steps.len() >= step_guard {
            return Err(Box::new(ContractFailure {
                error: ContractionError::StepGuard {
                    guard: step_guard,
                    steps: steps.len(),
                },
                partial: PartialTrace {
                    config,
                    initial,
                    steps,
                },
            }));
        }
        match contraction_step(o, cfg, &k, steps.len()) {
            Ok(step) => {
                let is_cone = step.kind == StepKind::Cone;
                let image = step.image();
                steps.push(step);
                if is_cone {
                    return Ok(ContractionTrace {
                        config,
                        initial,
                        steps,
                        terminal: k,
                    });
                }
                k = image;
            }
            Err(error) => {
                return Err(Box::new(ContractFailure {
                    error,
                    partial: PartialTrace {
                        config,
                        initial,
                        steps,
                    },
                }));
            }
        }
    }
}

/// Deterministic sample of F-vertices (orbit diameter ≤ d) found by
/// seeded random walks of length up to `max_len`. Ball-free, so it works
/// at radii whose balls would be far too large to materialize.
pub fn sample_f_vertices(
    o: &GroupOracle,
    h: &SubgroupRecord,
    d: u32,
    max_len: u32,
    count: usize,
    seed: u64,
) -> Vec<GroupElement> {
    let gens: Vec<_> = o.generators().iter().collect();
    if gens.is_empty() {
        return vec![GroupElement::identity()];
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut picked: Vec<GroupElement> = Vec::new();
    let mut attempts = 0;
    while picked.len() < count && attempts < count * 200 {
        attempts += 1;
        let len = rng.gen_range(0..=max_len);
        let mut v = GroupElement::identity();
        let mut last: Option<crate::groups::GenId> = None;
        for _ in 0..len {
            // Avoid immediate backtracking so walks actually go places.
            let forbidden = last.map(|g| o.generators().inverse_of(g));
            let choices: Vec<_> = gens
                .iter()
                .copied()
                .filter(|g| Some(*g) != forbidden)
                .collect();
            let g = if choices.is_empty() {
                gens[rng.gen_range(0..gens.len())]
            } else {
                choices[rng.gen_range(0..choices.len())]
            };
            v = o.mul_gen(&v, g);
            last = Some(g);
        }
        if v.len() as u32 > max_len {
            continue;
        }
        let orbit = orbit_of(o, h, &v);
        if diameter_of(o, &orbit) <= d && !picked.contains(&v) {
            picked.push(v);
        }
    }
    picked.sort();
    picked
}

/// The standard initial set: the H-closure of the sampled seeds plus the
/// base vertex.
pub fn initial_set(
    o: &GroupOracle,
    h: &SubgroupRecord,
    seeds: &[GroupElement],
    base_vertex: &GroupElement,
) -> Vec<GroupElement> {
    let mut all = seeds.to_vec();
    all.push(base_vertex.clone());
    orbit_union(o, h, &all)
}
