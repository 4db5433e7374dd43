//! Universally small orbits: from any vertex y₀ with orbit diameter R,
//! the midpoint construction along a geodesic to a furthest orbit point
//! yields a vertex x whose orbit is small — d(Hx) ≤ 8δ + 4 — and close
//! to the original orbit. Every bound is evaluated numerically and a
//! violation is a hard failure: it would falsify the bound or reveal
//! that the supplied δ underestimates the true constant.

use crate::cayley::{diameter, geodesic, set_distance};
use crate::error::{EquivariantError, MetricError};
use crate::groups::{GroupElement, GroupOracle};
use crate::half::HalfInt;

use super::{orbit_of, SubgroupRecord};

/// One evaluated inequality, in twice-units (exact half-integers).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertCheck {
    pub name: String,
    pub lhs_x2: i64,
    pub rhs_x2: i64,
    pub pass: bool,
}

impl CertCheck {
    fn le(name: &str, lhs_x2: i64, rhs_x2: i64) -> Self {
        CertCheck {
            name: name.to_string(),
            lhs_x2,
            rhs_x2,
            pass: lhs_x2 <= rhs_x2,
        }
    }
}

/// The constructed vertex with its certificate.
#[derive(Clone, Debug)]
pub struct SmallOrbitOutcome {
    pub x: GroupElement,
    /// R = d(Hy₀).
    pub orbit_diameter: u32,
    /// The chosen furthest orbit point y′ with d(y′, y₀) = R.
    pub y_prime: GroupElement,
    pub checks: Vec<CertCheck>,
    /// Whether the (b) bound applied (x₀ supplied and hypotheses held).
    pub b_applied: bool,
}

/// Runs the small-orbit construction from y₀ and certifies:
///   (a1) d(Hx, Hy₀) ≤ ⌊R/2⌋ + 2δ + 1,
///   (a2) d(Hx) ≤ 8δ + 4,
///   (b)  d(Hx, x₀) ≤ d(x₀, y₀), when x₀ is supplied, R ≥ 8δ + 2 and
///        d(y₀, x₀) = d(Hy₀, x₀).
/// The choice of y′ and of the geodesic is deterministic (shortlex /
/// stepwise-lex). Any failing bound aborts with a certificate error.
pub fn small_orbit_vertex(
    o: &GroupOracle,
    h: &SubgroupRecord,
    y0: &GroupElement,
    delta: HalfInt,
    x0: Option<&GroupElement>,
    radius_guard: u32,
) -> Result<SmallOrbitOutcome, EquivariantError> {
    o.validate(y0).map_err(EquivariantError::Group)?;
    let t = delta.twice();
    let orbit_y0 = orbit_of(o, h, y0);
    guard_radius(&orbit_y0, radius_guard)?;

    let r = diameter(o, &orbit_y0).map_err(EquivariantError::Metric)?;
    let from_y0 = set_distance(o, std::slice::from_ref(y0), &orbit_y0)
        .map_err(EquivariantError::Metric)?;
    let mut checks = vec![CertCheck {
        name: "orbit_diameter_identity".to_string(),
        lhs_x2: 2 * r as i64,
        rhs_x2: 2 * from_y0 as i64,
        pass: r == from_y0,
    }];

    // Furthest orbit point, shortlex tie-break, then the vertex at
    // distance ⌊R/2⌋ from y₀ on the lex-least geodesic [y′, y₀].
    let y_prime = orbit_y0
        .iter()
        .find(|w| {
            o.difference(w, y0).len() as u32 == r
        })
        .expect("some orbit point realizes the diameter")
        .clone();
    let x = if r == 0 {
        y0.clone()
    } else {
        let path = geodesic(o, &y_prime, y0, radius_guard).map_err(EquivariantError::Metric)?;
        let vertices = path.vertices(o);
        guard_radius(&vertices, radius_guard)?;
        vertices[(r as usize).div_ceil(2)].clone()
    };

    let orbit_x = orbit_of(o, h, &x);
    guard_radius(&orbit_x, radius_guard)?;

    let a1_lhs = set_distance(o, &orbit_x, &orbit_y0).map_err(EquivariantError::Metric)?;
    checks.push(CertCheck::le(
        "a1_orbit_to_orbit",
        2 * a1_lhs as i64,
        2 * (r as i64 / 2) + 2 * t + 2,
    ));

    let a2_lhs = diameter(o, &orbit_x).map_err(EquivariantError::Metric)?;
    checks.push(CertCheck::le(
        "a2_small_orbit",
        2 * a2_lhs as i64,
        8 * t + 8,
    ));

    let mut b_applied = false;
    if let Some(x0) = x0 {
        o.validate(x0).map_err(EquivariantError::Group)?;
        let d_x0_y0 = o.difference(x0, y0).len() as u32;
        let d_orbit_x0 = set_distance(o, &orbit_y0, std::slice::from_ref(x0))
            .map_err(EquivariantError::Metric)?;
        let hyp_r = 2 * r as i64 >= 8 * t + 4; // R ≥ 8δ + 2
        let hyp_max = d_x0_y0 == d_orbit_x0;
        if hyp_r && hyp_max {
            b_applied = true;
            let b_lhs = set_distance(o, &orbit_x, std::slice::from_ref(x0))
                .map_err(EquivariantError::Metric)?;
            checks.push(CertCheck::le(
                "b_orbit_to_base",
                2 * b_lhs as i64,
                2 * d_x0_y0 as i64,
            ));
        }
    }

    if let Some(bad) = checks.iter().find(|c| !c.pass) {
        return Err(EquivariantError::Certificate {
            name: bad.name.clone(),
            lhs_x2: bad.lhs_x2,
            rhs_x2: bad.rhs_x2,
            context: format!(
                "small-orbit construction from y0 = {} (R = {r}, delta = {delta})",
                o.render(y0)
            ),
        });
    }

    Ok(SmallOrbitOutcome {
        x,
        orbit_diameter: r,
        y_prime,
        checks,
        b_applied,
    })
}

fn guard_radius(vertices: &[GroupElement], radius_guard: u32) -> Result<(), EquivariantError> {
    for v in vertices {
        if v.len() as u32 > radius_guard {
            return Err(EquivariantError::Metric(MetricError::OutOfRange {
                distance: v.len() as u32,
                guard: radius_guard,
            }));
        }
    }
    Ok(())
}
