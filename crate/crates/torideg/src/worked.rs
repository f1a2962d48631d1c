//! The bundled reference examples and their hand-checked expected values.
//!
//! Every expected value here was verified by independent computation before
//! being frozen. The `paper-examples` subcommand replays the whole list and
//! reports one verdict per assertion; the acceptance test suite reuses the
//! same fixtures.

use std::collections::{BTreeMap, BTreeSet};

use crate::exact::{rat, rint};
use crate::fanalgebra::generator_set;
use crate::monoidfan::{
    degree_one_submonoid, fan_of_monoids, monoid_membership, saturation_check, span_of,
};
use crate::pipeline::{assemble, BuildOptions, MarkingMode, Stratification};
use crate::polytope::{
    q_simplex, simplex6, square2, unit_square, Chain, FaceId, FaceLattice, GradedPoint,
    LatticePolytope,
};
use crate::stratify::Marking;
use crate::valuation::{
    nu_chain, quasi_valuation_via_min, valuation_monoid_check, LinearOrder, QuasiValue,
};

/// Locates a face by the coordinates of its vertices.
pub fn face_by_vertices(lattice: &FaceLattice, coords: &[&[i64]]) -> FaceId {
    let want: BTreeSet<Vec<i64>> = coords.iter().map(|c| c.to_vec()).collect();
    lattice
        .faces
        .iter()
        .find(|f| {
            let got: BTreeSet<Vec<i64>> = f
                .vertex_set
                .iter()
                .map(|&v| lattice.vertices()[v].clone())
                .collect();
            got == want
        })
        .unwrap_or_else(|| panic!("no face with vertices {want:?}"))
        .id
}

/// Unit square with the product extremal functions: vertex degree 1, edge
/// degree 2, polytope degree 4.
pub fn paper_square() -> Stratification {
    let p = unit_square();
    let lattice = p.face_lattice();
    let multipliers = BTreeMap::from([(lattice.top, 2)]);
    assemble(
        p,
        MarkingMode::Barycentric,
        BuildOptions { multipliers, alternative_order: false },
    )
    .unwrap()
}

/// The 2x2 square with every face marked by its interior lattice point.
pub fn square2_integral() -> Stratification {
    assemble(square2(), MarkingMode::Integral, BuildOptions::default()).unwrap()
}

/// The 2x2 square with the top edge re-marked at (4/3, 2).
pub fn modified_square2() -> Stratification {
    let p = square2();
    let lattice = p.face_lattice();
    let mut marking = Marking::integral(&lattice).unwrap();
    let top_edge = face_by_vertices(&lattice, &[&[0, 2], &[2, 2]]);
    marking.points.insert(top_edge, vec![rat(4, 3), rint(2)]);
    assemble(p, MarkingMode::Explicit(marking), BuildOptions::default()).unwrap()
}

/// The marking of the triangulation of `6 * simplex`: the interior point
/// `(2,1,1)` for the whole polytope, barycenters everywhere else.
pub fn simplex6_interior_marking(lattice: &FaceLattice) -> Marking {
    let mut marking = Marking::barycentric(lattice);
    marking
        .points
        .insert(lattice.top, vec![rint(2), rint(1), rint(1)]);
    marking
}

pub fn simplex6_interior_marked() -> Stratification {
    let p = simplex6();
    let lattice = p.face_lattice();
    let marking = simplex6_interior_marking(&lattice);
    assemble(p, MarkingMode::Explicit(marking), BuildOptions::default()).unwrap()
}

/// The chain of the non-normal simplex inside the marked `6 * simplex`:
/// vertex origin, edge to `(0,0,6)`, facet `x = 0`, the polytope.
pub fn q_chain(lattice: &FaceLattice) -> Chain {
    let v0 = face_by_vertices(lattice, &[&[0, 0, 0]]);
    let edge = face_by_vertices(lattice, &[&[0, 0, 0], &[0, 0, 6]]);
    let facet = face_by_vertices(lattice, &[&[0, 0, 0], &[0, 6, 0], &[0, 0, 6]]);
    Chain { faces: vec![v0, edge, facet, lattice.top] }
}

/// The chain of the normal simplex from the same triangulation.
pub fn normal_chain(lattice: &FaceLattice) -> Chain {
    let v3 = face_by_vertices(lattice, &[&[0, 0, 6]]);
    let edge = face_by_vertices(lattice, &[&[0, 6, 0], &[0, 0, 6]]);
    let facet = face_by_vertices(lattice, &[&[6, 0, 0], &[0, 6, 0], &[0, 0, 6]]);
    Chain { faces: vec![v3, edge, facet, lattice.top] }
}

#[derive(Debug, Clone)]
pub struct Verdict {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

type Check = fn() -> Result<String, String>;

const CHECKS: &[(&str, Check)] = &[
    ("square1-lattice-points", check_square1_lattice_points),
    ("square2-lattice-points", check_square2_lattice_points),
    ("simplex6-normal", check_simplex6_normal),
    ("q-simplex-not-normal", check_q_simplex_not_normal),
    ("companion-simplex-normal", check_companion_simplex_normal),
    ("square1-extremal-degrees", check_square1_extremal_degrees),
    ("square2-extremal-degrees", check_square2_extremal_degrees),
    ("square2-triangulation-star", check_square2_triangulation_star),
    ("nu-chain-unit-at-member", check_nu_chain_unit_at_member),
    ("nu-extremal-order-independent", check_nu_extremal_order_independent),
    ("nu-reconstructs-weight", check_nu_reconstructs_weight),
    ("square1-valuation-monoid-law", check_square1_monoid_law),
    ("square2-valuation-monoid-integral", check_square2_monoid_integral),
    ("modified-square2-membership", check_modified_membership),
    ("modified-square2-extra-generators", check_modified_generators),
    ("modified-square2-degree-one", check_modified_degree_one),
    ("simplex6-q-chain-not-saturated", check_q_chain_saturation),
    ("simplex6-shadow-components", check_shadow_components),
];

pub fn reference_names() -> Vec<&'static str> {
    CHECKS.iter().map(|(n, _)| *n).collect()
}

/// Runs every bundled assertion and returns one verdict per check.
pub fn run_reference_checks() -> Vec<Verdict> {
    CHECKS
        .iter()
        .map(|(name, check)| match check() {
            Ok(detail) => Verdict { name, pass: true, detail },
            Err(detail) => Verdict { name, pass: false, detail },
        })
        .collect()
}

fn expect(cond: bool, ok: &str, fail: &str) -> Result<String, String> {
    if cond {
        Ok(ok.to_string())
    } else {
        Err(fail.to_string())
    }
}

fn check_square1_lattice_points() -> Result<String, String> {
    let n = unit_square().lattice_points(1).len();
    expect(n == 4, "4 lattice points, all vertices", &format!("got {n}"))
}

fn check_square2_lattice_points() -> Result<String, String> {
    let n = square2().lattice_points(1).len();
    expect(n == 9, "9 lattice points", &format!("got {n}"))
}

fn check_simplex6_normal() -> Result<String, String> {
    let (ok, _) = simplex6().is_normal();
    expect(ok, "6*simplex is normal", "reported non-normal")
}

fn check_q_simplex_not_normal() -> Result<String, String> {
    let (ok, witness) = q_simplex().is_normal();
    match (ok, witness) {
        (false, Some(w)) if w.level == 2 => {
            Ok(format!("non-normal with level-2 witness {w}"))
        }
        (false, Some(w)) => Err(format!("witness at level {}, expected 2", w.level)),
        _ => Err("reported normal".into()),
    }
}

fn check_companion_simplex_normal() -> Result<String, String> {
    let p = LatticePolytope::new(
        3,
        vec![vec![0, 0, 6], vec![0, 3, 3], vec![2, 2, 2], vec![2, 1, 1]],
    )
    .map_err(|e| e.to_string())?;
    let (ok, _) = p.is_normal();
    expect(ok, "companion simplex is normal", "reported non-normal")
}

fn check_square1_extremal_degrees() -> Result<String, String> {
    let s = paper_square();
    let top = s.lattice.top;
    let d = s.extremal.degree(top);
    let lifted = s.extremal.lifted(top).clone();
    expect(
        d == 4 && lifted == vec![4, 2, 2],
        "deg f_P = 4 with lifted weight (4,2,2)",
        &format!("got degree {d}, lifted {lifted:?}"),
    )
}

fn check_square2_extremal_degrees() -> Result<String, String> {
    let s = square2_integral();
    let all_one = s.extremal.is_integral();
    expect(all_one, "all extremal functions have degree 1", "degrees above 1 found")
}

fn check_square2_triangulation_star() -> Result<String, String> {
    let s = square2_integral();
    let count = s.tri.simplices.len();
    let center = vec![rint(1), rint(1)];
    let star = s.tri.simplices.iter().all(|sx| sx.contains(&center));
    expect(
        count == 8 && star,
        "8 maximal triangles, all through (1,1)",
        &format!("{count} triangles, star = {star}"),
    )
}

fn check_nu_chain_unit_at_member() -> Result<String, String> {
    let s = paper_square();
    let v0 = face_by_vertices(&s.lattice, &[&[0, 0]]);
    let bottom = face_by_vertices(&s.lattice, &[&[0, 0], &[1, 0]]);
    let chain = s
        .tri
        .chains()
        .iter()
        .find(|c| c.faces == vec![v0, bottom, s.lattice.top])
        .unwrap();
    let g = GradedPoint::new(2, vec![1, 0]);
    let cv = nu_chain(std::slice::from_ref(&g), chain, &s.extremal)
        .map_err(|e| e.to_string())?;
    expect(
        cv.coeffs == BTreeMap::from([(bottom, rint(1))]),
        "value of the edge weight is the edge unit vector",
        &format!("got {:?}", cv.coeffs),
    )
}

fn check_nu_extremal_order_independent() -> Result<String, String> {
    let s = paper_square();
    let alt = LinearOrder::alternative_for(&s.lattice);
    for face in &s.lattice.faces {
        let lifted = s.extremal.lifted(face.id);
        let g = GradedPoint::new(lifted[0], lifted[1..].to_vec());
        let expected = QuasiValue::from_map(BTreeMap::from([(face.id, rint(1))]));
        for order in [&s.order, &alt] {
            let got =
                quasi_valuation_via_min(std::slice::from_ref(&g), &s.tri, &s.extremal, order)
                    .map_err(|e| e.to_string())?;
            if got != expected {
                return Err(format!("face {}: got {got}", face.id));
            }
        }
    }
    Ok("every extremal weight maps to its unit vector under both orders".into())
}

fn check_nu_reconstructs_weight() -> Result<String, String> {
    let s = paper_square();
    let mut count = 0;
    for point in s.lattice.polytope.weight_monoid(3) {
        let qv = quasi_valuation_via_min(
            std::slice::from_ref(&point),
            &s.tri,
            &s.extremal,
            &s.order,
        )
        .map_err(|e| e.to_string())?;
        if qv.reconstruct(&s.extremal, 2).as_ref() != Some(&point) {
            return Err(format!("reconstruction fails at {point}"));
        }
        count += 1;
    }
    Ok(format!("weights of {count} graded points reconstructed exactly"))
}

fn check_square1_monoid_law() -> Result<String, String> {
    let s = paper_square();
    for chain in s.tri.chains() {
        let report = valuation_monoid_check(chain, &s.extremal, &s.lattice, 4)
            .map_err(|e| e.to_string())?;
        if !report.all_reconstructed {
            return Err("reconstruction failed".into());
        }
        for &f in &chain.faces {
            let want = if s.lattice.face(f).dim == 2 { 2 } else { 1 };
            let got = report.denominators[&f];
            if got != want {
                return Err(format!(
                    "face {f} (dim {}): denominator {got}, expected {want}",
                    s.lattice.face(f).dim
                ));
            }
        }
    }
    Ok("images satisfy 2a_2, a_1, a_0 integral with denominator 2 attained".into())
}

fn check_square2_monoid_integral() -> Result<String, String> {
    let s = square2_integral();
    for chain in s.tri.chains() {
        let report = valuation_monoid_check(chain, &s.extremal, &s.lattice, 3)
            .map_err(|e| e.to_string())?;
        if !report.denominators.values().all(|&d| d == 1) {
            return Err(format!("non-integral image on chain {:?}", chain.faces));
        }
    }
    Ok("all chain-valuation images lie in Z^3".into())
}

fn check_modified_membership() -> Result<String, String> {
    let s = modified_square2();
    let v22 = face_by_vertices(&s.lattice, &[&[2, 2]]);
    let top = face_by_vertices(&s.lattice, &[&[0, 2], &[2, 2]]);
    let chain = Chain { faces: vec![v22, top, s.lattice.top] };
    let a = monoid_membership(&GradedPoint::new(2, vec![3, 4]), &chain, &s.marking);
    let b = monoid_membership(&GradedPoint::new(3, vec![4, 6]), &chain, &s.marking);
    expect(
        a && b,
        "(2,3,4) and (3,4,6) lie in the chain monoid",
        &format!("membership = ({a}, {b})"),
    )
}

fn check_modified_generators() -> Result<String, String> {
    let s = modified_square2();
    let fan = fan_of_monoids(&s.tri, &s.extremal, 4).map_err(|e| e.to_string())?;
    let gens = generator_set(&fan, &s.tri, &s.extremal).map_err(|e| e.to_string())?;
    let pts = gens.points();
    let d = GradedPoint::new(2, vec![3, 4]);
    let c = GradedPoint::new(3, vec![4, 6]);
    if !pts.contains(&d) || !pts.contains(&c) {
        return Err("generator set misses the higher-level classes".into());
    }
    // neither lies in the span of the degree-one classes of that chain
    let span = span_of(
        &[GradedPoint::new(1, vec![1, 1]), GradedPoint::new(1, vec![2, 2])],
        4,
    );
    expect(
        !span.contains(&d) && !span.contains(&c),
        "(2,3,4) and (3,4,6) are necessary generators beyond the degree-one classes",
        "degree-one classes already span the extra generators",
    )
}

fn check_modified_degree_one() -> Result<String, String> {
    let s = modified_square2();
    let v22 = face_by_vertices(&s.lattice, &[&[2, 2]]);
    let top = face_by_vertices(&s.lattice, &[&[0, 2], &[2, 2]]);
    let chain = Chain { faces: vec![v22, top, s.lattice.top] };
    let sub = degree_one_submonoid(&chain, &s.tri);
    let want = vec![GradedPoint::new(1, vec![1, 1]), GradedPoint::new(1, vec![2, 2])];
    expect(
        sub.generators == want,
        "degree-one generators are (1,1,1) and (1,2,2)",
        &format!("got {:?}", sub.generators),
    )
}

fn check_q_chain_saturation() -> Result<String, String> {
    let s = simplex6_interior_marked();
    let chain = q_chain(&s.lattice);
    let report = saturation_check(&chain, &s.tri, &s.extremal, 3).map_err(|e| e.to_string())?;
    if report.equal {
        return Err("chain monoid reported equal to its degree-one span".into());
    }
    let witness = report
        .missing
        .iter()
        .find(|(p, mult)| p.level == 2 && *mult == Some(2));
    match witness {
        Some((p, _)) => Ok(format!(
            "missing level-2 element {p} whose double lies in the degree-one span"
        )),
        None => Err(format!("no level-2 witness with doubling; missing = {:?}", report.missing)),
    }
}

fn check_shadow_components() -> Result<String, String> {
    let s = simplex6_interior_marked();
    let fan = fan_of_monoids(&s.tri, &s.extremal, 4).map_err(|e| e.to_string())?;
    let chains = s.tri.chains();
    let qc = q_chain(&s.lattice);
    let nc = normal_chain(&s.lattice);
    let qi = chains.iter().position(|c| c == &qc).unwrap();
    let ni = chains.iter().position(|c| c == &nc).unwrap();
    let q_level_one = fan.monoids[qi].hilbert_basis.iter().all(|h| h.level == 1);
    let n_level_one = fan.monoids[ni].hilbert_basis.iter().all(|h| h.level == 1);
    // cross-reference with the saturation report
    let q_sat = saturation_check(&qc, &s.tri, &s.extremal, 3)
        .map_err(|e| e.to_string())?
        .equal;
    expect(
        !q_level_one && n_level_one && !q_sat,
        "the non-normal component needs higher-level generators, the companion does not",
        &format!("q level-one-only = {q_level_one}, companion = {n_level_one}"),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_reference_checks_pass() {
        let verdicts = run_reference_checks();
        for v in &verdicts {
            assert!(v.pass, "{}: {}", v.name, v.detail);
        }
        assert_eq!(verdicts.len(), reference_names().len());
    }
}
