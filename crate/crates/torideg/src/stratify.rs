//! Face markings, extremal-function data, the flag-indexed triangulation
//! and exact point location.
//!
//! A marking chooses one rational point in the relative interior of every
//! face. Along each maximal chain of faces the marked points are affinely
//! independent, so taking convex hulls chain by chain triangulates the
//! polytope. Building the triangulation verifies this: the simplex volumes
//! must add up to the polytope volume exactly, and any two maximal simplices
//! must intersect in the simplex of their shared subchain.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::exact::{
    barycentric_coordinates, determinant, rank_of, rint, row_space_kernel_vector, solve_in_basis,
    vec_sub, ConeTester, ExactError, Rat, RatVec,
};
use crate::polytope::{Chain, FaceId, FaceLattice};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MarkingError {
    #[error("marking is missing face {0}")]
    MissingFace(FaceId),
    #[error("marked point of face {0} does not lie in its relative interior")]
    PointNotInteriorToFace(FaceId),
    #[error("marked points along chain {0:?} are affinely dependent")]
    DependentChainWeights(Vec<FaceId>),
    #[error("triangulation volumes sum to {got}, polytope volume is {expected}")]
    CoverageFailure { got: String, expected: String },
    #[error("simplices of chains {0:?} and {1:?} do not meet in a common face")]
    OverlapFailure(Vec<FaceId>, Vec<FaceId>),
    #[error("point lies outside the polytope")]
    PointOutsidePolytope,
    #[error("face {0} has no interior lattice point; integral marking unavailable")]
    NoInteriorLatticePoint(FaceId),
    #[error("multiplier for face {0} must be a positive integer")]
    InvalidMultiplier(FaceId),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

/// A rational interior point for every face of the lattice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Marking {
    pub points: BTreeMap<FaceId, RatVec>,
}

impl Marking {
    /// The barycentric marking: each face marked by the average of its
    /// vertices.
    pub fn barycentric(lattice: &FaceLattice) -> Marking {
        let mut points = BTreeMap::new();
        for face in &lattice.faces {
            let verts = lattice.vertex_coords(face.id);
            let k = rint(verts.len() as i64);
            let dim = lattice.dim();
            let mut avg = vec![Rat::zero(); dim];
            for v in &verts {
                for (a, b) in avg.iter_mut().zip(v) {
                    *a += b;
                }
            }
            for a in avg.iter_mut() {
                *a /= &k;
            }
            points.insert(face.id, avg);
        }
        Marking { points }
    }

    /// Marks every face by its lexicographically smallest interior lattice
    /// point. Fails on faces without one.
    pub fn integral(lattice: &FaceLattice) -> Result<Marking, MarkingError> {
        let mut points = BTreeMap::new();
        for face in &lattice.faces {
            let candidates = lattice.polytope.lattice_points(1);
            let found = candidates.into_iter().find(|pt| {
                let rp: RatVec = pt.iter().map(|&c| rint(c)).collect();
                lattice.relative_interior_contains(face.id, &rp)
            });
            match found {
                Some(pt) => {
                    points.insert(face.id, pt.iter().map(|&c| rint(c)).collect());
                }
                None => return Err(MarkingError::NoInteriorLatticePoint(face.id)),
            }
        }
        Ok(Marking { points })
    }

    pub fn point(&self, face: FaceId) -> &RatVec {
        &self.points[&face]
    }

    /// Full validation: every face present, every point interior to its
    /// face; affine independence along every maximal chain follows but is
    /// checked anyway. Returns all violations, not just the first.
    pub fn validate(&self, lattice: &FaceLattice) -> Result<(), Vec<MarkingError>> {
        let mut errors = Vec::new();
        for face in &lattice.faces {
            match self.points.get(&face.id) {
                None => errors.push(MarkingError::MissingFace(face.id)),
                Some(pt) => {
                    if !lattice.relative_interior_contains(face.id, pt) {
                        errors.push(MarkingError::PointNotInteriorToFace(face.id));
                    }
                }
            }
        }
        if errors.is_empty() {
            for chain in &lattice.maximal_chains {
                let lifted: Vec<RatVec> = chain
                    .faces
                    .iter()
                    .map(|&f| lift_one(self.point(f)))
                    .collect();
                if rank_of(&lifted) != lattice.dim() + 1 {
                    errors.push(MarkingError::DependentChainWeights(chain.faces.clone()));
                }
            }
        }
        if errors.is_empty() {
            Ok(())
        } else {
            Err(errors)
        }
    }

    pub fn is_integral(&self) -> bool {
        self.points
            .values()
            .all(|p| p.iter().all(|c| c.denom().is_one()))
    }
}

fn lift_one(point: &[Rat]) -> RatVec {
    let mut v = Vec::with_capacity(point.len() + 1);
    v.push(Rat::one());
    v.extend_from_slice(point);
    v
}

/// The primitive integer vector on the ray through `(1, point)`: clear the
/// denominators. Primitivity is automatic because the cleared level is the
/// minimal one.
pub fn lifted_primitive_ray(point: &[Rat]) -> Vec<i64> {
    let mut q = BigInt::one();
    for c in point {
        q = q.lcm(c.denom());
    }
    let q64 = i64::try_from(q).expect("marking denominator out of range");
    let mut ray = Vec::with_capacity(point.len() + 1);
    ray.push(q64);
    for c in point {
        ray.push(i64::try_from((c * rint(q64)).to_integer()).expect("ray out of range"));
    }
    ray
}

/// Degree and lifted weight of one extremal function.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Extremal {
    pub degree: i64,
    /// `(d, d * u)` as an integer vector of length `dim + 1`. This is the
    /// negated eigenfunction weight, so the stored level is positive.
    pub lifted: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtremalData {
    pub entries: BTreeMap<FaceId, Extremal>,
}

impl ExtremalData {
    pub fn degree(&self, face: FaceId) -> i64 {
        self.entries[&face].degree
    }

    pub fn lifted(&self, face: FaceId) -> &Vec<i64> {
        &self.entries[&face].lifted
    }

    pub fn lifted_rat(&self, face: FaceId) -> RatVec {
        self.entries[&face].lifted.iter().map(|&c| rint(c)).collect()
    }

    /// All extremal functions of degree one, i.e. the setting where the
    /// triangulation has lattice vertices and the shadow analysis applies.
    pub fn is_integral(&self) -> bool {
        self.entries.values().all(|e| e.degree == 1)
    }
}

/// Minimal degrees clearing the marking denominators, times optional
/// positive multipliers. `lifted = (d, d * u)` is integral by construction.
pub fn extremal_data(
    marking: &Marking,
    multipliers: &BTreeMap<FaceId, i64>,
) -> Result<ExtremalData, MarkingError> {
    let mut entries = BTreeMap::new();
    for (&face, point) in &marking.points {
        let mult = *multipliers.get(&face).unwrap_or(&1);
        if mult <= 0 {
            return Err(MarkingError::InvalidMultiplier(face));
        }
        let mut q = BigInt::one();
        for c in point {
            q = q.lcm(c.denom());
        }
        let q = i64::try_from(q).expect("marking denominator out of range");
        let degree = q * mult;
        let mut lifted = Vec::with_capacity(point.len() + 1);
        lifted.push(degree);
        for c in point {
            let scaled = (c * rint(degree)).to_integer();
            lifted.push(i64::try_from(scaled).expect("lifted weight out of range"));
        }
        entries.insert(face, Extremal { degree, lifted });
    }
    Ok(ExtremalData { entries })
}

/// The triangulation of the polytope indexed by maximal chains, together
/// with the marking it came from.
#[derive(Debug, Clone)]
pub struct FlagTriangulation {
    pub lattice: FaceLattice,
    pub marking: Marking,
    /// Simplex vertices per maximal chain, in chain order (vertex first).
    pub simplices: Vec<Vec<RatVec>>,
    /// Exact membership testers for the cones over the maximal simplices,
    /// aligned with the chains.
    pub cone_testers: Vec<ConeTester>,
}

impl FlagTriangulation {
    pub fn chains(&self) -> &[Chain] {
        &self.lattice.maximal_chains
    }

    pub fn simplex(&self, chain_idx: usize) -> &[RatVec] {
        &self.simplices[chain_idx]
    }

    /// Indices of all maximal chains whose closed simplex contains the point.
    pub fn locate(&self, point: &[Rat]) -> Result<Vec<usize>, MarkingError> {
        if !self.lattice.hrep().contains_rat(point) {
            return Err(MarkingError::PointOutsidePolytope);
        }
        let lifted = lifted_primitive_ray(point);
        let hits: Vec<usize> = self
            .cone_testers
            .iter()
            .enumerate()
            .filter(|(_, t)| t.contains(&lifted))
            .map(|(i, _)| i)
            .collect();
        debug_assert!(!hits.is_empty(), "triangulation covers the polytope");
        debug_assert!(hits.iter().all(|&i| {
            barycentric_coordinates(&self.simplices[i], point)
                .map(|(_, c)| c)
                .unwrap_or(false)
        }));
        Ok(hits)
    }

    /// Exact Euclidean volume of one maximal simplex.
    pub fn simplex_volume(&self, chain_idx: usize) -> Rat {
        let simplex = &self.simplices[chain_idx];
        let base = &simplex[0];
        let rows: Vec<RatVec> = simplex[1..].iter().map(|v| vec_sub(v, base)).collect();
        let det = determinant(&rows).expect("simplex difference matrix is square");
        let mut fact = rint(1);
        for k in 2..=rows.len() as i64 {
            fact *= rint(k);
        }
        let v = det / fact;
        if v.is_negative() {
            -v
        } else {
            v
        }
    }
}

/// Builds the triangulation and verifies it: volumes partition the polytope
/// volume exactly, and maximal simplices pairwise intersect in the simplex
/// of their common subchain.
pub fn build_triangulation(
    marking: &Marking,
    lattice: &FaceLattice,
) -> Result<FlagTriangulation, Vec<MarkingError>> {
    marking.validate(lattice)?;
    let simplices: Vec<Vec<RatVec>> = lattice
        .maximal_chains
        .iter()
        .map(|c| c.faces.iter().map(|&f| marking.point(f).clone()).collect())
        .collect();
    let cone_testers: Vec<ConeTester> = simplices
        .iter()
        .map(|simplex| {
            let rays: Vec<Vec<i64>> = simplex.iter().map(|v| lifted_primitive_ray(v)).collect();
            ConeTester::new(rays, lattice.dim() + 1)
                .expect("validated marking gives independent chain rays")
        })
        .collect();
    let tri = FlagTriangulation {
        lattice: lattice.clone(),
        marking: marking.clone(),
        simplices,
        cone_testers,
    };

    let total: Rat = (0..tri.simplices.len())
        .map(|i| tri.simplex_volume(i))
        .sum();
    let expected = lattice.polytope.volume();
    if total != expected {
        return Err(vec![MarkingError::CoverageFailure {
            got: total.to_string(),
            expected: expected.to_string(),
        }]);
    }

    for i in 0..tri.simplices.len() {
        for j in i + 1..tri.simplices.len() {
            if !simplices_meet_in_common_face(&tri, i, j) {
                return Err(vec![MarkingError::OverlapFailure(
                    lattice.maximal_chains[i].faces.clone(),
                    lattice.maximal_chains[j].faces.clone(),
                )]);
            }
        }
    }
    Ok(tri)
}

/// Exact check that two maximal simplices intersect in the simplex of their
/// shared subchain: enumerate the vertices of the intersection polytope and
/// compare with the shared marking points.
fn simplices_meet_in_common_face(tri: &FlagTriangulation, i: usize, j: usize) -> bool {
    let dim = tri.lattice.dim();
    let mut planes = simplex_hyperplanes(&tri.simplices[i]);
    planes.extend(simplex_hyperplanes(&tri.simplices[j]));

    let mut vertices: BTreeSet<RatVec> = BTreeSet::new();
    let mut subset: Vec<usize> = (0..dim).collect();
    loop {
        if let Some(p) = solve_planes(&planes, &subset, dim) {
            if planes.iter().all(|(w, off)| {
                let s: Rat = w.iter().zip(&p).map(|(a, b)| a * b).sum::<Rat>() + off;
                !s.is_negative()
            }) {
                vertices.insert(p);
            }
        }
        let k = planes.len();
        let mut t = dim;
        let mut done = true;
        while t > 0 {
            t -= 1;
            if subset[t] < k - dim + t {
                subset[t] += 1;
                for u in t + 1..dim {
                    subset[u] = subset[u - 1] + 1;
                }
                done = false;
                break;
            }
        }
        if done {
            break;
        }
    }

    let shared = tri.lattice.maximal_chains[i].intersect(&tri.lattice.maximal_chains[j]);
    let expected: BTreeSet<RatVec> = shared
        .faces
        .iter()
        .map(|&f| tri.marking.point(f).clone())
        .collect();
    vertices == expected
}

/// Inward halfspaces `(normal, offset)` with `<normal, x> + offset >= 0` of a
/// full-dimensional simplex with rational vertices.
fn simplex_hyperplanes(simplex: &[RatVec]) -> Vec<(RatVec, Rat)> {
    let dim = simplex[0].len();
    let mut out = Vec::with_capacity(simplex.len());
    for drop in 0..simplex.len() {
        let rest: Vec<&RatVec> = simplex
            .iter()
            .enumerate()
            .filter(|(k, _)| *k != drop)
            .map(|(_, v)| v)
            .collect();
        let diffs: Vec<RatVec> = rest[1..].iter().map(|v| vec_sub(v, rest[0])).collect();
        let normal = row_space_kernel_vector(&diffs, dim)
            .expect("simplex facet spans a hyperplane");
        let offset: Rat = -normal
            .iter()
            .zip(rest[0].iter())
            .map(|(a, b)| a * b)
            .sum::<Rat>();
        let s: Rat = normal
            .iter()
            .zip(&simplex[drop])
            .map(|(a, b)| a * b)
            .sum::<Rat>()
            + &offset;
        if s.is_negative() {
            out.push((normal.iter().map(|c| -c).collect(), -offset));
        } else {
            out.push((normal, offset));
        }
    }
    out
}

fn solve_planes(planes: &[(RatVec, Rat)], subset: &[usize], dim: usize) -> Option<RatVec> {
    // basis columns of the square system <w_r, x> = -off_r
    let basis: Vec<RatVec> = (0..dim)
        .map(|col| subset.iter().map(|&r| planes[r].0[col].clone()).collect())
        .collect();
    let target: RatVec = subset.iter().map(|&r| -planes[r].1.clone()).collect();
    solve_in_basis(&basis, &target).ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, rvec};
    use crate::polytope::{segment, simplex6, square2, unit_square};

    fn face_by_vertices(l: &FaceLattice, coords: &[&[i64]]) -> FaceId {
        let want: BTreeSet<Vec<i64>> = coords.iter().map(|c| c.to_vec()).collect();
        l.faces
            .iter()
            .find(|f| {
                let got: BTreeSet<Vec<i64>> = f
                    .vertex_set
                    .iter()
                    .map(|&v| l.vertices()[v].clone())
                    .collect();
                got == want
            })
            .expect("face not found")
            .id
    }

    #[test]
    fn barycentric_marking_values() {
        let l = unit_square().face_lattice();
        let m = Marking::barycentric(&l);
        assert_eq!(m.point(l.top), &vec![rat(1, 2), rat(1, 2)]);
        let bottom = face_by_vertices(&l, &[&[0, 0], &[1, 0]]);
        assert_eq!(m.point(bottom), &vec![rat(1, 2), rint(0)]);
        let v = face_by_vertices(&l, &[&[1, 1]]);
        assert_eq!(m.point(v), &rvec(&[1, 1]));

        let l6 = simplex6().face_lattice();
        let m6 = Marking::barycentric(&l6);
        let facet = face_by_vertices(&l6, &[&[0, 0, 0], &[0, 6, 0], &[0, 0, 6]]);
        assert_eq!(m6.point(facet), &rvec(&[0, 2, 2]));

        let ls = segment().face_lattice();
        let ms = Marking::barycentric(&ls);
        assert_eq!(ms.point(ls.top), &vec![rat(1, 2)]);
    }

    #[test]
    fn barycentric_marking_validates() {
        for p in [unit_square(), square2(), simplex6()] {
            let l = p.face_lattice();
            assert!(Marking::barycentric(&l).validate(&l).is_ok());
        }
    }

    #[test]
    fn validation_catches_boundary_and_missing() {
        let l = unit_square().face_lattice();
        let mut m = Marking::barycentric(&l);
        m.points.insert(l.top, vec![rint(0), rat(1, 2)]);
        let errs = m.validate(&l).unwrap_err();
        assert!(errs.contains(&MarkingError::PointNotInteriorToFace(l.top)));

        let mut m2 = Marking::barycentric(&l);
        let bottom = face_by_vertices(&l, &[&[0, 0], &[1, 0]]);
        m2.points.remove(&bottom);
        let errs2 = m2.validate(&l).unwrap_err();
        assert!(errs2.contains(&MarkingError::MissingFace(bottom)));
    }

    #[test]
    fn extremal_degrees_and_weights() {
        let l = unit_square().face_lattice();
        let m = Marking::barycentric(&l);
        let canonical = extremal_data(&m, &BTreeMap::new()).unwrap();
        assert_eq!(canonical.degree(l.top), 2);
        assert_eq!(canonical.lifted(l.top), &vec![2, 1, 1]);

        let doubled = extremal_data(&m, &BTreeMap::from([(l.top, 2)])).unwrap();
        assert_eq!(doubled.degree(l.top), 4);
        assert_eq!(doubled.lifted(l.top), &vec![4, 2, 2]);
        // vertices have degree one either way
        let v = face_by_vertices(&l, &[&[0, 0]]);
        assert_eq!(doubled.degree(v), 1);

        let l2 = square2().face_lattice();
        let m2 = Marking::integral(&l2).unwrap();
        let e2 = extremal_data(&m2, &BTreeMap::new()).unwrap();
        assert!(e2.is_integral());
        assert_eq!(e2.lifted(l2.top), &vec![1, 1, 1]);
    }

    #[test]
    fn integral_marking_of_square2() {
        let l = square2().face_lattice();
        let m = Marking::integral(&l).unwrap();
        assert!(m.validate(&l).is_ok());
        assert_eq!(m.point(l.top), &rvec(&[1, 1]));
        let bottom = face_by_vertices(&l, &[&[0, 0], &[2, 0]]);
        assert_eq!(m.point(bottom), &rvec(&[1, 0]));
        // the unit square has no interior lattice point on its edges
        let l1 = unit_square().face_lattice();
        assert!(matches!(
            Marking::integral(&l1),
            Err(MarkingError::NoInteriorLatticePoint(_))
        ));
    }

    #[test]
    fn triangulation_of_unit_square() {
        let l = unit_square().face_lattice();
        let m = Marking::barycentric(&l);
        let t = build_triangulation(&m, &l).unwrap();
        assert_eq!(t.simplices.len(), 8);
        for i in 0..8 {
            assert_eq!(t.simplex_volume(i), rat(1, 8));
        }
    }

    #[test]
    fn triangulation_of_square2_integral() {
        let l = square2().face_lattice();
        let m = Marking::integral(&l).unwrap();
        let t = build_triangulation(&m, &l).unwrap();
        assert_eq!(t.simplices.len(), 8);
        // every maximal simplex has the center as its top marking point
        for s in &t.simplices {
            assert_eq!(s.last().unwrap(), &rvec(&[1, 1]));
        }
    }

    #[test]
    fn triangulation_of_simplex6() {
        let l = simplex6().face_lattice();
        let m = Marking::barycentric(&l);
        let t = build_triangulation(&m, &l).unwrap();
        assert_eq!(t.simplices.len(), 24);
        let total: Rat = (0..24).map(|i| t.simplex_volume(i)).sum();
        assert_eq!(total, rint(36));
    }

    #[test]
    fn locate_examples() {
        let l = unit_square().face_lattice();
        let m = Marking::barycentric(&l);
        let t = build_triangulation(&m, &l).unwrap();

        let hits = t.locate(&[rat(1, 3), rint(0)]).unwrap();
        assert_eq!(hits.len(), 1);
        let chain = &t.chains()[hits[0]];
        let v0 = face_by_vertices(&l, &[&[0, 0]]);
        let bottom = face_by_vertices(&l, &[&[0, 0], &[1, 0]]);
        assert_eq!(chain.faces, vec![v0, bottom, l.top]);

        let all = t.locate(&[rat(1, 2), rat(1, 2)]).unwrap();
        assert_eq!(all.len(), 8);

        let two = t.locate(&[rat(1, 4), rat(1, 4)]).unwrap();
        assert_eq!(two.len(), 2);
        for &h in &two {
            assert!(t.chains()[h].contains(v0));
        }

        assert_eq!(
            t.locate(&[rint(2), rint(2)]),
            Err(MarkingError::PointOutsidePolytope)
        );
    }

    #[test]
    fn locate_marked_point_gives_chains_through_face() {
        for p in [unit_square(), square2()] {
            let l = p.face_lattice();
            let m = Marking::barycentric(&l);
            let t = build_triangulation(&m, &l).unwrap();
            for face in &l.faces {
                let hits = t.locate(m.point(face.id)).unwrap();
                assert_eq!(hits, l.chains_through(face.id), "face {}", face.id);
            }
        }
    }

    #[test]
    fn chain_weights_form_bases() {
        let l = unit_square().face_lattice();
        let m = Marking::barycentric(&l);
        let e = extremal_data(&m, &BTreeMap::from([(l.top, 2)])).unwrap();
        for chain in &l.maximal_chains {
            let rows: Vec<RatVec> = chain.faces.iter().map(|&f| e.lifted_rat(f)).collect();
            assert_eq!(rank_of(&rows), l.dim() + 1);
        }
    }

    #[test]
    fn segment_triangulation_meets_at_midpoint() {
        let l = segment().face_lattice();
        let m = Marking::barycentric(&l);
        let t = build_triangulation(&m, &l).unwrap();
        assert_eq!(t.simplices.len(), 2);
        let hits = t.locate(&[rat(1, 2)]).unwrap();
        assert_eq!(hits.len(), 2);
    }
}
