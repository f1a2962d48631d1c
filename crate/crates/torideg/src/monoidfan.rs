//! Chain monoids with Hilbert bases, the fan of monoids carried by the
//! triangulation, degree-one submonoids and the component report of the
//! degenerate variety.
//!
//! Every cone here is simplicial: the rays are the primitive lattice vectors
//! through the lifted marking points of one chain of faces. Hilbert bases
//! are computed by enumerating the lattice points of the half-open
//! fundamental parallelepiped and discarding reducible elements; a
//! brute-force irreducibility scan in the test suite double-checks the
//! result.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::One;
use thiserror::Error;

use crate::exact::{determinant, rank_of, rint, ConeTester, ExactError, RatVec};
use crate::polytope::{Chain, FaceId, GradedPoint};
use crate::stratify::{ExtremalData, FlagTriangulation, Marking};
use crate::valuation::{quasi_valuation_point, QuasiValue, ValuationError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FanError {
    #[error("fan condition fails for chains {chain_a:?} and {chain_b:?} at {point}")]
    FanConditionViolation {
        chain_a: Vec<FaceId>,
        chain_b: Vec<FaceId>,
        point: GradedPoint,
    },
    #[error("monoid isomorphism fails at {point}: {detail}")]
    BijectionFailure { point: GradedPoint, detail: String },
    #[error("operation requires an integral marking with degree-one extremal data")]
    InapplicableMarking,
    #[error(transparent)]
    Valuation(#[from] ValuationError),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

/// Primitive integer ray generators, one per face of the chain, in chain
/// order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplicialCone {
    pub rays: Vec<Vec<i64>>,
}

impl SimplicialCone {
    pub fn rank(&self) -> usize {
        let rows: Vec<RatVec> = self.rays.iter().map(|r| int_rat(r)).collect();
        rank_of(&rows)
    }

    pub fn ambient(&self, fallback: usize) -> usize {
        self.rays.first().map_or(fallback, |r| r.len())
    }

    pub fn tester(&self) -> ConeTester {
        ConeTester::new(self.rays.clone(), self.ambient(1))
            .expect("chain rays are linearly independent")
    }

    /// Closed membership: the point is a nonnegative rational combination of
    /// the rays.
    pub fn contains(&self, p: &GradedPoint) -> bool {
        if p.is_origin() {
            return true;
        }
        if self.rays.is_empty() {
            return false;
        }
        self.tester().contains(&p.lifted())
    }
}

fn int_rat(v: &[i64]) -> RatVec {
    v.iter().map(|&c| rint(c)).collect()
}

/// The primitive generator of the ray through `(1, u_sigma)` for each face
/// of the chain: clear the denominators of the marked point.
pub fn chain_cone(chain: &Chain, marking: &Marking) -> SimplicialCone {
    let rays = chain
        .faces
        .iter()
        .map(|&f| crate::stratify::lifted_primitive_ray(marking.point(f)))
        .collect();
    SimplicialCone { rays }
}

/// One chain's monoid: the weight-monoid points inside the chain's cone.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainMonoid {
    pub chain: Chain,
    pub cone: SimplicialCone,
    /// The unique minimal generating set, sorted by (level, point).
    pub hilbert_basis: Vec<GradedPoint>,
    /// Lattice index of the sublattice spanned by the rays: the number of
    /// lattice points in the half-open fundamental parallelepiped.
    pub index: i64,
}

impl ChainMonoid {
    pub fn contains(&self, p: &GradedPoint) -> bool {
        self.cone.contains(p)
    }
}

/// Membership of a weight-monoid point in one chain's monoid.
pub fn monoid_membership(p: &GradedPoint, chain: &Chain, marking: &Marking) -> bool {
    chain_cone(chain, marking).contains(p)
}

/// Hilbert basis of the saturated monoid of a simplicial cone: ray
/// primitives plus the irreducible lattice points of the half-open
/// fundamental parallelepiped.
pub fn hilbert_basis(chain: &Chain, cone: &SimplicialCone) -> ChainMonoid {
    if cone.rays.is_empty() {
        return ChainMonoid {
            chain: chain.clone(),
            cone: cone.clone(),
            hilbert_basis: Vec::new(),
            index: 1,
        };
    }
    let tester = cone.tester();
    let box_points = parallelepiped_points(cone, &tester);
    let index = box_points.len() as i64; // includes the origin
    let mut candidates: BTreeSet<GradedPoint> = cone
        .rays
        .iter()
        .map(|r| GradedPoint::new(r[0], r[1..].to_vec()))
        .collect();
    for p in box_points {
        if !p.is_origin() {
            candidates.insert(p);
        }
    }
    let basis: Vec<GradedPoint> = candidates
        .iter()
        .filter(|h| {
            !candidates.iter().any(|c| {
                if c == *h {
                    return false;
                }
                let diff: Vec<i64> = h
                    .lifted()
                    .iter()
                    .zip(c.lifted())
                    .map(|(a, b)| a - b)
                    .collect();
                diff.iter().any(|&x| x != 0) && diff[0] >= 0 && tester.contains(&diff)
            })
        })
        .cloned()
        .collect();
    ChainMonoid { chain: chain.clone(), cone: cone.clone(), hilbert_basis: basis, index }
}

/// Lattice points of `{ sum t_i r_i : 0 <= t_i < 1 }`, origin included.
fn parallelepiped_points(cone: &SimplicialCone, tester: &ConeTester) -> Vec<GradedPoint> {
    let dim = cone.rays[0].len();
    let lo: Vec<i64> = (0..dim)
        .map(|j| cone.rays.iter().map(|r| r[j].min(0)).sum())
        .collect();
    let hi: Vec<i64> = (0..dim)
        .map(|j| cone.rays.iter().map(|r| r[j].max(0)).sum())
        .collect();
    let mut out = Vec::new();
    let mut cur = lo.clone();
    loop {
        if tester.in_fundamental_box(&cur) {
            out.push(GradedPoint::new(cur[0], cur[1..].to_vec()));
        }
        let mut i = dim;
        loop {
            if i == 0 {
                out.sort();
                return out;
            }
            i -= 1;
            if cur[i] < hi[i] {
                cur[i] += 1;
                break;
            }
            cur[i] = lo[i];
        }
    }
}

/// The fan of monoids over all maximal chains, verified up to a level
/// bound: the fan condition on every pair, and the weight-side bijection of
/// quasi-valuation images with monoid elements in both directions.
#[derive(Debug, Clone)]
pub struct MonoidFan {
    pub monoids: Vec<ChainMonoid>,
    pub level_bound: i64,
    /// Truncated member sets, aligned with `monoids`.
    pub members: Vec<BTreeSet<GradedPoint>>,
}

impl MonoidFan {
    pub fn monoid(&self, chain_idx: usize) -> &ChainMonoid {
        &self.monoids[chain_idx]
    }
}

pub fn fan_of_monoids(
    tri: &FlagTriangulation,
    extremal: &ExtremalData,
    level_bound: i64,
) -> Result<MonoidFan, FanError> {
    let marking = &tri.marking;
    let chains = tri.chains();
    let monoids: Vec<ChainMonoid> = chains
        .iter()
        .map(|c| hilbert_basis(c, &chain_cone(c, marking)))
        .collect();

    let truncation = tri.lattice.polytope.weight_monoid(level_bound);
    let members: Vec<BTreeSet<GradedPoint>> = tri
        .cone_testers
        .iter()
        .map(|t| {
            truncation
                .iter()
                .filter(|p| p.is_origin() || t.contains(&p.lifted()))
                .cloned()
                .collect()
        })
        .collect();

    // fan condition: membership in two chains is membership in the
    // intersection chain
    let mut subchain_members: BTreeMap<Vec<FaceId>, BTreeSet<GradedPoint>> = BTreeMap::new();
    for i in 0..chains.len() {
        for j in i + 1..chains.len() {
            let shared = chains[i].intersect(&chains[j]);
            let shared_set = subchain_members.entry(shared.faces.clone()).or_insert_with(|| {
                let tester = chain_cone(&shared, marking).tester();
                truncation
                    .iter()
                    .filter(|p| p.is_origin() || tester.contains(&p.lifted()))
                    .cloned()
                    .collect()
            });
            let both: BTreeSet<GradedPoint> =
                members[i].intersection(&members[j]).cloned().collect();
            if &both != shared_set {
                let point = both
                    .symmetric_difference(shared_set)
                    .next()
                    .cloned()
                    .unwrap();
                return Err(FanError::FanConditionViolation {
                    chain_a: chains[i].faces.clone(),
                    chain_b: chains[j].faces.clone(),
                    point,
                });
            }
        }
    }

    // the map from quasi-valuation images back to weights is a bijection on
    // the truncation
    let dim = tri.lattice.dim();
    let mut values: BTreeMap<GradedPoint, QuasiValue> = BTreeMap::new();
    let mut seen: BTreeMap<QuasiValue, GradedPoint> = BTreeMap::new();
    for s in &truncation {
        let value = quasi_valuation_point(s, tri, extremal)?;
        let back = value.reconstruct(extremal, dim);
        if back.as_ref() != Some(s) {
            return Err(FanError::BijectionFailure {
                point: s.clone(),
                detail: "weight reconstruction does not return the input".into(),
            });
        }
        // support lies in a chain whose monoid contains the point
        let supp = value.support();
        let ok = chains.iter().enumerate().any(|(ci, c)| {
            supp.iter().all(|f| c.contains(*f)) && members[ci].contains(s)
        });
        if !ok {
            return Err(FanError::BijectionFailure {
                point: s.clone(),
                detail: "support is not carried by a containing chain".into(),
            });
        }
        if let Some(prev) = seen.insert(value.clone(), s.clone()) {
            if &prev != s {
                return Err(FanError::BijectionFailure {
                    point: s.clone(),
                    detail: format!("image collides with {prev}"),
                });
            }
        }
        values.insert(s.clone(), value);
    }
    // and conversely each truncated monoid element has its value supported
    // on that chain
    for (ci, member_set) in members.iter().enumerate() {
        for p in member_set {
            let supp = values[p].support();
            if !supp.iter().all(|f| chains[ci].contains(*f)) {
                return Err(FanError::BijectionFailure {
                    point: p.clone(),
                    detail: format!("value escapes chain {:?}", chains[ci].faces),
                });
            }
        }
    }

    Ok(MonoidFan { monoids, level_bound, members })
}

/// The degree-one generators of one chain's monoid: `(1, eta)` for every
/// lattice point of the chain's simplex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeOneSubmonoid {
    pub chain: Chain,
    pub generators: Vec<GradedPoint>,
}

pub fn degree_one_submonoid(chain: &Chain, tri: &FlagTriangulation) -> DegreeOneSubmonoid {
    let simplex: Vec<RatVec> = chain
        .faces
        .iter()
        .map(|&f| tri.marking.point(f).clone())
        .collect();
    let generators = scaled_simplex_lattice_points(&simplex, 1)
        .into_iter()
        .map(|eta| GradedPoint::new(1, eta))
        .collect();
    DegreeOneSubmonoid { chain: chain.clone(), generators }
}

/// Lattice points of `scale * conv(simplex)`, exact, sorted: integer points
/// whose lift `(scale, point)` lies in the cone over the simplex.
pub fn scaled_simplex_lattice_points(simplex: &[RatVec], scale: i64) -> Vec<Vec<i64>> {
    let dim = simplex[0].len();
    let rays: Vec<Vec<i64>> = simplex
        .iter()
        .map(|v| crate::stratify::lifted_primitive_ray(v))
        .collect();
    let tester = ConeTester::new(rays, dim + 1).expect("simplex vertices are independent");
    let s = rint(scale);
    let scaled: Vec<RatVec> = simplex
        .iter()
        .map(|v| v.iter().map(|c| c * &s).collect())
        .collect();
    let lo: Vec<i64> = (0..dim)
        .map(|j| {
            scaled
                .iter()
                .map(|v| v[j].ceil().to_integer())
                .min()
                .unwrap()
        })
        .map(|b| i64::try_from(b).unwrap())
        .collect();
    let hi: Vec<i64> = (0..dim)
        .map(|j| {
            scaled
                .iter()
                .map(|v| v[j].floor().to_integer())
                .max()
                .unwrap()
        })
        .map(|b| i64::try_from(b).unwrap())
        .collect();
    let mut out = Vec::new();
    if lo.iter().zip(&hi).any(|(l, h)| l > h) {
        return out;
    }
    let mut cur = lo.clone();
    let mut lifted = vec![scale];
    lifted.extend_from_slice(&cur);
    loop {
        lifted[0] = scale;
        lifted[1..].copy_from_slice(&cur);
        if tester.contains(&lifted) {
            out.push(cur.clone());
        }
        let mut i = dim;
        loop {
            if i == 0 {
                out.sort();
                return out;
            }
            i -= 1;
            if cur[i] < hi[i] {
                cur[i] += 1;
                break;
            }
            cur[i] = lo[i];
        }
    }
}

/// Comparison of a chain monoid truncation with the span of its degree-one
/// generators. Only meaningful for integral markings with degree-one
/// extremal data.
#[derive(Debug, Clone)]
pub struct SaturationReport {
    pub chain: Chain,
    pub level_bound: i64,
    pub equal: bool,
    /// Monoid elements missing from the degree-one span, each with the
    /// smallest multiple `k <= dim + 1` whose scaling lands in the span.
    pub missing: Vec<(GradedPoint, Option<i64>)>,
}

pub fn saturation_check(
    chain: &Chain,
    tri: &FlagTriangulation,
    extremal: &ExtremalData,
    level_bound: i64,
) -> Result<SaturationReport, FanError> {
    if !extremal.is_integral() || !tri.marking.is_integral() {
        return Err(FanError::InapplicableMarking);
    }
    let n = tri.lattice.dim() as i64;
    let simplex: Vec<RatVec> = chain
        .faces
        .iter()
        .map(|&f| tri.marking.point(f).clone())
        .collect();
    let span = degree_one_span(&degree_one_submonoid(chain, tri), (n + 1) * level_bound);
    let mut missing = Vec::new();
    for level in 1..=level_bound {
        for eta in scaled_simplex_lattice_points(&simplex, level) {
            let p = GradedPoint::new(level, eta);
            if !span.contains(&p) {
                let mult = (2..=(n + 1)).find(|&k| span.contains(&p.scale(k)));
                missing.push((p, mult));
            }
        }
    }
    Ok(SaturationReport {
        chain: chain.clone(),
        level_bound,
        equal: missing.is_empty(),
        missing,
    })
}

/// All sums of degree-one generators up to the level bound, by dynamic
/// programming level by level.
pub fn degree_one_span(sub: &DegreeOneSubmonoid, level_bound: i64) -> BTreeSet<GradedPoint> {
    let mut span: BTreeSet<GradedPoint> = BTreeSet::new();
    let mut frontier: BTreeSet<GradedPoint> = sub.generators.iter().cloned().collect();
    for _ in 1..=level_bound {
        span.extend(frontier.iter().cloned());
        let mut next = BTreeSet::new();
        for p in &frontier {
            for g in &sub.generators {
                let q = p.add(g);
                if q.level <= level_bound {
                    next.insert(q);
                }
            }
        }
        frontier = next;
    }
    span
}

/// One line of the component report for the degenerate variety.
#[derive(Debug, Clone)]
pub struct ComponentRecord {
    pub chain: Chain,
    /// Rank of the group generated by the chain monoid.
    pub rank: usize,
    pub index: i64,
    pub hilbert_size: usize,
    /// The component is the toric variety of a saturated monoid; checked
    /// extensionally: the Hilbert basis regenerates the truncated monoid.
    pub hilbert_generates_truncation: bool,
    /// Whether all Hilbert generators live in level one, i.e. the degree-one
    /// submonoid is the whole chain monoid.
    pub degree_one_equals_monoid: bool,
}

pub fn component_report(fan: &MonoidFan) -> Vec<ComponentRecord> {
    fan.monoids
        .iter()
        .zip(&fan.members)
        .map(|(m, member_set)| {
            let generated = span_of(&m.hilbert_basis, fan.level_bound);
            let truncation: BTreeSet<GradedPoint> = member_set
                .iter()
                .filter(|p| !p.is_origin())
                .cloned()
                .collect();
            ComponentRecord {
                chain: m.chain.clone(),
                rank: m.cone.rank(),
                index: m.index,
                hilbert_size: m.hilbert_basis.len(),
                hilbert_generates_truncation: truncation.is_subset(&generated),
                degree_one_equals_monoid: m.hilbert_basis.iter().all(|h| h.level == 1),
            }
        })
        .collect()
}

/// Nonzero nonnegative combinations of the given points up to a level bound.
pub fn span_of(generators: &[GradedPoint], level_bound: i64) -> BTreeSet<GradedPoint> {
    let mut span: BTreeSet<GradedPoint> = BTreeSet::new();
    let mut frontier: BTreeSet<GradedPoint> = generators
        .iter()
        .filter(|g| g.level <= level_bound)
        .cloned()
        .collect();
    while !frontier.is_empty() {
        let mut next = BTreeSet::new();
        for p in &frontier {
            if span.insert(p.clone()) {
                for g in generators {
                    let q = p.add(g);
                    if q.level <= level_bound && !span.contains(&q) {
                        next.insert(q);
                    }
                }
            }
        }
        frontier = next;
    }
    span
}

/// Determinant of the ray matrix; only meaningful for maximal chains.
pub fn ray_determinant(cone: &SimplicialCone) -> Option<i64> {
    let k = cone.rays.len();
    if k == 0 || cone.rays.iter().any(|r| r.len() != k) {
        return None;
    }
    let rows: Vec<RatVec> = cone.rays.iter().map(|r| int_rat(r)).collect();
    let det = determinant(&rows).ok()?;
    if !det.denom().is_one() {
        return None;
    }
    i64::try_from(det.to_integer()).ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use crate::polytope::{square2, unit_square, FaceLattice};
    use crate::stratify::{build_triangulation, extremal_data};

    fn face_with_vertices(l: &FaceLattice, coords: &[&[i64]]) -> FaceId {
        let want: BTreeSet<Vec<i64>> = coords.iter().map(|c| c.to_vec()).collect();
        l.faces
            .iter()
            .find(|f| {
                let got: BTreeSet<Vec<i64>> =
                    f.vertex_set.iter().map(|&v| l.vertices()[v].clone()).collect();
                got == want
            })
            .unwrap()
            .id
    }

    /// 2x2 square, integral marking except the top edge marked at (4/3, 2).
    pub fn modified_square2() -> (FaceLattice, Marking) {
        let l = square2().face_lattice();
        let mut m = Marking::integral(&l).unwrap();
        let top_edge = face_with_vertices(&l, &[&[0, 2], &[2, 2]]);
        m.points.insert(top_edge, vec![rat(4, 3), rint(2)]);
        (l, m)
    }

    fn gp(level: i64, point: &[i64]) -> GradedPoint {
        GradedPoint::new(level, point.to_vec())
    }

    #[test]
    fn chain_cone_rays() {
        let (l, m) = modified_square2();
        let v22 = face_with_vertices(&l, &[&[2, 2]]);
        let top = face_with_vertices(&l, &[&[0, 2], &[2, 2]]);
        let chain = Chain { faces: vec![v22, top, l.top] };
        let cone = chain_cone(&chain, &m);
        assert_eq!(cone.rays, vec![vec![1, 2, 2], vec![3, 4, 6], vec![1, 1, 1]]);

        let l1 = unit_square().face_lattice();
        let m1 = Marking::barycentric(&l1);
        let v0 = face_with_vertices(&l1, &[&[0, 0]]);
        let bottom = face_with_vertices(&l1, &[&[0, 0], &[1, 0]]);
        let chain1 = Chain { faces: vec![v0, bottom, l1.top] };
        let cone1 = chain_cone(&chain1, &m1);
        assert_eq!(cone1.rays, vec![vec![1, 0, 0], vec![2, 1, 0], vec![2, 1, 1]]);

        let single = Chain { faces: vec![v0] };
        assert_eq!(chain_cone(&single, &m1).rays, vec![vec![1, 0, 0]]);
    }

    #[test]
    fn membership_examples() {
        let (l, m) = modified_square2();
        let v22 = face_with_vertices(&l, &[&[2, 2]]);
        let top = face_with_vertices(&l, &[&[0, 2], &[2, 2]]);
        let chain = Chain { faces: vec![v22, top, l.top] };
        assert!(monoid_membership(&gp(2, &[3, 4]), &chain, &m));
        assert!(!monoid_membership(&gp(1, &[0, 0]), &chain, &m));
        assert!(monoid_membership(&GradedPoint::origin(2), &chain, &m));
        assert!(monoid_membership(&gp(3, &[4, 6]), &chain, &m));
    }

    #[test]
    fn hilbert_basis_unimodular_chain() {
        let l = unit_square().face_lattice();
        let m = Marking::barycentric(&l);
        let v0 = face_with_vertices(&l, &[&[0, 0]]);
        let bottom = face_with_vertices(&l, &[&[0, 0], &[1, 0]]);
        let chain = Chain { faces: vec![v0, bottom, l.top] };
        let cone = chain_cone(&chain, &m);
        assert_eq!(ray_determinant(&cone), Some(1));
        let cm = hilbert_basis(&chain, &cone);
        assert_eq!(cm.index, 1);
        assert_eq!(
            cm.hilbert_basis,
            vec![gp(1, &[0, 0]), gp(2, &[1, 0]), gp(2, &[1, 1])]
        );
    }

    #[test]
    fn hilbert_basis_index_two_chain() {
        let (l, m) = modified_square2();
        let v22 = face_with_vertices(&l, &[&[2, 2]]);
        let top = face_with_vertices(&l, &[&[0, 2], &[2, 2]]);
        let chain = Chain { faces: vec![v22, top, l.top] };
        let cone = chain_cone(&chain, &m);
        assert_eq!(ray_determinant(&cone).map(i64::abs), Some(2));
        let cm = hilbert_basis(&chain, &cone);
        assert_eq!(cm.index, 2);
        assert_eq!(
            cm.hilbert_basis,
            vec![gp(1, &[1, 1]), gp(1, &[2, 2]), gp(2, &[3, 4]), gp(3, &[4, 6])]
        );
    }

    #[test]
    fn hilbert_basis_trivial_chains() {
        let l = unit_square().face_lattice();
        let m = Marking::barycentric(&l);
        let v0 = face_with_vertices(&l, &[&[0, 0]]);
        let single = Chain { faces: vec![v0] };
        let cm = hilbert_basis(&single, &chain_cone(&single, &m));
        assert_eq!(cm.hilbert_basis, vec![gp(1, &[0, 0])]);
        assert_eq!(cm.index, 1);

        let empty = Chain { faces: vec![] };
        let cm0 = hilbert_basis(&empty, &chain_cone(&empty, &m));
        assert!(cm0.hilbert_basis.is_empty());
        assert_eq!(cm0.index, 1);
        assert!(cm0.contains(&GradedPoint::origin(2)));
        assert!(!cm0.contains(&gp(1, &[0, 0])));
    }

    #[test]
    fn fan_of_monoids_on_squares() {
        let l = unit_square().face_lattice();
        let m = Marking::barycentric(&l);
        let tri = build_triangulation(&m, &l).unwrap();
        let e = extremal_data(&m, &BTreeMap::from([(l.top, 2)])).unwrap();
        let fan = fan_of_monoids(&tri, &e, 4).unwrap();
        assert_eq!(fan.monoids.len(), 8);
        assert!(fan.monoids.iter().all(|cm| cm.index == 1));

        let l2 = square2().face_lattice();
        let m2 = Marking::integral(&l2).unwrap();
        let tri2 = build_triangulation(&m2, &l2).unwrap();
        let e2 = extremal_data(&m2, &BTreeMap::new()).unwrap();
        let fan2 = fan_of_monoids(&tri2, &e2, 4).unwrap();
        assert!(fan2.monoids.iter().all(|cm| cm.index == 1));
        assert!(fan2
            .monoids
            .iter()
            .all(|cm| cm.hilbert_basis.iter().all(|h| h.level == 1)));
        for cm in &fan2.monoids {
            assert_eq!(cm.hilbert_basis.len(), 3);
        }
    }

    #[test]
    fn degree_one_generators_examples() {
        let (l, m) = modified_square2();
        let tri = build_triangulation(&m, &l).unwrap();
        let v22 = face_with_vertices(&l, &[&[2, 2]]);
        let top = face_with_vertices(&l, &[&[0, 2], &[2, 2]]);
        let chain = Chain { faces: vec![v22, top, l.top] };
        let sub = degree_one_submonoid(&chain, &tri);
        assert_eq!(sub.generators, vec![gp(1, &[1, 1]), gp(1, &[2, 2])]);

        let l1 = unit_square().face_lattice();
        let m1 = Marking::barycentric(&l1);
        let tri1 = build_triangulation(&m1, &l1).unwrap();
        let v0 = face_with_vertices(&l1, &[&[0, 0]]);
        let bottom = face_with_vertices(&l1, &[&[0, 0], &[1, 0]]);
        let chain1 = Chain { faces: vec![v0, bottom, l1.top] };
        let sub1 = degree_one_submonoid(&chain1, &tri1);
        assert_eq!(sub1.generators, vec![gp(1, &[0, 0])]);

        let l2 = square2().face_lattice();
        let m2 = Marking::integral(&l2).unwrap();
        let tri2 = build_triangulation(&m2, &l2).unwrap();
        let v22b = face_with_vertices(&l2, &[&[2, 2]]);
        let right = face_with_vertices(&l2, &[&[2, 0], &[2, 2]]);
        let chain2 = Chain { faces: vec![v22b, right, l2.top] };
        let sub2 = degree_one_submonoid(&chain2, &tri2);
        assert_eq!(sub2.generators.len(), 3);
    }

    #[test]
    fn saturation_on_square2() {
        let l = square2().face_lattice();
        let m = Marking::integral(&l).unwrap();
        let tri = build_triangulation(&m, &l).unwrap();
        let e = extremal_data(&m, &BTreeMap::new()).unwrap();
        for chain in tri.chains() {
            let rep = saturation_check(chain, &tri, &e, 4).unwrap();
            assert!(rep.equal, "chain {:?}", chain.faces);
        }
    }

    #[test]
    fn saturation_rejects_nonintegral() {
        let l = unit_square().face_lattice();
        let m = Marking::barycentric(&l);
        let tri = build_triangulation(&m, &l).unwrap();
        let e = extremal_data(&m, &BTreeMap::new()).unwrap();
        assert!(matches!(
            saturation_check(&tri.chains()[0].clone(), &tri, &e, 2),
            Err(FanError::InapplicableMarking)
        ));
    }

    #[test]
    fn saturation_trivial_at_level_one() {
        // levels up to one coincide by definition, whatever the chain
        let l = square2().face_lattice();
        let m = Marking::integral(&l).unwrap();
        let tri = build_triangulation(&m, &l).unwrap();
        let e = extremal_data(&m, &BTreeMap::new()).unwrap();
        for chain in tri.chains() {
            assert!(saturation_check(chain, &tri, &e, 1).unwrap().equal);
        }
    }

    #[test]
    fn normality_matches_hilbert_level_criterion_on_simplices() {
        // a simplex polytope is normal iff the Hilbert basis of the cone
        // over its vertices sits entirely in level one
        let simplices = [
            crate::polytope::q_simplex(),
            crate::polytope::simplex6(),
            crate::polytope::segment(),
            crate::polytope::LatticePolytope::new(
                3,
                vec![vec![0, 0, 6], vec![0, 3, 3], vec![2, 2, 2], vec![2, 1, 1]],
            )
            .unwrap(),
        ];
        for p in simplices {
            let rays: Vec<Vec<i64>> = p
                .vertices()
                .iter()
                .map(|v| {
                    let mut r = vec![1i64];
                    r.extend_from_slice(v);
                    r
                })
                .collect();
            let cone = SimplicialCone { rays };
            let dummy = Chain { faces: (0..p.vertices().len()).collect() };
            let cm = hilbert_basis(&dummy, &cone);
            let level_one_only = cm.hilbert_basis.iter().all(|h| h.level == 1);
            let (normal, _) = p.is_normal();
            assert_eq!(level_one_only, normal, "vertices {:?}", p.vertices());
        }
    }

    #[test]
    fn component_records() {
        let (l, m) = modified_square2();
        let tri = build_triangulation(&m, &l).unwrap();
        let e = extremal_data(&m, &BTreeMap::new()).unwrap();
        let fan = fan_of_monoids(&tri, &e, 4).unwrap();
        let report = component_report(&fan);
        assert_eq!(report.len(), 8);
        assert!(report.iter().all(|r| r.rank == 3));
        assert!(report.iter().all(|r| r.hilbert_generates_truncation));
        let v22 = face_with_vertices(&l, &[&[2, 2]]);
        let top = face_with_vertices(&l, &[&[0, 2], &[2, 2]]);
        let flagged = report
            .iter()
            .find(|r| r.chain.faces == vec![v22, top, l.top])
            .unwrap();
        assert_eq!(flagged.index, 2);
        assert!(!flagged.degree_one_equals_monoid);
        let levels: BTreeSet<i64> = fan
            .monoids
            .iter()
            .find(|cm| cm.chain.faces == vec![v22, top, l.top])
            .unwrap()
            .hilbert_basis
            .iter()
            .map(|h| h.level)
            .collect();
        assert!(levels.contains(&2) && levels.contains(&3));
    }

    #[test]
    fn hilbert_matches_bruteforce_scan() {
        // independent oracle: collect all monoid elements up to a level and
        // keep those that are not sums of two nonzero elements
        fn brute(cm: &ChainMonoid, tri: &FlagTriangulation, bound: i64) -> Vec<GradedPoint> {
            let simplex: Vec<RatVec> = cm
                .chain
                .faces
                .iter()
                .map(|&f| tri.marking.point(f).clone())
                .collect();
            let mut elements: Vec<GradedPoint> = Vec::new();
            for level in 1..=bound {
                for eta in scaled_simplex_lattice_points(&simplex, level) {
                    elements.push(GradedPoint::new(level, eta));
                }
            }
            let set: BTreeSet<GradedPoint> = elements.iter().cloned().collect();
            elements
                .iter()
                .filter(|h| {
                    !set.iter().any(|a| {
                        a != *h && a.level <= h.level && {
                            let diff = GradedPoint::new(
                                h.level - a.level,
                                h.point.iter().zip(&a.point).map(|(x, y)| x - y).collect(),
                            );
                            !diff.is_origin() && set.contains(&diff)
                        }
                    })
                })
                .cloned()
                .collect()
        }
        let (l, m) = modified_square2();
        let tri = build_triangulation(&m, &l).unwrap();
        for chain in tri.chains() {
            let cm = hilbert_basis(chain, &chain_cone(chain, &m));
            let max_ray_level = cm.cone.rays.iter().map(|r| r[0]).max().unwrap();
            let bound = (l.dim() as i64 + 1) * max_ray_level;
            let brute_basis = brute(&cm, &tri, bound);
            assert_eq!(cm.hilbert_basis, brute_basis, "chain {:?}", chain.faces);
        }
    }
}
