//! Lattice polytopes: halfspace representation, the face lattice, lattice
//! point enumeration, relative-interior tests and normality checking.

use std::collections::BTreeSet;

use num_integer::Integer;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::exact::{
    affine_dimension, rank_of, rint, row_space_kernel_vector, solve_in_basis, Rat, RatVec,
};

pub type FaceId = usize;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolytopeError {
    #[error("polytope is not full dimensional: affine dimension {actual}, ambient {expected}")]
    NotFullDimensional { expected: usize, actual: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("duplicate vertex {0:?}")]
    DuplicateVertex(Vec<i64>),
    #[error("point {0:?} is not a vertex of the hull of the input")]
    RedundantVertex(Vec<i64>),
    #[error("graded point ({level}, {point:?}) does not lie in the dilated polytope")]
    InvalidGradedPoint { level: i64, point: Vec<i64> },
    #[error("polytope is not normal; non-decomposable witness at level {level}: {point:?}")]
    NotNormal { level: i64, point: Vec<i64> },
}

/// One inequality `<normal, x> + offset >= 0` with primitive integer normal.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Facet {
    pub normal: Vec<i64>,
    pub offset: i64,
}

impl Facet {
    /// Exact evaluation at a rational point of the dilation `m * P`.
    pub fn eval_dilated(&self, point: &[Rat], m: &Rat) -> Rat {
        let mut acc = rint(self.offset) * m;
        for (n, x) in self.normal.iter().zip(point) {
            acc += rint(*n) * x;
        }
        acc
    }

    pub fn eval_int(&self, point: &[i64], m: i64) -> i64 {
        self.offset * m
            + self
                .normal
                .iter()
                .zip(point)
                .map(|(n, x)| n * x)
                .sum::<i64>()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HalfspaceRep {
    pub dim: usize,
    pub facets: Vec<Facet>,
}

impl HalfspaceRep {
    /// Closed membership in `m * P` for an integer point.
    pub fn contains_int(&self, point: &[i64], m: i64) -> bool {
        self.facets.iter().all(|f| f.eval_int(point, m) >= 0)
    }

    pub fn contains_rat(&self, point: &[Rat]) -> bool {
        let one = rint(1);
        self.facets
            .iter()
            .all(|f| !f.eval_dilated(point, &one).is_negative())
    }
}

/// A full-dimensional lattice polytope given by its vertex list.
#[derive(Debug, Clone)]
pub struct LatticePolytope {
    dim: usize,
    vertices: Vec<Vec<i64>>,
    hrep: HalfspaceRep,
}

/// An element `(m, eta)` of the weight monoid: `eta` in `m * P`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GradedPoint {
    pub level: i64,
    pub point: Vec<i64>,
}

impl GradedPoint {
    pub fn new(level: i64, point: Vec<i64>) -> Self {
        GradedPoint { level, point }
    }

    pub fn origin(dim: usize) -> Self {
        GradedPoint { level: 0, point: vec![0; dim] }
    }

    pub fn new_checked(
        level: i64,
        point: Vec<i64>,
        p: &LatticePolytope,
    ) -> Result<Self, PolytopeError> {
        let ok = if level == 0 {
            point.iter().all(|&c| c == 0)
        } else {
            level > 0 && point.len() == p.dim() && p.halfspaces().contains_int(&point, level)
        };
        if ok {
            Ok(GradedPoint { level, point })
        } else {
            Err(PolytopeError::InvalidGradedPoint { level, point })
        }
    }

    pub fn is_origin(&self) -> bool {
        self.level == 0
    }

    /// Flat vector `(m, eta_1, ..., eta_n)` in `Z + M`.
    pub fn lifted(&self) -> Vec<i64> {
        let mut v = Vec::with_capacity(self.point.len() + 1);
        v.push(self.level);
        v.extend_from_slice(&self.point);
        v
    }

    /// The normalized point `eta / m`; `None` for the origin.
    pub fn ratio(&self) -> Option<RatVec> {
        if self.level == 0 {
            return None;
        }
        let m = rint(self.level);
        Some(self.point.iter().map(|&c| rint(c) / &m).collect())
    }

    pub fn add(&self, other: &GradedPoint) -> GradedPoint {
        GradedPoint {
            level: self.level + other.level,
            point: self
                .point
                .iter()
                .zip(&other.point)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn scale(&self, k: i64) -> GradedPoint {
        GradedPoint {
            level: self.level * k,
            point: self.point.iter().map(|c| c * k).collect(),
        }
    }
}

impl std::fmt::Display for GradedPoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {:?})", self.level, self.point)
    }
}

impl LatticePolytope {
    /// Builds and validates: full dimensional, every listed point a vertex.
    pub fn new(dim: usize, mut vertices: Vec<Vec<i64>>) -> Result<Self, PolytopeError> {
        if dim == 0 {
            return Err(PolytopeError::DimensionMismatch("dimension must be >= 1".into()));
        }
        if vertices.iter().any(|v| v.len() != dim) {
            return Err(PolytopeError::DimensionMismatch(format!(
                "all vertices must have {dim} coordinates"
            )));
        }
        vertices.sort();
        for w in vertices.windows(2) {
            if w[0] == w[1] {
                return Err(PolytopeError::DuplicateVertex(w[0].clone()));
            }
        }
        let rat_pts: Vec<RatVec> = vertices.iter().map(|v| int_vec(v)).collect();
        let adim = affine_dimension(&rat_pts);
        if adim != dim {
            return Err(PolytopeError::NotFullDimensional { expected: dim, actual: adim });
        }
        let hrep = enumerate_facets(dim, &vertices);
        // a listed point is a vertex iff its active facet normals span R^dim
        for v in &vertices {
            let active: Vec<RatVec> = hrep
                .facets
                .iter()
                .filter(|f| f.eval_int(v, 1) == 0)
                .map(|f| int_vec(&f.normal))
                .collect();
            if rank_of(&active) != dim {
                return Err(PolytopeError::RedundantVertex(v.clone()));
            }
        }
        Ok(LatticePolytope { dim, vertices, hrep })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Vec<i64>] {
        &self.vertices
    }

    /// Irredundant facet list; the polytope equals the intersection of the
    /// returned halfspaces.
    pub fn halfspaces(&self) -> &HalfspaceRep {
        &self.hrep
    }

    /// All lattice points of `m * P`, sorted lexicographically.
    pub fn lattice_points(&self, m: i64) -> Vec<Vec<i64>> {
        assert!(m >= 1, "dilation factor must be positive");
        let lo: Vec<i64> = (0..self.dim)
            .map(|i| m * self.vertices.iter().map(|v| v[i]).min().unwrap())
            .collect();
        let hi: Vec<i64> = (0..self.dim)
            .map(|i| m * self.vertices.iter().map(|v| v[i]).max().unwrap())
            .collect();
        let mut out = Vec::new();
        let mut cur = lo.clone();
        loop {
            if self.hrep.contains_int(&cur, m) {
                out.push(cur.clone());
            }
            // odometer over the bounding box
            let mut i = self.dim;
            loop {
                if i == 0 {
                    return {
                        out.sort();
                        out
                    };
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

    /// The weight monoid truncated at `level_bound`: the origin plus all
    /// `(m, eta)` with `eta` in `m * P`, `1 <= m <= level_bound`.
    pub fn weight_monoid(&self, level_bound: i64) -> Vec<GradedPoint> {
        let mut out = vec![GradedPoint::origin(self.dim)];
        for m in 1..=level_bound {
            for eta in self.lattice_points(m) {
                out.push(GradedPoint::new(m, eta));
            }
        }
        out
    }

    /// Exact Euclidean volume via Ehrhart interpolation on `0..=dim`.
    pub fn volume(&self) -> Rat {
        let n = self.dim;
        let mut counts = vec![rint(1)];
        for m in 1..=n as i64 {
            counts.push(rint(self.lattice_points(m).len() as i64));
        }
        // solve for the coefficients of the degree-n counting polynomial
        let basis: Vec<RatVec> = (0..=n)
            .map(|j| (0..=n).map(|k| rint((k as i64).pow(j as u32))).collect())
            .collect();
        let coeffs = solve_in_basis(&basis, &counts).expect("Vandermonde system is regular");
        coeffs[n].clone()
    }

    /// Normality (IDP): every lattice point of `m * P` for `2 <= m <= dim-1`
    /// is a sum of `m` lattice points of `P`. On failure the witness is a
    /// non-decomposable graded point of minimal level.
    pub fn is_normal(&self) -> (bool, Option<GradedPoint>) {
        let lambda: BTreeSet<Vec<i64>> = self.lattice_points(1).into_iter().collect();
        let n = self.dim as i64;
        for m in 2..=(n - 1).max(1) {
            for eta in self.lattice_points(m) {
                if !self.decomposes(&eta, m, &lambda) {
                    return (false, Some(GradedPoint::new(m, eta)));
                }
            }
        }
        (true, None)
    }

    fn decomposes(&self, eta: &[i64], m: i64, lambda: &BTreeSet<Vec<i64>>) -> bool {
        if m == 1 {
            return lambda.contains(eta);
        }
        // greedy with backtracking over P's lattice points
        for chi in lambda {
            let rest: Vec<i64> = eta.iter().zip(chi).map(|(a, b)| a - b).collect();
            if self.hrep.contains_int(&rest, m - 1) && self.decomposes(&rest, m - 1, lambda) {
                return true;
            }
        }
        false
    }

    pub fn face_lattice(&self) -> FaceLattice {
        FaceLattice::build(self)
    }
}

fn int_vec(v: &[i64]) -> RatVec {
    v.iter().map(|&c| rint(c)).collect()
}

/// Desk-scale facet enumeration: hyperplanes spanned by affinely independent
/// vertex subsets of size `dim`, kept when all vertices lie on one closed
/// side, deduplicated by primitive inward normal.
fn enumerate_facets(dim: usize, vertices: &[Vec<i64>]) -> HalfspaceRep {
    let mut seen: BTreeSet<Facet> = BTreeSet::new();
    let mut subset: Vec<usize> = (0..dim).collect();
    let k = vertices.len();
    if dim > k {
        return HalfspaceRep { dim, facets: Vec::new() };
    }
    loop {
        if let Some(facet) = facet_through(dim, vertices, &subset) {
            seen.insert(facet);
        }
        // next combination
        let mut i = dim;
        loop {
            if i == 0 {
                let facets: Vec<Facet> = seen.into_iter().collect();
                return HalfspaceRep { dim, facets };
            }
            i -= 1;
            if subset[i] < k - dim + i {
                subset[i] += 1;
                for j in i + 1..dim {
                    subset[j] = subset[j - 1] + 1;
                }
                break;
            }
        }
    }
}

fn facet_through(dim: usize, vertices: &[Vec<i64>], subset: &[usize]) -> Option<Facet> {
    let base = &vertices[subset[0]];
    let diffs: Vec<RatVec> = subset[1..]
        .iter()
        .map(|&i| {
            vertices[i]
                .iter()
                .zip(base)
                .map(|(a, b)| rint(a - b))
                .collect()
        })
        .collect();
    let normal_rat = row_space_kernel_vector(&diffs, dim)?;
    let mut normal = clear_denominators(&normal_rat);
    let g = normal.iter().fold(0i64, |acc, &x| acc.gcd(&x.abs()));
    if g == 0 {
        return None;
    }
    for c in normal.iter_mut() {
        *c /= g;
    }
    let mut offset = -normal.iter().zip(base).map(|(n, v)| n * v).sum::<i64>();
    let mut pos = false;
    let mut neg = false;
    for v in vertices {
        let s = offset + normal.iter().zip(v).map(|(n, x)| n * x).sum::<i64>();
        if s > 0 {
            pos = true;
        }
        if s < 0 {
            neg = true;
        }
    }
    if pos && neg {
        return None; // spanned hyperplane cuts through the polytope
    }
    if neg {
        for c in normal.iter_mut() {
            *c = -*c;
        }
        offset = -offset;
    }
    Some(Facet { normal, offset })
}

fn clear_denominators(v: &RatVec) -> Vec<i64> {
    let mut lcm = num_bigint::BigInt::from(1);
    for r in v {
        lcm = lcm.lcm(r.denom());
    }
    v.iter()
        .map(|r| {
            let scaled = (r * Rat::from_integer(lcm.clone())).to_integer();
            i64::try_from(scaled).expect("facet normal out of i64 range")
        })
        .collect()
}

/// One face of the polytope: its vertex-index set and the facets active on it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Face {
    pub id: FaceId,
    pub dim: usize,
    pub vertex_set: Vec<usize>,
    pub active_facets: Vec<usize>,
}

/// A totally ordered set of faces, stored ascending by inclusion
/// (vertex first, the whole polytope last).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Chain {
    pub faces: Vec<FaceId>,
}

impl Chain {
    pub fn len(&self) -> usize {
        self.faces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }

    pub fn contains(&self, f: FaceId) -> bool {
        self.faces.contains(&f)
    }

    /// Common refinement of two chains: the faces lying in both, ascending.
    pub fn intersect(&self, other: &Chain) -> Chain {
        Chain {
            faces: self
                .faces
                .iter()
                .copied()
                .filter(|f| other.faces.contains(f))
                .collect(),
        }
    }
}

/// The poset of faces of a polytope, with geometry attached.
///
/// Face ids are assigned in the default linearization order: ascending
/// dimension, ties broken by the lexicographic sorted vertex list. Any order
/// of that shape extends the inclusion partial order, so the id order itself
/// is the default `>^t`.
#[derive(Debug, Clone)]
pub struct FaceLattice {
    pub polytope: LatticePolytope,
    pub faces: Vec<Face>,
    /// Covering relations `(lower, upper)`, exactly the codimension-one
    /// inclusions.
    pub covers: Vec<(FaceId, FaceId)>,
    pub top: FaceId,
    pub maximal_chains: Vec<Chain>,
    up: Vec<Vec<FaceId>>,
}

impl FaceLattice {
    pub fn build(p: &LatticePolytope) -> FaceLattice {
        let nv = p.vertices.len();
        let facet_sets: Vec<BTreeSet<usize>> = p
            .hrep
            .facets
            .iter()
            .map(|f| {
                (0..nv)
                    .filter(|&i| f.eval_int(&p.vertices[i], 1) == 0)
                    .collect()
            })
            .collect();
        // every proper face is an intersection of facets: close under
        // pairwise intersection, then add the whole polytope
        let mut sets: BTreeSet<BTreeSet<usize>> = facet_sets.iter().cloned().collect();
        loop {
            let mut fresh = Vec::new();
            for a in &sets {
                for b in &facet_sets {
                    let c: BTreeSet<usize> = a.intersection(b).copied().collect();
                    if !c.is_empty() && !sets.contains(&c) {
                        fresh.push(c);
                    }
                }
            }
            if fresh.is_empty() {
                break;
            }
            sets.extend(fresh);
        }
        sets.insert((0..nv).collect());

        let mut faces: Vec<Face> = sets
            .into_iter()
            .map(|vs| {
                let verts: Vec<usize> = vs.iter().copied().collect();
                let pts: Vec<RatVec> = verts.iter().map(|&i| int_vec(&p.vertices[i])).collect();
                let fdim = affine_dimension(&pts);
                let active: Vec<usize> = (0..facet_sets.len())
                    .filter(|&fi| verts.iter().all(|v| facet_sets[fi].contains(v)))
                    .collect();
                Face { id: 0, dim: fdim, vertex_set: verts, active_facets: active }
            })
            .collect();
        faces.sort_by(|a, b| (a.dim, &a.vertex_set).cmp(&(b.dim, &b.vertex_set)));
        for (i, f) in faces.iter_mut().enumerate() {
            f.id = i;
        }
        let top = faces.len() - 1;

        let mut covers = Vec::new();
        let mut up = vec![Vec::new(); faces.len()];
        for a in &faces {
            for b in &faces {
                if b.dim == a.dim + 1 && is_subset(&a.vertex_set, &b.vertex_set) {
                    covers.push((a.id, b.id));
                    up[a.id].push(b.id);
                }
            }
        }

        let mut maximal_chains = Vec::new();
        for f in &faces {
            if f.dim == 0 {
                let mut path = vec![f.id];
                collect_chains(&up, top, &mut path, &mut maximal_chains);
            }
        }
        maximal_chains.sort();

        FaceLattice {
            polytope: p.clone(),
            faces,
            covers,
            top,
            maximal_chains,
            up,
        }
    }

    pub fn dim(&self) -> usize {
        self.polytope.dim
    }

    pub fn vertices(&self) -> &[Vec<i64>] {
        &self.polytope.vertices
    }

    pub fn hrep(&self) -> &HalfspaceRep {
        &self.polytope.hrep
    }

    pub fn face(&self, id: FaceId) -> &Face {
        &self.faces[id]
    }

    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    /// Inclusion test via vertex sets.
    pub fn leq(&self, a: FaceId, b: FaceId) -> bool {
        is_subset(&self.faces[a].vertex_set, &self.faces[b].vertex_set)
    }

    pub fn vertex_coords(&self, face: FaceId) -> Vec<RatVec> {
        self.faces[face]
            .vertex_set
            .iter()
            .map(|&i| int_vec(&self.polytope.vertices[i]))
            .collect()
    }

    /// Indices (into `maximal_chains`) of the maximal chains through a face.
    pub fn chains_through(&self, face: FaceId) -> Vec<usize> {
        self.maximal_chains
            .iter()
            .enumerate()
            .filter(|(_, c)| c.contains(face))
            .map(|(i, _)| i)
            .collect()
    }

    /// True iff the point lies in the relative interior of the face: the
    /// face's active facet inequalities hold with equality, all others
    /// strictly.
    pub fn relative_interior_contains(&self, face: FaceId, point: &[Rat]) -> bool {
        if point.len() != self.polytope.dim {
            return false;
        }
        let active = &self.faces[face].active_facets;
        let one = rint(1);
        for (fi, facet) in self.polytope.hrep.facets.iter().enumerate() {
            let s = facet.eval_dilated(point, &one);
            if active.contains(&fi) {
                if !s.is_zero() {
                    return false;
                }
            } else if !s.is_positive() {
                return false;
            }
        }
        true
    }

    /// The default linearization: face ids in increasing order.
    pub fn default_linearization(&self) -> Vec<FaceId> {
        (0..self.faces.len()).collect()
    }

    /// A second linearization extending inclusion: ascending dimension with
    /// reversed vertex-list ties. Used to exercise order independence.
    pub fn alternative_linearization(&self) -> Vec<FaceId> {
        let mut ids: Vec<FaceId> = (0..self.faces.len()).collect();
        ids.sort_by(|&a, &b| {
            let fa = &self.faces[a];
            let fb = &self.faces[b];
            fa.dim
                .cmp(&fb.dim)
                .then_with(|| fb.vertex_set.cmp(&fa.vertex_set))
        });
        ids
    }

    pub fn upper_covers(&self, face: FaceId) -> &[FaceId] {
        &self.up[face]
    }
}

fn is_subset(a: &[usize], b: &[usize]) -> bool {
    // both sorted
    let mut it = b.iter();
    'outer: for x in a {
        for y in it.by_ref() {
            match y.cmp(x) {
                std::cmp::Ordering::Equal => continue 'outer,
                std::cmp::Ordering::Greater => return false,
                std::cmp::Ordering::Less => {}
            }
        }
        return false;
    }
    true
}

fn collect_chains(up: &[Vec<FaceId>], top: FaceId, path: &mut Vec<FaceId>, out: &mut Vec<Chain>) {
    let last = *path.last().unwrap();
    if last == top {
        out.push(Chain { faces: path.clone() });
        return;
    }
    for &next in &up[last] {
        path.push(next);
        collect_chains(up, top, path, out);
        path.pop();
    }
}

/// Convenience constructors for the polytopes every test exercises.
pub fn unit_square() -> LatticePolytope {
    LatticePolytope::new(2, vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![1, 1]]).unwrap()
}

pub fn square2() -> LatticePolytope {
    LatticePolytope::new(2, vec![vec![0, 0], vec![2, 0], vec![0, 2], vec![2, 2]]).unwrap()
}

pub fn segment() -> LatticePolytope {
    LatticePolytope::new(1, vec![vec![0], vec![1]]).unwrap()
}

pub fn simplex6() -> LatticePolytope {
    LatticePolytope::new(
        3,
        vec![vec![0, 0, 0], vec![6, 0, 0], vec![0, 6, 0], vec![0, 0, 6]],
    )
    .unwrap()
}

pub fn q_simplex() -> LatticePolytope {
    LatticePolytope::new(
        3,
        vec![vec![0, 0, 0], vec![2, 1, 1], vec![0, 2, 2], vec![0, 0, 3]],
    )
    .unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn unit_square_halfspaces() {
        let p = unit_square();
        let f = &p.halfspaces().facets;
        assert_eq!(f.len(), 4);
        let expect = vec![
            Facet { normal: vec![-1, 0], offset: 1 },
            Facet { normal: vec![0, -1], offset: 1 },
            Facet { normal: vec![0, 1], offset: 0 },
            Facet { normal: vec![1, 0], offset: 0 },
        ];
        for e in &expect {
            assert!(f.contains(e), "missing facet {e:?}");
        }
    }

    #[test]
    fn segment_halfspaces() {
        let p = segment();
        let f = &p.halfspaces().facets;
        assert_eq!(f.len(), 2);
        assert!(f.contains(&Facet { normal: vec![1], offset: 0 }));
        assert!(f.contains(&Facet { normal: vec![-1], offset: 1 }));
    }

    #[test]
    fn simplex6_halfspaces() {
        let p = simplex6();
        let f = &p.halfspaces().facets;
        assert_eq!(f.len(), 4);
        assert!(f.contains(&Facet { normal: vec![1, 0, 0], offset: 0 }));
        assert!(f.contains(&Facet { normal: vec![0, 1, 0], offset: 0 }));
        assert!(f.contains(&Facet { normal: vec![0, 0, 1], offset: 0 }));
        assert!(f.contains(&Facet { normal: vec![-1, -1, -1], offset: 6 }));
    }

    #[test]
    fn face_lattice_counts() {
        let sq = unit_square().face_lattice();
        assert_eq!(sq.face_count(), 9);
        assert_eq!(sq.maximal_chains.len(), 8);
        assert_eq!(sq.faces.iter().filter(|f| f.dim == 0).count(), 4);
        assert_eq!(sq.faces.iter().filter(|f| f.dim == 1).count(), 4);

        let s6 = simplex6().face_lattice();
        assert_eq!(s6.face_count(), 15);
        assert_eq!(s6.maximal_chains.len(), 24);

        let sg = segment().face_lattice();
        assert_eq!(sg.face_count(), 3);
        assert_eq!(sg.maximal_chains.len(), 2);
    }

    #[test]
    fn maximal_chains_are_graded() {
        for p in [unit_square(), square2(), simplex6(), q_simplex(), segment()] {
            let l = p.face_lattice();
            for c in &l.maximal_chains {
                assert_eq!(c.len(), p.dim() + 1);
                for w in c.faces.windows(2) {
                    assert!(l.leq(w[0], w[1]));
                    assert_eq!(l.face(w[1]).dim, l.face(w[0]).dim + 1);
                }
            }
        }
    }

    #[test]
    fn chain_count_matches_poset_enumeration() {
        // independent oracle: count maximal chains by extending arbitrary
        // inclusions, never consulting the covering relations
        fn count_from(l: &FaceLattice, f: FaceId) -> usize {
            if f == l.top {
                return 1;
            }
            (0..l.face_count())
                .filter(|&g| {
                    g != f && l.leq(f, g) && l.face(g).dim == l.face(f).dim + 1
                })
                .map(|g| count_from(l, g))
                .sum()
        }
        for p in [unit_square(), square2(), simplex6()] {
            let l = p.face_lattice();
            let oracle: usize = l
                .faces
                .iter()
                .filter(|f| f.dim == 0)
                .map(|f| count_from(&l, f.id))
                .sum();
            assert_eq!(oracle, l.maximal_chains.len());
        }
    }

    #[test]
    fn face_vertex_sets_match_active_facets() {
        for p in [unit_square(), simplex6(), q_simplex()] {
            let l = p.face_lattice();
            for f in &l.faces {
                let from_facets: Vec<usize> = (0..p.vertices().len())
                    .filter(|&v| {
                        f.active_facets
                            .iter()
                            .all(|&fi| l.hrep().facets[fi].eval_int(&p.vertices()[v], 1) == 0)
                    })
                    .collect();
                assert_eq!(from_facets, f.vertex_set, "face {}", f.id);
            }
            // inclusion of faces is reverse inclusion of active facet sets
            for a in &l.faces {
                for b in &l.faces {
                    let inc = is_subset(&a.vertex_set, &b.vertex_set);
                    let rev = is_subset(&b.active_facets, &a.active_facets);
                    assert_eq!(inc, rev);
                }
            }
        }
    }

    #[test]
    fn lattice_point_counts() {
        let sq = unit_square();
        assert_eq!(sq.lattice_points(1).len(), 4);
        assert_eq!(sq.lattice_points(2).len(), 9);
        let sq2 = square2();
        assert_eq!(sq2.lattice_points(1).len(), 9);
        for m in 1..=4 {
            assert_eq!(sq.lattice_points(m).len() as i64, (m + 1) * (m + 1));
        }
        let pts = sq.lattice_points(1);
        let mut sorted = pts.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(pts, sorted);
    }

    #[test]
    fn relative_interior_queries() {
        let sq = unit_square();
        let l = sq.face_lattice();
        assert_eq!(l.vertices()[0], vec![0, 0]);
        let half = vec![rat(1, 2), rint(0)];
        let origin = vec![rint(0), rint(0)];
        let center = vec![rat(1, 2), rat(1, 2)];
        let bottom_edge = l
            .faces
            .iter()
            .find(|f| {
                f.dim == 1
                    && f.vertex_set.iter().all(|&v| l.vertices()[v][1] == 0)
            })
            .unwrap()
            .id;
        assert!(l.relative_interior_contains(bottom_edge, &half));
        assert!(!l.relative_interior_contains(bottom_edge, &origin));
        assert!(l.relative_interior_contains(l.top, &center));
        assert!(!l.relative_interior_contains(l.top, &half));
    }

    #[test]
    fn normality_trio() {
        assert_eq!(simplex6().is_normal(), (true, None));
        let (ok, witness) = q_simplex().is_normal();
        assert!(!ok);
        let w = witness.unwrap();
        assert_eq!(w.level, 2);
        // the witness really fails to decompose into two level-one points
        let lambda = q_simplex().lattice_points(1);
        for a in &lambda {
            let rest: Vec<i64> = w.point.iter().zip(a).map(|(x, y)| x - y).collect();
            assert!(!lambda.contains(&rest), "witness decomposed by {a:?}");
        }
        assert_eq!(unit_square().is_normal(), (true, None));
    }

    #[test]
    fn normal_simplex_from_same_triangulation() {
        let s = LatticePolytope::new(
            3,
            vec![vec![0, 0, 6], vec![0, 3, 3], vec![2, 2, 2], vec![2, 1, 1]],
        )
        .unwrap();
        assert_eq!(s.is_normal(), (true, None));
    }

    #[test]
    fn volumes() {
        assert_eq!(unit_square().volume(), rint(1));
        assert_eq!(square2().volume(), rint(4));
        assert_eq!(simplex6().volume(), rint(36));
        assert_eq!(segment().volume(), rint(1));
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(matches!(
            LatticePolytope::new(2, vec![vec![0, 0], vec![1, 0], vec![2, 0]]),
            Err(PolytopeError::NotFullDimensional { .. })
        ));
        assert!(matches!(
            LatticePolytope::new(2, vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![0, 0]]),
            Err(PolytopeError::DuplicateVertex(_))
        ));
        // midpoint of an edge is not a vertex
        assert!(matches!(
            LatticePolytope::new(
                2,
                vec![vec![0, 0], vec![2, 0], vec![0, 2], vec![2, 2], vec![1, 0]]
            ),
            Err(PolytopeError::RedundantVertex(_))
        ));
    }

    #[test]
    fn graded_point_checks() {
        let sq = unit_square();
        assert!(GradedPoint::new_checked(2, vec![1, 1], &sq).is_ok());
        assert!(GradedPoint::new_checked(1, vec![2, 0], &sq).is_err());
        assert!(GradedPoint::new_checked(0, vec![0, 0], &sq).is_ok());
        assert!(GradedPoint::new_checked(0, vec![1, 0], &sq).is_err());
    }
}
