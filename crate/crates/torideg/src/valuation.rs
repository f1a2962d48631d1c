//! The per-chain valuation and the global quasi-valuation on graded points,
//! computed two independent ways.
//!
//! A graded point `(m, eta)` stands for the basis eigenfunction of that
//! weight; a formal sum of distinct graded points stands for a generic ring
//! element with those components. Along a maximal chain, the valuation of a
//! graded point is the coefficient vector of `(m, eta)` in the basis of
//! lifted extremal weights. The quasi-valuation is the minimum over all
//! maximal chains in the lexicographic order attached to a linearization of
//! the face poset; for a single graded point it is computed directly from
//! barycentric coordinates in any simplex containing `eta / m`, and the
//! min-over-chains definition is kept as the oracle the tests compare
//! against.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::exact::{rint, solve_in_basis, ExactError, Rat, RatVec};
use crate::polytope::{Chain, FaceId, FaceLattice, GradedPoint};
use crate::stratify::{ExtremalData, FlagTriangulation, MarkingError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ValuationError {
    #[error("graded point ({level}, {point:?}) is not in the weight monoid")]
    InvalidGradedPoint { level: i64, point: Vec<i64> },
    #[error("formal sum has no terms")]
    EmptyFormalSum,
    #[error("formal sum repeats the term {0}")]
    DuplicateTerm(GradedPoint),
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error(transparent)]
    Marking(#[from] MarkingError),
}

/// A linearization of the face poset: a total order refining inclusion.
/// Rank 0 is the smallest face; comparisons of valuation vectors walk the
/// faces from the largest rank downwards.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearOrder {
    /// Face ids ascending in the order.
    pub ascending: Vec<FaceId>,
    rank: Vec<usize>,
}

impl LinearOrder {
    pub fn new(ascending: Vec<FaceId>) -> LinearOrder {
        let mut rank = vec![0; ascending.len()];
        for (r, &f) in ascending.iter().enumerate() {
            rank[f] = r;
        }
        LinearOrder { ascending, rank }
    }

    pub fn default_for(lattice: &FaceLattice) -> LinearOrder {
        LinearOrder::new(lattice.default_linearization())
    }

    pub fn alternative_for(lattice: &FaceLattice) -> LinearOrder {
        LinearOrder::new(lattice.alternative_linearization())
    }

    pub fn rank(&self, f: FaceId) -> usize {
        self.rank[f]
    }

    /// Lexicographic comparison of sparse vectors over the faces, most
    /// significant face first; absent entries are zero.
    pub fn cmp_sparse(
        &self,
        a: &BTreeMap<FaceId, Rat>,
        b: &BTreeMap<FaceId, Rat>,
    ) -> Ordering {
        let zero = Rat::zero();
        for &f in self.ascending.iter().rev() {
            let x = a.get(&f).unwrap_or(&zero);
            let y = b.get(&f).unwrap_or(&zero);
            match x.cmp(y) {
                Ordering::Equal => continue,
                ord => return ord,
            }
        }
        Ordering::Equal
    }
}

/// Coefficients of a graded point in the lifted-weight basis of one maximal
/// chain. Entries may be negative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainValue {
    pub chain: Chain,
    pub coeffs: BTreeMap<FaceId, Rat>,
}

impl ChainValue {
    /// Lexicographic comparison inside a single chain: the chain is totally
    /// ordered by inclusion so no linearization choice is involved.
    pub fn cmp_within_chain(&self, other: &ChainValue) -> Ordering {
        debug_assert_eq!(self.chain, other.chain);
        let zero = Rat::zero();
        for f in self.chain.faces.iter().rev() {
            let x = self.coeffs.get(f).unwrap_or(&zero);
            let y = other.coeffs.get(f).unwrap_or(&zero);
            match x.cmp(y) {
                Ordering::Equal => continue,
                ord => return ord,
            }
        }
        Ordering::Equal
    }

    pub fn nonnegative(&self) -> bool {
        self.coeffs.values().all(|c| !c.is_negative())
    }
}

/// A quasi-valuation image: a sparse nonnegative vector over the faces whose
/// support lies in some chain. Zero entries are not stored.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct QuasiValue(pub BTreeMap<FaceId, Rat>);

impl QuasiValue {
    pub fn from_map(mut map: BTreeMap<FaceId, Rat>) -> QuasiValue {
        map.retain(|_, v| !v.is_zero());
        QuasiValue(map)
    }

    pub fn zero() -> QuasiValue {
        QuasiValue(BTreeMap::new())
    }

    pub fn support(&self) -> Vec<FaceId> {
        self.0.keys().copied().collect()
    }

    pub fn get(&self, f: FaceId) -> Rat {
        self.0.get(&f).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn add(&self, other: &QuasiValue) -> QuasiValue {
        let mut out = self.0.clone();
        for (f, v) in &other.0 {
            let e = out.entry(*f).or_insert_with(Rat::zero);
            *e += v;
        }
        QuasiValue::from_map(out)
    }

    pub fn scale(&self, k: i64) -> QuasiValue {
        QuasiValue::from_map(
            self.0
                .iter()
                .map(|(f, v)| (*f, v * rint(k)))
                .collect(),
        )
    }

    /// Reconstruction: `sum_sigma a_sigma * (d_sigma, d_sigma u_sigma)`.
    pub fn reconstruct(&self, extremal: &ExtremalData, dim: usize) -> Option<GradedPoint> {
        let mut acc = vec![Rat::zero(); dim + 1];
        for (f, a) in &self.0 {
            let lifted = extremal.lifted_rat(*f);
            for (x, l) in acc.iter_mut().zip(&lifted) {
                *x += a * l;
            }
        }
        if acc.iter().any(|x| !x.denom().is_one()) {
            return None;
        }
        let ints: Vec<i64> = acc
            .iter()
            .map(|x| i64::try_from(x.to_integer()).expect("reconstruction out of range"))
            .collect();
        Some(GradedPoint::new(ints[0], ints[1..].to_vec()))
    }
}

impl std::fmt::Display for QuasiValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{{")?;
        for (i, (face, v)) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{face}: {v}")?;
        }
        write!(f, "}}")
    }
}

fn check_terms(terms: &[GradedPoint]) -> Result<(), ValuationError> {
    if terms.is_empty() {
        return Err(ValuationError::EmptyFormalSum);
    }
    for (i, t) in terms.iter().enumerate() {
        if terms[i + 1..].contains(t) {
            return Err(ValuationError::DuplicateTerm(t.clone()));
        }
    }
    Ok(())
}

/// Valuation of a formal sum along one maximal chain: solve each term in the
/// chain's lifted-weight basis, then take the lexicographic minimum.
pub fn nu_chain(
    terms: &[GradedPoint],
    chain: &Chain,
    extremal: &ExtremalData,
) -> Result<ChainValue, ValuationError> {
    check_terms(terms)?;
    let basis: Vec<RatVec> = chain
        .faces
        .iter()
        .map(|&f| extremal.lifted_rat(f))
        .collect();
    let mut best: Option<ChainValue> = None;
    for t in terms {
        let target: RatVec = t.lifted().iter().map(|&c| rint(c)).collect();
        let coeffs = solve_in_basis(&basis, &target)?;
        let value = ChainValue {
            chain: chain.clone(),
            coeffs: chain
                .faces
                .iter()
                .copied()
                .zip(coeffs)
                .filter(|(_, c)| !c.is_zero())
                .collect(),
        };
        best = Some(match best {
            None => value,
            Some(b) => {
                if value.cmp_within_chain(&b) == Ordering::Less {
                    value
                } else {
                    b
                }
            }
        });
    }
    Ok(best.unwrap())
}

fn check_in_monoid(t: &GradedPoint, tri: &FlagTriangulation) -> Result<(), ValuationError> {
    let ok = if t.level == 0 {
        t.point.iter().all(|&c| c == 0)
    } else {
        t.level > 0 && tri.lattice.hrep().contains_int(&t.point, t.level)
    };
    if ok {
        Ok(())
    } else {
        Err(ValuationError::InvalidGradedPoint {
            level: t.level,
            point: t.point.clone(),
        })
    }
}

/// Quasi-valuation of a single graded point via simplex location: find any
/// maximal simplex whose cone contains the lifted point and rescale its ray
/// coordinates. All containing chains give the same answer; debug builds
/// check that.
pub fn quasi_valuation_point(
    point: &GradedPoint,
    tri: &FlagTriangulation,
    extremal: &ExtremalData,
) -> Result<QuasiValue, ValuationError> {
    check_in_monoid(point, tri)?;
    if point.is_origin() {
        return Ok(QuasiValue::zero());
    }
    let lifted = point.lifted();
    let mut answer: Option<QuasiValue> = None;
    for (h, tester) in tri.cone_testers.iter().enumerate() {
        if !tester.contains(&lifted) {
            continue;
        }
        let chain = &tri.chains()[h];
        // ray coordinate t times ray level over the extremal degree
        let t = tester.coordinates(&lifted).expect("containment implies span");
        let map: BTreeMap<FaceId, Rat> = chain
            .faces
            .iter()
            .copied()
            .zip(t)
            .zip(&tester.rays)
            .map(|((f, ti), ray)| {
                let value = ti * rint(ray[0]) / rint(extremal.degree(f));
                (f, value)
            })
            .collect();
        let qv = QuasiValue::from_map(map);
        match &answer {
            None => {
                answer = Some(qv);
                if !cfg!(debug_assertions) {
                    break;
                }
            }
            Some(prev) => {
                debug_assert_eq!(prev, &qv, "containing chains disagree on the value");
            }
        }
    }
    Ok(answer.expect("the triangulation covers the polytope"))
}

/// Quasi-valuation of a formal sum: the minimum over the terms, taken in the
/// lexicographic order of the given linearization.
pub fn quasi_valuation(
    terms: &[GradedPoint],
    tri: &FlagTriangulation,
    extremal: &ExtremalData,
    order: &LinearOrder,
) -> Result<QuasiValue, ValuationError> {
    check_terms(terms)?;
    let mut best: Option<QuasiValue> = None;
    for t in terms {
        let qv = quasi_valuation_point(t, tri, extremal)?;
        best = Some(match best {
            None => qv,
            Some(b) => match order.cmp_sparse(&qv.0, &b.0) {
                Ordering::Less => qv,
                _ => b,
            },
        });
    }
    Ok(best.unwrap())
}

/// The defining formula: minimum of the chain valuations over all maximal
/// chains. Slower than the simplex route and kept as the independent oracle.
pub fn quasi_valuation_via_min(
    terms: &[GradedPoint],
    tri: &FlagTriangulation,
    extremal: &ExtremalData,
    order: &LinearOrder,
) -> Result<QuasiValue, ValuationError> {
    check_terms(terms)?;
    for t in terms {
        check_in_monoid(t, tri)?;
    }
    if terms.iter().all(|t| t.is_origin()) {
        return Ok(QuasiValue::zero());
    }
    let mut best: Option<BTreeMap<FaceId, Rat>> = None;
    for chain in tri.chains() {
        let cv = nu_chain(terms, chain, extremal)?;
        best = Some(match best {
            None => cv.coeffs,
            Some(b) => {
                if order.cmp_sparse(&cv.coeffs, &b) == Ordering::Less {
                    cv.coeffs
                } else {
                    b
                }
            }
        });
    }
    Ok(QuasiValue::from_map(best.unwrap()))
}

/// Everything `valuation_monoid_check` reports about one chain's images.
#[derive(Debug, Clone)]
pub struct MonoidCheckReport {
    pub chain: Chain,
    pub level_bound: i64,
    pub image_count: usize,
    /// Per chain face, the least common multiple of the denominators seen
    /// across all images: the lattice conditions satisfied by the valuation
    /// monoid truncation.
    pub denominators: BTreeMap<FaceId, i64>,
    pub all_reconstructed: bool,
    pub images: Vec<(GradedPoint, ChainValue)>,
}

/// Computes every chain-valuation image up to the level bound, verifies the
/// inverse reconstruction, and reports the exact per-face denominators.
pub fn valuation_monoid_check(
    chain: &Chain,
    extremal: &ExtremalData,
    lattice: &FaceLattice,
    level_bound: i64,
) -> Result<MonoidCheckReport, ValuationError> {
    let mut denominators: BTreeMap<FaceId, BigInt> = chain
        .faces
        .iter()
        .map(|&f| (f, BigInt::one()))
        .collect();
    let mut all_reconstructed = true;
    let mut images = Vec::new();
    for point in lattice.polytope.weight_monoid(level_bound) {
        let cv = nu_chain(std::slice::from_ref(&point), chain, extremal)?;
        for (&f, c) in &cv.coeffs {
            let d = denominators.get_mut(&f).unwrap();
            *d = d.lcm(c.denom());
        }
        let back = QuasiValue(cv.coeffs.clone()).reconstruct(extremal, lattice.dim());
        if back.as_ref() != Some(&point) {
            all_reconstructed = false;
        }
        images.push((point, cv));
    }
    Ok(MonoidCheckReport {
        chain: chain.clone(),
        level_bound,
        image_count: images.len(),
        denominators: denominators
            .into_iter()
            .map(|(f, d)| (f, i64::try_from(d).expect("denominator out of range")))
            .collect(),
        all_reconstructed,
        images,
    })
}
