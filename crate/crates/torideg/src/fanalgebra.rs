//! The fan algebra at basis level, generator sets, the global monomial
//! preorder, minimal monomials with fixed lifts, truncated kernel bases, the
//! approximating integral weight vector and homogenization.
//!
//! The coordinate rings themselves are never materialized. A monomial in the
//! generators maps to the graded point obtained by summing its factors; two
//! monomials agree under the quotient map exactly when those points agree.
//! That makes the kernels of both quotient maps, their initial terms and the
//! weight-vector approximation computable by finite linear algebra in each
//! degree.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::exact::{rank_of, Rat, RatVec};
use crate::polytope::{Chain, GradedPoint};
use crate::stratify::{ExtremalData, FlagTriangulation};
use crate::valuation::{quasi_valuation_point, LinearOrder, QuasiValue, ValuationError};
use crate::monoidfan::{degree_one_span, degree_one_submonoid, MonoidFan};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("no minimal decomposition found for {0}; the generator set does not generate its chain monoid")]
    DecompositionFailure(GradedPoint),
    #[error("the zero polynomial has no initial term")]
    ZeroPolynomial,
    #[error("operation requires an integral marking with degree-one extremal data")]
    InapplicableMarking,
    #[error(transparent)]
    Valuation(#[from] ValuationError),
}

/// One generator: a graded point, its quasi-valuation, and the set of
/// maximal chains whose simplex carries it.
#[derive(Debug, Clone)]
pub struct Generator {
    pub point: GradedPoint,
    pub nu: QuasiValue,
    pub chains: BTreeSet<usize>,
}

/// The ordered generator set: all level-one weights first, then every
/// higher-level Hilbert generator of every maximal chain monoid.
#[derive(Debug, Clone)]
pub struct GeneratorSet {
    pub gens: Vec<Generator>,
    pub level_one_count: usize,
}

impl GeneratorSet {
    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn points(&self) -> Vec<GradedPoint> {
        self.gens.iter().map(|g| g.point.clone()).collect()
    }
}

pub fn generator_set(
    fan: &MonoidFan,
    tri: &FlagTriangulation,
    extremal: &ExtremalData,
) -> Result<GeneratorSet, AlgebraError> {
    let mut points: Vec<GradedPoint> = tri
        .lattice
        .polytope
        .lattice_points(1)
        .into_iter()
        .map(|chi| GradedPoint::new(1, chi))
        .collect();
    let level_one_count = points.len();
    let mut higher: BTreeSet<GradedPoint> = BTreeSet::new();
    for cm in &fan.monoids {
        for h in &cm.hilbert_basis {
            if h.level >= 2 {
                higher.insert(h.clone());
            }
        }
    }
    points.extend(higher);

    let gens = points
        .into_iter()
        .map(|p| {
            let nu = quasi_valuation_point(&p, tri, extremal)?;
            let chains: BTreeSet<usize> = tri
                .locate(&p.ratio().expect("generators have positive level"))
                .map_err(ValuationError::from)?
                .into_iter()
                .collect();
            Ok(Generator { point: p, nu, chains })
        })
        .collect::<Result<Vec<_>, AlgebraError>>()?;

    // every chain monoid is generated by the generators carried by that
    // chain: its Hilbert basis must reappear among them
    for (ci, cm) in fan.monoids.iter().enumerate() {
        for h in &cm.hilbert_basis {
            let ok = gens
                .iter()
                .any(|g| &g.point == h && g.chains.contains(&ci));
            if !ok {
                return Err(AlgebraError::DecompositionFailure(h.clone()));
            }
        }
    }
    Ok(GeneratorSet { gens, level_one_count })
}

/// Exponent vector over the generator set.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(len: usize) -> Monomial {
        Monomial(vec![0; len])
    }

    pub fn variable(len: usize, i: usize) -> Monomial {
        let mut e = vec![0; len];
        e[i] = 1;
        Monomial(e)
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn deg_m(&self, gens: &GeneratorSet) -> i64 {
        self.0
            .iter()
            .zip(&gens.gens)
            .map(|(&e, g)| e as i64 * g.point.level)
            .sum()
    }

    /// The graded point the monomial maps to.
    pub fn theta(&self, gens: &GeneratorSet) -> GradedPoint {
        let dim = gens.gens[0].point.point.len();
        let mut acc = GradedPoint::origin(dim);
        for (&e, g) in self.0.iter().zip(&gens.gens) {
            for _ in 0..e {
                acc = acc.add(&g.point);
            }
        }
        acc
    }

    /// The additive degree component: the sum of the factors' values.
    pub fn nu_sum(&self, gens: &GeneratorSet) -> QuasiValue {
        let mut acc = QuasiValue::zero();
        for (&e, g) in self.0.iter().zip(&gens.gens) {
            if e > 0 {
                acc = acc.add(&g.nu.scale(e as i64));
            }
        }
        acc
    }

    /// Maximal chains carrying every factor; nonempty iff the monomial is
    /// minimal.
    pub fn support_chains(&self, gens: &GeneratorSet, chain_count: usize) -> BTreeSet<usize> {
        let mut acc: BTreeSet<usize> = (0..chain_count).collect();
        for (&e, g) in self.0.iter().zip(&gens.gens) {
            if e > 0 {
                acc = acc.intersection(&g.chains).copied().collect();
            }
        }
        acc
    }

    pub fn is_minimal(&self, gens: &GeneratorSet, chain_count: usize) -> bool {
        !self.support_chains(gens, chain_count).is_empty()
    }

    pub fn label(&self, gens: &GeneratorSet) -> String {
        if self.is_one() {
            return "1".into();
        }
        let mut parts = Vec::new();
        for (i, &e) in self.0.iter().enumerate() {
            if e == 1 {
                parts.push(format!("x[{}]", gens.gens[i].point));
            } else if e > 1 {
                parts.push(format!("x[{}]^{}", gens.gens[i].point, e));
            }
        }
        parts.join("*")
    }
}

/// Total preorder on monomials: lower total degree first; at equal total
/// degree the monomial with the lexicographically larger value sum is the
/// smaller one.
pub fn compare_deg_a(
    a: &Monomial,
    b: &Monomial,
    gens: &GeneratorSet,
    order: &LinearOrder,
) -> Ordering {
    match a.deg_m(gens).cmp(&b.deg_m(gens)) {
        Ordering::Equal => order.cmp_sparse(&b.nu_sum(gens).0, &a.nu_sum(gens).0),
        ord => ord,
    }
}

/// `val` of a monomial: total degree paired with the value of its image.
pub fn val_nu(
    m: &Monomial,
    gens: &GeneratorSet,
    tri: &FlagTriangulation,
    extremal: &ExtremalData,
) -> Result<(i64, QuasiValue), AlgebraError> {
    let p = m.theta(gens);
    Ok((m.deg_m(gens), quasi_valuation_point(&p, tri, extremal)?))
}

/// Compare two (total degree, value) pairs in the same preorder.
pub fn compare_val(
    a: &(i64, QuasiValue),
    b: &(i64, QuasiValue),
    order: &LinearOrder,
) -> Ordering {
    match a.0.cmp(&b.0) {
        Ordering::Equal => order.cmp_sparse(&b.1 .0, &a.1 .0),
        ord => ord,
    }
}

/// Product of two basis classes: the sum of the graded points when some
/// maximal simplex carries both, zero otherwise. The origin is the identity.
pub fn multiply_basis(
    a: &GradedPoint,
    b: &GradedPoint,
    tri: &FlagTriangulation,
) -> Result<Option<GradedPoint>, AlgebraError> {
    if a.is_origin() {
        return Ok(Some(b.clone()));
    }
    if b.is_origin() {
        return Ok(Some(a.clone()));
    }
    let ca = tri.locate(&a.ratio().unwrap()).map_err(ValuationError::from)?;
    let cb = tri.locate(&b.ratio().unwrap()).map_err(ValuationError::from)?;
    if ca.iter().any(|c| cb.contains(c)) {
        Ok(Some(a.add(b)))
    } else {
        Ok(None)
    }
}

/// Bilinear extension of the basis product to formal combinations of
/// classes. Zero products drop out; coefficients of equal classes combine.
pub fn multiply_class_combinations(
    a: &BTreeMap<GradedPoint, Rat>,
    b: &BTreeMap<GradedPoint, Rat>,
    tri: &FlagTriangulation,
) -> Result<BTreeMap<GradedPoint, Rat>, AlgebraError> {
    let mut out: BTreeMap<GradedPoint, Rat> = BTreeMap::new();
    for (pa, ca) in a {
        for (pb, cb) in b {
            if let Some(p) = multiply_basis(pa, pb, tri)? {
                let e = out.entry(p).or_insert_with(Rat::zero);
                *e += ca * cb;
            }
        }
    }
    out.retain(|_, c| !c.is_zero());
    Ok(out)
}

/// A polynomial in the generator variables; no zero coefficients stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial(pub BTreeMap<Monomial, Rat>);

impl Polynomial {
    pub fn from_terms(terms: Vec<(Monomial, Rat)>) -> Polynomial {
        let mut map = BTreeMap::new();
        for (m, c) in terms {
            let e = map.entry(m).or_insert_with(Rat::zero);
            *e += c;
        }
        map.retain(|_, c: &mut Rat| !c.is_zero());
        Polynomial(map)
    }

    pub fn binomial(pos: Monomial, neg: Monomial) -> Polynomial {
        Polynomial::from_terms(vec![(pos, Rat::one()), (neg, -Rat::one())])
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }
}

/// The sum of the greatest terms with respect to the monomial preorder;
/// ties stay together.
pub fn initial_term(
    f: &Polynomial,
    gens: &GeneratorSet,
    order: &LinearOrder,
) -> Result<Polynomial, AlgebraError> {
    if f.is_zero() {
        return Err(AlgebraError::ZeroPolynomial);
    }
    let mut best: Option<Monomial> = None;
    for m in f.0.keys() {
        best = Some(match best {
            None => m.clone(),
            Some(b) => {
                if compare_deg_a(m, &b, gens, order) == Ordering::Greater {
                    m.clone()
                } else {
                    b
                }
            }
        });
    }
    let top = best.unwrap();
    Ok(Polynomial(
        f.0.iter()
            .filter(|(m, _)| compare_deg_a(m, &top, gens, order) == Ordering::Equal)
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect(),
    ))
}

/// Initial term with respect to an integral weight vector.
pub fn initial_term_lambda(f: &Polynomial, lambda: &[BigInt]) -> Result<Polynomial, AlgebraError> {
    if f.is_zero() {
        return Err(AlgebraError::ZeroPolynomial);
    }
    let weight = |m: &Monomial| -> BigInt {
        m.0.iter()
            .zip(lambda)
            .map(|(&e, l)| l * BigInt::from(e))
            .sum()
    };
    let top = f.0.keys().map(&weight).max().unwrap();
    Ok(Polynomial(
        f.0.iter()
            .filter(|(m, _)| weight(m) == top)
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect(),
    ))
}

/// Memoized fixed minimal lifts: one deterministic minimal monomial per
/// graded point.
#[derive(Debug, Default)]
pub struct LiftCache {
    map: BTreeMap<GradedPoint, Monomial>,
}

impl LiftCache {
    pub fn new() -> LiftCache {
        LiftCache::default()
    }
}

/// The fixed minimal lift of a weight-monoid point: among all minimal
/// monomials with that image, the lexicographically smallest exponent
/// vector. Deterministic, cached.
pub fn fixed_minimal_lift(
    p: &GradedPoint,
    gens: &GeneratorSet,
    tri: &FlagTriangulation,
    cache: &mut LiftCache,
) -> Result<Monomial, AlgebraError> {
    if let Some(m) = cache.map.get(p) {
        return Ok(m.clone());
    }
    if p.is_origin() {
        let m = Monomial::one(gens.len());
        cache.map.insert(p.clone(), m.clone());
        return Ok(m);
    }
    let chains = tri
        .locate(&p.ratio().expect("positive level"))
        .map_err(ValuationError::from)?;
    let mut best: Option<Monomial> = None;
    for chain_idx in chains {
        let available: Vec<usize> = (0..gens.len())
            .filter(|&i| gens.gens[i].chains.contains(&chain_idx))
            .collect();
        let mut exps = vec![0u32; gens.len()];
        search_decompositions(p, gens, &available, 0, &mut exps, &mut best);
    }
    match best {
        Some(m) => {
            cache.map.insert(p.clone(), m.clone());
            Ok(m)
        }
        None => Err(AlgebraError::DecompositionFailure(p.clone())),
    }
}

fn search_decompositions(
    target: &GradedPoint,
    gens: &GeneratorSet,
    available: &[usize],
    from: usize,
    exps: &mut Vec<u32>,
    best: &mut Option<Monomial>,
) {
    let current: GradedPoint = {
        let dim = target.point.len();
        let mut acc = GradedPoint::origin(dim);
        for (i, &e) in exps.iter().enumerate() {
            for _ in 0..e {
                acc = acc.add(&gens.gens[i].point);
            }
        }
        acc
    };
    if current.level == target.level {
        if current.point == target.point {
            let candidate = Monomial(exps.clone());
            match best {
                None => *best = Some(candidate),
                Some(b) => {
                    if candidate < *b {
                        *best = Some(candidate);
                    }
                }
            }
        }
        return;
    }
    if from == available.len() || current.level > target.level {
        return;
    }
    let gi = available[from];
    let max_e = ((target.level - current.level) / gens.gens[gi].point.level) as u32;
    for e in (0..=max_e).rev() {
        exps[gi] = e;
        search_decompositions(target, gens, available, from + 1, exps, best);
    }
    exps[gi] = 0;
}

/// All monomials over the generator set with total degree at most `bound`,
/// ascending in (degree, exponent lex) order.
pub fn monomials_up_to(gens: &GeneratorSet, bound: i64) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut exps = vec![0u32; gens.len()];
    enumerate_monomials(gens, bound, 0, 0, &mut exps, &mut out);
    out.sort_by_key(|m| (m.deg_m(gens), m.0.clone()));
    out
}

fn enumerate_monomials(
    gens: &GeneratorSet,
    bound: i64,
    from: usize,
    used: i64,
    exps: &mut Vec<u32>,
    out: &mut Vec<Monomial>,
) {
    if from == gens.len() {
        out.push(Monomial(exps.clone()));
        return;
    }
    let step = gens.gens[from].point.level;
    let max_e = ((bound - used) / step) as u32;
    for e in 0..=max_e {
        exps[from] = e;
        enumerate_monomials(gens, bound, from + 1, used + e as i64 * step, exps, out);
    }
    exps[from] = 0;
}

/// Per-degree bookkeeping of the truncated kernel bases.
#[derive(Debug, Clone)]
pub struct DegreeRecord {
    pub degree: i64,
    pub monomial_count: usize,
    pub weight_count: usize,
    pub b1bar_count: usize,
    pub b2_count: usize,
    /// `|B1bar| + |B2| = #monomials - #weights` in this degree.
    pub dimension_identity: bool,
    pub initial_span_rank: usize,
    pub bbar_span_rank: usize,
    /// The spans of the initial terms of `B1 u B2` and of `B1bar u B2bar`
    /// agree in this degree.
    pub spans_equal: bool,
}

/// Truncated bases of both kernels with the verification record.
#[derive(Debug, Clone)]
pub struct KernelBases {
    pub degree_bound: i64,
    /// Non-minimal monomials.
    pub b1bar: Vec<Monomial>,
    /// Differences of two minimal monomials with the same image.
    pub b2: Vec<Polynomial>,
    /// The fixed minimal lifts.
    pub b3: Vec<Monomial>,
    /// `x^alpha - lift(theta(x^alpha))` for non-minimal `x^alpha`.
    pub b1: Vec<Polynomial>,
    pub per_degree: Vec<DegreeRecord>,
}

pub fn kernel_bases(
    gens: &GeneratorSet,
    tri: &FlagTriangulation,
    degree_bound: i64,
    order: &LinearOrder,
    cache: &mut LiftCache,
) -> Result<KernelBases, AlgebraError> {
    let chain_count = tri.chains().len();
    let all = monomials_up_to(gens, degree_bound);

    let mut by_point: BTreeMap<GradedPoint, Vec<Monomial>> = BTreeMap::new();
    for m in &all {
        by_point.entry(m.theta(gens)).or_default().push(m.clone());
    }

    let mut b1bar = Vec::new();
    let mut b2 = Vec::new();
    let mut b3 = Vec::new();
    let mut b1 = Vec::new();
    for (point, monomials) in &by_point {
        let lift = fixed_minimal_lift(point, gens, tri, cache)?;
        debug_assert!(monomials.contains(&lift));
        b3.push(lift.clone());
        for m in monomials {
            if m == &lift {
                continue;
            }
            if m.is_minimal(gens, chain_count) {
                b2.push(Polynomial::binomial(m.clone(), lift.clone()));
            } else {
                b1bar.push(m.clone());
                b1.push(Polynomial::binomial(m.clone(), lift.clone()));
            }
        }
    }
    b1bar.sort();
    b3.sort();

    let mut per_degree = Vec::new();
    for k in 1..=degree_bound {
        let monomials_k: Vec<&Monomial> = all.iter().filter(|m| m.deg_m(gens) == k).collect();
        let index: BTreeMap<&Monomial, usize> = monomials_k
            .iter()
            .enumerate()
            .map(|(i, m)| (*m, i))
            .collect();
        let dim = monomials_k.len();
        let to_vec = |f: &Polynomial| -> RatVec {
            let mut v = vec![Rat::zero(); dim];
            for (m, c) in &f.0 {
                v[index[m]] = c.clone();
            }
            v
        };
        let b1bar_k: Vec<RatVec> = b1bar
            .iter()
            .filter(|m| m.deg_m(gens) == k)
            .map(|m| to_vec(&Polynomial::from_terms(vec![(m.clone(), Rat::one())])))
            .collect();
        let b2_k: Vec<RatVec> = b2
            .iter()
            .filter(|f| f.0.keys().next().unwrap().deg_m(gens) == k)
            .map(to_vec)
            .collect();
        let mut initial_k: Vec<RatVec> = Vec::new();
        for f in b1.iter().chain(&b2) {
            if f.0.keys().next().unwrap().deg_m(gens) == k {
                initial_k.push(to_vec(&initial_term(f, gens, order)?));
            }
        }
        let mut bbar_k = b1bar_k.clone();
        bbar_k.extend(b2_k.iter().cloned());
        let bbar_rank = rank_of(&bbar_k);
        let init_rank = rank_of(&initial_k);
        let mut both = bbar_k.clone();
        both.extend(initial_k.iter().cloned());
        let union_rank = rank_of(&both);
        let weight_count = if k == 0 {
            1
        } else {
            tri.lattice.polytope.lattice_points(k).len()
        };
        per_degree.push(DegreeRecord {
            degree: k,
            monomial_count: dim,
            weight_count,
            b1bar_count: b1bar_k.len(),
            b2_count: b2_k.len(),
            dimension_identity: b1bar_k.len() + b2_k.len() == dim - weight_count,
            initial_span_rank: init_rank,
            bbar_span_rank: bbar_rank,
            spans_equal: bbar_rank == init_rank && union_rank == bbar_rank,
        });
    }

    Ok(KernelBases { degree_bound, b1bar, b2, b3, b1, per_degree })
}

/// The big-base integral weight vector: an order embedding of the monomial
/// preorder on the window of total degree at most `degree_bound`.
#[derive(Debug, Clone)]
pub struct WeightVector {
    pub lambda: Vec<BigInt>,
    pub degree_bound: i64,
}

pub fn weight_vector(
    gens: &GeneratorSet,
    degree_bound: i64,
    order: &LinearOrder,
) -> WeightVector {
    // common denominator of all generator values
    let mut denom = BigInt::one();
    for g in &gens.gens {
        for v in g.nu.0.values() {
            denom = denom.lcm(v.denom());
        }
    }
    let d_rat = Rat::from_integer(denom.clone());
    // cleared value digits per generator and face
    let cleared: Vec<BTreeMap<usize, BigInt>> = gens
        .gens
        .iter()
        .map(|g| {
            g.nu.0
                .iter()
                .map(|(&f, v)| (order.rank(f), (v * &d_rat).to_integer()))
                .collect()
        })
        .collect();
    let max_digit: BigInt = cleared
        .iter()
        .flat_map(|m| m.values())
        .cloned()
        .max()
        .unwrap_or_else(BigInt::zero)
        * BigInt::from(degree_bound.max(1));
    let face_count = order.ascending.len();
    let base: BigInt = max_digit * BigInt::from(face_count as i64) + BigInt::from(2);
    let mut powers = Vec::with_capacity(face_count + 1);
    let mut acc = BigInt::one();
    for _ in 0..=face_count {
        powers.push(acc.clone());
        acc *= &base;
    }
    let mut lambda: Vec<BigInt> = gens
        .gens
        .iter()
        .zip(&cleared)
        .map(|(g, digits)| {
            let mut l = &powers[face_count] * BigInt::from(g.point.level);
            for (rank, digit) in digits {
                l -= &powers[*rank] * digit;
            }
            l
        })
        .collect();
    let mut g = BigInt::zero();
    for l in &lambda {
        g = g.gcd(l);
    }
    if !g.is_zero() && !g.is_one() {
        for l in lambda.iter_mut() {
            *l /= &g;
        }
    }
    WeightVector { lambda, degree_bound }
}

pub fn lambda_weight(m: &Monomial, lambda: &[BigInt]) -> BigInt {
    m.0.iter()
        .zip(lambda)
        .map(|(&e, l)| l * BigInt::from(e))
        .sum()
}

/// Exhaustive check that the weight vector reproduces the preorder on all
/// monomial pairs in the window, ties included. Returns the number of pairs
/// checked or the first offending pair.
pub fn verify_weight_vector(
    wv: &WeightVector,
    gens: &GeneratorSet,
    order: &LinearOrder,
) -> Result<(usize, usize), (Monomial, Monomial)> {
    let all = monomials_up_to(gens, wv.degree_bound);
    let keys: Vec<(i64, QuasiValue, BigInt)> = all
        .iter()
        .map(|m| {
            (
                m.deg_m(gens),
                m.nu_sum(gens),
                lambda_weight(m, &wv.lambda),
            )
        })
        .collect();
    let mut pairs = 0;
    let mut ties = 0;
    for i in 0..all.len() {
        for j in i + 1..all.len() {
            let cmp_a = match keys[i].0.cmp(&keys[j].0) {
                Ordering::Equal => order.cmp_sparse(&keys[j].1 .0, &keys[i].1 .0),
                ord => ord,
            };
            let cmp_l = keys[i].2.cmp(&keys[j].2);
            if cmp_a != cmp_l {
                return Err((all[i].clone(), all[j].clone()));
            }
            pairs += 1;
            if cmp_a == Ordering::Equal {
                ties += 1;
            }
        }
    }
    Ok((pairs, ties))
}

/// A polynomial over the generators and the homogenization variable `u`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomogenizedPolynomial {
    /// Terms keyed by (generator exponents, u exponent).
    pub terms: BTreeMap<(Monomial, BigInt), Rat>,
    pub lambda_degree: BigInt,
}

/// The one-extra-variable rescaling: each term picks up the power of `u`
/// that levels its weight with the top weight of the polynomial.
pub fn homogenize(
    f: &Polynomial,
    lambda: &[BigInt],
) -> Result<HomogenizedPolynomial, AlgebraError> {
    if f.is_zero() {
        return Err(AlgebraError::ZeroPolynomial);
    }
    let degree = f.0.keys().map(|m| lambda_weight(m, lambda)).max().unwrap();
    let terms = f
        .0
        .iter()
        .map(|(m, c)| {
            let u = &degree - lambda_weight(m, lambda);
            ((m.clone(), u), c.clone())
        })
        .collect();
    Ok(HomogenizedPolynomial { terms, lambda_degree: degree })
}

impl HomogenizedPolynomial {
    /// Setting `u = 0` keeps the weight-maximal part: the initial form.
    pub fn specialize_zero(&self) -> Polynomial {
        Polynomial(
            self.terms
                .iter()
                .filter(|((_, u), _)| u.is_zero())
                .map(|((m, _), c)| (m.clone(), c.clone()))
                .collect(),
        )
    }

    /// Setting `u = 1` recovers the original polynomial.
    pub fn specialize_one(&self) -> Polynomial {
        let mut map: BTreeMap<Monomial, Rat> = BTreeMap::new();
        for ((m, _), c) in &self.terms {
            let e = map.entry(m.clone()).or_insert_with(Rat::zero);
            *e += c;
        }
        map.retain(|_, c| !c.is_zero());
        Polynomial(map)
    }
}

/// Evidence for one non-minimal monomial in the level-one variables: a
/// multiple of its image that lands in a degree-one span.
#[derive(Debug, Clone)]
pub struct ShadowEntry {
    pub monomial: Monomial,
    pub point: GradedPoint,
    /// `(k, chain index)` with `k * point` in the degree-one span of that
    /// chain; searched for `k <= dim + 1`.
    pub witness: Option<(i64, usize)>,
}

#[derive(Debug, Clone)]
pub struct ShadowChainRecord {
    pub chain: Chain,
    pub degree_one_generators: Vec<GradedPoint>,
    pub degree_one_equals_monoid: bool,
}

#[derive(Debug, Clone)]
pub struct ShadowReport {
    pub degree_bound: i64,
    pub chains: Vec<ShadowChainRecord>,
    pub entries: Vec<ShadowEntry>,
    pub all_witnessed: bool,
}

/// The integral-case limit analysis: per chain the degree-one weight monoid
/// of the component, and for every non-minimal monomial in the level-one
/// variables the witness that a power of its image is carried by one of
/// those monoids.
pub fn shadow_report(
    gens: &GeneratorSet,
    tri: &FlagTriangulation,
    extremal: &ExtremalData,
    fan: &MonoidFan,
    degree_bound: i64,
) -> Result<ShadowReport, AlgebraError> {
    if !extremal.is_integral() || !tri.marking.is_integral() {
        return Err(AlgebraError::InapplicableMarking);
    }
    let n = tri.lattice.dim() as i64;
    let chain_count = tri.chains().len();

    let subs: Vec<_> = tri
        .chains()
        .iter()
        .map(|c| degree_one_submonoid(c, tri))
        .collect();
    let spans: Vec<BTreeSet<GradedPoint>> = subs
        .iter()
        .map(|s| degree_one_span(s, (n + 1) * degree_bound))
        .collect();
    let chains: Vec<ShadowChainRecord> = subs
        .iter()
        .zip(&fan.monoids)
        .map(|(s, cm)| ShadowChainRecord {
            chain: s.chain.clone(),
            degree_one_generators: s.generators.clone(),
            degree_one_equals_monoid: cm.hilbert_basis.iter().all(|h| h.level == 1),
        })
        .collect();

    // restrict to the level-one variables
    let restricted = GeneratorSet {
        gens: gens.gens[..gens.level_one_count].to_vec(),
        level_one_count: gens.level_one_count,
    };
    let mut entries = Vec::new();
    for m in monomials_up_to(&restricted, degree_bound) {
        if m.is_one() || m.is_minimal(&restricted, chain_count) {
            continue;
        }
        let mut full = m.0.clone();
        full.resize(gens.len(), 0);
        let monomial = Monomial(full);
        let point = m.theta(&restricted);
        let candidates = tri
            .locate(&point.ratio().expect("non-unit monomials have positive level"))
            .map_err(ValuationError::from)?;
        let mut witness = None;
        'search: for k in 1..=(n + 1) {
            for &ci in &candidates {
                if spans[ci].contains(&point.scale(k)) {
                    witness = Some((k, ci));
                    break 'search;
                }
            }
        }
        entries.push(ShadowEntry { monomial, point, witness });
    }
    let all_witnessed = entries.iter().all(|e| e.witness.is_some());
    Ok(ShadowReport { degree_bound, chains, entries, all_witnessed })
}
