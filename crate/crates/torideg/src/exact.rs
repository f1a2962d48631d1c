//! Exact rational scalars, vectors and dense linear algebra over Q.
//!
//! Everything downstream (face lattices, triangulations, valuations, monoid
//! fans) is built on the solvers in this module. No floating point anywhere:
//! all arithmetic is over arbitrary-precision rationals kept in lowest terms
//! with positive denominators.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Arbitrary-precision rational, always reduced, denominator > 0.
pub type Rat = num_rational::BigRational;

/// A point or direction with rational entries.
pub type RatVec = Vec<Rat>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExactError {
    #[error("basis vectors are linearly dependent")]
    SingularBasis,
    #[error("point does not lie in the affine span of the simplex vertices")]
    NotInAffineSpan,
    #[error("simplex vertices are affinely dependent")]
    DegenerateSimplex,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("cannot parse rational `{0}`")]
    UnparsableRational(String),
}

pub fn rat(numer: i64, denom: i64) -> Rat {
    Rat::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn rint(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn rvec(entries: &[i64]) -> RatVec {
    entries.iter().map(|&e| rint(e)).collect()
}

/// Formats like the JSON wire format: `p/q`, or just `p` for integers.
pub fn rat_str(r: &Rat) -> String {
    r.to_string()
}

pub fn parse_rat(s: &str) -> Result<Rat, ExactError> {
    s.trim()
        .parse::<Rat>()
        .map_err(|_| ExactError::UnparsableRational(s.trim().to_string()))
}

/// Rounds to the nearest integer, ties away from zero. Used only for SVG
/// pixel coordinates; the mathematical pipeline never rounds.
pub fn round_to_i64(r: &Rat) -> i64 {
    let rounded: BigInt = if r.is_negative() {
        (r - rat(1, 2)).ceil().to_integer()
    } else {
        (r + rat(1, 2)).floor().to_integer()
    };
    i64::try_from(rounded).expect("pixel coordinate out of range")
}

/// A rectangular matrix of rationals, stored by rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatMat {
    rows: Vec<RatVec>,
    cols: usize,
}

impl RatMat {
    pub fn from_rows(rows: Vec<RatVec>) -> Result<Self, ExactError> {
        let cols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != cols) {
            return Err(ExactError::DimensionMismatch(
                "matrix rows have unequal lengths".into(),
            ));
        }
        Ok(RatMat { rows, cols })
    }

    pub fn rows(&self) -> &[RatVec] {
        &self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn rank(&self) -> usize {
        rank_of(&self.rows)
    }
}

/// In-place Gaussian elimination to row echelon form; pivot = first nonzero
/// entry in the current column (deterministic). Returns the pivot columns.
#[allow(clippy::needless_range_loop)]
fn row_echelon(m: &mut [RatVec]) -> Vec<usize> {
    let nrows = m.len();
    let ncols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        if row == nrows {
            break;
        }
        let Some(p) = (row..nrows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let inv = m[row][col].clone();
        for c in col..ncols {
            m[row][c] = &m[row][c] / &inv;
        }
        for r in 0..nrows {
            if r != row && !m[r][col].is_zero() {
                let factor = m[r][col].clone();
                for c in col..ncols {
                    let delta = &factor * &m[row][c];
                    m[r][c] = &m[r][c] - &delta;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    pivots
}

/// Exact rank over Q.
pub fn rank_of(rows: &[RatVec]) -> usize {
    let mut m: Vec<RatVec> = rows.to_vec();
    row_echelon(&mut m).len()
}

/// Dimension of the affine span of a point set; -1-free convention:
/// the empty set and the single point both report 0.
pub fn affine_dimension(points: &[RatVec]) -> usize {
    if points.len() <= 1 {
        return 0;
    }
    let base = &points[0];
    let diffs: Vec<RatVec> = points[1..]
        .iter()
        .map(|p| p.iter().zip(base).map(|(a, b)| a - b).collect())
        .collect();
    rank_of(&diffs)
}

/// Solves `sum_i c_i * basis[i] = target` for square systems, exactly.
///
/// The basis vectors are the columns of the system; the returned coefficient
/// vector is aligned with the basis order.
pub fn solve_in_basis(basis: &[RatVec], target: &[Rat]) -> Result<RatVec, ExactError> {
    let k = basis.len();
    if k == 0 || basis.iter().any(|b| b.len() != k) || target.len() != k {
        return Err(ExactError::DimensionMismatch(format!(
            "expected {k} basis vectors of dimension {k}"
        )));
    }
    // augmented rows: row r = (basis[0][r], ..., basis[k-1][r] | target[r])
    let mut m: Vec<RatVec> = (0..k)
        .map(|r| {
            let mut row: RatVec = basis.iter().map(|b| b[r].clone()).collect();
            row.push(target[r].clone());
            row
        })
        .collect();
    let pivots = row_echelon(&mut m);
    if pivots.contains(&k) || pivots.len() < k {
        return Err(ExactError::SingularBasis);
    }
    let mut coeffs = vec![Rat::zero(); k];
    for (r, &c) in pivots.iter().enumerate() {
        coeffs[c] = m[r][k].clone();
    }
    Ok(coeffs)
}

/// Solves `sum_i c_i * vectors[i] = target` where the vectors need not span
/// the ambient space. Fails with `SingularBasis` if the vectors are linearly
/// dependent and with `NotInAffineSpan` if the target lies outside their span.
pub fn solve_in_span(vectors: &[RatVec], target: &[Rat]) -> Result<RatVec, ExactError> {
    let k = vectors.len();
    let dim = target.len();
    if k == 0 || vectors.iter().any(|b| b.len() != dim) {
        return Err(ExactError::DimensionMismatch(
            "span vectors must match the target dimension".into(),
        ));
    }
    let mut m: Vec<RatVec> = (0..dim)
        .map(|r| {
            let mut row: RatVec = vectors.iter().map(|b| b[r].clone()).collect();
            row.push(target[r].clone());
            row
        })
        .collect();
    let pivots = row_echelon(&mut m);
    if pivots.contains(&k) {
        return Err(ExactError::NotInAffineSpan);
    }
    if pivots.len() < k {
        return Err(ExactError::SingularBasis);
    }
    let mut coeffs = vec![Rat::zero(); k];
    for (r, &c) in pivots.iter().enumerate() {
        coeffs[c] = m[r][k].clone();
    }
    Ok(coeffs)
}

/// Affine coordinates of `point` with respect to a simplex: coefficients sum
/// to one and reproduce the point exactly. `contained` is true iff all
/// coefficients are nonnegative, i.e. the point lies in the closed simplex.
pub fn barycentric_coordinates(
    vertices: &[RatVec],
    point: &[Rat],
) -> Result<(RatVec, bool), ExactError> {
    let k = vertices.len();
    let dim = point.len();
    if k == 0 || vertices.iter().any(|v| v.len() != dim) {
        return Err(ExactError::DimensionMismatch(
            "simplex vertices must match the point dimension".into(),
        ));
    }
    // rows: the "sum to one" constraint followed by one row per coordinate
    let mut m: Vec<RatVec> = Vec::with_capacity(dim + 1);
    let mut first: RatVec = vec![Rat::one(); k];
    first.push(Rat::one());
    m.push(first);
    for r in 0..dim {
        let mut row: RatVec = vertices.iter().map(|v| v[r].clone()).collect();
        row.push(point[r].clone());
        m.push(row);
    }
    let pivots = row_echelon(&mut m);
    let span_rank = pivots.iter().filter(|&&c| c < k).count();
    if span_rank < k {
        return Err(ExactError::DegenerateSimplex);
    }
    if pivots.contains(&k) {
        return Err(ExactError::NotInAffineSpan);
    }
    let mut coeffs = vec![Rat::zero(); k];
    for (r, &c) in pivots.iter().enumerate() {
        coeffs[c] = m[r][k].clone();
    }
    let contained = coeffs.iter().all(|c| !c.is_negative());
    Ok((coeffs, contained))
}

/// A nonzero vector orthogonal to all given rows, when their kernel in
/// `Q^ambient` is exactly one dimensional; `None` otherwise.
pub fn row_space_kernel_vector(rows: &[RatVec], ambient: usize) -> Option<RatVec> {
    let mut m: Vec<RatVec> = rows.to_vec();
    let pivots = row_echelon(&mut m);
    if pivots.len() + 1 != ambient {
        return None;
    }
    let free = (0..ambient).find(|c| !pivots.contains(c))?;
    let mut x = vec![Rat::zero(); ambient];
    x[free] = Rat::one();
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = -m[r][free].clone();
    }
    Some(x)
}

/// Precomputed membership tests for the cone spanned by independent integer
/// rays: integer functionals replace a linear solve per query.
///
/// With `B` the matrix extending the rays to a basis of the ambient space,
/// the rows of `B^{-1}` split into coordinate functionals (one per ray) and
/// kernel functionals (vanishing on the span). Each is scaled to an integer
/// vector, so a membership query is a handful of integer dot products.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConeTester {
    pub rays: Vec<Vec<i64>>,
    /// `(functional, scale)`: the ray coordinate is `dot / scale`, scale > 0.
    coords: Vec<(Vec<i64>, i64)>,
    kernel: Vec<Vec<i64>>,
}

fn idot(a: &[i64], b: &[i64]) -> i128 {
    a.iter().zip(b).map(|(&x, &y)| x as i128 * y as i128).sum()
}

impl ConeTester {
    /// `None` when the rays are linearly dependent.
    pub fn new(rays: Vec<Vec<i64>>, ambient: usize) -> Option<ConeTester> {
        let k = rays.len();
        let mut columns: Vec<RatVec> = rays
            .iter()
            .map(|r| r.iter().map(|&c| rint(c)).collect())
            .collect();
        if rank_of(&columns) != k {
            return None;
        }
        // complete to a basis with unit vectors
        for j in 0..ambient {
            if columns.len() == ambient {
                break;
            }
            let mut e = vec![Rat::zero(); ambient];
            e[j] = Rat::one();
            columns.push(e.clone());
            if rank_of(&columns) < columns.len() {
                columns.pop();
            }
        }
        debug_assert_eq!(columns.len(), ambient);
        // rows of the inverse, gathered column by column
        let mut inv_cols: Vec<RatVec> = Vec::with_capacity(ambient);
        for j in 0..ambient {
            let mut e = vec![Rat::zero(); ambient];
            e[j] = Rat::one();
            inv_cols.push(solve_in_basis(&columns, &e).ok()?);
        }
        let scale_row = |i: usize| -> (Vec<i64>, i64) {
            let mut lcm = BigInt::one();
            for c in &inv_cols {
                lcm = num_integer::Integer::lcm(&lcm, c[i].denom());
            }
            let scale = Rat::from_integer(lcm.clone());
            let row: Vec<i64> = inv_cols
                .iter()
                .map(|c| i64::try_from((&c[i] * &scale).to_integer()).expect("functional overflow"))
                .collect();
            (row, i64::try_from(lcm).expect("functional scale overflow"))
        };
        let coords = (0..k).map(&scale_row).collect();
        let kernel = (k..ambient).map(|i| scale_row(i).0).collect();
        Some(ConeTester { rays, coords, kernel })
    }

    pub fn in_span(&self, x: &[i64]) -> bool {
        self.kernel.iter().all(|w| idot(w, x) == 0)
    }

    /// Nonnegative-combination membership.
    pub fn contains(&self, x: &[i64]) -> bool {
        self.in_span(x) && self.coords.iter().all(|(w, _)| idot(w, x) >= 0)
    }

    /// Membership in the half-open parallelepiped `0 <= t_i < 1`.
    pub fn in_fundamental_box(&self, x: &[i64]) -> bool {
        self.in_span(x)
            && self.coords.iter().all(|(w, s)| {
                let d = idot(w, x);
                d >= 0 && d < *s as i128
            })
    }

    /// Exact ray coordinates; `None` when the point leaves the span.
    pub fn coordinates(&self, x: &[i64]) -> Option<RatVec> {
        if !self.in_span(x) {
            return None;
        }
        Some(
            self.coords
                .iter()
                .map(|(w, s)| {
                    Rat::new(BigInt::from(idot(w, x)), BigInt::from(*s))
                })
                .collect(),
        )
    }
}

pub fn vec_add(a: &[Rat], b: &[Rat]) -> RatVec {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn vec_sub(a: &[Rat], b: &[Rat]) -> RatVec {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn vec_scale(a: &[Rat], s: &Rat) -> RatVec {
    a.iter().map(|x| x * s).collect()
}

pub fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Determinant by exact elimination.
#[allow(clippy::needless_range_loop)]
pub fn determinant(rows: &[RatVec]) -> Result<Rat, ExactError> {
    let n = rows.len();
    if rows.iter().any(|r| r.len() != n) {
        return Err(ExactError::DimensionMismatch("determinant needs a square matrix".into()));
    }
    let mut m: Vec<RatVec> = rows.to_vec();
    let mut det = Rat::one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return Ok(Rat::zero());
        };
        if p != col {
            m.swap(col, p);
            det = -det;
        }
        det *= m[col][col].clone();
        let inv = m[col][col].clone();
        for c in col..n {
            m[col][c] = &m[col][c] / &inv;
        }
        for r in (col + 1)..n {
            if !m[r][col].is_zero() {
                let factor = m[r][col].clone();
                for c in col..n {
                    let delta = &factor * &m[col][c];
                    m[r][c] = &m[r][c] - &delta;
                }
            }
        }
    }
    Ok(det)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solve_paper_square_basis() {
        // extremal lifted weights of the maximal chain vertex < edge < square
        let basis = vec![rvec(&[4, 2, 2]), rvec(&[2, 1, 0]), rvec(&[1, 0, 0])];
        let target = rvec(&[1, 1, 1]);
        let c = solve_in_basis(&basis, &target).unwrap();
        assert_eq!(c, vec![rat(1, 2), rint(0), rint(-1)]);
        // substitute back: exact reconstruction
        let mut acc = vec![Rat::zero(); 3];
        for (ci, b) in c.iter().zip(&basis) {
            acc = vec_add(&acc, &vec_scale(b, ci));
        }
        assert_eq!(acc, target);
    }

    #[test]
    fn solve_identity_basis() {
        let basis = vec![rvec(&[1, 0, 0]), rvec(&[0, 1, 0]), rvec(&[0, 0, 1])];
        let target = rvec(&[5, 0, -2]);
        assert_eq!(solve_in_basis(&basis, &target).unwrap(), target);
    }

    #[test]
    fn solve_rejects_dependent_basis() {
        let basis = vec![rvec(&[1, 0]), rvec(&[2, 0])];
        assert_eq!(
            solve_in_basis(&basis, &rvec(&[1, 1])),
            Err(ExactError::SingularBasis)
        );
    }

    #[test]
    fn barycentric_inside_triangle() {
        let verts = vec![
            rvec(&[0, 0]),
            vec![rat(1, 2), rint(0)],
            vec![rat(1, 2), rat(1, 2)],
        ];
        let (c, inside) = barycentric_coordinates(&verts, &[rat(1, 3), rint(0)]).unwrap();
        assert_eq!(c, vec![rat(1, 3), rat(2, 3), rint(0)]);
        assert!(inside);
        assert_eq!(c.iter().sum::<Rat>(), Rat::one());
    }

    #[test]
    fn barycentric_vertex_indicator() {
        let verts = vec![rvec(&[0, 0]), rvec(&[1, 0])];
        let (c, inside) = barycentric_coordinates(&verts, &rvec(&[0, 0])).unwrap();
        assert_eq!(c, vec![rint(1), rint(0)]);
        assert!(inside);
    }

    #[test]
    fn barycentric_outside_triangle() {
        let verts = vec![
            rvec(&[0, 0]),
            vec![rat(1, 2), rint(0)],
            vec![rat(1, 2), rat(1, 2)],
        ];
        let (c, inside) = barycentric_coordinates(&verts, &rvec(&[1, 1])).unwrap();
        assert!(!inside);
        assert!(c[0].is_negative());
        assert_eq!(c.iter().sum::<Rat>(), Rat::one());
    }

    #[test]
    fn barycentric_detects_off_span_point() {
        // a segment in the plane does not span it
        let verts = vec![rvec(&[0, 0]), rvec(&[1, 0])];
        assert_eq!(
            barycentric_coordinates(&verts, &rvec(&[0, 1])),
            Err(ExactError::NotInAffineSpan)
        );
    }

    #[test]
    fn barycentric_detects_degenerate_simplex() {
        let verts = vec![rvec(&[0, 0]), rvec(&[1, 0]), rvec(&[2, 0])];
        assert_eq!(
            barycentric_coordinates(&verts, &rvec(&[1, 0])),
            Err(ExactError::DegenerateSimplex)
        );
    }

    #[test]
    fn rank_and_affine_dimension() {
        let id3 = vec![rvec(&[1, 0, 0]), rvec(&[0, 1, 0]), rvec(&[0, 0, 1])];
        assert_eq!(rank_of(&id3), 3);
        assert_eq!(RatMat::from_rows(id3).unwrap().rank(), 3);
        assert!(RatMat::from_rows(vec![rvec(&[1, 0]), rvec(&[1])]).is_err());
        let square = vec![rvec(&[0, 0]), rvec(&[1, 0]), rvec(&[0, 1]), rvec(&[1, 1])];
        assert_eq!(affine_dimension(&square), 2);
        let collinear = vec![rvec(&[0, 0]), rvec(&[2, 0]), rvec(&[1, 0])];
        assert_eq!(affine_dimension(&collinear), 1);
        assert_eq!(affine_dimension(&[rvec(&[7, 7])]), 0);
    }

    #[test]
    fn cone_tester_matches_solver() {
        // square-rank cone
        let rays = vec![vec![1, 0, 0], vec![2, 1, 0], vec![2, 1, 1]];
        let t = ConeTester::new(rays, 3).unwrap();
        assert!(t.contains(&[1, 0, 0]));
        assert!(t.contains(&[5, 2, 1]));
        assert!(!t.contains(&[0, 1, 0]));
        assert_eq!(
            t.coordinates(&[5, 2, 1]),
            Some(vec![rint(1), rint(1), rint(1)])
        );
        // lower-rank cone: span constraints kick in
        let edge = ConeTester::new(vec![vec![1, 0], vec![1, 2]], 2).unwrap();
        assert!(edge.contains(&[2, 2]));
        assert!(!edge.contains(&[0, -2]));
        let line = ConeTester::new(vec![vec![1, 1]], 2).unwrap();
        assert!(line.contains(&[3, 3]));
        assert!(!line.contains(&[3, 2]));
        assert!(!line.in_span(&[3, 2]));
        // dependent rays are refused
        assert!(ConeTester::new(vec![vec![1, 0], vec![2, 0]], 2).is_none());
        // the fundamental box is half open
        let t2 = ConeTester::new(vec![vec![2, 1], vec![2, -1]], 2).unwrap();
        assert!(t2.in_fundamental_box(&[0, 0]));
        assert!(t2.in_fundamental_box(&[2, 0]));
        assert!(!t2.in_fundamental_box(&[2, 1]));
        assert!(!t2.in_fundamental_box(&[4, 0]));
    }

    #[test]
    fn solve_reconstructs_over_small_window() {
        // exhaustive window of integer 2x2 systems: whenever the solve
        // succeeds, substituting the coefficients reproduces the target
        let vals = [-2i64, -1, 0, 1, 2];
        let mut solved = 0;
        for a in vals {
            for b in vals {
                for c in vals {
                    for d in vals {
                        let basis = vec![rvec(&[a, b]), rvec(&[c, d])];
                        let target = rvec(&[1, -3]);
                        match solve_in_basis(&basis, &target) {
                            Ok(coef) => {
                                let got = vec_add(
                                    &vec_scale(&basis[0], &coef[0]),
                                    &vec_scale(&basis[1], &coef[1]),
                                );
                                assert_eq!(got, target);
                                solved += 1;
                            }
                            Err(ExactError::SingularBasis) => {
                                assert_eq!(rank_of(&basis), if a == 0 && b == 0 && c == 0 && d == 0 { 0 } else { 1 });
                            }
                            Err(e) => panic!("unexpected error {e:?}"),
                        }
                    }
                }
            }
        }
        assert!(solved > 400);
    }

    #[test]
    fn determinant_matches_hand_values() {
        assert_eq!(
            determinant(&[rvec(&[1, 0, 0]), rvec(&[2, 1, 0]), rvec(&[2, 1, 1])]).unwrap(),
            rint(1)
        );
        assert_eq!(
            determinant(&[rvec(&[1, 2, 2]), rvec(&[3, 4, 6]), rvec(&[1, 1, 1])]).unwrap(),
            rint(2)
        );
        assert_eq!(determinant(&[rvec(&[1, 2]), rvec(&[2, 4])]).unwrap(), rint(0));
    }

    #[test]
    fn rational_string_round_trip() {
        assert_eq!(rat_str(&rat(1, 2)), "1/2");
        assert_eq!(rat_str(&rint(-3)), "-3");
        assert_eq!(parse_rat("4/6").unwrap(), rat(2, 3));
        assert_eq!(parse_rat("-5").unwrap(), rint(-5));
        assert!(parse_rat("0.5").is_err());
    }
}
