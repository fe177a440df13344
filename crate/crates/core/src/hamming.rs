//! Subsets of weighted Hamming cubes: incidence and Gram data, closed forms
//! for the determinant, cofactor sum and M-constant of the distance matrix,
//! the square-root embedding, and the kernel/rank structure.

use crate::linalg::{LinAlgError, Matrix, Vector};
use crate::scalar::{Mode, Scalar, DEFAULT_TOL};
use crate::space::{CoefficientVector, FiniteMetricSpace, Hyperplane, MetricError, Provenance};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CubeError {
    #[error("weight {0} is not positive")]
    NonPositiveWeight(usize),
    #[error("weight list must be nonempty")]
    EmptyWeights,
    #[error("point {index} has {got} bits, expected {expected}")]
    WrongBitLength {
        index: usize,
        got: usize,
        expected: usize,
    },
    #[error("points {0} and {1} have identical bit vectors")]
    DuplicatePoint(usize, usize),
    #[error("operation needs at least {0} points")]
    TooFewPoints(usize),
    #[error("base point must be the all-zeros vertex")]
    UnnormalizedBase,
    #[error("closed form needs m = n and affine independence (m = {m}, n = {n})")]
    ClosedFormInapplicable { m: usize, n: usize },
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error(transparent)]
    LinAlg(#[from] LinAlgError),
}

type Result<T> = std::result::Result<T, CubeError>;

/// Positive cube weights `w_1..w_n`, one per coordinate.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightList {
    weights: Vec<Scalar>,
}

impl WeightList {
    pub fn new(weights: Vec<Scalar>) -> Result<Self> {
        if weights.is_empty() {
            return Err(CubeError::EmptyWeights);
        }
        for (k, w) in weights.iter().enumerate() {
            if !w.is_positive() {
                return Err(CubeError::NonPositiveWeight(k));
            }
        }
        Ok(WeightList { weights })
    }

    pub fn unit(n: usize) -> Self {
        WeightList::new(vec![Scalar::from_int(1); n]).unwrap()
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn get(&self, k: usize) -> &Scalar {
        &self.weights[k]
    }

    pub fn as_slice(&self) -> &[Scalar] {
        &self.weights
    }

    pub fn mode(&self) -> Mode {
        self.weights[0].mode()
    }

    pub fn sum(&self) -> Scalar {
        let mut acc = Scalar::zero(self.mode());
        for w in &self.weights {
            acc = &acc + w;
        }
        acc
    }

    pub fn product(&self) -> Scalar {
        let mut acc = Scalar::one(self.mode());
        for w in &self.weights {
            acc = &acc * w;
        }
        acc
    }
}

/// A cube vertex as a bit vector; coordinate `k` of the embedded point is
/// `w_k * b_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CubePoint {
    bits: Vec<bool>,
}

impl CubePoint {
    pub fn new(bits: Vec<bool>) -> Self {
        CubePoint { bits }
    }

    pub fn from_u8(bits: &[u8]) -> Self {
        CubePoint {
            bits: bits.iter().map(|&b| b != 0).collect(),
        }
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }
}

/// A finite set of distinct vertices of the weighted cube.
#[derive(Clone, Debug, PartialEq)]
pub struct CubeSubset {
    weights: WeightList,
    points: Vec<CubePoint>,
}

impl CubeSubset {
    pub fn new(weights: WeightList, points: Vec<CubePoint>) -> Result<Self> {
        let n = weights.len();
        if points.is_empty() {
            return Err(CubeError::TooFewPoints(1));
        }
        for (i, p) in points.iter().enumerate() {
            if p.len() != n {
                return Err(CubeError::WrongBitLength {
                    index: i,
                    got: p.len(),
                    expected: n,
                });
            }
        }
        for i in 0..points.len() {
            for j in (i + 1)..points.len() {
                if points[i] == points[j] {
                    return Err(CubeError::DuplicatePoint(i, j));
                }
            }
        }
        Ok(CubeSubset { weights, points })
    }

    /// Convenience constructor from 0/1 rows and integer weights.
    pub fn from_bits(weights: &[i64], rows: &[Vec<u8>]) -> Result<Self> {
        let wl = WeightList::new(weights.iter().map(|&w| Scalar::from_int(w)).collect())?;
        CubeSubset::new(wl, rows.iter().map(|r| CubePoint::from_u8(r)).collect())
    }

    pub fn weights(&self) -> &WeightList {
        &self.weights
    }

    pub fn points(&self) -> &[CubePoint] {
        &self.points
    }

    pub fn n(&self) -> usize {
        self.weights.len()
    }

    pub fn point_count(&self) -> usize {
        self.points.len()
    }

    pub fn mode(&self) -> Mode {
        self.weights.mode()
    }

    /// Point `i` as a coordinate vector, entry `k` equal to `w_k b_{i,k}`.
    pub fn coordinates(&self) -> Vec<Vector> {
        let mode = self.mode();
        self.points
            .iter()
            .map(|p| {
                Vector::new(
                    (0..self.n())
                        .map(|k| {
                            if p.bits[k] {
                                self.weights.get(k).clone()
                            } else {
                                Scalar::zero(mode)
                            }
                        })
                        .collect(),
                )
                .unwrap()
            })
            .collect()
    }

    /// The metric space with `d(x,y) = sum_k w_k |b_{x,k} - b_{y,k}|`.
    pub fn cube_metric(&self) -> Result<FiniteMetricSpace> {
        if self.point_count() < 2 {
            return Err(CubeError::TooFewPoints(2));
        }
        let mode = self.mode();
        let m = self.point_count();
        let dist = Matrix::from_fn(m, m, |i, j| {
            let mut acc = Scalar::zero(mode);
            for k in 0..self.n() {
                if self.points[i].bits[k] != self.points[j].bits[k] {
                    acc = &acc + self.weights.get(k);
                }
            }
            acc
        })?;
        Ok(FiniteMetricSpace::from_distance_matrix(
            dist,
            Provenance::Cube,
            DEFAULT_TOL,
        )?)
    }

    /// Reflects coordinates so the first point becomes the all-zeros vertex.
    /// Reflections are isometries, so the distance matrix is unchanged.
    pub fn normalize_base(&self) -> CubeSubset {
        let flips: Vec<bool> = self.points[0].bits.clone();
        let points = self
            .points
            .iter()
            .map(|p| CubePoint::new(p.bits.iter().zip(&flips).map(|(&b, &f)| b != f).collect()))
            .collect();
        CubeSubset {
            weights: self.weights.clone(),
            points,
        }
    }

    fn is_normalized(&self) -> bool {
        self.points[0].bits.iter().all(|&b| !b)
    }

    /// Incidence data of a normalized subset: `B` (weighted coordinate
    /// rows), `Bhat` (bit rows), the weighted Gram matrix
    /// `G_W = Bhat W Bhat^T`, and the norm vector `u = B 1`.
    pub fn incidence(&self) -> Result<IncidenceData> {
        if !self.is_normalized() {
            return Err(CubeError::UnnormalizedBase);
        }
        if self.point_count() < 2 {
            return Err(CubeError::TooFewPoints(2));
        }
        let mode = self.mode();
        let m = self.point_count() - 1;
        let n = self.n();
        let bhat = Matrix::from_fn(m, n, |i, k| {
            if self.points[i + 1].bits[k] {
                Scalar::one(mode)
            } else {
                Scalar::zero(mode)
            }
        })?;
        let b = Matrix::from_fn(m, n, |i, k| {
            if self.points[i + 1].bits[k] {
                self.weights.get(k).clone()
            } else {
                Scalar::zero(mode)
            }
        })?;
        let g_w = Matrix::from_fn(m, m, |i, j| {
            let mut acc = Scalar::zero(mode);
            for k in 0..n {
                if self.points[i + 1].bits[k] && self.points[j + 1].bits[k] {
                    acc = &acc + self.weights.get(k);
                }
            }
            acc
        })?;
        let u = Vector::new(
            (0..m)
                .map(|i| {
                    let mut acc = Scalar::zero(mode);
                    for k in 0..n {
                        if self.points[i + 1].bits[k] {
                            acc = &acc + self.weights.get(k);
                        }
                    }
                    acc
                })
                .collect(),
        )?;
        Ok(IncidenceData { b, bhat, g_w, u })
    }

    /// `det(D_X)` through the bordered Gram identity
    /// `det(D_X) = (-2)^{m-1} det [[0, u^T], [u, G_W]]`.
    pub fn det_via_gram(&self) -> Result<Scalar> {
        let norm = self.normalize_base();
        let inc = norm.incidence()?;
        let m = norm.point_count() - 1;
        let mode = norm.mode();
        let bordered = Matrix::from_fn(m + 1, m + 1, |i, j| match (i, j) {
            (0, 0) => Scalar::zero(mode),
            (0, j) => inc.u.get(j - 1).clone(),
            (i, 0) => inc.u.get(i - 1).clone(),
            (i, j) => inc.g_w.get(i - 1, j - 1).clone(),
        })?;
        let mut factor = Scalar::one(mode);
        let two = &Scalar::one(mode) + &Scalar::one(mode);
        for _ in 0..(m - 1) {
            factor = &factor * &two;
        }
        if (m - 1) % 2 == 1 {
            factor = -&factor;
        }
        Ok(&factor * &bordered.det()?)
    }

    /// Full-dimension determinant formula
    /// `(-1)^n 2^{n-1} (prod w_k)(sum w_k) det(Bhat)^2`; applicable only
    /// when `m = n` and the subset is affinely independent.
    pub fn det_closed_form(&self) -> Result<Scalar> {
        let norm = self.normalize_base();
        let m = norm.point_count() - 1;
        let n = norm.n();
        if m != n || !norm.is_affinely_independent() {
            return Err(CubeError::ClosedFormInapplicable { m, n });
        }
        let inc = norm.incidence()?;
        let det_bhat = inc.bhat.det()?;
        let mode = norm.mode();
        let two = &Scalar::one(mode) + &Scalar::one(mode);
        let mut value = &self.weights.product() * &self.weights.sum();
        for _ in 0..(n - 1) {
            value = &value * &two;
        }
        value = &value * &(&det_bhat * &det_bhat);
        if n % 2 == 1 {
            value = -&value;
        }
        Ok(value)
    }

    /// Cofactor-sum formula `(-1)^n 2^n (prod w_k) det(Bhat)^2`, valid for
    /// any subset with `m = n` (affinely dependent sets give 0).
    pub fn cofactor_closed_form(&self) -> Result<Scalar> {
        let norm = self.normalize_base();
        let m = norm.point_count() - 1;
        let n = norm.n();
        if m != n {
            return Err(CubeError::ClosedFormInapplicable { m, n });
        }
        let inc = norm.incidence()?;
        let det_bhat = inc.bhat.det()?;
        let mode = norm.mode();
        let two = &Scalar::one(mode) + &Scalar::one(mode);
        let mut value = self.weights.product();
        for _ in 0..n {
            value = &value * &two;
        }
        value = &value * &(&det_bhat * &det_bhat);
        if n % 2 == 1 {
            value = -&value;
        }
        Ok(value)
    }

    /// Affine independence of the point set, decided by the rank of the
    /// bit-difference rows. In exact mode the Gram-determinant routes are
    /// computed as well and must agree.
    pub fn is_affinely_independent(&self) -> bool {
        let norm = self.normalize_base();
        let m = norm.point_count() - 1;
        if m == 0 {
            return true;
        }
        let inc = norm.incidence().expect("normalized with >= 2 points");
        let by_rank = inc.bhat.rank(DEFAULT_TOL) == m;
        if norm.mode() == Mode::Exact {
            let by_gw = !inc.g_w.det().expect("square").is_zero();
            let ghat = inc.bhat.matmul(&inc.bhat.transpose()).expect("conformal");
            let by_ghat = !ghat.det().expect("square").is_zero();
            assert_eq!(by_rank, by_gw, "rank and G_W determinant tests disagree");
            assert_eq!(by_rank, by_ghat, "rank and Gram determinant tests disagree");
        }
        by_rank
    }

    /// The square-root embedding `x -> W^{1/2} bhat(x)`, whose squared
    /// Euclidean distances reproduce the cube metric, together with the
    /// circumscribed sphere data and the exact squared distance from the
    /// sphere centre to the affine hull of the embedded points.
    pub fn s_embed(&self) -> EmbeddingGeometry {
        let n = self.n();
        let mode = self.mode();
        let sqrt_w: Vec<f64> = (0..n)
            .map(|k| self.weights.get(k).to_f64().sqrt())
            .collect();
        let iota_points: Vec<Vec<f64>> = self
            .points
            .iter()
            .map(|p| {
                (0..n)
                    .map(|k| if p.bits[k] { sqrt_w[k] } else { 0.0 })
                    .collect()
            })
            .collect();
        let center: Vec<f64> = sqrt_w.iter().map(|s| s / 2.0).collect();
        let quarter = Scalar::from_ratio(1, 4);
        let quarter = match mode {
            Mode::Exact => quarter,
            Mode::Float => quarter.to_float(),
        };
        let r_sq = &self.weights.sum() * &quarter;
        let dist_to_hull_sq = self.dist_center_to_hull_sq();
        EmbeddingGeometry {
            iota_points,
            center,
            r_sq,
            dist_to_hull_sq,
        }
    }

    /// Squared Euclidean distance from the sphere centre to the affine hull
    /// of the embedded points, via normal equations on an independent set
    /// of difference vectors. Exact when the weights are exact: every inner
    /// product involved is a rational combination of the weights.
    fn dist_center_to_hull_sq(&self) -> Scalar {
        let mode = self.mode();
        let n = self.n();
        let m = self.point_count() - 1;
        let half = match mode {
            Mode::Exact => Scalar::from_ratio(1, 2),
            Mode::Float => Scalar::Float(0.5),
        };
        let quarter = &half * &half;
        let r_sq = &self.weights.sum() * &quarter;
        if m == 0 {
            return r_sq;
        }
        let base = &self.points[0];
        // delta[i][k] = b_{i+1,k} - b_{0,k} as scalars
        let delta = |i: usize, k: usize| -> Scalar {
            let a = self.points[i + 1].bits[k];
            let b = base.bits[k];
            match (a, b) {
                (true, false) => Scalar::one(mode),
                (false, true) => -&Scalar::one(mode),
                _ => Scalar::zero(mode),
            }
        };
        // greedy rank-revealing selection of independent difference rows
        let diff = Matrix::from_fn(m, n, |i, k| delta(i, k)).unwrap();
        let rank = diff.rank(DEFAULT_TOL);
        let mut pivot_rows: Vec<usize> = Vec::new();
        for i in 0..m {
            if pivot_rows.len() == rank {
                break;
            }
            let mut candidate = pivot_rows.clone();
            candidate.push(i);
            let sub = Matrix::from_fn(candidate.len(), n, |r, k| diff.get(candidate[r], k).clone())
                .unwrap();
            if sub.rank(DEFAULT_TOL) == candidate.len() {
                pivot_rows = candidate;
            }
        }
        let r = pivot_rows.len();
        // Gram of the chosen embedded differences and their inner products
        // with v = h - iota(x_0); all rational in the weights
        let gram = Matrix::from_fn(r, r, |a, b| {
            let mut acc = Scalar::zero(mode);
            for k in 0..n {
                let term =
                    &(&delta(pivot_rows[a], k) * &delta(pivot_rows[b], k)) * self.weights.get(k);
                acc = &acc + &term;
            }
            acc
        })
        .unwrap();
        let rhs = Vector::new(
            (0..r)
                .map(|a| {
                    let mut acc = Scalar::zero(mode);
                    for k in 0..n {
                        let half_minus_b0 = if base.bits[k] { -&half } else { half.clone() };
                        let term =
                            &(&half_minus_b0 * &delta(pivot_rows[a], k)) * self.weights.get(k);
                        acc = &acc + &term;
                    }
                    acc
                })
                .collect(),
        )
        .unwrap();
        if r == 0 {
            return r_sq;
        }
        let coeffs = gram
            .solve(&rhs, DEFAULT_TOL)
            .expect("square system")
            .expect("Gram of independent vectors is invertible");
        let proj_sq = coeffs.dot(&rhs).expect("conformal");
        &r_sq - &proj_sq
    }

    /// `M(X) = (1/2) sum w_k - 2 d_2(h, Z_X)^2`.
    pub fn m_constant_geometric(&self) -> Scalar {
        let mode = self.mode();
        let half = match mode {
            Mode::Exact => Scalar::from_ratio(1, 2),
            Mode::Float => Scalar::Float(0.5),
        };
        let two = &Scalar::one(mode) + &Scalar::one(mode);
        let dist_sq = self.dist_center_to_hull_sq();
        &(&self.weights.sum() * &half) - &(&two * &dist_sq)
    }

    /// Basis of `ker(D_X)`; for cube subsets this coincides with the
    /// zero-sum vectors annihilating the points,
    /// `{xi in F_0 : sum_i xi_i x_i = 0}`.
    pub fn polygonal_kernel(&self) -> Result<Vec<CoefficientVector>> {
        let space = self.cube_metric()?;
        let basis = space.distance_matrix().kernel_basis(DEFAULT_TOL);
        basis
            .into_iter()
            .map(|v| {
                CoefficientVector::new(v, Hyperplane::F0, DEFAULT_TOL).map_err(CubeError::from)
            })
            .collect()
    }

    /// Both sides of the rank identity: the rank of `D_X` and the dimension
    /// of the span of the difference vectors, computed independently. The
    /// cube-subset contract is `rank_d = affine_dim + 1`.
    pub fn rank_identity(&self) -> Result<RankIdentity> {
        let space = self.cube_metric()?;
        let rank_d = space.distance_matrix().rank(DEFAULT_TOL);
        let coords = self.coordinates();
        let m = self.point_count() - 1;
        let diff = Matrix::from_fn(m.max(1), self.n(), |i, k| {
            if m == 0 {
                Scalar::zero(self.mode())
            } else {
                coords[i + 1].get(k) - coords[0].get(k)
            }
        })?;
        let affine_dim = if m == 0 { 0 } else { diff.rank(DEFAULT_TOL) };
        Ok(RankIdentity { rank_d, affine_dim })
    }
}

/// Incidence matrices of a normalized cube subset.
#[derive(Clone, Debug)]
pub struct IncidenceData {
    /// Weighted coordinate rows, `B = Bhat W`.
    pub b: Matrix,
    /// 0/1 rows of the base-point-free vertices.
    pub bhat: Matrix,
    /// Weighted Gram matrix `Bhat W Bhat^T`.
    pub g_w: Matrix,
    /// l1 norms of the nonzero points, `u = B 1`.
    pub u: Vector,
}

/// Output of the square-root embedding.
#[derive(Clone, Debug)]
pub struct EmbeddingGeometry {
    pub iota_points: Vec<Vec<f64>>,
    pub center: Vec<f64>,
    /// Squared circumradius, `(1/4) sum w_k`.
    pub r_sq: Scalar,
    /// Squared distance from the centre to the affine hull of the points.
    pub dist_to_hull_sq: Scalar,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankIdentity {
    pub rank_d: usize,
    pub affine_dim: usize,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn star() -> CubeSubset {
        CubeSubset::from_bits(
            &[1, 1, 1],
            &[vec![0, 0, 0], vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]],
        )
        .unwrap()
    }

    fn cube2() -> CubeSubset {
        CubeSubset::from_bits(&[1, 1], &[vec![0, 0], vec![1, 0], vec![0, 1], vec![1, 1]]).unwrap()
    }

    fn ell() -> CubeSubset {
        CubeSubset::from_bits(&[1, 2], &[vec![0, 0], vec![1, 0], vec![0, 1], vec![1, 1]]).unwrap()
    }

    fn p23_embedded() -> CubeSubset {
        CubeSubset::from_bits(&[2, 3], &[vec![0, 0], vec![1, 0], vec![1, 1]]).unwrap()
    }

    #[test]
    fn cube_metric_examples() {
        let s = star().cube_metric().unwrap();
        assert_eq!(
            s.distance_matrix(),
            &Matrix::from_int_rows(&[
                vec![0, 1, 1, 1],
                vec![1, 0, 2, 2],
                vec![1, 2, 0, 2],
                vec![1, 2, 2, 0],
            ])
        );
        let l = ell().cube_metric().unwrap();
        assert_eq!(
            l.distance_matrix(),
            &Matrix::from_int_rows(&[
                vec![0, 1, 2, 3],
                vec![1, 0, 3, 2],
                vec![2, 3, 0, 1],
                vec![3, 2, 1, 0],
            ])
        );
        let p = p23_embedded().cube_metric().unwrap();
        assert_eq!(
            p.distance_matrix(),
            &Matrix::from_int_rows(&[vec![0, 2, 5], vec![2, 0, 3], vec![5, 3, 0]])
        );
    }

    #[test]
    fn normalize_base_is_isometry() {
        let x = CubeSubset::from_bits(&[1, 1], &[vec![1, 1], vec![0, 1]]).unwrap();
        let n = x.normalize_base();
        assert_eq!(n.points()[0], CubePoint::from_u8(&[0, 0]));
        assert_eq!(n.points()[1], CubePoint::from_u8(&[1, 0]));
        for fixture in [star(), cube2(), ell(), p23_embedded()] {
            let shifted = CubeSubset::new(
                fixture.weights().clone(),
                fixture
                    .points()
                    .iter()
                    .map(|p| CubePoint::new(p.bits().iter().map(|&b| !b).collect()))
                    .collect(),
            )
            .unwrap();
            let renorm = shifted.normalize_base();
            assert_eq!(
                renorm.cube_metric().unwrap().distance_matrix(),
                fixture.cube_metric().unwrap().distance_matrix()
            );
        }
    }

    #[test]
    fn incidence_examples() {
        let inc = star().incidence().unwrap();
        assert_eq!(inc.bhat, Matrix::identity(3, Mode::Exact));
        assert_eq!(inc.g_w, Matrix::identity(3, Mode::Exact));
        assert_eq!(inc.u, Vector::from_ints(&[1, 1, 1]));

        let inc = p23_embedded().incidence().unwrap();
        assert_eq!(inc.bhat, Matrix::from_int_rows(&[vec![1, 0], vec![1, 1]]));
        assert_eq!(inc.g_w, Matrix::from_int_rows(&[vec![2, 2], vec![2, 5]]));
        assert_eq!(inc.u, Vector::from_ints(&[2, 5]));

        let inc = cube2().incidence().unwrap();
        assert_eq!(
            inc.bhat,
            Matrix::from_int_rows(&[vec![1, 0], vec![0, 1], vec![1, 1]])
        );
        assert_eq!(
            inc.g_w,
            Matrix::from_int_rows(&[vec![1, 0, 1], vec![0, 1, 1], vec![1, 1, 2]])
        );
        assert_eq!(inc.u, Vector::from_ints(&[1, 1, 2]));

        let unnorm = CubeSubset::from_bits(&[1], &[vec![1], vec![0]]).unwrap();
        assert!(matches!(
            unnorm.incidence(),
            Err(CubeError::UnnormalizedBase)
        ));
    }

    #[test]
    fn determinant_routes_agree() {
        assert_eq!(star().det_via_gram().unwrap(), Scalar::from_int(-12));
        assert_eq!(star().det_closed_form().unwrap(), Scalar::from_int(-12));
        assert_eq!(
            star()
                .cube_metric()
                .unwrap()
                .distance_matrix()
                .det()
                .unwrap(),
            Scalar::from_int(-12)
        );

        assert_eq!(p23_embedded().det_via_gram().unwrap(), Scalar::from_int(60));
        assert_eq!(
            p23_embedded().det_closed_form().unwrap(),
            Scalar::from_int(60)
        );

        assert_eq!(cube2().det_via_gram().unwrap(), Scalar::from_int(0));
        assert!(cube2().det_closed_form().is_err());

        let tri = CubeSubset::from_bits(&[2, 3], &[vec![0, 0], vec![1, 0], vec![0, 1]]).unwrap();
        assert_eq!(tri.det_closed_form().unwrap(), Scalar::from_int(60));
    }

    #[test]
    fn cofactor_closed_form_examples() {
        assert_eq!(star().cofactor_closed_form().unwrap(), Scalar::from_int(-8));
        assert_eq!(
            p23_embedded().cofactor_closed_form().unwrap(),
            Scalar::from_int(24)
        );
        // affinely dependent with m = n gives zero
        let dep = CubeSubset::from_bits(
            &[1, 1, 1],
            &[vec![0, 0, 0], vec![1, 0, 0], vec![0, 1, 0], vec![1, 1, 0]],
        )
        .unwrap();
        assert_eq!(dep.cofactor_closed_form().unwrap(), Scalar::from_int(0));
        assert!(star().cofactor_closed_form().is_ok());
        assert!(cube2().cofactor_closed_form().is_err()); // m = 3 != n = 2
    }

    #[test]
    fn affine_independence_examples() {
        assert!(star().is_affinely_independent());
        assert!(!cube2().is_affinely_independent());
        assert!(!ell().is_affinely_independent());
    }

    #[test]
    fn s_embed_geometry() {
        let g = star().s_embed();
        assert_eq!(g.iota_points[0], vec![0.0, 0.0, 0.0]);
        assert_eq!(g.iota_points[1], vec![1.0, 0.0, 0.0]);
        assert_eq!(g.center, vec![0.5, 0.5, 0.5]);
        assert_eq!(g.r_sq, Scalar::from_ratio(3, 4));
        assert_eq!(g.dist_to_hull_sq, Scalar::from_int(0));

        let two = CubeSubset::from_bits(&[4, 6], &[vec![0, 0], vec![1, 0]]).unwrap();
        let g = two.s_embed();
        assert_eq!(g.dist_to_hull_sq, Scalar::from_ratio(6, 4));

        // squared embedded distances reproduce the cube metric, and every
        // embedded point sits on the sphere around the centre
        for x in [star(), cube2(), ell(), p23_embedded()] {
            let g = x.s_embed();
            let d = x.cube_metric().unwrap();
            for i in 0..x.point_count() {
                for j in 0..x.point_count() {
                    let sq: f64 = g.iota_points[i]
                        .iter()
                        .zip(&g.iota_points[j])
                        .map(|(a, b)| (a - b) * (a - b))
                        .sum();
                    assert!((sq - d.distance_matrix().get(i, j).to_f64()).abs() < 1e-12);
                }
                let to_center: f64 = g.iota_points[i]
                    .iter()
                    .zip(&g.center)
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum();
                assert!((to_center - g.r_sq.to_f64()).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn bhat_satisfies_cauchy_binet() {
        let inc = star().incidence().unwrap();
        let cb = inc.bhat.cauchy_binet_check().unwrap();
        assert_eq!(cb.lhs, Scalar::from_int(1));
        assert_eq!(cb.rhs, Scalar::from_int(1));
    }

    #[test]
    fn m_constant_geometric_examples() {
        assert_eq!(star().m_constant_geometric(), Scalar::from_ratio(3, 2));
        assert_eq!(
            p23_embedded().m_constant_geometric(),
            Scalar::from_ratio(5, 2)
        );
        let two = CubeSubset::from_bits(&[4, 6], &[vec![0, 0], vec![1, 0]]).unwrap();
        assert_eq!(two.m_constant_geometric(), Scalar::from_int(2));
    }

    #[test]
    fn polygonal_kernel_examples() {
        let k = cube2().polygonal_kernel().unwrap();
        assert_eq!(k.len(), 1);
        assert_eq!(k[0].xi(), &Vector::from_ints(&[1, -1, -1, 1]));
        let k = ell().polygonal_kernel().unwrap();
        assert_eq!(k.len(), 1);
        assert_eq!(k[0].xi(), &Vector::from_ints(&[1, -1, -1, 1]));
        assert!(star().polygonal_kernel().unwrap().is_empty());
    }

    #[test]
    fn rank_identity_examples() {
        assert_eq!(
            cube2().rank_identity().unwrap(),
            RankIdentity {
                rank_d: 3,
                affine_dim: 2
            }
        );
        assert_eq!(
            star().rank_identity().unwrap(),
            RankIdentity {
                rank_d: 4,
                affine_dim: 3
            }
        );
        assert_eq!(
            ell().rank_identity().unwrap(),
            RankIdentity {
                rank_d: 3,
                affine_dim: 2
            }
        );
    }

    #[test]
    fn duplicate_points_rejected() {
        assert!(matches!(
            CubeSubset::from_bits(&[1, 1], &[vec![0, 1], vec![0, 1]]),
            Err(CubeError::DuplicatePoint(0, 1))
        ));
    }
}
