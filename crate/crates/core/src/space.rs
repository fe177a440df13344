//! Finite metric spaces, p-distance matrices, and zero-sum coefficient
//! vectors.

use crate::linalg::{LinAlgError, Matrix, Vector};
use crate::scalar::{Mode, Scalar};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MetricError {
    #[error("distance matrix must be square")]
    NotSquare,
    #[error("a metric space needs at least two points")]
    TooSmall,
    #[error("distance matrix is not symmetric at ({0},{1})")]
    NotSymmetric(usize, usize),
    #[error("diagonal entry {0} is nonzero")]
    NonzeroDiagonal(usize),
    #[error("distance between points {0} and {1} is not positive")]
    NonPositiveDistance(usize, usize),
    #[error("triangle inequality fails for points ({0},{1},{2})")]
    TriangleViolation(usize, usize, usize),
    #[error("points {0} and {1} coincide")]
    DuplicatePoints(usize, usize),
    #[error("points have inconsistent dimensions")]
    RaggedPoints,
    #[error("exponent p must be positive")]
    NonPositiveExponent,
    #[error("coefficient vector violates its hyperplane constraint")]
    HyperplaneViolation,
    #[error(transparent)]
    LinAlg(#[from] LinAlgError),
}

type Result<T> = std::result::Result<T, MetricError>;

/// Where a space's distance matrix came from. Spaces built from explicit
/// coordinates keep them, which later enables affine-dimension reports.
#[derive(Clone, Debug)]
pub enum Provenance {
    L1Points(Vec<Vector>),
    Cube,
    Tree,
    Raw,
}

impl Provenance {
    /// Spaces known to embed isometrically in l1.
    pub fn is_l1(&self) -> bool {
        !matches!(self, Provenance::Raw)
    }
}

/// A finite metric space given by its distance matrix. Construction
/// validates symmetry, the zero diagonal, positivity off the diagonal,
/// and the triangle inequality over all triples.
#[derive(Clone, Debug)]
pub struct FiniteMetricSpace {
    dist: Matrix,
    provenance: Provenance,
}

impl FiniteMetricSpace {
    pub fn from_distance_matrix(dist: Matrix, provenance: Provenance, tol: f64) -> Result<Self> {
        if dist.rows() != dist.cols() {
            return Err(MetricError::NotSquare);
        }
        let n = dist.rows();
        if n < 2 {
            return Err(MetricError::TooSmall);
        }
        let slack = match dist.mode() {
            Mode::Exact => 0.0,
            Mode::Float => tol,
        };
        for i in 0..n {
            if !dist.get(i, i).is_zero_with(slack) {
                return Err(MetricError::NonzeroDiagonal(i));
            }
            for j in (i + 1)..n {
                if !dist.get(i, j).approx_eq(dist.get(j, i), slack) {
                    return Err(MetricError::NotSymmetric(i, j));
                }
                let d = dist.get(i, j);
                if d.is_negative() || d.is_zero_with(slack) {
                    return Err(MetricError::NonPositiveDistance(i, j));
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let lhs = dist.get(i, j).to_f64();
                    let rhs = dist.get(i, k).to_f64() + dist.get(k, j).to_f64();
                    let exact_ok = match dist.mode() {
                        Mode::Exact => {
                            let sum = &(dist.get(i, k).clone()) + &(dist.get(k, j).clone());
                            !(dist.get(i, j) > &sum)
                        }
                        Mode::Float => lhs <= rhs + tol,
                    };
                    if !exact_ok {
                        return Err(MetricError::TriangleViolation(i, j, k));
                    }
                }
            }
        }
        Ok(FiniteMetricSpace { dist, provenance })
    }

    /// Builds the space on the given points with the l1 metric,
    /// `d(x,y) = sum_k |x_k - y_k|`. The coordinates are retained.
    pub fn from_l1_points(points: &[Vector]) -> Result<Self> {
        if points.len() < 2 {
            return Err(MetricError::TooSmall);
        }
        let dim = points[0].dim();
        if points.iter().any(|p| p.dim() != dim) {
            return Err(MetricError::RaggedPoints);
        }
        for i in 0..points.len() {
            for j in (i + 1)..points.len() {
                if points[i] == points[j] {
                    return Err(MetricError::DuplicatePoints(i, j));
                }
            }
        }
        let mode = points[0].mode();
        let dist = Matrix::from_fn(points.len(), points.len(), |i, j| {
            let mut acc = Scalar::zero(mode);
            for k in 0..dim {
                acc = &acc + &(points[i].get(k) - points[j].get(k)).abs();
            }
            acc
        })?;
        FiniteMetricSpace::from_distance_matrix(
            dist,
            Provenance::L1Points(points.to_vec()),
            crate::scalar::DEFAULT_TOL,
        )
    }

    /// Number of points, `m + 1`.
    pub fn size(&self) -> usize {
        self.dist.rows()
    }

    pub fn distance_matrix(&self) -> &Matrix {
        &self.dist
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn mode(&self) -> Mode {
        self.dist.mode()
    }

    pub fn to_float(&self) -> FiniteMetricSpace {
        FiniteMetricSpace {
            dist: self.dist.to_float(),
            provenance: self.provenance.clone(),
        }
    }

    /// Largest distance in the space.
    pub fn diameter(&self) -> Scalar {
        let n = self.size();
        let mut best = self.dist.get(0, 1).clone();
        for i in 0..n {
            for j in (i + 1)..n {
                if self.dist.get(i, j) > &best {
                    best = self.dist.get(i, j).clone();
                }
            }
        }
        best
    }

    /// `d(x,z) <= max(d(x,y), d(y,z))` over all triples.
    pub fn is_ultrametric(&self) -> bool {
        let n = self.size();
        for i in 0..n {
            for k in 0..n {
                for j in 0..n {
                    let a = self.dist.get(i, k);
                    let b = self.dist.get(i, j);
                    let c = self.dist.get(j, k);
                    let max = if b > c { b } else { c };
                    if a > max {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Entrywise `d^p` for `p > 0`. Stays exact when the base is exact and
    /// `p` is a positive integer; `p = 1` reproduces the distance matrix
    /// bit for bit; otherwise the result is float.
    pub fn p_distance(&self, p: &Scalar) -> Result<PDistanceMatrix> {
        if !p.is_positive() {
            return Err(MetricError::NonPositiveExponent);
        }
        Ok(PDistanceMatrix {
            base: self.clone(),
            p: p.clone(),
            matrix: self.pow_entries(p),
        })
    }

    /// Like [`Self::p_distance`] but also admits `p = 0`, with the
    /// convention that the diagonal stays zero.
    pub(crate) fn pow_entries(&self, p: &Scalar) -> Matrix {
        if p == &Scalar::from_int(1) || p == &Scalar::Float(1.0) {
            return self.dist.clone();
        }
        let exact_exponent = match p {
            Scalar::Exact(r) if r.is_integer() && p.is_positive() => {
                use num::ToPrimitive;
                r.numer().to_u32()
            }
            _ => None,
        };
        match (self.mode(), exact_exponent) {
            (Mode::Exact, Some(e)) => Matrix::from_fn(self.size(), self.size(), |i, j| {
                if i == j {
                    Scalar::zero(Mode::Exact)
                } else {
                    self.dist.get(i, j).pow_u32(e)
                }
            })
            .unwrap(),
            _ => {
                let pf = p.to_f64();
                Matrix::from_fn(self.size(), self.size(), |i, j| {
                    Scalar::Float(self.dist.get(i, j).metric_pow(pf))
                })
                .unwrap()
            }
        }
    }
}

/// The p-th entrywise power of a distance matrix, together with the space
/// it came from.
#[derive(Clone, Debug)]
pub struct PDistanceMatrix {
    pub base: FiniteMetricSpace,
    pub p: Scalar,
    pub matrix: Matrix,
}

/// Hyperplane constraint carried by a coefficient vector.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Hyperplane {
    /// Entries sum to zero.
    F0,
    /// Entries sum to one.
    F1,
    /// No constraint.
    Free,
}

/// A coefficient vector together with the hyperplane it is claimed to lie
/// on; the claim is validated at construction.
#[derive(Clone, Debug)]
pub struct CoefficientVector {
    xi: Vector,
    hyperplane: Hyperplane,
}

impl CoefficientVector {
    pub fn new(xi: Vector, hyperplane: Hyperplane, tol: f64) -> Result<Self> {
        let sum = xi.sum();
        let ok = match hyperplane {
            Hyperplane::F0 => sum.is_zero_with(tol),
            Hyperplane::F1 => (&sum - &Scalar::one(xi.mode())).is_zero_with(tol),
            Hyperplane::Free => true,
        };
        if !ok {
            return Err(MetricError::HyperplaneViolation);
        }
        Ok(CoefficientVector { xi, hyperplane })
    }

    pub fn xi(&self) -> &Vector {
        &self.xi
    }

    pub fn hyperplane(&self) -> Hyperplane {
        self.hyperplane
    }
}

/// The `m` difference vectors `e_i - e_0`, a basis of the zero-sum
/// hyperplane for spaces with `size` points.
pub fn f0_difference_basis(size: usize, mode: Mode) -> Result<Vec<CoefficientVector>> {
    if size < 2 {
        return Err(MetricError::TooSmall);
    }
    let mut out = Vec::with_capacity(size - 1);
    for i in 1..size {
        let mut v = vec![Scalar::zero(mode); size];
        v[0] = -&Scalar::one(mode);
        v[i] = Scalar::one(mode);
        out.push(CoefficientVector::new(
            Vector::new(v)?,
            Hyperplane::F0,
            0.0,
        )?);
    }
    Ok(out)
}
