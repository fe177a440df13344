//! Weighted metric trees: the path metric, the algorithmic embedding into
//! a weighted Hamming cube, and the closed-form constants (determinant,
//! cofactor sum, gap, M-constant) that depend only on the edge weights.

use crate::hamming::{CubeError, CubePoint, CubeSubset, WeightList};
use crate::linalg::LinAlgError;
use crate::linalg::Matrix;
use crate::negtype::{negative_type_gap, GapMethod, NegTypeError};
use crate::scalar::{Mode, Scalar, DEFAULT_TOL};
use crate::space::{FiniteMetricSpace, MetricError, Provenance};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TreeError {
    #[error("a tree on {vertices} vertices needs {expected} edges, got {got}")]
    WrongEdgeCount {
        vertices: usize,
        expected: usize,
        got: usize,
    },
    #[error("edge endpoint {0} out of range")]
    VertexOutOfRange(usize),
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("edge weight {0} is not positive")]
    NonPositiveWeight(usize),
    #[error("edge list does not connect all vertices")]
    Disconnected,
    #[error("a tree needs at least two vertices")]
    TooSmall,
    #[error("root {0} is not a vertex")]
    InvalidRoot(usize),
    #[error("experiment needs integer weights and an affinely independent full-dimension subset")]
    ExperimentPreconditions,
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error(transparent)]
    Cube(#[from] CubeError),
    #[error(transparent)]
    NegType(#[from] NegTypeError),
    #[error(transparent)]
    LinAlg(#[from] LinAlgError),
}

type Result<T> = std::result::Result<T, TreeError>;

/// A connected acyclic graph on `n+1` vertices with positive edge weights.
#[derive(Clone, Debug)]
pub struct WeightedTree {
    n_vertices: usize,
    edges: Vec<(usize, usize, Scalar)>,
}

impl WeightedTree {
    pub fn new(n_vertices: usize, edges: Vec<(usize, usize, Scalar)>) -> Result<Self> {
        if n_vertices < 2 {
            return Err(TreeError::TooSmall);
        }
        if edges.len() + 1 != n_vertices {
            return Err(TreeError::WrongEdgeCount {
                vertices: n_vertices,
                expected: n_vertices - 1,
                got: edges.len(),
            });
        }
        for (k, (u, v, w)) in edges.iter().enumerate() {
            if *u >= n_vertices {
                return Err(TreeError::VertexOutOfRange(*u));
            }
            if *v >= n_vertices {
                return Err(TreeError::VertexOutOfRange(*v));
            }
            if u == v {
                return Err(TreeError::SelfLoop(*u));
            }
            if !w.is_positive() {
                return Err(TreeError::NonPositiveWeight(k));
            }
        }
        let tree = WeightedTree { n_vertices, edges };
        // n edges on n+1 vertices are a tree exactly when connected
        let mut seen = vec![false; n_vertices];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &(a, b, _) in &tree.edges {
                let next = if a == v {
                    b
                } else if b == v {
                    a
                } else {
                    continue;
                };
                if !seen[next] {
                    seen[next] = true;
                    stack.push(next);
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(TreeError::Disconnected);
        }
        Ok(tree)
    }

    /// Path with unit weights on `n_vertices` vertices.
    pub fn unit_path(n_vertices: usize) -> Result<Self> {
        WeightedTree::new(
            n_vertices,
            (0..n_vertices - 1)
                .map(|i| (i, i + 1, Scalar::from_int(1)))
                .collect(),
        )
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize, Scalar)] {
        &self.edges
    }

    pub fn mode(&self) -> Mode {
        self.edges[0].2.mode()
    }

    pub fn weight_list(&self) -> WeightList {
        WeightList::new(self.edges.iter().map(|(_, _, w)| w.clone()).collect())
            .expect("positive weights checked at construction")
    }

    /// Distance matrix of the path metric, one graph traversal per vertex.
    pub fn tree_metric(&self) -> Result<FiniteMetricSpace> {
        let n = self.n_vertices;
        let mode = self.mode();
        let mut dist = Matrix::zeros(n, n, mode);
        for start in 0..n {
            let mut acc = vec![None::<Scalar>; n];
            acc[start] = Some(Scalar::zero(mode));
            let mut stack = vec![start];
            while let Some(v) = stack.pop() {
                let here = acc[v].clone().unwrap();
                for (a, b, w) in &self.edges {
                    let next = if *a == v {
                        *b
                    } else if *b == v {
                        *a
                    } else {
                        continue;
                    };
                    if acc[next].is_none() {
                        acc[next] = Some(&here + w);
                        stack.push(next);
                    }
                }
            }
            for (j, d) in acc.into_iter().enumerate() {
                dist.set(start, j, d.expect("connected"));
            }
        }
        Ok(FiniteMetricSpace::from_distance_matrix(
            dist,
            Provenance::Tree,
            DEFAULT_TOL,
        )?)
    }

    /// Isometric embedding into the weighted cube over the edge weights:
    /// coordinate `k` of vertex `v` is 1 exactly when edge `k` lies on the
    /// path from `root` to `v`. The image is affinely independent and its
    /// cube metric equals the tree metric entrywise.
    pub fn embed_in_cube(&self, root: usize) -> Result<CubeSubset> {
        if root >= self.n_vertices {
            return Err(TreeError::InvalidRoot(root));
        }
        let n = self.n_edges();
        let mut bits: Vec<Option<Vec<bool>>> = vec![None; self.n_vertices];
        bits[root] = Some(vec![false; n]);
        let mut stack = vec![root];
        while let Some(v) = stack.pop() {
            let here = bits[v].clone().unwrap();
            for (k, (a, b, _)) in self.edges.iter().enumerate() {
                let next = if *a == v {
                    *b
                } else if *b == v {
                    *a
                } else {
                    continue;
                };
                if bits[next].is_none() {
                    let mut nb = here.clone();
                    nb[k] = !nb[k];
                    bits[next] = Some(nb);
                    stack.push(next);
                }
            }
        }
        let points = bits
            .into_iter()
            .map(|b| CubePoint::new(b.expect("connected")))
            .collect();
        Ok(CubeSubset::new(self.weight_list(), points)?)
    }

    /// `(-1)^n 2^{n-1} (prod w)(sum w)`, independent of the tree shape.
    pub fn tree_det(&self) -> Scalar {
        let w = self.weight_list();
        let n = self.n_edges();
        let mode = self.mode();
        let two = &Scalar::one(mode) + &Scalar::one(mode);
        let mut value = &w.product() * &w.sum();
        for _ in 0..(n - 1) {
            value = &value * &two;
        }
        if n % 2 == 1 {
            value = -&value;
        }
        value
    }

    /// `(-1)^n 2^n prod w`; `(-2)^n` for unit weights.
    pub fn tree_cofactor(&self) -> Scalar {
        let w = self.weight_list();
        let n = self.n_edges();
        let mode = self.mode();
        let two = &Scalar::one(mode) + &Scalar::one(mode);
        let mut value = w.product();
        for _ in 0..n {
            value = &value * &two;
        }
        if n % 2 == 1 {
            value = -&value;
        }
        value
    }

    /// `(sum_k 1/w_k)^{-1}`, the 1-negative type gap of the tree metric.
    pub fn tree_gap(&self) -> Scalar {
        let mode = self.mode();
        let mut acc = Scalar::zero(mode);
        for (_, _, w) in &self.edges {
            acc = &acc + &w.recip();
        }
        acc.recip()
    }

    /// `M = (1/2) sum w` and the inverse-sum `<D^{-1} 1, 1> = 2 / sum w`.
    pub fn tree_m_and_inverse_sum(&self) -> TreeMConstants {
        let mode = self.mode();
        let two = &Scalar::one(mode) + &Scalar::one(mode);
        let sum = self.weight_list().sum();
        TreeMConstants {
            m: &sum / &two,
            inv_sum: &two / &sum,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TreeMConstants {
    pub m: Scalar,
    pub inv_sum: Scalar,
}

/// `prod w / (2 sum_j prod_{k != j} w_k)`: the ratio of the cube volume to
/// the total volume of its facets. Asserts the identity with half the
/// harmonic-form gap before returning.
pub fn volume_ratio(weights: &WeightList) -> Scalar {
    let mode = weights.mode();
    let two = &Scalar::one(mode) + &Scalar::one(mode);
    let n = weights.len();
    let mut facet_sum = Scalar::zero(mode);
    for j in 0..n {
        let mut prod = Scalar::one(mode);
        for k in 0..n {
            if k != j {
                prod = &prod * weights.get(k);
            }
        }
        facet_sum = &facet_sum + &prod;
    }
    let ratio = &weights.product() / &(&two * &facet_sum);
    // same value through the gap formula
    let mut inv = Scalar::zero(mode);
    for k in 0..n {
        inv = &inv + &weights.get(k).recip();
    }
    let half_gap = &inv.recip() / &two;
    assert!(
        ratio.approx_eq(&half_gap, 1e-12),
        "volume ratio must equal half the gap"
    );
    ratio
}

#[derive(Clone, Debug)]
pub struct IntegralityRecord {
    pub ratio: Scalar,
    pub is_integer: bool,
}

/// `(prod w) det(Bhat)^2 / Gamma_1(X)` for an affinely independent
/// full-dimension cube subset with integer weights. Reported, not
/// asserted: integrality of this ratio is an experimental observation.
pub fn integrality_experiment(x: &CubeSubset) -> Result<IntegralityRecord> {
    let n = x.n();
    let m = x.point_count() - 1;
    let integer_weights = x.weights().as_slice().iter().all(|w| w.is_exact_integer());
    if m != n || !integer_weights || !x.is_affinely_independent() {
        return Err(TreeError::ExperimentPreconditions);
    }
    let norm = x.normalize_base();
    let det_bhat = norm.incidence()?.bhat.det()?;
    let space = x.cube_metric()?;
    let gap = negative_type_gap(
        &space,
        &Scalar::from_int(1),
        GapMethod::SignEnum,
        DEFAULT_TOL,
    )?;
    let ratio = &(&x.weights().product() * &(&det_bhat * &det_bhat)) / &gap.gamma;
    let is_integer = match &ratio {
        Scalar::Exact(r) => r.is_integer(),
        Scalar::Float(v) => (v - v.round()).abs() <= DEFAULT_TOL,
    };
    Ok(IntegralityRecord { ratio, is_integer })
}
