//! The shipped example corpus: small spaces with hand-checked invariants,
//! available both programmatically and as JSON files under `fixtures/`.

use crate::hamming::CubeSubset;
use crate::linalg::{Matrix, Vector};
use crate::scalar::{Scalar, DEFAULT_TOL};
use crate::space::{FiniteMetricSpace, Provenance};
use crate::trees::WeightedTree;

/// Unweighted path on three vertices.
pub fn p3_tree() -> WeightedTree {
    WeightedTree::unit_path(3).expect("valid path")
}

pub fn p3_space() -> FiniteMetricSpace {
    p3_tree().tree_metric().expect("valid tree")
}

/// The star `K_{1,3}` as the cube subset `{000, 100, 010, 001}` with unit
/// weights.
pub fn star_cube() -> CubeSubset {
    CubeSubset::from_bits(
        &[1, 1, 1],
        &[vec![0, 0, 0], vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]],
    )
    .expect("valid cube subset")
}

pub fn star_space() -> FiniteMetricSpace {
    star_cube().cube_metric().expect("valid cube")
}

/// The star as a tree: centre 0 with three unit edges.
pub fn star_tree() -> WeightedTree {
    WeightedTree::new(
        4,
        vec![
            (0, 1, Scalar::from_int(1)),
            (0, 2, Scalar::from_int(1)),
            (0, 3, Scalar::from_int(1)),
        ],
    )
    .expect("valid tree")
}

/// Weighted path with edge weights 2 and 3.
pub fn p23_tree() -> WeightedTree {
    WeightedTree::new(
        3,
        vec![(0, 1, Scalar::from_int(2)), (1, 2, Scalar::from_int(3))],
    )
    .expect("valid tree")
}

pub fn p23_space() -> FiniteMetricSpace {
    p23_tree().tree_metric().expect("valid tree")
}

/// The embedded path: `{00, 10, 11}` over weights `[2, 3]`.
pub fn p23_cube() -> CubeSubset {
    CubeSubset::from_bits(&[2, 3], &[vec![0, 0], vec![1, 0], vec![1, 1]])
        .expect("valid cube subset")
}

/// Five-point raw space with `alpha = 12/7`: invertible distance matrix
/// but supremal exponent exactly 1.
pub fn alpha_space() -> FiniteMetricSpace {
    let a = Scalar::from_ratio(12, 7);
    let one = Scalar::from_int(1);
    let zero = Scalar::from_int(0);
    let rows = vec![
        vec![zero.clone(), a.clone(), a.clone(), one.clone(), one.clone()],
        vec![a.clone(), zero.clone(), a.clone(), one.clone(), one.clone()],
        vec![a.clone(), a.clone(), zero.clone(), one.clone(), one.clone()],
        vec![
            one.clone(),
            one.clone(),
            one.clone(),
            zero.clone(),
            a.clone(),
        ],
        vec![
            one.clone(),
            one.clone(),
            one.clone(),
            a.clone(),
            zero.clone(),
        ],
    ];
    FiniteMetricSpace::from_distance_matrix(
        Matrix::from_rows(rows).expect("rectangular"),
        Provenance::Raw,
        DEFAULT_TOL,
    )
    .expect("valid metric")
}

/// The value `12/7` used by [`alpha_space`].
pub fn alpha() -> Scalar {
    Scalar::from_ratio(12, 7)
}

/// Four l1 points whose distance matrix is invertible although the set is
/// affinely dependent.
pub fn quad_points() -> Vec<Vector> {
    vec![
        Vector::from_ints(&[0, 0]),
        Vector::from_ints(&[1, 0]),
        Vector::from_ints(&[1, 2]),
        Vector::from_ints(&[2, 2]),
    ]
}

pub fn quad_space() -> FiniteMetricSpace {
    FiniteMetricSpace::from_l1_points(&quad_points()).expect("distinct points")
}

/// Five l1 points on which the cube-only kernel classification fails.
pub fn pent_points() -> Vec<Vector> {
    vec![
        Vector::from_ints(&[0, 0]),
        Vector::from_ints(&[1, 0]),
        Vector::from_ints(&[0, 2]),
        Vector::from_ints(&[1, 2]),
        Vector::from_ints(&[2, 2]),
    ]
}

pub fn pent_space() -> FiniteMetricSpace {
    FiniteMetricSpace::from_l1_points(&pent_points()).expect("distinct points")
}

/// All four vertices of the unit 2-cube.
pub fn cube2_cube() -> CubeSubset {
    CubeSubset::from_bits(&[1, 1], &[vec![0, 0], vec![1, 0], vec![0, 1], vec![1, 1]])
        .expect("valid cube subset")
}

pub fn cube2_space() -> FiniteMetricSpace {
    cube2_cube().cube_metric().expect("valid cube")
}

/// The full cube over weights `[1, 2]`.
pub fn l_cube() -> CubeSubset {
    CubeSubset::from_bits(&[1, 2], &[vec![0, 0], vec![1, 0], vec![0, 1], vec![1, 1]])
        .expect("valid cube subset")
}

pub fn l_space() -> FiniteMetricSpace {
    l_cube().cube_metric().expect("valid cube")
}

/// Three-point ultrametric: two distances of 2, one of 1.
pub fn ultra_space() -> FiniteMetricSpace {
    FiniteMetricSpace::from_distance_matrix(
        Matrix::from_int_rows(&[vec![0, 2, 2], vec![2, 0, 1], vec![2, 1, 0]]),
        Provenance::Raw,
        DEFAULT_TOL,
    )
    .expect("valid metric")
}
