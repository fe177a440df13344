//! Assembly of the full invariant report for one input, and the raw
//! parameter scan. The command-line front end only parses files, calls
//! into here, and serializes the result.

use crate::hamming::{CubeError, CubeSubset};
use crate::linalg::{dense, LinAlgError, Matrix, Vector};
use crate::negtype::{
    is_p_negative_type, negative_type_gap, supremal_p, GapMethod, NegTypeError, SupremalConfig,
    WpValue,
};
use crate::oracles::{m_constant_direct, verify_omnibus, MValue, OmnibusReport, OracleError};
use crate::scalar::{Mode, Scalar};
use crate::space::{FiniteMetricSpace, MetricError, Provenance};
use crate::trees::{TreeError, WeightedTree};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("scan needs pmin < pmax and at least two steps")]
    BadScanRange,
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error(transparent)]
    Cube(#[from] CubeError),
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error(transparent)]
    NegType(#[from] NegTypeError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    LinAlg(#[from] LinAlgError),
}

type Result<T> = std::result::Result<T, ReportError>;

/// One of the four accepted input kinds.
#[derive(Clone, Debug)]
pub enum AnalysisInput {
    Cube(CubeSubset),
    L1Points(Vec<Vector>),
    Tree(WeightedTree),
    Raw(Matrix),
}

impl AnalysisInput {
    pub fn kind(&self) -> &'static str {
        match self {
            AnalysisInput::Cube(_) => "cube",
            AnalysisInput::L1Points(_) => "l1_points",
            AnalysisInput::Tree(_) => "tree",
            AnalysisInput::Raw(_) => "raw",
        }
    }

    /// Builds the metric space, converting to float mode if requested.
    pub fn to_space(&self, mode: Mode, tol: f64) -> Result<FiniteMetricSpace> {
        let space = match self {
            AnalysisInput::Cube(c) => c.cube_metric()?,
            AnalysisInput::L1Points(pts) => FiniteMetricSpace::from_l1_points(pts)?,
            AnalysisInput::Tree(t) => t.tree_metric()?,
            AnalysisInput::Raw(m) => {
                FiniteMetricSpace::from_distance_matrix(m.clone(), Provenance::Raw, tol)?
            }
        };
        Ok(match mode {
            Mode::Exact => space,
            Mode::Float => space.to_float(),
        })
    }
}

/// Everything the analyzer computes for one space. Pure function of the
/// input, the mode, and the tolerance.
#[derive(Clone, Debug)]
pub struct InvariantReport {
    pub kind: String,
    pub points: usize,
    pub mode: Mode,
    pub tol: f64,
    pub det: Scalar,
    pub cofactor_sum: Scalar,
    pub rank_d: usize,
    pub affine_dim: Option<usize>,
    pub strict_1neg: bool,
    pub wp: Option<WpValue>,
    pub gap_1: Option<Scalar>,
    pub m_constant: Option<MValue>,
    pub inv_sum: Option<Scalar>,
    pub kernel_basis: Vec<Vector>,
    pub omnibus: Option<OmnibusReport>,
    pub warnings: Vec<String>,
}

/// Exact sign-pattern enumeration stays affordable up to this size; larger
/// exact inputs fall back to a float gap with a warning.
const EXACT_GAP_LIMIT: usize = 12;

pub fn analyze(input: &AnalysisInput, mode: Mode, tol: f64) -> Result<InvariantReport> {
    let space = input.to_space(mode, tol)?;
    let mut warnings = Vec::new();

    let d = space.distance_matrix();
    let det = d.det()?;
    let cofactor_sum = d.cofactor_sum(tol)?;
    let rank_d = d.rank(tol);
    let kernel_basis = d.kernel_basis(tol);

    let affine_dim = match input {
        AnalysisInput::Cube(c) => Some(c.rank_identity()?.affine_dim),
        AnalysisInput::L1Points(pts) => Some(affine_dim_of_points(pts, tol)?),
        AnalysisInput::Tree(t) => {
            let cube = t.embed_in_cube(0)?;
            Some(cube.rank_identity()?.affine_dim)
        }
        AnalysisInput::Raw(_) => None,
    };

    let strict_1neg = is_p_negative_type(&space, &Scalar::from_int(1), true, tol)?;

    let wp = match supremal_p(
        &space,
        &SupremalConfig {
            tol,
            ..Default::default()
        },
    ) {
        Ok(s) => Some(s.value),
        Err(NegTypeError::SearchExhausted { p_max, .. }) => {
            warnings.push(format!(
                "no zero of det(D_p) or cof(D_p) found in [0, {p_max}]; the supremal exponent exceeds the search bound"
            ));
            None
        }
        Err(e) => return Err(e.into()),
    };

    let one_negative = is_p_negative_type(&space, &Scalar::from_int(1), false, tol)?;
    let (gap_1, m_constant, inv_sum) = if one_negative {
        let gap_space;
        let gap_ref = if space.mode() == Mode::Exact && space.size() > EXACT_GAP_LIMIT {
            warnings.push(format!(
                "exact sign-pattern enumeration skipped beyond {EXACT_GAP_LIMIT} points; the gap was computed in float mode"
            ));
            gap_space = space.to_float();
            &gap_space
        } else {
            &space
        };
        let gap = negative_type_gap(gap_ref, &Scalar::from_int(1), GapMethod::SignEnum, tol)?;
        let mc = m_constant_direct(&space, tol)?;
        (Some(gap.gamma), Some(mc.m), Some(mc.inv_sum))
    } else {
        warnings
            .push("space is not of 1-negative type; the gap and M-constant are undefined".into());
        (None, None, None)
    };

    let omnibus = match input {
        AnalysisInput::Cube(c) => Some(verify_omnibus(c, tol)?),
        _ => None,
    };

    if matches_quad_reference(d, tol) {
        warnings.push(
            "four-point set with the known quadrilateral distance matrix: the inverse sum \
             computes to exactly 1/2; the previously circulated value 506/4727 for this matrix \
             does not match, though the qualitative conclusion (positive sum, strict type) is \
             unaffected"
                .into(),
        );
    }

    Ok(InvariantReport {
        kind: input.kind().into(),
        points: space.size(),
        mode,
        tol,
        det,
        cofactor_sum,
        rank_d,
        affine_dim,
        strict_1neg,
        wp,
        gap_1,
        m_constant,
        inv_sum,
        kernel_basis,
        omnibus,
        warnings,
    })
}

fn affine_dim_of_points(points: &[Vector], tol: f64) -> Result<usize> {
    let m = points.len() - 1;
    if m == 0 {
        return Ok(0);
    }
    let dim = points[0].dim();
    let diff = Matrix::from_fn(m, dim, |i, k| points[i + 1].get(k) - points[0].get(k))?;
    Ok(diff.rank(tol))
}

fn matches_quad_reference(d: &Matrix, tol: f64) -> bool {
    if d.rows() != 4 {
        return false;
    }
    let reference = [
        [0.0, 1.0, 3.0, 4.0],
        [1.0, 0.0, 2.0, 3.0],
        [3.0, 2.0, 0.0, 1.0],
        [4.0, 3.0, 1.0, 0.0],
    ];
    for i in 0..4 {
        for j in 0..4 {
            if (d.get(i, j).to_f64() - reference[i][j]).abs() > tol {
                return false;
            }
        }
    }
    true
}

/// One row of the parameter scan: `det(D_p)`, `cof(D_p)`, and the inverse
/// sum where `D_p` is invertible.
#[derive(Clone, Debug)]
pub struct ScanRow {
    pub p: f64,
    pub det: f64,
    pub cof: f64,
    pub inv_sum: Option<f64>,
}

/// Raw curves over `steps` evenly spaced exponents in `[pmin, pmax]`,
/// endpoints included.
pub fn scan_p(
    space: &FiniteMetricSpace,
    pmin: f64,
    pmax: f64,
    steps: usize,
) -> Result<Vec<ScanRow>> {
    if !(pmin < pmax) || steps < 2 || pmin < 0.0 {
        return Err(ReportError::BadScanRange);
    }
    let n = space.size();
    let dist: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| space.distance_matrix().get(i, j).to_f64())
                .collect()
        })
        .collect();
    let rows = crate::exec::map_indexed(steps, |i| {
        let p = pmin + (pmax - pmin) * i as f64 / (steps - 1) as f64;
        let dp: Vec<Vec<f64>> = dist
            .iter()
            .map(|row| {
                row.iter()
                    .map(|&x| if x == 0.0 { 0.0 } else { x.powf(p) })
                    .collect()
            })
            .collect();
        let det = dense::det_lu(dp.clone());
        let scale = dp
            .iter()
            .flatten()
            .map(|x| x.abs())
            .fold(0.0f64, f64::max)
            .max(1e-300);
        let inv_sum = dense::solve_f64(dp.clone(), vec![1.0; n], 1e-12 * scale)
            .map(|b| b.iter().sum::<f64>());
        let cof = match inv_sum {
            Some(s) => det * s,
            None => cof_by_minors(&dp),
        };
        ScanRow {
            p,
            det,
            cof,
            inv_sum,
        }
    });
    Ok(rows)
}

fn cof_by_minors(a: &[Vec<f64>]) -> f64 {
    let n = a.len();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            let minor: Vec<Vec<f64>> = (0..n)
                .filter(|&r| r != i)
                .map(|r| (0..n).filter(|&c| c != j).map(|c| a[r][c]).collect())
                .collect();
            let d = dense::det_lu(minor);
            if (i + j) % 2 == 0 {
                acc += d;
            } else {
                acc -= d;
            }
        }
    }
    acc
}
