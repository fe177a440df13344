//! Independent brute-force verifiers, randomized instance generation, and
//! the seven-way omnibus consistency harness.

use crate::exec;
use crate::hamming::{CubeError, CubePoint, CubeSubset, WeightList};
use crate::linalg::{LinAlgError, Matrix, Vector};
use crate::negtype::{
    find_polygonal_equality, is_p_negative_type, negative_type_gap, roundness_violation_search,
    supremal_p, GapMethod, NegTypeError, SupremalConfig, WpValue,
};
use crate::scalar::{Mode, Scalar, DEFAULT_TOL};
use crate::space::{FiniteMetricSpace, MetricError};
use crate::trees::{TreeError, WeightedTree};
use num::bigint::BigInt;
use num::rational::BigRational;
use num::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("space is not of 1-negative type")]
    NotOneNegativeType,
    #[error("no solution of D b = 1 exists")]
    NoMeanVector,
    #[error("M-constant oracle needs an invertible matrix and strict type")]
    SingularOrNotStrict,
    #[error("requested {points} points but the cube only has {available} vertices")]
    BadBounds { points: usize, available: usize },
    #[error("weight range is empty")]
    EmptyWeightRange,
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error(transparent)]
    Cube(#[from] CubeError),
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error(transparent)]
    NegType(#[from] NegTypeError),
    #[error(transparent)]
    LinAlg(#[from] LinAlgError),
}

type Result<T> = std::result::Result<T, OracleError>;

/// The M-constant, possibly infinite, together with a mean vector
/// `b` solving `D b = 1` and the inverse sum `<b, 1>`.
#[derive(Clone, Debug)]
pub struct MConstantResult {
    pub m: MValue,
    pub b: Option<Vector>,
    pub inv_sum: Scalar,
}

#[derive(Clone, Debug, PartialEq)]
pub enum MValue {
    Finite(Scalar),
    Infinite,
}

impl MValue {
    pub fn as_f64(&self) -> f64 {
        match self {
            MValue::Finite(s) => s.to_f64(),
            MValue::Infinite => f64::INFINITY,
        }
    }
}

/// `M(X) = <b, 1>^{-1}` for any solution of `D b = 1`; infinite when the
/// sum vanishes. Requires 1-negative type, which guarantees a solution
/// exists and that its sum does not depend on the choice.
pub fn m_constant_direct(space: &FiniteMetricSpace, tol: f64) -> Result<MConstantResult> {
    if !is_p_negative_type(space, &Scalar::from_int(1), false, tol)? {
        return Err(OracleError::NotOneNegativeType);
    }
    let d = space.distance_matrix();
    let ones = Vector::ones(space.size(), space.mode());
    let b = match d.solve(&ones, tol)? {
        Some(b) => b,
        None => d.solve_any(&ones, tol)?.ok_or(OracleError::NoMeanVector)?,
    };
    let inv_sum = b.dot(&ones)?;
    let m = if inv_sum.is_zero_with(tol) {
        MValue::Infinite
    } else {
        MValue::Finite(inv_sum.recip())
    };
    Ok(MConstantResult {
        m,
        b: Some(b),
        inv_sum,
    })
}

/// Independent confirmation of the M-constant through the stationary point
/// of the form on the sum-one hyperplane: evaluates
/// `<D xi*, xi*>` at `xi* = b / <b, 1>` literally.
pub fn m_constant_sup_oracle(space: &FiniteMetricSpace, tol: f64) -> Result<Scalar> {
    let d = space.distance_matrix();
    let ones = Vector::ones(space.size(), space.mode());
    let b = d
        .solve(&ones, tol)?
        .ok_or(OracleError::SingularOrNotStrict)?;
    if !is_p_negative_type(space, &Scalar::from_int(1), true, tol)? {
        return Err(OracleError::SingularOrNotStrict);
    }
    let sum = b.dot(&ones)?;
    if sum.is_zero_with(tol) {
        return Err(OracleError::SingularOrNotStrict);
    }
    let xi_star = b.scale(&sum.recip());
    Ok(d.quadratic_form(&xi_star)?)
}

/// One boolean per condition of the equivalence theorem for cube subsets,
/// each computed by an independent route.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OmnibusReport {
    /// Rank of the coordinate differences is full.
    pub c1_affine_indep: bool,
    /// `det(D) != 0`.
    pub c2_d_invertible: bool,
    /// The 1-power form is negative definite on the zero-sum hyperplane.
    pub c3_strict_1neg: bool,
    /// Supremal exponent exceeds 1.
    pub c4_wp_gt_1: bool,
    /// Maximal generalized roundness exceeds 1 (same quantity as c4 by
    /// definition; bounded roundness searches act as a smoke test only).
    pub c5_mgr_gt_1: bool,
    /// Negative-type gap at exponent 1 is positive.
    pub c6_gap_positive: bool,
    /// No nontrivial 1-polygonal equality exists.
    pub c7_no_poly_eq: bool,
    pub consistent: bool,
}

impl OmnibusReport {
    pub fn flags(&self) -> [bool; 7] {
        [
            self.c1_affine_indep,
            self.c2_d_invertible,
            self.c3_strict_1neg,
            self.c4_wp_gt_1,
            self.c5_mgr_gt_1,
            self.c6_gap_positive,
            self.c7_no_poly_eq,
        ]
    }
}

/// Offset used by the roundness spot check above exponent 1.
const ROUNDNESS_DELTA: f64 = 0.05;

/// Evaluates all seven conditions of the equivalence theorem on a cube
/// subset by independent routes and reports whether they agree.
pub fn verify_omnibus(x: &CubeSubset, tol: f64) -> Result<OmnibusReport> {
    let space = x.cube_metric()?;
    let m = x.point_count() - 1;

    // (1) rank of the coordinate differences
    let coords = x.coordinates();
    let diff = Matrix::from_fn(m, x.n(), |i, k| coords[i + 1].get(k) - coords[0].get(k))?;
    let c1 = diff.rank(tol) == m;

    // (2) determinant of the distance matrix
    let det = space.distance_matrix().det()?;
    let c2 = match &det {
        Scalar::Exact(_) => !det.is_zero(),
        Scalar::Float(v) => v.abs() > tol * space.distance_matrix().max_abs_f64().max(1.0),
    };

    // (3) strict negative definiteness of the 1-power form
    let c3 = is_p_negative_type(&space, &Scalar::from_int(1), true, tol)?;

    // (4) supremal exponent; an exhausted bounded search still certifies
    // that no zero occurs at or below the search bound, hence wp > 1
    let wp = match supremal_p(
        &space,
        &SupremalConfig {
            tol,
            ..Default::default()
        },
    ) {
        Ok(s) => Some(s.value),
        Err(NegTypeError::SearchExhausted { .. }) => None,
        Err(e) => return Err(e.into()),
    };
    let c4 = match &wp {
        Some(WpValue::Infinite) | None => true,
        Some(WpValue::Finite(v)) => v.to_f64() > 1.0 + tol,
    };

    // (5) definitionally the same quantity as (4); a bounded roundness
    // search above 1 can only ever refute it
    let mut c5 = c4;
    let spot_check_applicable = match &wp {
        Some(WpValue::Infinite) | None => c4,
        Some(WpValue::Finite(v)) => c4 && v.to_f64() >= 1.0 + ROUNDNESS_DELTA + tol,
    };
    if spot_check_applicable {
        let p = Scalar::Float(1.0 + ROUNDNESS_DELTA);
        if roundness_violation_search(&space, &p, 2, tol)?.is_some() {
            c5 = false;
        }
    }

    // (6) the gap at exponent 1, by float sign-pattern enumeration
    let gap = negative_type_gap(
        &space.to_float(),
        &Scalar::Float(1.0),
        GapMethod::SignEnum,
        tol,
    )?;
    let c6 = gap.gamma.to_f64() > tol;

    // (7) polygonal-equality witness search on the exact form
    let c7 = find_polygonal_equality(&space, &Scalar::from_int(1), tol)?.is_none();

    let report = OmnibusReport {
        c1_affine_indep: c1,
        c2_d_invertible: c2,
        c3_strict_1neg: c3,
        c4_wp_gt_1: c4,
        c5_mgr_gt_1: c5,
        c6_gap_positive: c6,
        c7_no_poly_eq: c7,
        consistent: false,
    };
    let all_equal = report.flags().iter().all(|&f| f == c1);
    Ok(OmnibusReport {
        consistent: all_equal,
        ..report
    })
}

/// Exact double-inclusion check that the kernel of the distance matrix
/// equals the zero-sum annihilators of the coordinates.
pub fn kernel_classification_holds(x: &CubeSubset, tol: f64) -> Result<bool> {
    let space = x.cube_metric()?;
    let kernel = space.distance_matrix().kernel_basis(tol);
    let coords = x.coordinates();
    let count = x.point_count();
    let mode = x.mode();
    // kernel vectors must sum to zero and annihilate the coordinates
    for v in &kernel {
        if !v.sum().is_zero_with(tol) {
            return Ok(false);
        }
        for k in 0..x.n() {
            let mut acc = Scalar::zero(mode);
            for i in 0..count {
                acc = &acc + &(v.get(i) * coords[i].get(k));
            }
            if !acc.is_zero_with(tol) {
                return Ok(false);
            }
        }
    }
    // annihilator basis: kernel of the stacked (1 + n) x (m+1) system
    let stacked = Matrix::from_fn(1 + x.n(), count, |r, i| {
        if r == 0 {
            Scalar::one(mode)
        } else {
            coords[i].get(r - 1).clone()
        }
    })?;
    let annihilators = stacked.kernel_basis(tol);
    if annihilators.len() != kernel.len() {
        return Ok(false);
    }
    // each annihilator must lie in the span of the kernel basis
    if kernel.is_empty() {
        return Ok(true);
    }
    let base = Matrix::from_rows(kernel.iter().map(|v| v.entries().to_vec()).collect())?;
    let base_rank = base.rank(tol);
    for v in &annihilators {
        let mut rows: Vec<Vec<Scalar>> = kernel.iter().map(|k| k.entries().to_vec()).collect();
        rows.push(v.entries().to_vec());
        if Matrix::from_rows(rows)?.rank(tol) != base_rank {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `M(X) <= (m+1)/4 * diam(X)`, the bound every l1-embeddable space obeys.
pub fn nw_bound_holds(space: &FiniteMetricSpace, tol: f64) -> Result<bool> {
    let result = m_constant_direct(space, tol)?;
    let m_val = match result.m {
        MValue::Infinite => return Ok(false),
        MValue::Finite(v) => v,
    };
    let bound = space.diameter().to_f64() * space.size() as f64 / 4.0;
    Ok(m_val.to_f64() <= bound + tol)
}

/// Inclusive rational range for random weights.
#[derive(Clone, Debug)]
pub struct WeightRange {
    lo: BigRational,
    hi: BigRational,
}

impl WeightRange {
    pub fn new(lo: (i64, i64), hi: (i64, i64)) -> Result<Self> {
        let lo = BigRational::new(BigInt::from(lo.0), BigInt::from(lo.1));
        let hi = BigRational::new(BigInt::from(hi.0), BigInt::from(hi.1));
        if lo > hi || lo <= BigRational::from_integer(BigInt::from(0)) {
            return Err(OracleError::EmptyWeightRange);
        }
        Ok(WeightRange { lo, hi })
    }

    /// The `[1/3, 5]` range used by the randomized suites.
    pub fn suite_default() -> Self {
        WeightRange::new((1, 3), (5, 1)).expect("valid range")
    }

    fn sample(&self, rng: &mut ChaCha8Rng) -> Scalar {
        let den: i64 = rng.random_range(1..=6);
        let d = BigRational::from_integer(BigInt::from(den));
        let lo_num = (&self.lo * &d).ceil().to_integer().to_i64().expect("small");
        let hi_num = (&self.hi * &d)
            .floor()
            .to_integer()
            .to_i64()
            .expect("small");
        let num = if lo_num >= hi_num {
            lo_num
        } else {
            rng.random_range(lo_num..=hi_num)
        };
        Scalar::from_ratio(num, den)
    }
}

/// Deterministic random cube subset: `n <= n_max` coordinates, between 2
/// and `m_max + 1` distinct vertices, rational weights in the range.
pub fn random_cube_subset(
    seed: u64,
    n_max: usize,
    m_max: usize,
    range: &WeightRange,
) -> Result<CubeSubset> {
    if m_max + 1 > (1usize << n_max) {
        return Err(OracleError::BadBounds {
            points: m_max + 1,
            available: 1usize << n_max,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.random_range(1..=n_max);
    let available = 1usize << n;
    let count = rng.random_range(2..=(m_max + 1).min(available));
    let mut codes: Vec<usize> = (0..available).collect();
    for i in 0..count {
        let j = rng.random_range(i..available);
        codes.swap(i, j);
    }
    let points: Vec<CubePoint> = codes[..count]
        .iter()
        .map(|&c| CubePoint::new((0..n).map(|k| (c >> k) & 1 == 1).collect()))
        .collect();
    let weights = WeightList::new((0..n).map(|_| range.sample(&mut rng)).collect())?;
    Ok(CubeSubset::new(weights, points)?)
}

/// Deterministic random tree by uniform parent assignment, with rational
/// weights in the range.
pub fn random_weighted_tree(seed: u64, n_max: usize, range: &WeightRange) -> Result<WeightedTree> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n_edges = rng.random_range(1..=n_max);
    let mut edges = Vec::with_capacity(n_edges);
    for v in 1..=n_edges {
        let parent = rng.random_range(0..v);
        edges.push((parent, v, range.sample(&mut rng)));
    }
    Ok(WeightedTree::new(n_edges + 1, edges)?)
}

/// Deterministic random point set with rational coordinates, suitable for
/// l1-metric construction. Coordinates live in `[-hi, hi]` for the range's
/// upper bound; distinctness is enforced by rejection.
pub fn random_l1_points(
    seed: u64,
    dim_max: usize,
    count_max: usize,
    range: &WeightRange,
) -> Vec<Vector> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dim = rng.random_range(1..=dim_max);
    let count = rng.random_range(2..=count_max.max(2));
    let hi = range.hi.to_f64().unwrap_or(5.0).ceil() as i64;
    let mut points: Vec<Vector> = Vec::with_capacity(count);
    let mut attempts = 0;
    while points.len() < count && attempts < 1000 {
        attempts += 1;
        let candidate = Vector::new(
            (0..dim)
                .map(|_| {
                    let den: i64 = rng.random_range(1..=4);
                    let num: i64 = rng.random_range(-hi * den..=hi * den);
                    Scalar::from_ratio(num, den)
                })
                .collect(),
        )
        .expect("nonempty");
        if !points.contains(&candidate) {
            points.push(candidate);
        }
    }
    points
}

/// Unweighted variant of [`random_weighted_tree`].
pub fn random_unit_tree(seed: u64, n_max: usize) -> Result<WeightedTree> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n_edges = rng.random_range(1..=n_max);
    let mut edges = Vec::with_capacity(n_edges);
    for v in 1..=n_edges {
        let parent = rng.random_range(0..v);
        edges.push((parent, v, Scalar::from_int(1)));
    }
    Ok(WeightedTree::new(n_edges + 1, edges)?)
}

/// Outcome of one randomized suite: failures carry the offending seed.
#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub name: String,
    pub count: usize,
    pub failures: Vec<String>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Omnibus suite: every instance must produce a consistent report, obey
/// the rank identity, the kernel classification, and the M-constant bound.
pub fn run_omnibus_suite(seed: u64, count: usize) -> SuiteReport {
    let results = exec::map_indexed(count, |i| {
        let instance_seed = seed.wrapping_add(i as u64);
        check_omnibus_instance(instance_seed).err()
    });
    SuiteReport {
        name: "omnibus".into(),
        count,
        failures: results.into_iter().flatten().collect(),
    }
}

fn check_omnibus_instance(seed: u64) -> std::result::Result<(), String> {
    let x = random_cube_subset(seed, 7, 9, &WeightRange::suite_default())
        .map_err(|e| format!("seed {seed}: generation failed: {e}"))?;
    let report =
        verify_omnibus(&x, DEFAULT_TOL).map_err(|e| format!("seed {seed}: omnibus failed: {e}"))?;
    if !report.consistent {
        return Err(format!("seed {seed}: inconsistent report {report:?}"));
    }
    let ri = x
        .rank_identity()
        .map_err(|e| format!("seed {seed}: rank identity failed: {e}"))?;
    if ri.rank_d != ri.affine_dim + 1 {
        return Err(format!(
            "seed {seed}: rank {} != affine dim {} + 1",
            ri.rank_d, ri.affine_dim
        ));
    }
    match kernel_classification_holds(&x, DEFAULT_TOL) {
        Ok(true) => {}
        Ok(false) => return Err(format!("seed {seed}: kernel classification failed")),
        Err(e) => return Err(format!("seed {seed}: kernel check error: {e}")),
    }
    let space = x.cube_metric().map_err(|e| format!("seed {seed}: {e}"))?;
    match nw_bound_holds(&space, DEFAULT_TOL) {
        Ok(true) => Ok(()),
        Ok(false) => Err(format!("seed {seed}: M-constant bound violated")),
        Err(e) => Err(format!("seed {seed}: M-constant check error: {e}")),
    }
}

/// Trees suite: closed forms match direct computation exactly, embeddings
/// are isometric and affinely independent, and the M-constant bound holds.
pub fn run_trees_suite(seed: u64, count: usize) -> SuiteReport {
    let results = exec::map_indexed(count, |i| {
        let instance_seed = seed.wrapping_add(i as u64);
        check_tree_instance(instance_seed).err()
    });
    SuiteReport {
        name: "trees".into(),
        count,
        failures: results.into_iter().flatten().collect(),
    }
}

fn check_tree_instance(seed: u64) -> std::result::Result<(), String> {
    let tree = random_weighted_tree(seed, 10, &WeightRange::suite_default())
        .map_err(|e| format!("seed {seed}: generation failed: {e}"))?;
    let space = tree
        .tree_metric()
        .map_err(|e| format!("seed {seed}: metric failed: {e}"))?;
    let d = space.distance_matrix();
    if d.det().map_err(|e| format!("seed {seed}: {e}"))? != tree.tree_det() {
        return Err(format!("seed {seed}: determinant closed form mismatch"));
    }
    let cof = d
        .cofactor_sum(DEFAULT_TOL)
        .map_err(|e| format!("seed {seed}: {e}"))?;
    if cof != tree.tree_cofactor() {
        return Err(format!("seed {seed}: cofactor closed form mismatch"));
    }
    let mc = m_constant_direct(&space, DEFAULT_TOL).map_err(|e| format!("seed {seed}: {e}"))?;
    let closed = tree.tree_m_and_inverse_sum();
    if mc.inv_sum != closed.inv_sum {
        return Err(format!("seed {seed}: inverse sum mismatch"));
    }
    match mc.m {
        MValue::Finite(v) if v == closed.m => {}
        other => return Err(format!("seed {seed}: M-constant mismatch: {other:?}")),
    }
    // embedding from every vertex is isometric and affinely independent
    let root = seed as usize % tree.n_vertices();
    let cube = tree
        .embed_in_cube(root)
        .map_err(|e| format!("seed {seed}: embedding failed: {e}"))?;
    let cube_space = cube
        .cube_metric()
        .map_err(|e| format!("seed {seed}: cube metric failed: {e}"))?;
    if cube_space.distance_matrix() != d {
        return Err(format!("seed {seed}: embedding is not isometric"));
    }
    if !cube.is_affinely_independent() {
        return Err(format!(
            "seed {seed}: embedded tree not affinely independent"
        ));
    }
    match nw_bound_holds(&space, DEFAULT_TOL) {
        Ok(true) => Ok(()),
        Ok(false) => Err(format!("seed {seed}: M-constant bound violated")),
        Err(e) => Err(format!("seed {seed}: bound check error: {e}")),
    }
}

/// Linear-algebra suite: Cauchy-Binet on random integer matrices, the
/// weighted Gram expansion on random cube subsets, and the cofactor
/// identity for invertible matrices.
pub fn run_linalg_suite(seed: u64, count: usize) -> SuiteReport {
    let results = exec::map_indexed(count, |i| {
        let instance_seed = seed.wrapping_add(i as u64);
        check_linalg_instance(instance_seed).err()
    });
    SuiteReport {
        name: "linalg".into(),
        count,
        failures: results.into_iter().flatten().collect(),
    }
}

fn check_linalg_instance(seed: u64) -> std::result::Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rows = rng.random_range(1..=4usize);
    let cols = rng.random_range(rows..=(rows + 4));
    let m = Matrix::from_int_rows(
        &(0..rows)
            .map(|_| (0..cols).map(|_| rng.random_range(-5..=5i64)).collect())
            .collect::<Vec<_>>(),
    );
    let cb = m
        .cauchy_binet_check()
        .map_err(|e| format!("seed {seed}: {e}"))?;
    if cb.lhs != cb.rhs {
        return Err(format!("seed {seed}: Cauchy-Binet mismatch"));
    }
    // weighted Gram expansion det(G_W) = sum_S det(B_S)^2 / prod_{j in S} w_j
    let x = random_cube_subset(seed, 6, 5, &WeightRange::suite_default())
        .map_err(|e| format!("seed {seed}: {e}"))?;
    let norm = x.normalize_base();
    if norm.point_count() >= 2 && norm.point_count() - 1 <= norm.n() {
        let inc = norm.incidence().map_err(|e| format!("seed {seed}: {e}"))?;
        let det_gw = inc.g_w.det().map_err(|e| format!("seed {seed}: {e}"))?;
        let mcount = norm.point_count() - 1;
        use itertools::Itertools;
        let mut acc = Scalar::zero(Mode::Exact);
        for subset in (0..norm.n()).combinations(mcount) {
            let b_s = inc.b.select_columns(&subset);
            let det_bs = b_s.det().map_err(|e| format!("seed {seed}: {e}"))?;
            let mut wprod = Scalar::one(Mode::Exact);
            for &j in &subset {
                wprod = &wprod * norm.weights().get(j);
            }
            acc = &acc + &(&(&det_bs * &det_bs) / &wprod);
        }
        if det_gw != acc {
            return Err(format!("seed {seed}: weighted Gram expansion mismatch"));
        }
    }
    // cofactor identity on an invertible random matrix
    let k = rng.random_range(1..=5usize);
    let a = Matrix::from_int_rows(
        &(0..k)
            .map(|_| (0..k).map(|_| rng.random_range(-4..=4i64)).collect())
            .collect::<Vec<_>>(),
    );
    let ones = Vector::ones(k, Mode::Exact);
    if let Some(b) = a
        .solve(&ones, DEFAULT_TOL)
        .map_err(|e| format!("seed {seed}: {e}"))?
    {
        let via_identity = &a.det().map_err(|e| format!("seed {seed}: {e}"))?
            * &b.dot(&ones).map_err(|e| format!("seed {seed}: {e}"))?;
        let minors = if k == 1 {
            Scalar::from_int(1)
        } else {
            let mut acc = Scalar::zero(Mode::Exact);
            for i in 0..k {
                for j in 0..k {
                    let d = a
                        .minor(i, j)
                        .det()
                        .map_err(|e| format!("seed {seed}: {e}"))?;
                    if (i + j) % 2 == 0 {
                        acc = &acc + &d;
                    } else {
                        acc = &acc - &d;
                    }
                }
            }
            acc
        };
        if via_identity != minors {
            return Err(format!("seed {seed}: cofactor identity mismatch"));
        }
    }
    Ok(())
}
