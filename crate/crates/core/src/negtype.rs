//! Negative-type machinery: (strict) p-negative type decisions, the
//! supremal exponent located through zeros of `det(D_p)` and of the
//! cofactor sum, generalized-roundness witnesses, negative-type gaps by
//! sign-pattern enumeration, and polygonal-equality witnesses.

use crate::exec;
use crate::linalg::{dense, LinAlgError, Matrix, Vector};
use crate::scalar::{Mode, Scalar};
use crate::space::{
    f0_difference_basis, CoefficientVector, FiniteMetricSpace, Hyperplane, MetricError,
};
use itertools::Itertools;
use num::rational::BigRational;
use num::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NegTypeError {
    #[error("exponent p must be nonnegative")]
    NegativeExponent,
    #[error("space is not of p-negative type at p = {0}")]
    NotPNegativeType(f64),
    #[error("roundness lists must be nonempty and of equal length")]
    BadLists,
    #[error("list index {0} out of range for a space of {1} points")]
    IndexOutOfRange(usize, usize),
    #[error(
        "no zero of det(D_p) or cof(D_p) in [0, {p_max}]; endpoint values det: ({f_lo:e}, {f_hi:e}), cof: ({h_lo:e}, {h_hi:e})"
    )]
    SearchExhausted {
        p_max: f64,
        f_lo: f64,
        f_hi: f64,
        h_lo: f64,
        h_hi: f64,
    },
    #[error("sign-pattern enumeration produced no feasible candidate")]
    NoCandidate,
    #[error("points must be distinct and of equal dimension")]
    BadPoints,
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error(transparent)]
    LinAlg(#[from] LinAlgError),
}

type Result<T> = std::result::Result<T, NegTypeError>;

/// Supremal p-negative type of a space, with the certificate saying which
/// function vanished first (or that the metric is an ultrametric, in which
/// case every exponent works).
#[derive(Clone, Debug, PartialEq)]
pub struct SupremalType {
    pub value: WpValue,
    pub certificate: WpCertificate,
}

#[derive(Clone, Debug, PartialEq)]
pub enum WpValue {
    Finite(Scalar),
    Infinite,
}

impl WpValue {
    pub fn as_f64(&self) -> f64 {
        match self {
            WpValue::Finite(s) => s.to_f64(),
            WpValue::Infinite => f64::INFINITY,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum WpCertificate {
    DetZero { p: f64 },
    CofZero { p: f64 },
    Ultrametric,
}

/// Search window for [`supremal_p`].
#[derive(Clone, Debug)]
pub struct SupremalConfig {
    pub p_max: f64,
    pub grid: usize,
    pub tol: f64,
}

impl Default for SupremalConfig {
    fn default() -> Self {
        SupremalConfig {
            p_max: 16.0,
            grid: 512,
            tol: 1e-9,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GapMethod {
    /// Exhaustive sign-pattern enumeration with equality-constrained
    /// stationary points on every face; exact in exact mode.
    SignEnum,
    /// Projected-gradient multistart with a face polish; a lower-confidence
    /// float value.
    Descent,
}

/// The negative-type gap at an exponent, with the minimizing zero-sum
/// vector of unit l1 norm.
#[derive(Clone, Debug)]
pub struct GapResult {
    pub p: Scalar,
    pub gamma: Scalar,
    pub argmin_xi: CoefficientVector,
    pub method: GapMethod,
}

/// A two-list instance of the generalized roundness inequality. The
/// inequality holds when `lhs <= rhs` (up to tolerance in float mode).
#[derive(Clone, Debug)]
pub struct RoundnessWitness {
    pub list_a: Vec<usize>,
    pub list_b: Vec<usize>,
    pub lhs: Scalar,
    pub rhs: Scalar,
    pub p: Scalar,
}

impl RoundnessWitness {
    pub fn holds(&self, tol: f64) -> bool {
        match (&self.lhs, &self.rhs) {
            (Scalar::Exact(l), Scalar::Exact(r)) => l <= r,
            _ => self.lhs.to_f64() <= self.rhs.to_f64() + tol,
        }
    }
}

/// Whether the space is of (strict) p-negative type: the p-power form is
/// negative semidefinite (definite) on the zero-sum hyperplane.
pub fn is_p_negative_type(
    space: &FiniteMetricSpace,
    p: &Scalar,
    strict: bool,
    tol: f64,
) -> Result<bool> {
    if p.is_negative() {
        return Err(NegTypeError::NegativeExponent);
    }
    let dp = space.pow_entries(p);
    let basis = f0_difference_basis(space.size(), dp.mode())?;
    let vectors: Vec<Vector> = basis.iter().map(|c| c.xi().clone()).collect();
    Ok(dp.nsd_on_subspace(&vectors, strict, tol)?)
}

/// Smallest `p >= 0` at which `det(D_p)` or the cofactor sum of `D_p`
/// vanishes, located by a sign-change scan plus bisection; ultrametrics
/// short-circuit to infinity. The cofactor sum stands in for
/// `<D_p^{-1} 1, 1>`: the two have the same zeros off the determinant's
/// zero set, but the cofactor sum stays continuous across it.
pub fn supremal_p(space: &FiniteMetricSpace, cfg: &SupremalConfig) -> Result<SupremalType> {
    if space.is_ultrametric() {
        return Ok(SupremalType {
            value: WpValue::Infinite,
            certificate: WpCertificate::Ultrametric,
        });
    }
    let n = space.size();
    // normalized distances keep det magnitudes in range at large p
    let dmax = space.distance_matrix().max_abs_f64();
    let dist: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| space.distance_matrix().get(i, j).to_f64() / dmax)
                .collect()
        })
        .collect();
    let pow = |p: f64| -> Vec<Vec<f64>> {
        dist.iter()
            .map(|row| {
                row.iter()
                    .map(|&d| if d == 0.0 { 0.0 } else { d.powf(p) })
                    .collect()
            })
            .collect()
    };
    let det_at = move |p: f64| dense::det_lu(pow(p));
    let cof_at = {
        let dist = dist.clone();
        move |p: f64| {
            let m: Vec<Vec<f64>> = dist
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|&d| if d == 0.0 { 0.0 } else { d.powf(p) })
                        .collect()
                })
                .collect();
            cof_f64(&m)
        }
    };

    let ps: Vec<f64> = (0..=cfg.grid)
        .map(|i| cfg.p_max * i as f64 / cfg.grid as f64)
        .collect();
    let samples: Vec<(f64, f64)> = exec::map_indexed(ps.len(), |i| (det_at(ps[i]), cof_at(ps[i])));
    let f_vals: Vec<f64> = samples.iter().map(|s| s.0).collect();
    let h_vals: Vec<f64> = samples.iter().map(|s| s.1).collect();

    let zf = first_zero(&ps, &f_vals, &det_at, cfg.tol);
    let zh = first_zero(&ps, &h_vals, &cof_at, cfg.tol);
    match (zf, zh) {
        (None, None) => Err(NegTypeError::SearchExhausted {
            p_max: cfg.p_max,
            f_lo: f_vals[0],
            f_hi: *f_vals.last().unwrap(),
            h_lo: h_vals[0],
            h_hi: *h_vals.last().unwrap(),
        }),
        (Some(pf), None) => Ok(finite(pf, WpCertificate::DetZero { p: pf })),
        (None, Some(ph)) => Ok(finite(ph, WpCertificate::CofZero { p: ph })),
        (Some(pf), Some(ph)) => {
            if ph < pf - cfg.tol {
                Ok(finite(ph, WpCertificate::CofZero { p: ph }))
            } else {
                // coincident zeros are attributed to the determinant
                let p = pf.min(ph);
                Ok(finite(p, WpCertificate::DetZero { p }))
            }
        }
    }
}

fn finite(p: f64, certificate: WpCertificate) -> SupremalType {
    SupremalType {
        value: WpValue::Finite(Scalar::Float(p)),
        certificate,
    }
}

/// First zero of a sampled function: exact grid hits, sign-change brackets
/// refined by bisection, and sign-preserving touches probed through local
/// minima of |f|. A touch centred at a grid point may lie left of it, so
/// when a window offers both kinds of zero the smaller one wins.
fn first_zero(ps: &[f64], vals: &[f64], f: &impl Fn(f64) -> f64, tol: f64) -> Option<f64> {
    for i in 0..vals.len() {
        if vals[i] == 0.0 {
            return Some(ps[i]);
        }
        // interior local minimum of |f|: candidate double zero in
        // [ps[i-1], ps[i+1]]
        let touch = if i > 0 && i + 1 < vals.len() {
            let (a, b, c) = (vals[i - 1].abs(), vals[i].abs(), vals[i + 1].abs());
            if b < a && b < c {
                let (p_min, f_min) = ternary_min_abs(f, ps[i - 1], ps[i + 1], tol);
                let local_scale = a.max(c).max(1e-12);
                (f_min <= 1e-9 * local_scale).then_some(p_min)
            } else {
                None
            }
        } else {
            None
        };
        let crossing = if i + 1 < vals.len() && vals[i] * vals[i + 1] < 0.0 {
            Some(bisect_sign_change(f, ps[i], ps[i + 1], tol))
        } else {
            None
        };
        match (touch, crossing) {
            (Some(t), Some(c)) => return Some(t.min(c)),
            (Some(t), None) => return Some(t),
            (None, Some(c)) => return Some(c),
            (None, None) => {}
        }
    }
    None
}

fn bisect_sign_change(f: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let mut f_lo = f(lo);
    for _ in 0..200 {
        if hi - lo <= tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return mid;
        }
        if (f_lo < 0.0) == (f_mid < 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn ternary_min_abs(f: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> (f64, f64) {
    while hi - lo > tol {
        let m1 = lo + (hi - lo) / 3.0;
        let m2 = hi - (hi - lo) / 3.0;
        if f(m1).abs() <= f(m2).abs() {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    let p = 0.5 * (lo + hi);
    (p, f(p).abs())
}

/// Cofactor sum of a float matrix: `det * <A^{-1} 1, 1>` when invertible,
/// the n^2 signed minors otherwise.
fn cof_f64(a: &[Vec<f64>]) -> f64 {
    let n = a.len();
    let scale = a
        .iter()
        .flatten()
        .map(|x| x.abs())
        .fold(0.0f64, f64::max)
        .max(1e-300);
    if let Some(b) = dense::solve_f64(a.to_vec(), vec![1.0; n], 1e-12 * scale) {
        let det = dense::det_lu(a.to_vec());
        return det * b.iter().sum::<f64>();
    }
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

/// Evaluates both sides of the generalized roundness inequality on the
/// given index lists.
pub fn roundness_check(
    space: &FiniteMetricSpace,
    list_a: &[usize],
    list_b: &[usize],
    p: &Scalar,
) -> Result<RoundnessWitness> {
    if list_a.is_empty() || list_a.len() != list_b.len() {
        return Err(NegTypeError::BadLists);
    }
    for &i in list_a.iter().chain(list_b) {
        if i >= space.size() {
            return Err(NegTypeError::IndexOutOfRange(i, space.size()));
        }
    }
    let dp = space.pow_entries(p);
    let mode = dp.mode();
    let mut lhs = Scalar::zero(mode);
    for (pos, &a) in list_a.iter().enumerate() {
        for &a2 in &list_a[pos + 1..] {
            lhs = &lhs + dp.get(a, a2);
        }
    }
    for (pos, &b) in list_b.iter().enumerate() {
        for &b2 in &list_b[pos + 1..] {
            lhs = &lhs + dp.get(b, b2);
        }
    }
    let mut rhs = Scalar::zero(mode);
    for &a in list_a {
        for &b in list_b {
            rhs = &rhs + dp.get(a, b);
        }
    }
    Ok(RoundnessWitness {
        list_a: list_a.to_vec(),
        list_b: list_b.to_vec(),
        lhs,
        rhs,
        p: p.clone(),
    })
}

/// Exhaustive search over index multisets of size up to `max_n` for a
/// violated roundness instance; `None` when every bounded instance holds.
pub fn roundness_violation_search(
    space: &FiniteMetricSpace,
    p: &Scalar,
    max_n: usize,
    tol: f64,
) -> Result<Option<RoundnessWitness>> {
    let idx: Vec<usize> = (0..space.size()).collect();
    for n_len in 1..=max_n {
        for a in idx.iter().cloned().combinations_with_replacement(n_len) {
            for b in idx.iter().cloned().combinations_with_replacement(n_len) {
                let w = roundness_check(space, &a, &b, p)?;
                if !w.holds(tol) {
                    return Ok(Some(w));
                }
            }
        }
    }
    Ok(None)
}

// --- quadratic-form minimization over the unit l1 sphere in F_0 ---------
//
// The faces of {xi : sum xi = 0, ||xi||_1 = 1} are indexed by a disjoint
// pair (P, N) of positive/negative supports. On each face the constraints
// are affine, so a candidate is the stationary point of the form under the
// two equality constraints; the global minimum over all faces is the
// minimum of the form on the sphere. Faces whose stationarity system is
// singular contribute their minimum on a boundary subface instead, and
// subfaces are enumerated as faces in their own right.
//
// Codes run over ternary digit vectors (0 = off, 1 = positive, 2 =
// negative); requiring the first nonzero digit to be 1 keeps exactly one
// of each antipodal pair, the lexicographically smaller one.

fn decode_face(mut code: u64, len: usize) -> Option<(Vec<u8>, Vec<usize>, Vec<i8>)> {
    let mut digits = vec![0u8; len];
    let mut free = Vec::new();
    let mut signs = Vec::new();
    let (mut npos, mut nneg) = (0usize, 0usize);
    let mut first_nonzero: Option<u8> = None;
    for (i, slot) in digits.iter_mut().enumerate() {
        let d = (code % 3) as u8;
        code /= 3;
        *slot = d;
        if d != 0 {
            if first_nonzero.is_none() {
                first_nonzero = Some(d);
            }
            free.push(i);
            if d == 1 {
                npos += 1;
                signs.push(1);
            } else {
                nneg += 1;
                signs.push(-1);
            }
        }
    }
    if npos == 0 || nneg == 0 || first_nonzero != Some(1) {
        return None;
    }
    Some((digits, free, signs))
}

struct FaceCandidate<T> {
    value: T,
    digits: Vec<u8>,
    xi: Vec<T>,
}

fn eval_face_f64(
    q: &[Vec<f64>],
    digits: Vec<u8>,
    free: &[usize],
    signs: &[i8],
) -> Option<FaceCandidate<f64>> {
    let k = free.len();
    let dim = k + 2;
    let mut kkt = vec![vec![0.0f64; dim]; dim];
    let mut scale = 1.0f64;
    for a in 0..k {
        for b in 0..k {
            let v = 2.0 * q[free[a]][free[b]];
            kkt[a][b] = v;
            scale = scale.max(v.abs());
        }
        kkt[a][k] = 1.0;
        kkt[a][k + 1] = signs[a] as f64;
        kkt[k][a] = 1.0;
        kkt[k + 1][a] = signs[a] as f64;
    }
    let mut rhs = vec![0.0; dim];
    rhs[k + 1] = 1.0;
    let sol = dense::solve_f64(kkt, rhs, 1e-13 * scale.max(1.0))?;
    let slack = 1e-12;
    for a in 0..k {
        if (signs[a] as f64) * sol[a] < -slack {
            return None;
        }
    }
    let mut value = 0.0;
    for a in 0..k {
        for b in 0..k {
            value += q[free[a]][free[b]] * sol[a] * sol[b];
        }
    }
    let mut xi = vec![0.0; q.len()];
    for a in 0..k {
        xi[free[a]] = sol[a];
    }
    Some(FaceCandidate { value, digits, xi })
}

fn eval_face_exact(
    q: &[Vec<BigRational>],
    digits: Vec<u8>,
    free: &[usize],
    signs: &[i8],
) -> Option<FaceCandidate<BigRational>> {
    let k = free.len();
    let dim = k + 2;
    let zero = BigRational::zero();
    let one = BigRational::from_integer(1.into());
    let two = BigRational::from_integer(2.into());
    let mut kkt = vec![vec![zero.clone(); dim]; dim];
    for a in 0..k {
        for b in 0..k {
            kkt[a][b] = &two * &q[free[a]][free[b]];
        }
        kkt[a][k] = one.clone();
        kkt[a][k + 1] = if signs[a] > 0 {
            one.clone()
        } else {
            -one.clone()
        };
        kkt[k][a] = one.clone();
        kkt[k + 1][a] = kkt[a][k + 1].clone();
    }
    let mut rhs = vec![zero.clone(); dim];
    rhs[k + 1] = one.clone();
    let sol = dense::solve_exact(kkt, rhs)?;
    for a in 0..k {
        let ok = if signs[a] > 0 {
            !sol[a].is_negative()
        } else {
            !sol[a].is_positive()
        };
        if !ok {
            return None;
        }
    }
    let mut value = zero.clone();
    for a in 0..k {
        for b in 0..k {
            value += &q[free[a]][free[b]] * &sol[a] * &sol[b];
        }
    }
    let mut xi = vec![zero; q.len()];
    for a in 0..k {
        xi[free[a]] = sol[a].clone();
    }
    Some(FaceCandidate { value, digits, xi })
}

/// Minimum of `xi^T Q xi` over `{xi : sum xi = 0, ||xi||_1 = 1}` for a
/// symmetric `Q` whose restriction to the zero-sum hyperplane is positive
/// semidefinite. Ties are broken toward the lexicographically smallest
/// sign pattern, so the result is independent of the parallel schedule.
fn min_form_on_sphere(q: &Matrix) -> Result<(Scalar, Vector, Vec<u8>)> {
    let len = q.rows();
    let count = 3u64.pow(len as u32);
    match q.mode() {
        Mode::Float => {
            let rows: Vec<Vec<f64>> = (0..len)
                .map(|i| (0..len).map(|j| q.get(i, j).to_f64()).collect())
                .collect();
            let best = exec::min_candidate(
                count,
                |code| {
                    let (digits, free, signs) = decode_face(code, len)?;
                    eval_face_f64(&rows, digits, &free, &signs)
                },
                |a, b| {
                    a.value
                        .total_cmp(&b.value)
                        .then_with(|| a.digits.cmp(&b.digits))
                },
            )
            .ok_or(NegTypeError::NoCandidate)?;
            Ok((
                Scalar::Float(best.value),
                Vector::new(best.xi.into_iter().map(Scalar::Float).collect())?,
                best.digits,
            ))
        }
        Mode::Exact => {
            let rows: Vec<Vec<BigRational>> = (0..len)
                .map(|i| {
                    (0..len)
                        .map(|j| q.get(i, j).as_rational().expect("exact").clone())
                        .collect()
                })
                .collect();
            let best = exec::min_candidate(
                count,
                |code| {
                    let (digits, free, signs) = decode_face(code, len)?;
                    eval_face_exact(&rows, digits, &free, &signs)
                },
                |a, b| a.value.cmp(&b.value).then_with(|| a.digits.cmp(&b.digits)),
            )
            .ok_or(NegTypeError::NoCandidate)?;
            Ok((
                Scalar::Exact(best.value),
                Vector::new(best.xi.into_iter().map(Scalar::Exact).collect())?,
                best.digits,
            ))
        }
    }
}

const DESCENT_SEED: u64 = 0x5eed_0011;

/// Multistart projected subgradient on the normalized form, polished by an
/// equality-constrained solve on the face the iterate lands in.
fn descent_min(q: &[Vec<f64>]) -> Option<(f64, Vec<f64>, Vec<u8>)> {
    let len = q.len();
    let mut rng = ChaCha8Rng::seed_from_u64(DESCENT_SEED);
    let starts = (16 * len).max(32);
    let iters = 80;
    let qnorm = q
        .iter()
        .flatten()
        .map(|x| x.abs())
        .fold(0.0f64, f64::max)
        .max(1e-12);
    let mut best: Option<(f64, Vec<f64>, Vec<u8>)> = None;
    for _ in 0..starts {
        let mut xi: Vec<f64> = (0..len).map(|_| rng.random_range(-1.0..1.0)).collect();
        project_f0_unit(&mut xi);
        let mut step = 0.5 / qnorm;
        let mut val = form_value(q, &xi);
        for _ in 0..iters {
            let mut grad: Vec<f64> = (0..len)
                .map(|i| 2.0 * (0..len).map(|j| q[i][j] * xi[j]).sum::<f64>())
                .collect();
            let mean = grad.iter().sum::<f64>() / len as f64;
            for g in grad.iter_mut() {
                *g -= mean;
            }
            let mut trial: Vec<f64> = xi.iter().zip(&grad).map(|(x, g)| x - step * g).collect();
            project_f0_unit(&mut trial);
            let tval = form_value(q, &trial);
            if tval < val {
                xi = trial;
                val = tval;
                step *= 1.2;
            } else {
                step *= 0.5;
            }
        }
        // polish on the face given by the iterate's sign pattern
        let thr = 1e-8 * xi.iter().map(|x| x.abs()).fold(0.0f64, f64::max);
        let digits: Vec<u8> = xi
            .iter()
            .map(|&x| {
                if x > thr {
                    1u8
                } else if x < -thr {
                    2u8
                } else {
                    0u8
                }
            })
            .collect();
        let has_pos = digits.iter().any(|&d| d == 1);
        let has_neg = digits.iter().any(|&d| d == 2);
        let candidate = if has_pos && has_neg {
            let free: Vec<usize> = (0..len).filter(|&i| digits[i] != 0).collect();
            let signs: Vec<i8> = free
                .iter()
                .map(|&i| if digits[i] == 1 { 1 } else { -1 })
                .collect();
            eval_face_f64(q, digits.clone(), &free, &signs)
                .map(|c| (c.value, c.xi, c.digits))
                .unwrap_or((val, xi.clone(), digits))
        } else {
            (val, xi.clone(), digits)
        };
        best = Some(match best {
            None => candidate,
            Some(b) => {
                if candidate.0 < b.0 || (candidate.0 == b.0 && candidate.2 < b.2) {
                    candidate
                } else {
                    b
                }
            }
        });
    }
    best
}

fn project_f0_unit(xi: &mut [f64]) {
    let mean = xi.iter().sum::<f64>() / xi.len() as f64;
    for x in xi.iter_mut() {
        *x -= mean;
    }
    let norm: f64 = xi.iter().map(|x| x.abs()).sum();
    if norm < 1e-14 {
        xi[0] = 0.5;
        xi[xi.len() - 1] = -0.5;
        return;
    }
    for x in xi.iter_mut() {
        *x /= norm;
    }
}

fn form_value(q: &[Vec<f64>], xi: &[f64]) -> f64 {
    let len = q.len();
    let mut acc = 0.0;
    for i in 0..len {
        for j in 0..len {
            acc += q[i][j] * xi[i] * xi[j];
        }
    }
    acc
}

/// The largest constant `G` with `G ||xi||_1^2 + 2 <D_p xi, xi> <= 0` on
/// the zero-sum hyperplane, i.e. the minimum of `-2 <D_p xi, xi>` over the
/// unit l1 sphere in that hyperplane. Requires p-negative type, which
/// makes every per-pattern subproblem convex.
pub fn negative_type_gap(
    space: &FiniteMetricSpace,
    p: &Scalar,
    method: GapMethod,
    tol: f64,
) -> Result<GapResult> {
    if !is_p_negative_type(space, p, false, tol)? {
        return Err(NegTypeError::NotPNegativeType(p.to_f64()));
    }
    let dp = space.pow_entries(p);
    let mode = dp.mode();
    let minus_two = -&(&Scalar::one(mode) + &Scalar::one(mode));
    let q = dp.scale(&minus_two);
    match method {
        GapMethod::SignEnum => {
            let (gamma, xi, _) = min_form_on_sphere(&q)?;
            Ok(GapResult {
                p: p.clone(),
                gamma,
                argmin_xi: CoefficientVector::new(xi, Hyperplane::F0, tol.max(1e-9))?,
                method,
            })
        }
        GapMethod::Descent => {
            let len = q.rows();
            let rows: Vec<Vec<f64>> = (0..len)
                .map(|i| (0..len).map(|j| q.get(i, j).to_f64()).collect())
                .collect();
            let (value, xi, _) = descent_min(&rows).ok_or(NegTypeError::NoCandidate)?;
            Ok(GapResult {
                p: p.clone(),
                gamma: Scalar::Float(value),
                argmin_xi: CoefficientVector::new(
                    Vector::new(xi.into_iter().map(Scalar::Float).collect())?,
                    Hyperplane::F0,
                    1e-7,
                )?,
                method,
            })
        }
    }
}

/// `min 4 ||sum_i xi_i x_i||_2^2` over zero-sum vectors of unit l1 norm,
/// by the same sign-pattern enumeration applied to four times the Gram
/// matrix of the points.
pub fn gamma2_inner_product(points: &[Vector], tol: f64) -> Result<GapResult> {
    if points.len() < 2 {
        return Err(NegTypeError::BadPoints);
    }
    let dim = points[0].dim();
    if points.iter().any(|p| p.dim() != dim) {
        return Err(NegTypeError::BadPoints);
    }
    for i in 0..points.len() {
        for j in (i + 1)..points.len() {
            if points[i] == points[j] {
                return Err(NegTypeError::BadPoints);
            }
        }
    }
    let mode = points[0].mode();
    let four = Scalar::from_int(4);
    let four = match mode {
        Mode::Exact => four,
        Mode::Float => four.to_float(),
    };
    let m = points.len();
    let gram = Matrix::from_fn(m, m, |i, j| {
        &four * &points[i].dot(&points[j]).expect("equal dims")
    })?;
    let (gamma, xi, _) = min_form_on_sphere(&gram)?;
    Ok(GapResult {
        p: Scalar::from_int(2),
        gamma,
        argmin_xi: CoefficientVector::new(xi, Hyperplane::F0, tol.max(1e-9))?,
        method: GapMethod::SignEnum,
    })
}

/// A nonzero zero-sum vector on which the p-power form vanishes — the
/// standard form of a nontrivial p-polygonal equality — or `None` when the
/// form is definite on the hyperplane.
///
/// For spaces of p-negative type the witness is read off the radical of
/// the restricted form. Otherwise the form takes both signs on the
/// hyperplane and a zero is found by bisecting between a negative and a
/// positive value.
pub fn find_polygonal_equality(
    space: &FiniteMetricSpace,
    p: &Scalar,
    tol: f64,
) -> Result<Option<CoefficientVector>> {
    if !p.is_positive() {
        return Err(NegTypeError::NegativeExponent);
    }
    let dp = space.pow_entries(p);
    let mode = dp.mode();
    let basis = f0_difference_basis(space.size(), mode)?;
    let pmat = Matrix::from_rows(basis.iter().map(|c| c.xi().entries().to_vec()).collect())?;
    let restricted = pmat.matmul(&dp)?.matmul(&pmat.transpose())?;
    if is_p_negative_type(space, p, false, tol)? {
        let kernel = restricted.kernel_basis(tol);
        let Some(c) = kernel.first() else {
            return Ok(None);
        };
        let mut xi = pmat.transpose().matvec(c)?;
        if let Some(first) = xi.entries().iter().find(|e| !e.is_zero_with(tol)).cloned() {
            xi = xi.scale(&first.recip());
        }
        Ok(Some(CoefficientVector::new(
            xi,
            Hyperplane::F0,
            tol.max(1e-9),
        )?))
    } else {
        let dp_f = dp.to_float();
        let size = space.size();
        let form = |xi: &Vector| dp_f.quadratic_form(xi).expect("conformal").to_f64();
        // negative endpoint: a difference vector always gives -2 d(x0,x1)^p
        let mut neg_entries = vec![0.0f64; size];
        neg_entries[0] = 1.0;
        neg_entries[1] = -1.0;
        let xi_neg = Vector::from_f64s(&neg_entries);
        // positive endpoint from the top eigenvector of the restricted form
        let (vals, vecs) = restricted.to_float().sym_eigen_f64()?;
        let (top, _) = vals
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .expect("nonempty spectrum");
        let mut xi_pos_entries = vec![0.0f64; size];
        for (a, coeff) in vecs[top].iter().enumerate() {
            // lift through the difference basis e_{a+1} - e_0
            xi_pos_entries[0] -= coeff;
            xi_pos_entries[a + 1] += coeff;
        }
        let xi_pos = Vector::from_f64s(&xi_pos_entries);
        if !(form(&xi_pos) > 0.0) {
            // the form was declared not NSD, so a positive direction exists;
            // reaching this means the tolerance split hairs — report absence
            // of a usable witness rather than a fabricated one
            return Err(NegTypeError::NoCandidate);
        }
        let mut lo = 0.0f64;
        let mut hi = 1.0f64;
        let blend = |t: f64| {
            let entries: Vec<f64> = (0..size)
                .map(|i| (1.0 - t) * xi_neg.get(i).to_f64() + t * xi_pos.get(i).to_f64())
                .collect();
            Vector::from_f64s(&entries)
        };
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            let v = form(&blend(mid));
            if v.abs() <= tol * dp_f.max_abs_f64() {
                lo = mid;
                hi = mid;
                break;
            }
            if v < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let mut xi = blend(0.5 * (lo + hi));
        let norm = xi.l1_norm().to_f64();
        if norm < 1e-9 {
            return Err(NegTypeError::NoCandidate);
        }
        xi = xi.scale(&Scalar::Float(1.0 / norm));
        Ok(Some(CoefficientVector::new(xi, Hyperplane::F0, 1e-6)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::DEFAULT_TOL;
    use crate::space::Provenance;

    fn space_from_ints(rows: &[Vec<i64>]) -> FiniteMetricSpace {
        FiniteMetricSpace::from_distance_matrix(
            Matrix::from_int_rows(rows),
            Provenance::Raw,
            DEFAULT_TOL,
        )
        .unwrap()
    }

    fn star_space() -> FiniteMetricSpace {
        space_from_ints(&[
            vec![0, 1, 1, 1],
            vec![1, 0, 2, 2],
            vec![1, 2, 0, 2],
            vec![1, 2, 2, 0],
        ])
    }

    fn two_point(w: i64) -> FiniteMetricSpace {
        space_from_ints(&[vec![0, w], vec![w, 0]])
    }

    #[test]
    fn two_point_gap() {
        let g = negative_type_gap(
            &two_point(5),
            &Scalar::from_int(1),
            GapMethod::SignEnum,
            DEFAULT_TOL,
        )
        .unwrap();
        assert_eq!(g.gamma, Scalar::from_int(5));
        assert_eq!(
            g.argmin_xi.xi(),
            &Vector::new(vec![Scalar::from_ratio(1, 2), Scalar::from_ratio(-1, 2)]).unwrap()
        );
    }

    #[test]
    fn path_gaps_match_harmonic_form() {
        let p3 = space_from_ints(&[vec![0, 1, 2], vec![1, 0, 1], vec![2, 1, 0]]);
        let g =
            negative_type_gap(&p3, &Scalar::from_int(1), GapMethod::SignEnum, DEFAULT_TOL).unwrap();
        assert_eq!(g.gamma, Scalar::from_ratio(1, 2));

        let p23 = space_from_ints(&[vec![0, 2, 5], vec![2, 0, 3], vec![5, 3, 0]]);
        let g = negative_type_gap(&p23, &Scalar::from_int(1), GapMethod::SignEnum, DEFAULT_TOL)
            .unwrap();
        assert_eq!(g.gamma, Scalar::from_ratio(6, 5));
    }

    #[test]
    fn gap_invariant_holds_at_argmin() {
        let g = negative_type_gap(
            &star_space(),
            &Scalar::from_int(1),
            GapMethod::SignEnum,
            DEFAULT_TOL,
        )
        .unwrap();
        assert_eq!(g.gamma, Scalar::from_ratio(1, 3));
        let xi = g.argmin_xi.xi();
        assert_eq!(xi.l1_norm(), Scalar::from_int(1));
        let d = star_space().distance_matrix().clone();
        let form = d.quadratic_form(xi).unwrap();
        let two = Scalar::from_int(2);
        // gamma * ||xi||_1^2 + 2 <D xi, xi> = 0 at the argmin
        assert!((&g.gamma + &(&two * &form)).is_zero());
    }

    #[test]
    fn descent_agrees_with_sign_enum() {
        for space in [star_space(), two_point(3)] {
            let e = negative_type_gap(
                &space,
                &Scalar::from_int(1),
                GapMethod::SignEnum,
                DEFAULT_TOL,
            )
            .unwrap();
            let d = negative_type_gap(
                &space,
                &Scalar::from_int(1),
                GapMethod::Descent,
                DEFAULT_TOL,
            )
            .unwrap();
            assert!(
                (e.gamma.to_f64() - d.gamma.to_f64()).abs() < 1e-6,
                "sign-enum {} vs descent {}",
                e.gamma,
                d.gamma
            );
        }
    }

    #[test]
    fn gap_requires_negative_type() {
        // the star is not of 2-negative type
        let err = negative_type_gap(
            &star_space(),
            &Scalar::from_int(2),
            GapMethod::SignEnum,
            DEFAULT_TOL,
        );
        assert!(matches!(err, Err(NegTypeError::NotPNegativeType(_))));
    }

    #[test]
    fn gamma2_examples() {
        // two points 0, 1 on the line
        let pts = vec![Vector::from_ints(&[0]), Vector::from_ints(&[1])];
        let g = gamma2_inner_product(&pts, DEFAULT_TOL).unwrap();
        assert_eq!(g.gamma, Scalar::from_int(1));

        // collinear points admit an annihilating combination
        let pts = vec![
            Vector::from_ints(&[0]),
            Vector::from_ints(&[1]),
            Vector::from_ints(&[2]),
        ];
        let g = gamma2_inner_product(&pts, DEFAULT_TOL).unwrap();
        assert_eq!(g.gamma, Scalar::from_int(0));
        // the quarter/half/quarter pattern annihilates the points
        let xi = g.argmin_xi.xi();
        let mut weighted = Scalar::zero(Mode::Exact);
        for (i, p) in pts.iter().enumerate() {
            weighted = &weighted + &(xi.get(i) * p.get(0));
        }
        assert!(weighted.is_zero());
    }

    #[test]
    fn roundness_star_lists() {
        let s = star_space();
        let a = vec![0usize, 0];
        let b = vec![1usize, 2];
        let w = roundness_check(&s, &a, &b, &Scalar::from_int(2)).unwrap();
        assert_eq!(w.lhs, Scalar::from_int(4));
        assert_eq!(w.rhs, Scalar::from_int(4));
        assert!(w.holds(DEFAULT_TOL));

        let p = Scalar::Float(3f64.ln() / 2f64.ln());
        let w = roundness_check(&s, &a, &b, &p).unwrap();
        assert!((w.lhs.to_f64() - 3.0).abs() < 1e-12);
        assert_eq!(w.rhs.to_f64(), 4.0);
        assert!(w.holds(DEFAULT_TOL));

        let w = roundness_check(&s, &a, &b, &Scalar::Float(2.1)).unwrap();
        assert!(w.lhs.to_f64() > w.rhs.to_f64());
        assert!(!w.holds(DEFAULT_TOL));
    }

    #[test]
    fn roundness_search_examples() {
        let s = star_space();
        assert!(
            roundness_violation_search(&s, &Scalar::from_int(1), 3, DEFAULT_TOL)
                .unwrap()
                .is_none()
        );
        let w = roundness_violation_search(&s, &Scalar::Float(2.1), 3, DEFAULT_TOL)
            .unwrap()
            .expect("violation above the supremal exponent");
        assert!(!w.holds(DEFAULT_TOL));
        // the first witness in enumeration order doubles the centre against
        // a pair of leaves
        assert_eq!(w.list_a, vec![0, 0]);
        assert_eq!(w.list_b, vec![1, 2]);
    }

    #[test]
    fn polygonal_equality_in_float_mode() {
        let cube2 = space_from_ints(&[
            vec![0, 1, 1, 2],
            vec![1, 0, 2, 1],
            vec![1, 2, 0, 1],
            vec![2, 1, 1, 0],
        ])
        .to_float();
        let xi = find_polygonal_equality(&cube2, &Scalar::Float(1.0), DEFAULT_TOL)
            .unwrap()
            .expect("degenerate form in float mode too");
        let v = cube2.distance_matrix().quadratic_form(xi.xi()).unwrap();
        assert!(v.to_f64().abs() < 1e-9, "form value {v}");
        // proportional to the alternating kernel vector
        let x = xi.xi();
        assert!((x.get(0).to_f64() - 1.0).abs() < 1e-9);
        assert!((x.get(1).to_f64() + 1.0).abs() < 1e-9);
        assert!((x.get(2).to_f64() + 1.0).abs() < 1e-9);
        assert!((x.get(3).to_f64() - 1.0).abs() < 1e-9);
    }

    #[cfg(feature = "parallel")]
    #[test]
    fn gap_reduction_is_schedule_independent() {
        // the tie-break makes the face reduction a strict total order, so
        // pool size must not affect the result bit for bit
        let space = space_from_ints(&[
            vec![0, 1, 1, 2, 2, 3],
            vec![1, 0, 2, 1, 3, 2],
            vec![1, 2, 0, 3, 1, 2],
            vec![2, 1, 3, 0, 2, 1],
            vec![2, 3, 1, 2, 0, 1],
            vec![3, 2, 2, 1, 1, 0],
        ])
        .to_float();
        let wide = negative_type_gap(
            &space,
            &Scalar::Float(1.0),
            GapMethod::SignEnum,
            DEFAULT_TOL,
        )
        .unwrap();
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap();
        let narrow = pool
            .install(|| {
                negative_type_gap(
                    &space,
                    &Scalar::Float(1.0),
                    GapMethod::SignEnum,
                    DEFAULT_TOL,
                )
            })
            .unwrap();
        assert_eq!(
            wide.gamma.to_f64().to_bits(),
            narrow.gamma.to_f64().to_bits()
        );
        for i in 0..6 {
            assert_eq!(
                wide.argmin_xi.xi().get(i).to_f64().to_bits(),
                narrow.argmin_xi.xi().get(i).to_f64().to_bits()
            );
        }
    }

    #[test]
    fn first_zero_prefers_touch_left_of_crossing_in_same_window() {
        // double zero at 1.001, sign change at 1.03: both land in the same
        // grid window, and the earlier touch must win
        let f = |p: f64| (p - 1.001).powi(2) * (p - 1.03);
        let ps: Vec<f64> = (0..=64).map(|i| i as f64 / 32.0).collect();
        let vals: Vec<f64> = ps.iter().map(|&p| f(p)).collect();
        let z = first_zero(&ps, &vals, &f, 1e-9).expect("zero exists");
        assert!((z - 1.001).abs() <= 1e-6, "got {z}");
    }

    #[test]
    fn supremal_p_star_and_ultra() {
        let got = supremal_p(&star_space(), &SupremalConfig::default()).unwrap();
        let expected = 3f64.ln() / 2f64.ln();
        match got.value {
            WpValue::Finite(ref s) => assert!((s.to_f64() - expected).abs() < 1e-9),
            WpValue::Infinite => panic!("star has finite supremal exponent"),
        }
        assert!(matches!(got.certificate, WpCertificate::CofZero { .. }));

        let ultra = space_from_ints(&[vec![0, 2, 2], vec![2, 0, 1], vec![2, 1, 0]]);
        let got = supremal_p(&ultra, &SupremalConfig::default()).unwrap();
        assert_eq!(got.value, WpValue::Infinite);
        assert_eq!(got.certificate, WpCertificate::Ultrametric);
    }

    #[test]
    fn polygonal_equality_examples() {
        // the full 2-cube: kernel vector is the alternating one
        let cube2 = space_from_ints(&[
            vec![0, 1, 1, 2],
            vec![1, 0, 2, 1],
            vec![1, 2, 0, 1],
            vec![2, 1, 1, 0],
        ]);
        let xi = find_polygonal_equality(&cube2, &Scalar::from_int(1), DEFAULT_TOL)
            .unwrap()
            .expect("degenerate form");
        assert_eq!(xi.xi(), &Vector::from_ints(&[1, -1, -1, 1]));

        // strict spaces admit none
        let quad = space_from_ints(&[
            vec![0, 1, 3, 4],
            vec![1, 0, 2, 3],
            vec![3, 2, 0, 1],
            vec![4, 3, 1, 0],
        ]);
        assert!(
            find_polygonal_equality(&quad, &Scalar::from_int(1), DEFAULT_TOL)
                .unwrap()
                .is_none()
        );

        // above the supremal exponent a zero is found by bisection
        let xi = find_polygonal_equality(&star_space(), &Scalar::from_int(2), DEFAULT_TOL)
            .unwrap()
            .expect("form takes both signs");
        let d2 = star_space().pow_entries(&Scalar::from_int(2)).to_float();
        let v = d2.quadratic_form(xi.xi()).unwrap().to_f64();
        assert!(v.abs() < 1e-6, "form value {v} at the witness");
        assert!(xi.xi().l1_norm().to_f64() > 0.5);
    }

    #[test]
    fn strict_negative_type_examples() {
        // trees are of strict 1-negative type
        assert!(
            is_p_negative_type(&star_space(), &Scalar::from_int(1), true, DEFAULT_TOL).unwrap()
        );
        // beyond the supremal exponent even the loose form fails
        assert!(
            !is_p_negative_type(&star_space(), &Scalar::from_int(2), false, DEFAULT_TOL).unwrap()
        );
        // p = 0 is negative type for every space
        assert!(
            is_p_negative_type(&star_space(), &Scalar::from_int(0), false, DEFAULT_TOL).unwrap()
        );
        assert!(matches!(
            is_p_negative_type(&star_space(), &Scalar::from_int(-1), false, DEFAULT_TOL),
            Err(NegTypeError::NegativeExponent)
        ));
    }
}
