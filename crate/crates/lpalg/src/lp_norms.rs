//! Operator norms on `ℓ^p_n`, Lamperti isometries, hermitian elements, and
//! C*-cores of represented matrix algebras.
//!
//! Exact Gaussian-rational arithmetic carries every algebraic statement
//! (cores, hermitian subspaces, spectra); floating point appears only in
//! norm estimation, and a general-p norm is always a certified interval,
//! never a single number.

use crate::linalg::{kernel_basis, Mat, Subspace};
use crate::scalar::Scalar;
use num::complex::Complex64;
use num::{BigInt, BigRational, One, ToPrimitive, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LpError {
    #[error("p must be a finite real ≥ 1, got {0}")]
    BadExponent(String),
    #[error("p = 2 is excluded here: {context} is only meaningful for p ≠ 2")]
    PTwoExcluded { context: String },
    #[error("empty matrix")]
    EmptyMatrix,
    #[error("non-finite entry in matrix")]
    NonFinite,
    #[error("matrix is not square")]
    NotSquare,
    #[error("not of Lamperti form: {0}")]
    NotLamperti(String),
    #[error("element does not lie in the algebra's span")]
    NotInSpan,
    #[error("basis is not linearly independent")]
    NotIndependent,
    #[error("span is not closed under multiplication (basis indices {i}, {j})")]
    NotClosed { i: usize, j: usize },
    #[error("algebra is not unital")]
    NotUnital,
    #[error("algebra is not commutative")]
    NotCommutative,
    #[error("spectrum requires an algebra of diagonal matrices")]
    NotDiagonal,
    #[error("shape mismatch: {0}")]
    Shape(String),
}

// ---------------------------------------------------------------------------
// Exponents
// ---------------------------------------------------------------------------

/// A Hölder exponent `p ∈ [1, ∞)`, kept as an exact rational so the special
/// cases `p = 1` and `p = 2` are recognized exactly.
#[derive(Clone, Debug, PartialEq)]
pub struct PExponent {
    value: BigRational,
}

impl PExponent {
    pub fn new(value: BigRational) -> Result<Self, LpError> {
        if value < BigRational::one() {
            return Err(LpError::BadExponent(value.to_string()));
        }
        Ok(PExponent { value })
    }

    pub fn from_int(p: i64) -> Self {
        PExponent::new(BigRational::from_integer(BigInt::from(p))).expect("integer p ≥ 1")
    }

    pub fn from_ratio(num: i64, den: i64) -> Result<Self, LpError> {
        if den == 0 {
            return Err(LpError::BadExponent(format!("{num}/0")));
        }
        PExponent::new(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn parse(text: &str) -> Result<Self, LpError> {
        let t = text.trim();
        let (n, d) = match t.split_once('/') {
            Some((n, d)) => (n, d),
            None => (t, "1"),
        };
        let n: i64 = n.parse().map_err(|_| LpError::BadExponent(t.into()))?;
        let d: i64 = d.parse().map_err(|_| LpError::BadExponent(t.into()))?;
        PExponent::from_ratio(n, d)
    }

    pub fn is_one(&self) -> bool {
        self.value.is_one()
    }

    pub fn is_two(&self) -> bool {
        self.value == BigRational::from_integer(BigInt::from(2))
    }

    pub fn as_f64(&self) -> f64 {
        self.value.to_f64().expect("p fits in f64")
    }

    pub fn rational(&self) -> &BigRational {
        &self.value
    }

    /// Hölder dual `p' = p/(p−1)`, `∞` (as `f64::INFINITY`) when `p = 1`.
    pub fn holder_dual(&self) -> f64 {
        if self.is_one() {
            f64::INFINITY
        } else {
            let p = self.as_f64();
            p / (p - 1.0)
        }
    }

    pub fn require_not_two(&self, context: &str) -> Result<(), LpError> {
        if self.is_two() {
            Err(LpError::PTwoExcluded { context: context.into() })
        } else {
            Ok(())
        }
    }
}

impl std::fmt::Display for PExponent {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.value)
    }
}

// ---------------------------------------------------------------------------
// Norm estimates
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NormMethod {
    /// Closed form `max` column absolute sum.
    ExactP1,
    /// Largest singular value.
    ExactP2,
    /// Lower bound from multistart power iteration (the matching upper
    /// bound comes from interpolation).
    PowerIteration,
    /// Upper bound only, from Riesz–Thorin interpolation between p=1 and ∞.
    Interpolation,
    /// Entrywise-nonnegative matrix: the positive-start power iteration
    /// converges to the norm, reported exact within iteration tolerance.
    NonnegExact,
}

impl NormMethod {
    pub fn tag(&self) -> &'static str {
        match self {
            NormMethod::ExactP1 => "exact-p1",
            NormMethod::ExactP2 => "exact-p2",
            NormMethod::PowerIteration => "power-iteration",
            NormMethod::Interpolation => "interpolation",
            NormMethod::NonnegExact => "nonneg-exact",
        }
    }
}

/// A certified interval `[lower, upper]` around an `ℓ^p → ℓ^p` operator norm.
#[derive(Clone, Copy, Debug)]
pub struct NormEstimate {
    pub lower: f64,
    pub upper: f64,
    pub method: NormMethod,
}

impl NormEstimate {
    fn point(value: f64, method: NormMethod) -> Self {
        NormEstimate { lower: value, upper: value, method }
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    /// Conservative max of two interval estimates.
    pub fn max(self, other: NormEstimate) -> NormEstimate {
        NormEstimate {
            lower: self.lower.max(other.lower),
            upper: self.upper.max(other.upper),
            method: if other.upper > self.upper { other.method } else { self.method },
        }
    }
}

/// Configuration for the iterative norm machinery.
#[derive(Clone, Debug)]
pub struct NormConfig {
    /// Relative convergence tolerance of the power iteration.
    pub power_tol: f64,
    pub max_iter: usize,
    /// Random starts added on top of the canonical basis and all-ones starts.
    pub random_starts: usize,
    pub seed: u64,
}

impl Default for NormConfig {
    fn default() -> Self {
        NormConfig { power_tol: 1e-10, max_iter: 200, random_starts: 4, seed: 0x5eed }
    }
}

pub(crate) struct CMat {
    pub n: usize,
    pub data: Vec<Complex64>,
}

impl CMat {
    pub fn from_mat(m: &Mat) -> Self {
        assert!(m.is_square());
        CMat { n: m.nrows, data: m.to_complex() }
    }

    fn at(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.n + j]
    }

    fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    fn is_entrywise_nonneg(&self) -> bool {
        self.data.iter().all(|z| z.im == 0.0 && z.re >= 0.0)
    }

    fn matvec(&self, x: &[Complex64]) -> Vec<Complex64> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.at(i, j) * x[j]).sum())
            .collect()
    }

    /// `M^H x`.
    fn matvec_adj(&self, x: &[Complex64]) -> Vec<Complex64> {
        (0..self.n)
            .map(|j| (0..self.n).map(|i| self.at(i, j).conj() * x[i]).sum())
            .collect()
    }

    fn col_abs_sums(&self) -> Vec<f64> {
        (0..self.n)
            .map(|j| (0..self.n).map(|i| self.at(i, j).norm()).sum())
            .collect()
    }

    fn row_abs_sums(&self) -> Vec<f64> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.at(i, j).norm()).sum())
            .collect()
    }
}

fn vec_norm_p(x: &[Complex64], p: f64) -> f64 {
    if p.is_infinite() {
        return x.iter().map(|z| z.norm()).fold(0.0, f64::max);
    }
    x.iter().map(|z| z.norm().powf(p)).sum::<f64>().powf(1.0 / p)
}

/// Unit-dual vector: `w` with `‖w‖_{p'} = 1` and `Re⟨w, v⟩ = ‖v‖_p`.
fn dual_vector(v: &[Complex64], p: f64) -> Vec<Complex64> {
    let norm = vec_norm_p(v, p);
    if norm == 0.0 {
        return vec![Complex64::new(0.0, 0.0); v.len()];
    }
    let scale = norm.powf(p - 1.0);
    v.iter()
        .map(|z| {
            let r = z.norm();
            if r == 0.0 {
                Complex64::new(0.0, 0.0)
            } else {
                (z / r) * (r.powf(p - 1.0) / scale)
            }
        })
        .collect()
}

fn re_inner(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x.conj() * y).re).sum()
}

/// One run of the Boyd–Higham power method for `‖M‖_p`, `1 < p < ∞`.
/// Every iterate yields a valid lower bound; the best one is returned.
fn power_iteration(m: &CMat, p: f64, start: &[Complex64], cfg: &NormConfig) -> f64 {
    let q = p / (p - 1.0);
    let norm0 = vec_norm_p(start, p);
    if norm0 == 0.0 {
        return 0.0;
    }
    let mut x: Vec<Complex64> = start.iter().map(|z| z / norm0).collect();
    let mut best = 0.0f64;
    for _ in 0..cfg.max_iter {
        let y = m.matvec(&x);
        let nu = vec_norm_p(&y, p);
        if nu > best {
            best = nu;
        }
        if nu == 0.0 {
            break;
        }
        let u = dual_vector(&y, p);
        let z = m.matvec_adj(&u);
        let zq = vec_norm_p(&z, q);
        // Stationarity: ‖z‖_q = Re⟨z, x⟩ = ν at a local maximizer.
        if zq <= re_inner(&z, &x) * (1.0 + cfg.power_tol) + cfg.power_tol * nu.max(1.0) {
            break;
        }
        let next = dual_vector(&z, q);
        let nn = vec_norm_p(&next, p);
        if nn == 0.0 {
            break;
        }
        x = next.iter().map(|z| z / nn).collect();
    }
    best
}

fn norm_p2_svd(m: &CMat) -> f64 {
    let dm = nalgebra::DMatrix::from_fn(m.n, m.n, |i, j| m.at(i, j));
    dm.svd(false, false).singular_values.iter().copied().fold(0.0, f64::max)
}

pub(crate) fn p_operator_norm_cmat(
    m: &CMat,
    p: &PExponent,
    cfg: &NormConfig,
) -> Result<NormEstimate, LpError> {
    if m.n == 0 {
        return Err(LpError::EmptyMatrix);
    }
    if !m.is_finite() {
        return Err(LpError::NonFinite);
    }
    if p.is_one() {
        let v = m.col_abs_sums().into_iter().fold(0.0, f64::max);
        return Ok(NormEstimate::point(v, NormMethod::ExactP1));
    }
    if p.is_two() {
        return Ok(NormEstimate::point(norm_p2_svd(m), NormMethod::ExactP2));
    }
    let pf = p.as_f64();
    let norm1 = m.col_abs_sums().into_iter().fold(0.0, f64::max);
    let norminf = m.row_abs_sums().into_iter().fold(0.0, f64::max);
    // Riesz–Thorin between the explicit endpoints p = 1 and p = ∞.
    let upper = norm1.powf(1.0 / pf) * norminf.powf(1.0 - 1.0 / pf);

    let mut starts: Vec<Vec<Complex64>> = Vec::new();
    for j in 0..m.n {
        let mut e = vec![Complex64::new(0.0, 0.0); m.n];
        e[j] = Complex64::new(1.0, 0.0);
        starts.push(e);
    }
    starts.push(vec![Complex64::new(1.0, 0.0); m.n]);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for _ in 0..cfg.random_starts {
        starts.push(
            (0..m.n)
                .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect(),
        );
    }
    let mut lower = 0.0f64;
    for s in &starts {
        let v = power_iteration(m, pf, s, cfg);
        if v > lower {
            lower = v;
        }
    }
    let (lower, upper, method) = if m.is_entrywise_nonneg() {
        // Positive starts converge to the true norm for entrywise-nonnegative
        // matrices, so the interval collapses up to iteration tolerance.
        let u = upper.min(lower * (1.0 + 100.0 * cfg.power_tol));
        (lower.min(u), u, NormMethod::NonnegExact)
    } else if lower > 0.0 {
        (lower.min(upper), upper, NormMethod::PowerIteration)
    } else {
        (0.0, upper, NormMethod::Interpolation)
    };
    Ok(NormEstimate { lower, upper, method })
}

/// Certified interval for `‖M‖_{ℓ^p → ℓ^p}`.
///
/// Closed forms at `p ∈ {1, 2}`; otherwise the lower bound comes from
/// multistart power iteration and the upper bound from interpolation, with
/// entrywise-nonnegative matrices reported exact within tolerance.
pub fn p_operator_norm(m: &Mat, p: &PExponent, cfg: &NormConfig) -> Result<NormEstimate, LpError> {
    if m.nrows == 0 || m.ncols == 0 {
        return Err(LpError::EmptyMatrix);
    }
    if !m.is_square() {
        return Err(LpError::NotSquare);
    }
    p_operator_norm_cmat(&CMat::from_mat(m), p, cfg)
}

// ---------------------------------------------------------------------------
// Lamperti form
// ---------------------------------------------------------------------------

/// Factorization `M = D·P` with `D` unimodular diagonal and `P` a
/// permutation; the shape of every invertible isometry of `ℓ^p_n`, `p ≠ 2`.
#[derive(Clone, Debug)]
pub struct LampertiFactorization {
    pub diagonal: Vec<Scalar>,
    /// `P e_j = e_{permutation[j]}`.
    pub permutation: Vec<usize>,
}

impl LampertiFactorization {
    pub fn recompose(&self) -> Mat {
        let n = self.diagonal.len();
        let mut m = Mat::zeros(n, n);
        for (j, &i) in self.permutation.iter().enumerate() {
            m[(i, j)] = self.diagonal[i].clone();
        }
        m
    }
}

/// Is `M = D·P` with unimodular diagonal `D` and permutation `P`?
pub fn is_lamperti_isometry(m: &Mat, p: &PExponent) -> Result<bool, LpError> {
    p.require_not_two("the Lamperti form of invertible isometries")?;
    if !m.is_square() {
        return Ok(false);
    }
    Ok(lamperti_structure(m).is_ok())
}

pub(crate) fn lamperti_structure(m: &Mat) -> Result<LampertiFactorization, String> {
    let n = m.nrows;
    let mut permutation = vec![usize::MAX; n];
    let mut row_used = vec![false; n];
    let mut diagonal = vec![Scalar::zero(); n];
    for j in 0..n {
        let nonzero: Vec<usize> = (0..n).filter(|&i| !m[(i, j)].is_zero()).collect();
        if nonzero.len() != 1 {
            return Err(format!("column {j} has {} nonzero entries", nonzero.len()));
        }
        let i = nonzero[0];
        if row_used[i] {
            return Err(format!("row {i} hit by two columns"));
        }
        row_used[i] = true;
        let entry = m[(i, j)].clone();
        if !entry.abs_sq().is_one() {
            return Err(format!("entry at ({i}, {j}) is not unimodular"));
        }
        permutation[j] = i;
        diagonal[i] = entry;
    }
    Ok(LampertiFactorization { diagonal, permutation })
}

/// Unique factorization `M = D·P`; exact round trip.
pub fn lamperti_decompose(m: &Mat, p: &PExponent) -> Result<LampertiFactorization, LpError> {
    p.require_not_two("the Lamperti form of invertible isometries")?;
    let f = lamperti_structure(m).map_err(LpError::NotLamperti)?;
    debug_assert_eq!(&f.recompose(), m);
    Ok(f)
}

// ---------------------------------------------------------------------------
// Represented algebras
// ---------------------------------------------------------------------------

/// A unital subalgebra of `n × n` matrices with exact Gaussian-rational
/// entries, given by a linearly independent basis whose span is closed
/// under multiplication (verified).
#[derive(Clone, Debug)]
pub struct RepresentedAlgebra {
    pub ambient_dim: usize,
    pub basis: Vec<Mat>,
    pub unital: bool,
    span: Subspace<Scalar>,
}

impl RepresentedAlgebra {
    pub fn new(basis: Vec<Mat>) -> Result<Self, LpError> {
        let Some(first) = basis.first() else {
            return Err(LpError::EmptyMatrix);
        };
        if !first.is_square() {
            return Err(LpError::NotSquare);
        }
        let n = first.nrows;
        if basis.iter().any(|b| b.nrows != n || b.ncols != n) {
            return Err(LpError::Shape("basis matrices of different sizes".into()));
        }
        let vectors: Vec<Vec<Scalar>> = basis.iter().map(Mat::vectorize).collect();
        let span = Subspace::span(&vectors, n * n);
        if span.dim() != basis.len() {
            return Err(LpError::NotIndependent);
        }
        for (i, a) in basis.iter().enumerate() {
            for (j, b) in basis.iter().enumerate() {
                if !span.contains(&(a * b).vectorize()) {
                    return Err(LpError::NotClosed { i, j });
                }
            }
        }
        let unital = span.contains(&Mat::identity(n).vectorize());
        Ok(RepresentedAlgebra { ambient_dim: n, basis, unital, span })
    }

    /// Full matrix algebra `M_n`, basis of matrix units.
    pub fn full_matrix(n: usize) -> Self {
        let mut basis = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut e = Mat::zeros(n, n);
                e[(i, j)] = Scalar::one();
                basis.push(e);
            }
        }
        RepresentedAlgebra::new(basis).expect("matrix units form an algebra")
    }

    /// Upper-triangular matrices inside `M_n`.
    pub fn upper_triangular(n: usize) -> Self {
        let mut basis = Vec::new();
        for i in 0..n {
            for j in i..n {
                let mut e = Mat::zeros(n, n);
                e[(i, j)] = Scalar::one();
                basis.push(e);
            }
        }
        RepresentedAlgebra::new(basis).expect("upper triangular matrices form an algebra")
    }

    /// Diagonal matrices inside `M_n`.
    pub fn diagonal(n: usize) -> Self {
        let basis = (0..n)
            .map(|i| {
                let mut e = Mat::zeros(n, n);
                e[(i, i)] = Scalar::one();
                e
            })
            .collect();
        RepresentedAlgebra::new(basis).expect("diagonal matrices form an algebra")
    }

    /// Scalar multiples of the identity inside `M_n`.
    pub fn scalars(n: usize) -> Self {
        RepresentedAlgebra::new(vec![Mat::identity(n)]).expect("scalars form an algebra")
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn contains(&self, m: &Mat) -> bool {
        m.nrows == self.ambient_dim && m.ncols == self.ambient_dim && self.span.contains(&m.vectorize())
    }

    pub fn coordinates(&self, m: &Mat) -> Option<Vec<Scalar>> {
        self.span.coordinates(&m.vectorize())
    }

    pub fn element(&self, coords: &[Scalar]) -> Mat {
        assert_eq!(coords.len(), self.basis.len());
        let mut out = Mat::zeros(self.ambient_dim, self.ambient_dim);
        for (c, b) in coords.iter().zip(&self.basis) {
            if !c.is_zero() {
                out = &out + &b.scale(c);
            }
        }
        out
    }

    /// Exact equality of spans.
    pub fn same_span(&self, other: &RepresentedAlgebra) -> bool {
        self.ambient_dim == other.ambient_dim && self.span.equals(&other.span)
    }

    pub(crate) fn span_subspace(&self) -> &Subspace<Scalar> {
        &self.span
    }
}

// ---------------------------------------------------------------------------
// Hermitian elements
// ---------------------------------------------------------------------------

/// Configuration of the dynamical `‖exp(ita)‖ = 1` cross-check.
#[derive(Clone, Debug)]
pub struct HermitianConfig {
    /// Symmetric grid of t values; each is used with both signs.
    pub grid: Vec<f64>,
    /// Tolerance band around 1.
    pub tau: f64,
    pub norm: NormConfig,
}

impl Default for HermitianConfig {
    fn default() -> Self {
        HermitianConfig {
            grid: vec![0.1, 0.5, 1.0, 2.0, std::f64::consts::PI],
            tau: 1e-6,
            norm: NormConfig::default(),
        }
    }
}

/// Outcome of a hermitian test: the structural verdict is authoritative,
/// the exponential sweep is recorded as evidence.
#[derive(Clone, Debug)]
pub struct HermitianVerdict {
    pub hermitian: bool,
    /// `Some(true)`: every grid norm interval sat inside `[1−τ, 1+τ]`;
    /// `Some(false)`: some certified lower bound exceeded `1+τ`;
    /// `None`: inconclusive intervals.
    pub dynamical: Option<bool>,
    pub evidence: Vec<(f64, NormEstimate)>,
    pub agrees: bool,
}

/// Is `a` hermitian in `B(ℓ^p_n)`, i.e. `‖exp(ita)‖ = 1` for all real `t`?
/// Structurally: real diagonal when `p ≠ 2`, self-adjoint when `p = 2`.
pub fn is_hermitian(
    algebra: &RepresentedAlgebra,
    a: &Mat,
    p: &PExponent,
    cfg: &HermitianConfig,
) -> Result<HermitianVerdict, LpError> {
    if !algebra.contains(a) {
        return Err(LpError::NotInSpan);
    }
    let structural = if p.is_two() {
        *a == a.conj_transpose()
    } else {
        a.is_real_diagonal()
    };
    let mut evidence = Vec::new();
    let mut all_flat = true;
    let mut witness_above = false;
    for &t0 in &cfg.grid {
        for t in [t0, -t0] {
            let e = cmat_exp_scaled(a, t);
            let est = p_operator_norm_cmat(&e, p, &cfg.norm)?;
            if !(est.lower >= 1.0 - cfg.tau && est.upper <= 1.0 + cfg.tau) {
                all_flat = false;
            }
            if est.lower > 1.0 + cfg.tau {
                witness_above = true;
            }
            evidence.push((t, est));
        }
    }
    let dynamical = if all_flat {
        Some(true)
    } else if witness_above {
        Some(false)
    } else {
        None
    };
    Ok(HermitianVerdict {
        hermitian: structural,
        dynamical,
        evidence,
        agrees: dynamical == Some(structural),
    })
}

/// `exp(i·t·A)` by scaling and squaring with a Taylor core.
fn cmat_exp_scaled(a: &Mat, t: f64) -> CMat {
    let n = a.nrows;
    let ita: Vec<Complex64> = a
        .to_complex()
        .into_iter()
        .map(|z| Complex64::new(0.0, t) * z)
        .collect();
    let norm1: f64 = (0..n)
        .map(|j| (0..n).map(|i| ita[i * n + j].norm()).sum::<f64>())
        .fold(0.0, f64::max);
    let s = if norm1 > 0.5 { (norm1 / 0.5).log2().ceil() as u32 } else { 0 };
    let scale = 2f64.powi(s as i32);
    let b: Vec<Complex64> = ita.iter().map(|z| z / scale).collect();

    let mul = |x: &[Complex64], y: &[Complex64]| -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = x[i * n + k];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    out[i * n + j] += a * y[k * n + j];
                }
            }
        }
        out
    };

    let mut result = vec![Complex64::new(0.0, 0.0); n * n];
    for i in 0..n {
        result[i * n + i] = Complex64::new(1.0, 0.0);
    }
    let mut term = result.clone();
    for k in 1..=24 {
        term = mul(&term, &b);
        let kf = k as f64;
        for z in term.iter_mut() {
            *z /= kf;
        }
        for (r, x) in result.iter_mut().zip(&term) {
            *r += x;
        }
        if term.iter().map(|z| z.norm()).sum::<f64>() < 1e-18 {
            break;
        }
    }
    let mut out = result;
    for _ in 0..s {
        out = mul(&out, &out);
    }
    CMat { n, data: out }
}

// ---------------------------------------------------------------------------
// C*-cores
// ---------------------------------------------------------------------------

/// The C*-core of a represented algebra, together with the real basis of
/// its hermitian part.
#[derive(Clone, Debug)]
pub struct CoreData {
    /// `core(A) = A_h + iA_h` as a represented algebra.
    pub algebra: RepresentedAlgebra,
    /// Real basis of the hermitian elements `A_h`.
    pub hermitian_basis: Vec<Mat>,
    /// Whether the `p ≠ 2` (commutative, diagonal) regime applied.
    pub commutative_regime: bool,
}

/// Computes `core(A) = A_h + iA_h` exactly.
///
/// For `p ≠ 2` the hermitian elements are the real diagonal matrices in the
/// span, found by solving a real-linear system over ℚ; the core is then a
/// commutative algebra of diagonal matrices. For `p = 2` the core is
/// `A ∩ A*` and commutativity is not asserted.
pub fn core_of(algebra: &RepresentedAlgebra, p: &PExponent) -> Result<CoreData, LpError> {
    if !algebra.unital {
        return Err(LpError::NotUnital);
    }
    let n = algebra.ambient_dim;
    let k = algebra.basis.len();
    if p.is_two() {
        // core = A ∩ A* = {a ∈ A : a* ∈ A}. Writing a = Σ z_j B_j, the
        // condition Σ conj(z_j)·vec(B_j*) ∈ span(B) is complex-linear in
        // w = conj(z); solve for w and conjugate back.
        let star_in_span = algebra
            .basis
            .iter()
            .all(|b| algebra.span_subspace().contains(&b.conj_transpose().vectorize()));
        let star_basis: Vec<Mat> = if star_in_span {
            algebra.basis.clone()
        } else {
            let reduced: Vec<Vec<Scalar>> = algebra
                .basis
                .iter()
                .map(|b| reduce_against(algebra.span_subspace(), &b.conj_transpose().vectorize()))
                .collect();
            let mut rows: Vec<Vec<Scalar>> = Vec::new();
            for pos in 0..n * n {
                let row: Vec<Scalar> = reduced.iter().map(|r| r[pos].clone()).collect();
                if row.iter().any(|x| !x.is_zero()) {
                    rows.push(row);
                }
            }
            kernel_basis(rows, k)
                .into_iter()
                .map(|w| {
                    let coords: Vec<Scalar> = w.iter().map(Scalar::conj).collect();
                    algebra.element(&coords)
                })
                .collect()
        };
        let algebra_core = RepresentedAlgebra::new(star_basis)?;
        // Hermitian part of a C*-algebra: self-adjoint elements. Use
        // (b + b*)/2 and (b - b*)/2i of the basis to span it over ℝ.
        let mut herm = Vec::new();
        let half = Scalar::from_ratio(1, 2);
        let half_over_i = &half * &Scalar::i().inv();
        for b in &algebra_core.basis {
            let bstar = b.conj_transpose();
            let re = (&(b + &bstar)).scale(&half);
            let im = (&(b - &bstar)).scale(&half_over_i);
            for m in [re, im] {
                if !m.is_zero() {
                    herm.push(m);
                }
            }
        }
        return Ok(CoreData {
            algebra: algebra_core,
            hermitian_basis: herm,
            commutative_regime: false,
        });
    }

    // p ≠ 2: A_h = A ∩ {real diagonal}. Solve over ℚ with unknowns
    // (Re z_1..k, Im z_1..k).
    let mut rows: Vec<Vec<BigRational>> = Vec::new();
    let positions: Vec<(usize, usize)> = (0..n)
        .flat_map(|r| (0..n).map(move |s| (r, s)))
        .filter(|&(r, s)| algebra.basis.iter().any(|b| !b[(r, s)].is_zero()))
        .collect();
    for &(r, s) in &positions {
        if r != s {
            // Re and Im of the (r, s) entry must vanish.
            let mut row_re = vec![BigRational::zero(); 2 * k];
            let mut row_im = vec![BigRational::zero(); 2 * k];
            for (j, b) in algebra.basis.iter().enumerate() {
                let e = &b[(r, s)];
                // (u + iv)(x + iy) has Re = u·x − v·y, Im = u·y + v·x.
                row_re[j] = e.re.clone();
                row_re[k + j] = -e.im.clone();
                row_im[j] = e.im.clone();
                row_im[k + j] = e.re.clone();
            }
            rows.push(row_re);
            rows.push(row_im);
        } else {
            // Imaginary part of the diagonal entry must vanish.
            let mut row = vec![BigRational::zero(); 2 * k];
            for (j, b) in algebra.basis.iter().enumerate() {
                let e = &b[(r, r)];
                row[j] = e.im.clone();
                row[k + j] = e.re.clone();
            }
            rows.push(row);
        }
    }
    let kernel = kernel_basis(rows, 2 * k);
    let mut hermitian_basis = Vec::new();
    for v in kernel {
        let coords: Vec<Scalar> = (0..k)
            .map(|j| Scalar::new(v[j].clone(), v[k + j].clone()))
            .collect();
        let m = algebra.element(&coords);
        assert!(m.is_real_diagonal(), "hermitian solution must be real diagonal");
        if !m.is_zero() {
            hermitian_basis.push(m);
        }
    }
    if hermitian_basis.is_empty() {
        return Err(LpError::NotUnital); // a unital algebra always has 1 ∈ A_h
    }
    // core = A_h + iA_h = complex span of the real-diagonal basis.
    let core = RepresentedAlgebra::new(hermitian_basis.clone())?;
    // Commutativity and idempotence of the construction.
    for a in &core.basis {
        for b in &core.basis {
            if &(a * b) != &(b * a) {
                return Err(LpError::NotCommutative);
            }
        }
    }
    if !core.unital {
        return Err(LpError::NotUnital);
    }
    Ok(CoreData { algebra: core, hermitian_basis, commutative_regime: true })
}

fn reduce_against(span: &Subspace<Scalar>, v: &[Scalar]) -> Vec<Scalar> {
    // Residual of v modulo the span (zero iff contained).
    let mut v = v.to_vec();
    for (i, &c) in span_pivots(span).iter().enumerate() {
        if !v[c].is_zero() {
            let factor = v[c].clone();
            let row = &span.basis_rows()[i];
            for (x, r) in v.iter_mut().zip(row.iter()) {
                if !r.is_zero() {
                    let delta = &factor * r;
                    *x -= &delta;
                }
            }
        }
    }
    v
}

fn span_pivots(span: &Subspace<Scalar>) -> Vec<usize> {
    // Pivot columns are the leading-one positions of the RREF rows.
    span.basis_rows()
        .iter()
        .map(|row| row.iter().position(|x| !x.is_zero()).expect("nonzero row"))
        .collect()
}

// ---------------------------------------------------------------------------
// Spectrum of a commutative diagonal algebra
// ---------------------------------------------------------------------------

/// The finite spectrum of a commutative algebra of diagonal matrices:
/// coordinates are grouped into classes on which every element is constant.
#[derive(Clone, Debug)]
pub struct SpectrumData {
    /// Partition of `0..n` into agreement classes, one per spectrum point.
    pub classes: Vec<Vec<usize>>,
    /// Minimal idempotents: the class indicator matrices.
    pub idempotents: Vec<Mat>,
}

pub fn spectrum_points(core: &RepresentedAlgebra) -> Result<SpectrumData, LpError> {
    for a in &core.basis {
        for b in &core.basis {
            if &(a * b) != &(b * a) {
                return Err(LpError::NotCommutative);
            }
        }
    }
    if !core.basis.iter().all(Mat::is_diagonal) {
        return Err(LpError::NotDiagonal);
    }
    if !core.unital {
        return Err(LpError::NotUnital);
    }
    let n = core.ambient_dim;
    let mut class_of: Vec<Option<usize>> = vec![None; n];
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for i in 0..n {
        if class_of[i].is_some() {
            continue;
        }
        let c = classes.len();
        class_of[i] = Some(c);
        let mut members = vec![i];
        for j in i + 1..n {
            if class_of[j].is_none()
                && core.basis.iter().all(|b| b[(i, i)] == b[(j, j)])
            {
                class_of[j] = Some(c);
                members.push(j);
            }
        }
        classes.push(members);
    }
    let mut idempotents = Vec::new();
    let mut total = Mat::zeros(n, n);
    for class in &classes {
        let mut e = Mat::zeros(n, n);
        for &i in class {
            e[(i, i)] = Scalar::one();
        }
        if !core.contains(&e) {
            return Err(LpError::NotInSpan);
        }
        total = &total + &e;
        idempotents.push(e);
    }
    assert!(total.is_identity(), "class indicators must sum to the identity");
    Ok(SpectrumData { classes, idempotents })
}
