//! The Leavitt algebra `L_n`: exact symbolic arithmetic in the universal
//! unital algebra on `s_1..s_n, t_1..t_n` with `t_j s_k = δ_{jk}` and
//! `Σ_j s_j t_j = 1`, together with matrices over `L_n` and the generator
//! identities connecting `M_2 ⊗ L_n` to a two-generator covariant
//! presentation.
//!
//! Normal form basis: monomials `s_μ t_ν` where not both `μ` and `ν` end in
//! the last letter `n`. Two rewrite rules reach it: `t_j s_k → δ_{jk}`
//! (built into monomial multiplication) and
//! `s_{μn} t_{νn} → s_μ t_ν − Σ_{j<n} s_{μj} t_{νj}`.

use crate::linalg::{Mat, Subspace};
use crate::scalar::Scalar;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LeavittError {
    #[error("mixed generator index {0} exceeds n = {1}")]
    BadIndex(u8, u8),
    #[error("elements of L_{0} and L_{1} cannot be combined")]
    RankMismatch(u8, u8),
    #[error("matrix shape mismatch: {0}")]
    Shape(String),
}

/// The monomial `s_μ t_ν` (empty words give the unit).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LeavittWord {
    pub mu: Vec<u8>,
    pub nu: Vec<u8>,
}

impl LeavittWord {
    pub fn unit() -> Self {
        LeavittWord { mu: vec![], nu: vec![] }
    }

    pub fn degree(&self) -> usize {
        self.mu.len() + self.nu.len()
    }

    /// Normal form requires that not both words end in the top letter.
    pub fn is_normal(&self, n: u8) -> bool {
        !(self.mu.last() == Some(&n) && self.nu.last() == Some(&n))
    }
}

impl fmt::Debug for LeavittWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.mu.is_empty() && self.nu.is_empty() {
            return write!(f, "1");
        }
        for &j in &self.mu {
            write!(f, "s{j}")?;
        }
        for &j in self.nu.iter().rev() {
            write!(f, "t{j}")?;
        }
        Ok(())
    }
}

/// An exact linear combination of normal-form monomials in `L_n`.
#[derive(Clone, PartialEq, Eq)]
pub struct LeavittElement {
    n: u8,
    terms: BTreeMap<LeavittWord, Scalar>,
}

impl fmt::Debug for LeavittElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(w, c)| if c.is_one() { format!("{w:?}") } else { format!("({c})·{w:?}") })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Display for LeavittElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl LeavittElement {
    pub fn zero(n: u8) -> Self {
        LeavittElement { n, terms: BTreeMap::new() }
    }

    pub fn one(n: u8) -> Self {
        LeavittElement { n, terms: BTreeMap::from([(LeavittWord::unit(), Scalar::one())]) }
    }

    /// Generator `s_j`, `1 ≤ j ≤ n`.
    pub fn s(n: u8, j: u8) -> Self {
        assert!(1 <= j && j <= n, "generator index out of range");
        LeavittElement {
            n,
            terms: BTreeMap::from([(LeavittWord { mu: vec![j], nu: vec![] }, Scalar::one())]),
        }
    }

    /// Generator `t_j`, `1 ≤ j ≤ n`.
    pub fn t(n: u8, j: u8) -> Self {
        assert!(1 <= j && j <= n, "generator index out of range");
        LeavittElement {
            n,
            terms: BTreeMap::from([(LeavittWord { mu: vec![], nu: vec![j] }, Scalar::one())]),
        }
    }

    /// Builds an element from raw (possibly non-normal) monomials and
    /// reduces to normal form.
    pub fn from_terms(n: u8, terms: impl IntoIterator<Item = (LeavittWord, Scalar)>) -> Self {
        let raw: Vec<(LeavittWord, Scalar)> = terms.into_iter().collect();
        normal_form(n, &raw, None)
    }

    pub fn rank(&self) -> u8 {
        self.n
    }

    pub fn terms(&self) -> impl Iterator<Item = (&LeavittWord, &Scalar)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .get(&LeavittWord::unit())
                .is_some_and(Scalar::is_one)
    }

    pub fn max_degree(&self) -> usize {
        self.terms.keys().map(LeavittWord::degree).max().unwrap_or(0)
    }

    fn check_rank(&self, rhs: &LeavittElement) -> Result<(), LeavittError> {
        if self.n != rhs.n {
            return Err(LeavittError::RankMismatch(self.n, rhs.n));
        }
        Ok(())
    }

    pub fn add(&self, rhs: &LeavittElement) -> Result<LeavittElement, LeavittError> {
        self.check_rank(rhs)?;
        let mut terms = self.terms.clone();
        for (w, c) in &rhs.terms {
            let entry = terms.entry(w.clone()).or_insert_with(Scalar::zero);
            *entry += c;
            if entry.is_zero() {
                terms.remove(w);
            }
        }
        Ok(LeavittElement { n: self.n, terms })
    }

    pub fn sub(&self, rhs: &LeavittElement) -> Result<LeavittElement, LeavittError> {
        self.add(&rhs.scale(&-&Scalar::one()))
    }

    pub fn scale(&self, c: &Scalar) -> LeavittElement {
        if c.is_zero() {
            return LeavittElement::zero(self.n);
        }
        LeavittElement {
            n: self.n,
            terms: self.terms.iter().map(|(w, x)| (w.clone(), x * c)).collect(),
        }
    }

    /// Bilinear product: concatenate monomials through `t_j s_k = δ_{jk}`
    /// prefix cancellation, then reduce to normal form.
    pub fn mul(&self, rhs: &LeavittElement) -> Result<LeavittElement, LeavittError> {
        self.check_rank(rhs)?;
        let mut raw: Vec<(LeavittWord, Scalar)> = Vec::new();
        for (w1, c1) in &self.terms {
            for (w2, c2) in &rhs.terms {
                if let Some(w) = concat_monomials(w1, w2) {
                    raw.push((w, c1 * c2));
                }
            }
        }
        Ok(normal_form(self.n, &raw, None))
    }
}

/// `(s_μ t_ν)(s_κ t_λ)` collapses through prefix cancellation of `ν`
/// against `κ`; `None` means the product is zero.
fn concat_monomials(left: &LeavittWord, right: &LeavittWord) -> Option<LeavittWord> {
    let nu = &left.nu;
    let kappa = &right.mu;
    let common = nu.iter().zip(kappa.iter()).take_while(|(a, b)| a == b).count();
    if common < nu.len() && common < kappa.len() {
        return None; // mismatching letters annihilate
    }
    if common == nu.len() {
        // κ = ν ++ ρ: result s_{μ++ρ} t_λ.
        let mut mu = left.mu.clone();
        mu.extend_from_slice(&kappa[common..]);
        Some(LeavittWord { mu, nu: right.nu.clone() })
    } else {
        // ν = κ ++ ρ: result s_μ t_{λ++ρ}.
        let mut nu_out = right.nu.clone();
        nu_out.extend_from_slice(&nu[common..]);
        Some(LeavittWord { mu: left.mu.clone(), nu: nu_out })
    }
}

/// Reduces a raw linear combination to the normal-form basis by applying
/// `s_{μn} t_{νn} → s_μ t_ν − Σ_{j<n} s_{μj} t_{νj}` to a fixpoint.
///
/// The reduction order is irrelevant to the result (confluence); passing a
/// seed picks a randomized order, which the test suite uses to validate
/// exactly that.
pub fn normal_form(
    n: u8,
    raw: &[(LeavittWord, Scalar)],
    seed: Option<u64>,
) -> LeavittElement {
    let mut rng = seed.map(ChaCha8Rng::seed_from_u64);
    let mut terms: BTreeMap<LeavittWord, Scalar> = BTreeMap::new();
    for (w, c) in raw {
        let entry = terms.entry(w.clone()).or_insert_with(Scalar::zero);
        *entry += c;
    }
    terms.retain(|_, c| !c.is_zero());
    loop {
        let reducible: Vec<LeavittWord> =
            terms.keys().filter(|w| !w.is_normal(n)).cloned().collect();
        if reducible.is_empty() {
            break;
        }
        let word = match rng.as_mut() {
            Some(rng) => reducible.choose(rng).unwrap().clone(),
            None => reducible[0].clone(),
        };
        let coeff = terms.remove(&word).expect("picked an existing term");
        // Strip the trailing top letters.
        let mut mu = word.mu.clone();
        let mut nu = word.nu.clone();
        mu.pop();
        nu.pop();
        fn add(terms: &mut BTreeMap<LeavittWord, Scalar>, w: LeavittWord, c: &Scalar) {
            let entry = terms.entry(w.clone()).or_insert_with(Scalar::zero);
            *entry += c;
            if entry.is_zero() {
                terms.remove(&w);
            }
        }
        add(&mut terms, LeavittWord { mu: mu.clone(), nu: nu.clone() }, &coeff);
        for j in 1..n {
            let mut muj = mu.clone();
            let mut nuj = nu.clone();
            muj.push(j);
            nuj.push(j);
            add(&mut terms, LeavittWord { mu: muj, nu: nuj }, &-&coeff);
        }
    }
    LeavittElement { n, terms }
}

// ---------------------------------------------------------------------------
// Matrices over L_n
// ---------------------------------------------------------------------------

/// A square(able) array of Leavitt elements.
#[derive(Clone, PartialEq, Eq)]
pub struct LeavittMatrix {
    pub n: u8,
    pub nrows: usize,
    pub ncols: usize,
    data: Vec<LeavittElement>,
}

impl fmt::Debug for LeavittMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[")?;
        for i in 0..self.nrows {
            let row: Vec<String> =
                (0..self.ncols).map(|j| format!("{:?}", self[(i, j)])).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl std::ops::Index<(usize, usize)> for LeavittMatrix {
    type Output = LeavittElement;
    fn index(&self, (i, j): (usize, usize)) -> &LeavittElement {
        &self.data[i * self.ncols + j]
    }
}

impl LeavittMatrix {
    pub fn zeros(n: u8, nrows: usize, ncols: usize) -> Self {
        LeavittMatrix {
            n,
            nrows,
            ncols,
            data: vec![LeavittElement::zero(n); nrows * ncols],
        }
    }

    pub fn identity(n: u8, size: usize) -> Self {
        let mut m = LeavittMatrix::zeros(n, size, size);
        for i in 0..size {
            m.set(i, i, LeavittElement::one(n));
        }
        m
    }

    pub fn from_rows(n: u8, rows: Vec<Vec<LeavittElement>>) -> Result<Self, LeavittError> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(LeavittError::Shape("ragged rows".into()));
        }
        for r in &rows {
            for e in r {
                if e.rank() != n {
                    return Err(LeavittError::RankMismatch(n, e.rank()));
                }
            }
        }
        Ok(LeavittMatrix { n, nrows, ncols, data: rows.into_iter().flatten().collect() })
    }

    pub fn set(&mut self, i: usize, j: usize, e: LeavittElement) {
        assert_eq!(e.rank(), self.n);
        self.data[i * self.ncols + j] = e;
    }

    /// `e_{rc} ⊗ x`: the elementary matrix with `x` in position `(r, c)`.
    pub fn elementary(n: u8, size: usize, r: usize, c: usize, x: LeavittElement) -> Self {
        let mut m = LeavittMatrix::zeros(n, size, size);
        m.set(r, c, x);
        m
    }

    pub fn mul(&self, rhs: &LeavittMatrix) -> Result<LeavittMatrix, LeavittError> {
        if self.n != rhs.n {
            return Err(LeavittError::RankMismatch(self.n, rhs.n));
        }
        if self.ncols != rhs.nrows {
            return Err(LeavittError::Shape(format!(
                "{}x{} times {}x{}",
                self.nrows, self.ncols, rhs.nrows, rhs.ncols
            )));
        }
        let mut out = LeavittMatrix::zeros(self.n, self.nrows, rhs.ncols);
        for i in 0..self.nrows {
            for j in 0..rhs.ncols {
                let mut acc = LeavittElement::zero(self.n);
                for k in 0..self.ncols {
                    let prod = self[(i, k)].mul(&rhs[(k, j)])?;
                    acc = acc.add(&prod)?;
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    pub fn add(&self, rhs: &LeavittMatrix) -> Result<LeavittMatrix, LeavittError> {
        if self.nrows != rhs.nrows || self.ncols != rhs.ncols {
            return Err(LeavittError::Shape("addition shape mismatch".into()));
        }
        let mut out = self.clone();
        for i in 0..self.nrows {
            for j in 0..self.ncols {
                out.set(i, j, self[(i, j)].add(&rhs[(i, j)])?);
            }
        }
        Ok(out)
    }

    pub fn sub(&self, rhs: &LeavittMatrix) -> Result<LeavittMatrix, LeavittError> {
        if self.nrows != rhs.nrows || self.ncols != rhs.ncols {
            return Err(LeavittError::Shape("subtraction shape mismatch".into()));
        }
        let mut out = self.clone();
        for i in 0..self.nrows {
            for j in 0..self.ncols {
                out.set(i, j, self[(i, j)].sub(&rhs[(i, j)])?);
            }
        }
        Ok(out)
    }

    pub fn pow(&self, k: usize) -> Result<LeavittMatrix, LeavittError> {
        assert_eq!(self.nrows, self.ncols);
        let mut out = LeavittMatrix::identity(self.n, self.nrows);
        for _ in 0..k {
            out = out.mul(self)?;
        }
        Ok(out)
    }

    pub fn is_identity(&self) -> bool {
        self.nrows == self.ncols
            && (0..self.nrows).all(|i| {
                (0..self.ncols).all(|j| {
                    if i == j {
                        self[(i, j)].is_one()
                    } else {
                        self[(i, j)].is_zero()
                    }
                })
            })
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(LeavittElement::is_zero)
    }
}

// ---------------------------------------------------------------------------
// Relation checking
// ---------------------------------------------------------------------------

/// One failed identity, with the offending difference in normal form.
#[derive(Debug, Clone)]
pub struct IdentityFailure {
    pub name: String,
    pub difference: String,
}

/// Report of a Cuntz-relation check `T_j S_k = δ_{jk}`, `Σ S_j T_j = 1`.
#[derive(Debug)]
pub struct CuntzReport {
    pub generators: usize,
    pub failures: Vec<IdentityFailure>,
}

impl CuntzReport {
    pub fn pass(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Verifies that the pair of matrix families satisfies the defining
/// relations of `L_m` (with `m` the family length) exactly.
pub fn check_cuntz_relations(
    s: &[LeavittMatrix],
    t: &[LeavittMatrix],
) -> Result<CuntzReport, LeavittError> {
    if s.len() != t.len() {
        return Err(LeavittError::Shape(format!(
            "family lengths differ: {} vs {}",
            s.len(),
            t.len()
        )));
    }
    let Some(first) = s.first() else {
        return Ok(CuntzReport { generators: 0, failures: vec![] });
    };
    let n = first.n;
    let size = first.nrows;
    let mut failures = Vec::new();
    for (j, tj) in t.iter().enumerate() {
        for (k, sk) in s.iter().enumerate() {
            let prod = tj.mul(sk)?;
            let expected = if j == k {
                LeavittMatrix::identity(n, size)
            } else {
                LeavittMatrix::zeros(n, size, size)
            };
            if prod != expected {
                let diff = prod.sub(&expected)?;
                failures.push(IdentityFailure {
                    name: format!("t_{}·s_{} = {}", j + 1, k + 1, if j == k { "1" } else { "0" }),
                    difference: format!("{diff:?}"),
                });
            }
        }
    }
    let mut sum = LeavittMatrix::zeros(n, size, size);
    for (sj, tj) in s.iter().zip(t.iter()) {
        sum = sum.add(&sj.mul(tj)?)?;
    }
    if !sum.is_identity() {
        let diff = sum.sub(&LeavittMatrix::identity(n, size))?;
        failures.push(IdentityFailure {
            name: "Σ s_j·t_j = 1".into(),
            difference: format!("{diff:?}"),
        });
    }
    Ok(CuntzReport { generators: s.len(), failures })
}

// ---------------------------------------------------------------------------
// Matrix absorption: M_2 ⊗ L_{2k} from inside L_{2k}
// ---------------------------------------------------------------------------

/// The doubled generator family inside `M_2(L_{2k})`: row/column splittings
/// of consecutive generator pairs.
pub fn absorption_generators(k: usize) -> (Vec<LeavittMatrix>, Vec<LeavittMatrix>) {
    let n = (2 * k) as u8;
    let mut xs = Vec::with_capacity(2 * k);
    let mut ys = Vec::with_capacity(2 * k);
    let s = |j: u8| LeavittElement::s(n, j);
    let t = |j: u8| LeavittElement::t(n, j);
    let zero = || LeavittElement::zero(n);
    for j in 1..=k {
        let (a, b) = ((2 * j - 1) as u8, (2 * j) as u8);
        xs.push(
            LeavittMatrix::from_rows(n, vec![vec![s(a), s(b)], vec![zero(), zero()]]).unwrap(),
        );
        xs.push(
            LeavittMatrix::from_rows(n, vec![vec![zero(), zero()], vec![s(a), s(b)]]).unwrap(),
        );
        ys.push(
            LeavittMatrix::from_rows(n, vec![vec![t(a), zero()], vec![t(b), zero()]]).unwrap(),
        );
        ys.push(
            LeavittMatrix::from_rows(n, vec![vec![zero(), t(a)], vec![zero(), t(b)]]).unwrap(),
        );
    }
    (xs, ys)
}

/// Report of the matrix-absorption verification.
#[derive(Debug)]
pub struct AbsorptionReport {
    pub k: usize,
    pub relations: CuntzReport,
    /// Generation witnesses: named identities expressing every matrix unit
    /// `e_{rc} ⊗ 1` and every `e_{11} ⊗ s_j`, `e_{11} ⊗ t_j` as words in
    /// the doubled family.
    pub witness_failures: Vec<IdentityFailure>,
}

impl AbsorptionReport {
    pub fn pass(&self) -> bool {
        self.relations.pass() && self.witness_failures.is_empty()
    }
}

/// Checks that the doubled family inside `M_2(L_{2k})` satisfies the
/// `L_{2k}` relations and generates all of `M_2 ⊗ L_{2k}`, by exhibiting
/// explicit words equal to the matrix units and to `e_{11} ⊗ s_j`,
/// `e_{11} ⊗ t_j`.
pub fn verify_matrix_absorption(k: usize) -> Result<AbsorptionReport, LeavittError> {
    assert!(k >= 2, "matrix absorption needs k ≥ 2");
    let n = (2 * k) as u8;
    let (xs, ys) = absorption_generators(k);
    let relations = check_cuntz_relations(&xs, &ys)?;
    let mut witness_failures = Vec::new();
    let mut check = |name: String, got: LeavittMatrix, want: LeavittMatrix| {
        if got != want {
            let difference = format!("{:?}", got.sub(&want).expect("shapes match"));
            witness_failures.push(IdentityFailure { name, difference });
        }
    };
    // Matrix units e_{rc} ⊗ 1 as sums of x·y words.
    let unit = |r: usize, c: usize| {
        LeavittMatrix::elementary(n, 2, r, c, LeavittElement::one(n))
    };
    let mut sums = vec![
        LeavittMatrix::zeros(n, 2, 2),
        LeavittMatrix::zeros(n, 2, 2),
        LeavittMatrix::zeros(n, 2, 2),
        LeavittMatrix::zeros(n, 2, 2),
    ];
    for j in 0..k {
        let (xo, xe) = (&xs[2 * j], &xs[2 * j + 1]);
        let (yo, ye) = (&ys[2 * j], &ys[2 * j + 1]);
        sums[0] = sums[0].add(&xo.mul(yo)?)?;
        sums[1] = sums[1].add(&xo.mul(ye)?)?;
        sums[2] = sums[2].add(&xe.mul(yo)?)?;
        sums[3] = sums[3].add(&xe.mul(ye)?)?;
    }
    check("Σ_j x_{2j-1}·y_{2j-1} = e_11⊗1".into(), sums[0].clone(), unit(0, 0));
    check("Σ_j x_{2j-1}·y_{2j} = e_12⊗1".into(), sums[1].clone(), unit(0, 1));
    check("Σ_j x_{2j}·y_{2j-1} = e_21⊗1".into(), sums[2].clone(), unit(1, 0));
    check("Σ_j x_{2j}·y_{2j} = e_22⊗1".into(), sums[3].clone(), unit(1, 1));
    let e11 = unit(0, 0);
    let e12 = unit(0, 1);
    let e21 = unit(1, 0);
    for j in 1..=k {
        let (a, b) = ((2 * j - 1) as u8, (2 * j) as u8);
        let xo = &xs[2 * (j - 1)];
        let xe = &xs[2 * (j - 1) + 1];
        let yo = &ys[2 * (j - 1)];
        check(
            format!("x_{}·(e_11⊗1) = e_11⊗s_{a}", 2 * j - 1),
            xo.mul(&e11)?,
            LeavittMatrix::elementary(n, 2, 0, 0, LeavittElement::s(n, a)),
        );
        check(
            format!("(e_12⊗1)·x_{}·(e_21⊗1) = e_11⊗s_{b}", 2 * j),
            e12.mul(xe)?.mul(&e21)?,
            LeavittMatrix::elementary(n, 2, 0, 0, LeavittElement::s(n, b)),
        );
        check(
            format!("(e_11⊗1)·y_{} = e_11⊗t_{a}", 2 * j - 1),
            e11.mul(yo)?,
            LeavittMatrix::elementary(n, 2, 0, 0, LeavittElement::t(n, a)),
        );
        check(
            format!("(e_12⊗1)·y_{} = e_11⊗t_{b}", 2 * j - 1),
            e12.mul(yo)?,
            LeavittMatrix::elementary(n, 2, 0, 0, LeavittElement::t(n, b)),
        );
    }
    Ok(AbsorptionReport { k, relations, witness_failures })
}

// ---------------------------------------------------------------------------
// The covariant two-generator presentation of M_2 ⊗ L_n
// ---------------------------------------------------------------------------

/// The images of the order-two generator, the order-(n+1) generator, and
/// the splitting idempotent inside `M_2(L_n)`.
pub fn covariant_images(n: u8) -> (LeavittMatrix, LeavittMatrix, LeavittMatrix) {
    let one = LeavittElement::one(n);
    let zero = LeavittElement::zero(n);
    let a = LeavittMatrix::from_rows(n, vec![
        vec![zero.clone(), one.clone()],
        vec![one.clone(), zero.clone()],
    ])
    .unwrap();
    // Lower-right entry: Σ_{j=1}^{n-1} s_{j+1} t_j.
    let mut shift = LeavittElement::zero(n);
    for j in 1..n {
        shift = shift
            .add(&LeavittElement::s(n, j + 1).mul(&LeavittElement::t(n, j)).unwrap())
            .unwrap();
    }
    let b = LeavittMatrix::from_rows(n, vec![
        vec![zero.clone(), LeavittElement::t(n, n)],
        vec![LeavittElement::s(n, 1), shift],
    ])
    .unwrap();
    let f = LeavittMatrix::from_rows(n, vec![
        vec![one, zero.clone()],
        vec![zero.clone(), zero],
    ])
    .unwrap();
    (a, b, f)
}

/// One named check of the covariant presentation.
#[derive(Debug, Clone)]
pub struct CovariantCheck {
    pub name: String,
    pub pass: bool,
    /// Normal-form difference when the identity fails.
    pub difference: Option<String>,
}

#[derive(Debug)]
pub struct CovariantReport {
    pub n: u8,
    pub checks: Vec<CovariantCheck>,
}

impl CovariantReport {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> Vec<&CovariantCheck> {
        self.checks.iter().filter(|c| !c.pass).collect()
    }
}

/// Verifies the two-generator covariant presentation inside `M_2(L_n)`:
/// involution and order-(n+1) identities, the idempotent splittings, and
/// that composing with the generator words `a·b^j·f`, `f·b^{-j}·a`, `a·f`,
/// `f·a` is the identity on all `2n + 2` generators of `M_2 ⊗ L_n`.
///
/// `mutate_zero` zeroes one entry of the order-(n+1) image first — a
/// negative control that must fail with the violated identity named.
pub fn verify_covariant_presentation(
    n: u8,
    mutate_zero: Option<(usize, usize)>,
) -> Result<CovariantReport, LeavittError> {
    assert!(n >= 2, "the presentation needs n ≥ 2");
    let (a, mut b, f) = covariant_images(n);
    if let Some((r, c)) = mutate_zero {
        if r >= 2 || c >= 2 {
            return Err(LeavittError::Shape(format!("mutation index ({r}, {c})")));
        }
        b.set(r, c, LeavittElement::zero(n));
    }
    let np1 = n as usize + 1;
    let mut checks = Vec::new();
    fn record(
        checks: &mut Vec<CovariantCheck>,
        name: String,
        got: &LeavittMatrix,
        want: &LeavittMatrix,
    ) {
        let pass = got == want;
        let difference = (!pass).then(|| format!("{:?}", got.sub(want).expect("shapes match")));
        checks.push(CovariantCheck { name, pass, difference });
    }

    let id = LeavittMatrix::identity(n, 2);
    record(&mut checks, "ψ(a)² = 1".into(), &a.mul(&a)?, &id);
    let b_pows: Vec<LeavittMatrix> = {
        let mut v = vec![id.clone()];
        for k in 1..=np1 {
            v.push(v[k - 1].mul(&b)?);
        }
        v
    };
    record(&mut checks, format!("ψ(b)^{np1} = 1"), &b_pows[np1], &id);
    for k in 1..=n as usize {
        let pass = b_pows[k] != id;
        checks.push(CovariantCheck {
            name: format!("ψ(b)^{k} ≠ 1 (order exactness)"),
            pass,
            difference: (!pass).then(|| "power collapsed to the identity".into()),
        });
    }
    record(&mut checks, "ψ(f)² = ψ(f)".into(), &f.mul(&f)?, &f);
    record(
        &mut checks,
        "ψ(f) + ψ(a)ψ(f)ψ(a) = 1".into(),
        &f.add(&a.mul(&f)?.mul(&a)?)?,
        &id,
    );
    {
        let mut sum = LeavittMatrix::zeros(n, 2, 2);
        for k in 0..=n as usize {
            // b^{-k} = b^{n+1-k} once b^{n+1} = 1; for k = 0 use the identity.
            let left = &b_pows[k];
            let right = &b_pows[(np1 - k) % np1];
            sum = sum.add(&left.mul(&f)?.mul(right)?)?;
        }
        record(&mut checks, format!("Σ_{{k=0}}^{n} ψ(b)^k ψ(f) ψ(b)^(-k) = 1"), &sum, &id);
    }
    // ψ∘φ is the identity on the generators of M_2 ⊗ L_n.
    for j in 1..=n {
        let want = LeavittMatrix::elementary(n, 2, 0, 0, LeavittElement::s(n, j));
        let got = a.mul(&b_pows[j as usize])?.mul(&f)?;
        record(&mut checks, format!("ψ(a·b^{j}·f) = e_11⊗s_{j}"), &got, &want);
        let want = LeavittMatrix::elementary(n, 2, 0, 0, LeavittElement::t(n, j));
        let got = f.mul(&b_pows[np1 - j as usize])?.mul(&a)?;
        record(&mut checks, format!("ψ(f·b^(-{j})·a) = e_11⊗t_{j}"), &got, &want);
    }
    record(
        &mut checks,
        "ψ(a·f) = e_21⊗1".into(),
        &a.mul(&f)?,
        &LeavittMatrix::elementary(n, 2, 1, 0, LeavittElement::one(n)),
    );
    record(
        &mut checks,
        "ψ(f·a) = e_12⊗1".into(),
        &f.mul(&a)?,
        &LeavittMatrix::elementary(n, 2, 0, 1, LeavittElement::one(n)),
    );
    Ok(CovariantReport { n, checks })
}

// ---------------------------------------------------------------------------
// Truncated spatial representation on ℓ^p(words of length ≤ L)
// ---------------------------------------------------------------------------

/// The finite shift model: `s_j: e_w ↦ e_{jw}` (zero beyond depth) and
/// `t_j: e_{jw} ↦ e_w` on the span of words of length ≤ depth.
pub struct TruncatedModel {
    pub n: u8,
    pub depth: usize,
    pub words: Vec<Vec<u8>>,
    index: BTreeMap<Vec<u8>, usize>,
    pub dim: usize,
}

impl TruncatedModel {
    pub fn new(n: u8, depth: usize) -> Self {
        assert!(depth >= 1, "depth must be at least 1");
        let mut words: Vec<Vec<u8>> = vec![vec![]];
        let mut frontier: Vec<Vec<u8>> = vec![vec![]];
        for _ in 0..depth {
            let mut next = Vec::new();
            for w in &frontier {
                for j in 1..=n {
                    let mut jw = vec![j];
                    jw.extend_from_slice(w);
                    next.push(jw);
                }
            }
            words.extend(next.iter().cloned());
            frontier = next;
        }
        words.sort_by(|a, b| (a.len(), a.clone()).cmp(&(b.len(), b.clone())));
        let index = words.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect();
        let dim = words.len();
        TruncatedModel { n, depth, words, index, dim }
    }

    /// `ρ(s_j)`.
    pub fn s_matrix(&self, j: u8) -> Mat {
        let mut m = Mat::zeros(self.dim, self.dim);
        for (col, w) in self.words.iter().enumerate() {
            if w.len() < self.depth {
                let mut jw = vec![j];
                jw.extend_from_slice(w);
                m[(self.index[&jw], col)] = Scalar::one();
            }
        }
        m
    }

    /// `ρ(t_j)`.
    pub fn t_matrix(&self, j: u8) -> Mat {
        let mut m = Mat::zeros(self.dim, self.dim);
        for (col, w) in self.words.iter().enumerate() {
            if w.first() == Some(&j) {
                m[(self.index[&w[1..].to_vec()], col)] = Scalar::one();
            }
        }
        m
    }

    /// Linear extension of `s_μ t_ν ↦ ρ(s_μ)·ρ(t_ν)`.
    pub fn represent(&self, e: &LeavittElement) -> Mat {
        assert_eq!(e.rank(), self.n);
        let mut out = Mat::zeros(self.dim, self.dim);
        for (w, c) in e.terms() {
            let mut m = Mat::identity(self.dim);
            for &j in &w.mu {
                m = &m * &self.s_matrix(j);
            }
            for &j in w.nu.iter().rev() {
                m = &m * &self.t_matrix(j);
            }
            out = &out + &m.scale(c);
        }
        out
    }
}

/// Report on where the defining relations hold in the truncated model.
#[derive(Debug)]
pub struct TruncatedReport {
    pub dim: usize,
    /// `t_j s_k = δ_{jk}` holds on the span of words of length < depth.
    pub shift_relations_hold: bool,
    /// `Σ s_j t_j = 1` holds on the span of nonempty words.
    pub unit_relation_holds_off_vacuum: bool,
    /// Every `s_j` column is zero or a single unit entry.
    pub columns_are_spatial: bool,
}

/// Builds the model and checks on which subspaces the relations hold.
pub fn truncated_spatial_representation(n: u8, depth: usize) -> (TruncatedModel, TruncatedReport) {
    let model = TruncatedModel::new(n, depth);
    let mut shift_relations_hold = true;
    for j in 1..=n {
        for k in 1..=n {
            let prod = &model.t_matrix(j) * &model.s_matrix(k);
            for (col, w) in model.words.iter().enumerate() {
                if w.len() >= model.depth {
                    continue;
                }
                for row in 0..model.dim {
                    let expected = if j == k && row == col { Scalar::one() } else { Scalar::zero() };
                    if prod[(row, col)] != expected {
                        shift_relations_hold = false;
                    }
                }
            }
        }
    }
    let mut sum = Mat::zeros(model.dim, model.dim);
    for j in 1..=n {
        sum = &sum + &(&model.s_matrix(j) * &model.t_matrix(j));
    }
    let mut unit_relation_holds_off_vacuum = true;
    for (col, w) in model.words.iter().enumerate() {
        if w.is_empty() {
            continue;
        }
        for row in 0..model.dim {
            let expected = if row == col { Scalar::one() } else { Scalar::zero() };
            if sum[(row, col)] != expected {
                unit_relation_holds_off_vacuum = false;
            }
        }
    }
    let mut columns_are_spatial = true;
    for j in 1..=n {
        let s = model.s_matrix(j);
        for col in 0..model.dim {
            let nonzero: Vec<usize> = (0..model.dim).filter(|&r| !s[(r, col)].is_zero()).collect();
            if nonzero.len() > 1 || nonzero.iter().any(|&r| !s[(r, col)].is_one()) {
                columns_are_spatial = false;
            }
        }
    }
    let report = TruncatedReport {
        dim: model.dim,
        shift_relations_hold,
        unit_relation_holds_off_vacuum,
        columns_are_spatial,
    };
    (model, report)
}

/// All normal-form monomials of total degree ≤ d.
pub fn monomials_up_to_degree(n: u8, d: usize) -> Vec<LeavittWord> {
    fn words(n: u8, len: usize) -> Vec<Vec<u8>> {
        if len == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for w in words(n, len - 1) {
            for j in 1..=n {
                let mut v = w.clone();
                v.push(j);
                out.push(v);
            }
        }
        out
    }
    let mut out = Vec::new();
    for total in 0..=d {
        for mu_len in 0..=total {
            let nu_len = total - mu_len;
            for mu in words(n, mu_len) {
                for nu in words(n, nu_len) {
                    let w = LeavittWord { mu: mu.clone(), nu: nu.clone() };
                    if w.is_normal(n) {
                        out.push(w);
                    }
                }
            }
        }
    }
    out
}

/// Rank check: normal-form monomials of degree ≤ d stay linearly
/// independent in the truncated model whenever depth > 2d. This is the
/// model-based validation of the normal-form basis.
pub fn model_independence_check(n: u8, d: usize, depth: usize) -> bool {
    assert!(depth > 2 * d, "independence needs depth > 2·degree");
    let model = TruncatedModel::new(n, depth);
    let monomials = monomials_up_to_degree(n, d);
    let vectors: Vec<Vec<Scalar>> = monomials
        .iter()
        .map(|w| {
            model
                .represent(&LeavittElement::from_terms(n, [(w.clone(), Scalar::one())]))
                .vectorize()
        })
        .collect();
    let span = Subspace::span(&vectors, model.dim * model.dim);
    span.dim() == monomials.len()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(n: u8, j: u8) -> LeavittElement {
        LeavittElement::s(n, j)
    }

    fn t(n: u8, j: u8) -> LeavittElement {
        LeavittElement::t(n, j)
    }

    #[test]
    fn defining_relations() {
        // t_1 s_1 = 1.
        assert!(t(2, 1).mul(&s(2, 1)).unwrap().is_one());
        // t_1 s_2 = 0.
        assert!(t(2, 1).mul(&s(2, 2)).unwrap().is_zero());
        // Σ_j s_j t_j = 1.
        let sum = s(2, 1)
            .mul(&t(2, 1))
            .unwrap()
            .add(&s(2, 2).mul(&t(2, 2)).unwrap())
            .unwrap();
        assert!(sum.is_one());
    }

    #[test]
    fn single_rewrite_step() {
        // s_2 t_2 = 1 − s_1 t_1 in L_2.
        let e = s(2, 2).mul(&t(2, 2)).unwrap();
        let expected = LeavittElement::one(2)
            .sub(&s(2, 1).mul(&t(2, 1)).unwrap())
            .unwrap();
        assert_eq!(e, expected);
    }

    #[test]
    fn unit_and_relation_examples() {
        // 1·e = e.
        let e = s(3, 2).mul(&t(3, 1)).unwrap();
        assert_eq!(LeavittElement::one(3).mul(&e).unwrap(), e);
        // s_1·t_1·s_1 = s_1.
        let x = s(2, 1).mul(&t(2, 1)).unwrap().mul(&s(2, 1)).unwrap();
        assert_eq!(x, s(2, 1));
        // (s_1 t_2)(s_2 t_1) = s_1 t_1.
        let lhs = s(2, 1)
            .mul(&t(2, 2))
            .unwrap()
            .mul(&s(2, 2).mul(&t(2, 1)).unwrap())
            .unwrap();
        assert_eq!(lhs, s(2, 1).mul(&t(2, 1)).unwrap());
    }

    #[test]
    fn rank_mismatch_is_rejected() {
        assert!(matches!(
            s(2, 1).mul(&s(3, 1)),
            Err(LeavittError::RankMismatch(2, 3))
        ));
    }

    #[test]
    fn normal_form_is_order_independent() {
        // A nested reducible element: both the outer and inner monomials
        // rewrite, in whatever order.
        let w = LeavittWord { mu: vec![2, 2], nu: vec![1, 2] };
        let raw = vec![
            (w, Scalar::from_int(3)),
            (LeavittWord { mu: vec![2], nu: vec![2] }, Scalar::from_parts(0, 1, 1, 2)),
            (LeavittWord::unit(), Scalar::from_int(-1)),
        ];
        let reference = normal_form(2, &raw, None);
        for seed in 0..20 {
            assert_eq!(normal_form(2, &raw, Some(seed)), reference);
        }
        assert!(reference.terms().all(|(w, _)| w.is_normal(2)));
    }

    #[test]
    fn matrix_absorption_passes_for_k2_and_k3() {
        for k in [2usize, 3] {
            let report = verify_matrix_absorption(k).unwrap();
            assert!(report.pass(), "k = {k}: {:?}", report.witness_failures);
        }
    }

    #[test]
    fn absorption_x1_y1_value() {
        // x_1·y_1 = e_11 ⊗ (s_1 t_1 + s_2 t_2) for k = 2.
        let (xs, ys) = absorption_generators(2);
        let prod = xs[0].mul(&ys[0]).unwrap();
        let expected = LeavittMatrix::elementary(
            4,
            2,
            0,
            0,
            s(4, 1)
                .mul(&t(4, 1))
                .unwrap()
                .add(&s(4, 2).mul(&t(4, 2)).unwrap())
                .unwrap(),
        );
        assert_eq!(prod, expected);
    }

    #[test]
    fn absorption_negative_control() {
        // Flip one sign: the relations must fail with a named identity.
        let (mut xs, ys) = absorption_generators(2);
        xs[0] = LeavittMatrix::zeros(4, 2, 2)
            .sub(&xs[0])
            .unwrap();
        let report = check_cuntz_relations(&xs, &ys).unwrap();
        assert!(!report.pass());
        assert!(report.failures.iter().any(|f| f.name.contains("t_1·s_1")));
    }

    #[test]
    fn covariant_presentation_n2() {
        let report = verify_covariant_presentation(2, None).unwrap();
        assert!(report.pass(), "{:?}", report.failures());
    }

    #[test]
    fn covariant_spot_check_n2() {
        // ψ(a)·ψ(b)·ψ(f) = e_11 ⊗ s_1 for n = 2, checked by hand.
        let (a, b, f) = covariant_images(2);
        let prod = a.mul(&b).unwrap().mul(&f).unwrap();
        assert_eq!(prod, LeavittMatrix::elementary(2, 2, 0, 0, s(2, 1)));
    }

    #[test]
    fn covariant_negative_control() {
        let report = verify_covariant_presentation(2, Some((0, 1))).unwrap();
        assert!(!report.pass());
        let failed: Vec<&str> = report.failures().iter().map(|c| c.name.as_str()).collect();
        assert!(failed.iter().any(|n| n.contains("ψ(b)^3 = 1")), "{failed:?}");
        // The failing difference is printed in normal form.
        assert!(report.failures()[0].difference.is_some());
    }

    #[test]
    fn truncated_model_small() {
        let (model, report) = truncated_spatial_representation(2, 1);
        assert_eq!(model.dim, 3);
        assert!(report.shift_relations_hold);
        assert!(report.unit_relation_holds_off_vacuum);
        assert!(report.columns_are_spatial);
    }

    #[test]
    fn truncated_model_witnesses_independence() {
        assert!(model_independence_check(2, 1, 4));
        assert!(model_independence_check(2, 2, 5));
    }

    #[test]
    fn model_agrees_with_normal_form() {
        // Equal normal forms give equal model matrices; distinct low-degree
        // normal forms stay distinct at sufficient depth.
        let model = TruncatedModel::new(2, 4);
        let lhs = s(2, 2).mul(&t(2, 2)).unwrap();
        let rhs = LeavittElement::one(2).sub(&s(2, 1).mul(&t(2, 1)).unwrap()).unwrap();
        assert_eq!(model.represent(&lhs), model.represent(&rhs));
        let distinct = s(2, 1).mul(&t(2, 1)).unwrap();
        assert_ne!(model.represent(&lhs), model.represent(&distinct));
    }
}
