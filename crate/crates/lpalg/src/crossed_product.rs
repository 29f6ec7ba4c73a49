//! Reduced crossed products of finite-group actions on represented
//! L^p-operator algebras, built through the regular covariant
//! representation on `ℓ^p(G × {1..m})`.
//!
//! Implementers are restricted to Lamperti form `D·P`, so isometry of each
//! `α_g = Ad(u_g)` is structural and does not need numerical certification.
//! All norms computed here live in the single regular representation induced
//! by the defining representation of the coefficient algebra and are
//! labelled as such; algebraic statements (cores, expectations) are
//! representation-robust because that representation is faithful.

use crate::groupoid::{transformation_groupoid, GroupAction, GroupTable};
use crate::groupoid_algebra::{convolve, lambda_norm, ConvElement};
use crate::linalg::Mat;
use crate::lp_norms::{
    core_of, lamperti_structure, p_operator_norm, LpError, NormConfig, NormEstimate, PExponent,
    RepresentedAlgebra,
};
use crate::scalar::Scalar;
use std::collections::BTreeMap;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CrossedError {
    #[error(transparent)]
    Norm(#[from] LpError),
    #[error("implementer for group element {0} is not of Lamperti form: {1}")]
    NotLamperti(usize, String),
    #[error("α is not a homomorphism: {0}")]
    NotHomomorphism(String),
    #[error("α_{g} does not map the algebra onto itself (basis element {i})")]
    SpanNotInvariant { g: usize, i: usize },
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("covariance identity failed at group element {0}")]
    CovarianceFailed(usize),
    #[error("element does not lie in the crossed-product span")]
    NotInSpan,
    #[error("core theorem check failed: {0}")]
    CoreTheorem(String),
    #[error("tensor compatibility failed: {0}")]
    TensorCompat(String),
}

/// A finite group acting on a represented algebra by conjugation with
/// Lamperti isometries.
#[derive(Clone, Debug)]
pub struct IsometricAlgebraAction {
    pub group: GroupTable,
    pub algebra: RepresentedAlgebra,
    /// `u_g`, each of the form unimodular-diagonal · permutation.
    pub implementers: Vec<Mat>,
    inverses: Vec<Mat>,
}

impl IsometricAlgebraAction {
    pub fn new(
        group: GroupTable,
        algebra: RepresentedAlgebra,
        implementers: Vec<Mat>,
    ) -> Result<Self, CrossedError> {
        if implementers.len() != group.order {
            return Err(CrossedError::Shape("one implementer per group element".into()));
        }
        let m = algebra.ambient_dim;
        let mut inverses = Vec::with_capacity(group.order);
        for (g, u) in implementers.iter().enumerate() {
            if u.nrows != m || u.ncols != m {
                return Err(CrossedError::Shape(format!("implementer {g} has wrong size")));
            }
            let fact = lamperti_structure(u).map_err(|e| CrossedError::NotLamperti(g, e))?;
            // (D·P)⁻¹ = Pᵀ·D⁻¹ with D⁻¹ = conj(D) for unimodular entries.
            let mut inv = Mat::zeros(m, m);
            for (j, &i) in fact.permutation.iter().enumerate() {
                inv[(j, i)] = fact.diagonal[i].conj();
            }
            debug_assert!((&inv * u).is_identity());
            inverses.push(inv);
        }
        let action = IsometricAlgebraAction { group, algebra, implementers, inverses };
        // Each α_g maps the span onto itself.
        for g in 0..action.group.order {
            for (i, b) in action.algebra.basis.iter().enumerate() {
                if !action.algebra.contains(&action.alpha(g, b)) {
                    return Err(CrossedError::SpanNotInvariant { g, i });
                }
            }
        }
        // α is a homomorphism and α_1 acts as the identity on the span.
        for (i, b) in action.algebra.basis.iter().enumerate() {
            if action.alpha(0, b) != *b {
                return Err(CrossedError::NotHomomorphism(format!(
                    "α_1 moves basis element {i}"
                )));
            }
        }
        for g in 0..action.group.order {
            for h in 0..action.group.order {
                let gh = action.group.mul[g][h];
                for b in &action.algebra.basis {
                    if action.alpha(g, &action.alpha(h, b)) != action.alpha(gh, b) {
                        return Err(CrossedError::NotHomomorphism(format!(
                            "α_{g}∘α_{h} ≠ α_{gh}"
                        )));
                    }
                }
            }
        }
        Ok(action)
    }

    /// `α_g(x) = u_g x u_g⁻¹`.
    pub fn alpha(&self, g: usize, x: &Mat) -> Mat {
        &(&self.implementers[g] * x) * &self.inverses[g]
    }

    pub fn alpha_inv(&self, g: usize, x: &Mat) -> Mat {
        self.alpha(self.group.inverse(g), x)
    }

    /// Trivial action of `group` on `algebra`.
    pub fn trivial(group: GroupTable, algebra: RepresentedAlgebra) -> Self {
        let m = algebra.ambient_dim;
        let implementers = vec![Mat::identity(m); group.order];
        IsometricAlgebraAction::new(group, algebra, implementers)
            .expect("trivial action is always valid")
    }

    /// The induced action on `C(X) ⊆ M_{|X|}` of a space action, with the
    /// permutation matrices of `σ_g` as implementers.
    pub fn from_space_action(action: &GroupAction) -> Self {
        let algebra = RepresentedAlgebra::diagonal(action.degree);
        let implementers = (0..action.group.order)
            .map(|g| Mat::permutation(&action.perms[g]))
            .collect();
        IsometricAlgebraAction::new(action.group.clone(), algebra, implementers)
            .expect("permutation implementers give a valid action")
    }
}

// ---------------------------------------------------------------------------
// Regular covariant representation
// ---------------------------------------------------------------------------

/// The regular covariant representation on `ℓ^p(G × {1..m})`:
/// `v_g(ξ)(h, x) = ξ(g⁻¹h, x)` and `(π(a)ξ)(h) = α_h⁻¹(a)(ξ(h))`.
#[derive(Clone, Debug)]
pub struct CrossedRepresentation {
    pub action: IsometricAlgebraAction,
    pub dim: usize,
    /// Block translation matrices `v_g`.
    pub v: Vec<Mat>,
}

impl CrossedRepresentation {
    /// Extract the `m × m` block at block row `g`, block column `h`.
    pub fn block(&self, x: &Mat, g: usize, h: usize) -> Mat {
        let m = self.action.algebra.ambient_dim;
        Mat::from_fn(m, m, |i, j| x[(g * m + i, h * m + j)].clone())
    }

    /// `π(a)`: block diagonal with `α_{h⁻¹}(a)` at block `h`.
    pub fn pi(&self, a: &Mat) -> Mat {
        let m = self.action.algebra.ambient_dim;
        let order = self.action.group.order;
        let mut out = Mat::zeros(self.dim, self.dim);
        for h in 0..order {
            let blk = self.action.alpha_inv(h, a);
            for i in 0..m {
                for j in 0..m {
                    if !blk[(i, j)].is_zero() {
                        out[(h * m + i, h * m + j)] = blk[(i, j)].clone();
                    }
                }
            }
        }
        out
    }

    /// `(π⋊v)(a·u_g) = π(a)·v_g`.
    pub fn pi_v(&self, a: &Mat, g: usize) -> Mat {
        &self.pi(a) * &self.v[g]
    }

    /// The crossed-product algebra: span of `{π(B_i)·v_g}`.
    pub fn algebra(&self) -> Result<RepresentedAlgebra, LpError> {
        let mut basis = Vec::new();
        for g in 0..self.action.group.order {
            for b in &self.action.algebra.basis {
                basis.push(self.pi_v(b, g));
            }
        }
        RepresentedAlgebra::new(basis)
    }
}

/// The reduced crossed product as a represented algebra: the span of
/// `{π(B_i)·v_g}` inside the regular covariant representation induced by
/// the defining representation of the coefficients, verified closed under
/// multiplication. Norm estimates on it are certified intervals computed
/// in this single representation.
pub fn crossed_product_algebra(
    action: &IsometricAlgebraAction,
) -> Result<(CrossedRepresentation, RepresentedAlgebra), CrossedError> {
    let rep = regular_covariant_representation(action)?;
    let algebra = rep.algebra()?;
    Ok((rep, algebra))
}

/// Builds the regular covariant representation and asserts exactly:
/// `v_g v_h = v_{gh}`, the covariance rule `v_g π(a) v_{g⁻¹} = π(α_g(a))`,
/// and multiplicativity of `π⋊v` on the generating products.
pub fn regular_covariant_representation(
    action: &IsometricAlgebraAction,
) -> Result<CrossedRepresentation, CrossedError> {
    let order = action.group.order;
    let m = action.algebra.ambient_dim;
    let dim = order * m;
    let mut v = Vec::with_capacity(order);
    for g in 0..order {
        let mut vg = Mat::zeros(dim, dim);
        for h in 0..order {
            let gh = action.group.mul[g][h];
            for i in 0..m {
                vg[(gh * m + i, h * m + i)] = Scalar::one();
            }
        }
        v.push(vg);
    }
    let rep = CrossedRepresentation { action: action.clone(), dim, v };
    for g in 0..order {
        for h in 0..order {
            let gh = action.group.mul[g][h];
            if &(&rep.v[g] * &rep.v[h]) != &rep.v[gh] {
                return Err(CrossedError::NotHomomorphism(format!("v_{g}·v_{h} ≠ v_{gh}")));
            }
        }
    }
    let ginv = |g: usize| action.group.inverse(g);
    for g in 0..order {
        for b in &action.algebra.basis {
            let lhs = &(&rep.v[g] * &rep.pi(b)) * &rep.v[ginv(g)];
            let rhs = rep.pi(&action.alpha(g, b));
            if lhs != rhs {
                return Err(CrossedError::CovarianceFailed(g));
            }
        }
    }
    // Multiplicativity of π⋊v: (a u_g)(b u_h) = a·α_g(b) u_{gh}.
    for g in 0..order {
        for h in 0..order {
            let gh = action.group.mul[g][h];
            for a in action.algebra.basis.iter().take(2) {
                for b in action.algebra.basis.iter().take(2) {
                    let lhs = &rep.pi_v(a, g) * &rep.pi_v(b, h);
                    let rhs = rep.pi_v(&(a * &action.alpha(g, b)), gh);
                    if lhs != rhs {
                        return Err(CrossedError::NotHomomorphism(format!(
                            "(π⋊v) fails on products at ({g}, {h})"
                        )));
                    }
                }
            }
        }
    }
    Ok(rep)
}

// ---------------------------------------------------------------------------
// Crossed elements and the conditional expectation
// ---------------------------------------------------------------------------

/// A formal sum `Σ_g a_g u_g` with coefficients in the coefficient algebra.
#[derive(Clone, Debug, PartialEq)]
pub struct CrossedElement {
    /// `g ↦ a_g` as matrices in the coefficient algebra.
    pub coeffs: BTreeMap<usize, Mat>,
}

impl CrossedElement {
    pub fn to_matrix(&self, rep: &CrossedRepresentation) -> Mat {
        let mut out = Mat::zeros(rep.dim, rep.dim);
        for (&g, a) in &self.coeffs {
            out = &out + &rep.pi_v(a, g);
        }
        out
    }

    /// Exact coefficient extraction: block `(g, 1)` of `Σ π(a_g)v_g` equals
    /// `α_{g⁻¹}(a_g)`, so `a_g = α_g(block(x, g, 1))`.
    pub fn from_matrix(rep: &CrossedRepresentation, x: &Mat) -> Result<Self, CrossedError> {
        if x.nrows != rep.dim || x.ncols != rep.dim {
            return Err(CrossedError::Shape("wrong dimension for this representation".into()));
        }
        let mut coeffs = BTreeMap::new();
        for g in 0..rep.action.group.order {
            let blk = rep.block(x, g, 0);
            if !blk.is_zero() {
                let a = rep.action.alpha(g, &blk);
                if !rep.action.algebra.contains(&a) {
                    return Err(CrossedError::NotInSpan);
                }
                coeffs.insert(g, a);
            }
        }
        let e = CrossedElement { coeffs };
        if &e.to_matrix(rep) != x {
            return Err(CrossedError::NotInSpan);
        }
        Ok(e)
    }
}

/// The compression `F(x)(ξ) = (x(δ_1 ⊗ ξ))(1)`: the `(1, 1)` block. For
/// elements of the crossed product this realizes `π_0∘E` with
/// `E(Σ a_g u_g) = a_1`, which is checked exactly.
pub fn crossed_conditional_expectation(
    rep: &CrossedRepresentation,
    x: &Mat,
) -> Result<Mat, CrossedError> {
    let e = CrossedElement::from_matrix(rep, x)?;
    let f = rep.block(x, 0, 0);
    let a1 = e.coeffs.get(&0).cloned().unwrap_or_else(|| {
        Mat::zeros(rep.action.algebra.ambient_dim, rep.action.algebra.ambient_dim)
    });
    if f != a1 {
        return Err(CrossedError::CoreTheorem(
            "F∘(π⋊v) must equal π_0∘E on the crossed product".into(),
        ));
    }
    Ok(a1)
}

// ---------------------------------------------------------------------------
// The core theorem for crossed products
// ---------------------------------------------------------------------------

/// Report of the crossed-product core computation.
#[derive(Debug)]
pub struct CoreTheoremReport {
    pub crossed_dim: usize,
    pub core_dim: usize,
    pub coefficient_core_dim: usize,
    /// The canonical embedding identifies the two cores.
    pub cores_identified: bool,
    /// `E(x·u_g) = 0` for all core basis elements `x` and `g ≠ 1`.
    pub expectation_kills_twisted_core: bool,
}

/// Verifies `core(F^p_λ(G, A, α)) = core(A)` under the canonical embedding
/// `a ↦ π(a)`, plus the vanishing `E(x u_g) = 0` for core `x` and `g ≠ 1`.
pub fn verify_core_theorem(
    action: &IsometricAlgebraAction,
    p: &PExponent,
) -> Result<CoreTheoremReport, CrossedError> {
    p.require_not_two("the commutative core of a reduced crossed product")?;
    let rep = regular_covariant_representation(action)?;
    let crossed = rep.algebra()?;
    let core_crossed = core_of(&crossed, p)?;
    let core_a = core_of(&action.algebra, p)?;
    let embedded: Vec<Mat> = core_a.algebra.basis.iter().map(|c| rep.pi(c)).collect();
    let embedded_alg = RepresentedAlgebra::new(embedded)?;
    let cores_identified = embedded_alg.same_span(&core_crossed.algebra);
    if !cores_identified {
        return Err(CrossedError::CoreTheorem(
            "π(core(A)) must equal core of the crossed product".into(),
        ));
    }
    for x in &core_crossed.algebra.basis {
        for g in 1..action.group.order {
            let xg = x * &rep.v[g];
            let e = crossed_conditional_expectation(&rep, &xg)?;
            if !e.is_zero() {
                return Err(CrossedError::CoreTheorem(format!(
                    "E(x·u_{g}) ≠ 0 for a core element"
                )));
            }
        }
    }
    let expectation_kills_twisted_core = true;
    Ok(CoreTheoremReport {
        crossed_dim: crossed.dim(),
        core_dim: core_crossed.algebra.dim(),
        coefficient_core_dim: core_a.algebra.dim(),
        cores_identified,
        expectation_kills_twisted_core,
    })
}

// ---------------------------------------------------------------------------
// Comparison with the transformation groupoid
// ---------------------------------------------------------------------------

/// Report of the crossed-product ↔ transformation-groupoid comparison.
#[derive(Debug)]
pub struct GroupoidComparisonReport {
    pub dims_match: bool,
    pub products_match: bool,
    /// Pairs of λ-norm and crossed-norm certification intervals of sampled
    /// matched elements; every pair overlaps.
    pub norm_intervals: Vec<(NormEstimate, NormEstimate)>,
}

/// The crossed product of a space action agrees with the algebra of its
/// transformation groupoid: the coefficient bijection
/// `1_x·u_g ↔ δ_{(g, σ_{g⁻¹}(x))}` matches products exactly, and the norm
/// certification intervals of matched elements overlap.
pub fn compare_with_transformation_groupoid(
    space_action: &GroupAction,
    p: &PExponent,
    cfg: &NormConfig,
) -> Result<GroupoidComparisonReport, CrossedError> {
    let action = IsometricAlgebraAction::from_space_action(space_action);
    let rep = regular_covariant_representation(&action)?;
    let crossed = rep.algebra()?;
    let gpd = Arc::new(transformation_groupoid(space_action));
    let nx = space_action.degree;
    let order = space_action.group.order;
    let dims_match = crossed.dim() == gpd.n_arrows();
    if !dims_match {
        return Err(CrossedError::TensorCompat("dimension mismatch".into()));
    }
    // Basis of the crossed product: (g, x) ↦ π(1_x)v_g; its partner in
    // C_c(G ⋉ X) is δ at the arrow (g, σ_{g⁻¹}(x)).
    let crossed_basis = |g: usize, x: usize| -> Mat {
        let mut e = Mat::zeros(nx, nx);
        e[(x, x)] = Scalar::one();
        rep.pi_v(&e, g)
    };
    let arrow_of = |g: usize, x: usize| -> usize {
        let ginv = space_action.group.inverse(g);
        g * nx + space_action.apply(ginv, x)
    };
    let conv_basis =
        |g: usize, x: usize| -> ConvElement { ConvElement::delta(gpd.clone(), arrow_of(g, x)) };

    // Exact product match on all basis pairs.
    for g1 in 0..order {
        for x1 in 0..nx {
            for g2 in 0..order {
                for x2 in 0..nx {
                    let lhs = &crossed_basis(g1, x1) * &crossed_basis(g2, x2);
                    let rhs = convolve(&conv_basis(g1, x1), &conv_basis(g2, x2))
                        .map_err(|e| CrossedError::TensorCompat(e.to_string()))?;
                    // Transport rhs through the bijection and compare.
                    let mut rhs_mat = Mat::zeros(rep.dim, rep.dim);
                    for (&arrow, c) in rhs.support() {
                        let (g, y) = (arrow / nx, arrow % nx);
                        let x = space_action.apply(g, y);
                        rhs_mat = &rhs_mat + &crossed_basis(g, x).scale(c);
                    }
                    if lhs != rhs_mat {
                        return Err(CrossedError::TensorCompat(format!(
                            "products differ at basis pair ({g1},{x1})·({g2},{x2})"
                        )));
                    }
                }
            }
        }
    }

    let products_match = true;
    // Norm certification intervals of matched elements overlap.
    let mut norm_intervals = Vec::new();
    let samples: Vec<Vec<(usize, usize, Scalar)>> = vec![
        (0..order).map(|g| (g, 0usize, Scalar::from_int(1 + g as i64))).collect(),
        (0..nx).map(|x| (0usize, x, Scalar::from_parts(1, 2, 1, 3))).collect(),
        vec![(order - 1, nx - 1, Scalar::from_int(-2)), (0, 0, Scalar::i())],
    ];
    for sample in samples {
        let mut cm = Mat::zeros(rep.dim, rep.dim);
        let mut ce = ConvElement::zero(gpd.clone());
        for (g, x, c) in sample {
            cm = &cm + &crossed_basis(g, x).scale(&c);
            ce = ce
                .add(&conv_basis(g, x).scale(&c))
                .map_err(|e| CrossedError::TensorCompat(e.to_string()))?;
        }
        let crossed_norm = p_operator_norm(&cm, p, cfg)?;
        let gpd_norm =
            lambda_norm(&ce, p, cfg).map_err(|e| CrossedError::TensorCompat(e.to_string()))?;
        let overlap =
            crossed_norm.lower <= gpd_norm.upper + 1e-9 && gpd_norm.lower <= crossed_norm.upper + 1e-9;
        if !overlap {
            return Err(CrossedError::TensorCompat(format!(
                "norm intervals do not overlap: [{}, {}] vs [{}, {}]",
                crossed_norm.lower, crossed_norm.upper, gpd_norm.lower, gpd_norm.upper
            )));
        }
        norm_intervals.push((crossed_norm, gpd_norm));
    }
    Ok(GroupoidComparisonReport { dims_match, products_match, norm_intervals })
}

// ---------------------------------------------------------------------------
// Tensor-product compatibility
// ---------------------------------------------------------------------------

#[derive(Debug)]
pub struct TensorCompatReport {
    pub left_dim: usize,
    pub right_dim: usize,
    pub product_dim: usize,
    /// The basis bijection `(a u_g) ⊗ (b v_h) ↦ (a ⊗ b) w_{(g,h)}` matches
    /// all basis products exactly. Norm equality is not asserted.
    pub multiplicative: bool,
}

/// Checks that the tensor product of two crossed products is, as an
/// algebra, the crossed product of the product action, via the canonical
/// coefficient bijection on basis products. The `p`-tensor-norm equality is
/// deliberately left untested.
pub fn verify_tensor_compatibility(
    left: &IsometricAlgebraAction,
    right: &IsometricAlgebraAction,
) -> Result<TensorCompatReport, CrossedError> {
    let lrep = regular_covariant_representation(left)?;
    let rrep = regular_covariant_representation(right)?;
    let product_group = GroupTable::product(&left.group, &right.group);
    let tensor_basis: Vec<Mat> = {
        let mut v = Vec::new();
        for a in &left.algebra.basis {
            for b in &right.algebra.basis {
                v.push(a.kron(b));
            }
        }
        v
    };
    let tensor_algebra = RepresentedAlgebra::new(tensor_basis)?;
    let implementers: Vec<Mat> = {
        let mut v = Vec::new();
        for ug in &left.implementers {
            for vh in &right.implementers {
                v.push(ug.kron(vh));
            }
        }
        v
    };
    let product_action =
        IsometricAlgebraAction::new(product_group, tensor_algebra, implementers)?;
    let prep = regular_covariant_representation(&product_action)?;
    let product_algebra = prep.algebra()?;

    // Index bookkeeping. Left crossed basis: (g, i); right: (h, j); tensor
    // of the two crossed products: ((g, i), (h, j)) ordered lexicographically
    // as kron does; product crossed basis: ((g, h), (i, j)).
    let (lg, li) = (left.group.order, left.algebra.dim());
    let (rg, ri) = (right.group.order, right.algebra.dim());
    let tensor_of = |g: usize, i: usize, h: usize, j: usize| -> Mat {
        lrep.pi_v(&left.algebra.basis[i], g).kron(&rrep.pi_v(&right.algebra.basis[j], h))
    };
    let image_of = |g: usize, i: usize, h: usize, j: usize| -> Mat {
        let ab = left.algebra.basis[i].kron(&right.algebra.basis[j]);
        prep.pi_v(&ab, g * rg + h)
    };
    // The tensor of the crossed products, represented on the kron space.
    let big_basis: Vec<Mat> = {
        let mut v = Vec::new();
        for g in 0..lg {
            for i in 0..li {
                for h in 0..rg {
                    for j in 0..ri {
                        v.push(tensor_of(g, i, h, j));
                    }
                }
            }
        }
        v
    };
    let big = RepresentedAlgebra::new(big_basis)?;
    let flat = |g: usize, i: usize, h: usize, j: usize| ((g * li + i) * rg + h) * ri + j;

    // Multiplicativity on all basis products: expand both sides in their
    // own bases and compare coefficients through the index bijection.
    for g1 in 0..lg {
        for i1 in 0..li {
            for h1 in 0..rg {
                for j1 in 0..ri {
                    for g2 in 0..lg {
                        for i2 in 0..li {
                            for h2 in 0..rg {
                                for j2 in 0..ri {
                                    let lhs = &tensor_of(g1, i1, h1, j1) * &tensor_of(g2, i2, h2, j2);
                                    let lhs_coords =
                                        big.coordinates(&lhs).ok_or(CrossedError::NotInSpan)?;
                                    let rhs = &image_of(g1, i1, h1, j1) * &image_of(g2, i2, h2, j2);
                                    let rhs_coords = product_algebra
                                        .coordinates(&rhs)
                                        .ok_or(CrossedError::NotInSpan)?;
                                    for g in 0..lg {
                                        for i in 0..li {
                                            for h in 0..rg {
                                                for j in 0..ri {
                                                    let lc = &lhs_coords[flat(g, i, h, j)];
                                                    // Product basis order: ((g,h), (i,j)).
                                                    let rc = &rhs_coords
                                                        [(g * rg + h) * (li * ri) + i * ri + j];
                                                    if lc != rc {
                                                        return Err(CrossedError::TensorCompat(
                                                            format!(
                                                            "coefficient mismatch at ({g},{i},{h},{j})"
                                                        ),
                                                        ));
                                                    }
                                                }
                                            }
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(TensorCompatReport {
        left_dim: lg * li,
        right_dim: rg * ri,
        product_dim: product_algebra.dim(),
        multiplicative: true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(n: i64) -> Scalar {
        Scalar::from_int(n)
    }

    fn p3() -> PExponent {
        PExponent::from_int(3)
    }

    fn z2_swap_on_m2() -> IsometricAlgebraAction {
        let group = GroupTable::cyclic(2);
        let algebra = RepresentedAlgebra::full_matrix(2);
        let swap = Mat::permutation(&[1, 0]);
        IsometricAlgebraAction::new(group, algebra, vec![Mat::identity(2), swap]).unwrap()
    }

    #[test]
    fn trivial_group_representation_is_the_algebra() {
        let action =
            IsometricAlgebraAction::trivial(GroupTable::cyclic(1), RepresentedAlgebra::full_matrix(2));
        let rep = regular_covariant_representation(&action).unwrap();
        assert_eq!(rep.dim, 2);
        for b in &action.algebra.basis {
            assert_eq!(rep.pi(b), *b);
        }
        let crossed = rep.algebra().unwrap();
        assert_eq!(crossed.dim(), 4);
    }

    #[test]
    fn z2_on_m2_has_dimension_eight() {
        let action = z2_swap_on_m2();
        let rep = regular_covariant_representation(&action).unwrap();
        assert_eq!(rep.dim, 4);
        // v_g is a block permutation.
        assert!(lamperti_structure(&rep.v[1]).is_ok());
        let crossed = rep.algebra().unwrap();
        assert_eq!(crossed.dim(), 8);
    }

    #[test]
    fn group_algebra_degeneration() {
        // G = Z_2 acting trivially on C·1: the left regular representation.
        let action =
            IsometricAlgebraAction::trivial(GroupTable::cyclic(2), RepresentedAlgebra::scalars(1));
        let rep = regular_covariant_representation(&action).unwrap();
        assert_eq!(rep.dim, 2);
        assert_eq!(rep.v[1], Mat::permutation(&[1, 0]));
        let crossed = rep.algebra().unwrap();
        assert_eq!(crossed.dim(), 2);
    }

    #[test]
    fn conditional_expectation_extracts_identity_coefficient() {
        let action = z2_swap_on_m2();
        let rep = regular_covariant_representation(&action).unwrap();
        let a = Mat::from_rows(vec![vec![s(1), s(2)], vec![s(3), s(4)]]);
        let b = Mat::from_rows(vec![vec![s(0), Scalar::i()], vec![s(-1), s(5)]]);
        let x = &rep.pi_v(&a, 0) + &rep.pi_v(&b, 1);
        // E(π(a)) = a; E(v_g) = 0 for g ≠ 1; E(Σ a_g u_g) = a_1.
        assert_eq!(crossed_conditional_expectation(&rep, &x).unwrap(), a);
        assert_eq!(crossed_conditional_expectation(&rep, &rep.pi(&a)).unwrap(), a);
        assert!(crossed_conditional_expectation(&rep, &rep.v[1]).unwrap().is_zero());
        // Faithfulness on the catalog via coefficient extraction.
        let e = CrossedElement::from_matrix(&rep, &x).unwrap();
        assert_eq!(e.coeffs[&0], a);
        assert_eq!(e.coeffs[&1], b);
        // Bimodule identity over the coefficient algebra:
        // E(π(b₁)·x·π(b₂)) = b₁·E(x)·b₂.
        let b1 = Mat::from_rows(vec![vec![s(2), s(0)], vec![s(1), s(1)]]);
        let b2 = Mat::from_rows(vec![vec![s(0), s(1)], vec![s(4), s(-2)]]);
        let lhs =
            crossed_conditional_expectation(&rep, &(&(&rep.pi(&b1) * &x) * &rep.pi(&b2))).unwrap();
        let rhs = &(&b1 * &a) * &b2;
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn core_theorem_for_trivial_and_swap_actions() {
        // Z_2 trivial on M_2: both cores are the diagonal.
        let trivial =
            IsometricAlgebraAction::trivial(GroupTable::cyclic(2), RepresentedAlgebra::full_matrix(2));
        let report = verify_core_theorem(&trivial, &p3()).unwrap();
        assert_eq!(report.core_dim, 2);
        assert!(report.cores_identified && report.expectation_kills_twisted_core);
        // Z_2 by Ad(swap) on M_2.
        let report = verify_core_theorem(&z2_swap_on_m2(), &p3()).unwrap();
        assert_eq!(report.core_dim, 2);
        // Z_2 group algebra: core = scalars.
        let group_alg =
            IsometricAlgebraAction::trivial(GroupTable::cyclic(2), RepresentedAlgebra::scalars(1));
        let report = verify_core_theorem(&group_alg, &p3()).unwrap();
        assert_eq!(report.core_dim, 1);
        // Z_2 on C(2 points) by swap: core = C(2 points).
        let swap_space = IsometricAlgebraAction::from_space_action(&GroupAction::rotation(2));
        let report = verify_core_theorem(&swap_space, &p3()).unwrap();
        assert_eq!(report.core_dim, 2);
        // p = 2 is rejected.
        assert!(verify_core_theorem(&z2_swap_on_m2(), &PExponent::from_int(2)).is_err());
    }

    #[test]
    fn expectation_rejects_elements_outside_the_span() {
        let action = z2_swap_on_m2();
        let rep = regular_covariant_representation(&action).unwrap();
        // A matrix whose (g, 1) block lies in the algebra but whose full
        // shape is not a crossed element.
        let mut x = Mat::zeros(rep.dim, rep.dim);
        x[(0, 3)] = Scalar::one();
        x[(1, 0)] = Scalar::i();
        assert!(matches!(
            crossed_conditional_expectation(&rep, &x),
            Err(CrossedError::NotInSpan)
        ));
    }

    #[test]
    fn crossed_product_matches_transformation_groupoid() {
        for action in [GroupAction::rotation(2), GroupAction::rotation(3)] {
            let report =
                compare_with_transformation_groupoid(&action, &p3(), &NormConfig::default())
                    .unwrap();
            assert!(report.dims_match && report.products_match);
            assert!(!report.norm_intervals.is_empty());
        }
    }

    #[test]
    fn tensor_compatibility_on_small_catalog_actions() {
        let left = IsometricAlgebraAction::from_space_action(&GroupAction::rotation(2));
        let right =
            IsometricAlgebraAction::trivial(GroupTable::cyclic(2), RepresentedAlgebra::scalars(1));
        let report = verify_tensor_compatibility(&left, &right).unwrap();
        assert!(report.multiplicative);
        assert_eq!(report.product_dim, report.left_dim * report.right_dim);
    }

    #[test]
    fn invalid_implementers_are_rejected() {
        let group = GroupTable::cyclic(2);
        let algebra = RepresentedAlgebra::full_matrix(2);
        // Not Lamperti: a dense matrix.
        let dense = Mat::from_rows(vec![vec![s(1), s(1)], vec![s(0), s(1)]]);
        assert!(matches!(
            IsometricAlgebraAction::new(group.clone(), algebra.clone(), vec![Mat::identity(2), dense]),
            Err(CrossedError::NotLamperti(..))
        ));
        // Lamperti but not an involution up to conjugation: α_g·α_g ≠ α_1.
        let quarter = Mat::diagonal(&[Scalar::i(), Scalar::one()]);
        let err = IsometricAlgebraAction::new(
            GroupTable::cyclic(2),
            RepresentedAlgebra::upper_triangular(2),
            vec![Mat::identity(2), quarter],
        );
        assert!(matches!(err, Err(CrossedError::NotHomomorphism(_))), "{err:?}");
    }
}
