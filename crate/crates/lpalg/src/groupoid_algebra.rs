//! The convolution algebra `C_c(G)` of a finite étale groupoid, its
//! regular representations `π_x` on `ℓ^p(Gx)`, the I-norm, the reduced
//! λ-norm, the coefficient map `j`, and the conditional expectation onto
//! functions on units.
//!
//! At finite scale `C_c(G)` is finite dimensional and complete, so the
//! reduced algebra is `(C_c(G), ‖·‖_λ)` with `⊕_x π_x` as its canonical
//! isometric matrix realization.

use crate::groupoid::{Arrow, FiniteGroupoid, GroupoidError};
use crate::linalg::Mat;
use crate::lp_norms::{
    core_of, p_operator_norm, CoreData, LpError, NormConfig, NormEstimate, PExponent,
    RepresentedAlgebra,
};
use crate::scalar::Scalar;
use std::collections::BTreeMap;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum AlgebraError {
    #[error(transparent)]
    Groupoid(#[from] GroupoidError),
    #[error(transparent)]
    Norm(#[from] LpError),
    #[error("elements live on different groupoids")]
    GroupoidMismatch,
    #[error("{0} is not a unit")]
    NotAUnit(Arrow),
    #[error("the computed core does not equal the span of unit indicators")]
    CoreMismatch,
}

/// A finitely supported function `arrows → ℚ(i)`; an element of `C_c(G)`.
#[derive(Clone)]
pub struct ConvElement {
    gpd: Arc<FiniteGroupoid>,
    coeffs: BTreeMap<Arrow, Scalar>,
}

impl PartialEq for ConvElement {
    fn eq(&self, other: &Self) -> bool {
        self.gpd.uid() == other.gpd.uid() && self.coeffs == other.coeffs
    }
}

impl Eq for ConvElement {}

impl std::fmt::Debug for ConvElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .map(|(&g, c)| format!("({c})δ[{}]", self.gpd.label(g)))
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

impl ConvElement {
    pub fn zero(gpd: Arc<FiniteGroupoid>) -> Self {
        ConvElement { gpd, coeffs: BTreeMap::new() }
    }

    /// The point mass `δ_γ`.
    pub fn delta(gpd: Arc<FiniteGroupoid>, gamma: Arrow) -> Self {
        assert!(gamma < gpd.n_arrows(), "arrow out of bounds");
        ConvElement { gpd, coeffs: BTreeMap::from([(gamma, Scalar::one())]) }
    }

    /// Indicator of the unit space: the multiplicative identity.
    pub fn unit_indicator(gpd: Arc<FiniteGroupoid>) -> Self {
        let coeffs = gpd.units().iter().map(|&u| (u, Scalar::one())).collect();
        ConvElement { gpd, coeffs }
    }

    pub fn from_coeffs(
        gpd: Arc<FiniteGroupoid>,
        coeffs: impl IntoIterator<Item = (Arrow, Scalar)>,
    ) -> Self {
        let coeffs: BTreeMap<Arrow, Scalar> = coeffs
            .into_iter()
            .filter(|(g, c)| {
                assert!(*g < gpd.n_arrows(), "arrow out of bounds");
                !c.is_zero()
            })
            .collect();
        ConvElement { gpd, coeffs }
    }

    pub fn groupoid(&self) -> &Arc<FiniteGroupoid> {
        &self.gpd
    }

    pub fn coeff(&self, gamma: Arrow) -> Scalar {
        self.coeffs.get(&gamma).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn support(&self) -> impl Iterator<Item = (&Arrow, &Scalar)> {
        self.coeffs.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Supported on units only?
    pub fn is_unit_supported(&self) -> bool {
        self.coeffs.keys().all(|&g| self.gpd.is_unit(g))
    }

    pub fn add(&self, rhs: &ConvElement) -> Result<ConvElement, AlgebraError> {
        self.check_same(rhs)?;
        let mut coeffs = self.coeffs.clone();
        for (&g, c) in &rhs.coeffs {
            let entry = coeffs.entry(g).or_insert_with(Scalar::zero);
            *entry += c;
            if entry.is_zero() {
                coeffs.remove(&g);
            }
        }
        Ok(ConvElement { gpd: self.gpd.clone(), coeffs })
    }

    pub fn sub(&self, rhs: &ConvElement) -> Result<ConvElement, AlgebraError> {
        self.add(&rhs.scale(&-&Scalar::one()))
    }

    pub fn scale(&self, c: &Scalar) -> ConvElement {
        if c.is_zero() {
            return ConvElement::zero(self.gpd.clone());
        }
        ConvElement {
            gpd: self.gpd.clone(),
            coeffs: self.coeffs.iter().map(|(&g, x)| (g, x * c)).collect(),
        }
    }

    /// `max |f(γ)|`.
    pub fn sup_norm(&self) -> f64 {
        self.coeffs.values().map(Scalar::abs).fold(0.0, f64::max)
    }

    fn check_same(&self, rhs: &ConvElement) -> Result<(), AlgebraError> {
        if self.gpd.uid() != rhs.gpd.uid() {
            return Err(AlgebraError::GroupoidMismatch);
        }
        Ok(())
    }
}

/// Convolution `(f∗g)(γ) = Σ_{σ ∈ G·dom(γ)} f(γσ⁻¹)·g(σ)`, computed
/// sparsely over the supports.
pub fn convolve(f: &ConvElement, g: &ConvElement) -> Result<ConvElement, AlgebraError> {
    f.check_same(g)?;
    let gpd = f.gpd.clone();
    let mut coeffs: BTreeMap<Arrow, Scalar> = BTreeMap::new();
    for (&a, ca) in &f.coeffs {
        for (&b, cb) in &g.coeffs {
            if let Some(ab) = gpd.compose(a, b) {
                let entry = coeffs.entry(ab).or_insert_with(Scalar::zero);
                let prod = ca * cb;
                *entry += &prod;
            }
        }
    }
    coeffs.retain(|_, c| !c.is_zero());
    Ok(ConvElement { gpd, coeffs })
}

/// The I-norm: max of the sup over units of incoming and outgoing
/// absolute coefficient sums.
pub fn i_norm(f: &ConvElement) -> f64 {
    let gpd = f.gpd.as_ref();
    let mut into: BTreeMap<Arrow, f64> = BTreeMap::new();
    let mut from: BTreeMap<Arrow, f64> = BTreeMap::new();
    for (&g, c) in &f.coeffs {
        *into.entry(gpd.ran(g)).or_insert(0.0) += c.abs();
        *from.entry(gpd.dom(g)).or_insert(0.0) += c.abs();
    }
    into.values().chain(from.values()).copied().fold(0.0, f64::max)
}

// ---------------------------------------------------------------------------
// Regular representations
// ---------------------------------------------------------------------------

/// The matrix of `π_x(f)` acting on `ℓ^p(Gx)` by left convolution:
/// entry `(γ, σ)` is `f(γσ⁻¹)`.
#[derive(Clone, Debug)]
pub struct RegularRep {
    pub unit: Arrow,
    /// Basis order of `Gx`.
    pub index: Vec<Arrow>,
    pub matrix: Mat,
}

pub fn regular_representation(f: &ConvElement, x: Arrow) -> Result<RegularRep, AlgebraError> {
    let gpd = f.gpd.as_ref();
    if x >= gpd.n_arrows() || !gpd.is_unit(x) {
        return Err(AlgebraError::NotAUnit(x));
    }
    let index = gpd.arrows_from(x);
    let matrix = Mat::from_fn(index.len(), index.len(), |i, j| {
        let gamma = index[i];
        let sigma = index[j];
        match gpd.compose(gamma, gpd.inverse(sigma)) {
            Some(gs) => f.coeff(gs),
            None => Scalar::zero(),
        }
    });
    Ok(RegularRep { unit: x, index, matrix })
}

/// The direct sum `⊕_x π_x` over all units: the canonical isometric matrix
/// realization of the reduced algebra.
#[derive(Clone, Debug)]
pub struct GroupoidRepresentation {
    gpd: Arc<FiniteGroupoid>,
    /// Arrows of `Gx` per unit, concatenated block by block.
    pub blocks: Vec<Vec<Arrow>>,
    pub block_offsets: Vec<usize>,
    pub dim: usize,
}

impl GroupoidRepresentation {
    pub fn new(gpd: Arc<FiniteGroupoid>) -> Self {
        let blocks: Vec<Vec<Arrow>> = gpd.units().iter().map(|&x| gpd.arrows_from(x)).collect();
        let mut block_offsets = Vec::with_capacity(blocks.len());
        let mut dim = 0;
        for b in &blocks {
            block_offsets.push(dim);
            dim += b.len();
        }
        GroupoidRepresentation { gpd, blocks, block_offsets, dim }
    }

    pub fn groupoid(&self) -> &Arc<FiniteGroupoid> {
        &self.gpd
    }

    /// Block-diagonal matrix of `⊕_x π_x(f)`.
    pub fn represent(&self, f: &ConvElement) -> Mat {
        assert_eq!(f.gpd.uid(), self.gpd.uid(), "representation of a foreign element");
        let mut m = Mat::zeros(self.dim, self.dim);
        let gpd = self.gpd.as_ref();
        for (block, &offset) in self.blocks.iter().zip(&self.block_offsets) {
            for (i, &gamma) in block.iter().enumerate() {
                for (j, &sigma) in block.iter().enumerate() {
                    if let Some(gs) = gpd.compose(gamma, gpd.inverse(sigma)) {
                        let c = f.coeff(gs);
                        if !c.is_zero() {
                            m[(offset + i, offset + j)] = c;
                        }
                    }
                }
            }
        }
        m
    }

    /// The algebra `⊕_x π_x(C_c(G))` with basis the images of the `δ_γ`.
    pub fn algebra(&self) -> Result<RepresentedAlgebra, LpError> {
        let basis: Vec<Mat> = self
            .gpd
            .arrows()
            .map(|g| self.represent(&ConvElement::delta(self.gpd.clone(), g)))
            .collect();
        RepresentedAlgebra::new(basis)
    }
}

/// Reduced norm `‖f‖_λ = max_x ‖π_x(f)‖_p`, with interval endpoints
/// combined conservatively across units.
pub fn lambda_norm(
    f: &ConvElement,
    p: &PExponent,
    cfg: &NormConfig,
) -> Result<NormEstimate, AlgebraError> {
    let mut best: Option<NormEstimate> = None;
    for &x in f.gpd.units() {
        let rep = regular_representation(f, x)?;
        if rep.matrix.nrows == 0 {
            continue;
        }
        let est = p_operator_norm(&rep.matrix, p, cfg)?;
        best = Some(match best {
            None => est,
            Some(b) => b.max(est),
        });
    }
    Ok(best.unwrap_or(NormEstimate { lower: 0.0, upper: 0.0, method: crate::lp_norms::NormMethod::ExactP1 }))
}

// ---------------------------------------------------------------------------
// The maps j, ℓ_x, r_x and the conditional expectation
// ---------------------------------------------------------------------------

/// The coefficient map `j`, evaluated through the pairing
/// `j_a(γ) = ⟨π_{dom γ}(a)(δ_{dom γ}), δ_γ⟩` and checked against the stored
/// coefficients; at finite scale this equality is the content of the test.
pub fn j_map(a: &ConvElement) -> BTreeMap<Arrow, Scalar> {
    let gpd = a.gpd.as_ref();
    let mut out = BTreeMap::new();
    for &x in gpd.units() {
        let rep = regular_representation(a, x).expect("x is a unit");
        let x_pos = rep.index.iter().position(|&g| g == x).expect("unit lies in Gx");
        for (i, &gamma) in rep.index.iter().enumerate() {
            let value = rep.matrix[(i, x_pos)].clone();
            if !value.is_zero() {
                out.insert(gamma, value);
            }
        }
    }
    assert!(
        out == a.coeffs,
        "the pairing must reproduce the coefficients exactly"
    );
    out
}

/// `ℓ_x(a) = π_x(a)(δ_x)` as a function on `Gx` (returned in the order of
/// `arrows_from(x)`).
pub fn ell_map(a: &ConvElement, x: Arrow) -> Result<Vec<(Arrow, Scalar)>, AlgebraError> {
    let rep = regular_representation(a, x)?;
    let x_pos = rep.index.iter().position(|&g| g == x).expect("unit lies in Gx");
    Ok(rep
        .index
        .iter()
        .enumerate()
        .map(|(i, &g)| (g, rep.matrix[(i, x_pos)].clone()))
        .collect())
}

/// `r_x(a) = π_x(a)'(δ_x)`: the transpose applied to `δ_x`, i.e. the row of
/// `π_x(a)` at `x` under the bilinear pairing between `ℓ^p` and `ℓ^{p'}`.
pub fn r_map(a: &ConvElement, x: Arrow) -> Result<Vec<(Arrow, Scalar)>, AlgebraError> {
    let rep = regular_representation(a, x)?;
    let x_pos = rep.index.iter().position(|&g| g == x).expect("unit lies in Gx");
    Ok(rep
        .index
        .iter()
        .enumerate()
        .map(|(j, &g)| (g, rep.matrix[(x_pos, j)].clone()))
        .collect())
}

/// Conditional expectation onto functions on units: restriction of `j_a`.
pub fn conditional_expectation(a: &ConvElement) -> ConvElement {
    let j = j_map(a);
    let gpd = a.gpd.clone();
    let coeffs = j
        .into_iter()
        .filter(|(g, _)| gpd.is_unit(*g))
        .collect::<BTreeMap<_, _>>();
    ConvElement { gpd, coeffs }
}

// ---------------------------------------------------------------------------
// Core of the reduced groupoid algebra
// ---------------------------------------------------------------------------

/// Result of the groupoid-algebra core computation: the core in the
/// `⊕_x π_x` realization, proven equal to the span of unit indicators.
pub struct GroupoidCore {
    pub representation: GroupoidRepresentation,
    pub algebra: RepresentedAlgebra,
    pub core: CoreData,
    /// Images of the unit indicator functions.
    pub unit_indicator_images: Vec<Mat>,
}

/// Computes `core(F^p_λ(G))` for `p ≠ 2` through the faithful `⊕_x π_x`
/// realization and checks exact equality with `C(G⁰)`, the span of unit
/// indicators.
pub fn core_of_groupoid_algebra(
    gpd: &Arc<FiniteGroupoid>,
    p: &PExponent,
) -> Result<GroupoidCore, AlgebraError> {
    p.require_not_two("the commutative core of a reduced groupoid algebra")
        .map_err(AlgebraError::Norm)?;
    let representation = GroupoidRepresentation::new(gpd.clone());
    let algebra = representation.algebra()?;
    let core = core_of(&algebra, p)?;
    let unit_indicator_images: Vec<Mat> = gpd
        .units()
        .iter()
        .map(|&u| representation.represent(&ConvElement::delta(gpd.clone(), u)))
        .collect();
    let expected = RepresentedAlgebra::new(unit_indicator_images.clone())?;
    if !core.algebra.same_span(&expected) {
        return Err(AlgebraError::CoreMismatch);
    }
    Ok(GroupoidCore { representation, algebra, core, unit_indicator_images })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupoid::{group_groupoid, pair_groupoid, unit_groupoid, GroupTable};

    fn s(n: i64) -> Scalar {
        Scalar::from_int(n)
    }

    fn pair2() -> Arc<FiniteGroupoid> {
        Arc::new(pair_groupoid(2))
    }

    /// Arrow id of `y ← x` in `pair_groupoid(n)`.
    fn arr(n: usize, y: usize, x: usize) -> Arrow {
        y * n + x
    }

    #[test]
    fn delta_convolution_follows_composition() {
        let g = pair2();
        // δ_{(1←2)} ∗ δ_{(2←1)} = δ_{(1←1)}; mismatched pair gives 0.
        let a = ConvElement::delta(g.clone(), arr(2, 0, 1));
        let b = ConvElement::delta(g.clone(), arr(2, 1, 0));
        let ab = convolve(&a, &b).unwrap();
        assert_eq!(ab, ConvElement::delta(g.clone(), arr(2, 0, 0)));
        let bad = convolve(&a, &a).unwrap();
        assert!(bad.is_zero());
    }

    #[test]
    fn unit_indicator_is_the_identity() {
        let g = pair2();
        let one = ConvElement::unit_indicator(g.clone());
        let f = ConvElement::from_coeffs(
            g.clone(),
            [(arr(2, 0, 1), s(3)), (arr(2, 1, 1), Scalar::i())],
        );
        assert_eq!(convolve(&one, &f).unwrap(), f);
        assert_eq!(convolve(&f, &one).unwrap(), f);
    }

    #[test]
    fn pair_groupoid_swap_squares_to_units() {
        let g = pair2();
        let swap = ConvElement::from_coeffs(
            g.clone(),
            [(arr(2, 0, 1), s(1)), (arr(2, 1, 0), s(1))],
        );
        let sq = convolve(&swap, &swap).unwrap();
        let expected = ConvElement::from_coeffs(
            g.clone(),
            [(arr(2, 0, 0), s(1)), (arr(2, 1, 1), s(1))],
        );
        assert_eq!(sq, expected);
    }

    #[test]
    fn i_norm_examples() {
        let g = pair2();
        assert_eq!(i_norm(&ConvElement::delta(g.clone(), 0)), 1.0);
        let all = ConvElement::from_coeffs(g.clone(), (0..4).map(|a| (a, s(1))));
        assert_eq!(i_norm(&all), 2.0);
        assert_eq!(i_norm(&ConvElement::zero(g.clone())), 0.0);
    }

    #[test]
    fn regular_representation_entries() {
        let g = pair2();
        // f = δ_{(1←0)} at x = unit 0: the matrix must be the (1,0) pattern.
        let f = ConvElement::delta(g.clone(), arr(2, 1, 0));
        let x = g.units()[0];
        let rep = regular_representation(&f, x).unwrap();
        assert_eq!(rep.matrix.nrows, 2);
        let pos_of = |gamma: Arrow| rep.index.iter().position(|&a| a == gamma).unwrap();
        let r0 = pos_of(arr(2, 0, 0));
        let r1 = pos_of(arr(2, 1, 0));
        assert_eq!(rep.matrix[(r1, r0)], s(1));
        assert_eq!(rep.matrix[(r0, r1)], s(0));
        // Identity representation.
        let one = ConvElement::unit_indicator(g.clone());
        let rep = regular_representation(&one, x).unwrap();
        assert!(rep.matrix.is_identity());
        // Non-unit argument is rejected.
        assert!(regular_representation(&f, arr(2, 1, 0)).is_err());
    }

    #[test]
    fn group_groupoid_regular_representation_is_cayley() {
        let z2 = Arc::new(group_groupoid(&GroupTable::cyclic(2)));
        let f = ConvElement::delta(z2.clone(), 1);
        let rep = regular_representation(&f, 0).unwrap();
        // δ_g acts by the swap on ℓ^p(Z_2).
        assert_eq!(rep.matrix, Mat::permutation(&[1, 0]));
    }

    #[test]
    fn representation_is_multiplicative() {
        let g = pair2();
        let f1 = ConvElement::from_coeffs(
            g.clone(),
            [(0, s(2)), (1, Scalar::i()), (3, s(-1))],
        );
        let f2 = ConvElement::from_coeffs(
            g.clone(),
            [(0, Scalar::from_ratio(1, 2)), (2, s(5))],
        );
        let rep = GroupoidRepresentation::new(g.clone());
        let lhs = rep.represent(&convolve(&f1, &f2).unwrap());
        let rhs = &rep.represent(&f1) * &rep.represent(&f2);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn lambda_norm_of_identity() {
        let g = pair2();
        let one = ConvElement::unit_indicator(g.clone());
        for p in [PExponent::from_int(1), PExponent::from_int(2), PExponent::from_int(3)] {
            let est = lambda_norm(&one, &p, &NormConfig::default()).unwrap();
            assert!((est.lower - 1.0).abs() < 1e-12 && (est.upper - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn lambda_norm_collapses_on_unit_supported_elements() {
        let g = pair2();
        let f = ConvElement::from_coeffs(
            g.clone(),
            [(arr(2, 0, 0), Scalar::from_parts(1, 1, 2, 1)), (arr(2, 1, 1), s(-3))],
        );
        assert!(f.is_unit_supported());
        for p in [PExponent::from_int(1), PExponent::from_ratio(3, 2).unwrap(), PExponent::from_int(3)] {
            let est = lambda_norm(&f, &p, &NormConfig::default()).unwrap();
            assert!((est.lower - f.sup_norm()).abs() < 1e-9, "{est:?}");
            assert!((est.upper - f.sup_norm()).abs() < 1e-9, "{est:?}");
        }
    }

    #[test]
    fn j_map_is_the_identity_on_coefficients() {
        let g = pair2();
        let a = ConvElement::from_coeffs(
            g.clone(),
            [(0, Scalar::from_parts(2, 3, -1, 7)), (2, s(4)), (3, Scalar::i())],
        );
        let j = j_map(&a);
        assert_eq!(j.len(), 3);
        assert_eq!(j[&0], Scalar::from_parts(2, 3, -1, 7));
        // δ_γ maps to the indicator of γ.
        let d = ConvElement::delta(g.clone(), 1);
        let j = j_map(&d);
        assert_eq!(j.len(), 1);
        assert!(j[&1].is_one());
    }

    #[test]
    fn conditional_expectation_restricts_to_units() {
        let g = pair2();
        let a = ConvElement::from_coeffs(
            g.clone(),
            [(arr(2, 0, 0), s(2)), (arr(2, 0, 1), s(5)), (arr(2, 1, 1), Scalar::i())],
        );
        let e = conditional_expectation(&a);
        assert!(e.is_unit_supported());
        assert_eq!(e.coeff(arr(2, 0, 0)), s(2));
        assert_eq!(e.coeff(arr(2, 1, 1)), Scalar::i());
        assert!(e.coeff(arr(2, 0, 1)).is_zero());
        // Unit-supported elements are fixed; off-unit deltas map to zero.
        assert_eq!(conditional_expectation(&e), e);
        let off = ConvElement::delta(g.clone(), arr(2, 0, 1));
        assert!(conditional_expectation(&off).is_zero());
    }

    #[test]
    fn core_of_unit_groupoid_is_everything() {
        let g = Arc::new(unit_groupoid(3));
        let p = PExponent::from_int(3);
        let out = core_of_groupoid_algebra(&g, &p).unwrap();
        assert_eq!(out.core.algebra.dim(), 3);
    }

    #[test]
    fn core_of_group_algebra_is_scalars() {
        for group in [GroupTable::cyclic(2), GroupTable::cyclic(3)] {
            let g = Arc::new(group_groupoid(&group));
            let p = PExponent::from_int(3);
            let out = core_of_groupoid_algebra(&g, &p).unwrap();
            assert_eq!(out.core.algebra.dim(), 1, "core(F^p(G)) = C·1");
        }
    }

    #[test]
    fn core_rejects_p_two() {
        let g = Arc::new(unit_groupoid(2));
        assert!(core_of_groupoid_algebra(&g, &PExponent::from_int(2)).is_err());
    }

    #[test]
    fn mismatched_groupoids_are_rejected() {
        let a = ConvElement::delta(pair2(), 0);
        let b = ConvElement::delta(pair2(), 0);
        assert!(matches!(convolve(&a, &b), Err(AlgebraError::GroupoidMismatch)));
    }
}
