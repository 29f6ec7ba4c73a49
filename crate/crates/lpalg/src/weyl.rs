//! Admissible pairs, realizable partial homeomorphisms, and the Weyl
//! groupoid.
//!
//! An admissible pair `(a, b)` realizes a partial homeomorphism α of the
//! core's spectrum through three conditions: positivity of all `afb`, `bfa`
//! with `f` ranging over positive core functions; `U = {ba > 0}` and
//! `V = {ab > 0}`; and the matching identities `f(α(x))·ba(x) = bfa(x)`,
//! `g(α⁻¹(y))·ab(y) = agb(y)`. The positive cone of a finite spectrum is
//! generated by the point indicators, so checking condition (1) and (3) on
//! indicators suffices by positive linearity.

use crate::groupoid::{
    bisection_action, enumerate_bisections, find_isomorphism, germ_groupoid, Arrow, Bisection,
    FiniteGroupoid, GroupoidError, GroupoidIso, PartialBijection,
};
use crate::groupoid_algebra::{
    convolve, core_of_groupoid_algebra, AlgebraError, ConvElement, GroupoidCore,
};
use crate::linalg::Mat;
use crate::lp_norms::{spectrum_points, CoreData, LpError, PExponent, RepresentedAlgebra};
use crate::scalar::Scalar;
use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum WeylError {
    #[error(transparent)]
    Groupoid(#[from] GroupoidError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Norm(#[from] LpError),
    #[error("groupoid is not principal")]
    NotPrincipal,
    #[error("pair is not admissible: {0}")]
    NotAdmissible(Violation),
    #[error("claim falsified: {0}")]
    ClaimFalsified(String),
    #[error("weight function must be strictly positive on dom(S), offending unit position {0}")]
    WeightNotPositive(usize),
    #[error("reconstruction failed: the germ groupoid is not isomorphic to the input")]
    ReconstructionFailed,
}

/// A named violation of one of the three admissibility conditions, with
/// enough data to re-check it independently.
#[derive(Clone, Debug)]
pub struct Violation {
    /// Which displayed condition failed: 1, 2 or 3.
    pub condition: u8,
    /// `false`: the `b·f·a` (domain) side; `true`: the `a·g·b` (range) side.
    pub range_side: bool,
    /// Spectrum point of the indicator involved, when relevant.
    pub point: Option<usize>,
    pub detail: String,
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "condition ({}) on the {} side{}: {}",
            self.condition,
            if self.range_side { "a·g·b" } else { "b·f·a" },
            match self.point {
                Some(p) => format!(" at point {p}"),
                None => String::new(),
            },
            self.detail
        )
    }
}

/// The partial homeomorphism realized by an accepted pair: `α: U → V` on
/// spectrum-point indices with `U = {ba > 0}`, `V = {ab > 0}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealizedHomeo {
    pub u: BTreeSet<usize>,
    pub v: BTreeSet<usize>,
    pub alpha: PartialBijection,
}

/// Outcome of an admissibility check.
#[derive(Clone, Debug)]
pub enum AdmissionVerdict {
    Accepted(RealizedHomeo),
    Rejected(Violation),
}

impl AdmissionVerdict {
    pub fn accepted(&self) -> Option<&RealizedHomeo> {
        match self {
            AdmissionVerdict::Accepted(r) => Some(r),
            AdmissionVerdict::Rejected(_) => None,
        }
    }
}

/// An accepted admissible pair in a groupoid algebra, together with the
/// partial homeomorphism it realizes.
#[derive(Clone, Debug)]
pub struct AdmissiblePair {
    pub a: ConvElement,
    pub b: ConvElement,
    pub realized: RealizedHomeo,
}

// Shared matching logic: given exact tables
//   ba[x], ab[y], bfa[y][x] = (b·1_y·a)(x), agb[x][y] = (a·1_x·b)(y)
// decide the three conditions and extract α.
fn match_homeo(
    points: usize,
    ba: &[Scalar],
    ab: &[Scalar],
    bfa: &[Vec<Scalar>],
    agb: &[Vec<Scalar>],
) -> Result<RealizedHomeo, Violation> {
    let u: BTreeSet<usize> = (0..points).filter(|&x| ba[x].is_positive_real()).collect();
    let v: BTreeSet<usize> = (0..points).filter(|&y| ab[y].is_positive_real()).collect();
    let mut alpha: BTreeMap<usize, usize> = BTreeMap::new();
    for &x in &u {
        let partners: Vec<usize> = (0..points).filter(|&y| !bfa[y][x].is_zero()).collect();
        if partners.len() != 1 {
            return Err(Violation {
                condition: 3,
                range_side: false,
                point: Some(x),
                detail: format!(
                    "expected exactly one y with (b·1_y·a)(x) ≠ 0, found {}",
                    partners.len()
                ),
            });
        }
        let y = partners[0];
        if bfa[y][x] != ba[x] {
            return Err(Violation {
                condition: 3,
                range_side: false,
                point: Some(x),
                detail: format!("(b·1_{y}·a)(x) = {} but ba(x) = {}", bfa[y][x], ba[x]),
            });
        }
        if !v.contains(&y) {
            return Err(Violation {
                condition: 3,
                range_side: false,
                point: Some(x),
                detail: format!("partner {y} lies outside V"),
            });
        }
        alpha.insert(x, y);
    }
    // Range side must produce the inverse assignment.
    let mut beta: BTreeMap<usize, usize> = BTreeMap::new();
    for &y in &v {
        let partners: Vec<usize> = (0..points).filter(|&x| !agb[x][y].is_zero()).collect();
        if partners.len() != 1 {
            return Err(Violation {
                condition: 3,
                range_side: true,
                point: Some(y),
                detail: format!(
                    "expected exactly one x with (a·1_x·b)(y) ≠ 0, found {}",
                    partners.len()
                ),
            });
        }
        let x = partners[0];
        if agb[x][y] != ab[y] {
            return Err(Violation {
                condition: 3,
                range_side: true,
                point: Some(y),
                detail: format!("(a·1_{x}·b)(y) = {} but ab(y) = {}", agb[x][y], ab[y]),
            });
        }
        if !u.contains(&x) {
            return Err(Violation {
                condition: 3,
                range_side: true,
                point: Some(y),
                detail: format!("partner {x} lies outside U"),
            });
        }
        beta.insert(y, x);
    }
    for (&x, &y) in &alpha {
        if beta.get(&y) != Some(&x) {
            return Err(Violation {
                condition: 3,
                range_side: true,
                point: Some(y),
                detail: format!("α({x}) = {y} but the range side sends {y} to {:?}", beta.get(&y)),
            });
        }
    }
    let alpha = PartialBijection::new(points, alpha).map_err(|e| Violation {
        condition: 3,
        range_side: false,
        point: None,
        detail: format!("α is not injective: {e}"),
    })?;
    Ok(RealizedHomeo { u, v, alpha })
}

/// Checks conditions (1)–(3) for a pair of groupoid-algebra elements.
///
/// The core of a reduced groupoid algebra is the span of unit indicators,
/// so the spectrum is the unit space; indicators generate the positive
/// cone, which makes the indicator checks sufficient.
pub fn check_admissible(
    a: &ConvElement,
    b: &ConvElement,
) -> Result<AdmissionVerdict, WeylError> {
    let gpd = a.groupoid().clone();
    if gpd.uid() != b.groupoid().uid() {
        return Err(WeylError::Algebra(AlgebraError::GroupoidMismatch));
    }
    let points = gpd.units().len();
    // One sweep computes every left·1_y·right at once: bucket each
    // composable support product by its middle unit y = dom(g₁) = ran(g₂).
    // Condition (1): every product must be unit-supported with nonnegative
    // real values; the unit-diagonal values are collected while sweeping.
    let sweep = |left: &ConvElement,
                 right: &ConvElement,
                 side: bool|
     -> Result<Vec<Vec<Scalar>>, Violation> {
        // table[y][unit position of γ] = (left ∗ δ_y ∗ right)(γ) for unit γ.
        let mut table = vec![vec![Scalar::zero(); points]; points];
        let mut off_unit: BTreeMap<(usize, Arrow), Scalar> = BTreeMap::new();
        for (&g1, c1) in left.support() {
            for (&g2, c2) in right.support() {
                let Some(g) = gpd.compose(g1, g2) else { continue };
                let y = gpd.unit_position(gpd.dom(g1));
                let prod = c1 * c2;
                if gpd.is_unit(g) {
                    let x = gpd.unit_position(g);
                    table[y][x] += &prod;
                } else {
                    let entry = off_unit.entry((y, g)).or_insert_with(Scalar::zero);
                    *entry += &prod;
                }
            }
        }
        for ((y, g), val) in &off_unit {
            if !val.is_zero() {
                return Err(Violation {
                    condition: 1,
                    range_side: side,
                    point: Some(*y),
                    detail: format!(
                        "product is supported off the unit space at arrow {} with value {val}",
                        gpd.label(*g)
                    ),
                });
            }
        }
        for (y, row) in table.iter().enumerate() {
            for (x, val) in row.iter().enumerate() {
                if !val.is_zero() && !val.is_nonnegative_real() {
                    return Err(Violation {
                        condition: 1,
                        range_side: side,
                        point: Some(y),
                        detail: format!("value {val} at unit {x} is not nonnegative real"),
                    });
                }
            }
        }
        Ok(table)
    };
    // bfa[y][x] = (b·1_y·a)(x); agb[x][y] = (a·1_x·b)(y).
    let bfa = match sweep(b, a, false) {
        Ok(t) => t,
        Err(v) => return Ok(AdmissionVerdict::Rejected(v)),
    };
    let agb = match sweep(a, b, true) {
        Ok(t) => t,
        Err(v) => return Ok(AdmissionVerdict::Rejected(v)),
    };
    // ba(x) = Σ_y (b·1_y·a)(x) and ab(y) = Σ_x (a·1_x·b)(y).
    let ba: Vec<Scalar> = (0..points)
        .map(|x| {
            let mut s = Scalar::zero();
            for row in bfa.iter() {
                s += &row[x];
            }
            s
        })
        .collect();
    let ab: Vec<Scalar> = (0..points)
        .map(|y| {
            let mut s = Scalar::zero();
            for row in agb.iter() {
                s += &row[y];
            }
            s
        })
        .collect();
    match match_homeo(points, &ba, &ab, &bfa, &agb) {
        Ok(r) => Ok(AdmissionVerdict::Accepted(r)),
        Err(v) => Ok(AdmissionVerdict::Rejected(v)),
    }
}

/// Matrix-algebra route: checks admissibility of a user-supplied pair in a
/// represented algebra whose core and spectrum have been computed.
pub fn check_admissible_represented(
    algebra: &RepresentedAlgebra,
    core: &CoreData,
    a: &Mat,
    b: &Mat,
) -> Result<AdmissionVerdict, WeylError> {
    if !algebra.contains(a) || !algebra.contains(b) {
        return Err(WeylError::Norm(LpError::NotInSpan));
    }
    let spectrum = spectrum_points(&core.algebra)?;
    let points = spectrum.classes.len();
    let class_value = |m: &Mat, class: usize| -> Scalar {
        m[(spectrum.classes[class][0], spectrum.classes[class][0])].clone()
    };
    let in_positive_cone = |m: &Mat, side: bool, point: Option<usize>| -> Result<(), Violation> {
        if !core.algebra.contains(m) {
            return Err(Violation {
                condition: 1,
                range_side: side,
                point,
                detail: "product does not lie in the core".into(),
            });
        }
        for class in 0..points {
            let val = class_value(m, class);
            if !val.is_zero() && !val.is_nonnegative_real() {
                return Err(Violation {
                    condition: 1,
                    range_side: side,
                    point,
                    detail: format!("class value {val} is not nonnegative real"),
                });
            }
        }
        Ok(())
    };
    let mut bfa = vec![vec![Scalar::zero(); points]; points];
    let mut agb = vec![vec![Scalar::zero(); points]; points];
    for y in 0..points {
        let f = &spectrum.idempotents[y];
        let bfa_m = &(b * f) * a;
        if let Err(v) = in_positive_cone(&bfa_m, false, Some(y)) {
            return Ok(AdmissionVerdict::Rejected(v));
        }
        for x in 0..points {
            bfa[y][x] = class_value(&bfa_m, x);
        }
        let agb_m = &(a * f) * b;
        if let Err(v) = in_positive_cone(&agb_m, true, Some(y)) {
            return Ok(AdmissionVerdict::Rejected(v));
        }
        for x in 0..points {
            agb[y][x] = class_value(&agb_m, x);
        }
    }
    let ba_m = b * a;
    let ab_m = a * b;
    if let Err(v) = in_positive_cone(&ba_m, false, None) {
        return Ok(AdmissionVerdict::Rejected(v));
    }
    if let Err(v) = in_positive_cone(&ab_m, true, None) {
        return Ok(AdmissionVerdict::Rejected(v));
    }
    let ba: Vec<Scalar> = (0..points).map(|x| class_value(&ba_m, x)).collect();
    let ab: Vec<Scalar> = (0..points).map(|y| class_value(&ab_m, y)).collect();
    match match_homeo(points, &ba, &ab, &bfa, &agb) {
        Ok(r) => Ok(AdmissionVerdict::Accepted(r)),
        Err(v) => Ok(AdmissionVerdict::Rejected(v)),
    }
}

/// Builds the admissible pair of a bisection: `a(γ) = h(dom γ)` on `S`,
/// `b(γ) = h(ran γ)` on `S⁻¹`, with `h` strictly positive on `dom(S)`
/// (default `h ≡ 1`). The pair is re-checked and must realize `β_S`,
/// with `ba = h²` on `dom(S)`.
pub fn pair_from_bisection(
    gpd: &Arc<FiniteGroupoid>,
    s: &Bisection,
    h: Option<&BTreeMap<usize, Scalar>>,
) -> Result<AdmissiblePair, WeylError> {
    let one = Scalar::one();
    let h_at = |unit_pos: usize| -> Scalar {
        h.and_then(|m| m.get(&unit_pos).cloned()).unwrap_or_else(|| one.clone())
    };
    for &g in &s.arrows {
        let pos = gpd.unit_position(gpd.dom(g));
        if !h_at(pos).is_positive_real() {
            return Err(WeylError::WeightNotPositive(pos));
        }
    }
    let a = ConvElement::from_coeffs(
        gpd.clone(),
        s.arrows.iter().map(|&g| (g, h_at(gpd.unit_position(gpd.dom(g))))),
    );
    let b = ConvElement::from_coeffs(
        gpd.clone(),
        s.arrows.iter().map(|&g| (gpd.inverse(g), h_at(gpd.unit_position(gpd.dom(g))))),
    );
    let verdict = check_admissible(&a, &b)?;
    let realized = match verdict {
        AdmissionVerdict::Accepted(r) => r,
        AdmissionVerdict::Rejected(v) => {
            return Err(WeylError::ClaimFalsified(format!(
                "the pair of a bisection must be admissible, got: {v}"
            )));
        }
    };
    if realized.alpha != bisection_action(gpd, s) {
        return Err(WeylError::ClaimFalsified(
            "the pair of a bisection must realize β_S".into(),
        ));
    }
    // ba = h² on dom(S).
    let ba = convolve(&b, &a)?;
    for &g in &s.arrows {
        let x = gpd.dom(g);
        let hx = h_at(gpd.unit_position(x));
        if ba.coeff(x) != &hx * &hx {
            return Err(WeylError::ClaimFalsified("ba must equal h² on dom(S)".into()));
        }
    }
    Ok(AdmissiblePair { a, b, realized })
}

/// `st = (a·c, d·b)` realizes `α_s ∘ α_t` on `U_t ∩ α_t⁻¹(U_s)`.
pub fn compose_pairs(s: &AdmissiblePair, t: &AdmissiblePair) -> Result<AdmissiblePair, WeylError> {
    let a = convolve(&s.a, &t.a)?;
    let b = convolve(&t.b, &s.b)?;
    let verdict = check_admissible(&a, &b)?;
    let realized = match verdict {
        AdmissionVerdict::Accepted(r) => r,
        AdmissionVerdict::Rejected(v) => {
            return Err(WeylError::ClaimFalsified(format!(
                "product of admissible pairs must be admissible, got: {v}"
            )));
        }
    };
    let expected = s.realized.alpha.compose(&t.realized.alpha);
    if realized.alpha != expected {
        return Err(WeylError::ClaimFalsified(
            "α_{st} must equal α_s∘α_t on the composed domain".into(),
        ));
    }
    Ok(AdmissiblePair { a, b, realized })
}

/// The reverse `s♯ = (b, a)`, realizing `α_s⁻¹`.
pub fn reverse_pair(s: &AdmissiblePair) -> Result<AdmissiblePair, WeylError> {
    let verdict = check_admissible(&s.b, &s.a)?;
    let realized = match verdict {
        AdmissionVerdict::Accepted(r) => r,
        AdmissionVerdict::Rejected(v) => {
            return Err(WeylError::ClaimFalsified(format!(
                "the reverse of an admissible pair must be admissible, got: {v}"
            )));
        }
    };
    if realized.alpha != s.realized.alpha.inverse() {
        return Err(WeylError::ClaimFalsified("α_{s♯} must equal α_s⁻¹".into()));
    }
    Ok(AdmissiblePair { a: s.b.clone(), b: s.a.clone(), realized })
}

/// From an admissible pair on a principal groupoid back to the bisection
/// `S = {γ : a(γ) ≠ 0, b(γ⁻¹) ≠ 0}`, checking the supporting claims:
/// `a(γ)·b(γ⁻¹) ≥ 0` everywhere, `S` is a bisection, `dom(S) = U_s`,
/// `ran(S) = V_s`, and `β_S = α_s`. A failure here would falsify the
/// correspondence and is reported as a hard error.
pub fn bisection_from_pair(
    gpd: &Arc<FiniteGroupoid>,
    pair: &AdmissiblePair,
) -> Result<Bisection, WeylError> {
    if !gpd.is_principal() {
        return Err(WeylError::NotPrincipal);
    }
    // Claim 1: a(γ)·b(γ⁻¹) is nonnegative real for every arrow.
    for g in gpd.arrows() {
        let prod = &pair.a.coeff(g) * &pair.b.coeff(gpd.inverse(g));
        if !prod.is_nonnegative_real() {
            return Err(WeylError::ClaimFalsified(format!(
                "a(γ)b(γ⁻¹) = {prod} at γ = {} is not nonnegative",
                gpd.label(g)
            )));
        }
    }
    let arrows: BTreeSet<Arrow> = gpd
        .arrows()
        .filter(|&g| !pair.a.coeff(g).is_zero() && !pair.b.coeff(gpd.inverse(g)).is_zero())
        .collect();
    let s = Bisection::new(gpd, arrows)
        .map_err(|e| WeylError::ClaimFalsified(format!("S must be a bisection: {e}")))?;
    let dom: BTreeSet<usize> =
        s.arrows.iter().map(|&g| gpd.unit_position(gpd.dom(g))).collect();
    if dom != pair.realized.u {
        return Err(WeylError::ClaimFalsified("dom(S) must equal U_s".into()));
    }
    let ran: BTreeSet<usize> =
        s.arrows.iter().map(|&g| gpd.unit_position(gpd.ran(g))).collect();
    if ran != pair.realized.v {
        return Err(WeylError::ClaimFalsified("ran(S) must equal V_s".into()));
    }
    if bisection_action(gpd, &s) != pair.realized.alpha {
        return Err(WeylError::ClaimFalsified("β_S must equal α_s".into()));
    }
    Ok(s)
}

/// Outcome of a Weyl-groupoid computation.
pub struct WeylOutcome {
    /// The germ groupoid of all bisection-realized partial homeomorphisms.
    pub weyl: FiniteGroupoid,
    /// For principal inputs, the exhibited isomorphism `weyl ≅ input`.
    pub reconstruction: Option<GroupoidIso>,
    pub input_principal: bool,
    /// Distinct partial homeomorphisms realized by bisections.
    pub realized_maps: Vec<PartialBijection>,
    pub bisection_count: usize,
    /// The verified core data of the reduced algebra.
    pub core: GroupoidCore,
}

/// Guards for the Weyl computation.
#[derive(Clone, Debug)]
pub struct WeylConfig {
    pub max_bisections: u128,
    pub max_search_nodes: u64,
}

impl Default for WeylConfig {
    fn default() -> Self {
        WeylConfig { max_bisections: 100_000, max_search_nodes: 1 << 24 }
    }
}

/// Computes the Weyl groupoid of `F^p_λ(G)` for `p ≠ 2`: core and spectrum,
/// all bisections and their admissible pairs, the realized partial
/// homeomorphisms, and their germ groupoid. For principal `G` the
/// reconstruction isomorphism is exhibited; otherwise the strictly smaller
/// principal quotient is returned without an isomorphism claim.
pub fn weyl_groupoid(
    gpd: &Arc<FiniteGroupoid>,
    p: &PExponent,
    cfg: &WeylConfig,
) -> Result<WeylOutcome, WeylError> {
    let core = core_of_groupoid_algebra(gpd, p)?;
    // The spectrum of the core has one point per unit.
    let spectrum = spectrum_points(&core.core.algebra)?;
    if spectrum.classes.len() != gpd.units().len() {
        return Err(WeylError::ClaimFalsified(
            "spectrum of the core must have one point per unit".into(),
        ));
    }
    let bisections = enumerate_bisections(gpd, cfg.max_bisections)?;
    let bisection_count = bisections.len();
    let mut maps: BTreeSet<PartialBijection> = BTreeSet::new();
    for s in &bisections {
        let pair = pair_from_bisection(gpd, s, None)?;
        maps.insert(pair.realized.alpha);
    }
    let realized_maps: Vec<PartialBijection> = maps.into_iter().collect();
    let weyl = germ_groupoid(gpd.units().len(), &realized_maps);
    assert!(weyl.is_principal(), "germ groupoids are principal");
    let input_principal = gpd.is_principal();
    let reconstruction = if input_principal {
        match find_isomorphism(&weyl, gpd, cfg.max_search_nodes)? {
            Some(iso) => Some(iso),
            None => return Err(WeylError::ReconstructionFailed),
        }
    } else {
        None
    };
    Ok(WeylOutcome {
        weyl,
        reconstruction,
        input_principal,
        realized_maps,
        bisection_count,
        core,
    })
}
