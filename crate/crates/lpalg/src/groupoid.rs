//! Finite étale groupoids with the discrete topology.
//!
//! Arrows are indices `0..n`. Composition `γ∘η` is read "γ after η" and is
//! defined exactly when `dom(γ) = ran(η)`. The unit space is the set of
//! idempotent self-inverse arrows; with a finite discrete unit space,
//! "open" is vacuous and "dense" means "all", so every topological
//! hypothesis collapses to a finite check.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use thiserror::Error;

pub type Arrow = usize;

static NEXT_GROUPOID_UID: AtomicU64 = AtomicU64::new(1);

#[derive(Debug, Error)]
pub enum GroupoidError {
    #[error("axiom violation ({axiom}): witnesses {witnesses:?}")]
    Axiom {
        axiom: String,
        witnesses: Vec<Arrow>,
    },
    #[error("arrow index {0} out of bounds (n = {1})")]
    OutOfBounds(usize, usize),
    #[error("{0} is not a unit")]
    NotAUnit(Arrow),
    #[error("not a bisection: {0}")]
    NotABisection(String),
    #[error("size guard exceeded: {what} count {count} exceeds limit {limit}")]
    SizeGuard {
        what: String,
        count: u128,
        limit: u128,
    },
    #[error("search guard exceeded after {visited} nodes")]
    SearchGuard { visited: u64 },
    #[error("invalid group table: {0}")]
    BadGroup(String),
    #[error("invalid group action: {0}")]
    BadAction(String),
    #[error("elements belong to different groupoids")]
    GroupoidMismatch,
}

/// Raw composition/inversion tables, the input to [`validate_groupoid`].
#[derive(Clone, Debug)]
pub struct GroupoidTables {
    pub n_arrows: usize,
    pub inverse: Vec<usize>,
    /// Row-major `n × n` partial table; `compose[γ * n + η] = γ∘η`.
    pub compose: Vec<Option<usize>>,
    pub labels: Option<Vec<String>>,
}

/// A verified finite étale groupoid.
#[derive(Clone)]
pub struct FiniteGroupoid {
    uid: u64,
    labels: Vec<String>,
    inv: Vec<Arrow>,
    comp: Vec<Option<Arrow>>,
    dom: Vec<Arrow>,
    ran: Vec<Arrow>,
    units: Vec<Arrow>,
    is_unit: Vec<bool>,
    unit_index: HashMap<Arrow, usize>,
}

impl fmt::Debug for FiniteGroupoid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "FiniteGroupoid({} arrows, {} units)",
            self.n_arrows(),
            self.units.len()
        )
    }
}

/// Validates raw tables against the groupoid axioms, or reports the first
/// failed axiom together with witnessing arrows.
pub fn validate_groupoid(tables: GroupoidTables) -> Result<FiniteGroupoid, GroupoidError> {
    let n = tables.n_arrows;
    if tables.inverse.len() != n || tables.compose.len() != n * n {
        return Err(GroupoidError::Axiom {
            axiom: format!(
                "table shapes (inverse len {}, compose len {}, expected {} and {})",
                tables.inverse.len(),
                tables.compose.len(),
                n,
                n * n
            ),
            witnesses: vec![],
        });
    }
    for &g in &tables.inverse {
        if g >= n {
            return Err(GroupoidError::OutOfBounds(g, n));
        }
    }
    for c in tables.compose.iter().flatten() {
        if *c >= n {
            return Err(GroupoidError::OutOfBounds(*c, n));
        }
    }
    let inv = tables.inverse;
    let comp = tables.compose;
    let at = |g: Arrow, h: Arrow| comp[g * n + h];

    // (γ⁻¹)⁻¹ = γ.
    for g in 0..n {
        if inv[inv[g]] != g {
            return Err(GroupoidError::Axiom {
                axiom: "inversion is an involution".into(),
                witnesses: vec![g],
            });
        }
    }
    // (γ, γ⁻¹) composable; dom(γ) = γ⁻¹γ and ran(γ) = γγ⁻¹ exist.
    let mut dom = vec![0; n];
    let mut ran = vec![0; n];
    for g in 0..n {
        match (at(inv[g], g), at(g, inv[g])) {
            (Some(d), Some(r)) => {
                dom[g] = d;
                ran[g] = r;
            }
            _ => {
                return Err(GroupoidError::Axiom {
                    axiom: "(γ, γ⁻¹) must be composable".into(),
                    witnesses: vec![g],
                });
            }
        }
    }
    // Composition defined exactly on matching pairs.
    for g in 0..n {
        for h in 0..n {
            let defined = at(g, h).is_some();
            let should = dom[g] == ran[h];
            if defined != should {
                return Err(GroupoidError::Axiom {
                    axiom: if defined {
                        "composition defined on a non-matching pair".into()
                    } else {
                        "composition missing on a matching pair".into()
                    },
                    witnesses: vec![g, h],
                });
            }
        }
    }
    // Associativity on all composable triples.
    for g in 0..n {
        for h in 0..n {
            let Some(gh) = at(g, h) else { continue };
            for k in 0..n {
                let Some(hk) = at(h, k) else { continue };
                match (at(gh, k), at(g, hk)) {
                    (Some(a), Some(b)) if a == b => {}
                    _ => {
                        return Err(GroupoidError::Axiom {
                            axiom: "associativity (γη)ξ = γ(ηξ)".into(),
                            witnesses: vec![g, h, k],
                        });
                    }
                }
            }
        }
    }
    // Cancellation γ⁻¹(γη) = η and (γη)η⁻¹ = γ.
    for g in 0..n {
        for h in 0..n {
            let Some(gh) = at(g, h) else { continue };
            if at(inv[g], gh) != Some(h) || at(gh, inv[h]) != Some(g) {
                return Err(GroupoidError::Axiom {
                    axiom: "cancellation γ⁻¹(γη) = η, (γη)η⁻¹ = γ".into(),
                    witnesses: vec![g, h],
                });
            }
        }
    }
    // Units are the idempotent self-inverse arrows; dom and ran land there.
    let is_unit: Vec<bool> = (0..n)
        .map(|g| inv[g] == g && at(g, g) == Some(g))
        .collect();
    for g in 0..n {
        if !is_unit[dom[g]] || !is_unit[ran[g]] {
            return Err(GroupoidError::Axiom {
                axiom: "dom/ran must be units".into(),
                witnesses: vec![g],
            });
        }
    }
    let units: Vec<Arrow> = (0..n).filter(|&g| is_unit[g]).collect();
    let unit_index = units.iter().enumerate().map(|(i, &u)| (u, i)).collect();
    let labels = tables
        .labels
        .unwrap_or_else(|| (0..n).map(|g| format!("a{g}")).collect());
    Ok(FiniteGroupoid {
        uid: NEXT_GROUPOID_UID.fetch_add(1, Ordering::Relaxed),
        labels,
        inv,
        comp,
        dom,
        ran,
        units,
        is_unit,
        unit_index,
    })
}

impl FiniteGroupoid {
    pub fn uid(&self) -> u64 {
        self.uid
    }

    pub fn n_arrows(&self) -> usize {
        self.inv.len()
    }

    pub fn arrows(&self) -> impl Iterator<Item = Arrow> {
        0..self.n_arrows()
    }

    pub fn units(&self) -> &[Arrow] {
        &self.units
    }

    pub fn is_unit(&self, g: Arrow) -> bool {
        self.is_unit[g]
    }

    /// Position of the unit `u` in the sorted unit list.
    pub fn unit_position(&self, u: Arrow) -> usize {
        self.unit_index[&u]
    }

    pub fn dom(&self, g: Arrow) -> Arrow {
        self.dom[g]
    }

    pub fn ran(&self, g: Arrow) -> Arrow {
        self.ran[g]
    }

    pub fn inverse(&self, g: Arrow) -> Arrow {
        self.inv[g]
    }

    pub fn compose(&self, g: Arrow, h: Arrow) -> Option<Arrow> {
        self.comp[g * self.n_arrows() + h]
    }

    pub fn label(&self, g: Arrow) -> &str {
        &self.labels[g]
    }

    /// `Gx`: arrows with domain `x`.
    pub fn arrows_from(&self, x: Arrow) -> Vec<Arrow> {
        self.arrows().filter(|&g| self.dom[g] == x).collect()
    }

    /// `xG`: arrows with range `x`.
    pub fn arrows_into(&self, x: Arrow) -> Vec<Arrow> {
        self.arrows().filter(|&g| self.ran[g] == x).collect()
    }

    /// The isotropy group `xGx` at a unit, checked closed under
    /// composition and inversion.
    pub fn isotropy_group(&self, x: Arrow) -> Result<Vec<Arrow>, GroupoidError> {
        if x >= self.n_arrows() {
            return Err(GroupoidError::OutOfBounds(x, self.n_arrows()));
        }
        if !self.is_unit[x] {
            return Err(GroupoidError::NotAUnit(x));
        }
        let iso: Vec<Arrow> = self
            .arrows()
            .filter(|&g| self.dom[g] == x && self.ran[g] == x)
            .collect();
        let set: HashSet<Arrow> = iso.iter().copied().collect();
        for &g in &iso {
            if !set.contains(&self.inv[g]) {
                return Err(GroupoidError::Axiom {
                    axiom: "isotropy not closed under inversion".into(),
                    witnesses: vec![g],
                });
            }
            for &h in &iso {
                match self.compose(g, h) {
                    Some(gh) if set.contains(&gh) => {}
                    _ => {
                        return Err(GroupoidError::Axiom {
                            axiom: "isotropy not closed under composition".into(),
                            witnesses: vec![g, h],
                        });
                    }
                }
            }
        }
        Ok(iso)
    }

    /// True iff every unit has trivial isotropy. On a finite discrete unit
    /// space "trivial isotropy on a dense set" is the same as "everywhere".
    pub fn is_principal(&self) -> bool {
        self.units
            .iter()
            .all(|&x| self.arrows().filter(|&g| self.dom[g] == x && self.ran[g] == x).count() == 1)
    }

    /// Hom-set sizes `(x, y) ↦ #{γ : x → y}` by unit positions.
    fn hom_sizes(&self) -> Vec<Vec<usize>> {
        let u = self.units.len();
        let mut sizes = vec![vec![0usize; u]; u];
        for g in self.arrows() {
            let dx = self.unit_position(self.dom[g]);
            let ry = self.unit_position(self.ran[g]);
            sizes[dx][ry] += 1;
        }
        sizes
    }
}

// ---------------------------------------------------------------------------
// Groups and actions
// ---------------------------------------------------------------------------

/// A finite group given by its multiplication table (`0` is the identity).
#[derive(Clone, Debug)]
pub struct GroupTable {
    pub order: usize,
    /// `mul[g][h] = g·h`.
    pub mul: Vec<Vec<usize>>,
    pub labels: Vec<String>,
}

impl GroupTable {
    pub fn from_table(mul: Vec<Vec<usize>>) -> Result<Self, GroupoidError> {
        let order = mul.len();
        if order == 0 {
            return Err(GroupoidError::BadGroup("empty table".into()));
        }
        for row in &mul {
            if row.len() != order || row.iter().any(|&x| x >= order) {
                return Err(GroupoidError::BadGroup("ragged or out-of-range row".into()));
            }
        }
        for g in 0..order {
            if mul[0][g] != g || mul[g][0] != g {
                return Err(GroupoidError::BadGroup(format!(
                    "element 0 is not a two-sided identity at {g}"
                )));
            }
        }
        for g in 0..order {
            if !(0..order).any(|h| mul[g][h] == 0 && mul[h][g] == 0) {
                return Err(GroupoidError::BadGroup(format!("no inverse for {g}")));
            }
        }
        for a in 0..order {
            for b in 0..order {
                for c in 0..order {
                    if mul[mul[a][b]][c] != mul[a][mul[b][c]] {
                        return Err(GroupoidError::BadGroup(format!(
                            "associativity fails at ({a}, {b}, {c})"
                        )));
                    }
                }
            }
        }
        let labels = (0..order).map(|g| format!("g{g}")).collect();
        Ok(GroupTable { order, mul, labels })
    }

    pub fn cyclic(n: usize) -> Self {
        let mul = (0..n).map(|g| (0..n).map(|h| (g + h) % n).collect()).collect();
        let mut t = GroupTable::from_table(mul).expect("cyclic table is a group");
        t.labels = (0..n).map(|g| format!("r{g}")).collect();
        t
    }

    /// The symmetric group on `deg` letters (intended for `deg ≤ 4`).
    pub fn symmetric(deg: usize) -> Self {
        let mut perms: Vec<Vec<usize>> = Vec::new();
        permute((0..deg).collect(), 0, &mut perms);
        // Identity first.
        perms.sort_by_key(|p| p.iter().enumerate().filter(|(i, &x)| *i != x).count() > 0);
        let id: Vec<usize> = (0..deg).collect();
        let pos0 = perms.iter().position(|p| *p == id).unwrap();
        perms.swap(0, pos0);
        let index: HashMap<Vec<usize>, usize> =
            perms.iter().enumerate().map(|(i, p)| (p.clone(), i)).collect();
        let mul = perms
            .iter()
            .map(|p| {
                perms
                    .iter()
                    .map(|q| {
                        // (p·q)(x) = p(q(x))
                        let comp: Vec<usize> = (0..deg).map(|x| p[q[x]]).collect();
                        index[&comp]
                    })
                    .collect()
            })
            .collect();
        let mut t = GroupTable::from_table(mul).expect("symmetric table is a group");
        t.labels = perms.iter().map(|p| format!("{p:?}")).collect();
        t
    }

    /// Direct product `A × B` with lexicographic element indexing.
    pub fn product(a: &GroupTable, b: &GroupTable) -> Self {
        let order = a.order * b.order;
        let idx = |ga: usize, gb: usize| ga * b.order + gb;
        let mul = (0..order)
            .map(|g| {
                let (ga, gb) = (g / b.order, g % b.order);
                (0..order)
                    .map(|h| {
                        let (ha, hb) = (h / b.order, h % b.order);
                        idx(a.mul[ga][ha], b.mul[gb][hb])
                    })
                    .collect()
            })
            .collect();
        let mut t = GroupTable::from_table(mul).expect("product table is a group");
        t.labels = (0..order)
            .map(|g| format!("({},{})", a.labels[g / b.order], b.labels[g % b.order]))
            .collect();
        t
    }

    pub fn inverse(&self, g: usize) -> usize {
        (0..self.order)
            .find(|&h| self.mul[g][h] == 0)
            .expect("validated group has inverses")
    }
}

fn permute(mut items: Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k == items.len() {
        out.push(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permute(items.clone(), k + 1, out);
        items.swap(k, i);
    }
}

/// A finite group acting on a finite set by permutations.
#[derive(Clone, Debug)]
pub struct GroupAction {
    pub group: GroupTable,
    pub degree: usize,
    /// `perms[g][x] = σ_g(x)`.
    pub perms: Vec<Vec<usize>>,
}

impl GroupAction {
    pub fn new(group: GroupTable, perms: Vec<Vec<usize>>) -> Result<Self, GroupoidError> {
        let degree = perms.first().map_or(0, |p| p.len());
        if perms.len() != group.order {
            return Err(GroupoidError::BadAction(
                "one permutation per group element required".into(),
            ));
        }
        for (g, p) in perms.iter().enumerate() {
            if p.len() != degree {
                return Err(GroupoidError::BadAction(format!("ragged permutation at {g}")));
            }
            let mut seen = vec![false; degree];
            for &x in p {
                if x >= degree || seen[x] {
                    return Err(GroupoidError::BadAction(format!("perm at {g} is not a bijection")));
                }
                seen[x] = true;
            }
        }
        if (0..degree).any(|x| perms[0][x] != x) {
            return Err(GroupoidError::BadAction("identity must act trivially".into()));
        }
        for g in 0..group.order {
            for h in 0..group.order {
                let gh = group.mul[g][h];
                for x in 0..degree {
                    if perms[gh][x] != perms[g][perms[h][x]] {
                        return Err(GroupoidError::BadAction(format!(
                            "not a homomorphism at (g{g}, g{h}, x{x})"
                        )));
                    }
                }
            }
        }
        Ok(GroupAction { group, degree, perms })
    }

    pub fn apply(&self, g: usize, x: usize) -> usize {
        self.perms[g][x]
    }

    /// `G` acting on itself by left translation.
    pub fn translation(group: GroupTable) -> Self {
        let perms = (0..group.order)
            .map(|g| (0..group.order).map(|x| group.mul[g][x]).collect())
            .collect();
        GroupAction::new(group, perms).expect("translation action is valid")
    }

    pub fn trivial(group: GroupTable, points: usize) -> Self {
        let perms = vec![(0..points).collect::<Vec<_>>(); group.order];
        GroupAction::new(group, perms).expect("trivial action is valid")
    }

    /// `Z_n` rotating `n` points.
    pub fn rotation(n: usize) -> Self {
        let group = GroupTable::cyclic(n);
        let perms = (0..n).map(|g| (0..n).map(|x| (x + g) % n).collect()).collect();
        GroupAction::new(group, perms).expect("rotation action is valid")
    }

    /// Relabel the points by the bijection `relabel` (conjugate action).
    pub fn relabeled(&self, relabel: &[usize]) -> Result<Self, GroupoidError> {
        if relabel.len() != self.degree {
            return Err(GroupoidError::BadAction("relabel length mismatch".into()));
        }
        let mut inverse = vec![0; self.degree];
        for (x, &y) in relabel.iter().enumerate() {
            inverse[y] = x;
        }
        let perms = (0..self.group.order)
            .map(|g| (0..self.degree).map(|y| relabel[self.perms[g][inverse[y]]]).collect())
            .collect();
        GroupAction::new(self.group.clone(), perms)
    }

    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.degree];
        let mut orbits = Vec::new();
        for x in 0..self.degree {
            if seen[x] {
                continue;
            }
            let mut orbit = BTreeSet::new();
            for g in 0..self.group.order {
                orbit.insert(self.apply(g, x));
            }
            for &y in &orbit {
                seen[y] = true;
            }
            orbits.push(orbit.into_iter().collect());
        }
        orbits
    }

    /// Free = every non-identity element moves every point. For a finite
    /// discrete space this is exactly topological freeness.
    pub fn is_topologically_free(&self) -> bool {
        (1..self.group.order).all(|g| (0..self.degree).all(|x| self.apply(g, x) != x))
    }
}

// ---------------------------------------------------------------------------
// Builders
// ---------------------------------------------------------------------------

/// Groupoid with `n` arrows, all of them units.
pub fn unit_groupoid(n: usize) -> FiniteGroupoid {
    let compose = (0..n * n)
        .map(|ij| if ij / n == ij % n { Some(ij / n) } else { None })
        .collect();
    validate_groupoid(GroupoidTables {
        n_arrows: n,
        inverse: (0..n).collect(),
        compose,
        labels: Some((0..n).map(|i| format!("u{i}")).collect()),
    })
    .expect("unit groupoid is valid")
}

/// Pair groupoid on `n` points: one arrow `x → y` for every ordered pair.
pub fn pair_groupoid(n: usize) -> FiniteGroupoid {
    // Arrow (y, x) = y*n + x means x → y; units are (x, x).
    let id = |y: usize, x: usize| y * n + x;
    let mut compose = vec![None; n * n * n * n];
    for y in 0..n {
        for x in 0..n {
            for w in 0..n {
                // (y ← x) ∘ (x ← w) = (y ← w)
                compose[id(y, x) * n * n + id(x, w)] = Some(id(y, w));
            }
        }
    }
    let inverse = (0..n * n).map(|g| (g % n) * n + g / n).collect();
    let labels = (0..n * n).map(|g| format!("{}<-{}", g / n, g % n)).collect();
    validate_groupoid(GroupoidTables {
        n_arrows: n * n,
        inverse,
        compose,
        labels: Some(labels),
    })
    .expect("pair groupoid is valid")
}

/// A finite group viewed as a groupoid with a single unit.
pub fn group_groupoid(group: &GroupTable) -> FiniteGroupoid {
    let n = group.order;
    let compose = (0..n * n).map(|gh| Some(group.mul[gh / n][gh % n])).collect();
    let inverse = (0..n).map(|g| group.inverse(g)).collect();
    validate_groupoid(GroupoidTables {
        n_arrows: n,
        inverse,
        compose,
        labels: Some(group.labels.clone()),
    })
    .expect("group groupoid is valid")
}

/// The transformation groupoid `G ⋉ X` of an action: arrows `(g, x)`,
/// composition `(g, σ_h(x))·(h, x) = (gh, x)`, inverse
/// `(g, x)⁻¹ = (g⁻¹, σ_g(x))`, units `{1} × X`.
pub fn transformation_groupoid(action: &GroupAction) -> FiniteGroupoid {
    let ng = action.group.order;
    let nx = action.degree;
    let n = ng * nx;
    let id = |g: usize, x: usize| g * nx + x;
    let mut compose = vec![None; n * n];
    for g in 0..ng {
        for h in 0..ng {
            for x in 0..nx {
                let left = id(g, action.apply(h, x));
                let right = id(h, x);
                compose[left * n + right] = Some(id(action.group.mul[g][h], x));
            }
        }
    }
    let inverse = (0..n)
        .map(|a| {
            let (g, x) = (a / nx, a % nx);
            id(action.group.inverse(g), action.apply(g, x))
        })
        .collect();
    let labels = (0..n)
        .map(|a| format!("({},x{})", action.group.labels[a / nx], a % nx))
        .collect();
    validate_groupoid(GroupoidTables {
        n_arrows: n,
        inverse,
        compose,
        labels: Some(labels),
    })
    .expect("transformation groupoid is valid")
}

// ---------------------------------------------------------------------------
// Partial bijections and bisections
// ---------------------------------------------------------------------------

/// An injective partial map on `{0, …, ambient-1}`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct PartialBijection {
    pub ambient: usize,
    map: BTreeMap<usize, usize>,
}

impl PartialBijection {
    pub fn new(ambient: usize, map: BTreeMap<usize, usize>) -> Result<Self, GroupoidError> {
        let mut seen = BTreeSet::new();
        for (&x, &y) in &map {
            if x >= ambient || y >= ambient {
                return Err(GroupoidError::OutOfBounds(x.max(y), ambient));
            }
            if !seen.insert(y) {
                return Err(GroupoidError::NotABisection(format!(
                    "value {y} hit twice, map not injective"
                )));
            }
        }
        Ok(PartialBijection { ambient, map })
    }

    pub fn identity(ambient: usize) -> Self {
        PartialBijection {
            ambient,
            map: (0..ambient).map(|x| (x, x)).collect(),
        }
    }

    pub fn empty(ambient: usize) -> Self {
        PartialBijection { ambient, map: BTreeMap::new() }
    }

    pub fn apply(&self, x: usize) -> Option<usize> {
        self.map.get(&x).copied()
    }

    pub fn domain(&self) -> BTreeSet<usize> {
        self.map.keys().copied().collect()
    }

    pub fn range(&self) -> BTreeSet<usize> {
        self.map.values().copied().collect()
    }

    pub fn graph(&self) -> Vec<(usize, usize)> {
        self.map.iter().map(|(&x, &y)| (x, y)).collect()
    }

    pub fn inverse(&self) -> Self {
        PartialBijection {
            ambient: self.ambient,
            map: self.map.iter().map(|(&x, &y)| (y, x)).collect(),
        }
    }

    /// `self ∘ rhs`, defined on `{x ∈ dom(rhs) : rhs(x) ∈ dom(self)}`.
    pub fn compose(&self, rhs: &PartialBijection) -> Self {
        assert_eq!(self.ambient, rhs.ambient, "ambient size mismatch");
        let map = rhs
            .map
            .iter()
            .filter_map(|(&x, &y)| self.apply(y).map(|z| (x, z)))
            .collect();
        PartialBijection { ambient: self.ambient, map }
    }

    pub fn restrict(&self, dom: &BTreeSet<usize>) -> Self {
        PartialBijection {
            ambient: self.ambient,
            map: self.map.iter().filter(|(x, _)| dom.contains(x)).map(|(&x, &y)| (x, y)).collect(),
        }
    }
}

/// A set of arrows on which both `dom` and `ran` are injective.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Bisection {
    pub arrows: BTreeSet<Arrow>,
}

impl Bisection {
    pub fn new(gpd: &FiniteGroupoid, arrows: BTreeSet<Arrow>) -> Result<Self, GroupoidError> {
        let mut doms = BTreeSet::new();
        let mut rans = BTreeSet::new();
        for &g in &arrows {
            if g >= gpd.n_arrows() {
                return Err(GroupoidError::OutOfBounds(g, gpd.n_arrows()));
            }
            if !doms.insert(gpd.dom(g)) {
                return Err(GroupoidError::NotABisection(format!(
                    "dom not injective at unit {}",
                    gpd.dom(g)
                )));
            }
            if !rans.insert(gpd.ran(g)) {
                return Err(GroupoidError::NotABisection(format!(
                    "ran not injective at unit {}",
                    gpd.ran(g)
                )));
            }
        }
        Ok(Bisection { arrows })
    }

    pub fn units(gpd: &FiniteGroupoid) -> Self {
        Bisection { arrows: gpd.units().iter().copied().collect() }
    }

    pub fn inverse(&self, gpd: &FiniteGroupoid) -> Self {
        Bisection { arrows: self.arrows.iter().map(|&g| gpd.inverse(g)).collect() }
    }

    /// Pointwise product `S·T = {γη : composable}` (again a bisection).
    pub fn product(&self, gpd: &FiniteGroupoid, rhs: &Bisection) -> Result<Bisection, GroupoidError> {
        let mut arrows = BTreeSet::new();
        for &g in &self.arrows {
            for &h in &rhs.arrows {
                if let Some(gh) = gpd.compose(g, h) {
                    arrows.insert(gh);
                }
            }
        }
        Bisection::new(gpd, arrows)
    }
}

/// The partial bijection `β_S` on unit positions: `x ↦ ran(Sx)`.
pub fn bisection_action(gpd: &FiniteGroupoid, s: &Bisection) -> PartialBijection {
    let map = s
        .arrows
        .iter()
        .map(|&g| (gpd.unit_position(gpd.dom(g)), gpd.unit_position(gpd.ran(g))))
        .collect();
    PartialBijection { ambient: gpd.units().len(), map }
}

/// Counts bisections exactly via a subset-sum sweep over range units.
pub fn count_bisections(gpd: &FiniteGroupoid) -> u128 {
    let u = gpd.units().len();
    assert!(u <= 24, "bisection count sweep supports at most 24 units");
    // Group arrows by their dom unit position; each dom unit contributes at
    // most one arrow, consuming one ran unit.
    let by_dom: Vec<Vec<usize>> = gpd
        .units()
        .iter()
        .map(|&x| {
            gpd.arrows_from(x).iter().map(|&g| gpd.unit_position(gpd.ran(g))).collect()
        })
        .collect();
    let mut dp: HashMap<u32, u128> = HashMap::from([(0u32, 1u128)]);
    for rans in &by_dom {
        let mut next = dp.clone(); // skip this dom unit
        for (&mask, &ways) in &dp {
            for &r in rans {
                if mask & (1 << r) == 0 {
                    *next.entry(mask | (1 << r)).or_insert(0) += ways;
                }
            }
        }
        dp = next;
    }
    dp.values().sum()
}

/// All bisections, refusing when the exact count exceeds `max_count`.
pub fn enumerate_bisections(
    gpd: &FiniteGroupoid,
    max_count: u128,
) -> Result<Vec<Bisection>, GroupoidError> {
    let count = count_bisections(gpd);
    if count > max_count {
        return Err(GroupoidError::SizeGuard {
            what: "bisections".into(),
            count,
            limit: max_count,
        });
    }
    let by_dom: Vec<Vec<Arrow>> = gpd.units().iter().map(|&x| gpd.arrows_from(x)).collect();
    let mut out = Vec::with_capacity(count as usize);
    let mut chosen: Vec<Arrow> = Vec::new();
    let mut used_ran: BTreeSet<Arrow> = BTreeSet::new();
    fn rec(
        gpd: &FiniteGroupoid,
        by_dom: &[Vec<Arrow>],
        i: usize,
        chosen: &mut Vec<Arrow>,
        used_ran: &mut BTreeSet<Arrow>,
        out: &mut Vec<Bisection>,
    ) {
        if i == by_dom.len() {
            out.push(Bisection { arrows: chosen.iter().copied().collect() });
            return;
        }
        rec(gpd, by_dom, i + 1, chosen, used_ran, out);
        for &g in &by_dom[i] {
            if used_ran.insert(gpd.ran(g)) {
                chosen.push(g);
                rec(gpd, by_dom, i + 1, chosen, used_ran, out);
                chosen.pop();
                used_ran.remove(&gpd.ran(g));
            }
        }
    }
    rec(gpd, &by_dom, 0, &mut chosen, &mut used_ran, &mut out);
    debug_assert_eq!(out.len() as u128, count);
    Ok(out)
}

// ---------------------------------------------------------------------------
// Groupoid of germs
// ---------------------------------------------------------------------------

/// Groupoid of germs of a family of partial bijections of `{0..ambient}`.
///
/// With the discrete topology the germ `[s, x]` is determined by the pair
/// `(s(x), x)`, so after closing the family under composition and inversion
/// the germs form a subset of the pair groupoid. The result is always
/// principal.
pub fn germ_groupoid(ambient: usize, maps: &[PartialBijection]) -> FiniteGroupoid {
    assert!(
        maps.iter().all(|s| s.ambient == ambient),
        "all maps must act on the same point set"
    );
    // Closing the family under composition and inversion and then taking
    // germs is the same as closing the germ pairs themselves: a germ of
    // s₁∘s₂∘… at x factors through a chain of single-map germs. So work
    // at the pair level directly.
    let mut germs: BTreeSet<(usize, usize)> = BTreeSet::new();
    for s in maps {
        for (x, y) in s.graph() {
            germs.insert((y, x)); // arrow x → y
            germs.insert((x, y));
        }
    }
    loop {
        let mut fresh: Vec<(usize, usize)> = Vec::new();
        for &(z, y1) in &germs {
            for &(y2, x) in &germs {
                if y1 == y2 && !germs.contains(&(z, x)) {
                    fresh.push((z, x));
                }
            }
        }
        if fresh.is_empty() {
            break;
        }
        germs.extend(fresh);
    }
    let germs: Vec<(usize, usize)> = germs.into_iter().collect();
    let index: HashMap<(usize, usize), usize> =
        germs.iter().enumerate().map(|(i, &g)| (g, i)).collect();
    let n = germs.len();
    let mut compose = vec![None; n * n];
    for (i, &(z, y1)) in germs.iter().enumerate() {
        for (j, &(y2, x)) in germs.iter().enumerate() {
            if y1 == y2 {
                compose[i * n + j] = Some(index[&(z, x)]);
            }
        }
    }
    let inverse = germs.iter().map(|&(y, x)| index[&(x, y)]).collect();
    let labels = germs.iter().map(|&(y, x)| format!("[{y}<-{x}]")).collect();
    validate_groupoid(GroupoidTables {
        n_arrows: n,
        inverse,
        compose,
        labels: Some(labels),
    })
    .expect("germ pairs always form a groupoid")
}

// ---------------------------------------------------------------------------
// Isomorphism search
// ---------------------------------------------------------------------------

/// An arrow bijection preserving all groupoid structure.
#[derive(Clone, Debug)]
pub struct GroupoidIso {
    /// `map[γ]` is the image arrow in the target groupoid.
    pub map: Vec<Arrow>,
}

impl GroupoidIso {
    pub fn verify(&self, g: &FiniteGroupoid, h: &FiniteGroupoid) -> bool {
        let n = g.n_arrows();
        if n != h.n_arrows() || self.map.len() != n {
            return false;
        }
        let mut seen = vec![false; n];
        for &im in &self.map {
            if im >= n || seen[im] {
                return false;
            }
            seen[im] = true;
        }
        for a in 0..n {
            if g.is_unit(a) != h.is_unit(self.map[a]) {
                return false;
            }
            if self.map[g.inverse(a)] != h.inverse(self.map[a]) {
                return false;
            }
            if self.map[g.dom(a)] != h.dom(self.map[a]) || self.map[g.ran(a)] != h.ran(self.map[a]) {
                return false;
            }
            for b in 0..n {
                let lhs = g.compose(a, b).map(|c| self.map[c]);
                let rhs = h.compose(self.map[a], self.map[b]);
                if lhs != rhs {
                    return false;
                }
            }
        }
        true
    }
}

/// Backtracking isomorphism search: a unit bijection with degree pruning,
/// then hom-set bijections with composition consistency. Exhaustive within
/// the node guard, so `Ok(None)` certifies non-existence.
pub fn find_isomorphism(
    g: &FiniteGroupoid,
    h: &FiniteGroupoid,
    max_nodes: u64,
) -> Result<Option<GroupoidIso>, GroupoidError> {
    if g.n_arrows() != h.n_arrows() || g.units().len() != h.units().len() {
        return Ok(None);
    }
    let gu = g.units().len();
    let g_hom = g.hom_sizes();
    let h_hom = h.hom_sizes();
    // Degree profile per unit: sorted outgoing hom sizes + isotropy size.
    let profile = |hom: &Vec<Vec<usize>>, x: usize| {
        let mut outs: Vec<usize> = hom[x].clone();
        outs.sort_unstable();
        let mut ins: Vec<usize> = (0..hom.len()).map(|y| hom[y][x]).collect();
        ins.sort_unstable();
        (hom[x][x], outs, ins)
    };
    let gp: Vec<_> = (0..gu).map(|x| profile(&g_hom, x)).collect();
    let hp: Vec<_> = (0..gu).map(|x| profile(&h_hom, x)).collect();
    {
        let mut a = gp.clone();
        let mut b = hp.clone();
        a.sort();
        b.sort();
        if a != b {
            return Ok(None);
        }
    }

    let mut nodes: u64 = 0;
    let mut unit_map: Vec<Option<usize>> = vec![None; gu];
    let mut used: Vec<bool> = vec![false; gu];

    // Arrows of g grouped by (dom position, ran position), and the same for h.
    let mut g_groups: BTreeMap<(usize, usize), Vec<Arrow>> = BTreeMap::new();
    for a in g.arrows() {
        g_groups
            .entry((g.unit_position(g.dom(a)), g.unit_position(g.ran(a))))
            .or_default()
            .push(a);
    }
    let mut h_groups: BTreeMap<(usize, usize), Vec<Arrow>> = BTreeMap::new();
    for a in h.arrows() {
        h_groups
            .entry((h.unit_position(h.dom(a)), h.unit_position(h.ran(a))))
            .or_default()
            .push(a);
    }

    fn assign_units(
        g: &FiniteGroupoid,
        h: &FiniteGroupoid,
        gp: &[(usize, Vec<usize>, Vec<usize>)],
        hp: &[(usize, Vec<usize>, Vec<usize>)],
        g_hom: &Vec<Vec<usize>>,
        h_hom: &Vec<Vec<usize>>,
        g_groups: &BTreeMap<(usize, usize), Vec<Arrow>>,
        h_groups: &BTreeMap<(usize, usize), Vec<Arrow>>,
        unit_map: &mut Vec<Option<usize>>,
        used: &mut Vec<bool>,
        pos: usize,
        nodes: &mut u64,
        max_nodes: u64,
    ) -> Result<Option<GroupoidIso>, GroupoidError> {
        *nodes += 1;
        if *nodes > max_nodes {
            return Err(GroupoidError::SearchGuard { visited: *nodes });
        }
        let gu = unit_map.len();
        if pos == gu {
            return match_arrows(g, h, g_groups, h_groups, unit_map, nodes, max_nodes);
        }
        for cand in 0..gu {
            if used[cand] || gp[pos] != hp[cand] {
                continue;
            }
            // Hom sizes against already assigned units must agree.
            let ok = (0..pos).all(|prev| {
                let pc = unit_map[prev].unwrap();
                g_hom[pos][prev] == h_hom[cand][pc] && g_hom[prev][pos] == h_hom[pc][cand]
            });
            if !ok {
                continue;
            }
            unit_map[pos] = Some(cand);
            used[cand] = true;
            if let Some(iso) = assign_units(
                g, h, gp, hp, g_hom, h_hom, g_groups, h_groups, unit_map, used, pos + 1, nodes,
                max_nodes,
            )? {
                return Ok(Some(iso));
            }
            unit_map[pos] = None;
            used[cand] = false;
        }
        Ok(None)
    }

    fn match_arrows(
        g: &FiniteGroupoid,
        h: &FiniteGroupoid,
        g_groups: &BTreeMap<(usize, usize), Vec<Arrow>>,
        h_groups: &BTreeMap<(usize, usize), Vec<Arrow>>,
        unit_map: &[Option<usize>],
        nodes: &mut u64,
        max_nodes: u64,
    ) -> Result<Option<GroupoidIso>, GroupoidError> {
        let n = g.n_arrows();
        let mut map: Vec<Option<Arrow>> = vec![None; n];
        let groups: Vec<(&Vec<Arrow>, Vec<Arrow>)> = {
            let mut gs = Vec::new();
            for (&(dx, rx), g_arrows) in g_groups {
                let target = (unit_map[dx].unwrap(), unit_map[rx].unwrap());
                let h_arrows = match h_groups.get(&target) {
                    Some(v) if v.len() == g_arrows.len() => v.clone(),
                    _ => return Ok(None),
                };
                gs.push((g_arrows, h_arrows));
            }
            gs
        };

        fn consistent(g: &FiniteGroupoid, h: &FiniteGroupoid, map: &[Option<Arrow>], a: Arrow) -> bool {
            let ia = map[a].unwrap();
            if map[g.inverse(a)].is_some_and(|x| x != h.inverse(ia)) {
                return false;
            }
            for b in g.arrows() {
                let Some(ib) = map[b] else { continue };
                if let Some(c) = g.compose(a, b) {
                    if let Some(ic) = map[c] {
                        if h.compose(ia, ib) != Some(ic) {
                            return false;
                        }
                    }
                }
                if let Some(c) = g.compose(b, a) {
                    if let Some(ic) = map[c] {
                        if h.compose(ib, ia) != Some(ic) {
                            return false;
                        }
                    }
                }
            }
            true
        }

        fn rec(
            g: &FiniteGroupoid,
            h: &FiniteGroupoid,
            groups: &[(&Vec<Arrow>, Vec<Arrow>)],
            gi: usize,
            ai: usize,
            map: &mut Vec<Option<Arrow>>,
            used: &mut HashSet<Arrow>,
            nodes: &mut u64,
            max_nodes: u64,
        ) -> Result<Option<GroupoidIso>, GroupoidError> {
            *nodes += 1;
            if *nodes > max_nodes {
                return Err(GroupoidError::SearchGuard { visited: *nodes });
            }
            if gi == groups.len() {
                let full = GroupoidIso { map: map.iter().map(|m| m.unwrap()).collect() };
                return Ok(full.verify(g, h).then_some(full));
            }
            let (g_arrows, h_arrows) = &groups[gi];
            if ai == g_arrows.len() {
                return rec(g, h, groups, gi + 1, 0, map, used, nodes, max_nodes);
            }
            let a = g_arrows[ai];
            if map[a].is_some() {
                return rec(g, h, groups, gi, ai + 1, map, used, nodes, max_nodes);
            }
            for &cand in h_arrows.iter() {
                if used.contains(&cand) {
                    continue;
                }
                map[a] = Some(cand);
                used.insert(cand);
                if consistent(g, h, map, a) {
                    if let Some(iso) = rec(g, h, groups, gi, ai + 1, map, used, nodes, max_nodes)? {
                        return Ok(Some(iso));
                    }
                }
                map[a] = None;
                used.remove(&cand);
            }
            Ok(None)
        }

        let mut used = HashSet::new();
        rec(g, h, &groups, 0, 0, &mut map, &mut used, nodes, max_nodes)
    }

    assign_units(
        g, h, &gp, &hp, &g_hom, &h_hom, &g_groups, &h_groups, &mut unit_map, &mut used, 0,
        &mut nodes, max_nodes,
    )
}

// ---------------------------------------------------------------------------
// Continuous orbit equivalence
// ---------------------------------------------------------------------------

/// Witness for continuous orbit equivalence of two finite actions: the
/// point bijection θ together with pointwise cocycle choices. On finite
/// discrete spaces continuity of θ and of the cocycles is automatic.
#[derive(Clone, Debug)]
pub struct CoeWitness {
    /// `theta[x]` is the image point in the second action's space.
    pub theta: Vec<usize>,
    /// `(g, x) ↦ h` with `θ(σ_g(x)) = ρ_h(θ(x))`.
    pub cocycle_h: BTreeMap<(usize, usize), usize>,
    /// `(h, y) ↦ g` with `θ⁻¹(ρ_h(y)) = σ_g(θ⁻¹(y))`.
    pub cocycle_g: BTreeMap<(usize, usize), usize>,
}

impl CoeWitness {
    /// Re-checks both defining identities against the actions.
    pub fn verify(&self, a: &GroupAction, b: &GroupAction) -> bool {
        if self.theta.len() != a.degree || a.degree != b.degree {
            return false;
        }
        let mut theta_inv = vec![usize::MAX; b.degree];
        for (x, &y) in self.theta.iter().enumerate() {
            if y >= b.degree || theta_inv[y] != usize::MAX {
                return false;
            }
            theta_inv[y] = x;
        }
        for g in 0..a.group.order {
            for x in 0..a.degree {
                let Some(&h) = self.cocycle_h.get(&(g, x)) else { return false };
                if self.theta[a.apply(g, x)] != b.apply(h, self.theta[x]) {
                    return false;
                }
            }
        }
        for h in 0..b.group.order {
            for y in 0..b.degree {
                let Some(&g) = self.cocycle_g.get(&(h, y)) else { return false };
                if theta_inv[b.apply(h, y)] != a.apply(g, theta_inv[y]) {
                    return false;
                }
            }
        }
        true
    }
}

/// Backtracking search for a continuous orbit equivalence between two
/// finite actions. θ is built orbit by orbit; a complete assignment must
/// map orbits onto orbits, which on finite discrete spaces is exactly what
/// the two cocycle identities require. Exhaustive, so `Ok(None)` is a
/// certificate of non-equivalence.
pub fn coe_search(
    a: &GroupAction,
    b: &GroupAction,
    max_nodes: u64,
) -> Result<Option<CoeWitness>, GroupoidError> {
    if a.degree != b.degree {
        return Ok(None);
    }
    let orbits_a = a.orbits();
    let orbits_b = b.orbits();
    if orbits_a.len() != orbits_b.len() {
        return Ok(None);
    }

    let mut nodes: u64 = 0;
    let mut orbit_target: Vec<Option<usize>> = vec![None; orbits_a.len()];
    let mut used: Vec<bool> = vec![false; orbits_b.len()];

    fn rec(
        orbits_a: &[Vec<usize>],
        orbits_b: &[Vec<usize>],
        i: usize,
        orbit_target: &mut Vec<Option<usize>>,
        used: &mut Vec<bool>,
        nodes: &mut u64,
        max_nodes: u64,
    ) -> Result<bool, GroupoidError> {
        *nodes += 1;
        if *nodes > max_nodes {
            return Err(GroupoidError::SearchGuard { visited: *nodes });
        }
        if i == orbits_a.len() {
            return Ok(true);
        }
        for j in 0..orbits_b.len() {
            if used[j] || orbits_a[i].len() != orbits_b[j].len() {
                continue;
            }
            orbit_target[i] = Some(j);
            used[j] = true;
            if rec(orbits_a, orbits_b, i + 1, orbit_target, used, nodes, max_nodes)? {
                return Ok(true);
            }
            orbit_target[i] = None;
            used[j] = false;
        }
        Ok(false)
    }

    if !rec(&orbits_a, &orbits_b, 0, &mut orbit_target, &mut used, &mut nodes, max_nodes)? {
        return Ok(None);
    }

    let mut theta = vec![0usize; a.degree];
    for (i, orbit) in orbits_a.iter().enumerate() {
        let target = &orbits_b[orbit_target[i].unwrap()];
        for (x, y) in orbit.iter().zip(target.iter()) {
            theta[*x] = *y;
        }
    }
    let mut theta_inv = vec![0usize; b.degree];
    for (x, &y) in theta.iter().enumerate() {
        theta_inv[y] = x;
    }
    // Pointwise cocycles; existence holds because θ matches orbits.
    let mut cocycle_h = BTreeMap::new();
    for g in 0..a.group.order {
        for x in 0..a.degree {
            let want = theta[a.apply(g, x)];
            let Some(h) = (0..b.group.order).find(|&h| b.apply(h, theta[x]) == want) else {
                return Ok(None);
            };
            cocycle_h.insert((g, x), h);
        }
    }
    let mut cocycle_g = BTreeMap::new();
    for h in 0..b.group.order {
        for y in 0..b.degree {
            let want = theta_inv[b.apply(h, y)];
            let Some(g) = (0..a.group.order).find(|&g| a.apply(g, theta_inv[y]) == want) else {
                return Ok(None);
            };
            cocycle_g.insert((h, y), g);
        }
    }
    let witness = CoeWitness { theta, cocycle_h, cocycle_g };
    debug_assert!(witness.verify(a, b));
    Ok(Some(witness))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_one_arrow_groupoid() {
        let g = validate_groupoid(GroupoidTables {
            n_arrows: 1,
            inverse: vec![0],
            compose: vec![Some(0)],
            labels: None,
        })
        .unwrap();
        assert_eq!(g.units(), &[0]);
        assert!(g.is_principal());
    }

    #[test]
    fn z2_table_as_one_unit_groupoid() {
        let g = group_groupoid(&GroupTable::cyclic(2));
        assert_eq!(g.n_arrows(), 2);
        assert_eq!(g.units().len(), 1);
        assert!(!g.is_principal());
        // Both arrows are isotropy.
        assert_eq!(g.isotropy_group(0).unwrap().len(), 2);
    }

    #[test]
    fn broken_associativity_names_the_triple() {
        // Z_3-like table with b·b redefined to b: associativity fails at
        // (a, b, b) since (ab)b = b while a(bb) = e.
        let e = 0;
        let a = 1;
        let b = 2;
        let mut compose = vec![None; 9];
        let mut set = |x: usize, y: usize, z: usize| compose[x * 3 + y] = Some(z);
        set(e, e, e);
        set(e, a, a);
        set(e, b, b);
        set(a, e, a);
        set(b, e, b);
        set(a, a, b);
        set(a, b, e);
        set(b, a, e);
        set(b, b, b); // broken
        let err = validate_groupoid(GroupoidTables {
            n_arrows: 3,
            inverse: vec![0, 2, 1],
            compose,
            labels: None,
        })
        .unwrap_err();
        match err {
            GroupoidError::Axiom { axiom, witnesses } => {
                assert!(axiom.contains("associativity"), "{axiom}");
                assert_eq!(witnesses.len(), 3);
            }
            other => panic!("expected axiom violation, got {other}"),
        }
    }

    #[test]
    fn transformation_groupoid_of_trivial_action() {
        let act = GroupAction::trivial(GroupTable::cyclic(1), 3);
        let g = transformation_groupoid(&act);
        assert_eq!(g.n_arrows(), 3);
        assert_eq!(g.units().len(), 3);
    }

    #[test]
    fn z2_swap_is_the_pair_groupoid() {
        let act = GroupAction::rotation(2);
        let g = transformation_groupoid(&act);
        assert_eq!(g.n_arrows(), 4);
        assert!(g.is_principal());
        let iso = find_isomorphism(&g, &pair_groupoid(2), 1 << 20).unwrap();
        assert!(iso.is_some());
        assert!(iso.unwrap().verify(&g, &pair_groupoid(2)));
    }

    #[test]
    fn z2_trivial_on_point_is_the_group() {
        let act = GroupAction::trivial(GroupTable::cyclic(2), 1);
        let g = transformation_groupoid(&act);
        assert_eq!(g.n_arrows(), 2);
        assert!(!g.is_principal());
    }

    #[test]
    fn isotropy_examples() {
        let u = unit_groupoid(4);
        assert_eq!(u.isotropy_group(2).unwrap(), vec![2]);
        assert!(u.isotropy_group(5).is_err());
        let free = transformation_groupoid(&GroupAction::rotation(2));
        for &x in free.units() {
            assert_eq!(free.isotropy_group(x).unwrap(), vec![x]);
        }
        assert!(matches!(
            free.isotropy_group(free.units()[0] + 100),
            Err(GroupoidError::OutOfBounds(..)) | Err(GroupoidError::NotAUnit(..))
        ));
    }

    #[test]
    fn z4_on_two_points_is_not_principal() {
        // Z_4 acts on {0, 1} through x ↦ x+1 mod 2; the stabilizer of each
        // point is {0, 2}.
        let group = GroupTable::cyclic(4);
        let perms = vec![vec![0, 1], vec![1, 0], vec![0, 1], vec![1, 0]];
        let act = GroupAction::new(group, perms).unwrap();
        let g = transformation_groupoid(&act);
        assert!(!g.is_principal());
        let x = g.units()[0];
        assert_eq!(g.isotropy_group(x).unwrap().len(), 2);
    }

    /// Brute-force oracle: exhaust all arrow subsets and test injectivity
    /// directly. Only usable for tiny groupoids, which is the point.
    fn count_bisections_by_exhaustion(gpd: &FiniteGroupoid) -> u128 {
        let n = gpd.n_arrows();
        assert!(n <= 16);
        let mut count = 0u128;
        for mask in 0u32..(1 << n) {
            let arrows: BTreeSet<Arrow> = (0..n).filter(|&a| mask & (1 << a) != 0).collect();
            let doms: BTreeSet<Arrow> = arrows.iter().map(|&a| gpd.dom(a)).collect();
            let rans: BTreeSet<Arrow> = arrows.iter().map(|&a| gpd.ran(a)).collect();
            if doms.len() == arrows.len() && rans.len() == arrows.len() {
                count += 1;
            }
        }
        count
    }

    #[test]
    fn bisection_count_matches_exhaustive_oracle() {
        for gpd in [
            unit_groupoid(3),
            pair_groupoid(2),
            pair_groupoid(3),
            group_groupoid(&GroupTable::cyclic(2)),
            transformation_groupoid(&GroupAction::rotation(2)),
            transformation_groupoid(&GroupAction::rotation(3)),
        ] {
            assert_eq!(count_bisections(&gpd), count_bisections_by_exhaustion(&gpd));
        }
    }

    #[test]
    fn bisection_counts() {
        assert_eq!(count_bisections(&unit_groupoid(3)), 8);
        assert_eq!(count_bisections(&pair_groupoid(2)), 7);
        assert_eq!(count_bisections(&group_groupoid(&GroupTable::cyclic(2))), 3);
        assert_eq!(
            enumerate_bisections(&pair_groupoid(2), 100).unwrap().len(),
            7
        );
        // Partial injections on a 3-set: 34.
        assert_eq!(count_bisections(&pair_groupoid(3)), 34);
        match enumerate_bisections(&pair_groupoid(3), 10) {
            Err(GroupoidError::SizeGuard { count, .. }) => assert_eq!(count, 34),
            other => panic!("expected size guard, got {other:?}"),
        }
    }

    #[test]
    fn bisection_action_examples() {
        let g = transformation_groupoid(&GroupAction::rotation(2));
        // Units bisection induces the identity.
        let units = Bisection::units(&g);
        assert_eq!(bisection_action(&g, &units), PartialBijection::identity(2));
        // The two non-unit arrows of Z_2 ⋉ {0,1} form the swap.
        let swap_arrows: BTreeSet<Arrow> =
            g.arrows().filter(|&a| !g.is_unit(a)).collect();
        let swap = Bisection::new(&g, swap_arrows).unwrap();
        let beta = bisection_action(&g, &swap);
        assert_eq!(beta.apply(0), Some(1));
        assert_eq!(beta.apply(1), Some(0));
        // A single arrow gives a one-point map.
        let arrow = *swap.arrows.iter().next().unwrap();
        let single = Bisection::new(&g, BTreeSet::from([arrow])).unwrap();
        assert_eq!(bisection_action(&g, &single).graph().len(), 1);
    }

    #[test]
    fn bisections_compose_like_their_actions() {
        // β_{S·T} = β_S ∘ β_T and β_{S⁻¹} = β_S⁻¹ on a 12-arrow catalog entry.
        let g = transformation_groupoid(&GroupAction::rotation(3));
        assert!(g.n_arrows() <= 12);
        let all = enumerate_bisections(&g, 10_000).unwrap();
        for s in &all {
            let bs = bisection_action(&g, s);
            assert_eq!(bisection_action(&g, &s.inverse(&g)), bs.inverse());
            for t in &all {
                let st = s.product(&g, t).expect("bisection product stays a bisection");
                assert_eq!(bisection_action(&g, &st), bs.compose(&bisection_action(&g, t)));
            }
        }
    }

    #[test]
    fn germ_groupoid_examples() {
        // Identity alone gives the unit groupoid.
        let g = germ_groupoid(3, &[PartialBijection::identity(3)]);
        assert!(find_isomorphism(&g, &unit_groupoid(3), 1 << 16).unwrap().is_some());
        // All bisection actions of the pair groupoid recover the pair groupoid.
        let pair = pair_groupoid(2);
        let maps: Vec<PartialBijection> = enumerate_bisections(&pair, 100)
            .unwrap()
            .iter()
            .map(|s| bisection_action(&pair, s))
            .collect();
        let germ = germ_groupoid(2, &maps);
        assert!(find_isomorphism(&germ, &pair, 1 << 16).unwrap().is_some());
        // A group acting trivially on a point leaves only the trivial germ.
        let collapse = germ_groupoid(1, &[PartialBijection::identity(1)]);
        assert_eq!(collapse.n_arrows(), 1);
        // Germ groupoids are principal by construction.
        assert!(germ.is_principal());
    }

    #[test]
    fn find_isomorphism_examples() {
        let u3 = unit_groupoid(3);
        let iso = find_isomorphism(&u3, &u3, 1 << 16).unwrap().unwrap();
        assert!(iso.verify(&u3, &u3));
        // Same arrow count, different unit count: certified non-isomorphic.
        let z2 = group_groupoid(&GroupTable::cyclic(2));
        assert!(find_isomorphism(&z2, &unit_groupoid(2), 1 << 16).unwrap().is_none());
    }

    #[test]
    fn group_isomorphism_search_handles_isotropy() {
        // S_3 as a one-unit groupoid is isomorphic to itself but not to Z_6.
        let s3 = group_groupoid(&GroupTable::symmetric(3));
        let z6 = group_groupoid(&GroupTable::cyclic(6));
        assert!(find_isomorphism(&s3, &s3, 1 << 22).unwrap().is_some());
        assert!(find_isomorphism(&s3, &z6, 1 << 22).unwrap().is_none());
    }

    #[test]
    fn coe_examples() {
        let swap = GroupAction::rotation(2);
        // Identical actions: θ = id works.
        let w = coe_search(&swap, &swap, 1 << 16).unwrap().unwrap();
        assert!(w.verify(&swap, &swap));
        // Relabeled copy: conjugate actions are orbit equivalent.
        let relabeled = swap.relabeled(&[1, 0]).unwrap();
        assert!(coe_search(&swap, &relabeled, 1 << 16).unwrap().is_some());
        // Different space sizes: certified non-equivalent.
        let rot3 = GroupAction::rotation(3);
        assert!(coe_search(&swap, &rot3, 1 << 16).unwrap().is_none());
    }

    #[test]
    fn composable_pairs_respect_dom_ran() {
        let g = transformation_groupoid(&GroupAction::rotation(3));
        for a in g.arrows() {
            for b in g.arrows() {
                if let Some(c) = g.compose(a, b) {
                    assert_eq!(g.dom(c), g.dom(b));
                    assert_eq!(g.ran(c), g.ran(a));
                    assert_eq!(g.inverse(c), g.compose(g.inverse(b), g.inverse(a)).unwrap());
                }
            }
        }
    }
}
