//! Task execution: materializes the objects a task references, dispatches
//! the command, and collects per-task reports. Deterministic given the
//! seed; report order follows task order.

use crate::cli::report::{NamedInterval, Report, TaskReport};
#[cfg(test)]
use crate::cli::report::TaskStatus;
use crate::cli::specfile::{
    ActionDef, AlgebraDef, Command, GroupDef, GroupoidDef, SpecFile, TaskSpec,
};
use crate::crossed_product::{
    compare_with_transformation_groupoid, verify_core_theorem, IsometricAlgebraAction,
};
use crate::groupoid::{
    coe_search, find_isomorphism, group_groupoid, pair_groupoid, transformation_groupoid,
    unit_groupoid, validate_groupoid, FiniteGroupoid, GroupAction, GroupTable, GroupoidError,
};
use crate::groupoid_algebra::{core_of_groupoid_algebra, i_norm, lambda_norm};
use crate::linalg::Mat;
use crate::lp_norms::{core_of, NormConfig, RepresentedAlgebra};
use crate::sampling;
use crate::scalar::Scalar;
use crate::weyl::{weyl_groupoid, WeylConfig, WeylError};
use crate::leavitt::{verify_covariant_presentation, verify_matrix_absorption};
use std::collections::BTreeMap;
use std::sync::Arc;
use std::time::Instant;

/// Run-wide configuration; per-task values override it.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub seed: u64,
    pub norm: NormConfig,
    /// Band around 1 for the hermitian exponential sweep.
    pub tau: f64,
    /// Slack for the floating-point side of norm comparisons.
    pub sandwich_tol: f64,
    pub max_bisections: u128,
    pub max_nodes: u64,
    /// Default sample count for the `norms` command.
    pub samples: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            seed: 0,
            norm: NormConfig::default(),
            tau: 1e-6,
            sandwich_tol: 1e-9,
            max_bisections: 100_000,
            max_nodes: 1 << 24,
            samples: 50,
        }
    }
}

impl RunConfig {
    /// Applies a `KEY=VALUE` tolerance override.
    pub fn apply_tolerance(&mut self, key: &str, value: &str) -> Result<(), String> {
        let as_f64 = || value.parse::<f64>().map_err(|_| format!("bad float '{value}'"));
        let as_u64 = || value.parse::<u64>().map_err(|_| format!("bad integer '{value}'"));
        match key {
            "power_tol" => self.norm.power_tol = as_f64()?,
            "max_iter" => self.norm.max_iter = as_u64()? as usize,
            "random_starts" => self.norm.random_starts = as_u64()? as usize,
            "tau" => self.tau = as_f64()?,
            "sandwich" => self.sandwich_tol = as_f64()?,
            "max_bisections" => self.max_bisections = as_u64()? as u128,
            "max_nodes" => self.max_nodes = as_u64()?,
            "samples" => self.samples = as_u64()? as usize,
            other => return Err(format!("unknown tolerance key '{other}'")),
        }
        Ok(())
    }
}

enum TaskError {
    Fail(String),
    Inconclusive(String),
}

impl From<GroupoidError> for TaskError {
    fn from(e: GroupoidError) -> Self {
        match e {
            GroupoidError::SizeGuard { .. } | GroupoidError::SearchGuard { .. } => {
                TaskError::Inconclusive(e.to_string())
            }
            other => TaskError::Fail(other.to_string()),
        }
    }
}

impl From<WeylError> for TaskError {
    fn from(e: WeylError) -> Self {
        match e {
            WeylError::Groupoid(g) => g.into(),
            other => TaskError::Fail(other.to_string()),
        }
    }
}

fn fail(msg: impl Into<String>) -> TaskError {
    TaskError::Fail(msg.into())
}

/// Object cache for one run: referenced objects are built once, so two
/// tasks naming the same groupoid operate on the same instance.
struct Workspace<'a> {
    spec: &'a SpecFile,
    groups: BTreeMap<String, GroupTable>,
    actions: BTreeMap<String, GroupAction>,
    groupoids: BTreeMap<String, Arc<FiniteGroupoid>>,
    algebras: BTreeMap<String, RepresentedAlgebra>,
    algebra_actions: BTreeMap<String, IsometricAlgebraAction>,
}

impl<'a> Workspace<'a> {
    fn new(spec: &'a SpecFile) -> Self {
        Workspace {
            spec,
            groups: BTreeMap::new(),
            actions: BTreeMap::new(),
            groupoids: BTreeMap::new(),
            algebras: BTreeMap::new(),
            algebra_actions: BTreeMap::new(),
        }
    }

    fn group(&mut self, name: &str) -> Result<GroupTable, TaskError> {
        if let Some(g) = self.groups.get(name) {
            return Ok(g.clone());
        }
        let def = self.spec.groups.get(name).ok_or_else(|| fail(format!("unknown group '{name}'")))?;
        let built = match def.clone() {
            GroupDef::Cyclic(n) => GroupTable::cyclic(n),
            GroupDef::Symmetric(d) => {
                if d > 4 {
                    return Err(fail("symmetric groups supported up to degree 4"));
                }
                GroupTable::symmetric(d)
            }
            GroupDef::Product(l, r) => {
                let left = self.group(&l)?;
                let right = self.group(&r)?;
                GroupTable::product(&left, &right)
            }
            GroupDef::Table(t) => {
                GroupTable::from_table(t).map_err(|e| fail(e.to_string()))?
            }
        };
        self.groups.insert(name.to_string(), built.clone());
        Ok(built)
    }

    fn action(&mut self, name: &str) -> Result<GroupAction, TaskError> {
        if let Some(a) = self.actions.get(name) {
            return Ok(a.clone());
        }
        let def = self
            .spec
            .actions
            .get(name)
            .ok_or_else(|| fail(format!("unknown action '{name}'")))?
            .clone();
        let built = match def {
            ActionDef::Space { group, perms } => {
                GroupAction::new(self.group(&group)?, perms).map_err(|e| fail(e.to_string()))?
            }
            ActionDef::Translation { group } => GroupAction::translation(self.group(&group)?),
            ActionDef::Rotation { order } => GroupAction::rotation(order),
            ActionDef::Trivial { group, points } => {
                GroupAction::trivial(self.group(&group)?, points)
            }
            ActionDef::Algebra { .. } => {
                return Err(fail(format!(
                    "action '{name}' acts on an algebra; it cannot be used as a space action"
                )));
            }
        };
        self.actions.insert(name.to_string(), built.clone());
        Ok(built)
    }

    fn algebra(&mut self, name: &str) -> Result<RepresentedAlgebra, TaskError> {
        if let Some(a) = self.algebras.get(name) {
            return Ok(a.clone());
        }
        let def = self
            .spec
            .algebras
            .get(name)
            .ok_or_else(|| fail(format!("unknown algebra '{name}'")))?;
        let built = match def {
            AlgebraDef::Full(n) => RepresentedAlgebra::full_matrix(*n),
            AlgebraDef::Upper(n) => RepresentedAlgebra::upper_triangular(*n),
            AlgebraDef::Diagonal(n) => RepresentedAlgebra::diagonal(*n),
            AlgebraDef::Scalars(n) => RepresentedAlgebra::scalars(*n),
        };
        self.algebras.insert(name.to_string(), built.clone());
        Ok(built)
    }

    fn algebra_action(&mut self, name: &str) -> Result<IsometricAlgebraAction, TaskError> {
        if let Some(a) = self.algebra_actions.get(name) {
            return Ok(a.clone());
        }
        let def = self
            .spec
            .actions
            .get(name)
            .ok_or_else(|| fail(format!("unknown action '{name}'")))?
            .clone();
        let built = match def {
            ActionDef::Algebra { group, algebra, perms, diags } => {
                let group = self.group(&group)?;
                let algebra = self.algebra(&algebra)?;
                let m = algebra.ambient_dim;
                if perms.len() != group.order {
                    return Err(fail("one implementer per group element required"));
                }
                let mut implementers = Vec::new();
                for (perm, diag) in perms.iter().zip(&diags) {
                    if perm.len() != m || diag.len() != m {
                        return Err(fail("implementer size must match the algebra dimension"));
                    }
                    let p = Mat::permutation(perm);
                    let mut entries = Vec::new();
                    for d in diag {
                        entries.push(Scalar::parse(d).map_err(fail)?);
                    }
                    implementers.push(&Mat::diagonal(&entries) * &p);
                }
                IsometricAlgebraAction::new(group, algebra, implementers)
                    .map_err(|e| fail(e.to_string()))?
            }
            _ => {
                // A space action induces its algebra action on C(X).
                let space = self.action(name)?;
                IsometricAlgebraAction::from_space_action(&space)
            }
        };
        self.algebra_actions.insert(name.to_string(), built.clone());
        Ok(built)
    }

    fn groupoid(&mut self, name: &str) -> Result<Arc<FiniteGroupoid>, TaskError> {
        if let Some(g) = self.groupoids.get(name) {
            return Ok(g.clone());
        }
        let def = self
            .spec
            .groupoids
            .get(name)
            .ok_or_else(|| fail(format!("unknown groupoid '{name}'")))?
            .clone();
        let built = match def {
            GroupoidDef::Units(n) => unit_groupoid(n),
            GroupoidDef::Pair(n) => pair_groupoid(n),
            GroupoidDef::Group(g) => group_groupoid(&self.group(&g)?),
            GroupoidDef::Transformation(a) => transformation_groupoid(&self.action(&a)?),
            GroupoidDef::Tables(t) => validate_groupoid(t).map_err(|e| fail(e.to_string()))?,
        };
        let built = Arc::new(built);
        self.groupoids.insert(name.to_string(), built.clone());
        Ok(built)
    }
}

fn require<'t, T>(v: &'t Option<T>, what: &str) -> Result<&'t T, TaskError> {
    v.as_ref().ok_or_else(|| fail(format!("task needs '{what}'")))
}

fn run_task(ws: &mut Workspace, task: &TaskSpec, cfg: &RunConfig, report: &mut TaskReport) -> Result<(), TaskError> {
    match task.command {
        Command::Validate => {
            report.claim = "the tables satisfy the groupoid axioms".into();
            let name = require(&task.groupoid, "groupoid")?;
            let g = ws.groupoid(name)?;
            report.detail("arrows", g.n_arrows().to_string());
            report.detail("units", g.units().len().to_string());
            report.detail("principal", g.is_principal().to_string());
        }
        Command::Core => {
            let p = require(&task.p, "p")?.clone();
            if let Some(name) = &task.groupoid {
                report.claim =
                    "the core of the reduced groupoid algebra is the span of unit indicators"
                        .into();
                let g = ws.groupoid(name)?;
                let out = core_of_groupoid_algebra(&g, &p).map_err(|e| fail(e.to_string()))?;
                report.detail("core dimension", out.core.algebra.dim().to_string());
                report.detail("units", g.units().len().to_string());
                report.detail("equals unit indicators", "true");
            } else {
                report.claim =
                    "the core is the hermitian elements plus i times them, computed exactly"
                        .into();
                let name = require(&task.algebra, "algebra")?;
                let a = ws.algebra(name)?;
                let out = core_of(&a, &p).map_err(|e| fail(e.to_string()))?;
                report.detail("algebra dimension", a.dim().to_string());
                report.detail("core dimension", out.algebra.dim().to_string());
                report.detail("commutative regime", out.commutative_regime.to_string());
                report.detail(
                    "representation",
                    "assumed isometric for the intended norm (caller's responsibility)",
                );
            }
        }
        Command::Weyl => {
            report.claim =
                "the germ groupoid of bisection-realized partial homeomorphisms reconstructs a principal groupoid"
                    .into();
            let name = require(&task.groupoid, "groupoid")?;
            let p = require(&task.p, "p")?.clone();
            let g = ws.groupoid(name)?;
            let wcfg = WeylConfig {
                max_bisections: task.max_bisections.unwrap_or(cfg.max_bisections),
                max_search_nodes: task.max_nodes.unwrap_or(cfg.max_nodes),
            };
            let out = weyl_groupoid(&g, &p, &wcfg)?;
            report.detail("bisections", out.bisection_count.to_string());
            report.detail("realized maps", out.realized_maps.len().to_string());
            report.detail("weyl arrows", out.weyl.n_arrows().to_string());
            report.detail("input principal", out.input_principal.to_string());
            report.detail(
                "reconstruction",
                if out.reconstruction.is_some() {
                    "isomorphism exhibited".to_string()
                } else {
                    "principal quotient reported (input not principal)".to_string()
                },
            );
        }
        Command::Coe => {
            report.claim =
                "orbit-equivalence search agrees with transformation-groupoid isomorphism search"
                    .into();
            let left = ws.action(require(&task.left, "left")?)?;
            let right = ws.action(require(&task.right, "right")?)?;
            let nodes = task.max_nodes.unwrap_or(cfg.max_nodes);
            let coe = coe_search(&left, &right, nodes)?;
            let gl = transformation_groupoid(&left);
            let gr = transformation_groupoid(&right);
            let iso = find_isomorphism(&gl, &gr, nodes)?;
            report.detail("orbit equivalent", coe.is_some().to_string());
            report.detail("groupoids isomorphic", iso.is_some().to_string());
            report.detail(
                "note",
                "continuity of θ and the cocycles is automatic on finite discrete spaces",
            );
            if let Some(w) = &coe {
                report.detail("theta", format!("{:?}", w.theta));
            }
            if coe.is_some() != iso.is_some() {
                return Err(fail("the two searches disagree"));
            }
        }
        Command::Norms => {
            report.claim = "sup-norm ≤ λ-norm ≤ I-norm on sampled convolution elements".into();
            let name = require(&task.groupoid, "groupoid")?;
            let p = require(&task.p, "p")?.clone();
            let g = ws.groupoid(name)?;
            let samples = task.samples.unwrap_or(cfg.samples);
            let seed = task.seed.unwrap_or(cfg.seed);
            let mut rng = sampling::rng(seed);
            let mut worst_low = f64::INFINITY;
            let mut worst_high = f64::INFINITY;
            for i in 0..samples {
                let f = sampling::random_conv_element(&mut rng, &g, (g.n_arrows() / 2).max(2));
                let sup = f.sup_norm();
                let inorm = i_norm(&f);
                let est = lambda_norm(&f, &p, &cfg.norm).map_err(|e| fail(e.to_string()))?;
                let low_margin = est.lower - sup;
                let high_margin = inorm - est.upper;
                worst_low = worst_low.min(low_margin);
                worst_high = worst_high.min(high_margin);
                if low_margin < -cfg.sandwich_tol || high_margin < -cfg.sandwich_tol {
                    report.intervals.push(NamedInterval::from_estimate(format!("sample {i}"), &est));
                    return Err(fail(format!(
                        "sandwich violated at sample {i}: sup {sup}, interval [{}, {}], I-norm {inorm}",
                        est.lower, est.upper
                    )));
                }
                if i == 0 {
                    report.intervals.push(NamedInterval::from_estimate("sample 0", &est));
                }
            }
            report.detail("samples", samples.to_string());
            report.detail("seed", seed.to_string());
            report.detail("worst lower margin", crate::cli::report::render_float(worst_low));
            report.detail("worst upper margin", crate::cli::report::render_float(worst_high));
        }
        Command::Crossed => {
            report.claim =
                "the crossed-product core equals the coefficient-algebra core under the canonical embedding"
                    .into();
            let name = require(&task.action, "action")?;
            let p = require(&task.p, "p")?.clone();
            let action = ws.algebra_action(name)?;
            let out = verify_core_theorem(&action, &p).map_err(|e| fail(e.to_string()))?;
            report.detail("crossed dimension", out.crossed_dim.to_string());
            report.detail("core dimension", out.core_dim.to_string());
            report.detail("cores identified", out.cores_identified.to_string());
            report.detail(
                "twisted expectations vanish",
                out.expectation_kills_twisted_core.to_string(),
            );
            report.detail(
                "norm scope",
                "norms computed in the regular representation induced by the defining representation",
            );
            // For space actions, also cross-check against the
            // transformation-groupoid algebra.
            if let Some(ActionDef::Space { .. } | ActionDef::Rotation { .. } | ActionDef::Translation { .. } | ActionDef::Trivial { .. }) =
                ws.spec.actions.get(name)
            {
                let space = ws.action(name)?;
                let cmp = compare_with_transformation_groupoid(&space, &p, &cfg.norm)
                    .map_err(|e| fail(e.to_string()))?;
                report.detail("groupoid comparison", "products match exactly");
                for (i, (a, b)) in cmp.norm_intervals.iter().enumerate() {
                    report
                        .intervals
                        .push(NamedInterval::from_estimate(format!("crossed sample {i}"), a));
                    report
                        .intervals
                        .push(NamedInterval::from_estimate(format!("groupoid sample {i}"), b));
                }
            }
        }
        Command::Leavitt => {
            let check = require(&task.check, "check")?.as_str();
            match check {
                "covariant" => {
                    report.claim =
                        "the two-generator covariant presentation holds exactly in M_2 of the Leavitt algebra"
                            .into();
                    let n = task.n.unwrap_or(2);
                    if n < 2 || n > 12 {
                        return Err(fail("covariant check needs 2 ≤ n ≤ 12"));
                    }
                    let out = verify_covariant_presentation(n as u8, task.zero_entry)
                        .map_err(|e| fail(e.to_string()))?;
                    report.detail("n", n.to_string());
                    report.detail("checks", out.checks.len().to_string());
                    if let Some((r, c)) = task.zero_entry {
                        report.detail("mutation", format!("zeroed entry ({r}, {c})"));
                    }
                    if !out.pass() {
                        let names: Vec<String> =
                            out.failures().iter().map(|c| c.name.clone()).collect();
                        for c in out.failures() {
                            if let Some(d) = &c.difference {
                                report.detail(format!("difference [{}]", c.name), d.clone());
                            }
                        }
                        return Err(fail(format!("identities failed: {}", names.join("; "))));
                    }
                }
                "absorption" => {
                    report.claim =
                        "the doubled generator family satisfies the Leavitt relations and generates M_2 of the algebra"
                            .into();
                    let k = task.k.unwrap_or(2);
                    if k < 2 || k > 6 {
                        return Err(fail("absorption check needs 2 ≤ k ≤ 6"));
                    }
                    let out = verify_matrix_absorption(k).map_err(|e| fail(e.to_string()))?;
                    report.detail("k", k.to_string());
                    report.detail("relation failures", out.relations.failures.len().to_string());
                    report.detail("witness failures", out.witness_failures.len().to_string());
                    if !out.pass() {
                        let mut names: Vec<String> =
                            out.relations.failures.iter().map(|f| f.name.clone()).collect();
                        names.extend(out.witness_failures.iter().map(|f| f.name.clone()));
                        return Err(fail(format!("identities failed: {}", names.join("; "))));
                    }
                }
                other => return Err(fail(format!("unknown leavitt check '{other}'"))),
            }
        }
    }
    Ok(())
}

/// Executes every task in order; the process exit status is nonzero exactly
/// when some task fails (guards report as inconclusive, not failure).
pub fn run(spec: &SpecFile, cfg: &RunConfig) -> Report {
    let mut ws = Workspace::new(spec);
    let mut report = Report::default();
    for task in &spec.tasks {
        let mut tr = TaskReport::new(task.index, task.command.name(), "");
        let start = Instant::now();
        match run_task(&mut ws, task, cfg, &mut tr) {
            Ok(()) => {}
            Err(TaskError::Fail(msg)) => tr.fail(msg),
            Err(TaskError::Inconclusive(msg)) => tr.inconclusive(msg),
        }
        tr.timing_ms = start.elapsed().as_millis();
        report.tasks.push(tr);
    }
    report
}

/// Convenience entry point used by tests and the binary: parse then run.
pub fn parse_and_run(text: &str, cfg: &RunConfig) -> Result<Report, crate::cli::specfile::ParseError> {
    let spec = crate::cli::specfile::parse_spec(text)?;
    Ok(run(&spec, cfg))
}

// A tiny self-check catalog lives in the repository under specs/; the CLI
// integration tests drive it end to end.
#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn core_task_passes_on_unit_groupoid() {
        let text = "
[groupoid.u3]
kind = units
points = 3

[task.1]
command = core
groupoid = u3
p = 3
";
        let report = parse_and_run(text, &RunConfig::default()).unwrap();
        assert_eq!(report.tasks.len(), 1);
        assert_eq!(report.tasks[0].status, TaskStatus::Pass);
        assert!(!report.any_failed());
    }

    #[test]
    fn weyl_task_rejects_p_two() {
        let text = "
[groupoid.p2]
kind = pair
points = 2

[task.1]
command = weyl
groupoid = p2
p = 2
";
        let report = parse_and_run(text, &RunConfig::default()).unwrap();
        assert_eq!(report.tasks[0].status, TaskStatus::Fail);
        let rendered = report.render_text();
        assert!(rendered.contains("p ≠ 2"), "{rendered}");
    }

    #[test]
    fn mutated_leavitt_task_fails() {
        let text = "
[task.1]
command = leavitt
check = covariant
n = 2
zero_entry = [0, 1]
";
        let report = parse_and_run(text, &RunConfig::default()).unwrap();
        assert_eq!(report.tasks[0].status, TaskStatus::Fail);
        assert!(report.any_failed());
    }

    #[test]
    fn validate_task_reports_axiom_violations() {
        // A syntactically well-formed table whose composition breaks
        // associativity: the validate task fails and names the axiom.
        let text = "
[groupoid.broken]
kind = tables
arrows = 3
inverse = [0 2 1]
compose = [[0 0 0] [0 1 1] [0 2 2] [1 0 1] [2 0 2] [1 1 2] [1 2 0] [2 1 0] [2 2 2]]

[task.1]
command = validate
groupoid = broken
";
        let report = parse_and_run(text, &RunConfig::default()).unwrap();
        assert_eq!(report.tasks[0].status, TaskStatus::Fail);
        assert!(report.render_text().contains("associativity"), "{}", report.render_text());
    }

    #[test]
    fn guard_exceeded_is_inconclusive_not_failed() {
        let text = "
[groupoid.p3]
kind = pair
points = 3

[task.1]
command = weyl
groupoid = p3
p = 3
max_bisections = 2
";
        let report = parse_and_run(text, &RunConfig::default()).unwrap();
        assert_eq!(report.tasks[0].status, TaskStatus::Inconclusive);
        assert!(!report.any_failed());
    }

    #[test]
    fn determinism_given_seed() {
        let text = "
[groupoid.p2]
kind = pair
points = 2

[task.1]
command = norms
groupoid = p2
p = 3/2
samples = 5
";
        let cfg = RunConfig { seed: 42, ..RunConfig::default() };
        let mut a = parse_and_run(text, &cfg).unwrap();
        let mut b = parse_and_run(text, &cfg).unwrap();
        for t in a.tasks.iter_mut().chain(b.tasks.iter_mut()) {
            t.timing_ms = 0;
        }
        assert_eq!(a.render_json(), b.render_json());
    }
}
