//! Executes a validated configuration task by task and assembles the report.
//!
//! Tasks run in listed order; a failing task is recorded and execution
//! continues. Report content is a pure function of the configuration except
//! for the per-task wall-clock fields.

use std::sync::Arc;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::analysis::{
    self, ClassReport, ComparabilityRecord, ContrastRecord, Decomposition, DegreeEstimate,
    DerivativeClassReport, ImprovingRecord, RateTable, ScalingCheckRecord, SphericalRecord,
    ZeroPropagationRecord,
};
use crate::config::{ExperimentConfig, TaskConfig, TaskSpec};
use crate::error::Result;
use crate::estimators::{MncEstimate, NuProfile, NuVerdict};
use crate::operators::OperatorSpec;
use crate::sets::{self, GeneratorSpec};
use crate::space::MeasureSpace;

/// Typed result payload of one task.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum TaskOutcome {
    Estimators { estimates: Vec<MncEstimate> },
    ScalingCheck(ScalingCheckRecord),
    NuProfile(NuProfile),
    Degree(DegreeEstimate),
    Spherical(SphericalRecord),
    ZeroPropagation(ZeroPropagationRecord),
    CondensingRate(RateTable),
    Classify(ClassReport),
    Improving(ImprovingRecord),
    ImprovingCorollary(ImprovingCorollaryRecord),
    Comparability(ComparabilityRecord),
    Contrast(ContrastRecord),
    DerivativeSuite(DerivativeClassReport),
}

/// Improving verdict checked against the zero-class verdict of the trivial
/// decomposition (operator, 0).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ImprovingCorollaryRecord {
    pub improving: ImprovingRecord,
    pub classification: ClassReport,
    pub agree: bool,
}

impl TaskOutcome {
    /// (consistency assertions passed, contains an inconclusive verdict)
    pub fn consistency(&self) -> (bool, bool) {
        match self {
            TaskOutcome::Estimators { .. } | TaskOutcome::Degree(_) => (true, false),
            TaskOutcome::ScalingCheck(rec) => (rec.pass, false),
            TaskOutcome::NuProfile(p) => (true, p.verdict == NuVerdict::Inconclusive),
            TaskOutcome::Spherical(rec) => (rec.biconditional_holds, false),
            TaskOutcome::ZeroPropagation(rec) => (rec.all_zero != Some(false), false),
            TaskOutcome::CondensingRate(table) => {
                (true, table.verdict == analysis::RateVerdict::Inconclusive)
            }
            TaskOutcome::Classify(rec) => (rec.consistent, rec.has_inconclusive),
            TaskOutcome::Improving(rec) => (
                true,
                rec.per_set.iter().any(|s| s.profile.verdict == NuVerdict::Inconclusive),
            ),
            TaskOutcome::ImprovingCorollary(rec) => (
                rec.agree,
                rec.improving
                    .per_set
                    .iter()
                    .any(|s| s.profile.verdict == NuVerdict::Inconclusive)
                    || rec.classification.has_inconclusive,
            ),
            TaskOutcome::Comparability(rec) => {
                (rec.ordering_holds != Some(false), false)
            }
            TaskOutcome::Contrast(rec) => {
                (true, rec.verdict == analysis::ContrastVerdict::Inconclusive)
            }
            TaskOutcome::DerivativeSuite(rec) => (rec.consistent, rec.has_inconclusive),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TaskResult {
    pub name: String,
    pub kind: String,
    pub status: TaskStatus,
    pub wall_ms: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub record: Option<TaskOutcome>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TaskStatus {
    Ok,
    Inconsistent,
    Error,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub tasks: usize,
    pub errors: usize,
    pub inconsistencies: usize,
    pub inconclusive: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub version: String,
    /// The configuration text this report was produced from.
    pub config: String,
    pub tasks: Vec<TaskResult>,
    pub summary: Summary,
}

impl RunReport {
    /// Exit code under the documented contract: 1 on any task error, 2 on a
    /// failed consistency assertion, 2 on any inconclusive verdict when
    /// strict, 0 otherwise.
    pub fn exit_code(&self, strict: bool) -> i32 {
        if self.summary.errors > 0 {
            1
        } else if self.summary.inconsistencies > 0 || (strict && self.summary.inconclusive > 0) {
            2
        } else {
            0
        }
    }

    /// JSON with the wall-clock fields zeroed; byte-identical across reruns
    /// of the same configuration.
    pub fn canonical_json(&self) -> String {
        let mut clone = self.clone();
        for task in &mut clone.tasks {
            task.wall_ms = 0.0;
        }
        serde_json::to_string_pretty(&clone).expect("reports are serializable")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports are serializable")
    }
}

/// Runs all tasks of a validated configuration. `config_text` is echoed into
/// the report verbatim.
pub fn run(config: &ExperimentConfig, config_text: &str) -> Result<RunReport> {
    config.validate()?;
    let space = MeasureSpace::uniform(config.space.cells, config.space.total_measure)?;
    let mut tasks = Vec::with_capacity(config.tasks.len());
    let mut summary = Summary { tasks: config.tasks.len(), errors: 0, inconsistencies: 0, inconclusive: 0 };
    for task in &config.tasks {
        let started = Instant::now();
        let outcome = run_task(config, &space, task);
        let wall_ms = started.elapsed().as_secs_f64() * 1e3;
        let result = match outcome {
            Ok(record) => {
                let (consistent, inconclusive) = record.consistency();
                if !consistent {
                    summary.inconsistencies += 1;
                }
                if inconclusive {
                    summary.inconclusive += 1;
                }
                TaskResult {
                    name: task.name.clone(),
                    kind: kind_name(&task.spec).into(),
                    status: if consistent { TaskStatus::Ok } else { TaskStatus::Inconsistent },
                    wall_ms,
                    error: None,
                    record: Some(record),
                }
            }
            Err(e) => {
                summary.errors += 1;
                TaskResult {
                    name: task.name.clone(),
                    kind: kind_name(&task.spec).into(),
                    status: TaskStatus::Error,
                    wall_ms,
                    error: Some(e.to_string()),
                    record: None,
                }
            }
        };
        tasks.push(result);
    }
    Ok(RunReport {
        version: env!("CARGO_PKG_VERSION").into(),
        config: config_text.into(),
        tasks,
        summary,
    })
}

fn kind_name(spec: &TaskSpec) -> &'static str {
    match spec {
        TaskSpec::Estimators { .. } => "estimators",
        TaskSpec::ScalingCheck { .. } => "scaling-check",
        TaskSpec::NuProfile { .. } => "nu-profile",
        TaskSpec::Degree { .. } => "degree",
        TaskSpec::Spherical { .. } => "spherical",
        TaskSpec::ZeroPropagation { .. } => "zero-propagation",
        TaskSpec::CondensingRate { .. } => "condensing-rate",
        TaskSpec::Classify { .. } => "classify",
        TaskSpec::Improving { .. } => "improving",
        TaskSpec::ImprovingCorollary { .. } => "improving-corollary",
        TaskSpec::Comparability { .. } => "comparability",
        TaskSpec::Contrast { .. } => "contrast",
        TaskSpec::DerivativeSuite { .. } => "derivative-suite",
    }
}

fn run_task(
    config: &ExperimentConfig,
    space: &Arc<MeasureSpace>,
    task: &TaskConfig,
) -> Result<TaskOutcome> {
    let tol = &config.tolerances;
    let generator = |name: &str| -> &GeneratorSpec { &config.generators[name] };
    let operator = |name: &str| -> &OperatorSpec { &config.operators[name] };
    Ok(match &task.spec {
        TaskSpec::Estimators { set, estimators } => {
            let sample = sets::generate(space, generator(set))?;
            TaskOutcome::Estimators {
                estimates: analysis::estimator_report(&sample, estimators)?,
            }
        }
        TaskSpec::ScalingCheck { set, estimators, rho_grid } => {
            let sample = sets::generate(space, generator(set))?;
            TaskOutcome::ScalingCheck(analysis::scaling_check(&sample, estimators, rho_grid)?)
        }
        TaskSpec::NuProfile { set, delta_grid } => {
            let sample = sets::generate(space, generator(set))?;
            TaskOutcome::NuProfile(crate::estimators::nu_profile_with(
                &sample,
                delta_grid,
                tol.zero_scale,
                tol.slope_min,
            )?)
        }
        TaskSpec::Degree { operator: op, estimator, base, rho_grid } => {
            TaskOutcome::Degree(analysis::estimate_degree(
                operator(op),
                estimator,
                generator(base),
                rho_grid,
                space,
                tol,
            )?)
        }
        TaskSpec::Spherical { operator: op, estimator, rho1, rho0_grid, plan } => {
            TaskOutcome::Spherical(analysis::check_spherical(
                estimator,
                operator(op),
                *rho1,
                rho0_grid,
                plan,
                space,
                tol,
            )?)
        }
        TaskSpec::ZeroPropagation {
            operator: op,
            estimator,
            rho1,
            rho_grid,
            plan,
            assume_semi_homogeneous,
        } => TaskOutcome::ZeroPropagation(analysis::zero_propagation_check(
            estimator,
            operator(op),
            *rho1,
            rho_grid,
            plan,
            space,
            tol,
            *assume_semi_homogeneous,
        )?),
        TaskSpec::CondensingRate {
            operator: op,
            anchor,
            mode,
            estimator,
            radius_grid,
            plan,
            rate_tol,
        } => TaskOutcome::CondensingRate(analysis::condensing_rate_with(
            operator(op),
            anchor,
            *mode,
            estimator,
            radius_grid,
            plan,
            space,
            tol,
            rate_tol.unwrap_or(tol.rate_tol),
        )?),
        TaskSpec::Classify {
            principal,
            condensing,
            anchor,
            mode,
            estimator,
            radius_grid,
            plan,
        } => {
            let decomposition = Decomposition {
                principal: operator(principal).clone(),
                condensing: operator(condensing).clone(),
            };
            TaskOutcome::Classify(analysis::classify_decomposition(
                &decomposition,
                anchor,
                *mode,
                estimator,
                radius_grid,
                plan,
                space,
                tol,
            )?)
        }
        TaskSpec::Improving { operator: op, suite, delta_grid } => {
            let specs: Vec<GeneratorSpec> =
                suite.iter().map(|s| generator(s).clone()).collect();
            TaskOutcome::Improving(analysis::improving_check(
                operator(op),
                &specs,
                delta_grid,
                space,
                tol,
            )?)
        }
        TaskSpec::ImprovingCorollary {
            operator: op,
            suite,
            delta_grid,
            estimator,
            radius_grid,
            plan,
        } => {
            let specs: Vec<GeneratorSpec> =
                suite.iter().map(|s| generator(s).clone()).collect();
            let op_spec = operator(op);
            let improving =
                analysis::improving_check(op_spec, &specs, delta_grid, space, tol)?;
            let (q, p) = op_spec.exponents()?;
            let decomposition = Decomposition {
                principal: op_spec.clone(),
                condensing: OperatorSpec::zero(q, p),
            };
            let classification = analysis::classify_decomposition(
                &decomposition,
                &sets::FuncSpec::Zero,
                analysis::DecompositionMode::Point,
                estimator,
                radius_grid,
                plan,
                space,
                tol,
            )?;
            let agree = improving.improving == classification.zero_class_member;
            TaskOutcome::ImprovingCorollary(ImprovingCorollaryRecord {
                improving,
                classification,
                agree,
            })
        }
        TaskSpec::Comparability { dominated, dominating, bound, set, delta } => {
            let sample = sets::generate(space, generator(set))?;
            TaskOutcome::Comparability(analysis::comparability_check(
                operator(dominated),
                operator(dominating),
                bound,
                &sample,
                *delta,
                tol,
            )?)
        }
        TaskSpec::Contrast { operator: op, net_sizes, plan } => {
            TaskOutcome::Contrast(analysis::complete_continuity_contrast(
                operator(op),
                net_sizes,
                plan,
                space,
                tol,
            )?)
        }
        TaskSpec::DerivativeSuite { operator: op, anchor, net_sizes, radius_grid, plan } => {
            TaskOutcome::DerivativeSuite(analysis::derivative_class_suite(
                operator(op),
                anchor,
                net_sizes,
                radius_grid,
                plan,
                space,
                tol,
            )?)
        }
    })
}
