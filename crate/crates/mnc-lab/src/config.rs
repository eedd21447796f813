//! Experiment configuration: a single TOML file describing the space, named
//! generators and operators, and an ordered list of analysis tasks.
//!
//! Every seed is explicit in the file; there is no ambient randomness.
//! Validation (parse, name resolution, grid shape) happens before any task
//! runs, so an invalid configuration produces no outputs at all.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::analysis::{
    AnchorSpec, DecompositionMode, EstimatorSpec, RateMode, Tolerances,
};
use crate::error::{Error, Result};
use crate::operators::OperatorSpec;
use crate::sets::{FuncSpec, GeneratorSpec, SamplingPlan};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceConfig {
    pub cells: usize,
    pub total_measure: f64,
}

/// One analysis task; `kind` selects the analysis, the remaining fields name
/// its inputs and grids.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum TaskSpec {
    /// Witnessed estimates for a batch of estimators on one named set.
    Estimators { set: String, estimators: Vec<EstimatorSpec> },
    /// Estimator-level semi-homogeneity assertion on one named set.
    ScalingCheck { set: String, estimators: Vec<EstimatorSpec>, rho_grid: Vec<f64> },
    /// Delta profile of a named set.
    NuProfile { set: String, delta_grid: Vec<f64> },
    /// Scaling-degree regression of a named operator over a named base set.
    Degree {
        operator: String,
        estimator: EstimatorSpec,
        base: String,
        rho_grid: Vec<f64>,
    },
    /// Ball/sphere positivity biconditional for a named operator.
    Spherical {
        operator: String,
        estimator: EstimatorSpec,
        rho1: f64,
        rho0_grid: Vec<f64>,
        plan: SamplingPlan,
    },
    /// Sphere-to-ball zero propagation for a semi-homogeneous operator.
    ZeroPropagation {
        operator: String,
        estimator: EstimatorSpec,
        rho1: f64,
        rho_grid: Vec<f64>,
        plan: SamplingPlan,
        #[serde(default)]
        assume_semi_homogeneous: bool,
    },
    /// Condensing-rate table of a named operator.
    CondensingRate {
        operator: String,
        #[serde(default = "zero_func")]
        anchor: FuncSpec,
        mode: RateMode,
        estimator: EstimatorSpec,
        radius_grid: Vec<f64>,
        plan: SamplingPlan,
        rate_tol: Option<f64>,
    },
    /// Decomposition classification with verdict-agreement assertion.
    Classify {
        principal: String,
        condensing: String,
        #[serde(default = "zero_func")]
        anchor: FuncSpec,
        mode: DecompositionMode,
        estimator: EstimatorSpec,
        radius_grid: Vec<f64>,
        plan: SamplingPlan,
    },
    /// Improving verdict over a suite of named sets.
    Improving { operator: String, suite: Vec<String>, delta_grid: Vec<f64> },
    /// Improving verdict checked against the zero-class verdict of the
    /// trivial decomposition (operator, 0).
    ImprovingCorollary {
        operator: String,
        suite: Vec<String>,
        delta_grid: Vec<f64>,
        estimator: EstimatorSpec,
        radius_grid: Vec<f64>,
        plan: SamplingPlan,
    },
    /// Pointwise domination plus the induced nu ordering.
    Comparability {
        dominated: String,
        dominating: String,
        #[serde(default = "zero_func")]
        bound: FuncSpec,
        set: String,
        delta: f64,
    },
    /// Compact-like vs noncompact-like chi contrast of a linear operator.
    Contrast { operator: String, net_sizes: Vec<usize>, plan: SamplingPlan },
    /// Derivative-membership suite at a point or at infinity.
    DerivativeSuite {
        operator: String,
        anchor: AnchorSpec,
        net_sizes: Vec<usize>,
        radius_grid: Vec<f64>,
        plan: SamplingPlan,
    },
}

fn zero_func() -> FuncSpec {
    FuncSpec::Zero
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TaskConfig {
    pub name: String,
    #[serde(flatten)]
    pub spec: TaskSpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub space: SpaceConfig,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub generators: BTreeMap<String, GeneratorSpec>,
    #[serde(default)]
    pub operators: BTreeMap<String, OperatorSpec>,
    #[serde(default, rename = "tasks")]
    pub tasks: Vec<TaskConfig>,
}

impl ExperimentConfig {
    /// Parses and validates; an error here means nothing will be executed.
    pub fn from_toml(text: &str) -> Result<ExperimentConfig> {
        let config: ExperimentConfig =
            toml::from_str(text).map_err(|e| Error::Config(format!("parse error: {e}")))?;
        config.validate()?;
        Ok(config)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string_pretty(self).map_err(|e| Error::Config(format!("serialize error: {e}")))
    }

    pub fn validate(&self) -> Result<()> {
        if self.space.cells == 0 {
            return Err(Error::Config("space needs at least one cell".into()));
        }
        if !(self.space.total_measure > 0.0) {
            return Err(Error::Config("total_measure must be positive".into()));
        }
        for (name, op) in &self.operators {
            op.validate()
                .map_err(|e| Error::Config(format!("operator {name:?}: {e}")))?;
        }
        let mut names = std::collections::BTreeSet::new();
        for task in &self.tasks {
            if !names.insert(&task.name) {
                return Err(Error::Config(format!("duplicate task name {:?}", task.name)));
            }
            self.validate_task(task)?;
        }
        Ok(())
    }

    fn generator(&self, task: &str, name: &str) -> Result<&GeneratorSpec> {
        self.generators.get(name).ok_or_else(|| {
            Error::Config(format!("task {task:?} references unknown generator {name:?}"))
        })
    }

    fn operator(&self, task: &str, name: &str) -> Result<&OperatorSpec> {
        self.operators.get(name).ok_or_else(|| {
            Error::Config(format!("task {task:?} references unknown operator {name:?}"))
        })
    }

    fn validate_task(&self, task: &TaskConfig) -> Result<()> {
        let name = &task.name;
        match &task.spec {
            TaskSpec::Estimators { set, .. } => {
                self.generator(name, set)?;
            }
            TaskSpec::ScalingCheck { set, rho_grid, .. } => {
                self.generator(name, set)?;
                grid_positive(name, rho_grid)?;
            }
            TaskSpec::NuProfile { set, delta_grid } => {
                self.generator(name, set)?;
                grid_decreasing(name, delta_grid)?;
            }
            TaskSpec::Degree { operator, base, rho_grid, .. } => {
                self.operator(name, operator)?;
                self.generator(name, base)?;
                if rho_grid.len() < 3 || rho_grid.windows(2).any(|w| w[1] <= w[0]) {
                    return Err(Error::Config(format!(
                        "task {name:?}: rho grid must be strictly increasing with >= 3 points"
                    )));
                }
                grid_positive(name, rho_grid)?;
            }
            TaskSpec::Spherical { operator, rho1, rho0_grid, .. } => {
                self.operator(name, operator)?;
                if !(rho1 > &0.0) {
                    return Err(Error::Config(format!("task {name:?}: rho1 must be positive")));
                }
                grid_positive(name, rho0_grid)?;
            }
            TaskSpec::ZeroPropagation { operator, rho1, rho_grid, .. } => {
                self.operator(name, operator)?;
                if !(rho1 > &0.0) {
                    return Err(Error::Config(format!("task {name:?}: rho1 must be positive")));
                }
                grid_positive(name, rho_grid)?;
            }
            TaskSpec::CondensingRate { operator, mode, radius_grid, .. } => {
                self.operator(name, operator)?;
                grid_positive(name, radius_grid)?;
                check_rate_grid(name, *mode, radius_grid)?;
            }
            TaskSpec::Classify { principal, condensing, mode, radius_grid, .. } => {
                self.operator(name, principal)?;
                self.operator(name, condensing)?;
                grid_positive(name, radius_grid)?;
                let rate_mode = match mode {
                    DecompositionMode::Point => RateMode::BallsAtPoint,
                    DecompositionMode::Infinity => RateMode::AnnuliAtInfinity,
                };
                check_rate_grid(name, rate_mode, radius_grid)?;
            }
            TaskSpec::Improving { operator, suite, delta_grid } => {
                self.operator(name, operator)?;
                for s in suite {
                    self.generator(name, s)?;
                }
                grid_decreasing(name, delta_grid)?;
            }
            TaskSpec::ImprovingCorollary { operator, suite, delta_grid, radius_grid, .. } => {
                self.operator(name, operator)?;
                for s in suite {
                    self.generator(name, s)?;
                }
                grid_decreasing(name, delta_grid)?;
                check_rate_grid(name, RateMode::BallsAtPoint, radius_grid)?;
            }
            TaskSpec::Comparability { dominated, dominating, set, delta, .. } => {
                self.operator(name, dominated)?;
                self.operator(name, dominating)?;
                self.generator(name, set)?;
                if !(delta > &0.0) {
                    return Err(Error::Config(format!("task {name:?}: delta must be positive")));
                }
            }
            TaskSpec::Contrast { operator, net_sizes, .. } => {
                self.operator(name, operator)?;
                if net_sizes.is_empty() || net_sizes.windows(2).any(|w| w[1] <= w[0]) {
                    return Err(Error::Config(format!(
                        "task {name:?}: net sizes must be strictly increasing"
                    )));
                }
            }
            TaskSpec::DerivativeSuite { operator, anchor, net_sizes, radius_grid, .. } => {
                self.operator(name, operator)?;
                if net_sizes.is_empty() || net_sizes.windows(2).any(|w| w[1] <= w[0]) {
                    return Err(Error::Config(format!(
                        "task {name:?}: net sizes must be strictly increasing"
                    )));
                }
                grid_positive(name, radius_grid)?;
                let mode = match anchor {
                    AnchorSpec::Point { .. } => RateMode::BallsAtPoint,
                    AnchorSpec::Infinity => RateMode::AnnuliAtInfinity,
                };
                check_rate_grid(name, mode, radius_grid)?;
            }
        }
        Ok(())
    }

    /// Replaces every seed in the configuration (generators, nested
    /// generators, sampling plans) with the given value.
    pub fn override_seeds(&mut self, seed: u64) {
        for spec in self.generators.values_mut() {
            override_generator_seed(spec, seed);
        }
        for task in &mut self.tasks {
            match &mut task.spec {
                TaskSpec::Spherical { plan, .. }
                | TaskSpec::ZeroPropagation { plan, .. }
                | TaskSpec::CondensingRate { plan, .. }
                | TaskSpec::Classify { plan, .. }
                | TaskSpec::ImprovingCorollary { plan, .. }
                | TaskSpec::Contrast { plan, .. }
                | TaskSpec::DerivativeSuite { plan, .. } => plan.seed = seed,
                _ => {}
            }
        }
    }
}

fn override_generator_seed(spec: &mut GeneratorSpec, seed: u64) {
    match spec {
        GeneratorSpec::SmoothRandom { seed: s, .. }
        | GeneratorSpec::Ball { seed: s, .. }
        | GeneratorSpec::Sphere { seed: s, .. }
        | GeneratorSpec::Annulus { seed: s, .. } => *s = seed,
        GeneratorSpec::Union { parts } => {
            for p in parts {
                override_generator_seed(p, seed);
            }
        }
        GeneratorSpec::Scaled { base, .. }
        | GeneratorSpec::Translated { base, .. }
        | GeneratorSpec::Image { base, .. } => override_generator_seed(base, seed),
        GeneratorSpec::MinkowskiSum { left, right } => {
            override_generator_seed(left, seed);
            override_generator_seed(right, seed);
        }
        _ => {}
    }
}

fn grid_positive(task: &str, grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::Config(format!("task {task:?}: empty grid")));
    }
    if grid.iter().any(|v| !(v > &0.0)) {
        return Err(Error::Config(format!("task {task:?}: grid values must be positive")));
    }
    Ok(())
}

fn grid_decreasing(task: &str, grid: &[f64]) -> Result<()> {
    grid_positive(task, grid)?;
    if grid.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::Config(format!(
            "task {task:?}: grid must be strictly decreasing"
        )));
    }
    Ok(())
}

fn check_rate_grid(task: &str, mode: RateMode, grid: &[f64]) -> Result<()> {
    if grid.len() < 2 {
        return Err(Error::Config(format!("task {task:?}: rate grids need >= 2 radii")));
    }
    if mode.at_infinity() {
        if grid.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Config(format!(
                "task {task:?}: infinity-mode grids must be strictly increasing"
            )));
        }
    } else if grid.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::Config(format!(
            "task {task:?}: point-mode grids must be strictly decreasing"
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"
[space]
cells = 64
total_measure = 1.0

[generators.ball]
kind = "ball"
p = 2.0
radius = 1.0
count = 8
seed = 7

[operators.f1]
kind = "power-superposition"
a = 1.0
gamma = 1.0
q = 2.0
p = 2.0

[[tasks]]
name = "values"
kind = "estimators"
set = "ball"
estimators = [{ kind = "diameter" }, { kind = "nu", delta = 0.015625 }]

[[tasks]]
name = "degree"
kind = "degree"
operator = "f1"
estimator = { kind = "nu", delta = 0.015625 }
base = "ball"
rho_grid = [0.5, 1.0, 2.0]
"#;

    #[test]
    fn minimal_config_parses_and_validates() {
        let config = ExperimentConfig::from_toml(MINIMAL).unwrap();
        assert_eq!(config.space.cells, 64);
        assert_eq!(config.tasks.len(), 2);
        assert_eq!(config.tolerances, Tolerances::default());
    }

    #[test]
    fn dangling_names_are_rejected() {
        let bad = MINIMAL.replace("operator = \"f1\"", "operator = \"missing\"");
        let err = ExperimentConfig::from_toml(&bad).unwrap_err();
        assert!(err.to_string().contains("unknown operator"), "{err}");

        let bad = MINIMAL.replace("set = \"ball\"", "set = \"nope\"");
        let err = ExperimentConfig::from_toml(&bad).unwrap_err();
        assert!(err.to_string().contains("unknown generator"), "{err}");
    }

    #[test]
    fn bad_grids_are_rejected_before_execution() {
        let bad = MINIMAL.replace("rho_grid = [0.5, 1.0, 2.0]", "rho_grid = [2.0, 1.0, 0.5]");
        assert!(ExperimentConfig::from_toml(&bad).is_err());
    }

    #[test]
    fn duplicate_task_names_are_rejected() {
        let bad = MINIMAL.replace("name = \"degree\"", "name = \"values\"");
        assert!(ExperimentConfig::from_toml(&bad).is_err());
    }

    #[test]
    fn seed_override_reaches_nested_generators() {
        let mut config = ExperimentConfig::from_toml(MINIMAL).unwrap();
        config.generators.insert(
            "scaled".into(),
            GeneratorSpec::Scaled {
                factor: 2.0,
                base: Box::new(config.generators["ball"].clone()),
            },
        );
        config.override_seeds(99);
        match &config.generators["ball"] {
            GeneratorSpec::Ball { seed, .. } => assert_eq!(*seed, 99),
            _ => unreachable!(),
        }
        match &config.generators["scaled"] {
            GeneratorSpec::Scaled { base, .. } => match base.as_ref() {
                GeneratorSpec::Ball { seed, .. } => assert_eq!(*seed, 99),
                _ => unreachable!(),
            },
            _ => unreachable!(),
        }
    }

    #[test]
    fn config_roundtrips_through_toml() {
        let config = ExperimentConfig::from_toml(MINIMAL).unwrap();
        let text = config.to_toml().unwrap();
        let again = ExperimentConfig::from_toml(&text).unwrap();
        assert_eq!(config, again);
    }
}
