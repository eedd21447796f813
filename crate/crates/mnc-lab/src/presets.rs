//! Named experiment presets: the canonical desk-scale experiments, each a
//! complete TOML configuration runnable by name. CI runs the acceptance
//! experiments through these.

use crate::config::ExperimentConfig;
use crate::error::{Error, Result};

pub struct Preset {
    pub name: &'static str,
    pub description: &'static str,
    pub toml: &'static str,
}

pub const PRESETS: &[Preset] = &[
    Preset {
        name: "mnc-basics",
        description: "estimator values, witnesses, scaling exactness, and delta profiles on the canonical families",
        toml: MNC_BASICS,
    },
    Preset {
        name: "degree-F1",
        description: "scaling-degree recovery q/p of the power superposition under the nonequiabsolute-continuity estimator",
        toml: DEGREE_F1,
    },
    Preset {
        name: "spherical-nu",
        description: "ball/sphere positivity biconditional under nu for the canonical operator suite",
        toml: SPHERICAL_NU,
    },
    Preset {
        name: "lemma1",
        description: "sphere-to-ball zero propagation for semi-homogeneous operators",
        toml: LEMMA1,
    },
    Preset {
        name: "theorem1-point",
        description: "condensing-class verdict agreement for decompositions at a point",
        toml: THEOREM1_POINT,
    },
    Preset {
        name: "theorem1-infinity",
        description: "condensing-class verdict agreement for a decomposition at infinity",
        toml: THEOREM1_INFINITY,
    },
    Preset {
        name: "theorem2-frechet",
        description: "derivative compactness contrast against condensing rates at a point",
        toml: THEOREM2_FRECHET,
    },
    Preset {
        name: "theorem2-contrast",
        description: "chi-contrast decay tables for identity, wide gaussian, and rank-one averaging at dimension 1024",
        toml: THEOREM2_CONTRAST,
    },
    Preset {
        name: "theorem3-improving",
        description: "improving verdicts checked against the zero-class corollary on six operators",
        toml: THEOREM3_IMPROVING,
    },
    Preset {
        name: "comparability",
        description: "pointwise domination and the induced nu ordering",
        toml: COMPARABILITY,
    },
];

/// (name, one-line description) for every preset.
pub fn list_presets() -> Vec<(&'static str, &'static str)> {
    PRESETS.iter().map(|p| (p.name, p.description)).collect()
}

pub fn preset_toml(name: &str) -> Result<&'static str> {
    PRESETS
        .iter()
        .find(|p| p.name == name)
        .map(|p| p.toml)
        .ok_or_else(|| Error::Config(format!("unknown preset {name:?}")))
}

pub fn preset_config(name: &str) -> Result<ExperimentConfig> {
    ExperimentConfig::from_toml(preset_toml(name)?)
}

const MNC_BASICS: &str = r#"
[space]
cells = 1024
total_measure = 1.0

[generators.spikes]
kind = "spike"
p = 2.0
count = 10

[generators.indicators]
kind = "disjoint-indicator"
p = 2.0
count = 8

[generators.ball]
kind = "ball"
p = 2.0
radius = 1.0
count = 24
seed = 7

[generators.smooth]
kind = "smooth-random"
p = 2.0
count = 6
seed = 3
norm = 1.0

[[tasks]]
name = "ball-estimates"
kind = "estimators"
set = "ball"
estimators = [
  { kind = "diameter" },
  { kind = "chi", net_size = 8 },
  { kind = "beta", packing_size = 8 },
  { kind = "nu", delta = 0.0009765625 },
]

[[tasks]]
name = "scaling-spikes"
kind = "scaling-check"
set = "spikes"
estimators = [
  { kind = "diameter" },
  { kind = "chi", net_size = 8 },
  { kind = "beta", packing_size = 8 },
  { kind = "nu", delta = 0.0009765625 },
]
rho_grid = [0.25, 0.5, 2.0, 4.0]

[[tasks]]
name = "scaling-indicators"
kind = "scaling-check"
set = "indicators"
estimators = [
  { kind = "diameter" },
  { kind = "chi", net_size = 8 },
  { kind = "beta", packing_size = 8 },
  { kind = "nu", delta = 0.0009765625 },
]
rho_grid = [0.25, 0.5, 2.0, 4.0]

[[tasks]]
name = "scaling-ball"
kind = "scaling-check"
set = "ball"
estimators = [
  { kind = "diameter" },
  { kind = "chi", net_size = 8 },
  { kind = "beta", packing_size = 8 },
  { kind = "nu", delta = 0.0009765625 },
]
rho_grid = [0.25, 0.5, 2.0, 4.0]

[[tasks]]
name = "profile-spikes"
kind = "nu-profile"
set = "spikes"
delta_grid = [0.5, 0.25, 0.125, 0.0625, 0.03125, 0.015625, 0.0078125, 0.00390625, 0.001953125, 0.0009765625]

[[tasks]]
name = "profile-smooth"
kind = "nu-profile"
set = "smooth"
delta_grid = [0.5, 0.25, 0.125, 0.0625, 0.03125, 0.015625, 0.0078125, 0.00390625, 0.001953125, 0.0009765625]
"#;

const DEGREE_F1: &str = r#"
[space]
cells = 1024
total_measure = 1.0

[generators.ball-q1]
kind = "ball"
p = 1.0
radius = 1.0
count = 16
seed = 7

[generators.ball-q2]
kind = "ball"
p = 2.0
radius = 1.0
count = 16
seed = 7

[generators.ball-q4]
kind = "ball"
p = 4.0
radius = 1.0
count = 16
seed = 7

[operators.f1-q1-p2]
kind = "power-superposition"
a = 1.0
gamma = 0.5
q = 1.0
p = 2.0

[operators.f1-q2-p2]
kind = "power-superposition"
a = 1.0
gamma = 1.0
q = 2.0
p = 2.0

[operators.f1-q4-p2]
kind = "power-superposition"
a = 1.0
gamma = 2.0
q = 4.0
p = 2.0

[operators.f1-q2-p1]
kind = "power-superposition"
a = 1.0
gamma = 2.0
q = 2.0
p = 1.0

[[tasks]]
name = "degree-q1-p2"
kind = "degree"
operator = "f1-q1-p2"
estimator = { kind = "nu", delta = 0.0009765625 }
base = "ball-q1"
rho_grid = [0.25, 0.5, 1.0, 2.0, 4.0]

[[tasks]]
name = "degree-q2-p2"
kind = "degree"
operator = "f1-q2-p2"
estimator = { kind = "nu", delta = 0.0009765625 }
base = "ball-q2"
rho_grid = [0.25, 0.5, 1.0, 2.0, 4.0]

[[tasks]]
name = "degree-q4-p2"
kind = "degree"
operator = "f1-q4-p2"
estimator = { kind = "nu", delta = 0.0009765625 }
base = "ball-q4"
rho_grid = [0.25, 0.5, 1.0, 2.0, 4.0]

[[tasks]]
name = "degree-q2-p1"
kind = "degree"
operator = "f1-q2-p1"
estimator = { kind = "nu", delta = 0.0009765625 }
base = "ball-q2"
rho_grid = [0.25, 0.5, 1.0, 2.0, 4.0]
"#;

const SPHERICAL_NU: &str = r#"
[space]
cells = 1024
total_measure = 1.0

[operators.f1]
kind = "power-superposition"
a = 1.0
gamma = 1.0
q = 2.0
p = 2.0

[operators.averaging]
kind = "hammerstein"
kernel = { kind = "constant", value = 1.0 }
a = 1.0
gamma = 1.0
q = 2.0
p = 2.0

[operators.zero]
kind = "scalar-multiple"
factor = 0.0
inner = { kind = "identity", q = 2.0, p = 2.0 }

[operators.identity]
kind = "identity"
q = 2.0
p = 2.0

[[tasks]]
name = "spherical-f1"
kind = "spherical"
operator = "f1"
estimator = { kind = "nu", delta = 0.0009765625 }
rho1 = 1.0
rho0_grid = [0.03125, 0.0625, 0.125, 0.25, 0.5, 1.0]
plan = { count = 16, seed = 11 }

[[tasks]]
name = "spherical-averaging"
kind = "spherical"
operator = "averaging"
estimator = { kind = "nu", delta = 0.0009765625 }
rho1 = 1.0
rho0_grid = [0.03125, 0.0625, 0.125, 0.25, 0.5, 1.0]
plan = { count = 16, seed = 11 }

[[tasks]]
name = "spherical-zero"
kind = "spherical"
operator = "zero"
estimator = { kind = "nu", delta = 0.0009765625 }
rho1 = 1.0
rho0_grid = [0.03125, 0.0625, 0.125, 0.25, 0.5, 1.0]
plan = { count = 16, seed = 11 }

[[tasks]]
name = "spherical-identity"
kind = "spherical"
operator = "identity"
estimator = { kind = "nu", delta = 0.0009765625 }
rho1 = 1.0
rho0_grid = [0.03125, 0.0625, 0.125, 0.25, 0.5, 1.0]
plan = { count = 16, seed = 11 }
"#;

const LEMMA1: &str = r#"
[space]
cells = 1024
total_measure = 1.0

[operators.averaging]
kind = "hammerstein"
kernel = { kind = "constant", value = 1.0 }
a = 1.0
gamma = 1.0
q = 2.0
p = 2.0

[operators.f1]
kind = "power-superposition"
a = 1.0
gamma = 1.0
q = 2.0
p = 2.0

[[tasks]]
name = "propagation-averaging"
kind = "zero-propagation"
operator = "averaging"
estimator = { kind = "nu", delta = 0.0009765625 }
rho1 = 1.0
rho_grid = [0.125, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0]
plan = { count = 16, seed = 11 }

[[tasks]]
name = "propagation-f1"
kind = "zero-propagation"
operator = "f1"
estimator = { kind = "nu", delta = 0.0009765625 }
rho1 = 1.0
rho_grid = [0.125, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0]
plan = { count = 16, seed = 11 }
"#;

const THEOREM1_POINT: &str = r#"
[space]
cells = 1024
total_measure = 1.0

[operators.averaging]
kind = "hammerstein"
kernel = { kind = "constant", value = 1.0 }
a = 1.0
gamma = 1.0
q = 2.0
p = 2.0

[operators.norm-weight]
kind = "norm-weighted"
alpha = 1.0
inner = { kind = "identity", q = 2.0, p = 2.0 }

[operators.f1]
kind = "power-superposition"
a = 1.0
gamma = 1.0
q = 2.0
p = 2.0

[operators.zero]
kind = "scalar-multiple"
factor = 0.0
inner = { kind = "identity", q = 2.0, p = 2.0 }

[[tasks]]
name = "classify-positive"
kind = "classify"
principal = "averaging"
condensing = "norm-weight"
mode = "point"
estimator = { kind = "nu", delta = 0.0009765625 }
radius_grid = [0.5, 0.25, 0.125, 0.0625, 0.03125, 0.015625, 0.0078125, 0.00390625, 0.001953125, 0.0009765625, 0.00048828125, 0.000244140625]
plan = { count = 16, seed = 5 }

[[tasks]]
name = "classify-negative"
kind = "classify"
principal = "f1"
condensing = "zero"
mode = "point"
estimator = { kind = "nu", delta = 0.0009765625 }
radius_grid = [0.5, 0.25, 0.125, 0.0625, 0.03125, 0.015625, 0.0078125, 0.00390625, 0.001953125, 0.0009765625, 0.00048828125, 0.000244140625]
plan = { count = 16, seed = 5 }

[[tasks]]
name = "classify-trivial"
kind = "classify"
principal = "zero"
condensing = "zero"
mode = "point"
estimator = { kind = "nu", delta = 0.0009765625 }
radius_grid = [0.5, 0.25, 0.125, 0.0625, 0.03125, 0.015625, 0.0078125, 0.00390625, 0.001953125, 0.0009765625, 0.00048828125, 0.000244140625]
plan = { count = 16, seed = 5 }
"#;

const THEOREM1_INFINITY: &str = r#"
[space]
cells = 1024
total_measure = 1.0

[operators.rank-one]
kind = "integral"
kernel = { kind = "constant", value = 1.0 }
q = 2.0
p = 2.0

[operators.shrinking-weight]
kind = "norm-weighted"
alpha = -0.5
inner = { kind = "identity", q = 2.0, p = 2.0 }

[[tasks]]
name = "classify-infinity"
kind = "classify"
principal = "rank-one"
condensing = "shrinking-weight"
mode = "infinity"
estimator = { kind = "nu", delta = 0.0009765625 }
radius_grid = [2.0, 4.0, 8.0, 16.0, 32.0, 64.0, 128.0, 256.0, 512.0, 1024.0, 2048.0, 4096.0, 8192.0, 16384.0, 32768.0, 65536.0, 131072.0, 262144.0, 524288.0, 1048576.0, 2097152.0, 4194304.0]
plan = { count = 16, seed = 5 }
"#;

const THEOREM2_FRECHET: &str = r#"
[space]
cells = 1024
total_measure = 1.0

[operators.smoothing]
kind = "hammerstein"
kernel = { kind = "gaussian", width = 0.5 }
a = 0.5
gamma = 2.0
q = 2.0
p = 2.0

[operators.identity]
kind = "identity"
q = 2.0
p = 2.0

[operators.rank-one]
kind = "integral"
kernel = { kind = "constant", value = 1.0 }
q = 2.0
p = 2.0

[[tasks]]
name = "suite-smoothing"
kind = "derivative-suite"
operator = "smoothing"
anchor = { at = "point", func = { kind = "constant", value = 1.0 } }
net_sizes = [2, 4, 8, 16, 32]
radius_grid = [0.5, 0.25, 0.125, 0.0625, 0.03125, 0.015625]
plan = { count = 48, seed = 21 }

[[tasks]]
name = "suite-identity"
kind = "derivative-suite"
operator = "identity"
anchor = { at = "point", func = { kind = "zero" } }
net_sizes = [2, 4, 8, 16, 32]
radius_grid = [0.5, 0.25, 0.125, 0.0625, 0.03125, 0.015625]
plan = { count = 48, seed = 21 }

[[tasks]]
name = "suite-rank-one"
kind = "derivative-suite"
operator = "rank-one"
anchor = { at = "point", func = { kind = "zero" } }
net_sizes = [2, 4, 8, 16, 32]
radius_grid = [0.5, 0.25, 0.125, 0.0625, 0.03125, 0.015625]
plan = { count = 48, seed = 21 }
"#;

const THEOREM2_CONTRAST: &str = r#"
[space]
cells = 1024
total_measure = 1.0

[operators.identity]
kind = "identity"
q = 2.0
p = 2.0

[operators.gaussian-wide]
kind = "integral"
kernel = { kind = "gaussian", width = 0.25 }
q = 2.0
p = 2.0

[operators.rank-one]
kind = "integral"
kernel = { kind = "constant", value = 1.0 }
q = 2.0
p = 2.0

[[tasks]]
name = "contrast-identity"
kind = "contrast"
operator = "identity"
net_sizes = [2, 4, 8, 16, 32]
plan = { count = 512, seed = 17 }

[[tasks]]
name = "contrast-gaussian-wide"
kind = "contrast"
operator = "gaussian-wide"
net_sizes = [2, 4, 8, 16, 32]
plan = { count = 512, seed = 17 }

[[tasks]]
name = "contrast-rank-one"
kind = "contrast"
operator = "rank-one"
net_sizes = [2, 4, 8, 16, 32]
plan = { count = 512, seed = 17 }
"#;

const THEOREM3_IMPROVING: &str = r#"
[space]
cells = 1024
total_measure = 1.0

[generators.spike-ball]
kind = "ball"
p = 2.0
radius = 1.0
count = 16
seed = 7

[generators.spikes]
kind = "spike"
p = 2.0
count = 10

[generators.spike-ball-q1]
kind = "ball"
p = 1.0
radius = 1.0
count = 16
seed = 7

[generators.spikes-q1]
kind = "spike"
p = 1.0
count = 10

[operators.zero]
kind = "scalar-multiple"
factor = 0.0
inner = { kind = "identity", q = 2.0, p = 2.0 }

[operators.identity]
kind = "identity"
q = 2.0
p = 2.0

[operators.f1-q2-p2]
kind = "power-superposition"
a = 1.0
gamma = 1.0
q = 2.0
p = 2.0

[operators.f1-q1-p2]
kind = "power-superposition"
a = 1.0
gamma = 0.5
q = 1.0
p = 2.0

[operators.averaging]
kind = "hammerstein"
kernel = { kind = "constant", value = 1.0 }
a = 1.0
gamma = 1.0
q = 2.0
p = 2.0

[operators.gaussian-smoother]
kind = "integral"
kernel = { kind = "gaussian", width = 0.1 }
q = 2.0
p = 2.0

[[tasks]]
name = "corollary-zero"
kind = "improving-corollary"
operator = "zero"
suite = ["spike-ball", "spikes"]
delta_grid = [0.5, 0.25, 0.125, 0.0625, 0.03125, 0.015625, 0.0078125, 0.00390625, 0.001953125, 0.0009765625]
estimator = { kind = "nu", delta = 0.0009765625 }
radius_grid = [0.5, 0.25, 0.125, 0.0625, 0.03125, 0.015625, 0.0078125, 0.00390625, 0.001953125, 0.0009765625, 0.00048828125, 0.000244140625]
plan = { count = 16, seed = 5 }

[[tasks]]
name = "corollary-identity"
kind = "improving-corollary"
operator = "identity"
suite = ["spike-ball", "spikes"]
delta_grid = [0.5, 0.25, 0.125, 0.0625, 0.03125, 0.015625, 0.0078125, 0.00390625, 0.001953125, 0.0009765625]
estimator = { kind = "nu", delta = 0.0009765625 }
radius_grid = [0.5, 0.25, 0.125, 0.0625, 0.03125, 0.015625, 0.0078125, 0.00390625, 0.001953125, 0.0009765625, 0.00048828125, 0.000244140625]
plan = { count = 16, seed = 5 }

[[tasks]]
name = "corollary-f1-q2-p2"
kind = "improving-corollary"
operator = "f1-q2-p2"
suite = ["spike-ball", "spikes"]
delta_grid = [0.5, 0.25, 0.125, 0.0625, 0.03125, 0.015625, 0.0078125, 0.00390625, 0.001953125, 0.0009765625]
estimator = { kind = "nu", delta = 0.0009765625 }
radius_grid = [0.5, 0.25, 0.125, 0.0625, 0.03125, 0.015625, 0.0078125, 0.00390625, 0.001953125, 0.0009765625, 0.00048828125, 0.000244140625]
plan = { count = 16, seed = 5 }

[[tasks]]
name = "corollary-f1-q1-p2"
kind = "improving-corollary"
operator = "f1-q1-p2"
suite = ["spike-ball-q1", "spikes-q1"]
delta_grid = [0.5, 0.25, 0.125, 0.0625, 0.03125, 0.015625, 0.0078125, 0.00390625, 0.001953125, 0.0009765625]
estimator = { kind = "nu", delta = 0.0009765625 }
radius_grid = [0.5, 0.25, 0.125, 0.0625, 0.03125, 0.015625, 0.0078125, 0.00390625, 0.001953125, 0.0009765625, 0.00048828125, 0.000244140625]
plan = { count = 16, seed = 5 }

[[tasks]]
name = "corollary-averaging"
kind = "improving-corollary"
operator = "averaging"
suite = ["spike-ball", "spikes"]
delta_grid = [0.5, 0.25, 0.125, 0.0625, 0.03125, 0.015625, 0.0078125, 0.00390625, 0.001953125, 0.0009765625]
estimator = { kind = "nu", delta = 0.0009765625 }
radius_grid = [0.5, 0.25, 0.125, 0.0625, 0.03125, 0.015625, 0.0078125, 0.00390625, 0.001953125, 0.0009765625, 0.00048828125, 0.000244140625]
plan = { count = 16, seed = 5 }

[[tasks]]
name = "corollary-gaussian"
kind = "improving-corollary"
operator = "gaussian-smoother"
suite = ["spike-ball", "spikes"]
delta_grid = [0.5, 0.25, 0.125, 0.0625, 0.03125, 0.015625, 0.0078125, 0.00390625, 0.001953125, 0.0009765625]
estimator = { kind = "nu", delta = 0.0009765625 }
radius_grid = [0.5, 0.25, 0.125, 0.0625, 0.03125, 0.015625, 0.0078125, 0.00390625, 0.001953125, 0.0009765625, 0.00048828125, 0.000244140625]
plan = { count = 16, seed = 5 }
"#;

const COMPARABILITY: &str = r#"
[space]
cells = 1024
total_measure = 1.0

[generators.ball]
kind = "ball"
p = 2.0
radius = 1.0
count = 16
seed = 3

[operators.f1]
kind = "power-superposition"
a = 1.0
gamma = 1.0
q = 2.0
p = 2.0

[operators.half-f1]
kind = "scalar-multiple"
factor = 0.5
inner = { kind = "power-superposition", a = 1.0, gamma = 1.0, q = 2.0, p = 2.0 }

[operators.double-f1]
kind = "scalar-multiple"
factor = 2.0
inner = { kind = "power-superposition", a = 1.0, gamma = 1.0, q = 2.0, p = 2.0 }

[operators.perturbed-f1]
kind = "sum"
left = { kind = "power-superposition", a = 1.0, gamma = 1.0, q = 2.0, p = 2.0 }
right = { kind = "general-superposition", map = "clamp", bound = 0.25, q = 2.0, p = 2.0 }

[[tasks]]
name = "dominated-half"
kind = "comparability"
dominated = "half-f1"
dominating = "f1"
set = "ball"
delta = 0.0009765625

[[tasks]]
name = "violating-double"
kind = "comparability"
dominated = "double-f1"
dominating = "f1"
set = "ball"
delta = 0.0009765625

[[tasks]]
name = "bounded-perturbation"
kind = "comparability"
dominated = "perturbed-f1"
dominating = "f1"
bound = { kind = "constant", value = 0.25 }
set = "ball"
delta = 0.0009765625
"#;
