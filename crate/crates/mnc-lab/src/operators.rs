//! The operator zoo T: L_q -> L_p and its derivatives.
//!
//! An [`OperatorSpec`] is a composable, serializable description. Applying an
//! operator first compiles the description against a measure space (this is
//! where integral kernels are materialized as dense matrices) and then maps
//! functions; [`apply_set`] compiles once and fans out over a whole sample.
//!
//! Exponent bookkeeping is enforced, not assumed: every apply checks that the
//! argument's Lp exponent matches the operator's declared domain. `identity`
//! doubles as the canonical embedding L_q -> L_p (values copied, exponent
//! retagged), which the decomposition experiments need when q != p.
//!
//! Kernels are dense matrices at desk scale; clarity and bit-reproducibility
//! over speed.

use serde::{Deserialize, Serialize};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::sets::{self, FuncSpec, GeneratorSpec, SampleSet};
use crate::space::{self, Func, MeasureSpace};

/// Named pointwise nonlinearities for the general superposition kind.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "map", rename_all = "kebab-case", deny_unknown_fields)]
pub enum PointwiseMap {
    /// t -> offset + slope * t
    Affine { offset: f64, slope: f64 },
    /// t -> clamp(t, -bound, bound); a bounded perturbation.
    Clamp { bound: f64 },
}

impl PointwiseMap {
    fn eval(&self, x: f64) -> f64 {
        match *self {
            PointwiseMap::Affine { offset, slope } => offset + slope * x,
            PointwiseMap::Clamp { bound } => x.clamp(-bound, bound),
        }
    }
}

/// Kernel description for the integral kind.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum KernelSpec {
    /// k(s, t) = value; with value 1 this is the averaging kernel.
    Constant { value: f64 },
    /// Row-normalized Gaussian bump exp(-(x_s - x_t)^2 / (2 width^2)) on unit
    /// interval midpoints; narrow widths approach the identity, wide widths
    /// approach plain averaging. Rows integrate to 1.
    Gaussian { width: f64 },
    /// k(s, t) = left(s) * right(t).
    RankOne { left: FuncSpec, right: FuncSpec },
    /// Explicit row-major matrix, one row per output cell.
    Dense { rows: Vec<Vec<f64>> },
    /// Row-major CSV matrix file, one row per output cell.
    CsvFile { path: String },
}

/// Materialized kernel with the measure weights folded in:
/// stores k(s,t) * mu(t) row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Kernel {
    n: usize,
    weighted: Vec<f64>,
}

impl Kernel {
    pub fn materialize(spec: &KernelSpec, space: &Arc<MeasureSpace>) -> Result<Kernel> {
        let n = space.cell_count();
        let raw: Vec<f64> = match spec {
            KernelSpec::Constant { value } => {
                if !value.is_finite() {
                    return Err(Error::invalid("kernel value must be finite"));
                }
                vec![*value; n * n]
            }
            KernelSpec::Gaussian { width } => {
                if !(*width > 0.0) {
                    return Err(Error::invalid("gaussian kernel width must be positive"));
                }
                let xs: Vec<f64> = (0..n).map(|i| (i as f64 + 0.5) / n as f64).collect();
                let mut rows = vec![0.0; n * n];
                for s in 0..n {
                    let mut row: Vec<f64> = (0..n)
                        .map(|t| {
                            let d = xs[s] - xs[t];
                            scalar_exp(-d * d / (2.0 * width * width))
                        })
                        .collect();
                    let weighted: Vec<f64> =
                        row.iter().zip(space.measures()).map(|(&k, &m)| k * m).collect();
                    let integral = space::pairwise_sum(&weighted);
                    for v in row.iter_mut() {
                        *v /= integral;
                    }
                    rows[s * n..(s + 1) * n].copy_from_slice(&row);
                }
                rows
            }
            KernelSpec::RankOne { left, right } => {
                let phi = left.materialize(space, 1.0)?;
                let psi = right.materialize(space, 1.0)?;
                let mut rows = vec![0.0; n * n];
                for s in 0..n {
                    for t in 0..n {
                        rows[s * n + t] = phi.values()[s] * psi.values()[t];
                    }
                }
                rows
            }
            KernelSpec::Dense { rows } => {
                if rows.len() != n || rows.iter().any(|r| r.len() != n) {
                    return Err(Error::invalid(format!(
                        "dense kernel must be {n}x{n} for this space"
                    )));
                }
                rows.iter().flatten().copied().collect()
            }
            KernelSpec::CsvFile { path } => {
                let text = std::fs::read_to_string(path)?;
                let rows = parse_kernel_csv(&text)?;
                if rows.len() != n || rows.iter().any(|r| r.len() != n) {
                    return Err(Error::invalid(format!(
                        "kernel file {path} is not a {n}x{n} matrix"
                    )));
                }
                rows.into_iter().flatten().collect()
            }
        };
        if raw.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("kernel contains non-finite values"));
        }
        let weighted: Vec<f64> = raw
            .chunks(n)
            .flat_map(|row| row.iter().zip(space.measures()).map(|(&k, &m)| k * m))
            .collect();
        Ok(Kernel { n, weighted })
    }

    /// (K u)(s) = sum over t of k(s,t) * u(t) * mu(t), pairwise-summed.
    pub fn apply(&self, values: &[f64]) -> Vec<f64> {
        let mut scratch = vec![0.0; self.n];
        (0..self.n)
            .map(|s| {
                let row = &self.weighted[s * self.n..(s + 1) * self.n];
                for (dst, (&k, &u)) in scratch.iter_mut().zip(row.iter().zip(values)) {
                    *dst = k * u;
                }
                space::pairwise_sum(&scratch)
            })
            .collect()
    }

    #[cfg(test)]
    pub(crate) fn weighted_entries(&self) -> &[f64] {
        &self.weighted
    }
}

// Opaque to the auto-vectorizer: vectorized libm exp is not bit-identical to
// the scalar one across optimization levels, and kernel golden files demand
// identical bits from every build.
#[inline(never)]
fn scalar_exp(x: f64) -> f64 {
    x.exp()
}

/// Parses a row-major CSV matrix (no header).
pub fn parse_kernel_csv(text: &str) -> Result<Vec<Vec<f64>>> {
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|line| {
            line.split(',')
                .map(|tok| {
                    tok.trim()
                        .parse::<f64>()
                        .map_err(|e| Error::invalid(format!("bad kernel entry {tok:?}: {e}")))
                })
                .collect()
        })
        .collect()
}

/// Composable description of a continuous operator T: L_q -> L_p.
// no deny_unknown_fields: the general-superposition variant flattens its map
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum OperatorSpec {
    /// Values copied, exponent retagged from q to p.
    Identity { q: f64, p: f64 },
    /// u -> a * sgn(u) |u|^gamma cellwise, with sgn(0) = 0.
    PowerSuperposition { a: f64, gamma: f64, q: f64, p: f64 },
    /// u -> map(u) cellwise.
    GeneralSuperposition {
        #[serde(flatten)]
        map: PointwiseMap,
        q: f64,
        p: f64,
    },
    /// Linear integral operator with the given kernel.
    Integral { kernel: KernelSpec, q: f64, p: f64 },
    /// Integral kernel composed after the power superposition.
    Hammerstein { kernel: KernelSpec, a: f64, gamma: f64, q: f64, p: f64 },
    Sum { left: Box<OperatorSpec>, right: Box<OperatorSpec> },
    ScalarMultiple { factor: f64, inner: Box<OperatorSpec> },
    /// u -> ||u||_q^alpha * inner(u); at u = 0 with alpha < 0 the output is
    /// the zero function by convention.
    NormWeighted { alpha: f64, inner: Box<OperatorSpec> },
    /// u -> inner(anchor + u).
    ShiftArgument { anchor: FuncSpec, inner: Box<OperatorSpec> },
    /// u -> inner(u) - inner(anchor).
    SubtractValue { anchor: FuncSpec, inner: Box<OperatorSpec> },
}

impl OperatorSpec {
    pub fn identity(q: f64, p: f64) -> OperatorSpec {
        OperatorSpec::Identity { q, p }
    }

    pub fn power_superposition(a: f64, gamma: f64, q: f64, p: f64) -> Result<OperatorSpec> {
        if !(gamma > 0.0) {
            return Err(Error::invalid(format!(
                "superposition exponent must be positive, got {gamma}"
            )));
        }
        if !(a >= 0.0) {
            return Err(Error::invalid("superposition amplitude must be non-negative"));
        }
        Ok(OperatorSpec::PowerSuperposition { a, gamma, q, p })
    }

    /// The canonical power superposition with the exponent pinned to q/p.
    pub fn f1(a: f64, q: f64, p: f64) -> Result<OperatorSpec> {
        Self::power_superposition(a, q / p, q, p)
    }

    pub fn integral(kernel: KernelSpec, q: f64, p: f64) -> OperatorSpec {
        OperatorSpec::Integral { kernel, q, p }
    }

    pub fn hammerstein(
        kernel: KernelSpec,
        a: f64,
        gamma: f64,
        q: f64,
        p: f64,
    ) -> Result<OperatorSpec> {
        if !(gamma > 0.0) {
            return Err(Error::invalid("hammerstein exponent must be positive"));
        }
        Ok(OperatorSpec::Hammerstein { kernel, a, gamma, q, p })
    }

    pub fn zero(q: f64, p: f64) -> OperatorSpec {
        OperatorSpec::ScalarMultiple {
            factor: 0.0,
            inner: Box::new(OperatorSpec::Identity { q, p }),
        }
    }

    pub fn sum(left: OperatorSpec, right: OperatorSpec) -> OperatorSpec {
        OperatorSpec::Sum { left: Box::new(left), right: Box::new(right) }
    }

    pub fn scalar_multiple(factor: f64, inner: OperatorSpec) -> OperatorSpec {
        OperatorSpec::ScalarMultiple { factor, inner: Box::new(inner) }
    }

    pub fn norm_weighted(alpha: f64, inner: OperatorSpec) -> OperatorSpec {
        OperatorSpec::NormWeighted { alpha, inner: Box::new(inner) }
    }

    pub fn shift_argument(inner: OperatorSpec, anchor: FuncSpec) -> OperatorSpec {
        OperatorSpec::ShiftArgument { anchor, inner: Box::new(inner) }
    }

    pub fn subtract_value(inner: OperatorSpec, anchor: FuncSpec) -> OperatorSpec {
        OperatorSpec::SubtractValue { anchor, inner: Box::new(inner) }
    }

    /// (domain, codomain) exponents, validating chain consistency.
    pub fn exponents(&self) -> Result<(f64, f64)> {
        match self {
            OperatorSpec::Identity { q, p }
            | OperatorSpec::PowerSuperposition { q, p, .. }
            | OperatorSpec::GeneralSuperposition { q, p, .. }
            | OperatorSpec::Integral { q, p, .. }
            | OperatorSpec::Hammerstein { q, p, .. } => Ok((*q, *p)),
            OperatorSpec::Sum { left, right } => {
                let l = left.exponents()?;
                let r = right.exponents()?;
                if l != r {
                    return Err(Error::invalid(format!(
                        "sum children disagree on exponents: {l:?} vs {r:?}"
                    )));
                }
                Ok(l)
            }
            OperatorSpec::ScalarMultiple { inner, .. }
            | OperatorSpec::NormWeighted { inner, .. }
            | OperatorSpec::ShiftArgument { inner, .. }
            | OperatorSpec::SubtractValue { inner, .. } => inner.exponents(),
        }
    }

    pub fn domain_exponent(&self) -> Result<f64> {
        Ok(self.exponents()?.0)
    }

    pub fn codomain_exponent(&self) -> Result<f64> {
        Ok(self.exponents()?.1)
    }

    /// Validates the description (exponent chain, parameter ranges).
    pub fn validate(&self) -> Result<()> {
        self.exponents()?;
        match self {
            OperatorSpec::PowerSuperposition { a, gamma, .. } => {
                if !(*gamma > 0.0) {
                    return Err(Error::invalid("superposition exponent must be positive"));
                }
                if !(*a >= 0.0) {
                    return Err(Error::invalid("superposition amplitude must be non-negative"));
                }
            }
            OperatorSpec::Hammerstein { gamma, .. } => {
                if !(*gamma > 0.0) {
                    return Err(Error::invalid("hammerstein exponent must be positive"));
                }
            }
            OperatorSpec::Sum { left, right } => {
                left.validate()?;
                right.validate()?;
            }
            OperatorSpec::ScalarMultiple { inner, .. }
            | OperatorSpec::NormWeighted { inner, .. }
            | OperatorSpec::ShiftArgument { inner, .. }
            | OperatorSpec::SubtractValue { inner, .. } => inner.validate()?,
            _ => {}
        }
        Ok(())
    }
}

fn signed_pow(a: f64, gamma: f64, x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        a * x.signum() * space::abs_pow(x, gamma)
    }
}

/// An operator compiled against a fixed space: kernels materialized, anchors
/// evaluated. Compile once, apply many times.
pub struct CompiledOperator {
    space: Arc<MeasureSpace>,
    q: f64,
    p: f64,
    root: Node,
}

enum Node {
    Identity,
    Power { a: f64, gamma: f64 },
    Map(PointwiseMap),
    Integral(Kernel),
    Hammerstein { kernel: Kernel, a: f64, gamma: f64 },
    Sum(Box<Node>, Box<Node>),
    Scalar(f64, Box<Node>),
    NormWeighted { alpha: f64, q: f64, inner: Box<Node> },
    Shift { anchor: Vec<f64>, inner: Box<Node> },
    Subtract { anchor_image: Vec<f64>, inner: Box<Node> },
}

impl CompiledOperator {
    pub fn compile(spec: &OperatorSpec, space: &Arc<MeasureSpace>) -> Result<CompiledOperator> {
        spec.validate()?;
        let (q, p) = spec.exponents()?;
        let root = compile_node(spec, space)?;
        Ok(CompiledOperator { space: space.clone(), q, p, root })
    }

    pub fn domain_exponent(&self) -> f64 {
        self.q
    }

    pub fn codomain_exponent(&self) -> f64 {
        self.p
    }

    pub fn apply(&self, u: &Func) -> Result<Func> {
        if u.exponent() != self.q {
            return Err(Error::ExponentMismatch { expected: self.q, found: u.exponent() });
        }
        if !space::same_space(u.space(), &self.space) {
            return Err(Error::SpaceMismatch("operator compiled for a different space".into()));
        }
        let values = apply_node(&self.root, &self.space, u.values())?;
        Func::new(self.space.clone(), values, self.p)
    }
}

fn compile_node(spec: &OperatorSpec, space: &Arc<MeasureSpace>) -> Result<Node> {
    Ok(match spec {
        OperatorSpec::Identity { .. } => Node::Identity,
        OperatorSpec::PowerSuperposition { a, gamma, .. } => {
            Node::Power { a: *a, gamma: *gamma }
        }
        OperatorSpec::GeneralSuperposition { map, .. } => Node::Map(map.clone()),
        OperatorSpec::Integral { kernel, .. } => {
            Node::Integral(Kernel::materialize(kernel, space)?)
        }
        OperatorSpec::Hammerstein { kernel, a, gamma, .. } => Node::Hammerstein {
            kernel: Kernel::materialize(kernel, space)?,
            a: *a,
            gamma: *gamma,
        },
        OperatorSpec::Sum { left, right } => Node::Sum(
            Box::new(compile_node(left, space)?),
            Box::new(compile_node(right, space)?),
        ),
        OperatorSpec::ScalarMultiple { factor, inner } => {
            Node::Scalar(*factor, Box::new(compile_node(inner, space)?))
        }
        OperatorSpec::NormWeighted { alpha, inner } => Node::NormWeighted {
            alpha: *alpha,
            q: inner.domain_exponent()?,
            inner: Box::new(compile_node(inner, space)?),
        },
        OperatorSpec::ShiftArgument { anchor, inner } => {
            let q = inner.domain_exponent()?;
            let anchor_f = anchor.materialize(space, q)?;
            Node::Shift {
                anchor: anchor_f.values().to_vec(),
                inner: Box::new(compile_node(inner, space)?),
            }
        }
        OperatorSpec::SubtractValue { anchor, inner } => {
            let q = inner.domain_exponent()?;
            let anchor_f = anchor.materialize(space, q)?;
            let node = compile_node(inner, space)?;
            let anchor_image = apply_node(&node, space, anchor_f.values())?;
            Node::Subtract { anchor_image, inner: Box::new(node) }
        }
    })
}

fn apply_node(node: &Node, space: &Arc<MeasureSpace>, values: &[f64]) -> Result<Vec<f64>> {
    Ok(match node {
        Node::Identity => values.to_vec(),
        Node::Power { a, gamma } => values.iter().map(|&x| signed_pow(*a, *gamma, x)).collect(),
        Node::Map(map) => values.iter().map(|&x| map.eval(x)).collect(),
        Node::Integral(kernel) => kernel.apply(values),
        Node::Hammerstein { kernel, a, gamma } => {
            let mid: Vec<f64> = values.iter().map(|&x| signed_pow(*a, *gamma, x)).collect();
            kernel.apply(&mid)
        }
        Node::Sum(left, right) => {
            let l = apply_node(left, space, values)?;
            let r = apply_node(right, space, values)?;
            l.iter().zip(&r).map(|(&x, &y)| x + y).collect()
        }
        Node::Scalar(c, inner) => {
            apply_node(inner, space, values)?.iter().map(|&x| c * x).collect()
        }
        Node::NormWeighted { alpha, q, inner } => {
            let norm = lp_norm_values(space, values, *q);
            if norm == 0.0 && *alpha < 0.0 {
                return Ok(vec![0.0; values.len()]);
            }
            let factor = if *alpha == 0.0 {
                1.0
            } else if *alpha == 1.0 {
                norm
            } else {
                norm.powf(*alpha)
            };
            apply_node(inner, space, values)?.iter().map(|&x| factor * x).collect()
        }
        Node::Shift { anchor, inner } => {
            let shifted: Vec<f64> = anchor.iter().zip(values).map(|(&a, &x)| a + x).collect();
            apply_node(inner, space, &shifted)?
        }
        Node::Subtract { anchor_image, inner } => {
            let img = apply_node(inner, space, values)?;
            img.iter().zip(anchor_image).map(|(&x, &a)| x - a).collect()
        }
    })
}

fn lp_norm_values(space: &Arc<MeasureSpace>, values: &[f64], p: f64) -> f64 {
    let terms: Vec<f64> = values
        .iter()
        .zip(space.measures())
        .map(|(&v, &m)| space::abs_pow(v, p) * m)
        .collect();
    space::root(space::pairwise_sum(&terms), p)
}

/// One-shot application; compiles the spec first.
pub fn apply(spec: &OperatorSpec, u: &Func) -> Result<Func> {
    CompiledOperator::compile(spec, u.space())?.apply(u)
}

/// Applies the operator memberwise; the image set's provenance records the
/// operator, so the image can be regenerated.
pub fn apply_set(spec: &OperatorSpec, set: &SampleSet) -> Result<SampleSet> {
    let compiled = CompiledOperator::compile(spec, set.space())?;
    let members: Vec<Func> = set
        .members()
        .iter()
        .map(|u| compiled.apply(u))
        .collect::<Result<Vec<_>>>()?;
    let provenance = GeneratorSpec::Image {
        operator: Box::new(spec.clone()),
        base: Box::new(set.provenance().clone()),
    };
    Ok(set.with_members(members, provenance))
}

/// Numerically certifies linearity: apply(a f + b g) against the same linear
/// combination of images, on seeded draws, within relative 1e-10.
pub fn is_linear(spec: &OperatorSpec, space: &Arc<MeasureSpace>) -> Result<bool> {
    let compiled = CompiledOperator::compile(spec, space)?;
    let q = compiled.domain_exponent();
    let probes = sets::smooth_random_family(space, q, 4, 0xC0FFEE, 1.0)?;
    let spike_count = (space.cell_count().ilog2() as usize).clamp(1, 2);
    let spikes = sets::spike_family(space, q, spike_count)?;
    let f = probes.member(0);
    let g = probes.member(1);
    let h = spikes.member(0);
    for (a, b, x, y) in [(2.0, -3.0, f, g), (0.5, 4.0, g, h), (-1.25, 1.0, f, h)] {
        let combo = space::axpy(a, x, &space::scale(y, b))?;
        let lhs = compiled.apply(&combo)?;
        let rhs = space::axpy(a, &compiled.apply(x)?, &space::scale(&compiled.apply(y)?, b))?;
        // defect measured against the input scale so that cancelling outputs
        // (for instance zero-mean probes under an averaging kernel) do not
        // blow up the relative test
        let scale_ref = a.abs() * space::lp_norm(x) + b.abs() * space::lp_norm(y) + 1.0;
        let diff = space::lp_norm(&space::axpy(-1.0, &rhs, &lhs)?);
        if diff > 1e-10 * scale_ref {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A linear operator in materialized form, used for analytic derivatives.
#[derive(Debug, Clone, PartialEq)]
pub enum LinearPart {
    Zero,
    /// (L u)(s) = diag(s) * u(s)
    Diagonal(Vec<f64>),
    Kernel(Kernel),
    /// Kernel composed after a diagonal multiplier.
    KernelDiagonal { kernel: Kernel, diag: Vec<f64> },
    Sum(Box<LinearPart>, Box<LinearPart>),
    Scaled(f64, Box<LinearPart>),
}

impl LinearPart {
    pub fn apply_values(&self, values: &[f64]) -> Vec<f64> {
        match self {
            LinearPart::Zero => vec![0.0; values.len()],
            LinearPart::Diagonal(diag) => {
                diag.iter().zip(values).map(|(&d, &x)| d * x).collect()
            }
            LinearPart::Kernel(kernel) => kernel.apply(values),
            LinearPart::KernelDiagonal { kernel, diag } => {
                let mid: Vec<f64> = diag.iter().zip(values).map(|(&d, &x)| d * x).collect();
                kernel.apply(&mid)
            }
            LinearPart::Sum(left, right) => {
                let l = left.apply_values(values);
                let r = right.apply_values(values);
                l.iter().zip(&r).map(|(&x, &y)| x + y).collect()
            }
            LinearPart::Scaled(c, inner) => {
                inner.apply_values(values).iter().map(|&x| c * x).collect()
            }
        }
    }

    /// Short human-readable shape for reports.
    pub fn describe(&self) -> String {
        match self {
            LinearPart::Zero => "zero".into(),
            LinearPart::Diagonal(_) => "diagonal multiplier".into(),
            LinearPart::Kernel(_) => "integral kernel".into(),
            LinearPart::KernelDiagonal { .. } => "kernel after diagonal multiplier".into(),
            LinearPart::Sum(l, r) => format!("{} + {}", l.describe(), r.describe()),
            LinearPart::Scaled(c, inner) => format!("{c} * ({})", inner.describe()),
        }
    }
}

/// Where a derivative is anchored.
#[derive(Debug, Clone, PartialEq)]
pub enum Anchor {
    Point(Func),
    Infinity,
}

/// An analytic derivative of a base operator, with a remainder evaluator.
pub struct DerivativeSpec {
    pub base: OperatorSpec,
    pub anchor: Anchor,
    pub linear: LinearPart,
    space: Arc<MeasureSpace>,
    q: f64,
    p: f64,
    compiled_base: CompiledOperator,
    base_at_anchor: Option<Func>,
}

impl DerivativeSpec {
    pub fn space(&self) -> &Arc<MeasureSpace> {
        &self.space
    }

    pub fn domain_exponent(&self) -> f64 {
        self.q
    }

    pub fn codomain_exponent(&self) -> f64 {
        self.p
    }

    pub fn apply_linear(&self, u: &Func) -> Result<Func> {
        if u.exponent() != self.q {
            return Err(Error::ExponentMismatch { expected: self.q, found: u.exponent() });
        }
        Func::new(self.space.clone(), self.linear.apply_values(u.values()), self.p)
    }

    /// omega(u) = T(u1 + u) - T(u1) - L u at a point;
    /// omega(u) = T(u) - L u at infinity.
    pub fn remainder(&self, u: &Func) -> Result<Func> {
        let lu = self.apply_linear(u)?;
        match (&self.anchor, &self.base_at_anchor) {
            (Anchor::Point(u1), Some(t_u1)) => {
                let shifted = space::axpy(1.0, u1, u)?;
                let t = self.compiled_base.apply(&shifted)?;
                let centered = space::axpy(-1.0, t_u1, &t)?;
                space::axpy(-1.0, &lu, &centered)
            }
            (Anchor::Infinity, _) => {
                let t = self.compiled_base.apply(u)?;
                space::axpy(-1.0, &lu, &t)
            }
            _ => unreachable!("point anchors always carry the base image"),
        }
    }
}

/// Analytic Frechet derivative of a supported operator at the point `u1`.
///
/// Supported shapes: superposition kinds (power needs gamma >= 1 wherever u1
/// vanishes), integral, hammerstein, identity, and sums, scalar multiples,
/// shifts, and value-subtractions of those.
pub fn frechet_analytic(spec: &OperatorSpec, u1: &Func) -> Result<DerivativeSpec> {
    let space = u1.space().clone();
    let (q, p) = spec.exponents()?;
    if u1.exponent() != q {
        return Err(Error::ExponentMismatch { expected: q, found: u1.exponent() });
    }
    let linear = derivative_node(spec, u1)?;
    let compiled_base = CompiledOperator::compile(spec, &space)?;
    let base_at_anchor = Some(compiled_base.apply(u1)?);
    Ok(DerivativeSpec {
        base: spec.clone(),
        anchor: Anchor::Point(u1.clone()),
        linear,
        space,
        q,
        p,
        compiled_base,
        base_at_anchor,
    })
}

fn superposition_diagonal(a: f64, gamma: f64, u1: &Func) -> Result<Vec<f64>> {
    if gamma < 1.0 {
        if let Some(cell) = u1.values().iter().position(|&v| v == 0.0) {
            return Err(Error::NonDifferentiable {
                cell,
                reason: format!("superposition exponent {gamma} < 1 at a zero of the anchor"),
            });
        }
    }
    Ok(u1
        .values()
        .iter()
        .map(|&v| {
            if gamma == 1.0 {
                a
            } else {
                a * gamma * space::abs_pow(v, gamma - 1.0)
            }
        })
        .collect())
}

fn derivative_node(spec: &OperatorSpec, u1: &Func) -> Result<LinearPart> {
    let space = u1.space();
    Ok(match spec {
        OperatorSpec::Identity { .. } => LinearPart::Diagonal(vec![1.0; space.cell_count()]),
        OperatorSpec::PowerSuperposition { a, gamma, .. } => {
            LinearPart::Diagonal(superposition_diagonal(*a, *gamma, u1)?)
        }
        OperatorSpec::GeneralSuperposition { map, .. } => match map {
            PointwiseMap::Affine { slope, .. } => {
                LinearPart::Diagonal(vec![*slope; space.cell_count()])
            }
            PointwiseMap::Clamp { bound } => {
                if let Some(cell) = u1.values().iter().position(|&v| v.abs() == *bound) {
                    return Err(Error::NonDifferentiable {
                        cell,
                        reason: "anchor sits on the clamp boundary".into(),
                    });
                }
                LinearPart::Diagonal(
                    u1.values()
                        .iter()
                        .map(|&v| if v.abs() < *bound { 1.0 } else { 0.0 })
                        .collect(),
                )
            }
        },
        OperatorSpec::Integral { kernel, .. } => {
            LinearPart::Kernel(Kernel::materialize(kernel, space)?)
        }
        OperatorSpec::Hammerstein { kernel, a, gamma, .. } => LinearPart::KernelDiagonal {
            kernel: Kernel::materialize(kernel, space)?,
            diag: superposition_diagonal(*a, *gamma, u1)?,
        },
        OperatorSpec::Sum { left, right } => LinearPart::Sum(
            Box::new(derivative_node(left, u1)?),
            Box::new(derivative_node(right, u1)?),
        ),
        OperatorSpec::ScalarMultiple { factor, inner } => {
            LinearPart::Scaled(*factor, Box::new(derivative_node(inner, u1)?))
        }
        OperatorSpec::ShiftArgument { anchor, inner } => {
            let q = inner.domain_exponent()?;
            let shift = anchor.materialize(space, q)?;
            let moved = space::axpy(1.0, u1, &shift)?;
            derivative_node(inner, &moved)?
        }
        OperatorSpec::SubtractValue { inner, .. } => derivative_node(inner, u1)?,
        OperatorSpec::NormWeighted { .. } => {
            return Err(Error::invalid(
                "no analytic derivative rule for norm-weighted operators",
            ))
        }
    })
}

/// Maximal linear part of an operator at infinity; sublinear summands
/// contribute zero, superlinear ones are an error.
pub fn asymptotic_linear_part(
    spec: &OperatorSpec,
    space: &Arc<MeasureSpace>,
) -> Result<LinearPart> {
    Ok(match spec {
        OperatorSpec::Identity { .. } => LinearPart::Diagonal(vec![1.0; space.cell_count()]),
        OperatorSpec::PowerSuperposition { a, gamma, .. } => {
            if *gamma == 1.0 {
                LinearPart::Diagonal(vec![*a; space.cell_count()])
            } else if *gamma < 1.0 {
                LinearPart::Zero
            } else {
                return Err(Error::invalid(
                    "superlinear superposition has no asymptotic derivative",
                ));
            }
        }
        OperatorSpec::GeneralSuperposition { map, .. } => match map {
            PointwiseMap::Affine { slope, .. } => {
                LinearPart::Diagonal(vec![*slope; space.cell_count()])
            }
            PointwiseMap::Clamp { .. } => LinearPart::Zero,
        },
        OperatorSpec::Integral { kernel, .. } => {
            LinearPart::Kernel(Kernel::materialize(kernel, space)?)
        }
        OperatorSpec::Hammerstein { kernel, a, gamma, .. } => {
            if *gamma == 1.0 {
                LinearPart::Scaled(
                    *a,
                    Box::new(LinearPart::Kernel(Kernel::materialize(kernel, space)?)),
                )
            } else if *gamma < 1.0 {
                LinearPart::Zero
            } else {
                return Err(Error::invalid(
                    "superlinear hammerstein has no asymptotic derivative",
                ));
            }
        }
        OperatorSpec::Sum { left, right } => LinearPart::Sum(
            Box::new(asymptotic_linear_part(left, space)?),
            Box::new(asymptotic_linear_part(right, space)?),
        ),
        OperatorSpec::ScalarMultiple { factor, inner } => {
            LinearPart::Scaled(*factor, Box::new(asymptotic_linear_part(inner, space)?))
        }
        OperatorSpec::NormWeighted { alpha, inner } => {
            if *alpha < 0.0 {
                LinearPart::Zero
            } else if *alpha == 0.0 {
                asymptotic_linear_part(inner, space)?
            } else {
                return Err(Error::invalid(
                    "norm-weighted operator with positive weight grows superlinearly",
                ));
            }
        }
        OperatorSpec::ShiftArgument { inner, .. } | OperatorSpec::SubtractValue { inner, .. } => {
            asymptotic_linear_part(inner, space)?
        }
    })
}

/// Derivative at infinity, with the linear part extracted from the spec.
pub fn asymptotic_derivative(
    spec: &OperatorSpec,
    space: &Arc<MeasureSpace>,
) -> Result<DerivativeSpec> {
    let (q, p) = spec.exponents()?;
    let linear = asymptotic_linear_part(spec, space)?;
    let compiled_base = CompiledOperator::compile(spec, space)?;
    Ok(DerivativeSpec {
        base: spec.clone(),
        anchor: Anchor::Infinity,
        linear,
        space: space.clone(),
        q,
        p,
        compiled_base,
        base_at_anchor: None,
    })
}

/// Rows of (radius, sup over sampled ||u|| = r of ||omega(u)|| / ||u||).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RemainderTable {
    pub radii: Vec<f64>,
    pub ratios: Vec<f64>,
}

impl RemainderTable {
    /// The differentiability predicate: the ratio table visibly decays
    /// (final row at most half the peak) or is zero throughout.
    pub fn decays(&self) -> bool {
        let peak = self.ratios.iter().copied().fold(0.0, f64::max);
        let last = *self.ratios.last().unwrap_or(&0.0);
        peak <= 1e-12 || last <= 0.5 * peak
    }
}

/// Remainder ratios at a point over spheres of decreasing radii.
///
/// The same unit-sphere sample (same seed) is scaled to each radius, so rows
/// differ only through the operator's own nonlinearity.
pub fn remainder_ratio(
    derivative: &DerivativeSpec,
    radii: &[f64],
    plan: &sets::SamplingPlan,
) -> Result<RemainderTable> {
    if radii.is_empty() || radii.windows(2).any(|w| w[1] >= w[0]) || radii[radii.len() - 1] <= 0.0
    {
        return Err(Error::invalid(
            "point-mode remainder radii must be strictly decreasing and positive",
        ));
    }
    if !matches!(derivative.anchor, Anchor::Point(_)) {
        return Err(Error::invalid("remainder_ratio needs a point-anchored derivative"));
    }
    remainder_table(derivative, radii, plan)
}

/// Remainder ratios at infinity over spheres of increasing radii.
pub fn asymptotic_remainder_ratio(
    derivative: &DerivativeSpec,
    radii: &[f64],
    plan: &sets::SamplingPlan,
) -> Result<RemainderTable> {
    if radii.is_empty() || radii.windows(2).any(|w| w[1] <= w[0]) || radii[0] <= 0.0 {
        return Err(Error::invalid(
            "infinity-mode remainder radii must be strictly increasing and positive",
        ));
    }
    if !matches!(derivative.anchor, Anchor::Infinity) {
        return Err(Error::invalid(
            "asymptotic_remainder_ratio needs an infinity-anchored derivative",
        ));
    }
    remainder_table(derivative, radii, plan)
}

fn remainder_table(
    derivative: &DerivativeSpec,
    radii: &[f64],
    plan: &sets::SamplingPlan,
) -> Result<RemainderTable> {
    let base = sets::sphere_sample(
        &derivative.space,
        derivative.q,
        1.0,
        plan.count,
        plan.seed,
        plan.mixture,
    )?;
    let mut ratios = Vec::with_capacity(radii.len());
    for &r in radii {
        let sphere = sets::scale_set(&base, r)?;
        let mut sup = 0.0f64;
        for u in sphere.members() {
            let omega = derivative.remainder(u)?;
            let norm_u = space::lp_norm(u);
            if norm_u > 0.0 {
                sup = sup.max(space::lp_norm(&omega) / norm_u);
            }
        }
        ratios.push(sup);
    }
    Ok(RemainderTable { radii: radii.to_vec(), ratios })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sets::{ball_sample, spike_family, Mixture, SamplingPlan};
    use crate::space::{lp_norm, MeasureSpace};

    fn grid(n: usize) -> Arc<MeasureSpace> {
        MeasureSpace::uniform(n, 1.0).unwrap()
    }

    fn constant(space: &Arc<MeasureSpace>, c: f64, p: f64) -> Func {
        Func::constant(space.clone(), c, p).unwrap()
    }

    #[test]
    fn identity_and_power_superposition() {
        let s = grid(8);
        let u = constant(&s, 3.0, 2.0);

        let id = OperatorSpec::identity(2.0, 2.0);
        assert_eq!(apply(&id, &u).unwrap(), u);

        let square = OperatorSpec::power_superposition(1.0, 2.0, 2.0, 2.0).unwrap();
        assert_eq!(apply(&square, &u).unwrap().values(), &[9.0; 8]);

        let neg = constant(&s, -2.0, 2.0);
        assert_eq!(apply(&square, &neg).unwrap().values(), &[-4.0; 8]);

        let zeroed = OperatorSpec::power_superposition(0.0, 2.0, 2.0, 2.0).unwrap();
        assert_eq!(apply(&zeroed, &u).unwrap().values(), &[0.0; 8]);

        assert!(OperatorSpec::power_superposition(1.0, 0.0, 2.0, 2.0).is_err());
        assert!(OperatorSpec::power_superposition(1.0, -1.0, 2.0, 2.0).is_err());
    }

    #[test]
    fn exponent_mismatch_is_rejected() {
        let s = grid(8);
        let u = constant(&s, 1.0, 3.0);
        let id = OperatorSpec::identity(2.0, 2.0);
        assert!(matches!(
            apply(&id, &u),
            Err(Error::ExponentMismatch { expected, found }) if expected == 2.0 && found == 3.0
        ));
    }

    #[test]
    fn f1_scales_pointwise_with_its_degree() {
        let s = grid(1024);
        let f1 = OperatorSpec::f1(1.0, 4.0, 2.0).unwrap(); // gamma = 2
        let base = spike_family(&s, 4.0, 6).unwrap();
        for u in base.members() {
            let image = apply(&f1, u).unwrap();
            let scaled_in = apply(&f1, &space::scale(u, 2.0)).unwrap();
            for (a, b) in scaled_in.values().iter().zip(image.values()) {
                assert_eq!(*a, 4.0 * b); // rho^gamma exact for rho a power of two
            }
        }
    }

    #[test]
    fn f1_spike_norm_example() {
        // q = 4, p = 2: a spike of L4 norm 1 maps to a function of L2 norm a.
        let s = grid(1024);
        let f1 = OperatorSpec::f1(2.5, 4.0, 2.0).unwrap();
        let spikes = spike_family(&s, 4.0, 8).unwrap();
        for u in spikes.members() {
            let img = apply(&f1, u).unwrap();
            assert_eq!(img.exponent(), 2.0);
            assert!((lp_norm(&img) - 2.5).abs() <= 1e-9);
        }
    }

    #[test]
    fn integral_averages_and_is_linear() {
        let s = grid(16);
        let k = OperatorSpec::integral(KernelSpec::Constant { value: 1.0 }, 2.0, 2.0);
        let u = Func::new(s.clone(), (0..16).map(|i| i as f64).collect(), 2.0).unwrap();
        let mean = (0..16).map(|i| i as f64).sum::<f64>() / 16.0;
        let img = apply(&k, &u).unwrap();
        for v in img.values() {
            assert!((v - mean).abs() <= 1e-12);
        }
        assert!(is_linear(&k, &s).unwrap());

        let nonlinear = OperatorSpec::power_superposition(1.0, 2.0, 2.0, 2.0).unwrap();
        assert!(!is_linear(&nonlinear, &s).unwrap());
    }

    #[test]
    fn hammerstein_constant_kernel() {
        let s = grid(16);
        let h =
            OperatorSpec::hammerstein(KernelSpec::Constant { value: 1.0 }, 1.0, 1.0, 2.0, 2.0)
                .unwrap();
        let u = constant(&s, 0.7, 2.0);
        let img = apply(&h, &u).unwrap();
        for v in img.values() {
            assert!((v - 0.7).abs() <= 1e-12);
        }
    }

    #[test]
    fn hammerstein_spike_mean() {
        // gamma = 2 on a unit-L4-norm spike of support 1/16: the image is the
        // constant (support mass) * sqrt(16) = 16^(-1/2).
        let s = grid(1024);
        let h =
            OperatorSpec::hammerstein(KernelSpec::Constant { value: 1.0 }, 1.0, 2.0, 4.0, 2.0)
                .unwrap();
        let spikes = spike_family(&s, 4.0, 4).unwrap();
        let u = spikes.member(3); // support measure 1/16
        let img = apply(&h, u).unwrap();
        for v in img.values() {
            assert!((v - 0.25).abs() <= 1e-12);
        }
    }

    #[test]
    fn norm_weighted_degrees() {
        let s = grid(64);
        let f = OperatorSpec::norm_weighted(1.0, OperatorSpec::identity(2.0, 2.0));
        let u = Func::new(
            s.clone(),
            (0..64).map(|i| ((i * 37) % 11) as f64 * 0.1).collect(),
            2.0,
        )
        .unwrap();
        let img = apply(&f, &u).unwrap();
        let img2 = apply(&f, &space::scale(&u, 2.0)).unwrap();
        for (a, b) in img2.values().iter().zip(img.values()) {
            assert_eq!(*a, 4.0 * b); // rho^2 with rho = 2 is exact
        }

        let noop = OperatorSpec::norm_weighted(0.0, OperatorSpec::identity(2.0, 2.0));
        assert_eq!(apply(&noop, &u).unwrap(), u);

        let inv = OperatorSpec::norm_weighted(-0.5, OperatorSpec::identity(2.0, 2.0));
        let zero = Func::zero(s.clone(), 2.0).unwrap();
        assert_eq!(apply(&inv, &zero).unwrap().values(), zero.values());
    }

    #[test]
    fn combinators() {
        let s = grid(8);
        let u = Func::new(s.clone(), (0..8).map(|i| i as f64 - 3.0).collect(), 2.0).unwrap();
        let id = OperatorSpec::identity(2.0, 2.0);

        let cancel =
            OperatorSpec::sum(id.clone(), OperatorSpec::scalar_multiple(-1.0, id.clone()));
        assert_eq!(apply(&cancel, &u).unwrap().values(), &[0.0; 8]);

        let anchor = FuncSpec::Constant { value: 2.0 };
        let shifted = OperatorSpec::shift_argument(id.clone(), anchor.clone());
        let zero = Func::zero(s.clone(), 2.0).unwrap();
        assert_eq!(apply(&shifted, &zero).unwrap().values(), &[2.0; 8]);

        let normalized = OperatorSpec::subtract_value(shifted, FuncSpec::Zero);
        assert_eq!(apply(&normalized, &zero).unwrap().values(), &[0.0; 8]);
    }

    #[test]
    fn sum_exponent_consistency_checked() {
        let bad = OperatorSpec::sum(
            OperatorSpec::identity(2.0, 2.0),
            OperatorSpec::identity(1.0, 2.0),
        );
        assert!(bad.validate().is_err());
    }

    #[test]
    fn frechet_derivative_of_square() {
        let s = grid(8);
        let square = OperatorSpec::power_superposition(1.0, 2.0, 2.0, 2.0).unwrap();
        let u1 = constant(&s, 3.0, 2.0);
        let d = frechet_analytic(&square, &u1).unwrap();
        match &d.linear {
            LinearPart::Diagonal(diag) => {
                assert!(diag.iter().all(|&v| (v - 6.0).abs() <= 1e-12))
            }
            other => panic!("unexpected derivative shape {other:?}"),
        }
    }

    #[test]
    fn derivative_of_linear_operator_is_itself() {
        let s = grid(16);
        let k = OperatorSpec::integral(KernelSpec::Constant { value: 1.0 }, 2.0, 2.0);
        let u1 = constant(&s, 0.3, 2.0);
        let d = frechet_analytic(&k, &u1).unwrap();
        let probe =
            Func::new(s.clone(), (0..16).map(|i| (i as f64).cos()).collect(), 2.0).unwrap();
        let omega = d.remainder(&probe).unwrap();
        assert!(lp_norm(&omega) <= 1e-12);
    }

    #[test]
    fn derivative_linearity_invariant() {
        let s = grid(32);
        let h = OperatorSpec::hammerstein(KernelSpec::Gaussian { width: 0.2 }, 1.0, 2.0, 2.0, 2.0)
            .unwrap();
        let u1 = constant(&s, 1.0, 2.0);
        let d = frechet_analytic(&h, &u1).unwrap();
        let f =
            Func::new(s.clone(), (0..32).map(|i| (i as f64 * 0.3).sin()).collect(), 2.0).unwrap();
        let g =
            Func::new(s.clone(), (0..32).map(|i| (i as f64 * 0.17).cos()).collect(), 2.0).unwrap();
        let combo = space::axpy(2.0, &f, &space::scale(&g, -0.5)).unwrap();
        let lhs = d.apply_linear(&combo).unwrap();
        let rhs = space::axpy(
            2.0,
            &d.apply_linear(&f).unwrap(),
            &space::scale(&d.apply_linear(&g).unwrap(), -0.5),
        )
        .unwrap();
        let diff = lp_norm(&space::axpy(-1.0, &rhs, &lhs).unwrap());
        assert!(diff <= 1e-10 * lp_norm(&lhs).max(1.0));
    }

    #[test]
    fn finite_difference_cross_check() {
        let s = grid(64);
        let square = OperatorSpec::power_superposition(1.0, 2.0, 2.0, 2.0).unwrap();
        let u1 = Func::new(
            s.clone(),
            (0..64).map(|i| 1.0 + 0.1 * (i as f64 * 0.2).sin()).collect(),
            2.0,
        )
        .unwrap();
        let d = frechet_analytic(&square, &u1).unwrap();
        let h =
            Func::new(s.clone(), (0..64).map(|i| (i as f64 * 0.4).cos()).collect(), 2.0).unwrap();
        let compiled = CompiledOperator::compile(&square, &s).unwrap();

        let mut errors = Vec::new();
        for eps in [1e-3, 1e-4] {
            let bumped = compiled.apply(&space::axpy(eps, &h, &u1).unwrap()).unwrap();
            let at_anchor = compiled.apply(&u1).unwrap();
            let fd = space::scale(&space::axpy(-1.0, &at_anchor, &bumped).unwrap(), 1.0 / eps);
            let err = lp_norm(&space::axpy(-1.0, &d.apply_linear(&h).unwrap(), &fd).unwrap());
            errors.push(err);
        }
        // first-order decay: shrinking eps tenfold shrinks the error ~tenfold
        assert!(errors[1] <= errors[0] * 0.2);
        assert!(errors[0] <= 1.0);
    }

    #[test]
    fn non_differentiable_below_gamma_one() {
        let s = grid(8);
        let root_op = OperatorSpec::power_superposition(1.0, 0.5, 2.0, 2.0).unwrap();
        let mut vals = vec![1.0; 8];
        vals[3] = 0.0;
        let u1 = Func::new(s, vals, 2.0).unwrap();
        assert!(matches!(
            frechet_analytic(&root_op, &u1),
            Err(Error::NonDifferentiable { cell: 3, .. })
        ));
    }

    #[test]
    fn remainder_ratio_tables() {
        let s = grid(256);
        let plan = SamplingPlan { count: 12, seed: 5, mixture: Mixture::default() };

        // linear operator: all ratios vanish
        let k = OperatorSpec::integral(KernelSpec::Constant { value: 1.0 }, 2.0, 2.0);
        let d = frechet_analytic(&k, &Func::zero(s.clone(), 2.0).unwrap()).unwrap();
        let table = remainder_ratio(&d, &[0.5, 0.25, 0.125], &plan).unwrap();
        assert!(table.ratios.iter().all(|&r| r <= 1e-12));
        assert!(table.decays());

        // quadratic at zero: omega(u) = u^2, roughly linear ratio decay on
        // smooth samples
        let square = OperatorSpec::power_superposition(1.0, 2.0, 2.0, 2.0).unwrap();
        let d = frechet_analytic(&square, &Func::zero(s.clone(), 2.0).unwrap()).unwrap();
        let smooth_plan = SamplingPlan {
            count: 8,
            seed: 5,
            mixture: Mixture { spike: 0.0, smooth: 1.0, random: 0.0 },
        };
        let radii = [0.25, 0.125, 0.0625, 0.03125];
        let table = remainder_ratio(&d, &radii, &smooth_plan).unwrap();
        assert!(table.ratios.iter().all(|&r| r >= 0.0));
        for w in table.ratios.windows(2) {
            assert!(w[1] <= w[0] * 0.75, "expected roughly linear decay: {:?}", table.ratios);
        }
        assert!(table.decays());

        // increasing grid is rejected in point mode
        assert!(remainder_ratio(&d, &[0.1, 0.2], &plan).is_err());
    }

    #[test]
    fn asymptotic_tables() {
        let s = grid(256);
        let plan = SamplingPlan { count: 12, seed: 9, mixture: Mixture::default() };

        let k = OperatorSpec::integral(KernelSpec::Constant { value: 1.0 }, 2.0, 2.0);
        let d = asymptotic_derivative(&k, &s).unwrap();
        let table = asymptotic_remainder_ratio(&d, &[1.0, 2.0, 4.0], &plan).unwrap();
        assert!(table.ratios.iter().all(|&r| r <= 1e-12));

        // linear + bounded perturbation: ratio <= bound / R
        let bound = 0.8;
        let perturbed = OperatorSpec::sum(
            k.clone(),
            OperatorSpec::GeneralSuperposition {
                map: PointwiseMap::Clamp { bound },
                q: 2.0,
                p: 2.0,
            },
        );
        let d = asymptotic_derivative(&perturbed, &s).unwrap();
        let radii = [1.0, 2.0, 4.0, 8.0, 16.0];
        let table = asymptotic_remainder_ratio(&d, &radii, &plan).unwrap();
        for (r, ratio) in table.radii.iter().zip(&table.ratios) {
            assert!(*ratio <= bound / r + 1e-9);
        }

        // decreasing grid is rejected in infinity mode
        assert!(asymptotic_remainder_ratio(&d, &[4.0, 2.0], &plan).is_err());
    }

    #[test]
    fn image_sets_are_regenerable() {
        let space = grid(64);
        let set = ball_sample(&space, 2.0, 1.0, 8, 3, Mixture::default()).unwrap();
        let f1 = OperatorSpec::f1(1.0, 2.0, 2.0).unwrap();
        let image = apply_set(&f1, &set).unwrap();
        let regenerated = sets::generate(&space, image.provenance()).unwrap();
        assert_eq!(image, regenerated);
    }

    #[test]
    fn kernel_csv_roundtrip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("kernel.csv");
        std::fs::write(&path, "1.0,0.0\n0.5,2.0\n").unwrap();
        let s = grid(2);
        let spec = KernelSpec::CsvFile { path: path.to_string_lossy().into_owned() };
        let k = Kernel::materialize(&spec, &s).unwrap();
        // weighted entries fold in mu(t) = 1/2
        assert_eq!(k.weighted_entries(), &[0.5, 0.0, 0.25, 1.0]);

        std::fs::write(&path, "1.0,0.0\n").unwrap();
        assert!(Kernel::materialize(&spec, &s).is_err());
    }
}
