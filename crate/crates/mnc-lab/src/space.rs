//! Discretized measure spaces, Lp functions, and the subset projection.
//!
//! A [`MeasureSpace`] is a finite partition of the underlying domain into
//! cells with positive measures. A [`Func`] holds one value per cell together
//! with the Lp exponent it is normed in. A [`SubsetMask`] selects a measurable
//! union of whole cells; cells are atoms and are never split.
//!
//! Summations run in fixed cell order with pairwise (binary-tree) reduction,
//! so every norm is deterministic and power-of-two scalings commute with the
//! arithmetic bit for bit.

use std::sync::Arc;

use crate::error::{Error, Result};

/// Finite partition of the domain into positively-measured cells.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasureSpace {
    measures: Vec<f64>,
    total_measure: f64,
}

impl MeasureSpace {
    /// Builds a space from explicit per-cell measures.
    pub fn new(measures: Vec<f64>) -> Result<Arc<Self>> {
        if measures.is_empty() {
            return Err(Error::invalid("a measure space needs at least one cell"));
        }
        if measures.iter().any(|&m| !(m > 0.0) || !m.is_finite()) {
            return Err(Error::invalid("every cell measure must be strictly positive and finite"));
        }
        let total = pairwise_sum(&measures);
        Ok(Arc::new(MeasureSpace { measures, total_measure: total }))
    }

    /// Uniform partition: `cell_count` cells of measure `total_measure / cell_count`.
    pub fn uniform(cell_count: usize, total_measure: f64) -> Result<Arc<Self>> {
        if cell_count == 0 {
            return Err(Error::invalid("cell_count must be at least 1"));
        }
        if !(total_measure > 0.0) || !total_measure.is_finite() {
            return Err(Error::invalid("total_measure must be strictly positive"));
        }
        let per_cell = total_measure / cell_count as f64;
        Ok(Arc::new(MeasureSpace {
            measures: vec![per_cell; cell_count],
            total_measure: per_cell * cell_count as f64,
        }))
    }

    pub fn cell_count(&self) -> usize {
        self.measures.len()
    }

    pub fn measure(&self, cell: usize) -> f64 {
        self.measures[cell]
    }

    pub fn measures(&self) -> &[f64] {
        &self.measures
    }

    pub fn total_measure(&self) -> f64 {
        self.total_measure
    }

    pub fn min_cell_measure(&self) -> f64 {
        self.measures.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// True when all cells carry the same measure.
    pub fn is_uniform(&self) -> bool {
        let first = self.measures[0];
        self.measures.iter().all(|&m| m == first)
    }
}

/// Checks that two space handles refer to the same partition.
pub(crate) fn same_space(a: &Arc<MeasureSpace>, b: &Arc<MeasureSpace>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

/// A measurable function: one value per cell, normed in L_`exponent`.
#[derive(Debug, Clone, PartialEq)]
pub struct Func {
    space: Arc<MeasureSpace>,
    values: Vec<f64>,
    exponent: f64,
}

impl Func {
    pub fn new(space: Arc<MeasureSpace>, values: Vec<f64>, exponent: f64) -> Result<Self> {
        if values.len() != space.cell_count() {
            return Err(Error::invalid(format!(
                "value count {} does not match cell count {}",
                values.len(),
                space.cell_count()
            )));
        }
        check_exponent(exponent)?;
        if let Some(cell) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NumericOverflow { cell });
        }
        Ok(Func { space, values, exponent })
    }

    pub fn zero(space: Arc<MeasureSpace>, exponent: f64) -> Result<Self> {
        let n = space.cell_count();
        Func::new(space, vec![0.0; n], exponent)
    }

    pub fn constant(space: Arc<MeasureSpace>, value: f64, exponent: f64) -> Result<Self> {
        let n = space.cell_count();
        Func::new(space, vec![value; n], exponent)
    }

    pub fn space(&self) -> &Arc<MeasureSpace> {
        &self.space
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn exponent(&self) -> f64 {
        self.exponent
    }

    /// Same values reinterpreted in another Lp context. On a finite measure
    /// space this is the canonical embedding L_q -> L_p for p <= q.
    pub fn with_exponent(&self, exponent: f64) -> Result<Self> {
        check_exponent(exponent)?;
        let mut f = self.clone();
        f.exponent = exponent;
        Ok(f)
    }

    /// One CSV row per cell: `cell_index,measure,value`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("cell_index,measure,value\n");
        for (i, (&m, &v)) in self.space.measures().iter().zip(&self.values).enumerate() {
            out.push_str(&format!("{},{},{}\n", i, crate::report::format_sig17(m), crate::report::format_sig17(v)));
        }
        out
    }
}

fn check_exponent(p: f64) -> Result<()> {
    if !(p >= 1.0) || !p.is_finite() {
        return Err(Error::invalid(format!("Lp exponent must be a finite real >= 1, got {p}")));
    }
    Ok(())
}

/// A union of whole cells, i.e. a measurable subset at grid resolution.
#[derive(Debug, Clone, PartialEq)]
pub struct SubsetMask {
    space: Arc<MeasureSpace>,
    included: Vec<bool>,
    mass: f64,
}

impl SubsetMask {
    pub fn new(space: Arc<MeasureSpace>, included: Vec<bool>) -> Result<Self> {
        if included.len() != space.cell_count() {
            return Err(Error::invalid("mask length does not match cell count"));
        }
        let mass = mask_mass(&space, &included);
        Ok(SubsetMask { space, included, mass })
    }

    pub fn empty(space: Arc<MeasureSpace>) -> Self {
        let n = space.cell_count();
        SubsetMask { space, included: vec![false; n], mass: 0.0 }
    }

    pub fn full(space: Arc<MeasureSpace>) -> Self {
        let n = space.cell_count();
        let mass = space.total_measure();
        SubsetMask { space, included: vec![true; n], mass }
    }

    /// Mask made of the listed cells.
    pub fn from_cells(space: Arc<MeasureSpace>, cells: &[usize]) -> Result<Self> {
        let mut included = vec![false; space.cell_count()];
        for &c in cells {
            if c >= space.cell_count() {
                return Err(Error::invalid(format!("cell index {c} out of range")));
            }
            included[c] = true;
        }
        Self::new(space, included)
    }

    pub fn space(&self) -> &Arc<MeasureSpace> {
        &self.space
    }

    pub fn included(&self) -> &[bool] {
        &self.included
    }

    pub fn contains(&self, cell: usize) -> bool {
        self.included[cell]
    }

    /// Sum of the included cell measures.
    pub fn mass(&self) -> f64 {
        self.mass
    }

    /// Included cell indices in ascending order.
    pub fn cells(&self) -> Vec<usize> {
        self.included
            .iter()
            .enumerate()
            .filter_map(|(i, &b)| b.then_some(i))
            .collect()
    }

    pub fn union(&self, other: &SubsetMask) -> Result<SubsetMask> {
        if !same_space(&self.space, &other.space) {
            return Err(Error::SpaceMismatch("mask union across different spaces".into()));
        }
        let included: Vec<bool> =
            self.included.iter().zip(&other.included).map(|(&a, &b)| a || b).collect();
        SubsetMask::new(self.space.clone(), included)
    }

    pub fn is_disjoint(&self, other: &SubsetMask) -> bool {
        self.included.iter().zip(&other.included).all(|(&a, &b)| !(a && b))
    }
}

fn mask_mass(space: &MeasureSpace, included: &[bool]) -> f64 {
    let masked: Vec<f64> = space
        .measures()
        .iter()
        .zip(included)
        .map(|(&m, &b)| if b { m } else { 0.0 })
        .collect();
    pairwise_sum(&masked)
}

/// Deterministic pairwise (binary-tree) summation in fixed order.
///
/// Error grows like O(log n) and power-of-two aligned blocks of equal terms
/// sum exactly, which keeps the constructed unit-norm families exact.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    match values.len() {
        0 => 0.0,
        1 => values[0],
        2 => values[0] + values[1],
        n => {
            let mid = n / 2;
            pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
        }
    }
}

/// |x|^p with exact handling of the common exponents.
#[inline]
pub fn abs_pow(x: f64, p: f64) -> f64 {
    let a = x.abs();
    if p == 1.0 {
        a
    } else if p == 2.0 {
        a * a
    } else {
        a.powf(p)
    }
}

/// x^(1/p) for non-negative x, routed through sqrt when p = 2.
#[inline]
pub fn root(x: f64, p: f64) -> f64 {
    if p == 1.0 {
        x
    } else if p == 2.0 {
        x.sqrt()
    } else {
        x.powf(1.0 / p)
    }
}

/// Lp norm: (sum over cells of |value|^p * measure)^(1/p).
pub fn lp_norm(f: &Func) -> f64 {
    let p = f.exponent();
    let terms: Vec<f64> = f
        .values()
        .iter()
        .zip(f.space().measures())
        .map(|(&v, &m)| abs_pow(v, p) * m)
        .collect();
    root(pairwise_sum(&terms), p)
}

/// Lp distance between two functions on the same space.
pub fn lp_distance(f: &Func, g: &Func) -> Result<f64> {
    if !same_space(f.space(), g.space()) {
        return Err(Error::SpaceMismatch("distance across different spaces".into()));
    }
    if f.exponent() != g.exponent() {
        return Err(Error::ExponentMismatch { expected: f.exponent(), found: g.exponent() });
    }
    let p = f.exponent();
    let terms: Vec<f64> = f
        .values()
        .iter()
        .zip(g.values())
        .zip(f.space().measures())
        .map(|((&a, &b), &m)| abs_pow(a - b, p) * m)
        .collect();
    Ok(root(pairwise_sum(&terms), p))
}

/// Restriction by indicator: keeps `f` on the masked cells, zero elsewhere.
///
/// Retained values are bit-exact copies.
pub fn project(f: &Func, mask: &SubsetMask) -> Result<Func> {
    if !same_space(f.space(), mask.space()) {
        return Err(Error::SpaceMismatch("projection mask lives on a different space".into()));
    }
    let values: Vec<f64> = f
        .values()
        .iter()
        .zip(mask.included())
        .map(|(&v, &b)| if b { v } else { 0.0 })
        .collect();
    Func::new(f.space().clone(), values, f.exponent())
}

/// Cellwise a*f + g.
pub fn axpy(a: f64, f: &Func, g: &Func) -> Result<Func> {
    if !same_space(f.space(), g.space()) {
        return Err(Error::SpaceMismatch("axpy across different spaces".into()));
    }
    if f.exponent() != g.exponent() {
        return Err(Error::ExponentMismatch { expected: f.exponent(), found: g.exponent() });
    }
    let values: Vec<f64> =
        f.values().iter().zip(g.values()).map(|(&x, &y)| a * x + y).collect();
    Func::new(f.space().clone(), values, f.exponent())
}

/// Cellwise scaling.
pub fn scale(f: &Func, a: f64) -> Func {
    let values: Vec<f64> = f.values().iter().map(|&x| a * x).collect();
    Func { space: f.space().clone(), values, exponent: f.exponent() }
}

/// Cellwise map of values.
pub fn pointwise_map(f: &Func, map: impl Fn(f64) -> f64) -> Result<Func> {
    let values: Vec<f64> = f.values().iter().map(|&x| map(x)).collect();
    Func::new(f.space().clone(), values, f.exponent())
}
