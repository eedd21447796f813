//! Finite-sample estimators for the diameter, the Hausdorff measure chi, the
//! separation measure beta, and the measure of nonequiabsolute continuity nu,
//! together with brute-force oracles for small instances.
//!
//! Every estimate carries a witness that reproduces the reported value bit
//! for bit when re-evaluated: the attaining pair for the diameter, the net
//! members for chi, the packing members for beta, and a (member, mask) pair
//! for nu. All ties break toward the lowest index, which is what makes the
//! estimators exactly scale-equivariant with identical witnesses.
//!
//! Semantics of the budgeted estimators:
//! - `chi_hat(U, N)` is the covering radius of a greedy farthest-point N-net
//!   with net points restricted to sample members, so
//!   chi(sample) <= value <= 2 * chi(sample) relative to the optimal discrete
//!   net of the same size.
//! - `beta_hat(U, M)` is the min pairwise distance of a greedily dispersed
//!   M-subset, at least half the optimal dispersion.
//! - `nu_hat(U, delta)` maximizes the projected norm over masks of mass at
//!   most delta built greedily from the largest cell values; on grids with
//!   equal cell measures the greedy whole-cell choice is the exact discrete
//!   optimum.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sets::SampleSet;
use crate::space::{self, Func, SubsetMask};

/// Documented cap for the exhaustive oracles.
pub const ORACLE_CAP: usize = 14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EstimatorKind {
    Diameter,
    Chi,
    Beta,
    Nu,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Budget {
    None,
    NetSize(usize),
    PackingSize(usize),
    MassThreshold(f64),
}

/// Re-evaluatable witness of an estimate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Witness {
    DiameterPair { i: usize, j: usize },
    Net { centers: Vec<usize> },
    Packing { members: Vec<usize> },
    Mask { member: usize, cells: Vec<usize> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MncEstimate {
    pub kind: EstimatorKind,
    pub budget: Budget,
    pub value: f64,
    pub witness: Witness,
    pub sample_size: usize,
}

/// Precomputed pairwise Lp distance matrix of a sample.
pub struct Distances {
    n: usize,
    d: Vec<f64>,
}

impl Distances {
    pub fn new(set: &SampleSet) -> Result<Distances> {
        Self::from_members(set.members())
    }

    pub fn from_members(members: &[Func]) -> Result<Distances> {
        let n = members.len();
        let mut d = vec![0.0; n * n];
        for i in 0..n {
            for j in (i + 1)..n {
                let dist = space::lp_distance(&members[i], &members[j])?;
                d[i * n + j] = dist;
                d[j * n + i] = dist;
            }
        }
        Ok(Distances { n, d })
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.d[i * self.n + j]
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }
}

/// Max pairwise Lp distance; witness is the first attaining pair.
pub fn diameter(set: &SampleSet) -> Result<MncEstimate> {
    let d = Distances::new(set)?;
    Ok(diameter_from(&d))
}

pub(crate) fn diameter_from(d: &Distances) -> MncEstimate {
    let n = d.len();
    let (mut bi, mut bj, mut best) = (0usize, 0usize, 0.0f64);
    for i in 0..n {
        for j in (i + 1)..n {
            if d.get(i, j) > best {
                best = d.get(i, j);
                bi = i;
                bj = j;
            }
        }
    }
    MncEstimate {
        kind: EstimatorKind::Diameter,
        budget: Budget::None,
        value: best,
        witness: Witness::DiameterPair { i: bi, j: bj },
        sample_size: n,
    }
}

/// Greedy farthest-point N-net (net points restricted to sample members),
/// seeded at member 0, ties toward the lowest index.
pub fn chi_hat(set: &SampleSet, net_size: usize) -> Result<MncEstimate> {
    if net_size < 1 {
        return Err(Error::invalid("chi net size must be at least 1"));
    }
    let d = Distances::new(set)?;
    Ok(chi_hat_from(&d, net_size))
}

pub(crate) fn chi_hat_from(d: &Distances, net_size: usize) -> MncEstimate {
    let n = d.len();
    let mut centers = vec![0usize];
    let mut min_dist: Vec<f64> = (0..n).map(|j| d.get(0, j)).collect();
    while centers.len() < net_size.min(n) {
        let (mut next, mut far) = (0usize, 0.0f64);
        for (j, &dj) in min_dist.iter().enumerate() {
            if dj > far {
                far = dj;
                next = j;
            }
        }
        if far == 0.0 {
            break; // every point already coincides with a net point
        }
        centers.push(next);
        for (j, dj) in min_dist.iter_mut().enumerate() {
            let dn = d.get(next, j);
            if dn < *dj {
                *dj = dn;
            }
        }
    }
    let value = min_dist.iter().copied().fold(0.0, f64::max);
    MncEstimate {
        kind: EstimatorKind::Chi,
        budget: Budget::NetSize(net_size),
        value,
        witness: Witness::Net { centers },
        sample_size: n,
    }
}

/// Exact optimal discrete N-net by exhaustive subset search (cap 14 members).
pub fn chi_oracle(set: &SampleSet, net_size: usize) -> Result<MncEstimate> {
    if net_size < 1 {
        return Err(Error::invalid("chi net size must be at least 1"));
    }
    let n = set.len();
    if n > ORACLE_CAP {
        return Err(Error::SizeCap { size: n, cap: ORACLE_CAP });
    }
    let d = Distances::new(set)?;
    if net_size >= n {
        return Ok(MncEstimate {
            kind: EstimatorKind::Chi,
            budget: Budget::NetSize(net_size),
            value: 0.0,
            witness: Witness::Net { centers: (0..n).collect() },
            sample_size: n,
        });
    }
    let mut best_value = f64::INFINITY;
    let mut best_centers = Vec::new();
    for subset in combinations(n, net_size) {
        let radius = covering_radius(&d, &subset);
        if radius < best_value {
            best_value = radius;
            best_centers = subset;
        }
    }
    Ok(MncEstimate {
        kind: EstimatorKind::Chi,
        budget: Budget::NetSize(net_size),
        value: best_value,
        witness: Witness::Net { centers: best_centers },
        sample_size: n,
    })
}

fn covering_radius(d: &Distances, centers: &[usize]) -> f64 {
    let mut radius = 0.0f64;
    for j in 0..d.len() {
        let dj = centers.iter().map(|&c| d.get(c, j)).fold(f64::INFINITY, f64::min);
        radius = radius.max(dj);
    }
    radius
}

/// Greedy max-min dispersion: start from the diameter pair, then repeatedly
/// add the member farthest from the chosen set. Value is at least half the
/// optimal dispersion.
pub fn beta_hat(set: &SampleSet, packing_size: usize) -> Result<MncEstimate> {
    if packing_size < 2 {
        return Err(Error::invalid("beta packing size must be at least 2"));
    }
    if set.len() < packing_size {
        return Err(Error::invalid(format!(
            "beta packing of {packing_size} requested from a sample of {}",
            set.len()
        )));
    }
    let d = Distances::new(set)?;
    Ok(beta_hat_from(&d, packing_size))
}

pub(crate) fn beta_hat_from(d: &Distances, packing_size: usize) -> MncEstimate {
    let n = d.len();
    let start = diameter_from(d);
    let (i0, j0) = match start.witness {
        Witness::DiameterPair { i, j } => (i, j),
        _ => unreachable!(),
    };
    let mut selected = vec![i0, j0];
    let mut min_dist: Vec<f64> =
        (0..n).map(|k| d.get(i0, k).min(d.get(j0, k))).collect();
    while selected.len() < packing_size {
        let (mut next, mut far) = (usize::MAX, -1.0f64);
        for (k, &dk) in min_dist.iter().enumerate() {
            if !selected.contains(&k) && dk > far {
                far = dk;
                next = k;
            }
        }
        selected.push(next);
        for (k, dk) in min_dist.iter_mut().enumerate() {
            let dn = d.get(next, k);
            if dn < *dk {
                *dk = dn;
            }
        }
    }
    selected.sort_unstable();
    let value = min_pairwise(d, &selected);
    MncEstimate {
        kind: EstimatorKind::Beta,
        budget: Budget::PackingSize(packing_size),
        value,
        witness: Witness::Packing { members: selected },
        sample_size: n,
    }
}

/// Value 0 on samples with fewer than two members, beta_hat otherwise.
/// Exposes the "zero on singletons" behaviour without an empty min.
pub fn beta_hat_or_zero(set: &SampleSet, packing_size: usize) -> Result<MncEstimate> {
    if set.len() < 2 {
        return Ok(MncEstimate {
            kind: EstimatorKind::Beta,
            budget: Budget::PackingSize(packing_size),
            value: 0.0,
            witness: Witness::Packing { members: vec![] },
            sample_size: set.len(),
        });
    }
    beta_hat(set, packing_size)
}

/// Exact max-min dispersion over all M-subsets (cap 14 members).
pub fn beta_oracle(set: &SampleSet, packing_size: usize) -> Result<MncEstimate> {
    if packing_size < 2 {
        return Err(Error::invalid("beta packing size must be at least 2"));
    }
    let n = set.len();
    if n > ORACLE_CAP {
        return Err(Error::SizeCap { size: n, cap: ORACLE_CAP });
    }
    if n < packing_size {
        return Err(Error::invalid(format!(
            "beta packing of {packing_size} requested from a sample of {n}"
        )));
    }
    let d = Distances::new(set)?;
    let mut best_value = -1.0f64;
    let mut best_members = Vec::new();
    for subset in combinations(n, packing_size) {
        let v = min_pairwise(&d, &subset);
        if v > best_value {
            best_value = v;
            best_members = subset;
        }
    }
    Ok(MncEstimate {
        kind: EstimatorKind::Beta,
        budget: Budget::PackingSize(packing_size),
        value: best_value,
        witness: Witness::Packing { members: best_members },
        sample_size: n,
    })
}

fn min_pairwise(d: &Distances, members: &[usize]) -> f64 {
    let mut best = f64::INFINITY;
    for (a, &i) in members.iter().enumerate() {
        for &j in &members[(a + 1)..] {
            best = best.min(d.get(i, j));
        }
    }
    best
}

/// Lexicographic k-subsets of 0..n.
fn combinations(n: usize, k: usize) -> impl Iterator<Item = Vec<usize>> {
    let mut current: Option<Vec<usize>> = Some((0..k).collect());
    std::iter::from_fn(move || {
        let subset = current.take()?;
        let mut next = subset.clone();
        // advance to the lexicographic successor
        let mut i = k;
        loop {
            if i == 0 {
                current = None;
                break;
            }
            i -= 1;
            if next[i] < n - (k - i) {
                next[i] += 1;
                for j in (i + 1)..k {
                    next[j] = next[j - 1] + 1;
                }
                current = Some(next);
                break;
            }
        }
        Some(subset)
    })
}

/// Worst projection mask of mass at most `delta` for one function: cells are
/// ranked by |value| descending (ties toward the lower cell index) and
/// included while the mass budget holds.
pub fn worst_mask(f: &Func, delta: f64) -> Result<SubsetMask> {
    let space = f.space();
    if !(delta > 0.0) {
        return Err(Error::invalid("mass threshold delta must be positive"));
    }
    if delta > space.total_measure() * (1.0 + 1e-12) {
        return Err(Error::invalid(format!(
            "delta {delta} exceeds the total measure {}",
            space.total_measure()
        )));
    }
    let mut order: Vec<usize> = (0..space.cell_count()).collect();
    let values = f.values();
    order.sort_by(|&a, &b| {
        values[b]
            .abs()
            .partial_cmp(&values[a].abs())
            .expect("function values are finite")
            .then(a.cmp(&b))
    });
    let mut included = vec![false; space.cell_count()];
    let mut mass = 0.0;
    for &cell in &order {
        let m = space.measure(cell);
        if mass + m <= delta {
            mass += m;
            included[cell] = true;
        } else {
            break;
        }
    }
    SubsetMask::new(space.clone(), included)
}

/// Fixed-delta estimator of the measure of nonequiabsolute continuity:
/// the best projected norm over members and masks of mass at most delta.
pub fn nu_hat(set: &SampleSet, delta: f64) -> Result<MncEstimate> {
    let mut best_value = -1.0f64;
    let mut best_witness = None;
    for (idx, member) in set.members().iter().enumerate() {
        let mask = worst_mask(member, delta)?;
        let value = space::lp_norm(&space::project(member, &mask)?);
        if value > best_value {
            best_value = value;
            best_witness = Some(Witness::Mask { member: idx, cells: mask.cells() });
        }
    }
    Ok(MncEstimate {
        kind: EstimatorKind::Nu,
        budget: Budget::MassThreshold(delta),
        value: best_value,
        witness: best_witness.expect("sample sets are non-empty"),
        sample_size: set.len(),
    })
}

/// Verdict of a delta-profile sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NuVerdict {
    Vanishing,
    NonVanishing,
    Inconclusive,
}

/// nu_hat evaluated along a decreasing delta grid, with a slope-based
/// extrapolation verdict standing in for the shrinking-measure limit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NuProfile {
    pub deltas: Vec<f64>,
    pub values: Vec<f64>,
    /// Log-log slope over the last quartile of the grid, when computable.
    pub tail_slope: Option<f64>,
    pub tol_zero: f64,
    pub verdict: NuVerdict,
}

impl NuProfile {
    /// Finite-sample stand-in for the shrinking-measure limit: zero for a
    /// vanishing profile, the value at the finest delta otherwise.
    pub fn effective_value(&self) -> f64 {
        match self.verdict {
            NuVerdict::Vanishing => 0.0,
            _ => *self.values.last().expect("profiles are non-empty"),
        }
    }
}

pub const DEFAULT_SLOPE_MIN: f64 = 0.1;
pub const DEFAULT_TOL_ZERO_SCALE: f64 = 1e-6;

/// Sweeps nu_hat over the grid and classifies the tail.
///
/// The verdict is a documented heuristic: "vanishing" when the profile has
/// already reached the zero floor or decays along the tail with a log-log
/// slope of at least `slope_min`; "non-vanishing" when it has stabilized
/// above the floor (tail slope below `slope_min / 2`); otherwise
/// inconclusive. The floor is `tol_zero_scale` times the max member norm.
pub fn nu_profile(set: &SampleSet, delta_grid: &[f64]) -> Result<NuProfile> {
    nu_profile_with(set, delta_grid, DEFAULT_TOL_ZERO_SCALE, DEFAULT_SLOPE_MIN)
}

pub fn nu_profile_with(
    set: &SampleSet,
    delta_grid: &[f64],
    tol_zero_scale: f64,
    slope_min: f64,
) -> Result<NuProfile> {
    if delta_grid.is_empty() {
        return Err(Error::invalid("delta grid is empty"));
    }
    if delta_grid.windows(2).any(|w| w[0] <= w[1]) {
        return Err(Error::invalid("delta grid must be strictly decreasing"));
    }
    let finest = *delta_grid.last().unwrap();
    if finest < set.space().min_cell_measure() * (1.0 - 1e-12) {
        return Err(Error::invalid(format!(
            "finest delta {finest} is below the grid resolution {}",
            set.space().min_cell_measure()
        )));
    }
    let values: Vec<f64> = delta_grid
        .iter()
        .map(|&d| nu_hat(set, d).map(|e| e.value))
        .collect::<Result<Vec<_>>>()?;
    let tol_zero = tol_zero_scale * set.max_member_norm();
    let v_min = *values.last().unwrap();

    let quartile = (delta_grid.len() / 4).max(2).min(delta_grid.len());
    let tail_start = delta_grid.len() - quartile;
    let tail_positive = values[tail_start..].iter().all(|&v| v > 0.0);
    let tail_slope = if tail_positive {
        let xs: Vec<f64> = delta_grid[tail_start..].iter().map(|d| d.ln()).collect();
        let ys: Vec<f64> = values[tail_start..].iter().map(|v| v.ln()).collect();
        Some(lsq_slope(&xs, &ys))
    } else {
        None
    };
    let tail_non_increasing = values[tail_start..]
        .windows(2)
        .all(|w| w[1] <= w[0] * (1.0 + 1e-12));

    let verdict = if v_min <= tol_zero {
        NuVerdict::Vanishing
    } else {
        match tail_slope {
            Some(s) if s >= slope_min && tail_non_increasing => NuVerdict::Vanishing,
            Some(s) if s < slope_min / 2.0 => NuVerdict::NonVanishing,
            _ => NuVerdict::Inconclusive,
        }
    };
    Ok(NuProfile { deltas: delta_grid.to_vec(), values, tail_slope, tol_zero, verdict })
}

/// Dyadic delta grid from total/2 down to the cell measure (inclusive).
pub fn dyadic_delta_grid(set: &SampleSet) -> Vec<f64> {
    let total = set.space().total_measure();
    let floor = set.space().min_cell_measure();
    let mut grid = Vec::new();
    let mut delta = total / 2.0;
    while delta >= floor * (1.0 - 1e-12) {
        grid.push(delta);
        delta /= 2.0;
    }
    if grid.is_empty() {
        grid.push(total);
    }
    grid
}

fn lsq_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let xm = xs.iter().sum::<f64>() / n;
    let ym = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - xm) * (y - ym)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - xm) * (x - xm)).sum();
    if sxx == 0.0 {
        0.0
    } else {
        sxy / sxx
    }
}

/// Recomputes the value certified by the witness; bit-identical to the
/// reported value under the same summation order.
pub fn verify_witness(set: &SampleSet, estimate: &MncEstimate) -> Result<f64> {
    match &estimate.witness {
        Witness::DiameterPair { i, j } => space::lp_distance(set.member(*i), set.member(*j)),
        Witness::Net { centers } => {
            let d = Distances::new(set)?;
            Ok(covering_radius(&d, centers))
        }
        Witness::Packing { members } => {
            if members.len() < 2 {
                return Ok(0.0);
            }
            let d = Distances::new(set)?;
            Ok(min_pairwise(&d, members))
        }
        Witness::Mask { member, cells } => {
            let mask = SubsetMask::from_cells(set.space().clone(), cells)?;
            Ok(space::lp_norm(&space::project(set.member(*member), &mask)?))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sets::{
        self, ball_sample, disjoint_indicator_family, scale_set, spike_family, Mixture,
    };
    use crate::space::MeasureSpace;
    use std::sync::Arc;

    fn grid1024() -> Arc<MeasureSpace> {
        MeasureSpace::uniform(1024, 1.0).unwrap()
    }

    fn constants(values: &[f64]) -> SampleSet {
        let space = MeasureSpace::uniform(4, 1.0).unwrap();
        let parts = values
            .iter()
            .map(|&v| sets::GeneratorSpec::Singleton {
                p: 2.0,
                func: sets::FuncSpec::Constant { value: v },
            })
            .collect();
        sets::generate(&space, &sets::GeneratorSpec::Union { parts }).unwrap()
    }

    #[test]
    fn diameter_cases() {
        let single = constants(&[3.0]);
        assert_eq!(diameter(&single).unwrap().value, 0.0);

        let ind = disjoint_indicator_family(&grid1024(), 2.0, 8).unwrap();
        assert_eq!(diameter(&ind).unwrap().value, 2f64.sqrt());

        let tripled = scale_set(&ind, 3.0).unwrap();
        let expected = 3.0 * 2f64.sqrt();
        assert!((diameter(&tripled).unwrap().value - expected).abs() <= 1e-12 * expected);
    }

    #[test]
    fn chi_hat_cases() {
        let ind = disjoint_indicator_family(&grid1024(), 2.0, 8).unwrap();
        assert_eq!(chi_hat(&ind, 8).unwrap().value, 0.0);
        assert_eq!(chi_hat(&ind, 20).unwrap().value, 0.0);

        let two = constants(&[0.0, 1.0]);
        assert_eq!(chi_hat(&two, 1).unwrap().value, 1.0);

        assert!(chi_hat(&two, 0).is_err());
    }

    #[test]
    fn chi_oracle_cases() {
        let three = constants(&[0.0, 1.0, 2.0]);
        let est = chi_oracle(&three, 1).unwrap();
        assert_eq!(est.value, 1.0);
        assert_eq!(est.witness, Witness::Net { centers: vec![1] });

        assert_eq!(chi_oracle(&three, 3).unwrap().value, 0.0);
    }

    #[test]
    fn beta_cases() {
        let ind = disjoint_indicator_family(&grid1024(), 2.0, 8).unwrap();
        assert_eq!(beta_hat(&ind, 8).unwrap().value, 2f64.sqrt());

        let three = constants(&[0.0, 1.0, 2.0]);
        assert_eq!(beta_hat(&three, 2).unwrap().value, 2.0);
        assert_eq!(beta_oracle(&three, 3).unwrap().value, 1.0);
        assert_eq!(
            beta_oracle(&three, 2).unwrap().value,
            diameter(&three).unwrap().value
        );

        assert!(beta_hat(&three, 4).is_err());
        let single = constants(&[1.0]);
        assert!(beta_hat(&single, 2).is_err());
        assert_eq!(beta_hat_or_zero(&single, 2).unwrap().value, 0.0);
    }

    #[test]
    fn oracle_cap_enforced() {
        let ind = disjoint_indicator_family(&grid1024(), 2.0, 15).unwrap();
        assert!(matches!(chi_oracle(&ind, 3), Err(Error::SizeCap { size: 15, cap: 14 })));
        assert!(matches!(beta_oracle(&ind, 3), Err(Error::SizeCap { .. })));
    }

    #[test]
    fn nu_hat_spikes_hit_one_exactly() {
        let set = spike_family(&grid1024(), 2.0, 10).unwrap();
        let est = nu_hat(&set, 1.0 / 1024.0).unwrap();
        assert_eq!(est.value, 1.0);
        match &est.witness {
            Witness::Mask { member, cells } => {
                assert_eq!(*member, 9); // narrowest spike
                assert_eq!(cells.len(), 1);
            }
            w => panic!("unexpected witness {w:?}"),
        }
    }

    #[test]
    fn nu_hat_constant_value() {
        let set = constants(&[2.0]);
        // delta = 1/4 keeps exactly one of four cells: |c| * delta^(1/2).
        let est = nu_hat(&set, 0.25).unwrap();
        assert_eq!(est.value, 2.0 * 0.25f64.sqrt());
    }

    #[test]
    fn nu_hat_rejects_bad_delta() {
        let set = constants(&[1.0]);
        assert!(nu_hat(&set, 0.0).is_err());
        assert!(nu_hat(&set, -0.5).is_err());
        assert!(nu_hat(&set, 2.0).is_err());
    }

    #[test]
    fn scaling_exactness_with_identical_witnesses() {
        let space = grid1024();
        let base = ball_sample(&space, 2.0, 1.0, 24, 17, Mixture::default()).unwrap();
        for rho in [0.25, 0.5, 2.0, 4.0] {
            let scaled = scale_set(&base, rho).unwrap();

            let d0 = diameter(&base).unwrap();
            let d1 = diameter(&scaled).unwrap();
            assert_eq!(d0.witness, d1.witness);
            assert!((d1.value - rho * d0.value).abs() <= 1e-12 * d1.value.abs());

            let c0 = chi_hat(&base, 8).unwrap();
            let c1 = chi_hat(&scaled, 8).unwrap();
            assert_eq!(c0.witness, c1.witness);
            assert!((c1.value - rho * c0.value).abs() <= 1e-12 * c1.value.abs());

            let b0 = beta_hat(&base, 8).unwrap();
            let b1 = beta_hat(&scaled, 8).unwrap();
            assert_eq!(b0.witness, b1.witness);
            assert!((b1.value - rho * b0.value).abs() <= 1e-12 * b1.value.abs());

            let n0 = nu_hat(&base, 1.0 / 1024.0).unwrap();
            let n1 = nu_hat(&scaled, 1.0 / 1024.0).unwrap();
            assert_eq!(n0.witness, n1.witness);
            assert!((n1.value - rho * n0.value).abs() <= 1e-12 * n1.value.abs());
        }
    }

    #[test]
    fn witnesses_reproduce_values() {
        let space = grid1024();
        let set = ball_sample(&space, 2.0, 1.0, 16, 23, Mixture::default()).unwrap();
        for est in [
            diameter(&set).unwrap(),
            chi_hat(&set, 5).unwrap(),
            beta_hat(&set, 4).unwrap(),
            nu_hat(&set, 1.0 / 256.0).unwrap(),
        ] {
            let replay = verify_witness(&set, &est).unwrap();
            assert_eq!(replay, est.value, "kind {:?}", est.kind);
        }
    }

    #[test]
    fn chi_net_covers_sample() {
        let set = ball_sample(&grid1024(), 2.0, 1.0, 20, 29, Mixture::default()).unwrap();
        let est = chi_hat(&set, 6).unwrap();
        let d = Distances::new(&set).unwrap();
        let centers = match &est.witness {
            Witness::Net { centers } => centers.clone(),
            _ => unreachable!(),
        };
        for j in 0..set.len() {
            let dj = centers.iter().map(|&c| d.get(c, j)).fold(f64::INFINITY, f64::min);
            assert!(dj <= est.value + 1e-12);
        }
    }

    #[test]
    fn beta_packing_is_separated() {
        let set = ball_sample(&grid1024(), 2.0, 1.0, 20, 31, Mixture::default()).unwrap();
        let est = beta_hat(&set, 5).unwrap();
        let d = Distances::new(&set).unwrap();
        let members = match &est.witness {
            Witness::Packing { members } => members.clone(),
            _ => unreachable!(),
        };
        for (a, &i) in members.iter().enumerate() {
            for &j in &members[(a + 1)..] {
                assert!(d.get(i, j) >= est.value - 1e-12);
            }
        }
    }

    #[test]
    fn oracle_sandwich_on_random_instances() {
        let space = MeasureSpace::uniform(64, 1.0).unwrap();
        let mut checked = 0;
        for seed in 0..50u64 {
            let count = 5 + (seed as usize % 8); // 5..=12
            let set = ball_sample(&space, 2.0, 1.0, count, seed, Mixture::default()).unwrap();
            let n = 1 + (seed as usize % (count - 1));
            let greedy = chi_hat(&set, n).unwrap().value;
            let exact = chi_oracle(&set, n).unwrap().value;
            assert!(exact <= greedy + 1e-12 && greedy <= 2.0 * exact + 1e-12);

            let m = 2 + (seed as usize % (count - 1));
            let greedy_b = beta_hat(&set, m).unwrap().value;
            let exact_b = beta_oracle(&set, m).unwrap().value;
            assert!(greedy_b >= exact_b / 2.0 - 1e-12 && greedy_b <= exact_b + 1e-12);
            checked += 1;
        }
        assert_eq!(checked, 50);
    }

    #[test]
    fn nu_profile_verdicts() {
        let space = grid1024();

        let spikes = spike_family(&space, 2.0, 10).unwrap();
        let grid = dyadic_delta_grid(&spikes);
        let profile = nu_profile(&spikes, &grid).unwrap();
        assert_eq!(profile.verdict, NuVerdict::NonVanishing);
        assert_eq!(*profile.values.last().unwrap(), 1.0);
        assert_eq!(profile.effective_value(), 1.0);

        let smooth = sets::smooth_random_family(&space, 2.0, 6, 3, 1.0).unwrap();
        let profile = nu_profile(&smooth, &dyadic_delta_grid(&smooth)).unwrap();
        assert_eq!(profile.verdict, NuVerdict::Vanishing);
        assert_eq!(profile.effective_value(), 0.0);
        // bounded values: nu(delta) <= c * delta^(1/p)
        let c = smooth
            .members()
            .iter()
            .flat_map(|m| m.values().iter().map(|v| v.abs()))
            .fold(0.0, f64::max);
        for (d, v) in profile.deltas.iter().zip(&profile.values) {
            assert!(*v <= c * d.sqrt() + 1e-12);
        }

        let single = constants(&[1.0]);
        let profile = nu_profile(&single, &dyadic_delta_grid(&single)).unwrap();
        assert_eq!(profile.verdict, NuVerdict::Vanishing);
    }

    #[test]
    fn nu_profile_monotone_in_delta() {
        let set = ball_sample(&grid1024(), 2.0, 1.0, 12, 37, Mixture::default()).unwrap();
        let profile = nu_profile(&set, &dyadic_delta_grid(&set)).unwrap();
        for w in profile.values.windows(2) {
            assert!(w[1] <= w[0] + 1e-15);
        }
    }

    #[test]
    fn nu_profile_rejects_bad_grids() {
        let set = constants(&[1.0]);
        assert!(nu_profile(&set, &[]).is_err());
        assert!(nu_profile(&set, &[0.25, 0.5]).is_err());
        assert!(nu_profile(&set, &[0.5, 0.5]).is_err());
        assert!(nu_profile(&set, &[0.5, 1e-6]).is_err());
    }

    #[test]
    fn translation_bound_for_nu() {
        let space = grid1024();
        let set = spike_family(&space, 2.0, 6).unwrap();
        let anchor = sets::FuncSpec::Smooth { seed: 5, norm: 0.5 };
        let moved = translated_set(&set, &anchor);
        let delta = 1.0 / 64.0;
        let before = nu_hat(&set, delta).unwrap().value;
        let after = nu_hat(&moved, delta).unwrap().value;
        let anchor_f = anchor.materialize(&space, 2.0).unwrap();
        let mask = worst_mask(&anchor_f, delta).unwrap();
        let bound = space::lp_norm(&space::project(&anchor_f, &mask).unwrap());
        assert!((after - before).abs() <= bound + 1e-12);
    }

    fn translated_set(set: &SampleSet, anchor: &sets::FuncSpec) -> SampleSet {
        sets::translate_set(set, anchor).unwrap()
    }
}
