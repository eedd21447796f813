//! Seeded samplers for bounded subsets of Lp, and set algebra.
//!
//! A bounded set is represented by a finite [`SampleSet`]; every estimator in
//! this crate measures the sample, which is a lower-bound proxy of the set it
//! stands for. Samplers are pure functions of their [`GeneratorSpec`], so a
//! set's provenance regenerates it byte for byte.
//!
//! Randomness comes from `ChaCha8Rng` seeded with `seed_from_u64`; the stream
//! is portable across platforms, which is what makes golden reports possible.

use std::sync::Arc;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::space::{self, Func, MeasureSpace};

/// Mixture weights for the ball/sphere/annulus samplers.
///
/// Defaults put half the budget into spike members so that the sampled balls
/// are hard for all three measures of noncompactness: spikes keep the
/// nonequiabsolute-continuity estimator away from zero, random members keep
/// the effective dimension high.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Mixture {
    pub spike: f64,
    pub smooth: f64,
    pub random: f64,
}

impl Default for Mixture {
    fn default() -> Self {
        Mixture { spike: 0.5, smooth: 0.25, random: 0.25 }
    }
}

impl Mixture {
    pub const ALL_SPIKES: Mixture = Mixture { spike: 1.0, smooth: 0.0, random: 0.0 };

    fn validate(&self) -> Result<()> {
        let ws = [self.spike, self.smooth, self.random];
        if ws.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::invalid("mixture weights must be non-negative"));
        }
        let sum: f64 = ws.iter().sum();
        if (sum - 1.0).abs() > 1e-9 {
            return Err(Error::invalid(format!("mixture weights must sum to 1, got {sum}")));
        }
        Ok(())
    }

    /// Deterministic member counts per role; spikes are assigned first.
    fn counts(&self, count: usize) -> (usize, usize, usize) {
        let n_spike = ((count as f64) * self.spike).round() as usize;
        let n_spike = n_spike.min(count);
        let n_smooth = (((count as f64) * self.smooth).round() as usize).min(count - n_spike);
        (n_spike, n_smooth, count - n_spike - n_smooth)
    }
}

/// A function described by name and parameters, used for translation anchors
/// and comparison bounds in configuration files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum FuncSpec {
    Zero,
    Constant { value: f64 },
    /// Spike of the given norm on the first `support_cells` cells.
    Spike { support_cells: usize, norm: f64 },
    /// Low-frequency trigonometric sample rescaled to the given norm.
    Smooth { seed: u64, norm: f64 },
}

impl FuncSpec {
    pub fn materialize(&self, space: &Arc<MeasureSpace>, p: f64) -> Result<Func> {
        match *self {
            FuncSpec::Zero => Func::zero(space.clone(), p),
            FuncSpec::Constant { value } => Func::constant(space.clone(), value, p),
            FuncSpec::Spike { support_cells, norm } => {
                if support_cells == 0 || support_cells > space.cell_count() {
                    return Err(Error::invalid(format!(
                        "spike support of {support_cells} cells does not fit a {}-cell grid",
                        space.cell_count()
                    )));
                }
                let raw = spike_on_block(space, p, 0, support_cells)?;
                Ok(rescale_to(&raw, norm))
            }
            FuncSpec::Smooth { seed, norm } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let raw = smooth_values(space, p, &mut rng)?;
                Ok(rescale_to(&raw, norm))
            }
        }
    }
}

/// Description of a sampler run; sufficient to regenerate the set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum GeneratorSpec {
    /// Unit-norm spikes with supports 1/2, 1/4, ... of the domain.
    Spike { p: f64, count: usize },
    /// One normalized indicator per cell; pairwise Lp distance 2^(1/p).
    DisjointIndicator { p: f64, count: usize },
    /// Equi-integrable low-frequency members, each of the given norm.
    SmoothRandom { p: f64, count: usize, seed: u64, norm: f64 },
    /// Sample of the ball of the given radius.
    Ball {
        p: f64,
        radius: f64,
        count: usize,
        seed: u64,
        #[serde(default)]
        mixture: Mixture,
    },
    /// Sample of the sphere of the given radius.
    Sphere {
        p: f64,
        radius: f64,
        count: usize,
        seed: u64,
        #[serde(default)]
        mixture: Mixture,
    },
    /// Sample with norms in (r_inner, r_outer].
    Annulus {
        p: f64,
        r_inner: f64,
        r_outer: f64,
        count: usize,
        seed: u64,
        #[serde(default)]
        mixture: Mixture,
    },
    Singleton { p: f64, func: FuncSpec },
    Union { parts: Vec<GeneratorSpec> },
    Scaled { factor: f64, base: Box<GeneratorSpec> },
    Translated { anchor: FuncSpec, base: Box<GeneratorSpec> },
    MinkowskiSum { left: Box<GeneratorSpec>, right: Box<GeneratorSpec> },
    /// Memberwise image of a base set under an operator.
    Image { operator: Box<crate::operators::OperatorSpec>, base: Box<GeneratorSpec> },
}

/// How to draw samples when an analysis needs fresh sets: member count, RNG
/// seed, and the mixture of member roles.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SamplingPlan {
    pub count: usize,
    pub seed: u64,
    #[serde(default)]
    pub mixture: Mixture,
}

impl Default for SamplingPlan {
    fn default() -> Self {
        SamplingPlan { count: 32, seed: 1, mixture: Mixture::default() }
    }
}

/// A finite family of functions standing for a bounded subset of Lp.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleSet {
    space: Arc<MeasureSpace>,
    exponent: f64,
    members: Vec<Func>,
    provenance: GeneratorSpec,
}

impl SampleSet {
    fn new(
        space: Arc<MeasureSpace>,
        exponent: f64,
        members: Vec<Func>,
        provenance: GeneratorSpec,
    ) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::invalid("a sample set must have at least one member"));
        }
        debug_assert!(members
            .iter()
            .all(|m| space::same_space(m.space(), &space) && m.exponent() == exponent));
        Ok(SampleSet { space, exponent, members, provenance })
    }

    pub fn space(&self) -> &Arc<MeasureSpace> {
        &self.space
    }

    pub fn exponent(&self) -> f64 {
        self.exponent
    }

    pub fn members(&self) -> &[Func] {
        &self.members
    }

    pub fn member(&self, i: usize) -> &Func {
        &self.members[i]
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn provenance(&self) -> &GeneratorSpec {
        &self.provenance
    }

    pub fn max_member_norm(&self) -> f64 {
        self.members.iter().map(space::lp_norm).fold(0.0, f64::max)
    }

    /// Rebuilds a set whose members carry a different Lp exponent tag.
    pub(crate) fn with_members(&self, members: Vec<Func>, provenance: GeneratorSpec) -> SampleSet {
        let exponent = members[0].exponent();
        let space = members[0].space().clone();
        SampleSet { space, exponent, members, provenance }
    }
}

/// Runs the sampler described by `spec` on `space`.
pub fn generate(space: &Arc<MeasureSpace>, spec: &GeneratorSpec) -> Result<SampleSet> {
    match spec {
        GeneratorSpec::Spike { p, count } => spike_family(space, *p, *count),
        GeneratorSpec::DisjointIndicator { p, count } => {
            disjoint_indicator_family(space, *p, *count)
        }
        GeneratorSpec::SmoothRandom { p, count, seed, norm } => {
            smooth_random_family(space, *p, *count, *seed, *norm)
        }
        GeneratorSpec::Ball { p, radius, count, seed, mixture } => {
            ball_sample(space, *p, *radius, *count, *seed, *mixture)
        }
        GeneratorSpec::Sphere { p, radius, count, seed, mixture } => {
            sphere_sample(space, *p, *radius, *count, *seed, *mixture)
        }
        GeneratorSpec::Annulus { p, r_inner, r_outer, count, seed, mixture } => {
            annulus_sample(space, *p, *r_inner, *r_outer, *count, *seed, *mixture)
        }
        GeneratorSpec::Singleton { p, func } => {
            let f = func.materialize(space, *p)?;
            SampleSet::new(space.clone(), *p, vec![f], spec.clone())
        }
        GeneratorSpec::Union { parts } => {
            if parts.is_empty() {
                return Err(Error::invalid("union of zero generators"));
            }
            let mut sets = parts.iter().map(|g| generate(space, g));
            let mut acc = sets.next().unwrap()?;
            for s in sets {
                acc = union_sets(&acc, &s?)?;
            }
            Ok(acc)
        }
        GeneratorSpec::Scaled { factor, base } => {
            let base_set = generate(space, base)?;
            scale_set(&base_set, *factor)
        }
        GeneratorSpec::Translated { anchor, base } => {
            let base_set = generate(space, base)?;
            translate_set(&base_set, anchor)
        }
        GeneratorSpec::MinkowskiSum { left, right } => {
            let l = generate(space, left)?;
            let r = generate(space, right)?;
            sum_sets(&l, &r)
        }
        GeneratorSpec::Image { operator, base } => {
            let base_set = generate(space, base)?;
            crate::operators::apply_set(operator, &base_set)
        }
    }
}

fn check_space_uniform(space: &MeasureSpace) -> Result<()> {
    if !space.is_uniform() {
        return Err(Error::invalid("this sampler requires a uniform grid"));
    }
    Ok(())
}

/// Unit-norm spike on `support_cells` cells starting at `start`.
fn spike_on_block(
    space: &Arc<MeasureSpace>,
    p: f64,
    start: usize,
    support_cells: usize,
) -> Result<Func> {
    let n = space.cell_count();
    if start + support_cells > n {
        return Err(Error::invalid("spike support exceeds the grid"));
    }
    let support_measure: f64 = support_cells as f64 * space.measure(0);
    let height = space::root(1.0 / support_measure, p);
    let mut values = vec![0.0; n];
    for v in values.iter_mut().skip(start).take(support_cells) {
        *v = height;
    }
    Func::new(space.clone(), values, p)
}

/// Rescales `f` so that its Lp norm is `target` (exact up to one rounding).
fn rescale_to(f: &Func, target: f64) -> Func {
    let norm = space::lp_norm(f);
    space::scale(f, target / norm)
}

/// The canonical non-equi-integrable family: unit-norm spikes whose supports
/// shrink through measures 1/2, 1/4, ..., 1/2^count of the domain.
///
/// On power-of-two grids with total measure 1 every member norm is exactly 1.
pub fn spike_family(space: &Arc<MeasureSpace>, p: f64, count: usize) -> Result<SampleSet> {
    check_space_uniform(space)?;
    let n = space.cell_count();
    if count == 0 {
        return Err(Error::invalid("spike family needs count >= 1"));
    }
    // Narrowest support is n / 2^count cells; it must contain a whole cell.
    if count >= usize::BITS as usize || (1usize << count) > n {
        return Err(Error::invalid(format!(
            "spike count {count} too large for a {n}-cell grid"
        )));
    }
    let members = (1..=count)
        .map(|k| spike_on_block(space, p, 0, n >> k))
        .collect::<Result<Vec<_>>>()?;
    SampleSet::new(space.clone(), p, members, GeneratorSpec::Spike { p, count })
}

/// Maximally separated family: member i is the normalized indicator of cell i.
/// Pairwise Lp distances are exactly 2^(1/p).
pub fn disjoint_indicator_family(
    space: &Arc<MeasureSpace>,
    p: f64,
    count: usize,
) -> Result<SampleSet> {
    let n = space.cell_count();
    if count == 0 {
        return Err(Error::invalid("indicator family needs count >= 1"));
    }
    if count > n {
        return Err(Error::invalid(format!(
            "indicator count {count} too large for a {n}-cell grid"
        )));
    }
    let members = (0..count)
        .map(|i| {
            let height = space::root(1.0 / space.measure(i), p);
            let mut values = vec![0.0; n];
            values[i] = height;
            Func::new(space.clone(), values, p)
        })
        .collect::<Result<Vec<_>>>()?;
    SampleSet::new(space.clone(), p, members, GeneratorSpec::DisjointIndicator { p, count })
}

fn smooth_values(space: &Arc<MeasureSpace>, p: f64, rng: &mut ChaCha8Rng) -> Result<Func> {
    let n = space.cell_count();
    let amps: Vec<f64> = (0..3).map(|_| rng.random_range(-1.0..1.0)).collect();
    let phases: Vec<f64> = (0..3).map(|_| rng.random_range(0.0..std::f64::consts::TAU)).collect();
    let values: Vec<f64> = (0..n)
        .map(|s| {
            let x = (s as f64 + 0.5) / n as f64;
            (0..3)
                .map(|k| amps[k] * (std::f64::consts::TAU * (k as f64 + 1.0) * x + phases[k]).cos())
                .sum()
        })
        .collect();
    Func::new(space.clone(), values, p)
}

fn random_values(space: &Arc<MeasureSpace>, p: f64, rng: &mut ChaCha8Rng) -> Result<Func> {
    let n = space.cell_count();
    let values: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
    Func::new(space.clone(), values, p)
}

/// Equi-integrable family of low-frequency members, each of norm `norm`.
pub fn smooth_random_family(
    space: &Arc<MeasureSpace>,
    p: f64,
    count: usize,
    seed: u64,
    norm: f64,
) -> Result<SampleSet> {
    if count == 0 {
        return Err(Error::invalid("smooth family needs count >= 1"));
    }
    if !(norm > 0.0) {
        return Err(Error::invalid("smooth family norm must be positive"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let members = (0..count)
        .map(|_| {
            let raw = nonzero_draw(space, p, &mut rng, smooth_values)?;
            Ok(rescale_to(&raw, norm))
        })
        .collect::<Result<Vec<_>>>()?;
    SampleSet::new(
        space.clone(),
        p,
        members,
        GeneratorSpec::SmoothRandom { p, count, seed, norm },
    )
}

fn nonzero_draw(
    space: &Arc<MeasureSpace>,
    p: f64,
    rng: &mut ChaCha8Rng,
    draw: fn(&Arc<MeasureSpace>, f64, &mut ChaCha8Rng) -> Result<Func>,
) -> Result<Func> {
    for _ in 0..64 {
        let f = draw(space, p, rng)?;
        if space::lp_norm(&f) > 0.0 {
            return Ok(f);
        }
    }
    Err(Error::invalid("all draws were zero and cannot be normalized"))
}

enum Role {
    Spike,
    Smooth,
    Random,
}

/// Shared body of the ball/sphere/annulus samplers. `target_norm` maps the
/// per-member draw t in (0, 1] to the requested norm; member 0 is always the
/// narrowest spike at the full norm (t = 1), which pins the spike-rich
/// denominators used by the analysis harness to exact values.
fn mixture_sample(
    space: &Arc<MeasureSpace>,
    p: f64,
    count: usize,
    seed: u64,
    mixture: Mixture,
    target_norm: impl Fn(f64) -> f64,
    provenance: GeneratorSpec,
) -> Result<SampleSet> {
    check_space_uniform(space)?;
    mixture.validate()?;
    if count == 0 {
        return Err(Error::invalid("sampler needs count >= 1"));
    }
    let n = space.cell_count();
    let levels = n.ilog2().max(1) as usize;
    let (n_spike, n_smooth, _) = mixture.counts(count);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut members = Vec::with_capacity(count);
    for k in 0..count {
        let role = if k < n_spike {
            Role::Spike
        } else if k < n_spike + n_smooth {
            Role::Smooth
        } else {
            Role::Random
        };
        let member = match role {
            Role::Spike if k == 0 => {
                let raw = spike_on_block(space, p, 0, 1)?;
                rescale_to(&raw, target_norm(1.0))
            }
            Role::Spike => {
                let support = 1usize << (k % (levels + 1));
                let blocks = n / support;
                let start = rng.random_range(0..blocks) * support;
                let t = 1.0 - rng.random::<f64>();
                let raw = spike_on_block(space, p, start, support)?;
                rescale_to(&raw, target_norm(t))
            }
            Role::Smooth => {
                let raw = nonzero_draw(space, p, &mut rng, smooth_values)?;
                let t = 1.0 - rng.random::<f64>();
                rescale_to(&raw, target_norm(t))
            }
            Role::Random => {
                let raw = nonzero_draw(space, p, &mut rng, random_values)?;
                let t = 1.0 - rng.random::<f64>();
                rescale_to(&raw, target_norm(t))
            }
        };
        members.push(member);
    }
    SampleSet::new(space.clone(), p, members, provenance)
}

/// Sample of B_radius: every member norm is <= radius (up to one rounding).
pub fn ball_sample(
    space: &Arc<MeasureSpace>,
    p: f64,
    radius: f64,
    count: usize,
    seed: u64,
    mixture: Mixture,
) -> Result<SampleSet> {
    if !(radius > 0.0) {
        return Err(Error::invalid("ball radius must be positive"));
    }
    mixture_sample(
        space,
        p,
        count,
        seed,
        mixture,
        |t| radius * t,
        GeneratorSpec::Ball { p, radius, count, seed, mixture },
    )
}

/// Sample of S_radius: every member norm equals radius (relative 1e-12).
pub fn sphere_sample(
    space: &Arc<MeasureSpace>,
    p: f64,
    radius: f64,
    count: usize,
    seed: u64,
    mixture: Mixture,
) -> Result<SampleSet> {
    if !(radius > 0.0) {
        return Err(Error::invalid("sphere radius must be positive"));
    }
    mixture_sample(
        space,
        p,
        count,
        seed,
        mixture,
        |_| radius,
        GeneratorSpec::Sphere { p, radius, count, seed, mixture },
    )
}

/// Sample with member norms in (r_inner, r_outer].
pub fn annulus_sample(
    space: &Arc<MeasureSpace>,
    p: f64,
    r_inner: f64,
    r_outer: f64,
    count: usize,
    seed: u64,
    mixture: Mixture,
) -> Result<SampleSet> {
    if !(r_inner > 0.0) || !(r_inner < r_outer) {
        return Err(Error::invalid(format!(
            "annulus radii must satisfy 0 < r_inner < r_outer, got ({r_inner}, {r_outer})"
        )));
    }
    mixture_sample(
        space,
        p,
        count,
        seed,
        mixture,
        |t| r_inner + t * (r_outer - r_inner),
        GeneratorSpec::Annulus { p, r_inner, r_outer, count, seed, mixture },
    )
}

/// Memberwise scaling rho * u.
pub fn scale_set(set: &SampleSet, rho: f64) -> Result<SampleSet> {
    if !rho.is_finite() {
        return Err(Error::invalid("scale factor must be finite"));
    }
    let members: Vec<Func> = set.members().iter().map(|f| space::scale(f, rho)).collect();
    SampleSet::new(
        set.space().clone(),
        set.exponent(),
        members,
        GeneratorSpec::Scaled { factor: rho, base: Box::new(set.provenance().clone()) },
    )
}

/// Memberwise translation u + anchor.
pub fn translate_set(set: &SampleSet, anchor: &FuncSpec) -> Result<SampleSet> {
    let shift = anchor.materialize(set.space(), set.exponent())?;
    let members: Vec<Func> = set
        .members()
        .iter()
        .map(|f| space::axpy(1.0, f, &shift))
        .collect::<Result<Vec<_>>>()?;
    SampleSet::new(
        set.space().clone(),
        set.exponent(),
        members,
        GeneratorSpec::Translated {
            anchor: anchor.clone(),
            base: Box::new(set.provenance().clone()),
        },
    )
}

/// Concatenation of the two member lists.
pub fn union_sets(a: &SampleSet, b: &SampleSet) -> Result<SampleSet> {
    check_compatible(a, b)?;
    let mut members = a.members().to_vec();
    members.extend_from_slice(b.members());
    SampleSet::new(
        a.space().clone(),
        a.exponent(),
        members,
        GeneratorSpec::Union { parts: vec![a.provenance().clone(), b.provenance().clone()] },
    )
}

/// All pairwise sums {u + v}, ordered by (member of a, member of b).
pub fn sum_sets(a: &SampleSet, b: &SampleSet) -> Result<SampleSet> {
    check_compatible(a, b)?;
    let mut members = Vec::with_capacity(a.len() * b.len());
    for u in a.members() {
        for v in b.members() {
            members.push(space::axpy(1.0, u, v)?);
        }
    }
    SampleSet::new(
        a.space().clone(),
        a.exponent(),
        members,
        GeneratorSpec::MinkowskiSum {
            left: Box::new(a.provenance().clone()),
            right: Box::new(b.provenance().clone()),
        },
    )
}

fn check_compatible(a: &SampleSet, b: &SampleSet) -> Result<()> {
    if !space::same_space(a.space(), b.space()) {
        return Err(Error::SpaceMismatch("set algebra across different spaces".into()));
    }
    if a.exponent() != b.exponent() {
        return Err(Error::ExponentMismatch { expected: a.exponent(), found: b.exponent() });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::{lp_distance, lp_norm};

    fn grid1024() -> Arc<MeasureSpace> {
        MeasureSpace::uniform(1024, 1.0).unwrap()
    }

    #[test]
    fn spike_family_has_exact_unit_norms() {
        let set = spike_family(&grid1024(), 2.0, 10).unwrap();
        assert_eq!(set.len(), 10);
        for (k, m) in set.members().iter().enumerate() {
            assert_eq!(lp_norm(m), 1.0, "member {k}");
            let support = m.values().iter().filter(|v| **v != 0.0).count();
            assert_eq!(support, 1024 >> (k + 1));
        }
    }

    #[test]
    fn spike_family_p1_unit_norms() {
        let set = spike_family(&MeasureSpace::uniform(4, 1.0).unwrap(), 1.0, 2).unwrap();
        for m in set.members() {
            assert_eq!(lp_norm(m), 1.0);
        }
    }

    #[test]
    fn spike_family_rejects_oversized_count() {
        assert!(spike_family(&MeasureSpace::uniform(4, 1.0).unwrap(), 2.0, 3).is_err());
    }

    #[test]
    fn indicator_family_distances() {
        let set = disjoint_indicator_family(&grid1024(), 2.0, 8).unwrap();
        for i in 0..set.len() {
            for j in (i + 1)..set.len() {
                let d = lp_distance(set.member(i), set.member(j)).unwrap();
                assert_eq!(d, 2f64.sqrt());
            }
        }

        let set1 = disjoint_indicator_family(&grid1024(), 1.0, 3).unwrap();
        for i in 0..3 {
            for j in (i + 1)..3 {
                let d = lp_distance(set1.member(i), set1.member(j)).unwrap();
                assert_eq!(d, 2.0);
            }
        }
    }

    #[test]
    fn ball_sample_contract() {
        let space = grid1024();
        let set = ball_sample(&space, 2.0, 1.0, 32, 7, Mixture::default()).unwrap();
        assert_eq!(set.len(), 32);
        for m in set.members() {
            assert!(lp_norm(m) <= 1.0 + 1e-12);
        }
        // First member is the narrowest full-norm spike.
        let first = set.member(0);
        assert_eq!(first.values().iter().filter(|v| **v != 0.0).count(), 1);
        assert!((lp_norm(first) - 1.0).abs() <= 1e-12);

        let again = ball_sample(&space, 2.0, 1.0, 32, 7, Mixture::default()).unwrap();
        assert_eq!(set, again);

        let other_seed = ball_sample(&space, 2.0, 1.0, 32, 8, Mixture::default()).unwrap();
        assert_ne!(set, other_seed);
    }

    #[test]
    fn sphere_sample_norms_and_scaling_consistency() {
        let space = grid1024();
        let s1 = sphere_sample(&space, 2.0, 1.0, 24, 3, Mixture::default()).unwrap();
        for m in s1.members() {
            assert!((lp_norm(m) - 1.0).abs() <= 1e-12);
        }
        let s2 = sphere_sample(&space, 2.0, 2.0, 24, 3, Mixture::default()).unwrap();
        let scaled = scale_set(&s1, 2.0).unwrap();
        for (a, b) in s2.members().iter().zip(scaled.members()) {
            for (x, y) in a.values().iter().zip(b.values()) {
                assert!((x - y).abs() <= 1e-15 * x.abs().max(1.0));
            }
        }
    }

    #[test]
    fn sphere_singleton_spike() {
        let set = sphere_sample(&grid1024(), 2.0, 0.75, 1, 11, Mixture::ALL_SPIKES).unwrap();
        assert_eq!(set.len(), 1);
        assert!((lp_norm(set.member(0)) - 0.75).abs() <= 1e-12);
    }

    #[test]
    fn annulus_sample_norm_window() {
        let space = grid1024();
        let set = annulus_sample(&space, 2.0, 1.0, 2.0, 24, 5, Mixture::default()).unwrap();
        for m in set.members() {
            let n = lp_norm(m);
            assert!(n > 1.0 && n <= 2.0 + 1e-12, "norm {n} outside (1, 2]");
        }
        assert!((lp_norm(set.member(0)) - 2.0).abs() <= 1e-12);

        let thin = annulus_sample(&space, 2.0, 1.0, 1.0 + 1e-9, 8, 5, Mixture::default()).unwrap();
        for m in thin.members() {
            assert!((lp_norm(m) - 1.0).abs() <= 2e-9);
        }

        assert!(annulus_sample(&space, 2.0, 2.0, 1.0, 8, 5, Mixture::default()).is_err());
        assert!(annulus_sample(&space, 2.0, 2.0, 2.0, 8, 5, Mixture::default()).is_err());
    }

    #[test]
    fn regeneration_from_provenance_is_byte_exact() {
        let space = grid1024();
        let ball = ball_sample(&space, 2.0, 1.5, 16, 42, Mixture::default()).unwrap();
        let scaled = scale_set(&ball, 0.5).unwrap();
        let moved = translate_set(&scaled, &FuncSpec::Constant { value: 0.25 }).unwrap();
        let regenerated = generate(&space, moved.provenance()).unwrap();
        assert_eq!(moved, regenerated);
    }

    #[test]
    fn set_algebra_shapes() {
        let space = grid1024();
        let a = spike_family(&space, 2.0, 4).unwrap();
        let b = disjoint_indicator_family(&space, 2.0, 3).unwrap();

        let identity = scale_set(&a, 1.0).unwrap();
        for (x, y) in identity.members().iter().zip(a.members()) {
            assert_eq!(x.values(), y.values());
        }

        let zeroed = scale_set(&a, 0.0).unwrap();
        for m in zeroed.members() {
            assert_eq!(lp_norm(m), 0.0);
        }

        let u = union_sets(&a, &b).unwrap();
        assert_eq!(u.len(), 7);

        let s = sum_sets(&a, &b).unwrap();
        assert_eq!(s.len(), 12);
    }

    #[test]
    fn scale_set_composes() {
        let space = grid1024();
        let a = ball_sample(&space, 2.0, 1.0, 8, 9, Mixture::default()).unwrap();
        let twice = scale_set(&scale_set(&a, 0.3).unwrap(), 5.0).unwrap();
        let once = scale_set(&a, 1.5).unwrap();
        for (x, y) in twice.members().iter().zip(once.members()) {
            for (u, v) in x.values().iter().zip(y.values()) {
                assert!((u - v).abs() <= 1e-15 * v.abs().max(1e-300));
            }
        }
    }

    #[test]
    fn mixture_validation() {
        let bad = Mixture { spike: 0.9, smooth: 0.3, random: 0.1 };
        assert!(ball_sample(&grid1024(), 2.0, 1.0, 8, 1, bad).is_err());
    }

    #[test]
    fn smooth_family_is_bounded_and_normed() {
        let set = smooth_random_family(&grid1024(), 2.0, 6, 13, 1.0).unwrap();
        for m in set.members() {
            assert!((lp_norm(m) - 1.0).abs() <= 1e-12);
            assert!(m.values().iter().all(|v| v.abs() <= 16.0));
        }
    }
}
