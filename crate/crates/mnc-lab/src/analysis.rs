//! The theorem-facing layer: degree estimation, the spherical-property
//! check, condensing-rate classification at a point and at infinity,
//! improving and comparability checks, and the complete-continuity contrast.
//!
//! Zero tests are scale-aware (`tol_zero = zero_scale * reference`, with the
//! reference being the estimator value of the corresponding unmapped ball or
//! sphere). Under the nonequiabsolute-continuity estimator, "zero" is decided
//! through the delta-profile verdict rather than a single fixed-delta value:
//! the fixed-delta estimator of any bounded image stays of order
//! sqrt(delta) * sup-norm, so the profile's extrapolated limit is the
//! finite-sample stand-in for the shrinking-measure limit. Verdicts are
//! empirical with the decision rules stated on each function; they are not
//! proofs.
//!
//! All radius sweeps scale one base sample (same seed) memberwise, which
//! turns set equalities like psi(B_r) = r * psi(B_1) into exact estimator
//! identities with identical witnesses.

use serde::{Deserialize, Serialize};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::estimators::{
    self, beta_hat_or_zero, chi_hat_from, Distances, MncEstimate, NuProfile, NuVerdict,
};
use crate::operators::{
    self, apply_set, frechet_analytic, is_linear, DerivativeSpec, LinearPart, OperatorSpec,
};
use crate::sets::{self, FuncSpec, GeneratorSpec, SampleSet, SamplingPlan};
use crate::space::{self, Func, MeasureSpace};

/// Estimator choice plus its budget parameter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum EstimatorSpec {
    Diameter,
    Chi { net_size: usize },
    Beta { packing_size: usize },
    Nu { delta: f64 },
}

impl EstimatorSpec {
    pub fn describe(&self) -> String {
        match self {
            EstimatorSpec::Diameter => "diameter".into(),
            EstimatorSpec::Chi { net_size } => format!("chi-hat(N={net_size})"),
            EstimatorSpec::Beta { packing_size } => format!("beta-hat(M={packing_size})"),
            EstimatorSpec::Nu { delta } => format!("nu-hat(delta={delta})"),
        }
    }
}

/// Global decision thresholds. Defaults follow the documented decision rules;
/// the contrast thresholds are frozen from the calibration run shipped with
/// the crate (see `tests/golden/contrast_calibration.csv`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// tol_zero = zero_scale * reference scale.
    pub zero_scale: f64,
    /// Rate threshold for condensing verdicts under exact estimators.
    pub rate_tol: f64,
    /// Compact-like threshold for chi-contrast ratios (calibrated).
    pub contrast_ratio_tol: f64,
    /// Noncompact-like means ratios stay above 1 - margin.
    pub contrast_margin: f64,
    /// Minimum log-log tail slope that certifies a vanishing nu profile.
    pub slope_min: f64,
    /// Degree-regression residual accepted as "semi-homogeneous".
    pub semi_homog_residual: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            zero_scale: 1e-6,
            rate_tol: 1e-3,
            contrast_ratio_tol: CONTRAST_RATIO_TOL,
            contrast_margin: 0.1,
            slope_min: estimators::DEFAULT_SLOPE_MIN,
            semi_homog_residual: 1e-6,
        }
    }
}

/// Frozen from the calibration run on the identity / rank-one endpoints at
/// dimension 1024, sample 512, N in {2,...,32}; see
/// `tests/golden/contrast-*_contrast.csv`. Midway between the rank-one tail
/// (0.0149 at N = 32) and the identity's ratio 1.
pub const CONTRAST_RATIO_TOL: f64 = 0.5;

/// Frozen bound on the rank-one averaging ratio at N = 32 from the same
/// calibration run (measured 0.0149, bound with a 3x margin).
pub const RANK_ONE_CONTRAST_BOUND: f64 = 0.05;

/// Raw estimator value at the given budget.
pub fn raw_value(est: &EstimatorSpec, set: &SampleSet) -> Result<f64> {
    Ok(raw_estimate(est, set)?.value)
}

/// Raw estimate with witness at the given budget.
pub fn raw_estimate(est: &EstimatorSpec, set: &SampleSet) -> Result<MncEstimate> {
    match *est {
        EstimatorSpec::Diameter => estimators::diameter(set),
        EstimatorSpec::Chi { net_size } => estimators::chi_hat(set, net_size),
        EstimatorSpec::Beta { packing_size } => beta_hat_or_zero(set, packing_size),
        EstimatorSpec::Nu { delta } => estimators::nu_hat(set, delta),
    }
}

/// Profile grid for effective nu values: dyadic from total/2 down to the
/// requested delta (never below the cell measure).
fn nu_grid_down_to(set: &SampleSet, delta: f64) -> Vec<f64> {
    let full = estimators::dyadic_delta_grid(set);
    let grid: Vec<f64> = full.into_iter().filter(|&d| d >= delta * (1.0 - 1e-12)).collect();
    if grid.is_empty() {
        vec![delta]
    } else {
        grid
    }
}

/// Zero-test value of an estimator: the raw value for the distance-based
/// estimators; for nu, the delta-profile's extrapolated limit (zero when the
/// profile is vanishing, the finest-delta value otherwise).
pub fn effective_value(est: &EstimatorSpec, set: &SampleSet, tol: &Tolerances) -> Result<f64> {
    match *est {
        EstimatorSpec::Nu { delta } => {
            let grid = nu_grid_down_to(set, delta);
            let profile =
                estimators::nu_profile_with(set, &grid, tol.zero_scale, tol.slope_min)?;
            Ok(profile.effective_value())
        }
        _ => raw_value(est, set),
    }
}

// ---------------------------------------------------------------------------
// Degree estimation
// ---------------------------------------------------------------------------

/// Least-squares estimate of the scaling degree k in
/// psi(T(rho U)) = rho^k psi(T(U)).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DegreeEstimate {
    pub degree: f64,
    pub rho_grid: Vec<f64>,
    pub psi_values: Vec<f64>,
    /// Per-point absolute deviation of log psi from the fitted line.
    pub log_residuals: Vec<f64>,
    /// Max absolute deviation of log psi from the fitted line.
    pub residual: f64,
    pub estimator: EstimatorSpec,
}

/// Fits log psi(T(rho * base)) against log rho. The identical base sample is
/// scaled memberwise, so exactly semi-homogeneous operators produce residuals
/// at rounding level.
pub fn estimate_degree(
    op: &OperatorSpec,
    est: &EstimatorSpec,
    base_spec: &GeneratorSpec,
    rho_grid: &[f64],
    space: &Arc<MeasureSpace>,
    tol: &Tolerances,
) -> Result<DegreeEstimate> {
    if rho_grid.len() < 3 {
        return Err(Error::invalid("degree estimation needs at least 3 grid points"));
    }
    if rho_grid[0] <= 0.0 || rho_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::invalid("rho grid must be strictly increasing and positive"));
    }
    let base = sets::generate(space, base_spec)?;
    let base_scale = raw_value(est, &base)?;
    let at_one = raw_value(est, &apply_set(op, &base)?)?;
    if at_one <= tol.zero_scale * base_scale {
        return Err(Error::DegenerateDegree { rho: 1.0 });
    }
    let mut psi_values = Vec::with_capacity(rho_grid.len());
    for &rho in rho_grid {
        let scaled = sets::scale_set(&base, rho)?;
        let image = apply_set(op, &scaled)?;
        let v = raw_value(est, &image)?;
        if v <= 0.0 {
            return Err(Error::DegenerateDegree { rho });
        }
        psi_values.push(v);
    }
    let xs: Vec<f64> = rho_grid.iter().map(|r| r.ln()).collect();
    let ys: Vec<f64> = psi_values.iter().map(|v| v.ln()).collect();
    let (slope, intercept) = lsq_line(&xs, &ys);
    let log_residuals: Vec<f64> = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - (slope * x + intercept)).abs())
        .collect();
    let residual = log_residuals.iter().copied().fold(0.0, f64::max);
    Ok(DegreeEstimate {
        degree: slope,
        rho_grid: rho_grid.to_vec(),
        psi_values,
        log_residuals,
        residual,
        estimator: *est,
    })
}

fn lsq_line(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let xm = xs.iter().sum::<f64>() / n;
    let ym = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - xm) * (y - ym)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - xm) * (x - xm)).sum();
    let slope = if sxx == 0.0 { 0.0 } else { sxy / sxx };
    (slope, ym - slope * xm)
}

// ---------------------------------------------------------------------------
// Spherical property
// ---------------------------------------------------------------------------

/// Evidence record for the ball/sphere positivity biconditional.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SphericalRecord {
    pub ball_value: f64,
    pub ball_positive: bool,
    /// (rho0, effective value) per sphere radius.
    pub sphere_values: Vec<(f64, f64)>,
    pub best_sphere_value: f64,
    pub sphere_positive: bool,
    pub tol_zero: f64,
    pub biconditional_holds: bool,
}

/// Checks that the image of the ball has positive measure exactly when some
/// sphere inside it does. Both directions are evaluated and reported.
pub fn check_spherical(
    est: &EstimatorSpec,
    op: &OperatorSpec,
    rho1: f64,
    rho0_grid: &[f64],
    plan: &SamplingPlan,
    space: &Arc<MeasureSpace>,
    tol: &Tolerances,
) -> Result<SphericalRecord> {
    if rho0_grid.is_empty() {
        return Err(Error::invalid("sphere radius grid is empty"));
    }
    if rho0_grid.iter().any(|&r| !(r > 0.0) || r > rho1 * (1.0 + 1e-12)) {
        return Err(Error::invalid("sphere radii must lie in (0, rho1]"));
    }
    let q = op.domain_exponent()?;
    let ball = sets::ball_sample(space, q, rho1, plan.count, plan.seed, plan.mixture)?;
    let reference = raw_value(est, &ball)?;
    let tol_zero = tol.zero_scale * reference;

    let ball_value = effective_value(est, &apply_set(op, &ball)?, tol)?;
    let sphere_base = sets::sphere_sample(space, q, 1.0, plan.count, plan.seed, plan.mixture)?;
    let mut sphere_values = Vec::with_capacity(rho0_grid.len());
    for &rho0 in rho0_grid {
        let sphere = sets::scale_set(&sphere_base, rho0)?;
        let v = effective_value(est, &apply_set(op, &sphere)?, tol)?;
        sphere_values.push((rho0, v));
    }
    let best_sphere_value = sphere_values.iter().map(|(_, v)| *v).fold(0.0, f64::max);
    let ball_positive = ball_value > tol_zero;
    let sphere_positive = best_sphere_value > tol_zero;
    Ok(SphericalRecord {
        ball_value,
        ball_positive,
        sphere_values,
        best_sphere_value,
        sphere_positive,
        tol_zero,
        biconditional_holds: ball_positive == sphere_positive,
    })
}

// ---------------------------------------------------------------------------
// Sphere-to-ball zero propagation
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZeroPropagationRow {
    pub rho: f64,
    pub sphere_value: f64,
    pub ball_value: f64,
    pub tol_zero: f64,
}

/// Record of the zero-propagation consistency check: for a semi-homogeneous
/// operator, a vanishing sphere image at one radius forces vanishing sphere
/// and ball images at every radius.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZeroPropagationRecord {
    pub degree: Option<DegreeEstimate>,
    pub hypothesis_value: f64,
    pub hypothesis_tol: f64,
    pub hypothesis_met: bool,
    pub rows: Vec<ZeroPropagationRow>,
    /// None when the hypothesis was not met (nothing asserted).
    pub all_zero: Option<bool>,
}

/// Checks zero propagation across a radius grid.
///
/// The operator must first pass the semi-homogeneity screen (degree
/// regression residual below `tol.semi_homog_residual`), unless
/// `assume_semi_homogeneous` vouches for it by construction. An operator
/// whose images measure zero everywhere passes trivially.
#[allow(clippy::too_many_arguments)]
pub fn zero_propagation_check(
    est: &EstimatorSpec,
    op: &OperatorSpec,
    rho1: f64,
    rho_grid: &[f64],
    plan: &SamplingPlan,
    space: &Arc<MeasureSpace>,
    tol: &Tolerances,
    assume_semi_homogeneous: bool,
) -> Result<ZeroPropagationRecord> {
    if rho_grid.is_empty() || rho_grid.iter().any(|&r| !(r > 0.0)) {
        return Err(Error::invalid("radius grid must be positive"));
    }
    let q = op.domain_exponent()?;
    let degree = if assume_semi_homogeneous {
        None
    } else {
        let base = GeneratorSpec::Ball {
            p: q,
            radius: 1.0,
            count: plan.count,
            seed: plan.seed,
            mixture: plan.mixture,
        };
        match estimate_degree(op, est, &base, &[0.25, 0.5, 1.0, 2.0, 4.0], space, tol) {
            Ok(d) => {
                if d.residual >= tol.semi_homog_residual {
                    return Err(Error::NotSemiHomogeneous {
                        residual: d.residual,
                        limit: tol.semi_homog_residual,
                    });
                }
                Some(d)
            }
            // a vanishing image is trivially semi-homogeneous
            Err(Error::DegenerateDegree { .. }) => None,
            Err(e) => return Err(e),
        }
    };

    let sphere_base = sets::sphere_sample(space, q, 1.0, plan.count, plan.seed, plan.mixture)?;
    let ball_base = sets::ball_sample(space, q, 1.0, plan.count, plan.seed, plan.mixture)?;

    let hyp_sphere = sets::scale_set(&sphere_base, rho1)?;
    let hypothesis_tol = tol.zero_scale * raw_value(est, &hyp_sphere)?;
    let hypothesis_value = effective_value(est, &apply_set(op, &hyp_sphere)?, tol)?;
    let hypothesis_met = hypothesis_value <= hypothesis_tol;

    let mut rows = Vec::with_capacity(rho_grid.len());
    for &rho in rho_grid {
        let sphere = sets::scale_set(&sphere_base, rho)?;
        let ball = sets::scale_set(&ball_base, rho)?;
        let row_tol = tol.zero_scale * raw_value(est, &sphere)?.max(raw_value(est, &ball)?);
        rows.push(ZeroPropagationRow {
            rho,
            sphere_value: effective_value(est, &apply_set(op, &sphere)?, tol)?,
            ball_value: effective_value(est, &apply_set(op, &ball)?, tol)?,
            tol_zero: row_tol,
        });
    }
    let all_zero = hypothesis_met.then(|| {
        rows.iter().all(|r| r.sphere_value <= r.tol_zero && r.ball_value <= r.tol_zero)
    });
    Ok(ZeroPropagationRecord {
        degree,
        hypothesis_value,
        hypothesis_tol,
        hypothesis_met,
        rows,
        all_zero,
    })
}

// ---------------------------------------------------------------------------
// Condensing rates
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RateMode {
    BallsAtPoint,
    SpheresAtPoint,
    AnnuliAtInfinity,
    SpheresAtInfinity,
}

impl RateMode {
    pub fn at_infinity(&self) -> bool {
        matches!(self, RateMode::AnnuliAtInfinity | RateMode::SpheresAtInfinity)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RateVerdict {
    Member,
    NonMember,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateRow {
    pub radius: f64,
    pub psi_image: f64,
    pub psi_set: f64,
    pub rate: f64,
}

/// Measured condensing rates lambda(r) = psi(f(U_r)) / psi(U_r) along a
/// radius grid, with a membership verdict.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateTable {
    pub mode: RateMode,
    /// Anchor description; "infinity" for the infinity modes.
    pub anchor: String,
    pub rows: Vec<RateRow>,
    pub rate_tol: f64,
    pub verdict: RateVerdict,
}

/// Measures condensing rates of `op` along the radius grid.
///
/// Verdict rule: "member" requires the last-quartile rates monotonically
/// non-increasing (within relative 1e-9) and the final rate below `rate_tol`;
/// "non-member" requires the final rate at or above `rate_tol` with a flat or
/// growing tail; anything else is inconclusive.
///
/// Point modes evaluate the operator on anchor-translated samples while the
/// denominator uses the centered sample (translation invariance of the
/// measures turned into an exact identity). The same radius-1 base sample is
/// scaled across the grid.
#[allow(clippy::too_many_arguments)]
pub fn condensing_rate(
    op: &OperatorSpec,
    anchor: &FuncSpec,
    mode: RateMode,
    est: &EstimatorSpec,
    radius_grid: &[f64],
    plan: &SamplingPlan,
    space: &Arc<MeasureSpace>,
    tol: &Tolerances,
) -> Result<RateTable> {
    condensing_rate_with(op, anchor, mode, est, radius_grid, plan, space, tol, tol.rate_tol)
}

#[allow(clippy::too_many_arguments)]
pub fn condensing_rate_with(
    op: &OperatorSpec,
    anchor: &FuncSpec,
    mode: RateMode,
    est: &EstimatorSpec,
    radius_grid: &[f64],
    plan: &SamplingPlan,
    space: &Arc<MeasureSpace>,
    tol: &Tolerances,
    rate_tol: f64,
) -> Result<RateTable> {
    if radius_grid.len() < 2 {
        return Err(Error::invalid("rate tables need at least 2 radii"));
    }
    if radius_grid.iter().any(|&r| !(r > 0.0)) {
        return Err(Error::invalid("radii must be positive"));
    }
    let decreasing = radius_grid.windows(2).all(|w| w[1] < w[0]);
    let increasing = radius_grid.windows(2).all(|w| w[1] > w[0]);
    if mode.at_infinity() && !increasing {
        return Err(Error::invalid("infinity modes need a strictly increasing radius grid"));
    }
    if !mode.at_infinity() && !decreasing {
        return Err(Error::invalid("point modes need a strictly decreasing radius grid"));
    }

    let q = op.domain_exponent()?;
    let base = match mode {
        RateMode::BallsAtPoint => {
            sets::ball_sample(space, q, 1.0, plan.count, plan.seed, plan.mixture)?
        }
        RateMode::SpheresAtPoint | RateMode::SpheresAtInfinity => {
            sets::sphere_sample(space, q, 1.0, plan.count, plan.seed, plan.mixture)?
        }
        RateMode::AnnuliAtInfinity => {
            sets::annulus_sample(space, q, 1.0, 2.0, plan.count, plan.seed, plan.mixture)?
        }
    };
    let translate = !mode.at_infinity() && *anchor != FuncSpec::Zero;

    let mut rows = Vec::with_capacity(radius_grid.len());
    for &radius in radius_grid {
        let centered = sets::scale_set(&base, radius)?;
        let psi_set = raw_value(est, &centered)?;
        if psi_set <= 0.0 {
            return Err(Error::DegenerateDenominator { radius });
        }
        let argument =
            if translate { sets::translate_set(&centered, anchor)? } else { centered };
        let image = apply_set(op, &argument)?;
        let psi_image = effective_value(est, &image, tol)?;
        rows.push(RateRow { radius, psi_image, psi_set, rate: psi_image / psi_set });
    }

    let verdict = rate_verdict(&rows, rate_tol);
    Ok(RateTable {
        mode,
        anchor: if mode.at_infinity() { "infinity".into() } else { format!("{anchor:?}") },
        rows,
        rate_tol,
        verdict,
    })
}

fn rate_verdict(rows: &[RateRow], rate_tol: f64) -> RateVerdict {
    let rates: Vec<f64> = rows.iter().map(|r| r.rate).collect();
    let quartile = (rates.len() / 4).max(2).min(rates.len());
    let tail = &rates[rates.len() - quartile..];
    let non_increasing = tail.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-9) + 1e-15);
    let last = *rates.last().unwrap();
    if non_increasing && last < rate_tol {
        return RateVerdict::Member;
    }
    if last >= rate_tol {
        let lo = tail.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = tail.iter().copied().fold(0.0f64, f64::max);
        let flat = hi <= 1.25 * lo.max(1e-300);
        let growing = tail.windows(2).all(|w| w[1] >= w[0] * (1.0 - 1e-9));
        if flat || growing {
            return RateVerdict::NonMember;
        }
    }
    RateVerdict::Inconclusive
}

// ---------------------------------------------------------------------------
// Decomposition classification
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DecompositionMode {
    Point,
    Infinity,
}

/// A decomposition f(u1 + u) = principal(u) + condensing(u) at a point, or
/// f(u) = principal(u) + condensing(u) near infinity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Decomposition {
    pub principal: OperatorSpec,
    pub condensing: OperatorSpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassReport {
    pub mode: DecompositionMode,
    /// Degree screen of the principal part; None when its images measure zero.
    pub degree: Option<DegreeEstimate>,
    pub condensing_precheck: RateTable,
    /// (rho, effective value, tol) for the principal part on spheres.
    pub principal_sphere_rows: Vec<(f64, f64, f64)>,
    pub zero_class_member: bool,
    pub ball_rate: RateTable,
    pub sphere_rate: RateTable,
    pub ball_member: bool,
    pub sphere_member: bool,
    pub has_inconclusive: bool,
    /// True when all three class verdicts agree (the theorem's prediction).
    pub consistent: bool,
}

/// Classifies a decomposition against the three condensing-class definitions
/// and reports whether the verdicts coincide. A discrepancy is reported in
/// the `consistent` flag, never reconciled.
///
/// Preconditions: the principal part must be semi-homogeneous of degree
/// k <= 1 at a point (k >= 1 at infinity) within 1e-6, and the condensing
/// part must pass its own rate check in the relevant mode.
#[allow(clippy::too_many_arguments)]
pub fn classify_decomposition(
    decomposition: &Decomposition,
    anchor: &FuncSpec,
    mode: DecompositionMode,
    est: &EstimatorSpec,
    radius_grid: &[f64],
    plan: &SamplingPlan,
    space: &Arc<MeasureSpace>,
    tol: &Tolerances,
) -> Result<ClassReport> {
    classify_decomposition_with(
        decomposition,
        anchor,
        mode,
        est,
        radius_grid,
        plan,
        space,
        tol,
        tol.rate_tol,
    )
}

#[allow(clippy::too_many_arguments)]
pub fn classify_decomposition_with(
    decomposition: &Decomposition,
    anchor: &FuncSpec,
    mode: DecompositionMode,
    est: &EstimatorSpec,
    radius_grid: &[f64],
    plan: &SamplingPlan,
    space: &Arc<MeasureSpace>,
    tol: &Tolerances,
    rate_tol: f64,
) -> Result<ClassReport> {
    let principal = &decomposition.principal;
    let condensing = &decomposition.condensing;
    let q = principal.domain_exponent()?;
    if condensing.exponents()? != principal.exponents()? {
        return Err(Error::invalid("decomposition parts disagree on exponents"));
    }

    // degree screen of the principal part
    let base = GeneratorSpec::Ball {
        p: q,
        radius: 1.0,
        count: plan.count,
        seed: plan.seed,
        mixture: plan.mixture,
    };
    let degree =
        match estimate_degree(principal, est, &base, &[0.25, 0.5, 1.0, 2.0, 4.0], space, tol) {
            Ok(d) => {
                let k = d.degree;
                match mode {
                    DecompositionMode::Point if k > 1.0 + 1e-6 => {
                        return Err(Error::invalid(format!(
                            "principal degree {k} violates the point-mode bound k <= 1"
                        )))
                    }
                    DecompositionMode::Infinity if k < 1.0 - 1e-6 => {
                        return Err(Error::invalid(format!(
                            "principal degree {k} violates the infinity-mode bound k >= 1"
                        )))
                    }
                    _ => {}
                }
                Some(d)
            }
            // zero image: trivially semi-homogeneous at any degree
            Err(Error::DegenerateDegree { .. }) => None,
            Err(e) => return Err(e),
        };

    let (ball_mode, sphere_mode) = match mode {
        DecompositionMode::Point => (RateMode::BallsAtPoint, RateMode::SpheresAtPoint),
        DecompositionMode::Infinity => (RateMode::AnnuliAtInfinity, RateMode::SpheresAtInfinity),
    };

    // condensing-part precheck at the zero anchor
    let condensing_precheck = condensing_rate_with(
        condensing,
        &FuncSpec::Zero,
        ball_mode,
        est,
        radius_grid,
        plan,
        space,
        tol,
        rate_tol,
    )?;
    if condensing_precheck.verdict != RateVerdict::Member {
        return Err(Error::invalid(
            "the condensing part fails its own rate check in the relevant mode",
        ));
    }

    // zero-class check: principal images of spheres measure zero at every radius
    let sphere_base = sets::sphere_sample(space, q, 1.0, plan.count, plan.seed, plan.mixture)?;
    let mut principal_sphere_rows = Vec::with_capacity(radius_grid.len());
    for &rho in radius_grid {
        let sphere = sets::scale_set(&sphere_base, rho)?;
        let row_tol = tol.zero_scale * raw_value(est, &sphere)?;
        let v = effective_value(est, &apply_set(principal, &sphere)?, tol)?;
        principal_sphere_rows.push((rho, v, row_tol));
    }
    let zero_class_member = principal_sphere_rows.iter().all(|(_, v, t)| v <= t);

    // the composed operator u -> principal(u) + condensing(u)
    let composed = OperatorSpec::sum(principal.clone(), condensing.clone());
    let ball_rate = condensing_rate_with(
        &composed, anchor, ball_mode, est, radius_grid, plan, space, tol, rate_tol,
    )?;
    let sphere_rate = condensing_rate_with(
        &composed, anchor, sphere_mode, est, radius_grid, plan, space, tol, rate_tol,
    )?;

    let ball_member = ball_rate.verdict == RateVerdict::Member;
    let sphere_member = sphere_rate.verdict == RateVerdict::Member;
    let has_inconclusive = ball_rate.verdict == RateVerdict::Inconclusive
        || sphere_rate.verdict == RateVerdict::Inconclusive;
    let consistent = !has_inconclusive
        && zero_class_member == ball_member
        && ball_member == sphere_member;
    Ok(ClassReport {
        mode,
        degree,
        condensing_precheck,
        principal_sphere_rows,
        zero_class_member,
        ball_rate,
        sphere_rate,
        ball_member,
        sphere_member,
        has_inconclusive,
        consistent,
    })
}

// ---------------------------------------------------------------------------
// Improving check
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ImprovingPerSet {
    pub generator: String,
    pub profile: NuProfile,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ImprovingRecord {
    pub per_set: Vec<ImprovingPerSet>,
    pub improving: bool,
}

fn has_spike_content(spec: &GeneratorSpec) -> bool {
    match spec {
        GeneratorSpec::Spike { .. } | GeneratorSpec::DisjointIndicator { .. } => true,
        GeneratorSpec::Ball { mixture, .. }
        | GeneratorSpec::Sphere { mixture, .. }
        | GeneratorSpec::Annulus { mixture, .. } => mixture.spike > 0.0,
        GeneratorSpec::Union { parts } => parts.iter().any(has_spike_content),
        GeneratorSpec::Scaled { base, .. } | GeneratorSpec::Translated { base, .. } => {
            has_spike_content(base)
        }
        GeneratorSpec::MinkowskiSum { left, right } => {
            has_spike_content(left) || has_spike_content(right)
        }
        GeneratorSpec::Image { base, .. } => has_spike_content(base),
        _ => false,
    }
}

/// Declares the operator improving when every image profile over the suite
/// gets the vanishing verdict. The suite must include a spike-bearing family,
/// the adversarial case.
pub fn improving_check(
    op: &OperatorSpec,
    suite: &[GeneratorSpec],
    delta_grid: &[f64],
    space: &Arc<MeasureSpace>,
    tol: &Tolerances,
) -> Result<ImprovingRecord> {
    if suite.is_empty() {
        return Err(Error::invalid("improving check needs a non-empty set suite"));
    }
    if !suite.iter().any(has_spike_content) {
        return Err(Error::invalid("the set suite must include a spike-bearing family"));
    }
    let mut per_set = Vec::with_capacity(suite.len());
    for spec in suite {
        let set = sets::generate(space, spec)?;
        let image = apply_set(op, &set)?;
        let profile =
            estimators::nu_profile_with(&image, delta_grid, tol.zero_scale, tol.slope_min)?;
        per_set.push(ImprovingPerSet { generator: format!("{spec:?}"), profile });
    }
    let improving = per_set.iter().all(|s| s.profile.verdict == NuVerdict::Vanishing);
    Ok(ImprovingRecord { per_set, improving })
}

// ---------------------------------------------------------------------------
// Comparability
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparabilityRecord {
    pub domination_holds: bool,
    /// First (member, cell) violating the pointwise bound, if any.
    pub violation: Option<(usize, usize)>,
    pub nu_dominated: Option<f64>,
    pub nu_dominating: Option<f64>,
    /// Finite-delta correction: the worst masked norm of the bound function.
    pub correction: f64,
    pub ordering_holds: Option<bool>,
}

/// Checks |F(u)(s)| <= |b1(s)| + |F1(u)(s)| on every member and cell, then —
/// only when the domination holds — asserts the induced nu ordering
/// nu(F(U)) <= nu(F1(U)) + correction, the finite-delta analogue of the
/// shrinking-measure statement.
pub fn comparability_check(
    dominated: &OperatorSpec,
    dominating: &OperatorSpec,
    bound: &FuncSpec,
    set: &SampleSet,
    delta: f64,
    _tol: &Tolerances,
) -> Result<ComparabilityRecord> {
    let (q_f, p_f) = dominated.exponents()?;
    let (q_g, p_g) = dominating.exponents()?;
    if p_f != p_g {
        return Err(Error::invalid("comparability needs a shared codomain exponent"));
    }
    if q_f != set.exponent() || q_g != set.exponent() {
        return Err(Error::ExponentMismatch { expected: q_f, found: set.exponent() });
    }
    let image_f = apply_set(dominated, set)?;
    let image_g = apply_set(dominating, set)?;
    let bound_f = bound.materialize(set.space(), p_f)?;

    let mut violation = None;
    'outer: for (i, (fu, gu)) in image_f.members().iter().zip(image_g.members()).enumerate() {
        for (s, (&fv, &gv)) in fu.values().iter().zip(gu.values()).enumerate() {
            let rhs = bound_f.values()[s].abs() + gv.abs();
            if fv.abs() > rhs + 1e-12 * rhs.max(1.0) {
                violation = Some((i, s));
                break 'outer;
            }
        }
    }
    let domination_holds = violation.is_none();

    let mask = estimators::worst_mask(&bound_f, delta)?;
    let correction = space::lp_norm(&space::project(&bound_f, &mask)?);

    if !domination_holds {
        return Ok(ComparabilityRecord {
            domination_holds,
            violation,
            nu_dominated: None,
            nu_dominating: None,
            correction,
            ordering_holds: None,
        });
    }
    let nu_f = estimators::nu_hat(&image_f, delta)?.value;
    let nu_g = estimators::nu_hat(&image_g, delta)?.value;
    let ordering = nu_f <= nu_g + correction + 1e-12;
    Ok(ComparabilityRecord {
        domination_holds,
        violation,
        nu_dominated: Some(nu_f),
        nu_dominating: Some(nu_g),
        correction,
        ordering_holds: Some(ordering),
    })
}

// ---------------------------------------------------------------------------
// Complete-continuity contrast
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ContrastVerdict {
    CompactLike,
    NoncompactLike,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContrastRow {
    pub net_size: usize,
    pub image_chi: f64,
    pub base_chi: f64,
    pub ratio: f64,
}

/// Decay table of chi ratios between an operator image of a ball sample and
/// the sample itself, over a growing net-size budget.
///
/// In this finite model the true Hausdorff measure of any sample is zero;
/// the contrast is a fixed-budget proxy that separates compact-like from
/// noncompact-like linear operators only while
/// net size << sample size << dimension.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContrastRecord {
    pub rows: Vec<ContrastRow>,
    pub ratio_tol: f64,
    pub margin: f64,
    pub verdict: ContrastVerdict,
}

/// Contrast of a linear operator given as a spec; refuses nonlinear input.
pub fn complete_continuity_contrast(
    op: &OperatorSpec,
    net_sizes: &[usize],
    plan: &SamplingPlan,
    space: &Arc<MeasureSpace>,
    tol: &Tolerances,
) -> Result<ContrastRecord> {
    if !is_linear(op, space)? {
        return Err(Error::invalid("complete-continuity contrast requires a linear operator"));
    }
    let q = op.domain_exponent()?;
    let base = sets::ball_sample(space, q, 1.0, plan.count, plan.seed, plan.mixture)?;
    let image = apply_set(op, &base)?;
    let base_d = Distances::new(&base)?;
    let image_d = Distances::new(&image)?;
    contrast_from_distances(&base_d, &image_d, net_sizes, base.len(), space, tol)
}

/// Contrast of an already-derived linear part (an analytic derivative).
#[allow(clippy::too_many_arguments)]
pub fn contrast_of_linear_part(
    part: &LinearPart,
    q: f64,
    p: f64,
    net_sizes: &[usize],
    plan: &SamplingPlan,
    space: &Arc<MeasureSpace>,
    tol: &Tolerances,
) -> Result<ContrastRecord> {
    let base = sets::ball_sample(space, q, 1.0, plan.count, plan.seed, plan.mixture)?;
    let members: Vec<Func> = base
        .members()
        .iter()
        .map(|u| Func::new(space.clone(), part.apply_values(u.values()), p))
        .collect::<Result<Vec<_>>>()?;
    let image_d = Distances::from_members(&members)?;
    let base_d = Distances::new(&base)?;
    contrast_from_distances(&base_d, &image_d, net_sizes, base.len(), space, tol)
}

fn contrast_from_distances(
    base_d: &Distances,
    image_d: &Distances,
    net_sizes: &[usize],
    sample_size: usize,
    space: &Arc<MeasureSpace>,
    tol: &Tolerances,
) -> Result<ContrastRecord> {
    if net_sizes.is_empty() || net_sizes.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::invalid("net sizes must be strictly increasing"));
    }
    if space.cell_count() < 2 * sample_size {
        return Err(Error::invalid(format!(
            "contrast needs cell_count >= 2 * sample size, got {} cells for {} members",
            space.cell_count(),
            sample_size
        )));
    }
    let mut rows = Vec::with_capacity(net_sizes.len());
    for &n in net_sizes {
        if n < 1 {
            return Err(Error::invalid("net sizes must be at least 1"));
        }
        let base_chi = chi_hat_from(base_d, n).value;
        if base_chi <= 0.0 {
            return Err(Error::DegenerateDenominator { radius: n as f64 });
        }
        let image_chi = chi_hat_from(image_d, n).value;
        rows.push(ContrastRow { net_size: n, image_chi, base_chi, ratio: image_chi / base_chi });
    }
    let final_ratio = rows.last().unwrap().ratio;
    let verdict = if final_ratio < tol.contrast_ratio_tol {
        ContrastVerdict::CompactLike
    } else if rows.iter().all(|r| r.ratio >= 1.0 - tol.contrast_margin) {
        ContrastVerdict::NoncompactLike
    } else {
        ContrastVerdict::Inconclusive
    };
    Ok(ContrastRecord {
        rows,
        ratio_tol: tol.contrast_ratio_tol,
        margin: tol.contrast_margin,
        verdict,
    })
}

// ---------------------------------------------------------------------------
// Derivative class suite
// ---------------------------------------------------------------------------

/// Where a derivative-based suite is anchored.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "at", rename_all = "kebab-case", deny_unknown_fields)]
pub enum AnchorSpec {
    Point { func: FuncSpec },
    Infinity,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DerivativeClassReport {
    pub anchor: String,
    pub derivative_shape: String,
    pub remainder: operators::RemainderTable,
    pub remainder_decays: bool,
    pub derivative_contrast: ContrastRecord,
    pub ball_rate: RateTable,
    pub sphere_rate: RateTable,
    pub derivative_compact: bool,
    pub ball_member: bool,
    pub sphere_member: bool,
    pub has_inconclusive: bool,
    pub consistent: bool,
}

/// Runs the derivative-membership suite: the derivative's compactness
/// contrast against the condensing rates of the base operator, under the
/// chi estimator with the contrast threshold shared by both sides.
///
/// Refuses when the analytic derivative does not exist or its remainder
/// table fails the decay predicate.
pub fn derivative_class_suite(
    op: &OperatorSpec,
    anchor: &AnchorSpec,
    net_sizes: &[usize],
    radius_grid: &[f64],
    plan: &SamplingPlan,
    space: &Arc<MeasureSpace>,
    tol: &Tolerances,
) -> Result<DerivativeClassReport> {
    let (q, p) = op.exponents()?;
    let (derivative, anchor_func, ball_mode, sphere_mode): (DerivativeSpec, FuncSpec, _, _) =
        match anchor {
            AnchorSpec::Point { func } => {
                let u1 = func.materialize(space, q)?;
                (
                    frechet_analytic(op, &u1)?,
                    func.clone(),
                    RateMode::BallsAtPoint,
                    RateMode::SpheresAtPoint,
                )
            }
            AnchorSpec::Infinity => (
                operators::asymptotic_derivative(op, space)?,
                FuncSpec::Zero,
                RateMode::AnnuliAtInfinity,
                RateMode::SpheresAtInfinity,
            ),
        };

    let remainder = match anchor {
        AnchorSpec::Point { .. } => operators::remainder_ratio(&derivative, radius_grid, plan)?,
        AnchorSpec::Infinity => {
            operators::asymptotic_remainder_ratio(&derivative, radius_grid, plan)?
        }
    };
    if !remainder.decays() {
        return Err(Error::invalid(
            "remainder ratios do not decay; the linear part is not a derivative at this anchor",
        ));
    }

    let derivative_contrast =
        contrast_of_linear_part(&derivative.linear, q, p, net_sizes, plan, space, tol)?;

    let est = EstimatorSpec::Chi { net_size: *net_sizes.last().unwrap() };
    let ball_rate = condensing_rate_with(
        op,
        &anchor_func,
        ball_mode,
        &est,
        radius_grid,
        plan,
        space,
        tol,
        tol.contrast_ratio_tol,
    )?;
    let sphere_rate = condensing_rate_with(
        op,
        &anchor_func,
        sphere_mode,
        &est,
        radius_grid,
        plan,
        space,
        tol,
        tol.contrast_ratio_tol,
    )?;

    let derivative_compact = derivative_contrast.verdict == ContrastVerdict::CompactLike;
    let ball_member = ball_rate.verdict == RateVerdict::Member;
    let sphere_member = sphere_rate.verdict == RateVerdict::Member;
    let has_inconclusive = derivative_contrast.verdict == ContrastVerdict::Inconclusive
        || ball_rate.verdict == RateVerdict::Inconclusive
        || sphere_rate.verdict == RateVerdict::Inconclusive;
    let consistent = !has_inconclusive
        && derivative_compact == ball_member
        && ball_member == sphere_member;
    Ok(DerivativeClassReport {
        anchor: match anchor {
            AnchorSpec::Point { func } => format!("{func:?}"),
            AnchorSpec::Infinity => "infinity".into(),
        },
        derivative_shape: derivative.linear.describe(),
        remainder,
        remainder_decays: true,
        derivative_contrast,
        ball_rate,
        sphere_rate,
        derivative_compact,
        ball_member,
        sphere_member,
        has_inconclusive,
        consistent,
    })
}

// ---------------------------------------------------------------------------
// Estimator scaling check
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingRow {
    pub estimator: String,
    pub rho: f64,
    pub base_value: f64,
    pub scaled_value: f64,
    pub rel_err: f64,
    pub witnesses_match: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingCheckRecord {
    pub rows: Vec<ScalingRow>,
    pub max_rel_err: f64,
    pub all_witnesses_match: bool,
    pub pass: bool,
}

/// Asserts estimator-level semi-homogeneity: est(rho U) = rho * est(U) with
/// identical witnesses, relative error at most 1e-12.
pub fn scaling_check(
    set: &SampleSet,
    estimators_list: &[EstimatorSpec],
    rho_grid: &[f64],
) -> Result<ScalingCheckRecord> {
    let mut rows = Vec::new();
    for est in estimators_list {
        let base = raw_estimate(est, set)?;
        for &rho in rho_grid {
            if !(rho > 0.0) {
                return Err(Error::invalid("scaling factors must be positive"));
            }
            let scaled = raw_estimate(est, &sets::scale_set(set, rho)?)?;
            let expected = rho * base.value;
            let rel_err = if expected == 0.0 {
                scaled.value.abs()
            } else {
                (scaled.value - expected).abs() / expected.abs()
            };
            rows.push(ScalingRow {
                estimator: est.describe(),
                rho,
                base_value: base.value,
                scaled_value: scaled.value,
                rel_err,
                witnesses_match: scaled.witness == base.witness,
            });
        }
    }
    let max_rel_err = rows.iter().map(|r| r.rel_err).fold(0.0, f64::max);
    let all_witnesses_match = rows.iter().all(|r| r.witnesses_match);
    let pass = max_rel_err <= 1e-12 && all_witnesses_match;
    Ok(ScalingCheckRecord { rows, max_rel_err, all_witnesses_match, pass })
}

/// Witnessed estimates for a batch of estimators on one set.
pub fn estimator_report(
    set: &SampleSet,
    estimators_list: &[EstimatorSpec],
) -> Result<Vec<MncEstimate>> {
    estimators_list.iter().map(|e| raw_estimate(e, set)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::KernelSpec;
    use crate::sets::Mixture;

    fn grid1024() -> Arc<MeasureSpace> {
        MeasureSpace::uniform(1024, 1.0).unwrap()
    }

    fn plan(count: usize, seed: u64) -> SamplingPlan {
        SamplingPlan { count, seed, mixture: Mixture::default() }
    }

    fn spike_ball(p: f64, count: usize, seed: u64) -> GeneratorSpec {
        GeneratorSpec::Ball { p, radius: 1.0, count, seed, mixture: Mixture::default() }
    }

    fn nu_est() -> EstimatorSpec {
        EstimatorSpec::Nu { delta: 1.0 / 1024.0 }
    }

    #[test]
    fn degree_of_identity_is_one() {
        let space = grid1024();
        let tol = Tolerances::default();
        let d = estimate_degree(
            &OperatorSpec::identity(2.0, 2.0),
            &nu_est(),
            &spike_ball(2.0, 16, 7),
            &[0.25, 0.5, 1.0, 2.0, 4.0],
            &space,
            &tol,
        )
        .unwrap();
        assert!((d.degree - 1.0).abs() <= 1e-9, "degree {}", d.degree);
        assert!(d.residual <= 1e-9, "residual {}", d.residual);
    }

    #[test]
    fn degree_of_f1_is_q_over_p() {
        let space = grid1024();
        let tol = Tolerances::default();
        for (q, p) in [(1.0, 2.0), (2.0, 2.0), (4.0, 2.0), (2.0, 1.0)] {
            let f1 = OperatorSpec::f1(1.0, q, p).unwrap();
            let d = estimate_degree(
                &f1,
                &nu_est(),
                &spike_ball(q, 16, 7),
                &[0.25, 0.5, 1.0, 2.0, 4.0],
                &space,
                &tol,
            )
            .unwrap();
            assert!(
                (d.degree - q / p).abs() <= 1e-6,
                "q={q} p={p}: degree {} residual {}",
                d.degree,
                d.residual
            );
            assert!(d.residual <= 1e-9);
        }
    }

    #[test]
    fn degree_of_norm_weighted_composition() {
        // power(gamma) composed after norm_weighted(alpha, identity) equals
        // norm_weighted(alpha * gamma, power(gamma)): degree gamma * (1 + alpha)
        let space = grid1024();
        let tol = Tolerances::default();
        let gamma = 2.0;
        let alpha = 0.5;
        let op = OperatorSpec::norm_weighted(
            alpha * gamma,
            OperatorSpec::power_superposition(1.0, gamma, 2.0, 2.0).unwrap(),
        );
        let d = estimate_degree(
            &op,
            &nu_est(),
            &spike_ball(2.0, 16, 7),
            &[0.25, 0.5, 1.0, 2.0, 4.0],
            &space,
            &tol,
        )
        .unwrap();
        assert!((d.degree - gamma * (1.0 + alpha)).abs() <= 1e-6);
    }

    #[test]
    fn degree_of_norm_weighted_identity_with_diameter() {
        let space = grid1024();
        let tol = Tolerances::default();
        let op = OperatorSpec::norm_weighted(0.5, OperatorSpec::identity(2.0, 2.0));
        let d = estimate_degree(
            &op,
            &EstimatorSpec::Diameter,
            &spike_ball(2.0, 16, 7),
            &[0.25, 0.5, 1.0, 2.0, 4.0],
            &space,
            &tol,
        )
        .unwrap();
        assert!((d.degree - 1.5).abs() <= 1e-6, "degree {}", d.degree);
    }

    #[test]
    fn degree_rejects_zero_operator_and_bad_grids() {
        let space = grid1024();
        let tol = Tolerances::default();
        let zero = OperatorSpec::zero(2.0, 2.0);
        assert!(matches!(
            estimate_degree(
                &zero,
                &nu_est(),
                &spike_ball(2.0, 8, 3),
                &[0.5, 1.0, 2.0],
                &space,
                &tol
            ),
            Err(Error::DegenerateDegree { .. })
        ));
        let id = OperatorSpec::identity(2.0, 2.0);
        assert!(
            estimate_degree(&id, &nu_est(), &spike_ball(2.0, 8, 3), &[1.0, 2.0], &space, &tol)
                .is_err()
        );
        assert!(estimate_degree(
            &id,
            &nu_est(),
            &spike_ball(2.0, 8, 3),
            &[2.0, 1.0, 0.5],
            &space,
            &tol
        )
        .is_err());
    }

    #[test]
    fn spherical_property_suite() {
        let space = grid1024();
        let tol = Tolerances::default();
        let plan = plan(16, 11);
        let grid = [1.0 / 32.0, 1.0 / 16.0, 0.125, 0.25, 0.5, 1.0];

        // identity-like F1: both sides positive
        let f1 = OperatorSpec::f1(1.0, 2.0, 2.0).unwrap();
        let rec = check_spherical(&nu_est(), &f1, 1.0, &grid, &plan, &space, &tol).unwrap();
        assert!(rec.ball_positive && rec.sphere_positive && rec.biconditional_holds);

        // averaging hammerstein: both sides vanish
        let ham =
            OperatorSpec::hammerstein(KernelSpec::Constant { value: 1.0 }, 1.0, 1.0, 2.0, 2.0)
                .unwrap();
        let rec = check_spherical(&nu_est(), &ham, 1.0, &grid, &plan, &space, &tol).unwrap();
        assert!(!rec.ball_positive && !rec.sphere_positive && rec.biconditional_holds);

        // zero operator: trivially consistent
        let zero = OperatorSpec::zero(2.0, 2.0);
        let rec = check_spherical(&nu_est(), &zero, 1.0, &grid, &plan, &space, &tol).unwrap();
        assert!(rec.biconditional_holds);
    }

    #[test]
    fn zero_propagation_for_averaging_operator() {
        let space = grid1024();
        let tol = Tolerances::default();
        let ham =
            OperatorSpec::hammerstein(KernelSpec::Constant { value: 1.0 }, 1.0, 1.0, 2.0, 2.0)
                .unwrap();
        let grid = [0.125, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0];
        let rec = zero_propagation_check(
            &nu_est(),
            &ham,
            1.0,
            &grid,
            &plan(16, 11),
            &space,
            &tol,
            false,
        )
        .unwrap();
        assert!(rec.hypothesis_met, "hypothesis value {}", rec.hypothesis_value);
        assert_eq!(rec.all_zero, Some(true));

        // F1 keeps spikes: the hypothesis must be reported as not met
        let f1 = OperatorSpec::f1(1.0, 2.0, 2.0).unwrap();
        let rec = zero_propagation_check(
            &nu_est(),
            &f1,
            1.0,
            &grid,
            &plan(16, 11),
            &space,
            &tol,
            false,
        )
        .unwrap();
        assert!(!rec.hypothesis_met);
        assert_eq!(rec.all_zero, None);
    }

    #[test]
    fn condensing_rate_of_norm_weighted_is_exact() {
        let space = grid1024();
        let tol = Tolerances::default();
        // deep enough that even the slowest rate r^(1/2) crosses rate_tol
        let point_grid: Vec<f64> = (1..=24).map(|k| 0.5f64.powi(k)).collect();
        for alpha in [0.5, 1.0, 2.0] {
            let op = OperatorSpec::norm_weighted(alpha, OperatorSpec::identity(2.0, 2.0));
            let table = condensing_rate(
                &op,
                &FuncSpec::Zero,
                RateMode::BallsAtPoint,
                &nu_est(),
                &point_grid,
                &plan(16, 5),
                &space,
                &tol,
            )
            .unwrap();
            for row in &table.rows {
                let expected = row.radius.powf(alpha);
                assert!(
                    (row.rate - expected).abs() <= 1e-9 * expected,
                    "alpha={alpha} r={} rate={} expected={expected}",
                    row.radius,
                    row.rate
                );
            }
            assert_eq!(table.verdict, RateVerdict::Member, "alpha={alpha}");
        }

        let infinity_grid: Vec<f64> = (1..=22).map(|k| 2.0f64.powi(k)).collect();
        for alpha in [-0.5, -1.0] {
            let op = OperatorSpec::norm_weighted(alpha, OperatorSpec::identity(2.0, 2.0));
            let table = condensing_rate(
                &op,
                &FuncSpec::Zero,
                RateMode::SpheresAtInfinity,
                &nu_est(),
                &infinity_grid,
                &plan(16, 5),
                &space,
                &tol,
            )
            .unwrap();
            for row in &table.rows {
                let expected = row.radius.powf(alpha);
                assert!(
                    (row.rate - expected).abs() <= 1e-9 * expected,
                    "alpha={alpha} R={} rate={} expected={expected}",
                    row.radius,
                    row.rate
                );
            }
            assert_eq!(table.verdict, RateVerdict::Member, "alpha={alpha}");
        }
    }

    #[test]
    fn condensing_rate_of_identity_is_not_member() {
        let space = grid1024();
        let tol = Tolerances::default();
        let grid: Vec<f64> = (1..=8).map(|k| 0.5f64.powi(k)).collect();
        let table = condensing_rate(
            &OperatorSpec::f1(1.0, 2.0, 2.0).unwrap(),
            &FuncSpec::Zero,
            RateMode::BallsAtPoint,
            &nu_est(),
            &grid,
            &plan(16, 5),
            &space,
            &tol,
        )
        .unwrap();
        for row in &table.rows {
            assert!((row.rate - 1.0).abs() <= 1e-9);
        }
        assert_eq!(table.verdict, RateVerdict::NonMember);
    }

    #[test]
    fn rate_grid_direction_is_validated() {
        let space = grid1024();
        let tol = Tolerances::default();
        let op = OperatorSpec::identity(2.0, 2.0);
        assert!(condensing_rate(
            &op,
            &FuncSpec::Zero,
            RateMode::BallsAtPoint,
            &nu_est(),
            &[0.5, 1.0],
            &plan(8, 1),
            &space,
            &tol
        )
        .is_err());
        assert!(condensing_rate(
            &op,
            &FuncSpec::Zero,
            RateMode::AnnuliAtInfinity,
            &nu_est(),
            &[2.0, 1.0],
            &plan(8, 1),
            &space,
            &tol
        )
        .is_err());
    }

    #[test]
    fn classify_positive_decomposition() {
        let space = grid1024();
        let tol = Tolerances::default();
        let decomposition = Decomposition {
            principal: OperatorSpec::hammerstein(
                KernelSpec::Constant { value: 1.0 },
                1.0,
                1.0,
                2.0,
                2.0,
            )
            .unwrap(),
            condensing: OperatorSpec::norm_weighted(1.0, OperatorSpec::identity(2.0, 2.0)),
        };
        let grid: Vec<f64> = (1..=12).map(|k| 0.5f64.powi(k)).collect();
        let report = classify_decomposition(
            &decomposition,
            &FuncSpec::Zero,
            DecompositionMode::Point,
            &nu_est(),
            &grid,
            &plan(16, 5),
            &space,
            &tol,
        )
        .unwrap();
        assert!(report.zero_class_member);
        assert!(report.ball_member, "ball rates: {:?}", report.ball_rate.rows);
        assert!(report.sphere_member);
        assert!(report.consistent);
    }

    #[test]
    fn classify_negative_decomposition() {
        let space = grid1024();
        let tol = Tolerances::default();
        let decomposition = Decomposition {
            principal: OperatorSpec::f1(1.0, 2.0, 2.0).unwrap(),
            condensing: OperatorSpec::zero(2.0, 2.0),
        };
        let grid: Vec<f64> = (1..=12).map(|k| 0.5f64.powi(k)).collect();
        let report = classify_decomposition(
            &decomposition,
            &FuncSpec::Zero,
            DecompositionMode::Point,
            &nu_est(),
            &grid,
            &plan(16, 5),
            &space,
            &tol,
        )
        .unwrap();
        assert!(!report.zero_class_member);
        assert!(!report.ball_member);
        assert!(!report.sphere_member);
        assert!(report.consistent);
    }

    #[test]
    fn classify_rejects_superlinear_principal_at_point() {
        let space = grid1024();
        let tol = Tolerances::default();
        let decomposition = Decomposition {
            principal: OperatorSpec::f1(1.0, 4.0, 2.0).unwrap(), // degree 2
            condensing: OperatorSpec::zero(4.0, 2.0),
        };
        let grid: Vec<f64> = (1..=8).map(|k| 0.5f64.powi(k)).collect();
        let err = classify_decomposition(
            &decomposition,
            &FuncSpec::Zero,
            DecompositionMode::Point,
            &nu_est(),
            &grid,
            &plan(16, 5),
            &space,
            &tol,
        )
        .unwrap_err();
        assert!(err.to_string().contains("k <= 1"), "{err}");
    }

    #[test]
    fn improving_check_suite() {
        let space = grid1024();
        let tol = Tolerances::default();
        let suite = [spike_ball(2.0, 16, 7), GeneratorSpec::Spike { p: 2.0, count: 8 }];
        let deltas: Vec<f64> = (1..=10).map(|k| 0.5f64.powi(k)).collect();

        let ham =
            OperatorSpec::hammerstein(KernelSpec::Constant { value: 1.0 }, 1.0, 1.0, 2.0, 2.0)
                .unwrap();
        let rec = improving_check(&ham, &suite, &deltas, &space, &tol).unwrap();
        assert!(rec.improving);

        let f1 = OperatorSpec::f1(1.0, 2.0, 2.0).unwrap();
        let rec = improving_check(&f1, &suite, &deltas, &space, &tol).unwrap();
        assert!(!rec.improving);

        let zero = OperatorSpec::zero(2.0, 2.0);
        let rec = improving_check(&zero, &suite, &deltas, &space, &tol).unwrap();
        assert!(rec.improving);

        // suite without spikes is refused
        let smooth_only = [GeneratorSpec::SmoothRandom { p: 2.0, count: 4, seed: 1, norm: 1.0 }];
        assert!(improving_check(&f1, &smooth_only, &deltas, &space, &tol).is_err());
    }

    #[test]
    fn comparability_records() {
        let space = grid1024();
        let tol = Tolerances::default();
        let set = sets::generate(&space, &spike_ball(2.0, 12, 3)).unwrap();
        let f1 = OperatorSpec::f1(1.0, 2.0, 2.0).unwrap();
        let half = OperatorSpec::scalar_multiple(0.5, f1.clone());
        let delta = 1.0 / 1024.0;

        let rec = comparability_check(&half, &f1, &FuncSpec::Zero, &set, delta, &tol).unwrap();
        assert!(rec.domination_holds);
        assert_eq!(rec.ordering_holds, Some(true));

        // doubled amplitude cannot be dominated with a zero bound
        let double = OperatorSpec::scalar_multiple(2.0, f1.clone());
        let rec = comparability_check(&double, &f1, &FuncSpec::Zero, &set, delta, &tol).unwrap();
        assert!(!rec.domination_holds);
        assert!(rec.violation.is_some());
        assert_eq!(rec.ordering_holds, None);

        // a bounded additive perturbation is absorbed by the correction term
        let perturbed = OperatorSpec::sum(
            f1.clone(),
            OperatorSpec::GeneralSuperposition {
                map: operators::PointwiseMap::Clamp { bound: 0.25 },
                q: 2.0,
                p: 2.0,
            },
        );
        let rec = comparability_check(
            &perturbed,
            &f1,
            &FuncSpec::Constant { value: 0.25 },
            &set,
            delta,
            &tol,
        )
        .unwrap();
        assert!(rec.domination_holds);
        assert_eq!(rec.ordering_holds, Some(true));
    }

    #[test]
    fn contrast_identity_is_exactly_one() {
        let space = grid1024();
        let tol = Tolerances::default();
        let plan = plan(64, 17);
        let rec = complete_continuity_contrast(
            &OperatorSpec::identity(2.0, 2.0),
            &[2, 4, 8],
            &plan,
            &space,
            &tol,
        )
        .unwrap();
        for row in &rec.rows {
            assert_eq!(row.ratio, 1.0);
        }
        assert_eq!(rec.verdict, ContrastVerdict::NoncompactLike);
    }

    #[test]
    fn contrast_rank_one_is_compact_like() {
        let space = grid1024();
        let tol = Tolerances::default();
        let plan = plan(64, 17);
        let avg = OperatorSpec::integral(KernelSpec::Constant { value: 1.0 }, 2.0, 2.0);
        let rec = complete_continuity_contrast(&avg, &[2, 4, 8, 16], &plan, &space, &tol).unwrap();
        assert_eq!(rec.verdict, ContrastVerdict::CompactLike, "rows {:?}", rec.rows);
    }

    #[test]
    fn contrast_refuses_nonlinear_operators() {
        let space = grid1024();
        let tol = Tolerances::default();
        let sq = OperatorSpec::power_superposition(1.0, 2.0, 2.0, 2.0).unwrap();
        assert!(complete_continuity_contrast(&sq, &[2, 4], &plan(32, 3), &space, &tol).is_err());
    }

    #[test]
    fn derivative_suite_consistency() {
        let space = grid1024();
        let tol = Tolerances::default();
        let plan = plan(48, 21);
        let radius_grid: Vec<f64> = (1..=6).map(|k| 0.5f64.powi(k)).collect();
        let net_sizes = [2, 4, 8, 16];

        // identity: noncompact derivative, rates stay at 1, all non-member
        let report = derivative_class_suite(
            &OperatorSpec::identity(2.0, 2.0),
            &AnchorSpec::Point { func: FuncSpec::Zero },
            &net_sizes,
            &radius_grid,
            &plan,
            &space,
            &tol,
        )
        .unwrap();
        assert!(!report.derivative_compact);
        assert!(!report.ball_member && !report.sphere_member);
        assert!(report.consistent, "identity suite must be consistent");

        // smoothing hammerstein at a positive anchor: everything member
        let smooth =
            OperatorSpec::hammerstein(KernelSpec::Gaussian { width: 0.5 }, 0.5, 2.0, 2.0, 2.0)
                .unwrap();
        let report = derivative_class_suite(
            &smooth,
            &AnchorSpec::Point { func: FuncSpec::Constant { value: 1.0 } },
            &net_sizes,
            &radius_grid,
            &plan,
            &space,
            &tol,
        )
        .unwrap();
        assert!(report.derivative_compact, "contrast {:?}", report.derivative_contrast.rows);
        assert!(
            report.ball_member && report.sphere_member,
            "rates {:?} / {:?}",
            report.ball_rate.rows,
            report.sphere_rate.rows
        );
        assert!(report.consistent);
    }

    #[test]
    fn scaling_check_passes_on_mixed_ball() {
        let space = grid1024();
        let set = sets::generate(&space, &spike_ball(2.0, 24, 9)).unwrap();
        let ests = [
            EstimatorSpec::Diameter,
            EstimatorSpec::Chi { net_size: 8 },
            EstimatorSpec::Beta { packing_size: 8 },
            EstimatorSpec::Nu { delta: 1.0 / 1024.0 },
        ];
        let rec = scaling_check(&set, &ests, &[0.25, 0.5, 2.0, 4.0]).unwrap();
        assert!(rec.pass, "max rel err {} witnesses {}", rec.max_rel_err, rec.all_witnesses_match);
    }
}
