//! Disjoint superadditivity of Lambda and Lorentz-Zygmund quasinorms.
//!
//! A quasinorm is gamma-disjointly superadditive when
//! `sum |f_j|^gamma <= C |sum f_j|^gamma` over disjointly supported
//! families. For a Lambda space this holds exactly when `gamma >= q` and
//! `W(t) t^(-q/gamma)` is equivalent to a nondecreasing function; the
//! classifier below tests that equivalence as boundedness of the ratio
//! between the running supremum and the function itself on a refining log
//! grid, and the empirical route measures the constant on concrete families.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::math;
use crate::quad::QuadratureConfig;
use crate::rearrangement::{disjoint_sum, RearrangementError, StepProfile};
use crate::rng::SplitMix64;
use crate::weights::{lambda_quasinorm, LambdaParams, WeightError};

/// Ratio threshold above which the envelope criterion counts as failed.
pub const K_MAX: f64 = 1e6;

#[derive(Debug, Clone, PartialEq)]
pub enum SuperaddError {
    InvalidParameter(String),
    /// Parameters outside the range covered by the classification.
    OutOfScope(String),
    /// The weight is not admissible (trivial space or no doubling).
    InadmissibleWeight(String),
    Weight(WeightError),
    Rearrangement(RearrangementError),
}

impl fmt::Display for SuperaddError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::InvalidParameter(d) => write!(f, "invalid parameter: {d}"),
            Self::OutOfScope(d) => write!(f, "out of scope: {d}"),
            Self::InadmissibleWeight(d) => write!(f, "inadmissible weight: {d}"),
            Self::Weight(e) => write!(f, "{e}"),
            Self::Rearrangement(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for SuperaddError {}

impl From<WeightError> for SuperaddError {
    fn from(e: WeightError) -> Self {
        Self::Weight(e)
    }
}

impl From<RearrangementError> for SuperaddError {
    fn from(e: RearrangementError) -> Self {
        Self::Rearrangement(e)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    Superadditive,
    NotSuperadditive,
    Inconclusive,
}

/// Verdict of a superadditivity classification.
#[derive(Debug, Clone, PartialEq)]
pub struct SuperaddVerdict {
    pub classification: Classification,
    pub gamma: f64,
    /// Description of the obstruction for negative verdicts.
    pub witness: Option<String>,
    /// `(K1, K2)` with `K1 F <= W(t) t^(-q/gamma) <= K2 F` on the grid.
    pub constants: Option<(f64, f64)>,
}

fn check_gamma(gamma: f64) -> Result<(), SuperaddError> {
    if !(gamma > 0.0 && gamma.is_finite()) {
        return Err(SuperaddError::InvalidParameter(alloc::format!(
            "gamma = {gamma} must lie in (0, inf)"
        )));
    }
    Ok(())
}

/// `ln` of `h(s) = W(s) s^(-q/gamma)` evaluated stably.
fn ln_h(params: &LambdaParams, gamma: f64, s: f64, cfg: &QuadratureConfig) -> f64 {
    params.weight().ln_primitive(s, cfg) - params.q() / gamma * math::ln(s)
}

/// The monotone envelope `F(t) = sup_{s <= t} W(s) s^(-q/gamma)`, by running
/// supremum over a log grid with refinement near the origin; reports
/// infinity when the supremum keeps growing as the grid extends down.
pub fn monotone_envelope(
    params: &LambdaParams,
    gamma: f64,
    t: f64,
    cfg: &QuadratureConfig,
) -> Result<f64, SuperaddError> {
    check_gamma(gamma)?;
    let m = params.weight().total_mass();
    if !(t > 0.0 && t < m) {
        return Err(SuperaddError::InvalidParameter(alloc::format!(
            "t = {t} must lie in (0, {m})"
        )));
    }
    let mut rounds = Vec::new();
    for round in 0..3u32 {
        let lo = m * math::powf(10.0, -9.0 - 3.0 * round as f64);
        let n = 300usize << round;
        let mut sup = f64::NEG_INFINITY;
        for k in 0..=n {
            let s = math::exp(math::ln(lo) + (math::ln(t) - math::ln(lo)) * k as f64 / n as f64);
            sup = libm::fmax(sup, ln_h(params, gamma, s, cfg));
        }
        rounds.push(sup);
    }
    if !rounds[2].is_finite() || math::exp(rounds[2] - rounds[1]) > 1.01 {
        return Ok(f64::INFINITY);
    }
    Ok(math::exp(rounds[2]))
}

/// Primitive `V(t)` of `F^(gamma/q)`, a proof device kept around for
/// inspection; trapezoid on a log grid.
pub fn envelope_primitive(
    params: &LambdaParams,
    gamma: f64,
    t: f64,
    cfg: &QuadratureConfig,
) -> Result<f64, SuperaddError> {
    check_gamma(gamma)?;
    let m = params.weight().total_mass();
    if !(t > 0.0 && t < m) {
        return Err(SuperaddError::InvalidParameter(alloc::format!(
            "t = {t} must lie in (0, {m})"
        )));
    }
    let e = gamma / params.q();
    let n = 2000usize;
    let lo = m * 1e-9;
    let mut running = f64::NEG_INFINITY;
    let mut acc = 0.0;
    let mut prev: Option<(f64, f64)> = None;
    for k in 0..=n {
        let s = math::exp(math::ln(lo) + (math::ln(t) - math::ln(lo)) * k as f64 / n as f64);
        running = libm::fmax(running, ln_h(params, gamma, s, cfg));
        let fe = math::exp(e * running);
        if let Some((sp, fp)) = prev {
            acc += 0.5 * (fp + fe) * (s - sp);
        }
        prev = Some((s, fe));
    }
    Ok(acc)
}

/// Classifies gamma-disjoint superadditivity of the Lambda space through the
/// envelope criterion.
pub fn classify_lambda(
    params: &LambdaParams,
    gamma: f64,
    cfg: &QuadratureConfig,
) -> Result<SuperaddVerdict, SuperaddError> {
    check_gamma(gamma)?;
    let q = params.q();
    let m = params.weight().total_mass();
    let probe = params.weight().primitive(0.5 * m, cfg).value;
    if !(probe.is_finite() && probe > 0.0) {
        return Err(SuperaddError::InadmissibleWeight(String::from(
            "primitive W diverges at zero; the Lambda space is trivial",
        )));
    }
    if gamma < q {
        return Ok(SuperaddVerdict {
            classification: Classification::NotSuperadditive,
            gamma,
            witness: Some(alloc::format!(
                "gamma = {gamma} < q = {q}: equal splits of a characteristic function violate the bound"
            )),
            constants: None,
        });
    }
    // ratio of the running supremum to the function on refining grids
    let mut ratios = Vec::new();
    for round in 0..3u32 {
        let lo = m * math::powf(10.0, -9.0 - 3.0 * round as f64);
        let hi = m * (1.0 - 1e-9);
        let n = 300usize << round;
        let mut running = f64::NEG_INFINITY;
        let mut worst = 1.0f64;
        for k in 0..=n {
            let s = math::exp(math::ln(lo) + (math::ln(hi) - math::ln(lo)) * k as f64 / n as f64);
            let h = ln_h(params, gamma, s, cfg);
            running = libm::fmax(running, h);
            worst = libm::fmax(worst, math::exp(running - h));
        }
        ratios.push(worst);
    }
    let last = ratios[2];
    let growth = last / ratios[1];
    if !last.is_finite() || growth > 2.0 || last > K_MAX {
        return Ok(SuperaddVerdict {
            classification: Classification::NotSuperadditive,
            gamma,
            witness: Some(alloc::format!(
                "W(t) t^(-q/gamma) is not equivalent to a nondecreasing function (grid ratio {last:.3e})"
            )),
            constants: None,
        });
    }
    if growth > 1.01 {
        return Ok(SuperaddVerdict {
            classification: Classification::Inconclusive,
            gamma,
            witness: Some(String::from("envelope ratio still moving under grid refinement")),
            constants: None,
        });
    }
    Ok(SuperaddVerdict {
        classification: Classification::Superadditive,
        gamma,
        witness: None,
        constants: Some((1.0 / last, 1.0)),
    })
}

/// The Lorentz-Zygmund classification: `L^{p,q,alpha}` is gamma-disjointly
/// superadditive iff `p < q <= gamma`, or `q <= p < gamma`, or
/// `q <= p = gamma` with `alpha <= 0`.
pub fn classify_lz(p: f64, q: f64, alpha: f64, gamma: f64) -> Result<SuperaddVerdict, SuperaddError> {
    check_gamma(gamma)?;
    if !(q > 0.0 && q.is_finite()) {
        return Err(SuperaddError::OutOfScope(alloc::format!(
            "q = {q}: the classification covers finite q only"
        )));
    }
    if !(p > 0.0) || p.is_nan() {
        return Err(SuperaddError::InvalidParameter(alloc::format!("p = {p} must lie in (0, inf]")));
    }
    if p.is_infinite() && !(alpha + 1.0 / q < 0.0) {
        return Err(SuperaddError::OutOfScope(alloc::format!(
            "p = inf requires alpha + 1/q < 0, got alpha = {alpha}"
        )));
    }
    let positive = (p < q && q <= gamma) || (q <= p && p < gamma) || (q <= p && p == gamma && alpha <= 0.0);
    Ok(SuperaddVerdict {
        classification: if positive {
            Classification::Superadditive
        } else {
            Classification::NotSuperadditive
        },
        gamma,
        witness: if positive {
            None
        } else if gamma < q {
            Some(String::from("gamma < q"))
        } else if p.is_infinite() {
            Some(String::from("p = inf matches no superadditive case"))
        } else {
            Some(String::from("(p, q, gamma, alpha) matches no superadditive case"))
        },
        constants: None,
    })
}

/// `k` disjoint characteristic profiles of mass `t / k` each.
pub fn equal_split_family(
    t: f64,
    k: usize,
    total_mass: f64,
) -> Result<Vec<StepProfile>, SuperaddError> {
    if k == 0 {
        return Err(SuperaddError::InvalidParameter(String::from("k must be at least 1")));
    }
    if !(t > 0.0 && t < total_mass) {
        return Err(SuperaddError::InvalidParameter(alloc::format!(
            "t = {t} must lie in (0, {total_mass})"
        )));
    }
    let piece = t / k as f64;
    let mut family = Vec::with_capacity(k);
    for _ in 0..k {
        family.push(StepProfile::characteristic(1.0, piece, total_mass)?);
    }
    Ok(family)
}

/// `sum |f_j|^gamma / |disjoint sum|^gamma` for an explicit family.
pub fn family_ratio(
    family: &[StepProfile],
    params: &LambdaParams,
    gamma: f64,
    cfg: &QuadratureConfig,
) -> Result<f64, SuperaddError> {
    check_gamma(gamma)?;
    let mut sum = 0.0;
    for f in family {
        let n = lambda_quasinorm(f, params, cfg)?.value;
        sum += math::powf(n, gamma);
    }
    let whole = lambda_quasinorm(&disjoint_sum(family)?, params, cfg)?.value;
    Ok(sum / math::powf(whole, gamma))
}

/// The equal-split ratio without materializing one profile per part: the
/// family members are identical, so one quasinorm evaluation per part count
/// reproduces the naive loop bit for bit.
pub fn equal_split_ratio(
    params: &LambdaParams,
    gamma: f64,
    t: f64,
    k: usize,
    cfg: &QuadratureConfig,
) -> Result<f64, SuperaddError> {
    check_gamma(gamma)?;
    let m = params.weight().total_mass();
    if k == 0 {
        return Err(SuperaddError::InvalidParameter(String::from("k must be at least 1")));
    }
    if !(t > 0.0 && t < m) {
        return Err(SuperaddError::InvalidParameter(alloc::format!("t = {t} must lie in (0, {m})")));
    }
    let piece_mass = t / k as f64;
    let part = StepProfile::characteristic(1.0, piece_mass, m)?;
    let part_norm_pow = math::powf(lambda_quasinorm(&part, params, cfg)?.value, gamma);
    let mut sum = 0.0;
    for _ in 0..k {
        sum += part_norm_pow;
    }
    let merged = StepProfile::from_pieces(&alloc::vec![(1.0, piece_mass); k], m)?;
    let whole = lambda_quasinorm(&merged, params, cfg)?.value;
    Ok(sum / math::powf(whole, gamma))
}

/// Family generator for the empirical constant: equal splits plus seeded
/// random families.
#[derive(Debug, Clone)]
pub struct FamilyGenerator {
    /// Part counts for equal splits of mass `equal_split_t`.
    pub equal_split_ks: Vec<usize>,
    pub equal_split_t: f64,
    /// Number of random families.
    pub random_families: usize,
    /// Pieces per random profile are drawn from `1..=max_pieces`.
    pub max_pieces: usize,
    /// Random family sizes are drawn from `1..=max_family`.
    pub max_family: usize,
}

impl FamilyGenerator {
    /// Equal splits with k = 1..=64 plus a few dozen random families.
    pub fn standard(total_mass: f64) -> Self {
        Self {
            equal_split_ks: (1..=64).collect(),
            equal_split_t: 0.5 * total_mass,
            random_families: 32,
            max_pieces: 6,
            max_family: 8,
        }
    }
}

/// Empirical superadditivity constant: the worst `family_ratio` over the
/// generated families. Deterministic per seed.
pub fn empirical_superadd_constant(
    params: &LambdaParams,
    gamma: f64,
    generator: &FamilyGenerator,
    seed: u64,
    cfg: &QuadratureConfig,
) -> Result<f64, SuperaddError> {
    check_gamma(gamma)?;
    let m = params.weight().total_mass();
    let mut worst = 0.0f64;
    for &k in &generator.equal_split_ks {
        worst = libm::fmax(worst, equal_split_ratio(params, gamma, generator.equal_split_t, k, cfg)?);
    }
    for i in 0..generator.random_families {
        let mut rng = SplitMix64::stream(seed, i as u64);
        let count = 1 + rng.below(generator.max_family);
        // masses normalized so all supports fit disjointly
        let budget = 0.9 * m;
        let mut family = Vec::with_capacity(count);
        let mut raw: Vec<Vec<(f64, f64)>> = Vec::with_capacity(count);
        let mut mass_total = 0.0;
        for _ in 0..count {
            let pieces = 1 + rng.below(generator.max_pieces);
            let mut profile = Vec::with_capacity(pieces);
            for _ in 0..pieces {
                let value = rng.log_uniform(1e-3, 1e3);
                let mass = rng.uniform(0.05, 1.0);
                mass_total += mass;
                profile.push((value, mass));
            }
            raw.push(profile);
        }
        let scale = budget / mass_total;
        for profile in &mut raw {
            let mut pieces: Vec<(f64, f64)> = profile.iter().map(|&(v, ma)| (v, ma * scale)).collect();
            pieces.sort_by(|a, b| b.0.total_cmp(&a.0));
            family.push(StepProfile::from_pieces(&pieces, m)?);
        }
        worst = libm::fmax(worst, family_ratio(&family, params, gamma, cfg)?);
    }
    Ok(worst)
}
