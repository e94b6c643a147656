//! Radial profiles on a ball, the gradient n-norm, the norm-preserving
//! dilation family, and noncompactness lower-bound certificates.
//!
//! A radial function `v` on the ball `B_R` of dimension `n` is carried as a
//! continuous piecewise-linear nonincreasing profile `v*` of the measure
//! variable `t = omega_n |x|^n`, compactly supported strictly inside the
//! ball. The dilation of parameter `kappa` replaces `v*` by
//! `g(t) = kappa^(1/n - 1) v*((2|B_R|)^(1-kappa) t^kappa)`, which shrinks
//! the support while leaving both `|grad v|_{L^n}` and the limiting
//! Lorentz-Zygmund target quasinorm unchanged; verifying those two exact
//! identities numerically, with the dilated side evaluated by independent
//! quadrature, is the core of the certificate machinery.
//!
//! Piecewise linearity in `t` keeps the base gradient norm in closed form:
//! on a piece of slope `-c` the gradient contribution is
//! `c^n n^(n-1) omega_n (t_i^n - t_{i-1}^n)`, so one side of every identity
//! is exact and quadrature error is confined to the dilated side.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::math;
use crate::quad::{self, QuadratureConfig, TOL_EQ};
use crate::rearrangement::SimpleFunction;
use crate::weights::{EvalOutcome, Method, Weight, WeightError};

/// Gradient-norm slack accepted for unit-ball membership.
pub const MEMBERSHIP_TOL: f64 = 1e-9;
/// Slack accepted when comparing dilated quasinorms against the target level.
pub const QUASINORM_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub enum DilationError {
    /// Dimension must be an integer at least 2.
    InvalidDimension(u32),
    InvalidRadius(f64),
    /// Dilation parameter outside (0, 1).
    KappaOutOfRange(f64),
    /// Profile data violates its invariants.
    InvalidProfile(String),
    /// Function mass exceeds the ball measure.
    MassOverflow { mass: f64, ball_measure: f64 },
    /// Profile and geometry disagree about the ball measure.
    GeometryMismatch { profile: f64, ball: f64 },
    /// The profile is not in the Sobolev unit ball.
    MembershipViolation { gradient_norm: f64 },
    /// A step-embedded profile carries no meaningful weak gradient.
    StepEmbeddedProfile,
    /// A dilated quasinorm fell below the requested level.
    QuasinormBelowLambda { kappa: f64, value: f64, lambda: f64 },
    /// Kappa sequence must be strictly decreasing inside (0, 1).
    InvalidKappaSequence(String),
    /// Target exponent must satisfy q >= n (alpha is then determined).
    InvalidTargetExponent { q: f64, n: u32 },
    Weight(WeightError),
}

impl fmt::Display for DilationError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::InvalidDimension(n) => write!(f, "dimension n = {n} must be at least 2"),
            Self::InvalidRadius(r) => write!(f, "radius {r} must be positive and finite"),
            Self::KappaOutOfRange(k) => write!(f, "kappa = {k} must lie in (0, 1)"),
            Self::InvalidProfile(d) => write!(f, "invalid radial profile: {d}"),
            Self::MassOverflow { mass, ball_measure } => {
                write!(f, "mass {mass} exceeds the ball measure {ball_measure}")
            }
            Self::GeometryMismatch { profile, ball } => {
                write!(f, "profile domain mass {profile} does not match ball measure {ball}")
            }
            Self::MembershipViolation { gradient_norm } => {
                write!(f, "gradient norm {gradient_norm} exceeds the unit ball")
            }
            Self::StepEmbeddedProfile => write!(
                f,
                "step-embedded profile: valid for quasinorm identities but not for certificate membership"
            ),
            Self::QuasinormBelowLambda { kappa, value, lambda } => {
                write!(f, "dilated quasinorm {value} at kappa = {kappa} is below lambda = {lambda}")
            }
            Self::InvalidKappaSequence(d) => write!(f, "invalid kappa sequence: {d}"),
            Self::InvalidTargetExponent { q, n } => {
                write!(f, "target exponent q = {q} must lie in [n, inf], n = {n}")
            }
            Self::Weight(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for DilationError {}

impl From<WeightError> for DilationError {
    fn from(e: WeightError) -> Self {
        Self::Weight(e)
    }
}

/// Dimension, radius, and derived volumes of the ball `B_R`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BallGeometry {
    n: u32,
    radius: f64,
    omega_n: f64,
    ball_measure: f64,
}

impl BallGeometry {
    pub fn new(n: u32, radius: f64) -> Result<Self, DilationError> {
        if n < 2 {
            return Err(DilationError::InvalidDimension(n));
        }
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(DilationError::InvalidRadius(radius));
        }
        let omega_n = math::unit_ball_volume(n);
        Ok(Self {
            n,
            radius,
            omega_n,
            ball_measure: omega_n * math::powi(radius, n),
        })
    }

    /// Geometry of the ball with a prescribed measure.
    pub fn from_measure(n: u32, measure: f64) -> Result<Self, DilationError> {
        if n < 2 {
            return Err(DilationError::InvalidDimension(n));
        }
        if !(measure > 0.0 && measure.is_finite()) {
            return Err(DilationError::InvalidRadius(measure));
        }
        let omega_n = math::unit_ball_volume(n);
        let radius = math::powf(measure / omega_n, 1.0 / n as f64);
        Ok(Self {
            n,
            radius,
            omega_n,
            ball_measure: measure,
        })
    }

    pub fn dimension(&self) -> u32 {
        self.n
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn omega_n(&self) -> f64 {
        self.omega_n
    }

    pub fn ball_measure(&self) -> f64 {
        self.ball_measure
    }

    /// Radius of the concentric ball of the given measure.
    pub fn radius_of_mass(&self, mass: f64) -> f64 {
        math::powf(mass / self.omega_n, 1.0 / self.n as f64)
    }
}

/// Continuous piecewise-linear nonincreasing function of the measure
/// variable, vanishing from its last node on.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearProfile {
    nodes: Vec<(f64, f64)>,
    total_mass: f64,
}

impl LinearProfile {
    pub fn new(nodes: &[(f64, f64)], total_mass: f64) -> Result<Self, DilationError> {
        if !(total_mass > 0.0 && total_mass.is_finite()) {
            return Err(DilationError::InvalidProfile(alloc::format!(
                "total mass {total_mass} must be positive and finite"
            )));
        }
        if nodes.len() < 2 {
            return Err(DilationError::InvalidProfile(String::from("need at least two nodes")));
        }
        if nodes[0].0 != 0.0 {
            return Err(DilationError::InvalidProfile(String::from("first node must sit at t = 0")));
        }
        let mut cleaned: Vec<(f64, f64)> = Vec::with_capacity(nodes.len());
        let mut prev_t = -1.0;
        let mut prev_v = f64::INFINITY;
        for (i, &(t, v)) in nodes.iter().enumerate() {
            if !(t.is_finite() && v.is_finite() && v >= 0.0) {
                return Err(DilationError::InvalidProfile(alloc::format!(
                    "node {i} = ({t}, {v}) must be finite with nonnegative value"
                )));
            }
            if t <= prev_t {
                return Err(DilationError::InvalidProfile(alloc::format!(
                    "node abscissae must be strictly increasing at node {i}"
                )));
            }
            if v > prev_v {
                return Err(DilationError::InvalidProfile(alloc::format!(
                    "values must be nonincreasing at node {i}"
                )));
            }
            prev_t = t;
            prev_v = v;
            cleaned.push((t, v));
            if v == 0.0 {
                break; // nonincreasing and nonnegative: zero from here on
            }
        }
        let &(last_t, last_v) = cleaned.last().expect("at least one node");
        if last_v != 0.0 {
            return Err(DilationError::InvalidProfile(String::from(
                "profile must reach zero at its last node (compact support)",
            )));
        }
        if !(last_t < total_mass) {
            return Err(DilationError::InvalidProfile(alloc::format!(
                "support mass {last_t} must be strictly below the total mass {total_mass}"
            )));
        }
        Ok(Self {
            nodes: cleaned,
            total_mass,
        })
    }

    pub fn nodes(&self) -> &[(f64, f64)] {
        &self.nodes
    }

    pub fn total_mass(&self) -> f64 {
        self.total_mass
    }

    /// Measure of the support.
    pub fn support_mass(&self) -> f64 {
        if self.nodes.iter().all(|&(_, v)| v == 0.0) {
            0.0
        } else {
            self.nodes.last().expect("nonempty").0
        }
    }

    pub fn value_at(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return self.nodes[0].1;
        }
        let last = self.nodes.len() - 1;
        if t >= self.nodes[last].0 {
            return 0.0;
        }
        let seg = match self
            .nodes
            .binary_search_by(|&(nt, _)| nt.total_cmp(&t))
        {
            Ok(i) => return self.nodes[i].1,
            Err(i) => i - 1,
        };
        let (t0, v0) = self.nodes[seg];
        let (t1, v1) = self.nodes[seg + 1];
        v0 + (v1 - v0) * (t - t0) / (t1 - t0)
    }

    pub fn scale(&self, c: f64) -> Self {
        Self {
            nodes: self.nodes.iter().map(|&(t, v)| (t, c * v)).collect(),
            total_mass: self.total_mass,
        }
    }
}

/// A radial representative on the ball: the profile `v*` plus a marker for
/// profiles produced by step embedding, which carry no weak gradient.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialProfile {
    profile: LinearProfile,
    step_embedded: bool,
}

impl RadialProfile {
    pub fn new(profile: LinearProfile) -> Self {
        Self {
            profile,
            step_embedded: false,
        }
    }

    /// Wraps a profile carrying the step-embedded marker, as written by
    /// `spherical_rearrangement` artifacts.
    pub fn with_step_flag(profile: LinearProfile, step_embedded: bool) -> Self {
        Self {
            profile,
            step_embedded,
        }
    }

    pub fn profile(&self) -> &LinearProfile {
        &self.profile
    }

    pub fn step_embedded(&self) -> bool {
        self.step_embedded
    }

    pub fn support_mass(&self) -> f64 {
        self.profile.support_mass()
    }

    pub fn total_mass(&self) -> f64 {
        self.profile.total_mass()
    }

    pub fn scale(&self, c: f64) -> Self {
        Self {
            profile: self.profile.scale(c),
            step_embedded: self.step_embedded,
        }
    }
}

fn check_geometry(profile: &LinearProfile, geom: &BallGeometry) -> Result<(), DilationError> {
    if math::rel_err(profile.total_mass(), geom.ball_measure()) > TOL_EQ {
        return Err(DilationError::GeometryMismatch {
            profile: profile.total_mass(),
            ball: geom.ball_measure(),
        });
    }
    Ok(())
}

/// `|grad v|_{L^n(B_R)}` of the radial function with profile `v*`, in closed
/// form from the piecewise slopes.
pub fn gradient_n_norm(profile: &RadialProfile, geom: &BallGeometry) -> Result<f64, DilationError> {
    check_geometry(profile.profile(), geom)?;
    let n = geom.dimension();
    let factor = math::powi(n as f64, n - 1) * geom.omega_n();
    let mut total = 0.0;
    let nodes = profile.profile().nodes();
    for w in nodes.windows(2) {
        let (t0, v0) = w[0];
        let (t1, v1) = w[1];
        let slope = (v0 - v1) / (t1 - t0);
        if slope > 0.0 {
            total += math::powf(slope, n as f64) * factor * (math::powi(t1, n) - math::powi(t0, n));
        }
    }
    Ok(math::powf(total, 1.0 / n as f64))
}

/// Spherically symmetric rearrangement of a simple function, embedded as a
/// piecewise-linear profile with steep ramps of measure width `1e-9 M` at
/// each jump. The result is flagged: quasinorm identities remain exact up to
/// the ramp width, but the gradient norm of a step is enormous and such
/// profiles are rejected for certificate membership.
pub fn spherical_rearrangement(
    f: &SimpleFunction,
    geom: &BallGeometry,
) -> Result<RadialProfile, DilationError> {
    let m = geom.ball_measure();
    if f.total_mass() > m * (1.0 + TOL_EQ) {
        return Err(DilationError::MassOverflow {
            mass: f.total_mass(),
            ball_measure: m,
        });
    }
    let step = crate::rearrangement::rearrangement(f);
    if step.support_mass() >= m {
        return Err(DilationError::MassOverflow {
            mass: step.support_mass(),
            ball_measure: m,
        });
    }
    let ramp = 1e-9 * m;
    let mut nodes: Vec<(f64, f64)> = Vec::with_capacity(2 * step.values().len() + 2);
    if step.is_zero() {
        nodes.push((0.0, 0.0));
        nodes.push((0.5 * m, 0.0));
    } else {
        let mut prev_b = 0.0;
        for (i, &v) in step.values().iter().enumerate() {
            let b = step.breakpoints()[i];
            let w = libm::fmin(ramp, 0.5 * (b - prev_b));
            nodes.push((prev_b, v));
            nodes.push((b - w, v));
            prev_b = b;
        }
        let last_b = step.support_mass();
        nodes.push((last_b, 0.0));
        // interior nodes repeat values; drop duplicated abscissae from ramps
        nodes.dedup_by(|a, b| a.0 == b.0);
        // the flat pair (prev_b, v) after a ramp start duplicates the level;
        // LinearProfile::new tolerates collinear nodes, only ordering matters
    }
    let profile = LinearProfile::new(&nodes, f.total_mass().max(m))
        .map_err(|e| match e {
            DilationError::InvalidProfile(d) => DilationError::InvalidProfile(d),
            other => other,
        })?;
    Ok(RadialProfile {
        profile,
        step_embedded: true,
    })
}

/// Support radius of the dilated function:
/// `R_kappa = 2^((kappa-1)/(n kappa)) (R_tilde / R)^(1/kappa) R`.
pub fn support_radius(kappa: f64, r_tilde: f64, r: f64, n: u32) -> Result<f64, DilationError> {
    Ok(math::exp(ln_support_radius(kappa, r_tilde, r, n)?))
}

/// `ln R_kappa`, usable far below the underflow threshold of `R_kappa`.
pub fn ln_support_radius(kappa: f64, r_tilde: f64, r: f64, n: u32) -> Result<f64, DilationError> {
    if !(kappa > 0.0 && kappa < 1.0) {
        return Err(DilationError::KappaOutOfRange(kappa));
    }
    if n < 2 {
        return Err(DilationError::InvalidDimension(n));
    }
    if !(r_tilde > 0.0 && r_tilde < r && r.is_finite()) {
        return Err(DilationError::InvalidRadius(r_tilde));
    }
    Ok((kappa - 1.0) / (n as f64 * kappa) * math::ln(2.0)
        + math::ln(r_tilde / r) / kappa
        + math::ln(r))
}

/// Largest admissible `kappa`: `R_kappa < target` for every smaller value.
/// `R_kappa` is strictly increasing in `kappa` with limit `R_tilde`, so for
/// `target >= R_tilde` every `kappa` qualifies; otherwise bisection.
pub fn kappa_threshold(r_tilde: f64, r: f64, n: u32, target: f64) -> Result<f64, DilationError> {
    if !(r_tilde > 0.0 && r_tilde < r && r.is_finite()) {
        return Err(DilationError::InvalidRadius(r_tilde));
    }
    if !(target > 0.0) {
        return Err(DilationError::InvalidRadius(target));
    }
    if target >= r_tilde {
        return Ok(1.0);
    }
    let ln_target = math::ln(target);
    let (mut lo, mut hi) = (1e-12, 1.0 - 1e-12);
    if ln_support_radius(lo, r_tilde, r, n)? >= ln_target {
        return Ok(0.0);
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if ln_support_radius(mid, r_tilde, r, n)? < ln_target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// The dilated profile `g(t) = kappa^(1/n - 1) v*((2M)^(1-kappa) t^kappa)`,
/// kept symbolic: construction stores the base profile and evaluates on
/// demand, so no discretization of the dilated side ever happens.
#[derive(Debug, Clone)]
pub struct DilatedProfile {
    base: RadialProfile,
    geom: BallGeometry,
    kappa: f64,
    value_scale: f64,
}

/// Builds the dilation of `profile` with parameter `kappa` in (0, 1).
pub fn dilate(
    profile: &RadialProfile,
    geom: &BallGeometry,
    kappa: f64,
) -> Result<DilatedProfile, DilationError> {
    if !(kappa > 0.0 && kappa < 1.0) {
        return Err(DilationError::KappaOutOfRange(kappa));
    }
    check_geometry(profile.profile(), geom)?;
    let n = geom.dimension() as f64;
    Ok(DilatedProfile {
        base: profile.clone(),
        geom: *geom,
        kappa,
        value_scale: math::powf(kappa, -1.0 + 1.0 / n),
    })
}

impl DilatedProfile {
    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn base(&self) -> &RadialProfile {
        &self.base
    }

    pub fn geometry(&self) -> &BallGeometry {
        &self.geom
    }

    /// `g(t)` for `t > 0`.
    pub fn eval(&self, t: f64) -> f64 {
        let m = self.geom.ball_measure();
        // (2M)^(1-kappa) t^kappa, in logs to keep tiny supports reachable
        let arg = math::exp((1.0 - self.kappa) * math::ln(2.0 * m) + self.kappa * math::ln(t));
        self.value_scale * self.base.profile().value_at(arg)
    }

    /// `g` at `t = 2M exp(-u)`: the inner argument collapses to
    /// `2M exp(-kappa u)`, exact in log coordinates.
    pub fn eval_u(&self, u: f64) -> f64 {
        let m = self.geom.ball_measure();
        let arg = 2.0 * m * math::exp(-self.kappa * u);
        self.value_scale * self.base.profile().value_at(arg)
    }

    /// Support mass from the closed form `(M_tilde (2M)^(kappa-1))^(1/kappa)`.
    pub fn ln_support_mass_formula(&self) -> f64 {
        let m = self.geom.ball_measure();
        (math::ln(self.base.support_mass()) + (self.kappa - 1.0) * math::ln(2.0 * m)) / self.kappa
    }

    /// Support mass measured from the evaluator by bisection in
    /// `u = ln(2M/t)`; independent of the closed form.
    pub fn ln_support_mass_measured(&self) -> f64 {
        let m = self.geom.ball_measure();
        // g vanishes for small u and is positive for large u
        let mut lo = math::ln(2.0); // t = M
        let mut hi = lo.max(math::ln(2.0 * m / self.base.support_mass()) / self.kappa) + 1.0;
        let mut grow = 1.0;
        while self.eval_u(hi) <= 0.0 && grow < 1e9 {
            grow *= 2.0;
            hi += grow;
        }
        if self.eval_u(lo) > 0.0 {
            return math::ln(2.0 * m) - lo;
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if self.eval_u(mid) > 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        // t at the boundary u
        math::ln(2.0 * m) - 0.5 * (lo + hi)
    }

    pub fn support_mass_measured(&self) -> f64 {
        math::exp(self.ln_support_mass_measured())
    }

    /// Radii at which the dilated argument crosses the base profile nodes.
    fn node_radii(&self) -> Vec<f64> {
        let m = self.geom.ball_measure();
        let n = self.geom.dimension() as f64;
        let mut out = Vec::new();
        for &(t, _) in self.base.profile().nodes() {
            if t > 0.0 {
                // solve (2M)^(1-kappa) (omega r^n)^kappa = t
                let ln_mass = (math::ln(t) + (self.kappa - 1.0) * math::ln(2.0 * m)) / self.kappa;
                let ln_r = (ln_mass - math::ln(self.geom.omega_n())) / n;
                out.push(math::exp(ln_r));
            }
        }
        out.sort_by(f64::total_cmp);
        out
    }

    /// `|grad v_kappa(r)|` with the base slope supplied by the caller; the
    /// slope is constant on each radial segment between node images, so
    /// fixing it per segment evaluates the exact piecewise derivative
    /// without the boundary ambiguity of a pointwise lookup.
    fn gradient_at_radius(&self, r: f64, slope: f64) -> f64 {
        if r <= 0.0 || slope <= 0.0 {
            return 0.0;
        }
        let n = self.geom.dimension() as f64;
        let big_r = self.geom.radius();
        // rho(r) = r^kappa / (2^(1/n) R)^(kappa - 1)
        let ln_rho = self.kappa * math::ln(r) - (self.kappa - 1.0) * (math::ln(2.0) / n + math::ln(big_r));
        let rho = math::exp(ln_rho);
        let phi = slope * n * self.geom.omega_n() * math::powf(rho, n - 1.0);
        math::powf(self.kappa, 1.0 / n) * phi * rho / r
    }

    /// Measure argument of the base profile seen from radius `r`.
    fn base_arg_at_radius(&self, r: f64) -> f64 {
        let m = self.geom.ball_measure();
        let n = self.geom.dimension() as f64;
        let ln_mass = math::ln(self.geom.omega_n()) + n * math::ln(r);
        math::exp((1.0 - self.kappa) * math::ln(2.0 * m) + self.kappa * ln_mass)
    }

    /// `|grad v_kappa|_{L^n(B_R)}` by adaptive radial quadrature of
    /// `|grad v_kappa(r)|^n n omega_n r^(n-1)`, split at the radii where the
    /// integrand changes piece and log-substituted near the origin.
    pub fn gradient_norm_numeric(&self, cfg: &QuadratureConfig) -> EvalOutcome {
        let n = self.geom.dimension() as f64;
        let surface = n * self.geom.omega_n();
        let radii = self.node_radii();
        let mut total = 0.0;
        let mut err = 0.0;
        let mut converged = true;
        let mut lo = 0.0f64;
        let beta = self.kappa * n * n; // local power near the origin
        for &hi in &radii {
            if hi <= lo {
                continue;
            }
            let mid = if lo == 0.0 { 0.5 * hi } else { math::sqrt(lo * hi) };
            let slope = slope_at(self.base.profile(), self.base_arg_at_radius(mid));
            if slope <= 0.0 {
                lo = hi;
                continue;
            }
            let integrand = |r: f64| {
                let g = self.gradient_at_radius(r, slope);
                math::powf(g, n) * surface * math::powf(r, n - 1.0)
            };
            if lo == 0.0 {
                // r = hi exp(-s): with the Jacobian folded in, the integrand
                // collapses to n omega kappa (slope n omega)^n rho(r)^(n^2),
                // which stays bounded long after r itself underflows
                let prefactor = surface * self.kappa * math::powf(slope * surface, n);
                let ln_hi = math::ln(hi);
                let rho_const =
                    -(self.kappa - 1.0) * (math::ln(2.0) / n + math::ln(self.geom.radius()));
                let f = |s: f64| {
                    let ln_rho = self.kappa * (ln_hi - s) + rho_const;
                    prefactor * math::exp(n * n * ln_rho)
                };
                let magnitude = libm::fabs(f(0.0)) + 1e-300;
                let cut = quad::decay_cutoff(
                    &f,
                    0.0,
                    4.0 / beta,
                    0.5 * beta,
                    cfg.abs_tol.max(1e-3 * cfg.rel_tol * magnitude / beta),
                );
                let r = quad::adaptive_simpson(&f, 0.0, cut, cfg);
                total += r.value;
                err += r.abs_err;
                converged &= r.converged;
            } else {
                let r = quad::adaptive_simpson(&integrand, lo, hi, cfg);
                total += r.value;
                err += r.abs_err;
                converged &= r.converged;
            }
            lo = hi;
        }
        let value = math::powf(total, 1.0 / n);
        EvalOutcome {
            value,
            abs_err_estimate: if total > 0.0 { err * value / (n * total) } else { err },
            method: Method::Quadrature,
            converged,
        }
    }

    /// Lorentz-Zygmund quasinorm `L^{inf, q, alpha}` of the dilated profile
    /// with `alpha = -1 + 1/n - 1/q`, evaluated by direct quadrature (or a
    /// direct supremum scan for `q = inf`) in the coordinates
    /// `u = ln(2M/t)`, never through the change of variables that proves the
    /// invariance identity.
    pub fn lz_quasinorm_numeric(&self, q: f64, cfg: &QuadratureConfig) -> Result<EvalOutcome, DilationError> {
        let n = self.geom.dimension();
        if !(q >= n as f64) || q.is_nan() {
            return Err(DilationError::InvalidTargetExponent { q, n });
        }
        let nf = n as f64;
        let m = self.geom.ball_measure();
        let alpha = -1.0 + 1.0 / nf - if q.is_finite() { 1.0 / q } else { 0.0 };
        let m_tilde = self.base.support_mass();
        if m_tilde == 0.0 {
            return Ok(EvalOutcome::closed_zero());
        }
        // support boundary and node images in u
        let u_start = math::ln(2.0 * m / m_tilde) / self.kappa;
        let mut kinks: Vec<f64> = self
            .base
            .profile()
            .nodes()
            .iter()
            .filter(|&&(t, _)| t > 0.0)
            .map(|&(t, _)| math::ln(2.0 * m / t) / self.kappa)
            .collect();
        kinks.sort_by(f64::total_cmp);
        kinks.retain(|&u| u > u_start);
        // beyond the last node image the base argument sits in the top piece
        let (t0, v0) = self.base.profile().nodes()[0];
        let (t1, _) = self.base.profile().nodes()[1];
        let top_slope = (v0 - self.base.profile().value_at(t1)) / (t1 - t0);
        let u_top = math::ln(2.0 * m / t1) / self.kappa;
        // where the evaluator is flat to machine precision
        let u_flat = if top_slope == 0.0 || v0 == 0.0 {
            u_top
        } else {
            // |v(arg) - v0| <= slope * arg <= 1e-13 v0
            (math::ln(2.0 * m * top_slope / (1e-13 * v0))).max(math::ln(2.0 * m / t1)) / self.kappa
        };

        if q.is_finite() {
            let aq = alpha * q;
            debug_assert!(aq < -1.0);
            let integrand = |u: f64| math::powf(self.eval_u(u), q) * math::powf(u, aq);
            let mut pts = alloc::vec![u_start];
            pts.extend(kinks.iter().copied().filter(|&u| u < u_flat));
            pts.push(u_flat);
            pts.sort_by(f64::total_cmp);
            pts.dedup();
            let r = quad::adaptive_simpson_segments(&integrand, &pts, cfg);
            // flat tail: g = scale * v0 beyond u_flat
            let tail = if v0 > 0.0 {
                math::powf(self.value_scale * v0, q) * math::powf(u_flat, aq + 1.0) / (-aq - 1.0)
            } else {
                0.0
            };
            let total = r.value + tail;
            let value = math::powf(total, 1.0 / q);
            return Ok(EvalOutcome {
                value,
                abs_err_estimate: if total > 0.0 {
                    (r.abs_err + 1e-13 * tail) * value / (q * total)
                } else {
                    r.abs_err
                },
                method: Method::Quadrature,
                converged: r.converged,
            });
        }

        // q = inf: sup of g(t) log(2M/t)^alpha = sup_u eval_u(u) u^alpha
        let h = |u: f64| self.eval_u(u) * math::powf(u, alpha);
        let mut pts = alloc::vec![u_start];
        pts.extend(kinks.iter().copied().filter(|&u| u < u_flat));
        pts.push(u_flat);
        pts.sort_by(f64::total_cmp);
        pts.dedup();
        let mut sup = h(u_flat); // tail is decreasing beyond u_flat
        for w in pts.windows(2) {
            sup = libm::fmax(sup, segment_sup(&h, w[0], w[1]));
        }
        Ok(EvalOutcome {
            value: sup,
            abs_err_estimate: 0.0,
            method: Method::Quadrature,
            converged: true,
        })
    }
}

impl EvalOutcome {
    fn closed_zero() -> Self {
        Self {
            value: 0.0,
            abs_err_estimate: 0.0,
            method: Method::ClosedForm,
            converged: true,
        }
    }
}

/// Slope `-dv*/dt >= 0` of the profile at measure argument `t` (one-sided,
/// irrelevant on the null set of nodes).
fn slope_at(profile: &LinearProfile, t: f64) -> f64 {
    let nodes = profile.nodes();
    let last = nodes.len() - 1;
    if t <= 0.0 || t >= nodes[last].0 {
        return 0.0;
    }
    let seg = match nodes.binary_search_by(|&(nt, _)| nt.total_cmp(&t)) {
        Ok(i) => i.min(last - 1),
        Err(i) => i - 1,
    };
    let (t0, v0) = nodes[seg];
    let (t1, v1) = nodes[seg + 1];
    (v0 - v1) / (t1 - t0)
}

/// Supremum of a smooth function on `[a, b]` by dense sampling plus golden
/// refinement around the best bracket.
fn segment_sup<F: Fn(f64) -> f64>(h: &F, a: f64, b: f64) -> f64 {
    const SAMPLES: usize = 256;
    let mut best = f64::NEG_INFINITY;
    let mut best_k = 0;
    for k in 0..=SAMPLES {
        let u = a + (b - a) * k as f64 / SAMPLES as f64;
        let v = h(u);
        if v > best {
            best = v;
            best_k = k;
        }
    }
    let lo = a + (b - a) * (best_k.saturating_sub(1)) as f64 / SAMPLES as f64;
    let hi = a + (b - a) * ((best_k + 1).min(SAMPLES)) as f64 / SAMPLES as f64;
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let (mut a, mut b) = (lo, hi);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = h(c);
    let mut fd = h(d);
    for _ in 0..90 {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = h(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = h(d);
        }
    }
    libm::fmax(best, libm::fmax(fc, fd))
}

/// Lorentz-Zygmund quasinorm of a piecewise-linear base profile: the
/// comparison side of the dilation identities. Finite `q` integrates piece by
/// piece (flat pieces through the weight's own antiderivatives, sloped pieces
/// by quadrature with the origin handled in `u = ln(2M/t)`); `q = inf` takes
/// per-piece suprema.
pub fn lz_quasinorm_linear(
    profile: &LinearProfile,
    p: f64,
    q: f64,
    alpha: f64,
    cfg: &QuadratureConfig,
) -> Result<EvalOutcome, DilationError> {
    if !(p > 0.0) || p.is_nan() || !(q > 0.0) || q.is_nan() || !alpha.is_finite() {
        return Err(DilationError::InvalidProfile(alloc::format!(
            "invalid quasinorm parameters (p, q, alpha) = ({p}, {q}, {alpha})"
        )));
    }
    let m = profile.total_mass();
    let nodes = profile.nodes();
    let support = profile.support_mass();
    if support == 0.0 {
        return Ok(EvalOutcome::closed_zero());
    }
    let c = if p.is_infinite() { 0.0 } else { q / p };

    if q.is_finite() {
        let weight = Weight::power_log(p, q, alpha, m)?;
        let aq = alpha * q;
        let mut total = 0.0;
        let mut err = 0.0;
        let mut method = Method::ClosedForm;
        let mut converged = true;
        for w in nodes.windows(2) {
            let (t0, v0) = w[0];
            let (t1, v1) = w[1];
            if v0 == 0.0 {
                break;
            }
            if v0 == v1 {
                let piece = weight.integral(t0, t1, cfg);
                total += math::powf(v0, q) * piece.value;
                err += math::powf(v0, q) * piece.abs_err_estimate;
                method = method.combine(piece.method);
                converged &= piece.converged;
                continue;
            }
            method = Method::Quadrature;
            let slope = (v0 - v1) / (t1 - t0);
            let value_at = |t: f64| v0 - slope * (t - t0);
            if t0 > 0.0 {
                let f = |t: f64| math::powf(value_at(t), q) * weight.eval(t);
                let r = quad::adaptive_simpson(&f, t0, t1, cfg);
                total += r.value;
                err += r.abs_err;
                converged &= r.converged;
            } else {
                // first piece from the origin in u = ln(2M/t)
                let u1 = math::ln(2.0 * m / t1);
                let f = |u: f64| {
                    let t = 2.0 * m * math::exp(-u);
                    math::powf(value_at(t), q) * math::powf(2.0 * m, c) * math::exp(-c * u) * math::powf(u, aq)
                };
                if c > 0.0 {
                    let magnitude = libm::fabs(f(u1)) + 1e-300;
                    let cut = quad::decay_cutoff(&f, u1, 4.0 / c, 0.5 * c, cfg.abs_tol.max(1e-3 * cfg.rel_tol * magnitude / c));
                    let r = quad::adaptive_simpson(&f, u1, cut, cfg);
                    total += r.value;
                    err += r.abs_err;
                    converged &= r.converged;
                } else {
                    // p = inf: v converges to v0 exponentially in u
                    if aq >= -1.0 {
                        return Ok(EvalOutcome {
                            value: f64::INFINITY,
                            abs_err_estimate: 0.0,
                            method,
                            converged: true,
                        });
                    }
                    let u_flat = (math::ln(2.0 * m * slope / (1e-13 * v0))).max(u1);
                    let r = quad::adaptive_simpson(&f, u1, u_flat, cfg);
                    let tail = math::powf(v0, q) * math::powf(u_flat, aq + 1.0) / (-aq - 1.0);
                    total += r.value + tail;
                    err += r.abs_err + 1e-13 * tail;
                    converged &= r.converged;
                }
            }
        }
        let value = math::powf(total, 1.0 / q);
        return Ok(EvalOutcome {
            value,
            abs_err_estimate: if total > 0.0 && value.is_finite() {
                err * value / (q * total)
            } else {
                err
            },
            method,
            converged,
        });
    }

    // q = inf
    let inv_p = if p.is_infinite() { 0.0 } else { 1.0 / p };
    let weight_factor = |t: f64| math::powf(t, inv_p) * math::powf(math::ln(2.0 * m / t), alpha);
    let mut sup = 0.0f64;
    for w in nodes.windows(2) {
        let (t0, v0) = w[0];
        let (t1, v1) = w[1];
        if v0 == 0.0 {
            break;
        }
        let slope = (v0 - v1) / (t1 - t0);
        let value_at = |t: f64| v0 - slope * (t - t0);
        if t0 > 0.0 {
            sup = libm::fmax(sup, segment_sup(&|t| value_at(t) * weight_factor(t), t0, t1));
        } else {
            // first piece in u coordinates; h -> 0 or v0 * u^alpha as u grows
            let u1 = math::ln(2.0 * m / t1);
            let h = |u: f64| value_at(2.0 * m * math::exp(-u)) * math::powf(2.0 * m, inv_p) * math::exp(-inv_p * u) * math::powf(u, alpha);
            if p.is_infinite() && alpha > 0.0 && v0 > 0.0 {
                return Ok(EvalOutcome {
                    value: f64::INFINITY,
                    abs_err_estimate: 0.0,
                    method: Method::Quadrature,
                    converged: true,
                });
            }
            let u_far = if slope == 0.0 || v0 == 0.0 {
                u1 + 1.0
            } else {
                (math::ln(2.0 * m * slope / (1e-13 * (v0 + 1e-300)))).max(u1) + 1.0
            };
            sup = libm::fmax(sup, segment_sup(&h, u1, u_far));
            if p.is_infinite() && alpha < 0.0 {
                // decreasing tail: boundary value dominates past u_far
                sup = libm::fmax(sup, h(u_far));
            } else if p.is_finite() {
                sup = libm::fmax(sup, h(u_far));
            }
        }
    }
    Ok(EvalOutcome {
        value: sup,
        abs_err_estimate: 0.0,
        method: Method::Quadrature,
        converged: true,
    })
}

/// One row of the invariance verification table.
#[derive(Debug, Clone, Copy)]
pub struct InvarianceRow {
    pub kappa: f64,
    pub r_kappa: f64,
    pub grad_rel_err: f64,
    pub qnorm_rel_err: f64,
    pub qnorm_value: f64,
    pub support_mass: f64,
}

/// Base quantities entering every row of an invariance report.
#[derive(Debug, Clone, Copy)]
pub struct InvarianceBase {
    pub grad: f64,
    pub qnorm: f64,
    pub r_tilde: f64,
}

/// Computes the closed-form side of the invariance identities once.
pub fn invariance_base(
    profile: &RadialProfile,
    geom: &BallGeometry,
    q: f64,
    cfg: &QuadratureConfig,
) -> Result<InvarianceBase, DilationError> {
    check_geometry(profile.profile(), geom)?;
    let nf = geom.dimension() as f64;
    let alpha = -1.0 + 1.0 / nf - if q.is_finite() { 1.0 / q } else { 0.0 };
    Ok(InvarianceBase {
        grad: gradient_n_norm(profile, geom)?,
        qnorm: lz_quasinorm_linear(profile.profile(), f64::INFINITY, q, alpha, cfg)?.value,
        r_tilde: geom.radius_of_mass(profile.support_mass()),
    })
}

/// One verification row: both dilated quantities evaluated independently
/// and compared against the base.
pub fn invariance_row(
    profile: &RadialProfile,
    geom: &BallGeometry,
    q: f64,
    kappa: f64,
    base: &InvarianceBase,
    cfg: &QuadratureConfig,
) -> Result<InvarianceRow, DilationError> {
    let d = dilate(profile, geom, kappa)?;
    let grad = d.gradient_norm_numeric(cfg).value;
    let qn = d.lz_quasinorm_numeric(q, cfg)?.value;
    Ok(InvarianceRow {
        kappa,
        r_kappa: support_radius(kappa, base.r_tilde, geom.radius(), geom.dimension())?,
        grad_rel_err: math::rel_err(grad, base.grad),
        qnorm_rel_err: math::rel_err(qn, base.qnorm),
        qnorm_value: qn,
        support_mass: d.support_mass_measured(),
    })
}

/// Verifies both dilation invariances for each `kappa`: gradient norm by
/// independent radial quadrature against the closed form, quasinorm by
/// direct evaluation against the base profile.
pub fn invariance_report(
    profile: &RadialProfile,
    geom: &BallGeometry,
    q: f64,
    kappas: &[f64],
    cfg: &QuadratureConfig,
) -> Result<Vec<InvarianceRow>, DilationError> {
    let base = invariance_base(profile, geom, q, cfg)?;
    let mut rows = Vec::with_capacity(kappas.len());
    for &kappa in kappas {
        rows.push(invariance_row(profile, geom, q, kappa, &base, cfg)?);
    }
    Ok(rows)
}

/// A verified witness family for the lower bound `beta >= lambda` on the
/// ball measure of noncompactness of the limiting Sobolev embedding.
#[derive(Debug, Clone)]
pub struct NoncompactnessCertificate {
    pub lambda: f64,
    pub kappas: Vec<f64>,
    /// Support radii of the witnesses; entries may underflow to zero once
    /// the radii drop below the smallest positive float.
    pub support_radii: Vec<f64>,
    /// Logarithms of the support radii; these stay meaningful (and strictly
    /// decreasing) long after the radii themselves underflow.
    pub ln_support_radii: Vec<f64>,
    pub quasinorms: Vec<f64>,
    pub conditions_met: bool,
}

/// Certifies `beta >= lambda` for the embedding into `L^{inf,q,alpha}` with
/// `alpha = -1 + 1/n - 1/q`: the profile must lie in the Sobolev unit ball,
/// the dilated supports must shrink strictly, and every dilated quasinorm
/// (evaluated numerically, not through the invariance identity) must reach
/// `lambda` up to the standard slack.
pub fn noncompactness_certificate(
    profile: &RadialProfile,
    geom: &BallGeometry,
    q: f64,
    kappas: &[f64],
    lambda: f64,
    cfg: &QuadratureConfig,
) -> Result<NoncompactnessCertificate, DilationError> {
    check_geometry(profile.profile(), geom)?;
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(DilationError::InvalidProfile(alloc::format!(
            "lambda = {lambda} must be positive and finite"
        )));
    }
    if profile.step_embedded() {
        return Err(DilationError::StepEmbeddedProfile);
    }
    if kappas.is_empty() {
        return Err(DilationError::InvalidKappaSequence(String::from("empty")));
    }
    let mut prev = 1.0;
    for &k in kappas {
        if !(k > 0.0 && k < prev) {
            return Err(DilationError::InvalidKappaSequence(alloc::format!(
                "kappas must be strictly decreasing inside (0, 1), got {k} after {prev}"
            )));
        }
        prev = k;
    }
    let grad = gradient_n_norm(profile, geom)?;
    if !(grad <= 1.0 + MEMBERSHIP_TOL) {
        return Err(DilationError::MembershipViolation { gradient_norm: grad });
    }
    let r_tilde = geom.radius_of_mass(profile.support_mass());
    let mut support_radii = Vec::with_capacity(kappas.len());
    let mut ln_radii = Vec::with_capacity(kappas.len());
    let mut quasinorms = Vec::with_capacity(kappas.len());
    let mut prev_ln = f64::INFINITY;
    for &kappa in kappas {
        let ln_r = ln_support_radius(kappa, r_tilde, geom.radius(), geom.dimension())?;
        if !(ln_r < prev_ln) {
            return Err(DilationError::InvalidKappaSequence(String::from(
                "support radii failed to decrease strictly",
            )));
        }
        prev_ln = ln_r;
        let d = dilate(profile, geom, kappa)?;
        let qn = d.lz_quasinorm_numeric(q, cfg)?.value;
        if !(qn >= lambda - QUASINORM_TOL) {
            return Err(DilationError::QuasinormBelowLambda {
                kappa,
                value: qn,
                lambda,
            });
        }
        support_radii.push(math::exp(ln_r));
        ln_radii.push(ln_r);
        quasinorms.push(qn);
    }
    Ok(NoncompactnessCertificate {
        lambda,
        kappas: kappas.to_vec(),
        support_radii,
        ln_support_radii: ln_radii,
        quasinorms,
        conditions_met: true,
    })
}

/// Two-node tent: linear in the measure variable from `(0, 1)` to
/// `(support_mass, 0)`.
pub fn tent_profile(support_mass: f64, total_mass: f64) -> Result<RadialProfile, DilationError> {
    Ok(RadialProfile::new(LinearProfile::new(
        &[(0.0, 1.0), (support_mass, 0.0)],
        total_mass,
    )?))
}

/// Tent that is linear in the radius, `v(x) = 1 - |x| / r_tilde`, sampled
/// into the measure variable: `v*(t) = 1 - (t / support_mass)^(1/n)`.
pub fn radial_tent_profile(
    n: u32,
    support_mass: f64,
    total_mass: f64,
    samples: usize,
) -> Result<RadialProfile, DilationError> {
    if n < 2 {
        return Err(DilationError::InvalidDimension(n));
    }
    if samples < 2 {
        return Err(DilationError::InvalidProfile(String::from("need at least 2 samples")));
    }
    let mut nodes = Vec::with_capacity(samples + 1);
    for j in 0..=samples {
        let frac = j as f64 / samples as f64;
        nodes.push((support_mass * math::powi(frac, n), 1.0 - frac));
    }
    Ok(RadialProfile::new(LinearProfile::new(&nodes, total_mass)?))
}

/// Truncated-logarithm profile `v*(t) = min(1, ln(support_mass / t) / ell)`,
/// the classical near-extremal shape for the limiting embedding, sampled
/// geometrically so the sampled values are exact.
pub fn moser_profile(
    support_mass: f64,
    total_mass: f64,
    ell: f64,
    samples: usize,
) -> Result<RadialProfile, DilationError> {
    if !(ell > 0.0 && ell.is_finite()) {
        return Err(DilationError::InvalidProfile(alloc::format!(
            "log depth ell = {ell} must be positive and finite"
        )));
    }
    if samples < 2 {
        return Err(DilationError::InvalidProfile(String::from("need at least 2 samples")));
    }
    let mut nodes = Vec::with_capacity(samples + 2);
    nodes.push((0.0, 1.0));
    for j in 0..=samples {
        let frac = j as f64 / samples as f64;
        // t = support * exp(-ell (1 - frac)), value = 1 - frac
        nodes.push((support_mass * math::exp(-ell * (1.0 - frac)), 1.0 - frac));
    }
    Ok(RadialProfile::new(LinearProfile::new(&nodes, total_mass)?))
}
