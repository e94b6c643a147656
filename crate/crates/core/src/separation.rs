//! Uniform separation: the dilation functional `Theta`, separation
//! certificates, the alpha-norm bound, and a falsification harness.
//!
//! `Theta(lambda) = sup_t w(t/lambda) / (lambda w(t))` controls how a Lambda
//! quasinorm reacts to dilation of the measure variable. Whenever
//! `inf Theta <= 1`, any pair with `|g| >= R` and `|f| <= r < R` satisfies
//! `|f + g| >= eps` for an explicit `eps > 0`; the certificate below carries
//! the maximizing `lambda0` and that `eps`.
//!
//! The supremum defining `Theta` is taken in the coordinates `u = log(2M/t)`.
//! Both weight evaluations enter through `ln w`, so points far beyond the
//! underflow range of `t` itself remain reachable and boundary suprema that
//! are approached only as `t -> 0` are resolved to full accuracy.

use alloc::vec::Vec;
use core::fmt;

use crate::math;
use crate::rng::SplitMix64;
use crate::weights::{LambdaParams, Weight, WeightError};

#[derive(Debug, Clone, PartialEq)]
pub enum SeparationError {
    /// `lambda` must lie strictly between 0 and 1.
    LambdaOutOfRange(f64),
    /// Radii must satisfy `0 < r < R`.
    InvalidRadii { r: f64, big_r: f64 },
    /// Alpha-norm exponent must lie in (0, 1].
    InvalidAlpha(f64),
    /// The grid minimum of `Theta` exceeds 1; the certificate's hypothesis
    /// could not be verified for this weight.
    HypothesisUnverified { theta_min: f64 },
    /// No `lambda0` on the search grid produced a positive epsilon.
    NoPositiveEpsilon,
    Weight(WeightError),
}

impl fmt::Display for SeparationError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::LambdaOutOfRange(l) => write!(f, "lambda = {l} must lie in (0, 1)"),
            Self::InvalidRadii { r, big_r } => write!(f, "radii must satisfy 0 < r < R, got r = {r}, R = {big_r}"),
            Self::InvalidAlpha(a) => write!(f, "alpha = {a} must lie in (0, 1]"),
            Self::HypothesisUnverified { theta_min } => {
                write!(f, "inf Theta = {theta_min} exceeds 1; separation hypothesis unverified")
            }
            Self::NoPositiveEpsilon => write!(f, "no positive epsilon on the search grid"),
            Self::Weight(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for SeparationError {}

impl From<WeightError> for SeparationError {
    fn from(e: WeightError) -> Self {
        Self::Weight(e)
    }
}

fn check_lambda(lambda: f64) -> Result<(), SeparationError> {
    if !(lambda > 0.0 && lambda < 1.0) {
        return Err(SeparationError::LambdaOutOfRange(lambda));
    }
    Ok(())
}

/// `ln` of the dilation ratio `w(t/lambda) / (lambda w(t))` at `u = ln(2M/t)`.
fn ln_ratio(weight: &Weight, lambda: f64, u: f64) -> f64 {
    let ln_t = math::ln(2.0 * weight.total_mass()) - u;
    weight.ln_eval_diff(ln_t, -math::ln(lambda)) - math::ln(lambda)
}

/// Golden-section maximization on `[a, b]` for a continuous function.
fn golden_max<F: Fn(f64) -> f64>(f: &F, mut a: f64, mut b: f64, iters: u32) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..iters {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}

/// `Theta(lambda)`: closed form for power-log weights, exact piecewise-linear
/// analysis for tabulated ones.
pub fn theta(weight: &Weight, lambda: f64) -> Result<f64, SeparationError> {
    check_lambda(lambda)?;
    match weight {
        Weight::PowerLog { p, q, alpha, .. } => {
            let qp = if p.is_infinite() { 0.0 } else { q / p };
            let base = math::powf(lambda, -qp);
            if *alpha >= 0.0 {
                Ok(base)
            } else {
                let aq = alpha * q;
                Ok(base * math::powf(math::ln(2.0) / math::ln(2.0 / lambda), aq))
            }
        }
        Weight::Tabulated(_) => Ok(theta_tabulated_exact(weight, lambda)),
    }
}

/// For a log-log interpolated weight the log-ratio is piecewise linear in
/// `ln t`, so the supremum sits at a kink of either factor (the "grid
/// intersection"), at the right endpoint `t = lambda M`, or on the flat
/// extrapolated tail at the left.
fn theta_tabulated_exact(weight: &Weight, lambda: f64) -> f64 {
    let tab_grid: Vec<f64> = match weight {
        Weight::Tabulated(t) => t.grid().to_vec(),
        _ => unreachable!("caller dispatches on variant"),
    };
    let m = weight.total_mass();
    let ln_lambda = math::ln(lambda);
    let ln_hi = math::ln(lambda * m);
    let mut candidates: Vec<f64> = Vec::with_capacity(2 * tab_grid.len() + 2);
    candidates.push(ln_hi);
    for &g in &tab_grid {
        let lg = math::ln(g);
        if lg < ln_hi {
            candidates.push(lg);
        }
        if lg + ln_lambda < ln_hi {
            candidates.push(lg + ln_lambda);
        }
    }
    // left of the lowest kink both factors use the same extrapolation slope,
    // so the log-ratio is constant there; one more point below suffices
    candidates.push(math::ln(tab_grid[0]) + ln_lambda - 1.0);
    let ln_2m = math::ln(2.0 * m);
    let mut best = f64::NEG_INFINITY;
    for &ln_t in &candidates {
        let u = ln_2m - ln_t;
        best = libm::fmax(best, ln_ratio(weight, lambda, u));
    }
    math::exp(best)
}

/// Grid supremum of the dilation ratio with golden refinement and trend-based
/// divergence detection; works for any weight and is the cross-check for the
/// closed forms.
pub fn theta_numeric(weight: &Weight, lambda: f64) -> Result<f64, SeparationError> {
    check_lambda(lambda)?;
    // u ranges over [ln(2/lambda), inf); the left end is t = lambda M
    let u_lo = math::ln(2.0 / lambda);
    let mut rounds = Vec::new();
    for round in 0..3u32 {
        let u_hi = math::powf(10.0, 6.0 + 3.0 * round as f64);
        let n = 400usize << round;
        let mut best = f64::NEG_INFINITY;
        let mut best_idx = 0usize;
        let mut us = Vec::with_capacity(n + 1);
        for k in 0..=n {
            // geometric spacing from u_lo to u_hi
            let u = u_lo * math::powf(u_hi / u_lo, k as f64 / n as f64);
            us.push(u);
            let v = ln_ratio(weight, lambda, u);
            if v > best {
                best = v;
                best_idx = k;
            }
        }
        // refine around the argmax when it is interior
        if best_idx > 0 && best_idx + 1 < us.len() {
            let (_, refined) = golden_max(
                &|u| ln_ratio(weight, lambda, u),
                us[best_idx - 1],
                us[best_idx + 1],
                120,
            );
            best = libm::fmax(best, refined);
        }
        rounds.push(math::exp(best));
    }
    let last = rounds[2];
    let prev = rounds[1];
    if !last.is_finite() || last > prev * 1.01 {
        return Ok(f64::INFINITY);
    }
    Ok(last)
}

/// A uniform-separation certificate: whenever `|g| >= R` and `|f| <= r` in
/// the Lambda quasinorm, `|f + g| >= epsilon`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeparationCertificate {
    pub r_small: f64,
    pub r_large: f64,
    pub lambda0: f64,
    pub epsilon: f64,
}

/// The separation bound `eps(lambda) = Theta(lambda)^(-1/q)
/// (R - Theta(1 - lambda)^(1/q) r)` at one `lambda`; negative where the
/// bound is vacuous.
pub fn separation_epsilon_at(params: &LambdaParams, r_small: f64, r_large: f64, lambda: f64) -> f64 {
    let t0 = match theta(params.weight(), lambda) {
        Ok(v) => v,
        Err(_) => return f64::NEG_INFINITY,
    };
    let t1 = match theta(params.weight(), 1.0 - lambda) {
        Ok(v) => v,
        Err(_) => return f64::NEG_INFINITY,
    };
    if !t0.is_finite() || !t1.is_finite() {
        return f64::NEG_INFINITY;
    }
    let q = params.q();
    math::powf(t0, -1.0 / q) * (r_large - math::powf(t1, 1.0 / q) * r_small)
}

/// `eps(lambda)` sampled on a uniform interior grid, for plotting.
pub fn separation_epsilon_curve(
    params: &LambdaParams,
    r_small: f64,
    r_large: f64,
    points: usize,
) -> Result<Vec<(f64, f64)>, SeparationError> {
    if !(r_small > 0.0 && r_small < r_large && r_large.is_finite()) {
        return Err(SeparationError::InvalidRadii { r: r_small, big_r: r_large });
    }
    let mut out = Vec::with_capacity(points);
    for k in 1..=points {
        let lambda = k as f64 / (points + 1) as f64;
        out.push((lambda, separation_epsilon_at(params, r_small, r_large, lambda)));
    }
    Ok(out)
}

/// Verifies `inf Theta <= 1` on a grid and maximizes
/// `eps(lambda) = Theta(lambda)^(-1/q) (R - Theta(1 - lambda)^(1/q) r)`
/// over `lambda` by golden-section search seeded from a 64-point grid.
pub fn separation_certificate(
    params: &LambdaParams,
    r_small: f64,
    r_large: f64,
) -> Result<SeparationCertificate, SeparationError> {
    if !(r_small > 0.0 && r_small < r_large && r_large.is_finite()) {
        return Err(SeparationError::InvalidRadii { r: r_small, big_r: r_large });
    }
    let weight = params.weight();

    // hypothesis: inf Theta <= 1, checked on a lambda grid crowding 1
    let mut theta_min = f64::INFINITY;
    for k in 1..=40 {
        theta_min = libm::fmin(theta_min, theta(weight, k as f64 / 41.0)?);
    }
    for k in 1..=8 {
        theta_min = libm::fmin(theta_min, theta(weight, 1.0 - math::powf(10.0, -(k as f64)))?);
    }
    if theta_min > 1.0 + 1e-6 {
        return Err(SeparationError::HypothesisUnverified { theta_min });
    }

    let eps_at = |lambda: f64| separation_epsilon_at(params, r_small, r_large, lambda);

    let grid_n = 64usize;
    let mut best = f64::NEG_INFINITY;
    let mut best_k = 0usize;
    for k in 1..=grid_n {
        let lambda = k as f64 / (grid_n + 1) as f64;
        let e = eps_at(lambda);
        if e > best {
            best = e;
            best_k = k;
        }
    }
    if !(best > 0.0) {
        return Err(SeparationError::NoPositiveEpsilon);
    }
    let lo = (best_k as f64 - 1.0) / (grid_n + 1) as f64;
    let hi = (best_k as f64 + 1.0) / (grid_n + 1) as f64;
    let (lambda0, eps) = golden_max(&eps_at, libm::fmax(lo, 1e-9), libm::fmin(hi, 1.0 - 1e-9), 200);
    let (lambda0, eps) = if eps >= best { (lambda0, eps) } else { (best_k as f64 / (grid_n + 1) as f64, best) };
    Ok(SeparationCertificate {
        r_small,
        r_large,
        lambda0,
        epsilon: eps,
    })
}

/// Separation bound of an alpha-norm: `(R^alpha - r^alpha)^(1/alpha)`.
pub fn alpha_norm_epsilon(alpha: f64, r_small: f64, r_large: f64) -> Result<f64, SeparationError> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(SeparationError::InvalidAlpha(alpha));
    }
    if !(r_small > 0.0 && r_small < r_large && r_large.is_finite()) {
        return Err(SeparationError::InvalidRadii { r: r_small, big_r: r_large });
    }
    Ok(math::powf(
        math::powf(r_large, alpha) - math::powf(r_small, alpha),
        1.0 / alpha,
    ))
}

/// The plane quasinorm that is not uniformly separating:
/// `2|x|` on the axis `y = 0`, `|x| + |y|` off it.
pub fn plane_counterexample_qnorm(x: f64, y: f64) -> f64 {
    if y == 0.0 {
        2.0 * libm::fabs(x)
    } else {
        libm::fabs(x) + libm::fabs(y)
    }
}

/// A found violation of a claimed separation bound.
#[derive(Debug, Clone, PartialEq)]
pub struct Counterexample {
    pub f: Vec<f64>,
    pub g: Vec<f64>,
    pub norm_f: f64,
    pub norm_g: f64,
    pub norm_sum: f64,
    pub trial: u64,
}

/// Randomized plus structured search for a pair violating
/// `|f + g| >= eps_claimed` subject to `|g| >= R` and `|f| <= r`.
///
/// Deterministic for a fixed seed; trials draw from independent counter
/// streams. Absence of a counterexample is evidence, not proof.
pub fn falsify_uniform_separation<F: Fn(&[f64]) -> f64>(
    qnorm: &F,
    dim: usize,
    r_small: f64,
    r_large: f64,
    eps_claimed: f64,
    budget: u64,
    seed: u64,
) -> Option<Counterexample> {
    assert!(dim >= 1, "vector domain must have at least one coordinate");
    assert!(budget >= 1, "budget must be at least 1");
    assert!(r_small > 0.0 && r_small < r_large, "radii must satisfy 0 < r < R");
    assert!(eps_claimed > 0.0, "claimed epsilon must be positive");

    let norm_of = |v: &[f64]| -> f64 { qnorm(v) };
    let scale_to = |v: &[f64], target: f64| -> Option<Vec<f64>> {
        let n = norm_of(v);
        if !(n > 0.0 && n.is_finite()) {
            return None;
        }
        Some(v.iter().map(|x| x * (target / n)).collect())
    };

    for trial in 0..budget {
        let mut rng = SplitMix64::stream(seed, trial);
        let structured = rng.next_f64() < 0.7;

        // candidate g with |g| >= R
        let mut dir = alloc::vec![0.0f64; dim];
        if rng.next_f64() < 0.5 {
            let j = rng.below(dim);
            dir[j] = if rng.next_f64() < 0.5 { 1.0 } else { -1.0 };
        } else {
            for x in dir.iter_mut() {
                *x = rng.uniform(-1.0, 1.0);
            }
        }
        let mut g = match scale_to(&dir, r_large * (1.0 + 1e-12)) {
            Some(v) => v,
            None => continue,
        };
        for _ in 0..4 {
            if norm_of(&g) >= r_large {
                break;
            }
            for x in g.iter_mut() {
                *x *= 1.0 + 1e-9;
            }
        }
        let norm_g = norm_of(&g);
        if norm_g < r_large {
            continue;
        }

        let f = if structured {
            // f = -g + delta v aims the sum at a small perturbation
            let mut v = alloc::vec![0.0f64; dim];
            if rng.next_f64() < 0.75 {
                let j = rng.below(dim);
                v[j] = if rng.next_f64() < 0.5 { 1.0 } else { -1.0 };
            } else {
                for x in v.iter_mut() {
                    *x = rng.uniform(-1.0, 1.0);
                }
            }
            let nv = norm_of(&v);
            if !(nv > 0.0 && nv.is_finite()) {
                continue;
            }
            let frac = match trial % 4 {
                0 => 0.9,
                1 => 0.5,
                2 => 0.1,
                _ => rng.uniform(0.01, 0.9),
            };
            let delta = eps_claimed * frac / nv;
            g.iter().zip(&v).map(|(gi, vi)| -gi + delta * vi).collect::<Vec<f64>>()
        } else {
            let mut v = alloc::vec![0.0f64; dim];
            for x in v.iter_mut() {
                *x = rng.uniform(-1.0, 1.0);
            }
            match scale_to(&v, r_small * rng.next_f64()) {
                Some(v) => v,
                None => continue,
            }
        };

        let norm_f = norm_of(&f);
        if !(norm_f <= r_small) {
            continue;
        }
        let sum: Vec<f64> = f.iter().zip(&g).map(|(a, b)| a + b).collect();
        let norm_sum = norm_of(&sum);
        if norm_sum < eps_claimed {
            return Some(Counterexample {
                f,
                g,
                norm_f,
                norm_g,
                norm_sum,
                trial,
            });
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::rel_err;
    use crate::quad::QuadratureConfig;
    use crate::weights::Weight;

    #[test]
    fn theta_constant_weight() {
        let w = Weight::constant_one(1.0, 1.0).unwrap();
        for &l in &[0.1, 0.5, 0.9] {
            assert!(rel_err(theta(&w, l).unwrap(), 1.0 / l) < 1e-14);
        }
    }

    #[test]
    fn theta_closed_forms_against_numeric() {
        let cases = [
            (2.0, 2.0, 0.0),
            (2.0, 2.0, 1.5),
            (f64::INFINITY, 2.0, -1.0),
            (3.0, 1.5, -0.7),
            (0.8, 2.5, 0.3),
        ];
        for &(p, q, alpha) in &cases {
            let w = Weight::power_log(p, q, alpha, 1.7).unwrap();
            for &l in &[0.15, 0.5, 0.85] {
                let closed = theta(&w, l).unwrap();
                let numeric = theta_numeric(&w, l).unwrap();
                assert!(
                    rel_err(closed, numeric) < 1e-8,
                    "p={p} q={q} alpha={alpha} lambda={l}: closed={closed} numeric={numeric}"
                );
            }
        }
    }

    #[test]
    fn theta_approaches_one_for_negative_alpha() {
        let w = Weight::power_log(f64::INFINITY, 2.0, -1.0, 1.0).unwrap();
        let mut prev = f64::INFINITY;
        for k in 1..=6 {
            let l = 1.0 - math::powf(10.0, -(k as f64));
            let t = theta(&w, l).unwrap();
            assert!(t < prev, "monotone approach");
            prev = t;
        }
        assert!((prev - 1.0).abs() < 1e-3);
    }

    #[test]
    fn theta_tabulated_flat_is_exact() {
        let w = Weight::tabulated(&[0.01, 0.1, 1.0], &[1.0, 1.0, 1.0], 1.0).unwrap();
        for &l in &[0.2, 0.5, 0.77] {
            assert!(rel_err(theta(&w, l).unwrap(), 1.0 / l) < 1e-14);
        }
    }

    #[test]
    fn theta_tabulated_with_kinks_matches_grid_sup() {
        // a weight with genuine log-log kinks: the exact kink evaluation and
        // the generic grid supremum must land on the same value
        let grid = [0.001, 0.02, 0.3, 1.0];
        let vals = [5.0, 0.4, 1.3, 0.9];
        let w = Weight::tabulated(&grid, &vals, 1.0).unwrap();
        for &l in &[0.15, 0.5, 0.85] {
            let exact = theta(&w, l).unwrap();
            let numeric = theta_numeric(&w, l).unwrap();
            assert!(
                rel_err(exact, numeric) < 1e-8,
                "lambda {l}: exact {exact} vs numeric {numeric}"
            );
            assert!(numeric <= exact * (1.0 + 1e-12), "grid sup cannot exceed the exact sup");
        }
    }

    #[test]
    fn theta_tabulated_power_matches_powerlog() {
        // w(t) = t^0.3 sampled exactly: log-log linear, so the tabulated
        // representation is the same function as PowerLog p = 1, q = 1.3
        let grid = [1e-6, 1e-3, 0.1, 1.0];
        let vals: Vec<f64> = grid.iter().map(|&t| math::powf(t, 0.3)).collect();
        let tab = Weight::tabulated(&grid, &vals, 1.0).unwrap();
        let pl = Weight::power_log(1.0, 1.3, 0.0, 1.0).unwrap();
        for &l in &[0.1, 0.4, 0.9] {
            assert!(rel_err(theta(&tab, l).unwrap(), theta(&pl, l).unwrap()) < 1e-12);
        }
    }

    #[test]
    fn certificate_l2_matches_brute_force() {
        // L^{2,2}: eps(l) = sqrt(l) (2 - (1-l)^(-1/2))
        let params = LambdaParams::lorentz_zygmund(2.0, 2.0, 0.0, 1.0).unwrap();
        let cert = separation_certificate(&params, 1.0, 2.0).unwrap();
        let mut oracle = f64::NEG_INFINITY;
        for k in 1..100_000 {
            let l = k as f64 / 100_000.0;
            let e = math::sqrt(l) * (2.0 - math::powf(1.0 - l, -0.5));
            oracle = libm::fmax(oracle, e);
        }
        assert!(cert.epsilon > 0.0);
        assert!(cert.epsilon >= oracle - 1e-9, "search beats the coarse grid");
        assert!(rel_err(cert.epsilon, oracle) < 1e-6);
    }

    #[test]
    fn certificate_epsilon_bounded_by_r_large() {
        let params = LambdaParams::lorentz_zygmund(f64::INFINITY, 2.0, -1.0, 1.0).unwrap();
        let cert = separation_certificate(&params, 0.01, 2.0).unwrap();
        assert!(cert.epsilon > 0.0 && cert.epsilon <= 2.0 + 1e-12);
        // r -> 0: eps(lambda) -> Theta(lambda)^(-1/q) R, which climbs to R as
        // lambda -> 1 for negative alpha
        let tiny = separation_certificate(&params, 1e-9, 2.0).unwrap();
        assert!(tiny.epsilon > 1.9 && tiny.epsilon <= 2.0 + 1e-12, "eps = {}", tiny.epsilon);
    }

    #[test]
    fn hypothesis_unverified_for_steep_weight() {
        // q/p = 200 pushes Theta(lambda) = lambda^(-200) above 1 + 1e-6 on
        // the whole verification grid, so the certificate refuses to claim
        // the separation hypothesis
        let params = LambdaParams::lorentz_zygmund(0.01, 2.0, 0.0, 1.0).unwrap();
        assert!(matches!(
            separation_certificate(&params, 1.0, 2.0),
            Err(SeparationError::HypothesisUnverified { .. })
        ));
    }

    #[test]
    fn certificate_l1_matches_brute_force() {
        // w = 1, q = 1: Theta(l) = 1/l, so eps(l) = l (2 - 1/(1-l));
        // the dilation route is a valid but conservative bound for the norm
        let params = LambdaParams::new(1.0, Weight::constant_one(1.0, 1.0).unwrap()).unwrap();
        let cert = separation_certificate(&params, 1.0, 2.0).unwrap();
        let mut oracle = f64::NEG_INFINITY;
        for k in 1..100_000 {
            let l = k as f64 / 100_000.0;
            oracle = libm::fmax(oracle, l * (2.0 - 1.0 / (1.0 - l)));
        }
        assert!(cert.epsilon > 0.0);
        assert!(cert.epsilon >= oracle - 1e-9);
        assert!(rel_err(cert.epsilon, oracle) < 1e-6, "eps = {}", cert.epsilon);
    }

    #[test]
    fn certificate_monotone_in_radii() {
        let params = LambdaParams::lorentz_zygmund(f64::INFINITY, 2.0, -1.0, 1.0).unwrap();
        let mut prev = 0.0;
        for &big_r in &[1.5, 2.0, 2.5, 3.0] {
            let cert = separation_certificate(&params, 1.0, big_r).unwrap();
            assert!(cert.epsilon >= prev - 1e-12, "nondecreasing in R");
            prev = cert.epsilon;
        }
        let mut prev = f64::INFINITY;
        for &r in &[0.25, 0.5, 0.75, 1.0] {
            let cert = separation_certificate(&params, r, 2.0).unwrap();
            assert!(cert.epsilon <= prev + 1e-12, "nonincreasing in r");
            prev = cert.epsilon;
        }
    }

    #[test]
    fn alpha_norm_examples() {
        assert!((alpha_norm_epsilon(1.0, 1.5, 2.0).unwrap() - 0.5).abs() < 1e-15);
        assert!((alpha_norm_epsilon(0.5, 1.0, 4.0).unwrap() - 1.0).abs() < 1e-12);
        assert!((alpha_norm_epsilon(0.5, 1.0, 1.21).unwrap() - 0.01).abs() < 1e-12);
        assert!(alpha_norm_epsilon(1.5, 1.0, 2.0).is_err());
    }

    #[test]
    fn plane_qnorm_exact_values() {
        assert_eq!(plane_counterexample_qnorm(1.0, 0.0), 2.0);
        let delta = 0.3;
        assert_eq!(plane_counterexample_qnorm(-1.0, delta), 1.0 + delta);
        assert_eq!(plane_counterexample_qnorm(0.0, delta), delta);
    }

    #[test]
    fn falsifier_defeats_plane_qnorm() {
        let q = |v: &[f64]| plane_counterexample_qnorm(v[0], v[1]);
        let found = falsify_uniform_separation(&q, 2, 1.5, 2.0, 0.1, 1000, 7).expect("counterexample");
        assert!(found.norm_g >= 2.0);
        assert!(found.norm_f <= 1.5);
        assert!(found.norm_sum < 0.1);
    }

    #[test]
    fn falsifier_respects_triangle_inequality() {
        let q = |v: &[f64]| math::sqrt(v.iter().map(|x| x * x).sum());
        assert!(falsify_uniform_separation(&q, 2, 1.0, 2.0, 0.5, 5000, 3).is_none());
    }

    #[test]
    fn falsifier_is_deterministic() {
        let q = |v: &[f64]| plane_counterexample_qnorm(v[0], v[1]);
        let a = falsify_uniform_separation(&q, 2, 1.5, 2.0, 0.05, 1000, 11);
        let b = falsify_uniform_separation(&q, 2, 1.5, 2.0, 0.05, 1000, 11);
        assert_eq!(a, b);
    }

    #[test]
    fn invalid_radii_rejected() {
        let grid = [0.01, 0.1, 1.0];
        let vals: Vec<f64> = grid.iter().map(|&t| math::powf(t, 3.0)).collect();
        let params = LambdaParams::new(2.0, Weight::tabulated(&grid, &vals, 1.0).unwrap()).unwrap();
        assert!(matches!(
            separation_certificate(&params, 2.0, 1.0),
            Err(SeparationError::InvalidRadii { .. })
        ));
        assert!(matches!(
            separation_certificate(&params, -1.0, 1.0),
            Err(SeparationError::InvalidRadii { .. })
        ));
    }

    #[test]
    fn theta_rejects_bad_lambda() {
        let w = Weight::constant_one(1.0, 1.0).unwrap();
        assert!(theta(&w, 0.0).is_err());
        assert!(theta(&w, 1.0).is_err());
        assert!(theta_numeric(&w, 1.5).is_err());
    }

    #[test]
    fn quadrature_config_not_needed_for_theta() {
        // Theta never integrates; make sure the weights module agrees by
        // evaluating a quasinorm with the same weight afterwards.
        let w = Weight::power_log(f64::INFINITY, 2.0, -1.0, 1.0).unwrap();
        let t = theta(&w, 0.5).unwrap();
        assert!(t.is_finite() && t > 1.0);
        let params = LambdaParams::new(2.0, w).unwrap();
        let profile = crate::rearrangement::StepProfile::characteristic(1.0, 0.5, 1.0).unwrap();
        let n = crate::weights::lambda_quasinorm(&profile, &params, &QuadratureConfig::default()).unwrap();
        assert!(n.value.is_finite());
    }
}
