//! Adaptive Simpson quadrature.
//!
//! The integrands in this crate are smooth away from the measure-space
//! origin; callers remove the origin singularity with the substitution
//! `t = 2M exp(-u)` before handing the integrand over, so the engine itself
//! only ever sees smooth functions on finite intervals. Interval acceptance
//! uses the classical Richardson estimate `|S2 - S1| / 15` with the budget
//! halved on each split.

use alloc::vec::Vec;

/// Equality tolerance for real comparisons in otherwise-exact operations.
pub const TOL_EQ: f64 = 1e-12;

/// Tolerances and depth limit for adaptive quadrature.
#[derive(Debug, Clone, Copy)]
pub struct QuadratureConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_depth: u32,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 1e-14,
            max_depth: 60,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<(), &'static str> {
        if !(self.rel_tol > 0.0 && self.rel_tol.is_finite()) {
            return Err("rel_tol must be positive and finite");
        }
        if !(self.abs_tol > 0.0 && self.abs_tol.is_finite()) {
            return Err("abs_tol must be positive and finite");
        }
        if self.max_depth == 0 {
            return Err("max_depth must be at least 1");
        }
        Ok(())
    }
}

/// Value, error estimate, and convergence flag of one integral.
#[derive(Debug, Clone, Copy)]
pub struct QuadResult {
    pub value: f64,
    pub abs_err: f64,
    pub converged: bool,
}

impl QuadResult {
    pub fn zero() -> Self {
        Self {
            value: 0.0,
            abs_err: 0.0,
            converged: true,
        }
    }

    fn merge(self, other: Self) -> Self {
        Self {
            value: self.value + other.value,
            abs_err: self.abs_err + other.abs_err,
            converged: self.converged && other.converged,
        }
    }
}

// Hard cap on integrand evaluations per call; hitting it flags the result as
// non-converged instead of hanging on an unreachable tolerance.
const MAX_EVALS: usize = 2_000_000;

struct Interval {
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
}

#[inline]
fn simpson(fa: f64, fm: f64, fb: f64, h: f64) -> f64 {
    h / 6.0 * (fa + 4.0 * fm + fb)
}

/// Integrate `f` over `[a, b]`.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, cfg: &QuadratureConfig) -> QuadResult {
    if a == b {
        return QuadResult::zero();
    }
    debug_assert!(a < b);
    let mut evals = 0usize;
    let eval = |x: f64, n: &mut usize| {
        *n += 1;
        f(x)
    };

    // Coarse magnitude scan sets the floor for the relative tolerance.
    let mut mag = 0.0f64;
    for k in 0..=8 {
        let x = a + (b - a) * k as f64 / 8.0;
        let v = eval(x, &mut evals);
        if v.is_finite() {
            mag = mag.max(libm::fabs(v));
        }
    }
    let tol0 = libm::fmax(cfg.abs_tol, cfg.rel_tol * mag * (b - a));

    let fa = eval(a, &mut evals);
    let fb = eval(b, &mut evals);
    let m = 0.5 * (a + b);
    let fm = eval(m, &mut evals);
    let mut stack = Vec::with_capacity(64);
    stack.push(Interval {
        a,
        b,
        fa,
        fm,
        fb,
        whole: simpson(fa, fm, fb, b - a),
        tol: tol0,
        depth: 0,
    });

    let mut out = QuadResult::zero();
    while let Some(iv) = stack.pop() {
        let m = 0.5 * (iv.a + iv.b);
        let lm = 0.5 * (iv.a + m);
        let rm = 0.5 * (m + iv.b);
        let flm = eval(lm, &mut evals);
        let frm = eval(rm, &mut evals);
        let h = m - iv.a;
        let left = simpson(iv.fa, flm, iv.fm, h);
        let right = simpson(iv.fm, frm, iv.fb, iv.b - m);
        let delta = left + right - iv.whole;

        let budget_hit = evals > MAX_EVALS;
        if libm::fabs(delta) <= 15.0 * iv.tol || iv.depth >= cfg.max_depth || budget_hit || !delta.is_finite() {
            let accepted = libm::fabs(delta) <= 15.0 * iv.tol && delta.is_finite();
            out = out.merge(QuadResult {
                value: left + right + delta / 15.0,
                abs_err: libm::fabs(delta) / 15.0,
                converged: accepted,
            });
            continue;
        }
        let half_tol = 0.5 * iv.tol;
        stack.push(Interval {
            a: iv.a,
            b: m,
            fa: iv.fa,
            fm: flm,
            fb: iv.fm,
            whole: left,
            tol: half_tol,
            depth: iv.depth + 1,
        });
        stack.push(Interval {
            a: m,
            b: iv.b,
            fa: iv.fm,
            fm: frm,
            fb: iv.fb,
            whole: right,
            tol: half_tol,
            depth: iv.depth + 1,
        });
    }
    out
}

/// Integrate `f` over consecutive segments `[pts[0], pts[1]], ...`, splitting
/// at the interior points (kinks of a piecewise-defined integrand).
pub fn adaptive_simpson_segments<F: Fn(f64) -> f64>(
    f: &F,
    pts: &[f64],
    cfg: &QuadratureConfig,
) -> QuadResult {
    let mut out = QuadResult::zero();
    for w in pts.windows(2) {
        if w[1] > w[0] {
            out = out.merge(adaptive_simpson(f, w[0], w[1], cfg));
        }
    }
    out
}

/// Cutoff point for an integrand decaying at exponential `rate` beyond
/// `start`: the first point where the remaining tail is below `tail_tol`.
pub fn decay_cutoff<F: Fn(f64) -> f64>(f: &F, start: f64, initial_span: f64, rate: f64, tail_tol: f64) -> f64 {
    debug_assert!(rate > 0.0 && initial_span > 0.0);
    let mut span = initial_span;
    for _ in 0..80 {
        let b = start + span;
        let tail = libm::fabs(f(b)) / rate;
        if tail <= tail_tol || !tail.is_finite() {
            return b;
        }
        span *= 2.0;
    }
    start + span
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math;

    #[test]
    fn polynomial_is_exact() {
        let cfg = QuadratureConfig::default();
        let r = adaptive_simpson(&|x: f64| x * x * x - 2.0 * x, 0.0, 2.0, &cfg);
        assert!(r.converged);
        assert!((r.value - 0.0).abs() < 1e-13, "got {}", r.value);
    }

    #[test]
    fn smooth_exponential() {
        let cfg = QuadratureConfig::default();
        let r = adaptive_simpson(&|x: f64| math::exp(-x), 0.0, 30.0, &cfg);
        let exact = 1.0 - math::exp(-30.0);
        assert!(r.converged);
        assert!(math::rel_err(r.value, exact) < 1e-10);
    }

    #[test]
    fn segments_handle_kinks() {
        let cfg = QuadratureConfig::default();
        let f = |x: f64| if x < 1.0 { x } else { 2.0 - x };
        let r = adaptive_simpson_segments(&f, &[0.0, 1.0, 2.0], &cfg);
        assert!(r.converged);
        assert!((r.value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn unreachable_tolerance_reports_nonconvergence() {
        let cfg = QuadratureConfig {
            rel_tol: 1e-30,
            abs_tol: 1e-300,
            max_depth: 60,
        };
        let r = adaptive_simpson(&|x: f64| math::exp(-x * x) * math::ln(2.0 + x), 0.0, 3.0, &cfg);
        assert!(!r.converged);
        assert!(r.value.is_finite());
    }

    #[test]
    fn cutoff_reaches_negligible_tail() {
        let f = |x: f64| math::exp(-0.5 * x);
        let b = decay_cutoff(&f, 0.0, 1.0, 0.5, 1e-16);
        assert!(f(b) / 0.5 <= 1e-16);
    }
}
