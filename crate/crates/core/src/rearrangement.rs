//! Simple functions, distribution functions, and nonincreasing
//! rearrangements, all exact.
//!
//! A [`SimpleFunction`] is `|f|` on a nonatomic space of total mass `M`,
//! given as finitely many `(value, mass)` pieces. Construction canonicalizes:
//! pieces are sorted by descending value, equal values are merged, and
//! zero-value pieces are dropped (their mass stays accounted for in `M`).
//! Because every derived quantity then walks the same canonical list, the
//! rearrangement, the distribution function, and the definition-based point
//! oracle agree bit for bit, not merely up to rounding.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::quad::TOL_EQ;

#[derive(Debug, Clone, PartialEq)]
pub enum RearrangementError {
    /// A piece has a nonpositive mass, negative value, or non-finite entry.
    InvalidPiece { index: usize, detail: String },
    /// Piece masses add up to more than the total mass of the space.
    MassOverflow { piece_sum: f64, total_mass: f64 },
    /// Total mass must be positive and finite.
    InvalidTotalMass(f64),
    /// The distribution function is only defined for positive thresholds.
    NonPositiveThreshold(f64),
    /// Rearrangement evaluation points must be positive.
    NonPositivePoint(f64),
    /// Step profile data violates its invariants.
    InvalidProfile(String),
    /// Profiles passed to `disjoint_sum` live on different spaces.
    MismatchedDomains { left: f64, right: f64 },
    /// Supports of a would-be disjoint family exceed the space.
    SupportOverflow { support_sum: f64, total_mass: f64 },
    /// A common refinement cell is invalid.
    InvalidCell { index: usize, detail: String },
}

impl fmt::Display for RearrangementError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::InvalidPiece { index, detail } => write!(f, "piece {index}: {detail}"),
            Self::MassOverflow { piece_sum, total_mass } => {
                write!(f, "piece masses {piece_sum} exceed total mass {total_mass}")
            }
            Self::InvalidTotalMass(m) => write!(f, "total mass {m} must be positive and finite"),
            Self::NonPositiveThreshold(l) => write!(f, "threshold {l} must be positive"),
            Self::NonPositivePoint(t) => write!(f, "evaluation point {t} must be positive"),
            Self::InvalidProfile(d) => write!(f, "invalid step profile: {d}"),
            Self::MismatchedDomains { left, right } => {
                write!(f, "profiles live on spaces of mass {left} and {right}")
            }
            Self::SupportOverflow { support_sum, total_mass } => {
                write!(f, "supports of mass {support_sum} cannot be disjoint in mass {total_mass}")
            }
            Self::InvalidCell { index, detail } => write!(f, "refinement cell {index}: {detail}"),
        }
    }
}

impl core::error::Error for RearrangementError {}

/// A nonnegative simple function on a nonatomic space of total mass `M`.
#[derive(Debug, Clone, PartialEq)]
pub struct SimpleFunction {
    // canonical: values strictly decreasing, all positive, masses positive
    pieces: Vec<(f64, f64)>,
    total_mass: f64,
}

impl SimpleFunction {
    /// Builds a simple function from `(value, mass)` pieces.
    ///
    /// The sum of masses may be smaller than `total_mass`; the remainder is
    /// where the function vanishes.
    pub fn new(pieces: &[(f64, f64)], total_mass: f64) -> Result<Self, RearrangementError> {
        if !(total_mass > 0.0 && total_mass.is_finite()) {
            return Err(RearrangementError::InvalidTotalMass(total_mass));
        }
        let mut sum = 0.0;
        for (i, &(value, mass)) in pieces.iter().enumerate() {
            if !value.is_finite() || value < 0.0 {
                return Err(RearrangementError::InvalidPiece {
                    index: i,
                    detail: alloc::format!("value {value} must be finite and nonnegative"),
                });
            }
            if !(mass > 0.0 && mass.is_finite()) {
                return Err(RearrangementError::InvalidPiece {
                    index: i,
                    detail: alloc::format!("mass {mass} must be positive and finite"),
                });
            }
            sum += mass;
        }
        if sum > total_mass * (1.0 + TOL_EQ) {
            return Err(RearrangementError::MassOverflow {
                piece_sum: sum,
                total_mass,
            });
        }
        // canonical form: sort by (value desc, mass asc), merge equal values,
        // drop zero values
        let mut sorted: Vec<(f64, f64)> = pieces.iter().copied().filter(|&(v, _)| v > 0.0).collect();
        sorted.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.total_cmp(&b.1)));
        let mut canonical: Vec<(f64, f64)> = Vec::with_capacity(sorted.len());
        for (value, mass) in sorted {
            match canonical.last_mut() {
                Some(last) if last.0 == value => last.1 += mass,
                _ => canonical.push((value, mass)),
            }
        }
        Ok(Self {
            pieces: canonical,
            total_mass,
        })
    }

    /// Canonical pieces: values strictly decreasing, all positive.
    pub fn pieces(&self) -> &[(f64, f64)] {
        &self.pieces
    }

    pub fn total_mass(&self) -> f64 {
        self.total_mass
    }

    /// Mass of the support (where the function is positive).
    pub fn support_mass(&self) -> f64 {
        self.pieces.iter().map(|&(_, m)| m).sum()
    }

    /// The function multiplied by `c > 0`.
    pub fn scale(&self, c: f64) -> Self {
        Self {
            pieces: self.pieces.iter().map(|&(v, m)| (c * v, m)).collect(),
            total_mass: self.total_mass,
        }
    }
}

/// Distribution function: mass of the superlevel set `{|f| > lambda}`.
pub fn distribution_function(f: &SimpleFunction, lambda: f64) -> Result<f64, RearrangementError> {
    if !(lambda > 0.0) {
        return Err(RearrangementError::NonPositiveThreshold(lambda));
    }
    let mut acc = 0.0;
    for &(value, mass) in f.pieces() {
        if value > lambda {
            acc += mass;
        } else {
            break; // canonical order is decreasing
        }
    }
    Ok(acc)
}

/// A nonincreasing right-continuous step function on `(0, M)`.
///
/// Piece `i` carries `values[i]` on the mass interval of length `masses[i]`
/// starting at `breakpoints[i-1]`; the function vanishes past the last
/// breakpoint. Evaluation is right-continuous, which is the convention under
/// which the rearrangement agrees with its definition as a generalized
/// inverse at every point, breakpoints included.
#[derive(Debug, Clone, PartialEq)]
pub struct StepProfile {
    values: Vec<f64>,
    masses: Vec<f64>,
    breakpoints: Vec<f64>,
    total_mass: f64,
}

impl StepProfile {
    /// Builds a profile from per-piece `(value, mass)` data, already ordered
    /// with nonincreasing values.
    pub fn from_pieces(pieces: &[(f64, f64)], total_mass: f64) -> Result<Self, RearrangementError> {
        if !(total_mass > 0.0 && total_mass.is_finite()) {
            return Err(RearrangementError::InvalidTotalMass(total_mass));
        }
        let mut values = Vec::with_capacity(pieces.len());
        let mut masses = Vec::with_capacity(pieces.len());
        let mut breakpoints = Vec::with_capacity(pieces.len());
        let mut acc = 0.0;
        let mut prev = f64::INFINITY;
        for (i, &(value, mass)) in pieces.iter().enumerate() {
            if !(value.is_finite() && value > 0.0) {
                return Err(RearrangementError::InvalidProfile(alloc::format!(
                    "piece {i}: value {value} must be finite and positive"
                )));
            }
            if value > prev {
                return Err(RearrangementError::InvalidProfile(alloc::format!(
                    "piece {i}: values must be nonincreasing"
                )));
            }
            if !(mass > 0.0 && mass.is_finite()) {
                return Err(RearrangementError::InvalidProfile(alloc::format!(
                    "piece {i}: mass {mass} must be positive and finite"
                )));
            }
            acc += mass;
            values.push(value);
            masses.push(mass);
            breakpoints.push(acc);
            prev = value;
        }
        if acc > total_mass * (1.0 + TOL_EQ) {
            return Err(RearrangementError::MassOverflow {
                piece_sum: acc,
                total_mass,
            });
        }
        Ok(Self {
            values,
            masses,
            breakpoints,
            total_mass,
        })
    }

    /// Builds a profile from the serialized form: strictly increasing
    /// breakpoints and the matching nonincreasing values.
    pub fn from_breakpoints(
        breakpoints: &[f64],
        values: &[f64],
        total_mass: f64,
    ) -> Result<Self, RearrangementError> {
        if breakpoints.len() != values.len() {
            return Err(RearrangementError::InvalidProfile(String::from(
                "breakpoints and values must have equal length",
            )));
        }
        let mut pieces = Vec::with_capacity(values.len());
        let mut prev = 0.0;
        for (i, (&b, &v)) in breakpoints.iter().zip(values).enumerate() {
            if !(b > prev) {
                return Err(RearrangementError::InvalidProfile(alloc::format!(
                    "breakpoint {i} = {b} must exceed its predecessor {prev}"
                )));
            }
            pieces.push((v, b - prev));
            prev = b;
        }
        Self::from_pieces(&pieces, total_mass)
    }

    /// The empty (zero) profile.
    pub fn zero(total_mass: f64) -> Result<Self, RearrangementError> {
        if !(total_mass > 0.0 && total_mass.is_finite()) {
            return Err(RearrangementError::InvalidTotalMass(total_mass));
        }
        Ok(Self {
            values: Vec::new(),
            masses: Vec::new(),
            breakpoints: Vec::new(),
            total_mass,
        })
    }

    /// Characteristic profile: `value` on `(0, mass)`.
    pub fn characteristic(value: f64, mass: f64, total_mass: f64) -> Result<Self, RearrangementError> {
        Self::from_pieces(&[(value, mass)], total_mass)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn total_mass(&self) -> f64 {
        self.total_mass
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    /// Measure of the support.
    pub fn support_mass(&self) -> f64 {
        self.breakpoints.last().copied().unwrap_or(0.0)
    }

    /// Right-continuous evaluation at `t > 0` (also defined at `t = 0`).
    pub fn value_at(&self, t: f64) -> f64 {
        for (i, &b) in self.breakpoints.iter().enumerate() {
            if t < b {
                return self.values[i];
            }
        }
        0.0
    }

    /// Distribution function of the profile at `lambda > 0`.
    pub fn distribution(&self, lambda: f64) -> f64 {
        let mut acc = 0.0;
        for (i, &v) in self.values.iter().enumerate() {
            if v > lambda {
                acc = self.breakpoints[i];
            } else {
                break;
            }
        }
        acc
    }

    /// The profile multiplied by `c > 0`.
    pub fn scale(&self, c: f64) -> Self {
        Self {
            values: self.values.iter().map(|v| c * v).collect(),
            masses: self.masses.clone(),
            breakpoints: self.breakpoints.clone(),
            total_mass: self.total_mass,
        }
    }

    /// Pieces as `(value, mass)` pairs in profile order.
    pub fn pieces(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.values.iter().copied().zip(self.masses.iter().copied())
    }
}

/// Nonincreasing rearrangement of a simple function, by sorting pieces by
/// value and accumulating masses.
pub fn rearrangement(f: &SimpleFunction) -> StepProfile {
    let mut values = Vec::with_capacity(f.pieces().len());
    let mut masses = Vec::with_capacity(f.pieces().len());
    let mut breakpoints = Vec::with_capacity(f.pieces().len());
    let mut acc = 0.0;
    for &(value, mass) in f.pieces() {
        acc += mass;
        values.push(value);
        masses.push(mass);
        breakpoints.push(acc);
    }
    StepProfile {
        values,
        masses,
        breakpoints,
        total_mass: f.total_mass(),
    }
}

/// Definition-based oracle: `inf { lambda > 0 : f_*(lambda) <= t }`, computed
/// by a direct scan over the distinct values of `f`.
pub fn rearrangement_point_oracle(f: &SimpleFunction, t: f64) -> Result<f64, RearrangementError> {
    if !(t > 0.0) {
        return Err(RearrangementError::NonPositivePoint(t));
    }
    // Candidate thresholds are the distinct values v_1 > v_2 > ... of f;
    // f_* is constant between them, with f_*(v_j) = c_{j-1} (the mass of all
    // strictly larger pieces). The infimum equals v_{j+1} for the largest j
    // with c_j <= t, and 0 when the whole support mass fits below t.
    let pieces = f.pieces();
    if pieces.is_empty() {
        return Ok(0.0);
    }
    let mut acc = 0.0;
    let mut ans = pieces[0].0;
    for (i, &(_, mass)) in pieces.iter().enumerate() {
        acc += mass;
        if acc <= t {
            ans = if i + 1 < pieces.len() { pieces[i + 1].0 } else { 0.0 };
        } else {
            break;
        }
    }
    Ok(ans)
}

/// Step map `lambda -> f_*(lambda)` of a simple function or profile.
#[derive(Debug, Clone, PartialEq)]
pub struct DistributionFunction {
    // thresholds strictly decreasing; cum[i] = mass of { f > t } for
    // t just below thresholds[i]
    thresholds: Vec<f64>,
    cum: Vec<f64>,
}

impl DistributionFunction {
    pub fn of_simple(f: &SimpleFunction) -> Self {
        let mut thresholds = Vec::with_capacity(f.pieces().len());
        let mut cum = Vec::with_capacity(f.pieces().len());
        let mut acc = 0.0;
        for &(value, mass) in f.pieces() {
            acc += mass;
            thresholds.push(value);
            cum.push(acc);
        }
        Self { thresholds, cum }
    }

    pub fn of_profile(p: &StepProfile) -> Self {
        let mut thresholds: Vec<f64> = Vec::new();
        let mut cum: Vec<f64> = Vec::new();
        for (i, &v) in p.values().iter().enumerate() {
            let b = p.breakpoints()[i];
            match thresholds.last() {
                Some(&last) if last == v => {
                    *cum.last_mut().expect("cum tracks thresholds") = b;
                }
                _ => {
                    thresholds.push(v);
                    cum.push(b);
                }
            }
        }
        Self { thresholds, cum }
    }

    /// Evaluate at `lambda > 0`.
    pub fn eval(&self, lambda: f64) -> f64 {
        let mut acc = 0.0;
        for (i, &v) in self.thresholds.iter().enumerate() {
            if v > lambda {
                acc = self.cum[i];
            } else {
                break;
            }
        }
        acc
    }

    /// Threshold/mass pairs, thresholds strictly decreasing.
    pub fn steps(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.thresholds.iter().copied().zip(self.cum.iter().copied())
    }
}

/// Rearrangement of a disjointly supported sum of profiles.
///
/// Pieces of the summands are pooled and re-sorted; equal values are kept as
/// separate pieces so the operation is exactly commutative and associative.
/// The distribution function of the result is the pointwise sum of the
/// inputs' distribution functions.
pub fn disjoint_sum(profiles: &[StepProfile]) -> Result<StepProfile, RearrangementError> {
    let total_mass = match profiles.first() {
        Some(p) => p.total_mass(),
        None => {
            return Err(RearrangementError::InvalidProfile(String::from(
                "disjoint_sum needs at least one profile",
            )))
        }
    };
    let mut support = 0.0;
    let mut pieces: Vec<(f64, f64)> = Vec::new();
    for p in profiles {
        if p.total_mass() != total_mass {
            return Err(RearrangementError::MismatchedDomains {
                left: total_mass,
                right: p.total_mass(),
            });
        }
        support += p.support_mass();
        pieces.extend(p.pieces());
    }
    if support > total_mass * (1.0 + TOL_EQ) {
        return Err(RearrangementError::SupportOverflow {
            support_sum: support,
            total_mass,
        });
    }
    pieces.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.total_cmp(&b.1)));
    let mut values = Vec::with_capacity(pieces.len());
    let mut masses = Vec::with_capacity(pieces.len());
    let mut breakpoints = Vec::with_capacity(pieces.len());
    let mut acc = 0.0;
    for (value, mass) in pieces {
        acc += mass;
        values.push(value);
        masses.push(mass);
        breakpoints.push(acc);
    }
    Ok(StepProfile {
        values,
        masses,
        breakpoints,
        total_mass,
    })
}

/// Common refinement of two simple functions: cells carrying an `f`-value
/// and a `g`-value each, so the pointwise sum is well defined.
///
/// A nonatomic space has no canonical overlap structure, so whoever forms
/// `f + g` must say how the pieces overlay; this type is that statement.
#[derive(Debug, Clone, PartialEq)]
pub struct CommonRefinement {
    cells: Vec<(f64, f64, f64)>, // (f value, g value, mass)
    total_mass: f64,
}

impl CommonRefinement {
    pub fn new(cells: &[(f64, f64, f64)], total_mass: f64) -> Result<Self, RearrangementError> {
        if !(total_mass > 0.0 && total_mass.is_finite()) {
            return Err(RearrangementError::InvalidTotalMass(total_mass));
        }
        let mut sum = 0.0;
        for (i, &(fv, gv, mass)) in cells.iter().enumerate() {
            if !(fv.is_finite() && fv >= 0.0 && gv.is_finite() && gv >= 0.0) {
                return Err(RearrangementError::InvalidCell {
                    index: i,
                    detail: alloc::format!("values ({fv}, {gv}) must be finite and nonnegative"),
                });
            }
            if !(mass > 0.0 && mass.is_finite()) {
                return Err(RearrangementError::InvalidCell {
                    index: i,
                    detail: alloc::format!("mass {mass} must be positive and finite"),
                });
            }
            sum += mass;
        }
        if sum > total_mass * (1.0 + TOL_EQ) {
            return Err(RearrangementError::MassOverflow {
                piece_sum: sum,
                total_mass,
            });
        }
        Ok(Self {
            cells: cells.to_vec(),
            total_mass,
        })
    }

    pub fn cells(&self) -> &[(f64, f64, f64)] {
        &self.cells
    }

    pub fn total_mass(&self) -> f64 {
        self.total_mass
    }

    /// The `f` factor as a simple function.
    pub fn left(&self) -> SimpleFunction {
        let pieces: Vec<(f64, f64)> = self.cells.iter().map(|&(fv, _, m)| (fv, m)).collect();
        SimpleFunction::new(&pieces, self.total_mass).expect("cells validated at construction")
    }

    /// The `g` factor as a simple function.
    pub fn right(&self) -> SimpleFunction {
        let pieces: Vec<(f64, f64)> = self.cells.iter().map(|&(_, gv, m)| (gv, m)).collect();
        SimpleFunction::new(&pieces, self.total_mass).expect("cells validated at construction")
    }

    /// The pointwise sum `f + g` as a simple function.
    pub fn sum(&self) -> SimpleFunction {
        let pieces: Vec<(f64, f64)> = self.cells.iter().map(|&(fv, gv, m)| (fv + gv, m)).collect();
        SimpleFunction::new(&pieces, self.total_mass).expect("cells validated at construction")
    }
}

/// Checks the rearrangement subadditivity inequality
/// `(f+g)*(s+t) <= f*(s) + g*(t)` on a declared overlay, with the standard
/// equality tolerance absorbing float roundoff.
pub fn subadditivity_check(
    overlay: &CommonRefinement,
    s: f64,
    t: f64,
) -> Result<bool, RearrangementError> {
    if !(s > 0.0) {
        return Err(RearrangementError::NonPositivePoint(s));
    }
    if !(t > 0.0) {
        return Err(RearrangementError::NonPositivePoint(t));
    }
    let lhs = rearrangement(&overlay.sum()).value_at(s + t);
    let rhs = rearrangement(&overlay.left()).value_at(s) + rearrangement(&overlay.right()).value_at(t);
    Ok(lhs <= rhs + TOL_EQ)
}
