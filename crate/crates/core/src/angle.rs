//! Angles with explicit branch bookkeeping.
//!
//! Every arg/arctan in the phase formulas is realized as a two-argument
//! arctangent of the underlying complex number, never as a real arctan of a
//! tangent ratio; that choice fixes the behavior at branch points (e.g.
//! Γ ∈ {0, π} at r = 0). Principal values live in (−π, π]; unwrapped values
//! live on the real line and are anchored case by case.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{PhaseError, Result};

/// Magnitudes below this make a complex argument meaningless.
pub const ZERO_MAG_THRESHOLD: f64 = 1e-300;

/// Which branch convention an [`Angle`] value uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BranchMode {
    /// Value reduced to the principal interval (−π, π].
    Principal,
    /// Value on the real line (continuous lift; no modular reduction).
    Unwrapped,
}

/// An angle in radians tagged with its branch convention.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Angle {
    value: f64,
    mode: BranchMode,
}

impl Angle {
    /// Wraps `value` into (−π, π] and tags it principal.
    pub fn principal(value: f64) -> Self {
        Angle {
            value: wrap_principal(value),
            mode: BranchMode::Principal,
        }
    }

    /// Tags `value` as an unwrapped (non-modular) angle.
    pub fn unwrapped(value: f64) -> Self {
        Angle {
            value,
            mode: BranchMode::Unwrapped,
        }
    }

    pub fn with_mode(value: f64, mode: BranchMode) -> Self {
        match mode {
            BranchMode::Principal => Angle::principal(value),
            BranchMode::Unwrapped => Angle::unwrapped(value),
        }
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn mode(&self) -> BranchMode {
        self.mode
    }

    /// Reduces to the principal branch (identity on principal angles).
    pub fn to_principal(self) -> Angle {
        Angle::principal(self.value)
    }
}

/// Reduces an angle to (−π, π].
pub fn wrap_principal(x: f64) -> f64 {
    let y = x.rem_euclid(2.0 * PI);
    if y > PI {
        y - 2.0 * PI
    } else {
        y
    }
}

/// Principal argument of `z` in (−π, π].
///
/// Fails with [`PhaseError::ZeroMagnitude`] when |z| is below
/// [`ZERO_MAG_THRESHOLD`]: the phase is undefined there.
pub fn principal_arg(z: Complex64) -> Result<Angle> {
    let magnitude = z.norm();
    if magnitude < ZERO_MAG_THRESHOLD {
        return Err(PhaseError::ZeroMagnitude { magnitude });
    }
    let a = z.im.atan2(z.re);
    // atan2 returns [−π, π]; fold the closed lower end onto +π.
    Ok(Angle {
        value: if a == -PI { PI } else { a },
        mode: BranchMode::Principal,
    })
}

/// Distance between two angles on the circle, in [0, π].
pub fn circle_distance(a: f64, b: f64) -> f64 {
    wrap_principal(a - b).abs()
}

/// Unwraps an ordered sequence of principal-branch samples.
///
/// The first element is returned unchanged; every other element is shifted by
/// an integer multiple of 2π so that adjacent differences stay within
/// (−π, π]. Correct only when the underlying continuous phase moves by less
/// than π between samples (aliasing otherwise; the caller controls grid
/// density).
pub fn unwrap_sequence(samples: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(samples.len());
    let mut turns: i64 = 0;
    for (i, &x) in samples.iter().enumerate() {
        if i == 0 {
            out.push(x);
            continue;
        }
        let d = x - samples[i - 1];
        // unique m with  −π < d − 2πm ≤ π
        let m = ((d - PI) / (2.0 * PI)).ceil() as i64;
        turns -= m;
        out.push(x + (turns as f64) * 2.0 * PI);
    }
    out
}

/// [`unwrap_sequence`] over tagged angles; inputs must be principal.
pub fn unwrap_angles(samples: &[Angle]) -> Result<Vec<Angle>> {
    if let Some(bad) = samples.iter().find(|a| a.mode() != BranchMode::Principal) {
        return Err(PhaseError::PreconditionViolated(format!(
            "unwrap expects principal-mode inputs, got unwrapped value {}",
            bad.value()
        )));
    }
    let raw: Vec<f64> = samples.iter().map(|a| a.value()).collect();
    Ok(unwrap_sequence(&raw)
        .into_iter()
        .map(Angle::unwrapped)
        .collect())
}

/// Continuous branch of arg{cos γ + i·b·sin γ}, anchored to 0 at γ = 0.
///
/// This is the lift of the ellipse traced by the weighted phase-factor
/// average; `b` is the imaginary-axis squash factor (r·cosθ for subsystem
/// phases, r for S-state composites in u = Nγ). For b = 0 the curve
/// degenerates onto the real axis and the lift is taken to be 0 by
/// continuity.
pub fn ellipse_arg_unwrapped(gamma: f64, b: f64) -> f64 {
    if b == 0.0 {
        return 0.0;
    }
    let m = (gamma / PI).round();
    let v = gamma - m * PI;
    b.signum() * m * PI + (b * v.sin()).atan2(v.cos())
}

/// Principal-branch value of arg{cos γ + i·b·sin γ}.
pub fn ellipse_arg_principal(gamma: f64, b: f64) -> Result<f64> {
    let z = Complex64::new(gamma.cos(), b * gamma.sin());
    principal_arg(z).map(|a| a.value())
}
