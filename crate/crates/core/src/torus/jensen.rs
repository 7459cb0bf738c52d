//! Numerical checks of the Jensen, step and p-mean inequalities.

use std::fmt;

use super::{
    abs_pow_mean, cond_expect, is_hardy, log_abs_integral, QuadratureOptions, QuadratureResult,
    TorusError, TrigPoly,
};

/// Absolute slack always granted to log-quadrature margins.
pub const LOG_TOLERANCE_FLOOR: f64 = 1e-3;

/// Tolerance for the p-mean margin.
pub const P_MEAN_TOLERANCE: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    HoldsWithinTolerance,
    Violated,
}

impl Verdict {
    /// Holds if `margin ≥ 0` (and nothing was clamped), within tolerance if
    /// `margin ≥ -tol`, violated otherwise.
    pub fn from_margin(margin: f64, tolerance: f64, clamped: bool) -> Verdict {
        if margin >= 0.0 && !clamped {
            Verdict::Holds
        } else if margin >= -tolerance {
            Verdict::HoldsWithinTolerance
        } else {
            Verdict::Violated
        }
    }

    pub fn passed(self) -> bool {
        self != Verdict::Violated
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Holds => "holds",
            Verdict::HoldsWithinTolerance => "holds-within-tolerance",
            Verdict::Violated => "violated",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Tolerance on `exp(value)`: the larger of the fixed floor and the effect
/// of the last refinement step on the exponential.
fn log_tolerance(rhs: f64, q: &QuadratureResult) -> f64 {
    let from_refinement = rhs * q.refinement_delta().exp_m1();
    LOG_TOLERANCE_FLOOR.max(from_refinement)
}

#[derive(Clone, Debug, PartialEq)]
pub struct JensenReport {
    /// `|f̂(0)|`
    pub lhs: f64,
    /// `exp ∫ log|f|`
    pub rhs: f64,
    pub margin: f64,
    pub tolerance: f64,
    pub quadrature: QuadratureResult,
    pub verdict: Verdict,
}

/// `|f̂(0)| ≤ exp ∫ log|f|`.
pub fn jensen_check(f: &TrigPoly, opts: &QuadratureOptions) -> Result<JensenReport, TorusError> {
    let quadrature = log_abs_integral(f, opts)?;
    let lhs = f.mean().norm();
    let rhs = quadrature.value.exp();
    let margin = rhs - lhs;
    let tolerance = log_tolerance(rhs, &quadrature);
    let verdict = Verdict::from_margin(margin, tolerance, quadrature.clamped_fraction > 0.0);
    Ok(JensenReport {
        lhs,
        rhs,
        margin,
        tolerance,
        quadrature,
        verdict,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct StepReport {
    pub n: usize,
    /// Quadrature of `Σ_{j≤n} d_j(f)`.
    pub lower: QuadratureResult,
    /// Quadrature of `Σ_{j≤n+1} d_j(f)`.
    pub upper: QuadratureResult,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub tolerance: f64,
    pub verdict: Verdict,
}

/// `exp ∫ log|Σ_{j≤n} d_j f| ≤ exp ∫ log|Σ_{j≤n+1} d_j f|` for Hardy `f`
/// and `0 ≤ n < N`.
pub fn step_check(
    f: &TrigPoly,
    n: usize,
    opts: &QuadratureOptions,
) -> Result<StepReport, TorusError> {
    if n >= f.dim() {
        return Err(TorusError::IndexOutOfRange {
            index: n,
            dim: f.dim().saturating_sub(1),
        });
    }
    if !is_hardy(f) {
        return Err(TorusError::NotHardy);
    }
    let low_poly = cond_expect(f, n)?;
    let high_poly = cond_expect(f, n + 1)?;
    let lower = log_abs_integral(&low_poly, opts)?;
    let upper = if high_poly == low_poly {
        lower.clone()
    } else {
        log_abs_integral(&high_poly, opts)?
    };
    let lhs = lower.value.exp();
    let rhs = upper.value.exp();
    let margin = rhs - lhs;
    let tolerance = log_tolerance(lhs, &lower).max(log_tolerance(rhs, &upper));
    let clamped = lower.clamped_fraction > 0.0 || upper.clamped_fraction > 0.0;
    Ok(StepReport {
        n,
        verdict: Verdict::from_margin(margin, tolerance, clamped),
        lower,
        upper,
        lhs,
        rhs,
        margin,
        tolerance,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct PMeanReport {
    pub p: f64,
    pub grid_size: usize,
    /// `|f̂(0)|^p`
    pub lhs: f64,
    /// Grid mean of `|f|^p`.
    pub rhs: f64,
    pub margin: f64,
    pub verdict: Verdict,
}

/// `|f̂(0)|^p ≤ ∫ |f|^p` on an `M`-point grid, `0 < p < 1`.
pub fn p_mean_check(f: &TrigPoly, p: f64, m: usize) -> Result<PMeanReport, TorusError> {
    if !(p > 0.0 && p < 1.0) {
        return Err(TorusError::InvalidExponent(p));
    }
    let lhs = f.mean().norm().powf(p);
    let rhs = abs_pow_mean(f, p, m)?;
    let margin = rhs - lhs;
    Ok(PMeanReport {
        p,
        grid_size: m,
        lhs,
        rhs,
        margin,
        verdict: Verdict::from_margin(margin, P_MEAN_TOLERANCE, false),
    })
}
