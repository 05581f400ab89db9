//! Weighted Hardy inequalities evaluated on radial test functions.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::quadrature::sphere_area;
use crate::weights::RadialFunction;

use super::grid::{RadialGrid, RadialTest};

pub const HARDY_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HardyCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

impl HardyCheck {
    fn new(lhs: f64, rhs: f64) -> Self {
        let holds = lhs <= rhs + HARDY_TOL * (lhs.abs() + rhs.abs());
        Self { lhs, rhs, holds }
    }

    pub fn gap(&self) -> f64 {
        self.rhs - self.lhs
    }
}

/// Either a general `(E, τ)` pair or the `(α, t)` power-weight form.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "form", rename_all = "snake_case")]
pub enum HardySpec {
    Lemma { e: RadialFunction, tau: f64 },
    Corollary { alpha: f64, t: f64 },
}

impl HardySpec {
    pub fn check<T: RadialTest + ?Sized>(&self, phi: &T, grid: &RadialGrid) -> Result<HardyCheck> {
        match *self {
            Self::Lemma { e, tau } => hardy_lemma_check(&e, tau, phi, grid),
            Self::Corollary { alpha, t } => Ok(hardy_corollary_check(alpha, t, phi, grid)),
        }
    }
}

/// `(τ−½)²∫E^{2τ−2}|∇E|²φ² + (½−τ)∫(−ΔE)E^{2τ−1}φ²  ≤  ∫E^{2τ}|∇φ|²`
pub fn hardy_lemma_check<T: RadialTest + ?Sized>(
    e: &RadialFunction,
    tau: f64,
    phi: &T,
    grid: &RadialGrid,
) -> Result<HardyCheck> {
    let n = grid.n;
    let mut lhs = 0.0;
    let mut rhs = 0.0;
    let mut bad = None;
    grid.for_each_point(|el, r, w| {
        let ev = e.value(r);
        if !(ev > 0.0) {
            bad.get_or_insert(r);
            return;
        }
        let de = e.first_derivative(r);
        let lap = e.second_derivative(r) + (n - 1.0) * de / r;
        let (v, dv) = phi.eval(el, r);
        let a = tau - 0.5;
        lhs += w
            * v
            * v
            * (a * a * ev.powf(2.0 * tau - 2.0) * de * de - a * (-lap) * ev.powf(2.0 * tau - 1.0));
        rhs += w * ev.powf(2.0 * tau) * dv * dv;
    });
    if let Some(r) = bad {
        return Err(Error::Invalid(format!("E must be positive, E({r}) = {}", e.value(r))));
    }
    let area = sphere_area(n);
    Ok(HardyCheck::new(area * lhs, area * rhs))
}

/// `(t+α/2)²∫r²(1+r²)^{α/2−2}φ² + (t+α/2)∫(N − 2(t+1)r²/(1+r²))(1+r²)^{α/2−1}φ²
///  ≤ ∫(1+r²)^{α/2}|∇φ|²`
pub fn hardy_corollary_check<T: RadialTest + ?Sized>(
    alpha: f64,
    t: f64,
    phi: &T,
    grid: &RadialGrid,
) -> HardyCheck {
    let n = grid.n;
    let mut lhs = 0.0;
    let mut rhs = 0.0;
    grid.for_each_point(|el, r, w| {
        let (v, dv) = phi.eval(el, r);
        lhs += w * v * v * corollary_coefficient(alpha, t, n, r);
        rhs += w * (1.0 + r * r).powf(0.5 * alpha) * dv * dv;
    });
    let area = sphere_area(n);
    HardyCheck::new(area * lhs, area * rhs)
}

/// Potential bounded by the corollary:
/// `(1+r²)^{α/2−1}·[a²s + a(N − 2(t+1)s)]`, `a = t+α/2`, `s = r²/(1+r²)`.
pub fn corollary_coefficient(alpha: f64, t: f64, n: f64, r: f64) -> f64 {
    let q = 1.0 + r * r;
    q.powf(0.5 * alpha - 1.0) * corollary_profile(alpha, t, n, r * r / q)
}

/// The bracket `a²s + a(N − 2(t+1)s)` as a function of `s ∈ [0, 1]`.
pub fn corollary_profile(alpha: f64, t: f64, n: f64, s: f64) -> f64 {
    let a = t + 0.5 * alpha;
    a * a * s + a * (n - 2.0 * (t + 1.0) * s)
}
