//! Power-law weight family `ω₁ = (1+r²)^(α/2)`, `ω₂ = g(r)·(1+r²)^(β/2)` and
//! the radial calculus needed to apply `−div(ω₁∇u)` to radial profiles.
//!
//! Everything here is radial: a function on ℝᴺ is represented by its profile
//! in `r = |x|`, and `N` enters only through the `(N−1)/r` term of the
//! divergence and through surface measures elsewhere.

use serde::Serialize;

use crate::error::{Error, Result};

/// Smallest radius at which the divergence-form operator is evaluated.
pub const R_MIN: f64 = 1e-8;

/// Radial profile with closed-form derivatives.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RadialFunction {
    Zero,
    Constant { c: f64 },
    /// `−k·ln(1+r²)`
    LogPower { k: f64 },
    /// `(1+r²)^m`
    Power { m: f64 },
}

impl RadialFunction {
    pub fn value(&self, r: f64) -> f64 {
        match *self {
            Self::Zero => 0.0,
            Self::Constant { c } => c,
            Self::LogPower { k } => -k * (r * r).ln_1p(),
            Self::Power { m } => (1.0 + r * r).powf(m),
        }
    }

    pub fn first_derivative(&self, r: f64) -> f64 {
        match *self {
            Self::Zero | Self::Constant { .. } => 0.0,
            Self::LogPower { k } => -2.0 * k * r / (1.0 + r * r),
            Self::Power { m } => 2.0 * m * r * (1.0 + r * r).powf(m - 1.0),
        }
    }

    pub fn second_derivative(&self, r: f64) -> f64 {
        match *self {
            Self::Zero | Self::Constant { .. } => 0.0,
            Self::LogPower { k } => {
                let q = 1.0 + r * r;
                -2.0 * k * (1.0 - r * r) / (q * q)
            }
            Self::Power { m } => {
                let q = 1.0 + r * r;
                2.0 * m * q.powf(m - 2.0) * (1.0 + (2.0 * m - 1.0) * r * r)
            }
        }
    }

    /// Infimum over `r ≥ 0`; every variant is monotone in `r`.
    pub fn infimum(&self) -> f64 {
        match *self {
            Self::Zero => 0.0,
            Self::Constant { c } => c,
            Self::LogPower { k } if k > 0.0 => f64::NEG_INFINITY,
            Self::LogPower { .. } => 0.0,
            Self::Power { m } if m < 0.0 => 0.0,
            Self::Power { .. } => 1.0,
        }
    }
}

/// Monotone cubic (Fritsch–Carlson) interpolant of a radius → value table,
/// held constant outside the tabulated range.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SampledTable {
    radii: Vec<f64>,
    values: Vec<f64>,
    #[serde(skip)]
    slopes: Vec<f64>,
}

impl SampledTable {
    pub fn new(radii: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if radii.len() != values.len() || radii.len() < 2 {
            return Err(Error::InvalidTable(
                "need at least two (radius, value) pairs of equal length".into(),
            ));
        }
        if radii.iter().chain(&values).any(|x| !x.is_finite()) {
            return Err(Error::InvalidTable("non-finite entry".into()));
        }
        if radii[0] < 0.0 || radii.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidTable(
                "radii must be non-negative and strictly increasing".into(),
            ));
        }
        if values.iter().any(|&v| v < 0.0) {
            return Err(Error::InvalidTable("values must be non-negative".into()));
        }
        let slopes = pchip_slopes(&radii, &values);
        Ok(Self {
            radii,
            values,
            slopes,
        })
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn eval(&self, r: f64) -> f64 {
        let n = self.radii.len();
        if r <= self.radii[0] {
            return self.values[0];
        }
        if r >= self.radii[n - 1] {
            return self.values[n - 1];
        }
        let i = self.radii.partition_point(|&x| x <= r) - 1;
        let (x0, x1) = (self.radii[i], self.radii[i + 1]);
        let (y0, y1) = (self.values[i], self.values[i + 1]);
        let h = x1 - x0;
        let s = (r - x0) / h;
        let s2 = s * s;
        let s3 = s2 * s;
        let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
        let h10 = s3 - 2.0 * s2 + s;
        let h01 = -2.0 * s3 + 3.0 * s2;
        let h11 = s3 - s2;
        h00 * y0 + h10 * h * self.slopes[i] + h01 * y1 + h11 * h * self.slopes[i + 1]
    }
}

fn pchip_slopes(x: &[f64], y: &[f64]) -> Vec<f64> {
    let n = x.len();
    let h: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
    let delta: Vec<f64> = (0..n - 1).map(|i| (y[i + 1] - y[i]) / h[i]).collect();
    let mut m = vec![0.0; n];
    if n == 2 {
        m[0] = delta[0];
        m[1] = delta[0];
        return m;
    }
    for i in 1..n - 1 {
        if delta[i - 1] * delta[i] <= 0.0 {
            m[i] = 0.0;
        } else {
            // weighted harmonic mean keeps the interpolant monotone
            let w1 = 2.0 * h[i] + h[i - 1];
            let w2 = h[i] + 2.0 * h[i - 1];
            m[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
        }
    }
    m[0] = end_slope(h[0], h[1], delta[0], delta[1]);
    m[n - 1] = end_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
    m
}

fn end_slope(h0: f64, h1: f64, d0: f64, d1: f64) -> f64 {
    let m = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if m * d0 <= 0.0 {
        0.0
    } else if d0 * d1 <= 0.0 && m.abs() > 3.0 * d0.abs() {
        3.0 * d0
    } else {
        m
    }
}

/// Radial factor `g` in `ω₂ = g·(1+r²)^(β/2)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GFactor {
    One,
    Constant {
        epsilon: f64,
    },
    WitnessG {
        n: f64,
        alpha: f64,
        beta: f64,
    },
    WitnessL {
        n: f64,
        alpha: f64,
        beta: f64,
        p: f64,
    },
    WitnessM {
        n: f64,
        alpha: f64,
        beta: f64,
        p: f64,
    },
    Sampled(SampledTable),
}

impl GFactor {
    /// `(A, B)` with `g(r) = A·(N + B·r²/(1+r²))` for the witness variants.
    pub fn linear_form(&self) -> Option<(f64, f64)> {
        match *self {
            Self::WitnessG { alpha, beta, .. } => {
                let k = beta - alpha + 2.0;
                Some((k, alpha - 2.0))
            }
            Self::WitnessL { alpha, beta, p, .. } => {
                let a = (beta - alpha + 2.0) / (p - 1.0);
                Some((a, alpha - 2.0 - a))
            }
            Self::WitnessM { alpha, beta, p, .. } => {
                let a = (beta - alpha + 2.0) / (p + 1.0);
                Some((a, alpha - 2.0 + a))
            }
            _ => None,
        }
    }

    fn witness_params(&self) -> Option<(f64, f64, f64)> {
        match *self {
            Self::WitnessG { n, alpha, beta }
            | Self::WitnessL { n, alpha, beta, .. }
            | Self::WitnessM { n, alpha, beta, .. } => Some((n, alpha, beta)),
            _ => None,
        }
    }

    pub fn is_witness(&self) -> bool {
        self.witness_params().is_some()
    }

    pub fn eval(&self, r: f64) -> f64 {
        match self {
            Self::One => 1.0,
            Self::Constant { epsilon } => *epsilon,
            Self::Sampled(t) => t.eval(r),
            _ => {
                let (n, ..) = self.witness_params().unwrap();
                let (a, b) = self.linear_form().unwrap();
                let s = r * r / (1.0 + r * r);
                a * (n + b * s)
            }
        }
    }

    pub fn limit_at_infinity(&self) -> f64 {
        match self {
            Self::One => 1.0,
            Self::Constant { epsilon } => *epsilon,
            Self::Sampled(t) => *t.values().last().unwrap(),
            _ => {
                let (n, ..) = self.witness_params().unwrap();
                let (a, b) = self.linear_form().unwrap();
                a * (n + b)
            }
        }
    }

    /// Infimum over `r ≥ 0`. Witness variants are monotone in `r²/(1+r²)`,
    /// so the infimum is the smaller of the values at 0 and at ∞; the
    /// monotone interpolant never leaves the range of its data.
    pub fn infimum(&self) -> f64 {
        match self {
            Self::One => 1.0,
            Self::Constant { epsilon } => *epsilon,
            Self::Sampled(t) => t.values().iter().copied().fold(f64::INFINITY, f64::min),
            _ => self.eval(0.0).min(self.limit_at_infinity()),
        }
    }
}

/// Direction of `∇ω₁(x)·x` for large `|x|`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Monotonicity {
    Constant,
    Decreasing,
    Increasing,
}

impl Monotonicity {
    /// `∇ω₁·x ≤ 0`
    pub fn non_increasing(self) -> bool {
        matches!(self, Self::Constant | Self::Decreasing)
    }

    /// `∇ω₁·x ≥ 0`
    pub fn non_decreasing(self) -> bool {
        matches!(self, Self::Constant | Self::Increasing)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WeightFamily {
    pub alpha: f64,
    pub beta: f64,
    pub g: GFactor,
}

impl WeightFamily {
    pub fn new(alpha: f64, beta: f64, g: GFactor) -> Self {
        Self { alpha, beta, g }
    }

    /// `ω₁ = ω₂ = 1`
    pub fn flat() -> Self {
        Self::new(0.0, 0.0, GFactor::One)
    }

    pub fn omega1(&self, r: f64) -> f64 {
        (1.0 + r * r).powf(0.5 * self.alpha)
    }

    pub fn omega1_derivative(&self, r: f64) -> f64 {
        if self.alpha == 0.0 {
            return 0.0;
        }
        self.alpha * r * (1.0 + r * r).powf(0.5 * self.alpha - 1.0)
    }

    pub fn omega1_monotonicity(&self) -> Monotonicity {
        if self.alpha < 0.0 {
            Monotonicity::Decreasing
        } else if self.alpha > 0.0 {
            Monotonicity::Increasing
        } else {
            Monotonicity::Constant
        }
    }

    /// Checks that witness-type `g` factors were built for this `(N, α, β)`
    /// and are strictly positive.
    pub fn validate_g(&self, n: f64) -> Result<()> {
        if let Some((gn, ga, gb)) = self.g.witness_params() {
            if gn != n || ga != self.alpha || gb != self.beta {
                return Err(Error::ParameterMismatch(format!(
                    "g built for (N={gn}, alpha={ga}, beta={gb}), weights have (N={n}, alpha={}, beta={})",
                    self.alpha, self.beta
                )));
            }
            let inf = self.g.infimum();
            if !(inf > 0.0) {
                return Err(Error::NonPositiveG { infimum: inf });
            }
        }
        Ok(())
    }

    pub fn omega2(&self, n: f64, r: f64) -> Result<f64> {
        self.validate_g(n)?;
        Ok(self.omega2_unchecked(r))
    }

    pub(crate) fn omega2_unchecked(&self, r: f64) -> f64 {
        self.g.eval(r) * (1.0 + r * r).powf(0.5 * self.beta)
    }

    /// `−r^{1−N}(r^{N−1} ω₁ u′)′ = −(ω₁u″ + ω₁′u′ + (N−1)/r·ω₁u′)`
    pub fn apply_operator(&self, n: f64, u: &RadialFunction, r: f64) -> Result<f64> {
        if !(r >= R_MIN) || !r.is_finite() {
            return Err(Error::NonPositiveRadius(r));
        }
        let w = self.omega1(r);
        let dw = self.omega1_derivative(r);
        let du = u.first_derivative(r);
        let d2u = u.second_derivative(r);
        Ok(-(w * d2u + dw * du + (n - 1.0) / r * w * du))
    }
}
