//! Annulus quantities `I`, `J` at finite `R` and their empirical growth rates.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::criteria::{self, EquationKind, Quantity, SolutionRole};
use crate::error::{Error, Result};
use crate::rational;
use crate::weights::WeightFamily;

/// Gauss–Legendre nodes and weights on `[-1, 1]` (Newton on `P_n`).
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..(n + 1) / 2 {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 1 { x } else { p1 };
            let pm = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (x * pn - pm) / (x * x - 1.0);
            let dx = pn / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        if n == 1 {
            x = 0.0;
            dp = 1.0;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// `|S^{N−1}| = 2π^{N/2}/Γ(N/2)`
pub fn sphere_area(n: f64) -> f64 {
    2.0 * PI.powf(0.5 * n) / statrs::function::gamma::gamma(0.5 * n)
}

pub const PANELS: usize = 64;
pub const POINTS: usize = 8;

/// Composite Gauss–Legendre rule on `[a, b]`.
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    panels: usize,
    points: usize,
) -> Result<f64> {
    let (x, w) = gauss_legendre(points);
    let h = (b - a) / panels as f64;
    let mut total = 0.0;
    for k in 0..panels {
        let mid = a + (k as f64 + 0.5) * h;
        let mut panel = 0.0;
        for (xi, wi) in x.iter().zip(&w) {
            let r = mid + 0.5 * h * xi;
            let v = f(r);
            if !v.is_finite() {
                return Err(Error::NonFiniteIntegrand { radius: r });
            }
            panel += wi * v;
        }
        total += 0.5 * h * panel;
    }
    Ok(total)
}

/// `|S^{N−1}|·∫_R^{2R} f(r) r^{N−1} dr`
pub fn annulus_integral<F: Fn(f64) -> f64>(integrand: F, n: f64, r: f64) -> Result<f64> {
    shell_integral(integrand, n, r, 2.0 * r)
}

/// `|S^{N−1}|·∫_a^b f(r) r^{N−1} dr` with the fixed 64×8 rule.
pub fn shell_integral<F: Fn(f64) -> f64>(integrand: F, n: f64, a: f64, b: f64) -> Result<f64> {
    if !(a > 0.0) || !(b > a) {
        return Err(Error::Invalid(format!("shell needs 0 < a < b, got [{a}, {b}]")));
    }
    let radial = integrate(|r| integrand(r) * r.powf(n - 1.0), a, b, PANELS, POINTS)?;
    Ok(sphere_area(n) * radial)
}

/// One of the six annulus quantities.
#[derive(Clone, Debug, PartialEq)]
pub struct IJKind {
    pub eq: EquationKind,
    pub quantity: Quantity,
}

impl IJKind {
    pub fn new(eq: EquationKind, quantity: Quantity) -> Self {
        Self { eq, quantity }
    }

    /// Parses `IG`, `JG`, `IL`, `JL`, `IM`, `JM` (optionally `I_G` etc.).
    pub fn parse(tag: &str, p: Option<rational::Rational>) -> Result<Self> {
        let t: String = tag.chars().filter(|&c| c != '_').collect();
        let mut chars = t.chars();
        let quantity = match chars.next() {
            Some('I') => Quantity::I,
            Some('J') => Quantity::J,
            _ => return Err(Error::Invalid(format!("unknown kind {tag:?}"))),
        };
        let rest: String = chars.collect();
        if !matches!(rest.as_str(), "G" | "L" | "M") {
            return Err(Error::Invalid(format!("unknown kind {tag:?}")));
        }
        Ok(Self::new(EquationKind::from_tag(&rest, p)?, quantity))
    }

    /// `(m, q)` with integrand `(lead^m / ω₂^{2t})^{1/q}` and prefactor
    /// `R^{−2m/q}` (I) or `R^{−m/q}` (J).
    fn powers(&self, t: f64) -> (f64, f64) {
        match self.eq.p_f64() {
            None => (2.0 * t + 1.0, 1.0),
            Some(p) => match self.eq {
                EquationKind::L(_) => (p + 2.0 * t - 1.0, p - 1.0),
                _ => (p + 2.0 * t + 1.0, p + 1.0),
            },
        }
    }

    pub fn prefactor_power(&self, t: f64) -> f64 {
        let (m, q) = self.powers(t);
        match self.quantity {
            Quantity::I => -2.0 * m / q,
            Quantity::J => -m / q,
        }
    }

    /// `t` lies in the admissible interval of some role of the equation.
    pub fn admits(&self, t: f64) -> bool {
        let Ok(tq) = rational::from_f64(t) else {
            return false;
        };
        [SolutionRole::Sub, SolutionRole::Super]
            .into_iter()
            .filter_map(|role| criteria::t_interval(&self.eq, role).ok())
            .any(|iv| iv.contains_strictly(&tq))
    }
}

impl fmt::Display for IJKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let q = match self.quantity {
            Quantity::I => "I",
            Quantity::J => "J",
        };
        write!(f, "{q}_{}", self.eq.tag())
    }
}

impl FromStr for Quantity {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "I" => Ok(Self::I),
            "J" => Ok(Self::J),
            _ => Err(Error::Invalid(format!("unknown quantity {s:?}"))),
        }
    }
}

/// `prefactor(R) · ∫_{R<|x|<2R} integrand`
pub fn ij_quantity(kind: &IJKind, w: &WeightFamily, n: f64, t: f64, r: f64) -> Result<f64> {
    if !kind.admits(t) {
        return Err(Error::Invalid(format!("t = {t} is not admissible for {kind}")));
    }
    if !(r > 0.0) {
        return Err(Error::NonPositiveRadius(r));
    }
    w.validate_g(n)?;
    let (m, q) = kind.powers(t);
    let lead_power = m / q;
    let omega2_power = 2.0 * t / q;
    let integrand = |x: f64| -> f64 {
        let lead = match kind.quantity {
            Quantity::I => w.omega1(x),
            Quantity::J => w.omega1_derivative(x).abs(),
        };
        if lead == 0.0 {
            return 0.0;
        }
        let w2 = w.omega2_unchecked(x);
        if !(w2 > 0.0) {
            return f64::NAN;
        }
        (lead_power * lead.ln() - omega2_power * w2.ln()).exp()
    };
    // surface the vanishing ω₂ as its own error
    let (nodes, _) = gauss_legendre(POINTS);
    let h = r / PANELS as f64;
    for k in 0..PANELS {
        for xi in &nodes {
            let x = r + (k as f64 + 0.5) * h + 0.5 * h * xi;
            if !(w.omega2_unchecked(x) > 0.0) {
                return Err(Error::OmegaTwoVanishes { radius: x });
            }
        }
    }
    let integral = annulus_integral(integrand, n, r)?;
    Ok(r.powf(kind.prefactor_power(t)) * integral)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RateReport {
    pub kind: String,
    pub radii: Vec<f64>,
    pub values: Vec<f64>,
    /// Least-squares slope of `log₂(value)` against `log₂(R)`; `None` when
    /// some value is zero.
    pub fitted_slope: Option<f64>,
    pub predicted_exponent: f64,
    pub max_residual_of_fit: Option<f64>,
}

impl RateReport {
    pub fn degenerate(&self) -> bool {
        self.fitted_slope.is_none()
    }

    pub fn slope_error(&self) -> Option<f64> {
        self.fitted_slope
            .map(|s| (s - self.predicted_exponent).abs())
    }
}

/// Slope and max absolute residual of the least-squares line through
/// `(k, log₂ v_k)`.
pub fn fit_log2_slope(values: &[f64]) -> Option<(f64, f64)> {
    if values.len() < 2 || values.iter().any(|&v| !(v > 0.0) || !v.is_finite()) {
        return None;
    }
    let ys: Vec<f64> = values.iter().map(|v| v.log2()).collect();
    let n = ys.len() as f64;
    let xbar = (n - 1.0) / 2.0;
    let ybar = ys.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (k, y) in ys.iter().enumerate() {
        let dx = k as f64 - xbar;
        sxy += dx * (y - ybar);
        sxx += dx * dx;
    }
    let slope = sxy / sxx;
    let max_res = ys
        .iter()
        .enumerate()
        .map(|(k, y)| (y - (ybar + slope * (k as f64 - xbar))).abs())
        .fold(0.0, f64::max);
    Some((slope, max_res))
}

/// Evaluates the quantity at `R = R0·2^k`, `k = 0..=k_max`, and fits the slope.
pub fn fit_rate(
    kind: &IJKind,
    w: &WeightFamily,
    n: f64,
    t: f64,
    r0: f64,
    k_max: u32,
) -> Result<RateReport> {
    let radii: Vec<f64> = (0..=k_max).map(|k| r0 * 2f64.powi(k as i32)).collect();
    let values = radii
        .iter()
        .map(|&r| ij_quantity(kind, w, n, t, r))
        .collect::<Result<Vec<_>>>()?;
    let predicted_exponent =
        criteria::growth_exponent_f64(&kind.eq, kind.quantity, n, w.alpha, w.beta, t)?;
    let fit = fit_log2_slope(&values);
    Ok(RateReport {
        kind: kind.to_string(),
        radii,
        values,
        fitted_slope: fit.map(|f| f.0),
        predicted_exponent,
        max_residual_of_fit: fit.map(|f| f.1),
    })
}
