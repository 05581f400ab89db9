//! Explicit stable sub/super-solutions on the existence side of the sharp
//! thresholds, together with residual and positivity checks.
//!
//! Two regimes, split on the sign of `K = β − α + 2`:
//!
//! * `K > 0` (growth): a closed-form `u` and a matching `g` for which the
//!   equation holds with equality.
//!   - G: `u = −(K/2)·ln(1+r²)`
//!   - L: `u = (1+r²)^(−K/(2(p−1)))`
//!   - M: `u = (1+r²)^(K/(2(p+1)))`
//! * `K < 0` (flat): `u ≡ 0` for G, `u ≡ 1` for L and M, and `g ≡ ε` with
//!   `ε` small enough for the Hardy bound to absorb the potential.

use serde::Serialize;

use crate::criteria::{self, EquationKind, Position, ProblemInstance, SolutionRole};
use crate::error::{Error, Result};
use crate::weights::{GFactor, RadialFunction, WeightFamily};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    Growth,
    Flat,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Witness {
    #[serde(flatten)]
    pub eq: EquationKind,
    pub n: f64,
    pub alpha: f64,
    pub beta: f64,
    pub u: RadialFunction,
    pub g: GFactor,
    pub role: SolutionRole,
    pub regime: Regime,
    /// The pair solves the equation with equality.
    pub expected_exact: bool,
    /// Present for flat-regime witnesses.
    pub epsilon: Option<EpsilonChoice>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EpsilonChoice {
    pub epsilon: f64,
    pub sigma_max: f64,
    pub t_used: f64,
}

/// Largest `σ` with `σ ≤ (t+α/2)(N − 2(t+1)s)` for all `s ∈ [0,1)` and some
/// `t ∈ (−α/2, (N−2)/2)`, halved (and divided by `p` for L and M).
///
/// With `a = t + α/2 ∈ (0, D/2)`, `D = N+α−2`, the inner infimum is
/// `a·min(N, D − 2a)`, a concave piecewise quadratic maximized at
/// `a* = max(D/4, (D−N)/2)`.
pub fn select_epsilon(eq: &EquationKind, n: f64, alpha: f64) -> Result<EpsilonChoice> {
    let d = n + alpha - 2.0;
    if !(d > 0.0) {
        return Err(Error::NotExistenceSide(format!(
            "N + alpha - 2 = {d} must be positive for the flat witness"
        )));
    }
    let a = (0.25 * d).max(0.5 * (d - n));
    let sigma_max = a * n.min(d - 2.0 * a);
    let divisor = match eq.p_f64() {
        Some(p) => 2.0 * p,
        None => 2.0,
    };
    Ok(EpsilonChoice {
        epsilon: sigma_max / divisor,
        sigma_max,
        t_used: a - 0.5 * alpha,
    })
}

/// The growth-regime pair for any `K > 0` with positive `g`, regardless of
/// which side of the threshold the instance lies on.
pub fn exact_pair(inst: &ProblemInstance) -> Result<Witness> {
    let (n, alpha, beta) = (inst.n_f64(), inst.alpha_f64(), inst.beta_f64());
    let k = beta - alpha + 2.0;
    if !(k > 0.0) {
        return Err(Error::Invalid(format!(
            "growth construction needs beta - alpha + 2 > 0, got {k}"
        )));
    }
    let (u, g) = match inst.eq.p_f64() {
        None => (
            RadialFunction::LogPower { k: 0.5 * k },
            GFactor::WitnessG { n, alpha, beta },
        ),
        Some(p) => match inst.eq {
            EquationKind::L(_) => (
                RadialFunction::Power {
                    m: -k / (2.0 * (p - 1.0)),
                },
                GFactor::WitnessL { n, alpha, beta, p },
            ),
            _ => (
                RadialFunction::Power {
                    m: k / (2.0 * (p + 1.0)),
                },
                GFactor::WitnessM { n, alpha, beta, p },
            ),
        },
    };
    let inf = g.infimum();
    if !(inf > 0.0) {
        return Err(Error::NonPositiveG { infimum: inf });
    }
    Ok(Witness {
        eq: inst.eq.clone(),
        n,
        alpha,
        beta,
        u,
        g,
        role: inst.eq.default_role(),
        regime: Regime::Growth,
        expected_exact: true,
        epsilon: None,
    })
}

/// The flat-regime witness (`β − α + 2 < 0`, `N + α − 2 > 0`).
pub fn flat_witness(inst: &ProblemInstance) -> Result<Witness> {
    let (n, alpha, beta) = (inst.n_f64(), inst.alpha_f64(), inst.beta_f64());
    if !(beta - alpha + 2.0 < 0.0) {
        return Err(Error::Invalid(
            "flat construction needs beta - alpha + 2 < 0".into(),
        ));
    }
    let choice = select_epsilon(&inst.eq, n, alpha)?;
    let u = match inst.eq {
        EquationKind::G => RadialFunction::Zero,
        _ => RadialFunction::Constant { c: 1.0 },
    };
    Ok(Witness {
        eq: inst.eq.clone(),
        n,
        alpha,
        beta,
        u,
        g: GFactor::Constant {
            epsilon: choice.epsilon,
        },
        role: inst.eq.default_role(),
        regime: Regime::Flat,
        expected_exact: false,
        epsilon: Some(choice),
    })
}

/// Stable witness for an instance strictly on the existence side.
pub fn construct_witness(inst: &ProblemInstance) -> Result<Witness> {
    match criteria::position(inst) {
        Position::Above => {}
        Position::DegenerateGrowth => return Err(Error::DegenerateGrowth),
        other => {
            return Err(Error::NotExistenceSide(format!(
                "{} at N={}, alpha={}, beta={} is {other:?}",
                inst.eq, inst.n, inst.alpha, inst.beta
            )))
        }
    }
    if inst.growth_gap() > crate::rational::int(0) {
        exact_pair(inst)
    } else {
        flat_witness(inst)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Residual {
    pub r: f64,
    pub lhs: f64,
    pub rhs: f64,
    /// `lhs − rhs`
    pub value: f64,
    /// `|lhs| + |rhs| + 1`
    pub scale: f64,
}

impl Residual {
    pub fn relative(&self) -> f64 {
        self.value.abs() / self.scale
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Positivity {
    pub infimum: f64,
    pub positive: bool,
}

impl Witness {
    pub fn p(&self) -> Option<f64> {
        self.eq.p_f64()
    }

    pub fn weights(&self) -> WeightFamily {
        WeightFamily::new(self.alpha, self.beta, self.g.clone())
    }

    /// `f(u)`
    pub fn nonlinearity(&self, u: f64) -> f64 {
        match (&self.eq, self.p()) {
            (EquationKind::G, _) => u.exp(),
            (EquationKind::L(_), Some(p)) => u.powf(p),
            (_, Some(p)) => -u.powf(-p),
            _ => unreachable!(),
        }
    }

    /// `f′(u)`
    pub fn nonlinearity_derivative(&self, u: f64) -> f64 {
        match (&self.eq, self.p()) {
            (EquationKind::G, _) => u.exp(),
            (EquationKind::L(_), Some(p)) => p * u.powf(p - 1.0),
            (_, Some(p)) => p * u.powf(-p - 1.0),
            _ => unreachable!(),
        }
    }

    /// `ω₂ f′(u)`, the potential of the stability form.
    pub fn potential(&self, r: f64) -> f64 {
        self.g.eval(r) * (1.0 + r * r).powf(0.5 * self.beta) * self.nonlinearity_derivative(self.u.value(r))
    }

    pub fn residual(&self, r: f64) -> Result<Residual> {
        let w = self.weights();
        let lhs = w.apply_operator(self.n, &self.u, r)?;
        let rhs = w.omega2(self.n, r)? * self.nonlinearity(self.u.value(r));
        Ok(Residual {
            r,
            lhs,
            rhs,
            value: lhs - rhs,
            scale: lhs.abs() + rhs.abs() + 1.0,
        })
    }

    /// Sub-solution: `residual ≤ tol·scale`; super-solution: `≥ −tol·scale`;
    /// exact pairs additionally `|residual| ≤ tol·scale`.
    pub fn satisfies_contract(&self, res: &Residual, tol: f64) -> bool {
        let slack = tol * res.scale;
        let signed = match self.role {
            SolutionRole::Sub => res.value <= slack,
            SolutionRole::Super => res.value >= -slack,
        };
        signed && (!self.expected_exact || res.value.abs() <= slack)
    }

    pub fn g_positivity(&self) -> Positivity {
        g_positivity(&self.g)
    }
}

pub fn g_positivity(g: &GFactor) -> Positivity {
    let infimum = g.infimum();
    Positivity {
        infimum,
        positive: infimum > 0.0,
    }
}

/// `count` radii spaced logarithmically over `[lo, hi]`.
pub fn log_radii(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..count)
        .map(|i| (a + (b - a) * i as f64 / (count - 1).max(1) as f64).exp())
        .collect()
}
