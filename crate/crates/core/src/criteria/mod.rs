//! Exact decision arithmetic for Liouville-type nonexistence of stable
//! solutions of `−div(ω₁∇u) = ω₂ f(u)` with power-law weights.
//!
//! For the family `ω₁ = (1+r²)^(α/2)`, `ω₂ ~ C·(1+r²)^(β/2)` every annulus
//! quantity `I`, `J` behaves like `R^e(t)` with an exponent that is affine in
//! the auxiliary parameter `t`:
//!
//! ```text
//! e(t) = (N + α − 2) − 2t·(β − α + 2)/q,   q = 1 (G), p − 1 (L), p + 1 (M)
//! ```
//!
//! so "some admissible `t` makes `I, J → 0`" is an affine feasibility problem
//! whose endpoints are quadratic surds. All comparisons are exact.

mod surd;

use std::cmp::Ordering;
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

pub use surd::SurdValue;

use crate::error::{Error, Result};
use crate::rational::{self, int, ratio, Rational};
use crate::weights::{GFactor, Monotonicity, WeightFamily};
use crate::witness::{self, Witness};

/// Lane–Emden / MEMS exponent; range-checked when the equation is built.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PExponent(Rational);

impl PExponent {
    pub fn value(&self) -> &Rational {
        &self.0
    }
}

/// `(G)`: `f(u) = eᵘ`; `(L)`: `f(u) = uᵖ`, `p > 1`; `(M)`: `f(u) = −u⁻ᵖ`, `p > 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EquationKind {
    G,
    L(PExponent),
    M(PExponent),
}

impl EquationKind {
    pub fn lane_emden(p: Rational) -> Result<Self> {
        if p <= Rational::one() {
            return Err(Error::ExponentOutOfRange {
                eq: "L",
                p: p.to_string(),
                requirement: "p > 1",
            });
        }
        Ok(Self::L(PExponent(p)))
    }

    pub fn mems(p: Rational) -> Result<Self> {
        if !p.is_positive() {
            return Err(Error::ExponentOutOfRange {
                eq: "M",
                p: p.to_string(),
                requirement: "p > 0",
            });
        }
        Ok(Self::M(PExponent(p)))
    }

    /// Builds from a tag `G`, `L`, `M` and an optional exponent.
    pub fn from_tag(tag: &str, p: Option<Rational>) -> Result<Self> {
        match (tag, p) {
            ("G", _) => Ok(Self::G),
            ("L", Some(p)) => Self::lane_emden(p),
            ("M", Some(p)) => Self::mems(p),
            ("L" | "M", None) => Err(Error::Invalid(format!("equation {tag} needs --p"))),
            (other, _) => Err(Error::Invalid(format!("unknown equation {other:?}"))),
        }
    }

    pub fn tag(&self) -> &'static str {
        match self {
            Self::G => "G",
            Self::L(_) => "L",
            Self::M(_) => "M",
        }
    }

    pub fn p(&self) -> Option<&Rational> {
        match self {
            Self::G => None,
            Self::L(p) | Self::M(p) => Some(p.value()),
        }
    }

    pub fn p_f64(&self) -> Option<f64> {
        self.p().map(rational::to_f64)
    }

    /// Divisor `q` of the growth-exponent slope.
    pub fn slope_divisor(&self) -> Rational {
        match self {
            Self::G => Rational::one(),
            Self::L(p) => p.value() - Rational::one(),
            Self::M(p) => p.value() + Rational::one(),
        }
    }

    /// The role the sharp classifier studies: sub for G and L, super for M.
    pub fn default_role(&self) -> SolutionRole {
        match self {
            Self::M(_) => SolutionRole::Super,
            _ => SolutionRole::Sub,
        }
    }
}

impl fmt::Display for EquationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::G => f.write_str("G"),
            Self::L(p) => write!(f, "L(p={})", p.value()),
            Self::M(p) => write!(f, "M(p={})", p.value()),
        }
    }
}

impl Serialize for EquationKind {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("EquationKind", 2)?;
        st.serialize_field("eq", self.tag())?;
        st.serialize_field("p", &self.p_f64())?;
        st.end()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SolutionRole {
    Sub,
    Super,
}

impl SolutionRole {
    pub fn name(self) -> &'static str {
        match self {
            Self::Sub => "sub-solution",
            Self::Super => "super-solution",
        }
    }
}

/// Interval of admissible `t`; open unless a closed flag is set.
#[derive(Clone, Debug, PartialEq)]
pub struct TInterval {
    pub lo: SurdValue,
    pub hi: SurdValue,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

impl TInterval {
    pub fn open(lo: SurdValue, hi: SurdValue) -> Self {
        debug_assert!(lo < hi);
        Self {
            lo,
            hi,
            lo_closed: false,
            hi_closed: false,
        }
    }

    pub fn contains(&self, t: &Rational) -> bool {
        let above = match self.lo.cmp_rational(t) {
            Ordering::Less => true,
            Ordering::Equal => self.lo_closed,
            Ordering::Greater => false,
        };
        let below = match self.hi.cmp_rational(t) {
            Ordering::Greater => true,
            Ordering::Equal => self.hi_closed,
            Ordering::Less => false,
        };
        above && below
    }

    pub fn contains_strictly(&self, t: &Rational) -> bool {
        self.lo.cmp_rational(t) == Ordering::Less && self.hi.cmp_rational(t) == Ordering::Greater
    }
}

impl fmt::Display for TInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}{}, {}{}",
            if self.lo_closed { '[' } else { '(' },
            self.lo,
            self.hi,
            if self.hi_closed { ']' } else { ')' }
        )
    }
}

fn inadmissible(eq: &EquationKind, role: SolutionRole) -> Error {
    Error::InadmissibleRole {
        eq: eq.tag(),
        role: role.name(),
    }
}

/// `√(p(p−1))` for L and `√(p(p+1))` for M.
fn discriminant_root(eq: &EquationKind) -> Option<SurdValue> {
    let p = eq.p()?;
    let c = match eq {
        EquationKind::L(_) => p * (p - Rational::one()),
        _ => p * (p + Rational::one()),
    };
    Some(SurdValue::sqrt(c).expect("p(p±1) is positive in range"))
}

/// Admissible `t` range for the general (no monotonicity) nonexistence test.
pub fn t_interval(eq: &EquationKind, role: SolutionRole) -> Result<TInterval> {
    match (eq, role) {
        (EquationKind::G, SolutionRole::Sub) => {
            Ok(TInterval::open(SurdValue::from_int(0), SurdValue::from_int(2)))
        }
        (EquationKind::L(p), SolutionRole::Sub) => {
            let root = discriminant_root(eq).unwrap();
            Ok(TInterval::open(
                root.neg().add_rational(p.value()),
                root.add_rational(p.value()),
            ))
        }
        (EquationKind::L(_), SolutionRole::Super) => Ok(TInterval::open(
            SurdValue::from_int(0),
            SurdValue::from_rational(ratio(1, 2)),
        )),
        (EquationKind::M(p), SolutionRole::Super) => {
            let root = discriminant_root(eq).unwrap();
            Ok(TInterval::open(
                SurdValue::from_int(0),
                root.add_rational(p.value()),
            ))
        }
        _ => Err(inadmissible(eq, role)),
    }
}

/// Admissible `t` range when only `I → 0` is required, given the direction
/// of `∇ω₁·x` for large `x`. `None` when no monotone variant applies.
pub fn t_interval_monotone(
    eq: &EquationKind,
    role: SolutionRole,
    mono: Monotonicity,
) -> Result<Option<TInterval>> {
    let general = t_interval(eq, role)?;
    let one = SurdValue::from_int(1);
    Ok(match (eq, role) {
        (EquationKind::G, _) | (EquationKind::L(_), SolutionRole::Super) => {
            mono.non_increasing().then_some(general)
        }
        (EquationKind::L(_), _) => match (mono.non_increasing(), mono.non_decreasing()) {
            (true, true) => Some(general),
            (true, false) => Some(TInterval {
                lo: one,
                hi: general.hi,
                lo_closed: true,
                hi_closed: false,
            }),
            (false, true) => Some(TInterval {
                lo: general.lo,
                hi: one,
                lo_closed: false,
                hi_closed: true,
            }),
            (false, false) => None,
        },
        // stated without a monotonicity hypothesis
        (EquationKind::M(_), _) => Some(general),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Quantity {
    I,
    J,
}

/// Exponent `e` with `quantity ~ R^e` as `R → ∞` for the power-law family.
pub fn growth_exponent(
    eq: &EquationKind,
    quantity: Quantity,
    n: &Rational,
    alpha: &Rational,
    beta: &Rational,
    t: &Rational,
) -> Result<Rational> {
    if !t.is_positive() {
        return Err(Error::Invalid(format!("t must be positive, got {t}")));
    }
    let one = Rational::one();
    let two = int(2);
    // leading power of ω₁ (I) or |∇ω₁| (J)
    let lead = match quantity {
        Quantity::I => alpha.clone(),
        Quantity::J => alpha - &one,
    };
    let two_t = &two * t;
    let e = match eq {
        EquationKind::G => {
            let m = &two_t + &one;
            let prefactor = match quantity {
                Quantity::I => &two * &m,
                Quantity::J => m.clone(),
            };
            n + &lead * &m - &two_t * beta - prefactor
        }
        EquationKind::L(p) | EquationKind::M(p) => {
            let p = p.value();
            let (m, q) = match eq {
                EquationKind::L(_) => (p + &two_t - &one, p - &one),
                _ => (p + &two_t + &one, p + &one),
            };
            let prefactor = match quantity {
                Quantity::I => &two * &m / &q,
                Quantity::J => &m / &q,
            };
            n + (&lead * &m - &two_t * beta) / &q - prefactor
        }
    };
    Ok(e)
}

pub fn growth_exponent_f64(
    eq: &EquationKind,
    quantity: Quantity,
    n: f64,
    alpha: f64,
    beta: f64,
    t: f64,
) -> Result<f64> {
    let e = growth_exponent(
        eq,
        quantity,
        &rational::from_f64(n)?,
        &rational::from_f64(alpha)?,
        &rational::from_f64(beta)?,
        &rational::from_f64(t)?,
    )?;
    Ok(rational::to_f64(&e))
}

/// Decimal places used when the certificate midpoint is irrational.
const CERTIFICATE_PLACES: u32 = 12;

/// Rational point strictly inside `(lo, hi)`: the exact midpoint when it is
/// rational, otherwise its rounding to 12, 18, 27, ... decimal places.
fn interior_point(lo: &SurdValue, hi: &SurdValue) -> Option<Rational> {
    if lo >= hi {
        return None;
    }
    let mid = lo
        .midpoint(hi)
        .unwrap_or_else(|| SurdValue::from_rational(rational::from_f64((lo.to_f64() + hi.to_f64()) / 2.0).unwrap()));
    if let Some(q) = mid.as_rational() {
        return Some(q.clone());
    }
    // place counts grow geometrically so narrow windows stay cheap
    std::iter::successors(Some(CERTIFICATE_PLACES), |&k| (k < 400).then_some(k + k / 2))
        .map(|k| mid.round_to_places(k))
        .find(|q| lo.cmp_rational(q) == Ordering::Less && hi.cmp_rational(q) == Ordering::Greater)
}

/// Sub-interval of `interval` where `D − 2t·K/q < 0`, as (lo, hi) surds.
fn decay_window(
    interval: &TInterval,
    d: &Rational,
    k: &Rational,
    q: &Rational,
) -> Option<(SurdValue, SurdValue)> {
    let (lo, hi) = (interval.lo.clone(), interval.hi.clone());
    match k.cmp(&Rational::zero()) {
        Ordering::Equal => d.is_negative().then_some((lo, hi)),
        ord => {
            // critical t where the exponent changes sign
            let tc = SurdValue::from_rational(d * q / (int(2) * k));
            let (lo, hi) = if ord == Ordering::Greater {
                (lo.max(tc), hi)
            } else {
                (lo, hi.min(tc))
            };
            (lo < hi).then_some((lo, hi))
        }
    }
}

fn certificate_in(
    interval: &TInterval,
    eq: &EquationKind,
    n: &Rational,
    alpha: &Rational,
    beta: &Rational,
) -> Option<Rational> {
    let d = n + alpha - int(2);
    let k = beta - alpha + int(2);
    let (lo, hi) = decay_window(interval, &d, &k, &eq.slope_divisor())?;
    interior_point(&lo, &hi)
}

/// A `t` inside the general admissible interval with negative `I`/`J`
/// growth exponent, if one exists.
pub fn nonexistence_certificate(
    eq: &EquationKind,
    role: SolutionRole,
    n: &Rational,
    alpha: &Rational,
    beta: &Rational,
) -> Result<Option<Rational>> {
    let interval = t_interval(eq, role)?;
    Ok(certificate_in(&interval, eq, n, alpha, beta))
}

/// As [`nonexistence_certificate`], using the monotone-weight interval
/// implied by the sign of `α` (only `I → 0` is needed there).
pub fn monotone_certificate(
    eq: &EquationKind,
    role: SolutionRole,
    n: &Rational,
    alpha: &Rational,
    beta: &Rational,
) -> Result<Option<Rational>> {
    let mono = WeightFamily::new(rational::to_f64(alpha), 0.0, GFactor::One).omega1_monotonicity();
    Ok(t_interval_monotone(eq, role, mono)?
        .and_then(|interval| certificate_in(&interval, eq, n, alpha, beta)))
}

/// `N + α − 2 < 0`: the annulus mass `R⁻²∫ω₁` vanishes and stability alone
/// forces `∫ω₂f′(u) = 0`.
pub fn is_trivial_case(n: &Rational, alpha: &Rational) -> bool {
    (n + alpha - int(2)).is_negative()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CorollaryPreset {
    /// `ω₁ ≤ Cω₂`, `ω₂ ∈ L^∞`, `∇ω₁·x ≤ 0` for large `x`.
    MonotoneBounded,
    /// `ω₁ ≤ Cω₂`, `ω₂ ∈ L^∞`, `|∇ω₁| ≤ Cω₂` for large `x`.
    BoundedGradient,
}

/// Strict dimension bound: nonexistence holds for every `N` below it.
pub fn corollary_threshold(eq: &EquationKind, preset: CorollaryPreset) -> SurdValue {
    let (base, scale) = match preset {
        CorollaryPreset::MonotoneBounded => (int(2), int(4)),
        CorollaryPreset::BoundedGradient => (int(1), int(2)),
    };
    match eq {
        EquationKind::G => SurdValue::from_rational(&base + &scale * int(2)),
        EquationKind::L(p) | EquationKind::M(p) => {
            let root = discriminant_root(eq).unwrap();
            root.add_rational(p.value())
                .mul_rational(&(scale / eq.slope_divisor()))
                .add_rational(&base)
        }
    }
}

pub fn corollary_nonexistence(eq: &EquationKind, preset: CorollaryPreset, n: &Rational) -> bool {
    corollary_threshold(eq, preset).cmp_rational(n) == Ordering::Greater
}

/// One instance of `−div(ω₁∇u) = ω₂ f(u)` in the power-law family.
#[derive(Clone, Debug, PartialEq)]
pub struct ProblemInstance {
    pub eq: EquationKind,
    pub n: Rational,
    pub alpha: Rational,
    pub beta: Rational,
}

impl ProblemInstance {
    pub fn new(eq: EquationKind, n: Rational, alpha: Rational, beta: Rational) -> Result<Self> {
        if n < Rational::one() {
            return Err(Error::Invalid(format!("dimension N must be >= 1, got {n}")));
        }
        Ok(Self { eq, n, alpha, beta })
    }

    /// Exact conversion of binary floating-point parameters.
    pub fn from_f64(eq: EquationKind, n: f64, alpha: f64, beta: f64) -> Result<Self> {
        Self::new(
            eq,
            rational::from_f64(n)?,
            rational::from_f64(alpha)?,
            rational::from_f64(beta)?,
        )
    }

    /// `N + α − 2`
    pub fn effective_dimension(&self) -> Rational {
        &self.n + &self.alpha - int(2)
    }

    /// `β − α + 2`
    pub fn growth_gap(&self) -> Rational {
        &self.beta - &self.alpha + int(2)
    }

    /// Right-hand side `T` of the sharp test `N + α − 2 < T`.
    pub fn threshold(&self) -> SurdValue {
        let hi = t_interval(&self.eq, self.eq.default_role())
            .expect("default role is admissible")
            .hi;
        hi.mul_rational(&(int(2) * self.growth_gap() / self.eq.slope_divisor()))
    }

    pub fn n_f64(&self) -> f64 {
        rational::to_f64(&self.n)
    }

    pub fn alpha_f64(&self) -> f64 {
        rational::to_f64(&self.alpha)
    }

    pub fn beta_f64(&self) -> f64 {
        rational::to_f64(&self.beta)
    }

    pub fn weights(&self, g: GFactor) -> WeightFamily {
        WeightFamily::new(self.alpha_f64(), self.beta_f64(), g)
    }

    pub fn n_is_integer(&self) -> bool {
        rational::is_integer(&self.n)
    }
}

/// Where an instance sits relative to the sharp thresholds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Position {
    /// `N + α − 2 < 0`
    Trivial,
    /// `N + α − 2 = 0`
    TrivialBoundary,
    /// strictly below the threshold
    Below,
    AtThreshold,
    /// strictly above, with `β − α + 2 ≠ 0`
    Above,
    /// above, but `β − α + 2 = 0` (neither witness regime applies)
    DegenerateGrowth,
}

pub fn position(inst: &ProblemInstance) -> Position {
    let d = inst.effective_dimension();
    match d.cmp(&Rational::zero()) {
        Ordering::Less => return Position::Trivial,
        Ordering::Equal => return Position::TrivialBoundary,
        Ordering::Greater => {}
    }
    match inst.threshold().cmp_rational(&d) {
        Ordering::Greater => Position::Below,
        Ordering::Equal => Position::AtThreshold,
        Ordering::Less if inst.growth_gap().is_zero() => Position::DegenerateGrowth,
        Ordering::Less => Position::Above,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CertificateBasis {
    /// some admissible `t` makes `I` and `J` decay
    AnnulusDecay,
    /// `R⁻²∫_{R<|x|<2R} ω₁ → 0`
    Integrability,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Certificate {
    pub basis: CertificateBasis,
    pub t: Option<Rational>,
    /// Growth exponent of `I` at `t` (annulus decay) or of `R⁻²∫ω₁`.
    pub exponent: Rational,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum UndeterminedReason {
    BoundaryEquality,
    OutsideScope,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Classification {
    Nonexistence(Certificate),
    Existence(Box<Witness>),
    Undetermined(UndeterminedReason),
}

impl Classification {
    pub fn verdict(&self) -> Verdict {
        match self {
            Self::Nonexistence(_) => Verdict::Nonexist,
            Self::Existence(_) => Verdict::Exist,
            Self::Undetermined(_) => Verdict::Undet,
        }
    }

    pub fn certificate_t(&self) -> Option<&Rational> {
        match self {
            Self::Nonexistence(c) => c.t.as_ref(),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    #[serde(rename = "NONEXIST")]
    Nonexist,
    #[serde(rename = "EXIST")]
    Exist,
    #[serde(rename = "UNDET")]
    Undet,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Nonexist => "NONEXIST",
            Self::Exist => "EXIST",
            Self::Undet => "UNDET",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Sharp classification: nonexistence strictly below the threshold (or in
/// the trivial case), an explicit stable witness strictly above it, and
/// `Undetermined` on every equality.
pub fn classify(inst: &ProblemInstance) -> Classification {
    let role = inst.eq.default_role();
    let decay = || {
        nonexistence_certificate(&inst.eq, role, &inst.n, &inst.alpha, &inst.beta)
            .expect("default role is admissible")
            .map(|t| {
                let exponent =
                    growth_exponent(&inst.eq, Quantity::I, &inst.n, &inst.alpha, &inst.beta, &t)
                        .expect("certificate t is positive");
                Certificate {
                    basis: CertificateBasis::AnnulusDecay,
                    t: Some(t),
                    exponent,
                }
            })
    };
    match position(inst) {
        Position::Trivial => Classification::Nonexistence(decay().unwrap_or_else(|| Certificate {
            basis: CertificateBasis::Integrability,
            t: None,
            exponent: inst.effective_dimension(),
        })),
        Position::Below => Classification::Nonexistence(
            decay().expect("below the threshold the decay window is nonempty"),
        ),
        Position::TrivialBoundary | Position::AtThreshold => {
            Classification::Undetermined(UndeterminedReason::BoundaryEquality)
        }
        Position::DegenerateGrowth => Classification::Undetermined(UndeterminedReason::OutsideScope),
        Position::Above => Classification::Existence(Box::new(
            witness::construct_witness(inst).expect("existence side admits a witness"),
        )),
    }
}
