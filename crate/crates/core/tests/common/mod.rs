#![allow(dead_code)]
//! Shared generators and independent oracles for the integration tests.

use std::cmp::Ordering;
use std::ops::{Add, Mul, Neg, Sub};

use liouville::criteria::{position, EquationKind, Position, ProblemInstance};
use liouville::rational::{int, ratio, Rational};
use liouville::witness::exact_pair;
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub const L_EXPONENTS: [(i64, i64); 4] = [(3, 2), (2, 1), (3, 1), (5, 1)];
pub const M_EXPONENTS: [(i64, i64); 3] = [(1, 2), (1, 1), (2, 1)];

pub fn lane_emden(n: i64, d: i64) -> EquationKind {
    EquationKind::lane_emden(ratio(n, d)).unwrap()
}

pub fn mems(n: i64, d: i64) -> EquationKind {
    EquationKind::mems(ratio(n, d)).unwrap()
}

/// `G`, or `L`/`M` with an exponent drawn from the test sets.
pub fn random_kind(rng: &mut ChaCha8Rng, tag: char) -> EquationKind {
    match tag {
        'G' => EquationKind::G,
        'L' => {
            let (n, d) = L_EXPONENTS[rng.gen_range(0..L_EXPONENTS.len())];
            lane_emden(n, d)
        }
        _ => {
            let (n, d) = M_EXPONENTS[rng.gen_range(0..M_EXPONENTS.len())];
            mems(n, d)
        }
    }
}

/// `N ∈ [1,12]`, `α ∈ [−2,4]`, `β ∈ [−6,6]` on a quarter grid.
pub fn random_instance(rng: &mut ChaCha8Rng, eq: EquationKind) -> ProblemInstance {
    let n = ratio(rng.gen_range(4..=48), 4);
    let a = ratio(rng.gen_range(-8..=16), 4);
    let b = ratio(rng.gen_range(-24..=24), 4);
    ProblemInstance::new(eq, n, a, b).unwrap()
}

/// Strictly above the threshold with `β − α + 2 > 0` (growth regime).
pub fn growth_side_instances(rng: &mut ChaCha8Rng, tag: char, count: usize) -> Vec<ProblemInstance> {
    let mut out = Vec::new();
    while out.len() < count {
        let eq = random_kind(rng, tag);
        let inst = random_instance(rng, eq);
        if position(&inst) == Position::Above && inst.growth_gap() > int(0) {
            out.push(inst);
        }
    }
    out
}

/// Strictly below the threshold, where the exact growth pair exists and its
/// potential exceeds the Hardy constant at infinity by at least 1/4.
pub fn nonexistence_pairs(rng: &mut ChaCha8Rng, count: usize) -> Vec<ProblemInstance> {
    let tags = ['G', 'L', 'M'];
    let mut out = Vec::new();
    while out.len() < count {
        let eq = random_kind(rng, tags[out.len() % 3]);
        let inst = random_instance(rng, eq);
        if position(&inst) != Position::Below {
            continue;
        }
        let Ok(pair) = exact_pair(&inst) else { continue };
        let d = inst.n_f64() + inst.alpha_f64() - 2.0;
        let c = inst.eq.p_f64().unwrap_or(1.0) * pair.g.limit_at_infinity();
        if c - 0.25 * d * d >= 0.25 {
            out.push(inst);
        }
    }
    out
}

/// Compactly supported bump `(1 − x²)³` on `|r − c| < w` and its derivative.
pub fn bump(c: f64, w: f64) -> impl Fn(f64) -> (f64, f64) {
    move |r: f64| {
        let x = (r - c) / w;
        if x.abs() >= 1.0 {
            (0.0, 0.0)
        } else {
            let b = 1.0 - x * x;
            (b * b * b, -6.0 * x * b * b / w)
        }
    }
}

/// Truncated second-order Taylor jet: value, first and second derivative.
#[derive(Clone, Copy, Debug)]
pub struct Jet {
    pub v: f64,
    pub d: f64,
    pub dd: f64,
}

impl Jet {
    pub fn var(x: f64) -> Self {
        Self { v: x, d: 1.0, dd: 0.0 }
    }

    pub fn cst(c: f64) -> Self {
        Self { v: c, d: 0.0, dd: 0.0 }
    }

    /// Chain rule for a scalar `f` with `f(v), f′(v), f″(v)`.
    fn chain(self, f0: f64, f1: f64, f2: f64) -> Self {
        Self {
            v: f0,
            d: f1 * self.d,
            dd: f2 * self.d * self.d + f1 * self.dd,
        }
    }

    pub fn powf(self, k: f64) -> Self {
        let v = self.v;
        self.chain(v.powf(k), k * v.powf(k - 1.0), k * (k - 1.0) * v.powf(k - 2.0))
    }

    pub fn exp(self) -> Self {
        let e = self.v.exp();
        self.chain(e, e, e)
    }

    pub fn ln(self) -> Self {
        let v = self.v;
        self.chain(v.ln(), 1.0 / v, -1.0 / (v * v))
    }

    pub fn scale(self, c: f64) -> Self {
        Self { v: c * self.v, d: c * self.d, dd: c * self.dd }
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, o: Jet) -> Jet {
        Jet { v: self.v + o.v, d: self.d + o.d, dd: self.dd + o.dd }
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, o: Jet) -> Jet {
        self + (-o)
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, o: Jet) -> Jet {
        Jet {
            v: self.v * o.v,
            d: self.d * o.v + self.v * o.d,
            dd: self.dd * o.v + 2.0 * self.d * o.d + self.v * o.dd,
        }
    }
}

/// Both sides of `−div(ω₁∇u) = ω₂ f(u)` for the growth-regime pair, with `u`
/// and `g` written out from the closed forms and derivatives taken by jets.
pub fn oracle_sides(eq: &EquationKind, n: f64, alpha: f64, beta: f64, r: f64) -> (f64, f64) {
    let x = Jet::var(r);
    let q = Jet::cst(1.0) + x * x;
    let omega1 = q.powf(0.5 * alpha);
    let k = beta - alpha + 2.0;
    let s = r * r / (1.0 + r * r);
    let (u, g) = match (eq, eq.p_f64()) {
        (EquationKind::G, _) => (q.ln().scale(-0.5 * k), k * (n + (alpha - 2.0) * s)),
        (EquationKind::L(_), Some(p)) => {
            let a = k / (p - 1.0);
            (q.powf(-0.5 * a), a * (n + (alpha - 2.0 - a) * s))
        }
        (_, Some(p)) => {
            let a = k / (p + 1.0);
            (q.powf(0.5 * a), a * (n + (alpha - 2.0 + a) * s))
        }
        _ => unreachable!(),
    };
    let flux = omega1 * Jet { v: u.d, d: u.dd, dd: 0.0 };
    let lhs = -flux.d - (n - 1.0) / r * flux.v;
    let f = match (eq, eq.p_f64()) {
        (EquationKind::G, _) => u.v.exp(),
        (EquationKind::L(_), Some(p)) => u.v.powf(p),
        (_, Some(p)) => -u.v.powf(-p),
        _ => unreachable!(),
    };
    let rhs = g * (1.0 + r * r).powf(0.5 * beta) * f;
    (lhs, rhs)
}

pub const ORACLE_DIGITS: u32 = 200;

fn ten_pow(k: u32) -> BigInt {
    BigInt::from(10u32).pow(k)
}

/// `⌊q·10^200⌋`
pub fn fixed(q: &Rational) -> BigInt {
    let num = q.numer() * ten_pow(ORACLE_DIGITS);
    floor_div(&num, q.denom())
}

/// `⌊√q·10^200⌋` for `q ≥ 0`.
pub fn fixed_sqrt(q: &Rational) -> BigInt {
    let num = q.numer() * ten_pow(2 * ORACLE_DIGITS);
    floor_div(&num, q.denom()).sqrt()
}

fn floor_div(a: &BigInt, b: &BigInt) -> BigInt {
    num_integer::Integer::div_floor(a, b)
}

/// Sign of `a + b√c` from 200-digit fixed point. Values within a few units
/// of the last place are reported as `Equal`.
pub fn oracle_sign(a: &Rational, b: &Rational, c: &Rational) -> Ordering {
    let root = fixed_sqrt(c);
    let bs = floor_div(&(b.numer() * &root), b.denom());
    let total = fixed(a) + bs;
    let slack = BigInt::from(4) + b.abs().ceil().to_integer() * 4;
    if total.abs() <= slack {
        Ordering::Equal
    } else if total.is_positive() {
        Ordering::Greater
    } else {
        Ordering::Less
    }
}

/// Sign of `T − (N + α − 2)` with the closed-form threshold
/// `T = 2K(p + √(p(p∓1)))/(p∓1)` for L/M and `T = 4K` for G.
pub fn oracle_threshold_side(inst: &ProblemInstance) -> Ordering {
    let d = inst.effective_dimension();
    let k = inst.growth_gap();
    match &inst.eq {
        EquationKind::G => (int(4) * k).cmp(&d),
        EquationKind::L(p) | EquationKind::M(p) => {
            let p = p.value().clone();
            let q = match inst.eq {
                EquationKind::L(_) => &p - int(1),
                _ => &p + int(1),
            };
            let c = &p * &q;
            let coef = int(2) * &k / &q;
            oracle_sign(&(&coef * &p - &d), &coef, &c)
        }
    }
}

/// A rational within about `10^-digits` of `√q`.
pub fn sqrt_approx(q: &Rational, digits: u32) -> Rational {
    let num = q.numer() * ten_pow(2 * digits);
    let root = floor_div(&num, q.denom()).sqrt();
    Rational::new(root, ten_pow(digits))
}

pub fn is_zero(x: &Rational) -> bool {
    x.is_zero()
}

/// `a + b√c` in 200-digit fixed point, to within a few units of the last place.
pub fn fixed_surd(a: &Rational, b: &Rational, c: &Rational) -> BigInt {
    fixed(a) + floor_div(&(b.numer() * fixed_sqrt(c)), b.denom())
}

/// Order of two fixed-point values, `Equal` within `slack` units.
pub fn fixed_cmp(x: &BigInt, y: &BigInt, slack: u32) -> Ordering {
    let diff = x - y;
    if diff.abs() <= BigInt::from(slack) {
        Ordering::Equal
    } else {
        diff.sign().cmp(&num_bigint::Sign::NoSign)
    }
}
