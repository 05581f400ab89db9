//! P1 finite elements for the radial pencil
//! `A = ∫(ω₁ψ′² − Vψ²) r^{N−1}`, `B = ∫ψ² r^{N−1}`, and its smallest
//! eigenvalue by Sturm-count bisection.

use crate::error::{Error, Result};

use super::grid::{GridFunction, RadialGrid, RadialTest};

pub const BISECTION_TOL: f64 = 1e-10;

/// Symmetric tridiagonal pencil over the free nodes.
#[derive(Clone, Debug)]
pub struct Pencil {
    a_diag: Vec<f64>,
    a_off: Vec<f64>,
    b_diag: Vec<f64>,
    b_off: Vec<f64>,
    /// Symmetric diagonal scaling `1/√B_ii`; the scaled pencil has unit mass diagonal.
    scale: Vec<f64>,
    nodes: Vec<f64>,
}

impl Pencil {
    pub fn assemble<W, V>(grid: &RadialGrid, omega1: W, potential: V) -> Result<Self>
    where
        W: Fn(f64) -> f64,
        V: Fn(f64) -> f64,
    {
        let m = grid.unknowns();
        let x = grid.nodes();
        let mut a_diag = vec![0.0; m];
        let mut a_off = vec![0.0; m - 1];
        let mut b_diag = vec![0.0; m];
        let mut b_off = vec![0.0; m - 1];
        grid.for_each_point(|e, r, w| {
            let (r0, r1) = (x[e], x[e + 1]);
            let h = r1 - r0;
            let p0 = (r1 - r) / h;
            let p1 = (r - r0) / h;
            let k = w * omega1(r) / (h * h);
            let v = w * potential(r);
            a_diag[e] += k - v * p0 * p0;
            b_diag[e] += w * p0 * p0;
            if e + 1 < m {
                a_diag[e + 1] += k - v * p1 * p1;
                b_diag[e + 1] += w * p1 * p1;
                a_off[e] += -k - v * p0 * p1;
                b_off[e] += w * p0 * p1;
            }
        });
        if a_diag.iter().chain(&a_off).any(|v| !v.is_finite()) {
            return Err(Error::NonFiniteIntegrand { radius: grid.r_max });
        }
        let scale: Vec<f64> = b_diag.iter().map(|&b| 1.0 / b.sqrt()).collect();
        let pencil = Self {
            a_diag,
            a_off,
            b_diag,
            b_off,
            scale,
            nodes: x.to_vec(),
        };
        pencil.check_mass()?;
        Ok(pencil)
    }

    pub fn dim(&self) -> usize {
        self.a_diag.len()
    }

    fn scaled(&self, lambda: f64) -> (Vec<f64>, Vec<f64>) {
        let s = &self.scale;
        let d = (0..self.dim())
            .map(|i| self.a_diag[i] * s[i] * s[i] - lambda)
            .collect();
        let e = (0..self.dim() - 1)
            .map(|i| (self.a_off[i] - lambda * self.b_off[i]) * s[i] * s[i + 1])
            .collect();
        (d, e)
    }

    fn check_mass(&self) -> Result<()> {
        if self.b_diag.iter().any(|&b| !(b > 0.0) || !b.is_finite()) {
            return Err(Error::MassNotPositiveDefinite);
        }
        let s = &self.scale;
        let mut pivot = 1.0;
        for i in 1..self.dim() {
            let e = self.b_off[i - 1] * s[i - 1] * s[i];
            pivot = 1.0 - e * e / pivot;
            if !(pivot > 0.0) {
                return Err(Error::MassNotPositiveDefinite);
            }
        }
        Ok(())
    }

    /// Number of eigenvalues strictly below `lambda` (negative pivots of
    /// `LDLᵀ = A − λB`).
    pub fn count_below(&self, lambda: f64) -> usize {
        let (d, e) = self.scaled(lambda);
        let emax = e.iter().fold(1.0f64, |m, x| m.max(x * x));
        let pivmin = f64::MIN_POSITIVE * emax;
        let mut count = 0;
        let mut pivot = d[0];
        for i in 0..d.len() {
            if i > 0 {
                pivot = d[i] - e[i - 1] * e[i - 1] / pivot;
            }
            if pivot.abs() < pivmin {
                pivot = -pivmin;
            }
            if pivot < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// `ψᵀAψ` and `ψᵀBψ` for nodal values on the free nodes.
    pub fn forms(&self, psi: &[f64]) -> (f64, f64) {
        let mut qa = 0.0;
        let mut qb = 0.0;
        for i in 0..self.dim() {
            qa += self.a_diag[i] * psi[i] * psi[i];
            qb += self.b_diag[i] * psi[i] * psi[i];
            if i + 1 < self.dim() {
                qa += 2.0 * self.a_off[i] * psi[i] * psi[i + 1];
                qb += 2.0 * self.b_off[i] * psi[i] * psi[i + 1];
            }
        }
        (qa, qb)
    }

    /// Smallest eigenvalue, bisected until the bracket is below
    /// `tol·max(1, |λ|)`.
    pub fn min_eigenvalue(&self, tol: f64) -> f64 {
        let ones = vec![1.0; self.dim()];
        let (qa, qb) = self.forms(&ones);
        let mut hi = qa / qb;
        let mut step = hi.abs().max(1.0);
        while self.count_below(hi) == 0 {
            hi += step;
            step *= 2.0;
        }
        let vmax = self
            .a_diag
            .iter()
            .zip(&self.b_diag)
            .map(|(a, b)| (-a / b).max(0.0))
            .fold(0.0, f64::max);
        let mut lo = -vmax - 1.0;
        let mut step = lo.abs().max(1.0);
        while self.count_below(lo) > 0 {
            lo -= step;
            step *= 2.0;
        }
        for _ in 0..2000 {
            let mid = 0.5 * (lo + hi);
            if hi - lo <= tol * mid.abs().max(1.0) || mid <= lo || mid >= hi {
                break;
            }
            if self.count_below(mid) >= 1 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// Eigenvector for an eigenvalue estimate by inverse iteration at a shift
    /// just below it; normalized to `ψᵀBψ = 1` and positive at its largest entry.
    pub fn eigenvector(&self, lambda: f64) -> GridFunction {
        let n = self.dim();
        let shift = lambda - 1e-6 * lambda.abs().max(1.0);
        let (d, e) = self.scaled(shift);
        let mut y = vec![1.0; n];
        for _ in 0..6 {
            // right-hand side: scaled mass times y
            let mut rhs = vec![0.0; n];
            for i in 0..n {
                rhs[i] = y[i];
                if i > 0 {
                    rhs[i] += self.b_off[i - 1] * self.scale[i - 1] * self.scale[i] * y[i - 1];
                }
                if i + 1 < n {
                    rhs[i] += self.b_off[i] * self.scale[i] * self.scale[i + 1] * y[i + 1];
                }
            }
            y = thomas(&d, &e, &rhs);
            let norm = y.iter().map(|v| v * v).sum::<f64>().sqrt();
            y.iter_mut().for_each(|v| *v /= norm);
        }
        let mut psi: Vec<f64> = y.iter().zip(&self.scale).map(|(v, s)| v * s).collect();
        let (_, qb) = self.forms(&psi);
        let peak = psi
            .iter()
            .copied()
            .fold(0.0f64, |m, v| if v.abs() > m.abs() { v } else { m });
        let norm = qb.sqrt() * peak.signum();
        psi.iter_mut().for_each(|v| *v /= norm);
        psi.push(0.0);
        GridFunction {
            nodes: self.nodes.clone(),
            values: psi,
        }
    }
}

/// Solves a symmetric tridiagonal system without pivoting.
fn thomas(d: &[f64], e: &[f64], rhs: &[f64]) -> Vec<f64> {
    let n = d.len();
    let mut c = vec![0.0; n];
    let mut x = rhs.to_vec();
    let mut denom = d[0];
    c[0] = if n > 1 { e[0] / denom } else { 0.0 };
    x[0] /= denom;
    for i in 1..n {
        denom = d[i] - e[i - 1] * c[i - 1];
        if i + 1 < n {
            c[i] = e[i] / denom;
        }
        x[i] = (x[i] - e[i - 1] * x[i - 1]) / denom;
    }
    for i in (0..n - 1).rev() {
        x[i] -= c[i] * x[i + 1];
    }
    x
}

/// Smallest eigenvalue of the pencil built from `ω₁` and `potential`.
pub fn min_rayleigh_with<W, V>(grid: &RadialGrid, omega1: W, potential: V, tol: f64) -> Result<f64>
where
    W: Fn(f64) -> f64,
    V: Fn(f64) -> f64,
{
    Ok(Pencil::assemble(grid, omega1, potential)?.min_eigenvalue(tol))
}

/// Radial part `∫(ω₁ψ′² − Vψ²) r^{N−1} dr` of the second variation.
pub fn radial_form<W, V, T>(grid: &RadialGrid, omega1: W, potential: V, psi: &T) -> f64
where
    W: Fn(f64) -> f64,
    V: Fn(f64) -> f64,
    T: RadialTest + ?Sized,
{
    let mut total = 0.0;
    grid.for_each_point(|e, r, w| {
        let (v, dv) = psi.eval(e, r);
        total += w * (omega1(r) * dv * dv - potential(r) * v * v);
    });
    total
}

/// `∫ψ² r^{N−1} dr`
pub fn radial_mass<T: RadialTest + ?Sized>(grid: &RadialGrid, psi: &T) -> f64 {
    let mut total = 0.0;
    grid.for_each_point(|e, r, w| {
        let (v, _) = psi.eval(e, r);
        total += w * v * v;
    });
    total
}
