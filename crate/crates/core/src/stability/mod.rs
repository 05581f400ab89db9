//! Stability of radial sub/super-solutions: the second-variation form, its
//! smallest discrete Rayleigh quotient on truncated balls, weighted Hardy
//! inequalities and the Hardy-based sufficient conditions.

pub mod eigen;
pub mod grid;
pub mod hardy;

use serde::Serialize;

use crate::criteria::EquationKind;
use crate::error::Result;
use crate::quadrature::sphere_area;
use crate::weights::WeightFamily;
use crate::witness::{Regime, Witness};

pub use eigen::{radial_form, radial_mass, Pencil, BISECTION_TOL};
pub use grid::{GridFunction, RadialGrid, RadialTest, Smooth};
pub use hardy::{
    corollary_coefficient, corollary_profile, hardy_corollary_check, hardy_lemma_check,
    HardyCheck, HardySpec,
};

/// `λ_min ≥ −EVIDENCE_TOL` on every rung counts as evidence of stability.
pub const EVIDENCE_TOL: f64 = 1e-6;
/// A mesh-converged `λ_min < −CERTIFICATE_TOL` disproves stability.
pub const CERTIFICATE_TOL: f64 = 1e-5;
/// Relative agreement required between the two mesh resolutions.
pub const MESH_AGREEMENT: f64 = 0.05;

pub const DEFAULT_LADDER: [f64; 3] = [10.0, 100.0, 1000.0];

/// `|S^{N−1}|·∫(ω₁ψ′² − ω₂ f′(u) ψ²) r^{N−1} dr`
pub fn quadratic_form<F, T>(w: &WeightFamily, grid: &RadialGrid, fprime_of_u: F, psi: &T) -> f64
where
    F: Fn(f64) -> f64,
    T: RadialTest + ?Sized,
{
    sphere_area(grid.n) * quadratic_form_radial(w, grid, fprime_of_u, psi)
}

/// The radial integral of [`quadratic_form`] without the sphere area.
pub fn quadratic_form_radial<F, T>(w: &WeightFamily, grid: &RadialGrid, fprime_of_u: F, psi: &T) -> f64
where
    F: Fn(f64) -> f64,
    T: RadialTest + ?Sized,
{
    radial_form(
        grid,
        |r| w.omega1(r),
        |r| w.omega2_unchecked(r) * fprime_of_u(r),
        psi,
    )
}

/// Smallest eigenvalue of `A − λB` with `A` the form above (potential given
/// directly) and `B` the `L²(r^{N−1}dr)` mass.
pub fn min_rayleigh<V: Fn(f64) -> f64>(w: &WeightFamily, potential: V, grid: &RadialGrid) -> Result<f64> {
    eigen::min_rayleigh_with(grid, |r| w.omega1(r), potential, BISECTION_TOL)
}

/// Minimizer for the smallest eigenvalue, `B`-normalized.
pub fn minimizer<V: Fn(f64) -> f64>(
    w: &WeightFamily,
    potential: V,
    grid: &RadialGrid,
) -> Result<(f64, GridFunction)> {
    let pencil = Pencil::assemble(grid, |r| w.omega1(r), potential)?;
    let lambda = pencil.min_eigenvalue(BISECTION_TOL);
    Ok((lambda, pencil.eigenvector(lambda)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum StabilityVerdict {
    StableEvidence,
    UnstableCertificate,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Rung {
    pub r_max: f64,
    /// On the refined mesh.
    pub lambda_min: f64,
    /// On the mesh one bisection coarser.
    pub lambda_coarse: f64,
    pub mesh_size: usize,
    /// Bisections applied to the graded mesh.
    pub refinements: usize,
}

impl Rung {
    pub fn mesh_converged_negative(&self) -> bool {
        self.lambda_min < -CERTIFICATE_TOL
            && self.lambda_coarse < -CERTIFICATE_TOL
            && (self.lambda_coarse - self.lambda_min).abs() <= MESH_AGREEMENT * self.lambda_min.abs()
    }

    pub fn nonnegative(&self) -> bool {
        self.lambda_min.min(self.lambda_coarse) >= -EVIDENCE_TOL
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StabilityReport {
    pub rungs: Vec<Rung>,
    pub verdict: StabilityVerdict,
    /// Minimizer at the rung with the most negative `λ_min`.
    pub minimizer: GridFunction,
}

impl StabilityReport {
    pub fn most_negative(&self) -> &Rung {
        self.rungs
            .iter()
            .min_by(|a, b| a.lambda_min.total_cmp(&b.lambda_min))
            .expect("non-empty ladder")
    }
}

/// Upper bound on bisection refinements of the graded mesh per rung.
pub const MAX_REFINEMENTS: usize = 6;

/// Runs the truncation ladder. Each rung starts on the graded mesh and
/// bisects it until two successive resolutions agree on the sign question
/// (both `≥ −EVIDENCE_TOL`, or both `< −CERTIFICATE_TOL` within 5%), or until
/// the refinement budget or node cap is reached.
pub fn check_stability(wit: &Witness, ladder: &[f64]) -> Result<StabilityReport> {
    let w = wit.weights();
    w.validate_g(wit.n)?;
    let pot = |r: f64| wit.potential(r);
    let mut rungs = Vec::with_capacity(ladder.len());
    let mut best: Option<(f64, Pencil)> = None;
    for &r_max in ladder {
        let mut coarse = RadialGrid::graded(wit.n, r_max)?;
        let mut lambda_coarse = min_rayleigh(&w, pot, &coarse)?;
        let mut refinements = 0;
        let (rung, pencil) = loop {
            let fine = coarse.refined()?;
            let pencil = Pencil::assemble(&fine, |r| w.omega1(r), pot)?;
            let lambda_min = pencil.min_eigenvalue(BISECTION_TOL);
            refinements += 1;
            let rung = Rung {
                r_max,
                lambda_min,
                lambda_coarse,
                mesh_size: fine.elements(),
                refinements,
            };
            let decided = rung.mesh_converged_negative() || rung.nonnegative();
            if decided || refinements >= MAX_REFINEMENTS || 2 * fine.nodes().len() > grid::MAX_NODES {
                break (rung, pencil);
            }
            coarse = fine;
            lambda_coarse = lambda_min;
        };
        if best.as_ref().map_or(true, |(l, _)| rung.lambda_min < *l) {
            best = Some((rung.lambda_min, pencil));
        }
        rungs.push(rung);
    }
    let (lambda, pencil) = best.ok_or_else(|| {
        crate::error::Error::Invalid("stability ladder must not be empty".into())
    })?;
    let verdict = if rungs.iter().any(Rung::mesh_converged_negative) {
        StabilityVerdict::UnstableCertificate
    } else if rungs.iter().all(Rung::nonnegative) {
        StabilityVerdict::StableEvidence
    } else {
        StabilityVerdict::Inconclusive
    };
    Ok(StabilityReport {
        rungs,
        verdict,
        minimizer: pencil.eigenvector(lambda),
    })
}

/// A `t ∈ [−α/2, (N−2)/2]` with `K ≤ t+α/2` and `K·D ≤ (t+α/2)(D − t − α/2)`,
/// trying `t = (N−2)/2` first and then scanning downward.
pub fn t_feasibility_g(alpha: f64, beta: f64, n: f64) -> Option<f64> {
    let k = beta - alpha + 2.0;
    let d = n + alpha - 2.0;
    let feasible = |t: f64| {
        let a = t + 0.5 * alpha;
        k <= a && k * d <= a * (d - a)
    };
    let (lo, hi) = (-0.5 * alpha, 0.5 * (n - 2.0));
    if !(k > 0.0) || hi < lo {
        return None;
    }
    if feasible(hi) {
        return Some(hi);
    }
    const STEPS: usize = 4096;
    (1..=STEPS)
        .map(|i| hi - (hi - lo) * i as f64 / STEPS as f64)
        .find(|&t| feasible(t))
}

/// `lim_{r→∞} ω₂ f′(u) / (1+r²)^{α/2−1}`.
fn scaled_potential_limit(wit: &Witness) -> f64 {
    match wit.regime {
        Regime::Flat => 0.0,
        Regime::Growth => {
            let c = match wit.eq {
                EquationKind::G => 1.0,
                _ => wit.p().unwrap_or(1.0),
            };
            c * wit.g.limit_at_infinity()
        }
    }
}

/// `potential(r) ≤ corollary_coefficient(α, t, N, r)` at every grid radius
/// and, for the scaled profiles, in the limit `r → ∞`.
pub fn potential_dominated<V: Fn(f64) -> f64>(
    alpha: f64,
    t: f64,
    potential: V,
    scaled_limit: f64,
    grid: &RadialGrid,
) -> bool {
    if t + 0.5 * alpha < 0.0 {
        return false;
    }
    let n = grid.n;
    let pointwise = grid.nodes().iter().all(|&r| {
        let bound = corollary_coefficient(alpha, t, n, r);
        potential(r) <= bound + 1e-12 * bound.abs()
    });
    let h_inf = corollary_profile(alpha, t, n, 1.0);
    pointwise && scaled_limit <= h_inf + 1e-12 * h_inf.abs()
}

/// Sufficient condition for stability: the witness potential lies below the
/// Hardy coefficient for this `t`.
pub fn pointwise_domination_check(wit: &Witness, t: f64, grid: &RadialGrid) -> bool {
    potential_dominated(
        wit.alpha,
        t,
        |r| wit.potential(r),
        scaled_potential_limit(wit),
        grid,
    )
}
