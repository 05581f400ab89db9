//! Liouville-type classification for weighted semilinear equations
//! `−div(ω₁∇u) = ω₂ f(u)` with `f ∈ {eᵘ, uᵖ, −u⁻ᵖ}`: exact thresholds,
//! explicit witnesses, numerical stability checks and annulus growth rates.

pub mod cli;
pub mod criteria;
pub mod error;
pub mod quadrature;
pub mod rational;
pub mod stability;
pub mod weights;
pub mod witness;

pub use criteria::{classify, Classification, EquationKind, ProblemInstance, SolutionRole, Verdict};
pub use error::{Error, Result};
pub use weights::{GFactor, RadialFunction, WeightFamily};
pub use witness::Witness;
