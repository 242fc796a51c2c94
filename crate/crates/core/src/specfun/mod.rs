//! Special functions: Γ, terminating ₂F₁, Laguerre and Legendre, plus
//! double-double arithmetic and the identity checks that tie them together.

pub mod dd;
pub mod gamma;
pub mod hypergeom;
pub mod identities;
pub mod orthopoly;

pub use dd::DoubleDouble;
pub use gamma::{appell, double_factorial, factorial, gamma, ln_factorial, ln_gamma_ratio, log_gamma};
pub use hypergeom::{
    exact, exact_sum, exact_sum_q, hypergeom_terminating, hypergeom_terminating_exact,
    rational_to_f64, terminating_sum, HypergeomSpec, SeriesScalar, SeriesSum,
};
pub use identities::{
    check_gauss_shift, check_inversion, check_inversion_general, check_legendre_identity_even,
    check_legendre_identity_odd, check_transformation, identity_sweeps, IdentitySweep,
};
pub use orthopoly::{laguerre, laguerre_complex, legendre_assoc, legendre_assoc_sc};
