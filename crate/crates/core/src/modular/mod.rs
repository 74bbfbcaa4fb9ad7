//! High-precision evaluation of eta quotients and Siegel functions at CM
//! points, and recognition of the resulting class polynomials.

pub mod classpoly;
pub mod complex;
pub mod eta;
pub mod siegel;

pub use classpoly::{
    class_polynomial, class_polynomial_for_group, conjugate_values, form_values,
    polynomial_discriminant_nonzero, ClassPolynomial, EtaQuotient, Invariant, PolyJson,
    DEFAULT_PRECISION,
};
pub use complex::BigComplex;
pub use eta::{
    dedekind_sum, delta_tilde, delta_tilde_surd, eta, eta_surd, reduce_surd, reduce_to_fundamental,
};
pub use siegel::{siegel_g12, siegel_product, CMPoint};
