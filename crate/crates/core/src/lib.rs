//! Exact symbolic engine for characteristic classes of sum- and
//! product-preserving cohomology operations.
//!
//! The engine works on finite truncated models of projective-space
//! cohomology (mod 2) and K-theory: it builds Thom-space models for sums
//! of line bundles, extracts the twisting class rho_alpha of an operation
//! alpha by dividing alpha(u) by the Thom class u, computes the same
//! class independently through the splitting principle, and verifies the
//! module-structure identities behind the construction by exhaustive
//! basis checks.

pub mod error;
pub mod ops;
pub mod ring;
pub mod thom;

pub use error::{Error, Result};
pub use ops::{adams, make_formal_operation, total_sq, total_sw, OpKind, Operation};
pub use ring::{
    cross, external_product_ring, Coefficients, GeneratorKind, GeneratorSpec, GradedElement,
    Monomial, RingMap, RingSpec,
};
pub use thom::{
    build_thom_model, external_thom_product, pullback_bundle, pullback_map,
    rho_line_closed_form, rho_via_division, rho_via_splitting, BundleDescriptor, Factor,
    FactorKind, SpaceModel, Theory, ThomData,
};

pub mod verify;

pub use verify::{
    builtin_exterior_instance, check_composite_module_map, check_eqm, check_kernel_laws,
    check_map_axioms, check_naturality, check_operation_axioms, check_permutation_invariance,
    check_product_formula_signed, check_sum_formula, check_thom_module_iso,
    check_thom_module_iso_with_twist, suite, Counterexample, Status, SuiteBounds, TwistedAction,
    VerificationReport,
};

pub mod cli;
pub mod parse;
