//! Exact localization engine for the degree of the generalized Plücker
//! embedding of the Quot scheme `R_d` of rank-2, degree-`d` quotients of
//! `O^4` on `P^1`.
//!
//! The pipeline is:
//!
//! * [`fixed_points`] enumerates the torus-fixed components `P^b x P^a`;
//! * [`localization`] builds the restricted equivariant classes on each
//!   component and extracts its residue from a truncated series;
//! * [`series`] supplies the exact truncated bivariate ring the residues live in;
//! * [`golden`] holds hand-derived residue denominators for degree three;
//! * [`vafa_oracle`] evaluates the Vafa–Intriligator root-of-unity sum as an
//!   independent cross-check.

pub mod fixed_points;
pub mod golden;
pub mod localization;
pub mod series;
pub mod vafa_oracle;

pub use fixed_points::{
    chow_rank, enumerate_components, euler_characteristic, FixedComponent, Slot, WeightError,
    WeightVector,
};
pub use localization::{
    alpha_restriction, beta_restriction, component_contribution, contributions, normal_euler_class,
    plucker_degree, sum_contributions, ComponentContribution, EquivariantClassProduct,
    EquivariantFactor, LocalizationError,
};
pub use series::{LinearForm, Rational, SeriesError, TruncatedSeries};
pub use vafa_oracle::{
    vi_invariant, vi_invariant_with, vi_plucker_degree, EvaluationPath, VIError, VIOptions,
    VIQuery, VIResult,
};
