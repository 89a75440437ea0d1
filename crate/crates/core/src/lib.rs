//! Almost-Riemannian structures on the solvable nonnilpotent 3D Lie groups
//! `G(theta) = R ⋉ R²`.
//!
//! The crate makes the following machinery computable:
//!
//! * [`linalg2`]: closed-form 2×2 matrix exponentials, the Λ (phi-1) operator,
//!   commutation tests and the canonical `theta` matrices.
//! * [`group`]: the group product, inverse, exponential map and differentials
//!   of left translations.
//! * [`fields`]: linear and left-invariant vector fields, their exact flows,
//!   the associated derivation and the rank-two test.
//! * [`ars`]: distributions, the Lie algebra rank condition, the
//!   almost-Riemannian norm and the singular locus with sampling diagnostics.
//! * [`morphisms`]: automorphisms and generic candidate maps, pullbacks of
//!   structures, flow-conjugation and numeric isometry verification.
//! * [`classify`]: the constructive rank-two classification into canonical
//!   classes together with explicit normalizing automorphisms.
//!
//! Everything is plain value types and pure functions; all randomized
//! verification is driven by explicitly seeded samplers ([`sample`], [`gen`])
//! so results are reproducible bit for bit.

pub mod ars;
pub mod classify;
pub mod error;
pub mod fields;
pub mod gen;
pub mod group;
pub mod linalg2;
pub mod morphisms;
pub mod sample;

pub use ars::{Ars, Crossings, CurveKind, Distribution};
pub use classify::{CanonicalClass, ClassificationResult};
pub use error::Error;
pub use fields::{Derivation3, InvariantField, LinearField};
pub use group::{AlgebraElement, GroupPoint, Tangent};
pub use linalg2::{Mat2, Mat3, ThetaForm, Vec2};
pub use morphisms::{Automorphism, GroupMap, IsometryReport};

/// Default relative tolerance used by validations that do not take an
/// explicit tolerance argument. Overridable per call where an API exposes a
/// `tol` parameter; the CLI maps the `ARS3D_TOL` environment variable here.
pub const DEFAULT_TOL: f64 = 1e-9;
