//! Linear and left-invariant vector fields on G(theta), their exact flows,
//! the associated derivation, and the rank-two test.

use crate::error::{Error, Result};
use crate::group::{d_left, exp_g, mul, AlgebraElement, GroupPoint, Tangent};
use crate::linalg2::{
    commutes, expm2, lambda_op, singular_values_2x3, theta_matrix, Mat2, Mat3, ThetaForm, Vec2,
};
use crate::DEFAULT_TOL;

/// Linear vector field `X(t, v) = (0, A v + Λ^theta_t xi)` on G(theta).
///
/// Admissible fields satisfy A theta = theta A, which makes the flow a
/// one-parameter group of automorphisms. [`LinearField::new`] enforces that;
/// [`LinearField::new_relaxed`] admits arbitrary A so that classical
/// counterexample data whose A fails the commutation identity can still be
/// evaluated, flowed and probed. The `admissible` flag records which case
/// holds and gates the operations that genuinely need it (classification).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearField {
    theta: ThetaForm,
    xi: Vec2,
    a: Mat2,
    admissible: bool,
}

impl LinearField {
    /// Construct an admissible field; fails with `NotAdmissible` when
    /// `A theta != theta A` at the default tolerance.
    pub fn new(theta: ThetaForm, xi: Vec2, a: Mat2) -> Result<Self> {
        Self::new_with_tol(theta, xi, a, DEFAULT_TOL)
    }

    pub fn new_with_tol(theta: ThetaForm, xi: Vec2, a: Mat2, tol: f64) -> Result<Self> {
        let f = Self::new_relaxed(theta, xi, a)?;
        if !commutes(a, theta_matrix(theta), tol) {
            return Err(Error::NotAdmissible);
        }
        Ok(f)
    }

    /// Construct without the admissibility check (finiteness still
    /// enforced); the flag is computed and cached.
    pub fn new_relaxed(theta: ThetaForm, xi: Vec2, a: Mat2) -> Result<Self> {
        if !xi.is_finite() || !a.is_finite() {
            return Err(Error::NonFinite);
        }
        let admissible = commutes(a, theta_matrix(theta), DEFAULT_TOL);
        Ok(LinearField { theta, xi, a, admissible })
    }

    pub fn theta(&self) -> ThetaForm {
        self.theta
    }

    pub fn xi(&self) -> Vec2 {
        self.xi
    }

    pub fn a(&self) -> Mat2 {
        self.a
    }

    /// Whether `A theta = theta A` held at construction.
    pub fn admissible(&self) -> bool {
        self.admissible
    }
}

/// Derivation of the Lie algebra attached to a linear field, the block
/// matrix `D = [[0, 0], [xi, A]]` acting by `D(alpha, eta) = (0, alpha xi + A eta)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Derivation3 {
    xi: Vec2,
    a: Mat2,
}

impl Derivation3 {
    pub fn matrix(&self) -> Mat3 {
        Mat3::from_blocks(0.0, Vec2::zero(), self.xi, self.a)
    }

    pub fn apply(&self, x: AlgebraElement) -> AlgebraElement {
        AlgebraElement::new(0.0, self.xi * x.alpha + self.a * x.eta)
    }

    /// Exact exponential `e^{sD} = [[1, 0], [Λ^A_s xi, e^{sA}]]`, the
    /// differential of the flow at the identity.
    pub fn exp(&self, s: f64) -> Mat3 {
        Mat3::from_blocks(
            1.0,
            Vec2::zero(),
            lambda_op(self.a, s) * self.xi,
            expm2(self.a, s),
        )
    }
}

/// Evaluate the linear field: `(0, A v + Λ^theta_t xi)`.
pub fn eval_linear(x: &LinearField, p: GroupPoint) -> Tangent {
    let lam = lambda_op(theta_matrix(x.theta), p.t);
    Tangent::new(0.0, x.a * p.v + lam * x.xi)
}

/// Exact flow of the linear field:
/// `φ_s(t, v) = (t, e^{sA} v + Λ^A_s Λ^theta_t xi)`.
///
/// For admissible fields the two Λ factors commute and this is the
/// automorphism `(1, e^{sA}, Λ^A_s xi)` acting on (t, v); written in this
/// order it stays the exact ODE flow of [`eval_linear`] even for relaxed
/// fields.
pub fn flow(x: &LinearField, s: f64, p: GroupPoint) -> GroupPoint {
    let lam_theta = lambda_op(theta_matrix(x.theta), p.t);
    let lam_a = lambda_op(x.a, s);
    GroupPoint::new(p.t, expm2(x.a, s) * p.v + lam_a * (lam_theta * x.xi))
}

/// The derivation `D = [[0, 0], [xi, A]]` of the field.
pub fn derivation_of(x: &LinearField) -> Derivation3 {
    Derivation3 { xi: x.xi, a: x.a }
}

/// Rank-two test: true iff `R² = Im A + R xi`, i.e. the 2×3 matrix
/// `[A | xi]` has numerical rank 2.
pub fn rank_two(x: &LinearField) -> bool {
    let rows = [
        [x.a.m[0][0], x.a.m[0][1], x.xi.x],
        [x.a.m[1][0], x.a.m[1][1], x.xi.y],
    ];
    let (s1, s2) = singular_values_2x3(rows);
    s2 > 1e-9 * (s1 + 1.0)
}

/// Left-invariant vector field `Y^L(t, v) = (alpha, rho_t eta)` generated by
/// a fixed algebra element.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InvariantField {
    theta: ThetaForm,
    gen: AlgebraElement,
}

impl InvariantField {
    pub fn new(theta: ThetaForm, gen: AlgebraElement) -> Result<Self> {
        if !gen.is_finite() {
            return Err(Error::NonFinite);
        }
        Ok(InvariantField { theta, gen })
    }

    pub fn theta(&self) -> ThetaForm {
        self.theta
    }

    pub fn gen(&self) -> AlgebraElement {
        self.gen
    }
}

/// Evaluate the invariant field at p: `dL_p(gen)`.
pub fn eval_invariant(y: &InvariantField, p: GroupPoint) -> Tangent {
    d_left(y.theta, p, y.gen)
}

/// Exact flow of the invariant field: right translation by `exp(s · gen)`.
pub fn flow_invariant(y: &InvariantField, s: f64, p: GroupPoint) -> GroupPoint {
    let step = exp_g(
        y.theta,
        AlgebraElement::new(y.gen.alpha * s, y.gen.eta * s),
    );
    mul(y.theta, p, step)
}
