//! The solvable groups `G(theta) = R ⋉ R²` with action `rho_t = e^{t theta}`,
//! their Lie algebras, and the left-translation differential.

use crate::error::{Error, Result};
use crate::linalg2::{expm2, lambda_op, theta_matrix, Mat2, ThetaForm, Vec2};

/// Group element (t, v) of `R ⋉ R²`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct GroupPoint {
    pub t: f64,
    pub v: Vec2,
}

impl GroupPoint {
    pub const fn new(t: f64, v: Vec2) -> Self {
        GroupPoint { t, v }
    }

    pub const fn identity() -> Self {
        GroupPoint { t: 0.0, v: Vec2::zero() }
    }

    pub fn is_finite(self) -> bool {
        self.t.is_finite() && self.v.is_finite()
    }

    /// Euclidean norm of the coordinate triple, for tolerances.
    pub fn coord_norm(self) -> f64 {
        (self.t * self.t + self.v.x * self.v.x + self.v.y * self.v.y).sqrt()
    }
}

/// Lie algebra element (alpha, eta) of `R ⋉ R²`; alpha generates the
/// t-direction, eta lives in the nilradical plane.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct AlgebraElement {
    pub alpha: f64,
    pub eta: Vec2,
}

impl AlgebraElement {
    pub const fn new(alpha: f64, eta: Vec2) -> Self {
        AlgebraElement { alpha, eta }
    }

    pub fn norm(self) -> f64 {
        (self.alpha * self.alpha + self.eta.x * self.eta.x + self.eta.y * self.eta.y).sqrt()
    }

    pub fn is_finite(self) -> bool {
        self.alpha.is_finite() && self.eta.is_finite()
    }
}

/// Tangent vector at a group point, in the ambient (dt, dv) coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Tangent {
    pub dt: f64,
    pub dv: Vec2,
}

impl Tangent {
    pub const fn new(dt: f64, dv: Vec2) -> Self {
        Tangent { dt, dv }
    }

    pub fn norm(self) -> f64 {
        (self.dt * self.dt + self.dv.x * self.dv.x + self.dv.y * self.dv.y).sqrt()
    }
}

/// The one-parameter subgroup matrix `rho_t = e^{t theta}`.
pub fn rho(theta: ThetaForm, t: f64) -> Mat2 {
    expm2(theta_matrix(theta), t)
}

/// Group product `(t1, v1)(t2, v2) = (t1 + t2, v1 + rho_{t1} v2)`.
pub fn mul(theta: ThetaForm, g1: GroupPoint, g2: GroupPoint) -> GroupPoint {
    GroupPoint::new(g1.t + g2.t, g1.v + rho(theta, g1.t) * g2.v)
}

/// Group inverse `(-t, -rho_{-t} v)`.
pub fn inv(theta: ThetaForm, g: GroupPoint) -> GroupPoint {
    GroupPoint::new(-g.t, -(rho(theta, -g.t) * g.v))
}

/// Lie bracket `[(a1, w1), (a2, w2)] = (0, a1 theta w2 - a2 theta w1)`.
pub fn bracket(theta: ThetaForm, x: AlgebraElement, y: AlgebraElement) -> AlgebraElement {
    let th = theta_matrix(theta);
    AlgebraElement::new(0.0, th * y.eta * x.alpha - th * x.eta * y.alpha)
}

/// Group exponential. For alpha = 0 the nilradical is exponentiated
/// trivially; otherwise `exp(alpha, eta) = (alpha, Λ^theta_alpha (eta / alpha) · alpha)`
/// collapses to `(alpha, (1/alpha) Λ^theta_alpha eta)` scaled correctly:
/// the curve `s ↦ (s alpha, Λ^theta_{s alpha} (eta / alpha))` integrates the
/// left-invariant field through (alpha, eta).
pub fn exp_g(theta: ThetaForm, x: AlgebraElement) -> GroupPoint {
    if x.alpha == 0.0 {
        GroupPoint::new(0.0, x.eta)
    } else {
        let lam = lambda_op(theta_matrix(theta), x.alpha);
        GroupPoint::new(x.alpha, lam * x.eta * (1.0 / x.alpha))
    }
}

/// Differential of left translation by (t, v) at the identity:
/// `dL_{(t,v)}(alpha, eta) = (alpha, rho_t eta)`.
pub fn d_left(theta: ThetaForm, at: GroupPoint, x: AlgebraElement) -> Tangent {
    Tangent::new(x.alpha, rho(theta, at.t) * x.eta)
}

/// Validate coordinates are finite; shared entry guard for parsed input.
pub fn check_finite_point(g: GroupPoint) -> Result<GroupPoint> {
    if g.is_finite() {
        Ok(g)
    } else {
        Err(Error::NonFinite)
    }
}
