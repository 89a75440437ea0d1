//! Automorphisms of G(theta), candidate maps with Jacobians, pullback of
//! structures, flow-conjugation checks, sampling-based isometry
//! verification, and the translation/identity-fixing decomposition.

use crate::ars::{ar_norm, frame_at, locus_f, Ars, Distribution};
use crate::error::{Error, Result};
use crate::fields::{flow, LinearField};
use crate::group::{inv, mul, rho, AlgebraElement, GroupPoint, Tangent};
use crate::linalg2::{lambda_op, svd3, theta_matrix, Mat2, Mat3, ThetaForm, Vec2};
use crate::sample::{sample_point, sample_points, sample_tangent, SampleCfg};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Target-locus membership bound for images of source-locus points.
pub const LOCUS_IMAGE_TOL: f64 = 1e-7;

/// Automorphism of G(theta), the triple (eps, P, eta) acting by
/// `φ(t, v) = (eps t, P v + eps Λ^theta_{eps t} eta)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Automorphism {
    theta: ThetaForm,
    eps: f64,
    p: Mat2,
    eta: Vec2,
}

impl Automorphism {
    /// Validate the triple: eps ∈ {−1, +1} with eps = +1 forced when
    /// tr theta ≠ 0, the twisted commutation `P theta = eps theta P`, and
    /// invertible P.
    pub fn new(theta: ThetaForm, eps: f64, p: Mat2, eta: Vec2) -> Result<Self> {
        if !p.is_finite() || !eta.is_finite() || !eps.is_finite() {
            return Err(Error::NonFinite);
        }
        if eps != 1.0 && eps != -1.0 {
            return Err(Error::InvalidAutomorphism("eps must be +1 or -1"));
        }
        if eps == -1.0 && theta.trace() != 0.0 {
            return Err(Error::InvalidAutomorphism("eps = -1 requires trace-free theta"));
        }
        let th = theta_matrix(theta);
        let twist = p * th - th * p * eps;
        if twist.norm_max() > 1e-9 * (1.0 + p.norm_max() * th.norm_max()) {
            return Err(Error::InvalidAutomorphism("P theta != eps theta P"));
        }
        if p.det() == 0.0 {
            return Err(Error::InvalidAutomorphism("P is singular"));
        }
        Ok(Automorphism { theta, eps, p, eta })
    }

    pub fn identity(theta: ThetaForm) -> Self {
        Automorphism { theta, eps: 1.0, p: Mat2::identity(), eta: Vec2::zero() }
    }

    pub fn theta(&self) -> ThetaForm {
        self.theta
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn p(&self) -> Mat2 {
        self.p
    }

    pub fn eta(&self) -> Vec2 {
        self.eta
    }

    pub fn apply(&self, g: GroupPoint) -> GroupPoint {
        let lam = lambda_op(theta_matrix(self.theta), self.eps * g.t);
        GroupPoint::new(self.eps * g.t, self.p * g.v + lam * self.eta * self.eps)
    }

    /// Composition `self ∘ other` (other applied first):
    /// `(ε₁ε₂, P₁P₂, P₁η₂ + ε₂η₁)`.
    pub fn compose(&self, other: &Automorphism) -> Result<Automorphism> {
        if self.theta != other.theta {
            return Err(Error::ThetaMismatch);
        }
        Automorphism::new(
            self.theta,
            self.eps * other.eps,
            self.p * other.p,
            self.p * other.eta + self.eta * other.eps,
        )
    }

    /// Group inverse `(ε, P⁻¹, −ε P⁻¹ η)`.
    pub fn inverse(&self) -> Automorphism {
        let pinv = self.p.inverse().expect("validated invertible");
        Automorphism {
            theta: self.theta,
            eps: self.eps,
            p: pinv,
            eta: -(pinv * self.eta) * self.eps,
        }
    }

    /// Differential at the identity: `[[ε, 0], [η, P]]`.
    pub fn d0(&self) -> Mat3 {
        Mat3::from_blocks(self.eps, Vec2::zero(), self.eta, self.p)
    }

    /// Inverse differential at the identity: `[[ε, 0], [−ε P⁻¹ η, P⁻¹]]`.
    pub fn d0_inv(&self) -> Mat3 {
        let pinv = self.p.inverse().expect("validated invertible");
        Mat3::from_blocks(self.eps, Vec2::zero(), -(pinv * self.eta) * self.eps, pinv)
    }

    /// Push an algebra element through the identity differential.
    pub fn d0_apply(&self, x: AlgebraElement) -> AlgebraElement {
        let (a, v) = self.d0().apply(x.alpha, x.eta);
        AlgebraElement::new(a, v)
    }
}

/// Candidate maps G(theta) → G(theta): validated automorphisms, left
/// translations, bare linear maps `(t, v) ↦ (a t, P v)` (which need not be
/// automorphisms), and compositions. `Composite([f, g])` means `f ∘ g`
/// (rightmost applied first).
#[derive(Debug, Clone, PartialEq)]
pub enum GroupMap {
    Automorphism(Automorphism),
    LeftTranslation(GroupPoint),
    LinearCandidate { a: f64, p: Mat2 },
    Composite(Vec<GroupMap>),
}

impl GroupMap {
    pub fn identity() -> GroupMap {
        GroupMap::LinearCandidate { a: 1.0, p: Mat2::identity() }
    }
}

/// Evaluate the map. `theta` supplies the group structure for translation
/// variants; an embedded [`Automorphism`] uses its own (equal) theta.
pub fn apply(m: &GroupMap, theta: ThetaForm, g: GroupPoint) -> GroupPoint {
    match m {
        GroupMap::Automorphism(a) => a.apply(g),
        GroupMap::LeftTranslation(h) => mul(theta, *h, g),
        GroupMap::LinearCandidate { a, p } => GroupPoint::new(a * g.t, *p * g.v),
        GroupMap::Composite(list) => list.iter().rev().fold(g, |q, f| apply(f, theta, q)),
    }
}

/// Exact Jacobian of the map at p, by the closed forms and the chain rule.
pub fn jacobian(m: &GroupMap, theta: ThetaForm, g: GroupPoint) -> Mat3 {
    match m {
        GroupMap::Automorphism(a) => Mat3::from_blocks(
            a.eps,
            Vec2::zero(),
            rho(a.theta, a.eps * g.t) * a.eta,
            a.p,
        ),
        GroupMap::LeftTranslation(h) => {
            Mat3::from_blocks(1.0, Vec2::zero(), Vec2::zero(), rho(theta, h.t))
        }
        GroupMap::LinearCandidate { a, p } => {
            Mat3::from_blocks(*a, Vec2::zero(), Vec2::zero(), *p)
        }
        GroupMap::Composite(list) => {
            let mut q = g;
            let mut acc = Mat3::identity();
            for f in list.iter().rev() {
                acc = jacobian(f, theta, q) * acc;
                q = apply(f, theta, q);
            }
            acc
        }
    }
}

/// Decide whether the map coincides with a valid automorphism triple of
/// G(theta): extract (eps, eta, P) from the exact Jacobian at the identity,
/// validate the triple invariants, then match the map against the
/// reconstructed automorphism on 64 seeded points.
pub fn is_automorphism(m: &GroupMap, theta: ThetaForm, tol: f64) -> bool {
    let e = GroupPoint::identity();
    let image_e = apply(m, theta, e);
    if image_e.coord_norm() > tol {
        return false;
    }
    let j = jacobian(m, theta, e);
    if j.m[0][1].abs() > tol || j.m[0][2].abs() > tol {
        return false;
    }
    let eps_hat = j.m[0][0];
    if (eps_hat.abs() - 1.0).abs() > tol {
        return false;
    }
    let eps = eps_hat.signum();
    if eps == -1.0 && theta.trace() != 0.0 {
        return false;
    }
    let p = Mat2::new(j.m[1][1], j.m[1][2], j.m[2][1], j.m[2][2]);
    let eta = Vec2::new(j.m[1][0], j.m[2][0]);
    let th = theta_matrix(theta);
    let twist = p * th - th * p * eps;
    if twist.norm_max() > tol * (1.0 + p.norm_max() * th.norm_max()) {
        return false;
    }
    if p.det().abs() <= tol {
        return false;
    }
    let candidate = Automorphism { theta, eps, p, eta };
    let mut rng = ChaCha8Rng::seed_from_u64(crate::sample::DEFAULT_SEED);
    for _ in 0..64 {
        let g = sample_point(&mut rng, 2.0, 2.0);
        let a = apply(m, theta, g);
        let b = candidate.apply(g);
        let d = ((a.t - b.t).powi(2) + (a.v - b.v).norm().powi(2)).sqrt();
        if d > tol * (1.0 + a.coord_norm() + b.coord_norm()) {
            return false;
        }
    }
    true
}

/// Pull a linear field back along the automorphism:
/// `X_ψ = (P⁻¹(ε ξ + A η), P⁻¹ A P)`, so that `dψ ∘ X_ψ = X ∘ ψ`.
pub fn pullback_field(x: &LinearField, m: &Automorphism) -> Result<LinearField> {
    if x.theta() != m.theta {
        return Err(Error::ThetaMismatch);
    }
    let pinv = m.p.inverse().ok_or(Error::InvalidAutomorphism("P is singular"))?;
    let a = x.a();
    let new_xi = pinv * (x.xi() * m.eps + a * m.eta);
    let new_a = pinv * a * m.p;
    LinearField::new_relaxed(x.theta(), new_xi, new_a)
}

/// Pull the structure back along the automorphism: field via
/// [`pullback_field`], basis `(dψ)₀⁻¹ bᵢ`, declared orthonormal. ψ is then
/// an isometry from the result onto Σ.
pub fn pullback(sigma: &Ars, m: &Automorphism) -> Result<Ars> {
    if sigma.theta() != m.theta {
        return Err(Error::ThetaMismatch);
    }
    let field = pullback_field(sigma.field(), m)?;
    let d0inv = m.d0_inv();
    let pull = |b: AlgebraElement| -> AlgebraElement {
        let (alpha, eta) = d0inv.apply(b.alpha, b.eta);
        AlgebraElement::new(alpha, eta)
    };
    let delta = Distribution::new(pull(sigma.distribution().b1()), pull(sigma.distribution().b2()))?;
    Ars::new(field, delta)
}

/// Outcome of the flow-conjugation scan `ψ∘φ¹_s` vs `φ²_{±s}∘ψ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlowConjugation {
    /// The sign with the smaller sup-residual (+1 preferred on ties).
    pub sign: i8,
    /// Sup of the scale-normalized conjugation residual over samples.
    pub residual: f64,
}

/// Try both time orientations of the conjugation over sampled (s, p); the
/// better sign is reported, never assumed. Errors when neither fits.
pub fn verify_flow_conjugation(
    m: &GroupMap,
    s1: &Ars,
    s2: &Ars,
    samples: usize,
) -> Result<FlowConjugation> {
    if s1.theta() != s2.theta() {
        return Err(Error::ThetaMismatch);
    }
    let theta = s1.theta();
    let mut rng = ChaCha8Rng::seed_from_u64(crate::sample::DEFAULT_SEED);
    let mut sup_plus = 0.0f64;
    let mut sup_minus = 0.0f64;
    for _ in 0..samples {
        let p = sample_point(&mut rng, 2.0, 2.0);
        let s = rng.gen_range(-2.0..=2.0);
        let lhs = apply(m, theta, flow(s1.field(), s, p));
        let q = apply(m, theta, p);
        for (sgn, sup) in [(1.0, &mut sup_plus), (-1.0, &mut sup_minus)] {
            let rhs = flow(s2.field(), sgn * s, q);
            let d = ((lhs.t - rhs.t).powi(2) + (lhs.v - rhs.v).norm().powi(2)).sqrt();
            let rel = d / (1.0 + lhs.coord_norm() + rhs.coord_norm());
            if rel > *sup {
                *sup = rel;
            }
        }
    }
    let threshold = 1e-8;
    if sup_plus <= sup_minus {
        if sup_plus > threshold {
            return Err(Error::NotConjugating { plus: sup_plus, minus: sup_minus });
        }
        Ok(FlowConjugation { sign: 1, residual: sup_plus })
    } else {
        if sup_minus > threshold {
            return Err(Error::NotConjugating { plus: sup_plus, minus: sup_minus });
        }
        Ok(FlowConjugation { sign: -1, residual: sup_minus })
    }
}

/// Result of the sampling-based isometry verification.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IsometryReport {
    /// Norm comparison within tolerance everywhere and the locus mapped
    /// into the target locus.
    pub passed: bool,
    /// Worst relative norm discrepancy; infinite on a finite/infinite
    /// mismatch.
    pub max_rel_error: f64,
    /// Number of (point, tangent) norm pairs compared.
    pub samples_checked: usize,
    /// Source-locus points pushed through the map.
    pub locus_points_checked: usize,
    /// Max |F₂| over images of source-locus points.
    pub locus_image_residual: f64,
    /// Worst (point, tangent) pair when the check fails.
    pub witness: Option<(GroupPoint, Tangent)>,
}

fn unit_tangent(z: Tangent) -> Option<Tangent> {
    let n = z.norm();
    if n > 1e-12 {
        Some(Tangent::new(z.dt / n, z.dv * (1.0 / n)))
    } else {
        None
    }
}

// relative norm discrepancy; None encodes a finite/infinite mismatch
fn rel_error(n1: f64, n2: f64) -> Option<f64> {
    match (n1.is_infinite(), n2.is_infinite()) {
        (true, true) => Some(0.0),
        (false, false) => {
            let m = n1.max(n2);
            if m == 0.0 {
                Some(0.0)
            } else {
                Some((n1 - n2).abs() / m)
            }
        }
        _ => None,
    }
}

/// Deterministic source-locus points: the identity (exactly singular), then
/// bisections of F₁ along segments between opposite-sign sample pairs.
pub fn locus_points(sigma: &Ars, cfg: &SampleCfg, count: usize) -> Vec<GroupPoint> {
    let mut pts = vec![GroupPoint::identity()];
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0xA5A5_5A5A);
    let mut attempts = 0usize;
    while pts.len() < count && attempts < 200 * count {
        attempts += 1;
        let a = sample_point(&mut rng, cfg.t_box, cfg.v_box);
        let b = sample_point(&mut rng, cfg.t_box, cfg.v_box);
        let fa = locus_f(sigma, a);
        let fb = locus_f(sigma, b);
        if fa == 0.0 {
            pts.push(a);
            continue;
        }
        if fb == 0.0 || (fa > 0.0) == (fb > 0.0) {
            continue;
        }
        let (mut lo, mut hi, mut flo) = (a, b, fa);
        for _ in 0..100 {
            let mid = GroupPoint::new(
                0.5 * (lo.t + hi.t),
                Vec2::new(0.5 * (lo.v.x + hi.v.x), 0.5 * (lo.v.y + hi.v.y)),
            );
            let fm = locus_f(sigma, mid);
            if fm == 0.0 {
                lo = mid;
                break;
            }
            if (fm > 0.0) == (flo > 0.0) {
                lo = mid;
                flo = fm;
            } else {
                hi = mid;
            }
        }
        pts.push(lo);
    }
    pts
}

/// Verify that m is an isometry from Σ₁ onto Σ₂ by sampling: base points
/// with eight tangent directions each (inside and outside the distribution),
/// plus locus points where infinite norms must map to infinite norms and
/// images must satisfy `|F₂| ≤` [`LOCUS_IMAGE_TOL`].
pub fn verify_isometry(
    m: &GroupMap,
    s1: &Ars,
    s2: &Ars,
    cfg: &SampleCfg,
    tol: f64,
) -> Result<IsometryReport> {
    if s1.theta() != s2.theta() {
        return Err(Error::ThetaMismatch);
    }
    let theta = s1.theta();
    let mut rng = cfg.rng();
    let mut max_rel = 0.0f64;
    let mut worst: Option<(GroupPoint, Tangent)> = None;
    let mut checked = 0usize;

    let mut compare = |p: GroupPoint, z: Tangent| -> Option<(GroupPoint, Tangent)> {
        let j = jacobian(m, theta, p);
        let q = apply(m, theta, p);
        let n1 = ar_norm(s1, p, z);
        let (dt, dv) = j.apply(z.dt, z.dv);
        let n2 = ar_norm(s2, q, Tangent::new(dt, dv));
        match rel_error(n1, n2) {
            Some(r) => {
                if r > max_rel {
                    max_rel = r;
                    worst = Some((p, z));
                }
                None
            }
            None => Some((p, z)),
        }
    };

    for p in sample_points(cfg) {
        let (f0, f1, f2) = frame_at(s1, p);
        let mut dirs: Vec<Tangent> = Vec::with_capacity(8);
        for _ in 0..4 {
            dirs.push(sample_tangent(&mut rng));
        }
        dirs.push(f1);
        dirs.push(f2);
        dirs.push(unit_tangent(f0).unwrap_or_else(|| sample_tangent(&mut rng)));
        let diag = Tangent::new(f1.dt + f2.dt, f1.dv + f2.dv);
        dirs.push(unit_tangent(diag).unwrap_or_else(|| sample_tangent(&mut rng)));
        for z in dirs {
            checked += 1;
            if let Some(w) = compare(p, z) {
                return Ok(IsometryReport {
                    passed: false,
                    max_rel_error: f64::INFINITY,
                    samples_checked: checked,
                    locus_points_checked: 0,
                    locus_image_residual: 0.0,
                    witness: Some(w),
                });
            }
        }
    }

    let lpts = locus_points(s1, cfg, 64);
    let mut locus_res = 0.0f64;
    let mut locus_worst = GroupPoint::identity();
    for l in &lpts {
        let q = apply(m, theta, *l);
        let f2_abs = locus_f(s2, q).abs();
        if f2_abs > locus_res {
            locus_res = f2_abs;
            locus_worst = *l;
        }
        // the normal direction has infinite norm; its image must too
        let (f0, f1, f2) = frame_at(s1, *l);
        let frame = Mat3::new([
            [f0.dt, f1.dt, f2.dt],
            [f0.dv.x, f1.dv.x, f2.dv.x],
            [f0.dv.y, f1.dv.y, f2.dv.y],
        ]);
        let svd = svd3(frame);
        if svd.s[2] <= 1e-9 * svd.s[0] {
            let u3 = svd.u.col(2);
            let n = (u3[0] * u3[0] + u3[1] * u3[1] + u3[2] * u3[2]).sqrt();
            if n > 0.5 {
                let z = Tangent::new(u3[0], Vec2::new(u3[1], u3[2]));
                checked += 1;
                if let Some(w) = compare(*l, z) {
                    return Ok(IsometryReport {
                        passed: false,
                        max_rel_error: f64::INFINITY,
                        samples_checked: checked,
                        locus_points_checked: lpts.len(),
                        locus_image_residual: locus_res,
                        witness: Some(w),
                    });
                }
            }
        }
    }

    let norms_ok = max_rel <= tol;
    let locus_ok = locus_res <= LOCUS_IMAGE_TOL;
    let witness = if !norms_ok {
        worst
    } else if !locus_ok {
        Some((locus_worst, Tangent::default()))
    } else {
        None
    };
    Ok(IsometryReport {
        passed: norms_ok && locus_ok,
        max_rel_error: max_rel,
        samples_checked: checked,
        locus_points_checked: lpts.len(),
        locus_image_residual: locus_res,
        witness,
    })
}

/// `ψ = L_g ∘ ψ₀` with g = ψ(e) and ψ₀ fixing the identity; reports |F₂(g)|
/// (g lies in the target locus whenever ψ is an isometry).
#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition {
    pub g: GroupPoint,
    pub m0: GroupMap,
    pub locus_residual: f64,
}

pub fn decompose(m: &GroupMap, s2: &Ars) -> Decomposition {
    let theta = s2.theta();
    let g = apply(m, theta, GroupPoint::identity());
    let m0 = GroupMap::Composite(vec![
        GroupMap::LeftTranslation(inv(theta, g)),
        m.clone(),
    ]);
    debug_assert!(apply(&m0, theta, GroupPoint::identity()).coord_norm() < 1e-9);
    Decomposition { g, m0, locus_residual: locus_f(s2, g).abs() }
}
