//! The constructive rank-two classification: normalize (1,0) into the
//! distribution, rescale, extract the orthonormal complement (sigma, eta),
//! pick the case-specific conjugating matrix, and emit the canonical
//! representative together with its normalizing automorphism.

use crate::ars::{ar_norm, Ars, Distribution};
use crate::error::{Error, Result};
use crate::fields::{rank_two, LinearField};
use crate::group::{AlgebraElement, GroupPoint, Tangent};
use crate::linalg2::{anticommutant_basis, commutant_basis, Mat2, ThetaFamily, ThetaForm, Vec2};
use crate::morphisms::{pullback, pullback_field, verify_isometry, Automorphism, GroupMap};
use crate::sample::SampleCfg;

/// The three canonical classes, named by their basis
/// `α_i = {(1,0), (σ, u_i)}` with u₁ = e₁, u₂ = e₂, u₃ = e₁+e₂.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum CanonicalClass {
    C1,
    C2,
    C3,
}

impl CanonicalClass {
    pub fn index(self) -> u8 {
        match self {
            CanonicalClass::C1 => 1,
            CanonicalClass::C2 => 2,
            CanonicalClass::C3 => 3,
        }
    }

    /// The nilradical direction u_i of the class basis.
    pub fn u(self) -> Vec2 {
        match self {
            CanonicalClass::C1 => Vec2::new(1.0, 0.0),
            CanonicalClass::C2 => Vec2::new(0.0, 1.0),
            CanonicalClass::C3 => Vec2::new(1.0, 1.0),
        }
    }
}

/// Which closed form the computed `‖(0, u)‖` at the identity agreed with.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormEtaMatch {
    /// `√(1 + σ²)` only.
    Sqrt,
    /// `1 + σ²` only.
    Linear,
    /// Both (σ = 0).
    Both,
    /// Neither closed form.
    Neither,
}

/// Output of [`classify`].
#[derive(Debug, Clone, PartialEq)]
pub struct ClassificationResult {
    pub cls: CanonicalClass,
    /// The complement parameter, ≥ 0 (exactly 0 in the Euclidean case).
    pub sigma: f64,
    /// σ was below the zero threshold (Euclidean metric on the plane).
    pub euclidean: bool,
    /// A dispatch component sat inside the discontinuity band
    /// `[1e-10, 1e-6)·‖η‖`; the branch choice is numerically fragile.
    pub stability_warning: bool,
    /// Metric rescale factor applied to the input: `normalizer` is an
    /// isometry from `canonical` onto `input.scale_metric(scale)`.
    pub scale: f64,
    pub normalizer: Automorphism,
    pub canonical: Ars,
    /// Max relative norm error of the internal isometry spot check.
    pub isometry_residual: f64,
    /// Computed `‖(0, u_cls)‖` at the identity in the canonical structure.
    pub norm_eta: f64,
    pub norm_eta_match: NormEtaMatch,
}

/// Move the distribution so it contains (1, 0): pick the basis element with
/// the dominant first component, divide out, and pull back by the inverse of
/// `ψ̂ = (1, I, −η₀)`. Returns the normalized structure and ψ̂ itself, an
/// isometry from Σ onto the result.
pub fn normalize_e0(sigma: &Ars) -> Result<(Ars, Automorphism)> {
    let b1 = sigma.distribution().b1();
    let b2 = sigma.distribution().b2();
    // prefer b1 so structures already presented through (1, 0) stay fixed
    let b = if b1.alpha.abs() > 1e-10 * (b1.alpha.abs() + b2.alpha.abs()) {
        b1
    } else {
        b2
    };
    let eta0 = b.eta * (1.0 / b.alpha);
    let psi_hat = Automorphism::new(sigma.theta(), 1.0, Mat2::identity(), -eta0)?;
    let normalized = pullback(sigma, &psi_hat.inverse())?;
    Ok((normalized, psi_hat))
}

/// The orthonormal complement of (1, 0) in the distribution: the unique
/// declared-unit element orthogonal to it, sign-fixed by σ > 0, or by the
/// first nonzero coordinate of η when σ sits at zero.
///
/// Precondition: (1, 0) lies in the distribution with declared norm 1.
pub fn orthonormal_complement(sigma: &Ars) -> Result<(f64, Vec2)> {
    let delta = sigma.distribution();
    let e0 = AlgebraElement::new(1.0, Vec2::zero());
    let ((c1, c2), res) = delta.coords(e0);
    if res > 1e-8 {
        return Err(Error::InvalidCanonical("(1,0) is not in the distribution"));
    }
    let n = (c1 * c1 + c2 * c2).sqrt();
    let (y1, y2) = (-c2 / n, c1 / n);
    let b1 = delta.b1();
    let b2 = delta.b2();
    let comp = AlgebraElement::new(
        y1 * b1.alpha + y2 * b2.alpha,
        b1.eta * y1 + b2.eta * y2,
    );
    let (mut s, mut eta) = (comp.alpha, comp.eta);
    let sign = if s.abs() > 1e-10 * eta.norm() {
        s.signum()
    } else if eta.x.abs() > 1e-12 * eta.norm() {
        eta.x.signum()
    } else {
        eta.y.signum()
    };
    s *= sign;
    eta = eta * sign;
    Ok((s, eta))
}

// case dispatch: the conjugating (eps, P) mapping the class direction u_cls
// onto eta (onto -eta when eps = -1, which negates both basis vectors of the
// pulled-back pair and so preserves the metric)
fn dispatch(theta: ThetaForm, eta: Vec2) -> Result<(CanonicalClass, f64, Mat2)> {
    let scale = eta.norm();
    let zero = |c: f64| c.abs() < 1e-10 * scale;
    let (x, y) = (eta.x, eta.y);
    let out = match theta.family() {
        ThetaFamily::Rotation => (CanonicalClass::C1, 1.0, Mat2::new(x, -y, y, x)),
        ThetaFamily::Diagonal if theta.gamma() == 1.0 => {
            (CanonicalClass::C1, 1.0, Mat2::new(x, -y, y, x))
        }
        ThetaFamily::Jordan => {
            if zero(y) {
                (CanonicalClass::C1, 1.0, Mat2::diag(x, x))
            } else {
                (CanonicalClass::C3, 1.0, Mat2::new(y, x - y, 0.0, y))
            }
        }
        ThetaFamily::Diagonal if theta.gamma() == -1.0 => {
            if zero(y) {
                (CanonicalClass::C1, 1.0, Mat2::diag(x, x))
            } else if zero(x) {
                // time reversal: P u = -eta
                (CanonicalClass::C1, -1.0, Mat2::new(0.0, -y, -y, 0.0))
            } else {
                (CanonicalClass::C3, 1.0, Mat2::diag(x, y))
            }
        }
        ThetaFamily::Diagonal => {
            if zero(y) {
                (CanonicalClass::C1, 1.0, Mat2::diag(x, x))
            } else if zero(x) {
                (CanonicalClass::C2, 1.0, Mat2::diag(y, y))
            } else {
                (CanonicalClass::C3, 1.0, Mat2::diag(x, y))
            }
        }
    };
    if out.2.det() == 0.0 {
        return Err(Error::InvalidCanonical("degenerate conjugating matrix"));
    }
    Ok(out)
}

/// Assemble the canonical structure `{X, α_cls}` with basis
/// `{(1,0), (σ, u_cls)}` declared orthonormal.
pub fn canonical_ars(cls: CanonicalClass, x: LinearField, sigma: f64) -> Result<Ars> {
    if !rank_two(&x) {
        return Err(Error::RankError);
    }
    let delta = Distribution::new(
        AlgebraElement::new(1.0, Vec2::zero()),
        AlgebraElement::new(sigma, cls.u()),
    )?;
    Ars::new(x, delta)
}

/// The classes admissible for a theta form: {1} for Diagonal(1) and
/// Rotation, {1, 3} for Jordan and Diagonal(−1), {1, 2, 3} for the interior
/// diagonal family.
pub fn class_partition(theta: ThetaForm) -> Vec<CanonicalClass> {
    use CanonicalClass::*;
    match theta.family() {
        ThetaFamily::Rotation => vec![C1],
        ThetaFamily::Jordan => vec![C1, C3],
        ThetaFamily::Diagonal => {
            if theta.gamma() == 1.0 {
                vec![C1]
            } else if theta.gamma() == -1.0 {
                vec![C1, C3]
            } else {
                vec![C1, C2, C3]
            }
        }
    }
}

/// Classify a valid rank-two structure: returns the class, σ, the
/// normalizing automorphism ν, and the canonical representative, with ν an
/// isometry from the canonical structure onto the σ-rescaled input.
pub fn classify(sigma: &Ars) -> Result<ClassificationResult> {
    if !sigma.field().admissible() {
        return Err(Error::NotAdmissible);
    }
    if !rank_two(sigma.field()) {
        return Err(Error::RankError);
    }
    let theta = sigma.theta();
    let (normalized, psi_hat) = normalize_e0(sigma)?;
    let e0 = AlgebraElement::new(1.0, Vec2::zero());
    let ((c1, c2), res) = normalized.distribution().coords(e0);
    if res > 1e-8 {
        return Err(Error::InvalidCanonical("normalization lost (1,0)"));
    }
    let r = (c1 * c1 + c2 * c2).sqrt();
    let rescaled = normalized.scale_metric(r)?;
    let (sig_raw, eta) = orthonormal_complement(&rescaled)?;

    let eta_scale = eta.norm();
    let euclidean = sig_raw.abs() < 1e-10 * eta_scale;
    let sig = if euclidean { 0.0 } else { sig_raw };
    let band = |c: f64| {
        let a = c.abs();
        a >= 1e-10 * eta_scale && a < 1e-6 * eta_scale
    };
    let stability_warning = band(eta.x) || band(eta.y);

    let (cls, eps, p) = dispatch(theta, eta)?;
    let chi = Automorphism::new(theta, eps, p, Vec2::zero())?;
    let nu = psi_hat.inverse().compose(&chi)?;
    let field_nu = pullback_field(sigma.field(), &nu)?;
    let canonical = canonical_ars(cls, field_nu, sig)?;

    let scaled_input = sigma.scale_metric(r)?;
    let spot_cfg = SampleCfg { samples: 128, ..Default::default() };
    let report = verify_isometry(
        &GroupMap::Automorphism(nu),
        &canonical,
        &scaled_input,
        &spot_cfg,
        1e-8,
    )?;

    let norm_eta = ar_norm(
        &canonical,
        GroupPoint::identity(),
        Tangent::new(0.0, cls.u()),
    );
    let sqrt_form = (1.0 + sig * sig).sqrt();
    let linear_form = 1.0 + sig * sig;
    let m_sqrt = (norm_eta - sqrt_form).abs() <= 1e-9 * (1.0 + sqrt_form);
    let m_linear = (norm_eta - linear_form).abs() <= 1e-9 * (1.0 + linear_form);
    let norm_eta_match = match (m_sqrt, m_linear) {
        (true, true) => NormEtaMatch::Both,
        (true, false) => NormEtaMatch::Sqrt,
        (false, true) => NormEtaMatch::Linear,
        (false, false) => NormEtaMatch::Neither,
    };

    Ok(ClassificationResult {
        cls,
        sigma: sig,
        euclidean,
        stability_warning,
        scale: r,
        normalizer: nu,
        canonical,
        isometry_residual: report.max_rel_error,
        norm_eta,
        norm_eta_match,
    })
}

/// Search for an automorphism-compatible P with `P u_from ∥ u_to`: for each
/// admissible ε the constraint is linear on the (anti)commutant basis; the
/// null direction is tested for invertibility. `None` mirrors the
/// disjointness argument (no automorphism links distinct classes).
pub fn automorphism_fit(theta: ThetaForm, u_from: Vec2, u_to: Vec2) -> Option<(f64, Mat2)> {
    let scale = u_from.norm() * u_to.norm();
    let epsilons: &[f64] = if theta.trace() == 0.0 { &[1.0, -1.0] } else { &[1.0] };
    for &eps in epsilons {
        let basis = if eps > 0.0 {
            commutant_basis(theta)
        } else {
            anticommutant_basis(theta)
        };
        match basis.len() {
            0 => continue,
            1 => {
                let b = basis[0];
                if (b * u_from).cross(u_to).abs() <= 1e-12 * scale && b.det() != 0.0 {
                    return Some((eps, b));
                }
            }
            2 => {
                let k1 = (basis[0] * u_from).cross(u_to);
                let k2 = (basis[1] * u_from).cross(u_to);
                let k_norm = k1.hypot(k2);
                if k_norm <= 1e-12 * (1.0 + scale) {
                    // every combination aligns; find any invertible one
                    for (c1, c2) in [(1.0, 0.0), (0.0, 1.0), (1.0, 1.0), (1.0, -1.0)] {
                        let p = basis[0] * c1 + basis[1] * c2;
                        if p.det().abs() > 1e-12 && (p * u_from).norm() > 1e-12 * u_from.norm() {
                            return Some((eps, p));
                        }
                    }
                } else {
                    let p = basis[0] * (-k2 / k_norm) + basis[1] * (k1 / k_norm);
                    if p.det().abs() > 1e-12 && (p * u_from).norm() > 1e-12 * u_from.norm() {
                        return Some((eps, p));
                    }
                }
            }
            _ => {
                // full matrix algebra: map u_from to u_to directly and a
                // perpendicular to a perpendicular
                let f = u_from;
                let t = u_to;
                let fp = Vec2::new(-f.y, f.x);
                let tp = Vec2::new(-t.y, t.x);
                let basis_from = Mat2::new(f.x, fp.x, f.y, fp.y);
                let inv = basis_from.inverse()?;
                let basis_to = Mat2::new(t.x, tp.x, t.y, tp.y);
                return Some((eps, basis_to * inv));
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ars::locus_f;
    use crate::group::GroupPoint;
    use crate::linalg2::theta_matrix;

    fn field_for(theta: ThetaForm) -> LinearField {
        let a = match theta.family() {
            ThetaFamily::Jordan => Mat2::new(0.5, 0.3, 0.0, 0.5),
            ThetaFamily::Rotation => Mat2::new(0.4, -0.9, 0.9, 0.4),
            ThetaFamily::Diagonal => {
                if theta.gamma() == 1.0 {
                    Mat2::new(0.3, 0.1, 0.2, 0.5)
                } else {
                    Mat2::diag(0.5, -0.7)
                }
            }
        };
        LinearField::new(theta, Vec2::new(0.8, 0.6), a).unwrap()
    }

    #[test]
    fn partition_table() {
        use CanonicalClass::*;
        assert_eq!(class_partition(ThetaForm::rotation(5.0).unwrap()), vec![C1]);
        assert_eq!(class_partition(ThetaForm::jordan()), vec![C1, C3]);
        assert_eq!(class_partition(ThetaForm::diagonal(0.0).unwrap()), vec![C1, C2, C3]);
        assert_eq!(class_partition(ThetaForm::diagonal(1.0).unwrap()), vec![C1]);
        assert_eq!(class_partition(ThetaForm::diagonal(-1.0).unwrap()), vec![C1, C3]);
    }

    #[test]
    fn classify_is_idempotent_on_canonicals() {
        let cases: Vec<(ThetaForm, CanonicalClass)> = vec![
            (ThetaForm::diagonal(1.0).unwrap(), CanonicalClass::C1),
            (ThetaForm::rotation(0.7).unwrap(), CanonicalClass::C1),
            (ThetaForm::jordan(), CanonicalClass::C1),
            (ThetaForm::jordan(), CanonicalClass::C3),
            (ThetaForm::diagonal(-1.0).unwrap(), CanonicalClass::C1),
            (ThetaForm::diagonal(-1.0).unwrap(), CanonicalClass::C3),
            (ThetaForm::diagonal(0.3).unwrap(), CanonicalClass::C1),
            (ThetaForm::diagonal(0.3).unwrap(), CanonicalClass::C2),
            (ThetaForm::diagonal(0.3).unwrap(), CanonicalClass::C3),
        ];
        for (theta, cls) in cases {
            let sigma_val = 0.7;
            let c = canonical_ars(cls, field_for(theta), sigma_val).unwrap();
            let r = classify(&c).unwrap();
            assert_eq!(r.cls, cls, "theta {theta:?}");
            assert!((r.sigma - sigma_val).abs() < 1e-9, "theta {theta:?}");
            assert!((r.scale - 1.0).abs() < 1e-12);
            assert!(!r.euclidean);
            // the normalizer must be the identity here
            assert!((r.normalizer.p() - Mat2::identity()).norm_max() < 1e-12);
            assert!(r.normalizer.eta().norm() < 1e-12);
            assert!(r.isometry_residual < 1e-8);
        }
    }

    #[test]
    fn classify_spec_cases() {
        // Diagonal(1), eta = (3,4), sigma = 0.5 -> class 1, rotation-style P
        let theta = ThetaForm::diagonal(1.0).unwrap();
        let delta = Distribution::new(
            AlgebraElement::new(1.0, Vec2::zero()),
            AlgebraElement::new(0.5, Vec2::new(3.0, 4.0)),
        )
        .unwrap();
        let s = Ars::new(field_for(theta), delta).unwrap();
        let r = classify(&s).unwrap();
        assert_eq!(r.cls, CanonicalClass::C1);
        assert!((r.sigma - 0.5).abs() < 1e-10);
        assert!((r.normalizer.p() - Mat2::new(3.0, -4.0, 4.0, 3.0)).norm_max() < 1e-10);

        // Jordan, eta = (3,4) -> class 3 with P = [[4,-1],[0,4]]
        let theta = ThetaForm::jordan();
        let delta = Distribution::new(
            AlgebraElement::new(1.0, Vec2::zero()),
            AlgebraElement::new(0.5, Vec2::new(3.0, 4.0)),
        )
        .unwrap();
        let s = Ars::new(field_for(theta), delta).unwrap();
        let r = classify(&s).unwrap();
        assert_eq!(r.cls, CanonicalClass::C3);
        assert!((r.normalizer.p() - Mat2::new(4.0, -1.0, 0.0, 4.0)).norm_max() < 1e-10);
        let pu = r.normalizer.p() * Vec2::new(1.0, 1.0);
        assert!((pu - Vec2::new(3.0, 4.0)).norm() < 1e-12);

        // Diagonal(-1), eta = (0,2) -> class 1 through time reversal; P maps
        // e1 to -eta so that the pulled-back pair is negated as a whole
        let theta = ThetaForm::diagonal(-1.0).unwrap();
        let delta = Distribution::new(
            AlgebraElement::new(1.0, Vec2::zero()),
            AlgebraElement::new(0.5, Vec2::new(0.0, 2.0)),
        )
        .unwrap();
        let s = Ars::new(field_for(theta), delta).unwrap();
        let r = classify(&s).unwrap();
        assert_eq!(r.cls, CanonicalClass::C1);
        assert!((r.normalizer.eps() + 1.0).abs() < 1e-15);
        assert!((r.normalizer.p() - Mat2::new(0.0, -2.0, -2.0, 0.0)).norm_max() < 1e-10);
        assert!(r.isometry_residual < 1e-8);
    }

    #[test]
    fn euclidean_flag_and_norm_eta() {
        let theta = ThetaForm::diagonal(0.0).unwrap();
        let x = LinearField::new(theta, Vec2::new(0.3, 0.0), Mat2::diag(0.5, 0.7)).unwrap();
        let c = canonical_ars(CanonicalClass::C2, x, 0.0).unwrap();
        let r = classify(&c).unwrap();
        assert!(r.euclidean);
        assert_eq!(r.cls, CanonicalClass::C2);
        assert_eq!(r.sigma, 0.0);
        // at sigma = 0 both closed forms coincide at 1
        assert_eq!(r.norm_eta_match, NormEtaMatch::Both);

        let c2 = canonical_ars(CanonicalClass::C2, x, 0.9).unwrap();
        let r2 = classify(&c2).unwrap();
        assert_eq!(r2.norm_eta_match, NormEtaMatch::Sqrt);
        assert!((r2.norm_eta - (1.0f64 + 0.81).sqrt()).abs() < 1e-10);
    }

    #[test]
    fn rank_gate() {
        // rank-one field: A = 0, xi != 0
        let theta = ThetaForm::diagonal(0.0).unwrap();
        let x = LinearField::new(theta, Vec2::new(1.0, 0.0), Mat2::zero()).unwrap();
        let delta = Distribution::new(
            AlgebraElement::new(1.0, Vec2::zero()),
            AlgebraElement::new(0.0, Vec2::new(0.0, 1.0)),
        )
        .unwrap();
        let s = Ars::new(x, delta).unwrap();
        assert!(matches!(classify(&s), Err(Error::RankError)));
        assert!(matches!(
            canonical_ars(CanonicalClass::C1, x, 0.5),
            Err(Error::RankError)
        ));
    }

    #[test]
    fn automorphism_fit_disjointness() {
        let e1 = Vec2::new(1.0, 0.0);
        let e2 = Vec2::new(0.0, 1.0);
        let e12 = Vec2::new(1.0, 1.0);
        // within a class: feasible
        assert!(automorphism_fit(ThetaForm::jordan(), e1, e1).is_some());
        assert!(automorphism_fit(ThetaForm::diagonal(0.3).unwrap(), e12, e12).is_some());
        // across classes: infeasible, mirroring the disjointness proof
        assert!(automorphism_fit(ThetaForm::jordan(), e12, e1).is_none());
        assert!(automorphism_fit(ThetaForm::jordan(), e1, e12).is_none());
        assert!(automorphism_fit(ThetaForm::diagonal(-1.0).unwrap(), e12, e1).is_none());
        assert!(automorphism_fit(ThetaForm::diagonal(0.3).unwrap(), e1, e2).is_none());
        assert!(automorphism_fit(ThetaForm::diagonal(0.3).unwrap(), e1, e12).is_none());
        assert!(automorphism_fit(ThetaForm::diagonal(0.3).unwrap(), e2, e12).is_none());
        // Diagonal(1): everything is one class, the fit always exists
        let (eps, p) = automorphism_fit(ThetaForm::diagonal(1.0).unwrap(), e1, e12).unwrap();
        assert_eq!(eps, 1.0);
        assert!((p * e1).cross(e12).abs() < 1e-12);
        assert!(p.det().abs() > 1e-12);
    }

    #[test]
    fn fit_result_is_a_valid_automorphism_matrix() {
        // anticommutant fit for Diagonal(-1): e1 to e2 stays inside class 1
        let theta = ThetaForm::diagonal(-1.0).unwrap();
        let e1 = Vec2::new(1.0, 0.0);
        let e2 = Vec2::new(0.0, 1.0);
        let (eps, p) = automorphism_fit(theta, e1, e2).unwrap();
        let th = theta_matrix(theta);
        let twist = p * th - th * p * eps;
        assert!(twist.norm_max() < 1e-12);
        assert!((p * e1).cross(e2).abs() < 1e-12);
    }

    #[test]
    fn canonical_structures_have_nonempty_locus_complement() {
        let theta = ThetaForm::jordan();
        let c = canonical_ars(CanonicalClass::C3, field_for(theta), 1.0).unwrap();
        let mut nonzero = false;
        for k in 0..8 {
            let p = GroupPoint::new(0.3 * k as f64 - 1.0, Vec2::new(0.5, -0.25 * k as f64));
            if locus_f(&c, p).abs() > 1e-9 {
                nonzero = true;
            }
        }
        assert!(nonzero);
    }
}
