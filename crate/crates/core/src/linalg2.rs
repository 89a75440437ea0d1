//! Closed-form 2×2 linear algebra: matrix exponential, the Λ (phi-1)
//! operator, commutation tests and the canonical theta matrices, plus the
//! small 3×3 companions used for Jacobians and minimum-norm solves.
//!
//! The exponential and Λ are evaluated analytically per eigenvalue branch
//! (distinct real, complex pair, repeated) with series fallbacks near
//! coalescence, so both are total functions with no matrix inversion.

use crate::error::{Error, Result};
use std::ops::{Add, Mul, Neg, Sub};

/// Column vector in R².
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Vec2 { x, y }
    }

    pub const fn zero() -> Self {
        Vec2 { x: 0.0, y: 0.0 }
    }

    pub fn dot(self, o: Vec2) -> f64 {
        self.x * o.x + self.y * o.y
    }

    /// Euclidean norm.
    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    /// Cross product z-component; zero iff the vectors are parallel.
    pub fn cross(self, o: Vec2) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    fn add(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    fn sub(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x - o.x, self.y - o.y)
    }
}

impl Neg for Vec2 {
    type Output = Vec2;
    fn neg(self) -> Vec2 {
        Vec2::new(-self.x, -self.y)
    }
}

impl Mul<f64> for Vec2 {
    type Output = Vec2;
    fn mul(self, s: f64) -> Vec2 {
        Vec2::new(self.x * s, self.y * s)
    }
}

/// 2×2 real matrix, row-major.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Mat2 {
    pub m: [[f64; 2]; 2],
}

impl Mat2 {
    pub const fn new(a: f64, b: f64, c: f64, d: f64) -> Self {
        Mat2 { m: [[a, b], [c, d]] }
    }

    pub const fn identity() -> Self {
        Mat2::new(1.0, 0.0, 0.0, 1.0)
    }

    pub const fn zero() -> Self {
        Mat2::new(0.0, 0.0, 0.0, 0.0)
    }

    pub const fn diag(a: f64, d: f64) -> Self {
        Mat2::new(a, 0.0, 0.0, d)
    }

    pub fn tr(self) -> f64 {
        self.m[0][0] + self.m[1][1]
    }

    pub fn det(self) -> f64 {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]
    }

    /// Largest entry magnitude.
    pub fn norm_max(self) -> f64 {
        self.m
            .iter()
            .flatten()
            .fold(0.0f64, |acc, &x| acc.max(x.abs()))
    }

    pub fn is_finite(self) -> bool {
        self.m.iter().flatten().all(|x| x.is_finite())
    }

    /// Inverse; `None` when the determinant vanishes.
    pub fn inverse(self) -> Option<Mat2> {
        let d = self.det();
        if d == 0.0 || !d.is_finite() {
            return None;
        }
        Some(Mat2::new(
            self.m[1][1] / d,
            -self.m[0][1] / d,
            -self.m[1][0] / d,
            self.m[0][0] / d,
        ))
    }

    pub fn col(self, j: usize) -> Vec2 {
        Vec2::new(self.m[0][j], self.m[1][j])
    }
}

impl Add for Mat2 {
    type Output = Mat2;
    fn add(self, o: Mat2) -> Mat2 {
        Mat2::new(
            self.m[0][0] + o.m[0][0],
            self.m[0][1] + o.m[0][1],
            self.m[1][0] + o.m[1][0],
            self.m[1][1] + o.m[1][1],
        )
    }
}

impl Sub for Mat2 {
    type Output = Mat2;
    fn sub(self, o: Mat2) -> Mat2 {
        Mat2::new(
            self.m[0][0] - o.m[0][0],
            self.m[0][1] - o.m[0][1],
            self.m[1][0] - o.m[1][0],
            self.m[1][1] - o.m[1][1],
        )
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, o: Mat2) -> Mat2 {
        let a = &self.m;
        let b = &o.m;
        Mat2::new(
            a[0][0] * b[0][0] + a[0][1] * b[1][0],
            a[0][0] * b[0][1] + a[0][1] * b[1][1],
            a[1][0] * b[0][0] + a[1][1] * b[1][0],
            a[1][0] * b[0][1] + a[1][1] * b[1][1],
        )
    }
}

impl Mul<Vec2> for Mat2 {
    type Output = Vec2;
    fn mul(self, v: Vec2) -> Vec2 {
        Vec2::new(
            self.m[0][0] * v.x + self.m[0][1] * v.y,
            self.m[1][0] * v.x + self.m[1][1] * v.y,
        )
    }
}

impl Mul<f64> for Mat2 {
    type Output = Mat2;
    fn mul(self, s: f64) -> Mat2 {
        Mat2::new(
            self.m[0][0] * s,
            self.m[0][1] * s,
            self.m[1][0] * s,
            self.m[1][1] * s,
        )
    }
}

impl Neg for Mat2 {
    type Output = Mat2;
    fn neg(self) -> Mat2 {
        self * -1.0
    }
}

/// 3×3 real matrix, row-major. Used for differentials on `R x R²`, indexed
/// so that component 0 is the t-direction and components 1, 2 the v-plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat3 {
    pub m: [[f64; 3]; 3],
}

impl Mat3 {
    pub const fn new(m: [[f64; 3]; 3]) -> Self {
        Mat3 { m }
    }

    pub const fn identity() -> Self {
        Mat3::new([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]])
    }

    /// Block matrix [[a, r], [c, p]] with scalar `a`, row `r`, column `c`.
    pub fn from_blocks(a: f64, r: Vec2, c: Vec2, p: Mat2) -> Self {
        Mat3::new([
            [a, r.x, r.y],
            [c.x, p.m[0][0], p.m[0][1]],
            [c.y, p.m[1][0], p.m[1][1]],
        ])
    }

    /// Apply to a tangent triple (dt, dv).
    pub fn apply(self, dt: f64, dv: Vec2) -> (f64, Vec2) {
        let t = self.m[0][0] * dt + self.m[0][1] * dv.x + self.m[0][2] * dv.y;
        let x = self.m[1][0] * dt + self.m[1][1] * dv.x + self.m[1][2] * dv.y;
        let y = self.m[2][0] * dt + self.m[2][1] * dv.x + self.m[2][2] * dv.y;
        (t, Vec2::new(x, y))
    }

    pub fn col(self, j: usize) -> [f64; 3] {
        [self.m[0][j], self.m[1][j], self.m[2][j]]
    }

    pub fn norm_max(self) -> f64 {
        self.m
            .iter()
            .flatten()
            .fold(0.0f64, |acc, &x| acc.max(x.abs()))
    }
}

impl Mul for Mat3 {
    type Output = Mat3;
    fn mul(self, o: Mat3) -> Mat3 {
        let mut r = [[0.0; 3]; 3];
        for (i, row) in r.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = (0..3).map(|k| self.m[i][k] * o.m[k][j]).sum();
            }
        }
        Mat3::new(r)
    }
}

impl Sub for Mat3 {
    type Output = Mat3;
    fn sub(self, o: Mat3) -> Mat3 {
        let mut r = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                r[i][j] = self.m[i][j] - o.m[i][j];
            }
        }
        Mat3::new(r)
    }
}

/// The three canonical families of theta matrices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThetaFamily {
    Jordan,
    Diagonal,
    Rotation,
}

/// Canonical theta data: a family tag plus the parameter gamma.
///
/// Jordan carries no parameter (gamma is stored as 0 and ignored); the
/// diagonal family requires gamma in `[-1, 1]`; rotation allows any gamma.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThetaForm {
    family: ThetaFamily,
    gamma: f64,
}

impl ThetaForm {
    pub fn jordan() -> Self {
        ThetaForm { family: ThetaFamily::Jordan, gamma: 0.0 }
    }

    pub fn diagonal(gamma: f64) -> Result<Self> {
        if !gamma.is_finite() {
            return Err(Error::NonFinite);
        }
        if !(-1.0..=1.0).contains(&gamma) {
            return Err(Error::GammaOutOfRange(gamma));
        }
        Ok(ThetaForm { family: ThetaFamily::Diagonal, gamma })
    }

    pub fn rotation(gamma: f64) -> Result<Self> {
        if !gamma.is_finite() {
            return Err(Error::NonFinite);
        }
        Ok(ThetaForm { family: ThetaFamily::Rotation, gamma })
    }

    pub fn family(self) -> ThetaFamily {
        self.family
    }

    pub fn gamma(self) -> f64 {
        self.gamma
    }

    /// Trace of the theta matrix; automorphisms may reverse time only when
    /// this is zero.
    pub fn trace(self) -> f64 {
        match self.family {
            ThetaFamily::Jordan => 2.0,
            ThetaFamily::Diagonal => 1.0 + self.gamma,
            ThetaFamily::Rotation => 2.0 * self.gamma,
        }
    }
}

/// The matrix of a canonical theta form.
pub fn theta_matrix(form: ThetaForm) -> Mat2 {
    match form.family {
        ThetaFamily::Jordan => Mat2::new(1.0, 1.0, 0.0, 1.0),
        ThetaFamily::Diagonal => Mat2::diag(1.0, form.gamma),
        ThetaFamily::Rotation => Mat2::new(form.gamma, -1.0, 1.0, form.gamma),
    }
}

// Every 2×2 matrix splits as A = m I + B with B² = d I, where m is half the
// trace and d the quarter discriminant. The exponential and Λ reduce to
// scalar functions of (m t, d t²) on that split.
struct Split {
    m: f64,
    b: Mat2,
    d: f64,
    // routes near-coalescent eigenvalues to the series branch
    small_disc: bool,
}

fn split(a: Mat2) -> Split {
    let tr = a.tr();
    let m = 0.5 * tr;
    let b = a - Mat2::identity() * m;
    let disc = tr * tr - 4.0 * a.det();
    Split {
        m,
        b,
        d: 0.25 * disc,
        small_disc: disc.abs() < 1e-8 * (1.0 + tr * tr),
    }
}

// (e^z - 1)/z, series-guarded near zero.
fn expm1_over(z: f64) -> f64 {
    if z.abs() < 1e-4 {
        1.0 + z * (0.5 + z * (1.0 / 6.0 + z * (1.0 / 24.0 + z * (1.0 / 120.0 + z / 720.0))))
    } else {
        z.exp_m1() / z
    }
}

// g(lambda, t) = integral of e^{lambda s} over [0, t] = t * expm1_over(lambda t).
fn int_exp(lambda: f64, t: f64) -> f64 {
    t * expm1_over(lambda * t)
}

// I_n(m, t) = integral of e^{m s} s^n over [0, t].
//
// For |m t| <= 8 the everywhere-convergent series sum_j m^j t^{n+j+1} /
// (j! (n+j+1)) is used; beyond that the upward recurrence from I_0 is stable
// because each step divides by the large m.
fn int_exp_poly(m: f64, t: f64, n: u32) -> f64 {
    if (m * t).abs() <= 8.0 {
        let mut sum = 0.0;
        let mut coef = 1.0; // m^j / j!
        let mut pow = t.powi(n as i32 + 1); // t^{n+j+1}
        for j in 0..200u32 {
            let term = coef * pow / (n + j + 1) as f64;
            sum += term;
            if term.abs() <= 1e-18 * sum.abs() + 1e-300 {
                break;
            }
            coef *= m / (j + 1) as f64;
            pow *= t;
        }
        sum
    } else {
        let e = (m * t).exp();
        let mut i = (e - 1.0) / m;
        let mut tp = 1.0; // t^k
        for k in 1..=n {
            tp *= t;
            i = (tp * e - k as f64 * i) / m;
        }
        i
    }
}

/// Matrix exponential `e^{tA}` via closed-form eigenvalue branches.
///
/// Total function: distinct real and complex-pair branches use hyperbolic
/// and trigonometric closed forms, while near-repeated eigenvalues (and
/// small scaled arguments) fall back to a truncated series that is exact in
/// the limit.
pub fn expm2(a: Mat2, t: f64) -> Mat2 {
    let Split { m, b, d, small_disc } = split(a);
    let u = d * t * t;
    let (c, s) = if small_disc || u.abs() < 1e-4 {
        // C(u) = sum u^k/(2k)!, S(u) = sum u^k/(2k+1)!
        let c = 1.0 + u * (0.5 + u * (1.0 / 24.0 + u * (1.0 / 720.0 + u * (1.0 / 40320.0 + u / 3628800.0))));
        let s = 1.0 + u * (1.0 / 6.0 + u * (1.0 / 120.0 + u * (1.0 / 5040.0 + u * (1.0 / 362880.0 + u / 39916800.0))));
        (c, s)
    } else if d > 0.0 {
        let w = d.sqrt() * t;
        (w.cosh(), w.sinh() / w)
    } else {
        let w = (-d).sqrt() * t;
        (w.cos(), w.sin() / w)
    };
    let scale = (m * t).exp();
    (Mat2::identity() * c + b * (t * s)) * scale
}

/// The Λ operator as a matrix: `lambda_op(A, t) · w = ∫₀ᵗ e^{sA} w ds`.
///
/// Never inverts `A`; each branch integrates the closed form of `e^{sA}`
/// analytically, with a series fallback when the eigenvalue-scaled argument
/// is small.
pub fn lambda_op(a: Mat2, t: f64) -> Mat2 {
    let Split { m, b, d, small_disc } = split(a);
    let u = d * t * t;
    let (p, q) = if small_disc || u.abs() < 1e-4 {
        // Lambda = p I + q B with p = sum d^k I_{2k}/(2k)!,
        // q = sum d^k I_{2k+1}/(2k+1)!; four terms suffice at |u| < 1e-4.
        let p = int_exp_poly(m, t, 0)
            + d * (int_exp_poly(m, t, 2) / 2.0
                + d * (int_exp_poly(m, t, 4) / 24.0 + d * int_exp_poly(m, t, 6) / 720.0));
        let q = int_exp_poly(m, t, 1)
            + d * (int_exp_poly(m, t, 3) / 6.0
                + d * (int_exp_poly(m, t, 5) / 120.0 + d * int_exp_poly(m, t, 7) / 5040.0));
        (p, q)
    } else if d > 0.0 {
        let sd = d.sqrt();
        let gp = int_exp(m + sd, t);
        let gm = int_exp(m - sd, t);
        (0.5 * (gp + gm), (gp - gm) / (2.0 * sd))
    } else {
        // complex pair m ± i w: g = (e^{(m+iw)t} - 1)/(m + i w)
        let w = (-d).sqrt();
        let e = (m * t).exp();
        let re = e * (w * t).cos() - 1.0;
        let im = e * (w * t).sin();
        let den = m * m + w * w;
        ((re * m + im * w) / den, (im * m - re * w) / (den * w))
    };
    Mat2::identity() * p + b * q
}

/// Relative commutation test: `‖AB − BA‖_max ≤ tol · (1 + ‖A‖‖B‖)`.
pub fn commutes(a: Mat2, b: Mat2, tol: f64) -> bool {
    let comm = a * b - b * a;
    comm.norm_max() <= tol * (1.0 + a.norm_max() * b.norm_max())
}

/// Basis of the commutant `{A : A theta = theta A}`.
///
/// Jordan and rotation commutants are two-dimensional; the diagonal family
/// is two-dimensional except at gamma = 1 where everything commutes.
pub fn commutant_basis(form: ThetaForm) -> Vec<Mat2> {
    match form.family {
        ThetaFamily::Jordan => vec![Mat2::identity(), Mat2::new(0.0, 1.0, 0.0, 0.0)],
        ThetaFamily::Diagonal => {
            if form.gamma == 1.0 {
                vec![
                    Mat2::new(1.0, 0.0, 0.0, 0.0),
                    Mat2::new(0.0, 1.0, 0.0, 0.0),
                    Mat2::new(0.0, 0.0, 1.0, 0.0),
                    Mat2::new(0.0, 0.0, 0.0, 1.0),
                ]
            } else {
                vec![Mat2::diag(1.0, 0.0), Mat2::diag(0.0, 1.0)]
            }
        }
        ThetaFamily::Rotation => vec![Mat2::identity(), Mat2::new(0.0, -1.0, 1.0, 0.0)],
    }
}

/// Basis of the anticommutant `{P : P theta = -theta P}`.
///
/// Nonempty only for diagonal gamma in {-1, 0} and rotation gamma = 0; the
/// time-reversing automorphisms (eps = -1) draw their P from here, and those
/// additionally require trace zero, which rules the diagonal gamma = 0 case
/// out.
pub fn anticommutant_basis(form: ThetaForm) -> Vec<Mat2> {
    match form.family {
        ThetaFamily::Jordan => vec![],
        ThetaFamily::Diagonal => {
            if form.gamma == -1.0 {
                vec![Mat2::new(0.0, 1.0, 0.0, 0.0), Mat2::new(0.0, 0.0, 1.0, 0.0)]
            } else if form.gamma == 0.0 {
                vec![Mat2::new(0.0, 0.0, 0.0, 1.0)]
            } else {
                vec![]
            }
        }
        ThetaFamily::Rotation => {
            if form.gamma == 0.0 {
                vec![Mat2::diag(1.0, -1.0), Mat2::new(0.0, 1.0, 1.0, 0.0)]
            } else {
                vec![]
            }
        }
    }
}

/// Singular values of a 2×3 matrix (rows given), largest first.
///
/// Uses the closed-form symmetric eigendecomposition of `M Mᵀ`; the smaller
/// value is computed by the cancellation-free quotient form.
pub fn singular_values_2x3(rows: [[f64; 3]; 2]) -> (f64, f64) {
    let dot = |a: &[f64; 3], b: &[f64; 3]| a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
    // the Gram determinant aa*bb - ab*ab cancels catastrophically on nearly
    // rank-one input; the product of singular values is instead taken as
    // |a| * |b - proj_a b|, which keeps absolute error at machine level
    let (a, b) = if dot(&rows[0], &rows[0]) >= dot(&rows[1], &rows[1]) {
        (rows[0], rows[1])
    } else {
        (rows[1], rows[0])
    };
    let na2 = dot(&a, &a);
    if na2 == 0.0 {
        return (0.0, 0.0);
    }
    let c = dot(&a, &b) / na2;
    let perp = [b[0] - c * a[0], b[1] - c * a[1], b[2] - c * a[2]];
    let vol = na2.sqrt() * dot(&perp, &perp).sqrt();
    let tr = na2 + dot(&b, &b);
    let disc = (tr * tr - 4.0 * vol * vol).max(0.0).sqrt();
    let s1 = (0.5 * (tr + disc)).sqrt();
    let s2 = if s1 > 0.0 { vol / s1 } else { 0.0 };
    (s1, s2)
}

/// Singular value decomposition of a 3×3 matrix by one-sided Jacobi.
#[derive(Debug, Clone, Copy)]
pub struct Svd3 {
    /// Singular values, descending.
    pub s: [f64; 3],
    /// Left singular vectors as columns; columns with zero singular value
    /// are zeroed.
    pub u: Mat3,
    /// Right singular vectors as columns.
    pub v: Mat3,
}

/// One-sided Jacobi SVD. Small and deterministic; achieves high relative
/// accuracy for the tiny singular values the locus detection relies on.
pub fn svd3(a: Mat3) -> Svd3 {
    let mut w = [a.col(0), a.col(1), a.col(2)];
    let mut v = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]; // columns
    let dot = |a: &[f64; 3], b: &[f64; 3]| a[0] * b[0] + a[1] * b[1] + a[2] * b[2];

    for _sweep in 0..60 {
        let mut rotated = false;
        for p in 0..2 {
            for q in (p + 1)..3 {
                let app = dot(&w[p], &w[p]);
                let aqq = dot(&w[q], &w[q]);
                let apq = dot(&w[p], &w[q]);
                if apq.abs() <= 1e-15 * (app * aqq).sqrt() + 1e-300 {
                    continue;
                }
                rotated = true;
                let zeta = (aqq - app) / (2.0 * apq);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for i in 0..3 {
                    let wp = w[p][i];
                    let wq = w[q][i];
                    w[p][i] = c * wp - s * wq;
                    w[q][i] = s * wp + c * wq;
                    let vp = v[p][i];
                    let vq = v[q][i];
                    v[p][i] = c * vp - s * vq;
                    v[q][i] = s * vp + c * vq;
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let mut order = [0usize, 1, 2];
    let norms = [dot(&w[0], &w[0]).sqrt(), dot(&w[1], &w[1]).sqrt(), dot(&w[2], &w[2]).sqrt()];
    order.sort_by(|&i, &j| norms[j].partial_cmp(&norms[i]).unwrap());

    let mut s = [0.0; 3];
    let mut u = [[0.0; 3]; 3];
    let mut vv = [[0.0; 3]; 3];
    for (k, &i) in order.iter().enumerate() {
        s[k] = norms[i];
        for r in 0..3 {
            u[r][k] = if norms[i] > 0.0 { w[i][r] / norms[i] } else { 0.0 };
            vv[r][k] = v[i][r];
        }
    }
    complete_left(&mut u, s);
    Svd3 { s, u: Mat3::new(u), v: Mat3::new(vv) }
}

// Replace left columns belonging to (near-)zero singular values by an
// orthonormal completion, so rank-deficient inputs still expose a usable
// normal direction to their column span.
fn complete_left(u: &mut [[f64; 3]; 3], s: [f64; 3]) {
    let tiny = s[0] * 1e-15;
    let col = |u: &[[f64; 3]; 3], k: usize| [u[0][k], u[1][k], u[2][k]];
    let set = |u: &mut [[f64; 3]; 3], k: usize, c: [f64; 3]| {
        for r in 0..3 {
            u[r][k] = c[r];
        }
    };
    if s[0] <= tiny {
        *u = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
        return;
    }
    if s[1] <= tiny {
        // any unit vector orthogonal to u1: cross with the least-aligned axis
        let a = col(u, 0);
        let axis = if a[0].abs() <= a[1].abs() && a[0].abs() <= a[2].abs() {
            [1.0, 0.0, 0.0]
        } else if a[1].abs() <= a[2].abs() {
            [0.0, 1.0, 0.0]
        } else {
            [0.0, 0.0, 1.0]
        };
        let c = cross3(a, axis);
        let n = (c[0] * c[0] + c[1] * c[1] + c[2] * c[2]).sqrt();
        set(u, 1, [c[0] / n, c[1] / n, c[2] / n]);
    }
    if s[2] <= tiny {
        let c = cross3(col(u, 0), col(u, 1));
        let n = (c[0] * c[0] + c[1] * c[1] + c[2] * c[2]).sqrt();
        if n > 0.5 {
            set(u, 2, [c[0] / n, c[1] / n, c[2] / n]);
        }
    }
}

fn cross3(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

/// Minimum-norm least-squares solve of `M x = b` with the spec'd rank cutoff
/// `1e-9 · sigma_max`. Returns the coefficient vector, its residual and the
/// singular values.
pub fn min_norm_solve3(m: Mat3, b: [f64; 3]) -> ([f64; 3], f64, [f64; 3]) {
    let Svd3 { s, u, v } = svd3(m);
    let cutoff = 1e-9 * s[0];
    let mut x = [0.0; 3];
    for k in 0..3 {
        if s[k] > cutoff && s[k] > 0.0 {
            let uk = u.col(k);
            let c = (uk[0] * b[0] + uk[1] * b[1] + uk[2] * b[2]) / s[k];
            let vk = v.col(k);
            for r in 0..3 {
                x[r] += c * vk[r];
            }
        }
    }
    let mut res = 0.0f64;
    for i in 0..3 {
        let mi = m.m[i][0] * x[0] + m.m[i][1] * x[1] + m.m[i][2] * x[2];
        res += (mi - b[i]) * (mi - b[i]);
    }
    (x, res.sqrt(), s)
}
