//! Distributions with declared orthonormal bases, the rank condition, ARS
//! assembly and validation, the almost-Riemannian norm, and the singular
//! locus as an implicit function with slice extraction and crossing
//! diagnostics.

use crate::error::{Error, Result};
use crate::fields::{derivation_of, eval_linear, flow, LinearField};
use crate::group::{d_left, exp_g, mul, rho, AlgebraElement, GroupPoint, Tangent};
use crate::linalg2::{min_norm_solve3, singular_values_2x3, Mat3, ThetaForm, Vec2};
use crate::sample::{sample_point, DEFAULT_SEED};
use crate::DEFAULT_TOL;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub use crate::group::bracket;

fn adot(a: AlgebraElement, b: AlgebraElement) -> f64 {
    a.alpha * b.alpha + a.eta.dot(b.eta)
}

fn ascale(a: AlgebraElement, s: f64) -> AlgebraElement {
    AlgebraElement::new(a.alpha * s, a.eta * s)
}

/// A 2D subspace of the Lie algebra with a declared orthonormal basis.
///
/// The metric on the distribution is carried entirely by the declaration:
/// (b1, b2) are unit and mutually orthogonal *by definition*, whatever their
/// coordinates. Gram-described bases are orthonormalized at construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Distribution {
    b1: AlgebraElement,
    b2: AlgebraElement,
}

impl Distribution {
    /// Declare (b1, b2) an orthonormal basis. Requires linear independence
    /// and that the span differs from the nilradical plane.
    pub fn new(b1: AlgebraElement, b2: AlgebraElement) -> Result<Self> {
        if !b1.is_finite() || !b2.is_finite() {
            return Err(Error::NonFinite);
        }
        let rows = [
            [b1.alpha, b1.eta.x, b1.eta.y],
            [b2.alpha, b2.eta.x, b2.eta.y],
        ];
        let (s1, s2) = singular_values_2x3(rows);
        if s2 <= 1e-9 * s1 {
            return Err(Error::DegenerateBasis);
        }
        if b1.alpha == 0.0 && b2.alpha == 0.0 {
            return Err(Error::NilradicalDistribution);
        }
        Ok(Distribution { b1, b2 })
    }

    /// Span of (c1, c2) with inner product described by the Gram matrix
    /// `gram[i][j] = ⟨c_i, c_j⟩`; Gram–Schmidt converts to a declared
    /// orthonormal basis of the same span with the same metric.
    pub fn from_gram(c1: AlgebraElement, c2: AlgebraElement, gram: [[f64; 2]; 2]) -> Result<Self> {
        let g = &gram;
        let scale = g.iter().flatten().fold(0.0f64, |a, &x| a.max(x.abs()));
        if !scale.is_finite() {
            return Err(Error::NonFinite);
        }
        if (g[0][1] - g[1][0]).abs() > 1e-12 * (1.0 + scale) {
            return Err(Error::GramNotPositive);
        }
        let det = g[0][0] * g[1][1] - g[0][1] * g[1][0];
        if g[0][0] <= 0.0 || det <= 0.0 {
            return Err(Error::GramNotPositive);
        }
        let u1 = ascale(c1, 1.0 / g[0][0].sqrt());
        // subtract the projection onto c1, then normalize in the Gram metric
        let w = AlgebraElement::new(
            c2.alpha - (g[0][1] / g[0][0]) * c1.alpha,
            c2.eta - c1.eta * (g[0][1] / g[0][0]),
        );
        let w_norm2 = g[1][1] - g[0][1] * g[0][1] / g[0][0];
        if w_norm2 <= 0.0 {
            return Err(Error::GramNotPositive);
        }
        let u2 = ascale(w, 1.0 / w_norm2.sqrt());
        Distribution::new(u1, u2)
    }

    pub fn b1(&self) -> AlgebraElement {
        self.b1
    }

    pub fn b2(&self) -> AlgebraElement {
        self.b2
    }

    /// Euclidean-least-squares coordinates of x in span{b1, b2} plus the
    /// residual distance to the span.
    pub fn coords(&self, x: AlgebraElement) -> ((f64, f64), f64) {
        let g11 = adot(self.b1, self.b1);
        let g12 = adot(self.b1, self.b2);
        let g22 = adot(self.b2, self.b2);
        let det = g11 * g22 - g12 * g12;
        let r1 = adot(self.b1, x);
        let r2 = adot(self.b2, x);
        let c1 = (g22 * r1 - g12 * r2) / det;
        let c2 = (g11 * r2 - g12 * r1) / det;
        let diff = AlgebraElement::new(
            x.alpha - c1 * self.b1.alpha - c2 * self.b2.alpha,
            x.eta - self.b1.eta * c1 - self.b2.eta * c2,
        );
        ((c1, c2), diff.norm())
    }

    /// Membership in the span up to a relative residual.
    pub fn contains(&self, x: AlgebraElement, tol: f64) -> bool {
        let (_, res) = self.coords(x);
        res <= tol * (1.0 + x.norm())
    }

    /// The same plane with both basis vectors scaled by r, i.e. the metric
    /// divided by r on each declared-unit direction.
    pub fn scaled(&self, r: f64) -> Result<Self> {
        if r == 0.0 || !r.is_finite() {
            return Err(Error::NonFinite);
        }
        Distribution::new(ascale(self.b1, r), ascale(self.b2, r))
    }
}

/// True iff `[b1, b2]` lies back in the span of (b1, b2).
pub fn is_subalgebra(theta: ThetaForm, delta: &Distribution, tol: f64) -> bool {
    let br = bracket(theta, delta.b1(), delta.b2());
    delta.contains(br, tol)
}

/// Lie algebra rank condition for the pair (Delta, X): either Delta is not
/// a subalgebra, or it is one and the derivation D = [[0,0],[xi,A]] moves it
/// off itself.
pub fn larc(delta: &Distribution, x: &LinearField) -> bool {
    let theta = x.theta();
    if !is_subalgebra(theta, delta, DEFAULT_TOL) {
        return true;
    }
    let d = derivation_of(x);
    let inside = delta.contains(d.apply(delta.b1()), DEFAULT_TOL)
        && delta.contains(d.apply(delta.b2()), DEFAULT_TOL);
    !inside
}

/// Generator of the line `Delta ∩ n(theta)`, normalized to unit length with
/// its first nonzero coordinate positive.
pub fn nilradical_line(delta: &Distribution) -> Result<Vec2> {
    let b1 = delta.b1();
    let b2 = delta.b2();
    let eta = b1.eta * b2.alpha - b2.eta * b1.alpha;
    let n = eta.norm();
    if n <= 1e-12 * (b1.norm() * b2.norm() + 1e-300) {
        return Err(Error::NilradicalLineMissing);
    }
    let u = eta * (1.0 / n);
    let sign = if u.x.abs() > 1e-12 {
        u.x.signum()
    } else {
        u.y.signum()
    };
    Ok(u * sign)
}

/// An almost-Riemannian structure `Σ = {X, Δ^L}` on G(theta): a linear field
/// plus a rank-varying distribution spanned by X and the left-invariant
/// extensions of the declared orthonormal basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ars {
    x: LinearField,
    delta: Distribution,
    eta_star: Vec2,
}

impl Ars {
    /// Validate and assemble. Checks, in order: the nilradical line exists,
    /// the rank condition holds, and the locus function is not identically
    /// zero (certified on 64 seeded probe points).
    pub fn new(x: LinearField, delta: Distribution) -> Result<Self> {
        let eta_star = nilradical_line(&delta)?;
        let s = Ars { x, delta, eta_star };
        if !larc(&delta, &x) {
            return Err(Error::LarcFailure);
        }
        if !s.complement_nonempty() {
            return Err(Error::EmptyComplement);
        }
        Ok(s)
    }

    pub fn theta(&self) -> ThetaForm {
        self.x.theta()
    }

    pub fn field(&self) -> &LinearField {
        &self.x
    }

    pub fn distribution(&self) -> &Distribution {
        &self.delta
    }

    /// Cached unit generator of `Delta ∩ n(theta)`.
    pub fn eta_star(&self) -> Vec2 {
        self.eta_star
    }

    /// The structure with its metric rescaled: both declared-orthonormal
    /// basis vectors multiplied by r, which divides distribution norms by r.
    pub fn scale_metric(&self, r: f64) -> Result<Ars> {
        Ars::new(self.x, self.delta.scaled(r)?)
    }

    // probabilistic nonemptiness certificate for G \ Z; analyticity of F
    // justifies the fixed 64-point probe
    fn complement_nonempty(&self) -> bool {
        let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED);
        let mut max_abs = 0.0f64;
        for _ in 0..64 {
            let p = sample_point(&mut rng, 2.0, 2.0);
            max_abs = max_abs.max(locus_f(self, p).abs());
        }
        max_abs > 1e-12
    }
}

/// The spanning frame at p: `(X(p), dL_p b1, dL_p b2)`.
pub fn frame_at(sigma: &Ars, p: GroupPoint) -> (Tangent, Tangent, Tangent) {
    (
        eval_linear(sigma.field(), p),
        d_left(sigma.theta(), p, sigma.distribution().b1()),
        d_left(sigma.theta(), p, sigma.distribution().b2()),
    )
}

fn frame_matrix(sigma: &Ars, p: GroupPoint) -> Mat3 {
    let (f0, f1, f2) = frame_at(sigma, p);
    Mat3::new([
        [f0.dt, f1.dt, f2.dt],
        [f0.dv.x, f1.dv.x, f2.dv.x],
        [f0.dv.y, f1.dv.y, f2.dv.y],
    ])
}

/// The almost-Riemannian norm of a tangent vector at p: the least Euclidean
/// norm of a coefficient triple writing Z in the frame (X(p), b1^L, b2^L);
/// `+∞` when Z is outside the frame's span (p on the locus only).
pub fn ar_norm(sigma: &Ars, p: GroupPoint, z: Tangent) -> f64 {
    let m = frame_matrix(sigma, p);
    let (alpha, residual, _) = min_norm_solve3(m, [z.dt, z.dv.x, z.dv.y]);
    if residual > 1e-8 * (1.0 + z.norm()) {
        return f64::INFINITY;
    }
    (alpha[0] * alpha[0] + alpha[1] * alpha[1] + alpha[2] * alpha[2]).sqrt()
}

/// Implicit locus function: `F(t, v) = det[A v + Λ^theta_t xi | rho_t η★]`,
/// whose zero set is the singular locus Z.
pub fn locus_f(sigma: &Ars, p: GroupPoint) -> f64 {
    let xv = eval_linear(sigma.field(), p).dv;
    let w = rho(sigma.theta(), p.t) * sigma.eta_star();
    xv.cross(w)
}

/// Result of scanning a curve for locus crossings.
#[derive(Debug, Clone, PartialEq)]
pub enum Crossings {
    /// Isolated crossing parameters, ascending.
    Roots(Vec<f64>),
    /// The whole sampled curve lies inside the locus.
    Contained,
}

/// Curve families along which crossings are scanned.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CurveKind {
    /// `s ↦ p0 · exp(s · gen)`.
    Exponential(AlgebraElement),
    /// `s ↦ φ_s(p0)`, the flow of the structure's own linear field.
    LinearFlow,
}

/// Scan `s ↦ F(curve(s))` on the interval for isolated zeros by sign scan
/// plus bisection, or report containment when |F| stays below the
/// containment threshold at all 512 samples. Errors when more than
/// `max_roots` isolated roots appear.
pub fn crossings(
    sigma: &Ars,
    curve: CurveKind,
    p0: GroupPoint,
    interval: (f64, f64),
    max_roots: usize,
) -> Result<Crossings> {
    let (a, b) = interval;
    let theta = sigma.theta();
    let at = |s: f64| -> GroupPoint {
        match curve {
            CurveKind::Exponential(gen) => mul(theta, p0, exp_g(theta, ascale(gen, s))),
            CurveKind::LinearFlow => flow(sigma.field(), s, p0),
        }
    };

    const N: usize = 512;
    let mut contained = true;
    let mut vals = [0.0f64; N];
    let mut params = [0.0f64; N];
    for (k, (val, par)) in vals.iter_mut().zip(params.iter_mut()).enumerate() {
        let s = a + (b - a) * k as f64 / (N - 1) as f64;
        let p = at(s);
        let f = locus_f(sigma, p);
        if f.abs() >= 1e-11 * (1.0 + p.coord_norm()) {
            contained = false;
        }
        *val = f;
        *par = s;
    }
    if contained {
        return Ok(Crossings::Contained);
    }

    let mut roots: Vec<f64> = Vec::new();
    let sgn = |f: f64| -> i32 {
        if f > 0.0 {
            1
        } else if f < 0.0 {
            -1
        } else {
            0
        }
    };
    for k in 0..N {
        if sgn(vals[k]) == 0 {
            roots.push(params[k]);
            continue;
        }
        if k + 1 < N && sgn(vals[k]) * sgn(vals[k + 1]) == -1 {
            let (mut lo, mut hi) = (params[k], params[k + 1]);
            let mut flo = vals[k];
            for _ in 0..100 {
                let mid = 0.5 * (lo + hi);
                let fm = locus_f(sigma, at(mid));
                if fm == 0.0 {
                    lo = mid;
                    hi = mid;
                    break;
                }
                if (fm > 0.0) == (flo > 0.0) {
                    lo = mid;
                    flo = fm;
                } else {
                    hi = mid;
                }
                if (hi - lo).abs() < 1e-15 * (1.0 + lo.abs()) {
                    break;
                }
            }
            roots.push(0.5 * (lo + hi));
        }
    }
    roots.sort_by(|x, y| x.partial_cmp(y).unwrap());
    roots.dedup_by(|x, y| (*x - *y).abs() < 1e-9);
    if roots.len() > max_roots {
        return Err(Error::TooManyCrossings { found: roots.len(), max_roots });
    }
    Ok(Crossings::Roots(roots))
}

/// Contour polylines of `v ↦ F(t, v)` on the window, by marching squares
/// with segment stitching. Window is `(v1_min, v1_max, v2_min, v2_max)`;
/// `resolution` is the per-axis sample count (≥ 2).
pub fn locus_slice(
    sigma: &Ars,
    t: f64,
    window: (f64, f64, f64, f64),
    resolution: usize,
) -> Vec<Vec<Vec2>> {
    assert!(resolution >= 2, "resolution must be at least 2");
    let (x0, x1, y0, y1) = window;
    assert!(x1 > x0 && y1 > y0, "window must be nonempty");
    let n = resolution;
    let dx = (x1 - x0) / (n - 1) as f64;
    let dy = (y1 - y0) / (n - 1) as f64;

    let mut f = vec![vec![0.0f64; n]; n];
    for (i, row) in f.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            let v = Vec2::new(x0 + dx * i as f64, y0 + dy * j as f64);
            *cell = locus_f(sigma, GroupPoint::new(t, v));
        }
    }

    // linear interpolation of the zero along a cell edge
    let lerp = |pa: Vec2, fa: f64, pb: Vec2, fb: f64| -> Vec2 {
        let w = if fa == fb { 0.5 } else { fa / (fa - fb) };
        Vec2::new(pa.x + (pb.x - pa.x) * w, pa.y + (pb.y - pa.y) * w)
    };

    let mut segments: Vec<(Vec2, Vec2)> = Vec::new();
    for i in 0..n - 1 {
        for j in 0..n - 1 {
            let p = [
                Vec2::new(x0 + dx * i as f64, y0 + dy * j as f64),
                Vec2::new(x0 + dx * (i + 1) as f64, y0 + dy * j as f64),
                Vec2::new(x0 + dx * (i + 1) as f64, y0 + dy * (j + 1) as f64),
                Vec2::new(x0 + dx * i as f64, y0 + dy * (j + 1) as f64),
            ];
            let fv = [f[i][j], f[i + 1][j], f[i + 1][j + 1], f[i][j + 1]];
            // treating 0 as positive gives a consistent closed contour
            let mut case = 0usize;
            for (k, &v) in fv.iter().enumerate() {
                if v >= 0.0 {
                    case |= 1 << k;
                }
            }
            let edge = |k: usize| -> Vec2 {
                let (a, b) = (k, (k + 1) % 4);
                lerp(p[a], fv[a], p[b], fv[b])
            };
            match case {
                0 | 15 => {}
                1 | 14 => segments.push((edge(3), edge(0))),
                2 | 13 => segments.push((edge(0), edge(1))),
                4 | 11 => segments.push((edge(1), edge(2))),
                8 | 7 => segments.push((edge(2), edge(3))),
                3 | 12 => segments.push((edge(3), edge(1))),
                6 | 9 => segments.push((edge(0), edge(2))),
                5 | 10 => {
                    // saddle: split by the center sample
                    let center = locus_f(
                        sigma,
                        GroupPoint::new(
                            t,
                            Vec2::new(p[0].x + 0.5 * dx, p[0].y + 0.5 * dy),
                        ),
                    );
                    let flip = (center >= 0.0) != (case == 5);
                    if flip {
                        segments.push((edge(3), edge(0)));
                        segments.push((edge(1), edge(2)));
                    } else {
                        segments.push((edge(0), edge(1)));
                        segments.push((edge(2), edge(3)));
                    }
                }
                _ => unreachable!(),
            }
        }
    }

    stitch(segments, dx.min(dy))
}

// join segments that share endpoints (quantized) into polylines
fn stitch(segments: Vec<(Vec2, Vec2)>, cell: f64) -> Vec<Vec<Vec2>> {
    use std::collections::HashMap;
    let eps = 1e-9 * (cell + 1.0);
    let key = |p: Vec2| -> (i64, i64) {
        ((p.x / eps).round() as i64, (p.y / eps).round() as i64)
    };

    let mut adj: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
    for (idx, seg) in segments.iter().enumerate() {
        adj.entry(key(seg.0)).or_default().push(idx);
        adj.entry(key(seg.1)).or_default().push(idx);
    }

    let mut used = vec![false; segments.len()];
    let mut polylines = Vec::new();
    // walk open chains first so their endpoints anchor the traversal, then
    // sweep up remaining closed loops
    for pass in 0..2 {
        for start in 0..segments.len() {
            if used[start] {
                continue;
            }
            let start_key = key(segments[start].0);
            let open_end = adj[&start_key].iter().filter(|&&i| !used[i]).count() == 1;
            if pass == 0 && !open_end {
                continue;
            }
            used[start] = true;
            let mut line = vec![segments[start].0, segments[start].1];
            loop {
                let k = key(*line.last().unwrap());
                let next = adj
                    .get(&k)
                    .and_then(|ids| ids.iter().find(|&&i| !used[i]).copied());
                match next {
                    Some(i) => {
                        used[i] = true;
                        let (a, b) = segments[i];
                        line.push(if key(a) == k { b } else { a });
                    }
                    None => break,
                }
            }
            polylines.push(line);
        }
    }
    polylines
}
