//! The five commands behind the binary. Each returns its stdout payload,
//! optional stderr notes, and the process exit code, so tests can drive
//! them in-process and the binary stays a thin shell.
//!
//! Exit codes: 0 success, 1 demo assertion failure, 2 domain failure,
//! 3 rank error, 64 usage/schema, 74 I/O.

use crate::doc::{ArsDocument, DocError};
use crate::json::{mat2, num, point, render, vec2};
use ars3d::ars::{larc, locus_slice};
use ars3d::classify::classify;
use ars3d::fields::{eval_linear, rank_two};
use ars3d::group::d_left;
use ars3d::morphisms::{
    is_automorphism, verify_flow_conjugation, verify_isometry, GroupMap, IsometryReport,
};
use ars3d::sample::{sample_point, SampleCfg};
use ars3d::{
    AlgebraElement, Ars, Automorphism, Distribution, Error, LinearField, Mat2, ThetaForm,
    Vec2,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};

pub const EXIT_OK: i32 = 0;
pub const EXIT_DEMO_ASSERTION: i32 = 1;
pub const EXIT_DOMAIN: i32 = 2;
pub const EXIT_RANK: i32 = 3;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_IO: i32 = 74;

/// What a command wants the process to do.
#[derive(Debug)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome { stdout, stderr: String::new(), code: EXIT_OK }
    }

    fn fail(code: i32, message: impl Into<String>) -> Self {
        Outcome { stdout: String::new(), stderr: message.into(), code }
    }
}

/// The global relative tolerance: `ARS3D_TOL` when set, 1e-9 otherwise.
/// A malformed value is a usage error, reported before any work happens.
pub fn tolerance() -> Result<f64, Outcome> {
    match std::env::var("ARS3D_TOL") {
        Err(_) => Ok(ars3d::DEFAULT_TOL),
        Ok(text) => match text.trim().parse::<f64>() {
            Ok(t) if t.is_finite() && t > 0.0 => Ok(t),
            _ => Err(Outcome::fail(
                EXIT_USAGE,
                format!("ARS3D_TOL must be a positive finite number, got {text:?}"),
            )),
        },
    }
}

fn read_document(path: &str) -> Result<ArsDocument, Outcome> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Outcome::fail(EXIT_IO, format!("cannot read {path}: {e}")))?;
    ArsDocument::parse(&text).map_err(|e| Outcome::fail(EXIT_USAGE, e.0))
}

fn doc_pieces(
    doc: &ArsDocument,
) -> Result<(ThetaForm, LinearField, Distribution), (Outcome, Option<Error>)> {
    let theta = doc.theta().map_err(|e| match e {
        DocError::Schema(msg) => (Outcome::fail(EXIT_USAGE, msg), None),
        DocError::Domain(err) => (Outcome::fail(EXIT_DOMAIN, err.to_string()), Some(err)),
    })?;
    let field = doc
        .field(theta)
        .map_err(|e| (Outcome::fail(EXIT_DOMAIN, e.to_string()), Some(e)))?;
    let dist = doc
        .distribution()
        .map_err(|e| (Outcome::fail(EXIT_DOMAIN, e.to_string()), Some(e)))?;
    Ok((theta, field, dist))
}

/// F probed through the raw frame determinant, usable even when the rank
/// condition fails and no structure can be assembled.
fn complement_probe(theta: ThetaForm, x: &LinearField, delta: &Distribution) -> bool {
    let mut rng = ChaCha8Rng::seed_from_u64(ars3d::sample::DEFAULT_SEED);
    for _ in 0..64 {
        let p = sample_point(&mut rng, 2.0, 2.0);
        let f0 = eval_linear(x, p);
        let f1 = d_left(theta, p, delta.b1());
        let f2 = d_left(theta, p, delta.b2());
        let m = [
            [f0.dt, f1.dt, f2.dt],
            [f0.dv.x, f1.dv.x, f2.dv.x],
            [f0.dv.y, f1.dv.y, f2.dv.y],
        ];
        let det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
        if det.abs() > 1e-12 {
            return true;
        }
    }
    false
}

/// Check the document against the structure definition: the rank condition
/// and a nonempty Riemannian part decide validity (exit 0/2); rank two and
/// admissibility are reported for information.
pub fn cmd_validate(path: &str) -> Outcome {
    let doc = match read_document(path) {
        Ok(d) => d,
        Err(out) => return out,
    };
    let mut reasons: Vec<String> = Vec::new();
    let (theta, field, dist) = match doc_pieces(&doc) {
        Ok(parts) => parts,
        Err((out, Some(err))) if out.code == EXIT_DOMAIN => {
            // report shape is kept even when nothing could be built
            reasons.push(err.to_string());
            let report = json!({
                "admissible": false,
                "larc": false,
                "nonempty_complement": false,
                "rank_two": false,
                "reasons": reasons,
            });
            return Outcome {
                stdout: render(&report),
                stderr: String::new(),
                code: EXIT_DOMAIN,
            };
        }
        Err((out, _)) => return out,
    };

    let admissible = field.admissible();
    let rank = rank_two(&field);
    let larc_ok = larc(&dist, &field);
    if !larc_ok {
        reasons.push(Error::LarcFailure.to_string());
    }
    let nonempty = match Ars::new(field, dist) {
        Ok(_) => true,
        Err(Error::EmptyComplement) => {
            reasons.push(Error::EmptyComplement.to_string());
            false
        }
        // the constructor stops at the rank condition; probe F directly
        Err(Error::LarcFailure) => complement_probe(theta, &field, &dist),
        Err(other) => {
            reasons.push(other.to_string());
            false
        }
    };

    let report = json!({
        "admissible": admissible,
        "larc": larc_ok,
        "nonempty_complement": nonempty,
        "rank_two": rank,
        "reasons": reasons,
    });
    Outcome {
        stdout: render(&report),
        stderr: String::new(),
        code: if larc_ok && nonempty { EXIT_OK } else { EXIT_DOMAIN },
    }
}

fn automorphism_json(m: &Automorphism) -> Value {
    let mut o = Map::new();
    o.insert("P".into(), mat2(m.p()));
    o.insert("eps".into(), Value::from(m.eps() as i64));
    o.insert("eta".into(), vec2(m.eta()));
    Value::Object(o)
}

/// Run the rank-two classification and print the result. Precondition
/// failures (rank or admissibility) exit 3; structural failures exit 2.
pub fn cmd_classify(path: &str) -> Outcome {
    let doc = match read_document(path) {
        Ok(d) => d,
        Err(out) => return out,
    };
    let (_, field, dist) = match doc_pieces(&doc) {
        Ok(parts) => parts,
        Err((out, _)) => return out,
    };
    let sigma = match Ars::new(field, dist) {
        Ok(s) => s,
        Err(e) => return Outcome::fail(EXIT_DOMAIN, e.to_string()),
    };
    match classify(&sigma) {
        Ok(res) => {
            let report = json!({
                "class": res.cls.index() as u64,
                "euclidean": res.euclidean,
                "isometry_residual": num(res.isometry_residual),
                "normalizer": automorphism_json(&res.normalizer),
                "scale": num(res.scale),
                "sigma": num(res.sigma),
                "stability_warning": res.stability_warning,
            });
            Outcome::ok(render(&report))
        }
        Err(e @ (Error::RankError | Error::NotAdmissible)) => {
            Outcome::fail(EXIT_RANK, e.to_string())
        }
        Err(e) => Outcome::fail(EXIT_DOMAIN, e.to_string()),
    }
}

/// Export one t-slice of the singular locus as CSV. The polylines are
/// flattened into vertex rows; the stdout report carries the count.
pub fn cmd_locus(
    path: &str,
    t: f64,
    window: (f64, f64, f64, f64),
    res: usize,
    out: Option<&str>,
) -> Outcome {
    let (x0, x1, y0, y1) = window;
    let finite = [x0, x1, y0, y1, t].iter().all(|c| c.is_finite());
    if !finite || x0 >= x1 || y0 >= y1 || res < 2 {
        return Outcome::fail(
            EXIT_DOMAIN,
            format!("invalid window {window:?} at resolution {res}"),
        );
    }
    let doc = match read_document(path) {
        Ok(d) => d,
        Err(out) => return out,
    };
    let (_, field, dist) = match doc_pieces(&doc) {
        Ok(parts) => parts,
        Err((outc, _)) => return outc,
    };
    let sigma = match Ars::new(field, dist) {
        Ok(s) => s,
        Err(e) => return Outcome::fail(EXIT_DOMAIN, e.to_string()),
    };

    let lines = locus_slice(&sigma, t, window, res);
    let mut csv = String::from("t,v1,v2\n");
    let mut count = 0usize;
    for line in &lines {
        for v in line {
            csv.push_str(&format!("{:.16e},{:.16e},{:.16e}\n", t, v.x, v.y));
            count += 1;
        }
    }

    match out {
        Some(dest) => {
            if let Err(e) = std::fs::write(dest, csv) {
                return Outcome::fail(EXIT_IO, format!("cannot write {dest}: {e}"));
            }
            Outcome::ok(render(&json!({ "points": count as u64 })))
        }
        None => Outcome {
            stdout: csv,
            stderr: render(&json!({ "points": count as u64 })),
            code: EXIT_OK,
        },
    }
}

fn isometry_json(report: &IsometryReport) -> Value {
    let witness = match &report.witness {
        None => Value::Null,
        Some((p, z)) => {
            let mut o = Map::new();
            o.insert("point".into(), point(*p));
            let mut tangent = Map::new();
            tangent.insert("dt".into(), num(z.dt));
            tangent.insert("dv".into(), vec2(z.dv));
            o.insert("tangent".into(), Value::Object(tangent));
            Value::Object(o)
        }
    };
    json!({
        "locus_image_residual": num(report.locus_image_residual),
        "locus_points_checked": report.locus_points_checked as u64,
        "max_rel_error": num(report.max_rel_error),
        "passed": report.passed,
        "samples_checked": report.samples_checked as u64,
        "witness": witness,
    })
}

fn verify_report(
    m: &GroupMap,
    sigma: &Ars,
    cfg: &SampleCfg,
    tol: f64,
) -> Result<(Value, IsometryReport), Outcome> {
    let theta = sigma.theta();
    let auto = is_automorphism(m, theta, tol);
    let flow = match verify_flow_conjugation(m, sigma, sigma, cfg.samples.max(100)) {
        Ok(fc) => json!({
            "conjugates": true,
            "residual": num(fc.residual),
            "sign": fc.sign as i64,
        }),
        Err(Error::NotConjugating { plus, minus }) => json!({
            "conjugates": false,
            "residual": num(plus.min(minus)),
            "sign": 0,
        }),
        Err(e) => return Err(Outcome::fail(EXIT_DOMAIN, e.to_string())),
    };
    let isometry = verify_isometry(m, sigma, sigma, cfg, tol)
        .map_err(|e| Outcome::fail(EXIT_DOMAIN, e.to_string()))?;
    let report = json!({
        "automorphism": auto,
        "flow_conjugation": flow,
        "isometry": isometry_json(&isometry),
    });
    Ok((report, isometry))
}

/// Verify the document's candidate map as a self-isometry: norm transport,
/// flow conjugation, and the automorphism screen, in one report.
pub fn cmd_verify(path: &str, cfg: &SampleCfg) -> Outcome {
    let tol = match tolerance() {
        Ok(t) => t,
        Err(out) => return out,
    };
    let doc = match read_document(path) {
        Ok(d) => d,
        Err(out) => return out,
    };
    let candidate = match &doc.candidate_map {
        Some(c) => c,
        None => return Outcome::fail(EXIT_USAGE, "document has no candidate_map"),
    };
    let (theta, field, dist) = match doc_pieces(&doc) {
        Ok(parts) => parts,
        Err((out, _)) => return out,
    };
    let m = match candidate.to_map(theta) {
        Ok(m) => m,
        Err(e) => return Outcome::fail(EXIT_DOMAIN, e.to_string()),
    };
    let sigma = match Ars::new(field, dist) {
        Ok(s) => s,
        Err(e) => return Outcome::fail(EXIT_DOMAIN, e.to_string()),
    };
    match verify_report(&m, &sigma, cfg, tol) {
        Ok((report, isometry)) => Outcome {
            stdout: render(&report),
            stderr: String::new(),
            code: if isometry.passed { EXIT_OK } else { EXIT_DOMAIN },
        },
        Err(out) => out,
    }
}

/// The shipped counterexample: a rank-deficient structure whose time
/// reversal (t, v) -> (-t, v) transports the norm although it is not a
/// group automorphism. With `rank_two_field` the field is replaced by an
/// invertible one and the same map stops being an isometry.
pub fn cmd_demo_counterexample(cfg: &SampleCfg, rank_two_field: bool) -> Outcome {
    let tol = match tolerance() {
        Ok(t) => t,
        Err(out) => return out,
    };
    let theta = ThetaForm::diagonal(0.0).expect("gamma 0 is in range");
    let field = if rank_two_field {
        LinearField::new(theta, Vec2::new(1.0, 0.0), Mat2::identity())
    } else {
        LinearField::new_relaxed(theta, Vec2::zero(), Mat2::new(0.0, 1.0, 0.0, 0.0))
    }
    .expect("demo field is well formed");
    let delta = Distribution::new(
        AlgebraElement::new(1.0, Vec2::zero()),
        AlgebraElement::new(0.0, Vec2::new(0.0, 1.0)),
    )
    .expect("demo distribution is well formed");
    let sigma = Ars::new(field, delta).expect("demo structure validates");
    let m = GroupMap::LinearCandidate { a: -1.0, p: Mat2::identity() };

    let (_, isometry) = match verify_report(&m, &sigma, cfg, tol) {
        Ok(pair) => pair,
        Err(out) => return out,
    };
    let auto = is_automorphism(&m, theta, tol);
    let rank = rank_two(&field);
    let isometry_ok = isometry.passed && isometry.max_rel_error < 1e-9;

    let report = json!({
        "automorphism": auto,
        "isometry": isometry_ok,
        "rank_two": rank,
    });
    let expected = isometry_ok && !auto && !rank;
    Outcome {
        stdout: render(&report),
        stderr: String::new(),
        code: if expected { EXIT_OK } else { EXIT_DEMO_ASSERTION },
    }
}
