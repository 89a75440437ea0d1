//! The on-disk document schema and its conversion into library types.
//!
//! A document describes one structure: the group parameter theta, the
//! linear field, the declared orthonormal distribution basis, and an
//! optional candidate map to verify against it.

use ars3d::morphisms::GroupMap;
use ars3d::{
    AlgebraElement, Automorphism, Distribution, GroupPoint, LinearField, Mat2, ThetaForm,
    Vec2,
};
use serde::Deserialize;

#[derive(Debug, Deserialize)]
pub struct ThetaDoc {
    pub family: String,
    #[serde(default)]
    pub gamma: Option<f64>,
}

#[derive(Debug, Deserialize)]
pub struct FieldDoc {
    pub xi: [f64; 2],
    #[serde(rename = "A")]
    pub a: [[f64; 2]; 2],
}

#[derive(Debug, Deserialize)]
pub struct DistributionDoc {
    /// Two rows (alpha, eta_x, eta_y), declared orthonormal.
    pub basis: [[f64; 3]; 2],
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum CandidateDoc {
    Automorphism {
        eps: f64,
        #[serde(rename = "P")]
        p: [[f64; 2]; 2],
        eta: [f64; 2],
    },
    Linear {
        a: f64,
        #[serde(rename = "P")]
        p: [[f64; 2]; 2],
    },
    Translation {
        g: PointDoc,
    },
    Composite {
        maps: Vec<CandidateDoc>,
    },
}

#[derive(Debug, Deserialize)]
pub struct PointDoc {
    pub t: f64,
    pub v: [f64; 2],
}

#[derive(Debug, Deserialize)]
pub struct ArsDocument {
    pub theta: ThetaDoc,
    pub linear_field: FieldDoc,
    pub distribution: DistributionDoc,
    #[serde(default)]
    pub candidate_map: Option<CandidateDoc>,
}

/// Schema-level failure (missing pieces); distinct from domain failures so
/// the command layer can exit 64 instead of 2.
#[derive(Debug)]
pub struct SchemaError(pub String);

/// Either the document shape is wrong (exit 64) or the described object is
/// rejected by a library constructor (exit 2).
#[derive(Debug)]
pub enum DocError {
    Schema(String),
    Domain(ars3d::Error),
}

impl From<ars3d::Error> for DocError {
    fn from(e: ars3d::Error) -> Self {
        DocError::Domain(e)
    }
}

impl ArsDocument {
    pub fn parse(text: &str) -> Result<Self, SchemaError> {
        serde_json::from_str(text).map_err(|e| SchemaError(format!("invalid document: {e}")))
    }

    pub fn theta(&self) -> Result<ThetaForm, DocError> {
        match self.theta.family.as_str() {
            "jordan" => Ok(ThetaForm::jordan()),
            "diagonal" => Ok(ThetaForm::diagonal(self.gamma_value()?)?),
            "rotation" => Ok(ThetaForm::rotation(self.gamma_value()?)?),
            other => Err(DocError::Schema(format!("unknown theta family {other:?}"))),
        }
    }

    fn gamma_value(&self) -> Result<f64, DocError> {
        self.theta
            .gamma
            .ok_or_else(|| DocError::Schema("this theta family requires gamma".into()))
    }

    /// The field is built relaxed so validation can report admissibility
    /// instead of refusing to load the document.
    pub fn field(&self, theta: ThetaForm) -> Result<LinearField, ars3d::Error> {
        LinearField::new_relaxed(
            theta,
            Vec2::new(self.linear_field.xi[0], self.linear_field.xi[1]),
            Mat2::new(
                self.linear_field.a[0][0],
                self.linear_field.a[0][1],
                self.linear_field.a[1][0],
                self.linear_field.a[1][1],
            ),
        )
    }

    pub fn distribution(&self) -> Result<Distribution, ars3d::Error> {
        let b = &self.distribution.basis;
        Distribution::new(
            AlgebraElement::new(b[0][0], Vec2::new(b[0][1], b[0][2])),
            AlgebraElement::new(b[1][0], Vec2::new(b[1][1], b[1][2])),
        )
    }
}

impl CandidateDoc {
    pub fn to_map(&self, theta: ThetaForm) -> Result<GroupMap, ars3d::Error> {
        Ok(match self {
            CandidateDoc::Automorphism { eps, p, eta } => {
                GroupMap::Automorphism(Automorphism::new(
                    theta,
                    *eps,
                    Mat2::new(p[0][0], p[0][1], p[1][0], p[1][1]),
                    Vec2::new(eta[0], eta[1]),
                )?)
            }
            CandidateDoc::Linear { a, p } => GroupMap::LinearCandidate {
                a: *a,
                p: Mat2::new(p[0][0], p[0][1], p[1][0], p[1][1]),
            },
            CandidateDoc::Translation { g } => GroupMap::LeftTranslation(GroupPoint::new(
                g.t,
                Vec2::new(g.v[0], g.v[1]),
            )),
            CandidateDoc::Composite { maps } => {
                let parts: Result<Vec<GroupMap>, _> =
                    maps.iter().map(|m| m.to_map(theta)).collect();
                GroupMap::Composite(parts?)
            }
        })
    }
}
