//! On-disk instance format and canonical JSON emission.
//!
//! An instance file is `{"schema_version": "1", "kind": ..., "payload": ...,
//! "ground_truth": [...]?}` where the payload is either a factored
//! symbolic-determinant instance or a principal-minor instance. Parsing
//! validates every structural invariant; re-emitting a parsed file is
//! byte-identical.

use serde::de::Error as DeError;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::multilinear::{poly_from_terms, MultilinearPoly, RankOneInstance, TermRepr};
use crate::principal::PrincipalMinorInstance;
use crate::scalar::{Rational, RationalFunction};
use crate::split::SplitCertificateJson;

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Clone)]
pub enum InstancePayload {
    RankOneDet(RankOneInstance<RationalFunction>),
    PrincipalMinor(PrincipalMinorInstance),
}

#[derive(Debug, Clone)]
pub struct InstanceFile {
    pub payload: InstancePayload,
    pub ground_truth: Option<MultilinearPoly<Rational>>,
}

impl InstanceFile {
    pub fn rank_one(inst: RankOneInstance<RationalFunction>) -> Self {
        InstanceFile {
            payload: InstancePayload::RankOneDet(inst),
            ground_truth: None,
        }
    }

    pub fn principal_minor(inst: PrincipalMinorInstance) -> Self {
        InstanceFile {
            payload: InstancePayload::PrincipalMinor(inst),
            ground_truth: None,
        }
    }

    pub fn with_ground_truth(mut self, poly: MultilinearPoly<Rational>) -> Self {
        self.ground_truth = Some(poly);
        self
    }

    pub fn as_rank_one(&self) -> Result<&RankOneInstance<RationalFunction>> {
        match &self.payload {
            InstancePayload::RankOneDet(inst) => Ok(inst),
            InstancePayload::PrincipalMinor(_) => Err(Error::InvalidInput(
                "expected a rank_one_det instance".into(),
            )),
        }
    }

    pub fn as_principal_minor(&self) -> Result<&PrincipalMinorInstance> {
        match &self.payload {
            InstancePayload::PrincipalMinor(inst) => Ok(inst),
            InstancePayload::RankOneDet(_) => Err(Error::InvalidInput(
                "expected a principal_minor instance".into(),
            )),
        }
    }
}

// ---- serde glue -----------------------------------------------------------

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RankOneRepr {
    n: usize,
    r: usize,
    a0: Option<Matrix<RationalFunction>>,
    u: Matrix<RationalFunction>,
    v: Matrix<RationalFunction>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PrincipalRepr {
    n: usize,
    k: usize,
    #[serde(rename = "A")]
    a: Matrix<RationalFunction>,
}

#[derive(Serialize, Deserialize, PartialEq, Clone, Copy)]
enum KindRepr {
    #[serde(rename = "rank_one_det")]
    RankOneDet,
    #[serde(rename = "principal_minor")]
    PrincipalMinor,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceFileRepr {
    schema_version: String,
    kind: KindRepr,
    payload: serde_json::Value,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    ground_truth: Option<Vec<TermRepr<Rational>>>,
}

impl Serialize for InstanceFile {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::Error as SerError;
        let (kind, payload) = match &self.payload {
            InstancePayload::RankOneDet(inst) => (
                KindRepr::RankOneDet,
                serde_json::to_value(RankOneRepr {
                    n: inst.num_vars(),
                    r: inst.order(),
                    a0: inst.constant_part().cloned(),
                    u: inst.left_factor().clone(),
                    v: inst.right_factor().clone(),
                })
                .map_err(S::Error::custom)?,
            ),
            InstancePayload::PrincipalMinor(inst) => (
                KindRepr::PrincipalMinor,
                serde_json::to_value(PrincipalRepr {
                    n: inst.size(),
                    k: inst.minor_order(),
                    a: inst.matrix().clone(),
                })
                .map_err(S::Error::custom)?,
            ),
        };
        let ground_truth = self.ground_truth.as_ref().map(|p| {
            p.iter()
                .map(|(subset, coeff)| TermRepr {
                    subset: subset.clone(),
                    coeff: coeff.clone(),
                })
                .collect()
        });
        InstanceFileRepr {
            schema_version: SCHEMA_VERSION.into(),
            kind,
            payload,
            ground_truth,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for InstanceFile {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = InstanceFileRepr::deserialize(d)?;
        if repr.schema_version != SCHEMA_VERSION {
            return Err(D::Error::custom(format!(
                "unsupported schema_version `{}`",
                repr.schema_version
            )));
        }
        let (payload, n) = match repr.kind {
            KindRepr::RankOneDet => {
                let r: RankOneRepr =
                    serde_json::from_value(repr.payload).map_err(D::Error::custom)?;
                let inst = RankOneInstance::new(r.a0, r.u, r.v).map_err(D::Error::custom)?;
                if inst.num_vars() != r.n || inst.order() != r.r {
                    return Err(D::Error::custom(
                        "declared (n, r) disagree with the factor shapes",
                    ));
                }
                let n = inst.num_vars();
                (InstancePayload::RankOneDet(inst), n)
            }
            KindRepr::PrincipalMinor => {
                let p: PrincipalRepr =
                    serde_json::from_value(repr.payload).map_err(D::Error::custom)?;
                if p.a.rows() != p.n {
                    return Err(D::Error::custom(
                        "declared n disagrees with the matrix shape",
                    ));
                }
                let inst = PrincipalMinorInstance::new(p.a, p.k).map_err(D::Error::custom)?;
                let n = inst.size();
                (InstancePayload::PrincipalMinor(inst), n)
            }
        };
        let ground_truth = match repr.ground_truth {
            None => None,
            Some(terms) => Some(poly_from_terms(n, terms).map_err(D::Error::custom)?),
        };
        Ok(InstanceFile {
            payload,
            ground_truth,
        })
    }
}

/// Result document written by the debordering command: the exact instance,
/// its dimension, the splitting certificate when one was produced, and the
/// certified limit polynomial.
#[derive(Serialize)]
pub struct DeborderReport {
    pub instance: InstanceFile,
    pub dimension: usize,
    pub certificate: Option<SplitCertificateJson>,
    pub limit_poly: MultilinearPoly<Rational>,
}

impl DeborderReport {
    pub fn from_output(out: &crate::pipeline::DeborderOutput) -> Self {
        let exact = out.to_instance();
        let inst = RankOneInstance::from_base(&exact);
        DeborderReport {
            instance: InstanceFile::rank_one(inst),
            dimension: out.dimension,
            certificate: out.certificate.as_ref().map(|c| c.to_json()),
            limit_poly: out.limit_poly.clone(),
        }
    }
}

/// Pretty, deterministic JSON with a trailing newline: struct fields keep
/// declaration order and all maps iterate sorted keys, so equal values are
/// byte-identical.
pub fn to_canonical_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serialization cannot fail");
    s.push('\n');
    s
}

/// Parses an instance file, or the `instance` field when handed a
/// debordering report.
pub fn parse_instance_document(text: &str) -> Result<InstanceFile> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("invalid JSON: {e}")))?;
    let inner = match value.get("instance") {
        Some(inner) => inner.clone(),
        None => value,
    };
    serde_json::from_value(inner).map_err(|e| Error::Parse(format!("invalid instance: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::parse_rational_function as rf;

    fn golden_instance() -> RankOneInstance<RationalFunction> {
        RankOneInstance::new(
            None,
            Matrix::from_rows(vec![vec![rf("1").unwrap(), rf("1/eps").unwrap()]]).unwrap(),
            Matrix::from_rows(vec![vec![rf("1").unwrap(), rf("eps").unwrap()]]).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn round_trip_is_byte_exact() {
        let file = InstanceFile::rank_one(golden_instance());
        let text = to_canonical_json(&file);
        let parsed: InstanceFile = serde_json::from_str(&text).unwrap();
        assert_eq!(to_canonical_json(&parsed), text);
    }

    #[test]
    fn unknown_fields_rejected() {
        let file = InstanceFile::rank_one(golden_instance());
        let mut v: serde_json::Value = serde_json::from_str(&to_canonical_json(&file)).unwrap();
        v["surprise"] = serde_json::json!(1);
        assert!(serde_json::from_value::<InstanceFile>(v).is_err());
    }

    #[test]
    fn shape_mismatch_rejected() {
        let text = r#"{
            "schema_version": "1",
            "kind": "rank_one_det",
            "payload": {"n": 3, "r": 1, "a0": null,
                        "u": {"rows":1,"cols":2,"entries":[["1","2"]]},
                        "v": {"rows":1,"cols":2,"entries":[["1","0"]]}}
        }"#;
        assert!(serde_json::from_str::<InstanceFile>(text).is_err());
    }

    #[test]
    fn wrong_schema_version_rejected() {
        let file = InstanceFile::rank_one(golden_instance());
        let mut v: serde_json::Value = serde_json::from_str(&to_canonical_json(&file)).unwrap();
        v["schema_version"] = serde_json::json!("2");
        assert!(serde_json::from_value::<InstanceFile>(v).is_err());
    }

    #[test]
    fn report_parses_as_instance_document() {
        let inst = golden_instance();
        let out = crate::pipeline::deborder_general(&inst).unwrap();
        let report = DeborderReport::from_output(&out);
        let text = to_canonical_json(&report);
        let parsed = parse_instance_document(&text).unwrap();
        let back = parsed.as_rank_one().unwrap();
        assert_eq!(back.num_vars(), 2);
        assert!(back.to_base().is_some());
    }

    #[test]
    fn ground_truth_round_trips() {
        let g = crate::generate::generate(&crate::generate::GeneratorSpec {
            n: 3,
            r: 2,
            seed: 9,
            z_range: 2,
            mixing_steps: 2,
            include_a0: false,
        })
        .unwrap();
        let file = InstanceFile::rank_one(g.instance).with_ground_truth(g.ground_truth.clone());
        let text = to_canonical_json(&file);
        let parsed: InstanceFile = serde_json::from_str(&text).unwrap();
        assert_eq!(parsed.ground_truth.unwrap(), g.ground_truth);
    }
}
