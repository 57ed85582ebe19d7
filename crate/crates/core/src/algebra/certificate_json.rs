use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{Certificate, ClosureFamily, Verdict};
use crate::model::{ModelDoc, ModelError};
use crate::semantics::TruthSet;
use crate::syntax::{parse_formula, print_formula, Signature, SignatureError, SyntaxError};

#[derive(Debug, Error)]
pub enum CertificateError {
    #[error("malformed certificate: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("bad signature: {0}")]
    Signature(#[from] SignatureError),
    #[error("bad formula `{text}`: {source}")]
    Formula { text: String, source: SyntaxError },
    #[error("bad bit string `{0}`")]
    Bits(String),
    #[error("verdict `{0}` needs {1}")]
    Shape(String, &'static str),
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FamilyEntry {
    bits: String,
    witness: String,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SignatureDoc {
    props: Vec<String>,
    #[serde(default)]
    constants: Vec<String>,
    #[serde(default)]
    not: bool,
    #[serde(default)]
    or: bool,
    #[serde(default)]
    at: Vec<String>,
    #[serde(default)]
    dere: Vec<String>,
    #[serde(default)]
    dedicto: Vec<String>,
}

impl SignatureDoc {
    fn from_signature(sig: &Signature) -> Self {
        let strings = |xs: &std::collections::BTreeSet<crate::syntax::Name>| xs.iter().map(|n| n.to_string()).collect();
        let mut constants = Vec::new();
        if sig.allow_true {
            constants.push("true".to_string());
        }
        if sig.allow_false {
            constants.push("false".to_string());
        }
        SignatureDoc {
            props: sig.props.iter().map(|p| p.to_string()).collect(),
            constants,
            not: sig.allow_not,
            or: sig.allow_or,
            at: strings(&sig.at_names),
            dere: strings(&sig.dere_names),
            dedicto: strings(&sig.dedicto_names),
        }
    }

    fn to_signature(&self) -> Result<Signature, SignatureError> {
        let mods = self
            .at
            .iter()
            .map(|n| format!("@[{n}]"))
            .chain(self.dere.iter().map(|n| format!("R[{n}]")))
            .chain(self.dedicto.iter().map(|n| format!("D[{n}]")));
        let mut bools = Vec::new();
        if self.not {
            bools.push("not");
        }
        if self.or {
            bools.push("or");
        }
        let seeds: Vec<&str> = self.props.iter().chain(&self.constants).map(String::as_str).collect();
        format!("{};{};{}", seeds.join(","), bools.join(","), mods.collect::<Vec<_>>().join(",")).parse()
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CertificateDoc {
    model: ModelDoc,
    signature: SignatureDoc,
    target: String,
    /// Point labels `world:agent` in bit-string order.
    order: Vec<String>,
    target_bits: String,
    verdict: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    witness: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    family: Option<Vec<FamilyEntry>>,
}

fn formula(text: &str) -> Result<crate::syntax::Formula, CertificateError> {
    parse_formula(text).map_err(|source| CertificateError::Formula {
        text: text.to_string(),
        source,
    })
}

fn bits(text: &str, len: usize) -> Result<TruthSet, CertificateError> {
    TruthSet::from_bit_string(text)
        .filter(|t| t.len() == len)
        .ok_or_else(|| CertificateError::Bits(text.to_string()))
}

impl Certificate {
    /// JSON form: the inline model, the signature, the target, and either a witness or the family as
    /// row-major bit strings with witnesses.
    pub fn to_json(&self) -> String {
        let m = &self.model;
        let (verdict, witness, family) = match &self.verdict {
            Verdict::Definable { witness } => ("definable", Some(print_formula(witness)), None),
            Verdict::Undefinable { family } => (
                "undefinable",
                None,
                Some(
                    family
                        .members
                        .iter()
                        .map(|(t, w)| FamilyEntry {
                            bits: t.to_bit_string(),
                            witness: print_formula(w),
                        })
                        .collect(),
                ),
            ),
        };
        let doc = CertificateDoc {
            model: ModelDoc::from_model(m),
            signature: SignatureDoc::from_signature(&self.signature),
            target: print_formula(&self.target),
            order: m.points().map(|q| m.point_label(q)).collect(),
            target_bits: self.target_set.to_bit_string(),
            verdict: verdict.to_string(),
            witness,
            family,
        };
        serde_json::to_string_pretty(&doc).expect("certificates always serialize")
    }

    /// Parses a certificate document. The result still has to pass
    /// [`super::verify_certificate`] to be trusted.
    pub fn from_json(text: &str) -> Result<Certificate, CertificateError> {
        let doc: CertificateDoc = serde_json::from_str(text)?;
        let model = doc.model.to_model()?;
        let n = model.n_points();
        let signature = doc.signature.to_signature()?;
        let verdict = match doc.verdict.as_str() {
            "definable" => Verdict::Definable {
                witness: formula(
                    doc.witness
                        .as_deref()
                        .ok_or(CertificateError::Shape(doc.verdict.clone(), "a witness"))?,
                )?,
            },
            "undefinable" => {
                let entries = doc
                    .family
                    .as_ref()
                    .ok_or(CertificateError::Shape(doc.verdict.clone(), "a family"))?;
                let mut members = IndexMap::new();
                for e in entries {
                    members.insert(bits(&e.bits, n)?, formula(&e.witness)?);
                }
                Verdict::Undefinable {
                    family: ClosureFamily {
                        signature: signature.clone(),
                        members,
                        saturated: true,
                    },
                }
            }
            other => return Err(CertificateError::Shape(other.to_string(), "to be definable or undefinable")),
        };
        Ok(Certificate {
            target: formula(&doc.target)?,
            target_set: bits(&doc.target_bits, n)?,
            model,
            signature,
            verdict,
        })
    }
}
