//! JSON matrix documents.
//!
//! ```json
//! {"kind": "chi", "dims": 4, "entries": [[re, im], ...], "metadata": {"source": "..."}}
//! ```
//!
//! Entries are row-major. Numbers are written in shortest round-trip form,
//! so parsing a serialized document restores every entry bit for bit.

use std::collections::BTreeMap;

use qpt_core::{Matrix, C64};
use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error)]
pub enum DocumentError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("expected a {expected}×{expected} matrix, document has dims = {found}")]
    Dims { expected: usize, found: usize },
    #[error("dims = {dims} requires {} entries, found {found}", dims * dims)]
    Length { dims: usize, found: usize },
    #[error("entry {index} is not a finite number")]
    NonFinite { index: usize },
    #[error("document kind `{found}` is not accepted here (expected {expected})")]
    Kind { found: Kind, expected: &'static str },
    #[error("state-pair file must hold exactly 4 pairs, found {0}")]
    PairCount(usize),
    #[error(transparent)]
    Core(#[from] qpt_core::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Chi,
    Density,
    Hermitian,
}

impl std::fmt::Display for Kind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Kind::Chi => "chi",
            Kind::Density => "density",
            Kind::Hermitian => "hermitian",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixDocument {
    pub kind: Kind,
    pub dims: usize,
    pub entries: Vec<[f64; 2]>,
    #[serde(default)]
    pub metadata: BTreeMap<String, String>,
}

impl MatrixDocument {
    pub fn from_matrix<const N: usize>(kind: Kind, m: &Matrix<N>) -> Self {
        MatrixDocument {
            kind,
            dims: N,
            entries: m.0.iter().flatten().map(|z| [z.re, z.im]).collect(),
            metadata: BTreeMap::new(),
        }
    }

    pub fn with_meta(mut self, key: &str, value: impl ToString) -> Self {
        self.metadata.insert(key.to_owned(), value.to_string());
        self
    }

    pub fn validate(&self) -> Result<(), DocumentError> {
        if self.entries.len() != self.dims * self.dims {
            return Err(DocumentError::Length { dims: self.dims, found: self.entries.len() });
        }
        if let Some(index) = self.entries.iter().position(|[re, im]| !re.is_finite() || !im.is_finite()) {
            return Err(DocumentError::NonFinite { index });
        }
        Ok(())
    }

    pub fn to_matrix<const N: usize>(&self) -> Result<Matrix<N>, DocumentError> {
        if self.dims != N {
            return Err(DocumentError::Dims { expected: N, found: self.dims });
        }
        self.validate()?;
        let mut m = Matrix::<N>::zeros();
        for (k, [re, im]) in self.entries.iter().enumerate() {
            m.0[k / N][k % N] = C64::new(*re, *im);
        }
        Ok(m)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents always serialize")
    }

    pub fn from_json(text: &str) -> Result<Self, DocumentError> {
        let doc: MatrixDocument = serde_json::from_str(text)?;
        doc.validate()?;
        Ok(doc)
    }
}

/// Reads a matrix document, also accepting fit output (the `chi_fit`
/// member is used) so that commands compose through pipes.
pub fn read_matrix_input(text: &str) -> Result<MatrixDocument, DocumentError> {
    let mut value: serde_json::Value = serde_json::from_str(text)?;
    if let Some(inner) = value.get_mut("chi_fit") {
        value = inner.take();
    }
    let doc: MatrixDocument = serde_json::from_value(value)?;
    doc.validate()?;
    Ok(doc)
}

/// A 4×4 χ or generic Hermitian document.
pub fn read_process_input(text: &str) -> Result<(MatrixDocument, Matrix<4>), DocumentError> {
    let doc = read_matrix_input(text)?;
    if doc.kind == Kind::Density {
        return Err(DocumentError::Kind { found: doc.kind, expected: "chi or hermitian" });
    }
    let m = doc.to_matrix::<4>()?;
    Ok((doc, m))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairDocument {
    pub input: MatrixDocument,
    pub output: MatrixDocument,
}

pub fn read_pairs(text: &str) -> Result<[qpt_core::StatePair; 4], DocumentError> {
    let docs: Vec<PairDocument> = serde_json::from_str(text)?;
    if docs.len() != 4 {
        return Err(DocumentError::PairCount(docs.len()));
    }
    let density = |d: &MatrixDocument| -> Result<qpt_core::DensityMatrix, DocumentError> {
        if d.kind != Kind::Density {
            return Err(DocumentError::Kind { found: d.kind, expected: "density" });
        }
        Ok(qpt_core::DensityMatrix::from_matrix(d.to_matrix::<2>()?)?)
    };
    let mut pairs = Vec::with_capacity(4);
    for d in &docs {
        pairs.push(qpt_core::StatePair::new(density(&d.input)?, density(&d.output)?)?);
    }
    Ok(pairs.try_into().expect("length checked"))
}

pub fn pairs_to_json(pairs: &[qpt_core::StatePair]) -> String {
    let docs: Vec<PairDocument> = pairs
        .iter()
        .map(|p| PairDocument {
            input: MatrixDocument::from_matrix(Kind::Density, p.input.matrix()),
            output: MatrixDocument::from_matrix(Kind::Density, p.output.matrix()),
        })
        .collect();
    serde_json::to_string_pretty(&docs).expect("documents always serialize")
}
