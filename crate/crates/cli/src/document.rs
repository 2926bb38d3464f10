//! JSON documents for matrices and channels.

use std::fmt;
use std::path::Path;

use faer::Mat;
use quasifree::{ChannelKind, Complex64, Matrix64};
use serde::{Deserialize, Serialize};

/// Row-major matrix with explicit `[re, im]` entries.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixDocument {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KindTag {
    Lambda,
    Gamma,
}

impl From<KindTag> for ChannelKind {
    fn from(k: KindTag) -> Self {
        match k {
            KindTag::Lambda => ChannelKind::Lambda,
            KindTag::Gamma => ChannelKind::Gamma,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChannelDocument {
    pub kind: KindTag,
    #[serde(rename = "A")]
    pub a: MatrixDocument,
    #[serde(rename = "B")]
    pub b: MatrixDocument,
}

/// Why a document could not be read.
#[derive(Debug)]
pub struct ParseError(pub String);

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl MatrixDocument {
    pub fn from_matrix(m: &Matrix64) -> Self {
        let mut data = Vec::with_capacity(m.nrows() * m.ncols());
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                let z = m[(i, j)];
                data.push([z.re, z.im]);
            }
        }
        Self {
            rows: m.nrows(),
            cols: m.ncols(),
            data,
        }
    }

    pub fn to_matrix(&self) -> Result<Matrix64, ParseError> {
        if self.data.len() != self.rows * self.cols {
            return Err(ParseError(format!(
                "data has {} entries, expected rows*cols = {}",
                self.data.len(),
                self.rows * self.cols
            )));
        }
        if self.data.iter().flatten().any(|x| !x.is_finite()) {
            return Err(ParseError("non-finite entry".into()));
        }
        Ok(Mat::from_fn(self.rows, self.cols, |i, j| {
            let [re, im] = self.data[i * self.cols + j];
            Complex64::new(re, im)
        }))
    }
}

fn read(path: &Path) -> Result<String, ParseError> {
    std::fs::read_to_string(path).map_err(|e| ParseError(format!("{}: {e}", path.display())))
}

pub fn read_matrix(path: &Path) -> Result<Matrix64, ParseError> {
    let doc: MatrixDocument = serde_json::from_str(&read(path)?)
        .map_err(|e| ParseError(format!("{}: {e}", path.display())))?;
    doc.to_matrix()
}

pub fn read_channel(path: &Path) -> Result<(ChannelKind, Matrix64, Matrix64), ParseError> {
    let doc: ChannelDocument = serde_json::from_str(&read(path)?)
        .map_err(|e| ParseError(format!("{}: {e}", path.display())))?;
    Ok((doc.kind.into(), doc.a.to_matrix()?, doc.b.to_matrix()?))
}

/// Either document, told apart by the presence of `kind`.
pub enum AnyDocument {
    Matrix(Matrix64),
    Channel(ChannelKind, Matrix64, Matrix64),
}

pub fn read_any(path: &Path) -> Result<AnyDocument, ParseError> {
    let text = read(path)?;
    let value: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| ParseError(format!("{}: {e}", path.display())))?;
    let wrap = |e: serde_json::Error| ParseError(format!("{}: {e}", path.display()));
    if value.get("kind").is_some() {
        let doc: ChannelDocument = serde_json::from_value(value).map_err(wrap)?;
        Ok(AnyDocument::Channel(
            doc.kind.into(),
            doc.a.to_matrix()?,
            doc.b.to_matrix()?,
        ))
    } else {
        let doc: MatrixDocument = serde_json::from_value(value).map_err(wrap)?;
        Ok(AnyDocument::Matrix(doc.to_matrix()?))
    }
}

pub fn to_json<S: Serialize>(value: &S) -> String {
    serde_json::to_string_pretty(value).expect("documents always serialize")
}
