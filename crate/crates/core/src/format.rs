//! JSON covariance file.
//!
//! ```json
//! {
//!   "format_version": "1",
//!   "n_modes": 1,
//!   "ordering": "a,adag-per-mode",
//!   "matrix": [
//!     [[0.5, 0.0], [0.0, 0.0]],
//!     [[0.0, 0.0], [0.5, 0.0]]
//!   ],
//!   "metadata": {"source": "vacuum"}
//! }
//! ```
//!
//! Entries are `[re, im]` pairs in the `(a₁, a₁†, a₂, a₂†, …)` ordering;
//! the `ordering` field must spell that out, so a quadrature-ordered file is
//! rejected instead of silently misread. Unknown fields are errors. Numbers
//! are written in shortest round-trip form, so write → read is bit-exact.

use std::collections::BTreeMap;
use std::fmt;

use serde::Deserialize;

use crate::{CMat, CovarianceMatrix, C64};

pub const FORMAT_VERSION: &str = "1";
pub const ORDERING: &str = "a,adag-per-mode";

#[derive(Debug, Clone, PartialEq)]
pub enum FormatError {
    /// Malformed JSON or a field of the wrong type.
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    /// Well-formed JSON whose content is invalid.
    Field { path: String, message: String },
}

impl fmt::Display for FormatError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Syntax {
                line,
                column,
                message,
            } => write!(f, "line {line}, column {column}: {message}"),
            Self::Field { path, message } => write!(f, "{path}: {message}"),
        }
    }
}

impl std::error::Error for FormatError {}

fn field(path: impl Into<String>, message: impl Into<String>) -> FormatError {
    FormatError::Field {
        path: path.into(),
        message: message.into(),
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFile {
    format_version: String,
    n_modes: usize,
    ordering: String,
    matrix: Vec<Vec<[f64; 2]>>,
    #[serde(default)]
    metadata: BTreeMap<String, String>,
}

/// A parsed file: the validated matrix plus its metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceFile {
    pub matrix: CovarianceMatrix,
    pub metadata: BTreeMap<String, String>,
}

impl CovarianceFile {
    pub fn new(matrix: CovarianceMatrix) -> Self {
        Self {
            matrix,
            metadata: BTreeMap::new(),
        }
    }

    pub fn with_metadata(mut self, key: &str, value: impl Into<String>) -> Self {
        self.metadata.insert(key.to_owned(), value.into());
        self
    }

    pub fn to_json(&self) -> String {
        write_covariance_file(&self.matrix, &self.metadata)
    }
}

pub fn parse_covariance_file(text: &str) -> Result<CovarianceFile, FormatError> {
    let raw: RawFile = serde_json::from_str(text).map_err(|e| FormatError::Syntax {
        line: e.line(),
        column: e.column(),
        message: strip_position(&e.to_string()),
    })?;
    if raw.format_version != FORMAT_VERSION {
        return Err(field(
            "format_version",
            format!(
                "unsupported version '{}' (expected '{FORMAT_VERSION}')",
                raw.format_version
            ),
        ));
    }
    if raw.ordering != ORDERING {
        return Err(field(
            "ordering",
            format!("expected '{ORDERING}', got '{}'", raw.ordering),
        ));
    }
    if raw.n_modes == 0 {
        return Err(field("n_modes", "must be at least 1"));
    }
    let dim = raw
        .n_modes
        .checked_mul(2)
        .filter(|&d| d <= 4096)
        .ok_or_else(|| field("n_modes", "too many modes"))?;
    if raw.matrix.len() != dim {
        return Err(field(
            "matrix",
            format!(
                "expected {dim} rows for {} modes, got {}",
                raw.n_modes,
                raw.matrix.len()
            ),
        ));
    }
    let mut m = CMat::zeros(dim, dim);
    for (i, row) in raw.matrix.iter().enumerate() {
        if row.len() != dim {
            return Err(field(
                format!("matrix[{i}]"),
                format!("expected {dim} entries, got {}", row.len()),
            ));
        }
        for (j, &[re, im]) in row.iter().enumerate() {
            m[(i, j)] = C64::new(re, im);
        }
    }
    let matrix = CovarianceMatrix::new(m).map_err(|e| field("matrix", e.to_string()))?;
    Ok(CovarianceFile {
        matrix,
        metadata: raw.metadata,
    })
}

/// serde_json appends " at line L column C"; the position is reported
/// separately.
fn strip_position(message: &str) -> String {
    match message.rfind(" at line ") {
        Some(pos) => message[..pos].to_owned(),
        None => message.to_owned(),
    }
}

pub fn write_covariance_file(v: &CovarianceMatrix, metadata: &BTreeMap<String, String>) -> String {
    let num = |x: f64| serde_json::to_string(&x).expect("finite by invariant");
    let dim = v.dim();
    let mut out = String::new();
    out.push_str("{\n");
    out.push_str(&format!("  \"format_version\": \"{FORMAT_VERSION}\",\n"));
    out.push_str(&format!("  \"n_modes\": {},\n", v.n_modes()));
    out.push_str(&format!("  \"ordering\": \"{ORDERING}\",\n"));
    out.push_str("  \"matrix\": [\n");
    for i in 0..dim {
        let row: Vec<String> = (0..dim)
            .map(|j| {
                let z = v.get(i, j);
                format!("[{}, {}]", num(z.re), num(z.im))
            })
            .collect();
        let sep = if i + 1 < dim { "," } else { "" };
        out.push_str(&format!("    [{}]{sep}\n", row.join(", ")));
    }
    if metadata.is_empty() {
        out.push_str("  ]\n");
    } else {
        out.push_str("  ],\n");
        let meta = serde_json::to_string(metadata).expect("string map serializes");
        out.push_str(&format!("  \"metadata\": {meta}\n"));
    }
    out.push_str("}\n");
    out
}

/// Comma-separated 1-based mode indices, e.g. `"1,3"`, returned 0-based.
/// Whitespace around items is allowed; empty items, zero and duplicates are
/// not.
pub fn parse_mode_list(text: &str) -> Result<Vec<usize>, FormatError> {
    let mut modes = Vec::new();
    for (pos, item) in text.split(',').enumerate() {
        let item = item.trim();
        let path = format!("modes[{pos}]");
        if item.is_empty() {
            return Err(field(path, "empty entry"));
        }
        let k: usize = item
            .parse()
            .map_err(|_| field(&path, format!("'{item}' is not a mode number")))?;
        if k == 0 {
            return Err(field(path, "modes are numbered from 1"));
        }
        if modes.contains(&(k - 1)) {
            return Err(field(path, format!("mode {k} listed twice")));
        }
        modes.push(k - 1);
    }
    Ok(modes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian_ops::{squeezed_vacuum, tmsv, vacuum};

    #[test]
    fn round_trip_is_bit_exact() {
        for v in [vacuum(1), tmsv(0.5), squeezed_vacuum(0.37, 2.1)] {
            let file = CovarianceFile::new(v.clone()).with_metadata("note", "a \"quoted\" value");
            let back = parse_covariance_file(&file.to_json()).unwrap();
            assert_eq!(back, file);
            for (a, b) in back.matrix.matrix().iter().zip(v.matrix().iter()) {
                assert_eq!(a.re.to_bits(), b.re.to_bits());
                assert_eq!(a.im.to_bits(), b.im.to_bits());
            }
        }
    }

    #[test]
    fn syntax_errors_carry_position() {
        let err = parse_covariance_file("{\n  \"format_version\": \"1\",\n  oops\n}").unwrap_err();
        assert!(matches!(err, FormatError::Syntax { line: 3, .. }), "{err}");
        let err = parse_covariance_file(
            "{\"format_version\":\"1\",\"n_modes\":1,\"ordering\":\"a,adag-per-mode\",\"matrix\":[],\"extra\":1}",
        )
        .unwrap_err();
        assert!(err.to_string().contains("extra"), "{err}");
    }

    #[test]
    fn field_errors_carry_path() {
        let good = CovarianceFile::new(vacuum(1)).to_json();
        let bad_order = good.replace(ORDERING, "x,p");
        assert!(matches!(
            parse_covariance_file(&bad_order),
            Err(FormatError::Field { ref path, .. }) if path == "ordering"
        ));
        let bad_version = good.replace("\"1\"", "\"2\"");
        assert!(matches!(
            parse_covariance_file(&bad_version),
            Err(FormatError::Field { ref path, .. }) if path == "format_version"
        ));
        let bad_modes = good.replace("\"n_modes\": 1", "\"n_modes\": 2");
        assert!(matches!(
            parse_covariance_file(&bad_modes),
            Err(FormatError::Field { ref path, .. }) if path == "matrix"
        ));
        let not_hermitian = good.replacen("[0.0, 0.0]", "[0.1, 0.0]", 1);
        let err = parse_covariance_file(&not_hermitian).unwrap_err();
        assert!(err.to_string().starts_with("matrix:"), "{err}");
        let ragged = good.replacen(", [0.0, 0.0]]", "]", 1);
        assert!(matches!(
            parse_covariance_file(&ragged),
            Err(FormatError::Field { ref path, .. }) if path == "matrix[0]"
        ));
    }

    #[test]
    fn mode_lists() {
        assert_eq!(parse_mode_list("1,2").unwrap(), vec![0, 1]);
        assert_eq!(parse_mode_list(" 3 , 1").unwrap(), vec![2, 0]);
        for bad in ["", "1,,2", "0", "1,1", "x", "-1", "1.5"] {
            assert!(parse_mode_list(bad).is_err(), "{bad}");
        }
    }
}
