//! Surface files: JSON with exact scalars.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom::Vec2;
use crate::linalg::Complex;
use crate::scalar::{parse_rational, FieldCtx, ParseScalarError, Scalar};
use crate::surface::{EdgeRef, SurfaceError, TranslationSurface};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Scalar(#[from] ParseScalarError),
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    #[error("unsupported format version {0}")]
    Format(u32),
    #[error("invalid field parameter {0}")]
    Field(u32),
}

impl IoError {
    pub fn name(&self) -> &'static str {
        match self {
            IoError::Json(_) => "ParseError",
            IoError::Scalar(_) => "ScalarParseError",
            IoError::Surface(e) => e.name(),
            IoError::Format(_) => "UnsupportedFormat",
            IoError::Field(_) => "InvalidField",
        }
    }
}

/// A scalar as written in files: `"p/q"` or the pair `["p/q", "r/s"]` for `p/q + r/s·√d`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ScalarText {
    Plain(String),
    Pair(String, String),
}

impl ScalarText {
    pub fn from_scalar(s: &Scalar) -> Self {
        if s.is_rational() {
            ScalarText::Plain(s.to_string())
        } else {
            ScalarText::Pair(Scalar::rational(s.rational_part().clone()).to_string(), Scalar::rational(s.irrational_part().clone()).to_string())
        }
    }

    pub fn to_scalar(&self, field: FieldCtx) -> Result<Scalar, ParseScalarError> {
        let s = match self {
            ScalarText::Plain(t) => t.parse::<Scalar>()?,
            ScalarText::Pair(a, b) => {
                let a = parse_rational(a)?;
                let b = parse_rational(b)?;
                if field.is_rational() && !num_traits::Zero::is_zero(&b) {
                    return Err(ParseScalarError(format!("irrational part without a field: {self:?}")));
                }
                Scalar::new(a, b, field.d)
            }
        };
        Ok(s)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FieldSpec {
    pub d: u32,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SurfaceFile {
    #[serde(default = "default_format")]
    pub format: u32,
    pub field: FieldSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub polygons: Vec<Vec<[ScalarText; 2]>>,
    pub gluing: Vec<[[usize; 2]; 2]>,
}

fn default_format() -> u32 {
    FORMAT_VERSION
}

impl SurfaceFile {
    pub fn from_surface(m: &TranslationSurface) -> Self {
        SurfaceFile {
            format: FORMAT_VERSION,
            field: FieldSpec { d: m.field().d },
            label: m.label().map(str::to_string),
            polygons: m
                .polygons()
                .iter()
                .map(|p| p.iter().map(|v| [ScalarText::from_scalar(&v.x), ScalarText::from_scalar(&v.y)]).collect())
                .collect(),
            gluing: m.gluing().iter().map(|(a, b)| [[a.poly, a.edge], [b.poly, b.edge]]).collect(),
        }
    }

    pub fn to_surface(&self) -> Result<TranslationSurface, IoError> {
        if self.format != FORMAT_VERSION {
            return Err(IoError::Format(self.format));
        }
        let field = FieldCtx::new(self.field.d).map_err(|_| IoError::Field(self.field.d))?;
        let polygons = self
            .polygons
            .iter()
            .map(|p| {
                p.iter()
                    .map(|[x, y]| Ok(Vec2::new(x.to_scalar(field)?, y.to_scalar(field)?)))
                    .collect::<Result<Vec<_>, ParseScalarError>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        let gluing = self
            .gluing
            .iter()
            .map(|[a, b]| (EdgeRef::new(a[0], a[1]), EdgeRef::new(b[0], b[1])))
            .collect();
        Ok(TranslationSurface::new(field, polygons, gluing, self.label.clone())?)
    }
}

pub fn surface_to_json(m: &TranslationSurface) -> String {
    let mut s = serde_json::to_string_pretty(&SurfaceFile::from_surface(m)).expect("surface files serialize");
    s.push('\n');
    s
}

pub fn surface_from_json(text: &str) -> Result<TranslationSurface, IoError> {
    let file: SurfaceFile = serde_json::from_str(text)?;
    file.to_surface()
}

/// Exact text of a scalar for reports.
pub fn scalar_text(s: &Scalar) -> String {
    s.to_string()
}

/// `[re, im]` as exact strings.
pub fn complex_text(c: &Complex) -> [String; 2] {
    [c.re.to_string(), c.im.to_string()]
}

pub fn vec_text(v: &Vec2) -> [String; 2] {
    [v.x.to_string(), v.y.to_string()]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::{l_shape, square_tiled, Permutation};

    #[test]
    fn round_trip_origami_and_golden_l() {
        let o = square_tiled(&Permutation::from_cycles(3, "(1 2)").unwrap(), &Permutation::from_cycles(3, "(1 3)").unwrap())
            .unwrap()
            .with_label(Some("L origami".into()));
        let t = surface_to_json(&o);
        let back = surface_from_json(&t).unwrap();
        assert_eq!(back, o);
        assert_eq!(surface_to_json(&back), t);

        let phi = Scalar::quad(1, 2, 1, 2, 5);
        let one = Scalar::one();
        let g = l_shape(&phi, &one, &one, &(&phi - &one)).unwrap();
        let t = surface_to_json(&g);
        assert!(t.contains("\"1/2\""));
        assert_eq!(surface_to_json(&surface_from_json(&t).unwrap()), t);
    }

    #[test]
    fn rejects_bad_input() {
        let bad = r#"{"field":{"d":0},"polygons":[[["1","0"],["0","1"],["-2","0"],["0","-1"]]],"gluing":[[[0,0],[0,2]],[[0,1],[0,3]]]}"#;
        assert_eq!(surface_from_json(bad).unwrap_err().name(), "GluingMismatch");
        assert_eq!(surface_from_json("{").unwrap_err().name(), "ParseError");
        let field = r#"{"field":{"d":4},"polygons":[],"gluing":[]}"#;
        assert_eq!(surface_from_json(field).unwrap_err().name(), "InvalidField");
    }
}
