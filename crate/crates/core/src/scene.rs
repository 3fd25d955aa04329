//! JSON scene files: a union of H-polytopes plus optional d.c. functions.
//!
//! ```json
//! {
//!   "dimension": 2,
//!   "polytopes": [{"halfspaces": [{"normal": ["1", "0"], "offset": "1/2"}]}],
//!   "dc_functions": [{"plus": [{"gradient": ["1", "0"], "offset": "0"}], "minus": []}],
//!   "metadata": {"name": "strip"}
//! }
//! ```
//!
//! Rationals are strings (`"p/q"`, integers or finite decimals); bare JSON
//! integers are accepted too. An empty `minus` list means the zero function.

use std::path::Path;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::approx::BoxRegion;
use crate::dcfun::{AffinePiece, DCFunction, MaxAffine};
use crate::error::{Error, Result};
use crate::polyhedra::{ConvexPolytope, Halfspace, PolyUnion};
use crate::rational::{format_rat, parse_rat, Rat};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RatLiteral {
    Text(String),
    Int(i64),
}

impl RatLiteral {
    fn parse(&self) -> Result<Rat> {
        match self {
            RatLiteral::Text(s) => parse_rat(s),
            RatLiteral::Int(n) => Ok(Rat::from_integer((*n).into())),
        }
    }
}

impl From<&Rat> for RatLiteral {
    fn from(r: &Rat) -> Self {
        RatLiteral::Text(format_rat(r))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HalfspaceSpec {
    pub normal: Vec<RatLiteral>,
    pub offset: RatLiteral,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolytopeSpec {
    pub halfspaces: Vec<HalfspaceSpec>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PieceSpec {
    pub gradient: Vec<RatLiteral>,
    pub offset: RatLiteral,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DcSpec {
    pub plus: Vec<PieceSpec>,
    #[serde(default)]
    pub minus: Vec<PieceSpec>,
}

/// The on-disk form of a scene.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SceneFile {
    pub dimension: usize,
    pub polytopes: Vec<PolytopeSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub dc_functions: Vec<DcSpec>,
    #[serde(default, skip_serializing_if = "serde_json::Value::is_null")]
    pub metadata: serde_json::Value,
}

impl SceneFile {
    pub fn from_polytopes(dimension: usize, parts: &[ConvexPolytope]) -> Self {
        let polytopes = parts
            .iter()
            .map(|p| PolytopeSpec {
                halfspaces: p
                    .constraints()
                    .iter()
                    .map(|h| HalfspaceSpec {
                        normal: h.normal().iter().map(RatLiteral::from).collect(),
                        offset: h.offset().into(),
                    })
                    .collect(),
            })
            .collect();
        SceneFile { dimension, polytopes, dc_functions: Vec::new(), metadata: serde_json::Value::Null }
    }

    pub fn with_function(mut self, f: &DCFunction) -> Self {
        let pieces = |g: &MaxAffine| {
            g.pieces()
                .iter()
                .map(|p| PieceSpec {
                    gradient: p.gradient.iter().map(RatLiteral::from).collect(),
                    offset: (&p.offset).into(),
                })
                .collect()
        };
        self.dc_functions.push(DcSpec { plus: pieces(&f.plus), minus: pieces(&f.minus) });
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scene serializes")
    }
}

/// A parsed, validated scene.
#[derive(Clone, Debug)]
pub struct Scene {
    pub dimension: usize,
    pub union: PolyUnion,
    pub dc_functions: Vec<DCFunction>,
    pub metadata: serde_json::Value,
}

/// Scene failures split by whether the file or the geometry is at fault.
#[derive(Debug, thiserror::Error)]
pub enum SceneError {
    #[error("cannot read scene: {0}")]
    Io(String),
    #[error("malformed scene: {0}")]
    Parse(String),
    #[error("invalid scene geometry: {0}")]
    Geometry(Error),
}

fn parse_vec(v: &[RatLiteral], d: usize, what: &str) -> std::result::Result<Vec<Rat>, SceneError> {
    if v.len() != d {
        return Err(SceneError::Parse(format!("{what} has {} entries, expected {d}", v.len())));
    }
    v.iter().map(|x| x.parse().map_err(|e| SceneError::Parse(e.to_string()))).collect()
}

fn parse_lit(x: &RatLiteral) -> std::result::Result<Rat, SceneError> {
    x.parse().map_err(|e| SceneError::Parse(e.to_string()))
}

fn parse_pieces(ps: &[PieceSpec], d: usize) -> std::result::Result<MaxAffine, SceneError> {
    if ps.is_empty() {
        return Ok(MaxAffine::zero(d));
    }
    let pieces = ps
        .iter()
        .map(|p| Ok(AffinePiece::new(parse_vec(&p.gradient, d, "gradient")?, parse_lit(&p.offset)?)))
        .collect::<std::result::Result<Vec<_>, SceneError>>()?;
    MaxAffine::new(pieces).map_err(|e| SceneError::Parse(e.to_string()))
}

impl Scene {
    pub fn from_file(file: &SceneFile) -> std::result::Result<Scene, SceneError> {
        let d = file.dimension;
        if d == 0 {
            return Err(SceneError::Parse("dimension must be positive".into()));
        }
        if file.polytopes.is_empty() {
            return Err(SceneError::Parse("scene has no polytopes".into()));
        }
        let mut parts = Vec::with_capacity(file.polytopes.len());
        for (i, p) in file.polytopes.iter().enumerate() {
            let mut hs = Vec::with_capacity(p.halfspaces.len());
            for h in &p.halfspaces {
                let normal = parse_vec(&h.normal, d, &format!("normal in polytope {i}"))?;
                if normal.iter().all(Zero::is_zero) {
                    return Err(SceneError::Parse(format!("zero normal in polytope {i}")));
                }
                hs.push(Halfspace::new(normal, parse_lit(&h.offset)?).map_err(|e| SceneError::Parse(e.to_string()))?);
            }
            let poly = ConvexPolytope::new(d, hs).map_err(SceneError::Geometry)?;
            if poly.is_empty() {
                return Err(SceneError::Geometry(Error::Empty));
            }
            parts.push(poly);
        }
        let union = PolyUnion::new(parts).map_err(SceneError::Geometry)?;
        let dc_functions = file
            .dc_functions
            .iter()
            .map(|f| {
                DCFunction::new(parse_pieces(&f.plus, d)?, parse_pieces(&f.minus, d)?)
                    .map_err(|e| SceneError::Parse(e.to_string()))
            })
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(Scene { dimension: d, union, dc_functions, metadata: file.metadata.clone() })
    }

    pub fn parse(text: &str) -> std::result::Result<Scene, SceneError> {
        let file: SceneFile = serde_json::from_str(text).map_err(|e| SceneError::Parse(e.to_string()))?;
        Scene::from_file(&file)
    }

    pub fn load(path: &Path) -> std::result::Result<Scene, SceneError> {
        let text = std::fs::read_to_string(path).map_err(|e| SceneError::Io(format!("{}: {e}", path.display())))?;
        Scene::parse(&text)
    }

    /// Smallest axis-aligned box containing every polytope of the scene.
    pub fn bounding_box(&self) -> Result<BoxRegion> {
        let d = self.dimension;
        let mut lo: Vec<Option<Rat>> = vec![None; d];
        let mut hi: Vec<Option<Rat>> = vec![None; d];
        for p in self.union.parts() {
            for v in p.vertices()? {
                for i in 0..d {
                    if lo[i].as_ref().is_none_or(|x| &v[i] < x) {
                        lo[i] = Some(v[i].clone());
                    }
                    if hi[i].as_ref().is_none_or(|x| &v[i] > x) {
                        hi[i] = Some(v[i].clone());
                    }
                }
            }
        }
        BoxRegion::new(lo.into_iter().flatten().collect(), hi.into_iter().flatten().collect())
    }
}
