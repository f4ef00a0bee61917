//! JSON scheme files.
//!
//! ```json
//! {
//!   "ambient": 4,
//!   "degree": 4,
//!   "points": [
//!     { "kind": "coordinate", "index": 1, "mult": 3 },
//!     { "kind": "generic", "mult": 2 },
//!     { "kind": "on-subspace", "subspace": "H1", "mult": 2 }
//!   ],
//!   "subspaces": [
//!     {
//!       "id": "H1",
//!       "span": [{ "coordinate": 2 }, { "coordinate": 3 }, { "generic": true }],
//!       "component": false,
//!       "multiplicity": 1
//!     }
//!   ]
//! }
//! ```
//!
//! Span items are `{"coordinate": j}` for `e_j`, `{"point": i}` for entry
//! `i` of `points` (which must be a coordinate or generic point),
//! `{"coords": [...]}` for explicit integer coordinates, or
//! `{"generic": true}` for a random point.

use serde::{Deserialize, Serialize};

use super::scheme::{LinearSpace, ProjPoint, SchemeSpec};
use crate::error::{Error, Result};
use crate::exactla::{PrimeField, SampleRng};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SchemeFile {
    pub ambient: usize,
    pub degree: u32,
    #[serde(default)]
    pub points: Vec<PointEntry>,
    #[serde(default)]
    pub subspaces: Vec<SubspaceEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum PointEntry {
    Coordinate { index: usize, mult: u32 },
    Generic { mult: u32 },
    OnSubspace { subspace: String, mult: u32 },
}

impl PointEntry {
    pub fn mult(&self) -> u32 {
        match self {
            PointEntry::Coordinate { mult, .. }
            | PointEntry::Generic { mult }
            | PointEntry::OnSubspace { mult, .. } => *mult,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubspaceEntry {
    pub id: String,
    pub span: Vec<SpanItem>,
    #[serde(default)]
    pub component: bool,
    #[serde(default = "one")]
    pub multiplicity: u32,
}

fn one() -> u32 {
    1
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub enum SpanItem {
    Coordinate(usize),
    Point(usize),
    Coords(Vec<i64>),
    Generic(bool),
}

// Externally tagged enums serialize as `{"coordinate": 2}`, which is the
// documented shape; `Generic` must carry `true`.

impl SchemeFile {
    /// Parses and validates. Errors name the line/column or the field.
    pub fn parse(text: &str) -> Result<Self> {
        let file: SchemeFile = serde_json::from_str(text)
            .map_err(|e| Error::SchemeFile(format!("line {}, column {}: {e}", e.line(), e.column())))?;
        file.validate()?;
        Ok(file)
    }

    /// Canonical text: pretty JSON in declaration order with a trailing
    /// newline. `parse` followed by `to_canonical` is the identity on
    /// canonical text.
    pub fn to_canonical(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("plain data serializes");
        s.push('\n');
        s
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |field: String, msg: String| Error::SchemeFile(format!("{field}: {msg}"));
        if self.ambient == 0 {
            return Err(bad("ambient".into(), "must be at least 1".into()));
        }
        let mut ids: Vec<&str> = Vec::new();
        for (i, s) in self.subspaces.iter().enumerate() {
            if s.id.is_empty() {
                return Err(bad(format!("subspaces[{i}].id"), "empty id".into()));
            }
            if ids.contains(&s.id.as_str()) {
                return Err(bad(format!("subspaces[{i}].id"), format!("duplicate id {}", s.id)));
            }
            ids.push(&s.id);
            if s.span.is_empty() {
                return Err(bad(format!("subspaces[{i}].span"), "empty span".into()));
            }
            if s.span.len() > self.ambient {
                return Err(bad(
                    format!("subspaces[{i}].span"),
                    format!("{} vectors span at least P^{}", s.span.len(), self.ambient),
                ));
            }
            if s.component && s.multiplicity == 0 {
                return Err(bad(format!("subspaces[{i}].multiplicity"), "must be at least 1".into()));
            }
            for (j, item) in s.span.iter().enumerate() {
                let at = format!("subspaces[{i}].span[{j}]");
                match item {
                    SpanItem::Coordinate(k) if *k > self.ambient => {
                        return Err(bad(at, format!("coordinate index {k} exceeds {}", self.ambient)))
                    }
                    SpanItem::Point(k) => match self.points.get(*k) {
                        None => return Err(bad(at, format!("no point with index {k}"))),
                        Some(PointEntry::OnSubspace { .. }) => {
                            return Err(bad(at, format!("point {k} is itself on a subspace")))
                        }
                        _ => {}
                    },
                    SpanItem::Coords(c) if c.len() != self.ambient + 1 => {
                        return Err(bad(at, format!("{} coordinates given, expected {}", c.len(), self.ambient + 1)))
                    }
                    SpanItem::Generic(false) => return Err(bad(at, "\"generic\" must be true".into())),
                    _ => {}
                }
            }
        }
        for (i, p) in self.points.iter().enumerate() {
            let at = format!("points[{i}]");
            if p.mult() == 0 {
                return Err(bad(format!("{at}.mult"), "must be at least 1".into()));
            }
            match p {
                PointEntry::Coordinate { index, .. } if *index > self.ambient => {
                    return Err(bad(
                        format!("{at}.index"),
                        format!("coordinate index {index} exceeds {}", self.ambient),
                    ))
                }
                PointEntry::OnSubspace { subspace, .. } if !ids.contains(&subspace.as_str()) => {
                    return Err(bad(format!("{at}.subspace"), format!("unknown subspace {subspace}")))
                }
                _ => {}
            }
        }
        Ok(())
    }

    /// Draws the random choices and builds the scheme. Coordinate and
    /// generic points come first, then subspaces, then points on
    /// subspaces; the point list keeps file order.
    pub fn realize(&self, field: PrimeField, rng: &mut SampleRng) -> Result<SchemeSpec> {
        self.validate()?;
        let n = self.ambient;
        let mut placed: Vec<Option<ProjPoint>> = vec![None; self.points.len()];
        for (i, p) in self.points.iter().enumerate() {
            placed[i] = match p {
                PointEntry::Coordinate { index, .. } => Some(ProjPoint::coordinate(n, *index)?),
                PointEntry::Generic { .. } => Some(ProjPoint::generic(field, n, rng)),
                PointEntry::OnSubspace { .. } => None,
            };
        }
        let mut spec = SchemeSpec::new(field, n);
        for (i, s) in self.subspaces.iter().enumerate() {
            let span: Vec<Vec<u32>> = s
                .span
                .iter()
                .map(|item| match item {
                    SpanItem::Coordinate(k) => ProjPoint::coordinate(n, *k).map(|p| p.coords().to_vec()),
                    SpanItem::Point(k) => Ok(placed[*k].as_ref().expect("validated").coords().to_vec()),
                    SpanItem::Coords(c) => Ok(c.iter().map(|&x| field.from_i64(x)).collect()),
                    SpanItem::Generic(_) => Ok(ProjPoint::generic(field, n, rng).coords().to_vec()),
                })
                .collect::<Result<_>>()?;
            spec.register(&s.id, span.clone()).map_err(|e| Error::SchemeFile(format!("subspaces[{i}].span: {e}")))?;
            if s.component {
                let space = LinearSpace::new(field, span, s.multiplicity, Some(s.id.clone()))?;
                spec.add_space(space)?;
            }
        }
        for (i, p) in self.points.iter().enumerate() {
            if let PointEntry::OnSubspace { subspace, .. } = p {
                let span = spec.subspace(subspace)?.to_vec();
                placed[i] = Some(ProjPoint::on_span(field, &span, subspace, rng));
            }
        }
        for (p, entry) in placed.into_iter().zip(&self.points) {
            spec.add_point(p.expect("every point placed"), entry.mult())?;
        }
        Ok(spec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::Seed;
    use crate::fatpoints::conditions::ideal_dim_at;

    const V1: &str = r#"{
  "ambient": 4,
  "degree": 4,
  "points": [
    { "kind": "coordinate", "index": 1, "mult": 3 },
    { "kind": "coordinate", "index": 2, "mult": 3 },
    { "kind": "coordinate", "index": 3, "mult": 3 },
    { "kind": "coordinate", "index": 4, "mult": 3 },
    { "kind": "on-subspace", "subspace": "H1", "mult": 2 },
    { "kind": "on-subspace", "subspace": "H1", "mult": 2 },
    { "kind": "generic", "mult": 2 }
  ],
  "subspaces": [
    { "id": "H1", "span": [{ "coordinate": 2 }, { "coordinate": 3 }, { "generic": true }] }
  ]
}"#;

    #[test]
    fn residue_case_file_evaluates_to_three() {
        let file = SchemeFile::parse(V1).unwrap();
        let spec = file.realize(PrimeField::default_field(), &mut Seed(1).rng()).unwrap();
        assert_eq!(ideal_dim_at(&spec, file.degree).unwrap(), 3);
    }

    #[test]
    fn canonical_round_trip() {
        let file = SchemeFile::parse(V1).unwrap();
        let canon = file.to_canonical();
        assert_eq!(SchemeFile::parse(&canon).unwrap().to_canonical(), canon);
        assert_eq!(SchemeFile::parse(&canon).unwrap(), file);
    }

    #[test]
    fn diagnostics_name_the_location() {
        let err = SchemeFile::parse("{\n  \"ambient\": 3,\n  \"degree\": x\n}").unwrap_err();
        assert!(err.to_string().contains("line 3"), "{err}");
        let err = SchemeFile::parse(r#"{"ambient": 3, "degree": 2, "points": [{"kind": "generic", "mult": 0}]}"#)
            .unwrap_err();
        assert!(err.to_string().contains("points[0].mult"), "{err}");
        let err = SchemeFile::parse(
            r#"{"ambient": 3, "degree": 2, "points": [{"kind": "on-subspace", "subspace": "H", "mult": 1}]}"#,
        )
        .unwrap_err();
        assert!(err.to_string().contains("points[0].subspace"), "{err}");
        let err = SchemeFile::parse(r#"{"ambient": 3, "degree": 2, "colour": 1}"#).unwrap_err();
        assert!(err.to_string().contains("colour"), "{err}");
    }

    #[test]
    fn degenerate_span_is_reported() {
        let text = r#"{"ambient": 3, "degree": 2, "subspaces": [
            {"id": "L", "span": [{"coordinate": 1}, {"coords": [0, 2, 0, 0]}], "component": true}]}"#;
        let file = SchemeFile::parse(text).unwrap();
        let err = file.realize(PrimeField::default_field(), &mut Seed(0).rng()).unwrap_err();
        assert!(err.to_string().contains("subspaces[0].span"), "{err}");
    }

    #[test]
    fn empty_file() {
        let file = SchemeFile::parse(r#"{"ambient": 3, "degree": 3}"#).unwrap();
        let spec = file.realize(PrimeField::default_field(), &mut Seed(0).rng()).unwrap();
        assert_eq!(ideal_dim_at(&spec, 3).unwrap(), 20);
    }
}
