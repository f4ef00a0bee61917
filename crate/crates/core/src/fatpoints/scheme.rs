use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactla::{
    independent_subset, normalize_projective, random_element, random_projective_point, PrimeField, PrimeMatrix,
    SampleRng,
};

/// Where a point came from. Only used for reporting and for the
/// transversality check of the trace; conditions never depend on it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind", content = "ref")]
pub enum PointTag {
    Coordinate(usize),
    Generic,
    OnSubspace(String),
}

/// A point of `P^n` with normalized homogeneous coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjPoint {
    coords: Vec<u32>,
    tag: PointTag,
}

impl ProjPoint {
    /// Normalizes `coords`. A coordinate tag must match a basis vector.
    pub fn new(field: PrimeField, mut coords: Vec<u32>, tag: PointTag) -> Result<Self> {
        if !normalize_projective(field, &mut coords) {
            return Err(Error::Degenerate("point has all coordinates zero".into()));
        }
        if let PointTag::Coordinate(i) = tag {
            if coordinate_index(&coords) != Some(i) {
                return Err(Error::InvalidParameter(format!("point tagged as coordinate point {i} is not e_{i}")));
            }
        }
        Ok(Self { coords, tag })
    }

    /// The coordinate point `e_i` of `P^n`.
    pub fn coordinate(n: usize, i: usize) -> Result<Self> {
        if i > n {
            return Err(Error::InvalidParameter(format!("coordinate index {i} exceeds {n}")));
        }
        let mut coords = vec![0; n + 1];
        coords[i] = 1;
        Ok(Self { coords, tag: PointTag::Coordinate(i) })
    }

    pub fn generic(field: PrimeField, n: usize, rng: &mut SampleRng) -> Self {
        Self { coords: random_projective_point(field, n, rng), tag: PointTag::Generic }
    }

    /// A random combination of `span`, resampled until nonzero.
    pub fn on_span(field: PrimeField, span: &[Vec<u32>], name: &str, rng: &mut SampleRng) -> Self {
        loop {
            let v = random_combination(field, span, rng);
            if let Ok(p) = Self::new(field, v, PointTag::OnSubspace(name.to_string())) {
                return p;
            }
        }
    }

    pub fn coords(&self) -> &[u32] {
        &self.coords
    }

    pub fn tag(&self) -> &PointTag {
        &self.tag
    }

    pub fn ambient(&self) -> usize {
        self.coords.len() - 1
    }

    /// Index `j` when the point is `e_j`, whatever its tag.
    pub fn coordinate_index(&self) -> Option<usize> {
        coordinate_index(&self.coords)
    }

    pub(crate) fn with_coords(field: PrimeField, coords: Vec<u32>, tag: PointTag) -> Result<Self> {
        let tag = match (coordinate_index_unnormalized(&coords), tag) {
            (Some(j), _) => PointTag::Coordinate(j),
            (None, PointTag::Coordinate(_)) => PointTag::Generic,
            (None, t) => t,
        };
        Self::new(field, coords, tag)
    }
}

fn coordinate_index(coords: &[u32]) -> Option<usize> {
    let mut nz = coords.iter().enumerate().filter(|(_, &x)| x != 0);
    match (nz.next(), nz.next()) {
        (Some((j, &1)), None) => Some(j),
        _ => None,
    }
}

fn coordinate_index_unnormalized(coords: &[u32]) -> Option<usize> {
    let mut nz = coords.iter().enumerate().filter(|(_, &x)| x != 0);
    match (nz.next(), nz.next()) {
        (Some((j, _)), None) => Some(j),
        _ => None,
    }
}

pub(crate) fn random_combination(field: PrimeField, span: &[Vec<u32>], rng: &mut SampleRng) -> Vec<u32> {
    let len = span[0].len();
    let mut v = vec![0u32; len];
    for s in span {
        let c = random_element(field, rng);
        for (x, &y) in v.iter_mut().zip(s) {
            *x = field.add(*x, field.mul(c, y));
        }
    }
    v
}

pub(crate) fn dot(field: PrimeField, a: &[u32], b: &[u32]) -> u32 {
    a.iter().zip(b).fold(0, |acc, (&x, &y)| field.add(acc, field.mul(x, y)))
}

pub(crate) fn span_rank(field: PrimeField, vectors: &[Vec<u32>]) -> usize {
    let Some(cols) = vectors.first().map(Vec::len) else { return 0 };
    PrimeMatrix::from_rows(field, cols, vectors.to_vec()).map(|m| m.rank()).unwrap_or(0)
}

/// True if `v` lies in the span of `span`.
pub(crate) fn in_span(field: PrimeField, span: &[Vec<u32>], v: &[u32]) -> bool {
    let mut all = span.to_vec();
    all.push(v.to_vec());
    span_rank(field, &all) == span_rank(field, span)
}

/// `m P`: the point with all partial derivatives of order `< m` vanishing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FatPoint {
    pub point: ProjPoint,
    pub mult: u32,
}

/// A linear subspace `Λ ≅ P^k` included with multiplicity `ℓ`, i.e. the
/// scheme of `I_Λ^ℓ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearSpace {
    span: Vec<Vec<u32>>,
    pub mult: u32,
    pub label: Option<String>,
}

impl LinearSpace {
    /// `span` must be linearly independent.
    pub fn new(field: PrimeField, span: Vec<Vec<u32>>, mult: u32, label: Option<String>) -> Result<Self> {
        check_span(field, &span)?;
        Ok(Self { span, mult, label })
    }

    pub fn span(&self) -> &[Vec<u32>] {
        &self.span
    }

    /// Projective dimension `k`.
    pub fn dim(&self) -> usize {
        self.span.len() - 1
    }

    pub fn ambient(&self) -> usize {
        self.span[0].len() - 1
    }
}

pub(crate) fn check_span(field: PrimeField, span: &[Vec<u32>]) -> Result<()> {
    let Some(len) = span.first().map(Vec::len) else {
        return Err(Error::Degenerate("empty spanning set".into()));
    };
    if span.iter().any(|v| v.len() != len) {
        return Err(Error::Shape("spanning vectors have different lengths".into()));
    }
    let r = span_rank(field, span);
    if r != span.len() {
        return Err(Error::Degenerate(format!("spanning set of {} vectors has rank {r}", span.len())));
    }
    Ok(())
}

/// A subscheme of `P^n`: fat points plus linear spaces with
/// multiplicity, and a registry of named subspaces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchemeSpec {
    field: PrimeField,
    ambient: usize,
    points: Vec<FatPoint>,
    spaces: Vec<LinearSpace>,
    registry: BTreeMap<String, Vec<Vec<u32>>>,
    notes: Vec<String>,
}

impl SchemeSpec {
    pub fn new(field: PrimeField, ambient: usize) -> Self {
        Self { field, ambient, points: Vec::new(), spaces: Vec::new(), registry: BTreeMap::new(), notes: Vec::new() }
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn points(&self) -> &[FatPoint] {
        &self.points
    }

    pub fn spaces(&self) -> &[LinearSpace] {
        &self.spaces
    }

    pub fn registry(&self) -> &BTreeMap<String, Vec<Vec<u32>>> {
        &self.registry
    }

    /// Steps taken outside the residual/trace calculus, for reporting.
    pub fn notes(&self) -> &[String] {
        &self.notes
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty() && self.spaces.is_empty()
    }

    pub(crate) fn note(&mut self, s: String) {
        if !self.notes.contains(&s) {
            self.notes.push(s);
        }
    }

    /// Adds `mult · point`; multiplicity 0 is dropped. A point equal to an
    /// existing one raises that multiplicity to the maximum of the two.
    pub fn add_point(&mut self, point: ProjPoint, mult: u32) -> Result<()> {
        if point.ambient() != self.ambient {
            return Err(Error::Shape(format!("point lives in P^{}, scheme in P^{}", point.ambient(), self.ambient)));
        }
        if mult == 0 {
            return Ok(());
        }
        if let Some(fp) = self.points.iter_mut().find(|fp| fp.point.coords == point.coords) {
            fp.mult = fp.mult.max(mult);
            if matches!(point.tag, PointTag::Coordinate(_)) {
                fp.point.tag = point.tag;
            }
            return Ok(());
        }
        self.points.push(FatPoint { point, mult });
        Ok(())
    }

    pub fn add_coordinate_point(&mut self, i: usize, mult: u32) -> Result<()> {
        self.add_point(ProjPoint::coordinate(self.ambient, i)?, mult)
    }

    pub fn add_generic_point(&mut self, mult: u32, rng: &mut SampleRng) -> Result<()> {
        self.add_point(ProjPoint::generic(self.field, self.ambient, rng), mult)
    }

    /// Adds a random point of the registered subspace `name`.
    pub fn add_point_on(&mut self, name: &str, mult: u32, rng: &mut SampleRng) -> Result<()> {
        let span = self.subspace(name)?.to_vec();
        self.add_point(ProjPoint::on_span(self.field, &span, name, rng), mult)
    }

    /// Adds `ℓ · Λ`. Multiplicity 0 is dropped and a point-dimensional
    /// space becomes a fat point.
    pub fn add_space(&mut self, space: LinearSpace) -> Result<()> {
        if space.ambient() != self.ambient {
            return Err(Error::Shape(format!(
                "linear space lives in P^{}, scheme in P^{}",
                space.ambient(),
                self.ambient
            )));
        }
        if space.mult == 0 {
            return Ok(());
        }
        if space.dim() == 0 {
            let pt = ProjPoint::with_coords(self.field, space.span[0].clone(), PointTag::Generic)?;
            return self.add_point(pt, space.mult);
        }
        if space.dim() == self.ambient {
            return Err(Error::Degenerate("linear component fills the ambient space".into()));
        }
        self.spaces.push(space);
        Ok(())
    }

    /// Registers a named subspace; replaces any previous span under `name`.
    pub fn register(&mut self, name: &str, span: Vec<Vec<u32>>) -> Result<()> {
        check_span(self.field, &span)?;
        if span[0].len() != self.ambient + 1 {
            return Err(Error::Shape(format!("subspace {name} has wrong coordinate count")));
        }
        self.registry.insert(name.to_string(), span);
        Ok(())
    }

    pub fn subspace(&self, name: &str) -> Result<&[Vec<u32>]> {
        self.registry
            .get(name)
            .map(Vec::as_slice)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown subspace {name}")))
    }

    /// Adds the registered subspace `name` as a component.
    pub fn include_subspace(&mut self, name: &str, mult: u32) -> Result<()> {
        let span = self.subspace(name)?.to_vec();
        let space = LinearSpace::new(self.field, span, mult, Some(name.to_string()))?;
        self.add_space(space)
    }

    pub(crate) fn replace_points(&mut self, points: Vec<FatPoint>) -> Result<()> {
        self.points.clear();
        for fp in points {
            self.add_point(fp.point, fp.mult)?;
        }
        Ok(())
    }

    pub(crate) fn set_registry(&mut self, registry: BTreeMap<String, Vec<Vec<u32>>>) {
        self.registry = registry;
    }

    pub(crate) fn set_notes(&mut self, notes: Vec<String>) {
        self.notes = notes;
    }

    /// Union with another scheme in the same ambient space.
    pub fn union(&self, other: &SchemeSpec) -> Result<SchemeSpec> {
        if other.ambient != self.ambient || other.field != self.field {
            return Err(Error::Shape("union of schemes in different ambients".into()));
        }
        let mut out = self.clone();
        for fp in &other.points {
            out.add_point(fp.point.clone(), fp.mult)?;
        }
        for s in &other.spaces {
            out.add_space(s.clone())?;
        }
        for (k, v) in &other.registry {
            out.registry.entry(k.clone()).or_insert_with(|| v.clone());
        }
        for n in &other.notes {
            out.note(n.clone());
        }
        Ok(out)
    }

    /// Largest point multiplicity, 0 for no points.
    pub fn max_mult(&self) -> u32 {
        let p = self.points.iter().map(|f| f.mult).max().unwrap_or(0);
        let s = self.spaces.iter().map(|s| s.mult).max().unwrap_or(0);
        p.max(s)
    }

    /// Short human-readable summary, e.g. `P^4: 3·e1 + 2·pt + Λ^3`.
    pub fn describe(&self) -> String {
        let mut parts: Vec<String> = Vec::new();
        for fp in &self.points {
            let what = match &fp.point.tag {
                PointTag::Coordinate(i) => format!("e{i}"),
                PointTag::Generic => "P".to_string(),
                PointTag::OnSubspace(h) => format!("P[{h}]"),
            };
            parts.push(format!("{}{}", fp.mult, what));
        }
        for s in &self.spaces {
            let name = s.label.clone().unwrap_or_else(|| format!("L{}", s.dim()));
            parts.push(if s.mult == 1 { name } else { format!("{}{}", s.mult, name) });
        }
        if parts.is_empty() {
            format!("P^{}: empty", self.ambient)
        } else {
            format!("P^{}: {}", self.ambient, parts.join(" + "))
        }
    }
}

/// Two points on a registered plane: simple points for order 1, double
/// points for order 2.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JPair {
    pub plane: String,
    pub order: u32,
}

impl JPair {
    pub fn new(plane: &str, order: u32) -> Result<Self> {
        if !(1..=2).contains(&order) {
            return Err(Error::InvalidParameter(format!("J-pair order {order} is not 1 or 2")));
        }
        Ok(Self { plane: plane.to_string(), order })
    }

    /// Adds the two points to `spec`. The host must be a registered plane.
    pub fn realize(&self, spec: &mut SchemeSpec, rng: &mut SampleRng) -> Result<()> {
        let span = spec.subspace(&self.plane)?.to_vec();
        if span.len() != 3 {
            return Err(Error::InvalidParameter(format!(
                "J-pair host {} has dimension {}, not 2",
                self.plane,
                span.len() - 1
            )));
        }
        let field = spec.field();
        let a = ProjPoint::on_span(field, &span, &self.plane, rng);
        let b = loop {
            let b = ProjPoint::on_span(field, &span, &self.plane, rng);
            if b.coords != a.coords {
                break b;
            }
        };
        spec.add_point(a, self.order)?;
        spec.add_point(b, self.order)
    }
}

/// Basis of the span, keeping the first independent vectors.
pub(crate) fn span_basis(field: PrimeField, vectors: &[Vec<u32>]) -> Vec<Vec<u32>> {
    independent_subset(field, vectors)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::Seed;

    fn f() -> PrimeField {
        PrimeField::default_field()
    }

    #[test]
    fn coordinate_tag_is_checked() {
        assert!(ProjPoint::new(f(), vec![0, 3, 0], PointTag::Coordinate(1)).is_ok());
        assert!(ProjPoint::new(f(), vec![1, 3, 0], PointTag::Coordinate(1)).is_err());
        assert!(ProjPoint::new(f(), vec![0, 0, 0], PointTag::Generic).is_err());
    }

    #[test]
    fn multiplicity_zero_is_dropped_and_duplicates_merge() {
        let mut s = SchemeSpec::new(f(), 3);
        s.add_coordinate_point(1, 0).unwrap();
        assert!(s.is_empty());
        s.add_coordinate_point(1, 2).unwrap();
        s.add_coordinate_point(1, 3).unwrap();
        assert_eq!(s.points().len(), 1);
        assert_eq!(s.points()[0].mult, 3);
    }

    #[test]
    fn degenerate_spans_are_rejected() {
        let span = vec![vec![1, 0, 0, 0], vec![2, 0, 0, 0]];
        assert!(matches!(LinearSpace::new(f(), span, 1, None), Err(Error::Degenerate(_))));
    }

    #[test]
    fn jpair_points_lie_on_the_plane() {
        let mut s = SchemeSpec::new(f(), 4);
        let plane = vec![vec![0, 0, 1, 0, 0], vec![0, 0, 0, 1, 0], vec![1, 1, 1, 1, 1]];
        s.register("H1", plane.clone()).unwrap();
        let mut rng = Seed(5).rng();
        JPair::new("H1", 2).unwrap().realize(&mut s, &mut rng).unwrap();
        assert_eq!(s.points().len(), 2);
        for fp in s.points() {
            assert_eq!(fp.mult, 2);
            assert!(in_span(f(), &plane, fp.point.coords()));
        }
        assert!(JPair::new("H1", 3).is_err());
    }
}
