//! Residual, trace and projection with respect to a hyperplane.
//!
//! A hyperplane `Π = {c · x = 0}` is identified with `P^{n-1}` by deleting
//! the coordinate at the first nonzero entry of `c`. Coordinate points
//! `e_j` with `c_j = 0` stay coordinate points of `Π`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::scheme::{
    dot, in_span, random_combination, span_basis, FatPoint, LinearSpace, PointTag, ProjPoint, SchemeSpec,
};
use crate::error::{Error, Result};
use crate::exactla::{normalize_projective, nullspace, PrimeField, SampleRng};

/// A hyperplane of `P^n` given by a nonzero linear form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hyperplane {
    form: Vec<u32>,
}

impl Hyperplane {
    /// The form is normalized so that its first nonzero entry is 1.
    pub fn from_form(field: PrimeField, mut form: Vec<u32>) -> Result<Self> {
        if form.len() < 2 {
            return Err(Error::Shape("a hyperplane needs an ambient of dimension at least 1".into()));
        }
        for x in form.iter_mut() {
            *x = field.reduce(*x as u64);
        }
        if !normalize_projective(field, &mut form) {
            return Err(Error::Degenerate("zero linear form".into()));
        }
        Ok(Self { form })
    }

    /// The unique hyperplane spanned by `points`; they must span one.
    pub fn through(field: PrimeField, points: &[Vec<u32>]) -> Result<Self> {
        let cols = points.first().map(Vec::len).ok_or_else(|| Error::Degenerate("no points".into()))?;
        let ker = nullspace(field, cols, points);
        if ker.len() != 1 {
            return Err(Error::Degenerate(format!(
                "points span a subspace of codimension {}, not a hyperplane",
                ker.len()
            )));
        }
        Self::from_form(field, ker[0].clone())
    }

    /// A random hyperplane containing `points` (which may be empty).
    pub fn generic_through(
        field: PrimeField,
        ambient: usize,
        points: &[Vec<u32>],
        rng: &mut SampleRng,
    ) -> Result<Self> {
        let ker = nullspace(field, ambient + 1, points);
        if ker.is_empty() {
            return Err(Error::Degenerate("points span the whole space".into()));
        }
        loop {
            let form = random_combination(field, &ker, rng);
            if form.iter().any(|&x| x != 0) {
                return Self::from_form(field, form);
            }
        }
    }

    pub fn form(&self) -> &[u32] {
        &self.form
    }

    pub fn ambient(&self) -> usize {
        self.form.len() - 1
    }

    /// Coordinate deleted by the frame of `Π`.
    pub fn pivot(&self) -> usize {
        self.form.iter().position(|&x| x != 0).expect("nonzero form")
    }

    pub fn contains_point(&self, field: PrimeField, v: &[u32]) -> bool {
        dot(field, &self.form, v) == 0
    }

    pub fn contains_span(&self, field: PrimeField, span: &[Vec<u32>]) -> bool {
        span.iter().all(|v| self.contains_point(field, v))
    }

    /// Coordinates in `Π` of a vector lying on `Π`.
    pub fn to_local(&self, v: &[u32]) -> Vec<u32> {
        let j0 = self.pivot();
        v.iter().enumerate().filter(|&(j, _)| j != j0).map(|(_, &x)| x).collect()
    }

    /// Inverse of [`Hyperplane::to_local`].
    pub fn to_global(&self, field: PrimeField, y: &[u32]) -> Vec<u32> {
        let j0 = self.pivot();
        let mut v = Vec::with_capacity(y.len() + 1);
        v.extend_from_slice(&y[..j0]);
        v.push(0);
        v.extend_from_slice(&y[j0..]);
        // c_{j0} = 1 after normalization.
        let s = dot(field, &self.form, &v);
        v[j0] = field.neg(s);
        v
    }

    /// A basis of `Π` as vectors of the ambient space.
    pub fn span(&self, field: PrimeField) -> Vec<Vec<u32>> {
        nullspace(field, self.form.len(), std::slice::from_ref(&self.form))
    }

    /// Span of `Λ ∩ Π` for `Λ ⊄ Π`; empty when `Λ` is a point off `Π`.
    pub fn intersect_span(&self, field: PrimeField, span: &[Vec<u32>]) -> Vec<Vec<u32>> {
        let vals: Vec<u32> = span.iter().map(|v| dot(field, &self.form, v)).collect();
        nullspace(field, span.len(), &[vals])
            .into_iter()
            .map(|lambda| {
                let mut v = vec![0u32; self.form.len()];
                for (l, s) in lambda.iter().zip(span) {
                    for (x, &y) in v.iter_mut().zip(s) {
                        *x = field.add(*x, field.mul(*l, y));
                    }
                }
                v
            })
            .collect()
    }

    /// Projection of `v` from the apex `q` (not on `Π`) into `Π`:
    /// `(c·q) v - (c·v) q`, in ambient coordinates.
    pub fn project(&self, field: PrimeField, q: &[u32], v: &[u32]) -> Vec<u32> {
        let cq = dot(field, &self.form, q);
        let cv = dot(field, &self.form, v);
        v.iter().zip(q).map(|(&x, &y)| field.sub(field.mul(cq, x), field.mul(cv, y))).collect()
    }
}

/// `Res_Π X`, the scheme of `(I_X : I_Π)`.
///
/// Points on `Π` and linear components inside `Π` lose one from their
/// multiplicity. Linear components not inside `Π` are kept unchanged and
/// the step is noted.
pub fn residual(spec: &SchemeSpec, pi: &Hyperplane) -> Result<SchemeSpec> {
    check_ambient(spec, pi)?;
    let field = spec.field();
    let mut out = SchemeSpec::new(field, spec.ambient());
    out.set_registry(spec.registry().clone());
    out.set_notes(spec.notes().to_vec());
    for fp in spec.points() {
        let on = pi.contains_point(field, fp.point.coords());
        out.add_point(fp.point.clone(), if on { fp.mult - 1 } else { fp.mult })?;
    }
    for s in spec.spaces() {
        let mut s = s.clone();
        if pi.contains_span(field, s.span()) {
            s.mult -= 1;
        } else {
            out.note("residual kept a linear component not contained in the hyperplane".into());
        }
        out.add_space(s)?;
    }
    Ok(out)
}

/// `Tr_Π X`, the schematic intersection `X ∩ Π`, as a scheme of `Π`.
pub fn trace(spec: &SchemeSpec, pi: &Hyperplane) -> Result<SchemeSpec> {
    check_ambient(spec, pi)?;
    let field = spec.field();
    let mut registry = BTreeMap::new();
    let mut contained = BTreeMap::new();
    for (name, span) in spec.registry() {
        let inside = pi.contains_span(field, span);
        contained.insert(name.clone(), inside);
        let local: Vec<Vec<u32>> = if inside {
            span.iter().map(|v| pi.to_local(v)).collect()
        } else {
            pi.intersect_span(field, span).iter().map(|v| pi.to_local(v)).collect()
        };
        if !local.is_empty() {
            registry.insert(name.clone(), local);
        }
    }
    let mut out = SchemeSpec::new(field, spec.ambient() - 1);
    out.set_registry(registry);
    out.set_notes(spec.notes().to_vec());
    for fp in spec.points() {
        if !pi.contains_point(field, fp.point.coords()) {
            continue;
        }
        let mut tag = fp.point.tag().clone();
        if let PointTag::OnSubspace(h) = &tag {
            if contained.get(h) == Some(&false) {
                return Err(Error::Degenerate(format!(
                    "point on {h} lies on the hyperplane but {h} meets it non-transversally"
                )));
            }
            if !out.registry().contains_key(h) {
                tag = PointTag::Generic;
            }
        }
        let pt = ProjPoint::with_coords(field, pi.to_local(fp.point.coords()), tag)?;
        out.add_point(pt, fp.mult)?;
    }
    for s in spec.spaces() {
        let span: Vec<Vec<u32>> = if pi.contains_span(field, s.span()) {
            s.span().iter().map(|v| pi.to_local(v)).collect()
        } else {
            pi.intersect_span(field, s.span()).iter().map(|v| pi.to_local(v)).collect()
        };
        if span.is_empty() {
            continue;
        }
        out.add_space(LinearSpace::new(field, span, s.mult, s.label.clone())?)?;
    }
    Ok(out)
}

/// Projection from `apex` (not on `Π`) into `Π`. Fails if a linear
/// component contains the apex.
pub fn project_from_point(spec: &SchemeSpec, apex: &[u32], pi: &Hyperplane) -> Result<SchemeSpec> {
    project(spec, apex, pi, false)
}

/// Like [`project_from_point`], but a linear component through the apex
/// is replaced by its image, the cone section of one dimension less.
pub fn project_cone_from_point(spec: &SchemeSpec, apex: &[u32], pi: &Hyperplane) -> Result<SchemeSpec> {
    project(spec, apex, pi, true)
}

fn project(spec: &SchemeSpec, apex: &[u32], pi: &Hyperplane, cone: bool) -> Result<SchemeSpec> {
    check_ambient(spec, pi)?;
    let field = spec.field();
    if apex.len() != spec.ambient() + 1 {
        return Err(Error::Shape("apex has the wrong number of coordinates".into()));
    }
    if pi.contains_point(field, apex) {
        return Err(Error::Degenerate("projection apex lies on the target hyperplane".into()));
    }
    let image = |span: &[Vec<u32>]| -> Vec<Vec<u32>> {
        let projected: Vec<Vec<u32>> = span.iter().map(|v| pi.to_local(&pi.project(field, apex, v))).collect();
        span_basis(field, &projected)
    };
    let mut registry = BTreeMap::new();
    for (name, span) in spec.registry() {
        let img = image(span);
        if !img.is_empty() {
            registry.insert(name.clone(), img);
        }
    }
    let mut out = SchemeSpec::new(field, spec.ambient() - 1);
    out.set_registry(registry);
    out.set_notes(spec.notes().to_vec());
    let mut apex_n = apex.to_vec();
    normalize_projective(field, &mut apex_n);
    let mut points: Vec<FatPoint> = Vec::new();
    for fp in spec.points() {
        if fp.point.coords() == apex_n.as_slice() {
            continue;
        }
        let mut tag = fp.point.tag().clone();
        if let PointTag::OnSubspace(h) = &tag {
            if !out.registry().contains_key(h) {
                tag = PointTag::Generic;
            }
        }
        let v = pi.to_local(&pi.project(field, apex, fp.point.coords()));
        points.push(FatPoint { point: ProjPoint::with_coords(field, v, tag)?, mult: fp.mult });
    }
    for s in spec.spaces() {
        let through = in_span(field, s.span(), apex);
        if through && !cone {
            return Err(Error::Degenerate(format!(
                "linear component {} contains the projection apex",
                s.label.as_deref().unwrap_or("(unnamed)")
            )));
        }
        let img = image(s.span());
        debug_assert_eq!(img.len(), if through { s.span().len() - 1 } else { s.span().len() });
        if img.is_empty() {
            continue;
        }
        if img.len() == 1 {
            let pt = ProjPoint::with_coords(field, img[0].clone(), PointTag::Generic)?;
            points.push(FatPoint { point: pt, mult: s.mult });
        } else {
            out.add_space(LinearSpace::new(field, img, s.mult, s.label.clone())?)?;
        }
    }
    out.replace_points(points)?;
    Ok(out)
}

fn check_ambient(spec: &SchemeSpec, pi: &Hyperplane) -> Result<()> {
    if pi.ambient() != spec.ambient() {
        return Err(Error::Shape(format!(
            "hyperplane of P^{} applied to a scheme in P^{}",
            pi.ambient(),
            spec.ambient()
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::Seed;

    fn f() -> PrimeField {
        PrimeField::default_field()
    }

    fn e(n: usize, i: usize) -> Vec<u32> {
        let mut v = vec![0; n + 1];
        v[i] = 1;
        v
    }

    #[test]
    fn frame_round_trip() {
        let field = f();
        let pi = Hyperplane::from_form(field, vec![0, 3, 5, 0]).unwrap();
        assert_eq!(pi.pivot(), 1);
        let mut rng = Seed(3).rng();
        for _ in 0..10 {
            let y: Vec<u32> = (0..3).map(|_| crate::exactla::random_element(field, &mut rng)).collect();
            let v = pi.to_global(field, &y);
            assert!(pi.contains_point(field, &v));
            assert_eq!(pi.to_local(&v), y);
        }
    }

    #[test]
    fn residual_drops_multiplicity_on_the_hyperplane() {
        let field = f();
        let mut s = SchemeSpec::new(field, 3);
        s.add_coordinate_point(1, 3).unwrap();
        s.add_coordinate_point(2, 3).unwrap();
        // Π = {x_1 = 0} contains e_2 but not e_1.
        let pi = Hyperplane::from_form(field, e(3, 1)).unwrap();
        let r = residual(&s, &pi).unwrap();
        let mults: Vec<u32> = r.points().iter().map(|p| p.mult).collect();
        assert_eq!(mults, vec![3, 2]);
        let mut single = SchemeSpec::new(field, 2);
        single.add_coordinate_point(0, 1).unwrap();
        let pi0 = Hyperplane::from_form(field, e(2, 1)).unwrap();
        assert!(residual(&single, &pi0).unwrap().is_empty());
    }

    #[test]
    fn trace_keeps_points_on_the_hyperplane_only() {
        let field = f();
        let mut s = SchemeSpec::new(field, 3);
        s.add_coordinate_point(0, 2).unwrap();
        s.add_coordinate_point(3, 2).unwrap();
        let pi = Hyperplane::from_form(field, e(3, 0)).unwrap();
        let t = trace(&s, &pi).unwrap();
        assert_eq!(t.ambient(), 2);
        assert_eq!(t.points().len(), 1);
        assert_eq!(t.points()[0].point.tag(), &PointTag::Coordinate(2));
        assert_eq!(t.points()[0].mult, 2);
    }

    #[test]
    fn trace_of_a_plane_is_a_line() {
        let field = f();
        let mut s = SchemeSpec::new(field, 3);
        let plane = vec![e(3, 0), e(3, 1), vec![1, 1, 1, 1]];
        s.add_space(LinearSpace::new(field, plane, 1, Some("H".into())).unwrap()).unwrap();
        let pi = Hyperplane::from_form(field, e(3, 3)).unwrap();
        let t = trace(&s, &pi).unwrap();
        assert_eq!(t.spaces().len(), 1);
        assert_eq!(t.spaces()[0].dim(), 1);
    }

    #[test]
    fn projection_of_points() {
        let field = f();
        let mut s = SchemeSpec::new(field, 2);
        s.add_point(ProjPoint::new(field, vec![1, 2, 3], PointTag::Generic).unwrap(), 2).unwrap();
        s.add_coordinate_point(1, 1).unwrap();
        s.add_coordinate_point(0, 4).unwrap();
        // Apex e_0, target {x_0 = 0}: drop the first coordinate.
        let pi = Hyperplane::from_form(field, e(2, 0)).unwrap();
        let w = project_from_point(&s, &e(2, 0), &pi).unwrap();
        let got: Vec<(Vec<u32>, u32)> = w.points().iter().map(|p| (p.point.coords().to_vec(), p.mult)).collect();
        let three_halves = field.mul(3, field.inv(2));
        assert_eq!(got, vec![(vec![1, three_halves], 2), (vec![1, 0], 1)]);
    }

    #[test]
    fn strict_projection_rejects_components_through_the_apex() {
        let field = f();
        let mut s = SchemeSpec::new(field, 3);
        s.add_space(LinearSpace::new(field, vec![e(3, 0), vec![0, 1, 1, 1]], 1, None).unwrap()).unwrap();
        let pi = Hyperplane::from_form(field, e(3, 0)).unwrap();
        assert!(project_from_point(&s, &e(3, 0), &pi).is_err());
        let w = project_cone_from_point(&s, &e(3, 0), &pi).unwrap();
        assert!(w.spaces().is_empty());
        assert_eq!(w.points().len(), 1);
    }
}
