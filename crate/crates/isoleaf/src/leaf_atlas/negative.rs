//! Negative leaf of `χ = (1, −i)`: cylinder chambers `CC_u` and one
//! triangular chamber per characteristic triple.

use num_integer::Integer;
use rayon::prelude::*;

use super::{Atlas, AtlasBuilder, ChamberId, LeafType, PointTag, Region, SegmentEnd, SegmentLabel};
use crate::field::{complex_cross as cross, Cx, ExactField, Rational};
use crate::period_algebra::{
    primitive_elements, triples_in_box, unit_character_negative, AnyCharacter, CharacteristicTriple,
    LatticeElement,
};

pub(crate) fn value(u: LatticeElement) -> Cx<Rational> {
    Cx::from_ints(u.m, -u.n)
}

/// A lattice point `p` with `det(u, p) = 1`.
pub(crate) fn unit_partner(u: LatticeElement) -> LatticeElement {
    let e = u.m.extended_gcd(&u.n);
    let (x, y) = if e.gcd == 1 { (e.x, e.y) } else { (-e.x, -e.y) };
    let p = LatticeElement::new(-y, x);
    debug_assert_eq!(u.det(p), 1);
    p
}

/// Points `p_j = p0 + j·u` on the boundary line of `CC_u` that bound a
/// glued segment `[p, p+u]` of some triple within `bound`.
pub(crate) fn boundary_points(u: LatticeElement, bound: i64) -> Vec<LatticeElement> {
    let p0 = unit_partner(u);
    let reach = 4 * bound + 4;
    let glued: Vec<i64> = (-reach..=reach)
        .filter(|&j| {
            let p = LatticeElement::new(p0.m + j * u.m, p0.n + j * u.n);
            p.max_norm() <= bound && (p + u).max_norm() <= bound
        })
        .collect();
    let at = |j: i64| LatticeElement::new(p0.m + j * u.m, p0.n + j * u.n);
    match (glued.first(), glued.last()) {
        (Some(&a), Some(&b)) => (a..=b + 1).map(at).collect(),
        _ => vec![p0],
    }
}

/// Vertices `0, u1, −u2` of the triangular chamber in the `z1` chart of the
/// ordered triple `u`.
pub fn triangle_vertices(u: [LatticeElement; 3]) -> [Cx<Rational>; 3] {
    [Cx::zero(), value(u[0]), -value(u[1])]
}

/// Triangle sides in the `z1` chart, with the cylinder they border and the
/// translation onto its chart.
pub(crate) fn triangle_sides<R: ExactField>(v: &[Cx<R>; 3]) -> [(Cx<R>, Cx<R>, usize, Cx<R>); 3] {
    let minus_v2 = -v[1].clone();
    [
        (Cx::zero(), v[0].clone(), 0, v[1].clone()),
        (Cx::zero(), minus_v2.clone(), 1, -v[0].clone()),
        (v[0].clone(), minus_v2, 2, Cx::zero()),
    ]
}

pub fn build_negative(bound: u64) -> Atlas<Rational> {
    let b_i = bound as i64;
    let us = primitive_elements(b_i);
    let triples = triples_in_box(b_i);
    let mut chambers: Vec<(ChamberId, Region<Rational>)> = us
        .iter()
        .map(|&u| (ChamberId::Cyl { u }, Region::HalfPlane { u: value(u), bound: Rational::from_int(-1) }))
        .collect();
    chambers.extend(
        triples
            .iter()
            .map(|t| (ChamberId::Deg { triple: *t }, Region::Triangle { vertices: triangle_vertices(t.elements()) })),
    );
    let mut builder = AtlasBuilder::new(chambers);

    let lines: Vec<(ChamberId, Vec<LatticeElement>)> = (0..builder.chamber_count())
        .into_par_iter()
        .filter_map(|c| match builder.id(c) {
            ChamberId::Cyl { u } => Some((ChamberId::Cyl { u }, boundary_points(u, b_i))),
            _ => None,
        })
        .collect();
    for (id, pts) in &lines {
        let ChamberId::Cyl { u } = id else { unreachable!() };
        let c = builder.chamber(id).unwrap();
        let pts: Vec<Cx<Rational>> = pts.iter().map(|&p| value(p)).collect();
        builder.add_line(c, &value(*u), &pts);
    }

    for t in &triples {
        add_triangle(&mut builder, t);
    }
    builder.finish(
        LeafType::Negative,
        AnyCharacter::Gaussian(unit_character_negative()),
        bound,
        Vec::new(),
        |_, _| PointTag::Cone,
    )
}

fn add_triangle(builder: &mut AtlasBuilder<Rational>, t: &CharacteristicTriple) {
    let c = builder.chamber(&ChamberId::Deg { triple: *t }).unwrap();
    let els = t.elements();
    let v = [value(els[0]), value(els[1]), value(els[2])];
    let mut segs = Vec::new();
    for (i, (a, b, side, offset)) in triangle_sides(&v).into_iter().enumerate() {
        let s = builder.add_segment(c, a.clone(), SegmentEnd::Point(b.clone()), SegmentLabel::Side(i as u8 + 1));
        let cyl = builder.chamber(&ChamberId::Cyl { u: els[side] }).expect("triple element in bound");
        let target = builder
            .find_segment(cyl, &(a + offset.clone()), &(b + offset.clone()))
            .expect("cylinder segment for triangle side");
        builder.glue(s, target, offset);
        segs.push(s);
    }
    // Corners at 0, v1, −v2 with the interior swept counterclockwise.
    let sides = triangle_sides(&v);
    let leave = |k: usize, p: &Cx<Rational>| {
        let (a, b, _, _) = &sides[k];
        if a == p {
            b.clone() - a.clone()
        } else {
            a.clone() - b.clone()
        }
    };
    for (p, i, j) in [(Cx::zero(), 0, 1), (v[0].clone(), 0, 2), (-v[1].clone(), 1, 2)] {
        let (from, to) = if cross(&leave(i, &p), &leave(j, &p)).is_pos() { (i, j) } else { (j, i) };
        builder.add_corner(c, p, segs[from], segs[to]);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::leaf_atlas::singularity_star;

    #[test]
    fn partner_has_unit_determinant() {
        for u in primitive_elements(4) {
            assert_eq!(u.det(unit_partner(u)), 1);
        }
    }

    fn sorted(v: &[Cx<Rational>]) -> Vec<Cx<Rational>> {
        let mut v = v.to_vec();
        v.sort_by_key(|z| format!("{z:?}"));
        v
    }

    #[test]
    fn example_triangle() {
        let u = [LatticeElement::new(1, 0), LatticeElement::new(0, 1), LatticeElement::new(-1, -1)];
        let want = sorted(&[Cx::zero(), Cx::from_ints(1, 0), Cx::from_ints(0, 1)]);
        assert_eq!(sorted(&triangle_vertices(u)), want);
        // the atlas stores the chart of the canonical rotation, a translate
        let a = build_negative(1);
        let t = CharacteristicTriple::new(u[0], u[1], u[2]);
        let c = a.chamber_index(&ChamberId::Deg { triple: t }).unwrap();
        let Region::Triangle { vertices } = &a.chambers[c].region else { panic!() };
        let shift = Cx::from_ints(1, 0);
        let moved: Vec<Cx<Rational>> = vertices.iter().map(|z| z.clone() + shift.clone()).collect();
        assert_eq!(sorted(&moved), want);
    }

    #[test]
    fn parallelogram_star() {
        let a = build_negative(2);
        // lattice point (0,1) ↦ −i on the boundary of CC_1
        let s = singularity_star(&a, &ChamberId::Cyl { u: LatticeElement::new(1, 0) }, &Cx::from_ints(0, -1)).unwrap();
        assert_eq!(s.angle_pi, Some(6));
        let ids = s.chambers();
        assert_eq!(ids.iter().filter(|c| matches!(c, ChamberId::Cyl { .. })).count(), 4);
        assert_eq!(ids.iter().filter(|c| matches!(c, ChamberId::Deg { .. })).count(), 4);
        for u in [LatticeElement::new(1, 0), LatticeElement::new(0, 1)] {
            assert!(ids.contains(&ChamberId::Cyl { u }));
            assert!(ids.contains(&ChamberId::Cyl { u: -u }));
        }
    }

    #[test]
    fn complete_stars_are_six_pi() {
        let a = build_negative(3);
        assert!(!a.singularities.is_empty());
        assert!(a.singularities.iter().all(|s| s.angle_pi == 6));
    }
}
