//! Positive leaf of `χ = (1, i)`: the slit torus chamber with a cylinder
//! chamber hanging off every slit.

use rayon::prelude::*;

use super::{
    mark_incomplete, Atlas, AtlasBuilder, ChamberId, CompletionPoint, LeafType, PointTag, Region, SegmentEnd,
    SegmentLabel,
};
use crate::field::{Cx, ExactField, Rational};
use crate::period_algebra::{primitive_elements, unit_character_positive, AnyCharacter, LatticeElement};

fn gauss(u: LatticeElement) -> Cx<Rational> {
    Cx::from_ints(u.m, u.n)
}

pub fn build_positive(bound: u64) -> Atlas<Rational> {
    let gammas = primitive_elements(bound as i64);
    let mut chambers: Vec<(ChamberId, Region<Rational>)> = gammas
        .par_iter()
        .map(|&g| (ChamberId::Cyl { u: g }, Region::HalfPlane { u: gauss(g), bound: Rational::from_int(0) }))
        .collect();
    chambers.push((ChamberId::Torus, Region::SlitPlane));
    let mut b = AtlasBuilder::new(chambers);
    let torus = b.chamber(&ChamberId::Torus).unwrap();

    // Slit sides first, in chamber order of the matching cylinders.
    let mut left = std::collections::HashMap::new();
    let mut right = std::collections::HashMap::new();
    let mut order: Vec<LatticeElement> = gammas.clone();
    order.sort_by_key(|g| ChamberId::Cyl { u: *g }.order_key());
    for g in &order {
        let v = gauss(*g);
        let l = b.add_segment(torus, v.clone(), SegmentEnd::Ray(v.clone()), SegmentLabel::SlitLeft);
        let r = b.add_segment(torus, v.clone(), SegmentEnd::Ray(v.clone()), SegmentLabel::SlitRight);
        b.add_corner(torus, v, l, r);
        left.insert(*g, l);
        right.insert(*g, r);
    }
    let mut halves = std::collections::HashMap::new();
    for g in &order {
        let c = b.chamber(&ChamberId::Cyl { u: *g }).unwrap();
        let segs = b.add_line(c, &gauss(*g), &[Cx::zero()]);
        halves.insert(*g, (segs[0], segs[1]));
    }
    for g in &order {
        let v = gauss(*g);
        let (_, pos) = halves[g];
        let (neg_of_minus, _) = halves[&-*g];
        b.glue(left[g], pos, -v.clone());
        b.glue(right[g], neg_of_minus, -v);
    }
    let mut atlas = b.finish(
        LeafType::Positive,
        AnyCharacter::Gaussian(unit_character_positive()),
        bound,
        vec![CompletionPoint { chamber: torus, point: Cx::zero(), tag: "torus-with-plane" }],
        |_, _| PointTag::Cone,
    );
    mark_incomplete(&mut atlas, torus);
    atlas
}
