//! Real leaf of `χ = (1, θ)` with `θ` a quadratic irrational, obtained as
//! the contraction limit of the negative leaf. Triangular chambers collapse
//! onto their long side, which is then glued directly to the two short
//! sides.

use std::cmp::Ordering;
use std::collections::HashMap;

use num_traits::{One, Zero};
use rayon::prelude::*;

use super::{Atlas, AtlasBuilder, AtlasError, ChamberId, LeafType, PointTag, Region};
use crate::field::{Cx, ExactField, QuadReal};
use crate::period_algebra::{
    primitive_elements, triples_in_box, AnyCharacter, CharacteristicTriple, LatticeElement, PeriodCharacter,
};

/// `m + nθ`, the limit image of the negative-leaf period `m − n·i`.
pub fn projection(u: LatticeElement, theta: &QuadReal) -> QuadReal {
    QuadReal::from_int(u.m) + QuadReal::from_int(u.n) * theta.clone()
}

/// One glued pair produced by a collapsed triangle: the interval on the long
/// side's cylinder, the matching interval on the short side's cylinder and
/// the translation between them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CollapsedGluing {
    pub long: LatticeElement,
    pub short: LatticeElement,
    pub long_interval: (QuadReal, QuadReal),
    pub short_interval: (QuadReal, QuadReal),
    pub offset: QuadReal,
}

/// The two gluings left by the collapsed triangle of `t`.
pub fn collapse_triangle(t: &CharacteristicTriple, theta: &QuadReal) -> [CollapsedGluing; 2] {
    let u = t.elements();
    let p = u.map(|x| projection(x, theta));
    // z1-chart endpoints of each side and the translation to its cylinder
    let sides = [
        (QuadReal::zero(), p[0].clone(), p[1].clone()),
        (QuadReal::zero(), -p[1].clone(), -p[0].clone()),
        (p[0].clone(), -p[1].clone(), QuadReal::zero()),
    ];
    let verts = [QuadReal::zero(), p[0].clone(), -p[1].clone()];
    let mid = (0..3)
        .find(|&i| {
            let a = verts[(i + 1) % 3].cmp_exact(&verts[i]);
            let b = verts[i].cmp_exact(&verts[(i + 2) % 3]);
            a == b
        })
        .expect("three distinct real vertices");
    // side opposite the middle vertex: vertex 0 ↦ side 3, v1 ↦ side 2, −v2 ↦ side 1
    let long = [2, 1, 0][mid];
    let shorts: Vec<usize> = (0..3).filter(|&s| s != long).collect();
    let ci = sides[long].2.clone();
    [0, 1].map(|k| {
        let j = shorts[k];
        let (a, b, cj) = sides[j].clone();
        CollapsedGluing {
            long: u[long],
            short: u[j],
            long_interval: (a.clone() + ci.clone(), b.clone() + ci.clone()),
            short_interval: (a + cj.clone(), b + cj.clone()),
            offset: cj - ci.clone(),
        }
    })
}

fn check_theta(theta: &QuadReal) -> Result<(), AtlasError> {
    if theta.as_rational().is_some() {
        return Err(AtlasError::RationalTheta);
    }
    if !theta.is_pos() || theta.cmp_exact(&QuadReal::one()) != Ordering::Less {
        return Err(AtlasError::NonQuadraticTheta);
    }
    Ok(())
}

pub fn build_nonarith(theta: &QuadReal, bound: u64) -> Result<Atlas<QuadReal>, AtlasError> {
    check_theta(theta)?;
    let b_i = bound as i64;
    let us = primitive_elements(b_i);
    let chambers: Vec<(ChamberId, Region<QuadReal>)> = us
        .iter()
        .map(|&u| (ChamberId::Cyl { u }, Region::HalfPlane { u: Cx::real(projection(u, theta)), bound: QuadReal::zero() }))
        .collect();
    let mut builder = AtlasBuilder::new(chambers);

    let glued: Vec<CollapsedGluing> = triples_in_box(b_i)
        .par_iter()
        .flat_map_iter(|t| collapse_triangle(t, theta))
        .collect();
    let mut points: HashMap<LatticeElement, Vec<QuadReal>> = HashMap::new();
    for g in &glued {
        let (a, b) = &g.long_interval;
        points.entry(g.long).or_default().extend([a.clone(), b.clone()]);
        let (a, b) = &g.short_interval;
        points.entry(g.short).or_default().extend([a.clone(), b.clone()]);
    }
    for c in 0..builder.chamber_count() {
        let ChamberId::Cyl { u } = builder.id(c) else { unreachable!() };
        let dir = projection(u, theta);
        let mut pts = points.remove(&u).unwrap_or_else(|| vec![QuadReal::zero()]);
        pts.sort_by(|x, y| x.cmp_exact(y));
        pts.dedup();
        if dir.is_neg() {
            pts.reverse();
        }
        let pts: Vec<Cx<QuadReal>> = pts.into_iter().map(Cx::real).collect();
        builder.add_line(c, &Cx::real(dir), &pts);
    }
    for g in &glued {
        let seg = |builder: &AtlasBuilder<QuadReal>, u: LatticeElement, (a, b): &(QuadReal, QuadReal)| {
            let c = builder.chamber(&ChamberId::Cyl { u }).unwrap();
            builder.find_segment(c, &Cx::real(a.clone()), &Cx::real(b.clone())).expect("collapsed side segment")
        };
        let sa = seg(&builder, g.long, &g.long_interval);
        let sb = seg(&builder, g.short, &g.short_interval);
        builder.glue(sa, sb, Cx::real(g.offset.clone()));
    }
    let chi = PeriodCharacter::new(Cx::real(QuadReal::one()), Cx::real(theta.clone())).expect("nonzero");
    Ok(builder.finish(
        LeafType::NonArithmetic,
        AnyCharacter::Quadratic { d: theta.radicand(), chi },
        bound,
        Vec::new(),
        |_, _| PointTag::Cone,
    ))
}
