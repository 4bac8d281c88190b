//! Arithmetic leaf of a real character with `Γ = ℤ`: the chambers
//! `CC^±_{k,l}` and the four boundary gluing rules.

use num_integer::Integer;
use rayon::prelude::*;

use super::{Atlas, AtlasBuilder, AtlasError, ChamberId, CompletionPoint, LeafType, PointTag, Region};
use crate::field::{Cx, ExactField, Rational};
use crate::period_algebra::{unit_character_arith, AnyCharacter};
use crate::surface_kernel::{is_admissible, Sign};

/// Partner of a boundary segment: the chamber, the segment in its chart and
/// the translation `t ↦ t + offset` between the charts.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GlueTarget {
    pub k: u64,
    pub l: u64,
    pub sign: Sign,
    pub segment: (i64, i64),
    pub offset: i64,
}

/// Rule for a segment of `CC⁺_{k,l}`; `None` if it is not canonical.
fn plus_rule(k: i64, l: i64, (a, b): (i64, i64)) -> Option<(i64, i64, (i64, i64))> {
    if (a, b) == (l - k, 0) {
        let n = Integer::div_floor(&l, &(k - l));
        return Some((k - l, (n + 1) * l - n * k, (-k, -l)));
    }
    if l != 0 && (a, b) == (0, l) {
        let n = Integer::div_ceil(&k, &l) - 1;
        return Some((l, (n + 1) * l - k, (k - l, k)));
    }
    if b - a != k {
        return None;
    }
    if b <= l - k && (l - b) % k == 0 {
        let n = (l - b) / k;
        return Some(((n + 1) * k - l, k, (-k, 0)));
    }
    if a >= l && (a - l) % k == 0 {
        let n = (a - l) / k;
        return Some(((n + 1) * k + l, n * k + l, (0, k)));
    }
    None
}

/// Chamber and segment glued to `segment` of `CC^sign_{k,l}`. Segments are
/// given by their endpoints in increasing order.
pub fn glue_target(k: u64, l: u64, sign: Sign, segment: (i64, i64)) -> Result<GlueTarget, AtlasError> {
    let bad = || AtlasError::BadSegment(format!("{},{}", segment.0, segment.1));
    if !is_admissible(k, l) {
        return Err(bad());
    }
    let (ki, li) = (k as i64, l as i64);
    match sign {
        Sign::Plus => {
            let (k2, l2, (c, d)) = plus_rule(ki, li, segment).ok_or_else(bad)?;
            Ok(GlueTarget { k: k2 as u64, l: l2 as u64, sign: Sign::Minus, segment: (c, d), offset: c - segment.0 })
        }
        Sign::Minus => {
            let (a, b) = segment;
            let (k2, l2, (c, d)) = plus_rule(ki, li, (-b, -a)).ok_or_else(bad)?;
            Ok(GlueTarget { k: k2 as u64, l: l2 as u64, sign: Sign::Plus, segment: (-d, -c), offset: -d - a })
        }
    }
}

/// Glued segments of `CC⁺_{k,l}` whose partner chamber has index at most
/// `kmax`, with their targets.
fn plus_segments(k: i64, l: i64, kmax: i64) -> Vec<((i64, i64), (i64, i64, (i64, i64)))> {
    let mut segs = Vec::new();
    let mut push = |s: (i64, i64)| {
        let r = plus_rule(k, l, s).expect("canonical segment");
        if r.0 <= kmax {
            segs.push((s, r));
        }
    };
    push((l - k, 0));
    if l != 0 {
        push((0, l));
    }
    let mut n = 1;
    while (n + 1) * k - l <= kmax {
        push((-(n + 1) * k + l, -n * k + l));
        n += 1;
    }
    let mut n = 0;
    while (n + 1) * k + l <= kmax {
        push((n * k + l, (n + 1) * k + l));
        n += 1;
    }
    segs.sort();
    segs
}

pub fn admissible_pairs(kmax: u64) -> Vec<(u64, u64)> {
    (1..=kmax).flat_map(|k| (0..k).filter(move |&l| is_admissible(k, l)).map(move |l| (k, l))).collect()
}

fn real(x: i64) -> Cx<Rational> {
    Cx::from_ints(x, 0)
}

pub fn build_arithmetic(kmax: u64) -> Atlas<Rational> {
    let pairs = admissible_pairs(kmax);
    let chambers: Vec<(ChamberId, Region<Rational>)> = pairs
        .iter()
        .flat_map(|&(k, l)| {
            [Sign::Plus, Sign::Minus].map(|sign| {
                let u = real(sign.as_i64() * k as i64);
                (ChamberId::CylArith { k, l, sign }, Region::HalfPlane { u, bound: Rational::from_int(0) })
            })
        })
        .collect();
    let mut b = AtlasBuilder::new(chambers);

    let lists: Vec<((u64, u64), Vec<((i64, i64), (i64, i64, (i64, i64)))>)> = pairs
        .par_iter()
        .map(|&(k, l)| ((k, l), plus_segments(k as i64, l as i64, kmax as i64)))
        .collect();
    let lists: std::collections::HashMap<_, _> = lists.into_iter().collect();

    for c in 0..b.chamber_count() {
        let ChamberId::CylArith { k, l, sign } = b.id(c) else { unreachable!() };
        let segs = &lists[&(k, l)];
        let mut pts: Vec<i64> = segs.iter().flat_map(|((a, e), _)| [*a, *e]).collect();
        pts.sort();
        pts.dedup();
        // negating the ascending list orders the minus chamber along u = −k
        let s = sign.as_i64();
        let pts: Vec<Cx<Rational>> = pts.into_iter().map(|t| real(s * t)).collect();
        b.add_line(c, &real(s * k as i64), &pts);
    }

    for &(k, l) in &pairs {
        for &((a, e), (k2, l2, (c, d))) in &lists[&(k, l)] {
            let (k2, l2) = (k2 as u64, l2 as u64);
            let id = |k, l, sign| ChamberId::CylArith { k, l, sign };
            let src = b.chamber(&id(k, l, Sign::Plus)).unwrap();
            let dst = b.chamber(&id(k2, l2, Sign::Minus)).unwrap();
            let sa = b.find_segment(src, &real(a), &real(e)).unwrap();
            let sb = b.find_segment(dst, &real(c), &real(d)).expect("partner segment on the minus chamber");
            b.glue(sa, sb, real(c - a));
            let msrc = b.chamber(&id(k, l, Sign::Minus)).unwrap();
            let mdst = b.chamber(&id(k2, l2, Sign::Plus)).unwrap();
            let ma = b.find_segment(msrc, &real(-a), &real(-e)).unwrap();
            let mb = b.find_segment(mdst, &real(-c), &real(-d)).expect("partner segment on the plus chamber");
            b.glue(ma, mb, real(a - c));
        }
    }

    let center = b.chamber(&ChamberId::CylArith { k: 1, l: 0, sign: Sign::Plus });
    let completion = center
        .map(|c| vec![CompletionPoint { chamber: c, point: Cx::zero(), tag: "pinched-torus" }])
        .unwrap_or_default();
    b.finish(
        LeafType::Arithmetic,
        AnyCharacter::Rational(unit_character_arith()),
        kmax,
        completion,
        |corners, chambers| {
            let is_center = corners.iter().any(|c| {
                matches!(chambers[c.chamber].id, ChamberId::CylArith { k: 1, l: 0, .. }) && c.point.is_zero()
            });
            if is_center {
                PointTag::PinchedTorus
            } else {
                PointTag::Cone
            }
        },
    )
}

/// A path of glued chambers from `CC⁺_{k,l}` down to `CC^±_{1,0}`, each step
/// through the segment `[0, l]` or its mirror `[−l, 0]`.
pub fn reachability_chain(k: u64, l: u64) -> Result<Vec<ChamberId>, AtlasError> {
    if !is_admissible(k, l) {
        return Err(AtlasError::BadSegment(format!("({k},{l}) not admissible")));
    }
    let mut chain = vec![ChamberId::CylArith { k, l, sign: Sign::Plus }];
    let (mut k, mut l, mut sign) = (k, l, Sign::Plus);
    while l != 0 {
        let seg = if sign == Sign::Plus { (0, l as i64) } else { (-(l as i64), 0) };
        let t = glue_target(k, l, sign, seg)?;
        chain.push(ChamberId::CylArith { k: t.k, l: t.l, sign: t.sign });
        (k, l, sign) = (t.k, t.l, t.sign);
    }
    Ok(chain)
}
