use std::collections::HashMap;
use std::f64::consts::PI;

use rayon::prelude::*;

use super::{Atlas, AtlasError, Chamber, ChamberId, Corner, PointTag, Singularity};
use crate::field::{complex_cross as cross, complex_dot as dot, Cx, ExactField};

/// Lookup tables for walking stars.
pub(crate) struct StarIndex<R> {
    gluing: HashMap<usize, usize>,
    by_from: HashMap<(usize, Cx<R>), usize>,
}

impl<R: ExactField> StarIndex<R> {
    pub fn new(atlas: &Atlas<R>) -> Self {
        let by_from = atlas
            .corners
            .iter()
            .enumerate()
            .map(|(i, c)| ((c.from, c.point.clone()), i))
            .collect();
        StarIndex { gluing: atlas.gluing_by_segment(), by_from }
    }
}

/// Result of walking from one corner through gluings.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StarWalk {
    pub corners: Vec<usize>,
    /// Returned to the starting corner.
    pub closed: bool,
    /// Sector directions agree across every gluing crossed.
    pub consistent: bool,
}

fn upper(d: &Cx<impl ExactField>) -> bool {
    d.im.is_pos() || (d.im.is_zero() && d.re.is_pos())
}

/// `arg(a) < arg(b)` with arguments in `[0, 2π)`.
fn arg_less<R: ExactField>(a: &Cx<R>, b: &Cx<R>) -> bool {
    match (upper(a), upper(b)) {
        (true, false) => true,
        (false, true) => false,
        _ => cross(a, b).is_pos(),
    }
}

fn same_direction<R: ExactField>(a: &Cx<R>, b: &Cx<R>) -> bool {
    cross(a, b).is_zero() && dot(a, b).is_pos()
}

pub(crate) fn corner_directions<R: ExactField>(atlas: &Atlas<R>, c: &Corner<R>) -> (Cx<R>, Cx<R>) {
    let from = atlas.segments[c.from].direction_from(&c.point).expect("corner on its segment");
    let to = atlas.segments[c.to].direction_from(&c.point).expect("corner on its segment");
    (from, to)
}

/// Sector angle in `(0, 2π]`, rounded to `f64`.
pub(crate) fn sector_angle<R: ExactField>(atlas: &Atlas<R>, c: &Corner<R>) -> f64 {
    let (a, b) = corner_directions(atlas, c);
    let (a, b) = (a.to_c64(), b.to_c64());
    let mut s = b.arg() - a.arg();
    while s <= 1e-15 {
        s += 2.0 * PI;
    }
    while s > 2.0 * PI + 1e-15 {
        s -= 2.0 * PI;
    }
    s
}

/// Exact total angle of a cyclic corner list, in units of π.
pub(crate) fn total_angle_pi<R: ExactField>(atlas: &Atlas<R>, corners: &[usize]) -> u64 {
    let wraps = corners
        .iter()
        .filter(|&&c| {
            let (a, b) = corner_directions(atlas, &atlas.corners[c]);
            !arg_less(&a, &b)
        })
        .count() as u64;
    2 * wraps
}

pub(crate) fn walk_with<R: ExactField>(atlas: &Atlas<R>, index: &StarIndex<R>, start: usize) -> StarWalk {
    let mut corners = vec![start];
    let mut consistent = true;
    let mut cur = start;
    loop {
        let c = &atlas.corners[cur];
        let Some(&g) = index.gluing.get(&c.to) else {
            return StarWalk { corners, closed: false, consistent };
        };
        let gl = &atlas.gluings[g];
        let p = c.point.clone() + gl.offset.clone();
        let Some(&next) = index.by_from.get(&(gl.to, p)) else {
            return StarWalk { corners, closed: false, consistent };
        };
        let (_, out) = corner_directions(atlas, c);
        let (inn, _) = corner_directions(atlas, &atlas.corners[next]);
        consistent &= same_direction(&out, &inn);
        if next == start {
            return StarWalk { corners, closed: true, consistent };
        }
        if corners.len() > atlas.corners.len() {
            return StarWalk { corners, closed: false, consistent: false };
        }
        corners.push(next);
        cur = next;
    }
}

/// Walks the star through corner `start`.
pub fn walk_star<R: ExactField>(atlas: &Atlas<R>, start: usize) -> StarWalk {
    walk_with(atlas, &StarIndex::new(atlas), start)
}

/// All closed, consistent stars, each listed once from its least corner.
pub(crate) fn assemble_stars<R: ExactField>(
    atlas: &Atlas<R>,
    tag: impl Fn(&[Corner<R>], &[Chamber<R>]) -> PointTag + Sync,
) -> Vec<Singularity> {
    let index = StarIndex::new(atlas);
    let walks: Vec<StarWalk> = (0..atlas.corners.len())
        .into_par_iter()
        .map(|i| walk_with(atlas, &index, i))
        .filter(|w| w.closed && w.consistent && w.corners.iter().min() == Some(&w.corners[0]))
        .collect();
    walks
        .into_iter()
        .map(|w| {
            let cs: Vec<Corner<R>> = w.corners.iter().map(|&c| atlas.corners[c].clone()).collect();
            Singularity {
                angle_pi: total_angle_pi(atlas, &w.corners),
                tag: tag(&cs, &atlas.chambers),
                corners: w.corners,
            }
        })
        .collect()
}

/// The star of a boundary vertex, resolved to chambers and chart points.
#[derive(Clone, Debug, PartialEq)]
pub struct Star<R> {
    pub corners: Vec<usize>,
    pub incidences: Vec<(ChamberId, Cx<R>)>,
    pub sectors: Vec<f64>,
    /// Total angle in units of π; `None` when the star reaches the truncation.
    pub angle_pi: Option<u64>,
    pub tag: Option<PointTag>,
}

impl<R: ExactField> Star<R> {
    pub fn chambers(&self) -> Vec<ChamberId> {
        self.incidences.iter().map(|(c, _)| *c).collect()
    }
}

pub fn singularity_star<R: ExactField>(
    atlas: &Atlas<R>,
    chamber: &ChamberId,
    point: &Cx<R>,
) -> Result<Star<R>, AtlasError> {
    let ci = atlas.chamber_index(chamber).ok_or(AtlasError::NotAVertex)?;
    let start = atlas
        .corners
        .iter()
        .position(|c| c.chamber == ci && c.point == *point)
        .ok_or(AtlasError::NotAVertex)?;
    let w = walk_star(atlas, start);
    let incidences = w
        .corners
        .iter()
        .map(|&c| (atlas.chambers[atlas.corners[c].chamber].id, atlas.corners[c].point.clone()))
        .collect();
    let sectors = w.corners.iter().map(|&c| sector_angle(atlas, &atlas.corners[c])).collect();
    let (angle_pi, tag) = if w.closed {
        let tag = atlas
            .singularities
            .iter()
            .find(|s| s.corners.contains(&start))
            .map(|s| s.tag);
        (Some(total_angle_pi(atlas, &w.corners)), tag)
    } else {
        (None, None)
    };
    Ok(Star { corners: w.corners, incidences, sectors, angle_pi, tag })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rational;

    #[test]
    fn argument_order() {
        let c = |a, b| Cx::<Rational>::from_ints(a, b);
        assert!(arg_less(&c(1, 0), &c(0, 1)));
        assert!(arg_less(&c(-1, 1), &c(-1, 0)));
        assert!(arg_less(&c(-1, 0), &c(0, -1)));
        assert!(!arg_less(&c(0, -1), &c(1, 0)));
        assert!(!arg_less(&c(2, 0), &c(1, 0)));
    }
}
