//! Chamber atlases of isoperiodic leaves.
//!
//! Every chamber carries its own translation chart. Boundary segments live in
//! those charts and gluings are translations `z ↦ z + offset` between them,
//! stored in both directions. A corner is a vertex of a chamber boundary
//! together with the two segments meeting there; walking corner to corner
//! through gluings traces the star of a point of the leaf.

mod arithmetic;
mod checks;
mod json;
mod negative;
mod nonarith;
mod positive;
mod star;

pub use arithmetic::{admissible_pairs, build_arithmetic, glue_target, reachability_chain, GlueTarget};
pub use checks::{
    check_all, check_arithmetic, corner_desc, seg_desc, cone_angle_check, connectivity_check, gluing_involution_check,
    involution_equivariance_check, wall_surface_match, wall_tree, CheckLine, CheckReport,
    ConnectivityCertificate, WallTree,
};
pub use json::{AnyAtlas, AtlasStats, ATLAS_SCHEMA};
pub use negative::{build_negative, triangle_vertices};
pub use nonarith::{build_nonarith, collapse_triangle, projection, CollapsedGluing};
pub use positive::build_positive;
pub use star::{singularity_star, walk_star, Star, StarWalk};

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::field::{complex_cross as cross, complex_dot as dot, Cx, ExactField};
use crate::period_algebra::{AnyCharacter, CharacteristicTriple, LatticeElement};
use crate::surface_kernel::Sign;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AtlasError {
    #[error("expected a {expected} character, found {found}")]
    WrongLeafKind { expected: &'static str, found: &'static str },
    #[error("theta is rational; the leaf is arithmetic")]
    RationalTheta,
    #[error("theta is not a quadratic irrational in (0,1)")]
    NonQuadraticTheta,
    #[error("segment [{0}] is not a canonical boundary segment")]
    BadSegment(String),
    #[error("point is not a vertex of the segmentation")]
    NotAVertex,
    #[error("sample is not interior to the glued segment")]
    NotInterior,
    #[error("not an arithmetic gluing")]
    NotArithmetic,
    #[error("atlas file: {0}")]
    Format(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ChamberId {
    Torus,
    Cyl { u: LatticeElement },
    CylArith { k: u64, l: u64, sign: Sign },
    Deg { triple: CharacteristicTriple },
}

impl ChamberId {
    /// Deterministic listing order of chambers within an atlas.
    pub fn order_key(&self) -> (u8, i64, i64, i64, Option<CharacteristicTriple>) {
        match *self {
            ChamberId::Torus => (0, 0, 0, 0, None),
            ChamberId::Cyl { u } => (1, u.max_norm(), u.m, u.n, None),
            ChamberId::CylArith { k, l, sign } => (2, k as i64, l as i64, (sign == Sign::Minus) as i64, None),
            ChamberId::Deg { triple } => (3, 0, 0, 0, Some(triple)),
        }
    }

    /// Image under the involution negating every period.
    pub fn negated(&self) -> ChamberId {
        match *self {
            ChamberId::Torus => ChamberId::Torus,
            ChamberId::Cyl { u } => ChamberId::Cyl { u: -u },
            ChamberId::CylArith { k, l, sign } => ChamberId::CylArith { k, l, sign: sign.flip() },
            ChamberId::Deg { triple } => ChamberId::Deg { triple: triple.negated() },
        }
    }
}

impl fmt::Display for ChamberId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChamberId::Torus => write!(f, "TT"),
            ChamberId::Cyl { u } => write!(f, "CC{u}"),
            ChamberId::CylArith { k, l, sign } => write!(f, "CC{}({k},{l})", sign.symbol()),
            ChamberId::Deg { triple } => write!(f, "DD{triple}"),
        }
    }
}

/// Chamber shape in its chart.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Region<R> {
    /// ℂ minus the slits `{tγ : t ≥ 1}`, `γ` primitive in ℤ[i].
    SlitPlane,
    /// `Im(ū z) < bound`
    HalfPlane { u: Cx<R>, bound: R },
    /// Open triangle.
    Triangle { vertices: [Cx<R>; 3] },
}

impl<R: ExactField> Region<R> {
    pub fn contains(&self, z: &Cx<R>) -> bool {
        match self {
            Region::SlitPlane => {
                let t = crate::surface_kernel::TorusSurface::new(
                    Cx::from_ints(1, 0),
                    Cx::from_ints(0, 1),
                    z.clone(),
                );
                t.is_ok()
            }
            Region::HalfPlane { u, bound } => cross(u, z).cmp_exact(bound) == Ordering::Less,
            Region::Triangle { vertices: v } => {
                let s = cross(&(v[1].clone() - v[0].clone()), &(v[2].clone() - v[0].clone())).sign();
                (0..3).all(|i| {
                    let a = &v[i];
                    let b = &v[(i + 1) % 3];
                    cross(&(b.clone() - a.clone()), &(z.clone() - a.clone())).sign() == s
                })
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chamber<R> {
    pub id: ChamberId,
    pub region: Region<R>,
    /// All boundary segments are glued.
    pub complete: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SegmentEnd<R> {
    Point(Cx<R>),
    /// Unbounded in the given direction.
    Ray(Cx<R>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SegmentLabel {
    Boundary,
    SlitLeft,
    SlitRight,
    Side(u8),
}

impl SegmentLabel {
    pub fn name(&self) -> String {
        match self {
            SegmentLabel::Boundary => "boundary".into(),
            SegmentLabel::SlitLeft => "slit-left".into(),
            SegmentLabel::SlitRight => "slit-right".into(),
            SegmentLabel::Side(i) => format!("side-{i}"),
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "boundary" => Some(SegmentLabel::Boundary),
            "slit-left" => Some(SegmentLabel::SlitLeft),
            "slit-right" => Some(SegmentLabel::SlitRight),
            _ => s.strip_prefix("side-")?.parse().ok().map(SegmentLabel::Side),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Segment<R> {
    pub chamber: usize,
    pub start: Cx<R>,
    pub end: SegmentEnd<R>,
    pub label: SegmentLabel,
    /// Lies beyond the truncation bound: no gluing is recorded.
    pub truncated: bool,
}

impl<R: ExactField> Segment<R> {
    pub fn direction(&self) -> Cx<R> {
        match &self.end {
            SegmentEnd::Point(p) => p.clone() - self.start.clone(),
            SegmentEnd::Ray(d) => d.clone(),
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self.end, SegmentEnd::Point(_))
    }

    /// Direction leaving `p` along the segment, if `p` is an endpoint.
    pub fn direction_from(&self, p: &Cx<R>) -> Option<Cx<R>> {
        if *p == self.start {
            return Some(self.direction());
        }
        match &self.end {
            SegmentEnd::Point(q) if q == p => Some(self.start.clone() - q.clone()),
            _ => None,
        }
    }

    pub fn endpoints(&self) -> Vec<Cx<R>> {
        match &self.end {
            SegmentEnd::Point(q) => vec![self.start.clone(), q.clone()],
            SegmentEnd::Ray(_) => vec![self.start.clone()],
        }
    }

    pub fn translated(&self, c: &Cx<R>) -> (Cx<R>, SegmentEnd<R>) {
        let end = match &self.end {
            SegmentEnd::Point(q) => SegmentEnd::Point(q.clone() + c.clone()),
            SegmentEnd::Ray(d) => SegmentEnd::Ray(d.clone()),
        };
        (self.start.clone() + c.clone(), end)
    }

    /// Same point set as `(start, end)`.
    pub fn same_set(&self, start: &Cx<R>, end: &SegmentEnd<R>) -> bool {
        match (&self.end, end) {
            (SegmentEnd::Point(q), SegmentEnd::Point(e)) => {
                (self.start == *start && q == e) || (self.start == *e && q == start)
            }
            (SegmentEnd::Ray(d), SegmentEnd::Ray(e)) => {
                self.start == *start && cross(d, e).is_zero() && dot(d, e).is_pos()
            }
            _ => false,
        }
    }

    /// Strictly interior point test.
    pub fn contains_interior(&self, p: &Cx<R>) -> bool {
        let d = self.direction();
        let w = p.clone() - self.start.clone();
        if !cross(&d, &w).is_zero() {
            return false;
        }
        let s = dot(&d, &w);
        if !s.is_pos() {
            return false;
        }
        match &self.end {
            SegmentEnd::Point(_) => s.cmp_exact(&d.norm_sqr()) == Ordering::Less,
            SegmentEnd::Ray(_) => true,
        }
    }
}

/// `x ↦ x + offset` from segment `from` onto segment `to`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gluing<R> {
    pub from: usize,
    pub to: usize,
    pub offset: Cx<R>,
}

/// The sector of a chamber at a boundary vertex, swept counterclockwise from
/// segment `from` to segment `to`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Corner<R> {
    pub chamber: usize,
    pub point: Cx<R>,
    pub from: usize,
    pub to: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PointTag {
    /// Cone point of the leaf.
    Cone,
    /// Center of the arithmetic leaf.
    PinchedTorus,
}

impl PointTag {
    pub fn name(&self) -> &'static str {
        match self {
            PointTag::Cone => "cone",
            PointTag::PinchedTorus => "pinched-torus",
        }
    }
}

/// A closed star: corners in cyclic order with total angle `angle_pi·π`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Singularity {
    pub corners: Vec<usize>,
    pub angle_pi: u64,
    pub tag: PointTag,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LeafType {
    Positive,
    Negative,
    Arithmetic,
    NonArithmetic,
}

impl LeafType {
    pub fn name(&self) -> &'static str {
        match self {
            LeafType::Positive => "positive",
            LeafType::Negative => "negative",
            LeafType::Arithmetic => "arithmetic",
            LeafType::NonArithmetic => "nonarith",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "positive" => Some(LeafType::Positive),
            "negative" => Some(LeafType::Negative),
            "arithmetic" => Some(LeafType::Arithmetic),
            "nonarith" => Some(LeafType::NonArithmetic),
            _ => None,
        }
    }
}

/// A point of the metric completion that is not on the leaf.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompletionPoint<R> {
    pub chamber: usize,
    pub point: Cx<R>,
    pub tag: &'static str,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Atlas<R> {
    pub leaf: LeafType,
    pub character: AnyCharacter,
    pub bound: u64,
    pub chambers: Vec<Chamber<R>>,
    pub segments: Vec<Segment<R>>,
    pub gluings: Vec<Gluing<R>>,
    pub corners: Vec<Corner<R>>,
    pub singularities: Vec<Singularity>,
    pub completion: Vec<CompletionPoint<R>>,
}

impl<R: ExactField> Atlas<R> {
    pub fn chamber_index(&self, id: &ChamberId) -> Option<usize> {
        self.chambers.iter().position(|c| c.id == *id)
    }

    pub fn chamber_map(&self) -> HashMap<ChamberId, usize> {
        self.chambers.iter().enumerate().map(|(i, c)| (c.id, i)).collect()
    }

    /// Gluing index keyed by source segment.
    pub fn gluing_by_segment(&self) -> HashMap<usize, usize> {
        self.gluings.iter().enumerate().map(|(i, g)| (g.from, i)).collect()
    }

    pub fn segments_of(&self, chamber: usize) -> impl Iterator<Item = (usize, &Segment<R>)> {
        self.segments.iter().enumerate().filter(move |(_, s)| s.chamber == chamber)
    }

    /// Chamber pairs sharing a gluing, each pair once with the smaller index first.
    pub fn adjacency(&self) -> Vec<(usize, usize)> {
        let mut pairs: Vec<(usize, usize)> = self
            .gluings
            .iter()
            .map(|g| {
                let a = self.segments[g.from].chamber;
                let b = self.segments[g.to].chamber;
                (a.min(b), a.max(b))
            })
            .collect();
        pairs.sort();
        pairs.dedup();
        pairs
    }

    pub fn incomplete_corner_count(&self) -> usize {
        let mut seen = vec![false; self.corners.len()];
        for s in &self.singularities {
            for &c in &s.corners {
                seen[c] = true;
            }
        }
        seen.iter().filter(|x| !**x).count()
    }
}

/// Incremental atlas construction shared by the four leaf builders.
pub(crate) struct AtlasBuilder<R> {
    chambers: Vec<Chamber<R>>,
    index: HashMap<ChamberId, usize>,
    segments: Vec<Segment<R>>,
    seg_lookup: HashMap<(usize, Cx<R>, Cx<R>), usize>,
    gluings: Vec<Gluing<R>>,
    corners: Vec<Corner<R>>,
    partner: HashMap<usize, usize>,
}

impl<R: ExactField> AtlasBuilder<R> {
    /// Chambers are listed in [`ChamberId::order_key`] order.
    pub fn new(mut chambers: Vec<(ChamberId, Region<R>)>) -> Self {
        chambers.sort_by_key(|(id, _)| id.order_key());
        let index = chambers.iter().enumerate().map(|(i, (id, _))| (*id, i)).collect();
        let chambers = chambers
            .into_iter()
            .map(|(id, region)| Chamber { id, region, complete: true })
            .collect();
        AtlasBuilder {
            chambers,
            index,
            segments: Vec::new(),
            seg_lookup: HashMap::new(),
            gluings: Vec::new(),
            corners: Vec::new(),
            partner: HashMap::new(),
        }
    }

    pub fn chamber(&self, id: &ChamberId) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn chamber_count(&self) -> usize {
        self.chambers.len()
    }

    pub fn id(&self, c: usize) -> ChamberId {
        self.chambers[c].id
    }

    pub fn add_segment(&mut self, chamber: usize, start: Cx<R>, end: SegmentEnd<R>, label: SegmentLabel) -> usize {
        let i = self.segments.len();
        if let SegmentEnd::Point(q) = &end {
            self.seg_lookup.insert((chamber, start.clone(), q.clone()), i);
            self.seg_lookup.insert((chamber, q.clone(), start.clone()), i);
        }
        self.segments.push(Segment { chamber, start, end, label, truncated: true });
        i
    }

    /// Finite segment of `chamber` with endpoints `a`, `b` in either order.
    pub fn find_segment(&self, chamber: usize, a: &Cx<R>, b: &Cx<R>) -> Option<usize> {
        self.seg_lookup.get(&(chamber, a.clone(), b.clone())).copied()
    }

    pub fn add_corner(&mut self, chamber: usize, point: Cx<R>, from: usize, to: usize) {
        self.corners.push(Corner { chamber, point, from, to });
    }

    /// Records the gluing and its reverse; repeating a recorded gluing is a no-op.
    pub fn glue(&mut self, a: usize, b: usize, offset: Cx<R>) {
        if let Some(&p) = self.partner.get(&a) {
            assert_eq!(p, b, "segment glued twice");
            return;
        }
        self.partner.insert(a, b);
        self.partner.insert(b, a);
        self.segments[a].truncated = false;
        self.segments[b].truncated = false;
        self.gluings.push(Gluing { from: a, to: b, offset: offset.clone() });
        self.gluings.push(Gluing { from: b, to: a, offset: -offset });
    }

    /// Boundary of a half-plane chamber along the direction `u`: vertices
    /// `points` (sorted along `u`), finite segments between them and a ray
    /// beyond each end. Corners sweep from the `−u` side to the `+u` side.
    pub fn add_line(&mut self, chamber: usize, u: &Cx<R>, points: &[Cx<R>]) -> Vec<usize> {
        let mut segs = Vec::new();
        let first = self.add_segment(chamber, points[0].clone(), SegmentEnd::Ray(-u.clone()), SegmentLabel::Boundary);
        segs.push(first);
        for w in points.windows(2) {
            segs.push(self.add_segment(
                chamber,
                w[0].clone(),
                SegmentEnd::Point(w[1].clone()),
                SegmentLabel::Boundary,
            ));
        }
        let last = self.add_segment(
            chamber,
            points[points.len() - 1].clone(),
            SegmentEnd::Ray(u.clone()),
            SegmentLabel::Boundary,
        );
        segs.push(last);
        for (i, p) in points.iter().enumerate() {
            self.add_corner(chamber, p.clone(), segs[i], segs[i + 1]);
        }
        segs
    }

    pub fn finish(
        mut self,
        leaf: LeafType,
        character: AnyCharacter,
        bound: u64,
        completion: Vec<CompletionPoint<R>>,
        tag: impl Fn(&[Corner<R>], &[Chamber<R>]) -> PointTag + Sync,
    ) -> Atlas<R> {
        for s in &self.segments {
            if s.truncated {
                self.chambers[s.chamber].complete = false;
            }
        }
        let mut atlas = Atlas {
            leaf,
            character,
            bound,
            chambers: self.chambers,
            segments: self.segments,
            gluings: self.gluings,
            corners: self.corners,
            singularities: Vec::new(),
            completion,
        };
        atlas.singularities = star::assemble_stars(&atlas, tag);
        atlas
    }
}

/// Marks an extra chamber incomplete (boundary pieces missing from the
/// segment list altogether, such as slits beyond the bound).
pub(crate) fn mark_incomplete<R>(atlas: &mut Atlas<R>, chamber: usize) {
    atlas.chambers[chamber].complete = false;
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{rat, Rational};

    #[test]
    fn region_membership() {
        let h = Region::HalfPlane { u: Cx::<Rational>::from_ints(1, 0), bound: Rational::from_int(-1) };
        assert!(h.contains(&Cx::from_ints(5, -2)));
        assert!(!h.contains(&Cx::from_ints(5, -1)));
        let t = Region::Triangle { vertices: [Cx::from_ints(0, 0), Cx::from_ints(1, 0), Cx::from_ints(0, 1)] };
        assert!(t.contains(&Cx::new(rat(1, 5), rat(1, 5))));
        assert!(!t.contains(&Cx::new(rat(1, 2), rat(1, 2))));
        assert!(Region::<Rational>::SlitPlane.contains(&Cx::new(rat(1, 2), rat(0, 1))));
        assert!(!Region::<Rational>::SlitPlane.contains(&Cx::from_ints(2, 2)));
    }

    #[test]
    fn segment_geometry() {
        let s = Segment {
            chamber: 0,
            start: Cx::<Rational>::from_ints(0, 0),
            end: SegmentEnd::Point(Cx::from_ints(2, 0)),
            label: SegmentLabel::Boundary,
            truncated: false,
        };
        assert!(s.contains_interior(&Cx::from_ints(1, 0)));
        assert!(!s.contains_interior(&Cx::from_ints(2, 0)));
        assert_eq!(s.direction_from(&Cx::from_ints(2, 0)), Some(Cx::from_ints(-2, 0)));
        assert!(s.same_set(&Cx::from_ints(2, 0), &SegmentEnd::Point(Cx::from_ints(0, 0))));
    }

    #[test]
    fn labels_round_trip() {
        for l in [SegmentLabel::Boundary, SegmentLabel::SlitLeft, SegmentLabel::SlitRight, SegmentLabel::Side(2)] {
            assert_eq!(SegmentLabel::parse(&l.name()), Some(l));
        }
    }
}
