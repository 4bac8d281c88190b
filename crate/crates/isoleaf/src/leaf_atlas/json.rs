//! Versioned JSON form of an atlas with exact string coordinates.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::checks::check_arithmetic;
use super::{
    build_arithmetic, build_negative, build_nonarith, build_positive, check_all, Atlas, AtlasError, Chamber,
    ChamberId, CheckReport, CompletionPoint, Corner, Gluing, LeafType, PointTag, Region, Segment, SegmentEnd,
    SegmentLabel, Singularity,
};
use crate::field::{Cx, ExactField, QuadReal, Rational};
use crate::period_algebra::{classify, AnyCharacter, CharacteristicTriple, LatticeElement, LeafKind};
use crate::surface_kernel::Sign;

pub const ATLAS_SCHEMA: &str = "isoleaf-atlas/1";

#[derive(Serialize, Deserialize)]
struct Doc {
    schema: String,
    leaf: String,
    character: Value,
    bound: u64,
    chambers: Vec<ChamberDoc>,
    segments: Vec<SegmentDoc>,
    gluings: Vec<GluingDoc>,
    corners: Vec<CornerDoc>,
    singularities: Vec<SingularityDoc>,
    completion: Vec<CompletionDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
enum IdDoc {
    Torus,
    Cyl { u: [String; 2] },
    CylArith { k: String, l: String, sign: String },
    Deg { triple: [[String; 2]; 3] },
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
enum RegionDoc {
    SlitPlane,
    HalfPlane { u: [String; 2], bound: String },
    Triangle { vertices: [[String; 2]; 3] },
}

#[derive(Serialize, Deserialize)]
struct ChamberDoc {
    id: IdDoc,
    region: RegionDoc,
    complete: bool,
}

#[derive(Serialize, Deserialize)]
struct SegmentDoc {
    chamber: usize,
    start: [String; 2],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    end: Option<[String; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    ray: Option<[String; 2]>,
    label: String,
    truncated: bool,
}

#[derive(Serialize, Deserialize)]
struct GluingDoc {
    from: usize,
    to: usize,
    offset: [String; 2],
}

#[derive(Serialize, Deserialize)]
struct CornerDoc {
    chamber: usize,
    point: [String; 2],
    from: usize,
    to: usize,
}

#[derive(Serialize, Deserialize)]
struct SingularityDoc {
    corners: Vec<usize>,
    angle_pi: u64,
    tag: String,
}

#[derive(Serialize, Deserialize)]
struct CompletionDoc {
    chamber: usize,
    point: [String; 2],
    tag: String,
}

fn fmt_err(s: impl Into<String>) -> AtlasError {
    AtlasError::Format(s.into())
}

fn enc<R: ExactField>(z: &Cx<R>) -> [String; 2] {
    [z.re.encode(), z.im.encode()]
}

fn dec<R: ExactField>(p: &[String; 2]) -> Result<Cx<R>, AtlasError> {
    let f = |s: &String| R::decode(s).ok_or_else(|| fmt_err(format!("bad coordinate {s}")));
    Ok(Cx::new(f(&p[0])?, f(&p[1])?))
}

fn lat(u: LatticeElement) -> [String; 2] {
    [u.m.to_string(), u.n.to_string()]
}

fn unlat(p: &[String; 2]) -> Result<LatticeElement, AtlasError> {
    let f = |s: &String| s.parse::<i64>().map_err(|_| fmt_err(format!("bad integer {s}")));
    Ok(LatticeElement::new(f(&p[0])?, f(&p[1])?))
}

fn id_doc(id: &ChamberId) -> IdDoc {
    match *id {
        ChamberId::Torus => IdDoc::Torus,
        ChamberId::Cyl { u } => IdDoc::Cyl { u: lat(u) },
        ChamberId::CylArith { k, l, sign } => {
            IdDoc::CylArith { k: k.to_string(), l: l.to_string(), sign: sign.symbol().to_string() }
        }
        ChamberId::Deg { triple } => IdDoc::Deg { triple: triple.elements().map(lat) },
    }
}

fn id_from(d: &IdDoc) -> Result<ChamberId, AtlasError> {
    Ok(match d {
        IdDoc::Torus => ChamberId::Torus,
        IdDoc::Cyl { u } => ChamberId::Cyl { u: unlat(u)? },
        IdDoc::CylArith { k, l, sign } => ChamberId::CylArith {
            k: k.parse().map_err(|_| fmt_err("bad k"))?,
            l: l.parse().map_err(|_| fmt_err("bad l"))?,
            sign: match sign.as_str() {
                "+" => Sign::Plus,
                "-" => Sign::Minus,
                _ => return Err(fmt_err("bad sign")),
            },
        },
        IdDoc::Deg { triple } => {
            let [a, b, c] = [unlat(&triple[0])?, unlat(&triple[1])?, unlat(&triple[2])?];
            let t = CharacteristicTriple::new(a, b, c);
            if t.elements() != [a, b, c] {
                return Err(fmt_err("triple not in canonical rotation"));
            }
            ChamberId::Deg { triple: t }
        }
    })
}

fn to_doc<R: ExactField>(a: &Atlas<R>) -> Doc {
    Doc {
        schema: ATLAS_SCHEMA.into(),
        leaf: a.leaf.name().into(),
        character: a.character.to_json(),
        bound: a.bound,
        chambers: a
            .chambers
            .iter()
            .map(|c| ChamberDoc {
                id: id_doc(&c.id),
                region: match &c.region {
                    Region::SlitPlane => RegionDoc::SlitPlane,
                    Region::HalfPlane { u, bound } => RegionDoc::HalfPlane { u: enc(u), bound: bound.encode() },
                    Region::Triangle { vertices } => RegionDoc::Triangle { vertices: vertices.clone().map(|v| enc(&v)) },
                },
                complete: c.complete,
            })
            .collect(),
        segments: a
            .segments
            .iter()
            .map(|s| SegmentDoc {
                chamber: s.chamber,
                start: enc(&s.start),
                end: match &s.end {
                    SegmentEnd::Point(p) => Some(enc(p)),
                    SegmentEnd::Ray(_) => None,
                },
                ray: match &s.end {
                    SegmentEnd::Ray(d) => Some(enc(d)),
                    SegmentEnd::Point(_) => None,
                },
                label: s.label.name(),
                truncated: s.truncated,
            })
            .collect(),
        gluings: a.gluings.iter().map(|g| GluingDoc { from: g.from, to: g.to, offset: enc(&g.offset) }).collect(),
        corners: a
            .corners
            .iter()
            .map(|c| CornerDoc { chamber: c.chamber, point: enc(&c.point), from: c.from, to: c.to })
            .collect(),
        singularities: a
            .singularities
            .iter()
            .map(|s| SingularityDoc { corners: s.corners.clone(), angle_pi: s.angle_pi, tag: s.tag.name().into() })
            .collect(),
        completion: a
            .completion
            .iter()
            .map(|c| CompletionDoc { chamber: c.chamber, point: enc(&c.point), tag: c.tag.into() })
            .collect(),
    }
}

fn from_doc<R: ExactField>(d: &Doc, character: AnyCharacter) -> Result<Atlas<R>, AtlasError> {
    let leaf = LeafType::parse(&d.leaf).ok_or_else(|| fmt_err(format!("unknown leaf {}", d.leaf)))?;
    let nc = d.chambers.len();
    let ns = d.segments.len();
    let check = |i: usize, n: usize, what: &str| {
        if i < n {
            Ok(i)
        } else {
            Err(fmt_err(format!("{what} index {i} out of range")))
        }
    };
    let chambers = d
        .chambers
        .iter()
        .map(|c| {
            Ok(Chamber {
                id: id_from(&c.id)?,
                region: match &c.region {
                    RegionDoc::SlitPlane => Region::SlitPlane,
                    RegionDoc::HalfPlane { u, bound } => Region::HalfPlane {
                        u: dec(u)?,
                        bound: R::decode(bound).ok_or_else(|| fmt_err("bad bound"))?,
                    },
                    RegionDoc::Triangle { vertices } => Region::Triangle {
                        vertices: [dec(&vertices[0])?, dec(&vertices[1])?, dec(&vertices[2])?],
                    },
                },
                complete: c.complete,
            })
        })
        .collect::<Result<Vec<_>, AtlasError>>()?;
    let segments = d
        .segments
        .iter()
        .map(|s| {
            let end = match (&s.end, &s.ray) {
                (Some(p), None) => SegmentEnd::Point(dec(p)?),
                (None, Some(r)) => SegmentEnd::Ray(dec(r)?),
                _ => return Err(fmt_err("segment needs exactly one of end, ray")),
            };
            Ok(Segment {
                chamber: check(s.chamber, nc, "chamber")?,
                start: dec(&s.start)?,
                end,
                label: SegmentLabel::parse(&s.label).ok_or_else(|| fmt_err(format!("bad label {}", s.label)))?,
                truncated: s.truncated,
            })
        })
        .collect::<Result<Vec<_>, AtlasError>>()?;
    let gluings = d
        .gluings
        .iter()
        .map(|g| Ok(Gluing { from: check(g.from, ns, "segment")?, to: check(g.to, ns, "segment")?, offset: dec(&g.offset)? }))
        .collect::<Result<Vec<_>, AtlasError>>()?;
    let corners = d
        .corners
        .iter()
        .map(|c| {
            let corner = Corner {
                chamber: check(c.chamber, nc, "chamber")?,
                point: dec(&c.point)?,
                from: check(c.from, ns, "segment")?,
                to: check(c.to, ns, "segment")?,
            };
            for s in [corner.from, corner.to] {
                if segments[s].direction_from(&corner.point).is_none() {
                    return Err(fmt_err("corner point is not an endpoint of its segment"));
                }
            }
            Ok(corner)
        })
        .collect::<Result<Vec<_>, AtlasError>>()?;
    let nk = corners.len();
    let singularities = d
        .singularities
        .iter()
        .map(|s| {
            for &c in &s.corners {
                check(c, nk, "corner")?;
            }
            Ok(Singularity {
                corners: s.corners.clone(),
                angle_pi: s.angle_pi,
                tag: match s.tag.as_str() {
                    "cone" => PointTag::Cone,
                    "pinched-torus" => PointTag::PinchedTorus,
                    t => return Err(fmt_err(format!("bad tag {t}"))),
                },
            })
        })
        .collect::<Result<Vec<_>, AtlasError>>()?;
    let completion = d
        .completion
        .iter()
        .map(|c| {
            let tag = match c.tag.as_str() {
                "torus-with-plane" => "torus-with-plane",
                "pinched-torus" => "pinched-torus",
                t => return Err(fmt_err(format!("bad completion tag {t}"))),
            };
            Ok(CompletionPoint { chamber: check(c.chamber, nc, "chamber")?, point: dec(&c.point)?, tag })
        })
        .collect::<Result<Vec<_>, AtlasError>>()?;
    Ok(Atlas { leaf, character, bound: d.bound, chambers, segments, gluings, corners, singularities, completion })
}

/// An atlas over whichever field its leaf needs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AnyAtlas {
    Rational(Atlas<Rational>),
    Quadratic(Atlas<QuadReal>),
}

/// Summary counts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AtlasStats {
    pub leaf: String,
    pub bound: u64,
    pub chambers: usize,
    pub complete_chambers: usize,
    pub segments: usize,
    pub truncated_segments: usize,
    pub glued_pairs: usize,
    pub singularities: usize,
    pub pinched_tori: usize,
    pub incomplete_corners: usize,
}

fn stats<R: ExactField>(a: &Atlas<R>) -> AtlasStats {
    AtlasStats {
        leaf: a.leaf.name().into(),
        bound: a.bound,
        chambers: a.chambers.len(),
        complete_chambers: a.chambers.iter().filter(|c| c.complete).count(),
        segments: a.segments.len(),
        truncated_segments: a.segments.iter().filter(|s| s.truncated).count(),
        glued_pairs: a.gluings.len() / 2,
        singularities: a.singularities.iter().filter(|s| s.tag == PointTag::Cone).count(),
        pinched_tori: a.singularities.iter().filter(|s| s.tag == PointTag::PinchedTorus).count(),
        incomplete_corners: a.incomplete_corner_count(),
    }
}

impl AnyAtlas {
    /// Builds the atlas of the leaf through `chi`, in normalized coordinates.
    pub fn build(chi: &AnyCharacter, bound: u64) -> Result<AnyAtlas, AtlasError> {
        let wrong = |found: &'static str| AtlasError::WrongLeafKind { expected: "a classifiable character", found };
        match chi {
            AnyCharacter::Gaussian(c) | AnyCharacter::Rational(c) => match classify(c).map_err(|_| wrong("trivial"))? {
                LeafKind::Positive => Ok(AnyAtlas::Rational(build_positive(bound))),
                LeafKind::Negative => Ok(AnyAtlas::Rational(build_negative(bound))),
                LeafKind::ArithReal { .. } => Ok(AnyAtlas::Rational(build_arithmetic(bound))),
                LeafKind::NonArithReal { .. } => Err(AtlasError::NonQuadraticTheta),
            },
            AnyCharacter::Quadratic { chi, .. } => match classify(chi).map_err(|_| wrong("trivial"))? {
                LeafKind::Positive => Ok(AnyAtlas::Rational(build_positive(bound))),
                LeafKind::Negative => Ok(AnyAtlas::Rational(build_negative(bound))),
                LeafKind::ArithReal { .. } => Ok(AnyAtlas::Rational(build_arithmetic(bound))),
                LeafKind::NonArithReal { theta } => Ok(AnyAtlas::Quadratic(build_nonarith(&theta, bound)?)),
            },
        }
    }

    pub fn leaf(&self) -> LeafType {
        match self {
            AnyAtlas::Rational(a) => a.leaf,
            AnyAtlas::Quadratic(a) => a.leaf,
        }
    }

    pub fn to_json_string(&self) -> String {
        let doc = match self {
            AnyAtlas::Rational(a) => to_doc(a),
            AnyAtlas::Quadratic(a) => to_doc(a),
        };
        let mut s = serde_json::to_string_pretty(&doc).expect("atlas serializes");
        s.push('\n');
        s
    }

    pub fn from_json_str(s: &str) -> Result<AnyAtlas, AtlasError> {
        let doc: Doc = serde_json::from_str(s).map_err(|e| fmt_err(e.to_string()))?;
        if doc.schema != ATLAS_SCHEMA {
            return Err(fmt_err(format!("unsupported schema {}", doc.schema)));
        }
        let character = AnyCharacter::from_json(&doc.character).map_err(|e| fmt_err(e.to_string()))?;
        match character {
            AnyCharacter::Quadratic { .. } => Ok(AnyAtlas::Quadratic(from_doc(&doc, character)?)),
            _ => Ok(AnyAtlas::Rational(from_doc(&doc, character)?)),
        }
    }

    pub fn check(&self) -> CheckReport {
        match self {
            AnyAtlas::Rational(a) => {
                let mut r = check_all(a);
                if a.leaf == LeafType::Arithmetic {
                    r.lines.extend(check_arithmetic(a));
                }
                r
            }
            AnyAtlas::Quadratic(a) => check_all(a),
        }
    }

    pub fn stats(&self) -> AtlasStats {
        match self {
            AnyAtlas::Rational(a) => stats(a),
            AnyAtlas::Quadratic(a) => stats(a),
        }
    }
}
