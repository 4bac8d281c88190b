//! Deterministic SVG figures of atlases and surfaces.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_integer::Roots;
use num_traits::{FromPrimitive, One, Signed, Zero};
use thiserror::Error;

use crate::field::{Cx, ExactField, Rational};
use crate::leaf_atlas::{wall_tree, AnyAtlas, Atlas, ChamberId, Region, SegmentEnd, SegmentLabel};
use crate::surface_kernel::{core_type, Surface};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RenderError {
    #[error("atlas has no chambers")]
    EmptyAtlas,
    #[error("invalid surface: {0}")]
    InvalidSurface(String),
}

/// Colors and sizes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Style {
    pub width: u32,
    pub margin: u32,
    pub stroke: String,
    pub slit: String,
    /// Side identifications and other labels.
    pub label: String,
    pub fill: String,
    pub black: String,
    pub white: String,
    pub font_size: u32,
    pub marker_radius: u32,
}

impl Default for Style {
    fn default() -> Self {
        Style {
            width: 800,
            margin: 40,
            stroke: "#222222".into(),
            slit: "#1f4e9c".into(),
            label: "#cc0000".into(),
            fill: "#e8eef7".into(),
            black: "#000000".into(),
            white: "#ffffff".into(),
            font_size: 12,
            marker_radius: 4,
        }
    }
}

pub type Point = (Rational, Rational);

fn pt(z: &Cx<Rational>) -> Point {
    (z.re.clone(), z.im.clone())
}

fn ip(x: i64, y: i64) -> Point {
    (Rational::from_int(x), Rational::from_int(y))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Item {
    Path { class: String, points: Vec<Point>, closed: bool },
    Marker { class: String, at: Point, attrs: Vec<(String, String)> },
    Label { class: String, at: Point, text: String },
}

/// Model-space bounding box mapped to pixels by one affine map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Viewport {
    pub min: Point,
    pub max: Point,
    pub scale: Rational,
    pub margin: Rational,
}

impl Viewport {
    fn fit(items: &[(String, Vec<Item>)], style: &Style) -> Viewport {
        let mut pts = items.iter().flat_map(|(_, l)| l).flat_map(|it| match it {
            Item::Path { points, .. } => points.clone(),
            Item::Marker { at, .. } | Item::Label { at, .. } => vec![at.clone()],
        });
        let first = pts.next().unwrap_or_else(|| ip(0, 0));
        let (mut min, mut max) = (first.clone(), first);
        for (x, y) in pts {
            if x < min.0 {
                min.0 = x.clone();
            }
            if x > max.0 {
                max.0 = x;
            }
            if y < min.1 {
                min.1 = y.clone();
            }
            if y > max.1 {
                max.1 = y;
            }
        }
        let span = (max.0.clone() - min.0.clone()).max(max.1.clone() - min.1.clone()).max(Rational::one());
        let inner = Rational::from_int(style.width as i64 - 2 * style.margin as i64);
        Viewport { min, max, scale: inner / span, margin: Rational::from_int(style.margin as i64) }
    }

    /// Exact pixel coordinates, `y` pointing down.
    pub fn map(&self, p: &Point) -> Point {
        (
            self.margin.clone() + (p.0.clone() - self.min.0.clone()) * self.scale.clone(),
            self.margin.clone() + (self.max.1.clone() - p.1.clone()) * self.scale.clone(),
        )
    }

    pub fn height(&self) -> Rational {
        (self.max.1.clone() - self.min.1.clone()) * self.scale.clone() + self.margin.clone() * Rational::from_int(2)
    }
}

/// Layers of items over one viewport.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Scene {
    pub layers: Vec<(String, Vec<Item>)>,
    pub viewport: Viewport,
}

fn num(q: &Rational) -> String {
    let v = q.to_f64();
    let s = format!("{v:.3}");
    if s == "-0.000" { "0.000".into() } else { s }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

impl Scene {
    fn new(layers: Vec<(String, Vec<Item>)>, style: &Style) -> Scene {
        let viewport = Viewport::fit(&layers, style);
        Scene { layers, viewport }
    }

    pub fn items(&self) -> impl Iterator<Item = &Item> {
        self.layers.iter().flat_map(|(_, l)| l)
    }

    pub fn to_svg(&self, style: &Style) -> String {
        let vp = &self.viewport;
        let h = num(&vp.height());
        let mut out = String::new();
        let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
        let _ = writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#,
            w = style.width
        );
        let _ = writeln!(out, r##"<rect x="0" y="0" width="{}" height="{h}" fill="#ffffff"/>"##, style.width);
        for (name, items) in &self.layers {
            let _ = writeln!(out, r#"<g id="{}">"#, escape(name));
            for it in items {
                match it {
                    Item::Path { class, points, closed } => {
                        let mut d = String::new();
                        for (i, p) in points.iter().enumerate() {
                            let (x, y) = vp.map(p);
                            let _ = write!(d, "{}{} {}", if i == 0 { "M" } else { " L" }, num(&x), num(&y));
                        }
                        if *closed {
                            d.push_str(" Z");
                        }
                        let (stroke, fill) = match class.as_str() {
                            "slit" => (&style.slit, "none"),
                            c if c.starts_with("chamber") => (&style.stroke, style.fill.as_str()),
                            c if c.starts_with("strip") => (&style.stroke, "#f4f4f4"),
                            _ => (&style.stroke, "none"),
                        };
                        let _ = writeln!(
                            out,
                            r#"  <path class="{}" d="{d}" stroke="{stroke}" fill="{fill}" stroke-width="1.5"/>"#,
                            escape(class)
                        );
                    }
                    Item::Marker { class, at, attrs } => {
                        let (x, y) = vp.map(at);
                        let fill = if class.contains("white") || class.contains("incomplete") { &style.white } else { &style.black };
                        let mut extra = String::new();
                        for (k, v) in attrs {
                            let _ = write!(extra, r#" {}="{}""#, escape(k), escape(v));
                        }
                        let _ = writeln!(
                            out,
                            r#"  <circle class="{}" cx="{}" cy="{}" r="{}" fill="{fill}" stroke="{}"{extra}/>"#,
                            escape(class),
                            num(&x),
                            num(&y),
                            style.marker_radius,
                            style.black
                        );
                    }
                    Item::Label { class, at, text } => {
                        let (x, y) = vp.map(at);
                        let _ = writeln!(
                            out,
                            r#"  <text class="{}" x="{}" y="{}" font-size="{}" fill="{}" text-anchor="middle">{}</text>"#,
                            escape(class),
                            num(&x),
                            num(&y),
                            style.font_size,
                            style.label,
                            escape(text)
                        );
                    }
                }
            }
            let _ = writeln!(out, "</g>");
        }
        out.push_str("</svg>\n");
        out
    }
}

fn path(class: &str, points: Vec<Point>, closed: bool) -> Item {
    Item::Path { class: class.into(), points, closed }
}

fn marker(class: &str, at: Point) -> Item {
    Item::Marker { class: class.into(), at, attrs: Vec::new() }
}

fn label(class: &str, at: Point, text: impl Into<String>) -> Item {
    Item::Label { class: class.into(), at, text: text.into() }
}

fn mid(a: &Point, b: &Point) -> Point {
    let two = Rational::from_int(2);
    ((a.0.clone() + b.0.clone()) / two.clone(), (a.1.clone() + b.1.clone()) / two)
}

fn add(a: &Point, b: &Point) -> Point {
    (a.0.clone() + b.0.clone(), a.1.clone() + b.1.clone())
}

fn sub(a: &Point, b: &Point) -> Point {
    (a.0.clone() - b.0.clone(), a.1.clone() - b.1.clone())
}

fn scale(a: &Point, s: &Rational) -> Point {
    (a.0.clone() * s.clone(), a.1.clone() * s.clone())
}

/// The slit plane: one path per slit, one marker per slit tip.
fn positive_scene(atlas: &Atlas<Rational>) -> Vec<(String, Vec<Item>)> {
    let extent = Rational::from_int(atlas.bound as i64) + Rational::new(3.into(), 2.into());
    let mut slits = Vec::new();
    let mut tips = Vec::new();
    for s in &atlas.segments {
        if s.label != SegmentLabel::SlitLeft {
            continue;
        }
        let SegmentEnd::Ray(dir) = &s.end else { continue };
        // clip the ray at the frame
        let m = dir.re.abs().max(dir.im.abs());
        let end = scale(&pt(dir), &(extent.clone() / m));
        let end = if end.0.abs() >= s.start.re.abs() && end.1.abs() >= s.start.im.abs() { end } else { pt(&s.start) };
        slits.push(path("slit", vec![pt(&s.start), end], false));
        tips.push(pt(&s.start));
    }
    tips.sort();
    tips.dedup();
    let markers: Vec<Item> = tips.iter().map(|p| marker("singularity", p.clone())).collect();
    let frame = vec![
        (-extent.clone(), -extent.clone()),
        (extent.clone(), -extent.clone()),
        (extent.clone(), extent.clone()),
        (-extent.clone(), extent.clone()),
    ];
    vec![
        ("frame".into(), vec![path("frame", frame, true)]),
        ("slits".into(), slits),
        ("singularities".into(), markers),
        ("labels".into(), vec![label("title", (Rational::zero(), extent), "TT: plane minus slits")]),
    ]
}

fn cross(a: &Point, b: &Point) -> Rational {
    a.0.clone() * b.1.clone() - a.1.clone() * b.0.clone()
}

/// One panel per degenerate chamber: its triangle and the three cylinder
/// half-planes along the sides.
fn negative_scene(atlas: &Atlas<Rational>) -> Vec<(String, Vec<Item>)> {
    let tris: Vec<(&ChamberId, &[Cx<Rational>; 3])> = atlas
        .chambers
        .iter()
        .filter_map(|c| match &c.region {
            Region::Triangle { vertices } => Some((&c.id, vertices)),
            _ => None,
        })
        .collect();
    let extent = tris
        .iter()
        .flat_map(|(_, v)| v.iter())
        .map(|z| z.re.abs().max(z.im.abs()))
        .max()
        .unwrap_or_else(Rational::one);
    let panel = extent * Rational::from_int(3) + Rational::from_int(2);
    let cols = (tris.len() as u64).sqrt() + 1;
    let (mut fills, mut strips, mut labels, mut markers) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
    for (i, (id, v)) in tris.iter().enumerate() {
        let (r, c) = ((i as u64 / cols) as i64, (i as u64 % cols) as i64);
        let origin = (panel.clone() * Rational::from_int(c), -panel.clone() * Rational::from_int(r));
        let third = Rational::new(1.into(), 3.into());
        let centroid = scale(&add(&add(&pt(&v[0]), &pt(&v[1])), &pt(&v[2])), &third);
        let shift = sub(&origin, &centroid);
        let p: Vec<Point> = v.iter().map(|z| add(&pt(z), &shift)).collect();
        fills.push(path(&format!("chamber deg {id}"), p.clone(), true));
        for k in 0..3 {
            let (a, b, o) = (&p[k], &p[(k + 1) % 3], &p[(k + 2) % 3]);
            let d = sub(b, a);
            let mut n = scale(&(-d.1.clone(), d.0.clone()), &Rational::new(1.into(), 4.into()));
            if cross(&d, &sub(o, a)).is_positive() == cross(&d, &n).is_positive() {
                n = (-n.0, -n.1);
            }
            strips.push(path("strip half-plane", vec![a.clone(), b.clone(), add(b, &n), add(a, &n)], true));
            labels.push(label("side", add(&mid(a, b), &n), format!("{}", k + 1)));
        }
        for q in &p {
            markers.push(marker("vertex", q.clone()));
        }
        labels.push(label("chamber", add(&origin, &(Rational::zero(), -extent_label(&panel))), id.to_string()));
    }
    vec![
        ("half-planes".into(), strips),
        ("chambers".into(), fills),
        ("vertices".into(), markers),
        ("labels".into(), labels),
    ]
}

fn extent_label(panel: &Rational) -> Rational {
    panel.clone() * Rational::new(2.into(), 5.into())
}

/// The wall tree, root at the top, leaves spread left to right.
fn arithmetic_scene(atlas: &Atlas<Rational>) -> Vec<(String, Vec<Item>)> {
    let Ok(tree) = wall_tree(atlas) else { return Vec::new() };
    let children = tree.children();
    let mut pos: BTreeMap<usize, Point> = BTreeMap::new();
    let mut next_leaf = 0i64;
    fn place(
        v: usize,
        depth: i64,
        children: &[Vec<usize>],
        next: &mut i64,
        pos: &mut BTreeMap<usize, Point>,
    ) -> Rational {
        let x = if children[v].is_empty() {
            *next += 1;
            Rational::from_int(*next - 1)
        } else {
            let xs: Vec<Rational> = children[v].iter().map(|&w| place(w, depth + 1, children, next, pos)).collect();
            (xs[0].clone() + xs[xs.len() - 1].clone()) / Rational::from_int(2)
        };
        pos.insert(v, (x.clone(), Rational::from_int(-depth)));
        x
    }
    place(tree.root, 0, &children, &mut next_leaf, &mut pos);
    let mut edges = Vec::new();
    let mut labels = Vec::new();
    for (&(a, b), len) in tree.edges.iter().zip(&tree.lengths) {
        let (pa, pb) = (pos[&a].clone(), pos[&b].clone());
        labels.push(label("length", mid(&pa, &pb), len.to_string()));
        edges.push(path("wall", vec![pa, pb], false));
    }
    let mut markers = Vec::new();
    for (v, p) in &pos {
        if *v == tree.root {
            markers.push(Item::Marker {
                class: "root pinched-torus".into(),
                at: p.clone(),
                attrs: vec![("data-germs".into(), tree.root_germs.to_string())],
            });
        } else {
            markers.push(marker(if tree.complete[*v] { "vertex" } else { "vertex incomplete" }, p.clone()));
        }
    }
    vec![("walls".into(), edges), ("vertices".into(), markers), ("labels".into(), labels)]
}

/// Cylinder chambers of a real leaf, one row each.
fn nonarith_scene<R: ExactField>(atlas: &Atlas<R>) -> Vec<(String, Vec<Item>)> {
    let q = |x: &R| Rational::from_f64(x.to_f64()).unwrap_or_else(Rational::zero);
    let extent = atlas
        .segments
        .iter()
        .filter_map(|s| match &s.end {
            SegmentEnd::Point(p) => Some(q(&p.re).abs().max(q(&s.start.re).abs())),
            SegmentEnd::Ray(_) => Some(q(&s.start.re).abs()),
        })
        .max()
        .unwrap_or_else(Rational::one)
        + Rational::one();
    let (mut rows, mut ticks, mut labels) = (Vec::new(), Vec::new(), Vec::new());
    for (i, c) in atlas.chambers.iter().enumerate() {
        let y = Rational::from_int(-(i as i64));
        for s in atlas.segments_of(i).map(|(_, s)| s) {
            let a = q(&s.start.re);
            let b = match &s.end {
                SegmentEnd::Point(p) => q(&p.re),
                SegmentEnd::Ray(d) if d.re.is_pos() => extent.clone(),
                SegmentEnd::Ray(_) => -extent.clone(),
            };
            rows.push(path(if s.truncated { "segment truncated" } else { "segment" }, vec![(a.clone(), y.clone()), (b, y.clone())], false));
            ticks.push(marker("endpoint", (a, y.clone())));
        }
        labels.push(label("chamber", (-extent.clone() - Rational::one(), y), c.id.to_string()));
    }
    ticks.sort_by(|a, b| format!("{a:?}").cmp(&format!("{b:?}")));
    ticks.dedup();
    vec![("segments".into(), rows), ("endpoints".into(), ticks), ("labels".into(), labels)]
}

pub fn atlas_scene(atlas: &AnyAtlas) -> Result<Scene, RenderError> {
    atlas_scene_with(atlas, &Style::default())
}

fn atlas_scene_with(atlas: &AnyAtlas, style: &Style) -> Result<Scene, RenderError> {
    use crate::leaf_atlas::LeafType;
    let layers = match atlas {
        AnyAtlas::Rational(a) if a.chambers.is_empty() => return Err(RenderError::EmptyAtlas),
        AnyAtlas::Quadratic(a) if a.chambers.is_empty() => return Err(RenderError::EmptyAtlas),
        AnyAtlas::Rational(a) => match a.leaf {
            LeafType::Positive => positive_scene(a),
            LeafType::Negative => negative_scene(a),
            LeafType::Arithmetic => arithmetic_scene(a),
            LeafType::NonArithmetic => nonarith_scene(a),
        },
        AnyAtlas::Quadratic(a) => nonarith_scene(a),
    };
    Ok(Scene::new(layers, style))
}

pub fn render_atlas(atlas: &AnyAtlas, style: &Style) -> Result<String, RenderError> {
    Ok(atlas_scene_with(atlas, style)?.to_svg(style))
}

/// Polygon diagrams of a single surface.
pub fn surface_scene(surface: &Surface<Rational>) -> Result<Scene, RenderError> {
    core_type(surface).map_err(|e| RenderError::InvalidSurface(e.to_string()))?;
    let style = Style::default();
    let layers = match surface {
        Surface::Torus(t) => {
            let (g1, g2) = (pt(&t.g1), pt(&t.g2));
            let o = ip(0, 0);
            let quad = vec![o.clone(), g1.clone(), add(&g1, &g2), g2.clone()];
            vec![
                ("polygons".into(), vec![path("chamber torus", quad, true)]),
                ("slits".into(), vec![path("slit", vec![o.clone(), pt(&t.alpha)], false)]),
                ("vertices".into(), vec![marker("black", o), marker("white", pt(&t.alpha))]),
                (
                    "labels".into(),
                    vec![
                        label("side", mid(&ip(0, 0), &g1), "a"),
                        label("side", mid(&g2, &add(&g1, &g2)), "a"),
                        label("side", mid(&ip(0, 0), &g2), "b"),
                        label("side", mid(&g1, &add(&g1, &g2)), "b"),
                    ],
                ),
            ]
        }
        Surface::Cylinder(c) => {
            let (u, z, w) = (pt(&c.u), pt(&c.z), pt(&(c.z.clone() - c.v.clone())));
            // second quadrilateral drawn to the right of the first
            let gap = u.0.abs() + u.1.abs() + Rational::one();
            let off = (gap.clone() + z.0.abs() + w.0.abs(), Rational::zero());
            let q1 = [ip(0, 0), u.clone(), add(&u, &z), z.clone()];
            let q2: Vec<Point> = [ip(0, 0), u.clone(), add(&u, &w), w.clone()].iter().map(|p| add(p, &off)).collect();
            let side = |q: &[Point], i: usize| mid(&q[i], &q[(i + 1) % 4]);
            let labels = vec![
                label("side", side(&q1, 0), "a"),
                label("side", side(&q2, 2), "a"),
                label("side", side(&q1, 2), "b"),
                label("side", side(&q2, 0), "b"),
                label("side", side(&q1, 3), "c"),
                label("side", side(&q1, 1), "c"),
                label("side", side(&q2, 3), "d"),
                label("side", side(&q2, 1), "d"),
            ];
            let markers = vec![marker("black", q1[0].clone()), marker("white", q1[3].clone()), marker("black", q2[0].clone()), marker("white", q2[3].clone())];
            vec![
                ("polygons".into(), vec![path("chamber quad", q1.to_vec(), true), path("chamber quad", q2, true)]),
                ("vertices".into(), markers),
                ("labels".into(), labels),
            ]
        }
        Surface::Hexagon(h) => {
            let v: Vec<Point> = h.vertices().iter().map(pt).collect();
            let mut labels = Vec::new();
            for i in 0..6 {
                labels.push(label("side", mid(&v[i], &v[(i + 1) % 6]), format!("{}", i % 3 + 1)));
            }
            let markers = v.iter().enumerate().map(|(i, p)| marker(if i % 2 == 0 { "black" } else { "white" }, p.clone())).collect();
            vec![
                ("polygons".into(), vec![path("chamber hexagon", v.clone(), true)]),
                ("vertices".into(), markers),
                ("labels".into(), labels),
            ]
        }
        Surface::Slit(s) => {
            let [a, b, c] = &s.l;
            let xs = [Rational::zero(), a.clone(), a.clone() + b.clone(), s.total_length()];
            let lift = Rational::new(1.into(), 8.into()) * s.total_length();
            let segs: Vec<Item> =
                (0..3).map(|i| path("slit", vec![(xs[i].clone(), Rational::zero()), (xs[i + 1].clone(), Rational::zero())], false)).collect();
            let mut labels = Vec::new();
            for (i, name) in ["A", "B", "C"].iter().enumerate() {
                let m = (xs[i].clone() + xs[i + 1].clone()) / Rational::from_int(2);
                labels.push(label("side upper", (m, lift.clone()), *name));
            }
            // the lower side carries the same pieces in reverse order
            let lower = [c, b, a];
            let mut x = Rational::zero();
            for (l, name) in lower.iter().zip(["C'", "B'", "A'"]) {
                let m = x.clone() + (*l).clone() / Rational::from_int(2);
                labels.push(label("side lower", (m, -lift.clone()), name));
                x += (*l).clone();
            }
            let (first, second) = match s.marking {
                crate::surface_kernel::Marking::BlackFirst => ("black", "white"),
                crate::surface_kernel::Marking::WhiteFirst => ("white", "black"),
            };
            vec![
                ("slits".into(), segs),
                ("vertices".into(), vec![marker(first, (xs[0].clone(), Rational::zero())), marker(second, (xs[3].clone(), Rational::zero()))]),
                ("labels".into(), labels),
            ]
        }
    };
    Ok(Scene::new(layers, &style))
}

pub fn render_surface(surface: &Surface<Rational>) -> Result<String, RenderError> {
    Ok(surface_scene(surface)?.to_svg(&Style::default()))
}
