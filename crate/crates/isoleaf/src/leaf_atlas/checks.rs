//! Global verification of a built atlas.

use std::collections::{HashMap, HashSet, VecDeque};

use super::star::{assemble_stars, walk_with, StarIndex};
use super::{Atlas, AtlasError, ChamberId, LeafType, PointTag, SegmentEnd, SegmentLabel};
use crate::field::{Cx, ExactField, Rational};
use crate::surface_kernel::{cylinder_boundary_surface, marked_match, Sign};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckLine {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl CheckLine {
    fn from_result(name: &str, r: Result<String, String>) -> Self {
        match r {
            Ok(detail) => CheckLine { name: name.into(), pass: true, detail },
            Err(detail) => CheckLine { name: name.into(), pass: false, detail },
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CheckReport {
    pub lines: Vec<CheckLine>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.lines.iter().all(|l| l.pass)
    }
}

impl CheckReport {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "passed": self.passed(),
            "checks": self.lines.iter().map(|l| serde_json::json!({
                "name": l.name, "pass": l.pass, "detail": l.detail,
            })).collect::<Vec<_>>(),
        })
    }
}

/// `segment i CHAMBER [start, end]` with exact coordinates.
pub fn seg_desc<R: ExactField>(atlas: &Atlas<R>, i: usize) -> String {
    let Some(s) = atlas.segments.get(i) else { return format!("segment {i}") };
    let pt = |z: &Cx<R>| format!("({}, {})", z.re.encode(), z.im.encode());
    let end = match &s.end {
        SegmentEnd::Point(q) => pt(q),
        SegmentEnd::Ray(d) => format!("ray {}", pt(d)),
    };
    format!("segment {i} {} [{} .. {}]", atlas.chambers[s.chamber].id, pt(&s.start), end)
}

pub fn corner_desc<R: ExactField>(atlas: &Atlas<R>, i: usize) -> String {
    let c = &atlas.corners[i];
    format!("corner {i} {} at ({}, {})", atlas.chambers[c.chamber].id, c.point.re.encode(), c.point.im.encode())
}

impl std::fmt::Display for CheckReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for l in &self.lines {
            writeln!(f, "{} {}: {}", if l.pass { "PASS" } else { "FAIL" }, l.name, l.detail)?;
        }
        Ok(())
    }
}

/// Every gluing has its inverse record, maps its segment onto the partner
/// and no segment is glued twice; unglued segments are exactly the
/// truncated ones.
pub fn gluing_involution_check<R: ExactField>(atlas: &Atlas<R>) -> Result<(), String> {
    let mut seen = HashMap::new();
    for (i, g) in atlas.gluings.iter().enumerate() {
        if g.from >= atlas.segments.len() || g.to >= atlas.segments.len() {
            return Err(format!("gluing {i} references a missing segment"));
        }
        if let Some(j) = seen.insert(g.from, i) {
            return Err(format!("{} glued by {j} and {i}", seg_desc(atlas, g.from)));
        }
    }
    for (i, g) in atlas.gluings.iter().enumerate() {
        let back = seen.get(&g.to).map(|&j| &atlas.gluings[j]);
        match back {
            Some(b) if b.to == g.from && b.offset == -g.offset.clone() => {}
            _ => return Err(format!("gluing {i} of {} has no inverse record", seg_desc(atlas, g.from))),
        }
        let a = &atlas.segments[g.from];
        let (s, e) = a.translated(&g.offset);
        if !atlas.segments[g.to].same_set(&s, &e) {
            return Err(format!("gluing {i} does not map {} onto {}", seg_desc(atlas, g.from), seg_desc(atlas, g.to)));
        }
    }
    for (i, s) in atlas.segments.iter().enumerate() {
        if s.truncated == seen.contains_key(&i) {
            return Err(format!("{} truncation flag disagrees with its gluings", seg_desc(atlas, i)));
        }
    }
    Ok(())
}

/// Recomputes every star; closed stars total 6π (2π at a pinched torus).
pub fn cone_angle_check<R: ExactField>(atlas: &Atlas<R>) -> Result<String, String> {
    let index = StarIndex::new(atlas);
    for i in 0..atlas.corners.len() {
        let w = walk_with(atlas, &index, i);
        if w.closed && !w.consistent {
            return Err(format!("star through {} changes direction across a gluing", corner_desc(atlas, i)));
        }
    }
    let fresh = assemble_stars(atlas, |_, _| PointTag::Cone);
    if fresh.len() != atlas.singularities.len() {
        return Err(format!("{} stars recorded, {} found", atlas.singularities.len(), fresh.len()));
    }
    let mut centers = 0;
    for (s, f) in atlas.singularities.iter().zip(&fresh) {
        if s.corners != f.corners || s.angle_pi != f.angle_pi {
            return Err(format!("recorded star at {} disagrees with the walk", corner_desc(atlas, s.corners[0])));
        }
        let want = match s.tag {
            PointTag::Cone => 6,
            PointTag::PinchedTorus => {
                centers += 1;
                2
            }
        };
        if s.angle_pi != want {
            return Err(format!("star at {} has angle {}π", corner_desc(atlas, s.corners[0]), s.angle_pi));
        }
    }
    if centers > 1 {
        return Err(format!("{centers} pinched-torus points"));
    }
    Ok(format!(
        "{} complete stars, {} corners on truncated stars",
        atlas.singularities.len(),
        atlas.incomplete_corner_count()
    ))
}

/// Breadth-first spanning tree of the chamber adjacency graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConnectivityCertificate {
    pub connected: bool,
    pub root: usize,
    /// `parent[c]` for every reached chamber other than the root.
    pub parent: Vec<Option<usize>>,
    pub reached: usize,
}

impl ConnectivityCertificate {
    /// Edges of the spanning tree, child first.
    pub fn tree_edges(&self) -> Vec<(usize, usize)> {
        self.parent.iter().enumerate().filter_map(|(c, p)| p.map(|p| (c, p))).collect()
    }
}

pub fn connectivity_check<R: ExactField>(atlas: &Atlas<R>) -> ConnectivityCertificate {
    let n = atlas.chambers.len();
    let mut adj = vec![Vec::new(); n];
    for (a, b) in atlas.adjacency() {
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut parent = vec![None; n];
    let mut seen = vec![false; n];
    let mut reached = 0;
    if n > 0 {
        let mut q = VecDeque::from([0usize]);
        seen[0] = true;
        while let Some(c) = q.pop_front() {
            reached += 1;
            for &d in &adj[c] {
                if !seen[d] {
                    seen[d] = true;
                    parent[d] = Some(c);
                    q.push_back(d);
                }
            }
        }
    }
    ConnectivityCertificate { connected: reached == n, root: 0, parent, reached }
}

/// Image of a chamber chart under `z ↦ −z + shift`.
fn involution_chart<R: ExactField>(atlas: &Atlas<R>, c: usize, map: &HashMap<ChamberId, usize>) -> Option<(usize, Cx<R>)> {
    let id = atlas.chambers[c].id;
    let target = *map.get(&id.negated())?;
    let shift = match id {
        ChamberId::Deg { triple } => {
            // the z1 chart of the negated triple starts at a different rotation
            let [a, b, _] = triple.elements();
            let img = triple.negated().elements();
            let super::Region::Triangle { vertices } = &atlas.chambers[c].region else {
                return None;
            };
            let (va, mvb) = (vertices[1].clone(), vertices[2].clone());
            if img[0] == -a {
                Cx::zero()
            } else if img[0] == -b {
                // rotation (−b, −c, −a): chart w1 − b
                mvb
            } else {
                va
            }
        }
        _ => Cx::zero(),
    };
    Some((target, shift))
}

/// The map negating all periods sends chambers, segments and gluings of the
/// atlas to themselves.
pub fn involution_equivariance_check<R: ExactField>(atlas: &Atlas<R>) -> Result<(), String> {
    let map = atlas.chamber_map();
    let mut by_chamber: Vec<Vec<usize>> = vec![Vec::new(); atlas.chambers.len()];
    for (i, s) in atlas.segments.iter().enumerate() {
        by_chamber[s.chamber].push(i);
    }
    let mut charts = Vec::with_capacity(atlas.chambers.len());
    for c in 0..atlas.chambers.len() {
        let chart = involution_chart(atlas, c, &map)
            .ok_or_else(|| format!("chamber {} has no image", atlas.chambers[c].id))?;
        charts.push(chart);
    }
    let mut image = Vec::with_capacity(atlas.segments.len());
    for (i, s) in atlas.segments.iter().enumerate() {
        let (c2, shift) = &charts[s.chamber];
        let start = -s.start.clone() + shift.clone();
        let end = match &s.end {
            SegmentEnd::Point(q) => SegmentEnd::Point(-q.clone() + shift.clone()),
            SegmentEnd::Ray(d) => SegmentEnd::Ray(-d.clone()),
        };
        let slit = matches!(s.label, SegmentLabel::SlitLeft | SegmentLabel::SlitRight);
        let j = by_chamber[*c2]
            .iter()
            .copied()
            .find(|&j| {
                let t = &atlas.segments[j];
                t.same_set(&start, &end) && (!slit || t.label == s.label)
            })
            .ok_or_else(|| format!("{} has no image", seg_desc(atlas, i)))?;
        image.push(j);
    }
    let glued: HashSet<(usize, usize, Cx<R>)> =
        atlas.gluings.iter().map(|g| (g.from, g.to, g.offset.clone())).collect();
    for (i, g) in atlas.gluings.iter().enumerate() {
        let sa = &charts[atlas.segments[g.from].chamber].1;
        let sb = &charts[atlas.segments[g.to].chamber].1;
        let off = -g.offset.clone() + sb.clone() - sa.clone();
        if !glued.contains(&(image[g.from], image[g.to], off)) {
            return Err(format!("image of gluing {i} ({} to {}) is missing", seg_desc(atlas, g.from), seg_desc(atlas, g.to)));
        }
    }
    Ok(())
}

/// Compares the degenerate surfaces on both sides of an arithmetic gluing at
/// boundary coordinate `t` of its source segment.
pub fn wall_surface_match(atlas: &Atlas<Rational>, gluing: usize, t: &Rational) -> Result<bool, AtlasError> {
    let g = atlas.gluings.get(gluing).ok_or(AtlasError::NotArithmetic)?;
    let a = &atlas.segments[g.from];
    let b = &atlas.segments[g.to];
    let (ChamberId::CylArith { k, l, sign }, ChamberId::CylArith { k: k2, l: l2, sign: s2 }) =
        (atlas.chambers[a.chamber].id, atlas.chambers[b.chamber].id)
    else {
        return Err(AtlasError::NotArithmetic);
    };
    let z = Cx::real(t.clone());
    if !a.contains_interior(&z) {
        return Err(AtlasError::NotInterior);
    }
    let w = z + g.offset.clone();
    let lhs = cylinder_boundary_surface(k, l, sign, t).map_err(|_| AtlasError::NotArithmetic)?;
    let rhs = cylinder_boundary_surface(k2, l2, s2, &w.re).map_err(|_| AtlasError::NotArithmetic)?;
    Ok(marked_match(&lhs, &rhs))
}

/// Wall graph of the arithmetic leaf modulo the involution: vertices are
/// points where walls meet (cone points, the center, truncated ends), edges
/// are glued segment pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WallTree {
    pub vertex_count: usize,
    pub edges: Vec<(usize, usize)>,
    pub root: usize,
    /// Vertex is a closed star.
    pub complete: Vec<bool>,
    /// Wall germs at the center before taking the quotient.
    pub root_germs: usize,
    /// Length of each edge, parallel to `edges`.
    pub lengths: Vec<Rational>,
}

impl WallTree {
    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.vertex_count];
        for &(a, b) in &self.edges {
            d[a] += 1;
            d[b] += 1;
        }
        d
    }

    pub fn is_tree(&self) -> bool {
        if self.edges.len() + 1 != self.vertex_count {
            return false;
        }
        let mut uf = UnionFind::new(self.vertex_count);
        self.edges.iter().all(|&(a, b)| uf.union(a, b))
    }

    /// Children lists from a breadth-first traversal at the root.
    pub fn children(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.vertex_count];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        let mut out = vec![Vec::new(); self.vertex_count];
        let mut seen = vec![false; self.vertex_count];
        let mut q = VecDeque::from([self.root]);
        seen[self.root] = true;
        while let Some(v) = q.pop_front() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    out[v].push(w);
                    q.push_back(w);
                }
            }
        }
        out
    }

    /// Degree of every complete vertex other than the root.
    pub fn branch_degrees(&self) -> Vec<usize> {
        let d = self.degrees();
        (0..self.vertex_count).filter(|&v| v != self.root && self.complete[v]).map(|v| d[v]).collect()
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }
    /// `false` if already joined.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.0[ra.max(rb)] = ra.min(rb);
        true
    }
}

pub fn wall_tree(atlas: &Atlas<Rational>) -> Result<WallTree, AtlasError> {
    if atlas.leaf != LeafType::Arithmetic {
        return Err(AtlasError::NotArithmetic);
    }
    let n = atlas.corners.len();
    let index = StarIndex::new(atlas);
    // points of the leaf: corners joined by walk steps
    let mut leaf_uf = UnionFind::new(n);
    for i in 0..n {
        let w = walk_with(atlas, &index, i);
        if w.corners.len() > 1 {
            leaf_uf.union(i, w.corners[1]);
        }
    }
    let corner_at: HashMap<(usize, Cx<Rational>), usize> =
        atlas.corners.iter().enumerate().map(|(i, c)| ((c.chamber, c.point.clone()), i)).collect();
    let map = atlas.chamber_map();
    let mut uf = UnionFind::new(n);
    for i in 0..n {
        uf.union(i, leaf_uf.find(i));
        let c = &atlas.corners[i];
        let img = map[&atlas.chambers[c.chamber].id.negated()];
        if let Some(&j) = corner_at.get(&(img, -c.point.clone())) {
            uf.union(i, j);
        }
    }
    let mut class = HashMap::new();
    let mut vertex = vec![0; n];
    for (i, v) in vertex.iter_mut().enumerate() {
        let r = uf.find(i);
        let next = class.len();
        *v = *class.entry(r).or_insert(next);
    }
    let vertex_count = class.len();
    let mut complete = vec![false; vertex_count];
    for s in &atlas.singularities {
        complete[vertex[s.corners[0]]] = true;
    }
    let center_corner = atlas
        .corners
        .iter()
        .position(|c| {
            matches!(atlas.chambers[c.chamber].id, ChamberId::CylArith { k: 1, l: 0, sign: Sign::Plus })
                && c.point.is_zero()
        })
        .ok_or(AtlasError::NotArithmetic)?;
    let root = vertex[center_corner];
    let leaf_root: Vec<usize> = (0..n).map(|i| leaf_uf.find(i)).collect();

    // one edge per glued pair modulo the involution
    let seg_image = |s: usize| -> Option<usize> {
        let seg = &atlas.segments[s];
        let img = map[&atlas.chambers[seg.chamber].id.negated()];
        let SegmentEnd::Point(q) = &seg.end else { return None };
        atlas.segments_of(img).find(|(_, t)| t.same_set(&-seg.start.clone(), &SegmentEnd::Point(-q.clone()))).map(|(j, _)| j)
    };
    let endpoint_vertex = |s: usize, p: &Cx<Rational>| corner_at.get(&(atlas.segments[s].chamber, p.clone())).map(|&c| vertex[c]);
    let mut keys = HashSet::new();
    let mut edges = Vec::new();
    let mut lengths = Vec::new();
    let mut root_germs = 0;
    for g in &atlas.gluings {
        if g.from > g.to {
            continue;
        }
        let seg = &atlas.segments[g.from];
        let SegmentEnd::Point(q) = &seg.end else { continue };
        let (Some(a), Some(b)) = (endpoint_vertex(g.from, &seg.start), endpoint_vertex(g.from, q)) else {
            continue;
        };
        let center_side =
            |p: &Cx<Rational>| corner_at.get(&(seg.chamber, p.clone())).is_some_and(|&c| leaf_root[c] == leaf_root[center_corner]);
        if center_side(&seg.start) || center_side(q) {
            root_germs += 1;
        }
        let mut key = vec![g.from, g.to];
        key.extend(seg_image(g.from));
        key.extend(seg_image(g.to));
        let key = *key.iter().min().unwrap();
        if keys.insert(key) {
            edges.push((a.min(b), a.max(b)));
            let d = q.clone() - seg.start.clone();
            lengths.push(d.re.abs_exact() + d.im.abs_exact());
        }
    }
    Ok(WallTree { vertex_count, edges, root, complete, root_germs, lengths })
}

/// Every closed-form check that applies to the atlas.
pub fn check_all<R: ExactField>(atlas: &Atlas<R>) -> CheckReport {
    let mut lines = Vec::new();
    lines.push(CheckLine::from_result(
        "gluing involution",
        gluing_involution_check(atlas).map(|_| format!("{} gluing records", atlas.gluings.len())),
    ));
    lines.push(CheckLine::from_result("cone angles", cone_angle_check(atlas)));
    let cert = connectivity_check(atlas);
    lines.push(CheckLine {
        name: "connectivity".into(),
        pass: cert.connected,
        detail: format!("{} of {} chambers reached", cert.reached, atlas.chambers.len()),
    });
    lines.push(CheckLine::from_result(
        "involution equivariance",
        involution_equivariance_check(atlas).map(|_| "negation preserves the gluing set".to_string()),
    ));
    CheckReport { lines }
}

/// Checks specific to the arithmetic leaf.
pub fn check_arithmetic(atlas: &Atlas<Rational>) -> Vec<CheckLine> {
    let mut lines = Vec::new();
    let mut bad = None;
    let mut count = 0;
    for (i, g) in atlas.gluings.iter().enumerate() {
        let seg = &atlas.segments[g.from];
        let SegmentEnd::Point(q) = &seg.end else { continue };
        for f in [Rational::new(1.into(), 4.into()), Rational::new(1.into(), 2.into()), Rational::new(2.into(), 3.into())] {
            let t = seg.start.re.clone() + (q.re.clone() - seg.start.re.clone()) * f;
            count += 1;
            if wall_surface_match(atlas, i, &t) != Ok(true) {
                bad.get_or_insert(format!("gluing {i} at t={t}"));
            }
        }
    }
    lines.push(CheckLine::from_result(
        "wall surface match",
        bad.map_or(Ok(format!("{count} samples")), Err),
    ));
    let phi = phi_count(atlas);
    lines.push(CheckLine::from_result("phi count", phi));
    lines.push(CheckLine::from_result(
        "wall tree",
        match wall_tree(atlas) {
            Ok(t) => {
                let d = t.degrees();
                let branch = t.branch_degrees();
                if !t.is_tree() {
                    Err("wall graph has a cycle or is disconnected".into())
                } else if d[t.root] != 1 || t.root_germs != 2 {
                    Err(format!("center degree {} with {} germs", d[t.root], t.root_germs))
                } else if let Some(x) = branch.iter().find(|&&x| x != 3) {
                    Err(format!("branch vertex of degree {x}"))
                } else {
                    Ok(format!("{} vertices, {} branch points", t.vertex_count, branch.len()))
                }
            }
            Err(e) => Err(e.to_string()),
        },
    ));
    lines
}

fn phi_count(atlas: &Atlas<Rational>) -> Result<String, String> {
    let mut counts: HashMap<(u64, Sign), u64> = HashMap::new();
    for c in &atlas.chambers {
        if let ChamberId::CylArith { k, sign, .. } = c.id {
            *counts.entry((k, sign)).or_default() += 1;
        }
    }
    for k in 1..=atlas.bound {
        let phi = (1..=k).filter(|&j| num_integer::gcd(j, k) == 1).count() as u64;
        for sign in [Sign::Plus, Sign::Minus] {
            let got = counts.get(&(k, sign)).copied().unwrap_or(0);
            if got != phi {
                return Err(format!("k={k}: {got} chambers, phi={phi}"));
            }
        }
    }
    Ok(format!("k = 1..{}", atlas.bound))
}
