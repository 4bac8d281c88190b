//! Acceptance suite. Each criterion is checked by the library route and by an
//! oracle written here, prints one PASS/FAIL line, and the test asserts that
//! the failing set is exactly the known one.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::f64::consts::PI;
use std::io::Write;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use isoleaf::field::{complex_cross, int, rat, Cx, ExactField, QuadReal, Rational};
use isoleaf::leaf_atlas::{
    admissible_pairs, build_arithmetic, build_negative, build_nonarith, build_positive, cone_angle_check,
    connectivity_check, gluing_involution_check, reachability_chain, wall_surface_match, Atlas, ChamberId,
    PointTag, SegmentEnd,
};
use isoleaf::period_algebra::{triples_in_box, AnyCharacter, LatticeElement, PeriodCharacter};
use isoleaf::surface_kernel::{HexagonSurface, Sign, TorusSurface};
use isoleaf::teich_numeric::{boundary_equivariance, boundary_limit, chamber_trace, Cusp, TraceConfig};
use isoleaf::veech::{veech_group, VeechDescriptor};
use isoleaf::WeierstrassData;

type Outcome = Result<String, String>;

/// Criteria expected to fail; see the decisions ledger.
const KNOWN_FAILING: [usize; 2] = [5, 8];

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

// ---------------------------------------------------------------- atlas oracles

fn key<R: ExactField>(chamber: usize, p: &Cx<R>) -> String {
    format!("{chamber}|{}|{}", p.re.encode(), p.im.encode())
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new() -> Self {
        UnionFind { parent: Vec::new() }
    }
    fn add(&mut self) -> usize {
        self.parent.push(self.parent.len());
        self.parent.len() - 1
    }
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut y = x;
        while self.parent[y] != r {
            let next = self.parent[y];
            self.parent[y] = r;
            y = next;
        }
        r
    }
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra] = rb;
        }
    }
}

fn away<R: ExactField>(atlas: &Atlas<R>, seg: usize, p: &Cx<R>) -> Option<Complex64> {
    let s = &atlas.segments[seg];
    match &s.end {
        _ if s.start == *p => Some(match &s.end {
            SegmentEnd::Point(q) => (q.clone() - s.start.clone()).to_c64(),
            SegmentEnd::Ray(d) => d.to_c64(),
        }),
        SegmentEnd::Point(q) if q == p => Some((s.start.clone() - q.clone()).to_c64()),
        _ => None,
    }
}

/// Points of the leaf as classes of chamber vertices under the gluings; the
/// angle of a class is the sum of counterclockwise corner sweeps.
fn angle_oracle<R: ExactField>(atlas: &Atlas<R>, expect_center: bool) -> Outcome {
    let mut ids: HashMap<String, usize> = HashMap::new();
    let mut uf = UnionFind::new();
    let mut id_of = |k: String, uf: &mut UnionFind| *ids.entry(k).or_insert_with(|| uf.add());
    let corner_ids: Vec<usize> = atlas.corners.iter().map(|c| id_of(key(c.chamber, &c.point), &mut uf)).collect();
    for g in &atlas.gluings {
        let (a, b) = (&atlas.segments[g.from], &atlas.segments[g.to]);
        let ends: Vec<Cx<R>> = match &a.end {
            SegmentEnd::Point(q) => vec![a.start.clone(), q.clone()],
            SegmentEnd::Ray(_) => vec![a.start.clone()],
        };
        for e in ends {
            let x = id_of(key(a.chamber, &e), &mut uf);
            let y = id_of(key(b.chamber, &(e + g.offset.clone())), &mut uf);
            uf.union(x, y);
        }
    }
    let mut classes: HashMap<usize, Vec<usize>> = HashMap::new();
    for (i, &id) in corner_ids.iter().enumerate() {
        classes.entry(uf.find(id)).or_default().push(i);
    }
    let sweep = |i: usize| -> Result<f64, String> {
        let c = &atlas.corners[i];
        let f = away(atlas, c.from, &c.point).ok_or_else(|| format!("corner {i}: point not on its from-segment"))?;
        let t = away(atlas, c.to, &c.point).ok_or_else(|| format!("corner {i}: point not on its to-segment"))?;
        let mut a = t.arg() - f.arg();
        while a <= 1e-12 {
            a += 2.0 * PI;
        }
        Ok(a)
    };
    let closed = |cs: &[usize]| {
        cs.iter().all(|&i| {
            let c = &atlas.corners[i];
            !atlas.segments[c.from].truncated && !atlas.segments[c.to].truncated
        })
    };
    let closed_classes = classes.values().filter(|cs| closed(cs)).count();
    ensure(closed_classes == atlas.singularities.len(), || {
        format!("{closed_classes} closed vertex classes, {} recorded stars", atlas.singularities.len())
    })?;
    let mut centers = 0;
    for s in &atlas.singularities {
        let root = uf.find(corner_ids[s.corners[0]]);
        let mut want: Vec<usize> = classes[&root].clone();
        let mut got = s.corners.clone();
        want.sort();
        got.sort();
        ensure(want == got, || format!("star at corner {} has corners {got:?}, class {want:?}", s.corners[0]))?;
        let total: f64 = want.iter().map(|&i| sweep(i)).sum::<Result<f64, String>>()? / PI;
        let expected = match s.tag {
            PointTag::Cone => 6.0,
            PointTag::PinchedTorus => {
                centers += 1;
                2.0
            }
        };
        ensure((total - expected).abs() < 1e-9 && s.angle_pi as f64 == expected, || {
            format!("star at corner {}: oracle {total}π, recorded {}π", s.corners[0], s.angle_pi)
        })?;
    }
    ensure(centers == usize::from(expect_center), || format!("{centers} centers"))?;
    Ok(format!("{} stars", atlas.singularities.len()))
}

fn involution_oracle<R: ExactField>(atlas: &Atlas<R>) -> Result<(), String> {
    let mut from = HashMap::new();
    let mut to = HashMap::new();
    for (i, g) in atlas.gluings.iter().enumerate() {
        ensure(from.insert(g.from, i).is_none(), || format!("segment {} leaves twice", g.from))?;
        ensure(to.insert(g.to, i).is_none(), || format!("segment {} entered twice", g.to))?;
    }
    for (i, g) in atlas.gluings.iter().enumerate() {
        let back = from.get(&g.to).map(|&j| &atlas.gluings[j]);
        ensure(back.is_some_and(|b| b.to == g.from && b.offset == -g.offset.clone()), || {
            format!("gluing {i} has no reverse record")
        })?;
        let (a, b) = (&atlas.segments[g.from], &atlas.segments[g.to]);
        let moved = a.start.clone() + g.offset.clone();
        let ok = match (&a.end, &b.end) {
            (SegmentEnd::Point(p), SegmentEnd::Point(q)) => {
                let p = p.clone() + g.offset.clone();
                (moved == b.start && p == *q) || (moved == *q && p == b.start)
            }
            (SegmentEnd::Ray(d), SegmentEnd::Ray(e)) => {
                moved == b.start && complex_cross(d, e).is_zero() && (d.re.clone() * e.re.clone() + d.im.clone() * e.im.clone()).is_pos()
            }
            _ => false,
        };
        ensure(ok, || format!("gluing {i} does not carry segment {} onto {}", g.from, g.to))?;
    }
    for (i, s) in atlas.segments.iter().enumerate() {
        ensure(s.truncated != from.contains_key(&i), || format!("segment {i}: truncated={} glued={}", s.truncated, from.contains_key(&i)))?;
    }
    Ok(())
}

fn bfs_oracle<R: ExactField>(atlas: &Atlas<R>) -> usize {
    let n = atlas.chambers.len();
    let mut adj = vec![Vec::new(); n];
    for g in &atlas.gluings {
        adj[atlas.segments[g.from].chamber].push(atlas.segments[g.to].chamber);
    }
    let mut seen = vec![false; n];
    let mut queue = VecDeque::from([0]);
    seen[0] = true;
    let mut count = 1;
    while let Some(c) = queue.pop_front() {
        for &d in &adj[c] {
            if !seen[d] {
                seen[d] = true;
                count += 1;
                queue.push_back(d);
            }
        }
    }
    count
}

// ---------------------------------------------------------------- criteria

fn c1_cone_angles() -> Outcome {
    let atlases: Vec<(&str, Atlas<Rational>, bool)> = vec![
        ("negative(4)", build_negative(4), false),
        ("positive(4)", build_positive(4), false),
        ("arithmetic(20)", build_arithmetic(20), true),
    ];
    let mut parts = Vec::new();
    for (name, a, center) in &atlases {
        cone_angle_check(a).map_err(|e| format!("{name}: {e}"))?;
        let o = angle_oracle(a, *center).map_err(|e| format!("{name} oracle: {e}"))?;
        ensure(!a.singularities.is_empty(), || format!("{name}: no complete stars"))?;
        parts.push(format!("{name} {o}"));
    }
    Ok(parts.join(", "))
}

fn c2_involution_walls() -> Outcome {
    let a = build_arithmetic(20);
    gluing_involution_check(&a)?;
    involution_oracle(&a)?;
    let mut samples = 0;
    for (i, g) in a.gluings.iter().enumerate() {
        let s = &a.segments[g.from];
        let x0 = s.start.re.clone();
        let ts: Vec<Rational> = match &s.end {
            SegmentEnd::Point(q) => [rat(1, 4), rat(1, 2), rat(3, 4)]
                .into_iter()
                .map(|f| x0.clone() + (q.re.clone() - x0.clone()) * f)
                .collect(),
            SegmentEnd::Ray(d) => [int(1), int(2), int(3)].into_iter().map(|f| x0.clone() + d.re.clone() * f).collect(),
        };
        for t in ts {
            let ok = wall_surface_match(&a, i, &t).map_err(|e| format!("gluing {i} at {t}: {e}"))?;
            ensure(ok, || format!("gluing {i}: wall surfaces differ at t={t}"))?;
            samples += 1;
        }
    }
    Ok(format!("{} gluing records, {samples} wall samples", a.gluings.len()))
}

fn c3_connectivity() -> Outcome {
    let atlases: Vec<(&str, Atlas<Rational>)> =
        vec![("positive(4)", build_positive(4)), ("negative(4)", build_negative(4)), ("arithmetic(20)", build_arithmetic(20))];
    for (name, a) in &atlases {
        let cert = connectivity_check(a);
        ensure(cert.connected && cert.reached == a.chambers.len(), || format!("{name}: certificate reaches {}", cert.reached))?;
        for (c, p) in cert.tree_edges() {
            ensure(a.adjacency().contains(&(c.min(p), c.max(p))), || format!("{name}: tree edge {c}-{p} is not a gluing"))?;
        }
        let r = bfs_oracle(a);
        ensure(r == a.chambers.len(), || format!("{name}: oracle BFS reaches {r} of {}", a.chambers.len()))?;
    }
    let big = build_arithmetic(50);
    let index = big.chamber_map();
    let mut steps: HashMap<(usize, usize), bool> = HashMap::new();
    for g in &big.gluings {
        let s = &big.segments[g.from];
        let through_zero = s.start.is_zero() || matches!(&s.end, SegmentEnd::Point(q) if q.is_zero());
        let e = steps.entry((s.chamber, big.segments[g.to].chamber)).or_insert(false);
        *e |= through_zero;
    }
    let pairs = admissible_pairs(50);
    for &(k, l) in &pairs {
        let chain = reachability_chain(k, l).map_err(|e| e.to_string())?;
        ensure(chain.first() == Some(&ChamberId::CylArith { k, l, sign: Sign::Plus }), || format!("({k},{l}): chain start"))?;
        ensure(matches!(chain.last(), Some(ChamberId::CylArith { k: 1, l: 0, .. })), || format!("({k},{l}): chain end"))?;
        for w in chain.windows(2) {
            let (x, y) = (index[&w[0]], index[&w[1]]);
            ensure(steps.get(&(x, y)) == Some(&true), || format!("({k},{l}): {} and {} not glued through 0", w[0], w[1]))?;
        }
    }
    Ok(format!("3 atlases connected, {} chains at k ≤ 50", pairs.len()))
}

fn totient(mut n: u64) -> u64 {
    let mut r = n;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            r -= r / p;
        }
        p += 1;
    }
    if n > 1 {
        r -= r / n;
    }
    r
}

fn c4_phi_count() -> Outcome {
    let a = build_arithmetic(50);
    let mut count: HashMap<(u64, Sign), u64> = HashMap::new();
    for c in &a.chambers {
        if let ChamberId::CylArith { k, sign, .. } = c.id {
            *count.entry((k, sign)).or_default() += 1;
        }
    }
    for k in 1..=50 {
        for sign in [Sign::Plus, Sign::Minus] {
            let n = count.get(&(k, sign)).copied().unwrap_or(0);
            ensure(n == totient(k), || format!("k={k} {sign:?}: {n} chambers, phi={}", totient(k)))?;
        }
    }
    Ok("k = 1..50, both signs".into())
}

/// `x ∈ ℤ + θℤ` for real quadratic `x`, `θ`.
fn in_lattice(x: &QuadReal, theta: &QuadReal) -> bool {
    if theta.b().is_zero() {
        return false;
    }
    let n = x.b().clone() / theta.b().clone();
    let m = x.a().clone() - n.clone() * theta.a().clone();
    n.is_integer() && m.is_integer()
}

/// Norm-one units `α + β√D` with `1 ≤ β ≤ height` mapping `ℤ + θℤ` into itself.
fn stabilizing_units(d: u64, theta: &QuadReal, height: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    for beta in 1..=height {
        let s = d as u128 * beta as u128 * beta as u128 + 1;
        let alpha = (s as f64).sqrt() as u128;
        let Some(alpha) = [alpha.saturating_sub(1), alpha, alpha + 1].into_iter().find(|a| a * a == s) else {
            continue;
        };
        let eta = QuadReal::new(Rational::from_integer(BigInt::from(alpha)), Rational::from_integer(BigInt::from(beta)), d);
        if in_lattice(&eta, theta) && in_lattice(&(eta * theta.clone()), theta) {
            out.push((alpha as u64, beta));
        }
    }
    out
}

fn smallest_unit(d: u64) -> (u64, u64) {
    (1..).find_map(|beta: u64| {
        let s = d * beta * beta;
        [s - 1, s + 1].into_iter().find_map(|t| {
            let a = (t as f64).sqrt().round() as u64;
            (a * a == t).then_some((a, beta))
        })
    })
    .unwrap()
}

fn c5_veech() -> Outcome {
    let gauss = |g1: &str, g2: &str, f: &str| AnyCharacter::parse(f, None, g1, g2).unwrap();
    let v = veech_group(&gauss("1,0", "0,1", "gaussian")).map_err(|e| e.to_string())?;
    ensure(matches!(v, VeechDescriptor::ConjSL2Z { .. }), || format!("(1,i): {}", v.name()))?;
    let v = veech_group(&gauss("1,0", "0,0", "rational")).map_err(|e| e.to_string())?;
    ensure(v == VeechDescriptor::TriangularV, || format!("(1,0): {}", v.name()))?;

    const HEIGHT: u64 = 1_000_000;
    let chi = AnyCharacter::parse("quadratic", Some(2), "1,0", "0,1").unwrap();
    let v = veech_group(&chi).map_err(|e| e.to_string())?;
    let VeechDescriptor::QuadraticV { generator, k, .. } = &v else {
        return Err(format!("(1,√2): {}", v.name()));
    };
    let units = stabilizing_units(2, &QuadReal::sqrt(2), HEIGHT);
    let first = units.first().copied().ok_or("(1,√2): no stabilizing unit below the height")?;
    ensure(first == (3, 2) && generator.alpha == BigInt::from(3) && generator.beta == BigInt::from(2) && *k == 2, || {
        format!("(1,√2): descriptor {}+{}√2 k={k}, brute force {first:?}", generator.alpha, generator.beta)
    })?;
    let eps = smallest_unit(2);
    ensure(eps == (1, 1), || format!("fundamental unit of ℚ(√2) {eps:?}"))?;
    // every stabilizing unit below the height is a power of the generator
    let g = QuadReal::new(int(3), int(2), 2);
    let mut p = g.clone();
    let mut powers = Vec::new();
    while *p.b() <= int(HEIGHT as i64) {
        powers.push((p.a().to_integer(), p.b().to_integer()));
        p = p * g.clone();
    }
    let found: Vec<(BigInt, BigInt)> = units.iter().map(|&(a, b)| (BigInt::from(a), BigInt::from(b))).collect();
    ensure(found == powers, || format!("(1,√2): stabilizers {found:?} are not the powers {powers:?}"))?;

    // the D = m = 3 family: θ = (l + 3√3)/t
    let mut family = Vec::new();
    for (t, l) in [(1, 0), (2, 1), (4, 1), (5, 2)] {
        let theta = QuadReal::new(rat(l, t), rat(3, t), 3);
        let shifted = theta.clone() - QuadReal::from_int(theta.floor_int().to_string().parse::<i64>().unwrap());
        let chi = PeriodCharacter::new(Cx::real(QuadReal::one()), Cx::real(shifted.clone())).unwrap();
        let v = veech_group(&AnyCharacter::Quadratic { d: 3, chi }).map_err(|e| e.to_string())?;
        let brute = stabilizing_units(3, &shifted, 10_000);
        family.push((v == VeechDescriptor::TriangularV, format!("tau=({t},{l},3): {} brute {:?}", v.name(), brute.first())));
    }
    let trivial = family.iter().all(|f| f.0);
    let family: Vec<String> = family.into_iter().map(|f| f.1).collect();
    if !trivial {
        return Err(format!("D=m=3 family is not trivial: {}; (1,i), (1,0), (1,√2) as expected", family.join("; ")));
    }
    Ok(format!("ConjSL2Z, TriangularV, QuadraticV 3+2√2 k=2 (brute force to height {HEIGHT}), {}", family.join("; ")))
}

fn random_rational(rng: &mut ChaCha8Rng, span: i64) -> Rational {
    rat(rng.gen_range(-span..=span), rng.gen_range(1..=7))
}

fn c6_hexagon_area() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let triples = triples_in_box(3);
    let mut n = 0;
    while n < 100 {
        let g1 = Cx::new(random_rational(&mut rng, 9), random_rational(&mut rng, 9));
        let g2 = Cx::new(random_rational(&mut rng, 9), random_rational(&mut rng, 9));
        let vol = g1.re.clone() * g2.im.clone() - g1.im.clone() * g2.re.clone();
        if !vol.is_negative() {
            continue;
        }
        let chi = PeriodCharacter::new(g1.clone(), g2.clone()).unwrap();
        let t = triples[rng.gen_range(0..triples.len())];
        let val = |u: LatticeElement| Cx::new(
            g1.re.clone() * int(u.m) + g2.re.clone() * int(u.n),
            g1.im.clone() * int(u.m) + g2.im.clone() * int(u.n),
        );
        let [u1, u2, _] = t.elements().map(val);
        // interior point of the chamber triangle 0, u1, −u2
        let (a, b) = (rng.gen_range(1..20), rng.gen_range(1..20));
        let c = rng.gen_range(1..20);
        let s = int(a + b + c);
        let z1 = Cx::new(
            (u1.re.clone() * int(b) - u2.re.clone() * int(c)) / s.clone(),
            (u1.im.clone() * int(b) - u2.im.clone() * int(c)) / s,
        );
        let h = HexagonSurface::from_lattice(&chi, t.elements(), z1).map_err(|e| format!("hexagon {n}: {e}"))?;
        // black corners 0, u1, u1 + u2
        let b3 = Cx::new(u1.re.clone() + u2.re.clone(), u1.im.clone() + u2.im.clone());
        let shoelace = (u1.re.clone() * b3.im.clone() - u1.im.clone() * b3.re.clone()).abs() / int(2);
        let want = -vol / int(2);
        ensure(h.black_triangle_area() == want && shoelace == want, || {
            format!("hexagon {n}: area {} oracle {shoelace}, -Vol/2 = {want}", h.black_triangle_area())
        })?;
        n += 1;
    }
    let neg = PeriodCharacter::new(Cx::real(int(1)), Cx::new(int(0), int(-1))).unwrap();
    for _ in 0..50 {
        let alpha = Cx::new(random_rational(&mut rng, 3), random_rational(&mut rng, 3));
        ensure(TorusSurface::realizing(&neg, alpha.clone()).is_err(), || format!("torus accepted for (1,-i), alpha={alpha:?}"))?;
    }
    Ok("100 hexagons, 50 torus rejections".into())
}

/// `η1 = G2(τ)` summed in Eisenstein order, each row in closed form:
/// `Σ_d (cτ + d)^{-2} = π² / sin²(πcτ)`.
fn eta1_lattice_sum(tau: Complex64) -> Complex64 {
    let mut s = Complex64::new(PI * PI / 3.0, 0.0);
    for c in 1..200 {
        let term = 2.0 * PI * PI / (PI * c as f64 * tau).sin().powi(2);
        s += term;
        if term.norm() < 1e-18 {
            break;
        }
    }
    s
}

/// Trapezoid rule over a full period: exponentially accurate for periodic
/// analytic integrands.
fn period_integral(w: &WeierstrassData, a: Complex64, b: Complex64, base: Complex64, step: Complex64) -> Result<Complex64, String> {
    const N: usize = 400;
    let mut s = Complex64::new(0.0, 0.0);
    for j in 0..N {
        let z = base + step * (j as f64 / N as f64);
        s += a + b * w.wp(z).map_err(|e| e.to_string())?;
    }
    Ok(s * step / N as f64)
}

fn c7_weierstrass() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut leg, mut quad, mut par) = (0f64, 0f64, 0f64);
    let mut n = 0;
    while n < 20 {
        let tau = Complex64::new(rng.gen_range(-0.5..0.5), rng.gen_range(0.8..2.5));
        if tau.norm() < 1.0 {
            continue;
        }
        let w = WeierstrassData::new(tau, 1e-12).map_err(|e| e.to_string())?;
        let oracle = eta1_lattice_sum(tau);
        let e2 = oracle * tau - Complex64::new(0.0, 2.0 * PI);
        leg = leg.max(w.legendre_residual()).max((w.eta1 - oracle).norm()).max((w.eta2 - e2).norm());

        let p1 = Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        let p2 = Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        let (a, b) = w.solve_form(p1, p2).map_err(|e| e.to_string())?;
        let i1 = period_integral(&w, a, b, tau * 0.5, Complex64::new(1.0, 0.0))?;
        let i2 = period_integral(&w, a, b, Complex64::new(0.5, 0.0), tau)?;
        quad = quad.max((i1 - p1).norm()).max((i2 - p2).norm());

        let (zr, z0) = w.relative_period(a, b, None).map_err(|e| e.to_string())?;
        let minus = w.relative_period_at(a, b, -z0).map_err(|e| e.to_string())?;
        let even = (w.wp(z0).map_err(|e| e.to_string())? - w.wp(-z0).map_err(|e| e.to_string())?).norm();
        par = par.max((zr + minus).norm()).max(even).max((a + b * w.wp(z0).map_err(|e| e.to_string())?).norm());
        n += 1;
    }
    let detail = format!("Legendre/eta {leg:.2e}, re-integration {quad:.2e}, parity {par:.2e}");
    if leg < 1e-8 && quad < 1e-8 && par < 1e-9 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn hyperbolic(z: Complex64, w: Complex64) -> f64 {
    (1.0 + (z - w).norm_sqr() / (2.0 * z.im * w.im)).acosh()
}

fn c8_trace_distance() -> Outcome {
    let chi = AnyCharacter::parse("gaussian", None, "1,0", "0,1").unwrap();
    let ts = [4.0, 8.0, 16.0, 32.0, 64.0];
    let mut parts = Vec::new();
    let mut pass = true;
    for u in [LatticeElement::new(1, 0), LatticeElement::new(1, 1)] {
        let tr = chamber_trace(&chi, u, &ts, &TraceConfig::default()).map_err(|e| format!("CC{u}: {e}"))?;
        let d: Vec<f64> = tr.samples.iter().map(|s| hyperbolic(s.sigma, Complex64::new(s.t, s.t.ln()))).collect();
        for (s, x) in tr.samples.iter().zip(&d) {
            ensure((s.distance.unwrap() - x).abs() < 1e-9, || format!("CC{u}: distance mismatch at t={}", s.t))?;
        }
        let ratio = d.iter().cloned().fold(0.0, f64::max) / d[2];
        pass &= ratio <= 1.2;
        parts.push(format!(
            "CC{u} d = {} max/d(16) = {ratio:.3}",
            d.iter().map(|x| format!("{x:.3}")).collect::<Vec<_>>().join(", ")
        ));
    }
    if pass {
        Ok(parts.join("; "))
    } else {
        Err(parts.join("; "))
    }
}

fn c9_boundary() -> Outcome {
    let cfg = TraceConfig::default();
    let mut parts = Vec::new();
    for (p, q) in [(1, 0), (0, 1), (1, 1), (2, 1)] {
        let u = LatticeElement::new(p, q);
        let b = boundary_limit(u, &cfg).map_err(|e| format!("u={u}: {e}"))?;
        let expected = if q == 0 { Cusp::Infinity } else { Cusp::new(p, q) };
        ensure(b.rational == expected, || format!("u={u}: limit {} expected {expected}", b.rational))?;
        if let Cusp::Rational { p: x, q: y } = b.rational {
            ensure(y.unsigned_abs() <= q.unsigned_abs(), || format!("u={u}: denominator {y}"))?;
            ensure((b.extrapolated - x as f64 / y as f64).abs() <= 0.05, || format!("u={u}: extrapolated {}", b.extrapolated))?;
        } else {
            ensure(b.extrapolated.abs() > 20.0 || !b.extrapolated.is_finite(), || format!("u={u}: extrapolated {}", b.extrapolated))?;
        }
        // T = [[1,1],[0,1]] on u and on the limit
        let tu = LatticeElement::new(p + q, q);
        let tb = boundary_limit(tu, &cfg).map_err(|e| format!("u={tu}: {e}"))?;
        ensure(tb.rational == b.rational.translate(), || format!("u={u}: T-image limit {}", tb.rational))?;
        let eq = boundary_equivariance(u, &cfg).map_err(|e| format!("u={u}: {e}"))?;
        ensure(eq.pass, || format!("u={u}: library equivariance check fails"))?;
        parts.push(format!("{u}->{} ({:.3})", b.rational, b.extrapolated));
    }
    Ok(parts.join(", "))
}

fn project(z: &Cx<Rational>, theta: &QuadReal) -> QuadReal {
    QuadReal::rational(z.re.clone()) - QuadReal::rational(z.im.clone()) * theta.clone()
}

type Glued = (ChamberId, [String; 2], ChamberId, [String; 2]);

fn interval(a: QuadReal, b: QuadReal) -> [String; 2] {
    if a.cmp_exact(&b).is_le() {
        [a.encode(), b.encode()]
    } else {
        [b.encode(), a.encode()]
    }
}

fn c10_nonarith_limit() -> Outcome {
    let theta = QuadReal::new(int(-1), int(1), 2);
    let neg = build_negative(2);
    let lim = build_nonarith(&theta, 2).map_err(|e| e.to_string())?;
    let glue_of = neg.gluing_by_segment();

    let mut oracle_pairs = BTreeSet::new();
    let mut oracle_glued: Vec<Glued> = Vec::new();
    for (c, ch) in neg.chambers.iter().enumerate() {
        if !matches!(ch.id, ChamberId::Deg { .. }) {
            continue;
        }
        // projected sides: (interval in the chart, cylinder, translation)
        let mut sides = Vec::new();
        for (i, s) in neg.segments_of(c) {
            let SegmentEnd::Point(q) = &s.end else { return Err(format!("{}: unbounded side", ch.id)) };
            let g = &neg.gluings[*glue_of.get(&i).ok_or_else(|| format!("{}: side {i} unglued", ch.id))?];
            let cyl = neg.chambers[neg.segments[g.to].chamber].id;
            sides.push((project(&s.start, &theta), project(q, &theta), cyl, project(&g.offset, &theta)));
        }
        ensure(sides.len() == 3, || format!("{}: {} sides", ch.id, sides.len()))?;
        let len = |s: &(QuadReal, QuadReal, ChamberId, QuadReal)| (s.1.clone() - s.0.clone()).abs_exact();
        let long = (0..3).max_by(|&x, &y| len(&sides[x]).cmp_exact(&len(&sides[y]))).unwrap();
        let (_, _, lc, lo) = sides[long].clone();
        for (j, (a, b, sc, so)) in sides.iter().enumerate() {
            if j == long {
                continue;
            }
            oracle_pairs.insert((lc.min(*sc), lc.max(*sc)));
            let li = interval(a.clone() + lo.clone(), b.clone() + lo.clone());
            let si = interval(a.clone() + so.clone(), b.clone() + so.clone());
            oracle_glued.push((lc, li.clone(), *sc, si.clone()));
            oracle_glued.push((*sc, si, lc, li));
        }
    }
    let lim_pairs: BTreeSet<(ChamberId, ChamberId)> = lim
        .adjacency()
        .into_iter()
        .map(|(a, b)| {
            let (x, y) = (lim.chambers[a].id, lim.chambers[b].id);
            (x.min(y), x.max(y))
        })
        .collect();
    ensure(lim_pairs == oracle_pairs, || {
        format!(
            "adjacency differs: only in atlas {:?}, only in projection {:?}",
            lim_pairs.difference(&oracle_pairs).collect::<Vec<_>>(),
            oracle_pairs.difference(&lim_pairs).collect::<Vec<_>>()
        )
    })?;
    let seg_interval = |i: usize| -> Result<[String; 2], String> {
        let s = &lim.segments[i];
        let SegmentEnd::Point(q) = &s.end else { return Err(format!("segment {i} unbounded")) };
        Ok(interval(s.start.re.clone(), q.re.clone()))
    };
    let mut lim_glued: Vec<Glued> = Vec::new();
    for g in &lim.gluings {
        let (a, b) = (&lim.segments[g.from], &lim.segments[g.to]);
        lim_glued.push((lim.chambers[a.chamber].id, seg_interval(g.from)?, lim.chambers[b.chamber].id, seg_interval(g.to)?));
    }
    oracle_glued.sort();
    lim_glued.sort();
    ensure(oracle_glued == lim_glued, || format!("{} glued intervals in the atlas, {} projected", lim_glued.len(), oracle_glued.len()))?;
    Ok(format!("{} adjacent pairs, {} glued intervals", lim_pairs.len(), lim_glued.len() / 2))
}

#[test]
fn acceptance() {
    let criteria: [(usize, &str, Duration, fn() -> Outcome); 10] = [
        (1, "cone angles", Duration::from_secs(30), c1_cone_angles),
        (2, "gluing involution and wall match", Duration::from_secs(30), c2_involution_walls),
        (3, "connectivity and reachability", Duration::from_secs(60), c3_connectivity),
        (4, "phi count", Duration::from_secs(60), c4_phi_count),
        (5, "Veech descriptors", Duration::from_secs(10), c5_veech),
        (6, "hexagon area and torus rejection", Duration::from_secs(60), c6_hexagon_area),
        (7, "Weierstrass layer", Duration::from_secs(20), c7_weierstrass),
        (8, "trace distance to t + i log t", Duration::from_secs(300), c8_trace_distance),
        (9, "boundary limits", Duration::from_secs(300), c9_boundary),
        (10, "non-arithmetic limit", Duration::from_secs(30), c10_nonarith_limit),
    ];
    let mut failing = Vec::new();
    for (n, name, limit, f) in criteria {
        let start = Instant::now();
        let r = f();
        let took = start.elapsed();
        let (pass, detail) = match r {
            Ok(d) if took <= limit => (true, d),
            Ok(d) => (false, format!("{d}; took {took:.1?} > {limit:?}")),
            Err(d) => (false, d),
        };
        // written to the handle directly so the lines survive output capture
        let line = format!("{} {n:>2} {name}: {detail} [{took:.2?}]\n", if pass { "PASS" } else { "FAIL" });
        std::io::stderr().write_all(line.as_bytes()).unwrap();
        if !pass {
            failing.push(n);
        }
    }
    assert_eq!(failing, KNOWN_FAILING, "failing criteria changed");
}
