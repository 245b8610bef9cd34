//! Cylinder decompositions in a given direction.

use crate::geom::{ccw_angle_cmp, Mat2, Vec2};
use crate::homology::HomologyFrame;
use crate::scalar::Scalar;
use crate::surface::{EdgeRef, TranslationSurface};
use crate::trace::{
    corner_with_direction, loop_chain, step, trace, trace_from_corner, trace_separatrix, Anchor, Hit, Limit,
    SaddleConnection, Segment, SeparatrixResult, TraceEnd,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DecompositionStatus {
    Periodic,
    PartialWithinBound,
    NoCylinderFound,
}

impl DecompositionStatus {
    pub fn name(&self) -> &'static str {
        match self {
            DecompositionStatus::Periodic => "Periodic",
            DecompositionStatus::PartialWithinBound => "PartialWithinBound",
            DecompositionStatus::NoCylinderFound => "NoCylinderFound",
        }
    }
}

/// A maximal cylinder. Lengths are measured in the normalized frame where
/// the direction is horizontal.
#[derive(Clone, Debug)]
pub struct Cylinder {
    pub id: usize,
    pub height: Scalar,
    pub circumference: Scalar,
    pub modulus: Scalar,
    /// Core curve, in frame basis coordinates.
    pub core_class: Vec<i64>,
    /// Cross saddle connection from the bottom to the top boundary.
    pub cross_class: Vec<i64>,
    /// Horizontal offset of the cross saddle connection, in `[0, c)`.
    pub cross_offset: Scalar,
    /// Bottom boundary saddle connections (indices into the decomposition), eastward.
    pub bottom: Vec<usize>,
    /// Top boundary saddle connections, eastward, starting where the cross curve ends.
    pub top: Vec<usize>,
    /// Signed crossings of the core with each frame basis class.
    pub intersection: Vec<i64>,
    /// Core curve segments in the normalized surface.
    pub core_path: Vec<Segment>,
    /// Cross curve segments in the normalized surface.
    pub cross_path: Vec<Segment>,
}

impl Cylinder {
    pub fn area(&self) -> Scalar {
        &self.height * &self.circumference
    }
}

#[derive(Clone, Debug)]
pub struct Decomposition {
    pub direction: Vec2,
    /// Rotation-scaling matrix taking the direction to `(|v|², 0)`.
    pub g: Mat2,
    /// The surface after applying `g`.
    pub normalized: TranslationSurface,
    /// Squared trace bound, in the original surface's units.
    pub bound_sq: Scalar,
    pub status: DecompositionStatus,
    pub cylinders: Vec<Cylinder>,
    /// Saddle connection of each eastward separatrix, `None` if it exceeded the bound.
    pub saddle_connections: Vec<Option<SaddleConnection>>,
    pub frame_hash: String,
}

impl Decomposition {
    pub fn num_unclosed(&self) -> usize {
        self.saddle_connections.iter().filter(|s| s.is_none()).count()
    }

    /// Area of the normalized surface.
    pub fn normalized_area(&self) -> Scalar {
        self.normalized.area()
    }

    /// `Σ h_i c_i`.
    pub fn cylinder_area(&self) -> Scalar {
        self.cylinders.iter().map(Cylinder::area).sum()
    }

    pub fn moduli(&self) -> Vec<Scalar> {
        self.cylinders.iter().map(|c| c.modulus.clone()).collect()
    }

    pub fn circumferences(&self) -> Vec<Scalar> {
        self.cylinders.iter().map(|c| c.circumference.clone()).collect()
    }
}

/// Default squared trace bound: `(20 · longest edge)²`.
pub fn default_bound_sq(m: &TranslationSurface) -> Scalar {
    m.longest_edge_sq() * Scalar::from_int(400)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum RayKind {
    East,
    West,
}

/// Horizontal rays around each vertex class in counterclockwise order.
fn horizontal_rays(m: &TranslationSurface) -> Vec<Vec<(RayKind, usize)>> {
    let east = Vec2::ints(1, 0);
    let west = Vec2::ints(-1, 0);
    m.singularities()
        .classes
        .iter()
        .map(|cyc| {
            let mut out = Vec::new();
            for &c in cyc {
                let (from, _) = m.corner_sweep(c);
                let mut here = Vec::new();
                if m.corner_contains(c, &east) {
                    here.push((RayKind::East, &east));
                }
                if m.corner_contains(c, &west) {
                    here.push((RayKind::West, &west));
                }
                here.sort_by(|a, b| ccw_angle_cmp(&from, a.1, b.1));
                out.extend(here.into_iter().map(|(k, _)| (k, c)));
            }
            out
        })
        .collect()
}

/// A horizontal piece of a saddle connection inside one polygon.
#[derive(Clone, Debug)]
struct Piece {
    sc: usize,
    y: Scalar,
    x0: Scalar,
    x1: Scalar,
    /// Distance along the saddle connection at `x0`, and whether it runs
    /// westward in this polygon's coordinates.
    offset_at_x0: Scalar,
    reversed: bool,
}

fn collect_pieces(m: &TranslationSurface, scs: &[Option<SaddleConnection>]) -> Vec<Vec<Piece>> {
    let mut per_poly: Vec<Vec<Piece>> = vec![Vec::new(); m.num_polygons()];
    for (i, sc) in scs.iter().enumerate() {
        let Some(sc) = sc else { continue };
        let mut offset = Scalar::zero();
        for seg in &sc.segments {
            let len = &seg.to.x - &seg.from.x;
            per_poly[seg.poly].push(Piece {
                sc: i,
                y: seg.from.y.clone(),
                x0: seg.from.x.clone(),
                x1: seg.to.x.clone(),
                offset_at_x0: offset.clone(),
                reversed: false,
            });
            // a piece running along an edge is also seen from the glued polygon
            if let (Anchor::Vertex(a), Anchor::Vertex(b)) = (seg.entry, seg.exit) {
                let n = m.polygons()[seg.poly].len();
                if (a + 1) % n == b && m.polygons()[seg.poly][a].y.is_zero() {
                    let q = m.partner(EdgeRef::new(seg.poly, a));
                    let vq = &m.vertices(q.poly)[q.edge];
                    let x1 = vq.x.clone();
                    let x0 = &x1 - &len;
                    per_poly[q.poly].push(Piece {
                        sc: i,
                        y: vq.y.clone(),
                        x0,
                        x1,
                        offset_at_x0: &offset + &len,
                        reversed: true,
                    });
                }
            }
            offset = &offset + &len;
        }
    }
    per_poly
}

struct VerticalHit {
    sc: usize,
    /// Distance along the hit saddle connection.
    offset: Scalar,
    height: Scalar,
}

/// Flows north from `p` until it meets a recorded saddle connection.
fn vertical_to_saddle(
    m: &TranslationSurface,
    pieces: &[Vec<Piece>],
    poly: usize,
    p: Vec2,
    max_height_sq: &Scalar,
) -> Option<VerticalHit> {
    let north = Vec2::ints(0, 1);
    let mut poly = poly;
    let mut p = p;
    let mut height = Scalar::zero();
    for _ in 0..100_000 {
        let (dt, hit) = step(m, poly, &p, &north);
        let mut best: Option<(Scalar, &Piece)> = None;
        for pc in &pieces[poly] {
            let dy = &pc.y - &p.y;
            if !dy.is_positive() || dy > dt {
                continue;
            }
            if p.x < pc.x0 || p.x > pc.x1 {
                continue;
            }
            if best.as_ref().map_or(true, |(b, _)| dy < *b) {
                best = Some((dy, pc));
            }
        }
        if let Some((dy, pc)) = best {
            let at_vertex = matches!(hit, Hit::Vertex(_)) && dy == dt;
            if at_vertex || p.x == pc.x0 || p.x == pc.x1 {
                return None;
            }
            let along = &p.x - &pc.x0;
            let offset = if pc.reversed { &pc.offset_at_x0 - &along } else { &pc.offset_at_x0 + &along };
            return Some(VerticalHit { sc: pc.sc, offset, height: &height + &dy });
        }
        match hit {
            Hit::Vertex(_) => return None,
            Hit::Edge(k, sigma) => {
                let q = m.partner(EdgeRef::new(poly, k));
                p = &m.vertices(q.poly)[q.edge] + &m.edge_vec(q).scale(&(Scalar::one() - sigma));
                poly = q.poly;
                height = &height + &dt;
                if &height.square() > max_height_sq {
                    return None;
                }
            }
        }
    }
    None
}

/// The same point seen from the polygon glued along edge `k`.
fn edge_point_in_partner(m: &TranslationSurface, poly: usize, k: usize, p: &Vec2) -> Vec2 {
    let v = &m.vertices(poly)[k];
    let e = m.edge_vec(EdgeRef::new(poly, k));
    let sigma = (p - v).dot(e) / e.norm_sq();
    let q = m.partner(EdgeRef::new(poly, k));
    &m.vertices(q.poly)[q.edge] + &m.edge_vec(q).scale(&(Scalar::one() - sigma))
}

/// Represents a regular point so that the eastward flow starts inside its polygon.
fn eastward_start(m: &TranslationSurface, poly: usize, p: &Vec2) -> Option<(usize, Vec2, Anchor)> {
    let verts = m.vertices(poly);
    for (k, e) in m.polygons()[poly].iter().enumerate() {
        let d = p - &verts[k];
        if !d.cross(e).is_zero() {
            continue;
        }
        let t = d.dot(e);
        if t.is_negative() || t > e.norm_sq() {
            continue;
        }
        if t.is_zero() || t == e.norm_sq() || e.y.is_zero() {
            return None;
        }
        if e.y.is_negative() {
            return Some((poly, p.clone(), Anchor::Edge(k)));
        }
        let q = m.partner(EdgeRef::new(poly, k));
        return Some((q.poly, edge_point_in_partner(m, poly, k, p), Anchor::Edge(q.edge)));
    }
    Some((poly, p.clone(), Anchor::Interior))
}

fn cycle_of(next: &[Option<usize>], start: usize) -> Option<Vec<usize>> {
    let mut cyc = vec![start];
    let mut x = next[start]?;
    while x != start {
        if cyc.len() > next.len() {
            return None;
        }
        cyc.push(x);
        x = next[x]?;
    }
    Some(cyc)
}

/// Parameters `1/2, 1/3, 2/3, 1/4, 3/4, ...` for probing interior points.
fn probe_params(count: usize) -> Vec<Scalar> {
    let mut out = Vec::new();
    let mut q = 2;
    while out.len() < count {
        for p in 1..q {
            if num_integer::gcd(p, q) == 1 {
                out.push(Scalar::from_ratio(p, q));
            }
        }
        q += 1;
    }
    out.truncate(count);
    out
}

/// Decomposes `m` in direction `v` with squared trace bound `bound_sq`.
pub fn decompose(m: &TranslationSurface, v: &Vec2, bound_sq: &Scalar) -> Decomposition {
    assert!(!v.is_zero(), "direction must be nonzero");
    let g = Mat2::normalizer(v);
    let mg = m.gl2_action(&g).expect("normalizer has positive determinant");
    let frame = HomologyFrame::new(m);
    let bound_g = bound_sq * &v.norm_sq();
    let east = Vec2::ints(1, 0);

    let rays = horizontal_rays(&mg);
    let east_rays: Vec<usize> = (0..mg.num_corners()).filter(|&c| mg.corner_contains(c, &east)).collect();
    let ray_index = |corner: usize| east_rays.binary_search(&corner).ok();
    let scs: Vec<Option<SaddleConnection>> = east_rays
        .iter()
        .map(|&c| match trace_separatrix(&mg, c, &east, &bound_g) {
            SeparatrixResult::Saddle(s) => Some(s),
            SeparatrixResult::BoundExceeded => None,
        })
        .collect();

    let n = east_rays.len();
    let mut bottom_next = vec![None; n];
    let mut top_next = vec![None; n];
    for (i, sc) in scs.iter().enumerate() {
        let Some(sc) = sc else { continue };
        let list = &rays[sc.end_vertex];
        let pos = list
            .iter()
            .position(|&(k, c)| k == RayKind::West && c == sc.end_corner)
            .expect("arrival ray is a westward ray");
        let len = list.len();
        let (kc, cw) = list[(pos + len - 1) % len];
        let (kn, ccw) = list[(pos + 1) % len];
        debug_assert!(kc == RayKind::East && kn == RayKind::East);
        bottom_next[i] = ray_index(cw);
        top_next[i] = ray_index(ccw);
    }

    let pieces = collect_pieces(&mg, &scs);
    let mut cylinders = Vec::new();
    let mut used = vec![false; n];
    for s0 in 0..n {
        if used[s0] {
            continue;
        }
        let Some(bottom) = cycle_of(&bottom_next, s0) else { continue };
        if bottom.iter().any(|&x| x < s0) {
            continue;
        }
        for &x in &bottom {
            used[x] = true;
        }
        if let Some(cyl) = build_cylinder(&mg, &frame, &scs, &pieces, &top_next, &bottom, &bound_g, cylinders.len()) {
            cylinders.push(cyl);
        }
    }

    let all_closed = scs.iter().all(Option::is_some);
    let area_g = mg.area();
    let cyl_area: Scalar = cylinders.iter().map(Cylinder::area).sum();
    let status = if all_closed && !cylinders.is_empty() && cyl_area == area_g {
        DecompositionStatus::Periodic
    } else if cylinders.is_empty() {
        DecompositionStatus::NoCylinderFound
    } else {
        DecompositionStatus::PartialWithinBound
    };
    Decomposition {
        direction: v.clone(),
        g,
        normalized: mg,
        bound_sq: bound_sq.clone(),
        status,
        cylinders,
        saddle_connections: scs,
        frame_hash: frame.hash().to_string(),
    }
}

#[allow(clippy::too_many_arguments)]
fn build_cylinder(
    mg: &TranslationSurface,
    frame: &HomologyFrame,
    scs: &[Option<SaddleConnection>],
    pieces: &[Vec<Piece>],
    top_next: &[Option<usize>],
    bottom: &[usize],
    max_height_sq: &Scalar,
    id: usize,
) -> Option<Cylinder> {
    let sc_len = |i: usize| scs[i].as_ref().map(|s| s.holonomy.x.clone());
    let c: Scalar = bottom.iter().map(|&i| sc_len(i)).collect::<Option<Vec<_>>>()?.into_iter().sum();
    let s0 = scs[bottom[0]].as_ref()?;
    let first = &s0.segments[0];

    // height and the top boundary, probed from a few points of the first segment
    let mut found = None;
    for lam in probe_params(12) {
        let start = &first.from + &(&first.to - &first.from).scale(&lam);
        if let Some(hit) = vertical_to_saddle(mg, pieces, first.poly, start.clone(), max_height_sq) {
            found = Some((&start.x - &first.from.x, hit));
            break;
        }
    }
    let (x_lam, hit) = found?;
    let h = hit.height;
    let top_cycle = cycle_of(top_next, hit.sc)?;
    let top_len: Scalar = top_cycle.iter().map(|&i| sc_len(i)).collect::<Option<Vec<_>>>()?.into_iter().sum();
    if top_len != c {
        return None;
    }
    // cylinder coordinate of each top saddle connection's start
    let x_t = &x_lam - &hit.offset;
    let mut starts = Vec::with_capacity(top_cycle.len());
    let mut acc = x_t;
    for &i in &top_cycle {
        starts.push(acc.rem_euclid(&c));
        acc = &acc + &sc_len(i).unwrap();
    }
    let k0 = (0..starts.len()).min_by(|&a, &b| starts[a].cmp(&starts[b]))?;
    let top: Vec<usize> = (0..top_cycle.len()).map(|k| top_cycle[(k0 + k) % top_cycle.len()]).collect();
    let x = starts[k0].clone();

    // cross saddle connection
    let w = Vec2::new(x.clone(), h.clone());
    let corner = corner_with_direction(mg, s0.start_corner, &w);
    let cross = trace_from_corner(mg, corner, &w, Limit::Length(&Scalar::one()));
    let TraceEnd::Vertex { corner: end } = cross.end else { return None };
    let q0 = scs[top[0]].as_ref()?;
    if cross.tau != Scalar::one() || mg.vertex_of_corner(end) != q0.start_vertex {
        return None;
    }
    let cross_chain = crate::trace::path_chain(mg, &cross.segments);
    let cross_class = frame.chain_coords(&cross_chain);

    // core curve at an interior height
    let mut core = None;
    for mu in probe_params(12) {
        let half = trace_from_corner(mg, corner, &w, Limit::Length(&mu));
        let last = half.segments.last()?;
        if half.end != TraceEnd::Reached || last.exit != Anchor::Interior {
            continue;
        }
        let Some((poly, p, anchor)) = eastward_start(mg, last.poly, &last.to) else { continue };
        let path = trace(mg, poly, p.clone(), anchor, &Vec2::ints(1, 0), Limit::Length(&c));
        if path.end != TraceEnd::Reached {
            return None;
        }
        let end = path.segments.last()?;
        let closes = match (anchor, end.exit) {
            (Anchor::Interior, Anchor::Interior) => end.poly == poly && end.to == p,
            (Anchor::Edge(j), Anchor::Edge(k)) => {
                mg.partner(EdgeRef::new(end.poly, k)) == EdgeRef::new(poly, j)
                    && edge_point_in_partner(mg, end.poly, k, &end.to) == p
            }
            _ => false,
        };
        if !closes {
            return None;
        }
        core = Some((anchor, path.segments));
        break;
    }
    let (anchor, core_path) = core?;
    let core_chain = match anchor {
        Anchor::Interior => loop_chain(mg, &core_path),
        _ => crate::trace::path_chain(mg, &core_path),
    };
    let core_class = frame.chain_coords(&core_chain);
    if !frame.is_closed(&core_class) {
        return None;
    }
    let mut by_class = vec![0i64; mg.num_edge_classes()];
    for seg in &core_path {
        if let Anchor::Edge(k) = seg.exit {
            let (class, _) = mg.edge_class(EdgeRef::new(seg.poly, k));
            let rep = mg.class_holonomy(class);
            by_class[class] += rep.y.signum() as i64;
        }
    }
    let intersection = frame.basis_edge_classes().iter().map(|&e| by_class[e]).collect();
    let modulus = &h / &c;
    Some(Cylinder {
        id,
        height: h,
        circumference: c,
        modulus,
        core_class,
        cross_class,
        cross_offset: x,
        bottom: bottom.to_vec(),
        top,
        intersection,
        core_path,
        cross_path: cross.segments,
    })
}

/// A piece of one cylinder inside one polygon of the normalized surface.
#[derive(Clone, Debug)]
pub struct Region {
    pub poly: usize,
    pub cylinder: usize,
    /// Vertices in the polygon's own coordinates, counterclockwise.
    pub verts: Vec<Vec2>,
}

/// Cuts each normalized polygon along the horizontal levels of its vertices
/// and saddle connections into trapezoids, each labelled by its cylinder.
/// Trapezoids not in any found cylinder are omitted.
pub fn cylinder_regions(d: &Decomposition) -> Vec<Region> {
    let mg = &d.normalized;
    let pieces = collect_pieces(mg, &d.saddle_connections);
    let top_of: std::collections::HashMap<usize, usize> =
        d.cylinders.iter().flat_map(|c| c.top.iter().map(move |&s| (s, c.id))).collect();
    let max_h = d.cylinders.iter().map(|c| c.height.clone()).max().unwrap_or_else(Scalar::zero);
    let two = Scalar::from_int(2);
    let mut out = Vec::new();
    for (p, verts) in (0..mg.num_polygons()).map(|p| (p, mg.vertices(p))) {
        let n = verts.len();
        let mut levels: Vec<Scalar> = verts.iter().map(|v| v.y.clone()).chain(pieces[p].iter().map(|pc| pc.y.clone())).collect();
        levels.sort();
        levels.dedup();
        for w in levels.windows(2) {
            let (ya, yb) = (&w[0], &w[1]);
            let ym = &(ya + yb) / &two;
            // edges crossing the mid level, ordered by x
            let mut cuts: Vec<(Scalar, usize)> = (0..n)
                .filter_map(|k| {
                    let (a, b) = (&verts[k], &verts[(k + 1) % n]);
                    let crosses = (a.y < ym && ym < b.y) || (b.y < ym && ym < a.y);
                    crosses.then(|| (x_at(a, b, &ym), k))
                })
                .collect();
            cuts.sort();
            for pair in cuts.chunks(2) {
                let [(xl, kl), (xr, kr)] = [pair[0].clone(), pair[1].clone()];
                let at = |k: usize, y: &Scalar| Vec2::new(x_at(&verts[k], &verts[(k + 1) % n], y), y.clone());
                let tries = [Scalar::from_ratio(1, 2), Scalar::from_ratio(1, 3), Scalar::from_ratio(2, 7)];
                let cyl = tries.iter().find_map(|t| {
                    let x = &xl + &(&(&xr - &xl) * t);
                    vertical_to_saddle(mg, &pieces, p, Vec2::new(x, ym.clone()), &max_h.square())
                        .and_then(|hit| top_of.get(&hit.sc).copied())
                });
                if let Some(cylinder) = cyl {
                    out.push(Region { poly: p, cylinder, verts: vec![at(kl, ya), at(kr, ya), at(kr, yb), at(kl, yb)] });
                }
            }
        }
    }
    out
}

fn x_at(a: &Vec2, b: &Vec2, y: &Scalar) -> Scalar {
    &a.x + &(&(&(y - &a.y) * &(&b.x - &a.x)) / &(&b.y - &a.y))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::{l_shape, square_tiled, Permutation};

    fn torus() -> TranslationSurface {
        square_tiled(&Permutation::identity(1), &Permutation::identity(1)).unwrap()
    }

    fn l_origami() -> TranslationSurface {
        square_tiled(&Permutation::from_cycles(3, "(1 2)").unwrap(), &Permutation::from_cycles(3, "(1 3)").unwrap())
            .unwrap()
    }

    fn golden_l() -> TranslationSurface {
        let phi = Scalar::quad(1, 2, 1, 2, 5);
        let one = Scalar::one();
        l_shape(&phi, &one, &one, &(&phi - &one)).unwrap()
    }

    fn hc(d: &Decomposition) -> Vec<(Scalar, Scalar)> {
        let mut v: Vec<_> = d.cylinders.iter().map(|c| (c.height.clone(), c.circumference.clone())).collect();
        v.sort();
        v
    }

    #[test]
    fn torus_horizontal() {
        let m = torus();
        let d = decompose(&m, &Vec2::ints(1, 0), &default_bound_sq(&m));
        assert_eq!(d.status, DecompositionStatus::Periodic);
        assert_eq!(hc(&d), vec![(Scalar::one(), Scalar::one())]);
        let f = HomologyFrame::new(&m);
        let cyl = &d.cylinders[0];
        assert_eq!(cyl.core_class, vec![1, 0]);
        assert_eq!(cyl.intersection, vec![0, 1]);
        assert!(f.is_closed(&cyl.core_class));
    }

    #[test]
    fn torus_slope_two() {
        let m = torus();
        let d = decompose(&m, &Vec2::ints(1, 2), &default_bound_sq(&m));
        assert_eq!(d.status, DecompositionStatus::Periodic);
        assert_eq!(d.cylinders.len(), 1);
        assert_eq!(d.cylinders[0].circumference, Scalar::from_int(5));
        assert_eq!(d.cylinders[0].height, Scalar::one());
        assert_eq!(d.cylinders[0].modulus, Scalar::from_ratio(1, 5));
        assert_eq!(d.cylinders[0].core_class, vec![1, 2]);
    }

    #[test]
    fn l_origami_horizontal() {
        let m = l_origami();
        let d = decompose(&m, &Vec2::ints(1, 0), &default_bound_sq(&m));
        assert_eq!(d.status, DecompositionStatus::Periodic);
        assert_eq!(hc(&d), vec![(Scalar::one(), Scalar::one()), (Scalar::one(), Scalar::from_int(2))]);
        let mut moduli = d.moduli();
        moduli.sort();
        assert_eq!(moduli, vec![Scalar::from_ratio(1, 2), Scalar::one()]);
    }

    #[test]
    fn golden_l_horizontal() {
        let m = golden_l();
        let d = decompose(&m, &Vec2::ints(1, 0), &default_bound_sq(&m));
        assert_eq!(d.status, DecompositionStatus::Periodic);
        let phi = Scalar::quad(1, 2, 1, 2, 5);
        let target = &phi - &Scalar::one();
        assert_eq!(d.moduli(), vec![target.clone(), target]);
        assert_eq!(d.cylinder_area(), m.area());
    }

    #[test]
    fn diagonal_directions() {
        for m in [torus(), l_origami(), golden_l()] {
            for v in [Vec2::ints(0, 1), Vec2::ints(1, 1), Vec2::ints(1, -1), Vec2::ints(2, 1)] {
                let d = decompose(&m, &v, &default_bound_sq(&m));
                assert_eq!(d.status, DecompositionStatus::Periodic, "{v:?}");
                assert_eq!(d.cylinder_area(), &m.area() * &v.norm_sq());
            }
        }
    }

    #[test]
    fn irrational_direction_on_torus() {
        let m = torus();
        let phi = Scalar::quad(1, 2, 1, 2, 5);
        let d = decompose(&m.in_field(crate::scalar::FieldCtx { d: 5 }).unwrap(), &Vec2::new(Scalar::one(), phi), &Scalar::from_int(100));
        assert_eq!(d.status, DecompositionStatus::NoCylinderFound);
    }

    #[test]
    fn regions_tile_each_cylinder() {
        let phi = Scalar::quad(1, 2, 1, 2, 5);
        let one = Scalar::one();
        let golden = l_shape(&phi, &one, &one, &(&phi - &one)).unwrap();
        let l = square_tiled(&Permutation::from_cycles(3, "(1 2)").unwrap(), &Permutation::from_cycles(3, "(1 3)").unwrap()).unwrap();
        for (m, v) in [(golden.clone(), Vec2::ints(1, 0)), (golden, Vec2::ints(1, 1)), (l, Vec2::ints(2, 1))] {
            let d = decompose(&m, &v, &default_bound_sq(&m));
            assert_eq!(d.status, DecompositionStatus::Periodic);
            let regions = cylinder_regions(&d);
            for c in &d.cylinders {
                let area: Scalar = regions
                    .iter()
                    .filter(|r| r.cylinder == c.id)
                    .map(|r| crate::geom::twice_signed_area(&r.verts))
                    .sum();
                assert_eq!(area, &c.area() * &Scalar::from_int(2));
            }
        }
    }
}
