//! Straight-line flow through the polygons with exact crossing arithmetic.

use crate::geom::Vec2;
use crate::scalar::Scalar;
use crate::surface::{EdgeRef, TranslationSurface};

/// Where a segment starts or ends inside its polygon.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Anchor {
    Vertex(usize),
    Edge(usize),
    Interior,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Segment {
    pub poly: usize,
    pub from: Vec2,
    pub to: Vec2,
    pub entry: Anchor,
    pub exit: Anchor,
}

#[derive(Clone, Debug, PartialEq)]
pub enum TraceEnd {
    /// Hit a point of `Σ`; the corner containing the reversed direction.
    Vertex { corner: usize },
    /// Reached the requested parameter exactly.
    Reached,
    /// The length bound ran out first.
    Bound,
}

#[derive(Clone, Copy, Debug)]
pub enum Limit<'a> {
    /// Stop at exactly this multiple of the direction vector.
    Length(&'a Scalar),
    /// Give up once the squared length exceeds this value.
    BoundSq(&'a Scalar),
}

#[derive(Clone, Debug)]
pub struct TracePath {
    pub segments: Vec<Segment>,
    pub end: TraceEnd,
    /// Total parameter travelled, in multiples of the direction vector.
    pub tau: Scalar,
}

const MAX_STEPS: usize = 200_000;

#[derive(Clone, Debug)]
pub(crate) enum Hit {
    Vertex(usize),
    Edge(usize, Scalar),
}

/// First boundary point of polygon `poly` hit by `p + τw`, `τ > 0`.
pub(crate) fn step(m: &TranslationSurface, poly: usize, p: &Vec2, w: &Vec2) -> (Scalar, Hit) {
    let verts = m.vertices(poly);
    let edges = &m.polygons()[poly];
    let w2 = w.norm_sq();
    let mut best: Option<(Scalar, Hit)> = None;
    let offer = |tau: Scalar, hit: Hit, best: &mut Option<(Scalar, Hit)>| {
        if best.as_ref().map_or(true, |(t, _)| tau < *t) {
            *best = Some((tau, hit));
        }
    };
    for (k, v) in verts.iter().enumerate() {
        let d = v - p;
        if d.is_zero() {
            continue;
        }
        if d.cross(w).is_zero() && d.dot(w).is_positive() {
            offer(d.dot(w) / &w2, Hit::Vertex(k), &mut best);
        }
    }
    for (k, e) in edges.iter().enumerate() {
        let denom = w.cross(e);
        if denom.is_zero() {
            continue;
        }
        let d = &verts[k] - p;
        let tau = d.cross(e) / &denom;
        if !tau.is_positive() {
            continue;
        }
        let sigma = d.cross(w) / &denom;
        if sigma.is_positive() && sigma < Scalar::one() {
            offer(tau, Hit::Edge(k, sigma), &mut best);
        }
    }
    best.expect("a ray inside a polygon leaves it")
}

/// Corner at vertex `k` of `poly` whose sweep contains `dir`, given that
/// `dir` points into the closure of `poly`.
pub fn local_corner(m: &TranslationSurface, poly: usize, k: usize, dir: &Vec2) -> usize {
    let c = m.corner_id(poly, k);
    if m.corner_contains(c, dir) {
        return c;
    }
    let n = m.next_corner(c);
    debug_assert!(m.corner_contains(n, dir));
    n
}

/// Flows from a point of polygon `poly` in direction `w`.
pub fn trace(m: &TranslationSurface, poly: usize, start: Vec2, entry: Anchor, w: &Vec2, limit: Limit) -> TracePath {
    let w2 = w.norm_sq();
    let mut segments = Vec::new();
    let mut poly = poly;
    let mut p = start;
    let mut entry = entry;
    let mut tau = Scalar::zero();
    for _ in 0..MAX_STEPS {
        let (dt, hit) = step(m, poly, &p, w);
        let next_tau = &tau + &dt;
        match limit {
            Limit::Length(target) => {
                if &next_tau > target || (&next_tau == target && matches!(hit, Hit::Edge(..))) {
                    let to = &p + &w.scale(&(target - &tau));
                    let exit = if &next_tau == target {
                        match hit {
                            Hit::Edge(b, _) => Anchor::Edge(b),
                            Hit::Vertex(_) => unreachable!(),
                        }
                    } else {
                        Anchor::Interior
                    };
                    segments.push(Segment { poly, from: p, to, entry, exit });
                    return TracePath { segments, end: TraceEnd::Reached, tau: target.clone() };
                }
            }
            Limit::BoundSq(b) => {
                if &(&next_tau.square() * &w2) > b {
                    let to = &p + &w.scale(&dt);
                    let exit = match hit {
                        Hit::Vertex(k) => Anchor::Vertex(k),
                        Hit::Edge(k, _) => Anchor::Edge(k),
                    };
                    segments.push(Segment { poly, from: p, to, entry, exit });
                    return TracePath { segments, end: TraceEnd::Bound, tau: next_tau };
                }
            }
        }
        let to = &p + &w.scale(&dt);
        match hit {
            Hit::Vertex(k) => {
                segments.push(Segment { poly, from: p, to, entry, exit: Anchor::Vertex(k) });
                let corner = local_corner(m, poly, k, &-w);
                return TracePath { segments, end: TraceEnd::Vertex { corner }, tau: next_tau };
            }
            Hit::Edge(k, sigma) => {
                segments.push(Segment { poly, from: p, to, entry, exit: Anchor::Edge(k) });
                let q = m.partner(EdgeRef::new(poly, k));
                let e = m.edge_vec(q);
                p = &m.vertices(q.poly)[q.edge] + &e.scale(&(Scalar::one() - sigma));
                poly = q.poly;
                entry = Anchor::Edge(q.edge);
                tau = next_tau;
            }
        }
    }
    TracePath { segments, end: TraceEnd::Bound, tau }
}

/// Flows out of a corner (a point of `Σ`) in direction `w`.
pub fn trace_from_corner(m: &TranslationSurface, corner: usize, w: &Vec2, limit: Limit) -> TracePath {
    debug_assert!(m.corner_contains(corner, w));
    let r = m.corner_ref(corner);
    let start = m.vertices(r.poly)[r.edge].clone();
    trace(m, r.poly, start, Anchor::Vertex(r.edge), w, limit)
}

fn push_boundary_run(m: &TranslationSurface, poly: usize, from: usize, to: usize, chain: &mut [i64]) {
    let n = m.polygons()[poly].len();
    let mut k = from % n;
    while k != to % n {
        let (class, sign) = m.edge_class(EdgeRef::new(poly, k));
        chain[class] += sign as i64;
        k = (k + 1) % n;
    }
}

fn entry_vertex(m: &TranslationSurface, poly: usize, a: Anchor) -> usize {
    let n = m.polygons()[poly].len();
    match a {
        Anchor::Vertex(i) => i,
        Anchor::Edge(e) => (e + 1) % n,
        Anchor::Interior => panic!("open path must not start in the interior"),
    }
}

fn exit_vertex(a: Anchor) -> usize {
    match a {
        Anchor::Vertex(j) | Anchor::Edge(j) => j,
        Anchor::Interior => panic!("open path must not end in the interior"),
    }
}

/// Relative homology class, on edge classes, of a path between points of `Σ`.
///
/// Each crossing point is slid along its edge to the edge's start vertex, and
/// each piece inside a polygon is replaced by the counterclockwise boundary run.
pub fn path_chain(m: &TranslationSurface, segs: &[Segment]) -> Vec<i64> {
    let mut chain = vec![0; m.num_edge_classes()];
    for s in segs {
        let x = entry_vertex(m, s.poly, s.entry);
        let y = exit_vertex(s.exit);
        push_boundary_run(m, s.poly, x, y, &mut chain);
    }
    chain
}

/// Homology class of a closed path that starts and ends at the same interior point.
pub fn loop_chain(m: &TranslationSurface, segs: &[Segment]) -> Vec<i64> {
    assert!(segs.len() >= 2, "a closed geodesic leaves its polygon");
    let mut chain = vec![0; m.num_edge_classes()];
    let last = segs.last().unwrap();
    let first = &segs[0];
    assert_eq!(first.poly, last.poly);
    push_boundary_run(m, first.poly, entry_vertex(m, last.poly, last.entry), exit_vertex(first.exit), &mut chain);
    for s in &segs[1..segs.len() - 1] {
        push_boundary_run(m, s.poly, entry_vertex(m, s.poly, s.entry), exit_vertex(s.exit), &mut chain);
    }
    chain
}

/// A straight path between points of `Σ`.
#[derive(Clone, Debug)]
pub struct SaddleConnection {
    pub holonomy: Vec2,
    pub start_corner: usize,
    /// Corner at the far end containing the reversed direction.
    pub end_corner: usize,
    pub start_vertex: usize,
    pub end_vertex: usize,
    pub segments: Vec<Segment>,
    /// Coefficients on edge classes.
    pub chain: Vec<i64>,
}

#[derive(Clone, Debug)]
pub enum SeparatrixResult {
    Saddle(SaddleConnection),
    BoundExceeded,
}

/// Traces the separatrix leaving `corner` in direction `w` for squared length at most `bound_sq`.
pub fn trace_separatrix(m: &TranslationSurface, corner: usize, w: &Vec2, bound_sq: &Scalar) -> SeparatrixResult {
    let path = trace_from_corner(m, corner, w, Limit::BoundSq(bound_sq));
    match path.end {
        TraceEnd::Vertex { corner: end } => SeparatrixResult::Saddle(SaddleConnection {
            holonomy: w.scale(&path.tau),
            start_corner: corner,
            end_corner: end,
            start_vertex: m.vertex_of_corner(corner),
            end_vertex: m.vertex_of_corner(end),
            chain: path_chain(m, &path.segments),
            segments: path.segments,
        }),
        _ => SeparatrixResult::BoundExceeded,
    }
}

/// Corner at a vertex class whose sweep contains `w`, starting the search at `corner`.
pub fn corner_with_direction(m: &TranslationSurface, corner: usize, w: &Vec2) -> usize {
    let mut c = corner;
    loop {
        if m.corner_contains(c, w) {
            return c;
        }
        c = m.next_corner(c);
        assert_ne!(c, corner, "every direction occurs at every vertex");
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homology::HomologyFrame;
    use crate::surface::{l_shape, square_tiled, Permutation};

    fn torus() -> TranslationSurface {
        square_tiled(&Permutation::identity(1), &Permutation::identity(1)).unwrap()
    }

    fn big() -> Scalar {
        Scalar::from_int(10_000)
    }

    #[test]
    fn torus_separatrices() {
        let m = torus();
        let e = Vec2::ints(1, 0);
        let c = corner_with_direction(&m, 0, &e);
        let SeparatrixResult::Saddle(s) = trace_separatrix(&m, c, &e, &big()) else { panic!() };
        assert_eq!(s.holonomy, Vec2::ints(1, 0));
        let w = Vec2::ints(1, 2);
        let c = corner_with_direction(&m, 0, &w);
        let SeparatrixResult::Saddle(s) = trace_separatrix(&m, c, &w, &big()) else { panic!() };
        assert_eq!(s.holonomy, Vec2::ints(1, 2));
        let f = HomologyFrame::new(&m);
        let coords = f.chain_coords(&s.chain);
        assert_eq!(coords, vec![1, 2]);
        assert!(matches!(trace_separatrix(&m, c, &w, &Scalar::from_int(4)), SeparatrixResult::BoundExceeded));
    }

    #[test]
    fn golden_l_middle_separatrix() {
        let phi = Scalar::quad(1, 2, 1, 2, 5);
        let one = Scalar::one();
        let m = l_shape(&phi, &one, &one, &(&phi - &one)).unwrap();
        let e = Vec2::ints(1, 0);
        // vertex (0,1) of the L
        let c = m.corner_id(0, 7);
        assert!(m.corner_contains(c, &e));
        let SeparatrixResult::Saddle(s) = trace_separatrix(&m, c, &e, &big()) else { panic!() };
        assert_eq!(s.holonomy, Vec2::ints(1, 0));
    }

    #[test]
    fn irrational_direction_exceeds_bound() {
        let m = torus();
        let phi = Scalar::quad(1, 2, 1, 2, 5);
        let w = Vec2::new(Scalar::one(), phi);
        let c = corner_with_direction(&m, 0, &w);
        assert!(matches!(trace_separatrix(&m, c, &w, &Scalar::from_int(400)), SeparatrixResult::BoundExceeded));
    }

    #[test]
    fn closed_loop_chain() {
        let m = torus();
        let start = Vec2::new(Scalar::from_ratio(1, 3), Scalar::from_ratio(1, 2));
        let path = trace(&m, 0, start.clone(), Anchor::Interior, &Vec2::ints(1, 0), Limit::Length(&Scalar::one()));
        assert_eq!(path.end, TraceEnd::Reached);
        assert_eq!(path.segments.last().unwrap().to, start);
        let f = HomologyFrame::new(&m);
        assert_eq!(f.chain_coords(&loop_chain(&m, &path.segments)), vec![1, 0]);
    }
}
