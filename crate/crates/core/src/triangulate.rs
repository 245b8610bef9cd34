//! Triangulated surfaces: ear clipping, edge flips and the Delaunay condition.

use crate::geom::{incircle, orient, Vec2};
use crate::surface::{EdgeRef, TranslationSurface};

/// A side of a triangle: `(triangle, side)`, side `k` runs from corner `k` to corner `k+1`.
pub type Side = (usize, usize);

#[derive(Clone, Debug)]
pub struct TriSurface {
    /// Edge vectors of each counterclockwise triangle.
    pub tris: Vec<[Vec2; 3]>,
    pub adj: Vec<[Side; 3]>,
}

/// Splits a simple counterclockwise polygon into triangles by ear clipping.
/// Collinear vertices are allowed; every triangle returned has positive area.
pub fn ear_clip(verts: &[Vec2]) -> Vec<[usize; 3]> {
    let mut idx: Vec<usize> = (0..verts.len()).collect();
    let mut out = Vec::with_capacity(verts.len().saturating_sub(2));
    while idx.len() > 3 {
        let n = idx.len();
        let ear = (0..n)
            .find(|&i| {
                let (a, b, c) = (idx[(i + n - 1) % n], idx[i], idx[(i + 1) % n]);
                if orient(&verts[a], &verts[b], &verts[c]) <= 0 {
                    return false;
                }
                idx.iter().all(|&j| {
                    j == a || j == b || j == c || verts[j] == verts[a] || !in_closed_triangle(&verts[a], &verts[b], &verts[c], &verts[j])
                })
            })
            .expect("simple polygons always have an ear");
        out.push([idx[(ear + n - 1) % n], idx[ear], idx[(ear + 1) % n]]);
        idx.remove(ear);
    }
    if orient(&verts[idx[0]], &verts[idx[1]], &verts[idx[2]]) > 0 {
        out.push([idx[0], idx[1], idx[2]]);
    }
    out
}

fn in_closed_triangle(a: &Vec2, b: &Vec2, c: &Vec2, p: &Vec2) -> bool {
    orient(a, b, p) >= 0 && orient(b, c, p) >= 0 && orient(c, a, p) >= 0
}

impl TriSurface {
    pub fn from_surface(m: &TranslationSurface) -> Self {
        let mut tris = Vec::new();
        let mut adj: Vec<[Side; 3]> = Vec::new();
        // (poly, edge) -> triangle side carrying that polygon edge
        let mut edge_side = std::collections::HashMap::new();
        for (p, poly) in m.polygons().iter().enumerate() {
            let verts = m.vertices(p);
            let n = poly.len();
            let base = tris.len();
            let local = ear_clip(verts);
            let mut diag = std::collections::HashMap::new();
            for (t, tri) in local.iter().enumerate() {
                let mut vecs = [Vec2::zero(), Vec2::zero(), Vec2::zero()];
                for k in 0..3 {
                    let (i, j) = (tri[k], tri[(k + 1) % 3]);
                    vecs[k] = &verts[j] - &verts[i];
                    if j == (i + 1) % n {
                        edge_side.insert((p, i), (base + t, k));
                    } else {
                        diag.insert((i, j), (base + t, k));
                    }
                }
                tris.push(vecs);
                adj.push([(usize::MAX, 0); 3]);
            }
            for (&(i, j), &s) in &diag {
                adj[s.0][s.1] = diag[&(j, i)];
            }
        }
        for (&(p, e), &s) in &edge_side {
            let q = m.partner(EdgeRef::new(p, e));
            adj[s.0][s.1] = edge_side[&(q.poly, q.edge)];
        }
        TriSurface { tris, adj }
    }

    pub fn vec(&self, s: Side) -> &Vec2 {
        &self.tris[s.0][s.1]
    }

    pub fn twin(&self, s: Side) -> Side {
        self.adj[s.0][s.1]
    }

    /// Sign of the Delaunay test across side `s`: positive means the far
    /// vertex lies strictly inside the circumcircle, so the side should flip.
    pub fn delaunay_sign(&self, s: Side) -> i32 {
        let (t, k) = s;
        let e = &self.tris[t];
        let a = Vec2::zero();
        let b = e[k].clone();
        let c = &b + &e[(k + 1) % 3];
        let (u, j) = self.twin(s);
        // the twin runs b -> a, its next side runs a -> d
        let d = self.tris[u][(j + 1) % 3].clone();
        incircle(&a, &b, &c, &d)
    }

    /// Replaces the diagonal `s` of the quadrilateral formed with its twin by the other diagonal.
    pub fn flip(&mut self, s: Side) {
        let (t1, k) = s;
        let (t2, j) = self.twin(s);
        assert_ne!(t1, t2, "a side cannot be glued to its own triangle");
        let e1 = self.tris[t1][(k + 1) % 3].clone();
        let e2 = self.tris[t1][(k + 2) % 3].clone();
        let f1 = self.tris[t2][(j + 1) % 3].clone();
        let f2 = self.tris[t2][(j + 2) % 3].clone();
        let diag = &f1 + &e2;
        let old = [(t1, (k + 1) % 3), (t1, (k + 2) % 3), (t2, (j + 1) % 3), (t2, (j + 2) % 3)];
        let new = [(t2, 2), (t1, 1), (t1, 2), (t2, 1)];
        let old_adj: Vec<Side> = old.iter().map(|&o| self.twin(o)).collect();
        let remap = |x: Side| old.iter().position(|&o| o == x).map_or(x, |i| new[i]);
        self.tris[t1] = [-&diag, e2, f1];
        self.tris[t2] = [diag, f2, e1];
        self.adj[t1][0] = (t2, 0);
        self.adj[t2][0] = (t1, 0);
        for i in 0..4 {
            let nb = remap(old_adj[i]);
            let (nt, ns) = new[i];
            self.adj[nt][ns] = nb;
            self.adj[nb.0][nb.1] = new[i];
        }
    }

    /// Flips until every side satisfies the empty-circle condition.
    pub fn make_delaunay(&mut self) {
        loop {
            let mut flipped = false;
            for t in 0..self.tris.len() {
                for k in 0..3 {
                    if self.delaunay_sign((t, k)) > 0 {
                        self.flip((t, k));
                        flipped = true;
                    }
                }
            }
            if !flipped {
                break;
            }
        }
    }

    pub fn area_twice(&self) -> crate::scalar::Scalar {
        self.tris.iter().map(|e| e[0].cross(&e[1])).sum()
    }

    pub fn check(&self) {
        for (t, e) in self.tris.iter().enumerate() {
            assert!((&(&e[0] + &e[1]) + &e[2]).is_zero());
            assert!(e[0].cross(&e[1]).is_positive());
            for k in 0..3 {
                let o = self.twin((t, k));
                assert_eq!(self.twin(o), (t, k));
                assert_eq!(self.vec(o), &-&e[k]);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Scalar;
    use crate::surface::{l_shape, square_tiled, Permutation};

    #[test]
    fn ear_clip_handles_collinear_vertices() {
        let phi = Scalar::quad(1, 2, 1, 2, 5);
        let one = Scalar::one();
        let m = l_shape(&phi, &one, &one, &(&phi - &one)).unwrap();
        let t = TriSurface::from_surface(&m);
        t.check();
        assert_eq!(t.tris.len(), 6);
        assert_eq!(t.area_twice(), &m.area() * &Scalar::from_int(2));
    }

    #[test]
    fn delaunay_flips_keep_structure() {
        let m = square_tiled(&Permutation::from_cycles(3, "(1 2)").unwrap(), &Permutation::from_cycles(3, "(1 3)").unwrap())
            .unwrap()
            .gl2_action(&crate::geom::Mat2::ints(1, 3, 0, 1))
            .unwrap();
        let mut t = TriSurface::from_surface(&m);
        t.check();
        t.make_delaunay();
        t.check();
        for i in 0..t.tris.len() {
            for k in 0..3 {
                assert!(t.delaunay_sign((i, k)) <= 0);
            }
        }
        assert_eq!(t.area_twice(), Scalar::from_int(6));
    }
}
