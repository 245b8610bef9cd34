//! Deciding whether two surfaces differ only by cut and paste.
//!
//! Both surfaces are flipped to a Delaunay triangulation; triangles sharing a
//! cocircular side are merged into cells, which makes the cell structure
//! canonical. Equivalence is then a search for a vector-preserving bijection
//! of cell boundaries anchored at one half-edge.

use std::collections::VecDeque;

use crate::surface::TranslationSurface;
use crate::triangulate::{Side, TriSurface};

/// Boundary half-edges of the Delaunay cells.
#[derive(Clone, Debug)]
pub struct CellComplex {
    pub tri: TriSurface,
    /// Triangle side carrying each half-edge.
    pub sides: Vec<Side>,
    pub next: Vec<usize>,
    pub twin: Vec<usize>,
}

impl CellComplex {
    pub fn new(m: &TranslationSurface) -> Self {
        let mut tri = TriSurface::from_surface(m);
        tri.make_delaunay();
        let ambiguous = |s: Side| tri.delaunay_sign(s) == 0;
        let mut index = vec![[usize::MAX; 3]; tri.tris.len()];
        let mut sides = Vec::new();
        for t in 0..tri.tris.len() {
            for k in 0..3 {
                if !ambiguous((t, k)) {
                    index[t][k] = sides.len();
                    sides.push((t, k));
                }
            }
        }
        let next = sides
            .iter()
            .map(|&(t, k)| {
                let mut s = (t, (k + 1) % 3);
                while ambiguous(s) {
                    let (u, j) = tri.twin(s);
                    s = (u, (j + 1) % 3);
                }
                index[s.0][s.1]
            })
            .collect();
        let twin = sides
            .iter()
            .map(|&s| {
                let o = tri.twin(s);
                index[o.0][o.1]
            })
            .collect();
        CellComplex { tri, sides, next, twin }
    }

    fn vec(&self, h: usize) -> &crate::geom::Vec2 {
        self.tri.vec(self.sides[h])
    }

    /// Extends `h0 ↦ g0` to a full matching, if one exists.
    fn match_from(&self, other: &CellComplex, h0: usize, g0: usize) -> Option<Vec<usize>> {
        let mut map = vec![usize::MAX; self.sides.len()];
        let mut used = vec![false; other.sides.len()];
        let mut queue = VecDeque::from([(h0, g0)]);
        while let Some((h, g)) = queue.pop_front() {
            if map[h] != usize::MAX {
                if map[h] != g {
                    return None;
                }
                continue;
            }
            if used[g] || self.vec(h) != other.vec(g) {
                return None;
            }
            map[h] = g;
            used[g] = true;
            queue.push_back((self.next[h], other.next[g]));
            queue.push_back((self.twin[h], other.twin[g]));
        }
        map.iter().all(|&g| g != usize::MAX).then_some(map)
    }
}

/// A half-edge matching between the Delaunay cells of two equivalent surfaces.
pub fn equivalence_witness(a: &TranslationSurface, b: &TranslationSurface) -> Option<Vec<(Side, Side)>> {
    if a.area() != b.area() || a.singularities().signature != b.singularities().signature {
        return None;
    }
    let (ca, cb) = (CellComplex::new(a), CellComplex::new(b));
    if ca.sides.len() != cb.sides.len() || ca.sides.is_empty() {
        return None;
    }
    (0..cb.sides.len()).find_map(|g0| {
        ca.match_from(&cb, 0, g0)
            .map(|map| map.iter().enumerate().map(|(h, &g)| (ca.sides[h], cb.sides[g])).collect())
    })
}

pub fn translation_equivalent(a: &TranslationSurface, b: &TranslationSurface) -> bool {
    equivalence_witness(a, b).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Mat2;
    use crate::scalar::Scalar;
    use crate::surface::{l_shape, square_tiled, Permutation};

    fn origami(h: &str, v: &str, n: usize) -> TranslationSurface {
        square_tiled(&Permutation::from_cycles(n, h).unwrap(), &Permutation::from_cycles(n, v).unwrap()).unwrap()
    }

    #[test]
    fn reflexive_and_detects_full_twists() {
        let torus = origami("", "", 1);
        assert!(translation_equivalent(&torus, &torus));
        let twisted = torus.gl2_action(&Mat2::ints(1, 1, 0, 1)).unwrap();
        assert!(translation_equivalent(&torus, &twisted));
        let stretched = torus.gl2_action(&Mat2::ints(1, 0, 0, 2)).unwrap();
        assert!(!translation_equivalent(&torus, &stretched));
        let half = torus.gl2_action(&Mat2::new(Scalar::one(), Scalar::from_ratio(1, 2), Scalar::zero(), Scalar::one())).unwrap();
        assert!(!translation_equivalent(&torus, &half));
    }

    #[test]
    fn l_shapes_from_squares_and_one_polygon_agree() {
        let l = origami("(1 2)", "(1 3)", 3);
        let one = Scalar::one();
        let single = l_shape(&Scalar::from_int(2), &one, &one, &one).unwrap();
        assert!(translation_equivalent(&l, &single));
        assert!(translation_equivalent(&single, &l));
        let other = origami("(1 2 3)", "", 3);
        assert!(!translation_equivalent(&l, &other));
        let rot = l.gl2_action(&Mat2::ints(0, -1, 1, 0)).unwrap();
        assert!(translation_equivalent(&l, &rot));
        assert!(!translation_equivalent(&l, &l.gl2_action(&Mat2::ints(1, 1, 0, 1)).unwrap()));
        assert!(translation_equivalent(&l, &l.gl2_action(&Mat2::ints(1, 2, 0, 1)).unwrap()));
    }
}
