//! Saddle connection holonomies up to a length bound, and the directions they span.

use std::collections::BTreeMap;

use crate::geom::Vec2;
use crate::scalar::Scalar;
use crate::surface::TranslationSurface;
use crate::triangulate::{Side, TriSurface};

/// All saddle connection holonomies with `|hol|² ≤ bound_sq`, one entry per
/// (start corner, holonomy) pair found, sorted and deduplicated.
pub fn saddle_holonomies(m: &TranslationSurface, bound_sq: &Scalar) -> Vec<Vec2> {
    let t = TriSurface::from_surface(m);
    let mut found = Vec::new();
    for tri in 0..t.tris.len() {
        for k in 0..3 {
            let e = &t.tris[tri];
            let lo = e[k].clone();
            let hi = -&e[(k + 2) % 3];
            if lo.norm_sq() <= *bound_sq {
                found.push(lo.clone());
            }
            let q = &lo + &e[(k + 1) % 3];
            explore(&t, t.twin((tri, (k + 1) % 3)), lo.clone(), q, &lo, &hi, bound_sq, &mut found);
        }
    }
    found.sort_by(|a, b| (&a.x, &a.y).cmp(&(&b.x, &b.y)));
    found.dedup();
    found
}

/// Crosses the window `p → q` into the side `into`, looking for vertices
/// strictly inside the wedge `(lo, hi)`.
#[allow(clippy::too_many_arguments)]
fn explore(t: &TriSurface, into: Side, p: Vec2, q: Vec2, lo: &Vec2, hi: &Vec2, bound_sq: &Scalar, out: &mut Vec<Vec2>) {
    if segment_dist_sq(&p, &q) > *bound_sq {
        return;
    }
    let (u, j) = into;
    let w = &p + &t.tris[u][(j + 1) % 3];
    let right = (u, (j + 1) % 3);
    let left = (u, (j + 2) % 3);
    let after_lo = lo.cross(&w).is_positive();
    let before_hi = w.cross(hi).is_positive();
    if after_lo && before_hi {
        if w.norm_sq() <= *bound_sq {
            out.push(w.clone());
        }
        explore(t, t.twin(right), p, w.clone(), lo, &w, bound_sq, out);
        explore(t, t.twin(left), w.clone(), q, &w, hi, bound_sq, out);
    } else if !after_lo {
        explore(t, t.twin(left), w, q, lo, hi, bound_sq, out);
    } else {
        explore(t, t.twin(right), p, w, lo, hi, bound_sq, out);
    }
}

fn segment_dist_sq(p: &Vec2, q: &Vec2) -> Scalar {
    let d = q - p;
    let num = -p.dot(&d);
    if !num.is_positive() {
        return p.norm_sq();
    }
    let den = d.norm_sq();
    if num >= den {
        return q.norm_sq();
    }
    let c = p.cross(&d);
    &c.square() / &den
}

/// Key identifying an unoriented direction: the slope, or `None` for vertical.
fn slope_key(v: &Vec2) -> Option<Scalar> {
    (!v.x.is_zero()).then(|| &v.y / &v.x)
}

/// Sign-normalized representative: `x > 0`, or `x = 0` and `y > 0`.
fn sign_normalize(v: &Vec2) -> Vec2 {
    if v.x.is_negative() || (v.x.is_zero() && v.y.is_negative()) {
        -v
    } else {
        v.clone()
    }
}

/// Primitive representative of a direction: the primitive integer vector for
/// rational slopes, otherwise the given holonomy.
pub fn primitive_direction(v: &Vec2) -> Vec2 {
    let v = sign_normalize(v);
    match slope_key(&v) {
        None => Vec2::ints(0, 1),
        Some(s) => match s.as_rational() {
            Some(r) => Vec2::new(Scalar::rational(r.denom().clone().into()), Scalar::rational(r.numer().clone().into())),
            None => v,
        },
    }
}

/// Directions of saddle connections with `|hol|² ≤ bound_sq`, one primitive
/// representative per unoriented direction, ordered by slope with vertical last.
pub fn enumerate_directions(m: &TranslationSurface, bound_sq: &Scalar) -> Vec<Vec2> {
    let mut by_slope: BTreeMap<(bool, Option<Scalar>), Vec2> = BTreeMap::new();
    for h in saddle_holonomies(m, bound_sq) {
        let v = sign_normalize(&h);
        let key = slope_key(&v);
        let entry = by_slope.entry((key.is_none(), key)).or_insert_with(|| v.clone());
        if v.norm_sq() < entry.norm_sq() {
            *entry = v;
        }
    }
    by_slope.into_values().map(|v| primitive_direction(&v)).collect()
}
