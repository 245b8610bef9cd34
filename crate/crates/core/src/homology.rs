//! Relative homology frames, period coordinates and cocycles.

use std::collections::VecDeque;

use sha2::{Digest, Sha256};

use crate::geom::Vec2;
use crate::linalg::{Complex, FieldElem, Matrix};
use crate::scalar::Scalar;
use crate::surface::{EdgeRef, SurfaceError, TranslationSurface};

/// An integer basis of `H_1(X, Σ; Z)` built from edge classes.
///
/// Basis classes are the edge classes outside a spanning tree of the dual
/// graph (polygons joined across glued edges), so every edge class has a
/// unique integer expansion in the basis.
#[derive(Clone, Debug, PartialEq)]
pub struct HomologyFrame {
    hash: String,
    genus: usize,
    num_vertices: usize,
    /// Edge class of each basis element.
    basis: Vec<usize>,
    /// Row `e`: coordinates of edge class `e` in the basis.
    edge_to_basis: Vec<Vec<i64>>,
    /// Row `j`: boundary of basis class `j` on vertex classes.
    boundary: Vec<Vec<i64>>,
    /// Basis of the absolute subspace `ker ∂`, in basis coordinates.
    absolute: Vec<Vec<i64>>,
    /// Intersection numbers among the absolute basis cycles.
    intersection: Vec<Vec<i64>>,
}

/// A cohomology class given by its values on the frame basis.
#[derive(Clone, Debug, PartialEq)]
pub struct Cocycle {
    pub frame: String,
    pub values: Vec<Complex>,
}

impl Cocycle {
    pub fn zero(frame: &HomologyFrame) -> Self {
        Cocycle { frame: frame.hash.clone(), values: vec![Complex::default(); frame.rank()] }
    }

    pub fn real(frame: &HomologyFrame, values: Vec<Scalar>) -> Self {
        Cocycle { frame: frame.hash.clone(), values: values.into_iter().map(Complex::real).collect() }
    }

    /// The dual basis element `γ_j ↦ 1`.
    pub fn dual(frame: &HomologyFrame, j: usize) -> Self {
        let mut c = Cocycle::zero(frame);
        c.values[j] = Complex::real(Scalar::one());
        c
    }

    pub fn is_real(&self) -> bool {
        self.values.iter().all(Complex::is_real)
    }

    pub fn real_part(&self) -> Vec<Scalar> {
        self.values.iter().map(|c| c.re.clone()).collect()
    }

    pub fn imag_part(&self) -> Vec<Scalar> {
        self.values.iter().map(|c| c.im.clone()).collect()
    }

    pub fn scale(&self, s: &Complex) -> Cocycle {
        Cocycle { frame: self.frame.clone(), values: self.values.iter().map(|v| v * s).collect() }
    }

    pub fn add(&self, o: &Cocycle) -> Cocycle {
        assert_eq!(self.frame, o.frame);
        Cocycle { frame: self.frame.clone(), values: self.values.iter().zip(&o.values).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, o: &Cocycle) -> Cocycle {
        self.add(&o.scale(&Complex::real(-Scalar::one())))
    }

    /// Value on an integer chain given in basis coordinates.
    pub fn eval(&self, chain: &[i64]) -> Complex {
        let mut acc = Complex::default();
        for (c, v) in chain.iter().zip(&self.values) {
            if *c != 0 {
                acc = &acc + &v.scale(&Scalar::from_int(*c));
            }
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(FieldElem::is_zero)
    }
}

impl HomologyFrame {
    pub fn new(m: &TranslationSurface) -> Self {
        let n_edges = m.num_edge_classes();
        let n_polys = m.num_polygons();
        // dual spanning tree
        let mut parent_edge: Vec<Option<usize>> = vec![None; n_polys];
        let mut order = Vec::with_capacity(n_polys);
        let mut seen = vec![false; n_polys];
        let mut in_tree = vec![false; n_edges];
        seen[0] = true;
        let mut queue = VecDeque::from([0usize]);
        while let Some(p) = queue.pop_front() {
            order.push(p);
            for e in 0..m.polygons()[p].len() {
                let q = m.partner(EdgeRef::new(p, e));
                if !seen[q.poly] {
                    seen[q.poly] = true;
                    let (class, _) = m.edge_class(q);
                    in_tree[class] = true;
                    parent_edge[q.poly] = Some(class);
                    queue.push_back(q.poly);
                }
            }
        }
        let basis: Vec<usize> = (0..n_edges).filter(|&e| !in_tree[e]).collect();
        let rank = basis.len();
        let mut edge_to_basis: Vec<Option<Vec<i64>>> = vec![None; n_edges];
        for (j, &e) in basis.iter().enumerate() {
            let mut row = vec![0; rank];
            row[j] = 1;
            edge_to_basis[e] = Some(row);
        }
        // leaves first: the face relation of polygon q solves for its tree edge
        for &q in order.iter().rev() {
            let Some(t) = parent_edge[q] else { continue };
            let mut acc = vec![0i64; rank];
            let mut t_sign = 0;
            for e in 0..m.polygons()[q].len() {
                let (class, sign) = m.edge_class(EdgeRef::new(q, e));
                if class == t {
                    t_sign = sign as i64;
                    continue;
                }
                let row = edge_to_basis[class].as_ref().expect("child relations solved first");
                for k in 0..rank {
                    acc[k] += sign as i64 * row[k];
                }
            }
            edge_to_basis[t] = Some(acc.iter().map(|x| -t_sign * x).collect());
        }
        let edge_to_basis: Vec<Vec<i64>> = edge_to_basis.into_iter().map(|r| r.unwrap()).collect();

        let s = m.singularities();
        let num_vertices = s.num_singularities();
        let endpoints: Vec<(usize, usize)> = basis.iter().map(|&e| m.edge_endpoints(m.class_rep(e))).collect();
        let boundary: Vec<Vec<i64>> = endpoints
            .iter()
            .map(|&(a, b)| {
                let mut row = vec![0; num_vertices];
                row[b] += 1;
                row[a] -= 1;
                row
            })
            .collect();

        // spanning tree of the vertex graph on basis edges; paths from the root
        let mut path: Vec<Option<Vec<i64>>> = vec![None; num_vertices];
        let mut tree_edge = vec![false; rank];
        path[0] = Some(vec![0; rank]);
        let mut queue = VecDeque::from([0usize]);
        while let Some(v) = queue.pop_front() {
            for (j, &(a, b)) in endpoints.iter().enumerate() {
                let (other, sign) = if a == v {
                    (b, 1)
                } else if b == v {
                    (a, -1)
                } else {
                    continue;
                };
                if path[other].is_none() {
                    let mut p = path[v].clone().unwrap();
                    p[j] += sign;
                    path[other] = Some(p);
                    tree_edge[j] = true;
                    queue.push_back(other);
                }
            }
        }
        let path: Vec<Vec<i64>> = path.into_iter().map(|p| p.expect("vertex graph is connected")).collect();
        let mut absolute = Vec::new();
        for (j, &(a, b)) in endpoints.iter().enumerate() {
            if tree_edge[j] {
                continue;
            }
            let mut cyc = path[a].clone();
            cyc[j] += 1;
            for k in 0..rank {
                cyc[k] -= path[b][k];
            }
            absolute.push(cyc);
        }

        let mut frame = HomologyFrame {
            hash: String::new(),
            genus: s.genus as usize,
            num_vertices,
            basis,
            edge_to_basis,
            boundary,
            absolute,
            intersection: Vec::new(),
        };
        frame.intersection = frame
            .absolute
            .iter()
            .map(|a| frame.absolute.iter().map(|b| frame.intersect(m, a, b)).collect())
            .collect();
        frame.hash = frame_hash(m, &frame.basis);
        frame
    }

    pub fn hash(&self) -> &str {
        &self.hash
    }

    /// `m = 2g + s - 1`.
    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    pub fn basis_edge_classes(&self) -> &[usize] {
        &self.basis
    }

    pub fn boundary(&self) -> &[Vec<i64>] {
        &self.boundary
    }

    pub fn absolute_basis(&self) -> &[Vec<i64>] {
        &self.absolute
    }

    pub fn intersection_form(&self) -> &[Vec<i64>] {
        &self.intersection
    }

    /// Basis coordinates of an edge class.
    pub fn edge_class_coords(&self, class: usize) -> &[i64] {
        &self.edge_to_basis[class]
    }

    /// Basis coordinates of a polygon edge, oriented along the polygon boundary.
    pub fn edge_coords(&self, m: &TranslationSurface, e: EdgeRef) -> Vec<i64> {
        let (class, sign) = m.edge_class(e);
        self.edge_to_basis[class].iter().map(|x| x * sign as i64).collect()
    }

    /// Basis coordinates of a chain given by coefficients on edge classes.
    pub fn chain_coords(&self, by_class: &[i64]) -> Vec<i64> {
        let mut out = vec![0; self.rank()];
        for (e, &c) in by_class.iter().enumerate() {
            if c != 0 {
                for (o, x) in out.iter_mut().zip(&self.edge_to_basis[e]) {
                    *o += c * x;
                }
            }
        }
        out
    }

    /// Boundary on vertex classes of a chain in basis coordinates.
    pub fn boundary_of(&self, chain: &[i64]) -> Vec<i64> {
        let mut out = vec![0; self.num_vertices];
        for (j, &c) in chain.iter().enumerate() {
            for (o, x) in out.iter_mut().zip(&self.boundary[j]) {
                *o += c * x;
            }
        }
        out
    }

    pub fn is_closed(&self, chain: &[i64]) -> bool {
        self.boundary_of(chain).iter().all(|&x| x == 0)
    }

    /// Intersection number of two closed chains in basis coordinates.
    ///
    /// Both chains are realized on basis edges; at each vertex the outgoing
    /// flows are read in counterclockwise order and crossings are counted from
    /// the cyclic interleaving.
    pub fn intersect(&self, m: &TranslationSurface, a: &[i64], b: &[i64]) -> i64 {
        let mut ca = vec![0i64; m.num_edge_classes()];
        let mut cb = vec![0i64; m.num_edge_classes()];
        for (j, &e) in self.basis.iter().enumerate() {
            ca[e] = a[j];
            cb[e] = b[j];
        }
        let mut total = 0i64;
        for cyc in &m.singularities().classes {
            let mut prefix_b = 0i64;
            for &corner in cyc {
                let (class, sign) = m.edge_class(m.corner_ref(corner));
                let fa = sign as i64 * ca[class];
                let fb = sign as i64 * cb[class];
                total -= fa * prefix_b;
                prefix_b += fb;
            }
        }
        total - ca.iter().zip(&cb).map(|(x, y)| x * y).sum::<i64>()
    }

    /// Pairing of two absolute cohomology classes given by their values on
    /// the absolute basis, `φᵀ J⁻¹ ψ`.
    pub fn cohomology_pairing(&self, phi: &[Complex], psi: &[Complex]) -> Complex {
        let n = self.absolute.len();
        if n == 0 {
            return Complex::default();
        }
        let j = Matrix::from_rows(
            n,
            self.intersection.iter().map(|r| r.iter().map(|&x| Scalar::from_int(x)).collect()).collect(),
        );
        let inv = j.inverse().expect("intersection form is nondegenerate");
        let mut acc = Complex::default();
        for (r, p) in phi.iter().enumerate() {
            for (c, q) in psi.iter().enumerate() {
                let w = &inv[(r, c)];
                if !w.is_zero() {
                    acc = &acc + &(p * q).scale(w);
                }
            }
        }
        acc
    }

    /// `Φ(M)`: period of each basis class.
    pub fn period_map(&self, m: &TranslationSurface) -> Cocycle {
        let values = self.basis.iter().map(|&e| m.class_holonomy(e).to_complex()).collect();
        Cocycle { frame: self.hash.clone(), values }
    }

    /// Values of a cocycle on the absolute basis.
    pub fn project_absolute(&self, c: &Cocycle) -> Vec<Complex> {
        self.absolute.iter().map(|cyc| c.eval(cyc)).collect()
    }

    /// Value of a cocycle on a polygon edge.
    pub fn eval_edge(&self, m: &TranslationSurface, c: &Cocycle, e: EdgeRef) -> Complex {
        c.eval(&self.edge_coords(m, e))
    }

    /// Rebuilds `M` with every edge displaced by `ε·ζ(edge)`.
    pub fn deform_from_periods(
        &self,
        m: &TranslationSurface,
        zeta: &Cocycle,
        eps: &Scalar,
    ) -> Result<TranslationSurface, SurfaceError> {
        if zeta.frame != self.hash || frame_hash(m, &self.basis) != self.hash {
            return Err(SurfaceError::FrameMismatch);
        }
        assert!(!eps.is_negative(), "deformation parameter must be non-negative");
        let polys: Vec<Vec<Vec2>> = m
            .polygons()
            .iter()
            .enumerate()
            .map(|(p, poly)| {
                (0..poly.len())
                    .map(|e| {
                        let z = self.eval_edge(m, zeta, EdgeRef::new(p, e)).scale(eps);
                        &poly[e] + &Vec2::from_complex(&z)
                    })
                    .collect()
            })
            .collect();
        m.with_edge_vectors(polys).map_err(|err| match err {
            SurfaceError::NonClosedPolygon(p) | SurfaceError::NonSimplePolygon(p) => SurfaceError::DeformationTooLarge(p),
            SurfaceError::BadConeAngle(_) => SurfaceError::DeformationTooLarge(0),
            other => other,
        })
    }
}

fn frame_hash(m: &TranslationSurface, basis: &[usize]) -> String {
    let mut h = Sha256::new();
    for p in m.polygons() {
        h.update((p.len() as u64).to_le_bytes());
    }
    for (a, b) in m.gluing() {
        for x in [a.poly, a.edge, b.poly, b.edge] {
            h.update((x as u64).to_le_bytes());
        }
    }
    h.update(b"basis");
    for &e in basis {
        h.update((e as u64).to_le_bytes());
    }
    let digest = h.finalize();
    digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
}
