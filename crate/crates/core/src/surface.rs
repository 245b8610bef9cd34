//! Translation surfaces presented as polygons with edges glued by translations.

use std::collections::VecDeque;

use thiserror::Error;

use crate::geom::{in_sweep, segments_touch, twice_signed_area, Mat2, Vec2};
use crate::scalar::{FieldCtx, Scalar};

/// An edge of a polygon, `(polygon index, edge index)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeRef {
    pub poly: usize,
    pub edge: usize,
}

impl EdgeRef {
    pub fn new(poly: usize, edge: usize) -> Self {
        EdgeRef { poly, edge }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SurfaceError {
    #[error("polygon {0} does not close up")]
    NonClosedPolygon(usize),
    #[error("polygon {0} is not a simple positively oriented polygon")]
    NonSimplePolygon(usize),
    #[error("edges {0:?} and {1:?} are not glued by a translation")]
    GluingMismatch(EdgeRef, EdgeRef),
    #[error("vertex class {0} does not have a cone angle that is a positive multiple of 2π")]
    BadConeAngle(usize),
    #[error("gluing is not a perfect matching of the edges: {0}")]
    InvalidGluing(String),
    #[error("the polygons do not form a connected surface")]
    NotConnected,
    #[error("side lengths must be positive")]
    NonPositiveLength,
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("deformation too large: polygon {0} degenerates")]
    DeformationTooLarge(usize),
    #[error("scalar outside the field {0}")]
    FieldMismatch(FieldCtx),
    #[error("cocycle belongs to a different homology frame")]
    FrameMismatch,
}

impl SurfaceError {
    /// Stable error name for tool output.
    pub fn name(&self) -> &'static str {
        match self {
            SurfaceError::NonClosedPolygon(_) => "NonClosedPolygon",
            SurfaceError::NonSimplePolygon(_) => "NonSimplePolygon",
            SurfaceError::GluingMismatch(..) => "GluingMismatch",
            SurfaceError::BadConeAngle(_) => "BadConeAngle",
            SurfaceError::InvalidGluing(_) => "InvalidGluing",
            SurfaceError::NotConnected => "NotConnected",
            SurfaceError::NonPositiveLength => "NonPositiveLength",
            SurfaceError::SingularMatrix => "SingularMatrix",
            SurfaceError::DeformationTooLarge(_) => "DeformationTooLarge",
            SurfaceError::FieldMismatch(_) => "FieldMismatch",
            SurfaceError::FrameMismatch => "FrameMismatch",
        }
    }
}

/// Stratum data: vertex classes with their cone orders and the genus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SingularityData {
    /// Corner ids of each vertex class, in counterclockwise order.
    pub classes: Vec<Vec<usize>>,
    /// Cone angle of class `i` is `2π (cone_orders[i] + 1)`.
    pub cone_orders: Vec<u32>,
    pub genus: u32,
    /// Cone orders sorted decreasingly; zeros are marked points.
    pub signature: Vec<u32>,
}

impl SingularityData {
    pub fn num_singularities(&self) -> usize {
        self.classes.len()
    }

    /// Dimension of relative homology, `2g + s - 1`.
    pub fn relative_rank(&self) -> usize {
        2 * self.genus as usize + self.classes.len() - 1
    }

    pub fn signature_string(&self) -> String {
        let parts: Vec<String> = self.signature.iter().map(|k| k.to_string()).collect();
        format!("({})", parts.join(", "))
    }
}

/// A validated translation surface.
///
/// Every polygon vertex is treated as a point of `Σ`: either a true cone
/// point or a marked point of angle `2π`.
#[derive(Clone, Debug)]
pub struct TranslationSurface {
    field: FieldCtx,
    polygons: Vec<Vec<Vec2>>,
    gluing: Vec<(EdgeRef, EdgeRef)>,
    label: Option<String>,
    partner: Vec<Vec<EdgeRef>>,
    vertices: Vec<Vec<Vec2>>,
    corner_offset: Vec<usize>,
    /// Corner ids of the counterclockwise successor around the vertex.
    next_corner: Vec<usize>,
    vertex_of_corner: Vec<usize>,
    singularities: SingularityData,
    /// Per edge: (edge class, +1 if this side is the class representative else -1).
    edge_class: Vec<Vec<(usize, i32)>>,
    class_reps: Vec<EdgeRef>,
}

impl PartialEq for TranslationSurface {
    fn eq(&self, o: &Self) -> bool {
        self.field == o.field && self.polygons == o.polygons && self.gluing == o.gluing && self.label == o.label
    }
}

impl TranslationSurface {
    /// Builds and validates a surface.
    pub fn new(
        field: FieldCtx,
        polygons: Vec<Vec<Vec2>>,
        gluing: Vec<(EdgeRef, EdgeRef)>,
        label: Option<String>,
    ) -> Result<Self, SurfaceError> {
        for p in &polygons {
            for v in p {
                if !field.contains(&v.x) || !field.contains(&v.y) {
                    return Err(SurfaceError::FieldMismatch(field));
                }
            }
        }
        let partner = build_partner(&polygons, &gluing)?;
        // translation gluing: opposite vectors
        for (a, b) in &gluing {
            let va = &polygons[a.poly][a.edge];
            let vb = &polygons[b.poly][b.edge];
            if &(va + vb) != &Vec2::zero() {
                return Err(SurfaceError::GluingMismatch(*a, *b));
            }
        }
        check_connected(&polygons, &partner)?;
        let mut vertices = Vec::with_capacity(polygons.len());
        for (i, p) in polygons.iter().enumerate() {
            vertices.push(check_polygon(i, p)?);
        }
        let mut corner_offset = Vec::with_capacity(polygons.len());
        let mut total = 0;
        for p in &polygons {
            corner_offset.push(total);
            total += p.len();
        }
        let mut s = TranslationSurface {
            field,
            polygons,
            gluing,
            label,
            partner,
            vertices,
            corner_offset,
            next_corner: Vec::new(),
            vertex_of_corner: Vec::new(),
            singularities: SingularityData { classes: vec![], cone_orders: vec![], genus: 0, signature: vec![] },
            edge_class: Vec::new(),
            class_reps: Vec::new(),
        };
        s.build_topology()?;
        Ok(s)
    }

    fn build_topology(&mut self) -> Result<(), SurfaceError> {
        let n_corners: usize = self.polygons.iter().map(|p| p.len()).sum();
        let mut next = vec![0; n_corners];
        for (p, poly) in self.polygons.iter().enumerate() {
            let n = poly.len();
            for i in 0..n {
                let incoming = EdgeRef::new(p, (i + n - 1) % n);
                let q = self.partner[incoming.poly][incoming.edge];
                next[self.corner_id(p, i)] = self.corner_id(q.poly, q.edge);
            }
        }
        self.next_corner = next;
        let mut vertex_of = vec![usize::MAX; n_corners];
        let mut classes = Vec::new();
        for c in 0..n_corners {
            if vertex_of[c] != usize::MAX {
                continue;
            }
            let id = classes.len();
            let mut cyc = Vec::new();
            let mut x = c;
            while vertex_of[x] == usize::MAX {
                vertex_of[x] = id;
                cyc.push(x);
                x = self.next_corner[x];
            }
            classes.push(cyc);
        }
        self.vertex_of_corner = vertex_of;
        let east = Vec2::east();
        let mut cone_orders = Vec::new();
        for (id, cyc) in classes.iter().enumerate() {
            let turns = cyc.iter().filter(|&&c| self.corner_contains(c, &east)).count();
            if turns == 0 {
                return Err(SurfaceError::BadConeAngle(id));
            }
            cone_orders.push(turns as u32 - 1);
        }
        // edge classes
        let mut edge_class: Vec<Vec<(usize, i32)>> = self.polygons.iter().map(|p| vec![(usize::MAX, 0); p.len()]).collect();
        let mut reps = Vec::new();
        for (p, poly) in self.polygons.iter().enumerate() {
            for e in 0..poly.len() {
                if edge_class[p][e].0 != usize::MAX {
                    continue;
                }
                let id = reps.len();
                reps.push(EdgeRef::new(p, e));
                edge_class[p][e] = (id, 1);
                let q = self.partner[p][e];
                edge_class[q.poly][q.edge] = (id, -1);
            }
        }
        let v = classes.len() as i64;
        let e = reps.len() as i64;
        let f = self.polygons.len() as i64;
        let chi = v - e + f;
        if chi > 2 || (2 - chi) % 2 != 0 {
            return Err(SurfaceError::BadConeAngle(0));
        }
        let genus = ((2 - chi) / 2) as u32;
        let total: i64 = cone_orders.iter().map(|&k| k as i64).sum();
        if total != 2 * genus as i64 - 2 {
            return Err(SurfaceError::BadConeAngle(0));
        }
        let mut signature = cone_orders.clone();
        signature.sort_unstable_by(|a, b| b.cmp(a));
        self.edge_class = edge_class;
        self.class_reps = reps;
        self.singularities = SingularityData { classes, cone_orders, genus, signature };
        Ok(())
    }

    /// Re-checks all invariants and returns the stratum data.
    pub fn validate(&self) -> Result<SingularityData, SurfaceError> {
        let again = TranslationSurface::new(self.field, self.polygons.clone(), self.gluing.clone(), self.label.clone())?;
        Ok(again.singularities)
    }

    pub fn singularities(&self) -> &SingularityData {
        &self.singularities
    }

    pub fn field(&self) -> FieldCtx {
        self.field
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn with_label(mut self, label: Option<String>) -> Self {
        self.label = label;
        self
    }

    pub fn polygons(&self) -> &[Vec<Vec2>] {
        &self.polygons
    }

    pub fn gluing(&self) -> &[(EdgeRef, EdgeRef)] {
        &self.gluing
    }

    pub fn num_polygons(&self) -> usize {
        self.polygons.len()
    }

    pub fn edge_vec(&self, e: EdgeRef) -> &Vec2 {
        &self.polygons[e.poly][e.edge]
    }

    pub fn partner(&self, e: EdgeRef) -> EdgeRef {
        self.partner[e.poly][e.edge]
    }

    /// Vertex positions of polygon `p`, vertex 0 at the origin.
    pub fn vertices(&self, p: usize) -> &[Vec2] {
        &self.vertices[p]
    }

    pub fn corner_id(&self, poly: usize, idx: usize) -> usize {
        self.corner_offset[poly] + idx
    }

    pub fn num_corners(&self) -> usize {
        self.next_corner.len()
    }

    pub fn corner_ref(&self, c: usize) -> EdgeRef {
        let p = match self.corner_offset.binary_search(&c) {
            Ok(mut p) => {
                // skip empty polygons (none exist after validation, kept for safety)
                while p + 1 < self.corner_offset.len() && self.corner_offset[p + 1] == c {
                    p += 1;
                }
                p
            }
            Err(p) => p - 1,
        };
        EdgeRef::new(p, c - self.corner_offset[p])
    }

    pub fn next_corner(&self, c: usize) -> usize {
        self.next_corner[c]
    }

    pub fn vertex_of_corner(&self, c: usize) -> usize {
        self.vertex_of_corner[c]
    }

    /// Directions `[from, to)` swept counterclockwise by a corner.
    pub fn corner_sweep(&self, c: usize) -> (Vec2, Vec2) {
        let r = self.corner_ref(c);
        let poly = &self.polygons[r.poly];
        let n = poly.len();
        (poly[r.edge].clone(), -&poly[(r.edge + n - 1) % n])
    }

    pub fn corner_contains(&self, c: usize, w: &Vec2) -> bool {
        let (from, to) = self.corner_sweep(c);
        in_sweep(&from, &to, w)
    }

    pub fn num_edge_classes(&self) -> usize {
        self.class_reps.len()
    }

    pub fn edge_class(&self, e: EdgeRef) -> (usize, i32) {
        self.edge_class[e.poly][e.edge]
    }

    pub fn class_rep(&self, class: usize) -> EdgeRef {
        self.class_reps[class]
    }

    /// Holonomy of an edge class along its representative.
    pub fn class_holonomy(&self, class: usize) -> &Vec2 {
        self.edge_vec(self.class_reps[class])
    }

    /// Vertex classes at the start and end of an edge.
    pub fn edge_endpoints(&self, e: EdgeRef) -> (usize, usize) {
        let n = self.polygons[e.poly].len();
        let s = self.vertex_of_corner[self.corner_id(e.poly, e.edge)];
        let t = self.vertex_of_corner[self.corner_id(e.poly, (e.edge + 1) % n)];
        (s, t)
    }

    pub fn area(&self) -> Scalar {
        let two = Scalar::from_int(2);
        self.vertices.iter().map(|v| twice_signed_area(v)).sum::<Scalar>() / &two
    }

    pub fn longest_edge_sq(&self) -> Scalar {
        self.polygons.iter().flatten().map(|v| v.norm_sq()).max().unwrap_or_else(Scalar::zero)
    }

    /// Same gluing with new edge vectors (one per edge, same layout).
    pub fn with_edge_vectors(&self, polygons: Vec<Vec<Vec2>>) -> Result<TranslationSurface, SurfaceError> {
        TranslationSurface::new(self.field, polygons, self.gluing.clone(), self.label.clone())
    }

    /// Applies `g` to every edge vector; orientation-reversing matrices also
    /// reverse the polygon order so that polygons stay positively oriented.
    pub fn gl2_action(&self, g: &Mat2) -> Result<TranslationSurface, SurfaceError> {
        let det = g.det();
        if det.is_zero() {
            return Err(SurfaceError::SingularMatrix);
        }
        for x in [&g.a, &g.b, &g.c, &g.d] {
            if !self.field.contains(x) {
                return Err(SurfaceError::FieldMismatch(self.field));
            }
        }
        if det.is_positive() {
            let polys = self.polygons.iter().map(|p| p.iter().map(|v| g.apply(v)).collect()).collect();
            return self.with_edge_vectors(polys);
        }
        let polys: Vec<Vec<Vec2>> = self
            .polygons
            .iter()
            .map(|p| {
                let n = p.len();
                (0..n).map(|k| -g.apply(&p[n - 1 - k])).collect()
            })
            .collect();
        let flip = |e: &EdgeRef| EdgeRef::new(e.poly, self.polygons[e.poly].len() - 1 - e.edge);
        let gluing = self.gluing.iter().map(|(a, b)| (flip(a), flip(b))).collect();
        TranslationSurface::new(self.field, polys, gluing, self.label.clone())
    }

    /// Widens the coefficient field (e.g. from `Q` to `Q(√d)`).
    pub fn in_field(&self, field: FieldCtx) -> Option<TranslationSurface> {
        let f = self.field.join(&field)?;
        let mut s = self.clone();
        s.field = f;
        Some(s)
    }
}

fn build_partner(polygons: &[Vec<Vec2>], gluing: &[(EdgeRef, EdgeRef)]) -> Result<Vec<Vec<EdgeRef>>, SurfaceError> {
    const UNSET: EdgeRef = EdgeRef { poly: usize::MAX, edge: usize::MAX };
    if polygons.is_empty() {
        return Err(SurfaceError::InvalidGluing("no polygons".into()));
    }
    let mut partner: Vec<Vec<EdgeRef>> = polygons.iter().map(|p| vec![UNSET; p.len()]).collect();
    for (a, b) in gluing {
        for e in [a, b] {
            if e.poly >= polygons.len() || e.edge >= polygons[e.poly].len() {
                return Err(SurfaceError::InvalidGluing(format!("edge {e:?} does not exist")));
            }
        }
        if a == b {
            return Err(SurfaceError::InvalidGluing(format!("edge {a:?} glued to itself")));
        }
        for (x, y) in [(a, b), (b, a)] {
            if partner[x.poly][x.edge] != UNSET {
                return Err(SurfaceError::InvalidGluing(format!("edge {x:?} glued twice")));
            }
            partner[x.poly][x.edge] = *y;
        }
    }
    for (p, row) in partner.iter().enumerate() {
        for (e, q) in row.iter().enumerate() {
            if *q == UNSET {
                return Err(SurfaceError::InvalidGluing(format!("edge {:?} is not glued", EdgeRef::new(p, e))));
            }
        }
    }
    Ok(partner)
}

fn check_connected(polygons: &[Vec<Vec2>], partner: &[Vec<EdgeRef>]) -> Result<(), SurfaceError> {
    let mut seen = vec![false; polygons.len()];
    let mut queue = VecDeque::from([0usize]);
    seen[0] = true;
    while let Some(p) = queue.pop_front() {
        for q in &partner[p] {
            if !seen[q.poly] {
                seen[q.poly] = true;
                queue.push_back(q.poly);
            }
        }
    }
    if seen.iter().all(|&s| s) {
        Ok(())
    } else {
        Err(SurfaceError::NotConnected)
    }
}

/// Checks closure, simplicity and orientation; returns vertex positions.
pub(crate) fn check_polygon(idx: usize, edges: &[Vec2]) -> Result<Vec<Vec2>, SurfaceError> {
    let n = edges.len();
    if n < 3 {
        return Err(SurfaceError::NonSimplePolygon(idx));
    }
    let mut verts = Vec::with_capacity(n);
    let mut p = Vec2::zero();
    for e in edges {
        if e.is_zero() {
            return Err(SurfaceError::NonSimplePolygon(idx));
        }
        verts.push(p.clone());
        p = &p + e;
    }
    if !p.is_zero() {
        return Err(SurfaceError::NonClosedPolygon(idx));
    }
    if !polygon_is_simple(&verts) {
        return Err(SurfaceError::NonSimplePolygon(idx));
    }
    if !twice_signed_area(&verts).is_positive() {
        return Err(SurfaceError::NonSimplePolygon(idx));
    }
    Ok(verts)
}

fn polygon_is_simple(verts: &[Vec2]) -> bool {
    let n = verts.len();
    for i in 0..n {
        let (a1, a2) = (&verts[i], &verts[(i + 1) % n]);
        // consecutive edges may not fold back onto each other
        let prev = &verts[(i + n - 1) % n];
        let e_in = a1 - prev;
        let e_out = a2 - a1;
        if e_in.cross(&e_out).is_zero() && e_in.dot(&e_out).is_negative() {
            return false;
        }
        for j in i + 2..n {
            if i == 0 && j == n - 1 {
                continue;
            }
            let (b1, b2) = (&verts[j], &verts[(j + 1) % n]);
            if segments_touch(a1, a2, b1, b2) {
                return false;
            }
        }
    }
    true
}

/// A permutation of `0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Permutation(pub Vec<usize>);

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation((0..n).collect())
    }

    /// Parses 1-based cycle notation such as `(1 2)(3 4 5)`.
    pub fn from_cycles(n: usize, text: &str) -> Result<Self, String> {
        let mut map: Vec<usize> = (0..n).collect();
        let mut seen = vec![false; n];
        let cleaned = text.replace(',', " ");
        for cyc in cleaned.split(')') {
            let cyc = cyc.trim().trim_start_matches('(');
            if cyc.trim().is_empty() {
                continue;
            }
            let elems: Vec<usize> = cyc
                .split_whitespace()
                .map(|t| t.parse::<usize>().map_err(|_| format!("bad cycle entry {t:?}")))
                .collect::<Result<_, _>>()?;
            for &e in &elems {
                if e == 0 || e > n {
                    return Err(format!("entry {e} out of range 1..={n}"));
                }
                if seen[e - 1] {
                    return Err(format!("entry {e} repeated"));
                }
                seen[e - 1] = true;
            }
            for k in 0..elems.len() {
                map[elems[k] - 1] = elems[(k + 1) % elems.len()] - 1;
            }
        }
        Ok(Permutation(map))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0[i]
    }
}

/// Unit squares `0..n`; square `i` has right neighbour `h(i)` and top neighbour `v(i)`.
pub fn square_tiled(h: &Permutation, v: &Permutation) -> Result<TranslationSurface, SurfaceError> {
    let n = h.len();
    if n == 0 || v.len() != n {
        return Err(SurfaceError::InvalidGluing("permutations of different sizes".into()));
    }
    // transitivity of <h, v>
    let mut seen = vec![false; n];
    let mut queue = VecDeque::from([0usize]);
    seen[0] = true;
    while let Some(i) = queue.pop_front() {
        for j in [h.apply(i), v.apply(i)] {
            if !seen[j] {
                seen[j] = true;
                queue.push_back(j);
            }
        }
    }
    // also walk inverses: transitivity of the group, not the monoid, though for
    // finite permutations the two orbits agree
    if !seen.iter().all(|&s| s) {
        return Err(SurfaceError::NotConnected);
    }
    let square = vec![Vec2::ints(1, 0), Vec2::ints(0, 1), Vec2::ints(-1, 0), Vec2::ints(0, -1)];
    let polygons = vec![square; n];
    let mut gluing = Vec::with_capacity(2 * n);
    for i in 0..n {
        gluing.push((EdgeRef::new(i, 1), EdgeRef::new(h.apply(i), 3)));
        gluing.push((EdgeRef::new(i, 2), EdgeRef::new(v.apply(i), 0)));
    }
    TranslationSurface::new(FieldCtx::RATIONAL, polygons, gluing, None)
}

/// The L-shaped genus-two surface: a `w1 × h1` rectangle with a `w2 × h2`
/// rectangle stacked on its left part; opposite parallel sides glued.
pub fn l_shape(w1: &Scalar, h1: &Scalar, w2: &Scalar, h2: &Scalar) -> Result<TranslationSurface, SurfaceError> {
    for x in [w1, h1, w2, h2] {
        if !x.is_positive() {
            return Err(SurfaceError::NonPositiveLength);
        }
    }
    if w2 >= w1 {
        return Err(SurfaceError::NonPositiveLength);
    }
    let mut field = FieldCtx::RATIONAL;
    for x in [w1, h1, w2, h2] {
        field = field
            .join(&FieldCtx { d: x.d() })
            .ok_or(SurfaceError::FieldMismatch(field))?;
    }
    let z = Scalar::zero();
    let e = |x: &Scalar, y: &Scalar| Vec2::new(x.clone(), y.clone());
    let poly = vec![
        e(w2, &z),
        e(&(w1 - w2), &z),
        e(&z, h1),
        e(&(w2 - w1), &z),
        e(&z, h2),
        e(&-w2, &z),
        e(&z, &-h2),
        e(&z, &-h1),
    ];
    let g = |a: usize, b: usize| (EdgeRef::new(0, a), EdgeRef::new(0, b));
    let gluing = vec![g(0, 5), g(1, 3), g(2, 7), g(4, 6)];
    TranslationSurface::new(field, vec![poly], gluing, None)
}
