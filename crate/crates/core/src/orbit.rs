//! Tangent-space certificates and direction scans.

use rayon::prelude::*;

use crate::cylinder::{decompose, Decomposition, DecompositionStatus};
use crate::deformation::{cylinder_preserving_space, eta, twist_space};
use crate::geom::Vec2;
use crate::homology::{Cocycle, HomologyFrame};
use crate::linalg::{Complex, Span};
use crate::saddle::enumerate_directions;
use crate::scalar::Scalar;
use crate::surface::{SurfaceError, TranslationSurface};

/// Thread pool honoring `FLATDEF_THREADS` (unset or 0 means rayon's default).
pub fn thread_pool() -> rayon::ThreadPool {
    let n = std::env::var("FLATDEF_THREADS").ok().and_then(|s| s.trim().parse().ok()).unwrap_or(0);
    rayon::ThreadPoolBuilder::new().num_threads(n).build().expect("thread pool")
}

/// Decomposes in every direction, in parallel, keeping input order.
pub fn decompose_all(m: &TranslationSurface, directions: &[Vec2], bound_sq: &Scalar) -> Vec<Decomposition> {
    thread_pool().install(|| directions.par_iter().map(|v| decompose(m, v, bound_sq)).collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rule {
    /// The surface's own period vector `[ω]`.
    PeriodForm,
    /// `η_C` for the full cylinder set of a certified periodic direction.
    CertifiedPeriodic,
}

impl Rule {
    pub fn name(self) -> &'static str {
        match self {
            Rule::PeriodForm => "PeriodForm",
            Rule::CertifiedPeriodic => "CertifiedPeriodic",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Generator {
    pub direction: Option<Vec2>,
    pub rule: Rule,
    pub num_cylinders: usize,
    pub cocycle: Cocycle,
    /// Whether this generator raised the span dimension when inserted.
    pub new_dimension: bool,
}

/// A direction that was decomposed but not used as a generator.
#[derive(Clone, Debug)]
pub struct Skipped {
    pub direction: Vec2,
    pub status: DecompositionStatus,
    pub num_cylinders: usize,
    /// Set when the direction was periodic but `η` failed to vanish on its saddle connections.
    pub invariant_failed: bool,
}

#[derive(Clone, Debug)]
pub struct TangentSpan {
    pub frame_hash: String,
    pub genus: usize,
    pub generators: Vec<Generator>,
    pub skipped: Vec<Skipped>,
    span: Span<Complex>,
    p_span: Span<Complex>,
}

impl TangentSpan {
    /// `span_C{[ω]}`.
    pub fn new(m: &TranslationSurface, frame: &HomologyFrame) -> Self {
        let mut s = TangentSpan {
            frame_hash: frame.hash().to_string(),
            genus: frame.genus(),
            generators: Vec::new(),
            skipped: Vec::new(),
            span: Span::new(frame.rank()),
            p_span: Span::new(frame.absolute_basis().len()),
        };
        s.insert(frame, None, Rule::PeriodForm, 0, frame.period_map(m));
        s
    }

    fn insert(&mut self, frame: &HomologyFrame, direction: Option<Vec2>, rule: Rule, num_cylinders: usize, cocycle: Cocycle) {
        let new_dimension = self.span.insert(&cocycle.values);
        self.p_span.insert(&frame.project_absolute(&cocycle));
        self.generators.push(Generator { direction, rule, num_cylinders, cocycle, new_dimension });
    }

    /// Adds `η` of a decomposition if it is certified periodic; otherwise records it as skipped.
    pub fn add_decomposition(&mut self, frame: &HomologyFrame, d: &Decomposition) {
        let skip = |invariant_failed| Skipped {
            direction: d.direction.clone(),
            status: d.status,
            num_cylinders: d.cylinders.len(),
            invariant_failed,
        };
        if d.status != DecompositionStatus::Periodic {
            self.skipped.push(skip(false));
            return;
        }
        let e = eta(frame, d, None).expect("decomposition computed in this frame");
        let vanishes = d
            .saddle_connections
            .iter()
            .flatten()
            .all(|sc| e.eval(&frame.chain_coords(&sc.chain)) == Complex::default());
        if !vanishes {
            self.skipped.push(skip(true));
            return;
        }
        self.insert(frame, Some(d.direction.clone()), Rule::CertifiedPeriodic, d.cylinders.len(), e);
    }

    /// Union of two spans over the same frame.
    pub fn merge(&mut self, frame: &HomologyFrame, other: &TangentSpan) {
        assert_eq!(self.frame_hash, other.frame_hash, "spans from different frames");
        for g in other.generators.iter().filter(|g| g.rule != Rule::PeriodForm) {
            self.insert(frame, g.direction.clone(), g.rule, g.num_cylinders, g.cocycle.clone());
        }
        self.skipped.extend(other.skipped.iter().cloned());
    }

    pub fn dim(&self) -> usize {
        self.span.dim()
    }

    pub fn p_dim(&self) -> usize {
        self.p_span.dim()
    }

    pub fn basis(&self) -> &[Vec<Complex>] {
        self.span.basis()
    }

    pub fn contains(&self, c: &Cocycle) -> bool {
        self.span.contains(&c.values)
    }
}

/// Tangent span generated by `[ω]` and the `η` of each certified periodic direction.
pub fn accumulate_tangent(
    m: &TranslationSurface,
    frame: &HomologyFrame,
    directions: &[Vec2],
    bound_sq: &Scalar,
) -> TangentSpan {
    let mut span = TangentSpan::new(m, frame);
    for d in decompose_all(m, directions, bound_sq) {
        span.add_decomposition(frame, &d);
    }
    span
}

/// `⌈ dim_C p(span) / 2 ⌉`.
pub fn rank_lower_bound(span: &TangentSpan) -> usize {
    span.p_dim().div_ceil(2)
}

/// Whether `p(η_C)` lies outside `span_C(Re p[ω], Im p[ω])`.
pub fn independence_check(
    m: &TranslationSurface,
    frame: &HomologyFrame,
    d: &Decomposition,
    subset: Option<&[usize]>,
) -> bool {
    assert!(!d.cylinders.is_empty(), "independence check needs a cylinder");
    let pe = frame.project_absolute(&eta(frame, d, subset).expect("decomposition computed in this frame"));
    let pw = frame.project_absolute(&frame.period_map(m));
    let mut s = Span::new(pw.len());
    s.insert(&pw.iter().map(|z| Complex::real(z.re.clone())).collect::<Vec<_>>());
    s.insert(&pw.iter().map(|z| Complex::real(z.im.clone())).collect::<Vec<_>>());
    !s.contains(&pe)
}

/// All pairings among `p(η_{C_i})` vanish.
pub fn isotropy_check(frame: &HomologyFrame, d: &Decomposition) -> bool {
    let ps: Vec<Vec<Complex>> = (0..d.cylinders.len())
        .map(|i| frame.project_absolute(&eta(frame, d, Some(&[i])).expect("decomposition computed in this frame")))
        .collect();
    ps.iter().all(|a| ps.iter().all(|b| frame.cohomology_pairing(a, b) == Complex::default()))
}

#[derive(Clone, Debug)]
pub struct FieldReport {
    pub direction: Vec2,
    pub circumferences: Vec<Scalar>,
    /// `c_i / c_1`.
    pub ratios: Vec<Scalar>,
    /// `"Q"` or `"Q(√d)"`.
    pub field: String,
    pub single_cylinder: bool,
}

impl FieldReport {
    pub fn is_rational(&self) -> bool {
        self.field == "Q"
    }
}

pub fn field_bound(d: &Decomposition) -> FieldReport {
    let cs = d.circumferences();
    assert!(!cs.is_empty(), "field bound needs a cylinder");
    let ratios: Vec<Scalar> = cs.iter().map(|c| c / &cs[0]).collect();
    let field = match ratios.iter().find(|r| !r.is_rational()) {
        None => "Q".to_string(),
        Some(r) => format!("Q(√{})", r.d()),
    };
    FieldReport { direction: d.direction.clone(), single_cylinder: cs.len() == 1, circumferences: cs, ratios, field }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScanClass {
    Periodic,
    HasCylinderNotCertifiedPeriodic,
    NoCylinderFound,
}

impl ScanClass {
    pub fn name(self) -> &'static str {
        match self {
            ScanClass::Periodic => "Periodic",
            ScanClass::HasCylinderNotCertifiedPeriodic => "HasCylinderNotCertifiedPeriodic",
            ScanClass::NoCylinderFound => "NoCylinderFound",
        }
    }

    pub fn of(d: &Decomposition) -> Self {
        match d.status {
            DecompositionStatus::Periodic => ScanClass::Periodic,
            _ if d.cylinders.is_empty() => ScanClass::NoCylinderFound,
            _ => ScanClass::HasCylinderNotCertifiedPeriodic,
        }
    }
}

#[derive(Clone, Debug)]
pub struct PeriodicityReport {
    pub decompositions: Vec<Decomposition>,
    pub classes: Vec<ScanClass>,
}

impl PeriodicityReport {
    pub fn count(&self, c: ScanClass) -> usize {
        self.classes.iter().filter(|&&x| x == c).count()
    }

    pub fn offending(&self) -> Vec<&Vec2> {
        self.decompositions
            .iter()
            .zip(&self.classes)
            .filter(|(_, &c)| c == ScanClass::HasCylinderNotCertifiedPeriodic)
            .map(|(d, _)| &d.direction)
            .collect()
    }
}

pub fn complete_periodicity_scan(m: &TranslationSurface, max_len_sq: &Scalar, bound_sq: &Scalar) -> PeriodicityReport {
    let dirs = enumerate_directions(m, max_len_sq);
    let decompositions = decompose_all(m, &dirs, bound_sq);
    let classes = decompositions.iter().map(ScanClass::of).collect();
    PeriodicityReport { decompositions, classes }
}

#[derive(Clone, Debug)]
pub struct ParabolicityEntry {
    pub direction: Vec2,
    pub moduli: Vec<Scalar>,
    /// First pair `(i, j)` with `m_i / m_j ∉ Q`.
    pub failure: Option<(usize, usize)>,
}

#[derive(Clone, Debug)]
pub struct ParabolicityReport {
    pub entries: Vec<ParabolicityEntry>,
}

impl ParabolicityReport {
    pub fn pass(&self) -> bool {
        self.entries.iter().all(|e| e.failure.is_none())
    }

    pub fn first_failure(&self) -> Option<&ParabolicityEntry> {
        self.entries.iter().find(|e| e.failure.is_some())
    }
}

pub fn moduli_failure(moduli: &[Scalar]) -> Option<(usize, usize)> {
    (1..moduli.len()).find(|&i| !(&moduli[i] / &moduli[0]).is_rational()).map(|i| (0, i))
}

pub fn complete_parabolicity_check(m: &TranslationSurface, max_len_sq: &Scalar, bound_sq: &Scalar) -> ParabolicityReport {
    parabolicity_of(&complete_periodicity_scan(m, max_len_sq, bound_sq))
}

pub fn parabolicity_of(scan: &PeriodicityReport) -> ParabolicityReport {
    let entries = scan
        .decompositions
        .iter()
        .filter(|d| d.status == DecompositionStatus::Periodic)
        .map(|d| {
            let moduli = d.moduli();
            ParabolicityEntry { direction: d.direction.clone(), failure: moduli_failure(&moduli), moduli }
        })
        .collect();
    ParabolicityReport { entries }
}

#[derive(Clone, Debug)]
pub struct MoreCylinders {
    pub cp_dim: usize,
    pub tw_dim: usize,
    /// `ε` values tried, largest first.
    pub attempted: Vec<Scalar>,
    /// The deformed surface and a decomposition with more cylinders.
    pub found: Option<(TranslationSurface, Decomposition)>,
}

impl MoreCylinders {
    pub fn hypothesis_holds(&self) -> bool {
        self.cp_dim > self.tw_dim
    }
}

/// Deforms along `i·ε·η` for some `η` preserving the cylinders but not in the
/// twist space, then looks for a periodic direction with more cylinders.
/// Best effort: finding nothing proves nothing.
pub fn more_cylinders_search(
    m: &TranslationSurface,
    frame: &HomologyFrame,
    d: &Decomposition,
    eps: &Scalar,
    ladder: usize,
    candidates: &[Vec2],
) -> Result<MoreCylinders, crate::deformation::DeformationError> {
    let tw = twist_space(frame, d, None)?;
    let cp = cylinder_preserving_space(frame, d, None)?;
    let mut out = MoreCylinders { cp_dim: cp.dim, tw_dim: tw.dim, attempted: Vec::new(), found: None };
    if !out.hypothesis_holds() {
        return Ok(out);
    }
    let mut tw_span = Span::new(frame.rank());
    for v in &tw.basis {
        tw_span.insert(v);
    }
    let eta_n = cp.basis.iter().find(|v| !tw_span.contains(v)).expect("CP strictly contains Tw").clone();
    let v = &d.direction;
    let n2 = v.norm_sq();
    // i·η, carried from the normalized frame back to the surface
    let zeta = Cocycle::real(frame, eta_n).scale(&Complex::new(-&v.y / &n2, &v.x / &n2));
    let mut e = eps.clone();
    for _ in 0..ladder.max(1) {
        out.attempted.push(e.clone());
        match frame.deform_from_periods(m, &zeta, &e) {
            Ok(mp) => {
                let periods = frame.period_map(&mp);
                let persist = d.cylinders.iter().all(|c| {
                    let hol = Vec2::from_complex(&periods.eval(&c.core_class));
                    v.cross(&hol).is_zero() && !hol.is_zero()
                });
                if persist {
                    let mut dirs = vec![v.clone()];
                    dirs.extend(candidates.iter().filter(|c| *c != v).cloned());
                    let bound = crate::cylinder::default_bound_sq(&mp);
                    let found = decompose_all(&mp, &dirs, &bound)
                        .into_iter()
                        .find(|nd| nd.status == DecompositionStatus::Periodic && nd.cylinders.len() > d.cylinders.len());
                    if let Some(nd) = found {
                        out.found = Some((mp, nd));
                        return Ok(out);
                    }
                }
            }
            Err(SurfaceError::DeformationTooLarge(_)) => {}
            Err(err) => return Err(err.into()),
        }
        e = &e / &Scalar::from_int(2);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cylinder::default_bound_sq;
    use crate::surface::{l_shape, square_tiled, Permutation};

    fn origami(h: &str, v: &str, n: usize) -> TranslationSurface {
        square_tiled(&Permutation::from_cycles(n, h).unwrap(), &Permutation::from_cycles(n, v).unwrap()).unwrap()
    }

    fn golden_l() -> TranslationSurface {
        let phi = Scalar::quad(1, 2, 1, 2, 5);
        let one = Scalar::one();
        l_shape(&phi, &one, &one, &(&phi - &one)).unwrap()
    }

    fn tangent(m: &TranslationSurface, dirs: &[Vec2]) -> TangentSpan {
        accumulate_tangent(m, &HomologyFrame::new(m), dirs, &default_bound_sq(m))
    }

    #[test]
    fn tangent_examples() {
        let torus = origami("", "", 1);
        let s = tangent(&torus, &[Vec2::ints(1, 0)]);
        assert_eq!((s.dim(), rank_lower_bound(&s)), (2, 1));
        let l = origami("(1 2)", "(1 3)", 3);
        let s = tangent(&l, &[Vec2::ints(1, 0), Vec2::ints(0, 1), Vec2::ints(1, 1)]);
        assert_eq!((s.dim(), s.p_dim(), rank_lower_bound(&s)), (2, 2, 1));
        assert_eq!(s.generators.len(), 4);
        let s = tangent(&l, &[]);
        assert_eq!((s.dim(), rank_lower_bound(&s)), (1, 1));
    }

    #[test]
    fn merge_matches_single_run() {
        let l = origami("(1 2)", "(1 3)", 3);
        let f = HomologyFrame::new(&l);
        let mut a = tangent(&l, &[Vec2::ints(1, 0)]);
        let b = tangent(&l, &[Vec2::ints(0, 1), Vec2::ints(1, 1)]);
        a.merge(&f, &b);
        let c = tangent(&l, &[Vec2::ints(1, 1), Vec2::ints(0, 1), Vec2::ints(1, 0)]);
        assert_eq!((a.dim(), a.p_dim()), (c.dim(), c.p_dim()));
        assert_eq!(a.generators.len(), c.generators.len());
    }

    #[test]
    fn full_horizontal_eta_is_imaginary_part_of_periods() {
        for m in [origami("", "", 1), origami("(1 2)", "(1 3)", 3), golden_l(), origami("(1 2 3)", "(1 2)", 3)] {
            let f = HomologyFrame::new(&m);
            let d = decompose(&m, &Vec2::ints(1, 0), &default_bound_sq(&m));
            let im = Cocycle::real(&f, f.period_map(&m).imag_part());
            assert_eq!(eta(&f, &d, None).unwrap(), im);
        }
    }

    #[test]
    fn independence_examples() {
        let torus = origami("", "", 1);
        let f = HomologyFrame::new(&torus);
        let d = decompose(&torus, &Vec2::ints(1, 0), &default_bound_sq(&torus));
        assert!(!independence_check(&torus, &f, &d, None));
        let l = origami("(1 2)", "(1 3)", 3);
        let f = HomologyFrame::new(&l);
        let d = decompose(&l, &Vec2::ints(1, 0), &default_bound_sq(&l));
        let bottom = d.cylinders.iter().position(|c| c.circumference == Scalar::from_int(2)).unwrap();
        assert!(independence_check(&l, &f, &d, Some(&[bottom])));
        assert!(isotropy_check(&f, &d));
    }

    #[test]
    fn field_reports() {
        let l = origami("(1 2)", "(1 3)", 3);
        let d = decompose(&l, &Vec2::ints(1, 0), &default_bound_sq(&l));
        assert_eq!(field_bound(&d).field, "Q");
        let g = golden_l();
        let d = decompose(&g, &Vec2::ints(1, 0), &default_bound_sq(&g));
        assert_eq!(field_bound(&d).field, "Q(√5)");
        let torus = origami("", "", 1);
        let d = decompose(&torus, &Vec2::ints(1, 2), &default_bound_sq(&torus));
        let r = field_bound(&d);
        assert!(r.single_cylinder && r.is_rational());
    }

    #[test]
    fn torus_scan_all_periodic() {
        let torus = origami("", "", 1);
        let r = complete_periodicity_scan(&torus, &Scalar::from_int(10), &default_bound_sq(&torus));
        assert_eq!(r.count(ScanClass::Periodic), r.classes.len());
        assert!(complete_parabolicity_check(&torus, &Scalar::from_int(10), &default_bound_sq(&torus)).pass());
    }

    #[test]
    fn more_cylinders_on_marked_torus() {
        let m = origami("(1 2)", "", 2);
        let f = HomologyFrame::new(&m);
        let d = decompose(&m, &Vec2::ints(1, 0), &default_bound_sq(&m));
        let r = more_cylinders_search(&m, &f, &d, &Scalar::from_ratio(1, 2), 6, &[]).unwrap();
        assert!(r.hypothesis_holds());
        let (_, nd) = r.found.expect("second cylinder appears");
        assert_eq!(nd.cylinders.len(), 2);

        let l = origami("(1 2)", "(1 3)", 3);
        let f = HomologyFrame::new(&l);
        let d = decompose(&l, &Vec2::ints(1, 0), &default_bound_sq(&l));
        let r = more_cylinders_search(&l, &f, &d, &Scalar::from_ratio(1, 2), 6, &[]).unwrap();
        assert!(!r.hypothesis_holds() && r.found.is_none() && r.attempted.is_empty());

        let r = more_cylinders_search(&m, &f_of(&m), &d_of(&m), &Scalar::from_int(1000), 2, &[]).unwrap();
        assert!(r.found.is_none());
        assert_eq!(r.attempted, vec![Scalar::from_int(1000), Scalar::from_int(500)]);
    }

    fn f_of(m: &TranslationSurface) -> HomologyFrame {
        HomologyFrame::new(m)
    }

    fn d_of(m: &TranslationSurface) -> Decomposition {
        decompose(m, &Vec2::ints(1, 0), &default_bound_sq(m))
    }
}
