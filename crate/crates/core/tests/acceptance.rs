//! Acceptance criteria, one PASS/FAIL line each.
//!
//! Criteria listed in `KNOWN_FAILURES` are expected to print FAIL; the target
//! exits nonzero if any other criterion fails or a known failure starts passing.

mod common;

use std::time::{Duration, Instant};

use num_rational::BigRational;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use common::*;
use flatdef::cylinder::{decompose, default_bound_sq, Decomposition, DecompositionStatus};
use flatdef::deformation::{torus_closure, verify_linearity, CylinderForm};
use flatdef::delaunay::translation_equivalent;
use flatdef::geom::Vec2;
use flatdef::homology::{Cocycle, HomologyFrame};
use flatdef::io::{surface_from_json, surface_to_json};
use flatdef::linalg::{span_rank, Complex, Span};
use flatdef::orbit::{accumulate_tangent, complete_periodicity_scan, decompose_all, field_bound, isotropy_check, rank_lower_bound};
use flatdef::report::{certificate_json, to_text};
use flatdef::saddle::enumerate_directions;
use flatdef::scalar::Scalar;
use flatdef::surface::TranslationSurface;

const KNOWN_FAILURES: &[u32] = &[4];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn timed(limit: Duration, f: impl FnOnce() -> Outcome) -> Outcome {
    let start = Instant::now();
    let mut o = f();
    let took = start.elapsed();
    o.detail = format!("{} [{:.2}s, limit {}s]", o.detail, took.as_secs_f64(), limit.as_secs());
    o.pass &= took < limit;
    o
}

fn corpus_scan(r2: i64) -> Vec<(TranslationSurface, HomologyFrame, Vec<Decomposition>)> {
    all_fixtures()
        .into_iter()
        .map(|m| {
            let f = HomologyFrame::new(&m);
            let dirs = enumerate_directions(&m, &Scalar::from_int(r2));
            let ds = decompose_all(&m, &dirs, &default_bound_sq(&m));
            (m, f, ds)
        })
        .collect()
}

fn shear_linearity() -> Outcome {
    let mut checked = 0;
    for m in [torus(), l_origami(), golden_l()] {
        let f = HomologyFrame::new(&m);
        for v in [Vec2::ints(1, 0), Vec2::ints(0, 1), Vec2::ints(1, 1)] {
            let d = decompose(&m, &v, &default_bound_sq(&m));
            if d.status != DecompositionStatus::Periodic {
                return outcome(false, format!("{:?} not certified on {:?}", v, m.label()));
            }
            for t in [Scalar::from_ratio(1, 3), Scalar::from_ratio(7, 5)] {
                if !verify_linearity(&m, &f, &d, None, &t).unwrap() {
                    return outcome(false, format!("linearity failed on {:?} {:?} t={t}", m.label(), v));
                }
                checked += 1;
            }
        }
    }
    outcome(checked == 18, format!("{checked}/18 exact checks"))
}

fn dehn_twist() -> Outcome {
    let mut ok = Vec::new();
    for (m, t) in [(torus(), 1), (l_origami(), 2)] {
        let f = HomologyFrame::new(&m);
        let d = decompose(&m, &Vec2::ints(1, 0), &default_bound_sq(&m));
        let sheared = CylinderForm::new(&f, &d).unwrap().shear(&(0..d.cylinders.len()).collect::<Vec<_>>(), &Scalar::from_int(t)).unwrap();
        ok.push(translation_equivalent(&m, &sheared));
    }
    outcome(ok.iter().all(|&x| x), format!("torus t=1: {}, L t=2: {}", ok[0], ok[1]))
}

fn isotropy() -> Outcome {
    let mut n = 0;
    for (m, f, ds) in corpus_scan(10) {
        for d in ds.iter().filter(|d| d.status == DecompositionStatus::Periodic) {
            if !isotropy_check(&f, d) {
                return outcome(false, format!("nonzero pairing on {:?} {:?}", m.label(), d.direction));
            }
            n += 1;
        }
    }
    outcome(n > 0, format!("{n} periodic decompositions, all pairings 0"))
}

fn rank_certificate() -> Outcome {
    let r2 = Scalar::from_int(10);
    let cert = |m: &TranslationSurface| {
        let f = HomologyFrame::new(m);
        let s = accumulate_tangent(m, &f, &enumerate_directions(m, &r2), &default_bound_sq(m));
        (s.dim(), s.p_dim(), rank_lower_bound(&s))
    };
    let l = cert(&l_origami());
    let t = cert(&torus());
    outcome(
        l == (4, 4, 2) && t.2 == 1,
        format!(
            "3-square L: dim_C {}, p-dim {}, k_lb {} (expected 4, 4, 2); torus k_lb {}. Full-direction η equals Im ω in the normalized frame, so the span never exceeds span(ω, ω̄)",
            l.0, l.1, l.2, t.2
        ),
    )
}

fn bookkeeping() -> Outcome {
    for m in all_fixtures() {
        let f = HomologyFrame::new(&m);
        let sd = m.singularities();
        let g = sd.genus as usize;
        let s = sd.num_singularities();
        let cone_sum: u32 = sd.cone_orders.iter().sum();
        let duals: Vec<Vec<Complex>> = (0..f.rank()).map(|j| f.project_absolute(&Cocycle::dual(&f, j))).collect();
        let p_rank = span_rank(f.absolute_basis().len(), &duals);
        if f.rank() != 2 * g + s - 1 || p_rank != 2 * g || cone_sum as usize != 2 * g - 2 {
            return outcome(false, format!("{:?}: m={} g={g} s={s} p-rank={p_rank} Σ={cone_sum}", m.label(), f.rank()));
        }
    }
    let mut n = 0;
    for (m, _, ds) in corpus_scan(10) {
        for d in ds.iter().filter(|d| d.status == DecompositionStatus::Periodic) {
            let expected = &m.area() * &d.direction.norm_sq();
            if d.cylinder_area() != expected || d.normalized_area() != expected {
                return outcome(false, format!("area mismatch on {:?} {:?}", m.label(), d.direction));
            }
            n += 1;
        }
    }
    outcome(true, format!("5 fixtures, {n} periodic area identities"))
}

fn golden_periodicity() -> Outcome {
    let m = golden_l();
    let bound = &m.longest_edge_sq() * &Scalar::from_int(2500);
    let scan = complete_periodicity_scan(&m, &Scalar::from_int(10), &bound);
    let bad = scan.offending().len();
    let h = decompose(&m, &Vec2::ints(1, 0), &bound);
    let target = &phi() - &Scalar::one();
    let moduli = h.moduli();
    let equal = moduli.len() == 2 && moduli.iter().all(|x| *x == target);
    let ratio_ok = equal && (&moduli[0] / &moduli[1]).is_one();
    outcome(
        bad == 0 && equal && ratio_ok,
        format!("{} directions, {bad} with uncertified cylinders; horizontal moduli {:?}", scan.classes.len(), moduli),
    )
}

fn field_bounds() -> Outcome {
    let mut singles = 0;
    for (m, _, ds) in corpus_scan(10) {
        let square_tiled = m.field().is_rational();
        for d in ds.iter().filter(|d| !d.cylinders.is_empty()) {
            let r = field_bound(d);
            if r.single_cylinder {
                singles += 1;
            }
            if (r.single_cylinder || square_tiled) && !r.is_rational() {
                return outcome(false, format!("{:?} {:?} reports {}", m.label(), d.direction, r.field));
            }
        }
    }
    let g = golden_l();
    let h = field_bound(&decompose(&g, &Vec2::ints(1, 0), &default_bound_sq(&g)));
    outcome(h.field == "Q(√5)", format!("{singles} single-cylinder directions all Q; golden L horizontal {}", h.field))
}

/// Relation rank by exhaustive search: integer coefficients in `[-20, 20]` on
/// all but the last modulus, last coefficient solved for exactly.
fn brute_force_dim(moduli: &[(i64, i64)]) -> usize {
    let r = moduli.len();
    let (xr, yr) = moduli[r - 1];
    let mut span: Span<Scalar> = Span::new(r);
    let mut a = vec![-20i64; r - 1];
    if r == 1 {
        return 1;
    }
    loop {
        let (sx, sy) = a.iter().zip(moduli).fold((0i64, 0i64), |(sx, sy), (&c, &(x, y))| (sx + c * x, sy + c * y));
        if a.iter().any(|&c| c != 0) && sx * yr == sy * xr {
            let last = BigRational::new((-sx).into(), xr.into());
            let mut v: Vec<Scalar> = a.iter().map(|&c| Scalar::from_int(c)).collect();
            v.push(Scalar::rational(last));
            span.insert(&v);
            if span.dim() == r - 1 {
                break;
            }
        }
        let mut i = 0;
        while i < r - 1 && a[i] == 20 {
            a[i] = -20;
            i += 1;
        }
        if i == r - 1 {
            break;
        }
        a[i] += 1;
    }
    r - span.dim()
}

fn torus_closure_oracle() -> Outcome {
    let mut rng = StdRng::seed_from_u64(7);
    let mut mismatches = Vec::new();
    for case in 0..50 {
        let r = rng.gen_range(1..=5);
        let quadratic = case % 2 == 1;
        let den = rng.gen_range(1..=4);
        let ints: Vec<(i64, i64)> = (0..r)
            .map(|_| (rng.gen_range(1..=4), if quadratic { rng.gen_range(0..=2) } else { 0 }))
            .collect();
        let moduli: Vec<Scalar> =
            ints.iter().map(|&(x, y)| &Scalar::quad(x, den, y, den, if quadratic { 5 } else { 0 }) * &Scalar::one()).collect();
        let got = torus_closure(&moduli).dim;
        let want = brute_force_dim(&ints);
        if got != want {
            mismatches.push(format!("case {case}: {moduli:?} got {got} want {want}"));
        }
    }
    outcome(mismatches.is_empty(), if mismatches.is_empty() { "50/50 agree".to_string() } else { mismatches.join("; ") })
}

fn order_invariance() -> Outcome {
    for m in all_fixtures() {
        let f = HomologyFrame::new(&m);
        let bound = default_bound_sq(&m);
        let dirs = enumerate_directions(&m, &Scalar::from_int(5));
        let base = accumulate_tangent(&m, &f, &dirs, &bound);
        let mut rev = dirs.clone();
        rev.reverse();
        let mut rot = dirs.clone();
        rot.rotate_left(dirs.len() / 2);
        for perm in [rev, rot] {
            let s = accumulate_tangent(&m, &f, &perm, &bound);
            if (s.dim(), s.p_dim()) != (base.dim(), base.p_dim()) {
                return outcome(false, format!("{:?} differs under permutation", m.label()));
            }
        }
    }
    outcome(true, "5 fixtures, reversed and rotated direction lists")
}

fn round_trip() -> Outcome {
    for m in all_fixtures() {
        let a = surface_to_json(&m);
        let b = surface_to_json(&surface_from_json(&a).unwrap());
        if a != b || surface_from_json(&a).unwrap() != m {
            return outcome(false, format!("surface file for {:?} not stable", m.label()));
        }
        let f = HomologyFrame::new(&m);
        let bound = default_bound_sq(&m);
        let r2 = Scalar::from_int(5);
        let dirs = enumerate_directions(&m, &r2);
        let c1 = to_text(&certificate_json(&accumulate_tangent(&m, &f, &dirs, &bound), &r2, &bound, &decompose_all(&m, &dirs, &bound)));
        let c2 = to_text(&certificate_json(&accumulate_tangent(&m, &f, &dirs, &bound), &r2, &bound, &decompose_all(&m, &dirs, &bound)));
        if c1 != c2 {
            return outcome(false, format!("certificate for {:?} not deterministic", m.label()));
        }
    }
    let mut rng = StdRng::seed_from_u64(10);
    for _ in 0..1000 {
        let d = [0u32, 2, 3, 5, 6, 7][rng.gen_range(0..6)];
        let x = Scalar::quad(
            rng.gen_range(-10_000..=10_000),
            rng.gen_range(1..=999),
            if d == 0 { 0 } else { rng.gen_range(-10_000..=10_000) },
            rng.gen_range(1..=999),
            d,
        );
        if x.to_string().parse::<Scalar>().as_ref() != Ok(&x) {
            return outcome(false, format!("scalar {x} does not round-trip"));
        }
    }
    outcome(true, "5 surface files and certificates stable; 1000 scalars round-trip")
}

fn main() {
    let s = Duration::from_secs;
    let criteria: Vec<(u32, &str, Box<dyn FnOnce() -> Outcome>)> = vec![
        (1, "shear linearity", Box::new(move || timed(s(5), shear_linearity))),
        (2, "Dehn-twist return", Box::new(move || timed(s(10), dehn_twist))),
        (3, "isotropy of twist cocycles", Box::new(isotropy)),
        (4, "rank certificate", Box::new(move || timed(s(30), rank_certificate))),
        (5, "dimension bookkeeping", Box::new(bookkeeping)),
        (6, "golden L complete periodicity", Box::new(move || timed(s(60), golden_periodicity))),
        (7, "field bounds", Box::new(field_bounds)),
        (8, "torus-closure oracle", Box::new(move || timed(s(120), torus_closure_oracle))),
        (9, "order invariance", Box::new(order_invariance)),
        (10, "round-trip and determinism", Box::new(round_trip)),
    ];
    let mut unexpected = Vec::new();
    for (n, name, f) in criteria {
        let o = f();
        println!("criterion {n:>2} {}: {name}: {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        if o.pass == KNOWN_FAILURES.contains(&n) {
            unexpected.push(n);
        }
    }
    if !unexpected.is_empty() {
        eprintln!("unexpected results for criteria {unexpected:?}");
        std::process::exit(1);
    }
}
