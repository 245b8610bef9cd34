//! Cylinder shears and stretches, and the cocycles they move along.

use num_bigint::BigInt;
use num_rational::BigRational;
use thiserror::Error;

use crate::cylinder::{Cylinder, Decomposition, DecompositionStatus};
use crate::geom::Vec2;
use crate::homology::{Cocycle, HomologyFrame};
use crate::linalg::{rational_relation_lattice, span_rank, Complex, ExactMatrix, Matrix, RelationLattice};
use crate::scalar::Scalar;
use crate::surface::{EdgeRef, SurfaceError, TranslationSurface};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DeformationError {
    #[error("stretch factor 1+s must be positive")]
    DegenerateCylinder,
    #[error("direction is not certified periodic")]
    NotPeriodic,
    #[error("no cylinder with id {0}")]
    UnknownCylinder(usize),
    #[error("decomposition was computed in a different homology frame")]
    FrameMismatch,
    #[error(transparent)]
    Surface(#[from] SurfaceError),
}

impl DeformationError {
    pub fn name(&self) -> &'static str {
        match self {
            DeformationError::DegenerateCylinder => "DegenerateCylinder",
            DeformationError::NotPeriodic => "NotPeriodic",
            DeformationError::UnknownCylinder(_) => "UnknownCylinder",
            DeformationError::FrameMismatch => "FrameMismatch",
            DeformationError::Surface(e) => e.name(),
        }
    }
}

/// Multiplies a cocycle computed in the normalized frame back to the
/// original surface: values become `value · (v_x + i v_y) / |v|²`.
fn transport(frame: &HomologyFrame, d: &Decomposition, real_values: Vec<Scalar>) -> Cocycle {
    let v = &d.direction;
    let n2 = v.norm_sq();
    let w = Complex::new(&v.x / &n2, &v.y / &n2);
    Cocycle::real(frame, real_values).scale(&w)
}

fn check_frame(frame: &HomologyFrame, d: &Decomposition) -> Result<(), DeformationError> {
    if frame.hash() != d.frame_hash {
        return Err(DeformationError::FrameMismatch);
    }
    Ok(())
}

fn select<'a>(d: &'a Decomposition, subset: Option<&[usize]>) -> Result<Vec<&'a Cylinder>, DeformationError> {
    match subset {
        None => Ok(d.cylinders.iter().collect()),
        Some(ids) => ids
            .iter()
            .map(|&i| d.cylinders.get(i).ok_or(DeformationError::UnknownCylinder(i)))
            .collect(),
    }
}

/// `I_α` for the core curve of a cylinder, as an integer cocycle.
pub fn intersection_cocycle(frame: &HomologyFrame, c: &Cylinder) -> Cocycle {
    Cocycle::real(frame, c.intersection.iter().map(|&x| Scalar::from_int(x)).collect())
}

/// `Σ h_i I_{α_i}` in the normalized frame, as a real vector.
pub fn eta_normalized(cyls: &[&Cylinder]) -> Vec<Scalar> {
    let m = cyls.first().map_or(0, |c| c.intersection.len());
    let mut out = vec![Scalar::zero(); m];
    for c in cyls {
        for (o, &x) in out.iter_mut().zip(&c.intersection) {
            if x != 0 {
                *o = &*o + &(&c.height * &Scalar::from_int(x));
            }
        }
    }
    out
}

/// `η_C`: the derivative of the cylinder shear of `C` in period coordinates.
/// `subset = None` takes every cylinder of the decomposition.
pub fn eta(frame: &HomologyFrame, d: &Decomposition, subset: Option<&[usize]>) -> Result<Cocycle, DeformationError> {
    check_frame(frame, d)?;
    let cyls = select(d, subset)?;
    if cyls.is_empty() {
        return Ok(Cocycle::zero(frame));
    }
    Ok(transport(frame, d, eta_normalized(&cyls)))
}

/// The surface cut into one polygon per cylinder, in the normalized frame,
/// together with the change of basis back to the original frame.
#[derive(Clone, Debug)]
pub struct CylinderForm {
    surface: TranslationSurface,
    /// Cross edge index in each cylinder polygon.
    cross_edge: Vec<usize>,
    /// Original-frame periods from cylinder-form periods.
    b_inv: ExactMatrix,
    frame_hash: String,
    g_inv: crate::geom::Mat2,
}

impl CylinderForm {
    pub fn new(frame: &HomologyFrame, d: &Decomposition) -> Result<Self, DeformationError> {
        check_frame(frame, d)?;
        if d.status != DecompositionStatus::Periodic {
            return Err(DeformationError::NotPeriodic);
        }
        let scs: Vec<_> = d.saddle_connections.iter().map(|s| s.as_ref().expect("periodic")).collect();
        let mut polys = Vec::with_capacity(d.cylinders.len());
        let mut bottom_at = vec![None; scs.len()];
        let mut top_at = vec![None; scs.len()];
        let mut cross_edge = Vec::new();
        let mut edge_chain: Vec<Vec<Vec<i64>>> = Vec::new();
        for (p, c) in d.cylinders.iter().enumerate() {
            let mut poly = Vec::new();
            let mut chains = Vec::new();
            for &s in &c.bottom {
                bottom_at[s] = Some(EdgeRef::new(p, poly.len()));
                poly.push(scs[s].holonomy.clone());
                chains.push(frame.chain_coords(&scs[s].chain));
            }
            cross_edge.push(poly.len());
            poly.push(Vec2::new(c.cross_offset.clone(), c.height.clone()));
            chains.push(c.cross_class.clone());
            for &s in c.top.iter().rev() {
                top_at[s] = Some(EdgeRef::new(p, poly.len()));
                poly.push(-&scs[s].holonomy);
                chains.push(frame.chain_coords(&scs[s].chain).iter().map(|x| -x).collect());
            }
            poly.push(Vec2::new(-&c.cross_offset, -&c.height));
            chains.push(c.cross_class.iter().map(|x| -x).collect());
            polys.push(poly);
            edge_chain.push(chains);
        }
        let mut gluing = Vec::new();
        for (p, c) in d.cylinders.iter().enumerate() {
            let k = cross_edge[p];
            gluing.push((EdgeRef::new(p, k), EdgeRef::new(p, polys[p].len() - 1)));
            let _ = c;
        }
        for s in 0..scs.len() {
            let (Some(b), Some(t)) = (bottom_at[s], top_at[s]) else {
                return Err(DeformationError::NotPeriodic);
            };
            gluing.push((b, t));
        }
        let surface = TranslationSurface::new(d.normalized.field(), polys, gluing, None)?;
        let fc = HomologyFrame::new(&surface);
        let m = frame.rank();
        assert_eq!(fc.rank(), m, "cutting along saddle connections keeps the marked points");
        let rows: Vec<Vec<Scalar>> = fc
            .basis_edge_classes()
            .iter()
            .map(|&e| {
                let r = surface.class_rep(e);
                edge_chain[r.poly][r.edge].iter().map(|&x| Scalar::from_int(x)).collect()
            })
            .collect();
        let b = Matrix::from_rows(m, rows);
        let b_inv = b.inverse().expect("cylinder form basis maps onto the original frame");
        Ok(CylinderForm {
            surface,
            cross_edge,
            b_inv,
            frame_hash: frame.hash().to_string(),
            g_inv: d.g.inverse().expect("normalizer is invertible"),
        })
    }

    /// The unmodified cylinder form, mapped back to the original coordinates.
    pub fn surface(&self) -> Result<TranslationSurface, DeformationError> {
        Ok(self.surface.gl2_action(&self.g_inv)?)
    }

    fn rebuild(&self, cyls: &[usize], f: impl Fn(&Vec2) -> Vec2) -> Result<TranslationSurface, DeformationError> {
        let mut polys = self.surface.polygons().to_vec();
        for &p in cyls {
            if p >= polys.len() {
                return Err(DeformationError::UnknownCylinder(p));
            }
            let k = self.cross_edge[p];
            let last = polys[p].len() - 1;
            let new = f(&polys[p][k]);
            polys[p][last] = -&new;
            polys[p][k] = new;
        }
        let mc = self.surface.with_edge_vectors(polys)?;
        Ok(mc.gl2_action(&self.g_inv)?)
    }

    /// Applies `[[1, t], [0, 1]]` inside the chosen cylinders.
    pub fn shear(&self, cyls: &[usize], t: &Scalar) -> Result<TranslationSurface, DeformationError> {
        self.rebuild(cyls, |v| Vec2::new(&v.x + &(t * &v.y), v.y.clone()))
    }

    /// Applies `[[1, 0], [0, 1 + s]]` inside the chosen cylinders.
    pub fn stretch(&self, cyls: &[usize], s: &Scalar) -> Result<TranslationSurface, DeformationError> {
        let f = Scalar::one() + s;
        if !f.is_positive() {
            return Err(DeformationError::DegenerateCylinder);
        }
        self.rebuild(cyls, |v| Vec2::new(v.x.clone(), &v.y * &f))
    }

    /// Periods of a rebuilt surface, expressed in the original frame.
    pub fn periods(&self, rebuilt: &TranslationSurface) -> Cocycle {
        let fc = HomologyFrame::new(rebuilt);
        let pc = fc.period_map(rebuilt).values;
        let m = pc.len();
        let values = (0..m)
            .map(|j| {
                let mut acc = Complex::default();
                for (k, p) in pc.iter().enumerate() {
                    let w = &self.b_inv[(j, k)];
                    if !w.is_zero() {
                        acc = &acc + &p.scale(w);
                    }
                }
                acc
            })
            .collect();
        Cocycle { frame: self.frame_hash.clone(), values }
    }
}

fn all_ids(d: &Decomposition, subset: Option<&[usize]>) -> Vec<usize> {
    subset.map_or_else(|| (0..d.cylinders.len()).collect(), <[usize]>::to_vec)
}

/// Cylinder shear `u_t^C`, rebuilt geometrically.
pub fn shear(
    frame: &HomologyFrame,
    d: &Decomposition,
    subset: Option<&[usize]>,
    t: &Scalar,
) -> Result<TranslationSurface, DeformationError> {
    let form = CylinderForm::new(frame, d)?;
    form.shear(&all_ids(d, subset), t)
}

/// Cylinder stretch with vertical factor `1 + s`, rebuilt geometrically.
pub fn stretch(
    frame: &HomologyFrame,
    d: &Decomposition,
    subset: Option<&[usize]>,
    s: &Scalar,
) -> Result<TranslationSurface, DeformationError> {
    let form = CylinderForm::new(frame, d)?;
    form.stretch(&all_ids(d, subset), s)
}

/// Checks `Φ(u_t^C M) = Φ(M) + t η_C` exactly.
pub fn verify_linearity(
    m: &TranslationSurface,
    frame: &HomologyFrame,
    d: &Decomposition,
    subset: Option<&[usize]>,
    t: &Scalar,
) -> Result<bool, DeformationError> {
    let form = CylinderForm::new(frame, d)?;
    let ids = all_ids(d, subset);
    let sheared = form.shear(&ids, t)?;
    let e = eta(frame, d, Some(&ids))?;
    let expected = frame.period_map(m).add(&e.scale(&Complex::real(t.clone())));
    Ok(form.periods(&sheared) == expected)
}

/// Checks `Φ(a^C M) = Φ(M) + s·i·η_C` exactly.
pub fn verify_stretch_linearity(
    m: &TranslationSurface,
    frame: &HomologyFrame,
    d: &Decomposition,
    subset: Option<&[usize]>,
    s: &Scalar,
) -> Result<bool, DeformationError> {
    let form = CylinderForm::new(frame, d)?;
    let ids = all_ids(d, subset);
    let stretched = form.stretch(&ids, s)?;
    let e = eta(frame, d, Some(&ids))?;
    let expected = frame.period_map(m).add(&e.scale(&Complex::new(Scalar::zero(), s.clone())));
    Ok(form.periods(&stretched) == expected)
}

/// A subspace of real cocycles, stored in the normalized frame.
#[derive(Clone, Debug)]
pub struct CocycleSpace {
    pub dim: usize,
    /// Basis vectors in the normalized frame (values on the frame basis).
    pub basis: Vec<Vec<Scalar>>,
}

/// `span_R(η_{C_i})`, optionally intersected with `{ζ : Eζ = 0}`.
pub fn twist_space(
    frame: &HomologyFrame,
    d: &Decomposition,
    equations: Option<&[Vec<Scalar>]>,
) -> Result<CocycleSpace, DeformationError> {
    check_frame(frame, d)?;
    if d.status != DecompositionStatus::Periodic {
        return Err(DeformationError::NotPeriodic);
    }
    let m = frame.rank();
    let etas: Vec<Vec<Scalar>> = d.cylinders.iter().map(|c| eta_normalized(&[c])).collect();
    let basis = match equations {
        None => etas,
        Some(eqs) if eqs.is_empty() => etas,
        Some(eqs) => {
            // Σ a_i η_i with E(Σ a_i η_i) = 0
            let e = Matrix::from_rows(m, eqs.to_vec());
            let h = Matrix::from_rows(m, etas.clone());
            let coeffs = e.matmul(&h.transpose()).row_reduce().null_space;
            coeffs
                .iter()
                .map(|a| {
                    (0..m)
                        .map(|j| a.iter().zip(&etas).map(|(ai, eta)| ai * &eta[j]).sum())
                        .collect()
                })
                .collect()
        }
    };
    let reduced = if basis.is_empty() { Vec::new() } else { Matrix::from_rows(m, basis).row_reduce().row_space };
    Ok(CocycleSpace { dim: reduced.len(), basis: reduced })
}

/// Real cocycles vanishing on every core curve, optionally intersected with `{ζ : Eζ = 0}`.
pub fn cylinder_preserving_space(
    frame: &HomologyFrame,
    d: &Decomposition,
    equations: Option<&[Vec<Scalar>]>,
) -> Result<CocycleSpace, DeformationError> {
    check_frame(frame, d)?;
    if d.status != DecompositionStatus::Periodic {
        return Err(DeformationError::NotPeriodic);
    }
    let m = frame.rank();
    let mut rows: Vec<Vec<Scalar>> =
        d.cylinders.iter().map(|c| c.core_class.iter().map(|&x| Scalar::from_int(x)).collect()).collect();
    if let Some(eqs) = equations {
        rows.extend(eqs.iter().cloned());
    }
    let null = Matrix::from_rows(m, rows).row_reduce().null_space;
    Ok(CocycleSpace { dim: null.len(), basis: null })
}

/// Whether every vector of `small` lies in `big`.
pub fn space_contains(big: &CocycleSpace, small: &CocycleSpace) -> bool {
    let n = small.basis.first().or(big.basis.first()).map_or(0, Vec::len);
    if small.basis.is_empty() {
        return true;
    }
    let mut all = big.basis.clone();
    all.extend(small.basis.iter().cloned());
    span_rank(n, &all) == big.dim
}

/// Closure data for the multi-twist torus of a set of parallel cylinders.
#[derive(Clone, Debug)]
pub struct TorusClosure {
    pub lattice: RelationLattice,
    /// Dimension of the closure, `dim A`.
    pub dim: usize,
    /// A nonzero rational point of `A`.
    pub t: Vec<BigRational>,
    /// `Σ t_i c_i I_{α_i}` when cylinders are supplied.
    pub cocycle: Option<Cocycle>,
}

/// Rational relations among the moduli and the allowed twist parameters.
pub fn torus_closure(moduli: &[Scalar]) -> TorusClosure {
    assert!(moduli.iter().all(Scalar::is_positive), "moduli must be positive");
    let lattice = rational_relation_lattice(moduli);
    let t = lattice.allowed[0].iter().map(|x| BigRational::from_integer(x.clone())).collect();
    TorusClosure { dim: lattice.dim_allowed(), lattice, t, cocycle: None }
}

/// `torus_closure` for the cylinders of a decomposition, with the induced cocycle.
pub fn torus_closure_for(frame: &HomologyFrame, d: &Decomposition) -> Result<TorusClosure, DeformationError> {
    check_frame(frame, d)?;
    let mut tc = torus_closure(&d.moduli());
    let m = frame.rank();
    let mut values = vec![Scalar::zero(); m];
    for (c, t) in d.cylinders.iter().zip(&tc.t) {
        let w = &c.circumference * &Scalar::rational(t.clone());
        for (o, &x) in values.iter_mut().zip(&c.intersection) {
            if x != 0 {
                *o = &*o + &(&w * &Scalar::from_int(x));
            }
        }
    }
    tc.cocycle = Some(transport(frame, d, values));
    Ok(tc)
}

/// Integer vector helper for reports.
pub fn lattice_rows(v: &[Vec<BigInt>]) -> Vec<Vec<String>> {
    v.iter().map(|r| r.iter().map(BigInt::to_string).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cylinder::{decompose, default_bound_sq};
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

    fn horizontal(m: &TranslationSurface) -> (HomologyFrame, Decomposition) {
        (HomologyFrame::new(m), decompose(m, &Vec2::ints(1, 0), &default_bound_sq(m)))
    }

    fn ints(v: &[i64]) -> Vec<Complex> {
        v.iter().map(|&x| Complex::real(Scalar::from_int(x))).collect()
    }

    #[test]
    fn torus_eta() {
        let m = torus();
        let (f, d) = horizontal(&m);
        assert_eq!(intersection_cocycle(&f, &d.cylinders[0]).values, ints(&[0, 1]));
        assert_eq!(eta(&f, &d, None).unwrap().values, ints(&[0, 1]));
        let core = &d.cylinders[0].core_class;
        assert!(intersection_cocycle(&f, &d.cylinders[0]).eval(core).re.is_zero());
    }

    #[test]
    fn l_origami_eta_vanishes_on_horizontal_classes() {
        let m = l_origami();
        let (f, d) = horizontal(&m);
        let e = eta(&f, &d, None).unwrap();
        for (j, &cls) in f.basis_edge_classes().iter().enumerate() {
            if m.class_holonomy(cls).y.is_zero() {
                assert!(e.values[j].re.is_zero());
            }
        }
        for c in &d.cylinders {
            assert_eq!(e.eval(&c.cross_class), Complex::real(Scalar::one()));
            let own = eta(&f, &d, Some(&[c.id])).unwrap();
            assert_eq!(own.eval(&c.cross_class), Complex::real(Scalar::one()));
        }
        for sc in d.saddle_connections.iter().flatten() {
            assert!(e.eval(&f.chain_coords(&sc.chain)).re.is_zero());
        }
    }

    #[test]
    fn shear_is_linear() {
        for m in [torus(), l_origami(), golden_l()] {
            for v in [Vec2::ints(1, 0), Vec2::ints(0, 1), Vec2::ints(1, 1)] {
                let f = HomologyFrame::new(&m);
                let d = decompose(&m, &v, &default_bound_sq(&m));
                for t in [Scalar::from_ratio(1, 3), Scalar::from_ratio(7, 5)] {
                    assert!(verify_linearity(&m, &f, &d, None, &t).unwrap(), "{v:?} {t:?}");
                }
                assert!(verify_stretch_linearity(&m, &f, &d, Some(&[0]), &Scalar::from_ratio(1, 2)).unwrap());
            }
        }
    }

    #[test]
    fn stretch_torus() {
        let m = torus();
        let (f, d) = horizontal(&m);
        let s = stretch(&f, &d, None, &Scalar::one()).unwrap();
        assert_eq!(s.area(), Scalar::from_int(2));
        let form = CylinderForm::new(&f, &d).unwrap();
        assert_eq!(form.periods(&s).values, vec![Complex::real(Scalar::one()), Complex::new(Scalar::zero(), Scalar::from_int(2))]);
        assert_eq!(stretch(&f, &d, None, &Scalar::from_int(-1)).unwrap_err(), DeformationError::DegenerateCylinder);
    }

    #[test]
    fn twist_and_cylinder_preserving_dimensions() {
        let (f, d) = horizontal(&torus());
        assert_eq!(twist_space(&f, &d, None).unwrap().dim, 1);
        assert_eq!(cylinder_preserving_space(&f, &d, None).unwrap().dim, 1);

        let (f, d) = horizontal(&l_origami());
        let tw = twist_space(&f, &d, None).unwrap();
        let cp = cylinder_preserving_space(&f, &d, None).unwrap();
        assert_eq!((tw.dim, cp.dim), (2, 2));
        assert!(space_contains(&cp, &tw));

        let (f, d) = horizontal(&golden_l());
        assert_eq!(twist_space(&f, &d, None).unwrap().dim, 2);

        let marked = square_tiled(&Permutation::from_cycles(2, "(1 2)").unwrap(), &Permutation::identity(2)).unwrap();
        let (f, d) = horizontal(&marked);
        assert_eq!(d.cylinders.len(), 1);
        assert_eq!(twist_space(&f, &d, None).unwrap().dim, 1);
        assert_eq!(cylinder_preserving_space(&f, &d, None).unwrap().dim, 2);
    }

    #[test]
    fn torus_closure_examples() {
        let tc = torus_closure(&[Scalar::from_ratio(1, 2), Scalar::one()]);
        assert_eq!(tc.dim, 1);
        assert_eq!(tc.lattice.allowed, vec![vec![BigInt::from(1), BigInt::from(2)]]);
        let tc = torus_closure(&[Scalar::one(), Scalar::quad(0, 1, 1, 1, 5)]);
        assert_eq!(tc.dim, 2);
        let g = Scalar::quad(-1, 2, 1, 2, 5);
        let tc = torus_closure(&[g.clone(), g]);
        assert_eq!(tc.dim, 1);
        assert_eq!(tc.lattice.allowed, vec![vec![BigInt::from(1), BigInt::from(1)]]);
    }

    #[test]
    fn torus_closure_cocycle_on_l_origami() {
        let m = l_origami();
        let (f, d) = horizontal(&m);
        let tc = torus_closure_for(&f, &d).unwrap();
        let c = tc.cocycle.unwrap();
        assert!(!c.is_zero());
        for cyl in &d.cylinders {
            assert!(c.eval(&cyl.core_class).re.is_zero());
        }
    }
}
