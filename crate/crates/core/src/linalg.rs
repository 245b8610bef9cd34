//! Exact linear algebra over `Q(√d)` and its complexification.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::scalar::Scalar;

/// The operations row reduction needs.
pub trait FieldElem: Clone + PartialEq + fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn inv(&self) -> Self;
    fn neg(&self) -> Self;
}

impl FieldElem for Scalar {
    fn zero() -> Self {
        Scalar::zero()
    }
    fn one() -> Self {
        Scalar::one()
    }
    fn is_zero(&self) -> bool {
        Scalar::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn inv(&self) -> Self {
        Scalar::inv(self)
    }
    fn neg(&self) -> Self {
        -self
    }
}

/// `re + i·im` with exact real and imaginary parts.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Complex {
    pub re: Scalar,
    pub im: Scalar,
}

impl Complex {
    pub fn new(re: Scalar, im: Scalar) -> Self {
        Complex { re, im }
    }

    pub fn real(re: Scalar) -> Self {
        Complex { re, im: Scalar::zero() }
    }

    pub fn i() -> Self {
        Complex { re: Scalar::zero(), im: Scalar::one() }
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn scale(&self, s: &Scalar) -> Complex {
        Complex { re: &self.re * s, im: &self.im * s }
    }
}

impl fmt::Debug for Complex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?}, {:?})", self.re, self.im)
    }
}

impl<'a, 'b> Add<&'b Complex> for &'a Complex {
    type Output = Complex;
    fn add(self, o: &'b Complex) -> Complex {
        Complex { re: &self.re + &o.re, im: &self.im + &o.im }
    }
}

impl<'a, 'b> Sub<&'b Complex> for &'a Complex {
    type Output = Complex;
    fn sub(self, o: &'b Complex) -> Complex {
        Complex { re: &self.re - &o.re, im: &self.im - &o.im }
    }
}

impl<'a, 'b> Mul<&'b Complex> for &'a Complex {
    type Output = Complex;
    fn mul(self, o: &'b Complex) -> Complex {
        Complex {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }
}

impl<'a> Neg for &'a Complex {
    type Output = Complex;
    fn neg(self) -> Complex {
        Complex { re: -&self.re, im: -&self.im }
    }
}

impl FieldElem for Complex {
    fn zero() -> Self {
        Complex::default()
    }
    fn one() -> Self {
        Complex::real(Scalar::one())
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn inv(&self) -> Self {
        let n = &self.re * &self.re + &self.im * &self.im;
        let ni = n.inv();
        Complex { re: &self.re * &ni, im: -(&self.im * &ni) }
    }
    fn neg(&self) -> Self {
        -self
    }
}

/// Dense row-major matrix.
#[derive(Clone, PartialEq)]
pub struct Matrix<F> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

pub type ExactMatrix = Matrix<Scalar>;

impl<F: FieldElem> Matrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![F::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = F::one();
        }
        m
    }

    /// Builds from rows; every row must have length `cols`.
    pub fn from_rows(cols: usize, rows: Vec<Vec<F>>) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged matrix");
            data.extend(r);
        }
        Matrix { rows: n, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[F] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<F>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &[F]) -> Vec<F> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows).map(|i| dot(self.row(i), v)).collect()
    }

    pub fn matmul(&self, o: &Matrix<F>) -> Matrix<F> {
        assert_eq!(self.cols, o.rows);
        let mut m = Self::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let v = m[(i, j)].add(&a.mul(&o[(k, j)]));
                    m[(i, j)] = v;
                }
            }
        }
        m
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Matrix<F>, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m[(r, c)].inv();
            for j in c..m.cols {
                let v = m[(r, j)].mul(&inv);
                m[(r, j)] = v;
            }
            for i in 0..m.rows {
                if i == r || m[(i, c)].is_zero() {
                    continue;
                }
                let f = m[(i, c)].clone();
                for j in c..m.cols {
                    let v = m[(i, j)].sub(&f.mul(&m[(r, j)]));
                    m[(i, j)] = v;
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    pub fn row_reduce(&self) -> RowReduction<F> {
        let (r, pivots) = self.rref();
        let rank = pivots.len();
        let row_space: Vec<Vec<F>> = (0..rank).map(|i| r.row(i).to_vec()).collect();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let null_space = free
            .iter()
            .map(|&f| {
                let mut v = vec![F::zero(); self.cols];
                v[f] = F::one();
                for (i, &p) in pivots.iter().enumerate() {
                    v[p] = r[(i, f)].neg();
                }
                v
            })
            .collect();
        RowReduction { rank, row_space, null_space }
    }

    /// Inverse of a square matrix, `None` when singular.
    pub fn inverse(&self) -> Option<Matrix<F>> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut aug = Self::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, n + i)] = F::one();
        }
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut inv = Self::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv[(i, j)] = r[(i, n + j)].clone();
            }
        }
        Some(inv)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

impl<F> std::ops::Index<(usize, usize)> for Matrix<F> {
    type Output = F;
    fn index(&self, (i, j): (usize, usize)) -> &F {
        &self.data[i * self.cols + j]
    }
}

impl<F> std::ops::IndexMut<(usize, usize)> for Matrix<F> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut F {
        &mut self.data[i * self.cols + j]
    }
}

impl<F: fmt::Debug> fmt::Debug for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<&[F]> = (0..self.rows).map(|i| &self.data[i * self.cols..(i + 1) * self.cols]).collect();
        f.debug_list().entries(rows).finish()
    }
}

pub fn dot<F: FieldElem>(a: &[F], b: &[F]) -> F {
    a.iter().zip(b).fold(F::zero(), |acc, (x, y)| acc.add(&x.mul(y)))
}

/// Rank, reduced row-space basis and null-space basis of a matrix.
#[derive(Clone, Debug)]
pub struct RowReduction<F> {
    pub rank: usize,
    pub row_space: Vec<Vec<F>>,
    pub null_space: Vec<Vec<F>>,
}

/// Rank of a list of vectors of common length `n`.
pub fn span_rank<F: FieldElem>(n: usize, vecs: &[Vec<F>]) -> usize {
    if vecs.is_empty() {
        return 0;
    }
    Matrix::from_rows(n, vecs.to_vec()).rank()
}

/// Whether `v` lies in the span of `basis`.
pub fn in_span<F: FieldElem>(n: usize, basis: &[Vec<F>], v: &[F]) -> bool {
    let r = span_rank(n, basis);
    let mut ext = basis.to_vec();
    ext.push(v.to_vec());
    span_rank(n, &ext) == r
}

/// Incrementally maintained span with a reduced basis.
#[derive(Clone, Debug)]
pub struct Span<F> {
    n: usize,
    basis: Vec<Vec<F>>,
}

impl<F: FieldElem> Span<F> {
    pub fn new(n: usize) -> Self {
        Span { n, basis: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient(&self) -> usize {
        self.n
    }

    pub fn basis(&self) -> &[Vec<F>] {
        &self.basis
    }

    /// Adds `v`; returns whether the span grew.
    pub fn insert(&mut self, v: &[F]) -> bool {
        assert_eq!(v.len(), self.n);
        let mut rows = self.basis.clone();
        rows.push(v.to_vec());
        let red = Matrix::from_rows(self.n, rows).row_reduce();
        let grew = red.rank > self.basis.len();
        self.basis = red.row_space;
        grew
    }

    pub fn contains(&self, v: &[F]) -> bool {
        in_span(self.n, &self.basis, v)
    }

    pub fn merge(&mut self, other: &Span<F>) {
        for v in &other.basis {
            self.insert(v);
        }
    }
}

/// Rational relations among `a_i + b_i√d` and the dual lattice span.
#[derive(Clone, Debug, PartialEq)]
pub struct RelationLattice {
    /// Basis of `{q ∈ Q^r : Σ q_i v_i = 0}` as primitive integer vectors.
    pub relations: Vec<Vec<BigInt>>,
    /// Basis of the orthogonal complement of the relations.
    pub allowed: Vec<Vec<BigInt>>,
}

impl RelationLattice {
    pub fn dim_relations(&self) -> usize {
        self.relations.len()
    }

    pub fn dim_allowed(&self) -> usize {
        self.allowed.len()
    }
}

/// Scales a rational vector to a primitive integer vector with positive
/// leading entry.
pub fn primitive_integer(v: &[BigRational]) -> Vec<BigInt> {
    let lcm = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * BigRational::from_integer(lcm.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return ints;
    }
    let mut out: Vec<BigInt> = ints.into_iter().map(|x| x / &g).collect();
    if out.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
        out.iter_mut().for_each(|x| *x = -x.clone());
    }
    out
}

pub fn rational_relation_lattice(values: &[Scalar]) -> RelationLattice {
    let r = values.len();
    assert!(r >= 1, "need at least one value");
    let a: Vec<Scalar> = values.iter().map(|v| Scalar::rational(v.rational_part().clone())).collect();
    let b: Vec<Scalar> = values.iter().map(|v| Scalar::rational(v.irrational_part().clone())).collect();
    let red = Matrix::from_rows(r, vec![a, b]).row_reduce();
    let to_int = |vs: Vec<Vec<Scalar>>| -> Vec<Vec<BigInt>> {
        vs.into_iter()
            .map(|v| {
                let rats: Vec<BigRational> = v.iter().map(|x| x.as_rational().expect("rational").clone()).collect();
                primitive_integer(&rats)
            })
            .collect()
    };
    RelationLattice { relations: to_int(red.null_space), allowed: to_int(red.row_space) }
}
