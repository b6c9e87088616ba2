//! Exact integer and rational arithmetic for lattice computations.
//!
//! Everything here works over `BigInt` / `BigRational`; there is no floating
//! point anywhere in the crate. Integer matrices are plain `Vec<Vec<BigInt>>`
//! in row-major order.

use std::fmt;
use std::ops::{Add, Deref, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub type Int = BigInt;
pub type Rational = BigRational;
pub type IntMatrix = Vec<Vec<BigInt>>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("not a candidate basis: expected {expected} vectors of length {expected}, got {count} of length {len}")]
    NotCandidateBasis { expected: usize, count: usize, len: usize },
    #[error("zero vector has no primitive direction")]
    ZeroVector,
    #[error("dimension mismatch: expected length {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
}

pub fn int(v: i64) -> BigInt {
    BigInt::from(v)
}

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_from_int(v: &BigInt) -> Rational {
    Rational::from_integer(v.clone())
}

/// An integer vector in `M` or `N`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticeVector(pub Vec<BigInt>);

impl LatticeVector {
    pub fn new(coords: Vec<BigInt>) -> Self {
        LatticeVector(coords)
    }

    pub fn from_i64(coords: &[i64]) -> Self {
        LatticeVector(coords.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero(rank: usize) -> Self {
        LatticeVector(vec![BigInt::zero(); rank])
    }

    pub fn unit(rank: usize, i: usize) -> Self {
        let mut v = Self::zero(rank);
        v.0[i] = BigInt::one();
        v
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn dot(&self, other: &LatticeVector) -> BigInt {
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn dot_point(&self, p: &Point) -> Rational {
        self.0.iter().zip(&p.0).map(|(a, b)| b * rat_from_int(a)).fold(Rational::zero(), |acc, x| acc + x)
    }

    pub fn scaled(&self, k: &BigInt) -> LatticeVector {
        LatticeVector(self.0.iter().map(|c| c * k).collect())
    }

    pub fn to_point(&self) -> Point {
        Point(self.0.iter().map(rat_from_int).collect())
    }

    pub fn extended(&self, extra: BigInt) -> LatticeVector {
        let mut c = self.0.clone();
        c.push(extra);
        LatticeVector(c)
    }

    pub fn negated(&self) -> LatticeVector {
        LatticeVector(self.0.iter().map(|c| -c).collect())
    }
}

impl Deref for LatticeVector {
    type Target = [BigInt];
    fn deref(&self) -> &[BigInt] {
        &self.0
    }
}

impl Add for &LatticeVector {
    type Output = LatticeVector;
    fn add(self, rhs: &LatticeVector) -> LatticeVector {
        LatticeVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &LatticeVector {
    type Output = LatticeVector;
    fn sub(self, rhs: &LatticeVector) -> LatticeVector {
        LatticeVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl fmt::Display for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// A point of `M_ℝ` with rational coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point(pub Vec<Rational>);

impl Point {
    pub fn from_i64(coords: &[i64]) -> Self {
        Point(coords.iter().map(|&c| Rational::from_integer(c.into())).collect())
    }

    pub fn origin(rank: usize) -> Self {
        Point(vec![Rational::zero(); rank])
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().all(|c| c.is_integer())
    }

    pub fn to_lattice(&self) -> Option<LatticeVector> {
        self.is_integral().then(|| LatticeVector(self.0.iter().map(|c| c.to_integer()).collect()))
    }

    pub fn translate(&self, v: &LatticeVector) -> Point {
        Point(self.0.iter().zip(&v.0).map(|(a, b)| a + rat_from_int(b)).collect())
    }

    pub fn sub(&self, other: &Point) -> Vec<Rational> {
        self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect()
    }

    pub fn extended(&self, extra: Rational) -> Point {
        let mut c = self.0.clone();
        c.push(extra);
        Point(c)
    }

    pub fn truncated(&self, len: usize) -> Point {
        Point(self.0[..len].to_vec())
    }
}

impl Deref for Point {
    type Target = [Rational];
    fn deref(&self) -> &[Rational] {
        &self.0
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Divides `v` by the gcd of its entries.
pub fn primitive(v: &LatticeVector) -> Result<LatticeVector, ExactError> {
    let g = v.0.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    if g.is_zero() {
        return Err(ExactError::ZeroVector);
    }
    Ok(LatticeVector(v.0.iter().map(|c| c / &g).collect()))
}

/// Clears denominators of a rational direction, keeping its orientation,
/// and returns the primitive integer vector along it.
pub fn primitive_of_rational(v: &[Rational]) -> Result<LatticeVector, ExactError> {
    let l = v.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let scaled = LatticeVector(v.iter().map(|c| (c * rat_from_int(&l)).to_integer()).collect());
    primitive(&scaled)
}

/// Multiplies a rational vector by the lcm of its denominators.
pub fn clear_denominators(v: &[Rational]) -> Vec<BigInt> {
    let l = v.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    v.iter().map(|c| (c * rat_from_int(&l)).to_integer()).collect()
}

pub fn identity(n: usize) -> IntMatrix {
    (0..n).map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect()
}

pub fn transpose(m: &[Vec<BigInt>], ncols: usize) -> IntMatrix {
    (0..ncols).map(|j| m.iter().map(|row| row[j].clone()).collect()).collect()
}

pub fn mat_mul(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> IntMatrix {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter().map(|row| (0..cols).map(|j| (0..inner).map(|k| &row[k] * &b[k][j]).sum()).collect()).collect()
}

pub fn mat_vec(a: &[Vec<BigInt>], v: &[BigInt]) -> Vec<BigInt> {
    a.iter().map(|row| row.iter().zip(v).map(|(x, y)| x * y).sum()).collect()
}

pub fn mat_vec_rational(a: &[Vec<BigInt>], v: &[Rational]) -> Vec<Rational> {
    a.iter().map(|row| row.iter().zip(v).fold(Rational::zero(), |acc, (x, y)| acc + y * rat_from_int(x))).collect()
}

/// Determinant by fraction-free Bareiss elimination.
pub fn determinant(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a: IntMatrix = m.to_vec();
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    negate = !negate;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if negate {
        -d
    } else {
        d
    }
}

/// Determinant of a square rational matrix.
pub fn rational_determinant(m: &[Vec<Rational>]) -> Rational {
    let mut scale = Rational::one();
    let rows: IntMatrix = m
        .iter()
        .map(|row| {
            let l = lcm_of_denominators(row.iter());
            scale /= rat_from_int(&l);
            row.iter().map(|c| (c * rat_from_int(&l)).to_integer()).collect()
        })
        .collect();
    rat_from_int(&determinant(&rows)) * scale
}

/// Rank of an integer matrix by fraction-free elimination.
pub fn rank(rows: &[Vec<BigInt>]) -> usize {
    let m = rows.len();
    let n = rows.first().map_or(0, Vec::len);
    let mut a: IntMatrix = rows.to_vec();
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..n {
        if r == m {
            break;
        }
        let Some(p) = (r..m).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(p, r);
        for i in r + 1..m {
            for j in c + 1..n {
                let v = (&a[i][j] * &a[r][c] - &a[i][c] * &a[r][j]) / &prev;
                a[i][j] = v;
            }
            a[i][c] = BigInt::zero();
        }
        prev = a[r][c].clone();
        r += 1;
    }
    r
}

/// Solves the square system `a x = b`; `None` when `a` is singular.
pub fn solve_integer_system(a: &[Vec<BigInt>], b: &[BigInt]) -> Option<Vec<Rational>> {
    let b: Vec<Rational> = b.iter().map(rat_from_int).collect();
    solve_system(a, &b)
}

/// Solves `a x = b` for integer `a` and rational `b` by fraction-free
/// elimination on `a`; `None` when `a` is singular.
pub fn solve_system(a: &[Vec<BigInt>], b: &[Rational]) -> Option<Vec<Rational>> {
    let n = a.len();
    let mut m: IntMatrix = a.to_vec();
    let mut rhs: Vec<Rational> = b.to_vec();
    let mut prev = BigInt::one();
    for k in 0..n {
        if m[k][k].is_zero() {
            let i = (k + 1..n).find(|&i| !m[i][k].is_zero())?;
            m.swap(i, k);
            rhs.swap(i, k);
        }
        let pk = rat_from_int(&m[k][k]);
        let prev_r = rat_from_int(&prev);
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = v;
            }
            let v = (&rhs[i] * &pk - &rhs[k] * rat_from_int(&m[i][k])) / &prev_r;
            rhs[i] = v;
            m[i][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    let mut x = vec![Rational::zero(); n];
    for i in (0..n).rev() {
        let mut acc = rhs[i].clone();
        for j in i + 1..n {
            acc -= &x[j] * rat_from_int(&m[i][j]);
        }
        x[i] = acc / rat_from_int(&m[i][i]);
    }
    Some(x)
}

/// Reduced row echelon form over ℚ; returns the reduced rows and pivot columns.
pub fn rref(mut rows: Vec<Vec<Rational>>, ncols: usize) -> (Vec<Vec<Rational>>, Vec<usize>) {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(p, r);
        let inv = rows[r][c].recip();
        for v in rows[r].iter_mut() {
            *v *= &inv;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                let pivot_row = rows[r].clone();
                for (x, y) in rows[i].iter_mut().zip(&pivot_row).take(ncols) {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    (rows, pivots)
}

/// A basis of the rational null space `{x : rows · x = 0}`.
pub fn rational_kernel(rows: &[Vec<Rational>], ncols: usize) -> Vec<Vec<Rational>> {
    let (red, pivots) = rref(rows.to_vec(), ncols);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); ncols];
            v[f] = Rational::one();
            for (row, &p) in red.iter().zip(&pivots) {
                v[p] = -row[f].clone();
            }
            v
        })
        .collect()
}

pub fn rational_rank(rows: &[Vec<Rational>], ncols: usize) -> usize {
    rref(rows.to_vec(), ncols).1.len()
}

/// Inverse of a square rational matrix, `None` if singular.
pub fn invert_rational(m: &[Vec<Rational>]) -> Option<Vec<Vec<Rational>>> {
    let n = m.len();
    let aug: Vec<Vec<Rational>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
            r
        })
        .collect();
    let (red, pivots) = rref(aug, 2 * n);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    Some(red.into_iter().map(|row| row[n..].to_vec()).collect())
}

pub fn to_rational_matrix(m: &[Vec<BigInt>]) -> Vec<Vec<Rational>> {
    m.iter().map(|row| row.iter().map(rat_from_int).collect()).collect()
}

/// Inverse of a unimodular integer matrix.
pub fn invert_unimodular(m: &[Vec<BigInt>]) -> Option<IntMatrix> {
    let inv = invert_rational(&to_rational_matrix(m))?;
    inv.into_iter()
        .map(|row| row.into_iter().map(|c| c.is_integer().then(|| c.to_integer())).collect::<Option<Vec<_>>>())
        .collect()
}

/// Result of unimodular column reduction `A · U = [H | 0]`.
#[derive(Clone, Debug)]
pub struct ColumnEchelon {
    /// The unimodular `n × n` transform `U`.
    pub transform: IntMatrix,
    pub reduced: IntMatrix,
    pub rank: usize,
}

/// Column-style echelon reduction of an `m × ncols` integer matrix by
/// unimodular column operations. The trailing `ncols - rank` columns of the
/// transform span the integer kernel and form a saturated basis of it.
pub fn column_echelon(rows: &[Vec<BigInt>], ncols: usize) -> ColumnEchelon {
    let mut a: IntMatrix = rows.to_vec();
    let mut u = identity(ncols);
    let mut r = 0;
    let swap_cols = |m: &mut IntMatrix, i: usize, j: usize| {
        for row in m.iter_mut() {
            row.swap(i, j);
        }
    };
    for i in 0..a.len() {
        if r == ncols {
            break;
        }
        for j in r + 1..ncols {
            if a[i][j].is_zero() {
                continue;
            }
            if a[i][r].is_zero() {
                swap_cols(&mut a, r, j);
                swap_cols(&mut u, r, j);
                continue;
            }
            let x = a[i][r].clone();
            let y = a[i][j].clone();
            let eg = x.extended_gcd(&y);
            let (g, s, t) = (eg.gcd, eg.x, eg.y);
            let p = -(&y / &g);
            let q = &x / &g;
            for m in [&mut a, &mut u] {
                for row in m.iter_mut() {
                    let cr = row[r].clone();
                    let cj = row[j].clone();
                    row[r] = &s * &cr + &t * &cj;
                    row[j] = &p * &cr + &q * &cj;
                }
            }
        }
        if !a[i][r].is_zero() {
            r += 1;
        }
    }
    ColumnEchelon { transform: u, reduced: a, rank: r }
}

/// A saturated basis of the integer kernel `{x ∈ ℤ^n : rows · x = 0}`.
pub fn integer_kernel(rows: &[Vec<BigInt>], ncols: usize) -> Vec<LatticeVector> {
    let ce = column_echelon(rows, ncols);
    (ce.rank..ncols).map(|j| LatticeVector(ce.transform.iter().map(|row| row[j].clone()).collect())).collect()
}

/// Hermite normal form basis of the integer row span.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hnf {
    pub basis: Vec<LatticeVector>,
    pub rank: usize,
}

pub fn hermite_normal_form(rows: &[LatticeVector]) -> Result<Hnf, ExactError> {
    let Some(first) = rows.first() else {
        return Ok(Hnf { basis: Vec::new(), rank: 0 });
    };
    let n = first.rank();
    if let Some(bad) = rows.iter().find(|r| r.rank() != n) {
        return Err(ExactError::DimensionMismatch { expected: n, got: bad.rank() });
    }
    let k = rows.len();
    let cols: IntMatrix = (0..n).map(|i| rows.iter().map(|r| r.0[i].clone()).collect()).collect();
    let ce = column_echelon(&cols, k);
    let mut basis: Vec<Vec<BigInt>> =
        (0..ce.rank).map(|c| ce.reduced.iter().map(|row| row[c].clone()).collect()).collect();
    let pivot_of = |v: &Vec<BigInt>| v.iter().position(|x| !x.is_zero()).unwrap_or(v.len());
    for b in basis.iter_mut() {
        let p = pivot_of(b);
        if b[p].is_negative() {
            for x in b.iter_mut() {
                *x = -x.clone();
            }
        }
    }
    for c in 0..basis.len() {
        let p = pivot_of(&basis[c]);
        let piv = basis[c][p].clone();
        for c2 in 0..c {
            let q = basis[c2][p].div_floor(&piv);
            if !q.is_zero() {
                let sub: Vec<BigInt> = basis[c].iter().map(|x| x * &q).collect();
                for (x, s) in basis[c2].iter_mut().zip(sub) {
                    *x -= s;
                }
            }
        }
    }
    Ok(Hnf { basis: basis.into_iter().map(LatticeVector).collect(), rank: ce.rank })
}

/// True iff `n` vectors of length `n` have determinant ±1.
pub fn is_unimodular_basis(vectors: &[LatticeVector]) -> Result<bool, ExactError> {
    let count = vectors.len();
    let len = vectors.first().map_or(0, LatticeVector::rank);
    if vectors.iter().any(|v| v.rank() != count) {
        return Err(ExactError::NotCandidateBasis { expected: count, count, len });
    }
    let m: IntMatrix = vectors.iter().map(|v| v.0.clone()).collect();
    Ok(determinant(&m).abs().is_one())
}

/// A rational affine function `x ↦ ⟨linear, x⟩ + constant`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AffineFunction {
    pub linear: Vec<Rational>,
    pub constant: Rational,
}

impl AffineFunction {
    pub fn zero(rank: usize) -> Self {
        AffineFunction { linear: vec![Rational::zero(); rank], constant: Rational::zero() }
    }

    pub fn new(linear: Vec<Rational>, constant: Rational) -> Self {
        AffineFunction { linear, constant }
    }

    pub fn from_i64(linear: &[i64], constant: i64) -> Self {
        AffineFunction {
            linear: linear.iter().map(|&c| Rational::from_integer(c.into())).collect(),
            constant: Rational::from_integer(constant.into()),
        }
    }

    pub fn rank(&self) -> usize {
        self.linear.len()
    }

    pub fn eval(&self, p: &[Rational]) -> Rational {
        self.linear.iter().zip(p).fold(self.constant.clone(), |acc, (a, x)| acc + a * x)
    }

    pub fn eval_lattice(&self, v: &LatticeVector) -> Rational {
        self.linear.iter().zip(&v.0).fold(self.constant.clone(), |acc, (a, x)| acc + a * rat_from_int(x))
    }

    /// Linear part applied to a direction.
    pub fn slope(&self, v: &LatticeVector) -> Rational {
        self.linear.iter().zip(&v.0).fold(Rational::zero(), |acc, (a, x)| acc + a * rat_from_int(x))
    }

    pub fn scale(&self, k: &Rational) -> Self {
        AffineFunction { linear: self.linear.iter().map(|a| a * k).collect(), constant: &self.constant * k }
    }

    pub fn is_zero(&self) -> bool {
        self.constant.is_zero() && self.linear.iter().all(Zero::is_zero)
    }

    pub fn is_integral(&self) -> bool {
        self.constant.is_integer() && self.linear.iter().all(|a| a.is_integer())
    }

    /// Coefficients, linear part first.
    pub fn coefficients(&self) -> impl Iterator<Item = &Rational> {
        self.linear.iter().chain(std::iter::once(&self.constant))
    }
}

impl Add for &AffineFunction {
    type Output = AffineFunction;
    fn add(self, rhs: &AffineFunction) -> AffineFunction {
        AffineFunction {
            linear: self.linear.iter().zip(&rhs.linear).map(|(a, b)| a + b).collect(),
            constant: &self.constant + &rhs.constant,
        }
    }
}

impl Sub for &AffineFunction {
    type Output = AffineFunction;
    fn sub(self, rhs: &AffineFunction) -> AffineFunction {
        AffineFunction {
            linear: self.linear.iter().zip(&rhs.linear).map(|(a, b)| a - b).collect(),
            constant: &self.constant - &rhs.constant,
        }
    }
}

impl Neg for &AffineFunction {
    type Output = AffineFunction;
    fn neg(self) -> AffineFunction {
        self.scale(&-Rational::one())
    }
}

impl fmt::Display for AffineFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, a) in self.linear.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            write!(f, "{a}*x{}", i + 1)?;
            first = false;
        }
        if first || !self.constant.is_zero() {
            if !first {
                write!(f, " + ")?;
            }
            write!(f, "{}", self.constant)?;
        }
        Ok(())
    }
}

/// The integer points of an affine subspace through `origin`, with a
/// saturated lattice basis and an integral left inverse of that basis.
///
/// `frame` is a unimodular matrix whose trailing columns are the basis; its
/// leading columns complete the basis to one of the whole lattice.
#[derive(Clone, Debug)]
pub struct AffineLattice {
    pub origin: Point,
    pub basis: Vec<LatticeVector>,
    left_inverse: IntMatrix,
    frame: IntMatrix,
    frame_inverse: IntMatrix,
    /// Integer normals cutting out the subspace.
    pub equations: Vec<LatticeVector>,
}

impl AffineLattice {
    /// The affine span of `origin + directions`.
    pub fn spanned(origin: Point, directions: &[Vec<Rational>]) -> Self {
        let n = origin.rank();
        let dirs: IntMatrix = directions.iter().map(|d| clear_denominators(d)).collect();
        let equations = integer_kernel(&dirs, n);
        let eq_rows: IntMatrix = equations.iter().map(|e| e.0.clone()).collect();
        let ce = column_echelon(&eq_rows, n);
        let inv = invert_unimodular(&ce.transform).expect("column transform is unimodular");
        let basis =
            (ce.rank..n).map(|j| LatticeVector(ce.transform.iter().map(|row| row[j].clone()).collect())).collect();
        let left_inverse = inv[ce.rank..].to_vec();
        AffineLattice { origin, basis, left_inverse, frame: ce.transform, frame_inverse: inv, equations }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient_rank(&self) -> usize {
        self.origin.rank()
    }

    pub fn coords(&self, p: &Point) -> Point {
        Point(mat_vec_rational(&self.left_inverse, &p.sub(&self.origin)))
    }

    pub fn direction_coords(&self, v: &LatticeVector) -> LatticeVector {
        LatticeVector(mat_vec(&self.left_inverse, &v.0))
    }

    pub fn embed(&self, c: &[Rational]) -> Point {
        let mut out = self.origin.clone();
        for (ci, b) in c.iter().zip(&self.basis) {
            for (o, bj) in out.0.iter_mut().zip(&b.0) {
                *o += ci * rat_from_int(bj);
            }
        }
        out
    }

    pub fn embed_direction(&self, c: &LatticeVector) -> LatticeVector {
        let mut out = LatticeVector::zero(self.ambient_rank());
        for (ci, b) in c.0.iter().zip(&self.basis) {
            for (o, bj) in out.0.iter_mut().zip(&b.0) {
                *o += ci * bj;
            }
        }
        out
    }

    /// Matrix of the integral left inverse (`dim × ambient_rank`).
    pub fn left_inverse(&self) -> &IntMatrix {
        &self.left_inverse
    }

    pub fn frame(&self) -> &IntMatrix {
        &self.frame
    }

    pub fn frame_inverse(&self) -> &IntMatrix {
        &self.frame_inverse
    }

    /// Basis as the columns of an `ambient_rank × dim` matrix.
    pub fn basis_matrix(&self) -> IntMatrix {
        transpose(&self.basis.iter().map(|b| b.0.clone()).collect::<Vec<_>>(), self.ambient_rank())
    }
}

/// Positive lcm of the denominators.
pub fn lcm_of_denominators<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values.into_iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}
