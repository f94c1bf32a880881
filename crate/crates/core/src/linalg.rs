//! Small dense complex linear algebra with value semantics.
//!
//! Dimensions in this crate stay below a few dozen, so vectors and matrices
//! are plain `Vec<Complex64>` wrappers. Eigenbases are never computed with a
//! general eigensolver: every operator diagonalized here has a known finite
//! order, so the spectral projectors are group averages.

use std::f64::consts::TAU;
use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);

/// Absolute numerical tolerance. Defaults to `1e-9`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct Tolerance(f64);

impl Tolerance {
    pub const DEFAULT: Tolerance = Tolerance(1e-9);

    pub fn new(eps: f64) -> Result<Self> {
        if eps > 0.0 && eps < 1e-3 {
            Ok(Tolerance(eps))
        } else {
            Err(Error::BadTolerance(eps))
        }
    }

    #[inline]
    pub fn eps(self) -> f64 {
        self.0
    }

    /// Scales the tolerance, for checks that accumulate several roundings.
    pub fn times(self, factor: f64) -> Tolerance {
        Tolerance(self.0 * factor)
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance::DEFAULT
    }
}

/// `exp(2 pi i num/den)` evaluated from the exponent reduced mod 1.
///
/// Quarter turns are returned exactly.
pub fn root_of_unity(num: i64, den: u64) -> C64 {
    assert!(den > 0, "root of unity with zero denominator");
    let r = num.rem_euclid(den as i64) as u64;
    if (4 * r).is_multiple_of(den) {
        return match 4 * r / den {
            0 => ONE,
            1 => C64::new(0.0, 1.0),
            2 => C64::new(-1.0, 0.0),
            _ => C64::new(0.0, -1.0),
        };
    }
    C64::from_polar(1.0, TAU * r as f64 / den as f64)
}

#[derive(Clone, PartialEq)]
pub struct CVector(Vec<C64>);

impl CVector {
    pub fn new(entries: Vec<C64>) -> Self {
        CVector(entries)
    }

    pub fn zeros(n: usize) -> Self {
        CVector(vec![ZERO; n])
    }

    /// Standard basis vector `|k>`.
    pub fn basis(n: usize, k: usize) -> Self {
        let mut v = CVector::zeros(n);
        v.0[k] = ONE;
        v
    }

    /// `(1, ..., 1)/sqrt(n)`.
    pub fn uniform(n: usize) -> Self {
        CVector(vec![C64::new(1.0 / (n as f64).sqrt(), 0.0); n])
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn entries(&self) -> &[C64] {
        &self.0
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn normalized(&self) -> CVector {
        let n = self.norm();
        self.scale(C64::new(1.0 / n, 0.0))
    }

    pub fn scale(&self, c: C64) -> CVector {
        CVector(self.0.iter().map(|z| z * c).collect())
    }

    /// Errors unless `| ||v|| - 1 | <= tol`.
    pub fn check_unit(&self, tol: Tolerance) -> Result<()> {
        let n = self.norm();
        if (n - 1.0).abs() <= tol.eps() {
            Ok(())
        } else {
            Err(Error::NotUnit(n))
        }
    }

    /// `<self|w>`, conjugate-linear in `self`.
    pub fn inner(&self, w: &CVector) -> Result<C64> {
        check_dims(self.dim(), w.dim())?;
        Ok(self.0.iter().zip(&w.0).map(|(a, b)| a.conj() * b).sum())
    }

    /// `|<self|w>|^2 / (||self||^2 ||w||^2)`.
    pub fn fidelity(&self, w: &CVector) -> Result<f64> {
        Ok(self.inner(w)?.norm_sqr() / (self.norm_sqr() * w.norm_sqr()))
    }

    pub fn max_abs_diff(&self, w: &CVector) -> f64 {
        self.0.iter().zip(&w.0).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    /// Rotates the global phase so that the largest-magnitude entry (first
    /// one, ties within `1e-9`) is real and positive.
    pub fn phase_fixed(&self) -> CVector {
        let max = self.0.iter().map(|z| z.norm()).fold(0.0, f64::max);
        match self.0.iter().find(|z| z.norm() >= max - 1e-9) {
            Some(z) if max > 0.0 => self.scale(z.conj() / z.norm()),
            _ => self.clone(),
        }
    }
}

impl fmt::Debug for CVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.0.iter()).finish()
    }
}

impl Index<usize> for CVector {
    type Output = C64;
    fn index(&self, i: usize) -> &C64 {
        &self.0[i]
    }
}

impl IndexMut<usize> for CVector {
    fn index_mut(&mut self, i: usize) -> &mut C64 {
        &mut self.0[i]
    }
}

impl Add for &CVector {
    type Output = CVector;
    fn add(self, rhs: &CVector) -> CVector {
        assert_eq!(self.dim(), rhs.dim());
        CVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &CVector {
    type Output = CVector;
    fn sub(self, rhs: &CVector) -> CVector {
        assert_eq!(self.dim(), rhs.dim());
        CVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

/// Square complex matrix, row-major.
#[derive(Clone, PartialEq)]
pub struct CMatrix {
    n: usize,
    data: Vec<C64>,
}

impl CMatrix {
    pub fn zeros(n: usize) -> Self {
        CMatrix {
            n,
            data: vec![ZERO; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = CMatrix::zeros(n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn diagonal(entries: &[C64]) -> Self {
        let mut m = CMatrix::zeros(entries.len());
        for (i, &z) in entries.iter().enumerate() {
            m[(i, i)] = z;
        }
        m
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for r in 0..n {
            for c in 0..n {
                data.push(f(r, c));
            }
        }
        CMatrix { n, data }
    }

    /// Matrix whose `j`-th column is `cols[j]`.
    pub fn from_columns(cols: &[CVector]) -> Result<Self> {
        let n = cols.len();
        for c in cols {
            check_dims(n, c.dim())?;
        }
        Ok(CMatrix::from_fn(n, |r, c| cols[c][r]))
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn column(&self, c: usize) -> CVector {
        CVector((0..self.n).map(|r| self[(r, c)]).collect())
    }

    pub fn columns(&self) -> Vec<CVector> {
        (0..self.n).map(|c| self.column(c)).collect()
    }

    pub fn adjoint(&self) -> CMatrix {
        CMatrix::from_fn(self.n, |r, c| self[(c, r)].conj())
    }

    pub fn trace(&self) -> C64 {
        (0..self.n).map(|i| self[(i, i)]).sum()
    }

    pub fn scale(&self, c: C64) -> CMatrix {
        CMatrix {
            n: self.n,
            data: self.data.iter().map(|z| z * c).collect(),
        }
    }

    pub fn apply(&self, v: &CVector) -> CVector {
        assert_eq!(self.n, v.dim(), "matrix-vector dimension mismatch");
        CVector(
            (0..self.n)
                .map(|r| (0..self.n).map(|c| self[(r, c)] * v[c]).sum())
                .collect(),
        )
    }

    pub fn pow(&self, m: usize) -> CMatrix {
        let mut acc = CMatrix::identity(self.n);
        for _ in 0..m {
            acc = &acc * self;
        }
        acc
    }

    pub fn kron(&self, other: &CMatrix) -> CMatrix {
        let (a, b) = (self.n, other.n);
        CMatrix::from_fn(a * b, |r, c| self[(r / b, c / b)] * other[(r % b, c % b)])
    }

    pub fn max_abs_diff(&self, other: &CMatrix) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest entry of `|U^dagger U - 1|`.
    pub fn unitarity_deviation(&self) -> f64 {
        (&self.adjoint() * self).max_abs_diff(&CMatrix::identity(self.n))
    }

    /// Returns `c` with `self ~ c * other` entrywise within `tol`, if any.
    pub fn ratio_to(&self, other: &CMatrix, tol: Tolerance) -> Option<C64> {
        if self.n != other.n {
            return None;
        }
        let (idx, pivot) = other
            .data
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.norm().total_cmp(&b.1.norm()))?;
        if pivot.norm() <= tol.eps() {
            return None;
        }
        let c = self.data[idx] / pivot;
        if self.max_abs_diff(&other.scale(c)) <= tol.eps() {
            Some(c)
        } else {
            None
        }
    }

    /// Projective equality: `self = c * other` with `|c| = 1`.
    pub fn proportional_to(&self, other: &CMatrix, tol: Tolerance) -> bool {
        self.ratio_to(other, tol)
            .is_some_and(|c| (c.norm() - 1.0).abs() <= tol.eps())
    }

    /// `self ~ c * 1`, returning `c`.
    pub fn scalar_part(&self, tol: Tolerance) -> Option<C64> {
        self.ratio_to(&CMatrix::identity(self.n), tol)
    }

    pub fn is_diagonal(&self, tol: Tolerance) -> bool {
        (0..self.n).all(|r| (0..self.n).all(|c| r == c || self[(r, c)].norm() <= tol.eps()))
    }
}

impl fmt::Debug for CMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<&[C64]> = self.data.chunks(self.n).collect();
        f.debug_list().entries(rows).finish()
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = C64;
    #[inline]
    fn index(&self, (r, c): (usize, usize)) -> &C64 {
        &self.data[r * self.n + c]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    #[inline]
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut C64 {
        &mut self.data[r * self.n + c]
    }
}

impl Mul for &CMatrix {
    type Output = CMatrix;
    fn mul(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.n, rhs.n, "matrix product dimension mismatch");
        let n = self.n;
        let mut out = CMatrix::zeros(n);
        for r in 0..n {
            for k in 0..n {
                let a = self.data[r * n + k];
                if a == ZERO {
                    continue;
                }
                for c in 0..n {
                    out.data[r * n + c] += a * rhs.data[k * n + c];
                }
            }
        }
        out
    }
}

impl Add for &CMatrix {
    type Output = CMatrix;
    fn add(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.n, rhs.n);
        CMatrix {
            n: self.n,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &CMatrix {
    type Output = CMatrix;
    fn sub(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.n, rhs.n);
        CMatrix {
            n: self.n,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

/// An ordered orthonormal basis with a descriptive label.
#[derive(Clone, Debug, PartialEq)]
pub struct Basis {
    pub vectors: Vec<CVector>,
    pub label: String,
}

impl Basis {
    pub fn new(vectors: Vec<CVector>, label: impl Into<String>) -> Self {
        Basis {
            vectors,
            label: label.into(),
        }
    }

    pub fn computational(n: usize) -> Self {
        Basis::new((0..n).map(|k| CVector::basis(n, k)).collect(), "computational")
    }

    /// The columns of `m`.
    pub fn from_matrix(m: &CMatrix, label: impl Into<String>) -> Self {
        Basis::new(m.columns(), label)
    }

    pub fn dim(&self) -> usize {
        self.vectors.first().map_or(0, CVector::dim)
    }

    pub fn matrix(&self) -> CMatrix {
        CMatrix::from_columns(&self.vectors).expect("basis vectors have matching dimension")
    }

    pub fn transformed(&self, u: &CMatrix, label: impl Into<String>) -> Basis {
        Basis::new(self.vectors.iter().map(|v| u.apply(v)).collect(), label)
    }

    /// Largest entry of `|G - 1|` for the Gram matrix `G`.
    pub fn orthonormality_deviation(&self) -> f64 {
        let mut dev: f64 = 0.0;
        for (i, a) in self.vectors.iter().enumerate() {
            for (j, b) in self.vectors.iter().enumerate() {
                let g = a.inner(b).unwrap_or(C64::new(f64::INFINITY, 0.0));
                let target = if i == j { ONE } else { ZERO };
                dev = dev.max((g - target).norm());
            }
        }
        if self.vectors.len() != self.dim() {
            return f64::INFINITY;
        }
        dev
    }

    pub fn is_orthonormal(&self, tol: Tolerance) -> bool {
        self.orthonormality_deviation() <= tol.eps()
    }
}

fn check_dims(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

pub fn inner(v: &CVector, w: &CVector) -> Result<C64> {
    v.inner(w)
}

/// Spectral projectors of a unitary of order `m`:
/// `P_k = (1/m) sum_j exp(-2 pi i jk/m) U^j`.
///
/// `U^m` must equal the identity within `tol`; rescale first if it is only
/// a multiple of it.
pub fn cyclic_eigenprojectors(u: &CMatrix, m: usize, tol: Tolerance) -> Result<Vec<CMatrix>> {
    assert!(m >= 1, "order must be positive");
    let n = u.dim();
    let mut powers = Vec::with_capacity(m + 1);
    powers.push(CMatrix::identity(n));
    for j in 1..=m {
        let next = &powers[j - 1] * u;
        powers.push(next);
    }
    let deviation = powers[m].max_abs_diff(&CMatrix::identity(n));
    if deviation > tol.eps() {
        return Err(Error::NotOrderM { order: m, deviation });
    }
    let inv_m = C64::new(1.0 / m as f64, 0.0);
    Ok((0..m)
        .map(|k| {
            let mut p = CMatrix::zeros(n);
            for (j, uj) in powers.iter().take(m).enumerate() {
                p = &p + &uj.scale(root_of_unity(-((j * k) as i64), m as u64));
            }
            p.scale(inv_m)
        })
        .collect())
}

/// Orthonormal vectors spanning the image of a Hermitian projector, found by
/// Gram-Schmidt with column pivoting.
pub fn orthonormal_from_projector(p: &CMatrix, tol: Tolerance) -> Result<Vec<CVector>> {
    let herm = p.max_abs_diff(&p.adjoint());
    let idem = (p * p).max_abs_diff(p);
    let dev = herm.max(idem);
    if dev > tol.eps() {
        return Err(Error::NotProjector(dev));
    }
    let rank = p.trace().re.round().max(0.0) as usize;
    let mut cols = p.columns();
    let mut out: Vec<CVector> = Vec::with_capacity(rank);
    for _ in 0..rank {
        let (idx, _) = cols
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.norm_sqr().total_cmp(&b.1.norm_sqr()))
            .expect("projector has columns");
        let q = cols[idx].normalized();
        for c in cols.iter_mut() {
            let overlap = q.inner(c).expect("same dimension");
            *c = &*c - &q.scale(overlap);
        }
        out.push(q);
    }
    Ok(out)
}

/// Numerical rank by row reduction with partial pivoting; pivots below
/// `tol` in magnitude count as zero.
pub fn rank(vectors: &[CVector], tol: Tolerance) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    let cols = vectors[0].dim();
    let mut rows: Vec<Vec<C64>> = vectors.iter().map(|v| v.entries().to_vec()).collect();
    let mut r = 0;
    for c in 0..cols {
        if r == rows.len() {
            break;
        }
        let (piv, mag) = (r..rows.len())
            .map(|i| (i, rows[i][c].norm()))
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .expect("nonempty row range");
        if mag <= tol.eps() {
            continue;
        }
        rows.swap(r, piv);
        let pivot_row = rows[r].clone();
        for row in rows.iter_mut().skip(r + 1) {
            let f = row[c] / pivot_row[c];
            for (x, p) in row.iter_mut().zip(&pivot_row).skip(c) {
                *x -= f * p;
            }
        }
        r += 1;
    }
    r
}

/// `|<v|w>| = 1` within `tol` (computed scale-invariantly).
pub fn equal_up_to_phase(v: &CVector, w: &CVector, tol: Tolerance) -> Result<bool> {
    Ok((1.0 - v.fidelity(w)?).abs() <= tol.eps())
}

/// Matrix of `|<a_i|b_j>|^2` normalized by the vector norms.
pub fn fidelity_matrix(a: &[CVector], b: &[CVector]) -> Result<Vec<Vec<f64>>> {
    a.iter().map(|x| b.iter().map(|y| x.fidelity(y)).collect()).collect()
}

/// True iff the squared-overlap matrix between the two families is a
/// permutation matrix within `tol`.
pub fn bases_equal_up_to_phase_perm(b1: &[CVector], b2: &[CVector], tol: Tolerance) -> Result<bool> {
    if b1.len() != b2.len() {
        return Err(Error::DimensionMismatch {
            expected: b1.len(),
            found: b2.len(),
        });
    }
    let f = fidelity_matrix(b1, b2)?;
    let n = b1.len();
    let mut col_hits = vec![0usize; n];
    for row in &f {
        let mut hits = 0;
        for (j, &x) in row.iter().enumerate() {
            if (x - 1.0).abs() <= tol.eps() {
                hits += 1;
                col_hits[j] += 1;
            } else if x > tol.eps() {
                return Ok(false);
            }
        }
        if hits != 1 {
            return Ok(false);
        }
    }
    Ok(col_hits.iter().all(|&h| h == 1))
}

/// Distance of the squared-overlap matrix from the permutation matrix
/// picked out by the row maxima; infinite if the row maxima collide.
pub fn permutation_deviation(b1: &[CVector], b2: &[CVector]) -> Result<f64> {
    if b1.len() != b2.len() {
        return Err(Error::DimensionMismatch {
            expected: b1.len(),
            found: b2.len(),
        });
    }
    let f = fidelity_matrix(b1, b2)?;
    let mut taken = vec![false; b2.len()];
    let mut dev: f64 = 0.0;
    for row in &f {
        let (jmax, _) = row
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .expect("nonempty basis");
        if std::mem::replace(&mut taken[jmax], true) {
            return Ok(f64::INFINITY);
        }
        for (j, &x) in row.iter().enumerate() {
            let target = if j == jmax { 1.0 } else { 0.0 };
            dev = dev.max((x - target).abs());
        }
    }
    Ok(dev)
}

/// Projective set equality of two vector families via bipartite perfect
/// matching on the entries with `|<a|b>|^2 = 1`.
pub fn sets_equal_up_to_phase(a: &[CVector], b: &[CVector], tol: Tolerance) -> Result<bool> {
    if a.len() != b.len() {
        return Ok(false);
    }
    let f = fidelity_matrix(a, b)?;
    let adj: Vec<Vec<usize>> = f
        .iter()
        .map(|row| {
            row.iter()
                .enumerate()
                .filter(|(_, &x)| (x - 1.0).abs() <= tol.eps())
                .map(|(j, _)| j)
                .collect()
        })
        .collect();
    Ok(perfect_matching(&adj, b.len()))
}

/// Kuhn's augmenting-path algorithm.
fn perfect_matching(adj: &[Vec<usize>], right: usize) -> bool {
    fn augment(u: usize, adj: &[Vec<usize>], seen: &mut [bool], owner: &mut [Option<usize>]) -> bool {
        for &v in &adj[u] {
            if seen[v] {
                continue;
            }
            seen[v] = true;
            if owner[v].is_none_or(|w| augment(w, adj, seen, owner)) {
                owner[v] = Some(u);
                return true;
            }
        }
        false
    }
    let mut owner = vec![None; right];
    (0..adj.len()).all(|u| {
        let mut seen = vec![false; right];
        augment(u, adj, &mut seen, &mut owner)
    })
}

/// Cyclic shift `|a> -> |a+1 mod n>`.
pub fn shift_matrix(n: usize) -> CMatrix {
    CMatrix::from_fn(n, |r, c| if r == (c + 1) % n { ONE } else { ZERO })
}

/// `diag(1, w, ..., w^(n-1))` with `w = exp(2 pi i/n)`.
pub fn clock_matrix(n: usize) -> CMatrix {
    let d: Vec<C64> = (0..n).map(|a| root_of_unity(a as i64, n as u64)).collect();
    CMatrix::diagonal(&d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const TOL: Tolerance = Tolerance::DEFAULT;

    fn parity(n: usize) -> CMatrix {
        CMatrix::from_fn(n, |r, c| if r == (n - c) % n { ONE } else { ZERO })
    }

    fn fourier(n: usize) -> CMatrix {
        let s = 1.0 / (n as f64).sqrt();
        CMatrix::from_fn(n, |r, c| root_of_unity((r * c) as i64, n as u64) * s)
    }

    #[test]
    fn roots_of_unity_exact_quarters() {
        assert_eq!(root_of_unity(0, 5), ONE);
        assert_eq!(root_of_unity(1, 4), C64::new(0.0, 1.0));
        assert_eq!(root_of_unity(-1, 2), C64::new(-1.0, 0.0));
        assert_eq!(root_of_unity(7, 4), C64::new(0.0, -1.0));
        let z = root_of_unity(1, 7);
        assert!((z.powu(7) - ONE).norm() < 1e-14);
        assert!((root_of_unity(15, 7) - z).norm() < 1e-15);
    }

    #[test]
    fn tolerance_range() {
        assert!(Tolerance::new(0.0).is_err());
        assert!(Tolerance::new(1e-3).is_err());
        assert_eq!(Tolerance::new(1e-6).unwrap().eps(), 1e-6);
        assert_eq!(Tolerance::default().eps(), 1e-9);
    }

    #[test]
    fn inner_examples() {
        let e0 = CVector::basis(3, 0);
        let e1 = CVector::basis(3, 1);
        assert_eq!(inner(&e0, &e0).unwrap(), ONE);
        assert_eq!(inner(&e0, &e1).unwrap(), ZERO);
        let u = CVector::uniform(3);
        let f = fourier(3).column(0);
        assert!((inner(&u, &f).unwrap().norm_sqr() - 1.0).abs() < 1e-12);
        assert!(matches!(
            inner(&e0, &CVector::basis(2, 0)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn inner_is_conjugate_linear_in_first_argument() {
        let v = CVector::new(vec![C64::new(1.0, 2.0), C64::new(-0.5, 0.3)]);
        let w = CVector::new(vec![C64::new(0.2, -1.0), C64::new(0.7, 0.1)]);
        let c = C64::new(0.3, -0.8);
        let lhs = v.scale(c).inner(&w).unwrap();
        let rhs = c.conj() * v.inner(&w).unwrap();
        assert!((lhs - rhs).norm() < 1e-14);
    }

    #[test]
    fn projectors_of_identity_and_clock() {
        let p = cyclic_eigenprojectors(&CMatrix::identity(3), 1, TOL).unwrap();
        assert_eq!(p.len(), 1);
        assert!(p[0].max_abs_diff(&CMatrix::identity(3)) < 1e-15);

        let z = clock_matrix(3);
        let ps = cyclic_eigenprojectors(&z, 3, TOL).unwrap();
        for (k, pk) in ps.iter().enumerate() {
            let vs = orthonormal_from_projector(pk, TOL).unwrap();
            assert_eq!(vs.len(), 1);
            assert!(equal_up_to_phase(&vs[0], &CVector::basis(3, k), TOL).unwrap());
        }
        let eig: Vec<CVector> = ps
            .iter()
            .map(|p| orthonormal_from_projector(p, TOL).unwrap().remove(0))
            .collect();
        assert!(bases_equal_up_to_phase_perm(&eig, &Basis::computational(3).vectors, TOL).unwrap());
    }

    #[test]
    fn parity_projector_ranks_n5() {
        let ps = cyclic_eigenprojectors(&parity(5), 2, TOL).unwrap();
        let ranks: Vec<f64> = ps.iter().map(|p| p.trace().re).collect();
        assert!((ranks[0] - 3.0).abs() < 1e-12);
        assert!((ranks[1] - 2.0).abs() < 1e-12);
        let fixed = orthonormal_from_projector(&ps[0], TOL).unwrap();
        assert_eq!(fixed.len(), 3);
        for v in &fixed {
            assert!(parity(5).apply(v).max_abs_diff(v) < 1e-12);
        }
        assert!(Basis::new(fixed.clone(), "")
            .vectors
            .iter()
            .all(|v| (v.norm() - 1.0).abs() < 1e-12));
        for (i, a) in fixed.iter().enumerate() {
            for b in &fixed[i + 1..] {
                assert!(a.inner(b).unwrap().norm() < 1e-12);
            }
        }
    }

    #[test]
    fn projector_completeness_and_orthogonality() {
        for n in [3usize, 5, 7] {
            for u in [clock_matrix(n), shift_matrix(n), &clock_matrix(n) * &shift_matrix(n)] {
                let ps = cyclic_eigenprojectors(&u, n, TOL).unwrap();
                let mut sum = CMatrix::zeros(n);
                for (k, pk) in ps.iter().enumerate() {
                    sum = &sum + pk;
                    for (l, pl) in ps.iter().enumerate() {
                        let prod = pk * pl;
                        let target = if k == l { pk.clone() } else { CMatrix::zeros(n) };
                        assert!(prod.max_abs_diff(&target) < 10.0 * TOL.eps());
                    }
                }
                assert!(sum.max_abs_diff(&CMatrix::identity(n)) < 10.0 * TOL.eps());
            }
        }
    }

    #[test]
    fn wrong_order_rejected() {
        assert!(matches!(
            cyclic_eigenprojectors(&clock_matrix(5), 3, TOL),
            Err(Error::NotOrderM { order: 3, .. })
        ));
        assert!(matches!(
            orthonormal_from_projector(&shift_matrix(3), TOL),
            Err(Error::NotProjector(_))
        ));
    }

    #[test]
    fn projector_onto_single_vector() {
        let p = CMatrix::diagonal(&[ONE, ZERO, ZERO]);
        let v = orthonormal_from_projector(&p, TOL).unwrap();
        assert_eq!(v.len(), 1);
        assert!(equal_up_to_phase(&v[0], &CVector::basis(3, 0), TOL).unwrap());
        let all = orthonormal_from_projector(&CMatrix::identity(3), TOL).unwrap();
        assert_eq!(rank(&all, TOL), 3);
    }

    #[test]
    fn rank_examples() {
        let e0 = CVector::basis(2, 0);
        let e1 = CVector::basis(2, 1);
        let sum = &e0 + &e1;
        assert_eq!(rank(&[e0.clone(), e1, sum], TOL), 2);
        assert_eq!(rank(&[CVector::uniform(4)], TOL), 1);
        assert_eq!(rank(&[], TOL), 0);
        assert_eq!(rank(&[CVector::zeros(3)], TOL), 0);
    }

    #[test]
    fn phase_and_basis_equality() {
        let v = CVector::new(vec![C64::new(0.6, 0.0), C64::new(0.0, 0.8)]);
        let w = v.scale(root_of_unity(1, 14));
        assert!(equal_up_to_phase(&v, &w, TOL).unwrap());
        assert!(!equal_up_to_phase(&CVector::basis(2, 0), &CVector::basis(2, 1), TOL).unwrap());

        let comp = Basis::computational(3).vectors;
        let shuffled = vec![
            comp[2].scale(root_of_unity(1, 3)),
            comp[0].scale(C64::new(-1.0, 0.0)),
            comp[1].clone(),
        ];
        assert!(bases_equal_up_to_phase_perm(&comp, &shuffled, TOL).unwrap());
        assert!(!bases_equal_up_to_phase_perm(&comp, &fourier(3).columns(), TOL).unwrap());
        assert!(sets_equal_up_to_phase(&comp, &shuffled, TOL).unwrap());
        assert!(!sets_equal_up_to_phase(&comp, &fourier(3).columns(), TOL).unwrap());
    }

    #[test]
    fn kron_and_adjoint() {
        let x = shift_matrix(2);
        let z = clock_matrix(2);
        let xz = x.kron(&z);
        assert_eq!(xz.dim(), 4);
        assert!(xz.unitarity_deviation() < 1e-15);
        assert!((&xz * &xz).max_abs_diff(&CMatrix::identity(4)) < 1e-15);
        let f = fourier(5);
        assert!(f.unitarity_deviation() < 1e-12);
        assert!(f.pow(4).max_abs_diff(&CMatrix::identity(5)) < 1e-12);
    }

    fn arb_unit(n: usize) -> impl Strategy<Value = CVector> {
        prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), n).prop_filter_map("nonzero", |e| {
            let v = CVector::new(e.into_iter().map(|(a, b)| C64::new(a, b)).collect());
            (v.norm() > 1e-3).then(|| v.normalized())
        })
    }

    proptest! {
        #[test]
        fn rank_invariant_under_permutation_and_rephasing(
            vs in prop::collection::vec(arb_unit(4), 1..6),
            phases in prop::collection::vec(0i64..16, 6),
            rot in 0usize..6,
        ) {
            let r0 = rank(&vs, TOL);
            let mut moved: Vec<CVector> = vs
                .iter()
                .zip(&phases)
                .map(|(v, &p)| v.scale(root_of_unity(p, 16)))
                .collect();
            let len = moved.len();
            moved.rotate_left(rot % len);
            prop_assert_eq!(rank(&moved, TOL), r0);
        }

        #[test]
        fn basis_equality_is_an_equivalence(seed in 0u64..200, p1 in 0i64..9, p2 in 0i64..9) {
            let n = 3usize;
            let shift = (seed % 3) as usize;
            let b: Vec<CVector> = fourier(n).columns();
            let c: Vec<CVector> = (0..n).map(|i| b[(i + shift) % n].scale(root_of_unity(p1, 9))).collect();
            let d: Vec<CVector> = (0..n).map(|i| c[(i + 1) % n].scale(root_of_unity(p2, 9))).collect();
            prop_assert!(bases_equal_up_to_phase_perm(&b, &b, TOL).unwrap());
            prop_assert!(bases_equal_up_to_phase_perm(&b, &c, TOL).unwrap());
            prop_assert!(bases_equal_up_to_phase_perm(&c, &b, TOL).unwrap());
            prop_assert!(bases_equal_up_to_phase_perm(&c, &d, TOL).unwrap());
            prop_assert!(bases_equal_up_to_phase_perm(&b, &d, TOL).unwrap());
        }
    }
}
