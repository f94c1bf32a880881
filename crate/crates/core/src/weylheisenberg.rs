//! The Weyl-Heisenberg group in prime dimension and the two-qubit
//! extraspecial group used for dimensions 2 and 4.
//!
//! Displacements are `D_p = tau^(p1 p2) X^p1 Z^p2` with
//! `tau = -exp(i pi/N)`. For odd `N`, `tau` is an `N`-th root of unity
//! (`tau^2 = omega`); for `N = 2` it is `-i`. Group elements are handled
//! projectively wherever a claim only concerns rays.

use crate::error::{Error, Result};
use crate::linalg::{clock_matrix, root_of_unity, shift_matrix, Basis, CMatrix, CVector, Tolerance, C64, ZERO};
use crate::modring::{is_prime, Modulus, Residue};

/// Index `p = (p1, p2)` of a displacement operator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DisplacementIndex {
    pub p1: Residue,
    pub p2: Residue,
}

impl DisplacementIndex {
    pub fn new(p1: Residue, p2: Residue) -> Result<Self> {
        if p1.modulus() != p2.modulus() {
            return Err(Error::ModulusMismatch(p1.modulus().get(), p2.modulus().get()));
        }
        Ok(DisplacementIndex { p1, p2 })
    }

    pub fn from_ints(p1: i64, p2: i64, m: Modulus) -> Self {
        DisplacementIndex {
            p1: m.residue(p1),
            p2: m.residue(p2),
        }
    }

    pub fn zero(m: Modulus) -> Self {
        DisplacementIndex::from_ints(0, 0, m)
    }

    #[inline]
    pub fn modulus(&self) -> Modulus {
        self.p1.modulus()
    }

    pub fn is_zero(&self) -> bool {
        self.p1.is_zero() && self.p2.is_zero()
    }

    /// All `N^2` indices, `p1` major.
    pub fn all(m: Modulus) -> impl Iterator<Item = DisplacementIndex> {
        m.elements()
            .flat_map(move |p1| m.elements().map(move |p2| DisplacementIndex { p1, p2 }))
    }
}

impl std::ops::Add for DisplacementIndex {
    type Output = DisplacementIndex;
    fn add(self, rhs: Self) -> Self {
        DisplacementIndex {
            p1: self.p1 + rhs.p1,
            p2: self.p2 + rhs.p2,
        }
    }
}

impl std::ops::Neg for DisplacementIndex {
    type Output = DisplacementIndex;
    fn neg(self) -> Self {
        DisplacementIndex {
            p1: -self.p1,
            p2: -self.p2,
        }
    }
}

/// The fixed roots of unity used throughout.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhaseConvention {
    /// `exp(2 pi i/N)`
    pub omega: C64,
    /// `-exp(i pi/N)`
    pub tau: C64,
    /// `exp(2 pi i/9)`, only meaningful for `N = 3`
    pub sigma: C64,
    /// `exp(i pi/4)`, only meaningful for `N = 2`
    pub mu: C64,
}

impl PhaseConvention {
    pub fn for_dimension(n: usize) -> Self {
        let n = n as u64;
        PhaseConvention {
            omega: root_of_unity(1, n),
            tau: root_of_unity(n as i64 + 1, 2 * n),
            sigma: sigma_power(1),
            mu: mu_power(1),
        }
    }
}

/// `omega^k` for `omega = exp(2 pi i/n)`.
pub fn omega_power(k: i64, n: usize) -> C64 {
    root_of_unity(k, n as u64)
}

/// `sigma^k` for `sigma = exp(2 pi i/9)`.
pub fn sigma_power(k: i64) -> C64 {
    root_of_unity(k, 9)
}

/// `mu^k` for `mu = exp(i pi/4)`.
pub fn mu_power(k: i64) -> C64 {
    root_of_unity(k, 8)
}

/// Shift `X|a> = |a+1>`.
pub fn x_matrix(n: usize) -> CMatrix {
    shift_matrix(n)
}

/// Clock `Z|a> = omega^a |a>`.
pub fn z_matrix(n: usize) -> CMatrix {
    clock_matrix(n)
}

/// `D_p = tau^(p1 p2) X^p1 Z^p2`.
pub fn displacement(p: DisplacementIndex) -> CMatrix {
    let n = p.modulus().get();
    let (p1, p2) = (p.p1.value(), p.p2.value());
    // tau^(p1 p2) omega^(p2 b) = exp(2 pi i [(n+1) p1 p2 + 2 p2 b] / 2n)
    let tau_exp = (n + 1) * p1 * p2;
    let size = n as usize;
    let mut m = CMatrix::zeros(size);
    for b in 0..n {
        let row = ((b + p1) % n) as usize;
        m[(row, b as usize)] = root_of_unity((tau_exp + 2 * p2 * b) as i64, 2 * n);
    }
    m
}

/// A tensor product of single-qubit factors `X^x_i Z^z_i`; bit `i` of the
/// masks belongs to the factor acting on bit `i` of the computational index,
/// with the leftmost tensor factor on the most significant bit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PauliLabel {
    pub qubits: u32,
    pub x: u32,
    pub z: u32,
}

impl PauliLabel {
    pub fn dim(&self) -> usize {
        1 << self.qubits
    }

    pub fn is_identity(&self) -> bool {
        self.x == 0 && self.z == 0
    }

    /// Projective product.
    pub fn times(&self, other: &PauliLabel) -> PauliLabel {
        PauliLabel {
            qubits: self.qubits,
            x: self.x ^ other.x,
            z: self.z ^ other.z,
        }
    }

    /// `(X^x Z^z)|a> = (-1)^(z.a) |a xor x>`, applied without a matrix.
    pub fn apply(&self, v: &CVector) -> CVector {
        let mut out = CVector::zeros(v.dim());
        for a in 0..v.dim() {
            let sign = if (self.z as usize & a).count_ones() % 2 == 1 {
                -1.0
            } else {
                1.0
            };
            out[a ^ self.x as usize] = v[a] * sign;
        }
        out
    }

    pub fn matrix(&self) -> CMatrix {
        let n = self.dim();
        CMatrix::from_fn(n, |r, c| {
            if r == c ^ self.x as usize {
                let odd = (self.z as usize & c).count_ones() % 2 == 1;
                C64::new(if odd { -1.0 } else { 1.0 }, 0.0)
            } else {
                ZERO
            }
        })
    }

    /// Name such as `XZ⊗I`.
    pub fn name(&self) -> String {
        (0..self.qubits)
            .rev()
            .map(|q| match ((self.x >> q) & 1, (self.z >> q) & 1) {
                (0, 0) => "I",
                (1, 0) => "X",
                (0, 1) => "Z",
                _ => "XZ",
            })
            .collect::<Vec<_>>()
            .join("⊗")
    }
}

/// All `4^qubits` labels with `x` major, `z` minor.
pub fn pauli_labels(qubits: u32) -> Vec<PauliLabel> {
    let n = 1u32 << qubits;
    (0..n)
        .flat_map(|x| (0..n).map(move |z| PauliLabel { qubits, x, z }))
        .collect()
}

/// The extraspecial group `H(2) x ... x H(2)` on 1 or 2 qubits, as
/// projective elements with their matrices.
pub fn extraspecial_group(qubits: u32) -> Result<Vec<(PauliLabel, CMatrix)>> {
    if !(1..=2).contains(&qubits) {
        return Err(Error::Domain(format!(
            "extraspecial group is provided for 1 or 2 tensor factors, got {qubits}"
        )));
    }
    Ok(pauli_labels(qubits).into_iter().map(|l| (l, l.matrix())).collect())
}

/// Groups the Weyl-Heisenberg orbit of `f` into `N` families.
///
/// For odd prime `N`, family `b` holds `D_(b,j) f` for `j = 0..N`, so `Z`
/// acts within a family and `X` moves between families. For `N = 2` the
/// same grouping is used with `X^b Z^j`. For `N = 4` the sixteen orbit
/// vectors under the two-qubit group are partitioned into orthonormal
/// 4-sets by exhaustive orthogonality matching.
pub fn wh_orbit_bases(f: &CVector, tol: Tolerance) -> Result<Vec<Basis>> {
    f.check_unit(tol)?;
    let n = f.dim();
    match n {
        2 => Ok((0..2u32)
            .map(|b| {
                let vs = (0..2u32)
                    .map(|j| PauliLabel { qubits: 1, x: b, z: j }.apply(f))
                    .collect();
                Basis::new(vs, format!("orbit[{b}]"))
            })
            .collect()),
        4 => {
            let orbit: Vec<CVector> = pauli_labels(2).iter().map(|l| l.apply(f)).collect();
            let groups = partition_orthonormal(&orbit, 4, tol)
                .ok_or_else(|| Error::Domain("orbit does not split into orthonormal bases".into()))?;
            Ok(groups
                .into_iter()
                .enumerate()
                .map(|(b, idx)| {
                    Basis::new(
                        idx.into_iter().map(|i| orbit[i].clone()).collect(),
                        format!("orbit[{b}]"),
                    )
                })
                .collect())
        }
        _ if is_prime(n as u64) => {
            let m = Modulus::new(n as u64)?;
            Ok((0..n as i64)
                .map(|b| {
                    let vs = (0..n as i64)
                        .map(|j| displacement(DisplacementIndex::from_ints(b, j, m)).apply(f))
                        .collect();
                    Basis::new(vs, format!("orbit[{b}]"))
                })
                .collect())
        }
        _ => Err(Error::Domain(format!(
            "orbit bases are defined for prime dimensions and for 4, got {n}"
        ))),
    }
}

/// Splits `vectors` into groups of `size` pairwise orthogonal vectors,
/// returning indices in increasing order within each group.
fn partition_orthonormal(vectors: &[CVector], size: usize, tol: Tolerance) -> Option<Vec<Vec<usize>>> {
    let k = vectors.len();
    if size == 0 || !k.is_multiple_of(size) {
        return None;
    }
    let ortho: Vec<Vec<bool>> = vectors
        .iter()
        .map(|a| {
            vectors
                .iter()
                .map(|b| a.inner(b).map(|z| z.norm() <= tol.eps()).unwrap_or(false))
                .collect()
        })
        .collect();

    fn grow(
        group: &mut Vec<usize>,
        start: usize,
        used: &mut [bool],
        ortho: &[Vec<bool>],
        size: usize,
        groups: &mut Vec<Vec<usize>>,
    ) -> bool {
        if group.len() == size {
            groups.push(group.clone());
            if fill(used, ortho, size, groups) {
                return true;
            }
            groups.pop();
            return false;
        }
        for c in start..used.len() {
            if used[c] || !group.iter().all(|&g| ortho[g][c]) {
                continue;
            }
            used[c] = true;
            group.push(c);
            if grow(group, c + 1, used, ortho, size, groups) {
                return true;
            }
            group.pop();
            used[c] = false;
        }
        false
    }

    fn fill(used: &mut [bool], ortho: &[Vec<bool>], size: usize, groups: &mut Vec<Vec<usize>>) -> bool {
        let Some(first) = used.iter().position(|u| !u) else {
            return true;
        };
        used[first] = true;
        let mut group = vec![first];
        if grow(&mut group, first + 1, used, ortho, size, groups) {
            return true;
        }
        used[first] = false;
        false
    }

    let mut used = vec![false; k];
    let mut groups = Vec::new();
    fill(&mut used, &ortho, size, &mut groups).then_some(groups)
}
