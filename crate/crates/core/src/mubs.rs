//! Complete sets of mutually unbiased bases: the standard construction,
//! cubic-phase (Alltop) orbit constructions, their stabilizers, and the
//! correspondence between orbit bases and Clifford eigenbases.
//!
//! Bases are ordered canonically: the computational family first, and
//! within an orbit complete set the fiducial is the first vector of the
//! second basis.

use std::collections::VecDeque;

use crate::clifford::{
    clifford_matrix, enumerate_order_n_clifford_subgroups, CliffordElement, NormalizedUnitary, SymplecticMatrix,
};
use crate::error::{Error, Result};
use crate::linalg::{
    bases_equal_up_to_phase_perm, cyclic_eigenprojectors, orthonormal_from_projector, permutation_deviation,
    root_of_unity, Basis, CMatrix, CVector, Tolerance, C64, ONE,
};
use crate::modring::{is_prime, stabilizer_params, Modulus, Residue};
use crate::weylheisenberg::{
    displacement, mu_power, omega_power, sigma_power, wh_orbit_bases, x_matrix, z_matrix, DisplacementIndex,
};

/// `N + 1` pairwise mutually unbiased bases.
#[derive(Clone, Debug, PartialEq)]
pub struct CompleteMub {
    pub bases: Vec<Basis>,
    pub label: String,
}

impl CompleteMub {
    pub fn new(bases: Vec<Basis>, label: impl Into<String>) -> Self {
        CompleteMub {
            bases,
            label: label.into(),
        }
    }

    pub fn dim(&self) -> usize {
        self.bases.first().map_or(0, Basis::dim)
    }

    /// All `N(N + 1)` vectors, basis major.
    pub fn vectors(&self) -> impl Iterator<Item = &CVector> {
        self.bases.iter().flat_map(|b| b.vectors.iter())
    }

    pub fn transformed(&self, u: &CMatrix, label: impl Into<String>) -> CompleteMub {
        let label = label.into();
        CompleteMub::new(
            self.bases
                .iter()
                .map(|b| b.transformed(u, format!("{label}/{}", b.label)))
                .collect(),
            label,
        )
    }

    /// Index of a basis projectively equal to `b`.
    pub fn position(&self, b: &Basis, tol: Tolerance) -> Option<usize> {
        self.bases
            .iter()
            .position(|own| bases_equal_up_to_phase_perm(&own.vectors, &b.vectors, tol).unwrap_or(false))
    }
}

/// Cubic parameter `x` in `1..N`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AlltopParameter(Residue);

impl AlltopParameter {
    pub fn new(x: Residue) -> Result<Self> {
        if x.is_zero() {
            return Err(Error::Domain("cubic parameter x must be nonzero".into()));
        }
        Ok(AlltopParameter(x))
    }

    pub fn from_ints(x: i64, n: u64) -> Result<Self> {
        Self::new(Residue::new(x, n)?)
    }

    pub fn residue(self) -> Residue {
        self.0
    }

    pub fn value(self) -> u64 {
        self.0.value()
    }

    pub fn dim(self) -> usize {
        self.0.modulus().get() as usize
    }

    /// All `N - 1` parameters.
    pub fn all(m: Modulus) -> Vec<AlltopParameter> {
        m.units().map(AlltopParameter).collect()
    }
}

/// `(U_F)_(mn) = omega^(mn) / sqrt(N)`.
pub fn fourier_unitary(n: usize) -> CMatrix {
    let s = 1.0 / (n as f64).sqrt();
    CMatrix::from_fn(n, |r, c| root_of_unity((r * c) as i64, n as u64) * s)
}

/// `(U_S)_(mm) = omega^(m^2/2)` with `1/2` inverted mod `N`; for `N = 2`
/// the order-4 phase gate `diag(1, i)`.
pub fn quadratic_phase_unitary(n: usize) -> Result<CMatrix> {
    if n == 2 {
        return Ok(CMatrix::diagonal(&[ONE, C64::new(0.0, 1.0)]));
    }
    let m = Modulus::new(n as u64)?;
    let half = m.residue(2).inverse()?;
    let d: Vec<C64> = m
        .elements()
        .map(|a| omega_power((a * a * half).value() as i64, n))
        .collect();
    Ok(CMatrix::diagonal(&d))
}

/// Two-qubit diagonal phase `i^(q(a))` for the quadratic form given by a
/// symmetric bit matrix `[[b11, b12], [b12, b22]]` acting on `(a1, a0)`.
fn two_qubit_phase(b11: u32, b12: u32, b22: u32) -> CMatrix {
    let d: Vec<C64> = (0..4u32)
        .map(|a| {
            let (a1, a0) = (a >> 1, a & 1);
            let q = b11 * a1 + b22 * a0 + 2 * b12 * a1 * a0;
            root_of_unity(q as i64, 4)
        })
        .collect();
    CMatrix::diagonal(&d)
}

/// Unitaries `R_k` with `R_k |computational> = k`-th standard basis.
///
/// Odd prime and `N = 2`: `1, U_F, U_S U_F, ..., U_S^(N-1) U_F`.
/// `N = 4`: `1, H⊗H` and three two-qubit diagonal phase gates applied
/// after `H⊗H`, whose quadratic forms differ pairwise by invertible
/// matrices over `GF(2)`.
pub fn standard_rotations(n: usize) -> Result<Vec<CMatrix>> {
    if n == 4 {
        let h = fourier_unitary(2);
        let hh = h.kron(&h);
        let mut out = vec![CMatrix::identity(4), hh.clone()];
        for (b11, b12, b22) in [(1, 1, 0), (0, 1, 1), (1, 0, 1)] {
            out.push(&two_qubit_phase(b11, b12, b22) * &hh);
        }
        return Ok(out);
    }
    if !is_prime(n as u64) {
        return Err(Error::Domain(format!(
            "standard complete set is built for primes and 4, got {n}"
        )));
    }
    let f = fourier_unitary(n);
    let s = quadratic_phase_unitary(n)?;
    let mut out = vec![CMatrix::identity(n), f.clone()];
    let mut acc = f;
    for _ in 1..n {
        acc = &s * &acc;
        out.push(acc.clone());
    }
    Ok(out)
}

/// The standard complete set: the computational basis and its images
/// under the standard rotations.
pub fn standard_mub(n: usize) -> Result<CompleteMub> {
    let comp = Basis::computational(n);
    let bases = standard_rotations(n)?
        .iter()
        .enumerate()
        .map(|(k, r)| comp.transformed(r, format!("standard[{k}]")))
        .collect();
    Ok(CompleteMub::new(bases, "standard"))
}

/// Cubic-phase fiducial: `sigma^(a x^3)/sqrt(3)` for `N = 3`, otherwise
/// `omega^(x a^3)/sqrt(N)`.
pub fn alltop_fiducial(x: AlltopParameter) -> Result<CVector> {
    let n = x.dim();
    if n == 2 {
        return Err(Error::Domain(
            "N = 2 has no cubic fiducial; see small_dim_fiducials".into(),
        ));
    }
    let norm = C64::new(1.0 / (n as f64).sqrt(), 0.0);
    let xv = x.value() as i64;
    let entries = (0..n as i64)
        .map(|a| {
            let z = if n == 3 {
                sigma_power(a * xv * xv * xv)
            } else {
                let m = x.residue().modulus();
                let ar = m.residue(a);
                omega_power((x.residue() * ar * ar * ar).value() as i64, n)
            };
            z * norm
        })
        .collect();
    Ok(CVector::new(entries))
}

/// Computational basis plus the `N` orbit bases of a fiducial.
pub fn fiducial_complete_mub(f: &CVector, label: &str, tol: Tolerance) -> Result<CompleteMub> {
    let mut bases = vec![Basis::computational(f.dim())];
    for (b, basis) in wh_orbit_bases(f, tol)?.into_iter().enumerate() {
        bases.push(Basis::new(basis.vectors, format!("{label}[{b}]")));
    }
    Ok(CompleteMub::new(bases, label))
}

/// Computational basis plus the Weyl-Heisenberg orbit of `f_x`.
pub fn orbit_complete_mub(x: AlltopParameter) -> Result<CompleteMub> {
    let f = alltop_fiducial(x)?;
    fiducial_complete_mub(&f, &format!("orbit[x={}]", x.value()), Tolerance::DEFAULT)
}

/// Unit fiducials of the extraspecial-group orbit constructions:
/// `(1, mu)/sqrt(2)` for `N = 2`, `(1, 1, 1, +-i)/2` for `N = 4`.
pub fn small_dim_fiducials(n: usize) -> Result<Vec<CVector>> {
    match n {
        2 => Ok(vec![CVector::new(vec![ONE, mu_power(1)]).normalized()]),
        4 => {
            let i = C64::new(0.0, 1.0);
            Ok(vec![
                CVector::new(vec![ONE, ONE, ONE, i]).normalized(),
                CVector::new(vec![ONE, ONE, ONE, -i]).normalized(),
            ])
        }
        _ => Err(Error::Domain(format!(
            "small-dimension fiducials exist for N = 2, 4, got {n}"
        ))),
    }
}

/// An orbit complete set together with the standard basis it shares.
#[derive(Clone, Debug, PartialEq)]
pub struct OrbitMub {
    /// Cubic parameter, or the 1-based fiducial index for `N = 2, 4`.
    pub x: u64,
    /// Index `k` of the shared standard basis.
    pub anchor: usize,
    pub mub: CompleteMub,
}

/// All orbit complete sets: each fiducial set is carried by every standard
/// rotation `R_k`, giving `(N - 1)(N + 1)` sets for odd prime `N`, 3 for
/// `N = 2` and 10 for `N = 4`. Ordered by anchor, then parameter.
pub fn all_orbit_complete_mubs(n: usize, cap: usize) -> Result<Vec<OrbitMub>> {
    if n > cap {
        return Err(Error::DimensionTooLarge { n, cap });
    }
    let tol = Tolerance::DEFAULT;
    let seeds: Vec<(u64, CompleteMub)> = match n {
        2 | 4 => small_dim_fiducials(n)?
            .iter()
            .enumerate()
            .map(|(i, f)| {
                Ok((
                    i as u64 + 1,
                    fiducial_complete_mub(f, &format!("orbit[f={}]", i + 1), tol)?,
                ))
            })
            .collect::<Result<_>>()?,
        _ => {
            let m = Modulus::new(n as u64)?;
            AlltopParameter::all(m)
                .into_iter()
                .map(|x| Ok((x.value(), orbit_complete_mub(x)?)))
                .collect::<Result<_>>()?
        }
    };
    let rotations = standard_rotations(n)?;
    let mut out = Vec::with_capacity(seeds.len() * rotations.len());
    for (k, r) in rotations.iter().enumerate() {
        for (x, seed) in &seeds {
            out.push(OrbitMub {
                x: *x,
                anchor: k,
                mub: seed.transformed(r, format!("{}@{k}", seed.label)),
            });
        }
    }
    Ok(out)
}

/// Orbit complete sets for `N = 2, 4`.
pub fn small_dim_orbit_mubs(n: usize) -> Result<Vec<OrbitMub>> {
    match n {
        2 | 4 => all_orbit_complete_mubs(n, 4),
        _ => Err(Error::Domain(format!("expected N = 2 or 4, got {n}"))),
    }
}

/// Diagonal unitary that carries the standard set onto the cubic orbit
/// sets sharing the computational basis: `omega^(a^3)` entries for `N > 3`,
/// the order-9 `sigma^a` for `N = 3`.
pub fn cycling_unitary(n: usize) -> Result<CMatrix> {
    let m = Modulus::new(n as u64)?;
    if n < 3 {
        return Err(Error::Domain("cycling unitary needs N >= 3".into()));
    }
    let d: Vec<C64> = m
        .elements()
        .map(|a| {
            if n == 3 {
                sigma_power(a.value() as i64)
            } else {
                omega_power(a.pow(3).value() as i64, n)
            }
        })
        .collect();
    Ok(CMatrix::diagonal(&d))
}

/// Largest `| |<e|f>|^2 - 1/N |` over the pair.
pub fn mub_pair_deviation(b1: &Basis, b2: &Basis) -> Result<f64> {
    let n = b1.dim();
    if b2.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: b2.dim(),
        });
    }
    let target = 1.0 / n as f64;
    let mut dev: f64 = 0.0;
    for e in &b1.vectors {
        for f in &b2.vectors {
            dev = dev.max((e.inner(f)?.norm_sqr() - target).abs());
        }
    }
    Ok(dev)
}

pub fn is_mub_pair(b1: &Basis, b2: &Basis, tol: Tolerance) -> Result<bool> {
    Ok(mub_pair_deviation(b1, b2)? <= tol.eps())
}

/// Worst deviation over basis orthonormality and all pairwise unbiasedness
/// conditions; infinite if the set does not hold `N + 1` bases.
pub fn complete_mub_deviation(m: &CompleteMub) -> Result<f64> {
    let n = m.dim();
    if m.bases.len() != n + 1 {
        return Ok(f64::INFINITY);
    }
    let mut dev: f64 = 0.0;
    for (i, b) in m.bases.iter().enumerate() {
        dev = dev.max(b.orthonormality_deviation());
        for other in &m.bases[i + 1..] {
            dev = dev.max(mub_pair_deviation(b, other)?);
        }
    }
    Ok(dev)
}

pub fn is_complete_mub(m: &CompleteMub, tol: Tolerance) -> Result<bool> {
    Ok(complete_mub_deviation(m)? <= tol.eps())
}

/// `sum_(i,j) |<v_i|v_j>|^4` over all vectors of the set.
pub fn frame_potential(m: &CompleteMub) -> f64 {
    let vs: Vec<&CVector> = m.vectors().collect();
    let mut sum = 0.0;
    for a in &vs {
        for b in &vs {
            let o = a.inner(b).expect("same dimension").norm_sqr();
            sum += o * o;
        }
    }
    sum
}

/// Lower bound `2 M^2 / (N(N + 1))` on the frame potential of `M` unit
/// vectors, attained exactly by 2-designs.
pub fn welch_bound(n: usize, count: usize) -> f64 {
    let m = count as f64;
    2.0 * m * m / (n as f64 * (n as f64 + 1.0))
}

/// A Clifford element that fixes a vector exactly, phase included.
#[derive(Clone, Debug, PartialEq)]
pub struct Stabilizer {
    pub element: CliffordElement,
    /// `k` in `omega^k D_p U_S`, when the closed form applies.
    pub phase_exponent: Option<Residue>,
    pub matrix: CMatrix,
}

/// Every non-identity Clifford element `D_p U_g` having `v` as an
/// eigenvector, rescaled so that it fixes `v` exactly. Exhaustive over the
/// projective group, so intended for small `N`.
pub fn stabilizers_of(v: &CVector, tol: Tolerance) -> Result<Vec<Stabilizer>> {
    let m = Modulus::new(v.dim() as u64)?;
    let mut out = Vec::new();
    for c in CliffordElement::all(m) {
        if c.is_identity() {
            continue;
        }
        let mat = clifford_matrix(&c)?;
        let image = mat.apply(v);
        let lambda = v.inner(&image)?;
        if (lambda.norm() - 1.0).abs() > tol.eps() || image.max_abs_diff(&v.scale(lambda)) > tol.eps() {
            continue;
        }
        out.push(Stabilizer {
            element: c,
            phase_exponent: None,
            matrix: mat.scale(lambda.inv()),
        });
    }
    Ok(out)
}

/// The element `omega^k D_(i,j) U_S` fixing `f_x` for `N > 3`, with
/// `(i, j, k)` in closed form. For `N = 3` the closed form breaks down and
/// the element is found by exhaustive search, keeping the one whose
/// symplectic part is `[[1, 0], [x, 1]]`.
pub fn stabilizer_element(x: AlltopParameter, tol: Tolerance) -> Result<Stabilizer> {
    let n = x.dim();
    let m = x.residue().modulus();
    let f = alltop_fiducial(x)?;
    if n == 3 {
        let target = SymplecticMatrix::from_ints(1, 0, x.value() as i64, 1, m)?;
        return stabilizers_of(&f, tol)?
            .into_iter()
            .find(|s| s.element.g == target)
            .ok_or_else(|| Error::SearchFailed(format!("no element fixes the N = 3 fiducial x = {}", x.value())));
    }
    let (i, j, k) = stabilizer_params(x.residue())?;
    let p = DisplacementIndex::new(i, j)?;
    let element = CliffordElement::new(SymplecticMatrix::s(m), p)?;
    let matrix = (&displacement(p) * &quadratic_phase_unitary(n)?).scale(omega_power(k.value() as i64, n));
    Ok(Stabilizer {
        element,
        phase_exponent: Some(k),
        matrix,
    })
}

/// Nondegenerate eigenbasis of a unitary of order `m`, one vector per
/// spectral projector.
pub fn eigenbasis(u: &NormalizedUnitary, tol: Tolerance) -> Result<Vec<CVector>> {
    let mut out = Vec::with_capacity(u.order);
    for p in cyclic_eigenprojectors(&u.matrix, u.order, tol)? {
        let vs = orthonormal_from_projector(&p, tol)?;
        if vs.len() != 1 {
            return Err(Error::DegenerateSpectrum { rank: vs.len() });
        }
        out.extend(vs);
    }
    Ok(out)
}

/// Outcome of matching Clifford eigenbases against orbit bases.
#[derive(Clone, Debug, PartialEq)]
pub struct CorrespondenceReport {
    pub dim: usize,
    pub subgroups: usize,
    pub orbit_bases: usize,
    /// `(subgroup generator, orbit basis index)`.
    pub matches: Vec<(CliffordElement, usize)>,
    pub degenerate: Vec<CliffordElement>,
    pub unmatched_subgroups: usize,
    pub unmatched_bases: usize,
    pub max_deviation: f64,
    /// The `N + 1` Weyl-Heisenberg subgroups matched bijectively against
    /// the standard set.
    pub wh_matches_standard: bool,
    /// No non-translate eigenbasis coincides with a standard basis.
    pub standard_disjoint: bool,
}

impl CorrespondenceReport {
    pub fn is_bijective(&self) -> bool {
        self.degenerate.is_empty()
            && self.unmatched_subgroups == 0
            && self.unmatched_bases == 0
            && self.subgroups == self.orbit_bases
            && self.matches.len() == self.subgroups
    }
}

fn match_families(eigen: &[Vec<CVector>], targets: &[Basis], tol: Tolerance) -> Result<(Vec<Option<usize>>, f64)> {
    let mut used = vec![false; targets.len()];
    let mut dev: f64 = 0.0;
    let mut out = Vec::with_capacity(eigen.len());
    for e in eigen {
        let mut hit = None;
        for (j, t) in targets.iter().enumerate() {
            if used[j] {
                continue;
            }
            if bases_equal_up_to_phase_perm(e, &t.vectors, tol)? {
                dev = dev.max(permutation_deviation(e, &t.vectors)?);
                used[j] = true;
                hit = Some(j);
                break;
            }
        }
        out.push(hit);
    }
    Ok((out, dev))
}

/// The non-standard bases of all orbit complete sets, in the order of
/// [`all_orbit_complete_mubs`].
pub fn orbit_bases(n: usize, cap: usize) -> Result<Vec<Basis>> {
    let standard = standard_mub(n)?;
    let tol = Tolerance::DEFAULT;
    Ok(all_orbit_complete_mubs(n, cap)?
        .into_iter()
        .flat_map(|om| om.mub.bases)
        .filter(|b| standard.position(b, tol).is_none())
        .collect())
}

/// Matches each non-translate order-`N` Clifford subgroup to the orbit
/// basis that is the eigenbasis of its (order-normalized) generator.
pub fn eigenbasis_correspondence(n: usize, cap: usize, tol: Tolerance) -> Result<CorrespondenceReport> {
    let m = Modulus::new(n as u64)?;
    let census = enumerate_order_n_clifford_subgroups(m, cap)?;
    let targets = orbit_bases(n, cap)?;
    let standard = standard_mub(n)?;

    let mut eigen = Vec::new();
    let mut gens = Vec::new();
    let mut degenerate = Vec::new();
    for s in &census.non_translate_subgroups {
        let u = NormalizedUnitary::normalize(&clifford_matrix(&s.generator)?, n, tol)?;
        match eigenbasis(&u, tol) {
            Ok(b) => {
                eigen.push(b);
                gens.push(s.generator);
            }
            Err(Error::DegenerateSpectrum { .. }) => degenerate.push(s.generator),
            Err(e) => return Err(e),
        }
    }
    let (hits, max_deviation) = match_families(&eigen, &targets, tol)?;
    let matches: Vec<(CliffordElement, usize)> =
        gens.iter().zip(&hits).filter_map(|(g, h)| h.map(|j| (*g, j))).collect();
    let standard_disjoint = eigen
        .iter()
        .all(|e| standard.position(&Basis::new(e.clone(), ""), tol).is_none());

    // Weyl-Heisenberg side: one generator per order-N subgroup.
    let mut wh_eigen = Vec::new();
    for p in wh_subgroup_generators(m) {
        let u = NormalizedUnitary::normalize(&displacement(p), n, tol)?;
        wh_eigen.push(eigenbasis(&u, tol)?);
    }
    let (wh_hits, _) = match_families(&wh_eigen, &standard.bases, tol)?;
    let wh_matches_standard = wh_hits.iter().all(Option::is_some) && wh_hits.len() == standard.bases.len();

    Ok(CorrespondenceReport {
        dim: n,
        subgroups: census.non_translate_subgroups.len(),
        orbit_bases: targets.len(),
        unmatched_subgroups: hits.iter().filter(|h| h.is_none()).count(),
        unmatched_bases: targets.len() - matches.len(),
        matches,
        degenerate,
        max_deviation,
        wh_matches_standard,
        standard_disjoint,
    })
}

/// `(0, 1)` and `(1, t)` for `t` in `Z_N`: one displacement per maximal
/// cyclic subgroup.
fn wh_subgroup_generators(m: Modulus) -> Vec<DisplacementIndex> {
    let mut out = vec![DisplacementIndex::from_ints(0, 1, m)];
    out.extend((0..m.get() as i64).map(|t| DisplacementIndex::from_ints(1, t, m)));
    out
}

/// Cheap projective invariant of a basis: `sum_i |<v_i|r>|^4` for a fixed
/// generic reference vector `r`.
fn basis_fingerprint(b: &Basis) -> f64 {
    let n = b.dim();
    let r = CVector::new(
        (0..n)
            .map(|a| {
                let t = a as f64;
                C64::new((0.7 * t + 0.3).cos() + 0.1 * t, (1.3 * t + 0.1).sin())
            })
            .collect(),
    )
    .normalized();
    b.vectors
        .iter()
        .map(|v| {
            let o = v.fidelity(&r).expect("same dimension");
            o * o
        })
        .sum()
}

struct Fingerprinted {
    mub: CompleteMub,
    prints: Vec<f64>,
}

impl Fingerprinted {
    fn new(mub: CompleteMub) -> Self {
        let mut prints: Vec<f64> = mub.bases.iter().map(basis_fingerprint).collect();
        prints.sort_by(f64::total_cmp);
        Fingerprinted { mub, prints }
    }

    fn same_as(&self, other: &Fingerprinted, tol: Tolerance) -> bool {
        if self.prints.len() != other.prints.len()
            || self.prints.iter().zip(&other.prints).any(|(a, b)| (a - b).abs() > 1e-7)
        {
            return false;
        }
        mubs_equal(&self.mub, &other.mub, tol)
    }
}

/// Equality of two complete sets as sets of projective bases.
pub fn mubs_equal(a: &CompleteMub, b: &CompleteMub, tol: Tolerance) -> bool {
    if a.bases.len() != b.bases.len() {
        return false;
    }
    let mut used = vec![false; b.bases.len()];
    a.bases.iter().all(|ba| {
        let hit = b.bases.iter().enumerate().position(|(j, bb)| {
            !used[j] && bases_equal_up_to_phase_perm(&ba.vectors, &bb.vectors, tol).unwrap_or(false)
        });
        match hit {
            Some(j) => {
                used[j] = true;
                true
            }
            None => false,
        }
    })
}

/// Orbit sizes of the orbit complete sets under the Clifford group,
/// generated by `X`, `Z`, `U_F` and `U_S`. Sizes are sorted descending.
pub fn clifford_orbit_partition(n: usize, cap: usize, tol: Tolerance) -> Result<Vec<usize>> {
    if n == 2 || !is_prime(n as u64) {
        return Err(Error::Domain(format!(
            "Clifford orbit partition needs an odd prime, got {n}"
        )));
    }
    let generators = [
        x_matrix(n),
        z_matrix(n),
        fourier_unitary(n),
        quadratic_phase_unitary(n)?,
    ];
    let mut family: Vec<Fingerprinted> = all_orbit_complete_mubs(n, cap)?
        .into_iter()
        .map(|om| Fingerprinted::new(om.mub))
        .collect();
    let limit = 16 * family.len();
    let mut parent: Vec<usize> = (0..family.len()).collect();
    fn find(parent: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while parent[r] != r {
            r = parent[r];
        }
        let mut i = i;
        while parent[i] != r {
            let next = parent[i];
            parent[i] = r;
            i = next;
        }
        r
    }
    let mut queue: VecDeque<usize> = (0..family.len()).collect();
    while let Some(i) = queue.pop_front() {
        for g in &generators {
            let image = Fingerprinted::new(family[i].mub.transformed(g, "image"));
            let j = match family.iter().position(|known| known.same_as(&image, tol)) {
                Some(j) => j,
                None => {
                    if family.len() >= limit {
                        return Err(Error::Domain("orbit closure did not terminate".into()));
                    }
                    family.push(image);
                    parent.push(family.len() - 1);
                    queue.push_back(family.len() - 1);
                    family.len() - 1
                }
            };
            let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
            if ri != rj {
                parent[ri.max(rj)] = ri.min(rj);
            }
        }
    }
    let mut sizes = vec![0usize; family.len()];
    for i in 0..family.len() {
        let r = find(&mut parent, i);
        sizes[r] += 1;
    }
    let mut sizes: Vec<usize> = sizes.into_iter().filter(|&s| s > 0).collect();
    sizes.sort_unstable_by(|a, b| b.cmp(a));
    Ok(sizes)
}
