//! Bloch-space geometry of bases: trace inner products, chordal distances
//! between bases, distance spectra over families of complete sets, and
//! the linear dependencies among standard-set vectors.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::linalg::{rank, Basis, CMatrix, CVector, Tolerance, C64};
use crate::modring::Modulus;
use crate::mubs::{
    all_orbit_complete_mubs, alltop_fiducial, stabilizer_element, standard_mub, AlltopParameter, CompleteMub,
};

/// Absolute gap below which two distances fall in the same cluster.
pub const CLUSTER_GAP: f64 = 1e-6;

/// `|v><v| - 1/N`, a traceless Hermitian matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct BlochVector {
    pub matrix: CMatrix,
}

impl BlochVector {
    /// Real part of `Tr(e f)`.
    pub fn dot(&self, other: &BlochVector) -> f64 {
        let n = self.matrix.dim();
        let mut s = 0.0;
        for r in 0..n {
            for c in 0..n {
                s += (self.matrix[(r, c)] * other.matrix[(c, r)]).re;
            }
        }
        s
    }

    pub fn hermiticity_deviation(&self) -> f64 {
        self.matrix.max_abs_diff(&self.matrix.adjoint())
    }

    pub fn trace(&self) -> C64 {
        self.matrix.trace()
    }
}

pub fn bloch_vector(v: &CVector, tol: Tolerance) -> Result<BlochVector> {
    v.check_unit(tol)?;
    let n = v.dim();
    let shift = 1.0 / n as f64;
    let matrix = CMatrix::from_fn(n, |r, c| {
        let z = v[r] * v[c].conj();
        if r == c {
            z - shift
        } else {
            z
        }
    });
    Ok(BlochVector { matrix })
}

/// `1 - (1/(N-1)) sum_(i,j) (|<e_i|f_j>|^2 - 1/N)^2`: 0 for projectively
/// equal bases, 1 for unbiased ones.
pub fn chordal_distance_sq(b1: &Basis, b2: &Basis) -> Result<f64> {
    let n = b1.dim();
    if b2.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: b2.dim(),
        });
    }
    let shift = 1.0 / n as f64;
    let mut s = 0.0;
    for e in &b1.vectors {
        for f in &b2.vectors {
            let d = e.inner(f)?.norm_sqr() - shift;
            s += d * d;
        }
    }
    Ok(1.0 - s / (n as f64 - 1.0))
}

/// A distance value with its multiplicity.
#[derive(Clone, Debug, PartialEq)]
pub struct DistanceCluster {
    pub value: f64,
    pub count: usize,
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct DistanceReport {
    pub pairs: Vec<(String, String, f64)>,
    pub clusters: Vec<DistanceCluster>,
}

impl DistanceReport {
    pub fn from_pairs(pairs: Vec<(String, String, f64)>) -> Self {
        let clusters = cluster(pairs.iter().map(|p| p.2));
        DistanceReport { pairs, clusters }
    }

    /// The common value when every pair lies in one cluster.
    pub fn single_value(&self) -> Option<f64> {
        match self.clusters.as_slice() {
            [c] => Some(c.value),
            _ => None,
        }
    }

    pub fn max_deviation_from(&self, target: f64) -> f64 {
        self.pairs.iter().map(|p| (p.2 - target).abs()).fold(0.0, f64::max)
    }
}

/// Sorted values grouped by consecutive gaps at most [`CLUSTER_GAP`];
/// each cluster reports its mean.
pub fn cluster(values: impl IntoIterator<Item = f64>) -> Vec<DistanceCluster> {
    let mut vs: Vec<f64> = values.into_iter().collect();
    vs.sort_by(f64::total_cmp);
    let mut out: Vec<(f64, usize, f64)> = Vec::new();
    for v in vs {
        match out.last_mut() {
            Some((sum, count, last)) if v - *last <= CLUSTER_GAP => {
                *sum += v;
                *count += 1;
                *last = v;
            }
            _ => out.push((v, 1, v)),
        }
    }
    out.into_iter()
        .map(|(sum, count, _)| DistanceCluster {
            value: sum / count as f64,
            count,
        })
        .collect()
}

/// Pairwise distances within a family of bases.
pub fn distance_spectrum(bases: &[Basis]) -> Result<DistanceReport> {
    let mut pairs = Vec::new();
    for (i, a) in bases.iter().enumerate() {
        for b in &bases[i + 1..] {
            pairs.push((a.label.clone(), b.label.clone(), chordal_distance_sq(a, b)?));
        }
    }
    Ok(DistanceReport::from_pairs(pairs))
}

/// Distances between every basis of `a` and every basis of `b`.
pub fn cross_distance_spectrum(a: &[Basis], b: &[Basis]) -> Result<DistanceReport> {
    let mut pairs = Vec::with_capacity(a.len() * b.len());
    for x in a {
        for y in b {
            pairs.push((x.label.clone(), y.label.clone(), chordal_distance_sq(x, y)?));
        }
    }
    Ok(DistanceReport::from_pairs(pairs))
}

/// `sum_(B' in M) D^2(B, B')`; equals `N` for every basis `B` because a
/// complete set is a 2-design.
pub fn distance_sum_to_set(b: &Basis, m: &CompleteMub) -> Result<f64> {
    m.bases.iter().map(|other| chordal_distance_sq(b, other)).sum()
}

/// Haar-random orthonormal basis: Gram-Schmidt on a complex Gaussian matrix.
pub fn haar_basis<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Basis {
    let mut vectors: Vec<CVector> = Vec::with_capacity(n);
    while vectors.len() < n {
        let raw = CVector::new(
            (0..n)
                .map(|_| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
                .collect(),
        );
        let mut v = raw;
        for u in &vectors {
            let c = u.inner(&v).expect("same dimension");
            v = &v - &u.scale(c);
        }
        if v.norm() > 1e-8 {
            vectors.push(v.normalized());
        }
    }
    Basis::new(vectors, "haar")
}

/// Mean chordal distance from the computational basis over `samples`
/// Haar bases drawn from a seeded ChaCha stream.
pub fn haar_average_distance(n: usize, samples: usize, seed: u64) -> Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let comp = Basis::computational(n);
    let mut sum = 0.0;
    for _ in 0..samples {
        sum += chordal_distance_sq(&comp, &haar_basis(n, &mut rng))?;
    }
    Ok(sum / samples as f64)
}

/// Which closed form a measured separation matches.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeparationSign {
    /// `(N - 1)/N + 1/N^2`
    Plus,
    /// `(N - 1)/N - 1/N^2`
    Minus,
    Neither,
}

impl SeparationSign {
    pub fn classify(n: usize, value: f64, tol: f64) -> Self {
        let (plus, minus) = separation_candidates(n);
        if (value - plus).abs() <= tol {
            SeparationSign::Plus
        } else if (value - minus).abs() <= tol {
            SeparationSign::Minus
        } else {
            SeparationSign::Neither
        }
    }
}

/// `((N - 1)/N + 1/N^2, (N - 1)/N - 1/N^2)`.
pub fn separation_candidates(n: usize) -> (f64, f64) {
    let nf = n as f64;
    let base = (nf - 1.0) / nf;
    (base + 1.0 / (nf * nf), base - 1.0 / (nf * nf))
}

/// Distances between the standard and orbit complete sets of one
/// dimension, split by whether the two sets share a basis.
#[derive(Clone, Debug, PartialEq)]
pub struct SeparationSurvey {
    pub dim: usize,
    /// Non-shared bases of complete-set pairs that share one basis.
    pub overlapping: DistanceReport,
    /// Non-standard bases of orbit sets anchored at different standard bases.
    pub non_overlapping: DistanceReport,
    /// Worst `|sum_(B' in M') D^2(B, B') - N|` over the surveyed sets.
    pub design_sum_deviation: f64,
    pub sign: SeparationSign,
}

impl SeparationSurvey {
    pub fn overlapping_expected(&self) -> f64 {
        (self.dim as f64 - 1.0) / self.dim as f64
    }
}

fn shared_basis(a: &CompleteMub, b: &CompleteMub, tol: Tolerance) -> Option<(usize, usize)> {
    a.bases
        .iter()
        .enumerate()
        .find_map(|(i, ba)| b.position(ba, tol).map(|j| (i, j)))
}

pub fn separation_survey(n: usize, cap: usize, tol: Tolerance) -> Result<SeparationSurvey> {
    let standard = standard_mub(n)?;
    let orbit = all_orbit_complete_mubs(n, cap)?;
    let mut sets: Vec<(Option<usize>, CompleteMub)> = vec![(None, standard)];
    sets.extend(orbit.into_iter().map(|om| (Some(om.anchor), om.mub)));

    let mut overlapping = Vec::new();
    let mut non_overlapping = Vec::new();
    for (i, (anchor_a, a)) in sets.iter().enumerate() {
        for (anchor_b, b) in &sets[i + 1..] {
            if let Some((sa, sb)) = shared_basis(a, b, tol) {
                let ra: Vec<Basis> = a
                    .bases
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| *k != sa)
                    .map(|p| p.1.clone())
                    .collect();
                let rb: Vec<Basis> = b
                    .bases
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| *k != sb)
                    .map(|p| p.1.clone())
                    .collect();
                overlapping.extend(cross_distance_spectrum(&ra, &rb)?.pairs);
            } else if let (Some(ka), Some(kb)) = (anchor_a, anchor_b) {
                debug_assert_ne!(ka, kb);
                // bases[0] of an orbit set is its anchoring standard basis
                non_overlapping.extend(cross_distance_spectrum(&a.bases[1..], &b.bases[1..])?.pairs);
            }
        }
    }

    let mut design_sum_deviation: f64 = 0.0;
    for (_, a) in &sets {
        for (_, b) in &sets {
            for basis in &a.bases {
                design_sum_deviation = design_sum_deviation.max((distance_sum_to_set(basis, b)? - n as f64).abs());
            }
        }
    }

    let non_overlapping = DistanceReport::from_pairs(non_overlapping);
    let sign = match non_overlapping.single_value() {
        Some(v) => SeparationSign::classify(n, v, CLUSTER_GAP),
        None => SeparationSign::Neither,
    };
    Ok(SeparationSurvey {
        dim: n,
        overlapping: DistanceReport::from_pairs(overlapping),
        non_overlapping,
        design_sum_deviation,
        sign,
    })
}

/// Residue class of `N` mod 3, which decides whether the cubic exponential
/// sum vanishes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CubicClass {
    OneModThree,
    TwoModThree,
}

/// Orbit of the uniform vector under the stabilizer of `f_x`, and its
/// relation to `f_x`.
#[derive(Clone, Debug, PartialEq)]
pub struct CubicSumReport {
    pub dim: usize,
    pub x: u64,
    pub class: CubicClass,
    /// `<u|f_x>` for the uniform vector `u`.
    pub overlap: C64,
    /// Standard-set basis index of each `G^m u`, `m = 0..N`.
    pub bases_hit: Vec<Option<usize>>,
    /// Largest `|<G^m u|f_x>|`.
    pub max_overlap: f64,
    pub rank: usize,
}

impl CubicSumReport {
    pub fn distinct_bases(&self) -> bool {
        let mut hit: Vec<usize> = self.bases_hit.iter().flatten().copied().collect();
        hit.sort_unstable();
        hit.dedup();
        hit.len() == self.dim && !hit.contains(&0)
    }

    /// For `N = 2 mod 3` all vectors are orthogonal to `f_x` and span at
    /// most `N - 1` dimensions; for `N = 1 mod 3` the uniform vector has a
    /// nonzero overlap with `f_x`.
    pub fn holds(&self, tol: Tolerance) -> bool {
        self.distinct_bases()
            && match self.class {
                CubicClass::TwoModThree => self.max_overlap <= tol.eps() && self.rank < self.dim,
                CubicClass::OneModThree => self.overlap.norm() > 1e-3,
            }
    }
}

pub fn cubic_sum_dependency(x: AlltopParameter, tol: Tolerance) -> Result<CubicSumReport> {
    let n = x.dim();
    if n < 5 {
        return Err(Error::Domain(format!("cubic sum dependency needs N >= 5, got {n}")));
    }
    let f = alltop_fiducial(x)?;
    let g = stabilizer_element(x, tol)?.matrix;
    let standard = standard_mub(n)?;
    let mut v = CVector::uniform(n);
    let overlap = v.inner(&f)?;
    let mut vectors = Vec::with_capacity(n);
    let mut bases_hit = Vec::with_capacity(n);
    let mut max_overlap: f64 = 0.0;
    for _ in 0..n {
        bases_hit.push(standard.bases.iter().position(|b| {
            b.vectors
                .iter()
                .any(|w| (w.inner(&v).map(|z| z.norm()).unwrap_or(0.0) - 1.0).abs() <= tol.eps())
        }));
        max_overlap = max_overlap.max(v.inner(&f)?.norm());
        vectors.push(v.clone());
        v = g.apply(&v);
    }
    Ok(CubicSumReport {
        dim: n,
        x: x.value(),
        class: if n % 3 == 1 {
            CubicClass::OneModThree
        } else {
            CubicClass::TwoModThree
        },
        overlap,
        bases_hit,
        max_overlap,
        rank: rank(&vectors, tol),
    })
}

/// The parity-invariant vector of each standard basis and their span.
#[derive(Clone, Debug, PartialEq)]
pub struct PhasePointReport {
    pub dim: usize,
    pub invariant: Vec<CVector>,
    pub rank: usize,
}

/// `|a> -> |-a>`.
pub fn parity_matrix(n: usize) -> CMatrix {
    CMatrix::from_fn(n, |r, c| {
        if (r + c) % n == 0 {
            C64::new(1.0, 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    })
}

pub fn phase_point_dependencies(n: usize, tol: Tolerance) -> Result<PhasePointReport> {
    let m = Modulus::new(n as u64)?;
    if m.get() == 2 {
        return Err(Error::Domain("phase points need an odd prime".into()));
    }
    let p = parity_matrix(n);
    let mut invariant = Vec::with_capacity(n + 1);
    for (k, b) in standard_mub(n)?.bases.iter().enumerate() {
        let fixed: Vec<&CVector> = b
            .vectors
            .iter()
            .filter(|v| p.apply(v).max_abs_diff(v) <= tol.eps())
            .collect();
        if fixed.len() != 1 {
            return Err(Error::InvariantVectorNotUnique {
                basis: k,
                count: fixed.len(),
            });
        }
        invariant.push(fixed[0].clone());
    }
    let rank = rank(&invariant, tol);
    Ok(PhasePointReport {
        dim: n,
        invariant,
        rank,
    })
}
