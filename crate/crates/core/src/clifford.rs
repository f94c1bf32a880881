//! The projective Clifford group over `Z_N` for prime `N`.
//!
//! Elements are stored symbolically as `(g, p)`, standing for `D_p U_g`,
//! with `g` in `SL(2, Z_N)`. Matrices are only materialized on request.
//! The representation is covariant: `U_g D_p U_g^dagger ~ D_(g p)`, which
//! makes `g -> U_g` a projective homomorphism and gives the product law
//! `(g1, p1)(g2, p2) = (g1 g2, p1 + g1 p2)`.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::{root_of_unity, CMatrix, Tolerance, C64, ONE, ZERO};
use crate::modring::{Modulus, Residue};
use crate::weylheisenberg::{displacement, DisplacementIndex};

/// A 2x2 matrix over `Z_N` with unit determinant.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SymplecticMatrix {
    pub alpha: Residue,
    pub beta: Residue,
    pub gamma: Residue,
    pub delta: Residue,
}

impl SymplecticMatrix {
    /// `[[alpha, beta], [gamma, delta]]`; fails unless the determinant is 1.
    pub fn new(alpha: Residue, beta: Residue, gamma: Residue, delta: Residue) -> Result<Self> {
        let m = alpha.modulus();
        for r in [beta, gamma, delta] {
            if r.modulus() != m {
                return Err(Error::ModulusMismatch(m.get(), r.modulus().get()));
            }
        }
        let det = alpha * delta - beta * gamma;
        if det != m.one() {
            return Err(Error::NotSymplectic {
                det: det.value(),
                modulus: m.get(),
            });
        }
        Ok(SymplecticMatrix {
            alpha,
            beta,
            gamma,
            delta,
        })
    }

    pub fn from_ints(a: i64, b: i64, c: i64, d: i64, m: Modulus) -> Result<Self> {
        Self::new(m.residue(a), m.residue(b), m.residue(c), m.residue(d))
    }

    fn raw(a: i64, b: i64, c: i64, d: i64, m: Modulus) -> Self {
        Self::from_ints(a, b, c, d, m).expect("determinant one by construction")
    }

    pub fn identity(m: Modulus) -> Self {
        Self::raw(1, 0, 0, 1, m)
    }

    /// `[[1, 0], [1, 1]]`, represented by the diagonal quadratic phase.
    pub fn s(m: Modulus) -> Self {
        Self::raw(1, 0, 1, 1, m)
    }

    /// `[[0, -1], [1, 0]]`, represented by the Fourier matrix.
    pub fn f(m: Modulus) -> Self {
        Self::raw(0, -1, 1, 0, m)
    }

    /// `-1`, represented by the parity operator.
    pub fn parity(m: Modulus) -> Self {
        Self::raw(-1, 0, 0, -1, m)
    }

    #[inline]
    pub fn modulus(&self) -> Modulus {
        self.alpha.modulus()
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.modulus())
    }

    pub fn trace(&self) -> Residue {
        self.alpha + self.delta
    }

    pub fn mul(&self, o: &SymplecticMatrix) -> SymplecticMatrix {
        SymplecticMatrix {
            alpha: self.alpha * o.alpha + self.beta * o.gamma,
            beta: self.alpha * o.beta + self.beta * o.delta,
            gamma: self.gamma * o.alpha + self.delta * o.gamma,
            delta: self.gamma * o.beta + self.delta * o.delta,
        }
    }

    pub fn pow(&self, e: u64) -> SymplecticMatrix {
        (0..e).fold(Self::identity(self.modulus()), |acc, _| acc.mul(self))
    }

    pub fn inverse(&self) -> SymplecticMatrix {
        SymplecticMatrix {
            alpha: self.delta,
            beta: -self.beta,
            gamma: -self.gamma,
            delta: self.alpha,
        }
    }

    pub fn apply(&self, p: DisplacementIndex) -> DisplacementIndex {
        DisplacementIndex {
            p1: self.alpha * p.p1 + self.beta * p.p2,
            p2: self.gamma * p.p1 + self.delta * p.p2,
        }
    }

    /// Smallest `m >= 1` with `g^m = 1`.
    pub fn order(&self) -> u64 {
        let mut acc = *self;
        let mut m = 1;
        while !acc.is_identity() {
            acc = acc.mul(self);
            m += 1;
        }
        m
    }

    /// All `N(N^2 - 1)` elements of `SL(2, Z_N)`, lexicographically sorted.
    pub fn all(m: Modulus) -> Vec<SymplecticMatrix> {
        let mut out = Vec::new();
        for a in m.elements() {
            for b in m.elements() {
                for c in m.elements() {
                    for d in m.elements() {
                        if a * d - b * c == m.one() {
                            out.push(SymplecticMatrix {
                                alpha: a,
                                beta: b,
                                gamma: c,
                                delta: d,
                            });
                        }
                    }
                }
            }
        }
        out
    }
}

impl fmt::Debug for SymplecticMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[[{}, {}], [{}, {}]] mod {}",
            self.alpha,
            self.beta,
            self.gamma,
            self.delta,
            self.modulus().get()
        )
    }
}

/// `D_p U_g`, up to phase.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CliffordElement {
    pub g: SymplecticMatrix,
    pub p: DisplacementIndex,
}

impl CliffordElement {
    pub fn new(g: SymplecticMatrix, p: DisplacementIndex) -> Result<Self> {
        if g.modulus() != p.modulus() {
            return Err(Error::ModulusMismatch(g.modulus().get(), p.modulus().get()));
        }
        Ok(CliffordElement { g, p })
    }

    pub fn identity(m: Modulus) -> Self {
        CliffordElement {
            g: SymplecticMatrix::identity(m),
            p: DisplacementIndex::zero(m),
        }
    }

    pub fn modulus(&self) -> Modulus {
        self.g.modulus()
    }

    pub fn is_identity(&self) -> bool {
        self.g.is_identity() && self.p.is_zero()
    }

    /// `c^e` by repeated composition.
    pub fn pow(&self, e: u64) -> CliffordElement {
        (0..e).fold(Self::identity(self.modulus()), |acc, _| compose_unchecked(&acc, self))
    }

    /// Every element of the projective group, `g` major.
    pub fn all(m: Modulus) -> Vec<CliffordElement> {
        SymplecticMatrix::all(m)
            .into_iter()
            .flat_map(|g| DisplacementIndex::all(m).map(move |p| CliffordElement { g, p }))
            .collect()
    }
}

/// A unitary rescaled so that `U^order = 1`, with no smaller positive
/// power equal to the identity.
#[derive(Clone, Debug, PartialEq)]
pub struct NormalizedUnitary {
    pub matrix: CMatrix,
    pub order: usize,
}

impl NormalizedUnitary {
    /// Rescales `u` by a unimodular `zeta` with `(zeta u)^order = 1`.
    pub fn normalize(u: &CMatrix, order: usize, tol: Tolerance) -> Result<Self> {
        assert!(order >= 1, "order must be positive");
        let c = u.pow(order).scalar_part(tol).ok_or(Error::NotOrderM {
            order,
            deviation: f64::NAN,
        })?;
        let zeta = C64::from_polar(1.0, -c.arg() / order as f64);
        let matrix = u.scale(zeta);
        let id = CMatrix::identity(u.dim());
        let deviation = matrix.pow(order).max_abs_diff(&id);
        if deviation > tol.eps() {
            return Err(Error::NotOrderM { order, deviation });
        }
        let mut power = CMatrix::identity(u.dim());
        for _ in 1..order {
            power = &power * &matrix;
            if power.max_abs_diff(&id) <= tol.eps() {
                return Err(Error::NotOrderM { order, deviation: 0.0 });
            }
        }
        Ok(NormalizedUnitary { matrix, order })
    }
}

fn require_odd(m: Modulus) -> Result<()> {
    if m.get() == 2 {
        Err(Error::Domain(
            "matrix representation needs an odd prime dimension".into(),
        ))
    } else {
        Ok(())
    }
}

/// The metaplectic unitary of `g` with overall phase fixed by `theta = 0`:
/// `(U_g)_(u,v) = tau^(beta^-1 (delta u^2 - 2uv + alpha v^2)) / sqrt(N)`.
///
/// When `beta = 0` the matrix is built as `U_(gF) U_(F^-1)`; both factors
/// have invertible upper-right entries.
pub fn symplectic_unitary(g: &SymplecticMatrix) -> Result<CMatrix> {
    let m = g.modulus();
    require_odd(m)?;
    if g.beta.is_zero() {
        let f = SymplecticMatrix::f(m);
        let left = symplectic_unitary(&g.mul(&f))?;
        let right = symplectic_unitary(&f.inverse())?;
        return Ok(&left * &right);
    }
    let n = m.get();
    let beta_inv = g.beta.inverse()?;
    let half = m.residue(2).inverse()?;
    let norm = C64::new(1.0 / (n as f64).sqrt(), 0.0);
    Ok(CMatrix::from_fn(n as usize, |u, v| {
        let (u, v) = (m.residue(u as i64), m.residue(v as i64));
        let e = beta_inv * (g.delta * u * u - m.residue(2) * u * v + g.alpha * v * v);
        // tau = omega^(1/2) for odd N
        root_of_unity((e * half).value() as i64, n) * norm
    }))
}

/// Matrix of `D_p U_g`.
pub fn clifford_matrix(c: &CliffordElement) -> Result<CMatrix> {
    Ok(&displacement(c.p) * &symplectic_unitary(&c.g)?)
}

/// The parity permutation `|a> -> |-a>`, normalized to order 2.
pub fn parity_unitary(m: Modulus) -> Result<NormalizedUnitary> {
    require_odd(m)?;
    let n = m.get() as usize;
    let matrix = CMatrix::from_fn(n, |r, c| if r == (n - c) % n { ONE } else { ZERO });
    Ok(NormalizedUnitary { matrix, order: 2 })
}

fn compose_unchecked(c1: &CliffordElement, c2: &CliffordElement) -> CliffordElement {
    CliffordElement {
        g: c1.g.mul(&c2.g),
        p: c1.p + c1.g.apply(c2.p),
    }
}

/// `(g1, p1)(g2, p2) = (g1 g2, p1 + g1 p2)`.
pub fn compose(c1: &CliffordElement, c2: &CliffordElement) -> Result<CliffordElement> {
    if c1.modulus() != c2.modulus() {
        return Err(Error::ModulusMismatch(c1.modulus().get(), c2.modulus().get()));
    }
    Ok(compose_unchecked(c1, c2))
}

/// Smallest `m >= 1` with `c^m` projectively the identity, computed in
/// integer arithmetic.
pub fn element_order(c: &CliffordElement) -> u64 {
    let mut acc = *c;
    let mut m = 1;
    while !acc.is_identity() {
        acc = compose_unchecked(&acc, c);
        m += 1;
    }
    m
}

/// Whether `c = D_q U_g D_q^-1` for some `q`, i.e. whether `p` lies in the
/// image of `1 - g`.
pub fn is_wh_translate(c: &CliffordElement) -> Result<bool> {
    let g = &c.g;
    if g.is_identity() {
        return Err(Error::Domain(
            "element belongs to the Weyl-Heisenberg group itself".into(),
        ));
    }
    let m = g.modulus();
    // det(1 - g) = 2 - tr g
    if g.trace() != m.residue(2) {
        return Ok(true);
    }
    let one = m.one();
    let col1 = (one - g.alpha, -g.gamma);
    let col2 = (-g.beta, one - g.delta);
    let v = if col1.0.is_zero() && col1.1.is_zero() {
        col2
    } else {
        col1
    };
    Ok((v.0 * c.p.p2 - v.1 * c.p.p1).is_zero())
}

/// A cyclic subgroup, given by its smallest non-identity element and the
/// sorted list of all non-identity elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclicSubgroup<T> {
    pub generator: T,
    pub elements: Vec<T>,
}

/// The `N + 1` cyclic subgroups of order `N` in `SL(2, Z_N)`.
pub fn enumerate_order_n_symplectic_subgroups(m: Modulus) -> Vec<CyclicSubgroup<SymplecticMatrix>> {
    let n = m.get();
    let mut found: BTreeMap<SymplecticMatrix, Vec<SymplecticMatrix>> = BTreeMap::new();
    for g in SymplecticMatrix::all(m) {
        if g.order() != n {
            continue;
        }
        let mut elems: Vec<SymplecticMatrix> = (1..n).map(|k| g.pow(k)).collect();
        elems.sort();
        found.entry(elems[0]).or_insert(elems);
    }
    found
        .into_iter()
        .map(|(generator, elements)| CyclicSubgroup { generator, elements })
        .collect()
}

/// Census of the order-`N` cyclic subgroups of the projective Clifford
/// group that are not contained in the Weyl-Heisenberg group.
#[derive(Clone, Debug)]
pub struct CliffordSubgroupCensus {
    pub modulus: Modulus,
    pub symplectic_order: usize,
    pub order_n_elements: usize,
    pub translate_elements: usize,
    pub non_translate_elements: usize,
    pub translate_subgroups: Vec<CyclicSubgroup<CliffordElement>>,
    pub non_translate_subgroups: Vec<CyclicSubgroup<CliffordElement>>,
    /// Order-`N` subgroups of the Weyl-Heisenberg group (not part of the
    /// totals above).
    pub wh_subgroups: usize,
}

impl CliffordSubgroupCensus {
    pub fn total_subgroups(&self) -> usize {
        self.translate_subgroups.len() + self.non_translate_subgroups.len()
    }
}

/// Exhaustive enumeration of order-`N` elements `(g, p)` with `g != 1`,
/// grouped into cyclic subgroups and split by translate type.
pub fn enumerate_order_n_clifford_subgroups(m: Modulus, cap: usize) -> Result<CliffordSubgroupCensus> {
    let n = m.get();
    if n as usize > cap {
        return Err(Error::DimensionTooLarge { n: n as usize, cap });
    }
    let sl = SymplecticMatrix::all(m);
    let mut census = CliffordSubgroupCensus {
        modulus: m,
        symplectic_order: sl.len(),
        order_n_elements: 0,
        translate_elements: 0,
        non_translate_elements: 0,
        translate_subgroups: Vec::new(),
        non_translate_subgroups: Vec::new(),
        wh_subgroups: 0,
    };
    let mut translate: BTreeMap<CliffordElement, Vec<CliffordElement>> = BTreeMap::new();
    let mut other: BTreeMap<CliffordElement, Vec<CliffordElement>> = BTreeMap::new();
    let mut wh: BTreeMap<CliffordElement, ()> = BTreeMap::new();
    for &g in &sl {
        for p in DisplacementIndex::all(m) {
            let c = CliffordElement { g, p };
            if c.is_identity() || element_order(&c) != n {
                continue;
            }
            let mut elems: Vec<CliffordElement> = (1..n).map(|k| c.pow(k)).collect();
            elems.sort();
            if g.is_identity() {
                wh.insert(elems[0], ());
                continue;
            }
            census.order_n_elements += 1;
            let target = if is_wh_translate(&c)? {
                census.translate_elements += 1;
                &mut translate
            } else {
                census.non_translate_elements += 1;
                &mut other
            };
            target.entry(elems[0]).or_insert(elems);
        }
    }
    census.wh_subgroups = wh.len();
    let collect = |map: BTreeMap<CliffordElement, Vec<CliffordElement>>| {
        map.into_iter()
            .map(|(generator, elements)| CyclicSubgroup { generator, elements })
            .collect()
    };
    census.translate_subgroups = collect(translate);
    census.non_translate_subgroups = collect(other);
    Ok(census)
}
