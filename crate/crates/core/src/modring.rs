//! Exact arithmetic in the ring of integers modulo a prime.
//!
//! Every scalar that indexes a group element (displacements, symplectic
//! entries, Alltop parameters) is a [`Residue`]. Values are kept fully
//! reduced into `[0, N)` so that derived equality and hashing are exact.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// Deterministic trial-division primality test; moduli here are small.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// A prime modulus `N`, validated once at construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Modulus(u64);

impl Modulus {
    pub fn new(n: u64) -> Result<Self> {
        if is_prime(n) {
            Ok(Modulus(n))
        } else {
            Err(Error::NotPrime(n))
        }
    }

    #[inline]
    pub fn get(self) -> u64 {
        self.0
    }

    /// Reduces an arbitrary integer into the ring.
    #[inline]
    pub fn residue(self, value: i64) -> Residue {
        Residue {
            value: value.rem_euclid(self.0 as i64) as u64,
            modulus: self.0,
        }
    }

    #[inline]
    pub fn zero(self) -> Residue {
        self.residue(0)
    }

    #[inline]
    pub fn one(self) -> Residue {
        self.residue(1)
    }

    /// All `N` residues in increasing order.
    pub fn elements(self) -> impl Iterator<Item = Residue> {
        (0..self.0).map(move |v| Residue {
            value: v,
            modulus: self.0,
        })
    }

    /// The nonzero residues `1..N`.
    pub fn units(self) -> impl Iterator<Item = Residue> {
        self.elements().skip(1)
    }
}

/// An element of `Z_N` for prime `N`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Residue {
    value: u64,
    modulus: u64,
}

impl Residue {
    /// Builds `value mod modulus`, rejecting composite moduli.
    ///
    /// Negative literals are reduced, so `Residue::new(-3, 7)` is `4 mod 7`.
    pub fn new(value: i64, modulus: u64) -> Result<Self> {
        Ok(Modulus::new(modulus)?.residue(value))
    }

    #[inline]
    pub fn value(self) -> u64 {
        self.value
    }

    #[inline]
    pub fn modulus(self) -> Modulus {
        Modulus(self.modulus)
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    pub fn pow(self, mut e: u64) -> Residue {
        let m = self.modulus;
        let mut base = self.value;
        let mut acc = 1 % m;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % m;
            }
            base = base * base % m;
            e >>= 1;
        }
        Residue { value: acc, modulus: m }
    }

    /// Multiplicative inverse via Fermat's little theorem.
    pub fn inverse(self) -> Result<Residue> {
        if self.value == 0 {
            return Err(Error::ZeroInverse(self.modulus));
        }
        Ok(self.pow(self.modulus - 2))
    }

    /// Lifts to the representative in `(-N/2, N/2]`.
    pub fn centered(self) -> i64 {
        let v = self.value as i64;
        let m = self.modulus as i64;
        if 2 * v > m {
            v - m
        } else {
            v
        }
    }

    #[inline]
    fn check(self, other: Residue) {
        assert_eq!(
            self.modulus, other.modulus,
            "arithmetic between residues of different moduli"
        );
    }
}

impl fmt::Debug for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}", self.value, self.modulus)
    }
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Add for Residue {
    type Output = Residue;
    fn add(self, rhs: Residue) -> Residue {
        self.check(rhs);
        Residue {
            value: (self.value + rhs.value) % self.modulus,
            modulus: self.modulus,
        }
    }
}

impl Sub for Residue {
    type Output = Residue;
    fn sub(self, rhs: Residue) -> Residue {
        self.check(rhs);
        Residue {
            value: (self.value + self.modulus - rhs.value) % self.modulus,
            modulus: self.modulus,
        }
    }
}

impl Mul for Residue {
    type Output = Residue;
    fn mul(self, rhs: Residue) -> Residue {
        self.check(rhs);
        Residue {
            value: self.value * rhs.value % self.modulus,
            modulus: self.modulus,
        }
    }
}

impl Neg for Residue {
    type Output = Residue;
    fn neg(self) -> Residue {
        Residue {
            value: (self.modulus - self.value) % self.modulus,
            modulus: self.modulus,
        }
    }
}

pub fn inverse(a: Residue) -> Result<Residue> {
    a.inverse()
}

/// Euler's criterion: `a^((N-1)/2) == 1`.
pub fn is_quadratic_residue(a: Residue) -> Result<bool> {
    let n = a.modulus;
    if n == 2 {
        return Err(Error::Domain("quadratic residuosity needs an odd prime modulus".into()));
    }
    if a.is_zero() {
        return Err(Error::Domain("zero is excluded from the residue test".into()));
    }
    Ok(a.pow((n - 1) / 2).value == 1)
}

/// Displacement `(i, j)` and phase exponent `k` of the element
/// `omega^k D_(i,j) U_S` that fixes the cubic fiducial with parameter `x`:
/// `i = 1/(6x)`, `j = 1/(12x)`, `k = -1/(432 x^2)`.
///
/// Requires `N > 3` so that 6, 12 and 432 are invertible.
pub fn stabilizer_params(x: Residue) -> Result<(Residue, Residue, Residue)> {
    let m = x.modulus();
    if m.get() <= 3 {
        return Err(Error::Domain(format!(
            "stabilizer parameters need N > 3, got N = {}",
            m.get()
        )));
    }
    if x.is_zero() {
        return Err(Error::Domain("cubic parameter x must be nonzero".into()));
    }
    let i = (m.residue(6) * x).inverse()?;
    let j = (m.residue(12) * x).inverse()?;
    let k = -(m.residue(432) * x * x).inverse()?;
    Ok((i, j, k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const PRIMES: [u64; 9] = [2, 3, 5, 7, 11, 13, 17, 19, 23];

    fn brute_inverse(a: u64, n: u64) -> Option<u64> {
        (1..n).find(|b| a * b % n == 1)
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(Residue::new(1, 5).unwrap().inverse().unwrap().value(), 1);
        assert_eq!(Residue::new(2, 5).unwrap().inverse().unwrap().value(), 3);
        assert_eq!(Residue::new(0, 7).unwrap().inverse(), Err(Error::ZeroInverse(7)));
    }

    #[test]
    fn inverse_matches_exhaustive_search() {
        for &n in &PRIMES {
            for a in 1..n {
                let inv = Residue::new(a as i64, n).unwrap().inverse().unwrap();
                assert_eq!(Some(inv.value()), brute_inverse(a, n), "a={a} n={n}");
            }
        }
    }

    #[test]
    fn composite_modulus_rejected() {
        assert_eq!(Residue::new(1, 9), Err(Error::NotPrime(9)));
        assert_eq!(Modulus::new(1), Err(Error::NotPrime(1)));
    }

    #[test]
    fn negative_literals_reduce() {
        assert_eq!(Residue::new(-3, 7).unwrap().value(), 4);
        assert_eq!(Residue::new(-3, 5).unwrap().value(), 2);
        assert_eq!(Residue::new(-10, 5).unwrap().value(), 0);
    }

    #[test]
    fn quadratic_residue_examples() {
        assert!(is_quadratic_residue(Residue::new(-3, 7).unwrap()).unwrap());
        assert!(!is_quadratic_residue(Residue::new(-3, 5).unwrap()).unwrap());
        assert!(is_quadratic_residue(Residue::new(1, 11).unwrap()).unwrap());
        assert!(is_quadratic_residue(Residue::new(0, 7).unwrap()).is_err());
        assert!(is_quadratic_residue(Residue::new(1, 2).unwrap()).is_err());
    }

    #[test]
    fn euler_criterion_agrees_with_square_table() {
        for &n in PRIMES.iter().filter(|&&n| n > 2) {
            let squares: Vec<u64> = (1..n).map(|y| y * y % n).collect();
            for a in 1..n {
                let r = Residue::new(a as i64, n).unwrap();
                assert_eq!(is_quadratic_residue(r).unwrap(), squares.contains(&a), "a={a} n={n}");
            }
        }
    }

    #[test]
    fn minus_three_residue_tracks_n_mod_3() {
        for &n in PRIMES.iter().filter(|&&n| n >= 5) {
            let qr = is_quadratic_residue(Residue::new(-3, n).unwrap()).unwrap();
            assert_eq!(qr, n % 3 == 1, "n={n}");
        }
    }

    /// Searches all (i, j, k) for which
    /// `k + ij/2 + (a-i)j + (a-i)^2/2 + x(a-i)^3 == x a^3` for every `a`.
    fn brute_stabilizer_params(x: u64, n: u64) -> Vec<(u64, u64, u64)> {
        let m = Modulus::new(n).unwrap();
        let half = m.residue(2).inverse().unwrap();
        let x = m.residue(x as i64);
        let mut out = vec![];
        for i in m.elements() {
            for j in m.elements() {
                for k in m.elements() {
                    let ok = m.elements().all(|a| {
                        let b = a - i;
                        let lhs = k + i * j * half + b * j + b * b * half + x * b * b * b;
                        lhs == x * a * a * a
                    });
                    if ok {
                        out.push((i.value(), j.value(), k.value()));
                    }
                }
            }
        }
        out
    }

    #[test]
    fn stabilizer_params_match_brute_force() {
        assert_eq!(brute_stabilizer_params(1, 5), vec![(1, 3, 2)]);
        let (i, j, k) = stabilizer_params(Residue::new(1, 5).unwrap()).unwrap();
        assert_eq!((i.value(), j.value(), k.value()), (1, 3, 2));
        for n in [5u64, 7, 11] {
            for x in 1..n {
                let (i, j, k) = stabilizer_params(Residue::new(x as i64, n).unwrap()).unwrap();
                assert_eq!(
                    brute_stabilizer_params(x, n),
                    vec![(i.value(), j.value(), k.value())],
                    "x={x} n={n}"
                );
            }
        }
    }

    #[test]
    fn stabilizer_params_domain() {
        assert!(stabilizer_params(Residue::new(0, 5).unwrap()).is_err());
        assert!(stabilizer_params(Residue::new(1, 3).unwrap()).is_err());
        assert!(stabilizer_params(Residue::new(1, 2).unwrap()).is_err());
    }

    proptest! {
        #[test]
        fn inverse_is_two_sided(idx in 0usize..9, a in 1u64..1000) {
            let n = PRIMES[idx];
            let r = Modulus::new(n).unwrap().residue(a as i64);
            prop_assume!(!r.is_zero());
            let inv = r.inverse().unwrap();
            prop_assert_eq!((r * inv).value(), 1);
            prop_assert_eq!((inv * r).value(), 1);
        }

        #[test]
        fn ring_ops_agree_with_integers(a in -500i64..500, b in -500i64..500) {
            let m = Modulus::new(13).unwrap();
            let (ra, rb) = (m.residue(a), m.residue(b));
            prop_assert_eq!(ra + rb, m.residue(a + b));
            prop_assert_eq!(ra - rb, m.residue(a - b));
            prop_assert_eq!(ra * rb, m.residue(a * b));
            prop_assert_eq!(-ra, m.residue(-a));
        }
    }
}
