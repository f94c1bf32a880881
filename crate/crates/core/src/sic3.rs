//! The one-parameter family of symmetric informationally complete sets in
//! dimension 3 and the diagonal unitary that shifts its parameter.

use std::f64::consts::{PI, TAU};

use crate::error::Result;
use crate::linalg::{sets_equal_up_to_phase, CMatrix, CVector, Tolerance, C64};
use crate::modring::Modulus;
use crate::weylheisenberg::{displacement, sigma_power, DisplacementIndex};

/// Parameter step carried by [`sic_shift_unitary`].
pub const SHIFT_STEP: f64 = 2.0 * PI / 9.0;

/// The fiducial `(0, 1, -e^(i phi))/sqrt(2)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SicFiducial {
    phi: f64,
}

impl SicFiducial {
    /// Reduces `phi` into `[0, 2 pi)`.
    pub fn new(phi: f64) -> Self {
        SicFiducial {
            phi: phi.rem_euclid(TAU),
        }
    }

    pub fn phi(self) -> f64 {
        self.phi
    }

    pub fn vector(self) -> CVector {
        let s = 1.0 / 2f64.sqrt();
        CVector::new(vec![
            C64::new(0.0, 0.0),
            C64::new(s, 0.0),
            -C64::from_polar(s, self.phi),
        ])
    }
}

/// The 9 displaced copies `D_p f`, `p1` major.
pub fn sic_orbit(f: SicFiducial) -> Vec<CVector> {
    let v = f.vector();
    let m = Modulus::new(3).expect("3 is prime");
    DisplacementIndex::all(m).map(|p| displacement(p).apply(&v)).collect()
}

/// Largest `| |<e_i|e_j>|^2 - 1/(N + 1) |` over distinct pairs.
pub fn sic_deviation(vectors: &[CVector]) -> Result<f64> {
    let target = 1.0 / (vectors.first().map_or(0, CVector::dim) as f64 + 1.0);
    let mut dev: f64 = 0.0;
    for (i, a) in vectors.iter().enumerate() {
        for b in &vectors[i + 1..] {
            dev = dev.max((a.inner(b)?.norm_sqr() - target).abs());
        }
    }
    Ok(dev)
}

pub fn is_sic(vectors: &[CVector], tol: Tolerance) -> Result<bool> {
    let n = vectors.first().map_or(0, CVector::dim);
    Ok(vectors.len() == n * n && sic_deviation(vectors)? <= tol.eps())
}

/// `diag(1, sigma^8, sigma^7)` with `sigma = e^(2 pi i/9)`.
pub fn sic_shift_unitary() -> CMatrix {
    CMatrix::diagonal(&[sigma_power(0), sigma_power(8), sigma_power(7)])
}

/// Which neighbouring orbit the shift unitary lands on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ShiftDirection {
    /// `phi + 2 pi/9`
    Plus,
    /// `phi - 2 pi/9`
    Minus,
    Both,
    Neither,
}

/// Compares `U` applied to the orbit of `phi` with the orbits of
/// `phi +- 2 pi/9` as projective sets.
pub fn shift_direction(f: SicFiducial, tol: Tolerance) -> Result<ShiftDirection> {
    let u = sic_shift_unitary();
    let image: Vec<CVector> = sic_orbit(f).iter().map(|v| u.apply(v)).collect();
    let plus = sets_equal_up_to_phase(&image, &sic_orbit(SicFiducial::new(f.phi + SHIFT_STEP)), tol)?;
    let minus = sets_equal_up_to_phase(&image, &sic_orbit(SicFiducial::new(f.phi - SHIFT_STEP)), tol)?;
    Ok(match (plus, minus) {
        (true, true) => ShiftDirection::Both,
        (true, false) => ShiftDirection::Plus,
        (false, true) => ShiftDirection::Minus,
        (false, false) => ShiftDirection::Neither,
    })
}
