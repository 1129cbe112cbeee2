use std::ops::{Add, Mul, Neg, Sub};

use super::{DenseMatrix, Quaternion, SignedPermMatrix};
use crate::{Error, Result};

/// Octonion as a Cayley–Dickson pair `(a, b)` of quaternions.
///
/// Basis order: `e_0..e_3 = (1|i|j|k, 0)`, `e_4..e_7 = (0, 1|i|j|k)`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Octonion {
    pub a: Quaternion,
    pub b: Quaternion,
}

impl Octonion {
    pub const ONE: Octonion = Octonion { a: Quaternion::ONE, b: Quaternion::ZERO };

    pub fn new(a: Quaternion, b: Quaternion) -> Self {
        Octonion { a, b }
    }

    /// Basis element `e_index`, `index < 8`.
    pub fn basis(index: usize) -> Self {
        assert!(index < 8, "octonion basis index {index} out of range");
        let mut c = [0.0; 8];
        c[index] = 1.0;
        Octonion::from_array(c)
    }

    pub fn from_array(c: [f64; 8]) -> Self {
        Octonion {
            a: Quaternion::new(c[0], c[1], c[2], c[3]),
            b: Quaternion::new(c[4], c[5], c[6], c[7]),
        }
    }

    pub fn to_array(self) -> [f64; 8] {
        let (a, b) = (self.a.to_array(), self.b.to_array());
        [a[0], a[1], a[2], a[3], b[0], b[1], b[2], b[3]]
    }

    pub fn conj(self) -> Self {
        Octonion { a: self.a.conj(), b: -self.b }
    }

    pub fn re(self) -> f64 {
        self.a.w
    }

    pub fn norm(self) -> f64 {
        (self.a.norm_sqr() + self.b.norm_sqr()).sqrt()
    }

    pub fn scale(self, s: f64) -> Self {
        Octonion { a: self.a.scale(s), b: self.b.scale(s) }
    }
}

/// Cayley–Dickson product `(a, b)(c, d) = (ac - d̄b, da + bc̄)`.
pub fn oct_mul(x: Octonion, y: Octonion) -> Octonion {
    let (a, b, c, d) = (x.a, x.b, y.a, y.b);
    Octonion { a: a * c - d.conj() * b, b: d * a + b * c.conj() }
}

impl Mul for Octonion {
    type Output = Octonion;
    fn mul(self, rhs: Octonion) -> Octonion {
        oct_mul(self, rhs)
    }
}

impl Add for Octonion {
    type Output = Octonion;
    fn add(self, rhs: Octonion) -> Octonion {
        Octonion { a: self.a + rhs.a, b: self.b + rhs.b }
    }
}

impl Sub for Octonion {
    type Output = Octonion;
    fn sub(self, rhs: Octonion) -> Octonion {
        Octonion { a: self.a - rhs.a, b: self.b - rhs.b }
    }
}

impl Neg for Octonion {
    type Output = Octonion;
    fn neg(self) -> Octonion {
        Octonion { a: -self.a, b: -self.b }
    }
}

/// Matrix of `x |-> u x` on `R^8` for an imaginary unit octonion `u`.
///
/// By alternativity `u(ux) = (uu)x = -x`, so the result squares to `-Id` and
/// is skew-symmetric.
pub fn left_mult_matrix(u: Octonion) -> Result<DenseMatrix> {
    if u.re().abs() > 1e-12 {
        return Err(Error::InvalidParameter(format!(
            "left multiplication needs an imaginary octonion, real part is {}",
            u.re()
        )));
    }
    if (u.norm() - 1.0).abs() > 1e-12 {
        return Err(Error::NotUnit(u.norm()));
    }
    let mut m = DenseMatrix::zeros(8, 8);
    for c in 0..8 {
        let col = (u * Octonion::basis(c)).to_array();
        for (r, v) in col.iter().enumerate() {
            m[(r, c)] = *v;
        }
    }
    Ok(m)
}

/// Exact matrix of left multiplication by the basis unit `e_index`, `1 <= index <= 7`.
pub fn left_mult_signed_perm(index: usize) -> Result<SignedPermMatrix> {
    if !(1..8).contains(&index) {
        return Err(Error::InvalidParameter(format!(
            "imaginary octonion basis index must lie in 1..=7, got {index}"
        )));
    }
    let dense = left_mult_matrix(Octonion::basis(index))?;
    SignedPermMatrix::from_dense(&dense)
        .ok_or_else(|| Error::InvalidParameter("left multiplication is not a signed permutation".into()))
}
