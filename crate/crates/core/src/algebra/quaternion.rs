use std::ops::{Add, Mul, Neg, Sub};

use super::SignedPermMatrix;

/// Hamilton quaternion `w + x i + y j + z k`.
///
/// Also used to carry real and complex scalars (`y = z = 0`), which keeps the
/// `F in {R, C, H}` code paths in one place.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Quaternion {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Quaternion {
    pub const ZERO: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 0.0);
    pub const ONE: Quaternion = Quaternion::new(1.0, 0.0, 0.0, 0.0);
    pub const I: Quaternion = Quaternion::new(0.0, 1.0, 0.0, 0.0);
    pub const J: Quaternion = Quaternion::new(0.0, 0.0, 1.0, 0.0);
    pub const K: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 1.0);

    pub const fn new(w: f64, x: f64, y: f64, z: f64) -> Self {
        Quaternion { w, x, y, z }
    }

    pub const fn real(w: f64) -> Self {
        Quaternion::new(w, 0.0, 0.0, 0.0)
    }

    pub fn from_array(a: [f64; 4]) -> Self {
        Quaternion::new(a[0], a[1], a[2], a[3])
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.w, self.x, self.y, self.z]
    }

    pub fn conj(self) -> Self {
        Quaternion::new(self.w, -self.x, -self.y, -self.z)
    }

    pub fn norm_sqr(self) -> f64 {
        self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z
    }

    pub fn norm(self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn scale(self, s: f64) -> Self {
        Quaternion::new(self.w * s, self.x * s, self.y * s, self.z * s)
    }
}

/// Hamilton product.
pub fn quat_mul(a: Quaternion, b: Quaternion) -> Quaternion {
    Quaternion::new(
        a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
        a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
        a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
        a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w,
    )
}

impl Mul for Quaternion {
    type Output = Quaternion;
    fn mul(self, rhs: Quaternion) -> Quaternion {
        quat_mul(self, rhs)
    }
}

impl Add for Quaternion {
    type Output = Quaternion;
    fn add(self, rhs: Quaternion) -> Quaternion {
        Quaternion::new(self.w + rhs.w, self.x + rhs.x, self.y + rhs.y, self.z + rhs.z)
    }
}

impl Sub for Quaternion {
    type Output = Quaternion;
    fn sub(self, rhs: Quaternion) -> Quaternion {
        Quaternion::new(self.w - rhs.w, self.x - rhs.x, self.y - rhs.y, self.z - rhs.z)
    }
}

impl Neg for Quaternion {
    type Output = Quaternion;
    fn neg(self) -> Quaternion {
        Quaternion::new(-self.w, -self.x, -self.y, -self.z)
    }
}

/// Matrix of `x |-> q x` on `R^4 = H` for a basis unit `q in {1, i, j, k}`.
///
/// # Panics
/// If `q` is not one of the four basis units (the result would not be a
/// signed permutation).
pub fn quat_left_mult_signed_perm(q: Quaternion) -> SignedPermMatrix {
    let basis = [Quaternion::ONE, Quaternion::I, Quaternion::J, Quaternion::K];
    let columns: Vec<[f64; 4]> = basis.iter().map(|&e| (q * e).to_array()).collect();
    SignedPermMatrix::from_columns(&columns.iter().map(|c| c.to_vec()).collect::<Vec<_>>())
        .expect("left multiplication by a basis unit is a signed permutation")
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Bilinear expansion of the product through the multiplication table of
    /// the basis units, written independently of `quat_mul`.
    fn expand(a: Quaternion, b: Quaternion) -> Quaternion {
        // table[r][s] = (sign, index) of e_r e_s
        let table: [[(f64, usize); 4]; 4] = [
            [(1.0, 0), (1.0, 1), (1.0, 2), (1.0, 3)],
            [(1.0, 1), (-1.0, 0), (1.0, 3), (-1.0, 2)],
            [(1.0, 2), (-1.0, 3), (-1.0, 0), (1.0, 1)],
            [(1.0, 3), (1.0, 2), (-1.0, 1), (-1.0, 0)],
        ];
        let (ca, cb) = (a.to_array(), b.to_array());
        let mut out = [0.0; 4];
        for r in 0..4 {
            for s in 0..4 {
                let (sign, idx) = table[r][s];
                out[idx] += sign * ca[r] * cb[s];
            }
        }
        Quaternion::from_array(out)
    }

    #[test]
    fn identity_and_units() {
        let q = Quaternion::new(0.3, -1.2, 2.0, 0.5);
        assert_eq!(Quaternion::ONE * q, q);
        assert_eq!(Quaternion::I * Quaternion::J, Quaternion::K);
        assert_eq!(Quaternion::J * Quaternion::K, Quaternion::I);
        assert_eq!(Quaternion::I * Quaternion::I, Quaternion::real(-1.0));
    }

    #[test]
    fn i_plus_j_times_i_minus_j() {
        let a = Quaternion::I + Quaternion::J;
        let b = Quaternion::I - Quaternion::J;
        let oracle = expand(a, b);
        assert_eq!(oracle, Quaternion::new(0.0, 0.0, 0.0, -2.0));
        assert_eq!(a * b, oracle);
    }

    #[test]
    fn matches_bilinear_expansion() {
        let a = Quaternion::new(0.7, -0.1, 0.4, 1.3);
        let b = Quaternion::new(-2.0, 0.25, 0.9, -0.6);
        let (p, q) = (a * b, expand(a, b));
        for (x, y) in p.to_array().iter().zip(q.to_array()) {
            assert!((x - y).abs() < 1e-15);
        }
    }

    #[test]
    fn left_mult_matrices() {
        let li = quat_left_mult_signed_perm(Quaternion::I);
        let lj = quat_left_mult_signed_perm(Quaternion::J);
        let neg_id = SignedPermMatrix::identity(4).neg();
        assert_eq!(li.mul(&li), neg_id);
        assert_eq!(li.mul(&lj), lj.mul(&li).neg());
        assert_eq!(li.transpose(), li.neg());
    }
}
