//! Diagonal actions of `SO(k)`, `SU(k)` and `Sp(k)` on `F^k × F^k`, normal
//! forms of their orbits, and the homogeneity decision table.
//!
//! For `m ∈ {1, 2, 4}` a built system lives on `F^k × F^k` with
//! `F = R, C, H` of real dimension `m = delta(m)`: coordinates `(u, v)`, each
//! `k` consecutive blocks of `m` reals holding one scalar of `F` as
//! `(re, i, j, k)` components. The generators are `P_0(u, v) = (u, -v)`,
//! `P_1(u, v) = (v, u)` and `P_{r+1}(u, v) = (j_r v, -j_r u)` with `j_r`
//! acting by left multiplication, so the group acting by right
//! multiplication `u |-> u g` on row vectors preserves `pi_C`.

use num_complex::Complex64;
use serde::Serialize;

use crate::algebra::{norm, Quaternion, Sampler};
use crate::foliation::SpherePoint;
use crate::{EquivalenceProfile, Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Field {
    Real,
    Complex,
    Quaternion,
}

impl Field {
    /// The division algebra of real dimension `m`, if any.
    pub fn for_m(m: usize) -> Option<Field> {
        match m {
            1 => Some(Field::Real),
            2 => Some(Field::Complex),
            4 => Some(Field::Quaternion),
            _ => None,
        }
    }

    pub fn dim(self) -> usize {
        match self {
            Field::Real => 1,
            Field::Complex => 2,
            Field::Quaternion => 4,
        }
    }

    fn random_scalar(self, rng: &mut Sampler) -> Quaternion {
        let mut c = [0.0; 4];
        for v in c.iter_mut().take(self.dim()) {
            *v = rng.gaussian();
        }
        Quaternion::from_array(c)
    }
}

fn read_vector(field: Field, coords: &[f64]) -> Vec<Quaternion> {
    coords
        .chunks(field.dim())
        .map(|ch| {
            let mut c = [0.0; 4];
            c[..ch.len()].copy_from_slice(ch);
            Quaternion::from_array(c)
        })
        .collect()
}

fn write_vector(field: Field, v: &[Quaternion]) -> Vec<f64> {
    v.iter().flat_map(|q| q.to_array().into_iter().take(field.dim())).collect()
}

/// `sum_i a_i conj(b_i)`.
fn hermitian(a: &[Quaternion], b: &[Quaternion]) -> Quaternion {
    a.iter().zip(b).fold(Quaternion::ZERO, |acc, (x, y)| acc + *x * y.conj())
}

/// An element of `U(F, k)` (`SO(k)`, `SU(k)` or `Sp(k)`), stored as a
/// `k × k` row-major matrix of scalars of `F`.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupElement {
    field: Field,
    k: usize,
    entries: Vec<Quaternion>,
}

impl GroupElement {
    pub fn identity(field: Field, k: usize) -> Self {
        let mut entries = vec![Quaternion::ZERO; k * k];
        for i in 0..k {
            entries[i * k + i] = Quaternion::ONE;
        }
        GroupElement { field, k, entries }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn entry(&self, i: usize, j: usize) -> Quaternion {
        self.entries[i * self.k + j]
    }

    /// Row vector times `g`: `(u g)_j = sum_i u_i g_ij`.
    pub fn right_mul(&self, u: &[Quaternion]) -> Vec<Quaternion> {
        (0..self.k).map(|j| (0..self.k).fold(Quaternion::ZERO, |acc, i| acc + u[i] * self.entry(i, j))).collect()
    }

    /// Real `km × km` matrix of `u |-> u g` on `F^k = R^{km}`, acting on columns.
    pub fn real_matrix(&self) -> crate::algebra::DenseMatrix {
        let n = self.k * self.field.dim();
        let mut out = crate::algebra::DenseMatrix::zeros(n, n);
        for c in 0..n {
            let mut e = vec![0.0; n];
            e[c] = 1.0;
            let image = write_vector(self.field, &self.right_mul(&read_vector(self.field, &e)));
            for (r, v) in image.into_iter().enumerate() {
                out[(r, c)] = v;
            }
        }
        out
    }

    /// Determinant of the complex matrix (meaningful for `F = C`).
    pub fn complex_det(&self) -> Complex64 {
        let k = self.k;
        let mut a: Vec<Complex64> = self.entries.iter().map(|q| Complex64::new(q.w, q.x)).collect();
        let mut det = Complex64::new(1.0, 0.0);
        for col in 0..k {
            let pivot = (col..k).max_by(|&i, &j| a[i * k + col].norm().total_cmp(&a[j * k + col].norm())).unwrap_or(col);
            if a[pivot * k + col].norm() == 0.0 {
                return Complex64::new(0.0, 0.0);
            }
            if pivot != col {
                for c in 0..k {
                    a.swap(pivot * k + c, col * k + c);
                }
                det = -det;
            }
            let p = a[col * k + col];
            det *= p;
            for r in col + 1..k {
                let f = a[r * k + col] / p;
                for c in col..k {
                    let sub = f * a[col * k + c];
                    a[r * k + c] -= sub;
                }
            }
        }
        det
    }
}

/// Random element of `U(F, k)`: Gram–Schmidt on the rows of a Gaussian
/// matrix over `F` (hermitian product, coefficients on the left, two
/// passes), then `det = +1` for `F = R` and `det = 1` for `F = C` by
/// adjusting the first row.
///
/// `SU(1)` is trivial, so for `F = C, k = 1` the phase is left free and the
/// sample lies in `U(1)`, the group of the Hopf fibration `S^3 -> S^2`.
pub fn sample_group_element(field: Field, k: usize, seed: u64) -> Result<GroupElement> {
    if k == 0 {
        return Err(Error::InvalidParameter("group rank k must be positive".into()));
    }
    let mut rng = Sampler::new(seed);
    let mut rows: Vec<Vec<Quaternion>> = Vec::with_capacity(k);
    while rows.len() < k {
        let mut a: Vec<Quaternion> = (0..k).map(|_| field.random_scalar(&mut rng)).collect();
        for _ in 0..2 {
            for b in &rows {
                let c = hermitian(&a, b);
                a.iter_mut().zip(b).for_each(|(ai, bi)| *ai = *ai - c * *bi);
            }
        }
        let n = a.iter().map(|q| q.norm_sqr()).sum::<f64>().sqrt();
        if n >= 1e-8 {
            rows.push(a.into_iter().map(|q| q.scale(1.0 / n)).collect());
        }
    }
    let mut g = GroupElement { field, k, entries: rows.concat() };
    match field {
        Field::Real => {
            if g.real_matrix().det() < 0.0 {
                g.entries[..k].iter_mut().for_each(|q| *q = -*q);
            }
        }
        Field::Complex if k > 1 => {
            let d = g.complex_det();
            let phase = Quaternion::new(d.re, -d.im, 0.0, 0.0).scale(1.0 / d.norm());
            g.entries[..k].iter_mut().for_each(|q| *q = phase * *q);
        }
        _ => {}
    }
    Ok(g)
}

/// `(u g, v g)` for `x = (u, v) ∈ F^k × F^k`.
pub fn diagonal_act(g: &GroupElement, x: &SpherePoint) -> Result<SpherePoint> {
    let half = g.k * g.field.dim();
    if x.coords().len() != 2 * half {
        return Err(Error::DimensionMismatch { expected: 2 * half, actual: x.coords().len() });
    }
    let (u, v) = x.coords().split_at(half);
    let mut out = write_vector(g.field, &g.right_mul(&read_vector(g.field, u)));
    out.extend(write_vector(g.field, &g.right_mul(&read_vector(g.field, v))));
    SpherePoint::new(out)
}

/// Orbit representative `(u1 e_1, v1 e_1 + v2 e_2)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct NormalForm {
    pub u1: f64,
    pub v1: [f64; 4],
    pub v2: f64,
}

impl NormalForm {
    pub fn v1(&self) -> Quaternion {
        Quaternion::from_array(self.v1)
    }

    pub fn max_abs_diff(&self, other: &NormalForm) -> f64 {
        let mut d = (self.u1 - other.u1).abs().max((self.v2 - other.v2).abs());
        for (a, b) in self.v1.iter().zip(&other.v1) {
            d = d.max((a - b).abs());
        }
        d
    }

    /// The representative as a point of `F^k × F^k`; `k = 1` needs `v2 = 0`.
    pub fn point(&self, field: Field, k: usize) -> Result<SpherePoint> {
        if k == 0 || (k == 1 && self.v2 != 0.0) {
            return Err(Error::InvalidParameter(format!("normal form with v2 = {} needs k >= 2", self.v2)));
        }
        let mut u = vec![Quaternion::ZERO; k];
        let mut v = vec![Quaternion::ZERO; k];
        u[0] = Quaternion::real(self.u1);
        v[0] = self.v1();
        if k > 1 {
            v[1] = Quaternion::real(self.v2);
        }
        let mut out = write_vector(field, &u);
        out.extend(write_vector(field, &v));
        SpherePoint::normalized(&out)
    }
}

/// Normal form of a unit `(u, v) ∈ F^k × F^k`.
///
/// With `r0 = |u|^2 - |v|^2` and `w = sum_i u_i conj(v_i)`: `u1 = sqrt((1 + r0) / 2)`,
/// `v1 = conj(w) / u1` (or `sqrt((1 - r0) / 2)` when `u1 <= 1e-8`) and
/// `v2 = sqrt(max(0, (1 - r0) / 2 - |v1|^2))`. For `k = 1` there is no
/// second slot and `v2 = 0`.
pub fn normal_form(field: Field, k: usize, x: &SpherePoint) -> Result<NormalForm> {
    let half = k * field.dim();
    if x.coords().len() != 2 * half {
        return Err(Error::DimensionMismatch { expected: 2 * half, actual: x.coords().len() });
    }
    let (u, v) = x.coords().split_at(half);
    let (nu, nv) = (norm(u), norm(v));
    let r0 = nu * nu - nv * nv;
    let w = hermitian(&read_vector(field, u), &read_vector(field, v));
    let u1 = (0.5 * (1.0 + r0)).max(0.0).sqrt();
    let v1 = if u1 > 1e-8 { w.conj().scale(1.0 / u1) } else { Quaternion::real((0.5 * (1.0 - r0)).max(0.0).sqrt()) };
    let v2 = if k == 1 { 0.0 } else { (0.5 * (1.0 - r0) - v1.norm_sqr()).max(0.0).sqrt() };
    Ok(NormalForm { u1, v1: v1.to_array(), v2 })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum HomogeneityStatus {
    Homogeneous { group: String },
    NonHomogeneous,
    Conditionally { condition: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomogeneityVerdict {
    #[serde(flatten)]
    pub status: HomogeneityStatus,
    pub source: String,
}

impl std::fmt::Display for HomogeneityVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match &self.status {
            HomogeneityStatus::Homogeneous { group } => write!(f, "homogeneous({group})")?,
            HomogeneityStatus::NonHomogeneous => write!(f, "non_homogeneous")?,
            HomogeneityStatus::Conditionally { condition } => write!(f, "conditionally({condition})")?,
        }
        write!(f, " [{}]", self.source)
    }
}

fn verdict(status: HomogeneityStatus, source: &str) -> HomogeneityVerdict {
    HomogeneityVerdict { status, source: source.to_string() }
}

fn homogeneous(group: String, source: &str) -> HomogeneityVerdict {
    verdict(HomogeneityStatus::Homogeneous { group }, source)
}

/// Whether the Clifford foliation with this profile is homogeneous.
///
/// Table-driven: `m = 1` (`k >= 2`) is given by diagonal `SO(k)`, `m = 2` by
/// `SU(k)` (the Hopf `U(1)` when `k = 1`), `m = 4` by `Sp(k)` exactly when
/// all summands are of one class (`kappa = k`); `(8, 1)`, `(9, 1)` and every
/// other profile are non-homogeneous. An `m = 4` profile without `kappa` is
/// conditional on `P_0 P_1 P_2 P_3 P_4 = ±Id`.
pub fn classify_homogeneity(profile: &EquivalenceProfile) -> Result<HomogeneityVerdict> {
    let EquivalenceProfile { m, k, kappa } = *profile;
    let unsupported = || Error::UnsupportedProfile(format!("{profile:?}"));
    if m == 0 || k == 0 || (m, k) == (1, 1) {
        return Err(unsupported());
    }
    match (m % 4 == 0, kappa) {
        (true, Some(kp)) if kp > k || (k - kp) % 2 != 0 => return Err(unsupported()),
        (false, Some(_)) => return Err(unsupported()),
        _ => {}
    }
    Ok(match (m, k, kappa) {
        (1, k, _) => homogeneous(format!("SO({k})"), "diagonal SO(k) action on R^k x R^k"),
        (2, 1, _) => homogeneous("U(1)".into(), "Hopf fibration S^3 -> S^2"),
        (2, k, _) => homogeneous(format!("SU({k})"), "diagonal SU(k) action on C^k x C^k"),
        (4, 1, Some(1)) => homogeneous("Sp(1)".into(), "Hopf fibration S^7 -> S^4"),
        (4, k, Some(kp)) if kp == k => homogeneous(format!("Sp({k})"), "diagonal Sp(k) action on H^k x H^k"),
        (4, _, Some(_)) => verdict(
            HomogeneityStatus::NonHomogeneous,
            "mixed summand classes (P0 P1 P2 P3 P4 != ±Id): codimension-one FKM family is inhomogeneous",
        ),
        (4, _, None) => verdict(
            HomogeneityStatus::Conditionally { condition: "P0 P1 P2 P3 P4 = ±Id".into() },
            "diagonal Sp(k) action exists iff all summands share one class",
        ),
        (8, 1, _) => verdict(
            HomogeneityStatus::NonHomogeneous,
            "Hopf fibration S^15 -> S^8: the only non-homogeneous regular foliation of a round sphere",
        ),
        (9, 1, _) => verdict(
            HomogeneityStatus::NonHomogeneous,
            "Spin(9)-isotropy obstruction for the rank-10 system on R^32",
        ),
        _ => verdict(
            HomogeneityStatus::NonHomogeneous,
            "homogeneity forces a homogeneous FKM family, which needs m in {1, 2, 4}",
        ),
    })
}
