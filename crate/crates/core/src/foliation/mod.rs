//! The map `pi_C`, its fibers, horizontal geometry and symmetries.
//!
//! The leaf space is the closed unit disk `D_C` in `R^{m+1}` with the round
//! metric of curvature 4, modeled by the radius-½ hemisphere lift
//! `v |-> ½ (v, sqrt(1 - |v|^2))`.

mod fibers;
mod geodesic;
mod horizontal;
mod symmetry;

use serde::Serialize;

use crate::algebra::{angle_between, dot, norm, orthonormal_column_basis, DenseMatrix};
use crate::{CliffordSystem, Error, Result};

pub use fibers::{
    boundary_fiber_point, boundary_fiber_sample, fiber_point, fiber_sample, fiber_sphere_dim, mplus_point,
    mplus_sample,
};
pub use geodesic::{project_geodesic_params, GeodesicParams, HorizontalGeodesic};
pub use horizontal::{
    fd_gradient_defect, horizontal_basis, jacobian_singular_values, submersion_rank, HorizontalFrame,
    RankDecision, RANK_KEEP, RANK_KILL,
};
pub use symmetry::{reflect_symmetry, reflection_prediction, spin_prediction, spin_rotate};

/// Unit vector of `R^{2l}`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpherePoint(Vec<f64>);

impl SpherePoint {
    /// Accepts `x` when `| |x| - 1 | <= 1e-12`.
    pub fn new(x: Vec<f64>) -> Result<Self> {
        let n = norm(&x);
        if !n.is_finite() || (n - 1.0).abs() > 1e-12 {
            return Err(Error::NotUnit(n));
        }
        Ok(SpherePoint(x))
    }

    /// Normalizes a nonzero vector.
    pub fn normalized(x: &[f64]) -> Result<Self> {
        crate::algebra::normalize(x).map(SpherePoint).ok_or(Error::NotUnit(0.0))
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    pub fn neg(&self) -> SpherePoint {
        SpherePoint(self.0.iter().map(|v| -v).collect())
    }
}

impl AsRef<[f64]> for SpherePoint {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}

/// Point of the disk `D_C` together with its hemisphere lift.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QuotientPoint {
    disk: Vec<f64>,
    lift: Vec<f64>,
}

impl QuotientPoint {
    /// Accepts `|v| <= 1 + 1e-12`. Radii within `4 ε` of 1 are put on the
    /// rim: below that the height `sqrt(1 - |v|^2)` is rounding noise of
    /// order `1e-8`.
    pub fn new(v: Vec<f64>) -> Result<Self> {
        let r = norm(&v);
        if !r.is_finite() || r > 1.0 + 1e-12 {
            return Err(Error::OutsideDisk(r));
        }
        let height = if r >= 1.0 - 4.0 * f64::EPSILON { 0.0 } else { ((1.0 - r) * (1.0 + r)).sqrt() };
        Ok(Self::with_height(v, height))
    }

    fn with_height(disk: Vec<f64>, height: f64) -> Self {
        let mut lift: Vec<f64> = disk.iter().map(|v| 0.5 * v).collect();
        lift.push(0.5 * height);
        QuotientPoint { disk, lift }
    }

    pub fn disk_coords(&self) -> &[f64] {
        &self.disk
    }

    /// `½ (v, sqrt(1 - |v|^2))`, of norm ½.
    pub fn lift(&self) -> &[f64] {
        &self.lift
    }

    pub fn radius(&self) -> f64 {
        norm(&self.disk)
    }

    /// Distance in the curvature-4 metric: half the angle between lifts.
    pub fn distance(&self, other: &QuotientPoint) -> f64 {
        0.5 * angle_between(&self.lift, &other.lift)
    }
}

/// `(<P_0 x, x>, ..., <P_m x, x>)` without a unit-norm check.
pub fn pi_coords(c: &CliffordSystem, x: &[f64]) -> Vec<f64> {
    (0..=c.m()).map(|i| c.quadratic_form(i, x)).collect()
}

/// `pi_C(x)` for a unit vector `x`.
///
/// The lift height `sqrt(1 - r^2)` is evaluated as `sqrt(a (2 - a))` with
/// `a = ½ |x - P̂x|^2 = 1 - r`, which keeps full relative accuracy near the
/// boundary where `1 - r^2` cancels.
pub fn pi_c(c: &CliffordSystem, x: &SpherePoint) -> Result<QuotientPoint> {
    if x.coords().len() != c.dim() {
        return Err(Error::DimensionMismatch { expected: c.dim(), actual: x.coords().len() });
    }
    let v = pi_coords(c, x.coords());
    let r = norm(&v);
    if r == 0.0 {
        return Ok(QuotientPoint::with_height(v, 1.0));
    }
    let unit: Vec<f64> = v.iter().map(|vi| vi / r).collect();
    let px = c.span_apply(&unit, x.coords());
    let a = 0.5 * x.coords().iter().zip(&px).map(|(xi, yi)| (xi - yi) * (xi - yi)).sum::<f64>();
    let a = a.clamp(0.0, 1.0);
    Ok(QuotientPoint::with_height(v, (a * (2.0 - a)).sqrt()))
}

/// Hemisphere lift of a disk point.
pub fn quotient_lift(v: &[f64]) -> Result<Vec<f64>> {
    Ok(QuotientPoint::new(v.to_vec())?.lift)
}

/// Curvature-4 distance between two disk points.
pub fn quotient_distance(v: &[f64], w: &[f64]) -> Result<f64> {
    Ok(QuotientPoint::new(v.to_vec())?.distance(&QuotientPoint::new(w.to_vec())?))
}

/// Orthonormal bases of the `±1` eigenspaces of a symmetric involution.
pub fn eig_split(p: &DenseMatrix) -> Result<(Vec<Vec<f64>>, Vec<Vec<f64>>)> {
    let n = p.rows();
    if p.cols() != n {
        return Err(Error::DimensionMismatch { expected: n, actual: p.cols() });
    }
    let id = DenseMatrix::identity(n);
    let defect = crate::par::nan_max(p.matmul(p).max_abs_diff(&id), p.transpose().max_abs_diff(p));
    if defect.is_nan() || defect > 1e-10 {
        return Err(Error::NotInvolution(defect));
    }
    let plus = id.add_scaled(p, 1.0).scale(0.5);
    let minus = id.add_scaled(p, -1.0).scale(0.5);
    let rank_plus = plus.trace().round() as usize;
    Ok((orthonormal_column_basis(&plus, rank_plus)?, orthonormal_column_basis(&minus, n - rank_plus)?))
}

/// The FKM function on the unit sphere, evaluated two ways.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FkmValues {
    /// `<x, x>^2 - 2 sum_i <P_i x, x>^2`.
    pub direct: f64,
    /// `1 - 2 |pi_C(x)|^2`.
    pub factored: f64,
}

pub fn fkm_f0(c: &CliffordSystem, x: &SpherePoint) -> Result<FkmValues> {
    let q = pi_c(c, x)?;
    let xx = dot(x.coords(), x.coords());
    let s: f64 = q.disk_coords().iter().map(|v| v * v).sum();
    Ok(FkmValues { direct: xx * xx - 2.0 * s, factored: 1.0 - 2.0 * q.radius().powi(2) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::build_system;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2};

    #[test]
    fn worked_examples_m1_k2() {
        let c = build_system(1, 2, 0).unwrap();
        // (u, v) = ((1,0), (0,1)) / sqrt 2 has |u| = |v| and <u, v> = 0
        let x = SpherePoint::new(vec![FRAC_1_SQRT_2, 0.0, 0.0, FRAC_1_SQRT_2]).unwrap();
        assert_eq!(pi_c(&c, &x).unwrap().disk_coords(), &[0.0, 0.0]);
        let y = SpherePoint::new(vec![FRAC_1_SQRT_2, 0.0, FRAC_1_SQRT_2, 0.0]).unwrap();
        let v = pi_c(&c, &y).unwrap();
        assert!((v.disk_coords()[0]).abs() < 1e-15 && (v.disk_coords()[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn eigenvector_maps_to_pole() {
        let c = build_system(3, 2, 1).unwrap();
        let mut e = vec![0.0; c.dim()];
        e[0] = 1.0;
        let q = pi_c(&c, &SpherePoint::new(e).unwrap()).unwrap();
        assert_eq!(q.disk_coords()[0], 1.0);
        assert_eq!(q.lift()[c.m() + 1], 0.0);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(matches!(SpherePoint::new(vec![1.0, 1.0]), Err(Error::NotUnit(_))));
        assert!(matches!(QuotientPoint::new(vec![1.0, 1e-3]), Err(Error::OutsideDisk(_))));
        let c = build_system(2, 1, 0).unwrap();
        assert!(pi_c(&c, &SpherePoint::new(vec![1.0, 0.0]).unwrap()).is_err());
    }

    #[test]
    fn antipodal_boundary_distance() {
        let d = quotient_distance(&[1.0, 0.0], &[-1.0, 0.0]).unwrap();
        assert!((d - FRAC_PI_2).abs() < 1e-15);
        assert_eq!(quotient_distance(&[0.3, 0.2], &[0.3, 0.2]).unwrap(), 0.0);
        let apex_to_rim = quotient_distance(&[0.0, 0.0], &[0.0, 1.0]).unwrap();
        assert!((apex_to_rim - std::f64::consts::FRAC_PI_4).abs() < 1e-15);
    }

    #[test]
    fn eig_split_standard_and_rotated() {
        let p = DenseMatrix::from_row_major(3, 3, vec![1.0, 0.0, 0.0, 0.0, -1.0, 0.0, 0.0, 0.0, 1.0]).unwrap();
        let (plus, minus) = eig_split(&p).unwrap();
        assert_eq!((plus.len(), minus.len()), (2, 1));
        let c = build_system(2, 2, 0).unwrap();
        let s = FRAC_1_SQRT_2;
        let (plus, minus) = eig_split(&c.span_matrix(&[s, s, 0.0])).unwrap();
        assert_eq!((plus.len(), minus.len()), (4, 4));
        assert!(matches!(eig_split(&DenseMatrix::identity(3).scale(2.0)), Err(Error::NotInvolution(_))));
    }
}
