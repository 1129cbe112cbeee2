//! Composed foliations: a foliation `F_0` of the boundary sphere `S_C`,
//! extended to the disk by homotheties and pulled back by `pi_C`.
//!
//! `F_0` is presented by an invariant map whose fibers are its leaves, so
//! the composed leaf of `x` is determined by `r = |pi_C(x)|` and, when
//! `r > 0`, by the invariant of the direction `pi_C(x) / r`.

mod distance;
mod tensor;

use std::fmt;
use std::sync::Arc;

use crate::algebra::{angle_between, dot, norm, Sampler};
use crate::foliation::{pi_c, SpherePoint};
use crate::{CliffordSystem, Error, Result};

pub use distance::{leaf_point, leaf_to_leaf_ambient_distance};
pub use tensor::{act_rotations, random_rotation, signed_singular_values, tensor_orbit_distance};

/// A foliation of the unit sphere of `R^{ambient_dim}` given by a map that is
/// constant exactly on leaves.
pub trait LeafInvariant: Send + Sync {
    fn name(&self) -> String;

    fn ambient_dim(&self) -> usize;

    /// Invariant of a unit vector; equal values mean the same leaf.
    fn invariant(&self, p: &[f64]) -> Vec<f64>;

    fn has_zero_dim_leaves(&self) -> bool;

    /// Distance between the leaves through two unit vectors, when known in closed form.
    fn quotient_distance(&self, _a: &[f64], _b: &[f64]) -> Option<f64> {
        None
    }

    /// A random point of the leaf through the unit vector `p`, when samplable.
    fn leaf_sample(&self, _p: &[f64], _rng: &mut Sampler) -> Option<Vec<f64>> {
        None
    }
}

/// Shared handle to a boundary foliation `F_0`.
#[derive(Clone)]
pub struct FoliationSpec(Arc<dyn LeafInvariant>);

impl fmt::Debug for FoliationSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FoliationSpec").field("name", &self.name()).field("ambient_dim", &self.ambient_dim()).finish()
    }
}

impl FoliationSpec {
    pub fn custom(inner: impl LeafInvariant + 'static) -> Self {
        FoliationSpec(Arc::new(inner))
    }

    /// Leaves are points: `F_0 ∘ F_C = F_C`.
    pub fn points(ambient_dim: usize) -> Self {
        Self::custom(Points(ambient_dim))
    }

    /// A single leaf: the composed leaves are the FKM level sets.
    pub fn one_leaf(ambient_dim: usize) -> Self {
        Self::custom(OneLeaf(ambient_dim))
    }

    /// Distance spheres around `±p0` (invariant `<P, p0>`); `p0` is normalized.
    pub fn height(p0: Vec<f64>) -> Result<Self> {
        let p0 = crate::algebra::normalize(&p0).ok_or(Error::NotUnit(0.0))?;
        Ok(Self::custom(Height(p0)))
    }

    /// `SO(3) × SO(3)` orbits on the unit sphere of `R^9 = R^3 ⊗ R^3`.
    pub fn tensor_svd() -> Self {
        Self::custom(TensorSvd)
    }

    pub fn name(&self) -> String {
        self.0.name()
    }

    pub fn ambient_dim(&self) -> usize {
        self.0.ambient_dim()
    }

    pub fn invariant(&self, p: &[f64]) -> Vec<f64> {
        self.0.invariant(p)
    }

    pub fn has_zero_dim_leaves(&self) -> bool {
        self.0.has_zero_dim_leaves()
    }

    pub fn quotient_distance(&self, a: &[f64], b: &[f64]) -> Option<f64> {
        self.0.quotient_distance(a, b)
    }

    pub fn leaf_sample(&self, p: &[f64], rng: &mut Sampler) -> Option<Vec<f64>> {
        self.0.leaf_sample(p, rng)
    }
}

/// Names accepted by [`builtin_spec`].
pub const BUILTIN_SPECS: [&str; 4] = ["points", "one_leaf", "height", "tensor_svd"];

/// Built-in boundary foliation for a system of rank `m + 1`.
///
/// `height` uses `p0 = e_0`; `tensor_svd` needs `m = 8`.
pub fn builtin_spec(name: &str, m: usize) -> Result<FoliationSpec> {
    let dim = m + 1;
    match name {
        "points" => Ok(FoliationSpec::points(dim)),
        "one_leaf" => Ok(FoliationSpec::one_leaf(dim)),
        "height" => {
            let mut p0 = vec![0.0; dim];
            p0[0] = 1.0;
            FoliationSpec::height(p0)
        }
        "tensor_svd" if m == 8 => Ok(FoliationSpec::tensor_svd()),
        "tensor_svd" => Err(Error::DimensionMismatch { expected: 9, actual: dim }),
        other => Err(Error::UnknownSpec(other.to_string())),
    }
}

struct Points(usize);

impl LeafInvariant for Points {
    fn name(&self) -> String {
        "points".into()
    }
    fn ambient_dim(&self) -> usize {
        self.0
    }
    fn invariant(&self, p: &[f64]) -> Vec<f64> {
        p.to_vec()
    }
    fn has_zero_dim_leaves(&self) -> bool {
        true
    }
    fn quotient_distance(&self, a: &[f64], b: &[f64]) -> Option<f64> {
        Some(angle_between(a, b))
    }
    fn leaf_sample(&self, p: &[f64], _rng: &mut Sampler) -> Option<Vec<f64>> {
        Some(p.to_vec())
    }
}

struct OneLeaf(usize);

impl LeafInvariant for OneLeaf {
    fn name(&self) -> String {
        "one_leaf".into()
    }
    fn ambient_dim(&self) -> usize {
        self.0
    }
    fn invariant(&self, _p: &[f64]) -> Vec<f64> {
        Vec::new()
    }
    fn has_zero_dim_leaves(&self) -> bool {
        false
    }
    fn quotient_distance(&self, _a: &[f64], _b: &[f64]) -> Option<f64> {
        Some(0.0)
    }
    fn leaf_sample(&self, _p: &[f64], rng: &mut Sampler) -> Option<Vec<f64>> {
        Some(rng.unit_vector(self.0))
    }
}

struct Height(Vec<f64>);

impl Height {
    fn polar_angle(&self, p: &[f64]) -> f64 {
        angle_between(p, &self.0)
    }
}

impl LeafInvariant for Height {
    fn name(&self) -> String {
        "height".into()
    }
    fn ambient_dim(&self) -> usize {
        self.0.len()
    }
    fn invariant(&self, p: &[f64]) -> Vec<f64> {
        vec![dot(p, &self.0)]
    }
    fn has_zero_dim_leaves(&self) -> bool {
        true
    }
    fn quotient_distance(&self, a: &[f64], b: &[f64]) -> Option<f64> {
        Some((self.polar_angle(a) - self.polar_angle(b)).abs())
    }
    fn leaf_sample(&self, p: &[f64], rng: &mut Sampler) -> Option<Vec<f64>> {
        let theta = self.polar_angle(p);
        let n = self.0.len();
        if n == 1 {
            return Some(p.to_vec());
        }
        let w = loop {
            let mut g = rng.gaussian_vec(n);
            let a = dot(&g, &self.0);
            g.iter_mut().zip(&self.0).for_each(|(gi, pi)| *gi -= a * pi);
            if norm(&g) >= 1e-8 {
                break crate::algebra::normalize(&g)?;
            }
        };
        let (s, c) = theta.sin_cos();
        Some(self.0.iter().zip(&w).map(|(pi, wi)| c * pi + s * wi).collect())
    }
}

struct TensorSvd;

impl LeafInvariant for TensorSvd {
    fn name(&self) -> String {
        "tensor_svd".into()
    }
    fn ambient_dim(&self) -> usize {
        9
    }
    fn invariant(&self, p: &[f64]) -> Vec<f64> {
        signed_singular_values(p).to_vec()
    }
    fn has_zero_dim_leaves(&self) -> bool {
        false
    }
    fn quotient_distance(&self, a: &[f64], b: &[f64]) -> Option<f64> {
        Some(tensor_orbit_distance(a, b))
    }
    fn leaf_sample(&self, p: &[f64], rng: &mut Sampler) -> Option<Vec<f64>> {
        let u = random_rotation(rng);
        let v = random_rotation(rng);
        Some(act_rotations(&u, &v, p))
    }
}

/// Leaf data of `F_0 ∘ F_C` at a point.
#[derive(Clone, Debug, PartialEq)]
pub struct ComposedClass {
    pub r: f64,
    /// `ι(pi_C(x) / r)`; absent on `M_+` (`r <= 1e-10`), which is one leaf.
    pub tail: Option<Vec<f64>>,
}

fn check_spec(c: &CliffordSystem, spec: &FoliationSpec) -> Result<()> {
    if spec.ambient_dim() != c.m() + 1 {
        return Err(Error::DimensionMismatch { expected: c.m() + 1, actual: spec.ambient_dim() });
    }
    Ok(())
}

pub fn composed_class(c: &CliffordSystem, spec: &FoliationSpec, x: &SpherePoint) -> Result<ComposedClass> {
    check_spec(c, spec)?;
    let v = pi_c(c, x)?;
    let r = v.radius();
    let tail = (r > 1e-10).then(|| spec.invariant(&v.disk_coords().iter().map(|a| a / r).collect::<Vec<_>>()));
    Ok(ComposedClass { r, tail })
}

/// `|r_x - r_y| <= tol` and either both radii `<= tol` or tails within `tol`.
pub fn same_leaf(c: &CliffordSystem, spec: &FoliationSpec, x: &SpherePoint, y: &SpherePoint, tol: f64) -> Result<bool> {
    let (a, b) = (composed_class(c, spec, x)?, composed_class(c, spec, y)?);
    if (a.r - b.r).abs() > tol {
        return Ok(false);
    }
    if a.r <= tol && b.r <= tol {
        return Ok(true);
    }
    Ok(match (&a.tail, &b.tail) {
        (Some(s), Some(t)) => s.iter().zip(t).all(|(p, q)| (p - q).abs() <= tol) && s.len() == t.len(),
        _ => false,
    })
}

/// Distance in the leaf space `½ (Δ ⋆ {pt})` of `F_0 ∘ F_C`.
///
/// With cone angles `s, s'` measured from the apex (`sin s = |pi_C|`) and
/// `δ` the `F_0` leaf distance of the directions, returns
/// `½ arccos(cos s cos s' + sin s sin s' cos min(δ, π))`, evaluated as half
/// the angle between `(sin s, 0, cos s)` and `(sin s' cos δ, sin s' sin δ, cos s')`.
pub fn composed_quotient_distance(
    c: &CliffordSystem,
    spec: &FoliationSpec,
    x: &SpherePoint,
    y: &SpherePoint,
) -> Result<f64> {
    check_spec(c, spec)?;
    let (vx, vy) = (pi_c(c, x)?, pi_c(c, y)?);
    let cone = |q: &crate::foliation::QuotientPoint| q.radius().atan2(2.0 * q.lift()[c.m() + 1]);
    let (s, t) = (cone(&vx), cone(&vy));
    let (rx, ry) = (vx.radius(), vy.radius());
    let delta = if rx == 0.0 || ry == 0.0 {
        0.0
    } else {
        let dx: Vec<f64> = vx.disk_coords().iter().map(|a| a / rx).collect();
        let dy: Vec<f64> = vy.disk_coords().iter().map(|a| a / ry).collect();
        spec.quotient_distance(&dx, &dy)
            .ok_or_else(|| Error::InvalidParameter(format!("spec `{}` has no quotient distance", spec.name())))?
            .min(std::f64::consts::PI)
    };
    let a = [s.sin(), 0.0, s.cos()];
    let b = [t.sin() * delta.cos(), t.sin() * delta.sin(), t.cos()];
    Ok(0.5 * angle_between(&a, &b))
}
