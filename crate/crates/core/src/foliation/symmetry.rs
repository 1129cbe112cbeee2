use super::SpherePoint;
use crate::algebra::{dot, norm};
use crate::{CliffordSystem, Error, Result};

/// `P x` for a unit span element `P`; induces the reflection of the disk in
/// the line through `P`.
pub fn reflect_symmetry(c: &CliffordSystem, p: &[f64], x: &SpherePoint) -> Result<SpherePoint> {
    let n = norm(p);
    if p.len() != c.m() + 1 || (n - 1.0).abs() > 1e-12 {
        return Err(Error::NotUnit(n));
    }
    Ok(SpherePoint(c.span_apply(p, x.coords())))
}

/// `-v + 2 <v, p> p`.
pub fn reflection_prediction(v: &[f64], p: &[f64]) -> Vec<f64> {
    let a = dot(v, p);
    v.iter().zip(p).map(|(vi, pi)| -vi + 2.0 * a * pi).collect()
}

/// `(cos θ Id + sin θ P Q) x` for orthonormal span elements `P`, `Q`.
///
/// `(PQ)^2 = -Id`, so this is a one-parameter group of rotations of
/// `R^{2l}`. On the disk it rotates the `(P, Q)` plane by `-2θ`, sending
/// `P` toward `-Q` for small `θ > 0`; see [`spin_prediction`].
pub fn spin_rotate(c: &CliffordSystem, p: &[f64], q: &[f64], theta: f64, x: &SpherePoint) -> Result<SpherePoint> {
    let k = c.m() + 1;
    if p.len() != k || q.len() != k {
        return Err(Error::DimensionMismatch { expected: k, actual: p.len().min(q.len()) });
    }
    let defect = (norm(p) - 1.0).abs().max((norm(q) - 1.0).abs()).max(dot(p, q).abs());
    if !(defect <= 1e-12) {
        return Err(Error::InvalidParameter(format!("P, Q must be orthonormal (defect {defect:e})")));
    }
    let pqx = c.span_apply(p, &c.span_apply(q, x.coords()));
    let (s, co) = theta.sin_cos();
    Ok(SpherePoint(x.coords().iter().zip(&pqx).map(|(a, b)| co * a + s * b).collect()))
}

/// Image of the disk point `v` under the rotation induced by [`spin_rotate`]:
/// with `a = <v, P>` and `b = <v, Q>`, the pair becomes
/// `(a cos 2θ + b sin 2θ, -a sin 2θ + b cos 2θ)`; the complement is fixed.
pub fn spin_prediction(v: &[f64], p: &[f64], q: &[f64], theta: f64) -> Vec<f64> {
    let (a, b) = (dot(v, p), dot(v, q));
    let (s, co) = (2.0 * theta).sin_cos();
    let (da, db) = (a * co + b * s - a, -a * s + b * co - b);
    v.iter().zip(p).zip(q).map(|((vi, pi), qi)| vi + da * pi + db * qi).collect()
}
