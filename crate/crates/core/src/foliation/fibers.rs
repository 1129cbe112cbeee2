use super::SpherePoint;
use crate::algebra::{dot, norm, Sampler};
use crate::{CliffordSystem, Error, Result};

/// Dimension `l - m - 1` of the sphere `x_+ + S(V_{x_+})` fibering a generic
/// leaf over the boundary sphere `E¹_+(P_0)`; `None` when `M_+` is empty.
pub fn fiber_sphere_dim(c: &CliffordSystem) -> Option<usize> {
    (c.l() > c.m()).then(|| c.l() - c.m() - 1)
}

fn check_unit_span(c: &CliffordSystem, p: &[f64]) -> Result<()> {
    if p.len() != c.m() + 1 {
        return Err(Error::DimensionMismatch { expected: c.m() + 1, actual: p.len() });
    }
    let n = norm(p);
    if !n.is_finite() || (n - 1.0).abs() > 1e-12 {
        return Err(Error::NotUnit(n));
    }
    Ok(())
}

/// Uniform unit vector of `E_{sign}(P)` for a unit span element `p`: a
/// Gaussian vector projected by `(Id + sign P) / 2`, then normalized.
fn eigen_unit(c: &CliffordSystem, p: &[f64], sign: f64, rng: &mut Sampler) -> Vec<f64> {
    loop {
        let g = rng.gaussian_vec(c.dim());
        let pg = c.span_apply(p, &g);
        let y: Vec<f64> = g.iter().zip(&pg).map(|(a, b)| 0.5 * (a + sign * b)).collect();
        let n = norm(&y);
        if n >= 1e-8 {
            return y.into_iter().map(|v| v / n).collect();
        }
    }
}

/// One uniform point of the boundary fiber `E¹_+(P)` over a unit span element `p`.
pub fn boundary_fiber_point(c: &CliffordSystem, p: &[f64], rng: &mut Sampler) -> Result<SpherePoint> {
    check_unit_span(c, p)?;
    SpherePoint::new(eigen_unit(c, p, 1.0, rng))
}

/// `n` points of `E¹_+(P)`; point `i` uses the child stream `i` of `seed`.
pub fn boundary_fiber_sample(c: &CliffordSystem, p: &[f64], n: usize, seed: u64) -> Result<Vec<SpherePoint>> {
    (0..n).map(|i| boundary_fiber_point(c, p, &mut Sampler::child(seed, i as u64))).collect()
}

/// One point `(x_+ + x_-) / sqrt 2` of the focal manifold `M_+ = pi_C^{-1}(0)`.
///
/// `x_+` is uniform in `E¹_+(P_0)` and `x_-` uniform in the unit sphere of
/// `E_-(P_0) ⊖ span(P_1 x_+, ..., P_m x_+)`, a space of dimension `l - m`.
pub fn mplus_point(c: &CliffordSystem, rng: &mut Sampler) -> Result<SpherePoint> {
    if c.l() < c.m() + 1 {
        return Err(Error::EmptyFocal { l: c.l(), m: c.m() });
    }
    let mut e0 = vec![0.0; c.m() + 1];
    e0[0] = 1.0;
    let x_plus = eigen_unit(c, &e0, 1.0, rng);
    let frame: Vec<Vec<f64>> = (1..=c.m()).map(|i| c.apply(i, &x_plus)).collect();
    let x_minus = loop {
        let mut y = eigen_unit(c, &e0, -1.0, rng);
        for _ in 0..2 {
            for f in &frame {
                let a = dot(f, &y);
                y.iter_mut().zip(f).for_each(|(yi, fi)| *yi -= a * fi);
            }
        }
        let n = norm(&y);
        if n >= 1e-8 {
            break y.into_iter().map(|v| v / n).collect::<Vec<f64>>();
        }
    };
    let s = std::f64::consts::FRAC_1_SQRT_2;
    SpherePoint::normalized(&x_plus.iter().zip(&x_minus).map(|(a, b)| s * (a + b)).collect::<Vec<_>>())
}

pub fn mplus_sample(c: &CliffordSystem, n: usize, seed: u64) -> Result<Vec<SpherePoint>> {
    (0..n).map(|i| mplus_point(c, &mut Sampler::child(seed, i as u64))).collect()
}

/// One point of `pi_C^{-1}(v)` for `|v| <= 1`.
///
/// Interior points use `cos(t) x + sin(t) Q x` with `x` in `M_+`,
/// `Q = v / |v|` and `t = arcsin(|v|) / 2`. Points within `1e-14` of the
/// origin go to [`mplus_point`], points within `1e-12` of the rim to
/// [`boundary_fiber_point`].
pub fn fiber_point(c: &CliffordSystem, v: &[f64], rng: &mut Sampler) -> Result<SpherePoint> {
    if v.len() != c.m() + 1 {
        return Err(Error::DimensionMismatch { expected: c.m() + 1, actual: v.len() });
    }
    let r = norm(v);
    if !r.is_finite() || r > 1.0 + 1e-12 {
        return Err(Error::OutsideDisk(r));
    }
    if r < 1e-14 {
        return mplus_point(c, rng);
    }
    let q: Vec<f64> = v.iter().map(|x| x / r).collect();
    if r >= 1.0 - 1e-12 {
        return boundary_fiber_point(c, &q, rng);
    }
    let x = mplus_point(c, rng)?;
    let qx = c.span_apply(&q, x.coords());
    let t = 0.5 * r.asin();
    let (s, co) = t.sin_cos();
    SpherePoint::new(x.coords().iter().zip(&qx).map(|(a, b)| co * a + s * b).collect())
}

pub fn fiber_sample(c: &CliffordSystem, v: &[f64], n: usize, seed: u64) -> Result<Vec<SpherePoint>> {
    (0..n).map(|i| fiber_point(c, v, &mut Sampler::child(seed, i as u64))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::foliation::pi_c;
    use crate::{build_system, Error};

    #[test]
    fn mplus_requires_room() {
        for (m, k) in [(2, 1), (4, 1), (8, 1)] {
            let c = build_system(m, k, 0).unwrap();
            assert!(matches!(mplus_sample(&c, 1, 0), Err(Error::EmptyFocal { .. })));
            assert_eq!(fiber_sphere_dim(&c), None);
        }
        assert_eq!(fiber_sphere_dim(&build_system(1, 2, 0).unwrap()), Some(0));
        assert_eq!(fiber_sphere_dim(&build_system(2, 2, 0).unwrap()), Some(1));
    }

    #[test]
    fn fiber_points_land_on_target() {
        let c = build_system(3, 2, 1).unwrap();
        let v = [0.3, -0.2, 0.1, 0.4];
        for x in fiber_sample(&c, &v, 20, 3).unwrap() {
            let got = pi_c(&c, &x).unwrap();
            for (a, b) in got.disk_coords().iter().zip(&v) {
                assert!((a - b).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn sampling_is_reproducible() {
        let c = build_system(2, 2, 0).unwrap();
        assert_eq!(mplus_sample(&c, 5, 11).unwrap(), mplus_sample(&c, 5, 11).unwrap());
        assert!(boundary_fiber_sample(&c, &[1.0, 1.0, 0.0], 1, 0).is_err());
    }
}
