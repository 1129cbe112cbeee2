use super::{eig_split, pi_coords, SpherePoint};
use crate::algebra::{dot, norm, singular_values, DenseMatrix};
use crate::{CliffordSystem, Error, Result};

/// Relative singular value above which a direction counts toward the rank.
pub const RANK_KEEP: f64 = 1e-6;
/// Relative singular value below which a direction counts as zero.
pub const RANK_KILL: f64 = 1e-8;

/// Horizontal space at a point of the sphere.
#[derive(Clone, Debug, PartialEq)]
pub enum HorizontalFrame {
    /// `X_{P_i}(x) = 2 P_i x - 2 <P_i x, x> x` for `i = 0..=m`.
    Interior(Vec<Vec<f64>>),
    /// At a boundary fiber over `P` the normal space is `E_-(P)`; an
    /// orthonormal basis of it is returned instead.
    BoundaryNormal(Vec<Vec<f64>>),
}

/// Horizontal frame at `x`; points with `|pi_C(x)| > 1 - 1e-10` are treated
/// as boundary points.
pub fn horizontal_basis(c: &CliffordSystem, x: &SpherePoint) -> Result<HorizontalFrame> {
    let v = pi_coords(c, x.coords());
    let r = norm(&v);
    if r > 1.0 - 1e-10 {
        let p: Vec<f64> = v.iter().map(|a| a / r).collect();
        let (_, minus) = eig_split(&c.span_matrix(&p))?;
        return Ok(HorizontalFrame::BoundaryNormal(minus));
    }
    Ok(HorizontalFrame::Interior(gradient_rows(c, x.coords(), &v)))
}

fn gradient_rows(c: &CliffordSystem, x: &[f64], v: &[f64]) -> Vec<Vec<f64>> {
    (0..=c.m())
        .map(|i| c.apply(i, x).iter().zip(x).map(|(p, xi)| 2.0 * p - 2.0 * v[i] * xi).collect())
        .collect()
}

/// Singular values (descending) of the differential of `pi_C` restricted
/// to the tangent space of the sphere at `x`.
///
/// Row `i` of the differential is `X_{P_i}(x)`, already tangent, so its
/// singular values coincide with those of the restricted map.
pub fn jacobian_singular_values(c: &CliffordSystem, x: &[f64]) -> Vec<f64> {
    let v = pi_coords(c, x);
    let rows = gradient_rows(c, x, &v);
    let flat: Vec<f64> = rows.concat();
    singular_values(&DenseMatrix::from_row_major(rows.len(), x.len(), flat).expect("finite rows"))
}

#[derive(Clone, Debug, PartialEq)]
pub struct RankDecision {
    pub rank: usize,
    pub singular_values: Vec<f64>,
    /// Largest relative singular value among the discarded directions (0 if none).
    pub largest_killed: f64,
    /// Smallest relative singular value among the kept directions.
    pub smallest_kept: f64,
}

/// Rank of `d pi_C` at `x` under the keep/kill band rule; a relative singular
/// value inside `[RANK_KILL, RANK_KEEP]` is reported as [`Error::MarginalRank`].
pub fn submersion_rank(c: &CliffordSystem, x: &SpherePoint) -> Result<RankDecision> {
    let s = jacobian_singular_values(c, x.coords());
    let top = s.first().copied().unwrap_or(0.0);
    if top == 0.0 || !top.is_finite() {
        return Err(Error::Degenerate("differential of pi_C vanishes".into()));
    }
    let (mut rank, mut largest_killed, mut smallest_kept) = (0, 0.0f64, f64::INFINITY);
    for &sv in &s {
        let rel = sv / top;
        if rel > RANK_KEEP {
            rank += 1;
            smallest_kept = smallest_kept.min(rel);
        } else if rel < RANK_KILL {
            largest_killed = largest_killed.max(rel);
        } else {
            return Err(Error::MarginalRank(rel));
        }
    }
    Ok(RankDecision { rank, singular_values: s, largest_killed, smallest_kept })
}

/// Largest discrepancy between central finite differences of `pi_C` along
/// the great circles tangent to each `X_{P_i}(x)` and the predicted
/// derivative `d pi_C(X)_j = 2 <P_j x, X>`.
pub fn fd_gradient_defect(c: &CliffordSystem, x: &SpherePoint, step: f64) -> f64 {
    let x = x.coords();
    let v = pi_coords(c, x);
    let mut worst = 0.0f64;
    for field in gradient_rows(c, x, &v) {
        let speed = norm(&field);
        if speed == 0.0 {
            continue;
        }
        let along = |h: f64| -> Vec<f64> {
            let (s, co) = (h * speed).sin_cos();
            let pt: Vec<f64> = x.iter().zip(&field).map(|(a, b)| co * a + s * b / speed).collect();
            pi_coords(c, &pt)
        };
        let (fwd, bwd) = (along(step), along(-step));
        for j in 0..=c.m() {
            let predicted = 2.0 * dot(&c.apply(j, x), &field);
            let fd = (fwd[j] - bwd[j]) / (2.0 * step);
            worst = crate::par::nan_max(worst, (fd - predicted).abs());
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Sampler;
    use crate::build_system;
    use crate::foliation::{boundary_fiber_sample, mplus_sample};

    #[test]
    fn mplus_frame_is_orthogonal_of_norm_two() {
        let c = build_system(2, 2, 0).unwrap();
        let x = &mplus_sample(&c, 1, 4).unwrap()[0];
        let HorizontalFrame::Interior(rows) = horizontal_basis(&c, x).unwrap() else {
            panic!("M_+ is interior")
        };
        for (i, a) in rows.iter().enumerate() {
            assert!((norm(a) - 2.0).abs() < 1e-12);
            assert!(dot(a, x.coords()).abs() < 1e-12);
            for b in &rows[i + 1..] {
                assert!(dot(a, b).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn boundary_returns_normal_space() {
        let c = build_system(2, 2, 0).unwrap();
        let x = &boundary_fiber_sample(&c, &[0.0, 1.0, 0.0], 1, 9).unwrap()[0];
        let HorizontalFrame::BoundaryNormal(b) = horizontal_basis(&c, x).unwrap() else {
            panic!("boundary point expected")
        };
        assert_eq!(b.len(), c.l());
    }

    #[test]
    fn rank_and_fd_at_random_point() {
        let c = build_system(3, 2, 0).unwrap();
        let x = SpherePoint::new(Sampler::new(5).unit_vector(c.dim())).unwrap();
        let d = submersion_rank(&c, &x).unwrap();
        assert_eq!(d.rank, 4);
        assert!(fd_gradient_defect(&c, &x, 1e-5) < 1e-6);
    }
}
