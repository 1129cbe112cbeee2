use super::{check_spec, FoliationSpec};
use crate::algebra::{angle_between, dot, jacobi_svd, modified_gram_schmidt, norm, DenseMatrix, Sampler};
use crate::foliation::{fiber_point, mplus_point, pi_coords, SpherePoint};
use crate::{CliffordSystem, Error, Result};

const FOCAL_RADIUS: f64 = 1e-10;
const RIM_GAP: f64 = 1e-12;
/// Conjugate-gradient steps are cheap; some leaf pairs sit in flat valleys and need many.
const MAX_DESCENT_STEPS: usize = 3000;

/// Rows of the Jacobian of `ι ∘ normalize` at the unit vector `dir`, by
/// central differences with step `1e-6`.
fn invariant_jacobian(spec: &FoliationSpec, dir: &[f64]) -> Vec<Vec<f64>> {
    let h = 1e-6;
    let k = dir.len();
    let columns: Vec<Vec<f64>> = (0..k)
        .map(|j| {
            let eval = |sign: f64| {
                let mut p = dir.to_vec();
                p[j] += sign * h;
                let n = norm(&p);
                spec.invariant(&p.iter().map(|a| a / n).collect::<Vec<_>>())
            };
            let (fwd, bwd) = (eval(1.0), eval(-1.0));
            fwd.iter().zip(&bwd).map(|(a, b)| (a - b) / (2.0 * h)).collect()
        })
        .collect();
    let d = columns.first().map_or(0, Vec::len);
    (0..d).map(|a| (0..k).map(|j| columns[j][a]).collect()).collect()
}

/// Minimum-norm Gauss–Newton step `J^+ res` with singular values below
/// `1e-8` of the largest treated as zero.
fn gauss_newton_step(rows: &[Vec<f64>], res: &[f64], n: usize) -> Option<Vec<f64>> {
    let j = DenseMatrix::from_row_major(rows.len(), n, rows.concat()).ok()?;
    let svd = jacobi_svd(&j);
    let top = svd.s.first().copied().unwrap_or(0.0);
    let mut step = vec![0.0; n];
    for (col, &s) in svd.s.iter().enumerate() {
        if s <= 1e-8 * top {
            continue;
        }
        let coef = (0..rows.len()).map(|i| svd.u[(i, col)] * res[i]).sum::<f64>() / s;
        for (st, idx) in step.iter_mut().zip(0..) {
            *st += coef * svd.v[(idx, col)];
        }
    }
    Some(step)
}

/// The `F_0` leaf through a direction on the rim sphere `S_C`.
struct RimLeaf<'a> {
    spec: &'a FoliationSpec,
    values: Vec<f64>,
}

impl RimLeaf<'_> {
    fn residual(&self, q: &[f64]) -> Vec<f64> {
        self.spec.invariant(q).iter().zip(&self.values).map(|(a, b)| a - b).collect()
    }

    fn retract(&self, q: &[f64]) -> Option<Vec<f64>> {
        let mut q = q.to_vec();
        for _ in 0..30 {
            let res = self.residual(&q);
            let worst = res.iter().fold(0.0, |m: f64, v| crate::par::nan_max(m, v.abs()));
            if worst.is_nan() {
                return None;
            }
            if worst <= 1e-12 {
                return Some(q);
            }
            let step = gauss_newton_step(&invariant_jacobian(self.spec, &q), &res, q.len())?;
            q.iter_mut().zip(&step).for_each(|(qi, si)| *qi -= si);
            let n = norm(&q);
            q.iter_mut().for_each(|qi| *qi /= n);
        }
        let worst = self.residual(&q).iter().fold(0.0, |m: f64, v| crate::par::nan_max(m, v.abs()));
        (worst <= 1e-10).then_some(q)
    }

    /// Projected-gradient ascent of `<q, v>` along the leaf from `q`.
    fn ascend(&self, v: &[f64], mut q: Vec<f64>) -> Vec<f64> {
        for _ in 0..500 {
            let f = dot(v, &q);
            let mut g: Vec<f64> = v.iter().zip(&q).map(|(vi, qi)| vi - f * qi).collect();
            let mut rows = invariant_jacobian(self.spec, &q);
            rows.push(q.clone());
            for b in &modified_gram_schmidt(&rows, 1e-8) {
                let a = dot(&g, b);
                g.iter_mut().zip(b).for_each(|(gi, bi)| *gi -= a * bi);
            }
            let gn = norm(&g);
            if gn < 1e-13 {
                break;
            }
            let mut tau = gn.atan2(f);
            let mut accepted = None;
            for _ in 0..40 {
                let (s, co) = tau.sin_cos();
                let trial: Vec<f64> = q.iter().zip(&g).map(|(qi, gi)| co * qi + s * gi / gn).collect();
                if let Some(next) = self.retract(&trial) {
                    if dot(v, &next) - f >= 1e-4 * gn * s {
                        accepted = Some(next);
                        break;
                    }
                }
                tau *= 0.5;
            }
            match accepted {
                Some(next) => {
                    let gain = dot(v, &next) - f;
                    q = next;
                    if gain < 1e-15 {
                        break;
                    }
                }
                None => break,
            }
        }
        q
    }
}

/// The composed leaf through a point, described by its radius and direction.
struct Target<'a> {
    c: &'a CliffordSystem,
    spec: &'a FoliationSpec,
    r: f64,
    dir: Vec<f64>,
    values: Vec<f64>,
}

impl<'a> Target<'a> {
    fn new(c: &'a CliffordSystem, spec: &'a FoliationSpec, y: &SpherePoint) -> Self {
        let v = pi_coords(c, y.coords());
        let r = norm(&v);
        let dir: Vec<f64> = if r > FOCAL_RADIUS { v.iter().map(|a| a / r).collect() } else { v.clone() };
        let mut t = Target { c, spec, r, dir, values: Vec::new() };
        t.values = if t.is_focal() { vec![0.0; c.m() + 1] } else { t.constraint(y.coords()) };
        t
    }

    fn is_focal(&self) -> bool {
        self.r <= FOCAL_RADIUS
    }

    fn is_rim(&self) -> bool {
        self.r >= 1.0 - RIM_GAP
    }

    /// `pi_C(z)` on `M_+`, otherwise `(|pi_C(z)|, ι(pi_C(z) / |pi_C(z)|))`.
    fn constraint(&self, z: &[f64]) -> Vec<f64> {
        let v = pi_coords(self.c, z);
        if self.is_focal() {
            return v;
        }
        let r = norm(&v);
        let mut out = vec![r];
        out.extend(self.spec.invariant(&v.iter().map(|a| a / r).collect::<Vec<_>>()));
        out
    }

    /// Gradient rows of [`Target::constraint`], tangent to the sphere.
    fn constraint_rows(&self, z: &[f64]) -> Vec<Vec<f64>> {
        let v = pi_coords(self.c, z);
        let grads: Vec<Vec<f64>> = (0..=self.c.m())
            .map(|i| self.c.apply(i, z).iter().zip(z).map(|(p, zi)| 2.0 * p - 2.0 * v[i] * zi).collect())
            .collect();
        if self.is_focal() {
            return grads;
        }
        let r = norm(&v);
        let dir: Vec<f64> = v.iter().map(|a| a / r).collect();
        let combine = |w: &[f64]| -> Vec<f64> {
            let mut row = vec![0.0; z.len()];
            for (wi, g) in w.iter().zip(&grads) {
                row.iter_mut().zip(g).for_each(|(o, gi)| *o += wi * gi);
            }
            row
        };
        let mut rows = vec![combine(&dir)];
        for grad in invariant_jacobian(self.spec, &dir) {
            rows.push(combine(&grad.iter().map(|g| g / r).collect::<Vec<_>>()));
        }
        rows
    }

    fn residual(&self, z: &[f64]) -> f64 {
        self.constraint(z).iter().zip(&self.values).map(|(a, b)| (a - b).abs()).fold(0.0, crate::par::nan_max)
    }

    /// Gauss–Newton projection of `z` back onto the leaf.
    fn retract(&self, z: &[f64]) -> Option<Vec<f64>> {
        let mut z = z.to_vec();
        for _ in 0..30 {
            let res: Vec<f64> = self.constraint(&z).iter().zip(&self.values).map(|(a, b)| a - b).collect();
            let worst = res.iter().fold(0.0, |m: f64, v| crate::par::nan_max(m, v.abs()));
            if worst.is_nan() {
                return None;
            }
            if worst <= 1e-12 {
                return Some(z);
            }
            let step = gauss_newton_step(&self.constraint_rows(&z), &res, z.len())?;
            z.iter_mut().zip(&step).for_each(|(zi, si)| *zi -= si);
            let n = norm(&z);
            z.iter_mut().for_each(|zi| *zi /= n);
        }
        (self.residual(&z) <= 1e-10).then_some(z)
    }

    /// Ascent of `<x, z>` along the leaf from `z`: projected nonlinear
    /// conjugate gradients (Polak–Ribière+, transport by projection,
    /// restart on non-ascent directions) with an Armijo line search along
    /// great circles followed by retraction.
    fn descend(&self, x: &[f64], z: Vec<f64>) -> Vec<f64> {
        let mut z = z;
        let mut prev: Option<(Vec<f64>, Vec<f64>)> = None;
        for _ in 0..MAX_DESCENT_STEPS {
            let f = dot(x, &z);
            let basis = {
                let mut rows = self.constraint_rows(&z);
                rows.push(z.clone());
                modified_gram_schmidt(&rows, 1e-8)
            };
            let project = |v: &mut Vec<f64>| {
                for b in &basis {
                    let a = dot(v, b);
                    v.iter_mut().zip(b).for_each(|(vi, bi)| *vi -= a * bi);
                }
            };
            let mut g = x.to_vec();
            project(&mut g);
            let gn = norm(&g);
            if gn < 1e-13 {
                break;
            }
            let mut d = g.clone();
            if let Some((mut g_old, mut d_old)) = prev.take() {
                let old_sq = dot(&g_old, &g_old);
                project(&mut g_old);
                project(&mut d_old);
                let beta = (dot(&g, &g) - dot(&g, &g_old)).max(0.0) / old_sq;
                d.iter_mut().zip(&d_old).for_each(|(di, oi)| *di += beta * oi);
                if dot(&d, &g) <= 1e-3 * gn * norm(&d) {
                    d = g.clone();
                }
            }
            let dn = norm(&d);
            let slope = dot(&g, &d) / dn;
            let mut tau = slope.atan2(f);
            let mut accepted = None;
            for _ in 0..40 {
                let (s, co) = tau.sin_cos();
                let trial: Vec<f64> = z.iter().zip(&d).map(|(zi, di)| co * zi + s * di / dn).collect();
                if let Some(next) = self.retract(&trial) {
                    // Armijo: demand a fixed fraction of the first-order gain
                    if dot(x, &next) - f >= 1e-4 * slope * s {
                        accepted = Some(next);
                        break;
                    }
                }
                tau *= 0.5;
            }
            match accepted {
                Some(next) => {
                    let gain = dot(x, &next) - f;
                    z = next;
                    if gain < 1e-15 {
                        break;
                    }
                    prev = Some((g, d));
                }
                None => break,
            }
        }
        z
    }
}

/// One random point of the composed leaf through `y`.
///
/// The direction of `pi_C(y)` is moved along its `F_0` leaf by the
/// `FoliationSpec` sampler, rescaled to the radius of `y`, and lifted by [`fiber_point`].
pub fn leaf_point(c: &CliffordSystem, spec: &FoliationSpec, y: &SpherePoint, rng: &mut Sampler) -> Result<SpherePoint> {
    check_spec(c, spec)?;
    let target = Target::new(c, spec, y);
    sample_leaf(&target, rng)
}

fn sample_leaf(t: &Target<'_>, rng: &mut Sampler) -> Result<SpherePoint> {
    if t.is_focal() {
        return mplus_point(t.c, rng);
    }
    let dir = t
        .spec
        .leaf_sample(&t.dir, rng)
        .ok_or_else(|| Error::InvalidParameter(format!("spec `{}` cannot sample its leaves", t.spec.name())))?;
    let v: Vec<f64> = dir.iter().map(|a| a * t.r.min(1.0)).collect();
    fiber_point(t.c, &v, rng)
}

/// Distance from `x` to the boundary fiber `E¹_+(Q)`: the angle between `x`
/// and its projection `(x + Qx) / 2`.
fn rim_fiber_distance(c: &CliffordSystem, q: &[f64], x: &[f64]) -> f64 {
    let qx = c.span_apply(q, x);
    let plus: f64 = x.iter().zip(&qx).map(|(a, b)| 0.25 * (a + b) * (a + b)).sum();
    let minus: f64 = x.iter().zip(&qx).map(|(a, b)| 0.25 * (a - b) * (a - b)).sum();
    minus.sqrt().atan2(plus.sqrt())
}

/// Estimate of the spherical distance from `x` to the composed leaf through `y`.
///
/// Draws `budget` seeded points of the leaf and refines every point that
/// improves on all earlier draws by projected-gradient ascent of `<x, z>`
/// along the leaf. Leaves on the boundary are unions of fibers `E¹_+(Q)`,
/// whose distance to `x` is exact, so there the directions are sampled and
/// refined along the `F_0` leaf instead.
/// Since the draw sequence is fixed by `seed`, the estimate never increases
/// with `budget`.
pub fn leaf_to_leaf_ambient_distance(
    c: &CliffordSystem,
    spec: &FoliationSpec,
    x: &SpherePoint,
    y: &SpherePoint,
    budget: usize,
    seed: u64,
) -> Result<f64> {
    check_spec(c, spec)?;
    if budget == 0 {
        return Err(Error::InvalidParameter("budget must be positive".into()));
    }
    let target = Target::new(c, spec, y);
    let mut best = f64::INFINITY;
    let mut records = Vec::new();
    let mut rim_records = Vec::new();
    for i in 0..budget {
        let mut rng = Sampler::child(seed, i as u64);
        if target.is_rim() {
            let q = spec
                .leaf_sample(&target.dir, &mut rng)
                .ok_or_else(|| Error::InvalidParameter(format!("spec `{}` cannot sample its leaves", spec.name())))?;
            let d = rim_fiber_distance(c, &q, x.coords());
            if d < best {
                best = d;
                rim_records.push(q);
            }
            continue;
        }
        let z = sample_leaf(&target, &mut rng)?;
        let d = angle_between(x.coords(), z.coords());
        // pi_C is even, so -z lies on the same leaf
        let (d, z) = if d > std::f64::consts::FRAC_PI_2 { (std::f64::consts::PI - d, z.neg()) } else { (d, z) };
        if d < best {
            best = d;
            records.push(z.into_vec());
        }
    }
    if !rim_records.is_empty() {
        // distance to E¹_+(q) depends only on <q, pi_C(x)>
        let leaf = RimLeaf { spec, values: spec.invariant(&target.dir) };
        let v = pi_coords(c, x.coords());
        for q in rim_records {
            best = best.min(rim_fiber_distance(c, &leaf.ascend(&v, q), x.coords()));
        }
    }
    for z in records {
        let refined = target.descend(x.coords(), z);
        best = best.min(angle_between(x.coords(), &refined));
    }
    Ok(best)
}
