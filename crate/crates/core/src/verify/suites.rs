use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use super::{Checks, SuiteConfig, SuiteId};
use crate::algebra::{derive_seed, dot, norm, Sampler};
use crate::clifford::{
    build_system_with_cap, conjugate_system, equivalence_profile, sub_system, trace_invariant, verify_relations,
};
use crate::composed::{
    act_rotations, builtin_spec, composed_class, composed_quotient_distance, leaf_to_leaf_ambient_distance,
    random_rotation, same_leaf, signed_singular_values, FoliationSpec,
};
use crate::foliation::{
    boundary_fiber_point, eig_split, fd_gradient_defect, fiber_point, fkm_f0, horizontal_basis, mplus_point,
    pi_coords, project_geodesic_params, quotient_distance, reflect_symmetry, reflection_prediction, spin_prediction,
    spin_rotate, submersion_rank, HorizontalFrame, HorizontalGeodesic,
};
use crate::homogeneity::{diagonal_act, normal_form, sample_group_element, Field};
use crate::par::nan_max;
use crate::{delta, pi_c, CliffordSystem, Error, Execution, Result, SpherePoint};

pub(super) fn run(config: &SuiteConfig, checks: &mut Checks<'_>) -> Result<()> {
    let ctx = Ctx {
        c: &config.system,
        seed: config.seed,
        n: config.sample_count(),
        budget: config.budget,
        exec: config.execution,
    };
    match config.suite {
        SuiteId::Relations => relations(&ctx, checks),
        SuiteId::DiskImage => disk_image(&ctx, checks),
        SuiteId::BoundaryFibers => boundary_fibers(&ctx, checks),
        SuiteId::SphereQuotient => sphere_quotient(&ctx, checks),
        SuiteId::FocalAndFibers => focal_and_fibers(&ctx, checks),
        SuiteId::SubmersionRank => submersion(&ctx, checks),
        SuiteId::FactorizationMPlus1 => factorization(&ctx, checks),
        SuiteId::Geodesics => geodesics(&ctx, checks),
        SuiteId::QuotientMetric => quotient_metric(&ctx, checks),
        SuiteId::Symmetry => symmetry(&ctx, checks),
        SuiteId::FkmConsistency => fkm(&ctx, checks),
        SuiteId::InvariantsClassification => invariants(&ctx, checks),
        SuiteId::HomogeneousOrbits => orbits(&ctx, checks),
        SuiteId::NormalForms => normal_forms(&ctx, checks),
        SuiteId::ComposedIdentities => composed(&ctx, checks),
        SuiteId::Transnormality => transnormality(&ctx, checks),
        SuiteId::Diameter => diameter(&ctx, checks),
    }
}

struct Ctx<'a> {
    c: &'a CliffordSystem,
    seed: u64,
    n: usize,
    budget: usize,
    exec: Execution,
}

impl Ctx<'_> {
    /// Evaluates `f` on `count` samples of stream `stream`; sample `i` owns
    /// the child sampler `i`. Returns the componentwise maximum.
    fn worst<const N: usize, F>(&self, stream: u64, count: usize, f: F) -> Result<[f64; N]>
    where
        F: Fn(&mut Sampler) -> Result<[f64; N]> + Sync + Send,
    {
        let base = derive_seed(self.seed, stream);
        let rows = self.exec.try_map(count, |i| f(&mut Sampler::child(base, i as u64)))?;
        Ok(rows.into_iter().fold([0.0; N], |mut acc, row| {
            for (a, v) in acc.iter_mut().zip(row) {
                *a = nan_max(*a, v);
            }
            acc
        }))
    }

    fn m(&self) -> usize {
        self.c.m()
    }

    fn random_point(&self, rng: &mut Sampler) -> Result<SpherePoint> {
        SpherePoint::new(rng.unit_vector(self.c.dim()))
    }

    fn random_span(&self, rng: &mut Sampler) -> Vec<f64> {
        rng.unit_vector(self.m() + 1)
    }

    fn has_interior(&self) -> bool {
        self.c.l() > self.c.m()
    }
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, nan_max)
}

fn bool_violation(ok: bool) -> f64 {
    if ok {
        0.0
    } else {
        1.0
    }
}

fn relations(ctx: &Ctx<'_>, out: &mut Checks<'_>) -> Result<()> {
    let c = ctx.c;
    let exact = c.is_exact();
    let rel = verify_relations(c, 0.0);
    out.push(
        "relations",
        "generators are symmetric involutions that pairwise anticommute",
        rel.max_violation(),
        if exact { 0.0 } else { 1e-12 },
    );
    if let Some(p) = c.provenance() {
        let expected = 2 * p.k * delta(c.m())?;
        out.push(
            "dimension",
            "generators act on R^{2 k delta(m)}",
            (c.dim() as f64 - expected as f64).abs(),
            0.0,
        );
    }
    let [iso] = ctx.worst(0, ctx.n, |rng| {
        let x = rng.gaussian_vec(c.dim());
        let (p, q) = (rng.gaussian_vec(c.m() + 1), rng.gaussian_vec(c.m() + 1));
        let lhs = dot(&c.span_apply(&p, &x), &c.span_apply(&q, &x));
        let rhs = dot(&p, &q) * dot(&x, &x);
        let scale = norm(&p) * norm(&q) * dot(&x, &x);
        Ok([(lhs - rhs).abs() / scale])
    })?;
    out.push("span_isometry", "<Px, Qx> = <P, Q> |x|^2 for span elements P, Q", iso, 1e-12);
    Ok(())
}

fn disk_image(ctx: &Ctx<'_>, out: &mut Checks<'_>) -> Result<()> {
    let c = ctx.c;
    let [excess, even] = ctx.worst(0, ctx.n, |rng| {
        let x = ctx.random_point(rng)?;
        let v = pi_coords(c, x.coords());
        let w = pi_coords(c, x.neg().coords());
        Ok([(norm(&v) - 1.0).max(0.0), max_abs_diff(&v, &w)])
    })?;
    out.push("disk_containment", "the image of pi_C lies in the closed unit disk D_C", excess, 1e-12);
    out.push("evenness", "pi_C(-x) = pi_C(x)", even, 0.0);
    Ok(())
}

fn boundary_fibers(ctx: &Ctx<'_>, out: &mut Checks<'_>) -> Result<()> {
    const TARGETS: usize = 4;
    let c = ctx.c;
    let (mut member, mut antipode, mut dims) = (0.0f64, 0.0f64, 0.0f64);
    for j in 0..TARGETS {
        let p = ctx.random_span(&mut Sampler::child(derive_seed(ctx.seed, 0), j as u64));
        let (plus, minus) = eig_split(&c.span_matrix(&p))?;
        dims = dims.max((plus.len() as f64 - c.l() as f64).abs() + (minus.len() as f64 - c.l() as f64).abs());
        let [a, b] = ctx.worst(1 + j as u64, ctx.n, |rng| {
            let x = boundary_fiber_point(c, &p, rng)?;
            Ok([
                max_abs_diff(pi_c(c, &x)?.disk_coords(), &p),
                max_abs_diff(pi_c(c, &x.neg())?.disk_coords(), &p),
            ])
        })?;
        member = nan_max(member, a);
        antipode = nan_max(antipode, b);
    }
    out.push("fiber_membership", "the unit sphere of E_+(P) maps to P", member, 1e-10);
    out.push("antipodal_membership", "-x lies in the same boundary fiber", antipode, 1e-10);
    out.push("eigenspace_dimension", "both eigenspaces of a unit span element have dimension l", dims, 0.0);
    Ok(())
}

fn sphere_quotient(ctx: &Ctx<'_>, out: &mut Checks<'_>) -> Result<()> {
    let c = ctx.c;
    let [radius] = ctx.worst(0, ctx.n, |rng| {
        let x = ctx.random_point(rng)?;
        Ok([(norm(&pi_coords(c, x.coords())) - 1.0).abs()])
    })?;
    out.push("sphere_image", "for l = m the image of pi_C is the sphere S_C", radius, 1e-10);
    let [pre] = ctx.worst(1, (ctx.n / 100).max(1), |rng| {
        let p = ctx.random_span(rng);
        let x = boundary_fiber_point(c, &p, rng)?;
        Ok([max_abs_diff(pi_c(c, &x)?.disk_coords(), &p)])
    })?;
    out.push("preimage", "every point of S_C has a nonempty preimage", pre, 1e-10);
    Ok(())
}

/// Ten deterministic disk points: radii `j / 9`, directions cycling through
/// coordinate planes. Includes the origin and a rim point.
pub(crate) fn disk_grid(m: usize) -> Vec<Vec<f64>> {
    let dim = m + 1;
    (0..10)
        .map(|j| {
            let r = j as f64 / 9.0;
            let phi = 0.7 * j as f64;
            let mut v = vec![0.0; dim];
            v[j % dim] += r * phi.cos();
            v[(j + 1) % dim] += r * phi.sin();
            let n = norm(&v);
            if n > 0.0 {
                v.iter_mut().for_each(|a| *a *= r / n);
            }
            v
        })
        .collect()
}

fn focal_and_fibers(ctx: &Ctx<'_>, out: &mut Checks<'_>) -> Result<()> {
    let c = ctx.c;
    let [focal] = ctx.worst(0, ctx.n, |rng| Ok([norm(&pi_coords(c, mplus_point(c, rng)?.coords()))]))?;
    out.push("mplus", "the focal manifold M+ is the preimage of the origin", focal, 1e-10);
    let grid = disk_grid(c.m());
    let per_point = (ctx.n / grid.len()).max(1);
    let mut hit = 0.0f64;
    for (j, v) in grid.iter().enumerate() {
        let [r] = ctx.worst(1 + j as u64, per_point, |rng| {
            let x = fiber_point(c, v, rng)?;
            Ok([max_abs_diff(pi_c(c, &x)?.disk_coords(), v)])
        })?;
        hit = nan_max(hit, r);
    }
    out.push("surjectivity", "pi_C maps onto the closed disk: every grid point is hit", hit, 1e-9);
    Ok(())
}

fn submersion(ctx: &Ctx<'_>, out: &mut Checks<'_>) -> Result<()> {
    let c = ctx.c;
    let full = (c.m() + 1) as f64;
    let [rank, fd, tangency] = ctx.worst(0, ctx.n, |rng| {
        let x = loop {
            let x = ctx.random_point(rng)?;
            if norm(&pi_coords(c, x.coords())) < 1.0 - 1e-6 {
                break x;
            }
        };
        let rank = match submersion_rank(c, &x) {
            Ok(d) => (d.rank as f64 - full).abs(),
            Err(Error::MarginalRank(_)) => f64::INFINITY,
            Err(e) => return Err(e),
        };
        let tangency = match horizontal_basis(c, &x)? {
            HorizontalFrame::Interior(rows) => rows.iter().map(|r| dot(r, x.coords()).abs()).fold(0.0, nan_max),
            HorizontalFrame::BoundaryNormal(_) => f64::INFINITY,
        };
        Ok([rank, fd_gradient_defect(c, &x, 1e-5), tangency])
    })?;
    out.push("rank", "pi_C is a submersion at interior points: rank m + 1 outside the 1e-8..1e-6 band", rank, 0.0);
    out.push("fd_gradient", "d pi_C along X_{P_i} matches the gradient 2 P_j x", fd, 1e-6);
    out.push("tangency", "X_{P_i}(x) is tangent to the sphere", tangency, 1e-12);
    Ok(())
}

fn factorization(ctx: &Ctx<'_>, out: &mut Checks<'_>) -> Result<()> {
    let c = ctx.c;
    let m = c.m();
    let full = build_system_with_cap(m + 1, 1, 0, usize::MAX)?;
    let sub = sub_system(&full, &(0..=m).collect::<Vec<_>>())?;
    let [fact, sphere] = ctx.worst(0, ctx.n, |rng| {
        let x = ctx.random_point(rng)?;
        let (a, b) = (pi_coords(&sub, x.coords()), pi_coords(&full, x.coords()));
        Ok([max_abs_diff(&a, &b[..=m]), (norm(&b) - 1.0).abs()])
    })?;
    out.push("factorization", "for l = m + 1, pi_C = Pr o pi_C' for the extended system C'", fact, 0.0);
    out.push("extended_sphere_image", "the extended system has image the sphere S_C'", sphere, 1e-10);

    // A point whose extended coordinate is far from zero, and a point of the
    // same pi_C-fiber on the other sheet.
    let mut rng = Sampler::child(derive_seed(ctx.seed, 1), 0);
    let x = (0..64)
        .map(|_| ctx.random_point(&mut rng))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .max_by(|a, b| {
            let t = |p: &SpherePoint| full.quadratic_form(m + 1, p.coords()).abs();
            t(a).total_cmp(&t(b))
        })
        .expect("nonempty");
    let w = pi_coords(&full, x.coords());
    let t = w[m + 1];
    let mut target = w.clone();
    target[m + 1] = -t;
    let r = norm(&target);
    target.iter_mut().for_each(|a| *a /= r);
    let y = boundary_fiber_point(&full, &target, &mut rng)?;
    let wy = pi_coords(&full, y.coords());
    out.push(
        "witness_same_fiber",
        "the witness pair lies in one pi_C-fiber",
        max_abs_diff(&pi_coords(c, y.coords()), &pi_coords(c, x.coords())),
        1e-10,
    );
    out.push(
        "witness_opposite_sheet",
        "the witness pair has opposite extended coordinates, so the fiber is disconnected",
        (wy[m + 1] + t).abs().max(bool_violation(t.abs() > 0.1)),
        1e-10,
    );
    Ok(())
}

fn grid(n: usize, hi: f64) -> Vec<f64> {
    (0..n).map(|j| hi * j as f64 / (n - 1) as f64).collect()
}

fn geodesics(ctx: &Ctx<'_>, out: &mut Checks<'_>) -> Result<()> {
    let c = ctx.c;
    let ts = grid(100, FRAC_PI_2);
    let [proj, lift, frame, qdisk, perp] = ctx.worst(0, ctx.n, |rng| {
        let g = HorizontalGeodesic::random(c, rng)?;
        let params = project_geodesic_params(c, &g);
        let (mut proj, mut lift) = (0.0f64, 0.0f64);
        for &t in &ts {
            let q = pi_c(c, &g.eval(t))?;
            proj = nan_max(proj, max_abs_diff(q.disk_coords(), &params.predicted(t)));
            lift = nan_max(lift, q.lift_residual(&params.lifted_prediction(t)));
        }
        let (a, b) = params.lifted_frame();
        let frame = (norm(&a) - 0.5).abs().max((norm(&b) - 0.5).abs()).max(dot(&a, &b).abs());
        Ok([proj, lift, frame, (norm(&params.q) - 1.0).max(0.0), dot(&params.p, &params.q).abs()])
    })?;
    out.push("projection", "pi_C(gamma(t)) = -cos(2t) P + sin(2t) Q along horizontal geodesics", proj, 1e-10);
    out.push("lifted_great_circle", "lifted projected geodesics are great circles cos(2t) A + sin(2t) B", lift, 1e-9);
    out.push("lifted_frame", "|A| = |B| = 1/2 and <A, B> = 0", frame, 1e-9);
    out.push("q_in_disk", "|Q| <= 1", qdisk, 1e-12);
    out.push("p_perp_q", "<P, Q> = 0", perp, 1e-12);
    Ok(())
}

fn quotient_metric(ctx: &Ctx<'_>, out: &mut Checks<'_>) -> Result<()> {
    let c = ctx.c;
    let ts = grid(25, FRAC_PI_2);
    let [speed, antipodal, zero] = ctx.worst(0, ctx.n, |rng| {
        let g = HorizontalGeodesic::random(c, rng)?;
        let pts = ts.iter().map(|&t| pi_c(c, &g.eval(t))).collect::<Result<Vec<_>>>()?;
        let mut speed = 0.0f64;
        for (i, a) in pts.iter().enumerate() {
            for (j, b) in pts.iter().enumerate() {
                speed = nan_max(speed, (a.distance(b) - (ts[i] - ts[j]).abs()).abs());
            }
        }
        let p = ctx.random_span(rng);
        let minus: Vec<f64> = p.iter().map(|a| -a).collect();
        let antipodal = (quotient_distance(&p, &minus)? - FRAC_PI_2).abs();
        let v: Vec<f64> = ctx.random_span(rng).iter().map(|a| a * rng.uniform(0.0, 1.0)).collect();
        Ok([speed, antipodal, quotient_distance(&v, &v)?])
    })?;
    out.push("unit_speed", "horizontal geodesics project to unit-speed geodesics of the curvature-4 quotient", speed, 1e-8);
    out.push("antipodal_rim", "antipodal rim points are at quotient distance pi/2", antipodal, 1e-12);
    out.push("self_distance", "d(v, v) = 0", zero, 0.0);
    Ok(())
}

fn symmetry(ctx: &Ctx<'_>, out: &mut Checks<'_>) -> Result<()> {
    let c = ctx.c;
    let [refl, spin] = ctx.worst(0, ctx.n, |rng| {
        let x = ctx.random_point(rng)?;
        let v = pi_coords(c, x.coords());
        let p = ctx.random_span(rng);
        let refl = max_abs_diff(&pi_coords(c, reflect_symmetry(c, &p, &x)?.coords()), &reflection_prediction(&v, &p));
        let basis = crate::algebra::modified_gram_schmidt(&[p.clone(), ctx.random_span(rng)], 1e-8);
        let spin = if let [p, q] = &basis[..] {
            let theta = rng.uniform(-PI, PI);
            let gx = spin_rotate(c, p, q, theta, &x)?;
            max_abs_diff(&pi_coords(c, gx.coords()), &spin_prediction(&v, p, q, theta))
        } else {
            0.0
        };
        Ok([refl, spin])
    })?;
    out.push("reflection", "pi_C(Px) = -pi_C(x) + 2 <pi_C(x), P> P", refl, 1e-10);
    out.push("spin_rotation", "cos(t) + sin(t) PQ rotates the (P, Q)-plane of the disk by -2t", spin, 1e-9);
    Ok(())
}

fn fkm(ctx: &Ctx<'_>, out: &mut Checks<'_>) -> Result<()> {
    let c = ctx.c;
    let [agree] = ctx.worst(0, ctx.n, |rng| {
        let f = fkm_f0(c, &ctx.random_point(rng)?)?;
        Ok([(f.direct - f.factored).abs()])
    })?;
    out.push("fkm_factorization", "<x,x>^2 - 2 sum <P_i x, x>^2 = 1 - 2 |pi_C(x)|^2 on the sphere", agree, 1e-12);
    let count = (ctx.n / 10).max(1);
    let [minus] = ctx.worst(1, count, |rng| {
        let p = ctx.random_span(rng);
        Ok([(fkm_f0(c, &boundary_fiber_point(c, &p, rng)?)?.direct + 1.0).abs()])
    })?;
    out.push("level_m_minus", "F = -1 on boundary fibers (the focal manifold M-)", minus, 1e-10);
    if ctx.has_interior() {
        let [plus, half] = ctx.worst(2, count, |rng| {
            let f = fkm_f0(c, &mplus_point(c, rng)?)?;
            let v: Vec<f64> = ctx.random_span(rng).iter().map(|a| 0.5 * a).collect();
            let g = fkm_f0(c, &fiber_point(c, &v, rng)?)?;
            Ok([(f.direct - 1.0).abs(), (g.direct - 0.5).abs()])
        })?;
        out.push("level_m_plus", "F = +1 on the focal manifold M+", plus, 1e-10);
        out.push("level_half_radius", "F = 1/2 on fibers over |v| = 1/2", half, 1e-10);
    }
    Ok(())
}

fn invariants(ctx: &Ctx<'_>, out: &mut Checks<'_>) -> Result<()> {
    let c = ctx.c;
    let m = c.m();
    let base = trace_invariant(c);
    let profile = equivalence_profile(c)?;
    if let Some(p) = c.provenance() {
        let expected = if m.is_multiple_of(4) { (p.k as f64 - 2.0 * p.flips as f64).abs() } else { 0.0 };
        out.push(
            "trace_invariant",
            "|tr(P_0 ... P_m)| / 2 delta(m) = |k - 2j| for m = 0 mod 4, and 0 otherwise",
            (base - expected).abs(),
            1e-9,
        );
    }
    let mut kappas: Vec<Option<usize>> = (0..=profile.k)
        .map(|j| build_system_with_cap(m, profile.k, j, usize::MAX).and_then(|s| equivalence_profile(&s)))
        .map(|p| p.map(|p| p.kappa))
        .collect::<Result<_>>()?;
    kappas.sort();
    kappas.dedup();
    let expected = if m.is_multiple_of(4) { profile.k / 2 + 1 } else { 1 };
    out.push(
        "class_count",
        "floor(k/2) + 1 geometric classes for m = 0 mod 4, and one class otherwise",
        (kappas.len() as f64 - expected as f64).abs(),
        0.0,
    );
    let [trace, prof, rel] = ctx.worst(0, ctx.n, |rng| {
        let a = rng.orthogonal(c.dim());
        let d = conjugate_system(c, &a)?;
        Ok([
            (trace_invariant(&d) - base).abs(),
            bool_violation(equivalence_profile(&d)? == profile),
            verify_relations(&d, 0.0).max_violation(),
        ])
    })?;
    out.push("conjugation_trace", "the trace invariant is unchanged by conjugation", trace, 1e-9);
    out.push("conjugation_profile", "equivalence profiles are unchanged by conjugation", prof, 0.0);
    out.push("conjugated_relations", "conjugated generators satisfy the Clifford relations", rel, 1e-12);
    Ok(())
}

fn field_of(c: &CliffordSystem) -> Result<(Field, usize)> {
    let field = Field::for_m(c.m()).ok_or_else(|| Error::InvalidParameter(format!("no field of dimension {}", c.m())))?;
    Ok((field, c.l() / field.dim()))
}

fn orbits(ctx: &Ctx<'_>, out: &mut Checks<'_>) -> Result<()> {
    let c = ctx.c;
    let (field, k) = field_of(c)?;
    let [orbit, unitary, det] = ctx.worst(0, ctx.n, |rng| {
        let g = sample_group_element(field, k, rng.next_seed())?;
        let x = ctx.random_point(rng)?;
        let gx = diagonal_act(&g, &x)?;
        let det = match field {
            Field::Real => (g.real_matrix().det() - 1.0).abs(),
            Field::Complex if k > 1 => (g.complex_det() - num_complex::Complex64::new(1.0, 0.0)).norm(),
            _ => 0.0,
        };
        Ok([
            max_abs_diff(&pi_coords(c, gx.coords()), &pi_coords(c, x.coords())),
            g.real_matrix().orthogonality_defect(),
            det,
        ])
    })?;
    out.push("orbit_in_fiber", "the diagonal U(F, k) action preserves pi_C", orbit, 1e-10);
    out.push("group_unitary", "sampled group elements are orthogonal on R^{mk}", unitary, 1e-12);
    out.push("group_determinant", "det = 1 for SO(k) and SU(k)", det, 1e-12);
    Ok(())
}

fn normal_forms(ctx: &Ctx<'_>, out: &mut Checks<'_>) -> Result<()> {
    let c = ctx.c;
    let (field, k) = field_of(c)?;
    let [constant, unit, rep, fiber, iff] = ctx.worst(0, ctx.n, |rng| {
        let g = sample_group_element(field, k, rng.next_seed())?;
        let x = ctx.random_point(rng)?;
        let nx = normal_form(field, k, &x)?;
        let ngx = normal_form(field, k, &diagonal_act(&g, &x)?)?;
        let unit = (nx.u1 * nx.u1 + nx.v1().norm_sqr() + nx.v2 * nx.v2 - 1.0).abs();
        let px = pi_coords(c, x.coords());
        let rep = max_abs_diff(&pi_coords(c, nx.point(field, k)?.coords()), &px);
        let y = fiber_point(c, &px, rng)?;
        let ny = normal_form(field, k, &y)?;
        let z = ctx.random_point(rng)?;
        let nz = normal_form(field, k, &z)?;
        let mut mismatch = 0.0f64;
        for (other, n_other) in [(&y, &ny), (&z, &nz)] {
            let same_nf = nx.max_abs_diff(n_other) <= 1e-9;
            let same_pi = norm(
                &px.iter().zip(pi_coords(c, other.coords())).map(|(a, b)| a - b).collect::<Vec<_>>(),
            ) <= 1e-8;
            mismatch = mismatch.max(bool_violation(same_nf == same_pi));
        }
        Ok([nx.max_abs_diff(&ngx), unit, rep, nx.max_abs_diff(&ny), mismatch])
    })?;
    out.push("orbit_constant", "normal forms are constant on orbits", constant, 1e-9);
    out.push("normal_form_unit", "u1^2 + |v1|^2 + v2^2 = 1", unit, 1e-12);
    out.push("representative_in_fiber", "the representative (u1 e1, v1 e1 + v2 e2) lies in the fiber of x", rep, 1e-9);
    out.push("fiber_constant", "normal forms are constant on pi_C-fibers", fiber, 1e-9);
    out.push("fiber_iff_normal_form", "equal normal forms if and only if equal pi_C values", iff, 0.0);
    Ok(())
}

fn composed(ctx: &Ctx<'_>, out: &mut Checks<'_>) -> Result<()> {
    let c = ctx.c;
    let m = c.m();
    let points = builtin_spec("points", m)?;
    let one_leaf = builtin_spec("one_leaf", m)?;
    const TOL: f64 = 1e-8;
    let [pm, pd, om, radius_law] = ctx.worst(0, ctx.n, |rng| {
        let x = ctx.random_point(rng)?;
        let vx = pi_c(c, &x)?;
        let same = fiber_point(c, vx.disk_coords(), rng)?;
        let other = ctx.random_point(rng)?;
        let ring_dir = ctx.random_span(rng);
        let ring: Vec<f64> = ring_dir.iter().map(|a| a * vx.radius().min(1.0)).collect();
        let ring = fiber_point(c, &ring, rng)?;
        let mut pm = 0.0f64;
        for y in [&same, &other, &x.neg()] {
            let close = max_abs_diff(pi_c(c, y)?.disk_coords(), vx.disk_coords()) <= TOL;
            pm = pm.max(bool_violation(same_leaf(c, &points, &x, y, TOL)? == close));
        }
        let pd = (composed_quotient_distance(c, &points, &x, &other)?
            - quotient_distance(vx.disk_coords(), pi_c(c, &other)?.disk_coords())?)
        .abs();
        let (mut om, mut law) = (0.0f64, 0.0f64);
        for y in [&ring, &other] {
            let leaf = same_leaf(c, &one_leaf, &x, y, TOL)?;
            let close = (pi_c(c, y)?.radius() - vx.radius()).abs() <= TOL;
            om = om.max(bool_violation(leaf == close));
            if leaf {
                law = law.max((fkm_f0(c, &x)?.factored - fkm_f0(c, y)?.factored).abs());
            }
        }
        Ok([pm, pd, om, law])
    })?;
    out.push("points_is_clifford", "with F_0 by points, composed leaves are the fibers of pi_C", pm, 0.0);
    out.push("points_distance", "with F_0 by points, the composed quotient metric is the disk metric", pd, 1e-9);
    out.push("one_leaf_is_fkm", "with F_0 a single leaf, composed leaves are the FKM level sets", om, 0.0);
    out.push("equal_radius_law", "points of one composed leaf share the FKM value", radius_law, 2.0 * TOL);
    if ctx.has_interior() {
        let [apex] = ctx.worst(1, (ctx.n / 10).max(1), |rng| {
            let x = mplus_point(c, rng)?;
            let y = boundary_fiber_point(c, &ctx.random_span(rng), rng)?;
            Ok([(composed_quotient_distance(c, &one_leaf, &x, &y)? - FRAC_PI_4).abs()])
        })?;
        out.push("apex_to_rim", "M+ and M- are at composed quotient distance pi/4", apex, 1e-9);
    }
    if m == 8 {
        let spec = FoliationSpec::tensor_svd();
        let [inv, class] = ctx.worst(2, ctx.n, |rng| {
            let p = rng.unit_vector(9);
            let (u, v) = (random_rotation(rng), random_rotation(rng));
            let q = act_rotations(&u, &v, &p);
            let x = fiber_point(c, &p, rng)?;
            let cls = composed_class(c, &spec, &x)?;
            let tail = cls.tail.unwrap_or_default();
            Ok([max_abs_diff(&signed_singular_values(&q), &signed_singular_values(&p)), max_abs_diff(&tail, &spec.invariant(&p))])
        })?;
        out.push("tensor_invariance", "signed singular values are SO(3) x SO(3)-invariant", inv, 1e-10);
        out.push("tensor_class", "composed classes carry the tensor invariant of the direction", class, 1e-10);
    }
    Ok(())
}

/// A point over a disk point with cone angle `s` (`|pi_C| = sin s`) in a
/// uniform direction; rim points when the system has no interior.
fn cone_point(ctx: &Ctx<'_>, s: f64, rng: &mut Sampler) -> Result<SpherePoint> {
    let s = if ctx.has_interior() { s } else { FRAC_PI_2 };
    let r = if s >= FRAC_PI_2 { 1.0 } else { s.sin() };
    let v: Vec<f64> = ctx.random_span(rng).iter().map(|a| a * r).collect();
    fiber_point(ctx.c, &v, rng)
}

fn transnormality(ctx: &Ctx<'_>, out: &mut Checks<'_>) -> Result<()> {
    let c = ctx.c;
    let mut specs = vec![("points", 1e-3), ("one_leaf", 1e-2), ("height", 1e-2)];
    if c.m() == 8 {
        specs.push(("tensor_svd", 1e-2));
    }
    for (j, (name, tol)) in specs.into_iter().enumerate() {
        let spec = builtin_spec(name, c.m())?;
        let [gap] = ctx.worst(j as u64, ctx.n, |rng| {
            let x = cone_point(ctx, rng.uniform(0.1, FRAC_PI_2 - 0.1), rng)?;
            let y = cone_point(ctx, rng.uniform(0.1, FRAC_PI_2 - 0.1), rng)?;
            let seed = rng.next_seed();
            let ambient = leaf_to_leaf_ambient_distance(c, &spec, &x, &y, ctx.budget, seed)?;
            Ok([(ambient - composed_quotient_distance(c, &spec, &x, &y)?).abs()])
        })?;
        out.push(
            &format!("transnormality_{name}"),
            "the ambient distance between leaves equals the composed quotient distance",
            gap,
            tol,
        );
    }
    Ok(())
}

fn diameter(ctx: &Ctx<'_>, out: &mut Checks<'_>) -> Result<()> {
    let c = ctx.c;
    let spec = FoliationSpec::tensor_svd();
    // Cone angles follow the arcsine law on [0, pi/2], which covers the
    // apex and the rim densely.
    let arcsine = |rng: &mut Sampler| FRAC_PI_2 * (FRAC_PI_2 * rng.uniform(0.0, 1.0)).sin().powi(2);
    let [sup] = ctx.worst(0, ctx.n, |rng| {
        let x = cone_point(ctx, arcsine(rng), rng)?;
        let y = cone_point(ctx, arcsine(rng), rng)?;
        Ok([composed_quotient_distance(c, &spec, &x, &y)?])
    })?;
    out.push("diameter_upper", "the composed quotient of the tensor foliation has diameter at most pi/4", (sup - FRAC_PI_4).max(0.0), 1e-6);
    if c.l() > c.m() + 1 {
        out.push("diameter_lower", "sampled pairs come within 0.05 of the diameter pi/4", (FRAC_PI_4 - sup).max(0.0), 0.05);
    }
    Ok(())
}
