use super::{QuotientPoint, SpherePoint};
use crate::algebra::{dot, norm, Sampler};
use crate::{CliffordSystem, Error, Result};

/// Horizontal geodesic `gamma(t) = cos(t) x_- + sin(t) x_+` with
/// `x_± ∈ E_±(P)` for a unit span element `P`.
#[derive(Clone, Debug, PartialEq)]
pub struct HorizontalGeodesic {
    p: Vec<f64>,
    x_plus: SpherePoint,
    x_minus: SpherePoint,
}

impl HorizontalGeodesic {
    /// Checks `|P| = 1`, `P x_± = ±x_±` to `1e-10` and `<x_+, x_-> = 0` to `1e-12`.
    pub fn new(c: &CliffordSystem, p: Vec<f64>, x_plus: SpherePoint, x_minus: SpherePoint) -> Result<Self> {
        let pn = norm(&p);
        if p.len() != c.m() + 1 || (pn - 1.0).abs() > 1e-12 {
            return Err(Error::NotUnit(pn));
        }
        for (x, sign) in [(&x_plus, 1.0), (&x_minus, -1.0)] {
            let px = c.span_apply(&p, x.coords());
            let defect = px.iter().zip(x.coords()).map(|(a, b)| (a - sign * b).abs()).fold(0.0, f64::max);
            if defect > 1e-10 {
                return Err(Error::InvalidParameter(format!("point is not in E_{sign:+}(P): defect {defect:e}")));
            }
        }
        let overlap = dot(x_plus.coords(), x_minus.coords()).abs();
        if overlap > 1e-12 {
            return Err(Error::InvalidParameter(format!("x_+ and x_- are not orthogonal: {overlap:e}")));
        }
        Ok(HorizontalGeodesic { p, x_plus, x_minus })
    }

    /// Uniformly random `P` on the span sphere and `x_±` uniform in `E¹_±(P)`.
    pub fn random(c: &CliffordSystem, rng: &mut Sampler) -> Result<Self> {
        let p = rng.unit_vector(c.m() + 1);
        let draw = |rng: &mut Sampler, sign: f64| loop {
            let g = rng.gaussian_vec(c.dim());
            let pg = c.span_apply(&p, &g);
            let y: Vec<f64> = g.iter().zip(&pg).map(|(a, b)| 0.5 * (a + sign * b)).collect();
            if norm(&y) >= 1e-8 {
                break SpherePoint::normalized(&y);
            }
        };
        let x_plus = draw(rng, 1.0)?;
        let x_minus = draw(rng, -1.0)?;
        Self::new(c, p, x_plus, x_minus)
    }

    pub fn p(&self) -> &[f64] {
        &self.p
    }

    pub fn x_plus(&self) -> &SpherePoint {
        &self.x_plus
    }

    pub fn x_minus(&self) -> &SpherePoint {
        &self.x_minus
    }

    pub fn eval(&self, t: f64) -> SpherePoint {
        let (s, co) = t.sin_cos();
        SpherePoint(self.x_minus.coords().iter().zip(self.x_plus.coords()).map(|(a, b)| co * a + s * b).collect())
    }

    /// Velocity `gamma'(t)`.
    pub fn velocity(&self, t: f64) -> Vec<f64> {
        let (s, co) = t.sin_cos();
        self.x_minus.coords().iter().zip(self.x_plus.coords()).map(|(a, b)| -s * a + co * b).collect()
    }
}

/// Data of the projected curve `pi_C(gamma(t)) = -cos(2t) P + sin(2t) Q`.
#[derive(Clone, Debug, PartialEq)]
pub struct GeodesicParams {
    pub p: Vec<f64>,
    /// `Q_i = <P_i x_+, x_->`.
    pub q: Vec<f64>,
    /// `sqrt(1 - |Q|^2)`, evaluated as `|x_- - sum_i Q_i P_i x_+|`.
    pub q_height: f64,
}

impl GeodesicParams {
    /// `-cos(2t) P + sin(2t) Q`.
    pub fn predicted(&self, t: f64) -> Vec<f64> {
        let (s, co) = (2.0 * t).sin_cos();
        self.p.iter().zip(&self.q).map(|(p, q)| -co * p + s * q).collect()
    }

    /// Endpoints `A = λ(-P)`, `B = λ(Q)` of the lifted great circle
    /// `λ(pi_C(gamma(t))) = cos(2t) A + sin(2t) B`, `t ∈ [0, π/2]`.
    pub fn lifted_frame(&self) -> (Vec<f64>, Vec<f64>) {
        let mut a: Vec<f64> = self.p.iter().map(|v| -0.5 * v).collect();
        a.push(0.0);
        let mut b: Vec<f64> = self.q.iter().map(|v| 0.5 * v).collect();
        b.push(0.5 * self.q_height);
        (a, b)
    }

    pub fn lifted_prediction(&self, t: f64) -> Vec<f64> {
        let (s, co) = (2.0 * t).sin_cos();
        let (a, b) = self.lifted_frame();
        a.iter().zip(&b).map(|(x, y)| co * x + s * y).collect()
    }
}

pub fn project_geodesic_params(c: &CliffordSystem, g: &HorizontalGeodesic) -> GeodesicParams {
    let frame: Vec<Vec<f64>> = (0..=c.m()).map(|i| c.apply(i, g.x_plus.coords())).collect();
    let q: Vec<f64> = frame.iter().map(|f| dot(f, g.x_minus.coords())).collect();
    let mut rest = g.x_minus.coords().to_vec();
    for (qi, f) in q.iter().zip(&frame) {
        rest.iter_mut().zip(f).for_each(|(r, fi)| *r -= qi * fi);
    }
    GeodesicParams { p: g.p.clone(), q, q_height: norm(&rest) }
}

impl QuotientPoint {
    /// Lift residual against a predicted lift vector.
    pub fn lift_residual(&self, predicted: &[f64]) -> f64 {
        self.lift().iter().zip(predicted).map(|(a, b)| (a - b).abs()).fold(0.0, crate::par::nan_max)
    }
}
