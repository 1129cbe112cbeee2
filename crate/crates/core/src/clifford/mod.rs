//! Clifford systems: construction, relation checks, conjugation, restriction
//! and the trace invariant separating geometric equivalence classes.
//!
//! Built systems act on `R^{2l} = R^l ⊕ R^l` with coordinates `(u, v)`, where
//! `u` and `v` each consist of `k` consecutive blocks of length `delta(m)`.

mod io;
mod structures;

use serde::{Deserialize, Serialize};

use crate::algebra::{DenseMatrix, SignedPermMatrix};
use crate::{Error, Result};

pub use io::{read_system, system_from_json, system_to_json, write_system};
pub use structures::build_complex_structures;

/// Default cap on the ambient dimension `2l` of constructed systems.
pub const DEFAULT_MAX_DIM: usize = 512;

/// Dimension of an irreducible Clifford module for rank `m + 1`, i.e. the
/// smallest `l` such that a Clifford system `(P_0, ..., P_m)` on `R^{2l}` exists.
pub fn delta(m: usize) -> Result<usize> {
    const TABLE: [usize; 8] = [1, 2, 4, 4, 8, 8, 8, 8];
    match m {
        0 => Err(Error::InvalidParameter("delta(m) needs m >= 1".into())),
        1..=8 => Ok(TABLE[m - 1]),
        _ => Ok(16 * delta(m - 8)?),
    }
}

/// Multiplicity and sign-flip count of a built system.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub k: usize,
    pub flips: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Generators {
    SignedPerm(Vec<SignedPermMatrix>),
    Dense(Vec<DenseMatrix>),
}

/// A Clifford system `(P_0, ..., P_m)` on `R^{2l}`.
///
/// Construction validates all relations, so every value of this type is a
/// genuine Clifford system (exactly for signed permutations, to `1e-10` for
/// dense generators).
#[derive(Clone, Debug, PartialEq)]
pub struct CliffordSystem {
    m: usize,
    l: usize,
    generators: Generators,
    provenance: Option<Provenance>,
}

/// Geometric equivalence data: two systems are geometrically equivalent iff
/// their profiles agree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EquivalenceProfile {
    pub m: usize,
    pub k: usize,
    pub kappa: Option<usize>,
}

/// Per-relation maxima from [`verify_relations`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RelationCheck {
    pub symmetry: f64,
    pub square: f64,
    pub anticommutation: f64,
    pub tol: f64,
}

impl RelationCheck {
    pub fn max_violation(&self) -> f64 {
        crate::par::nan_max(crate::par::nan_max(self.symmetry, self.square), self.anticommutation)
    }

    pub fn pass(&self) -> bool {
        self.max_violation() <= self.tol
    }
}

/// Builds `k` irreducible blocks of rank `m + 1`, the last `flips` of them
/// with `P_0` negated, under the default dimension cap.
pub fn build_system(m: usize, k: usize, flips: usize) -> Result<CliffordSystem> {
    build_system_with_cap(m, k, flips, DEFAULT_MAX_DIM)
}

pub fn build_system_with_cap(m: usize, k: usize, flips: usize, max_dim: usize) -> Result<CliffordSystem> {
    if m == 0 || k == 0 {
        return Err(Error::InvalidParameter(format!("need m >= 1 and k >= 1, got m = {m}, k = {k}")));
    }
    if flips > k {
        return Err(Error::InvalidParameter(format!("flips = {flips} exceeds k = {k}")));
    }
    if (m, k) == (1, 1) {
        return Err(Error::Degenerate(
            "(m, k) = (1, 1) has l = m = 1 and 0-sphere fibers; it is excluded".into(),
        ));
    }
    let d = delta(m)?;
    let l = k * d;
    if 2 * l > max_dim {
        return Err(Error::DimensionCap { dim: 2 * l, cap: max_dim });
    }
    let id_l = SignedPermMatrix::identity(l);
    let id_k = SignedPermMatrix::identity(k);
    let signs = SignedPermMatrix::new((0..k).collect(), (0..k).map(|b| if b < k - flips { 1 } else { -1 }).collect())?;
    let s = signs.kron(&SignedPermMatrix::identity(d));
    let mut gens = Vec::with_capacity(m + 1);
    gens.push(SignedPermMatrix::block2(Some(&s), None, None, Some(&s.neg()))?);
    gens.push(SignedPermMatrix::block2(None, Some(&id_l), Some(&id_l), None)?);
    for j in build_complex_structures(m - 1, d)? {
        let jk = id_k.kron(&j);
        gens.push(SignedPermMatrix::block2(None, Some(&jk), Some(&jk.neg()), None)?);
    }
    Ok(CliffordSystem { m, l, generators: Generators::SignedPerm(gens), provenance: Some(Provenance { k, flips }) })
}

impl CliffordSystem {
    /// Validates exact generators; relations must hold with violation 0.
    pub fn from_signed_perm(gens: Vec<SignedPermMatrix>, provenance: Option<Provenance>) -> Result<Self> {
        let sys = Self::assemble(Generators::SignedPerm(gens), provenance)?;
        let check = verify_relations(&sys, 0.0);
        if !check.pass() {
            return Err(Error::MalformedSystem(format!("relations violated by {:e}", check.max_violation())));
        }
        Ok(sys)
    }

    /// Validates dense generators; relations must hold to `1e-10`.
    pub fn from_dense(gens: Vec<DenseMatrix>, provenance: Option<Provenance>) -> Result<Self> {
        let sys = Self::assemble(Generators::Dense(gens), provenance)?;
        let check = verify_relations(&sys, 1e-10);
        if !check.pass() {
            return Err(Error::MalformedSystem(format!("relations violated by {:e}", check.max_violation())));
        }
        Ok(sys)
    }

    fn assemble(generators: Generators, provenance: Option<Provenance>) -> Result<Self> {
        let (count, dims): (usize, Vec<(usize, usize)>) = match &generators {
            Generators::SignedPerm(g) => (g.len(), g.iter().map(|p| (p.dim(), p.dim())).collect()),
            Generators::Dense(g) => (g.len(), g.iter().map(|p| (p.rows(), p.cols())).collect()),
        };
        if count < 2 {
            return Err(Error::MalformedSystem(format!("need at least 2 generators, got {count}")));
        }
        let n = dims[0].0;
        if n == 0 || n % 2 != 0 || dims.iter().any(|&(r, c)| r != n || c != n) {
            return Err(Error::MalformedSystem("generators must be square of one common even size".into()));
        }
        let sys = CliffordSystem { m: count - 1, l: n / 2, generators, provenance };
        if let Some(p) = provenance {
            if p.k * delta(sys.m)? != sys.l || p.flips > p.k {
                return Err(Error::MalformedSystem(format!(
                    "provenance k = {}, flips = {} is inconsistent with m = {}, l = {}",
                    p.k, p.flips, sys.m, sys.l
                )));
            }
        }
        Ok(sys)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn l(&self) -> usize {
        self.l
    }

    /// Ambient dimension `2l`.
    pub fn dim(&self) -> usize {
        2 * self.l
    }

    pub fn provenance(&self) -> Option<Provenance> {
        self.provenance
    }

    pub fn generators(&self) -> &Generators {
        &self.generators
    }

    pub fn is_exact(&self) -> bool {
        matches!(self.generators, Generators::SignedPerm(_))
    }

    pub fn generator_dense(&self, i: usize) -> DenseMatrix {
        match &self.generators {
            Generators::SignedPerm(g) => g[i].to_dense(),
            Generators::Dense(g) => g[i].clone(),
        }
    }

    /// `P_i x`.
    pub fn apply(&self, i: usize, x: &[f64]) -> Vec<f64> {
        match &self.generators {
            Generators::SignedPerm(g) => g[i].apply(x),
            Generators::Dense(g) => g[i].apply(x),
        }
    }

    /// `<P_i x, x>`.
    pub fn quadratic_form(&self, i: usize, x: &[f64]) -> f64 {
        match &self.generators {
            Generators::SignedPerm(g) => g[i].quadratic_form(x),
            Generators::Dense(g) => g[i].quadratic_form(x),
        }
    }

    /// `(sum_i c_i P_i) x` for span coordinates `c`.
    pub fn span_apply(&self, c: &[f64], x: &[f64]) -> Vec<f64> {
        assert_eq!(c.len(), self.m + 1, "span coordinates have length m + 1");
        let mut out = vec![0.0; x.len()];
        for (i, &ci) in c.iter().enumerate() {
            if ci == 0.0 {
                continue;
            }
            match &self.generators {
                Generators::SignedPerm(g) => g[i].apply_add(x, ci, &mut out),
                Generators::Dense(g) => {
                    for (o, y) in out.iter_mut().zip(g[i].apply(x)) {
                        *o += ci * y;
                    }
                }
            }
        }
        out
    }

    /// Dense matrix of `sum_i c_i P_i`.
    pub fn span_matrix(&self, c: &[f64]) -> DenseMatrix {
        assert_eq!(c.len(), self.m + 1, "span coordinates have length m + 1");
        (0..=self.m).fold(DenseMatrix::zeros(self.dim(), self.dim()), |acc, i| {
            acc.add_scaled(&self.generator_dense(i), c[i])
        })
    }

    fn dense_generators(&self) -> Vec<DenseMatrix> {
        (0..=self.m).map(|i| self.generator_dense(i)).collect()
    }
}

/// Largest entries of `P_i^T - P_i`, `P_i^2 - Id` and `P_i P_j + P_j P_i`.
pub fn verify_relations(c: &CliffordSystem, tol: f64) -> RelationCheck {
    let (mut symmetry, mut square, mut anticommutation) = (0.0f64, 0.0f64, 0.0f64);
    match &c.generators {
        Generators::SignedPerm(g) => {
            let id = SignedPermMatrix::identity(c.dim());
            for (i, p) in g.iter().enumerate() {
                symmetry = symmetry.max(f64::from(p.transpose().max_abs_sum(p, -1)));
                square = square.max(f64::from(p.mul(p).max_abs_sum(&id, -1)));
                for q in &g[i + 1..] {
                    anticommutation = anticommutation.max(f64::from(p.mul(q).max_abs_sum(&q.mul(p), 1)));
                }
            }
        }
        Generators::Dense(g) => {
            let id = DenseMatrix::identity(c.dim());
            let nm = crate::par::nan_max;
            for (i, p) in g.iter().enumerate() {
                symmetry = nm(symmetry, p.transpose().max_abs_diff(p));
                square = nm(square, p.matmul(p).max_abs_diff(&id));
                for q in &g[i + 1..] {
                    anticommutation = nm(anticommutation, p.matmul(q).add_scaled(&q.matmul(p), 1.0).max_abs());
                }
            }
        }
    }
    RelationCheck { symmetry, square, anticommutation, tol }
}

/// `|tr(P_0 P_1 ... P_m)| / (2 delta(m))`; equals `|k - 2j|` for built
/// systems with `m ≡ 0 (mod 4)` and vanishes otherwise.
pub fn trace_invariant(c: &CliffordSystem) -> f64 {
    let d = delta(c.m).expect("m >= 1 for every system") as f64;
    let trace = match &c.generators {
        Generators::SignedPerm(g) => g.iter().skip(1).fold(g[0].clone(), |acc, p| acc.mul(p)).trace() as f64,
        Generators::Dense(g) => g.iter().skip(1).fold(g[0].clone(), |acc, p| acc.matmul(p)).trace(),
    };
    trace.abs() / (2.0 * d)
}

/// `(m, k, kappa)` with `k = l / delta(m)` and `kappa` the rounded trace
/// invariant when `m ≡ 0 (mod 4)`.
pub fn equivalence_profile(c: &CliffordSystem) -> Result<EquivalenceProfile> {
    let d = delta(c.m)?;
    if !c.l.is_multiple_of(d) {
        return Err(Error::MalformedSystem(format!("l = {} is not a multiple of delta({}) = {d}", c.l, c.m)));
    }
    let k = c.l / d;
    let kappa = c.m.is_multiple_of(4).then(|| trace_invariant(c).round() as usize);
    Ok(EquivalenceProfile { m: c.m, k, kappa })
}

/// `A^T P_i A` for an orthogonal `A`; the result is dense.
pub fn conjugate_system(c: &CliffordSystem, a: &DenseMatrix) -> Result<CliffordSystem> {
    if a.rows() != c.dim() || a.cols() != c.dim() {
        return Err(Error::DimensionMismatch { expected: c.dim(), actual: a.rows() });
    }
    let defect = a.orthogonality_defect();
    if defect.is_nan() || defect > 1e-12 {
        return Err(Error::NotOrthogonal(defect));
    }
    let at = a.transpose();
    let gens = c.dense_generators().iter().map(|p| at.matmul(&p.matmul(a))).collect();
    CliffordSystem::from_dense(gens, c.provenance)
}

/// The subfamily `(P_{i_0}, P_{i_1}, ...)` for strictly increasing indices.
///
/// At least two generators must be kept, since a single involution carries no
/// Clifford structure of rank `>= 2`.
pub fn sub_system(c: &CliffordSystem, indices: &[usize]) -> Result<CliffordSystem> {
    if indices.len() < 2 {
        return Err(Error::InvalidParameter(format!(
            "a sub-system needs at least 2 generators, got {}",
            indices.len()
        )));
    }
    if indices.windows(2).any(|w| w[0] >= w[1]) || indices.iter().any(|&i| i > c.m) {
        return Err(Error::InvalidParameter(format!(
            "indices must be strictly increasing within 0..={}, got {indices:?}",
            c.m
        )));
    }
    let provenance = if indices.len() == c.m + 1 { c.provenance } else { None };
    let generators = match &c.generators {
        Generators::SignedPerm(g) => Generators::SignedPerm(indices.iter().map(|&i| g[i].clone()).collect()),
        Generators::Dense(g) => Generators::Dense(indices.iter().map(|&i| g[i].clone()).collect()),
    };
    CliffordSystem::assemble(generators, provenance)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn delta_table() {
        let expected = [1, 2, 4, 4, 8, 8, 8, 8, 16, 32, 64, 64, 128, 128, 128, 128];
        for (m, &d) in (1..=16).zip(&expected) {
            assert_eq!(delta(m).unwrap(), d, "delta({m})");
        }
        assert!(delta(0).is_err());
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(matches!(build_system(1, 1, 0), Err(Error::Degenerate(_))));
        assert!(build_system(0, 2, 0).is_err());
        assert!(build_system(2, 0, 0).is_err());
        assert!(build_system(2, 2, 3).is_err());
        assert!(build_system(12, 4, 0).is_ok());
        assert!(matches!(build_system(13, 3, 0), Err(Error::DimensionCap { .. })));
    }

    #[test]
    fn m1_k2_block_layout() {
        let c = build_system(1, 2, 0).unwrap();
        assert_eq!((c.m(), c.l(), c.dim()), (1, 2, 4));
        let x = [1.0, 2.0, 3.0, 4.0];
        assert_eq!(c.apply(0, &x), vec![1.0, 2.0, -3.0, -4.0]);
        assert_eq!(c.apply(1, &x), vec![3.0, 4.0, 1.0, 2.0]);
    }

    #[test]
    fn flips_negate_trailing_blocks() {
        let c = build_system(2, 2, 1).unwrap();
        let x: Vec<f64> = (1..=8).map(f64::from).collect();
        assert_eq!(c.apply(0, &x), vec![1.0, 2.0, -3.0, -4.0, -5.0, -6.0, 7.0, 8.0]);
    }

    #[test]
    fn m4_irreducible_product_is_plus_minus_identity() {
        let Generators::SignedPerm(g) = build_system(4, 1, 0).unwrap().generators().clone() else {
            panic!("built systems are exact")
        };
        let prod = g.iter().skip(1).fold(g[0].clone(), |acc, p| acc.mul(p));
        let id = SignedPermMatrix::identity(8);
        assert!(prod == id || prod == id.neg());
    }

    #[test]
    fn sub_system_rules() {
        let c = build_system(2, 1, 0).unwrap();
        let s = sub_system(&c, &[0, 1]).unwrap();
        assert_eq!((s.m(), s.l()), (1, 2));
        assert_eq!(equivalence_profile(&s).unwrap(), EquivalenceProfile { m: 1, k: 2, kappa: None });
        assert_eq!(sub_system(&c, &[0, 1, 2]).unwrap(), c);
        assert!(sub_system(&c, &[1]).is_err());
        assert!(sub_system(&c, &[1, 0]).is_err());
        assert!(sub_system(&c, &[0, 3]).is_err());
    }

    #[test]
    fn conjugation_by_p0() {
        let c = build_system(3, 1, 0).unwrap();
        let p0 = c.generator_dense(0);
        let conj = conjugate_system(&c, &p0).unwrap();
        assert_eq!(conj.generator_dense(0), p0);
        for i in 1..=3 {
            assert_eq!(conj.generator_dense(i), c.generator_dense(i).scale(-1.0));
        }
        let mut skewed = DenseMatrix::identity(8);
        skewed[(0, 1)] = 1e-6;
        assert!(matches!(conjugate_system(&c, &skewed), Err(Error::NotOrthogonal(_))));
    }

    #[test]
    fn malformed_inputs_rejected() {
        let mut g: Vec<DenseMatrix> = (0..2).map(|i| build_system(1, 2, 0).unwrap().generator_dense(i)).collect();
        g[1][(0, 0)] = 0.5;
        assert!(matches!(CliffordSystem::from_dense(g, None), Err(Error::MalformedSystem(_))));
        let p = build_system(2, 1, 0).unwrap().generator_dense(0);
        assert!(CliffordSystem::from_dense(vec![p], None).is_err());
    }
}
