use crate::algebra::{angle_between, jacobi_svd, modified_gram_schmidt, DenseMatrix, Sampler};

fn as_matrix(p: &[f64]) -> DenseMatrix {
    DenseMatrix::from_row_major(3, 3, p.to_vec()).expect("tensor invariants take 9 finite entries")
}

/// Signed ordered singular values `(σ_1, σ_2, ±σ_3)` of the row-major 3×3
/// matrix `p`: `σ_1 >= σ_2 >= σ_3 >= 0`, with the sign of `det p` carried by
/// the smallest one. Constant on `SO(3) × SO(3)` orbits `p |-> U p V^T`.
pub fn signed_singular_values(p: &[f64]) -> [f64; 3] {
    let m = as_matrix(p);
    let s = jacobi_svd(&m).s;
    let sign = if m.det() < 0.0 { -1.0 } else { 1.0 };
    [s[0], s[1], sign * s[2]]
}

/// Spherical distance between the `SO(3) × SO(3)` orbits of two unit 3×3
/// matrices: the angle between their signed singular-value triples.
pub fn tensor_orbit_distance(a: &[f64], b: &[f64]) -> f64 {
    angle_between(&signed_singular_values(a), &signed_singular_values(b))
}

/// Haar-random rotation of `R^3` (Gram–Schmidt on a Gaussian matrix, then
/// one column flipped if needed to land in `SO(3)`).
pub fn random_rotation(rng: &mut Sampler) -> DenseMatrix {
    loop {
        let cols = modified_gram_schmidt(&[rng.gaussian_vec(3), rng.gaussian_vec(3), rng.gaussian_vec(3)], 1e-8);
        if cols.len() < 3 {
            continue;
        }
        let mut q = DenseMatrix::from_columns(&cols);
        if q.det() < 0.0 {
            for r in 0..3 {
                q[(r, 2)] = -q[(r, 2)];
            }
        }
        return q;
    }
}

/// `U p V^T` for a row-major 3×3 `p`, i.e. `(U ⊗ V) vec(p)`.
pub fn act_rotations(u: &DenseMatrix, v: &DenseMatrix, p: &[f64]) -> Vec<f64> {
    u.matmul(&as_matrix(p)).matmul(&v.transpose()).as_slice().to_vec()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_over_root_three() {
        let s = 1.0 / 3f64.sqrt();
        let id = [s, 0.0, 0.0, 0.0, s, 0.0, 0.0, 0.0, s];
        for t in signed_singular_values(&id) {
            assert!((t - s).abs() < 1e-15);
        }
    }

    #[test]
    fn reflection_sign_goes_to_smallest_value() {
        let p = [0.0, 0.0, -0.2, 0.0, 0.5, 0.0, 0.8, 0.0, 0.0];
        let t = signed_singular_values(&p);
        assert!((t[0] - 0.8).abs() < 1e-15 && (t[1] - 0.5).abs() < 1e-15);
        assert!((t[2] - 0.2).abs() < 1e-15, "det is +0.08, got {t:?}");
        let q = [0.0, 0.0, 0.2, 0.0, 0.5, 0.0, 0.8, 0.0, 0.0];
        assert!((signed_singular_values(&q)[2] + 0.2).abs() < 1e-15);
    }

    #[test]
    fn rotations_are_special_orthogonal() {
        let mut rng = Sampler::new(3);
        for _ in 0..20 {
            let r = random_rotation(&mut rng);
            assert!(r.orthogonality_defect() < 1e-14);
            assert!((r.det() - 1.0).abs() < 1e-14);
        }
    }
}
