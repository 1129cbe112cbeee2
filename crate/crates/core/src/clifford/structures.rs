use crate::algebra::{left_mult_signed_perm, quat_left_mult_signed_perm, Quaternion, SignedPermMatrix};
use crate::{delta, Error, Result};

/// `n` pairwise anticommuting complex structures on `R^N`.
///
/// Every structure is skew, squares to `-Id` and is an exact signed
/// permutation. `N` must be a multiple of the minimal dimension
/// `delta(n + 1)`; multiples are realized as `Id_c ⊗ J`.
pub fn build_complex_structures(n: usize, target_dim: usize) -> Result<Vec<SignedPermMatrix>> {
    let minimal = delta(n + 1)?;
    if target_dim == 0 || !target_dim.is_multiple_of(minimal) {
        return Err(Error::InvalidParameter(format!(
            "{n} anticommuting complex structures need a dimension divisible by {minimal}, got {target_dim}"
        )));
    }
    let copies = SignedPermMatrix::identity(target_dim / minimal);
    Ok(minimal_structures(n).iter().map(|j| copies.kron(j)).collect())
}

fn minimal_structures(n: usize) -> Vec<SignedPermMatrix> {
    match n {
        0 => Vec::new(),
        1 => vec![SignedPermMatrix::new(vec![1, 0], vec![1, -1]).expect("rotation generator")],
        2 | 3 => [Quaternion::I, Quaternion::J, Quaternion::K][..n]
            .iter()
            .map(|&q| quat_left_mult_signed_perm(q))
            .collect(),
        4..=7 => (1..=n).map(|r| left_mult_signed_perm(r).expect("basis index in range")).collect(),
        8 => {
            let id = SignedPermMatrix::identity(8);
            let mut out: Vec<SignedPermMatrix> = minimal_structures(7)
                .iter()
                .map(|j| SignedPermMatrix::direct_sum(&[j.clone(), j.neg()]))
                .collect();
            out.push(SignedPermMatrix::block2(None, Some(&id.neg()), Some(&id), None).expect("swap block"));
            out
        }
        _ => {
            let eight = minimal_structures(8);
            let omega = eight.iter().skip(1).fold(eight[0].clone(), |acc, a| acc.mul(a));
            let rest = minimal_structures(n - 8);
            let rest_dim = delta(n - 7).expect("n - 7 >= 2");
            let id_rest = SignedPermMatrix::identity(rest_dim);
            eight
                .iter()
                .map(|a| a.kron(&id_rest))
                .chain(rest.iter().map(|k| omega.kron(k)))
                .collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(js: &[SignedPermMatrix]) {
        let neg_id = SignedPermMatrix::identity(js.first().map_or(1, |j| j.dim())).neg();
        for (r, a) in js.iter().enumerate() {
            assert_eq!(a.transpose(), a.neg(), "J_{r} not skew");
            assert_eq!(a.mul(a), neg_id, "J_{r}^2 != -Id");
            for b in &js[r + 1..] {
                assert_eq!(a.mul(b), b.mul(a).neg());
            }
        }
    }

    #[test]
    fn minimal_dimensions_and_relations() {
        for n in 0..=17 {
            let dim = delta(n + 1).unwrap();
            let js = build_complex_structures(n, dim).unwrap();
            assert_eq!(js.len(), n);
            assert!(js.iter().all(|j| j.dim() == dim));
            check(&js);
        }
    }

    #[test]
    fn multiples_and_rejections() {
        let js = build_complex_structures(3, 12).unwrap();
        assert_eq!(js[0].dim(), 12);
        check(&js);
        assert!(build_complex_structures(3, 6).is_err());
        assert!(build_complex_structures(8, 8).is_err());
    }

    #[test]
    fn rotation_generator() {
        let j = &build_complex_structures(1, 2).unwrap()[0];
        assert_eq!(j.apply(&[1.0, 0.0]), vec![0.0, 1.0]);
    }
}
