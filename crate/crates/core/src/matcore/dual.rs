use super::eig::jacobi_sorted;
use super::mat::{CMat, CVec, C64, ONE, ZERO};
use crate::error::{Error, Result};

/// Smallest acceptable reciprocal condition number of the Gram matrix.
pub const GRAM_RCOND_MIN: f64 = 1e-12;

/// A linearly independent family and its dual: ⟨dual_i|primal_j⟩ = δ_ij.
#[derive(Clone, Debug)]
pub struct DualBasis<const N: usize> {
    pub primal: Vec<CVec<N>>,
    pub dual: Vec<CVec<N>>,
}

impl<const N: usize> DualBasis<N> {
    pub fn len(&self) -> usize {
        self.primal.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primal.is_empty()
    }

    /// max_ij |⟨dual_i|primal_j⟩ − δ_ij|
    pub fn biorthogonality_residual(&self) -> f64 {
        let mut worst = 0.0f64;
        for (i, d) in self.dual.iter().enumerate() {
            for (j, p) in self.primal.iter().enumerate() {
                let target = if i == j { ONE } else { ZERO };
                worst = worst.max((d.dot(p) - target).norm());
            }
        }
        worst
    }

    /// Σ_i |primal_i⟩⟨dual_i|, the orthogonal projector onto the span.
    pub fn span_projector(&self) -> CMat<N> {
        self.primal
            .iter()
            .zip(&self.dual)
            .fold(CMat::zeros(), |acc, (p, d)| acc + p.outer(d))
    }

    /// Σ_i |dual_i⟩⟨primal_i|; equals the span projector as well.
    pub fn dual_projector(&self) -> CMat<N> {
        self.primal
            .iter()
            .zip(&self.dual)
            .fold(CMat::zeros(), |acc, (p, d)| acc + d.outer(p))
    }

    /// M = Σ a_ij |primal_i⟩⟨primal_j|
    pub fn expand(&self, coeffs: &[Vec<C64>]) -> CMat<N> {
        expand_in(&self.primal, coeffs)
    }
}

fn expand_in<const N: usize>(vs: &[CVec<N>], coeffs: &[Vec<C64>]) -> CMat<N> {
    let mut m = CMat::zeros();
    for (i, vi) in vs.iter().enumerate() {
        for (j, vj) in vs.iter().enumerate() {
            m += vi.outer(vj).scale(coeffs[i][j]);
        }
    }
    m
}

/// Dual vectors of a linearly independent family.
///
/// Equivalent to |φ̂_i⟩ = Σ_k (G⁻¹)_ki |φ_k⟩ with G_ij = ⟨φ_i|φ_j⟩; the Gram
/// matrix is used only for the conditioning guard.
pub fn dual_basis<const N: usize>(vectors: &[CVec<N>]) -> Result<DualBasis<N>> {
    let k = vectors.len();
    if k == 0 || k > N {
        return Err(Error::DimensionMismatch {
            expected: N,
            found: k,
        });
    }
    if vectors.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite);
    }
    let gram: Vec<C64> = (0..k * k)
        .map(|idx| vectors[idx / k].dot(&vectors[idx % k]))
        .collect();
    let (vals, _) = jacobi_sorted(gram, k);
    let rcond = if vals[0] > 0.0 {
        vals[k - 1] / vals[0]
    } else {
        0.0
    };
    if rcond < GRAM_RCOND_MIN {
        return Err(Error::DependentVectors { rcond });
    }
    // Φ = QR by Gram–Schmidt with one reorthogonalization pass; then
    // |φ̂_i⟩ = Σ_m (R⁻¹)*_im |q_m⟩. Error grows with cond(Φ), not cond(Φ)².
    let mut q: Vec<CVec<N>> = Vec::with_capacity(k);
    let mut r = vec![vec![ZERO; k]; k];
    for (j, v) in vectors.iter().enumerate() {
        let mut w = *v;
        for _pass in 0..2 {
            for (m, qm) in q.iter().enumerate() {
                let c = qm.dot(&w);
                r[m][j] += c;
                w = w - qm.scale(c);
            }
        }
        let n = w.norm();
        r[j][j] = C64::new(n, 0.0);
        q.push(w.scale_re(1.0 / n));
    }
    // R⁻¹ by back substitution, column by column.
    let mut rinv = vec![vec![ZERO; k]; k];
    for col in 0..k {
        for i in (0..=col).rev() {
            let mut s = if i == col { ONE } else { ZERO };
            for m in i + 1..=col {
                s -= r[i][m] * rinv[m][col];
            }
            rinv[i][col] = s / r[i][i];
        }
    }
    let dual = (0..k)
        .map(|i| (0..k).fold(CVec::zeros(), |acc, m| acc + q[m].scale(rinv[i][m].conj())))
        .collect();
    Ok(DualBasis {
        primal: vectors.to_vec(),
        dual,
    })
}

/// Inverse of a small dense complex matrix by Gauss–Jordan elimination with
/// partial pivoting.
pub fn invert_small(a: &[Vec<C64>]) -> Result<Vec<Vec<C64>>> {
    let n = a.len();
    if a.iter().any(|r| r.len() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: a[0].len(),
        });
    }
    let scale = a.iter().flatten().fold(0.0f64, |m, c| m.max(c.norm()));
    if scale == 0.0 || !scale.is_finite() {
        return Err(Error::SingularCoefficients);
    }
    let mut m: Vec<Vec<C64>> = a.to_vec();
    let mut inv: Vec<Vec<C64>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { ONE } else { ZERO }).collect())
        .collect();
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| m[i][col].norm().total_cmp(&m[j][col].norm()))
            .unwrap();
        if m[piv][col].norm() <= 1e-14 * scale {
            return Err(Error::SingularCoefficients);
        }
        m.swap(col, piv);
        inv.swap(col, piv);
        let p = m[col][col];
        for j in 0..n {
            m[col][j] /= p;
            inv[col][j] /= p;
        }
        for i in 0..n {
            if i != col {
                let f = m[i][col];
                if f != ZERO {
                    for j in 0..n {
                        let (mc, ic) = (m[col][j], inv[col][j]);
                        m[i][j] -= f * mc;
                        inv[i][j] -= f * ic;
                    }
                }
            }
        }
    }
    Ok(inv)
}

/// M⁻¹ on span(primal) expanded in the dual basis.
#[derive(Clone, Debug)]
pub struct RestrictedInverse<const N: usize> {
    /// b = A⁻¹
    pub coeffs: Vec<Vec<C64>>,
    /// Σ b_ij |dual_i⟩⟨dual_j|
    pub operator: CMat<N>,
}

/// Inverse of M = Σ a_ij|φ_i⟩⟨φ_j| restricted to the span of the φ's:
/// M⁻¹ = Σ b_ij |φ̂_i⟩⟨φ̂_j| with b = a⁻¹.
pub fn restricted_inverse<const N: usize>(
    coeffs: &[Vec<C64>],
    basis: &DualBasis<N>,
) -> Result<RestrictedInverse<N>> {
    if coeffs.len() != basis.len() {
        return Err(Error::DimensionMismatch {
            expected: basis.len(),
            found: coeffs.len(),
        });
    }
    let b = invert_small(coeffs)?;
    let operator = expand_in(&basis.dual, &b);
    Ok(RestrictedInverse {
        coeffs: b,
        operator,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::mat::{CVec2, CVec4, I};
    use proptest::prelude::*;

    fn vec4(e: &[f64]) -> CVec4 {
        CVec4::from_fn(|i| C64::new(e[i], e[4 + i]))
    }

    #[test]
    fn orthonormal_pair_is_self_dual() {
        let a = CVec4::basis(0);
        let b = CVec([ZERO, I, ZERO, ZERO]);
        let d = dual_basis(&[a, b]).unwrap();
        assert!((d.dual[0] - a).max_abs() < 1e-15);
        assert!((d.dual[1] - b).max_abs() < 1e-15);
    }

    #[test]
    fn skewed_pair_in_2d() {
        let d = dual_basis(&[CVec2::from_real([1.0, 0.0]), CVec2::from_real([1.0, 1.0])]).unwrap();
        assert!((d.dual[0] - CVec2::from_real([1.0, -1.0])).max_abs() < 1e-14);
        assert!((d.dual[1] - CVec2::from_real([0.0, 1.0])).max_abs() < 1e-14);
    }

    #[test]
    fn dependent_vectors_rejected() {
        let a = CVec4::from_real([1.0, 2.0, 0.0, 1.0]);
        let err = dual_basis(&[a, a.scale(I)]).unwrap_err();
        assert!(matches!(err, Error::DependentVectors { .. }));
    }

    #[test]
    fn identity_coefficients_on_orthonormal_basis() {
        let basis = dual_basis(&[CVec4::basis(1), CVec4::basis(3)]).unwrap();
        let a = vec![vec![ONE, ZERO], vec![ZERO, ONE]];
        let inv = restricted_inverse(&a, &basis).unwrap();
        assert!(inv.operator.dist(&basis.expand(&a)) < 1e-15);
        assert!(inv.operator.dist(&basis.span_projector()) < 1e-15);
    }

    #[test]
    fn singular_coefficients_rejected() {
        let basis = dual_basis(&[CVec4::basis(0), CVec4::basis(1)]).unwrap();
        let a = vec![vec![ONE, ONE], vec![ONE, ONE]];
        assert!(matches!(
            restricted_inverse(&a, &basis),
            Err(Error::SingularCoefficients)
        ));
    }

    #[test]
    fn two_term_inverse_matches_dual_expansion() {
        // ρ_α = Λ|z⟩⟨z| + (1−λ)|x⟩⟨x|  ⇒  ρ_α⁻¹ = Λ⁻¹|ẑ⟩⟨ẑ| + (1−λ)⁻¹|x̂⟩⟨x̂|
        let z = CVec4::from_real([1.0, 0.0, 0.5, 0.0]).normalized().unwrap();
        let x = CVec([ONE, I, ZERO, ONE]).normalized().unwrap();
        let (big_l, w) = (0.3, 0.25);
        let basis = dual_basis(&[z, x]).unwrap();
        let a = vec![
            vec![C64::new(big_l, 0.0), ZERO],
            vec![ZERO, C64::new(w, 0.0)],
        ];
        let inv = restricted_inverse(&a, &basis).unwrap();
        let expected = basis.dual[0].projector().scale_re(1.0 / big_l)
            + basis.dual[1].projector().scale_re(1.0 / w);
        assert!(inv.operator.dist(&expected) < 1e-13);
        // and it really is the inverse on the span
        let m = basis.expand(&a);
        assert!((m * inv.operator).dist(&basis.span_projector()) < 1e-13);
    }

    #[test]
    fn gauss_jordan_inverse() {
        let a = vec![
            vec![C64::new(2.0, 1.0), C64::new(0.0, 1.0)],
            vec![C64::new(1.0, 0.0), C64::new(3.0, -1.0)],
        ];
        let b = invert_small(&a).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                let s: C64 = (0..2).map(|k| a[i][k] * b[k][j]).sum();
                let t = if i == j { ONE } else { ZERO };
                assert!((s - t).norm() < 1e-15);
            }
        }
    }

    proptest! {
        #[test]
        fn random_triple_is_biorthogonal(e in prop::collection::vec(-1.0f64..1.0, 24)) {
            let vs = [vec4(&e[0..8]), vec4(&e[8..16]), vec4(&e[16..24])];
            let d = dual_basis(&vs);
            prop_assume!(d.as_ref().is_ok_and(|d| d.dual.iter().all(|v| v.norm() < 1e3)));
            let d = d.unwrap();
            prop_assert!(d.biorthogonality_residual() <= 1e-10);
            prop_assert!(d.span_projector().dist(&d.dual_projector()) <= 1e-10);
        }

        #[test]
        fn random_diagonal_inverse(e in prop::collection::vec(-1.0f64..1.0, 24), w in prop::collection::vec(0.05f64..1.0, 3)) {
            let vs = [vec4(&e[0..8]), vec4(&e[8..16]), vec4(&e[16..24])];
            let d = dual_basis(&vs);
            prop_assume!(d.as_ref().is_ok_and(|d| d.dual.iter().all(|v| v.norm() < 1e3)));
            let d = d.unwrap();
            let a: Vec<Vec<C64>> = (0..3)
                .map(|i| (0..3).map(|j| if i == j { C64::new(w[i], 0.0) } else { ZERO }).collect())
                .collect();
            let inv = restricted_inverse(&a, &d).unwrap();
            prop_assert!((d.expand(&a) * inv.operator).dist(&d.span_projector()) <= 1e-9);
        }
    }
}
