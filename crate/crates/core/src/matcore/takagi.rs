use super::canon::{cmp_keys_desc, complete_orthonormal, mix, phase_key, real_echelon};
use super::eig::jacobi_sorted;
use super::mat::{CMat, CVec, C64, ZERO};
use crate::error::{Error, Result};

pub const SYMMETRIC_TOL: f64 = 1e-10;
/// Relative gap below which two Takagi values are treated as equal.
pub const DEGENERACY_TOL: f64 = 1e-11;

/// U·τ·Uᵀ = diag(λ) with U unitary and λ descending, non-negative.
#[derive(Clone, Debug)]
pub struct TakagiFactorization<const N: usize> {
    pub u: CMat<N>,
    pub lambdas: [f64; N],
}

impl<const N: usize> TakagiFactorization<N> {
    /// ‖U·τ·Uᵀ − diag(λ)‖_max
    pub fn residual(&self, tau: &CMat<N>) -> f64 {
        (self.u * *tau * self.u.transpose()).dist(&CMat::diag_real(self.lambdas))
    }

    /// Takagi vectors v_k = (row k of U)†, satisfying τ·v_k* = λ_k v_k.
    pub fn vectors(&self) -> [CVec<N>; N] {
        std::array::from_fn(|k| self.u.row(k).conj())
    }
}

/// Groups of consecutive indices whose values agree within `DEGENERACY_TOL`
/// relative to the largest value. Assumes `values` descending.
pub(crate) fn degenerate_groups(values: &[f64]) -> Vec<std::ops::Range<usize>> {
    let scale = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let tol = DEGENERACY_TOL * scale.max(1e-300);
    let mut groups = Vec::new();
    let mut start = 0;
    for k in 1..=values.len() {
        if k == values.len() || (values[k - 1] - values[k]).abs() > tol {
            groups.push(start..k);
            start = k;
        }
    }
    groups
}

/// Takagi (Autonne) factorization of a complex symmetric matrix.
///
/// Works on the real symmetric embedding M = [[Re τ, Im τ], [Im τ, −Re τ]]:
/// an eigenvector [x; y] of M with eigenvalue σ gives v = x + iy with
/// τ·v* = σ·v. The top half of M's spectrum carries the Takagi values.
pub fn takagi<const N: usize>(tau: &CMat<N>) -> Result<TakagiFactorization<N>> {
    if !tau.is_finite() {
        return Err(Error::NonFinite);
    }
    let residual = tau.symmetric_residual();
    if residual > SYMMETRIC_TOL * tau.max_abs().max(1.0) {
        return Err(Error::NotSymmetric { residual });
    }
    let tau = (*tau + tau.transpose()).scale_re(0.5);

    let n2 = 2 * N;
    let mut m = vec![ZERO; n2 * n2];
    for i in 0..N {
        for j in 0..N {
            let t = tau[(i, j)];
            m[i * n2 + j] = C64::new(t.re, 0.0);
            m[i * n2 + j + N] = C64::new(t.im, 0.0);
            m[(i + N) * n2 + j] = C64::new(t.im, 0.0);
            m[(i + N) * n2 + j + N] = C64::new(-t.re, 0.0);
        }
    }
    let (_, vecs) = jacobi_sorted(m, n2);

    // Walk the embedding spectrum from the top; each complex direction shows
    // up twice (as v and i·v), so keep only complex-independent vectors.
    let candidates: Vec<CVec<N>> = vecs
        .iter()
        .map(|e| CVec::from_fn(|i| C64::new(e[i].re, e[i + N].re)))
        .collect();
    let basis = complete_orthonormal(&candidates);

    let mut vs: Vec<CVec<N>> = Vec::with_capacity(N);
    let mut lambdas: Vec<f64> = Vec::with_capacity(N);
    for v in &basis {
        // D_kk = v†·τ·v*; a phase e^{iα} on v turns it into e^{−2iα}·D_kk.
        let d = v.dot(&tau.mul_vec(&v.conj()));
        let alpha = if d.norm() > 0.0 { d.arg() / 2.0 } else { 0.0 };
        vs.push(v.scale(C64::from_polar(1.0, alpha)));
        lambdas.push(d.norm());
    }

    let mut order: Vec<usize> = (0..N).collect();
    order.sort_by(|&a, &b| lambdas[b].total_cmp(&lambdas[a]));
    let mut vs: Vec<CVec<N>> = order.iter().map(|&k| vs[k]).collect();
    let lambdas: Vec<f64> = order.iter().map(|&k| lambdas[k]).collect();

    for g in degenerate_groups(&lambdas) {
        if g.len() < 2 {
            continue;
        }
        let block = canonical_block(&vs[g.clone()]);
        vs[g].copy_from_slice(&block);
    }

    let u = CMat::from_fn(|k, j| vs[k][j].conj());
    Ok(TakagiFactorization {
        u,
        lambdas: std::array::from_fn(|k| lambdas[k]),
    })
}

/// Real-orthogonal echelon representative of a degenerate block, ordered by
/// descending phase-normalized lexicographic key.
pub(crate) fn canonical_block<const N: usize>(vs: &[CVec<N>]) -> Vec<CVec<N>> {
    let h = real_echelon(vs);
    let mut out = mix(&h, vs);
    out.sort_by(|a, b| cmp_keys_desc(&phase_key(a), &phase_key(b)));
    out
}
