use super::mat::{CMat, CVec, C64, ONE, ZERO};
use crate::error::{Error, Result};

/// Hermiticity tolerance on ‖h − h†‖_max.
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Eigenvalues in [−PSD_TOL, 0) are clamped to zero.
pub const PSD_TOL: f64 = 1e-10;

const JACOBI_EPS: f64 = 1e-14;
const MAX_SWEEPS: usize = 100;

/// Cyclic complex Jacobi on a row-major `n×n` Hermitian matrix.
///
/// Returns the (unsorted) diagonal and the accumulated rotation `V`
/// (row-major, eigenvectors in columns) with A = V·diag·V†.
pub(crate) fn jacobi(mut a: Vec<C64>, n: usize) -> (Vec<f64>, Vec<C64>) {
    debug_assert_eq!(a.len(), n * n);
    let mut v = vec![ZERO; n * n];
    for i in 0..n {
        v[i * n + i] = ONE;
    }
    let total: f64 = a.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    if total == 0.0 {
        return (vec![0.0; n], v);
    }

    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i * n + j].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off < JACOBI_EPS * total {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                let mag = apq.norm();
                if mag == 0.0 {
                    continue;
                }
                let app = a[p * n + p].re;
                let aqq = a[q * n + q].re;
                let w = apq.conj() / mag;
                let tau = (aqq - app) / (2.0 * mag);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // G acts on the (p, q) plane:
                //   G_pp = c, G_pq = s, G_qp = −s·w, G_qq = c·w
                let g_pp = C64::new(c, 0.0);
                let g_pq = C64::new(s, 0.0);
                let g_qp = -w * s;
                let g_qq = w * c;

                // A ← A·G (columns p, q)
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = akp * g_pp + akq * g_qp;
                    a[k * n + q] = akp * g_pq + akq * g_qq;
                }
                // A ← G†·A (rows p, q)
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = g_pp.conj() * apk + g_qp.conj() * aqk;
                    a[q * n + k] = g_pq.conj() * apk + g_qq.conj() * aqk;
                }
                a[p * n + q] = ZERO;
                a[q * n + p] = ZERO;
                a[p * n + p].im = 0.0;
                a[q * n + q].im = 0.0;
                // V ← V·G
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = vkp * g_pp + vkq * g_qp;
                    v[k * n + q] = vkp * g_pq + vkq * g_qq;
                }
            }
        }
    }
    ((0..n).map(|i| a[i * n + i].re).collect(), v)
}

/// Hermitian eigenpairs sorted by descending eigenvalue.
pub(crate) fn jacobi_sorted(a: Vec<C64>, n: usize) -> (Vec<f64>, Vec<Vec<C64>>) {
    let (vals, v) = jacobi(a, n);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| vals[j].total_cmp(&vals[i]));
    let values = order.iter().map(|&k| vals[k]).collect();
    let vectors = order
        .iter()
        .map(|&k| (0..n).map(|i| v[i * n + k]).collect())
        .collect();
    (values, vectors)
}

/// Spectral decomposition h = Σ e_k |u_k⟩⟨u_k| with e descending.
#[derive(Clone, Debug)]
pub struct HermEig<const N: usize> {
    pub values: [f64; N],
    pub vectors: [CVec<N>; N],
}

impl<const N: usize> HermEig<N> {
    pub fn reconstruct(&self) -> CMat<N> {
        (0..N).fold(CMat::zeros(), |acc, k| {
            acc + self.vectors[k].projector().scale_re(self.values[k])
        })
    }

    pub fn min_value(&self) -> f64 {
        self.values[N - 1]
    }
}

/// Eigen-decomposition of a Hermitian matrix by cyclic Jacobi rotations.
pub fn herm_eig<const N: usize>(h: &CMat<N>) -> Result<HermEig<N>> {
    if !h.is_finite() {
        return Err(Error::NonFinite);
    }
    let residual = h.hermitian_residual();
    if residual > HERMITIAN_TOL * h.max_abs().max(1.0) {
        return Err(Error::NotHermitian { residual });
    }
    Ok(herm_eig_unchecked(&h.hermitian_part()))
}

pub(crate) fn herm_eig_unchecked<const N: usize>(h: &CMat<N>) -> HermEig<N> {
    let flat = h.0.iter().flatten().copied().collect();
    let (vals, vecs) = jacobi_sorted(flat, N);
    HermEig {
        values: std::array::from_fn(|k| vals[k]),
        vectors: std::array::from_fn(|k| CVec::from_fn(|i| vecs[k][i])),
    }
}

/// Principal square root of a positive semidefinite matrix.
pub fn psd_sqrt<const N: usize>(p: &CMat<N>) -> Result<CMat<N>> {
    let eig = herm_eig(p)?;
    let min = eig.min_value();
    if min < -PSD_TOL {
        return Err(Error::NotPSD {
            min_eigenvalue: min,
        });
    }
    Ok((0..N).fold(CMat::zeros(), |acc, k| {
        acc + eig.vectors[k]
            .projector()
            .scale_re(eig.values[k].max(0.0).sqrt())
    }))
}

/// Moore–Penrose inverse of a Hermitian matrix; eigenvalues with
/// |e| ≤ rel_cut·max|e| are treated as zero. Also returns the rank kept.
pub fn hermitian_pinv<const N: usize>(h: &CMat<N>, rel_cut: f64) -> Result<(CMat<N>, usize)> {
    let eig = herm_eig(h)?;
    let scale = eig.values.iter().fold(0.0f64, |m, e| m.max(e.abs()));
    let mut rank = 0;
    let mut out = CMat::zeros();
    for k in 0..N {
        if eig.values[k].abs() > rel_cut * scale && scale > 0.0 {
            rank += 1;
            out += eig.vectors[k].projector().scale_re(1.0 / eig.values[k]);
        }
    }
    Ok((out, rank))
}

/// Pseudo-inverse keeping exactly the `rank` largest eigenvalues, for
/// operators whose rank is known from construction.
pub fn hermitian_pinv_rank<const N: usize>(h: &CMat<N>, rank: usize) -> Result<CMat<N>> {
    let eig = herm_eig(h)?;
    Ok((0..rank.min(N)).fold(CMat::zeros(), |acc, k| {
        acc + eig.vectors[k].projector().scale_re(1.0 / eig.values[k])
    }))
}
