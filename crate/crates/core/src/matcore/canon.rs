//! Deterministic representatives for degenerate subspaces.

use std::cmp::Ordering;

use super::mat::{CVec, C64};

const KEY_TOL: f64 = 1e-9;

/// Real orthogonal `m×m` matrix `H` such that the rows of `H·A` are in
/// row-echelon form with positive pivots, where row `k` of `A` is `vs[k]`
/// flattened as (Re v₀, Im v₀, Re v₁, …) ∈ R^{2N}.
///
/// Because `H` is real, it preserves any relation of the form
/// `F(v) = σ v` for an antilinear `F` shared by the whole group.
pub fn real_echelon<const N: usize>(vs: &[CVec<N>]) -> Vec<Vec<f64>> {
    let m = vs.len();
    let cols = 2 * N;
    let mut a: Vec<Vec<f64>> = vs
        .iter()
        .map(|v| v.0.iter().flat_map(|c| [c.re, c.im]).collect())
        .collect();
    let mut h: Vec<Vec<f64>> = (0..m)
        .map(|i| (0..m).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    let scale = a
        .iter()
        .map(|r| r.iter().map(|x| x * x).sum::<f64>().sqrt())
        .fold(0.0f64, f64::max);
    let tol = 1e-8 * scale;

    let mut r = 0;
    for j in 0..cols {
        if r >= m {
            break;
        }
        let norm = (r..m).map(|i| a[i][j] * a[i][j]).sum::<f64>().sqrt();
        if norm <= tol {
            continue;
        }
        // Householder reflector on rows r..m sending column j to a multiple of e_r.
        let alpha = if a[r][j] >= 0.0 { -norm } else { norm };
        let mut v: Vec<f64> = (r..m).map(|i| a[i][j]).collect();
        v[0] -= alpha;
        let vv: f64 = v.iter().map(|x| x * x).sum();
        if vv > 0.0 {
            for mat in [&mut a, &mut h] {
                let width = mat[0].len();
                for c in 0..width {
                    let dot: f64 = (r..m).map(|i| v[i - r] * mat[i][c]).sum();
                    let f = 2.0 * dot / vv;
                    for i in r..m {
                        mat[i][c] -= f * v[i - r];
                    }
                }
            }
        }
        if a[r][j] < 0.0 {
            a[r].iter_mut().for_each(|x| *x = -*x);
            h[r].iter_mut().for_each(|x| *x = -*x);
        }
        r += 1;
    }
    h
}

/// Apply the real mixing matrix `h` to the vectors: out_k = Σ_j h_kj vs_j.
pub fn mix<const N: usize>(h: &[Vec<f64>], vs: &[CVec<N>]) -> Vec<CVec<N>> {
    h.iter()
        .map(|row| {
            row.iter()
                .zip(vs)
                .fold(CVec::zeros(), |acc, (&c, v)| acc + v.scale_re(c))
        })
        .collect()
}

/// Sort key: the vector rotated so its first significant component is real
/// positive, flattened to (re, im) pairs.
pub fn phase_key<const N: usize>(v: &CVec<N>) -> Vec<f64> {
    let top = v.max_abs();
    let lead = v.0.iter().find(|c| c.norm() > KEY_TOL * top);
    let w = match lead {
        Some(c) => v.scale(c.conj() / c.norm()),
        None => *v,
    };
    w.0.iter().flat_map(|c| [c.re, c.im]).collect()
}

/// Lexicographic comparison with a small dead band, descending order.
pub fn cmp_keys_desc(a: &[f64], b: &[f64]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        if (x - y).abs() > KEY_TOL {
            return y.total_cmp(x);
        }
    }
    Ordering::Equal
}

/// Extend `vs` (assumed close to orthonormal) to an orthonormal basis.
///
/// Vectors that are numerically dependent on the earlier ones (residual norm
/// below `0.5`) are dropped and replaced by Gram–Schmidt completions from the
/// standard basis. The returned list has the accepted vectors first, in order.
pub fn complete_orthonormal<const N: usize>(vs: &[CVec<N>]) -> Vec<CVec<N>> {
    let mut out: Vec<CVec<N>> = Vec::with_capacity(N);
    let push = |v: &CVec<N>, out: &mut Vec<CVec<N>>| {
        let n0 = v.norm();
        if n0 == 0.0 {
            return false;
        }
        let mut w = *v;
        // twice is enough
        for _ in 0..2 {
            for u in out.iter() {
                w = w - u.scale(u.dot(&w));
            }
        }
        let n = w.norm();
        if n > 0.5 * n0 {
            out.push(w.scale_re(1.0 / n));
            true
        } else {
            false
        }
    };
    for v in vs {
        if out.len() == N {
            break;
        }
        push(v, &mut out);
    }
    for k in 0..N {
        if out.len() == N {
            break;
        }
        push(&CVec::basis(k), &mut out);
    }
    out
}

/// Multiply by a unit phase e^{iα}.
pub fn rotate<const N: usize>(v: &CVec<N>, alpha: f64) -> CVec<N> {
    v.scale(C64::from_polar(1.0, alpha))
}
