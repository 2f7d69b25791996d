//! Independent oracles for the integration and acceptance tests. Nothing
//! here calls the library's eigen, Takagi or dual-basis kernels.
#![allow(dead_code, clippy::needless_range_loop)]

use lsd_core::qstate::DensityMatrix;
use lsd_core::{CMat, CMat2, CMat4, CVec4, C64};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// σ_y⊗σ_y written out entry by entry.
pub fn sigma_yy() -> CMat4 {
    CMat::from_real([
        [0.0, 0.0, 0.0, -1.0],
        [0.0, 0.0, 1.0, 0.0],
        [0.0, 1.0, 0.0, 0.0],
        [-1.0, 0.0, 0.0, 0.0],
    ])
}

/// ρ = WW† with W = G/√tr(GG†), G a 4×rank complex Gaussian (zero-padded).
pub fn ginibre(rng: &mut ChaCha8Rng, rank: usize) -> (DensityMatrix, CMat4) {
    let mut g = CMat4::zeros();
    for i in 0..4 {
        for j in 0..rank {
            g[(i, j)] = c(rng.sample(StandardNormal), rng.sample(StandardNormal));
        }
    }
    let t = (g * g.adjoint()).trace().re;
    let w = g.scale_re(1.0 / t.sqrt());
    let rho = DensityMatrix::validate((w * w.adjoint()).hermitian_part()).expect("Ginibre state");
    (rho, w)
}

/// Singular values (descending) by one-sided Jacobi on the columns.
pub fn singular_values(a: &CMat4) -> [f64; 4] {
    let mut cols: Vec<[C64; 4]> = (0..4).map(|j| std::array::from_fn(|i| a[(i, j)])).collect();
    let dot = |x: &[C64; 4], y: &[C64; 4]| -> C64 { (0..4).map(|k| x[k].conj() * y[k]).sum() };
    for _sweep in 0..60 {
        let mut off = 0.0f64;
        for p in 0..4 {
            for q in p + 1..4 {
                let alpha = dot(&cols[p], &cols[p]).re;
                let beta = dot(&cols[q], &cols[q]).re;
                let gamma = dot(&cols[p], &cols[q]);
                let g = gamma.norm();
                if g <= 1e-300 || g <= 1e-17 * (alpha * beta).sqrt() {
                    continue;
                }
                off = off.max(g / (alpha * beta).sqrt());
                // make the inner product real by a phase on column q
                let ph = gamma.conj() / g;
                for k in 0..4 {
                    cols[q][k] *= ph;
                }
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let cs = 1.0 / (1.0 + t * t).sqrt();
                let sn = cs * t;
                for k in 0..4 {
                    let (x, y) = (cols[p][k], cols[q][k]);
                    cols[p][k] = x * cs - y * sn;
                    cols[q][k] = x * sn + y * cs;
                }
            }
        }
        if off < 1e-16 {
            break;
        }
    }
    let mut s: Vec<f64> = cols.iter().map(|x| dot(x, x).re.sqrt()).collect();
    s.sort_by(|a, b| b.total_cmp(a));
    [s[0], s[1], s[2], s[3]]
}

/// λ-spectrum from any factor ρ = WW†: singular values of Wᵀ(σ_y⊗σ_y)W.
pub fn lambda_oracle(w: &CMat4) -> [f64; 4] {
    singular_values(&(w.transpose() * sigma_yy() * *w))
}

pub fn factor_from_columns(cols: &[CVec4]) -> CMat4 {
    CMat::from_fn(|i, j| cols.get(j).map_or(C64::new(0.0, 0.0), |v| v[i]))
}

pub fn concurrence_oracle(l: &[f64; 4]) -> f64 {
    (l[0] - l[1] - l[2] - l[3]).max(0.0)
}

/// ⟨v|σ_y⊗σ_y|v*⟩
pub fn flip_overlap(v: &CVec4) -> C64 {
    let s = sigma_yy();
    (0..4)
        .map(|i| {
            (0..4)
                .map(|j| v[i].conj() * s[(i, j)] * v[j].conj())
                .sum::<C64>()
        })
        .sum()
}

/// ⟨ij|M^{T_B}|kl⟩ = ⟨il|M|kj⟩
pub fn partial_transpose(m: &CMat4) -> CMat4 {
    CMat::from_fn(|a, b| m[(2 * (a / 2) + b % 2, 2 * (b / 2) + a % 2)])
}

/// Whether H + shift·I admits a Cholesky factorization (H Hermitian).
pub fn cholesky_ok(h: &CMat4, shift: f64) -> bool {
    let mut l = [[C64::new(0.0, 0.0); 4]; 4];
    for j in 0..4 {
        let mut d = h[(j, j)].re + shift;
        for k in 0..j {
            d -= l[j][k].norm_sqr();
        }
        if d <= 0.0 {
            return false;
        }
        let djj = d.sqrt();
        l[j][j] = C64::new(djj, 0.0);
        for i in j + 1..4 {
            let mut s = h[(i, j)];
            for k in 0..j {
                s -= l[i][k] * l[j][k].conj();
            }
            l[i][j] = s / djj;
        }
    }
    true
}

/// Characteristic polynomial coefficients [c0..c4] of a 4×4 matrix
/// (c4 = 1) by Faddeev–LeVerrier.
pub fn char_poly(a: &CMat4) -> [C64; 5] {
    let mut coeffs = [C64::new(0.0, 0.0); 5];
    coeffs[4] = C64::new(1.0, 0.0);
    let mut m = CMat4::zeros();
    for k in 1..=4 {
        let mut next = *a * m;
        for i in 0..4 {
            next[(i, i)] += coeffs[4 - k + 1];
        }
        m = next;
        coeffs[4 - k] = -(*a * m).trace() / k as f64;
    }
    coeffs
}

/// All roots of a monic quartic by Durand–Kerner iteration.
pub fn quartic_roots(coeffs: &[C64; 5]) -> [C64; 4] {
    let eval = |z: C64| {
        coeffs
            .iter()
            .rev()
            .fold(C64::new(0.0, 0.0), |acc, &cf| acc * z + cf)
    };
    let seed = C64::new(0.4, 0.9);
    let mut r: [C64; 4] = std::array::from_fn(|k| seed.powu(k as u32));
    for _ in 0..500 {
        let mut delta = 0.0f64;
        for i in 0..4 {
            let mut den = C64::new(1.0, 0.0);
            for j in 0..4 {
                if i != j {
                    den *= r[i] - r[j];
                }
            }
            let step = eval(r[i]) / den;
            r[i] -= step;
            delta = delta.max(step.norm());
        }
        if delta < 1e-18 {
            break;
        }
    }
    r
}

/// λ-spectrum as √ of the eigenvalues of ρρ̃ (accurate only away from 0).
pub fn lambda_from_char_poly(rho: &CMat4) -> [f64; 4] {
    let s = sigma_yy();
    let tilde = s * rho.conj() * s;
    let roots = quartic_roots(&char_poly(&(*rho * tilde)));
    let mut l: Vec<f64> = roots.iter().map(|z| z.re.max(0.0).sqrt()).collect();
    l.sort_by(|a, b| b.total_cmp(a));
    [l[0], l[1], l[2], l[3]]
}

/// exp(A) by scaling and squaring a Taylor series.
pub fn expm(a: &CMat4) -> CMat4 {
    let k = (a.max_abs().max(1.0).log2().ceil() as i32 + 4).max(0);
    let s = a.scale_re(0.5f64.powi(k));
    let mut term = CMat4::identity();
    let mut sum = CMat4::identity();
    for n in 1..30 {
        term = (term * s).scale_re(1.0 / n as f64);
        sum += term;
    }
    (0..k).fold(sum, |acc, _| acc * acc)
}

/// Haar SU(2) as a unit quaternion.
pub fn su2(rng: &mut ChaCha8Rng) -> CMat2 {
    let q: [f64; 4] = std::array::from_fn(|_| rng.sample(StandardNormal));
    let n = q.iter().map(|x| x * x).sum::<f64>().sqrt();
    let (a, b) = (c(q[0] / n, q[1] / n), c(q[2] / n, q[3] / n));
    CMat([[a, -b.conj()], [b, a.conj()]])
}

/// Werner state p|Ψ⁻⟩⟨Ψ⁻| + (1−p)I/4 has C = max(0, (3p−1)/2).
pub fn werner_concurrence(p: f64) -> f64 {
    ((3.0 * p - 1.0) / 2.0).max(0.0)
}

/// Inverse of a 2×2 complex matrix.
pub fn inv2(m: [[C64; 2]; 2]) -> [[C64; 2]; 2] {
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    [
        [m[1][1] / det, -m[0][1] / det],
        [-m[1][0] / det, m[0][0] / det],
    ]
}

/// For M supported on span{a, b}: the coefficients Ã with M = Σ Ã_ij|i⟩⟨j|,
/// so that [⟨i|M⁺|j⟩] = Ã⁻¹.
pub fn restricted_block(m: &CMat4, a: &CVec4, b: &CVec4) -> [[C64; 2]; 2] {
    let vs = [a, b];
    let gram: [[C64; 2]; 2] = std::array::from_fn(|i| std::array::from_fn(|j| vs[i].dot(vs[j])));
    let gi = inv2(gram);
    let proj: [[C64; 2]; 2] =
        std::array::from_fn(|i| std::array::from_fn(|j| m.sandwich(vs[i], vs[j])));
    let mul = |x: [[C64; 2]; 2], y: [[C64; 2]; 2]| -> [[C64; 2]; 2] {
        std::array::from_fn(|i| std::array::from_fn(|j| x[i][0] * y[0][j] + x[i][1] * y[1][j]))
    };
    let coeffs = mul(mul(gi, proj), gi);
    inv2(coeffs)
}

/// ⟨u|M⁺|v⟩ for u, v in span{a, b} = range(M), from the Gram-inverse block.
pub fn range_pinv_form(m: &CMat4, a: &CVec4, b: &CVec4, cu: [C64; 2], cv: [C64; 2]) -> C64 {
    let inv = restricted_block(m, a, b);
    let mut s = C64::new(0.0, 0.0);
    for i in 0..2 {
        for j in 0..2 {
            s += cu[i].conj() * inv[i][j] * cv[j];
        }
    }
    s
}

/// The (normalized) product vectors a + μb in span{a, b}: roots of the
/// quadratic ⟨v*|σ_y⊗σ_y|v⟩ = 0. Returns the expansion coefficients.
pub fn range_products(a: &CVec4, b: &CVec4) -> Vec<[C64; 2]> {
    let s = sigma_yy();
    let f = |x: &CVec4, y: &CVec4| -> C64 {
        (0..4)
            .map(|i| (0..4).map(|j| x[i] * s[(i, j)] * y[j]).sum::<C64>())
            .sum()
    };
    let (faa, fab, fbb) = (f(a, a), f(a, b), f(b, b));
    if fbb.norm() < 1e-14 {
        // b itself is a product vector; the other root is linear
        let mut out = vec![[C64::new(0.0, 0.0), C64::new(1.0, 0.0)]];
        if fab.norm() > 1e-14 {
            out.push([C64::new(1.0, 0.0), -faa / (2.0 * fab)]);
        }
        return out;
    }
    let disc = (fab * fab - faa * fbb).sqrt();
    [(-fab + disc) / fbb, (-fab - disc) / fbb]
        .into_iter()
        .map(|mu| [C64::new(1.0, 0.0), mu])
        .collect()
}

/// An LS split of a rank-2 ρ = w₁|p₁⟩⟨p₁| + w₂|p₂⟩⟨p₂| + |ψ′⟩⟨ψ′| over the
/// two product vectors of its range, with w₁ = s·w₁,max for s ∈ [0, 1].
/// Returns (separable weight, sep part, remainder).
pub fn rank2_product_split(rho: &CMat4, w: &CMat4, s: f64) -> Option<(f64, CMat4, CMat4)> {
    let (a, b) = (w.column(0), w.column(1));
    let roots = range_products(&a, &b);
    if roots.len() < 2 {
        return None;
    }
    let vec_of = |c: &[C64; 2]| a.scale(c[0]) + b.scale(c[1]);
    let norms: Vec<f64> = roots.iter().map(|c| vec_of(c).norm()).collect();
    let c1 = [roots[0][0] / norms[0], roots[0][1] / norms[0]];
    let c2 = [roots[1][0] / norms[1], roots[1][1] / norms[1]];
    let (p1, p2) = (vec_of(&c1), vec_of(&c2));
    let w1 = s / range_pinv_form(rho, &a, &b, c1, c1).re;
    let rho1 = *rho - p1.projector().scale_re(w1);
    let w2 = 1.0 / range_pinv_form(&rho1, &a, &b, c2, c2).re;
    let sep = p1.projector().scale_re(w1) + p2.projector().scale_re(w2);
    Some((w1 + w2, sep, rho1 - p2.projector().scale_re(w2)))
}
