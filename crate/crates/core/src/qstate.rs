//! Density matrices, the spin flip, and the λ-spectrum of R.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matcore::{
    herm_eig, psd_sqrt, takagi, CMat, CMat2, CMat4, CVec, CVec2, CVec4, C64, ZERO,
};

pub const HERMITIAN_TOL: f64 = 1e-10;
pub const TRACE_TOL: f64 = 1e-10;
pub const PSD_TOL: f64 = 1e-10;
/// Eigenpairs of ρ with μ below this are dropped from the eigen-ensemble.
pub const EIGEN_FLOOR: f64 = 1e-12;

/// A validated two-qubit state in the basis |↑↑⟩, |↑↓⟩, |↓↑⟩, |↓↓⟩.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "crate::io::StateJson", into = "crate::io::StateJson")]
pub struct DensityMatrix {
    m: CMat4,
}

impl DensityMatrix {
    /// Check hermiticity, unit trace and positivity, in that order.
    pub fn validate(m: CMat4) -> Result<Self> {
        if !m.is_finite() {
            return Err(Error::NonFinite);
        }
        let residual = m.hermitian_residual();
        if residual > HERMITIAN_TOL {
            return Err(Error::NotHermitian { residual });
        }
        let m = m.hermitian_part();
        let trace = m.trace().re;
        if (trace - 1.0).abs() > TRACE_TOL {
            return Err(Error::NotUnitTrace { trace });
        }
        let min = herm_eig(&m)?.min_value();
        if min < -PSD_TOL {
            return Err(Error::NotPSD {
                min_eigenvalue: min,
            });
        }
        Ok(Self { m })
    }

    /// Normalize a PSD matrix by its trace, then validate.
    pub fn from_unnormalized(m: CMat4) -> Result<Self> {
        let t = m.trace().re;
        if t.is_nan() || t <= 0.0 {
            return Err(Error::NotUnitTrace { trace: t });
        }
        Self::validate(m.scale_re(1.0 / t))
    }

    /// |ψ⟩⟨ψ| for a normalized ψ.
    pub fn pure(psi: &CVec4) -> Result<Self> {
        let n = psi.norm();
        if (n - 1.0).abs() > 1e-10 {
            return Err(Error::NotNormalized { norm: n });
        }
        Self::validate(psi.projector())
    }

    pub fn maximally_mixed() -> Self {
        Self {
            m: CMat4::identity().scale_re(0.25),
        }
    }

    pub fn matrix(&self) -> &CMat4 {
        &self.m
    }

    pub fn into_matrix(self) -> CMat4 {
        self.m
    }
}

/// σ_y ⊗ σ_y; acts on (a, b, c, d) as (−d, c, b, −a).
pub fn sigma_yy() -> CMat4 {
    CMat4::from_real([
        [0.0, 0.0, 0.0, -1.0],
        [0.0, 0.0, 1.0, 0.0],
        [0.0, 1.0, 0.0, 0.0],
        [-1.0, 0.0, 0.0, 0.0],
    ])
}

/// ρ̃ = (σ_y⊗σ_y) ρ* (σ_y⊗σ_y)
pub fn spin_flip(rho: &DensityMatrix) -> CMat4 {
    spin_flip_matrix(rho.matrix())
}

pub fn spin_flip_matrix(m: &CMat4) -> CMat4 {
    let s = sigma_yy();
    s * m.conj() * s
}

/// |ψ̃⟩ = (σ_y⊗σ_y)|ψ*⟩
pub fn spin_flip_vec(v: &CVec4) -> CVec4 {
    let c = v.conj();
    CVec([-c[3], c[2], c[1], -c[0]])
}

/// λ₁ ≥ λ₂ ≥ λ₃ ≥ λ₄ ≥ 0, the eigenvalues of R.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SpectrumLambda(pub [f64; 4]);

impl SpectrumLambda {
    pub fn values(&self) -> [f64; 4] {
        self.0
    }

    /// max(0, λ₁ − λ₂ − λ₃ − λ₄)
    pub fn concurrence(&self) -> f64 {
        self.signed_gap().max(0.0)
    }

    /// λ₁ − λ₂ − λ₃ − λ₄ without the clamp.
    pub fn signed_gap(&self) -> f64 {
        let [a, b, c, d] = self.0;
        a - b - c - d
    }
}

/// λ-spectrum of ρ.
///
/// Computed as the Takagi values of B = √ρ·σ_yy·√ρ*; since B·B† = √ρ ρ̃ √ρ
/// these are exactly the eigenvalues of R = √(√ρ ρ̃ √ρ), but without the
/// loss of relative accuracy that taking square roots of R² incurs for
/// small λ.
pub fn lambda_spectrum(rho: &DensityMatrix) -> Result<SpectrumLambda> {
    let sq = psd_sqrt(rho.matrix())?;
    let b = sq * sigma_yy() * sq.conj();
    let t = takagi(&(b + b.transpose()).scale_re(0.5))?;
    Ok(SpectrumLambda(t.lambdas))
}

/// R = √(√ρ ρ̃ √ρ)
pub fn r_matrix(rho: &DensityMatrix) -> Result<CMat4> {
    let sq = psd_sqrt(rho.matrix())?;
    psd_sqrt(&(sq * spin_flip(rho) * sq).hermitian_part())
}

/// Subnormalized eigenvectors |v_i⟩ = √μ_i |u_i⟩ of ρ, μ descending.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EigenEnsemble {
    pub vs: [CVec4; 4],
    pub mus: [f64; 4],
}

impl EigenEnsemble {
    pub fn reconstruct(&self) -> CMat4 {
        crate::matcore::sum_projectors(&self.vs)
    }

    /// max_ij |⟨v_i|v_j⟩ − μ_i δ_ij|
    pub fn orthogonality_residual(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..4 {
            for j in 0..4 {
                let t = if i == j { self.mus[i] } else { 0.0 };
                worst = worst.max((self.vs[i].dot(&self.vs[j]) - C64::new(t, 0.0)).norm());
            }
        }
        worst
    }
}

pub fn eigen_ensemble(rho: &DensityMatrix) -> EigenEnsemble {
    let eig = herm_eig(rho.matrix()).expect("validated state is Hermitian");
    let mut vs = [CVec4::zeros(); 4];
    let mut mus = [0.0; 4];
    for k in 0..4 {
        let mu = eig.values[k];
        if mu > EIGEN_FLOOR {
            mus[k] = mu;
            vs[k] = eig.vectors[k].scale_re(mu.sqrt());
        }
    }
    EigenEnsemble { vs, mus }
}

/// Number of eigenvalues of ρ above `EIGEN_FLOOR`.
pub fn rank(rho: &DensityMatrix) -> usize {
    eigen_ensemble(rho).mus.iter().filter(|&&m| m > 0.0).count()
}

/// Ginibre state G·G†/Tr(G·G†) with G a 4×rank matrix of complex normals.
pub fn sample_random(seed: u64, rank: usize) -> Result<DensityMatrix> {
    sample_random_with(&mut ChaCha8Rng::seed_from_u64(seed), rank)
}

pub fn sample_random_with<R: Rng + ?Sized>(rng: &mut R, rank: usize) -> Result<DensityMatrix> {
    if !(1..=4).contains(&rank) {
        return Err(Error::InvalidRank(rank));
    }
    let mut g = [[ZERO; 4]; 4];
    for row in g.iter_mut() {
        for entry in row.iter_mut().take(rank) {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            *entry = C64::new(re, im);
        }
    }
    let g = CMat(g);
    let m = (g * g.adjoint()).hermitian_part();
    DensityMatrix::from_unnormalized(m)
}

/// Tr_B of a 4×4 operator.
pub fn partial_trace_b(m: &CMat4) -> CMat2 {
    CMat::from_fn(|i, j| m[(2 * i, 2 * j)] + m[(2 * i + 1, 2 * j + 1)])
}

/// Tr_A of a 4×4 operator.
pub fn partial_trace_a(m: &CMat4) -> CMat2 {
    CMat::from_fn(|i, j| m[(i, j)] + m[(2 + i, 2 + j)])
}

/// Schmidt form ψ = Σ_k s_k |a_k⟩⊗|b_k⟩ with s₀ ≥ s₁ ≥ 0.
#[derive(Clone, Copy, Debug)]
pub struct Schmidt {
    pub coefficients: [f64; 2],
    pub a: [CVec2; 2],
    pub b: [CVec2; 2],
}

pub fn schmidt(psi: &CVec4) -> Schmidt {
    // Ψ_ij = ψ_{2i+j}; ρ_A = ΨΨ†, |b_k⟩ ∝ Ψᵀ|a_k*⟩
    let big = CMat2::from_fn(|i, j| psi[2 * i + j]);
    let eig = crate::matcore::eig::herm_eig_unchecked(&(big * big.adjoint()));
    let mut coefficients = [0.0; 2];
    let mut b = [CVec2::zeros(); 2];
    for k in 0..2 {
        let a = eig.vectors[k];
        let f = big.transpose().mul_vec(&a.conj());
        let s = f.norm();
        coefficients[k] = s;
        b[k] = if s > 0.0 {
            f.scale_re(1.0 / s)
        } else {
            // any vector orthogonal to the other Schmidt partner
            let other = b[1 - k];
            CVec([-other[1].conj(), other[0].conj()])
        };
    }
    Schmidt {
        coefficients,
        a: eig.vectors,
        b,
    }
}

impl Schmidt {
    pub fn reconstruct(&self) -> CVec4 {
        (0..2).fold(CVec4::zeros(), |acc, k| {
            acc + self.a[k].kron(&self.b[k]).scale_re(self.coefficients[k])
        })
    }
}

/// Product vector |a⟩⊗|b⟩ as a 4-vector.
pub fn product(a: &CVec2, b: &CVec2) -> CVec4 {
    a.kron(b)
}

/// Standard Bell vectors ψ₁ = Φ⁺, ψ₂ = Ψ⁺, ψ₃ = Ψ⁻, ψ₄ = Φ⁻.
pub fn bell_states() -> [CVec4; 4] {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    [
        CVec4::from_real([h, 0.0, 0.0, h]),
        CVec4::from_real([0.0, h, h, 0.0]),
        CVec4::from_real([0.0, h, -h, 0.0]),
        CVec4::from_real([h, 0.0, 0.0, -h]),
    ]
}

/// Σ p_i |ψ_i⟩⟨ψ_i| over the Bell basis.
pub fn bell_diagonal(p: [f64; 4]) -> Result<DensityMatrix> {
    let b = bell_states();
    let m = (0..4).fold(CMat4::zeros(), |acc, k| {
        acc + b[k].projector().scale_re(p[k])
    });
    DensityMatrix::validate(m)
}

/// p·|Ψ⁻⟩⟨Ψ⁻| + (1−p)·I/4
pub fn werner(p: f64) -> Result<DensityMatrix> {
    let singlet = bell_states()[2].projector();
    DensityMatrix::validate(singlet.scale_re(p) + CMat4::identity().scale_re((1.0 - p) / 4.0))
}
