//! Lewenstein–Sanpera decomposition ρ = λρ_sep + (1−λ)|ψ⟩⟨ψ| built from the
//! Wootters basis, its product ensemble, and the optimality certificate.

mod alternatives;
mod certify;
mod ppt;

pub use alternatives::{mixing_split, AlternativeSplit};
pub use certify::{
    verify_optimality, verify_optimality_with, Check, OptimalityReport, PairBranch, PairRecord,
    SingleRecord, Tolerances,
};
pub use ppt::{partial_transpose, ppt_check, ppt_check_matrix, PptResult};

use std::f64::consts::FRAC_PI_2;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matcore::{sum_projectors, CMat4, CVec4, C64};
use crate::qstate::{lambda_spectrum, rank, schmidt, spin_flip_vec, DensityMatrix, SpectrumLambda};
use crate::wootters::{wootters_basis, WoottersDecomposition, ZERO_LAMBDA_REL};

/// Concurrence at or below this is treated as zero.
pub const SEPARABLE_C: f64 = 1e-12;
/// Tolerance on |Σ e^{2iθ_j} λ″_j| for caller-supplied phases.
pub const PHASE_TOL: f64 = 1e-9;

/// Default phases θ = (0, −π/2, −π/2, −π/2): e^{2iθ} = (1, −1, −1, −1)
/// turns the constraint into λ″₁ − λ″₂ − λ″₃ − λ″₄ = 0.
pub const DEFAULT_PHASES: [f64; 4] = [0.0, -FRAC_PI_2, -FRAC_PI_2, -FRAC_PI_2];

/// Sign pattern of |z_k⟩ = ½ Σ_j s_kj e^{iθ_j} |x″_j⟩.
const SIGNS: [[f64; 4]; 4] = [
    [1.0, 1.0, 1.0, 1.0],
    [1.0, 1.0, -1.0, -1.0],
    [1.0, -1.0, 1.0, -1.0],
    [1.0, -1.0, -1.0, 1.0],
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RankClass {
    Full,
    Rank3,
    Rank2,
    Separable,
    Pure,
}

impl fmt::Display for RankClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            RankClass::Full => "full",
            RankClass::Rank3 => "rank3",
            RankClass::Rank2 => "rank2",
            RankClass::Separable => "separable",
            RankClass::Pure => "pure",
        };
        f.write_str(s)
    }
}

/// Classification from the λ-spectrum and the rank of ρ.
pub fn classify_spectrum(l: &SpectrumLambda, rank_rho: usize) -> RankClass {
    if l.concurrence() <= SEPARABLE_C {
        return RankClass::Separable;
    }
    if rank_rho <= 1 {
        return RankClass::Pure;
    }
    let cut = ZERO_LAMBDA_REL * l.0[0].max(1e-30);
    match l.0.iter().filter(|&&x| x >= cut).count() {
        4 => RankClass::Full,
        3 => RankClass::Rank3,
        _ => RankClass::Rank2,
    }
}

pub fn classify(rho: &DensityMatrix) -> Result<RankClass> {
    Ok(classify_spectrum(&lambda_spectrum(rho)?, rank(rho)))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LSDecomposition {
    /// Separable weight λ.
    pub weight: f64,
    pub sep: DensityMatrix,
    /// Normalized entangled part; absent iff C = 0.
    pub pure: Option<CVec4>,
    pub xpp: [CVec4; 4],
    pub lambdas_pp: [f64; 4],
    pub zs: [CVec4; 4],
    /// ⟨z_α|z_α⟩, summing to 1.
    pub weights: [f64; 4],
    pub phases: [f64; 4],
    pub rank_class: RankClass,
    /// λ-spectrum of the decomposed state.
    pub lambdas: SpectrumLambda,
    pub concurrence: f64,
    /// Wootters vector |x₁⟩ of the decomposed state.
    pub x1: CVec4,
}

impl LSDecomposition {
    /// λρ_sep + (1−λ)|ψ⟩⟨ψ|
    pub fn reconstruct(&self) -> CMat4 {
        let mut m = self.sep.matrix().scale_re(self.weight);
        if let Some(psi) = &self.pure {
            m += psi.projector().scale_re(1.0 - self.weight);
        }
        m
    }

    /// ‖Σ|z_i⟩⟨z_i| − ρ_sep‖_max
    pub fn z_sum_residual(&self) -> f64 {
        sum_projectors(&self.zs).dist(self.sep.matrix())
    }

    /// max_i |⟨z_i|z̃_i⟩|
    pub fn z_concurrence(&self) -> f64 {
        self.zs
            .iter()
            .map(|z| z.dot(&spin_flip_vec(z)).norm())
            .fold(0.0, f64::max)
    }

    /// λ″₁ − λ″₂ − λ″₃ − λ″₄
    pub fn boundary_gap(&self) -> f64 {
        let [a, b, c, d] = self.lambdas_pp;
        a - b - c - d
    }

    /// |1 − λ − C·⟨x₁|x₁⟩/λ₁|
    pub fn weight_identity_residual(&self) -> f64 {
        match self.rank_class {
            RankClass::Separable => (1.0 - self.weight).abs(),
            _ => {
                let expected = self.concurrence * self.x1.norm_sqr() / self.lambdas.0[0];
                (1.0 - self.weight - expected).abs()
            }
        }
    }
}

/// |z_k⟩ = ½ Σ_j s_kj e^{iθ_j} |x″_j⟩
pub fn z_vectors(xpp: &[CVec4; 4], phases: &[f64; 4]) -> [CVec4; 4] {
    let e: [C64; 4] = phases.map(|t| C64::from_polar(0.5, t));
    std::array::from_fn(|k| {
        (0..4).fold(CVec4::zeros(), |acc, j| {
            acc + xpp[j].scale(e[j] * SIGNS[k][j])
        })
    })
}

/// |Σ_j e^{2iθ_j} λ_j|
pub fn phase_constraint_residual(phases: &[f64; 4], lambdas: &[f64; 4]) -> f64 {
    phases
        .iter()
        .zip(lambdas)
        .map(|(&t, &l)| C64::from_polar(l, 2.0 * t))
        .sum::<C64>()
        .norm()
}

/// Phases with θ₁ = 0 solving Σ e^{2iθ_j} λ_j = 0, i.e. closing the
/// quadrilateral with sides λ₁…λ₄. Requires λ₁ ≤ λ₂ + λ₃ + λ₄ (C = 0).
pub fn closure_phases(l: &[f64; 4]) -> Option<[f64; 4]> {
    let [l1, l2, l3, l4] = *l;
    let total = l1 + l2 + l3 + l4;
    if total == 0.0 {
        return Some([0.0; 4]);
    }
    // Split into triangles (λ₁, λ₂, d) and (λ₃, λ₄, d).
    let d = (l1 - l2).abs().max((l3 - l4).abs());
    let cos_law = |a: f64, b: f64, c: f64| -> f64 {
        // angle between sides a and b in a triangle whose third side is c
        if a == 0.0 || b == 0.0 {
            0.0
        } else {
            ((c * c - a * a - b * b) / (2.0 * a * b))
                .clamp(-1.0, 1.0)
                .acos()
        }
    };
    let phi2 = cos_law(l1, l2, d);
    let u = C64::new(l1, 0.0) + C64::from_polar(l2, phi2);
    let w = -u;
    let (phi3, phi4) = if d == 0.0 || w.norm() == 0.0 {
        (0.0, std::f64::consts::PI)
    } else {
        let alpha = if l3 == 0.0 {
            0.0
        } else {
            ((l3 * l3 + d * d - l4 * l4) / (2.0 * l3 * d))
                .clamp(-1.0, 1.0)
                .acos()
        };
        let a3 = C64::from_polar(l3, w.arg() + alpha);
        let a4 = w - a3;
        (
            w.arg() + alpha,
            if a4.norm() > 0.0 { a4.arg() } else { 0.0 },
        )
    };
    let phases = [0.0, phi2 / 2.0, phi3 / 2.0, phi4 / 2.0];
    (phase_constraint_residual(&phases, l) <= 1e-12 * total.max(1.0)).then_some(phases)
}

pub fn ls_decompose(rho: &DensityMatrix) -> Result<LSDecomposition> {
    let w = wootters_basis(rho)?;
    let class = classify_spectrum(&w.lambdas, rank(rho));
    match class {
        RankClass::Separable => Ok(separable_branch(rho, &w)),
        RankClass::Pure => pure_branch(&w),
        _ => entangled_branch(&w, class),
    }
}

fn separable_branch(rho: &DensityMatrix, w: &WoottersDecomposition) -> LSDecomposition {
    let phases = closure_phases(&w.lambdas.0).unwrap_or([0.0; 4]);
    let zs = z_vectors(&w.xs, &phases);
    LSDecomposition {
        weight: 1.0,
        sep: *rho,
        pure: None,
        xpp: w.xs,
        lambdas_pp: w.lambdas.0,
        weights: zs.map(|z| z.norm_sqr()),
        zs,
        phases,
        rank_class: RankClass::Separable,
        lambdas: w.lambdas,
        concurrence: w.lambdas.concurrence(),
        x1: w.xs[0],
    }
}

fn pure_branch(w: &WoottersDecomposition) -> Result<LSDecomposition> {
    let x1 = w.xs[0];
    let psi = x1.normalized().ok_or(Error::ZeroState)?;
    // Any separable state works at weight zero; take the dominant Schmidt term.
    let s = schmidt(&psi);
    let prod = s.a[0].kron(&s.b[0]);
    let sep = DensityMatrix::from_unnormalized(prod.projector())?;
    let zero = CVec4::zeros();
    Ok(LSDecomposition {
        weight: 0.0,
        sep,
        pure: Some(psi),
        xpp: [prod, zero, zero, zero],
        lambdas_pp: [0.0; 4],
        zs: [prod, zero, zero, zero],
        weights: [1.0, 0.0, 0.0, 0.0],
        phases: [0.0; 4],
        rank_class: RankClass::Pure,
        lambdas: w.lambdas,
        concurrence: w.lambdas.concurrence(),
        x1,
    })
}

fn entangled_branch(w: &WoottersDecomposition, class: RankClass) -> Result<LSDecomposition> {
    let [l1, l2, l3, l4] = w.lambdas.0;
    let c = w.lambdas.concurrence();
    let x1 = w.xs[0];
    let n1 = x1.norm_sqr();
    let weight = 1.0 - c / l1 * n1;
    if weight <= 1e-14 {
        return pure_branch(w);
    }
    let s = l2 + l3 + l4;
    let xpp = [
        x1.scale_re((s / (weight * l1)).sqrt()),
        w.xs[1].scale_re(1.0 / weight.sqrt()),
        w.xs[2].scale_re(1.0 / weight.sqrt()),
        w.xs[3].scale_re(1.0 / weight.sqrt()),
    ];
    let lambdas_pp = [s / weight, l2 / weight, l3 / weight, l4 / weight];
    let sep = DensityMatrix::from_unnormalized(sum_projectors(&xpp).hermitian_part())?;
    let zs = z_vectors(&xpp, &DEFAULT_PHASES);
    Ok(LSDecomposition {
        weight,
        sep,
        pure: Some(x1.scale_re(1.0 / n1.sqrt())),
        xpp,
        lambdas_pp,
        weights: zs.map(|z| z.norm_sqr()),
        zs,
        phases: DEFAULT_PHASES,
        rank_class: class,
        lambdas: w.lambdas,
        concurrence: c,
        x1,
    })
}

/// (1−λ)·|⟨ψ|ψ̃⟩|
pub fn average_concurrence(d: &LSDecomposition) -> Result<f64> {
    let psi = d.pure.as_ref().ok_or(Error::NoPurePart)?;
    Ok((1.0 - d.weight) * psi.dot(&spin_flip_vec(psi)).norm())
}

/// Product ensemble of ρ_sep for the given phases (default: those stored
/// in the decomposition).
pub fn product_ensemble(d: &LSDecomposition, phases: Option<[f64; 4]>) -> Result<[CVec4; 4]> {
    let Some(phases) = phases else {
        return Ok(d.zs);
    };
    if d.rank_class == RankClass::Pure {
        return Ok(d.zs);
    }
    let residual = phase_constraint_residual(&phases, &d.lambdas_pp);
    if residual > PHASE_TOL {
        return Err(Error::PhaseConstraintViolated { residual });
    }
    Ok(z_vectors(&d.xpp, &phases))
}

/// The split with `delta` of weight moved from the pure part onto the
/// separable part, keeping ψ and the product ensemble. Reconstructs ρ but is
/// not an LS decomposition; used to exercise the certificate.
pub fn reweighted(rho: &DensityMatrix, d: &LSDecomposition, delta: f64) -> Result<LSDecomposition> {
    let psi = d.pure.ok_or(Error::NoPurePart)?;
    let weight = d.weight + delta;
    let sep = (*rho.matrix() - psi.projector().scale_re(1.0 - weight)).scale_re(1.0 / weight);
    let sep = DensityMatrix::validate(sep.hermitian_part())?;
    Ok(LSDecomposition {
        weight,
        sep,
        ..d.clone()
    })
}
