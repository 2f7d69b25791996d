//! Wootters basis, concurrence and entanglement of formation.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matcore::canon::{cmp_keys_desc, mix, phase_key, real_echelon};
use crate::matcore::takagi::degenerate_groups;
use crate::matcore::{herm_eig, sum_projectors, takagi, CMat, CMat4, CVec4, C64};
use crate::qstate::{
    eigen_ensemble, lambda_spectrum, partial_trace_b, spin_flip_vec, DensityMatrix, EigenEnsemble,
    SpectrumLambda,
};

/// τ_ij = ⟨v_i|ṽ_j⟩, complex symmetric.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TauMatrix(pub CMat4);

pub fn tau_matrix(ens: &EigenEnsemble) -> TauMatrix {
    let flipped = ens.vs.map(|v| spin_flip_vec(&v));
    TauMatrix(CMat::from_fn(|i, j| ens.vs[i].dot(&flipped[j])))
}

/// ρ = Σ|x_i⟩⟨x_i| with ⟨x_i|x̃_j⟩ = λ_i δ_ij.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WoottersDecomposition {
    pub xs: [CVec4; 4],
    pub lambdas: SpectrumLambda,
    /// |x_i⟩ = Σ_j U*_ij |v_j⟩
    pub u: CMat4,
    pub tau: TauMatrix,
}

impl WoottersDecomposition {
    pub fn reconstruct(&self) -> CMat4 {
        sum_projectors(&self.xs)
    }

    /// max_ij |⟨x_i|x̃_j⟩ − λ_i δ_ij|
    pub fn xortho_residual(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..4 {
            for j in 0..4 {
                let t = if i == j { self.lambdas.0[i] } else { 0.0 };
                let v = self.xs[i].dot(&spin_flip_vec(&self.xs[j]));
                worst = worst.max((v - C64::new(t, 0.0)).norm());
            }
        }
        worst
    }

    /// Σ⟨x_i|x_i⟩
    pub fn trace(&self) -> f64 {
        self.xs.iter().map(|x| x.norm_sqr()).sum()
    }

    pub fn concurrence(&self) -> f64 {
        self.lambdas.concurrence()
    }

    /// |x′_i⟩ = |x_i⟩/√λ_i, or `None` when λ_i is numerically zero.
    pub fn x_prime(&self, i: usize) -> Option<CVec4> {
        let l = self.lambdas.0[i];
        (l > ZERO_LAMBDA_REL * self.lambdas.0[0].max(1e-30))
            .then(|| self.xs[i].scale_re(1.0 / l.sqrt()))
    }
}

/// λ_i below this fraction of max(λ₁, 1e-30) count as zero.
pub const ZERO_LAMBDA_REL: f64 = 1e-8;

pub fn wootters_basis(rho: &DensityMatrix) -> Result<WoottersDecomposition> {
    wootters_from_ensemble(&eigen_ensemble(rho))
}

pub fn wootters_from_ensemble(ens: &EigenEnsemble) -> Result<WoottersDecomposition> {
    let tau = tau_matrix(ens);
    let t = takagi(&tau.0)?;
    let lambdas = t.lambdas;
    let mut xs: Vec<CVec4> = (0..4)
        .map(|i| {
            (0..4).fold(CVec4::zeros(), |acc, j| {
                acc + ens.vs[j].scale(t.u[(i, j)].conj())
            })
        })
        .collect();
    let mut rows: Vec<CVec4> = (0..4).map(|i| t.u.row(i)).collect();

    // Within a degenerate λ block any real rotation of the x's is another
    // Wootters basis; pick the echelon representative so output is stable.
    for g in degenerate_groups(&lambdas) {
        if g.len() < 2 {
            continue;
        }
        let h = real_echelon(&xs[g.clone()]);
        let new_x = mix(&h, &xs[g.clone()]);
        let new_u = mix(&h, &rows[g.clone()]);
        let mut idx: Vec<usize> = (0..g.len()).collect();
        let keys: Vec<Vec<f64>> = new_x.iter().map(phase_key).collect();
        idx.sort_by(|&a, &b| cmp_keys_desc(&keys[a], &keys[b]));
        for (slot, &k) in g.clone().zip(&idx) {
            xs[slot] = new_x[k];
            rows[slot] = new_u[k];
        }
    }

    for (x, row) in xs.iter_mut().zip(rows.iter_mut()) {
        if sign_flip_needed(x) {
            *x = -*x;
            *row = -*row;
        }
    }

    Ok(WoottersDecomposition {
        xs: [xs[0], xs[1], xs[2], xs[3]],
        lambdas: SpectrumLambda(lambdas),
        u: CMat::from_fn(|i, j| rows[i][j]),
        tau,
    })
}

/// Only a sign is free on each |x_i⟩ (a phase would rotate ⟨x_i|x̃_i⟩).
/// Choose it so the first largest-modulus component has arg in (−π, 0].
fn sign_flip_needed(x: &CVec4) -> bool {
    let top = x.max_abs();
    if top == 0.0 {
        return false;
    }
    let lead = x.0.iter().find(|c| c.norm() >= top * (1.0 - 1e-9)).unwrap();
    lead.arg() > 0.0
}

/// C(ρ) = max(0, λ₁ − λ₂ − λ₃ − λ₄)
pub fn concurrence(rho: &DensityMatrix) -> Result<f64> {
    Ok(lambda_spectrum(rho)?.concurrence())
}

/// |⟨ψ|ψ̃⟩| for a pure state.
pub fn pure_concurrence(psi: &CVec4) -> f64 {
    psi.dot(&spin_flip_vec(psi)).norm()
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EntropyBase {
    /// log₂, E_f(Bell) = 1
    #[default]
    Bits,
    /// ln
    Nats,
}

impl EntropyBase {
    fn log(self, x: f64) -> f64 {
        match self {
            EntropyBase::Bits => x.log2(),
            EntropyBase::Nats => x.ln(),
        }
    }
}

/// −Σ p log p over the given probabilities, with 0·log 0 = 0.
pub fn shannon(ps: &[f64], base: EntropyBase) -> f64 {
    ps.iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| -p * base.log(p))
        .sum::<f64>()
        .max(0.0)
}

pub fn binary_entropy(x: f64, base: EntropyBase) -> f64 {
    let x = x.clamp(0.0, 1.0);
    shannon(&[x, 1.0 - x], base)
}

/// E_f = H(½ + ½√(1 − C²))
pub fn eof_from_concurrence(c: f64, base: EntropyBase) -> f64 {
    let c = c.clamp(0.0, 1.0);
    binary_entropy(0.5 + 0.5 * (1.0 - c * c).sqrt(), base)
}

pub fn entanglement_of_formation(rho: &DensityMatrix, base: EntropyBase) -> Result<f64> {
    Ok(eof_from_concurrence(concurrence(rho)?, base))
}

/// Entropy of either reduced state of a normalized pure state.
pub fn pure_state_entropy(psi: &CVec4, base: EntropyBase) -> Result<f64> {
    let norm = psi.norm();
    if (norm - 1.0).abs() > 1e-10 {
        return Err(Error::NotNormalized { norm });
    }
    let rho_a = partial_trace_b(&psi.projector());
    let eig = herm_eig(&rho_a)?;
    Ok(shannon(&eig.values, base))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::{CVec, I};
    use crate::qstate::{bell_diagonal, bell_states, sample_random, werner};
    use proptest::prelude::*;

    #[test]
    fn bell_diagonal_reproduces_printed_vectors() {
        let p = [0.5, 0.2, 0.2, 0.1];
        let w = wootters_basis(&bell_diagonal(p).unwrap()).unwrap();
        let b = bell_states();
        let phases = [-I, C64::new(1.0, 0.0), -I, C64::new(1.0, 0.0)];
        for k in 0..4 {
            assert!((w.lambdas.0[k] - p[k]).abs() < 1e-14);
            let expected = b[k].scale(phases[k] * p[k].sqrt());
            assert!(
                (w.xs[k] - expected).max_abs() < 1e-14,
                "x{} = {:?}",
                k + 1,
                w.xs[k]
            );
        }
    }

    #[test]
    fn degenerate_bell_example_is_deterministic() {
        let p = [0.4, 0.25, 0.25, 0.1];
        let a = wootters_basis(&bell_diagonal(p).unwrap()).unwrap();
        // the same state built in a different order gives the same basis
        let b = bell_states();
        let order = [3, 2, 0, 1];
        let m = order.iter().fold(CMat4::zeros(), |acc, &k| {
            acc + b[k].projector().scale_re(p[k])
        });
        let c = wootters_basis(&DensityMatrix::validate(m).unwrap()).unwrap();
        for k in 0..4 {
            assert!((a.xs[k] - c.xs[k]).max_abs() < 1e-12);
        }
    }

    #[test]
    fn bell_projector() {
        let w = wootters_basis(&DensityMatrix::pure(&bell_states()[0]).unwrap()).unwrap();
        assert!((w.lambdas.0[0] - 1.0).abs() < 1e-12);
        assert!((w.xs[0].dot(&bell_states()[0]).norm() - 1.0).abs() < 1e-12);
        assert!(w.xs[1..].iter().all(|x| x.norm() < 1e-12));
    }

    #[test]
    fn tau_examples() {
        let p = [0.4, 0.3, 0.2, 0.1];
        let ens = eigen_ensemble(&bell_diagonal(p).unwrap());
        let tau = tau_matrix(&ens);
        for i in 0..4 {
            for j in 0..4 {
                let expected = if i == j { p[i] } else { 0.0 };
                assert!((tau.0[(i, j)].norm() - expected).abs() < 1e-14);
            }
        }
        let prod = CVec([
            C64::new(0.6, 0.0),
            C64::new(0.0, 0.8),
            C64::new(0.0, 0.0),
            C64::new(0.0, 0.0),
        ]);
        let tau = tau_matrix(&eigen_ensemble(&DensityMatrix::pure(&prod).unwrap()));
        assert!(tau.0.max_abs() < 1e-15);
    }

    #[test]
    fn concurrence_examples() {
        assert!(concurrence(&DensityMatrix::maximally_mixed()).unwrap() == 0.0);
        let bell = DensityMatrix::pure(&bell_states()[3]).unwrap();
        assert!((concurrence(&bell).unwrap() - 1.0).abs() < 1e-12);
        assert!((concurrence(&werner(0.5).unwrap()).unwrap() - 0.25).abs() < 1e-12);
    }

    #[test]
    fn eof_examples() {
        assert_eq!(eof_from_concurrence(0.0, EntropyBase::Bits), 0.0);
        assert!((eof_from_concurrence(1.0, EntropyBase::Bits) - 1.0).abs() < 1e-15);
        let x: f64 = 0.5 + 0.5 * (15.0f64 / 16.0).sqrt();
        let h = -x * x.log2() - (1.0 - x) * (1.0 - x).log2();
        assert!((eof_from_concurrence(0.25, EntropyBase::Bits) - h).abs() < 1e-15);
        assert!((eof_from_concurrence(1.0, EntropyBase::Nats) - 2f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn pure_entropy_examples() {
        assert_eq!(
            pure_state_entropy(&CVec4::basis(0), EntropyBase::Bits).unwrap(),
            0.0
        );
        let bell = pure_state_entropy(&bell_states()[1], EntropyBase::Bits).unwrap();
        assert!((bell - 1.0).abs() < 1e-14);
        let psi = CVec4::from_real([0.9f64.sqrt(), 0.0, 0.0, 0.1f64.sqrt()]);
        let h = -0.9 * 0.9f64.log2() - 0.1 * 0.1f64.log2();
        assert!((pure_state_entropy(&psi, EntropyBase::Bits).unwrap() - h).abs() < 1e-14);
        assert!(matches!(
            pure_state_entropy(&CVec4::basis(0).scale_re(2.0), EntropyBase::Bits),
            Err(Error::NotNormalized { .. })
        ));
    }

    proptest! {
        #[test]
        fn wootters_invariants(seed in any::<u64>(), rank in 1usize..=4) {
            let rho = sample_random(seed, rank).unwrap();
            let w = wootters_basis(&rho).unwrap();
            prop_assert!(w.reconstruct().dist(rho.matrix()) <= 1e-10);
            prop_assert!(w.xortho_residual() <= 1e-9);
            prop_assert!((w.trace() - 1.0).abs() <= 1e-10);
            prop_assert!(w.u.unitarity_residual() <= 1e-10);
            prop_assert!(w.tau.0.symmetric_residual() <= 1e-10);
            let c = concurrence(&rho).unwrap();
            prop_assert!((w.concurrence() - c).abs() <= 1e-9);
        }

        #[test]
        fn pure_states_match_overlap(seed in any::<u64>()) {
            let rho = sample_random(seed, 1).unwrap();
            let psi = eigen_ensemble(&rho).vs[0];
            prop_assert!((concurrence(&rho).unwrap() - pure_concurrence(&psi)).abs() <= 1e-10);
        }

        #[test]
        fn product_states_have_zero_concurrence(a in prop::collection::vec(-1.0f64..1.0, 8)) {
            let u = CVec([C64::new(a[0], a[1]), C64::new(a[2], a[3])]);
            let v = CVec([C64::new(a[4], a[5]), C64::new(a[6], a[7])]);
            prop_assume!(u.norm() > 1e-3 && v.norm() > 1e-3);
            let psi = u.kron(&v).normalized().unwrap();
            let c = concurrence(&DensityMatrix::pure(&psi).unwrap()).unwrap();
            prop_assert!(c <= 1e-12);
        }

        #[test]
        fn maximally_entangled_have_unit_concurrence(a in prop::collection::vec(-1.0f64..1.0, 8)) {
            // (U⊗I)|Φ⁺⟩ for a random unitary U from normalized quaternions
            let n = (a[0] * a[0] + a[1] * a[1] + a[2] * a[2] + a[3] * a[3]).sqrt();
            prop_assume!(n > 1e-3);
            let (w, x, y, z) = (a[0] / n, a[1] / n, a[2] / n, a[3] / n);
            let u = CMat::<2>([[C64::new(w, z), C64::new(y, x)], [C64::new(-y, x), C64::new(w, -z)]]);
            let psi = u.kron(&CMat::identity()).mul_vec(&bell_states()[0]);
            let c = concurrence(&DensityMatrix::pure(&psi).unwrap()).unwrap();
            prop_assert!((c - 1.0).abs() <= 1e-12);
        }
    }
}
