use serde::{Deserialize, Serialize};

use super::{ppt_check_matrix, LSDecomposition};
use crate::matcore::eig::herm_eig_unchecked;
use crate::matcore::CVec4;
use crate::qstate::DensityMatrix;

const PSD_FLOOR: f64 = -1e-10;

/// ρ = λ′ρ′_sep + (1−λ′)|ψ′⟩⟨ψ′| obtained by mixing ρ_sep with ρ.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlternativeSplit {
    pub t: f64,
    pub weight: f64,
    pub sep: crate::matcore::CMat4,
    pub pure: Option<CVec4>,
    /// ρ′_sep PSD and PPT, remainder PSD of rank ≤ 1.
    pub admissible: bool,
    pub min_pt_eigenvalue: f64,
}

/// ρ′_sep = (1−t)ρ_sep + tρ. Writing a = 1 − t(1−λ), ρ = (λ/a)ρ′_sep +
/// (1−λ)(1−t)/a·|ψ⟩⟨ψ|, so λ′ = λ/a.
pub fn mixing_split(rho: &DensityMatrix, d: &LSDecomposition, t: f64) -> AlternativeSplit {
    let a = 1.0 - t * (1.0 - d.weight);
    let weight = d.weight / a;
    let sep = d.sep.matrix().scale_re(1.0 - t) + rho.matrix().scale_re(t);
    let sep_eig = herm_eig_unchecked(&sep.hermitian_part());
    let ppt = ppt_check_matrix(&sep);

    let rem = (*rho.matrix() - sep.scale_re(weight)).hermitian_part();
    let rem_eig = herm_eig_unchecked(&rem);
    let scale = rem_eig.values[0].abs().max(1e-30);
    let rank_ok = rem_eig.values[1].abs() <= 1e-9 * scale.max(1.0);
    let pure = (rem_eig.values[0] > 1e-12).then_some(rem_eig.vectors[0]);

    AlternativeSplit {
        t,
        weight,
        sep,
        pure,
        admissible: sep_eig.min_value() >= PSD_FLOOR
            && ppt.min_pt_eigenvalue >= PSD_FLOOR
            && rem_eig.min_value() >= PSD_FLOOR
            && rank_ok,
        min_pt_eigenvalue: ppt.min_pt_eigenvalue,
    }
}
