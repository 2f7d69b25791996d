use serde::{Deserialize, Serialize};

use crate::matcore::eig::herm_eig_unchecked;
use crate::matcore::{CMat, CMat4};
use crate::qstate::DensityMatrix;

pub const PPT_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PptResult {
    pub separable: bool,
    pub min_pt_eigenvalue: f64,
}

/// Transpose over the second qubit: ⟨ij|ρ^{T_B}|kl⟩ = ⟨il|ρ|kj⟩.
pub fn partial_transpose(m: &CMat4) -> CMat4 {
    CMat::from_fn(|a, b| {
        let (i, j) = (a / 2, a % 2);
        let (k, l) = (b / 2, b % 2);
        m[(2 * i + l, 2 * k + j)]
    })
}

/// Peres–Horodecki test; necessary and sufficient for two qubits.
pub fn ppt_check(rho: &DensityMatrix) -> PptResult {
    ppt_check_matrix(rho.matrix())
}

pub fn ppt_check_matrix(m: &CMat4) -> PptResult {
    let pt = partial_transpose(&m.hermitian_part());
    let min = herm_eig_unchecked(&pt).min_value();
    PptResult {
        separable: min >= -PPT_TOL,
        min_pt_eigenvalue: min,
    }
}
