//! Dense linear algebra on fixed 2×2 / 4×4 complex matrices.

pub mod canon;
pub mod dual;
pub mod eig;
pub mod mat;
pub mod svd;
pub mod takagi;

pub use dual::{dual_basis, invert_small, restricted_inverse, DualBasis, RestrictedInverse};
pub use eig::{
    herm_eig, hermitian_pinv, hermitian_pinv_rank, psd_sqrt, HermEig, HERMITIAN_TOL, PSD_TOL,
};
pub use mat::{sum_projectors, CMat, CMat2, CMat4, CVec, CVec2, CVec4, C64, I, ONE, ZERO};
pub use svd::{svd2_real, RMat2, Svd2};
pub use takagi::{takagi, TakagiFactorization};
