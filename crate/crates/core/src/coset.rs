//! X/Y matrices of a Wootters basis and the SO(4,c)/SO(4,r) coset
//! parameterization of two-qubit states.
//!
//! With |x′_i⟩ = |x_i⟩/√λ_i as columns, X satisfies Xᵀ(σ_y⊗σ_y)X = I, and
//! since σ_y⊗σ_y = Oᵀη²O the matrix Y = ηOX is complex orthogonal. Local
//! unitaries act on Y by real rotations, so Y modulo SO(4,r) together with
//! the λ_i fixes the orbit.

use std::f64::consts::FRAC_1_SQRT_2;

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matcore::canon::complete_orthonormal;
use crate::matcore::{svd2_real, CMat, CMat2, CMat4, CVec4, RMat2, C64, I, ONE};
use crate::qstate::{eigen_ensemble, sigma_yy, DensityMatrix, SpectrumLambda};
use crate::wootters::{tau_matrix, WoottersDecomposition};

const UNITARY_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CosetParams {
    pub lambdas: [f64; 4],
    pub theta: [f64; 2],
    pub xi: [f64; 2],
    pub phi: [f64; 2],
}

impl CosetParams {
    /// All hyperbolic angles zero.
    pub fn bell_diagonal(lambdas: [f64; 4]) -> Self {
        CosetParams {
            lambdas,
            theta: [0.0; 2],
            xi: [0.0; 2],
            phi: [0.0; 2],
        }
    }

    pub fn validate(&self) -> Result<()> {
        let all = self
            .lambdas
            .iter()
            .chain(&self.theta)
            .chain(&self.xi)
            .chain(&self.phi);
        if all.clone().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        if self.lambdas.iter().any(|&l| l < 0.0) {
            return Err(Error::InvalidParams(format!(
                "negative lambda in {:?}",
                self.lambdas
            )));
        }
        if self.lambdas.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidParams(format!(
                "lambdas not descending: {:?}",
                self.lambdas
            )));
        }
        if self.xi.iter().any(|&x| x < 0.0) {
            return Err(Error::InvalidParams(format!(
                "xi must be non-negative: {:?}",
                self.xi
            )));
        }
        Ok(())
    }
}

/// O of σ_y⊗σ_y = Oᵀη²O.
pub fn o_matrix() -> CMat4 {
    let s = FRAC_1_SQRT_2;
    CMat::from_real([
        [s, 0.0, 0.0, s],
        [0.0, s, s, 0.0],
        [0.0, s, -s, 0.0],
        [s, 0.0, 0.0, -s],
    ])
}

/// η = diag(i, 1, i, 1)
pub fn eta_matrix() -> CMat4 {
    CMat::diag([I, ONE, I, ONE])
}

/// ηO
pub fn eta_o() -> CMat4 {
    eta_matrix() * o_matrix()
}

/// (ηO)⁻¹ = Oᵀη⁻¹
pub fn eta_o_inverse() -> CMat4 {
    o_matrix().transpose() * CMat::diag([-I, ONE, -I, ONE])
}

/// Columns |x′_i⟩ = |x_i⟩/√λ_i.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct XMatrix {
    pub x: CMat4,
}

impl XMatrix {
    /// ‖Xᵀ(σ_y⊗σ_y)X − I‖_max
    pub fn xtx_residual(&self) -> f64 {
        (self.x.transpose() * sigma_yy() * self.x).dist(&CMat4::identity())
    }
}

/// Complex orthogonal matrix Y = ηOX.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct YMatrix {
    pub y: CMat4,
}

impl YMatrix {
    /// ‖YᵀY − I‖_max
    pub fn orthogonality_residual(&self) -> f64 {
        (self.y.transpose() * self.y).dist(&CMat4::identity())
    }
}

pub fn build_x(w: &WoottersDecomposition) -> Result<XMatrix> {
    let mut cols = [CVec4::zeros(); 4];
    for (i, c) in cols.iter_mut().enumerate() {
        *c = w.x_prime(i).ok_or(Error::RankDeficient {
            index: i,
            value: w.lambdas.0[i],
        })?;
    }
    Ok(XMatrix {
        x: CMat::from_columns(&cols),
    })
}

pub fn y_from_x(x: &XMatrix) -> YMatrix {
    YMatrix { y: eta_o() * x.x }
}

pub fn x_from_y(y: &YMatrix) -> XMatrix {
    XMatrix {
        x: eta_o_inverse() * y.y,
    }
}

/// [[cosh t, i sinh t], [−i sinh t, cosh t]], the SO(2,c)/SO(2,r) representative.
pub fn hyperbolic_block(t: f64) -> CMat2 {
    let (c, s) = (C64::new(t.cosh(), 0.0), C64::new(0.0, t.sinh()));
    CMat([[c, s], [-s, c]])
}

/// diag(h(t₁), h(t₂)) acting on the index pairs (1,2) and (3,4).
pub fn pair_block(t: [f64; 2]) -> CMat4 {
    let mut m = CMat4::zeros();
    for (k, &tk) in t.iter().enumerate() {
        let h = hyperbolic_block(tk);
        for i in 0..2 {
            for j in 0..2 {
                m[(2 * k + i, 2 * k + j)] = h[(i, j)];
            }
        }
    }
    m
}

/// [[diag cosh ξ, i diag sinh ξ], [−i diag sinh ξ, diag cosh ξ]]
pub fn xi_block(xi: [f64; 2]) -> CMat4 {
    let mut m = CMat4::zeros();
    for (k, &x) in xi.iter().enumerate() {
        let (c, s) = (C64::new(x.cosh(), 0.0), C64::new(0.0, x.sinh()));
        m[(k, k)] = c;
        m[(k + 2, k + 2)] = c;
        m[(k, k + 2)] = s;
        m[(k + 2, k)] = -s;
    }
    m
}

/// Y = Θ·Ξ·Φ
pub fn y_factor(p: &CosetParams) -> YMatrix {
    YMatrix {
        y: pair_block(p.theta) * xi_block(p.xi) * pair_block(p.phi),
    }
}

/// Y₁ = exp([[0, iB], [−iBᵀ, 0]]) for real 2×2 B, through B = O₁ΣO₂ᵀ:
/// Y₁ = diag(O₁, O₂)·[[cosh Σ, i sinh Σ], [−i sinh Σ, cosh Σ]]·diag(O₁ᵀ, O₂ᵀ).
pub fn y1_from_b(b: &RMat2) -> YMatrix {
    let svd = svd2_real(b);
    let mut outer = CMat4::zeros();
    for i in 0..2 {
        for j in 0..2 {
            outer[(i, j)] = C64::new(svd.o1[i][j], 0.0);
            outer[(i + 2, j + 2)] = C64::new(svd.o2[i][j], 0.0);
        }
    }
    let core = xi_block(svd.d);
    YMatrix {
        y: outer * core * outer.transpose(),
    }
}

/// The four unnormalized |x_i⟩ as printed, each with prefactor √(λ_i/2).
pub fn printed_x(p: &CosetParams) -> [CVec4; 4] {
    let [t1, t2] = p.theta;
    let [x1, x2] = p.xi;
    let [f1, f2] = p.phi;
    let (ct1, st1, ct2, st2) = (t1.cosh(), t1.sinh(), t2.cosh(), t2.sinh());
    let (cx1, sx1, cx2, sx2) = (x1.cosh(), x1.sinh(), x2.cosh(), x2.sinh());
    let (cf1, sf1, cf2, sf2) = (f1.cosh(), f1.sinh(), f2.cosh(), f2.sinh());
    let c = C64::new;
    let pre = p.lambdas.map(|l| (l / 2.0).sqrt());

    let a1 = sx1 * st2 * cf1 + sx2 * ct2 * sf1;
    let b1 = cx1 * ct1 * cf1 + cx2 * st1 * sf1;
    let a2 = sx1 * ct2 * cf1 + sx2 * st2 * sf1;
    let b2 = cx1 * st1 * cf1 + cx2 * ct1 * sf1;
    let v1 = [c(-a1, -b1), c(-a2, -b2), c(a2, -b2), c(a1, -b1)];

    let a1 = cx1 * ct1 * sf1 + cx2 * st1 * cf1;
    let b1 = sx1 * st2 * sf1 + sx2 * ct2 * cf1;
    let a2 = cx1 * st1 * sf1 + cx2 * ct1 * cf1;
    let b2 = sx1 * ct2 * sf1 + sx2 * st2 * cf1;
    let v2 = [c(a1, -b1), c(a2, -b2), c(a2, b2), c(a1, b1)];

    let a1 = sx1 * ct1 * cf2 + sx2 * st1 * sf2;
    let b1 = cx1 * st2 * cf2 + cx2 * ct2 * sf2;
    let a2 = sx1 * st1 * cf2 + sx2 * ct1 * sf2;
    let b2 = cx1 * ct2 * cf2 + cx2 * st2 * sf2;
    let v3 = [c(a1, -b1), c(a2, -b2), c(a2, b2), c(a1, b1)];

    let a1 = cx1 * st2 * sf2 + cx2 * ct2 * cf2;
    let b1 = sx1 * ct1 * sf2 + sx2 * st1 * cf2;
    let a2 = cx1 * ct2 * sf2 + cx2 * st2 * cf2;
    let b2 = sx1 * st1 * sf2 + sx2 * ct1 * cf2;
    let v4 = [c(a1, b1), c(a2, b2), c(-a2, b2), c(-a1, b1)];

    let vs = [v1, v2, v3, v4];
    std::array::from_fn(|i| CVec4::from_fn(|k| vs[i][k]).scale_re(pre[i]))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneratedState {
    pub rho: DensityMatrix,
    /// The generated |x_i⟩/√T with λ_i/T.
    pub wootters: WoottersDecomposition,
    /// T = Σ⟨x_i|x_i⟩ before normalization.
    pub trace_factor: f64,
}

/// ρ = Σ|x_i⟩⟨x_i| / T from the printed component formulas.
pub fn coset_generate(p: &CosetParams) -> Result<GeneratedState> {
    p.validate()?;
    let raw = printed_x(p);
    let t: f64 = raw.iter().map(|x| x.norm_sqr()).sum();
    if t <= 0.0 || p.lambdas.iter().all(|&l| l == 0.0) {
        return Err(Error::ZeroState);
    }
    let xs = raw.map(|x| x.scale_re(1.0 / t.sqrt()));
    let m = xs.iter().fold(CMat4::zeros(), |acc, x| acc + x.projector());
    let rho = DensityMatrix::validate(m.hermitian_part())?;

    // |x_i⟩ = Σ_j U*_ij|v_j⟩ over the eigen-ensemble; zero-μ columns are
    // an orthonormal completion.
    let ens = eigen_ensemble(&rho);
    let cols: Vec<CVec4> = (0..4)
        .take_while(|&j| ens.mus[j] > 0.0)
        .map(|j| CVec4::from_fn(|i| (ens.vs[j].dot(&xs[i]) / ens.mus[j]).conj()))
        .collect();
    let cols = complete_orthonormal(&cols);
    let u = CMat::from_fn(|i, j| cols[j][i]);

    Ok(GeneratedState {
        rho,
        wootters: WoottersDecomposition {
            xs,
            lambdas: SpectrumLambda(p.lambdas.map(|l| l / t)),
            u,
            tau: tau_matrix(&ens),
        },
        trace_factor: t,
    })
}

fn check_su2(u: &CMat2) -> Result<()> {
    if !u.is_finite() {
        return Err(Error::NonFinite);
    }
    let residual = u.unitarity_residual().max((u.det() - ONE).norm());
    if residual > UNITARY_TOL {
        return Err(Error::NotSpecialUnitary { residual });
    }
    Ok(())
}

/// ρ′ = (U₁⊗U₂)ρ(U₁⊗U₂)†
pub fn local_unitary_action(rho: &DensityMatrix, u1: &CMat2, u2: &CMat2) -> Result<DensityMatrix> {
    check_su2(u1)?;
    check_su2(u2)?;
    let u = u1.kron(u2);
    DensityMatrix::validate((u * *rho.matrix() * u.adjoint()).hermitian_part())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct So4Image {
    /// Real part of (ηO)(U₁⊗U₂)(ηO)⁻¹.
    pub r: [[f64; 4]; 4],
    pub max_imag: f64,
}

impl So4Image {
    /// ‖RᵀR − I‖_max
    pub fn orthogonality_residual(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..4 {
            for j in 0..4 {
                let dot: f64 = (0..4).map(|k| self.r[k][i] * self.r[k][j]).sum();
                worst = worst.max((dot - if i == j { 1.0 } else { 0.0 }).abs());
            }
        }
        worst
    }

    pub fn det(&self) -> f64 {
        CMat4::from_real(self.r).det().re
    }
}

/// Image of U₁⊗U₂ in SO(4,r): Y′ = R·Y.
pub fn so4r_image(u1: &CMat2, u2: &CMat2) -> Result<So4Image> {
    check_su2(u1)?;
    check_su2(u2)?;
    Ok(conjugate_to_real(&u1.kron(u2)))
}

/// (ηO)·M·(ηO)⁻¹ split into real part and largest imaginary entry.
pub fn conjugate_to_real(m: &CMat4) -> So4Image {
    let c = eta_o() * *m * eta_o_inverse();
    let mut r = [[0.0; 4]; 4];
    let mut max_imag = 0.0f64;
    for i in 0..4 {
        for j in 0..4 {
            r[i][j] = c[(i, j)].re;
            max_imag = max_imag.max(c[(i, j)].im.abs());
        }
    }
    So4Image { r, max_imag }
}

/// Haar-random SU(2) from a normalized Gaussian quaternion.
pub fn haar_su2<R: Rng + ?Sized>(rng: &mut R) -> CMat2 {
    loop {
        let q: [f64; 4] = std::array::from_fn(|_| rng.sample(StandardNormal));
        let n = q.iter().map(|v| v * v).sum::<f64>().sqrt();
        if n < 1e-12 {
            continue;
        }
        let [a, b, c, d] = q.map(|v| v / n);
        let alpha = C64::new(a, b);
        let beta = C64::new(c, d);
        return CMat([[alpha, -beta.conj()], [beta, alpha.conj()]]);
    }
}

/// λ uniform on the simplex (sorted descending); angles in [−2, 2], ξ in [0, 2].
pub fn random_params<R: Rng + ?Sized>(rng: &mut R) -> CosetParams {
    let e: [f64; 4] = std::array::from_fn(|_| -rng.gen_range(f64::EPSILON..1.0f64).ln());
    let s: f64 = e.iter().sum();
    let mut lambdas = e.map(|v| v / s);
    lambdas.sort_by(|a, b| b.total_cmp(a));
    CosetParams {
        lambdas,
        theta: [rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)],
        xi: [rng.gen_range(0.0..2.0), rng.gen_range(0.0..2.0)],
        phi: [rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)],
    }
}

/// Generator of local unitaries: 𝒰₁⊗I + I⊗𝒰₂ for anti-Hermitian traceless 𝒰_k.
pub fn local_generator(g1: &CMat2, g2: &CMat2) -> CMat4 {
    g1.kron(&CMat2::identity()) + CMat2::identity().kron(g2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::ZERO;
    use crate::qstate::{bell_diagonal, bell_states, lambda_spectrum, sample_random};
    use crate::wootters::{concurrence, wootters_basis};
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// exp(A) by scaling and squaring a truncated Taylor series.
    fn expm(a: &CMat4) -> CMat4 {
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

    fn rel_dist(a: &CMat4, b: &CMat4) -> f64 {
        a.dist(b) / b.max_abs().max(1.0)
    }

    #[test]
    fn sigma_yy_factorization_is_exact() {
        let o = o_matrix();
        let eta = eta_matrix();
        assert!((o.transpose() * eta * eta * o).dist(&sigma_yy()) <= 1e-15);
        assert!((eta_o() * eta_o_inverse()).dist(&CMat4::identity()) <= 1e-15);
    }

    #[test]
    fn x_equal_to_inverse_gives_identity_y() {
        let y = y_from_x(&XMatrix { x: eta_o_inverse() });
        assert!(y.y.dist(&CMat4::identity()) < 1e-15);
    }

    #[test]
    fn zero_params_is_identity() {
        assert_eq!(
            y_factor(&CosetParams::bell_diagonal([0.25; 4])).y,
            CMat4::identity()
        );
    }

    #[test]
    fn xi_alone_is_the_middle_block() {
        let s = 0.7;
        let p = CosetParams {
            xi: [s, s],
            ..CosetParams::bell_diagonal([0.25; 4])
        };
        let y = y_factor(&p).y;
        let (c, sh) = (C64::new(s.cosh(), 0.0), C64::new(0.0, s.sinh()));
        let expected = CMat([
            [c, ZERO, sh, ZERO],
            [ZERO, c, ZERO, sh],
            [-sh, ZERO, c, ZERO],
            [ZERO, -sh, ZERO, c],
        ]);
        assert!(y.dist(&expected) < 1e-15);
    }

    #[test]
    fn bell_example_at_zero_params() {
        let p = [0.5, 0.2, 0.2, 0.1];
        let g = coset_generate(&CosetParams::bell_diagonal(p)).unwrap();
        assert!((g.trace_factor - 1.0).abs() < 1e-15);
        assert!(g.rho.matrix().dist(bell_diagonal(p).unwrap().matrix()) < 1e-15);
        let b = bell_states();
        let expected = [
            b[0].scale(C64::new(0.0, -p[0].sqrt())),
            b[1].scale_re(p[1].sqrt()),
            b[2].scale(C64::new(0.0, -p[2].sqrt())),
            b[3].scale_re(p[3].sqrt()),
        ];
        for (x, e) in g.wootters.xs.iter().zip(expected) {
            assert!((*x - e).max_abs() < 1e-15);
        }
        let l = lambda_spectrum(&g.rho).unwrap();
        for (a, b) in l.0.iter().zip(p) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn single_lambda_is_a_bell_state() {
        let g = coset_generate(&CosetParams::bell_diagonal([1.0, 0.0, 0.0, 0.0])).unwrap();
        let psi = bell_states()[0];
        assert!((g.rho.matrix().sandwich(&psi, &psi).re - 1.0).abs() < 1e-15);
        assert!(g.wootters.u.unitarity_residual() < 1e-12);
    }

    #[test]
    fn param_errors() {
        let z = CosetParams::bell_diagonal([0.0; 4]);
        assert!(matches!(coset_generate(&z), Err(Error::ZeroState)));
        let bad = CosetParams {
            xi: [-0.1, 0.0],
            ..CosetParams::bell_diagonal([0.25; 4])
        };
        assert!(matches!(coset_generate(&bad), Err(Error::InvalidParams(_))));
        let unsorted = CosetParams::bell_diagonal([0.1, 0.2, 0.3, 0.4]);
        assert!(matches!(
            coset_generate(&unsorted),
            Err(Error::InvalidParams(_))
        ));
    }

    #[test]
    fn params_json_shape() {
        let text =
            r#"{"lambdas":[0.4,0.3,0.2,0.1],"theta":[0.1,0.2],"xi":[0.3,0.4],"phi":[0.5,0.6]}"#;
        let p: CosetParams = serde_json::from_str(text).unwrap();
        assert_eq!(p.theta, [0.1, 0.2]);
        assert!(serde_json::from_str::<CosetParams>(r#"{"lambdas":[1,0,0,0]}"#).is_err());
    }

    #[test]
    fn rank_deficient_x_rejected() {
        let rho = sample_random(3, 3).unwrap();
        let w = wootters_basis(&rho).unwrap();
        assert!(matches!(
            build_x(&w),
            Err(Error::RankDeficient { index: 3, .. })
        ));
    }

    #[test]
    fn so4r_identity_and_generator() {
        let id = so4r_image(&CMat2::identity(), &CMat2::identity()).unwrap();
        assert!(CMat4::from_real(id.r).dist(&CMat4::identity()) < 1e-15);
        let half_z = CMat([[C64::new(0.0, 0.5), ZERO], [ZERO, C64::new(0.0, -0.5)]]);
        let img = conjugate_to_real(&local_generator(&half_z, &CMat2::zeros()));
        assert!(img.max_imag <= 1e-12);
        let sym = (0..4)
            .flat_map(|i| (0..4).map(move |j| (i, j)))
            .map(|(i, j)| (img.r[i][j] + img.r[j][i]).abs())
            .fold(0.0, f64::max);
        assert!(sym <= 1e-12);
    }

    #[test]
    fn non_special_unitary_rejected() {
        let phase = CMat2::identity().scale(I);
        let rho = DensityMatrix::maximally_mixed();
        assert!(matches!(
            local_unitary_action(&rho, &phase, &CMat2::identity()),
            Err(Error::NotSpecialUnitary { .. })
        ));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn printed_x_match_y_construction(seed in any::<u64>()) {
            let p = random_params(&mut ChaCha8Rng::seed_from_u64(seed));
            let y = y_factor(&p);
            let sqrt_l = CMat4::diag_real(p.lambdas.map(f64::sqrt));
            let from_y = eta_o_inverse() * y.y * sqrt_l;
            let printed = CMat::from_columns(&printed_x(&p));
            prop_assert!(rel_dist(&printed, &from_y) <= 1e-12);
        }

        #[test]
        fn y_factor_is_orthogonal_and_matches_exponentials(seed in any::<u64>()) {
            let p = random_params(&mut ChaCha8Rng::seed_from_u64(seed));
            let y = y_factor(&p);
            prop_assert!(y.orthogonality_residual() <= 1e-10 * y.y.max_abs().powi(2).max(1.0));
            // each block is the exponential of its generator
            let gen_pair = |t: [f64; 2]| {
                let mut g = CMat4::zeros();
                for k in 0..2 {
                    g[(2 * k, 2 * k + 1)] = C64::new(0.0, t[k]);
                    g[(2 * k + 1, 2 * k)] = C64::new(0.0, -t[k]);
                }
                expm(&g)
            };
            let mut gx = CMat4::zeros();
            for k in 0..2 {
                gx[(k, k + 2)] = C64::new(0.0, p.xi[k]);
                gx[(k + 2, k)] = C64::new(0.0, -p.xi[k]);
            }
            let assembled = gen_pair(p.theta) * expm(&gx) * gen_pair(p.phi);
            prop_assert!(rel_dist(&y.y, &assembled) <= 1e-12);
        }

        #[test]
        fn y1_svd_route_matches_exponential(b in prop::array::uniform4(-1.5f64..1.5)) {
            let b = [[b[0], b[1]], [b[2], b[3]]];
            let mut g = CMat4::zeros();
            for i in 0..2 {
                for j in 0..2 {
                    g[(i, j + 2)] = C64::new(0.0, b[i][j]);
                    g[(j + 2, i)] = C64::new(0.0, -b[i][j]);
                }
            }
            let y1 = y1_from_b(&b);
            prop_assert!(rel_dist(&y1.y, &expm(&g)) <= 1e-12);
            prop_assert!(y1.orthogonality_residual() <= 1e-10 * y1.y.max_abs().powi(2).max(1.0));
        }

        #[test]
        fn generated_spectrum_is_rescaled_lambdas(seed in any::<u64>()) {
            let p = random_params(&mut ChaCha8Rng::seed_from_u64(seed));
            let g = coset_generate(&p).unwrap();
            let l = lambda_spectrum(&g.rho).unwrap();
            for (a, b) in l.0.iter().zip(p.lambdas) {
                prop_assert!((a - b / g.trace_factor).abs() <= 1e-8);
            }
            prop_assert!(g.wootters.reconstruct().dist(g.rho.matrix()) <= 1e-12);
            prop_assert!(g.wootters.xortho_residual() <= 1e-9);
            prop_assert!(g.wootters.u.unitarity_residual() <= 1e-9);
        }

        #[test]
        fn x_and_y_of_random_states(seed in any::<u64>()) {
            let rho = sample_random(seed, 4).unwrap();
            let x = build_x(&wootters_basis(&rho).unwrap()).unwrap();
            prop_assert!(x.xtx_residual() <= 1e-9);
            let y = y_from_x(&x);
            prop_assert!(y.orthogonality_residual() <= 1e-9);
            prop_assert!(x_from_y(&y).x.dist(&x.x) <= 1e-12 * x.x.max_abs().max(1.0));
        }

        #[test]
        fn local_orbit_invariants(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let rho = sample_random(seed, 4).unwrap();
            let (u1, u2) = (haar_su2(&mut rng), haar_su2(&mut rng));
            let r2 = local_unitary_action(&rho, &u1, &u2).unwrap();
            prop_assert!((concurrence(&r2).unwrap() - concurrence(&rho).unwrap()).abs() <= 1e-9);
            let (l1, l2) = (lambda_spectrum(&rho).unwrap(), lambda_spectrum(&r2).unwrap());
            for (a, b) in l1.0.iter().zip(l2.0) {
                prop_assert!((a - b).abs() <= 1e-9);
            }
            let x = build_x(&wootters_basis(&rho).unwrap()).unwrap();
            let xp = XMatrix { x: u1.kron(&u2) * x.x };
            prop_assert!(xp.xtx_residual() <= 1e-9);

            let img = so4r_image(&u1, &u2).unwrap();
            prop_assert!(img.max_imag <= 1e-10);
            prop_assert!(img.orthogonality_residual() <= 1e-10);
            prop_assert!((img.det() - 1.0).abs() <= 1e-10);
            let (v1, v2) = (haar_su2(&mut rng), haar_su2(&mut rng));
            let prod = so4r_image(&(u1 * v1), &(u2 * v2)).unwrap();
            let composed = CMat4::from_real(img.r) * CMat4::from_real(so4r_image(&v1, &v2).unwrap().r);
            prop_assert!(CMat4::from_real(prod.r).dist(&composed) <= 1e-9);
        }
    }
}
