//! Optimality certificate: the LS maximality conditions evaluated on the
//! product ensemble {|z_α⟩}.
//!
//! The pieces are ρ_α = Λ̄_α P_α + (1−λ)|ψ⟩⟨ψ| and
//! ρ_αβ = Λ̄_α P_α + Λ̄_β P_β + (1−λ)|ψ⟩⟨ψ| with Λ̄_α = λ⟨z_α|z_α⟩, so that
//! ρ = Σ_α Λ̄_α P_α + (1−λ)|ψ⟩⟨ψ|. Each restricted inverse is computed twice:
//! numerically (eigen pseudo-inverse) and through the dual basis.

use serde::{Deserialize, Serialize};

use super::{classify, ppt_check, LSDecomposition, RankClass};
use crate::error::{Error, Result};
use crate::matcore::{
    dual_basis, hermitian_pinv_rank, restricted_inverse, CMat4, CVec4, C64, ZERO,
};
use crate::qstate::DensityMatrix;
use crate::wootters::wootters_basis;

/// Tolerance ladder: construction identities, decomposition identities,
/// optimality numerics (two chained inversions), PPT clamp.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub construction: f64,
    pub decomposition: f64,
    pub optimality: f64,
    pub ppt: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            construction: 1e-10,
            decomposition: 1e-9,
            optimality: 1e-8,
            ppt: 1e-10,
        }
    }
}

impl Tolerances {
    pub fn uniform(tol: f64) -> Self {
        Tolerances {
            construction: tol,
            decomposition: tol,
            optimality: tol,
            ppt: tol,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub predicted: f64,
    pub measured: f64,
    pub residual: f64,
    pub tol: f64,
    pub passed: bool,
}

impl Check {
    fn new(name: &str, predicted: f64, measured: f64, residual: f64, tol: f64) -> Self {
        Check {
            name: name.to_string(),
            predicted,
            measured,
            residual,
            tol,
            passed: residual <= tol,
        }
    }
}

/// Condition on ρ_α: ⟨e_α|ρ_α⁻¹|e_α⟩⁻¹ = Λ̄_α.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SingleRecord {
    pub alpha: usize,
    pub lambda: f64,
    pub measured: f64,
    /// Numeric pseudo-inverse vs dual-basis restricted inverse.
    pub dual_residual: f64,
    pub residual: f64,
    pub passed: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PairBranch {
    /// {e_α, e_β, ψ} linearly independent.
    Independent,
    /// ψ ∝ z_α + z_β; closed forms with Γ.
    Dependent,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairRecord {
    pub alpha: usize,
    pub beta: usize,
    pub branch: PairBranch,
    pub lambda_alpha: f64,
    pub lambda_beta: f64,
    /// Independent: ⟨e_α|ρ_αβ⁻¹|e_β⟩. Dependent: ⟨z_α|ρ_αβ⁻¹|z_β⟩.
    #[serde(with = "crate::io::complex")]
    pub cross_term: C64,
    /// Residual of the matrix elements against their predicted values.
    pub element_residual: f64,
    pub gamma: Option<f64>,
    /// Weights Eq. (Lambda12) should return.
    pub lambda12_expected: [f64; 2],
    pub lambda12: [f64; 2],
    /// Eq. (Lambda12) on normalized product vectors (diagnostic only).
    pub normalized_lemma: [f64; 2],
    pub dual_residual: f64,
    pub residual: f64,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OptimalityReport {
    pub rank_class: RankClass,
    pub tolerances: Tolerances,
    pub consistency: Vec<Check>,
    pub single: Vec<SingleRecord>,
    pub pairwise: Vec<PairRecord>,
    pub verdict: bool,
    pub max_residual: f64,
}

impl OptimalityReport {
    pub fn failures(&self) -> Vec<String> {
        let mut out: Vec<String> = self
            .consistency
            .iter()
            .filter(|c| !c.passed)
            .map(|c| format!("{}: residual {:.3e} > {:.1e}", c.name, c.residual, c.tol))
            .collect();
        out.extend(
            self.single
                .iter()
                .filter(|s| !s.passed)
                .map(|s| format!("single {}: residual {:.3e}", s.alpha + 1, s.residual)),
        );
        out.extend(self.pairwise.iter().filter(|p| !p.passed).map(|p| {
            format!(
                "pair ({},{}): residual {:.3e}",
                p.alpha + 1,
                p.beta + 1,
                p.residual
            )
        }));
        out
    }
}

pub fn verify_optimality(rho: &DensityMatrix, d: &LSDecomposition) -> Result<OptimalityReport> {
    verify_optimality_with(rho, d, Tolerances::default())
}

pub fn verify_optimality_with(
    rho: &DensityMatrix,
    d: &LSDecomposition,
    tol: Tolerances,
) -> Result<OptimalityReport> {
    let actual = classify(rho)?;
    if actual != d.rank_class {
        return Err(Error::RankMismatch {
            claimed: d.rank_class.to_string(),
            actual: actual.to_string(),
        });
    }

    let mut consistency = consistency_checks(rho, d, &tol)?;
    let groups = merge_groups(d);
    let mut single = Vec::new();
    let mut pairwise = Vec::new();

    if d.rank_class == RankClass::Pure {
        consistency.extend(pure_checks(d, &tol));
    } else {
        let pure = d.pure.map(|psi| (psi, 1.0 - d.weight));
        for g in &groups {
            single.push(single_check(g, pure, &tol));
        }
        for (a, ga) in groups.iter().enumerate() {
            for gb in &groups[a + 1..] {
                let dependent =
                    pure.is_some() && is_dependent_pair(d.rank_class, ga.index, gb.index);
                pairwise.push(if dependent {
                    dependent_pair(d, ga, gb, &tol)
                } else {
                    independent_pair(ga, gb, pure, &tol)
                });
            }
        }
    }

    let verdict = consistency.iter().all(|c| c.passed)
        && single.iter().all(|s| s.passed)
        && pairwise.iter().all(|p| p.passed);
    let max_residual = consistency
        .iter()
        .map(|c| c.residual)
        .chain(single.iter().map(|s| s.residual))
        .chain(pairwise.iter().map(|p| p.residual))
        .fold(0.0, f64::max);
    Ok(OptimalityReport {
        rank_class: d.rank_class,
        tolerances: tol,
        consistency,
        single,
        pairwise,
        verdict,
        max_residual,
    })
}

fn consistency_checks(
    rho: &DensityMatrix,
    d: &LSDecomposition,
    tol: &Tolerances,
) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let rec = d.reconstruct().dist(rho.matrix());
    out.push(Check::new(
        "reconstruction",
        0.0,
        rec,
        rec,
        tol.decomposition,
    ));
    let wid = d.weight_identity_residual();
    out.push(Check::new(
        "weight_identity",
        0.0,
        wid,
        wid,
        tol.construction,
    ));
    let zs = d.z_sum_residual();
    out.push(Check::new("z_sum", 0.0, zs, zs, tol.decomposition));
    let zc = d.z_concurrence();
    out.push(Check::new("z_concurrence", 0.0, zc, zc, tol.decomposition));

    // Boundary property from an independent Wootters analysis of ρ_sep.
    let gap = wootters_basis(&d.sep)?.lambdas.signed_gap();
    let gap_res = match d.rank_class {
        RankClass::Separable => gap.max(0.0),
        _ => gap.abs(),
    };
    out.push(Check::new(
        "boundary_gap",
        0.0,
        gap,
        gap_res,
        tol.optimality,
    ));

    let ppt = ppt_check(&d.sep);
    out.push(Check::new(
        "sep_ppt",
        0.0,
        ppt.min_pt_eigenvalue,
        (-ppt.min_pt_eigenvalue).max(0.0),
        tol.ppt,
    ));
    Ok(out)
}

/// Pure input: λ = 0, so every Λ̄ vanishes; condition a) requires the
/// product vector to lie outside R(ρ_α) = span{ψ}.
fn pure_checks(d: &LSDecomposition, tol: &Tolerances) -> Vec<Check> {
    let mut out = vec![Check::new(
        "zero_weight",
        0.0,
        d.weight,
        d.weight.abs(),
        tol.construction,
    )];
    if let (Some(psi), Some(e)) = (d.pure, d.zs[0].normalized()) {
        let outside = (e - psi.scale(psi.dot(&e))).norm();
        let res = if outside > tol.optimality { 0.0 } else { 1.0 };
        out.push(Check::new("outside_range", 1.0, outside, res, 0.5));
    }
    out
}

/// One projector of ρ_sep after merging coincident |z⟩'s.
struct Group {
    /// Index of the representative |z⟩.
    index: usize,
    z: CVec4,
    e: CVec4,
    /// Λ̄ = λ Σ⟨z|z⟩ over the group.
    lambda: f64,
    /// W with W|z⟩⟨z| = Λ̄ P.
    w: f64,
}

fn merge_groups(d: &LSDecomposition) -> Vec<Group> {
    let mut groups: Vec<Group> = Vec::new();
    for (i, z) in d.zs.iter().enumerate() {
        let n = z.norm_sqr();
        if n <= 1e-24 {
            continue;
        }
        let e = z.scale_re(1.0 / n.sqrt());
        match groups.iter_mut().find(|g| g.e.dot(&e).norm() >= 1.0 - 1e-9) {
            Some(g) => g.lambda += d.weight * n,
            None => groups.push(Group {
                index: i,
                z: *z,
                e,
                lambda: d.weight * n,
                w: 0.0,
            }),
        }
    }
    for g in &mut groups {
        g.w = g.lambda / g.z.norm_sqr();
    }
    groups
}

fn is_dependent_pair(class: RankClass, a: usize, b: usize) -> bool {
    match class {
        RankClass::Rank3 => matches!((a, b), (0, 3) | (1, 2)),
        RankClass::Rank2 => (a, b) == (0, 2),
        _ => false,
    }
}

/// Numeric and dual-basis inverses of Σ a_ij |v_i⟩⟨v_j|; returns the
/// numeric one and the max-norm discrepancy relative to its scale.
fn restricted_pair(vs: &[CVec4], a: &[Vec<C64>]) -> (CMat4, f64) {
    let mut m = CMat4::zeros();
    for (i, vi) in vs.iter().enumerate() {
        for (j, vj) in vs.iter().enumerate() {
            m += vi.outer(vj).scale(a[i][j]);
        }
    }
    let numeric = match hermitian_pinv_rank(&m.hermitian_part(), vs.len()) {
        Ok(p) => p,
        Err(_) => return (CMat4::zeros(), f64::INFINITY),
    };
    let dual = dual_basis(vs).and_then(|b| restricted_inverse(a, &b));
    let residual = match dual {
        Ok(r) => numeric.dist(&r.operator) / r.operator.max_abs().max(1.0),
        Err(_) => f64::INFINITY,
    };
    (numeric, residual)
}

fn diag_coeffs(ws: &[f64]) -> Vec<Vec<C64>> {
    (0..ws.len())
        .map(|i| {
            (0..ws.len())
                .map(|j| if i == j { C64::new(ws[i], 0.0) } else { ZERO })
                .collect()
        })
        .collect()
}

fn single_check(g: &Group, pure: Option<(CVec4, f64)>, tol: &Tolerances) -> SingleRecord {
    let (vs, ws) = match pure {
        Some((psi, p)) if p > 0.0 => (vec![g.e, psi], vec![g.lambda, p]),
        _ => (vec![g.e], vec![g.lambda]),
    };
    let (inv, dual_residual) = restricted_pair(&vs, &diag_coeffs(&ws));
    let measured = 1.0 / inv.sandwich(&g.e, &g.e).re;
    let residual = (measured - g.lambda).abs().max(dual_residual);
    SingleRecord {
        alpha: g.index,
        lambda: g.lambda,
        measured,
        dual_residual,
        residual,
        passed: residual <= tol.optimality,
    }
}

/// Eq. (Lambda12): weights from the 2×2 block m of a restricted inverse.
fn lambda12(m: [[C64; 2]; 2]) -> [f64; 2] {
    let (maa, mbb, mab) = (m[0][0].re, m[1][1].re, m[0][1].norm());
    let den = maa * mbb - mab * mab;
    [(mbb - mab) / den, (maa - mab) / den]
}

fn block(inv: &CMat4, a: &CVec4, b: &CVec4) -> [[C64; 2]; 2] {
    [
        [inv.sandwich(a, a), inv.sandwich(a, b)],
        [inv.sandwich(b, a), inv.sandwich(b, b)],
    ]
}

fn independent_pair(
    ga: &Group,
    gb: &Group,
    pure: Option<(CVec4, f64)>,
    tol: &Tolerances,
) -> PairRecord {
    let (vs, ws) = match pure {
        Some((psi, p)) if p > 0.0 => (vec![ga.e, gb.e, psi], vec![ga.lambda, gb.lambda, p]),
        _ => (vec![ga.e, gb.e], vec![ga.lambda, gb.lambda]),
    };
    let (inv, dual_residual) = restricted_pair(&vs, &diag_coeffs(&ws));
    let m = block(&inv, &ga.e, &gb.e);
    let cross_rel = m[0][1].norm() / (m[0][0].re * m[1][1].re).abs().sqrt();
    let diag = (1.0 / m[0][0].re - ga.lambda)
        .abs()
        .max((1.0 / m[1][1].re - gb.lambda).abs());
    let l12 = lambda12(m);
    let l12_res = (l12[0] - ga.lambda).abs().max((l12[1] - gb.lambda).abs());
    let residual = cross_rel.max(diag).max(l12_res).max(dual_residual);
    PairRecord {
        alpha: ga.index,
        beta: gb.index,
        branch: PairBranch::Independent,
        lambda_alpha: ga.lambda,
        lambda_beta: gb.lambda,
        cross_term: m[0][1],
        element_residual: cross_rel.max(diag),
        gamma: None,
        lambda12_expected: [ga.lambda, gb.lambda],
        lambda12: l12,
        normalized_lemma: l12,
        dual_residual,
        residual: if residual.is_nan() {
            f64::INFINITY
        } else {
            residual
        },
        passed: residual <= tol.optimality,
    }
}

/// Rank-deficient pair with |ψ⟩ = κ(|z_α⟩ + |z_β⟩). In the basis of the
/// unnormalized z's, ρ_αβ = W_α|z_α⟩⟨z_α| + W_β|z_β⟩⟨z_β| + g|u⟩⟨u| with
/// u = z_α + z_β and g = (1−λ)|κ|²; its restricted inverse has elements
/// (W_β+g)/Γ, (W_α+g)/Γ, −g/Γ with Γ = W_αW_β + (W_α+W_β)g.
fn dependent_pair(d: &LSDecomposition, ga: &Group, gb: &Group, tol: &Tolerances) -> PairRecord {
    let psi = d.pure.expect("entangled branch has a pure part");
    let p = 1.0 - d.weight;
    let [l1, l2, l3, _] = d.lambdas.0;
    let spread = if d.rank_class == RankClass::Rank3 {
        l2 + l3
    } else {
        l2
    };
    let g = p * d.weight * l1 / (spread * d.x1.norm_sqr());
    let (wa, wb) = (ga.w, gb.w);
    let gamma = wa * wb + (wa + wb) * g;

    // ρ_αβ from its defining pieces; the closed form enters only as prediction.
    let rho_ab = ga.e.projector().scale_re(ga.lambda)
        + gb.e.projector().scale_re(gb.lambda)
        + psi.projector().scale_re(p);
    let (inv, mut dual_residual) = match hermitian_pinv_rank(&rho_ab.hermitian_part(), 2) {
        Ok(inv) => (inv, 0.0),
        Err(_) => (CMat4::zeros(), f64::INFINITY),
    };
    let a = vec![
        vec![C64::new(wa + g, 0.0), C64::new(g, 0.0)],
        vec![C64::new(g, 0.0), C64::new(wb + g, 0.0)],
    ];
    match dual_basis(&[ga.z, gb.z]).and_then(|b| restricted_inverse(&a, &b)) {
        Ok(r) => {
            dual_residual = dual_residual.max(inv.dist(&r.operator) / r.operator.max_abs().max(1.0))
        }
        Err(_) => dual_residual = f64::INFINITY,
    }

    let m = block(&inv, &ga.z, &gb.z);
    let pred = [(wb + g) / gamma, -g / gamma, (wa + g) / gamma];
    let meas = [m[0][0], m[0][1], m[1][1]];
    let element_residual = pred
        .iter()
        .zip(meas)
        .map(|(&p, m)| (m - C64::new(p, 0.0)).norm() / p.abs().max(1.0))
        .fold(0.0, f64::max);
    let l12 = lambda12(m);
    let l12_res = (l12[0] - wa).abs().max((l12[1] - wb).abs());
    let normalized_lemma = lambda12(block(&inv, &ga.e, &gb.e));
    let residual = element_residual.max(l12_res).max(dual_residual);
    PairRecord {
        alpha: ga.index,
        beta: gb.index,
        branch: PairBranch::Dependent,
        lambda_alpha: ga.lambda,
        lambda_beta: gb.lambda,
        cross_term: m[0][1],
        element_residual,
        gamma: Some(gamma),
        lambda12_expected: [wa, wb],
        lambda12: l12,
        normalized_lemma,
        dual_residual,
        residual: if residual.is_nan() {
            f64::INFINITY
        } else {
            residual
        },
        passed: residual <= tol.optimality,
    }
}
