//! Analysis reports emitted by the CLI.

use std::fmt::Write as _;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::Result;
use crate::lsd::{
    average_concurrence, ppt_check, LSDecomposition, OptimalityReport, PptResult, RankClass,
};
use crate::qstate::{lambda_spectrum, rank, DensityMatrix, SpectrumLambda};
use crate::wootters::{eof_from_concurrence, EntropyBase};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LsdSummary {
    pub weight: f64,
    pub rank_class: RankClass,
    pub average_concurrence: Option<f64>,
    pub reconstruction_residual: f64,
    pub z_concurrence: f64,
    pub boundary_gap: f64,
}

impl LsdSummary {
    pub fn new(rho: &DensityMatrix, d: &LSDecomposition) -> Self {
        LsdSummary {
            weight: d.weight,
            rank_class: d.rank_class,
            average_concurrence: average_concurrence(d).ok(),
            reconstruction_residual: d.reconstruct().dist(rho.matrix()),
            z_concurrence: d.z_concurrence(),
            boundary_gap: d.boundary_gap(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OptimalitySummary {
    pub verdict: bool,
    pub max_residual: f64,
    pub checks: usize,
    pub failures: Vec<String>,
}

impl From<&OptimalityReport> for OptimalitySummary {
    fn from(r: &OptimalityReport) -> Self {
        OptimalitySummary {
            verdict: r.verdict,
            max_residual: r.max_residual,
            checks: r.consistency.len() + r.single.len() + r.pairwise.len(),
            failures: r.failures(),
        }
    }
}

/// Wall-clock milliseconds per stage.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Timings {
    pub analysis_ms: f64,
    pub decomposition_ms: Option<f64>,
    pub certification_ms: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    /// SHA-256 of the input bytes.
    pub input_digest: String,
    pub lambdas: SpectrumLambda,
    pub concurrence: f64,
    pub entanglement_of_formation: f64,
    pub entropy_base: EntropyBase,
    pub rank: usize,
    pub ppt: PptResult,
    pub decomposition: Option<LsdSummary>,
    pub optimality: Option<OptimalitySummary>,
    pub timings: Timings,
}

pub fn digest(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub(crate) fn elapsed_ms(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1e3
}

impl AnalysisReport {
    pub fn analyze(rho: &DensityMatrix, input_digest: String, base: EntropyBase) -> Result<Self> {
        let start = Instant::now();
        let lambdas = lambda_spectrum(rho)?;
        let c = lambdas.concurrence();
        Ok(AnalysisReport {
            input_digest,
            lambdas,
            concurrence: c,
            entanglement_of_formation: eof_from_concurrence(c, base),
            entropy_base: base,
            rank: rank(rho),
            ppt: ppt_check(rho),
            decomposition: None,
            optimality: None,
            timings: Timings {
                analysis_ms: elapsed_ms(start),
                ..Timings::default()
            },
        })
    }

    /// All numeric fields finite and residuals non-negative.
    pub fn is_well_formed(&self) -> bool {
        let mut nums = vec![
            self.concurrence,
            self.entanglement_of_formation,
            self.ppt.min_pt_eigenvalue,
        ];
        nums.extend(self.lambdas.0);
        if let Some(d) = &self.decomposition {
            nums.extend([d.weight, d.boundary_gap]);
            nums.extend(d.average_concurrence);
            if d.reconstruction_residual < 0.0 || d.z_concurrence < 0.0 {
                return false;
            }
        }
        if let Some(o) = &self.optimality {
            if o.max_residual.is_nan() || o.max_residual < 0.0 {
                return false;
            }
        }
        nums.iter().all(|v| v.is_finite())
    }

    pub fn render_text(&self) -> String {
        let mut s = String::new();
        let l = self.lambdas.0;
        let _ = writeln!(s, "input sha256      {}", self.input_digest);
        let _ = writeln!(
            s,
            "lambda spectrum   {:.6} {:.6} {:.6} {:.6}",
            l[0], l[1], l[2], l[3]
        );
        let _ = writeln!(s, "concurrence       {:.6}", self.concurrence);
        let base = match self.entropy_base {
            EntropyBase::Bits => "bits",
            EntropyBase::Nats => "nats",
        };
        let label = format!("E_f ({base})");
        let _ = writeln!(s, "{label:<18}{:.6}", self.entanglement_of_formation);
        let _ = writeln!(s, "rank              {}", self.rank);
        let _ = writeln!(
            s,
            "ppt               {} (min eigenvalue {:.6})",
            if self.ppt.separable {
                "separable"
            } else {
                "entangled"
            },
            self.ppt.min_pt_eigenvalue
        );
        if let Some(d) = &self.decomposition {
            let _ = writeln!(s, "ls weight         {:.6}", d.weight);
            let _ = writeln!(s, "rank class        {}", d.rank_class);
            if let Some(a) = d.average_concurrence {
                let _ = writeln!(s, "avg concurrence   {a:.6}");
            }
            let _ = writeln!(s, "reconstruction    {:.3e}", d.reconstruction_residual);
        }
        if let Some(o) = &self.optimality {
            let _ = writeln!(
                s,
                "optimality        {} ({} checks, max residual {:.3e})",
                if o.verdict { "certified" } else { "FAILED" },
                o.checks,
                o.max_residual
            );
            for f in &o.failures {
                let _ = writeln!(s, "  {f}");
            }
        }
        s
    }
}
