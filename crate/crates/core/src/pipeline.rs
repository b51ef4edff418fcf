//! End-to-end run: simulate, draw the arc graph, prune, verify, and compare every kept
//! arc against the closed-form bounds.

use std::time::{Duration, Instant};

use serde::Serialize;

use crate::bounds::{alpha_length_bound, kappa, radius_bound, theorem_bound};
use crate::cover::{is_partial_basis, PartialBasisReport};
use crate::error::{Error, Result};
use crate::growth::{arc_graph, simulate, GrowthLog, RadiusCheck};
use crate::hypmodel::MetricModel;
use crate::jacobian::{basis_energy_table, JacobianBoundRow};
use crate::prune::{prune, verify, PruneResult};
use crate::spheremap::{ArcId, ComponentKind};

/// Tolerance for comparing realized quantities with closed-form bounds.
pub const BOUND_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrowthSummary {
    pub events: usize,
    pub consumed_total: u32,
    pub j_final: u32,
    pub radius_checks: Vec<RadiusCheck>,
    pub log: GrowthLog,
}

/// Bounds attached to the `k`-th kept arc (ordered by event index).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KeptArcRow {
    pub k: u32,
    pub arc: ArcId,
    pub j: u32,
    pub r: f64,
    /// Upper bound `4r` on the length of the lifted closed curve.
    pub lift_length_bound: f64,
    pub radius_bound: f64,
    pub alpha_bound: f64,
    /// Present for `k <= kappa(g)`.
    pub theorem_bound: Option<f64>,
    pub chain_limit: Option<u32>,
    pub ok: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Verdicts {
    pub growth_termination: bool,
    pub radius_bounds: bool,
    pub components_valid: bool,
    pub prune_invariants: bool,
    pub parity_test: bool,
    pub cover_connected: bool,
    pub rank_matches: bool,
    pub theorem_chain: bool,
}

impl Verdicts {
    pub fn all(&self) -> bool {
        self.growth_termination
            && self.radius_bounds
            && self.components_valid
            && self.prune_invariants
            && self.parity_test
            && self.cover_connected
            && self.rank_matches
            && self.theorem_chain
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PipelineReport {
    pub genus: u32,
    pub model: String,
    pub growth: GrowthSummary,
    pub prune: PruneResult,
    pub kept: usize,
    pub kappa: u32,
    pub kept_arcs: Vec<KeptArcRow>,
    pub cover: PartialBasisReport,
    pub verdicts: Verdicts,
    pub verified: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub jacobian: Option<Vec<JacobianBoundRow>>,
}

impl PipelineReport {
    pub fn to_json(&self) -> Result<String> {
        crate::canonical::to_string_pretty(self)
    }
}

/// Wall-clock time per stage; kept out of the report so that reports are reproducible.
#[derive(Debug, Clone, Copy, Default)]
pub struct Timings {
    pub simulate: Duration,
    pub prune: Duration,
    pub verify: Duration,
    pub total: Duration,
}

/// Checks the kept arcs against the bound chain. Arc ids equal event indices.
pub fn kept_arc_rows(log: &GrowthLog, kept: &[ArcId]) -> Result<Vec<KeptArcRow>> {
    let g = log.genus;
    let kap = kappa(g)?;
    let mut ids = kept.to_vec();
    ids.sort_unstable();
    ids.iter()
        .enumerate()
        .map(|(idx, &arc)| {
            let k = idx as u32 + 1;
            let e = log
                .events
                .get(arc as usize - 1)
                .ok_or_else(|| Error::Input(format!("kept arc {arc} has no growth event")))?;
            let rb = radius_bound(g, e.j_before)?;
            let ab = alpha_length_bound(g, e.j_before)?;
            let lift = 4.0 * e.r;
            let (tb, limit) = if k <= kap { (Some(theorem_bound(g, k)?), Some(2 * g + 2 - kap + k)) } else { (None, None) };
            let mut ok = e.r <= rb + BOUND_TOLERANCE && lift <= ab + BOUND_TOLERANCE;
            if let (Some(tb), Some(limit)) = (tb, limit) {
                ok &= e.j_before <= limit && ab <= tb + BOUND_TOLERANCE && lift <= tb + BOUND_TOLERANCE;
            }
            Ok(KeptArcRow {
                k,
                arc,
                j: e.j_before,
                r: e.r,
                lift_length_bound: lift,
                radius_bound: rb,
                alpha_bound: ab,
                theorem_bound: tb,
                chain_limit: limit,
                ok,
            })
        })
        .collect()
}

/// Runs every stage. Geometric-assumption and input errors propagate; failed checks
/// are reported as verdicts.
pub fn run_pipeline(model: &dyn MetricModel, lambda: Option<f64>) -> Result<(PipelineReport, Timings)> {
    let start = Instant::now();
    let g = model.genus();
    let kap = kappa(g)?;
    let jacobian = lambda.map(|l| basis_energy_table(g, l)).transpose()?;

    let log = simulate(model)?;
    let growth_termination = log.check_termination().is_ok();
    let (radius_checks, radius_bounds) = match crate::growth::verify_radius_bounds(&log) {
        Ok(rows) => (rows, true),
        Err(Error::BoundViolation { .. }) => (Vec::new(), false),
        Err(e) => return Err(e),
    };
    let map = arc_graph(&log, model)?;
    let components_valid = map.classify_components().iter().all(|c| c.kind != ComponentKind::Invalid);
    let t_sim = start.elapsed();

    let result = prune(&map)?;
    let t_prune = start.elapsed() - t_sim;

    let prune_invariants = match verify(&result, &map) {
        Ok(_) => true,
        Err(Error::VerificationFailure(_)) => false,
        Err(e) => return Err(e),
    };
    let h = result.subgraph();
    let cover = is_partial_basis(&map, &h)?;
    let parity_test = map.is_nonseparating(&h);
    let kept_arcs = kept_arc_rows(&log, &result.kept)?;
    let t_verify = start.elapsed() - t_sim - t_prune;

    let verdicts = Verdicts {
        growth_termination,
        radius_bounds,
        components_valid,
        prune_invariants,
        parity_test,
        cover_connected: cover.complement_components == 1,
        rank_matches: cover.rank == h.len(),
        theorem_chain: h.len() as u32 >= kap && kept_arcs.iter().all(|r| r.ok),
    };
    let consumed_total = log.events.iter().map(|e| e.k).sum();
    let j_final = log.events.last().map_or(0, |e| e.j_before);
    let report = PipelineReport {
        genus: g,
        model: model.name(),
        growth: GrowthSummary { events: log.len(), consumed_total, j_final, radius_checks, log },
        kept: h.len(),
        kappa: kap,
        prune: result,
        kept_arcs,
        cover,
        verified: verdicts.all(),
        verdicts,
        lambda,
        jacobian,
    };
    let timings = Timings { simulate: t_sim, prune: t_prune, verify: t_verify, total: start.elapsed() };
    Ok((report, timings))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypmodel::RegularDoubledPolygonModel;
    use crate::synth::{loop_around_bone_family, sibling_empty_loops};

    #[test]
    fn regular_genus_two_report() {
        let model = RegularDoubledPolygonModel::new(2).unwrap();
        let (report, _) = run_pipeline(&model, Some(0.5)).unwrap();
        assert!(report.verified, "{:?}", report.verdicts);
        assert_eq!(report.growth.events, 5);
        assert_eq!((report.kept, report.kappa, report.cover.rank), (4, 2, 4));
        assert_eq!(report.kept_arcs[0].theorem_bound.unwrap(), 4.0 * 4f64.ln());
        assert!(report.jacobian.is_some());
        let a = report.to_json().unwrap();
        let b = run_pipeline(&model, Some(0.5)).unwrap().0.to_json().unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn family_report_verifies() {
        let model = loop_around_bone_family(4).unwrap();
        let (report, _) = run_pipeline(&model, None).unwrap();
        assert!(report.verified, "{:?}", report.verdicts);
        assert_eq!(report.kept, 4);
    }

    #[test]
    fn bad_model_is_a_geometric_violation() {
        let err = run_pipeline(&sibling_empty_loops(), None).unwrap_err();
        assert!(matches!(err, Error::GeometricAssumptionViolated(_)));
    }
}
