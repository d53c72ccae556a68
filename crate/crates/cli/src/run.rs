use std::time::Instant;

use clap::ValueEnum;
use serde::Serialize;
use tvc::approx::{approx_d, approx_d_minus_1_with, ApproxConfig};
use tvc::exact_dp::{self, DpConfig};
use tvc::fpt::{solve_bounded_with, FptConfig};
use tvc::instances::InstanceDocument;
use tvc::oracle::solve_ids;
use tvc::path_algos::{build_range_space, local_search, swap_size_for_epsilon, LocalSearchConfig};
use tvc::{verify_cover, Error, PartialBounds, TemporalVertexSet, Time};

use crate::Failure;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    Oracle,
    Dp,
    GreedyTvc,
    Ptas,
    ApproxD,
    ApproxD1,
    Fpt,
}

impl Algorithm {
    pub fn id(self) -> &'static str {
        match self {
            Algorithm::Oracle => "oracle",
            Algorithm::Dp => "dp",
            Algorithm::GreedyTvc => "greedy-tvc",
            Algorithm::Ptas => "ptas",
            Algorithm::ApproxD => "approx-d",
            Algorithm::ApproxD1 => "approx-d1",
            Algorithm::Fpt => "fpt",
        }
    }

    fn takes_bounds(self) -> bool {
        matches!(self, Algorithm::Oracle | Algorithm::Dp | Algorithm::Fpt)
    }
}

/// Algorithm parameters after validation. Unset fields are omitted from reports.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Params {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub swap: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub phase1_gap: Option<Time>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub phase2_gap: Option<Time>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub guard: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub budget: Option<u64>,
    /// Set by `greedy-tvc`, which always solves with `delta = T`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ignored_delta: Option<Time>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub algorithm: Algorithm,
    pub delta: Option<Time>,
    pub params: Params,
}

impl RunConfig {
    /// Rejects parameters that do not belong to the chosen algorithm.
    pub fn validate(&self) -> Result<(), Failure> {
        let p = &self.params;
        let a = self.algorithm;
        let only = |set: bool, name: &str, allowed: &[Algorithm]| -> Result<(), Failure> {
            if set && !allowed.contains(&a) {
                let ids: Vec<_> = allowed.iter().map(|x| x.id()).collect();
                return Err(Failure::usage(format!("--{name} applies only to {}", ids.join(", "))));
            }
            Ok(())
        };
        only(p.epsilon.is_some(), "epsilon", &[Algorithm::Ptas])?;
        only(p.swap.is_some(), "swap", &[Algorithm::Ptas])?;
        only(p.seed.is_some(), "seed", &[Algorithm::Ptas])?;
        only(p.k.is_some(), "k", &[Algorithm::Fpt])?;
        only(p.phase1_gap.is_some(), "phase1-gap", &[Algorithm::ApproxD1])?;
        only(p.phase2_gap.is_some(), "phase2-gap", &[Algorithm::ApproxD1])?;
        only(p.guard.is_some(), "guard", &[Algorithm::Dp])?;
        only(p.budget.is_some(), "budget", &[Algorithm::Oracle, Algorithm::Fpt])?;
        if p.epsilon.is_some() && p.swap.is_some() {
            return Err(Failure::usage("give either --epsilon or --swap, not both"));
        }
        if a == Algorithm::Fpt && p.k.is_none() {
            return Err(Failure::usage("fpt needs --k"));
        }
        if a != Algorithm::GreedyTvc && self.delta.is_none() {
            return Err(Failure::usage(format!("{} needs --delta", a.id())));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct Outcome {
    /// `None` when the fpt search finds no cover within `k`.
    pub cover: Option<TemporalVertexSet>,
    pub delta: Time,
    pub params: Params,
    pub explored: Option<u64>,
    pub time_ms: f64,
}

pub fn execute(doc: &InstanceDocument, cfg: &RunConfig) -> Result<Outcome, Failure> {
    cfg.validate()?;
    let g = &doc.graph;
    let mut params = cfg.params.clone();
    let delta = match cfg.algorithm {
        Algorithm::GreedyTvc => {
            params.ignored_delta = cfg.delta;
            g.lifetime()
        }
        _ => cfg.delta.unwrap_or_default(),
    };
    let bounds = doc.bounds_for(delta)?;
    if bounds.is_some() && !cfg.algorithm.takes_bounds() {
        return Err(Failure::usage(format!("{} does not accept partial bounds (`p` lines)", cfg.algorithm.id())));
    }
    let start = Instant::now();
    let (cover, explored) = match cfg.algorithm {
        Algorithm::Oracle => {
            let r = solve_ids(g, delta, bounds.as_ref(), params.budget)?;
            (Some(r.witness), Some(r.explored))
        }
        Algorithm::Dp => {
            let dp_cfg = DpConfig { state_guard: params.guard.unwrap_or(exact_dp::DEFAULT_STATE_GUARD), ..DpConfig::default() };
            let full;
            let b = match &bounds {
                Some(b) => b,
                None => {
                    g.check_delta(delta)?;
                    full = PartialBounds::full(g, delta)?;
                    &full
                }
            };
            let r = exact_dp::solve_partial_with(g, delta, b, &dp_cfg)?;
            (Some(r.witness), Some(r.states_visited as u64))
        }
        Algorithm::GreedyTvc => {
            let c = match tvc::path_algos::solve_tvc_path(g) {
                Err(Error::Topology { .. }) => tvc::path_algos::solve_tvc_cycle(g)?,
                other => other?,
            };
            (Some(c), None)
        }
        Algorithm::Ptas => {
            let swap = match (params.epsilon, params.swap) {
                (Some(e), _) => swap_size_for_epsilon(e)?,
                (None, Some(p)) => p,
                (None, None) => LocalSearchConfig::default().swap_size,
            };
            params.swap = Some(swap);
            let space = build_range_space(g, delta)?;
            let ls = local_search(&space, &LocalSearchConfig { swap_size: swap, seed: params.seed, ..LocalSearchConfig::default() })?;
            (Some(ls.cover), Some(ls.swaps as u64))
        }
        Algorithm::ApproxD => (Some(approx_d(g, delta)?.cover), None),
        Algorithm::ApproxD1 => {
            let ac = ApproxConfig { phase1_gap: params.phase1_gap, phase2_gap: params.phase2_gap };
            (Some(approx_d_minus_1_with(g, delta, &ac)?.cover), None)
        }
        Algorithm::Fpt => {
            let fc = FptConfig { node_budget: params.budget, ..FptConfig::default() };
            let out = solve_bounded_with(g, delta, params.k.unwrap_or_default(), bounds.as_ref(), &fc)?;
            (out.cover, Some(out.nodes))
        }
    };
    let time_ms = start.elapsed().as_secs_f64() * 1000.0;
    Ok(Outcome { cover, delta, params, explored, time_ms })
}

/// Checks `cover` against the instance, honouring its `p` lines.
pub fn verify(doc: &InstanceDocument, delta: Time, cover: &TemporalVertexSet) -> Result<tvc::CoverageReport, Failure> {
    let bounds = doc.bounds_for(delta)?;
    Ok(verify_cover(&doc.graph, delta, cover, bounds.as_ref())?)
}
