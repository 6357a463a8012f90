//! Parallel sweeps and their JSON report.

use std::collections::BTreeMap;

use gathering_core::analysis::{AnalysisError, Initializer, RunRecord, SweepPlan, SweepSummary};
use gathering_core::simulator::RunStatus;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Runs every index of `plan` on the rayon pool. Records come back in index
/// order, so the result equals [`SweepPlan::execute`].
pub fn run_parallel(plan: &SweepPlan) -> Result<(Vec<RunRecord>, SweepSummary), AnalysisError> {
    let records = plan
        .run_seeds()
        .into_par_iter()
        .enumerate()
        .map(|(i, seed)| plan.run_one(i, seed))
        .collect::<Result<Vec<_>, _>>()?;
    let summary = SweepSummary::from_records(&records);
    Ok((records, summary))
}

fn status_name(s: RunStatus) -> &'static str {
    match s {
        RunStatus::Gathered => "gathered",
        RunStatus::StepLimitReached => "step_limit_reached",
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecordOut {
    pub index: usize,
    pub seed: u64,
    pub n: usize,
    pub scheduler: String,
    pub status: String,
    pub steps: u64,
    pub violations: BTreeMap<String, usize>,
}

impl From<&RunRecord> for RecordOut {
    fn from(r: &RunRecord) -> Self {
        RecordOut {
            index: r.index,
            seed: r.seed,
            n: r.n,
            scheduler: r.scheduler.to_owned(),
            status: status_name(r.status).to_owned(),
            steps: r.steps,
            violations: r.violations.iter().map(|(k, v)| ((*k).to_owned(), *v)).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SummaryOut {
    pub runs: usize,
    pub gathered: usize,
    pub step_limit: usize,
    pub max_steps_to_gather: Option<u64>,
    pub violations: BTreeMap<String, usize>,
}

impl From<&SweepSummary> for SummaryOut {
    fn from(s: &SweepSummary) -> Self {
        SummaryOut {
            runs: s.runs,
            gathered: s.gathered,
            step_limit: s.step_limit,
            max_steps_to_gather: s.max_steps_to_gather,
            violations: s.violations.iter().map(|(k, v)| ((*k).to_owned(), *v)).collect(),
        }
    }
}

/// The document written by `gathering sweep --out`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepReport {
    pub n: usize,
    pub runs: usize,
    pub seed: u64,
    pub scheduler: String,
    pub init: String,
    pub max_steps: u64,
    pub summary: SummaryOut,
    pub records: Vec<RecordOut>,
}

impl SweepReport {
    pub fn new(plan: &SweepPlan, records: &[RunRecord], summary: &SweepSummary) -> Self {
        SweepReport {
            n: plan.n,
            runs: plan.runs,
            seed: plan.seed,
            scheduler: plan.strategy.name().to_owned(),
            init: match plan.init {
                Initializer::Random => "random",
                Initializer::EvenWitness => "witness",
            }
            .to_owned(),
            max_steps: plan.max_steps.unwrap_or(10_000 * plan.n.max(1) as u64),
            summary: summary.into(),
            records: records.iter().map(RecordOut::from).collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}
