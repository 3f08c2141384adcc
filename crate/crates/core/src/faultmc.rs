//! Seeded Monte-Carlo fault injection over a routed garment.
//!
//! Each trial draws crossing shorts and loosened stitches, solves one
//! truth-table row (round-robin) and classifies the LED reading:
//! correct is a true positive; a wrong reading the fault-free garment also
//! gets wrong (or an unsolvable one) is indeterminate, counted as a true
//! negative; a wrong reading caused by injected faults is a false positive.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::boolcore::{format_vector, TruthTable};
use crate::dcsolve::{read_outputs, solve_index, DcSolution, SolverConfig};
use crate::fabric::{
    apply_stretch, extract_with_faults, Axis, FabricError, FabricLayout, FaultSet, JointKind,
    ParasiticConfig, Severity,
};
use crate::rtlnet::{attach_parasitics, Netlist, RtlError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FaultError {
    #[error("EMPTY_INPUT: no trial outcomes")]
    EmptyInput,
    #[error("INVALID_SCENARIO: {0}")]
    InvalidScenario(String),
    #[error("table has {table} inputs but the netlist has {netlist}")]
    Mismatch { table: usize, netlist: usize },
    #[error(transparent)]
    Fabric(#[from] FabricError),
    #[error(transparent)]
    Netlist(#[from] RtlError),
}

/// Fault probabilities and trial settings. The probabilities are
/// calibration constants, not measured rates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct FaultScenario {
    pub p_short_high: f64,
    pub p_short_medium: f64,
    pub p_joint_loosen: f64,
    /// Loosening probability for joints strained past `strain_threshold`.
    pub p_joint_loosen_strained: f64,
    pub strain_threshold: f64,
    pub joint_loosen_ohms: f64,
    pub stretch_strain: f64,
    pub stretch_axis: Axis,
    pub trials: usize,
    pub seed: u64,
}

impl Default for FaultScenario {
    fn default() -> Self {
        FaultScenario {
            p_short_high: 0.25,
            p_short_medium: 0.08,
            p_joint_loosen: 0.05,
            p_joint_loosen_strained: 0.25,
            strain_threshold: 0.2,
            joint_loosen_ohms: 10_000.0,
            stretch_strain: 0.0,
            stretch_axis: Axis::Vertical,
            trials: 40,
            seed: 42,
        }
    }
}

impl FaultScenario {
    /// No faults at all.
    pub fn fault_free() -> Self {
        FaultScenario {
            p_short_high: 0.0,
            p_short_medium: 0.0,
            p_joint_loosen: 0.0,
            p_joint_loosen_strained: 0.0,
            ..Default::default()
        }
    }

    fn validate(&self) -> Result<(), FaultError> {
        let probs = [
            ("p_short_high", self.p_short_high),
            ("p_short_medium", self.p_short_medium),
            ("p_joint_loosen", self.p_joint_loosen),
            ("p_joint_loosen_strained", self.p_joint_loosen_strained),
        ];
        if let Some((name, p)) = probs.iter().find(|(_, p)| !(0.0..=1.0).contains(p)) {
            return Err(FaultError::InvalidScenario(format!(
                "{name} = {p} is not a probability"
            )));
        }
        if self.trials == 0 {
            return Err(FaultError::InvalidScenario(
                "trials must be at least 1".into(),
            ));
        }
        if self.joint_loosen_ohms.is_nan() || self.joint_loosen_ohms <= 0.0 {
            return Err(FaultError::InvalidScenario(
                "joint_loosen_ohms must be positive".into(),
            ));
        }
        Ok(())
    }

    fn p_short(&self, s: Severity) -> f64 {
        match s {
            Severity::High => self.p_short_high,
            Severity::Medium => self.p_short_medium,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Classification {
    TruePositive,
    TrueNegative,
    FalsePositive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum FaultKind {
    Short,
    LooseJoint,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InjectedFault {
    pub kind: FaultKind,
    /// Index into the layout's short candidates or joints.
    pub index: usize,
    pub location: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialOutcome {
    pub trial_index: usize,
    pub vector: String,
    pub injected_faults: Vec<InjectedFault>,
    /// LED reading per output; empty when the solve failed.
    pub outputs: Vec<bool>,
    /// Voltage at each output net; empty when the solve failed.
    pub output_volts: Vec<f64>,
    pub reference_correct: bool,
    pub solver_failed: bool,
    pub classification: Classification,
}

/// Electrical settings shared by every trial.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct TrialSetup {
    pub parasitics: ParasiticConfig,
    pub solver: SolverConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FaultSummary {
    pub trials: usize,
    pub true_positive: usize,
    pub true_negative: usize,
    pub false_positive: usize,
    pub solver_failures: usize,
    /// Mean output voltage over every output that should read high.
    pub mean_high_volts: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FaultReport {
    pub scenario: FaultScenario,
    pub summary: FaultSummary,
    pub outcomes: Vec<TrialOutcome>,
}

fn reading(net: &Netlist, sol: &DcSolution, cfg: &SolverConfig) -> (Vec<bool>, Vec<f64>) {
    let volts = net.output_names.iter().map(|o| sol.voltage(o)).collect();
    (read_outputs(net, sol, cfg), volts)
}

fn correct(table: &TruthTable, vector: u32, outputs: &[bool]) -> bool {
    outputs.len() == table.output_count()
        && outputs
            .iter()
            .enumerate()
            .all(|(k, &v)| table.cell(vector, k).admits(v))
}

/// Runs `scenario.trials` trials. Trial `t` draws from its own ChaCha
/// stream keyed by the seed and `t`, so results do not depend on the order
/// trials run in.
pub fn run_trials(
    layout: &FabricLayout,
    net: &Netlist,
    table: &TruthTable,
    scenario: &FaultScenario,
    setup: &TrialSetup,
) -> Result<FaultReport, FaultError> {
    scenario.validate()?;
    let n = table.input_count();
    if n != net.variables.len() {
        return Err(FaultError::Mismatch {
            table: n,
            netlist: net.variables.len(),
        });
    }
    let (garment, _) = apply_stretch(layout, scenario.stretch_strain, scenario.stretch_axis)?;
    let parasitics = ParasiticConfig {
        loose_joint_ohms: scenario.joint_loosen_ohms,
        ..setup.parasitics
    };
    let faulted = |faults: &FaultSet| -> Result<Netlist, FaultError> {
        Ok(attach_parasitics(
            net,
            &extract_with_faults(&garment, &parasitics, faults),
        )?)
    };

    let reference_net = faulted(&FaultSet::default())?;
    let mut reference: BTreeMap<u32, bool> = BTreeMap::new();
    let rows = 1u32 << n;
    let mut outcomes = Vec::with_capacity(scenario.trials);
    for trial in 0..scenario.trials {
        let vector = (trial % rows as usize) as u32;
        let mut rng = ChaCha8Rng::seed_from_u64(scenario.seed);
        rng.set_stream(trial as u64);

        let mut faults = FaultSet::default();
        let mut injected = Vec::new();
        for (i, s) in garment.short_candidates.iter().enumerate() {
            let u: f64 = rng.random();
            if u < scenario.p_short(s.severity) {
                faults.shorts.insert(i);
                let names = s.traces.map(|t| garment.traces[t].name.as_str());
                injected.push(InjectedFault {
                    kind: FaultKind::Short,
                    index: i,
                    location: format!(
                        "{} x {} at ({:.2}, {:.2})",
                        names[0], names[1], s.at.x, s.at.y
                    ),
                });
            }
        }
        for (i, j) in garment.joints.iter().enumerate() {
            if j.kind == JointKind::Splice {
                continue;
            }
            let u: f64 = rng.random();
            let p = if j.loosening > scenario.strain_threshold {
                scenario.p_joint_loosen_strained
            } else {
                scenario.p_joint_loosen
            };
            if u < p {
                faults.loose_joints.insert(i);
                let names = j.traces.map(|t| garment.traces[t].name.as_str());
                injected.push(InjectedFault {
                    kind: FaultKind::LooseJoint,
                    index: i,
                    location: format!("{} ({} / {})", j.name, names[0], names[1]),
                });
            }
        }

        let reference_correct = *reference.entry(vector).or_insert_with(|| {
            solve_index(&reference_net, vector, &setup.solver).is_ok_and(|sol| {
                correct(
                    table,
                    vector,
                    &reading(&reference_net, &sol, &setup.solver).0,
                )
            })
        });
        let trial_net = if faults.is_empty() {
            reference_net.clone()
        } else {
            faulted(&faults)?
        };
        let (outputs, output_volts, solver_failed) =
            match solve_index(&trial_net, vector, &setup.solver) {
                Ok(sol) => {
                    let (o, v) = reading(&trial_net, &sol, &setup.solver);
                    (o, v, false)
                }
                Err(_) => (Vec::new(), Vec::new(), true),
            };
        let classification = if !solver_failed && correct(table, vector, &outputs) {
            Classification::TruePositive
        } else if solver_failed || !reference_correct || injected.is_empty() {
            Classification::TrueNegative
        } else {
            Classification::FalsePositive
        };
        outcomes.push(TrialOutcome {
            trial_index: trial,
            vector: format_vector(vector, n),
            injected_faults: injected,
            outputs,
            output_volts,
            reference_correct,
            solver_failed,
            classification,
        });
    }
    let summary = summarize_with(&outcomes, Some(table))?;
    Ok(FaultReport {
        scenario: *scenario,
        summary,
        outcomes,
    })
}

/// Table-3-style counts. Without a table the mean high voltage is taken
/// over outputs that read high.
pub fn summarize(outcomes: &[TrialOutcome]) -> Result<FaultSummary, FaultError> {
    summarize_with(outcomes, None)
}

fn summarize_with(
    outcomes: &[TrialOutcome],
    table: Option<&TruthTable>,
) -> Result<FaultSummary, FaultError> {
    if outcomes.is_empty() {
        return Err(FaultError::EmptyInput);
    }
    let count = |c| outcomes.iter().filter(|o| o.classification == c).count();
    let mut highs = Vec::new();
    for o in outcomes {
        for (k, &v) in o.output_volts.iter().enumerate() {
            let high = match table {
                Some(t) => {
                    let idx =
                        crate::boolcore::parse_vector(&o.vector, t.input_count()).unwrap_or(0);
                    t.cell(idx, k) == crate::boolcore::Cell::One
                }
                None => o.outputs.get(k).copied().unwrap_or(false),
            };
            if high {
                highs.push(v);
            }
        }
    }
    Ok(FaultSummary {
        trials: outcomes.len(),
        true_positive: count(Classification::TruePositive),
        true_negative: count(Classification::TrueNegative),
        false_positive: count(Classification::FalsePositive),
        solver_failures: outcomes.iter().filter(|o| o.solver_failed).count(),
        mean_high_volts: (!highs.is_empty())
            .then(|| highs.iter().sum::<f64>() / highs.len() as f64),
    })
}
