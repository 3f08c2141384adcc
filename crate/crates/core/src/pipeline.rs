//! End-to-end configuration and the table -> garment -> netlist pipeline.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::boolcore::{minimize, Cell, SopExpression, TruthTable};
use crate::dcsolve::{ideal_net_levels, output_led, solve_index, DcError, LedLevel, SolverConfig};
use crate::fabric::{
    extract_parasitics, place, FabricError, FabricLayout, Panel, ParasiticConfig,
    ParasiticScenario, Strategy,
};
use crate::faultmc::{run_trials, FaultError, FaultReport, FaultScenario, TrialSetup};
use crate::plamap::{PlaError, PlaMatrix};
use crate::rtlnet::{
    and_gate, attach_parasitics, complement, expand_netlist, term_net, CircuitConfig, Netlist,
    ParasiticAnnotation, RtlError,
};

pub const CONFIG_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("CONFIG: {0}")]
    Config(String),
    #[error(transparent)]
    Pla(#[from] PlaError),
    #[error(transparent)]
    Netlist(#[from] RtlError),
    #[error(transparent)]
    Fabric(#[from] FabricError),
    #[error(transparent)]
    Solver(#[from] DcError),
    #[error(transparent)]
    Fault(#[from] FaultError),
}

/// Every tunable in one place. The defaults are the shipped calibration:
/// BJT gain, LED series resistance, drive impedance, bridge contact and
/// leakage resistance are fitted values, not measurements.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PipelineConfig {
    pub schema_version: u32,
    pub strategy: Strategy,
    pub panel: Panel,
    pub circuit: CircuitConfig,
    pub parasitics: ParasiticConfig,
    pub solver: SolverConfig,
    pub faults: FaultScenario,
    /// Stretch used for the "stretched" garment runs.
    pub stretch_strain: f64,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        let mut circuit = CircuitConfig::default();
        circuit.bjt.beta = 50.0;
        circuit.led_series_ohms = 1000.0;
        let mut solver = SolverConfig::default();
        solver.drive.source_ohms = 500.0;
        PipelineConfig {
            schema_version: CONFIG_SCHEMA_VERSION,
            strategy: Strategy::Multi,
            panel: Panel::default(),
            circuit,
            parasitics: ParasiticConfig::default(),
            solver,
            faults: FaultScenario::default(),
            stretch_strain: 0.34,
        }
    }
}

impl PipelineConfig {
    pub fn from_toml(text: &str) -> Result<Self, PipelineError> {
        let cfg: PipelineConfig =
            toml::from_str(text).map_err(|e| PipelineError::Config(e.to_string()))?;
        if cfg.schema_version != CONFIG_SCHEMA_VERSION {
            return Err(PipelineError::Config(format!(
                "unsupported schema_version {}",
                cfg.schema_version
            )));
        }
        if cfg.circuit.leds.is_empty() {
            return Err(PipelineError::Config(
                "circuit.leds must not be empty".into(),
            ));
        }
        Ok(cfg)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string_pretty(self).expect("config serializes")
    }

    pub fn trial_setup(&self) -> TrialSetup {
        TrialSetup {
            parasitics: self.parasitics,
            solver: self.solver.clone(),
        }
    }
}

/// Everything derived from one truth table under one strategy.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Build {
    pub sop: SopExpression,
    pub matrix: PlaMatrix,
    pub layout: FabricLayout,
    /// Ideal netlist without fabric parasitics.
    pub netlist: Netlist,
    pub annotation: ParasiticAnnotation,
    /// Netlist with the nominal parasitics attached.
    pub routed: Netlist,
}

pub fn build(
    table: &TruthTable,
    strategy: Strategy,
    cfg: &PipelineConfig,
) -> Result<Build, PipelineError> {
    let sop = minimize(table);
    let matrix = PlaMatrix::from_sop(&sop)?;
    let netlist = expand_netlist(&matrix, &cfg.circuit)?;
    let layout = place(&matrix, strategy, cfg.panel)?;
    let annotation = extract_parasitics(&layout, &cfg.parasitics, ParasiticScenario::Nominal);
    let routed = attach_parasitics(&netlist, &annotation)?;
    Ok(Build {
        sop,
        matrix,
        layout,
        netlist,
        annotation,
        routed,
    })
}

/// Voltages a bench measurement of the garment would read, gathered over
/// every input vector.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct LevelReport {
    /// Far end of each input line whose variable is high.
    pub input_high: Vec<f64>,
    /// Far end of each complement line whose inverter output is low.
    pub not_low: Vec<f64>,
    /// AND outputs whose term is true.
    pub and_high: Vec<f64>,
    /// OR outputs whose function value is 1.
    pub or_high: Vec<f64>,
    pub leds: Vec<LedReading>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LedReading {
    pub vector: u32,
    pub output: String,
    pub led_model: String,
    /// None for a don't-care cell.
    pub expected: Option<bool>,
    pub level: LedLevel,
    pub volts: f64,
}

pub fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

pub fn measure_levels(
    b: &Build,
    table: &TruthTable,
    solver: &SolverConfig,
) -> Result<LevelReport, PipelineError> {
    let mut r = LevelReport::default();
    let net = &b.routed;
    let probe = |name: &str| {
        b.annotation
            .probes
            .get(name)
            .cloned()
            .unwrap_or_else(|| name.to_string())
    };
    for v in 0..1u32 << table.input_count() {
        let sol = solve_index(net, v, solver)?;
        let ideal = ideal_net_levels(&b.netlist, v);
        for var in &net.variables {
            if ideal[var] {
                r.input_high.push(sol.voltage(&probe(var)));
                r.not_low.push(sol.voltage(&probe(&complement(var))));
            }
        }
        for t in 0..b.matrix.term_count() {
            if ideal[&term_net(t)] {
                r.and_high
                    .push(sol.voltage(net.port_node(&and_gate(t), "out").unwrap_or_default()));
            }
        }
        for (k, o) in net.output_names.iter().enumerate() {
            let volts = sol.voltage(o);
            if ideal[o] {
                r.or_high.push(volts);
            }
            if let Some(led) = output_led(net, o) {
                let model = match &net.component(led).map(|c| &c.device) {
                    Some(crate::rtlnet::Device::Led { model }) => model.name.clone(),
                    _ => String::new(),
                };
                r.leds.push(LedReading {
                    vector: v,
                    output: o.clone(),
                    led_model: model,
                    expected: match table.cell(v, k) {
                        Cell::Zero => Some(false),
                        Cell::One => Some(true),
                        Cell::DontCare => None,
                    },
                    level: sol.led_states[led],
                    volts,
                });
            }
        }
    }
    Ok(r)
}

/// Fault campaign on a built garment, stretched by `strain`.
pub fn fault_campaign(
    b: &Build,
    table: &TruthTable,
    cfg: &PipelineConfig,
    strain: f64,
) -> Result<FaultReport, PipelineError> {
    let scenario = FaultScenario {
        stretch_strain: strain,
        ..cfg.faults
    };
    Ok(run_trials(
        &b.layout,
        &b.netlist,
        table,
        &scenario,
        &cfg.trial_setup(),
    )?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shipped_config_is_the_default() {
        let text = include_str!("../../../config/etpla.toml");
        assert_eq!(
            PipelineConfig::from_toml(text).unwrap(),
            PipelineConfig::default()
        );
    }

    #[test]
    fn partial_and_bad_configs() {
        let cfg =
            PipelineConfig::from_toml("strategy = \"SINGLE\"\n[parasitics]\nbridge_ohms = 50.0\n")
                .unwrap();
        assert_eq!(cfg.strategy, Strategy::Single);
        assert_eq!(cfg.parasitics.bridge_ohms, 50.0);
        assert_eq!(cfg.parasitics.joint_ohms, 5.0);
        assert!(PipelineConfig::from_toml("schema_version = 9").is_err());
        assert!(PipelineConfig::from_toml("panel = 3").is_err());
        let round = PipelineConfig::from_toml(&cfg.to_toml()).unwrap();
        assert_eq!(round, cfg);
    }
}
