use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::Path;

use serde::Serialize;

use etpla_core::boolcore::{minimize, use_case_table, TruthTable};
use etpla_core::dcsolve::{ideal_net_levels, sweep_all, DcError, LedLevel};
use etpla_core::fabric::{extract_parasitics, place, FabricLayout, ParasiticScenario, Strategy};
use etpla_core::faultmc::{run_trials, FaultError, FaultScenario, FaultSummary};
use etpla_core::pipeline::{build, fault_campaign, measure_levels, PipelineConfig, PipelineError};
use etpla_core::plamap::PlaMatrix;
use etpla_core::rtlnet::{attach_parasitics, expand_netlist, GateKind, Netlist};

use crate::{svg, Cli, Command};

pub const REPORT_SCHEMA_VERSION: u32 = 1;

#[derive(Debug)]
pub enum CliError {
    /// Bad input file, config or request.
    Validation(String),
    Solver(String),
    /// Something the pipeline guarantees did not hold.
    Internal(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Solver(_) => 3,
            CliError::Internal(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Validation(m) | CliError::Solver(m) | CliError::Internal(m) => f.write_str(m),
        }
    }
}

impl From<PipelineError> for CliError {
    fn from(e: PipelineError) -> Self {
        match e {
            PipelineError::Solver(_) => CliError::Solver(e.to_string()),
            PipelineError::Fault(FaultError::EmptyInput) => CliError::Internal(e.to_string()),
            _ => CliError::Validation(e.to_string()),
        }
    }
}

impl From<DcError> for CliError {
    fn from(e: DcError) -> Self {
        CliError::Solver(e.to_string())
    }
}

type Result<T> = std::result::Result<T, CliError>;

fn invalid(e: impl fmt::Display) -> CliError {
    CliError::Validation(e.to_string())
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    serde_json::from_str(&read(path)?)
        .map_err(|e| CliError::Validation(format!("MALFORMED: {}: {e}", path.display())))
}

fn read_table(path: &Path) -> Result<TruthTable> {
    TruthTable::parse(&read(path)?)
        .map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))
}

fn write_file(out: &Path, name: &str, text: &str) -> Result<()> {
    let io = |e: std::io::Error| CliError::Internal(format!("{}: {e}", out.join(name).display()));
    fs::create_dir_all(out).map_err(io)?;
    fs::write(out.join(name), text).map_err(io)?;
    println!("wrote {}", out.join(name).display());
    Ok(())
}

fn write_json<T: Serialize>(out: &Path, name: &str, value: &T) -> Result<()> {
    let mut text =
        serde_json::to_string_pretty(value).map_err(|e| CliError::Internal(e.to_string()))?;
    text.push('\n');
    write_file(out, name, &text)
}

fn load_config(cli: &Cli) -> Result<PipelineConfig> {
    let mut cfg = match &cli.config {
        Some(path) => PipelineConfig::from_toml(&read(path)?).map_err(invalid)?,
        None => PipelineConfig::default(),
    };
    cfg.faults.seed = cli.seed;
    if let Some(s) = cli.strategy {
        cfg.strategy = s.into();
    }
    Ok(cfg)
}

pub fn run(cli: &Cli) -> Result<()> {
    let cfg = load_config(cli)?;
    let out = cli.out.as_path();
    match &cli.command {
        Command::Minimize { table } => minimize_cmd(&read_table(table)?, out),
        Command::Build { matrix } => build_cmd(&read_json(matrix)?, &cfg, out),
        Command::Simulate { netlist, table } => {
            simulate_cmd(&read_json(netlist)?, &read_table(table)?, &cfg, out)
        }
        Command::Faultmc {
            layout,
            netlist,
            table,
            stretch,
        } => {
            let strain = if *stretch { cfg.stretch_strain } else { 0.0 };
            faultmc_cmd(
                &read_json(layout)?,
                &read_json(netlist)?,
                &read_table(table)?,
                &cfg,
                strain,
                out,
            )
        }
        Command::ExportSvg { layout } => {
            let layout: FabricLayout = read_json(layout)?;
            write_file(out, "layout.svg", &svg::render(&layout))
        }
        Command::Validate { table } => {
            let table = match table {
                Some(p) => read_table(p)?,
                None => use_case_table(),
            };
            let strategies = match cli.strategy {
                Some(s) => vec![s.into()],
                None => vec![Strategy::Multi, Strategy::Single],
            };
            validate_cmd(&table, &strategies, &cfg, out)
        }
    }
}

fn minimize_cmd(table: &TruthTable, out: &Path) -> Result<()> {
    let sop = minimize(table);
    let matrix = PlaMatrix::from_sop(&sop).map_err(invalid)?;
    for line in sop.render() {
        println!("{line}");
    }
    let st = matrix.stats();
    if matrix.term_count() == 0 {
        eprintln!("warning: EMPTY_MATRIX: every output is constant 0, nothing to build");
    }
    println!(
        "{} AND gates, {} OR gates, {} input lines",
        st.and_gates, st.or_gates, st.input_lines
    );
    write_json(out, "sop.json", &sop)?;
    write_json(out, "matrix.json", &matrix)
}

fn build_cmd(matrix: &PlaMatrix, cfg: &PipelineConfig, out: &Path) -> Result<()> {
    let netlist = expand_netlist(matrix, &cfg.circuit).map_err(invalid)?;
    let layout = place(matrix, cfg.strategy, cfg.panel).map_err(invalid)?;
    let annotation = extract_parasitics(&layout, &cfg.parasitics, ParasiticScenario::Nominal);
    let routed =
        attach_parasitics(&netlist, &annotation).map_err(|e| CliError::Internal(e.to_string()))?;
    println!(
        "{:?}: {} layers, {} gates, {} traces ({:.1} cm), {} joints, {} short candidates",
        layout.strategy,
        layout.layers,
        layout.placements.len(),
        layout.traces.len(),
        layout.total_length_cm(),
        layout.joints.len(),
        layout.short_candidates.len()
    );
    for c in &layout.short_candidates {
        println!(
            "  short {:?}: {} x {} at ({:.1}, {:.1}) cm",
            c.severity,
            layout.traces[c.traces[0]].name,
            layout.traces[c.traces[1]].name,
            c.at.x,
            c.at.y
        );
    }
    write_json(out, "layout.json", &layout)?;
    write_json(out, "netlist.json", &netlist)?;
    write_json(out, "parasitics.json", &annotation)?;
    write_json(out, "routed.json", &routed)
}

#[derive(Debug, Serialize)]
struct VectorReport {
    vector: String,
    error: Option<String>,
    outputs: Vec<bool>,
    expected: String,
    matches: bool,
    /// Gate name to port name to volts.
    gates: BTreeMap<String, BTreeMap<String, f64>>,
    leds: BTreeMap<String, LedLevel>,
}

#[derive(Debug, Default, Serialize)]
struct Bands {
    input_high: Vec<f64>,
    not_low: Vec<f64>,
    and_high: Vec<f64>,
    or_high: Vec<f64>,
}

#[derive(Debug, Serialize)]
struct SimulateReport {
    schema_version: u32,
    all_match: bool,
    bands: Bands,
    vectors: Vec<VectorReport>,
}

fn span(v: &[f64]) -> String {
    if v.is_empty() {
        return "-".into();
    }
    let lo = v.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mean = v.iter().sum::<f64>() / v.len() as f64;
    format!("{lo:.2}..{hi:.2} V (mean {mean:.2})")
}

fn simulate_cmd(net: &Netlist, table: &TruthTable, cfg: &PipelineConfig, out: &Path) -> Result<()> {
    let sweep = sweep_all(net, table, &cfg.solver)?;
    let mut bands = Bands::default();
    let mut vectors = Vec::new();
    let mut failures = Vec::new();
    for (v, r) in sweep.vectors.iter().enumerate() {
        let expected: String = table.row(v as u32).iter().map(|c| c.symbol()).collect();
        let mut rep = VectorReport {
            vector: r.vector.clone(),
            error: None,
            outputs: r.outputs.clone(),
            expected,
            matches: r.matches,
            gates: BTreeMap::new(),
            leds: BTreeMap::new(),
        };
        match &r.solution {
            Err(e) => {
                failures.push(format!("{}: {e}", r.vector));
                rep.error = Some(e.to_string());
            }
            Ok(sol) => {
                let ideal = ideal_net_levels(net, v as u32);
                for g in &net.gates {
                    let volts = |port: &str| net.port_node(&g.name, port).map(|n| sol.voltage(n));
                    let ports: BTreeMap<String, f64> = g
                        .ports
                        .keys()
                        .filter_map(|p| volts(p).map(|x| (p.clone(), x)))
                        .collect();
                    let high = ideal.get(&g.ports["out"]).copied().unwrap_or(false);
                    let y = ports.get("out").copied().unwrap_or_default();
                    match (g.kind, high) {
                        (GateKind::Not, false) => {
                            bands.not_low.push(y);
                            bands.input_high.extend(ports.get("in"));
                        }
                        (GateKind::And2, true) => bands.and_high.push(y),
                        (GateKind::Or2, true) => bands.or_high.push(y),
                        _ => {}
                    }
                    rep.gates.insert(g.name.clone(), ports);
                }
                rep.leds = sol.led_states.clone();
            }
        }
        let got: String = rep
            .outputs
            .iter()
            .map(|&b| if b { '1' } else { '0' })
            .collect();
        println!(
            "{}  expected {}  got {}  {}",
            rep.vector,
            rep.expected,
            if rep.error.is_some() { "-" } else { &got },
            if rep.error.is_some() {
                "SOLVER FAILURE"
            } else if rep.matches {
                "ok"
            } else {
                "MISMATCH"
            }
        );
        vectors.push(rep);
    }
    println!("input high  {}", span(&bands.input_high));
    println!("NOT low     {}", span(&bands.not_low));
    println!("AND high    {}", span(&bands.and_high));
    println!("OR high     {}", span(&bands.or_high));
    let report = SimulateReport {
        schema_version: REPORT_SCHEMA_VERSION,
        all_match: sweep.all_match,
        bands,
        vectors,
    };
    write_json(out, "simulate.json", &report)?;
    if failures.is_empty() {
        Ok(())
    } else {
        Err(CliError::Solver(failures.join("; ")))
    }
}

fn table3_row(label: &str, s: &FaultSummary) {
    println!(
        "{label:<28} {:>4} {:>4} {:>4}",
        s.true_positive, s.true_negative, s.false_positive
    );
}

fn faultmc_cmd(
    layout: &FabricLayout,
    net: &Netlist,
    table: &TruthTable,
    cfg: &PipelineConfig,
    strain: f64,
    out: &Path,
) -> Result<()> {
    if net.components.iter().any(|c| c.parasitic) {
        return Err(CliError::Validation(
            "faultmc takes the logical netlist (netlist.json), not one with parasitics attached"
                .into(),
        ));
    }
    let scenario = FaultScenario {
        stretch_strain: strain,
        ..cfg.faults
    };
    let report =
        run_trials(layout, net, table, &scenario, &cfg.trial_setup()).map_err(|e| match e {
            FaultError::EmptyInput => CliError::Internal(e.to_string()),
            _ => invalid(e),
        })?;
    println!("{:<28} {:>4} {:>4} {:>4}", "scenario", "TP", "TN", "FP");
    table3_row(
        &format!("{:?} strain {strain:.2}", layout.strategy),
        &report.summary,
    );
    if report.summary.solver_failures > 0 {
        println!(
            "{} trials hit a solver failure (counted TN)",
            report.summary.solver_failures
        );
    }
    write_json(out, "faultmc.json", &report)
}

#[derive(Debug, Serialize)]
struct StrategyReport {
    strategy: Strategy,
    layers: usize,
    short_candidates: usize,
    functional: bool,
    input_high: Vec<f64>,
    not_low: Vec<f64>,
    and_high: Vec<f64>,
    or_high: Vec<f64>,
    leds: Vec<(u32, String, Option<bool>, LedLevel)>,
    faults: FaultSummary,
    faults_stretched: FaultSummary,
}

#[derive(Debug, Serialize)]
struct ValidateReport {
    schema_version: u32,
    seed: u64,
    stretch_strain: f64,
    strategies: Vec<StrategyReport>,
}

fn validate_cmd(
    table: &TruthTable,
    strategies: &[Strategy],
    cfg: &PipelineConfig,
    out: &Path,
) -> Result<()> {
    let mut reports = Vec::new();
    for &strategy in strategies {
        let b = build(table, strategy, cfg)?;
        let sweep = sweep_all(&b.routed, table, &cfg.solver)?;
        if let Some(e) = sweep.vectors.iter().find_map(|r| r.solution.as_ref().err()) {
            return Err(CliError::Solver(format!("{strategy:?}: {e}")));
        }
        let levels = measure_levels(&b, table, &cfg.solver)?;
        let plain = fault_campaign(&b, table, cfg, 0.0)?;
        let stretched = fault_campaign(&b, table, cfg, cfg.stretch_strain)?;
        println!(
            "{strategy:?}: {} layers, {} short candidates, function {}",
            b.layout.layers,
            b.layout.short_candidates.len(),
            if sweep.all_match {
                "reproduced"
            } else {
                "NOT reproduced"
            }
        );
        println!("  input high  {}", span(&levels.input_high));
        println!("  NOT low     {}", span(&levels.not_low));
        println!("  AND high    {}", span(&levels.and_high));
        println!("  OR high     {}", span(&levels.or_high));
        reports.push(StrategyReport {
            strategy,
            layers: b.layout.layers,
            short_candidates: b.layout.short_candidates.len(),
            functional: sweep.all_match,
            input_high: levels.input_high,
            not_low: levels.not_low,
            and_high: levels.and_high,
            or_high: levels.or_high,
            leds: levels
                .leds
                .into_iter()
                .map(|l| (l.vector, l.led_model, l.expected, l.level))
                .collect(),
            faults: plain.summary,
            faults_stretched: stretched.summary,
        });
    }
    println!("\n{:<28} {:>4} {:>4} {:>4}", "scenario", "TP", "TN", "FP");
    for r in &reports {
        table3_row(&format!("{:?}", r.strategy), &r.faults);
        table3_row(&format!("{:?} (stretch)", r.strategy), &r.faults_stretched);
    }
    // The single-layer garment is expected to lose outputs to its crossings;
    // only the multi-layer design is guaranteed to compute the table.
    let broken: Vec<String> = reports
        .iter()
        .filter(|r| r.strategy == Strategy::Multi && !r.functional)
        .map(|r| format!("{:?}", r.strategy))
        .collect();
    let report = ValidateReport {
        schema_version: REPORT_SCHEMA_VERSION,
        seed: cfg.faults.seed,
        stretch_strain: cfg.stretch_strain,
        strategies: reports,
    };
    write_json(out, "validate.json", &report)?;
    if broken.is_empty() {
        Ok(())
    } else {
        Err(CliError::Internal(format!(
            "fault-free build does not compute the table: {}",
            broken.join(", ")
        )))
    }
}
