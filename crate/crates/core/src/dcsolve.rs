//! DC operating point of RTL netlists by piecewise-linear state iteration
//! over a modified nodal system.

use std::collections::{BTreeMap, HashMap, HashSet};

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::boolcore::{format_vector, parse_vector, TruthTable};
pub use crate::rtlnet::LedModel;
use crate::rtlnet::{BjtModel, Device, Netlist, GND};

const V_TOL: f64 = 1e-9;
const I_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize, Deserialize)]
pub enum DcError {
    #[error("NO_CONVERGENCE: device states still changing after {0} iterations")]
    NoConvergence(usize),
    #[error("SINGULAR_SYSTEM: {0}")]
    SingularSystem(String),
    #[error("UNKNOWN_LED: {0}")]
    UnknownLed(String),
    #[error("LENGTH_MISMATCH: vector {found:?} for {expected} inputs")]
    LengthMismatch { expected: usize, found: String },
    #[error("UNKNOWN_INPUT: netlist has no input {0}")]
    UnknownInput(String),
}

/// How input vectors are applied: a Thevenin source per variable node.
/// `source_ohms = 0` gives an ideal source.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Drive {
    pub high: f64,
    pub low: f64,
    pub source_ohms: f64,
}

impl Default for Drive {
    fn default() -> Self {
        Drive {
            high: 9.0,
            low: 0.0,
            source_ohms: 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverConfig {
    pub drive: Drive,
    pub gmin: f64,
    pub max_iterations: usize,
    /// Logic-1 level for outputs without an LED.
    pub logic_threshold: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            drive: Drive::default(),
            gmin: 1e-12,
            max_iterations: 100,
            logic_threshold: 2.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum BjtState {
    Cutoff,
    Active,
    Saturation,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum LedLevel {
    Off,
    Dim,
    On,
}

impl LedModel {
    pub fn classify(&self, current: f64) -> LedLevel {
        if current >= self.i_on {
            LedLevel::On
        } else if current >= self.i_dim {
            LedLevel::Dim
        } else {
            LedLevel::Off
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DcSolution {
    pub node_voltages: BTreeMap<String, f64>,
    /// Current entering the first terminal; collector current for BJTs.
    pub branch_currents: BTreeMap<String, f64>,
    pub base_currents: BTreeMap<String, f64>,
    /// Current flowing from each driven input node into its source.
    pub drive_currents: BTreeMap<String, f64>,
    pub bjt_states: BTreeMap<String, BjtState>,
    pub led_states: BTreeMap<String, LedLevel>,
    pub iterations: usize,
}

impl DcSolution {
    pub fn voltage(&self, node: &str) -> f64 {
        self.node_voltages.get(node).copied().unwrap_or(0.0)
    }
}

pub fn classify_led(sol: &DcSolution, led: &str) -> Result<LedLevel, DcError> {
    sol.led_states
        .get(led)
        .copied()
        .ok_or_else(|| DcError::UnknownLed(led.to_string()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Pwl {
    Bjt(BjtState),
    Led(bool),
}

#[derive(Clone, Copy)]
enum Elem<'a> {
    Conductance {
        a: Option<usize>,
        b: Option<usize>,
        g: f64,
    },
    Bjt {
        b: Option<usize>,
        c: Option<usize>,
        e: Option<usize>,
        model: &'a BjtModel,
    },
    Led {
        a: Option<usize>,
        k: Option<usize>,
        model: &'a LedModel,
    },
    Source {
        p: Option<usize>,
        n: Option<usize>,
        volts: f64,
    },
}

struct Circuit<'a> {
    nodes: Vec<&'a str>,
    elems: Vec<Elem<'a>>,
    /// (node, volts) for each driven input.
    drives: Vec<(usize, f64)>,
    drive_g: Option<f64>,
    gmin: f64,
}

impl Circuit<'_> {
    /// A saturated BJT whose collector/emitter pair duplicates an earlier saturated one.
    fn parallel_saturation(&self, states: &[Pwl]) -> Option<usize> {
        let mut pairs = Vec::new();
        for (i, (e, s)) in self.elems.iter().zip(states).enumerate() {
            if let (Elem::Bjt { c, e, .. }, Pwl::Bjt(BjtState::Saturation)) = (e, s) {
                if pairs.contains(&(*c, *e)) {
                    return Some(i);
                }
                pairs.push((*c, *e));
            }
        }
        None
    }
}

struct Layout {
    /// Index of the first auxiliary (current) unknown for each element.
    aux: Vec<Option<usize>>,
    drive_aux: Vec<Option<usize>>,
    size: usize,
}

impl<'a> Circuit<'a> {
    fn new(net: &'a Netlist, vector: u32, cfg: &SolverConfig) -> Result<Self, DcError> {
        let mut index: HashMap<&str, usize> = HashMap::new();
        let mut nodes = Vec::new();
        let mut id = |name: &'a str| -> Option<usize> {
            if name == GND {
                return None;
            }
            Some(*index.entry(name).or_insert_with(|| {
                nodes.push(name);
                nodes.len() - 1
            }))
        };
        let mut elems = Vec::with_capacity(net.components.len());
        for c in &net.components {
            let n: Vec<Option<usize>> = c.nodes.iter().map(|s| id(s)).collect();
            elems.push(match &c.device {
                Device::BjtNpn { model } => Elem::Bjt {
                    b: n[0],
                    c: n[1],
                    e: n[2],
                    model,
                },
                Device::Led { model } => Elem::Led {
                    a: n[0],
                    k: n[1],
                    model,
                },
                Device::Vsource { volts } => Elem::Source {
                    p: n[0],
                    n: n[1],
                    volts: *volts,
                },
                d => Elem::Conductance {
                    a: n[0],
                    b: n[1],
                    g: 1.0 / d.ohms().unwrap(),
                },
            });
        }
        let count = net.variables.len();
        let mut drives = Vec::with_capacity(count);
        for (i, var) in net.variables.iter().enumerate() {
            let node = net
                .inputs
                .get(var)
                .ok_or_else(|| DcError::UnknownInput(var.clone()))?;
            let high = vector >> (count - 1 - i) & 1 == 1;
            let volts = if high { cfg.drive.high } else { cfg.drive.low };
            if let Some(k) = id(node) {
                drives.push((k, volts));
            }
        }
        let drive_g = (cfg.drive.source_ohms > 0.0).then(|| 1.0 / cfg.drive.source_ohms);
        Ok(Circuit {
            nodes,
            elems,
            drives,
            drive_g,
            gmin: cfg.gmin,
        })
    }

    fn layout(&self, states: &[Pwl]) -> Layout {
        let mut next = self.nodes.len();
        let mut take = |k: usize| {
            let at = next;
            next += k;
            Some(at)
        };
        let aux = self
            .elems
            .iter()
            .zip(states)
            .map(|(e, s)| match (e, s) {
                (Elem::Source { .. }, _) => take(1),
                (Elem::Bjt { .. }, Pwl::Bjt(BjtState::Active)) => take(1),
                (Elem::Bjt { .. }, Pwl::Bjt(BjtState::Saturation)) => take(2),
                (Elem::Led { .. }, Pwl::Led(true)) => take(1),
                _ => None,
            })
            .collect();
        let drive_aux = self
            .drives
            .iter()
            .map(|_| {
                if self.drive_g.is_none() {
                    take(1)
                } else {
                    None
                }
            })
            .collect();
        Layout {
            aux,
            drive_aux,
            size: next,
        }
    }

    fn solve(&self, states: &[Pwl], lay: &Layout) -> Result<DVector<f64>, DcError> {
        let n = lay.size;
        let mut a = DMatrix::<f64>::zeros(n, n);
        let mut rhs = DVector::<f64>::zeros(n);
        for i in 0..self.nodes.len() {
            a[(i, i)] += self.gmin;
        }
        // Branch unknown `k` flows from `p` through the element to `q`;
        // the element enforces V(p) - V(q) = volts.
        let vsrc = |a: &mut DMatrix<f64>,
                    rhs: &mut DVector<f64>,
                    k: usize,
                    p: Option<usize>,
                    q: Option<usize>,
                    volts: f64| {
            if let Some(p) = p {
                a[(p, k)] += 1.0;
                a[(k, p)] += 1.0;
            }
            if let Some(q) = q {
                a[(q, k)] -= 1.0;
                a[(k, q)] -= 1.0;
            }
            rhs[k] += volts;
        };
        for ((e, s), aux) in self.elems.iter().zip(states).zip(&lay.aux) {
            match *e {
                Elem::Conductance { a: p, b: q, g } => {
                    if let Some(p) = p {
                        a[(p, p)] += g;
                    }
                    if let Some(q) = q {
                        a[(q, q)] += g;
                    }
                    if let (Some(p), Some(q)) = (p, q) {
                        a[(p, q)] -= g;
                        a[(q, p)] -= g;
                    }
                }
                Elem::Source { p, n: q, volts } => {
                    vsrc(&mut a, &mut rhs, aux.unwrap(), p, q, volts)
                }
                Elem::Led { a: p, k: q, model } => {
                    if let Some(k) = *aux {
                        vsrc(&mut a, &mut rhs, k, p, q, model.vf);
                    }
                }
                Elem::Bjt { b, c, e, model } => match s {
                    Pwl::Bjt(BjtState::Active) => {
                        let k = aux.unwrap();
                        vsrc(&mut a, &mut rhs, k, b, e, model.vbe_on);
                        if let Some(c) = c {
                            a[(c, k)] += model.beta;
                        }
                        if let Some(e) = e {
                            a[(e, k)] -= model.beta;
                        }
                    }
                    Pwl::Bjt(BjtState::Saturation) => {
                        let k = aux.unwrap();
                        vsrc(&mut a, &mut rhs, k, b, e, model.vbe_on);
                        vsrc(&mut a, &mut rhs, k + 1, c, e, model.vce_sat);
                    }
                    _ => {}
                },
            }
        }
        for (&(node, volts), aux) in self.drives.iter().zip(&lay.drive_aux) {
            match (self.drive_g, aux) {
                (Some(g), _) => {
                    a[(node, node)] += g;
                    rhs[node] += g * volts;
                }
                (None, Some(k)) => vsrc(&mut a, &mut rhs, *k, Some(node), None, volts),
                (None, None) => unreachable!(),
            }
        }
        linear_solve(a, rhs)
    }

    fn volt(x: &DVector<f64>, n: Option<usize>) -> f64 {
        n.map_or(0.0, |i| x[i])
    }

    /// Proposed state for each device whose assumed state is inconsistent.
    fn proposals(&self, states: &[Pwl], lay: &Layout, x: &DVector<f64>) -> Vec<(usize, Pwl)> {
        let v = |n| Self::volt(x, n);
        let mut out = Vec::new();
        for (i, ((e, s), aux)) in self.elems.iter().zip(states).zip(&lay.aux).enumerate() {
            let next = match (*e, *s) {
                (Elem::Bjt { b, e, model, .. }, Pwl::Bjt(BjtState::Cutoff)) => {
                    (v(b) - v(e) >= model.vbe_on + V_TOL).then_some(BjtState::Active)
                }
                (Elem::Bjt { c, e, model, .. }, Pwl::Bjt(BjtState::Active)) => {
                    let ib = x[aux.unwrap()];
                    if ib < -I_TOL {
                        Some(BjtState::Cutoff)
                    } else if v(c) - v(e) < model.vce_sat - V_TOL {
                        Some(BjtState::Saturation)
                    } else {
                        None
                    }
                }
                (Elem::Bjt { model, .. }, Pwl::Bjt(BjtState::Saturation)) => {
                    let k = aux.unwrap();
                    let (ib, ic) = (x[k], x[k + 1]);
                    if ib < -I_TOL {
                        Some(BjtState::Cutoff)
                    } else if ic > model.beta * ib + I_TOL {
                        Some(BjtState::Active)
                    } else {
                        None
                    }
                }
                (Elem::Led { a, k, model }, Pwl::Led(false)) => {
                    if v(a) - v(k) >= model.vf + V_TOL {
                        out.push((i, Pwl::Led(true)));
                    }
                    None
                }
                (Elem::Led { .. }, Pwl::Led(true)) => {
                    if x[aux.unwrap()] < -I_TOL {
                        out.push((i, Pwl::Led(false)));
                    }
                    None
                }
                _ => None,
            };
            if let Some(s) = next {
                out.push((i, Pwl::Bjt(s)));
            }
        }
        out
    }
}

fn linear_solve(a: DMatrix<f64>, rhs: DVector<f64>) -> Result<DVector<f64>, DcError> {
    let scale = rhs.amax().max(1.0);
    let ok = |x: &DVector<f64>| {
        x.iter().all(|v| v.is_finite()) && (&a * x - &rhs).amax() <= 1e-9 * scale
    };
    if let Some(x) = a.clone().lu().solve(&rhs) {
        if ok(&x) {
            return Ok(x);
        }
    }
    // Parallel ideal sources (e.g. both OR transistors saturated) leave
    // the split of their currents free; take the minimum-norm split.
    let x = a
        .clone()
        .svd(true, true)
        .solve(&rhs, 1e-12)
        .map_err(|e| DcError::SingularSystem(e.to_string()))?;
    if ok(&x) {
        Ok(x)
    } else {
        Err(DcError::SingularSystem(
            "inconsistent source constraints".into(),
        ))
    }
}

/// Solves one input vector, given as a bit string over `net.variables`.
pub fn solve_dc(net: &Netlist, vector: &str, cfg: &SolverConfig) -> Result<DcSolution, DcError> {
    let n = net.variables.len();
    let v = parse_vector(vector, n).map_err(|_| DcError::LengthMismatch {
        expected: n,
        found: vector.to_string(),
    })?;
    solve_index(net, v, cfg)
}

pub fn solve_index(net: &Netlist, vector: u32, cfg: &SolverConfig) -> Result<DcSolution, DcError> {
    let circuit = Circuit::new(net, vector, cfg)?;
    let mut states: Vec<Pwl> = circuit
        .elems
        .iter()
        .map(|e| match e {
            Elem::Led { .. } => Pwl::Led(false),
            _ => Pwl::Bjt(BjtState::Cutoff),
        })
        .collect();
    let mut seen: HashSet<Vec<Pwl>> = HashSet::new();
    let mut one_at_a_time = false;
    for iteration in 1..=cfg.max_iterations {
        let lay = circuit.layout(&states);
        let x = match circuit.solve(&states, &lay) {
            Ok(x) => x,
            Err(e) => match circuit.parallel_saturation(&states) {
                // Two saturated devices across the same node pair pin it twice;
                // let one of them carry the current as an active device instead.
                Some(i) => {
                    states[i] = Pwl::Bjt(BjtState::Active);
                    continue;
                }
                None => return Err(e),
            },
        };
        let proposals = circuit.proposals(&states, &lay, &x);
        if proposals.is_empty() {
            return Ok(collect(net, &circuit, &states, &lay, &x, iteration));
        }
        if !seen.insert(states.clone()) {
            one_at_a_time = true;
        }
        let take = if one_at_a_time { 1 } else { proposals.len() };
        for &(i, s) in &proposals[..take] {
            states[i] = s;
        }
    }
    Err(DcError::NoConvergence(cfg.max_iterations))
}

fn collect(
    net: &Netlist,
    circuit: &Circuit,
    states: &[Pwl],
    lay: &Layout,
    x: &DVector<f64>,
    iterations: usize,
) -> DcSolution {
    let v = |n| Circuit::volt(x, n);
    let mut sol = DcSolution {
        node_voltages: BTreeMap::new(),
        branch_currents: BTreeMap::new(),
        base_currents: BTreeMap::new(),
        drive_currents: BTreeMap::new(),
        bjt_states: BTreeMap::new(),
        led_states: BTreeMap::new(),
        iterations,
    };
    sol.node_voltages.insert(GND.to_string(), 0.0);
    for (i, name) in circuit.nodes.iter().enumerate() {
        sol.node_voltages.insert(name.to_string(), x[i]);
    }
    for (((c, e), s), aux) in net
        .components
        .iter()
        .zip(&circuit.elems)
        .zip(states)
        .zip(&lay.aux)
    {
        let name = c.name.clone();
        let current = match (*e, *s) {
            (Elem::Conductance { a, b, g }, _) => (v(a) - v(b)) * g,
            (Elem::Source { .. }, _) => x[aux.unwrap()],
            (Elem::Led { model, .. }, Pwl::Led(on)) => {
                let i = if on { x[aux.unwrap()] } else { 0.0 };
                sol.led_states.insert(name.clone(), model.classify(i));
                i
            }
            (Elem::Bjt { model, .. }, Pwl::Bjt(state)) => {
                let (ib, ic) = match state {
                    BjtState::Cutoff => (0.0, 0.0),
                    BjtState::Active => (x[aux.unwrap()], model.beta * x[aux.unwrap()]),
                    BjtState::Saturation => (x[aux.unwrap()], x[aux.unwrap() + 1]),
                };
                sol.base_currents.insert(name.clone(), ib);
                sol.bjt_states.insert(name.clone(), state);
                ic
            }
            _ => unreachable!("state kind follows element kind"),
        };
        sol.branch_currents.insert(name, current);
    }
    for (&(node, volts), aux) in circuit.drives.iter().zip(&lay.drive_aux) {
        let i = match (circuit.drive_g, aux) {
            (Some(g), _) => (x[node] - volts) * g,
            (_, Some(k)) => x[*k],
            _ => 0.0,
        };
        *sol.drive_currents
            .entry(circuit.nodes[node].to_string())
            .or_default() += i;
    }
    sol
}

/// Largest net current leaving any non-ground node, recomputed from the
/// reported branch currents and the Gmin shunts.
pub fn kcl_residual(net: &Netlist, sol: &DcSolution, gmin: f64) -> f64 {
    let mut leaving: BTreeMap<&str, f64> = BTreeMap::new();
    for (node, v) in &sol.node_voltages {
        leaving.insert(node, v * gmin);
    }
    let mut add = |node: &str, i: f64| {
        if let Some(slot) = leaving.get_mut(node) {
            *slot += i;
        }
    };
    for c in &net.components {
        let i = sol.branch_currents[&c.name];
        match c.device {
            Device::BjtNpn { .. } => {
                let ib = sol.base_currents[&c.name];
                add(&c.nodes[0], ib);
                add(&c.nodes[1], i);
                add(&c.nodes[2], -(ib + i));
            }
            _ => {
                add(&c.nodes[0], i);
                add(&c.nodes[1], -i);
            }
        }
    }
    for (node, i) in &sol.drive_currents {
        add(node, *i);
    }
    leaving
        .iter()
        .filter(|(n, _)| **n != GND)
        .map(|(_, i)| i.abs())
        .fold(0.0, f64::max)
}

/// Name of the LED hanging off an output's anode node, if any.
pub fn output_led<'a>(net: &'a Netlist, output: &str) -> Option<&'a str> {
    let anode = net.outputs.get(output)?;
    net.components
        .iter()
        .find(|c| matches!(c.device, Device::Led { .. }) && &c.nodes[0] == anode)
        .map(|c| c.name.as_str())
}

/// Logic value read at each output: LED ON, or voltage at or above the
/// threshold when the output has no LED.
pub fn read_outputs(net: &Netlist, sol: &DcSolution, cfg: &SolverConfig) -> Vec<bool> {
    net.output_names
        .iter()
        .map(|o| match output_led(net, o) {
            Some(led) => sol.led_states.get(led) == Some(&LedLevel::On),
            None => sol.voltage(&net.outputs[o]) >= cfg.logic_threshold,
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VectorResult {
    pub vector: String,
    pub solution: Result<DcSolution, DcError>,
    /// Logic read at each output; empty when the solve failed.
    pub outputs: Vec<bool>,
    pub matches: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub vectors: Vec<VectorResult>,
    pub all_match: bool,
}

/// Solves every input vector of `table`; solver failures are recorded per
/// vector and count as mismatches.
pub fn sweep_all(
    net: &Netlist,
    table: &TruthTable,
    cfg: &SolverConfig,
) -> Result<SweepReport, DcError> {
    let n = table.input_count();
    if net.variables.len() != n {
        return Err(DcError::LengthMismatch {
            expected: net.variables.len(),
            found: format!("table with {n} inputs"),
        });
    }
    let vectors: Vec<VectorResult> = (0..1u32 << n)
        .map(|v| {
            let solution = solve_index(net, v, cfg);
            let outputs = match &solution {
                Ok(sol) => read_outputs(net, sol, cfg),
                Err(_) => Vec::new(),
            };
            let matches = outputs.len() == table.output_count()
                && table.row(v).iter().zip(&outputs).all(|(c, &b)| c.admits(b));
            VectorResult {
                vector: format_vector(v, n),
                solution,
                outputs,
                matches,
            }
        })
        .collect();
    let all_match = vectors.iter().all(|r| r.matches);
    Ok(SweepReport { vectors, all_match })
}

/// Expected logic at every net for an input vector, from the gate functions.
pub fn ideal_net_levels(net: &Netlist, vector: u32) -> BTreeMap<String, bool> {
    let n = net.variables.len();
    let mut level = BTreeMap::new();
    level.insert(crate::rtlnet::VCC.to_string(), true);
    level.insert(GND.to_string(), false);
    for (i, var) in net.variables.iter().enumerate() {
        let bit = vector >> (n - 1 - i) & 1 == 1;
        level.insert(var.clone(), bit);
    }
    // Gates are stored NOT, AND, OR, so one pass in order suffices.
    for g in &net.gates {
        let get = |p: &str| level[&g.ports[p]];
        let out = match g.kind {
            crate::rtlnet::GateKind::Not => !get("in"),
            crate::rtlnet::GateKind::And2 => get("a") && get("b"),
            crate::rtlnet::GateKind::Or2 => get("a") || get("b"),
        };
        level.insert(g.ports["out"].clone(), out);
    }
    level
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rtlnet::{gate_template, Component, GateKind, GateValues, VCC};

    fn bare_not() -> Netlist {
        let mut net = Netlist {
            schema_version: 1,
            variables: vec!["A".into()],
            output_names: vec![],
            inputs: [("A".to_string(), "A".to_string())].into(),
            outputs: BTreeMap::new(),
            gates: vec![],
            components: vec![Component::new(
                "VBAT",
                Device::Vsource { volts: 9.0 },
                &[VCC, GND],
            )],
        };
        let t = gate_template(GateKind::Not, GateValues::default(), BjtModel::default());
        for mut c in t.components {
            for n in &mut c.nodes {
                *n = match n.as_str() {
                    "in" => "A".into(),
                    "out" => "Y".into(),
                    "vcc" => VCC.into(),
                    "gnd" => GND.into(),
                    other => other.to_string(),
                };
            }
            net.components.push(c);
        }
        net
    }

    #[test]
    fn bare_inverter_levels() {
        let net = bare_not();
        let cfg = SolverConfig::default();
        let hi = solve_dc(&net, "1", &cfg).unwrap();
        assert!((hi.voltage("Y") - 0.2).abs() < 1e-9);
        assert_eq!(hi.bjt_states["Q"], BjtState::Saturation);
        let lo = solve_dc(&net, "0", &cfg).unwrap();
        assert!((lo.voltage("Y") - 9.0).abs() < 1e-6);
        assert_eq!(lo.bjt_states["Q"], BjtState::Cutoff);
        for s in [&hi, &lo] {
            assert!(kcl_residual(&net, s, cfg.gmin) < 1e-9);
        }
    }

    #[test]
    fn parallel_saturated_pair_solves() {
        let mut net = bare_not();
        let twins: Vec<Component> = net.components[1..]
            .iter()
            .map(|c| {
                let mut c = c.clone();
                c.name.push('2');
                for n in &mut c.nodes {
                    if ![VCC, GND, "A", "Y"].contains(&n.as_str()) {
                        n.push('2');
                    }
                }
                c
            })
            .collect();
        net.components.extend(twins);
        let cfg = SolverConfig::default();
        let sol = solve_dc(&net, "1", &cfg).unwrap();
        assert!((sol.voltage("Y") - 0.2).abs() < 1e-9);
        assert!(kcl_residual(&net, &sol, cfg.gmin) < 1e-9);
    }

    #[test]
    fn divider_midpoint() {
        let net = Netlist {
            schema_version: 1,
            variables: vec![],
            output_names: vec![],
            inputs: BTreeMap::new(),
            outputs: BTreeMap::new(),
            gates: vec![],
            components: vec![
                Component::new("V", Device::Vsource { volts: 9.0 }, &[VCC, GND]),
                Component::new("R1", Device::Resistor { ohms: 1000.0 }, &[VCC, "M"]),
                Component::new("R2", Device::Resistor { ohms: 1000.0 }, &["M", GND]),
            ],
        };
        let sol = solve_index(&net, 0, &SolverConfig::default()).unwrap();
        // Gmin pulls the midpoint down by about 2 nV.
        assert!((sol.voltage("M") - 4.5).abs() < 1e-8);
    }

    fn led_probe(model: LedModel, volts: f64) -> LedLevel {
        let net = Netlist {
            schema_version: 1,
            variables: vec![],
            output_names: vec!["Z".into()],
            inputs: BTreeMap::new(),
            outputs: [("Z".to_string(), "Z.led".to_string())].into(),
            gates: vec![],
            components: vec![
                Component::new("V", Device::Vsource { volts }, &["Z", GND]),
                Component::new("RS", Device::Resistor { ohms: 1000.0 }, &["Z", "Z.led"]),
                Component::new("LED", Device::Led { model }, &["Z.led", GND]),
            ],
        };
        let sol = solve_index(&net, 0, &SolverConfig::default()).unwrap();
        classify_led(&sol, "LED").unwrap()
    }

    #[test]
    fn led_classification() {
        assert_eq!(led_probe(LedModel::red(), 4.7), LedLevel::On);
        assert_eq!(led_probe(LedModel::blue(), 2.0), LedLevel::Off);
        assert_eq!(led_probe(LedModel::red(), 2.0), LedLevel::Dim);
    }

    #[test]
    fn unknown_led_and_bad_vector() {
        let net = bare_not();
        let sol = solve_dc(&net, "1", &SolverConfig::default()).unwrap();
        assert!(matches!(
            classify_led(&sol, "LED_Q"),
            Err(DcError::UnknownLed(_))
        ));
        assert!(matches!(
            solve_dc(&net, "10", &SolverConfig::default()),
            Err(DcError::LengthMismatch { .. })
        ));
    }
}
