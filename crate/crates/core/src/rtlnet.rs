//! Resistor-transistor-logic netlists: gate recipes, PLA expansion and
//! parasitic attachment.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::plamap::PlaMatrix;

pub const SCHEMA_VERSION: u32 = 1;
pub const VCC: &str = "VCC";
pub const GND: &str = "GND";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RtlError {
    #[error("FANIN_EXCEEDED: {0}")]
    FaninExceeded(String),
    #[error("EMPTY_MATRIX: no product terms to build")]
    EmptyMatrix,
    #[error("UNROUTED_NET: {0}")]
    UnroutedNet(String),
    #[error("NAME_COLLISION: signal name {0:?} is reserved")]
    NameCollision(String),
    #[error("DISCONNECTED: node {0} is not reachable from VCC or GND")]
    Disconnected(String),
    #[error("BAD_ANNOTATION: {0}")]
    BadAnnotation(String),
}

/// Piecewise-linear NPN parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct BjtModel {
    pub vbe_on: f64,
    pub vce_sat: f64,
    pub beta: f64,
}

impl Default for BjtModel {
    fn default() -> Self {
        BjtModel {
            vbe_on: 0.7,
            vce_sat: 0.2,
            beta: 200.0,
        }
    }
}

/// Constant-drop LED with visibility thresholds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LedModel {
    pub name: String,
    pub vf: f64,
    pub i_on: f64,
    pub i_dim: f64,
}

impl LedModel {
    pub fn red() -> Self {
        LedModel {
            name: "red".into(),
            vf: 1.8,
            i_on: 1e-3,
            i_dim: 5e-5,
        }
    }

    pub fn blue() -> Self {
        LedModel {
            name: "blue".into(),
            vf: 2.6,
            i_on: 1e-3,
            i_dim: 5e-5,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ContactRole {
    Joint,
    Bridge,
    Shunt,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Device {
    Resistor { ohms: f64 },
    BjtNpn { model: BjtModel },
    ThreadSegment { ohms: f64, length_m: f64 },
    Contact { ohms: f64, role: ContactRole },
    Led { model: LedModel },
    Vsource { volts: f64 },
}

impl Device {
    /// Resistance of two-terminal resistive devices.
    pub fn ohms(&self) -> Option<f64> {
        match *self {
            Device::Resistor { ohms }
            | Device::ThreadSegment { ohms, .. }
            | Device::Contact { ohms, .. } => Some(ohms),
            _ => None,
        }
    }
}

/// One circuit element. BJT nodes are (base, collector, emitter); LED and
/// source nodes are (positive, negative).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Component {
    pub name: String,
    #[serde(flatten)]
    pub device: Device,
    pub nodes: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gate: Option<String>,
    /// Per terminal, the gate port it is wired to.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub ports: Vec<Option<String>>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub parasitic: bool,
}

impl Component {
    pub fn new(name: impl Into<String>, device: Device, nodes: &[&str]) -> Self {
        Component {
            name: name.into(),
            device,
            nodes: nodes.iter().map(|s| s.to_string()).collect(),
            gate: None,
            ports: Vec::new(),
            parasitic: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum GateKind {
    Not,
    And2,
    Or2,
}

impl GateKind {
    pub fn input_ports(self) -> &'static [&'static str] {
        match self {
            GateKind::Not => &["in"],
            _ => &["a", "b"],
        }
    }

    pub fn ports(self) -> &'static [&'static str] {
        match self {
            GateKind::Not => &["in", "out", "vcc", "gnd"],
            _ => &["a", "b", "out", "vcc", "gnd"],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GateInstance {
    pub name: String,
    pub kind: GateKind,
    /// Port name to net name.
    pub ports: BTreeMap<String, String>,
}

/// Gate recipe with open terminals. Port terminals carry the port name as
/// their node; all other nodes are gate-internal.
#[derive(Debug, Clone, PartialEq)]
pub struct GateTemplate {
    pub kind: GateKind,
    pub components: Vec<Component>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GateValues {
    pub r_base: f64,
    pub r_load: f64,
}

impl Default for GateValues {
    fn default() -> Self {
        GateValues {
            r_base: 10_000.0,
            r_load: 1_000.0,
        }
    }
}

pub fn gate_template(kind: GateKind, values: GateValues, bjt: BjtModel) -> GateTemplate {
    fn part(name: &str, device: Device, nodes: &[&str], ports: &[&str]) -> Component {
        let mut c = Component::new(name, device, nodes);
        c.ports = nodes
            .iter()
            .map(|n| ports.contains(n).then(|| n.to_string()))
            .collect();
        c
    }
    let ports = kind.ports();
    let rb = Device::Resistor {
        ohms: values.r_base,
    };
    let rl = Device::Resistor {
        ohms: values.r_load,
    };
    let q = Device::BjtNpn { model: bjt };
    let components = match kind {
        GateKind::Not => vec![
            part("R_in", rb, &["in", "b"], ports),
            part("Q", q, &["b", "out", "gnd"], ports),
            part("R_c", rl, &["vcc", "out"], ports),
        ],
        GateKind::And2 => vec![
            part("R_a", rb.clone(), &["a", "b1"], ports),
            part("R_b", rb, &["b", "b2"], ports),
            part("Q1", q.clone(), &["b1", "vcc", "mid"], ports),
            part("Q2", q, &["b2", "mid", "out"], ports),
            part("R_e", rl, &["out", "gnd"], ports),
        ],
        GateKind::Or2 => vec![
            part("R_a", rb.clone(), &["a", "b1"], ports),
            part("R_b", rb, &["b", "b2"], ports),
            part("Q1", q.clone(), &["b1", "vcc", "out"], ports),
            part("Q2", q, &["b2", "vcc", "out"], ports),
            part("R_e", rl, &["out", "gnd"], ports),
        ],
    };
    GateTemplate { kind, components }
}

/// Electrical parameters used when expanding a matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CircuitConfig {
    pub supply_volts: f64,
    pub bjt: BjtModel,
    pub gate: GateValues,
    /// Assigned to outputs cyclically.
    pub leds: Vec<LedModel>,
    pub led_series_ohms: f64,
}

impl Default for CircuitConfig {
    fn default() -> Self {
        CircuitConfig {
            supply_volts: 9.0,
            bjt: BjtModel::default(),
            gate: GateValues::default(),
            leds: vec![LedModel::red(), LedModel::blue()],
            led_series_ohms: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Netlist {
    pub schema_version: u32,
    pub variables: Vec<String>,
    pub output_names: Vec<String>,
    /// Input-line label to the node that carries it.
    pub inputs: BTreeMap<String, String>,
    /// Output label to its LED anode node.
    pub outputs: BTreeMap<String, String>,
    pub gates: Vec<GateInstance>,
    pub components: Vec<Component>,
}

pub fn complement(var: &str) -> String {
    format!("{var}'")
}

pub fn not_gate(var: &str) -> String {
    format!("NOT_{var}")
}

pub fn and_gate(term: usize) -> String {
    format!("AND_P{term}")
}

pub fn or_gate(output: &str) -> String {
    format!("OR_{output}")
}

pub fn term_net(term: usize) -> String {
    format!("P{term}")
}

pub fn led_name(output: &str) -> String {
    format!("LED_{output}")
}

impl Netlist {
    pub fn nodes(&self) -> BTreeSet<&str> {
        self.components
            .iter()
            .flat_map(|c| c.nodes.iter().map(String::as_str))
            .collect()
    }

    pub fn gate(&self, name: &str) -> Option<&GateInstance> {
        self.gates.iter().find(|g| g.name == name)
    }

    pub fn component(&self, name: &str) -> Option<&Component> {
        self.components.iter().find(|c| c.name == name)
    }

    pub fn gate_count(&self, kind: GateKind) -> usize {
        self.gates.iter().filter(|g| g.kind == kind).count()
    }

    pub fn vsource_count(&self) -> usize {
        self.components
            .iter()
            .filter(|c| matches!(c.device, Device::Vsource { .. }))
            .count()
    }

    /// Node a gate port is attached to, after any parasitic rewiring.
    pub fn port_node(&self, gate: &str, port: &str) -> Option<&str> {
        self.components
            .iter()
            .filter(|c| c.gate.as_deref() == Some(gate))
            .find_map(|c| {
                c.ports
                    .iter()
                    .position(|p| p.as_deref() == Some(port))
                    .map(|i| c.nodes[i].as_str())
            })
    }

    /// Every node must reach VCC or GND through some component.
    pub fn check_connected(&self) -> Result<(), RtlError> {
        let mut adj: HashMap<&str, Vec<&str>> = HashMap::new();
        for c in &self.components {
            for a in &c.nodes {
                for b in &c.nodes {
                    adj.entry(a).or_default().push(b);
                }
            }
        }
        let mut seen: BTreeSet<&str> = BTreeSet::new();
        let mut stack = vec![VCC, GND];
        while let Some(n) = stack.pop() {
            if seen.insert(n) {
                stack.extend(adj.get(n).into_iter().flatten().copied());
            }
        }
        match adj.keys().filter(|n| !seen.contains(*n)).min() {
            Some(n) => Err(RtlError::Disconnected(n.to_string())),
            None => Ok(()),
        }
    }

    fn instantiate(&mut self, name: String, template: &GateTemplate, nets: &[(&str, String)]) {
        let ports: BTreeMap<String, String> = nets
            .iter()
            .map(|(p, n)| (p.to_string(), n.clone()))
            .collect();
        for part in &template.components {
            let mut c = part.clone();
            c.name = format!("{name}.{}", part.name);
            c.gate = Some(name.clone());
            for (node, port) in c.nodes.iter_mut().zip(&part.ports) {
                *node = match port {
                    Some(p) => ports[p].clone(),
                    None => format!("{name}.{node}"),
                };
            }
            self.components.push(c);
        }
        self.gates.push(GateInstance {
            name,
            kind: template.kind,
            ports,
        });
    }
}

/// Builds one NOT per variable, one AND2 per product term and one OR2 plus
/// LED per output. One-literal terms and one-term outputs tie both gate
/// inputs to the same net; term-less outputs tie them to GND.
pub fn expand_netlist(matrix: &PlaMatrix, cfg: &CircuitConfig) -> Result<Netlist, RtlError> {
    if matrix.term_count() == 0 {
        return Err(RtlError::EmptyMatrix);
    }
    let vars = matrix.inputs();
    let outs = matrix.outputs();
    let mut reserved: BTreeSet<String> = [VCC, GND].iter().map(|s| s.to_string()).collect();
    reserved.extend((0..matrix.term_count()).map(term_net));
    for name in vars.iter().chain(outs) {
        if reserved.contains(name) || name.ends_with('\'') {
            return Err(RtlError::NameCollision(name.clone()));
        }
    }
    for t in 0..matrix.term_count() {
        let k = matrix.term_lines(t).len();
        if k > 2 {
            return Err(RtlError::FaninExceeded(format!(
                "term {} has {k} literals",
                matrix.term_labels()[t]
            )));
        }
    }
    for (k, name) in outs.iter().enumerate() {
        let c = matrix.output_terms(k).len();
        if c > 2 {
            return Err(RtlError::FaninExceeded(format!(
                "output {name} has {c} terms"
            )));
        }
    }

    let mut net = Netlist {
        schema_version: SCHEMA_VERSION,
        variables: vars.to_vec(),
        output_names: outs.to_vec(),
        inputs: BTreeMap::new(),
        outputs: BTreeMap::new(),
        gates: Vec::new(),
        components: vec![Component::new(
            "VBAT",
            Device::Vsource {
                volts: cfg.supply_volts,
            },
            &[VCC, GND],
        )],
    };
    let rails = || [("vcc", VCC.to_string()), ("gnd", GND.to_string())];
    let lines = matrix.input_lines();

    let not = gate_template(GateKind::Not, cfg.gate, cfg.bjt);
    for v in vars {
        let nets = [("in", v.clone()), ("out", complement(v))];
        net.instantiate(not_gate(v), &not, &[&nets[..], &rails()].concat());
        net.inputs.insert(v.clone(), v.clone());
        net.inputs.insert(complement(v), complement(v));
    }

    let and = gate_template(GateKind::And2, cfg.gate, cfg.bjt);
    for t in 0..matrix.term_count() {
        let used = matrix.term_lines(t);
        let a = lines[used[0]].clone();
        let b = lines[*used.last().unwrap()].clone();
        let nets = [("a", a), ("b", b), ("out", term_net(t))];
        net.instantiate(and_gate(t), &and, &[&nets[..], &rails()].concat());
    }

    let or = gate_template(GateKind::Or2, cfg.gate, cfg.bjt);
    for (k, name) in outs.iter().enumerate() {
        let used = matrix.output_terms(k);
        let (a, b) = match (used.first(), used.last()) {
            (Some(&a), Some(&b)) => (term_net(a), term_net(b)),
            _ => (GND.to_string(), GND.to_string()),
        };
        let nets = [("a", a), ("b", b), ("out", name.clone())];
        net.instantiate(or_gate(name), &or, &[&nets[..], &rails()].concat());
    }

    for (k, name) in outs.iter().enumerate() {
        let model = cfg.leds[k % cfg.leds.len()].clone();
        let anode = if cfg.led_series_ohms > 0.0 {
            let anode = format!("{name}.led");
            net.components.push(Component::new(
                format!("RS_{name}"),
                Device::Resistor {
                    ohms: cfg.led_series_ohms,
                },
                &[name, &anode],
            ));
            anode
        } else {
            name.clone()
        };
        net.components.push(Component::new(
            led_name(name),
            Device::Led { model },
            &[&anode, GND],
        ));
        net.outputs.insert(name.clone(), anode);
    }
    net.check_connected()?;
    Ok(net)
}

/// Reattaches a gate port to a tap node on its routed net.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PortBinding {
    pub gate: String,
    pub port: String,
    pub node: String,
}

/// Possible leakage path at a short candidate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShuntSite {
    pub name: String,
    pub nodes: [String; 2],
    pub ohms: f64,
    pub enabled: bool,
}

/// Layout-derived series elements, port rewiring and shunt sites.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParasiticAnnotation {
    #[serde(default = "schema_v1")]
    pub schema_version: u32,
    pub routed_nets: Vec<String>,
    pub elements: Vec<Component>,
    pub bindings: Vec<PortBinding>,
    pub shunts: Vec<ShuntSite>,
    /// Net name to the node a measurement of that net should read, such as
    /// the far end of an input line.
    #[serde(default)]
    pub probes: BTreeMap<String, String>,
}

fn schema_v1() -> u32 {
    SCHEMA_VERSION
}

impl Default for ParasiticAnnotation {
    fn default() -> Self {
        ParasiticAnnotation {
            schema_version: SCHEMA_VERSION,
            routed_nets: Vec::new(),
            elements: Vec::new(),
            bindings: Vec::new(),
            shunts: Vec::new(),
            probes: BTreeMap::new(),
        }
    }
}

/// Inserts thread segments and contacts, rewires gate ports onto their taps
/// and adds every enabled shunt.
pub fn attach_parasitics(net: &Netlist, ann: &ParasiticAnnotation) -> Result<Netlist, RtlError> {
    let mut fanout: BTreeMap<&str, BTreeSet<&str>> = BTreeMap::new();
    for g in &net.gates {
        for n in g.ports.values() {
            fanout.entry(n).or_default().insert(&g.name);
        }
    }
    for (n, gates) in &fanout {
        if gates.len() >= 2 && !ann.routed_nets.iter().any(|r| r == n) {
            return Err(RtlError::UnroutedNet(n.to_string()));
        }
    }

    let mut binding: HashMap<(&str, &str), &str> = HashMap::new();
    for b in &ann.bindings {
        let known = net
            .gate(&b.gate)
            .is_some_and(|g| g.ports.contains_key(&b.port));
        if !known {
            return Err(RtlError::BadAnnotation(format!(
                "no port {}.{}",
                b.gate, b.port
            )));
        }
        binding.insert((&b.gate, &b.port), &b.node);
    }

    let mut out = net.clone();
    for c in &mut out.components {
        let Some(gate) = c.gate.as_deref() else {
            continue;
        };
        for (node, port) in c.nodes.iter_mut().zip(&c.ports) {
            if let Some(tap) = port.as_deref().and_then(|p| binding.get(&(gate, p))) {
                *node = tap.to_string();
            }
        }
    }
    for e in &ann.elements {
        let mut e = e.clone();
        e.parasitic = true;
        out.components.push(e);
    }
    for s in ann.shunts.iter().filter(|s| s.enabled) {
        let mut c = Component::new(
            &s.name,
            Device::Contact {
                ohms: s.ohms,
                role: ContactRole::Shunt,
            },
            &[&s.nodes[0], &s.nodes[1]],
        );
        c.parasitic = true;
        out.components.push(c);
    }
    out.check_connected()?;
    Ok(out)
}
