//! Turns a layout into series thread resistance, joint contacts, port
//! rebinding and shunt sites for `rtlnet::attach_parasitics`.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::rtlnet::{
    Component, ContactRole, Device, GateKind, ParasiticAnnotation, PortBinding, ShuntSite,
};

use super::geom::arc_position;
use super::{FabricLayout, JointKind, BATTERY};

/// Electrical constants for extraction. Contact, bridge and leakage values
/// are calibration constants rather than measured figures.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ParasiticConfig {
    pub thread_ohms_per_m: f64,
    pub joint_ohms: f64,
    pub bridge_ohms: f64,
    pub leakage_ohms: f64,
    pub loose_joint_ohms: f64,
}

impl Default for ParasiticConfig {
    fn default() -> Self {
        ParasiticConfig {
            thread_ohms_per_m: 100.0,
            joint_ohms: 5.0,
            bridge_ohms: 3500.0,
            leakage_ohms: 5000.0,
            loose_joint_ohms: 10_000.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ParasiticScenario {
    /// Every short candidate open.
    Nominal,
    /// Every short candidate leaking.
    WorstCase,
}

/// Explicit faults by index into `short_candidates` and `joints`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaultSet {
    pub shorts: BTreeSet<usize>,
    pub loose_joints: BTreeSet<usize>,
}

impl FaultSet {
    pub fn is_empty(&self) -> bool {
        self.shorts.is_empty() && self.loose_joints.is_empty()
    }
}

pub fn extract_parasitics(
    layout: &FabricLayout,
    cfg: &ParasiticConfig,
    scenario: ParasiticScenario,
) -> ParasiticAnnotation {
    let faults = match scenario {
        ParasiticScenario::Nominal => FaultSet::default(),
        ParasiticScenario::WorstCase => FaultSet {
            shorts: (0..layout.short_candidates.len()).collect(),
            loose_joints: BTreeSet::new(),
        },
    };
    extract_with_faults(layout, cfg, &faults)
}

const MERGE_CM: f64 = 1e-6;

fn find(parent: &mut [usize], mut i: usize) -> usize {
    while parent[i] != i {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    i
}

fn is_driver(layout: &FabricLayout, gate: &str, port: &str) -> bool {
    if gate == BATTERY || port == "out" {
        return true;
    }
    port == "in"
        && layout
            .placement(gate)
            .is_some_and(|p| p.kind == GateKind::Not)
}

pub fn extract_with_faults(
    layout: &FabricLayout,
    cfg: &ParasiticConfig,
    faults: &FaultSet,
) -> ParasiticAnnotation {
    let traces = &layout.traces;
    let position = |t: usize, p| arc_position(&traces[t].points, p, f64::INFINITY).unwrap_or(0.0);

    // Tap positions along each trace.
    let mut taps: Vec<Vec<f64>> = traces.iter().map(|t| vec![0.0, t.length_cm()]).collect();
    for a in &layout.attachments {
        taps[a.trace].push(position(a.trace, a.at));
    }
    for j in &layout.joints {
        for &t in &j.traces {
            taps[t].push(position(t, j.at));
        }
    }
    for s in &layout.short_candidates {
        for &t in &s.traces {
            taps[t].push(position(t, s.at));
        }
    }
    for v in &mut taps {
        v.sort_by(f64::total_cmp);
        v.dedup_by(|b, a| (*b - *a).abs() < MERGE_CM);
    }
    let offset: Vec<usize> = taps
        .iter()
        .scan(0, |acc, v| {
            let o = *acc;
            *acc += v.len();
            Some(o)
        })
        .collect();
    let total = offset.last().map_or(0, |o| o + taps.last().unwrap().len());
    let tap_of = |t: usize, s: f64| {
        let v = &taps[t];
        let k = v
            .iter()
            .enumerate()
            .min_by(|a, b| (a.1 - s).abs().total_cmp(&(b.1 - s).abs()))
            .map_or(0, |(k, _)| k);
        offset[t] + k
    };
    let mut raw_name = Vec::with_capacity(total);
    for (t, v) in taps.iter().enumerate() {
        for k in 0..v.len() {
            raw_name.push(format!("{}/{}@{k}", traces[t].net, traces[t].name));
        }
    }

    let mut parent: Vec<usize> = (0..total).collect();
    for j in layout.joints.iter().filter(|j| j.kind == JointKind::Splice) {
        let a = find(
            &mut parent,
            tap_of(j.traces[0], position(j.traces[0], j.at)),
        );
        let b = find(
            &mut parent,
            tap_of(j.traces[1], position(j.traces[1], j.at)),
        );
        parent[a.max(b)] = a.min(b);
    }
    let mut class_name: BTreeMap<usize, String> = BTreeMap::new();
    for a in &layout.attachments {
        if is_driver(layout, &a.gate, &a.port) {
            let root = find(&mut parent, tap_of(a.trace, position(a.trace, a.at)));
            class_name.insert(root, traces[a.trace].net.clone());
        }
    }
    let names: Vec<String> = (0..total)
        .map(|i| {
            let root = find(&mut parent, i);
            class_name
                .get(&root)
                .cloned()
                .unwrap_or_else(|| raw_name[root].clone())
        })
        .collect();
    let node = |t: usize, s: f64| names[tap_of(t, s)].clone();

    let mut ann = ParasiticAnnotation::default();
    let mut routed: BTreeSet<String> = BTreeSet::new();
    for (t, tr) in traces.iter().enumerate() {
        routed.insert(tr.net.clone());
        for (k, w) in taps[t].windows(2).enumerate() {
            let (a, b) = (&names[offset[t] + k], &names[offset[t] + k + 1]);
            let length_m = (w[1] - w[0]) / 100.0;
            if a == b || length_m <= 0.0 {
                continue;
            }
            ann.elements.push(Component::new(
                format!("TH_{}_{k}", tr.name),
                Device::ThreadSegment {
                    ohms: length_m * cfg.thread_ohms_per_m,
                    length_m,
                },
                &[a, b],
            ));
        }
    }
    ann.routed_nets = routed.into_iter().collect();

    for (i, j) in layout.joints.iter().enumerate() {
        let (ohms, role) = match j.kind {
            JointKind::Splice => continue,
            JointKind::Programmable => (cfg.joint_ohms, ContactRole::Joint),
            JointKind::Bridge => (cfg.bridge_ohms, ContactRole::Bridge),
        };
        let ohms = if faults.loose_joints.contains(&i) {
            cfg.loose_joint_ohms
        } else {
            ohms
        };
        let a = node(j.traces[0], position(j.traces[0], j.at));
        let b = node(j.traces[1], position(j.traces[1], j.at));
        ann.elements.push(Component::new(
            format!("CT_{}", j.name),
            Device::Contact { ohms, role },
            &[&a, &b],
        ));
    }

    for a in &layout.attachments {
        if a.gate == BATTERY || is_driver(layout, &a.gate, &a.port) {
            continue;
        }
        ann.bindings.push(PortBinding {
            gate: a.gate.clone(),
            port: a.port.clone(),
            node: node(a.trace, position(a.trace, a.at)),
        });
    }

    for (i, s) in layout.short_candidates.iter().enumerate() {
        let a = node(s.traces[0], position(s.traces[0], s.at));
        let b = node(s.traces[1], position(s.traces[1], s.at));
        ann.shunts.push(ShuntSite {
            name: format!("SH_{i}"),
            nodes: [a, b],
            ohms: cfg.leakage_ohms,
            enabled: faults.shorts.contains(&i),
        });
    }

    for (t, tr) in traces
        .iter()
        .enumerate()
        .filter(|(_, t)| t.role == super::TraceRole::InputLine)
    {
        ann.probes.insert(tr.net.clone(), node(t, tr.length_cm()));
    }
    ann
}
