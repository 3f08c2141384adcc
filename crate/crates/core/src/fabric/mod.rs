//! Fabric placement and routing for the single- and multi-layer garments,
//! crossing analysis, stretch and parasitic extraction.

mod extract;
pub mod geom;
mod multi;
mod single;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::plamap::PlaMatrix;
use crate::rtlnet::{GateKind, GND, VCC};
pub use extract::{
    extract_parasitics, extract_with_faults, FaultSet, ParasiticConfig, ParasiticScenario,
};
use geom::{convex_overlap, polyline_length, pt, segment_distance, segment_intersection, Point};

pub const SCHEMA_VERSION: u32 = 1;
/// Gate name used for the battery terminals in attachments.
pub const BATTERY: &str = "VBAT";
pub const MAX_INPUTS: usize = 4;
pub const MAX_TERMS: usize = 6;
pub const MAX_OUTPUTS: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FabricError {
    #[error("PANEL_TOO_SMALL: {0}")]
    PanelTooSmall(String),
    #[error("UNSUPPORTED_SCALE: {0}")]
    UnsupportedScale(String),
    #[error("INVALID_STRAIN: {0}")]
    InvalidStrain(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Strategy {
    Single,
    Multi,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Stitch {
    Zigzag,
    Straight,
    Satin,
}

impl Stitch {
    /// Elongation a stitch takes before it is overstrained.
    pub fn max_strain(self) -> f64 {
        match self {
            Stitch::Zigzag => 19.5 / 14.5 - 1.0,
            Stitch::Straight | Stitch::Satin => 0.05,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Axis {
    Vertical,
    Horizontal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum TraceRole {
    /// Input-plane line (a variable or its complement).
    InputLine,
    /// AND-plane or OR-plane track.
    PlaneLine,
    /// Jumper strip carrying a connection across other circuitry.
    Bridge,
    Rail,
    Stub,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Severity {
    Medium,
    High,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum JointKind {
    /// Hand-sewn programming stitch between planes.
    Programmable,
    /// Connection made through a fabric bridge strip.
    Bridge,
    /// Continuous thread; no contact resistance.
    Splice,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Panel {
    pub width_cm: f64,
    pub height_cm: f64,
    pub layers: usize,
}

impl Default for Panel {
    fn default() -> Self {
        Panel {
            width_cm: 60.0,
            height_cm: 50.0,
            layers: 3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GateFootprint {
    pub width_cm: f64,
    pub height_cm: f64,
    pub r1k_node_spacing_cm: f64,
    pub r10k_node_spacing_cm: f64,
    pub transistor_node_spacing_cm: f64,
}

impl GateFootprint {
    pub fn standard(kind: GateKind) -> Self {
        let (w, h) = match kind {
            GateKind::And2 => (5.5, 6.5),
            GateKind::Or2 => (6.5, 6.5),
            GateKind::Not => (4.5, 4.5),
        };
        GateFootprint {
            width_cm: w,
            height_cm: h,
            r1k_node_spacing_cm: 1.0,
            r10k_node_spacing_cm: 1.5,
            transistor_node_spacing_cm: 2.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Footprints {
    pub not: GateFootprint,
    pub and2: GateFootprint,
    pub or2: GateFootprint,
}

impl Default for Footprints {
    fn default() -> Self {
        Footprints {
            not: GateFootprint::standard(GateKind::Not),
            and2: GateFootprint::standard(GateKind::And2),
            or2: GateFootprint::standard(GateKind::Or2),
        }
    }
}

impl Footprints {
    pub fn get(&self, kind: GateKind) -> GateFootprint {
        match kind {
            GateKind::Not => self.not,
            GateKind::And2 => self.and2,
            GateKind::Or2 => self.or2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Placement {
    pub gate: String,
    pub kind: GateKind,
    pub layer: usize,
    pub center: Point,
    pub rotation_deg: f64,
    /// Footprint corners on the panel.
    pub outline: Vec<Point>,
    pub pins: BTreeMap<String, Point>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trace {
    pub name: String,
    pub net: String,
    pub layer: usize,
    pub role: TraceRole,
    pub stitch: Stitch,
    pub insulated: bool,
    pub points: Vec<Point>,
    pub rest_length_cm: f64,
    pub max_strain: f64,
}

impl Trace {
    pub fn length_cm(&self) -> f64 {
        polyline_length(&self.points)
    }

    pub fn segments(&self) -> impl Iterator<Item = (Point, Point)> + '_ {
        self.points.windows(2).map(|w| (w[0], w[1]))
    }
}

/// A gate port (or battery terminal) wired onto a trace.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Attachment {
    pub gate: String,
    pub port: String,
    pub trace: usize,
    pub at: Point,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Joint {
    pub name: String,
    pub kind: JointKind,
    pub traces: [usize; 2],
    pub at: Point,
    /// Local strain at the joint after stretching; 0 at rest.
    #[serde(default)]
    pub loosening: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShortCandidate {
    pub traces: [usize; 2],
    pub at: Point,
    pub severity: Severity,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FabricLayout {
    pub schema_version: u32,
    pub strategy: Strategy,
    pub panel: Panel,
    pub layers: usize,
    pub placements: Vec<Placement>,
    pub traces: Vec<Trace>,
    pub attachments: Vec<Attachment>,
    pub joints: Vec<Joint>,
    pub short_candidates: Vec<ShortCandidate>,
}

impl FabricLayout {
    pub fn trace(&self, name: &str) -> Option<&Trace> {
        self.traces.iter().find(|t| t.name == name)
    }

    pub fn placement(&self, gate: &str) -> Option<&Placement> {
        self.placements.iter().find(|p| p.gate == gate)
    }

    pub fn total_length_cm(&self) -> f64 {
        self.traces.iter().map(Trace::length_cm).sum()
    }

    pub fn layer_traces(&self, layer: usize) -> impl Iterator<Item = &Trace> {
        self.traces.iter().filter(move |t| t.layer == layer)
    }
}

/// Accumulates a layout while a strategy draws it.
pub(crate) struct Builder {
    pub layout: FabricLayout,
    footprints: Footprints,
}

impl Builder {
    pub fn new(strategy: Strategy, panel: Panel, layers: usize, footprints: Footprints) -> Self {
        Builder {
            layout: FabricLayout {
                schema_version: SCHEMA_VERSION,
                strategy,
                panel,
                layers,
                placements: Vec::new(),
                traces: Vec::new(),
                attachments: Vec::new(),
                joints: Vec::new(),
                short_candidates: Vec::new(),
            },
            footprints,
        }
    }

    pub fn size(&self, kind: GateKind) -> (f64, f64) {
        let f = self.footprints.get(kind);
        (f.width_cm, f.height_cm)
    }

    /// Places a footprint by its top-left corner before rotation; pin
    /// offsets are in cm from that corner and rotate with the footprint.
    pub fn gate(
        &mut self,
        gate: &str,
        kind: GateKind,
        layer: usize,
        top_left: Point,
        rotation_deg: f64,
        pins: &[(&str, f64, f64)],
    ) -> BTreeMap<String, Point> {
        let (w, h) = self.size(kind);
        let center = top_left.add(pt(w / 2.0, h / 2.0));
        let place = |dx: f64, dy: f64| {
            pt(dx - w / 2.0, dy - h / 2.0)
                .rotate(rotation_deg)
                .add(center)
        };
        let outline = vec![place(0.0, 0.0), place(w, 0.0), place(w, h), place(0.0, h)];
        let pins: BTreeMap<String, Point> = pins
            .iter()
            .map(|&(p, dx, dy)| (p.to_string(), place(dx, dy)))
            .collect();
        self.layout.placements.push(Placement {
            gate: gate.to_string(),
            kind,
            layer,
            center,
            rotation_deg,
            outline,
            pins: pins.clone(),
        });
        pins
    }

    #[allow(clippy::too_many_arguments)]
    pub fn trace(
        &mut self,
        name: String,
        net: &str,
        layer: usize,
        role: TraceRole,
        stitch: Stitch,
        insulated: bool,
        points: Vec<Point>,
    ) -> usize {
        let rest = polyline_length(&points);
        self.layout.traces.push(Trace {
            name,
            net: net.to_string(),
            layer,
            role,
            stitch,
            insulated,
            points,
            rest_length_cm: rest,
            max_strain: stitch.max_strain(),
        });
        self.layout.traces.len() - 1
    }

    pub fn attach(&mut self, gate: &str, port: &str, trace: usize, at: Point) {
        self.layout.attachments.push(Attachment {
            gate: gate.to_string(),
            port: port.to_string(),
            trace,
            at,
        });
    }

    pub fn joint(&mut self, kind: JointKind, a: usize, b: usize, at: Point) {
        let name = format!("J{}", self.layout.joints.len());
        self.layout.joints.push(Joint {
            name,
            kind,
            traces: [a, b],
            at,
            loosening: 0.0,
        });
    }

    pub fn finish(mut self) -> Result<FabricLayout, FabricError> {
        let panel = self.layout.panel;
        let mut worst: Option<(String, Point)> = None;
        let mut check = |what: &str, p: Point| {
            if p.x < -geom::EPS
                || p.y < -geom::EPS
                || p.x > panel.width_cm + geom::EPS
                || p.y > panel.height_cm + geom::EPS
            {
                worst.get_or_insert((what.to_string(), p));
            }
        };
        for pl in &self.layout.placements {
            for &p in &pl.outline {
                check(&pl.gate, p);
            }
        }
        for t in &self.layout.traces {
            for &p in &t.points {
                check(&t.name, p);
            }
        }
        if let Some((what, p)) = worst {
            return Err(FabricError::PanelTooSmall(format!(
                "{what} reaches ({:.1}, {:.1}) cm outside the {}x{} cm panel",
                p.x, p.y, panel.width_cm, panel.height_cm
            )));
        }
        self.layout.short_candidates = crossing_report(&self.layout);
        Ok(self.layout)
    }
}

fn check_scale(matrix: &PlaMatrix) -> Result<(), FabricError> {
    let (n, t, m) = (
        matrix.inputs().len(),
        matrix.term_count(),
        matrix.outputs().len(),
    );
    if n > MAX_INPUTS || t > MAX_TERMS || m > MAX_OUTPUTS {
        return Err(FabricError::UnsupportedScale(format!(
            "{n} inputs, {t} terms, {m} outputs exceeds {MAX_INPUTS}/{MAX_TERMS}/{MAX_OUTPUTS}"
        )));
    }
    if let Some(t) = (0..t).find(|&t| matrix.term_lines(t).len() > 2) {
        return Err(FabricError::UnsupportedScale(format!(
            "term {} needs more than 2 inputs",
            matrix.term_labels()[t]
        )));
    }
    if let Some(k) = (0..m).find(|&k| matrix.output_terms(k).len() > 2) {
        return Err(FabricError::UnsupportedScale(format!(
            "output {} needs more than 2 terms",
            matrix.outputs()[k]
        )));
    }
    if t == 0 {
        return Err(FabricError::UnsupportedScale("no product terms".into()));
    }
    Ok(())
}

pub fn place(
    matrix: &PlaMatrix,
    strategy: Strategy,
    panel: Panel,
) -> Result<FabricLayout, FabricError> {
    place_with(matrix, strategy, panel, &Footprints::default())
}

pub fn place_with(
    matrix: &PlaMatrix,
    strategy: Strategy,
    panel: Panel,
    footprints: &Footprints,
) -> Result<FabricLayout, FabricError> {
    check_scale(matrix)?;
    match strategy {
        Strategy::Multi => {
            if panel.layers < 3 {
                return Err(FabricError::PanelTooSmall(format!(
                    "multi-layer design needs 3 fabric layers, panel has {}",
                    panel.layers
                )));
            }
            multi::place(matrix, panel, *footprints)
        }
        Strategy::Single => single::place(matrix, panel, *footprints),
    }
}

fn severity(a: &Trace, b: &Trace) -> Severity {
    let risky = |t: &Trace| matches!(t.role, TraceRole::Bridge | TraceRole::Rail);
    if risky(a) || risky(b) {
        Severity::High
    } else {
        Severity::Medium
    }
}

/// Same-layer contacts between bare traces of different nets.
pub fn crossing_report(layout: &FabricLayout) -> Vec<ShortCandidate> {
    let mut out = Vec::new();
    let traces = &layout.traces;
    for i in 0..traces.len() {
        for j in i + 1..traces.len() {
            let (a, b) = (&traces[i], &traces[j]);
            if a.layer != b.layer || a.net == b.net || a.insulated || b.insulated {
                continue;
            }
            let mut points: Vec<Point> = Vec::new();
            for (p, q) in a.segments() {
                for (r, s) in b.segments() {
                    if let Some(x) = segment_intersection(p, q, r, s) {
                        if !points.iter().any(|y| y.dist(x) < 1e-6) {
                            points.push(x);
                        }
                    }
                }
            }
            out.extend(points.into_iter().map(|at| ShortCandidate {
                traces: [i, j],
                at,
                severity: severity(a, b),
            }));
        }
    }
    out
}

/// Smallest gap between VCC and GND conductors on a layer, ignoring pairs
/// of segments that actually cross (those are insulated crossovers or
/// short candidates in their own right).
pub fn rail_separation(layout: &FabricLayout) -> f64 {
    let mut best = f64::INFINITY;
    for a in layout.traces.iter().filter(|t| t.net == VCC) {
        for b in layout
            .traces
            .iter()
            .filter(|t| t.net == GND && t.layer == a.layer)
        {
            for (p, q) in a.segments() {
                for (r, s) in b.segments() {
                    if segment_intersection(p, q, r, s).is_none() {
                        best = best.min(segment_distance(p, q, r, s));
                    }
                }
            }
        }
    }
    best
}

/// Pairs of same-layer footprints that overlap.
pub fn footprint_overlaps(layout: &FabricLayout) -> Vec<(String, String)> {
    let p = &layout.placements;
    let mut out = Vec::new();
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i].layer == p[j].layer && convex_overlap(&p[i].outline, &p[j].outline) {
                out.push((p[i].gate.clone(), p[j].gate.clone()));
            }
        }
    }
    out
}

/// Joints whose point is more than 1 mm off either of its traces.
pub fn misplaced_joints(layout: &FabricLayout) -> Vec<String> {
    layout
        .joints
        .iter()
        .filter(|j| {
            j.traces
                .iter()
                .any(|&t| geom::arc_position(&layout.traces[t].points, j.at, 0.1).is_none())
        })
        .map(|j| j.name.clone())
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceStrain {
    pub trace: String,
    pub strain: f64,
    pub max_strain: f64,
    pub overstrained: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StrainReport {
    pub strain: f64,
    pub axis: Axis,
    pub traces: Vec<TraceStrain>,
}

impl StrainReport {
    pub fn overstrained(&self) -> impl Iterator<Item = &TraceStrain> {
        self.traces.iter().filter(|t| t.overstrained)
    }
}

/// Stretches the panel by `1 + strain` along `axis`. Each trace's strain
/// is its length over its rest length, so only the component along the
/// stretch counts; joints take the larger strain of their two traces.
pub fn apply_stretch(
    layout: &FabricLayout,
    strain: f64,
    axis: Axis,
) -> Result<(FabricLayout, StrainReport), FabricError> {
    if !(0.0..=0.5).contains(&strain) {
        return Err(FabricError::InvalidStrain(format!(
            "{strain} outside [0, 0.5]"
        )));
    }
    let mut out = layout.clone();
    if strain > 0.0 {
        let k = 1.0 + strain;
        let map = |p: &mut Point| match axis {
            Axis::Vertical => p.y *= k,
            Axis::Horizontal => p.x *= k,
        };
        match axis {
            Axis::Vertical => out.panel.height_cm *= k,
            Axis::Horizontal => out.panel.width_cm *= k,
        }
        for pl in &mut out.placements {
            map(&mut pl.center);
            pl.outline.iter_mut().for_each(map);
            pl.pins.values_mut().for_each(map);
        }
        for t in &mut out.traces {
            t.points.iter_mut().for_each(map);
        }
        out.attachments.iter_mut().for_each(|a| map(&mut a.at));
        out.short_candidates.iter_mut().for_each(|s| map(&mut s.at));
        out.joints.iter_mut().for_each(|j| map(&mut j.at));
    }
    let traces: Vec<TraceStrain> = out
        .traces
        .iter()
        .map(|t| {
            let s = if t.rest_length_cm > 0.0 {
                t.length_cm() / t.rest_length_cm - 1.0
            } else {
                0.0
            };
            TraceStrain {
                trace: t.name.clone(),
                strain: s,
                max_strain: t.max_strain,
                overstrained: s > t.max_strain + 1e-12,
            }
        })
        .collect();
    if strain > 0.0 {
        for j in &mut out.joints {
            j.loosening = j
                .traces
                .iter()
                .map(|&t| traces[t].strain)
                .fold(0.0, f64::max);
        }
    }
    Ok((
        out,
        StrainReport {
            strain,
            axis,
            traces,
        },
    ))
}
