//! Three-layer garment: inverters and input lines on layer 0, the AND plane
//! on layer 1 and the OR plane on layer 2. Plane tracks on a layer never
//! cross; layers meet only at programmable joints.

use crate::plamap::PlaMatrix;
use crate::rtlnet::{and_gate, not_gate, or_gate, term_net, GateKind, GND, VCC};

use super::geom::{pt, Point};
use super::{
    Builder, FabricError, FabricLayout, Footprints, JointKind, Panel, Stitch, Strategy, TraceRole,
    BATTERY,
};

const Y_TOP: f64 = 10.0;
const PITCH: f64 = 1.0;
const X_VCC: f64 = 2.0;

struct Spine {
    vcc: usize,
    gnd: usize,
}

fn rail(b: &mut Builder, name: String, net: &str, layer: usize, points: Vec<Point>) -> usize {
    b.trace(
        name,
        net,
        layer,
        TraceRole::Rail,
        Stitch::Zigzag,
        true,
        points,
    )
}

/// Short insulated lead from a gate's supply pin onto a rail.
fn stub(
    b: &mut Builder,
    gate: &str,
    port: &str,
    layer: usize,
    pin: Point,
    to: Point,
    rail_trace: usize,
) {
    let net = if port == "vcc" { VCC } else { GND };
    let t = b.trace(
        format!("{gate}.{port}"),
        net,
        layer,
        TraceRole::Stub,
        Stitch::Zigzag,
        true,
        vec![pin, to],
    );
    b.attach(gate, port, t, pin);
    b.joint(JointKind::Splice, t, rail_trace, to);
}

pub(super) fn place(
    m: &PlaMatrix,
    panel: Panel,
    fp: Footprints,
) -> Result<FabricLayout, FabricError> {
    let mut b = Builder::new(Strategy::Multi, panel, 3, fp);
    let vars = m.inputs();
    let n = vars.len();
    let t_count = m.term_count();
    let (not_w, not_h) = b.size(GateKind::Not);
    let (and_w, and_h) = b.size(GateKind::And2);
    let (or_w, or_h) = b.size(GateKind::Or2);
    let and_pitch = and_w + 2.0;
    let or_pitch = or_w + 1.0;

    // Layer 0: inverters in a staircase so line lengths differ per variable.
    let not_x = |i: usize| 5.0 + (not_w + 1.0) * i as f64;
    let not_top = |i: usize| Y_TOP + 15.0 + 3.0 * i as f64;
    let mut line_x = Vec::with_capacity(2 * n);
    let mut line_trace = Vec::with_capacity(2 * n);
    let mut supply_pins = Vec::new();
    for (i, v) in vars.iter().enumerate() {
        let gate = not_gate(v);
        let (x, y) = (not_x(i), not_top(i));
        let pins = b.gate(
            &gate,
            GateKind::Not,
            0,
            pt(x, y),
            0.0,
            &[
                ("in", 0.75, 0.0),
                ("out", 2.75, 0.0),
                ("vcc", not_w - 0.5, 0.0),
                ("gnd", not_w / 2.0, not_h),
            ],
        );
        for (port, line) in [("in", 2 * i), ("out", 2 * i + 1)] {
            let p = pins[port];
            let label = &m.input_lines()[line];
            let t = b.trace(
                format!("LINE_{label}"),
                label,
                0,
                TraceRole::InputLine,
                Stitch::Straight,
                false,
                vec![p, pt(p.x, Y_TOP)],
            );
            b.attach(&gate, port, t, p);
            line_x.push(p.x);
            line_trace.push(t);
        }
        supply_pins.push((gate, pins["vcc"], pins["gnd"]));
    }
    let not_bottom = not_top(n - 1) + not_h;

    // Layer 1: AND gates in a row to the right of the lines.
    let y_and = Y_TOP + 2.25 + (2 * t_count - 1) as f64 * PITCH;
    let x_and0 = line_x.iter().copied().fold(0.0, f64::max) + 3.0;
    let and_x = |t: usize| x_and0 + and_pitch * t as f64;
    let row_end = and_x(t_count - 1) + and_w + 0.25;
    let track_y = |t: usize| y_and + and_h + 1.5 + (t_count - 1 - t) as f64 * PITCH;
    let y_or = track_y(0) + 1.0;
    let or_x = |k: usize| row_end + 1.25 + or_pitch * k as f64;
    let or_pins = |k: usize| (or_x(k) + 1.5, or_x(k) + 3.0);
    let last_col = (0..m.outputs().len())
        .map(|k| or_pins(k).1)
        .fold(0.0, f64::max);
    let x_end = (row_end + 9.0).max(last_col + 0.5);

    let mut out_track = Vec::with_capacity(t_count);
    let mut and_supply = Vec::new();
    for t in 0..t_count {
        let gate = and_gate(t);
        let x = and_x(t);
        let pins = b.gate(
            &gate,
            GateKind::And2,
            1,
            pt(x, y_and),
            0.0,
            &[
                ("a", 0.0, 1.5),
                ("b", 0.0, and_h - 2.0),
                ("out", and_w, and_h / 2.0),
                ("vcc", and_w / 2.0, 0.0),
                ("gnd", and_w / 2.0, and_h),
            ],
        );
        let used = m.term_lines(t);
        let lines = [used[0], *used.last().unwrap()];
        for (port, line, k, offset) in [
            ("a", lines[0], 2 * t + 1, 0.5),
            ("b", lines[1], 2 * t, 1.25),
        ] {
            let p = pins[port];
            let level = y_and - 1.75 - k as f64 * PITCH;
            let label = &m.input_lines()[line];
            let tr = b.trace(
                format!("{gate}.{port}"),
                label,
                1,
                TraceRole::PlaneLine,
                Stitch::Straight,
                false,
                vec![
                    p,
                    pt(x - offset, p.y),
                    pt(x - offset, level),
                    pt(line_x[line], level),
                ],
            );
            b.attach(&gate, port, tr, p);
            b.joint(
                JointKind::Programmable,
                tr,
                line_trace[line],
                pt(line_x[line], level),
            );
        }
        let p = pins["out"];
        let tr = b.trace(
            format!("{gate}.out"),
            &term_net(t),
            1,
            TraceRole::PlaneLine,
            Stitch::Straight,
            false,
            vec![
                p,
                pt(x + and_w + 0.25, p.y),
                pt(x + and_w + 0.25, track_y(t)),
                pt(x_end, track_y(t)),
            ],
        );
        b.attach(&gate, "out", tr, p);
        out_track.push(tr);
        and_supply.push((gate, pins["vcc"], pins["gnd"]));
    }

    // Layer 2: OR gates below the product-term tracks.
    let mut or_supply = Vec::new();
    for (k, name) in m.outputs().iter().enumerate() {
        let gate = or_gate(name);
        let pins = b.gate(
            &gate,
            GateKind::Or2,
            2,
            pt(or_x(k), y_or),
            0.0,
            &[
                ("a", 1.5, 0.0),
                ("b", 3.0, 0.0),
                ("vcc", or_w - 1.5, 0.0),
                ("gnd", or_w / 2.0, or_h),
                ("out", or_w, or_h / 2.0),
            ],
        );
        let used = m.output_terms(k);
        if let (Some(&first), Some(&last)) = (used.first(), used.last()) {
            for (port, term) in [("a", first), ("b", last)] {
                let p = pins[port];
                let top = pt(p.x, track_y(term));
                let tr = b.trace(
                    format!("{gate}.{port}"),
                    &term_net(term),
                    2,
                    TraceRole::PlaneLine,
                    Stitch::Straight,
                    false,
                    vec![p, top],
                );
                b.attach(&gate, port, tr, p);
                b.joint(JointKind::Programmable, tr, out_track[term], top);
            }
        }
        or_supply.push((gate, pins["vcc"], pins["gnd"]));
    }

    // Supply rails: one trunk pair per layer. The battery sits under the
    // middle of the inverter row so their ground returns stay short; the
    // AND and OR layers bring their ground straight down to it.
    let y_g0 = [not_bottom + 1.0, y_and + and_h + 0.75]
        .iter()
        .copied()
        .fold(0.0, f64::max);
    let gnd_levels = [y_g0, y_and + and_h + 0.75, y_or + or_h + 0.75];
    let vcc_levels = [Y_TOP - 1.5, y_and - 0.75, y_or - 0.75];
    let y_bat = y_g0 + 1.5;
    let x_bat = supply_pins.iter().map(|s| s.2.x).sum::<f64>() / n as f64;
    let mut spines = Vec::new();
    for (layer, supply) in [supply_pins, and_supply, or_supply].into_iter().enumerate() {
        let far_vcc = supply.iter().map(|s| s.1.x).fold(X_VCC, f64::max);
        let far_gnd = supply.iter().map(|s| s.2.x).fold(x_bat + 1.0, f64::max);
        let (yv, yg) = (vcc_levels[layer], gnd_levels[layer]);
        let mut vcc_path = vec![pt(far_vcc, yv), pt(X_VCC, yv), pt(X_VCC, y_bat)];
        let gnd_path = if layer == 0 {
            let near = supply.iter().map(|s| s.2.x).fold(x_bat, f64::min);
            vcc_path.push(pt(x_bat, y_bat));
            vec![pt(far_gnd, yg), pt(near, yg)]
        } else {
            vec![pt(far_gnd, yg), pt(x_bat, yg), pt(x_bat, y_g0)]
        };
        let vcc = rail(&mut b, format!("VCC_L{layer}"), VCC, layer, vcc_path);
        let gnd = rail(&mut b, format!("GND_L{layer}"), GND, layer, gnd_path);
        for (gate, pv, pg) in supply {
            stub(&mut b, &gate, "vcc", layer, pv, pt(pv.x, yv), vcc);
            stub(&mut b, &gate, "gnd", layer, pg, pt(pg.x, yg), gnd);
        }
        spines.push(Spine { vcc, gnd });
    }
    b.attach(BATTERY, "vcc", spines[0].vcc, pt(x_bat, y_bat));
    b.attach(BATTERY, "gnd", spines[0].gnd, pt(x_bat, y_g0));
    for s in &spines[1..] {
        b.joint(JointKind::Splice, spines[0].vcc, s.vcc, pt(X_VCC, y_bat));
        b.joint(JointKind::Splice, spines[0].gnd, s.gnd, pt(x_bat, y_g0));
    }
    b.finish()
}
