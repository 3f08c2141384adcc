//! One-layer garment. Input lines are zig-zag buses, plane columns drop
//! across the buses to reach their line, AND outputs reach the rotated OR
//! gates over bare fabric bridges, and the AND supply comes through bridge
//! joints. Every crossing of bare conductors is a short candidate.

use crate::plamap::PlaMatrix;
use crate::rtlnet::{and_gate, not_gate, or_gate, term_net, GateKind, GND, VCC};

use super::geom::{pt, Point};
use super::{
    Builder, FabricError, FabricLayout, Footprints, JointKind, Panel, Stitch, Strategy, TraceRole,
    BATTERY,
};

const X_VCC: f64 = 2.0;
const X_GND: f64 = 3.5;
const Y_RAIL_TOP: f64 = 1.0;
const LINE_START: f64 = 10.5;
const LINE_END: f64 = 25.0;
const AND_X: f64 = 31.0;
const AND_VCC_RAIL: f64 = 38.0;
const AND_GND_RAIL: f64 = 39.5;
const OR_CX: f64 = 49.5;
const OR_VCC_RAIL: f64 = 57.0;
const OR_GND_RAIL: f64 = 58.5;
const OR_ROTATION: f64 = 45.0;

fn insulated(
    b: &mut Builder,
    name: String,
    net: &str,
    role: TraceRole,
    points: Vec<Point>,
) -> usize {
    b.trace(name, net, 0, role, Stitch::Zigzag, true, points)
}

pub(super) fn place(
    m: &PlaMatrix,
    panel: Panel,
    fp: Footprints,
) -> Result<FabricLayout, FabricError> {
    let mut b = Builder::new(Strategy::Single, panel, 1, fp);
    let vars = m.inputs();
    let n = vars.len();
    let t_count = m.term_count();
    let (not_w, not_h) = b.size(GateKind::Not);
    let (and_w, and_h) = b.size(GateKind::And2);
    let (or_w, or_h) = b.size(GateKind::Or2);
    let y_bottom = panel.height_cm - 1.0;
    let y_gnd_run = y_bottom - 0.5;

    let not_y = |i: usize| y_bottom - 8.0 - (not_h + 2.0) * i as f64;
    let and_y = |t: usize| 3.0 + (and_h + 1.0) * t as f64;
    let feeder_low = and_y(t_count - 1) + and_h - 2.0;
    let line_top = not_y(n - 1) + 1.25;
    if feeder_low >= line_top - 0.5 {
        return Err(FabricError::PanelTooSmall(format!(
            "{t_count} AND gates and {n} inverters do not fit one above the other in {} cm",
            panel.height_cm
        )));
    }

    let vcc_left = insulated(
        &mut b,
        "VCC_LEFT".into(),
        VCC,
        TraceRole::Rail,
        vec![pt(X_VCC, Y_RAIL_TOP), pt(X_VCC, y_bottom)],
    );
    let vcc_top = insulated(
        &mut b,
        "VCC_TOP".into(),
        VCC,
        TraceRole::Rail,
        vec![pt(X_VCC, Y_RAIL_TOP), pt(OR_VCC_RAIL, Y_RAIL_TOP)],
    );
    b.joint(JointKind::Splice, vcc_left, vcc_top, pt(X_VCC, Y_RAIL_TOP));
    let gnd_left = insulated(
        &mut b,
        "GND_LEFT".into(),
        GND,
        TraceRole::Rail,
        vec![pt(X_GND, not_y(n - 1) + not_h + 1.0), pt(X_GND, y_bottom)],
    );

    // Inverters stacked bottom-up along the left edge.
    let mut line_y = Vec::with_capacity(2 * n);
    let mut line_trace = Vec::with_capacity(2 * n);
    for (i, v) in vars.iter().enumerate() {
        let gate = not_gate(v);
        let y = not_y(i);
        let pins = b.gate(
            &gate,
            GateKind::Not,
            0,
            pt(6.0, y),
            0.0,
            &[
                ("in", not_w, 1.25),
                ("out", not_w, 3.25),
                ("vcc", 0.0, 1.0),
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
                Stitch::Zigzag,
                false,
                vec![p, pt(LINE_END, p.y)],
            );
            b.attach(&gate, port, t, p);
            line_y.push(p.y);
            line_trace.push(t);
        }
        let pv = pins["vcc"];
        let t = insulated(
            &mut b,
            format!("{gate}.vcc"),
            VCC,
            TraceRole::Stub,
            vec![pv, pt(X_VCC, pv.y)],
        );
        b.attach(&gate, "vcc", t, pv);
        b.joint(JointKind::Splice, t, vcc_left, pt(X_VCC, pv.y));
        let pg = pins["gnd"];
        let bend = pt(pg.x, pg.y + 1.0);
        let t = insulated(
            &mut b,
            format!("{gate}.gnd"),
            GND,
            TraceRole::Stub,
            vec![pg, bend, pt(X_GND, bend.y)],
        );
        b.attach(&gate, "gnd", t, pg);
        b.joint(JointKind::Splice, t, gnd_left, pt(X_GND, bend.y));
    }

    // AND gates in a column; each input drops straight down to its line.
    let and_bottom = and_y(t_count - 1) + 1.0;
    let vcc_and = insulated(
        &mut b,
        "VCC_AND".into(),
        VCC,
        TraceRole::Rail,
        vec![pt(AND_VCC_RAIL, Y_RAIL_TOP), pt(AND_VCC_RAIL, and_bottom)],
    );
    b.joint(
        JointKind::Splice,
        vcc_top,
        vcc_and,
        pt(AND_VCC_RAIL, Y_RAIL_TOP),
    );
    let gnd_run = insulated(
        &mut b,
        "GND_BOTTOM".into(),
        GND,
        TraceRole::Rail,
        vec![
            pt(OR_GND_RAIL, or_center(0).y + 4.8),
            pt(OR_GND_RAIL, y_gnd_run),
            pt(X_GND, y_gnd_run),
        ],
    );
    b.joint(JointKind::Splice, gnd_run, gnd_left, pt(X_GND, y_gnd_run));
    let gnd_and = insulated(
        &mut b,
        "GND_AND".into(),
        GND,
        TraceRole::Rail,
        vec![
            pt(AND_GND_RAIL, and_y(0) + and_h - 1.0),
            pt(AND_GND_RAIL, y_gnd_run),
        ],
    );
    b.joint(
        JointKind::Splice,
        gnd_and,
        gnd_run,
        pt(AND_GND_RAIL, y_gnd_run),
    );

    let mut and_out = Vec::with_capacity(t_count);
    for t in 0..t_count {
        let gate = and_gate(t);
        let pins = b.gate(
            &gate,
            GateKind::And2,
            0,
            pt(AND_X, and_y(t)),
            0.0,
            &[
                ("a", 0.0, 1.5),
                ("b", 0.0, and_h - 2.0),
                ("vcc", and_w, 1.0),
                ("out", and_w, and_h / 2.0),
                ("gnd", and_w, and_h - 1.0),
            ],
        );
        let used = m.term_lines(t);
        for (p_idx, (port, line)) in [("a", used[0]), ("b", *used.last().unwrap())]
            .into_iter()
            .enumerate()
        {
            let p = pins[port];
            let x = LINE_START + 1.0 + (2 * t + p_idx) as f64;
            let end = pt(x, line_y[line]);
            let label = &m.input_lines()[line];
            let tr = b.trace(
                format!("{gate}.{port}"),
                label,
                0,
                TraceRole::PlaneLine,
                Stitch::Straight,
                false,
                vec![p, pt(x, p.y), end],
            );
            b.attach(&gate, port, tr, p);
            b.joint(JointKind::Programmable, tr, line_trace[line], end);
        }
        let pv = pins["vcc"];
        let tr = insulated(
            &mut b,
            format!("{gate}.vcc"),
            VCC,
            TraceRole::Stub,
            vec![pv, pt(AND_VCC_RAIL, pv.y)],
        );
        b.attach(&gate, "vcc", tr, pv);
        b.joint(JointKind::Bridge, tr, vcc_and, pt(AND_VCC_RAIL, pv.y));
        let pg = pins["gnd"];
        let tr = insulated(
            &mut b,
            format!("{gate}.gnd"),
            GND,
            TraceRole::Stub,
            vec![pg, pt(AND_GND_RAIL, pg.y)],
        );
        b.attach(&gate, "gnd", tr, pg);
        b.joint(JointKind::Splice, tr, gnd_and, pt(AND_GND_RAIL, pg.y));
        and_out.push(pins["out"]);
    }

    // OR gates turned 45 degrees down the right edge.
    let outs = m.outputs();
    let vcc_or_end = or_center(outs.len() - 1).y;
    let vcc_or = insulated(
        &mut b,
        "VCC_OR".into(),
        VCC,
        TraceRole::Rail,
        vec![pt(OR_VCC_RAIL, Y_RAIL_TOP), pt(OR_VCC_RAIL, vcc_or_end)],
    );
    b.joint(
        JointKind::Splice,
        vcc_top,
        vcc_or,
        pt(OR_VCC_RAIL, Y_RAIL_TOP),
    );
    let mut first_bridge: Vec<Option<usize>> = vec![None; t_count];
    for (k, name) in outs.iter().enumerate() {
        let gate = or_gate(name);
        let c = or_center(k);
        let pins = b.gate(
            &gate,
            GateKind::Or2,
            0,
            pt(c.x - or_w / 2.0, c.y - or_h / 2.0),
            OR_ROTATION,
            &[
                ("a", 0.0, 1.5),
                ("b", 0.0, 5.0),
                ("out", or_w, or_h / 2.0),
                ("vcc", or_w / 2.0, 0.0),
                ("gnd", or_w / 2.0, or_h),
            ],
        );
        let used = m.output_terms(k);
        if let (Some(&first), Some(&last)) = (used.first(), used.last()) {
            for (port, term) in [("a", first), ("b", last)] {
                let p = pins[port];
                let from = and_out[term];
                let tr = b.trace(
                    format!("{gate}.{port}"),
                    &term_net(term),
                    0,
                    TraceRole::Bridge,
                    Stitch::Straight,
                    false,
                    vec![from, p],
                );
                b.attach(&gate, port, tr, p);
                match first_bridge[term] {
                    None => {
                        b.attach(&and_gate(term), "out", tr, from);
                        first_bridge[term] = Some(tr);
                    }
                    Some(prev) => b.joint(JointKind::Splice, prev, tr, from),
                }
            }
        }
        let pv = pins["vcc"];
        let tr = insulated(
            &mut b,
            format!("{gate}.vcc"),
            VCC,
            TraceRole::Stub,
            vec![pv, pt(OR_VCC_RAIL, pv.y)],
        );
        b.attach(&gate, "vcc", tr, pv);
        b.joint(JointKind::Splice, tr, vcc_or, pt(OR_VCC_RAIL, pv.y));
        let pg = pins["gnd"];
        let bend = pt(pg.x, c.y + 4.8);
        let tr = insulated(
            &mut b,
            format!("{gate}.gnd"),
            GND,
            TraceRole::Stub,
            vec![pg, bend, pt(OR_GND_RAIL, bend.y)],
        );
        b.attach(&gate, "gnd", tr, pg);
        b.joint(JointKind::Splice, tr, gnd_run, pt(OR_GND_RAIL, bend.y));
    }
    // A term feeding no output still needs its output pin on a trace.
    for (t, first) in first_bridge.iter().enumerate() {
        if first.is_none() {
            let p = and_out[t];
            let tr = b.trace(
                format!("{}.out", and_gate(t)),
                &term_net(t),
                0,
                TraceRole::Stub,
                Stitch::Straight,
                false,
                vec![p, pt(p.x + 0.5, p.y)],
            );
            b.attach(&and_gate(t), "out", tr, p);
        }
    }

    // Battery beside the middle of the inverter stack keeps their returns short.
    let y_bat = (0..n).map(|i| not_y(i) + not_h + 1.0).sum::<f64>() / n as f64;
    b.attach(BATTERY, "vcc", vcc_left, pt(X_VCC, y_bat));
    b.attach(BATTERY, "gnd", gnd_left, pt(X_GND, y_bat));
    b.finish()
}

fn or_center(k: usize) -> Point {
    pt(OR_CX, 8.0 + 10.0 * k as f64)
}
