//! Panel rendering. One user unit is one millimetre.

use std::fmt::Write;

use etpla_core::fabric::geom::Point;
use etpla_core::fabric::{FabricLayout, Severity, Stitch, TraceRole};

const MM: f64 = 10.0;

fn colour(net: &str, role: TraceRole) -> &'static str {
    match (net, role) {
        ("VCC", _) => "#c0392b",
        ("GND", _) => "#2c3e50",
        (_, TraceRole::InputLine) => "#2980b9",
        (_, TraceRole::PlaneLine) => "#27ae60",
        (_, TraceRole::Bridge) => "#8e44ad",
        _ => "#7f8c8d",
    }
}

fn dash(stitch: Stitch) -> Option<&'static str> {
    match stitch {
        Stitch::Zigzag => Some("6 2"),
        Stitch::Satin => Some("1 1"),
        Stitch::Straight => None,
    }
}

fn coords(points: &[Point]) -> String {
    points
        .iter()
        .map(|p| format!("{:.2},{:.2}", p.x * MM, p.y * MM))
        .collect::<Vec<_>>()
        .join(" ")
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

pub fn render(layout: &FabricLayout) -> String {
    let w = layout.panel.width_cm * MM;
    let h = layout.panel.height_cm * MM;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}mm" height="{h}mm" viewBox="0 0 {w} {h}">"#
    );
    let _ = writeln!(
        s,
        r##"  <rect class="panel" x="0" y="0" width="{w}" height="{h}" fill="#fdfaf3" stroke="#999"/>"##
    );
    for layer in 0..layout.layers {
        let _ = writeln!(s, r#"  <g id="layer-{layer}" class="layer">"#);
        for p in layout.placements.iter().filter(|p| p.layer == layer) {
            let _ = writeln!(
                s,
                r##"    <polygon class="gate" points="{}" fill="#f5e6c8" stroke="#555"/>"##,
                coords(&p.outline)
            );
            let _ = writeln!(
                s,
                r#"    <text class="label" x="{:.2}" y="{:.2}" font-size="8" text-anchor="middle">{}</text>"#,
                p.center.x * MM,
                p.center.y * MM,
                escape(&p.gate)
            );
        }
        for t in layout.traces.iter().filter(|t| t.layer == layer) {
            let dash = dash(t.stitch)
                .map(|d| format!(r#" stroke-dasharray="{d}""#))
                .unwrap_or_default();
            let _ = writeln!(
                s,
                r#"    <polyline class="trace" data-name="{}" points="{}" fill="none" stroke="{}" stroke-width="{}"{dash}/>"#,
                escape(&t.name),
                coords(&t.points),
                colour(&t.net, t.role),
                if t.insulated { 2.0 } else { 1.2 },
            );
        }
        let _ = writeln!(s, "  </g>");
    }
    let _ = writeln!(s, r#"  <g id="shorts" class="shorts">"#);
    for c in &layout.short_candidates {
        let r = match c.severity {
            Severity::High => 4.0,
            Severity::Medium => 2.5,
        };
        let _ = writeln!(
            s,
            r##"    <circle class="short" cx="{:.2}" cy="{:.2}" r="{r}" fill="none" stroke="#e67e22" stroke-width="1"/>"##,
            c.at.x * MM,
            c.at.y * MM
        );
    }
    let _ = writeln!(s, "  </g>");
    s.push_str("</svg>\n");
    s
}
