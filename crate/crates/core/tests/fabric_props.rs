mod common;

use etpla_core::fabric::geom::Point;
use etpla_core::fabric::{
    apply_stretch, crossing_report, footprint_overlaps, misplaced_joints, place, rail_separation,
    Axis, FabricError, Panel, Strategy as Layout,
};
use proptest::prelude::*;

const WIDE: Panel = Panel {
    width_cm: 100.0,
    height_cm: 50.0,
    layers: 3,
};

fn stretched_length(points: &[Point], k: f64, axis: Axis) -> f64 {
    points
        .windows(2)
        .map(|w| {
            let (dx, dy) = (w[1].x - w[0].x, w[1].y - w[0].y);
            match axis {
                Axis::Vertical => dx.hypot(k * dy),
                Axis::Horizontal => (k * dx).hypot(dy),
            }
        })
        .sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn multi_layers_never_short(m in common::supported_scale_matrix()) {
        let l = place(&m, Layout::Multi, WIDE).unwrap();
        prop_assert!(l.short_candidates.is_empty());
        prop_assert!(footprint_overlaps(&l).is_empty());
        prop_assert!(misplaced_joints(&l).is_empty());
        prop_assert!(rail_separation(&l) >= 1.0);
        prop_assert_eq!(crossing_report(&l), l.short_candidates.clone());
    }

    #[test]
    fn single_layout_checks(m in common::supported_scale_matrix()) {
        let Ok(l) = place(&m, Layout::Single, Panel::default()) else { return Ok(()) };
        prop_assert!(footprint_overlaps(&l).is_empty());
        prop_assert!(misplaced_joints(&l).is_empty());
        prop_assert!(rail_separation(&l) >= 1.0);
        prop_assert_eq!(crossing_report(&l), l.short_candidates.clone());
    }

    #[test]
    fn stretch_scales_arc_length(m in common::supported_scale_matrix(), strain in 0.0f64..=0.5, vertical: bool) {
        let axis = if vertical { Axis::Vertical } else { Axis::Horizontal };
        let l = place(&m, Layout::Multi, WIDE).unwrap();
        let (s, report) = apply_stretch(&l, strain, axis).unwrap();
        for ((before, after), r) in l.traces.iter().zip(&s.traces).zip(&report.traces) {
            let expect = stretched_length(&before.points, 1.0 + strain, axis);
            prop_assert!((after.length_cm() - expect).abs() <= 1e-9 * expect.max(1.0));
            prop_assert!((r.strain - (expect / before.rest_length_cm - 1.0)).abs() < 1e-9);
        }
        prop_assert!(footprint_overlaps(&s).is_empty());
        prop_assert!(s.short_candidates.is_empty());
    }
}

#[test]
fn worst_case_multi_needs_a_wider_panel() {
    let big = common::worst_case();
    assert!(matches!(
        place(&big, Layout::Multi, Panel::default()),
        Err(FabricError::PanelTooSmall(_))
    ));
    assert!(place(&big, Layout::Multi, WIDE).is_ok());
}
