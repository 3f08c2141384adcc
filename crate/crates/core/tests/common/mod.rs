#![allow(dead_code)]

use etpla_core::boolcore::{Implicant, Literal, SopExpression};
use etpla_core::plamap::PlaMatrix;
use proptest::prelude::*;

fn term(n: usize) -> impl Strategy<Value = Implicant> {
    (
        prop::sample::subsequence((0..n).collect::<Vec<_>>(), 1..=2.min(n)),
        any::<[bool; 2]>(),
    )
        .prop_map(move |(vars, pol)| {
            let mut lits = vec![Literal::Absent; n];
            for (k, v) in vars.into_iter().enumerate() {
                lits[v] = if pol[k] {
                    Literal::Positive
                } else {
                    Literal::Negative
                };
            }
            Implicant::from_literals(&lits)
        })
}

/// Matrices the garment can hold: at most 4 inputs, 6 distinct terms of
/// fan-in 2, and 3 outputs of at most 2 terms each.
pub fn supported_scale_matrix() -> impl Strategy<Value = PlaMatrix> {
    (1usize..=4, 1usize..=3)
        .prop_flat_map(|(n, m)| {
            (
                Just(n),
                prop::collection::vec(prop::collection::vec(term(n), 0..=2), m),
            )
        })
        .prop_filter_map("needs 1..=6 distinct terms", |(n, per_output)| {
            let sop = SopExpression::from_outputs(
                (0..n)
                    .map(|i| ["A", "B", "C", "D"][i].to_string())
                    .collect(),
                (0..per_output.len())
                    .map(|k| format!("Z{}", k + 1))
                    .collect(),
                per_output,
            )
            .ok()?;
            if sop.terms.is_empty() || sop.terms.len() > 6 {
                return None;
            }
            PlaMatrix::from_sop(&sop).ok()
        })
}

/// Four inputs, six two-literal terms, three outputs of two terms each.
pub fn worst_case() -> PlaMatrix {
    let t = |s: &str| Implicant::parse(s).unwrap();
    let sop = SopExpression::from_outputs(
        ["A", "B", "C", "D"].map(String::from).to_vec(),
        ["Z1", "Z2", "Z3"].map(String::from).to_vec(),
        vec![
            vec![t("11--"), t("0-1-")],
            vec![t("--01"), t("1--0")],
            vec![t("-10-"), t("0--1")],
        ],
    )
    .unwrap();
    PlaMatrix::from_sop(&sop).unwrap()
}
