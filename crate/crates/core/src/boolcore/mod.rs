//! Truth tables and exact two-level multi-output minimization.
//!
//! Prime implicants come from Quine–McCluskey merging; the cover is chosen
//! exactly (Petrick's problem) over the primes of every product of output
//! functions, so a product term shared by several outputs is paid for once.

mod cover;
mod implicant;
mod qm;
mod table;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use implicant::{Implicant, Literal};
pub use table::{format_vector, parse_vector, Cell, TruthTable, MAX_INPUTS, MAX_OUTPUTS};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoolError {
    #[error("MALFORMED: {0}")]
    Malformed(String),
    #[error("DUPLICATE_ROW: {0}")]
    DuplicateRow(String),
    #[error("MISSING_ROW: {0}")]
    MissingRow(String),
    #[error("BAD_SYMBOL: {0}")]
    BadSymbol(String),
    #[error("SIZE: {0}")]
    Size(String),
    #[error("LENGTH_MISMATCH: expected {expected} bits, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("DIMENSION_MISMATCH: {0}")]
    DimensionMismatch(String),
}

/// A multi-output sum of products over a shared pool of product terms.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SopExpression {
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
    /// Distinct product terms, in canonical order.
    pub terms: Vec<Implicant>,
    /// For each output, indices into `terms`, ascending.
    pub uses: Vec<Vec<usize>>,
}

impl SopExpression {
    /// Builds an expression from per-output term lists, pooling shared terms.
    pub fn from_outputs(
        inputs: Vec<String>,
        outputs: Vec<String>,
        per_output: Vec<Vec<Implicant>>,
    ) -> Result<Self, BoolError> {
        if per_output.len() != outputs.len() {
            return Err(BoolError::DimensionMismatch(format!(
                "{} term lists for {} outputs",
                per_output.len(),
                outputs.len()
            )));
        }
        let n = inputs.len();
        let pool: BTreeSet<Implicant> = per_output.iter().flatten().copied().collect();
        if let Some(bad) = pool.iter().find(|t| t.width() != n) {
            return Err(BoolError::LengthMismatch {
                expected: n,
                found: bad.width(),
            });
        }
        let terms: Vec<Implicant> = pool.into_iter().collect();
        let uses = per_output
            .iter()
            .map(|list| {
                let mut idx: Vec<usize> = list
                    .iter()
                    .map(|t| terms.binary_search(t).expect("pooled"))
                    .collect();
                idx.sort_unstable();
                idx.dedup();
                idx
            })
            .collect();
        Ok(SopExpression {
            inputs,
            outputs,
            terms,
            uses,
        })
    }

    pub fn input_count(&self) -> usize {
        self.inputs.len()
    }

    pub fn output_count(&self) -> usize {
        self.outputs.len()
    }

    pub fn output_terms(&self, output: usize) -> impl Iterator<Item = &Implicant> {
        self.uses[output].iter().map(|&i| &self.terms[i])
    }

    /// Output bits at vector index `v`.
    pub fn eval_index(&self, v: u32) -> Vec<bool> {
        self.uses
            .iter()
            .map(|u| u.iter().any(|&i| self.terms[i].matches(v)))
            .collect()
    }

    /// Human-readable `Z1 = A'B + BC` lines.
    pub fn render(&self) -> Vec<String> {
        self.outputs
            .iter()
            .enumerate()
            .map(|(k, name)| {
                let rhs: Vec<String> = self
                    .output_terms(k)
                    .map(|t| t.label(&self.inputs))
                    .collect();
                let rhs = if rhs.is_empty() {
                    "0".to_string()
                } else {
                    rhs.join(" + ")
                };
                format!("{name} = {rhs}")
            })
            .collect()
    }
}

/// Evaluates `expr` on an input bit-string, returning the output bit-string.
pub fn eval_sop(expr: &SopExpression, vector: &str) -> Result<String, BoolError> {
    let v = parse_vector(vector, expr.input_count())?;
    Ok(expr
        .eval_index(v)
        .into_iter()
        .map(|b| if b { '1' } else { '0' })
        .collect())
}

/// Prime implicants of the on∪dc set of one output.
pub fn qm_prime_implicants(table: &TruthTable, output: usize) -> Vec<Implicant> {
    assert!(output < table.output_count(), "output index out of range");
    let mut points = table.on_set(output);
    points.extend(table.dc_set(output));
    points.sort_unstable();
    qm::primes_of(table.input_count(), &points)
}

/// Exact multi-output minimization.
///
/// Minimizes the number of distinct product terms across all outputs, then
/// the total literal count of those terms, then their canonical order. Each
/// output then takes the smallest subset of the chosen terms covering it.
pub fn minimize(table: &TruthTable) -> SopExpression {
    let n = table.input_count();
    let m = table.output_count();
    let care: Vec<Vec<bool>> = (0..m)
        .map(|k| {
            (0..table.row_count() as u32)
                .map(|v| table.cell(v, k) != Cell::Zero)
                .collect()
        })
        .collect();
    let on: Vec<Vec<u32>> = (0..m).map(|k| table.on_set(k)).collect();

    // Candidates: primes of every product of output functions.
    let mut pool: BTreeSet<Implicant> = BTreeSet::new();
    for subset in 1u32..(1 << m) {
        let members: Vec<usize> = (0..m).filter(|k| subset >> k & 1 == 1).collect();
        if !members.iter().any(|&k| !on[k].is_empty()) {
            continue;
        }
        let points: Vec<u32> = (0..table.row_count() as u32)
            .filter(|&v| members.iter().all(|&k| care[k][v as usize]))
            .collect();
        pool.extend(qm::primes_of(n, &points));
    }
    let implicant_of =
        |t: &Implicant, k: usize| t.covered_minterms().iter().all(|&v| care[k][v as usize]);

    // Elements are (output, on-minterm) pairs.
    let mut offsets = Vec::with_capacity(m);
    let mut total = 0;
    for list in &on {
        offsets.push(total);
        total += list.len();
    }
    let candidates: Vec<(Implicant, Vec<usize>)> = pool
        .iter()
        .map(|t| {
            let mut covered = Vec::new();
            for k in 0..m {
                if implicant_of(t, k) {
                    for (i, &v) in on[k].iter().enumerate() {
                        if t.matches(v) {
                            covered.push(offsets[k] + i);
                        }
                    }
                }
            }
            (*t, covered)
        })
        .collect();
    let chosen: Vec<Implicant> = cover::solve(&cover::CoverProblem {
        element_count: total,
        candidates,
    })
    .expect("every on-minterm is covered by its own prime")
    .into_iter()
    .map(|i| pool.iter().nth(i).copied().expect("index in pool"))
    .collect();

    let per_output: Vec<Vec<Implicant>> = (0..m)
        .map(|k| {
            let usable: Vec<(Implicant, Vec<usize>)> = chosen
                .iter()
                .filter(|t| implicant_of(t, k))
                .map(|t| {
                    let covered = on[k]
                        .iter()
                        .enumerate()
                        .filter(|(_, &v)| t.matches(v))
                        .map(|(i, _)| i)
                        .collect();
                    (*t, covered)
                })
                .collect();
            let picked = cover::solve(&cover::CoverProblem {
                element_count: on[k].len(),
                candidates: usable.clone(),
            })
            .expect("chosen terms cover every output");
            picked.into_iter().map(|i| usable[i].0).collect()
        })
        .collect();

    SopExpression::from_outputs(
        table.inputs().to_vec(),
        table.outputs().to_vec(),
        per_output,
    )
    .expect("dimensions agree with table")
}

/// A vector where an expression disagrees with a table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mismatch {
    pub vector: String,
    pub expected: String,
    pub actual: String,
}

/// Exhaustively compares per-vector output bits against `table`, skipping
/// don't-care cells. Mismatches come back in ascending vector order.
pub fn compare_outputs(table: &TruthTable, eval: impl Fn(u32) -> Vec<bool>) -> Vec<Mismatch> {
    let n = table.input_count();
    (0..table.row_count() as u32)
        .filter_map(|v| {
            let actual = eval(v);
            let row = table.row(v);
            let ok = row.iter().zip(&actual).all(|(c, &b)| c.admits(b));
            (!ok).then(|| Mismatch {
                vector: format_vector(v, n),
                expected: row.iter().map(|c| c.symbol()).collect(),
                actual: actual.iter().map(|&b| if b { '1' } else { '0' }).collect(),
            })
        })
        .collect()
}

pub fn check_equivalence(
    expr: &SopExpression,
    table: &TruthTable,
) -> Result<Vec<Mismatch>, BoolError> {
    if expr.input_count() != table.input_count() || expr.output_count() != table.output_count() {
        return Err(BoolError::DimensionMismatch(format!(
            "expression is {}x{}, table is {}x{}",
            expr.input_count(),
            expr.output_count(),
            table.input_count(),
            table.output_count()
        )));
    }
    Ok(compare_outputs(table, |v| expr.eval_index(v)))
}

/// The three-input, two-output alert table shipped with the tool:
/// `Z1 = A'B + BC`, `Z2 = AB + BC`.
pub fn use_case_table() -> TruthTable {
    TruthTable::from_fn(&["A", "B", "C"], &["Z1", "Z2"], |v| {
        let (a, b, c) = (v >> 2 & 1 == 1, v >> 1 & 1 == 1, v & 1 == 1);
        vec![(!a && b) || (b && c), (a && b) || (b && c)]
    })
    .expect("static table is valid")
}
