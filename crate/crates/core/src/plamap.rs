//! AND-plane / OR-plane connection matrices: the programmable stitches.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::boolcore::{compare_outputs, Implicant, Literal, Mismatch, SopExpression, TruthTable};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PlaError {
    #[error("CONSTANT_TERM: term {0} connects a line and its complement")]
    ConstantTerm(String),
    #[error("DANGLING_TERM: term {0} would be left unconnected")]
    DanglingTerm(String),
    #[error("OUT_OF_RANGE: {0}")]
    OutOfRange(String),
    #[error("DIMENSION_MISMATCH: {0}")]
    DimensionMismatch(String),
    #[error("NO_CHANGE: connection is already in the requested state")]
    NoChange,
    #[error("MALFORMED: {0}")]
    Malformed(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Plane {
    And,
    Or,
}

/// Adds or removes one stitch. For the AND plane `row` is a term and `col`
/// an input line; for the OR plane `row` is an output and `col` a term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edit {
    pub plane: Plane,
    pub row: usize,
    pub col: usize,
    pub connect: bool,
}

#[derive(Serialize, Deserialize)]
struct RawMatrix {
    schema_version: u32,
    inputs: Vec<String>,
    outputs: Vec<String>,
    input_lines: Vec<String>,
    term_labels: Vec<String>,
    and_plane: Vec<Vec<u8>>,
    or_plane: Vec<Vec<u8>>,
}

/// The programmed PLA. Input line `2i` is variable `i`, line `2i + 1` its
/// complement.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawMatrix", into = "RawMatrix")]
pub struct PlaMatrix {
    inputs: Vec<String>,
    outputs: Vec<String>,
    input_lines: Vec<String>,
    term_labels: Vec<String>,
    and_plane: Vec<Vec<bool>>,
    or_plane: Vec<Vec<bool>>,
}

impl TryFrom<RawMatrix> for PlaMatrix {
    type Error = PlaError;

    fn try_from(raw: RawMatrix) -> Result<Self, PlaError> {
        if raw.schema_version != SCHEMA_VERSION {
            return Err(PlaError::Malformed(format!(
                "unsupported schema_version {}",
                raw.schema_version
            )));
        }
        let to_bool = |rows: Vec<Vec<u8>>| -> Result<Vec<Vec<bool>>, PlaError> {
            rows.into_iter()
                .map(|r| {
                    r.into_iter()
                        .map(|c| match c {
                            0 => Ok(false),
                            1 => Ok(true),
                            _ => Err(PlaError::Malformed(format!("matrix cell {c}"))),
                        })
                        .collect()
                })
                .collect()
        };
        let m = PlaMatrix {
            inputs: raw.inputs,
            outputs: raw.outputs,
            input_lines: raw.input_lines,
            term_labels: raw.term_labels,
            and_plane: to_bool(raw.and_plane)?,
            or_plane: to_bool(raw.or_plane)?,
        };
        if m.input_lines != line_labels(&m.inputs) {
            return Err(PlaError::Malformed(
                "input_lines do not match inputs".into(),
            ));
        }
        m.check()?;
        Ok(m)
    }
}

impl From<PlaMatrix> for RawMatrix {
    fn from(m: PlaMatrix) -> Self {
        let to_u8 = |rows: Vec<Vec<bool>>| {
            rows.into_iter()
                .map(|r| r.into_iter().map(u8::from).collect())
                .collect()
        };
        RawMatrix {
            schema_version: SCHEMA_VERSION,
            inputs: m.inputs,
            outputs: m.outputs,
            input_lines: m.input_lines,
            term_labels: m.term_labels,
            and_plane: to_u8(m.and_plane),
            or_plane: to_u8(m.or_plane),
        }
    }
}

pub fn line_labels(inputs: &[String]) -> Vec<String> {
    inputs
        .iter()
        .flat_map(|x| [x.clone(), format!("{x}'")])
        .collect()
}

/// Connection counts for reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PlaStats {
    pub input_lines: usize,
    pub used_lines: usize,
    pub and_gates: usize,
    pub or_gates: usize,
    pub and_connections: usize,
    pub or_connections: usize,
}

impl PlaMatrix {
    /// One product term per distinct implicant. A literal-free term (constant
    /// 1) is realized as the pair `X + X'` on the first input.
    pub fn from_sop(expr: &SopExpression) -> Result<Self, PlaError> {
        let n = expr.input_count();
        let mut terms: Vec<Implicant> = Vec::new();
        let mut uses: Vec<Vec<Implicant>> = Vec::new();
        for k in 0..expr.output_count() {
            let mut list = Vec::new();
            for t in expr.output_terms(k) {
                if t.literal_count() == 0 {
                    let mut lits = vec![Literal::Absent; n];
                    lits[0] = Literal::Positive;
                    let pos = Implicant::from_literals(&lits);
                    lits[0] = Literal::Negative;
                    let neg = Implicant::from_literals(&lits);
                    list.extend([pos, neg]);
                } else {
                    list.push(*t);
                }
            }
            terms.extend(list.iter().copied());
            uses.push(list);
        }
        terms.sort();
        terms.dedup();

        let and_plane = terms
            .iter()
            .map(|t| {
                (0..n)
                    .flat_map(|i| match t.literal(i) {
                        Literal::Positive => [true, false],
                        Literal::Negative => [false, true],
                        Literal::Absent => [false, false],
                    })
                    .collect()
            })
            .collect();
        let or_plane = uses
            .iter()
            .map(|list| terms.iter().map(|t| list.contains(t)).collect())
            .collect();
        let m = PlaMatrix {
            inputs: expr.inputs.clone(),
            outputs: expr.outputs.clone(),
            input_lines: line_labels(&expr.inputs),
            term_labels: terms.iter().map(|t| t.label(&expr.inputs)).collect(),
            and_plane,
            or_plane,
        };
        m.check()?;
        Ok(m)
    }

    fn check(&self) -> Result<(), PlaError> {
        let lines = self.input_lines.len();
        if lines != 2 * self.inputs.len() {
            return Err(PlaError::DimensionMismatch("line count".into()));
        }
        if self.and_plane.len() != self.term_labels.len()
            || self.and_plane.iter().any(|r| r.len() != lines)
        {
            return Err(PlaError::DimensionMismatch("and_plane shape".into()));
        }
        if self.or_plane.len() != self.outputs.len()
            || self.or_plane.iter().any(|r| r.len() != self.term_count())
        {
            return Err(PlaError::DimensionMismatch("or_plane shape".into()));
        }
        for (t, row) in self.and_plane.iter().enumerate() {
            let label = &self.term_labels[t];
            if row.chunks(2).any(|pair| pair[0] && pair[1]) {
                return Err(PlaError::ConstantTerm(label.clone()));
            }
            if !row.iter().any(|&c| c) || !self.or_plane.iter().any(|r| r[t]) {
                return Err(PlaError::DanglingTerm(label.clone()));
            }
        }
        Ok(())
    }

    pub fn inputs(&self) -> &[String] {
        &self.inputs
    }

    pub fn outputs(&self) -> &[String] {
        &self.outputs
    }

    pub fn input_lines(&self) -> &[String] {
        &self.input_lines
    }

    pub fn term_labels(&self) -> &[String] {
        &self.term_labels
    }

    pub fn term_count(&self) -> usize {
        self.term_labels.len()
    }

    pub fn and_plane(&self) -> &[Vec<bool>] {
        &self.and_plane
    }

    pub fn or_plane(&self) -> &[Vec<bool>] {
        &self.or_plane
    }

    /// Input lines feeding term `t`, ascending.
    pub fn term_lines(&self, t: usize) -> Vec<usize> {
        (0..self.input_lines.len())
            .filter(|&l| self.and_plane[t][l])
            .collect()
    }

    /// Terms feeding output `k`, ascending.
    pub fn output_terms(&self, k: usize) -> Vec<usize> {
        (0..self.term_count())
            .filter(|&t| self.or_plane[k][t])
            .collect()
    }

    pub fn eval_index(&self, v: u32) -> Vec<bool> {
        let n = self.inputs.len();
        let line = |l: usize| {
            let bit = v >> (n - 1 - l / 2) & 1 == 1;
            if l % 2 == 0 {
                bit
            } else {
                !bit
            }
        };
        let active: Vec<bool> = self
            .and_plane
            .iter()
            .map(|row| row.iter().enumerate().all(|(l, &c)| !c || line(l)))
            .collect();
        self.or_plane
            .iter()
            .map(|row| row.iter().zip(&active).any(|(&c, &a)| c && a))
            .collect()
    }

    /// Returns a new matrix with one stitch added or removed.
    pub fn program(&self, edit: Edit) -> Result<PlaMatrix, PlaError> {
        let mut next = self.clone();
        let cell = match edit.plane {
            Plane::And => next
                .and_plane
                .get_mut(edit.row)
                .and_then(|r| r.get_mut(edit.col)),
            Plane::Or => next
                .or_plane
                .get_mut(edit.row)
                .and_then(|r| r.get_mut(edit.col)),
        }
        .ok_or_else(|| {
            PlaError::OutOfRange(format!("{:?} ({}, {})", edit.plane, edit.row, edit.col))
        })?;
        if *cell == edit.connect {
            return Err(PlaError::NoChange);
        }
        *cell = edit.connect;
        if edit.plane == Plane::And {
            next.relabel_term(edit.row);
        }
        next.check()?;
        Ok(next)
    }

    fn relabel_term(&mut self, t: usize) {
        let mut label = String::new();
        for (l, &c) in self.and_plane[t].iter().enumerate() {
            if c {
                label.push_str(&self.input_lines[l]);
            }
        }
        self.term_labels[t] = label;
    }

    pub fn stats(&self) -> PlaStats {
        let used_lines = (0..self.input_lines.len())
            .filter(|&l| self.and_plane.iter().any(|r| r[l]))
            .count();
        PlaStats {
            input_lines: self.input_lines.len(),
            used_lines,
            and_gates: self.term_count(),
            or_gates: self.outputs.len(),
            and_connections: self.and_plane.iter().flatten().filter(|&&c| c).count(),
            or_connections: self.or_plane.iter().flatten().filter(|&&c| c).count(),
        }
    }
}

/// Exhaustive functional check of the programmed planes against `table`.
pub fn verify(matrix: &PlaMatrix, table: &TruthTable) -> Result<Vec<Mismatch>, PlaError> {
    if matrix.inputs.len() != table.input_count() || matrix.outputs.len() != table.output_count() {
        return Err(PlaError::DimensionMismatch(format!(
            "matrix is {}x{}, table is {}x{}",
            matrix.inputs.len(),
            matrix.outputs.len(),
            table.input_count(),
            table.output_count()
        )));
    }
    Ok(compare_outputs(table, |v| matrix.eval_index(v)))
}
