use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::BoolError;

pub const MAX_INPUTS: usize = 8;
pub const MAX_OUTPUTS: usize = 8;

/// One output cell of a truth table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Cell {
    Zero,
    One,
    DontCare,
}

impl Cell {
    fn from_char(c: char) -> Option<Cell> {
        match c {
            '0' => Some(Cell::Zero),
            '1' => Some(Cell::One),
            '-' => Some(Cell::DontCare),
            _ => None,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Cell::Zero => '0',
            Cell::One => '1',
            Cell::DontCare => '-',
        }
    }

    /// Whether `value` is acceptable for this cell.
    pub fn admits(self, value: bool) -> bool {
        match self {
            Cell::Zero => !value,
            Cell::One => value,
            Cell::DontCare => true,
        }
    }
}

/// A total multi-output Boolean specification.
///
/// `rows[v][k]` is output `k` at input vector `v`, where `v` reads the input
/// bit-string with the first input as the most significant bit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruthTable {
    inputs: Vec<String>,
    outputs: Vec<String>,
    rows: Vec<Vec<Cell>>,
}

#[derive(Serialize, Deserialize)]
struct JsonRow {
    #[serde(rename = "in")]
    input: String,
    out: String,
}

#[derive(Serialize, Deserialize)]
struct JsonTable {
    inputs: Vec<String>,
    outputs: Vec<String>,
    rows: Vec<JsonRow>,
}

fn valid_symbol(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn check_names(names: &[String], what: &str, max: usize) -> Result<(), BoolError> {
    if names.is_empty() || names.len() > max {
        return Err(BoolError::Size(format!(
            "{} {what} given, expected 1..={max}",
            names.len()
        )));
    }
    for name in names {
        if !valid_symbol(name) {
            return Err(BoolError::BadSymbol(format!("{what} name {name:?}")));
        }
    }
    Ok(())
}

pub fn format_vector(index: u32, n: usize) -> String {
    (0..n)
        .map(|i| {
            if index >> (n - 1 - i) & 1 == 1 {
                '1'
            } else {
                '0'
            }
        })
        .collect()
}

pub fn parse_vector(text: &str, n: usize) -> Result<u32, BoolError> {
    if text.len() != n {
        return Err(BoolError::LengthMismatch {
            expected: n,
            found: text.len(),
        });
    }
    let mut index = 0u32;
    for c in text.chars() {
        index <<= 1;
        match c {
            '0' => {}
            '1' => index |= 1,
            _ => return Err(BoolError::BadSymbol(format!("input bit {c:?} in {text:?}"))),
        }
    }
    Ok(index)
}

impl TruthTable {
    /// Builds a table from the input/output names and a row for every vector.
    pub fn new(
        inputs: Vec<String>,
        outputs: Vec<String>,
        rows: Vec<Vec<Cell>>,
    ) -> Result<Self, BoolError> {
        check_names(&inputs, "inputs", MAX_INPUTS)?;
        check_names(&outputs, "outputs", MAX_OUTPUTS)?;
        let mut all: Vec<&String> = inputs.iter().chain(outputs.iter()).collect();
        all.sort();
        if let Some(w) = all.windows(2).find(|w| w[0] == w[1]) {
            return Err(BoolError::BadSymbol(format!("duplicate name {:?}", w[0])));
        }
        if rows.len() != 1 << inputs.len() {
            return Err(BoolError::MissingRow(format!(
                "{} rows given, {} required",
                rows.len(),
                1 << inputs.len()
            )));
        }
        if let Some(r) = rows.iter().find(|r| r.len() != outputs.len()) {
            return Err(BoolError::Malformed(format!(
                "row has {} outputs, expected {}",
                r.len(),
                outputs.len()
            )));
        }
        Ok(TruthTable {
            inputs,
            outputs,
            rows,
        })
    }

    /// Evaluates `f(vector) -> output bits` over every input vector.
    pub fn from_fn(
        inputs: &[&str],
        outputs: &[&str],
        f: impl Fn(u32) -> Vec<bool>,
    ) -> Result<Self, BoolError> {
        let n = inputs.len();
        let rows = (0..1u32 << n)
            .map(|v| {
                f(v).into_iter()
                    .map(|b| if b { Cell::One } else { Cell::Zero })
                    .collect()
            })
            .collect();
        Self::new(
            inputs.iter().map(|s| s.to_string()).collect(),
            outputs.iter().map(|s| s.to_string()).collect(),
            rows,
        )
    }

    /// Parses either the JSON or the CSV truth-table format.
    pub fn parse(text: &str) -> Result<Self, BoolError> {
        if text.trim_start().starts_with('{') {
            Self::from_json(text)
        } else {
            Self::from_csv(text)
        }
    }

    pub fn from_json(text: &str) -> Result<Self, BoolError> {
        let raw: JsonTable =
            serde_json::from_str(text).map_err(|e| BoolError::Malformed(e.to_string()))?;
        let pairs = raw.rows.into_iter().map(|r| (r.input, r.out));
        Self::from_pairs(raw.inputs, raw.outputs, pairs)
    }

    /// CSV with a header row of `in:<name>` and `out:<name>` columns and one
    /// cell per bit.
    pub fn from_csv(text: &str) -> Result<Self, BoolError> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines
            .next()
            .ok_or_else(|| BoolError::Malformed("empty CSV".into()))?;
        let mut inputs = Vec::new();
        let mut outputs = Vec::new();
        let mut kinds = Vec::new();
        for cell in header.split(',').map(str::trim) {
            if let Some(name) = cell.strip_prefix("in:") {
                if !outputs.is_empty() {
                    return Err(BoolError::Malformed("input column after outputs".into()));
                }
                inputs.push(name.to_string());
                kinds.push(true);
            } else if let Some(name) = cell.strip_prefix("out:") {
                outputs.push(name.to_string());
                kinds.push(false);
            } else {
                return Err(BoolError::Malformed(format!(
                    "header cell {cell:?} lacks in:/out: prefix"
                )));
            }
        }
        let mut pairs = Vec::new();
        for line in lines {
            let cells: Vec<&str> = line.split(',').map(str::trim).collect();
            if cells.len() != kinds.len() {
                return Err(BoolError::Malformed(format!(
                    "row {line:?} has {} cells, header has {}",
                    cells.len(),
                    kinds.len()
                )));
            }
            let input: String = cells[..inputs.len()].concat();
            let out: String = cells[inputs.len()..].concat();
            pairs.push((input, out));
        }
        Self::from_pairs(inputs, outputs, pairs.into_iter())
    }

    fn from_pairs(
        inputs: Vec<String>,
        outputs: Vec<String>,
        pairs: impl Iterator<Item = (String, String)>,
    ) -> Result<Self, BoolError> {
        check_names(&inputs, "inputs", MAX_INPUTS)?;
        check_names(&outputs, "outputs", MAX_OUTPUTS)?;
        let n = inputs.len();
        let mut seen: BTreeMap<u32, Vec<Cell>> = BTreeMap::new();
        for (input, out) in pairs {
            let index = parse_vector(&input, n).map_err(|e| match e {
                BoolError::LengthMismatch { .. } => {
                    BoolError::Malformed(format!("input {input:?} is not {n} bits"))
                }
                other => other,
            })?;
            if out.chars().count() != outputs.len() {
                return Err(BoolError::Malformed(format!(
                    "output {out:?} is not {} symbols",
                    outputs.len()
                )));
            }
            let cells = out
                .chars()
                .map(|c| {
                    Cell::from_char(c)
                        .ok_or_else(|| BoolError::BadSymbol(format!("output symbol {c:?}")))
                })
                .collect::<Result<Vec<_>, _>>()?;
            if seen.insert(index, cells).is_some() {
                return Err(BoolError::DuplicateRow(input));
            }
        }
        if let Some(missing) = (0..1u32 << n).find(|v| !seen.contains_key(v)) {
            return Err(BoolError::MissingRow(format_vector(missing, n)));
        }
        Self::new(inputs, outputs, seen.into_values().collect())
    }

    pub fn to_json(&self) -> String {
        let raw = JsonTable {
            inputs: self.inputs.clone(),
            outputs: self.outputs.clone(),
            rows: (0..self.row_count() as u32)
                .map(|v| JsonRow {
                    input: format_vector(v, self.input_count()),
                    out: self.rows[v as usize].iter().map(|c| c.symbol()).collect(),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&raw).expect("table serializes")
    }

    pub fn inputs(&self) -> &[String] {
        &self.inputs
    }

    pub fn outputs(&self) -> &[String] {
        &self.outputs
    }

    pub fn input_count(&self) -> usize {
        self.inputs.len()
    }

    pub fn output_count(&self) -> usize {
        self.outputs.len()
    }

    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    pub fn cell(&self, vector: u32, output: usize) -> Cell {
        self.rows[vector as usize][output]
    }

    pub fn row(&self, vector: u32) -> &[Cell] {
        &self.rows[vector as usize]
    }

    /// Vectors where `output` is 1.
    pub fn on_set(&self, output: usize) -> Vec<u32> {
        self.select(output, |c| c == Cell::One)
    }

    pub fn dc_set(&self, output: usize) -> Vec<u32> {
        self.select(output, |c| c == Cell::DontCare)
    }

    fn select(&self, output: usize, pred: impl Fn(Cell) -> bool) -> Vec<u32> {
        (0..self.row_count() as u32)
            .filter(|&v| pred(self.rows[v as usize][output]))
            .collect()
    }

    /// Returns a copy with `cell` replaced.
    pub fn with_cell(&self, vector: u32, output: usize, cell: Cell) -> Self {
        let mut t = self.clone();
        t.rows[vector as usize][output] = cell;
        t
    }
}

impl fmt::Display for TruthTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} | {}", self.inputs.join(" "), self.outputs.join(" "))?;
        for v in 0..self.row_count() as u32 {
            let out: String = self.rows[v as usize].iter().map(|c| c.symbol()).collect();
            writeln!(f, "{} | {}", format_vector(v, self.input_count()), out)?;
        }
        Ok(())
    }
}
