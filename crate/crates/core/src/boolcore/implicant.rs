use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// State of one input position inside a product term.
///
/// The declaration order is the canonical ordering used for deterministic
/// tie-breaking: a complemented literal sorts before a positive one, which
/// sorts before an absent position.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Literal {
    Negative,
    Positive,
    Absent,
}

impl Literal {
    pub fn symbol(self) -> char {
        match self {
            Literal::Negative => '0',
            Literal::Positive => '1',
            Literal::Absent => '-',
        }
    }
}

/// A product term over `n` inputs stored as a cube.
///
/// Bit `n - 1 - i` of `value`/`absent` corresponds to input position `i`, so
/// the first input is the most significant bit of a vector index. Bits set in
/// `absent` are don't-care positions; `value` is zero there.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Implicant {
    n: u8,
    value: u16,
    absent: u16,
}

impl Implicant {
    pub(crate) fn from_raw(n: usize, value: u16, absent: u16) -> Self {
        debug_assert!(n <= 16);
        Implicant {
            n: n as u8,
            value: value & !absent,
            absent,
        }
    }

    /// A single fully specified vector.
    pub fn minterm(n: usize, index: u32) -> Self {
        Self::from_raw(n, index as u16, 0)
    }

    /// The implicant with every position absent: covers all `2^n` vectors.
    pub fn tautology(n: usize) -> Self {
        let all = if n == 16 { u16::MAX } else { (1u16 << n) - 1 };
        Self::from_raw(n, 0, all)
    }

    pub fn from_literals(literals: &[Literal]) -> Self {
        let n = literals.len();
        let mut value = 0u16;
        let mut absent = 0u16;
        for (i, lit) in literals.iter().enumerate() {
            let bit = 1u16 << (n - 1 - i);
            match lit {
                Literal::Positive => value |= bit,
                Literal::Absent => absent |= bit,
                Literal::Negative => {}
            }
        }
        Self::from_raw(n, value, absent)
    }

    /// Parses a cube string such as `"01-"`.
    pub fn parse(cube: &str) -> Option<Self> {
        let literals = cube
            .chars()
            .map(|c| match c {
                '0' => Some(Literal::Negative),
                '1' => Some(Literal::Positive),
                '-' => Some(Literal::Absent),
                _ => None,
            })
            .collect::<Option<Vec<_>>>()?;
        if literals.is_empty() || literals.len() > 16 {
            return None;
        }
        Some(Self::from_literals(&literals))
    }

    pub fn width(&self) -> usize {
        self.n as usize
    }

    pub fn literal(&self, position: usize) -> Literal {
        let bit = 1u16 << (self.width() - 1 - position);
        if self.absent & bit != 0 {
            Literal::Absent
        } else if self.value & bit != 0 {
            Literal::Positive
        } else {
            Literal::Negative
        }
    }

    pub fn literals(&self) -> Vec<Literal> {
        (0..self.width()).map(|i| self.literal(i)).collect()
    }

    /// Number of non-absent positions.
    pub fn literal_count(&self) -> usize {
        self.width() - self.absent.count_ones() as usize
    }

    pub fn matches(&self, index: u32) -> bool {
        (index as u16) & !self.absent == self.value
    }

    /// Every vector index consistent with the literals, ascending.
    pub fn covered_minterms(&self) -> Vec<u32> {
        (0..(1u32 << self.width()))
            .filter(|&v| self.matches(v))
            .collect()
    }

    /// True when every vector covered by `other` is covered by `self`.
    pub fn contains(&self, other: &Implicant) -> bool {
        other.absent & !self.absent == 0 && (other.value & !self.absent) == self.value
    }

    /// Renders the term with input names, complements marked by `'`.
    /// The tautology renders as `1`.
    pub fn label(&self, names: &[String]) -> String {
        let mut out = String::new();
        for (i, name) in names.iter().enumerate().take(self.width()) {
            match self.literal(i) {
                Literal::Positive => out.push_str(name),
                Literal::Negative => {
                    out.push_str(name);
                    out.push('\'');
                }
                Literal::Absent => {}
            }
        }
        if out.is_empty() {
            out.push('1');
        }
        out
    }
}

impl Ord for Implicant {
    fn cmp(&self, other: &Self) -> Ordering {
        self.n.cmp(&other.n).then_with(|| {
            for i in 0..self.width() {
                match self.literal(i).cmp(&other.literal(i)) {
                    Ordering::Equal => continue,
                    o => return o,
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for Implicant {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Implicant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for lit in self.literals() {
            write!(f, "{}", lit.symbol())?;
        }
        Ok(())
    }
}

impl Serialize for Implicant {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Implicant {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        Implicant::parse(&s).ok_or_else(|| serde::de::Error::custom(format!("bad cube {s:?}")))
    }
}
