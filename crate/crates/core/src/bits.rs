//! Boolean matrix and vector values, the definitional product oracle and the
//! line-oriented text format.
//!
//! Indices in the Rust API are zero-based. Every diagnostic (parse errors,
//! dimension errors) reports positions one-based, counting rows and columns
//! the way a person reading the text file would.
//!
//! The text format is deliberately plain: a matrix of dimension `n` is `n`
//! newline-terminated lines of exactly `n` characters from `{'0', '1'}`, line
//! `i` holding row `i`. A vector is a single such line.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Errors raised when building or combining Boolean values.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BitsError {
    #[error("dimension must be at least 1")]
    ZeroDimension,
    #[error("dimension mismatch: left operand has n = {left}, right operand has n = {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("row {row} has {found} entries, expected {expected}")]
    RaggedRow {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error(transparent)]
    Parse(#[from] ParseError),
}

/// A text-format error with a one-based location.
///
/// `column` is the position of the offending character; for a line that is
/// too short it points one past the last character present.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("empty input")]
    Empty,
    #[error("illegal character {0:?}, expected '0' or '1'")]
    IllegalChar(char),
    #[error("line has {found} characters, expected {expected}")]
    WrongLength { expected: usize, found: usize },
    #[error("missing final newline")]
    MissingNewline,
    #[error("expected {expected} lines, found {found}")]
    WrongLineCount { expected: usize, found: usize },
}

impl ParseError {
    fn new(line: usize, column: usize, kind: ParseErrorKind) -> Self {
        Self { line, column, kind }
    }
}

/// An `n`-dimensional Boolean vector, `n >= 1`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitVector {
    bits: Vec<bool>,
}

impl BitVector {
    pub fn zeros(n: usize) -> Result<Self, BitsError> {
        Self::from_bits(vec![false; n])
    }

    pub fn ones(n: usize) -> Result<Self, BitsError> {
        Self::from_bits(vec![true; n])
    }

    pub fn from_bits(bits: Vec<bool>) -> Result<Self, BitsError> {
        if bits.is_empty() {
            return Err(BitsError::ZeroDimension);
        }
        Ok(Self { bits })
    }

    pub fn from_fn(n: usize, f: impl FnMut(usize) -> bool) -> Result<Self, BitsError> {
        Self::from_bits((0..n).map(f).collect())
    }

    /// Decodes the low `n` bits of `word`, bit `k` becoming coordinate `k`.
    /// Used for exhaustive enumeration of small vectors.
    pub fn from_word(n: usize, word: u64) -> Result<Self, BitsError> {
        assert!(n <= 64, "from_word supports n <= 64");
        Self::from_fn(n, |k| (word >> k) & 1 == 1)
    }

    pub fn n(&self) -> usize {
        self.bits.len()
    }

    pub fn get(&self, k: usize) -> bool {
        self.bits[k]
    }

    pub fn set(&mut self, k: usize, value: bool) {
        self.bits[k] = value;
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = bool> + '_ {
        self.bits.iter().copied()
    }

    pub fn count_ones(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn as_slice(&self) -> &[bool] {
        &self.bits
    }

    /// Coordinate-wise complement.
    pub fn complement(&self) -> Self {
        Self {
            bits: self.bits.iter().map(|b| !b).collect(),
        }
    }

    /// Single-line text form, newline-terminated.
    pub fn to_text(&self) -> String {
        let mut s = String::with_capacity(self.n() + 1);
        push_bits(&mut s, self.iter());
        s.push('\n');
        s
    }

    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let rows = parse_lines(text)?;
        if rows.len() != 1 {
            return Err(ParseError::new(
                2,
                1,
                ParseErrorKind::WrongLineCount {
                    expected: 1,
                    found: rows.len(),
                },
            ));
        }
        let bits = rows.into_iter().next().unwrap_or_default();
        Ok(Self { bits })
    }
}

impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector({self})")
    }
}

impl FromStr for BitVector {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::parse(s)
    }
}

/// A square `n x n` Boolean matrix, `n >= 1`, stored row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    n: usize,
    cells: Vec<bool>,
}

impl BitMatrix {
    pub fn zeros(n: usize) -> Result<Self, BitsError> {
        Self::from_fn(n, |_, _| false)
    }

    pub fn ones(n: usize) -> Result<Self, BitsError> {
        Self::from_fn(n, |_, _| true)
    }

    pub fn identity(n: usize) -> Result<Self, BitsError> {
        Self::from_fn(n, |i, j| i == j)
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> bool) -> Result<Self, BitsError> {
        if n == 0 {
            return Err(BitsError::ZeroDimension);
        }
        let mut cells = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                cells.push(f(i, j));
            }
        }
        Ok(Self { n, cells })
    }

    pub fn from_rows<R: AsRef<[bool]>>(rows: &[R]) -> Result<Self, BitsError> {
        let n = rows.len();
        if n == 0 {
            return Err(BitsError::ZeroDimension);
        }
        for (i, row) in rows.iter().enumerate() {
            let found = row.as_ref().len();
            if found != n {
                return Err(BitsError::RaggedRow {
                    row: i + 1,
                    expected: n,
                    found,
                });
            }
        }
        Self::from_fn(n, |i, j| rows[i].as_ref()[j])
    }

    /// Builds a matrix from its columns, column `j` of the result being
    /// `columns[j]`.
    pub fn from_columns(columns: &[BitVector]) -> Result<Self, BitsError> {
        let n = columns.len();
        if n == 0 {
            return Err(BitsError::ZeroDimension);
        }
        if let Some((j, c)) = columns.iter().enumerate().find(|(_, c)| c.n() != n) {
            return Err(BitsError::RaggedRow {
                row: j + 1,
                expected: n,
                found: c.n(),
            });
        }
        Self::from_fn(n, |i, j| columns[j].get(i))
    }

    /// Decodes the low `n*n` bits of `word` in row-major order.
    pub fn from_word(n: usize, word: u64) -> Result<Self, BitsError> {
        assert!(n * n <= 64, "from_word supports n*n <= 64");
        Self::from_fn(n, |i, j| (word >> (i * n + j)) & 1 == 1)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        assert!(
            i < self.n && j < self.n,
            "cell ({i}, {j}) out of range for n = {}",
            self.n
        );
        self.cells[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        assert!(
            i < self.n && j < self.n,
            "cell ({i}, {j}) out of range for n = {}",
            self.n
        );
        self.cells[i * self.n + j] = value;
    }

    pub fn row(&self, i: usize) -> BitVector {
        BitVector {
            bits: self.cells[i * self.n..(i + 1) * self.n].to_vec(),
        }
    }

    pub fn column(&self, j: usize) -> BitVector {
        BitVector {
            bits: (0..self.n).map(|i| self.get(i, j)).collect(),
        }
    }

    pub fn complement(&self) -> Self {
        Self {
            n: self.n,
            cells: self.cells.iter().map(|b| !b).collect(),
        }
    }

    pub fn count_ones(&self) -> usize {
        self.cells.iter().filter(|&&b| b).count()
    }

    pub fn to_text(&self) -> String {
        let mut s = String::with_capacity(self.n * (self.n + 1));
        for i in 0..self.n {
            push_bits(
                &mut s,
                self.cells[i * self.n..(i + 1) * self.n].iter().copied(),
            );
            s.push('\n');
        }
        s
    }

    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let rows = parse_lines(text)?;
        let n = rows[0].len();
        if rows.len() != n {
            // Point at the first missing line, or the first surplus one.
            let line = rows.len().min(n) + 1;
            return Err(ParseError::new(
                line,
                1,
                ParseErrorKind::WrongLineCount {
                    expected: n,
                    found: rows.len(),
                },
            ));
        }
        Ok(Self {
            n,
            cells: rows.into_iter().flatten().collect(),
        })
    }
}

impl fmt::Display for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitMatrix(n = {})\n{}", self.n, self.to_text())
    }
}

impl FromStr for BitMatrix {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::parse(s)
    }
}

fn push_bits(s: &mut String, bits: impl Iterator<Item = bool>) {
    s.extend(bits.map(|b| if b { '1' } else { '0' }));
}

/// Splits newline-terminated lines of equal, nonzero width into bits.
fn parse_lines(text: &str) -> Result<Vec<Vec<bool>>, ParseError> {
    if text.is_empty() {
        return Err(ParseError::new(1, 1, ParseErrorKind::Empty));
    }
    let mut rows: Vec<Vec<bool>> = Vec::new();
    let mut rest = text;
    let mut line_no = 0;
    while !rest.is_empty() {
        line_no += 1;
        let (line, terminated) = match rest.find('\n') {
            Some(pos) => {
                let line = &rest[..pos];
                rest = &rest[pos + 1..];
                (line, true)
            }
            None => {
                let line = rest;
                rest = "";
                (line, false)
            }
        };
        let mut bits = Vec::with_capacity(line.len());
        for (col, ch) in line.chars().enumerate() {
            match ch {
                '0' => bits.push(false),
                '1' => bits.push(true),
                other => {
                    return Err(ParseError::new(
                        line_no,
                        col + 1,
                        ParseErrorKind::IllegalChar(other),
                    ))
                }
            }
        }
        let expected = rows.first().map_or(bits.len(), Vec::len);
        if bits.is_empty() || bits.len() != expected {
            let expected = if expected == 0 { 1 } else { expected };
            let column = bits.len().min(expected) + 1;
            return Err(ParseError::new(
                line_no,
                column,
                ParseErrorKind::WrongLength {
                    expected,
                    found: bits.len(),
                },
            ));
        }
        if !terminated {
            return Err(ParseError::new(
                line_no,
                bits.len() + 1,
                ParseErrorKind::MissingNewline,
            ));
        }
        rows.push(bits);
    }
    Ok(rows)
}

/// Definitional Boolean matrix-vector product: coordinate `i` of the result
/// is the OR over `j` of `a[i][j] AND v[j]`. A plain double loop with no
/// machine involved.
pub fn oracle_matvec(a: &BitMatrix, v: &BitVector) -> Result<BitVector, BitsError> {
    if a.n() != v.n() {
        return Err(BitsError::DimensionMismatch {
            left: a.n(),
            right: v.n(),
        });
    }
    let n = a.n();
    let mut out = vec![false; n];
    for (i, slot) in out.iter_mut().enumerate() {
        let mut acc = false;
        for j in 0..n {
            acc = acc || (a.get(i, j) && v.get(j));
        }
        *slot = acc;
    }
    BitVector::from_bits(out)
}

/// Definitional Boolean matrix product, the naive `O(n^3)` triple loop.
pub fn oracle_matmul(a: &BitMatrix, b: &BitMatrix) -> Result<BitMatrix, BitsError> {
    if a.n() != b.n() {
        return Err(BitsError::DimensionMismatch {
            left: a.n(),
            right: b.n(),
        });
    }
    let n = a.n();
    BitMatrix::from_fn(n, |i, j| {
        let mut acc = false;
        for k in 0..n {
            acc = acc || (a.get(i, k) && b.get(k, j));
        }
        acc
    })
}
