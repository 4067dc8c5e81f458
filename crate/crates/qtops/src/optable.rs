//! Finite binary operations `F : {1,…,n}² → {1,…,n}` stored as value tables,
//! with decision procedures for the standard functional-equation properties
//! (associativity, bisymmetry, autodistributivity, …), neutral/annihilator
//! elements, degrees, and level-set structure.
//!
//! File format: first line `n`, then `n` lines of `n` space-separated
//! 1-based entries, line `x` giving `F(x,1) … F(x,n)`. In contour-plot
//! renderings the first argument runs along the horizontal axis.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::order::LinearOrder;

/// Errors raised when assembling a table from raw values, or when an
/// operation requires a quasitrivial table and the input is not one.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OpTableError {
    #[error("table must have at least one element")]
    Empty,
    #[error("expected {expected} values for n = {n}, got {got}")]
    WrongLength { n: usize, expected: usize, got: usize },
    #[error("F({x},{y}) = {value} out of range 1..={n}")]
    ValueOutOfRange { x: usize, y: usize, value: usize, n: usize },
    #[error("operation requires a quasitrivial table, but F({x},{y}) = {value}")]
    NotQuasitrivial { x: usize, y: usize, value: usize },
}

/// Parse failure with the 1-based line and column of the offending token.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {col}: {kind}")]
pub struct ParseTableError {
    pub line: usize,
    pub col: usize,
    pub kind: ParseTableErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseTableErrorKind {
    #[error("expected the element count n")]
    MissingHeader,
    #[error("n must be at least 1")]
    ZeroSize,
    #[error("invalid integer {0:?}")]
    InvalidInteger(String),
    #[error("entry {value} out of range 1..={n}")]
    OutOfRange { value: usize, n: usize },
    #[error("expected {expected} entries in this row, found {found}")]
    EntryCount { expected: usize, found: usize },
    #[error("expected {expected} rows, found {found}")]
    RowCount { expected: usize, found: usize },
    #[error("unexpected trailing content")]
    TrailingContent,
}

/// A total binary operation on `{1,…,n}` as an `n × n` value table.
/// `value(x, y) = F(x, y)` with the first argument selecting the row of the
/// file format.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OpTable {
    n: usize,
    values: Vec<usize>,
}

impl OpTable {
    /// Builds a table from row-major values (`values[(x-1)*n + (y-1)] = F(x,y)`).
    pub fn new(n: usize, values: Vec<usize>) -> Result<Self, OpTableError> {
        if n == 0 {
            return Err(OpTableError::Empty);
        }
        if values.len() != n * n {
            return Err(OpTableError::WrongLength { n, expected: n * n, got: values.len() });
        }
        for (i, &v) in values.iter().enumerate() {
            if v == 0 || v > n {
                return Err(OpTableError::ValueOutOfRange {
                    x: i / n + 1,
                    y: i % n + 1,
                    value: v,
                    n,
                });
            }
        }
        Ok(Self { n, values })
    }

    pub fn from_rows(rows: Vec<Vec<usize>>) -> Result<Self, OpTableError> {
        let n = rows.len();
        let mut values = Vec::with_capacity(n * n);
        for (x, row) in rows.into_iter().enumerate() {
            if row.len() != n {
                return Err(OpTableError::WrongLength {
                    n,
                    expected: n,
                    got: row.len(),
                });
            }
            let _ = x;
            values.extend(row);
        }
        Self::new(n, values)
    }

    /// Builds `F` from a closure over 1-based arguments.
    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> usize) -> Result<Self, OpTableError> {
        let mut values = Vec::with_capacity(n * n);
        for x in 1..=n {
            for y in 1..=n {
                values.push(f(x, y));
            }
        }
        Self::new(n, values)
    }

    /// The projection onto the first argument, `F(x,y) = x`.
    pub fn projection_first(n: usize) -> Self {
        Self::from_fn(n, |x, _| x).expect("valid")
    }

    /// The projection onto the second argument, `F(x,y) = y`.
    pub fn projection_second(n: usize) -> Self {
        Self::from_fn(n, |_, y| y).expect("valid")
    }

    /// The maximum operation w.r.t. a linear order.
    pub fn max_wrt(base: &LinearOrder) -> Self {
        Self::from_fn(base.n(), |x, y| if base.le(x, y) { y } else { x }).expect("valid")
    }

    /// The minimum operation w.r.t. a linear order.
    pub fn min_wrt(base: &LinearOrder) -> Self {
        Self::from_fn(base.n(), |x, y| if base.le(x, y) { x } else { y }).expect("valid")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `F(x, y)` for 1-based arguments.
    pub fn value(&self, x: usize, y: usize) -> usize {
        self.values[(x - 1) * self.n + (y - 1)]
    }

    /// Row-major values, `F(1,1), F(1,2), …`.
    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn rows(&self) -> impl Iterator<Item = &[usize]> {
        self.values.chunks(self.n)
    }

    /// First cell (row-major) where `F(x,y) ∉ {x,y}`, if any.
    pub fn quasitriviality_violation(&self) -> Option<(usize, usize)> {
        for x in 1..=self.n {
            for y in 1..=self.n {
                let v = self.value(x, y);
                if v != x && v != y {
                    return Some((x, y));
                }
            }
        }
        None
    }

    /// `F(x,y) ∈ {x,y}` everywhere.
    pub fn is_quasitrivial(&self) -> bool {
        self.quasitriviality_violation().is_none()
    }

    /// First `x` with `F(x,x) ≠ x`, if any.
    pub fn idempotency_violation(&self) -> Option<usize> {
        (1..=self.n).find(|&x| self.value(x, x) != x)
    }

    pub fn is_idempotent(&self) -> bool {
        self.idempotency_violation().is_none()
    }

    /// First pair (row-major) with `F(x,y) ≠ F(y,x)`, if any.
    pub fn commutativity_violation(&self) -> Option<(usize, usize)> {
        for x in 1..=self.n {
            for y in x + 1..=self.n {
                if self.value(x, y) != self.value(y, x) {
                    return Some((x, y));
                }
            }
        }
        None
    }

    pub fn is_commutative(&self) -> bool {
        self.commutativity_violation().is_none()
    }

    /// First triple (lexicographic) with `F(F(x,y),z) ≠ F(x,F(y,z))`, if any.
    pub fn associativity_violation(&self) -> Option<[usize; 3]> {
        for x in 1..=self.n {
            for y in 1..=self.n {
                let xy = self.value(x, y);
                for z in 1..=self.n {
                    if self.value(xy, z) != self.value(x, self.value(y, z)) {
                        return Some([x, y, z]);
                    }
                }
            }
        }
        None
    }

    pub fn is_associative(&self) -> bool {
        self.associativity_violation().is_none()
    }

    /// First quadruple (lexicographic) with
    /// `F(F(x,y),F(u,v)) ≠ F(F(x,u),F(y,v))`, if any.
    pub fn bisymmetry_violation(&self) -> Option<[usize; 4]> {
        for x in 1..=self.n {
            for y in 1..=self.n {
                let xy = self.value(x, y);
                for u in 1..=self.n {
                    let xu = self.value(x, u);
                    for v in 1..=self.n {
                        if self.value(xy, self.value(u, v))
                            != self.value(xu, self.value(y, v))
                        {
                            return Some([x, y, u, v]);
                        }
                    }
                }
            }
        }
        None
    }

    pub fn is_bisymmetric(&self) -> bool {
        self.bisymmetry_violation().is_none()
    }

    /// First triple violating either self-distributivity identity:
    /// `F(x,F(y,z)) = F(F(x,y),F(x,z))` (left) or
    /// `F(F(x,y),z) = F(F(x,z),F(y,z))` (right).
    pub fn autodistributivity_violation(&self) -> Option<AutodistributivityWitness> {
        for x in 1..=self.n {
            for y in 1..=self.n {
                for z in 1..=self.n {
                    if self.value(x, self.value(y, z))
                        != self.value(self.value(x, y), self.value(x, z))
                    {
                        return Some(AutodistributivityWitness {
                            side: DistributivitySide::Left,
                            triple: [x, y, z],
                        });
                    }
                    if self.value(self.value(x, y), z)
                        != self.value(self.value(x, z), self.value(y, z))
                    {
                        return Some(AutodistributivityWitness {
                            side: DistributivitySide::Right,
                            triple: [x, y, z],
                        });
                    }
                }
            }
        }
        None
    }

    pub fn is_autodistributive(&self) -> bool {
        self.autodistributivity_violation().is_none()
    }

    /// Monotonicity in each argument w.r.t. `base`, checked on
    /// base-consecutive sections (equivalent to the two-coordinate
    /// definition by chaining).
    pub fn is_order_preserving(&self, base: &LinearOrder) -> bool {
        assert_eq!(self.n, base.n(), "base must be on the same set");
        for pos in 0..self.n - 1 {
            let (a, b) = (base.at(pos), base.at(pos + 1));
            for c in 1..=self.n {
                if !base.le(self.value(c, a), self.value(c, b)) {
                    return false;
                }
                if !base.le(self.value(a, c), self.value(b, c)) {
                    return false;
                }
            }
        }
        true
    }

    /// First quadruple `(x, y, x', y')` (lexicographic) with `x ≤ x'`,
    /// `y ≤ y'` in `base` but `F(x,y) > F(x',y')`, if any.
    pub fn order_preserving_violation(&self, base: &LinearOrder) -> Option<[usize; 4]> {
        assert_eq!(self.n, base.n(), "base must be on the same set");
        for x in 1..=self.n {
            for y in 1..=self.n {
                for xp in 1..=self.n {
                    if !base.le(x, xp) {
                        continue;
                    }
                    for yp in 1..=self.n {
                        if base.le(y, yp) && !base.le(self.value(x, y), self.value(xp, yp)) {
                            return Some([x, y, xp, yp]);
                        }
                    }
                }
            }
        }
        None
    }

    /// The unique two-sided neutral element, if one exists.
    pub fn neutral_element(&self) -> Option<usize> {
        (1..=self.n)
            .find(|&e| (1..=self.n).all(|x| self.value(e, x) == x && self.value(x, e) == x))
    }

    /// The unique two-sided annihilator, if one exists.
    pub fn annihilator(&self) -> Option<usize> {
        (1..=self.n)
            .find(|&a| (1..=self.n).all(|x| self.value(x, a) == a && self.value(a, x) == a))
    }

    /// Number of points other than `(z,z)` sharing the value `F(z,z)`.
    pub fn degree(&self, z: usize) -> usize {
        let target = self.value(z, z);
        let mut count = 0;
        for x in 1..=self.n {
            for y in 1..=self.n {
                if (x, y) != (z, z) && self.value(x, y) == target {
                    count += 1;
                }
            }
        }
        count
    }

    /// The nondecreasing sequence of all degrees.
    pub fn degree_sequence(&self) -> DegreeSequence {
        let mut degrees: Vec<usize> = (1..=self.n).map(|z| self.degree(z)).collect();
        degrees.sort_unstable();
        DegreeSequence(degrees)
    }

    /// True when no other point shares the value of `(x, y)`.
    pub fn is_isolated(&self, x: usize, y: usize) -> bool {
        let target = self.value(x, y);
        for u in 1..=self.n {
            for v in 1..=self.n {
                if (u, v) != (x, y) && self.value(u, v) == target {
                    return false;
                }
            }
        }
        true
    }

    /// Disconnected-level-set analysis w.r.t. `base`: the general form uses
    /// the componentwise product order on points (both coordinates `≤`, at
    /// least one strict); the horizontal (resp. vertical) form fixes the
    /// second (resp. first) argument.
    pub fn level_set_report(&self, base: &LinearOrder) -> LevelSetReport {
        assert_eq!(self.n, base.n(), "base must be on the same set");
        let n = self.n;
        let lt = |a: (usize, usize), b: (usize, usize)| {
            a != b && base.le(a.0, b.0) && base.le(a.1, b.1)
        };

        let mut general_witness = None;
        'general: for x in 1..=n {
            for y in 1..=n {
                for u in 1..=n {
                    for v in 1..=n {
                        if !lt((x, y), (u, v)) || self.value(x, y) == self.value(u, v) {
                            continue;
                        }
                        for s in 1..=n {
                            for t in 1..=n {
                                if lt((u, v), (s, t)) && self.value(s, t) == self.value(x, y) {
                                    general_witness = Some([(x, y), (u, v), (s, t)]);
                                    break 'general;
                                }
                            }
                        }
                    }
                }
            }
        }

        let mut horizontal_witness = None;
        'horizontal: for x in 1..=n {
            for y in 1..=n {
                if !base.lt(x, y) {
                    continue;
                }
                for z in 1..=n {
                    if !base.lt(y, z) {
                        continue;
                    }
                    for u in 1..=n {
                        if self.value(x, u) == self.value(z, u)
                            && self.value(x, u) != self.value(y, u)
                        {
                            horizontal_witness = Some([x, y, z, u]);
                            break 'horizontal;
                        }
                    }
                }
            }
        }

        let mut vertical_witness = None;
        'vertical: for x in 1..=n {
            for y in 1..=n {
                if !base.lt(x, y) {
                    continue;
                }
                for z in 1..=n {
                    if !base.lt(y, z) {
                        continue;
                    }
                    for u in 1..=n {
                        if self.value(u, x) == self.value(u, z)
                            && self.value(u, x) != self.value(u, y)
                        {
                            vertical_witness = Some([x, y, z, u]);
                            break 'vertical;
                        }
                    }
                }
            }
        }

        LevelSetReport {
            general: general_witness.is_some(),
            general_witness,
            horizontal: horizontal_witness.is_some(),
            horizontal_witness,
            vertical: vertical_witness.is_some(),
            vertical_witness,
        }
    }

    /// For a quasitrivial table, whether every horizontal and vertical level
    /// set through the diagonal (`{y : F(y,x) = x}` and `{y : F(x,y) = x}`)
    /// is convex w.r.t. `base`.
    pub fn level_set_convexity(&self, base: &LinearOrder) -> Result<bool, OpTableError> {
        assert_eq!(self.n, base.n(), "base must be on the same set");
        if let Some((x, y)) = self.quasitriviality_violation() {
            return Err(OpTableError::NotQuasitrivial { x, y, value: self.value(x, y) });
        }
        let convex = |members: Vec<usize>| {
            let mut ranks: Vec<usize> = members.iter().map(|&e| base.rank(e)).collect();
            ranks.sort_unstable();
            ranks.windows(2).all(|p| p[1] == p[0] + 1)
        };
        for x in 1..=self.n {
            let horizontal: Vec<usize> = (1..=self.n).filter(|&y| self.value(y, x) == x).collect();
            let vertical: Vec<usize> = (1..=self.n).filter(|&y| self.value(x, y) == x).collect();
            if !convex(horizontal) || !convex(vertical) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Renders the table as a grid in the contour-plot orientation: first
    /// argument along the horizontal axis, second argument increasing
    /// upwards.
    pub fn render(&self) -> String {
        let width = self.n.to_string().len();
        let mut out = String::new();
        for y in (1..=self.n).rev() {
            out.push_str(&format!("{y:>width$} |"));
            for x in 1..=self.n {
                out.push_str(&format!(" {:>width$}", self.value(x, y)));
            }
            out.push('\n');
        }
        out.push_str(&format!("{:>width$} +", ""));
        out.push_str(&"-".repeat((width + 1) * self.n));
        out.push('\n');
        out.push_str(&format!("{:>width$}  ", ""));
        for x in 1..=self.n {
            out.push_str(&format!(" {x:>width$}"));
        }
        out.push('\n');
        out
    }
}

impl fmt::Display for OpTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.n)?;
        for row in self.rows() {
            writeln!(f, "{}", row.iter().map(ToString::to_string).collect::<Vec<_>>().join(" "))?;
        }
        Ok(())
    }
}

/// Tokens of a line together with their 1-based character columns.
fn tokens_with_cols(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in line.char_indices() {
        if c.is_whitespace() {
            if let Some(s) = start.take() {
                out.push((s, &line[s..i]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push((s, &line[s..]));
    }
    // byte offset -> 1-based char column
    out.into_iter()
        .map(|(byte, tok)| (line[..byte].chars().count() + 1, tok))
        .collect()
}

impl FromStr for OpTable {
    type Err = ParseTableError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = |line: usize, col: usize, kind: ParseTableErrorKind| ParseTableError {
            line,
            col,
            kind,
        };
        let mut lines = s
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, tokens_with_cols(l)))
            .filter(|(_, toks)| !toks.is_empty());

        let (header_line, header) = lines
            .next()
            .ok_or_else(|| err(1, 1, ParseTableErrorKind::MissingHeader))?;
        if header.len() != 1 {
            return Err(err(header_line, header[1].0, ParseTableErrorKind::TrailingContent));
        }
        let n: usize = header[0]
            .1
            .parse()
            .map_err(|_| err(header_line, header[0].0, ParseTableErrorKind::InvalidInteger(header[0].1.to_string())))?;
        if n == 0 {
            return Err(err(header_line, header[0].0, ParseTableErrorKind::ZeroSize));
        }

        let mut values = Vec::with_capacity(n * n);
        let mut rows_seen = 0;
        let mut last_line = header_line;
        for (line_no, toks) in lines {
            if rows_seen == n {
                return Err(err(line_no, toks[0].0, ParseTableErrorKind::TrailingContent));
            }
            if toks.len() != n {
                return Err(err(
                    line_no,
                    toks.last().map_or(1, |t| t.0),
                    ParseTableErrorKind::EntryCount { expected: n, found: toks.len() },
                ));
            }
            for (col, tok) in toks {
                let v: usize = tok.parse().map_err(|_| {
                    err(line_no, col, ParseTableErrorKind::InvalidInteger(tok.to_string()))
                })?;
                if v == 0 || v > n {
                    return Err(err(line_no, col, ParseTableErrorKind::OutOfRange { value: v, n }));
                }
                values.push(v);
            }
            rows_seen += 1;
            last_line = line_no;
        }
        if rows_seen != n {
            return Err(err(
                last_line,
                1,
                ParseTableErrorKind::RowCount { expected: n, found: rows_seen },
            ));
        }
        Ok(OpTable::new(n, values).expect("validated during parse"))
    }
}

/// The nondecreasing sequence of degrees of a table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct DegreeSequence(Vec<usize>);

impl DegreeSequence {
    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }
}

impl fmt::Display for DegreeSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({})",
            self.0.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DistributivitySide {
    Left,
    Right,
}

/// A triple violating one of the two self-distributivity identities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct AutodistributivityWitness {
    pub side: DistributivitySide,
    pub triple: [usize; 3],
}

/// Flags and witnesses for the three disconnected-level-set variants.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LevelSetReport {
    pub general: bool,
    /// Three points `(x,y) < (u,v) < (s,t)` with equal outer values and a
    /// different middle value.
    pub general_witness: Option<[(usize, usize); 3]>,
    pub horizontal: bool,
    /// `[x, y, z, u]` with `x < y < z` and `F(x,u) = F(z,u) ≠ F(y,u)`.
    pub horizontal_witness: Option<[usize; 4]>,
    pub vertical: bool,
    /// `[x, y, z, u]` with `x < y < z` and `F(u,x) = F(u,z) ≠ F(u,y)`.
    pub vertical_witness: Option<[usize; 4]>,
}

/// Every predicate of the module evaluated on one table, with a violating
/// witness for each property that fails.
#[derive(Debug, Clone, Serialize)]
pub struct PropertyReport {
    pub n: usize,
    pub base: String,
    pub idempotent: bool,
    pub idempotent_witness: Option<usize>,
    pub quasitrivial: bool,
    pub quasitrivial_witness: Option<(usize, usize)>,
    pub commutative: bool,
    pub commutative_witness: Option<(usize, usize)>,
    pub associative: bool,
    pub associative_witness: Option<[usize; 3]>,
    pub bisymmetric: bool,
    pub bisymmetric_witness: Option<[usize; 4]>,
    pub autodistributive: bool,
    pub autodistributive_witness: Option<AutodistributivityWitness>,
    pub order_preserving: bool,
    pub order_preserving_witness: Option<[usize; 4]>,
    pub neutral_element: Option<usize>,
    pub annihilator: Option<usize>,
    pub degree_sequence: DegreeSequence,
    pub level_sets: LevelSetReport,
}

impl PropertyReport {
    pub fn new(table: &OpTable, base: &LinearOrder) -> Self {
        let idempotent_witness = table.idempotency_violation();
        let quasitrivial_witness = table.quasitriviality_violation();
        let commutative_witness = table.commutativity_violation();
        let associative_witness = table.associativity_violation();
        let bisymmetric_witness = table.bisymmetry_violation();
        let autodistributive_witness = table.autodistributivity_violation();
        let order_preserving_witness = table.order_preserving_violation(base);
        Self {
            n: table.n(),
            base: base.to_string(),
            idempotent: idempotent_witness.is_none(),
            idempotent_witness,
            quasitrivial: quasitrivial_witness.is_none(),
            quasitrivial_witness,
            commutative: commutative_witness.is_none(),
            commutative_witness,
            associative: associative_witness.is_none(),
            associative_witness,
            bisymmetric: bisymmetric_witness.is_none(),
            bisymmetric_witness,
            autodistributive: autodistributive_witness.is_none(),
            autodistributive_witness,
            order_preserving: order_preserving_witness.is_none(),
            order_preserving_witness,
            neutral_element: table.neutral_element(),
            annihilator: table.annihilator(),
            degree_sequence: table.degree_sequence(),
            level_sets: table.level_set_report(base),
        }
    }
}
