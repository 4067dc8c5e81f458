//! Small generators shared by the unit tests. They are written directly
//! against the table representation so that tests do not depend on the
//! enumeration module they help to check.

use crate::optable::OpTable;

pub(crate) fn fixture(name: &str) -> OpTable {
    let path = format!("{}/tests/fixtures/{name}.txt", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(&path)
        .unwrap_or_else(|e| panic!("read {path}: {e}"))
        .parse()
        .unwrap()
}

/// All 2^(n(n-1)) quasitrivial tables: diagonal forced, each off-diagonal
/// cell keeps its first or second argument.
pub(crate) fn quasitrivial_tables(n: usize) -> impl Iterator<Item = OpTable> {
    let cells: Vec<(usize, usize)> = (1..=n)
        .flat_map(|x| (1..=n).map(move |y| (x, y)))
        .filter(|&(x, y)| x != y)
        .collect();
    let total = 1u64 << cells.len();
    (0..total).map(move |mask| {
        let mut values = vec![0; n * n];
        for x in 1..=n {
            values[(x - 1) * n + (x - 1)] = x;
        }
        for (bit, &(x, y)) in cells.iter().enumerate() {
            values[(x - 1) * n + (y - 1)] = if mask >> bit & 1 == 0 { x } else { y };
        }
        OpTable::new(n, values).unwrap()
    })
}

/// All n^(n²) tables.
pub(crate) fn all_tables(n: usize) -> impl Iterator<Item = OpTable> {
    let cells = n * n;
    let total = (n as u64).pow(cells as u32);
    (0..total).map(move |code| {
        let mut values = Vec::with_capacity(cells);
        let mut c = code;
        for _ in 0..cells {
            values.push((c % n as u64) as usize + 1);
            c /= n as u64;
        }
        OpTable::new(n, values).unwrap()
    })
}
