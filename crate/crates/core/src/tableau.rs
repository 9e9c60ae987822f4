//! The `b × k` digit tableau and the peg-shift procedure that builds it.
//!
//! A tableau arranges `0, 1, ..., bk-1` into `b` rows and `k` columns so that
//! row 1 is `0..k`, every entry digitwise dominates the top of its column,
//! and row `i` adds exactly `i-1` to the digit sum of the column head.
//!
//! Construction runs on a [`PegBoard`]: a single row of labelled pegs is
//! folded into `b` rows by permissible power shifts, one exponent level at a
//! time. Positions are 1-based `(row, column)` throughout the public API.

use std::fmt;

use serde::Serialize;

use crate::base::Base;
use crate::digits::{digit_dominates, digit_sum_unchecked};
use crate::error::{Error, Result};

/// A 1-based hole position.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Position {
    pub row: usize,
    pub col: usize,
}

impl Position {
    pub fn new(row: usize, col: usize) -> Self {
        Position { row, col }
    }
}

/// A rectangular array of holes, each empty or holding one labelled peg.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PegBoard {
    rows: usize,
    cols: usize,
    cells: Vec<Option<u64>>,
}

impl PegBoard {
    pub fn new(rows: usize, cols: usize) -> Self {
        PegBoard {
            rows,
            cols,
            cells: vec![None; rows * cols],
        }
    }

    /// `rows` rows, the first holding pegs labelled `0..n` left to right.
    pub fn single_row(n: usize, rows: usize, cols: usize) -> Self {
        let mut board = PegBoard::new(rows, cols.max(n));
        for j in 0..n {
            board.cells[j] = Some(j as u64);
        }
        board
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    fn index(&self, pos: Position) -> Result<usize> {
        if pos.row == 0 || pos.col == 0 || pos.row > self.rows || pos.col > self.cols {
            return Err(Error::OutOfBoard {
                row: pos.row,
                col: pos.col,
                rows: self.rows,
                cols: self.cols,
            });
        }
        Ok((pos.row - 1) * self.cols + (pos.col - 1))
    }

    pub fn get(&self, pos: Position) -> Result<Option<u64>> {
        Ok(self.cells[self.index(pos)?])
    }

    pub fn place(&mut self, pos: Position, label: u64) -> Result<()> {
        let idx = self.index(pos)?;
        if self.cells[idx].is_some() {
            return Err(Error::Constraint(format!(
                "hole ({}, {}) is already occupied",
                pos.row, pos.col
            )));
        }
        self.cells[idx] = Some(label);
        Ok(())
    }

    /// Pegs in `row` within columns `from..=to`.
    fn count(&self, row: usize, from: usize, to: usize) -> usize {
        (from..=to)
            .filter(|&c| self.cells[(row - 1) * self.cols + (c - 1)].is_some())
            .count()
    }

    /// Whether row `row` is occupied exactly on `from..from+len` inside the
    /// window `from..=to`.
    fn left_aligned(&self, row: usize, from: usize, to: usize, len: usize) -> bool {
        (from..=to).all(|c| {
            let occupied = self.cells[(row - 1) * self.cols + (c - 1)].is_some();
            occupied == (c < from + len)
        })
    }

    fn shift(&mut self, from: Position, dist: usize) {
        let src = (from.row - 1) * self.cols + (from.col - 1);
        let dst = from.row * self.cols + (from.col - dist - 1);
        self.cells[dst] = self.cells[src].take();
    }

    /// Row-major view of the first `width` columns.
    pub fn grid(&self, width: usize) -> Vec<Vec<Option<u64>>> {
        (0..self.rows)
            .map(|i| self.cells[i * self.cols..i * self.cols + width.min(self.cols)].to_vec())
            .collect()
    }
}

fn power(b: Base, k: u32) -> usize {
    (b.get() as usize).pow(k)
}

/// Whether moving the peg at `from` by `b^k` columns left and one row down is
/// permissible: the target hole exists and is empty, and source and target
/// columns lie in the same aligned block of `b^{k+1}` columns, i.e.
/// `(l-1) b^{k+1} < j - b^k < j <= l b^{k+1}` for some `l`.
pub fn is_permissible_shift(board: &PegBoard, from: Position, k: u32, b: Base) -> Result<bool> {
    if board.get(from)?.is_none() {
        return Ok(false);
    }
    let dist = power(b, k);
    let block = dist * b.get() as usize;
    let j = from.col;
    if j <= dist || from.row >= board.rows {
        return Ok(false);
    }
    let target = Position::new(from.row + 1, j - dist);
    if board.get(target)?.is_some() {
        return Ok(false);
    }
    let l = j.div_ceil(block);
    Ok((l - 1) * block < j - dist)
}

/// Folds a single row of `n` labelled pegs into `b` rows by permissible power
/// shifts.
///
/// The result has `ceil(n/b)` occupied columns, every column but the last is
/// full, and in the last column no peg sits below an empty hole.
pub fn arrange_row(n: usize, b: Base) -> Result<PegBoard> {
    let rows = b.get() as usize;
    if n <= 1 {
        return Ok(PegBoard::single_row(n, rows, n.max(1)));
    }
    // smallest K with n <= b^K
    let mut levels = 0u32;
    while power(b, levels) < n {
        levels += 1;
    }
    let mut board = PegBoard::single_row(n, rows, power(b, levels));
    let mut offset = 0;
    for exp in (1..=levels).rev() {
        offset = fold_level(&mut board, b, exp, offset)?;
    }
    Ok(board)
}

/// One induction step: the window of `b^exp` columns after `offset` holds an
/// `exp`-tableau. Performs every permissible `b^{exp-1}`-shift and returns
/// the offset of the `(exp-1)`-tableau left to fold.
fn fold_level(board: &mut PegBoard, b: Base, exp: u32, offset: usize) -> Result<usize> {
    let rows = board.rows;
    let width = power(b, exp);
    let sub = power(b, exp - 1);
    let (lo, hi) = (offset + 1, offset + width);

    let counts: Vec<usize> = (1..=rows).map(|i| board.count(i, lo, hi)).collect();
    let full = counts.iter().take_while(|&&c| c == width).count();
    let partial = counts.get(full).copied().unwrap_or(0);
    let shape_ok = counts
        .iter()
        .enumerate()
        .all(|(i, &c)| board.left_aligned(i + 1, lo, hi, c))
        && counts.iter().skip(full + 1).all(|&c| c == 0);
    if !shape_ok {
        return Err(Error::TableauProfile(format!(
            "window {lo}..={hi} is not a {exp}-tableau (row counts {counts:?})"
        )));
    }

    // Canonical order: source rows top to bottom, columns right to left,
    // repeated until no permissible shift of this exponent remains.
    loop {
        let mut moved = false;
        for i in 1..rows {
            for j in (lo + sub..=hi).rev() {
                let from = Position::new(i, j);
                if is_permissible_shift(board, from, exp - 1, b)? {
                    board.shift(from, sub);
                    moved = true;
                }
            }
        }
        if !moved {
            break;
        }
    }

    // Expected profile: l-1 rows of (f+1)b^k, one row of f b^k + m - (l-1)b^k,
    // then b-l rows of f b^k.
    let l = partial / sub + 1;
    let expected: Vec<usize> = (1..=rows)
        .map(|i| {
            if i < l {
                (full + 1) * sub
            } else if i == l {
                full * sub + partial - (l - 1) * sub
            } else {
                full * sub
            }
        })
        .collect();
    for (i, &len) in expected.iter().enumerate() {
        if board.count(i + 1, lo, hi) != len || !board.left_aligned(i + 1, lo, hi, len) {
            let found: Vec<usize> = (1..=rows).map(|r| board.count(r, lo, hi)).collect();
            return Err(Error::TableauProfile(format!(
                "after b^{}-shifts in window {lo}..={hi}: expected row lengths {expected:?}, found {found:?}",
                exp - 1
            )));
        }
    }
    Ok(offset + full * sub)
}

/// A `b × k` arrangement of `0..bk`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Tableau {
    #[serde(skip)]
    base: Base,
    entries: Vec<Vec<u64>>,
}

impl Tableau {
    /// Wraps a row-major matrix; it must have `b` rows of one common
    /// positive width.
    pub fn from_rows(base: Base, entries: Vec<Vec<u64>>) -> Result<Self> {
        let width = entries.first().map_or(0, Vec::len);
        if entries.len() != base.get() as usize || width == 0 || entries.iter().any(|r| r.len() != width) {
            return Err(Error::Constraint(format!(
                "a base-{base} tableau needs {base} rows of equal positive width"
            )));
        }
        Ok(Tableau { base, entries })
    }

    pub fn base(&self) -> Base {
        self.base
    }

    pub fn width(&self) -> usize {
        self.entries[0].len()
    }

    pub fn rows(&self) -> &[Vec<u64>] {
        &self.entries
    }

    /// 1-based `a_{i,j}`.
    pub fn entry(&self, i: usize, j: usize) -> u64 {
        self.entries[i - 1][j - 1]
    }

    pub fn swap(&mut self, a: Position, b: Position) {
        let tmp = self.entries[a.row - 1][a.col - 1];
        self.entries[a.row - 1][a.col - 1] = self.entries[b.row - 1][b.col - 1];
        self.entries[b.row - 1][b.col - 1] = tmp;
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.entries).expect("integer matrix serializes")
    }
}

impl fmt::Display for Tableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pad = self
            .entries
            .iter()
            .flatten()
            .map(|e| e.to_string().len())
            .max()
            .unwrap_or(1);
        for row in &self.entries {
            let line: Vec<String> = row.iter().map(|e| format!("{e:>pad$}")).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

/// Builds the canonical `b × k` tableau by folding the row `0..bk`.
pub fn build_tableau(b: Base, k: usize) -> Result<Tableau> {
    if k == 0 {
        return Err(Error::Constraint("tableau width k must be at least 1".into()));
    }
    let rows = b.get() as usize;
    let board = arrange_row(rows * k, b)?;
    let mut entries = Vec::with_capacity(rows);
    for (i, row) in board.grid(k).into_iter().enumerate() {
        let row: Option<Vec<u64>> = row.into_iter().collect();
        let row = row.ok_or_else(|| {
            Error::TableauProfile(format!("row {} has an empty hole within the first {k} columns", i + 1))
        })?;
        entries.push(row);
    }
    if (1..=rows).any(|i| board.count(i, 1, board.cols()) != k) {
        return Err(Error::TableauProfile(format!("pegs left outside the first {k} columns")));
    }
    Tableau::from_rows(b, entries)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    NotPermutation { missing: Vec<u64>, duplicated: Vec<u64> },
    FirstRow { col: usize, found: u64 },
    Dominance { row: usize, col: usize, head: u64, entry: u64 },
    DigitSumStep { row: usize, col: usize, expected: u64, found: u64 },
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct TableauReport {
    pub violations: Vec<Violation>,
}

impl TableauReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn dominance_failures(&self) -> impl Iterator<Item = &Violation> {
        self.violations
            .iter()
            .filter(|v| matches!(v, Violation::Dominance { .. }))
    }
}

/// Checks the permutation property and properties (i)-(iii), listing every
/// offending cell.
pub fn verify_tableau(t: &Tableau) -> TableauReport {
    let b = t.base;
    let (rows, width) = (t.entries.len(), t.width());
    let total = rows * width;
    let mut violations = Vec::new();

    let mut seen = vec![0usize; total];
    let mut duplicated = Vec::new();
    for &e in t.entries.iter().flatten() {
        match seen.get_mut(e as usize) {
            Some(c) => {
                *c += 1;
                if *c == 2 {
                    duplicated.push(e);
                }
            }
            None => duplicated.push(e),
        }
    }
    let missing: Vec<u64> = (0..total as u64).filter(|&e| seen[e as usize] == 0).collect();
    if !missing.is_empty() || !duplicated.is_empty() {
        duplicated.sort_unstable();
        violations.push(Violation::NotPermutation { missing, duplicated });
    }

    for j in 1..=width {
        let head = t.entry(1, j);
        if head != (j - 1) as u64 {
            violations.push(Violation::FirstRow { col: j, found: head });
        }
        let head_sum = digit_sum_unchecked(&head, b);
        for i in 1..=rows {
            let entry = t.entry(i, j);
            if !digit_dominates(&head, &entry, b).expect("u64 is nonnegative") {
                violations.push(Violation::Dominance { row: i, col: j, head, entry });
            }
            let found = digit_sum_unchecked(&entry, b);
            let expected = head_sum + (i - 1) as u64;
            if found != expected {
                violations.push(Violation::DigitSumStep { row: i, col: j, expected, found });
            }
        }
    }
    TableauReport { violations }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base(b: u32) -> Base {
        Base::new(b).unwrap()
    }

    pub(crate) fn a5() -> Tableau {
        Tableau::from_rows(
            base(3),
            vec![vec![0, 1, 2, 3, 4], vec![9, 10, 11, 6, 5], vec![12, 13, 14, 7, 8]],
        )
        .unwrap()
    }

    #[test]
    fn permissible_shift_examples() {
        let b = base(3);
        let mut board = PegBoard::new(3, 9);
        board.place(Position::new(1, 2), 1).unwrap();
        board.place(Position::new(1, 4), 3).unwrap();
        assert!(is_permissible_shift(&board, Position::new(1, 2), 0, b).unwrap());
        assert!(!is_permissible_shift(&board, Position::new(1, 4), 0, b).unwrap());

        board.place(Position::new(2, 1), 99).unwrap();
        assert!(!is_permissible_shift(&board, Position::new(1, 2), 0, b).unwrap());
        assert!(matches!(
            is_permissible_shift(&board, Position::new(4, 1), 0, b),
            Err(Error::OutOfBoard { .. })
        ));
        assert!(is_permissible_shift(&board, Position::new(1, 10), 0, b).is_err());
    }

    #[test]
    fn shift_needs_room_on_the_left_and_below() {
        let b = base(2);
        let mut board = PegBoard::new(2, 4);
        board.place(Position::new(1, 1), 0).unwrap();
        board.place(Position::new(2, 4), 3).unwrap();
        assert!(!is_permissible_shift(&board, Position::new(1, 1), 0, b).unwrap());
        assert!(!is_permissible_shift(&board, Position::new(2, 4), 0, b).unwrap());
        // empty source
        assert!(!is_permissible_shift(&board, Position::new(1, 2), 0, b).unwrap());
    }

    #[test]
    fn displayed_a5_passes_and_its_variants() {
        assert!(verify_tableau(&a5()).passed());

        let mut t = a5();
        t.swap(Position::new(2, 4), Position::new(3, 1));
        assert_eq!(t.entry(2, 4), 12);
        assert!(verify_tableau(&t).passed(), "6 and 12 interchanged");

        let mut t = a5();
        t.swap(Position::new(2, 5), Position::new(3, 4));
        assert!(verify_tableau(&t).passed(), "5 and 7 interchanged");

        let mut t = a5();
        t.swap(Position::new(2, 4), Position::new(2, 5));
        let report = verify_tableau(&t);
        assert!(!report.passed());
        let cols: Vec<usize> = report
            .dominance_failures()
            .map(|v| match v {
                Violation::Dominance { col, .. } => *col,
                _ => unreachable!(),
            })
            .collect();
        assert_eq!(cols, vec![5]);
    }

    #[test]
    fn verify_flags_bad_first_row_and_duplicates() {
        let t = Tableau::from_rows(base(2), vec![vec![1, 0], vec![1, 3]]).unwrap();
        let report = verify_tableau(&t);
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, Violation::NotPermutation { missing, duplicated } if missing == &vec![2] && duplicated == &vec![1])));
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, Violation::FirstRow { col: 1, found: 1 })));
    }

    #[test]
    fn from_rows_validates_shape() {
        assert!(Tableau::from_rows(base(3), vec![vec![0, 1], vec![2, 3]]).is_err());
        assert!(Tableau::from_rows(base(2), vec![vec![0, 1], vec![2]]).is_err());
        assert!(Tableau::from_rows(base(2), vec![vec![], vec![]]).is_err());
    }

    #[test]
    fn build_rejects_zero_width() {
        assert!(build_tableau(base(3), 0).is_err());
    }

    #[test]
    fn small_builds() {
        let t = build_tableau(base(3), 5).unwrap();
        assert!(verify_tableau(&t).passed(), "{t}");
        let t = build_tableau(base(2), 4).unwrap();
        assert!(verify_tableau(&t).passed(), "{t}");
        for b in 2..=7 {
            let t = build_tableau(base(b), 1).unwrap();
            assert_eq!(t.entry(1, 1), 0);
            assert!(verify_tableau(&t).passed());
        }
    }

    #[test]
    fn arrangement_of_ragged_rows() {
        for b in 2..=5u32 {
            let rows = b as usize;
            for n in 0..=200usize {
                let board = arrange_row(n, base(b)).unwrap();
                let cols = n.div_ceil(rows);
                let grid = board.grid(board.cols());
                let labels: Vec<u64> = grid.iter().flatten().flatten().copied().collect();
                assert_eq!(labels.len(), n);
                for j in 0..board.cols() {
                    let column: Vec<bool> = grid.iter().map(|r| r[j].is_some()).collect();
                    if j + 1 < cols {
                        assert!(column.iter().all(|&x| x), "b={b} n={n} col {}", j + 1);
                    } else if j + 1 == cols {
                        // no peg below an empty hole
                        assert!(column.windows(2).all(|w| w[0] || !w[1]), "b={b} n={n}");
                    } else {
                        assert!(column.iter().all(|&x| !x), "b={b} n={n} col {}", j + 1);
                    }
                }
            }
        }
    }

    #[test]
    fn board_rejects_double_placement() {
        let mut board = PegBoard::new(2, 2);
        board.place(Position::new(1, 1), 0).unwrap();
        assert!(board.place(Position::new(1, 1), 1).is_err());
        assert!(board.place(Position::new(0, 1), 1).is_err());
    }
}
