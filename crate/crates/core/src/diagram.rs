//! Cauchon diagrams (equivalently Le-diagrams).
//!
//! A diagram is an `m x p` grid with some cells black. It is valid when
//! every black cell has either all cells strictly to its left black, or all
//! cells strictly above it black. In Le notation a `0` is a black cell and a
//! `1` is a white one.
//!
//! Text format: one line per row, `.` for white and `#` for black.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::guard::{self, GuardKind};

/// A valid Cauchon diagram. Cells are 1-based `(row, column)` pairs.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "DiagramJson", into = "DiagramJson")]
pub struct CauchonDiagram {
    m: usize,
    p: usize,
    black: Vec<bool>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct DiagramJson {
    m: usize,
    p: usize,
    black: Vec<(usize, usize)>,
}

impl TryFrom<DiagramJson> for CauchonDiagram {
    type Error = Error;
    fn try_from(j: DiagramJson) -> Result<CauchonDiagram> {
        CauchonDiagram::new(j.m, j.p, &j.black)
    }
}

impl From<CauchonDiagram> for DiagramJson {
    fn from(d: CauchonDiagram) -> Self {
        DiagramJson { m: d.m, p: d.p, black: d.black_cells() }
    }
}

fn grid_from_cells(m: usize, p: usize, cells: &[(usize, usize)]) -> Result<Vec<bool>> {
    if m == 0 || p == 0 {
        return Err(Error::domain("diagram must have at least one row and one column"));
    }
    let mut grid = vec![false; m * p];
    for &(i, a) in cells {
        if i == 0 || a == 0 || i > m || a > p {
            return Err(Error::domain(format!("cell ({i},{a}) outside a {m}x{p} grid")));
        }
        grid[(i - 1) * p + (a - 1)] = true;
    }
    Ok(grid)
}

fn grid_ok(m: usize, p: usize, black: &[bool]) -> bool {
    (0..m).all(|i| {
        (0..p).all(|a| {
            !black[i * p + a] || (0..a).all(|b| black[i * p + b]) || (0..i).all(|j| black[j * p + a])
        })
    })
}

/// Whether the given black cells satisfy the Cauchon condition.
pub fn is_cauchon(m: usize, p: usize, black: &[(usize, usize)]) -> Result<bool> {
    Ok(grid_ok(m, p, &grid_from_cells(m, p, black)?))
}

impl CauchonDiagram {
    pub fn new(m: usize, p: usize, black: &[(usize, usize)]) -> Result<CauchonDiagram> {
        CauchonDiagram::from_grid(m, p, grid_from_cells(m, p, black)?)
    }

    /// Row-major grid, `true` for black.
    pub fn from_grid(m: usize, p: usize, black: Vec<bool>) -> Result<CauchonDiagram> {
        if m == 0 || p == 0 || black.len() != m * p {
            return Err(Error::domain("grid size does not match m x p"));
        }
        if !grid_ok(m, p, &black) {
            return Err(Error::domain("black cells violate the Cauchon condition"));
        }
        Ok(CauchonDiagram { m, p, black })
    }

    pub fn all_white(m: usize, p: usize) -> CauchonDiagram {
        CauchonDiagram { m, p, black: vec![false; m * p] }
    }

    pub fn all_black(m: usize, p: usize) -> CauchonDiagram {
        CauchonDiagram { m, p, black: vec![true; m * p] }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn is_black(&self, i: usize, a: usize) -> bool {
        self.black[(i - 1) * self.p + (a - 1)]
    }

    pub fn black_cells(&self) -> Vec<(usize, usize)> {
        self.cells(true)
    }

    pub fn white_cells(&self) -> Vec<(usize, usize)> {
        self.cells(false)
    }

    fn cells(&self, colour: bool) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 1..=self.m {
            for a in 1..=self.p {
                if self.is_black(i, a) == colour {
                    out.push((i, a));
                }
            }
        }
        out
    }

    pub fn grid(&self) -> &[bool] {
        &self.black
    }

    /// Bit `(i-1)p + (a-1)` set for each black cell `(i, a)`.
    pub fn bitmask(&self) -> u128 {
        self.black.iter().enumerate().filter(|(_, b)| **b).fold(0u128, |acc, (k, _)| acc | (1u128 << k))
    }

    pub fn transpose(&self) -> CauchonDiagram {
        let (m, p) = (self.m, self.p);
        let black = (0..p * m).map(|k| self.black[(k % m) * p + k / m]).collect();
        CauchonDiagram { m: p, p: m, black }
    }

    /// Le notation: rows of `0` (black) and `1` (white).
    pub fn to_le(&self) -> Vec<Vec<u8>> {
        self.black.chunks(self.p).map(|r| r.iter().map(|&b| u8::from(!b)).collect()).collect()
    }

    pub fn to_ascii(&self) -> String {
        self.to_string()
    }

    /// Parses the ASCII format, Le 0/1 rows or JSON. Rows may be separated
    /// by newlines or `/`.
    pub fn parse(text: &str) -> Result<CauchonDiagram> {
        let t = text.trim();
        if t.starts_with('{') {
            return serde_json::from_str(t).map_err(|e| Error::parse(format!("diagram JSON: {e}")));
        }
        let rows: Vec<&str> = t
            .split(['\n', '/'])
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with("//"))
            .collect();
        if rows.is_empty() {
            return Err(Error::parse("empty diagram"));
        }
        let p = rows[0].chars().count();
        let mut black = Vec::new();
        for row in &rows {
            if row.chars().count() != p {
                return Err(Error::parse("diagram rows have different lengths"));
            }
            for c in row.chars() {
                black.push(match c {
                    '#' | '0' => true,
                    '.' | '1' => false,
                    _ => return Err(Error::parse(format!("unexpected diagram character `{c}`"))),
                });
            }
        }
        CauchonDiagram::from_grid(rows.len(), p, black)
    }
}

impl fmt::Display for CauchonDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.black.chunks(self.p) {
            let line: String = row.iter().map(|&b| if b { '#' } else { '.' }).collect();
            writeln!(f, "{line}")?;
        }
        Ok(())
    }
}

/// Row patterns (bit `a` = column `a+1` black) allowed after rows whose
/// all-black columns are `col_black`.
fn row_choices(p: usize, col_black: u64) -> impl Iterator<Item = u64> {
    (0..1u64 << p).filter(move |&row| {
        (0..p).all(|a| {
            let bit = 1u64 << a;
            let left = (1u64 << a) - 1;
            row & bit == 0 || row & left == left || col_black & bit != 0
        })
    })
}

/// All `m x p` Cauchon diagrams in ascending order of [`CauchonDiagram::bitmask`].
///
/// Rows are chosen by backtracking: a black cell is accepted when the row
/// prefix before it is black or its column is black in every earlier row.
pub fn enumerate_diagrams(m: usize, p: usize) -> Result<Vec<CauchonDiagram>> {
    if m == 0 || p == 0 {
        return Err(Error::domain("diagram must have at least one row and one column"));
    }
    guard::check(GuardKind::Enumeration, m, p)?;
    if p > 63 {
        return Err(Error::Resource(format!("{m}x{p} is too wide to enumerate")));
    }
    let mut out = Vec::new();
    let mut rows = Vec::with_capacity(m);
    let all = (1u64 << p) - 1;
    fn go(m: usize, p: usize, col_black: u64, rows: &mut Vec<u64>, out: &mut Vec<CauchonDiagram>) {
        if rows.len() == m {
            let black = rows.iter().flat_map(|r| (0..p).map(move |a| r >> a & 1 == 1)).collect();
            out.push(CauchonDiagram { m, p, black });
            return;
        }
        for row in row_choices(p, col_black) {
            rows.push(row);
            go(m, p, col_black & row, rows, out);
            rows.pop();
        }
    }
    go(m, p, all, &mut rows, &mut out);
    out.sort_by_key(CauchonDiagram::bitmask);
    Ok(out)
}

/// Number of `m x p` Cauchon diagrams, by a transfer count over the set of
/// still-all-black columns.
pub fn count_diagrams(m: usize, p: usize) -> u128 {
    use std::collections::HashMap;
    let mut states: HashMap<u64, u128> = HashMap::from([((1u64 << p) - 1, 1)]);
    for _ in 0..m {
        let mut next = HashMap::new();
        for (&cols, &n) in &states {
            for row in row_choices(p, cols) {
                *next.entry(cols & row).or_insert(0) += n;
            }
        }
        states = next;
    }
    states.values().sum()
}

/// Every filling of the `m x p` grid that is not a Cauchon diagram, in Le
/// notation, ordered by row-major bitmask.
pub fn non_le_fillings(m: usize, p: usize) -> Result<Vec<Vec<Vec<u8>>>> {
    guard::check(GuardKind::Enumeration, m, p)?;
    let n = m * p;
    let mut out = Vec::new();
    for mask in 0u64..1u64 << n {
        let black: Vec<bool> = (0..n).map(|k| mask >> k & 1 == 1).collect();
        if !grid_ok(m, p, &black) {
            out.push(black.chunks(p).map(|r| r.iter().map(|&b| u8::from(!b)).collect()).collect());
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn brute_count(m: usize, p: usize) -> usize {
        (0u64..1 << (m * p))
            .filter(|mask| {
                let cells: Vec<(usize, usize)> = (0..m * p)
                    .filter(|k| mask >> k & 1 == 1)
                    .map(|k| (k / p + 1, k % p + 1))
                    .collect();
                is_cauchon(m, p, &cells).unwrap()
            })
            .count()
    }

    #[test]
    fn condition_examples() {
        assert!(is_cauchon(3, 3, &[(1, 2), (2, 1), (2, 2)]).unwrap());
        assert!(!is_cauchon(2, 2, &[(2, 2)]).unwrap());
        assert!(is_cauchon(2, 2, &[]).unwrap());
        assert!(is_cauchon(2, 2, &[(3, 1)]).is_err());
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate_diagrams(2, 2).unwrap().len(), 14);
        assert_eq!(enumerate_diagrams(1, 1).unwrap().len(), 2);
        assert_eq!(enumerate_diagrams(3, 3).unwrap().len(), 230);
        for (m, p) in [(1, 3), (2, 3), (3, 2), (2, 4), (4, 2), (3, 4)] {
            let list = enumerate_diagrams(m, p).unwrap();
            assert_eq!(list.len(), brute_count(m, p), "{m}x{p}");
            assert_eq!(list.len() as u128, count_diagrams(m, p));
        }
        assert_eq!(count_diagrams(4, 4), 6902);
    }

    #[test]
    fn enumeration_is_sorted_and_valid() {
        let list = enumerate_diagrams(3, 3).unwrap();
        assert!(list.windows(2).all(|w| w[0].bitmask() < w[1].bitmask()));
        assert!(list.iter().all(|d| is_cauchon(3, 3, &d.black_cells()).unwrap()));
        assert_eq!(list[0], CauchonDiagram::all_white(3, 3));
    }

    #[test]
    fn non_le_examples() {
        assert_eq!(non_le_fillings(2, 2).unwrap(), vec![vec![vec![1, 1], vec![1, 0]], vec![vec![0, 1], vec![1, 0]]]);
        assert!(non_le_fillings(1, 4).unwrap().is_empty());
        assert!(non_le_fillings(2, 1).unwrap().is_empty());
    }

    #[test]
    fn formats() {
        let d = CauchonDiagram::new(3, 3, &[(1, 2), (2, 1), (2, 2)]).unwrap();
        assert_eq!(d.to_ascii(), ".#.\n##.\n...\n");
        assert_eq!(CauchonDiagram::parse(".#.\n##.\n...\n").unwrap(), d);
        assert_eq!(CauchonDiagram::parse("101/001/111").unwrap(), d);
        let json = serde_json::to_string(&d).unwrap();
        assert_eq!(json, r#"{"m":3,"p":3,"black":[[1,2],[2,1],[2,2]]}"#);
        assert_eq!(CauchonDiagram::parse(&json).unwrap(), d);
        assert!(CauchonDiagram::parse("..\n.#").is_err());
        assert!(CauchonDiagram::parse("..\n.").is_err());
    }

    proptest! {
        #[test]
        fn transpose_preserves_validity(m in 1usize..5, p in 1usize..5, seed in any::<u64>()) {
            let list = enumerate_diagrams(m, p).unwrap();
            let d = &list[(seed % list.len() as u64) as usize];
            let t = d.transpose();
            prop_assert!(is_cauchon(p, m, &t.black_cells()).unwrap());
            prop_assert_eq!(&t.transpose(), d);
        }
    }

    #[test]
    fn transpose_symmetric_counts() {
        for m in 1..=4 {
            for p in 1..=4 {
                assert_eq!(count_diagrams(m, p), count_diagrams(p, m));
            }
        }
    }
}
