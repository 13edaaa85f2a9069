//! Exact rational matrices, minors and total positivity tests.
//!
//! Indices in [`MinorIndex`] are 1-based and sorted ascending; matrix
//! accessors ([`Matrix::get`]) are 0-based.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::symfun::parse::parse_rational;

/// Exact rational number with arbitrary-precision numerator and denominator.
pub type Rat = BigRational;

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Dense row-major `rows x cols` matrix over any entry type.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    entries: Vec<T>,
}

pub type RatMatrix = Matrix<Rat>;

impl<T: Clone> Matrix<T> {
    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Matrix<T>> {
        let m = rows.len();
        if m == 0 {
            return Err(Error::domain("matrix must have at least one row"));
        }
        let p = rows[0].len();
        if p == 0 {
            return Err(Error::domain("matrix must have at least one column"));
        }
        if rows.iter().any(|r| r.len() != p) {
            return Err(Error::domain("ragged matrix rows"));
        }
        Ok(Matrix { rows: m, cols: p, entries: rows.into_iter().flatten().collect() })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Matrix<T> {
        let mut entries = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                entries.push(f(r, c));
            }
        }
        Matrix { rows, cols, entries }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &T {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: T) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn entries(&self) -> &[T] {
        &self.entries
    }

    pub fn row_vecs(&self) -> Vec<Vec<T>> {
        self.entries.chunks(self.cols).map(|r| r.to_vec()).collect()
    }

    pub fn transpose(&self) -> Matrix<T> {
        Matrix::from_fn(self.cols, self.rows, |r, c| self.get(c, r).clone())
    }

    /// Square submatrix on the (1-based) rows and columns of `ix`.
    pub fn submatrix(&self, ix: &MinorIndex) -> Result<Vec<Vec<T>>> {
        if !ix.fits(self.rows, self.cols) {
            return Err(Error::domain(format!(
                "minor {ix} out of bounds for a {}x{} matrix",
                self.rows, self.cols
            )));
        }
        Ok(ix
            .rows()
            .iter()
            .map(|&r| ix.cols().iter().map(|&c| self.get(r - 1, c - 1).clone()).collect())
            .collect())
    }

    pub fn map<U>(&self, f: impl FnMut(&T) -> U) -> Matrix<U> {
        Matrix { rows: self.rows, cols: self.cols, entries: self.entries.iter().map(f).collect() }
    }
}

impl RatMatrix {
    pub fn from_ints(rows: &[&[i64]]) -> RatMatrix {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect())
            .expect("well-formed integer matrix")
    }

    pub fn zeros(rows: usize, cols: usize) -> RatMatrix {
        Matrix::from_fn(rows, cols, |_, _| Rat::zero())
    }

    pub fn identity(n: usize) -> RatMatrix {
        Matrix::from_fn(n, n, |r, c| if r == c { Rat::one() } else { Rat::zero() })
    }

    /// Parses CSV (one row per line) or the JSON matrix format.
    pub fn parse(text: &str) -> Result<RatMatrix> {
        if text.trim_start().starts_with('{') {
            let j: MatrixJson =
                serde_json::from_str(text).map_err(|e| Error::parse(format!("matrix JSON: {e}")))?;
            j.try_into()
        } else {
            parse_csv(text)
        }
    }

    pub fn to_json(&self) -> MatrixJson {
        MatrixJson {
            m: self.rows,
            p: self.cols,
            entries: self.row_vecs().iter().map(|r| r.iter().map(|x| RatLiteral::Text(x.to_string())).collect()).collect(),
        }
    }

    pub fn to_csv(&self) -> String {
        self.row_vecs().iter().map(|r| r.iter().join(",")).join("\n") + "\n"
    }
}

impl<T: fmt::Display> fmt::Display for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<String> = self.entries.iter().map(|x| x.to_string()).collect();
        let width = cells.iter().map(|s| s.len()).max().unwrap_or(1);
        for r in 0..self.rows {
            let line = (0..self.cols).map(|c| format!("{:>width$}", cells[r * self.cols + c])).join("  ");
            writeln!(f, "{line}")?;
        }
        Ok(())
    }
}

fn parse_csv(text: &str) -> Result<RatMatrix> {
    let rows: Vec<Vec<Rat>> = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| l.split(',').map(parse_rational).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;
    Matrix::from_rows(rows)
}

/// JSON form: `{"m":4,"p":4,"entries":[["5","6","3","0"],...]}`.
/// Entries may be strings holding rational literals or JSON integers.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MatrixJson {
    pub m: usize,
    pub p: usize,
    pub entries: Vec<Vec<RatLiteral>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RatLiteral {
    Text(String),
    Int(i64),
}

impl From<String> for RatLiteral {
    fn from(s: String) -> Self {
        RatLiteral::Text(s)
    }
}

impl TryFrom<MatrixJson> for RatMatrix {
    type Error = Error;
    fn try_from(j: MatrixJson) -> Result<RatMatrix> {
        let rows: Vec<Vec<Rat>> = j
            .entries
            .iter()
            .map(|r| {
                r.iter()
                    .map(|x| match x {
                        RatLiteral::Text(s) => parse_rational(s),
                        RatLiteral::Int(n) => Ok(rat(*n)),
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?;
        let mat = Matrix::from_rows(rows)?;
        if mat.rows != j.m || mat.cols != j.p {
            return Err(Error::parse(format!(
                "declared size {}x{} but entries are {}x{}",
                j.m, j.p, mat.rows, mat.cols
            )));
        }
        Ok(mat)
    }
}

/// Row and column index sets of a minor `[I|Λ]`, 1-based, strictly increasing.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "MinorIndexJson", into = "MinorIndexJson")]
pub struct MinorIndex {
    rows: Vec<usize>,
    cols: Vec<usize>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct MinorIndexJson {
    rows: Vec<usize>,
    cols: Vec<usize>,
}

impl TryFrom<MinorIndexJson> for MinorIndex {
    type Error = Error;
    fn try_from(j: MinorIndexJson) -> Result<MinorIndex> {
        MinorIndex::new(j.rows, j.cols)
    }
}

impl From<MinorIndex> for MinorIndexJson {
    fn from(ix: MinorIndex) -> Self {
        MinorIndexJson { rows: ix.rows, cols: ix.cols }
    }
}

fn strictly_increasing(v: &[usize]) -> bool {
    v.windows(2).all(|w| w[0] < w[1])
}

impl MinorIndex {
    pub fn new(rows: Vec<usize>, cols: Vec<usize>) -> Result<MinorIndex> {
        if rows.is_empty() || rows.len() != cols.len() {
            return Err(Error::domain(format!(
                "minor needs equally many rows and columns (got {} and {})",
                rows.len(),
                cols.len()
            )));
        }
        if rows.contains(&0) || cols.contains(&0) {
            return Err(Error::domain("minor indices are 1-based"));
        }
        if !strictly_increasing(&rows) || !strictly_increasing(&cols) {
            return Err(Error::domain("minor indices must be strictly increasing"));
        }
        Ok(MinorIndex { rows, cols })
    }

    pub fn rows(&self) -> &[usize] {
        &self.rows
    }

    pub fn cols(&self) -> &[usize] {
        &self.cols
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    pub fn fits(&self, m: usize, p: usize) -> bool {
        self.rows.last().is_some_and(|&r| r <= m) && self.cols.last().is_some_and(|&c| c <= p)
    }

    /// `[Λ|I]`, the index of the same minor in the transpose.
    pub fn transposed(&self) -> MinorIndex {
        MinorIndex { rows: self.cols.clone(), cols: self.rows.clone() }
    }
}

impl Ord for MinorIndex {
    /// Size first, then lexicographic on rows, then on columns.
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.size()
            .cmp(&other.size())
            .then_with(|| self.rows.cmp(&other.rows))
            .then_with(|| self.cols.cmp(&other.cols))
    }
}

impl PartialOrd for MinorIndex {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for MinorIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}|{}]", self.rows.iter().join(","), self.cols.iter().join(","))
    }
}

impl FromStr for MinorIndex {
    type Err = Error;
    /// Accepts `[1,2|2,3]` or `1,2|2,3`.
    fn from_str(s: &str) -> Result<MinorIndex> {
        let t = s.trim().trim_start_matches('[').trim_end_matches(']');
        let (r, c) = t.split_once('|').ok_or_else(|| Error::parse(format!("minor `{s}` lacks `|`")))?;
        let list = |x: &str| -> Result<Vec<usize>> {
            x.split(',')
                .map(|v| v.trim().parse::<usize>().map_err(|_| Error::parse(format!("bad index in `{s}`"))))
                .collect()
        };
        MinorIndex::new(list(r)?, list(c)?)
    }
}

/// All strictly increasing `k`-subsets of `1..=n`, in lexicographic order.
pub fn index_sets(n: usize, k: usize) -> impl Iterator<Item = Vec<usize>> {
    (1..=n).combinations(k)
}

/// Every minor index of an `m x p` matrix, in canonical order.
pub fn all_minor_indices(m: usize, p: usize) -> Vec<MinorIndex> {
    let mut out = Vec::new();
    for k in 1..=m.min(p) {
        for rows in index_sets(m, k) {
            for cols in index_sets(p, k) {
                out.push(MinorIndex { rows: rows.clone(), cols });
            }
        }
    }
    out
}

/// A set of minors of `m x p` matrices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "MinorFamilyJson", into = "MinorFamilyJson")]
pub struct MinorFamily {
    m: usize,
    p: usize,
    members: BTreeSet<MinorIndex>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct MinorFamilyJson {
    m: usize,
    p: usize,
    minors: Vec<MinorIndex>,
}

impl TryFrom<MinorFamilyJson> for MinorFamily {
    type Error = Error;
    fn try_from(j: MinorFamilyJson) -> Result<MinorFamily> {
        MinorFamily::new(j.m, j.p, j.minors)
    }
}

impl From<MinorFamily> for MinorFamilyJson {
    fn from(f: MinorFamily) -> Self {
        MinorFamilyJson { m: f.m, p: f.p, minors: f.members.into_iter().collect() }
    }
}

impl MinorFamily {
    pub fn new(m: usize, p: usize, members: impl IntoIterator<Item = MinorIndex>) -> Result<MinorFamily> {
        let members: BTreeSet<_> = members.into_iter().collect();
        if let Some(bad) = members.iter().find(|ix| !ix.fits(m, p)) {
            return Err(Error::domain(format!("minor {bad} does not fit in {m}x{p}")));
        }
        Ok(MinorFamily { m, p, members })
    }

    pub fn empty(m: usize, p: usize) -> MinorFamily {
        MinorFamily { m, p, members: BTreeSet::new() }
    }

    pub fn all(m: usize, p: usize) -> MinorFamily {
        MinorFamily { m, p, members: all_minor_indices(m, p).into_iter().collect() }
    }

    /// Parses a list like `[1,2|2,3],[2,3|1,2]` (braces optional).
    pub fn parse_list(m: usize, p: usize, text: &str) -> Result<MinorFamily> {
        let t = text.trim().trim_start_matches('{').trim_end_matches('}');
        let mut out = Vec::new();
        for chunk in t.split(']') {
            let chunk = chunk.trim().trim_start_matches(',').trim();
            if chunk.is_empty() {
                continue;
            }
            out.push(chunk.parse::<MinorIndex>()?);
        }
        MinorFamily::new(m, p, out)
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.m, self.p)
    }

    pub fn members(&self) -> &BTreeSet<MinorIndex> {
        &self.members
    }

    pub fn contains(&self, ix: &MinorIndex) -> bool {
        self.members.contains(ix)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn is_subset(&self, other: &MinorFamily) -> bool {
        self.members.is_subset(&other.members)
    }

    pub fn transposed(&self) -> MinorFamily {
        MinorFamily { m: self.p, p: self.m, members: self.members.iter().map(|ix| ix.transposed()).collect() }
    }
}

impl fmt::Display for MinorFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.members.iter().join(","))
    }
}

/// Determinant of an integer matrix by fraction-free (Bareiss) elimination.
pub fn bareiss_det(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&r| !a[r][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, swap);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// Exact determinant of a rational square matrix: clear denominators row
/// by row, then Bareiss over the integers.
pub fn rat_det(rows: &[Vec<Rat>]) -> Rat {
    let mut scale = BigInt::one();
    let ints: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| {
            let l = r.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            scale *= &l;
            r.iter().map(|x| x.numer() * (&l / x.denom())).collect()
        })
        .collect();
    Rat::new(bareiss_det(ints), scale)
}

pub fn minor(m: &RatMatrix, ix: &MinorIndex) -> Result<Rat> {
    Ok(rat_det(&m.submatrix(ix)?))
}

/// Every minor with its value, in canonical order (size, rows, columns).
pub fn all_minors(m: &RatMatrix) -> Vec<(MinorIndex, Rat)> {
    all_minor_indices(m.rows(), m.cols())
        .into_iter()
        .map(|ix| {
            let v = minor(m, &ix).expect("index within bounds");
            (ix, v)
        })
        .collect()
}

/// Number of minors of an `m x p` matrix, `C(m+p, m) - 1`.
pub fn minor_count(m: usize, p: usize) -> BigInt {
    num_integer::binomial(BigInt::from(m + p), BigInt::from(m)) - 1
}

/// The `n^2` initial minors, one per bottom-right corner `(i, j)`, in
/// row-major order of that corner.
pub fn initial_minors(m: &RatMatrix) -> Result<Vec<(MinorIndex, Rat)>> {
    if m.rows() != m.cols() {
        return Err(Error::domain("initial minors are defined for square matrices only"));
    }
    let n = m.rows();
    let mut out = Vec::with_capacity(n * n);
    for i in 1..=n {
        for j in 1..=n {
            let k = i.min(j);
            let ix = MinorIndex { rows: (i + 1 - k..=i).collect(), cols: (j + 1 - k..=j).collect() };
            let v = minor(m, &ix)?;
            out.push((ix, v));
        }
    }
    Ok(out)
}

/// Total positivity via the initial-minor criterion.
pub fn is_tp(m: &RatMatrix) -> Result<bool> {
    Ok(initial_minors(m)?.iter().all(|(_, v)| v.is_positive()))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TnnVerdict {
    pub is_tnn: bool,
    /// The most negative minor (earliest in canonical order on ties).
    pub witness: Option<(MinorIndex, Rat)>,
    pub minors_checked: usize,
}

/// Checks every minor.
pub fn is_tnn_bruteforce(m: &RatMatrix) -> TnnVerdict {
    let minors = all_minors(m);
    let mut witness: Option<(MinorIndex, Rat)> = None;
    for (ix, v) in &minors {
        if v.is_negative() && witness.as_ref().is_none_or(|(_, w)| v < w) {
            witness = Some((ix.clone(), v.clone()));
        }
    }
    TnnVerdict { is_tnn: witness.is_none(), witness, minors_checked: minors.len() }
}

/// Minors equal to zero.
pub fn vanishing_minors(m: &RatMatrix) -> MinorFamily {
    MinorFamily {
        m: m.rows(),
        p: m.cols(),
        members: all_minors(m).into_iter().filter(|(_, v)| v.is_zero()).map(|(ix, _)| ix).collect(),
    }
}
