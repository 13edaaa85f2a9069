//! Restricted permutations, pipe dreams, Bruhat order and the minor
//! families `M(w)`.
//!
//! Permutations act on the left and compose right to left. One-line
//! notation lists `w(1) w(2) ... w(n)`.
//!
//! Pipe dream labels: on an `m x p` diagram, the bottom edge carries
//! `1..p` from left to right and the right edge carries `p+1..p+m` from
//! bottom to top; pipes leave through the left edge, labelled `1..m` from
//! bottom to top, or the top edge, labelled `m+1..m+p` from left to right.
//! A black cell is a crossing (pipes go straight through), a white cell an
//! elbow (a pipe from below turns left, a pipe from the right turns up).
//! `w` maps the label where a pipe enters to the label where it leaves.

use std::fmt;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::diagram::CauchonDiagram;
use crate::error::{Error, Result};
use crate::exactmat::{all_minor_indices, MinorFamily, MinorIndex};

/// A permutation of `1..=n`, stored in one-line notation.
pub type Perm = Vec<usize>;

pub fn identity(n: usize) -> Perm {
    (1..=n).collect()
}

/// The order-reversing permutation `i -> r + 1 - i` of `1..=r`.
pub fn longest_element(r: usize) -> Perm {
    (1..=r).rev().collect()
}

/// `(u ∘ v)(i) = u(v(i))`.
pub fn compose(u: &[usize], v: &[usize]) -> Perm {
    v.iter().map(|&x| u[x - 1]).collect()
}

pub fn inverse(w: &[usize]) -> Perm {
    let mut inv = vec![0; w.len()];
    for (i, &x) in w.iter().enumerate() {
        inv[x - 1] = i + 1;
    }
    inv
}

pub fn is_permutation(w: &[usize]) -> bool {
    let mut seen = vec![false; w.len()];
    w.iter().all(|&x| x >= 1 && x <= w.len() && !std::mem::replace(&mut seen[x - 1], true))
}

/// Number of inversions, the Coxeter length.
pub fn length(w: &[usize]) -> usize {
    (0..w.len()).flat_map(|a| (a + 1..w.len()).map(move |b| (a, b))).filter(|&(a, b)| w[a] > w[b]).count()
}

/// `r[i][j] = #{a <= i : w(a) >= j}` for `1 <= i, j <= n`.
fn rank_matrix(w: &[usize]) -> Vec<Vec<usize>> {
    let n = w.len();
    let mut r = vec![vec![0; n + 2]; n + 1];
    for i in 1..=n {
        for j in 1..=n + 1 {
            r[i][j] = r[i - 1][j] + usize::from(w[i - 1] >= j);
        }
    }
    r
}

/// Bruhat order by the rank-matrix criterion.
pub fn bruhat_leq(u: &[usize], w: &[usize]) -> bool {
    if u.len() != w.len() {
        return false;
    }
    let (ru, rw) = (rank_matrix(u), rank_matrix(w));
    ru.iter().zip(&rw).all(|(a, b)| a.iter().zip(b).all(|(x, y)| x <= y))
}

/// Cycle notation with fixed points omitted; the identity prints as `(1)`.
pub fn cycle_string(w: &[usize]) -> String {
    let mut seen = vec![false; w.len()];
    let mut out = String::new();
    for start in 1..=w.len() {
        if seen[start - 1] || w[start - 1] == start {
            continue;
        }
        let mut cyc = vec![start];
        seen[start - 1] = true;
        let mut x = w[start - 1];
        while x != start {
            seen[x - 1] = true;
            cyc.push(x);
            x = w[x - 1];
        }
        out.push_str(&format!("({})", cyc.iter().join(" ")));
    }
    if out.is_empty() {
        "(1)".to_string()
    } else {
        out
    }
}

pub fn one_line_string(w: &[usize]) -> String {
    if w.len() <= 9 {
        w.iter().join("")
    } else {
        w.iter().join(",")
    }
}

/// Parses one-line notation (`135246`, `1 3 5 2 4 6`, `1,3,5`) or cycle
/// notation (`(2 3 5 4)`, `(13)(24)`, `(1)`). Cycle notation needs `n`.
pub fn parse_perm(text: &str, n: Option<usize>) -> Result<Perm> {
    let t = text.trim();
    let w = if t.starts_with('(') {
        let n = n.ok_or_else(|| Error::parse("cycle notation needs the permutation size"))?;
        let mut w = identity(n);
        for cyc in t.split(')') {
            let body = cyc.trim().trim_start_matches('(').trim();
            if body.is_empty() {
                continue;
            }
            let items: Vec<usize> = if body.contains([' ', ',']) {
                body.split([' ', ','])
                    .filter(|s| !s.is_empty())
                    .map(|s| s.parse().map_err(|_| Error::parse(format!("bad cycle entry `{s}`"))))
                    .collect::<Result<_>>()?
            } else {
                body.chars()
                    .map(|c| c.to_digit(10).map(|d| d as usize).ok_or_else(|| Error::parse(format!("bad cycle `{body}`"))))
                    .collect::<Result<_>>()?
            };
            if items.iter().any(|&x| x == 0 || x > n) || !items.iter().all_unique() {
                return Err(Error::parse(format!("bad cycle `({body})` for n = {n}")));
            }
            if items.len() == 1 {
                continue;
            }
            // Apply this cycle after the ones already read (cycles are disjoint in practice).
            let mut c = identity(n);
            for (a, b) in items.iter().circular_tuple_windows() {
                c[a - 1] = *b;
            }
            w = compose(&w, &c);
        }
        w
    } else if t.contains([' ', ',']) {
        t.split([' ', ','])
            .filter(|s| !s.is_empty())
            .map(|s| s.parse().map_err(|_| Error::parse(format!("bad entry `{s}`"))))
            .collect::<Result<_>>()?
    } else {
        t.chars()
            .map(|c| c.to_digit(10).map(|d| d as usize).ok_or_else(|| Error::parse(format!("bad permutation `{t}`"))))
            .collect::<Result<_>>()?
    };
    if !is_permutation(&w) {
        return Err(Error::parse(format!("`{t}` is not a permutation")));
    }
    if let Some(n) = n {
        if w.len() != n {
            return Err(Error::parse(format!("`{t}` has {} entries, expected {n}", w.len())));
        }
    }
    Ok(w)
}

/// `w ∈ S_{m+p}` with `-p <= w(i) - i <= m` for every `i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "PermJson", into = "PermJson")]
pub struct RestrictedPermutation {
    m: usize,
    p: usize,
    w: Perm,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct PermJson {
    m: usize,
    p: usize,
    one_line: Vec<usize>,
}

impl TryFrom<PermJson> for RestrictedPermutation {
    type Error = Error;
    fn try_from(j: PermJson) -> Result<Self> {
        RestrictedPermutation::new(j.m, j.p, j.one_line)
    }
}

impl From<RestrictedPermutation> for PermJson {
    fn from(r: RestrictedPermutation) -> Self {
        PermJson { m: r.m, p: r.p, one_line: r.w }
    }
}

fn in_window(m: usize, p: usize, i: usize, x: usize) -> bool {
    x + p >= i && x <= i + m
}

impl RestrictedPermutation {
    pub fn new(m: usize, p: usize, w: Perm) -> Result<Self> {
        if m == 0 || p == 0 {
            return Err(Error::domain("m and p must be positive"));
        }
        if w.len() != m + p || !is_permutation(&w) {
            return Err(Error::domain(format!("not a permutation of 1..{}", m + p)));
        }
        if let Some(i) = (1..=m + p).find(|&i| !in_window(m, p, i, w[i - 1])) {
            return Err(Error::domain(format!("w({i}) = {} violates -{p} <= w(i) - i <= {m}", w[i - 1])));
        }
        Ok(RestrictedPermutation { m, p, w })
    }

    pub fn parse(m: usize, p: usize, text: &str) -> Result<Self> {
        RestrictedPermutation::new(m, p, parse_perm(text, Some(m + p))?)
    }

    pub fn identity(m: usize, p: usize) -> Self {
        RestrictedPermutation { m, p, w: identity(m + p) }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn n(&self) -> usize {
        self.m + self.p
    }

    pub fn one_line(&self) -> &[usize] {
        &self.w
    }

    pub fn apply(&self, i: usize) -> usize {
        self.w[i - 1]
    }

    pub fn length(&self) -> usize {
        length(&self.w)
    }

    pub fn cycles(&self) -> String {
        cycle_string(&self.w)
    }
}

impl fmt::Display for RestrictedPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", one_line_string(&self.w))
    }
}

/// All of `S(m, p)` in lexicographic order of one-line notation.
pub fn enumerate_s(m: usize, p: usize) -> Vec<RestrictedPermutation> {
    let n = m + p;
    let mut out = Vec::new();
    let mut w = Vec::with_capacity(n);
    let mut used = vec![false; n + 1];
    fn go(m: usize, p: usize, w: &mut Perm, used: &mut [bool], out: &mut Vec<RestrictedPermutation>) {
        let n = m + p;
        let i = w.len() + 1;
        if i > n {
            out.push(RestrictedPermutation { m, p, w: w.clone() });
            return;
        }
        for x in 1..=n {
            if !used[x] && in_window(m, p, i, x) {
                used[x] = true;
                w.push(x);
                go(m, p, w, used, out);
                w.pop();
                used[x] = false;
            }
        }
    }
    go(m, p, &mut w, &mut used, &mut out);
    out
}

/// Rank profile: number of elements of each Coxeter length `0, 1, ...`.
pub fn rank_profile(list: &[RestrictedPermutation]) -> Vec<usize> {
    let max = list.iter().map(|w| w.length()).max().unwrap_or(0);
    let mut out = vec![0; max + 1];
    for w in list {
        out[w.length()] += 1;
    }
    out
}

/// The restricted permutation read off the pipe dream of `c`.
pub fn pipe_dream(c: &CauchonDiagram) -> RestrictedPermutation {
    let (m, p) = (c.m(), c.p());
    // Cell at column x, height y (1 = bottom row) is diagram cell (m + 1 - y, x).
    let black = |x: usize, y: usize| c.is_black(m + 1 - y, x);
    let mut w = vec![0; m + p];
    // (x, y, moving_up): the pipe is about to enter cell (x, y).
    let trace = |mut x: usize, mut y: usize, mut up: bool| -> usize {
        loop {
            let cross = black(x, y);
            up = if cross { up } else { !up };
            if up {
                if y == m {
                    return m + x;
                }
                y += 1;
            } else {
                if x == 1 {
                    return y;
                }
                x -= 1;
            }
        }
    };
    for x in 1..=p {
        w[x - 1] = trace(x, 1, true);
    }
    for y in 1..=m {
        w[p + y - 1] = trace(p, y, false);
    }
    RestrictedPermutation::new(m, p, w).expect("pipe dreams of Cauchon diagrams are restricted")
}

/// The unique diagram whose pipe dream is `w`.
///
/// Cells are filled bottom row first, right to left within a row, tracking
/// which label travels along each pipe segment. A partial filling is cut
/// as soon as a label can no longer reach its target.
pub fn inverse_pipe_dream(w: &RestrictedPermutation) -> Result<CauchonDiagram> {
    let (m, p) = (w.m(), w.p());
    let target = |label: usize| w.apply(label);
    // A label leaving (x, y) to the left reaches left rows y..=m or top columns < x.
    let left_ok = |t: usize, x: usize, y: usize| if t <= m { t >= y } else { t - m < x };
    // A label leaving (x, y) upwards reaches left rows > y or top columns <= x.
    let up_ok = |t: usize, x: usize, y: usize| if t <= m { t > y } else { t - m <= x };

    struct State {
        black: Vec<bool>,
        /// Label moving up into each column at the current height.
        up: Vec<usize>,
    }
    let mut solutions = Vec::new();
    let mut st = State { black: vec![false; m * p], up: (1..=p).collect() };

    #[allow(clippy::too_many_arguments)]
    fn row(
        m: usize,
        p: usize,
        y: usize,
        x: usize,
        from_right: usize,
        st: &mut State,
        target: &dyn Fn(usize) -> usize,
        left_ok: &dyn Fn(usize, usize, usize) -> bool,
        up_ok: &dyn Fn(usize, usize, usize) -> bool,
        out: &mut Vec<Vec<bool>>,
    ) {
        if x == 0 {
            if target(from_right) != y {
                return;
            }
            if y == m {
                if (1..=p).all(|c| target(st.up[c - 1]) == m + c) {
                    out.push(st.black.clone());
                }
                return;
            }
            row(m, p, y + 1, p, p + y + 1, st, target, left_ok, up_ok, out);
            return;
        }
        let below = st.up[x - 1];
        let cell = (m - y) * p + (x - 1);
        for cross in [false, true] {
            let (go_left, go_up) = if cross { (from_right, below) } else { (below, from_right) };
            let left_fine = if x == 1 { target(go_left) == y } else { left_ok(target(go_left), x, y) };
            let up_fine = if y == m { target(go_up) == m + x } else { up_ok(target(go_up), x, y) };
            if !left_fine || !up_fine {
                continue;
            }
            st.black[cell] = cross;
            st.up[x - 1] = go_up;
            row(m, p, y, x - 1, go_left, st, target, left_ok, up_ok, out);
            st.up[x - 1] = below;
            st.black[cell] = false;
        }
    }
    row(m, p, 1, p, p + 1, &mut st, &target, &left_ok, &up_ok, &mut solutions);
    let valid: Vec<CauchonDiagram> =
        solutions.into_iter().filter_map(|g| CauchonDiagram::from_grid(m, p, g).ok()).collect();
    match valid.as_slice() {
        [d] => Ok(d.clone()),
        [] => Err(Error::domain(format!("{w} is not the pipe dream of any {m}x{p} Cauchon diagram"))),
        _ => Err(Error::Invariant(format!("{w} has {} Cauchon pipe dreams", valid.len()))),
    }
}

/// `I <= J` componentwise on sorted sets of equal size.
fn set_leq(a: &[usize], b: &[usize]) -> bool {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_unstable();
    b.sort_unstable();
    a.len() == b.len() && a.iter().zip(&b).all(|(x, y)| x <= y)
}

/// Whether `[I|Λ]` vanishes on the closure of the orbit labelled `w`.
pub fn in_m_of_w(w: &RestrictedPermutation, ix: &MinorIndex) -> bool {
    let (m, p, n) = (w.m(), w.p(), w.n());
    let (rows, cols) = (ix.rows(), ix.cols());
    let k = rows.len();
    let wf = |i: usize| w.apply(i);

    // L ⊆ [1,p] ∩ w^{-1}[1,m], L <= Λ, compared through w°^m w(L).
    let a1: Vec<usize> = (1..=p).filter(|&l| wf(l) <= m).collect();
    let cond1 = a1
        .iter()
        .copied()
        .combinations(k)
        .filter(|l| set_leq(l, cols))
        .all(|l| !set_leq(rows, &l.iter().map(|&x| m + 1 - wf(x)).collect::<Vec<_>>()));
    if cond1 {
        return true;
    }

    // L ⊆ [1,m] ∩ w°^N w^{-1}[m+1,N], L <= I, compared through w w°^N(L).
    let a2: Vec<usize> = (1..=m).filter(|&l| wf(n + 1 - l) > m).collect();
    let shifted: Vec<usize> = cols.iter().map(|&c| m + c).collect();
    let cond2 = a2
        .iter()
        .copied()
        .combinations(k)
        .filter(|l| set_leq(l, rows))
        .all(|l| !set_leq(&shifted, &l.iter().map(|&x| wf(n + 1 - x)).collect::<Vec<_>>()));
    if cond2 {
        return true;
    }

    let cond3 = (1..=p).any(|r| {
        (r..=p).any(|s| {
            let inside = cols.iter().filter(|&&c| (r..=s).contains(&c)).count();
            let outside = (r..=s).filter(|&l| !(m + r..=m + s).contains(&wf(l))).count();
            inside > outside
        })
    });
    if cond3 {
        return true;
    }

    (1..=m).any(|r| {
        (r..=m).any(|s| {
            let inside = rows.iter().filter(|&&i| (r..=s).contains(&i)).count();
            let outside = (n + 1 - s..=n + 1 - r).filter(|&l| !(m + 1 - s..=m + 1 - r).contains(&wf(l))).count();
            inside > outside
        })
    })
}

/// The family `M(w)`.
pub fn m_of_w(w: &RestrictedPermutation) -> MinorFamily {
    let members = all_minor_indices(w.m(), w.p()).into_iter().filter(|ix| in_m_of_w(w, ix));
    MinorFamily::new(w.m(), w.p(), members).expect("indices fit")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::enumerate_diagrams;

    fn fig5() -> CauchonDiagram {
        CauchonDiagram::new(3, 3, &[(1, 2), (2, 1), (2, 2)]).unwrap()
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate_s(2, 2).len(), 14);
        let s11: Vec<String> = enumerate_s(1, 1).iter().map(|w| w.to_string()).collect();
        assert_eq!(s11, ["12", "21"]);
        assert_eq!(enumerate_s(3, 3).len(), 230);
        let s = enumerate_s(2, 3);
        assert!(s.windows(2).all(|a| a[0] < a[1]));
    }

    #[test]
    fn counts_match_diagrams() {
        for m in 1..=4 {
            for p in 1..=4 {
                assert_eq!(enumerate_s(m, p).len() as u128, crate::diagram::count_diagrams(m, p), "{m}x{p}");
            }
        }
    }

    #[test]
    fn pipe_dream_examples() {
        let w = pipe_dream(&fig5());
        assert_eq!(w.to_string(), "135246");
        assert_eq!(w.cycles(), "(2 3 5 4)");
        assert_eq!(pipe_dream(&CauchonDiagram::all_white(3, 3)), RestrictedPermutation::identity(3, 3));
        assert_eq!(pipe_dream(&CauchonDiagram::all_black(1, 1)).to_string(), "21");
        assert_eq!(pipe_dream(&CauchonDiagram::all_black(2, 2)).cycles(), "(1 3)(2 4)");
    }

    #[test]
    fn inverse_examples() {
        let w = RestrictedPermutation::parse(3, 3, "135246").unwrap();
        assert_eq!(inverse_pipe_dream(&w).unwrap(), fig5());
        assert_eq!(inverse_pipe_dream(&RestrictedPermutation::identity(2, 3)).unwrap(), CauchonDiagram::all_white(2, 3));
        let images: std::collections::BTreeSet<_> =
            enumerate_s(2, 2).iter().map(|w| inverse_pipe_dream(w).unwrap().bitmask()).collect();
        assert_eq!(images.len(), 14);
        assert!(RestrictedPermutation::parse(2, 2, "4231").is_err());
    }

    #[test]
    fn pipe_dream_bijection() {
        for m in 1..=3 {
            for p in 1..=3 {
                for c in enumerate_diagrams(m, p).unwrap() {
                    let w = pipe_dream(&c);
                    assert_eq!(inverse_pipe_dream(&w).unwrap(), c);
                }
            }
        }
    }

    #[test]
    fn parsing() {
        assert_eq!(parse_perm("(2 3 5 4)", Some(6)).unwrap(), vec![1, 3, 5, 2, 4, 6]);
        assert_eq!(parse_perm("(13)(24)", Some(4)).unwrap(), vec![3, 4, 1, 2]);
        assert_eq!(parse_perm("(1)", Some(3)).unwrap(), vec![1, 2, 3]);
        assert_eq!(parse_perm("1 3 2", None).unwrap(), vec![1, 3, 2]);
        assert!(parse_perm("1 1 2", None).is_err());
        assert!(parse_perm("(1 2)", None).is_err());
        let w = RestrictedPermutation::parse(3, 3, "(2 3 5 4)").unwrap();
        let j = serde_json::to_string(&w).unwrap();
        assert_eq!(serde_json::from_str::<RestrictedPermutation>(&j).unwrap(), w);
    }

    #[test]
    fn bruhat_examples() {
        let s = enumerate_s(2, 2);
        let id = identity(4);
        assert!(s.iter().all(|w| bruhat_leq(&id, w.one_line())));
        assert!(bruhat_leq(&parse_perm("(12)", Some(4)).unwrap(), &parse_perm("(13)", Some(4)).unwrap()));
        let top = parse_perm("(13)(24)", Some(4)).unwrap();
        assert!(s.iter().all(|w| bruhat_leq(w.one_line(), &top)));
        assert_eq!(rank_profile(&s), vec![1, 3, 5, 4, 1]);
        assert!(!bruhat_leq(&top, &id));
    }

    #[test]
    fn longest_examples() {
        assert_eq!(longest_element(2), vec![2, 1]);
        assert_eq!(one_line_string(&longest_element(4)), "4321");
        let w = longest_element(5);
        assert_eq!(compose(&w, &w), identity(5));
    }

    #[test]
    fn m_of_w_examples() {
        let w = RestrictedPermutation::parse(3, 3, "(2 3 5 4)").unwrap();
        let want = MinorFamily::parse_list(3, 3, "[1,2|2,3],[1,3|2,3],[2,3|2,3],[2,3|1,3],[2,3|1,2],[1,2,3|1,2,3]").unwrap();
        assert_eq!(m_of_w(&w), want);
        assert!(m_of_w(&RestrictedPermutation::identity(3, 3)).is_empty());
        let top = pipe_dream(&CauchonDiagram::all_black(3, 2));
        assert_eq!(m_of_w(&top), MinorFamily::all(3, 2));
    }

    #[test]
    fn window_condition_on_outputs() {
        for c in enumerate_diagrams(3, 4).unwrap() {
            let w = pipe_dream(&c);
            for i in 1..=7 {
                let d = w.apply(i) as i64 - i as i64;
                assert!((-4..=3).contains(&d));
            }
        }
    }
}
