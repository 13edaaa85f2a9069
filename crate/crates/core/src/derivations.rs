//! Deleting derivations and restoration.
//!
//! Both algorithms are sequences of elementary steps indexed by cells
//! `(j, β)` in lexicographic order. The step at `(j, β)` changes each entry
//! `(i, α)` with `i < j` and `α < β` to
//! `x[i,α] ∓ x[i,β] x[j,β]^{-1} x[j,α]`, provided `x[j,β] != 0`.
//! Deleting derivations run the steps from `(m,p)` down to `(1,1)` with
//! `-`, restoration from `(1,1)` up to `(m,p)` with `+`.
//!
//! The entries a step reads (row `j` and column `β`) are never among the
//! entries it writes, so the steps update in place.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::diagram::CauchonDiagram;
use crate::error::{Error, Result};
use crate::exactmat::{all_minor_indices, Matrix, MinorFamily, MinorIndex, Rat, RatMatrix};
use crate::guard::{self, GuardKind};
use crate::symfun::{det_expansion, det_mod_p, Fp, MPoly, RatFunc, Scalar, Vars};

/// A step position `(j, β)`, 1-based, ordered lexicographically.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StepIndex {
    pub j: usize,
    pub beta: usize,
}

impl StepIndex {
    pub fn new(j: usize, beta: usize) -> StepIndex {
        StepIndex { j, beta }
    }

    /// Next position in an `m x p` grid; `None` after `(m, p)`.
    pub fn succ(self, p: usize, m: usize) -> Option<StepIndex> {
        if self.beta < p {
            Some(StepIndex::new(self.j, self.beta + 1))
        } else if self.j < m {
            Some(StepIndex::new(self.j + 1, 1))
        } else {
            None
        }
    }

    /// Previous position; `None` before `(1, 1)`.
    pub fn pred(self, p: usize) -> Option<StepIndex> {
        if self.beta > 1 {
            Some(StepIndex::new(self.j, self.beta - 1))
        } else if self.j > 1 {
            Some(StepIndex::new(self.j - 1, p))
        } else {
            None
        }
    }

    /// All positions of an `m x p` grid in increasing order.
    pub fn all(m: usize, p: usize) -> Vec<StepIndex> {
        (1..=m).flat_map(|j| (1..=p).map(move |b| StepIndex::new(j, b))).collect()
    }
}

impl fmt::Display for StepIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.j, self.beta)
    }
}

fn apply_step<T: Scalar>(m: &mut Matrix<T>, s: StepIndex, restore: bool) -> Result<bool> {
    if s.j == 0 || s.beta == 0 || s.j > m.rows() || s.beta > m.cols() {
        return Err(Error::domain(format!("step {s} outside a {}x{} matrix", m.rows(), m.cols())));
    }
    let (j, b) = (s.j - 1, s.beta - 1);
    let pivot = m.get(j, b).clone();
    if pivot.vanishes() || j == 0 || b == 0 {
        return Ok(false);
    }
    let inv = pivot
        .recip()
        .ok_or_else(|| Error::domain(format!("pivot at {s} is nonzero but not invertible")))?;
    for i in 0..j {
        let left = m.get(i, b).times(&inv);
        if left.vanishes() {
            continue;
        }
        for a in 0..b {
            let delta = left.times(m.get(j, a));
            let cur = m.get(i, a);
            let v = if restore { cur.plus(&delta) } else { cur.minus(&delta) };
            m.set(i, a, v);
        }
    }
    Ok(true)
}

/// One deleting-derivation step `g_{j,β}`.
pub fn delete_step<T: Scalar>(m: &Matrix<T>, j: usize, beta: usize) -> Result<Matrix<T>> {
    let mut out = m.clone();
    apply_step(&mut out, StepIndex::new(j, beta), false)?;
    Ok(out)
}

/// One restoration step `f_{j,β}`.
pub fn restore_step<T: Scalar>(m: &Matrix<T>, j: usize, beta: usize) -> Result<Matrix<T>> {
    let mut out = m.clone();
    apply_step(&mut out, StepIndex::new(j, beta), true)?;
    Ok(out)
}

/// The matrix after each step, in the order the steps were applied.
pub type Trace<T> = Vec<(StepIndex, Matrix<T>)>;

pub fn deleting_derivations_trace<T: Scalar>(m: &Matrix<T>) -> Result<Trace<T>> {
    let mut cur = m.clone();
    let mut out = Vec::new();
    for s in StepIndex::all(m.rows(), m.cols()).into_iter().rev() {
        apply_step(&mut cur, s, false)?;
        out.push((s, cur.clone()));
    }
    Ok(out)
}

pub fn restoration_trace<T: Scalar>(m: &Matrix<T>) -> Result<Trace<T>> {
    let mut cur = m.clone();
    let mut out = Vec::new();
    for s in StepIndex::all(m.rows(), m.cols()) {
        apply_step(&mut cur, s, true)?;
        out.push((s, cur.clone()));
    }
    Ok(out)
}

pub fn deleting_derivations<T: Scalar>(m: &Matrix<T>) -> Result<Matrix<T>> {
    let mut cur = m.clone();
    for s in StepIndex::all(m.rows(), m.cols()).into_iter().rev() {
        apply_step(&mut cur, s, false)?;
    }
    Ok(cur)
}

pub fn restoration<T: Scalar>(m: &Matrix<T>) -> Result<Matrix<T>> {
    let mut cur = m.clone();
    for s in StepIndex::all(m.rows(), m.cols()) {
        apply_step(&mut cur, s, true)?;
    }
    Ok(cur)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TnnTest {
    pub is_tnn: bool,
    /// Zero pattern of the final matrix when it forms a Cauchon diagram.
    pub diagram: Option<CauchonDiagram>,
    /// Result of the deleting derivations algorithm.
    pub final_matrix: RatMatrix,
}

/// TNN test: `M` is TNN iff the deleting-derivations output is entrywise
/// nonnegative and its zeros form a Cauchon diagram.
pub fn tnn_test(m: &RatMatrix) -> TnnTest {
    let n = deleting_derivations(m).expect("rational pivots are invertible");
    let nonneg = n.entries().iter().all(|x| !x.is_negative());
    let zeros: Vec<bool> = n.entries().iter().map(num_traits::Zero::is_zero).collect();
    let diagram = CauchonDiagram::from_grid(n.rows(), n.cols(), zeros).ok();
    TnnTest { is_tnn: nonneg && diagram.is_some(), diagram, final_matrix: n }
}

/// Restoration of the matrix that is `values[k]` on the `k`-th white cell
/// of `c` (row-major) and zero on black cells.
pub fn build_tc<T: Scalar>(c: &CauchonDiagram, values: &[T], like: &T) -> Result<Matrix<T>> {
    let whites = c.white_cells();
    if values.len() != whites.len() {
        return Err(Error::domain(format!("{} white cells but {} values", whites.len(), values.len())));
    }
    if values.iter().any(Scalar::vanishes) {
        return Err(Error::domain("white cells must carry nonzero values"));
    }
    let mut t = Matrix::from_fn(c.m(), c.p(), |_, _| like.zero_like());
    for (&(i, a), v) in whites.iter().zip(values) {
        t.set(i - 1, a - 1, v.clone());
    }
    restoration(&t)
}

/// `T_C` with every white cell equal to 1.
pub fn tc_ones(c: &CauchonDiagram) -> RatMatrix {
    let one = Rat::from_integer(1.into());
    build_tc(c, &vec![one.clone(); c.white_cells().len()], &one).expect("ones are nonzero")
}

/// Variables `t[i,j]` for every cell of an `m x p` grid, row-major.
pub fn t_vars(m: usize, p: usize) -> Arc<Vars> {
    Vars::grid("t", m, p)
}

/// `T_C` over rational functions in the variables `t[i,a]`.
pub fn tc_symbolic(c: &CauchonDiagram) -> Matrix<RatFunc> {
    let vars = t_vars(c.m(), c.p());
    let values: Vec<RatFunc> =
        c.white_cells().iter().map(|&(i, a)| RatFunc::var(&vars, (i - 1) * c.p() + (a - 1))).collect();
    build_tc(c, &values, &RatFunc::zero(&vars)).expect("variables are nonzero")
}

/// How identically vanishing minors of `T_C` are decided.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ZeroTest {
    /// Exact rational-function arithmetic.
    Exact,
    /// Evaluation at `points` random points of `F_p`, `p = 2^61 - 1`. A
    /// minor is declared zero when it vanishes at all of them.
    Probabilistic { points: usize, seed: u64 },
    /// One random point rules out nonzero minors; zeros are confirmed
    /// exactly.
    Prefiltered { seed: u64 },
}

impl ZeroTest {
    fn guard_kind(self) -> GuardKind {
        match self {
            ZeroTest::Exact => GuardKind::Exact,
            _ => GuardKind::Prefiltered,
        }
    }
}

/// `T_C` evaluated at a random point of `F_p` with nonzero white values.
pub fn tc_mod_p(c: &CauchonDiagram, rng: &mut ChaCha8Rng) -> Matrix<Fp> {
    let values: Vec<Fp> = c
        .white_cells()
        .iter()
        .map(|_| loop {
            let v = Fp::random(rng);
            if !Scalar::vanishes(&v) {
                break v;
            }
        })
        .collect();
    build_tc(c, &values, &Fp::new(0)).expect("values are nonzero")
}

fn minors_zero_mod_p(tc: &Matrix<Fp>, indices: &[MinorIndex]) -> Vec<bool> {
    indices.iter().map(|ix| det_mod_p(tc.submatrix(ix).expect("in bounds")).value() == 0).collect()
}

/// Multiplies a row of `T_C` entries by the lcm of their monomial denominators.
fn cleared_row(row: &[RatFunc]) -> Vec<MPoly> {
    let vars = row[0].vars().clone();
    let mut lcm = vec![0u32; vars.len()];
    let mut lcm_c = BigInt::one();
    for f in row {
        let (e, c) = f.den().terms().iter().next().expect("nonzero denominator");
        for (l, x) in lcm.iter_mut().zip(e) {
            *l = (*l).max(*x);
        }
        lcm_c = lcm_c.lcm(c);
    }
    row.iter()
        .map(|f| {
            let (e, c) = f.den().terms().iter().next().expect("nonzero denominator");
            let shift: Vec<u32> = lcm.iter().zip(e).map(|(l, x)| l - x).collect();
            f.num().mul_monomial(&shift).scale(&(&lcm_c / c))
        })
        .collect()
}

/// Whether the minor of symbolic `T_C` at `ix` is identically zero.
fn symbolic_minor_is_zero(tc: &Matrix<RatFunc>, ix: &MinorIndex) -> bool {
    let sub = tc.submatrix(ix).expect("in bounds");
    if sub.iter().all(|r| r.iter().all(|f| f.den().is_monomial())) {
        // Scaling rows by monomials does not change whether the determinant vanishes.
        let rows: Vec<Vec<MPoly>> = sub.iter().map(|r| cleared_row(r)).collect();
        let zero = MPoly::zero(tc.get(0, 0).vars());
        det_expansion(&rows, &zero).is_zero()
    } else {
        det_expansion(&sub, &RatFunc::zero(tc.get(0, 0).vars())).is_zero()
    }
}

/// Minors of `T_C` that vanish identically.
pub fn vanishing_family(c: &CauchonDiagram, test: ZeroTest) -> Result<MinorFamily> {
    guard::check(test.guard_kind(), c.m(), c.p())?;
    let indices = all_minor_indices(c.m(), c.p());
    let zero: Vec<bool> = match test {
        ZeroTest::Exact => {
            let tc = tc_symbolic(c);
            indices.par_iter().map(|ix| symbolic_minor_is_zero(&tc, ix)).collect()
        }
        ZeroTest::Probabilistic { points, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut zero = vec![true; indices.len()];
            for _ in 0..points.max(1) {
                let tc = tc_mod_p(c, &mut rng);
                for (z, now) in zero.iter_mut().zip(minors_zero_mod_p(&tc, &indices)) {
                    *z &= now;
                }
            }
            zero
        }
        ZeroTest::Prefiltered { seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let candidates = minors_zero_mod_p(&tc_mod_p(c, &mut rng), &indices);
            let tc = tc_symbolic(c);
            indices
                .par_iter()
                .zip(candidates)
                .map(|(ix, cand)| cand && symbolic_minor_is_zero(&tc, ix))
                .collect()
        }
    };
    let members: BTreeSet<MinorIndex> =
        indices.into_iter().zip(zero).filter(|(_, z)| *z).map(|(ix, _)| ix).collect();
    MinorFamily::new(c.m(), c.p(), members)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmat::{is_tnn_bruteforce, rat};
    use proptest::prelude::*;

    fn ints(rows: &[&[i64]]) -> RatMatrix {
        RatMatrix::from_ints(rows)
    }

    fn ex61() -> RatMatrix {
        ints(&[&[1, -1, 1], &[0, 2, 1], &[1, 1, 1]])
    }

    fn fig5() -> CauchonDiagram {
        CauchonDiagram::new(3, 3, &[(1, 2), (2, 1), (2, 2)]).unwrap()
    }

    #[test]
    fn step_order() {
        let s = StepIndex::new(2, 3);
        assert_eq!(s.succ(3, 3), Some(StepIndex::new(3, 1)));
        assert_eq!(StepIndex::new(3, 3).succ(3, 3), None);
        assert_eq!(StepIndex::new(3, 1).pred(3), Some(s));
        assert_eq!(StepIndex::new(1, 1).pred(3), None);
        assert!(StepIndex::new(1, 3) < StepIndex::new(2, 1));
    }

    #[test]
    fn single_steps() {
        let m = ints(&[&[2, 1, 1], &[1, 1, 1], &[1, 1, 1]]);
        assert_eq!(delete_step(&m, 3, 3).unwrap(), ints(&[&[1, 0, 1], &[0, 0, 1], &[1, 1, 1]]));
        assert_eq!(delete_step(&m, 2, 1).unwrap(), m);
        let r = restore_step(&ex61(), 2, 3).unwrap();
        assert_eq!(r, ints(&[&[1, 1, 1], &[0, 2, 1], &[1, 1, 1]]));
        assert_eq!(restore_step(&r, 3, 2).unwrap(), ints(&[&[2, 1, 1], &[2, 2, 1], &[1, 1, 1]]));
        assert_eq!(restore_step(&r, 3, 1).unwrap(), r);
        assert!(restore_step(&r, 4, 1).is_err());
    }

    #[test]
    fn restoration_example() {
        let trace = restoration_trace(&ex61()).unwrap();
        let at = |j, b| trace.iter().find(|(s, _)| *s == StepIndex::new(j, b)).unwrap().1.clone();
        for (j, b) in [(1, 1), (1, 2), (1, 3), (2, 1), (2, 2)] {
            assert_eq!(at(j, b), ex61());
        }
        assert_eq!(at(2, 3), ints(&[&[1, 1, 1], &[0, 2, 1], &[1, 1, 1]]));
        assert_eq!(at(3, 1), at(2, 3));
        assert_eq!(at(3, 2), ints(&[&[2, 1, 1], &[2, 2, 1], &[1, 1, 1]]));
        assert_eq!(at(3, 3), ints(&[&[3, 2, 1], &[3, 3, 1], &[1, 1, 1]]));
        assert_eq!(restoration(&ex61()).unwrap(), at(3, 3));
    }

    #[test]
    fn deleting_examples() {
        let m = ints(&[&[2, 1, 1], &[1, 1, 1], &[1, 1, 1]]);
        assert_eq!(deleting_derivations(&m).unwrap(), ints(&[&[1, 0, 1], &[0, 0, 1], &[1, 1, 1]]));
        assert_eq!(deleting_derivations(&ints(&[&[3, 2, 1], &[3, 3, 1], &[1, 1, 1]])).unwrap(), ex61());
        assert_eq!(deleting_derivations(&RatMatrix::zeros(3, 2)).unwrap(), RatMatrix::zeros(3, 2));
        let row = ints(&[&[4, -1, 7]]);
        assert_eq!(restoration(&row).unwrap(), row);
        assert_eq!(restoration(&ints(&[&[1, 0, 1], &[0, 0, 1], &[1, 1, 1]])).unwrap(), m);
    }

    #[test]
    fn tnn_test_examples() {
        let a = ints(&[&[5, 6, 3, 0], &[4, 7, 4, 0], &[1, 4, 4, 2], &[0, 1, 2, 3]]);
        assert!(tnn_test(&a).is_tnn);
        let m1 = ints(&[&[11, 7, 4, 1], &[7, 5, 3, 1], &[4, 3, 2, 1], &[1, 1, 1, 1]]);
        assert_eq!(tnn_test(&m1).is_tnn, is_tnn_bruteforce(&m1).is_tnn);
        let m2 = ints(&[&[7, 5, 4, 1], &[6, 5, 3, 1], &[4, 3, 2, 1], &[1, 1, 1, 1]]);
        assert!(!tnn_test(&m2).is_tnn);
        let v = tnn_test(&ints(&[&[2, 1, 1], &[1, 1, 1], &[1, 1, 1]]));
        assert!(v.is_tnn);
        assert_eq!(v.diagram, Some(fig5()));
    }

    #[test]
    fn tc_examples() {
        assert_eq!(tc_ones(&fig5()), ints(&[&[2, 1, 1], &[1, 1, 1], &[1, 1, 1]]));
        assert_eq!(tc_ones(&CauchonDiagram::all_white(2, 2)), ints(&[&[2, 1], &[1, 1]]));
        let tc = tc_symbolic(&fig5());
        let s = |r: usize, c: usize| tc.get(r, c).to_string();
        assert_eq!(s(0, 0), "(t[1,1]*t[3,3] + t[1,3]*t[3,1])/t[3,3]");
        assert_eq!(s(0, 1), "t[1,3]*t[3,2]/t[3,3]");
        assert_eq!(s(1, 0), "t[2,3]*t[3,1]/t[3,3]");
        assert_eq!(s(1, 2), "t[2,3]");
        let one = rat(1);
        assert!(build_tc(&fig5(), &[one.clone(), rat(0), one.clone(), one.clone(), one.clone(), one], &rat(0)).is_err());
    }

    fn family(s: &str) -> MinorFamily {
        MinorFamily::parse_list(3, 3, s).unwrap()
    }

    #[test]
    fn vanishing_family_examples() {
        let want = family("[1,2|2,3],[1,3|2,3],[2,3|2,3],[2,3|1,3],[2,3|1,2],[1,2,3|1,2,3]");
        assert_eq!(vanishing_family(&fig5(), ZeroTest::Exact).unwrap(), want);
        assert_eq!(vanishing_family(&fig5(), ZeroTest::Prefiltered { seed: 3 }).unwrap(), want);
        assert_eq!(vanishing_family(&fig5(), ZeroTest::Probabilistic { points: 2, seed: 9 }).unwrap(), want);
        assert!(vanishing_family(&CauchonDiagram::all_white(3, 3), ZeroTest::Exact).unwrap().is_empty());
        assert_eq!(vanishing_family(&CauchonDiagram::all_black(2, 3), ZeroTest::Exact).unwrap(), MinorFamily::all(2, 3));
    }

    #[test]
    fn zero_pattern_round_trip() {
        use rand::Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for (m, p) in [(1, 3), (2, 2), (2, 3), (3, 3)] {
            for c in crate::diagram::enumerate_diagrams(m, p).unwrap() {
                let vals: Vec<Rat> =
                    c.white_cells().iter().map(|_| Rat::new(rng.gen_range(1..20).into(), rng.gen_range(1..5).into())).collect();
                let tc = build_tc(&c, &vals, &rat(0)).unwrap();
                let back = deleting_derivations(&tc).unwrap();
                let zeros: Vec<bool> = back.entries().iter().map(|x| num_traits::Zero::is_zero(x)).collect();
                assert_eq!(zeros, c.grid(), "{c}");
            }
        }
    }

    #[test]
    fn tnn_test_exhaustive_small() {
        // Every 3x3 matrix with entries in {0,1,2}.
        for code in 0..3u32.pow(9) {
            let mut k = code;
            let m = Matrix::from_fn(3, 3, |_, _| {
                let v = k % 3;
                k /= 3;
                rat(v as i64)
            });
            assert_eq!(tnn_test(&m).is_tnn, is_tnn_bruteforce(&m).is_tnn, "{m}");
        }
    }

    fn nonzero_rat() -> impl Strategy<Value = Rat> {
        (prop_oneof![-9i64..=-1, 1i64..=9], 1i64..=4).prop_map(|(n, d)| Rat::new(n.into(), d.into()))
    }

    proptest! {
        #[test]
        fn round_trip_generic(m in 1usize..=4, p in 1usize..=4, seed in any::<u64>()) {
            use rand::Rng;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mat = Matrix::from_fn(m, p, |_, _| {
                let n = if rng.gen_bool(0.3) { 0 } else { rng.gen_range(-9i64..=9) };
                Rat::new(n.into(), rng.gen_range(1i64..=4).into())
            });
            prop_assert_eq!(&restoration(&deleting_derivations(&mat).unwrap()).unwrap(), &mat);
            prop_assert_eq!(&deleting_derivations(&restoration(&mat).unwrap()).unwrap(), &mat);
        }

        #[test]
        fn round_trip_nonzero(vals in proptest::collection::vec(nonzero_rat(), 9)) {
            let mat = Matrix::from_rows(vals.chunks(3).map(|r| r.to_vec()).collect()).unwrap();
            prop_assert_eq!(deleting_derivations(&restoration(&mat).unwrap()).unwrap(), mat);
        }

        #[test]
        fn tnn_test_agrees_4x4(vals in proptest::collection::vec(0i64..4, 16)) {
            let mat = Matrix::from_fn(4, 4, |r, c| rat(vals[r * 4 + c]));
            prop_assert_eq!(tnn_test(&mat).is_tnn, is_tnn_bruteforce(&mat).is_tnn);
        }
    }
}
