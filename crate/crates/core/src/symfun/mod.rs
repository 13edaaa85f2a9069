//! Exact scalar domains.
//!
//! Everything that runs the deleting-derivations / restoration recursion or
//! takes determinants is written against the [`Scalar`] trait, which is
//! implemented for rationals, multivariate rational functions, the prime
//! field `F_p` with `p = 2^61 - 1`, Laurent polynomials in `q` and
//! exponential polynomials in `t`.

mod expoly;
mod laurent;
mod modp;
mod mpoly;
pub mod parse;
mod ratfunc;

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

pub use expoly::ExpPoly;
pub use laurent::LaurentQ;
pub use modp::{det_mod_p, Fp, MODULUS};
pub use mpoly::{Exponents, MPoly, Vars};
pub use ratfunc::RatFunc;

use crate::exactmat::Rat;

/// A commutative field-like domain with an exact zero test.
///
/// Constructors take `&self` so that domains carrying context (a variable
/// list, for instance) can build constants of the right shape.
pub trait Scalar: Clone + fmt::Debug {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn from_int_like(&self, n: &BigInt) -> Self;
    fn vanishes(&self) -> bool;
    fn plus(&self, other: &Self) -> Self;
    fn minus(&self, other: &Self) -> Self;
    fn times(&self, other: &Self) -> Self;
    fn negated(&self) -> Self;
    /// Multiplicative inverse, `None` when the element is zero or not a unit.
    fn recip(&self) -> Option<Self>;

    fn equals_one(&self) -> bool {
        self.minus(&self.one_like()).vanishes()
    }

    fn power(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = self.one_like();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.times(&base);
            }
            base = base.times(&base);
            e >>= 1;
        }
        acc
    }
}

impl Scalar for Rat {
    fn zero_like(&self) -> Self {
        Rat::zero()
    }
    fn one_like(&self) -> Self {
        Rat::one()
    }
    fn from_int_like(&self, n: &BigInt) -> Self {
        Rat::from_integer(n.clone())
    }
    fn vanishes(&self) -> bool {
        Zero::is_zero(self)
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn negated(&self) -> Self {
        -self
    }
    fn recip(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(num_traits::Inv::inv(self.clone()))
        }
    }
}

/// Determinant of a square matrix given by rows, over any [`Scalar`].
///
/// Laplace expansion memoised on the set of used columns, `O(k 2^k)` ring
/// operations. Never divides, so it is exact for rational functions with
/// unreduced denominators. `like` supplies the zero / one of the domain for
/// the empty matrix.
pub fn det_expansion<T: Scalar>(rows: &[Vec<T>], like: &T) -> T {
    let k = rows.len();
    if k == 0 {
        return like.one_like();
    }
    assert!(k <= 20, "determinant expansion limited to 20x20");
    assert!(rows.iter().all(|r| r.len() == k), "matrix must be square");
    // layer[S] = signed sum over bijections rows[0..|S|] -> S.
    let mut layer: HashMap<u32, T> = HashMap::new();
    layer.insert(0, like.one_like());
    for r in 0..k {
        let mut next: HashMap<u32, T> = HashMap::new();
        for (&set, val) in &layer {
            if val.vanishes() {
                continue;
            }
            for c in 0..k {
                let bit = 1u32 << c;
                if set & bit != 0 || rows[r][c].vanishes() {
                    continue;
                }
                // Columns already used that sit to the right of c each add an inversion.
                let inversions = (set >> (c + 1)).count_ones();
                let mut term = val.times(&rows[r][c]);
                if inversions % 2 == 1 {
                    term = term.negated();
                }
                let slot = next.entry(set | bit).or_insert_with(|| like.zero_like());
                *slot = slot.plus(&term);
            }
        }
        layer = next;
    }
    let full = (1u32 << k) - 1;
    layer.remove(&full).unwrap_or_else(|| like.zero_like())
}

pub(crate) fn fmt_int_coeff(c: &BigInt, body: &str, first: bool, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let neg = c.is_negative();
    let abs = c.abs();
    if first {
        if neg {
            write!(f, "-")?;
        }
    } else if neg {
        write!(f, " - ")?;
    } else {
        write!(f, " + ")?;
    }
    if body.is_empty() {
        write!(f, "{abs}")
    } else if abs.is_one() {
        write!(f, "{body}")
    } else {
        write!(f, "{abs}*{body}")
    }
}
