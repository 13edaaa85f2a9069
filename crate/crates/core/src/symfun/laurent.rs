use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{fmt_int_coeff, Scalar};

/// Laurent polynomial in the formal parameter `q` with integer coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LaurentQ {
    terms: BTreeMap<i32, BigInt>,
}

impl LaurentQ {
    pub fn zero() -> LaurentQ {
        LaurentQ::default()
    }

    pub fn one() -> LaurentQ {
        LaurentQ::int(1)
    }

    pub fn int(c: i64) -> LaurentQ {
        LaurentQ::term(BigInt::from(c), 0)
    }

    /// `c * q^k`.
    pub fn term(c: BigInt, k: i32) -> LaurentQ {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(k, c);
        }
        LaurentQ { terms }
    }

    pub fn q_pow(k: i32) -> LaurentQ {
        LaurentQ::term(BigInt::one(), k)
    }

    /// `q - q^{-1}`.
    pub fn q_minus_q_inv() -> LaurentQ {
        &LaurentQ::q_pow(1) - &LaurentQ::q_pow(-1)
    }

    pub fn terms(&self) -> &BTreeMap<i32, BigInt> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Specialisation `q = 1`.
    pub fn at_one(&self) -> BigInt {
        self.terms.values().sum()
    }

    /// Exact quotient by `q - 1`, or `None` when `q - 1` does not divide.
    pub fn div_q_minus_one(&self) -> Option<LaurentQ> {
        if self.is_zero() {
            return Some(LaurentQ::zero());
        }
        if !self.at_one().is_zero() {
            return None;
        }
        let lo = *self.terms.keys().next().unwrap();
        let hi = *self.terms.keys().next_back().unwrap();
        // Synthetic division from the top: b_{k-1} = a_k + b_k.
        let mut out = LaurentQ::zero();
        let mut carry = BigInt::zero();
        for k in (lo + 1..=hi).rev() {
            carry += self.terms.get(&k).cloned().unwrap_or_default();
            if !carry.is_zero() {
                out.terms.insert(k - 1, carry.clone());
            }
        }
        Some(out)
    }

    pub fn scale(&self, c: &BigInt) -> LaurentQ {
        if c.is_zero() {
            return LaurentQ::zero();
        }
        LaurentQ { terms: self.terms.iter().map(|(k, v)| (*k, v * c)).collect() }
    }

    fn add_term(&mut self, k: i32, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(k).or_default();
        *e += c;
        if e.is_zero() {
            self.terms.remove(&k);
        }
    }
}

impl Add for &LaurentQ {
    type Output = LaurentQ;
    fn add(self, rhs: &LaurentQ) -> LaurentQ {
        let mut out = self.clone();
        for (k, c) in &rhs.terms {
            out.add_term(*k, c.clone());
        }
        out
    }
}

impl Sub for &LaurentQ {
    type Output = LaurentQ;
    fn sub(self, rhs: &LaurentQ) -> LaurentQ {
        let mut out = self.clone();
        for (k, c) in &rhs.terms {
            out.add_term(*k, -c);
        }
        out
    }
}

impl Mul for &LaurentQ {
    type Output = LaurentQ;
    fn mul(self, rhs: &LaurentQ) -> LaurentQ {
        let mut out = LaurentQ::zero();
        for (k1, c1) in &self.terms {
            for (k2, c2) in &rhs.terms {
                out.add_term(k1 + k2, c1 * c2);
            }
        }
        out
    }
}

impl Neg for &LaurentQ {
    type Output = LaurentQ;
    fn neg(self) -> LaurentQ {
        LaurentQ { terms: self.terms.iter().map(|(k, c)| (*k, -c)).collect() }
    }
}

impl Scalar for LaurentQ {
    fn zero_like(&self) -> Self {
        LaurentQ::zero()
    }
    fn one_like(&self) -> Self {
        LaurentQ::one()
    }
    fn from_int_like(&self, n: &BigInt) -> Self {
        LaurentQ::term(n.clone(), 0)
    }
    fn vanishes(&self) -> bool {
        self.terms.is_empty()
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
    /// Units of `Z[q, q^-1]` are `±q^k`.
    fn recip(&self) -> Option<Self> {
        if self.terms.len() != 1 {
            return None;
        }
        let (k, c) = self.terms.iter().next().unwrap();
        if c.abs().is_one() {
            Some(LaurentQ::term(c.clone(), -k))
        } else {
            None
        }
    }
}

impl fmt::Display for LaurentQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (n, (k, c)) in self.terms.iter().rev().enumerate() {
            let body = match k {
                0 => String::new(),
                1 => "q".to_string(),
                _ => format!("q^{k}"),
            };
            fmt_int_coeff(c, &body, n == 0, f)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn q_minus_inverse_divides() {
        let x = LaurentQ::q_minus_q_inv();
        assert_eq!(x.to_string(), "q - q^-1");
        // (q - q^-1) / (q - 1) = 1 + q^-1
        let d = x.div_q_minus_one().unwrap();
        assert_eq!(d, &LaurentQ::one() + &LaurentQ::q_pow(-1));
        assert_eq!(d.at_one(), BigInt::from(2));
        assert!(LaurentQ::q_pow(1).div_q_minus_one().is_none());
    }

    #[test]
    fn division_round_trips() {
        let f = &(&LaurentQ::q_pow(3) - &LaurentQ::int(2)) + &LaurentQ::q_pow(-2);
        let g = &LaurentQ::q_pow(1) - &LaurentQ::one();
        let prod = &f * &g;
        assert_eq!(prod.div_q_minus_one().unwrap(), f);
    }
}
