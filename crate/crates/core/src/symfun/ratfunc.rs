use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed};

use super::{Fp, MPoly, Scalar, Vars};
use crate::error::{Error, Result};

/// Quotient of two polynomials over a shared variable list.
///
/// Only monomial content and integer content are cancelled; no polynomial
/// gcd is taken. Zero testing only needs the numerator, and the
/// restoration recursion divides by monomials, so denominators stay small.
#[derive(Clone, Debug)]
pub struct RatFunc {
    num: MPoly,
    den: MPoly,
}

impl RatFunc {
    pub fn new(num: MPoly, den: MPoly) -> Result<RatFunc> {
        if den.is_zero() {
            return Err(Error::domain("rational function with zero denominator"));
        }
        Ok(RatFunc { num, den }.normalized())
    }

    pub fn from_poly(num: MPoly) -> RatFunc {
        let den = MPoly::one(num.vars());
        RatFunc { num, den }
    }

    pub fn zero(vars: &Arc<Vars>) -> RatFunc {
        RatFunc::from_poly(MPoly::zero(vars))
    }

    pub fn var(vars: &Arc<Vars>, idx: usize) -> RatFunc {
        RatFunc::from_poly(MPoly::var(vars, idx))
    }

    pub fn num(&self) -> &MPoly {
        &self.num
    }

    pub fn den(&self) -> &MPoly {
        &self.den
    }

    pub fn vars(&self) -> &Arc<Vars> {
        self.num.vars()
    }

    /// Exact zero test.
    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// `None` when the denominator vanishes at the point.
    pub fn eval_mod_p(&self, point: &[Fp]) -> Option<Fp> {
        let d = self.den.eval_mod_p(point);
        let inv = d.inverse()?;
        Some(self.num.eval_mod_p(point) * inv)
    }

    fn normalized(mut self) -> RatFunc {
        if self.num.is_zero() {
            self.den = MPoly::one(self.num.vars());
            return self;
        }
        let gn = self.num.monomial_content();
        let gd = self.den.monomial_content();
        let g: Vec<u32> = gn.iter().zip(&gd).map(|(a, b)| (*a).min(*b)).collect();
        if g.iter().any(|&k| k > 0) {
            self.num = self.num.div_monomial(&g);
            self.den = self.den.div_monomial(&g);
        }
        let mut c = self.num.integer_content().gcd(&self.den.integer_content());
        if self.den.leading_coefficient().map(|l| l.is_negative()).unwrap_or(false) {
            c = -c;
        }
        if !c.is_one() {
            self.num = self.num.div_int_exact(&c);
            self.den = self.den.div_int_exact(&c);
        }
        self
    }

    fn with(num: MPoly, den: MPoly) -> RatFunc {
        RatFunc { num, den }.normalized()
    }
}

impl PartialEq for RatFunc {
    fn eq(&self, other: &Self) -> bool {
        (&self.num * &other.den) == (&other.num * &self.den)
    }
}

/// Splits a monomial polynomial into (exponents, coefficient).
fn as_monomial(p: &MPoly) -> Option<(&Vec<u32>, &BigInt)> {
    if p.is_monomial() {
        p.terms().iter().next()
    } else {
        None
    }
}

impl Scalar for RatFunc {
    fn zero_like(&self) -> Self {
        RatFunc::zero(self.vars())
    }
    fn one_like(&self) -> Self {
        RatFunc::from_poly(MPoly::one(self.vars()))
    }
    fn from_int_like(&self, n: &BigInt) -> Self {
        RatFunc::from_poly(MPoly::constant(self.vars(), n.clone()))
    }
    fn vanishes(&self) -> bool {
        self.num.is_zero()
    }
    fn plus(&self, other: &Self) -> Self {
        if self.num.is_zero() {
            return other.clone();
        }
        if other.num.is_zero() {
            return self.clone();
        }
        if self.den == other.den {
            return RatFunc::with(&self.num + &other.num, self.den.clone());
        }
        if let (Some((e1, c1)), Some((e2, c2))) = (as_monomial(&self.den), as_monomial(&other.den)) {
            // Common denominator lcm(c1, c2) * x^max(e1, e2).
            let l: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| (*a).max(*b)).collect();
            let c = c1.lcm(c2);
            let f1: Vec<u32> = l.iter().zip(e1).map(|(a, b)| a - b).collect();
            let f2: Vec<u32> = l.iter().zip(e2).map(|(a, b)| a - b).collect();
            let n1 = self.num.mul_monomial(&f1).scale(&(&c / c1));
            let n2 = other.num.mul_monomial(&f2).scale(&(&c / c2));
            let den = MPoly::monomial(self.vars(), l, c);
            return RatFunc::with(&n1 + &n2, den);
        }
        RatFunc::with(
            &(&self.num * &other.den) + &(&other.num * &self.den),
            &self.den * &other.den,
        )
    }
    fn minus(&self, other: &Self) -> Self {
        self.plus(&other.negated())
    }
    fn times(&self, other: &Self) -> Self {
        if self.num.is_zero() || other.num.is_zero() {
            return self.zero_like();
        }
        RatFunc::with(&self.num * &other.num, &self.den * &other.den)
    }
    fn negated(&self) -> Self {
        RatFunc { num: -&self.num, den: self.den.clone() }
    }
    fn recip(&self) -> Option<Self> {
        if self.num.is_zero() {
            None
        } else {
            Some(RatFunc::with(self.den.clone(), self.num.clone()))
        }
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.constant_value().map(|c| c.is_one()).unwrap_or(false) {
            return write!(f, "{}", self.num);
        }
        let wrap = |p: &MPoly| {
            if p.terms().len() > 1 {
                format!("({p})")
            } else {
                p.to_string()
            }
        };
        write!(f, "{}/{}", wrap(&self.num), wrap(&self.den))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_test_after_cancellation() {
        let v = Vars::grid("t", 3, 3);
        let t11 = MPoly::var(&v, 0);
        let t33 = MPoly::var(&v, 8);
        // (t11 t33 - t33 t11) / t33
        let f = RatFunc::new(&(&t11 * &t33) - &(&t33 * &t11), t33.clone()).unwrap();
        assert!(f.is_zero());
        let g = RatFunc::new(t11.clone(), t33.clone()).unwrap();
        assert!(!g.is_zero());
        assert!(RatFunc::new(t11, MPoly::zero(&v)).is_err());
    }

    #[test]
    fn monomial_denominators_stay_monomial() {
        let v = Vars::grid("t", 2, 2);
        let x = |i| RatFunc::var(&v, i);
        // a/b + c/d, then times b*d gives a*d + b*c
        let s = x(0).times(&x(1).recip().unwrap()).plus(&x(2).times(&x(3).recip().unwrap()));
        assert!(s.den().is_monomial());
        let back = s.times(&x(1)).times(&x(3));
        let expect = x(0).times(&x(3)).plus(&x(1).times(&x(2)));
        assert_eq!(back, expect);
        assert!(back.den().is_constant());
    }

    #[test]
    fn display() {
        let v = Vars::grid("t", 1, 2);
        let f = RatFunc::var(&v, 0).plus(&RatFunc::var(&v, 1)).times(&RatFunc::var(&v, 1).recip().unwrap());
        assert_eq!(f.to_string(), "(t[1,1] + t[1,2])/t[1,2]");
    }
}
