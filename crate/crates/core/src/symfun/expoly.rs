use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::Scalar;
use crate::exactmat::Rat;

/// Exponential polynomial `sum c * t^k * exp(lambda * t)` with rational
/// `c` and `lambda`.
///
/// Closed under sums, products and `d/dt`, which is all that is needed to
/// check closed-form Hamiltonian flows exactly.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ExpPoly {
    /// (lambda, k) -> c
    terms: BTreeMap<(Rat, u32), Rat>,
}

impl ExpPoly {
    pub fn constant(c: Rat) -> ExpPoly {
        ExpPoly::term(c, 0, Rat::zero())
    }

    pub fn t() -> ExpPoly {
        ExpPoly::term(Rat::one(), 1, Rat::zero())
    }

    /// `exp(lambda * t)`.
    pub fn exp(lambda: Rat) -> ExpPoly {
        ExpPoly::term(Rat::one(), 0, lambda)
    }

    pub fn term(c: Rat, k: u32, lambda: Rat) -> ExpPoly {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert((lambda, k), c);
        }
        ExpPoly { terms }
    }

    fn add_term(&mut self, key: (Rat, u32), c: Rat) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(key.clone()).or_insert_with(Rat::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&key);
        }
    }

    /// If the value is `c * t` (or a constant times `t`) returns `c`; used to
    /// read the argument of `exp`.
    pub fn as_linear_in_t(&self) -> Option<Rat> {
        match self.terms.len() {
            0 => Some(Rat::zero()),
            1 => {
                let ((lambda, k), c) = self.terms.iter().next().unwrap();
                (lambda.is_zero() && *k == 1).then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn as_constant(&self) -> Option<Rat> {
        match self.terms.len() {
            0 => Some(Rat::zero()),
            1 => {
                let ((lambda, k), c) = self.terms.iter().next().unwrap();
                (lambda.is_zero() && *k == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn derivative(&self) -> ExpPoly {
        let mut out = ExpPoly::default();
        for ((lambda, k), c) in &self.terms {
            if *k > 0 {
                out.add_term((lambda.clone(), k - 1), c * Rat::from_integer(BigInt::from(*k)));
            }
            if !lambda.is_zero() {
                out.add_term((lambda.clone(), *k), c * lambda);
            }
        }
        out
    }

    pub fn eval_f64(&self, t: f64) -> f64 {
        self.terms
            .iter()
            .map(|((lambda, k), c)| {
                let c = c.to_f64().unwrap_or(f64::NAN);
                let l = lambda.to_f64().unwrap_or(f64::NAN);
                c * t.powi(*k as i32) * (l * t).exp()
            })
            .sum()
    }
}

impl Scalar for ExpPoly {
    fn zero_like(&self) -> Self {
        ExpPoly::default()
    }
    fn one_like(&self) -> Self {
        ExpPoly::constant(Rat::one())
    }
    fn from_int_like(&self, n: &BigInt) -> Self {
        ExpPoly::constant(Rat::from_integer(n.clone()))
    }
    fn vanishes(&self) -> bool {
        self.terms.is_empty()
    }
    fn plus(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (key, c) in &other.terms {
            out.add_term(key.clone(), c.clone());
        }
        out
    }
    fn minus(&self, other: &Self) -> Self {
        self.plus(&other.negated())
    }
    fn times(&self, other: &Self) -> Self {
        let mut out = ExpPoly::default();
        for ((l1, k1), c1) in &self.terms {
            for ((l2, k2), c2) in &other.terms {
                out.add_term((l1 + l2, k1 + k2), c1 * c2);
            }
        }
        out
    }
    fn negated(&self) -> Self {
        ExpPoly { terms: self.terms.iter().map(|(k, c)| (k.clone(), -c)).collect() }
    }
    /// Only `c * exp(lambda t)` is invertible.
    fn recip(&self) -> Option<Self> {
        if self.terms.len() != 1 {
            return None;
        }
        let ((lambda, k), c) = self.terms.iter().next().unwrap();
        if *k != 0 {
            return None;
        }
        Some(ExpPoly::term(num_traits::Inv::inv(c.clone()), 0, -lambda))
    }
}

impl fmt::Display for ExpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (n, ((lambda, k), c)) in self.terms.iter().enumerate() {
            let mut parts = Vec::new();
            if *k == 1 {
                parts.push("t".to_string());
            } else if *k > 1 {
                parts.push(format!("t^{k}"));
            }
            if !lambda.is_zero() {
                parts.push(format!("exp({lambda}*t)"));
            }
            let body = parts.join("*");
            let neg = c.is_negative();
            let abs = c.abs();
            if n > 0 {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            } else if neg {
                write!(f, "-")?;
            }
            let coeff = if abs.is_integer() { abs.to_string() } else { format!("({abs})") };
            match (body.is_empty(), abs.is_one()) {
                (true, _) => write!(f, "{coeff}")?,
                (false, true) => write!(f, "{body}")?,
                (false, false) => write!(f, "{coeff}*{body}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rat {
        Rat::new(n.into(), d.into())
    }

    #[test]
    fn derivative_of_products() {
        // d/dt (t * e^{2t}) = e^{2t} + 2 t e^{2t}
        let f = ExpPoly::t().times(&ExpPoly::exp(r(2, 1)));
        let df = f.derivative();
        let expect = ExpPoly::exp(r(2, 1)).plus(&ExpPoly::term(r(2, 1), 1, r(2, 1)));
        assert_eq!(df, expect);
        assert!((df.eval_f64(0.5) - (1.0 + 1.0) * 1f64.exp()).abs() < 1e-12);
    }

    #[test]
    fn exponentials_cancel() {
        let e = ExpPoly::exp(r(3, 2));
        let inv = e.recip().unwrap();
        assert_eq!(e.times(&inv), ExpPoly::constant(Rat::one()));
        assert!(ExpPoly::t().recip().is_none());
    }
}
