use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{fmt_int_coeff, Fp, Scalar};
use crate::error::{Error, Result};

/// Ordered variable names shared by a family of polynomials.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Vars {
    names: Vec<String>,
}

impl Vars {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Arc<Vars> {
        Arc::new(Vars { names: names.into_iter().map(Into::into).collect() })
    }

    /// `prefix[i,j]` for `1 <= i <= m`, `1 <= j <= p`, row-major.
    pub fn grid(prefix: &str, m: usize, p: usize) -> Arc<Vars> {
        let mut names = Vec::with_capacity(m * p);
        for i in 1..=m {
            for j in 1..=p {
                names.push(format!("{prefix}[{i},{j}]"));
            }
        }
        Arc::new(Vars { names })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn name(&self, idx: usize) -> &str {
        &self.names[idx]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }
}

pub type Exponents = Vec<u32>;

/// Multivariate polynomial with integer coefficients.
///
/// Terms are stored sparsely, keyed by exponent vectors of length
/// `vars.len()`; zero coefficients are never stored.
#[derive(Clone, Debug)]
pub struct MPoly {
    vars: Arc<Vars>,
    terms: BTreeMap<Exponents, BigInt>,
}

impl PartialEq for MPoly {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms && (Arc::ptr_eq(&self.vars, &other.vars) || self.vars == other.vars)
    }
}

impl Eq for MPoly {}

impl MPoly {
    pub fn zero(vars: &Arc<Vars>) -> MPoly {
        MPoly { vars: vars.clone(), terms: BTreeMap::new() }
    }

    pub fn one(vars: &Arc<Vars>) -> MPoly {
        MPoly::constant(vars, BigInt::one())
    }

    pub fn constant(vars: &Arc<Vars>, c: BigInt) -> MPoly {
        let mut p = MPoly::zero(vars);
        if !c.is_zero() {
            p.terms.insert(vec![0; vars.len()], c);
        }
        p
    }

    pub fn var(vars: &Arc<Vars>, idx: usize) -> MPoly {
        assert!(idx < vars.len(), "variable index out of range");
        let mut e = vec![0; vars.len()];
        e[idx] = 1;
        MPoly::monomial(vars, e, BigInt::one())
    }

    pub fn var_named(vars: &Arc<Vars>, name: &str) -> Result<MPoly> {
        let idx = vars
            .index_of(name)
            .ok_or_else(|| Error::domain(format!("unknown variable `{name}`")))?;
        Ok(MPoly::var(vars, idx))
    }

    pub fn monomial(vars: &Arc<Vars>, exps: Exponents, coeff: BigInt) -> MPoly {
        assert_eq!(exps.len(), vars.len());
        let mut p = MPoly::zero(vars);
        if !coeff.is_zero() {
            p.terms.insert(exps, coeff);
        }
        p
    }

    pub fn vars(&self) -> &Arc<Vars> {
        &self.vars
    }

    pub fn terms(&self) -> &BTreeMap<Exponents, BigInt> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&x| x == 0))
    }

    pub fn constant_value(&self) -> Option<BigInt> {
        if !self.is_constant() {
            return None;
        }
        Some(self.terms.values().next().cloned().unwrap_or_else(BigInt::zero))
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    fn check_same(&self, other: &MPoly) {
        assert!(
            Arc::ptr_eq(&self.vars, &other.vars) || self.vars == other.vars,
            "polynomials over different variable lists"
        );
    }

    fn add_term(&mut self, e: Exponents, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &BigInt) -> MPoly {
        if c.is_zero() {
            return MPoly::zero(&self.vars);
        }
        MPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, k)| (e.clone(), k * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> MPoly {
        let mut acc = MPoly::one(&self.vars);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Formal partial derivative with respect to variable `idx`.
    pub fn partial_derivative(&self, idx: usize) -> MPoly {
        let mut out = MPoly::zero(&self.vars);
        for (e, c) in &self.terms {
            let k = e[idx];
            if k == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[idx] -= 1;
            out.add_term(e2, c * BigInt::from(k));
        }
        out
    }

    pub fn partial_derivative_named(&self, name: &str) -> Result<MPoly> {
        let idx = self
            .vars
            .index_of(name)
            .ok_or_else(|| Error::domain(format!("unknown variable `{name}`")))?;
        Ok(self.partial_derivative(idx))
    }

    /// Componentwise minimum exponent over all terms (the monomial gcd).
    pub fn monomial_content(&self) -> Exponents {
        let mut it = self.terms.keys();
        let Some(first) = it.next() else {
            return vec![0; self.vars.len()];
        };
        let mut g = first.clone();
        for e in it {
            for (a, b) in g.iter_mut().zip(e) {
                *a = (*a).min(*b);
            }
        }
        g
    }

    pub fn integer_content(&self) -> BigInt {
        self.terms.values().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Divides every term by the monomial `exps`; the caller guarantees divisibility.
    pub(crate) fn div_monomial(&self, exps: &[u32]) -> MPoly {
        MPoly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.iter().zip(exps).map(|(a, b)| a - b).collect(), c.clone()))
                .collect(),
        }
    }

    pub(crate) fn div_int_exact(&self, d: &BigInt) -> MPoly {
        MPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c / d)).collect(),
        }
    }

    pub(crate) fn mul_monomial(&self, exps: &[u32]) -> MPoly {
        MPoly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.iter().zip(exps).map(|(a, b)| a + b).collect(), c.clone()))
                .collect(),
        }
    }

    /// Coefficient of the largest exponent vector (lexicographic), if any.
    pub fn leading_coefficient(&self) -> Option<&BigInt> {
        self.terms.values().next_back()
    }

    /// Evaluates the polynomial in `F_p`.
    pub fn eval_mod_p(&self, point: &[Fp]) -> Fp {
        assert_eq!(point.len(), self.vars.len(), "point must assign every variable");
        let mut acc = Fp::new(0);
        for (e, c) in &self.terms {
            let mut t = Fp::from_bigint(c);
            for (x, &k) in point.iter().zip(e) {
                if k > 0 {
                    t = t * x.pow_u64(k as u64);
                }
            }
            acc = acc + t;
        }
        acc
    }

    /// Evaluates the polynomial modulo an arbitrary prime given as `u64`.
    pub fn eval_mod(&self, point: &[u64], prime: u64) -> Result<u64> {
        if prime < 2 {
            return Err(Error::domain("modulus must be a prime >= 2"));
        }
        if point.len() != self.vars.len() {
            return Err(Error::domain("point must assign every variable"));
        }
        let pm = prime as u128;
        let mut acc: u128 = 0;
        for (e, c) in &self.terms {
            let r = c.mod_floor(&BigInt::from(prime));
            let mut t: u128 = r.try_into().expect("residue fits in u128");
            for (&x, &k) in point.iter().zip(e) {
                let mut base = (x as u128) % pm;
                let mut k = k;
                while k > 0 {
                    if k & 1 == 1 {
                        t = t * base % pm;
                    }
                    base = base * base % pm;
                    k >>= 1;
                }
            }
            acc = (acc + t) % pm;
        }
        Ok(acc as u64)
    }

    /// Evaluates the polynomial in any scalar domain.
    pub fn eval<S: Scalar>(&self, point: &[S], like: &S) -> S {
        assert_eq!(point.len(), self.vars.len(), "point must assign every variable");
        let mut acc = like.zero_like();
        for (e, c) in &self.terms {
            let mut t = like.from_int_like(c);
            for (x, &k) in point.iter().zip(e) {
                if k > 0 {
                    t = t.times(&x.power(k));
                }
            }
            acc = acc.plus(&t);
        }
        acc
    }

    /// Re-expresses the polynomial over a larger variable list containing
    /// every variable of `self`.
    pub fn embed(&self, target: &Arc<Vars>) -> Result<MPoly> {
        let map: Vec<usize> = self
            .vars
            .names()
            .iter()
            .map(|n| {
                target
                    .index_of(n)
                    .ok_or_else(|| Error::domain(format!("variable `{n}` missing from target")))
            })
            .collect::<Result<_>>()?;
        let mut out = MPoly::zero(target);
        for (e, c) in &self.terms {
            let mut e2 = vec![0; target.len()];
            for (i, &k) in e.iter().enumerate() {
                e2[map[i]] = k;
            }
            out.add_term(e2, c.clone());
        }
        Ok(out)
    }
}

impl Add for &MPoly {
    type Output = MPoly;
    fn add(self, rhs: &MPoly) -> MPoly {
        self.check_same(rhs);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl Sub for &MPoly {
    type Output = MPoly;
    fn sub(self, rhs: &MPoly) -> MPoly {
        self.check_same(rhs);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), -c);
        }
        out
    }
}

impl Mul for &MPoly {
    type Output = MPoly;
    fn mul(self, rhs: &MPoly) -> MPoly {
        self.check_same(rhs);
        let mut out = MPoly::zero(&self.vars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                let e: Exponents = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }
}

impl Neg for &MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        MPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }
}

impl Scalar for MPoly {
    fn zero_like(&self) -> Self {
        MPoly::zero(&self.vars)
    }
    fn one_like(&self) -> Self {
        MPoly::one(&self.vars)
    }
    fn from_int_like(&self, n: &BigInt) -> Self {
        MPoly::constant(&self.vars, n.clone())
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
    fn recip(&self) -> Option<Self> {
        let c = self.constant_value()?;
        if c.abs().is_one() {
            Some(self.clone())
        } else {
            None
        }
    }
}

/// Display order: total degree descending, then exponent vector descending.
pub(crate) fn display_order(terms: &BTreeMap<Exponents, BigInt>) -> Vec<(&Exponents, &BigInt)> {
    let mut v: Vec<_> = terms.iter().collect();
    v.sort_by(|(a, _), (b, _)| {
        let da: u32 = a.iter().sum();
        let db: u32 = b.iter().sum();
        db.cmp(&da).then_with(|| b.cmp(a))
    });
    v
}

pub(crate) fn monomial_body(vars: &Vars, e: &[u32]) -> String {
    let mut parts = Vec::new();
    for (i, &k) in e.iter().enumerate() {
        match k {
            0 => {}
            1 => parts.push(vars.name(i).to_string()),
            _ => parts.push(format!("{}^{}", vars.name(i), k)),
        }
    }
    parts.join("*")
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (n, (e, c)) in display_order(&self.terms).into_iter().enumerate() {
            fmt_int_coeff(c, &monomial_body(&self.vars, e), n == 0, f)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn abcd() -> Arc<Vars> {
        Vars::new(["a", "b", "c", "d"])
    }

    #[test]
    fn partial_derivatives() {
        let v = abcd();
        let a = MPoly::var(&v, 0);
        let b = MPoly::var(&v, 1);
        let c = MPoly::var(&v, 2);
        let d = MPoly::var(&v, 3);
        assert_eq!((&a * &d).partial_derivative(0), d);
        assert!((&b * &c).partial_derivative(0).is_zero());
        let f = &(&a.pow(2) * &d) + &(&b * &c);
        let expect = (&a * &d).scale(&BigInt::from(2));
        assert_eq!(f.partial_derivative(0), expect);
        assert!(f.partial_derivative_named("z").is_err());
    }

    #[test]
    fn display_is_canonical() {
        let v = abcd();
        let a = MPoly::var(&v, 0);
        let b = MPoly::var(&v, 1);
        let c = MPoly::var(&v, 2);
        let d = MPoly::var(&v, 3);
        let f = &(&a * &d) - &(&b * &c).scale(&BigInt::from(2));
        assert_eq!(f.to_string(), "a*d - 2*b*c");
        assert_eq!(MPoly::zero(&v).to_string(), "0");
        assert_eq!((&(-&a) + &MPoly::constant(&v, 3.into())).to_string(), "-a + 3");
    }

    #[test]
    fn eval_mod_p_small_cases() {
        let v = Vars::grid("t", 2, 2);
        let f = &MPoly::var(&v, 0) + &MPoly::var(&v, 1);
        let pt = [Fp::new(1), Fp::new(2), Fp::new(0), Fp::new(0)];
        assert_eq!(f.eval_mod_p(&pt), Fp::new(3));
        let det = &(&MPoly::var(&v, 0) * &MPoly::var(&v, 3)) - &(&MPoly::var(&v, 1) * &MPoly::var(&v, 2));
        assert_eq!(det.eval_mod_p(&[Fp::new(1); 4]), Fp::new(0));
        assert_eq!(MPoly::zero(&v).eval_mod_p(&pt), Fp::new(0));
        assert_eq!(f.eval_mod(&[1, 2, 0, 0], 101).unwrap(), 3);
        assert_eq!(det.eval_mod(&[1, 1, 1, 1], 7).unwrap(), 0);
        assert_eq!(MPoly::zero(&v).eval_mod(&[5, 6, 7, 8], 101).unwrap(), 0);
    }
}
