//! Quantum matrices `O_q(M_{m,p})`.
//!
//! Elements are kept in normal form: linear combinations, with Laurent
//! polynomial coefficients in `q`, of words in the generators `X[i,a]`
//! written in nondecreasing lexicographic order of `(i, a)`. Products are
//! normalised by rewriting out-of-order adjacent pairs with the defining
//! relations: for `(i,a) < (j,b)`,
//!
//! * same row or same column: `X[j,b] X[i,a] = q^-1 X[i,a] X[j,b]`,
//! * `i < j`, `a > b`: the generators commute,
//! * `i < j`, `a < b`: `X[j,b] X[i,a] = X[i,a] X[j,b] - (q - q^-1) X[i,b] X[j,a]`.

use std::collections::BTreeMap;
use std::fmt;

use itertools::Itertools;
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::symfun::parse::{parse_expr, Interpret};
use crate::symfun::{LaurentQ, Scalar};

/// Generator indices, `g = (i-1) p + (a-1)`.
pub type Word = Vec<u16>;

/// Which out-of-order pair is rewritten first.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RewriteOrder {
    Leftmost,
    Rightmost,
    Random(u64),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QPoly {
    m: usize,
    p: usize,
    terms: BTreeMap<Word, LaurentQ>,
}

impl QPoly {
    pub fn zero(m: usize, p: usize) -> QPoly {
        QPoly { m, p, terms: BTreeMap::new() }
    }

    pub fn one(m: usize, p: usize) -> QPoly {
        QPoly::scalar(m, p, LaurentQ::one())
    }

    pub fn scalar(m: usize, p: usize, c: LaurentQ) -> QPoly {
        let mut f = QPoly::zero(m, p);
        f.add_term(Vec::new(), c);
        f
    }

    /// The generator `X[i,a]`, 1-based.
    pub fn generator(m: usize, p: usize, i: usize, a: usize) -> Result<QPoly> {
        if i == 0 || a == 0 || i > m || a > p {
            return Err(Error::domain(format!("X[{i},{a}] is not a generator of {m}x{p} quantum matrices")));
        }
        let mut f = QPoly::zero(m, p);
        f.add_term(vec![((i - 1) * p + (a - 1)) as u16], LaurentQ::one());
        Ok(f)
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.m, self.p)
    }

    pub fn terms(&self) -> &BTreeMap<Word, LaurentQ> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, w: Word, c: LaurentQ) {
        use std::collections::btree_map::Entry;
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let sum = o.get() + &c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    fn check_same(&self, other: &QPoly) -> Result<()> {
        if (self.m, self.p) != (other.m, other.p) {
            return Err(Error::domain("quantum polynomials over different shapes"));
        }
        Ok(())
    }

    pub fn add(&self, other: &QPoly) -> Result<QPoly> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &QPoly) -> Result<QPoly> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> QPoly {
        QPoly { m: self.m, p: self.p, terms: self.terms.iter().map(|(w, c)| (w.clone(), c.negated())).collect() }
    }

    pub fn scale(&self, c: &LaurentQ) -> QPoly {
        let mut out = QPoly::zero(self.m, self.p);
        for (w, k) in &self.terms {
            out.add_term(w.clone(), k * c);
        }
        out
    }

    fn name(&self, g: u16) -> String {
        let (i, a) = (g as usize / self.p + 1, g as usize % self.p + 1);
        if (self.m, self.p) == (2, 2) {
            ["a", "b", "c", "d"][g as usize].to_string()
        } else {
            format!("X[{i},{a}]")
        }
    }
}

/// Rewrites the adjacent pair `(left, right)` with `left > right`.
/// Returns up to two `(coefficient, replacement pair)` terms.
fn rewrite_pair(p: usize, left: u16, right: u16) -> Vec<(LaurentQ, [u16; 2])> {
    let (j, b) = (left as usize / p, left as usize % p);
    let (i, a) = (right as usize / p, right as usize % p);
    let g = |r: usize, c: usize| (r * p + c) as u16;
    if i == j || a == b {
        vec![(LaurentQ::q_pow(-1), [right, left])]
    } else if a > b {
        vec![(LaurentQ::one(), [right, left])]
    } else {
        vec![(LaurentQ::one(), [right, left]), (LaurentQ::q_minus_q_inv().negated(), [g(i, b), g(j, a)])]
    }
}

/// Normal form of `coeff * word`.
pub fn normal_form_word(m: usize, p: usize, word: &[u16], coeff: LaurentQ, strategy: RewriteOrder) -> QPoly {
    let mut out = QPoly::zero(m, p);
    let mut rng = match strategy {
        RewriteOrder::Random(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
        _ => None,
    };
    let mut pending = vec![(word.to_vec(), coeff)];
    while let Some((w, c)) = pending.pop() {
        if c.is_zero() {
            continue;
        }
        let descents: Vec<usize> = (0..w.len().saturating_sub(1)).filter(|&k| w[k] > w[k + 1]).collect();
        if descents.is_empty() {
            out.add_term(w, c);
            continue;
        }
        let k = match strategy {
            RewriteOrder::Leftmost => descents[0],
            RewriteOrder::Rightmost => *descents.last().expect("nonempty"),
            RewriteOrder::Random(_) => descents[rng.as_mut().expect("seeded").gen_range(0..descents.len())],
        };
        for (f, pair) in rewrite_pair(p, w[k], w[k + 1]) {
            let mut w2 = w.clone();
            w2[k] = pair[0];
            w2[k + 1] = pair[1];
            pending.push((w2, &c * &f));
        }
    }
    out
}

/// Product in normal form.
pub fn q_multiply(f: &QPoly, g: &QPoly) -> Result<QPoly> {
    q_multiply_with(f, g, RewriteOrder::Leftmost)
}

pub fn q_multiply_with(f: &QPoly, g: &QPoly, strategy: RewriteOrder) -> Result<QPoly> {
    f.check_same(g)?;
    let mut out = QPoly::zero(f.m, f.p);
    for (u, a) in &f.terms {
        for (v, b) in &g.terms {
            let w: Word = u.iter().chain(v).copied().collect();
            let nf = normal_form_word(f.m, f.p, &w, a * b, strategy);
            for (w, c) in nf.terms {
                out.add_term(w, c);
            }
        }
    }
    Ok(out)
}

/// `fg - gf`.
pub fn commutator(f: &QPoly, g: &QPoly) -> Result<QPoly> {
    q_multiply(f, g)?.sub(&q_multiply(g, f)?)
}

/// `[I|Λ]_q = Σ_σ (-q)^{l(σ)} X[i_1, α_σ(1)] ... X[i_k, α_σ(k)]`.
pub fn quantum_minor(m: usize, p: usize, rows: &[usize], cols: &[usize]) -> Result<QPoly> {
    if rows.len() != cols.len() {
        return Err(Error::domain("a quantum minor needs as many rows as columns"));
    }
    if rows.iter().any(|&i| i == 0 || i > m) || cols.iter().any(|&a| a == 0 || a > p) {
        return Err(Error::domain("quantum minor index out of range"));
    }
    if !rows.windows(2).all(|w| w[0] < w[1]) || !cols.windows(2).all(|w| w[0] < w[1]) {
        return Err(Error::domain("quantum minor indices must be strictly increasing"));
    }
    let k = rows.len();
    let mut out = QPoly::zero(m, p);
    if k == 0 {
        return Ok(QPoly::one(m, p));
    }
    let minus_q = LaurentQ::q_pow(1).negated();
    for sigma in (0..k).permutations(k) {
        let len = crate::perm::length(&sigma.iter().map(|x| x + 1).collect::<Vec<_>>());
        let coeff = minus_q.power(len as u32);
        let word: Word = (0..k).map(|r| ((rows[r] - 1) * p + (cols[sigma[r]] - 1)) as u16).collect();
        for (w, c) in normal_form_word(m, p, &word, coeff, RewriteOrder::Leftmost).terms {
            out.add_term(w, c);
        }
    }
    Ok(out)
}

/// `D_q = ad - q bc` commutes with `a, b, c, d` (and with 1).
pub fn is_central_2x2_determinant() -> bool {
    let dq = quantum_minor(2, 2, &[1, 2], &[1, 2]).expect("valid minor");
    let mut others = vec![QPoly::one(2, 2)];
    for (i, a) in [(1, 1), (1, 2), (2, 1), (2, 2)] {
        others.push(QPoly::generator(2, 2, i, a).expect("valid"));
    }
    others.iter().all(|g| commutator(&dq, g).map(|c| c.is_zero()).unwrap_or(false))
}

/// Left side minus right side of the defining relation for each pair of
/// generators `(i,a) < (j,b)`, after normalisation. All must be zero.
pub fn relation_residuals(m: usize, p: usize) -> Vec<((usize, usize), (usize, usize), QPoly)> {
    let mut out = Vec::new();
    let gen = |i, a| QPoly::generator(m, p, i, a).expect("in range");
    let cells: Vec<(usize, usize)> = (1..=m).cartesian_product(1..=p).collect();
    for (x, &(i, a)) in cells.iter().enumerate() {
        for &(j, b) in &cells[x + 1..] {
            let lhs = q_multiply(&gen(j, b), &gen(i, a)).expect("same shape");
            let xy = q_multiply(&gen(i, a), &gen(j, b)).expect("same shape");
            let rhs = if i == j || a == b {
                xy.scale(&LaurentQ::q_pow(-1))
            } else if a > b {
                xy
            } else {
                let cross = q_multiply(&gen(i, b), &gen(j, a)).expect("same shape");
                xy.sub(&cross.scale(&LaurentQ::q_minus_q_inv())).expect("same shape")
            };
            out.push(((i, a), (j, b), lhs.sub(&rhs).expect("same shape")));
        }
    }
    out
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut order: Vec<(&Word, &LaurentQ)> = self.terms.iter().collect();
        order.sort_by(|x, y| y.0.len().cmp(&x.0.len()).then_with(|| x.0.cmp(y.0)));
        for (n, (w, c)) in order.into_iter().enumerate() {
            let body = w.iter().map(|&g| self.name(g)).join("*");
            let single = c.terms().len() == 1;
            let (k, coeff) = c.terms().iter().next().expect("nonzero");
            if single {
                let neg = coeff < &BigInt::from(0);
                let abs = if neg { -coeff.clone() } else { coeff.clone() };
                let mut parts = Vec::new();
                if abs != BigInt::from(1) || (*k == 0 && body.is_empty()) {
                    parts.push(abs.to_string());
                }
                match *k {
                    0 => {}
                    1 => parts.push("q".into()),
                    k => parts.push(format!("q^{k}")),
                }
                if !body.is_empty() {
                    parts.push(body);
                }
                let sign = match (n == 0, neg) {
                    (true, true) => "-",
                    (true, false) => "",
                    (false, true) => " - ",
                    (false, false) => " + ",
                };
                write!(f, "{sign}{}", parts.join("*"))?;
            } else {
                let sep = if n == 0 { "" } else { " + " };
                if body.is_empty() {
                    write!(f, "{sep}({c})")?;
                } else {
                    write!(f, "{sep}({c})*{body}")?;
                }
            }
        }
        Ok(())
    }
}

/// Interprets expressions over `O_q(M_{m,p})`: generators `X[i,a]`, the
/// aliases `a b c d` when `m = p = 2`, the scalar `q`, integers, `+ - *`
/// and powers (negative powers only of `q`).
pub struct QuantumInterp {
    pub m: usize,
    pub p: usize,
}

impl Interpret for QuantumInterp {
    type Value = QPoly;
    fn int(&self, n: &BigInt) -> QPoly {
        QPoly::scalar(self.m, self.p, LaurentQ::term(n.clone(), 0))
    }
    fn var(&self, name: &str) -> Result<QPoly> {
        if name == "q" {
            return Ok(QPoly::scalar(self.m, self.p, LaurentQ::q_pow(1)));
        }
        if (self.m, self.p) == (2, 2) {
            if let Some(k) = ["a", "b", "c", "d"].iter().position(|&s| s == name) {
                return QPoly::generator(2, 2, k / 2 + 1, k % 2 + 1);
            }
        }
        let inner = name
            .strip_prefix("X[")
            .and_then(|s| s.strip_suffix(']'))
            .ok_or_else(|| Error::parse(format!("unknown quantum generator `{name}`")))?;
        let (i, a) = inner.split_once(',').ok_or_else(|| Error::parse(format!("bad generator `{name}`")))?;
        let i = i.parse().map_err(|_| Error::parse(format!("bad generator `{name}`")))?;
        let a = a.parse().map_err(|_| Error::parse(format!("bad generator `{name}`")))?;
        QPoly::generator(self.m, self.p, i, a)
    }
    fn add(&self, a: QPoly, b: QPoly) -> QPoly {
        a.add(&b).expect("same shape")
    }
    fn sub(&self, a: QPoly, b: QPoly) -> QPoly {
        a.sub(&b).expect("same shape")
    }
    fn mul(&self, a: QPoly, b: QPoly) -> QPoly {
        q_multiply(&a, &b).expect("same shape")
    }
    fn neg(&self, a: QPoly) -> QPoly {
        a.neg()
    }
    fn pow(&self, a: QPoly, n: i64) -> Result<QPoly> {
        if n < 0 {
            // Only scalar monomials q^k are invertible.
            let inv = match (a.terms.len(), a.terms.get(&Vec::new())) {
                (1, Some(c)) => c.recip(),
                _ => None,
            };
            let inv = inv.ok_or_else(|| Error::parse("negative power of a non-invertible element"))?;
            return Ok(QPoly::scalar(self.m, self.p, inv.power((-n) as u32)));
        }
        let mut acc = QPoly::one(self.m, self.p);
        for _ in 0..n {
            acc = q_multiply(&acc, &a)?;
        }
        Ok(acc)
    }
}

/// Parses and normalises an expression in `O_q(M_{m,p})`.
pub fn parse_qpoly(m: usize, p: usize, src: &str) -> Result<QPoly> {
    parse_expr(src)?.interpret(&QuantumInterp { m, p })
}
