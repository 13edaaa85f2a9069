//! The standard Poisson bracket on the coordinate ring of `m x p`
//! matrices, and verification of Hamiltonian flows.
//!
//! On generators `Y[i,a]`, `Y[k,c]` with `(i,a) < (k,c)`:
//!
//! * same row or same column: `{Y[i,a], Y[k,c]} = Y[i,a] Y[k,c]`,
//! * `i < k`, `a > c`: `0`,
//! * `i < k`, `a < c`: `2 Y[i,c] Y[k,a]`,
//!
//! extended to polynomials as a biderivation. At `2 x 2` the variables are
//! named `a b c d`, with `Y[i,j]` accepted as an alias in input.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactmat::{Rat, RatLiteral};
use crate::quantum::{commutator, QPoly};
use crate::symfun::parse::{parse_expr, parse_flow_expr, PolyInterp};
use crate::symfun::{ExpPoly, MPoly, Scalar, Vars};

/// The polynomial ring `C[Y[i,a]]` with its Poisson structure.
#[derive(Clone, Debug)]
pub struct PoissonAlgebra {
    m: usize,
    p: usize,
    vars: Arc<Vars>,
}

impl PoissonAlgebra {
    pub fn new(m: usize, p: usize) -> Result<PoissonAlgebra> {
        if m == 0 || p == 0 {
            return Err(Error::domain("m and p must be positive"));
        }
        let vars = if (m, p) == (2, 2) { Vars::new(["a", "b", "c", "d"]) } else { Vars::grid("Y", m, p) };
        Ok(PoissonAlgebra { m, p, vars })
    }

    pub fn vars(&self) -> &Arc<Vars> {
        &self.vars
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.m, self.p)
    }

    fn index(&self, i: usize, a: usize) -> usize {
        (i - 1) * self.p + (a - 1)
    }

    /// The coordinate function `Y[i,a]`.
    pub fn y(&self, i: usize, a: usize) -> MPoly {
        MPoly::var(&self.vars, self.index(i, a))
    }

    /// Parses a polynomial in this ring.
    pub fn parse(&self, src: &str) -> Result<MPoly> {
        let two = (self.m, self.p) == (2, 2);
        let alias = move |name: &str| -> Option<String> {
            if !two {
                return None;
            }
            let k = ["Y[1,1]", "Y[1,2]", "Y[2,1]", "Y[2,2]"].iter().position(|&s| s == name)?;
            Some(["a", "b", "c", "d"][k].to_string())
        };
        parse_expr(src)?.interpret(&PolyInterp { vars: self.vars.clone(), alias: &alias })
    }

    /// `{Y_u, Y_v}` for generator indices `u < v`.
    fn table(&self, u: usize, v: usize) -> MPoly {
        let (i, a) = (u / self.p + 1, u % self.p + 1);
        let (k, c) = (v / self.p + 1, v % self.p + 1);
        if i == k || a == c {
            &self.y(i, a) * &self.y(k, c)
        } else if a > c {
            MPoly::zero(&self.vars)
        } else {
            (&self.y(i, c) * &self.y(k, a)).scale(&BigInt::from(2))
        }
    }

    /// `{Y[i,a], Y[k,c]}` from the generator table (any order).
    pub fn generator_bracket(&self, (i, a): (usize, usize), (k, c): (usize, usize)) -> MPoly {
        let (u, v) = (self.index(i, a), self.index(k, c));
        match u.cmp(&v) {
            std::cmp::Ordering::Less => self.table(u, v),
            std::cmp::Ordering::Greater => -&self.table(v, u),
            std::cmp::Ordering::Equal => MPoly::zero(&self.vars),
        }
    }

    /// `{f, g} = Σ_{u<v} {Y_u, Y_v} (∂_u f ∂_v g - ∂_v f ∂_u g)`.
    pub fn bracket(&self, f: &MPoly, g: &MPoly) -> MPoly {
        let n = self.vars.len();
        let df: Vec<MPoly> = (0..n).map(|u| f.partial_derivative(u)).collect();
        let dg: Vec<MPoly> = (0..n).map(|u| g.partial_derivative(u)).collect();
        let mut out = MPoly::zero(&self.vars);
        for u in 0..n {
            for v in u + 1..n {
                let cross = &(&df[u] * &dg[v]) - &(&df[v] * &dg[u]);
                if cross.is_zero() {
                    continue;
                }
                let t = self.table(u, v);
                if !t.is_zero() {
                    out = &out + &(&t * &cross);
                }
            }
        }
        out
    }

    /// `{f,{g,h}} + {g,{h,f}} + {h,{f,g}}`, which vanishes.
    pub fn jacobi_check(&self, f: &MPoly, g: &MPoly, h: &MPoly) -> MPoly {
        let a = self.bracket(f, &self.bracket(g, h));
        let b = self.bracket(g, &self.bracket(h, f));
        let c = self.bracket(h, &self.bracket(f, g));
        &(&a + &b) + &c
    }

    /// `[X_u, X_v] / (q - 1)` at `q = 1`, with `X` replaced by `Y`.
    pub fn semiclassical_limit(&self, u: (usize, usize), v: (usize, usize)) -> Result<MPoly> {
        let xu = QPoly::generator(self.m, self.p, u.0, u.1)?;
        let xv = QPoly::generator(self.m, self.p, v.0, v.1)?;
        let comm = commutator(&xu, &xv)?;
        let mut out = MPoly::zero(&self.vars);
        for (word, c) in comm.terms() {
            let quotient = c
                .div_q_minus_one()
                .ok_or_else(|| Error::Invariant(format!("commutator coefficient {c} is not divisible by q - 1")))?;
            let mut exps = vec![0u32; self.vars.len()];
            for &g in word {
                exps[g as usize] += 1;
            }
            out = &out + &MPoly::monomial(&self.vars, exps, quotient.at_one());
        }
        Ok(out)
    }

    /// Whether the semiclassical limit of `[X_u, X_v]` equals `{Y_u, Y_v}`.
    pub fn semiclassical_check(&self, u: (usize, usize), v: (usize, usize)) -> Result<bool> {
        if u == v {
            return Err(Error::domain("semiclassical check needs two distinct generators"));
        }
        Ok(self.semiclassical_limit(u, v)? == self.generator_bracket(u, v))
    }

    /// Generator cells in lexicographic order.
    pub fn cells(&self) -> Vec<(usize, usize)> {
        (1..=self.m).flat_map(|i| (1..=self.p).map(move |a| (i, a))).collect()
    }
}

/// A path `t -> γ(t)` in `m x p` matrices with closed-form entries.
#[derive(Clone, Debug, PartialEq)]
pub struct FlowPath {
    pub m: usize,
    pub p: usize,
    pub entries: Vec<Vec<ExpPoly>>,
}

/// JSON form: `{"m":2,"p":2,"entries":[["0","3"],["5","30*t"]]}`. Entries
/// use `t`, `exp(c*t)`, rationals and `+ - * / ^`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FlowPathJson {
    pub m: usize,
    pub p: usize,
    pub entries: Vec<Vec<RatLiteral>>,
}

impl FlowPath {
    pub fn parse_json(text: &str) -> Result<FlowPath> {
        let j: FlowPathJson = serde_json::from_str(text).map_err(|e| Error::parse(format!("flow path JSON: {e}")))?;
        let entries: Vec<Vec<ExpPoly>> = j
            .entries
            .iter()
            .map(|row| {
                row.iter()
                    .map(|e| match e {
                        RatLiteral::Text(s) => parse_flow_expr(s),
                        RatLiteral::Int(n) => Ok(ExpPoly::constant(Rat::from_integer((*n).into()))),
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?;
        if entries.len() != j.m || entries.iter().any(|r| r.len() != j.p) {
            return Err(Error::parse(format!("flow path entries are not {}x{}", j.m, j.p)));
        }
        Ok(FlowPath { m: j.m, p: j.p, entries })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FlowReport {
    /// Every residual `d/dt (Y∘γ) - {H, Y}∘γ` is identically zero.
    pub symbolic_zero: bool,
    /// Largest absolute residual over the sample grid on `[0, 1]`.
    pub max_residual: f64,
    /// Residual of each coordinate, row-major.
    pub residuals: Vec<String>,
}

/// Checks that `γ` is an integral curve of the Hamiltonian vector field of
/// `h`: `d/dt (f∘γ) = {h, f}∘γ` for every coordinate function `f`.
pub fn verify_flow(alg: &PoissonAlgebra, path: &FlowPath, h: &MPoly, samples: usize) -> Result<FlowReport> {
    if (path.m, path.p) != alg.shape() {
        return Err(Error::domain("flow path and algebra have different shapes"));
    }
    let point: Vec<ExpPoly> = path.entries.iter().flatten().cloned().collect();
    let zero = ExpPoly::constant(Zero::zero());
    let mut residuals = Vec::new();
    let mut symbolic_zero = true;
    let mut max_residual = 0f64;
    let samples = samples.max(2);
    for (k, &(i, a)) in alg.cells().iter().enumerate() {
        let rhs = alg.bracket(h, &alg.y(i, a)).eval(&point, &zero);
        let res = point[k].derivative().minus(&rhs);
        symbolic_zero &= Scalar::vanishes(&res);
        for s in 0..samples {
            let t = s as f64 / (samples - 1) as f64;
            max_residual = max_residual.max(res.eval_f64(t).abs());
        }
        residuals.push(res.to_string());
    }
    Ok(FlowReport { symbolic_zero, max_residual, residuals })
}

/// Constant `i64` value of a polynomial, if it is one.
pub fn as_small_constant(f: &MPoly) -> Option<i64> {
    f.constant_value().and_then(|c| c.to_i64())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn two() -> PoissonAlgebra {
        PoissonAlgebra::new(2, 2).unwrap()
    }

    #[test]
    fn bracket_examples() {
        let alg = two();
        let p = |s: &str| alg.parse(s).unwrap();
        assert_eq!(alg.bracket(&p("a"), &p("d")), p("2*b*c"));
        assert!(alg.bracket(&p("b"), &p("c")).is_zero());
        assert_eq!(alg.bracket(&p("a"), &p("b")), p("a*b"));
        let f = p("a^2*d + b*c - 7");
        assert!(alg.bracket(&f, &f).is_zero());
        assert_eq!(p("Y[2,2]"), p("d"));
    }

    #[test]
    fn two_by_two_formula() {
        // Cross-check against the explicit 2x2 bracket on a quadratic pair.
        let alg = two();
        let p = |s: &str| alg.parse(s).unwrap();
        let (f, g) = (p("a*d"), p("b + c^2"));
        let d = |h: &MPoly, v: &str| h.partial_derivative_named(v).unwrap();
        let vars = ["a", "b", "c", "d"];
        let mut expected = MPoly::zero(alg.vars());
        for (x, u) in vars.iter().enumerate() {
            for v in &vars[x + 1..] {
                let t = alg.bracket(&p(u), &p(v));
                let cross = &(&d(&f, u) * &d(&g, v)) - &(&d(&f, v) * &d(&g, u));
                expected = &expected + &(&t * &cross);
            }
        }
        assert_eq!(alg.bracket(&f, &g), expected);
    }

    #[test]
    fn jacobi_on_generators() {
        for (m, p) in [(2, 2), (2, 3), (3, 3)] {
            let alg = PoissonAlgebra::new(m, p).unwrap();
            let gens: Vec<MPoly> = alg.cells().iter().map(|&(i, a)| alg.y(i, a)).collect();
            for f in &gens {
                for g in &gens {
                    for h in &gens {
                        assert!(alg.jacobi_check(f, g, h).is_zero());
                    }
                }
            }
        }
        let alg = two();
        let a = alg.parse("a").unwrap();
        let b = alg.parse("b").unwrap();
        assert!(alg.jacobi_check(&a, &a, &b).is_zero());
    }

    #[test]
    fn semiclassical_examples() {
        let alg = two();
        assert!(alg.semiclassical_check((1, 1), (2, 2)).unwrap());
        assert_eq!(alg.semiclassical_limit((1, 1), (2, 2)).unwrap(), alg.parse("2*b*c").unwrap());
        assert!(alg.semiclassical_check((1, 2), (2, 1)).unwrap());
        assert!(alg.semiclassical_check((1, 1), (1, 2)).unwrap());
        assert!(alg.semiclassical_check((1, 1), (1, 1)).is_err());
        let alg = PoissonAlgebra::new(3, 3).unwrap();
        for u in alg.cells() {
            for v in alg.cells() {
                if u != v {
                    assert!(alg.semiclassical_check(u, v).unwrap(), "{u:?} {v:?}");
                }
            }
        }
    }

    #[test]
    fn flows() {
        let alg = two();
        let h = alg.parse("a").unwrap();
        let lin = FlowPath::parse_json(r#"{"m":2,"p":2,"entries":[["0","3"],["5","30*t"]]}"#).unwrap();
        let r = verify_flow(&alg, &lin, &h, 100).unwrap();
        assert!(r.symbolic_zero && r.max_residual == 0.0);
        let ex = FlowPath::parse_json(r#"{"m":2,"p":2,"entries":[["2","exp(2*t)"],["exp(2*t)","1/2*exp(4*t)"]]}"#).unwrap();
        assert!(verify_flow(&alg, &ex, &h, 100).unwrap().symbolic_zero);
        let constant = FlowPath::parse_json(r#"{"m":2,"p":2,"entries":[[1,2],[3,4]]}"#).unwrap();
        assert!(verify_flow(&alg, &constant, &alg.parse("5").unwrap(), 10).unwrap().symbolic_zero);
        let wrong = FlowPath::parse_json(r#"{"m":2,"p":2,"entries":[["0","3"],["5","31*t"]]}"#).unwrap();
        let r = verify_flow(&alg, &wrong, &h, 100).unwrap();
        assert!(!r.symbolic_zero && (r.max_residual - 1.0).abs() < 1e-12);
    }

    fn cubic(alg: &PoissonAlgebra) -> impl Strategy<Value = MPoly> {
        let n = alg.vars().len();
        let vars = alg.vars().clone();
        proptest::collection::vec((proptest::collection::vec(0u32..2, n), -3i64..=3), 1..4).prop_map(move |terms| {
            let mut f = MPoly::zero(&vars);
            for (mut e, c) in terms {
                // Keep total degree at most 3.
                let mut deg = 0;
                for x in e.iter_mut() {
                    if deg == 3 {
                        *x = 0;
                    }
                    deg += *x;
                }
                f = &f + &MPoly::monomial(&vars, e, c.into());
            }
            f
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]
        #[test]
        fn jacobi_random_cubics(f in cubic(&PoissonAlgebra::new(3, 3).unwrap()),
                                g in cubic(&PoissonAlgebra::new(3, 3).unwrap()),
                                h in cubic(&PoissonAlgebra::new(3, 3).unwrap())) {
            let alg = PoissonAlgebra::new(3, 3).unwrap();
            // Rebuild over the algebra's own variable list.
            let (f, g, h) = (f.embed(alg.vars()).unwrap(), g.embed(alg.vars()).unwrap(), h.embed(alg.vars()).unwrap());
            prop_assert!(alg.jacobi_check(&f, &g, &h).is_zero());
        }

        #[test]
        fn antisymmetry_and_leibniz(f in cubic(&two()), g in cubic(&two()), h in cubic(&two())) {
            let alg = two();
            let (f, g, h) = (f.embed(alg.vars()).unwrap(), g.embed(alg.vars()).unwrap(), h.embed(alg.vars()).unwrap());
            prop_assert_eq!(alg.bracket(&f, &g), -&alg.bracket(&g, &f));
            let lhs = alg.bracket(&f, &(&g * &h));
            let rhs = &(&alg.bracket(&f, &g) * &h) + &(&g * &alg.bracket(&f, &h));
            prop_assert_eq!(lhs, rhs);
        }
    }
}
