use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use rand::Rng;

use super::Scalar;

/// The Mersenne prime `2^61 - 1`, used by the probabilistic zero test.
pub const MODULUS: u64 = (1u64 << 61) - 1;

/// Element of `F_p` for `p = MODULUS`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Fp(u64);

impl Fp {
    pub fn new(v: u64) -> Fp {
        Fp(v % MODULUS)
    }

    pub fn value(self) -> u64 {
        self.0
    }

    pub fn from_bigint(n: &BigInt) -> Fp {
        let r = n.mod_floor(&BigInt::from(MODULUS));
        Fp(r.try_into().expect("residue below modulus"))
    }

    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Fp {
        Fp(rng.gen_range(1..MODULUS))
    }

    pub fn pow_u64(self, mut e: u64) -> Fp {
        let mut base = self;
        let mut acc = Fp(1);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }

    pub fn inverse(self) -> Option<Fp> {
        if self.0 == 0 {
            None
        } else {
            Some(self.pow_u64(MODULUS - 2))
        }
    }
}

impl Add for Fp {
    type Output = Fp;
    fn add(self, rhs: Fp) -> Fp {
        let s = self.0 + rhs.0;
        Fp(if s >= MODULUS { s - MODULUS } else { s })
    }
}

impl Sub for Fp {
    type Output = Fp;
    fn sub(self, rhs: Fp) -> Fp {
        if self.0 >= rhs.0 {
            Fp(self.0 - rhs.0)
        } else {
            Fp(self.0 + MODULUS - rhs.0)
        }
    }
}

impl Mul for Fp {
    type Output = Fp;
    fn mul(self, rhs: Fp) -> Fp {
        Fp(((self.0 as u128 * rhs.0 as u128) % MODULUS as u128) as u64)
    }
}

impl Neg for Fp {
    type Output = Fp;
    fn neg(self) -> Fp {
        Fp(0) - self
    }
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Scalar for Fp {
    fn zero_like(&self) -> Self {
        Fp(0)
    }
    fn one_like(&self) -> Self {
        Fp(1)
    }
    fn from_int_like(&self, n: &BigInt) -> Self {
        Fp::from_bigint(n)
    }
    fn vanishes(&self) -> bool {
        self.0 == 0
    }
    fn plus(&self, other: &Self) -> Self {
        *self + *other
    }
    fn minus(&self, other: &Self) -> Self {
        *self - *other
    }
    fn times(&self, other: &Self) -> Self {
        *self * *other
    }
    fn negated(&self) -> Self {
        -*self
    }
    fn recip(&self) -> Option<Self> {
        self.inverse()
    }
}

/// Determinant over `F_p` by Gaussian elimination.
pub fn det_mod_p(mut rows: Vec<Vec<Fp>>) -> Fp {
    let k = rows.len();
    let mut det = Fp(1);
    for col in 0..k {
        let Some(piv) = (col..k).find(|&r| rows[r][col].0 != 0) else {
            return Fp(0);
        };
        if piv != col {
            rows.swap(piv, col);
            det = -det;
        }
        let p = rows[col][col];
        det = det * p;
        let inv = p.inverse().expect("nonzero pivot");
        for r in col + 1..k {
            let factor = rows[r][col] * inv;
            if factor.0 == 0 {
                continue;
            }
            for c in col..k {
                let v = rows[col][c];
                rows[r][c] = rows[r][c] - factor * v;
            }
        }
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_basics() {
        let a = Fp::new(MODULUS - 1);
        assert_eq!(a + Fp::new(1), Fp::new(0));
        assert_eq!(-Fp::new(1), a);
        let x = Fp::new(123_456_789);
        assert_eq!(x * x.inverse().unwrap(), Fp::new(1));
        assert_eq!(Fp::from_bigint(&BigInt::from(-1)), a);
    }

    #[test]
    fn gaussian_determinant() {
        let m = vec![
            vec![Fp::new(2), Fp::new(1), Fp::new(1)],
            vec![Fp::new(1), Fp::new(1), Fp::new(1)],
            vec![Fp::new(1), Fp::new(1), Fp::new(1)],
        ];
        assert_eq!(det_mod_p(m), Fp::new(0));
        let m = vec![vec![Fp::new(0), Fp::new(1)], vec![Fp::new(1), Fp::new(0)]];
        assert_eq!(det_mod_p(m), -Fp::new(1));
    }
}
