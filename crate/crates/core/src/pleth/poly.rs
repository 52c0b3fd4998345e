//! Dense univariate polynomials over `Q` in the variable `s`.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::cyclo::rat_string;

/// Coefficients from `s^0` upward, without trailing zeros.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Poly {
    coeffs: Vec<BigRational>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Poly {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_ints(c: &[i64]) -> Poly {
        Poly::new(c.iter().map(|&x| BigRational::from_integer(x.into())).collect())
    }

    pub fn zero() -> Poly {
        Poly::default()
    }

    pub fn one() -> Poly {
        Poly::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Poly {
        Poly::new(vec![c])
    }

    /// `c·s^k`.
    pub fn monomial(c: BigRational, k: usize) -> Poly {
        let mut v = vec![BigRational::zero(); k + 1];
        v[k] = c;
        Poly::new(v)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> BigRational {
        self.coeffs.last().cloned().unwrap_or_else(BigRational::zero)
    }

    /// Lowest exponent with a nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let n = self.coeffs.len().max(o.coeffs.len());
        let z = BigRational::zero();
        Poly::new(
            (0..n)
                .map(|i| self.coeffs.get(i).unwrap_or(&z) + o.coeffs.get(i).unwrap_or(&z))
                .collect(),
        )
    }

    pub fn neg(&self) -> Poly {
        Poly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }

    pub fn scale(&self, c: &BigRational) -> Poly {
        Poly::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    /// `(quotient, remainder)`; panics on a zero divisor.
    pub fn divrem(&self, d: &Poly) -> (Poly, Poly) {
        let dd = d.degree().expect("division by the zero polynomial");
        let lead_inv = d.lead().recip();
        let mut r = self.coeffs.clone();
        let mut q = vec![BigRational::zero(); r.len().saturating_sub(dd)];
        while r.len() > dd && !r.is_empty() {
            let top = r.len() - 1;
            let c = &r[top] * &lead_inv;
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    let idx = top - dd + j;
                    r[idx] = &r[idx] - &c * dc;
                }
                q[top - dd] = c;
            }
            r.pop();
        }
        (Poly::new(q), Poly::new(r))
    }

    /// Monic greatest common divisor (zero if both are zero).
    pub fn gcd(&self, o: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.divrem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        self.scale(&self.lead().recip())
    }

    /// `p(s^n)`.
    pub fn adams(&self, n: u32) -> Poly {
        if n == 1 || self.is_zero() {
            return self.clone();
        }
        let n = n as usize;
        let mut out = vec![BigRational::zero(); (self.coeffs.len() - 1) * n + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i * n] = c.clone();
        }
        Poly::new(out)
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.coeffs.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    pub fn int_coeffs(&self) -> Option<Vec<BigInt>> {
        self.coeffs
            .iter()
            .map(|c| c.is_integer().then(|| c.to_integer()))
            .collect()
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.abs();
            let body = if a.is_integer() { a.to_integer().to_string() } else { rat_string(&a) };
            match (i, a.is_one()) {
                (0, _) => write!(f, "{body}")?,
                (1, true) => write!(f, "s")?,
                (1, false) => write!(f, "{body}*s")?,
                (_, true) => write!(f, "s^{i}")?,
                (_, false) => write!(f, "{body}*s^{i}")?,
            }
        }
        Ok(())
    }
}
