//! Exact elements of `Z[ζ_p]` and `Q(ζ_p)`.
//!
//! Elements are coordinate vectors in the basis `ζ^0, …, ζ^{p-2}`; the
//! relation `1 + ζ + … + ζ^{p-1} = 0` is applied eagerly so the coordinates
//! are canonical and equality is coordinate-wise.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Coefficient ring for cyclotomic coordinates.
pub trait CycloCoeff:
    Clone + PartialEq + Zero + One + Neg<Output = Self> + for<'a> Add<&'a Self, Output = Self> + fmt::Display
{
    fn mul_ref(&self, other: &Self) -> Self;
}

impl CycloCoeff for BigInt {
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
}

impl CycloCoeff for BigRational {
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cyclo<T> {
    p: u32,
    coords: Vec<T>,
}

pub type CycloInt = Cyclo<BigInt>;
pub type CycloRat = Cyclo<BigRational>;

#[derive(Clone, Debug)]
pub enum CycloOp<T> {
    Add,
    Mul,
    /// Multiply the first operand by an integer/rational scalar.
    Scale(T),
}

impl<T: CycloCoeff> Cyclo<T> {
    pub fn zero(p: u32) -> Self {
        Cyclo {
            p,
            coords: vec![T::zero(); (p - 1) as usize],
        }
    }

    pub fn from_scalar(p: u32, c: T) -> Self {
        let mut z = Self::zero(p);
        z.coords[0] = c;
        z
    }

    pub fn one(p: u32) -> Self {
        Self::from_scalar(p, T::one())
    }

    /// `ζ_p^e`.
    pub fn zeta_pow(p: u32, e: u64) -> Self {
        let e = (e % p as u64) as usize;
        let mut full = vec![T::zero(); p as usize];
        full[e] = T::one();
        Self::reduce(p, full)
    }

    /// `Σ_t counts[t] ζ^t` for a histogram over `Z/p`.
    pub fn from_histogram(p: u32, counts: &[T]) -> Self {
        assert_eq!(counts.len(), p as usize);
        Self::reduce(p, counts.to_vec())
    }

    /// Reduce a length-`p` exponent vector using `ζ^{p-1} = -Σ_{j<p-1} ζ^j`.
    fn reduce(p: u32, mut full: Vec<T>) -> Self {
        let top = full.pop().expect("p >= 2");
        let coords = if top.is_zero() {
            full
        } else {
            full.into_iter().map(|c| c + &(-top.clone())).collect()
        };
        Cyclo { p, coords }
    }

    pub fn prime(&self) -> u32 {
        self.p
    }

    pub fn coords(&self) -> &[T] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    /// The value as an element of the base ring, when it lies there.
    pub fn as_scalar(&self) -> Option<&T> {
        self.coords[1..].iter().all(Zero::is_zero).then(|| &self.coords[0])
    }

    pub fn scale(&self, c: &T) -> Self {
        Cyclo {
            p: self.p,
            coords: self.coords.iter().map(|x| x.mul_ref(c)).collect(),
        }
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.p == other.p {
            Ok(())
        } else {
            Err(Error::CycloMismatch(self.p, other.p))
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(Cyclo {
            p: self.p,
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a.clone() + b)
                .collect(),
        })
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let p = self.p as usize;
        let mut full = vec![T::zero(); p];
        for (i, a) in self.coords.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coords.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let k = (i + j) % p;
                full[k] = full[k].clone() + &a.mul_ref(b);
            }
        }
        Ok(Self::reduce(self.p, full))
    }

    pub fn apply(&self, other: &Self, op: CycloOp<T>) -> Result<Self> {
        match op {
            CycloOp::Add => self.try_add(other),
            CycloOp::Mul => self.try_mul(other),
            CycloOp::Scale(c) => Ok(self.scale(&c)),
        }
    }
}

impl CycloInt {
    pub fn to_rat(&self) -> CycloRat {
        Cyclo {
            p: self.p,
            coords: self
                .coords
                .iter()
                .map(|c| BigRational::from_integer(c.clone()))
                .collect(),
        }
    }
}

impl CycloRat {
    pub fn scale_int(&self, n: i64) -> Self {
        self.scale(&BigRational::from_integer(n.into()))
    }

    pub fn div_int(&self, n: i64) -> Self {
        self.scale(&BigRational::new(1.into(), n.into()))
    }
}

impl<T: CycloCoeff> Add for &Cyclo<T> {
    type Output = Cyclo<T>;
    fn add(self, rhs: Self) -> Cyclo<T> {
        self.try_add(rhs).expect("cyclotomic primes agree")
    }
}

impl<T: CycloCoeff> Sub for &Cyclo<T> {
    type Output = Cyclo<T>;
    fn sub(self, rhs: Self) -> Cyclo<T> {
        self.try_add(&-rhs).expect("cyclotomic primes agree")
    }
}

impl<T: CycloCoeff> Mul for &Cyclo<T> {
    type Output = Cyclo<T>;
    fn mul(self, rhs: Self) -> Cyclo<T> {
        self.try_mul(rhs).expect("cyclotomic primes agree")
    }
}

impl<T: CycloCoeff> Neg for &Cyclo<T> {
    type Output = Cyclo<T>;
    fn neg(self) -> Cyclo<T> {
        Cyclo {
            p: self.p,
            coords: self.coords.iter().map(|c| -c.clone()).collect(),
        }
    }
}

impl<T: CycloCoeff> fmt::Display for Cyclo<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})ζ")?,
                _ => write!(f, "({c})ζ^{i}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl Serialize for CycloInt {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let coords: Vec<serde_json::Value> = self
            .coords
            .iter()
            .map(|c| match c.to_i64() {
                Some(v) => serde_json::Value::from(v),
                None => serde_json::Value::from(c.to_string()),
            })
            .collect();
        let mut st = s.serialize_struct("CycloInt", 2)?;
        st.serialize_field("p", &self.p)?;
        st.serialize_field("coords", &coords)?;
        st.end()
    }
}

impl Serialize for CycloRat {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let coords: Vec<String> = self.coords.iter().map(rat_string).collect();
        let mut st = s.serialize_struct("CycloRat", 2)?;
        st.serialize_field("p", &self.p)?;
        st.serialize_field("coords", &coords)?;
        st.end()
    }
}

/// `"num/den"` with the denominator always present.
pub fn rat_string(r: &BigRational) -> String {
    let r = r.reduced();
    format!("{}/{}", r.numer(), r.denom())
}

pub fn parse_rat(s: &str) -> Option<BigRational> {
    let (n, d) = s.split_once('/').unwrap_or((s, "1"));
    let n: BigInt = n.trim().parse().ok()?;
    let d: BigInt = d.trim().parse().ok()?;
    (!d.is_zero()).then(|| BigRational::new(n, d))
}

/// Absolute value helper for reports.
pub fn abs_rat(r: &BigRational) -> BigRational {
    r.abs()
}
