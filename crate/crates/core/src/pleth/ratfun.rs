//! Rational functions in `s = q^{1/2}` over `Q`.

use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use super::poly::Poly;
use crate::cyclo::rat_string;
use crate::error::{Error, Result};

/// `num / den` with `den` monic and coprime to `num`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatFun {
    num: Poly,
    den: Poly,
}

impl RatFun {
    pub fn new(num: Poly, den: Poly) -> Result<RatFun> {
        if den.is_zero() {
            return Err(Error::Invalid("zero denominator".into()));
        }
        if num.is_zero() {
            return Ok(RatFun::zero());
        }
        let g = num.gcd(&den);
        let (n, _) = num.divrem(&g);
        let (d, _) = den.divrem(&g);
        let lead = d.lead().recip();
        Ok(RatFun {
            num: n.scale(&lead),
            den: d.scale(&lead),
        })
    }

    pub fn zero() -> RatFun {
        RatFun {
            num: Poly::zero(),
            den: Poly::one(),
        }
    }

    pub fn one() -> RatFun {
        RatFun::from_poly(Poly::one())
    }

    pub fn from_poly(p: Poly) -> RatFun {
        RatFun { num: p, den: Poly::one() }
    }

    pub fn from_rat(c: BigRational) -> RatFun {
        RatFun::from_poly(Poly::constant(c))
    }

    pub fn from_int(c: i64) -> RatFun {
        RatFun::from_rat(BigRational::from_integer(c.into()))
    }

    /// `s^k` for any integer `k`.
    pub fn s_pow(k: i64) -> RatFun {
        let m = Poly::monomial(BigRational::one(), k.unsigned_abs() as usize);
        if k >= 0 {
            RatFun::from_poly(m)
        } else {
            RatFun { num: Poly::one(), den: m }
        }
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, o: &RatFun) -> RatFun {
        if self.den == o.den {
            return RatFun::new(self.num.add(&o.num), self.den.clone()).expect("nonzero denominator");
        }
        RatFun::new(
            self.num.mul(&o.den).add(&o.num.mul(&self.den)),
            self.den.mul(&o.den),
        )
        .expect("nonzero denominator")
    }

    pub fn neg(&self) -> RatFun {
        RatFun {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, o: &RatFun) -> RatFun {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &RatFun) -> RatFun {
        RatFun::new(self.num.mul(&o.num), self.den.mul(&o.den)).expect("nonzero denominator")
    }

    pub fn div(&self, o: &RatFun) -> Result<RatFun> {
        if o.is_zero() {
            return Err(Error::DivisionByZero);
        }
        RatFun::new(self.num.mul(&o.den), self.den.mul(&o.num))
    }

    pub fn scale(&self, c: &BigRational) -> RatFun {
        if c.is_zero() {
            return RatFun::zero();
        }
        RatFun {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    /// `f(s^n)`.
    pub fn adams(&self, n: u32) -> RatFun {
        RatFun {
            num: self.num.adams(n),
            den: self.den.adams(n),
        }
    }

    pub fn eval(&self, s: &BigRational) -> Option<BigRational> {
        let d = self.den.eval(s);
        (!d.is_zero()).then(|| self.num.eval(s) / d)
    }
}

impl fmt::Display for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == Poly::one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl Serialize for RatFun {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let enc = |p: &Poly| p.coeffs().iter().map(rat_string).collect::<Vec<_>>();
        let mut st = s.serialize_struct("RatFun", 2)?;
        st.serialize_field("num", &enc(&self.num))?;
        st.serialize_field("den", &enc(&self.den))?;
        st.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normal_form() {
        let a = RatFun::new(Poly::from_ints(&[-2, 0, 2]), Poly::from_ints(&[2, 2])).unwrap();
        assert_eq!(a, RatFun::from_poly(Poly::from_ints(&[-1, 1])));
        let b = RatFun::new(Poly::from_ints(&[1]), Poly::from_ints(&[2, -2])).unwrap();
        assert_eq!(b.den(), &Poly::from_ints(&[-1, 1]));
    }

    #[test]
    fn field_ops() {
        let x = RatFun::new(Poly::from_ints(&[0, 1]), Poly::from_ints(&[1, 0, -1])).unwrap();
        let sq = x.mul(&x);
        assert_eq!(sq, RatFun::new(Poly::from_ints(&[0, 0, 1]), Poly::from_ints(&[1, 0, -2, 0, 1])).unwrap());
        assert_eq!(sq.div(&x).unwrap(), x);
        assert!(x.sub(&x).is_zero());
        assert_eq!(RatFun::s_pow(-2).mul(&RatFun::s_pow(3)), RatFun::s_pow(1));
        assert_eq!(x.adams(2), RatFun::new(Poly::from_ints(&[0, 0, 1]), Poly::from_ints(&[1, 0, 0, 0, -1])).unwrap());
    }
}
