//! `Z^I`-graded power series truncated at `|v| <= N`, with plethystic
//! `Exp` and `Log` over any coefficient ring carrying Adams operations.

use std::collections::BTreeMap;
use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use super::ratfun::RatFun;
use crate::cyclo::CycloRat;
use crate::error::{Error, Result};
use crate::quiver::DimensionVector;

/// Coefficient ring with Adams operations `ψ_n`.
pub trait LambdaCoeff: Clone + PartialEq + Debug {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn is_one(&self) -> bool;
    fn add(&self, o: &Self) -> Result<Self>;
    fn mul(&self, o: &Self) -> Result<Self>;
    fn scale(&self, c: &BigRational) -> Self;
    fn adams(&self, n: u32) -> Self;

    fn sub(&self, o: &Self) -> Result<Self> {
        self.add(&o.scale(&-BigRational::one()))
    }
}

impl LambdaCoeff for RatFun {
    fn zero_like(&self) -> Self {
        RatFun::zero()
    }
    fn one_like(&self) -> Self {
        RatFun::one()
    }
    fn is_zero(&self) -> bool {
        RatFun::is_zero(self)
    }
    fn is_one(&self) -> bool {
        *self == RatFun::one()
    }
    fn add(&self, o: &Self) -> Result<Self> {
        Ok(RatFun::add(self, o))
    }
    fn mul(&self, o: &Self) -> Result<Self> {
        Ok(RatFun::mul(self, o))
    }
    fn scale(&self, c: &BigRational) -> Self {
        RatFun::scale(self, c)
    }
    fn adams(&self, n: u32) -> Self {
        RatFun::adams(self, n)
    }
}

/// A function `n ↦ f(n)` on extension degrees, valued in `Q(ζ_p)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DegreeFn {
    /// Independent of `n`.
    Const(CycloRat),
    /// `values[n-1] = f(n)` for `n = 1..=len`; unknown beyond.
    Table { p: u32, values: Vec<CycloRat> },
}

impl DegreeFn {
    pub fn prime(&self) -> u32 {
        match self {
            DegreeFn::Const(c) => c.prime(),
            DegreeFn::Table { p, .. } => *p,
        }
    }

    pub fn constant_int(p: u32, c: i64) -> DegreeFn {
        DegreeFn::Const(CycloRat::from_scalar(p, BigRational::from_integer(c.into())))
    }

    pub fn table(p: u32, values: Vec<CycloRat>) -> DegreeFn {
        DegreeFn::Table { p, values }
    }

    /// Integer table `f(n) = values[n-1]`.
    pub fn int_table(p: u32, values: &[i64]) -> DegreeFn {
        DegreeFn::table(
            p,
            values
                .iter()
                .map(|&v| CycloRat::from_scalar(p, BigRational::from_integer(v.into())))
                .collect(),
        )
    }

    /// Number of known degrees; `None` when constant.
    pub fn known(&self) -> Option<usize> {
        match self {
            DegreeFn::Const(_) => None,
            DegreeFn::Table { values, .. } => Some(values.len()),
        }
    }

    pub fn value(&self, n: u32) -> Option<CycloRat> {
        match self {
            DegreeFn::Const(c) => Some(c.clone()),
            DegreeFn::Table { values, .. } => values.get(n as usize - 1).cloned(),
        }
    }

    fn zip(&self, o: &Self, op: impl Fn(&CycloRat, &CycloRat) -> Result<CycloRat>) -> Result<DegreeFn> {
        if self.prime() != o.prime() {
            return Err(Error::CycloMismatch(self.prime(), o.prime()));
        }
        let p = self.prime();
        Ok(match (self, o) {
            (DegreeFn::Const(a), DegreeFn::Const(b)) => DegreeFn::Const(op(a, b)?),
            (DegreeFn::Const(a), DegreeFn::Table { values, .. }) => DegreeFn::Table {
                p,
                values: values.iter().map(|b| op(a, b)).collect::<Result<_>>()?,
            },
            (DegreeFn::Table { values, .. }, DegreeFn::Const(b)) => DegreeFn::Table {
                p,
                values: values.iter().map(|a| op(a, b)).collect::<Result<_>>()?,
            },
            (DegreeFn::Table { values: va, .. }, DegreeFn::Table { values: vb, .. }) => DegreeFn::Table {
                p,
                values: va.iter().zip(vb).map(|(a, b)| op(a, b)).collect::<Result<_>>()?,
            },
        })
    }

    fn map(&self, op: impl Fn(&CycloRat) -> CycloRat) -> DegreeFn {
        match self {
            DegreeFn::Const(c) => DegreeFn::Const(op(c)),
            DegreeFn::Table { p, values } => DegreeFn::Table {
                p: *p,
                values: values.iter().map(op).collect(),
            },
        }
    }
}

impl LambdaCoeff for DegreeFn {
    fn zero_like(&self) -> Self {
        DegreeFn::Const(CycloRat::zero(self.prime()))
    }
    fn one_like(&self) -> Self {
        DegreeFn::Const(CycloRat::one(self.prime()))
    }
    fn is_zero(&self) -> bool {
        match self {
            DegreeFn::Const(c) => c.is_zero(),
            DegreeFn::Table { values, .. } => values.iter().all(CycloRat::is_zero),
        }
    }
    fn is_one(&self) -> bool {
        let one = CycloRat::one(self.prime());
        match self {
            DegreeFn::Const(c) => *c == one,
            DegreeFn::Table { values, .. } => values.iter().all(|c| *c == one),
        }
    }
    fn add(&self, o: &Self) -> Result<Self> {
        self.zip(o, |a, b| a.try_add(b))
    }
    fn mul(&self, o: &Self) -> Result<Self> {
        self.zip(o, |a, b| a.try_mul(b))
    }
    fn scale(&self, c: &BigRational) -> Self {
        self.map(|x| x.scale(c))
    }
    /// `(ψ_n f)(m) = f(nm)`.
    fn adams(&self, n: u32) -> Self {
        match self {
            DegreeFn::Const(_) => self.clone(),
            DegreeFn::Table { p, values } => DegreeFn::Table {
                p: *p,
                values: values.iter().skip(n as usize - 1).step_by(n as usize).cloned().collect(),
            },
        }
    }
}

/// Dense truncated series: every grade `|v| <= cutoff` carries a coefficient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Series<C> {
    rank: usize,
    cutoff: u32,
    coeffs: BTreeMap<Vec<u32>, C>,
}

fn all_grades(rank: usize, cutoff: u32) -> Vec<Vec<u32>> {
    let mut out = vec![vec![0; rank]];
    out.extend(DimensionVector::all_up_to(rank, cutoff).into_iter().map(|d| d.0));
    out
}

/// All `w` with `0 <= w <= v` componentwise.
fn below(v: &[u32]) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for &x in v {
        out = out
            .into_iter()
            .flat_map(|pre| {
                (0..=x).map(move |k| {
                    let mut w = pre.clone();
                    w.push(k);
                    w
                })
            })
            .collect();
    }
    out
}

fn total(v: &[u32]) -> u32 {
    v.iter().sum()
}

fn minus(v: &[u32], w: &[u32]) -> Vec<u32> {
    v.iter().zip(w).map(|(a, b)| a - b).collect()
}

impl<C: LambdaCoeff> Series<C> {
    /// All coefficients equal to `zero`.
    pub fn zeros(rank: usize, cutoff: u32, zero: &C) -> Series<C> {
        let coeffs = all_grades(rank, cutoff).into_iter().map(|v| (v, zero.zero_like())).collect();
        Series { rank, cutoff, coeffs }
    }

    pub fn one(rank: usize, cutoff: u32, proto: &C) -> Series<C> {
        let mut s = Series::zeros(rank, cutoff, proto);
        s.set(&vec![0; rank], proto.one_like());
        s
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn cutoff(&self) -> u32 {
        self.cutoff
    }

    /// Grades ordered by total degree, then reverse-lexicographically.
    pub fn grades(&self) -> Vec<Vec<u32>> {
        all_grades(self.rank, self.cutoff)
    }

    pub fn get(&self, v: &[u32]) -> &C {
        &self.coeffs[v]
    }

    /// Sets a coefficient; grades beyond the cutoff are ignored.
    pub fn set(&mut self, v: &[u32], c: C) {
        if v.len() == self.rank && total(v) <= self.cutoff {
            self.coeffs.insert(v.to_vec(), c);
        }
    }

    pub fn coefficients(&self) -> impl Iterator<Item = (&Vec<u32>, &C)> {
        self.coeffs.iter()
    }

    fn check_same(&self, o: &Self) -> Result<()> {
        if self.rank != o.rank || self.cutoff != o.cutoff {
            return Err(Error::GradingMismatch);
        }
        Ok(())
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.check_same(o)?;
        let mut out = self.clone();
        for (v, c) in &self.coeffs {
            out.coeffs.insert(v.clone(), c.add(&o.coeffs[v])?);
        }
        Ok(out)
    }

    /// Cauchy product.
    pub fn mul(&self, o: &Self) -> Result<Self> {
        self.check_same(o)?;
        let mut out = self.clone();
        for v in self.grades() {
            let mut acc = self.coeffs[&v].zero_like();
            for w in below(&v) {
                acc = acc.add(&self.coeffs[&w].mul(&o.coeffs[&minus(&v, &w)])?)?;
            }
            out.coeffs.insert(v, acc);
        }
        Ok(out)
    }

    /// Multiplies the `v` coefficient by `t^{|v|}`.
    pub fn grade_twist(&self, t: &C) -> Result<Self> {
        let mut out = self.clone();
        for (v, c) in &self.coeffs {
            let mut factor = t.one_like();
            for _ in 0..total(v) {
                factor = factor.mul(t)?;
            }
            out.coeffs.insert(v.clone(), c.mul(&factor)?);
        }
        Ok(out)
    }

    /// `g_u = Σ_{n | u} ψ_n(f_{u/n}) / n`, the logarithm of `Exp f`.
    fn adams_sum(&self) -> Result<Self> {
        let mut g = self.clone();
        for u in self.grades() {
            if total(&u) == 0 {
                continue;
            }
            let mut acc = self.coeffs[&u].zero_like();
            for n in 1..=total(&u) {
                if u.iter().any(|x| x % n != 0) {
                    continue;
                }
                let w: Vec<u32> = u.iter().map(|x| x / n).collect();
                let term = self.coeffs[&w].adams(n).scale(&BigRational::new(BigInt::one(), n.into()));
                acc = acc.add(&term)?;
            }
            g.coeffs.insert(u, acc);
        }
        Ok(g)
    }

    /// Plethystic exponential; requires a zero constant term.
    pub fn exp(&self) -> Result<Self> {
        let zero = vec![0; self.rank];
        if !self.coeffs[&zero].is_zero() {
            return Err(Error::ConstantTerm { expected: "0" });
        }
        let g = self.adams_sum()?;
        let proto = &self.coeffs[&zero];
        let mut out = Series::one(self.rank, self.cutoff, proto);
        // |v| F_v = Σ_{0<w<=v} |w| g_w F_{v-w}
        for v in self.grades() {
            let tv = total(&v);
            if tv == 0 {
                continue;
            }
            let mut acc = proto.zero_like();
            for w in below(&v) {
                let tw = total(&w);
                if tw == 0 {
                    continue;
                }
                let term = g.coeffs[&w].mul(&out.coeffs[&minus(&v, &w)])?;
                acc = acc.add(&term.scale(&BigRational::from_integer(tw.into())))?;
            }
            out.coeffs.insert(v, acc.scale(&BigRational::new(BigInt::one(), tv.into())));
        }
        Ok(out)
    }

    /// Inverse of [`Series::exp`]; requires constant term 1.
    pub fn log(&self) -> Result<Self> {
        let zero = vec![0; self.rank];
        if !self.coeffs[&zero].is_one() {
            return Err(Error::ConstantTerm { expected: "1" });
        }
        let proto = self.coeffs[&zero].zero_like();
        let mut g = Series::zeros(self.rank, self.cutoff, &proto);
        for v in self.grades() {
            let tv = total(&v);
            if tv == 0 {
                continue;
            }
            // |v| g_v = |v| F_v - Σ_{0<w<v} |w| g_w F_{v-w}
            let mut acc = self.coeffs[&v].scale(&BigRational::from_integer(tv.into()));
            for w in below(&v) {
                let tw = total(&w);
                if tw == 0 || w == v {
                    continue;
                }
                let term = g.coeffs[&w].mul(&self.coeffs[&minus(&v, &w)])?;
                acc = acc.sub(&term.scale(&BigRational::from_integer(tw.into())))?;
            }
            g.coeffs.insert(v, acc.scale(&BigRational::new(BigInt::one(), tv.into())));
        }
        // f_u = g_u - Σ_{n | u, n > 1} ψ_n(f_{u/n}) / n
        let mut f = g.clone();
        for u in self.grades() {
            let tu = total(&u);
            if tu == 0 {
                continue;
            }
            let mut acc = g.coeffs[&u].clone();
            for n in 2..=tu {
                if u.iter().any(|x| x % n != 0) {
                    continue;
                }
                let w: Vec<u32> = u.iter().map(|x| x / n).collect();
                let term = f.coeffs[&w].adams(n).scale(&BigRational::new(BigInt::one(), n.into()));
                acc = acc.sub(&term)?;
            }
            f.coeffs.insert(u, acc);
        }
        Ok(f)
    }
}

/// A graded series in one of the two coefficient modes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GradedSeries {
    /// Coefficients are functions of the extension degree.
    ValueTable(Series<DegreeFn>),
    /// Coefficients are rational functions of `s = q^{1/2}`.
    RatFun(Series<RatFun>),
}

impl GradedSeries {
    pub fn cutoff(&self) -> u32 {
        match self {
            GradedSeries::ValueTable(s) => s.cutoff(),
            GradedSeries::RatFun(s) => s.cutoff(),
        }
    }

    /// Every `f_v` must be known at all degrees `n` with `n·|v| <= cutoff`.
    fn check_degrees(s: &Series<DegreeFn>) -> Result<()> {
        for (v, c) in s.coefficients() {
            let t = total(v);
            if t == 0 {
                continue;
            }
            let need = (s.cutoff() / t) as usize;
            if let Some(k) = c.known() {
                if k < need {
                    return Err(Error::MissingDegree {
                        grade: v.clone(),
                        degree: k as u32 + 1,
                    });
                }
            }
        }
        Ok(())
    }

    pub fn exp(&self) -> Result<GradedSeries> {
        match self {
            GradedSeries::ValueTable(s) => {
                Self::check_degrees(s)?;
                Ok(GradedSeries::ValueTable(s.exp()?))
            }
            GradedSeries::RatFun(s) => Ok(GradedSeries::RatFun(s.exp()?)),
        }
    }

    pub fn log(&self) -> Result<GradedSeries> {
        match self {
            GradedSeries::ValueTable(s) => Ok(GradedSeries::ValueTable(s.log()?)),
            GradedSeries::RatFun(s) => Ok(GradedSeries::RatFun(s.log()?)),
        }
    }

    pub fn mul(&self, o: &GradedSeries) -> Result<GradedSeries> {
        match (self, o) {
            (GradedSeries::ValueTable(a), GradedSeries::ValueTable(b)) => Ok(GradedSeries::ValueTable(a.mul(b)?)),
            (GradedSeries::RatFun(a), GradedSeries::RatFun(b)) => Ok(GradedSeries::RatFun(a.mul(b)?)),
            _ => Err(Error::ModeMismatch),
        }
    }
}

pub fn series_mul(a: &GradedSeries, b: &GradedSeries) -> Result<GradedSeries> {
    a.mul(b)
}

pub fn pleth_exp(f: &GradedSeries) -> Result<GradedSeries> {
    f.exp()
}

pub fn pleth_log(g: &GradedSeries) -> Result<GradedSeries> {
    g.log()
}

#[derive(Serialize)]
struct Entry<'a, C> {
    v: &'a [u32],
    value: &'a C,
}

impl Serialize for DegreeFn {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("DegreeFn", 1)?;
        match self {
            DegreeFn::Const(c) => st.serialize_field("const", c)?,
            DegreeFn::Table { values, .. } => st.serialize_field("table", values)?,
        }
        st.end()
    }
}

fn ser_series<S: Serializer, C: Serialize>(s: S, mode: &str, x: &Series<C>) -> std::result::Result<S::Ok, S::Error> {
    let entries: Vec<Entry<C>> = x.coeffs.iter().map(|(v, c)| Entry { v, value: c }).collect();
    let mut st = s.serialize_struct("GradedSeries", 4)?;
    st.serialize_field("mode", mode)?;
    st.serialize_field("rank", &x.rank)?;
    st.serialize_field("cutoff", &x.cutoff)?;
    st.serialize_field("coefficients", &entries)?;
    st.end()
}

impl Serialize for GradedSeries {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            GradedSeries::ValueTable(x) => ser_series(s, "value_table", x),
            GradedSeries::RatFun(x) => ser_series(s, "ratfun", x),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pleth::poly::Poly;

    fn s_over_1ms2() -> RatFun {
        RatFun::new(Poly::from_ints(&[0, 1]), Poly::from_ints(&[1, 0, -1])).unwrap()
    }

    #[test]
    fn products() {
        let mut a = Series::zeros(1, 3, &RatFun::zero());
        a.set(&[0], RatFun::one());
        a.set(&[1], RatFun::one());
        let mut b = a.clone();
        b.set(&[1], RatFun::from_int(-1));
        let p = a.mul(&b).unwrap();
        assert_eq!(p.get(&[2]), &RatFun::from_int(-1));
        assert!(p.get(&[1]).is_zero());
        assert_eq!(a.mul(&Series::one(1, 3, &RatFun::zero())).unwrap(), a);

        let mut c = Series::one(1, 2, &RatFun::zero());
        c.set(&[1], s_over_1ms2());
        let sq = c.mul(&c).unwrap();
        assert_eq!(sq.get(&[2]), &s_over_1ms2().mul(&s_over_1ms2()));
    }

    #[test]
    fn exp_small_orders() {
        let mut f = Series::zeros(1, 3, &RatFun::zero());
        f.set(&[1], RatFun::s_pow(1));
        let e = f.exp().unwrap();
        assert_eq!(e.get(&[2]), &RatFun::s_pow(2));
        assert_eq!(Series::zeros(1, 3, &RatFun::zero()).exp().unwrap(), Series::one(1, 3, &RatFun::zero()));

        // f_1(n) = 2^n
        let mut t = Series::zeros(1, 2, &DegreeFn::constant_int(2, 0));
        t.set(&[1], DegreeFn::int_table(2, &[2, 4]));
        let e = GradedSeries::ValueTable(t).exp().unwrap();
        let GradedSeries::ValueTable(e) = e else { unreachable!() };
        assert_eq!(e.get(&[2]).value(1).unwrap(), CycloRat::from_scalar(2, BigRational::from_integer(4.into())));
    }

    #[test]
    fn errors() {
        let mut f = Series::one(1, 2, &RatFun::zero());
        assert_eq!(f.exp().unwrap_err(), Error::ConstantTerm { expected: "0" });
        f.set(&[0], RatFun::zero());
        assert_eq!(f.log().unwrap_err(), Error::ConstantTerm { expected: "1" });

        let mut t = Series::zeros(1, 3, &DegreeFn::constant_int(3, 0));
        t.set(&[1], DegreeFn::int_table(3, &[1, 2]));
        let e = GradedSeries::ValueTable(t).exp().unwrap_err();
        assert_eq!(e, Error::MissingDegree { grade: vec![1], degree: 3 });

        let a = GradedSeries::RatFun(Series::one(1, 2, &RatFun::zero()));
        let b = GradedSeries::ValueTable(Series::one(1, 2, &DegreeFn::constant_int(2, 0)));
        assert_eq!(series_mul(&a, &b).unwrap_err(), Error::ModeMismatch);
        let c = GradedSeries::RatFun(Series::one(1, 3, &RatFun::zero()));
        assert_eq!(series_mul(&a, &c).unwrap_err(), Error::GradingMismatch);
    }

    #[test]
    fn round_trips() {
        let mut f = Series::zeros(2, 3, &RatFun::zero());
        f.set(&[1, 0], RatFun::s_pow(1));
        f.set(&[1, 1], s_over_1ms2());
        f.set(&[0, 2], RatFun::from_int(-3));
        let e = f.exp().unwrap();
        assert_eq!(e.log().unwrap(), f);
        assert_eq!(Series::one(2, 3, &RatFun::zero()).log().unwrap(), Series::zeros(2, 3, &RatFun::zero()));
    }

    #[test]
    fn adams_on_tables() {
        let t = DegreeFn::int_table(2, &[1, 2, 3, 4, 5, 6]);
        assert_eq!(t.adams(2), DegreeFn::int_table(2, &[2, 4, 6]));
        assert_eq!(t.adams(4), DegreeFn::int_table(2, &[4]));
    }

    #[test]
    fn serializes() {
        let mut f = Series::zeros(1, 1, &RatFun::zero());
        f.set(&[1], RatFun::s_pow(-1));
        let j = serde_json::to_value(GradedSeries::RatFun(f)).unwrap();
        assert_eq!(j["mode"], "ratfun");
        assert_eq!(j["coefficients"][1]["value"]["den"][1], "1/1");
    }
}
