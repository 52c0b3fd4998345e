//! `Σ_v z^v (-1)^v q^{v²/2} / #GL_v(F_q) = Exp(z q^{1/2} / (1 - q))` in `s = q^{1/2}`.

use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;

use super::poly::Poly;
use super::ratfun::RatFun;
use super::series::Series;
use crate::error::Result;

#[derive(Clone, Debug, Serialize)]
pub struct DilogRow {
    pub v: u32,
    pub lhs: RatFun,
    pub rhs: RatFun,
    pub equal: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct DilogReport {
    pub cutoff: u32,
    pub rows: Vec<DilogRow>,
    pub pass: bool,
}

/// `(-1)^v s^{v²} / Π_{j<v} (s^{2v} - s^{2j})`.
pub fn dilog_lhs(v: u32) -> RatFun {
    let mut den = Poly::one();
    for j in 0..v {
        den = den.mul(&mono(2 * v).sub(&mono(2 * j)));
    }
    let sign = if v % 2 == 0 { 1 } else { -1 };
    RatFun::new(mono(v * v).scale(&BigRational::from_integer(sign.into())), den).expect("nonzero denominator")
}

fn mono(k: u32) -> Poly {
    Poly::monomial(BigRational::one(), k as usize)
}

pub fn dilog_check(cutoff: u32) -> Result<DilogReport> {
    let mut arg = Series::zeros(1, cutoff, &RatFun::zero());
    arg.set(&[1], RatFun::new(mono(1), Poly::from_ints(&[1, 0, -1]))?);
    let rhs = arg.exp()?;
    let rows: Vec<DilogRow> = (0..=cutoff)
        .map(|v| {
            let lhs = dilog_lhs(v);
            let r = rhs.get(&[v]).clone();
            DilogRow {
                v,
                equal: lhs == r,
                lhs,
                rhs: r,
            }
        })
        .collect();
    let pass = rows.iter().all(|r| r.equal);
    Ok(DilogReport { cutoff, rows, pass })
}
