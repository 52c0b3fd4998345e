//! Plethystic calculus on graded series and the identities checked with it.

pub mod dilog;
pub mod hua;
pub mod poly;
pub mod ratfun;
pub mod series;

pub use dilog::{dilog_check, DilogReport};
pub use hua::{hua_check, HuaReport};
pub use poly::Poly;
pub use ratfun::RatFun;
pub use series::{pleth_exp, pleth_log, series_mul, DegreeFn, GradedSeries, LambdaCoeff, Series};

use crate::error::Result;

/// Checks `Exp(Σ z^v a_v) = Σ z^v f_v  ⇔  Exp(Σ z^v s^{-|v|} a_v) = Σ z^v s^{-|v|} f_v`
/// by computing both sides from `a`.
pub fn a_exp_equivalence(a: &Series<RatFun>) -> Result<bool> {
    let inv_s = RatFun::s_pow(-1);
    let f = a.exp()?;
    let twisted = a.grade_twist(&inv_s)?.exp()?;
    Ok(twisted == f.grade_twist(&inv_s)?)
}
