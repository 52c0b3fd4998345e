//! Kac polynomials by exact interpolation of absolutely indecomposable counts.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::endo::count_ai;
use crate::enumerate::Budget;
use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::pleth::Poly;
use crate::quiver::{DimensionVector, Quiver};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KacPoly {
    pub quiver_hash: String,
    pub v: Vec<u32>,
    /// Coefficients of `q^0, q^1, …`.
    #[serde(serialize_with = "ser_ints")]
    pub coeffs: Vec<BigInt>,
    pub samples: Vec<u64>,
    pub sample_counts: Vec<u64>,
}

fn ser_ints<S: serde::Serializer>(c: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(c.iter().map(|x| x.to_string()))
}

impl KacPoly {
    /// A bare polynomial, for property checks.
    pub fn from_coeffs(coeffs: &[i64]) -> KacPoly {
        let mut c: Vec<BigInt> = coeffs.iter().map(|&x| x.into()).collect();
        while c.last().is_some_and(Zero::is_zero) {
            c.pop();
        }
        KacPoly {
            quiver_hash: String::new(),
            v: Vec::new(),
            coeffs: c,
            samples: Vec::new(),
            sample_counts: Vec::new(),
        }
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(One::is_one)
    }

    pub fn eval(&self, q: u64) -> BigInt {
        let q = BigInt::from(q);
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * &q + c)
    }
}

impl fmt::Display for KacPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " {} ", if c.is_negative() { '-' } else { '+' })?;
            } else if c.is_negative() {
                write!(f, "-")?;
            }
            first = false;
            let a = c.abs();
            match (i, a.is_one()) {
                (0, _) => write!(f, "{a}")?,
                (1, true) => write!(f, "q")?,
                (1, false) => write!(f, "{a}q")?,
                (_, true) => write!(f, "q^{i}")?,
                (_, false) => write!(f, "{a}q^{i}")?,
            }
        }
        Ok(())
    }
}

/// `1 − ⟨v, v⟩`.
pub fn degree_bound(q: &Quiver, v: &DimensionVector) -> i64 {
    1 - q.euler_form(v, v)
}

/// Lagrange interpolation through `(x_i, y_i)` over `Q`.
pub fn interpolate(points: &[(u64, u64)]) -> Poly {
    let mut out = Poly::zero();
    for (i, &(xi, yi)) in points.iter().enumerate() {
        let mut basis = Poly::one();
        let mut denom = BigRational::one();
        for (j, &(xj, _)) in points.iter().enumerate() {
            if i == j {
                continue;
            }
            let xj = BigRational::from_integer(xj.into());
            basis = basis.mul(&Poly::new(vec![-xj.clone(), BigRational::one()]));
            denom *= BigRational::from_integer(xi.into()) - xj;
        }
        out = out.add(&basis.scale(&(BigRational::from_integer(yi.into()) / denom)));
    }
    out
}

/// Interpolates the AI counts at the sample prime powers.
pub fn kac_poly(q: &Arc<Quiver>, v: &DimensionVector, samples: &[u64], budget: &Budget) -> Result<KacPoly> {
    let needed = degree_bound(q, v).max(0) as usize + 1;
    if samples.len() < needed {
        return Err(Error::TooFewSamples {
            needed,
            got: samples.len(),
        });
    }
    let counts = samples
        .par_iter()
        .map(|&s| {
            let f = FieldSpec::of_order(s)?;
            count_ai(q, v, &f, budget)
        })
        .collect::<Result<Vec<u64>>>()?;
    let points: Vec<(u64, u64)> = samples.iter().copied().zip(counts.iter().copied()).collect();
    let poly = interpolate(&points);
    let coeffs = poly.int_coeffs().ok_or_else(|| Error::NonIntegral(poly.to_string()))?;
    Ok(KacPoly {
        quiver_hash: q.content_hash(),
        v: v.0.clone(),
        coeffs,
        samples: samples.to_vec(),
        sample_counts: counts,
    })
}

/// `(all coefficients nonnegative, offending (exponent, coefficient) pairs)`.
pub fn positivity_check(k: &KacPoly) -> (bool, Vec<(usize, BigInt)>) {
    let bad: Vec<(usize, BigInt)> = k
        .coeffs
        .iter()
        .enumerate()
        .filter(|(_, c)| c.is_negative())
        .map(|(i, c)| (i, c.clone()))
        .collect();
    (bad.is_empty(), bad)
}
