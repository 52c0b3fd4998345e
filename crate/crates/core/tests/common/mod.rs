#![allow(dead_code)]

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use proptest::prelude::*;

use qcount_core::cyclo::CycloInt;
use qcount_core::field::{FieldSpec, Scalar};
use qcount_core::matrix::Matrix;
use qcount_core::moment::{diamond_check, diamond_check_rat};
use qcount_core::pleth::{a_exp_equivalence, DegreeFn, Poly, RatFun, Series};
use qcount_core::quiver::{direct_sum, evaluate_potential, DimensionVector, Potential, Quiver, Representation};

pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

/// Small rational functions in `s` with a few fixed denominators.
pub fn ratfun() -> impl Strategy<Value = RatFun> {
    let dens = prop_oneof![
        Just(vec![1i64]),
        Just(vec![1, 0, -1]),
        Just(vec![0, 1]),
        Just(vec![1, -1]),
    ];
    (prop::collection::vec(-3i64..=3, 0..4), dens)
        .prop_map(|(num, den)| RatFun::new(Poly::from_ints(&num), Poly::from_ints(&den)).unwrap())
}

/// Series with zero constant term, rank 1 or 2, cutoff up to 4.
pub fn ratfun_series() -> impl Strategy<Value = Series<RatFun>> {
    (1usize..=2, 1u32..=4)
        .prop_flat_map(|(rank, cutoff)| {
            let n = Series::zeros(rank, cutoff, &RatFun::zero()).grades().len() - 1;
            (Just(rank), Just(cutoff), prop::collection::vec(ratfun(), n))
        })
        .prop_map(|(rank, cutoff, cs)| {
            let mut s = Series::zeros(rank, cutoff, &RatFun::zero());
            for (v, c) in s.grades().into_iter().skip(1).zip(cs) {
                s.set(&v, c);
            }
            s
        })
}

/// A pair of series on the same grading.
pub fn ratfun_series_pair() -> impl Strategy<Value = (Series<RatFun>, Series<RatFun>)> {
    (1usize..=2, 1u32..=4)
        .prop_flat_map(|(rank, cutoff)| {
            let n = Series::zeros(rank, cutoff, &RatFun::zero()).grades().len() - 1;
            (
                Just(rank),
                Just(cutoff),
                prop::collection::vec(ratfun(), n),
                prop::collection::vec(ratfun(), n),
            )
        })
        .prop_map(|(rank, cutoff, a, b)| {
            let build = |cs: Vec<RatFun>| {
                let mut s = Series::zeros(rank, cutoff, &RatFun::zero());
                for (v, c) in s.grades().into_iter().skip(1).zip(cs) {
                    s.set(&v, c);
                }
                s
            };
            (build(a), build(b))
        })
}

/// Integer value tables over `p = 2`, known to the cutoff at every grade.
pub fn table_series() -> impl Strategy<Value = Series<DegreeFn>> {
    (1usize..=2, 1u32..=5)
        .prop_flat_map(|(rank, cutoff)| {
            let n = Series::zeros(rank, cutoff, &DegreeFn::constant_int(2, 0)).grades().len() - 1;
            (
                Just(rank),
                Just(cutoff),
                prop::collection::vec(prop::collection::vec(-4i64..=4, cutoff as usize), n),
            )
        })
        .prop_map(|(rank, cutoff, tables)| {
            let mut s = Series::zeros(rank, cutoff, &DegreeFn::constant_int(2, 0));
            for (v, t) in s.grades().into_iter().skip(1).zip(tables) {
                s.set(&v, DegreeFn::int_table(2, &t));
            }
            s
        })
}

/// `Log(Exp a) = a` and `Exp(Log(1 + a)) = 1 + a`.
pub fn exp_log_roundtrip(a: &Series<RatFun>) -> bool {
    let back = a.exp().and_then(|e| e.log());
    let one_plus = a.add(&Series::one(a.rank(), a.cutoff(), &RatFun::zero())).unwrap();
    let fwd = one_plus.log().and_then(|l| l.exp());
    back.as_ref() == Ok(a) && fwd.as_ref() == Ok(&one_plus)
}

/// Round trip in value-table mode, compared degree by degree where known.
pub fn exp_log_roundtrip_tables(a: &Series<DegreeFn>) -> bool {
    let Ok(back) = a.exp().and_then(|e| e.log()) else {
        return false;
    };
    a.grades().into_iter().skip(1).all(|v| {
        let t: u32 = v.iter().sum();
        (1..=a.cutoff() / t).all(|n| a.get(&v).value(n) == back.get(&v).value(n))
    })
}

/// `Exp(a + b) = Exp(a) · Exp(b)`.
pub fn exp_additive(a: &Series<RatFun>, b: &Series<RatFun>) -> bool {
    let lhs = a.add(b).and_then(|s| s.exp());
    let rhs = a.exp().and_then(|x| b.exp().and_then(|y| x.mul(&y)));
    lhs.is_ok() && lhs == rhs
}

pub fn a_exp(a: &Series<RatFun>) -> bool {
    a_exp_equivalence(a).unwrap_or(false)
}

/// `Π_v (1 − m_v z^v)^{−c_v}` expanded directly, for monomial coefficients
/// `c_v s^{k_v}` on a rank-one series.
pub fn exp_oracle_rank1(terms: &[(u32, i64, u32)], cutoff: u32) -> Vec<RatFun> {
    let mut out: Vec<RatFun> = (0..=cutoff).map(|d| if d == 0 { RatFun::one() } else { RatFun::zero() }).collect();
    for &(v, c, k) in terms {
        // (1 - x)^{-c} = Σ_j (c)_j / j! x^j with x = s^k z^v
        let mut factor: Vec<RatFun> = vec![RatFun::zero(); cutoff as usize + 1];
        let mut coeff = BigRational::one();
        let mut j = 0u32;
        while j * v <= cutoff {
            factor[(j * v) as usize] = RatFun::s_pow((j * k) as i64).scale(&coeff);
            coeff = coeff * rat(c + j as i64) / rat(j as i64 + 1);
            j += 1;
        }
        let mut next = vec![RatFun::zero(); cutoff as usize + 1];
        for (a, x) in out.iter().enumerate() {
            for (b, y) in factor.iter().enumerate() {
                if a + b <= cutoff as usize {
                    next[a + b] = next[a + b].add(&x.mul(y));
                }
            }
        }
        out = next;
    }
    out
}

/// `Σ_a ψ(ab) = q·[b = 0]` and `ψ(a + b) = ψ(a)ψ(b)`.
pub fn character_orthogonality(f: &FieldSpec) -> bool {
    let p = f.characteristic();
    let q = f.order() as i64;
    let orth = f.elements().all(|b| {
        let sum = f
            .elements()
            .fold(CycloInt::zero(p), |acc, a| &acc + &f.additive_character(f.mul(a, b)));
        let want = if b.is_zero() { CycloInt::from_scalar(p, BigInt::from(q)) } else { CycloInt::zero(p) };
        sum == want
    });
    let hom = f.elements().all(|a| {
        f.elements().all(|b| {
            f.additive_character(f.add(a, b)) == &f.additive_character(a) * &f.additive_character(b)
        })
    });
    orth && hom
}

/// `φ(x ⊕ y) = φ(x) + φ(y)`.
pub fn potential_additive(x: &Representation, y: &Representation, phi: &Potential) -> bool {
    let f = &x.field;
    let s = direct_sum(x, y).unwrap();
    evaluate_potential(&s, phi).unwrap() == f.add(evaluate_potential(x, phi).unwrap(), evaluate_potential(y, phi).unwrap())
}

/// Random representation of `quiver` of dimension `v` over `f`.
pub fn random_rep(quiver: &Arc<Quiver>, f: &Arc<FieldSpec>, v: &DimensionVector, seed: &[u16]) -> Representation {
    let q = f.order() as u16;
    let mut it = seed.iter().cycle();
    let mats = quiver
        .arrows
        .iter()
        .map(|a| {
            let (r, c) = (v.0[a.target] as usize, v.0[a.source] as usize);
            Matrix::from_vec(r, c, (0..r * c).map(|_| Scalar(it.next().copied().unwrap_or(0) % q)).collect())
        })
        .collect();
    Representation::new(Arc::clone(quiver), Arc::clone(f), v.clone(), mats).unwrap()
}

/// Diamond verdict over `F_q` is unchanged by permuting within a vertex
/// and by nonzero scaling.
pub fn diamond_invariant_fq(f: &FieldSpec, z: &[Scalar], v: &DimensionVector, perm_seed: usize, c: Scalar) -> bool {
    let base = diamond_check(f, z, v).unwrap();
    let mut permuted = z.to_vec();
    let mut start = 0;
    for &vi in &v.0 {
        let block = &mut permuted[start..start + vi as usize];
        if !block.is_empty() {
            block.rotate_left(perm_seed % block.len());
            if block.len() > 1 && perm_seed % 2 == 1 {
                block.swap(0, 1);
            }
        }
        start += vi as usize;
    }
    let scaled: Vec<Scalar> = z.iter().map(|&x| f.mul(c, x)).collect();
    base == diamond_check(f, &permuted, v).unwrap() && (c.is_zero() || base == diamond_check(f, &scaled, v).unwrap())
}

pub fn diamond_invariant_rat(z: &[i64], v: &DimensionVector, perm_seed: usize, c: i64) -> bool {
    let zr: Vec<BigRational> = z.iter().map(|&x| rat(x)).collect();
    let base = diamond_check_rat(&zr, v).unwrap();
    let mut permuted = zr.clone();
    let mut start = 0;
    for &vi in &v.0 {
        let block = &mut permuted[start..start + vi as usize];
        if !block.is_empty() {
            block.rotate_left(perm_seed % block.len());
        }
        start += vi as usize;
    }
    let scaled: Vec<BigRational> = zr.iter().map(|x| x * rat(c)).collect();
    base == diamond_check_rat(&permuted, v).unwrap() && (c == 0 || base == diamond_check_rat(&scaled, v).unwrap())
}
