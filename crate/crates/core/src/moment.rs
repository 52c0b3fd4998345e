//! Moment maps on doubled quivers, the diamond genericity predicate and
//! fiber point counts.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::cyclo::rat_string;
use crate::endo::count_ai;
use crate::enumerate::{Budget, ProjectiveGroup, RepSpace};
use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::matrix::{mul_into, Matrix};
use crate::quiver::{double_quiver, DimensionVector, Quiver, Representation};

/// Checks the three diamond conditions on a flattened tuple `(z_i^α)`,
/// grouped by vertex according to `v`, using the supplied addition.
pub fn diamond_check_with<T: Clone + PartialEq>(
    z: &[T],
    v: &[u32],
    zero: &T,
    add: impl Fn(&T, &T) -> T,
) -> Result<bool> {
    let n: usize = v.iter().map(|&x| x as usize).sum();
    if z.len() != n {
        return Err(Error::Shape(format!("tuple has {} entries, |v| = {n}", z.len())));
    }
    if n > 24 {
        return Err(Error::Precondition("diamond check limited to |v| <= 24".into()));
    }
    let total = z.iter().fold(zero.clone(), |acc, x| add(&acc, x));
    if total != *zero {
        return Ok(false);
    }
    let mut start = 0;
    for &vi in v {
        let block = &z[start..start + vi as usize];
        for a in 0..block.len() {
            if block[a + 1..].contains(&block[a]) {
                return Ok(false);
            }
        }
        start += vi as usize;
    }
    // nonempty proper sub-collections
    for mask in 1u32..(1u32 << n) - 1 {
        let s = (0..n)
            .filter(|&b| mask >> b & 1 == 1)
            .fold(zero.clone(), |acc, b| add(&acc, &z[b]));
        if s == *zero {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Diamond predicate over a finite field.
pub fn diamond_check(f: &FieldSpec, z: &[Scalar], v: &DimensionVector) -> Result<bool> {
    diamond_check_with(z, &v.0, &Scalar::ZERO, |a, b| f.add(*a, *b))
}

/// Diamond predicate over `Q`.
pub fn diamond_check_rat(z: &[BigRational], v: &DimensionVector) -> Result<bool> {
    diamond_check_with(z, &v.0, &BigRational::zero(), |a, b| a + b)
}

/// `Σ_i η_i v_i = 0` and `Σ_i η_i w_i ≠ 0` for every `0 < w < v`.
pub fn scalar_generic(f: &FieldSpec, eta: &[Scalar], v: &DimensionVector) -> bool {
    let dot = |w: &[u32]| {
        w.iter()
            .zip(eta)
            .fold(Scalar::ZERO, |acc, (&k, &e)| f.add(acc, f.mul(f.from_int(k as i64), e)))
    };
    if !dot(&v.0).is_zero() {
        return false;
    }
    let mut w = vec![0u32; v.rank()];
    loop {
        let mut i = 0;
        while i < w.len() && w[i] == v.0[i] {
            w[i] = 0;
            i += 1;
        }
        if i == w.len() {
            return true;
        }
        w[i] += 1;
        if w != v.0 && dot(&w).is_zero() {
            return false;
        }
    }
}

/// `(η_i)` repeated `v_i` times.
pub fn eigenvalue_tuple(eta: &[Scalar], v: &DimensionVector) -> Vec<Scalar> {
    eta.iter()
        .zip(&v.0)
        .flat_map(|(&e, &n)| std::iter::repeat_n(e, n as usize))
        .collect()
}

/// Per-vertex square matrices in the target of the moment map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoadjointTarget {
    pub blocks: Vec<Matrix>,
}

impl CoadjointTarget {
    /// `(η_i · Id_{v_i})`.
    pub fn scalar(v: &DimensionVector, eta: &[Scalar]) -> CoadjointTarget {
        CoadjointTarget {
            blocks: v
                .0
                .iter()
                .zip(eta)
                .map(|(&n, &e)| Matrix::scalar(n as usize, e))
                .collect(),
        }
    }

    pub fn trace_sum(&self, f: &FieldSpec) -> Scalar {
        self.blocks.iter().fold(Scalar::ZERO, |acc, b| f.add(acc, b.trace(f)))
    }
}

/// `μ_i = Σ_{t(a)=i} M_a M_{a*} − Σ_{s(a)=i} M_{a*} M_a` over the original arrows.
pub fn moment_map(x: &Representation) -> Result<CoadjointTarget> {
    let d = x.quiver.doubled_of.as_ref().ok_or(Error::NotDoubled)?;
    let f = &x.field;
    let mut blocks: Vec<Matrix> = x.dim.0.iter().map(|&n| Matrix::zeros(n as usize, n as usize)).collect();
    for a in 0..d.original {
        let arrow = &x.quiver.arrows[a];
        let (m, ms) = (&x.mats[a], &x.mats[d.star[a]]);
        blocks[arrow.target] = blocks[arrow.target].add(f, &m.mul(f, ms));
        blocks[arrow.source] = blocks[arrow.source].sub(f, &ms.mul(f, m));
    }
    Ok(CoadjointTarget { blocks })
}

/// Raw-slice moment map for the enumeration kernels.
struct MomentKernel<'a> {
    space: &'a RepSpace,
    pairs: Vec<(usize, usize, usize, usize)>,
    dims: Vec<usize>,
}

impl<'a> MomentKernel<'a> {
    fn new(space: &'a RepSpace) -> Result<Self> {
        let q = &space.quiver;
        let d = q.doubled_of.as_ref().ok_or(Error::NotDoubled)?;
        let pairs = (0..d.original)
            .map(|a| (a, d.star[a], q.arrows[a].source, q.arrows[a].target))
            .collect();
        Ok(MomentKernel {
            space,
            pairs,
            dims: space.dim.0.iter().map(|&n| n as usize).collect(),
        })
    }

    /// Does `μ(x) = (η_i Id)`?
    fn hits(&self, x: &[Scalar], eta: &[Scalar], acc: &mut [Vec<Scalar>], tmp: &mut [Scalar]) -> bool {
        let f = &self.space.field;
        for (i, blk) in acc.iter_mut().enumerate() {
            blk.iter_mut().for_each(|s| *s = Scalar::ZERO);
            let n = self.dims[i];
            for k in 0..n {
                blk[k * n + k] = f.neg(eta[i]);
            }
        }
        for &(a, b, s, t) in &self.pairs {
            let (ra, ca, oa) = self.space.shape(a);
            let (_, _, ob) = self.space.shape(b);
            let (ma, mb) = (&x[oa..oa + ra * ca], &x[ob..ob + ca * ra]);
            mul_into(f, ma, mb, ra, ca, ra, &mut tmp[..ra * ra]);
            for (dst, src) in acc[t].iter_mut().zip(&tmp[..ra * ra]) {
                *dst = f.add(*dst, *src);
            }
            mul_into(f, mb, ma, ca, ra, ca, &mut tmp[..ca * ca]);
            for (dst, src) in acc[s].iter_mut().zip(&tmp[..ca * ca]) {
                *dst = f.sub(*dst, *src);
            }
        }
        acc.iter().all(|b| b.iter().all(|s| s.is_zero()))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FiberReport {
    pub n_points: u64,
    pub free: bool,
    /// Entries of a fiber point with a nontrivial projective stabilizer.
    pub witness: Option<Vec<u16>>,
    pub pgl_order: u64,
    #[serde(serialize_with = "ser_rat")]
    pub m_o: BigRational,
}

fn ser_rat<S: serde::Serializer>(r: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&rat_string(r))
}

/// Brute-force count of `μ^{-1}(η)` with a pointwise freeness check.
pub fn fiber_count(qd: &Arc<Quiver>, v: &DimensionVector, f: &Arc<FieldSpec>, eta: &[Scalar], budget: &Budget) -> Result<FiberReport> {
    if !qd.is_double() {
        return Err(Error::NotDoubled);
    }
    if eta.len() != v.rank() {
        return Err(Error::Shape(format!("{} eta values for {} vertices", eta.len(), v.rank())));
    }
    let target = CoadjointTarget::scalar(v, eta);
    if !target.trace_sum(f).is_zero() {
        return Err(Error::Precondition("Σ_i v_i η_i must vanish".into()));
    }
    let space = RepSpace::new(qd, f, v)?;
    let group = ProjectiveGroup::new(f, v)?;
    if space.count() as u128 > budget.ops {
        return Err(Error::BudgetExceeded {
            what: "fiber scan".into(),
            needed: space.count() as u128,
            cap: budget.ops,
        });
    }
    let kernel = MomentKernel::new(&space)?;
    let len = space.entry_len();
    let maxd = v.0.iter().copied().max().unwrap_or(0) as usize;
    let chunk = 1u64 << 14;
    let chunks = space.count().div_ceil(chunk);
    let (n_points, stab_work, witness) = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut x = vec![Scalar::ZERO; len];
            let mut acc: Vec<Vec<Scalar>> = kernel.dims.iter().map(|&n| vec![Scalar::ZERO; n * n]).collect();
            let mut tmp = vec![Scalar::ZERO; (maxd * maxd).max(1)];
            let mut hits = 0u64;
            let mut work = 0u128;
            let mut witness: Option<u64> = None;
            for idx in c * chunk..((c + 1) * chunk).min(space.count()) {
                space.decode(idx, &mut x);
                if kernel.hits(&x, eta, &mut acc, &mut tmp) {
                    hits += 1;
                    work += group.len() as u128;
                    if witness.is_none() && space.stabilizer_size(&group, &x) > 1 {
                        witness = Some(idx);
                    }
                }
            }
            (hits, work, witness)
        })
        .reduce(
            || (0, 0, None),
            |a, b| (a.0 + b.0, a.1 + b.1, a.2.into_iter().chain(b.2).min()),
        );
    if stab_work > budget.ops {
        return Err(Error::BudgetExceeded {
            what: "stabilizer checks".into(),
            needed: stab_work,
            cap: budget.ops,
        });
    }
    let witness = witness.map(|i| {
        let mut x = vec![Scalar::ZERO; len];
        space.decode(i, &mut x);
        x.iter().map(|s| s.0).collect()
    });
    let pgl = group.len() as u64;
    Ok(FiberReport {
        n_points,
        free: witness.is_none(),
        witness,
        pgl_order: pgl,
        m_o: BigRational::new(BigInt::from(n_points), BigInt::from(pgl)),
    })
}

/// `dim Rep_v(Q) − (v·v − 1)`.
pub fn half_dim_mo(q: &Quiver, v: &DimensionVector) -> i64 {
    q.rep_dim(v) as i64 - (v.dot_self() as i64 - 1)
}

#[derive(Clone, Debug, Serialize)]
pub struct MomentReport {
    pub q: u64,
    pub v: Vec<u32>,
    pub eta: Vec<u16>,
    pub n_ai: u64,
    pub half_dim: i64,
    /// `n_ai · q^{half_dim}`.
    #[serde(serialize_with = "ser_rat")]
    pub lhs: BigRational,
    pub fiber: FiberReport,
    pub pass: bool,
}

/// `#AI_v(F_q) · q^{d_v} = #μ^{-1}(η)(F_q) / #PGL_v(F_q)` for Weyl-trivial `v`.
pub fn ai_vs_fiber_check(q: &Arc<Quiver>, v: &DimensionVector, f: &Arc<FieldSpec>, eta: &[Scalar], budget: &Budget) -> Result<MomentReport> {
    if v.0.iter().any(|&n| n > 1) {
        return Err(Error::Precondition("every v_i must be at most 1".into()));
    }
    if eta.len() != v.rank() {
        return Err(Error::Shape(format!("{} eta values for {} vertices", eta.len(), v.rank())));
    }
    if !diamond_check(f, &eigenvalue_tuple(eta, v), v)? {
        return Err(Error::Precondition(format!(
            "eta {:?} is not diamond-generic for v = {v}",
            eta.iter().map(|s| s.0).collect::<Vec<_>>()
        )));
    }
    let qd = Arc::new(double_quiver(q)?);
    let fiber = fiber_count(&qd, v, f, eta, budget)?;
    let n_ai = count_ai(q, v, f, budget)?;
    let d = half_dim_mo(q, v);
    let qq = BigInt::from(f.order());
    let scale = if d >= 0 {
        BigRational::from_integer(qq.pow(d as u32))
    } else {
        BigRational::new(1.into(), qq.pow((-d) as u32))
    };
    let lhs = BigRational::from_integer(n_ai.into()) * scale;
    let pass = fiber.free && lhs == fiber.m_o;
    Ok(MomentReport {
        q: f.order() as u64,
        v: v.0.clone(),
        eta: eta.iter().map(|s| s.0).collect(),
        n_ai,
        half_dim: d,
        lhs,
        fiber,
        pass,
    })
}

/// All diamond-generic per-vertex scalar tuples for `v`.
pub fn diamond_etas(f: &FieldSpec, v: &DimensionVector) -> Vec<Vec<Scalar>> {
    let q = f.order() as u64;
    let r = v.rank() as u32;
    (0..q.pow(r))
        .map(|mut idx| {
            (0..r)
                .map(|_| {
                    let s = Scalar((idx % q) as u16);
                    idx /= q;
                    s
                })
                .collect::<Vec<_>>()
        })
        .filter(|eta| diamond_check(f, &eigenvalue_tuple(eta, v), v).unwrap_or(false))
        .collect()
}
