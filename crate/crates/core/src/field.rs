//! Table-driven arithmetic in `F_{p^k}`, field towers and trace maps.
//!
//! An element of `F_q` is stored as the index `Σ c_j p^j` of its coordinate
//! vector in the polynomial basis `1, x, …, x^{k-1}`. Index `c` with `c < p`
//! is the prime-field element `c`, so the integers embed as the first `p`
//! indices.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::cyclo::CycloInt;
use crate::error::{Error, Result};

/// Largest field order backed by full addition/multiplication tables.
pub const MAX_TABLE_ORDER: u64 = 1 << 10;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Scalar(pub u16);

impl Scalar {
    pub const ZERO: Scalar = Scalar(0);
    pub const ONE: Scalar = Scalar(1);

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits `q = p^k`, or `None` when `q` is not a prime power.
pub fn prime_power(q: u64) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q % d == 0)?;
    let mut rest = q;
    let mut k = 0;
    while rest % p == 0 {
        rest /= p;
        k += 1;
    }
    (rest == 1).then_some((p as u32, k))
}

/// The finite field `F_{p^k}` with a fixed monic irreducible modulus.
#[derive(Clone)]
pub struct FieldSpec {
    p: u32,
    k: u32,
    order: u32,
    /// Monic modulus, coefficients low to high (length `k + 1`).
    modulus: Vec<u32>,
    add: Vec<u16>,
    mul: Vec<u16>,
    neg: Vec<u16>,
    inv: Vec<u16>,
    trace: Vec<u16>,
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.k == other.k && self.modulus == other.modulus
    }
}

impl Eq for FieldSpec {}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldSpec")
            .field("p", &self.p)
            .field("k", &self.k)
            .field("modulus", &self.modulus)
            .finish()
    }
}

impl Serialize for FieldSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("FieldSpec", 3)?;
        st.serialize_field("p", &self.p)?;
        st.serialize_field("k", &self.k)?;
        st.serialize_field("modulus", &self.modulus)?;
        st.end()
    }
}

fn poly_mulmod(a: &[u32], b: &[u32], modulus: &[u32], p: u32) -> Vec<u32> {
    let k = modulus.len() - 1;
    let mut prod = vec![0u64; 2 * k];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p as u64;
        }
    }
    // reduce top-down by the monic modulus
    for deg in (k..2 * k).rev() {
        let c = prod[deg];
        if c == 0 {
            continue;
        }
        prod[deg] = 0;
        for j in 0..k {
            let sub = c * modulus[j] as u64 % p as u64;
            let idx = deg - k + j;
            prod[idx] = (prod[idx] + p as u64 - sub) % p as u64;
        }
    }
    prod.truncate(k);
    prod.into_iter().map(|c| c as u32).collect()
}

fn digits(mut idx: u64, p: u32, len: usize) -> Vec<u32> {
    let mut out = vec![0; len];
    for d in out.iter_mut() {
        *d = (idx % p as u64) as u32;
        idx /= p as u64;
    }
    out
}

fn undigits(c: &[u32], p: u32) -> u64 {
    c.iter().rev().fold(0u64, |acc, &d| acc * p as u64 + d as u64)
}

/// Does the monic polynomial (low to high) have a factor of degree `1..=deg/2`?
fn is_irreducible(poly: &[u32], p: u32) -> bool {
    let deg = poly.len() - 1;
    if deg <= 1 {
        return true;
    }
    for d in 1..=deg / 2 {
        let count = (p as u64).pow(d as u32);
        for low in 0..count {
            let mut div = digits(low, p, d);
            div.push(1);
            if poly_rem(poly, &div, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

fn poly_rem(a: &[u32], monic: &[u32], p: u32) -> Vec<u32> {
    let mut r: Vec<u64> = a.iter().map(|&c| c as u64).collect();
    let d = monic.len() - 1;
    let pp = p as u64;
    for top in (d..r.len()).rev() {
        let c = r[top] % pp;
        if c == 0 {
            continue;
        }
        for j in 0..=d {
            let idx = top - d + j;
            r[idx] = (r[idx] + pp * pp - c * monic[j] as u64 % pp) % pp;
        }
    }
    r.truncate(d);
    r.into_iter().map(|c| (c % pp) as u32).collect()
}

/// Lexicographically least monic irreducible of degree `k` over `F_p`,
/// comparing coefficients from `x^{k-1}` down to the constant term.
pub fn least_irreducible(p: u32, k: u32) -> Vec<u32> {
    if k == 1 {
        return vec![0, 1];
    }
    let count = (p as u64).pow(k);
    for low in 0..count {
        let mut poly = digits(low, p, k as usize);
        poly.push(1);
        if is_irreducible(&poly, p) {
            return poly;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

impl FieldSpec {
    /// Builds `F_{p^k}`.
    pub fn new(p: u32, k: u32) -> Result<Arc<FieldSpec>> {
        if !is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        if k < 1 {
            return Err(Error::BadDegree(k));
        }
        let order = (p as u64).checked_pow(k).unwrap_or(u64::MAX);
        if order > MAX_TABLE_ORDER {
            return Err(Error::FieldTooLarge(order));
        }
        let modulus = least_irreducible(p, k);
        Ok(Arc::new(Self::with_modulus(p, k, modulus)))
    }

    /// Builds the field of order `q`.
    pub fn of_order(q: u64) -> Result<Arc<FieldSpec>> {
        let (p, k) = prime_power(q).ok_or(Error::NotPrimePower(q))?;
        Self::new(p, k)
    }

    fn with_modulus(p: u32, k: u32, modulus: Vec<u32>) -> FieldSpec {
        let q = p.pow(k) as usize;
        let ku = k as usize;
        let coords: Vec<Vec<u32>> = (0..q).map(|i| digits(i as u64, p, ku)).collect();
        let mut add = vec![0u16; q * q];
        let mut mul = vec![0u16; q * q];
        for a in 0..q {
            for b in 0..q {
                let s: Vec<u32> = coords[a]
                    .iter()
                    .zip(&coords[b])
                    .map(|(x, y)| (x + y) % p)
                    .collect();
                add[a * q + b] = undigits(&s, p) as u16;
                if b >= a {
                    let m = undigits(&poly_mulmod(&coords[a], &coords[b], &modulus, p), p) as u16;
                    mul[a * q + b] = m;
                    mul[b * q + a] = m;
                }
            }
        }
        let neg: Vec<u16> = (0..q)
            .map(|a| {
                let n: Vec<u32> = coords[a].iter().map(|&x| (p - x) % p).collect();
                undigits(&n, p) as u16
            })
            .collect();
        let mut inv = vec![0u16; q];
        for a in 1..q {
            inv[a] = (1..q).find(|&b| mul[a * q + b] == 1).unwrap() as u16;
        }
        let mut field = FieldSpec {
            p,
            k,
            order: q as u32,
            modulus,
            add,
            mul,
            neg,
            inv,
            trace: Vec::new(),
        };
        field.trace = (0..q)
            .map(|a| {
                let mut acc = Scalar::ZERO;
                let mut cur = Scalar(a as u16);
                for _ in 0..k {
                    acc = field.add(acc, cur);
                    cur = field.pow(cur, p as u64);
                }
                debug_assert!((acc.0 as u32) < p, "trace lies in the prime field");
                acc.0
            })
            .collect();
        field
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.k
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn elements(&self) -> impl Iterator<Item = Scalar> + Clone {
        (0..self.order as u16).map(Scalar)
    }

    pub fn nonzero(&self) -> impl Iterator<Item = Scalar> + Clone {
        (1..self.order as u16).map(Scalar)
    }

    /// Image of an integer in the prime field.
    pub fn from_int(&self, n: i64) -> Scalar {
        Scalar(n.rem_euclid(self.p as i64) as u16)
    }

    pub fn from_coeffs(&self, c: &[u32]) -> Scalar {
        let mut padded: Vec<u32> = c.iter().map(|x| x % self.p).collect();
        padded.resize(self.k as usize, 0);
        Scalar(undigits(&padded, self.p) as u16)
    }

    pub fn coeffs(&self, a: Scalar) -> Vec<u32> {
        digits(a.0 as u64, self.p, self.k as usize)
    }

    /// The class of `x` in the polynomial basis.
    pub fn generator(&self) -> Scalar {
        if self.k == 1 {
            // modulus x: the class of x is 0
            Scalar::ZERO
        } else {
            Scalar(self.p as u16)
        }
    }

    #[inline]
    pub fn add(&self, a: Scalar, b: Scalar) -> Scalar {
        Scalar(self.add[a.index() * self.order as usize + b.index()])
    }

    #[inline]
    pub fn sub(&self, a: Scalar, b: Scalar) -> Scalar {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Scalar, b: Scalar) -> Scalar {
        Scalar(self.mul[a.index() * self.order as usize + b.index()])
    }

    #[inline]
    pub fn neg(&self, a: Scalar) -> Scalar {
        Scalar(self.neg[a.index()])
    }

    pub fn inv(&self, a: Scalar) -> Result<Scalar> {
        if a.is_zero() {
            Err(Error::DivisionByZero)
        } else {
            Ok(Scalar(self.inv[a.index()]))
        }
    }

    /// Inverse of a known nonzero element.
    #[inline]
    pub(crate) fn inv_nonzero(&self, a: Scalar) -> Scalar {
        debug_assert!(!a.is_zero());
        Scalar(self.inv[a.index()])
    }

    pub fn pow(&self, a: Scalar, mut e: u64) -> Scalar {
        let mut base = a;
        let mut acc = Scalar::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Absolute trace `Tr_{F_q/F_p}(a)` as an integer in `0..p`.
    #[inline]
    pub fn abs_trace(&self, a: Scalar) -> u32 {
        self.trace[a.index()] as u32
    }

    /// `ψ(a) = ζ_p^{Tr(a)}`.
    pub fn additive_character(&self, a: Scalar) -> CycloInt {
        CycloInt::zeta_pow(self.p, self.abs_trace(a) as u64)
    }

    pub fn elem(self: &Arc<Self>, value: Scalar) -> FieldElement {
        FieldElement {
            field: Arc::clone(self),
            value,
        }
    }
}

/// A scalar tagged with its field, for checked arithmetic across fields.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldElement {
    pub field: Arc<FieldSpec>,
    pub value: Scalar,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Mul,
    /// Inverse of the first operand.
    Inv,
    /// First operand raised to the exponent.
    Pow(u64),
    /// Negation of the first operand.
    Neg,
}

/// Checked binary/unary field arithmetic.
pub fn field_arith(a: &FieldElement, b: &FieldElement, op: FieldOp) -> Result<FieldElement> {
    if !Arc::ptr_eq(&a.field, &b.field) && a.field != b.field {
        return Err(Error::FieldMismatch);
    }
    let f = &a.field;
    let value = match op {
        FieldOp::Add => f.add(a.value, b.value),
        FieldOp::Mul => f.mul(a.value, b.value),
        FieldOp::Inv => f.inv(a.value)?,
        FieldOp::Pow(e) => f.pow(a.value, e),
        FieldOp::Neg => f.neg(a.value),
    };
    Ok(f.elem(value))
}

/// `F_{q^n} / F_q` realised as `F_{p^{kn}}` with an explicit embedding of `F_{p^k}`.
#[derive(Clone, Debug)]
pub struct FieldTower {
    base: Arc<FieldSpec>,
    ext: Arc<FieldSpec>,
    degree: u32,
    embed: Vec<Scalar>,
    restrict: Vec<Option<Scalar>>,
}

impl FieldTower {
    pub fn new(base: Arc<FieldSpec>, ext: Arc<FieldSpec>) -> Result<FieldTower> {
        if base.p != ext.p || ext.k % base.k != 0 {
            return Err(Error::NotSubfield {
                small: base.order as u64,
                big: ext.order as u64,
            });
        }
        // the least root of the base modulus in the big field
        let root = ext
            .elements()
            .find(|&r| {
                let mut acc = Scalar::ZERO;
                for &c in base.modulus.iter().rev() {
                    acc = ext.add(ext.mul(acc, r), ext.from_int(c as i64));
                }
                acc.is_zero()
            })
            .expect("subfield modulus splits in the extension");
        let embed: Vec<Scalar> = base
            .elements()
            .map(|a| {
                let mut acc = Scalar::ZERO;
                for &c in base.coeffs(a).iter().rev() {
                    acc = ext.add(ext.mul(acc, root), ext.from_int(c as i64));
                }
                acc
            })
            .collect();
        let mut restrict = vec![None; ext.order as usize];
        for (i, e) in embed.iter().enumerate() {
            restrict[e.index()] = Some(Scalar(i as u16));
        }
        Ok(FieldTower {
            degree: ext.k / base.k,
            base,
            ext,
            embed,
            restrict,
        })
    }

    /// Builds the degree-`n` extension of `base`.
    pub fn extend(base: &Arc<FieldSpec>, n: u32) -> Result<FieldTower> {
        if n < 1 {
            return Err(Error::BadDegree(n));
        }
        let ext = if n == 1 {
            Arc::clone(base)
        } else {
            FieldSpec::new(base.p, base.k * n)?
        };
        FieldTower::new(Arc::clone(base), ext)
    }

    pub fn base(&self) -> &Arc<FieldSpec> {
        &self.base
    }

    pub fn ext(&self) -> &Arc<FieldSpec> {
        &self.ext
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn embed(&self, a: Scalar) -> Scalar {
        self.embed[a.index()]
    }

    pub fn restrict(&self, a: Scalar) -> Option<Scalar> {
        self.restrict[a.index()]
    }

    /// `Tr_{F_{q^n}/F_q}(a) = Σ_{j<n} a^{q^j}`, returned as an element of the base.
    pub fn rel_trace(&self, a: Scalar) -> Scalar {
        let q = self.base.order as u64;
        let mut acc = Scalar::ZERO;
        let mut cur = a;
        for _ in 0..self.degree {
            acc = self.ext.add(acc, cur);
            cur = self.ext.pow(cur, q);
        }
        self.restrict(acc).expect("relative trace lands in the subfield")
    }
}
