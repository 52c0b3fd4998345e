//! Calogero-Moser combinatorics: the set Σ, nilpotent orbits in `Nil × V`,
//! Frobenius gluing, cell counts on `M_0` and snakes on framed cycles.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::endo::Tag;
use crate::enumerate::{canonical_index, gl_order, iso_classes, Budget, ProjectiveGroup, RepSpace};
use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::matrix::{general_linear_group, mul_into, Matrix};
use crate::moment::scalar_generic;
use crate::quiver::{catalog, double_quiver, DimensionVector, Representation};

/// Weakly decreasing positive parts.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct Partition(pub Vec<u32>);

impl Partition {
    pub fn new(mut parts: Vec<u32>) -> Partition {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition(parts)
    }

    pub fn empty() -> Partition {
        Partition(Vec::new())
    }

    pub fn size(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `i`-th part (0-based), zero past the end.
    pub fn part(&self, i: usize) -> u32 {
        self.0.get(i).copied().unwrap_or(0)
    }

    pub fn is_strict(&self) -> bool {
        self.0.windows(2).all(|w| w[0] > w[1])
    }

    pub fn conjugate(&self) -> Partition {
        let m = self.part(0);
        Partition((1..=m).map(|j| self.0.iter().filter(|&&p| p >= j).count() as u32).collect())
    }

    /// Componentwise sum.
    pub fn plus(&self, other: &Partition) -> Partition {
        let l = self.len().max(other.len());
        Partition::new((0..l).map(|i| self.part(i) + other.part(i)).collect())
    }

    /// Frobenius coordinates `(α, β)`: arms and legs off the diagonal.
    pub fn frobenius(&self) -> (Vec<u32>, Vec<u32>) {
        let conj = self.conjugate();
        let d = (0..self.len()).take_while(|&i| self.0[i] as usize > i).count();
        let alpha = (0..d).map(|i| self.0[i] - i as u32 - 1).collect();
        let beta = (0..d).map(|i| conj.0[i] - i as u32 - 1).collect();
        (alpha, beta)
    }

    /// Inverse of [`Partition::frobenius`].
    pub fn from_frobenius(alpha: &[u32], beta: &[u32]) -> Result<Partition> {
        let strict = |s: &[u32]| s.windows(2).all(|w| w[0] > w[1]);
        if alpha.len() != beta.len() || !strict(alpha) || !strict(beta) {
            return Err(Error::Invalid(format!("bad Frobenius symbol {alpha:?} | {beta:?}")));
        }
        let d = alpha.len();
        let mut rows: Vec<u32> = (0..d).map(|i| alpha[i] + i as u32 + 1).collect();
        let depth = beta.first().map_or(0, |&b| b as usize + 1);
        for r in d..depth {
            rows.push((0..d).filter(|&j| beta[j] as usize + j >= r).count() as u32);
        }
        Ok(Partition::new(rows))
    }

    /// Boxes `(row, col)`, 0-based, row-major.
    pub fn boxes(&self) -> Vec<(u32, u32)> {
        self.0
            .iter()
            .enumerate()
            .flat_map(|(i, &p)| (0..p).map(move |j| (i as u32, j)))
            .collect()
    }

    /// Number of boxes of each color `(col − row) mod n`.
    pub fn color_counts(&self, n: usize) -> Vec<u32> {
        let mut out = vec![0u32; n];
        for (r, c) in self.boxes() {
            out[(c as i64 - r as i64).rem_euclid(n as i64) as usize] += 1;
        }
        out
    }

    /// All partitions of `n`, parts in decreasing lexicographic order.
    pub fn all(n: u32) -> Vec<Partition> {
        let mut out = Vec::new();
        fn rec(rest: u32, max: u32, cur: &mut Vec<u32>, strict: bool, out: &mut Vec<Partition>) {
            if rest == 0 {
                out.push(Partition(cur.clone()));
                return;
            }
            for p in (1..=rest.min(max)).rev() {
                cur.push(p);
                rec(rest - p, if strict { p - 1 } else { p }, cur, strict, out);
                cur.pop();
            }
        }
        rec(n, n, &mut Vec::new(), false, &mut out);
        out
    }

    /// Partitions of `n` into distinct parts.
    pub fn strict(n: u32) -> Vec<Partition> {
        let mut out = Vec::new();
        fn rec(rest: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
            if rest == 0 {
                out.push(Partition(cur.clone()));
                return;
            }
            for p in (1..=rest.min(max)).rev() {
                cur.push(p);
                rec(rest - p, p - 1, cur, out);
                cur.pop();
            }
        }
        rec(n, n, &mut Vec::new(), &mut out);
        out
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Number of partitions of `n` by Euler's pentagonal recurrence.
pub fn partition_count(n: usize) -> BigUint {
    let mut p: Vec<BigUint> = vec![BigUint::one()];
    for m in 1..=n {
        let (mut plus, mut minus) = (BigUint::zero(), BigUint::zero());
        for k in 1.. {
            let g1 = k * (3 * k - 1) / 2;
            if g1 > m {
                break;
            }
            let sign_plus = k % 2 == 1;
            let mut add = |g: usize| {
                if g <= m {
                    if sign_plus {
                        plus += &p[m - g];
                    } else {
                        minus += &p[m - g];
                    }
                }
            };
            add(g1);
            add(k * (3 * k + 1) / 2);
        }
        p.push(plus - minus);
    }
    p.swap_remove(n)
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct PartitionPair {
    pub lambda: Partition,
    pub mu: Partition,
}

impl PartitionPair {
    pub fn new(lambda: Partition, mu: Partition) -> Self {
        PartitionPair { lambda, mu }
    }

    pub fn size(&self) -> u32 {
        self.lambda.size() + self.mu.size()
    }

    pub fn in_sigma(&self) -> bool {
        self.lambda.is_strict()
            && self.mu.is_strict()
            && (self.lambda.len() == self.mu.len() || self.lambda.len() == self.mu.len() + 1)
    }

    /// Jordan type of the nilpotent in the corresponding orbit.
    pub fn nu(&self) -> Partition {
        self.lambda.plus(&self.mu)
    }
}

impl fmt::Display for PartitionPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.lambda, self.mu)
    }
}

/// All pairs `(λ, μ)` with `|λ| + |μ| = n`, decreasing in `(λ, μ)`.
pub fn bipartitions(n: u32) -> Vec<PartitionPair> {
    let mut out: Vec<PartitionPair> = (0..=n)
        .flat_map(|k| {
            let mus = Partition::all(n - k);
            Partition::all(k)
                .into_iter()
                .flat_map(move |l| mus.clone().into_iter().map(move |m| PartitionPair::new(l.clone(), m)))
        })
        .collect();
    out.sort_by(|a, b| b.cmp(a));
    out
}

/// The set Σ(n), decreasing in `(λ, μ)`.
pub fn sigma_set(n: u32) -> Vec<PartitionPair> {
    let mut out: Vec<PartitionPair> = (0..=n)
        .flat_map(|k| {
            let mus = Partition::strict(n - k);
            Partition::strict(k).into_iter().flat_map(move |l| {
                mus.clone()
                    .into_iter()
                    .map(move |m| PartitionPair::new(l.clone(), m))
                    .filter(PartitionPair::in_sigma)
            })
        })
        .collect();
    out.sort_by(|a, b| b.cmp(a));
    out
}

/// The partition with Frobenius symbol `α_i = λ_i − 1`, `β_i = μ_i`.
pub fn frobenius_glue(pair: &PartitionPair) -> Result<Partition> {
    if !pair.in_sigma() {
        return Err(Error::Precondition(format!("{pair} is not in Σ")));
    }
    let d = pair.lambda.len();
    let alpha: Vec<u32> = pair.lambda.0.iter().map(|&l| l - 1).collect();
    let beta: Vec<u32> = (0..d).map(|i| pair.mu.part(i)).collect();
    Partition::from_frobenius(&alpha, &beta)
}

/// Inverse of [`frobenius_glue`].
pub fn frobenius_unglue(nu: &Partition) -> PartitionPair {
    let (alpha, beta) = nu.frobenius();
    PartitionPair::new(
        Partition::new(alpha.iter().map(|&a| a + 1).collect()),
        Partition::new(beta),
    )
}

/// Row lengths of the diagram obtained by shifting row `i` of `μ` right by
/// `i`, standing part `i` of `λ` as a column raised by `i − 1`, and taking
/// the union. `None` if the pieces overlap or the union is not a diagram.
pub fn glue_boxes(pair: &PartitionPair) -> Option<Partition> {
    let mut cells: BTreeSet<(u32, u32)> = BTreeSet::new();
    // (height, column), both 1-based, first quadrant
    for (i, &m) in pair.mu.0.iter().enumerate() {
        let i = i as u32 + 1;
        for x in i + 1..=i + m {
            if !cells.insert((i, x)) {
                return None;
            }
        }
    }
    for (i, &l) in pair.lambda.0.iter().enumerate() {
        let i = i as u32 + 1;
        for y in i..i + l {
            if !cells.insert((y, i)) {
                return None;
            }
        }
    }
    let mut rows: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
    for (y, x) in cells {
        rows.entry(y).or_default().push(x);
    }
    let mut lens = Vec::new();
    for (k, (y, xs)) in rows.iter().enumerate() {
        if *y != k as u32 + 1 || xs.iter().enumerate().any(|(j, &x)| x != j as u32 + 1) {
            return None;
        }
        lens.push(xs.len() as u32);
    }
    lens.windows(2).all(|w| w[0] >= w[1]).then_some(Partition(lens))
}

/// `(u, v)` with `u` nilpotent of type `λ + μ` in a string basis and
/// `v = Σ_i e_{i, λ_i}`.
pub fn build_orbit_rep(pair: &PartitionPair, _f: &FieldSpec) -> (Matrix, Matrix) {
    let nu = pair.nu();
    let n = nu.size() as usize;
    let mut u = Matrix::zeros(n, n);
    let mut v = Matrix::zeros(n, 1);
    let mut off = 0;
    for (i, &len) in nu.0.iter().enumerate() {
        for j in 1..len as usize {
            u.set(off + j - 1, off + j, Scalar::ONE);
        }
        let l = pair.lambda.part(i) as usize;
        if l > 0 {
            v.set(off + l - 1, 0, Scalar::ONE);
        }
        off += len as usize;
    }
    (u, v)
}

/// `(u, v)` as a representation of the CM quiver with dimension `(n, 1)`.
pub fn as_cm_rep(u: &Matrix, v: &Matrix, f: &Arc<FieldSpec>) -> Result<Representation> {
    Representation::new(
        Arc::new(catalog::calogero_moser()),
        Arc::clone(f),
        DimensionVector(vec![u.rows as u32, 1]),
        vec![u.clone(), v.clone()],
    )
}

/// Jordan type of a nilpotent matrix from the ranks of its powers.
pub fn jordan_type(u: &Matrix, f: &FieldSpec) -> Result<Partition> {
    if !u.is_nilpotent(f) {
        return Err(Error::Precondition("matrix is not nilpotent".into()));
    }
    let n = u.rows;
    let mut ranks = vec![n];
    let mut p = Matrix::identity(n);
    while *ranks.last().unwrap() > 0 {
        p = p.mul(f, u);
        ranks.push(p.rank(f));
    }
    // number of blocks of size >= k is r_{k-1} - r_k
    let cols: Vec<u32> = ranks.windows(2).map(|w| (w[0] - w[1]) as u32).collect();
    Ok(Partition::new(cols).conjugate())
}

#[derive(Clone, Debug, Serialize)]
pub struct NilOrbit {
    pub label: PartitionPair,
    pub jordan_type: Partition,
    pub tag: Tag,
    pub orbit_size: u64,
    pub in_sigma: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct NilOrbitReport {
    pub n: u32,
    pub q: u64,
    pub n_orbits: usize,
    pub n_bipartitions: usize,
    pub n_indecomposable: usize,
    pub sigma_size: usize,
    pub orbits: Vec<NilOrbit>,
    pub pass: bool,
}

/// Orbits of `GL_n(F_q)` on `Nil_n × F_q^n`, each matched to its pair label.
pub fn classify_nil_orbits(n: u32, f: &Arc<FieldSpec>, budget: &Budget) -> Result<NilOrbitReport> {
    let cm = Arc::new(catalog::calogero_moser());
    let dim = DimensionVector(vec![n, 1]);
    let classes = iso_classes(&cm, &dim, f, budget)?;
    let mut by_index: BTreeMap<u64, PartitionPair> = BTreeMap::new();
    for pair in bipartitions(n) {
        let (u, v) = build_orbit_rep(&pair, f);
        by_index.insert(canonical_index(&as_cm_rep(&u, &v, f)?, budget)?, pair);
    }
    let mut orbits = Vec::new();
    let mut labelled = 0usize;
    let mut pass = true;
    for c in &classes {
        let u = c.representative.mat("x");
        if !u.is_nilpotent(f) {
            continue;
        }
        let idx = canonical_index(&c.representative, budget)?;
        let Some(label) = by_index.get(&idx).cloned() else {
            pass = false;
            continue;
        };
        labelled += 1;
        let jt = jordan_type(u, f)?;
        let in_sigma = label.in_sigma();
        pass &= jt == label.nu();
        pass &= match c.tag {
            Tag::AbsIndec => in_sigma,
            Tag::Decomposable => !in_sigma,
            _ => false,
        };
        orbits.push(NilOrbit {
            label,
            jordan_type: jt,
            tag: c.tag,
            orbit_size: c.orbit_size,
            in_sigma,
        });
    }
    let n_bip = by_index.len();
    let sigma_size = sigma_set(n).len();
    let n_indec = orbits.iter().filter(|o| o.tag == Tag::AbsIndec).count();
    pass &= orbits.len() == n_bip && labelled == n_bip && n_indec == sigma_size;
    Ok(NilOrbitReport {
        n,
        q: f.order() as u64,
        n_orbits: orbits.len(),
        n_bipartitions: n_bip,
        n_indecomposable: n_indec,
        sigma_size,
        orbits,
        pass,
    })
}

fn decode_into(mut idx: u64, q: u64, out: &mut [Scalar]) {
    for s in out.iter_mut().rev() {
        *s = Scalar((idx % q) as u16);
        idx /= q;
    }
}

/// Does `[b1, b2] + v w = Id` hold?
fn m0_equation(f: &FieldSpec, n: usize, b1: &[Scalar], b2: &[Scalar], v: &[Scalar], w: &[Scalar], t1: &mut [Scalar], t2: &mut [Scalar], t3: &mut [Scalar]) -> bool {
    mul_into(f, b1, b2, n, n, n, t1);
    mul_into(f, b2, b1, n, n, n, t2);
    mul_into(f, v, w, n, 1, n, t3);
    (0..n * n).all(|k| {
        let s = f.add(f.sub(t1[k], t2[k]), t3[k]);
        s == if k % (n + 1) == 0 { Scalar::ONE } else { Scalar::ZERO }
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ComponentCells {
    pub label: PartitionPair,
    /// Solutions `(B_2, w)` over the orbit representative.
    pub fiber_points: u64,
    pub stabilizer: u64,
    pub cells: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct M0Report {
    pub n: u32,
    pub q: u64,
    pub n_points: u64,
    pub gl_order: u64,
    pub cells: String,
    pub expected: String,
    /// Whether `(1, −n)` avoids every proper sub-dimension vector over `F_q`.
    pub generic: bool,
    pub free: bool,
    pub witness: Option<Vec<u16>>,
    pub components: Vec<ComponentCells>,
    pub pass: bool,
}

/// Brute-force count of `{(B_1, B_2, v, w) : B_1 nilpotent, [B_1, B_2] + v w = Id}`.
pub fn m0_count(n: u32, f: &Arc<FieldSpec>, budget: &Budget) -> Result<M0Report> {
    let nn = n as usize;
    let q = f.order() as u64;
    let square = (nn * nn) as u32;
    let all_b1 = (q as u128).pow(square);
    let rest = (q as u128).pow(square + 2 * n);
    if all_b1 > budget.ops {
        return Err(Error::BudgetExceeded { what: "nilpotent scan".into(), needed: all_b1, cap: budget.ops });
    }
    let nil: Vec<Vec<Scalar>> = (0..all_b1 as u64)
        .into_par_iter()
        .filter_map(|idx| {
            let mut d = vec![Scalar::ZERO; nn * nn];
            decode_into(idx, q, &mut d);
            Matrix::from_vec(nn, nn, d.clone()).is_nilpotent(f).then_some(d)
        })
        .collect();
    let needed = nil.len() as u128 * rest;
    if needed > budget.ops {
        return Err(Error::BudgetExceeded { what: "M_0 scan".into(), needed, cap: budget.ops });
    }

    let cmd = Arc::new(double_quiver(&catalog::calogero_moser())?);
    let dim = DimensionVector(vec![n, 1]);
    let space = RepSpace::new(&cmd, f, &dim)?;
    let group = ProjectiveGroup::new(f, &dim)?;
    let arrow = |id: &str| cmd.arrow_index(id).expect("CM arrow");
    let offs = [arrow("x"), arrow("v"), arrow("x*"), arrow("v*")].map(|a| space.shape(a).2);
    let rest = rest as u64;

    let (n_points, witness) = nil
        .par_iter()
        .map(|b1| {
            let mut cur = vec![Scalar::ZERO; nn * nn + 2 * nn];
            let (mut t1, mut t2, mut t3) = (vec![Scalar::ZERO; nn * nn], vec![Scalar::ZERO; nn * nn], vec![Scalar::ZERO; nn * nn]);
            let mut entries = vec![Scalar::ZERO; space.entry_len()];
            let mut hits = 0u64;
            let mut witness: Option<Vec<u16>> = None;
            for idx in 0..rest {
                decode_into(idx, q, &mut cur);
                let (b2, vw) = cur.split_at(nn * nn);
                let (v, w) = vw.split_at(nn);
                if m0_equation(f, nn, b1, b2, v, w, &mut t1, &mut t2, &mut t3) {
                    hits += 1;
                    if witness.is_none() {
                        entries[offs[0]..offs[0] + nn * nn].copy_from_slice(b1);
                        entries[offs[1]..offs[1] + nn].copy_from_slice(v);
                        entries[offs[2]..offs[2] + nn * nn].copy_from_slice(b2);
                        entries[offs[3]..offs[3] + nn].copy_from_slice(w);
                        if space.stabilizer_size(&group, &entries) > 1 {
                            witness = Some(entries.iter().map(|s| s.0).collect());
                        }
                    }
                }
            }
            (hits, witness)
        })
        .reduce(|| (0, None), |a, b| (a.0 + b.0, a.1.into_iter().chain(b.1).min()));

    let gl = gl_order(&dim, q).to_u64().unwrap_or(u64::MAX) / (q - 1);
    let cells = BigRational::new(n_points.into(), gl.into());
    let expected = BigRational::from_integer((partition_count(nn) * BigUint::from(q).pow(n)).into());

    let gln = general_linear_group(f, nn);
    let mut components = Vec::new();
    let mut comp_total = BigRational::zero();
    let mut comps_ok = true;
    for pair in bipartitions(n) {
        let (u, v) = build_orbit_rep(&pair, f);
        let stab = gln
            .iter()
            .filter(|g| g.mul(f, &u) == u.mul(f, g) && g.mul(f, &v) == v)
            .count() as u64;
        let sub = (q as u128).pow(square + n) as u64;
        let mut cur = vec![Scalar::ZERO; nn * nn + nn];
        let (mut t1, mut t2, mut t3) = (vec![Scalar::ZERO; nn * nn], vec![Scalar::ZERO; nn * nn], vec![Scalar::ZERO; nn * nn]);
        let mut fib = 0u64;
        for idx in 0..sub {
            decode_into(idx, q, &mut cur);
            let (b2, w) = cur.split_at(nn * nn);
            fib += m0_equation(f, nn, &u.data, b2, &v.data, w, &mut t1, &mut t2, &mut t3) as u64;
        }
        let c = BigRational::new(fib.into(), stab.into());
        let want = if pair.in_sigma() {
            BigRational::from_integer(BigUint::from(q).pow(n).into())
        } else {
            BigRational::zero()
        };
        comps_ok &= c == want;
        comp_total += &c;
        components.push(ComponentCells {
            label: pair,
            fiber_points: fib,
            stabilizer: stab,
            cells: crate::cyclo::rat_string(&c),
        });
    }
    let eta = [Scalar::ONE, f.neg(f.from_int(n as i64))];
    let generic = scalar_generic(f, &eta, &dim);
    let free = witness.is_none();
    let pass = free && cells == expected && comps_ok && comp_total == cells;
    Ok(M0Report {
        n,
        q,
        n_points,
        gl_order: gl,
        cells: crate::cyclo::rat_string(&cells),
        expected: crate::cyclo::rat_string(&expected),
        generic,
        free,
        witness,
        components,
        pass,
    })
}

/// A string with a marked slot: `tail` slots before the mark, `head` after.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Snake {
    pub tail: u32,
    pub head: u32,
}

impl Snake {
    pub fn len(&self) -> u32 {
        self.tail + self.head + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Cycle vertex of each slot, from the tail end.
    pub fn colors(&self, n: usize) -> impl Iterator<Item = usize> + '_ {
        let t = self.tail as i64;
        (-t..=self.head as i64).map(move |k| k.rem_euclid(n as i64) as usize)
    }

    /// Does `self` lie strictly inside `other` once marks are aligned?
    pub fn inside(&self, other: &Snake) -> bool {
        self.tail < other.tail && self.head < other.head
    }
}

/// Snakes ordered from the outermost in.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct SnakeCollection(pub Vec<Snake>);

impl SnakeCollection {
    pub fn is_nested(&self) -> bool {
        self.0.windows(2).all(|w| w[1].inside(&w[0]))
    }

    pub fn color_counts(&self, n: usize) -> Vec<u32> {
        let mut out = vec![0u32; n];
        for s in &self.0 {
            for c in s.colors(n) {
                out[c] += 1;
            }
        }
        out
    }

    /// Bend each snake at its mark into a hook and stack the hooks.
    pub fn bend(&self) -> Result<Partition> {
        let heads: Vec<u32> = self.0.iter().map(|s| s.head).collect();
        let tails: Vec<u32> = self.0.iter().map(|s| s.tail).collect();
        Partition::from_frobenius(&heads, &tails)
    }

    /// The representation of the framed cycle: arrows move each slot one
    /// step toward the head, the framing vector is the sum of the marks.
    pub fn to_rep(&self, n: usize, f: &Arc<FieldSpec>) -> Result<Representation> {
        let quiver = Arc::new(catalog::cyclic_framed(n));
        let counts = self.color_counts(n);
        let mut dims = vec![1u32];
        dims.extend(&counts);
        // slot (snake, offset) -> index within its vertex
        let mut slot: BTreeMap<(usize, i64), usize> = BTreeMap::new();
        let mut fill = vec![0usize; n];
        for (k, s) in self.0.iter().enumerate() {
            for (off, c) in (-(s.tail as i64)..=s.head as i64).zip(s.colors(n)) {
                slot.insert((k, off), fill[c]);
                fill[c] += 1;
            }
        }
        let color = |off: i64| off.rem_euclid(n as i64) as usize;
        let mut mats = Vec::new();
        for a in &quiver.arrows {
            let (s, t) = (a.source, a.target);
            let mut m = Matrix::zeros(dims[t] as usize, dims[s] as usize);
            if a.id == "i" {
                for k in 0..self.0.len() {
                    m.set(slot[&(k, 0)], 0, Scalar::ONE);
                }
            } else {
                let from = s - 1;
                for (&(k, off), &row) in &slot {
                    if color(off) == from && off < self.0[k].head as i64 {
                        m.set(slot[&(k, off + 1)], row, Scalar::ONE);
                    }
                }
            }
            mats.push(m);
        }
        Representation::new(quiver, Arc::clone(f), DimensionVector(dims), mats)
    }
}

/// Diagrams whose boxes of color `(col − row) mod n` number `v_i`.
pub fn colored_diagrams(n: usize, v: &[u32]) -> Vec<Partition> {
    Partition::all(v.iter().sum())
        .into_iter()
        .filter(|p| p.color_counts(n) == v)
        .collect()
}

/// Strictly nested snake collections with `v_i` slots on cycle vertex `i`.
pub fn snake_collections(n: usize, v: &[u32]) -> Vec<SnakeCollection> {
    let total: u32 = v.iter().sum();
    let mut out = Vec::new();
    fn rec(n: usize, v: &[u32], left: u32, bound: Option<Snake>, cur: &mut Vec<Snake>, out: &mut Vec<SnakeCollection>) {
        let c = SnakeCollection(cur.clone());
        if left == 0 {
            if c.color_counts(n) == v {
                out.push(c);
            }
            return;
        }
        let (tmax, hmax) = match bound {
            Some(b) => (b.tail as i64 - 1, b.head as i64 - 1),
            None => (left as i64 - 1, left as i64 - 1),
        };
        for tail in 0..=tmax.max(-1) {
            for head in 0..=hmax.max(-1) {
                let s = Snake { tail: tail as u32, head: head as u32 };
                if s.len() > left {
                    continue;
                }
                cur.push(s);
                if SnakeCollection(cur.clone()).color_counts(n).iter().zip(v).all(|(a, b)| a <= b) {
                    rec(n, v, left - s.len(), Some(s), cur, out);
                }
                cur.pop();
            }
        }
    }
    rec(n, v, total, None, &mut Vec::new(), &mut out);
    out.sort();
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct SnakeRow {
    pub snakes: SnakeCollection,
    pub diagram: Partition,
}

#[derive(Clone, Debug, Serialize)]
pub struct SnakeReport {
    pub cycle_len: usize,
    pub v: Vec<u32>,
    pub diagrams: Vec<Partition>,
    pub table: Vec<SnakeRow>,
    pub pass: bool,
}

/// Snake collections against colored diagrams, with framing at vertex 0.
pub fn snakes(n: usize, v: &[u32]) -> Result<SnakeReport> {
    if n == 0 || v.len() != n {
        return Err(Error::Shape(format!("need {n} cycle dimensions, got {}", v.len())));
    }
    let diagrams = colored_diagrams(n, v);
    let collections = snake_collections(n, v);
    let mut images = BTreeSet::new();
    let mut pass = collections.len() == diagrams.len();
    let mut table = Vec::new();
    for c in collections {
        let d = c.bend()?;
        pass &= c.is_nested() && d.color_counts(n) == v && images.insert(d.clone());
        table.push(SnakeRow { snakes: c, diagram: d });
    }
    pass &= images.iter().eq(diagrams.iter().collect::<BTreeSet<_>>());
    Ok(SnakeReport {
        cycle_len: n,
        v: v.to_vec(),
        diagrams,
        table,
        pass,
    })
}
