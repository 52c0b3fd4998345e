//! Brute-force oracles over `Rep_v(Q)(F_q)`: orbit sweeps, Burnside counts,
//! groupoid cardinalities and potential-twisted exponential sums.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use bitvec::prelude::*;
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::cyclo::{rat_string, parse_rat, CycloInt, CycloRat};
use crate::endo::{classify, Tag};
use crate::error::{Error, Result};
use crate::field::{FieldSpec, FieldTower, Scalar};
use crate::matrix::{general_linear_group, mul_into, Matrix};
use crate::quiver::{evaluate_potential, DimensionVector, Potential, Quiver, Representation};

/// Largest point set the orbit sweep will hold in its visited bitmap.
pub const MAX_POINTS: u64 = 1 << 32;
/// Largest group (modulo scalars) that is materialized.
pub const MAX_GROUP: u64 = 1 << 24;

/// Work caps for brute-force jobs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    /// Elementary group-element applications.
    pub ops: u128,
    /// Largest `q^dim End(x)` enumerated by the locality test.
    pub end_cap: u128,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            ops: 1 << 34,
            end_cap: 1 << 22,
        }
    }
}

/// `q^{Σ_a v_{s(a)} v_{t(a)}}`.
pub fn count_points(q: &Quiver, v: &DimensionVector, f: &FieldSpec) -> BigUint {
    BigUint::from(f.order()).pow(q.rep_dim(v) as u32)
}

/// `Π_i Π_{j<v_i} (q^{v_i} − q^j)`.
pub fn gl_order(v: &DimensionVector, q: u64) -> BigUint {
    let q = BigUint::from(q);
    let mut out = BigUint::one();
    for &n in &v.0 {
        let qn = q.pow(n);
        for j in 0..n {
            out *= &qn - q.pow(j);
        }
    }
    out
}

/// Coordinates on `Rep_v(Q)(F_q)`: entries in arrow order, each matrix
/// row-major, read as a big-endian base-`q` numeral.
#[derive(Clone, Debug)]
pub struct RepSpace {
    pub quiver: Arc<Quiver>,
    pub field: Arc<FieldSpec>,
    pub dim: DimensionVector,
    /// `(rows, cols, offset)` per arrow.
    shapes: Vec<(usize, usize, usize)>,
    len: usize,
    count: u64,
}

impl RepSpace {
    pub fn new(quiver: &Arc<Quiver>, field: &Arc<FieldSpec>, dim: &DimensionVector) -> Result<RepSpace> {
        if dim.rank() != quiver.num_vertices() {
            return Err(Error::Shape(format!(
                "dimension vector has {} entries for {} vertices",
                dim.rank(),
                quiver.num_vertices()
            )));
        }
        let mut shapes = Vec::new();
        let mut off = 0;
        for a in &quiver.arrows {
            let (r, c) = (dim.0[a.target] as usize, dim.0[a.source] as usize);
            shapes.push((r, c, off));
            off += r * c;
        }
        let total = count_points(quiver, dim, field);
        let count = u64::try_from(&total)
            .ok()
            .filter(|&c| c <= MAX_POINTS)
            .ok_or_else(|| Error::BudgetExceeded {
                what: "representation space".into(),
                needed: u128::try_from(&total).unwrap_or(u128::MAX),
                cap: MAX_POINTS as u128,
            })?;
        Ok(RepSpace {
            quiver: Arc::clone(quiver),
            field: Arc::clone(field),
            dim: dim.clone(),
            shapes,
            len: off,
            count,
        })
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn entry_len(&self) -> usize {
        self.len
    }

    pub fn decode(&self, mut idx: u64, out: &mut [Scalar]) {
        let q = self.field.order() as u64;
        for slot in out.iter_mut().rev() {
            *slot = Scalar((idx % q) as u16);
            idx /= q;
        }
    }

    pub fn encode(&self, entries: &[Scalar]) -> u64 {
        let q = self.field.order() as u64;
        entries.iter().fold(0, |acc, s| acc * q + s.0 as u64)
    }

    pub fn rep_at(&self, idx: u64) -> Representation {
        let mut e = vec![Scalar::ZERO; self.len];
        self.decode(idx, &mut e);
        self.rep_from_entries(&e)
    }

    pub fn rep_from_entries(&self, e: &[Scalar]) -> Representation {
        let mats = self
            .shapes
            .iter()
            .map(|&(r, c, off)| Matrix::from_vec(r, c, e[off..off + r * c].to_vec()))
            .collect();
        Representation {
            quiver: Arc::clone(&self.quiver),
            field: Arc::clone(&self.field),
            dim: self.dim.clone(),
            mats,
        }
    }

    /// `(rows, cols, offset)` of an arrow's block in the entry vector.
    pub fn shape(&self, arrow: usize) -> (usize, usize, usize) {
        self.shapes[arrow]
    }

    /// Number of projective group representatives fixing `x`.
    pub fn stabilizer_size(&self, group: &ProjectiveGroup, x: &[Scalar]) -> u64 {
        let mut lhs = vec![Scalar::ZERO; self.len.max(1)];
        let mut rhs = vec![Scalar::ZERO; self.len.max(1)];
        group.elems.iter().filter(|g| self.fixes(g, x, &mut lhs, &mut rhs)).count() as u64
    }

    pub fn index_of(&self, x: &Representation) -> u64 {
        let e: Vec<Scalar> = x.mats.iter().flat_map(|m| m.data.iter().copied()).collect();
        self.encode(&e)
    }

    /// `out_a = g_{t(a)} x_a g_{s(a)}^{-1}` on raw entry slices.
    fn act(&self, g: &GroupElem, x: &[Scalar], out: &mut [Scalar], tmp: &mut [Scalar]) {
        let f = &self.field;
        for (a, &(r, c, off)) in self.quiver.arrows.iter().zip(&self.shapes) {
            if r * c == 0 {
                continue;
            }
            mul_into(f, &g.g[a.target], &x[off..off + r * c], r, r, c, &mut tmp[..r * c]);
            mul_into(f, &tmp[..r * c], &g.ginv[a.source], r, c, c, &mut out[off..off + r * c]);
        }
    }

    /// Does `g` fix `x`, i.e. `g_{t(a)} x_a = x_a g_{s(a)}` for all arrows?
    fn fixes(&self, g: &GroupElem, x: &[Scalar], lhs: &mut [Scalar], rhs: &mut [Scalar]) -> bool {
        let f = &self.field;
        for (a, &(r, c, off)) in self.quiver.arrows.iter().zip(&self.shapes) {
            if r * c == 0 {
                continue;
            }
            let xa = &x[off..off + r * c];
            mul_into(f, &g.g[a.target], xa, r, r, c, &mut lhs[..r * c]);
            mul_into(f, xa, &g.g[a.source], r, c, c, &mut rhs[..r * c]);
            if lhs[..r * c] != rhs[..r * c] {
                return false;
            }
        }
        true
    }
}

#[derive(Clone, Debug)]
struct GroupElem {
    g: Vec<Vec<Scalar>>,
    ginv: Vec<Vec<Scalar>>,
}

/// Representatives of `GL_v / F_q^×`, plus the scalar factor restoring `GL_v`.
#[derive(Clone, Debug)]
pub struct ProjectiveGroup {
    elems: Vec<GroupElem>,
    scalar_factor: u64,
}

impl ProjectiveGroup {
    /// Tuples whose first nonzero-size block has leading nonzero entry 1.
    pub fn new(f: &FieldSpec, v: &DimensionVector) -> Result<ProjectiveGroup> {
        let q = f.order() as u64;
        let first = v.0.iter().position(|&n| n > 0);
        let scalar_factor = if first.is_some() { q - 1 } else { 1 };
        let size = gl_order(v, q) / BigUint::from(scalar_factor);
        if size > BigUint::from(MAX_GROUP) {
            return Err(Error::BudgetExceeded {
                what: "group size".into(),
                needed: u128::try_from(&size).unwrap_or(u128::MAX),
                cap: MAX_GROUP as u128,
            });
        }
        let mut factors: Vec<Vec<(Vec<Scalar>, Vec<Scalar>)>> = Vec::new();
        for (i, &n) in v.0.iter().enumerate() {
            let gl = general_linear_group(f, n as usize);
            let keep = gl.into_iter().filter(|m| {
                Some(i) != first || m.data.iter().find(|s| !s.is_zero()) == Some(&Scalar::ONE)
            });
            factors.push(keep.map(|m| {
                let inv = m.inverse(f).expect("invertible");
                (m.data, inv.data)
            })
            .collect());
        }
        let mut elems = vec![GroupElem {
            g: Vec::new(),
            ginv: Vec::new(),
        }];
        for fac in &factors {
            let mut next = Vec::with_capacity(elems.len() * fac.len());
            for e in &elems {
                for (m, mi) in fac {
                    let mut g = e.clone();
                    g.g.push(m.clone());
                    g.ginv.push(mi.clone());
                    next.push(g);
                }
            }
            elems = next;
        }
        Ok(ProjectiveGroup { elems, scalar_factor })
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn scalar_factor(&self) -> u64 {
        self.scalar_factor
    }

    /// `#GL_v(F_q)`.
    pub fn gl_order(&self) -> u64 {
        self.elems.len() as u64 * self.scalar_factor
    }

    /// Block matrices of the `i`-th representative.
    pub fn element(&self, i: usize) -> Vec<Matrix> {
        self.elems[i]
            .g
            .iter()
            .map(|d| {
                let n = (d.len() as f64).sqrt() as usize;
                Matrix::from_vec(n, n, d.clone())
            })
            .collect()
    }
}

/// One `GL_v`-orbit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassReport {
    /// Least orbit element under the point index.
    pub representative: Representation,
    pub orbit_size: u64,
    pub aut_order: u64,
    pub tag: Tag,
}

/// Orbits without classification tags: `(representative index, orbit size, aut order)`.
pub fn orbit_sweep(space: &RepSpace, group: &ProjectiveGroup, budget: &Budget) -> Result<Vec<(u64, u64, u64)>> {
    let n = space.count();
    if n as u128 > budget.ops {
        return Err(Error::BudgetExceeded {
            what: "orbit sweep".into(),
            needed: n as u128,
            cap: budget.ops,
        });
    }
    let mut visited = bitvec![u64, Lsb0; 0; n as usize];
    let mut out = Vec::new();
    let mut ops: u128 = 0;
    let len = space.entry_len();
    let mut x = vec![Scalar::ZERO; len];
    let mut y = vec![Scalar::ZERO; len];
    let mut tmp = vec![Scalar::ZERO; len.max(1)];
    let mut start = 0usize;
    let parallel = group.len() >= 256;
    while let Some(off) = visited[start..].first_zero() {
        let i = start + off;
        start = i + 1;
        ops += group.len() as u128;
        if ops > budget.ops {
            return Err(Error::BudgetExceeded {
                what: "orbit sweep".into(),
                needed: ops,
                cap: budget.ops,
            });
        }
        space.decode(i as u64, &mut x);
        let images: Vec<u64> = if parallel {
            group
                .elems
                .par_iter()
                .map_init(
                    || (vec![Scalar::ZERO; len], vec![Scalar::ZERO; len.max(1)]),
                    |(y, tmp), g| {
                        space.act(g, &x, y, tmp);
                        space.encode(y)
                    },
                )
                .collect()
        } else {
            group
                .elems
                .iter()
                .map(|g| {
                    space.act(g, &x, &mut y, &mut tmp);
                    space.encode(&y)
                })
                .collect()
        };
        let mut stab = 0u64;
        let mut orbit = 0u64;
        for j in images {
            if j == i as u64 {
                stab += 1;
            }
            if !visited[j as usize] {
                visited.set(j as usize, true);
                orbit += 1;
            }
        }
        debug_assert_eq!(orbit * stab, group.len() as u64);
        out.push((i as u64, orbit, stab * group.scalar_factor()));
    }
    Ok(out)
}

/// One report per `GL_v`-orbit, each tagged by the endomorphism-algebra test.
pub fn iso_classes(q: &Arc<Quiver>, v: &DimensionVector, f: &Arc<FieldSpec>, budget: &Budget) -> Result<Vec<ClassReport>> {
    let space = RepSpace::new(q, f, v)?;
    let group = ProjectiveGroup::new(f, v)?;
    let orbits = orbit_sweep(&space, &group, budget)?;
    let reports = orbits
        .into_par_iter()
        .map(|(idx, orbit_size, aut_order)| {
            let representative = space.rep_at(idx);
            let tag = classify(&representative, budget.end_cap)?;
            Ok(ClassReport {
                representative,
                orbit_size,
                aut_order,
                tag,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(reports)
}

/// Least point index in the orbit of `x`.
pub fn canonical_index(x: &Representation, budget: &Budget) -> Result<u64> {
    let space = RepSpace::new(&x.quiver, &x.field, &x.dim)?;
    let group = ProjectiveGroup::new(&x.field, &x.dim)?;
    if group.len() as u128 > budget.ops {
        return Err(Error::BudgetExceeded {
            what: "canonical form".into(),
            needed: group.len() as u128,
            cap: budget.ops,
        });
    }
    let len = space.entry_len();
    let e: Vec<Scalar> = x.mats.iter().flat_map(|m| m.data.iter().copied()).collect();
    let mut y = vec![Scalar::ZERO; len];
    let mut tmp = vec![Scalar::ZERO; len.max(1)];
    Ok(group
        .elems
        .iter()
        .map(|g| {
            space.act(g, &e, &mut y, &mut tmp);
            space.encode(&y)
        })
        .min()
        .unwrap_or(0))
}

/// `#{(x, g) : g·x = x} / #GL_v`, by the fixed-point double loop.
pub fn burnside_count(q: &Arc<Quiver>, v: &DimensionVector, f: &Arc<FieldSpec>, budget: &Budget) -> Result<BigUint> {
    let space = RepSpace::new(q, f, v)?;
    let group = ProjectiveGroup::new(f, v)?;
    let needed = space.count() as u128 * group.len() as u128;
    if needed > budget.ops {
        return Err(Error::BudgetExceeded {
            what: "fixed-point double loop".into(),
            needed,
            cap: budget.ops,
        });
    }
    let len = space.entry_len();
    let n = space.count();
    // scalars fix everything, so summing over GL/F^× and dividing by its order is exact
    let total: u128 = group
        .elems
        .par_iter()
        .map(|g| {
            let mut x = vec![Scalar::ZERO; len];
            let mut lhs = vec![Scalar::ZERO; len.max(1)];
            let mut rhs = vec![Scalar::ZERO; len.max(1)];
            let mut fixed = 0u128;
            for idx in 0..n {
                space.decode(idx, &mut x);
                if space.fixes(g, &x, &mut lhs, &mut rhs) {
                    fixed += 1;
                }
            }
            fixed
        })
        .sum();
    let order = group.len() as u128;
    if total % order != 0 {
        return Err(Error::Invalid(format!("fixed-point total {total} not divisible by {order}")));
    }
    Ok(BigUint::from(total / order))
}

/// `#Rep_v / #GL_v` as an exact rational.
pub fn stacky_count(q: &Quiver, v: &DimensionVector, f: &FieldSpec) -> BigRational {
    let num = BigInt::from(count_points(q, v, f));
    let den = BigInt::from(gl_order(v, f.order() as u64));
    BigRational::new(num, den)
}

/// `Σ 1/#Aut(x)` over the given classes.
pub fn stacky_from_classes(classes: &[ClassReport]) -> BigRational {
    classes.iter().fold(BigRational::zero(), |acc, c| {
        acc + BigRational::new(BigInt::one(), BigInt::from(c.aut_order))
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SumMode {
    Plain,
    Stacky,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExpSum {
    Plain(CycloInt),
    Stacky(CycloRat),
}

impl ExpSum {
    pub fn to_rat(&self) -> CycloRat {
        match self {
            ExpSum::Plain(c) => c.to_rat(),
            ExpSum::Stacky(c) => c.clone(),
        }
    }
}

fn class_sum<'a>(f: &FieldSpec, classes: impl Iterator<Item = &'a ClassReport>, phi: &Potential, mode: SumMode) -> Result<ExpSum> {
    let p = f.characteristic();
    match mode {
        SumMode::Plain => {
            let mut hist = vec![BigInt::zero(); p as usize];
            for c in classes {
                let t = f.abs_trace(evaluate_potential(&c.representative, phi)?);
                hist[t as usize] += 1;
            }
            Ok(ExpSum::Plain(CycloInt::from_histogram(p, &hist)))
        }
        SumMode::Stacky => {
            let mut hist = vec![BigRational::zero(); p as usize];
            for c in classes {
                let t = f.abs_trace(evaluate_potential(&c.representative, phi)?);
                hist[t as usize] += BigRational::new(BigInt::one(), BigInt::from(c.aut_order));
            }
            Ok(ExpSum::Stacky(CycloRat::from_histogram(p, &hist)))
        }
    }
}

/// `Σ_{[x]} ψ(φ(x))` or `Σ_{[x]} ψ(φ(x))/#Aut(x)`.
pub fn exp_sum(
    q: &Arc<Quiver>,
    v: &DimensionVector,
    f: &Arc<FieldSpec>,
    phi: &Potential,
    mode: SumMode,
    budget: &Budget,
) -> Result<ExpSum> {
    let classes = iso_classes(q, v, f, budget)?;
    class_sum(f, classes.iter(), phi, mode)
}

/// All enumerated data for one `(Q, v, F_q)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountBundle {
    pub quiver: Arc<Quiver>,
    pub field: Arc<FieldSpec>,
    pub v: DimensionVector,
    pub n_points: u64,
    pub n_iso: u64,
    pub stacky: BigRational,
    pub n_ai: u64,
    pub n_unclassified: u64,
    pub classes: Vec<ClassReport>,
}

impl CountBundle {
    pub fn compute(q: &Arc<Quiver>, v: &DimensionVector, f: &Arc<FieldSpec>, budget: &Budget) -> Result<CountBundle> {
        let classes = iso_classes(q, v, f, budget)?;
        Ok(CountBundle::from_classes(q, v, f, classes))
    }

    fn from_classes(q: &Arc<Quiver>, v: &DimensionVector, f: &Arc<FieldSpec>, classes: Vec<ClassReport>) -> CountBundle {
        let n_points = classes.iter().map(|c| c.orbit_size).sum();
        let n_ai = classes.iter().filter(|c| c.tag == Tag::AbsIndec).count() as u64;
        let n_unclassified = classes.iter().filter(|c| c.tag == Tag::Unclassified).count() as u64;
        CountBundle {
            quiver: Arc::clone(q),
            field: Arc::clone(f),
            v: v.clone(),
            n_points,
            n_iso: classes.len() as u64,
            stacky: stacky_from_classes(&classes),
            n_ai,
            n_unclassified,
            classes,
        }
    }

    pub fn q(&self) -> u64 {
        self.field.order() as u64
    }

    pub fn exp_sum(&self, phi: &Potential, mode: SumMode) -> Result<ExpSum> {
        class_sum(&self.field, self.classes.iter(), phi, mode)
    }

    /// `Σ ψ(φ(x))` over the absolutely indecomposable classes.
    pub fn ai_exp_sum(&self, phi: &Potential) -> Result<CycloInt> {
        match class_sum(&self.field, self.classes.iter().filter(|c| c.tag == Tag::AbsIndec), phi, SumMode::Plain)? {
            ExpSum::Plain(c) => Ok(c),
            ExpSum::Stacky(_) => unreachable!(),
        }
    }

    pub fn to_record(&self) -> BundleRecord {
        BundleRecord {
            quiver_hash: self.quiver.content_hash(),
            q: self.q(),
            p: self.field.characteristic(),
            k: self.field.degree(),
            v: self.v.0.clone(),
            n_points: self.n_points,
            n_iso: self.n_iso,
            stacky: rat_string(&self.stacky),
            n_ai: self.n_ai,
            n_unclassified: self.n_unclassified,
            classes: self
                .classes
                .iter()
                .map(|c| ClassRecord {
                    mats: c.representative.mats.iter().map(Matrix::indices).collect(),
                    orbit_size: c.orbit_size,
                    aut_order: c.aut_order,
                    tag: c.tag,
                })
                .collect(),
        }
    }

    pub fn from_record(q: &Arc<Quiver>, f: &Arc<FieldSpec>, rec: &BundleRecord) -> Result<CountBundle> {
        if rec.quiver_hash != q.content_hash() || rec.q != f.order() as u64 {
            return Err(Error::Invalid("cached bundle does not match the job".into()));
        }
        let v = DimensionVector(rec.v.clone());
        let classes = rec
            .classes
            .iter()
            .map(|c| {
                let mats = q
                    .arrows
                    .iter()
                    .zip(&c.mats)
                    .map(|(a, m)| {
                        Matrix::from_vec(
                            v.0[a.target] as usize,
                            v.0[a.source] as usize,
                            m.iter().map(|&s| Scalar(s)).collect(),
                        )
                    })
                    .collect();
                Ok(ClassReport {
                    representative: Representation::new(Arc::clone(q), Arc::clone(f), v.clone(), mats)?,
                    orbit_size: c.orbit_size,
                    aut_order: c.aut_order,
                    tag: c.tag,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let b = CountBundle::from_classes(q, &v, f, classes);
        if rat_string(&b.stacky) != rec.stacky || b.n_iso != rec.n_iso {
            return Err(Error::Invalid("cached bundle is inconsistent".into()));
        }
        Ok(b)
    }
}

impl Serialize for CountBundle {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_record().serialize(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassRecord {
    pub mats: Vec<Vec<u16>>,
    pub orbit_size: u64,
    pub aut_order: u64,
    pub tag: Tag,
}

/// Wire form of a [`CountBundle`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BundleRecord {
    pub quiver_hash: String,
    pub q: u64,
    pub p: u32,
    pub k: u32,
    pub v: Vec<u32>,
    pub n_points: u64,
    pub n_iso: u64,
    pub stacky: String,
    pub n_ai: u64,
    pub n_unclassified: u64,
    pub classes: Vec<ClassRecord>,
}

impl BundleRecord {
    pub fn stacky_rat(&self) -> Option<BigRational> {
        parse_rat(&self.stacky)
    }
}

/// The full bundle over `F_{q^n}`.
pub fn counts_over_extension(
    q: &Arc<Quiver>,
    v: &DimensionVector,
    base: &Arc<FieldSpec>,
    n: u32,
    budget: &Budget,
) -> Result<CountBundle> {
    let ext = if n == 1 {
        Arc::clone(base)
    } else {
        Arc::clone(FieldTower::extend(base, n)?.ext())
    };
    CountBundle::compute(q, v, &ext, budget)
}

/// On-disk memo of bundles keyed by `(quiver hash, v, field)`.
#[derive(Clone, Debug)]
pub struct BundleCache {
    dir: PathBuf,
}

impl BundleCache {
    pub fn new(dir: impl AsRef<Path>) -> BundleCache {
        BundleCache {
            dir: dir.as_ref().to_path_buf(),
        }
    }

    pub fn key(q: &Quiver, v: &DimensionVector, f: &FieldSpec) -> String {
        let mut h = Sha256::new();
        h.update(q.content_hash().as_bytes());
        h.update(format!("|{:?}|{}|{}|{:?}", v.0, f.characteristic(), f.degree(), f.modulus()).as_bytes());
        hex::encode(h.finalize())
    }

    fn path(&self, q: &Quiver, v: &DimensionVector, f: &FieldSpec) -> PathBuf {
        self.dir.join(format!("{}.json", Self::key(q, v, f)))
    }

    pub fn load(&self, q: &Arc<Quiver>, v: &DimensionVector, f: &Arc<FieldSpec>) -> Option<CountBundle> {
        let text = std::fs::read_to_string(self.path(q, v, f)).ok()?;
        let rec: BundleRecord = serde_json::from_str(&text).ok()?;
        CountBundle::from_record(q, f, &rec).ok()
    }

    pub fn store(&self, b: &CountBundle) -> std::io::Result<()> {
        std::fs::create_dir_all(&self.dir)?;
        let path = self.path(&b.quiver, &b.v, &b.field);
        let tmp = path.with_extension("tmp");
        std::fs::write(&tmp, serde_json::to_string(b).expect("bundle serializes"))?;
        std::fs::rename(tmp, path)
    }

    /// Loads or computes and stores.
    pub fn get(&self, q: &Arc<Quiver>, v: &DimensionVector, f: &Arc<FieldSpec>, budget: &Budget) -> Result<CountBundle> {
        if let Some(b) = self.load(q, v, f) {
            return Ok(b);
        }
        let b = CountBundle::compute(q, v, f, budget)?;
        // a failed write only loses the memo
        let _ = self.store(&b);
        Ok(b)
    }
}

/// Bundle source used by the identity checks: optional disk cache plus budget.
#[derive(Clone, Debug, Default)]
pub struct Counter {
    pub budget: Budget,
    pub cache: Option<BundleCache>,
}

impl Counter {
    pub fn new(budget: Budget) -> Counter {
        Counter { budget, cache: None }
    }

    pub fn with_cache(mut self, cache: Option<BundleCache>) -> Counter {
        self.cache = cache;
        self
    }

    pub fn bundle(&self, q: &Arc<Quiver>, v: &DimensionVector, f: &Arc<FieldSpec>) -> Result<CountBundle> {
        match &self.cache {
            Some(c) => c.get(q, v, f, &self.budget),
            None => CountBundle::compute(q, v, f, &self.budget),
        }
    }
}
