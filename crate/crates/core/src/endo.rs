//! Hom spaces, endomorphism algebras and the absolute-indecomposability test.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::enumerate::{canonical_index, iso_classes, Budget};
use crate::error::{Error, Result};
use crate::field::{FieldSpec, FieldTower, Scalar};
use crate::matrix::{vector_rank, Matrix};
use crate::quiver::{DimensionVector, Quiver, Representation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Tag {
    Decomposable,
    IndecNotAbs,
    AbsIndec,
    /// `q^dim End` exceeded the enumeration cap.
    Unclassified,
}

/// A morphism: one `w_i × v_i` block per vertex.
pub type Morphism = Vec<Matrix>;

fn check_compatible(x: &Representation, y: &Representation) -> Result<()> {
    if x.quiver != y.quiver {
        return Err(Error::Shape("representations of different quivers".into()));
    }
    if x.field != y.field {
        return Err(Error::FieldMismatch);
    }
    Ok(())
}

/// Basis of `{φ : φ_{t(a)} M_a = N_a φ_{s(a)} for every arrow a}`.
pub fn hom_space(x: &Representation, y: &Representation) -> Result<Vec<Morphism>> {
    check_compatible(x, y)?;
    let f = &x.field;
    let nv = x.quiver.num_vertices();
    let (dx, dy) = (&x.dim.0, &y.dim.0);
    let mut var_off = vec![0usize; nv + 1];
    for i in 0..nv {
        var_off[i + 1] = var_off[i] + (dy[i] * dx[i]) as usize;
    }
    let nvars = var_off[nv];
    if nvars == 0 {
        return Ok(Vec::new());
    }
    // variable (i, r, c) is entry (r, c) of φ_i
    let var = |i: usize, r: usize, c: usize| var_off[i] + r * dx[i] as usize + c;
    let mut rows: Vec<Vec<Scalar>> = Vec::new();
    for (a, (m, n)) in x.quiver.arrows.iter().zip(x.mats.iter().zip(&y.mats)) {
        let (s, t) = (a.source, a.target);
        let (ys_rows, xs_cols) = (dy[t] as usize, dx[s] as usize);
        for r in 0..ys_rows {
            for c in 0..xs_cols {
                let mut eq = vec![Scalar::ZERO; nvars];
                // (φ_t M)_{r,c} = Σ_k φ_t[r,k] M[k,c]
                for k in 0..dx[t] as usize {
                    let coef = m.get(k, c);
                    let slot = var(t, r, k);
                    eq[slot] = f.add(eq[slot], coef);
                }
                // (N φ_s)_{r,c} = Σ_k N[r,k] φ_s[k,c]
                for k in 0..dy[s] as usize {
                    let coef = n.get(r, k);
                    let slot = var(s, k, c);
                    eq[slot] = f.sub(eq[slot], coef);
                }
                rows.push(eq);
            }
        }
    }
    let basis = if rows.is_empty() {
        (0..nvars)
            .map(|j| {
                let mut e = vec![Scalar::ZERO; nvars];
                e[j] = Scalar::ONE;
                e
            })
            .collect()
    } else {
        let data = rows.iter().flatten().copied().collect();
        Matrix::from_vec(rows.len(), nvars, data).nullspace(f)
    };
    Ok(basis
        .into_iter()
        .map(|vec| {
            (0..nv)
                .map(|i| {
                    Matrix::from_vec(
                        dy[i] as usize,
                        dx[i] as usize,
                        vec[var_off[i]..var_off[i + 1]].to_vec(),
                    )
                })
                .collect()
        })
        .collect())
}

/// `End(x)` with an explicit basis.
#[derive(Clone, Debug)]
pub struct EndAlgebra {
    pub basis: Vec<Morphism>,
    pub dim: usize,
    pub field: Arc<FieldSpec>,
    pub vertex_dims: Vec<usize>,
}

impl EndAlgebra {
    pub fn of(x: &Representation) -> Result<EndAlgebra> {
        let basis = hom_space(x, x)?;
        Ok(EndAlgebra {
            dim: basis.len(),
            basis,
            field: Arc::clone(&x.field),
            vertex_dims: x.dim.0.iter().map(|&n| n as usize).collect(),
        })
    }

    /// `q^dim`, saturating.
    pub fn size(&self) -> u128 {
        (self.field.order() as u128).checked_pow(self.dim as u32).unwrap_or(u128::MAX)
    }

    pub fn element(&self, coords: &[Scalar]) -> Morphism {
        let f = &self.field;
        let mut out: Morphism = self.vertex_dims.iter().map(|&n| Matrix::zeros(n, n)).collect();
        for (c, b) in coords.iter().zip(&self.basis) {
            if c.is_zero() {
                continue;
            }
            for (o, blk) in out.iter_mut().zip(b) {
                *o = o.add(f, &blk.scale(f, *c));
            }
        }
        out
    }

    pub fn identity(&self) -> Morphism {
        self.vertex_dims.iter().map(|&n| Matrix::identity(n)).collect()
    }

    pub fn compose(&self, a: &Morphism, b: &Morphism) -> Morphism {
        a.iter().zip(b).map(|(x, y)| x.mul(&self.field, y)).collect()
    }

    pub fn is_unit(&self, a: &Morphism) -> bool {
        a.iter().all(|m| m.is_invertible(&self.field))
    }

    /// Coordinates of every element, by increasing index.
    fn all_coords(&self) -> impl DoubleEndedIterator<Item = Vec<Scalar>> + '_ {
        let q = self.field.order() as u64;
        let d = self.dim;
        (0..q.pow(d as u32)).map(move |mut idx| {
            let mut c = vec![Scalar::ZERO; d];
            for slot in c.iter_mut() {
                *slot = Scalar((idx % q) as u16);
                idx /= q;
            }
            c
        })
    }

    fn check_cap(&self, cap: u128) -> Result<()> {
        let size = self.size();
        if size > cap {
            return Err(Error::EndCapExceeded { size, cap });
        }
        Ok(())
    }
}

/// `(local, residue size)`; local iff the non-units form an additive group,
/// in which case the residue field has `|End| / |non-units|` elements.
pub fn is_local(e: &EndAlgebra, cap: u128) -> Result<(bool, Option<u128>)> {
    if e.vertex_dims.iter().all(|&n| n == 0) {
        return Ok((false, None));
    }
    e.check_cap(cap)?;
    let q = e.field.order() as u128;
    if e.dim == 1 {
        // spanned by the identity
        return Ok((true, Some(q)));
    }
    let mut non_units: Vec<Vec<Scalar>> = Vec::new();
    for c in e.all_coords() {
        if !e.is_unit(&e.element(&c)) {
            non_units.push(c);
        }
    }
    let r = vector_rank(&e.field, &non_units, e.dim);
    let span = q.pow(r as u32);
    if non_units.len() as u128 == span {
        Ok((true, Some(q.pow((e.dim - r) as u32))))
    } else {
        Ok((false, None))
    }
}

/// Decomposable / indecomposable-not-absolutely / absolutely indecomposable.
pub fn classify(x: &Representation, end_cap: u128) -> Result<Tag> {
    let e = EndAlgebra::of(x)?;
    match is_local(&e, end_cap) {
        Ok((false, _)) => Ok(Tag::Decomposable),
        Ok((true, Some(r))) if r == x.field.order() as u128 => Ok(Tag::AbsIndec),
        Ok((true, _)) => Ok(Tag::IndecNotAbs),
        Err(Error::EndCapExceeded { .. }) => Ok(Tag::Unclassified),
        Err(err) => Err(err),
    }
}

/// Number of absolutely indecomposable classes of dimension `v`.
pub fn count_ai(q: &Arc<Quiver>, v: &DimensionVector, f: &Arc<FieldSpec>, budget: &Budget) -> Result<u64> {
    let classes = iso_classes(q, v, f, budget)?;
    if let Some(c) = classes.iter().find(|c| c.tag == Tag::Unclassified) {
        return Err(Error::EndCapExceeded {
            size: EndAlgebra::of(&c.representative)?.size(),
            cap: budget.end_cap,
        });
    }
    Ok(classes.iter().filter(|c| c.tag == Tag::AbsIndec).count() as u64)
}

/// The subrepresentation cut out by an idempotent `e`.
fn image_of(x: &Representation, e: &Morphism) -> Result<Representation> {
    let f = &x.field;
    let bases: Vec<Matrix> = e.iter().map(|m| m.column_basis(f)).collect();
    let mats = x
        .quiver
        .arrows
        .iter()
        .zip(&x.mats)
        .map(|(a, m)| {
            let pushed = m.mul(f, &bases[a.source]);
            bases[a.target]
                .solve_left(f, &pushed)
                .ok_or_else(|| Error::Invalid("idempotent image is not a subrepresentation".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    let dim = DimensionVector(bases.iter().map(|b| b.cols as u32).collect());
    Representation::new(Arc::clone(&x.quiver), Arc::clone(f), dim, mats)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SplitOrder {
    First,
    Last,
}

/// Splits `x` by nontrivial idempotents until every piece has local `End`.
pub fn decompose(x: &Representation, order: SplitOrder, cap: u128) -> Result<Vec<Representation>> {
    if x.dim.is_zero() {
        return Ok(Vec::new());
    }
    let e = EndAlgebra::of(x)?;
    if is_local(&e, cap)?.0 {
        return Ok(vec![x.clone()]);
    }
    let id = e.identity();
    let zero = e.element(&vec![Scalar::ZERO; e.dim]);
    let is_split = |c: &Vec<Scalar>| {
        let m = e.element(c);
        m != zero && m != id && e.compose(&m, &m) == m
    };
    let found = match order {
        SplitOrder::First => e.all_coords().find(is_split),
        SplitOrder::Last => e.all_coords().rev().find(is_split),
    };
    let idem = e
        .element(&found.ok_or_else(|| Error::Invalid("non-local End without a nontrivial idempotent".into()))?);
    let comp: Morphism = id.iter().zip(&idem).map(|(i, m)| i.sub(&x.field, m)).collect();
    let mut out = decompose(&image_of(x, &idem)?, order, cap)?;
    out.extend(decompose(&image_of(x, &comp)?, order, cap)?);
    Ok(out)
}

/// Sorted `(dimension, canonical orbit index)` of the indecomposable summands.
pub fn summand_signature(x: &Representation, order: SplitOrder, budget: &Budget) -> Result<Vec<(DimensionVector, u64)>> {
    let mut sig = decompose(x, order, budget.end_cap)?
        .iter()
        .map(|s| Ok((s.dim.clone(), canonical_index(s, budget)?)))
        .collect::<Result<Vec<_>>>()?;
    sig.sort();
    Ok(sig)
}

/// The same matrices read over `F_{q^n}`.
pub fn base_change(x: &Representation, tower: &FieldTower) -> Result<Representation> {
    if tower.base().as_ref() != x.field.as_ref() {
        return Err(Error::FieldMismatch);
    }
    let mats = x
        .mats
        .iter()
        .map(|m| Matrix::from_vec(m.rows, m.cols, m.data.iter().map(|&s| tower.embed(s)).collect()))
        .collect();
    Representation::new(Arc::clone(&x.quiver), Arc::clone(tower.ext()), x.dim.clone(), mats)
}

/// `End` keeps its dimension over `F_{q^n}` and stays local with residue `q^n`.
pub fn stays_abs_indec(x: &Representation, n: u32, cap: u128) -> Result<bool> {
    let tower = FieldTower::extend(&x.field, n)?;
    let y = base_change(x, &tower)?;
    let (ex, ey) = (EndAlgebra::of(x)?, EndAlgebra::of(&y)?);
    if ex.dim != ey.dim {
        return Ok(false);
    }
    Ok(classify(&y, cap)? == Tag::AbsIndec)
}

/// `|Aut(x)|` divided by the scalars is a power of `q`.
pub fn unipotent_quotient(aut_order: u64, q: u64) -> bool {
    if aut_order % (q - 1) != 0 {
        return false;
    }
    let mut r = aut_order / (q - 1);
    while r % q == 0 {
        r /= q;
    }
    r == 1
}
