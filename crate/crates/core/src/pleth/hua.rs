//! `Σ_v z^v E_v(φ) = Exp(Σ_{v>0} z^v E^AI_v(φ))` from brute-force counts.

use std::sync::Arc;

use serde::Serialize;

use super::series::{DegreeFn, GradedSeries, Series};
use crate::cyclo::{CycloInt, CycloRat};
use crate::enumerate::{Counter, SumMode};
use crate::error::{Error, Result};
use crate::field::{FieldSpec, FieldTower};
use crate::quiver::{DimensionVector, Potential, Quiver};

#[derive(Clone, Debug, Serialize)]
pub struct HuaRow {
    pub v: Vec<u32>,
    /// `Σ_{[x]} ψ(φ(x))` over `F_q`.
    pub lhs: CycloRat,
    /// Coefficient of `Exp` of the AI sums at degree 1.
    pub rhs: CycloRat,
    pub equal: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct AiInput {
    pub v: Vec<u32>,
    pub degree: u32,
    pub value: CycloInt,
}

#[derive(Clone, Debug, Serialize)]
pub struct HuaReport {
    pub q: u64,
    pub cutoff: u32,
    /// Largest cutoff whose inputs were all within budget.
    pub covered_cutoff: u32,
    pub inputs: Vec<AiInput>,
    pub rows: Vec<HuaRow>,
    pub skipped: Vec<String>,
    pub pass: bool,
}

fn extension(base: &Arc<FieldSpec>, n: u32) -> Result<Arc<FieldSpec>> {
    if n == 1 {
        Ok(Arc::clone(base))
    } else {
        Ok(Arc::clone(FieldTower::extend(base, n)?.ext()))
    }
}

/// Compares both sides of the generalized Hua formula coefficient by coefficient.
pub fn hua_check(q: &Arc<Quiver>, base: &Arc<FieldSpec>, cutoff: u32, phi: &Potential, counter: &Counter) -> Result<HuaReport> {
    let p = base.characteristic();
    let rank = q.num_vertices();
    let mut inputs = Vec::new();
    let mut skipped = Vec::new();
    let mut covered = cutoff;
    let mut ai = Series::zeros(rank, cutoff, &DegreeFn::constant_int(p, 0));
    for v in DimensionVector::all_up_to(rank, cutoff) {
        let t = v.total();
        let mut values = Vec::new();
        for n in 1..=cutoff / t {
            let f = extension(base, n)?;
            match counter.bundle(q, &v, &f) {
                Ok(b) => {
                    let s = b.ai_exp_sum(phi)?;
                    if b.n_unclassified > 0 {
                        skipped.push(format!("{v} over F_{}: {} unclassified classes", f.order(), b.n_unclassified));
                        covered = covered.min(n * t - 1);
                    }
                    inputs.push(AiInput {
                        v: v.0.clone(),
                        degree: n,
                        value: s.clone(),
                    });
                    values.push(s.to_rat());
                }
                Err(e @ Error::BudgetExceeded { .. }) => {
                    skipped.push(format!("{v} over F_{}: {e}", f.order()));
                    covered = covered.min(n * t - 1);
                    break;
                }
                Err(e) => return Err(e),
            }
        }
        ai.set(&v.0, DegreeFn::table(p, values));
    }

    let mut rows = Vec::new();
    if covered > 0 {
        let mut trimmed = Series::zeros(rank, covered, &DegreeFn::constant_int(p, 0));
        for v in DimensionVector::all_up_to(rank, covered) {
            let mut c = ai.get(&v.0).clone();
            if let DegreeFn::Table { values, .. } = &mut c {
                values.truncate((covered / v.total()) as usize);
            }
            trimmed.set(&v.0, c);
        }
        let GradedSeries::ValueTable(rhs) = GradedSeries::ValueTable(trimmed).exp()? else {
            unreachable!()
        };
        let mut grades = vec![DimensionVector::zero(rank)];
        grades.extend(DimensionVector::all_up_to(rank, covered));
        for v in grades {
            let lhs = if v.is_zero() {
                CycloRat::one(p)
            } else {
                counter.bundle(q, &v, base)?.exp_sum(phi, SumMode::Plain)?.to_rat()
            };
            let r = rhs
                .get(&v.0)
                .value(1)
                .ok_or(Error::MissingDegree { grade: v.0.clone(), degree: 1 })?;
            rows.push(HuaRow {
                v: v.0,
                equal: lhs == r,
                lhs,
                rhs: r,
            });
        }
    }
    let pass = covered == cutoff && rows.iter().all(|r| r.equal);
    Ok(HuaReport {
        q: base.order() as u64,
        cutoff,
        covered_cutoff: covered,
        inputs,
        rows,
        skipped,
        pass,
    })
}
