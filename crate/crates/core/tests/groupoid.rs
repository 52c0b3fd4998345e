//! Orbit counts, Burnside sums and moment maps against naive oracles.

use std::collections::HashSet;
use std::sync::Arc;

use num_bigint::BigUint;
use num_rational::BigRational;

use qcount_core::endo::Tag;
use qcount_core::enumerate::{burnside_count, count_points, gl_order, iso_classes, stacky_count, stacky_from_classes, Budget, RepSpace};
use qcount_core::field::{FieldSpec, Scalar};
use qcount_core::matrix::{general_linear_group, Matrix};
use qcount_core::moment::{fiber_count, moment_map};
use qcount_core::quiver::{catalog, double_quiver, DimensionVector, Quiver, Representation};

/// Full `GL_v` as tuples of matrices with their inverses.
fn full_group(f: &FieldSpec, v: &DimensionVector) -> Vec<(Vec<Matrix>, Vec<Matrix>)> {
    let factors: Vec<Vec<Matrix>> = v.0.iter().map(|&n| general_linear_group(f, n as usize)).collect();
    let mut out: Vec<Vec<Matrix>> = vec![Vec::new()];
    for fac in &factors {
        out = out
            .into_iter()
            .flat_map(|pre| {
                fac.iter().map(move |g| {
                    let mut t = pre.clone();
                    t.push(g.clone());
                    t
                })
            })
            .collect();
    }
    out.into_iter()
        .map(|g| {
            let inv = g.iter().map(|m| m.inverse(f).unwrap()).collect();
            (g, inv)
        })
        .collect()
}

/// Every representation, built entry by entry without the point index.
fn all_reps(quiver: &Arc<Quiver>, f: &Arc<FieldSpec>, v: &DimensionVector) -> Vec<Representation> {
    let shapes: Vec<(usize, usize)> = quiver
        .arrows
        .iter()
        .map(|a| (v.0[a.target] as usize, v.0[a.source] as usize))
        .collect();
    let len: usize = shapes.iter().map(|(r, c)| r * c).sum();
    let q = f.order() as usize;
    let mut out = Vec::new();
    let mut digits = vec![0usize; len];
    loop {
        let mut k = 0;
        let mats = shapes
            .iter()
            .map(|&(r, c)| {
                let data = (0..r * c)
                    .map(|_| {
                        k += 1;
                        Scalar(digits[k - 1] as u16)
                    })
                    .collect();
                Matrix::from_vec(r, c, data)
            })
            .collect();
        out.push(Representation::new(Arc::clone(quiver), Arc::clone(f), v.clone(), mats).unwrap());
        let mut i = 0;
        while i < len && digits[i] == q - 1 {
            digits[i] = 0;
            i += 1;
        }
        if i == len {
            return out;
        }
        digits[i] += 1;
    }
}

/// Orbits by repeated closure under the full group.
fn naive_orbits(quiver: &Arc<Quiver>, f: &Arc<FieldSpec>, v: &DimensionVector) -> Vec<usize> {
    let group = full_group(f, v);
    let mut seen: HashSet<Vec<u16>> = HashSet::new();
    let mut sizes = Vec::new();
    for x in all_reps(quiver, f, v) {
        if seen.contains(&x.entries()) {
            continue;
        }
        let orbit: HashSet<Vec<u16>> = group.iter().map(|(g, gi)| x.act(g, gi).entries()).collect();
        sizes.push(orbit.len());
        seen.extend(orbit);
    }
    sizes
}

fn quivers() -> Vec<(&'static str, Arc<Quiver>)> {
    vec![
        ("A1", Arc::new(catalog::a1())),
        ("A2", Arc::new(catalog::a2())),
        ("Jordan", Arc::new(catalog::jordan())),
        ("Kronecker", Arc::new(catalog::kronecker())),
        ("CM", Arc::new(catalog::calogero_moser())),
    ]
}

#[test]
fn classes_match_naive_orbits() {
    let b = Budget::default();
    for q in [2, 3] {
        let f = FieldSpec::of_order(q).unwrap();
        for (name, quiver) in quivers() {
            for v in DimensionVector::all_up_to(quiver.num_vertices(), 2) {
                let mut naive = naive_orbits(&quiver, &f, &v);
                let classes = iso_classes(&quiver, &v, &f, &b).unwrap();
                let mut ours: Vec<usize> = classes.iter().map(|c| c.orbit_size as usize).collect();
                naive.sort_unstable();
                ours.sort_unstable();
                assert_eq!(ours, naive, "{name} v = {v} q = {q}");
                let burn = burnside_count(&quiver, &v, &f, &b).unwrap();
                assert_eq!(burn, BigUint::from(naive.len()), "{name} v = {v} q = {q}");
                let gl = gl_order(&v, q);
                for c in &classes {
                    assert_eq!(BigUint::from(c.orbit_size * c.aut_order), gl);
                }
                assert_eq!(stacky_from_classes(&classes), stacky_count(&quiver, &v, &f));
            }
        }
    }
}

#[test]
fn spec_examples() {
    let b = Budget::default();
    let f2 = FieldSpec::of_order(2).unwrap();
    let f3 = FieldSpec::of_order(3).unwrap();
    let j = Arc::new(catalog::jordan());
    let k = Arc::new(catalog::kronecker());
    let cm = Arc::new(catalog::calogero_moser());
    let one = DimensionVector(vec![1, 1]);
    assert_eq!(count_points(&j, &DimensionVector(vec![2]), &f2), BigUint::from(16u32));
    assert_eq!(count_points(&k, &one, &f3), BigUint::from(9u32));
    assert_eq!(count_points(&cm, &DimensionVector(vec![2, 1]), &f2), BigUint::from(64u32));
    assert_eq!(gl_order(&DimensionVector(vec![1]), 7), BigUint::from(6u32));
    assert_eq!(gl_order(&DimensionVector(vec![2]), 2), BigUint::from(general_linear_group(&f2, 2).len()));
    assert_eq!(gl_order(&DimensionVector(vec![2, 1]), 3), BigUint::from(96u32));
    assert_eq!(iso_classes(&j, &DimensionVector(vec![1]), &f2, &b).unwrap().len(), 2);
    assert_eq!(iso_classes(&k, &one, &f2, &b).unwrap().len(), 4);
    assert_eq!(iso_classes(&Arc::new(catalog::a2()), &one, &f3, &b).unwrap().len(), 2);
    assert_eq!(burnside_count(&j, &DimensionVector(vec![2]), &f2, &b).unwrap(), BigUint::from(6u32));
    assert_eq!(burnside_count(&Arc::new(catalog::a1()), &DimensionVector(vec![3]), &f3, &b).unwrap(), BigUint::from(1u32));
    assert_eq!(
        stacky_count(&j, &DimensionVector(vec![1]), &f3),
        BigRational::new(3.into(), 2.into())
    );
    let tags: Vec<Tag> = iso_classes(&k, &one, &f2, &b).unwrap().into_iter().map(|c| c.tag).collect();
    assert_eq!(tags.iter().filter(|t| **t == Tag::AbsIndec).count(), 3);
}

#[test]
fn moment_map_is_equivariant() {
    let f = FieldSpec::of_order(2).unwrap();
    for base in [catalog::kronecker(), catalog::calogero_moser(), catalog::jordan()] {
        let qd = Arc::new(double_quiver(&base).unwrap());
        for v in DimensionVector::all_up_to(qd.num_vertices(), 2) {
            let group = full_group(&f, &v);
            for x in all_reps(&qd, &f, &v) {
                let mu = moment_map(&x).unwrap();
                for (g, gi) in &group {
                    let moved = moment_map(&x.act(g, gi)).unwrap();
                    for (i, blk) in mu.blocks.iter().enumerate() {
                        assert_eq!(moved.blocks[i], g[i].mul(&f, blk).mul(&f, &gi[i]));
                    }
                }
            }
        }
    }
}

#[test]
fn fiber_count_matches_direct_scan() {
    let b = Budget::default();
    for (q, eta) in [(2u64, [1u16, 1]), (3, [2, 1]), (3, [0, 0]), (5, [1, 4])] {
        let f = FieldSpec::of_order(q).unwrap();
        for base in [catalog::kronecker(), catalog::calogero_moser()] {
            let qd = Arc::new(double_quiver(&base).unwrap());
            let v = DimensionVector(vec![1, 1]);
            let want = all_reps(&qd, &f, &v)
                .into_iter()
                .filter(|x| {
                    let mu = moment_map(x).unwrap();
                    mu.blocks.iter().zip(eta).all(|(m, e)| *m == Matrix::scalar(1, Scalar(e)))
                })
                .count() as u64;
            let eta_s: Vec<Scalar> = eta.iter().map(|&e| Scalar(e)).collect();
            let r = fiber_count(&qd, &v, &f, &eta_s, &b).unwrap();
            assert_eq!(r.n_points, want, "q = {q} eta = {eta:?}");
        }
    }
    // Kronecker at q = 3: 24 points, m_o = 12
    let f3 = FieldSpec::of_order(3).unwrap();
    let kd = Arc::new(double_quiver(&catalog::kronecker()).unwrap());
    let r = fiber_count(&kd, &DimensionVector(vec![1, 1]), &f3, &[Scalar(2), Scalar(1)], &b).unwrap();
    assert_eq!(r.n_points, 24);
}

#[test]
fn rep_space_round_trips_indices() {
    let f = FieldSpec::of_order(3).unwrap();
    let quiver = Arc::new(catalog::calogero_moser());
    let v = DimensionVector(vec![2, 1]);
    let space = RepSpace::new(&quiver, &f, &v).unwrap();
    for (i, x) in all_reps(&quiver, &f, &v).iter().enumerate().step_by(37) {
        let idx = space.index_of(x);
        assert_eq!(&space.rep_at(idx), x, "{i}");
    }
}
