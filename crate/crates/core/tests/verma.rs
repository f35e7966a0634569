//! PBW bases, the module action, the contravariant form, radicals and
//! characters of Verma modules.

use std::collections::BTreeMap;

use ns2_core::half::Half;
use ns2_core::lincomb::Vector;
use ns2_core::minimal::{spectrum, Convention};
use ns2_core::pbw::{Grade, Monomial, PbwModule, VermaParams};
use ns2_core::superalg::{bracket, generators, grading, Algebra, ModeSymbol};
use ns2_core::{Rat, Scalar};
use proptest::prelude::*;

fn generic() -> VermaParams {
    VermaParams::new(Scalar::frac(7, 5), Scalar::frac(1, 3), Scalar::frac(-2, 7))
}

fn grades_up_to(twice: i64) -> Vec<Grade> {
    (0..=twice).flat_map(|t| Grade::charges_at(Half::from_twice(t))).collect()
}

fn names(ms: &[Monomial]) -> Vec<String> {
    ms.iter().map(ToString::to_string).collect()
}

/// Coefficients of ∏_{n≥1} (1+z q^{n-1/2})(1+z⁻¹ q^{n-1/2}) / (1-qⁿ)², keyed
/// by (twice the level, charge), up to twice-level `top`.
fn generating_function(top: i64) -> BTreeMap<(i64, i64), u64> {
    let mut series: BTreeMap<(i64, i64), u64> = BTreeMap::from([((0, 0), 1)]);
    let mul = |s: &BTreeMap<(i64, i64), u64>, f: &dyn Fn(i64, i64, u64, &mut BTreeMap<(i64, i64), u64>)| {
        let mut out = BTreeMap::new();
        for (&(l, q), &c) in s {
            f(l, q, c, &mut out);
        }
        out
    };
    for n in 1..=top {
        // Fermions of weight n - 1/2 with charges ±1.
        for z in [1i64, -1] {
            let w = 2 * n - 1;
            series = mul(&series, &|l, q, c, out| {
                *out.entry((l, q)).or_insert(0) += c;
                if l + w <= top {
                    *out.entry((l + w, q + z)).or_insert(0) += c;
                }
            });
        }
        // Two bosons of weight n: multiply by 1/(1-qⁿ) twice.
        for _ in 0..2 {
            series = mul(&series, &|l, q, c, out| {
                let mut k = 0;
                while l + 2 * n * k <= top {
                    *out.entry((l + 2 * n * k, q)).or_insert(0) += c;
                    k += 1;
                }
            });
        }
    }
    series
}

#[test]
fn basis_counts_match_generating_function() {
    let verma = PbwModule::verma(generic());
    let series = generating_function(8);
    for (&(tl, q), &count) in &series {
        let basis = verma.enumerate_basis(Grade::new(Half::from_twice(tl), q));
        assert_eq!(basis.len() as u64, count, "level {tl}/2 charge {q}");
    }
    assert_eq!(series[&(2, 0)], 3);
    assert_eq!(series[&(8, 0)], verma.enumerate_basis(Grade::new(Half::int(4), 0)).len() as u64);
    // Grades outside the charge range are empty.
    for g in grades_up_to(8) {
        if !series.contains_key(&(g.level.twice(), g.charge)) {
            assert!(verma.enumerate_basis(g).is_empty());
        }
    }
    assert!(verma.enumerate_basis(Grade::new(Half::HALF, 2)).is_empty());
}

#[test]
fn basis_examples() {
    let verma = PbwModule::verma(generic());
    assert_eq!(names(&verma.enumerate_basis(Grade::new(Half::HALF, 1))), ["G+[-1/2]"]);
    let mut level1 = names(&verma.enumerate_basis(Grade::new(Half::ONE, 0)));
    level1.sort();
    assert_eq!(level1, ["G+[-1/2] G-[-1/2]", "J[-1]", "L[-1]"]);
    let mut l32 = names(&verma.enumerate_basis(Grade::new(Half::from_twice(3), 1)));
    l32.sort();
    assert_eq!(l32, ["G+[-3/2]", "J[-1] G+[-1/2]", "L[-1] G+[-1/2]"]);
}

#[test]
fn action_examples() {
    let p = generic();
    let verma = PbwModule::verma(p.clone());
    let two = Scalar::from_int(2);
    let gm = Monomial::from_sorted(vec![ModeSymbol::g(false, -1)]);
    let v = verma.apply_to_monomial(&ModeSymbol::g(true, 1), &gm);
    assert_eq!(v, Vector::term(Monomial::one(), &(&two * &p.h) + &p.q));
    let l = Monomial::from_sorted(vec![ModeSymbol::l(-1)]);
    assert_eq!(verma.apply_to_monomial(&ModeSymbol::l(1), &l), Vector::term(Monomial::one(), &two * &p.h));
    let gp = Monomial::from_sorted(vec![ModeSymbol::g(true, -1)]);
    assert_eq!(verma.apply_to_monomial(&ModeSymbol::j(0), &gp), Vector::term(gp.clone(), &p.q + &Scalar::one()));
}

/// Generators with `|index| ≤ bound` acting on a basis reproduce the bracket
/// table as (super)commutators.
#[test]
fn action_is_a_representation() {
    let p = generic();
    let verma = PbwModule::verma(p.clone());
    let xs = generators(Algebra::Ns2, Half::from_twice(3));
    for g in grades_up_to(3) {
        for b in verma.enumerate_basis(g) {
            let v = Vector::basis(b.clone());
            for x in &xs {
                for y in &xs {
                    let sign = if x.is_odd() && y.is_odd() { Scalar::from_int(-1) } else { Scalar::one() };
                    let xy = verma.apply_vec(x, &verma.apply_vec(y, &v));
                    let yx = verma.apply_vec(y, &verma.apply_vec(x, &v));
                    let lhs = xy.sub(&yx.scaled(&sign));
                    let mut rhs = Vector::zero();
                    for (z, c) in bracket(x, y).unwrap().iter() {
                        if z.is_central() {
                            rhs.add_scaled(&v, &(c * &p.c));
                        } else {
                            rhs.add_scaled(&verma.apply_vec(z, &v), c);
                        }
                    }
                    assert_eq!(lhs, rhs, "[{x}, {y}] on {b}");
                }
            }
        }
    }
}

#[test]
fn action_shifts_grades() {
    let verma = PbwModule::verma(generic());
    let xs = generators(Algebra::Ns2, Half::int(2));
    for g in grades_up_to(4) {
        for b in verma.enumerate_basis(g) {
            for x in &xs {
                let gx = grading(x).unwrap();
                for (m, _) in verma.apply_to_monomial(x, &b).iter() {
                    let gm = m.grade();
                    assert_eq!(gm.level, g.level + gx.weight);
                    assert_eq!(gm.charge, g.charge + gx.charge);
                }
            }
        }
    }
}

/// `<x u, v> = <u, ω(x) v>` on basis vectors up to level 5/2.
fn check_contravariance(p: VermaParams) {
    let verma = PbwModule::verma(p);
    let xs = generators(Algebra::Ns2, Half::from_twice(3));
    let mut checked = 0;
    for g in grades_up_to(5) {
        let gram_g = verma.gram(g);
        for x in &xs {
            let gx = grading(x).unwrap();
            let target = Grade::new(g.level + gx.weight, g.charge + gx.charge);
            if target.level < Half::ZERO || target.level > Half::from_twice(5) {
                continue;
            }
            let gram_t = verma.gram(target);
            let wx = x.omega();
            for u in &gram_g.basis {
                let xu = verma.apply_to_monomial(x, u);
                for v in &gram_t.basis {
                    let lhs = if xu.is_zero() { Scalar::zero() } else { gram_t.pair(&xu, &Vector::basis(v.clone())) };
                    let wv = verma.apply_to_monomial(&wx, v);
                    let rhs = if wv.is_zero() { Scalar::zero() } else { gram_g.pair(&Vector::basis(u.clone()), &wv) };
                    assert_eq!(lhs, rhs, "<{x} {u}, {v}>");
                    checked += 1;
                }
            }
        }
    }
    assert!(checked > 1000);
}

#[test]
fn contravariance_generic() {
    check_contravariance(generic());
}

#[test]
fn contravariance_unitary_label() {
    let l = spectrum(2, Convention::Standard)[1];
    check_contravariance(l.params());
}

#[test]
fn gram_matrices_are_symmetric() {
    let verma = PbwModule::verma(generic());
    for g in grades_up_to(6) {
        assert!(verma.gram(g).entries.is_symmetric(), "{g}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn level_half_entries(hn in -20i64..20, hd in 1i64..9, qn in -20i64..20, qd in 1i64..9) {
        let h = Scalar::frac(hn, hd);
        let q = Scalar::frac(qn, qd);
        let verma = PbwModule::verma(VermaParams::new(Scalar::frac(5, 3), h.clone(), q.clone()));
        let two_h = &Scalar::from_int(2) * &h;
        let plus = verma.gram(Grade::new(Half::HALF, 1));
        let minus = verma.gram(Grade::new(Half::HALF, -1));
        prop_assert_eq!(plus.entries.get(0, 0), &(&two_h - &q));
        prop_assert_eq!(minus.entries.get(0, 0), &(&two_h + &q));
        let expected = usize::from(!(&two_h - &q).is_zero()) + usize::from(!(&two_h + &q).is_zero());
        let found = verma.singular_vectors(Grade::new(Half::HALF, 1)).unwrap().len()
            + verma.singular_vectors(Grade::new(Half::HALF, -1)).unwrap().len();
        prop_assert_eq!(found, 2 - expected);
    }
}

#[test]
fn gram_examples() {
    let verma = PbwModule::verma(VermaParams::vacuum(Scalar::frac(9, 4)));
    assert!(verma.gram(Grade::new(Half::HALF, 1)).entries.get(0, 0).is_zero());
    let g = verma.gram(Grade::new(Half::ONE, 0));
    let j = g.position(&Monomial::from_sorted(vec![ModeSymbol::j(-1)])).unwrap();
    assert_eq!(g.entries.get(j, j), &Scalar::frac(3, 4));
}

#[test]
fn singular_vector_examples() {
    for c in [Scalar::one(), Scalar::frac(3, 2), Scalar::frac(-11, 3)] {
        let verma = PbwModule::verma(VermaParams::vacuum(c));
        for q in [1, -1] {
            let sv = verma.singular_vectors(Grade::new(Half::HALF, q)).unwrap();
            assert_eq!(sv.len(), 1);
            let gen = Monomial::from_sorted(vec![ModeSymbol::g(q == 1, -1)]);
            assert_eq!(sv[0].terms.keys().collect::<Vec<_>>(), [&gen]);
        }
    }
    let verma = PbwModule::verma(VermaParams::new(Scalar::frac(3, 2), Scalar::frac(2, 7), Scalar::frac(1, 9)));
    assert!(verma.singular_vectors(Grade::new(Half::HALF, 1)).unwrap().is_empty());
}

/// Negative modes carry radical vectors into the radical of deeper grades.
#[test]
fn radical_is_stable_under_creation() {
    let labels = [
        VermaParams::vacuum(Scalar::frac(3, 2)),
        spectrum(1, Convention::Standard)[1].params(),
        spectrum(2, Convention::Standard)[3].params(),
    ];
    for p in labels {
        let verma = PbwModule::verma(p);
        let creators: Vec<ModeSymbol> =
            generators(Algebra::Ns2, Half::int(3)).into_iter().filter(|x| x.index < Half::ZERO).collect();
        for g in grades_up_to(4) {
            for v in verma.singular_vectors(g).unwrap() {
                for x in &creators {
                    let gx = grading(x).unwrap();
                    let target = Grade::new(g.level + gx.weight, g.charge + gx.charge);
                    if target.level > Half::int(3) {
                        continue;
                    }
                    let w = verma.apply_vec(x, &v.terms);
                    if w.is_zero() {
                        continue;
                    }
                    let gram = verma.gram(target);
                    let coords = gram.coordinates(&w);
                    assert!(gram.entries.mul_vec(&coords).iter().all(Scalar::is_zero), "{x} on radical at {g}");
                }
            }
        }
    }
}

#[test]
fn irreducible_dimensions_and_characters() {
    let verma = PbwModule::verma(generic());
    let ch = verma.module_character(Half::ONE);
    let totals: Vec<u64> = (0..=2).map(|t| ch.level_total(Half::from_twice(t))).collect();
    assert_eq!(totals, [1, 2, 3]);
    for c in [Scalar::one(), Scalar::frac(3, 2)] {
        let vac = PbwModule::verma(VermaParams::vacuum(c.clone()));
        assert_eq!(vac.irreducible_dim(Grade::new(Half::HALF, 1)), 0);
        assert_eq!(vac.irreducible_dim(Grade::new(Half::HALF, -1)), 0);
        let g = vac.gram(Grade::new(Half::int(2), 0));
        let l2 = Monomial::from_sorted(vec![ModeSymbol::l(-2)]);
        let k = g.position(&l2).unwrap();
        // <L(-2)1, L(-2)1> = c/2.
        assert_eq!(g.entries.get(k, k), &(&c * &Scalar::frac(1, 2)));
        assert!(vac.character(Half::int(2)).get(Half::int(2), 0) > 0);
    }
}

#[test]
fn unitary_gram_matrices_are_positive_semidefinite() {
    for m in 1..=3 {
        for l in spectrum(m, Convention::Standard) {
            let verma = PbwModule::verma(l.params());
            for g in grades_up_to(4) {
                assert!(verma.gram(g).entries.is_positive_semidefinite().unwrap(), "{l} at {g}");
            }
        }
    }
}

#[test]
fn non_unitary_label_has_negative_direction() {
    // h < 0 makes <L(-1)1, L(-1)1> = 2h negative.
    let verma = PbwModule::verma(VermaParams::new(Scalar::frac(3, 2), Scalar::from_rat(Rat::new(-1, 5)), Scalar::zero()));
    assert!(!verma.gram(Grade::new(Half::ONE, 0)).entries.is_positive_semidefinite().unwrap());
}
