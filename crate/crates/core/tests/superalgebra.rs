//! Super skew-symmetry, super Jacobi and grading additivity of the bracket
//! tables, plus spot values of the ns(2) and affine tables.

use ns2_core::half::Half;
use ns2_core::superalg::{bracket, generators, grading, Algebra, Kind, LinComb, ModeSymbol};
use ns2_core::{Rat, Scalar};

fn sign(p: u8) -> Scalar {
    if p % 2 == 1 {
        Scalar::from_int(-1)
    } else {
        Scalar::one()
    }
}

/// `[x, w]` extended linearly over `w`; central symbols bracket to zero.
fn bracket_lc(x: &ModeSymbol, w: &LinComb) -> LinComb {
    let mut out = LinComb::zero();
    for (z, c) in w.iter() {
        out.add_scaled(&bracket(x, z).unwrap(), c);
    }
    out
}

fn lc(terms: &[(ModeSymbol, Scalar)]) -> LinComb {
    terms.iter().cloned().collect()
}

#[test]
fn super_skew_symmetry_all_tables() {
    for alg in [Algebra::Ns2, Algebra::Virasoro, Algebra::Heisenberg, Algebra::AffineSl2] {
        let gens = generators(alg, Half::int(4));
        for x in &gens {
            for y in &gens {
                let xy = bracket(x, y).unwrap();
                let yx = bracket(y, x).unwrap();
                let expected = yx.scaled(&-&sign(x.parity() * y.parity()));
                assert_eq!(xy, expected, "skew-symmetry fails for {x}, {y}");
            }
        }
    }
}

#[test]
fn super_jacobi_ns2_exhaustive() {
    let gens = generators(Algebra::Ns2, Half::int(3));
    assert_eq!(gens.len(), 26);
    let mut triples = 0;
    for x in &gens {
        for y in &gens {
            let xy = bracket(x, y).unwrap();
            for z in &gens {
                let yz = bracket(y, z).unwrap();
                let zx = bracket(z, x).unwrap();
                let mut total = bracket_lc(x, &yz).scaled(&sign(x.parity() * z.parity()));
                total.add_scaled(&bracket_lc(y, &zx), &sign(y.parity() * x.parity()));
                total.add_scaled(&bracket_lc(z, &xy), &sign(z.parity() * y.parity()));
                assert!(total.is_zero(), "Jacobi fails for {x}, {y}, {z}: {total:?}");
                triples += 1;
            }
        }
    }
    assert_eq!(triples, 26 * 26 * 26);
}

#[test]
fn super_jacobi_affine_and_heisenberg() {
    for alg in [Algebra::AffineSl2, Algebra::Heisenberg, Algebra::Virasoro] {
        let gens = generators(alg, Half::int(3));
        for x in &gens {
            for y in &gens {
                for z in &gens {
                    let mut total = bracket_lc(x, &bracket(y, z).unwrap());
                    total.add_vec(&bracket_lc(y, &bracket(z, x).unwrap()));
                    total.add_vec(&bracket_lc(z, &bracket(x, y).unwrap()));
                    assert!(total.is_zero(), "Jacobi fails for {x}, {y}, {z}");
                }
            }
        }
    }
}

#[test]
fn bracket_output_is_homogeneous() {
    for alg in [Algebra::Ns2, Algebra::Virasoro, Algebra::Heisenberg, Algebra::AffineSl2] {
        let gens = generators(alg, Half::int(3));
        for x in &gens {
            for y in &gens {
                let (gx, gy) = (grading(x).unwrap(), grading(y).unwrap());
                for (z, _) in bracket(x, y).unwrap().iter() {
                    if z.is_central() {
                        assert_eq!(gx.weight + gy.weight, Half::ZERO);
                        continue;
                    }
                    let gz = grading(z).unwrap();
                    assert_eq!(gz.weight, gx.weight + gy.weight, "{x}, {y} -> {z}");
                    assert_eq!(gz.charge, gx.charge + gy.charge, "{x}, {y} -> {z}");
                }
            }
        }
    }
}

#[test]
fn ns2_central_terms_match_closed_forms() {
    // [L_m, L_-m] = 2m L_0 + (m³-m)/12 C, [J_m, J_-m] = m/3 C,
    // [G+_r, G-_-r] = 2L_0 + 2r J_0 + (r² - 1/4)/3 C.
    for m in 1..=4i64 {
        let b = bracket(&ModeSymbol::l(m), &ModeSymbol::l(-m)).unwrap();
        assert_eq!(b.coeff(&ModeSymbol::c()), Scalar::from_rat(Rat::new(m * m * m - m, 12)));
        assert_eq!(b.coeff(&ModeSymbol::l(0)), Scalar::from_int(2 * m));
        let j = bracket(&ModeSymbol::j(m), &ModeSymbol::j(-m)).unwrap();
        assert_eq!(j, lc(&[(ModeSymbol::c(), Scalar::frac(m, 3))]));
    }
    for tr in [1i64, 3, 5, 7] {
        let g = bracket(&ModeSymbol::g(true, tr), &ModeSymbol::g(false, -tr)).unwrap();
        let r = Rat::new(tr, 2);
        let central = &(&(&r * &r) - &Rat::new(1, 4)) * &Rat::new(1, 3);
        let mut expected = lc(&[(ModeSymbol::l(0), Scalar::from_int(2)), (ModeSymbol::j(0), Scalar::from_int(tr))]);
        if !central.is_zero() {
            expected.add_term(ModeSymbol::c(), Scalar::from_rat(central));
        }
        assert_eq!(g, expected);
    }
}

#[test]
fn spot_values() {
    let b = bracket(&ModeSymbol::l(2), &ModeSymbol::l(-2)).unwrap();
    assert_eq!(b, lc(&[(ModeSymbol::l(0), Scalar::from_int(4)), (ModeSymbol::c(), Scalar::frac(1, 2))]));
    let b = bracket(&ModeSymbol::g(true, 1), &ModeSymbol::g(false, -1)).unwrap();
    assert_eq!(b, lc(&[(ModeSymbol::l(0), Scalar::from_int(2)), (ModeSymbol::j(0), Scalar::one())]));
    assert!(bracket(&ModeSymbol::g(true, 1), &ModeSymbol::g(true, -1)).unwrap().is_zero());
    assert_eq!(bracket(&ModeSymbol::j(1), &ModeSymbol::g(true, 1)).unwrap(), LinComb::basis(ModeSymbol::g(true, 3)));
    assert_eq!(bracket(&ModeSymbol::j(1), &ModeSymbol::g(false, 1)).unwrap(), LinComb::term(ModeSymbol::g(false, 3), Scalar::from_int(-1)));
    let a = bracket(&ModeSymbol::heis(2), &ModeSymbol::heis(-2)).unwrap();
    assert_eq!(a, LinComb::term(ModeSymbol::heis_d(), Scalar::from_int(2)));
    assert!(bracket(&ModeSymbol::l(0), &ModeSymbol::heis(1)).is_err());
}

#[test]
fn affine_table_normalization() {
    let e = |n| ModeSymbol::affine(Kind::E, n);
    let f = |n| ModeSymbol::affine(Kind::F, n);
    let h = |n| ModeSymbol::affine(Kind::H, n);
    let k = ModeSymbol::affine(Kind::K, 0);
    for p in -3..=3i64 {
        for q in -3..=3i64 {
            let mut ef = LinComb::basis(h(p + q));
            if p + q == 0 && p != 0 {
                ef.add_term(k, Scalar::from_int(p));
            }
            assert_eq!(bracket(&e(p), &f(q)).unwrap(), ef);
            assert_eq!(bracket(&h(p), &e(q)).unwrap(), LinComb::term(e(p + q), Scalar::from_int(2)));
            assert_eq!(bracket(&h(p), &f(q)).unwrap(), LinComb::term(f(p + q), Scalar::from_int(-2)));
            let hh = bracket(&h(p), &h(q)).unwrap();
            if p + q == 0 && p != 0 {
                assert_eq!(hh, LinComb::term(k, Scalar::from_int(2 * p)));
            } else {
                assert!(hh.is_zero());
            }
        }
    }
}

#[test]
fn gradings() {
    let g = grading(&ModeSymbol::g(true, -1)).unwrap();
    assert_eq!((g.weight, g.charge), (Half::HALF, 1));
    let g = grading(&ModeSymbol::l(-2)).unwrap();
    assert_eq!((g.weight, g.charge), (Half::int(2), 0));
    let g = grading(&ModeSymbol::j(3)).unwrap();
    assert_eq!((g.weight, g.charge), (Half::int(-3), 0));
    assert!(grading(&ModeSymbol::c()).is_err());
}

#[test]
fn symbols_render_and_validate() {
    assert_eq!(ModeSymbol::g(true, -3).to_string(), "G+[-3/2]");
    assert_eq!("G+[-3/2]".parse::<ModeSymbol>().unwrap(), ModeSymbol::g(true, -3));
    assert!(ModeSymbol::new(Algebra::Ns2, Kind::Gp, Half::int(1)).is_err());
    assert!(ModeSymbol::new(Algebra::Ns2, Kind::L, Half::HALF).is_err());
    assert!(ModeSymbol::new(Algebra::Virasoro, Kind::J, Half::ZERO).is_err());
    assert!(ModeSymbol::g(true, 1).is_odd() && !ModeSymbol::l(1).is_odd());
}
