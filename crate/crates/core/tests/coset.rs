//! Affine `sl₂` at level `m` and the commuting Heisenberg field inside
//! `L(c_m,h,q) ⊗ V_L`.

use ns2_core::coset::{virasoro_identity_residual, Coset, CosetGenerators, CosetOp, TKey, TVec};
use ns2_core::half::Half;
use ns2_core::irreducible::IrreducibleModule;
use ns2_core::lattice::{Cocycle, Lattice, LatticeState};
use ns2_core::lincomb::Vector;
use ns2_core::pbw::{Monomial, PbwModule, VermaParams};
use ns2_core::superalg::ModeSymbol;
use ns2_core::vertex::ModeRep;
use ns2_core::Scalar;

fn central_charge(m: u32) -> Scalar {
    Scalar::frac(3 * m as i64, m as i64 + 2)
}

fn vacuum_irreducible(m: u32) -> IrreducibleModule {
    IrreducibleModule::new(VermaParams::vacuum(central_charge(m)))
}

fn key_parity<R: ModeRep>(rep: &R, key: &TKey<R::B>) -> u8 {
    (rep.parity(&key.0) + key.1.parity()) % 2
}

#[test]
fn generator_states() {
    for m in 1..=4u32 {
        let g = CosetGenerators::new(m);
        let mi = m as i64;
        let g32 = |plus| Monomial::from_sorted(vec![ModeSymbol::g(plus, -3)]);
        let j1 = Monomial::from_sorted(vec![ModeSymbol::j(-1)]);
        let a1 = LatticeState::new(vec![1], 0);
        assert_eq!(g.e, Vector::basis((g32(true), LatticeState::exp(-1))));
        assert_eq!(g.f, Vector::term((g32(false), LatticeState::exp(1)), Scalar::frac(mi + 2, 2)));
        assert_eq!(g.h.coeff(&(Monomial::one(), a1.clone())), Scalar::from_int(-mi));
        assert_eq!(g.h.coeff(&(j1.clone(), LatticeState::vacuum())), Scalar::from_int(mi + 2));
        let kappa = g.rho.coeff(&(j1, LatticeState::vacuum()));
        assert_eq!(&kappa * &kappa, Scalar::frac(mi + 2, 2));
        assert!(kappa.real_sign().unwrap() == ns2_core::Sign::Positive);
        assert_eq!(g.rho.coeff(&(Monomial::one(), a1)), -&kappa);
        assert_eq!(g.rho.len(), 2);
        assert_eq!(g.omega_sl2.len(), 4);
    }
}

/// `H(0)` fixes `G⁺(-3/2)1 ⊗ e^{-α}` with eigenvalue 2: the N=2 charge
/// contributes `(m+2)` and the sector contributes `-m`.
#[test]
fn h_zero_on_the_e_state() {
    for m in 1..=4u32 {
        let vac = PbwModule::vacuum(central_charge(m));
        let lattice = Lattice::default();
        let coset = Coset::new(m, &vac, &lattice);
        let key = (Monomial::from_sorted(vec![ModeSymbol::g(true, -3)]), LatticeState::exp(-1));
        assert_eq!(coset.op(CosetOp::H, 0, &key), Vector::term(key.clone(), Scalar::from_int(2)));
        let f_key = (Monomial::from_sorted(vec![ModeSymbol::g(false, -3)]), LatticeState::exp(1));
        assert_eq!(coset.op(CosetOp::H, 0, &f_key), Vector::term(f_key.clone(), Scalar::from_int(-2)));
    }
}

#[test]
fn h_modes_have_level_m() {
    for m in 1..=3u32 {
        let rep = vacuum_irreducible(m);
        let lattice = Lattice::default();
        let coset = Coset::new(m, &rep, &lattice);
        let keys: Vec<_> = coset.window(Half::ONE, 1).into_values().flatten().collect();
        for key in keys.iter().take(40) {
            let v: TVec<_> = Vector::basis(key.clone());
            for p in 1..=3i64 {
                let hh = coset.op_vec(CosetOp::H, p, &coset.op_vec(CosetOp::H, -p, &v));
                let hh2 = coset.op_vec(CosetOp::H, -p, &coset.op_vec(CosetOp::H, p, &v));
                assert_eq!(hh.sub(&hh2), v.scaled(&Scalar::from_int(2 * p * m as i64)), "p = {p} on {key:?}");
            }
        }
    }
}

#[test]
fn affine_relations_at_level_one() {
    let rep = vacuum_irreducible(1);
    let lattice = Lattice::default();
    let coset = Coset::new(1, &rep, &lattice);
    let report = coset.verify_affine_relations(Half::ONE, 2, 1);
    assert!(report.states > 50);
    for (name, check) in &report.relations {
        assert!(check.passed(), "{name}: {:?}", check.failures.first());
        assert!(check.checked > 0);
    }
    assert_eq!(report.measured_levels, vec![Scalar::one()]);
    assert!(report.passed());
}

/// `([E(p),F(-p)] - H(0)) / p` is the same for `p = 1` and `p = 2`.
#[test]
fn level_is_independent_of_mode_index() {
    for m in [1u32, 2] {
        let rep = vacuum_irreducible(m);
        let lattice = Lattice::default();
        let coset = Coset::new(m, &rep, &lattice);
        let report = coset.verify_affine_relations(Half::HALF, 1, 2);
        assert_eq!(report.measured_levels, vec![Scalar::from_int(m as i64)], "m = {m}");
        assert!(report.passed());
    }
}

/// Without the sign cocycle the odd factors of `e` and `f` no longer combine
/// into currents obeying `[E, F] = H + m K`.
#[test]
fn trivial_cocycle_breaks_the_affine_relations() {
    let rep = vacuum_irreducible(1);
    let lattice = Lattice::new(Cocycle::Trivial);
    let coset = Coset::new(1, &rep, &lattice);
    let report = coset.verify_affine_relations(Half::ONE, 2, 1);
    assert!(!report.relations["[E,F]"].passed());
    assert!(!report.passed());
}

#[test]
fn rho_commutes_and_sl2_virasoro_has_sugawara_charge() {
    for m in [1u32, 2] {
        let rep = vacuum_irreducible(m);
        let lattice = Lattice::default();
        let coset = Coset::new(m, &rep, &lattice);
        let report = coset.verify_rho_and_virasoro(Half::HALF, 1, 2);
        assert!(report.commutation_passed(), "m = {m}");
        assert!(report.virasoro_passed(), "m = {m}: {:?}", report.sl2_virasoro.failures.first());
        assert_eq!(report.sl2_central_charge, vec![central_charge(m)]);
    }
}

#[test]
fn sl2_virasoro_zero_mode_grades_the_currents() {
    let m = 1;
    let rep = vacuum_irreducible(m);
    let lattice = Lattice::default();
    let coset = Coset::new(m, &rep, &lattice);
    for key in coset.window(Half::ONE, 1).into_values().flatten() {
        let v: TVec<_> = Vector::basis(key.clone());
        for op in [CosetOp::E, CosetOp::F, CosetOp::H] {
            for n in -1..=1i64 {
                let xv = coset.op_vec(op, n, &v);
                let lhs = coset
                    .op_vec(CosetOp::Sl2Virasoro, 0, &xv)
                    .sub(&coset.op_vec(op, n, &coset.op_vec(CosetOp::Sl2Virasoro, 0, &v)));
                assert_eq!(lhs, xv.scaled(&Scalar::from_int(-n)), "{}({n}) on {key:?}", op.name());
            }
        }
    }
}

/// Both factors of `e` and `f` are odd, so the currents preserve parity.
#[test]
fn currents_are_even() {
    let rep = vacuum_irreducible(2);
    let lattice = Lattice::default();
    let coset = Coset::new(2, &rep, &lattice);
    let mut moved = 0;
    for key in coset.window(Half::ONE, 1).into_values().flatten() {
        let p = key_parity(&rep, &key);
        for op in [CosetOp::E, CosetOp::F] {
            for n in -1..=1i64 {
                for (out, _) in coset.op(op, n, &key).iter() {
                    assert_eq!(key_parity(&rep, out), p);
                    moved += 1;
                }
            }
        }
    }
    assert!(moved > 0);
}

#[test]
fn currents_shift_the_window_grading() {
    let rep = vacuum_irreducible(1);
    let lattice = Lattice::default();
    let coset = Coset::new(1, &rep, &lattice);
    let window = coset.window(Half::from_twice(3), 1);
    for (grade, keys) in &window {
        for key in keys {
            assert_eq!(coset.grade_of(key), *grade);
            for op in [CosetOp::E, CosetOp::F, CosetOp::H, CosetOp::R, CosetOp::Sl2Virasoro] {
                for n in -1..=1i64 {
                    let (dw, dp) = op.shift(n);
                    for (out, _) in coset.op(op, n, key).iter() {
                        let g = coset.grade_of(out);
                        assert_eq!((g.s, g.w, g.p), (grade.s, grade.w + dw, grade.p + dp), "{}({n}) on {key:?}", op.name());
                    }
                }
            }
        }
    }
}

/// `ω_sl2 + ω_ρ` and `ω_total` agree in their quadratic parts; the linear
/// parts differ by `-(1+κ)/2 · 1⊗α(-2) + κ/2 · J(-2)1`.
#[test]
fn virasoro_identity_residual_values() {
    for m in 1..=4u32 {
        let kappa = Scalar::sqrt_half_m_plus_2(m);
        let residual = virasoro_identity_residual(m);
        let half = Scalar::frac(1, 2);
        let expected = vec![
            ("1 ⊗ α(-2)e^0".to_string(), -&(&half + &(&half * &kappa))),
            ("J[-2] ⊗ e^0".to_string(), &half * &kappa),
        ];
        assert_eq!(residual, expected, "m = {m}");
    }
}

#[test]
fn vacuum_decomposition_at_level_one() {
    let rep = vacuum_irreducible(1);
    let lattice = Lattice::default();
    let coset = Coset::new(1, &rep, &lattice);
    let dec = coset.find_affine_hw(Half::ONE, 2);
    assert!(dec.passed());
    assert_eq!(dec.non_integrable, 0);
    assert!(!dec.certificates.is_empty());
    let kappa = Scalar::sqrt_half_m_plus_2(1);
    let mut found: Vec<(Scalar, Scalar)> = dec.highest_weights.iter().map(|hw| (hw.k.clone(), hw.s.clone())).collect();
    found.sort_by_key(|(k, s)| (k.to_string(), s.to_string()));
    let mut expected = vec![(Scalar::zero(), Scalar::zero()), (Scalar::one(), -&kappa), (Scalar::one(), kappa)];
    expected.sort_by_key(|(k, s)| (k.to_string(), s.to_string()));
    assert_eq!(found, expected);
    for hw in &dec.highest_weights {
        assert_eq!(coset.op_vec(CosetOp::E, 0, &hw.vector), Vector::zero());
        assert_eq!(coset.op_vec(CosetOp::F, 1, &hw.vector), Vector::zero());
        assert_eq!(coset.op_vec(CosetOp::H, 0, &hw.vector), hw.vector.scaled(&hw.k));
    }
}
