//! Vertex operators with two odd formal variables on the vacuum algebra
//! `V(c,0,0)`.
//!
//! With `G₁ = (G⁺ + G⁻)/√2` and `G₂ = (G⁺ - G⁻)/√(-2)`, where
//! `√(-2) = i√2`, a state `u` gets the four-component operator
//!
//! ```text
//! Y(u,(x,φ₁,φ₂)) = Y(u,x) + φ₁ Y(G₁(-1/2)u,x) + φ₂ Y(G₂(-1/2)u,x)
//!                  + φ₁φ₂ Y(G₂(-1/2)G₁(-1/2)u,x)
//! ```
//!
//! The top component is written with `G₂G₁ = -G₁G₂`; this ordering is the
//! one for which the `G_i(-1/2)`-derivative property holds with left odd
//! derivatives.
//!
//! Elements of `V((x))[φ₁,φ₂]` are stored with the odd variables on the
//! left, `Σ_I φ^I v_I`, and an operator `A` of parity `|A|` acts by
//! `A φ^I v = (-1)^{|A||I|} φ^I A v`.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::exactfield::Scalar;
use crate::half::Half;
use crate::lincomb::Vector;
use crate::pbw::{Grade, Monomial, PbwModule};
use crate::rational::binomial;
use crate::superalg::{bracket, ModeSymbol};
use crate::vertex::{FieldAction, Generator};

/// Bit mask of `φ₁`.
pub const PHI1: u8 = 1;
/// Bit mask of `φ₂`.
pub const PHI2: u8 = 2;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OddVarError {
    #[error("state weight {weight} exceeds the admissible bound {bound}")]
    BeyondCutoff { weight: Half, bound: Half },
    #[error("state is not homogeneous in weight and parity")]
    Inhomogeneous,
}

fn degree(mask: u8) -> u8 {
    mask.count_ones() as u8
}

/// `φ^a φ^b = sign φ^{a|b}`, or `None` when a variable repeats.
pub fn phi_product(a: u8, b: u8) -> Option<(u8, i64)> {
    if a & b != 0 {
        return None;
    }
    // Only φ₂ φ₁ needs a transposition.
    let sign = if a & PHI2 != 0 && b & PHI1 != 0 { -1 } else { 1 };
    Some((a | b, sign))
}

/// A scalar element of the exterior algebra on `φ₁, φ₂`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PhiScalar(pub [Scalar; 4]);

impl PhiScalar {
    pub fn var(mask: u8) -> Self {
        let mut c: [Scalar; 4] = Default::default();
        c[mask as usize] = Scalar::one();
        PhiScalar(c)
    }

    pub fn scaled(&self, s: &Scalar) -> Self {
        PhiScalar(std::array::from_fn(|k| &self.0[k] * s))
    }

    pub fn add(&self, o: &PhiScalar) -> Self {
        PhiScalar(std::array::from_fn(|k| &self.0[k] + &o.0[k]))
    }

    pub fn mul(&self, o: &PhiScalar) -> Self {
        let mut out: [Scalar; 4] = Default::default();
        for a in 0..4u8 {
            for b in 0..4u8 {
                if let Some((ab, sign)) = phi_product(a, b) {
                    out[ab as usize] += &(&(&self.0[a as usize] * &o.0[b as usize]) * &Scalar::from_int(sign));
                }
            }
        }
        PhiScalar(out)
    }
}

/// `Σ_I φ^I v_I` with `v_I` in a vector space with basis `K`.
#[derive(Debug, Clone, PartialEq)]
pub struct Grassmann<K: Ord + Clone> {
    pub slots: [Vector<K>; 4],
}

impl<K: Ord + Clone> Default for Grassmann<K> {
    fn default() -> Self {
        Grassmann { slots: std::array::from_fn(|_| Vector::zero()) }
    }
}

impl<K: Ord + Clone> Grassmann<K> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn even(v: Vector<K>) -> Self {
        let mut g = Self::zero();
        g.slots[0] = v;
        g
    }

    pub fn is_zero(&self) -> bool {
        self.slots.iter().all(Vector::is_zero)
    }

    pub fn add(&mut self, o: &Grassmann<K>) {
        for (a, b) in self.slots.iter_mut().zip(&o.slots) {
            a.add_vec(b);
        }
    }

    pub fn sub(&self, o: &Grassmann<K>) -> Self {
        Grassmann { slots: std::array::from_fn(|k| self.slots[k].sub(&o.slots[k])) }
    }

    pub fn scaled(&self, c: &Scalar) -> Self {
        Grassmann { slots: std::array::from_fn(|k| self.slots[k].scaled(c)) }
    }

    /// Left multiplication by an exterior-algebra scalar.
    pub fn left_mul(&self, s: &PhiScalar) -> Self {
        let mut out = Self::zero();
        for a in 0..4u8 {
            if s.0[a as usize].is_zero() {
                continue;
            }
            for b in 0..4u8 {
                if let Some((ab, sign)) = phi_product(a, b) {
                    let c = &s.0[a as usize] * &Scalar::from_int(sign);
                    out.slots[ab as usize].add_scaled(&self.slots[b as usize], &c);
                }
            }
        }
        out
    }

    /// Left multiplication by the monomial `φ^mask`.
    pub fn mul_phi(&self, mask: u8) -> Self {
        self.left_mul(&PhiScalar::var(mask))
    }

    /// Left derivative `∂/∂φ_i`, `i` given as a mask.
    pub fn deriv_phi(&self, var: u8) -> Self {
        let mut out = Self::zero();
        for mask in 0..4u8 {
            if mask & var == 0 {
                continue;
            }
            let rest = mask & !var;
            let (_, sign) = phi_product(var, rest).expect("disjoint");
            out.slots[rest as usize].add_scaled(&self.slots[mask as usize], &Scalar::from_int(sign));
        }
        out
    }

    /// `A φ^I v = (-1)^{|A||I|} φ^I A v` for an operator of the given parity.
    pub fn apply<L: Ord + Clone>(&self, parity: u8, mut op: impl FnMut(&Vector<K>) -> Vector<L>) -> Grassmann<L> {
        Grassmann {
            slots: std::array::from_fn(|mask| {
                let v = op(&self.slots[mask]);
                if parity == 1 && degree(mask as u8) % 2 == 1 {
                    v.neg()
                } else {
                    v
                }
            }),
        }
    }
}

/// The four component states of `Y(u,(x,φ₁,φ₂))`, indexed by `φ`-mask.
#[derive(Debug, Clone, PartialEq)]
pub struct OddVertexOperator {
    pub components: [Vector<Monomial>; 4],
    pub weight: Half,
    pub parity: u8,
}

impl OddVertexOperator {
    /// Parity of the component on `φ^mask`.
    pub fn component_parity(&self, mask: u8) -> u8 {
        (self.parity + degree(mask)) % 2
    }
}

/// Outcome of one identity: compared coefficient slots and failures.
#[derive(Debug, Clone, Default, Serialize, PartialEq, Eq)]
pub struct IdentityCheck {
    pub slots: usize,
    pub failures: Vec<String>,
}

impl IdentityCheck {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.slots += 1;
        if !ok && self.failures.len() < 20 {
            self.failures.push(what());
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct OddVarReport {
    pub c: Scalar,
    pub max_weight: Half,
    pub cutoff: Half,
    pub states: usize,
    pub identities: BTreeMap<String, IdentityCheck>,
}

impl OddVarReport {
    pub fn passed(&self) -> bool {
        self.identities.values().all(IdentityCheck::passed)
    }
}

/// Odd-variable calculus on `V(c,0,0)`, truncated at a weight cutoff.
pub struct OddCalculus<'a> {
    vac: &'a PbwModule,
    fa: FieldAction<'a, PbwModule>,
    cutoff: Half,
}

impl<'a> OddCalculus<'a> {
    pub fn new(vac: &'a PbwModule, cutoff: Half) -> Self {
        OddCalculus { vac, fa: FieldAction::new(vac), cutoff }
    }

    pub fn module(&self) -> &'a PbwModule {
        self.vac
    }

    pub fn cutoff(&self) -> Half {
        self.cutoff
    }

    /// Weight and parity of a homogeneous vector (zero counts as weight 0).
    pub fn homogeneous(v: &Vector<Monomial>) -> Result<(Half, u8), OddVarError> {
        let mut it = v.keys().map(|m| (m.grade().level, m.parity()));
        let first = it.next().unwrap_or((Half::ZERO, 0));
        if it.all(|x| x == first) {
            Ok(first)
        } else {
            Err(OddVarError::Inhomogeneous)
        }
    }

    /// `G_i(-1/2)` on a vector, `i` given as a mask.
    pub fn g_minus_half(&self, var: u8, v: &Vector<Monomial>) -> Vector<Monomial> {
        let plus = self.vac.apply_vec(&ModeSymbol::g(true, -1), v);
        let minus = self.vac.apply_vec(&ModeSymbol::g(false, -1), v);
        let inv_sqrt2 = Scalar::sqrt2().inverse().expect("nonzero");
        if var == PHI1 {
            let mut s = plus;
            s.add_vec(&minus);
            s.scaled(&inv_sqrt2)
        } else {
            // 1/√(-2) = -i/√2.
            plus.sub(&minus).scaled(&(&(-Scalar::i()) * &inv_sqrt2))
        }
    }

    /// `u_(n) v` for the ordinary vertex operator of `u`.
    pub fn reconstruct(&self, u: &Vector<Monomial>, n: i64, v: &Vector<Monomial>) -> Result<Vector<Monomial>, OddVarError> {
        let (w, _) = Self::homogeneous(u)?;
        if w > self.cutoff {
            return Err(OddVarError::BeyondCutoff { weight: w, bound: self.cutoff });
        }
        Ok(self.fa.state_mode(u, n, v))
    }

    /// The four components of `Y(u,(x,φ₁,φ₂))`.
    pub fn assemble_odd(&self, u: &Vector<Monomial>) -> Result<OddVertexOperator, OddVarError> {
        let (weight, parity) = Self::homogeneous(u)?;
        let bound = self.cutoff - Half::HALF;
        if weight > bound {
            return Err(OddVarError::BeyondCutoff { weight, bound });
        }
        let g1 = self.g_minus_half(PHI1, u);
        let g2 = self.g_minus_half(PHI2, u);
        let g21 = self.g_minus_half(PHI2, &g1);
        Ok(OddVertexOperator { components: [u.clone(), g1, g2, g21], weight, parity })
    }

    /// Coefficient of `x^k` in `Y(u,(x,φ₁,φ₂))v`.
    pub fn coefficient(&self, op: &OddVertexOperator, k: i64, v: &Vector<Monomial>) -> Grassmann<Monomial> {
        Grassmann { slots: std::array::from_fn(|mask| self.fa.state_mode(&op.components[mask], -k - 1, v)) }
    }

    /// Weight of the `φ^mask x^k` coefficient of `Y(u,(x,φ))v`.
    fn slot_weight(wu: Half, wv: Half, k: i64, mask: u8) -> Half {
        wu + wv + Half::int(k) + Half::from_twice(degree(mask) as i64)
    }

    /// Powers `x^k` whose coefficients can be nonzero and have a slot of
    /// weight at most the cutoff.
    fn powers(&self, wu: Half, wv: Half) -> std::ops::RangeInclusive<i64> {
        let lo = -(wu + wv).ceil() - 2;
        let hi = (self.cutoff - wu - wv).floor();
        lo..=hi
    }

    fn compare(&self, check: &mut IdentityCheck, lhs: &Grassmann<Monomial>, rhs: &Grassmann<Monomial>, weights: (Half, Half, i64), what: &dyn Fn(u8) -> String) {
        let (wu, wv, k) = weights;
        for mask in 0..4u8 {
            if Self::slot_weight(wu, wv, k, mask) > self.cutoff {
                continue;
            }
            check.record(lhs.slots[mask as usize] == rhs.slots[mask as usize], || what(mask));
        }
    }

    /// All basis states of weight at most `max_weight`.
    pub fn states(&self, max_weight: Half) -> Vec<Monomial> {
        let mut out = Vec::new();
        let mut level = Half::ZERO;
        while level <= max_weight {
            for g in Grade::charges_at(level) {
                out.extend(self.vac.enumerate_basis(g));
            }
            level += Half::HALF;
        }
        out
    }

    /// `Y(1,(x,φ)) = 1` on every state.
    pub fn check_vacuum(&self, states: &[Monomial]) -> IdentityCheck {
        let mut check = IdentityCheck::default();
        let op = self.assemble_odd(&Vector::basis(Monomial::one())).expect("vacuum is admissible");
        for v in states {
            let wv = v.grade().level;
            let vv = Vector::basis(v.clone());
            for k in self.powers(Half::ZERO, wv) {
                let lhs = self.coefficient(&op, k, &vv);
                let rhs = if k == 0 { Grassmann::even(vv.clone()) } else { Grassmann::zero() };
                self.compare(&mut check, &lhs, &rhs, (Half::ZERO, wv, k), &|mask| format!("vacuum x^{k} φ^{mask} on {v}"));
            }
        }
        check
    }

    /// `Y(u,(x,φ))1` has no negative powers and reduces to `u` at `x = φ = 0`.
    pub fn check_creation(&self, states: &[Monomial]) -> IdentityCheck {
        let mut check = IdentityCheck::default();
        let one = Vector::basis(Monomial::one());
        for u in states {
            let uu = Vector::basis(u.clone());
            let Ok(op) = self.assemble_odd(&uu) else { continue };
            let wu = u.grade().level;
            for k in self.powers(wu, Half::ZERO) {
                if k > 0 {
                    break;
                }
                let lhs = self.coefficient(&op, k, &one);
                if k < 0 {
                    self.compare(&mut check, &lhs, &Grassmann::zero(), (wu, Half::ZERO, k), &|mask| {
                        format!("creation x^{k} φ^{mask} for {u}")
                    });
                } else {
                    check.record(lhs.slots[0] == uu, || format!("creation limit for {u}"));
                }
            }
        }
        check
    }

    /// `Y(G_i(-1/2)u,(x,φ)) = (∂/∂φ_i + φ_i ∂/∂x) Y(u,(x,φ))`.
    pub fn check_g_derivative(&self, var: u8, states: &[Monomial], targets: &[Monomial]) -> IdentityCheck {
        let mut check = IdentityCheck::default();
        for u in states {
            let uu = Vector::basis(u.clone());
            let gu = self.g_minus_half(var, &uu);
            let (Ok(op), Ok(gop)) = (self.assemble_odd(&uu), self.assemble_odd(&gu)) else { continue };
            let wu = u.grade().level;
            for v in targets {
                let wv = v.grade().level;
                let vv = Vector::basis(v.clone());
                for k in self.powers(wu, wv) {
                    // The G_i u coefficients sit half a unit higher.
                    let lhs = self.coefficient(&gop, k, &vv);
                    let mut rhs = self.coefficient(&op, k, &vv).deriv_phi(var);
                    let next = self.coefficient(&op, k + 1, &vv).scaled(&Scalar::from_int(k + 1));
                    rhs.add(&next.mul_phi(var));
                    self.compare(&mut check, &lhs, &rhs, (wu + Half::HALF, wv, k), &|mask| {
                        format!("G{var} derivative x^{k} φ^{mask} for {u} on {v}")
                    });
                }
            }
        }
        check
    }

    /// `Y(L(-1)u,(x,φ)) = ∂/∂x Y(u,(x,φ))`.
    pub fn check_l_derivative(&self, states: &[Monomial], targets: &[Monomial]) -> IdentityCheck {
        let mut check = IdentityCheck::default();
        for u in states {
            let uu = Vector::basis(u.clone());
            let lu = self.vac.apply_vec(&ModeSymbol::l(-1), &uu);
            let (Ok(op), Ok(lop)) = (self.assemble_odd(&uu), self.assemble_odd(&lu)) else { continue };
            let wu = u.grade().level;
            for v in targets {
                let wv = v.grade().level;
                let vv = Vector::basis(v.clone());
                for k in self.powers(wu + Half::ONE, wv) {
                    let lhs = self.coefficient(&lop, k, &vv);
                    let rhs = self.coefficient(&op, k + 1, &vv).scaled(&Scalar::from_int(k + 1));
                    self.compare(&mut check, &lhs, &rhs, (wu + Half::ONE, wv, k), &|mask| {
                        format!("L(-1) derivative x^{k} φ^{mask} for {u} on {v}")
                    });
                }
            }
        }
        check
    }

    /// `x^k` coefficient of `Y(v,(-x,-φ₁,-φ₂))u`.
    fn reflected(&self, op: &OddVertexOperator, k: i64, u: &Vector<Monomial>) -> Grassmann<Monomial> {
        let mut g = self.coefficient(op, k, u);
        for mask in 0..4u8 {
            let flips = degree(mask) as i64 + k;
            if flips.rem_euclid(2) == 1 {
                g.slots[mask as usize] = g.slots[mask as usize].neg();
            }
        }
        g
    }

    /// `(1 + φ₁G₁ + φ₂G₂ - φ₁φ₂G₁G₂)` applied to an element of `V[φ]`.
    fn odd_translation(&self, g: &Grassmann<Monomial>) -> Grassmann<Monomial> {
        let mut out = g.clone();
        out.add(&g.apply(1, |v| self.g_minus_half(PHI1, v)).mul_phi(PHI1));
        out.add(&g.apply(1, |v| self.g_minus_half(PHI2, v)).mul_phi(PHI2));
        let g12 = g.apply(0, |v| self.g_minus_half(PHI1, &self.g_minus_half(PHI2, v)));
        out.add(&g12.mul_phi(PHI1 | PHI2).scaled(&Scalar::from_int(-1)));
        out
    }

    /// `Y(u,(x,φ))v = (-1)^{|u||v|} e^{xL(-1)+φ₁G₁(-1/2)+φ₂G₂(-1/2)} Y(v,(-x,-φ))u`.
    pub fn check_skew_symmetry(&self, states: &[Monomial]) -> IdentityCheck {
        let mut check = IdentityCheck::default();
        for u in states {
            let uu = Vector::basis(u.clone());
            let Ok(uop) = self.assemble_odd(&uu) else { continue };
            let wu = u.grade().level;
            for v in states {
                let vv = Vector::basis(v.clone());
                let Ok(vop) = self.assemble_odd(&vv) else { continue };
                let wv = v.grade().level;
                let sign = Scalar::from_int(if u.parity() * v.parity() == 1 { -1 } else { 1 });
                let range = self.powers(wu, wv);
                let kmin = *range.start();
                for k in range {
                    let lhs = self.coefficient(&uop, k, &vv);
                    let mut rhs = Grassmann::zero();
                    // e^{xL(-1)} contributes x^a L(-1)^a / a!.
                    let mut fact = Scalar::one();
                    for a in 0..=(k - kmin) {
                        if a > 0 {
                            fact = &fact * &Scalar::frac(1, a);
                        }
                        let mut term = self.odd_translation(&self.reflected(&vop, k - a, &uu));
                        for _ in 0..a {
                            term = term.apply(0, |x| self.vac.apply_vec(&ModeSymbol::l(-1), x));
                        }
                        rhs.add(&term.scaled(&fact));
                    }
                    let rhs = rhs.scaled(&sign);
                    self.compare(&mut check, &lhs, &rhs, (wu, wv, k), &|mask| format!("skew x^{k} φ^{mask} for {u}, {v}"));
                }
            }
        }
        check
    }

    /// `[a_(m), b_(n)]` from reconstructed operators,
    /// `Σ_j C(m,j) (a_(j)b)_(m+n-j)`, against the ns(2) table and against
    /// composition, for generators and `|m|, |n| ≤ max_index`.
    pub fn check_generator_brackets(&self, max_index: i64, targets: &[Monomial]) -> IdentityCheck {
        let mut check = IdentityCheck::default();
        let gens = [Generator::TauPlus, Generator::TauMinus, Generator::Mu, Generator::Omega];
        for a in gens {
            for b in gens {
                let sa = Vector::basis(a.state());
                let sb = Vector::basis(b.state());
                let koszul = Scalar::from_int(if a.parity() * b.parity() == 1 { -1 } else { 1 });
                // a_(j) b vanishes once j + 1 > wt(a) + wt(b).
                let jmax = (a.weight() + b.weight()).floor() - 1;
                let products: Vec<Vector<Monomial>> = (0..=jmax).map(|j| self.fa.state_mode(&sa, j, &sb)).collect();
                for m in -max_index..=max_index {
                    for n in -max_index..=max_index {
                        let table = bracket(&a.mode(m), &b.mode(n)).expect("ns2 modes");
                        for w in targets {
                            let ww = Vector::basis(w.clone());
                            let mut expected = Vector::zero();
                            for (z, c) in table.iter() {
                                let zw = if z.is_central() { ww.scaled(&self.vac.params().c) } else { self.vac.apply_vec(z, &ww) };
                                expected.add_scaled(&zw, c);
                            }
                            let mut from_products = Vector::zero();
                            for (j, p) in products.iter().enumerate() {
                                let c = Scalar::from_rat(binomial(m, j as i64));
                                from_products.add_scaled(&self.fa.state_mode(p, m + n - j as i64, &ww), &c);
                            }
                            let ab = self.fa.state_mode(&sa, m, &self.fa.state_mode(&sb, n, &ww));
                            let ba = self.fa.state_mode(&sb, n, &self.fa.state_mode(&sa, m, &ww));
                            let composed = ab.sub(&ba.scaled(&koszul));
                            check.record(from_products == expected && composed == expected, || {
                                format!("[{}_({m}), {}_({n})] on {w}", a.state(), b.state())
                            });
                        }
                    }
                }
            }
        }
        check
    }

    /// Every identity on states of weight at most `max_weight`.
    pub fn check_all(&self, max_weight: Half, max_index: i64) -> OddVarReport {
        let states = self.states(max_weight);
        let mut identities = BTreeMap::new();
        identities.insert("vacuum".to_string(), self.check_vacuum(&states));
        identities.insert("creation".to_string(), self.check_creation(&states));
        identities.insert("g1-derivative".to_string(), self.check_g_derivative(PHI1, &states, &states));
        identities.insert("g2-derivative".to_string(), self.check_g_derivative(PHI2, &states, &states));
        identities.insert("l-derivative".to_string(), self.check_l_derivative(&states, &states));
        identities.insert("skew-symmetry".to_string(), self.check_skew_symmetry(&states));
        identities.insert("generator-brackets".to_string(), self.check_generator_brackets(max_index, &states));
        OddVarReport { c: self.vac.params().c.clone(), max_weight, cutoff: self.cutoff, states: states.len(), identities }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phi_laws() {
        let p1 = PhiScalar::var(PHI1);
        let p2 = PhiScalar::var(PHI2);
        assert_eq!(p1.mul(&p1), PhiScalar::default());
        assert_eq!(p1.mul(&p2), p2.mul(&p1).scaled(&Scalar::from_int(-1)));
    }

    #[test]
    fn current_expansion() {
        let vac = PbwModule::vacuum(Scalar::one());
        let calc = OddCalculus::new(&vac, Half::from_twice(7));
        let h = Vector::basis(Generator::Mu.state());
        let op = calc.assemble_odd(&h).unwrap();
        let tp = Vector::basis(Generator::TauPlus.state());
        let tm = Vector::basis(Generator::TauMinus.state());
        let s2 = Scalar::sqrt2();
        let tau1 = { let mut t = tp.clone(); t.add_vec(&tm); t.scaled(&s2.inverse().unwrap()) };
        let tau2 = tp.sub(&tm).scaled(&(&Scalar::i() * &s2).inverse().unwrap());
        let i = Scalar::i();
        assert_eq!(op.components[1], tau2.scaled(&-&i));
        assert_eq!(op.components[2], tau1.scaled(&i));
        let omega = Vector::basis(Generator::Omega.state());
        assert_eq!(op.components[3], omega.scaled(&(&i * &Scalar::from_int(-2))));
    }
}
