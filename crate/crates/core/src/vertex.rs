//! Vertex operators of the universal vacuum algebra `V(c,0,0)` acting on
//! ns(2)-modules.
//!
//! A state of the vacuum module is a PBW monomial `x₁ x₂ ⋯ x_r 1`; its first
//! mode is a mode `a_(k)` of one of the generating fields
//!
//! | field | state          | modes                 |
//! |-------|----------------|-----------------------|
//! | ω     | `L(-2)1`       | `ω_(k) = L(k-1)`      |
//! | μ     | `J(-1)1`       | `μ_(k) = J(k)`        |
//! | τ±    | `G±(-3/2)1`    | `τ±_(k) = G±(k-1/2)`  |
//!
//! and `Y(a_(k) u', x)` is resolved through the iterate formula
//!
//! ```text
//! (a_(k) u')_(n) = Σ_j (-1)^j C(k,j) [ a_(k-j) u'_(n+j)
//!                                      - (-1)^k (-1)^{|a||u'|} u'_(k+n-j) a_(j) ]
//! ```
//!
//! where both sums terminate on a module whose weights are bounded below.

use std::collections::HashMap;
use std::fmt::Debug;
use std::hash::Hash;
use std::sync::Mutex;

use crate::exactfield::Scalar;
use crate::half::Half;
use crate::irreducible::{IrreducibleModule, QBasis};
use crate::lincomb::Vector;
use crate::pbw::{Grade, Monomial, PbwModule, VermaParams};
use crate::rational::binomial;
use crate::superalg::{Kind, ModeSymbol};

/// A graded ns(2)-module with a distinguished homogeneous basis.
pub trait ModeRep: Sync {
    type B: Ord + Clone + Hash + Eq + Debug + Send + Sync;

    /// Action of an ns(2) mode on a basis vector.
    fn act(&self, x: &ModeSymbol, b: &Self::B) -> Vector<Self::B>;

    /// Level of a basis vector above the lowest weight.
    fn level(&self, b: &Self::B) -> Half;

    fn parity(&self, b: &Self::B) -> u8;

    /// Basis of one grade.
    fn basis_at(&self, g: Grade) -> Vec<Self::B>;

    /// `(c, h, q)` of the lowest-weight space.
    fn lowest(&self) -> &VermaParams;

    fn act_vec(&self, x: &ModeSymbol, v: &Vector<Self::B>) -> Vector<Self::B> {
        v.map_linear(|b| self.act(x, b))
    }
}

impl ModeRep for PbwModule {
    type B = Monomial;

    fn act(&self, x: &ModeSymbol, b: &Monomial) -> Vector<Monomial> {
        self.apply_to_monomial(x, b)
    }

    fn level(&self, b: &Monomial) -> Half {
        b.grade().level
    }

    fn parity(&self, b: &Monomial) -> u8 {
        b.parity()
    }

    fn basis_at(&self, g: Grade) -> Vec<Monomial> {
        self.enumerate_basis(g)
    }

    fn lowest(&self) -> &VermaParams {
        self.params()
    }
}

impl ModeRep for IrreducibleModule {
    type B = QBasis;

    fn act(&self, x: &ModeSymbol, b: &QBasis) -> Vector<QBasis> {
        IrreducibleModule::act(self, x, b)
    }

    fn level(&self, b: &QBasis) -> Half {
        b.grade.level
    }

    fn parity(&self, b: &QBasis) -> u8 {
        b.parity()
    }

    fn basis_at(&self, g: Grade) -> Vec<QBasis> {
        self.basis(g)
    }

    fn lowest(&self) -> &VermaParams {
        self.params()
    }
}

/// One of the generating fields of the vacuum algebra.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Generator {
    Omega,
    Mu,
    TauPlus,
    TauMinus,
}

impl Generator {
    pub fn weight(self) -> Half {
        match self {
            Generator::Omega => Half::int(2),
            Generator::Mu => Half::ONE,
            Generator::TauPlus | Generator::TauMinus => Half::from_twice(3),
        }
    }

    pub fn parity(self) -> u8 {
        match self {
            Generator::TauPlus | Generator::TauMinus => 1,
            _ => 0,
        }
    }

    /// The ns(2) mode equal to the `(k)`-th mode of this field.
    pub fn mode(self, k: i64) -> ModeSymbol {
        match self {
            Generator::Omega => ModeSymbol::l(k - 1),
            Generator::Mu => ModeSymbol::j(k),
            Generator::TauPlus => ModeSymbol::g(true, 2 * k - 1),
            Generator::TauMinus => ModeSymbol::g(false, 2 * k - 1),
        }
    }

    /// The generator and field mode number of an ns(2) mode.
    pub fn of_mode(x: &ModeSymbol) -> (Generator, i64) {
        match x.kind {
            Kind::L => (Generator::Omega, x.index.to_int() + 1),
            Kind::J => (Generator::Mu, x.index.to_int()),
            Kind::Gp => (Generator::TauPlus, (x.index.twice() + 1) / 2),
            Kind::Gm => (Generator::TauMinus, (x.index.twice() + 1) / 2),
            _ => panic!("{x} is not a generating ns2 mode"),
        }
    }

    /// The state `a_(-1) 1` as a vacuum-module monomial.
    pub fn state(self) -> Monomial {
        Monomial::from_sorted(vec![self.mode(-1)])
    }
}

/// Modes of vacuum-algebra states acting on a module, memoized per
/// `(state, mode number, basis vector)`.
pub struct FieldAction<'a, R: ModeRep> {
    rep: &'a R,
    cache: Mutex<HashMap<(Monomial, i64, R::B), Vector<R::B>>>,
}

impl<'a, R: ModeRep> FieldAction<'a, R> {
    pub fn new(rep: &'a R) -> Self {
        FieldAction { rep, cache: Mutex::default() }
    }

    pub fn rep(&self) -> &'a R {
        self.rep
    }

    /// `a_(k)` on a basis vector for a generating field `a`.
    pub fn generator_mode(&self, a: Generator, k: i64, b: &R::B) -> Vector<R::B> {
        self.rep.act(&a.mode(k), b)
    }

    pub fn generator_mode_vec(&self, a: Generator, k: i64, v: &Vector<R::B>) -> Vector<R::B> {
        v.map_linear(|b| self.generator_mode(a, k, b))
    }

    /// `u_(n) b` for a vacuum-module monomial `u`.
    pub fn mode(&self, u: &Monomial, n: i64, b: &R::B) -> Vector<R::B> {
        if u.is_one() {
            return if n == -1 { Vector::basis(b.clone()) } else { Vector::zero() };
        }
        let (a, k) = Generator::of_mode(&u.modes()[0]);
        if u.modes().len() == 1 && k == -1 {
            return self.generator_mode(a, n, b);
        }
        // The output weight is level(b) + wt(u) - n - 1.
        if self.rep.level(b) + u.grade().level < Half::int(n + 1) {
            return Vector::zero();
        }
        let key = (u.clone(), n, b.clone());
        if let Some(v) = self.cache.lock().expect("field cache").get(&key) {
            return v.clone();
        }
        let out = self.iterate(a, k, &Monomial::from_sorted(u.modes()[1..].to_vec()), n, b);
        self.cache.lock().expect("field cache").insert(key, out.clone());
        out
    }

    fn iterate(&self, a: Generator, k: i64, rest: &Monomial, n: i64, b: &R::B) -> Vector<R::B> {
        let lv = self.rep.level(b);
        let wr = rest.grade().level;
        // rest_(n+j) b vanishes once n+j+1 > lv + wr; a_(j) b once j+1 > lv + wt(a).
        let bound1 = (lv + wr).floor() - n - 1;
        let bound2 = (lv + a.weight()).floor() - 1;
        let jmax = bound1.max(bound2);
        let koszul = if a.parity() * rest.parity() == 1 { -1 } else { 1 };
        let sign_k = if k.rem_euclid(2) == 1 { -1 } else { 1 };
        let mut out = Vector::zero();
        for j in 0..=jmax.max(-1) {
            let c = binomial(k, j);
            if c.is_zero() {
                continue;
            }
            let c = Scalar::from_rat(if j % 2 == 1 { -c } else { c });
            if j <= bound1 {
                let inner = self.mode(rest, n + j, b);
                out.add_scaled(&self.generator_mode_vec(a, k - j, &inner), &c);
            }
            if j <= bound2 {
                let inner = self.generator_mode(a, j, b);
                let t = self.mode_vec(rest, k + n - j, &inner);
                out.add_scaled(&t, &c.scale(&crate::rational::Rat::from_int(-sign_k * koszul)));
            }
        }
        out
    }

    pub fn mode_vec(&self, u: &Monomial, n: i64, v: &Vector<R::B>) -> Vector<R::B> {
        v.map_linear(|b| self.mode(u, n, b))
    }

    /// `u_(n) v` for a vacuum-module vector `u`.
    pub fn state_mode(&self, u: &Vector<Monomial>, n: i64, v: &Vector<R::B>) -> Vector<R::B> {
        let mut out = Vector::zero();
        for (m, c) in u.iter() {
            out.add_scaled(&self.mode_vec(m, n, v), c);
        }
        out
    }
}
