//! PBW monomials and the normal-ordering action of ns(2) on highest-weight
//! modules induced from a parabolic subalgebra.
//!
//! Two modules are supported. The Verma module `M(c,h,q)` uses every
//! negative mode as a creation operator. The vacuum module `V(c,0,0)` is
//! induced from the subalgebra spanned by `L_{n>=-1}`, `J_{n>=0}`,
//! `G±_{r>=-1/2}` and `C`, which is the Verma vacuum module modulo the
//! submodule generated by `G±_{-1/2}1`; its creation operators are `L_{n<=-2}`,
//! `J_{n<=-1}` and `G±_{r<=-3/2}`.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use serde::{Serialize, Serializer};

use crate::exactfield::Scalar;
use crate::half::Half;
use crate::lincomb::Vector;
use crate::shapovalov::GramMatrix;
use crate::superalg::{bracket, grading, Algebra, Kind, LinComb, ModeSymbol};

/// Central charge, lowest conformal weight and U(1) charge.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, serde::Deserialize)]
pub struct VermaParams {
    pub c: Scalar,
    pub h: Scalar,
    pub q: Scalar,
}

impl VermaParams {
    pub fn new(c: Scalar, h: Scalar, q: Scalar) -> Self {
        VermaParams { c, h, q }
    }

    pub fn vacuum(c: Scalar) -> Self {
        VermaParams { c, h: Scalar::zero(), q: Scalar::zero() }
    }
}

/// A grade `(level, relative charge)` of a highest-weight module.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, serde::Deserialize)]
pub struct Grade {
    pub level: Half,
    pub charge: i64,
}

impl Grade {
    pub const ZERO: Grade = Grade { level: Half::ZERO, charge: 0 };

    pub fn new(level: Half, charge: i64) -> Self {
        Grade { level, charge }
    }

    /// The grade reached by applying a mode of the given symbol.
    pub fn shifted(self, x: &ModeSymbol) -> Grade {
        let g = grading(x).expect("non-central mode");
        Grade { level: self.level + g.weight, charge: self.charge + g.charge }
    }

    /// The grade from which a mode of the given symbol lands here.
    pub fn unshifted(self, x: &ModeSymbol) -> Grade {
        let g = grading(x).expect("non-central mode");
        Grade { level: self.level - g.weight, charge: self.charge - g.charge }
    }

    /// Largest possible `|charge|` at this level: `n` like-signed fermions
    /// need level at least `n²/2`.
    pub fn max_charge_at(level: Half) -> i64 {
        let mut n = 0;
        while Half::from_twice((n + 1) * (n + 1)) <= level {
            n += 1;
        }
        n
    }

    /// Every grade at a level whose charge is not excluded by
    /// [`Grade::max_charge_at`].
    pub fn charges_at(level: Half) -> Vec<Grade> {
        let q = Grade::max_charge_at(level);
        (-q..=q).map(|c| Grade::new(level, c)).collect()
    }
}

impl fmt::Display for Grade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(level {}, charge {})", self.level, self.charge)
    }
}

/// An ordered product of creation modes applied to the highest-weight vector.
///
/// Factors are stored in canonical order (see [`ModeSymbol::pbw_key`]).
/// Monomials are ordered by length, then lexicographically by factor.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Vec<ModeSymbol>);

impl Monomial {
    pub fn one() -> Monomial {
        Monomial(Vec::new())
    }

    /// Builds a monomial from factors that are already in canonical order.
    pub fn from_sorted(modes: Vec<ModeSymbol>) -> Monomial {
        debug_assert!(modes.windows(2).all(|w| w[0] < w[1] || (w[0] == w[1] && !w[0].is_odd())));
        Monomial(modes)
    }

    pub fn modes(&self) -> &[ModeSymbol] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn grade(&self) -> Grade {
        self.0.iter().fold(Grade::ZERO, |g, x| g.shifted(x))
    }

    /// Number of odd factors modulo two.
    pub fn parity(&self) -> u8 {
        (self.0.iter().filter(|x| x.is_odd()).count() % 2) as u8
    }

    fn split_first(&self) -> Option<(ModeSymbol, Monomial)> {
        self.0.split_first().map(|(x, rest)| (*x, Monomial(rest.to_vec())))
    }

    fn prepend(&self, x: ModeSymbol) -> Monomial {
        let mut v = Vec::with_capacity(self.0.len() + 1);
        v.push(x);
        v.extend_from_slice(&self.0);
        Monomial(v)
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "{}", parts.join(" "))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for Monomial {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Which highest-weight module a [`PbwModule`] realizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModuleKind {
    Verma,
    Vacuum,
}

/// A highest-weight ns(2)-module with a PBW basis and memoized action.
pub struct PbwModule {
    params: VermaParams,
    kind: ModuleKind,
    cache: Mutex<HashMap<(ModeSymbol, Monomial), Vector<Monomial>>>,
    pub(crate) grams: Mutex<HashMap<Grade, Arc<GramMatrix>>>,
}

impl fmt::Debug for PbwModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PbwModule").field("params", &self.params).field("kind", &self.kind).finish()
    }
}

impl PbwModule {
    pub fn verma(params: VermaParams) -> PbwModule {
        PbwModule { params, kind: ModuleKind::Verma, cache: Mutex::default(), grams: Mutex::default() }
    }

    /// The vacuum module `V(c,0,0)`.
    pub fn vacuum(c: Scalar) -> PbwModule {
        PbwModule {
            params: VermaParams::vacuum(c),
            kind: ModuleKind::Vacuum,
            cache: Mutex::default(),
            grams: Mutex::default(),
        }
    }

    pub fn params(&self) -> &VermaParams {
        &self.params
    }

    pub fn kind(&self) -> ModuleKind {
        self.kind
    }

    /// Whether `x` is one of the free generators of the module.
    pub fn is_creation(&self, x: &ModeSymbol) -> bool {
        if x.is_central() {
            return false;
        }
        let t = x.index.twice();
        match self.kind {
            ModuleKind::Verma => t < 0,
            ModuleKind::Vacuum => match x.kind {
                Kind::L => t <= -4,
                Kind::J => t <= -2,
                Kind::Gp | Kind::Gm => t <= -3,
                _ => false,
            },
        }
    }

    /// Creation modes with `|index| <= bound`, in canonical order.
    pub fn creation_modes(&self, bound: Half) -> Vec<ModeSymbol> {
        let mut out: Vec<ModeSymbol> = crate::superalg::generators(Algebra::Ns2, bound)
            .into_iter()
            .filter(|x| self.is_creation(x))
            .collect();
        out.sort();
        out
    }

    /// Action of a non-creation mode on the highest-weight vector.
    fn eigen(&self, x: &ModeSymbol) -> Scalar {
        match (x.kind, x.index.twice()) {
            (Kind::C, _) => self.params.c.clone(),
            (Kind::L, 0) => self.params.h.clone(),
            (Kind::J, 0) => self.params.q.clone(),
            _ => Scalar::zero(),
        }
    }

    /// The PBW basis of a grade, in canonical order.
    pub fn enumerate_basis(&self, grade: Grade) -> Vec<Monomial> {
        let mut out = Vec::new();
        if grade.level < Half::ZERO {
            return out;
        }
        let modes = self.creation_modes(grade.level);
        let mut cur = Vec::new();
        enumerate_rec(&modes, 0, grade, &mut cur, &mut out);
        out.sort();
        out
    }

    /// `x · mono` as a combination of canonical monomials.
    pub fn apply_to_monomial(&self, x: &ModeSymbol, mono: &Monomial) -> Vector<Monomial> {
        assert_eq!(x.algebra, Algebra::Ns2, "only ns2 modes act on ns2 modules");
        if x.is_central() {
            return Vector::term(mono.clone(), self.params.c.clone());
        }
        let key = (*x, mono.clone());
        if let Some(v) = self.cache.lock().expect("cache lock").get(&key) {
            return v.clone();
        }
        let out = self.apply_uncached(x, mono);
        self.cache.lock().expect("cache lock").insert(key, out.clone());
        out
    }

    fn apply_uncached(&self, x: &ModeSymbol, mono: &Monomial) -> Vector<Monomial> {
        let Some((y, rest)) = mono.split_first() else {
            return if self.is_creation(x) {
                Vector::basis(Monomial(vec![*x]))
            } else {
                Vector::term(Monomial::one(), self.eigen(x))
            };
        };
        if self.is_creation(x) {
            match x.cmp(&y) {
                Ordering::Less => return Vector::basis(mono.prepend(*x)),
                Ordering::Equal if !x.is_odd() => return Vector::basis(mono.prepend(*x)),
                Ordering::Equal => return Vector::zero(),
                Ordering::Greater => {}
            }
        }
        // x y rest = (-1)^{|x||y|} y (x rest) + [x, y] rest
        let sign = if x.is_odd() && y.is_odd() { -1 } else { 1 };
        let inner = self.apply_to_monomial(x, &rest);
        let mut out = self.apply_vec(&y, &inner).scaled(&Scalar::from_int(sign));
        let br = bracket(x, &y).expect("same algebra");
        out.add_vec(&self.apply_lincomb(&br, &rest));
        out
    }

    /// Applies a mode to a combination of monomials.
    pub fn apply_vec(&self, x: &ModeSymbol, v: &Vector<Monomial>) -> Vector<Monomial> {
        v.map_linear(|m| self.apply_to_monomial(x, m))
    }

    /// Applies a combination of modes (central terms act by `c`).
    pub fn apply_lincomb(&self, lc: &LinComb, mono: &Monomial) -> Vector<Monomial> {
        let mut out = Vector::zero();
        for (x, c) in lc.iter() {
            out.add_scaled(&self.apply_to_monomial(x, mono), c);
        }
        out
    }

    /// Applies a word of modes, rightmost first.
    pub fn apply_word(&self, word: &[ModeSymbol], v: &Vector<Monomial>) -> Vector<Monomial> {
        word.iter().rev().fold(v.clone(), |acc, x| self.apply_vec(x, &acc))
    }

    /// `apply_mode` on a graded state vector.
    pub fn apply_mode(&self, x: &ModeSymbol, v: &StateVector) -> StateVector {
        StateVector { module: v.module.clone(), grade: v.grade.shifted(x), terms: self.apply_vec(x, &v.terms) }
    }

    pub fn tag(&self) -> ModuleTag {
        ModuleTag {
            kind: match self.kind {
                ModuleKind::Verma => TagKind::Verma,
                ModuleKind::Vacuum => TagKind::VacuumQuotient,
            },
            params: self.params.clone(),
        }
    }

    pub fn state(&self, grade: Grade, terms: Vector<Monomial>) -> StateVector {
        StateVector { module: self.tag(), grade, terms }
    }

    /// The highest-weight vector.
    pub fn highest_weight_vector(&self) -> StateVector {
        self.state(Grade::ZERO, Vector::basis(Monomial::one()))
    }
}

fn enumerate_rec(modes: &[ModeSymbol], start: usize, remaining: Grade, cur: &mut Vec<ModeSymbol>, out: &mut Vec<Monomial>) {
    if remaining.level == Half::ZERO {
        if remaining.charge == 0 {
            out.push(Monomial(cur.clone()));
        }
        return;
    }
    for i in start..modes.len() {
        let x = modes[i];
        let g = grading(&x).expect("non-central");
        if g.weight > remaining.level {
            continue;
        }
        // Remaining charge must stay reachable by fermions at the leftover level.
        let rest = Grade { level: remaining.level - g.weight, charge: remaining.charge - g.charge };
        if rest.charge.abs() > Grade::max_charge_at(rest.level) {
            continue;
        }
        cur.push(x);
        let next = if x.is_odd() { i + 1 } else { i };
        enumerate_rec(modes, next, rest, cur, out);
        cur.pop();
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TagKind {
    Verma,
    VacuumQuotient,
    IrreducibleQuotient,
}

/// Identifies the module a state vector lives in.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct ModuleTag {
    pub kind: TagKind,
    pub params: VermaParams,
}

/// A homogeneous vector in a PBW module.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateVector {
    pub module: ModuleTag,
    pub grade: Grade,
    pub terms: Vector<Monomial>,
}

impl StateVector {
    pub fn is_zero(&self) -> bool {
        self.terms.is_zero()
    }
}

impl Serialize for StateVector {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let terms: Vec<(String, &Scalar)> = self.terms.iter().map(|(m, c)| (m.to_string(), c)).collect();
        let mut st = s.serialize_struct("StateVector", 3)?;
        st.serialize_field("module", &self.module)?;
        st.serialize_field("grade", &self.grade)?;
        st.serialize_field("terms", &terms)?;
        st.end()
    }
}
