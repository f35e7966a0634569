//! Mode symbols and super-brackets for ns(2), Virasoro, Heisenberg and
//! affine sl2.
//!
//! Brackets are returned with the central element as an explicit symbol
//! (`C`, `d` or `K`); modules substitute its value when acting.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::exactfield::Scalar;
use crate::half::Half;
use crate::lincomb::Vector;
use crate::rational::Rat;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algebra {
    Ns2,
    Virasoro,
    Heisenberg,
    AffineSl2,
}

/// Generator names. `C`, `D` and `K` are central.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Kind {
    J,
    L,
    Gp,
    Gm,
    C,
    A,
    D,
    E,
    F,
    H,
    K,
}

impl Kind {
    pub fn is_central(self) -> bool {
        matches!(self, Kind::C | Kind::D | Kind::K)
    }

    pub fn is_odd(self) -> bool {
        matches!(self, Kind::Gp | Kind::Gm)
    }

    fn name(self) -> &'static str {
        match self {
            Kind::J => "J",
            Kind::L => "L",
            Kind::Gp => "G+",
            Kind::Gm => "G-",
            Kind::C => "C",
            Kind::A => "a",
            Kind::D => "d",
            Kind::E => "E",
            Kind::F => "F",
            Kind::H => "H",
            Kind::K => "K",
        }
    }

    fn allowed_in(self, alg: Algebra) -> bool {
        match alg {
            Algebra::Ns2 => matches!(self, Kind::J | Kind::L | Kind::Gp | Kind::Gm | Kind::C),
            Algebra::Virasoro => matches!(self, Kind::L | Kind::C),
            Algebra::Heisenberg => matches!(self, Kind::A | Kind::D),
            Algebra::AffineSl2 => matches!(self, Kind::E | Kind::F | Kind::H | Kind::K),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraError {
    #[error("cannot bracket {0} with {1}: different algebras")]
    MixedAlgebras(String, String),
    #[error("central element {0} has no grading")]
    CentralGrading(String),
    #[error("invalid mode symbol: {0}")]
    InvalidSymbol(String),
}

/// A basis element of one of the four Lie (super)algebras.
///
/// Central elements carry index zero, which is ignored in rendering.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ModeSymbol {
    pub algebra: Algebra,
    pub kind: Kind,
    pub index: Half,
}

impl ModeSymbol {
    /// Builds a symbol, validating the index lattice for the kind.
    pub fn new(algebra: Algebra, kind: Kind, index: Half) -> Result<ModeSymbol, AlgebraError> {
        let sym = ModeSymbol { algebra, kind, index: if kind.is_central() { Half::ZERO } else { index } };
        if !kind.allowed_in(algebra) {
            return Err(AlgebraError::InvalidSymbol(format!("{sym} does not belong to {algebra:?}")));
        }
        if !kind.is_central() && kind.is_odd() == index.is_integer() {
            return Err(AlgebraError::InvalidSymbol(format!("{sym}: index lattice mismatch")));
        }
        Ok(sym)
    }

    pub fn l(n: i64) -> ModeSymbol {
        ModeSymbol { algebra: Algebra::Ns2, kind: Kind::L, index: Half::int(n) }
    }

    pub fn j(n: i64) -> ModeSymbol {
        ModeSymbol { algebra: Algebra::Ns2, kind: Kind::J, index: Half::int(n) }
    }

    /// `G±_r` with `r` given as twice its value (must be odd).
    pub fn g(plus: bool, twice_r: i64) -> ModeSymbol {
        assert!(twice_r % 2 != 0, "G indices lie in Z + 1/2");
        ModeSymbol { algebra: Algebra::Ns2, kind: if plus { Kind::Gp } else { Kind::Gm }, index: Half::from_twice(twice_r) }
    }

    pub fn c() -> ModeSymbol {
        ModeSymbol { algebra: Algebra::Ns2, kind: Kind::C, index: Half::ZERO }
    }

    pub fn vir_l(n: i64) -> ModeSymbol {
        ModeSymbol { algebra: Algebra::Virasoro, kind: Kind::L, index: Half::int(n) }
    }

    pub fn vir_c() -> ModeSymbol {
        ModeSymbol { algebra: Algebra::Virasoro, kind: Kind::C, index: Half::ZERO }
    }

    pub fn heis(n: i64) -> ModeSymbol {
        ModeSymbol { algebra: Algebra::Heisenberg, kind: Kind::A, index: Half::int(n) }
    }

    pub fn heis_d() -> ModeSymbol {
        ModeSymbol { algebra: Algebra::Heisenberg, kind: Kind::D, index: Half::ZERO }
    }

    pub fn affine(kind: Kind, n: i64) -> ModeSymbol {
        ModeSymbol::new(Algebra::AffineSl2, kind, Half::int(n)).expect("affine generator")
    }

    pub fn is_central(&self) -> bool {
        self.kind.is_central()
    }

    pub fn is_odd(&self) -> bool {
        self.kind.is_odd()
    }

    /// Parity as 0 (even) or 1 (odd).
    pub fn parity(&self) -> u8 {
        u8::from(self.is_odd())
    }

    /// The image under the anti-involution `L_n ↦ L_{-n}`, `J_n ↦ J_{-n}`,
    /// `G±_r ↦ G∓_{-r}` (ns2 and Virasoro only; Heisenberg `a_n ↦ a_{-n}`).
    pub fn omega(&self) -> ModeSymbol {
        let kind = match self.kind {
            Kind::Gp => Kind::Gm,
            Kind::Gm => Kind::Gp,
            k => k,
        };
        ModeSymbol { kind, index: -self.index, ..*self }
    }

    /// Position in the canonical PBW order: J-modes, then L, then G+, then
    /// G-; within a kind, larger `|index|` first.
    pub fn pbw_key(&self) -> (u8, i64) {
        let rank = match self.kind {
            Kind::J | Kind::A | Kind::E => 0,
            Kind::L | Kind::F => 1,
            Kind::Gp | Kind::H => 2,
            Kind::Gm => 3,
            _ => 4,
        };
        (rank, -self.index.abs().twice())
    }
}

impl PartialOrd for ModeSymbol {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ModeSymbol {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.algebra, self.pbw_key(), self.index).cmp(&(other.algebra, other.pbw_key(), other.index))
    }
}

impl fmt::Display for ModeSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_central() {
            write!(f, "{}", self.kind.name())
        } else {
            write!(f, "{}[{}]", self.kind.name(), self.index)
        }
    }
}

impl FromStr for ModeSymbol {
    type Err = AlgebraError;

    /// Parses ns2 symbols such as `G+[-3/2]`, `L[-2]`, `J[1]` or `C`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || AlgebraError::InvalidSymbol(s.to_string());
        let t = s.trim();
        if t == "C" {
            return Ok(ModeSymbol::c());
        }
        let (name, rest) = t.split_once('[').ok_or_else(bad)?;
        let idx = rest.strip_suffix(']').ok_or_else(bad)?;
        let index: Half = idx.parse().map_err(|_| bad())?;
        let kind = match name {
            "L" => Kind::L,
            "J" => Kind::J,
            "G+" => Kind::Gp,
            "G-" => Kind::Gm,
            _ => return Err(bad()),
        };
        ModeSymbol::new(Algebra::Ns2, kind, index)
    }
}

impl Serialize for ModeSymbol {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// A linear combination of mode symbols (central symbols included).
pub type LinComb = Vector<ModeSymbol>;

fn delta(a: Half, b: Half) -> bool {
    a + b == Half::ZERO
}

/// The super-bracket `[x, y] = xy - (-1)^{|x||y|} yx`.
pub fn bracket(x: &ModeSymbol, y: &ModeSymbol) -> Result<LinComb, AlgebraError> {
    if x.algebra != y.algebra {
        return Err(AlgebraError::MixedAlgebras(x.to_string(), y.to_string()));
    }
    if x.is_central() || y.is_central() {
        return Ok(LinComb::zero());
    }
    Ok(match x.algebra {
        Algebra::Ns2 | Algebra::Virasoro => ns2_bracket(x, y),
        Algebra::Heisenberg => {
            let mut out = LinComb::zero();
            if delta(x.index, y.index) {
                out.add_term(ModeSymbol::heis_d(), Scalar::from_rat(x.index.to_rat()));
            }
            out
        }
        Algebra::AffineSl2 => affine_bracket(x, y),
    })
}

fn ns2_bracket(x: &ModeSymbol, y: &ModeSymbol) -> LinComb {
    use Kind::*;
    let alg = x.algebra;
    let mk = |kind: Kind, index: Half| ModeSymbol { algebra: alg, kind, index };
    let central = ModeSymbol { algebra: alg, kind: C, index: Half::ZERO };
    let (m, n) = (x.index, y.index);
    let (mr, nr) = (m.to_rat(), n.to_rat());
    let twelfth = Rat::new(1, 12);
    let third = Rat::new(1, 3);
    let mut out = LinComb::zero();
    match (x.kind, y.kind) {
        (L, L) => {
            out.add_term(mk(L, m + n), Scalar::from_rat(&mr - &nr));
            if delta(m, n) {
                let cubic = &(&(&mr * &mr) * &mr) - &mr;
                out.add_term(central, Scalar::from_rat(&cubic * &twelfth));
            }
        }
        (J, J) => {
            if delta(m, n) {
                out.add_term(central, Scalar::from_rat(&mr * &third));
            }
        }
        (L, J) => out.add_term(mk(J, m + n), Scalar::from_rat(-nr)),
        (J, L) => out.add_term(mk(J, m + n), Scalar::from_rat(mr)),
        (L, g @ (Gp | Gm)) => {
            let coef = &(&mr * &Rat::new(1, 2)) - &nr;
            out.add_term(mk(g, m + n), Scalar::from_rat(coef));
        }
        (g @ (Gp | Gm), L) => {
            let coef = &(&nr * &Rat::new(1, 2)) - &mr;
            out.add_term(mk(g, m + n), Scalar::from_rat(-coef));
        }
        (J, g @ (Gp | Gm)) => {
            let s = if g == Gp { 1 } else { -1 };
            out.add_term(mk(g, m + n), Scalar::from_int(s));
        }
        (g @ (Gp | Gm), J) => {
            let s = if g == Gp { -1 } else { 1 };
            out.add_term(mk(g, m + n), Scalar::from_int(s));
        }
        (Gp, Gm) | (Gm, Gp) => {
            // {G+_r, G-_s} = 2L_{r+s} + (r-s)J_{r+s} + (C/3)(r^2 - 1/4)δ
            let (r, s) = if x.kind == Gp { (mr.clone(), nr.clone()) } else { (nr.clone(), mr.clone()) };
            out.add_term(mk(L, m + n), Scalar::from_int(2));
            out.add_term(mk(J, m + n), Scalar::from_rat(&r - &s));
            if delta(m, n) {
                let v = &(&(&r * &r) - &Rat::new(1, 4)) * &third;
                out.add_term(central, Scalar::from_rat(v));
            }
        }
        (Gp, Gp) | (Gm, Gm) => {}
        _ => unreachable!("kinds validated by algebra"),
    }
    out
}

fn affine_bracket(x: &ModeSymbol, y: &ModeSymbol) -> LinComb {
    use Kind::*;
    let (p, q) = (x.index, y.index);
    let mk = |kind: Kind| ModeSymbol { algebra: Algebra::AffineSl2, kind, index: p + q };
    let k = ModeSymbol { algebra: Algebra::AffineSl2, kind: K, index: Half::ZERO };
    let mut out = LinComb::zero();
    match (x.kind, y.kind) {
        (E, F) => {
            out.add_term(mk(H), Scalar::one());
            if delta(p, q) {
                out.add_term(k, Scalar::from_rat(p.to_rat()));
            }
        }
        (F, E) => {
            out.add_term(mk(H), Scalar::from_int(-1));
            if delta(p, q) {
                out.add_term(k, Scalar::from_rat(q.to_rat()).scale(&Rat::from_int(-1)));
            }
        }
        (H, E) => out.add_term(mk(E), Scalar::from_int(2)),
        (E, H) => out.add_term(mk(E), Scalar::from_int(-2)),
        (H, F) => out.add_term(mk(F), Scalar::from_int(-2)),
        (F, H) => out.add_term(mk(F), Scalar::from_int(2)),
        (H, H) => {
            if delta(p, q) {
                out.add_term(k, Scalar::from_rat(&p.to_rat() * &Rat::from_int(2)));
            }
        }
        (E, E) | (F, F) => {}
        _ => unreachable!("kinds validated by algebra"),
    }
    out
}

/// Shift in `(L_0, J_0)` eigenvalues produced by a generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Grading {
    pub weight: Half,
    pub charge: i64,
}

/// Grading read off from the brackets with `L_0` and `J_0` (ns2, Virasoro),
/// `d`-free degree for Heisenberg, and `(−index, ad H_0-weight)` for affine sl2.
pub fn grading(x: &ModeSymbol) -> Result<Grading, AlgebraError> {
    if x.is_central() {
        return Err(AlgebraError::CentralGrading(x.to_string()));
    }
    let eigen = |zero: ModeSymbol| -> Rat {
        let b = bracket(&zero, x).expect("same algebra");
        b.coeff(x).as_rational().cloned().unwrap_or_default()
    };
    match x.algebra {
        Algebra::Ns2 => {
            let w = Half::from_rat(&eigen(ModeSymbol::l(0))).expect("half-integral weight");
            let q = eigen(ModeSymbol::j(0)).to_i64().expect("integral charge");
            Ok(Grading { weight: w, charge: q })
        }
        Algebra::Virasoro => {
            let w = Half::from_rat(&eigen(ModeSymbol::vir_l(0))).expect("integral weight");
            Ok(Grading { weight: w, charge: 0 })
        }
        Algebra::Heisenberg => Ok(Grading { weight: -x.index, charge: 0 }),
        Algebra::AffineSl2 => {
            let q = eigen(ModeSymbol::affine(Kind::H, 0)).to_i64().expect("integral weight");
            Ok(Grading { weight: -x.index, charge: q })
        }
    }
}

/// All non-central generators of `alg` with `|index| <= bound`.
pub fn generators(alg: Algebra, bound: Half) -> Vec<ModeSymbol> {
    let kinds: &[Kind] = match alg {
        Algebra::Ns2 => &[Kind::J, Kind::L, Kind::Gp, Kind::Gm],
        Algebra::Virasoro => &[Kind::L],
        Algebra::Heisenberg => &[Kind::A],
        Algebra::AffineSl2 => &[Kind::E, Kind::F, Kind::H],
    };
    let mut out = Vec::new();
    for &k in kinds {
        for t in -bound.twice()..=bound.twice() {
            if let Ok(s) = ModeSymbol::new(alg, k, Half::from_twice(t)) {
                out.push(s);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lc(terms: &[(ModeSymbol, Rat)]) -> LinComb {
        terms.iter().map(|(s, c)| (*s, Scalar::from_rat(c.clone()))).collect()
    }

    #[test]
    fn table_examples() {
        assert_eq!(
            bracket(&ModeSymbol::l(2), &ModeSymbol::l(-2)).unwrap(),
            lc(&[(ModeSymbol::l(0), Rat::from_int(4)), (ModeSymbol::c(), Rat::new(1, 2))])
        );
        assert_eq!(
            bracket(&ModeSymbol::g(true, 1), &ModeSymbol::g(false, -1)).unwrap(),
            lc(&[(ModeSymbol::l(0), Rat::from_int(2)), (ModeSymbol::j(0), Rat::one())])
        );
        assert!(bracket(&ModeSymbol::g(true, 1), &ModeSymbol::g(true, -1)).unwrap().is_zero());
        assert_eq!(
            bracket(&ModeSymbol::j(1), &ModeSymbol::g(true, 1)).unwrap(),
            lc(&[(ModeSymbol::g(true, 3), Rat::one())])
        );
        assert!(bracket(&ModeSymbol::l(0), &ModeSymbol::heis(1)).is_err());
    }

    #[test]
    fn grading_examples() {
        assert_eq!(grading(&ModeSymbol::g(true, -1)).unwrap(), Grading { weight: Half::HALF, charge: 1 });
        assert_eq!(grading(&ModeSymbol::l(-2)).unwrap(), Grading { weight: Half::int(2), charge: 0 });
        assert_eq!(grading(&ModeSymbol::j(3)).unwrap(), Grading { weight: Half::int(-3), charge: 0 });
        assert!(grading(&ModeSymbol::c()).is_err());
    }

    #[test]
    fn render_and_parse() {
        let g = ModeSymbol::g(true, -3);
        assert_eq!(g.to_string(), "G+[-3/2]");
        assert_eq!("G+[-3/2]".parse::<ModeSymbol>().unwrap(), g);
        assert_eq!(ModeSymbol::l(-2).to_string(), "L[-2]");
        assert!("G+[1]".parse::<ModeSymbol>().is_err());
    }
}
