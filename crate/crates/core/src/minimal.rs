//! Unitary minimal-model labels, chirality and fusion-dimension bounds.

use std::fmt;

use serde::Serialize;

use crate::exactfield::Scalar;
use crate::half::Half;
use crate::pbw::{Grade, PbwModule, VermaParams};
use crate::rational::Rat;

/// Which range of `(j, k)` counts as the unitary spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Convention {
    /// `j + k < m + 2`, which contains the vacuum label for every `m`.
    #[default]
    Standard,
    /// `j + k < m`, read literally.
    PaperStrict,
}

impl std::str::FromStr for Convention {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "standard" => Ok(Convention::Standard),
            "paper-strict" => Ok(Convention::PaperStrict),
            _ => Err(format!("unknown convention `{s}` (expected standard or paper-strict)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FusionError {
    #[error("labels belong to different levels: {0} and {1}")]
    MixedLevels(u32, u32),
    #[error("invalid label: {0}")]
    InvalidLabel(String),
}

/// A label `(j, k)` at level `m`, with `j, k ∈ {1/2, 3/2, ...}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MinimalLabel {
    pub m: u32,
    pub j: Half,
    pub k: Half,
}

impl MinimalLabel {
    pub fn new(m: u32, j: Half, k: Half) -> Result<Self, FusionError> {
        if m == 0 {
            return Err(FusionError::InvalidLabel("m must be positive".into()));
        }
        for (name, v) in [("j", j), ("k", k)] {
            if v.is_integer() || v < Half::ZERO {
                return Err(FusionError::InvalidLabel(format!("{name} = {v} is not a positive half-odd integer")));
            }
        }
        Ok(MinimalLabel { m, j, k })
    }

    pub fn vacuum(m: u32) -> Self {
        MinimalLabel { m, j: Half::HALF, k: Half::HALF }
    }

    /// Whether the label lies in the spectrum under the given convention.
    pub fn is_admissible(&self, convention: Convention) -> bool {
        let bound = match convention {
            Convention::Standard => Half::int(self.m as i64 + 2),
            Convention::PaperStrict => Half::int(self.m as i64),
        };
        self.j + self.k < bound
    }

    fn m2(&self) -> Rat {
        Rat::from_int(self.m as i64 + 2)
    }

    pub fn c(&self) -> Scalar {
        Scalar::from_rat(&Rat::from_int(3 * self.m as i64) / &self.m2())
    }

    pub fn h(&self) -> Scalar {
        let jk = &self.j.to_rat() * &self.k.to_rat();
        Scalar::from_rat(&(&jk - &Rat::new(1, 4)) / &self.m2())
    }

    pub fn q(&self) -> Scalar {
        Scalar::from_rat(&(&self.j.to_rat() - &self.k.to_rat()) / &self.m2())
    }

    pub fn params(&self) -> VermaParams {
        VermaParams::new(self.c(), self.h(), self.q())
    }

    /// The tag for the flipped label `(k, j)`, which negates the charge.
    pub fn conjugate(&self) -> Self {
        MinimalLabel { m: self.m, j: self.k, k: self.j }
    }
}

impl fmt::Display for MinimalLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.j, self.k)
    }
}

impl std::str::FromStr for MinimalLabel {
    type Err = FusionError;

    /// Parses `j,k` or `(j,k)`; the level must be set afterwards with
    /// [`MinimalLabel::at_level`].
    fn from_str(s: &str) -> Result<Self, FusionError> {
        let t = s.trim().trim_start_matches('(').trim_end_matches(')');
        let parts: Vec<&str> = t.split(',').map(str::trim).collect();
        if parts.len() != 2 {
            return Err(FusionError::InvalidLabel(format!("`{s}` is not of the form j,k")));
        }
        let parse = |p: &str| p.parse::<Half>().map_err(|_| FusionError::InvalidLabel(format!("`{p}` is not a half-integer")));
        let (j, k) = (parse(parts[0])?, parse(parts[1])?);
        MinimalLabel::new(1, j, k)
    }
}

impl MinimalLabel {
    pub fn at_level(self, m: u32) -> Result<Self, FusionError> {
        MinimalLabel::new(m, self.j, self.k)
    }
}

impl Serialize for MinimalLabel {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("MinimalLabel", 6)?;
        st.serialize_field("m", &self.m)?;
        st.serialize_field("j", &self.j)?;
        st.serialize_field("k", &self.k)?;
        st.serialize_field("h", &self.h())?;
        st.serialize_field("q", &self.q())?;
        st.serialize_field("c", &self.c())?;
        st.end()
    }
}

/// All labels at level `m`, ordered by `(j, k)`.
pub fn spectrum(m: u32, convention: Convention) -> Vec<MinimalLabel> {
    let mut out = Vec::new();
    let top = m as i64 + 2;
    for tj in (1..2 * top).step_by(2) {
        for tk in (1..2 * top).step_by(2) {
            let l = MinimalLabel { m, j: Half::from_twice(tj), k: Half::from_twice(tk) };
            if l.is_admissible(convention) {
                out.push(l);
            }
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Chirality {
    Chiral,
    AntiChiral,
    Both,
    Neither,
}

impl Chirality {
    pub fn is_chiral(self) -> bool {
        matches!(self, Chirality::Chiral | Chirality::Both)
    }

    pub fn is_anti_chiral(self) -> bool {
        matches!(self, Chirality::AntiChiral | Chirality::Both)
    }
}

/// Decides chirality from the level-1/2 Gram entries: `G±(-1/2)w` is zero in
/// the irreducible module exactly when its norm `2h ∓ q` vanishes.
pub fn classify_chirality(l: &MinimalLabel) -> Chirality {
    let verma = PbwModule::verma(l.params());
    let null = |charge| verma.gram(Grade::new(Half::HALF, charge)).entries.get(0, 0).is_zero();
    match (null(1), null(-1)) {
        (true, true) => Chirality::Both,
        (true, false) => Chirality::Chiral,
        (false, true) => Chirality::AntiChiral,
        (false, false) => Chirality::Neither,
    }
}

fn same_level(ls: [&MinimalLabel; 3]) -> Result<(), FusionError> {
    for l in &ls[1..] {
        if l.m != ls[0].m {
            return Err(FusionError::MixedLevels(ls[0].m, l.m));
        }
    }
    Ok(())
}

/// Upper bound on the dimension of the space of intertwining operators of
/// type `l3 / (l1 l2)`, obtained from `J(0)`-charge bookkeeping on the four
/// vectors that determine an intertwining operator.
pub fn fusion_upper_bound(l1: &MinimalLabel, l2: &MinimalLabel, l3: &MinimalLabel) -> Result<u8, FusionError> {
    same_level([l1, l2, l3])?;
    let d = &(&l3.q() - &l1.q()) - &l2.q();
    let d = d.as_rational().expect("charges are rational").clone();
    let bound = if d.is_zero() {
        2
    } else if d == Rat::one() || d == Rat::from_int(-1) {
        1
    } else {
        0
    };
    if bound == 2 {
        let ch = classify_chirality(l1);
        if ch != Chirality::Neither {
            return Ok(1);
        }
    }
    Ok(bound)
}

/// `Δ = h3 - h1 - h2`.
pub fn leading_exponent(l1: &MinimalLabel, l2: &MinimalLabel, l3: &MinimalLabel) -> Result<Scalar, FusionError> {
    same_level([l1, l2, l3])?;
    Ok(&(&l3.h() - &l1.h()) - &l2.h())
}
