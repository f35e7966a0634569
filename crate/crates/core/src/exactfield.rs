//! Exact arithmetic in the tower `Q(i, √2, r)` with `r² = m + 2`.
//!
//! A [`Scalar`] stores eight rational coordinates over the basis
//! `{1, i, √2, i√2, r, ir, √2r, i√2r}`. Bit 0 of a basis index marks `i`,
//! bit 1 marks `√2` and bit 2 marks `r`, so multiplying basis elements is an
//! XOR of indices together with a scalar correction.
//!
//! Scalars that never touch `r` carry no level; mixing two scalars whose
//! `r`-parts belong to different levels is a programming error and panics.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

use serde::{Deserialize, Serialize};

use crate::rational::Rat;

const I_BIT: usize = 1;
const S2_BIT: usize = 2;
const R_BIT: usize = 4;

/// Sign of a real scalar.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    fn from_i32(s: i32) -> Sign {
        match s.cmp(&0) {
            Ordering::Less => Sign::Negative,
            Ordering::Equal => Sign::Zero,
            Ordering::Greater => Sign::Positive,
        }
    }

    fn as_i32(self) -> i32 {
        match self {
            Sign::Negative => -1,
            Sign::Zero => 0,
            Sign::Positive => 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FieldError {
    #[error("real_sign called on a non-real scalar {0}")]
    NotReal(String),
    #[error("division by zero")]
    DivisionByZero,
}

/// An element of the coefficient tower in canonical form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Scalar {
    coords: [Rat; 8],
    m: Option<u32>,
}

/// How `r = √(m+2)` collapses into the `{1, √2}` sub-tower, if it does.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Collapse {
    None,
    /// `r = k`
    Integer(i64),
    /// `r = k·√2`
    Sqrt2(i64),
}

fn isqrt(n: u64) -> Option<u64> {
    let mut k = (n as f64).sqrt() as u64;
    while k * k > n {
        k -= 1;
    }
    while (k + 1) * (k + 1) <= n {
        k += 1;
    }
    (k * k == n).then_some(k)
}

fn collapse_of(m: u32) -> Collapse {
    let n = m as u64 + 2;
    if let Some(k) = isqrt(n) {
        return Collapse::Integer(k as i64);
    }
    if n.is_multiple_of(2) {
        if let Some(k) = isqrt(n / 2) {
            return Collapse::Sqrt2(k as i64);
        }
    }
    Collapse::None
}

fn basis_product_factor(a: usize, b: usize, m: Option<u32>) -> Rat {
    let mut f: i64 = 1;
    if a & b & I_BIT != 0 {
        f = -f;
    }
    if a & b & S2_BIT != 0 {
        f *= 2;
    }
    if a & b & R_BIT != 0 {
        let m = m.expect("r-coordinates require a level");
        f *= m as i64 + 2;
    }
    Rat::from_int(f)
}

/// Brings a raw coordinate vector into canonical form for level `m`.
pub fn normalize(raw: [Rat; 8], m: u32) -> Scalar {
    let mut s = Scalar { coords: raw, m: Some(m) };
    s.canonicalize();
    s
}

impl Scalar {
    pub fn zero() -> Scalar {
        Scalar { coords: Default::default(), m: None }
    }

    pub fn one() -> Scalar {
        Scalar::from_rat(Rat::one())
    }

    pub fn from_rat(r: Rat) -> Scalar {
        let mut s = Scalar::zero();
        s.coords[0] = r;
        s
    }

    pub fn from_int(n: i64) -> Scalar {
        Scalar::from_rat(Rat::from_int(n))
    }

    pub fn frac(n: i64, d: i64) -> Scalar {
        Scalar::from_rat(Rat::new(n, d))
    }

    pub fn i() -> Scalar {
        Scalar::basis(I_BIT)
    }

    pub fn sqrt2() -> Scalar {
        Scalar::basis(S2_BIT)
    }

    /// `r = √(m+2)` in canonical form.
    pub fn r(m: u32) -> Scalar {
        let mut raw: [Rat; 8] = Default::default();
        raw[R_BIT] = Rat::one();
        normalize(raw, m)
    }

    /// `√((m+2)/2) = r·√2/2`.
    pub fn sqrt_half_m_plus_2(m: u32) -> Scalar {
        &(&Scalar::r(m) * &Scalar::sqrt2()) * &Scalar::frac(1, 2)
    }

    fn basis(idx: usize) -> Scalar {
        let mut s = Scalar::zero();
        s.coords[idx] = Rat::one();
        s
    }

    pub fn coords(&self) -> &[Rat; 8] {
        &self.coords
    }

    /// The level this scalar is tied to, if any of its arithmetic needed one.
    pub fn level(&self) -> Option<u32> {
        self.m
    }

    /// Ties the scalar to level `m` and re-canonicalizes.
    pub fn with_level(mut self, m: u32) -> Scalar {
        if let Some(old) = self.m {
            assert!(old == m || self.r_free(), "scalar already tied to level {old}");
        }
        self.m = Some(m);
        self.canonicalize();
        self
    }

    fn r_free(&self) -> bool {
        (R_BIT..8).all(|k| self.coords[k].is_zero())
    }

    fn canonicalize(&mut self) {
        let Some(m) = self.m else {
            assert!(self.r_free(), "r-coordinates require a level");
            return;
        };
        match collapse_of(m) {
            Collapse::None => {}
            Collapse::Integer(k) => {
                let k = Rat::from_int(k);
                for b in 0..R_BIT {
                    let v = std::mem::take(&mut self.coords[b | R_BIT]);
                    if !v.is_zero() {
                        self.coords[b] += &(&v * &k);
                    }
                }
            }
            Collapse::Sqrt2(k) => {
                for b in 0..R_BIT {
                    let v = std::mem::take(&mut self.coords[b | R_BIT]);
                    if v.is_zero() {
                        continue;
                    }
                    if b & S2_BIT == 0 {
                        self.coords[b | S2_BIT] += &(&v * &Rat::from_int(k));
                    } else {
                        self.coords[b & !S2_BIT] += &(&v * &Rat::from_int(2 * k));
                    }
                }
            }
        }
        if self.r_free() && self.m.is_some() {
            // Keep r-free values level-agnostic so equality ignores the tag.
            self.m = None;
        }
    }

    fn join_level(a: Option<u32>, b: Option<u32>) -> Option<u32> {
        match (a, b) {
            (Some(x), Some(y)) => {
                assert_eq!(x, y, "mixing scalars from levels {x} and {y}");
                Some(x)
            }
            (x, None) => x,
            (None, y) => y,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Rat::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coords[0].is_one() && self.coords[1..].iter().all(Rat::is_zero)
    }

    /// Whether the value lies in `Q`.
    pub fn is_rational(&self) -> bool {
        self.coords[1..].iter().all(Rat::is_zero)
    }

    pub fn as_rational(&self) -> Option<&Rat> {
        self.is_rational().then(|| &self.coords[0])
    }

    /// Whether the value lies in the real subfield.
    pub fn is_real(&self) -> bool {
        (0..8).filter(|k| k & I_BIT != 0).all(|k| self.coords[k].is_zero())
    }

    pub fn scale(&self, r: &Rat) -> Scalar {
        if r.is_zero() {
            return Scalar::zero();
        }
        Scalar { coords: std::array::from_fn(|k| &self.coords[k] * r), m: self.m }
    }

    fn apply_sign_flip(&self, bit: usize) -> Scalar {
        let mut s = self.clone();
        for k in 0..8 {
            if k & bit != 0 {
                s.coords[k] = -std::mem::take(&mut s.coords[k]);
            }
        }
        s
    }

    /// Complex conjugation `i ↦ -i`.
    pub fn conj(&self) -> Scalar {
        self.apply_sign_flip(I_BIT)
    }

    pub fn inverse(&self) -> Result<Scalar, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        if let Some(q) = self.as_rational() {
            return Ok(Scalar::from_rat(q.recip()));
        }
        // Multiply by conjugates until the norm is rational.
        let sr = self.apply_sign_flip(R_BIT);
        let b = self * &sr;
        let s2 = b.apply_sign_flip(S2_BIT);
        let c = &b * &s2;
        let si = c.apply_sign_flip(I_BIT);
        let n = &c * &si;
        let n = n.as_rational().expect("norm must be rational").clone();
        let num = &(&sr * &s2) * &si;
        Ok(num.scale(&n.recip()))
    }

    /// Exact sign of a real scalar under `√2 > 0`, `r > 0`.
    pub fn real_sign(&self) -> Result<Sign, FieldError> {
        if !self.is_real() {
            return Err(FieldError::NotReal(self.to_string()));
        }
        let x = (self.coords[0].clone(), self.coords[S2_BIT].clone());
        let y = (self.coords[R_BIT].clone(), self.coords[R_BIT | S2_BIT].clone());
        let rsq = self.m.map(|m| Rat::from_int(m as i64 + 2));
        Ok(Sign::from_i32(match rsq {
            None => sign_sqrt2(&x),
            Some(rsq) => sign_with_root(&x, &y, &rsq),
        }))
    }

    /// Approximate complex value, for diagnostics and test oracles only.
    pub fn to_complex_f64(&self) -> (f64, f64) {
        let s2 = std::f64::consts::SQRT_2;
        let r = self.m.map(|m| ((m + 2) as f64).sqrt()).unwrap_or(0.0);
        let mut re = 0.0;
        let mut im = 0.0;
        for k in 0..8 {
            let mut v = self.coords[k].to_f64();
            if k & S2_BIT != 0 {
                v *= s2;
            }
            if k & R_BIT != 0 {
                v *= r;
            }
            if k & I_BIT != 0 {
                im += v;
            } else {
                re += v;
            }
        }
        (re, im)
    }

    pub fn pow(&self, e: u32) -> Scalar {
        let mut acc = Scalar::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }
}

/// Sign of `a + b√2`.
fn sign_sqrt2(x: &(Rat, Rat)) -> i32 {
    let (a, b) = x;
    let sa = a.signum();
    let sb = b.signum();
    if sb == 0 || sa == sb {
        return if sa == 0 { sb } else { sa };
    }
    if sa == 0 {
        return sb;
    }
    // Opposite signs: compare a² with 2b².
    let d = &(a * a) - &(&(b * b) * &Rat::from_int(2));
    sa * d.signum()
}

/// Sign of `X + Y·√rsq` with `X, Y ∈ Q(√2)`.
fn sign_with_root(x: &(Rat, Rat), y: &(Rat, Rat), rsq: &Rat) -> i32 {
    let sx = sign_sqrt2(x);
    let sy = sign_sqrt2(y);
    if sy == 0 || sx == sy {
        return if sx == 0 { sy } else { sx };
    }
    if sx == 0 {
        return sy;
    }
    // Opposite signs: compare X² with rsq·Y², both in Q(√2).
    let sq = |p: &(Rat, Rat)| {
        let two = Rat::from_int(2);
        (&(&p.0 * &p.0) + &(&(&p.1 * &p.1) * &two), &(&p.0 * &p.1) * &two)
    };
    let x2 = sq(x);
    let y2 = sq(y);
    let d = (&x2.0 - &(&y2.0 * rsq), &x2.1 - &(&y2.1 * rsq));
    sx * sign_sqrt2(&d)
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl From<Rat> for Scalar {
    fn from(r: Rat) -> Self {
        Scalar::from_rat(r)
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        let m = Scalar::join_level(self.m, rhs.m);
        let mut s = Scalar { coords: std::array::from_fn(|k| &self.coords[k] + &rhs.coords[k]), m };
        if s.r_free() {
            s.m = None;
        }
        s
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        let m = Scalar::join_level(self.m, rhs.m);
        let mut s = Scalar { coords: std::array::from_fn(|k| &self.coords[k] - &rhs.coords[k]), m };
        if s.r_free() {
            s.m = None;
        }
        s
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        if let Some(q) = rhs.as_rational() {
            return self.scale(q);
        }
        if let Some(q) = self.as_rational() {
            return rhs.scale(q);
        }
        let m = Scalar::join_level(self.m, rhs.m);
        let mut coords: [Rat; 8] = Default::default();
        for a in 0..8 {
            if self.coords[a].is_zero() {
                continue;
            }
            for b in 0..8 {
                if rhs.coords[b].is_zero() {
                    continue;
                }
                let f = basis_product_factor(a, b, m);
                let v = &(&self.coords[a] * &rhs.coords[b]) * &f;
                coords[a ^ b] += &v;
            }
        }
        let mut s = Scalar { coords, m };
        if s.r_free() {
            s.m = None;
        }
        s
    }
}

impl<'a> Div<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn div(self, rhs: &Scalar) -> Scalar {
        self * &rhs.inverse().expect("division by zero")
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &Scalar) -> Scalar {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        *self = &*self - rhs;
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { coords: self.coords.map(|c| -c), m: self.m }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -self.clone()
    }
}

fn basis_name(k: usize, m: Option<u32>) -> String {
    let mut parts = Vec::new();
    if k & I_BIT != 0 {
        parts.push("i".to_string());
    }
    if k & S2_BIT != 0 {
        parts.push("sqrt2".to_string());
    }
    if k & R_BIT != 0 {
        parts.push(format!("sqrt{}", m.map_or(0, |m| m + 2)));
    }
    parts.join("*")
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.signum() < 0;
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let name = basis_name(k, self.m);
            if k == 0 {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{name}")?;
            } else {
                write!(f, "{mag}*{name}")?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Serialize, Deserialize)]
struct ScalarRepr {
    m: Option<u32>,
    coords: [Rat; 8],
}

#[derive(Deserialize)]
#[serde(untagged)]
enum ScalarForm {
    Rational(Rat),
    Tower(ScalarRepr),
}

/// Rational values serialize as `"p/q"` strings, everything else as the
/// level together with the eight tower coordinates.
impl Serialize for Scalar {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.as_rational() {
            Some(q) => q.serialize(s),
            None => ScalarRepr { m: self.m, coords: self.coords.clone() }.serialize(s),
        }
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = match ScalarForm::deserialize(d)? {
            ScalarForm::Rational(q) => return Ok(Scalar::from_rat(q)),
            ScalarForm::Tower(r) => r,
        };
        Ok(match r.m {
            Some(m) => normalize(r.coords, m),
            None => {
                let s = Scalar { coords: r.coords, m: None };
                if !s.r_free() {
                    return Err(serde::de::Error::custom("r-coordinates require a level"));
                }
                s
            }
        })
    }
}

impl Sign {
    /// Product of signs.
    pub fn times(self, other: Sign) -> Sign {
        Sign::from_i32(self.as_i32() * other.as_i32())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn raw_r() -> [Rat; 8] {
        let mut raw: [Rat; 8] = Default::default();
        raw[R_BIT] = Rat::one();
        raw
    }

    #[test]
    fn perfect_square_collapse() {
        assert_eq!(normalize(raw_r(), 2), Scalar::from_int(2));
    }

    #[test]
    fn r_squared_is_m_plus_two() {
        let r = Scalar::r(5);
        assert_eq!(&r * &r, Scalar::from_int(7));
    }

    #[test]
    fn twice_square_collapse_matches_float() {
        let s = normalize(raw_r(), 6);
        assert_eq!(s, &Scalar::from_int(2) * &Scalar::sqrt2());
        let (re, im) = s.to_complex_f64();
        assert!((re - 8f64.sqrt()).abs() < 1e-12 && im == 0.0);
    }

    #[test]
    fn signs() {
        assert_eq!(Scalar::zero().real_sign().unwrap(), Sign::Zero);
        let a = &Scalar::sqrt2() - &Scalar::one();
        assert_eq!(a.real_sign().unwrap(), Sign::Positive);
        let b = &Scalar::from_int(3) - &(&Scalar::from_int(2) * &Scalar::sqrt2());
        assert_eq!(b.real_sign().unwrap(), Sign::Positive);
        assert!(Scalar::i().real_sign().is_err());
        // 3 - sqrt(7) > 0, 2*sqrt2 - sqrt(7) > 0, sqrt2 + 1 - sqrt(7) < 0
        let r = Scalar::r(5);
        assert_eq!((&Scalar::from_int(3) - &r).real_sign().unwrap(), Sign::Positive);
        let t = &(&Scalar::from_int(2) * &Scalar::sqrt2()) - &r;
        assert_eq!(t.real_sign().unwrap(), Sign::Positive);
        let u = &(&Scalar::sqrt2() + &Scalar::one()) - &r;
        assert_eq!(u.real_sign().unwrap(), Sign::Negative);
    }

    #[test]
    fn inverse_roundtrip() {
        let m = 3;
        let a = &(&Scalar::r(m) + &Scalar::i()) + &(&Scalar::sqrt2() * &Scalar::frac(3, 7));
        let inv = a.inverse().unwrap();
        assert!((&a * &inv).is_one());
        assert!(Scalar::zero().inverse().is_err());
    }

    #[test]
    fn display_names_basis() {
        let a = &Scalar::r(3) - &Scalar::frac(1, 2);
        assert_eq!(a.to_string(), "-1/2 + sqrt5");
        assert_eq!((&Scalar::i() * &Scalar::sqrt2()).to_string(), "i*sqrt2");
    }
}
