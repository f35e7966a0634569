//! The rank-one lattice vertex superalgebra `V_L`, `L = Zα`, `<α,α> = -1`,
//! and the Heisenberg (Liouville) Fock modules `M(1,s)`.
//!
//! States of `V_L` are `α(-n₁)⋯α(-n_r) e^{pα}`. The field of `e^{qα}` is
//!
//! ```text
//! Y(e^{qα}, x) = exp(Σ_{n>0} qα(-n) xⁿ/n) exp(-Σ_{n>0} qα(n) x⁻ⁿ/n) e_{qα} x^{qα(0)}
//! ```
//!
//! with `e_{qα} e^{pα} = ε(q,p) e^{(p+q)α}`, and fields of states carrying
//! oscillators come from the iterate formula with `α_(k) = α(k)`.

use std::collections::{BTreeMap, HashMap};
use std::sync::Mutex;

use serde::Serialize;

use crate::exactfield::Scalar;
use crate::half::Half;
use crate::lincomb::Vector;
use crate::rational::{binomial, Rat};

/// The 2-cocycle used for `e_{qα} e^{pα}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Cocycle {
    /// `ε(q,p) = 1`.
    Trivial,
    /// `ε(q,p) = (-1)^{qp}`.
    #[default]
    Sign,
}

impl Cocycle {
    pub fn value(self, q: i64, p: i64) -> i64 {
        match self {
            Cocycle::Trivial => 1,
            Cocycle::Sign => {
                if (q * p).rem_euclid(2) == 1 {
                    -1
                } else {
                    1
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LatticeError {
    #[error("mode exponent {exponent} is not allowed on sector {sector}; allowed exponents are the integers")]
    IncompatibleExponent { exponent: String, sector: i64 },
    #[error("vector is not homogeneous")]
    Inhomogeneous,
    #[error("zero vector has no grade")]
    ZeroVector,
}

/// `α(-n₁)⋯α(-n_r) e^{pα}` with `n₁ ≥ ⋯ ≥ n_r ≥ 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct LatticeState {
    pub oscillators: Vec<u32>,
    pub sector: i64,
}

impl LatticeState {
    pub fn vacuum() -> Self {
        LatticeState::exp(0)
    }

    pub fn exp(p: i64) -> Self {
        LatticeState { oscillators: Vec::new(), sector: p }
    }

    pub fn new(mut oscillators: Vec<u32>, sector: i64) -> Self {
        assert!(oscillators.iter().all(|&n| n > 0), "oscillator indices are positive");
        oscillators.sort_unstable_by(|a, b| b.cmp(a));
        LatticeState { oscillators, sector }
    }

    /// Total oscillator degree.
    pub fn degree(&self) -> i64 {
        self.oscillators.iter().map(|&n| n as i64).sum()
    }

    /// Weight for the standard conformal vector `-α(-1)²/2`: `N - p²/2`.
    pub fn std_weight(&self) -> Half {
        Half::from_twice(2 * self.degree() - self.sector * self.sector)
    }

    /// `α(0)` eigenvalue `<α, pα> = -p`.
    pub fn charge(&self) -> i64 {
        -self.sector
    }

    pub fn parity(&self) -> u8 {
        self.sector.rem_euclid(2) as u8
    }

    fn counts(&self) -> BTreeMap<u32, u32> {
        let mut m = BTreeMap::new();
        for &n in &self.oscillators {
            *m.entry(n).or_insert(0) += 1;
        }
        m
    }

    fn from_counts(counts: &BTreeMap<u32, u32>, sector: i64) -> Self {
        let mut osc = Vec::new();
        for (&n, &k) in counts.iter().rev() {
            osc.extend(std::iter::repeat_n(n, k as usize));
        }
        LatticeState { oscillators: osc, sector }
    }
}

pub type LatticeVector = Vector<LatticeState>;

/// `α(n)` with `[α(m), α(n)] = -m δ_{m+n,0}`.
pub fn alpha(n: i64, s: &LatticeState) -> LatticeVector {
    if n < 0 {
        let mut osc = s.oscillators.clone();
        osc.push((-n) as u32);
        return Vector::basis(LatticeState::new(osc, s.sector));
    }
    if n == 0 {
        return Vector::term(s.clone(), Scalar::from_int(s.charge()));
    }
    let k = s.oscillators.iter().filter(|&&x| x as i64 == n).count() as i64;
    if k == 0 {
        return Vector::zero();
    }
    let mut osc = s.oscillators.clone();
    let pos = osc.iter().position(|&x| x as i64 == n).expect("present");
    osc.remove(pos);
    Vector::term(LatticeState { oscillators: osc, sector: s.sector }, Scalar::from_int(-n * k))
}

pub fn alpha_vec(n: i64, v: &LatticeVector) -> LatticeVector {
    v.map_linear(|s| alpha(n, s))
}

/// Partitions of `n` as count maps, with `Π (q/k)^{c_k} / c_k!`.
fn weighted_partitions(n: i64, q: i64) -> Vec<(BTreeMap<u32, u32>, Rat)> {
    fn go(n: i64, max: i64, q: i64, cur: &mut BTreeMap<u32, u32>, coeff: Rat, out: &mut Vec<(BTreeMap<u32, u32>, Rat)>) {
        if n == 0 {
            out.push((cur.clone(), coeff));
            return;
        }
        for part in (1..=max.min(n)).rev() {
            let mut c = coeff.clone();
            let mut times = 0u32;
            let mut rem = n;
            while rem >= part {
                rem -= part;
                times += 1;
                c = &c * &Rat::new(q, part * times as i64);
                cur.insert(part as u32, times);
                go(rem, part - 1, q, cur, c.clone(), out);
            }
            cur.remove(&(part as u32));
        }
    }
    let mut out = Vec::new();
    go(n, n, q, &mut BTreeMap::new(), Rat::one(), &mut out);
    out
}

/// The lattice vertex superalgebra with a fixed cocycle; field modes of
/// arbitrary states are memoized.
pub struct Lattice {
    pub cocycle: Cocycle,
    cache: Mutex<HashMap<(LatticeState, i64, LatticeState), LatticeVector>>,
}

impl std::fmt::Debug for Lattice {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Lattice").field("cocycle", &self.cocycle).finish()
    }
}

impl Default for Lattice {
    fn default() -> Self {
        Lattice::new(Cocycle::default())
    }
}

impl Lattice {
    pub fn new(cocycle: Cocycle) -> Self {
        Lattice { cocycle, cache: Mutex::default() }
    }

    /// `(e^{qα})_(t)` on a basis state.
    pub fn exp_mode(&self, q: i64, t: i64, s: &LatticeState) -> LatticeVector {
        if q == 0 {
            return if t == -1 { Vector::basis(s.clone()) } else { Vector::zero() };
        }
        let p = s.sector;
        let sign = self.cocycle.value(q, p);
        let counts = s.counts();
        let parts: Vec<(u32, u32)> = counts.iter().map(|(&n, &k)| (n, k)).collect();
        let mut out = Vector::zero();
        // Choose how many of each α(-n) factor E⁺ removes.
        let mut choice = vec![0u32; parts.len()];
        loop {
            let mut removed_deg = 0i64;
            let mut coeff = Rat::from_int(sign);
            let mut rest = BTreeMap::new();
            for (idx, &(n, k)) in parts.iter().enumerate() {
                let j = choice[idx];
                removed_deg += n as i64 * j as i64;
                coeff = &coeff * &(&binomial(k as i64, j as i64) * &Rat::from_int(q).pow(j));
                if k > j {
                    rest.insert(n, k - j);
                }
            }
            // x-power: -qp - removed + created = -t-1.
            let created = removed_deg + q * p - t - 1;
            if created >= 0 {
                for (add, c) in weighted_partitions(created, q) {
                    let mut total = rest.clone();
                    for (n, k) in add {
                        *total.entry(n).or_insert(0) += k;
                    }
                    out.add_term(LatticeState::from_counts(&total, p + q), Scalar::from_rat(&coeff * &c));
                }
            }
            // Next choice vector.
            let mut idx = 0;
            loop {
                if idx == parts.len() {
                    return out;
                }
                if choice[idx] < parts[idx].1 {
                    choice[idx] += 1;
                    break;
                }
                choice[idx] = 0;
                idx += 1;
            }
        }
    }

    /// `(e^{qα})_(t)` for an exact rational exponent, rejecting exponents
    /// outside the integral lattice of this sector.
    pub fn exp_mode_checked(&self, q: i64, t: &Rat, s: &LatticeState) -> Result<LatticeVector, LatticeError> {
        match t.to_i64() {
            Some(t) => Ok(self.exp_mode(q, t, s)),
            None => Err(LatticeError::IncompatibleExponent { exponent: t.to_string(), sector: s.sector }),
        }
    }

    /// `u_(t) s` for arbitrary basis states `u` and `s`.
    pub fn mode(&self, u: &LatticeState, t: i64, s: &LatticeState) -> LatticeVector {
        if u.oscillators.is_empty() {
            return self.exp_mode(u.sector, t, s);
        }
        if u.sector == 0 && u.oscillators == [1] {
            return alpha(t, s);
        }
        // Standard weight of the output: wt(s) + wt(u) - t - 1 ≥ -(p+q)²/2.
        let out_p = s.sector + u.sector;
        let floor = Half::from_twice(-out_p * out_p);
        if s.std_weight() + u.std_weight() - Half::int(t + 1) < floor {
            return Vector::zero();
        }
        let key = (u.clone(), t, s.clone());
        if let Some(v) = self.cache.lock().expect("lattice cache").get(&key) {
            return v.clone();
        }
        let n = u.oscillators[0] as i64;
        let rest = LatticeState { oscillators: u.oscillators[1..].to_vec(), sector: u.sector };
        let k = -n;
        let sign_k = if k.rem_euclid(2) == 1 { -1 } else { 1 };
        // rest_(t+j) s vanishes once its output drops below the sector floor;
        // α(j) s vanishes for j above the oscillator degree.
        let bound1 = (s.std_weight() + rest.std_weight() - floor).floor() - t - 1;
        let bound2 = s.degree();
        let mut out = Vector::zero();
        for j in 0..=bound1.max(bound2) {
            let c = binomial(k, j);
            let c = Scalar::from_rat(if j % 2 == 1 { -c } else { c });
            if j <= bound1 {
                let inner = self.mode(&rest, t + j, s);
                out.add_scaled(&alpha_vec(k - j, &inner), &c);
            }
            if j <= bound2 {
                let inner = alpha(j, s);
                let v = self.mode_vec(&rest, k + t - j, &inner);
                out.add_scaled(&v, &Scalar::from_int(-sign_k).scale(c.as_rational().expect("rational")));
            }
        }
        self.cache.lock().expect("lattice cache").insert(key, out.clone());
        out
    }

    pub fn mode_vec(&self, u: &LatticeState, t: i64, v: &LatticeVector) -> LatticeVector {
        v.map_linear(|s| self.mode(u, t, s))
    }

    pub fn state_mode(&self, u: &LatticeVector, t: i64, v: &LatticeVector) -> LatticeVector {
        let mut out = Vector::zero();
        for (b, c) in u.iter() {
            out.add_scaled(&self.mode_vec(b, t, v), c);
        }
        out
    }
}

/// Which modified conformal vector to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FreeField {
    /// `-α(-1)²/2 + α(-2)/2` on `V_L`.
    Lattice,
    /// `a(-1)²/2 + i a(-2)/2` on `M(1,s)`.
    Liouville,
}

/// Pairs `(a, b)` with `a + b = n`, `a ≤ b`, whose normal-ordered product
/// `α(a)α(b)` can act nontrivially on a state of oscillator degree `deg`.
fn normal_pairs(n: i64, deg: i64) -> Vec<(i64, i64)> {
    let lo = n.div_euclid(2) + n.rem_euclid(2);
    let hi = deg.max(0).max(lo);
    (lo..=hi).map(|b| (n - b, b)).filter(|&(a, b)| a <= b).collect()
}

/// `L̃(n)` of `-α(-1)²/2 + α(-2)/2` on a lattice state.
pub fn lattice_virasoro(n: i64, s: &LatticeState) -> LatticeVector {
    let mut out = Vector::zero();
    let v = Vector::basis(s.clone());
    for (a, b) in normal_pairs(n, s.degree()) {
        let t = alpha_vec(a, &alpha(b, s));
        let w = if a == b { Scalar::frac(-1, 2) } else { Scalar::from_int(-1) };
        out.add_scaled(&t, &w);
    }
    out.add_scaled(&alpha_vec(n, &v), &Scalar::frac(-n - 1, 2));
    out
}

pub fn lattice_virasoro_vec(n: i64, v: &LatticeVector) -> LatticeVector {
    v.map_linear(|s| lattice_virasoro(n, s))
}

/// A Fock state `a(-n₁)⋯a(-n_r) v_s` of `M(1,s)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct HeisState {
    pub oscillators: Vec<u32>,
}

impl HeisState {
    pub fn top() -> Self {
        HeisState { oscillators: Vec::new() }
    }

    pub fn new(mut oscillators: Vec<u32>) -> Self {
        oscillators.sort_unstable_by(|a, b| b.cmp(a));
        HeisState { oscillators }
    }

    pub fn degree(&self) -> i64 {
        self.oscillators.iter().map(|&n| n as i64).sum()
    }
}

/// The Fock module `M(1,s)` with `[a(m), a(n)] = m δ_{m+n,0}` and
/// `a(0) = s`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeisModule {
    pub s: Scalar,
}

#[derive(Serialize)]
struct HeisStateJson<'a> {
    oscillators: &'a [u32],
    s: &'a Scalar,
}

impl HeisModule {
    pub fn new(s: Scalar) -> Self {
        HeisModule { s }
    }

    pub fn a(&self, n: i64, st: &HeisState) -> Vector<HeisState> {
        if n < 0 {
            let mut osc = st.oscillators.clone();
            osc.push((-n) as u32);
            return Vector::basis(HeisState::new(osc));
        }
        if n == 0 {
            return Vector::term(st.clone(), self.s.clone());
        }
        let k = st.oscillators.iter().filter(|&&x| x as i64 == n).count() as i64;
        if k == 0 {
            return Vector::zero();
        }
        let mut osc = st.oscillators.clone();
        let pos = osc.iter().position(|&x| x as i64 == n).expect("present");
        osc.remove(pos);
        Vector::term(HeisState { oscillators: osc }, Scalar::from_int(n * k))
    }

    pub fn a_vec(&self, n: i64, v: &Vector<HeisState>) -> Vector<HeisState> {
        v.map_linear(|st| self.a(n, st))
    }

    /// `L̃(n)` of `a(-1)²/2 + i a(-2)/2`.
    pub fn virasoro(&self, n: i64, st: &HeisState) -> Vector<HeisState> {
        let mut out = Vector::zero();
        for (a, b) in normal_pairs(n, st.degree()) {
            let t = self.a_vec(a, &self.a(b, st));
            let w = if a == b { Scalar::frac(1, 2) } else { Scalar::one() };
            out.add_scaled(&t, &w);
        }
        let lin = &Scalar::i() * &Scalar::frac(-n - 1, 2);
        out.add_scaled(&self.a(n, st), &lin);
        out
    }

    pub fn virasoro_vec(&self, n: i64, v: &Vector<HeisState>) -> Vector<HeisState> {
        v.map_linear(|st| self.virasoro(n, st))
    }

    pub fn to_json_value<'a>(&'a self, st: &'a HeisState) -> impl Serialize + 'a {
        HeisStateJson { oscillators: &st.oscillators, s: &self.s }
    }

    /// Basis of the states of oscillator degree `d`.
    pub fn basis(d: i64) -> Vec<HeisState> {
        partitions(d).into_iter().map(HeisState::new).collect()
    }
}

/// Partitions of `n` into positive parts, each listed in decreasing order.
pub fn partitions(n: i64) -> Vec<Vec<u32>> {
    fn go(n: i64, max: i64, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if n == 0 {
            out.push(cur.clone());
            return;
        }
        for p in (1..=max.min(n)).rev() {
            cur.push(p as u32);
            go(n - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if n >= 0 {
        go(n, n, &mut Vec::new(), &mut out);
    }
    out
}

/// Basis of `V_L` states with oscillator degree `d` in sector `p`.
pub fn lattice_basis(d: i64, p: i64) -> Vec<LatticeState> {
    partitions(d).into_iter().map(|o| LatticeState::new(o, p)).collect()
}

/// Grade of a homogeneous lattice vector under `L̃(0)` and `α(0)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LatticeGrade {
    pub weight: Scalar,
    pub charge: Scalar,
    pub parity: u8,
}

pub fn grade_of(v: &LatticeVector) -> Result<LatticeGrade, LatticeError> {
    let (first, _) = v.iter().next().ok_or(LatticeError::ZeroVector)?;
    let (deg, p) = (first.degree(), first.sector);
    if v.keys().any(|s| s.degree() != deg || s.sector != p) {
        return Err(LatticeError::Inhomogeneous);
    }
    let w = lattice_virasoro_vec(0, &Vector::basis(first.clone())).coeff(first);
    Ok(LatticeGrade { weight: w, charge: Scalar::from_int(first.charge()), parity: first.parity() })
}

/// Grade `(weight, a(0)-charge, parity)` of a homogeneous Fock vector.
pub fn heis_grade_of(m: &HeisModule, v: &Vector<HeisState>) -> Result<LatticeGrade, LatticeError> {
    let (first, _) = v.iter().next().ok_or(LatticeError::ZeroVector)?;
    if v.keys().any(|s| s.degree() != first.degree()) {
        return Err(LatticeError::Inhomogeneous);
    }
    let w = m.virasoro(0, first).coeff(first);
    Ok(LatticeGrade { weight: w, charge: m.s.clone(), parity: 0 })
}
