//! Affine `sl₂` at level `m` and a commuting Heisenberg field inside
//! `L(c_m,h,q) ⊗ V_L`.
//!
//! With `κ = √((m+2)/2)` the distinguished states of `V(c_m,0,0) ⊗ V_L` are
//!
//! ```text
//! e = G+(-3/2)1 ⊗ e^{-α}
//! f = (m+2)/2 G-(-3/2)1 ⊗ e^{α}
//! h = -m 1 ⊗ α(-1) + (m+2) J(-1)1 ⊗ e⁰
//! ρ = κ (J(-1)1 ⊗ e⁰ - 1 ⊗ α(-1))
//! ω_sl2 = ω ⊗ e⁰ + (m+2)/4 J(-1)²1 ⊗ e⁰ - (m+2)/2 J(-1)1 ⊗ α(-1) + m/4 1 ⊗ α(-1)²
//! ```
//!
//! and `E(n) = e_(n)`, `F(n) = f_(n)`, `H(n) = h_(n)`, `R(n) = ρ_(n)`,
//! `L_sl2(n) = (ω_sl2)_(n+1)`. Tensor modes follow the Koszul rule
//! `(u⊗v)_(t)(b⊗l) = (-1)^{|v||b|} Σ_i u_(i)b ⊗ v_(t-1-i)l`.
//!
//! Test windows are graded by `w = ℓ + N - p²/2`, the weight relative to
//! the lowest N=2 weight for `ω ⊗ e⁰ - 1 ⊗ α(-1)²/2`. All four currents
//! have weight one for it, so `X(n)` lowers `w` by `n`, exactly as for
//! `L_sl2(0)`. The label `s = Q + p` (N=2 charge plus sector) is preserved
//! by every current, `R(0) = κ s` and `H(0) = (m+2)s - 2p`.

use std::collections::{BTreeMap, HashMap};
use std::sync::Mutex;

use serde::Serialize;

use crate::exactfield::Scalar;
use crate::half::Half;
use crate::lattice::{Lattice, LatticeState};
use crate::linalg::{Matrix, SpanBasis};
use crate::lincomb::Vector;
use crate::pbw::{Grade, Monomial};
use crate::rational::Rat;
use crate::superalg::{bracket, Kind, ModeSymbol};
use crate::vertex::{FieldAction, ModeRep};

pub type TKey<B> = (B, LatticeState);
pub type TVec<B> = Vector<TKey<B>>;
/// A state of `V(c,0,0) ⊗ V_L`.
pub type PairState = Vector<(Monomial, LatticeState)>;

fn pair(u: Vec<ModeSymbol>, l: LatticeState) -> (Monomial, LatticeState) {
    (Monomial::from_sorted(u), l)
}

/// The distinguished states of the construction.
#[derive(Debug, Clone)]
pub struct CosetGenerators {
    pub m: u32,
    pub e: PairState,
    pub f: PairState,
    pub h: PairState,
    pub rho: PairState,
    pub omega_sl2: PairState,
}

impl CosetGenerators {
    pub fn new(m: u32) -> Self {
        let mi = m as i64;
        let vac = LatticeState::vacuum;
        let a1 = || LatticeState::new(vec![1], 0);
        let kappa = Scalar::sqrt_half_m_plus_2(m);
        let e = Vector::basis(pair(vec![ModeSymbol::g(true, -3)], LatticeState::exp(-1)));
        let f = Vector::term(pair(vec![ModeSymbol::g(false, -3)], LatticeState::exp(1)), Scalar::frac(mi + 2, 2));
        let mut h = Vector::term(pair(vec![], a1()), Scalar::from_int(-mi));
        h.add_term(pair(vec![ModeSymbol::j(-1)], vac()), Scalar::from_int(mi + 2));
        let mut rho = Vector::term(pair(vec![ModeSymbol::j(-1)], vac()), kappa.clone());
        rho.add_term(pair(vec![], a1()), -&kappa);
        let mut omega_sl2 = Vector::basis(pair(vec![ModeSymbol::l(-2)], vac()));
        omega_sl2.add_term(pair(vec![ModeSymbol::j(-1), ModeSymbol::j(-1)], vac()), Scalar::frac(mi + 2, 4));
        omega_sl2.add_term(pair(vec![ModeSymbol::j(-1)], a1()), Scalar::frac(-(mi + 2), 2));
        omega_sl2.add_term(pair(vec![], LatticeState::new(vec![1, 1], 0)), Scalar::frac(mi, 4));
        CosetGenerators { m, e, f, h, rho, omega_sl2 }
    }

    /// `ω ⊗ e⁰ + 1 ⊗ (-α(-1)²/2 + α(-2)/2)`.
    pub fn omega_total() -> PairState {
        let mut w = Vector::basis(pair(vec![ModeSymbol::l(-2)], LatticeState::vacuum()));
        w.add_term(pair(vec![], LatticeState::new(vec![1, 1], 0)), Scalar::frac(-1, 2));
        w.add_term(pair(vec![], LatticeState::new(vec![2], 0)), Scalar::frac(1, 2));
        w
    }
}

/// Modes of `V(c,0,0) ⊗ V_L` states on `M ⊗ V_L`.
pub struct TensorFields<'a, R: ModeRep> {
    fa: FieldAction<'a, R>,
    lattice: &'a Lattice,
}

impl<'a, R: ModeRep> TensorFields<'a, R> {
    pub fn new(rep: &'a R, lattice: &'a Lattice) -> Self {
        TensorFields { fa: FieldAction::new(rep), lattice }
    }

    pub fn rep(&self) -> &'a R {
        self.fa.rep()
    }

    /// `(u ⊗ v)_(t)` on `b ⊗ l`.
    pub fn mode(&self, u: &Monomial, v: &LatticeState, t: i64, key: &TKey<R::B>) -> TVec<R::B> {
        let (b, l) = key;
        let sign = if v.parity() * self.rep().parity(b) == 1 { -1 } else { 1 };
        let mut out: TVec<R::B> = Vector::zero();
        let (ilo, ihi) = if u.is_one() {
            (-1, -1)
        } else {
            // u_(i) b vanishes for i + 1 > level(b) + wt(u); v_(j) l vanishes
            // once its standard weight drops below the sector floor.
            let ihi = (self.rep().level(b) + u.grade().level).floor() - 1;
            let pout = l.sector + v.sector;
            let jmax = (l.std_weight() + v.std_weight() + Half::from_twice(pout * pout)).floor() - 1;
            (t - 1 - jmax, ihi)
        };
        for i in ilo..=ihi {
            let right = self.lattice.mode(v, t - 1 - i, l);
            if right.is_zero() {
                continue;
            }
            let left = self.fa.mode(u, i, b);
            for (bb, cb) in left.iter() {
                for (ll, cl) in right.iter() {
                    out.add_term((bb.clone(), ll.clone()), &(cb * cl) * &Scalar::from_int(sign));
                }
            }
        }
        out
    }

    pub fn state_mode(&self, s: &PairState, t: i64, w: &TVec<R::B>) -> TVec<R::B> {
        let mut out = Vector::zero();
        for (key, cw) in w.iter() {
            for ((u, v), cs) in s.iter() {
                out.add_scaled(&self.mode(u, v, t, key), &(cs * cw));
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum CosetOp {
    E,
    F,
    H,
    R,
    /// Modes of `ω_sl2`, indexed as Virasoro modes.
    Sl2Virasoro,
}

impl CosetOp {
    pub fn name(self) -> &'static str {
        match self {
            CosetOp::E => "E",
            CosetOp::F => "F",
            CosetOp::H => "H",
            CosetOp::R => "R",
            CosetOp::Sl2Virasoro => "Lsl2",
        }
    }

    /// Change of `(w, p)` under the `n`-th mode.
    pub fn shift(self, n: i64) -> (Half, i64) {
        let dp = match self {
            CosetOp::E => -1,
            CosetOp::F => 1,
            _ => 0,
        };
        (Half::int(-n), dp)
    }
}

/// A grade of `M ⊗ V_L`: `s = Q_rel + p`, relative weight `w`, sector `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CosetGrade {
    pub s: i64,
    pub w: Half,
    pub p: i64,
}

/// The construction on a fixed N=2 module.
pub struct Coset<'a, R: ModeRep> {
    pub m: u32,
    pub gens: CosetGenerators,
    tf: TensorFields<'a, R>,
    cache: Mutex<HashMap<(CosetOp, i64, TKey<R::B>), TVec<R::B>>>,
}

/// Outcome of one family of identities.
#[derive(Debug, Clone, Default, Serialize)]
pub struct RelationCheck {
    pub checked: usize,
    pub failures: Vec<String>,
}

impl RelationCheck {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok && self.failures.len() < 20 {
            self.failures.push(what());
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct AffineReport {
    pub m: u32,
    pub relations: BTreeMap<String, RelationCheck>,
    /// Distinct values of `([E(p),F(-p)] - H(0)) / p` on window vectors.
    pub measured_levels: Vec<Scalar>,
    pub states: usize,
}

impl AffineReport {
    pub fn passed(&self) -> bool {
        self.relations.values().all(RelationCheck::passed) && self.measured_levels == vec![Scalar::from_int(self.m as i64)]
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RhoReport {
    pub commutes: BTreeMap<String, RelationCheck>,
    pub heisenberg: RelationCheck,
    /// Nonzero coefficients of `ω_sl2 + ω_ρ - ω_total`.
    pub virasoro_identity_residual: Vec<(String, Scalar)>,
    pub sl2_virasoro: RelationCheck,
    pub sl2_central_charge: Vec<Scalar>,
    pub expected_central_charge: Scalar,
}

impl RhoReport {
    pub fn commutation_passed(&self) -> bool {
        self.commutes.values().all(RelationCheck::passed) && self.heisenberg.passed()
    }

    pub fn identity_passed(&self) -> bool {
        self.virasoro_identity_residual.is_empty()
    }

    pub fn virasoro_passed(&self) -> bool {
        self.sl2_virasoro.passed() && self.sl2_central_charge == vec![self.expected_central_charge.clone()]
    }
}

/// A joint highest-weight vector for affine `sl₂` and the `ρ` Heisenberg.
#[derive(Debug, Clone, Serialize)]
pub struct HighestWeight<B: Ord + Serialize> {
    pub k: Scalar,
    pub s: Scalar,
    pub grade: CosetGrade,
    pub weight: Scalar,
    pub charge: Scalar,
    #[serde(skip)]
    pub vector: TVec<B>,
}

#[derive(Debug, Clone, Serialize)]
pub struct GradeCertificate {
    pub grade: CosetGrade,
    pub dim: usize,
    pub spanned: usize,
    /// Sum over highest-weight vectors of their descendant dimensions.
    pub summed: usize,
}

impl GradeCertificate {
    pub fn passed(&self) -> bool {
        self.dim == self.spanned && self.dim == self.summed
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Decomposition<B: Ord + Serialize> {
    pub m: u32,
    pub highest_weights: Vec<HighestWeight<B>>,
    pub certificates: Vec<GradeCertificate>,
    /// Found vectors for which `F(0)^{k+1}v ≠ 0` within `m + 1` steps.
    pub non_integrable: usize,
}

impl<B: Ord + Serialize> Decomposition<B> {
    /// Whether every `sl₂` label lies in `{0, 1, ..., m}`.
    pub fn labels_dominant(&self) -> bool {
        self.highest_weights.iter().all(|hw| {
            hw.k.as_rational().and_then(Rat::to_i64).is_some_and(|k| (0..=self.m as i64).contains(&k))
        })
    }

    pub fn passed(&self) -> bool {
        self.non_integrable == 0 && self.labels_dominant() && self.certificates.iter().all(GradeCertificate::passed)
    }
}

impl<'a, R: ModeRep> Coset<'a, R> {
    pub fn new(m: u32, rep: &'a R, lattice: &'a Lattice) -> Self {
        Coset { m, gens: CosetGenerators::new(m), tf: TensorFields::new(rep, lattice), cache: Mutex::default() }
    }

    pub fn fields(&self) -> &TensorFields<'a, R> {
        &self.tf
    }

    fn state_of(&self, op: CosetOp) -> &PairState {
        match op {
            CosetOp::E => &self.gens.e,
            CosetOp::F => &self.gens.f,
            CosetOp::H => &self.gens.h,
            CosetOp::R => &self.gens.rho,
            CosetOp::Sl2Virasoro => &self.gens.omega_sl2,
        }
    }

    /// The `n`-th mode of an operator family on a basis vector.
    pub fn op(&self, op: CosetOp, n: i64, key: &TKey<R::B>) -> TVec<R::B> {
        let ck = (op, n, key.clone());
        if let Some(v) = self.cache.lock().expect("coset cache").get(&ck) {
            return v.clone();
        }
        let t = if op == CosetOp::Sl2Virasoro { n + 1 } else { n };
        let out = self.tf.state_mode(self.state_of(op), t, &Vector::basis(key.clone()));
        self.cache.lock().expect("coset cache").insert(ck, out.clone());
        out
    }

    pub fn op_vec(&self, op: CosetOp, n: i64, v: &TVec<R::B>) -> TVec<R::B> {
        v.map_linear(|k| self.op(op, n, k))
    }

    fn commutator(&self, a: (CosetOp, i64), b: (CosetOp, i64), v: &TVec<R::B>) -> TVec<R::B> {
        let ab = self.op_vec(a.0, a.1, &self.op_vec(b.0, b.1, v));
        let ba = self.op_vec(b.0, b.1, &self.op_vec(a.0, a.1, v));
        ab.sub(&ba)
    }

    fn params_scalar_offsets(&self) -> (Scalar, Scalar) {
        let p = self.tf.rep().lowest();
        (p.h.clone(), p.q.clone())
    }

    /// Grade of a basis vector.
    pub fn grade_of(&self, key: &TKey<R::B>) -> CosetGrade {
        let (b, l) = key;
        let rep = self.tf.rep();
        let level = rep.level(b);
        let q_rel = self.relative_charge(b);
        let w = level + Half::int(l.degree()) - Half::from_twice(l.sector * l.sector);
        CosetGrade { s: q_rel + l.sector, w, p: l.sector }
    }

    fn relative_charge(&self, b: &R::B) -> i64 {
        // J(0) acts by q + Q_rel on a basis vector.
        let rep = self.tf.rep();
        let v = rep.act(&ModeSymbol::j(0), b);
        let eig = &v.coeff(b) - &rep.lowest().q;
        eig.as_rational().and_then(Rat::to_i64).expect("integral relative charge")
    }

    /// Basis of one grade.
    pub fn grade_basis(&self, g: CosetGrade) -> Vec<TKey<R::B>> {
        let q_rel = g.s - g.p;
        let total = g.w + Half::from_twice(g.p * g.p);
        let mut out = Vec::new();
        if total < Half::ZERO {
            return out;
        }
        let mut level = Half::ZERO;
        while level <= total {
            let n = total - level;
            if n.is_integer() && q_rel.abs() <= Grade::max_charge_at(level) {
                let bs = self.tf.rep().basis_at(Grade::new(level, q_rel));
                if !bs.is_empty() {
                    for l in crate::lattice::lattice_basis(n.to_int(), g.p) {
                        for b in &bs {
                            out.push((b.clone(), l.clone()));
                        }
                    }
                }
            }
            level += Half::HALF;
        }
        out
    }

    /// All nonempty grades with `w ≤ cutoff` and `|p| ≤ sectors`.
    pub fn window(&self, cutoff: Half, sectors: i64) -> BTreeMap<CosetGrade, Vec<TKey<R::B>>> {
        let mut out = BTreeMap::new();
        for p in -sectors..=sectors {
            let top = cutoff + Half::from_twice(p * p);
            let mut w = -Half::from_twice(p * p);
            // w runs over values with ℓ + N ≥ 0, in half steps.
            while w <= cutoff {
                let qmax = Grade::max_charge_at(top);
                for q_rel in -qmax..=qmax {
                    let g = CosetGrade { s: q_rel + p, w, p };
                    let basis = self.grade_basis(g);
                    if !basis.is_empty() {
                        out.insert(g, basis);
                    }
                }
                w += Half::HALF;
            }
        }
        out
    }

    fn affine_symbol(op: CosetOp, n: i64) -> ModeSymbol {
        let kind = match op {
            CosetOp::E => Kind::E,
            CosetOp::F => Kind::F,
            CosetOp::H => Kind::H,
            _ => unreachable!("affine currents only"),
        };
        ModeSymbol::affine(kind, n)
    }

    /// Checks the affine table on every window vector for mode indices
    /// `|n| ≤ max_index`, with the central element acting by `m`.
    pub fn verify_affine_relations(&self, cutoff: Half, sectors: i64, max_index: i64) -> AffineReport {
        let window = self.window(cutoff, sectors);
        let keys: Vec<TKey<R::B>> = window.values().flatten().cloned().collect();
        let level = Scalar::from_int(self.m as i64);
        let ops = [CosetOp::E, CosetOp::F, CosetOp::H];
        let mut relations: BTreeMap<String, RelationCheck> = BTreeMap::new();
        let mut measured: Vec<Scalar> = Vec::new();
        let mut level_check = RelationCheck::default();
        for (ia, &x) in ops.iter().enumerate() {
            for &y in &ops[ia..] {
                let name = format!("[{},{}]", x.name(), y.name());
                let check = relations.entry(name).or_default();
                for a in -max_index..=max_index {
                    for b in -max_index..=max_index {
                        let table = bracket(&Self::affine_symbol(x, a), &Self::affine_symbol(y, b)).expect("affine table");
                        for key in &keys {
                            let v = Vector::basis(key.clone());
                            let lhs = self.commutator((x, a), (y, b), &v);
                            let mut rhs = Vector::zero();
                            for (z, c) in table.iter() {
                                if z.is_central() {
                                    rhs.add_scaled(&v, &(c * &level));
                                } else {
                                    let op = match z.kind {
                                        Kind::E => CosetOp::E,
                                        Kind::F => CosetOp::F,
                                        _ => CosetOp::H,
                                    };
                                    rhs.add_scaled(&self.op(op, z.index.to_int(), key), c);
                                }
                            }
                            check.record(lhs == rhs, || format!("[{}({a}),{}({b})] on {key:?}", x.name(), y.name()));
                        }
                    }
                }
            }
        }
        for key in &keys {
            let v = Vector::basis(key.clone());
            for p in 1..=max_index.max(2) {
                let r = self.commutator((CosetOp::E, p), (CosetOp::F, -p), &v).sub(&self.op(CosetOp::H, 0, key));
                let coeff = &r.coeff(key) * &Scalar::frac(1, p);
                let scalar = r.sub(&v.scaled(&(&coeff * &Scalar::from_int(p)))).is_zero();
                level_check.record(scalar, || format!("[E({p}),F(-{p})] - H(0) is not scalar on {key:?}"));
                if scalar && !measured.contains(&coeff) {
                    measured.push(coeff);
                }
            }
        }
        relations.insert("level".into(), level_check);
        AffineReport { m: self.m, relations, measured_levels: measured, states: keys.len() }
    }

    /// The `ρ`-commutation, the Virasoro-element identity and the
    /// `ω_sl2` Virasoro relations.
    pub fn verify_rho_and_virasoro(&self, cutoff: Half, sectors: i64, max_index: i64) -> RhoReport {
        let window = self.window(cutoff, sectors);
        let keys: Vec<TKey<R::B>> = window.values().flatten().cloned().collect();
        let mut commutes = BTreeMap::new();
        for y in [CosetOp::E, CosetOp::F, CosetOp::H] {
            let mut check = RelationCheck::default();
            for a in -max_index..=max_index {
                for b in -max_index..=max_index {
                    for key in &keys {
                        let c = self.commutator((CosetOp::R, a), (y, b), &Vector::basis(key.clone()));
                        check.record(c.is_zero(), || format!("[R({a}),{}({b})] on {key:?}", y.name()));
                    }
                }
            }
            commutes.insert(format!("[R,{}]", y.name()), check);
        }
        let mut heisenberg = RelationCheck::default();
        for a in -max_index..=max_index {
            for b in -max_index..=max_index {
                for key in &keys {
                    let v = Vector::basis(key.clone());
                    let c = self.commutator((CosetOp::R, a), (CosetOp::R, b), &v);
                    let expected = if a + b == 0 { v.scaled(&Scalar::from_int(-a)) } else { Vector::zero() };
                    heisenberg.record(c == expected, || format!("[R({a}),R({b})] on {key:?}"));
                }
            }
        }
        let cm = Scalar::from_rat(Rat::new(3 * self.m as i64, self.m as i64 + 2));
        let mut sl2_virasoro = RelationCheck::default();
        let mut charges: Vec<Scalar> = Vec::new();
        for a in -max_index..=max_index {
            for b in -max_index..=max_index {
                for key in &keys {
                    let v = Vector::basis(key.clone());
                    let lhs = self.commutator((CosetOp::Sl2Virasoro, a), (CosetOp::Sl2Virasoro, b), &v);
                    let mut rhs = self.op(CosetOp::Sl2Virasoro, a + b, key).scaled(&Scalar::from_int(a - b));
                    if a + b == 0 && a.abs() >= 2 {
                        let rest = lhs.sub(&rhs);
                        let cc = &rest.coeff(key) * &Scalar::frac(12, a * a * a - a);
                        if !charges.contains(&cc) {
                            charges.push(cc);
                        }
                    }
                    if a + b == 0 {
                        rhs.add_scaled(&v, &(&cm * &Scalar::frac(a * a * a - a, 12)));
                    }
                    sl2_virasoro.record(lhs == rhs, || format!("[Lsl2({a}),Lsl2({b})] on {key:?}"));
                }
            }
        }
        RhoReport {
            commutes,
            heisenberg,
            virasoro_identity_residual: virasoro_identity_residual(self.m),
            sl2_virasoro,
            sl2_central_charge: charges,
            expected_central_charge: cm,
        }
    }

    /// Kernel of the annihilation conditions on one grade.
    fn highest_weight_space(&self, basis: &[TKey<R::B>], g: CosetGrade) -> Vec<TVec<R::B>> {
        let mut conds = vec![(CosetOp::E, 0), (CosetOp::F, 1)];
        // R(n) maps into (s, w-n, p), which is empty below the floor.
        let mut n = 1;
        while !self.provably_empty(g.s, g.w - Half::int(n), g.p) {
            conds.push((CosetOp::R, n));
            n += 1;
        }
        let mut rows: BTreeMap<(usize, TKey<R::B>), Vec<Scalar>> = BTreeMap::new();
        for (col, key) in basis.iter().enumerate() {
            for (ci, &(op, n)) in conds.iter().enumerate() {
                for (k, c) in self.op(op, n, key).iter() {
                    rows.entry((ci, k.clone())).or_insert_with(|| vec![Scalar::zero(); basis.len()])[col] = c.clone();
                }
            }
        }
        let mat = if rows.is_empty() {
            Matrix::zeros(1, basis.len())
        } else {
            Matrix::from_rows(rows.into_values().collect())
        };
        mat.kernel().into_iter().map(|coords| basis.iter().cloned().zip(coords).collect()).collect()
    }

    /// Lower bound on `w` in a grade, from unitarity of the N=2 factor:
    /// `L(0) ≥ (3/2c) J(0)²`, so `w ≥ (m+2)/(2m) Q² - h - p²/2` with `Q` the
    /// absolute charge.
    fn unitarity_floor(&self, s: i64, p: i64) -> Rat {
        let (h, q) = self.params_scalar_offsets();
        let h = h.as_rational().expect("rational h").clone();
        let q = q.as_rational().expect("rational q").clone();
        let big_q = &q + &Rat::from_int(s - p);
        let m = self.m as i64;
        let bound = &(&Rat::new(m + 2, 2 * m) * &(&big_q * &big_q)) - &h;
        &bound - &Rat::new(p * p, 2)
    }

    /// Whether a grade is certainly empty.
    fn provably_empty(&self, s: i64, w: Half, p: i64) -> bool {
        self.unitarity_floor(s, p) > w.to_rat()
    }

    /// Highest-weight vectors in the window and a spanning certificate for
    /// every grade all of whose possible ancestors lie in the window.
    pub fn find_affine_hw(&self, cutoff: Half, sectors: i64) -> Decomposition<R::B>
    where
        R::B: Serialize,
    {
        let window = self.window(cutoff, sectors);
        let kappa = Scalar::sqrt_half_m_plus_2(self.m);
        let (h0, q0) = self.params_scalar_offsets();
        let m = self.m as i64;
        let mut hws: Vec<HighestWeight<R::B>> = Vec::new();
        let mut seeds: HashMap<CosetGrade, Vec<(usize, TVec<R::B>)>> = HashMap::new();
        let mut non_integrable = 0;
        for (&g, basis) in &window {
            for v in self.highest_weight_space(basis, g) {
                let idx = hws.len();
                let big_q = &q0 + &Scalar::from_int(g.s - g.p);
                let s_label = &big_q + &Scalar::from_int(g.p);
                let k = &(&Scalar::from_int(m + 2) * &s_label) - &Scalar::from_int(2 * g.p);
                // Seeds F(0)^j v, j = 0, 1, ...
                let mut cur = v.clone();
                let mut j = 0;
                while !cur.is_zero() {
                    if j > m {
                        non_integrable += 1;
                        break;
                    }
                    let sg = CosetGrade { s: g.s, w: g.w, p: g.p + j };
                    seeds.entry(sg).or_default().push((idx, cur.clone()));
                    cur = self.op_vec(CosetOp::F, 0, &cur);
                    j += 1;
                }
                hws.push(HighestWeight {
                    k,
                    s: &kappa * &s_label,
                    grade: g,
                    weight: &h0 + &Scalar::from_rat(g.w.to_rat()),
                    charge: big_q,
                    vector: v,
                });
            }
        }
        let mut certificates = Vec::new();
        let mut memo_all = HashMap::new();
        let mut memo_each: Vec<HashMap<CosetGrade, SpanBasis<TKey<R::B>>>> = vec![HashMap::new(); hws.len()];
        for (&g, basis) in &window {
            if !self.fully_contained(g, sectors) {
                continue;
            }
            self.descendants(g, &seeds, None, &mut memo_all);
            let spanned = memo_all[&g].dim();
            let mut summed = 0;
            for (idx, memo) in memo_each.iter_mut().enumerate() {
                if hws[idx].grade.s == g.s {
                    self.descendants(g, &seeds, Some(idx), memo);
                    summed += memo[&g].dim();
                }
            }
            certificates.push(GradeCertificate { grade: g, dim: basis.len(), spanned, summed });
        }
        Decomposition { m: self.m, highest_weights: hws, certificates, non_integrable }
    }

    /// Every ancestor grade outside the window is empty by the unitarity
    /// bound. Ancestors of `(s,w,p)` sit at `(s,w',p')` with `w' ≤ w` and
    /// `p - (w-w') - m ≤ p' ≤ p + (w-w')`, using `F(0)^{m+1} v = 0`.
    fn fully_contained(&self, g: CosetGrade, sectors: i64) -> bool {
        let m = self.m as i64;
        let mut w2 = g.w;
        while !self.nothing_at_or_below(g.s, w2) {
            let depth = (g.w - w2).to_int();
            for p2 in (g.p - depth - m)..=(g.p + depth) {
                if p2.abs() > sectors && !self.provably_empty(g.s, w2, p2) {
                    return false;
                }
            }
            w2 = w2 - Half::ONE;
        }
        true
    }

    /// Whether every grade `(s, w', p)` with `w' ≤ w` is empty for all `p`.
    fn nothing_at_or_below(&self, s: i64, w: Half) -> bool {
        // The floor is convex in p with vertex at p* = (m+2)(q+s)/2.
        let q = self.params_scalar_offsets().1.as_rational().expect("rational q").clone();
        let m = self.m as i64;
        let vertex = &(&Rat::from_int(m + 2) * &(&q + &Rat::from_int(s))) * &Rat::new(1, 2);
        let base = vertex.to_f64().floor() as i64;
        let min = self.unitarity_floor(s, base).min(self.unitarity_floor(s, base + 1));
        min > w.to_rat()
    }

    /// Span at grade `g` of `U(negative modes)` applied to the seeds (all
    /// highest-weight vectors, or only the one with index `only`), memoized
    /// over grades.
    fn descendants(
        &self,
        g: CosetGrade,
        seeds: &HashMap<CosetGrade, Vec<(usize, TVec<R::B>)>>,
        only: Option<usize>,
        memo: &mut HashMap<CosetGrade, SpanBasis<TKey<R::B>>>,
    ) {
        if memo.contains_key(&g) {
            return;
        }
        let mut span = SpanBasis::new();
        if !self.provably_empty(g.s, g.w, g.p) {
            if let Some(list) = seeds.get(&g) {
                for (idx, v) in list {
                    if only.is_none_or(|o| o == *idx) {
                        span.insert(v);
                    }
                }
            }
            for op in [CosetOp::E, CosetOp::F, CosetOp::H, CosetOp::R] {
                let mut n = -1;
                loop {
                    let (dw, dp) = op.shift(n);
                    let lower = CosetGrade { s: g.s, w: g.w - dw, p: g.p - dp };
                    if self.nothing_at_or_below(lower.s, lower.w) {
                        break;
                    }
                    self.descendants(lower, seeds, only, memo);
                    let vecs: Vec<TVec<R::B>> = memo[&lower].vectors().cloned().collect();
                    for v in vecs {
                        span.insert(&self.op_vec(op, n, &v));
                    }
                    n -= 1;
                }
            }
        }
        memo.insert(g, span);
    }
}
/// `ω_sl2 + ω_ρ - ω_total` in `V(c_m,0,0) ⊗ V_L`, with
/// `ω_ρ = -ρ_(-1)ρ/2 + ρ_(-2)1/2`, the Liouville vector for `a = -iρ`.
/// Returned as the list of nonzero coefficients.
pub fn virasoro_identity_residual(m: u32) -> Vec<(String, Scalar)> {
    let gens = CosetGenerators::new(m);
    let c = Scalar::from_rat(Rat::new(3 * m as i64, m as i64 + 2));
    let vac = crate::pbw::PbwModule::vacuum(c);
    let lattice = Lattice::default();
    let tf = TensorFields::new(&vac, &lattice);
    let one: TVec<Monomial> = Vector::basis((Monomial::one(), LatticeState::vacuum()));
    let rho_state = tf.state_mode(&gens.rho, -1, &one);
    let mut omega_rho = tf.state_mode(&gens.rho, -1, &rho_state).scaled(&Scalar::frac(-1, 2));
    omega_rho.add_scaled(&tf.state_mode(&gens.rho, -2, &one), &Scalar::frac(1, 2));
    let mut total = gens.omega_sl2.clone();
    total.add_vec(&omega_rho);
    let residual = total.sub(&CosetGenerators::omega_total());
    residual.iter().map(|((u, l), c)| (format!("{u} ⊗ {}", lattice_label(l)), c.clone())).collect()
}

fn lattice_label(l: &LatticeState) -> String {
    let mut s = String::new();
    for n in &l.oscillators {
        s.push_str(&format!("α(-{n})"));
    }
    s.push_str(&format!("e^{}", l.sector));
    s
}
