//! Irreducible highest-weight ns(2)-modules `L(c,h,q)` realized through the
//! contravariant form.
//!
//! Each grade is spanned by words `x · b` with `x` one of a few generators of
//! the negative subalgebra and `b` a basis vector of a lower grade. A basis is
//! selected from independent columns of the Gram matrix of this spanning set,
//! so the form restricted to it is nondegenerate and the radical never
//! appears. Raising operators are evaluated through the form,
//! `y b = Σ_f (G⁻¹ p)_f f` with `p_f = <ω(y) f, b>`; lowering operators are
//! commuted through the word.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use serde::Serialize;

use crate::exactfield::Scalar;
use crate::half::Half;
use crate::linalg::Matrix;
use crate::lincomb::Vector;
use crate::pbw::{Grade, Monomial, PbwModule, VermaParams};
use crate::superalg::{bracket, Kind, ModeSymbol};

/// A basis vector of one grade of an irreducible module.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct QBasis {
    pub grade: Grade,
    pub idx: u32,
}

impl QBasis {
    pub const HW: QBasis = QBasis { grade: Grade::ZERO, idx: 0 };

    pub fn parity(&self) -> u8 {
        self.grade.charge.rem_euclid(2) as u8
    }
}

impl fmt::Debug for QBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "b[{},{};{}]", self.grade.level, self.grade.charge, self.idx)
    }
}

#[derive(Debug, Clone, Copy)]
enum Word {
    Hw,
    Apply(ModeSymbol, u32),
}

#[derive(Debug)]
struct GradeData {
    words: Vec<Word>,
    gram: Matrix,
    gram_inv: Matrix,
}

impl GradeData {
    fn empty() -> GradeData {
        GradeData { words: Vec::new(), gram: Matrix::zeros(0, 0), gram_inv: Matrix::zeros(0, 0) }
    }
}

/// The irreducible quotient of the Verma module with the given parameters.
pub struct IrreducibleModule {
    params: VermaParams,
    spanning: Vec<ModeSymbol>,
    grades: Mutex<HashMap<Grade, Arc<GradeData>>>,
    acts: Mutex<HashMap<(ModeSymbol, QBasis), Vector<QBasis>>>,
}

impl fmt::Debug for IrreducibleModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("IrreducibleModule").field("params", &self.params).finish()
    }
}

impl IrreducibleModule {
    pub fn new(params: VermaParams) -> IrreducibleModule {
        IrreducibleModule {
            params,
            // These generate the negative part of ns(2) as a Lie superalgebra.
            spanning: vec![
                ModeSymbol::g(true, -1),
                ModeSymbol::g(false, -1),
                ModeSymbol::j(-1),
                ModeSymbol::l(-1),
                ModeSymbol::l(-2),
            ],
            grades: Mutex::default(),
            acts: Mutex::default(),
        }
    }

    pub fn params(&self) -> &VermaParams {
        &self.params
    }

    fn data(&self, g: Grade) -> Arc<GradeData> {
        if let Some(d) = self.grades.lock().expect("grade lock").get(&g) {
            return d.clone();
        }
        let d = Arc::new(self.build(g));
        self.grades.lock().expect("grade lock").entry(g).or_insert(d).clone()
    }

    /// Dimension of a grade.
    pub fn dim(&self, g: Grade) -> usize {
        self.data(g).words.len()
    }

    pub fn basis(&self, g: Grade) -> Vec<QBasis> {
        (0..self.dim(g) as u32).map(|idx| QBasis { grade: g, idx }).collect()
    }

    /// The Gram matrix of the chosen basis of a grade (nondegenerate).
    pub fn gram(&self, g: Grade) -> Matrix {
        self.data(g).gram.clone()
    }

    fn build(&self, g: Grade) -> GradeData {
        if g.level < Half::ZERO || g.charge.abs() > Grade::max_charge_at(g.level) {
            return GradeData::empty();
        }
        if g == Grade::ZERO {
            return GradeData { words: vec![Word::Hw], gram: Matrix::identity(1), gram_inv: Matrix::identity(1) };
        }
        if g.level == Half::ZERO {
            return GradeData::empty();
        }
        let mut span: Vec<(ModeSymbol, u32)> = Vec::new();
        for x in &self.spanning {
            let lower = g.unshifted(x);
            for j in 0..self.dim(lower) as u32 {
                span.push((*x, j));
            }
        }
        let n = span.len();
        if n == 0 {
            return GradeData::empty();
        }
        // gram[a][b] = <x_a e_a, s_b> = <e_a, ω(x_a) s_b>; group rows by x_a.
        let mut full = Matrix::zeros(n, n);
        for x in &self.spanning {
            let lower = g.unshifted(x);
            let rows: Vec<usize> = (0..n).filter(|&a| span[a].0 == *x).collect();
            if rows.is_empty() {
                continue;
            }
            let ld = self.data(lower);
            let wx = x.omega();
            for (b, &(xb, eb)) in span.iter().enumerate() {
                let w = self.lower_on_word(&wx, &xb, QBasis { grade: g.unshifted(&xb), idx: eb });
                let coords = coords_in(&w, lower, ld.words.len());
                let paired = ld.gram.mul_vec(&coords);
                for &a in &rows {
                    full.set(a, b, paired[span[a].1 as usize].clone());
                }
            }
        }
        let chosen = full.independent_columns();
        let gram = full.submatrix(&chosen, &chosen);
        let gram_inv = gram.inverse().expect("independent columns give a nondegenerate block");
        let words = chosen.iter().map(|&k| Word::Apply(span[k].0, span[k].1)).collect();
        GradeData { words, gram, gram_inv }
    }

    /// `y · (x · e)` for a lowering or zero mode `y`, where `x · e` need not
    /// be a chosen basis word.
    fn lower_on_word(&self, y: &ModeSymbol, x: &ModeSymbol, e: QBasis) -> Vector<QBasis> {
        let sign = if y.is_odd() && x.is_odd() { -1 } else { 1 };
        let ye = self.act(y, &e);
        let mut out = self.act_vec(x, &ye).scaled(&Scalar::from_int(sign));
        let br = bracket(y, x).expect("ns2 modes");
        for (z, c) in br.iter() {
            out.add_scaled(&self.act(z, &e), c);
        }
        out
    }

    /// Action of an ns(2) mode (central `C` acts by `c`).
    pub fn act(&self, y: &ModeSymbol, b: &QBasis) -> Vector<QBasis> {
        if y.is_central() {
            return Vector::term(*b, self.params.c.clone());
        }
        if y.index == Half::ZERO {
            let v = match y.kind {
                Kind::L => &self.params.h + &Scalar::from_rat(b.grade.level.to_rat()),
                Kind::J => &self.params.q + &Scalar::from_int(b.grade.charge),
                _ => unreachable!("ns2 zero modes are L0 and J0"),
            };
            return Vector::term(*b, v);
        }
        let key = (*y, *b);
        if let Some(v) = self.acts.lock().expect("act lock").get(&key) {
            return v.clone();
        }
        let out = self.act_uncached(y, b);
        self.acts.lock().expect("act lock").insert(key, out.clone());
        out
    }

    fn act_uncached(&self, y: &ModeSymbol, b: &QBasis) -> Vector<QBasis> {
        let t = b.grade.shifted(y);
        if t.level < Half::ZERO {
            return Vector::zero();
        }
        if y.index < Half::ZERO {
            let td = self.data(t);
            if td.words.is_empty() {
                return Vector::zero();
            }
            let bd = self.data(b.grade);
            let wy = y.omega();
            let p: Vec<Scalar> = (0..td.words.len() as u32)
                .map(|f| {
                    let v = self.act(&wy, &QBasis { grade: t, idx: f });
                    let mut acc = Scalar::zero();
                    for (k, c) in v.iter() {
                        let e = bd.gram.get(k.idx as usize, b.idx as usize);
                        if !e.is_zero() {
                            acc += &(e * c);
                        }
                    }
                    acc
                })
                .collect();
            let coords = td.gram_inv.mul_vec(&p);
            return coords.into_iter().enumerate().map(|(k, c)| (QBasis { grade: t, idx: k as u32 }, c)).collect();
        }
        let bd = self.data(b.grade);
        match bd.words[b.idx as usize] {
            Word::Hw => Vector::zero(),
            Word::Apply(x, j) => self.lower_on_word(y, &x, QBasis { grade: b.grade.unshifted(&x), idx: j }),
        }
    }

    pub fn act_vec(&self, y: &ModeSymbol, v: &Vector<QBasis>) -> Vector<QBasis> {
        v.map_linear(|b| self.act(y, b))
    }

    /// `<u, v>` for vectors of one grade.
    pub fn pair(&self, u: &Vector<QBasis>, v: &Vector<QBasis>) -> Scalar {
        let mut acc = Scalar::zero();
        for (a, ca) in u.iter() {
            let d = self.data(a.grade);
            for (b, cb) in v.iter() {
                if b.grade != a.grade {
                    continue;
                }
                let e = d.gram.get(a.idx as usize, b.idx as usize);
                if !e.is_zero() {
                    acc += &(&(e * ca) * cb);
                }
            }
        }
        acc
    }

    /// A PBW representative of a basis vector in the Verma module with the
    /// same parameters.
    pub fn representative(&self, verma: &PbwModule, b: &QBasis) -> Vector<Monomial> {
        let d = self.data(b.grade);
        match d.words[b.idx as usize] {
            Word::Hw => Vector::basis(Monomial::one()),
            Word::Apply(x, j) => {
                let inner = self.representative(verma, &QBasis { grade: b.grade.unshifted(&x), idx: j });
                verma.apply_vec(&x, &inner)
            }
        }
    }

    /// Smallest level at which the given relative charge occurs, searching up
    /// to `max_level`.
    pub fn min_level_of_charge(&self, charge: i64, max_level: Half) -> Option<Half> {
        let mut level = Half::from_twice(charge * charge);
        while level <= max_level {
            if self.dim(Grade::new(level, charge)) > 0 {
                return Some(level);
            }
            level += Half::ONE;
        }
        None
    }
}

fn coords_in(v: &Vector<QBasis>, g: Grade, n: usize) -> Vec<Scalar> {
    let mut out = vec![Scalar::zero(); n];
    for (k, c) in v.iter() {
        debug_assert_eq!(k.grade, g);
        out[k.idx as usize] = c.clone();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dims_match_verma_rank() {
        for params in [
            VermaParams::new(Scalar::frac(3, 2), Scalar::frac(1, 8), Scalar::frac(-1, 4)),
            VermaParams::vacuum(Scalar::one()),
            VermaParams::new(Scalar::frac(7, 3), Scalar::frac(2, 9), Scalar::frac(1, 5)),
        ] {
            let irr = IrreducibleModule::new(params.clone());
            let verma = PbwModule::verma(params);
            for t in 0..=5 {
                let level = Half::from_twice(t);
                let qm = Grade::max_charge_at(level);
                for q in -qm..=qm {
                    let g = Grade::new(level, q);
                    assert_eq!(irr.dim(g), verma.irreducible_dim(g), "grade {g}");
                }
            }
        }
    }

    #[test]
    fn commutator_holds_on_basis() {
        let irr = IrreducibleModule::new(VermaParams::new(Scalar::frac(3, 2), Scalar::frac(1, 8), Scalar::frac(-1, 4)));
        let xs = [ModeSymbol::g(true, 1), ModeSymbol::g(false, -3), ModeSymbol::l(1), ModeSymbol::j(-1)];
        for b in irr.basis(Grade::new(Half::ONE, 0)) {
            for x in &xs {
                for y in &xs {
                    let sign = if x.is_odd() && y.is_odd() { -1 } else { 1 };
                    let lhs = irr
                        .act_vec(x, &irr.act(y, &b))
                        .sub(&irr.act_vec(y, &irr.act(x, &b)).scaled(&Scalar::from_int(sign)));
                    let br = bracket(x, y).unwrap();
                    let mut rhs = Vector::zero();
                    for (z, c) in br.iter() {
                        rhs.add_scaled(&irr.act(z, &b), c);
                    }
                    assert_eq!(lhs, rhs, "[{x}, {y}] on {b:?}");
                }
            }
        }
    }
}
