//! The contravariant form on PBW modules: Gram matrices, radicals,
//! irreducible grade dimensions and characters.
//!
//! The form satisfies `<1,1> = 1` and `<x u, v> = <u, ω(x) v>` for the linear
//! anti-involution `ω(L_n) = L_{-n}`, `ω(J_n) = J_{-n}`, `ω(G±_r) = G∓_{-r}`.
//! Gram matrices are built recursively by peeling the leftmost factor of the
//! left argument.

use std::collections::HashMap;
use std::sync::Arc;

use serde::Serialize;

use crate::character::CharacterSeries;
use crate::exactfield::Scalar;
use crate::half::Half;
use crate::linalg::Matrix;
use crate::lincomb::Vector;
use crate::pbw::{Grade, Monomial, PbwModule, StateVector};
use crate::superalg::{Algebra, ModeSymbol};

/// The Gram matrix of the contravariant form on one grade.
#[derive(Debug, Clone)]
pub struct GramMatrix {
    pub grade: Grade,
    pub basis: Vec<Monomial>,
    pub entries: Matrix,
    index: HashMap<Monomial, usize>,
}

impl GramMatrix {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn position(&self, m: &Monomial) -> Option<usize> {
        self.index.get(m).copied()
    }

    /// Coordinates of a combination of basis monomials.
    pub fn coordinates(&self, v: &Vector<Monomial>) -> Vec<Scalar> {
        let mut out = vec![Scalar::zero(); self.dim()];
        for (m, c) in v.iter() {
            let k = self.position(m).unwrap_or_else(|| panic!("{m} not in basis of {}", self.grade));
            out[k] = c.clone();
        }
        out
    }

    /// `<u, v>` for `u` a basis monomial and `v` any vector of this grade.
    pub fn pair_basis(&self, u: usize, v: &Vector<Monomial>) -> Scalar {
        let mut acc = Scalar::zero();
        for (m, c) in v.iter() {
            let k = self.position(m).expect("monomial in basis");
            let e = self.entries.get(u, k);
            if !e.is_zero() {
                acc += &(e * c);
            }
        }
        acc
    }

    /// `<u, v>` for vectors of this grade.
    pub fn pair(&self, u: &Vector<Monomial>, v: &Vector<Monomial>) -> Scalar {
        let mut acc = Scalar::zero();
        for (m, c) in u.iter() {
            let k = self.position(m).expect("monomial in basis");
            let p = self.pair_basis(k, v);
            if !p.is_zero() {
                acc += &(&p * c);
            }
        }
        acc
    }

    pub fn rank(&self) -> usize {
        self.entries.rank()
    }
}

impl Serialize for GramMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("GramMatrix", 3)?;
        st.serialize_field("grade", &self.grade)?;
        st.serialize_field("basis", &self.basis)?;
        st.serialize_field("entries", &self.entries.to_rows())?;
        st.end()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FormError {
    #[error("radical vector at {grade} is not mapped into the radical by {mode}")]
    NotSingular { grade: Grade, mode: String },
}

impl PbwModule {
    /// The Gram matrix at a grade (memoized).
    pub fn gram(&self, grade: Grade) -> Arc<GramMatrix> {
        if let Some(g) = self.grams.lock().expect("gram lock").get(&grade) {
            return g.clone();
        }
        let g = Arc::new(self.compute_gram(grade));
        self.grams.lock().expect("gram lock").insert(grade, g.clone());
        g
    }

    fn compute_gram(&self, grade: Grade) -> GramMatrix {
        let basis = self.enumerate_basis(grade);
        let index: HashMap<Monomial, usize> = basis.iter().cloned().enumerate().map(|(k, m)| (m, k)).collect();
        let n = basis.len();
        let mut entries = Matrix::zeros(n, n);
        if grade == Grade::ZERO {
            if n == 1 {
                entries.set(0, 0, Scalar::one());
            }
            return GramMatrix { grade, basis, entries, index };
        }
        for (a, u) in basis.iter().enumerate() {
            let (y, rest) = u.modes().split_first().expect("nonempty monomial above grade zero");
            let rest = Monomial::from_sorted(rest.to_vec());
            let lower = self.gram(grade.unshifted(y));
            let ua = lower.position(&rest).expect("tail in lower basis");
            let wy = y.omega();
            for (b, v) in basis.iter().enumerate() {
                let w = self.apply_to_monomial(&wy, v);
                entries.set(a, b, lower.pair_basis(ua, &w));
            }
        }
        GramMatrix { grade, basis, entries, index }
    }

    /// Basis of the radical of the form at a grade, as state vectors.
    ///
    /// Each vector is checked to be sent into the radical of the lower grade
    /// by every positive generator of index at most the level, so it is null
    /// in the irreducible quotient together with its whole orbit.
    pub fn singular_vectors(&self, grade: Grade) -> Result<Vec<StateVector>, FormError> {
        let g = self.gram(grade);
        let kernel = g.entries.kernel();
        let vecs: Vec<StateVector> = kernel
            .into_iter()
            .map(|coords| {
                let terms = g.basis.iter().cloned().zip(coords).collect();
                self.state(grade, terms)
            })
            .collect();
        for v in &vecs {
            for x in positive_generators(grade.level) {
                let target = grade.shifted(&x);
                if target.level < Half::ZERO {
                    continue;
                }
                let w = self.apply_vec(&x, &v.terms);
                if w.is_zero() {
                    continue;
                }
                let lower = self.gram(target);
                let coords = lower.coordinates(&w);
                if lower.entries.mul_vec(&coords).iter().any(|s| !s.is_zero()) {
                    return Err(FormError::NotSingular { grade, mode: x.to_string() });
                }
            }
        }
        Ok(vecs)
    }

    /// Vectors of a grade annihilated exactly (not just modulo the radical)
    /// by every positive generator: the genuine singular vectors.
    pub fn strict_singular_vectors(&self, grade: Grade) -> Vec<StateVector> {
        let basis = self.enumerate_basis(grade);
        let mut rows: Vec<Vec<Scalar>> = Vec::new();
        for x in positive_generators(grade.level) {
            let target = grade.shifted(&x);
            if target.level < Half::ZERO {
                continue;
            }
            let tb = self.enumerate_basis(target);
            let idx: HashMap<&Monomial, usize> = tb.iter().enumerate().map(|(k, m)| (m, k)).collect();
            let mut block = vec![vec![Scalar::zero(); basis.len()]; tb.len()];
            for (col, m) in basis.iter().enumerate() {
                for (t, c) in self.apply_to_monomial(&x, m).iter() {
                    block[idx[t]][col] = c.clone();
                }
            }
            rows.extend(block);
        }
        if rows.is_empty() {
            rows.push(vec![Scalar::zero(); basis.len()]);
        }
        Matrix::from_rows(rows)
            .kernel()
            .into_iter()
            .map(|coords| self.state(grade, basis.iter().cloned().zip(coords).collect()))
            .collect()
    }

    /// Dimension of the grade in the irreducible quotient.
    pub fn irreducible_dim(&self, grade: Grade) -> usize {
        self.gram(grade).rank()
    }

    /// Dimension of the grade in the module itself.
    pub fn module_dim(&self, grade: Grade) -> usize {
        self.enumerate_basis(grade).len()
    }

    /// Character of the irreducible quotient up to a relative level.
    pub fn character(&self, cutoff: Half) -> CharacterSeries {
        self.series(cutoff, |g| self.irreducible_dim(g))
    }

    /// Character of the module itself (no quotient) up to a relative level.
    pub fn module_character(&self, cutoff: Half) -> CharacterSeries {
        self.series(cutoff, |g| self.module_dim(g))
    }

    fn series(&self, cutoff: Half, dim: impl Fn(Grade) -> usize) -> CharacterSeries {
        let p = self.params();
        let mut out = CharacterSeries::new(cutoff, p.h.clone(), p.q.clone());
        let mut level = Half::ZERO;
        while level <= cutoff {
            let qmax = Grade::max_charge_at(level);
            for charge in -qmax..=qmax {
                out.set(level, charge, dim(Grade::new(level, charge)) as u64);
            }
            level += Half::HALF;
        }
        out
    }
}

/// Positive ns2 generators with index at most `bound`.
pub fn positive_generators(bound: Half) -> Vec<ModeSymbol> {
    crate::superalg::generators(Algebra::Ns2, bound).into_iter().filter(|x| x.index > Half::ZERO).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pbw::VermaParams;

    #[test]
    fn level_half_entries() {
        let p = VermaParams::new(Scalar::frac(3, 2), Scalar::frac(1, 7), Scalar::frac(2, 5));
        let m = PbwModule::verma(p.clone());
        let g = m.gram(Grade::new(Half::HALF, 1));
        assert_eq!(g.entries.get(0, 0), &(&(&p.h * &Scalar::from_int(2)) - &p.q));
        let g = m.gram(Grade::new(Half::ONE, 0));
        let j = g.position(&Monomial::from_sorted(vec![ModeSymbol::j(-1)])).unwrap();
        assert_eq!(g.entries.get(j, j), &(&p.c * &Scalar::frac(1, 3)));
        assert!(g.entries.is_symmetric());
    }

    #[test]
    fn vacuum_radical_at_level_half() {
        let m = PbwModule::verma(VermaParams::vacuum(Scalar::frac(3, 2)));
        for q in [1, -1] {
            let sv = m.singular_vectors(Grade::new(Half::HALF, q)).unwrap();
            assert_eq!(sv.len(), 1);
            assert_eq!(m.strict_singular_vectors(Grade::new(Half::HALF, q)).len(), 1);
        }
        assert_eq!(m.irreducible_dim(Grade::new(Half::HALF, 1)), 0);
    }
}
