//! Dense exact linear algebra over [`Scalar`].

use std::collections::BTreeMap;

use crate::exactfield::{FieldError, Scalar, Sign};
use crate::lincomb::Vector;

/// A dense row-major matrix.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Matrix {
        Matrix { rows, cols, data: vec![Scalar::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Matrix {
        let mut m = Matrix::zeros(n, n);
        for k in 0..n {
            m.set(k, k, Scalar::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Matrix {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols && (0..self.rows).all(|r| (0..r).all(|c| self.get(r, c) == self.get(c, r)))
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.get(k, c);
                    if b.is_zero() {
                        continue;
                    }
                    let v = out.get(r, c) + &(a * b);
                    out.set(r, c, v);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(self.cols, v.len(), "dimension mismatch");
        (0..self.rows)
            .map(|r| {
                let mut acc = Scalar::zero();
                for (a, b) in self.row(r).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc += &(a * b);
                    }
                }
                acc
            })
            .collect()
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Matrix {
        Matrix::from_rows(rows.iter().map(|&r| cols.iter().map(|&c| self.get(r, c).clone()).collect()).collect())
    }

    /// Reduced row echelon form and the pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&r| !m.get(r, col).is_zero()) else {
                continue;
            };
            m.swap_rows(row, p);
            let inv = m.get(row, col).inverse().expect("nonzero pivot");
            for c in col..m.cols {
                let v = m.get(row, c) * &inv;
                m.set(row, c, v);
            }
            for r in 0..m.rows {
                if r == row {
                    continue;
                }
                let f = m.get(r, col).clone();
                if f.is_zero() {
                    continue;
                }
                for c in col..m.cols {
                    let sub = m.get(row, c);
                    if sub.is_zero() {
                        continue;
                    }
                    let v = m.get(r, c) - &(&f * sub);
                    m.set(r, c, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// A basis of `{v : self · v = 0}`.
    pub fn kernel(&self) -> Vec<Vec<Scalar>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Scalar::zero(); self.cols];
                v[f] = Scalar::one();
                for (i, &p) in pivots.iter().enumerate() {
                    v[p] = -r.get(i, f);
                }
                v
            })
            .collect()
    }

    /// Indices of a maximal set of linearly independent columns, chosen
    /// greedily from the left.
    pub fn independent_columns(&self) -> Vec<usize> {
        self.rref().1
    }

    pub fn inverse(&self) -> Result<Matrix, FieldError> {
        assert_eq!(self.rows, self.cols, "inverse of a non-square matrix");
        let n = self.rows;
        let mut aug = Matrix::zeros(n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug.set(r, c, self.get(r, c).clone());
            }
            aug.set(r, n + r, Scalar::one());
        }
        let (red, pivots) = aug.rref();
        if n > 0 && (pivots.len() < n || pivots[n - 1] >= n) {
            return Err(FieldError::DivisionByZero);
        }
        let mut inv = Matrix::zeros(n, n);
        for r in 0..n {
            for c in 0..n {
                inv.set(r, c, red.get(r, n + c).clone());
            }
        }
        Ok(inv)
    }

    pub fn determinant(&self) -> Scalar {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let mut m = self.clone();
        let n = self.rows;
        let mut det = Scalar::one();
        for col in 0..n {
            let Some(p) = (col..n).find(|&r| !m.get(r, col).is_zero()) else {
                return Scalar::zero();
            };
            if p != col {
                m.swap_rows(p, col);
                det = -det;
            }
            let piv = m.get(col, col).clone();
            det = &det * &piv;
            let inv = piv.inverse().expect("nonzero pivot");
            for r in col + 1..n {
                let f = m.get(r, col) * &inv;
                if f.is_zero() {
                    continue;
                }
                for c in col..n {
                    let v = m.get(r, c) - &(&f * m.get(col, c));
                    m.set(r, c, v);
                }
            }
        }
        det
    }

    pub fn leading_principal_minors(&self) -> Vec<Scalar> {
        (1..=self.rows)
            .map(|k| {
                let idx: Vec<usize> = (0..k).collect();
                self.submatrix(&idx, &idx).determinant()
            })
            .collect()
    }

    /// Inertia `(positive, negative, zero)` of a real symmetric matrix,
    /// computed by exact symmetric elimination.
    pub fn inertia(&self) -> Result<(usize, usize, usize), FieldError> {
        assert!(self.is_symmetric(), "inertia of a non-symmetric matrix");
        let mut m = self.clone();
        let mut active: Vec<usize> = (0..m.rows).collect();
        let (mut pos, mut neg) = (0, 0);
        while !active.is_empty() {
            // Prefer a nonzero diagonal pivot.
            if let Some(&p) = active.iter().find(|&&k| !m.get(k, k).is_zero()) {
                let d = m.get(p, p).clone();
                match d.real_sign()? {
                    Sign::Positive => pos += 1,
                    Sign::Negative => neg += 1,
                    Sign::Zero => unreachable!(),
                }
                let inv = d.inverse()?;
                active.retain(|&k| k != p);
                for &r in &active {
                    let f = m.get(r, p) * &inv;
                    if f.is_zero() {
                        continue;
                    }
                    for &c in &active {
                        let v = m.get(r, c) - &(&f * m.get(p, c));
                        m.set(r, c, v);
                    }
                }
                continue;
            }
            // All diagonal entries vanish: a nonzero off-diagonal entry gives a
            // hyperbolic pair contributing one positive and one negative square.
            let pair = active.iter().enumerate().find_map(|(i, &a)| {
                active[i + 1..].iter().find(|&&b| !m.get(a, b).is_zero()).map(|&b| (a, b))
            });
            let Some((a, b)) = pair else {
                break;
            };
            // Replace row/col a by a + b, giving diagonal 2·m[a][b] != 0.
            for c in 0..m.cols {
                let v = m.get(a, c) + m.get(b, c);
                m.set(a, c, v);
            }
            for r in 0..m.rows {
                let v = m.get(r, a) + m.get(r, b);
                m.set(r, a, v);
            }
        }
        let zero = self.rows - pos - neg;
        Ok((pos, neg, zero))
    }

    /// Positive semidefiniteness of a real symmetric matrix.
    pub fn is_positive_semidefinite(&self) -> Result<bool, FieldError> {
        Ok(self.inertia()?.1 == 0)
    }
}

/// An incrementally built basis of a subspace of a space with ordered
/// basis keys, kept in echelon form with unit pivots.
#[derive(Clone, Debug)]
pub struct SpanBasis<K: Ord + Clone> {
    rows: BTreeMap<K, Vector<K>>,
}

impl<K: Ord + Clone> Default for SpanBasis<K> {
    fn default() -> Self {
        SpanBasis { rows: BTreeMap::new() }
    }
}

impl<K: Ord + Clone> SpanBasis<K> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` against the basis.
    pub fn reduce(&self, v: &Vector<K>) -> Vector<K> {
        let mut v = v.clone();
        let mut cursor: Option<K> = None;
        loop {
            let next = v
                .keys()
                .filter(|k| cursor.as_ref().is_none_or(|c| *k > c))
                .find(|k| self.rows.contains_key(*k))
                .cloned();
            let Some(k) = next else {
                return v;
            };
            let c = v.coeff(&k);
            v.add_scaled(&self.rows[&k], &(-c));
            cursor = Some(k);
        }
    }

    pub fn contains(&self, v: &Vector<K>) -> bool {
        self.reduce(v).is_zero()
    }

    /// Adds `v` to the span; returns whether the dimension grew.
    pub fn insert(&mut self, v: &Vector<K>) -> bool {
        let r = self.reduce(v);
        let Some((k, c)) = r.iter().next().map(|(k, c)| (k.clone(), c.clone())) else {
            return false;
        };
        let r = r.scaled(&c.inverse().expect("nonzero leading coefficient"));
        self.rows.insert(k, r);
        true
    }

    pub fn vectors(&self) -> impl Iterator<Item = &Vector<K>> {
        self.rows.values()
    }
}
