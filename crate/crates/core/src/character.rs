//! Truncated graded-dimension series `q^h z^q Σ dim(level, charge) q^level z^charge`.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::exactfield::Scalar;
use crate::half::Half;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CharacterError {
    #[error("cannot add series with different leading factors")]
    OffsetMismatch,
}

/// A character truncated at a relative level, with an overall factor
/// `q^h z^q` kept symbolic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharacterSeries {
    pub truncation: Half,
    pub h: Scalar,
    pub q: Scalar,
    coeffs: BTreeMap<(Half, i64), u64>,
}

/// One serialized coefficient: absolute weight and charge with the dimension.
#[derive(Debug, Clone, Serialize)]
pub struct CharacterEntry {
    pub level: Half,
    pub weight: Scalar,
    pub relative_charge: i64,
    pub charge: Scalar,
    pub dim: u64,
}

impl CharacterSeries {
    pub fn new(truncation: Half, h: Scalar, q: Scalar) -> Self {
        CharacterSeries { truncation, h, q, coeffs: BTreeMap::new() }
    }

    /// Records a coefficient; levels beyond the truncation are ignored.
    pub fn set(&mut self, level: Half, charge: i64, dim: u64) {
        if level > self.truncation {
            return;
        }
        if dim == 0 {
            self.coeffs.remove(&(level, charge));
        } else {
            self.coeffs.insert((level, charge), dim);
        }
    }

    pub fn get(&self, level: Half, charge: i64) -> u64 {
        self.coeffs.get(&(level, charge)).copied().unwrap_or(0)
    }

    /// Sum over charges at a fixed level.
    pub fn level_total(&self, level: Half) -> u64 {
        self.coeffs.iter().filter(|((l, _), _)| *l == level).map(|(_, d)| d).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Half, i64, u64)> + '_ {
        self.coeffs.iter().map(|(&(l, c), &d)| (l, c, d))
    }

    pub fn entries(&self) -> Vec<CharacterEntry> {
        self.iter()
            .map(|(level, rc, dim)| CharacterEntry {
                level,
                weight: &self.h + &Scalar::from_rat(level.to_rat()),
                relative_charge: rc,
                charge: &self.q + &Scalar::from_int(rc),
                dim,
            })
            .collect()
    }

    /// Sum of two series with the same leading factor.
    pub fn add(&self, other: &CharacterSeries) -> Result<CharacterSeries, CharacterError> {
        if self.h != other.h || self.q != other.q {
            return Err(CharacterError::OffsetMismatch);
        }
        let mut out = CharacterSeries::new(self.truncation.min(other.truncation), self.h.clone(), self.q.clone());
        for (l, c, d) in self.iter().chain(other.iter()) {
            if l <= out.truncation {
                let cur = out.get(l, c);
                out.set(l, c, cur + d);
            }
        }
        Ok(out)
    }

    /// Product of series; leading factors multiply.
    pub fn mul(&self, other: &CharacterSeries) -> CharacterSeries {
        let t = self.truncation.min(other.truncation);
        let mut out = CharacterSeries::new(t, &self.h + &other.h, &self.q + &other.q);
        for (l1, c1, d1) in self.iter() {
            for (l2, c2, d2) in other.iter() {
                let l = l1 + l2;
                if l <= t {
                    let cur = out.get(l, c1 + c2);
                    out.set(l, c1 + c2, cur + d1 * d2);
                }
            }
        }
        out
    }
}

impl Serialize for CharacterSeries {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("CharacterSeries", 4)?;
        st.serialize_field("truncation", &self.truncation)?;
        st.serialize_field("h", &self.h)?;
        st.serialize_field("q", &self.q)?;
        st.serialize_field("coefficients", &self.entries())?;
        st.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_convolves() {
        let mut a = CharacterSeries::new(Half::int(2), Scalar::zero(), Scalar::zero());
        a.set(Half::ZERO, 0, 1);
        a.set(Half::ONE, 0, 1);
        a.set(Half::int(2), 0, 1);
        let sq = a.mul(&a);
        assert_eq!(sq.get(Half::int(2), 0), 3);
        let sum = a.add(&a).unwrap();
        assert_eq!(sum.get(Half::ONE, 0), 2);
        let b = CharacterSeries::new(Half::ONE, Scalar::one(), Scalar::zero());
        assert!(a.add(&b).is_err());
    }
}
