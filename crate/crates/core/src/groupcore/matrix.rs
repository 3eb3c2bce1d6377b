use std::fmt;

use super::lattice::LatticeVector;
use crate::error::{Error, Result};

/// An element of SL2(Z), stored row-major as `[[a, b], [c, d]]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct UniModMatrix {
    a: i64,
    b: i64,
    c: i64,
    d: i64,
}

impl UniModMatrix {
    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        let det = a * d - b * c;
        if det != 1 {
            return Err(Error::NotUnimodular { a, b, c, d, det });
        }
        Ok(Self { a, b, c, d })
    }

    pub const IDENTITY: Self = Self { a: 1, b: 0, c: 0, d: 1 };
    pub const MINUS_IDENTITY: Self = Self { a: -1, b: 0, c: 0, d: -1 };
    pub const S: Self = Self { a: 0, b: -1, c: 1, d: 0 };
    pub const T: Self = Self { a: 1, b: 1, c: 0, d: 1 };

    pub fn entries(&self) -> (i64, i64, i64, i64) {
        (self.a, self.b, self.c, self.d)
    }

    pub fn t_pow(k: i64) -> Self {
        Self { a: 1, b: k, c: 0, d: 1 }
    }

    pub fn s_pow(k: i64) -> Self {
        match k.rem_euclid(4) {
            0 => Self::IDENTITY,
            1 => Self::S,
            2 => Self::MINUS_IDENTITY,
            _ => Self { a: 0, b: 1, c: -1, d: 0 },
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self {
            a: self.a * o.a + self.b * o.c,
            b: self.a * o.b + self.b * o.d,
            c: self.c * o.a + self.d * o.c,
            d: self.c * o.b + self.d * o.d,
        }
    }

    pub fn inverse(&self) -> Self {
        Self { a: self.d, b: -self.b, c: -self.c, d: self.a }
    }

    pub fn apply(&self, v: LatticeVector) -> LatticeVector {
        LatticeVector::new(self.a * v.x + self.b * v.y, self.c * v.x + self.d * v.y)
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::IDENTITY
    }

    pub fn is_plus_minus_identity(&self) -> bool {
        *self == Self::IDENTITY || *self == Self::MINUS_IDENTITY
    }

    /// The matrix whose columns are `v` and `w`, if it is unimodular.
    pub fn from_columns(v: LatticeVector, w: LatticeVector) -> Result<Self> {
        Self::new(v.x, w.x, v.y, w.y)
    }
}

impl fmt::Display for UniModMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_unimodular() {
        assert!(UniModMatrix::new(2, 0, 0, 1).is_err());
        assert!(UniModMatrix::new(2, 1, 1, 1).is_ok());
    }

    #[test]
    fn s_has_order_four() {
        let s = UniModMatrix::S;
        let s2 = s.mul(&s);
        assert_eq!(s2, UniModMatrix::MINUS_IDENTITY);
        assert!(s2.mul(&s2).is_identity());
        for k in -8i64..8 {
            let mut m = UniModMatrix::IDENTITY;
            for _ in 0..k.rem_euclid(4) {
                m = m.mul(&s);
            }
            assert_eq!(UniModMatrix::s_pow(k), m);
        }
    }

    #[test]
    fn inverse_roundtrip() {
        let m = UniModMatrix::new(5, 2, 7, 3).unwrap();
        assert!(m.mul(&m.inverse()).is_identity());
    }
}
