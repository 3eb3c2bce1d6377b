use std::fmt;
use std::ops::{Add, Neg, Sub};

use num::Integer;
use serde::{Deserialize, Serialize};

/// A vector in Z^2. Serialized as `[x, y]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "[i64; 2]", into = "[i64; 2]")]
pub struct LatticeVector {
    pub x: i64,
    pub y: i64,
}

impl LatticeVector {
    pub const fn new(x: i64, y: i64) -> Self {
        Self { x, y }
    }

    pub fn is_primitive(&self) -> bool {
        (self.x, self.y) != (0, 0) && self.x.gcd(&self.y) == 1
    }

    /// Strictly below the x-axis.
    pub fn in_lower_half(&self) -> bool {
        self.y < 0
    }

    pub fn scale(&self, k: i64) -> Self {
        Self::new(k * self.x, k * self.y)
    }
}

impl From<[i64; 2]> for LatticeVector {
    fn from(v: [i64; 2]) -> Self {
        Self::new(v[0], v[1])
    }
}

impl From<LatticeVector> for [i64; 2] {
    fn from(v: LatticeVector) -> Self {
        [v.x, v.y]
    }
}

impl fmt::Display for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

impl Add for LatticeVector {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for LatticeVector {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.x - o.x, self.y - o.y)
    }
}

impl Neg for LatticeVector {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.x, -self.y)
    }
}

/// Determinant of the matrix with columns `v` and `w`.
pub fn det2(v: LatticeVector, w: LatticeVector) -> i64 {
    v.x * w.y - v.y * w.x
}
