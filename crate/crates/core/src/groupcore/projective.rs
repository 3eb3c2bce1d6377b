use std::fmt;

use num::Zero;

use super::matrix::UniModMatrix;
use crate::rational::{format_q, qi, Q};

/// A point of the rational projective line.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ProjectivePoint {
    Finite(Q),
    Infinity,
}

impl ProjectivePoint {
    pub fn int(n: i64) -> Self {
        Self::Finite(qi(n))
    }
}

impl fmt::Display for ProjectivePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Finite(x) => write!(f, "{}", format_q(x)),
            Self::Infinity => write!(f, "inf"),
        }
    }
}

/// Moebius action `x -> (ax + b) / (cx + d)`, with `oo -> a/c` and division by zero giving `oo`.
pub fn psl2_act(m: &UniModMatrix, p: &ProjectivePoint) -> ProjectivePoint {
    let (a, b, c, d) = m.entries();
    match p {
        ProjectivePoint::Infinity => {
            if c == 0 {
                ProjectivePoint::Infinity
            } else {
                ProjectivePoint::Finite(Q::new(a.into(), c.into()))
            }
        }
        ProjectivePoint::Finite(x) => {
            let den = qi(c) * x + qi(d);
            if den.is_zero() {
                ProjectivePoint::Infinity
            } else {
                ProjectivePoint::Finite((qi(a) * x + qi(b)) / den)
            }
        }
    }
}
