use std::fmt;
use std::ops::{Add, Sub};

use num::{Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize, Serializer};

use super::shear::{shear_by_markers, twist};
use super::{PrimitiveSemitoricPolygon, RationalPolygon};
use crate::error::{Error, Result};
use crate::rational::{format_q, q, to_f64, Q};

/// Admissible densities with respect to Lebesgue measure, depending on `x` only.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DensitySpec {
    Lebesgue,
    /// `g(x) = e^{-|x|}`.
    #[default]
    ExpAbsX,
}

impl std::str::FromStr for DensitySpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lebesgue" => Ok(DensitySpec::Lebesgue),
            "exp_abs_x" | "expabsx" => Ok(DensitySpec::ExpAbsX),
            _ => Err(Error::Parse(format!("unknown measure {s:?}"))),
        }
    }
}

/// Exact for Lebesgue measure of polygons, floating point otherwise.
#[derive(Debug, Clone, PartialEq)]
pub enum MeasureValue {
    Exact(Q),
    Approx(f64),
}

impl MeasureValue {
    pub fn zero(d: DensitySpec) -> Self {
        match d {
            DensitySpec::Lebesgue => MeasureValue::Exact(Q::zero()),
            DensitySpec::ExpAbsX => MeasureValue::Approx(0.0),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            MeasureValue::Exact(x) => to_f64(x),
            MeasureValue::Approx(x) => *x,
        }
    }

    pub fn exact(&self) -> Option<&Q> {
        match self {
            MeasureValue::Exact(x) => Some(x),
            MeasureValue::Approx(_) => None,
        }
    }

    fn scale(self, k: i64) -> Self {
        match self {
            MeasureValue::Exact(x) => MeasureValue::Exact(x * Q::from_integer(k.into())),
            MeasureValue::Approx(x) => MeasureValue::Approx(x * k as f64),
        }
    }
}

impl Add for MeasureValue {
    type Output = MeasureValue;
    fn add(self, o: MeasureValue) -> MeasureValue {
        match (self, o) {
            (MeasureValue::Exact(a), MeasureValue::Exact(b)) => MeasureValue::Exact(a + b),
            (a, b) => MeasureValue::Approx(a.to_f64() + b.to_f64()),
        }
    }
}

impl Sub for MeasureValue {
    type Output = MeasureValue;
    fn sub(self, o: MeasureValue) -> MeasureValue {
        match (self, o) {
            (MeasureValue::Exact(a), MeasureValue::Exact(b)) => MeasureValue::Exact(a - b),
            (a, b) => MeasureValue::Approx(a.to_f64() - b.to_f64()),
        }
    }
}

impl fmt::Display for MeasureValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MeasureValue::Exact(x) => write!(f, "{}", format_q(x)),
            MeasureValue::Approx(x) => write!(f, "{x}"),
        }
    }
}

impl Serialize for MeasureValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Out {
            #[serde(skip_serializing_if = "Option::is_none")]
            exact: Option<String>,
            value: f64,
        }
        Out { exact: self.exact().map(format_q), value: self.to_f64() }.serialize(s)
    }
}

/// `∫_a^b (αx + β) e^{-|x|} dx` for a slab not containing 0 in its interior.
fn exp_slab(a: f64, b: f64, alpha: f64, beta: f64) -> f64 {
    if a >= 0.0 {
        let f = |x: f64| -(-x).exp() * (alpha * x + alpha + beta);
        f(b) - f(a)
    } else {
        let f = |x: f64| x.exp() * (alpha * x - alpha + beta);
        f(b) - f(a)
    }
}

fn height(p: &RationalPolygon, x: &Q) -> Q {
    p.vertical_extent(x).map(|(lo, hi)| hi - lo).unwrap_or_else(Q::zero)
}

pub fn measure(p: &RationalPolygon, d: DensitySpec) -> MeasureValue {
    match d {
        DensitySpec::Lebesgue => MeasureValue::Exact(p.twice_area() / q(2, 1)),
        DensitySpec::ExpAbsX => {
            let mut xs: Vec<Q> = p.vertices().iter().map(|v| v.x.clone()).collect();
            let (lo, hi) = p.x_range();
            if lo.is_negative() && hi.is_positive() {
                xs.push(Q::zero());
            }
            xs.sort();
            xs.dedup();
            let mut total = 0.0;
            for w in xs.windows(2) {
                let (a, b) = (&w[0], &w[1]);
                let (ha, hb) = (height(p, a), height(p, b));
                let alpha = (&hb - &ha) / (b - a);
                let beta = &ha - &alpha * a;
                total += exp_slab(to_f64(a), to_f64(b), to_f64(&alpha), to_f64(&beta));
            }
            MeasureValue::Approx(total)
        }
    }
}

/// `ν(p) + ν(q) - 2ν(p ∩ q)`.
pub fn symmetric_difference_measure(p: &RationalPolygon, q: &RationalPolygon, d: DensitySpec) -> MeasureValue {
    let both = match p.intersect(q) {
        Some(i) => measure(&i, d),
        None => MeasureValue::zero(d),
    };
    measure(p, d) + measure(q, d) - both.scale(2)
}

/// Sum over `u ∈ {0,1}^{m_f}` of `ν(t^u_λ(Δ) ∗ t^u_λ'(Δ'))`.
///
/// If the twisting indices differ by a constant, the polygon with the larger labels
/// is first moved to the representative of its orbit with the labels of the other,
/// which keeps the result exactly symmetric.
pub fn family_distance(
    a: &PrimitiveSemitoricPolygon,
    b: &PrimitiveSemitoricPolygon,
    d: DensitySpec,
) -> Result<MeasureValue> {
    let m = a.complexity();
    if b.complexity() != m {
        return Err(Error::ComponentMismatch(format!("complexities {m} and {}", b.complexity())));
    }
    let (ka, kb) = (a.twisting_index(), b.twisting_index());
    let shift = ka.first().zip(kb.first()).map(|(x, y)| y - x).unwrap_or(0);
    if ka.iter().zip(&kb).any(|(x, y)| y - x != shift) {
        return Err(Error::ComponentMismatch(format!("twisting indices {ka:?} and {kb:?}")));
    }
    let (a, b) = if shift >= 0 { (a.clone(), twist(b, -shift)?) } else { (twist(a, shift)?, b.clone()) };
    if m >= 63 {
        return Err(Error::Domain(format!("2^{m} shear terms")));
    }
    let terms: Vec<Result<MeasureValue>> = (0..1u64 << m)
        .into_par_iter()
        .map(|bits| {
            let u: Vec<bool> = (0..m).map(|j| bits >> j & 1 == 1).collect();
            let pa = shear_by_markers(&a, &u)?;
            let pb = shear_by_markers(&b, &u)?;
            Ok(symmetric_difference_measure(&pa, &pb, d))
        })
        .collect();
    terms.into_iter().try_fold(MeasureValue::zero(d), |acc, t| Ok(acc + t?))
}
