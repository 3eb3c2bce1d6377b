//! Ingredient lists of simple semitoric systems (a primitive polygon, heights and
//! truncated Taylor series per focus-focus point), the metric between them and
//! explicit paths inside one component.

mod path;

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polygeom::{family_distance, DensitySpec, PrimitiveSemitoricPolygon};
use crate::rational::{to_f64, Q};

pub use path::connectivity_path;

/// Coefficients `σ_{i,j}`, `i + j <= degree`, of a Taylor series in two variables,
/// with `σ_{0,0} = 0` and `σ_{0,1} ∈ [0, 2π)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TruncatedSeries {
    degree: usize,
    /// Row `i` holds `σ_{i,0}, ..., σ_{i,degree-i}`.
    coefficients: Vec<Vec<f64>>,
}

impl<'de> Deserialize<'de> for TruncatedSeries {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            degree: usize,
            coefficients: Vec<Vec<f64>>,
        }
        let raw = Raw::deserialize(d)?;
        TruncatedSeries::new(raw.degree, raw.coefficients).map_err(serde::de::Error::custom)
    }
}

impl TruncatedSeries {
    pub const DEFAULT_DEGREE: usize = 6;

    pub fn new(degree: usize, coefficients: Vec<Vec<f64>>) -> Result<Self> {
        if degree == 0 {
            return Err(Error::Domain("series degree must be at least 1".into()));
        }
        if coefficients.len() != degree + 1 {
            return Err(Error::Domain(format!("{} coefficient rows for degree {degree}", coefficients.len())));
        }
        for (i, row) in coefficients.iter().enumerate() {
            if row.len() != degree + 1 - i {
                return Err(Error::Domain(format!("row {i} has {} entries, expected {}", row.len(), degree + 1 - i)));
            }
            if row.iter().any(|x| !x.is_finite()) {
                return Err(Error::Domain(format!("row {i} has a non-finite coefficient")));
            }
        }
        if coefficients[0][0] != 0.0 {
            return Err(Error::Domain("sigma_00 must vanish".into()));
        }
        let s01 = coefficients[0][1];
        if !(0.0..TAU).contains(&s01) {
            return Err(Error::Domain(format!("sigma_01 = {s01} is outside [0, 2pi)")));
        }
        Ok(Self { degree, coefficients })
    }

    pub fn zero(degree: usize) -> Self {
        let coefficients = (0..=degree).map(|i| vec![0.0; degree + 1 - i]).collect();
        Self::new(degree, coefficients).expect("zero series is valid")
    }

    /// Builds the series from `f(i, j)`; `σ_{0,0}` is forced to 0 and `σ_{0,1}` reduced mod 2π.
    pub fn from_fn(degree: usize, mut f: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        let mut coefficients = Vec::with_capacity(degree + 1);
        for i in 0..=degree {
            let row = (0..=degree - i)
                .map(|j| match (i, j) {
                    (0, 0) => 0.0,
                    (0, 1) => wrap_angle(f(0, 1)),
                    _ => f(i, j),
                })
                .collect();
            coefficients.push(row);
        }
        Self::new(degree, coefficients)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.coefficients[i][j]
    }

    pub fn coefficients(&self) -> &[Vec<f64>] {
        &self.coefficients
    }

    /// Coefficientwise linear interpolation, with `σ_{0,1}` moving along the shorter arc.
    pub fn interpolate(&self, other: &Self, t: f64) -> Result<Self> {
        check_degrees(self, other)?;
        if t == 0.0 {
            return Ok(self.clone());
        }
        if t == 1.0 {
            return Ok(other.clone());
        }
        let arc = signed_arc(self.get(0, 1), other.get(0, 1));
        Self::from_fn(self.degree, |i, j| {
            if (i, j) == (0, 1) {
                self.get(0, 1) + t * arc
            } else {
                (1.0 - t) * self.get(i, j) + t * other.get(i, j)
            }
        })
    }
}

fn wrap_angle(x: f64) -> f64 {
    let w = x.rem_euclid(TAU);
    if w >= TAU {
        0.0
    } else {
        w
    }
}

/// `b - a` reduced to `(-π, π]`.
fn signed_arc(a: f64, b: f64) -> f64 {
    let d = (b - a).rem_euclid(TAU);
    if d > std::f64::consts::PI {
        d - TAU
    } else {
        d
    }
}

fn check_degrees(s: &TruncatedSeries, t: &TruncatedSeries) -> Result<()> {
    if s.degree != t.degree {
        return Err(Error::Domain(format!("series degrees {} and {} differ", s.degree, t.degree)));
    }
    Ok(())
}

/// Caps `b_n > 0` of the series metric, one per total degree.
#[derive(Debug, Clone, PartialEq)]
pub struct CapSequence {
    b: Vec<f64>,
    /// Ratio used to extend the caps past the stored range when bounding the tail.
    ratio: Option<f64>,
}

impl CapSequence {
    /// `b_n = 2^{-n}` for `n <= degree`.
    pub fn geometric(degree: usize) -> Self {
        Self { b: (0..=degree).map(|n| 0.5f64.powi(n as i32)).collect(), ratio: Some(0.5) }
    }

    pub fn new(b: Vec<f64>) -> Result<Self> {
        if b.is_empty() || b.iter().any(|x| !(x.is_finite() && *x > 0.0)) {
            return Err(Error::Domain("caps must be positive and finite".into()));
        }
        Ok(Self { b, ratio: None })
    }

    pub fn get(&self, n: usize) -> f64 {
        self.b[n]
    }

    pub fn degree(&self) -> usize {
        self.b.len() - 1
    }

    /// `Σ_{n>N} (n+1) b_n`, the most the coefficients beyond the stored degree
    /// can add to a series distance; `None` when the caps are not geometric.
    pub fn tail_bound(&self) -> Option<f64> {
        let r = self.ratio?;
        let n = self.degree() as f64;
        let bn = self.b[self.degree()];
        Some(bn * ((n + 1.0) * r / (1.0 - r) + r / ((1.0 - r) * (1.0 - r))))
    }
}

impl Default for CapSequence {
    fn default() -> Self {
        Self::geometric(TruncatedSeries::DEFAULT_DEGREE)
    }
}

/// Capped coefficient distance; the `σ_{0,1}` term is measured on the circle.
pub fn series_distance(s: &TruncatedSeries, t: &TruncatedSeries, b: &CapSequence) -> Result<f64> {
    check_degrees(s, t)?;
    if b.degree() < s.degree {
        return Err(Error::Domain(format!("{} caps for degree {}", b.degree() + 1, s.degree)));
    }
    let mut total = 0.0;
    for i in 0..=s.degree {
        for j in 0..=s.degree - i {
            let diff = (s.get(i, j) - t.get(i, j)).abs();
            total += if (i, j) == (0, 1) {
                diff.min(TAU - diff).min(b.get(1))
            } else {
                diff.min(b.get(i + j))
            };
        }
    }
    Ok(total)
}

/// A polygon representative with a height and a Taylor series for each marker.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IngredientList {
    m_f: usize,
    polygon: PrimitiveSemitoricPolygon,
    h: Vec<f64>,
    series: Vec<TruncatedSeries>,
}

impl<'de> Deserialize<'de> for IngredientList {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            m_f: usize,
            polygon: PrimitiveSemitoricPolygon,
            h: Vec<f64>,
            series: Vec<TruncatedSeries>,
        }
        let raw = Raw::deserialize(d)?;
        if raw.m_f != raw.polygon.complexity() {
            return Err(serde::de::Error::custom(format!(
                "m_f = {} but the polygon has {} markers",
                raw.m_f,
                raw.polygon.complexity()
            )));
        }
        IngredientList::new(raw.polygon, raw.h, raw.series).map_err(serde::de::Error::custom)
    }
}

/// Length of the vertical segment `Δ ∩ {x = λ_j}` for each marker.
pub fn marker_lengths(p: &PrimitiveSemitoricPolygon) -> Vec<Q> {
    p.markers()
        .iter()
        .map(|m| {
            let (lo, hi) = p.polygon().vertical_extent(&m.lambda).expect("markers are inside the x-range");
            hi - lo
        })
        .collect()
}

impl IngredientList {
    pub fn new(polygon: PrimitiveSemitoricPolygon, h: Vec<f64>, series: Vec<TruncatedSeries>) -> Result<Self> {
        let m_f = polygon.complexity();
        if h.len() != m_f || series.len() != m_f {
            return Err(Error::Domain(format!(
                "{m_f} markers but {} heights and {} series",
                h.len(),
                series.len()
            )));
        }
        for (j, (hj, len)) in h.iter().zip(marker_lengths(&polygon)).enumerate() {
            let len = to_f64(&len);
            if !(*hj > 0.0 && *hj < len) {
                return Err(Error::Domain(format!("h_{j} = {hj} is not in (0, {len})")));
            }
        }
        if let Some(s) = series.iter().find(|s| s.degree != series[0].degree) {
            return Err(Error::Domain(format!("series degrees {} and {} differ", series[0].degree, s.degree)));
        }
        Ok(Self { m_f, polygon, h, series })
    }

    pub fn m_f(&self) -> usize {
        self.m_f
    }

    pub fn polygon(&self) -> &PrimitiveSemitoricPolygon {
        &self.polygon
    }

    pub fn h(&self) -> &[f64] {
        &self.h
    }

    pub fn series(&self) -> &[TruncatedSeries] {
        &self.series
    }
}

/// `d_P + Σ_j (series distance + |h_j - h'_j|)` inside one component.
pub fn ingredient_distance(m: &IngredientList, n: &IngredientList, d: DensitySpec, b: &CapSequence) -> Result<f64> {
    if m.m_f != n.m_f {
        return Err(Error::ComponentMismatch(format!("m_f = {} and {}", m.m_f, n.m_f)));
    }
    let mut total = family_distance(&m.polygon, &n.polygon, d)?.to_f64();
    for j in 0..m.m_f {
        total += series_distance(&m.series[j], &n.series[j], b)? + (m.h[j] - n.h[j]).abs();
    }
    Ok(total)
}

/// Height at time `t` keeping the same fraction of the vertical segment, with the
/// fraction moving linearly from `h/len` to `h'/len'`.
pub fn h_interpolate(h: f64, len: f64, h2: f64, len2: f64, len_t: f64, t: f64) -> Result<f64> {
    if !(0.0 < h && h < len && 0.0 < h2 && h2 < len2 && len_t > 0.0 && (0.0..=1.0).contains(&t)) {
        return Err(Error::Domain(format!("h_interpolate({h}, {len}, {h2}, {len2}, {len_t}, {t})")));
    }
    if t == 0.0 {
        return Ok(h);
    }
    if t == 1.0 {
        return Ok(h2);
    }
    Ok(((1.0 - t) * h / len + t * h2 / len2) * len_t)
}
