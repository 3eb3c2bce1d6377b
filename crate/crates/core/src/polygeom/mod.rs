//! Exact rational convex polygons, their semitoric fans, the vertical shears
//! `t^u_λ`, weighted symmetric-difference distances and the polygon families
//! that realize each fan transformation.

mod family;
mod measure;
mod realize;
mod shear;
mod svg;

use std::cmp::Ordering;
use std::fmt;

use num::{BigInt, Integer, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groupcore::LatticeVector;
use crate::rational::{format_q, parse_q, qi, Q};
use crate::semitoric::{marked_corner_label, CornerLabel, SemitoricFan};

#[cfg(test)]
pub(crate) use family::attach_markers;
pub use family::{move_polygon_family, same_fan_interpolate, same_fan_interpolate_marked};
pub use measure::{family_distance, measure, symmetric_difference_measure, DensitySpec, MeasureValue};
pub use realize::polygon_realizing_fan;
pub use shear::{act_t_polygon, shear_by_markers, twist, vertical_shear};
pub use svg::{render_svg, Scene};

/// An exact point in Q^2, serialized as `["p/q", "r/s"]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Point {
    pub x: Q,
    pub y: Q,
}

impl Point {
    pub fn new(x: Q, y: Q) -> Self {
        Self { x, y }
    }

    pub fn int(x: i64, y: i64) -> Self {
        Self::new(qi(x), qi(y))
    }

    fn sub(&self, o: &Point) -> (Q, Q) {
        (&self.x - &o.x, &self.y - &o.y)
    }

    fn lex_cmp(&self, o: &Point) -> Ordering {
        self.x.cmp(&o.x).then_with(|| self.y.cmp(&o.y))
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", format_q(&self.x), format_q(&self.y))
    }
}

impl Serialize for Point {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [format_q(&self.x), format_q(&self.y)].serialize(s)
    }
}

impl<'de> Deserialize<'de> for Point {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Coord {
            S(String),
            I(i64),
        }
        let [x, y] = <[Coord; 2]>::deserialize(d)?;
        let conv = |c: Coord| match c {
            Coord::S(s) => parse_q(&s).map_err(serde::de::Error::custom),
            Coord::I(i) => Ok(qi(i)),
        };
        Ok(Point::new(conv(x)?, conv(y)?))
    }
}

fn cross(a: &(Q, Q), b: &(Q, Q)) -> Q {
    &a.0 * &b.1 - &a.1 * &b.0
}

fn dot_v(n: LatticeVector, p: &Point) -> Q {
    qi(n.x) * &p.x + qi(n.y) * &p.y
}

/// Primitive integer vector with the same direction as the nonzero rational `(a, b)`.
fn primitive_direction(a: &Q, b: &Q) -> LatticeVector {
    let l = a.denom().lcm(b.denom());
    let ai = (a * Q::from_integer(l.clone())).to_integer();
    let bi = (b * Q::from_integer(l)).to_integer();
    let g = ai.gcd(&bi);
    let conv = |v: BigInt| (v / &g).to_i64().expect("edge direction fits in i64");
    LatticeVector::new(conv(ai), conv(bi))
}

/// A compact convex polygon with exact rational vertices, stored counterclockwise
/// from the lexicographically smallest vertex with collinear vertices merged.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct RationalPolygon {
    vertices: Vec<Point>,
}

impl<'de> Deserialize<'de> for RationalPolygon {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            vertices: Vec<Point>,
        }
        let raw = Raw::deserialize(d)?;
        RationalPolygon::new(raw.vertices).map_err(serde::de::Error::custom)
    }
}

impl RationalPolygon {
    /// Accepts either orientation; rejects nonconvex and degenerate input.
    pub fn new(mut pts: Vec<Point>) -> Result<Self> {
        pts.dedup();
        while pts.len() > 1 && pts.first() == pts.last() {
            pts.pop();
        }
        if pts.len() < 3 {
            return Err(Error::InvalidPolygon("fewer than 3 distinct vertices".into()));
        }
        if twice_area(&pts).is_negative() {
            pts.reverse();
        }
        // merge collinear vertices, reject reflex ones
        let mut changed = true;
        while changed {
            changed = false;
            let n = pts.len();
            if n < 3 {
                return Err(Error::InvalidPolygon("all vertices are collinear".into()));
            }
            for i in 0..n {
                let a = &pts[(i + n - 1) % n];
                let b = &pts[i];
                let c = &pts[(i + 1) % n];
                let turn = cross(&b.sub(a), &c.sub(b));
                if turn.is_zero() {
                    pts.remove(i);
                    changed = true;
                    break;
                }
                if turn.is_negative() {
                    return Err(Error::InvalidPolygon(format!("reflex vertex at {b}")));
                }
            }
        }
        // all turns left; a simple polygon must keep every vertex left of every edge
        let n = pts.len();
        for i in 0..n {
            let (a, b) = (&pts[i], &pts[(i + 1) % n]);
            if pts.iter().any(|p| cross(&b.sub(a), &p.sub(a)).is_negative()) {
                return Err(Error::InvalidPolygon("vertex list winds more than once".into()));
            }
        }
        let start = (0..n).min_by(|&i, &j| pts[i].lex_cmp(&pts[j])).unwrap();
        pts.rotate_left(start);
        Ok(Self { vertices: pts })
    }

    pub fn from_ints(pts: &[(i64, i64)]) -> Result<Self> {
        Self::new(pts.iter().map(|&(x, y)| Point::int(x, y)).collect())
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertex(&self, i: usize) -> &Point {
        &self.vertices[i % self.len()]
    }

    /// Primitive inward normal of edge `k`, which runs from vertex `k` to `k+1`.
    pub fn edge_normal(&self, k: usize) -> LatticeVector {
        let (dx, dy) = self.vertex(k + 1).sub(self.vertex(k));
        primitive_direction(&-dy, &dx)
    }

    pub fn normals(&self) -> Vec<LatticeVector> {
        (0..self.len()).map(|k| self.edge_normal(k)).collect()
    }

    /// `h_k` with edge `k` on the line `<n_k, x> = h_k` and the polygon in `<n_k, x> >= h_k`.
    pub fn offsets(&self) -> Vec<Q> {
        (0..self.len()).map(|k| dot_v(self.edge_normal(k), self.vertex(k))).collect()
    }

    /// Polygon `{x : <n_k, x> >= h_k}` assuming every constraint contributes an edge
    /// in the given cyclic order.
    pub fn from_halfplanes(normals: &[LatticeVector], offsets: &[Q]) -> Result<Self> {
        let n = normals.len();
        if n != offsets.len() || n < 3 {
            return Err(Error::InvalidPolygon("need at least 3 matching normals and offsets".into()));
        }
        let pts = (0..n)
            .map(|k| line_meet(normals[(k + n - 1) % n], &offsets[(k + n - 1) % n], normals[k], &offsets[k]))
            .collect::<Result<Vec<_>>>()?;
        let p = Self::new(pts)?;
        let rot = p.normals();
        if p.len() != n || (0..n).all(|r| (0..n).any(|k| rot[(k + r) % n] != normals[k])) {
            return Err(Error::InvalidPolygon("an edge vanished".into()));
        }
        Ok(p)
    }

    pub fn twice_area(&self) -> Q {
        twice_area(&self.vertices)
    }

    pub fn x_range(&self) -> (Q, Q) {
        let xs = self.vertices.iter().map(|p| &p.x);
        (xs.clone().min().unwrap().clone(), xs.max().unwrap().clone())
    }

    /// `(min y, max y)` on the vertical line at `x`, if it meets the polygon.
    pub fn vertical_extent(&self, x: &Q) -> Option<(Q, Q)> {
        let n = self.len();
        let mut ys: Vec<Q> = Vec::new();
        for i in 0..n {
            let (a, b) = (self.vertex(i), self.vertex(i + 1));
            if &a.x == x {
                ys.push(a.y.clone());
            }
            let (lo, hi) = if a.x < b.x { (a, b) } else { (b, a) };
            if &lo.x < x && x < &hi.x {
                ys.push(&lo.y + (&hi.y - &lo.y) * (x - &lo.x) / (&hi.x - &lo.x));
            }
        }
        let lo = ys.iter().min()?.clone();
        let hi = ys.iter().max()?.clone();
        Some((lo, hi))
    }

    pub fn is_on_top(&self, p: &Point) -> bool {
        self.vertical_extent(&p.x).is_some_and(|(_, hi)| hi == p.y)
    }

    pub fn contains(&self, p: &Point) -> bool {
        let n = self.len();
        (0..n).all(|i| {
            let (a, b) = (self.vertex(i), self.vertex(i + 1));
            !cross(&b.sub(a), &p.sub(a)).is_negative()
        })
    }

    /// Clip to `{x : <n, x> >= h}` with rational `n`. `None` if the result is degenerate.
    pub fn clip(&self, n: (&Q, &Q), h: &Q) -> Option<RationalPolygon> {
        clip_points(&self.vertices, n, h).and_then(|pts| RationalPolygon::new(pts).ok())
    }

    /// Exact intersection; `None` when it has empty interior.
    pub fn intersect(&self, other: &RationalPolygon) -> Option<RationalPolygon> {
        let mut pts = self.vertices.clone();
        let m = other.len();
        for k in 0..m {
            let (a, b) = (other.vertex(k), other.vertex(k + 1));
            let (dx, dy) = b.sub(a);
            let n = (-dy, dx);
            let h = &n.0 * &a.x + &n.1 * &a.y;
            pts = clip_points(&pts, (&n.0, &n.1), &h)?;
        }
        RationalPolygon::new(pts).ok()
    }

    pub fn map_points(&self, f: impl Fn(&Point) -> Point) -> Result<RationalPolygon> {
        RationalPolygon::new(self.vertices.iter().map(f).collect())
    }
}

fn twice_area(pts: &[Point]) -> Q {
    let n = pts.len();
    let mut s = Q::zero();
    for i in 0..n {
        let (a, b) = (&pts[i], &pts[(i + 1) % n]);
        s += &a.x * &b.y - &a.y * &b.x;
    }
    s
}

fn line_meet(n1: LatticeVector, h1: &Q, n2: LatticeVector, h2: &Q) -> Result<Point> {
    let det = qi(n1.x * n2.y - n1.y * n2.x);
    if det.is_zero() {
        return Err(Error::InvalidPolygon(format!("parallel edges {n1} and {n2}")));
    }
    let x = (h1 * qi(n2.y) - h2 * qi(n1.y)) / &det;
    let y = (h2 * qi(n1.x) - h1 * qi(n2.x)) / &det;
    Ok(Point::new(x, y))
}

fn clip_points(pts: &[Point], n: (&Q, &Q), h: &Q) -> Option<Vec<Point>> {
    let val = |p: &Point| n.0 * &p.x + n.1 * &p.y - h;
    let m = pts.len();
    let mut out = Vec::with_capacity(m + 1);
    for i in 0..m {
        let (a, b) = (&pts[i], &pts[(i + 1) % m]);
        let (va, vb) = (val(a), val(b));
        if !va.is_negative() {
            out.push(a.clone());
        }
        if (va.is_negative() && vb.is_positive()) || (va.is_positive() && vb.is_negative()) {
            let s = &va / (&va - &vb);
            out.push(Point::new(&a.x + (&b.x - &a.x) * &s, &a.y + (&b.y - &a.y) * &s));
        }
    }
    (out.len() >= 3).then_some(out)
}

/// A vertical marker line `x = lambda` with sign `eps` and twisting label `k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Marker {
    #[serde(with = "crate::rational::serde_q")]
    pub lambda: Q,
    pub eps: i8,
    pub k: i64,
}

impl Marker {
    pub fn new(lambda: Q, k: i64) -> Self {
        Self { lambda, eps: 1, k }
    }
}

/// A compact polygon with marker lines whose top-boundary intersections are
/// exactly its hidden and fake corners.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct PrimitiveSemitoricPolygon {
    vertices: Vec<Point>,
    markers: Vec<Marker>,
    #[serde(skip)]
    polygon: RationalPolygon,
}

impl<'de> Deserialize<'de> for PrimitiveSemitoricPolygon {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            vertices: Vec<Point>,
            #[serde(default)]
            markers: Vec<Marker>,
        }
        let raw = Raw::deserialize(d)?;
        let polygon = RationalPolygon::new(raw.vertices).map_err(serde::de::Error::custom)?;
        PrimitiveSemitoricPolygon::new(polygon, raw.markers).map_err(serde::de::Error::custom)
    }
}

impl PrimitiveSemitoricPolygon {
    pub fn new(polygon: RationalPolygon, markers: Vec<Marker>) -> Result<Self> {
        let (lo, hi) = polygon.x_range();
        for (j, m) in markers.iter().enumerate() {
            if m.eps != 1 {
                return Err(Error::InvalidPolygon(format!("marker {j} has eps {}, expected +1", m.eps)));
            }
            if m.lambda <= lo || m.lambda >= hi {
                return Err(Error::InvalidPolygon(format!("marker {j} is not interior to the x-range")));
            }
            if j > 0 && markers[j - 1].lambda >= m.lambda {
                return Err(Error::InvalidPolygon("marker lambdas must increase".into()));
            }
        }
        fan_of(&polygon, &markers)?;
        Ok(Self { vertices: polygon.vertices.clone(), markers, polygon })
    }

    /// Polygon without markers; all its corners must be Delzant.
    pub fn toric(polygon: RationalPolygon) -> Result<Self> {
        Self::new(polygon, Vec::new())
    }

    pub fn polygon(&self) -> &RationalPolygon {
        &self.polygon
    }

    pub fn markers(&self) -> &[Marker] {
        &self.markers
    }

    pub fn complexity(&self) -> usize {
        self.markers.len()
    }

    pub fn twisting_index(&self) -> Vec<i64> {
        self.markers.iter().map(|m| m.k).collect()
    }
}

/// Associated semitoric fan, indexed so that `v_k` is the normal of edge `k`
/// and label `k` belongs to vertex `k+1`.
pub fn fan_of_polygon(p: &PrimitiveSemitoricPolygon) -> Result<SemitoricFan> {
    fan_of(&p.polygon, &p.markers)
}

fn fan_of(poly: &RationalPolygon, markers: &[Marker]) -> Result<SemitoricFan> {
    let n = poly.len();
    let normals = poly.normals();
    let mut used = vec![false; markers.len()];
    let mut labels = Vec::with_capacity(n);
    for k in 0..n {
        let vtx = poly.vertex(k + 1);
        let (u, v) = (normals[k], normals[(k + 1) % n]);
        let marked = markers.iter().position(|m| m.lambda == vtx.x);
        let label = match marked {
            Some(j) if poly.is_on_top(vtx) => {
                used[j] = true;
                marked_corner_label(u, v).ok_or_else(|| {
                    Error::InvalidPolygon(format!("marked corner at {vtx} is neither hidden nor fake"))
                })?
            }
            _ if crate::groupcore::det2(u, v) == 1 => CornerLabel::Delzant,
            _ => return Err(Error::InvalidPolygon(format!("corner at {vtx} is not Delzant"))),
        };
        labels.push(label);
    }
    if let Some(j) = used.iter().position(|u| !u) {
        return Err(Error::InvalidPolygon(format!("marker {j} does not meet the top boundary at a vertex")));
    }
    SemitoricFan::new(normals, labels)
}

/// Cyclic shift `r` with `a.rotated(r) == b`, comparing vectors only.
pub(crate) fn vector_rotation(a: &[LatticeVector], b: &[LatticeVector]) -> Option<usize> {
    let n = a.len();
    if n != b.len() {
        return None;
    }
    (0..n).find(|&r| (0..n).all(|k| a[(k + r) % n] == b[k]))
}
