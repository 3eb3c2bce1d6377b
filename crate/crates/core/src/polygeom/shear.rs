use num::{Signed, Zero};

use super::{cross, Marker, Point, PrimitiveSemitoricPolygon, RationalPolygon};
use crate::error::{Error, Result};
use crate::rational::{format_q, qi, Q};

/// `y += sum_j k_j (x - λ_j)_+`, with the boundary subdivided at every `λ_j`.
/// Fails if the image is not convex.
pub(crate) fn piecewise_shear(p: &RationalPolygon, cuts: &[(Q, i64)]) -> Result<RationalPolygon> {
    let cuts: Vec<&(Q, i64)> = cuts.iter().filter(|(_, k)| *k != 0).collect();
    if cuts.is_empty() {
        return Ok(p.clone());
    }
    let n = p.len();
    let mut pts = Vec::new();
    for i in 0..n {
        let (a, b) = (p.vertex(i), p.vertex(i + 1));
        pts.push(a.clone());
        let mut inner: Vec<Q> = cuts
            .iter()
            .map(|(l, _)| l.clone())
            .filter(|l| (&a.x < l && l < &b.x) || (&b.x < l && l < &a.x))
            .collect();
        inner.sort();
        if b.x < a.x {
            inner.reverse();
        }
        inner.dedup();
        for l in inner {
            let s = (&l - &a.x) / (&b.x - &a.x);
            pts.push(Point::new(l, &a.y + (&b.y - &a.y) * s));
        }
    }
    let mapped: Vec<Point> = pts
        .iter()
        .map(|pt| {
            let mut y = pt.y.clone();
            for (l, k) in &cuts {
                if pt.x > *l {
                    y += qi(*k) * (&pt.x - l);
                }
            }
            Point::new(pt.x.clone(), y)
        })
        .collect();
    let m = mapped.len();
    for i in 0..m {
        let (a, b, c) = (&mapped[(i + m - 1) % m], &mapped[i], &mapped[(i + 1) % m]);
        if cross(&b.sub(a), &c.sub(b)).is_negative() {
            let at: Vec<String> = cuts.iter().map(|(l, _)| format_q(l)).collect();
            return Err(Error::NonConvexShear(at.join(", ")));
        }
    }
    RationalPolygon::new(mapped)
}

/// Identity left of `x = λ` and `(T^t)^k` about `(λ, 0)` on the right.
pub fn vertical_shear(p: &RationalPolygon, lambda: &Q, k: i64) -> Result<RationalPolygon> {
    piecewise_shear(p, &[(lambda.clone(), k)])
}

/// `t^u_λ(Δ)` for `u ∈ {0,1}^{m_f}`, composed as one piecewise map.
pub fn shear_by_markers(p: &PrimitiveSemitoricPolygon, u: &[bool]) -> Result<RationalPolygon> {
    if u.len() != p.markers().len() {
        return Err(Error::Domain(format!("{} shear bits for {} markers", u.len(), p.markers().len())));
    }
    let cuts: Vec<(Q, i64)> = p.markers().iter().zip(u).map(|(m, &b)| (m.lambda.clone(), b as i64)).collect();
    piecewise_shear(p.polygon(), &cuts)
}

/// The group element `(T^t)^s` acting on a primitive polygon: `(x, y) ↦ (x, y + s x)`
/// with every twisting label increased by `s`.
pub fn twist(p: &PrimitiveSemitoricPolygon, s: i64) -> Result<PrimitiveSemitoricPolygon> {
    if s.is_zero() {
        return Ok(p.clone());
    }
    let poly = p.polygon().map_points(|pt| Point::new(pt.x.clone(), &pt.y + qi(s) * &pt.x))?;
    let markers = p.markers().iter().map(|m| Marker { k: m.k + s, ..m.clone() }).collect();
    PrimitiveSemitoricPolygon::new(poly, markers)
}

/// Polygon counterpart of the fan move `ActT { k }`: the normals change by `T^k`,
/// which is `(T^t)^{-k}` on points.
pub fn act_t_polygon(p: &PrimitiveSemitoricPolygon, k: i64) -> Result<PrimitiveSemitoricPolygon> {
    twist(p, -k)
}
