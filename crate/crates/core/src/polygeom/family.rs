use num::{One, Signed, Zero};

use super::shear::act_t_polygon;
use super::{dot_v, fan_of_polygon, vector_rotation, Marker, Point, PrimitiveSemitoricPolygon, RationalPolygon};
use crate::error::{Error, Result};
use crate::groupcore::LatticeVector;
use crate::rational::{format_q, q, qi, Q};
use crate::semitoric::{apply_move, t_apply, CornerLabel, FanMove, SemitoricFan};

fn diff(a: &Point, b: &Point) -> Point {
    Point::new(&a.x - &b.x, &a.y - &b.y)
}

/// `Δ ∩ {<n, x - P> >= t τ0}` at the vertex `P` between edges `corner` and `corner+1`,
/// where `τ0` is half the smaller value of `<n, ·>` along the two adjacent edges.
fn corner_cut(poly: &RationalPolygon, corner: usize, n: LatticeVector, t: &Q) -> Result<RationalPolygon> {
    let p = poly.vertex(corner + 1);
    let along_prev = dot_v(n, &diff(poly.vertex(corner), p));
    let along_next = dot_v(n, &diff(poly.vertex(corner + 2), p));
    if !along_prev.is_positive() || !along_next.is_positive() {
        return Err(Error::Domain(format!("cut normal {n} is not inside the cone at {p}")));
    }
    let tau0 = along_prev.min(along_next) / qi(2);
    let h = dot_v(n, p) + t * tau0;
    poly.clip((&qi(n.x), &qi(n.y)), &h)
        .ok_or_else(|| Error::Domain("corner cut removed the polygon".into()))
}

/// Extends the neighbours of edge `i` until they meet; returns the enlarged polygon
/// and the new vertex.
fn drop_edge(poly: &RationalPolygon, i: usize) -> Result<(RationalPolygon, Point)> {
    let n = poly.len();
    let normals = poly.normals();
    let offsets = poly.offsets();
    let (a, b) = ((i + n - 1) % n, (i + 1) % n);
    let apex = super::line_meet(normals[a], &offsets[a], normals[b], &offsets[b])?;
    let mut pts = Vec::with_capacity(n - 1);
    for k in 0..n {
        if k == i {
            pts.push(apex.clone());
        } else if k != b {
            pts.push(poly.vertex(k).clone());
        }
    }
    let enlarged = RationalPolygon::new(pts)?;
    if enlarged.len() != n - 1 || !poly.vertices().iter().all(|v| enlarged.contains(v)) {
        return Err(Error::Domain(format!("edge {i} cannot be removed by extending its neighbours")));
    }
    Ok((enlarged, apex))
}

/// Lowers the offset of edge `i` linearly so that it shrinks to the apex at `s = 1`.
fn shrink_edge(poly: &RationalPolygon, i: usize, s: &Q) -> Result<RationalPolygon> {
    let (enlarged, apex) = drop_edge(poly, i)?;
    if s.is_one() {
        return Ok(enlarged);
    }
    let v = poly.edge_normal(i);
    let h = &poly.offsets()[i];
    let target = dot_v(v, &apex);
    let hs = h - s * (h - target);
    enlarged
        .clip((&qi(v.x), &qi(v.y)), &hs)
        .ok_or_else(|| Error::Domain("edge shrink removed the polygon".into()))
}

/// `f` without `v_{i+1}`, with the merged corner labeled hidden.
fn merged_hidden(f: &SemitoricFan, i: usize) -> Result<SemitoricFan> {
    let d = f.len();
    let drop = (i + 1) % d;
    let mut vectors = f.vectors().to_vec();
    let mut labels = f.labels().to_vec();
    labels[i] = CornerLabel::Hidden;
    vectors.remove(drop);
    labels.remove(drop);
    SemitoricFan::new(vectors, labels)
}

/// Markers at the non-Delzant corners of `expected`, carrying `labels` in order of abscissa.
pub(crate) fn attach_markers(poly: RationalPolygon, expected: &SemitoricFan, labels: &[i64]) -> Result<PrimitiveSemitoricPolygon> {
    let normals = poly.normals();
    let r = vector_rotation(&normals, expected.vectors())
        .ok_or_else(|| Error::FanMismatch(format!("polygon normals {normals:?} vs {:?}", expected.vectors())))?;
    let n = normals.len();
    let mut xs: Vec<Q> = (0..n)
        .filter(|&c| !expected.labels()[(c + n - r) % n].is_delzant())
        .map(|c| poly.vertex(c + 1).x.clone())
        .collect();
    xs.sort();
    if xs.len() != labels.len() {
        return Err(Error::FanMismatch("number of non-Delzant corners changed".into()));
    }
    let markers = xs.into_iter().zip(labels).map(|(x, &k)| Marker::new(x, k)).collect();
    let out = PrimitiveSemitoricPolygon::new(poly, markers)?;
    if !fan_of_polygon(&out)?.same_up_to_rotation(expected) {
        return Err(Error::FanMismatch("family member has an unexpected fan".into()));
    }
    Ok(out)
}

/// Member `t ∈ [0,1]` of a continuous family of primitive semitoric polygons whose
/// fan changes by `m` (indexed as in `fan_of_polygon(p)`).
///
/// `ActT` is a change of representative inside the orbit, so its family jumps at `t > 0`.
pub fn move_polygon_family(p: &PrimitiveSemitoricPolygon, m: FanMove, t: &Q) -> Result<PrimitiveSemitoricPolygon> {
    if t.is_negative() || t > &Q::one() {
        return Err(Error::Domain(format!("family parameter {} outside [0,1]", format_q(t))));
    }
    let fan = fan_of_polygon(p)?;
    let target = apply_move(&fan, m)?;
    let ks = p.twisting_index();
    if t.is_zero() {
        return Ok(p.clone());
    }
    let poly = p.polygon();
    let d = fan.len();
    let v = |k: usize| fan.vectors()[k % d];
    match m {
        FanMove::ActT { k } => act_t_polygon(p, k),
        FanMove::Chop { index: i } => attach_markers(corner_cut(poly, i, v(i) + v(i + 1), t)?, &target, &ks),
        FanMove::RemoveHidden { index: i } => attach_markers(corner_cut(poly, i, t_apply(v(i + 1)), t)?, &target, &ks),
        FanMove::Unchop { index: i } => {
            let expected = if t.is_one() { &target } else { &fan };
            attach_markers(shrink_edge(poly, i, t)?, expected, &ks)
        }
        FanMove::CommuteFakeDelzant { index: i } => {
            let half = q(1, 2);
            let j = (i + 1) % d;
            if t <= &half {
                let s = t * qi(2);
                let expected = if s.is_one() { merged_hidden(&fan, i)? } else { fan.clone() };
                attach_markers(shrink_edge(poly, j, &s)?, &expected, &ks)
            } else {
                let s = t * qi(2) - qi(1);
                let (enlarged, apex) = drop_edge(poly, j)?;
                let at = enlarged.vertices().iter().position(|w| *w == apex).expect("apex is a vertex");
                let corner = (at + enlarged.len() - 1) % enlarged.len();
                attach_markers(corner_cut(&enlarged, corner, t_apply(v(i + 2)), &s)?, &target, &ks)
            }
        }
    }
}

fn aligned_offsets(p: &RationalPolygon, q: &RationalPolygon) -> Result<Vec<Q>> {
    let r = vector_rotation(&p.normals(), &q.normals())
        .ok_or_else(|| Error::FanMismatch("polygons have different normal fans".into()))?;
    let hp = p.offsets();
    let n = hp.len();
    Ok((0..n).map(|k| hp[(k + r) % n].clone()).collect())
}

/// Linear interpolation of the supporting offsets of two polygons with the same fan.
pub fn same_fan_interpolate(p: &RationalPolygon, q: &RationalPolygon, t: &Q) -> Result<RationalPolygon> {
    let hp = aligned_offsets(p, q)?;
    if t.is_zero() {
        return Ok(p.clone());
    }
    if t.is_one() {
        return Ok(q.clone());
    }
    let hq = q.offsets();
    let s = Q::one() - t;
    let h: Vec<Q> = hp.iter().zip(&hq).map(|(a, b)| &s * a + t * b).collect();
    let out = RationalPolygon::from_halfplanes(&q.normals(), &h)?;
    debug_assert!(vector_rotation(&out.normals(), &q.normals()).is_some());
    Ok(out)
}

/// [`same_fan_interpolate`] for primitive polygons; each marker follows its corner,
/// whose abscissa interpolates linearly.
pub fn same_fan_interpolate_marked(
    a: &PrimitiveSemitoricPolygon,
    b: &PrimitiveSemitoricPolygon,
    t: &Q,
) -> Result<PrimitiveSemitoricPolygon> {
    if !fan_of_polygon(a)?.same_up_to_rotation(&fan_of_polygon(b)?) {
        return Err(Error::FanMismatch("labeled fans differ".into()));
    }
    if a.twisting_index() != b.twisting_index() {
        return Err(Error::ComponentMismatch("twisting indices differ".into()));
    }
    let poly = same_fan_interpolate(a.polygon(), b.polygon(), t)?;
    let s = Q::one() - t;
    let markers = a
        .markers()
        .iter()
        .zip(b.markers())
        .map(|(ma, mb)| Marker::new(&s * &ma.lambda + t * &mb.lambda, ma.k))
        .collect();
    PrimitiveSemitoricPolygon::new(poly, markers)
}
