use num::{BigInt, Integer, One, Signed, Zero};

use super::{Marker, Point, PrimitiveSemitoricPolygon, RationalPolygon};
use crate::error::{Error, Result};
use crate::groupcore::{det2, LatticeVector};
use crate::rational::{qi, Q};
use crate::semitoric::SemitoricFan;

/// Edge direction for inward normal `v` on a counterclockwise boundary.
fn edge_dir(v: LatticeVector) -> LatticeVector {
    LatticeVector::new(v.y, -v.x)
}

/// Positive edge lengths `len_i` with `sum len_i * dir_i = 0`, scaled to coprime integers.
///
/// Starts from all ones and adds a nonnegative correction along the two consecutive
/// directions whose cone contains minus the residual.
fn edge_lengths(vectors: &[LatticeVector]) -> Result<Vec<BigInt>> {
    let dirs: Vec<LatticeVector> = vectors.iter().map(|&v| edge_dir(v)).collect();
    let n = dirs.len();
    let mut len: Vec<Q> = vec![Q::one(); n];
    let rx: i64 = dirs.iter().map(|d| d.x).sum();
    let ry: i64 = dirs.iter().map(|d| d.y).sum();
    if (rx, ry) != (0, 0) {
        let target = LatticeVector::new(-rx, -ry);
        let (a, b, alpha, beta) = (0..n)
            .find_map(|i| {
                let (ea, eb) = (dirs[i], dirs[(i + 1) % n]);
                let det = det2(ea, eb);
                if det <= 0 {
                    return None;
                }
                // target = alpha ea + beta eb
                let alpha = det2(target, eb);
                let beta = det2(ea, target);
                (alpha >= 0 && beta >= 0).then(|| (i, (i + 1) % n, Q::new(alpha.into(), det.into()), Q::new(beta.into(), det.into())))
            })
            .ok_or_else(|| Error::Domain("fan has no realizing polygon".into()))?;
        len[a] += alpha;
        len[b] += beta;
    }
    let l = len.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = len.iter().map(|x| (x * Q::from_integer(l.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    Ok(ints.into_iter().map(|x| x / &g).collect())
}

/// A compact polygon whose associated fan is `f` up to the choice of starting edge,
/// with markers at its hidden and fake corners and all twisting labels 0.
pub fn polygon_realizing_fan(f: &SemitoricFan) -> Result<PrimitiveSemitoricPolygon> {
    let vectors = f.vectors();
    let len = edge_lengths(vectors)?;
    let n = vectors.len();
    let mut pts = Vec::with_capacity(n);
    let mut cur = Point::int(0, 0);
    for k in 0..n {
        pts.push(cur.clone());
        let d = edge_dir(vectors[k]);
        let l = Q::from_integer(len[k].clone());
        cur = Point::new(&cur.x + &l * qi(d.x), &cur.y + &l * qi(d.y));
    }
    debug_assert_eq!(cur, Point::int(0, 0));
    let min_x = pts.iter().map(|p| p.x.clone()).min().unwrap();
    let min_y = pts.iter().map(|p| p.y.clone()).min().unwrap();
    // vertex k+1 sits between edges k and k+1
    let mut lambdas: Vec<Q> = (0..n)
        .filter(|&k| !f.labels()[k].is_delzant())
        .map(|k| &pts[(k + 1) % n].x - &min_x)
        .collect();
    lambdas.sort();
    let shifted: Vec<Point> = pts.into_iter().map(|p| Point::new(p.x - &min_x, p.y - &min_y)).collect();
    let poly = RationalPolygon::new(shifted)?;
    if poly.len() != n || len.iter().any(|l| !l.is_positive()) {
        return Err(Error::Domain("realization lost an edge".into()));
    }
    let markers = lambdas.into_iter().map(|l| Marker::new(l, 0)).collect();
    PrimitiveSemitoricPolygon::new(poly, markers)
}
