use num::{One, Zero};
use rayon::prelude::*;

use super::{h_interpolate, marker_lengths, IngredientList};
use crate::error::{Error, Result};
use crate::polygeom::{
    family_distance, fan_of_polygon, move_polygon_family, same_fan_interpolate_marked, twist, DensitySpec,
    PrimitiveSemitoricPolygon,
};
use crate::rational::{to_f64, Q};
use crate::semitoric::{normalize, normalize_by_refinement, shift_loop, standard_fan, FanMove, SemitoricFan};

/// One continuous piece of the polygon path, parametrized by `[0, 1]`.
#[derive(Debug, Clone)]
enum Segment {
    Move { from: PrimitiveSemitoricPolygon, mv: FanMove, reversed: bool },
    Interpolate { a: PrimitiveSemitoricPolygon, b: PrimitiveSemitoricPolygon },
}

impl Segment {
    fn at(&self, t: &Q) -> Result<PrimitiveSemitoricPolygon> {
        match self {
            Segment::Move { from, mv, reversed } => {
                let s = if *reversed { Q::one() - t } else { t.clone() };
                move_polygon_family(from, *mv, &s)
            }
            Segment::Interpolate { a, b } => same_fan_interpolate_marked(a, b, t),
        }
    }
}

/// Follows `trace` (indexed on `frame`, a fan equal to that of `poly` up to rotation)
/// with polygon families. `ActT` only changes the representative and adds no segment.
fn follow(
    mut poly: PrimitiveSemitoricPolygon,
    mut frame: SemitoricFan,
    trace: &[FanMove],
    segments: &mut Vec<Segment>,
) -> Result<PrimitiveSemitoricPolygon> {
    for &m in trace {
        let own = fan_of_polygon(&poly)?;
        let r = frame
            .rotation_to(&own)
            .ok_or_else(|| Error::FanMismatch(format!("polygon fan {own:?} left the trace at {m}")))?;
        let mv = m.for_rotation(r, frame.len());
        let next = move_polygon_family(&poly, mv, &Q::one())?;
        if !matches!(m, FanMove::ActT { .. }) {
            segments.push(Segment::Move { from: poly, mv, reversed: false });
        }
        poly = next;
        frame = crate::semitoric::apply_move(&frame, m)?;
    }
    Ok(poly)
}

/// Segments from `p` to a polygon whose fan is the standard one.
fn to_standard(p: &PrimitiveSemitoricPolygon) -> Result<(Vec<Segment>, PrimitiveSemitoricPolygon)> {
    let fan = fan_of_polygon(p)?;
    // ActT would shear a toric polygon, which is not a change of representative
    let n = if fan.complexity() == 0 { normalize_by_refinement(&fan)? } else { normalize(&fan)? };
    let mut segments = Vec::new();
    let end = follow(p.clone(), fan, &n.trace, &mut segments)?;
    Ok((segments, end))
}

/// Runs [`shift_loop`] `times` times; every run lowers the twisting labels by one.
fn lower_labels(
    p: PrimitiveSemitoricPolygon,
    times: i64,
    segments: &mut Vec<Segment>,
) -> Result<PrimitiveSemitoricPolygon> {
    let c = p.complexity();
    let trace = shift_loop(c);
    (0..times).try_fold(p, |p, _| follow(p, standard_fan(c), &trace, segments))
}

fn same_class(a: &[i64], b: &[i64]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| y - x == b.first().unwrap_or(&0) - a.first().unwrap_or(&0))
}

/// The representative of `p`'s orbit whose twisting labels start at `k0`.
fn with_first_label(p: PrimitiveSemitoricPolygon, k0: Option<i64>) -> Result<PrimitiveSemitoricPolygon> {
    match (k0, p.markers().first()) {
        (Some(k0), Some(m)) if m.k != k0 => twist(&p, k0 - m.k),
        _ => Ok(p),
    }
}

fn polygon_path(a: &PrimitiveSemitoricPolygon, b: &PrimitiveSemitoricPolygon) -> Result<Vec<Segment>> {
    let (mut segments, mut end_a) = to_standard(a)?;
    let (mut back, mut end_b) = to_standard(b)?;
    if let (Some(ma), Some(mb)) = (end_a.markers().first(), end_b.markers().first()) {
        let gap = ma.k - mb.k;
        if gap > 0 {
            end_a = lower_labels(end_a, gap, &mut segments)?;
        } else if gap < 0 {
            end_b = lower_labels(end_b, -gap, &mut back)?;
        }
    }
    if end_a != end_b {
        segments.push(Segment::Interpolate { a: end_a, b: end_b });
    }
    for s in back.into_iter().rev() {
        match s {
            Segment::Move { from, mv, .. } => segments.push(Segment::Move { from, mv, reversed: true }),
            Segment::Interpolate { .. } => unreachable!("normalization segments are moves"),
        }
    }
    Ok(segments)
}

/// Probes per segment when measuring its length.
const PROBES: usize = 16;

/// Knots `(segment, t)` along the path with their cumulative `ExpAbsX` length, as
/// integers in units of `2^-24` plus one per knot so that the scale is strictly increasing.
fn arclength_knots(segments: &[Segment]) -> Result<Vec<(usize, Q, Q)>> {
    let per_segment = segments
        .par_iter()
        .map(|s| {
            let ts: Vec<Q> = (0..=PROBES).map(|k| Q::new(k.into(), PROBES.into())).collect();
            let polys = ts.iter().map(|t| s.at(t)).collect::<Result<Vec<_>>>()?;
            let lens = polys
                .windows(2)
                .map(|w| Ok(family_distance(&w[0], &w[1], DensitySpec::ExpAbsX)?.to_f64()))
                .collect::<Result<Vec<f64>>>()?;
            Ok((ts, lens))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut knots = vec![(0, Q::zero(), Q::zero())];
    let mut total = Q::zero();
    for (j, (ts, lens)) in per_segment.into_iter().enumerate() {
        for (t, len) in ts.into_iter().skip(1).zip(lens) {
            total += Q::from_integer(((len * (1u64 << 24) as f64).round() as i64 + 1).into());
            knots.push((j, t, total.clone()));
        }
    }
    Ok(knots)
}

/// Samples `0..=steps` of a path from `m` to `m2` inside one component.
///
/// The polygons follow the normalization traces of both fans (with extra label-shifting
/// loops when the two normalizations disagree on the twisting labels) and meet in a
/// same-fan interpolation. Heights keep a linearly changing fraction of the vertical
/// segment at their marker and the series interpolate linearly. Polygons are spaced
/// by an estimate of the `ExpAbsX` length of each piece. Samples before the last
/// use the labels of `m`; the last one is `m2` itself.
pub fn connectivity_path(m: &IngredientList, m2: &IngredientList, steps: usize) -> Result<Vec<IngredientList>> {
    if m.m_f != m2.m_f {
        return Err(Error::ComponentMismatch(format!("m_f = {} and {}", m.m_f, m2.m_f)));
    }
    let (ka, kb) = (m.polygon.twisting_index(), m2.polygon.twisting_index());
    if !same_class(&ka, &kb) {
        return Err(Error::ComponentMismatch(format!("twisting indices {ka:?} and {kb:?}")));
    }
    if steps == 0 {
        return Err(Error::Domain("a path needs at least one step".into()));
    }
    if m == m2 {
        return Ok(vec![m.clone(); steps + 1]);
    }
    if let Some((a, b)) = m.series.first().zip(m2.series.first()) {
        super::check_degrees(a, b)?;
    }
    let segments = polygon_path(&m.polygon, &m2.polygon)?;
    let lens_a: Vec<f64> = marker_lengths(&m.polygon).iter().map(to_f64).collect();
    let lens_b: Vec<f64> = marker_lengths(&m2.polygon).iter().map(to_f64).collect();
    let count = segments.len();
    let knots = if count == 0 { Vec::new() } else { arclength_knots(&segments)? };

    let sample = |i: usize| -> Result<IngredientList> {
        if i == 0 {
            return Ok(m.clone());
        }
        if i == steps {
            return Ok(m2.clone());
        }
        let poly = if count == 0 {
            m.polygon.clone()
        } else {
            let total = &knots.last().expect("one knot per probe").2;
            let u = total * Q::new(i.into(), steps.into());
            let k = knots.partition_point(|kn| kn.2 <= u).clamp(1, knots.len() - 1);
            let ((j0, t0, u0), (j1, t1, u1)) = (&knots[k - 1], &knots[k]);
            // a knot ending a segment starts the next one at t = 0
            let t0 = if j0 == j1 { t0.clone() } else { Q::zero() };
            let t = &t0 + (t1 - &t0) * (&u - u0) / (u1 - u0);
            segments[*j1].at(&t)?
        };
        let poly = with_first_label(poly, ka.first().copied())?;
        let t = i as f64 / steps as f64;
        let lens: Vec<f64> = marker_lengths(&poly).iter().map(to_f64).collect();
        let h = (0..m.m_f)
            .map(|j| h_interpolate(m.h[j], lens_a[j], m2.h[j], lens_b[j], lens[j], t))
            .collect::<Result<Vec<f64>>>()?;
        let series = m.series.iter().zip(&m2.series).map(|(a, b)| a.interpolate(b, t)).collect::<Result<Vec<_>>>()?;
        IngredientList::new(poly, h, series)
    };
    (0..=steps).into_par_iter().map(sample).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moduli::tests::{random_ingredients, random_polygon};
    use crate::moduli::{ingredient_distance, CapSequence, TruncatedSeries};
    use crate::polygeom::{attach_markers, polygon_realizing_fan, DensitySpec};
    use crate::semitoric::apply_move;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn worst_step(path: &[IngredientList]) -> f64 {
        let b = CapSequence::default();
        path.windows(2)
            .map(|w| ingredient_distance(&w[0], &w[1], DensitySpec::ExpAbsX, &b).unwrap())
            .fold(0.0, f64::max)
    }

    fn ingredients_on(p: PrimitiveSemitoricPolygon, fraction: f64) -> IngredientList {
        let h = marker_lengths(&p).iter().map(|l| to_f64(l) * fraction).collect();
        let series = (0..p.complexity()).map(|_| TruncatedSeries::zero(6)).collect();
        IngredientList::new(p, h, series).unwrap()
    }

    fn check_path(m: &IngredientList, n: &IngredientList) {
        let mut last = f64::MAX;
        for steps in [10, 100, 1000] {
            let path = connectivity_path(m, n, steps).unwrap();
            assert_eq!(path.len(), steps + 1);
            assert_eq!(&path[0], m);
            assert_eq!(&path[steps], n);
            assert!(path.iter().all(|x| x.m_f() == m.m_f()));
            let worst = worst_step(&path);
            assert!(worst <= last, "{steps}: {worst} > {last}");
            last = worst;
        }
    }

    #[test]
    fn constant_path() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let m = random_ingredients(&mut rng, 1, &[0]);
        let path = connectivity_path(&m, &m, 5).unwrap();
        assert!(path.iter().all(|x| x == &m));
    }

    #[test]
    fn same_fan_interpolation_path() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let m = random_ingredients(&mut rng, 1, &[0]);
        let n = random_ingredients(&mut rng, 1, &[0]);
        assert_eq!(polygon_path(m.polygon(), n.polygon()).unwrap().len(), 1);
        check_path(&m, &n);
    }

    #[test]
    fn path_through_a_move() {
        let f = apply_move(&standard_fan(2), FanMove::Chop { index: 2 }).unwrap();
        let m = ingredients_on(polygon_realizing_fan(&f).unwrap(), 0.5);
        let n = ingredients_on(polygon_realizing_fan(&standard_fan(2)).unwrap(), 0.25);
        let segments = polygon_path(m.polygon(), n.polygon()).unwrap();
        assert!(matches!(segments[0], Segment::Move { mv: FanMove::Unchop { .. }, reversed: false, .. }));
        check_path(&m, &n);
    }

    #[test]
    fn paths_between_random_fans() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let moves = [
            FanMove::Chop { index: 0 },
            FanMove::Chop { index: 1 },
            FanMove::ActT { k: 2 },
            FanMove::Chop { index: 3 },
        ];
        for c in 0..3 {
            let f = moves.iter().fold(standard_fan(c), |f, &m| apply_move(&f, m).unwrap());
            let labels: Vec<i64> = (0..c as i64).map(|j| 3 + j).collect();
            let p = attach_markers(
                polygon_realizing_fan(&f).unwrap().polygon().clone(),
                &f,
                &labels,
            )
            .unwrap();
            let m = ingredients_on(p, 0.3);
            let shifted: Vec<i64> = labels.iter().map(|k| k - 4).collect();
            let n = random_ingredients(&mut rng, c, &shifted);
            let path = connectivity_path(&m, &n, 200).unwrap();
            assert_eq!(path[0], m);
            assert_eq!(path[200], n);
            assert!(worst_step(&path) < worst_step(&connectivity_path(&m, &n, 20).unwrap()));
        }
    }

    #[test]
    fn shifted_labels_need_loops() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let a = random_polygon(&mut rng, 1, &[2]);
        let b = random_polygon(&mut rng, 1, &[0]);
        let segments = polygon_path(&a, &b).unwrap();
        // two loops of chop, commute, unchop, chop, unchop, then the interpolation
        assert_eq!(segments.len(), 2 * 5 + 1);
    }

    #[test]
    fn component_mismatch() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let a = random_ingredients(&mut rng, 1, &[0]);
        let b = random_ingredients(&mut rng, 2, &[0, 0]);
        assert!(matches!(connectivity_path(&a, &b, 10), Err(Error::ComponentMismatch(_))));
        let c = random_ingredients(&mut rng, 2, &[0, 1]);
        let d = random_ingredients(&mut rng, 2, &[0, 0]);
        assert!(matches!(connectivity_path(&c, &d, 10), Err(Error::ComponentMismatch(_))));
    }
}
