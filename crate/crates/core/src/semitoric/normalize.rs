use serde::Serialize;

use super::{apply_move, standard_fan, CornerLabel, FanMove, SemitoricFan};
use crate::error::{Error, Result};
use crate::groupcore::{det2, LatticeVector};
use crate::toricfan::is_sum_of_neighbors;

const DOWN: LatticeVector = LatticeVector::new(0, -1);
const RIGHT: LatticeVector = LatticeVector::new(1, 0);

/// Result of [`normalize`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Normalization {
    /// `standard_fan(complexity)`.
    pub fan: SemitoricFan,
    pub trace: Vec<FanMove>,
    /// Net exponent of the `ActT` moves in the trace.
    pub k: i64,
    pub complexity: usize,
    /// Replaying `trace` gives `fan` after rotating the start index by this amount.
    pub rotation: usize,
}

struct Run {
    fan: SemitoricFan,
    trace: Vec<FanMove>,
}

impl Run {
    fn apply(&mut self, m: FanMove) -> Result<()> {
        self.fan = apply_move(&self.fan, m).map_err(|e| match e {
            Error::MoveNotApplicable { mv, reason, .. } => {
                Error::MoveNotApplicable { step: self.trace.len(), mv, reason }
            }
            other => other,
        })?;
        self.trace.push(m);
        Ok(())
    }

    fn d(&self) -> usize {
        self.fan.len()
    }

    fn position(&self, v: LatticeVector) -> Option<usize> {
        self.fan.vectors.iter().position(|&w| w == v)
    }

    /// Index of `(0,-1)`; relative indices count from it.
    fn anchor(&self) -> usize {
        self.position(DOWN).expect("(0,-1) is kept once the right angle exists")
    }

    fn abs(&self, rel: usize) -> usize {
        (self.anchor() + rel) % self.d()
    }

    fn vec_rel(&self, rel: usize) -> LatticeVector {
        self.fan.vectors[self.abs(rel)]
    }

    fn label_rel(&self, rel: usize) -> CornerLabel {
        self.fan.labels[self.abs(rel)]
    }
}

fn right_angle(run: &mut Run) -> Result<()> {
    let mut last_y = i64::MAX;
    loop {
        if let Some(i) = run.position(RIGHT) {
            let d = run.d();
            let prev = run.fan.vectors[(i + d - 1) % d];
            if prev.y != -1 {
                return Err(Error::NormalizationStalled(format!("predecessor of (1,0) is {prev}")));
            }
            // T^a (a,-1) = (0,-1)
            if prev.x != 0 {
                run.apply(FanMove::ActT { k: prev.x })?;
            }
            return Ok(());
        }
        let d = run.d();
        let vs = &run.fan.vectors;
        let i = (0..d)
            .find(|&i| vs[i].y < 0 && vs[(i + 1) % d].y > 0)
            .ok_or_else(|| Error::NormalizationStalled("no pair crossing the positive x-axis".into()))?;
        let y = (vs[i] + vs[(i + 1) % d]).y.abs();
        if y >= last_y {
            return Err(Error::NormalizationStalled("inserted vector did not approach the x-axis".into()));
        }
        last_y = y;
        run.apply(FanMove::Chop { index: i })?;
    }
}

/// Chops (and at most one `ActT`) until the fan contains the adjacent pair `(0,-1), (1,0)`.
pub fn ensure_right_angle(f: &SemitoricFan) -> Result<(SemitoricFan, Vec<FanMove>)> {
    let mut run = Run { fan: f.clone(), trace: Vec::new() };
    right_angle(&mut run)?;
    Ok((run.fan, run.trace))
}

fn remove_hidden(run: &mut Run) -> Result<()> {
    let budget = run.fan.complexity();
    for _ in 0..=budget {
        let d = run.d();
        match (0..d).find(|&rel| run.label_rel(rel) == CornerLabel::Hidden) {
            None => return Ok(()),
            Some(rel) => run.apply(FanMove::RemoveHidden { index: run.abs(rel) })?,
        }
    }
    Err(Error::NormalizationStalled("hidden corners remain after removal sweep".into()))
}

/// Moves every fake corner right until they occupy the last `c` corners before `(0,-1)`.
fn gather_fakes(run: &mut Run) -> Result<()> {
    let position_sum = |run: &Run| -> usize {
        (0..run.d()).filter(|&rel| run.label_rel(rel) == CornerLabel::Fake).sum()
    };
    let mut last = position_sum(run);
    loop {
        let d = run.d();
        let found = (0..d.saturating_sub(1)).find(|&rel| {
            run.label_rel(rel) == CornerLabel::Fake && run.label_rel(rel + 1) == CornerLabel::Delzant
        });
        let Some(rel) = found else { return Ok(()) };
        run.apply(FanMove::CommuteFakeDelzant { index: run.abs(rel) })?;
        let now = position_sum(run);
        if now <= last {
            return Err(Error::NormalizationStalled("fake corners did not move right".into()));
        }
        last = now;
    }
}

/// Toric part `t_0 = w_l, t_1 = (1,0), t_j = w_j`. Relative index of `t_j`.
fn toric_rel(l: usize, j: usize) -> usize {
    if j == 0 {
        l
    } else {
        j
    }
}

fn toric_vectors(run: &Run, l: usize) -> Vec<LatticeVector> {
    (0..l).map(|j| run.vec_rel(toric_rel(l, j))).collect()
}

fn toric_word(t: &[LatticeVector]) -> Vec<i64> {
    let l = t.len();
    (0..l).map(|i| det2(t[i], t[(i + 2) % l])).collect()
}

/// Chop between `t_j` and `t_{j+1}`, `1 <= j <= l-1`.
fn toric_chop(run: &mut Run, l: usize, j: usize) -> Result<()> {
    debug_assert!((1..l).contains(&j));
    run.apply(FanMove::Chop { index: run.abs(j) })
}

/// Remove `t_j`, `2 <= j <= l-1`.
fn toric_unchop(run: &mut Run, l: usize, j: usize) -> Result<()> {
    debug_assert!((2..l).contains(&j));
    run.apply(FanMove::Unchop { index: run.abs(j) })
}

fn strictly_inside(r: LatticeVector, a: LatticeVector, b: LatticeVector) -> bool {
    det2(a, r) > 0 && det2(r, b) > 0
}

/// Reduces the toric part to `((-c,-1), (1,0), (c,1), (-1,0))` without touching
/// `t_0`, `t_1` or the corner between them.
fn reduce_toric_part(run: &mut Run, c: usize) -> Result<()> {
    let c = c as i64;
    let targets = [LatticeVector::new(c, 1), LatticeVector::new(-1, 0)];
    let guard = 64 + 16 * run.d() * run.d();
    for _ in 0..guard {
        let l = run.d() - c as usize;
        let t = toric_vectors(run, l);
        let b = toric_word(&t);
        if l == 4 && b.iter().all(|&x| x == 0) {
            return Ok(());
        }
        if l == 3 {
            toric_chop(run, l, 1)?;
            continue;
        }
        if l == 4 {
            let before = if b[0] == 0 && b[2] == 0 { b[1].abs() } else { b[0].abs() };
            if b[0] == 0 && b[2] == 0 && b[1] > 0 {
                toric_chop(run, 4, 3)?;
                toric_unchop(run, 5, 3)?;
            } else if b[0] == 0 && b[2] == 0 {
                toric_chop(run, 4, 2)?;
                toric_unchop(run, 5, 4)?;
            } else if b[1] == 0 && b[3] == 0 && b[0] > 0 {
                toric_chop(run, 4, 2)?;
                toric_unchop(run, 5, 2)?;
            } else if b[1] == 0 && b[3] == 0 {
                toric_chop(run, 4, 1)?;
                toric_unchop(run, 5, 3)?;
            } else {
                return Err(Error::NormalizationStalled(format!("4-vector toric part with word {b:?}")));
            }
            let after = toric_word(&toric_vectors(run, 4));
            let now = if after[0] == 0 && after[2] == 0 { after[1].abs() } else { after[0].abs() };
            if now >= before {
                return Err(Error::NormalizationStalled("Hirzebruch parameter did not decrease".into()));
            }
            continue;
        }
        if let Some(i) = (1..l - 1).find(|&i| b[i] == 1) {
            toric_unchop(run, l, i + 1)?;
            continue;
        }
        // No interior vector can be removed directly: refine towards the target
        // rays, then strip everything else.
        refine_to_targets(run, c as usize, &targets)?;
        return strip_to_targets(run, c as usize, &targets);
    }
    Err(Error::NormalizationStalled(format!("toric reduction exceeded {guard} iterations")))
}

fn refine_to_targets(run: &mut Run, c: usize, targets: &[LatticeVector]) -> Result<()> {
    for &r in targets {
        let mut last_len = run.d();
        loop {
            let l = run.d() - c;
            let t = toric_vectors(run, l);
            if t.contains(&r) {
                break;
            }
            let j = (1..l)
                .find(|&j| strictly_inside(r, t[j], t[(j + 1) % l]))
                .ok_or_else(|| Error::NormalizationStalled(format!("no cone contains {r}")))?;
            toric_chop(run, l, j)?;
            if run.d() <= last_len || run.d() > 4096 {
                return Err(Error::NormalizationStalled("refinement does not terminate".into()));
            }
            last_len = run.d();
        }
    }
    Ok(())
}

fn strip_to_targets(run: &mut Run, c: usize, targets: &[LatticeVector]) -> Result<()> {
    loop {
        let l = run.d() - c;
        if l == 4 {
            return Ok(());
        }
        let t = toric_vectors(run, l);
        let j = (2..l)
            .find(|&j| !targets.contains(&t[j]) && is_sum_of_neighbors(&t, j))
            .ok_or_else(|| Error::NormalizationStalled("no removable vector in refinement".into()))?;
        toric_unchop(run, l, j)?;
    }
}

/// Transforms `f` into `standard_fan(c)` with the fan transformations and `ActT`.
pub fn normalize(f: &SemitoricFan) -> Result<Normalization> {
    let c = f.complexity();
    let mut run = Run { fan: f.clone(), trace: Vec::new() };
    right_angle(&mut run)?;
    remove_hidden(&mut run)?;
    gather_fakes(&mut run)?;
    let d = run.d();
    for rel in 0..d {
        let expected = if rel + c >= d { CornerLabel::Fake } else { CornerLabel::Delzant };
        if run.label_rel(rel) != expected {
            return Err(Error::NormalizationStalled(format!("fake corners not gathered at {rel}")));
        }
    }
    if run.vec_rel(d - c) != LatticeVector::new(-(c as i64), -1) {
        return Err(Error::NormalizationStalled(format!(
            "first vector of the fake block is {}, expected (-{c},-1)",
            run.vec_rel(d - c)
        )));
    }
    reduce_toric_part(&mut run, c)?;

    let rotation = run.anchor();
    let fan = run.fan.rotated(rotation);
    let target = standard_fan(c);
    if fan != target {
        return Err(Error::NormalizationStalled(format!("ended at {fan:?}")));
    }
    let k = run.trace.iter().map(|m| if let FanMove::ActT { k } = m { *k } else { 0 }).sum();
    Ok(Normalization { fan, trace: run.trace, k, complexity: c, rotation })
}

/// `normalize` for complexity 0 without `ActT`: refine until the four axis rays are
/// present, then unchop everything else.
pub fn normalize_by_refinement(f: &SemitoricFan) -> Result<Normalization> {
    if f.complexity() != 0 {
        return Err(Error::Domain("refinement normalization needs complexity 0".into()));
    }
    let axes = [DOWN, RIGHT, LatticeVector::new(0, 1), LatticeVector::new(-1, 0)];
    let mut run = Run { fan: f.clone(), trace: Vec::new() };
    for &r in &axes {
        while run.position(r).is_none() {
            let d = run.d();
            let vs = &run.fan.vectors;
            let i = (0..d)
                .find(|&i| strictly_inside(r, vs[i], vs[(i + 1) % d]))
                .ok_or_else(|| Error::NormalizationStalled(format!("no cone contains {r}")))?;
            if d > 4096 {
                return Err(Error::NormalizationStalled("refinement does not terminate".into()));
            }
            run.apply(FanMove::Chop { index: i })?;
        }
    }
    while run.d() > 4 {
        let vs = run.fan.vectors.clone();
        let j = (0..vs.len())
            .find(|&j| !axes.contains(&vs[j]) && is_sum_of_neighbors(&vs, j))
            .ok_or_else(|| Error::NormalizationStalled("no removable vector in refinement".into()))?;
        run.apply(FanMove::Unchop { index: j })?;
    }
    let rotation = run.anchor();
    let fan = run.fan.rotated(rotation);
    debug_assert_eq!(fan, standard_fan(0));
    Ok(Normalization { fan, trace: run.trace, k: 0, complexity: 0, rotation })
}

/// Moves from `standard_fan(c)` back to itself whose last step is `ActT { k: 1 }`;
/// the other moves take it to `T^{-1} standard_fan(c)`.
pub fn shift_loop(c: usize) -> Vec<FanMove> {
    let ci = c as i64;
    let mut run = Run { fan: standard_fan(c), trace: Vec::new() };
    let step = |run: &mut Run, m: FanMove| run.apply(m).expect("shift loop moves apply to the standard fan");
    step(&mut run, FanMove::Chop { index: 0 });
    // each commute only relabels: T(v_{i+2}) equals the replaced vector
    for i in (5..c + 5).rev() {
        step(&mut run, FanMove::CommuteFakeDelzant { index: i });
    }
    let first_fake = run.position(LatticeVector::new(-ci, -1)).unwrap();
    step(&mut run, FanMove::Unchop { index: first_fake });
    let top = run.position(LatticeVector::new(ci, 1)).unwrap();
    step(&mut run, FanMove::Chop { index: top });
    let top = run.position(LatticeVector::new(ci, 1)).unwrap();
    step(&mut run, FanMove::Unchop { index: top });
    step(&mut run, FanMove::ActT { k: 1 });
    run.trace
}

#[cfg(test)]
mod tests {
    use super::super::replay_trace;
    use super::*;
    use crate::toricfan::{fulton_reduce, ToricFan};
    use proptest::prelude::*;
    use CornerLabel::*;

    fn v(x: i64, y: i64) -> LatticeVector {
        LatticeVector::new(x, y)
    }

    #[test]
    fn right_angle_examples() {
        // standard_fan(0) starting at (1,0): the pair is already there
        let f = standard_fan(0).rotated(1);
        let (g, trace) = ensure_right_angle(&f).unwrap();
        assert!(trace.is_empty());
        assert_eq!(g, f);

        // (3,-1) before (1,0): T^3 sends it to (0,-1)
        let f = SemitoricFan::toric(vec![v(3, -1), v(1, 0), v(-2, 1), v(-1, 0)]).unwrap();
        let (g, trace) = ensure_right_angle(&f).unwrap();
        assert_eq!(trace, vec![FanMove::ActT { k: 3 }]);
        assert_eq!(&g.vectors()[..2], &[v(0, -1), v(1, 0)]);

        // square sheared by T has no x-axis vector on the right
        let f = apply_move(&standard_fan(0), FanMove::ActT { k: 1 }).unwrap();
        assert!(!f.vectors().contains(&v(1, 0)) || f.vectors()[0] != v(0, -1));
        let (g, trace) = ensure_right_angle(&f).unwrap();
        assert_eq!(replay_trace(&f, &trace).unwrap(), g);
        let i = g.vectors().iter().position(|&w| w == v(1, 0)).unwrap();
        assert_eq!(g.vectors()[(i + g.len() - 1) % g.len()], v(0, -1));
    }

    #[test]
    fn standard_fans_are_fixed() {
        for c in 0..4 {
            let n = normalize(&standard_fan(c)).unwrap();
            assert_eq!(n.fan, standard_fan(c));
            assert!(n.trace.is_empty());
            assert_eq!(n.k, 0);
        }
    }

    #[test]
    fn single_chop_is_undone() {
        let f = standard_fan(1);
        for i in 1..4 {
            let g = apply_move(&f, FanMove::Chop { index: i }).unwrap();
            let n = normalize(&g).unwrap();
            assert_eq!(n.fan, f);
            assert!(n.trace.len() <= 3, "chop at {i}: {:?}", n.trace);
            assert!(matches!(n.trace[0], FanMove::Unchop { .. }));
        }
        // chopping at the right angle moves (0,-1) away, so the first step is ActT
        let g = apply_move(&f, FanMove::Chop { index: 0 }).unwrap();
        let n = normalize(&g).unwrap();
        assert_eq!(n.fan, f);
        assert_eq!(n.trace[0], FanMove::ActT { k: 1 });
    }

    #[test]
    fn hidden_and_scattered_fakes() {
        // hidden corner from merging a fake and a Delzant corner on top
        let f = SemitoricFan::new(
            vec![v(1, -1), v(1, 0), v(1, 1), v(-1, 0), v(-1, -1)],
            vec![Delzant, Delzant, Delzant, Delzant, Hidden],
        )
        .unwrap();
        let n = normalize(&f).unwrap();
        assert_eq!(n.fan, standard_fan(1));
        let replayed = replay_trace(&f, &n.trace).unwrap();
        assert_eq!(replayed.rotated(n.rotation), n.fan);
    }

    #[test]
    fn complexity_zero_matches_toric_reduction() {
        let sq = ToricFan::new(vec![v(0, -1), v(1, 0), v(0, 1), v(-1, 0)]).unwrap();
        let fans = [
            vec![v(0, -1), v(1, -1), v(1, 0), v(1, 1), v(0, 1), v(-1, 0)],
            vec![v(1, 0), v(0, 1), v(-1, -1)],
            vec![v(0, 1), v(-1, -3), v(0, -1), v(1, 0)],
            vec![v(2, 1), v(1, 1), v(0, 1), v(-1, 0), v(0, -1), v(1, 0)],
        ];
        for vs in fans {
            let toric = ToricFan::new(vs.clone()).unwrap();
            let red = fulton_reduce(&toric).unwrap();
            let n = normalize(&SemitoricFan::toric(vs).unwrap()).unwrap();
            assert_eq!(ToricFan::new(n.fan.vectors().to_vec()).unwrap(), sq);
            // the minimal model itself normalizes as well
            let m = normalize(&SemitoricFan::toric(red.model.fan().vectors().to_vec()).unwrap()).unwrap();
            assert_eq!(m.fan, n.fan);
        }
    }

    #[test]
    fn no_interior_reducible_vector() {
        // toric word 1,-1,0,2,1: only the protected vectors are sums of neighbours
        let f = SemitoricFan::toric(vec![v(0, -1), v(1, 0), v(1, 1), v(-2, -1), v(-1, -1)]).unwrap();
        let n = normalize(&f).unwrap();
        assert_eq!(n.fan, standard_fan(0));
        assert_eq!(replay_trace(&f, &n.trace).unwrap().rotated(n.rotation), n.fan);
    }

    #[test]
    fn refinement_avoids_act_t() {
        let fans = [
            vec![v(1, 0), v(0, 1), v(-1, -1)],
            vec![v(1, -1), v(1, 0), v(-1, 1), v(-1, 0)],
            vec![v(0, -1), v(1, 0), v(1, 1), v(-2, -1), v(-1, -1)],
            vec![v(3, -1), v(1, 0), v(-2, 1), v(-1, 0)],
        ];
        for vs in fans {
            let f = SemitoricFan::toric(vs).unwrap();
            let n = normalize_by_refinement(&f).unwrap();
            assert!(n.trace.iter().all(|m| !matches!(m, FanMove::ActT { .. })));
            assert_eq!(replay_trace(&f, &n.trace).unwrap().rotated(n.rotation), standard_fan(0));
        }
        assert!(normalize_by_refinement(&standard_fan(1)).is_err());
    }

    #[test]
    fn shift_loop_returns_to_standard() {
        for c in 0..5 {
            let trace = shift_loop(c);
            let (last, body) = trace.split_last().unwrap();
            assert_eq!(*last, FanMove::ActT { k: 1 });
            assert!(body.iter().all(|m| !matches!(m, FanMove::ActT { .. })));
            let inner = replay_trace(&standard_fan(c), body).unwrap();
            let sheared = apply_move(&standard_fan(c), FanMove::ActT { k: -1 }).unwrap();
            assert!(inner.same_up_to_rotation(&sheared), "c={c}: {inner:?}");
            assert!(replay_trace(&standard_fan(c), &trace).unwrap().same_up_to_rotation(&standard_fan(c)));
        }
    }

    fn random_moves(c: usize, picks: Vec<(u8, u16, i8)>) -> SemitoricFan {
        let mut f = standard_fan(c);
        for (kind, idx, k) in picks {
            let d = f.len();
            let i = idx as usize % d;
            let m = match kind % 5 {
                0 | 1 => FanMove::Chop { index: i },
                2 => FanMove::Unchop { index: i },
                3 => FanMove::CommuteFakeDelzant { index: i },
                _ => FanMove::ActT { k: k as i64 },
            };
            if let Ok(g) = apply_move(&f, m) {
                f = g;
            }
        }
        f
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]
        #[test]
        fn random_fans_normalize(c in 0usize..4, picks in prop::collection::vec((any::<u8>(), any::<u16>(), -3i8..=3), 0..24)) {
            let f = random_moves(c, picks);
            let n = normalize(&f).unwrap();
            prop_assert_eq!(&n.fan, &standard_fan(c));
            let replayed = replay_trace(&f, &n.trace).unwrap();
            prop_assert_eq!(replayed.rotated(n.rotation), n.fan.clone());
            let shifted = apply_move(&f, FanMove::ActT { k: 2 }).unwrap();
            prop_assert_eq!(normalize(&shifted).unwrap().fan, n.fan);
        }
    }
}
