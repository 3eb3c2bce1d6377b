//! Deterministic inputs shared by the benchmarks.

use stfan_core::moduli::{marker_lengths, IngredientList, TruncatedSeries};
use stfan_core::polygeom::{polygon_realizing_fan, PrimitiveSemitoricPolygon};
use stfan_core::rational::to_f64;
use stfan_core::semitoric::{apply_move, standard_fan, FanMove, SemitoricFan};
use stfan_core::toricfan::{corner_chop, MinimalModel, ToricFan};

/// A Hirzebruch fan chopped `n` times at spread-out corners.
pub fn chopped_fan(k: i64, n: usize) -> ToricFan {
    (0..n).fold(MinimalModel::hirzebruch(k).fan(), |f, i| {
        let at = (3 * i + 1) % f.len();
        corner_chop(&f, at).expect("chops always apply")
    })
}

/// `standard_fan(c)` after a fixed mix of chops, commutes and a T action.
pub fn scrambled_fan(c: usize) -> SemitoricFan {
    let mut f = standard_fan(c);
    let moves = [FanMove::Chop { index: 0 }, FanMove::Chop { index: 2 }, FanMove::ActT { k: 2 }, FanMove::Chop { index: 1 }];
    for m in moves {
        f = apply_move(&f, m).expect("moves apply to the standard fan");
    }
    f
}

pub fn realization(c: usize) -> PrimitiveSemitoricPolygon {
    polygon_realizing_fan(&standard_fan(c)).expect("standard fans are realizable")
}

/// Ingredients on `p` with heights at `fraction` of each marker segment.
pub fn ingredients(p: PrimitiveSemitoricPolygon, fraction: f64) -> IngredientList {
    let h = marker_lengths(&p).iter().map(|l| to_f64(l) * fraction).collect();
    let series = (0..p.complexity())
        .map(|j| TruncatedSeries::from_fn(TruncatedSeries::DEFAULT_DEGREE, |a, b| fraction * (j + a + b) as f64).unwrap())
        .collect();
    IngredientList::new(p, h, series).expect("heights inside the segments")
}
