use proptest::prelude::*;

use stfan_core::moduli::{connectivity_path, marker_lengths, IngredientList, TruncatedSeries};
use stfan_core::polygeom::{
    fan_of_polygon, family_distance, move_polygon_family, polygon_realizing_fan, DensitySpec,
    PrimitiveSemitoricPolygon,
};
use stfan_core::rational::{q, to_f64};
use stfan_core::semitoric::{apply_move, normalize, standard_fan, FanMove, SemitoricFan};

/// `standard_fan(c)` after the applicable moves among `picks`.
fn derived_fan(c: usize, picks: &[(u8, u8)], act_t: bool) -> SemitoricFan {
    let mut f = standard_fan(c);
    for &(kind, at) in picks {
        let index = at as usize % f.len();
        let m = match kind % 5 {
            0 => FanMove::Chop { index },
            1 => FanMove::Unchop { index },
            2 => FanMove::RemoveHidden { index },
            3 => FanMove::CommuteFakeDelzant { index },
            _ if act_t => FanMove::ActT { k: if at % 2 == 0 { 1 } else { -1 } },
            _ => continue,
        };
        if let Ok(g) = apply_move(&f, m) {
            f = g;
        }
    }
    f
}

fn on(p: PrimitiveSemitoricPolygon, fraction: f64) -> IngredientList {
    let h = marker_lengths(&p).iter().map(|l| to_f64(l) * fraction).collect();
    let series = (0..p.complexity()).map(|_| TruncatedSeries::zero(6)).collect();
    IngredientList::new(p, h, series).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn realization_round_trip(c in 0usize..3, picks in prop::collection::vec((any::<u8>(), any::<u8>()), 0..5)) {
        let f = derived_fan(c, &picks, false);
        let p = polygon_realizing_fan(&f).unwrap();
        prop_assert!(fan_of_polygon(&p).unwrap().same_up_to_rotation(&f));
    }

    #[test]
    fn normalize_ignores_act_t(c in 0usize..4, picks in prop::collection::vec((any::<u8>(), any::<u8>()), 0..6), k in -3i64..=3) {
        let f = derived_fan(c, &picks, true);
        let g = apply_move(&f, FanMove::ActT { k }).unwrap();
        let (nf, ng) = (normalize(&f).unwrap(), normalize(&g).unwrap());
        prop_assert_eq!(&nf.fan, &ng.fan);
        prop_assert_eq!(&nf.fan, &standard_fan(c));
        let again = normalize(&nf.fan).unwrap();
        prop_assert!(again.trace.is_empty());
    }

    #[test]
    fn move_families_are_continuous(c in 0usize..3, kind in 0u8..4, at in any::<u8>()) {
        let p = polygon_realizing_fan(&standard_fan(c)).unwrap();
        let fan = fan_of_polygon(&p).unwrap();
        let index = at as usize % fan.len();
        let m = [FanMove::Chop { index }, FanMove::Unchop { index }, FanMove::RemoveHidden { index },
            FanMove::CommuteFakeDelzant { index }][kind as usize];
        prop_assume!(apply_move(&fan, m).is_ok());
        let member = |t| move_polygon_family(&p, m, &t).unwrap();
        let mid = member(q(1, 2));
        let gaps: Vec<f64> = [4, 16, 64]
            .iter()
            .map(|&n| family_distance(&mid, &member(q(1, 2) + q(1, n)), DensitySpec::Lebesgue).unwrap().to_f64())
            .collect();
        prop_assert!(gaps[0] >= gaps[1] && gaps[1] >= gaps[2], "{:?}", gaps);
        prop_assert!(gaps[2] < 0.1);
    }

    #[test]
    fn paths_keep_the_component(c in 1usize..3, chop_at in 0usize..4, shift in -2i64..=2, fraction in 0.1f64..0.9) {
        let a = polygon_realizing_fan(&standard_fan(c)).unwrap();
        let fan = fan_of_polygon(&a).unwrap();
        let chop = FanMove::Chop { index: chop_at % fan.len() };
        prop_assume!(apply_move(&fan, chop).is_ok());
        let b = move_polygon_family(&a, chop, &q(1, 1)).unwrap();
        let b = stfan_core::polygeom::twist(&b, shift).unwrap();
        let (m, m2) = (on(a, fraction), on(b, 1.0 - fraction));
        let path = connectivity_path(&m, &m2, 12).unwrap();
        let k0 = m.polygon().twisting_index();
        for s in &path {
            prop_assert_eq!(s.m_f(), c);
            let k = s.polygon().twisting_index();
            prop_assert!(k.iter().zip(&k0).all(|(x, y)| x - y == k[0] - k0[0]));
        }
    }
}
