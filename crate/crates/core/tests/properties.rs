mod common;

use proptest::prelude::*;

use linentropy::bloch::gellmann_basis;
use linentropy::bounds::{classic_bounds, inverted_lower_f, isa_h, purity_f, renyi_f, sharp_f};
use linentropy::verify::structural::isa_gap_defect;
use linentropy::verify::{sample_state, substream, Ensemble};
use linentropy::{boundary_state_for, evaluate_all, DimPair, EntropyPoint};

fn dims() -> impl Strategy<Value = (usize, usize)> {
    (2usize..=5, 2usize..=5)
}

/// Dimensions with a point `(x, y)` of the domain rectangle.
fn domain() -> impl Strategy<Value = (usize, usize, f64, f64)> {
    dims().prop_flat_map(|(da, db)| {
        (
            Just(da),
            Just(db),
            0.0..=common::big_d(da),
            0.0..=common::big_d(db),
        )
    })
}

proptest! {
    #[test]
    fn sharp_matches_reference((da, db, x, y) in domain()) {
        let dims = DimPair::new(da, db).unwrap();
        let (f, _) = sharp_f(x, y, dims).unwrap();
        prop_assert!((f - common::sharp(x, y, da, db)).abs() < 1e-12);
    }

    #[test]
    fn sharp_is_tighter_than_older_bounds((da, db, x, y) in domain()) {
        let dims = DimPair::new(da, db).unwrap();
        let (f, _) = sharp_f(x, y, dims).unwrap();
        let (sa, al) = classic_bounds(x, y);
        prop_assert!(f <= sa + 1e-12);
        prop_assert!(f <= isa_h(x, y, dims).unwrap() + 1e-12);
        prop_assert!(f <= common::appel(x, y, da, db) + 1e-12);
        prop_assert!(f >= al - 1e-12);
        prop_assert!(f <= common::big_d(da * db) + 1e-12);
    }

    #[test]
    fn sharp_is_monotone((da, db, x, y) in domain(), dx in 0.0..0.1f64, dy in 0.0..0.1f64) {
        let dims = DimPair::new(da, db).unwrap();
        let x2 = (x + dx).min(dims.max_a());
        let y2 = (y + dy).min(dims.max_b());
        prop_assert!(sharp_f(x2, y2, dims).unwrap().0 >= sharp_f(x, y, dims).unwrap().0 - 1e-12);
    }

    #[test]
    fn forms_are_substitutions((da, db, x, y) in domain()) {
        let dims = DimPair::new(da, db).unwrap();
        let (f, branch) = sharp_f(x, y, dims).unwrap();
        let (p, pb) = purity_f(1.0 - x, 1.0 - y, dims).unwrap();
        prop_assert!((p - (1.0 - f)).abs() < 1e-12);
        prop_assert_eq!(branch, pb);
        let (r, _) = renyi_f(-(1.0 - x).log2(), -(1.0 - y).log2(), dims).unwrap();
        prop_assert!((r + (1.0 - f).log2()).abs() < 1e-9);
    }

    #[test]
    fn inverted_matches_reference((da, db, x, y) in domain()) {
        let dims = DimPair::new(da, db).unwrap();
        let v = inverted_lower_f(x, y, dims).unwrap().value;
        prop_assert!((v - common::inverted(x, y, da, db)).abs() < 1e-9);
        prop_assert!(v >= (x - y).abs() - 1e-12);
    }

    #[test]
    fn boundary_states_hit_their_target((da, db, x, y) in domain()) {
        let dims = DimPair::new(da, db).unwrap();
        let rho = boundary_state_for(x, y, dims).unwrap();
        let p = EntropyPoint::of_state(&rho).unwrap();
        let target = EntropyPoint::new(x, y, common::sharp(x, y, da, db));
        prop_assert!(p.max_abs_diff(&target) < 1e-8);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn random_states_satisfy_every_bound(
        (da, db) in (2usize..=3, 2usize..=4),
        seed in any::<u64>(),
        kind in 0usize..3,
    ) {
        let ensemble = [Ensemble::HilbertSchmidt, Ensemble::Pure, Ensemble::Rank(2)][kind];
        let rho = sample_state(ensemble, &[da, db], &mut substream(seed, 0)).unwrap();
        let report = evaluate_all(&rho).unwrap();
        prop_assert!(report.all_satisfied(), "{}", report);
        let p = report.point;
        prop_assert!(p.z <= common::sharp(p.x, p.y, da, db) + 1e-9);
        prop_assert!(p.z >= common::inverted(p.x, p.y, da, db) - 1e-9);
    }

    #[test]
    fn isa_gap_is_correlation_weight((da, db) in (2usize..=3, 2usize..=3), seed in any::<u64>()) {
        let rho = sample_state(Ensemble::HilbertSchmidt, &[da, db], &mut substream(seed, 1)).unwrap();
        let defect = isa_gap_defect(&rho, &gellmann_basis(da).unwrap(), &gellmann_basis(db).unwrap()).unwrap();
        prop_assert!(defect < 1e-10);
    }
}
