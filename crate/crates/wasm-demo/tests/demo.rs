use fastsketch::analysis::exact_rip_constant;
use fastsketch::seed::derive_seed;
use fastsketch::sketch::build_sketch;
use fastsketch::EnsembleKind;
use fastsketch_wasm_demo::demo::{jl_histogram, recovery_demo, rip_curve};

#[test]
fn rip_curve_is_exact_for_small_problems() {
    let ms = [4, 8, 16];
    let curve = rip_curve(EnsembleKind::PartialFourier, 32, 2, 2, &ms, 9).unwrap();
    assert_eq!(curve.len(), 3);
    for (i, p) in curve.iter().enumerate() {
        assert!(p.exact);
        let op = build_sketch(32, ms[i], 2, EnsembleKind::PartialFourier, derive_seed(9, i as u64, "operator")).unwrap();
        assert_eq!(p.epsilon, exact_rip_constant(&op.densify().unwrap(), 2).unwrap().epsilon);
    }
}

#[test]
fn rip_curve_falls_back_to_sampling() {
    let curve = rip_curve(EnsembleKind::PartialHadamard, 256, 4, 2, &[32], 1).unwrap();
    assert!(!curve[0].exact);
    assert!(curve[0].epsilon > 0.0);
}

#[test]
fn recovery_demo_recovers_easy_instances() {
    let r = recovery_demo(EnsembleKind::PartialFourier, 128, 48, 4, 3, 5).unwrap();
    assert_eq!(r.truth.len(), 128);
    assert_eq!(r.truth.iter().filter(|v| **v != 0.0).count(), 3);
    assert!(r.iht_relative_error < 1e-6, "{}", r.iht_relative_error);
    assert!(r.cosamp_relative_error < 1e-6, "{}", r.cosamp_relative_error);
}

#[test]
fn jl_histogram_accounts_for_every_pair() {
    let h = jl_histogram(EnsembleKind::PartialCirculant, 256, 64, 4, 20, 12, 3).unwrap();
    assert_eq!(h.ratios.len(), 20 * 19 / 2);
    assert_eq!(h.counts.iter().sum::<u64>(), h.ratios.len() as u64);
    assert_eq!(h.edges.len(), 13);
    let hi = h.ratios.iter().copied().fold(0.0, f64::max);
    let lo = h.ratios.iter().copied().fold(f64::INFINITY, f64::min);
    assert_eq!(h.epsilon_hat, (hi - 1.0).max(1.0 - lo));
    assert!(h.edges[0] <= lo && *h.edges.last().unwrap() >= hi);
    assert!(jl_histogram(EnsembleKind::PartialFourier, 64, 8, 2, 1, 4, 0).is_err());
}
