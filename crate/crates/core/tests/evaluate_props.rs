use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use strokekit::evaluate::ahp::priority_vector;
use strokekit::evaluate::{
    ahp_weights, ahp_weights_with, build_profile, build_profiles, score_indicator, score_window, AhpMatrix,
    AhpMethod, IndicatorKind, IndicatorSpec, IntervalMode, EvaluateError,
};
use strokekit::segment::MotionWindow;
use strokekit::{SampleFrame, StrokeLabel};

fn noisy_window(rng: &mut ChaCha8Rng, label: StrokeLabel, offset: f64) -> MotionWindow {
    let frames = (0..200)
        .map(|i| {
            let t = i as f64 * 0.01;
            let n = |rng: &mut ChaCha8Rng| rng.sample::<f64, _>(StandardNormal) * 0.2;
            SampleFrame::new(
                t,
                [5.0 * (3.0 * t).sin() + n(rng), 2.0 + n(rng), 9.81 + n(rng)],
                [100.0 * (3.0 * t).cos(), n(rng), n(rng)],
                [10.0 + offset + n(rng), -5.0 + n(rng), 30.0 + n(rng)],
            )
        })
        .collect();
    MotionWindow::new(0, frames, 0.01).with_label(label)
}

fn spec(kind: IndicatorKind) -> IndicatorSpec {
    IndicatorSpec { kind, center: 2.0, up: 4.0, down: 0.0, lo: 1.0, hi: 3.0, k1: 0.5, k2: 2.0 }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn maximal_score_is_monotone(a in -50.0f64..50.0, b in -50.0f64..50.0) {
        let s = spec(IndicatorKind::Maximal);
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let (p, q) = (score_indicator(lo, &s, IntervalMode::Continuous).unwrap(), score_indicator(hi, &s, IntervalMode::Continuous).unwrap());
        prop_assert!(p <= q);
        prop_assert!((0.0..=1.0).contains(&p) && (0.0..=1.0).contains(&q));
    }

    #[test]
    fn interval_score_falls_with_distance(d1 in 0.0f64..20.0, d2 in 0.0f64..20.0) {
        let s = spec(IndicatorKind::Interval);
        let (near, far) = if d1 <= d2 { (d1, d2) } else { (d2, d1) };
        for (x_near, x_far) in [(s.hi + near, s.hi + far), (s.lo - near, s.lo - far)] {
            let a = score_indicator(x_near, &s, IntervalMode::Continuous).unwrap();
            let b = score_indicator(x_far, &s, IntervalMode::Continuous).unwrap();
            prop_assert!(a >= b);
            prop_assert!((0.0..=1.0).contains(&b));
        }
    }

    #[test]
    fn scaling_a_matrix_keeps_its_priorities(seed in 0u64..10_000, c in 0.01f64..100.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.random_range(2..8);
        let a: Vec<Vec<f64>> = (0..n).map(|_| (0..n).map(|_| rng.random_range(0.1..9.0)).collect()).collect();
        let scaled: Vec<Vec<f64>> = a.iter().map(|r| r.iter().map(|v| v * c).collect()).collect();
        for method in [AhpMethod::ColumnNormalized, AhpMethod::PrincipalEigenvector] {
            let (p, q) = (priority_vector(&a, method), priority_vector(&scaled, method));
            for (x, y) in p.iter().zip(&q) {
                prop_assert!((x - y).abs() <= 1e-9);
            }
        }
    }

    #[test]
    fn consistent_matrices_have_zero_ratio(w in prop::collection::vec(0.1f64..10.0, 3..9)) {
        let a: Vec<Vec<f64>> = w.iter().map(|x| w.iter().map(|y| x / y).collect()).collect();
        let m = AhpMatrix::new(a).unwrap();
        for method in [AhpMethod::ColumnNormalized, AhpMethod::PrincipalEigenvector] {
            let r = ahp_weights_with(&m, method);
            prop_assert!(r.cr.abs() < 1e-9);
            let total: f64 = w.iter().sum();
            for (got, x) in r.weights.iter().zip(&w) {
                prop_assert!((got - x / total).abs() < 1e-9);
            }
        }
    }
}

#[test]
fn profile_centres_are_pooled_means() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let refs: Vec<MotionWindow> = (0..20).map(|_| noisy_window(&mut rng, StrokeLabel::ForehandAttack, 0.0)).collect();
    let p = build_profile(&refs).unwrap();
    // strength x: mean over windows of mean |acc_x|
    let strength_x: f64 = refs
        .iter()
        .map(|w| w.frames.iter().map(|f| f.acc[0].abs()).sum::<f64>() / w.len() as f64)
        .sum::<f64>()
        / refs.len() as f64;
    assert!((p.indicators[0].center - strength_x).abs() < 1e-12);
    // posture z: mean Euler z
    let posture_z: f64 =
        refs.iter().map(|w| w.frames.iter().map(|f| f.angle[2]).sum::<f64>() / w.len() as f64).sum::<f64>() / 20.0;
    assert!((p.indicators[14].center - posture_z).abs() < 1e-12);
    for (i, s) in p.indicators.iter().enumerate() {
        let maximal = matches!(i / 3, 0 | 2);
        assert_eq!(s.kind == IndicatorKind::Maximal, maximal, "indicator {i}");
        assert!(s.down <= s.lo && s.lo <= s.hi && s.hi <= s.up);
    }
}

#[test]
fn reference_windows_outscore_shifted_ones() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let refs: Vec<MotionWindow> = (0..30).map(|_| noisy_window(&mut rng, StrokeLabel::BackhandChop, 0.0)).collect();
    let p = build_profile(&refs).unwrap();
    let k = ahp_weights(&AhpMatrix::level_comparison()).weights;
    let good = score_window(&noisy_window(&mut rng, StrokeLabel::BackhandChop, 0.0), &p, &k, IntervalMode::Continuous).unwrap();
    let bad = score_window(&noisy_window(&mut rng, StrokeLabel::BackhandChop, 15.0), &p, &k, IntervalMode::Continuous).unwrap();
    assert!(good.total > bad.total, "{} vs {}", good.total, bad.total);
    assert!(good.q[4] > bad.q[4]);
    assert!((0.0..=1.0).contains(&good.total) && (0.0..=1.0).contains(&bad.total));
}

#[test]
fn profile_rules() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let a = noisy_window(&mut rng, StrokeLabel::ForehandPush, 0.0);
    let b = noisy_window(&mut rng, StrokeLabel::BackhandPush, 0.0);
    assert_eq!(build_profile(std::slice::from_ref(&a)), Err(EvaluateError::TooFew(1)));
    assert_eq!(build_profile(&[a.clone(), b.clone()]), Err(EvaluateError::MixedLabels));
    let set = build_profiles(&[a.clone(), a.clone(), b.clone(), b.clone()]).unwrap();
    assert_eq!(set.len(), 2);
    let k = [0.2; 5];
    assert!(matches!(
        score_window(&b, &set[&StrokeLabel::ForehandPush], &k, IntervalMode::Continuous),
        Err(EvaluateError::ProfileMismatch { .. })
    ));
}
