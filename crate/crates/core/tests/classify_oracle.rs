use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use strokekit::classify::{
    gaussian_kernel, mlp_forward, mlp_init, mlp_predict, mlp_train, train_dag, Classifier, KernelSvmParams,
    MlpModel, MlpTrainParams,
};
use strokekit::StrokeLabel;

fn blobs(seed: u64, per_class: usize, dim: usize, sigma: f64) -> Vec<(Vec<f64>, StrokeLabel)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let centers: Vec<Vec<f64>> = (0..6).map(|c| (0..dim).map(|d| if d == c % dim { 4.0 } else { 0.0 } + if d == (c + 1) % dim && c >= dim { 4.0 } else { 0.0 }).collect()).collect();
    let mut out = Vec::new();
    for (c, center) in centers.iter().enumerate() {
        for _ in 0..per_class {
            let x = center.iter().map(|m| m + sigma * rng.sample::<f64, _>(StandardNormal)).collect();
            out.push((x, StrokeLabel::from_code(c).unwrap()));
        }
    }
    out
}

fn loss(m: &MlpModel, x: &[f64], y: StrokeLabel) -> f64 {
    m.loss_and_gradient(x, y).unwrap().0
}

#[test]
fn gradient_matches_central_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut m = mlp_init(10, 3).unwrap();
    for b in m.biases.iter_mut().flatten() {
        *b = 0.1 * rng.sample::<f64, _>(StandardNormal);
    }
    let x: Vec<f64> = (0..10).map(|_| rng.sample(StandardNormal)).collect();
    let y = StrokeLabel::BackhandPush;
    let (_, grad) = m.loss_and_gradient(&x, y).unwrap();
    let eps = 1e-4;
    let check = |analytic: f64, numeric: f64| {
        let diff = (analytic - numeric).abs();
        diff <= 1e-4 * analytic.abs().max(numeric.abs()) || diff <= 1e-9
    };
    for l in 0..m.layers() {
        for _ in 0..100 {
            let i = rng.random_range(0..m.weights[l].len());
            let mut p = m.clone();
            p.weights[l][i] += eps;
            let mut q = m.clone();
            q.weights[l][i] -= eps;
            let numeric = (loss(&p, &x, y) - loss(&q, &x, y)) / (2.0 * eps);
            assert!(check(grad.weights[l][i], numeric), "layer {l} w{i}: {} vs {numeric}", grad.weights[l][i]);
        }
        for i in 0..m.biases[l].len().min(20) {
            let mut p = m.clone();
            p.biases[l][i] += eps;
            let mut q = m.clone();
            q.biases[l][i] -= eps;
            let numeric = (loss(&p, &x, y) - loss(&q, &x, y)) / (2.0 * eps);
            assert!(check(grad.biases[l][i], numeric), "layer {l} b{i}");
        }
    }
}

#[test]
fn mlp_learns_separable_blobs() {
    let train = blobs(1, 30, 4, 0.5);
    let test = blobs(2, 10, 4, 0.5);
    let m = mlp_init(4, 0).unwrap();
    let report = mlp_train(&m, &train, &MlpTrainParams { epochs: 60, ..Default::default() }).unwrap();
    assert!(report.epoch_losses.last().unwrap() < &report.epoch_losses[0]);
    let correct = test.iter().filter(|(x, y)| mlp_predict(&report.model, x).unwrap() == *y).count();
    assert!(correct as f64 / test.len() as f64 >= 0.95, "{correct}/{}", test.len());
}

#[test]
fn mlp_training_is_reproducible() {
    let train = blobs(3, 10, 4, 0.5);
    let p = MlpTrainParams { epochs: 5, seed: 9, ..Default::default() };
    let a = mlp_train(&mlp_init(4, 1).unwrap(), &train, &p).unwrap();
    let b = mlp_train(&mlp_init(4, 1).unwrap(), &train, &p).unwrap();
    assert_eq!(a, b);
}

/// Max-wins voting over the same pairwise models; ties go to the lower code.
fn vote(dag: &strokekit::classify::DagSvmModel, x: &[f64]) -> StrokeLabel {
    let mut votes = [0usize; 6];
    for (i, &a) in StrokeLabel::ALL.iter().enumerate() {
        for &b in &StrokeLabel::ALL[i + 1..] {
            votes[dag.duel(a, b, x).code()] += 1;
        }
    }
    let best = (0..6).max_by(|&i, &j| votes[i].cmp(&votes[j]).then(j.cmp(&i))).unwrap();
    StrokeLabel::from_code(best).unwrap()
}

#[test]
fn dag_agrees_with_voting_on_clean_data() {
    let train = blobs(4, 20, 6, 0.4);
    let test = blobs(5, 10, 6, 0.4);
    let dag = train_dag(&train, &StrokeLabel::ALL, &KernelSvmParams::default()).unwrap();
    assert_eq!(dag.models.len(), 15);
    for (x, y) in &test {
        let (label, path) = dag.predict_traced(x);
        assert_eq!(path.len(), 5);
        assert_eq!(label, vote(&dag, x));
        assert_eq!(label, *y);
    }
}

#[test]
fn classifier_json_round_trip() {
    let train = blobs(6, 8, 3, 0.3);
    let dag = Classifier::Dagsvm(train_dag(&train, &StrokeLabel::ALL, &KernelSvmParams::default()).unwrap());
    let mlp = Classifier::Mlp(mlp_init(3, 0).unwrap());
    for c in [dag, mlp] {
        let text = serde_json::to_string(&c).unwrap();
        let back: Classifier = serde_json::from_str(&text).unwrap();
        assert_eq!(back, c);
        assert!(text.contains(&format!("\"kind\":\"{}\"", c.kind())));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn probabilities_are_a_distribution(seed in 0u64..10_000, scale in 0.0f64..100.0) {
        let m = mlp_init(5, seed).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        let x: Vec<f64> = (0..5).map(|_| scale * rng.sample::<f64, _>(StandardNormal)).collect();
        let p = mlp_forward(&m, &x).unwrap();
        prop_assert!((p.iter().sum::<f64>() - 1.0).abs() <= 1e-12);
        prop_assert!(p.iter().all(|&v| v > 0.0));
    }

    #[test]
    fn kernel_is_symmetric_and_bounded(
        u in prop::collection::vec(-5.0f64..5.0, 4),
        v in prop::collection::vec(-5.0f64..5.0, 4),
        gamma in 0.001f64..10.0,
    ) {
        let k = gaussian_kernel(&u, &v, gamma);
        prop_assert_eq!(k, gaussian_kernel(&v, &u, gamma));
        prop_assert!(k > 0.0 || gamma * u.iter().zip(&v).map(|(a, b)| (a - b).powi(2)).sum::<f64>() > 700.0);
        prop_assert!(k <= 1.0);
        prop_assert_eq!(gaussian_kernel(&u, &u, gamma), 1.0);
    }

    #[test]
    fn kernel_gram_matrix_is_positive_semidefinite(seed in 0u64..1000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pts: Vec<Vec<f64>> = (0..6).map(|_| (0..3).map(|_| rng.sample(StandardNormal)).collect()).collect();
        let c: Vec<f64> = (0..6).map(|_| rng.sample(StandardNormal)).collect();
        let mut q = 0.0;
        for i in 0..6 {
            for j in 0..6 {
                q += c[i] * c[j] * gaussian_kernel(&pts[i], &pts[j], 0.7);
            }
        }
        prop_assert!(q >= -1e-10);
    }
}
