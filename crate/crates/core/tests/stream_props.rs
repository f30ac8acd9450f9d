use proptest::prelude::*;
use strokekit::ingest::{parse_series, validate_series};
use strokekit::segment::{slide_windows, WindowSpec};
use strokekit::synthgen::{generate, template, GenConfig, TEMPLATE_LEN};
use strokekit::{SampleFrame, SensorSeries, StrokeLabel};

fn frames(n: usize, period: f64) -> Vec<SampleFrame> {
    (0..n)
        .map(|i| {
            let t = i as f64 * period;
            SampleFrame::new(t, [t.sin(), -t, 9.81], [1e-7 * t, 3.0, t * t], [0.1, 0.2, 1.0 / (1.0 + t)])
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn csv_round_trip_is_exact(n in 1usize..200, period in 0.001f64..0.1) {
        let s = SensorSeries::new(frames(n, period), period).unwrap();
        let back = parse_series(&s.to_csv()).unwrap();
        prop_assert_eq!(back, s);
    }

    #[test]
    fn window_count_and_overlap(n in 200usize..5000) {
        let s = SensorSeries::new(frames(n, 0.01), 0.01).unwrap();
        let w = slide_windows(&s, WindowSpec::default()).unwrap();
        prop_assert_eq!(w.len(), (n - 200) / 100 + 1);
        for pair in w.windows(2) {
            prop_assert_eq!(pair[0].end_index() - pair[1].start_index, 100);
            prop_assert_eq!(pair[1].frames[0], pair[0].frames[100]);
        }
    }
}

#[test]
fn short_series_has_no_windows() {
    let s = SensorSeries::new(frames(199, 0.01), 0.01).unwrap();
    assert!(slide_windows(&s, WindowSpec::default()).is_err());
}

#[test]
fn default_corpus_counts() {
    let c = generate(&GenConfig::default()).unwrap();
    assert_eq!(c.strokes().count(), 600);
    for l in StrokeLabel::ALL {
        assert_eq!(c.strokes().filter(|s| s.label == Some(l)).count(), 100);
    }
    // dropouts leave gaps that validation reports
    let gaps = validate_series(&c.series);
    assert!(!gaps.is_empty());
    assert_eq!(c.series.len() + gaps.iter().map(|g| g.missing).sum::<usize>(), c.segments.last().unwrap().end);
}

#[test]
fn corpus_without_dropouts_parses() {
    let cfg = GenConfig { strokes_per_class: 3, dropout_rate: 0.0, ..Default::default() };
    let c = generate(&cfg).unwrap();
    let back = parse_series(&c.series.to_csv()).unwrap();
    assert_eq!(back, c.series);
    assert!(back.is_uniform());
}

#[test]
fn templates_are_nearest_to_themselves() {
    let cfg = GenConfig { strokes_per_class: 5, noise_sigma: 0.0, spike_rate: 0.0, dropout_rate: 0.0, ..Default::default() };
    let c = generate(&cfg).unwrap();
    let templates: Vec<[Vec<f64>; 9]> = StrokeLabel::ALL.iter().map(|&l| template(l)).collect();
    for seg in c.strokes() {
        let dist = |t: &[Vec<f64>; 9]| -> f64 {
            (0..9)
                .map(|ch| {
                    let x = c.series.channel(ch);
                    (0..TEMPLATE_LEN).map(|i| (x[seg.start + i] - t[ch][i]).powi(2)).sum::<f64>()
                })
                .sum()
        };
        let best = (0..6).min_by(|&a, &b| dist(&templates[a]).total_cmp(&dist(&templates[b]))).unwrap();
        assert_eq!(Some(StrokeLabel::from_code(best).unwrap()), seg.label);
    }
    // and distinct from each other by a wide margin
    for a in 0..6 {
        for b in a + 1..6 {
            let d: f64 = (0..9)
                .map(|ch| templates[a][ch].iter().zip(&templates[b][ch]).map(|(p, q)| (p - q).powi(2)).sum::<f64>())
                .sum();
            assert!(d > 1e3, "templates {a} and {b} too close: {d}");
        }
    }
}
