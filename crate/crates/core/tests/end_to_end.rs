use hyperrcd::io::{self, IngestOptions};
use hyperrcd::{detect, generate, nmi, GenParams, Mode, RunConfig, RunReport};

#[test]
fn planted_blocks_through_text_format() {
    let (g, truth) = generate(&GenParams {
        n: 60,
        q: 2,
        avg_degree: 8.0,
        p_intra: 0.95,
        seed: 3,
        ..GenParams::default()
    })
    .unwrap();
    let reparsed = io::parse_hg_text(&io::to_hg_text(&g), IngestOptions::default()).unwrap();
    assert_eq!(reparsed, g);
    let truth = io::parse_labels(&io::to_labels(&truth)).unwrap();
    let config = RunConfig {
        iterations: 10,
        ..RunConfig::default()
    };
    let detection = detect(&reparsed, &config, Some(&truth)).unwrap();
    let report = RunReport::new(&reparsed, &config, &detection, Some(&truth), None).unwrap();
    assert_eq!(report.nmi, Some(detection.sweep.best_entry().score));
    assert!(report.nmi.unwrap() > 0.8, "{report:?}");
}

#[test]
fn unsupervised_mode_runs_without_labels() {
    let (g, truth) = generate(&GenParams {
        n: 50,
        q: 2,
        avg_degree: 6.0,
        p_intra: 0.9,
        seed: 8,
        ..GenParams::default()
    })
    .unwrap();
    let config = RunConfig {
        iterations: 8,
        mode: Mode::Unsupervised,
        ..RunConfig::default()
    };
    let detection = detect(&g, &config, None).unwrap();
    let score = nmi(detection.partition(), &truth).unwrap();
    assert!((0.0..=1.0).contains(&score));
    assert_eq!(detection.trajectory.len(), 9);
}
