use egodyn_core::consistency::RuleTable;
use egodyn_core::kinematics::{derive_states, resample_uniform, summarize, PoseSample, SmoothingConfig};
use egodyn_core::oracle::{answer_set, label_all, ThresholdConfig};
use egodyn_core::Question;

/// Raw 20 Hz poses of a left arc at 10 m/s, 0.25 rad/s.
fn arc_poses() -> Vec<PoseSample> {
    let (v, w) = (10.0, 0.25);
    let r = v / w;
    (0..=62)
        .map(|i| {
            let t = i as f64 * 0.05;
            PoseSample {
                t,
                x: r * (w * t).sin(),
                y: r * (1.0 - (w * t).cos()),
                heading: w * t,
            }
        })
        .collect()
}

#[test]
fn poses_to_labels() {
    let grid = resample_uniform(&arc_poses(), 10.0, 3.0).unwrap();
    assert_eq!(grid.len(), 31);
    let seq = derive_states(&grid, &SmoothingConfig::default()).unwrap();
    let summary = summarize(&seq);
    assert!((summary.max_lat_accel - 2.5).abs() < 0.05);

    let cfg = ThresholdConfig::default();
    let answers = answer_set(&seq, &summary, &cfg);
    assert_eq!(answers.get(Question::TurnDirection), Some("left"));
    assert_eq!(answers.get(Question::LateralAccel), Some("yes"));
    assert_eq!(answers.get(Question::HeadingChange), Some("yes"));
    assert_eq!(answers.get(Question::SpeedRegime), Some("urban"));
    assert_eq!(answers.get(Question::BrakingIntensity), Some("none"));
    assert!(answers.is_complete());

    let records = label_all("arc", &seq, &summary, &cfg);
    assert_eq!(records.len(), Question::COUNT);
    assert!(records.iter().all(|r| r.clip_id == "arc"));

    let c = RuleTable::standard().clip("arc", &answers);
    assert_eq!(c.v_c(), 0);
    assert!(c.t_c() > 0);
    assert_eq!(c.contribution, c.t_c() as f64 / 10.0);
}
