use proptest::prelude::*;

use wmsn::predictor::{parse_trace, replay, steps_to_csv, update_and_predict, PredictorParams, PredictorState};

proptest! {
    #[test]
    fn blend_and_variance_stay_in_range(
        eps in 1e-3f64..1e3,
        v0 in 0.0f64..100.0,
        trace in prop::collection::vec(0.0f64..1000.0, 2..60),
    ) {
        let params = PredictorParams::new(eps, 1.0).unwrap();
        let steps = replay(&trace, &params, PredictorState::with_prior(0.0, v0)).unwrap();
        for s in &steps[1..] {
            prop_assert!(s.blend > 0.0 && s.blend < 1.0);
            prop_assert!(s.v >= 0.0);
            prop_assert!(s.prediction >= 0.0);
            prop_assert_eq!(s.prediction, s.raw_prediction.max(0.0));
        }
    }

    #[test]
    fn constant_trace_predicts_itself(r in 0.0f64..1000.0, n in 2usize..40) {
        let steps = replay(&vec![r; n], &PredictorParams::default(), PredictorState::default()).unwrap();
        for s in &steps {
            prop_assert!((s.prediction - r).abs() < 1e-9);
        }
    }

    #[test]
    fn variance_sequence_ignores_measurements(a in prop::collection::vec(0.0f64..500.0, 10), b in prop::collection::vec(0.0f64..500.0, 10)) {
        let params = PredictorParams::default();
        let va: Vec<f64> = replay(&a, &params, PredictorState::default()).unwrap().iter().map(|s| s.v).collect();
        let vb: Vec<f64> = replay(&b, &params, PredictorState::default()).unwrap().iter().map(|s| s.v).collect();
        prop_assert_eq!(va, vb);
    }
}

#[test]
fn hand_evaluated_step() {
    let state = PredictorState { a_hat: 0.0, v: 1.0, last_rba: 85.0, initialized: true };
    let (next, step) = update_and_predict(&state, &PredictorParams::new(1.0, 1.0).unwrap(), 70.0).unwrap();
    assert_eq!(step.accel, -15.0);
    assert!((step.blend - 2.0 / 3.0).abs() < 1e-15);
    assert!((next.a_hat + 10.0).abs() < 1e-12);
    assert!((next.v - 2.0 / 3.0).abs() < 1e-15);
    assert!((step.prediction - 60.0).abs() < 1e-12);
}

#[test]
fn steep_drop_clamps_at_zero() {
    let steps = replay(&[100.0, 10.0], &PredictorParams::new(1.0, 1.0).unwrap(), PredictorState::default()).unwrap();
    assert!(steps[1].raw_prediction < 0.0);
    assert_eq!(steps[1].prediction, 0.0);
}

#[test]
fn negative_measurement_rejected() {
    assert!(update_and_predict(&PredictorState::default(), &PredictorParams::default(), -1.0).is_err());
}

#[test]
fn trace_parse_and_csv_shape() {
    let values = parse_trace("85\n\n70\n 55 \n40\n").unwrap();
    let steps = replay(&values, &PredictorParams::new(1.0, 1.0).unwrap(), PredictorState::default()).unwrap();
    let csv = steps_to_csv(&steps);
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "step,a,B,a_hat,v,R_hat");
    assert_eq!(lines.len(), 5);
    assert!(lines.iter().all(|l| l.split(',').count() == 6));
    assert!(lines[4].ends_with(",25.71429"), "{}", lines[4]);
    assert!(parse_trace("1\nabc\n").is_err());
}
