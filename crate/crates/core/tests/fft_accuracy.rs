use siegel::arith::{build_power_sequence, PrimeContext};
use siegel::fftcheck::roundtrip_diagnose;

// (q, path taken by the length (q - 1) / 2)
const CASES: [(u64, &str); 7] = [
    (101, "mixed radix"),
    (263, "direct prime"),
    (4007, "rader"),
    (9887, "bluestein"),
    (19583, "rader"),
    (99839, "bluestein"),
    (99991, "mixed radix"),
];

#[test]
fn round_trip_within_model_on_every_path() {
    for (q, path) in CASES {
        let ctx = PrimeContext::new(q).unwrap();
        let seq = build_power_sequence(&ctx).unwrap();
        let r = roundtrip_diagnose(&ctx, &seq, 2f64.powi(-53)).unwrap();
        assert!(
            r.e2_within_bounds(),
            "q={q} ({path}): x {:e} > {:e} or y {:e} > {:e}",
            r.e2_x,
            r.bound_e2_x,
            r.e2_y,
            r.bound_e2_y
        );
        assert!(r.einf_within_bounds(), "q={q} ({path})");
    }
}

#[test]
fn f32_round_trip_within_model() {
    let ctx = PrimeContext::new(4007).unwrap();
    let seq = build_power_sequence(&ctx).unwrap();
    let r = roundtrip_diagnose::<f32>(&ctx, &seq, 2f32.powi(-24)).unwrap();
    assert!(r.e2_within_bounds(), "{r}");
}
