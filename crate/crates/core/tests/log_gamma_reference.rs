use siegel::special::log_gamma;

#[test]
fn within_four_ulps_of_reference() {
    let text = include_str!("data/log_gamma_ref.txt");
    let mut worst = (0.0f64, 0.0f64);
    let mut n = 0;
    for line in text.lines().filter(|l| !l.starts_with('#')) {
        let (bits, want) = line.split_once(' ').unwrap();
        let x = f64::from_bits(u64::from_str_radix(bits, 16).unwrap());
        let want: f64 = want.parse().unwrap();
        let got = log_gamma(x).unwrap();
        let ulp = (got - want).abs() / (want.abs() * f64::EPSILON).max(f64::MIN_POSITIVE);
        if ulp > worst.0 {
            worst = (ulp, x);
        }
        n += 1;
    }
    assert_eq!(n, 10_000);
    assert!(worst.0 <= 4.0, "worst {} ulp at x = {:e}", worst.0, worst.1);
}

#[test]
fn single_precision_tracks_double() {
    for i in 1..1000 {
        let x = i as f32 / 1000.0;
        let a = log_gamma(x).unwrap() as f64;
        let b = log_gamma(x as f64).unwrap();
        assert!(
            (a - b).abs() <= 4.0 * f32::EPSILON as f64 * b.abs().max(1.0),
            "x={x}"
        );
    }
}
