mod common;

use common::{naive, signal};
use genclu::metrics::{discontinuity, growth_to_infinity, instability, minmax};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * (1.0 + b.abs())
}

#[test]
fn hand_cases() {
    let pulse = signal(&[0.0, 0.0, 5.0, 0.0, 0.0], 1.0);
    assert_eq!(discontinuity(&pulse).unwrap(), 5.0);
    assert_eq!(instability(&signal(&[0.0, 1.0, 0.0, 1.0], 1.0)), 3.0);
    assert_eq!(growth_to_infinity(&signal(&[100.0, -3.0, 2.0], 1.0)), 3.0);
    assert_eq!(minmax(&signal(&[100.0, -3.0, 2.0], 1.0)), 5.0);
}

#[test]
fn random_signals_match_reference() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..200 {
        let len = rng.random_range(3..=50);
        let dt = if rng.random_bool(0.5) { 0.1 } else { 1.0 };
        let scale = 10f64.powi(rng.random_range(-2..=3));
        let v: Vec<f64> = (0..len).map(|_| rng.random_range(-scale..scale)).collect();
        let s = signal(&v, dt);
        assert!(close(discontinuity(&s).unwrap(), naive::dis(&v, dt)));
        assert!(close(instability(&s), naive::ins(&v)));
        assert!(close(growth_to_infinity(&s), naive::inf(&v)));
        assert!(close(minmax(&s), naive::minmax(&v)));
    }
}

#[test]
fn shift_invariance() {
    let v = [1.0, 4.0, -2.0, 7.0, 7.0, 0.5];
    let shifted: Vec<f64> = v.iter().map(|x| x + 50.0).collect();
    let (a, b) = (signal(&v, 0.1), signal(&shifted, 0.1));
    assert!(close(
        discontinuity(&a).unwrap(),
        discontinuity(&b).unwrap()
    ));
    assert!(close(instability(&a), instability(&b)));
    assert!(close(minmax(&a), minmax(&b)));
    assert!(growth_to_infinity(&a) != growth_to_infinity(&b));
}

#[test]
fn too_short_for_discontinuity() {
    assert!(discontinuity(&signal(&[1.0, 2.0], 1.0)).is_err());
}
