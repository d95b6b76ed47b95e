#![allow(dead_code)]

use std::path::PathBuf;

use genclu::signal::Signal;

pub fn models_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("models")
}

pub fn bundled_models() -> Vec<PathBuf> {
    let mut out: Vec<PathBuf> = std::fs::read_dir(models_dir())
        .expect("models directory")
        .map(|e| e.expect("dir entry").path())
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    out.sort();
    out
}

/// Straight transcriptions of the four anti-pattern formulas, written
/// without sharing code with the library.
pub mod naive {
    pub fn dis(v: &[f64], dt: f64) -> f64 {
        let k = v.len() - 1;
        let mut best = 0.0;
        for w in 1..=3usize {
            if 2 * w > k {
                continue;
            }
            let mut j = w;
            while j + w <= k {
                let lc = (v[j] - v[j - w]).abs() / dt;
                let rc = (v[j + w] - v[j]).abs() / dt;
                let m = if lc < rc { lc } else { rc };
                if m > best {
                    best = m;
                }
                j += 1;
            }
        }
        best
    }

    pub fn ins(v: &[f64]) -> f64 {
        let mut total = 0.0;
        for i in 1..v.len() {
            total += (v[i] - v[i - 1]).abs();
        }
        total
    }

    pub fn inf(v: &[f64]) -> f64 {
        let mut m = 0.0;
        for x in &v[1..] {
            if x.abs() > m {
                m = x.abs();
            }
        }
        m
    }

    pub fn minmax(v: &[f64]) -> f64 {
        let mut lo = v[1];
        let mut hi = v[1];
        for &x in &v[1..] {
            if x < lo {
                lo = x;
            }
            if x > hi {
                hi = x;
            }
        }
        (hi - lo).abs()
    }
}

pub fn signal(values: &[f64], dt: f64) -> Signal {
    Signal::from_samples(values.to_vec(), dt).expect("valid signal")
}
