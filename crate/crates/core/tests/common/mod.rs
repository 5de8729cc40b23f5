#![allow(dead_code)]

use qwstat_core::coin::{self, CoinMatrix};
use qwstat_core::C64;
use rand::Rng;
use rand_distr::StandardNormal;

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn random_complex<R: Rng>(rng: &mut R) -> C64 {
    c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
}

/// Haar-distributed 3×3 unitary: Gram–Schmidt on complex Gaussian rows.
pub fn haar_unitary<R: Rng>(rng: &mut R) -> [[C64; 3]; 3] {
    let mut rows = [[c(0.0, 0.0); 3]; 3];
    for i in 0..3 {
        let mut v: [C64; 3] = std::array::from_fn(|_| c(rng.sample(StandardNormal), rng.sample(StandardNormal)));
        for prev in rows.iter().take(i) {
            let proj: C64 = (0..3).map(|k| prev[k].conj() * v[k]).sum();
            for k in 0..3 {
                v[k] -= proj * prev[k];
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        rows[i] = v.map(|z| z / norm);
    }
    rows
}

/// `e^{iθ} D A D†` with `D` a random diagonal unitary.
pub fn phase_conjugate<R: Rng>(rng: &mut R, coin: &CoinMatrix) -> CoinMatrix {
    let theta: f64 = rng.random_range(0.0..std::f64::consts::TAU);
    let d: [C64; 3] = std::array::from_fn(|_| C64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU)));
    let global = C64::from_polar(1.0, theta);
    let e = coin.entries();
    let entries = std::array::from_fn(|i| std::array::from_fn(|j| global * d[i] * e[i][j] * d[j].conj()));
    coin::make_coin(entries, 1e-12).expect("conjugation preserves unitarity")
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}
