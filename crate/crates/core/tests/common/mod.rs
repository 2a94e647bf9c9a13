//! Shared simulation helpers for the integration suites.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Deterministic standard-normal draws (Box-Muller over ChaCha).
pub struct Gaussian {
    rng: ChaCha8Rng,
    spare: Option<f64>,
}

impl Gaussian {
    pub fn new(seed: u64) -> Self {
        Gaussian { rng: ChaCha8Rng::seed_from_u64(seed), spare: None }
    }

    pub fn next(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        // u1 in (0, 1] so the log is finite
        let u1: f64 = 1.0 - self.rng.gen::<f64>();
        let u2: f64 = self.rng.gen();
        let r = (-2.0 * u1.ln()).sqrt();
        let theta = 2.0 * std::f64::consts::PI * u2;
        self.spare = Some(r * theta.sin());
        r * theta.cos()
    }

    pub fn series(&mut self, n: usize) -> Vec<f64> {
        (0..n).map(|_| self.next()).collect()
    }
}

/// `y_t = phi·y_{t−1} + ε_t` with zero start.
pub fn simulate_ar1(phi: f64, n: usize, seed: u64) -> Vec<f64> {
    let mut g = Gaussian::new(seed);
    let mut y = Vec::with_capacity(n);
    let mut prev = 0.0;
    for _ in 0..n {
        let v = phi * prev + g.next();
        y.push(v);
        prev = v;
    }
    y
}

/// `y_t = ε_t + theta·ε_{t−1}`.
pub fn simulate_ma1(theta: f64, n: usize, seed: u64) -> Vec<f64> {
    let mut g = Gaussian::new(seed);
    let mut y = Vec::with_capacity(n);
    let mut prev_eps = 0.0;
    for _ in 0..n {
        let eps = g.next();
        y.push(eps + theta * prev_eps);
        prev_eps = eps;
    }
    y
}

/// Pure random walk from zero.
pub fn simulate_random_walk(n: usize, seed: u64) -> Vec<f64> {
    let mut g = Gaussian::new(seed);
    let mut y = Vec::with_capacity(n);
    let mut level = 0.0;
    for _ in 0..n {
        level += g.next();
        y.push(level);
    }
    y
}

pub fn white_noise(n: usize, seed: u64) -> Vec<f64> {
    Gaussian::new(seed).series(n)
}
