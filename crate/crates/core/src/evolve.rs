//! Brute-force time evolution, used as the oracle for every closed-form state.
//!
//! One step is `Ψ'(x) = PΨ(x+1) + RΨ(x) + QΨ(x−1)`. On a cycle the indices
//! wrap and the step is exactly unitary. A window `[−W, W]` stands in for the
//! integer line: amplitude that would leave the window is dropped and its
//! squared norm is added to the state's leaked total. Sites within `n` of the
//! window edge can feel the truncation after `n` steps, so window checks are
//! confined to the interior that the boundary has not reached yet.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::coin::CoinMatrix;
use crate::error::{Error, Result};
use crate::stationary::{measure_of, WaveState};
use crate::C64;

/// Sites of the walk.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Topology {
    /// Sites `−W..=W`, absorbing truncation at the edges.
    Window(usize),
    /// Sites `0..N` with periodic wrap-around.
    Cycle(usize),
}

impl Topology {
    pub fn validate(self) -> Result<Topology> {
        match self {
            Topology::Window(0) => Err(Error::InvalidTopology("window half-width must be at least 1".into())),
            Topology::Cycle(n) if n < 3 => {
                Err(Error::InvalidTopology(format!("cycle needs at least 3 sites, got {n}")))
            }
            t => Ok(t),
        }
    }

    pub fn len(self) -> usize {
        match self {
            Topology::Window(w) => 2 * w + 1,
            Topology::Cycle(n) => n,
        }
    }

    pub fn is_empty(self) -> bool {
        self.len() == 0
    }

    /// Lowest site label.
    pub fn first_site(self) -> i64 {
        match self {
            Topology::Window(w) => -(w as i64),
            Topology::Cycle(_) => 0,
        }
    }

    pub fn site(self, index: usize) -> i64 {
        self.first_site() + index as i64
    }

    /// Storage index of site `x`; cycles wrap, windows return `None` outside.
    pub fn index(self, x: i64) -> Option<usize> {
        match self {
            Topology::Window(w) => {
                let w = w as i64;
                (-w..=w).contains(&x).then(|| (x + w) as usize)
            }
            Topology::Cycle(n) => Some(x.rem_euclid(n as i64) as usize),
        }
    }

    pub fn sites(self) -> impl Iterator<Item = i64> {
        let first = self.first_site();
        (0..self.len() as i64).map(move |i| first + i)
    }

    /// Sites unaffected by the boundary after `margin` steps (all sites on a cycle).
    pub fn interior(self, margin: usize) -> (i64, i64) {
        match self {
            Topology::Window(w) => {
                let reach = w as i64 - margin as i64;
                (-reach, reach)
            }
            Topology::Cycle(n) => (0, n as i64 - 1),
        }
    }

    pub fn is_cycle(self) -> bool {
        matches!(self, Topology::Cycle(_))
    }
}

impl fmt::Display for Topology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Topology::Window(w) => write!(f, "window:{w}"),
            Topology::Cycle(n) => write!(f, "cycle:{n}"),
        }
    }
}

impl FromStr for Topology {
    type Err = Error;

    fn from_str(s: &str) -> Result<Topology> {
        let (kind, size) = s
            .split_once(':')
            .ok_or_else(|| Error::InvalidTopology(format!("expected window:W or cycle:N, got {s:?}")))?;
        let size: usize = size
            .trim()
            .parse()
            .map_err(|_| Error::InvalidTopology(format!("bad size in {s:?}")))?;
        match kind.trim() {
            "window" => Topology::Window(size).validate(),
            "cycle" => Topology::Cycle(size).validate(),
            other => Err(Error::InvalidTopology(format!("unknown topology kind {other:?}"))),
        }
    }
}

impl Serialize for Topology {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Topology {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

/// Outcome of evolving a state and watching its measure.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StationarityReport {
    pub schema: u32,
    pub topology: Topology,
    pub steps: usize,
    pub max_measure_drift: f64,
    /// Inclusive site range checked at the final step.
    pub interior: (i64, i64),
    pub leaked_norm: f64,
    pub tol: f64,
    pub passed: bool,
}

fn dot(row: &[C64; 3], v: &[C64; 3]) -> C64 {
    row[0] * v[0] + row[1] * v[1] + row[2] * v[2]
}

/// Apply `U_A` once.
pub fn step(coin: &CoinMatrix, state: &WaveState) -> WaveState {
    let topo = state.topology();
    let (p, r, q) = (coin.row(1), coin.row(2), coin.row(3));
    let zero = [C64::new(0.0, 0.0); 3];
    let at = |x: i64| topo.index(x).map_or(zero, |i| state.amplitudes()[i]);

    let amps: Vec<[C64; 3]> = topo
        .sites()
        .map(|x| [dot(&p, &at(x + 1)), dot(&r, &at(x)), dot(&q, &at(x - 1))])
        .collect();

    let mut leaked = state.leaked_norm();
    if let Topology::Window(w) = topo {
        let w = w as i64;
        leaked += dot(&p, &at(-w)).norm_sqr() + dot(&q, &at(w)).norm_sqr();
    }
    WaveState::from_parts(topo, amps, leaked)
}

/// Apply `U_A` `n` times.
pub fn evolve(coin: &CoinMatrix, state: &WaveState, n: usize) -> WaveState {
    let mut current = state.clone();
    for _ in 0..n {
        current = step(coin, &current);
    }
    current
}

/// `max_x max_j |(U_A Ψ)_j(x) − λ Ψ_j(x)|` over all cycle sites, or over the
/// window interior `[−W+1, W−1]`.
pub fn eigen_residual(coin: &CoinMatrix, state: &WaveState, lambda: C64) -> f64 {
    let next = step(coin, state);
    let topo = state.topology();
    let (lo, hi) = topo.interior(1);
    (lo..=hi)
        .filter_map(|x| topo.index(x))
        .flat_map(|i| {
            let after = next.amplitudes()[i];
            let before = state.amplitudes()[i];
            (0..3).map(move |j| (after[j] - lambda * before[j]).norm())
        })
        .fold(0.0, f64::max)
}

/// Evolve `n_steps` times and record the worst pointwise change of the measure.
///
/// On a window step `n` is compared on `[−W+n, W−n]`, so `n_steps < W` is required.
pub fn verify_stationary(coin: &CoinMatrix, state: &WaveState, n_steps: usize, tol: f64) -> Result<StationarityReport> {
    let topo = state.topology();
    if let Topology::Window(w) = topo {
        if n_steps >= w {
            return Err(Error::WindowTooSmall { steps: n_steps, width: w });
        }
    }
    let initial = measure_of(state);
    let mut current = state.clone();
    let mut drift = 0.0f64;
    for n in 1..=n_steps {
        current = step(coin, &current);
        let mu = measure_of(&current);
        let (lo, hi) = topo.interior(n);
        for x in lo..=hi {
            let i = topo.index(x).expect("interior site");
            let d = (mu.values()[i] - initial.values()[i]).abs();
            // NaN poisons the result instead of being skipped by max
            drift = if d.is_nan() { f64::NAN } else { drift.max(d) };
        }
    }
    Ok(StationarityReport {
        schema: 1,
        topology: topo,
        steps: n_steps,
        max_measure_drift: drift,
        interior: topo.interior(n_steps),
        leaked_norm: current.leaked_norm(),
        tol,
        passed: drift <= tol,
    })
}
