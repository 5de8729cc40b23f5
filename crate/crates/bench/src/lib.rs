//! Benchmark fixtures.

use qwstat_core::coin::{fourier, grover};
use qwstat_core::reduced::{type1_params, DEFAULT_CONSISTENCY_TOL};
use qwstat_core::stationary::type1_state;
use qwstat_core::{CoinMatrix, ReducedParams, Topology, WaveState, C64};

/// A Type 1 eigenstate of the Grover or Fourier coin on `topo`.
pub fn eigenstate(fourier_coin: bool, topo: Topology) -> (CoinMatrix, ReducedParams, WaveState) {
    let coin = if fourier_coin { fourier() } else { grover() };
    let params = type1_params(&coin, DEFAULT_CONSISTENCY_TOL).expect("family classifies");
    let one = C64::new(1.0, 0.0);
    let state = type1_state(&coin, &params, one, C64::new(0.5, -0.25), topo).expect("state builds");
    (coin, params, state)
}
