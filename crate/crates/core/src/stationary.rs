//! Closed-form eigenstates and their stationary measures.
//!
//! Type 1 states have constant-modulus outer components,
//! `Ψ^L(x) = (ã₁⁻¹λ)^x φ₁` and `Ψ^R(x) = (ã₂λ⁻¹)^x φ₃`. Type 2 states take an
//! arbitrary sequence for `Ψ^L` and shift it into `Ψ^R`. In both cases
//! `Ψ^O` is fixed by the middle row of the eigenvalue equation.

use crate::coin::{self, CoinFamily, CoinMatrix};
use crate::cpx::{self, dist};
use crate::error::{Error, Result};
use crate::evolve::Topology;
use crate::reduced::{self, ReducedParams, WalkType};
use crate::C64;

/// Absolute tolerance used by [`detect_period`].
pub const PERIOD_TOL: f64 = 1e-10;

/// Three-component amplitudes on every site of a topology.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveState {
    topology: Topology,
    amps: Vec<[C64; 3]>,
    leaked: f64,
}

impl WaveState {
    pub fn new(topology: Topology, amps: Vec<[C64; 3]>) -> Result<WaveState> {
        let topology = topology.validate()?;
        if amps.len() != topology.len() {
            return Err(Error::Parse(format!(
                "{} amplitudes for {} sites of {topology}",
                amps.len(),
                topology.len()
            )));
        }
        Ok(WaveState { topology, amps, leaked: 0.0 })
    }

    pub(crate) fn from_parts(topology: Topology, amps: Vec<[C64; 3]>, leaked: f64) -> WaveState {
        WaveState { topology, amps, leaked }
    }

    pub fn from_fn(topology: Topology, f: impl FnMut(i64) -> [C64; 3]) -> WaveState {
        WaveState { topology, amps: topology.sites().map(f).collect(), leaked: 0.0 }
    }

    pub fn topology(&self) -> Topology {
        self.topology
    }

    /// Amplitudes in site order, starting at [`Topology::first_site`].
    pub fn amplitudes(&self) -> &[[C64; 3]] {
        &self.amps
    }

    /// `(Ψ^L(x), Ψ^O(x), Ψ^R(x))`; cycle labels wrap.
    pub fn get(&self, x: i64) -> Option<[C64; 3]> {
        self.topology.index(x).map(|i| self.amps[i])
    }

    /// Squared norm that has left a window so far.
    pub fn leaked_norm(&self) -> f64 {
        self.leaked
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().flatten().map(|z| z.norm_sqr()).sum()
    }

    /// `αΨ + βΦ` on a common topology.
    pub fn combine(alpha: C64, a: &WaveState, beta: C64, b: &WaveState) -> Result<WaveState> {
        if a.topology != b.topology {
            return Err(Error::InvalidTopology(format!("{} vs {}", a.topology, b.topology)));
        }
        let amps = a
            .amps
            .iter()
            .zip(&b.amps)
            .map(|(u, v)| [0, 1, 2].map(|j| alpha * u[j] + beta * v[j]))
            .collect();
        Ok(WaveState::from_parts(a.topology, amps, 0.0))
    }
}

/// A nonnegative real value per site.
#[derive(Debug, Clone, PartialEq)]
pub struct Measure {
    topology: Topology,
    values: Vec<f64>,
}

impl Measure {
    pub fn new(topology: Topology, values: Vec<f64>) -> Result<Measure> {
        if values.len() != topology.len() {
            return Err(Error::Parse(format!("{} values for {} sites", values.len(), topology.len())));
        }
        if let Some(v) = values.iter().find(|v| !(**v >= 0.0)) {
            return Err(Error::Parse(format!("measure value {v} is negative or NaN")));
        }
        Ok(Measure { topology, values })
    }

    pub fn topology(&self) -> Topology {
        self.topology
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, x: i64) -> Option<f64> {
        self.topology.index(x).map(|i| self.values[i])
    }

    /// `(x, μ(x))` in site order.
    pub fn iter(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        self.topology.sites().zip(self.values.iter().copied())
    }
}

/// A seed sequence `{φ_x}` for Type 2 states, stored from label `start`.
#[derive(Debug, Clone, PartialEq)]
pub struct SeedSequence {
    start: i64,
    values: Vec<C64>,
}

impl SeedSequence {
    pub fn new(start: i64, values: Vec<C64>) -> Result<SeedSequence> {
        if values.iter().all(|z| z.norm_sqr() == 0.0) {
            return Err(Error::DegenerateSeeds);
        }
        Ok(SeedSequence { start, values })
    }

    /// Sequence on `0..N` for a cycle.
    pub fn cycle(values: Vec<C64>) -> Result<SeedSequence> {
        Self::new(0, values)
    }

    /// Sequence on `[−W, W]`, padded with `φ_{−W−1} = 0`.
    pub fn window_padded(half_width: usize, values: Vec<C64>) -> Result<SeedSequence> {
        if values.len() != 2 * half_width + 1 {
            return Err(Error::SeedCoverage(format!(
                "window:{half_width} needs {} values, got {}",
                2 * half_width + 1,
                values.len()
            )));
        }
        let mut padded = Vec::with_capacity(values.len() + 1);
        padded.push(C64::new(0.0, 0.0));
        padded.extend(values);
        Self::new(-(half_width as i64) - 1, padded)
    }

    pub fn start(&self) -> i64 {
        self.start
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    /// Checks that `φ_x` and `φ_{x−1}` exist for every site of `topo`.
    pub fn check_covers(&self, topo: Topology) -> Result<()> {
        match topo {
            Topology::Cycle(n) => {
                if self.values.len() != n {
                    return Err(Error::SeedCoverage(format!(
                        "cycle:{n} needs {n} values, got {}",
                        self.values.len()
                    )));
                }
            }
            Topology::Window(w) => {
                let w = w as i64;
                let end = self.start + self.values.len() as i64 - 1;
                if self.start > -w - 1 || end < w {
                    return Err(Error::SeedCoverage(format!(
                        "window:{w} needs labels {}..={w}, got {}..={end}",
                        -w - 1,
                        self.start
                    )));
                }
            }
        }
        Ok(())
    }

    /// `φ_x`, wrapping on a cycle.
    pub fn value(&self, topo: Topology, x: i64) -> Option<C64> {
        match topo {
            Topology::Cycle(n) => {
                let offset = (x - self.start).rem_euclid(n as i64) as usize;
                self.values.get(offset).copied()
            }
            Topology::Window(_) => {
                let offset = x - self.start;
                (offset >= 0).then(|| self.values.get(offset as usize).copied()).flatten()
            }
        }
    }

    fn pair(&self, topo: Topology, x: i64) -> Result<(C64, C64)> {
        let missing = || Error::SeedCoverage(format!("no seed value around site {x}"));
        Ok((self.value(topo, x).ok_or_else(missing)?, self.value(topo, x - 1).ok_or_else(missing)?))
    }
}

fn expect_type(params: &ReducedParams, expected: WalkType) -> Result<()> {
    if params.walk_type != expected {
        return Err(Error::TypeMismatch { expected, found: params.walk_type });
    }
    Ok(())
}

/// Type-1 eigenstate with `Ψ^L(0) = φ₁`, `Ψ^R(0) = φ₃`.
pub fn type1_state(
    coin: &CoinMatrix,
    params: &ReducedParams,
    phi1: C64,
    phi3: C64,
    topo: Topology,
) -> Result<WaveState> {
    expect_type(params, WalkType::Type1)?;
    if phi1.norm() + phi3.norm() == 0.0 {
        return Err(Error::DegenerateSeeds);
    }
    let topo = topo.validate()?;
    let a = |i, j| coin.a(i, j);
    let left = params.left_factor();
    let right = params.right_factor();
    let middle = -a(1, 3) / (a(1, 2) * a(2, 3));
    Ok(WaveState::from_fn(topo, |x| {
        let l = cpx::powi(left, x) * phi1;
        let r = cpx::powi(right, x) * phi3;
        [l, middle * (a(2, 1) * l + a(2, 3) * r), r]
    }))
}

/// Type-2 eigenstate with `Ψ^L(x) = φ_x`.
pub fn type2_state(
    coin: &CoinMatrix,
    params: &ReducedParams,
    seeds: &SeedSequence,
    topo: Topology,
) -> Result<WaveState> {
    expect_type(params, WalkType::Type2)?;
    let lambda_sq = params.lambda * params.lambda;
    let product = params.a_tilde_1 * params.a_tilde_2;
    if !(dist(lambda_sq, product) <= reduced::DEFAULT_CONSISTENCY_TOL) {
        return Err(Error::SquareConditionFailed {
            lambda: params.lambda,
            a1: params.a_tilde_1,
            a2: params.a_tilde_2,
            lambda_sq,
            product,
        });
    }
    type2_state_unchecked(coin, params, seeds, topo)
}

/// The Type-2 construction without the `λ² = ã₁ã₂` check.
///
/// Only useful for showing that a coin failing the square condition does not
/// produce an eigenstate.
pub fn type2_state_unchecked(
    coin: &CoinMatrix,
    params: &ReducedParams,
    seeds: &SeedSequence,
    topo: Topology,
) -> Result<WaveState> {
    let topo = topo.validate()?;
    seeds.check_covers(topo)?;
    let a = |i, j| coin.a(i, j);
    let shift = params.left_factor();
    let middle = -a(1, 1) / (a(1, 2) * a(2, 1));
    let mut amps = Vec::with_capacity(topo.len());
    for x in topo.sites() {
        let (cur, prev) = seeds.pair(topo, x)?;
        let r = shift * prev;
        amps.push([cur, middle * (a(2, 1) * cur + a(2, 3) * r), r]);
    }
    let state = WaveState::from_parts(topo, amps, 0.0);
    if state.norm_sqr() == 0.0 {
        return Err(Error::DegenerateSeeds);
    }
    Ok(state)
}

/// `μ(x) = |Ψ^L(x)|² + |Ψ^O(x)|² + |Ψ^R(x)|²`.
pub fn measure_of(state: &WaveState) -> Measure {
    let values = state.amplitudes().iter().map(|v| v.iter().map(|z| z.norm_sqr()).sum()).collect();
    Measure { topology: state.topology(), values }
}

/// `cos ξ` for the `A₁(η)` Type-1 eigenvalue `λ = e^{iξ}`.
pub fn a1_cos_xi(eta: f64) -> f64 {
    let c2 = (2.0 * eta).cos();
    (10.0 - 26.0 * c2) / (26.0 - 10.0 * c2)
}

/// Closed-form `A₁(η)` Type-1 measure for `φ₁ = φ₃`:
/// `{2 + (4 + 9 tan²η) T_x²(cos ξ)} |φ₁|²` with `T_x(cos ξ) = cos(xξ)`.
pub fn closed_form_measure_a1(eta: f64, phi1: C64, x: i64) -> Result<f64> {
    let cos = eta.cos();
    if cos.abs() < 1e-12 {
        return Err(Error::TanSingularity { cos });
    }
    let tan = eta.tan();
    let xi = a1_cos_xi(eta).clamp(-1.0, 1.0).acos();
    let t = (x as f64 * xi).cos();
    Ok((2.0 + (4.0 + 9.0 * tan * tan) * t * t) * phi1.norm_sqr())
}

/// Closed-form Type-1 measures of the built-in families.
///
/// `A₁(η)` is only covered for `φ₁ = φ₃`.
pub fn closed_form_measure_type1(coin: &CoinMatrix, phi1: C64, phi3: C64, x: i64) -> Result<f64> {
    let sum = phi1.norm_sqr() + phi3.norm_sqr();
    let cross = |z: C64| (z * phi1 * phi3.conj()).re;
    match coin.family() {
        CoinFamily::Grover => Ok(2.0 * (sum + cross(C64::new(1.0, 0.0)))),
        CoinFamily::Fourier => Ok(2.0 * (sum + cross(cpx::powi(coin::omega(), x + 1)))),
        CoinFamily::StefanakRho(rho) => {
            let r2 = rho * rho;
            Ok((1.0 + r2) / (2.0 * r2) * sum + (1.0 - r2) / r2 * cross(C64::new(1.0, 0.0)))
        }
        CoinFamily::StefanakEta(eta) if phi1 == phi3 => closed_form_measure_a1(eta, phi1, x),
        family => Err(Error::UnsupportedFamily(family.to_string())),
    }
}

/// Closed-form Type-2 measure at site `x` for the Grover, `A₁(η)` and `A₂(ρ)` coins.
pub fn closed_form_measure_type2(coin: &CoinMatrix, seeds: &SeedSequence, topo: Topology, x: i64) -> Result<f64> {
    let (cur, prev) = seeds.pair(topo, x)?;
    let sum = cur.norm_sqr() + prev.norm_sqr();
    let cross = (cur * prev.conj()).re;
    match coin.family() {
        CoinFamily::Grover | CoinFamily::StefanakEta(_) => Ok(1.25 * sum + 0.5 * cross),
        CoinFamily::StefanakRho(rho) => {
            let r2 = rho * rho;
            Ok((2.0 - r2) / (2.0 * (1.0 - r2)) * sum + r2 / (1.0 - r2) * cross)
        }
        family => Err(Error::UnsupportedFamily(family.to_string())),
    }
}

/// Smallest `p ≤ max_period` (and `≤ len/2`) with `μ(x+p) = μ(x)` wherever
/// both sites exist, within [`PERIOD_TOL`]. `Some(1)` means uniform.
pub fn detect_period(measure: &Measure, max_period: usize) -> Option<usize> {
    let v = measure.values();
    let limit = max_period.min(v.len() / 2);
    (1..=limit).find(|&p| v.iter().zip(&v[p..]).all(|(a, b)| (a - b).abs() <= PERIOD_TOL))
}

/// The Fourier Type-1 eigenstate restricted to the cycle `C_{3m}`.
pub fn fourier_cycle_state(m: usize, phi1: C64, phi3: C64) -> Result<WaveState> {
    if m == 0 {
        return Err(Error::Domain("m must be at least 1".into()));
    }
    let a = coin::fourier();
    let params = reduced::type1_params(&a, reduced::DEFAULT_CONSISTENCY_TOL)?;
    type1_state(&a, &params, phi1, phi3, Topology::Cycle(3 * m))
}

/// Residuals of the two wrap-around conditions a Fourier eigenstate at `λ = i`
/// must meet on a cycle of `N` sites:
///
/// ```text
/// √3 i Ψ^R(0)   = Ψ^L(N−1) + ω² Ψ^O(N−1) + ω Ψ^R(N−1)   (row 3 of A_F)
/// √3 i Ψ^L(N−1) = Ψ^L(0)   +    Ψ^O(0)   +   Ψ^R(0)     (row 1 of A_F)
/// ```
pub fn fourier_boundary_residuals(state: &WaveState) -> Result<[f64; 2]> {
    let Topology::Cycle(n) = state.topology() else {
        return Err(Error::InvalidTopology("boundary conditions need a cycle".into()));
    };
    let last = n as i64 - 1;
    let first = state.get(0).expect("site 0");
    let end = state.get(last).expect("last site");
    let w = coin::omega();
    let lhs = C64::new(0.0, 3f64.sqrt());
    let r1 = dist(lhs * first[2], end[0] + w * w * end[1] + w * end[2]);
    let r2 = dist(lhs * end[0], first[0] + first[1] + first[2]);
    Ok([r1, r2])
}
