//! 3×3 coin matrices and the built-in walk families.
//!
//! Entries are addressed 1-based, `a(i, j)` for `i, j ∈ {1, 2, 3}`, so that
//! code reads like the usual matrix notation. Row 1 drives the left-moving
//! component, row 2 the staying component and row 3 the right-moving one.

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::cpx;
use crate::error::{Error, Result};
use crate::C64;

pub const DEFAULT_UNITARITY_TOL: f64 = 1e-12;

/// Which construction produced a coin. Closed-form measure formulas are
/// only available for the named families.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CoinFamily {
    Custom,
    Grover,
    Fourier,
    StefanakEta(f64),
    StefanakRho(f64),
}

impl fmt::Display for CoinFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoinFamily::Custom => write!(f, "custom"),
            CoinFamily::Grover => write!(f, "grover"),
            CoinFamily::Fourier => write!(f, "fourier"),
            CoinFamily::StefanakEta(eta) => write!(f, "stefanak-eta({eta})"),
            CoinFamily::StefanakRho(rho) => write!(f, "stefanak-rho({rho})"),
        }
    }
}

/// A validated 3×3 unitary coin. The stored entries are exactly the input.
#[derive(Debug, Clone, PartialEq)]
pub struct CoinMatrix {
    entries: [[C64; 3]; 3],
    family: CoinFamily,
}

/// Row split `A = P + R + Q`: `P` keeps row 1, `R` row 2, `Q` row 3.
#[derive(Debug, Clone, PartialEq)]
pub struct ShiftSplit {
    pub p: [[C64; 3]; 3],
    pub r: [[C64; 3]; 3],
    pub q: [[C64; 3]; 3],
}

/// The four 2×2 minors entering the reduced matrix.
///
/// `B = a11 a22 - a12 a21`, `C = a12 a23 - a13 a22`,
/// `D = a21 a32 - a22 a31`, `E = a22 a33 - a23 a32`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Minors {
    pub b: C64,
    pub c: C64,
    pub d: C64,
    pub e: C64,
}

/// Largest entrywise deviation of `A A†` from the identity.
pub fn unitarity_deviation(entries: &[[C64; 3]; 3]) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..3 {
        for j in 0..3 {
            let dot: C64 = (0..3).map(|k| entries[i][k] * entries[j][k].conj()).sum();
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((dot - target).norm());
        }
    }
    worst
}

/// Validate `entries` as a unitary coin within `tol`.
pub fn make_coin(entries: [[C64; 3]; 3], tol: f64) -> Result<CoinMatrix> {
    make_family(entries, tol, CoinFamily::Custom)
}

fn make_family(entries: [[C64; 3]; 3], tol: f64, family: CoinFamily) -> Result<CoinMatrix> {
    if entries.iter().flatten().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::Parse("coin entries must be finite".into()));
    }
    let deviation = unitarity_deviation(&entries);
    // NaN deviation must also be rejected
    if !(deviation <= tol) {
        return Err(Error::NonUnitary { deviation });
    }
    Ok(CoinMatrix { entries, family })
}

fn real(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// `ω = e^{2πi/3}`.
pub fn omega() -> C64 {
    C64::from_polar(1.0, 2.0 * PI / 3.0)
}

/// The Grover coin `(1/3)[[−1,2,2],[2,−1,2],[2,2,−1]]`.
pub fn grover() -> CoinMatrix {
    let d = real(-1.0 / 3.0);
    let o = real(2.0 / 3.0);
    let entries = [[d, o, o], [o, d, o], [o, o, d]];
    make_family(entries, DEFAULT_UNITARITY_TOL, CoinFamily::Grover).expect("Grover coin is unitary")
}

/// The Fourier coin `(1/√3)[[1,1,1],[1,ω,ω²],[1,ω²,ω]]`.
pub fn fourier() -> CoinMatrix {
    let s = 1.0 / 3f64.sqrt();
    let w = omega();
    let one = real(s);
    let w1 = w * s;
    let w2 = w * w * s;
    let entries = [[one, one, one], [one, w1, w2], [one, w2, w1]];
    make_family(entries, DEFAULT_UNITARITY_TOL, CoinFamily::Fourier).expect("Fourier coin is unitary")
}

/// Stefanák's one-parameter family `A₁(η)`; `A₁(0)` is the Grover coin.
pub fn stefanak_eta(eta: f64) -> Result<CoinMatrix> {
    if !eta.is_finite() {
        return Err(Error::Domain(format!("eta must be finite, got {eta}")));
    }
    let z = C64::from_polar(1.0, 2.0 * eta);
    let one = real(1.0);
    let corner = (-one - z) / 6.0;
    let edge = (one + z) * 2.0 / 6.0;
    let anti = (real(5.0) - z) / 6.0;
    let centre = (one - z * 2.0) * 2.0 / 6.0;
    let entries = [[corner, edge, anti], [edge, centre, edge], [anti, edge, corner]];
    make_family(entries, DEFAULT_UNITARITY_TOL, CoinFamily::StefanakEta(eta))
}

/// Stefanák's family `A₂(ρ)` for `0 < ρ < 1`; `A₂(1/√3)` is the Grover coin.
pub fn stefanak_rho(rho: f64) -> Result<CoinMatrix> {
    if !(rho > 0.0 && rho < 1.0) {
        return Err(Error::Domain(format!("rho must lie in (0, 1), got {rho}")));
    }
    let r2 = rho * rho;
    let s = real(rho * (2.0 * (1.0 - r2)).sqrt());
    let corner = real(-r2);
    let anti = real(1.0 - r2);
    let centre = real(2.0 * r2 - 1.0);
    let entries = [[corner, s, anti], [s, centre, s], [anti, s, corner]];
    make_family(entries, DEFAULT_UNITARITY_TOL, CoinFamily::StefanakRho(rho))
}

impl CoinMatrix {
    /// Entry `a_ij`, 1-based.
    #[inline]
    pub fn a(&self, i: usize, j: usize) -> C64 {
        self.entries[i - 1][j - 1]
    }

    pub fn entries(&self) -> &[[C64; 3]; 3] {
        &self.entries
    }

    pub fn family(&self) -> CoinFamily {
        self.family
    }

    pub fn row(&self, i: usize) -> [C64; 3] {
        self.entries[i - 1]
    }

    pub fn unitarity_deviation(&self) -> f64 {
        unitarity_deviation(&self.entries)
    }

    pub fn split(&self) -> ShiftSplit {
        split(self)
    }

    pub fn minors(&self) -> Minors {
        minors(self)
    }

    /// Coin as a 3×3 array of `[re, im]` pairs, row-major.
    pub fn to_pairs(&self) -> [[[f64; 2]; 3]; 3] {
        self.entries.map(|row| row.map(cpx::to_pair))
    }

    pub fn from_pairs(pairs: [[[f64; 2]; 3]; 3], tol: f64) -> Result<CoinMatrix> {
        make_coin(pairs.map(|row| row.map(cpx::from_pair)), tol)
    }

    pub fn from_json(text: &str, tol: f64) -> Result<CoinMatrix> {
        let pairs: [[[f64; 2]; 3]; 3] = serde_json::from_str(text)?;
        Self::from_pairs(pairs, tol)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_pairs()).expect("plain arrays serialize")
    }
}

impl Serialize for CoinMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_pairs().serialize(s)
    }
}

impl<'de> Deserialize<'de> for CoinMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let pairs = <[[[f64; 2]; 3]; 3]>::deserialize(d)?;
        CoinMatrix::from_pairs(pairs, DEFAULT_UNITARITY_TOL).map_err(serde::de::Error::custom)
    }
}

pub fn split(coin: &CoinMatrix) -> ShiftSplit {
    let zero = [C64::new(0.0, 0.0); 3];
    let rows = coin.entries;
    ShiftSplit {
        p: [rows[0], zero, zero],
        r: [zero, rows[1], zero],
        q: [zero, zero, rows[2]],
    }
}

pub fn minors(coin: &CoinMatrix) -> Minors {
    let a = |i, j| coin.a(i, j);
    Minors {
        b: a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1),
        c: a(1, 2) * a(2, 3) - a(1, 3) * a(2, 2),
        d: a(2, 1) * a(3, 2) - a(2, 2) * a(3, 1),
        e: a(2, 2) * a(3, 3) - a(2, 3) * a(3, 2),
    }
}
