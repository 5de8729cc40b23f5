//! The 2×2 reduced matrix and the Type 1 / Type 2 classification.
//!
//! Solving the middle row of `U_A Ψ = λΨ` for `Ψ^O` and substituting into the
//! outer rows gives
//!
//! ```text
//! λ (Ψ^L(x), Ψ^R(x)) = [row 1 of A_re] Ψ(x+1) ⊕ [row 2 of A_re] Ψ(x−1),
//! A_re = 1/(λ − a22) · [[λ a11 − B, λ a13 + C], [λ a31 + D, λ a33 − E]].
//! ```
//!
//! A coin is Type 1 at `λ = −C/a13 = −D/a31` (the reduced matrix is diagonal)
//! and Type 2 at `λ = B/a11 = E/a33` (anti-diagonal). Type 2 additionally
//! needs `λ² = ã₁ ã₂` for the two outer recurrences to agree.

use serde::{Deserialize, Serialize};

use crate::coin::CoinMatrix;
use crate::cpx::{self, dist};
use crate::error::{Error, Result};
use crate::C64;

/// Tolerance for `λ₁` vs `λ₂`, `|λ| = 1` and the square condition.
pub const DEFAULT_CONSISTENCY_TOL: f64 = 1e-10;
/// Entries closer than this to zero violate the `a_ij ≠ 0` assumption.
pub const ZERO_ENTRY_TOL: f64 = 1e-14;
pub const UNIMODULAR_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum WalkType {
    Type1,
    Type2,
}

impl WalkType {
    pub fn number(self) -> u8 {
        match self {
            WalkType::Type1 => 1,
            WalkType::Type2 => 2,
        }
    }

    pub fn from_number(n: u8) -> Option<WalkType> {
        match n {
            1 => Some(WalkType::Type1),
            2 => Some(WalkType::Type2),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedMatrix {
    pub entries: [[C64; 2]; 2],
    pub lambda: C64,
}

impl ReducedMatrix {
    /// Largest off-diagonal modulus.
    pub fn off_diagonal(&self) -> f64 {
        self.entries[0][1].norm().max(self.entries[1][0].norm())
    }

    /// Largest diagonal modulus.
    pub fn diagonal(&self) -> f64 {
        self.entries[0][0].norm().max(self.entries[1][1].norm())
    }
}

/// Eigenvalue and reduced entries for a classified coin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(into = "ParamsJson", try_from = "ParamsJson")]
pub struct ReducedParams {
    pub walk_type: WalkType,
    pub lambda: C64,
    pub a_tilde_1: C64,
    pub a_tilde_2: C64,
    /// `|λ₁ − λ₂|` between the two expressions for the eigenvalue.
    pub consistency_residual: f64,
}

#[derive(Serialize, Deserialize)]
struct ParamsJson {
    #[serde(rename = "type")]
    walk_type: u8,
    lambda: [f64; 2],
    a1: [f64; 2],
    a2: [f64; 2],
    residual: f64,
}

impl From<ReducedParams> for ParamsJson {
    fn from(p: ReducedParams) -> Self {
        ParamsJson {
            walk_type: p.walk_type.number(),
            lambda: cpx::to_pair(p.lambda),
            a1: cpx::to_pair(p.a_tilde_1),
            a2: cpx::to_pair(p.a_tilde_2),
            residual: p.consistency_residual,
        }
    }
}

impl TryFrom<ParamsJson> for ReducedParams {
    type Error = String;

    fn try_from(j: ParamsJson) -> std::result::Result<Self, String> {
        let walk_type =
            WalkType::from_number(j.walk_type).ok_or_else(|| format!("unknown walk type {}", j.walk_type))?;
        Ok(ReducedParams {
            walk_type,
            lambda: cpx::from_pair(j.lambda),
            a_tilde_1: cpx::from_pair(j.a1),
            a_tilde_2: cpx::from_pair(j.a2),
            consistency_residual: j.residual,
        })
    }
}

/// Checks the standing assumptions `a_ij ≠ 0` and `|a22| ≠ 1`.
pub fn check_reducible(coin: &CoinMatrix) -> Result<()> {
    for row in 1..=3 {
        for col in 1..=3 {
            if coin.a(row, col).norm() <= ZERO_ENTRY_TOL {
                return Err(Error::ZeroEntry { row, col });
            }
        }
    }
    if (coin.a(2, 2).norm() - 1.0).abs() <= UNIMODULAR_TOL {
        return Err(Error::CentralReflection);
    }
    Ok(())
}

fn check_unimodular(lambda: C64, tol: f64) -> Result<()> {
    let modulus = lambda.norm();
    // written so that NaN fails
    if !((modulus - 1.0).abs() <= tol) {
        return Err(Error::NonUnimodularLambda { lambda, modulus });
    }
    Ok(())
}

pub fn reduced_matrix(coin: &CoinMatrix, lambda: C64) -> Result<ReducedMatrix> {
    check_reducible(coin)?;
    check_unimodular(lambda, UNIMODULAR_TOL)?;
    let m = coin.minors();
    let a = |i, j| coin.a(i, j);
    let scale = (lambda - a(2, 2)).inv();
    Ok(ReducedMatrix {
        entries: [
            [(lambda * a(1, 1) - m.b) * scale, (lambda * a(1, 3) + m.c) * scale],
            [(lambda * a(3, 1) + m.d) * scale, (lambda * a(3, 3) - m.e) * scale],
        ],
        lambda,
    })
}

fn consistent_lambda(first: C64, second: C64, tol: f64) -> Result<f64> {
    let residual = dist(first, second);
    if !(residual <= tol) {
        return Err(Error::InconsistentLambda { first, second });
    }
    check_unimodular(first, tol)?;
    Ok(residual)
}

/// Type 1: `λ = −C/a13 = −D/a31`, `ã₁ = a11 − a13 a21/a23`, `ã₂ = a33 − a23 a31/a21`.
pub fn type1_params(coin: &CoinMatrix, tol: f64) -> Result<ReducedParams> {
    check_reducible(coin)?;
    let m = coin.minors();
    let a = |i, j| coin.a(i, j);
    let lambda = -m.c / a(1, 3);
    let residual = consistent_lambda(lambda, -m.d / a(3, 1), tol)?;
    let a_tilde_1 = a(1, 1) - a(1, 3) * a(2, 1) / a(2, 3);
    let a_tilde_2 = a(3, 3) - a(2, 3) * a(3, 1) / a(2, 1);

    let stray = reduced_matrix(coin, lambda)?.off_diagonal();
    if !(stray <= tol) {
        return Err(Error::ReducedShape { stray });
    }
    Ok(ReducedParams {
        walk_type: WalkType::Type1,
        lambda,
        a_tilde_1,
        a_tilde_2,
        consistency_residual: residual,
    })
}

/// Type 2: `λ = B/a11 = E/a33`, `ã₁ = a13 − a11 a23/a21`, `ã₂ = a31 − a21 a33/a23`,
/// and `λ² = ã₁ ã₂`.
pub fn type2_params(coin: &CoinMatrix, tol: f64) -> Result<ReducedParams> {
    check_reducible(coin)?;
    let m = coin.minors();
    let a = |i, j| coin.a(i, j);
    let lambda = m.b / a(1, 1);
    let residual = consistent_lambda(lambda, m.e / a(3, 3), tol)?;
    let a_tilde_1 = a(1, 3) - a(1, 1) * a(2, 3) / a(2, 1);
    let a_tilde_2 = a(3, 1) - a(2, 1) * a(3, 3) / a(2, 3);

    let lambda_sq = lambda * lambda;
    let product = a_tilde_1 * a_tilde_2;
    if !(dist(lambda_sq, product) <= tol) {
        return Err(Error::SquareConditionFailed {
            lambda,
            a1: a_tilde_1,
            a2: a_tilde_2,
            lambda_sq,
            product,
        });
    }

    let stray = reduced_matrix(coin, lambda)?.diagonal();
    if !(stray <= tol) {
        return Err(Error::ReducedShape { stray });
    }
    Ok(ReducedParams {
        walk_type: WalkType::Type2,
        lambda,
        a_tilde_1,
        a_tilde_2,
        consistency_residual: residual,
    })
}

impl ReducedParams {
    /// Spatial factor of `Ψ^L`: `ã₁⁻¹ λ`.
    pub fn left_factor(&self) -> C64 {
        self.lambda / self.a_tilde_1
    }

    /// Spatial factor of `Ψ^R` in Type 1: `ã₂ λ⁻¹`.
    pub fn right_factor(&self) -> C64 {
        self.a_tilde_2 / self.lambda
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("params serialize")
    }
}
