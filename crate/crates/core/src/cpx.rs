//! Serde helpers: complex numbers travel as `[re, im]` pairs.

use crate::C64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub fn to_pair(z: C64) -> [f64; 2] {
    [z.re, z.im]
}

pub fn from_pair(p: [f64; 2]) -> C64 {
    C64::new(p[0], p[1])
}

pub fn serialize<S: Serializer>(z: &C64, s: S) -> Result<S::Ok, S::Error> {
    to_pair(*z).serialize(s)
}

pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<C64, D::Error> {
    <[f64; 2]>::deserialize(d).map(from_pair)
}

/// Max-modulus distance between two complex numbers, `|a - b|`.
pub fn dist(a: C64, b: C64) -> f64 {
    (a - b).norm()
}

/// Integer power of a nonzero complex number; negative exponents go through
/// the reciprocal so no branch cut is involved.
pub fn powi(z: C64, n: i64) -> C64 {
    let base = if n < 0 { z.inv() } else { z };
    base.powu(n.unsigned_abs() as u32)
}
