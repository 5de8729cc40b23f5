//! Parsers for command-line literals.

use std::path::PathBuf;
use std::str::FromStr;

use qwstat_core::coin::{self, omega, CoinMatrix};
use qwstat_core::{Error, Result, C64};

/// Parses `a+bi`, `a-bi`, `a`, `bi`, `i`, `-i`, and the shorthands `w`, `w2`
/// (also `-w`, `-w2`) for `ω = e^{2πi/3}` and `ω²`.
pub fn parse_complex(text: &str) -> Result<C64> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || Error::Parse(format!("cannot parse complex literal {text:?}"));
    if s.is_empty() {
        return Err(bad());
    }
    let (sign, body) = match s.strip_prefix('-') {
        Some(rest) => (-1.0, rest),
        None => (1.0, s.strip_prefix('+').unwrap_or(&s)),
    };
    match body {
        "w" => return Ok(omega() * sign),
        "w2" => return Ok(omega() * omega() * sign),
        _ => {}
    }

    // split at the last sign that is not part of an exponent
    let bytes = s.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re_part, im_part) = match split {
        Some(k) if s.ends_with('i') => (&s[..k], &s[k..]),
        Some(_) => return Err(bad()),
        None if s.ends_with('i') => ("", s.as_str()),
        None => (s.as_str(), ""),
    };
    let re = if re_part.is_empty() { 0.0 } else { re_part.parse::<f64>().map_err(|_| bad())? };
    let im = match im_part.strip_suffix('i') {
        None => 0.0,
        Some("" | "+") => 1.0,
        Some("-") => -1.0,
        Some(num) => num.parse::<f64>().map_err(|_| bad())?,
    };
    Ok(C64::new(re, im))
}

#[derive(Debug, Clone, PartialEq)]
pub enum CoinChoice {
    Grover,
    Fourier,
    StefanakEta,
    StefanakRho,
    Custom(PathBuf),
}

impl FromStr for CoinChoice {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "grover" => Ok(CoinChoice::Grover),
            "fourier" => Ok(CoinChoice::Fourier),
            "stefanak-eta" => Ok(CoinChoice::StefanakEta),
            "stefanak-rho" => Ok(CoinChoice::StefanakRho),
            other => match other.strip_prefix("custom:") {
                Some(path) if !path.is_empty() => Ok(CoinChoice::Custom(PathBuf::from(path))),
                _ => Err(format!(
                    "unknown coin {other:?}; expected grover, fourier, stefanak-eta, stefanak-rho or custom:<file.json>"
                )),
            },
        }
    }
}

impl CoinChoice {
    pub fn build(&self, eta: Option<f64>, rho: Option<f64>) -> Result<CoinMatrix> {
        match self {
            CoinChoice::Grover => Ok(coin::grover()),
            CoinChoice::Fourier => Ok(coin::fourier()),
            CoinChoice::StefanakEta => {
                coin::stefanak_eta(eta.ok_or_else(|| Error::Parse("stefanak-eta needs --eta".into()))?)
            }
            CoinChoice::StefanakRho => {
                coin::stefanak_rho(rho.ok_or_else(|| Error::Parse("stefanak-rho needs --rho".into()))?)
            }
            CoinChoice::Custom(path) => {
                let text = std::fs::read_to_string(path)?;
                CoinMatrix::from_json(&text, coin::DEFAULT_UNITARITY_TOL)
            }
        }
    }
}
