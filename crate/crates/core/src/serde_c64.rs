//! Serde helpers that encode complex numbers as `[re, im]` pairs, the wire
//! form used by experiment configs and report files.

use num_complex::Complex64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub fn serialize<S: Serializer>(v: &Complex64, ser: S) -> Result<S::Ok, S::Error> {
    [v.re, v.im].serialize(ser)
}

pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<Complex64, D::Error> {
    let pair = <[f64; 2]>::deserialize(de)?;
    if !pair[0].is_finite() || !pair[1].is_finite() {
        return Err(D::Error::custom("complex components must be finite"));
    }
    Ok(Complex64::new(pair[0], pair[1]))
}

/// Same encoding for vectors of complex numbers.
pub mod vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[Complex64], ser: S) -> Result<S::Ok, S::Error> {
        let pairs: Vec<[f64; 2]> = v.iter().map(|c| [c.re, c.im]).collect();
        pairs.serialize(ser)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<Vec<Complex64>, D::Error> {
        let pairs = Vec::<[f64; 2]>::deserialize(de)?;
        if pairs.iter().any(|p| !p[0].is_finite() || !p[1].is_finite()) {
            return Err(D::Error::custom("complex components must be finite"));
        }
        Ok(pairs
            .into_iter()
            .map(|p| Complex64::new(p[0], p[1]))
            .collect())
    }
}
