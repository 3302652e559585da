//! Serde adapters that write arbitrary-precision integers as decimal strings.

use std::str::FromStr;

use serde::{de, Deserialize, Deserializer, Serializer};

pub mod int {
    use super::*;
    use num_bigint::BigInt;

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        let s = String::deserialize(d)?;
        BigInt::from_str(s.trim()).map_err(|e| de::Error::custom(format!("bad integer {s:?}: {e}")))
    }
}

pub mod uint {
    use super::*;
    use num_bigint::BigUint;

    pub fn serialize<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        let s = String::deserialize(d)?;
        BigUint::from_str(s.trim())
            .map_err(|e| de::Error::custom(format!("bad unsigned integer {s:?}: {e}")))
    }
}
