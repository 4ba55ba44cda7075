//! Serde helpers for big integers. Integers are written as decimal strings
//! so large values survive JSON round trips; plain JSON numbers are accepted
//! on input as well.

use std::fmt;

use num_bigint::BigInt;
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// A `BigInt` that serializes as a decimal string.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BigIntStr(pub BigInt);

impl Serialize for BigIntStr {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

struct BigIntVisitor;

impl<'de> Visitor<'de> for BigIntVisitor {
    type Value = BigInt;

    fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("an integer or a decimal string")
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> Result<BigInt, E> {
        Ok(v.into())
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> Result<BigInt, E> {
        Ok(v.into())
    }

    fn visit_str<E: de::Error>(self, v: &str) -> Result<BigInt, E> {
        v.trim().parse().map_err(|_| E::custom(format!("invalid integer literal {v:?}")))
    }
}

impl<'de> Deserialize<'de> for BigIntStr {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        d.deserialize_any(BigIntVisitor).map(BigIntStr)
    }
}

/// `#[serde(with = "bigint_vec")]` for `Vec<BigInt>` fields.
pub mod bigint_vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        let wrapped: Vec<BigIntStr> = v.iter().cloned().map(BigIntStr).collect();
        wrapped.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        let wrapped = Vec::<BigIntStr>::deserialize(d)?;
        Ok(wrapped.into_iter().map(|b| b.0).collect())
    }
}

/// `#[serde(with = "bigint")]` for single `BigInt` fields.
pub mod bigint {
    use super::*;

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        BigIntStr::deserialize(d).map(|b| b.0)
    }
}

/// A `BigInt` written as a JSON number when it fits in `i64`, otherwise as a
/// decimal string.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompactInt(pub BigInt);

impl Serialize for CompactInt {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match i64::try_from(&self.0) {
            Ok(v) => s.serialize_i64(v),
            Err(_) => s.serialize_str(&self.0.to_string()),
        }
    }
}

impl<'de> Deserialize<'de> for CompactInt {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        d.deserialize_any(BigIntVisitor).map(CompactInt)
    }
}

/// `#[serde(with = "compact_vec")]` for `Vec<BigInt>` fields.
pub mod compact_vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        let wrapped: Vec<CompactInt> = v.iter().cloned().map(CompactInt).collect();
        wrapped.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        let wrapped = Vec::<CompactInt>::deserialize(d)?;
        Ok(wrapped.into_iter().map(|b| b.0).collect())
    }
}

/// `#[serde(with = "compact_rows")]` for `Vec<Vec<BigInt>>` fields.
pub mod compact_rows {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[Vec<BigInt>], s: S) -> Result<S::Ok, S::Error> {
        let wrapped: Vec<Vec<CompactInt>> = v.iter().map(|r| r.iter().cloned().map(CompactInt).collect()).collect();
        wrapped.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<BigInt>>, D::Error> {
        let wrapped = Vec::<Vec<CompactInt>>::deserialize(d)?;
        Ok(wrapped.into_iter().map(|r| r.into_iter().map(|b| b.0).collect()).collect())
    }
}
