//! Serde adapters writing big integers as JSON numbers when they fit in
//! 64 bits and as decimal strings otherwise. Both forms are accepted on input.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum Raw {
    Num(i64),
    Str(String),
}

fn to_raw(x: &BigInt) -> Raw {
    x.to_i64().map_or_else(|| Raw::Str(x.to_string()), Raw::Num)
}

fn from_raw<E: serde::de::Error>(r: Raw) -> Result<BigInt, E> {
    match r {
        Raw::Num(n) => Ok(BigInt::from(n)),
        Raw::Str(s) => s.trim().parse().map_err(|_| E::custom(format!("not an integer: {s}"))),
    }
}

pub fn serialize<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    to_raw(x).serialize(s)
}

pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
    from_raw(Raw::deserialize(d)?)
}

pub mod vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(to_raw).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        Vec::<Raw>::deserialize(d)?.into_iter().map(from_raw).collect()
    }
}

pub mod option {
    use super::*;

    pub fn serialize<S: Serializer>(v: &Option<BigInt>, s: S) -> Result<S::Ok, S::Error> {
        v.as_ref().map(to_raw).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<BigInt>, D::Error> {
        Option::<Raw>::deserialize(d)?.map(from_raw).transpose()
    }
}
