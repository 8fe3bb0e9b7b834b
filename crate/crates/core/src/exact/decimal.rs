//! Serde adapters writing integers as decimal strings.

use num_bigint::BigInt;
use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

pub fn serialize<S: Serializer>(n: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&n.to_string())
}

pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
    let s = String::deserialize(d)?;
    s.parse().map_err(D::Error::custom)
}

pub mod array3 {
    use super::*;
    use serde::ser::SerializeTuple;

    pub fn serialize<S: Serializer>(v: &[BigInt; 3], s: S) -> Result<S::Ok, S::Error> {
        let mut t = s.serialize_tuple(3)?;
        for n in v {
            t.serialize_element(&n.to_string())?;
        }
        t.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<[BigInt; 3], D::Error> {
        let v = <[String; 3]>::deserialize(d)?;
        let p = |s: &String| s.parse::<BigInt>().map_err(D::Error::custom);
        Ok([p(&v[0])?, p(&v[1])?, p(&v[2])?])
    }
}
