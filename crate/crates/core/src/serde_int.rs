//! `i128` fields written as JSON `i64`, so they survive internally tagged enums.

use serde::{de::Error as _, ser::Error as _, Deserialize, Deserializer, Serialize, Serializer};

fn narrow<E: serde::ser::Error>(x: i128) -> Result<i64, E> {
    i64::try_from(x).map_err(|_| E::custom(format!("{x} does not fit in 64 bits")))
}

pub fn serialize<S: Serializer>(x: &i128, s: S) -> Result<S::Ok, S::Error> {
    narrow::<S::Error>(*x)?.serialize(s)
}

pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<i128, D::Error> {
    i64::deserialize(d).map(i128::from)
}

pub mod vec {
    use super::*;

    pub fn serialize<S: Serializer>(xs: &[i128], s: S) -> Result<S::Ok, S::Error> {
        xs.iter()
            .map(|&x| i64::try_from(x).map_err(|_| S::Error::custom("value exceeds 64 bits")))
            .collect::<Result<Vec<i64>, _>>()?
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<i128>, D::Error> {
        let v = Vec::<i64>::deserialize(d).map_err(D::Error::custom)?;
        Ok(v.into_iter().map(i128::from).collect())
    }
}
