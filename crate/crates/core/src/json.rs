//! Serde helpers that write big integers as plain JSON numbers.
//!
//! Values are emitted with their full decimal expansion (serde_json's
//! `arbitrary_precision` keeps them exact). Only JSON serializers are
//! supported; CSV output goes through dedicated row types.

pub mod bigint {
    use std::str::FromStr;

    use num_bigint::BigInt;
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};
    use serde_json::{Number, Value};

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        let n = Number::from_str(&v.to_string()).map_err(serde::ser::Error::custom)?;
        n.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        match Value::deserialize(d)? {
            Value::Number(n) => BigInt::from_str(&n.to_string()).map_err(D::Error::custom),
            Value::String(s) => BigInt::from_str(&s).map_err(D::Error::custom),
            other => Err(D::Error::custom(format!("expected integer, got {other}"))),
        }
    }
}

pub mod opt_bigint {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Option<BigInt>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(v) => super::bigint::serialize(v, s),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<BigInt>, D::Error> {
        #[derive(Deserialize)]
        struct Wrap(#[serde(with = "super::bigint")] BigInt);
        Ok(Option::<Wrap>::deserialize(d)?.map(|w| w.0))
    }
}

pub mod vec_bigint {
    use num_bigint::BigInt;
    use serde::ser::SerializeSeq;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        #[derive(serde::Serialize)]
        struct Wrap<'a>(#[serde(with = "super::bigint")] &'a BigInt);
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for x in v {
            seq.serialize_element(&Wrap(x))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        #[derive(Deserialize)]
        struct Wrap(#[serde(with = "super::bigint")] BigInt);
        Ok(Vec::<Wrap>::deserialize(d)?.into_iter().map(|w| w.0).collect())
    }
}
