//! Serde adapters that carry arbitrary-size integers as decimal strings.

use rug::Integer;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serializer};

pub fn serialize<S: Serializer>(n: &Integer, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&n.to_string())
}

pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Integer, D::Error> {
    let raw = String::deserialize(d)?;
    raw.trim()
        .parse::<Integer>()
        .map_err(|e| D::Error::custom(format!("bad integer {raw:?}: {e}")))
}

pub mod vec {
    use super::*;
    use serde::ser::SerializeSeq;

    pub fn serialize<S: Serializer>(v: &[Integer], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for n in v {
            seq.serialize_element(&n.to_string())?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Integer>, D::Error> {
        let raw = Vec::<String>::deserialize(d)?;
        raw.iter()
            .map(|r| {
                r.trim()
                    .parse::<Integer>()
                    .map_err(|e| D::Error::custom(format!("bad integer {r:?}: {e}")))
            })
            .collect()
    }
}

pub mod matrix {
    use super::*;

    pub fn serialize<S: Serializer>(m: &[[Integer; 2]; 2], s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> = m
            .iter()
            .map(|r| r.iter().map(|x| x.to_string()).collect())
            .collect();
        serde::Serialize::serialize(&rows, s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<[[Integer; 2]; 2], D::Error> {
        let rows = <[[String; 2]; 2]>::deserialize(d)?;
        let p = |r: &String| {
            r.trim()
                .parse::<Integer>()
                .map_err(|e| D::Error::custom(format!("bad integer {r:?}: {e}")))
        };
        Ok([
            [p(&rows[0][0])?, p(&rows[0][1])?],
            [p(&rows[1][0])?, p(&rows[1][1])?],
        ])
    }
}
