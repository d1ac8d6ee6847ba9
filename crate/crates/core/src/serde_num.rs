//! Serde adapters that write non-finite floats as the strings `"inf"`,
//! `"-inf"` and `"nan"`, since JSON has no literal for them.

use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::Deserialize;

#[derive(Deserialize)]
#[serde(untagged)]
enum Repr {
    Num(f64),
    Text(String),
}

fn parse(r: Repr) -> Result<f64, String> {
    match r {
        Repr::Num(v) => Ok(v),
        Repr::Text(s) => match s.as_str() {
            "inf" => Ok(f64::INFINITY),
            "-inf" => Ok(f64::NEG_INFINITY),
            "nan" => Ok(f64::NAN),
            other => Err(format!(
                "expected a number, \"inf\", \"-inf\" or \"nan\", got \"{other}\""
            )),
        },
    }
}

fn text(v: f64) -> &'static str {
    if v.is_nan() {
        "nan"
    } else if v > 0.0 {
        "inf"
    } else {
        "-inf"
    }
}

pub mod float {
    use super::*;

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_finite() {
            s.serialize_f64(*v)
        } else {
            s.serialize_str(text(*v))
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        parse(Repr::deserialize(d)?).map_err(de::Error::custom)
    }
}

pub mod opt_float {
    use super::*;

    pub fn serialize<S: Serializer>(v: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(v) => super::float::serialize(v, s),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<f64>, D::Error> {
        Option::<Repr>::deserialize(d)?
            .map(parse)
            .transpose()
            .map_err(de::Error::custom)
    }
}

/// Text form used in CSV cells.
pub fn cell(v: f64) -> String {
    if v.is_finite() {
        format!("{v}")
    } else {
        text(v).to_string()
    }
}

pub fn opt_cell(v: Option<f64>) -> String {
    v.map(cell).unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use serde::{Deserialize, Serialize};

    #[derive(Serialize, Deserialize, Debug)]
    struct Probe {
        #[serde(with = "super::float")]
        a: f64,
        #[serde(with = "super::opt_float")]
        b: Option<f64>,
    }

    #[test]
    fn round_trip() {
        let p = Probe {
            a: f64::INFINITY,
            b: Some(f64::NAN),
        };
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, r#"{"a":"inf","b":"nan"}"#);
        let q: Probe = serde_json::from_str(&s).unwrap();
        assert!(q.a.is_infinite() && q.b.unwrap().is_nan());
        let q: Probe = serde_json::from_str(r#"{"a":1.5,"b":null}"#).unwrap();
        assert_eq!(q.a, 1.5);
        assert!(q.b.is_none());
    }
}
