use std::cmp::Ordering;
use std::fmt;

use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::Rational;

/// Edge weight of the singular graph: an integer `k >= 2` or `∞`.
///
/// Ordered with finite weights ascending and `∞` last.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Weight(Option<u64>);

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum WeightError {
    #[error("edge weight must be at least 2, got {0}")]
    TooSmall(u64),
}

impl Weight {
    pub const INFINITY: Weight = Weight(None);
    pub const TWO: Weight = Weight(Some(2));

    pub fn new(k: u64) -> Result<Self, WeightError> {
        if k < 2 {
            Err(WeightError::TooSmall(k))
        } else {
            Ok(Weight(Some(k)))
        }
    }

    /// Panicking constructor for literals.
    pub fn finite(k: u64) -> Self {
        Self::new(k).expect("edge weight must be at least 2")
    }

    pub fn value(self) -> Option<u64> {
        self.0
    }

    pub fn is_infinite(self) -> bool {
        self.0.is_none()
    }

    /// `1/k`, with `1/∞ = 0`.
    pub fn reciprocal(self) -> Rational {
        match self.0 {
            Some(k) => Rational::new(1, k as i64),
            None => Rational::zero(),
        }
    }

    /// Contribution `1 - 1/k` of a puncture of this weight.
    pub fn puncture_term(self) -> Rational {
        Rational::one() - self.reciprocal()
    }
}

pub fn weight_reciprocal(w: Weight) -> Rational {
    w.reciprocal()
}

impl Ord for Weight {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.0, other.0) {
            (Some(a), Some(b)) => a.cmp(&b),
            (Some(_), None) => Ordering::Less,
            (None, Some(_)) => Ordering::Greater,
            (None, None) => Ordering::Equal,
        }
    }
}

impl PartialOrd for Weight {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            Some(k) => write!(f, "{k}"),
            None => write!(f, "inf"),
        }
    }
}

impl fmt::Debug for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl std::str::FromStr for Weight {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "inf" | "∞" | "infinity" => Ok(Weight::INFINITY),
            other => {
                let k: u64 = other.parse().map_err(|_| format!("bad weight `{s}`"))?;
                Weight::new(k).map_err(|e| e.to_string())
            }
        }
    }
}

impl Serialize for Weight {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self.0 {
            Some(k) => serializer.serialize_u64(k),
            None => serializer.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Weight {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct WeightVisitor;

        impl<'de> Visitor<'de> for WeightVisitor {
            type Value = Weight;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an integer >= 2 or the string \"inf\"")
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Weight, E> {
                Weight::new(v).map_err(E::custom)
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Weight, E> {
                if v < 0 {
                    return Err(E::custom(format!("negative weight {v}")));
                }
                self.visit_u64(v as u64)
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<Weight, E> {
                if v == "inf" {
                    Ok(Weight::INFINITY)
                } else {
                    Err(E::custom(format!("unknown weight string `{v}`")))
                }
            }
        }

        deserializer.deserialize_any(WeightVisitor)
    }
}

/// Weight of an sc-disc: 1 for an unpunctured disc, otherwise the puncture weight.
///
/// Serializes as `1`, an integer `>= 2`, or `"inf"`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DiscWeight {
    Unpunctured,
    Punctured(Weight),
}

impl DiscWeight {
    pub fn reciprocal(self) -> Rational {
        match self {
            DiscWeight::Unpunctured => Rational::one(),
            DiscWeight::Punctured(w) => w.reciprocal(),
        }
    }

    pub fn weight(self) -> Option<Weight> {
        match self {
            DiscWeight::Unpunctured => None,
            DiscWeight::Punctured(w) => Some(w),
        }
    }
}

impl From<Option<Weight>> for DiscWeight {
    fn from(w: Option<Weight>) -> Self {
        match w {
            None => DiscWeight::Unpunctured,
            Some(w) => DiscWeight::Punctured(w),
        }
    }
}

impl fmt::Display for DiscWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DiscWeight::Unpunctured => write!(f, "1"),
            DiscWeight::Punctured(w) => write!(f, "{w}"),
        }
    }
}

impl Serialize for DiscWeight {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            DiscWeight::Unpunctured => serializer.serialize_u64(1),
            DiscWeight::Punctured(w) => w.serialize(serializer),
        }
    }
}

impl<'de> Deserialize<'de> for DiscWeight {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(u64),
            Str(String),
        }
        match Raw::deserialize(deserializer)? {
            Raw::Int(1) => Ok(DiscWeight::Unpunctured),
            Raw::Int(k) => Weight::new(k)
                .map(DiscWeight::Punctured)
                .map_err(de::Error::custom),
            Raw::Str(s) if s == "inf" => Ok(DiscWeight::Punctured(Weight::INFINITY)),
            Raw::Str(s) => Err(de::Error::custom(format!("unknown disc weight `{s}`"))),
        }
    }
}
