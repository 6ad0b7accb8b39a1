//! Margins (bound minus value) and the parameter tuples at which they occur.

use std::cmp::Ordering;
use std::fmt;

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::ser::{Serialize, SerializeMap, Serializer};

use crate::exact::rational_to_f64;
use crate::format;

/// `bound - value` for a checked inequality.
#[derive(Debug, Clone, PartialEq)]
pub enum Margin {
    /// Both sides were exact rationals.
    Exact(BigRational),
    /// At least one side came from double-precision evaluation.
    Approx(f64),
}

impl Margin {
    pub fn is_positive(&self) -> bool {
        match self {
            Margin::Exact(q) => q.is_positive(),
            Margin::Approx(x) => *x > 0.0,
        }
    }

    pub fn is_nonnegative(&self) -> bool {
        match self {
            Margin::Exact(q) => !q.is_negative(),
            Margin::Approx(x) => *x >= 0.0,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Margin::Exact(q) => q.is_zero(),
            Margin::Approx(x) => *x == 0.0,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Margin::Exact(q) => rational_to_f64(q),
            Margin::Approx(x) => *x,
        }
    }

    /// Orders two margins; exact values compare exactly among themselves.
    pub fn total_cmp(&self, other: &Margin) -> Ordering {
        match (self, other) {
            (Margin::Exact(a), Margin::Exact(b)) => a.cmp(b),
            _ => self.to_f64().total_cmp(&other.to_f64()),
        }
    }
}

impl fmt::Display for Margin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Margin::Exact(q) => f.write_str(&format::rational(q)),
            Margin::Approx(x) => f.write_str(&format::real(*x)),
        }
    }
}

impl Serialize for Margin {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum WitnessValue {
    Int(i64),
    Rational(BigRational),
    Real(f64),
    Label(&'static str),
}

impl fmt::Display for WitnessValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WitnessValue::Int(v) => write!(f, "{v}"),
            WitnessValue::Rational(q) => f.write_str(&format::rational(q)),
            WitnessValue::Real(x) => f.write_str(&format::real(*x)),
            WitnessValue::Label(s) => f.write_str(s),
        }
    }
}

impl Serialize for WitnessValue {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            WitnessValue::Int(v) => serializer.serialize_i64(*v),
            _ => serializer.collect_str(self),
        }
    }
}

/// Named parameters in insertion order, e.g. `m=2, p=101/200`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Witness(Vec<(&'static str, WitnessValue)>);

impl Witness {
    pub fn new() -> Self {
        Witness(Vec::new())
    }

    pub fn int(mut self, key: &'static str, v: impl Into<i64>) -> Self {
        self.0.push((key, WitnessValue::Int(v.into())));
        self
    }

    pub fn rational(mut self, key: &'static str, q: &BigRational) -> Self {
        self.0.push((key, WitnessValue::Rational(q.clone())));
        self
    }

    pub fn real(mut self, key: &'static str, x: f64) -> Self {
        self.0.push((key, WitnessValue::Real(x)));
        self
    }

    pub fn label(mut self, key: &'static str, s: &'static str) -> Self {
        self.0.push((key, WitnessValue::Label(s)));
        self
    }

    pub fn get(&self, key: &str) -> Option<&WitnessValue> {
        self.0.iter().find(|(k, _)| *k == key).map(|(_, v)| v)
    }

    pub fn get_int(&self, key: &str) -> Option<i64> {
        match self.get(key)? {
            WitnessValue::Int(v) => Some(*v),
            _ => None,
        }
    }

    pub fn get_rational(&self, key: &str) -> Option<&BigRational> {
        match self.get(key)? {
            WitnessValue::Rational(q) => Some(q),
            _ => None,
        }
    }

    pub fn get_real(&self, key: &str) -> Option<f64> {
        match self.get(key)? {
            WitnessValue::Real(x) => Some(*x),
            _ => None,
        }
    }

    pub fn get_label(&self, key: &str) -> Option<&'static str> {
        match self.get(key)? {
            WitnessValue::Label(s) => Some(s),
            _ => None,
        }
    }

    pub fn entries(&self) -> impl Iterator<Item = (&'static str, &WitnessValue)> {
        self.0.iter().map(|(k, v)| (*k, v))
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (k, v)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{k}={v}")?;
        }
        Ok(())
    }
}

impl Serialize for Witness {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.0.len()))?;
        for (k, v) in &self.0 {
            map.serialize_entry(k, v)?;
        }
        map.end()
    }
}

/// Outcome of one strict or non-strict inequality check.
#[derive(Debug, Clone, PartialEq)]
pub struct MarginResult {
    pub holds: bool,
    pub margin: Margin,
    pub witness: Witness,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn witness_renders_in_order() {
        let w = Witness::new()
            .int("m", 2)
            .rational("p", &BigRational::new(101.into(), 200.into()))
            .real("x", 0.5);
        assert_eq!(w.to_string(), "m=2, p=101/200, x=0.5");
        assert_eq!(
            serde_json::to_string(&w).unwrap(),
            r#"{"m":2,"p":"101/200","x":"0.5"}"#
        );
        assert_eq!(w.get_int("m"), Some(2));
        assert_eq!(w.get_real("x"), Some(0.5));
        assert!(w.get_rational("m").is_none());
    }

    #[test]
    fn margin_signs() {
        let zero = Margin::Exact(BigRational::zero());
        assert!(zero.is_nonnegative() && !zero.is_positive() && zero.is_zero());
        assert!(Margin::Approx(1e-300).is_positive());
        assert!(!Margin::Approx(-0.0).is_positive());
        assert_eq!(
            Margin::Exact(BigRational::new(1.into(), 3.into()))
                .total_cmp(&Margin::Exact(BigRational::new(1.into(), 2.into()))),
            Ordering::Less
        );
    }
}
