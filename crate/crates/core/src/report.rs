//! Serialization helpers for reports: exact values travel as strings.

use num_bigint::BigUint;
use serde::Serializer;

use crate::exact::{format_rational, Rational};

/// JSON schema tag carried by every top-level report.
pub const SCHEMA: &str = "kklab/1";

pub fn biguint_string<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

pub fn rational_string<S: Serializer>(v: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&format_rational(v))
}

pub fn opt_rational_string<S: Serializer>(v: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(r) => s.serialize_str(&format_rational(r)),
        None => s.serialize_none(),
    }
}

pub fn rational_pair<S: Serializer>(v: &(Rational, Rational), s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq([format_rational(&v.0), format_rational(&v.1)])
}

pub fn graph6_string<S: Serializer>(g: &crate::graph::Graph, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&crate::graph::io::to_graph6(g))
}
