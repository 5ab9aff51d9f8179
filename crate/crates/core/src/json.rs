//! `serialize_with` helpers that write big integers as plain JSON numbers.

use serde::{Serialize, Serializer};
use serde_json::Number;

use crate::arith::Int;
use crate::classes::{CurveClass, DivisorClass};

pub fn number(x: &Int) -> Number {
    x.to_string().parse().expect("integer literal is a JSON number")
}

pub fn numbers(v: &[Int]) -> Vec<Number> {
    v.iter().map(number).collect()
}

pub fn int<S: Serializer>(x: &Int, s: S) -> Result<S::Ok, S::Error> {
    number(x).serialize(s)
}

pub fn opt_int<S: Serializer>(x: &Option<Int>, s: S) -> Result<S::Ok, S::Error> {
    x.as_ref().map(number).serialize(s)
}

pub fn ints<S: Serializer>(v: &[Int], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(number))
}

pub fn curve<S: Serializer>(c: &CurveClass, s: S) -> Result<S::Ok, S::Error> {
    ints(c.entries(), s)
}

pub fn curves<S: Serializer>(v: &[CurveClass], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|c| numbers(c.entries())))
}

pub fn divisor<S: Serializer>(d: &DivisorClass, s: S) -> Result<S::Ok, S::Error> {
    ints(d.coeffs(), s)
}

pub fn divisors<S: Serializer>(v: &[DivisorClass], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|d| numbers(d.coeffs())))
}
