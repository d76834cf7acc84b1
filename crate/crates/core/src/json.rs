//! Canonical JSON encodings.
//!
//! Objects are built as `serde_json::Value` maps, which keep keys sorted, and
//! integers inside rationals are decimal strings, so emitting a parsed
//! document reproduces it byte for byte.

use num_bigint::BigInt;
use serde_json::{json, Map, Value};

use crate::convolution::{RankOneData, ReductionStep, ReductionTrace};
use crate::error::{Error, Result};
use crate::field::{format_rational, CycNumber, ExactMatrix, Rational, RootOfUnity};
use crate::hypergeometric::MultiplicityFunction;
use crate::monodromy::{JordanType, MonodromyTuple};

/// Conversion to and from the canonical JSON shape of a type.
pub trait Json: Sized {
    fn to_json(&self) -> Value;
    fn from_json(v: &Value) -> Result<Self>;

    fn to_json_string(&self) -> String {
        to_canonical_string(&self.to_json())
    }

    fn from_json_str(s: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_json(&v)
    }
}

/// Pretty-printed with sorted keys and a trailing newline.
pub fn to_canonical_string(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values always serialize");
    s.push('\n');
    s
}

fn err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key)
        .ok_or_else(|| err(format!("missing field {key:?}")))
}

fn as_u64(v: &Value, what: &str) -> Result<u64> {
    v.as_u64()
        .ok_or_else(|| err(format!("{what} must be a non-negative integer")))
}

fn as_array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array()
        .ok_or_else(|| err(format!("{what} must be an array")))
}

fn as_str<'a>(v: &'a Value, what: &str) -> Result<&'a str> {
    v.as_str()
        .ok_or_else(|| err(format!("{what} must be a string")))
}

fn order_field(v: &Value) -> Result<u32> {
    let n = as_u64(field(v, "N")?, "N")?;
    u32::try_from(n)
        .ok()
        .filter(|&n| n > 0)
        .ok_or(Error::InvalidOrder)
}

fn big(v: &Value) -> Result<BigInt> {
    match v {
        Value::String(s) => s
            .trim()
            .parse()
            .map_err(|_| err(format!("bad integer {s:?}"))),
        Value::Number(n) if n.is_i64() || n.is_u64() => {
            Ok(n.to_string().parse().expect("integer literal"))
        }
        _ => Err(err("integers are encoded as decimal strings")),
    }
}

fn rational_to_json(r: &Rational) -> Value {
    json!([r.numer().to_string(), r.denom().to_string()])
}

fn rational_from_json(v: &Value) -> Result<Rational> {
    match as_array(v, "rational")?.as_slice() {
        [n, d] => {
            let d = big(d)?;
            if d == BigInt::from(0) {
                return Err(err("zero denominator"));
            }
            Ok(Rational::new(big(n)?, d))
        }
        _ => Err(err("rational must be [numerator, denominator]")),
    }
}

impl Json for CycNumber {
    fn to_json(&self) -> Value {
        json!({
            "N": self.order(),
            "coeffs": self.coeffs().iter().map(rational_to_json).collect::<Vec<_>>(),
        })
    }

    /// Coefficients are in the power basis `1, zeta, zeta^2, ...`; any length
    /// is accepted and reduced modulo the cyclotomic polynomial.
    fn from_json(v: &Value) -> Result<Self> {
        let order = order_field(v)?;
        let coeffs = as_array(field(v, "coeffs")?, "coeffs")?;
        let mut raw = vec![Rational::from_integer(0.into()); order as usize];
        for (k, c) in coeffs.iter().enumerate() {
            raw[k % order as usize] += rational_from_json(c)?;
        }
        CycNumber::normalize(raw, order)
    }
}

impl Json for ExactMatrix {
    fn to_json(&self) -> Value {
        json!({
            "rows": self.rows(),
            "cols": self.cols(),
            "entries": self.entries().iter().map(Json::to_json).collect::<Vec<_>>(),
        })
    }

    fn from_json(v: &Value) -> Result<Self> {
        let rows = as_u64(field(v, "rows")?, "rows")? as usize;
        let cols = as_u64(field(v, "cols")?, "cols")? as usize;
        let entries = as_array(field(v, "entries")?, "entries")?
            .iter()
            .map(CycNumber::from_json)
            .collect::<Result<Vec<_>>>()?;
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{rows}x{cols} matrix with {} entries",
                entries.len()
            )));
        }
        ExactMatrix::new(rows, cols, entries)
    }
}

impl Json for MonodromyTuple {
    fn to_json(&self) -> Value {
        json!({
            "N": self.order(),
            "n": self.rank(),
            "punctures": self.finite_punctures().iter().map(format_rational).collect::<Vec<_>>(),
            "matrices": self.matrices().iter().map(Json::to_json).collect::<Vec<_>>(),
        })
    }

    fn from_json(v: &Value) -> Result<Self> {
        let order = order_field(v)?;
        let n = as_u64(field(v, "n")?, "n")? as usize;
        let punctures = as_array(field(v, "punctures")?, "punctures")?
            .iter()
            .map(|p| match p {
                Value::Number(_) => crate::field::parse_rational(&p.to_string()),
                _ => crate::field::parse_rational(as_str(p, "puncture")?),
            })
            .collect::<Result<Vec<_>>>()?;
        let matrices = as_array(field(v, "matrices")?, "matrices")?
            .iter()
            .map(ExactMatrix::from_json)
            .collect::<Result<Vec<_>>>()?;
        if let Some(m) = matrices.iter().find(|m| m.rows() != n || m.cols() != n) {
            return Err(Error::DimensionMismatch(format!(
                "expected {n}x{n}, found {}x{}",
                m.rows(),
                m.cols()
            )));
        }
        MonodromyTuple::new(order, punctures, matrices)
    }
}

fn root_to_json(z: &RootOfUnity, order: u32) -> Value {
    z.to_cyc(crate::field::lcm(order, z.order())).to_json()
}

fn root_from_json(v: &Value) -> Result<RootOfUnity> {
    if let Some(s) = v.as_str() {
        return RootOfUnity::parse(s);
    }
    let c = CycNumber::from_json(v)?;
    c.as_root_of_unity()
        .ok_or_else(|| Error::NotRootOfUnity(c.to_string()))
}

/// Jordan types carry no cyclotomic order of their own; eigenvalues are
/// written over `Q(zeta_N)` for the `N` supplied here.
pub fn jordan_type_to_json(j: &JordanType, order: u32) -> Value {
    Value::Array(
        j.blocks()
            .iter()
            .map(|b| json!({"eigenvalue": root_to_json(&b.eigenvalue, order), "size": b.size, "mult": b.mult}))
            .collect(),
    )
}

pub fn jordan_type_from_json(v: &Value) -> Result<JordanType> {
    let blocks = as_array(v, "Jordan type")?
        .iter()
        .map(|b| {
            Ok((
                root_from_json(field(b, "eigenvalue")?)?,
                as_u64(field(b, "size")?, "size")? as usize,
                as_u64(field(b, "mult")?, "mult")? as usize,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(JordanType::from_blocks(blocks))
}

impl Json for RankOneData {
    fn to_json(&self) -> Value {
        Value::Array(self.scalars().iter().map(Json::to_json).collect())
    }

    /// Accepts an array of CycNumber objects or root-of-unity strings.
    fn from_json(v: &Value) -> Result<Self> {
        let scalars = as_array(v, "scalars")?
            .iter()
            .map(|s| match s.as_str() {
                Some(text) => RootOfUnity::parse(text).map(|z| z.to_cyc(z.order())),
                None => CycNumber::from_json(s),
            })
            .collect::<Result<Vec<_>>>()?;
        RankOneData::new(scalars)
    }
}

impl Json for ReductionTrace {
    fn to_json(&self) -> Value {
        let steps = self
            .steps
            .iter()
            .map(|s| json!({"twist": s.twist.to_json(), "lambda": s.lambda.to_json(), "rank": s.rank}))
            .collect::<Vec<_>>();
        json!({ "steps": steps })
    }

    fn from_json(v: &Value) -> Result<Self> {
        let steps = as_array(field(v, "steps")?, "steps")?
            .iter()
            .map(|s| {
                Ok(ReductionStep {
                    twist: RankOneData::from_json(field(s, "twist")?)?,
                    lambda: CycNumber::from_json(field(s, "lambda")?)?,
                    rank: as_u64(field(s, "rank")?, "rank")? as usize,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ReductionTrace { steps })
    }
}

/// `{"N": int, "m": [{"zeta": "zeta3", "mult": 2}, ...]}`.
pub fn multiplicity_from_json(v: &Value) -> Result<(MultiplicityFunction, u32)> {
    let order = order_field(v)?;
    let entries = as_array(field(v, "m")?, "m")?
        .iter()
        .map(|e| {
            let z = root_from_json(field(e, "zeta")?)
                .map_err(|e| Error::InvalidMultiplicity(e.to_string()))?;
            if order % z.order() != 0 {
                return Err(Error::InvalidMultiplicity(format!(
                    "{z} is not in mu_{order}"
                )));
            }
            let m = as_u64(field(e, "mult")?, "mult")? as usize;
            Ok((z, m))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((MultiplicityFunction::new(entries)?, order))
}

pub fn multiplicity_to_json(m: &MultiplicityFunction, order: u32) -> Value {
    let entries = m
        .entries()
        .map(|(z, k)| json!({"zeta": z.to_string(), "mult": k}))
        .collect::<Vec<_>>();
    json!({"N": order, "m": entries})
}

/// `{"N": int, "coeffs": [CycNumber, ...]}`, constant term first.
pub fn polynomial_from_json(v: &Value) -> Result<Vec<CycNumber>> {
    let order = order_field(v)?;
    as_array(field(v, "coeffs")?, "coeffs")?
        .iter()
        .map(|c| match c {
            Value::Object(_) => {
                CycNumber::from_json(c).map(|x| x.lift(crate::field::lcm(order, x.order())))
            }
            _ => Ok(CycNumber::from_rational(
                rational_from_json(c).or_else(|_| big(c).map(Rational::from_integer))?,
                order,
            )),
        })
        .collect()
}

pub fn polynomial_to_json(coeffs: &[CycNumber], order: u32) -> Value {
    let mut m = Map::new();
    m.insert("N".into(), json!(order));
    m.insert(
        "coeffs".into(),
        Value::Array(coeffs.iter().map(|c| c.lift(order).to_json()).collect()),
    );
    Value::Object(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::convolution::{build_f, katz_reduce};
    use crate::field::rat;

    #[test]
    fn cyc_number_shape() {
        let x = &CycNumber::zeta_pow(3, 1).scale(&rat(-1, 2)) + &CycNumber::from_int(2, 3);
        let s = x.to_json_string();
        assert_eq!(s, "{\n  \"N\": 3,\n  \"coeffs\": [\n    [\n      \"2\",\n      \"1\"\n    ],\n    [\n      \"-1\",\n      \"2\"\n    ]\n  ]\n}\n");
        assert_eq!(CycNumber::from_json_str(&s).unwrap(), x);
    }

    #[test]
    fn unreduced_input_is_normalized() {
        // zeta3^2 = -1 - zeta3
        let x = CycNumber::from_json_str(r#"{"N": 3, "coeffs": [["0","1"],["0","1"],["1","1"]]}"#)
            .unwrap();
        assert_eq!(x, CycNumber::zeta_pow(3, 2));
    }

    #[test]
    fn tuple_round_trip_is_byte_identical() {
        for i in 0..4 {
            let t = build_f(i).unwrap();
            let s = t.to_json_string();
            let back = MonodromyTuple::from_json_str(&s).unwrap();
            assert_eq!(back, t);
            assert_eq!(back.to_json_string(), s);
        }
    }

    #[test]
    fn trace_round_trip() {
        let trace = katz_reduce(&build_f(3).unwrap()).unwrap();
        let s = trace.to_json_string();
        assert_eq!(
            ReductionTrace::from_json_str(&s).unwrap().to_json_string(),
            s
        );
    }

    #[test]
    fn jordan_round_trip() {
        let j = JordanType::from_blocks([
            (RootOfUnity::minus_one(), 2, 3),
            (RootOfUnity::new(1, 3), 1, 1),
        ]);
        let v = jordan_type_to_json(&j, 6);
        assert_eq!(jordan_type_from_json(&v).unwrap(), j);
    }

    #[test]
    fn multiplicity_parsing() {
        let v: Value = serde_json::from_str(
            r#"{"N": 6, "m": [{"zeta": "zeta3", "mult": 2}, {"zeta": "-1", "mult": 1}]}"#,
        )
        .unwrap();
        let (m, n) = multiplicity_from_json(&v).unwrap();
        assert_eq!((m.total(), n), (3, 6));
        assert_eq!(
            multiplicity_from_json(&multiplicity_to_json(&m, n))
                .unwrap()
                .0,
            m
        );
        let bad: Value =
            serde_json::from_str(r#"{"N": 4, "m": [{"zeta": "zeta3", "mult": 2}]}"#).unwrap();
        assert!(matches!(
            multiplicity_from_json(&bad),
            Err(Error::InvalidMultiplicity(_))
        ));
    }

    #[test]
    fn twist_scalars_from_strings() {
        let v: Value =
            serde_json::from_str(r#"["zeta3^2", "-1", {"N": 1, "coeffs": [["1","1"]]}]"#).unwrap();
        let t = RankOneData::from_json(&v).unwrap();
        assert_eq!(t.scalars()[0], CycNumber::zeta_pow(3, 2));
        assert_eq!(t.scalars()[1], CycNumber::from_int(-1, 1));
        assert!(t.scalars()[2].is_one());
    }

    #[test]
    fn malformed_input() {
        assert!(CycNumber::from_json_str("{").is_err());
        assert!(CycNumber::from_json_str(r#"{"N": 0, "coeffs": []}"#).is_err());
        assert!(CycNumber::from_json_str(r#"{"N": 2, "coeffs": [["1","0"]]}"#).is_err());
        assert!(ExactMatrix::from_json_str(r#"{"rows": 2, "cols": 2, "entries": []}"#).is_err());
    }

    #[test]
    fn polynomial_accepts_plain_rationals() {
        let v: Value = serde_json::from_str(r#"{"N": 1, "coeffs": [["2","1"], "-3", 1]}"#).unwrap();
        let p = polynomial_from_json(&v).unwrap();
        assert_eq!(
            p,
            vec![
                CycNumber::from_int(2, 1),
                CycNumber::from_int(-3, 1),
                CycNumber::one(1)
            ]
        );
        assert_eq!(polynomial_from_json(&polynomial_to_json(&p, 1)).unwrap(), p);
    }
}
