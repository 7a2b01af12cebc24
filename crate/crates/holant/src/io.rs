//! JSON formats for signatures, signature sets and grids.

use std::fs;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};

use crate::error::{HolantError, Result};
use crate::grid::{Side, SignatureGrid, Slot};
use crate::scalar::{imag_unit, Backend, CycloScalar, FloatScalar, Scalar};
use crate::signature::{builtin, index_of, Signature};

fn parse_err(m: impl Into<String>) -> HolantError {
    HolantError::Parse(m.into())
}

/// Scalars that can be read from and written to JSON.
pub trait JsonScalar: Scalar {
    fn from_json(v: &Value) -> Result<Self>;
    fn to_json(&self) -> Value;
}

impl JsonScalar for CycloScalar {
    fn from_json(v: &Value) -> Result<Self> {
        match v {
            Value::Number(n) => {
                if let Some(i) = n.as_i64() {
                    Ok(CycloScalar::from_i64(i))
                } else {
                    let f = n.as_f64().unwrap_or(f64::NAN);
                    if f.fract() == 0.0 && f.abs() < 9e15 {
                        Ok(CycloScalar::from_i64(f as i64))
                    } else {
                        Err(HolantError::InexactBackend)
                    }
                }
            }
            Value::String(s) => s.parse(),
            Value::Object(o) if o.contains_key("order") => {
                serde_json::from_value(v.clone()).map_err(|e| parse_err(e.to_string()))
            }
            Value::Object(o) if o.contains_key("re") => {
                let part = |k: &str| -> Result<CycloScalar> {
                    o.get(k).map_or(Ok(CycloScalar::zero()), CycloScalar::from_json)
                };
                Ok(part("re")?.plus(&part("im")?.times(&imag_unit())))
            }
            other => Err(parse_err(format!("not a scalar: {other}"))),
        }
    }

    fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("serializable")
    }
}

impl JsonScalar for FloatScalar {
    fn from_json(v: &Value) -> Result<Self> {
        match v {
            Value::Number(n) => Ok(FloatScalar::new(n.as_f64().unwrap_or(f64::NAN), 0.0)),
            Value::Object(o) if o.contains_key("re") && !o.contains_key("order") => {
                let part = |k: &str| -> Result<f64> {
                    match o.get(k) {
                        None => Ok(0.0),
                        Some(x) => Ok(FloatScalar::from_json(x)?.re()),
                    }
                };
                Ok(FloatScalar::new(part("re")?, part("im")?))
            }
            _ => Ok(CycloScalar::from_json(v)?.approx()),
        }
    }

    fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("serializable")
    }
}

pub fn signature_from_json<S: JsonScalar>(v: &Value) -> Result<Signature<S>> {
    if let Value::String(name) = v {
        return builtin(name);
    }
    let obj = v.as_object().ok_or_else(|| parse_err("signature must be an object"))?;
    let arity = obj
        .get("arity")
        .and_then(Value::as_u64)
        .ok_or_else(|| parse_err("missing integer `arity`"))? as usize;
    let cap = crate::signature::arity_cap();
    if arity > cap {
        return Err(HolantError::ArityCap { arity, cap });
    }
    if let Some(values) = obj.get("values") {
        let values = values.as_array().ok_or_else(|| parse_err("`values` must be an array"))?;
        let parsed = values.iter().map(S::from_json).collect::<Result<Vec<_>>>()?;
        return Signature::new(arity, parsed);
    }
    if let Some(entries) = obj.get("entries") {
        let entries = entries.as_array().ok_or_else(|| parse_err("`entries` must be an array"))?;
        let mut values = vec![S::zero(); 1 << arity];
        for e in entries {
            let bits = e
                .get("bits")
                .and_then(Value::as_str)
                .ok_or_else(|| parse_err("entry needs a `bits` string"))?;
            if bits.len() != arity || !bits.chars().all(|c| c == '0' || c == '1') {
                return Err(parse_err(format!("bad bit string `{bits}` for arity {arity}")));
            }
            let b: Vec<u8> = bits.bytes().map(|c| c - b'0').collect();
            let value = e.get("value").ok_or_else(|| parse_err("entry needs a `value`"))?;
            values[index_of(&b)] = S::from_json(value)?;
        }
        return Signature::new(arity, values);
    }
    Err(parse_err("signature needs `values` or `entries`"))
}

pub fn signature_to_json<S: JsonScalar>(f: &Signature<S>) -> Value {
    let backend = match S::BACKEND {
        Backend::Exact => "exact",
        Backend::Float => "float",
    };
    json!({
        "arity": f.arity(),
        "backend": backend,
        "values": f.values().iter().map(JsonScalar::to_json).collect::<Vec<_>>(),
    })
}

fn read_json(path: &Path) -> Result<Value> {
    let text = fs::read_to_string(path).map_err(|e| parse_err(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| parse_err(format!("{}: {e}", path.display())))
}

/// Reads a signature file, or a builtin name when no such file exists.
pub fn read_signature<S: JsonScalar>(source: &str) -> Result<Signature<S>> {
    let path = Path::new(source);
    if path.exists() {
        signature_from_json(&read_json(path)?)
    } else {
        builtin(source).map_err(|_| parse_err(format!("no file or builtin named `{source}`")))
    }
}

/// A single signature, an array of them, or `{"signatures": [...]}`.
pub fn signature_set_from_json<S: JsonScalar>(v: &Value) -> Result<Vec<Signature<S>>> {
    let list = match v {
        Value::Array(a) => a.clone(),
        Value::Object(o) if o.contains_key("signatures") => o["signatures"]
            .as_array()
            .cloned()
            .ok_or_else(|| parse_err("`signatures` must be an array"))?,
        other => vec![other.clone()],
    };
    list.iter().map(signature_from_json).collect()
}

pub fn read_signature_set<S: JsonScalar>(source: &str) -> Result<Vec<Signature<S>>> {
    let path = Path::new(source);
    if path.exists() {
        signature_set_from_json(&read_json(path)?)
    } else {
        Ok(vec![read_signature(source)?])
    }
}

pub fn grid_from_json<S: JsonScalar>(v: &Value, base: &Path) -> Result<SignatureGrid<S>> {
    let obj = v.as_object().ok_or_else(|| parse_err("grid must be an object"))?;
    let vs = obj
        .get("vertices")
        .and_then(Value::as_array)
        .ok_or_else(|| parse_err("grid needs a `vertices` array"))?;
    let mut vertices = Vec::with_capacity(vs.len());
    for (k, vert) in vs.iter().enumerate() {
        let sig = vert.get("sig").ok_or_else(|| parse_err(format!("vertex {k} needs `sig`")))?;
        let f: Signature<S> = match sig {
            Value::String(s) => {
                let p: PathBuf = base.join(s);
                if p.exists() {
                    signature_from_json(&read_json(&p)?)?
                } else {
                    builtin(s)?
                }
            }
            inline => signature_from_json(inline)?,
        };
        if let Some(slots) = vert.get("slots").and_then(Value::as_u64) {
            if slots as usize != f.arity() {
                return Err(HolantError::MalformedGrid(format!(
                    "vertex {k} declares {slots} slots but its signature has arity {}",
                    f.arity()
                )));
            }
        }
        vertices.push(f);
    }
    let es = obj
        .get("edges")
        .and_then(Value::as_array)
        .ok_or_else(|| parse_err("grid needs an `edges` array"))?;
    let mut edges = Vec::with_capacity(es.len());
    for e in es {
        let pair: [Slot; 2] = serde_json::from_value(e.clone()).map_err(|err| parse_err(format!("bad edge {e}: {err}")))?;
        edges.push((pair[0], pair[1]));
    }
    let bipartition = match obj.get("bipartition") {
        None | Some(Value::Null) => None,
        Some(b) => Some(serde_json::from_value::<Vec<Side>>(b.clone()).map_err(|e| parse_err(e.to_string()))?),
    };
    SignatureGrid::new(vertices, edges, bipartition)
}

pub fn read_grid<S: JsonScalar>(path: &Path) -> Result<SignatureGrid<S>> {
    let base = path.parent().unwrap_or(Path::new("."));
    grid_from_json(&read_json(path)?, base)
}

/// Scalar rendered as a short string: integers and rationals plainly, else the float value.
pub fn scalar_string<S: Scalar>(x: &S) -> String {
    if let Some(e) = x.as_exact() {
        if let Some(r) = e.as_rational() {
            return r.to_string();
        }
        return e.to_string();
    }
    let c = x.to_complex();
    if c.im.abs() <= crate::scalar::epsilon() {
        format!("{}", c.re)
    } else {
        format!("{}{:+}i", c.re, c.im)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signature::{equality, exact};

    #[test]
    fn dense_and_sparse() {
        let v = json!({"arity": 2, "backend": "exact", "values": [1, "1/2", "i", {"re": 0, "im": -1}]});
        let f: Signature<CycloScalar> = signature_from_json(&v).unwrap();
        assert_eq!(f.get(1), &CycloScalar::from_ratio(1, 2));
        assert_eq!(f.get(2), &imag_unit());
        assert_eq!(f.get(3), &imag_unit().negated());
        let back: Signature<CycloScalar> = signature_from_json(&signature_to_json(&f)).unwrap();
        assert_eq!(back, f);
        let s = json!({"arity": 3, "entries": [{"bits": "000", "value": 1}, {"bits": "111", "value": 1}]});
        assert_eq!(signature_from_json::<CycloScalar>(&s).unwrap(), equality(3));
        let bad = json!({"arity": 2, "values": [1, 2, 3]});
        assert!(signature_from_json::<CycloScalar>(&bad).is_err());
        let inexact = json!({"arity": 1, "values": [0.5, 1]});
        assert_eq!(signature_from_json::<CycloScalar>(&inexact), Err(HolantError::InexactBackend));
        let fl: Signature<FloatScalar> = signature_from_json(&inexact).unwrap();
        assert_eq!(fl.get(0).re(), 0.5);
    }

    #[test]
    fn sets_and_grids() {
        let set = json!([{"arity": 1, "values": [1, 0]}, "eq3"]);
        let s: Vec<Signature<CycloScalar>> = signature_set_from_json(&set).unwrap();
        assert_eq!(s[1], equality(3));
        let g = json!({
            "vertices": [{"sig": "eq2", "slots": 2}, {"sig": "eq2", "slots": 2}, {"sig": "eq2", "slots": 2}],
            "edges": [[{"v":0,"slot":1},{"v":1,"slot":0}], [{"v":1,"slot":1},{"v":2,"slot":0}], [{"v":2,"slot":1},{"v":0,"slot":0}]]
        });
        let grid: SignatureGrid<CycloScalar> = grid_from_json(&g, Path::new(".")).unwrap();
        assert_eq!(grid.vertices().len(), 3);
        let wrong = json!({"vertices": [{"sig": "eq3", "slots": 2}], "edges": []});
        assert!(grid_from_json::<CycloScalar>(&wrong, Path::new(".")).is_err());
        assert_eq!(scalar_string(&exact(1, &[3, 0]).get(0).clone()), "3");
    }
}
