//! JSON renderings of the library's values: roots as integer coefficient
//! arrays, affine roots as `"[c,...]@level"` strings, biclosed sets as
//! sorted arrays, chains as `{"base", "steps"}` objects.

use crate::affine::{AffineRoot, HatSetDescriptor};
use crate::biclosed::{AdmissibleChain, FiniteBiclosed};
use crate::error::{Error, Result};
use crate::rootsys::{FiniteRoot, PositiveSystem, RootSystem};
use serde_json::{json, Value};
use std::collections::BTreeSet;

pub fn root_value(r: &FiniteRoot) -> Value {
    json!(r.coeffs())
}

pub fn parse_root(v: &Value) -> Result<FiniteRoot> {
    let arr = v
        .as_array()
        .ok_or_else(|| Error::Parse(format!("expected a coefficient array, got {v}")))?;
    let coeffs = arr
        .iter()
        .map(|x| {
            x.as_i64()
                .ok_or_else(|| Error::Parse(format!("non-integer coefficient {x}")))
        })
        .collect::<Result<Vec<i64>>>()?;
    Ok(FiniteRoot(coeffs))
}

pub fn root_set_value(roots: &BTreeSet<FiniteRoot>) -> Value {
    Value::Array(roots.iter().map(root_value).collect())
}

pub fn parse_root_set(v: &Value) -> Result<BTreeSet<FiniteRoot>> {
    let arr = v
        .as_array()
        .ok_or_else(|| Error::Parse(format!("expected an array of roots, got {v}")))?;
    arr.iter().map(parse_root).collect()
}

pub fn root_system_value(rs: &RootSystem) -> Value {
    json!({
        "family": rs.ctype().family().letter().to_string(),
        "rank": rs.ctype().rank(),
        "cartan": rs.cartan(),
        "simples": rs.simples().iter().map(root_value).collect::<Vec<_>>(),
        "positives": (0..rs.num_positive()).map(|i| root_value(rs.root(i))).collect::<Vec<_>>(),
        "highest_root": root_value(rs.highest_root()),
    })
}

pub fn positive_system_value(rs: &RootSystem, ps: &PositiveSystem) -> Value {
    json!({
        "roots": root_set_value(&ps.roots(rs)),
        "simples": root_set_value(&ps.simples(rs)),
    })
}

pub fn biclosed_value(rs: &RootSystem, b: &FiniteBiclosed) -> Value {
    root_set_value(&b.roots(rs))
}

pub fn chain_value(rs: &RootSystem, chain: &AdmissibleChain) -> Value {
    json!({
        "base": positive_system_value(rs, chain.base()),
        "steps": chain.steps().iter().map(|s| json!({
            "delta1": root_set_value(&s.delta1),
            "delta2": root_set_value(&s.delta2),
        })).collect::<Vec<_>>(),
    })
}

pub fn affine_value(rs: &RootSystem, x: AffineRoot) -> Value {
    Value::String(x.render(rs))
}

pub fn parse_affine(rs: &RootSystem, v: &Value) -> Result<AffineRoot> {
    let s = v
        .as_str()
        .ok_or_else(|| Error::Parse(format!("expected an affine-root string, got {v}")))?;
    AffineRoot::parse(rs, s)
}

pub fn descriptor_value(rs: &RootSystem, d: &HatSetDescriptor) -> Value {
    json!({
        "core": root_set_value(&rs.roots_from_set(d.core())),
        "added": d.added().iter().map(|&x| affine_value(rs, x)).collect::<Vec<_>>(),
        "removed": d.removed().iter().map(|&x| affine_value(rs, x)).collect::<Vec<_>>(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsys::{build_root_system, CoxeterType, Family};

    #[test]
    fn root_round_trip() {
        let r = FiniteRoot(vec![1, -2, 0]);
        assert_eq!(parse_root(&root_value(&r)).unwrap(), r);
        assert_eq!(root_value(&r).to_string(), "[1,-2,0]");
    }

    #[test]
    fn affine_round_trip() {
        let rs = build_root_system(CoxeterType::new(Family::A, 2).unwrap()).unwrap();
        let x = AffineRoot {
            gamma: rs.id_of(&FiniteRoot(vec![-1, -1])).unwrap(),
            level: 3,
        };
        let v = affine_value(&rs, x);
        assert_eq!(v, Value::String("[-1,-1]@3".into()));
        assert_eq!(parse_affine(&rs, &v).unwrap(), x);
    }

    #[test]
    fn root_system_fields() {
        let rs = build_root_system(CoxeterType::new(Family::G, 2).unwrap()).unwrap();
        let v = root_system_value(&rs);
        assert_eq!(v["family"], "G");
        assert_eq!(v["rank"], 2);
        assert_eq!(v["positives"].as_array().unwrap().len(), 6);
    }
}
