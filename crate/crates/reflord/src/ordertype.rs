//! Order types built from ascending chains, descending chains, and finite
//! blocks, with a confluent rewriting system deciding equality.

use crate::error::{Error, Result};
use std::fmt;

/// One summand of an order type.
#[derive(Copy, Clone, PartialEq, Eq, Hash, Debug)]
pub enum OrderTerm {
    /// Ascending chain of type omega.
    Omega,
    /// Descending chain of type omega-star.
    OmegaStar,
    /// Finite block of `k >= 1` elements.
    Fin(u64),
}

/// A formal sum of order terms. Construction rejects empty finite blocks;
/// `normalize` brings a sum to the unique normal form.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct OrderType {
    terms: Vec<OrderTerm>,
}

impl OrderType {
    pub fn new(terms: Vec<OrderTerm>) -> Result<OrderType> {
        if terms.iter().any(|t| matches!(t, OrderTerm::Fin(0))) {
            return Err(Error::Parse("empty finite summand [0]".into()));
        }
        Ok(OrderType { terms })
    }

    pub fn terms(&self) -> &[OrderTerm] {
        &self.terms
    }

    /// No `[a]+[b]`, no `[a]` immediately before `w`, none immediately
    /// after `w*`.
    pub fn is_normal(&self) -> bool {
        self.terms.windows(2).all(|w| {
            !matches!(
                (w[0], w[1]),
                (OrderTerm::Fin(_), OrderTerm::Fin(_))
                    | (OrderTerm::Fin(_), OrderTerm::Omega)
                    | (OrderTerm::OmegaStar, OrderTerm::Fin(_))
            )
        })
    }

    pub fn render(&self) -> String {
        self.to_string()
    }

    /// Parses the rendering grammar: terms `w`, `w*`, `[k]` joined by `+`.
    pub fn parse(s: &str) -> Result<OrderType> {
        let mut terms = Vec::new();
        if s.is_empty() {
            return OrderType::new(terms);
        }
        for part in s.split('+') {
            let t = match part {
                "w" => OrderTerm::Omega,
                "w*" => OrderTerm::OmegaStar,
                _ => {
                    let inner = part
                        .strip_prefix('[')
                        .and_then(|p| p.strip_suffix(']'))
                        .ok_or_else(|| Error::Parse(format!("bad order-type term '{part}'")))?;
                    let k: u64 = inner
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad finite block '{part}'")))?;
                    OrderTerm::Fin(k)
                }
            };
            terms.push(t);
        }
        OrderType::new(terms)
    }
}

impl fmt::Display for OrderType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, "+")?;
            }
            match t {
                OrderTerm::Omega => write!(f, "w")?,
                OrderTerm::OmegaStar => write!(f, "w*")?,
                OrderTerm::Fin(k) => write!(f, "[{k}]")?,
            }
        }
        Ok(())
    }
}

/// Rewrites to the normal form under
/// `[a]+[b] -> [a+b]`, `[a]+w -> w`, `w*+[a] -> w*`.
///
/// A single left-to-right pass suffices: the output prefix stays normal
/// after every step.
pub fn normalize(t: &OrderType) -> OrderType {
    let mut out: Vec<OrderTerm> = Vec::with_capacity(t.terms.len());
    for &term in &t.terms {
        match (out.last().copied(), term) {
            (Some(OrderTerm::OmegaStar), OrderTerm::Fin(_)) => {}
            (Some(OrderTerm::Fin(a)), OrderTerm::Fin(b)) => {
                out.pop();
                out.push(OrderTerm::Fin(a + b));
            }
            (Some(OrderTerm::Fin(_)), OrderTerm::Omega) => {
                out.pop();
                out.push(OrderTerm::Omega);
            }
            _ => out.push(term),
        }
    }
    let res = OrderType { terms: out };
    debug_assert!(res.is_normal());
    res
}

/// Order-type equality: syntactic equality of normal forms.
pub fn types_equal(a: &OrderType, b: &OrderType) -> bool {
    normalize(a) == normalize(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use OrderTerm::*;

    fn ty(ts: &[OrderTerm]) -> OrderType {
        OrderType::new(ts.to_vec()).unwrap()
    }

    #[test]
    fn star_fin_star_collapses() {
        for p in 1..=5 {
            let a = ty(&[OmegaStar, Fin(p), OmegaStar]);
            let b = ty(&[OmegaStar, OmegaStar]);
            assert!(types_equal(&a, &b), "w*+[{p}]+w* = w*+w*");
        }
    }

    #[test]
    fn fin_omega_absorbed() {
        assert!(types_equal(&ty(&[Fin(2), Omega]), &ty(&[Omega])));
        assert!(types_equal(&ty(&[Fin(3), Fin(4), Omega]), &ty(&[Omega])));
    }

    #[test]
    fn fin_before_star_is_distinct() {
        assert!(!types_equal(&ty(&[Fin(1), OmegaStar]), &ty(&[OmegaStar])));
    }

    #[test]
    fn fin_zero_rejected() {
        assert!(OrderType::new(vec![Fin(0)]).is_err());
    }

    #[test]
    fn render_parse_round_trip() {
        let t = ty(&[Omega, Omega, Fin(2), OmegaStar, Omega, Fin(1), OmegaStar, OmegaStar]);
        assert_eq!(t.render(), "w+w+[2]+w*+w+[1]+w*+w*");
        assert_eq!(OrderType::parse(&t.render()).unwrap(), t);
    }

    #[test]
    fn normalize_idempotent() {
        let t = ty(&[Fin(1), Fin(2), Omega, OmegaStar, Fin(5), Fin(1), OmegaStar, Fin(2)]);
        let n = normalize(&t);
        assert_eq!(normalize(&n), n);
        assert_eq!(n, ty(&[Omega, OmegaStar, OmegaStar]));
    }
}
