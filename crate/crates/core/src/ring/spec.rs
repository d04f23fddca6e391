//! Ring descriptors and the textual ring grammar.
//!
//! ```text
//! spec    := factor ('*' factor)*
//! factor  := 'Z/' n | 'GR(' p '^' d ',' r ')' | 'GF(' q ')' | 'POLY(' q ',' n ')'
//! ```

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::construct::prime_power;
use super::FiniteRing;
use crate::{Error, Result};

/// How a ring was constructed.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum RingSpec {
    Zmod(u64),
    Galois { p: u64, d: u32, r: u32 },
    Field(u64),
    TruncatedPoly { q: u64, n: u32 },
    Product(Vec<RingSpec>),
    /// A ring derived from another one (quotients, factors, raw tables).
    Derived(String),
}

impl fmt::Display for RingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingSpec::Zmod(n) => write!(f, "Z/{n}"),
            RingSpec::Galois { p, d, r } => write!(f, "GR({p}^{d},{r})"),
            RingSpec::Field(q) => write!(f, "GF({q})"),
            RingSpec::TruncatedPoly { q, n } => write!(f, "POLY({q},{n})"),
            RingSpec::Product(parts) => {
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        f.write_str("*")?;
                    }
                    write!(f, "{p}")?;
                }
                Ok(())
            }
            RingSpec::Derived(s) => f.write_str(s),
        }
    }
}

impl RingSpec {
    pub fn parse(text: &str) -> Result<Self> {
        let mut p = Parser { text, pos: 0 };
        let mut parts = vec![p.factor()?];
        p.skip_ws();
        while p.eat("*") {
            parts.push(p.factor()?);
            p.skip_ws();
        }
        if p.pos < text.len() {
            return Err(p.error("unexpected trailing input"));
        }
        Ok(if parts.len() == 1 {
            parts.pop().unwrap()
        } else {
            RingSpec::Product(parts)
        })
    }

    /// Construct the ring this spec describes, refusing rings above `cap`.
    pub fn build_with_cap(&self, cap: usize) -> Result<FiniteRing> {
        match self {
            RingSpec::Zmod(n) => FiniteRing::zmod_with_cap(*n, cap),
            RingSpec::Galois { p, d, r } => FiniteRing::galois_ring_with_cap(*p, *d, *r, cap),
            RingSpec::Field(q) => FiniteRing::field_with_cap(*q, cap),
            RingSpec::TruncatedPoly { q, n } => FiniteRing::truncated_poly_with_cap(*q, *n, cap),
            RingSpec::Product(parts) => {
                let rings = parts
                    .iter()
                    .map(|s| s.build_with_cap(cap).map(Arc::new))
                    .collect::<Result<Vec<_>>>()?;
                FiniteRing::direct_product_with_cap(&rings, cap)
            }
            RingSpec::Derived(s) => Err(Error::invalid(format!("cannot rebuild derived ring {s}"))),
        }
    }

    pub fn build(&self) -> Result<FiniteRing> {
        self.build_with_cap(super::DEFAULT_RING_CAP)
    }

    /// `(p, d, r)` when the spec describes a Galois ring `GR(p^d, r)`
    /// (including `Z/p^d`, fields and `POLY(q, 1)`).
    pub fn galois_parameters(&self) -> Option<(u64, u32, u32)> {
        match *self {
            RingSpec::Galois { p, d, r } => Some((p, d, r)),
            RingSpec::Zmod(n) => prime_power(n).map(|(p, d)| (p, d, 1)),
            RingSpec::Field(q) | RingSpec::TruncatedPoly { q, n: 1 } => {
                prime_power(q).map(|(p, r)| (p, 1, r))
            }
            RingSpec::Product(ref parts) if parts.len() == 1 => parts[0].galois_parameters(),
            _ => None,
        }
    }
}

impl FromStr for RingSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        RingSpec::parse(s)
    }
}

struct Parser<'a> {
    text: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, message: &str) -> Error {
        Error::Parse {
            position: self.pos,
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.text[self.pos..].starts_with(char::is_whitespace) {
            self.pos += self.text[self.pos..].chars().next().unwrap().len_utf8();
        }
    }

    fn eat(&mut self, token: &str) -> bool {
        self.skip_ws();
        let rest = &self.text[self.pos..];
        if rest.len() >= token.len() && rest[..token.len()].eq_ignore_ascii_case(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, token: &str) -> Result<()> {
        if self.eat(token) {
            Ok(())
        } else {
            Err(self.error(&format!("expected '{token}'")))
        }
    }

    fn number(&mut self) -> Result<u64> {
        self.skip_ws();
        let start = self.pos;
        let digits = self.text[start..].chars().take_while(char::is_ascii_digit).count();
        if digits == 0 {
            return Err(self.error("expected a number"));
        }
        self.pos += digits;
        self.text[start..self.pos].parse().map_err(|_| Error::Parse {
            position: start,
            message: "number out of range".into(),
        })
    }

    fn small(&mut self) -> Result<u32> {
        let start = self.pos;
        let v = self.number()?;
        u32::try_from(v).map_err(|_| Error::Parse {
            position: start,
            message: "exponent out of range".into(),
        })
    }

    fn factor(&mut self) -> Result<RingSpec> {
        if self.eat("Z/") {
            return Ok(RingSpec::Zmod(self.number()?));
        }
        if self.eat("GR(") {
            let p = self.number()?;
            self.expect("^")?;
            let d = self.small()?;
            self.expect(",")?;
            let r = self.small()?;
            self.expect(")")?;
            return Ok(RingSpec::Galois { p, d, r });
        }
        if self.eat("GF(") {
            let q = self.number()?;
            self.expect(")")?;
            return Ok(RingSpec::Field(q));
        }
        if self.eat("POLY(") {
            let q = self.number()?;
            self.expect(",")?;
            let n = self.small()?;
            self.expect(")")?;
            return Ok(RingSpec::TruncatedPoly { q, n });
        }
        Err(self.error("expected Z/, GR(, GF( or POLY("))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_display() {
        for s in ["Z/9", "GR(3^2,2)", "GF(25)", "POLY(2,4)", "Z/9*GF(3)", "GF(3)*GF(3)*Z/4"] {
            assert_eq!(RingSpec::parse(s).unwrap().to_string(), s);
        }
        assert_eq!(RingSpec::parse(" gr( 3 ^ 2 , 1 ) ").unwrap().to_string(), "GR(3^2,1)");
    }

    #[test]
    fn parse_errors_carry_positions() {
        match RingSpec::parse("GR(3,2)") {
            Err(Error::Parse { position, .. }) => assert_eq!(position, 4),
            other => panic!("{other:?}"),
        }
        match RingSpec::parse("Z/9*") {
            Err(Error::Parse { position, .. }) => assert_eq!(position, 4),
            other => panic!("{other:?}"),
        }
        assert!(RingSpec::parse("Z/9 x").is_err());
        assert!(RingSpec::parse("").is_err());
    }

    #[test]
    fn galois_parameters() {
        assert_eq!(RingSpec::Zmod(27).galois_parameters(), Some((3, 3, 1)));
        assert_eq!(RingSpec::Zmod(12).galois_parameters(), None);
        assert_eq!(RingSpec::Field(49).galois_parameters(), Some((7, 1, 2)));
        assert_eq!(RingSpec::TruncatedPoly { q: 3, n: 2 }.galois_parameters(), None);
    }

    #[test]
    fn builds_products() {
        let r = RingSpec::parse("Z/9*GF(3)").unwrap().build().unwrap();
        assert_eq!(r.size(), 27);
        assert_eq!(r.units().len(), 12);
        assert_eq!(r.label(r.one()), "(1,[1])");
    }
}
