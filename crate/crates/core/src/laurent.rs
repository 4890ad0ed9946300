//! Laurent polynomials in `v` with integer coefficients.
//!
//! A cohomological shift `[k]` is recorded as `v^k`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Laurent {
    coeffs: BTreeMap<i64, i64>,
}

impl Laurent {
    pub fn zero() -> Self {
        Laurent::default()
    }

    pub fn one() -> Self {
        Laurent::monomial(0, 1)
    }

    pub fn monomial(exp: i64, coeff: i64) -> Self {
        let mut l = Laurent::zero();
        l.add_term(exp, coeff);
        l
    }

    /// Sum of `coeff * v^exp` over the given pairs.
    pub fn from_terms(terms: impl IntoIterator<Item = (i64, i64)>) -> Self {
        let mut l = Laurent::zero();
        for (e, c) in terms {
            l.add_term(e, c);
        }
        l
    }

    pub fn add_term(&mut self, exp: i64, coeff: i64) {
        if coeff == 0 {
            return;
        }
        let e = self.coeffs.entry(exp).or_insert(0);
        *e += coeff;
        if *e == 0 {
            self.coeffs.remove(&exp);
        }
    }

    pub fn coeff(&self, exp: i64) -> i64 {
        self.coeffs.get(&exp).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        self.coeffs.iter().map(|(&e, &c)| (e, c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.coeffs.values().all(|&c| c >= 0)
    }

    pub fn shift(&self, k: i64) -> Self {
        Laurent {
            coeffs: self.coeffs.iter().map(|(&e, &c)| (e + k, c)).collect(),
        }
    }

    pub fn scale(&self, k: i64) -> Self {
        Laurent::from_terms(self.terms().map(|(e, c)| (e, c * k)))
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Laurent::one(), |acc, _| &acc * self)
    }

    /// Value at `v = 1`.
    pub fn total(&self) -> i64 {
        self.coeffs.values().sum()
    }

    /// Parses the `Display` format, e.g. `v^2+1+v^-2` or `3v-2`.
    pub fn parse(s: &str) -> Option<Self> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if s == "0" {
            return Some(Laurent::zero());
        }
        let mut out = Laurent::zero();
        let bytes = s.as_bytes();
        let mut start = 0;
        let mut i = 1;
        let mut pieces = Vec::new();
        while i <= bytes.len() {
            let boundary = i == bytes.len()
                || ((bytes[i] == b'+' || bytes[i] == b'-') && bytes[i - 1] != b'^');
            if boundary {
                pieces.push(&s[start..i]);
                start = i;
            }
            i += 1;
        }
        for p in pieces {
            let (sign, body) = match p.as_bytes().first()? {
                b'+' => (1, &p[1..]),
                b'-' => (-1, &p[1..]),
                _ => (1, p),
            };
            let (coeff, exp) = match body.find('v') {
                None => (body.parse::<i64>().ok()?, 0),
                Some(pos) => {
                    let c = if pos == 0 { 1 } else { body[..pos].parse::<i64>().ok()? };
                    let rest = &body[pos + 1..];
                    let e = if rest.is_empty() {
                        1
                    } else {
                        rest.strip_prefix('^')?.parse::<i64>().ok()?
                    };
                    (c, e)
                }
            };
            out.add_term(exp, sign * coeff);
        }
        Some(out)
    }

    /// `{"exponent": coefficient}` with string keys.
    pub fn to_map(&self) -> BTreeMap<String, i64> {
        self.coeffs.iter().map(|(e, c)| (e.to_string(), *c)).collect()
    }
}

impl fmt::Display for Laurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&e, &c) in self.coeffs.iter().rev() {
            let mag = c.abs();
            if c < 0 {
                write!(f, "-")?;
            } else if !first {
                write!(f, "+")?;
            }
            first = false;
            match e {
                0 => write!(f, "{mag}")?,
                _ => {
                    if mag != 1 {
                        write!(f, "{mag}")?;
                    }
                    if e == 1 {
                        write!(f, "v")?;
                    } else {
                        write!(f, "v^{e}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl Serialize for Laurent {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_map().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Laurent {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let m = BTreeMap::<String, i64>::deserialize(d)?;
        let mut out = Laurent::zero();
        for (k, v) in m {
            let e: i64 = k.parse().map_err(serde::de::Error::custom)?;
            out.add_term(e, v);
        }
        Ok(out)
    }
}

impl Add for &Laurent {
    type Output = Laurent;
    fn add(self, rhs: &Laurent) -> Laurent {
        let mut out = self.clone();
        for (e, c) in rhs.terms() {
            out.add_term(e, c);
        }
        out
    }
}

impl Sub for &Laurent {
    type Output = Laurent;
    fn sub(self, rhs: &Laurent) -> Laurent {
        self + &(-rhs)
    }
}

impl Neg for &Laurent {
    type Output = Laurent;
    fn neg(self) -> Laurent {
        self.scale(-1)
    }
}

impl Mul for &Laurent {
    type Output = Laurent;
    fn mul(self, rhs: &Laurent) -> Laurent {
        let mut out = Laurent::zero();
        for (a, x) in self.terms() {
            for (b, y) in rhs.terms() {
                out.add_term(a + b, x * y);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_and_parse() {
        let p = Laurent::from_terms([(2, 1), (0, 1), (-2, 1)]);
        assert_eq!(p.to_string(), "v^2+1+v^-2");
        assert_eq!(Laurent::parse("v^2+1+v^-2"), Some(p));
        let q = Laurent::from_terms([(1, 3), (-1, -2)]);
        assert_eq!(q.to_string(), "3v-2v^-1");
        assert_eq!(Laurent::parse(&q.to_string()), Some(q));
        assert_eq!(Laurent::zero().to_string(), "0");
    }

    #[test]
    fn square_of_v_plus_inverse() {
        let p = Laurent::from_terms([(1, 1), (-1, 1)]);
        assert_eq!(p.pow(2).to_string(), "v^2+2+v^-2");
    }

    #[test]
    fn serde_map() {
        let p = Laurent::from_terms([(-1, 1), (3, 2)]);
        let j = serde_json::to_string(&p).unwrap();
        assert_eq!(j, r#"{"-1":1,"3":2}"#);
        let back: Laurent = serde_json::from_str(&j).unwrap();
        assert_eq!(back, p);
    }
}
