use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::q_pow;
use crate::error::{Error, Result};

/// A smooth projective curve over `F_q`, through the numerator `P(s)` of its
/// zeta function `P(s) / ((1 - s)(1 - q s))`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveDatum {
    pub q: i64,
    pub g: u32,
    pub zeta_numerator: Vec<i64>,
}

fn is_prime_power(q: i64) -> bool {
    if q < 2 {
        return false;
    }
    let mut p = 2;
    while p * p <= q {
        if q % p == 0 {
            let mut r = q;
            while r % p == 0 {
                r /= p;
            }
            return r == 1;
        }
        p += 1;
    }
    true
}

impl CurveDatum {
    pub fn projective_line(q: i64) -> Result<Self> {
        Self::from_numerator(q, 0, vec![1])
    }

    pub fn from_numerator(q: i64, g: u32, zeta_numerator: Vec<i64>) -> Result<Self> {
        if !is_prime_power(q) {
            return Err(Error::input(format!("q = {q} is not a prime power")));
        }
        if zeta_numerator.len() != 2 * g as usize + 1 {
            return Err(Error::input(format!(
                "zeta numerator must have degree 2g = {}, got {} coefficients",
                2 * g,
                zeta_numerator.len()
            )));
        }
        if zeta_numerator[0] != 1 {
            return Err(Error::input("zeta numerator must satisfy P(0) = 1"));
        }
        for j in 0..=g as usize {
            let lhs = BigInt::from(zeta_numerator[2 * g as usize - j]);
            let rhs = BigInt::from(zeta_numerator[j]) * q_pow(q, (g as usize - j) as u64);
            if lhs != rhs {
                return Err(Error::input(format!(
                    "functional equation fails: coefficient of s^{} is {lhs}, expected {rhs}",
                    2 * g as usize - j
                )));
            }
        }
        Ok(CurveDatum { q, g, zeta_numerator })
    }

    /// Rebuilds `P(s)` from `#X(F_{q^k})`, `k = 1..=g`, by Newton's identities.
    pub fn from_counts(q: i64, g: u32, counts: &[i64]) -> Result<Self> {
        if !is_prime_power(q) {
            return Err(Error::input(format!("q = {q} is not a prime power")));
        }
        if counts.len() != g as usize {
            return Err(Error::input(format!(
                "expected {g} point counts, got {}",
                counts.len()
            )));
        }
        let mut power_sums = Vec::new();
        for (idx, &n) in counts.iter().enumerate() {
            let k = idx as u64 + 1;
            if n < 0 {
                return Err(Error::input(format!("Weil bound: #X(F_q^{k}) = {n} is negative")));
            }
            let s: BigInt = q_pow(q, k) + 1 - BigInt::from(n);
            let bound = BigInt::from(4 * u64::from(g) * u64::from(g)) * q_pow(q, k);
            if &s * &s > bound {
                return Err(Error::input(format!(
                    "Weil bound: |q^{k} + 1 - #X(F_q^{k})| = {} exceeds 2g q^({k}/2)",
                    s.abs()
                )));
            }
            power_sums.push(s);
        }
        let mut c: Vec<BigRational> = vec![BigRational::one()];
        for j in 1..=g as usize {
            let mut acc = BigRational::zero();
            for i in 1..=j {
                acc -= BigRational::from_integer(power_sums[i - 1].clone()) * &c[j - i];
            }
            let cj = acc / BigRational::from_integer(BigInt::from(j));
            if !cj.is_integer() {
                return Err(Error::input(format!(
                    "functional-equation consistency: coefficient of s^{j} is {cj}, not an integer"
                )));
            }
            c.push(cj);
        }
        let mut numer = vec![0i64; 2 * g as usize + 1];
        for j in 0..=g as usize {
            let cj = c[j].to_integer();
            numer[j] = cj.to_i64().ok_or_else(|| Error::input("zeta coefficient overflow"))?;
            let mirrored = cj * q_pow(q, (g as usize - j) as u64);
            numer[2 * g as usize - j] =
                mirrored.to_i64().ok_or_else(|| Error::input("zeta coefficient overflow"))?;
        }
        let curve = Self::from_numerator(q, g, numer)?;
        for (idx, &n) in counts.iter().enumerate() {
            let k = idx as u32 + 1;
            if curve.point_count(k) != BigInt::from(n) {
                return Err(Error::invariant(format!(
                    "reconstructed zeta does not reproduce #X(F_q^{k})"
                )));
            }
        }
        Ok(curve)
    }

    /// `#X(F_{q^k})`.
    pub fn point_count(&self, k: u32) -> BigInt {
        let c = |j: usize| -> BigInt {
            self.zeta_numerator.get(j).map_or_else(BigInt::zero, |&x| BigInt::from(x))
        };
        let mut p: Vec<BigInt> = Vec::new();
        for j in 1..=k as usize {
            let mut v = -BigInt::from(j) * c(j);
            for i in 1..j {
                v -= &p[i - 1] * c(j - i);
            }
            p.push(v);
        }
        q_pow(self.q, u64::from(k)) + 1 - &p[k as usize - 1]
    }

    /// Coefficients of `P(s) / ((1 - s)(1 - q s))` up to `s^k`.
    pub fn zeta_coefficients(&self, k: usize) -> Vec<BigInt> {
        // 1/((1-s)(1-qs)) has coefficient 1 + q + ... + q^i at s^i.
        let geo: Vec<BigInt> = (0..=k)
            .scan(BigInt::zero(), |acc, i| {
                *acc += q_pow(self.q, i as u64);
                Some(acc.clone())
            })
            .collect();
        (0..=k)
            .map(|i| {
                self.zeta_numerator
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| *j <= i)
                    .map(|(j, &cj)| BigInt::from(cj) * &geo[i - j])
                    .sum()
            })
            .collect()
    }
}

/// Curve file: `{"q", "g", "point_counts" | "zeta_numerator"}`.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CurveFile {
    q: i64,
    g: u32,
    point_counts: Option<Vec<i64>>,
    zeta_numerator: Option<Vec<i64>>,
}

impl CurveDatum {
    pub fn from_json(text: &str) -> Result<Self> {
        let f: CurveFile =
            serde_json::from_str(text).map_err(|e| Error::input(format!("malformed curve JSON: {e}")))?;
        match (f.point_counts, f.zeta_numerator) {
            (Some(c), None) => Self::from_counts(f.q, f.g, &c),
            (None, Some(p)) => Self::from_numerator(f.q, f.g, p),
            _ => Err(Error::input(
                "curve JSON needs exactly one of point_counts and zeta_numerator",
            )),
        }
    }
}

/// The data `L_nu(s)` attached to one character.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LocalFactor {
    /// Encoded as the string `"trivial"`.
    Trivial(TrivialMarker),
    Nontrivial { numerator: Vec<i64> },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TrivialMarker;

impl Serialize for TrivialMarker {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str("trivial")
    }
}

impl<'de> Deserialize<'de> for TrivialMarker {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        if s == "trivial" {
            Ok(TrivialMarker)
        } else {
            Err(serde::de::Error::custom(format!("expected \"trivial\", got {s:?}")))
        }
    }
}

impl LocalFactor {
    pub fn trivial() -> Self {
        LocalFactor::Trivial(TrivialMarker)
    }

    pub fn is_trivial(&self) -> bool {
        matches!(self, LocalFactor::Trivial(_))
    }

    pub fn validate(&self, curve: &CurveDatum) -> Result<()> {
        if let LocalFactor::Nontrivial { numerator } = self {
            if curve.g == 0 {
                return Err(Error::input("genus 0 admits only the trivial local system"));
            }
            if numerator.len() != 2 * curve.g as usize - 1 {
                return Err(Error::input(format!(
                    "nontrivial L-numerator must have degree 2g - 2 = {}, got {} coefficients",
                    2 * curve.g - 2,
                    numerator.len()
                )));
            }
            if numerator[0] != 1 {
                return Err(Error::input("nontrivial L-numerator must have constant term 1"));
            }
        }
        Ok(())
    }

    /// `[s^k] L(s)` for `k = 0..=kmax`.
    pub fn coefficients(&self, curve: &CurveDatum, kmax: usize) -> Vec<BigInt> {
        match self {
            LocalFactor::Trivial(_) => curve.zeta_coefficients(kmax),
            LocalFactor::Nontrivial { numerator } => (0..=kmax)
                .map(|k| numerator.get(k).map_or_else(BigInt::zero, |&x| BigInt::from(x)))
                .collect(),
        }
    }

    /// `(h0, h1, h2)`: cohomology dimensions of the rank-one local system.
    pub fn cohomology(&self, g: u32) -> (u64, u64, u64) {
        match self {
            LocalFactor::Trivial(_) => (1, 2 * u64::from(g), 1),
            LocalFactor::Nontrivial { .. } => (0, 2 * u64::from(g) - 2, 0),
        }
    }
}

/// Which local factor governs each character of `J`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalSystemSpec {
    /// Keys are `"<k>*nu"` (the `k`-th multiple of the smallest element of a
    /// rank-one `J`), a bracketed coordinate vector such as `"[1,1]"`, or
    /// `"*"` for every character not listed.
    pub characters: BTreeMap<String, LocalFactor>,
}

impl LocalSystemSpec {
    pub fn all_trivial() -> Self {
        LocalSystemSpec {
            characters: [("*".to_string(), LocalFactor::trivial())].into(),
        }
    }

    pub fn uniform(factor: LocalFactor) -> Self {
        LocalSystemSpec {
            characters: [("*".to_string(), factor)].into(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::input(format!("malformed local-system JSON: {e}")))
    }

    /// Factor for `nu`; `generator` is the smallest element of a rank-one `J`.
    pub fn factor(&self, nu: &[i64], generator: Option<&[i64]>) -> Result<&LocalFactor> {
        for (key, f) in &self.characters {
            let key = key.trim();
            if let Some(k) = key.strip_suffix("*nu") {
                let k: i64 = k.trim().parse().map_err(|_| {
                    Error::input(format!("bad local-system key {key:?}: expected <k>*nu"))
                })?;
                if let Some(gen) = generator {
                    let scaled: Vec<i64> = gen.iter().map(|x| x * k).collect();
                    if scaled == nu {
                        return Ok(f);
                    }
                }
            } else if key.starts_with('[') {
                let v: Vec<i64> = serde_json::from_str(key)
                    .map_err(|_| Error::input(format!("bad local-system key {key:?}")))?;
                if v == nu {
                    return Ok(f);
                }
            } else if key != "*" {
                return Err(Error::input(format!("bad local-system key {key:?}")));
            }
        }
        self.characters
            .get("*")
            .ok_or_else(|| Error::input(format!("local-system spec does not cover the character {nu:?}")))
    }
}
