use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::{parse_rational, rational_string};
use crate::error::{Error, Result};

/// Coefficient rings for [`FormalSeries`]: anything closed under addition and
/// scaling by rationals.
pub trait Coefficient: Clone + PartialEq + fmt::Debug {
    fn zero() -> Self;
    fn is_zero(&self) -> bool;
    fn add_assign(&mut self, other: &Self);
    fn scaled(&self, r: &BigRational) -> Self;
    fn to_json(&self) -> serde_json::Value;
}

impl Coefficient for BigRational {
    fn zero() -> Self {
        <BigRational as Zero>::zero()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add_assign(&mut self, other: &Self) {
        *self += other;
    }
    fn scaled(&self, r: &BigRational) -> Self {
        self * r
    }
    fn to_json(&self) -> serde_json::Value {
        serde_json::Value::String(rational_string(self))
    }
}

/// A rational linear combination of the symbols `Eis'(mu)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Placeholders(pub BTreeMap<Vec<i64>, BigRational>);

impl Placeholders {
    pub fn symbol(mu: &[i64]) -> Self {
        Placeholders([(mu.to_vec(), BigRational::one())].into())
    }
}

impl Coefficient for Placeholders {
    fn zero() -> Self {
        Placeholders::default()
    }
    fn is_zero(&self) -> bool {
        self.0.is_empty()
    }
    fn add_assign(&mut self, other: &Self) {
        for (k, v) in &other.0 {
            let e = self.0.entry(k.clone()).or_insert_with(<BigRational as num_traits::Zero>::zero);
            *e += v;
            if Zero::is_zero(e) {
                self.0.remove(k);
            }
        }
    }
    fn scaled(&self, r: &BigRational) -> Self {
        if Zero::is_zero(r) {
            return Placeholders::default();
        }
        Placeholders(self.0.iter().map(|(k, v)| (k.clone(), v * r)).collect())
    }
    fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("string map")
    }
}

impl Serialize for Placeholders {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let m: BTreeMap<String, String> = self
            .0
            .iter()
            .map(|(k, v)| (format!("Eis'{k:?}"), rational_string(v)))
            .collect();
        m.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Placeholders {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let m = BTreeMap::<String, String>::deserialize(d)?;
        let mut out = BTreeMap::new();
        for (k, v) in m {
            let inner = k
                .strip_prefix("Eis'")
                .ok_or_else(|| serde::de::Error::custom(format!("bad placeholder {k}")))?;
            let mu: Vec<i64> = serde_json::from_str(inner).map_err(serde::de::Error::custom)?;
            let r = parse_rational(&v)
                .ok_or_else(|| serde::de::Error::custom(format!("bad rational {v}")))?;
            out.insert(mu, r);
        }
        Ok(Placeholders(out))
    }
}

/// `sum c_mu t^mu` over `mu >= base`, kept for `<mu - base, rho_check> <= height`.
#[derive(Clone, Debug, PartialEq)]
pub struct FormalSeries<C: Coefficient> {
    pub base: Vec<i64>,
    pub height: i64,
    coeffs: BTreeMap<Vec<i64>, C>,
}

fn rho_height(mu: &[i64], base: &[i64]) -> Option<i64> {
    let d: Vec<i64> = mu.iter().zip(base).map(|(a, b)| a - b).collect();
    d.iter().all(|&x| x >= 0).then(|| d.iter().sum())
}

impl<C: Coefficient> FormalSeries<C> {
    pub fn new(base: Vec<i64>, height: i64) -> Self {
        FormalSeries {
            base,
            height,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn in_window(&self, mu: &[i64]) -> bool {
        rho_height(mu, &self.base).is_some_and(|h| h <= self.height)
    }

    /// Adds `c t^mu`; terms beyond the window are dropped, terms below the
    /// base are an error.
    pub fn add_term(&mut self, mu: &[i64], c: &C) -> Result<()> {
        match rho_height(mu, &self.base) {
            None => Err(Error::input(format!(
                "{mu:?} is not above the base point {:?}",
                self.base
            ))),
            Some(h) if h > self.height => Ok(()),
            Some(_) => {
                let e = self.coeffs.entry(mu.to_vec()).or_insert_with(C::zero);
                e.add_assign(c);
                if e.is_zero() {
                    self.coeffs.remove(mu);
                }
                Ok(())
            }
        }
    }

    pub fn coefficient(&self, mu: &[i64]) -> C {
        self.coeffs.get(mu).cloned().unwrap_or_else(C::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i64>, &C)> {
        self.coeffs.iter()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// All window points, whether or not their coefficient vanishes.
    pub fn window(&self) -> Vec<Vec<i64>> {
        let mut out = Vec::new();
        let mut cur = vec![0i64; self.base.len()];
        fn go(i: usize, left: i64, cur: &mut Vec<i64>, base: &[i64], out: &mut Vec<Vec<i64>>) {
            if i == cur.len() {
                out.push(cur.iter().zip(base).map(|(a, b)| a + b).collect());
                return;
            }
            for k in 0..=left {
                cur[i] = k;
                go(i + 1, left - k, cur, base, out);
            }
            cur[i] = 0;
        }
        if self.height >= 0 {
            go(0, self.height, &mut cur, &self.base, &mut out);
        }
        out
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.base != other.base {
            return Err(Error::input("series sum needs equal base points"));
        }
        let mut out = FormalSeries::new(self.base.clone(), self.height.min(other.height));
        for (mu, c) in self.terms().chain(other.terms()) {
            out.add_term(mu, c)?;
        }
        Ok(out)
    }

    /// Product with a rational series; the window is the smaller of the two.
    pub fn mul_rational(&self, rhs: &FormalSeries<BigRational>) -> FormalSeries<C> {
        let base: Vec<i64> = self.base.iter().zip(&rhs.base).map(|(a, b)| a + b).collect();
        let mut out = FormalSeries::new(base, self.height.min(rhs.height));
        for (a, x) in self.terms() {
            for (b, y) in rhs.terms() {
                let mu: Vec<i64> = a.iter().zip(b).map(|(p, q)| p + q).collect();
                out.add_term(&mu, &x.scaled(y)).expect("above the product base");
            }
        }
        out
    }
}

impl FormalSeries<BigRational> {
    pub fn one(rank: usize, height: i64) -> Self {
        let mut s = FormalSeries::new(vec![0; rank], height);
        s.add_term(&vec![0; rank], &BigRational::one()).expect("base point");
        s
    }
}

impl FormalSeries<Placeholders> {
    /// `Eis_cl` with an independent symbol at every point of `Lambda_sharp`
    /// in the window.
    pub fn placeholders(base: Vec<i64>, height: i64, in_lattice: impl Fn(&[i64]) -> bool) -> Self {
        let mut s = FormalSeries::new(base, height);
        for mu in s.window() {
            if in_lattice(&mu) {
                s.add_term(&mu, &Placeholders::symbol(&mu)).expect("in window");
            }
        }
        s
    }
}

/// JSON shape of a series: coefficients keyed by the vector's JSON text.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesReport<T> {
    pub base: Vec<i64>,
    pub height: i64,
    pub coefficients: BTreeMap<String, T>,
}

impl FormalSeries<BigRational> {
    pub fn report(&self) -> SeriesReport<String> {
        SeriesReport {
            base: self.base.clone(),
            height: self.height,
            coefficients: self
                .terms()
                .map(|(k, v)| (format!("{k:?}"), rational_string(v)))
                .collect(),
        }
    }
}

impl FormalSeries<Placeholders> {
    pub fn report(&self) -> SeriesReport<Placeholders> {
        SeriesReport {
            base: self.base.clone(),
            height: self.height,
            coefficients: self.terms().map(|(k, v)| (format!("{k:?}"), v.clone())).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(BigInt::from(a), BigInt::from(b))
    }

    #[test]
    fn geometric_times_binomial() {
        let mut g = FormalSeries::new(vec![0], 6);
        for k in 0..=6 {
            g.add_term(&[k], &q(1, 1)).unwrap();
        }
        let mut b = FormalSeries::new(vec![0], 10);
        b.add_term(&[0], &q(1, 1)).unwrap();
        b.add_term(&[1], &q(-1, 1)).unwrap();
        let p = g.mul_rational(&b);
        assert_eq!(p.height, 6);
        assert_eq!(p.len(), 1);
        assert_eq!(p.coefficient(&[0]), q(1, 1));
    }

    #[test]
    fn below_base_rejected() {
        let mut s: FormalSeries<BigRational> = FormalSeries::new(vec![0, 0], 3);
        assert!(s.add_term(&[-1, 2], &q(1, 1)).is_err());
        s.add_term(&[3, 3], &q(1, 1)).unwrap();
        assert!(s.is_empty());
    }

    #[test]
    fn placeholder_serde() {
        let p = Placeholders::symbol(&[2, 0]).scaled(&q(3, 4));
        let j = serde_json::to_string(&p).unwrap();
        assert_eq!(j, r#"{"Eis'[2, 0]":"3/4"}"#);
        let back: Placeholders = serde_json::from_str(&j).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn window_size() {
        let s: FormalSeries<BigRational> = FormalSeries::new(vec![0, 0], 3);
        assert_eq!(s.window().len(), 10);
    }
}
