use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::curve::LocalFactor;
use crate::error::{Error, Result};
use crate::ic_stalks::multiset_count;

fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k as u128 {
        acc = acc * (n as u128 - i) / (i + 1);
    }
    acc as u64
}

/// Graded dimensions of the `k`-th super symmetric power of a complex with
/// dimensions `h0, h1, h2` in degrees 0, 1, 2 (degree 1 anticommutes).
pub fn sym_power_complex(h0: u64, h1: u64, h2: u64, k: u64) -> BTreeMap<u64, u64> {
    let mut out = BTreeMap::new();
    for b in 0..=k.min(h1) {
        for c in 0..=k - b {
            let a = k - b - c;
            let dim = multiset_count(h0, a) * binomial(h1, b) * multiset_count(h2, c);
            if dim > 0 {
                *out.entry(b + 2 * c).or_insert(0) += dim;
            }
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum IhKind {
    /// `sigma_! IH^theta`.
    SigmaIh,
    IH,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IhPart {
    pub kind: IhKind,
    /// `theta = m alpha`, recorded as `m`.
    pub theta: i64,
    /// `|B(theta)| = m / n`.
    pub b_size: i64,
    pub shift: i64,
    /// Graded dimensions of `R Gamma(X^{(m/n)}, (E^nu)^{(m/n)})`, when a local
    /// factor is supplied.
    pub ih_dims: Option<BTreeMap<u64, u64>>,
    /// The extra shift `[m/n]` carried by `IH^{m alpha}`.
    pub ih_shift: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "case")]
pub enum ConstantTerm {
    Zero { reason: String },
    Single { part: IhPart },
    Triangle { sigma: IhPart, ih: IhPart },
}

/// The constant term `K_{d,d1}` of the Hecke kernel along the Borel of `SL_2`.
pub fn constant_term(
    d: i64,
    d1: i64,
    n: i64,
    g: u32,
    factor: Option<&LocalFactor>,
) -> Result<ConstantTerm> {
    if n < 1 {
        return Err(Error::input(format!("n must be positive, got {n}")));
    }
    let e = if n % 2 == 0 { n / 2 } else { n };
    if d1.rem_euclid(e) != 0 {
        return Err(Error::input(format!("d1 = {d1} is not in eZ with e = {e}")));
    }
    if let Some(f) = factor {
        if g == 0 && !f.is_trivial() {
            return Err(Error::input("genus 0 admits only the trivial local system"));
        }
    }
    if d1 > d.max(-d) {
        return Ok(ConstantTerm::Zero {
            reason: "d1 > max(d, -d)".into(),
        });
    }
    if (d - d1).rem_euclid(n) != 0 {
        return Ok(ConstantTerm::Zero {
            reason: format!("n = {n} divides neither d - d1 nor d + d1"),
        });
    }
    let part = |kind: IhKind, theta: i64| -> IhPart {
        let b = theta / n;
        let shift = match kind {
            IhKind::SigmaIh => -b,
            IhKind::IH => 2 - 2 * i64::from(g) + b,
        };
        let ih_dims = factor.map(|f| {
            let (h0, h1, h2) = f.cohomology(g);
            sym_power_complex(h0, h1, h2, b as u64)
        });
        IhPart {
            kind,
            theta,
            b_size: b,
            shift,
            ih_dims,
            ih_shift: b,
        }
    };
    if d < d1 && d1 <= -d {
        return Ok(ConstantTerm::Single {
            part: part(IhKind::SigmaIh, -(d + d1)),
        });
    }
    if d >= d1 && d1 > -d {
        return Ok(ConstantTerm::Single {
            part: part(IhKind::IH, d - d1),
        });
    }
    Ok(ConstantTerm::Triangle {
        sigma: part(IhKind::SigmaIh, -(d + d1)),
        ih: part(IhKind::IH, d - d1),
    })
}
