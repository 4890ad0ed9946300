//! Stalk data of the IC sheaf on Drinfeld compactifications, in
//! decategorified form: Kostant elements, decompositions of `theta`, and
//! shift polynomials under `[k] -> v^k`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::laurent::Laurent;
use crate::rep::{GradedPiece, NilradicalDatum};

/// An assignment `B(theta)`: a count `n_nu` for each class of `J`, aligned
/// with `NilradicalDatum::classes`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct KostantElement {
    pub counts: Vec<u64>,
    pub theta: Vec<i64>,
    pub size: u64,
}

impl KostantElement {
    /// `prod over nu of dim Sym^{n_nu}` of the class piece.
    pub fn sym_product_dim(&self, nil: &NilradicalDatum) -> u64 {
        self.counts
            .iter()
            .zip(&nil.classes)
            .map(|(&k, c)| multiset_count(c.dim, k))
            .product()
    }
}

/// Number of multisets of size `k` from `d` items.
pub fn multiset_count(d: u64, k: u64) -> u64 {
    if k == 0 {
        return 1;
    }
    if d == 0 {
        return 0;
    }
    let mut acc: u128 = 1;
    for i in 0..k as u128 {
        acc = acc * (d as u128 + i) / (i + 1);
    }
    acc as u64
}

pub fn enumerate_b_theta(nil: &NilradicalDatum, theta: &[i64]) -> Vec<KostantElement> {
    let mut out = Vec::new();
    if theta.iter().any(|&x| x < 0) {
        return out;
    }
    let mut counts = vec![0u64; nil.classes.len()];
    fn go(
        nil: &NilradicalDatum,
        i: usize,
        rest: Vec<i64>,
        counts: &mut Vec<u64>,
        theta: &[i64],
        out: &mut Vec<KostantElement>,
    ) {
        if i == nil.classes.len() {
            if rest.iter().all(|&x| x == 0) {
                out.push(KostantElement {
                    counts: counts.clone(),
                    theta: theta.to_vec(),
                    size: counts.iter().sum(),
                });
            }
            return;
        }
        let p = &nil.classes[i].projection;
        let mut cur = rest;
        let mut k = 0;
        loop {
            counts[i] = k;
            go(nil, i + 1, cur.clone(), counts, theta, out);
            cur = cur.iter().zip(p).map(|(a, b)| a - b).collect();
            if cur.iter().any(|&x| x < 0) {
                break;
            }
            k += 1;
        }
        counts[i] = 0;
    }
    go(nil, 0, theta.to_vec(), &mut counts, theta, &mut out);
    out.sort();
    out
}

/// A decomposition `U(theta)` of `theta` into positive parts with
/// multiplicities.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decomposition {
    pub theta: Vec<i64>,
    pub parts: Vec<(Vec<i64>, u32)>,
}

impl Decomposition {
    pub fn new(parts: Vec<(Vec<i64>, u32)>, rank: usize) -> Result<Self> {
        let mut theta = vec![0i64; rank];
        for (p, k) in &parts {
            if p.len() != rank {
                return Err(Error::input(format!("part {p:?} has wrong length, expected {rank}")));
            }
            if p.iter().all(|&x| x == 0) {
                return Err(Error::input("decomposition parts must be nonzero"));
            }
            if p.iter().any(|&x| x < 0) {
                return Err(Error::input(format!("part {p:?} is outside the positive cone")));
            }
            if *k == 0 {
                return Err(Error::input(format!("part {p:?} has multiplicity 0")));
            }
            for (a, b) in theta.iter_mut().zip(p) {
                *a += b * i64::from(*k);
            }
        }
        Ok(Decomposition { theta, parts })
    }

    /// `|U(theta)|`.
    pub fn size(&self) -> u64 {
        self.parts.iter().map(|(_, k)| u64::from(*k)).sum()
    }

    /// Disjoint union.
    pub fn merge(&self, other: &Decomposition) -> Decomposition {
        let mut parts = self.parts.clone();
        parts.extend(other.parts.iter().cloned());
        Decomposition {
            theta: self.theta.iter().zip(&other.theta).map(|(a, b)| a + b).collect(),
            parts,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartDetail {
    pub theta: Vec<i64>,
    pub multiplicity: u32,
    pub in_sharp_image: bool,
    /// `sum_i dim Sym^i(u)_theta v^{2i}`.
    pub part_polynomial: Laurent,
    pub graded: Vec<GradedPiece>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StalkReport {
    pub vanishes: bool,
    pub shift_polynomial: Laurent,
    pub parts: Vec<PartDetail>,
}

pub fn stalk_poincare(nil: &NilradicalDatum, dec: &Decomposition) -> Result<StalkReport> {
    nil.levi.check_theta(&dec.theta)?;
    let mut parts = Vec::new();
    let mut poly = Laurent::monomial(-(dec.size() as i64), 1);
    let mut all_sharp = true;
    for (theta_m, k) in &dec.parts {
        let in_sharp = nil.levi.in_sharp_image(theta_m);
        all_sharp &= in_sharp;
        let weights = nil.sym_weights(theta_m);
        let mut part_poly = Laurent::zero();
        let mut graded = Vec::new();
        for (deg, ch) in &weights {
            let dim: u64 = ch.values().sum();
            part_poly.add_term(2 * i64::from(*deg), dim as i64);
            graded.push(GradedPiece {
                degree: *deg,
                dim,
                decomposition: nil.levi_system.decompose(ch)?,
            });
        }
        poly = &poly * &part_poly.pow(*k);
        parts.push(PartDetail {
            theta: theta_m.clone(),
            multiplicity: *k,
            in_sharp_image: in_sharp,
            part_polynomial: part_poly,
            graded,
        });
    }
    if !all_sharp && !poly.is_zero() {
        return Err(Error::invariant(format!(
            "stalk polynomial {poly} is nonzero although a part lies outside Lambda_sharp_{{G,P}}"
        )));
    }
    if !poly.is_nonnegative() {
        return Err(Error::invariant(format!("negative coefficient in stalk polynomial {poly}")));
    }
    Ok(StalkReport {
        vanishes: poly.is_zero(),
        shift_polynomial: poly,
        parts,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZastavaTop {
    pub degree_bound: i64,
    pub top_module: Vec<GradedPiece>,
    pub vanishes: bool,
}

pub fn zastava_top(nil: &NilradicalDatum, theta: &[i64]) -> Result<ZastavaTop> {
    nil.levi.check_theta(theta)?;
    if !nil.levi.in_positive_cone(theta) {
        return Err(Error::input(format!("theta {theta:?} is outside the positive cone")));
    }
    let vanishes = enumerate_b_theta(nil, theta).is_empty();
    let mut top_module = Vec::new();
    for (deg, ch) in nil.sym_weights(theta) {
        top_module.push(GradedPiece {
            degree: deg,
            dim: ch.values().sum(),
            decomposition: nil.levi_system.decompose(&ch)?,
        });
    }
    if vanishes != top_module.is_empty() {
        return Err(Error::invariant(format!(
            "zastava stalk at {theta:?}: B(theta) emptiness disagrees with U(u)_theta"
        )));
    }
    Ok(ZastavaTop {
        degree_bound: nil.levi.degree_bound(theta),
        top_module,
        vanishes,
    })
}

/// Coefficient of `v^{2m - 1}` predicted by the Kostant elements of size `m`.
pub fn kostant_coefficient(nil: &NilradicalDatum, theta: &[i64], m: u64) -> u64 {
    enumerate_b_theta(nil, theta)
        .iter()
        .filter(|b| b.size == m)
        .map(|b| b.sym_product_dim(nil))
        .sum()
}

/// Sizes of all Kostant elements, keyed by size.
pub fn kostant_sizes(nil: &NilradicalDatum, theta: &[i64]) -> BTreeMap<u64, u64> {
    let mut out = BTreeMap::new();
    for b in enumerate_b_theta(nil, theta) {
        *out.entry(b.size).or_insert(0) += b.sym_product_dim(nil);
    }
    out
}
