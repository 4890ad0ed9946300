//! Characters of the metaplectic dual group and its standard Levis.
//!
//! Weights are `Lambda_sharp` vectors in simple-coroot coordinates. The
//! invariant form used by Freudenthal's formula is `iota`, which is
//! invariant under every parabolic subgroup of `W`.

use std::collections::BTreeMap;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{dot, mat_vec, AbelianGroup, Mat};
use crate::metaplectic::{LeviDatum, MetaplecticDatum};
use crate::rootdata::positive_roots_of;

pub type Weight = Vec<i64>;

/// The root system of the dual group restricted to a set of nodes.
#[derive(Clone, Debug)]
pub struct DualSystem {
    pub datum: MetaplecticDatum,
    pub nodes: Vec<usize>,
    pub simple: Vec<Weight>,
    pub positive: Vec<Weight>,
    /// Height of each positive root in units of `simple`.
    pub heights: Vec<i64>,
    /// Twice the half-sum of `positive`.
    pub rho2: Weight,
    iota_pos: Vec<Weight>,
}

impl DualSystem {
    pub fn full(datum: &MetaplecticDatum) -> Self {
        Self::on_nodes(datum, &(0..datum.rank()).collect::<Vec<_>>())
    }

    pub fn levi(levi: &LeviDatum) -> Self {
        Self::on_nodes(&levi.datum, &levi.nodes)
    }

    pub fn on_nodes(datum: &MetaplecticDatum, nodes: &[usize]) -> Self {
        let r = datum.rank();
        let sub: Mat = nodes
            .iter()
            .map(|&i| nodes.iter().map(|&j| datum.dual_cartan[i][j]).collect())
            .collect();
        let simple: Vec<Weight> = nodes.iter().map(|&i| datum.dual_simple_roots[i].clone()).collect();
        let coeffs = if nodes.is_empty() { Vec::new() } else { positive_roots_of(&sub) };
        let positive: Vec<Weight> = coeffs
            .iter()
            .map(|k| {
                let mut v = vec![0i64; r];
                for (c, s) in k.iter().zip(&simple) {
                    for (a, b) in v.iter_mut().zip(s) {
                        *a += c * b;
                    }
                }
                v
            })
            .collect();
        let heights = coeffs.iter().map(|k| k.iter().sum()).collect();
        let mut rho2 = vec![0i64; r];
        for p in &positive {
            for (a, b) in rho2.iter_mut().zip(p) {
                *a += b;
            }
        }
        let iota_pos = positive.iter().map(|p| mat_vec(&datum.base.iota, p)).collect();
        DualSystem {
            datum: datum.clone(),
            nodes: nodes.to_vec(),
            simple,
            positive,
            heights,
            rho2,
            iota_pos,
        }
    }

    pub fn is_dominant(&self, mu: &[i64]) -> bool {
        self.nodes.iter().all(|&i| self.datum.base.pair_root(mu, i) >= 0)
    }

    fn check_highest(&self, nu: &[i64]) -> Result<()> {
        self.datum.check_sharp(nu)?;
        for &i in &self.nodes {
            let p = self.datum.base.pair_root(nu, i);
            if p < 0 {
                return Err(Error::input(format!(
                    "{nu:?} is not dominant: <nu, alpha_check_{}> = {p} < 0",
                    i + 1
                )));
            }
        }
        Ok(())
    }

    fn norm(&self, x: &[i64]) -> i64 {
        self.datum.base.iota_form(x, x)
    }

    /// Freudenthal's recursion, layer by layer below `nu`.
    pub fn irreducible_character(&self, nu: &[i64]) -> Result<Character> {
        self.check_highest(nu)?;
        let shifted = |x: &[i64]| -> Vec<i64> {
            x.iter().zip(&self.rho2).map(|(a, b)| 2 * a + b).collect()
        };
        let top = self.norm(&shifted(nu));
        let mut mult: BTreeMap<Weight, u64> = BTreeMap::new();
        mult.insert(nu.to_vec(), 1);
        let mut layer = vec![nu.to_vec()];
        let mut depth = 0i64;
        while !layer.is_empty() {
            depth += 1;
            let mut candidates: Vec<Weight> = Vec::new();
            for mu in &layer {
                for s in &self.simple {
                    let c: Weight = mu.iter().zip(s).map(|(a, b)| a - b).collect();
                    candidates.push(c);
                }
            }
            candidates.sort();
            candidates.dedup();
            let mut next = Vec::new();
            for mu in candidates {
                let denom = top - self.norm(&shifted(&mu));
                let mut num: i128 = 0;
                for (k_alpha, alpha) in self.positive.iter().enumerate() {
                    let h = self.heights[k_alpha];
                    let mut k = 1;
                    while k * h <= depth {
                        let up: Weight = mu.iter().zip(alpha).map(|(a, b)| a + k * b).collect();
                        if let Some(&m) = mult.get(&up) {
                            num += m as i128 * dot(&up, &self.iota_pos[k_alpha]) as i128;
                        }
                        k += 1;
                    }
                }
                num *= 8;
                if denom <= 0 {
                    if num != 0 {
                        return Err(Error::invariant(format!(
                            "Freudenthal: nonzero numerator {num} with denominator {denom} at {mu:?}"
                        )));
                    }
                    continue;
                }
                if num % denom as i128 != 0 {
                    return Err(Error::invariant(format!(
                        "Freudenthal: {num} not divisible by {denom} at {mu:?}"
                    )));
                }
                let m = num / denom as i128;
                if m < 0 {
                    return Err(Error::invariant(format!(
                        "Freudenthal produced negative multiplicity at {mu:?}"
                    )));
                }
                if m > 0 {
                    mult.insert(mu.clone(), m as u64);
                    next.push(mu);
                }
            }
            layer = next;
        }
        let ch = Character {
            weights: mult,
            highest: Some(nu.to_vec()),
        };
        let wd = self.weyl_dimension(nu);
        if ch.dim() != wd {
            return Err(Error::invariant(format!(
                "Freudenthal dimension {} differs from Weyl dimension {wd} for {nu:?}",
                ch.dim()
            )));
        }
        Ok(ch)
    }

    pub fn weyl_dimension(&self, nu: &[i64]) -> u64 {
        let mut acc = Ratio::<i128>::from_integer(1);
        for ia in &self.iota_pos {
            let num: i64 = nu.iter().zip(&self.rho2).map(|(a, b)| 2 * a + b).zip(ia).map(|(x, y)| x * y).sum();
            let den = dot(&self.rho2, ia);
            acc *= Ratio::new(num as i128, den as i128);
        }
        assert!(acc.is_integer() && acc >= Ratio::from_integer(0));
        *acc.numer() as u64
    }

    /// Exponent of `mu` under the principal grading:
    /// `sum over positive roots beta of 2 iota(mu, beta) / iota(beta, beta)`.
    pub fn principal_grading(&self, mu: &[i64]) -> i64 {
        self.positive
            .iter()
            .zip(&self.iota_pos)
            .map(|(b, ib)| {
                let num = 2 * dot(mu, ib);
                let den = dot(b, ib);
                debug_assert_eq!(num % den, 0);
                num / den
            })
            .sum()
    }

    /// Greedy extraction of irreducible characters of this system.
    pub fn decompose(&self, ch: &BTreeMap<Weight, u64>) -> Result<BTreeMap<Weight, u64>> {
        let mut rest: BTreeMap<Weight, i64> = ch.iter().map(|(k, &v)| (k.clone(), v as i64)).collect();
        let mut out = BTreeMap::new();
        let mut cache: BTreeMap<Weight, Character> = BTreeMap::new();
        loop {
            rest.retain(|_, v| *v != 0);
            let Some(top) = rest
                .iter()
                .max_by_key(|(k, _)| (k.iter().sum::<i64>(), (*k).clone()))
                .map(|(k, &v)| (k.clone(), v))
            else {
                break;
            };
            let (hw, m) = top;
            if m < 0 || !self.is_dominant(&hw) {
                return Err(Error::invariant(format!(
                    "character is not a nonnegative sum of irreducibles: leading term {hw:?} with multiplicity {m}"
                )));
            }
            if !cache.contains_key(&hw) {
                cache.insert(hw.clone(), self.irreducible_character(&hw)?);
            }
            for (w, &k) in &cache[&hw].weights {
                *rest.entry(w.clone()).or_insert(0) -= m * k as i64;
            }
            *out.entry(hw).or_insert(0) += m as u64;
        }
        Ok(out)
    }

    /// `lambda` of the dual group restricted to the Levi system `levi`.
    pub fn branch(&self, lambda: &[i64], levi: &DualSystem) -> Result<BTreeMap<Weight, u64>> {
        let ch = self.irreducible_character(lambda)?;
        let out = levi.decompose(&ch.weights)?;
        let total: u64 = out.iter().map(|(nu, m)| m * levi.weyl_dimension(nu)).sum();
        if total != ch.dim() {
            return Err(Error::invariant(format!(
                "branching dimensions sum to {total}, expected {}",
                ch.dim()
            )));
        }
        Ok(out)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Character {
    pub weights: BTreeMap<Weight, u64>,
    pub highest: Option<Weight>,
}

impl Character {
    pub fn dim(&self) -> u64 {
        self.weights.values().sum()
    }

    pub fn multiplicity(&self, mu: &[i64]) -> u64 {
        self.weights.get(mu).copied().unwrap_or(0)
    }

    /// Invariance under the reflections `s_i`, `i` in `nodes`.
    pub fn is_weyl_invariant(&self, datum: &MetaplecticDatum, nodes: &[usize]) -> bool {
        self.weights.iter().all(|(mu, &m)| {
            nodes
                .iter()
                .all(|&i| self.multiplicity(&datum.base.reflect(i, mu)) == m)
        })
    }
}

/// One cocenter class of the Levi occurring in the nilradical.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NilClass {
    /// Canonical class in `C*(M_n)`.
    pub class: Vec<i64>,
    pub weights: Vec<Weight>,
    pub highest_weight: Weight,
    pub dim: u64,
    /// `c_P` of the class, in `Lambda_{G,P}` coordinates.
    pub projection: Vec<i64>,
}

#[derive(Clone, Debug)]
pub struct NilradicalDatum {
    pub levi: LeviDatum,
    pub levi_system: DualSystem,
    pub levi_cocenter: AbelianGroup,
    /// The set `J`, ordered by projection.
    pub classes: Vec<NilClass>,
}

impl NilradicalDatum {
    pub fn new(levi: &LeviDatum) -> Result<Self> {
        if levi.complement.is_empty() {
            return Err(Error::input("the nilradical needs a proper parabolic (J_M must omit a node)"));
        }
        let datum = &levi.datum;
        let sys = DualSystem::levi(levi);
        let rels: Vec<Vec<i64>> = sys
            .simple
            .iter()
            .map(|s| datum.sharp_coords(s).expect("dual roots lie in Lambda_sharp"))
            .collect();
        let cocenter = AbelianGroup::from_relations(datum.rank(), &rels);

        let mut by_class: BTreeMap<Vec<i64>, Vec<Weight>> = BTreeMap::new();
        for root in &datum.dual_positive_roots {
            if levi.project(root).iter().any(|&c| c != 0) {
                let key = cocenter.class(&datum.sharp_coords(root).expect("in Lambda_sharp"));
                by_class.entry(key).or_default().push(root.clone());
            }
        }
        let mut classes = Vec::new();
        for (class, weights) in by_class {
            let projection = levi.project(&weights[0]);
            if weights.iter().any(|w| levi.project(w) != projection) {
                return Err(Error::invariant(format!(
                    "c_P is not constant on the class {class:?}"
                )));
            }
            let highest_weight = weights
                .iter()
                .max_by_key(|w| (w.iter().sum::<i64>(), (*w).clone()))
                .expect("nonempty")
                .clone();
            let ch = sys.irreducible_character(&highest_weight).map_err(|e| {
                Error::invariant(format!(
                    "irreducibility check failed for class {class:?}: {e}"
                ))
            })?;
            let mut piece: BTreeMap<Weight, u64> = BTreeMap::new();
            for w in &weights {
                *piece.entry(w.clone()).or_insert(0) += 1;
            }
            if piece != ch.weights {
                return Err(Error::invariant(format!(
                    "class {class:?} of the nilradical is not an irreducible Levi module: weights {weights:?} differ from the character with highest weight {highest_weight:?}"
                )));
            }
            classes.push(NilClass {
                class,
                dim: weights.len() as u64,
                weights,
                highest_weight,
                projection,
            });
        }
        classes.sort_by(|a, b| {
            (a.projection.iter().sum::<i64>(), &a.projection)
                .cmp(&(b.projection.iter().sum::<i64>(), &b.projection))
        });
        for pair in classes.windows(2) {
            if pair[0].projection == pair[1].projection {
                return Err(Error::invariant(format!(
                    "c_P is not injective on J: classes {:?} and {:?} both map to {:?}",
                    pair[0].class, pair[1].class, pair[0].projection
                )));
            }
        }
        for &i in &levi.complement {
            let key = cocenter.class(&datum.sharp_coords(&datum.dual_simple_roots[i]).expect("in sharp"));
            if !classes.iter().any(|c| c.class == key) {
                return Err(Error::invariant(format!(
                    "delta_{0} alpha_{0} is not in J",
                    i + 1
                )));
            }
        }
        Ok(NilradicalDatum {
            levi: levi.clone(),
            levi_system: sys,
            levi_cocenter: cocenter,
            classes,
        })
    }

    pub fn root_count(&self) -> usize {
        self.classes.iter().map(|c| c.weights.len()).sum()
    }

    /// Weights of `Sym^m` of the nilradical whose projection is `theta`,
    /// grouped by `m`: every multiset of roots is enumerated.
    pub fn sym_weights(&self, theta: &[i64]) -> BTreeMap<u32, BTreeMap<Weight, u64>> {
        let r = self.levi.datum.rank();
        let roots: Vec<(&Weight, Vec<i64>)> = self
            .classes
            .iter()
            .flat_map(|c| c.weights.iter().map(move |w| (w, c.projection.clone())))
            .collect();
        let fits = |p: &[i64]| p.iter().zip(theta).all(|(a, b)| a <= b);
        // state: (projection so far, weight so far, count) -> number of multisets
        let mut states: BTreeMap<(Vec<i64>, Weight, u32), u64> = BTreeMap::new();
        states.insert((vec![0; theta.len()], vec![0; r], 0), 1);
        for (root, proj) in roots {
            let mut next = BTreeMap::new();
            for ((p, w, m), count) in states {
                let (mut p, mut w, mut m) = (p, w, m);
                loop {
                    *next.entry((p.clone(), w.clone(), m)).or_insert(0) += count;
                    let p2: Vec<i64> = p.iter().zip(&proj).map(|(a, b)| a + b).collect();
                    if !fits(&p2) {
                        break;
                    }
                    p = p2;
                    w = w.iter().zip(root).map(|(a, b)| a + b).collect();
                    m += 1;
                }
            }
            states = next;
        }
        let mut out: BTreeMap<u32, BTreeMap<Weight, u64>> = BTreeMap::new();
        for ((p, w, m), count) in states {
            if p == theta {
                *out.entry(m).or_default().entry(w).or_insert(0) += count;
            }
        }
        out
    }

    pub fn graded_sym(&self, theta: &[i64], m: u32) -> Result<GradedSym> {
        self.levi.check_theta(theta)?;
        if !self.levi.in_positive_cone(theta) {
            return Ok(GradedSym {
                theta: theta.to_vec(),
                m,
                sym_dim: 0,
                env_character: Vec::new(),
                note: Some(format!("theta {theta:?} lies outside the positive cone")),
            });
        }
        let weights = self.sym_weights(theta);
        let direct: u64 = weights.get(&m).map_or(0, |w| w.values().sum());
        let product: u64 = crate::ic_stalks::enumerate_b_theta(self, theta)
            .iter()
            .filter(|b| b.size == m as u64)
            .map(|b| b.sym_product_dim(self))
            .sum();
        if direct != product {
            return Err(Error::invariant(format!(
                "Sym identity fails at theta {theta:?}, m = {m}: direct {direct}, product over B(theta) {product}"
            )));
        }
        let mut env_character = Vec::new();
        for (deg, ch) in &weights {
            env_character.push(GradedPiece {
                degree: *deg,
                dim: ch.values().sum(),
                decomposition: self.levi_system.decompose(ch)?,
            });
        }
        Ok(GradedSym {
            theta: theta.to_vec(),
            m,
            sym_dim: direct,
            env_character,
            note: None,
        })
    }

    /// Each constituent `U^nu` must have its lowest weight `w0^M(nu)` in the
    /// positive cone; raising `mu` above `nu` only lowers `w0^M(mu)`.
    pub fn check_positive(&self, decomposition: &BTreeMap<Weight, u64>) -> bool {
        check_positive(&self.levi, decomposition)
    }
}

pub fn check_positive(levi: &LeviDatum, decomposition: &BTreeMap<Weight, u64>) -> bool {
    let w0 = levi.w0_m();
    decomposition.keys().all(|nu| {
        levi.datum
            .base
            .weyl_act(&w0, nu)
            .iter()
            .all(|&c| c >= 0)
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedPiece {
    /// The `Sym` degree `m`.
    pub degree: u32,
    pub dim: u64,
    /// Highest weight of each Levi constituent and its multiplicity.
    pub decomposition: BTreeMap<Weight, u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedSym {
    pub theta: Vec<i64>,
    pub m: u32,
    pub sym_dim: u64,
    pub env_character: Vec<GradedPiece>,
    pub note: Option<String>,
}

impl GradedSym {
    pub fn env_dim(&self) -> u64 {
        self.env_character.iter().map(|p| p.dim).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootdata::RootDatum;

    fn meta(s: &str, n: i64) -> MetaplecticDatum {
        MetaplecticDatum::new(RootDatum::new(s.parse().unwrap()).unwrap(), n).unwrap()
    }

    #[test]
    fn rank_one_characters() {
        for n in [2, 4, 6] {
            let m = meta("A1", n);
            let e = n / 2;
            let ch = DualSystem::full(&m).irreducible_character(&[e]).unwrap();
            let expected: BTreeMap<Weight, u64> = [(vec![e], 1), (vec![-e], 1)].into();
            assert_eq!(ch.weights, expected);
        }
        for n in [1, 3, 5] {
            let m = meta("A1", n);
            let ch = DualSystem::full(&m).irreducible_character(&[n]).unwrap();
            let expected: BTreeMap<Weight, u64> = [(vec![n], 1), (vec![0], 1), (vec![-n], 1)].into();
            assert_eq!(ch.weights, expected);
        }
    }

    #[test]
    fn trivial_character() {
        let m = meta("G2", 2);
        let ch = DualSystem::full(&m).irreducible_character(&[0, 0]).unwrap();
        assert_eq!(ch.dim(), 1);
    }

    #[test]
    fn non_dominant_rejected() {
        let m = meta("A2", 1);
        let err = DualSystem::full(&m).irreducible_character(&[-1, 0]).unwrap_err();
        assert!(err.to_string().contains("alpha_check_1"));
    }

    #[test]
    fn adjoint_a2_branching() {
        let m = meta("A2", 1);
        let levi = LeviDatum::new(&m, &[0]).unwrap();
        let full = DualSystem::full(&m);
        let ls = DualSystem::levi(&levi);
        let b = full.branch(&[1, 1], &ls).unwrap();
        let mut dims: Vec<u64> = b
            .iter()
            .flat_map(|(nu, &k)| std::iter::repeat(ls.weyl_dimension(nu)).take(k as usize))
            .collect();
        dims.sort_unstable();
        assert_eq!(dims, vec![1, 2, 2, 3]);
    }

    #[test]
    fn nilradical_a2_levi() {
        let m = meta("A2", 1);
        let levi = LeviDatum::new(&m, &[0]).unwrap();
        let nil = NilradicalDatum::new(&levi).unwrap();
        assert_eq!(nil.classes.len(), 1);
        let c = &nil.classes[0];
        assert_eq!(c.dim, 2);
        assert_eq!(c.weights, vec![vec![0, 1], vec![1, 1]]);
        assert!(nil.check_positive(&[(c.highest_weight.clone(), 1)].into()));
        // Mirror: highest weight -alpha_2.
        assert!(!nil.check_positive(&[(vec![0, -1], 1)].into()));
        assert!(nil.check_positive(&[(vec![0, 0], 1)].into()));
    }

    #[test]
    fn sym_a1_borel() {
        for n in 1..=4 {
            let m = meta("A1", n);
            let nil = NilradicalDatum::new(&LeviDatum::new(&m, &[]).unwrap()).unwrap();
            assert_eq!(nil.classes.len(), 1);
            assert_eq!(nil.classes[0].projection, vec![n]);
            for t in 0..=8 {
                let total: u64 = (0..=8).map(|k| nil.graded_sym(&[t], k).unwrap().sym_dim).sum();
                assert_eq!(total, u64::from(t % n == 0), "n = {n}, theta = {t}");
            }
        }
    }

    #[test]
    fn sym_a2_borel() {
        let m = meta("A2", 1);
        let nil = NilradicalDatum::new(&LeviDatum::new(&m, &[]).unwrap()).unwrap();
        let g = nil.graded_sym(&[1, 1], 1).unwrap();
        assert_eq!(g.sym_dim, 1);
        assert_eq!(g.env_dim(), 2);
        assert_eq!(nil.graded_sym(&[0, 0], 0).unwrap().sym_dim, 1);
        let out = nil.graded_sym(&[-1, 0], 0).unwrap();
        assert_eq!(out.sym_dim, 0);
        assert!(out.note.is_some());
    }

    #[test]
    fn principal_grading_rank_one() {
        let even = DualSystem::full(&meta("A1", 4));
        assert_eq!(even.principal_grading(&[2]), 1);
        let odd = DualSystem::full(&meta("A1", 3));
        assert_eq!(odd.principal_grading(&[3]), 2);
    }
}
