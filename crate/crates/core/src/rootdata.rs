//! Simple simply-connected root data.
//!
//! Coordinates: a coweight `mu` is the vector of its coefficients on the
//! simple coroots `alpha_1..alpha_r`. A weight is stored as its tuple of
//! pairings with `alpha_1..alpha_r`. The Cartan matrix is Bourbaki's:
//! `cartan[i][j] = <alpha_i, alpha_check_j>` (coroot `i` against root `j`).

use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{dot, mat_vec, Mat};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CartanLabel {
    pub family: Family,
    pub rank: usize,
}

impl CartanLabel {
    pub fn new(family: Family, rank: usize) -> Result<Self> {
        let ok = match family {
            Family::A => rank >= 1,
            Family::B | Family::C => rank >= 2,
            Family::D => rank >= 4,
            Family::E => (6..=8).contains(&rank),
            Family::F => rank == 4,
            Family::G => rank == 2,
        };
        if ok {
            Ok(CartanLabel { family, rank })
        } else {
            let bound = match family {
                Family::A => "rank >= 1",
                Family::B | Family::C => "rank >= 2",
                Family::D => "rank >= 4",
                Family::E => "rank in {6, 7, 8}",
                Family::F => "rank = 4",
                Family::G => "rank = 2",
            };
            Err(Error::InadmissibleLabel {
                label: format!("{family:?}{rank}"),
                reason: format!("type {family:?} requires {bound}"),
            })
        }
    }

    /// Bourbaki Cartan matrix `a[i][j] = <alpha_i^vee, alpha_j>`.
    pub fn cartan_matrix(&self) -> Mat {
        let r = self.rank;
        let mut a = vec![vec![0i64; r]; r];
        for (i, row) in a.iter_mut().enumerate() {
            row[i] = 2;
        }
        let mut link = |i: usize, j: usize| {
            a[i][j] = -1;
            a[j][i] = -1;
        };
        match self.family {
            Family::A | Family::B | Family::C => {
                for i in 0..r - 1 {
                    link(i, i + 1);
                }
            }
            Family::D => {
                for i in 0..r - 2 {
                    link(i, i + 1);
                }
                link(r - 3, r - 1);
            }
            Family::E => {
                link(0, 2);
                link(1, 3);
                for i in 2..r - 1 {
                    link(i, i + 1);
                }
            }
            Family::F => {
                for i in 0..3 {
                    link(i, i + 1);
                }
            }
            Family::G => link(0, 1),
        }
        match self.family {
            Family::B => a[r - 1][r - 2] = -2,
            Family::C => a[r - 2][r - 1] = -2,
            Family::F => a[2][1] = -2,
            Family::G => a[0][1] = -3,
            _ => {}
        }
        a
    }

    /// Order of the Weyl group, from the classical formulas.
    pub fn weyl_order(&self) -> u64 {
        let r = self.rank as u64;
        let fact = |k: u64| (1..=k).product::<u64>();
        match self.family {
            Family::A => fact(r + 1),
            Family::B | Family::C => (1u64 << r) * fact(r),
            Family::D => (1u64 << (r - 1)) * fact(r),
            Family::E => match r {
                6 => 51_840,
                7 => 2_903_040,
                _ => 696_729_600,
            },
            Family::F => 1152,
            Family::G => 12,
        }
    }

    /// Classical dual Coxeter number; only used as a cross-check.
    pub fn dual_coxeter_table(&self) -> i64 {
        let r = self.rank as i64;
        match self.family {
            Family::A => r + 1,
            Family::B => 2 * r - 1,
            Family::C => r + 1,
            Family::D => 2 * r - 2,
            Family::E => match r {
                6 => 12,
                7 => 18,
                _ => 30,
            },
            Family::F => 9,
            Family::G => 4,
        }
    }

    pub fn positive_root_count(&self) -> usize {
        let r = self.rank;
        match self.family {
            Family::A => r * (r + 1) / 2,
            Family::B | Family::C => r * r,
            Family::D => r * (r - 1),
            Family::E => match r {
                6 => 36,
                7 => 63,
                _ => 120,
            },
            Family::F => 24,
            Family::G => 6,
        }
    }
}

impl fmt::Display for CartanLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}{}", self.family, self.rank)
    }
}

impl FromStr for CartanLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::InadmissibleLabel {
            label: s.to_string(),
            reason: "expected a family letter A-G followed by a rank".into(),
        };
        let mut chars = s.chars();
        let family = match chars.next().map(|c| c.to_ascii_uppercase()) {
            Some('A') => Family::A,
            Some('B') => Family::B,
            Some('C') => Family::C,
            Some('D') => Family::D,
            Some('E') => Family::E,
            Some('F') => Family::F,
            Some('G') => Family::G,
            _ => return Err(bad()),
        };
        let rank: usize = chars.as_str().parse().map_err(|_| bad())?;
        CartanLabel::new(family, rank)
    }
}

impl Serialize for CartanLabel {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for CartanLabel {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Positive roots of the finite root system with Cartan matrix `a`
/// (`a[i][j] = <coroot_i, root_j>`), as coefficient vectors on the simple
/// roots, sorted by height and then lexicographically.
pub fn positive_roots_of(a: &Mat) -> Vec<Vec<i64>> {
    let r = a.len();
    let mut roots: Vec<Vec<i64>> = (0..r)
        .map(|i| (0..r).map(|j| i64::from(i == j)).collect())
        .collect();
    let mut known: BTreeSet<Vec<i64>> = roots.iter().cloned().collect();
    let mut layer = roots.clone();
    while !layer.is_empty() {
        let mut next = Vec::new();
        for beta in &layer {
            for i in 0..r {
                // beta - q e_i is a root for q = 0..=qmax, p = qmax - <coroot_i, beta>.
                let mut qmax = 0;
                let mut probe = beta.clone();
                loop {
                    probe[i] -= 1;
                    if known.contains(&probe) {
                        qmax += 1;
                    } else {
                        break;
                    }
                }
                let pairing: i64 = (0..r).map(|j| beta[j] * a[i][j]).sum();
                if qmax - pairing > 0 {
                    let mut up = beta.clone();
                    up[i] += 1;
                    if known.insert(up.clone()) {
                        next.push(up);
                    }
                }
            }
        }
        roots.extend(next.iter().cloned());
        layer = next;
    }
    roots.sort_by(|x, y| {
        let hx: i64 = x.iter().sum();
        let hy: i64 = y.iter().sum();
        hx.cmp(&hy).then_with(|| x.cmp(y))
    });
    roots
}

/// A word `[i1, ..., ik]` standing for `s_{i1} s_{i2} ... s_{ik}`; the
/// rightmost reflection acts first. Words are not reduced.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WeylElement {
    pub word: Vec<usize>,
}

impl WeylElement {
    pub fn identity() -> Self {
        WeylElement { word: Vec::new() }
    }

    pub fn simple(i: usize) -> Self {
        WeylElement { word: vec![i] }
    }

    pub fn from_word(word: Vec<usize>) -> Self {
        WeylElement { word }
    }

    /// `self * other` (apply `other` first).
    pub fn compose(&self, other: &WeylElement) -> WeylElement {
        let mut word = self.word.clone();
        word.extend_from_slice(&other.word);
        WeylElement { word }
    }

    pub fn inverse(&self) -> WeylElement {
        WeylElement {
            word: self.word.iter().rev().copied().collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dominance {
    pub is_dominant: bool,
    pub dominant_representative: Vec<i64>,
    pub w: WeylElement,
}

#[derive(Clone, Debug)]
pub struct RootDatum {
    pub label: CartanLabel,
    pub cartan: Mat,
    /// `iota[i][i] / 2`: 1 on short coroots.
    pub symmetrizer: Vec<i64>,
    pub iota: Mat,
    /// Positive roots as coefficient vectors on the simple roots.
    pub positive_roots_simple: Vec<Vec<i64>>,
    /// Positive roots as weights: pairings with `alpha_1..alpha_r`.
    pub positive_roots: Vec<Vec<i64>>,
    /// Positive coroots as coweights (coefficients on the simple coroots).
    pub positive_coroots: Vec<Vec<i64>>,
    /// `<alpha_i, rho_check> = 1` for every `i`.
    pub rho_check: Vec<i64>,
    pub h_dual: i64,
    pub w0: WeylElement,
}

impl RootDatum {
    pub fn new(label: CartanLabel) -> Result<Self> {
        let label = CartanLabel::new(label.family, label.rank)?;
        let cartan = label.cartan_matrix();
        let r = label.rank;

        // d_i <alpha_j, alpha_check_i> must be symmetric in (i, j); propagate
        // along the Dynkin diagram, then clear denominators.
        let mut num = vec![0i64; r];
        let mut den = vec![0i64; r];
        num[0] = 1;
        den[0] = 1;
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for j in 0..r {
                if i != j && cartan[i][j] != 0 && den[j] == 0 {
                    // d_i c[j][i] = d_j c[i][j]
                    let n = num[i] * cartan[j][i];
                    let d = den[i] * cartan[i][j];
                    let g = num_integer::gcd(n, d);
                    num[j] = n / g;
                    den[j] = d / g;
                    if den[j] < 0 {
                        num[j] = -num[j];
                        den[j] = -den[j];
                    }
                    queue.push_back(j);
                }
            }
        }
        let l = den.iter().fold(1i64, |acc, &d| num_integer::lcm(acc, d));
        let mut symmetrizer: Vec<i64> = (0..r).map(|i| num[i] * l / den[i]).collect();
        let g = symmetrizer.iter().fold(0i64, |acc, &d| num_integer::gcd(acc, d));
        for d in symmetrizer.iter_mut() {
            *d /= g;
        }
        let iota: Mat = (0..r)
            .map(|i| (0..r).map(|j| symmetrizer[i] * cartan[j][i]).collect())
            .collect();

        let positive_roots_simple = positive_roots_of(&cartan);
        let positive_roots: Vec<Vec<i64>> = positive_roots_simple
            .iter()
            .map(|k| (0..r).map(|i| dot(k, &cartan[i])).collect())
            .collect();
        let cartan_t = crate::lattice::transpose(&cartan);
        let positive_coroots = positive_roots_of(&cartan_t);

        let mut h_dual = None;
        for i in 0..r {
            for j in 0..r {
                let s: i64 = positive_roots.iter().map(|p| 2 * p[i] * p[j]).sum();
                if iota[i][j] == 0 {
                    if s != 0 {
                        return Err(Error::invariant(format!(
                            "sum of squared roots nonzero at ({i},{j}) where iota vanishes"
                        )));
                    }
                    continue;
                }
                if s % (2 * iota[i][j]) != 0 {
                    return Err(Error::invariant(format!(
                        "sum of squared roots not a multiple of 2 iota at ({i},{j})"
                    )));
                }
                let h = s / (2 * iota[i][j]);
                match h_dual {
                    None => h_dual = Some(h),
                    Some(h0) if h0 != h => {
                        return Err(Error::invariant(format!(
                            "sum of squared roots not proportional to iota: {h0} vs {h}"
                        )))
                    }
                    _ => {}
                }
            }
        }

        let mut datum = RootDatum {
            label,
            cartan,
            symmetrizer,
            iota,
            positive_roots_simple,
            positive_roots,
            positive_coroots,
            rho_check: vec![1; r],
            h_dual: h_dual.expect("rank >= 1"),
            w0: WeylElement::identity(),
        };
        datum.w0 = datum.longest_element_on(&(0..r).collect::<Vec<_>>());
        Ok(datum)
    }

    pub fn rank(&self) -> usize {
        self.label.rank
    }

    /// `<mu, alpha_check_i>`.
    pub fn pair_root(&self, mu: &[i64], i: usize) -> i64 {
        mu.iter().enumerate().map(|(j, &m)| m * self.cartan[j][i]).sum()
    }

    /// The weight `iota(mu, .)` as pairings with the simple coroots.
    pub fn iota_of(&self, mu: &[i64]) -> Vec<i64> {
        mat_vec(&self.iota, mu)
    }

    pub fn iota_form(&self, x: &[i64], y: &[i64]) -> i64 {
        crate::lattice::bilinear(&self.iota, x, y)
    }

    /// `kappa = -2 h_dual iota`.
    pub fn kappa_form(&self, x: &[i64], y: &[i64]) -> i64 {
        -2 * self.h_dual * self.iota_form(x, y)
    }

    pub fn kappa_matrix(&self) -> Mat {
        self.iota
            .iter()
            .map(|row| row.iter().map(|&x| -2 * self.h_dual * x).collect())
            .collect()
    }

    pub fn reflect(&self, i: usize, mu: &[i64]) -> Vec<i64> {
        let p = self.pair_root(mu, i);
        let mut out = mu.to_vec();
        out[i] -= p;
        out
    }

    pub fn weyl_act(&self, w: &WeylElement, mu: &[i64]) -> Vec<i64> {
        w.word
            .iter()
            .rev()
            .fold(mu.to_vec(), |acc, &i| self.reflect(i, &acc))
    }

    pub fn is_dominant(&self, mu: &[i64]) -> bool {
        (0..self.rank()).all(|i| self.pair_root(mu, i) >= 0)
    }

    pub fn dominance(&self, mu: &[i64]) -> Dominance {
        self.dominance_on(&(0..self.rank()).collect::<Vec<_>>(), mu)
    }

    /// Dominance for the parabolic subgroup generated by `nodes`.
    pub fn dominance_on(&self, nodes: &[usize], mu: &[i64]) -> Dominance {
        let mut cur = mu.to_vec();
        let mut word = Vec::new();
        while let Some(&i) = nodes.iter().find(|&&i| self.pair_root(&cur, i) < 0) {
            cur = self.reflect(i, &cur);
            word.insert(0, i);
        }
        Dominance {
            is_dominant: word.is_empty(),
            dominant_representative: cur,
            w: WeylElement { word },
        }
    }

    /// Longest element of the parabolic subgroup generated by `nodes`.
    pub fn longest_element_on(&self, nodes: &[usize]) -> WeylElement {
        // Sum of the positive coroots supported on `nodes` pairs to 2 with
        // every simple root of that subsystem.
        let mut regular = vec![0i64; self.rank()];
        for c in &self.positive_coroots {
            if c.iter().enumerate().all(|(j, &x)| x == 0 || nodes.contains(&j)) {
                for (a, b) in regular.iter_mut().zip(c) {
                    *a -= b;
                }
            }
        }
        self.dominance_on(nodes, &regular).w
    }

    pub fn orbit(&self, mu: &[i64]) -> Vec<Vec<i64>> {
        let mut seen = BTreeSet::new();
        seen.insert(mu.to_vec());
        let mut stack = vec![mu.to_vec()];
        while let Some(x) = stack.pop() {
            for i in 0..self.rank() {
                let y = self.reflect(i, &x);
                if seen.insert(y.clone()) {
                    stack.push(y);
                }
            }
        }
        seen.into_iter().collect()
    }

    /// `2 rho` for the coroot system: the sum of the positive coroots.
    pub fn two_rho_coroot(&self) -> Vec<i64> {
        let mut s = vec![0i64; self.rank()];
        for c in &self.positive_coroots {
            for (a, b) in s.iter_mut().zip(c) {
                *a += b;
            }
        }
        s
    }

    /// Every element of `W` with its sign, found by enumerating the orbit of a
    /// regular coweight. Only sensible for small ranks.
    pub fn weyl_group(&self) -> Vec<(WeylElement, i64)> {
        let regular = self.two_rho_coroot();
        let mut seen = BTreeSet::new();
        seen.insert(regular.clone());
        let mut out = vec![(WeylElement::identity(), 1i64)];
        let mut queue = VecDeque::from([(regular, WeylElement::identity(), 1i64)]);
        while let Some((x, w, sign)) = queue.pop_front() {
            for i in 0..self.rank() {
                let y = self.reflect(i, &x);
                if seen.insert(y.clone()) {
                    let w2 = WeylElement::simple(i).compose(&w);
                    out.push((w2.clone(), -sign));
                    queue.push_back((y, w2, -sign));
                }
            }
        }
        out
    }
}


/// Components of a Cartan matrix identified as finite types, each with the
/// list of nodes it occupies. Rank-two double bonds are named `B2` when the
/// second node is the short root and `C2` otherwise.
pub fn classify_cartan(a: &Mat) -> Result<Vec<(String, Vec<usize>)>> {
    let r = a.len();
    let mut seen = vec![false; r];
    let mut out = Vec::new();
    for start in 0..r {
        if seen[start] {
            continue;
        }
        let mut comp = vec![start];
        seen[start] = true;
        let mut k = 0;
        while k < comp.len() {
            let i = comp[k];
            for j in 0..r {
                if j != i && (a[i][j] != 0 || a[j][i] != 0) && !seen[j] {
                    seen[j] = true;
                    comp.push(j);
                }
            }
            k += 1;
        }
        comp.sort_unstable();
        out.push((classify_component(a, &comp)?, comp));
    }
    Ok(out)
}

fn classify_component(a: &Mat, nodes: &[usize]) -> Result<String> {
    let bad = |why: &str| Error::invariant(format!("not a finite-type Cartan matrix: {why}"));
    let m = nodes.len();
    let mut edges = Vec::new();
    for (x, &i) in nodes.iter().enumerate() {
        if a[i][i] != 2 {
            return Err(bad("diagonal entry differs from 2"));
        }
        for &j in &nodes[x + 1..] {
            let (p, q) = (a[i][j], a[j][i]);
            if (p == 0) != (q == 0) || p > 0 || q > 0 {
                return Err(bad("off-diagonal sign or zero pattern"));
            }
            if p != 0 {
                let mult = p * q;
                if !(1..=3).contains(&mult) {
                    return Err(bad("bond multiplicity above 3"));
                }
                edges.push((i, j, mult));
            }
        }
    }
    if edges.len() + 1 != m {
        return Err(bad("Dynkin diagram has a cycle"));
    }
    let degree = |v: usize| edges.iter().filter(|e| e.0 == v || e.1 == v).count();
    let multi: Vec<_> = edges.iter().filter(|e| e.2 > 1).collect();
    if m == 1 {
        return Ok("A1".into());
    }
    if multi.len() > 1 {
        return Err(bad("more than one multiple bond"));
    }
    if let Some(&&(i, j, mult)) = multi.first() {
        if nodes.iter().any(|&v| degree(v) > 2) {
            return Err(bad("branch node next to a multiple bond"));
        }
        if mult == 3 {
            return if m == 2 { Ok("G2".into()) } else { Err(bad("triple bond in rank > 2")) };
        }
        if m == 2 {
            let (first, second) = (nodes[0], nodes[1]);
            return Ok(if a[second][first] == -2 { "B2".into() } else { "C2".into() });
        }
        let (end, other) = if degree(i) == 1 {
            (i, j)
        } else if degree(j) == 1 {
            (j, i)
        } else {
            return if m == 4 { Ok("F4".into()) } else { Err(bad("inner double bond")) };
        };
        // B: the end node carries the short root.
        return Ok(if a[end][other] == -2 { format!("B{m}") } else { format!("C{m}") });
    }
    let branch: Vec<usize> = nodes.iter().copied().filter(|&v| degree(v) >= 3).collect();
    match branch.as_slice() {
        [] => Ok(format!("A{m}")),
        [b] if degree(*b) == 3 => {
            let mut arms = Vec::new();
            for e in edges.iter().filter(|e| e.0 == *b || e.1 == *b) {
                let mut prev = *b;
                let mut cur = if e.0 == *b { e.1 } else { e.0 };
                let mut len = 1;
                loop {
                    let next = edges.iter().find_map(|f| {
                        if f.0 == cur && f.1 != prev {
                            Some(f.1)
                        } else if f.1 == cur && f.0 != prev {
                            Some(f.0)
                        } else {
                            None
                        }
                    });
                    match next {
                        Some(nx) => {
                            prev = cur;
                            cur = nx;
                            len += 1;
                        }
                        None => break,
                    }
                }
                arms.push(len);
            }
            arms.sort_unstable();
            match arms.as_slice() {
                [1, 1, _] => Ok(format!("D{m}")),
                [1, 2, 2] => Ok("E6".into()),
                [1, 2, 3] => Ok("E7".into()),
                [1, 2, 4] => Ok("E8".into()),
                _ => Err(bad("branch arms of infinite type")),
            }
        }
        _ => Err(bad("more than one branch node")),
    }
}

/// Human-readable product of component names; `T` for the empty diagram.
pub fn type_name(components: &[(String, Vec<usize>)]) -> String {
    if components.is_empty() {
        "T".into()
    } else {
        components
            .iter()
            .map(|c| c.0.clone())
            .collect::<Vec<_>>()
            .join("x")
    }
}
