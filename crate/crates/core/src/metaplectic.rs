//! The lattice `Lambda_sharp`, the root datum of the metaplectic dual group,
//! cocenters and the character map to the center, and Levi data.

use std::collections::BTreeSet;

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{self, hnf_coords, hnf_rows, AbelianGroup, Mat};
use crate::rootdata::{classify_cartan, type_name, RootDatum, WeylElement};

#[derive(Clone, Debug)]
pub struct MetaplecticDatum {
    pub base: RootDatum,
    pub n: i64,
    /// `N = 2 h_dual n`.
    pub big_n: i64,
    /// Rows form the Hermite basis of `Lambda_sharp`.
    pub lambda_sharp: Mat,
    pub delta: Vec<i64>,
    pub dual_simple_roots: Vec<Vec<i64>>,
    pub dual_cartan: Mat,
    /// `2 rho_n`, an integer vector.
    pub rho_n2: Vec<i64>,
    pub dual_positive_roots: Vec<Vec<i64>>,
}

impl MetaplecticDatum {
    pub fn new(base: RootDatum, n: i64) -> Result<Self> {
        if n < 1 {
            return Err(Error::input(format!("n must be positive, got {n}")));
        }
        let r = base.rank();
        // iota mu in n Z^r: with u iota v = diag(d), y = v^{-1} mu must have
        // y_i in (n / gcd(n, d_i)) Z.
        let s = lattice::smith(&base.iota, r);
        let vt = lattice::transpose(&s.v);
        let gens: Vec<Vec<i64>> = (0..r)
            .map(|i| {
                let scale = n / num_integer::gcd(n, s.diag[i]);
                vt[i].iter().map(|x| x * scale).collect()
            })
            .collect();
        let lambda_sharp = hnf_rows(&gens);

        let delta: Vec<i64> = (0..r)
            .map(|i| {
                let two_n = 2 * n;
                two_n / num_integer::gcd(base.iota[i][i], two_n)
            })
            .collect();
        let dual_simple_roots: Vec<Vec<i64>> = (0..r)
            .map(|i| (0..r).map(|j| if i == j { delta[i] } else { 0 }).collect())
            .collect();
        let dual_cartan: Mat = (0..r)
            .map(|i| {
                (0..r)
                    .map(|j| {
                        let num = 2 * delta[i] * delta[j] * base.iota[i][j];
                        let den = delta[i] * delta[i] * base.iota[i][i];
                        debug_assert_eq!(num % den, 0);
                        num / den
                    })
                    .collect()
            })
            .collect();

        let mut roots = BTreeSet::new();
        let mut stack: Vec<Vec<i64>> = dual_simple_roots.clone();
        roots.extend(stack.iter().cloned());
        while let Some(x) = stack.pop() {
            for i in 0..r {
                let y = base.reflect(i, &x);
                if roots.insert(y.clone()) {
                    stack.push(y);
                }
            }
        }
        let mut dual_positive_roots: Vec<Vec<i64>> = roots
            .into_iter()
            .filter(|x| x.iter().all(|&c| c >= 0))
            .collect();
        dual_positive_roots.sort_by_key(|x| (x.iter().sum::<i64>(), x.clone()));

        let mut rho_n2 = vec![0i64; r];
        for p in &dual_positive_roots {
            for (a, b) in rho_n2.iter_mut().zip(p) {
                *a += b;
            }
        }

        let datum = MetaplecticDatum {
            big_n: 2 * base.h_dual * n,
            base,
            n,
            lambda_sharp,
            delta,
            dual_simple_roots,
            dual_cartan,
            rho_n2,
            dual_positive_roots,
        };
        classify_cartan(&datum.dual_cartan)?;
        Ok(datum)
    }

    pub fn rank(&self) -> usize {
        self.base.rank()
    }

    /// Membership law: `iota(mu, alpha_i)` divisible by `n` for all `i`.
    pub fn in_sharp(&self, mu: &[i64]) -> bool {
        self.base.iota_of(mu).iter().all(|x| x % self.n == 0)
    }

    /// Same as [`in_sharp`](Self::in_sharp) but names the first failing pairing.
    pub fn check_sharp(&self, mu: &[i64]) -> Result<()> {
        if mu.len() != self.rank() {
            return Err(Error::input(format!(
                "vector {mu:?} has length {}, rank is {}",
                mu.len(),
                self.rank()
            )));
        }
        for (i, x) in self.base.iota_of(mu).iter().enumerate() {
            if x % self.n != 0 {
                return Err(Error::input(format!(
                    "{mu:?} is not in Lambda_sharp: iota(mu, alpha_{}) = {x} is not divisible by n = {}",
                    i + 1,
                    self.n
                )));
            }
        }
        Ok(())
    }

    /// Coordinates on the Hermite basis of `Lambda_sharp`.
    pub fn sharp_coords(&self, mu: &[i64]) -> Option<Vec<i64>> {
        hnf_coords(&self.lambda_sharp, mu)
    }

    /// `[Lambda : Lambda_sharp]`.
    pub fn sharp_index(&self) -> i64 {
        lattice::det(&self.lambda_sharp).abs()
    }

    pub fn dual_type(&self) -> String {
        type_name(&classify_cartan(&self.dual_cartan).expect("checked at construction"))
    }

    /// `C*(G_n) = Lambda_sharp / span(dual roots)`, in sharp-basis coordinates.
    pub fn dual_cocenter(&self) -> AbelianGroup {
        let rels: Vec<Vec<i64>> = self
            .dual_simple_roots
            .iter()
            .map(|b| self.sharp_coords(b).expect("dual roots lie in Lambda_sharp"))
            .collect();
        AbelianGroup::from_relations(self.rank(), &rels)
    }

    /// `C*(G)`: weights (as pairings) modulo the root lattice.
    pub fn center_dual(&self) -> AbelianGroup {
        let r = self.rank();
        let rels: Vec<Vec<i64>> = (0..r)
            .map(|j| (0..r).map(|i| self.base.cartan[i][j]).collect())
            .collect();
        AbelianGroup::from_relations(r, &rels)
    }

    pub fn xi_character(&self, nu: &[i64]) -> Result<XiCharacter> {
        self.check_sharp(nu)?;
        Ok(XiCharacter {
            pairing: self.base.iota_of(nu).iter().map(|x| x / self.n).collect(),
        })
    }

    /// The character by which `H^nu` shifts a `Z(G)`-graded object.
    pub fn central_twist(&self, nu: &[i64]) -> Result<XiCharacter> {
        self.xi_character(nu)
    }

    /// Inverse convention used for the grading by components of `Bun_T`.
    pub fn central_twist_inverse(&self, nu: &[i64]) -> Result<XiCharacter> {
        let x = self.xi_character(nu)?;
        Ok(XiCharacter {
            pairing: x.pairing.iter().map(|p| -p).collect(),
        })
    }

    pub fn character_is_trivial(&self, chi: &XiCharacter) -> bool {
        let g = self.center_dual();
        g.class(&chi.pairing) == g.zero()
    }

    /// Fundamental coweights: representatives of generators of `Z(G)`.
    pub fn center_representatives(&self) -> Vec<Vec<Rational64>> {
        let ct: Vec<Vec<Rational64>> = lattice::transpose(&self.base.cartan)
            .iter()
            .map(|row| row.iter().map(|&x| Rational64::from_integer(x)).collect())
            .collect();
        let inv = rational_inverse(&ct);
        let r = self.rank();
        (0..r).map(|k| (0..r).map(|i| inv[i][k]).collect()).collect()
    }

    pub fn profile(&self) -> Result<DualGroupProfile> {
        let cocenter = self.dual_cocenter();
        let center = self.center_dual();
        let basis_images: Vec<Vec<i64>> = self
            .lambda_sharp
            .iter()
            .map(|b| self.base.iota_of(b).iter().map(|x| x / self.n).collect())
            .collect();
        let image_order = center.generated_order(&basis_images);
        let cocenter_order = cocenter
            .order()
            .ok_or_else(|| Error::invariant("dual cocenter is infinite"))?;
        let injective = image_order == cocenter_order;
        if !injective {
            return Err(Error::invariant(format!(
                "xi is not injective on C*(G_n): |C*(G_n)| = {cocenter_order}, image has {image_order} elements"
            )));
        }
        let lands_in_torsion = basis_images.iter().all(|p| {
            let scaled: Vec<i64> = p.iter().map(|x| x * self.n).collect();
            center.class(&scaled) == center.zero()
        });
        if !lands_in_torsion {
            return Err(Error::invariant("xi does not land in the n-torsion of C*(G)"));
        }
        let torsion = center.torsion_order(self.n);
        Ok(DualGroupProfile {
            dual_cartan_type: self.dual_type(),
            cocenter: cocenter.to_string(),
            cocenter_invariants: cocenter.invariants.clone(),
            center_order: center.order().expect("finite"),
            center_n_torsion_order: torsion,
            xi_injective: injective,
            xi_surjective_onto_cn: image_order == torsion,
        })
    }

    /// `w(rho_n) - rho_n`.
    pub fn twisted_weyl_shift(&self, w: &WeylElement) -> Result<Vec<i64>> {
        let moved = self.base.weyl_act(w, &self.rho_n2);
        let diff: Vec<i64> = moved.iter().zip(&self.rho_n2).map(|(a, b)| a - b).collect();
        if diff.iter().any(|x| x % 2 != 0) {
            return Err(Error::invariant("w(2 rho_n) - 2 rho_n is not even"));
        }
        let half: Vec<i64> = diff.iter().map(|x| x / 2).collect();
        if !self.in_sharp(&half) {
            return Err(Error::invariant(format!(
                "twisted shift {half:?} is not in Lambda_sharp"
            )));
        }
        Ok(half)
    }

    /// Dynkin labels of `nu` for the dual group: `<nu, alpha_check_i> / delta_i`.
    pub fn dual_dynkin_labels(&self, nu: &[i64]) -> Vec<i64> {
        (0..self.rank())
            .map(|i| self.base.pair_root(nu, i) / self.delta[i])
            .collect()
    }

    /// Dominant weights of the dual group in `Lambda_sharp` whose dual
    /// Dynkin labels sum to at most `height`.
    pub fn dominant_weights(&self, height: i64) -> Vec<Vec<i64>> {
        let r = self.rank();
        let omega = self.center_representatives();
        let mut out = Vec::new();
        let mut labels = vec![0i64; r];
        loop {
            let mut nu = vec![Rational64::from_integer(0); r];
            for (i, &l) in labels.iter().enumerate() {
                for (x, w) in nu.iter_mut().zip(&omega[i]) {
                    *x += *w * (self.delta[i] * l);
                }
            }
            if nu.iter().all(|x| x.is_integer()) {
                let v: Vec<i64> = nu.iter().map(|x| x.to_integer()).collect();
                if self.in_sharp(&v) {
                    out.push(v);
                }
            }
            // next label vector with sum <= height
            let mut i = 0;
            loop {
                if i == r {
                    return out;
                }
                labels[i] += 1;
                if labels.iter().sum::<i64>() <= height {
                    break;
                }
                labels[i] = 0;
                i += 1;
            }
        }
    }
}

fn rational_inverse(a: &[Vec<Rational64>]) -> Vec<Vec<Rational64>> {
    let n = a.len();
    let zero = Rational64::from_integer(0);
    let one = Rational64::from_integer(1);
    let mut m: Vec<Vec<Rational64>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { one } else { zero }));
            r
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&i| m[i][c] != zero).expect("invertible");
        m.swap(c, p);
        let pv = m[c][c];
        for x in m[c].iter_mut() {
            *x /= pv;
        }
        for i in 0..n {
            if i != c && m[i][c] != zero {
                let f = m[i][c];
                let row_c = m[c].clone();
                for (x, y) in m[i].iter_mut().zip(&row_c) {
                    *x -= f * y;
                }
            }
        }
    }
    m.into_iter().map(|row| row[n..].to_vec()).collect()
}

/// A character of `Z(G)`, stored as a weight (pairings with simple coroots).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct XiCharacter {
    pub pairing: Vec<i64>,
}

impl XiCharacter {
    /// Value at `exp(2 pi i omega)` as an exponent in `[0, 1)`.
    pub fn evaluate(&self, omega: &[Rational64]) -> Rational64 {
        let s: Rational64 = self
            .pairing
            .iter()
            .zip(omega)
            .map(|(&p, w)| w * p)
            .fold(Rational64::from_integer(0), |a, b| a + b);
        s - s.floor()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualGroupProfile {
    pub dual_cartan_type: String,
    pub cocenter: String,
    pub cocenter_invariants: Vec<i64>,
    pub center_order: u64,
    pub center_n_torsion_order: u64,
    pub xi_injective: bool,
    pub xi_surjective_onto_cn: bool,
}

/// A standard Levi of the dual group, given by a subset of Dynkin nodes.
#[derive(Clone, Debug)]
pub struct LeviDatum {
    pub datum: MetaplecticDatum,
    /// `J_M`, sorted.
    pub nodes: Vec<usize>,
    /// Nodes outside `J_M`; their coefficients are the coordinates on
    /// `Lambda_{G,P}`.
    pub complement: Vec<usize>,
    /// Hermite basis of the image of `Lambda_sharp` in `Lambda_{G,P}`.
    pub sharp_image: Mat,
    /// Basis of `Lambda_{M,0}` (rows, in `Lambda` coordinates).
    pub m0_basis: Mat,
    /// `<alpha_i, 2 rho_check_M>` for every node.
    pub rho_check_m2: Vec<i64>,
    pub dual_cartan_m: Mat,
}

impl LeviDatum {
    pub fn new(datum: &MetaplecticDatum, nodes: &[usize]) -> Result<Self> {
        let r = datum.rank();
        let mut nodes = nodes.to_vec();
        nodes.sort_unstable();
        nodes.dedup();
        if let Some(&bad) = nodes.iter().find(|&&i| i >= r) {
            return Err(Error::input(format!(
                "Levi node {} out of range 1..={r}",
                bad + 1
            )));
        }
        let complement: Vec<usize> = (0..r).filter(|i| !nodes.contains(i)).collect();
        let proj: Vec<Vec<i64>> = datum
            .lambda_sharp
            .iter()
            .map(|b| complement.iter().map(|&j| b[j]).collect())
            .collect();
        let sharp_image = if complement.is_empty() {
            Vec::new()
        } else {
            hnf_rows(&proj)
        };
        let m0_basis = if nodes.is_empty() {
            lattice::identity(r)
        } else {
            let rows: Mat = nodes
                .iter()
                .map(|&i| (0..r).map(|j| datum.base.cartan[j][i]).collect())
                .collect();
            lattice::kernel(&rows, r)
        };
        let mut rho_check_m2 = vec![0i64; r];
        for (k, root) in datum.base.positive_roots_simple.iter().enumerate() {
            let inside = root
                .iter()
                .enumerate()
                .all(|(j, &c)| c == 0 || nodes.contains(&j));
            if inside {
                for (a, b) in rho_check_m2.iter_mut().zip(&datum.base.positive_roots[k]) {
                    *a += b;
                }
            }
        }
        let dual_cartan_m = nodes
            .iter()
            .map(|&i| nodes.iter().map(|&j| datum.dual_cartan[i][j]).collect())
            .collect();
        let levi = LeviDatum {
            datum: datum.clone(),
            nodes,
            complement,
            sharp_image,
            m0_basis,
            rho_check_m2,
            dual_cartan_m,
        };
        levi.check()?;
        Ok(levi)
    }

    fn check(&self) -> Result<()> {
        let base = &self.datum.base;
        for &i in &self.nodes {
            let e: Vec<i64> = (0..self.datum.rank()).map(|j| i64::from(i == j)).collect();
            for l in &self.m0_basis {
                if base.kappa_form(l, &e) != 0 {
                    return Err(Error::invariant(format!(
                        "kappa_M does not descend: kappa(lambda, alpha_{}) != 0 on Lambda_M0",
                        i + 1
                    )));
                }
            }
        }
        if !self.complement.is_empty() && lattice::det(&self.sharp_image) == 0 {
            return Err(Error::invariant("Lambda_sharp_{G,P} has infinite index"));
        }
        Ok(())
    }

    pub fn is_torus(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn quotient_rank(&self) -> usize {
        self.complement.len()
    }

    /// Class of `mu` in `Lambda_{G,P}`.
    pub fn project(&self, mu: &[i64]) -> Vec<i64> {
        self.complement.iter().map(|&j| mu[j]).collect()
    }

    /// A lift of `theta` from `Lambda_{G,P}` to `Lambda`.
    pub fn lift(&self, theta: &[i64]) -> Vec<i64> {
        let mut out = vec![0i64; self.datum.rank()];
        for (&j, &t) in self.complement.iter().zip(theta) {
            out[j] = t;
        }
        out
    }

    pub fn check_theta(&self, theta: &[i64]) -> Result<()> {
        if theta.len() != self.quotient_rank() {
            return Err(Error::input(format!(
                "theta {theta:?} has length {}, Lambda_{{G,P}} has rank {}",
                theta.len(),
                self.quotient_rank()
            )));
        }
        Ok(())
    }

    pub fn in_sharp_image(&self, theta: &[i64]) -> bool {
        self.complement.is_empty() || hnf_coords(&self.sharp_image, theta).is_some()
    }

    pub fn in_positive_cone(&self, theta: &[i64]) -> bool {
        theta.iter().all(|&x| x >= 0)
    }

    /// `kappa_M(theta)` as values on the basis of `Lambda_{M,0}`.
    pub fn kappa_m(&self, theta: &[i64]) -> Vec<i64> {
        let lifted = self.lift(theta);
        self.m0_basis
            .iter()
            .map(|l| self.datum.base.kappa_form(l, &lifted))
            .collect()
    }

    /// `kappa_M(theta)` lies in `N * dual(Lambda_{M,0})`.
    pub fn component_nonvanishing(&self, theta: &[i64]) -> bool {
        self.kappa_m(theta).iter().all(|x| x % self.datum.big_n == 0)
    }

    /// `<theta, 2(rho_check - rho_check_M)>`.
    pub fn degree_bound(&self, theta: &[i64]) -> i64 {
        let lifted = self.lift(theta);
        lifted
            .iter()
            .enumerate()
            .map(|(i, &t)| t * (2 * self.datum.base.rho_check[i] - self.rho_check_m2[i]))
            .sum()
    }

    pub fn levi_type(&self) -> String {
        let comps = classify_cartan(&self.dual_cartan_m).expect("sub-diagram of finite type");
        let relabeled: Vec<(String, Vec<usize>)> = comps
            .into_iter()
            .map(|(name, ns)| (name, ns.into_iter().map(|k| self.nodes[k]).collect()))
            .collect();
        type_name(&relabeled)
    }

    /// Longest element of the Weyl group of `M`.
    pub fn w0_m(&self) -> WeylElement {
        self.datum.base.longest_element_on(&self.nodes)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootdata::CartanLabel;

    fn meta(s: &str, n: i64) -> MetaplecticDatum {
        let label: CartanLabel = s.parse().unwrap();
        MetaplecticDatum::new(RootDatum::new(label).unwrap(), n).unwrap()
    }

    #[test]
    fn rank_one_lattices() {
        for (n, e) in [(1, 1), (2, 1), (3, 3), (4, 2), (5, 5), (6, 3)] {
            let m = meta("A1", n);
            assert_eq!(m.lambda_sharp, vec![vec![e]], "n = {n}");
            assert_eq!(m.dual_simple_roots, vec![vec![n]], "n = {n}");
        }
    }

    #[test]
    fn symplectic_even_n() {
        for n in [2, 4, 6] {
            let m = meta("C3", n);
            let half = n / 2;
            let expected = vec![vec![half, 0, 0], vec![0, half, 0], vec![0, 0, half]];
            assert_eq!(m.lambda_sharp, expected);
            assert_eq!(m.delta, vec![half, half, n]);
            assert_eq!(m.profile().unwrap().cocenter, "Z/2");
        }
    }

    #[test]
    fn spin7_n2_not_surjective() {
        let p = meta("B3", 2).profile().unwrap();
        assert!(p.xi_injective);
        assert!(!p.xi_surjective_onto_cn);
    }

    #[test]
    fn xi_of_simple_dual_roots_is_trivial() {
        let m = meta("B2", 4);
        for b in &m.dual_simple_roots {
            assert!(m.character_is_trivial(&m.xi_character(b).unwrap()));
        }
    }

    #[test]
    fn xi_sl2_n2() {
        let m = meta("A1", 2);
        let chi = m.xi_character(&[1]).unwrap();
        let z = &m.center_representatives()[0];
        assert_eq!(chi.evaluate(z), Rational64::new(1, 2));
        assert!(!m.character_is_trivial(&chi));
        // n = 4: e = 2, so 2e alpha = 4 alpha pairs to alpha-check.
        let m4 = meta("A1", 4);
        assert!(m4.character_is_trivial(&m4.central_twist(&[4]).unwrap()));
        assert!(!m4.character_is_trivial(&m4.central_twist(&[2]).unwrap()));
    }

    #[test]
    fn xi_rejects_outside_sharp() {
        let err = meta("A1", 3).xi_character(&[1]).unwrap_err();
        assert!(err.to_string().contains("iota(mu, alpha_1) = 2"));
    }

    #[test]
    fn twisted_shift_a1() {
        let m = meta("A1", 3);
        assert_eq!(m.twisted_weyl_shift(&WeylElement::simple(0)).unwrap(), vec![-3]);
        assert_eq!(m.twisted_weyl_shift(&WeylElement::identity()).unwrap(), vec![0]);
    }

    #[test]
    fn levi_quotient_a2() {
        let m = meta("A2", 1);
        let l = LeviDatum::new(&m, &[0]).unwrap();
        assert_eq!(l.project(&[5, 7]), vec![7]);
        assert_eq!(l.sharp_image, vec![vec![1]]);
        assert_eq!(l.levi_type(), "A1");
        let t = LeviDatum::new(&m, &[]).unwrap();
        assert_eq!(t.m0_basis, lattice::identity(2));
        assert_eq!(t.kappa_m(&[1, 0]), vec![-12, 6]);
    }

    #[test]
    fn nonvanishing_a2_n2() {
        let m = meta("A2", 2);
        let t = LeviDatum::new(&m, &[]).unwrap();
        for a in -3..=3 {
            for b in -3..=3 {
                assert_eq!(t.component_nonvanishing(&[a, b]), a % 2 == 0 && b % 2 == 0);
            }
        }
    }

    #[test]
    fn full_levi_has_trivial_quotient() {
        let m = meta("B2", 2);
        let l = LeviDatum::new(&m, &[0, 1]).unwrap();
        assert_eq!(l.quotient_rank(), 0);
        assert!(l.m0_basis.is_empty());
        assert!(l.component_nonvanishing(&[]));
    }
}
