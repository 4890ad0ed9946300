//! Library results against brute-force computations done from scratch.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;

use metaeis::ic_stalks;
use metaeis::metaplectic::{LeviDatum, MetaplecticDatum};
use metaeis::rep::NilradicalDatum;
use metaeis::rootdata::RootDatum;
use metaeis::series::{
    constant_term, l_series, sym_power_complex, ConstantTerm, CurveDatum, FormalSeries,
    LocalFactor, LocalSystemSpec,
};

fn meta(label: &str, n: i64) -> MetaplecticDatum {
    MetaplecticDatum::new(RootDatum::new(label.parse().unwrap()).unwrap(), n).unwrap()
}

/// Multisets of `roots` summing to `theta`, counted by size.
fn partitions(roots: &[Vec<i64>], theta: &[i64]) -> BTreeMap<u64, u64> {
    fn go(roots: &[Vec<i64>], rest: &[i64], size: u64, out: &mut BTreeMap<u64, u64>) {
        if rest.iter().all(|&x| x == 0) {
            *out.entry(size).or_insert(0) += 1;
        }
        for (i, r) in roots.iter().enumerate() {
            let next: Vec<i64> = rest.iter().zip(r).map(|(a, b)| a - b).collect();
            if next.iter().all(|&x| x >= 0) {
                // nondecreasing root index keeps each multiset once
                go(&roots[i..], &next, size + 1, out);
            }
        }
    }
    let mut out = BTreeMap::new();
    go(roots, theta, 0, &mut out);
    out
}

#[test]
fn kostant_counts_match_partitions() {
    for label in ["A2", "B2", "G2", "A3"] {
        for n in 1..=3 {
            let m = meta(label, n);
            let nil = NilradicalDatum::new(&LeviDatum::new(&m, &[]).unwrap()).unwrap();
            let r = m.rank();
            let bound = if r == 3 { 4 } else { 7 };
            let mut theta = vec![0i64; r];
            loop {
                let got = ic_stalks::kostant_sizes(&nil, &theta);
                assert_eq!(got, partitions(&m.dual_positive_roots, &theta), "{label} n={n} {theta:?}");
                let mut i = 0;
                while i < r {
                    theta[i] += 1;
                    if theta[i] <= bound {
                        break;
                    }
                    theta[i] = 0;
                    i += 1;
                }
                if i == r {
                    break;
                }
            }
        }
    }
}

fn poly_mul(a: &BTreeMap<(u64, u64), i64>, b: &BTreeMap<(u64, u64), i64>, kmax: u64) -> BTreeMap<(u64, u64), i64> {
    let mut out = BTreeMap::new();
    for (&(k1, j1), &x) in a {
        for (&(k2, j2), &y) in b {
            if k1 + k2 <= kmax {
                *out.entry((k1 + k2, j1 + j2)).or_insert(0) += x * y;
            }
        }
    }
    out
}

/// Coefficients of `(1 + x s)^h1 / ((1 - s)^h0 (1 - x^2 s)^h2)` keyed by
/// `(power of s, power of x)`.
fn generating(h0: u64, h1: u64, h2: u64, kmax: u64) -> BTreeMap<(u64, u64), i64> {
    let mut acc = BTreeMap::from([((0, 0), 1)]);
    for _ in 0..h1 {
        acc = poly_mul(&acc, &BTreeMap::from([((0, 0), 1), ((1, 1), 1)]), kmax);
    }
    let geometric = |deg: u64| -> BTreeMap<(u64, u64), i64> { (0..=kmax).map(|k| ((k, deg * k), 1)).collect() };
    for _ in 0..h0 {
        acc = poly_mul(&acc, &geometric(0), kmax);
    }
    for _ in 0..h2 {
        acc = poly_mul(&acc, &geometric(2), kmax);
    }
    acc
}

#[test]
fn symmetric_powers_match_generating_function() {
    for (h0, h1, h2) in [(1, 0, 1), (1, 2, 1), (1, 4, 1), (0, 2, 0), (0, 4, 0), (2, 3, 1)] {
        let kmax = 6;
        let series = generating(h0, h1, h2, kmax);
        for k in 0..=kmax {
            let expected: BTreeMap<u64, u64> = series
                .iter()
                .filter(|((kk, _), &c)| *kk == k && c != 0)
                .map(|((_, j), &c)| (*j, c as u64))
                .collect();
            let got: BTreeMap<u64, u64> =
                sym_power_complex(h0, h1, h2, k).into_iter().filter(|(_, c)| *c != 0).collect();
            assert_eq!(got, expected, "({h0},{h1},{h2}) k={k}");
        }
    }
}

#[test]
fn trivial_l_series_telescopes_on_the_line() {
    let one = BigRational::from_integer(1.into());
    for q in [2i64, 3, 4, 5, 7] {
        let p1 = CurveDatum::projective_line(q).unwrap();
        for nu in [1i64, 2, 3] {
            let height = 12;
            let l = l_series(&p1, &LocalSystemSpec::all_trivial(), &[nu], Some(&[nu]), height).unwrap();
            let inv_q = BigRational::new(1.into(), q.into());
            let mut f = FormalSeries::new(vec![0], height);
            f.add_term(&[0], &one).unwrap();
            f.add_term(&[nu], &-(&one + &inv_q)).unwrap();
            f.add_term(&[2 * nu], &inv_q).unwrap();
            let t = l.mul_rational(&f);
            let nonzero: Vec<_> = t.terms().filter(|(_, c)| **c != BigRational::from_integer(0.into())).collect();
            assert_eq!(nonzero.len(), 1, "q={q} nu={nu}");
            assert_eq!(nonzero[0].0, &vec![0]);
            assert_eq!(nonzero[0].1, &one);
        }
    }
}

/// `F_{p^2} = F_p[s] / (s^2 - r)` for a non-residue `r`.
#[derive(Clone, Copy, PartialEq, Eq)]
struct Fp2 {
    a: i64,
    b: i64,
}

struct Field {
    p: i64,
    r: i64,
}

impl Field {
    fn new(p: i64) -> Self {
        let r = (2..p).find(|&r| (1..p).all(|x| x * x % p != r)).unwrap();
        Field { p, r }
    }
    fn elt(&self, a: i64, b: i64) -> Fp2 {
        Fp2 { a: a.rem_euclid(self.p), b: b.rem_euclid(self.p) }
    }
    fn add(&self, x: Fp2, y: Fp2) -> Fp2 {
        self.elt(x.a + y.a, x.b + y.b)
    }
    fn mul(&self, x: Fp2, y: Fp2) -> Fp2 {
        self.elt(x.a * y.a + self.r * x.b * y.b, x.a * y.b + x.b * y.a)
    }
    fn pow(&self, x: Fp2, mut e: i64) -> Fp2 {
        let (mut acc, mut base) = (self.elt(1, 0), x);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }
    /// Projective points of `y^2 = x^3 + c1 x + c0` over `F_p` (`deg = 1`)
    /// or `F_{p^2}` (`deg = 2`).
    fn count(&self, c1: i64, c0: i64, deg: u32) -> i64 {
        let p = self.p;
        let size = p.pow(deg);
        let elements: Vec<Fp2> = if deg == 1 {
            (0..p).map(|a| self.elt(a, 0)).collect()
        } else {
            (0..p).flat_map(|a| (0..p).map(move |b| (a, b))).map(|(a, b)| self.elt(a, b)).collect()
        };
        let mut total = 1;
        for x in elements {
            let f = self.add(self.add(self.pow(x, 3), self.mul(self.elt(c1, 0), x)), self.elt(c0, 0));
            total += if f == self.elt(0, 0) {
                1
            } else if self.pow(f, (size - 1) / 2) == self.elt(1, 0) {
                2
            } else {
                0
            };
        }
        total
    }
}

#[test]
fn elliptic_zeta_from_counts() {
    for (p, c1, c0) in [(5, 1, 1), (7, 3, 2), (11, 1, 3), (13, 2, 5)] {
        let field = Field::new(p);
        let n1 = field.count(c1, c0, 1);
        let n2 = field.count(c1, c0, 2);
        let curve = CurveDatum::from_counts(p, 1, &[n1]).unwrap();
        assert_eq!(curve.point_count(1), BigInt::from(n1));
        assert_eq!(curve.point_count(2), BigInt::from(n2), "p={p}");
        assert_eq!(curve.zeta_numerator, vec![1, n1 - p - 1, p]);
    }
}

#[test]
fn genus_zero_constant_term_dims() {
    let trivial = LocalFactor::trivial();
    for n in 1..=4i64 {
        let e = if n % 2 == 0 { n / 2 } else { n };
        for d in (0..=6).map(|k| k * e) {
            for d1 in (-6..=6).map(|k| k * e) {
                let parts = match constant_term(d, d1, n, 0, Some(&trivial)).unwrap() {
                    ConstantTerm::Zero { .. } => vec![],
                    ConstantTerm::Single { part } => vec![part],
                    ConstantTerm::Triangle { sigma, ih } => vec![sigma, ih],
                };
                for part in parts {
                    let b = part.theta / n;
                    let expected: BTreeMap<u64, u64> = (0..=b as u64).map(|i| (2 * i, 1)).collect();
                    let got: BTreeMap<u64, u64> =
                        part.ih_dims.unwrap().into_iter().filter(|(_, c)| *c != 0).collect();
                    assert_eq!(got, expected, "n={n} d={d} d1={d1}");
                }
            }
        }
    }
}
