//! Invariant suites run by `metaeis selftest`.
//!
//! Every emitted multiplicity, dimension and Laurent coefficient passes
//! through [`Positivity`]; a single negative value fails the run.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::Serialize;

use crate::ic_stalks::{self, Decomposition};
use crate::lattice::{self, hnf_coords};
use crate::laurent::Laurent;
use crate::metaplectic::{LeviDatum, MetaplecticDatum};
use crate::rep::{DualSystem, NilradicalDatum, Weight};
use crate::rootdata::{CartanLabel, RootDatum, WeylElement};
use crate::series::{
    eis_product_form, eis_sum_form, l_series, sym_power_complex, CurveDatum, FormalSeries,
    LocalSystemSpec, Placeholders,
};
use crate::sl2::{self, SL2Context, ThetaModuleElement};

#[derive(Debug, Default, Serialize)]
pub struct Positivity {
    pub values_checked: u64,
    pub negatives: Vec<String>,
}

impl Positivity {
    pub fn value(&mut self, what: &str, x: i64) {
        self.values_checked += 1;
        if x < 0 {
            self.negatives.push(format!("{what}: {x}"));
        }
    }

    pub fn laurent(&mut self, what: &str, p: &Laurent) {
        for (e, c) in p.terms() {
            self.value(&format!("{what} at v^{e}"), c);
        }
    }

    pub fn element(&mut self, what: &str, x: &ThetaModuleElement) {
        for (k, p) in x.by_cell() {
            self.laurent(&format!("{what} cell {k}"), &p);
        }
    }

    pub fn counts<'a>(&mut self, what: &str, xs: impl IntoIterator<Item = &'a u64>) {
        for &x in xs {
            self.value(what, i64::try_from(x).unwrap_or(i64::MAX));
        }
    }
}

#[derive(Debug, Serialize)]
pub struct SuiteResult {
    pub name: String,
    pub checks: u64,
    pub failures: Vec<String>,
    pub millis: u128,
}

#[derive(Debug, Serialize)]
pub struct Summary {
    pub suites: Vec<SuiteResult>,
    pub positivity: Positivity,
}

impl Summary {
    pub fn passed(&self) -> bool {
        self.suites.iter().all(|s| s.failures.is_empty()) && self.positivity.negatives.is_empty()
    }
}

struct Suite<'a> {
    checks: u64,
    failures: Vec<String>,
    pos: &'a mut Positivity,
}

impl Suite<'_> {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn ok<T>(&mut self, r: crate::Result<T>, what: &str) -> Option<T> {
        self.checks += 1;
        match r {
            Ok(x) => Some(x),
            Err(e) => {
                self.failures.push(format!("{what}: {e}"));
                None
            }
        }
    }
}

fn label(s: &str) -> CartanLabel {
    s.parse().expect("fixed labels are admissible")
}

fn datum(s: &str, n: i64) -> MetaplecticDatum {
    MetaplecticDatum::new(RootDatum::new(label(s)).expect("admissible"), n).expect("n >= 1")
}

fn subsets(r: usize) -> Vec<Vec<usize>> {
    (0u32..1 << r)
        .map(|mask| (0..r).filter(|i| mask >> i & 1 == 1).collect())
        .collect()
}

/// All vectors with entries in `lo..=hi`.
fn boxed(r: usize, lo: i64, hi: i64) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for _ in 0..r {
        out = out
            .into_iter()
            .flat_map(|v| {
                (lo..=hi).map(move |x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    out
}

const ROOT_TYPES: [&str; 15] = [
    "A1", "A2", "A3", "A4", "B2", "B3", "C2", "C3", "D4", "G2", "F4", "E6", "E7", "E8", "D5",
];
const GRID_TYPES: [&str; 10] = ["A1", "A2", "A3", "A4", "B2", "B3", "C2", "C3", "D4", "G2"];

fn rootdata_suite(s: &mut Suite) {
    for t in ROOT_TYPES {
        let Some(rd) = s.ok(RootDatum::new(label(t)), t) else { continue };
        let r = rd.rank();
        s.check(rd.h_dual == rd.label.dual_coxeter_table(), || format!("{t}: h_dual"));
        s.check(rd.positive_coroots.len() == rd.label.positive_root_count(), || {
            format!("{t}: positive root count")
        });
        let kappa = rd.kappa_matrix();
        s.check(
            (0..r).all(|i| (0..r).all(|j| kappa[i][j] == -2 * rd.h_dual * rd.iota[i][j])),
            || format!("{t}: kappa = -2 h iota"),
        );
        s.check((1..=r).all(|k| {
            let minor: Vec<Vec<i64>> = rd.iota[..k].iter().map(|row| row[..k].to_vec()).collect();
            lattice::det(&minor) > 0
        }), || format!("{t}: iota positive definite"));
        s.check((0..r).all(|i| {
            let e: Vec<i64> = (0..r).map(|j| i64::from(i == j)).collect();
            rd.pair_root(&e, i) == 2
        }), || {
            format!("{t}: <alpha_i, alpha_check_i> = 2")
        });
        s.check((0..r).all(|i| rd.rho_check[i] == 1), || format!("{t}: rho_check"));
        let two_rho = rd.two_rho_coroot();
        let neg: Vec<i64> = two_rho.iter().map(|x| -x).collect();
        s.check(rd.weyl_act(&rd.w0, &two_rho) == neg, || format!("{t}: w0"));
        for mu in boxed(r.min(3), -1, 1).into_iter().take(27) {
            let mut mu = mu;
            mu.resize(r, 2);
            for i in 0..r {
                let back = rd.reflect(i, &rd.reflect(i, &mu));
                s.check(back == mu, || format!("{t}: s_i^2"));
                let ri = rd.reflect(i, &mu);
                s.check(rd.iota_form(&ri, &ri) == rd.iota_form(&mu, &mu), || {
                    format!("{t}: iota W-invariant")
                });
            }
        }
    }
}

fn metaplectic_suite(s: &mut Suite) {
    for t in GRID_TYPES {
        for n in 1..=6 {
            let d = datum(t, n);
            let r = d.rank();
            let Some(p) = s.ok(d.profile(), &format!("{t} n={n}: profile")) else { continue };
            s.check(p.xi_injective, || format!("{t} n={n}: xi injective"));
            for mu in boxed(r, -2, 2) {
                let law = d.in_sharp(&mu);
                s.check(law == hnf_coords(&d.lambda_sharp, &mu).is_some(), || {
                    format!("{t} n={n}: membership law at {mu:?}")
                });
                let levi = LeviDatum::new(&d, &[]).expect("torus");
                s.check(levi.component_nonvanishing(&mu) == law, || {
                    format!("{t} n={n}: torus nonvanishing at {mu:?}")
                });
            }
            for b in &d.lambda_sharp {
                for i in 0..r {
                    s.check(d.in_sharp(&d.base.reflect(i, b)), || format!("{t} n={n}: W-stable"));
                }
            }
            for i in 0..r {
                for j in 0..r {
                    let w1 = WeylElement::simple(i);
                    let w2 = WeylElement::simple(j);
                    let a = d.twisted_weyl_shift(&w1).expect("in sharp");
                    let b = d.twisted_weyl_shift(&w2).expect("in sharp");
                    let ab = d.twisted_weyl_shift(&w2.compose(&w1));
                    let Some(ab) = s.ok(ab, "twisted shift") else { continue };
                    let expect: Vec<i64> =
                        d.base.weyl_act(&w2, &a).iter().zip(&b).map(|(x, y)| x + y).collect();
                    s.check(ab == expect, || format!("{t} n={n}: shift cocycle"));
                }
            }
            for root in &d.dual_simple_roots {
                let chi = d.xi_character(root).expect("dual roots are in Lambda_sharp");
                s.check(d.character_is_trivial(&chi), || format!("{t} n={n}: xi kills roots"));
            }
        }
    }
}

fn rep_suite(s: &mut Suite) {
    for t in ["A1", "A2", "A3", "B2", "B3", "C2", "C3", "G2"] {
        for n in 1..=3 {
            let d = datum(t, n);
            let full = DualSystem::full(&d);
            let all: Vec<usize> = (0..d.rank()).collect();
            let torus = DualSystem::on_nodes(&d, &[]);
            for nu in d.dominant_weights(if d.rank() == 3 { 3 } else { 4 }) {
                let Some(ch) = s.ok(full.irreducible_character(&nu), "character") else { continue };
                s.pos.counts("weight multiplicity", ch.weights.values());
                s.check(ch.dim() == full.weyl_dimension(&nu), || format!("{t} n={n} {nu:?}: Weyl dim"));
                s.check(ch.is_weyl_invariant(&d, &all), || format!("{t} n={n} {nu:?}: W-invariant"));
                for nodes in subsets(d.rank()) {
                    let levi = DualSystem::on_nodes(&d, &nodes);
                    let Some(dec) = s.ok(full.branch(&nu, &levi), "branch") else { continue };
                    s.pos.counts("branching multiplicity", dec.values());
                    let total: u64 = dec.iter().map(|(hw, m)| m * levi.weyl_dimension(hw)).sum();
                    s.check(total == ch.dim(), || format!("{t} n={n} {nu:?} {nodes:?}: dims"));
                    let mut weights: BTreeMap<Weight, u64> = BTreeMap::new();
                    for (hw, m) in &dec {
                        let Some(sub) = s.ok(levi.branch(hw, &torus), "torus branch") else { continue };
                        for (w, k) in sub {
                            *weights.entry(w).or_insert(0) += k * m;
                        }
                    }
                    s.check(weights == ch.weights, || format!("{t} n={n} {nu:?} {nodes:?}: transitivity"));
                }
            }
        }
    }
}

fn nilradical_suite(s: &mut Suite) {
    for t in ["A2", "B2", "G2", "A3"] {
        for n in 1..=3 {
            let d = datum(t, n);
            for nodes in subsets(d.rank()) {
                if nodes.len() == d.rank() {
                    continue;
                }
                let levi = LeviDatum::new(&d, &nodes).expect("valid nodes");
                let Some(nil) = s.ok(NilradicalDatum::new(&levi), &format!("{t} n={n} {nodes:?}")) else {
                    continue;
                };
                let outside = d
                    .dual_positive_roots
                    .iter()
                    .filter(|r| levi.project(r).iter().any(|&c| c != 0))
                    .count();
                s.check(nil.root_count() == outside, || format!("{t} n={n} {nodes:?}: root count"));
                for c in &nil.classes {
                    let dec: BTreeMap<Weight, u64> = [(c.highest_weight.clone(), 1)].into();
                    s.check(nil.check_positive(&dec), || format!("{t} n={n} {nodes:?}: u is positive"));
                }
                let height = if t == "A3" { 3 } else { 4 };
                for theta in boxed(levi.quotient_rank(), 0, height) {
                    if theta.iter().sum::<i64>() > height {
                        continue;
                    }
                    for m in 0..=height as u32 {
                        if let Some(g) = s.ok(nil.graded_sym(&theta, m), "graded sym") {
                            s.pos.value("sym dim", g.sym_dim as i64);
                        }
                    }
                }
            }
        }
    }
}

fn stalk_suite(s: &mut Suite) {
    for n in 1..=4 {
        let d = datum("A1", n);
        let levi = LeviDatum::new(&d, &[]).expect("torus");
        let nil = NilradicalDatum::new(&levi).expect("Borel");
        for m in 0..=12i64 {
            let parts = if m == 0 { vec![] } else { vec![(vec![m], 1)] };
            let dec = Decomposition::new(parts, 1).expect("valid");
            let Some(rep) = s.ok(ic_stalks::stalk_poincare(&nil, &dec), "stalk") else { continue };
            s.pos.laurent("stalk polynomial", &rep.shift_polynomial);
            s.check(rep.vanishes == (m % n != 0), || format!("A1 n={n} m={m}: vanishing"));
            s.check(rep.vanishes == rep.shift_polynomial.is_zero(), || "vanishes <=> 0".into());
            let Some(top) = s.ok(ic_stalks::zastava_top(&nil, &[m]), "zastava") else { continue };
            s.check(top.degree_bound == 2 * m, || format!("A1 m={m}: degree bound"));
            s.check(top.vanishes == (m % n != 0), || format!("A1 n={n} m={m}: zastava vanishing"));
            for split in 1..m {
                let a = Decomposition::new(vec![(vec![split], 1)], 1).expect("valid");
                let b = Decomposition::new(vec![(vec![m - split], 1)], 1).expect("valid");
                let ra = ic_stalks::stalk_poincare(&nil, &a).expect("valid");
                let rb = ic_stalks::stalk_poincare(&nil, &b).expect("valid");
                let rab = ic_stalks::stalk_poincare(&nil, &a.merge(&b)).expect("valid");
                s.check(&ra.shift_polynomial * &rb.shift_polynomial == rab.shift_polynomial, || {
                    format!("A1 n={n}: factorization {split}+{}", m - split)
                });
            }
        }
    }
    for t in ["A2", "B2", "G2"] {
        for n in 1..=2 {
            let d = datum(t, n);
            let nil = NilradicalDatum::new(&LeviDatum::new(&d, &[]).expect("torus")).expect("Borel");
            for theta in boxed(2, 0, 4) {
                let parts = if theta == [0, 0] { vec![] } else { vec![(theta.clone(), 1)] };
                let dec = Decomposition::new(parts, 2).expect("valid");
                let Some(rep) = s.ok(ic_stalks::stalk_poincare(&nil, &dec), "stalk") else { continue };
                s.pos.laurent("stalk polynomial", &rep.shift_polynomial);
                let sizes = ic_stalks::kostant_sizes(&nil, &theta);
                s.pos.counts("Kostant count", sizes.values());
            }
        }
    }
}

fn series_suite(s: &mut Suite) {
    let mut curves = Vec::new();
    for q in [2, 3, 5] {
        curves.push(CurveDatum::projective_line(q).expect("prime"));
        curves.push(CurveDatum::from_counts(q, 1, &[q + 1]).expect("supersingular count"));
    }
    for curve in &curves {
        for n in 1..=3 {
            let d = datum("A1", n);
            let nil = NilradicalDatum::new(&LeviDatum::new(&d, &[]).expect("torus")).expect("Borel");
            let spec = LocalSystemSpec::all_trivial();
            let height = 8;
            let cl = FormalSeries::<Placeholders>::placeholders(vec![0], height, |mu| d.in_sharp(mu));
            let Some(prod) = s.ok(eis_product_form(&cl, &nil, curve, &spec, height), "product form") else {
                continue;
            };
            for mu in prod.window() {
                let sum = eis_sum_form(&mu, &[0], |x| cl.coefficient(x), &nil, curve, &spec);
                if let Some(sum) = s.ok(sum, "sum form") {
                    s.check(sum == prod.coefficient(&mu), || {
                        format!("q={} g={} n={n} mu={mu:?}: sum vs product form", curve.q, curve.g)
                    });
                }
            }
            if curve.g == 0 {
                let nu = vec![n];
                let l = l_series(curve, &spec, &nu, Some(&nu), height).expect("trivial");
                let q = num_rational::BigRational::new(1.into(), curve.q.into());
                let mut f = FormalSeries::new(vec![0], height);
                f.add_term(&[0], &num_rational::BigRational::from_integer(1.into())).expect("base");
                f.add_term(&nu, &-(num_rational::BigRational::from_integer(1.into()) + &q)).expect("window");
                f.add_term(&[2 * n], &q).expect("window");
                let t = l.mul_rational(&f);
                let one = FormalSeries::one(1, height);
                s.check(t == one, || format!("q={} n={n}: telescoping", curve.q));
            }
        }
    }
    for (h0, h1, h2) in [(1, 0, 1), (1, 2, 1), (0, 2, 0), (1, 4, 1), (2, 3, 1)] {
        // (1 + x s)^h1 / ((1 - s)^h0 (1 - x^2 s)^h2), coefficientwise.
        let kmax = 6u64;
        let mut gen: BTreeMap<(u64, u64), i64> = [((0, 0), 1)].into();
        let mul = |g: &BTreeMap<(u64, u64), i64>, f: &dyn Fn(u64) -> Vec<((u64, u64), i64)>| {
            let mut out: BTreeMap<(u64, u64), i64> = BTreeMap::new();
            for (&(k, j), &c) in g {
                for ((dk, dj), a) in f(kmax - k) {
                    *out.entry((k + dk, j + dj)).or_insert(0) += c * a;
                }
            }
            out
        };
        for _ in 0..h1 {
            gen = mul(&gen, &|_| vec![((0, 0), 1), ((1, 1), 1)]);
        }
        for _ in 0..h0 {
            gen = mul(&gen, &|room| (0..=room).map(|k| ((k, 0), 1)).collect());
        }
        for _ in 0..h2 {
            gen = mul(&gen, &|room| (0..=room).map(|k| ((k, 2 * k), 1)).collect());
        }
        for k in 0..=kmax {
            let dims = sym_power_complex(h0, h1, h2, k);
            s.pos.counts("sym power dim", dims.values());
            let expect: BTreeMap<u64, u64> = gen
                .iter()
                .filter(|(&(kk, _), &c)| kk == k && c != 0)
                .map(|(&(_, j), &c)| (j, c as u64))
                .collect();
            s.check(dims == expect, || format!("sym power ({h0},{h1},{h2}) k={k}"));
        }
    }
}

fn sl2_suite(s: &mut Suite) {
    for n in 2..=5 {
        let Some(ctx) = s.ok(SL2Context::new(n), "context") else { continue };
        for m in 0..=3 {
            if let Some(r) = s.ok(sl2::theta_eigen_check(&ctx, m), "eigen") {
                s.pos.laurent("eigen polynomial", &r.eigen_poly);
                s.pos.element("Hecke of Aut", &r.hecke_aut);
                s.check(r.holds, || format!("n={n} m={m}: eigen property"));
            }
        }
        let kmax = 14;
        let step = if ctx.odd { n } else { ctx.e };
        let mut d = step;
        while d + step <= kmax as i64 * ctx.e / 2 {
            let eis = |x: i64| sl2::eis_expand(&ctx, x, false, kmax).expect("valid degree");
            let lhs = sl2::fundamental_hecke(&ctx, &eis(d)).truncate(kmax - 2);
            let rhs = if ctx.odd {
                eis(d + n).sum(&eis(d)).sum(&eis(d - n))
            } else {
                eis(d + ctx.e).sum(&eis(d - ctx.e))
            }
            .truncate(kmax - 2);
            s.pos.element("Eis expansion", &lhs);
            s.check(lhs == rhs, || format!("n={n} d={d}: Eis/Hecke consistency"));
            d += ctx.e;
        }
        for k in 0..=6 {
            let x = ThetaModuleElement::cell(k);
            for m1 in 0..=3 {
                for m2 in 0..=3 {
                    let a = sl2::hecke_of_irreducible(&ctx, m2, &x)
                        .and_then(|y| sl2::hecke_of_irreducible(&ctx, m1, &y));
                    let b = sl2::hecke_of_irreducible(&ctx, m1, &x)
                        .and_then(|y| sl2::hecke_of_irreducible(&ctx, m2, &y));
                    if let (Some(a), Some(b)) = (s.ok(a, "Hecke"), s.ok(b, "Hecke")) {
                        s.pos.element("Hecke composite", &a);
                        s.check(a == b, || format!("n={n} k={k}: H^{m1} H^{m2} commute"));
                    }
                }
            }
            if !ctx.odd {
                let par = |k: u32| sl2::parity(&ctx, i64::from(k) * ctx.e).expect("in eZ");
                let flips = sl2::fundamental_hecke(&ctx, &x).by_cell().keys().all(|&j| par(j) != par(k));
                s.check(flips, || format!("n={n} k={k}: H^1 flips parity"));
                let h2 = sl2::hecke_of_irreducible(&ctx, 2, &x).expect("positive");
                s.check(h2.by_cell().keys().all(|&j| par(j) == par(k)), || {
                    format!("n={n} k={k}: H^2 keeps parity")
                });
            }
        }
        for r in 1..=4 * n {
            for d in (0..r).filter(|d| d % ctx.e == 0) {
                if let Some(e) = s.ok(sl2::stalk_table(&ctx, d, r), "stalk table") {
                    s.check(e.vanishes == e.shift.is_none(), || format!("n={n} d={d} r={r}"));
                }
            }
        }
    }
    for (a, b) in [(2, 4), (3, 5), (2, 6), (4, 4)] {
        let (ca, cb) = (SL2Context::new(a).expect("n"), SL2Context::new(b).expect("n"));
        for k in 0..=4 {
            let x = ThetaModuleElement::cell(k);
            let lhs = sl2::transport(&ca, &cb, &sl2::fundamental_hecke(&ca, &x)).expect("parity");
            let rhs = sl2::fundamental_hecke(&cb, &sl2::transport(&ca, &cb, &x).expect("parity"));
            s.check(lhs == rhs, || format!("transport {a}->{b} k={k}"));
        }
    }
}

/// Runs every suite.
pub fn run_all() -> Summary {
    let mut pos = Positivity::default();
    let mut suites = Vec::new();
    let list: [(&str, fn(&mut Suite)); 7] = [
        ("rootdata", rootdata_suite),
        ("metaplectic_dual", metaplectic_suite),
        ("rep_engine", rep_suite),
        ("nilradical", nilradical_suite),
        ("ic_stalks", stalk_suite),
        ("series", series_suite),
        ("sl2_module", sl2_suite),
    ];
    for (name, f) in list {
        let start = Instant::now();
        let mut s = Suite { checks: 0, failures: Vec::new(), pos: &mut pos };
        f(&mut s);
        suites.push(SuiteResult {
            name: name.to_string(),
            checks: s.checks,
            failures: s.failures,
            millis: start.elapsed().as_millis(),
        });
    }
    Summary { suites, positivity: pos }
}
