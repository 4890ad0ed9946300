//! JSON reports for every operation, shared by the CLI and the C ABI.
//!
//! Vectors are in the simple-coroot basis; Levi nodes are 1-based.

use std::collections::BTreeMap;

use num_rational::BigRational;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::ic_stalks::{self, Decomposition};
use crate::metaplectic::{LeviDatum, MetaplecticDatum};
use crate::rep::{DualSystem, NilradicalDatum, Weight};
use crate::rootdata::{CartanLabel, RootDatum, WeylElement};
use crate::series::{
    self, constant_term, eis_product_form, eis_sum_form, l_series, CurveDatum, FormalSeries,
    LocalFactor, LocalSystemSpec, Placeholders,
};
use crate::sl2::{self, SL2Context, ThetaModuleElement};

pub const SCHEMA_VERSION: u32 = 1;

pub fn convention() -> Value {
    json!({
        "shift": "[k] -> v^k",
        "tate_twist": "Qbar_l(n_nu) -> q^{-n_nu}",
        "coordinates": "simple-coroot basis of Lambda",
        "levi_nodes": "1-based Bourbaki numbering",
        "rationals": "a/b strings",
    })
}

/// Wraps a result with the schema header.
pub fn envelope(command: &str, label: Option<&str>, n: Option<i64>, result: Value) -> Value {
    let mut header = json!({
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "convention": convention(),
        "result": result,
    });
    if let Some(l) = label {
        header["label"] = json!(l);
    }
    if let Some(n) = n {
        header["n"] = json!(n);
    }
    header
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report types serialize")
}

/// `"1,2"`, `"[1,2]"` or `"3"`.
pub fn parse_vec(s: &str) -> Result<Vec<i64>> {
    let t = s.trim().trim_start_matches('[').trim_end_matches(']');
    if t.trim().is_empty() {
        return Ok(Vec::new());
    }
    t.split(',')
        .map(|x| {
            x.trim()
                .parse::<i64>()
                .map_err(|_| Error::input(format!("cannot parse {s:?} as an integer vector")))
        })
        .collect()
}

/// 1-based node list (`"1,3"`, empty for the torus) to 0-based indices.
pub fn parse_nodes(s: &str) -> Result<Vec<usize>> {
    let t = s.trim();
    if t.is_empty() || t == "none" || t == "T" {
        return Ok(Vec::new());
    }
    parse_vec(t)?
        .into_iter()
        .map(|i| {
            if i < 1 {
                Err(Error::input(format!("Levi nodes are 1-based, got {i}")))
            } else {
                Ok(i as usize - 1)
            }
        })
        .collect()
}

/// `"theta:mult;theta:mult"`, e.g. `"2:1"` or `"1,0:2;0,1:1"`.
pub fn parse_parts(s: &str) -> Result<Vec<(Vec<i64>, u32)>> {
    let t = s.trim();
    if t.is_empty() {
        return Ok(Vec::new());
    }
    t.split(';')
        .map(|p| {
            let (theta, m) = p.split_once(':').unwrap_or((p, "1"));
            let m: u32 = m
                .trim()
                .parse()
                .map_err(|_| Error::input(format!("bad multiplicity in part {p:?}")))?;
            Ok((parse_vec(theta)?, m))
        })
        .collect()
}

/// `"k:shift,k:shift"`; a bare `k` means shift 0; repeats add up.
pub fn parse_cells(s: &str) -> Result<ThetaModuleElement> {
    let mut out = ThetaModuleElement::zero();
    for p in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (k, r) = p.split_once(':').unwrap_or((p, "0"));
        let k: u32 = k
            .trim()
            .parse()
            .map_err(|_| Error::input(format!("bad cell index in {p:?}")))?;
        let r: i64 = r
            .trim()
            .parse()
            .map_err(|_| Error::input(format!("bad shift in {p:?}")))?;
        out.add(k, r, 1);
    }
    Ok(out)
}

pub fn datum(label: &str, n: i64) -> Result<MetaplecticDatum> {
    let label: CartanLabel = label.parse()?;
    MetaplecticDatum::new(RootDatum::new(label)?, n)
}

fn levi_of(label: &str, n: i64, nodes: &str) -> Result<LeviDatum> {
    let d = datum(label, n)?;
    LeviDatum::new(&d, &parse_nodes(nodes)?)
}

fn nil_of(label: &str, n: i64, nodes: &str) -> Result<NilradicalDatum> {
    let levi = levi_of(label, n, nodes)?;
    if levi.complement.is_empty() {
        return Err(Error::input("the nilradical needs a proper Levi (some node outside it)"));
    }
    NilradicalDatum::new(&levi)
}

fn check_theta(levi: &LeviDatum, theta: &[i64]) -> Result<()> {
    levi.check_theta(theta)?;
    if !levi.in_positive_cone(theta) {
        return Err(Error::input(format!(
            "theta {theta:?} is outside the positive cone of Lambda_{{G,P}}"
        )));
    }
    Ok(())
}

fn half_string(x: i64) -> String {
    if x % 2 == 0 {
        (x / 2).to_string()
    } else {
        format!("{x}/2")
    }
}

fn decomposition_list(levi: &DualSystem, dec: &BTreeMap<Weight, u64>) -> Value {
    Value::Array(
        dec.iter()
            .map(|(hw, m)| {
                json!({
                    "highest_weight": hw,
                    "multiplicity": m,
                    "dim": levi.weyl_dimension(hw),
                })
            })
            .collect(),
    )
}

pub fn dual_group(label: &str, n: i64, nu: Option<&[i64]>, weyl_word: Option<&[usize]>) -> Result<Value> {
    let d = datum(label, n)?;
    let p = d.profile()?;
    if !p.xi_injective {
        return Err(Error::invariant(format!(
            "xi is not injective on the cocenter for {label}, n = {n}"
        )));
    }
    let mut out = json!({
        "iota": d.base.iota,
        "kappa": d.base.kappa_matrix(),
        "h_dual": d.base.h_dual,
        "big_n": d.big_n,
        "lambda_sharp": d.lambda_sharp,
        "sharp_index": d.sharp_index(),
        "delta": d.delta,
        "dual_simple_roots": d.dual_simple_roots,
        "dual_cartan": d.dual_cartan,
        "dual_cartan_type": p.dual_cartan_type,
        "dual_positive_roots": d.dual_positive_roots,
        "rho_n": d.rho_n2.iter().map(|&x| half_string(x)).collect::<Vec<_>>(),
        "cocenter": p.cocenter,
        "cocenter_invariants": p.cocenter_invariants,
        "center_order": p.center_order,
        "center_n_torsion_order": p.center_n_torsion_order,
        "xi_report": {
            "injective": p.xi_injective,
            "surjective_onto_cn": p.xi_surjective_onto_cn,
        },
    });
    if let Some(nu) = nu {
        let chi = d.xi_character(nu)?;
        let values: Vec<String> = d
            .center_representatives()
            .iter()
            .map(|z| {
                let v = chi.evaluate(z);
                format!("{}/{}", v.numer(), v.denom())
            })
            .collect();
        out["xi_character"] = json!({
            "nu": nu,
            "pairing_over_n": chi.pairing,
            "values_on_center_generators": values,
            "trivial": d.character_is_trivial(&chi),
            "inverse_pairing": d.central_twist_inverse(nu)?.pairing,
        });
    }
    if let Some(word) = weyl_word {
        if let Some(&bad) = word.iter().find(|&&i| i >= d.rank()) {
            return Err(Error::input(format!("reflection index {} out of range", bad + 1)));
        }
        let w = WeylElement::from_word(word.to_vec());
        out["twisted_weyl_shift"] = json!({
            "word": word.iter().map(|i| i + 1).collect::<Vec<_>>(),
            "shift": d.twisted_weyl_shift(&w)?,
        });
    }
    Ok(out)
}

pub fn levi(label: &str, n: i64, nodes: &str, theta: Option<&[i64]>) -> Result<Value> {
    let l = levi_of(label, n, nodes)?;
    let mut out = json!({
        "levi_nodes": l.nodes.iter().map(|i| i + 1).collect::<Vec<_>>(),
        "complement_nodes": l.complement.iter().map(|i| i + 1).collect::<Vec<_>>(),
        "levi_dual_type": l.levi_type(),
        "quotient_rank": l.quotient_rank(),
        "sharp_image": l.sharp_image,
        "m0_basis": l.m0_basis,
        "dual_cartan_m": l.dual_cartan_m,
    });
    if let Some(theta) = theta {
        l.check_theta(theta)?;
        out["theta"] = json!({
            "theta": theta,
            "kappa_m": l.kappa_m(theta),
            "component_nonvanishing": l.component_nonvanishing(theta),
            "in_sharp_image": l.in_sharp_image(theta),
            "degree_bound": l.degree_bound(theta),
        });
    }
    Ok(out)
}

pub fn branch(label: &str, n: i64, nodes: &str, lambda: &[i64]) -> Result<Value> {
    let d = datum(label, n)?;
    let l = LeviDatum::new(&d, &parse_nodes(nodes)?)?;
    let full = DualSystem::full(&d);
    let sub = DualSystem::levi(&l);
    let ch = full.irreducible_character(lambda)?;
    let dec = full.branch(lambda, &sub)?;
    let total: u64 = dec.iter().map(|(hw, m)| m * sub.weyl_dimension(hw)).sum();
    if total != ch.dim() {
        return Err(Error::invariant(format!(
            "branching dimension {total} differs from dim V^lambda = {}",
            ch.dim()
        )));
    }
    let weights: Vec<Value> = ch
        .weights
        .iter()
        .map(|(mu, m)| json!({"weight": mu, "multiplicity": m}))
        .collect();
    Ok(json!({
        "lambda": lambda,
        "dim": ch.dim(),
        "weyl_dimension": full.weyl_dimension(lambda),
        "weights": weights,
        "levi_nodes": l.nodes.iter().map(|i| i + 1).collect::<Vec<_>>(),
        "branching": decomposition_list(&sub, &dec),
    }))
}

pub fn nilradical(label: &str, n: i64, nodes: &str) -> Result<Value> {
    let nil = nil_of(label, n, nodes)?;
    let classes: Vec<Value> = nil
        .classes
        .iter()
        .map(|c| {
            json!({
                "class": c.class,
                "weights": c.weights,
                "highest_weight": c.highest_weight,
                "dim": c.dim,
                "c_p": c.projection,
            })
        })
        .collect();
    Ok(json!({
        "levi_nodes": nil.levi.nodes.iter().map(|i| i + 1).collect::<Vec<_>>(),
        "levi_cocenter": nil.levi_cocenter.to_string(),
        "root_count": nil.root_count(),
        "j": classes,
    }))
}

pub fn sym(label: &str, n: i64, nodes: &str, theta: &[i64], m: u32) -> Result<Value> {
    let nil = nil_of(label, n, nodes)?;
    nil.levi.check_theta(theta)?;
    Ok(to_value(&nil.graded_sym(theta, m)?))
}

pub fn stalk(label: &str, n: i64, nodes: &str, parts: &str) -> Result<Value> {
    let nil = nil_of(label, n, nodes)?;
    let dec = Decomposition::new(parse_parts(parts)?, nil.levi.quotient_rank())?;
    let rep = ic_stalks::stalk_poincare(&nil, &dec)?;
    let mut v = to_value(&rep);
    v["decomposition"] = to_value(&dec);
    v["shift_polynomial_text"] = json!(rep.shift_polynomial.to_string());
    Ok(v)
}

pub fn zastava(label: &str, n: i64, nodes: &str, theta: &[i64]) -> Result<Value> {
    let nil = nil_of(label, n, nodes)?;
    check_theta(&nil.levi, theta)?;
    let top = ic_stalks::zastava_top(&nil, theta)?;
    let kostant: Vec<Value> = ic_stalks::enumerate_b_theta(&nil, theta)
        .iter()
        .map(|b| json!({"counts": b.counts, "size": b.size}))
        .collect();
    let mut v = to_value(&top);
    v["theta"] = json!(theta);
    v["b_theta"] = Value::Array(kostant);
    Ok(v)
}

/// Inputs of the Eisenstein-series comparison.
pub struct EisRequest<'a> {
    pub label: &'a str,
    pub n: i64,
    pub curve: CurveDatum,
    pub spec: LocalSystemSpec,
    pub base: Vec<i64>,
    pub height: i64,
    /// Numeric `Eis'` table; placeholders when absent.
    pub table: Option<BTreeMap<Vec<i64>, BigRational>>,
}

pub fn parse_eis_table(text: &str) -> Result<BTreeMap<Vec<i64>, BigRational>> {
    let raw: BTreeMap<String, String> = serde_json::from_str(text)
        .map_err(|e| Error::input(format!("malformed Eis' table JSON: {e}")))?;
    raw.into_iter()
        .map(|(k, v)| {
            let r = series::parse_rational(&v)
                .ok_or_else(|| Error::input(format!("bad rational {v:?} in Eis' table")))?;
            Ok((parse_vec(&k)?, r))
        })
        .collect()
}

pub fn eis_series(req: &EisRequest) -> Result<Value> {
    let d = datum(req.label, req.n)?;
    let levi = LeviDatum::new(&d, &[])?;
    let nil = NilradicalDatum::new(&levi)?;
    if req.base.len() != d.rank() {
        return Err(Error::input(format!("base must have {} coordinates", d.rank())));
    }
    d.check_sharp(&req.base)?;
    let generator = (nil.classes.len() == 1).then(|| nil.classes[0].highest_weight.clone());
    let mut l_reports = Vec::new();
    for c in &nil.classes {
        let l = l_series(&req.curve, &req.spec, &c.projection, generator.as_deref(), req.height)?;
        l_reports.push(json!({"nu": c.projection, "series": to_value(&l.report())}));
    }

    fn compare<C: series::Coefficient>(
        eis_cl: &FormalSeries<C>,
        req: &EisRequest,
        nil: &NilradicalDatum,
    ) -> Result<(Value, bool, usize)> {
        let product = eis_product_form(eis_cl, nil, &req.curve, &req.spec, req.height)?;
        let mut sums = FormalSeries::<C>::new(req.base.clone(), req.height);
        let mut agree = true;
        let mut checked = 0;
        for mu in product.window() {
            let s = eis_sum_form(&mu, &req.base, |x| eis_cl.coefficient(x), nil, &req.curve, &req.spec)?;
            sums.add_term(&mu, &s)?;
            agree &= s == product.coefficient(&mu);
            checked += 1;
        }
        let coeffs = |s: &FormalSeries<C>| -> BTreeMap<String, Value> {
            s.terms().map(|(k, v)| (format!("{k:?}"), v.to_json())).collect()
        };
        Ok((
            json!({
                "eis_cl": coeffs(eis_cl),
                "eis_mod_product": coeffs(&product),
                "eis_mod_sum": coeffs(&sums),
            }),
            agree,
            checked,
        ))
    }

    let (series_json, agree, checked) = match &req.table {
        None => {
            let cl = FormalSeries::<Placeholders>::placeholders(req.base.clone(), req.height, |mu| {
                d.in_sharp(mu)
            });
            compare(&cl, req, &nil)?
        }
        Some(t) => {
            let mut cl = FormalSeries::<BigRational>::new(req.base.clone(), req.height);
            for (mu, c) in t {
                if cl.in_window(mu) {
                    cl.add_term(mu, c)?;
                }
            }
            compare(&cl, req, &nil)?
        }
    };
    if !agree {
        return Err(Error::invariant(
            "the product and sum forms of Eis_mod disagree on the window",
        ));
    }
    Ok(json!({
        "curve": to_value(&req.curve),
        "base": req.base,
        "height": req.height,
        "mode": if req.table.is_some() { "numeric" } else { "placeholders" },
        "l_series": l_reports,
        "series": series_json,
        "coefficients_compared": checked,
        "identity_holds": agree,
    }))
}

pub fn constant_term_report(d: i64, d1: i64, n: i64, g: u32, factor: Option<&LocalFactor>) -> Result<Value> {
    Ok(to_value(&constant_term(d, d1, n, g, factor)?))
}

fn element_report(ctx: &SL2Context, x: &ThetaModuleElement) -> Value {
    let cells: Vec<Value> = x
        .by_cell()
        .into_iter()
        .map(|(k, p)| {
            json!({
                "k": k,
                "d": i64::from(k) * ctx.e,
                "poly": p,
                "poly_text": p.to_string(),
            })
        })
        .collect();
    Value::Array(cells)
}

pub fn sl2_hecke(n: i64, m: u32, cells: &str) -> Result<Value> {
    let ctx = SL2Context::new(n)?;
    let x = parse_cells(cells)?;
    let y = sl2::hecke_of_irreducible(&ctx, m, &x)?;
    Ok(json!({
        "e": ctx.e,
        "m": m,
        "input": element_report(&ctx, &x),
        "output": element_report(&ctx, &y),
    }))
}

pub fn sl2_eigen(n: i64, m: u32) -> Result<Value> {
    let ctx = SL2Context::new(n)?;
    let r = sl2::theta_eigen_check(&ctx, m)?;
    Ok(json!({
        "e": ctx.e,
        "m": m,
        "aut": element_report(&ctx, &r.aut),
        "hecke_aut": element_report(&ctx, &r.hecke_aut),
        "eigen_poly": r.eigen_poly.to_string(),
        "eigen_poly_map": r.eigen_poly,
        "holds": r.holds,
    }))
}

pub fn sl2_eis(n: i64, d: i64, nontrivial: bool, kmax: u32) -> Result<Value> {
    let ctx = SL2Context::new(n)?;
    let x = sl2::eis_expand(&ctx, d, nontrivial, kmax)?;
    let parities: Vec<Value> = x
        .by_cell()
        .keys()
        .map(|&k| {
            let deg = i64::from(k) * ctx.e;
            json!({"k": k, "parity": sl2::parity(&ctx, deg).ok().flatten()})
        })
        .collect();
    Ok(json!({
        "e": ctx.e,
        "d": d,
        "local_system": if nontrivial { "nontrivial" } else { "trivial" },
        "k_max": kmax,
        "cells": element_report(&ctx, &x),
        "parity": parities,
    }))
}

pub fn sl2_stalks(n: i64, d: Option<i64>, r: Option<i64>, rmax: i64) -> Result<Value> {
    let ctx = SL2Context::new(n)?;
    let mut rows = Vec::new();
    match (d, r) {
        (Some(d), Some(r)) => rows.push(to_value(&sl2::stalk_table(&ctx, d, r)?)),
        _ => {
            let ds: Vec<i64> = match d {
                Some(d) => vec![d],
                None => (0..).map(|k| k * ctx.e).take_while(|&x| x < rmax).collect(),
            };
            for d in ds {
                for r in d + 1..=rmax {
                    rows.push(to_value(&sl2::stalk_table(&ctx, d, r)?));
                }
            }
        }
    }
    Ok(json!({"e": ctx.e, "table": rows}))
}

pub fn sl2_transport(n: i64, m: i64, cells: &str) -> Result<Value> {
    let from = SL2Context::new(n)?;
    let to = SL2Context::new(m)?;
    let x = parse_cells(cells)?;
    let y = sl2::transport(&from, &to, &x)?;
    let mut commutes = true;
    for (k, _) in x.by_cell() {
        let c = ThetaModuleElement::cell(k);
        let lhs = sl2::transport(&from, &to, &sl2::fundamental_hecke(&from, &c))?;
        let rhs = sl2::fundamental_hecke(&to, &sl2::transport(&from, &to, &c)?);
        commutes &= lhs == rhs;
    }
    if !commutes {
        return Err(Error::invariant("transport does not commute with the Hecke operator"));
    }
    Ok(json!({
        "from_n": n,
        "to_n": m,
        "input": element_report(&from, &x),
        "output": element_report(&to, &y),
        "commutes_with_hecke": commutes,
    }))
}

/// Flat `key: value` rendering of a report for the table output mode.
pub fn render_table(v: &Value) -> String {
    fn walk(prefix: &str, v: &Value, out: &mut Vec<String>) {
        match v {
            Value::Object(m) => {
                for (k, x) in m {
                    let p = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                    walk(&p, x, out);
                }
            }
            Value::Array(a) if a.iter().any(|x| x.is_object()) => {
                for (i, x) in a.iter().enumerate() {
                    walk(&format!("{prefix}[{i}]"), x, out);
                }
            }
            Value::String(s) => out.push(format!("{prefix}: {s}")),
            other => out.push(format!("{prefix}: {other}")),
        }
    }
    let mut out = Vec::new();
    walk("", v, &mut out);
    out.join("\n")
}
