//! The theta-sheaf Hecke module for `SL_2` on the projective line.
//!
//! Cells are indexed by the stratum index `k = d / e`; in these coordinates
//! the Hecke rules depend only on the parity of `n`.

use std::collections::BTreeMap;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::laurent::Laurent;
use crate::metaplectic::MetaplecticDatum;
use crate::rep::DualSystem;
use crate::rootdata::{CartanLabel, RootDatum};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SL2Context {
    pub n: i64,
    pub e: i64,
    pub odd: bool,
}

impl SL2Context {
    /// Builds the context and checks `Lambda_sharp = e Z alpha` against the
    /// general metaplectic construction.
    pub fn new(n: i64) -> Result<Self> {
        if n < 1 {
            return Err(Error::input(format!("n must be positive, got {n}")));
        }
        let odd = n % 2 == 1;
        let e = if odd { n } else { n / 2 };
        let datum = Self::datum(n)?;
        if datum.lambda_sharp != vec![vec![e]] {
            return Err(Error::invariant(format!(
                "Lambda_sharp for A1, n = {n} is {:?}, expected [[{e}]]",
                datum.lambda_sharp
            )));
        }
        Ok(SL2Context { n, e, odd })
    }

    fn datum(n: i64) -> Result<MetaplecticDatum> {
        let label: CartanLabel = "A1".parse()?;
        MetaplecticDatum::new(RootDatum::new(label)?, n)
    }

    /// Generator of the dual weight lattice: `e alpha` for `n` even, `n alpha`
    /// for `n` odd.
    pub fn generator(&self) -> i64 {
        if self.odd {
            self.n
        } else {
            self.e
        }
    }

    /// Stratum-index step of the trivial Eisenstein series, `n / e`.
    pub fn step(&self) -> u32 {
        (self.n / self.e) as u32
    }

    pub fn cell_of_degree(&self, d: i64) -> Result<u32> {
        if d < 0 || d % self.e != 0 {
            return Err(Error::input(format!(
                "degree d = {d} is not in e Z>=0 with e = {}; the component vanishes",
                self.e
            )));
        }
        Ok((d / self.e) as u32)
    }
}

type Signed = BTreeMap<(u32, i64), i64>;

/// Nonnegative combination of cells `IC_k[r]`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ThetaModuleElement {
    coeffs: BTreeMap<(u32, i64), u64>,
}

impl ThetaModuleElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn cell(k: u32) -> Self {
        Self::cell_shifted(k, 0)
    }

    pub fn cell_shifted(k: u32, shift: i64) -> Self {
        let mut e = Self::zero();
        e.add(k, shift, 1);
        e
    }

    pub fn add(&mut self, k: u32, shift: i64, mult: u64) {
        if mult > 0 {
            *self.coeffs.entry((k, shift)).or_insert(0) += mult;
        }
    }

    pub fn coeff(&self, k: u32, shift: i64) -> u64 {
        self.coeffs.get(&(k, shift)).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, i64, u64)> + '_ {
        self.coeffs.iter().map(|(&(k, r), &c)| (k, r, c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn max_cell(&self) -> Option<u32> {
        self.coeffs.keys().map(|&(k, _)| k).max()
    }

    /// Shift polynomial of each cell.
    pub fn by_cell(&self) -> BTreeMap<u32, Laurent> {
        let mut out: BTreeMap<u32, Laurent> = BTreeMap::new();
        for (k, r, c) in self.terms() {
            out.entry(k).or_default().add_term(r, c as i64);
        }
        out
    }

    pub fn sum(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, r, c) in other.terms() {
            out.add(k, r, c);
        }
        out
    }

    /// Multiplies every cell by a Laurent polynomial with nonnegative
    /// coefficients.
    pub fn scale(&self, p: &Laurent) -> Result<Self> {
        let mut s = Signed::new();
        for (k, r, c) in self.terms() {
            for (j, a) in p.terms() {
                *s.entry((k, r + j)).or_insert(0) += c as i64 * a;
            }
        }
        Self::from_signed(s, "scaling by a Laurent polynomial")
    }

    /// Restriction to cells `k <= kmax`.
    pub fn truncate(&self, kmax: u32) -> Self {
        ThetaModuleElement {
            coeffs: self
                .coeffs
                .iter()
                .filter(|(&(k, _), _)| k <= kmax)
                .map(|(&key, &c)| (key, c))
                .collect(),
        }
    }

    fn signed(&self) -> Signed {
        self.coeffs.iter().map(|(&key, &c)| (key, c as i64)).collect()
    }

    fn from_signed(s: Signed, what: &str) -> Result<Self> {
        let mut out = Self::zero();
        for ((k, r), c) in s {
            if c < 0 {
                return Err(Error::invariant(format!(
                    "positivity violated in {what}: coefficient {c} at IC_k[{r}] with k = {k}"
                )));
            }
            out.add(k, r, c as u64);
        }
        Ok(out)
    }
}

impl Serialize for ThetaModuleElement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let m: BTreeMap<String, Laurent> =
            self.by_cell().into_iter().map(|(k, p)| (k.to_string(), p)).collect();
        m.serialize(s)
    }
}

impl<'de> Deserialize<'de> for ThetaModuleElement {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let m = BTreeMap::<String, Laurent>::deserialize(d)?;
        let mut out = ThetaModuleElement::zero();
        for (k, p) in m {
            let k: u32 = k.parse().map_err(D::Error::custom)?;
            for (r, c) in p.terms() {
                if c < 0 {
                    return Err(D::Error::custom(format!("negative coefficient {c} in cell {k}")));
                }
                out.add(k, r, c as u64);
            }
        }
        Ok(out)
    }
}

fn add_signed(s: &mut Signed, k: u32, r: i64, c: i64) {
    if c == 0 {
        return;
    }
    let e = s.entry((k, r)).or_insert(0);
    *e += c;
    if *e == 0 {
        s.remove(&(k, r));
    }
}

fn hecke_signed(ctx: &SL2Context, x: &Signed) -> Signed {
    let mut out = Signed::new();
    for (&(k, r), &c) in x {
        match (ctx.odd, k) {
            (false, 0) => {
                add_signed(&mut out, 1, r + 1, c);
                add_signed(&mut out, 1, r - 1, c);
            }
            (false, 1) => {
                add_signed(&mut out, 0, r + 1, c);
                add_signed(&mut out, 0, r - 1, c);
            }
            (false, _) => {
                add_signed(&mut out, k + 1, r, c);
                add_signed(&mut out, k - 1, r, c);
            }
            (true, 0) => {
                for s in [2, 0, -2] {
                    add_signed(&mut out, 0, r + s, c);
                }
            }
            (true, 1) => {
                add_signed(&mut out, 0, r + 1, c);
                add_signed(&mut out, 0, r - 1, c);
                add_signed(&mut out, 2, r, c);
            }
            (true, _) => {
                for j in [k + 1, k, k - 1] {
                    add_signed(&mut out, j, r, c);
                }
            }
        }
    }
    out
}

/// The operator attached to the generator of the dual weight lattice.
pub fn fundamental_hecke(ctx: &SL2Context, elt: &ThetaModuleElement) -> ThetaModuleElement {
    ThetaModuleElement::from_signed(hecke_signed(ctx, &elt.signed()), "fundamental Hecke operator")
        .expect("the fundamental rules have nonnegative coefficients")
}

/// The operator for `V^{m gen}`, from the rank-one tensor rules
/// `V^1 V^m = V^{m+1} + V^{m-1}` (n even) or `+ V^m` as well (n odd).
pub fn hecke_of_irreducible(
    ctx: &SL2Context,
    m: u32,
    elt: &ThetaModuleElement,
) -> Result<ThetaModuleElement> {
    let mut prev = Signed::new();
    let mut cur = elt.signed();
    for j in 0..m {
        let mut next = hecke_signed(ctx, &cur);
        if j > 0 {
            for (&(k, r), &c) in &prev {
                add_signed(&mut next, k, r, -c);
            }
        }
        if ctx.odd && j > 0 {
            for (&(k, r), &c) in &cur {
                add_signed(&mut next, k, r, -c);
            }
        }
        prev = cur;
        cur = next;
        ThetaModuleElement::from_signed(
            cur.clone(),
            &format!("Hecke operator H^{} (n = {})", j + 1, ctx.n),
        )?;
    }
    ThetaModuleElement::from_signed(cur, &format!("Hecke operator H^{m} (n = {})", ctx.n))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EigenCheck {
    pub m: u32,
    pub aut: ThetaModuleElement,
    pub eigen_poly: Laurent,
    pub hecke_aut: ThetaModuleElement,
    pub holds: bool,
}

/// `Aut` is `IC_0` for `n` odd and `IC_0 + IC_1` for `n` even.
pub fn aut(ctx: &SL2Context) -> ThetaModuleElement {
    if ctx.odd {
        ThetaModuleElement::cell(0)
    } else {
        ThetaModuleElement::cell(0).sum(&ThetaModuleElement::cell(1))
    }
}

/// Principal-grading character of `V^{m gen}` for the dual group.
pub fn principal_character(ctx: &SL2Context, m: u32) -> Result<Laurent> {
    let datum = SL2Context::datum(ctx.n)?;
    let sys = DualSystem::full(&datum);
    let ch = sys.irreducible_character(&[m as i64 * ctx.generator()])?;
    Ok(Laurent::from_terms(
        ch.weights
            .iter()
            .map(|(mu, &mult)| (sys.principal_grading(mu), mult as i64)),
    ))
}

pub fn theta_eigen_check(ctx: &SL2Context, m: u32) -> Result<EigenCheck> {
    let a = aut(ctx);
    let eigen_poly = principal_character(ctx, m)?;
    let hecke_aut = hecke_of_irreducible(ctx, m, &a)?;
    let holds = a.scale(&eigen_poly)? == hecke_aut;
    Ok(EigenCheck {
        m,
        aut: a,
        eigen_poly,
        hecke_aut,
        holds,
    })
}

/// `Eis^d` of the trivial or a nontrivial local system, truncated to cells
/// `k <= kmax`.
pub fn eis_expand(ctx: &SL2Context, d: i64, nontrivial: bool, kmax: u32) -> Result<ThetaModuleElement> {
    let k0 = ctx.cell_of_degree(d)?;
    let mut out = ThetaModuleElement::zero();
    if nontrivial {
        if d == 0 {
            return Err(Error::input(
                "Eis^0 is only described for the trivial local system",
            ));
        }
        out.add(k0, 0, 1);
        return Ok(out.truncate(kmax));
    }
    let start = if d == 0 {
        out.add(0, 1, 1);
        out.add(0, -1, 1);
        (2 * ctx.n / ctx.e) as u32
    } else {
        k0
    };
    let mut k = start;
    while k <= kmax {
        out.add(k, 0, 1);
        k += ctx.step();
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StalkEntry {
    pub d: i64,
    pub r: i64,
    pub vanishes: bool,
    /// Shift relative to `IC_r` on its own stratum; absent when vanishing.
    pub shift: Option<i64>,
}

/// Stalk of `IC_d` on the Shatz stratum of degree `r > d`.
pub fn stalk_table(ctx: &SL2Context, d: i64, r: i64) -> Result<StalkEntry> {
    ctx.cell_of_degree(d)?;
    if r <= d {
        return Err(Error::input(format!(
            "stalks are described only on deeper strata: need r > d, got r = {r}, d = {d}"
        )));
    }
    let n = ctx.n;
    let shift = if d > 0 {
        ((r - d) % n == 0).then(|| 2 * (r - d) / n)
    } else {
        (r % n == 0).then(|| 2 * r / n - 1)
    };
    Ok(StalkEntry {
        d,
        r,
        vanishes: shift.is_none(),
        shift,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Parity {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

/// The `Z/2`-grading of cells; only defined for `n` even.
pub fn parity(ctx: &SL2Context, d: i64) -> Result<Option<Parity>> {
    ctx.cell_of_degree(d)?;
    if ctx.odd {
        return Ok(None);
    }
    Ok(Some(if d % ctx.n == 0 { Parity::Plus } else { Parity::Minus }))
}

/// The equivalence between modules for `n` and `m` of equal parity; the
/// identity on stratum indices and shifts.
pub fn transport(
    from: &SL2Context,
    to: &SL2Context,
    elt: &ThetaModuleElement,
) -> Result<ThetaModuleElement> {
    if from.odd != to.odd {
        return Err(Error::input(format!(
            "transport needs n - m even, got n = {}, m = {}",
            from.n, to.n
        )));
    }
    Ok(elt.clone())
}
