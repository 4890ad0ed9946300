use num_bigint::BigInt;
use num_rational::BigRational;

use super::curve::{CurveDatum, LocalSystemSpec};
use super::formal::{Coefficient, FormalSeries};
use super::q_pow;
use crate::error::{Error, Result};
use crate::rep::NilradicalDatum;

fn rank_one_generator(nil: &NilradicalDatum) -> Option<Vec<i64>> {
    (nil.classes.len() == 1).then(|| nil.classes[0].highest_weight.clone())
}

/// Scalar multiplying `t^{k nu}` in `L(E*, nu, t)`: `[s^k] L_nu(s) / q^k`.
fn l_coefficients(
    curve: &CurveDatum,
    spec: &LocalSystemSpec,
    nu: &[i64],
    generator: Option<&[i64]>,
    kmax: usize,
) -> Result<Vec<BigRational>> {
    let factor = spec.factor(nu, generator)?;
    factor.validate(curve)?;
    Ok(factor
        .coefficients(curve, kmax)
        .into_iter()
        .enumerate()
        .map(|(k, c)| BigRational::new(c, q_pow(curve.q, k as u64)))
        .collect())
}

/// `L(E*, nu, t)` truncated at `rho_check`-height `height`.
pub fn l_series(
    curve: &CurveDatum,
    spec: &LocalSystemSpec,
    nu: &[i64],
    generator: Option<&[i64]>,
    height: i64,
) -> Result<FormalSeries<BigRational>> {
    let h: i64 = nu.iter().sum();
    if h <= 0 || nu.iter().any(|&x| x < 0) {
        return Err(Error::input(format!("{nu:?} is not a positive character")));
    }
    let kmax = (height.max(0) / h) as usize;
    let coeffs = l_coefficients(curve, spec, nu, generator, kmax)?;
    let mut s = FormalSeries::new(vec![0; nu.len()], height);
    for (k, c) in coeffs.iter().enumerate() {
        let mu: Vec<i64> = nu.iter().map(|x| x * k as i64).collect();
        s.add_term(&mu, c)?;
    }
    Ok(s)
}

fn require_borel(nil: &NilradicalDatum) -> Result<()> {
    if !nil.levi.is_torus() {
        return Err(Error::input("the Eisenstein identities are stated for the Borel (empty Levi)"));
    }
    Ok(())
}

/// `Eis_cl(t) * prod over nu in J of L(E*, nu, t)`.
pub fn eis_product_form<C: Coefficient>(
    eis_cl: &FormalSeries<C>,
    nil: &NilradicalDatum,
    curve: &CurveDatum,
    spec: &LocalSystemSpec,
    height: i64,
) -> Result<FormalSeries<C>> {
    require_borel(nil)?;
    let generator = rank_one_generator(nil);
    let height = height.min(eis_cl.height);
    let mut acc = eis_cl.clone();
    acc.height = height;
    for class in &nil.classes {
        let l = l_series(curve, spec, &class.projection, generator.as_deref(), height)?;
        acc = acc.mul_rational(&l);
    }
    Ok(acc)
}

/// One coefficient of `Eis_mod` as the sum over Kostant elements `B(theta)`
/// with `mu - theta` at or above `base`.
pub fn eis_sum_form<C: Coefficient>(
    mu: &[i64],
    base: &[i64],
    oracle: impl Fn(&[i64]) -> C,
    nil: &NilradicalDatum,
    curve: &CurveDatum,
    spec: &LocalSystemSpec,
) -> Result<C> {
    require_borel(nil)?;
    let bound: Vec<i64> = mu.iter().zip(base).map(|(a, b)| a - b).collect();
    if bound.iter().any(|&x| x < 0) {
        return Ok(C::zero());
    }
    let generator = rank_one_generator(nil);
    let tables: Vec<Vec<BigRational>> = nil
        .classes
        .iter()
        .map(|c| {
            let h: i64 = c.projection.iter().sum();
            let kmax = (bound.iter().sum::<i64>() / h) as usize;
            l_coefficients(curve, spec, &c.projection, generator.as_deref(), kmax)
        })
        .collect::<Result<_>>()?;

    let mut total = C::zero();
    let mut counts = vec![0usize; nil.classes.len()];
    fn go<C: Coefficient>(
        i: usize,
        rest: Vec<i64>,
        counts: &mut Vec<usize>,
        nil: &NilradicalDatum,
        tables: &[Vec<BigRational>],
        mu: &[i64],
        bound: &[i64],
        oracle: &dyn Fn(&[i64]) -> C,
        total: &mut C,
    ) {
        if i == counts.len() {
            let mut weight = BigRational::from_integer(BigInt::from(1));
            for (k, t) in counts.iter().zip(tables) {
                weight *= &t[*k];
            }
            let theta: Vec<i64> = bound.iter().zip(&rest).map(|(b, r)| b - r).collect();
            let shifted: Vec<i64> = mu.iter().zip(&theta).map(|(a, b)| a - b).collect();
            total.add_assign(&oracle(&shifted).scaled(&weight));
            return;
        }
        let p = &nil.classes[i].projection;
        let mut cur = rest;
        let mut k = 0;
        loop {
            counts[i] = k;
            go(i + 1, cur.clone(), counts, nil, tables, mu, bound, oracle, total);
            cur = cur.iter().zip(p).map(|(a, b)| a - b).collect();
            if cur.iter().any(|&x| x < 0) {
                break;
            }
            k += 1;
        }
        counts[i] = 0;
    }
    go(0, bound.clone(), &mut counts, nil, &tables, mu, &bound, &oracle, &mut total);
    Ok(total)
}
