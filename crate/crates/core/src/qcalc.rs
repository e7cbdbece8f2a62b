//! q-integers, q-factorials, and Gaussian binomial coefficients over Q(q),
//! with an arbitrary base from the coefficient field.
//!
//! The base is usually the inverse of the eigenvalue q_j attached to a tower
//! level, so these show up in every reordering formula the rewriting engine
//! produces. `verify_q_leibniz` closes the loop: it replays the two
//! higher-order Leibniz identities against the engine's own products.

use std::collections::HashMap;

use crate::coeff::CoeffRat;
use crate::error::{Error, Result};
use crate::ore::engine::Ctx;
use crate::ore::Element;
use crate::presentation::CGLPresentation;

/// The q-integer (m)_base = 1 + base + ... + base^(m-1).
///
/// Equal to (base^m - 1)/(base - 1) away from base = 1; at base = 1 with
/// m >= 2 the closed form degenerates and the call errors, matching the
/// convention used by the factorial and binomial routines.
pub fn q_int(m: u32, base: &CoeffRat) -> Result<CoeffRat> {
    if base.is_one() && m >= 2 {
        return Err(Error::DegenerateBase { m });
    }
    let mut acc = CoeffRat::zero();
    let mut pw = CoeffRat::one();
    for _ in 0..m {
        acc = acc.add(&pw);
        pw = pw.mul(base);
    }
    Ok(acc)
}

/// (m)!_base = (m)_base (m-1)_base ... (1)_base, with (0)!_base = 1.
pub fn q_factorial(m: u32, base: &CoeffRat) -> Result<CoeffRat> {
    let mut acc = CoeffRat::one();
    for k in 1..=m {
        acc = acc.mul(&q_int(k, base)?);
    }
    Ok(acc)
}

/// Gaussian binomial coefficient, computed by the factorial formula with
/// exact division. Roots of unity in the base can make the denominator
/// vanish; that surfaces as a division error rather than a wrong value.
pub fn q_binomial(n: u32, i: u32, base: &CoeffRat) -> Result<CoeffRat> {
    if i > n {
        return Err(Error::BinomialRange { n, i });
    }
    let num = q_factorial(n, base)?;
    let den = q_factorial(i, base)?.mul(&q_factorial(n - i, base)?);
    num.div(&den)
}

/// Memo table for binomials at a fixed base, filled by the Pascal
/// recurrence. A table is a per-computation value: create one next to the
/// loop that needs it and drop it afterwards.
pub struct QBinomTable {
    base: CoeffRat,
    cache: HashMap<(u32, u32), CoeffRat>,
}

impl QBinomTable {
    pub fn new(base: CoeffRat) -> Self {
        QBinomTable { base, cache: HashMap::new() }
    }

    pub fn base(&self) -> &CoeffRat {
        &self.base
    }

    pub fn get(&mut self, n: u32, i: u32) -> Result<CoeffRat> {
        if i > n {
            return Err(Error::BinomialRange { n, i });
        }
        if i == 0 || i == n {
            return Ok(CoeffRat::one());
        }
        if let Some(v) = self.cache.get(&(n, i)) {
            return Ok(v.clone());
        }
        // binom(n, i) = binom(n-1, i-1) + base^i * binom(n-1, i)
        let a = self.get(n - 1, i - 1)?;
        let b = self.get(n - 1, i)?;
        let v = a.add(&self.base.pow(i as i64)?.mul(&b));
        self.cache.insert((n, i), v.clone());
        Ok(v)
    }
}

/// Check the two degree-n Leibniz identities for the top derivation of the
/// tower, with X = x_N, sigma = sigma_N, delta = delta_N, and binomial base
/// the inverse of q_N:
///
/// ```text
/// delta^n(e f)  =  sum_i  binom(n, i)  sigma^(n-i)(delta^i(e))  delta^(n-i)(f)
/// X^n e         =  sum_i  binom(n, i)  sigma^(n-i)(delta^i(e))  X^(n-i)
/// ```
///
/// Both sides are computed along independent routes: the left-hand sides go
/// through plain products and single applications of delta, the right-hand
/// sides assemble the binomial sums directly. The inputs must lie in the
/// subalgebra below the top generator.
pub fn verify_q_leibniz(
    pres: &CGLPresentation,
    e: &Element,
    f: &Element,
    n: u32,
) -> Result<bool> {
    let top = pres.n() - 1;
    let ctx = Ctx::new(pres);
    for (name, input) in [("e", e), ("f", f)] {
        if !input.within_level(top) {
            let gen = input.max_index().map(|g| pres.gen_name(g).to_string());
            return Err(Error::AboveLevel {
                gen: gen.unwrap_or_else(|| name.to_string()),
                level: top + 1,
            });
        }
    }
    let base = pres.q_j(top).inv()?;
    let mut binom = QBinomTable::new(base);

    // Powers of delta on each operand, up to n applications.
    let mut de = vec![e.clone()];
    let mut df = vec![f.clone()];
    for k in 1..=n {
        de.push(ctx.apply_delta(top, &de[(k - 1) as usize])?);
        df.push(ctx.apply_delta(top, &df[(k - 1) as usize])?);
    }

    // First identity.
    let mut lhs = ctx.mul(e, f)?;
    for _ in 0..n {
        lhs = ctx.apply_delta(top, &lhs)?;
    }
    let mut rhs = Element::zero(pres.n());
    for i in 0..=n {
        let c = binom.get(n, i)?;
        let left = ctx.apply_sigma(top, &de[i as usize], (n - i) as i64)?;
        let prod = ctx.mul(&left, &df[(n - i) as usize])?;
        rhs = rhs.add(&prod.scale(&c));
    }
    if lhs != rhs {
        return Ok(false);
    }

    // Second identity; the left side uses n single-generator steps so no
    // binomial coefficient enters it.
    let x_top = Element::generator(pres.n(), top);
    let mut lhs2 = e.clone();
    for _ in 0..n {
        lhs2 = ctx.mul(&x_top, &lhs2)?;
    }
    let mut rhs2 = Element::zero(pres.n());
    for i in 0..=n {
        let c = binom.get(n, i)?;
        let part = ctx.apply_sigma(top, &de[i as usize], (n - i) as i64)?;
        rhs2 = rhs2.add(&part.mul_mono_exponent(top, (n - i) as i32).scale(&c));
    }
    Ok(lhs2 == rhs2)
}
