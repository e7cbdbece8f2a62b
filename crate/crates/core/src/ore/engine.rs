//! The PBW rewriting engine.
//!
//! Products are computed structurally rather than by blind word rewriting:
//! to move x_j^k left of an element of the subalgebra below j we expand the
//! higher-order Leibniz rule
//!
//! ```text
//! x_j^k a = sum_i binom(k, i) sigma_j^(k-i)(delta_j^i(a)) x_j^(k-i)
//! ```
//!
//! with Gaussian binomials at base q_j^(-1). Local nilpotence of delta_j
//! makes every such sum finite. The same skeleton, run through the inverse
//! relation, powers the Laurent products used by the deleting-derivations
//! map. A separate word-rewriting reducer (`rewrite_word`) reduces products
//! one adjacent swap at a time; it exists to cross-check the closed-form
//! engine and to catch inconsistent presentation data.

use std::cell::RefCell;
use std::collections::HashMap;

use crate::coeff::CoeffRat;
use crate::error::{Error, Result};
use crate::presentation::CGLPresentation;
use crate::qcalc::QBinomTable;

use super::{Element, LaurentElement, Mono, RawElement};

/// Default cap on iteration counts (nilpotence searches, inverse
/// expansions). The command-line tool threads its --bound flag and the
/// ORE_FORGE_BOUND variable through to this.
pub const DEFAULT_BOUND: u32 = 32;

/// Hard ceiling on steps taken by the word-rewriting reducer before it
/// gives up on a (presumably inconsistent) presentation.
const REWRITE_STEP_LIMIT: usize = 1_000_000;

/// Redex selection order for the word reducer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RewriteStrategy {
    LeftmostFirst,
    RightmostFirst,
}

/// Computation context: presentation, iteration bound, optional term-count
/// limit, and memo tables. Create one per logical operation; it is cheap
/// and not meant to be shared across threads.
pub struct Ctx<'a> {
    pres: &'a CGLPresentation,
    bound: u32,
    max_terms: Option<usize>,
    binom: RefCell<HashMap<usize, QBinomTable>>,
    delta_mono: RefCell<HashMap<(usize, Mono), Element>>,
}

impl<'a> Ctx<'a> {
    pub fn new(pres: &'a CGLPresentation) -> Self {
        Ctx {
            pres,
            bound: DEFAULT_BOUND,
            max_terms: None,
            binom: RefCell::new(HashMap::new()),
            delta_mono: RefCell::new(HashMap::new()),
        }
    }

    pub fn with_bound(mut self, bound: u32) -> Self {
        self.bound = bound;
        self
    }

    pub fn with_max_terms(mut self, max_terms: usize) -> Self {
        self.max_terms = Some(max_terms);
        self
    }

    pub fn pres(&self) -> &CGLPresentation {
        self.pres
    }

    pub fn bound(&self) -> u32 {
        self.bound
    }

    fn check_size(&self, terms: usize) -> Result<()> {
        match self.max_terms {
            Some(limit) if terms > limit => Err(Error::BoundExceeded {
                what: "term count".to_string(),
                bound: limit as u64,
            }),
            _ => Ok(()),
        }
    }

    /// Gaussian binomial at base q_j^(-1), memoized per level.
    fn binom(&self, j: usize, n: u32, i: u32) -> Result<CoeffRat> {
        let mut tables = self.binom.borrow_mut();
        let table = match tables.entry(j) {
            std::collections::hash_map::Entry::Occupied(e) => e.into_mut(),
            std::collections::hash_map::Entry::Vacant(v) => {
                let base = self.pres.q_j(j).inv()?;
                v.insert(QBinomTable::new(base))
            }
        };
        table.get(n, i)
    }

    /// The diagonal automorphism sigma_j^power on an element of the
    /// subalgebra below j. Negative powers are allowed.
    pub fn apply_sigma(&self, j: usize, a: &Element, power: i64) -> Result<Element> {
        let mut out = Element::zero(a.n());
        for (m, c) in a.terms() {
            if !m.is_low(j) {
                return Err(self.above_level_error(m, j));
            }
            let mut factor = CoeffRat::one();
            for i in 0..j {
                let e = m.0[i];
                if e != 0 {
                    factor = factor.mul(&self.pres.lambda(j, i).pow(e as i64 * power)?);
                }
            }
            out.insert_add(m.clone(), c.mul(&factor));
        }
        Ok(out)
    }

    fn above_level_error(&self, m: &Mono, level: usize) -> Error {
        let gen = (level..m.0.len())
            .rev()
            .find(|&i| m.0[i] != 0)
            .map(|i| self.pres.gen_name(i).to_string())
            .unwrap_or_default();
        Error::AboveLevel { gen, level }
    }

    /// delta_j extended from generator values by the twisted product rule
    /// delta(a b) = sigma(a) delta(b) + delta(a) b.
    pub fn apply_delta(&self, j: usize, a: &Element) -> Result<Element> {
        let mut out = Element::zero(a.n());
        for (m, c) in a.terms() {
            if !m.is_low(j) {
                return Err(self.above_level_error(m, j));
            }
            let d = self.delta_mono(j, m)?;
            out = out.add(&d.scale(c));
        }
        self.check_size(out.term_count())?;
        Ok(out)
    }

    fn delta_mono(&self, j: usize, m: &Mono) -> Result<Element> {
        if let Some(hit) = self.delta_mono.borrow().get(&(j, m.clone())) {
            return Ok(hit.clone());
        }
        let n = m.0.len();
        let first = match (0..n).find(|&i| m.0[i] != 0) {
            None => return Ok(Element::zero(n)),
            Some(i) => i,
        };
        let mut rest = m.clone();
        rest.0[first] -= 1;
        // delta(x_i rest) = lambda_ji x_i delta(rest) + delta(x_i) rest
        let mut out = Element::zero(n);
        let d_rest = self.delta_mono(j, &rest)?;
        if !d_rest.is_zero() {
            let moved = self.mul_gen_pow_left(first, 1, &d_rest)?;
            out = out.add(&moved.scale(self.pres.lambda(j, first)));
        }
        if let Some(d_gen) = self.pres.delta(j, first) {
            let rest_elem = Element::from_mono(n, rest, CoeffRat::one());
            out = out.add(&self.mul(d_gen, &rest_elem)?);
        }
        self.delta_mono
            .borrow_mut()
            .insert((j, m.clone()), out.clone());
        Ok(out)
    }

    /// Left-multiply an arbitrary normal-form element by x_j^k.
    pub fn mul_gen_pow_left(&self, j: usize, k: u32, v: &Element) -> Result<Element> {
        if k == 0 {
            return Ok(v.clone());
        }
        let n = v.n();
        let mut out = Element::zero(n);
        for (f, c) in v.terms() {
            if f.low_part(j).is_unit() {
                // Nothing below j to rewrite past; exponents just add.
                let mut e = f.clone();
                e.0[j] += k as i32;
                out.insert_add(e, c.clone());
                continue;
            }
            let low = Element::from_mono(n, f.low_part(j), CoeffRat::one());
            let mut cur = low;
            for i in 0..=k {
                if i > 0 {
                    cur = self.apply_delta(j, &cur)?;
                    if cur.is_zero() {
                        break;
                    }
                }
                let coeff = self.binom(j, k, i)?;
                let part = self.apply_sigma(j, &cur, (k - i) as i64)?;
                for (g, gamma) in part.terms() {
                    let mut e = g.clone();
                    e.0[j] = (k - i) as i32 + f.0[j];
                    e.0[j + 1..].copy_from_slice(&f.0[j + 1..]);
                    out.insert_add(e, c.mul(gamma).mul(&coeff));
                }
            }
        }
        self.check_size(out.term_count())?;
        Ok(out)
    }

    /// Product of two elements in PBW normal form.
    pub fn mul(&self, a: &Element, b: &Element) -> Result<Element> {
        debug_assert_eq!(a.n(), b.n());
        let n = a.n();
        let mut out = Element::zero(n);
        for (e, c) in a.terms() {
            let mut v = b.clone();
            for j in (0..n).rev() {
                if e.0[j] > 0 {
                    v = self.mul_gen_pow_left(j, e.0[j] as u32, &v)?;
                }
            }
            out = out.add(&v.scale(c));
            self.check_size(out.term_count())?;
        }
        Ok(out)
    }

    /// Scale each monomial by its eigenvalue under the torus element h.
    pub fn apply_torus(&self, h: &[CoeffRat], a: &Element) -> Result<Element> {
        let chis = self.generator_eigenvalues(h)?;
        let mut out = Element::zero(a.n());
        for (m, c) in a.terms() {
            out.insert_add(m.clone(), c.mul(&self.mono_eigenvalue(&chis, m)?));
        }
        Ok(out)
    }

    pub fn apply_torus_laurent(
        &self,
        h: &[CoeffRat],
        a: &LaurentElement,
    ) -> Result<LaurentElement> {
        let chis = self.generator_eigenvalues(h)?;
        let mut out = LaurentElement::zero(a.n(), a.inverted());
        for (m, c) in a.terms() {
            out.insert_add(m.clone(), c.mul(&self.mono_eigenvalue(&chis, m)?));
        }
        Ok(out)
    }

    fn generator_eigenvalues(&self, h: &[CoeffRat]) -> Result<Vec<CoeffRat>> {
        (0..self.pres.n())
            .map(|i| self.pres.chi(h, self.pres.weight(i)))
            .collect()
    }

    fn mono_eigenvalue(&self, chis: &[CoeffRat], m: &Mono) -> Result<CoeffRat> {
        let mut factor = CoeffRat::one();
        for (i, &e) in m.0.iter().enumerate() {
            if e != 0 {
                factor = factor.mul(&chis[i].pow(e as i64)?);
            }
        }
        Ok(factor)
    }

    /// Largest s <= bound with delta_j^s(a) nonzero, delta_j^(s+1)(a) zero.
    pub fn delta_nilpotence_order(&self, j: usize, a: &Element) -> Result<u32> {
        if a.is_zero() {
            return Err(Error::ZeroElement);
        }
        let mut cur = a.clone();
        let mut s = 0u32;
        loop {
            cur = self.apply_delta(j, &cur)?;
            if cur.is_zero() {
                return Ok(s);
            }
            s += 1;
            if s > self.bound {
                return Err(Error::BoundExceeded {
                    what: format!(
                        "delta iteration at level {} stayed nonzero",
                        j + 1
                    ),
                    bound: self.bound as u64,
                });
            }
        }
    }

    /// X^l a for a below level j, expanded into the localization. Negative
    /// l runs the inverse relation
    /// X^(-1) a = sigma^(-1)(a) X^(-1) - q_j X^(-1) sigma^(-1)(delta(a)) X^(-1)
    /// to a fixed point, which local nilpotence guarantees is finite.
    pub fn x_pow_times_low(
        &self,
        j: usize,
        l: i32,
        a: &Element,
    ) -> Result<LaurentElement> {
        if let Some((m, _)) = a.terms().find(|(m, _)| !m.is_low(j)) {
            return Err(self.above_level_error(m, j));
        }
        if l >= 0 {
            let mut out = LaurentElement::zero(a.n(), j);
            let mut cur = a.clone();
            let k = l as u32;
            for i in 0..=k {
                if i > 0 {
                    cur = self.apply_delta(j, &cur)?;
                    if cur.is_zero() {
                        break;
                    }
                }
                let coeff = self.binom(j, k, i)?;
                let part = self.apply_sigma(j, &cur, (k - i) as i64)?;
                for (g, gamma) in part.terms() {
                    let mut e = g.clone();
                    e.0[j] = (k - i) as i32;
                    out.insert_add(e, gamma.mul(&coeff));
                }
            }
            Ok(out)
        } else {
            let mut out = LaurentElement::from_element(a, j);
            for _ in 0..(-l) {
                out = self.x_inv_times(j, &out)?;
            }
            Ok(out)
        }
    }

    /// X^(-1) u for a Laurent element supported below level j (plus X
    /// powers).
    fn x_inv_times(&self, j: usize, u: &LaurentElement) -> Result<LaurentElement> {
        let mut out = LaurentElement::zero(u.n(), j);
        for (m, c) in u.terms() {
            let low = Element::from_mono(u.n(), m.low_part(j), CoeffRat::one());
            if !m.0[j + 1..].iter().all(|&e| e == 0) {
                return Err(Error::LaurentObstruction {
                    gen: self.pres.gen_name(j).to_string(),
                });
            }
            let t = self.x_inv_times_elem(j, &low, 0)?;
            out = out.add(&t.shift_inverted(m.0[j]).scale(c));
        }
        self.check_size(out.term_count())?;
        Ok(out)
    }

    fn x_inv_times_elem(
        &self,
        j: usize,
        g: &Element,
        depth: u32,
    ) -> Result<LaurentElement> {
        if g.is_zero() {
            return Ok(LaurentElement::zero(g.n(), j));
        }
        if depth > self.bound {
            return Err(Error::BoundExceeded {
                what: format!("inverse expansion at level {}", j + 1),
                bound: self.bound as u64,
            });
        }
        // T(g) = sigma^(-1)(g) X^(-1) - q_j T(sigma^(-1)(delta(g))) X^(-1)
        let sg = self.apply_sigma(j, g, -1)?;
        let mut out = LaurentElement::from_element(&sg, j).shift_inverted(-1);
        let dg = self.apply_delta(j, g)?;
        if !dg.is_zero() {
            let inner = self.x_inv_times_elem(j, &self.apply_sigma(j, &dg, -1)?, depth + 1)?;
            out = out.sub(&inner.scale(self.pres.q_j(j)).shift_inverted(-1));
        }
        Ok(out)
    }

    /// Product in the localization at the shared inverted generator.
    ///
    /// Generators above the inverted level may appear, but any commutation
    /// this forces across the inverted level must be purely diagonal: the
    /// moment a needed delta value is nonzero the product errors out.
    pub fn laurent_mul(
        &self,
        u: &LaurentElement,
        v: &LaurentElement,
    ) -> Result<LaurentElement> {
        if u.inverted() != v.inverted() {
            return Err(Error::InvertedMismatch {
                a: self.pres.gen_name(u.inverted()).to_string(),
                b: self.pres.gen_name(v.inverted()).to_string(),
            });
        }
        let j = u.inverted();
        let n = u.n();
        let mut out = LaurentElement::zero(n, j);
        // The expansion of X^(e_j) past a fixed low monomial is reused
        // across term pairs.
        let mut b_cache: HashMap<(i32, Mono), LaurentElement> = HashMap::new();
        for (e, cu) in u.terms() {
            let e_low = Element::from_mono(n, e.low_part(j), CoeffRat::one());
            for (f, cv) in v.terms() {
                let mut scalar = cu.mul(cv);
                // chi_1: e's high block crosses f's low block.
                for k in j + 1..n {
                    if e.0[k] == 0 {
                        continue;
                    }
                    for i in 0..j {
                        if f.0[i] == 0 {
                            continue;
                        }
                        self.require_diagonal(k, i)?;
                        scalar = scalar
                            .mul(&self.pres.lambda(k, i).pow(e.0[k] as i64 * f.0[i] as i64)?);
                    }
                }
                // chi_2: e's high block crosses X^(f_j).
                if f.0[j] != 0 {
                    for k in j + 1..n {
                        if e.0[k] == 0 {
                            continue;
                        }
                        self.require_diagonal(k, j)?;
                        scalar = scalar
                            .mul(&self.pres.lambda(k, j).pow(e.0[k] as i64 * f.0[j] as i64)?);
                    }
                }
                // chi_4: merging the two high blocks.
                for k in j + 1..n {
                    if e.0[k] == 0 {
                        continue;
                    }
                    for kp in j + 1..k {
                        if f.0[kp] == 0 {
                            continue;
                        }
                        self.require_diagonal(k, kp)?;
                        scalar = scalar
                            .mul(&self.pres.lambda(k, kp).pow(e.0[k] as i64 * f.0[kp] as i64)?);
                    }
                }
                let key = (e.0[j], f.low_part(j));
                let expansion = match b_cache.get(&key) {
                    Some(hit) => hit.clone(),
                    None => {
                        let f_low = Element::from_mono(n, f.low_part(j), CoeffRat::one());
                        let exp = self.x_pow_times_low(j, e.0[j], &f_low)?;
                        b_cache.insert(key, exp.clone());
                        exp
                    }
                };
                for (mb, gamma) in expansion.terms() {
                    let sub = self.mul(&e_low, &Element::from_mono(n, mb.low_part(j), CoeffRat::one()))?;
                    for (h, zeta) in sub.terms() {
                        let mut mono = h.clone();
                        mono.0[j] = mb.0[j] + f.0[j];
                        for k in j + 1..n {
                            mono.0[k] = e.0[k] + f.0[k];
                        }
                        out.insert_add(mono, scalar.mul(gamma).mul(zeta));
                    }
                }
            }
            self.check_size(out.term_count())?;
        }
        Ok(out)
    }

    fn require_diagonal(&self, k: usize, i: usize) -> Result<()> {
        if self.pres.delta(k, i).is_some() {
            return Err(Error::LaurentObstruction {
                gen: self.pres.gen_name(k).to_string(),
            });
        }
        Ok(())
    }

    /// Reduce a raw formal sum of words to PBW normal form.
    pub fn normal_form(&self, raw: &RawElement) -> Result<Element> {
        let n = self.pres.n();
        let mut total = Element::zero(n);
        for (c, word) in &raw.terms {
            let mut acc = Element::one(n);
            for &(g, p) in word {
                if g >= n {
                    return Err(Error::IndexOutOfRange { index: g + 1, n });
                }
                if p < 0 {
                    return Err(Error::Parse {
                        pos: 0,
                        msg: format!(
                            "negative power of {} outside a localization",
                            self.pres.gen_name(g)
                        ),
                    });
                }
                if p == 0 {
                    continue;
                }
                let factor =
                    Element::from_mono(n, power_mono(n, g, p as i32), CoeffRat::one());
                acc = self.mul(&acc, &factor)?;
            }
            total = total.add(&acc.scale(c));
        }
        Ok(total)
    }

    /// Interpret a raw sum inside the localization at `inverted`.
    pub fn raw_to_laurent(
        &self,
        raw: &RawElement,
        inverted: usize,
    ) -> Result<LaurentElement> {
        let n = self.pres.n();
        let mut total = LaurentElement::zero(n, inverted);
        for (c, word) in &raw.terms {
            let mut acc = LaurentElement::from_element(&Element::one(n), inverted);
            for &(g, p) in word {
                if g >= n {
                    return Err(Error::IndexOutOfRange { index: g + 1, n });
                }
                if p < 0 && g != inverted {
                    return Err(Error::Parse {
                        pos: 0,
                        msg: format!(
                            "negative power of {} but the localization inverts {}",
                            self.pres.gen_name(g),
                            self.pres.gen_name(inverted)
                        ),
                    });
                }
                if p == 0 {
                    continue;
                }
                let mut m = Mono::unit(n);
                m.0[g] = p as i32;
                let mut factor = LaurentElement::zero(n, inverted);
                factor.insert_add(m, CoeffRat::one());
                acc = self.laurent_mul(&acc, &factor)?;
            }
            total = total.add(&acc.scale(c));
        }
        Ok(total)
    }

    /// Reduce a word one adjacent transposition at a time. Independent of
    /// the closed-form product above; agreement between the two routes is a
    /// genuine consistency check on the presentation data.
    pub fn rewrite_word(
        &self,
        letters: &[usize],
        strategy: RewriteStrategy,
    ) -> Result<Element> {
        let n = self.pres.n();
        let mut out = Element::zero(n);
        let mut stack: Vec<(CoeffRat, Vec<usize>)> =
            vec![(CoeffRat::one(), letters.to_vec())];
        let mut steps = 0usize;
        while let Some((c, w)) = stack.pop() {
            steps += 1;
            if steps > REWRITE_STEP_LIMIT {
                return Err(Error::BoundExceeded {
                    what: "word rewriting steps".to_string(),
                    bound: REWRITE_STEP_LIMIT as u64,
                });
            }
            let redex = match strategy {
                RewriteStrategy::LeftmostFirst => {
                    (0..w.len().saturating_sub(1)).find(|&p| w[p] > w[p + 1])
                }
                RewriteStrategy::RightmostFirst => {
                    (0..w.len().saturating_sub(1)).rev().find(|&p| w[p] > w[p + 1])
                }
            };
            match redex {
                None => {
                    let mut m = Mono::unit(n);
                    for &g in &w {
                        m.0[g] += 1;
                    }
                    out.insert_add(m, c);
                }
                Some(p) => {
                    let (k, i) = (w[p], w[p + 1]);
                    let mut swapped = w.clone();
                    swapped.swap(p, p + 1);
                    stack.push((c.mul(self.pres.lambda(k, i)), swapped));
                    if let Some(d) = self.pres.delta(k, i) {
                        for (m, cm) in d.terms() {
                            let mut word = Vec::with_capacity(w.len());
                            word.extend_from_slice(&w[..p]);
                            for (g, &e) in m.0.iter().enumerate() {
                                for _ in 0..e {
                                    word.push(g);
                                }
                            }
                            word.extend_from_slice(&w[p + 2..]);
                            stack.push((c.mul(cm), word));
                        }
                    }
                }
            }
        }
        Ok(out)
    }
}

fn power_mono(n: usize, g: usize, p: i32) -> Mono {
    let mut m = Mono::unit(n);
    m.0[g] = p;
    m
}

/// Largest weighted degree of any monomial; errors on the zero element.
pub fn weighted_degree(degrees: &[u32], a: &Element) -> Result<u64> {
    a.terms()
        .map(|(m, _)| mono_weighted_degree(degrees, m))
        .max()
        .ok_or(Error::ZeroElement)
}

pub fn mono_weighted_degree(degrees: &[u32], m: &Mono) -> u64 {
    m.0.iter()
        .zip(degrees)
        .map(|(&e, &d)| e as u64 * d as u64)
        .sum()
}
