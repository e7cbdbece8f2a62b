//! Elements of an iterated skew polynomial tower in PBW normal form.
//!
//! A monomial is an exponent vector over the ordered generators
//! x_1 < x_2 < ... < x_N; an element is a finite sum of monomials with
//! coefficients in Q(q). `LaurentElement` extends this with one designated
//! generator allowed to carry negative exponents, which is exactly the
//! localization the deleting-derivations machinery works in.
//!
//! All data here is immutable once built; products and rewrites live in
//! [`engine`].

pub mod engine;

use std::collections::BTreeMap;

use crate::coeff::CoeffRat;
use crate::error::{Error, Result};

/// Exponent vector of a PBW monomial. Entries are nonnegative in `Element`
/// and may be negative at the inverted index in `LaurentElement`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Mono(pub Vec<i32>);

impl Mono {
    pub fn unit(n: usize) -> Self {
        Mono(vec![0; n])
    }

    pub fn generator(n: usize, idx: usize) -> Self {
        let mut e = vec![0; n];
        e[idx] = 1;
        Mono(e)
    }

    pub fn is_unit(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn total_degree(&self) -> i64 {
        self.0.iter().map(|&e| e as i64).sum()
    }

    /// Exponents below `level` as a standalone monomial (rest zeroed).
    pub fn low_part(&self, level: usize) -> Mono {
        let mut e = vec![0; self.0.len()];
        e[..level].copy_from_slice(&self.0[..level]);
        Mono(e)
    }

    pub fn is_low(&self, level: usize) -> bool {
        self.0[level..].iter().all(|&e| e == 0)
    }
}

/// Sum of PBW monomials with nonzero coefficients, the normal form of an
/// element of the tower. Keys are unique and never map to zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Element {
    n: usize,
    terms: BTreeMap<Mono, CoeffRat>,
}

impl Element {
    pub fn zero(n: usize) -> Self {
        Element { n, terms: BTreeMap::new() }
    }

    pub fn one(n: usize) -> Self {
        Element::constant(n, CoeffRat::one())
    }

    pub fn constant(n: usize, c: CoeffRat) -> Self {
        let mut e = Element::zero(n);
        e.insert_add(Mono::unit(n), c);
        e
    }

    pub fn generator(n: usize, idx: usize) -> Self {
        let mut e = Element::zero(n);
        e.insert_add(Mono::generator(n, idx), CoeffRat::one());
        e
    }

    pub fn from_mono(n: usize, m: Mono, c: CoeffRat) -> Self {
        let mut e = Element::zero(n);
        e.insert_add(m, c);
        e
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &CoeffRat)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Mono) -> CoeffRat {
        self.terms.get(m).cloned().unwrap_or_else(CoeffRat::zero)
    }

    pub fn constant_part(&self) -> CoeffRat {
        self.coefficient(&Mono::unit(self.n))
    }

    pub fn insert_add(&mut self, m: Mono, c: CoeffRat) {
        if c.is_zero() {
            return;
        }
        debug_assert!(m.0.len() == self.n && m.0.iter().all(|&e| e >= 0));
        match self.terms.get_mut(&m) {
            Some(existing) => {
                let sum = existing.add(&c);
                if sum.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.n, other.n);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.insert_add(m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        Element {
            n: self.n,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.neg())).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &CoeffRat) -> Self {
        if c.is_zero() {
            return Element::zero(self.n);
        }
        Element {
            n: self.n,
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k.mul(c))).collect(),
        }
    }

    /// Largest generator index appearing with nonzero exponent.
    pub fn max_index(&self) -> Option<usize> {
        self.terms
            .keys()
            .filter_map(|m| (0..self.n).rev().find(|&i| m.0[i] != 0))
            .max()
    }

    /// True when every monomial lives in the subalgebra on x_1..x_level.
    pub fn within_level(&self, level: usize) -> bool {
        self.terms.keys().all(|m| m.is_low(level))
    }

    /// Right-multiply by x_idx^k; sound only when nothing above `idx`
    /// occurs, so the factor commutes into place without rewriting.
    pub fn mul_mono_exponent(&self, idx: usize, k: i32) -> Self {
        debug_assert!(self.within_level(idx + 1));
        let mut out = Element::zero(self.n);
        for (m, c) in &self.terms {
            let mut e = m.clone();
            e.0[idx] += k;
            out.insert_add(e, c.clone());
        }
        out
    }

    pub fn max_total_degree(&self) -> Option<i64> {
        self.terms.keys().map(|m| m.total_degree()).max()
    }
}

/// Element of the localization inverting one generator: finite sum of
/// monomials whose exponent at `inverted` ranges over all integers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaurentElement {
    n: usize,
    inverted: usize,
    terms: BTreeMap<Mono, CoeffRat>,
}

impl LaurentElement {
    pub fn zero(n: usize, inverted: usize) -> Self {
        LaurentElement { n, inverted, terms: BTreeMap::new() }
    }

    pub fn from_element(e: &Element, inverted: usize) -> Self {
        LaurentElement {
            n: e.n,
            inverted,
            terms: e.terms.clone(),
        }
    }

    /// X^k for the inverted generator, any integer k.
    pub fn inverted_power(n: usize, inverted: usize, k: i32) -> Self {
        let mut m = Mono::unit(n);
        m.0[inverted] = k;
        let mut out = LaurentElement::zero(n, inverted);
        out.insert_add(m, CoeffRat::one());
        out
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn inverted(&self) -> usize {
        self.inverted
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &CoeffRat)> {
        self.terms.iter()
    }

    pub fn insert_add(&mut self, m: Mono, c: CoeffRat) {
        if c.is_zero() {
            return;
        }
        debug_assert!(m.0.len() == self.n);
        debug_assert!(m
            .0
            .iter()
            .enumerate()
            .all(|(i, &e)| e >= 0 || i == self.inverted));
        match self.terms.get_mut(&m) {
            Some(existing) => {
                let sum = existing.add(&c);
                if sum.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.inverted, other.inverted);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.insert_add(m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        LaurentElement {
            n: self.n,
            inverted: self.inverted,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.neg())).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &CoeffRat) -> Self {
        if c.is_zero() {
            return LaurentElement::zero(self.n, self.inverted);
        }
        LaurentElement {
            n: self.n,
            inverted: self.inverted,
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k.mul(c))).collect(),
        }
    }

    /// Smallest exponent of the inverted generator across all terms.
    pub fn min_inverted_exponent(&self) -> Option<i32> {
        self.terms.keys().map(|m| m.0[self.inverted]).min()
    }

    /// Reinterpret as a polynomial element; fails if any term still has a
    /// negative exponent.
    pub fn to_element(&self) -> Result<Element> {
        for m in self.terms.keys() {
            if m.0[self.inverted] < 0 {
                return Err(Error::ZeroToNegativePower);
            }
        }
        Ok(Element { n: self.n, terms: self.terms.clone() })
    }

    /// Right-multiply by X^k. Only valid while no generator above the
    /// inverted one occurs, so the power slides in without commutation.
    pub(crate) fn shift_inverted(&self, k: i32) -> Self {
        debug_assert!(self
            .terms
            .keys()
            .all(|m| m.0[self.inverted + 1..].iter().all(|&e| e == 0)));
        let mut out = LaurentElement::zero(self.n, self.inverted);
        for (m, c) in &self.terms {
            let mut e = m.clone();
            e.0[self.inverted] += k;
            out.insert_add(e, c.clone());
        }
        out
    }
}

/// Unreduced input to the rewriting engine: a formal sum of coefficients
/// times words in the generators, in whatever order the source wrote them.
#[derive(Debug, Clone, Default)]
pub struct RawElement {
    /// Each entry is (coefficient, word); a word lists (generator index,
    /// power) factors left to right.
    pub terms: Vec<(CoeffRat, Vec<(usize, i64)>)>,
}

/// Render a term's word part, PBW style: "x1^2*x3".
fn word_string(m: &Mono, names: &[String]) -> String {
    let mut parts = Vec::new();
    for (i, &e) in m.0.iter().enumerate() {
        if e == 0 {
            continue;
        }
        if e == 1 {
            parts.push(names[i].clone());
        } else {
            parts.push(format!("{}^{}", names[i], e));
        }
    }
    parts.join("*")
}

fn sum_string<'a, I>(terms: I, names: &[String]) -> String
where
    I: Iterator<Item = (&'a Mono, &'a CoeffRat)>,
{
    let mut out = String::new();
    let mut first = true;
    for (m, c) in terms {
        let (negative, factor) = c.as_product_factor();
        let word = word_string(m, names);
        let body = match (factor.is_empty(), word.is_empty()) {
            (true, true) => "1".to_string(),
            (true, false) => word,
            (false, true) => factor,
            (false, false) => format!("{}*{}", factor, word),
        };
        if first {
            if negative {
                out.push('-');
            }
            first = false;
        } else if negative {
            out.push_str(" - ");
        } else {
            out.push_str(" + ");
        }
        out.push_str(&body);
    }
    if first {
        out.push('0');
    }
    out
}

impl Element {
    /// Canonical expression string; terms in descending monomial order so
    /// the output is stable and re-parses to the same element.
    pub fn to_expr_string(&self, names: &[String]) -> String {
        sum_string(self.terms.iter().rev(), names)
    }
}

impl LaurentElement {
    pub fn to_expr_string(&self, names: &[String]) -> String {
        sum_string(self.terms.iter().rev(), names)
    }
}
