//! Normal elements, their certificates, and the inner fractions they induce.
//!
//! An element x is normal when xR = Rx. Here that is witnessed concretely:
//! for every generator g there is a conjugation element p with x g = p x,
//! found by an exact linear solve whose candidate monomials are bounded
//! through the degree filtration (in the associated graded algebra degrees
//! add, so the conjugation cannot exceed the degree difference). The module
//! also builds the canonical normal element theta(a) X^s attached to a
//! normal eigenvector of the coefficient subalgebra, and the fraction d that
//! realizes the top derivation as the inner map r -> d r - sigma(r) d.

use crate::cauchon::cauchon_theta;
use crate::coeff::CoeffRat;
use crate::error::{Error, Result};
use crate::grfilt;
use crate::linalg::{solve, Matrix};
use crate::ore::engine::{weighted_degree, Ctx};
use crate::ore::{Element, LaurentElement, Mono};
use crate::presentation::{CGLPresentation, Weight};
use serde::Serialize;
use std::collections::BTreeSet;

/// Proof data that an element is normal: one conjugation identity per
/// generator, the torus weight, and, when the conjugation action matches an
/// integer-power point of the torus, that point.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalCertificate {
    pub element: Element,
    /// conjugation[i] is the p with element * x_i = p * element.
    pub conjugation: Vec<Element>,
    pub eigen_weight: Weight,
    /// Exponents a with h = (q^{a_1}, ..., q^{a_d}) acting the way
    /// conjugation by the element does, when such a point exists.
    pub torus_witness: Option<Vec<i64>>,
}

/// Serializable view of a certificate: expression strings plus the
/// conjugation table.
#[derive(Debug, Clone, Serialize)]
pub struct CertificateSummary {
    pub element: String,
    pub eigen_weight: Vec<i64>,
    pub conjugation: Vec<ConjugationEntry>,
    pub torus_witness: Option<Vec<i64>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConjugationEntry {
    pub generator: String,
    pub value: String,
}

impl NormalCertificate {
    pub fn summary(&self, names: &[String]) -> CertificateSummary {
        CertificateSummary {
            element: self.element.to_expr_string(names),
            eigen_weight: self.eigen_weight.0.clone(),
            conjugation: self
                .conjugation
                .iter()
                .enumerate()
                .map(|(i, p)| ConjugationEntry {
                    generator: names[i].clone(),
                    value: p.to_expr_string(names),
                })
                .collect(),
            torus_witness: self.torus_witness.clone(),
        }
    }
}

/// den^-1 * num in the fraction field of the coefficient subalgebra, with
/// the denominator certified normal there so it can be cleared through the
/// conjugation table. Equality is literal equality of numerator, denominator,
/// and certificate; fractions over different denominators are not compared.
#[derive(Debug, Clone, PartialEq)]
pub struct FractionElement {
    den_cert: NormalCertificate,
    num: Element,
}

#[derive(Debug, Clone, Serialize)]
pub struct FractionSummary {
    pub den: String,
    pub num: String,
}

impl FractionElement {
    pub fn from_parts(den_cert: NormalCertificate, num: Element) -> Result<Self> {
        if den_cert.element.n() != num.n() {
            return Err(Error::BadPresentation(
                "fraction numerator and denominator live over different generator counts".into(),
            ));
        }
        Ok(FractionElement { den_cert, num })
    }

    pub fn den(&self) -> &Element {
        &self.den_cert.element
    }

    pub fn num(&self) -> &Element {
        &self.num
    }

    pub fn den_certificate(&self) -> &NormalCertificate {
        &self.den_cert
    }

    pub fn to_expr_string(&self, names: &[String]) -> String {
        format!(
            "({})^-1 * ({})",
            self.den_cert.element.to_expr_string(names),
            self.num.to_expr_string(names)
        )
    }

    pub fn summary(&self, names: &[String]) -> FractionSummary {
        FractionSummary {
            den: self.den_cert.element.to_expr_string(names),
            num: self.num.to_expr_string(names),
        }
    }
}

/// Which side the cofactor sits on in the hypothesis delta(c) = c*e versus
/// delta(c) = e*c.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProductSide {
    Left,
    Right,
}

/// Outcome of the nilpotence consistency check: the hypothesis either fails,
/// or holds with delta(c) = 0 as the theory demands, or holds with
/// delta(c) != 0, which would contradict the theory and point at an engine
/// defect.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SkewVerdict {
    Consistent,
    HypothesisNotSatisfied,
    Counterexample,
}

fn resized(e: &Element, n: usize) -> Element {
    let mut out = Element::zero(n);
    for (m, c) in e.terms() {
        let mut v = vec![0i32; n];
        for (k, &ex) in m.0.iter().enumerate() {
            if ex != 0 {
                debug_assert!(k < n, "resizing would drop a used generator");
                v[k] = ex;
            }
        }
        out.insert_add(Mono(v), c.clone());
    }
    out
}

fn candidate_monomials(degrees: &[u32], cap: u64) -> Vec<Mono> {
    fn rec(degrees: &[u32], pos: usize, left: u64, cur: &mut Vec<i32>, out: &mut Vec<Mono>) {
        if pos == degrees.len() {
            out.push(Mono(cur.clone()));
            return;
        }
        let step = degrees[pos] as u64;
        for e in 0..=(left / step) {
            cur[pos] = e as i32;
            rec(degrees, pos + 1, left - e * step, cur, out);
        }
        cur[pos] = 0;
    }
    let mut out = Vec::new();
    let mut cur = vec![0i32; degrees.len()];
    rec(degrees, 0, cap, &mut cur, &mut out);
    out
}

/// Solve target = sum_m c_m * products[m] exactly; on success return the
/// combination sum_m c_m * monomial_m as an element.
fn solve_combination(
    n: usize,
    candidates: &[Mono],
    products: &[Element],
    target: &Element,
) -> Result<Option<Element>> {
    let mut rows: BTreeSet<Mono> = target.terms().map(|(m, _)| m.clone()).collect();
    for p in products {
        rows.extend(p.terms().map(|(m, _)| m.clone()));
    }
    let row_index: Vec<&Mono> = rows.iter().collect();
    let mut matrix = Matrix::zero(row_index.len(), products.len());
    for (c, p) in products.iter().enumerate() {
        for (r, m) in row_index.iter().enumerate() {
            let coeff = p.coefficient(m);
            if !coeff.is_zero() {
                matrix.set(r, c, coeff);
            }
        }
    }
    let rhs: Vec<CoeffRat> = row_index.iter().map(|m| target.coefficient(m)).collect();
    let Some(solution) = solve(&matrix, &rhs)? else {
        return Ok(None);
    };
    let mut combo = Element::zero(n);
    for (m, c) in candidates.iter().zip(solution) {
        if !c.is_zero() {
            combo.insert_add(m.clone(), c);
        }
    }
    Ok(Some(combo))
}

/// When every conjugation is a q-power rescaling of its generator, look for
/// integer torus exponents a with q^{<w_i, a>} matching each rescaling. The
/// result is observational data about whether the conjugation action comes
/// from a point of the torus.
fn integer_torus_witness(pres: &CGLPresentation, conjugation: &[Element]) -> Result<Option<Vec<i64>>> {
    let n = pres.n();
    let d = pres.d();
    let mut targets = Vec::with_capacity(n);
    for (i, p) in conjugation.iter().enumerate() {
        if p.term_count() != 1 {
            return Ok(None);
        }
        let scalar = p.coefficient(&Mono::generator(n, i));
        match scalar.as_signed_q_power() {
            Some((false, k)) => targets.push(k),
            _ => return Ok(None),
        }
    }
    let mut matrix = Matrix::zero(n, d);
    for i in 0..n {
        for t in 0..d {
            matrix.set(i, t, CoeffRat::from_int(pres.weight(i).0[t]));
        }
    }
    let rhs: Vec<CoeffRat> = targets.iter().map(|&k| CoeffRat::from_int(k)).collect();
    let Some(solution) = solve(&matrix, &rhs)? else {
        return Ok(None);
    };
    let mut witness = Vec::with_capacity(d);
    for c in solution {
        let Some(r) = c.as_rational() else {
            return Ok(None);
        };
        if !r.is_integer() {
            return Ok(None);
        }
        let Ok(v) = i64::try_from(r.to_integer()) else {
            return Ok(None);
        };
        witness.push(v);
    }
    Ok(Some(witness))
}

/// Decide normality of x by exact linear algebra: for each generator g solve
/// x g = p x with p supported on monomials of weighted degree at most
/// deg(x g) - deg(x), and symmetrically check g x lands in x R. Succeeds with
/// the full conjugation table or fails naming the first obstructing
/// generator.
pub fn verify_normal(
    pres: &CGLPresentation,
    x: &Element,
    bound: u32,
) -> Result<NormalCertificate> {
    if x.is_zero() {
        return Err(Error::ZeroElement);
    }
    let eigen_weight = pres.eigen_weight(x)?;
    let degrees = grfilt::filtration_for(pres)?;
    let ds = degrees.degrees();
    let n = pres.n();
    let ctx = Ctx::new(pres);
    let wx = weighted_degree(ds, x)?;
    let mut conjugation = Vec::with_capacity(n);
    for g in 0..n {
        let gen = Element::generator(n, g);
        let xg = ctx.mul(x, &gen)?;
        let cap = weighted_degree(ds, &xg)?.saturating_sub(wx);
        if cap > bound as u64 {
            return Err(Error::BoundExceeded {
                what: format!("conjugation degree at generator {}", pres.gen_name(g)),
                bound: bound as u64,
            });
        }
        let candidates = candidate_monomials(ds, cap);
        let right_products: Vec<Element> = candidates
            .iter()
            .map(|m| ctx.mul(&Element::from_mono(n, m.clone(), CoeffRat::one()), x))
            .collect::<Result<_>>()?;
        let Some(p) = solve_combination(n, &candidates, &right_products, &xg)? else {
            return Err(Error::NotNormal {
                gen: pres.gen_name(g).to_string(),
            });
        };
        let gx = ctx.mul(&gen, x)?;
        let left_products: Vec<Element> = candidates
            .iter()
            .map(|m| ctx.mul(x, &Element::from_mono(n, m.clone(), CoeffRat::one())))
            .collect::<Result<_>>()?;
        if solve_combination(n, &candidates, &left_products, &gx)?.is_none() {
            return Err(Error::NotNormal {
                gen: pres.gen_name(g).to_string(),
            });
        }
        conjugation.push(p);
    }
    let torus_witness = integer_torus_witness(pres, &conjugation)?;
    Ok(NormalCertificate {
        element: x.clone(),
        conjugation,
        eigen_weight,
        torus_witness,
    })
}

/// Build the canonical normal element theta(a) X^s out of a normal
/// eigenvector a of the coefficient subalgebra, where X is the top generator
/// and s is the nilpotence order of the top derivation on a. The returned
/// certificate is re-derived independently, and the defining relation
/// x X = eta^-1 X x with eta = chi_a(h_top) is checked on the way.
pub fn construct_normal(
    pres: &CGLPresentation,
    a: &Element,
    bound: u32,
) -> Result<NormalCertificate> {
    let n = pres.n();
    if n < 2 {
        return Err(Error::IndexOutOfRange { index: 2, n });
    }
    let top = n - 1;
    if a.is_zero() {
        return Err(Error::ZeroElement);
    }
    if !a.within_level(top) {
        return Err(Error::AboveLevel {
            gen: pres.gen_name(top).to_string(),
            level: top,
        });
    }
    let sub = pres.subalgebra(top)?;
    verify_normal(&sub, &resized(a, top), bound)?;

    let ctx = Ctx::new(pres).with_bound(bound);
    let s = ctx.delta_nilpotence_order(top, a)?;
    let theta = cauchon_theta(pres, top, a, bound)?;
    let x = ctx
        .laurent_mul(
            &theta.value,
            &LaurentElement::inverted_power(n, top, s as i32),
        )?
        .to_element()?;

    let weight_a = pres.eigen_weight(a)?;
    let weight_x = pres.eigen_weight(&x)?;
    let mut expected = weight_a.clone();
    for (t, w) in expected.0.iter_mut().zip(&pres.weight(top).0) {
        *t += s as i64 * w;
    }
    if weight_x != expected {
        return Err(Error::IdentityViolated {
            what: format!(
                "weight of theta(a) X^s is {:?}, expected weight(a) + s*weight(X) = {:?}",
                weight_x.0, expected.0
            ),
        });
    }

    let certificate = verify_normal(pres, &x, bound)?;
    let eta = pres.chi(&pres.h(top).0, &weight_a)?;
    let expected_conj = Element::generator(n, top).scale(&eta.inv()?);
    if certificate.conjugation[top] != expected_conj {
        return Err(Error::IdentityViolated {
            what: format!(
                "x * {g} should conjugate by eta^-1 {g} with eta = {eta}",
                g = pres.gen_name(top)
            ),
        });
    }
    Ok(certificate)
}

fn subalgebra_fraction_parts(
    pres: &CGLPresentation,
    a: &Element,
    bound: u32,
) -> Result<(CGLPresentation, NormalCertificate)> {
    let n = pres.n();
    if n < 2 {
        return Err(Error::IndexOutOfRange { index: 2, n });
    }
    let top = n - 1;
    if a.is_zero() {
        return Err(Error::ZeroElement);
    }
    if !a.within_level(top) {
        return Err(Error::AboveLevel {
            gen: pres.gen_name(top).to_string(),
            level: top,
        });
    }
    let sub = pres.subalgebra(top)?;
    let cert = verify_normal(&sub, &resized(a, top), bound)?;
    Ok((sub, cert))
}

/// The fraction d = eta^-1 (lambda^s - 1)^-1 a^-1 delta(a) built from a
/// normal eigenvector a of the coefficient subalgebra on which the top
/// derivation does not vanish. Also asserts the companion identity
/// delta(a) a = eta lambda^s a delta(a) exactly.
pub fn inner_d_from_normal(
    pres: &CGLPresentation,
    a: &Element,
    bound: u32,
) -> Result<FractionElement> {
    let (_, den_cert) = subalgebra_fraction_parts(pres, a, bound)?;
    let n = pres.n();
    let top = n - 1;
    let ctx = Ctx::new(pres).with_bound(bound);
    let s = ctx.delta_nilpotence_order(top, a)?;
    if s == 0 {
        return Err(Error::DerivationVanishes);
    }
    let lambda = pres.q_j(top).clone();
    let eta = pres.chi(&pres.h(top).0, &pres.eigen_weight(a)?)?;
    let delta_a = ctx.apply_delta(top, a)?;

    let factor = eta.mul(&lambda.pow(s as i64)?);
    let lhs = ctx.mul(&delta_a, a)?;
    let rhs = ctx.mul(a, &delta_a)?.scale(&factor);
    if lhs != rhs {
        return Err(Error::IdentityViolated {
            what: "delta(a) a = eta lambda^s a delta(a)".into(),
        });
    }

    let scalar = eta.inv()?.mul(&lambda.pow(s as i64)?.sub(&CoeffRat::one()).inv()?);
    let num = resized(&delta_a.scale(&scalar), top);
    FractionElement::from_parts(den_cert, num)
}

/// The fraction d = (lambda - 1)(1 - lambda^n)^-1 a^-1 c read off a monic
/// degree-n polynomial X^n + a^-1 c X^{n-1} + ... in the top generator,
/// given its leading coefficient a and sub-leading coefficient c.
pub fn inner_d_from_monic(
    pres: &CGLPresentation,
    a: &Element,
    c: &Element,
    n_pow: u32,
    bound: u32,
) -> Result<FractionElement> {
    let (_, den_cert) = subalgebra_fraction_parts(pres, a, bound)?;
    let n = pres.n();
    let top = n - 1;
    if !c.within_level(top) {
        return Err(Error::AboveLevel {
            gen: pres.gen_name(top).to_string(),
            level: top,
        });
    }
    let lambda = pres.q_j(top).clone();
    let lambda_n = lambda.pow(n_pow as i64)?;
    if lambda_n.is_one() {
        return Err(Error::DegenerateBase { m: n_pow });
    }
    let scalar = lambda
        .sub(&CoeffRat::one())
        .mul(&CoeffRat::one().sub(&lambda_n).inv()?);
    let num = resized(&c.scale(&scalar), top);
    FractionElement::from_parts(den_cert, num)
}

/// Check that the top derivation is inner on the coefficient subalgebra via
/// d: for every generator r below the top, delta(r) = d r - sigma(r) d after
/// clearing the denominator through its conjugation table. Exact in the
/// tower; no localization is performed.
pub fn verify_inner(pres: &CGLPresentation, d: &FractionElement) -> Result<bool> {
    let n = pres.n();
    if n < 2 {
        return Err(Error::IndexOutOfRange { index: 2, n });
    }
    let top = n - 1;
    if d.den().n() != top {
        return Err(Error::BadPresentation(format!(
            "fraction lives over {} generators, expected the {}-generator subalgebra",
            d.den().n(),
            top
        )));
    }
    let ctx = Ctx::new(pres);
    let den = resized(d.den(), n);
    let num = resized(d.num(), n);
    for i in 0..top {
        let gen = Element::generator(n, i);
        let delta_r = match pres.delta(top, i) {
            Some(v) => v.clone(),
            None => Element::zero(n),
        };
        let lhs = ctx.mul(&den, &delta_r)?;
        let p_i = resized(&d.den_certificate().conjugation[i], n);
        let rhs = ctx
            .mul(&num, &gen)?
            .sub(&ctx.mul(&p_i, &num)?.scale(pres.lambda(top, i)));
        if lhs != rhs {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Consistency check for the nilpotence argument: when c and e live below
/// level j, are nilpotent under delta_j, and satisfy delta(c) = c e (or e c,
/// per side), the theory forces delta(c) = 0. Reports whether the hypothesis
/// held and, if it did, whether the forced conclusion came out.
pub fn skew_nilpotence_check(
    pres: &CGLPresentation,
    j: usize,
    c: &Element,
    e: &Element,
    side: ProductSide,
    bound: u32,
) -> Result<SkewVerdict> {
    let n = pres.n();
    if j == 0 || j >= n {
        return Err(Error::IndexOutOfRange { index: j, n });
    }
    for (what, v) in [("c", c), ("e", e)] {
        if !v.within_level(j) {
            return Err(Error::AboveLevel {
                gen: format!("{what} at {}", pres.gen_name(j)),
                level: j,
            });
        }
    }
    let ctx = Ctx::new(pres).with_bound(bound);
    for v in [c, e] {
        if !v.is_zero() {
            ctx.delta_nilpotence_order(j, v)?;
        }
    }
    let delta_c = ctx.apply_delta(j, c)?;
    let hypothesis = match side {
        ProductSide::Right => ctx.mul(c, e)?,
        ProductSide::Left => ctx.mul(e, c)?,
    };
    if delta_c != hypothesis {
        Ok(SkewVerdict::HypothesisNotSatisfied)
    } else if delta_c.is_zero() {
        Ok(SkewVerdict::Consistent)
    } else {
        Ok(SkewVerdict::Counterexample)
    }
}
