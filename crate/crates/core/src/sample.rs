//! Seeded random elements for property-based checks.

use crate::coeff::CoeffRat;
use crate::ore::{Element, Mono};
use crate::presentation::CGLPresentation;
use rand::Rng;

/// A small random coefficient: a nonzero integer times a power of q, with an
/// occasional (q - 1) factor or divisor so fraction arithmetic gets exercised.
pub fn random_coeff(rng: &mut impl Rng) -> CoeffRat {
    let k: i64 = *[-3, -2, -1, 1, 2, 3].as_slice().get(rng.gen_range(0..6)).unwrap();
    let e: i64 = rng.gen_range(-2..=2);
    let mut c = CoeffRat::from_int(k).mul(&CoeffRat::q_pow(e));
    let q_minus_one = CoeffRat::q().sub(&CoeffRat::one());
    match rng.gen_range(0..4) {
        0 => c = c.mul(&q_minus_one),
        1 => c = c.div(&q_minus_one).expect("q - 1 is nonzero"),
        _ => {}
    }
    c
}

/// A random nonzero element supported on the first `level` generators, with
/// total degree at most `max_degree` and at most `max_terms` terms.
pub fn random_element(
    pres: &CGLPresentation,
    rng: &mut impl Rng,
    level: usize,
    max_degree: u32,
    max_terms: usize,
) -> Element {
    let n = pres.n();
    let level = level.min(n).max(1);
    for _ in 0..8 {
        let mut out = Element::zero(n);
        let terms = rng.gen_range(1..=max_terms.max(1));
        for _ in 0..terms {
            let degree = rng.gen_range(0..=max_degree);
            let mut exponents = vec![0i32; n];
            for _ in 0..degree {
                exponents[rng.gen_range(0..level)] += 1;
            }
            out.insert_add(Mono(exponents), random_coeff(rng));
        }
        if !out.is_zero() {
            return out;
        }
    }
    Element::one(n)
}
