//! Seeded structural properties of the rewriting engine across the
//! built-in presentations: ring axioms, parser round trips, and torus
//! equivariance.

use ore_forge::ore::engine::Ctx;
use ore_forge::sample::random_element;
use ore_forge::{parse_element, registry, CGLPresentation, Element};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const BOUND: u32 = 32;

fn presentations() -> Vec<CGLPresentation> {
    ["quantum-plane", "quantum-weyl", "qmat2", "qaffine-3"]
        .iter()
        .map(|name| registry::builtin(name).unwrap())
        .collect()
}

#[test]
fn products_distribute_over_sums() {
    for pres in presentations() {
        let ctx = Ctx::new(&pres).with_bound(BOUND);
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..120 {
            let a = random_element(&pres, &mut rng, pres.n(), 3, 2);
            let b = random_element(&pres, &mut rng, pres.n(), 3, 2);
            let c = random_element(&pres, &mut rng, pres.n(), 3, 2);
            let left = ctx.mul(&a, &b.add(&c)).unwrap();
            let right = ctx.mul(&a, &b).unwrap().add(&ctx.mul(&a, &c).unwrap());
            assert_eq!(left, right, "left distributivity in {}", pres.name());
            let left = ctx.mul(&a.add(&b), &c).unwrap();
            let right = ctx.mul(&a, &c).unwrap().add(&ctx.mul(&b, &c).unwrap());
            assert_eq!(left, right, "right distributivity in {}", pres.name());
        }
    }
}

#[test]
fn unit_and_zero_behave() {
    for pres in presentations() {
        let ctx = Ctx::new(&pres).with_bound(BOUND);
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        let one = Element::one(pres.n());
        let zero = Element::zero(pres.n());
        for _ in 0..60 {
            let a = random_element(&pres, &mut rng, pres.n(), 4, 3);
            assert_eq!(ctx.mul(&a, &one).unwrap(), a);
            assert_eq!(ctx.mul(&one, &a).unwrap(), a);
            assert!(ctx.mul(&a, &zero).unwrap().is_zero());
            assert_eq!(a.add(&a.neg()), zero);
        }
    }
}

#[test]
fn printed_elements_parse_back_unchanged() {
    for pres in presentations() {
        let ctx = Ctx::new(&pres).with_bound(BOUND);
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..100 {
            let a = random_element(&pres, &mut rng, pres.n(), 4, 3);
            let text = a.to_expr_string(pres.gen_names());
            let raw = parse_element(&text, pres.gen_names())
                .unwrap_or_else(|err| panic!("reparse `{text}`: {err}"));
            let back = ctx.normal_form(&raw).unwrap();
            assert_eq!(back, a, "round trip through `{text}`");
        }
    }
}

#[test]
fn torus_action_is_multiplicative() {
    for pres in presentations() {
        let ctx = Ctx::new(&pres).with_bound(BOUND);
        let mut rng = ChaCha8Rng::seed_from_u64(24);
        for _ in 0..60 {
            let a = random_element(&pres, &mut rng, pres.n(), 3, 2);
            let b = random_element(&pres, &mut rng, pres.n(), 3, 2);
            let j = rng.gen_range(0..pres.n());
            let h = &pres.h(j).0;
            let product_then_act = ctx.apply_torus(h, &ctx.mul(&a, &b).unwrap()).unwrap();
            let act_then_product = ctx
                .mul(
                    &ctx.apply_torus(h, &a).unwrap(),
                    &ctx.apply_torus(h, &b).unwrap(),
                )
                .unwrap();
            assert_eq!(product_then_act, act_then_product, "in {}", pres.name());
        }
    }
}

#[test]
fn torus_element_h_j_realizes_sigma_j() {
    for pres in presentations() {
        let ctx = Ctx::new(&pres).with_bound(BOUND);
        let mut rng = ChaCha8Rng::seed_from_u64(25);
        for _ in 0..60 {
            let j = rng.gen_range(1..pres.n());
            let a = random_element(&pres, &mut rng, j, 3, 2);
            let via_sigma = ctx.apply_sigma(j, &a, 1).unwrap();
            let via_torus = ctx.apply_torus(&pres.h(j).0, &a).unwrap();
            assert_eq!(via_sigma, via_torus, "level {j} in {}", pres.name());
        }
    }
}

#[test]
fn derivations_satisfy_the_twisted_product_rule() {
    for pres in presentations() {
        let ctx = Ctx::new(&pres).with_bound(BOUND);
        let mut rng = ChaCha8Rng::seed_from_u64(26);
        for _ in 0..60 {
            let j = rng.gen_range(1..pres.n());
            let a = random_element(&pres, &mut rng, j, 3, 2);
            let b = random_element(&pres, &mut rng, j, 3, 2);
            let product = ctx.mul(&a, &b).unwrap();
            let direct = ctx.apply_delta(j, &product).unwrap();
            let assembled = ctx
                .mul(&ctx.apply_sigma(j, &a, 1).unwrap(), &ctx.apply_delta(j, &b).unwrap())
                .unwrap()
                .add(&ctx.mul(&ctx.apply_delta(j, &a).unwrap(), &b).unwrap());
            assert_eq!(direct, assembled, "level {j} in {}", pres.name());
        }
    }
}

#[test]
fn monomial_weights_add_under_products() {
    for pres in presentations() {
        let ctx = Ctx::new(&pres).with_bound(BOUND);
        let mut rng = ChaCha8Rng::seed_from_u64(27);
        for _ in 0..60 {
            let a = random_element(&pres, &mut rng, pres.n(), 3, 1);
            let b = random_element(&pres, &mut rng, pres.n(), 3, 1);
            let wa = pres.eigen_weight(&a).unwrap();
            let wb = pres.eigen_weight(&b).unwrap();
            let product = ctx.mul(&a, &b).unwrap();
            if product.is_zero() {
                continue;
            }
            let wp = pres.eigen_weight(&product).unwrap();
            let sum: Vec<i64> = wa.0.iter().zip(&wb.0).map(|(x, y)| x + y).collect();
            assert_eq!(wp.0, sum, "in {}", pres.name());
        }
    }
}
