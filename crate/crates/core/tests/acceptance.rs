//! End-to-end acceptance checks, one test per criterion.
//!
//! Each test prints a single `criterion N: pass` or `criterion N: fail`
//! line (visible with `--nocapture`) so the whole suite doubles as a
//! checklist.

use ore_forge::cauchon::{self, DeletionStep};
use ore_forge::grfilt::{self, FiltrationDegrees};
use ore_forge::normal::{self, ProductSide, SkewVerdict};
use ore_forge::ore::engine::Ctx;
use ore_forge::presentation::verify_confluence;
use ore_forge::qcalc;
use ore_forge::sample::random_element;
use ore_forge::spectra::{self, FinitePoset};
use ore_forge::{parse_coeff, parse_element, registry, CGLPresentation, CoeffRat, Element, Error};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::panic::{catch_unwind, resume_unwind};
use std::process::Command;

const BOUND: u32 = 32;

fn criterion(number: usize, name: &str, body: impl FnOnce() + std::panic::UnwindSafe) {
    match catch_unwind(body) {
        Ok(()) => println!("criterion {number} ({name}): pass"),
        Err(payload) => {
            println!("criterion {number} ({name}): fail");
            resume_unwind(payload);
        }
    }
}

fn builtin(name: &str) -> CGLPresentation {
    registry::builtin(name).expect("registry name")
}

fn elem(pres: &CGLPresentation, text: &str) -> Element {
    let raw = parse_element(text, pres.gen_names()).expect("expression parses");
    Ctx::new(pres).normal_form(&raw).expect("normal form")
}

fn cli() -> Command {
    Command::new(env!("CARGO_BIN_EXE_ore-forge"))
}

fn sample_presentations() -> Vec<CGLPresentation> {
    ["quantum-plane", "quantum-weyl", "qmat2", "qaffine-4"]
        .iter()
        .map(|name| builtin(name))
        .collect()
}

#[test]
fn criterion_01_presentation_checks() {
    criterion(1, "presentation checks and exit codes", || {
        let mut names: Vec<String> = ["quantum-plane", "quantum-weyl", "qmat2"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        for n in 1..=6 {
            names.push(format!("qaffine-{n}"));
        }
        for name in &names {
            let output = cli().args(["check", name]).output().expect("spawn");
            assert_eq!(
                output.status.code(),
                Some(0),
                "check {name} should pass: {}",
                String::from_utf8_lossy(&output.stdout)
            );
        }
        for (name, needle) in [
            ("invalid-unity", "q_2 = 1"),
            ("invalid-nonnilpotent", "no power up to"),
            ("invalid-weights", "weight"),
        ] {
            let output = cli().args(["check", name]).output().expect("spawn");
            assert_eq!(output.status.code(), Some(1), "check {name} should fail");
            let stdout = String::from_utf8_lossy(&output.stdout);
            assert!(
                stdout.contains(needle),
                "diagnostic for {name} should mention {needle}: {stdout}"
            );
        }
        let output = cli().args(["check", "no-such-example"]).output().unwrap();
        assert_eq!(output.status.code(), Some(2));
        let output = cli()
            .args(["grade", "qmat2", "--bound", "4"])
            .output()
            .unwrap();
        assert_eq!(output.status.code(), Some(3));
    });
}

#[test]
fn criterion_02_product_associativity() {
    criterion(2, "product associativity and overlaps", || {
        for pres in sample_presentations() {
            let ctx = Ctx::new(&pres).with_bound(BOUND);
            let mut rng = ChaCha8Rng::seed_from_u64(02_02);
            for _ in 0..200 {
                let a = random_element(&pres, &mut rng, pres.n(), 4, 2);
                let b = random_element(&pres, &mut rng, pres.n(), 4, 2);
                let c = random_element(&pres, &mut rng, pres.n(), 4, 2);
                let left = ctx.mul(&ctx.mul(&a, &b).unwrap(), &c).unwrap();
                let right = ctx.mul(&a, &ctx.mul(&b, &c).unwrap()).unwrap();
                assert_eq!(left, right, "associativity in {}", pres.name());
            }
            let report = verify_confluence(&pres, 3, 11, 16).unwrap();
            assert!(report.passed(), "overlap checks in {}:\n{report}", pres.name());
        }
    });
}

#[test]
fn criterion_03_q_calculus() {
    criterion(3, "q-binomial recurrences and twisted Leibniz", || {
        let base = parse_coeff("q^2").unwrap();
        for n in 1..=8u32 {
            for i in 1..=n {
                let direct = qcalc::q_binomial(n, i, &base).unwrap();
                let lower = if i == n {
                    CoeffRat::zero()
                } else {
                    qcalc::q_binomial(n - 1, i, &base).unwrap()
                };
                let upper = qcalc::q_binomial(n - 1, i - 1, &base).unwrap();
                let pascal = upper.add(&lower.mul(&base.pow(i as i64).unwrap()));
                assert_eq!(direct, pascal, "Pascal at ({n}, {i})");
            }
        }
        for name in ["quantum-weyl", "qmat2"] {
            let pres = builtin(name);
            let mut rng = ChaCha8Rng::seed_from_u64(03_03);
            for _ in 0..100 {
                let e = random_element(&pres, &mut rng, pres.n() - 1, 2, 2);
                let f = random_element(&pres, &mut rng, pres.n() - 1, 2, 2);
                let n = rng.gen_range(0..=4u32);
                assert!(
                    qcalc::verify_q_leibniz(&pres, &e, &f, n).unwrap(),
                    "Leibniz in {name} at power {n}"
                );
            }
        }
    });
}

#[test]
fn criterion_04_cauchon_map() {
    criterion(4, "Cauchon map values, homomorphism, minimality", || {
        let weyl = builtin("quantum-weyl");
        let image = cauchon::cauchon_theta(&weyl, 1, &elem(&weyl, "x1"), BOUND).unwrap();
        assert_eq!(
            image.value.to_expr_string(weyl.gen_names()),
            "x1 + 1/(q - 1)*x2^-1"
        );
        assert_eq!(image.s_min, 1);

        let qmat = builtin("qmat2");
        let image = cauchon::cauchon_theta(&qmat, 3, &elem(&qmat, "x11"), BOUND).unwrap();
        assert_eq!(
            image.value.to_expr_string(qmat.gen_names()),
            "x11 - q*x12*x21*x22^-1"
        );
        assert_eq!(image.s_min, 1);

        for (name, j) in [("quantum-weyl", 1usize), ("qmat2", 3)] {
            let pres = builtin(name);
            let ctx = Ctx::new(&pres).with_bound(BOUND);
            let mut rng = ChaCha8Rng::seed_from_u64(04_04);
            for _ in 0..100 {
                let a = random_element(&pres, &mut rng, j, 3, 2);
                let b = random_element(&pres, &mut rng, j, 3, 2);
                assert!(
                    cauchon::verify_theta_homomorphism(&pres, j, &a, &b, BOUND).unwrap(),
                    "theta multiplicativity in {name}"
                );
                let one_term = random_element(&pres, &mut rng, j, 3, 1);
                let image = cauchon::cauchon_theta(&pres, j, &one_term, BOUND).unwrap();
                let s = ctx.delta_nilpotence_order(j, &one_term).unwrap();
                assert_eq!(image.s_min, s, "minimal clearing power in {name}");
                let clears = ore_forge::LaurentElement::inverted_power(
                    pres.n(),
                    j,
                    s as i32,
                );
                assert!(ctx
                    .laurent_mul(&image.value, &clears)
                    .unwrap()
                    .to_element()
                    .is_ok());
                if s > 0 {
                    let short = ore_forge::LaurentElement::inverted_power(
                        pres.n(),
                        j,
                        s as i32 - 1,
                    );
                    assert!(ctx
                        .laurent_mul(&image.value, &short)
                        .unwrap()
                        .to_element()
                        .is_err());
                }
            }
        }
    });
}

#[test]
fn criterion_05_deletion_endpoints() {
    criterion(5, "derivation deletion endpoints", || {
        let qmat = builtin("qmat2");
        let steps = cauchon::deletion_sequence(&qmat, BOUND).unwrap();
        assert_eq!(steps.len(), 3);
        let nontrivial: Vec<&DeletionStep> = steps
            .iter()
            .filter(|step| !step.before.delta_map().is_empty())
            .collect();
        assert_eq!(nontrivial.len(), 1, "one step does real work");
        assert_eq!(nontrivial[0].level, 3);
        for step in &steps {
            assert!(step.checks.passed(), "step checks:\n{}", step.checks);
        }
        let last = &steps.last().unwrap().after;
        assert!(last.delta_map().is_empty());
        assert_eq!(last.lambda_matrix(), qmat.lambda_matrix());

        let weyl = builtin("quantum-weyl");
        let steps = cauchon::deletion_sequence(&weyl, BOUND).unwrap();
        let last = &steps.last().unwrap().after;
        let plane = builtin("quantum-plane");
        assert!(last.delta_map().is_empty());
        assert_eq!(last.lambda_matrix(), plane.lambda_matrix());
    });
}

#[test]
fn criterion_06_normal_element_construction() {
    criterion(6, "normal element construction", || {
        let weyl = builtin("quantum-weyl");
        let x1 = elem(&weyl, "x1");
        let cert = normal::construct_normal(&weyl, &x1, BOUND).unwrap();
        assert_eq!(cert.element, elem(&weyl, "x1*x2 + (q - 1)^-1"));
        assert_eq!(cert.conjugation[0], elem(&weyl, "q*x1"));
        assert_eq!(cert.conjugation[1], elem(&weyl, "q^-1*x2"));

        let recomputed = normal::verify_normal(&weyl, &cert.element, BOUND).unwrap();
        assert_eq!(recomputed, cert);

        match normal::verify_normal(&weyl, &x1, BOUND) {
            Err(Error::NotNormal { gen }) => assert_eq!(gen, "x2"),
            other => panic!("x1 alone is not normal, got {other:?}"),
        }
    });
}

#[test]
fn criterion_07_inner_derivation_routes() {
    criterion(7, "inner derivation fraction routes", || {
        let weyl = builtin("quantum-weyl");
        let x1 = elem(&weyl, "x1");
        let from_normal = normal::inner_d_from_normal(&weyl, &x1, BOUND).unwrap();
        let monic_c = elem(&weyl, "(q - 1)^-1");
        let from_monic = normal::inner_d_from_monic(&weyl, &x1, &monic_c, 1, BOUND).unwrap();
        assert_eq!(from_normal, from_monic);
        assert_eq!(
            from_normal.num().to_expr_string(weyl.gen_names()),
            "-1/(q - 1)"
        );
        assert!(normal::verify_inner(&weyl, &from_normal).unwrap());
        assert!(normal::verify_inner(&weyl, &from_monic).unwrap());

        // The two-sided compatibility delta(a) a = eta lam^s a delta(a)
        // with a = x1, eta = q, lam = q_2, s = 1.
        let ctx = Ctx::new(&weyl).with_bound(BOUND);
        let da = ctx.apply_delta(1, &x1).unwrap();
        let left = ctx.mul(&da, &x1).unwrap();
        let eta_lam = parse_coeff("q").unwrap().mul(weyl.q_j(1));
        let right = ctx.mul(&x1, &da).unwrap().scale(&eta_lam);
        assert_eq!(left, right);

        let qmat = builtin("qmat2");
        let x11 = elem(&qmat, "x11");
        let from_normal = normal::inner_d_from_normal(&qmat, &x11, BOUND).unwrap();
        let monic_c = elem(&qmat, "-q*x12*x21");
        let from_monic = normal::inner_d_from_monic(&qmat, &x11, &monic_c, 1, BOUND).unwrap();
        assert_eq!(from_normal, from_monic);
        assert!(normal::verify_inner(&qmat, &from_normal).unwrap());
    });
}

#[test]
fn criterion_08_skew_nilpotence_scan() {
    criterion(8, "skew nilpotence scan finds no counterexample", || {
        for pres in sample_presentations() {
            let mut rng = ChaCha8Rng::seed_from_u64(08_08);
            for trial in 0..500 {
                let j = rng.gen_range(1..pres.n());
                let c = random_element(&pres, &mut rng, j, 2, 2);
                let e = random_element(&pres, &mut rng, j, 2, 2);
                let side = if rng.gen_bool(0.5) {
                    ProductSide::Right
                } else {
                    ProductSide::Left
                };
                let verdict =
                    normal::skew_nilpotence_check(&pres, j, &c, &e, side, BOUND).unwrap();
                assert_ne!(
                    verdict,
                    SkewVerdict::Counterexample,
                    "trial {trial} in {} at level {j}",
                    pres.name()
                );
            }
        }
    });
}

#[test]
fn criterion_09_spectra() {
    criterion(9, "spectra: height formula, catenarity, separation", || {
        for n in 1..=6usize {
            let qaff = builtin(&format!("qaffine-{n}"));
            let report = spectra::tauvel_check(&qaff).unwrap();
            assert!(report.passed(), "height formula at N = {n}:\n{report}");
            let poset = spectra::hprime_poset(&qaff).unwrap();
            assert_eq!(poset.len(), 1 << n);
            let outcome = spectra::catenary_check(&poset);
            assert!(outcome.catenary, "subset lattice at N = {n}");
        }
        for n in 1..=5usize {
            let qaff = builtin(&format!("qaffine-{n}"));
            let report = spectra::normal_separation_check(&qaff, BOUND).unwrap();
            assert!(report.passed(), "separation at N = {n}:\n{report}");
        }

        let text = "0 < a\na < b\nb < 1\n0 < c\nc < 1\n";
        let poset = FinitePoset::from_text(text).unwrap();
        let outcome = spectra::catenary_check(&poset);
        assert!(!outcome.catenary);
        let witness = outcome.witness.expect("witness");
        assert_ne!(witness.short_chain.len(), witness.long_chain.len());
        for chain in [&witness.short_chain, &witness.long_chain] {
            assert_eq!(chain.first().unwrap(), &witness.lower);
            assert_eq!(chain.last().unwrap(), &witness.upper);
            for pair in chain.windows(2) {
                let a = poset.index_of(&pair[0]).unwrap();
                let b = poset.index_of(&pair[1]).unwrap();
                assert!(
                    poset.covers().contains(&(a, b)),
                    "{} < {} should be a covering step",
                    pair[0],
                    pair[1]
                );
            }
        }
    });
}

#[test]
fn criterion_10_filtration_and_growth() {
    criterion(10, "filtration degrees, symbols, growth", || {
        for name in ["quantum-plane", "quantum-weyl"] {
            let pres = builtin(name);
            let found = grfilt::find_filtration_degrees(&pres, 8).unwrap();
            assert_eq!(found.degrees(), &[1, 1], "degrees for {name}");
        }

        let qmat = builtin("qmat2");
        let found = grfilt::find_filtration_degrees(&qmat, 16).unwrap();
        assert!(grfilt::degrees_valid(&qmat, found.degrees()));
        assert_eq!(found.degrees(), &[1, 1, 1, 2]);
        assert!(!grfilt::degrees_valid(&qmat, &[1, 1, 1, 1]));
        assert!(grfilt::degrees_valid(&qmat, &[2, 1, 1, 2]));

        let degrees = FiltrationDegrees::new(vec![1, 1, 1, 2]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(10_10);
        for _ in 0..100 {
            let a = random_element(&qmat, &mut rng, qmat.n(), 3, 2);
            let b = random_element(&qmat, &mut rng, qmat.n(), 3, 2);
            assert!(
                grfilt::symbol_product_matches(&qmat, &degrees, &a, &b).unwrap(),
                "symbol multiplicativity"
            );
        }

        for pres in sample_presentations() {
            assert_eq!(grfilt::gk_dimension(&pres), pres.n());
            let degrees = grfilt::filtration_for(&pres).unwrap();
            let report = grfilt::growth_report(&pres, &degrees).unwrap();
            assert!(report.passed(), "growth in {}:\n{report}", pres.name());
        }
    });
}
