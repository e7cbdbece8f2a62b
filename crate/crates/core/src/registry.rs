//! Built-in example presentations, plus deliberately broken ones.
//!
//! The broken presentations each violate exactly one defining condition
//! (eigenvalue a root of unity, derivation not locally nilpotent, or
//! derivation weight inhomogeneous) so the verification suite's diagnostics
//! can be exercised end to end.

use std::collections::BTreeMap;

use crate::coeff::CoeffRat;
use crate::error::{Error, Result};
use crate::ore::{Element, Mono};
use crate::presentation::{CGLPresentation, TorusElement, Weight};

/// Resolve a built-in presentation by name. "qaffine-N" takes any N >= 1;
/// the names prefixed "invalid-" are the seeded broken presentations.
pub fn builtin(name: &str) -> Result<CGLPresentation> {
    match name {
        "quantum-plane" => quantum_plane(),
        "quantum-weyl" => quantum_weyl(),
        "qmat2" | "quantum-matrices-2" => quantum_matrices(),
        "invalid-unity" => invalid_unity(),
        "invalid-nonnilpotent" => invalid_nonnilpotent(),
        "invalid-weights" => invalid_weights(),
        _ => {
            if let Some(suffix) = name.strip_prefix("qaffine-") {
                match suffix.parse::<usize>() {
                    Ok(n) if n >= 1 => return quantum_affine(n),
                    _ => {}
                }
            }
            Err(Error::UnknownTarget(name.to_string()))
        }
    }
}

/// Names and one-line descriptions of the well-formed built-ins.
pub fn builtin_descriptions() -> Vec<(&'static str, &'static str)> {
    vec![
        ("quantum-plane", "x2 x1 = q x1 x2"),
        ("quantum-weyl", "x2 x1 = q x1 x2 + 1"),
        ("qmat2", "2 by 2 quantum matrices"),
        ("qaffine-N", "quantum affine N-space, x_j x_i = q x_i x_j"),
    ]
}

/// Names and descriptions of the seeded invalid presentations.
pub fn invalid_descriptions() -> Vec<(&'static str, &'static str)> {
    vec![
        ("invalid-unity", "an eigenvalue q_j equal to 1"),
        ("invalid-nonnilpotent", "delta_2(x1) = x1^2, never nilpotent"),
        ("invalid-weights", "delta value with the wrong H-weight"),
    ]
}

fn names(list: &[&str]) -> Vec<String> {
    list.iter().map(|s| s.to_string()).collect()
}

/// Fill a multiplicatively skew-symmetric matrix from its strictly lower
/// triangle: lambda[j][i] = f(j, i) for j > i.
fn skew_matrix(n: usize, f: impl Fn(usize, usize) -> CoeffRat) -> Result<Vec<Vec<CoeffRat>>> {
    let mut m = vec![vec![CoeffRat::one(); n]; n];
    for j in 0..n {
        for i in 0..j {
            let v = f(j, i);
            m[i][j] = v.inv()?;
            m[j][i] = v;
        }
    }
    Ok(m)
}

fn torus(rows: Vec<Vec<CoeffRat>>) -> Vec<TorusElement> {
    rows.into_iter().map(TorusElement).collect()
}

fn weights(rows: Vec<Vec<i64>>) -> Vec<Weight> {
    rows.into_iter().map(Weight).collect()
}

fn quantum_plane() -> Result<CGLPresentation> {
    let q = CoeffRat::q;
    CGLPresentation::assemble(
        "quantum-plane",
        names(&["x1", "x2"]),
        2,
        skew_matrix(2, |_, _| q())?,
        BTreeMap::new(),
        weights(vec![vec![1, 0], vec![0, 1]]),
        torus(vec![vec![q(), CoeffRat::one()], vec![q(), q()]]),
    )
}

fn quantum_weyl() -> Result<CGLPresentation> {
    let q = CoeffRat::q;
    let mut delta = BTreeMap::new();
    delta.insert((1, 0), Element::one(2));
    CGLPresentation::assemble(
        "quantum-weyl",
        names(&["x1", "x2"]),
        1,
        skew_matrix(2, |_, _| q())?,
        delta,
        weights(vec![vec![1], vec![-1]]),
        torus(vec![vec![q()], vec![q()]]),
    )
}

/// Coordinate ring of 2 by 2 quantum matrices, generators row by row. The
/// torus is (K*)^4 with h = (r1, r2, c1, c2) scaling x_ij by r_i c_j.
fn quantum_matrices() -> Result<CGLPresentation> {
    let q = CoeffRat::q;
    let qi = || CoeffRat::q_pow(-1);
    let one = CoeffRat::one;
    let lambda = skew_matrix(4, |j, i| match (j, i) {
        (1, 0) | (2, 0) | (3, 1) | (3, 2) => qi(),
        _ => one(),
    })?;
    let mut delta = BTreeMap::new();
    let mut bc = Element::zero(4);
    bc.insert_add(Mono(vec![0, 1, 1, 0]), q().sub(&qi()).neg());
    delta.insert((3, 0), bc);
    CGLPresentation::assemble(
        "qmat2",
        names(&["x11", "x12", "x21", "x22"]),
        4,
        lambda,
        delta,
        weights(vec![
            vec![1, 0, 1, 0],
            vec![1, 0, 0, 1],
            vec![0, 1, 1, 0],
            vec![0, 1, 0, 1],
        ]),
        torus(vec![
            vec![q(), one(), one(), one()],
            vec![qi(), one(), one(), one()],
            vec![one(), one(), qi(), one()],
            vec![one(), qi(), one(), qi()],
        ]),
    )
}

fn quantum_affine(n: usize) -> Result<CGLPresentation> {
    let q = CoeffRat::q;
    let gen_names: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
    let mut weight_rows = Vec::with_capacity(n);
    let mut h_rows = Vec::with_capacity(n);
    for j in 0..n {
        let mut w = vec![0i64; n];
        w[j] = 1;
        weight_rows.push(w);
        h_rows.push(
            (0..n)
                .map(|i| if i <= j { q() } else { CoeffRat::one() })
                .collect(),
        );
    }
    CGLPresentation::assemble(
        format!("qaffine-{n}"),
        gen_names,
        n,
        skew_matrix(n, |_, _| q())?,
        BTreeMap::new(),
        weights(weight_rows),
        torus(h_rows),
    )
}

/// Quantum plane data, except h_2 gives its own generator eigenvalue 1.
fn invalid_unity() -> Result<CGLPresentation> {
    let q = CoeffRat::q;
    CGLPresentation::assemble(
        "invalid-unity",
        names(&["x1", "x2"]),
        2,
        skew_matrix(2, |_, _| q())?,
        BTreeMap::new(),
        weights(vec![vec![1, 0], vec![0, 1]]),
        torus(vec![vec![q(), CoeffRat::one()], vec![q(), CoeffRat::one()]]),
    )
}

/// All structural conditions hold, but delta_2(x1) = x1^2 reproduces
/// itself under iteration and is not locally nilpotent.
fn invalid_nonnilpotent() -> Result<CGLPresentation> {
    let q = CoeffRat::q;
    let mut delta = BTreeMap::new();
    let mut sq = Element::zero(2);
    sq.insert_add(Mono(vec![2, 0]), CoeffRat::one());
    delta.insert((1, 0), sq);
    CGLPresentation::assemble(
        "invalid-nonnilpotent",
        names(&["x1", "x2"]),
        1,
        skew_matrix(2, |_, _| q())?,
        delta,
        weights(vec![vec![1], vec![1]]),
        torus(vec![vec![q()], vec![q()]]),
    )
}

/// Quantum Weyl data with the torus enlarged so that the constant
/// derivation value no longer has the weight forced by its level.
fn invalid_weights() -> Result<CGLPresentation> {
    let q = CoeffRat::q;
    let mut delta = BTreeMap::new();
    delta.insert((1, 0), Element::one(2));
    CGLPresentation::assemble(
        "invalid-weights",
        names(&["x1", "x2"]),
        2,
        skew_matrix(2, |_, _| q())?,
        delta,
        weights(vec![vec![1, 0], vec![0, 1]]),
        torus(vec![vec![q(), CoeffRat::one()], vec![q(), q()]]),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::{
        validate_structure, verify_confluence, verify_local_nilpotence,
        verify_sigma_delta_relation,
    };

    fn all_valid() -> Vec<CGLPresentation> {
        let mut out = vec![
            builtin("quantum-plane").unwrap(),
            builtin("quantum-weyl").unwrap(),
            builtin("qmat2").unwrap(),
        ];
        for n in 1..=6 {
            out.push(builtin(&format!("qaffine-{n}")).unwrap());
        }
        out
    }

    #[test]
    fn valid_builtins_pass_every_check() {
        for pres in all_valid() {
            let sr = validate_structure(&pres);
            assert!(sr.passed(), "{}: {sr}", pres.name());
            let nr = verify_local_nilpotence(&pres, 32);
            assert!(nr.passed(), "{}: {nr}", pres.name());
            assert!(verify_sigma_delta_relation(&pres).unwrap(), "{}", pres.name());
            let cr = verify_confluence(&pres, 4, 11, 30).unwrap();
            assert!(cr.passed(), "{}: {cr}", pres.name());
        }
    }

    #[test]
    fn cached_eigenvalues_match_hand_computations() {
        let weyl = builtin("quantum-weyl").unwrap();
        assert_eq!(weyl.q_j(0), &CoeffRat::q());
        assert_eq!(weyl.q_j(1), &CoeffRat::q_pow(-1));
        let qm = builtin("qmat2").unwrap();
        assert_eq!(qm.q_j(3), &CoeffRat::q_pow(-2));
    }

    #[test]
    fn nilpotence_orders_match_hand_computations() {
        let weyl = builtin("quantum-weyl").unwrap();
        let report = verify_local_nilpotence(&weyl, 8);
        assert_eq!(report.checks[0].detail.as_deref(), Some("s = 1"));

        let qm = builtin("qmat2").unwrap();
        let report = verify_local_nilpotence(&qm, 8);
        let find = |gen: &str| {
            report
                .checks
                .iter()
                .find(|c| c.name.contains("delta_4") && c.name.ends_with(gen))
                .unwrap()
                .detail
                .clone()
                .unwrap()
        };
        assert_eq!(find("x11"), "s = 1");
        assert_eq!(find("x12"), "s = 0");
        assert_eq!(find("x21"), "s = 0");
    }

    #[test]
    fn unity_seed_fails_only_the_eigenvalue_check() {
        let pres = builtin("invalid-unity").unwrap();
        let report = validate_structure(&pres);
        assert!(!report.passed());
        for c in &report.checks {
            if c.name.contains("root of unity") {
                assert!(!c.passed);
                assert!(c.detail.as_deref().unwrap().contains("q_2 = 1"));
            } else {
                assert!(c.passed, "unexpected failure: {}", c.name);
            }
        }
    }

    #[test]
    fn nonnilpotent_seed_passes_structure_but_not_nilpotence() {
        let pres = builtin("invalid-nonnilpotent").unwrap();
        assert!(validate_structure(&pres).passed());
        assert!(verify_sigma_delta_relation(&pres).unwrap());
        let report = verify_local_nilpotence(&pres, 12);
        assert!(!report.passed());
    }

    #[test]
    fn weight_seed_fails_only_homogeneity() {
        let pres = builtin("invalid-weights").unwrap();
        let report = validate_structure(&pres);
        assert!(!report.passed());
        for c in &report.checks {
            if c.name.contains("weight homogeneous") {
                assert!(!c.passed);
            } else {
                assert!(c.passed, "unexpected failure: {}", c.name);
            }
        }
    }

    #[test]
    fn unknown_names_are_rejected() {
        assert!(matches!(
            builtin("quantum-torus"),
            Err(Error::UnknownTarget(_))
        ));
        assert!(matches!(builtin("qaffine-0"), Err(Error::UnknownTarget(_))));
        assert!(matches!(builtin("qaffine-x"), Err(Error::UnknownTarget(_))));
    }

    #[test]
    fn large_affine_spaces_assemble_quickly() {
        let pres = builtin("qaffine-12").unwrap();
        assert_eq!(pres.n(), 12);
        assert!(validate_structure(&pres).passed());
    }
}