//! Deleting derivations: the Cauchon map and the stepwise reduction of a
//! tower to a quantum affine space.
//!
//! For the top variable X = x_j of a tower with derivation d = delta_j and
//! eigenvalue lam = q_j, the map
//!
//! ```text
//! theta(a) = sum over l of  (1 - lam)^(-l) / (l)!_lam * d^l(sigma^(-l)(a)) * X^(-l)
//! ```
//!
//! embeds the subalgebra below X into the localization at X. Local
//! nilpotence truncates the sum. The images y_i = theta(x_i) satisfy the
//! same relations as the x_i except that delta_j is gone, which is exactly
//! what `delete_top_derivation` certifies; iterating from the top strips
//! every derivation and lands on a quantum affine space with the original
//! lambda matrix.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::coeff::CoeffRat;
use crate::error::{Error, Result};
use crate::ore::engine::Ctx;
use crate::ore::{Element, LaurentElement};
use crate::presentation::CGLPresentation;
use crate::qcalc::q_factorial;
use crate::report::Report;

/// The image of one element under the Cauchon map, with the verified
/// minimal power of X that clears its denominators.
#[derive(Debug, Clone, PartialEq)]
pub struct ThetaImage {
    pub input: Element,
    pub value: LaurentElement,
    pub s_min: u32,
}

/// One derivation-deletion step: the tower before and after, the images of
/// the generators below the deleted level, and the relation checks that
/// certify the step.
#[derive(Debug, Clone)]
pub struct DeletionStep {
    pub before: CGLPresentation,
    pub after: CGLPresentation,
    /// Deleted level as a 0-based generator index.
    pub level: usize,
    pub images: BTreeMap<usize, ThetaImage>,
    pub checks: Report,
}

/// The eigenvalue lam = q_j is only trusted after re-deriving it from the
/// twisted commutation sigma_j delta_j = q_j delta_j sigma_j on every
/// derivation value at the level.
fn cross_validate_eigenvalue(pres: &CGLPresentation, j: usize) -> Result<()> {
    let ctx = Ctx::new(pres);
    for (&(jj, i), _) in pres.delta_map() {
        if jj != j {
            continue;
        }
        let x = Element::generator(pres.n(), i);
        let lhs = ctx.apply_sigma(j, &ctx.apply_delta(j, &x)?, 1)?;
        let rhs = ctx
            .apply_delta(j, &x.scale(pres.lambda(j, i)))?
            .scale(pres.q_j(j));
        if lhs != rhs {
            return Err(Error::DeletionCheckFailed {
                level: j + 1,
                detail: format!(
                    "sigma_{} delta_{} differs from q_{} delta_{} sigma_{} at {}",
                    j + 1,
                    j + 1,
                    j + 1,
                    j + 1,
                    j + 1,
                    pres.gen_name(i)
                ),
            });
        }
    }
    Ok(())
}

/// Apply the Cauchon map at level j to an element of the subalgebra below.
pub fn cauchon_theta(
    pres: &CGLPresentation,
    j: usize,
    a: &Element,
    bound: u32,
) -> Result<ThetaImage> {
    if a.is_zero() {
        return Err(Error::ZeroElement);
    }
    cross_validate_eigenvalue(pres, j)?;
    let ctx = Ctx::new(pres).with_bound(bound);
    let s = ctx.delta_nilpotence_order(j, a)?;
    let lam = pres.q_j(j);
    let one_minus = CoeffRat::one().sub(lam);
    let n = pres.n();
    let mut value = LaurentElement::zero(n, j);
    for l in 0..=s {
        let coeff = one_minus
            .pow(-(l as i64))?
            .div(&q_factorial(l, lam)?)?;
        let mut term = ctx.apply_sigma(j, a, -(l as i64))?;
        for _ in 0..l {
            term = ctx.apply_delta(j, &term)?;
        }
        for (m, c) in term.terms() {
            let mut mono = m.clone();
            mono.0[j] = -(l as i32);
            value.insert_add(mono, c.mul(&coeff));
        }
    }
    // The lowest X exponent must be exactly -s: multiplying by X^s clears
    // every denominator and X^(s-1) leaves one behind.
    let reached = -value.min_inverted_exponent().unwrap_or(0);
    if reached != s as i32 {
        return Err(Error::DeletionCheckFailed {
            level: j + 1,
            detail: format!(
                "theta image clears at X^{reached} but the nilpotence order is {s}"
            ),
        });
    }
    Ok(ThetaImage {
        input: a.clone(),
        value,
        s_min: s,
    })
}

/// Check theta(a b) = theta(a) theta(b) in the localization.
pub fn verify_theta_homomorphism(
    pres: &CGLPresentation,
    j: usize,
    a: &Element,
    b: &Element,
    bound: u32,
) -> Result<bool> {
    let ctx = Ctx::new(pres).with_bound(bound);
    let product = ctx.mul(a, b)?;
    let lhs = cauchon_theta(pres, j, &product, bound)?.value;
    let ta = cauchon_theta(pres, j, a, bound)?.value;
    let tb = cauchon_theta(pres, j, b, bound)?.value;
    Ok(lhs == ctx.laurent_mul(&ta, &tb)?)
}

/// Check X theta(a) = eta theta(a) X where eta is the h_j-eigenvalue of a.
/// The image of an eigenvector therefore q-commutes with the inverted
/// variable even though a itself did not.
pub fn verify_alpha_commutation(
    pres: &CGLPresentation,
    j: usize,
    a: &Element,
    bound: u32,
) -> Result<bool> {
    let weight = pres.eigen_weight(a)?;
    let eta = pres.chi(&pres.h(j).0, &weight)?;
    let theta = cauchon_theta(pres, j, a, bound)?.value;
    let ctx = Ctx::new(pres).with_bound(bound);
    let x = LaurentElement::inverted_power(pres.n(), j, 1);
    let lhs = ctx.laurent_mul(&x, &theta)?;
    let rhs = ctx.laurent_mul(&theta, &x)?.scale(&eta);
    Ok(lhs == rhs)
}

/// Delete the derivation at level j (0-based), certifying that the theta
/// images of the lower generators satisfy the relations of the tower with
/// delta_j erased. Any failed relation aborts the step.
pub fn delete_top_derivation(
    pres: &CGLPresentation,
    j: usize,
    bound: u32,
) -> Result<DeletionStep> {
    let n = pres.n();
    if j == 0 || j >= n {
        return Err(Error::IndexOutOfRange { index: j + 1, n });
    }
    for (&(k, i), _) in pres.delta_map() {
        if k > j && i <= j {
            return Err(Error::DeletionCheckFailed {
                level: j + 1,
                detail: format!(
                    "delta({}, {}) reaches from above into the localized levels",
                    k + 1,
                    i + 1
                ),
            });
        }
    }
    cross_validate_eigenvalue(pres, j)?;
    let ctx = Ctx::new(pres).with_bound(bound);
    let mut checks = Report::new(format!(
        "deletion of delta_{} in {}",
        j + 1,
        pres.name()
    ));
    checks.push(
        "eigenvalue cross-validation",
        true,
        Some(format!("lam = q_{} = {}", j + 1, pres.q_j(j))),
    );

    let mut images = BTreeMap::new();
    for i in 0..j {
        images.insert(
            i,
            cauchon_theta(pres, j, &Element::generator(n, i), bound)?,
        );
    }

    let mut abort: Option<String> = None;
    let mut record = |checks: &mut Report, name: String, ok: bool, detail: Option<String>| {
        if !ok && abort.is_none() {
            abort = Some(name.clone());
        }
        checks.push(name, ok, detail);
    };

    // (1) The images satisfy the lower tower relations, with theta applied
    // to each derivation value.
    for hi in 1..j {
        for lo in 0..hi {
            let y_hi = &images[&hi].value;
            let y_lo = &images[&lo].value;
            let lhs = ctx.laurent_mul(y_hi, y_lo)?;
            let mut rhs = ctx.laurent_mul(y_lo, y_hi)?.scale(pres.lambda(hi, lo));
            if let Some(d) = pres.delta(hi, lo) {
                rhs = rhs.add(&cauchon_theta(pres, j, d, bound)?.value);
            }
            record(
                &mut checks,
                format!(
                    "relation theta({}) theta({})",
                    pres.gen_name(hi),
                    pres.gen_name(lo)
                ),
                lhs == rhs,
                None,
            );
        }
    }

    // (2) X skew-commutes with each image by the lambda the weights predict.
    let x = LaurentElement::inverted_power(n, j, 1);
    for i in 0..j {
        let y = &images[&i].value;
        let lhs = ctx.laurent_mul(&x, y)?;
        let rhs = ctx.laurent_mul(y, &x)?.scale(pres.lambda(j, i));
        record(
            &mut checks,
            format!("commutation {} theta({})", pres.gen_name(j), pres.gen_name(i)),
            lhs == rhs,
            None,
        );
    }

    // (3) So does every generator above the deleted level.
    for k in j + 1..n {
        let xk = {
            let mut m = crate::ore::Mono::unit(n);
            m.0[k] = 1;
            let mut e = LaurentElement::zero(n, j);
            e.insert_add(m, CoeffRat::one());
            e
        };
        for i in 0..j {
            let y = &images[&i].value;
            let lhs = ctx.laurent_mul(&xk, y)?;
            let rhs = ctx.laurent_mul(y, &xk)?.scale(pres.lambda(k, i));
            record(
                &mut checks,
                format!("commutation {} theta({})", pres.gen_name(k), pres.gen_name(i)),
                lhs == rhs,
                None,
            );
        }
    }

    if let Some(name) = abort {
        return Err(Error::DeletionCheckFailed {
            level: j + 1,
            detail: name,
        });
    }

    let deletes_anything = pres.delta_map().keys().any(|&(k, _)| k == j);
    let after = if deletes_anything {
        let mut delta = pres.delta_map().clone();
        delta.retain(|&(k, _), _| k != j);
        pres.with_delta(format!("{}^({})", pres.name(), j + 1), delta)?
    } else {
        pres.clone()
    };
    Ok(DeletionStep {
        before: pres.clone(),
        after,
        level: j,
        images,
        checks,
    })
}

/// Run deletion steps from the top level down. The final presentation has
/// no derivations left and the original lambda matrix: the quantum affine
/// space the input tower degenerates to.
pub fn deletion_sequence(pres: &CGLPresentation, bound: u32) -> Result<Vec<DeletionStep>> {
    let mut steps = Vec::new();
    let mut current = pres.clone();
    for j in (1..pres.n()).rev() {
        let step = delete_top_derivation(&current, j, bound)?;
        current = step.after.clone();
        steps.push(step);
    }
    Ok(steps)
}

/// Serializable summary of a deletion step.
#[derive(Debug, Clone, Serialize)]
pub struct DeletionStepSummary {
    pub level: usize,
    pub before: String,
    pub after: String,
    pub images: Vec<ImageSummary>,
    pub checks: Report,
}

#[derive(Debug, Clone, Serialize)]
pub struct ImageSummary {
    pub generator: String,
    pub value: String,
    pub s_min: u32,
}

impl DeletionStep {
    pub fn summary(&self) -> DeletionStepSummary {
        let names = self.before.gen_names();
        DeletionStepSummary {
            level: self.level + 1,
            before: self.before.name().to_string(),
            after: self.after.name().to_string(),
            images: self
                .images
                .iter()
                .map(|(&i, img)| ImageSummary {
                    generator: self.before.gen_name(i).to_string(),
                    value: img.value.to_expr_string(names),
                    s_min: img.s_min,
                })
                .collect(),
            checks: self.checks.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::parse_coeff;
    use crate::ore::Mono;
    use crate::registry;

    fn theta_of(pres: &CGLPresentation, j: usize, expr: &str) -> ThetaImage {
        let raw = crate::expr::parse_element(expr, pres.gen_names()).unwrap();
        let a = Ctx::new(pres).normal_form(&raw).unwrap();
        cauchon_theta(pres, j, &a, 32).unwrap()
    }

    #[test]
    fn weyl_image_of_x1() {
        let weyl = registry::builtin("quantum-weyl").unwrap();
        let img = theta_of(&weyl, 1, "x1");
        let mut want = LaurentElement::zero(2, 1);
        want.insert_add(Mono(vec![1, 0]), CoeffRat::one());
        want.insert_add(Mono(vec![0, -1]), parse_coeff("(q - 1)^-1").unwrap());
        assert_eq!(img.value, want);
        assert_eq!(img.s_min, 1);
    }

    #[test]
    fn derivation_free_inputs_are_fixed() {
        let qm = registry::builtin("qmat2").unwrap();
        let img = theta_of(&qm, 3, "x12");
        assert_eq!(img.value, LaurentElement::from_element(&img.input, 3));
        assert_eq!(img.s_min, 0);
    }

    #[test]
    fn matrix_image_of_x11() {
        let qm = registry::builtin("qmat2").unwrap();
        let img = theta_of(&qm, 3, "x11");
        let mut want = LaurentElement::zero(4, 3);
        want.insert_add(Mono(vec![1, 0, 0, 0]), CoeffRat::one());
        want.insert_add(Mono(vec![0, 1, 1, -1]), CoeffRat::q().neg());
        assert_eq!(img.value, want);
        assert_eq!(img.s_min, 1);
    }

    #[test]
    fn image_clears_at_the_nilpotence_order_and_not_before() {
        let qm = registry::builtin("qmat2").unwrap();
        let img = theta_of(&qm, 3, "x11^2");
        assert_eq!(img.s_min, 2);
        assert!(img.value.min_inverted_exponent() == Some(-2));
    }

    #[test]
    fn homomorphism_on_hand_picked_pairs() {
        let weyl = registry::builtin("quantum-weyl").unwrap();
        let x1 = Element::generator(2, 0);
        assert!(verify_theta_homomorphism(&weyl, 1, &x1, &x1, 32).unwrap());

        let qm = registry::builtin("qmat2").unwrap();
        let a = Element::generator(4, 0);
        let b = Element::generator(4, 1);
        assert!(verify_theta_homomorphism(&qm, 3, &a, &b, 32).unwrap());
        let ctx = Ctx::new(&qm);
        let aa = ctx.mul(&a, &a).unwrap();
        assert!(verify_theta_homomorphism(&qm, 3, &aa, &b, 32).unwrap());
    }

    #[test]
    fn alpha_commutation_holds_for_eigenvectors() {
        let weyl = registry::builtin("quantum-weyl").unwrap();
        assert!(verify_alpha_commutation(&weyl, 1, &Element::generator(2, 0), 32).unwrap());
        let qm = registry::builtin("qmat2").unwrap();
        assert!(verify_alpha_commutation(&qm, 3, &Element::generator(4, 0), 32).unwrap());
    }

    #[test]
    fn torus_action_commutes_with_theta() {
        let qm = registry::builtin("qmat2").unwrap();
        let ctx = Ctx::new(&qm);
        let a = Element::generator(4, 0);
        let img = cauchon_theta(&qm, 3, &a, 32).unwrap();
        for j in 0..4 {
            let h = &qm.h(j).0;
            let lhs = ctx.apply_torus_laurent(h, &img.value).unwrap();
            let moved = ctx.apply_torus(h, &a).unwrap();
            let rhs = cauchon_theta(&qm, 3, &moved, 32).unwrap().value;
            assert_eq!(lhs, rhs, "equivariance fails at h_{}", j + 1);
        }
    }

    #[test]
    fn weyl_deletes_to_the_quantum_plane() {
        let weyl = registry::builtin("quantum-weyl").unwrap();
        let steps = deletion_sequence(&weyl, 32).unwrap();
        assert_eq!(steps.len(), 1);
        let after = &steps[0].after;
        assert!(after.delta_map().is_empty());
        let plane = registry::builtin("quantum-plane").unwrap();
        assert_eq!(after.lambda_matrix(), plane.lambda_matrix());
        assert!(steps[0].checks.passed());
    }

    #[test]
    fn matrix_algebra_deletes_in_one_nontrivial_step() {
        let qm = registry::builtin("qmat2").unwrap();
        let steps = deletion_sequence(&qm, 32).unwrap();
        assert_eq!(steps.len(), 3);
        assert!(!steps[0].before.delta_map().is_empty());
        assert!(steps[0].after.delta_map().is_empty());
        // The later steps find nothing to delete.
        assert_eq!(steps[1].before, steps[1].after);
        assert_eq!(steps[2].before, steps[2].after);
        let last = steps.last().unwrap();
        assert_eq!(last.after.lambda_matrix(), qm.lambda_matrix());
        assert!(crate::presentation::validate_structure(&last.after).passed());
    }

    #[test]
    fn affine_input_is_a_fixed_point() {
        let aff = registry::builtin("qaffine-4").unwrap();
        let steps = deletion_sequence(&aff, 32).unwrap();
        for step in &steps {
            assert_eq!(step.before, step.after);
            assert!(step.images.values().all(|img| img.s_min == 0));
        }
    }

    #[test]
    fn sign_flip_shows_up_in_the_image() {
        // The flipped-sign variant is a perfectly consistent tower, so
        // structure checks accept it; comparing theta images against the
        // true algebra's is what exposes the corruption.
        let qm = registry::builtin("qmat2").unwrap();
        let mut delta = qm.delta_map().clone();
        let flipped = delta.get(&(3, 0)).unwrap().neg();
        delta.insert((3, 0), flipped);
        let wrong = qm.with_delta("sign-flipped", delta).unwrap();

        let step = delete_top_derivation(&wrong, 3, 32).unwrap();
        assert!(step.checks.passed());
        let true_img = cauchon_theta(&qm, 3, &Element::generator(4, 0), 32).unwrap();
        assert_ne!(step.images[&0].value, true_img.value);
    }

    #[test]
    fn deleting_below_an_active_derivation_is_rejected() {
        let qm = registry::builtin("qmat2").unwrap();
        let err = delete_top_derivation(&qm, 2, 32).unwrap_err();
        assert!(matches!(err, Error::DeletionCheckFailed { level: 3, .. }));
    }

    #[test]
    fn zero_input_is_rejected() {
        let weyl = registry::builtin("quantum-weyl").unwrap();
        let err = cauchon_theta(&weyl, 1, &Element::zero(2), 32).unwrap_err();
        assert!(matches!(err, Error::ZeroElement));
    }

    #[test]
    fn images_serialize_with_laurent_powers() {
        let qm = registry::builtin("qmat2").unwrap();
        let step = delete_top_derivation(&qm, 3, 32).unwrap();
        let summary = step.summary();
        let x11 = summary
            .images
            .iter()
            .find(|i| i.generator == "x11")
            .unwrap();
        assert_eq!(x11.value, "x11 - q*x12*x21*x22^-1");
        assert_eq!(x11.s_min, 1);
    }
}
