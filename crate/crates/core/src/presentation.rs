//! The CGL presentation data model.
//!
//! A presentation packages an iterated skew polynomial tower
//! K[x1][x2; s2, d2]...[xN; sN, dN] in which every automorphism s_j is
//! diagonal (x_j x_i = lambda_ji x_i x_j + d_j(x_i)), together with a rank-d
//! torus acting by the integer weight vectors of the generators. The
//! distinguished torus elements h_j must realize the automorphisms, and the
//! eigenvalues q_j they assign to their own generators must not be roots of
//! unity. `validate_structure` and its companions verify all of this from
//! the raw data; nothing is trusted.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::coeff::{parse_coeff, CoeffRat};
use crate::error::{Error, Result};
use crate::expr::parse_element;
use crate::ore::engine::{Ctx, RewriteStrategy};
use crate::ore::{Element, Mono};
use crate::report::Report;

/// Integer exponent vector of a torus character.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Weight(pub Vec<i64>);

/// A point of the torus, each coordinate a nonzero rational function of q.
#[derive(Debug, Clone, PartialEq)]
pub struct TorusElement(pub Vec<CoeffRat>);

/// A fully specified tower presentation. Immutable once assembled; the
/// eigenvalues q_j are computed at assembly time and cached.
#[derive(Debug, Clone, PartialEq)]
pub struct CGLPresentation {
    name: String,
    n: usize,
    d: usize,
    names: Vec<String>,
    lambda: Vec<Vec<CoeffRat>>,
    delta: BTreeMap<(usize, usize), Element>,
    weights: Vec<Weight>,
    h: Vec<TorusElement>,
    qj: Vec<CoeffRat>,
    filtration: Option<Vec<u32>>,
}

fn valid_generator_name(s: &str) -> bool {
    if s == "q" {
        return false;
    }
    let mut cs = s.chars();
    match cs.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    cs.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl CGLPresentation {
    /// Build a presentation from raw parts, enforcing only the structural
    /// conditions needed for the arithmetic to be well defined (dimensions
    /// agree, lambda and torus coordinates are nonzero, derivation values
    /// live strictly below their level). The mathematical conditions are
    /// deferred to `validate_structure`.
    pub fn assemble(
        name: impl Into<String>,
        names: Vec<String>,
        d: usize,
        lambda: Vec<Vec<CoeffRat>>,
        delta: BTreeMap<(usize, usize), Element>,
        weights: Vec<Weight>,
        h: Vec<TorusElement>,
    ) -> Result<Self> {
        let name = name.into();
        let n = names.len();
        if n == 0 {
            return Err(Error::BadPresentation(
                "a presentation needs at least one generator".into(),
            ));
        }
        if d == 0 {
            return Err(Error::BadPresentation("torus rank must be positive".into()));
        }
        for s in &names {
            if !valid_generator_name(s) {
                return Err(Error::BadPresentation(format!(
                    "invalid generator name '{s}'"
                )));
            }
        }
        for (a, s) in names.iter().enumerate() {
            if names[..a].contains(s) {
                return Err(Error::BadPresentation(format!(
                    "duplicate generator name '{s}'"
                )));
            }
        }
        if lambda.len() != n || lambda.iter().any(|row| row.len() != n) {
            return Err(Error::BadPresentation(format!(
                "lambda must be a {n} by {n} matrix"
            )));
        }
        for row in &lambda {
            if row.iter().any(|c| c.is_zero()) {
                return Err(Error::BadPresentation(
                    "lambda entries must be nonzero".into(),
                ));
            }
        }
        if weights.len() != n || weights.iter().any(|w| w.0.len() != d) {
            return Err(Error::BadPresentation(format!(
                "need {n} weight vectors of length {d}"
            )));
        }
        if h.len() != n || h.iter().any(|t| t.0.len() != d) {
            return Err(Error::BadPresentation(format!(
                "need {n} torus elements with {d} coordinates"
            )));
        }
        for t in &h {
            if t.0.iter().any(|c| c.is_zero()) {
                return Err(Error::BadPresentation(
                    "torus coordinates must be nonzero".into(),
                ));
            }
        }
        let mut clean_delta = BTreeMap::new();
        for ((j, i), value) in delta {
            if i >= j || j >= n {
                return Err(Error::BadPresentation(format!(
                    "derivation index pair ({}, {}) out of order",
                    j + 1,
                    i + 1
                )));
            }
            if value.n() != n {
                return Err(Error::BadPresentation(
                    "derivation value has the wrong generator count".into(),
                ));
            }
            if !value.within_level(j) {
                return Err(Error::BadPresentation(format!(
                    "delta({}, {}) uses a generator at or above level {}",
                    j + 1,
                    i + 1,
                    j + 1
                )));
            }
            if !value.is_zero() {
                clean_delta.insert((j, i), value);
            }
        }
        let mut qj = Vec::with_capacity(n);
        let mut pres = CGLPresentation {
            name,
            n,
            d,
            names,
            lambda,
            delta: clean_delta,
            weights,
            h,
            qj: Vec::new(),
            filtration: None,
        };
        for j in 0..n {
            qj.push(pres.chi(&pres.h[j].0, &pres.weights[j])?);
        }
        pres.qj = qj;
        Ok(pres)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn gen_name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn gen_names(&self) -> &[String] {
        &self.names
    }

    pub fn gen_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn lambda(&self, j: usize, i: usize) -> &CoeffRat {
        &self.lambda[j][i]
    }

    pub fn lambda_matrix(&self) -> &[Vec<CoeffRat>] {
        &self.lambda
    }

    pub fn delta(&self, j: usize, i: usize) -> Option<&Element> {
        self.delta.get(&(j, i))
    }

    pub fn delta_map(&self) -> &BTreeMap<(usize, usize), Element> {
        &self.delta
    }

    pub fn weight(&self, i: usize) -> &Weight {
        &self.weights[i]
    }

    pub fn weights(&self) -> &[Weight] {
        &self.weights
    }

    pub fn h(&self, j: usize) -> &TorusElement {
        &self.h[j]
    }

    pub fn torus_elements(&self) -> &[TorusElement] {
        &self.h
    }

    /// The eigenvalue of h_j on its own generator.
    pub fn q_j(&self, j: usize) -> &CoeffRat {
        &self.qj[j]
    }

    /// Evaluate the character with the given weight at a torus point.
    /// Filtration degrees declared in the source file, if any. Shape-checked
    /// on load; whether they satisfy the strict degree inequalities is a
    /// separate verification.
    pub fn declared_filtration(&self) -> Option<&[u32]> {
        self.filtration.as_deref()
    }

    /// Attach declared filtration degrees (one positive integer per
    /// generator).
    pub fn with_declared_filtration(mut self, degrees: Option<Vec<u32>>) -> Result<Self> {
        if let Some(ds) = &degrees {
            if ds.len() != self.n {
                return Err(Error::BadPresentation(format!(
                    "filtration lists {} degrees for {} generators",
                    ds.len(),
                    self.n
                )));
            }
            if ds.iter().any(|&d| d == 0) {
                return Err(Error::BadPresentation(
                    "filtration degrees must be positive".into(),
                ));
            }
        }
        self.filtration = degrees;
        Ok(self)
    }

    pub fn chi(&self, coords: &[CoeffRat], w: &Weight) -> Result<CoeffRat> {
        if coords.len() != w.0.len() {
            return Err(Error::BadPresentation(format!(
                "torus element has {} coordinates but the weight has {}",
                coords.len(),
                w.0.len()
            )));
        }
        let mut out = CoeffRat::one();
        for (c, &e) in coords.iter().zip(&w.0) {
            if e != 0 {
                out = out.mul(&c.pow(e)?);
            }
        }
        Ok(out)
    }

    /// H-weight of an element all of whose monomials share one weight.
    pub fn eigen_weight(&self, a: &Element) -> Result<Weight> {
        let mut found: Option<Weight> = None;
        for (m, _) in a.terms() {
            let w = self.mono_weight(m);
            match &found {
                None => found = Some(w),
                Some(prev) if *prev == w => {}
                Some(_) => return Err(Error::NotEigenvector),
            }
        }
        found.ok_or(Error::ZeroElement)
    }

    pub fn mono_weight(&self, m: &Mono) -> Weight {
        let mut w = vec![0i64; self.d];
        for (i, &e) in m.0.iter().enumerate() {
            if e != 0 {
                for t in 0..self.d {
                    w[t] += e as i64 * self.weights[i].0[t];
                }
            }
        }
        Weight(w)
    }

    /// The prefix tower on the first `count` generators.
    pub fn subalgebra(&self, count: usize) -> Result<CGLPresentation> {
        if count == 0 || count > self.n {
            return Err(Error::IndexOutOfRange {
                index: count,
                n: self.n,
            });
        }
        if count == self.n {
            return Ok(self.clone());
        }
        let delta = self
            .delta
            .iter()
            .filter(|((j, _), _)| *j < count)
            .map(|(&(j, i), v)| {
                let mut e = Element::zero(count);
                for (m, c) in v.terms() {
                    e.insert_add(Mono(m.0[..count].to_vec()), c.clone());
                }
                ((j, i), e)
            })
            .collect();
        CGLPresentation::assemble(
            format!("{} (first {} generators)", self.name, count),
            self.names[..count].to_vec(),
            self.d,
            self.lambda[..count]
                .iter()
                .map(|row| row[..count].to_vec())
                .collect(),
            delta,
            self.weights[..count].to_vec(),
            self.h[..count].to_vec(),
        )?
        .with_declared_filtration(self.filtration.as_ref().map(|ds| ds[..count].to_vec()))
    }

    /// Same tower data with a different derivation map (used when deleting
    /// derivations produces a new presentation on the same generators).
    pub fn with_delta(
        &self,
        name: impl Into<String>,
        delta: BTreeMap<(usize, usize), Element>,
    ) -> Result<CGLPresentation> {
        CGLPresentation::assemble(
            name,
            self.names.clone(),
            self.d,
            self.lambda.clone(),
            delta,
            self.weights.clone(),
            self.h.clone(),
        )?
        .with_declared_filtration(self.filtration.clone())
    }

    pub fn from_file_model(file: &PresentationFile) -> Result<Self> {
        if file.generators.len() != file.n {
            return Err(Error::BadPresentation(format!(
                "N = {} but {} generators listed",
                file.n,
                file.generators.len()
            )));
        }
        let parse_matrix = |rows: &[Vec<String>], what: &str| -> Result<Vec<Vec<CoeffRat>>> {
            rows.iter()
                .map(|row| {
                    row.iter()
                        .map(|s| {
                            parse_coeff(s).map_err(|e| {
                                Error::BadPresentation(format!("in {what} entry '{s}': {e}"))
                            })
                        })
                        .collect()
                })
                .collect()
        };
        let lambda = parse_matrix(&file.lambda, "lambda")?;
        let h_rows = parse_matrix(&file.h, "h")?;
        let weights: Vec<Weight> = file.weights.iter().map(|w| Weight(w.clone())).collect();
        let h: Vec<TorusElement> = h_rows.into_iter().map(TorusElement).collect();

        // Derivation values may be written in any order, so each one is
        // normal-formed in the tower assembled so far. Entries are taken in
        // ascending level order to make that well founded.
        let mut entries: Vec<&DeltaEntry> = file.delta.iter().collect();
        entries.sort_by_key(|e| (e.j, e.i));
        let mut delta: BTreeMap<(usize, usize), Element> = BTreeMap::new();
        for entry in entries {
            if entry.i == 0 || entry.j == 0 || entry.i >= entry.j || entry.j > file.n {
                return Err(Error::BadPresentation(format!(
                    "delta indices (j = {}, i = {}) must satisfy 1 <= i < j <= N",
                    entry.j, entry.i
                )));
            }
            let key = (entry.j - 1, entry.i - 1);
            if delta.contains_key(&key) {
                return Err(Error::BadPresentation(format!(
                    "duplicate delta entry (j = {}, i = {})",
                    entry.j, entry.i
                )));
            }
            let partial = CGLPresentation::assemble(
                file.name.clone(),
                file.generators.clone(),
                file.d,
                lambda.clone(),
                delta.clone(),
                weights.clone(),
                h.clone(),
            )?;
            let raw = parse_element(&entry.value, &partial.names).map_err(|e| {
                Error::BadPresentation(format!(
                    "in delta (j = {}, i = {}) value '{}': {e}",
                    entry.j, entry.i, entry.value
                ))
            })?;
            let value = Ctx::new(&partial).normal_form(&raw)?;
            if !value.within_level(key.0) {
                return Err(Error::BadPresentation(format!(
                    "delta({}, {}) uses a generator at or above level {}",
                    entry.j, entry.i, entry.j
                )));
            }
            if !value.is_zero() {
                delta.insert(key, value);
            }
        }
        CGLPresentation::assemble(
            file.name.clone(),
            file.generators.clone(),
            file.d,
            lambda,
            delta,
            weights,
            h,
        )?
        .with_declared_filtration(file.filtration.clone())
    }

    pub fn to_file_model(&self) -> PresentationFile {
        PresentationFile {
            name: self.name.clone(),
            n: self.n,
            d: self.d,
            generators: self.names.clone(),
            lambda: self
                .lambda
                .iter()
                .map(|row| row.iter().map(|c| c.to_expr_string()).collect())
                .collect(),
            delta: self
                .delta
                .iter()
                .map(|(&(j, i), v)| DeltaEntry {
                    j: j + 1,
                    i: i + 1,
                    value: v.to_expr_string(&self.names),
                })
                .collect(),
            weights: self.weights.iter().map(|w| w.0.clone()).collect(),
            h: self
                .h
                .iter()
                .map(|t| t.0.iter().map(|c| c.to_expr_string()).collect())
                .collect(),
            filtration: self.filtration.clone(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: PresentationFile = serde_json::from_str(text)?;
        Self::from_file_model(&file)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.to_file_model())?)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json(&text)
    }
}

impl fmt::Display for CGLPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} (N = {}, torus rank {}, {} derivation{})",
            self.name,
            self.n,
            self.d,
            self.delta.len(),
            if self.delta.len() == 1 { "" } else { "s" }
        )
    }
}

/// On-disk form of a presentation. Coefficients and derivation values are
/// expression strings; delta indices are 1-based.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PresentationFile {
    pub name: String,
    #[serde(rename = "N")]
    pub n: usize,
    pub d: usize,
    pub generators: Vec<String>,
    pub lambda: Vec<Vec<String>>,
    #[serde(default)]
    pub delta: Vec<DeltaEntry>,
    pub weights: Vec<Vec<i64>>,
    pub h: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub filtration: Option<Vec<u32>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DeltaEntry {
    pub j: usize,
    pub i: usize,
    pub value: String,
}

/// Check every defining condition on the presentation data itself:
/// multiplicative skew-symmetry of lambda, the torus elements h_j realizing
/// the automorphisms, no eigenvalue q_j a root of unity, and weight
/// homogeneity of every derivation value. Failures become report entries
/// with witnesses, never errors.
pub fn validate_structure(pres: &CGLPresentation) -> Report {
    let n = pres.n();
    let mut report = Report::new(pres.name());

    let mut bad = Vec::new();
    for j in 0..n {
        if !pres.lambda(j, j).is_one() {
            bad.push(format!("lambda[{0}][{0}] = {1}", j + 1, pres.lambda(j, j)));
        }
        for i in 0..j {
            let prod = pres.lambda(j, i).mul(pres.lambda(i, j));
            if !prod.is_one() {
                bad.push(format!(
                    "lambda[{}][{}]*lambda[{}][{}] = {}",
                    j + 1,
                    i + 1,
                    i + 1,
                    j + 1,
                    prod
                ));
            }
        }
    }
    push_outcome(&mut report, "lambda multiplicatively skew-symmetric", bad);

    let mut bad = Vec::new();
    for j in 0..n {
        for i in 0..j {
            match pres.chi(&pres.h(j).0, pres.weight(i)) {
                Ok(chi) if &chi == pres.lambda(j, i) => {}
                Ok(chi) => bad.push(format!(
                    "chi_{}(h_{}) = {} but lambda[{}][{}] = {}",
                    pres.gen_name(i),
                    j + 1,
                    chi,
                    j + 1,
                    i + 1,
                    pres.lambda(j, i)
                )),
                Err(e) => bad.push(e.to_string()),
            }
        }
    }
    push_outcome(&mut report, "h_j realizes the automorphism sigma_j", bad);

    let mut bad = Vec::new();
    for j in 0..n {
        match pres.q_j(j).is_root_of_unity() {
            Ok(false) => {}
            Ok(true) => bad.push(format!("q_{} = {}", j + 1, pres.q_j(j))),
            Err(e) => bad.push(e.to_string()),
        }
    }
    push_outcome(&mut report, "no eigenvalue q_j is a root of unity", bad);

    let mut bad = Vec::new();
    for (&(j, i), value) in pres.delta_map() {
        if !value.within_level(j) {
            bad.push(format!("delta({}, {})", j + 1, i + 1));
        }
    }
    push_outcome(
        &mut report,
        "derivation values live strictly below their level",
        bad,
    );

    let mut bad = Vec::new();
    for (&(j, i), value) in pres.delta_map() {
        let expected = Weight(
            (0..pres.d())
                .map(|t| pres.weight(i).0[t] + pres.weight(j).0[t])
                .collect(),
        );
        for (m, _) in value.terms() {
            let got = pres.mono_weight(m);
            if got != expected {
                bad.push(format!(
                    "delta({}, {}) monomial {} has weight {:?}, expected {:?}",
                    j + 1,
                    i + 1,
                    Element::from_mono(pres.n(), m.clone(), CoeffRat::one())
                        .to_expr_string(pres.gen_names()),
                    got.0,
                    expected.0
                ));
            }
        }
    }
    push_outcome(&mut report, "derivation values are weight homogeneous", bad);

    report
}

fn push_outcome(report: &mut Report, name: &str, bad: Vec<String>) {
    if bad.is_empty() {
        report.pass(name);
    } else {
        report.fail(name, bad.join("; "));
    }
}

/// For every pair i < j, find the least s with delta_j^(s+1)(x_i) = 0, or
/// record a failure if no power up to `bound` vanishes.
pub fn verify_local_nilpotence(pres: &CGLPresentation, bound: u32) -> Report {
    let mut report = Report::new(pres.name());
    let ctx = Ctx::new(pres).with_bound(bound);
    for j in 1..pres.n() {
        for i in 0..j {
            let name = format!(
                "nilpotence of delta_{} at {}",
                j + 1,
                pres.gen_name(i)
            );
            let x = Element::generator(pres.n(), i);
            match ctx.delta_nilpotence_order(j, &x) {
                Ok(s) => report.push(name, true, Some(format!("s = {s}"))),
                Err(Error::BoundExceeded { .. }) => report.fail(
                    name,
                    format!("no power up to {bound} vanishes"),
                ),
                Err(e) => report.fail(name, e.to_string()),
            }
        }
    }
    report
}

/// Check sigma_j delta_j = q_j delta_j sigma_j on every generator below j,
/// evaluating the two sides by independent routes.
pub fn verify_sigma_delta_relation(pres: &CGLPresentation) -> Result<bool> {
    let ctx = Ctx::new(pres);
    for (&(j, i), _) in pres.delta_map() {
        let x = Element::generator(pres.n(), i);
        let lhs = ctx.apply_sigma(j, &ctx.apply_delta(j, &x)?, 1)?;
        let sigma_x = x.scale(pres.lambda(j, i));
        let rhs = ctx.apply_delta(j, &sigma_x)?.scale(pres.q_j(j));
        if lhs != rhs {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Diamond-lemma style consistency: every cubic overlap x_k x_j x_i is
/// reduced along four independent routes (leftmost and rightmost redex
/// selection in the word reducer, and both association orders in the
/// closed-form engine), plus seeded random words reduced under the two
/// strategies. Any disagreement means the presentation data does not
/// define an associative algebra with the claimed basis.
pub fn verify_confluence(
    pres: &CGLPresentation,
    degree_bound: u32,
    seed: u64,
    trials: u32,
) -> Result<Report> {
    let mut report = Report::new(pres.name());
    let ctx = Ctx::new(pres);
    let n = pres.n();
    let mut overlaps = 0usize;
    let mut failed = false;
    for k in 2..n {
        for j in 1..k {
            for i in 0..j {
                overlaps += 1;
                let word = [k, j, i];
                let left = ctx.rewrite_word(&word, RewriteStrategy::LeftmostFirst)?;
                let right = ctx.rewrite_word(&word, RewriteStrategy::RightmostFirst)?;
                let xk = Element::generator(n, k);
                let xj = Element::generator(n, j);
                let xi = Element::generator(n, i);
                let assoc_a = ctx.mul(&ctx.mul(&xk, &xj)?, &xi)?;
                let assoc_b = ctx.mul(&xk, &ctx.mul(&xj, &xi)?)?;
                if left != right || left != assoc_a || left != assoc_b {
                    failed = true;
                    report.fail(
                        format!(
                            "overlap ({}, {}, {})",
                            pres.gen_name(k),
                            pres.gen_name(j),
                            pres.gen_name(i)
                        ),
                        format!(
                            "leftmost = {}, rightmost = {}",
                            left.to_expr_string(pres.gen_names()),
                            right.to_expr_string(pres.gen_names())
                        ),
                    );
                }
            }
        }
    }
    if !failed {
        report.push(
            "cubic overlap ambiguities",
            true,
            Some(format!("{overlaps} triples, 4 reduction routes each")),
        );
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut bad = Vec::new();
    for _ in 0..trials {
        let len = rng.gen_range(1..=degree_bound.max(1) as usize);
        let word: Vec<usize> = (0..len).map(|_| rng.gen_range(0..n)).collect();
        let left = ctx.rewrite_word(&word, RewriteStrategy::LeftmostFirst)?;
        let right = ctx.rewrite_word(&word, RewriteStrategy::RightmostFirst)?;
        if left != right {
            let pretty: Vec<&str> = word.iter().map(|&g| pres.gen_name(g)).collect();
            bad.push(pretty.join("*"));
        }
    }
    if bad.is_empty() {
        report.push(
            "randomized strategy independence",
            true,
            Some(format!("{trials} words of degree <= {degree_bound}")),
        );
    } else {
        report.fail("randomized strategy independence", bad.join("; "));
    }
    Ok(report)
}
