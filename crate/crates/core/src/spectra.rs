//! Torus-invariant prime spectra of quantum affine spaces.
//!
//! For a quantum affine space with a full-rank torus the torus-invariant
//! primes are exactly the ideals generated by subsets of the generators, so
//! the spectrum is the boolean lattice of subsets. On that finite model the
//! big structural facts become machine-checkable: Tauvel's height formula
//! (height plus Gelfand-Kirillov dimension of the quotient is constant),
//! catenarity (saturated chains between comparable primes share one length),
//! and normal separation (a strictly larger prime contains a nonzero normal
//! element modulo the smaller one). A generic finite-poset engine handles
//! the chain arguments and also accepts user-supplied posets.

use crate::error::{Error, Result};
use crate::normal::verify_normal;
use crate::ore::Element;
use crate::presentation::{CGLPresentation, TorusElement, Weight};
use crate::report::Report;
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

/// Largest generator count for which the 2^N subset lattice is enumerated.
const MAX_LATTICE_RANK: usize = 16;

/// A torus-invariant prime of a quantum affine space: the ideal generated by
/// the generators named in the vanishing set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct HPrime {
    mask: u32,
    n: usize,
}

impl HPrime {
    pub fn new(mask: u32, n: usize) -> Result<Self> {
        if n > MAX_LATTICE_RANK {
            return Err(Error::BoundExceeded {
                what: format!("subset lattice enumeration for N = {n}"),
                bound: MAX_LATTICE_RANK as u64,
            });
        }
        if mask >= (1u32 << n) {
            return Err(Error::IndexOutOfRange {
                index: mask as usize,
                n: (1usize << n) - 1,
            });
        }
        Ok(HPrime { mask, n })
    }

    pub fn mask(&self) -> u32 {
        self.mask
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of vanishing generators.
    pub fn size(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn contains(&self, i: usize) -> bool {
        i < self.n && self.mask & (1 << i) != 0
    }

    pub fn is_subset_of(&self, other: &HPrime) -> bool {
        self.mask & !other.mask == 0
    }

    /// 0-based indices of the vanishing generators.
    pub fn indices(&self) -> Vec<usize> {
        (0..self.n).filter(|&i| self.contains(i)).collect()
    }

    /// Display form with 1-based generator positions, e.g. "{1,3}".
    pub fn label(&self) -> String {
        let inside: Vec<String> = self.indices().iter().map(|i| (i + 1).to_string()).collect();
        format!("{{{}}}", inside.join(","))
    }
}

impl fmt::Display for HPrime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}

/// A finite poset given by its cover relation, with labels for reporting and
/// a line-oriented text form ("a < b" per cover).
#[derive(Debug, Clone, PartialEq)]
pub struct FinitePoset {
    labels: Vec<String>,
    covers: BTreeSet<(usize, usize)>,
    topo: Vec<usize>,
}

impl FinitePoset {
    pub fn new(labels: Vec<String>, covers: BTreeSet<(usize, usize)>) -> Result<Self> {
        let n = labels.len();
        let mut seen = BTreeSet::new();
        for label in &labels {
            if label.is_empty() || !seen.insert(label) {
                return Err(Error::Parse {
                    pos: 0,
                    msg: format!("poset labels must be unique and nonempty, got '{label}'"),
                });
            }
        }
        for &(a, b) in &covers {
            if a >= n || b >= n || a == b {
                return Err(Error::Parse {
                    pos: 0,
                    msg: format!("cover ({a}, {b}) is out of range or a self-loop"),
                });
            }
        }
        let mut indegree = vec![0usize; n];
        for &(_, b) in &covers {
            indegree[b] += 1;
        }
        let mut queue: Vec<usize> = (0..n).filter(|&v| indegree[v] == 0).collect();
        let mut topo = Vec::with_capacity(n);
        let mut head = 0;
        while head < queue.len() {
            let v = queue[head];
            head += 1;
            topo.push(v);
            for &(a, b) in &covers {
                if a == v {
                    indegree[b] -= 1;
                    if indegree[b] == 0 {
                        queue.push(b);
                    }
                }
            }
        }
        if topo.len() != n {
            return Err(Error::Parse {
                pos: 0,
                msg: "the cover relation contains a cycle".into(),
            });
        }
        Ok(FinitePoset {
            labels,
            covers,
            topo,
        })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn covers(&self) -> &BTreeSet<(usize, usize)> {
        &self.covers
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Parse the text form: one cover "a < b" per line, blank lines ignored,
    /// labels collected in order of first appearance.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut labels: Vec<String> = Vec::new();
        let mut index: BTreeMap<String, usize> = BTreeMap::new();
        let mut covers = BTreeSet::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let Some((a, b)) = line.split_once('<') else {
                return Err(Error::Parse {
                    pos: lineno + 1,
                    msg: format!("expected 'a < b', got '{line}'"),
                });
            };
            let mut intern = |s: &str| -> Result<usize> {
                let s = s.trim();
                if s.is_empty() {
                    return Err(Error::Parse {
                        pos: lineno + 1,
                        msg: "empty label".into(),
                    });
                }
                Ok(*index.entry(s.to_string()).or_insert_with(|| {
                    labels.push(s.to_string());
                    labels.len() - 1
                }))
            };
            let a = intern(a)?;
            let b = intern(b)?;
            covers.insert((a, b));
        }
        FinitePoset::new(labels, covers)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for &(a, b) in &self.covers {
            out.push_str(&format!("{} < {}\n", self.labels[a], self.labels[b]));
        }
        out
    }

    fn forward_reachable(&self, from: usize) -> Vec<bool> {
        let mut seen = vec![false; self.len()];
        seen[from] = true;
        let mut stack = vec![from];
        while let Some(v) = stack.pop() {
            for &(a, b) in &self.covers {
                if a == v && !seen[b] {
                    seen[b] = true;
                    stack.push(b);
                }
            }
        }
        seen
    }

    fn backward_reachable(&self, from: usize) -> Vec<bool> {
        let mut seen = vec![false; self.len()];
        seen[from] = true;
        let mut stack = vec![from];
        while let Some(v) = stack.pop() {
            for &(a, b) in &self.covers {
                if b == v && !seen[a] {
                    seen[a] = true;
                    stack.push(a);
                }
            }
        }
        seen
    }

    /// Whether a <= b in the order generated by the covers.
    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.forward_reachable(a)[b]
    }

    /// Shortest and longest saturated chains from a to b, as index paths
    /// through the cover relation, or None when a is not below b.
    pub fn chain_extremes(&self, a: usize, b: usize) -> Option<(Vec<usize>, Vec<usize>)> {
        let down = self.forward_reachable(a);
        if !down[b] {
            return None;
        }
        let up = self.backward_reachable(b);
        let inside = |v: usize| down[v] && up[v];
        let mut shortest: Vec<Option<(usize, usize)>> = vec![None; self.len()];
        let mut longest: Vec<Option<(usize, usize)>> = vec![None; self.len()];
        shortest[a] = Some((0, a));
        longest[a] = Some((0, a));
        for &v in &self.topo {
            if !inside(v) {
                continue;
            }
            let (Some(sv), Some(lv)) = (shortest[v], longest[v]) else {
                continue;
            };
            for &(x, y) in &self.covers {
                if x != v || !inside(y) {
                    continue;
                }
                if shortest[y].map_or(true, |(len, _)| sv.0 + 1 < len) {
                    shortest[y] = Some((sv.0 + 1, v));
                }
                if longest[y].map_or(true, |(len, _)| lv.0 + 1 > len) {
                    longest[y] = Some((lv.0 + 1, v));
                }
            }
        }
        let walk = |table: &[Option<(usize, usize)>]| {
            let mut path = vec![b];
            let mut cur = b;
            while cur != a {
                cur = table[cur].expect("interval nodes are reachable").1;
                path.push(cur);
            }
            path.reverse();
            path
        };
        Some((walk(&shortest), walk(&longest)))
    }
}

/// Failure evidence for catenarity: one comparable pair with two saturated
/// chains of different lengths.
#[derive(Debug, Clone, Serialize)]
pub struct CatenaryWitness {
    pub lower: String,
    pub upper: String,
    pub short_chain: Vec<String>,
    pub long_chain: Vec<String>,
}

/// Result of the catenarity scan over all comparable pairs.
#[derive(Debug, Clone, Serialize)]
pub struct CatenaryOutcome {
    pub catenary: bool,
    pub witness: Option<CatenaryWitness>,
}

/// Check that for every comparable pair all saturated chains between the two
/// elements have the same length; the first violation (in index order)
/// becomes the witness.
pub fn catenary_check(poset: &FinitePoset) -> CatenaryOutcome {
    for a in 0..poset.len() {
        for b in 0..poset.len() {
            if a == b {
                continue;
            }
            let Some((short, long)) = poset.chain_extremes(a, b) else {
                continue;
            };
            if short.len() != long.len() {
                let name = |path: &[usize]| {
                    path.iter()
                        .map(|&v| poset.label(v).to_string())
                        .collect::<Vec<_>>()
                };
                return CatenaryOutcome {
                    catenary: false,
                    witness: Some(CatenaryWitness {
                        lower: poset.label(a).to_string(),
                        upper: poset.label(b).to_string(),
                        short_chain: name(&short),
                        long_chain: name(&long),
                    }),
                };
            }
        }
    }
    CatenaryOutcome {
        catenary: true,
        witness: None,
    }
}

/// Require a quantum affine space whose lambda entries are signed powers of
/// q, the uniparameter model whose torus-invariant primes this module
/// enumerates.
fn require_affine(qaff: &CGLPresentation) -> Result<()> {
    if let Some((&(j, i), _)) = qaff.delta_map().iter().next() {
        return Err(Error::BadPresentation(format!(
            "the presentation still carries delta_{}({}); delete the derivations first",
            j + 1,
            qaff.gen_name(i)
        )));
    }
    if qaff.n() > MAX_LATTICE_RANK {
        return Err(Error::BoundExceeded {
            what: format!("subset lattice enumeration for N = {}", qaff.n()),
            bound: MAX_LATTICE_RANK as u64,
        });
    }
    for j in 0..qaff.n() {
        for i in 0..j {
            if qaff.lambda(j, i).as_signed_q_power().is_none() {
                return Err(Error::UnsupportedTorus(format!(
                    "lambda({}, {}) = {} is not a signed power of q, so the natural \
                     rank-N torus model does not apply",
                    j + 1,
                    i + 1,
                    qaff.lambda(j, i)
                )));
            }
        }
    }
    Ok(())
}

/// All torus-invariant primes of the quantum affine space: one per subset of
/// the generators.
pub fn hprimes(qaff: &CGLPresentation) -> Result<Vec<HPrime>> {
    require_affine(qaff)?;
    let n = qaff.n();
    (0u32..1 << n).map(|mask| HPrime::new(mask, n)).collect()
}

/// The boolean lattice of torus-invariant primes, ordered by inclusion.
/// Element i of the poset is the subset with bitmask i.
pub fn hprime_poset(qaff: &CGLPresentation) -> Result<FinitePoset> {
    let primes = hprimes(qaff)?;
    let n = qaff.n();
    let labels: Vec<String> = primes.iter().map(|p| p.label()).collect();
    let mut covers = BTreeSet::new();
    for p in &primes {
        for i in 0..n {
            if !p.contains(i) {
                covers.insert((p.mask() as usize, (p.mask() | 1 << i) as usize));
            }
        }
    }
    FinitePoset::new(labels, covers)
}

/// Gelfand-Kirillov dimension of the quotient by W and the height of W:
/// the quotient is the quantum affine space on the complementary generators,
/// and the height is the length of the longest chain of primes below W.
pub fn gk_and_height(qaff: &CGLPresentation, w: &HPrime) -> Result<(usize, usize)> {
    require_affine(qaff)?;
    Ok((qaff.n() - w.size(), w.size()))
}

/// Check Tauvel's height formula over the whole lattice: height(W) computed
/// as the longest saturated chain from the zero ideal plus GK of the
/// quotient equals N, and in quotient form height(W'/W) + GK(R/W') equals
/// GK(R/W) for every nested pair.
pub fn tauvel_check(qaff: &CGLPresentation) -> Result<Report> {
    let primes = hprimes(qaff)?;
    let poset = hprime_poset(qaff)?;
    let n = qaff.n();
    let mut report = Report::new(format!("Tauvel height formula for {}", qaff.name()));

    let mut bad: Vec<String> = Vec::new();
    for p in &primes {
        let (gk, height) = gk_and_height(qaff, p)?;
        let chains = poset
            .chain_extremes(0, p.mask() as usize)
            .expect("the zero ideal sits below every prime");
        let chain_height = chains.1.len() - 1;
        if chain_height != height || height + gk != n {
            bad.push(format!(
                "{}: height {} (chains give {}) with GK {}",
                p.label(),
                height,
                chain_height,
                gk
            ));
        }
    }
    report.push(
        format!("height(W) + GK(R/W) = {n} for all {} primes", primes.len()),
        bad.is_empty(),
        if bad.is_empty() {
            None
        } else {
            Some(bad.join("; "))
        },
    );

    let mut bad_pairs: Vec<String> = Vec::new();
    let mut pair_count = 0usize;
    for upper in &primes {
        let mut sub = upper.mask();
        loop {
            let lower = HPrime::new(sub, n)?;
            pair_count += 1;
            let chains = poset
                .chain_extremes(lower.mask() as usize, upper.mask() as usize)
                .expect("a subset sits below its superset");
            let relative_height = chains.1.len() - 1;
            let (gk_upper, _) = gk_and_height(qaff, upper)?;
            let (gk_lower, _) = gk_and_height(qaff, &lower)?;
            if relative_height + gk_upper != gk_lower {
                bad_pairs.push(format!(
                    "{} inside {}: relative height {relative_height}, GK {gk_upper} vs {gk_lower}",
                    lower.label(),
                    upper.label()
                ));
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & upper.mask();
        }
    }
    report.push(
        format!("height(W'/W) + GK(R/W') = GK(R/W) for all {pair_count} nested pairs"),
        bad_pairs.is_empty(),
        if bad_pairs.is_empty() {
            None
        } else {
            Some(bad_pairs.join("; "))
        },
    );
    Ok(report)
}

/// The quotient by the prime W: the quantum affine space on the generators
/// outside W, with the natural full-rank torus.
pub fn quotient_presentation(qaff: &CGLPresentation, w: &HPrime) -> Result<CGLPresentation> {
    require_affine(qaff)?;
    let keep: Vec<usize> = (0..qaff.n()).filter(|&i| !w.contains(i)).collect();
    if keep.is_empty() {
        return Err(Error::ZeroElement);
    }
    let m = keep.len();
    let names: Vec<String> = keep.iter().map(|&i| qaff.gen_name(i).to_string()).collect();
    let lambda: Vec<Vec<crate::coeff::CoeffRat>> = keep
        .iter()
        .map(|&j| keep.iter().map(|&i| qaff.lambda(j, i).clone()).collect())
        .collect();
    let weights: Vec<Weight> = (0..m)
        .map(|i| {
            let mut w = vec![0i64; m];
            w[i] = 1;
            Weight(w)
        })
        .collect();
    let h: Vec<TorusElement> = (0..m)
        .map(|j| {
            let mut coords = Vec::with_capacity(m);
            for i in 0..m {
                coords.push(match i.cmp(&j) {
                    std::cmp::Ordering::Less => lambda[j][i].clone(),
                    std::cmp::Ordering::Equal => crate::coeff::CoeffRat::q(),
                    std::cmp::Ordering::Greater => crate::coeff::CoeffRat::one(),
                });
            }
            TorusElement(coords)
        })
        .collect();
    CGLPresentation::assemble(
        format!("{} / {}", qaff.name(), w.label()),
        names,
        m,
        lambda,
        BTreeMap::new(),
        weights,
        h,
    )
}

/// Normal separation across the lattice: for every proper nested pair
/// W inside W', the smallest generator index in W' \ W must map to a normal
/// element of the quotient by W. Every pair is checked; failures are listed.
pub fn normal_separation_check(qaff: &CGLPresentation, bound: u32) -> Result<Report> {
    let primes = hprimes(qaff)?;
    let n = qaff.n();
    let mut report = Report::new(format!("normal separation for {}", qaff.name()));
    let mut verified: BTreeMap<(u32, usize), bool> = BTreeMap::new();
    let mut bad: Vec<String> = Vec::new();
    let mut pair_count = 0usize;
    for upper in &primes {
        let mut sub = upper.mask();
        loop {
            if sub != upper.mask() {
                let lower = HPrime::new(sub, n)?;
                pair_count += 1;
                let j = (0..n)
                    .find(|&i| upper.contains(i) && !lower.contains(i))
                    .expect("a proper superset has an extra index");
                let ok = match verified.entry((lower.mask(), j)) {
                    std::collections::btree_map::Entry::Occupied(e) => *e.get(),
                    std::collections::btree_map::Entry::Vacant(slot) => {
                        let quotient = quotient_presentation(qaff, &lower)?;
                        let position = quotient
                            .gen_index(qaff.gen_name(j))
                            .expect("a surviving generator keeps its name");
                        let image = Element::generator(quotient.n(), position);
                        let ok = verify_normal(&quotient, &image, bound).is_ok();
                        *slot.insert(ok)
                    }
                };
                if !ok {
                    bad.push(format!(
                        "{} inside {}: {} is not normal in the quotient",
                        lower.label(),
                        upper.label(),
                        qaff.gen_name(j)
                    ));
                }
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & upper.mask();
        }
    }
    report.push(
        format!("separating generator is normal in the quotient for all {pair_count} proper pairs"),
        bad.is_empty(),
        if bad.is_empty() {
            None
        } else {
            Some(bad.join("; "))
        },
    );
    Ok(report)
}
