//! Artin braid groups with an exact word problem, the half twist `Δ`, the
//! mirror homomorphism and generalized-torsion certificates.
//!
//! Braid equality is decided by the Artin action on `F_n = ⟨x_1, …, x_n⟩`,
//! which is faithful. Conjugation by the Möbius-strip braid `Γ` is modelled
//! by the mirror map `σ_j^ε ↦ σ_{n−j}^{−ε}`; `Γ` itself is never a word.

use std::fmt;
use std::sync::Arc;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::magnus::{Group, Report};
use crate::text::{parse_err, tokenize};
use crate::words::{Generator, GeneratorMap, Word};

/// A braid word `σ_{i_1}^{ε_1} ⋯ σ_{i_k}^{ε_k}` in `B_n`. Not reduced:
/// equality is semantic, see [`braid_equal`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BraidWord {
    n: u32,
    letters: Vec<(u32, i8)>,
}

impl BraidWord {
    pub fn new(n: u32, letters: Vec<(u32, i8)>) -> Result<Self> {
        if n < 1 {
            return Err(Error::Precondition("a braid group needs n >= 1".into()));
        }
        for &(i, e) in &letters {
            if i == 0 || i >= n {
                return Err(Error::Precondition(format!("s{i} out of range for n = {n}")));
            }
            if e != 1 && e != -1 {
                return Err(Error::Precondition(format!("exponent {e} is not ±1")));
            }
        }
        Ok(BraidWord { n, letters })
    }

    pub fn identity(n: u32) -> Self {
        BraidWord { n, letters: Vec::new() }
    }

    /// `σ_i^e`, expanded into `|e|` letters.
    pub fn sigma(n: u32, i: u32, e: i32) -> Result<Self> {
        let sign = if e < 0 { -1 } else { 1 };
        BraidWord::new(n, vec![(i, sign); e.unsigned_abs() as usize])
    }

    /// Parse `s1 s2^-1 s3^2`; `1` is the empty word.
    pub fn parse(s: &str, n: u32) -> Result<Self> {
        let mut letters = Vec::new();
        for tok in tokenize(s)? {
            let idx = tok
                .base
                .strip_prefix('s')
                .and_then(|r| r.parse::<u32>().ok())
                .ok_or_else(|| parse_err(tok.pos, format!("expected `s<i>`, got `{}`", tok.base)))?;
            if idx == 0 || idx >= n {
                return Err(parse_err(tok.pos, format!("s{idx} out of range for n = {n}")));
            }
            let e = if tok.exp < 0 { -1 } else { 1 };
            letters.extend(std::iter::repeat_n((idx, e), tok.exp.unsigned_abs() as usize));
        }
        BraidWord::new(n, letters)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn letters(&self) -> &[(u32, i8)] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Concatenation; adjacent `σ σ⁻¹` pairs at the seam are cancelled.
    pub fn multiply(&self, other: &BraidWord) -> BraidWord {
        debug_assert_eq!(self.n, other.n);
        let mut letters = self.letters.clone();
        for &l in &other.letters {
            if letters.last().is_some_and(|&(i, e)| i == l.0 && e == -l.1) {
                letters.pop();
            } else {
                letters.push(l);
            }
        }
        BraidWord { n: self.n, letters }
    }

    pub fn inverse(&self) -> BraidWord {
        BraidWord {
            n: self.n,
            letters: self.letters.iter().rev().map(|&(i, e)| (i, -e)).collect(),
        }
    }

    pub fn conjugate_by(&self, h: &BraidWord) -> BraidWord {
        h.multiply(self).multiply(&h.inverse())
    }

    /// The induced permutation: `perm[k]` is where the string starting at
    /// position `k + 1` ends, zero-based.
    pub fn permutation(&self) -> Vec<u32> {
        let mut at: Vec<u32> = (0..self.n).collect();
        for &(i, _) in &self.letters {
            at.swap(i as usize - 1, i as usize);
        }
        let mut perm = vec![0; self.n as usize];
        for (pos, &start) in at.iter().enumerate() {
            perm[start as usize] = pos as u32;
        }
        perm
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("1");
        }
        for (k, &(i, e)) in self.letters.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            write!(f, "s{i}")?;
            if e < 0 {
                f.write_str("^-1")?;
            }
        }
        Ok(())
    }
}

impl Serialize for BraidWord {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

fn sigma_map(i: u32, e: i8) -> GeneratorMap {
    let (xi, xj) = (Generator::x(i), Generator::x(i + 1));
    let (a, b) = (Word::gen(xi), Word::gen(xj));
    if e > 0 {
        GeneratorMap::from_images([(xi, a.multiply(&b).multiply(&a.inverse())), (xj, a)])
    } else {
        GeneratorMap::from_images([(xi, b.clone()), (xj, b.inverse().multiply(&a).multiply(&b))])
    }
}

/// The Artin action on `F_n`: `σ_i` sends `x_i ↦ x_i x_{i+1} x_i⁻¹`,
/// `x_{i+1} ↦ x_i` and fixes the rest; a word acts by composing its
/// letters' automorphisms, leftmost outermost.
pub fn artin_action(b: &BraidWord) -> GeneratorMap {
    let gens: Vec<Generator> = (1..=b.n).map(Generator::x).collect();
    let mut images: Vec<Word> = gens.iter().map(|g| Word::gen(*g)).collect();
    for &(i, e) in &b.letters {
        let current = GeneratorMap::from_images(gens.iter().copied().zip(images.iter().cloned()));
        let step = sigma_map(i, e);
        for k in [i, i + 1] {
            images[k as usize - 1] = current.apply(&step.image(&Generator::x(k)));
        }
    }
    GeneratorMap::from_images(gens.into_iter().zip(images).filter(|(g, w)| *w != Word::gen(*g)))
}

/// Braid equality via the Artin action.
pub fn braid_equal(u: &BraidWord, v: &BraidWord) -> bool {
    assert_eq!(u.n, v.n, "braid_equal needs words in the same B_n");
    artin_action(u) == artin_action(v)
}

pub fn braid_is_trivial(b: &BraidWord) -> bool {
    artin_action(b) == GeneratorMap::identity()
}

/// `Δ = (σ_1⋯σ_{n−1})(σ_1⋯σ_{n−2})⋯(σ_1σ_2)σ_1`
pub fn delta_word(n: u32) -> Result<BraidWord> {
    if n < 2 {
        return Err(Error::Precondition(format!("delta_word needs n >= 2, got {n}")));
    }
    let letters = (1..n).rev().flat_map(|top| (1..=top).map(|i| (i, 1i8))).collect();
    BraidWord::new(n, letters)
}

/// Letterwise `σ_j^ε ↦ σ_{n−j}^{−ε}`.
pub fn mirror(b: &BraidWord) -> BraidWord {
    BraidWord {
        n: b.n,
        letters: b.letters.iter().map(|&(j, e)| (b.n - j, -e)).collect(),
    }
}

/// Conjugation by `Γ`, modelled as [`mirror`].
pub fn gamma_conjugate(b: &BraidWord) -> BraidWord {
    mirror(b)
}

pub fn is_pure(b: &BraidWord) -> bool {
    b.permutation().iter().enumerate().all(|(k, &p)| p == k as u32)
}

fn reversal(n: u32) -> Vec<u32> {
    (0..n).rev().collect()
}

/// `Γ` and `Δ` both induce the order-reversing permutation, so `ΓΔ` is pure.
pub fn gamma_delta_is_pure(n: u32) -> Result<bool> {
    let delta = delta_word(n)?.permutation();
    let gamma = reversal(n);
    Ok((0..n as usize).all(|k| gamma[delta[k] as usize] == k as u32))
}

fn eq_row(r: &mut Report, label: String, lhs: &BraidWord, rhs: &BraidWord) {
    r.checked += 1;
    if !braid_equal(lhs, rhs) {
        r.violation(vec![label, lhs.to_string(), rhs.to_string()], "equal", "different");
    }
}

/// `Δ σ_i Δ⁻¹ = σ_{n−i}` for every `i`.
pub fn check_delta_relation(n: u32) -> Result<Report> {
    let delta = delta_word(n)?;
    let mut r = Report::default();
    for i in 1..n {
        let lhs = BraidWord::sigma(n, i, 1)?.conjugate_by(&delta);
        eq_row(&mut r, format!("i={i}"), &lhs, &BraidWord::sigma(n, n - i, 1)?);
    }
    Ok(r)
}

/// Mirror images of the braid relations are braid-equal.
pub fn mirror_respects_relations(n: u32) -> Result<Report> {
    let mut r = Report::default();
    let w = |letters: Vec<(u32, i8)>| BraidWord::new(n, letters);
    for i in 1..n.saturating_sub(1) {
        let lhs = w(vec![(i, 1), (i + 1, 1), (i, 1)])?;
        let rhs = w(vec![(i + 1, 1), (i, 1), (i + 1, 1)])?;
        eq_row(&mut r, format!("braid({i},{})", i + 1), &mirror(&lhs), &mirror(&rhs));
    }
    for i in 1..n {
        for j in i + 2..n {
            let lhs = w(vec![(i, 1), (j, 1)])?;
            let rhs = w(vec![(j, 1), (i, 1)])?;
            eq_row(&mut r, format!("far({i},{j})"), &mirror(&lhs), &mirror(&rhs));
        }
    }
    Ok(r)
}

/// `B_n` with the Artin-action word problem.
#[derive(Debug, Clone, Copy)]
pub struct BraidGroup {
    pub n: u32,
}

impl Group for BraidGroup {
    type Elem = BraidWord;

    fn identity(&self) -> BraidWord {
        BraidWord::identity(self.n)
    }

    fn multiply(&self, a: &BraidWord, b: &BraidWord) -> BraidWord {
        a.multiply(b)
    }

    fn invert(&self, a: &BraidWord) -> BraidWord {
        a.inverse()
    }

    fn is_identity(&self, a: &BraidWord) -> bool {
        braid_is_trivial(a)
    }

    fn equal(&self, a: &BraidWord, b: &BraidWord) -> bool {
        braid_equal(a, b)
    }
}

/// A conjugating element `h`, or only its conjugation action `g ↦ h g h⁻¹`
/// when `h` lives outside the group being computed in.
#[derive(Clone)]
pub enum Conjugator<E> {
    By(E),
    Action {
        label: String,
        act: Arc<dyn Fn(&E) -> E + Send + Sync>,
    },
}

impl<E: fmt::Display> fmt::Display for Conjugator<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Conjugator::By(h) => h.fmt(f),
            Conjugator::Action { label, .. } => f.write_str(label),
        }
    }
}

impl<E: fmt::Debug> fmt::Debug for Conjugator<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Conjugator::By(h) => f.debug_tuple("By").field(h).finish(),
            Conjugator::Action { label, .. } => f.debug_tuple("Action").field(label).finish(),
        }
    }
}

/// True iff `g ≠ 1` and `(h_1 g h_1⁻¹)⋯(h_k g h_k⁻¹) = 1`, both decided by
/// the group's word problem.
pub fn verify_generalized_torsion<G: Group>(
    group: &G,
    g: &G::Elem,
    conjugators: &[Conjugator<G::Elem>],
) -> Result<bool> {
    if conjugators.is_empty() {
        return Err(Error::Precondition("the conjugator list is empty".into()));
    }
    if group.is_identity(g) {
        return Ok(false);
    }
    let product = conjugators.iter().fold(group.identity(), |acc, h| {
        let c = match h {
            Conjugator::By(h) => group.conjugate(g, h),
            Conjugator::Action { act, .. } => act(g),
        };
        group.multiply(&acc, &c)
    });
    Ok(group.is_identity(&product))
}

/// The conjugator `ΓΔ` in `B_n(D)`-terms: `b ↦ mirror(Δ b Δ⁻¹)`.
pub fn gamma_delta_conjugator(n: u32) -> Result<Conjugator<BraidWord>> {
    let delta = delta_word(n)?;
    Ok(Conjugator::Action {
        label: "ΓΔ".into(),
        act: Arc::new(move |b: &BraidWord| gamma_conjugate(&b.conjugate_by(&delta))),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum StepStatus {
    Checked,
    Assumed,
}

/// What a checked step asserts about its words, so it can be re-verified
/// by any word-problem oracle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    Equal,
    NotEqual,
    Pure,
    ReversalPure,
}

#[derive(Debug, Clone, Serialize)]
pub struct CertificateStep {
    pub claim: String,
    pub status: StepStatus,
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub relation: Option<Relation>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lhs: Option<BraidWord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rhs: Option<BraidWord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub holds: Option<bool>,
}

pub const CERTIFICATE_SCHEMA: &str = "braidorder.gt-certificate/1";

/// Generalized torsion in `PB_n(M)`, `M` non-orientable:
/// `σ_i² · (ΓΔ)σ_i²(ΓΔ)⁻¹ = 1` with `σ_i² ≠ 1`.
#[derive(Debug, Clone, Serialize)]
pub struct GtCertificate {
    pub schema: &'static str,
    pub n: u32,
    pub i: u32,
    pub surface: &'static str,
    pub g_word: BraidWord,
    pub conjugators: Vec<String>,
    pub steps: Vec<CertificateStep>,
    pub valid: bool,
}

fn checked(
    claim: String,
    detail: &str,
    relation: Relation,
    lhs: Option<BraidWord>,
    rhs: Option<BraidWord>,
) -> CertificateStep {
    CertificateStep {
        claim,
        status: StepStatus::Checked,
        detail: detail.into(),
        relation: Some(relation),
        lhs,
        rhs,
        holds: None,
    }
}

fn assumed(claim: &str, detail: &str) -> CertificateStep {
    CertificateStep {
        claim: claim.into(),
        status: StepStatus::Assumed,
        detail: detail.into(),
        relation: None,
        lhs: None,
        rhs: None,
        holds: None,
    }
}

/// Re-evaluates one checked step with the Artin-action word problem.
pub fn evaluate_step(step: &CertificateStep, n: u32) -> Result<bool> {
    let need = |w: &Option<BraidWord>| {
        w.clone()
            .ok_or_else(|| Error::Verification(format!("step `{}` lacks its words", step.claim)))
    };
    Ok(match step.relation {
        None => true,
        Some(Relation::Equal) => braid_equal(&need(&step.lhs)?, &need(&step.rhs)?),
        Some(Relation::NotEqual) => !braid_equal(&need(&step.lhs)?, &need(&step.rhs)?),
        Some(Relation::Pure) => is_pure(&need(&step.lhs)?),
        Some(Relation::ReversalPure) => gamma_delta_is_pure(n)?,
    })
}

/// Builds the certificate for `(n, i)` and checks every machine-checkable step.
pub fn make_gt_certificate(n: u32, i: u32) -> Result<GtCertificate> {
    if n < 2 {
        return Err(Error::Precondition(format!("certificates need n >= 2, got {n}")));
    }
    if i == 0 || i >= n {
        return Err(Error::Precondition(format!("need 1 <= i <= n-1, got i = {i}, n = {n}")));
    }
    let g = BraidWord::sigma(n, i, 2)?;
    let delta = delta_word(n)?;
    let conj = g.conjugate_by(&delta);
    let mirrored = gamma_conjugate(&conj);
    let j = n - i;
    let steps = vec![
        checked(
            format!("Δ σ{i}² Δ⁻¹ = σ{j}²"),
            "conjugation by the half twist reverses generator indices; Artin action",
            Relation::Equal,
            Some(conj.clone()),
            Some(BraidWord::sigma(n, j, 2)?),
        ),
        checked(
            format!("(ΓΔ) σ{i}² (ΓΔ)⁻¹ = Γ σ{j}² Γ⁻¹ = mirror(σ{j}²) = σ{i}⁻²"),
            "conjugation by Γ is the mirror map σ_j^ε ↦ σ_{n-j}^-ε; Artin action",
            Relation::Equal,
            Some(mirror(&BraidWord::sigma(n, j, 2)?)),
            Some(BraidWord::sigma(n, i, -2)?),
        ),
        checked(
            format!("σ{i}² · (ΓΔ) σ{i}² (ΓΔ)⁻¹ = 1"),
            "σ_i² times mirror(Δ σ_i² Δ⁻¹), compared with the empty word; Artin action",
            Relation::Equal,
            Some(g.multiply(&mirrored)),
            Some(BraidWord::identity(n)),
        ),
        checked(
            format!("σ{i}² ≠ 1 in B_{n}(D)"),
            "the Artin action of σ_i² is not the identity",
            Relation::NotEqual,
            Some(g.clone()),
            Some(BraidWord::identity(n)),
        ),
        checked(
            format!("σ{i}² is pure"),
            "induced permutation is trivial",
            Relation::Pure,
            Some(g.clone()),
            None,
        ),
        checked(
            "ΓΔ is pure".into(),
            "Δ and Γ both induce the order-reversing permutation of the punctures",
            Relation::ReversalPure,
            None,
            None,
        ),
        assumed(
            "the relation Δ σ_i Δ⁻¹ = σ_{n-i} holds in B_n(M)",
            "cited: an isotopy of the disk D ⊂ M extends by the identity outside D",
        ),
        assumed(
            "σ_i² ≠ 1 in PB_n(M)",
            "cited: B_n(D) embeds in B_n(M) for M other than S² and ℝP²",
        ),
    ];
    let mut cert = GtCertificate {
        schema: CERTIFICATE_SCHEMA,
        n,
        i,
        surface: "nonorientable",
        g_word: g,
        conjugators: vec!["1".into(), "ΓΔ".into()],
        steps,
        valid: false,
    };
    for step in &mut cert.steps {
        if step.status == StepStatus::Checked {
            step.holds = Some(evaluate_step(step, n)?);
        }
    }
    cert.valid = cert.steps.iter().all(|s| s.holds != Some(false));
    if !cert.valid {
        let bad: Vec<&str> = cert
            .steps
            .iter()
            .filter(|s| s.holds == Some(false))
            .map(|s| s.claim.as_str())
            .collect();
        return Err(Error::Verification(format!(
            "certificate ({n}, {i}) failed: {}",
            bad.join("; ")
        )));
    }
    Ok(cert)
}

/// Re-checks every checked step of a certificate from its recorded words.
pub fn verify_certificate(cert: &GtCertificate) -> Result<bool> {
    for step in &cert.steps {
        if step.status == StepStatus::Checked && !evaluate_step(step, cert.n)? {
            return Ok(false);
        }
    }
    Ok(cert.steps.iter().any(|s| s.status == StepStatus::Checked))
}
