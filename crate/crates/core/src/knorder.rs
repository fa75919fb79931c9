//! The bi-order on the pure surface braid kernel `K_n`.
//!
//! `K_n = F_n ⋊ (F_{n−1} ⋊ (⋯ ⋊ F_2))`, where the factor at tuple position
//! `i` (`1 ≤ i ≤ n−1`) is the free group on the generators `f[i,j,γ]`,
//! `i < j ≤ n`, `γ ∈ π₁`. Elements are handled as explicit tuples
//! `(k_1, …, k_{n−1})`; multiplication across factors is not available
//! because only the `H1`-level action of the wall-crossing braids is known.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::braid::BraidWord;
use crate::error::{Error, Result};
use crate::magnus::{magnus_compare, Escalation, Group, OrderedGroup};
use crate::series::NaturalOrder;
use crate::surface::{pi1_compare, SurfaceElem, SurfacePresentation};
use crate::text::parse_err;
use crate::words::{check_h1_trivial, parse_word_with, Generator, GeneratorMap, Letter, Word};

/// The generator `f_{i,j,γ} = γ̃_(i) t_{i,j} γ̃_(i)⁻¹` of the factor at position `i`.
#[derive(Debug, Clone, Serialize)]
pub struct FGen {
    pub i: u32,
    pub j: u32,
    pub gamma: SurfaceElem,
}

impl FGen {
    pub fn new(i: u32, j: u32, gamma: SurfaceElem) -> Result<Self> {
        if i == 0 || i >= j {
            return Err(Error::Precondition(format!("need 1 <= i < j, got f[{i},{j},..]")));
        }
        Ok(FGen { i, j, gamma })
    }

    pub fn genus(&self) -> u32 {
        self.gamma.genus()
    }

    /// Parse `f[i,j,<word>]`, with `<word>` over `w_1..w_{2g}`.
    pub fn parse(s: &str, genus: u32) -> Result<Self> {
        let s = s.trim();
        let inner = s
            .strip_prefix("f[")
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(|| parse_err(0, format!("expected `f[i,j,word]`, got `{s}`")))?;
        let mut parts = inner.splitn(3, ',');
        let mut num = |what: &str| -> Result<u32> {
            let p = parts
                .next()
                .ok_or_else(|| parse_err(2, format!("missing {what} in `{s}`")))?;
            p.trim()
                .parse()
                .map_err(|_| parse_err(2, format!("bad {what} `{p}` in `{s}`")))
        };
        let i = num("i")?;
        let j = num("j")?;
        let word = parts
            .next()
            .ok_or_else(|| parse_err(2, format!("missing word in `{s}`")))?;
        let pres = SurfacePresentation::new(genus)?;
        FGen::new(i, j, pres.parse(word)?)
    }
}

impl PartialEq for FGen {
    fn eq(&self, other: &Self) -> bool {
        self.i == other.i && self.j == other.j && self.gamma == other.gamma
    }
}

impl Eq for FGen {}

impl fmt::Display for FGen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "f[{},{},{}]", self.i, self.j, self.gamma)
    }
}

/// Order on one family `ℱ_{i,n}`: by `j`, then by `γ` in `π₁`.
pub fn fgen_compare(a: &FGen, b: &FGen, esc: Escalation) -> Result<Ordering> {
    if a.i != b.i {
        return Err(Error::MismatchedFamily(a.i, b.i));
    }
    match a.j.cmp(&b.j) {
        Ordering::Equal => pi1_compare(&a.gamma, &b.gamma, esc),
        o => Ok(o),
    }
}

pub type FWord = Word<FGen>;

pub fn parse_fword(s: &str, genus: u32) -> Result<FWord> {
    parse_word_with(s, |base, pos| {
        FGen::parse(base, genus).map_err(|e| match e {
            Error::Parse { pos: p, msg } => Error::Parse { pos: pos + p, msg },
            e => e,
        })
    })
}

fn family_of(w: &FWord) -> Option<u32> {
    w.letters().first().map(|l| l.gen.i)
}

/// Magnus order on a factor, with variables ordered by [`fgen_compare`].
pub fn factor_compare(u: &FWord, v: &FWord, esc: Escalation) -> Result<Ordering> {
    let fam = family_of(u).or_else(|| family_of(v));
    for l in u.letters().iter().chain(v.letters()) {
        if Some(l.gen.i) != fam {
            return Err(Error::MismatchedFamily(fam.unwrap_or(0), l.gen.i));
        }
    }
    if u == v {
        return Ok(Ordering::Equal);
    }
    let mut vars: Vec<&FGen> = Vec::new();
    for l in u.letters().iter().chain(v.letters()) {
        if !vars.contains(&&l.gen) {
            vars.push(&l.gen);
        }
    }
    // Insertion sort: the comparator is fallible and may be expensive.
    let mut sorted: Vec<&FGen> = Vec::with_capacity(vars.len());
    for f in vars {
        let mut at = sorted.len();
        while at > 0 && fgen_compare(f, sorted[at - 1], esc)? == Ordering::Less {
            at -= 1;
        }
        sorted.insert(at, f);
    }
    let rank = |f: &FGen| -> Generator {
        let r = sorted.iter().position(|g| *g == f).expect("variable was collected");
        Generator::x(r as u32 + 1)
    };
    let (a, b) = (u.map_gens(rank), v.map_gens(rank));
    magnus_compare(&a, &b, &NaturalOrder, esc)
}

/// An element `k_1 k_2 ⋯ k_{n−1}` of `K_n`, component `i` over `ℱ_{i,n}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KnElement {
    n: u32,
    components: Vec<FWord>,
}

impl KnElement {
    pub fn new(n: u32, components: Vec<FWord>) -> Result<Self> {
        if n == 0 {
            return Err(Error::Precondition("n must be at least 1".into()));
        }
        if components.len() != n as usize - 1 {
            return Err(Error::Precondition(format!(
                "K_{n} has {} components, got {}",
                n - 1,
                components.len()
            )));
        }
        let mut genus = None;
        for (k, c) in components.iter().enumerate() {
            let i = k as u32 + 1;
            for l in c.letters() {
                if l.gen.i != i {
                    return Err(Error::MismatchedFamily(i, l.gen.i));
                }
                if l.gen.j > n {
                    return Err(Error::Precondition(format!("{} has j > n = {n}", l.gen)));
                }
                if *genus.get_or_insert(l.gen.genus()) != l.gen.genus() {
                    return Err(Error::Precondition("mixed genera".into()));
                }
            }
        }
        Ok(KnElement { n, components })
    }

    pub fn identity(n: u32) -> Self {
        KnElement {
            n,
            components: vec![Word::identity(); n.saturating_sub(1) as usize],
        }
    }

    /// A tuple with a single nontrivial component `w` at its family's position.
    pub fn single(n: u32, w: FWord) -> Result<Self> {
        let mut comps = vec![Word::identity(); n.saturating_sub(1) as usize];
        if let Some(i) = family_of(&w) {
            if i as usize > comps.len() {
                return Err(Error::Precondition(format!("family {i} out of range for n = {n}")));
            }
            comps[i as usize - 1] = w;
        }
        KnElement::new(n, comps)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn components(&self) -> &[FWord] {
        &self.components
    }

    /// Parse `;`-separated component words. Missing trailing components are
    /// the identity.
    pub fn parse(s: &str, n: u32, genus: u32) -> Result<Self> {
        let mut comps: Vec<FWord> = Vec::new();
        let mut offset = 0;
        for part in s.split(';') {
            comps.push(parse_fword(part, genus).map_err(|e| match e {
                Error::Parse { pos, msg } => Error::Parse { pos: pos + offset, msg },
                e => e,
            })?);
            offset += part.len() + 1;
        }
        let want = n.saturating_sub(1) as usize;
        if comps.len() > want {
            return Err(parse_err(
                0,
                format!("{} components given, K_{n} has {want}", comps.len()),
            ));
        }
        comps.resize(want, Word::identity());
        KnElement::new(n, comps)
    }

    /// Multiply within a single factor: `(…, k_i·w, …)`.
    pub fn mul_in_factor(&self, w: &FWord, on_left: bool) -> Result<Self> {
        let Some(i) = family_of(w) else {
            return Ok(self.clone());
        };
        let mut comps = self.components.clone();
        let c = comps
            .get_mut(i as usize - 1)
            .ok_or_else(|| Error::Precondition(format!("family {i} out of range")))?;
        *c = if on_left { w.multiply(c) } else { c.multiply(w) };
        KnElement::new(self.n, comps)
    }
}

impl fmt::Display for KnElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.components.is_empty() {
            return f.write_str("1");
        }
        for (k, c) in self.components.iter().enumerate() {
            if k > 0 {
                f.write_str("; ")?;
            }
            c.fmt(f)?;
        }
        Ok(())
    }
}

/// `k < k'` iff `k_j < k'_j` for the greatest `j` with `k_j ≠ k'_j`.
pub fn kn_compare(a: &KnElement, b: &KnElement, esc: Escalation) -> Result<Ordering> {
    if a.n != b.n {
        return Err(Error::Precondition(format!("K_{} vs K_{}", a.n, b.n)));
    }
    for (u, v) in a.components.iter().zip(&b.components).rev() {
        if u != v {
            return factor_compare(u, v, esc);
        }
    }
    Ok(Ordering::Equal)
}

/// The factor of `K_n` at position `i`, with its Magnus order; the one
/// place where `K_n` multiplication is fully determined.
#[derive(Debug, Clone, Copy)]
pub struct KnFactor {
    pub i: u32,
    pub esc: Escalation,
}

impl Group for KnFactor {
    type Elem = FWord;

    fn identity(&self) -> FWord {
        Word::identity()
    }

    fn multiply(&self, a: &FWord, b: &FWord) -> FWord {
        a.multiply(b)
    }

    fn invert(&self, a: &FWord) -> FWord {
        a.inverse()
    }

    fn is_identity(&self, a: &FWord) -> bool {
        a.is_identity()
    }
}

impl OrderedGroup for KnFactor {
    fn compare(&self, a: &FWord, b: &FWord) -> Result<Ordering> {
        factor_compare(a, b, self.esc)
    }
}

/// The braid `a_{i,r}`, used only through its action on the generators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct ActionLabel {
    pub i: u32,
    pub r: u32,
}

impl ActionLabel {
    pub fn new(i: u32, r: u32, n: u32, genus: u32) -> Result<Self> {
        if !(1..=n).contains(&i) || !(1..=2 * genus).contains(&r) {
            return Err(Error::Precondition(format!(
                "a[{i},{r}] out of range for n = {n}, genus {genus}"
            )));
        }
        Ok(ActionLabel { i, r })
    }

    pub fn all(n: u32, genus: u32) -> impl Iterator<Item = ActionLabel> {
        (1..=n).flat_map(move |i| (1..=2 * genus).map(move |r| ActionLabel { i, r }))
    }
}

impl fmt::Display for ActionLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "a[{},{}]", self.i, self.r)
    }
}

fn omega(genus: u32, r: u32) -> SurfaceElem {
    let p = SurfacePresentation::new(genus).expect("genus >= 1");
    p.elem(Word::gen(p.generator(r)))
}

/// The permutation `Ψ_{i,r}` induced on generators by conjugation by `a_{i,r}`:
/// `f_{j,k,γ}` is fixed when `i ∉ {j,k}`, becomes `f_{j,k,ω_r γ}` when `i = j`
/// and `f_{j,k,γ ω_r⁻¹}` when `i = k`.
pub fn psi_action(l: ActionLabel, f: &FGen) -> FGen {
    let w = omega(f.genus(), l.r);
    let gamma = if l.i == f.i {
        w.multiply(&f.gamma)
    } else if l.i == f.j {
        f.gamma.multiply(&w.inverse())
    } else {
        f.gamma.clone()
    };
    FGen { gamma, ..f.clone() }
}

/// Inverse of [`psi_action`].
pub fn psi_action_inverse(l: ActionLabel, f: &FGen) -> FGen {
    let w = omega(f.genus(), l.r);
    let gamma = if l.i == f.i {
        w.inverse().multiply(&f.gamma)
    } else if l.i == f.j {
        f.gamma.multiply(&w)
    } else {
        f.gamma.clone()
    };
    FGen { gamma, ..f.clone() }
}

/// `Ψ_{i,r}` applied letterwise to every component.
pub fn psi_extend(l: ActionLabel, k: &KnElement) -> KnElement {
    KnElement {
        n: k.n,
        components: k.components.iter().map(|c| c.map_gens(|f| psi_action(l, f))).collect(),
    }
}

pub fn psi_extend_inverse(l: ActionLabel, k: &KnElement) -> KnElement {
    KnElement {
        n: k.n,
        components: k
            .components
            .iter()
            .map(|c| c.map_gens(|f| psi_action_inverse(l, f)))
            .collect(),
    }
}

pub type FactorComparator<W> = Box<dyn Fn(&W, &W) -> Result<Ordering> + Send + Sync>;

/// Per-position comparators for an iterated semidirect product
/// `A_1 ⋊ (A_2 ⋊ (⋯ ⋊ A_m))`; position 1 is the innermost normal factor.
pub struct SemidirectOrderDatum<W> {
    factors: Vec<FactorComparator<W>>,
}

impl<W> SemidirectOrderDatum<W> {
    pub fn new(factors: Vec<FactorComparator<W>>) -> Self {
        SemidirectOrderDatum { factors }
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }
}

/// Greatest differing position decides, by that position's comparator.
pub fn semidirect_compare<W>(datum: &SemidirectOrderDatum<W>, a: &[W], b: &[W]) -> Result<Ordering> {
    if a.len() != datum.len() || b.len() != datum.len() {
        return Err(Error::Precondition(format!(
            "tuples of length {} and {} for {} factors",
            a.len(),
            b.len(),
            datum.len()
        )));
    }
    for k in (0..datum.len()).rev() {
        match (datum.factors[k])(&a[k], &b[k])? {
            Ordering::Equal => continue,
            o => return Ok(o),
        }
    }
    Ok(Ordering::Equal)
}

/// The `K_n` instance: every position uses [`factor_compare`].
pub fn kn_datum(n: u32, esc: Escalation) -> SemidirectOrderDatum<FWord> {
    SemidirectOrderDatum::new(
        (1..n)
            .map(|_| Box::new(move |u: &FWord, v: &FWord| factor_compare(u, v, esc)) as FactorComparator<FWord>)
            .collect(),
    )
}

/// A two-factor semidirect product `F ⋊ T` of free groups, `F` on the `x`
/// alphabet and `T` on the `t` alphabet, where `t_k` acts on `F` by a given
/// automorphism. Actions must be trivial on `H1(F)`.
#[derive(Debug, Clone)]
pub struct FreeSemidirect {
    inner_rank: u32,
    actions: Vec<(GeneratorMap, GeneratorMap)>,
    pub esc: Escalation,
}

pub const OUTER_ALPHABET: char = 't';

impl FreeSemidirect {
    /// `actions[k]` is the action of `t_{k+1}` and its inverse.
    pub fn new(inner_rank: u32, actions: Vec<(GeneratorMap, GeneratorMap)>, esc: Escalation) -> Result<Self> {
        let gens: Vec<Generator> = (1..=inner_rank).map(Generator::x).collect();
        for (phi, phi_inv) in &actions {
            check_h1_trivial(phi, &gens)?;
            for g in &gens {
                let back = phi.apply(&phi_inv.apply(&Word::gen(*g)));
                let fwd = phi_inv.apply(&phi.apply(&Word::gen(*g)));
                if back != Word::gen(*g) || fwd != Word::gen(*g) {
                    return Err(Error::Precondition(format!("action is not inverted at {g}")));
                }
            }
        }
        Ok(FreeSemidirect {
            inner_rank,
            actions,
            esc,
        })
    }

    pub fn inner_rank(&self) -> u32 {
        self.inner_rank
    }

    pub fn outer_rank(&self) -> u32 {
        self.actions.len() as u32
    }

    /// The action of an outer word on `F`.
    pub fn act(&self, s: &Word, v: &Word) -> Word {
        s.letters().iter().rev().fold(v.clone(), |acc, l| {
            let (phi, phi_inv) = &self.actions[l.gen.index as usize - 1];
            if l.inverse {
                phi_inv.apply(&acc)
            } else {
                phi.apply(&acc)
            }
        })
    }

    pub fn datum(&self) -> SemidirectOrderDatum<Word> {
        let esc = self.esc;
        let f = move |a: &Word, b: &Word| magnus_compare(a, b, &NaturalOrder, esc);
        SemidirectOrderDatum::new(vec![Box::new(f), Box::new(f)])
    }
}

/// `(u, s)` standing for `u·s`, `u ∈ F`, `s ∈ T`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SemidirectElem {
    pub inner: Word,
    pub outer: Word,
}

impl fmt::Display for SemidirectElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}; {})", self.inner, self.outer)
    }
}

impl Group for FreeSemidirect {
    type Elem = SemidirectElem;

    fn identity(&self) -> SemidirectElem {
        SemidirectElem {
            inner: Word::identity(),
            outer: Word::identity(),
        }
    }

    /// `(u s)(v t) = (u · s v s⁻¹)(s t)`
    fn multiply(&self, a: &SemidirectElem, b: &SemidirectElem) -> SemidirectElem {
        SemidirectElem {
            inner: a.inner.multiply(&self.act(&a.outer, &b.inner)),
            outer: a.outer.multiply(&b.outer),
        }
    }

    fn invert(&self, a: &SemidirectElem) -> SemidirectElem {
        let s_inv = a.outer.inverse();
        SemidirectElem {
            inner: self.act(&s_inv, &a.inner.inverse()),
            outer: s_inv,
        }
    }

    fn is_identity(&self, a: &SemidirectElem) -> bool {
        a.inner.is_identity() && a.outer.is_identity()
    }
}

impl OrderedGroup for FreeSemidirect {
    fn compare(&self, a: &SemidirectElem, b: &SemidirectElem) -> Result<Ordering> {
        semidirect_compare(
            &self.datum(),
            &[a.inner.clone(), a.outer.clone()],
            &[b.inner.clone(), b.outer.clone()],
        )
    }
}

/// `t_{i,j} = σ_i ⋯ σ_{j−2} σ_{j−1}² σ_{j−2}⁻¹ ⋯ σ_i⁻¹`
pub fn t_word(i: u32, j: u32, n: u32) -> Result<BraidWord> {
    if i == 0 || i >= j || j > n {
        return Err(Error::Precondition(format!(
            "t_word needs 1 <= i < j <= n, got i={i} j={j} n={n}"
        )));
    }
    let mut letters: Vec<(u32, i8)> = (i..j - 1).map(|k| (k, 1)).collect();
    letters.push((j - 1, 1));
    letters.push((j - 1, 1));
    letters.extend((i..j - 1).rev().map(|k| (k, -1)));
    BraidWord::new(n, letters)
}

impl FromStr for ActionLabel {
    type Err = Error;

    /// `a[i,r]`
    fn from_str(s: &str) -> Result<Self> {
        let inner = s
            .trim()
            .strip_prefix("a[")
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(|| parse_err(0, format!("expected `a[i,r]`, got `{s}`")))?;
        let (i, r) = inner
            .split_once(',')
            .ok_or_else(|| parse_err(0, format!("expected `a[i,r]`, got `{s}`")))?;
        let p = |t: &str| {
            t.trim()
                .parse::<u32>()
                .map_err(|_| parse_err(0, format!("bad index `{t}`")))
        };
        Ok(ActionLabel { i: p(i)?, r: p(r)? })
    }
}

/// Letters for tests and sampling.
pub fn fletter(f: FGen, inverse: bool) -> Letter<FGen> {
    Letter { gen: f, inverse }
}
