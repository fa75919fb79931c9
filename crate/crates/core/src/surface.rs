//! Fundamental groups of closed orientable surfaces.
//!
//! `π₁ = ⟨ω_1, …, ω_{2g} | ω_1⋯ω_{2g} ω_1⁻¹⋯ω_{2g}⁻¹⟩`, with generators
//! written `w_1 … w_{2g}`. Equality is decided by abelianization at genus 1
//! and by Dehn's algorithm at genus ≥ 2. The bi-order compares Magnus
//! expansions in the quotient of `ℚ⟨⟨X⟩⟩` by the two-sided ideal generated by
//! `M(r) − 1`, computed with a degree-truncated rewriting system.
//!
//! Rewriting works towards higher degree: a rule replaces its leading
//! monomial (the greatest monomial among the lowest-degree terms) by terms
//! that are either of the same degree and smaller, or of higher degree.
//! Normal forms therefore keep the lowest nonzero degree of a series, which
//! is what makes the induced order invariant under multiplication.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::magnus::{magnus_expand, Escalation, Group, OrderedGroup};
use crate::series::{coeff, Coeff, Monomial, Series, SeriesOrdering};
use crate::words::{abelianize, parse_word_with, Generator, Letter, Word};

pub const SURFACE_ALPHABET: char = 'w';

/// The standard one-relator presentation of the genus-`g` surface group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct SurfacePresentation {
    genus: u32,
}

impl SurfacePresentation {
    pub fn new(genus: u32) -> Result<Self> {
        if genus == 0 {
            return Err(Error::Precondition("genus must be at least 1".into()));
        }
        Ok(SurfacePresentation { genus })
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    pub fn rank(&self) -> u32 {
        2 * self.genus
    }

    pub fn generator(&self, r: u32) -> Generator {
        debug_assert!((1..=self.rank()).contains(&r));
        Generator::new(SURFACE_ALPHABET, r)
    }

    pub fn generators(&self) -> impl Iterator<Item = Generator> + '_ {
        (1..=self.rank()).map(|r| self.generator(r))
    }

    /// `ω_1⋯ω_{2g} ω_1⁻¹⋯ω_{2g}⁻¹`
    pub fn relator(&self) -> Word {
        let fwd = self.generators().map(|g| Letter::new(g, 1));
        let back = self.generators().map(|g| Letter::new(g, -1));
        Word::from_letters(fwd.chain(back))
    }

    pub fn parse_word(&self, s: &str) -> Result<Word> {
        parse_word_with(s, |base, pos| {
            let g: Generator = base.parse().map_err(|e| match e {
                Error::Parse { pos: p, msg } => Error::Parse { pos: pos + p, msg },
                e => e,
            })?;
            if g.alphabet != SURFACE_ALPHABET || !(1..=self.rank()).contains(&g.index) {
                return Err(Error::Parse {
                    pos,
                    msg: format!("`{base}` is not a generator w_1..w_{}", self.rank()),
                });
            }
            Ok(g)
        })
    }

    pub fn elem(&self, word: Word) -> SurfaceElem {
        SurfaceElem {
            genus: self.genus,
            word,
        }
    }

    pub fn parse(&self, s: &str) -> Result<SurfaceElem> {
        Ok(self.elem(self.parse_word(s)?))
    }

    /// The `8g` cyclic conjugates of the relator and its inverse.
    fn relator_cycles(&self) -> Vec<Vec<Letter<Generator>>> {
        let r = self.relator().into_letters();
        let rinv = self.relator().inverse().into_letters();
        let n = r.len();
        let mut out = Vec::with_capacity(2 * n);
        for base in [&r, &rinv] {
            for s in 0..n {
                out.push((0..n).map(|k| base[(s + k) % n].clone()).collect());
            }
        }
        out
    }
}

/// An element of `π₁`, stored as any freely reduced representative.
/// Equality is equality in the group.
#[derive(Debug, Clone, Serialize)]
pub struct SurfaceElem {
    genus: u32,
    word: Word,
}

impl SurfaceElem {
    pub fn genus(&self) -> u32 {
        self.genus
    }

    pub fn word(&self) -> &Word {
        &self.word
    }

    pub fn presentation(&self) -> SurfacePresentation {
        SurfacePresentation { genus: self.genus }
    }

    pub fn identity(genus: u32) -> Self {
        SurfaceElem {
            genus,
            word: Word::identity(),
        }
    }

    pub fn multiply(&self, other: &SurfaceElem) -> SurfaceElem {
        debug_assert_eq!(self.genus, other.genus);
        SurfaceElem {
            genus: self.genus,
            word: self.word.multiply(&other.word),
        }
    }

    pub fn inverse(&self) -> SurfaceElem {
        SurfaceElem {
            genus: self.genus,
            word: self.word.inverse(),
        }
    }

    pub fn is_trivial(&self) -> bool {
        is_trivial(&self.word, &self.presentation())
    }
}

impl PartialEq for SurfaceElem {
    fn eq(&self, other: &Self) -> bool {
        self.genus == other.genus && (self.word == other.word || self.inverse().multiply(other).is_trivial())
    }
}

impl Eq for SurfaceElem {}

impl fmt::Display for SurfaceElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.word.fmt(f)
    }
}

/// Word problem: does `w` represent the identity of `π₁`?
pub fn is_trivial(w: &Word, p: &SurfacePresentation) -> bool {
    if w.is_identity() {
        return true;
    }
    if !abelianize(w).is_zero() {
        return false;
    }
    if p.genus == 1 {
        return true;
    }
    dehn_reduce(w, p).is_identity()
}

/// Dehn's algorithm. Pieces of the standard relator have length 1 and the
/// relator has length `4g ≥ 8`, so the presentation is C'(1/6) and a
/// nontrivial reduced word that represents 1 always contains more than half
/// of a cyclic conjugate of `r^{±1}`.
pub fn dehn_reduce(w: &Word, p: &SurfacePresentation) -> Word {
    let cycles = p.relator_cycles();
    let n = 4 * p.genus as usize;
    let half = n / 2;
    let mut cur = w.clone();
    'outer: loop {
        let letters = cur.letters();
        for pos in 0..letters.len() {
            for cyc in &cycles {
                let len = letters[pos..].iter().zip(cyc).take_while(|(a, b)| a == b).count();
                if len > half {
                    // cyc = u·v with u = letters[pos..pos+len], so u = v⁻¹.
                    let replacement = cyc[len..].iter().rev().map(Letter::inv);
                    let next: Vec<_> = letters[..pos]
                        .iter()
                        .cloned()
                        .chain(replacement)
                        .chain(letters[pos + len..].iter().cloned())
                        .collect();
                    cur = Word::from_letters(next);
                    continue 'outer;
                }
            }
        }
        return cur;
    }
}

/// `lead ≡ tail` in the quotient ring.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Rule {
    pub lead: Monomial,
    pub tail: Series,
}

/// Processing key for normal forms: lowest degree first, and within a
/// degree the lexicographically greatest monomial first. Rewriting only
/// produces monomials that come later in this order.
#[derive(Debug, Clone, PartialEq, Eq)]
struct ReduceKey(Monomial);

impl Ord for ReduceKey {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .degree()
            .cmp(&other.0.degree())
            .then_with(|| other.0.vars().cmp(self.0.vars()))
    }
}

impl PartialOrd for ReduceKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A confluent rewriting system for `ℚ⟨X⟩ / (I + deg > d)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReductionSystem {
    degree: usize,
    rules: Vec<Rule>,
}

/// The greatest monomial of lowest degree, with its coefficient.
fn leading_term(f: &Series) -> Option<(Monomial, Coeff)> {
    let low = f.terms().next()?.0.degree();
    f.terms()
        .take_while(|(m, _)| m.degree() == low)
        .last()
        .map(|(m, c)| (m.clone(), c.clone()))
}

fn find_subword(hay: &[u32], needle: &[u32]) -> Option<usize> {
    if needle.len() > hay.len() {
        return None;
    }
    (0..=hay.len() - needle.len()).find(|&i| &hay[i..i + needle.len()] == needle)
}

impl ReductionSystem {
    /// Truncated two-sided completion of the ideal generated by `gens`.
    pub fn complete(degree: usize, gens: impl IntoIterator<Item = Series>) -> Result<Self> {
        let mut sys = ReductionSystem {
            degree,
            rules: Vec::new(),
        };
        let mut pending: Vec<Series> = gens.into_iter().map(|g| g.truncate(degree)).collect();
        pending.reverse();
        while let Some(f) = pending.pop() {
            let h = sys.reduce(&f);
            let Some((lead, c)) = leading_term(&h) else {
                continue;
            };
            if c.is_zero() {
                return Err(Error::Verification(format!("zero leading coefficient at {lead}")));
            }
            let h = h.scale(&(Coeff::one() / &c));
            let mut tail = Series::from_terms(degree, [(lead.clone(), coeff(1))]).sub(&h);
            tail = sys.reduce(&tail);

            // Rules whose lead contains the new lead are no longer reduced.
            let (stale, keep): (Vec<Rule>, Vec<Rule>) = std::mem::take(&mut sys.rules)
                .into_iter()
                .partition(|r| find_subword(r.lead.vars(), lead.vars()).is_some());
            sys.rules = keep;
            for r in stale {
                pending.push(Series::from_terms(degree, [(r.lead.clone(), coeff(1))]).sub(&r.tail));
            }

            let new = Rule { lead, tail };
            for other in sys.rules.iter().chain(std::iter::once(&new)) {
                pending.extend(sys.compositions(&new, other));
                if other.lead != new.lead {
                    pending.extend(sys.compositions(other, &new));
                }
            }
            sys.rules.push(new);
        }
        // Inter-reduce tails against the final rule set.
        let reduced: Vec<Rule> = sys
            .rules
            .iter()
            .map(|r| Rule {
                lead: r.lead.clone(),
                tail: sys.reduce(&r.tail),
            })
            .collect();
        sys.rules = reduced;
        sys.rules.sort_by(|a, b| a.lead.cmp(&b.lead));
        Ok(sys)
    }

    /// Overlap ambiguities `A·B·C` with `first.lead = A·B`, `second.lead = B·C`.
    fn compositions(&self, first: &Rule, second: &Rule) -> Vec<Series> {
        let (l1, l2) = (first.lead.vars(), second.lead.vars());
        let mut out = Vec::new();
        for k in 1..l1.len().min(l2.len()) {
            if l1[l1.len() - k..] != l2[..k] {
                continue;
            }
            if l1.len() + l2.len() - k > self.degree {
                continue;
            }
            let a = Monomial::new(l1[..l1.len() - k].to_vec());
            let c = Monomial::new(l2[k..].to_vec());
            let left = sandwich(&Monomial::one(), &first.tail, &c, self.degree);
            let right = sandwich(&a, &second.tail, &Monomial::one(), self.degree);
            out.push(left.sub(&right));
        }
        out
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    fn find_rule(&self, m: &Monomial) -> Option<(usize, &Rule)> {
        self.rules
            .iter()
            .find_map(|r| find_subword(m.vars(), r.lead.vars()).map(|i| (i, r)))
    }

    /// Normal form. Each monomial is visited once, after every monomial that
    /// can rewrite into it.
    pub fn reduce(&self, f: &Series) -> Series {
        self.reduce_with(f, |m| self.find_rule(m))
    }

    /// Normal form trying rules in the given order; used to check that the
    /// result does not depend on which rule fires.
    pub fn reduce_in_order(&self, f: &Series, order: &[usize]) -> Series {
        self.reduce_with(f, |m| {
            order.iter().find_map(|&k| {
                let r = &self.rules[k];
                find_subword(m.vars(), r.lead.vars()).map(|i| (i, r))
            })
        })
    }

    fn reduce_with<'a>(&'a self, f: &Series, find: impl Fn(&Monomial) -> Option<(usize, &'a Rule)>) -> Series {
        let degree = self.degree.min(f.degree());
        let mut pending: BTreeMap<ReduceKey, Coeff> = f
            .truncate(degree)
            .into_terms()
            .into_iter()
            .map(|(m, c)| (ReduceKey(m), c))
            .collect();
        let mut done: BTreeMap<Monomial, Coeff> = BTreeMap::new();
        while let Some((ReduceKey(m), c)) = pending.pop_first() {
            if c.is_zero() {
                continue;
            }
            match find(&m) {
                None => {
                    done.insert(m, c);
                }
                Some((at, rule)) => {
                    let vars = m.vars();
                    let a = &vars[..at];
                    let b = &vars[at + rule.lead.degree()..];
                    let room = degree - a.len() - b.len();
                    for (t, tc) in rule.tail.terms() {
                        if t.degree() > room {
                            break;
                        }
                        let mut v = Vec::with_capacity(a.len() + t.degree() + b.len());
                        v.extend_from_slice(a);
                        v.extend_from_slice(t.vars());
                        v.extend_from_slice(b);
                        let e = pending.entry(ReduceKey(Monomial::new(v))).or_insert_with(Coeff::zero);
                        *e += &c * tc;
                    }
                }
            }
        }
        Series::from_sorted_terms(degree, done)
    }

    pub fn is_normal(&self, f: &Series) -> bool {
        f.terms().all(|(m, _)| self.find_rule(m).is_none())
    }
}

/// `a · f · c`, truncated.
fn sandwich(a: &Monomial, f: &Series, c: &Monomial, degree: usize) -> Series {
    Series::from_terms(degree, f.terms().map(|(m, k)| (a.concat(m).concat(c), k.clone())))
}

type SystemCache = Mutex<HashMap<(u32, usize), Arc<ReductionSystem>>>;

fn cache() -> &'static SystemCache {
    static CACHE: OnceLock<SystemCache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// The rewriting system for `ℚ⟨⟨X_1..X_{2g}⟩⟩ / (M(r) − 1)` at degree `d`.
/// Systems are built once per `(g, d)` and shared.
pub fn build_reduction_system(p: &SurfacePresentation, d: usize) -> Result<Arc<ReductionSystem>> {
    if d < 2 {
        return Err(Error::Precondition(format!("reduction degree must be >= 2, got {d}")));
    }
    if let Some(sys) = cache().lock().unwrap().get(&(p.genus, d)) {
        return Ok(Arc::clone(sys));
    }
    let rho = magnus_expand(&p.relator(), d).sub(&Series::one(d));
    let sys = Arc::new(ReductionSystem::complete(d, [rho])?);
    cache()
        .lock()
        .unwrap()
        .entry((p.genus, d))
        .or_insert_with(|| Arc::clone(&sys));
    Ok(sys)
}

/// Quotient Magnus expansion: the normal form of `M(w)` at degree `d`.
pub fn surface_expand(e: &SurfaceElem, d: usize) -> Result<Series> {
    let sys = build_reduction_system(&e.presentation(), d)?;
    Ok(sys.reduce(&magnus_expand(&e.word, d)))
}

/// The bi-order on `π₁`: group equality first, then the lowest term of the
/// reduced difference of expansions at increasing degree.
pub fn pi1_compare(a: &SurfaceElem, b: &SurfaceElem, esc: Escalation) -> Result<Ordering> {
    if a.genus != b.genus {
        return Err(Error::Precondition(format!(
            "genus mismatch: {} vs {}",
            a.genus, b.genus
        )));
    }
    if a == b {
        return Ok(Ordering::Equal);
    }
    let p = a.presentation();
    esc.run(|d| {
        let d = d.max(2);
        let sys = build_reduction_system(&p, d)?;
        let diff = magnus_expand(&b.word, d).sub(&magnus_expand(&a.word, d));
        Ok(match sys.reduce(&diff).lowest_term(&crate::series::NaturalOrder) {
            None => SeriesOrdering::EqualAtDegree,
            Some((_, c)) if c.is_positive() => SeriesOrdering::Less,
            Some(_) => SeriesOrdering::Greater,
        })
    })
}

/// `π₁` of the genus-`g` surface as an ordered group.
#[derive(Debug, Clone, Copy)]
pub struct SurfaceGroup {
    pub presentation: SurfacePresentation,
    pub esc: Escalation,
}

impl SurfaceGroup {
    pub fn new(genus: u32, esc: Escalation) -> Result<Self> {
        Ok(SurfaceGroup {
            presentation: SurfacePresentation::new(genus)?,
            esc,
        })
    }
}

impl Group for SurfaceGroup {
    type Elem = SurfaceElem;

    fn identity(&self) -> SurfaceElem {
        SurfaceElem::identity(self.presentation.genus)
    }

    fn multiply(&self, a: &SurfaceElem, b: &SurfaceElem) -> SurfaceElem {
        a.multiply(b)
    }

    fn invert(&self, a: &SurfaceElem) -> SurfaceElem {
        a.inverse()
    }

    fn is_identity(&self, a: &SurfaceElem) -> bool {
        a.is_trivial()
    }
}

impl OrderedGroup for SurfaceGroup {
    fn compare(&self, a: &SurfaceElem, b: &SurfaceElem) -> Result<Ordering> {
        pi1_compare(a, b, self.esc)
    }
}
