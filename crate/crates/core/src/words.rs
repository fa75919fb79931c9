//! Free-group words over indexed alphabets.
//!
//! [`Word`] is generic over its generator type so the same reduction and
//! multiplication code serves the plain alphabets (`x_i`, `w_i`) and the
//! structured generators of the surface braid kernel, whose equality is
//! decided semantically rather than structurally.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::text::{parse_err, tokenize};

/// A generator `name_index` of a named alphabet.
///
/// Alphabet names are single ASCII letters. Generators order by alphabet,
/// then index, which is the default variable order of the Magnus expansion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Generator {
    pub alphabet: char,
    pub index: u32,
}

impl Generator {
    pub const fn new(alphabet: char, index: u32) -> Self {
        Generator { alphabet, index }
    }

    /// `x_index`
    pub const fn x(index: u32) -> Self {
        Generator::new('x', index)
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}_{}", self.alphabet, self.index)
    }
}

impl FromStr for Generator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (name, idx) = s
            .split_once('_')
            .ok_or_else(|| parse_err(0, format!("expected `name_index`, got `{s}`")))?;
        let mut chars = name.chars();
        let alphabet = match (chars.next(), chars.next()) {
            (Some(c), None) if c.is_ascii_alphabetic() => c,
            _ => return Err(parse_err(0, format!("alphabet name must be one letter: `{s}`"))),
        };
        let index = idx
            .parse()
            .map_err(|_| parse_err(name.len() + 1, format!("bad generator index in `{s}`")))?;
        Ok(Generator { alphabet, index })
    }
}

/// One letter `g^{±1}` of a word.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Letter<G> {
    pub gen: G,
    pub inverse: bool,
}

impl<G> Letter<G> {
    pub fn new(gen: G, exp: i8) -> Self {
        debug_assert!(exp == 1 || exp == -1);
        Letter { gen, inverse: exp < 0 }
    }

    pub fn exp(&self) -> i64 {
        if self.inverse {
            -1
        } else {
            1
        }
    }

    fn cancels(&self, other: &Self) -> bool
    where
        G: PartialEq,
    {
        self.inverse != other.inverse && self.gen == other.gen
    }
}

impl<G: Clone> Letter<G> {
    pub fn inv(&self) -> Self {
        Letter {
            gen: self.gen.clone(),
            inverse: !self.inverse,
        }
    }
}

/// A freely reduced word. The empty word is the identity.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Word<G = Generator> {
    letters: Vec<Letter<G>>,
}

/// Free reduction of an arbitrary letter sequence.
pub fn reduce<G, I>(letters: I) -> Word<G>
where
    G: PartialEq,
    I: IntoIterator<Item = Letter<G>>,
{
    let mut out: Vec<Letter<G>> = Vec::new();
    for l in letters {
        if out.last().is_some_and(|top| top.cancels(&l)) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    Word { letters: out }
}

impl<G> Default for Word<G> {
    fn default() -> Self {
        Word { letters: Vec::new() }
    }
}

impl<G> Word<G> {
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn letters(&self) -> &[Letter<G>] {
        &self.letters
    }

    pub fn into_letters(self) -> Vec<Letter<G>> {
        self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    /// Generators occurring in the word, in order of first occurrence.
    pub fn support(&self) -> Vec<&G>
    where
        G: PartialEq,
    {
        let mut seen: Vec<&G> = Vec::new();
        for l in &self.letters {
            if !seen.contains(&&l.gen) {
                seen.push(&l.gen);
            }
        }
        seen
    }

    /// Relabel every generator. The result is re-reduced, since `f` need
    /// not be injective.
    pub fn map_gens<H: PartialEq>(&self, mut f: impl FnMut(&G) -> H) -> Word<H> {
        reduce(self.letters.iter().map(|l| Letter {
            gen: f(&l.gen),
            inverse: l.inverse,
        }))
    }
}

impl<G: Clone + PartialEq> Word<G> {
    pub fn from_letters(letters: impl IntoIterator<Item = Letter<G>>) -> Self {
        reduce(letters)
    }

    pub fn gen(g: G) -> Self {
        Word {
            letters: vec![Letter::new(g, 1)],
        }
    }

    /// `g^exp`
    pub fn power_of(g: G, exp: i64) -> Self {
        let inverse = exp < 0;
        Word {
            letters: (0..exp.unsigned_abs())
                .map(|_| Letter {
                    gen: g.clone(),
                    inverse,
                })
                .collect(),
        }
    }

    pub fn multiply(&self, other: &Self) -> Self {
        // Only the seam can cancel.
        let mut k = 0;
        let (a, b) = (&self.letters, &other.letters);
        while k < a.len() && k < b.len() && a[a.len() - 1 - k].cancels(&b[k]) {
            k += 1;
        }
        let mut letters = Vec::with_capacity(a.len() + b.len() - 2 * k);
        letters.extend_from_slice(&a[..a.len() - k]);
        letters.extend_from_slice(&b[k..]);
        Word { letters }
    }

    pub fn inverse(&self) -> Self {
        Word {
            letters: self.letters.iter().rev().map(Letter::inv).collect(),
        }
    }

    pub fn pow(&self, k: i64) -> Self {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        (0..k.unsigned_abs()).fold(Word::identity(), |acc, _| acc.multiply(&base))
    }

    /// `h w h⁻¹`
    pub fn conjugate_by(&self, h: &Self) -> Self {
        h.multiply(self).multiply(&h.inverse())
    }

    /// `[a, b] = a b a⁻¹ b⁻¹`
    pub fn commutator(a: &Self, b: &Self) -> Self {
        a.multiply(b).multiply(&a.inverse()).multiply(&b.inverse())
    }
}

impl<G: Clone + PartialEq> std::ops::Mul for &Word<G> {
    type Output = Word<G>;
    fn mul(self, rhs: Self) -> Word<G> {
        self.multiply(rhs)
    }
}

impl<G: fmt::Display> fmt::Display for Word<G> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("1");
        }
        for (k, l) in self.letters.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{}", l.gen)?;
            if l.inverse {
                f.write_str("^-1")?;
            }
        }
        Ok(())
    }
}

/// Parse a word whose tokens are parsed by `parse_gen`.
pub fn parse_word_with<G: Clone + PartialEq>(
    s: &str,
    mut parse_gen: impl FnMut(&str, usize) -> Result<G>,
) -> Result<Word<G>> {
    let mut letters = Vec::new();
    for tok in tokenize(s)? {
        let g = parse_gen(tok.base, tok.pos)?;
        let inverse = tok.exp < 0;
        for _ in 0..tok.exp.unsigned_abs() {
            letters.push(Letter {
                gen: g.clone(),
                inverse,
            });
        }
    }
    Ok(reduce(letters))
}

impl FromStr for Word<Generator> {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_word_with(s, |base, pos| {
            base.parse::<Generator>().map_err(|e| match e {
                Error::Parse { pos: p, msg } => Error::Parse { pos: pos + p, msg },
                e => e,
            })
        })
    }
}

/// Exponent-sum vector: the image of a word in the abelianization.
/// Zero entries are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ExponentVector<G: Ord = Generator>(BTreeMap<G, i64>);

impl<G: Ord> Default for ExponentVector<G> {
    fn default() -> Self {
        ExponentVector(BTreeMap::new())
    }
}

impl<G: Ord + Clone> ExponentVector<G> {
    pub fn unit(g: G) -> Self {
        let mut m = BTreeMap::new();
        m.insert(g, 1);
        ExponentVector(m)
    }

    pub fn get(&self, g: &G) -> i64 {
        self.0.get(g).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&G, i64)> {
        self.0.iter().map(|(g, &e)| (g, e))
    }

    pub fn add_to(&mut self, g: &G, delta: i64) {
        if delta == 0 {
            return;
        }
        let e = self.0.entry(g.clone()).or_insert(0);
        *e += delta;
        if *e == 0 {
            self.0.remove(g);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (g, e) in other.entries() {
            out.add_to(g, e);
        }
        out
    }
}

pub fn abelianize<G: Ord + Clone>(w: &Word<G>) -> ExponentVector<G> {
    let mut v = ExponentVector::default();
    for l in w.letters() {
        v.add_to(&l.gen, l.exp());
    }
    v
}

/// A substitution of words for generators; unlisted generators are fixed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorMap<G: Ord = Generator> {
    images: BTreeMap<G, Word<G>>,
}

impl<G: Ord> Default for GeneratorMap<G> {
    fn default() -> Self {
        GeneratorMap {
            images: BTreeMap::new(),
        }
    }
}

impl<G: Ord + Clone> GeneratorMap<G> {
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn from_images(images: impl IntoIterator<Item = (G, Word<G>)>) -> Self {
        GeneratorMap {
            images: images.into_iter().collect(),
        }
    }

    pub fn set(&mut self, g: G, image: Word<G>) {
        self.images.insert(g, image);
    }

    pub fn image(&self, g: &G) -> Word<G> {
        self.images.get(g).cloned().unwrap_or_else(|| Word::gen(g.clone()))
    }

    pub fn images(&self) -> impl Iterator<Item = (&G, &Word<G>)> {
        self.images.iter()
    }

    pub fn apply(&self, w: &Word<G>) -> Word<G> {
        apply_map(self, w)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Self) -> Self {
        let mut images: BTreeMap<G, Word<G>> = self.images.clone();
        for (g, w) in &other.images {
            images.insert(g.clone(), apply_map(self, w));
        }
        GeneratorMap { images }
    }
}

pub fn apply_map<G: Ord + Clone>(phi: &GeneratorMap<G>, w: &Word<G>) -> Word<G> {
    let mut out: Vec<Letter<G>> = Vec::with_capacity(w.len());
    for l in w.letters() {
        match phi.images.get(&l.gen) {
            None => out.push(l.clone()),
            Some(img) if !l.inverse => out.extend(img.letters().iter().cloned()),
            Some(img) => out.extend(img.letters().iter().rev().map(Letter::inv)),
        }
    }
    reduce(out)
}

/// True iff `phi` induces the identity on H1 for each listed generator.
pub fn is_h1_trivial<'a, G: Ord + Clone + 'a>(
    phi: &GeneratorMap<G>,
    generators: impl IntoIterator<Item = &'a G>,
) -> bool {
    generators
        .into_iter()
        .all(|g| abelianize(&phi.image(g)) == ExponentVector::unit(g.clone()))
}

/// Like [`is_h1_trivial`], naming the first offending generator.
pub fn check_h1_trivial<'a, G: Ord + Clone + fmt::Display + 'a>(
    phi: &GeneratorMap<G>,
    generators: impl IntoIterator<Item = &'a G>,
) -> Result<()> {
    for g in generators {
        if abelianize(&phi.image(g)) != ExponentVector::unit(g.clone()) {
            return Err(Error::NotH1Trivial(g.to_string()));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn x(i: u32) -> Generator {
        Generator::x(i)
    }

    #[test]
    fn reduce_examples() {
        let l = |i, e| Letter::new(x(i), e);
        assert!(reduce(vec![l(1, 1), l(1, -1)]).is_identity());
        assert_eq!(reduce(vec![l(1, 1), l(2, 1), l(2, -1), l(1, 1)]), w("x_1^2"));
        assert_eq!(reduce(vec![l(1, 1)]), w("x_1"));
    }

    #[test]
    fn multiply_and_invert() {
        assert!(w("x_1").multiply(&w("x_1^-1")).is_identity());
        assert_eq!(w("x_1 x_2").inverse(), w("x_2^-1 x_1^-1"));
        assert_eq!(w("x_1 x_2").multiply(&w("x_2^-1 x_3")), w("x_1 x_3"));
    }

    #[test]
    fn abelianize_examples() {
        assert!(abelianize(&w("x_1 x_2 x_1^-1 x_2^-1")).is_zero());
        let v = abelianize(&w("x_1^2 x_2"));
        assert_eq!(v.get(&x(1)), 2);
        assert_eq!(v.get(&x(2)), 1);
        assert_eq!(v.entries().count(), 2);
        assert!(abelianize(&Word::<Generator>::identity()).is_zero());
    }

    #[test]
    fn apply_map_examples() {
        let phi = GeneratorMap::from_images([(x(1), w("x_1 x_2"))]);
        assert_eq!(apply_map(&phi, &w("x_1^-1")), w("x_2^-1 x_1^-1"));
        let id = GeneratorMap::identity();
        assert_eq!(apply_map(&id, &w("x_1 x_3^-1 x_2")), w("x_1 x_3^-1 x_2"));
        let swap = GeneratorMap::from_images([(x(1), w("x_2")), (x(2), w("x_1"))]);
        assert_eq!(apply_map(&swap, &w("x_1 x_2")), w("x_2 x_1"));
    }

    #[test]
    fn h1_triviality() {
        let gens = [x(1), x(2)];
        let conj = GeneratorMap::from_images([(x(1), w("x_2 x_1 x_2^-1"))]);
        assert!(is_h1_trivial(&conj, &gens));
        let bad = GeneratorMap::from_images([(x(1), w("x_1 x_2"))]);
        assert!(!is_h1_trivial(&bad, &gens));
        assert_eq!(check_h1_trivial(&bad, &gens), Err(Error::NotH1Trivial("x_1".into())));
        assert!(is_h1_trivial(&GeneratorMap::identity(), &gens));
    }

    #[test]
    fn text_round_trip() {
        for s in ["1", "x_1", "x_1 x_2^-1", "w_3^-1 w_1 w_1"] {
            assert_eq!(w(s).to_string(), s);
        }
        assert_eq!(w("x_1^3 x_1^-1").to_string(), "x_1 x_1");
        assert!("x1".parse::<Word>().is_err());
        assert!("xy_1".parse::<Word>().is_err());
    }

    fn letters_strategy() -> impl Strategy<Value = Vec<Letter<Generator>>> {
        prop::collection::vec((1u32..4, prop::bool::ANY), 0..16).prop_map(|v| {
            v.into_iter()
                .map(|(i, inv)| Letter {
                    gen: x(i),
                    inverse: inv,
                })
                .collect()
        })
    }

    fn word_strategy() -> impl Strategy<Value = Word> {
        letters_strategy().prop_map(reduce)
    }

    fn map_strategy() -> impl Strategy<Value = GeneratorMap> {
        prop::collection::vec(word_strategy(), 3)
            .prop_map(|imgs| GeneratorMap::from_images(imgs.into_iter().enumerate().map(|(k, w)| (x(k as u32 + 1), w))))
    }

    proptest! {
        #[test]
        fn reduce_is_idempotent(ls in letters_strategy()) {
            let once = reduce(ls);
            let twice = reduce(once.letters().to_vec());
            prop_assert_eq!(once, twice);
        }

        #[test]
        fn inverse_cancels(a in word_strategy()) {
            prop_assert!(a.multiply(&a.inverse()).is_identity());
            prop_assert!(a.inverse().multiply(&a).is_identity());
        }

        #[test]
        fn abelianize_is_homomorphism(a in word_strategy(), b in word_strategy()) {
            prop_assert_eq!(abelianize(&a.multiply(&b)), abelianize(&a).add(&abelianize(&b)));
        }

        #[test]
        fn substitution_composes(phi in map_strategy(), psi in map_strategy(), a in word_strategy()) {
            let lhs = apply_map(&phi.compose(&psi), &a);
            let rhs = apply_map(&phi, &apply_map(&psi, &a));
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn printer_parser_round_trip(a in word_strategy()) {
            prop_assert_eq!(a.to_string().parse::<Word>().unwrap(), a);
        }
    }
}
