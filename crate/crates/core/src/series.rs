//! Truncated non-commutative power series with rational coefficients.
//!
//! Variables are plain `u32` ids. Monomials are ordered by degree and then
//! lexicographically; [`VariableOrder`] generalizes the lexicographic tiebreak
//! to an arbitrary order on ids. The term map of a [`Series`] is keyed by the
//! natural order, so under [`NaturalOrder`] the lowest term is the first entry.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

pub type Var = u32;
pub type Coeff = BigRational;

pub fn coeff(n: i64) -> Coeff {
    BigRational::from_integer(BigInt::from(n))
}

/// A strict total order on variable ids.
pub trait VariableOrder {
    fn compare_vars(&self, a: Var, b: Var) -> Ordering;

    /// True when this order agrees with `u32` order on ids.
    fn is_natural(&self) -> bool {
        false
    }
}

/// `X_1 < X_2 < ...`
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct NaturalOrder;

impl VariableOrder for NaturalOrder {
    fn compare_vars(&self, a: Var, b: Var) -> Ordering {
        a.cmp(&b)
    }

    fn is_natural(&self) -> bool {
        true
    }
}

/// An order given by listing variables from smallest to largest. Unlisted
/// variables compare above all listed ones, by id.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RankOrder {
    rank: BTreeMap<Var, usize>,
}

impl RankOrder {
    pub fn from_ascending(vars: impl IntoIterator<Item = Var>) -> Self {
        RankOrder {
            rank: vars.into_iter().enumerate().map(|(r, v)| (v, r)).collect(),
        }
    }

    fn key(&self, v: Var) -> (usize, Var) {
        match self.rank.get(&v) {
            Some(&r) => (r, 0),
            None => (usize::MAX, v),
        }
    }
}

impl VariableOrder for RankOrder {
    fn compare_vars(&self, a: Var, b: Var) -> Ordering {
        self.key(a).cmp(&self.key(b))
    }
}

impl<F: Fn(Var, Var) -> Ordering> VariableOrder for F {
    fn compare_vars(&self, a: Var, b: Var) -> Ordering {
        self(a, b)
    }
}

/// A word in the variables. The empty monomial is the constant `1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Vec<Var>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn new(vars: impl Into<Vec<Var>>) -> Self {
        Monomial(vars.into())
    }

    pub fn var(v: Var) -> Self {
        Monomial(vec![v])
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn vars(&self) -> &[Var] {
        &self.0
    }

    pub fn concat(&self, other: &Monomial) -> Monomial {
        let mut v = Vec::with_capacity(self.0.len() + other.0.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Monomial(v)
    }

    /// `X_v^k`
    pub fn power(v: Var, k: usize) -> Monomial {
        Monomial(vec![v; k])
    }

    pub fn map_vars(&self, f: impl Fn(Var) -> Var) -> Monomial {
        Monomial(self.0.iter().map(|&v| f(v)).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Serialize for Monomial {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        let mut first = true;
        let mut i = 0;
        while i < self.0.len() {
            let v = self.0[i];
            let mut run = 1;
            while i + run < self.0.len() && self.0[i + run] == v {
                run += 1;
            }
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            write!(f, "X_{v}")?;
            if run > 1 {
                write!(f, "^{run}")?;
            }
            i += run;
        }
        Ok(())
    }
}

/// Degree first, then lexicographic under `vo`.
pub fn mono_compare(m1: &Monomial, m2: &Monomial, vo: &(impl VariableOrder + ?Sized)) -> Ordering {
    m1.degree().cmp(&m2.degree()).then_with(|| {
        for (a, b) in m1.0.iter().zip(&m2.0) {
            match vo.compare_vars(*a, *b) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        Ordering::Equal
    })
}

/// Outcome of comparing two truncated series.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum SeriesOrdering {
    Less,
    /// The series agree up to their common truncation degree.
    EqualAtDegree,
    Greater,
}

/// An element of `ℚ⟨⟨X⟩⟩` modulo monomials of degree above `degree`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Series {
    degree: usize,
    terms: BTreeMap<Monomial, Coeff>,
}

impl Series {
    pub fn zero(degree: usize) -> Self {
        Series {
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(degree: usize) -> Self {
        Self::constant(coeff(1), degree)
    }

    pub fn constant(c: Coeff, degree: usize) -> Self {
        Self::from_terms(degree, [(Monomial::one(), c)])
    }

    /// `X_v`
    pub fn var(v: Var, degree: usize) -> Self {
        Self::from_terms(degree, [(Monomial::var(v), coeff(1))])
    }

    /// Sums duplicate monomials; drops zeros and terms above `degree`.
    pub fn from_terms(degree: usize, terms: impl IntoIterator<Item = (Monomial, Coeff)>) -> Self {
        let mut s = Series::zero(degree);
        for (m, c) in terms {
            s.add_term(m, c);
        }
        s
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Coeff)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &Monomial) -> Coeff {
        self.terms.get(m).cloned().unwrap_or_else(Coeff::zero)
    }

    pub fn constant_term(&self) -> Coeff {
        self.coefficient(&Monomial::one())
    }

    /// Adds `c·m` in place, respecting truncation and the no-zero invariant.
    pub fn add_term(&mut self, m: Monomial, c: Coeff) {
        if m.degree() > self.degree || c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn truncate(&self, degree: usize) -> Series {
        let degree = degree.min(self.degree);
        Series {
            degree,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() <= degree)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn add(&self, other: &Series) -> Series {
        let mut out = self.truncate(other.degree);
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Series {
        Series {
            degree: self.degree,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &Series) -> Series {
        let mut out = self.truncate(other.degree);
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }

    pub fn scale(&self, q: &Coeff) -> Series {
        if q.is_zero() {
            return Series::zero(self.degree);
        }
        Series {
            degree: self.degree,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * q)).collect(),
        }
    }

    pub fn mul(&self, other: &Series) -> Series {
        let degree = self.degree.min(other.degree);
        let mut out = Series::zero(degree);
        for (m1, c1) in &self.terms {
            if m1.degree() > degree {
                break;
            }
            let room = degree - m1.degree();
            for (m2, c2) in &other.terms {
                // Terms are sorted by degree, so the rest are too long as well.
                if m2.degree() > room {
                    break;
                }
                out.add_term(m1.concat(m2), c1 * c2);
            }
        }
        out
    }

    /// Multiply on the right by `Σ_k coeffs[k]·X_v^k`.
    pub fn mul_univariate(&self, v: Var, coeffs: &[Coeff]) -> Series {
        let mut out = Series::zero(self.degree);
        for (m, c) in &self.terms {
            let room = self.degree - m.degree();
            for (k, a) in coeffs.iter().enumerate().take(room + 1) {
                if a.is_zero() {
                    continue;
                }
                let mut vars = Vec::with_capacity(m.degree() + k);
                vars.extend_from_slice(m.vars());
                vars.extend(std::iter::repeat_n(v, k));
                out.add_term(Monomial(vars), c * a);
            }
        }
        out
    }

    /// Inverse of a series with constant term 1, as `Σ_k (−η)^k` for `f = 1 + η`.
    pub fn unit_inverse(&self) -> Result<Series> {
        let c0 = self.constant_term();
        if !c0.is_one() {
            return Err(Error::NotUnit(c0.to_string()));
        }
        let mut minus_eta = self.neg();
        minus_eta.terms.remove(&Monomial::one());
        let mut out = Series::one(self.degree);
        let mut power = Series::one(self.degree);
        // (−η)^k has no terms below degree k.
        for _ in 0..self.degree {
            power = power.mul(&minus_eta);
            if power.is_zero() {
                break;
            }
            out = out.add(&power);
        }
        Ok(out)
    }

    /// The least monomial with nonzero coefficient under `vo`.
    pub fn lowest_term(&self, vo: &(impl VariableOrder + ?Sized)) -> Option<(&Monomial, &Coeff)> {
        let mut it = self.terms.iter();
        let first = it.next()?;
        if vo.is_natural() {
            return Some(first);
        }
        let low_deg = first.0.degree();
        let mut best = first;
        for t in it.take_while(|(m, _)| m.degree() == low_deg) {
            if mono_compare(t.0, best.0, vo) == Ordering::Less {
                best = t;
            }
        }
        Some(best)
    }

    pub fn map_vars(&self, f: impl Fn(Var) -> Var) -> Series {
        Series::from_terms(self.degree, self.terms.iter().map(|(m, c)| (m.map_vars(&f), c.clone())))
    }

    pub(crate) fn into_terms(self) -> BTreeMap<Monomial, Coeff> {
        self.terms
    }

    pub(crate) fn from_sorted_terms(degree: usize, terms: BTreeMap<Monomial, Coeff>) -> Self {
        debug_assert!(terms.iter().all(|(m, c)| m.degree() <= degree && !c.is_zero()));
        Series { degree, terms }
    }
}

/// `f ≺ g` iff the lowest term of `g − f` has positive coefficient.
pub fn series_compare(f: &Series, g: &Series, vo: &(impl VariableOrder + ?Sized)) -> SeriesOrdering {
    let diff = g.sub(f);
    match diff.lowest_term(vo) {
        None => SeriesOrdering::EqualAtDegree,
        Some((_, c)) if c.is_positive() => SeriesOrdering::Less,
        Some(_) => SeriesOrdering::Greater,
    }
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            match (k, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if m.degree() == 0 {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{abs} {m}")?;
            }
        }
        Ok(())
    }
}

#[derive(Serialize)]
struct TermJson<'a> {
    mono: &'a [Var],
    coeff: String,
}

impl Serialize for Series {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct SeriesJson<'a> {
            degree: usize,
            terms: Vec<TermJson<'a>>,
        }
        SeriesJson {
            degree: self.degree,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| TermJson {
                    mono: m.vars(),
                    coeff: c.to_string(),
                })
                .collect(),
        }
        .serialize(s)
    }
}
