//! The Magnus expansion and the Magnus bi-order on free groups, plus the
//! generic order machinery shared by the other modules: the
//! [`OrderedGroup`] contract, extension orders built from a kernel order
//! and a quotient order, and property checks for positive cones,
//! generalized torsion and order-preserving maps.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::series::{Coeff, NaturalOrder, Series, SeriesOrdering, Var, VariableOrder};
use crate::words::{apply_map, Generator, GeneratorMap, Word};

/// Degree schedule for comparisons decided by truncated expansions: start at
/// `start`, double until decisive, give up above `cap`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Escalation {
    pub start: usize,
    pub cap: usize,
}

impl Default for Escalation {
    fn default() -> Self {
        Escalation { start: 4, cap: 32 }
    }
}

impl Escalation {
    pub fn new(start: usize, cap: usize) -> Result<Self> {
        if start == 0 || start > cap {
            return Err(Error::Precondition(format!(
                "need 1 <= start <= cap, got start={start} cap={cap}"
            )));
        }
        Ok(Escalation { start, cap })
    }

    /// The degrees tried, in order.
    pub fn degrees(self) -> impl Iterator<Item = usize> {
        let cap = self.cap;
        std::iter::successors(Some(self.start.max(1).min(cap)), move |&d| {
            (d < cap).then(|| (2 * d).min(cap))
        })
    }

    /// Runs `decide` at each degree until it returns a strict verdict.
    pub fn run(self, mut decide: impl FnMut(usize) -> Result<SeriesOrdering>) -> Result<Ordering> {
        for d in self.degrees() {
            match decide(d)? {
                SeriesOrdering::Less => return Ok(Ordering::Less),
                SeriesOrdering::Greater => return Ok(Ordering::Greater),
                SeriesOrdering::EqualAtDegree => {}
            }
        }
        Err(Error::UndecidedAtCap { cap: self.cap })
    }
}

fn binomial(n: u64, k: u64) -> BigInt {
    let mut acc = BigInt::from(1);
    for t in 0..k {
        acc = acc * BigInt::from(n - t) / BigInt::from(t + 1);
    }
    acc
}

/// Coefficients of `(1 + X)^e` up to `X^d`, for any integer `e`.
fn binomial_series(e: i64, d: usize) -> Vec<Coeff> {
    (0..=d as u64)
        .map(|k| {
            let c = if e >= 0 {
                if k > e as u64 {
                    BigInt::from(0)
                } else {
                    binomial(e as u64, k)
                }
            } else {
                // (1+X)^{-m} = Σ (-1)^k C(m+k-1, k) X^k
                let m = e.unsigned_abs();
                let b = binomial(m + k - 1, k);
                if k % 2 == 1 {
                    -b
                } else {
                    b
                }
            };
            Coeff::from_integer(c)
        })
        .collect()
}

/// Magnus expansion truncated at degree `d`: `x_i ↦ 1 + X_i`, with
/// `X_i` the variable of id `i` (generator index; the alphabet is ignored).
pub fn magnus_expand(w: &Word<Generator>, d: usize) -> Series {
    magnus_expand_by(w, d, |g| g.index)
}

/// Magnus expansion with an explicit generator-to-variable assignment.
pub fn magnus_expand_by<G: PartialEq>(w: &Word<G>, d: usize, var: impl Fn(&G) -> Var) -> Series {
    let mut out = Series::one(d);
    let letters = w.letters();
    let mut i = 0;
    while i < letters.len() {
        let g = &letters[i].gen;
        let mut e = 0i64;
        while i < letters.len() && letters[i].gen == *g {
            e += letters[i].exp();
            i += 1;
        }
        if e != 0 {
            out = out.mul_univariate(var(g), &binomial_series(e, d));
        }
    }
    out
}

/// The Magnus order: `a < b` iff `M(a) ≺ M(b)`.
///
/// Equality is decided on reduced words. Otherwise both words are expanded
/// at increasing degree until the truncated images differ.
pub fn magnus_compare(
    a: &Word<Generator>,
    b: &Word<Generator>,
    vo: &(impl VariableOrder + ?Sized),
    esc: Escalation,
) -> Result<Ordering> {
    if a == b {
        return Ok(Ordering::Equal);
    }
    if vo.is_natural() {
        return esc.run(|d| {
            Ok(crate::series::series_compare(
                &magnus_expand(a, d),
                &magnus_expand(b, d),
                &NaturalOrder,
            ))
        });
    }
    // Relabel the occurring variables by rank so the natural order applies.
    let mut vars: Vec<Var> = a.letters().iter().chain(b.letters()).map(|l| l.gen.index).collect();
    vars.sort_by(|x, y| vo.compare_vars(*x, *y));
    vars.dedup();
    let rank = |g: &Generator| vars.iter().position(|&v| v == g.index).unwrap() as Var;
    esc.run(|d| {
        Ok(crate::series::series_compare(
            &magnus_expand_by(a, d, rank),
            &magnus_expand_by(b, d, rank),
            &NaturalOrder,
        ))
    })
}

/// A group with a decidable word problem.
pub trait Group: Sync {
    type Elem: Clone + fmt::Debug + fmt::Display + Send + Sync;

    fn identity(&self) -> Self::Elem;
    fn multiply(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn invert(&self, a: &Self::Elem) -> Self::Elem;
    fn is_identity(&self, a: &Self::Elem) -> bool;

    fn conjugate(&self, g: &Self::Elem, h: &Self::Elem) -> Self::Elem {
        self.multiply(&self.multiply(h, g), &self.invert(h))
    }

    fn equal(&self, a: &Self::Elem, b: &Self::Elem) -> bool {
        self.is_identity(&self.multiply(&self.invert(a), b))
    }
}

/// A group with a strict total order. Bi-invariance is checked, never assumed.
pub trait OrderedGroup: Group {
    fn compare(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Ordering>;

    /// `Less` when `g` lies in the positive cone.
    fn sign(&self, g: &Self::Elem) -> Result<Ordering> {
        self.compare(&self.identity(), g)
    }
}

/// Free group on the `x` alphabet with the Magnus order for `vo`.
#[derive(Debug, Clone, Default)]
pub struct MagnusOrder<V = NaturalOrder> {
    pub vo: V,
    pub esc: Escalation,
}

impl MagnusOrder<NaturalOrder> {
    pub fn natural() -> Self {
        Self::default()
    }
}

impl<V: VariableOrder + Sync> Group for MagnusOrder<V> {
    type Elem = Word;

    fn identity(&self) -> Word {
        Word::identity()
    }

    fn multiply(&self, a: &Word, b: &Word) -> Word {
        a.multiply(b)
    }

    fn invert(&self, a: &Word) -> Word {
        a.inverse()
    }

    fn is_identity(&self, a: &Word) -> bool {
        a.is_identity()
    }
}

impl<V: VariableOrder + Sync> OrderedGroup for MagnusOrder<V> {
    fn compare(&self, a: &Word, b: &Word) -> Result<Ordering> {
        magnus_compare(a, b, &self.vo, self.esc)
    }
}

/// A short exact sequence `1 → A → B → C → 1` with orders on `A` and `C`.
pub trait Extension: Group {
    type Quotient;

    fn project(&self, b: &Self::Elem) -> Self::Quotient;
    fn quotient_is_identity(&self, q: &Self::Quotient) -> bool;
    /// Sign of a quotient element: `Less` iff `1 < q`.
    fn quotient_sign(&self, q: &Self::Quotient) -> Result<Ordering>;
    /// Order on kernel elements (those projecting to the identity).
    fn kernel_compare(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Ordering>;
}

/// The extension order with positive cone `α(p_A) ∪ β⁻¹(p_C)`.
pub fn extension_compare<E: Extension>(ext: &E, a: &E::Elem, b: &E::Elem) -> Result<Ordering> {
    let diff = ext.multiply(b, &ext.invert(a));
    let q = ext.project(&diff);
    if !ext.quotient_is_identity(&q) {
        return ext.quotient_sign(&q);
    }
    ext.kernel_compare(&ext.identity(), &diff)
}

/// An [`Extension`] viewed as an ordered group via [`extension_compare`].
#[derive(Debug, Clone)]
pub struct ExtensionOrder<E>(pub E);

impl<E: Extension> Group for ExtensionOrder<E> {
    type Elem = E::Elem;

    fn identity(&self) -> E::Elem {
        self.0.identity()
    }
    fn multiply(&self, a: &E::Elem, b: &E::Elem) -> E::Elem {
        self.0.multiply(a, b)
    }
    fn invert(&self, a: &E::Elem) -> E::Elem {
        self.0.invert(a)
    }
    fn is_identity(&self, a: &E::Elem) -> bool {
        self.0.is_identity(a)
    }
}

impl<E: Extension> OrderedGroup for ExtensionOrder<E> {
    fn compare(&self, a: &E::Elem, b: &E::Elem) -> Result<Ordering> {
        extension_compare(&self.0, a, b)
    }
}

/// One failed check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub inputs: Vec<String>,
    pub expected: String,
    pub got: String,
}

/// Outcome of a property check. Comparisons that hit the degree cap are
/// counted in `undecided` instead of being guessed.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub checked: usize,
    pub violations: Vec<Violation>,
    pub undecided: usize,
}

impl Report {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn merge(&mut self, other: Report) {
        self.checked += other.checked;
        self.violations.extend(other.violations);
        self.undecided += other.undecided;
    }

    pub fn merged(parts: impl IntoIterator<Item = Report>) -> Report {
        let mut out = Report::default();
        for p in parts {
            out.merge(p);
        }
        out
    }

    pub fn violation(&mut self, inputs: Vec<String>, expected: impl Into<String>, got: impl Into<String>) {
        self.violations.push(Violation {
            inputs,
            expected: expected.into(),
            got: got.into(),
        });
    }

    /// Records `got` against `expected`. Undecided comparisons are tallied.
    pub fn expect(&mut self, inputs: impl FnOnce() -> Vec<String>, expected: Ordering, got: Result<Ordering>) {
        self.checked += 1;
        match got {
            Ok(o) if o == expected => {}
            Ok(o) => self.violation(inputs(), ord_name(expected), ord_name(o)),
            Err(Error::UndecidedAtCap { .. }) => self.undecided += 1,
            Err(e) => self.violation(inputs(), ord_name(expected), e.to_string()),
        }
    }
}

pub fn ord_name(o: Ordering) -> &'static str {
    match o {
        Ordering::Less => "LT",
        Ordering::Equal => "EQ",
        Ordering::Greater => "GT",
    }
}

/// Whether [`check_cone_axioms`] also checks conjugation invariance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConeMode {
    Left,
    Bi,
}

pub fn check_cone_axioms<G: OrderedGroup>(group: &G, sample: &[G::Elem], mode: ConeMode) -> Report {
    check_cone_axioms_with(Exec::Auto, group, sample, mode)
}

/// Checks the positive-cone characterization of an order on every pair of
/// `sample`: each element is exactly one of positive, identity or inverse of
/// a positive; positives are closed under products; in bi mode, `g p g⁻¹` is
/// positive for positive `p`.
pub fn check_cone_axioms_with<G: OrderedGroup>(exec: Exec, group: &G, sample: &[G::Elem], mode: ConeMode) -> Report {
    let signs: Vec<Result<Ordering>> = exec.map(sample, |g| group.sign(g));

    let mut report = Report::default();
    for (g, s) in sample.iter().zip(&signs) {
        let inv_sign = group.sign(&group.invert(g));
        let expected = match s {
            Ok(o) => o.reverse(),
            Err(_) => {
                report.expect(|| vec![g.to_string()], Ordering::Less, s.clone());
                continue;
            }
        };
        report.expect(|| vec![g.to_string(), "inverse".into()], expected, inv_sign);
        let is_id = group.is_identity(g);
        report.checked += 1;
        if is_id != (*s == Ok(Ordering::Equal)) {
            report.violation(
                vec![g.to_string()],
                if is_id { "EQ" } else { "LT or GT" },
                format!("{:?}", s),
            );
        }
    }

    let positive: Vec<bool> = signs.iter().map(|s| *s == Ok(Ordering::Less)).collect();
    let rows = exec.map_indexed(sample.len(), |i| {
        let mut row = Report::default();
        for j in 0..sample.len() {
            let (g, h) = (&sample[i], &sample[j]);
            if positive[i] && positive[j] {
                let gh = group.multiply(g, h);
                row.expect(
                    || vec![g.to_string(), h.to_string(), "product".into()],
                    Ordering::Less,
                    group.sign(&gh),
                );
            }
            if mode == ConeMode::Bi && positive[j] {
                let c = group.conjugate(h, g);
                row.expect(
                    || vec![g.to_string(), h.to_string(), "conjugate".into()],
                    Ordering::Less,
                    group.sign(&c),
                );
            }
        }
        row
    });
    report.merge(Report::merged(rows));
    report
}

/// Sign invariant behind "bi-orderable groups have no generalized torsion":
/// every conjugate of `g` has the sign of `g`, and so does the product of the
/// conjugates, which is therefore nontrivial.
pub fn check_gt_absence<G: OrderedGroup>(group: &G, g: &G::Elem, conjugators: &[G::Elem]) -> Result<bool> {
    if group.is_identity(g) {
        return Err(Error::Precondition("g must not be the identity".into()));
    }
    let sign = group.sign(g)?;
    let mut product = group.identity();
    for h in conjugators {
        let c = group.conjugate(g, h);
        if group.sign(&c)? != sign {
            return Ok(false);
        }
        product = group.multiply(&product, &c);
    }
    if conjugators.is_empty() {
        return Ok(true);
    }
    Ok(!group.is_identity(&product) && group.sign(&product)? == sign)
}

/// Checks that `map` carries the order of `source` into the order of
/// `target`: for each pair, the verdict on the images equals the verdict
/// on the originals.
pub fn check_order_preserved<S: OrderedGroup, T: OrderedGroup>(
    exec: Exec,
    map: impl Fn(&S::Elem) -> T::Elem + Sync + Send,
    source: &S,
    target: &T,
    pairs: &[(S::Elem, S::Elem)],
) -> Report {
    Report::merged(exec.map(pairs, |(a, b)| {
        let mut r = Report::default();
        let before = match source.compare(a, b) {
            Ok(o) => o,
            Err(e) => {
                r.expect(|| vec![a.to_string(), b.to_string()], Ordering::Equal, Err(e));
                return r;
            }
        };
        let (fa, fb) = (map(a), map(b));
        r.expect(
            || vec![a.to_string(), b.to_string(), fa.to_string(), fb.to_string()],
            before,
            target.compare(&fa, &fb),
        );
        r
    }))
}

/// [`check_order_preserved`] for an endomorphism given by a generator map.
pub fn check_order_preserved_by<G>(phi: &GeneratorMap, order: &G, pairs: &[(Word, Word)]) -> Report
where
    G: OrderedGroup<Elem = Word>,
{
    check_order_preserved(Exec::Auto, |w| apply_map(phi, w), order, order, pairs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::{coeff, Monomial, RankOrder};
    use crate::words::abelianize;
    use proptest::prelude::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn s(d: usize, terms: &[(&[Var], i64)]) -> Series {
        Series::from_terms(d, terms.iter().map(|(v, c)| (Monomial::new(v.to_vec()), coeff(*c))))
    }

    /// Product of generator series, written out with no run-length shortcut.
    fn naive_expand(word: &Word, d: usize) -> Series {
        word.letters().iter().fold(Series::one(d), |acc, l| {
            let x = Series::one(d).add(&Series::var(l.gen.index, d));
            let f = if l.inverse { x.unit_inverse().unwrap() } else { x };
            acc.mul(&f)
        })
    }

    #[test]
    fn escalation_schedule() {
        let e = Escalation::default();
        assert_eq!(e.degrees().collect::<Vec<_>>(), vec![4, 8, 16, 32]);
        let e = Escalation::new(3, 20).unwrap();
        assert_eq!(e.degrees().collect::<Vec<_>>(), vec![3, 6, 12, 20]);
        assert!(Escalation::new(0, 4).is_err());
        assert!(Escalation::new(5, 4).is_err());
    }

    #[test]
    fn expand_examples() {
        assert_eq!(magnus_expand(&w("x_1"), 3), s(3, &[(&[], 1), (&[1], 1)]));
        assert_eq!(magnus_expand(&Word::identity(), 5), Series::one(5));
        assert_eq!(
            magnus_expand(&w("x_1 x_2 x_1^-1 x_2^-1"), 2),
            s(2, &[(&[], 1), (&[1, 2], 1), (&[2, 1], -1)])
        );
        assert_eq!(
            magnus_expand(&w("x_1^-1"), 3),
            s(3, &[(&[], 1), (&[1], -1), (&[1, 1], 1), (&[1, 1, 1], -1)])
        );
    }

    #[test]
    fn compare_examples() {
        let esc = Escalation::default();
        let nat = NaturalOrder;
        assert_eq!(
            magnus_compare(&Word::identity(), &w("x_1"), &nat, esc),
            Ok(Ordering::Less)
        );
        assert_eq!(magnus_compare(&w("x_1"), &w("x_1"), &nat, esc), Ok(Ordering::Equal));
        assert_eq!(magnus_compare(&w("x_1"), &w("x_2"), &nat, esc), Ok(Ordering::Greater));
        assert_eq!(
            magnus_compare(&Word::identity(), &w("x_1 x_2 x_1^-1 x_2^-1"), &nat, esc),
            Ok(Ordering::Less)
        );
        let rev = RankOrder::from_ascending([2, 1]);
        assert_eq!(magnus_compare(&w("x_1"), &w("x_2"), &rev, esc), Ok(Ordering::Less));
    }

    #[test]
    fn undecided_is_reported() {
        // [x_1, [x_1, x_2]] first differs from 1 in degree 3.
        let c = w("x_1 x_1 x_2 x_1^-1 x_2^-1 x_1^-1 x_2 x_1 x_2^-1 x_1^-1");
        let esc = Escalation::new(2, 2).unwrap();
        assert_eq!(
            magnus_compare(&Word::identity(), &c, &NaturalOrder, esc),
            Err(Error::UndecidedAtCap { cap: 2 })
        );
        let esc = Escalation::new(2, 4).unwrap();
        assert!(magnus_compare(&Word::identity(), &c, &NaturalOrder, esc).is_ok());
    }

    struct Z2;

    impl Group for Z2 {
        type Elem = Word;
        fn identity(&self) -> Word {
            Word::identity()
        }
        fn multiply(&self, a: &Word, b: &Word) -> Word {
            canon(&a.multiply(b))
        }
        fn invert(&self, a: &Word) -> Word {
            canon(&a.inverse())
        }
        fn is_identity(&self, a: &Word) -> bool {
            abelianize(a).is_zero()
        }
    }

    /// ℤ² written as `x_1^a x_2^b`.
    fn canon(a: &Word) -> Word {
        let v = abelianize(a);
        Word::power_of(Generator::x(1), v.get(&Generator::x(1)))
            .multiply(&Word::power_of(Generator::x(2), v.get(&Generator::x(2))))
    }

    fn z2(a: i64, b: i64) -> Word {
        canon(&Word::power_of(Generator::x(1), a).multiply(&Word::power_of(Generator::x(2), b)))
    }

    /// ℤ² over ℤ by the second coordinate, kernel ordered by the first.
    impl Extension for Z2 {
        type Quotient = i64;
        fn project(&self, b: &Word) -> i64 {
            abelianize(b).get(&Generator::x(2))
        }
        fn quotient_is_identity(&self, q: &i64) -> bool {
            *q == 0
        }
        fn quotient_sign(&self, q: &i64) -> Result<Ordering> {
            Ok(0.cmp(q))
        }
        fn kernel_compare(&self, a: &Word, b: &Word) -> Result<Ordering> {
            let f = |w: &Word| abelianize(w).get(&Generator::x(1));
            Ok(f(a).cmp(&f(b)))
        }
    }

    #[test]
    fn extension_examples() {
        assert_eq!(extension_compare(&Z2, &z2(0, 0), &z2(5, 1)), Ok(Ordering::Less));
        assert_eq!(extension_compare(&Z2, &z2(3, 1), &z2(5, 1)), Ok(Ordering::Less));
        assert_eq!(extension_compare(&Z2, &z2(5, -2), &z2(-7, 3)), Ok(Ordering::Less));
        assert_eq!(extension_compare(&Z2, &z2(2, 2), &z2(2, 2)), Ok(Ordering::Equal));
        let sample: Vec<Word> = (-3..=3).flat_map(|a| (-3..=3).map(move |b| z2(a, b))).collect();
        assert!(check_cone_axioms(&ExtensionOrder(Z2), &sample, ConeMode::Bi).is_clean());
    }

    /// F₂ over ℤ by the exponent sum of `x_2`, kernel ordered by Magnus.
    struct FreeOverZ;

    impl Group for FreeOverZ {
        type Elem = Word;
        fn identity(&self) -> Word {
            Word::identity()
        }
        fn multiply(&self, a: &Word, b: &Word) -> Word {
            a.multiply(b)
        }
        fn invert(&self, a: &Word) -> Word {
            a.inverse()
        }
        fn is_identity(&self, a: &Word) -> bool {
            a.is_identity()
        }
    }

    impl Extension for FreeOverZ {
        type Quotient = i64;
        fn project(&self, b: &Word) -> i64 {
            abelianize(b).get(&Generator::x(2))
        }
        fn quotient_is_identity(&self, q: &i64) -> bool {
            *q == 0
        }
        fn quotient_sign(&self, q: &i64) -> Result<Ordering> {
            Ok(0.cmp(q))
        }
        fn kernel_compare(&self, a: &Word, b: &Word) -> Result<Ordering> {
            magnus_compare(a, b, &NaturalOrder, Escalation::default())
        }
    }

    #[test]
    fn extension_of_free_group_is_bi_invariant() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let order = ExtensionOrder(FreeOverZ);
        let sample: Vec<Word> = (0..40)
            .map(|_| {
                let len = rng.random_range(0..7);
                crate::harness::random_word(&mut rng, 2, len)
            })
            .collect();
        let r = check_cone_axioms(&order, &sample, ConeMode::Bi);
        assert!(r.is_clean(), "{:?}", r.violations.first());
        assert!(r.checked > 1000);
    }

    /// Lexicographic order on the stored letters: not a group order.
    struct LexOrder;

    impl Group for LexOrder {
        type Elem = Word;
        fn identity(&self) -> Word {
            Word::identity()
        }
        fn multiply(&self, a: &Word, b: &Word) -> Word {
            a.multiply(b)
        }
        fn invert(&self, a: &Word) -> Word {
            a.inverse()
        }
        fn is_identity(&self, a: &Word) -> bool {
            a.is_identity()
        }
    }

    impl OrderedGroup for LexOrder {
        fn compare(&self, a: &Word, b: &Word) -> Result<Ordering> {
            let key = |w: &Word| -> Vec<(u32, bool)> { w.letters().iter().map(|l| (l.gen.index, l.inverse)).collect() };
            Ok(key(a).cmp(&key(b)))
        }
    }

    #[test]
    fn cone_checks() {
        let sample: Vec<Word> = [
            "1",
            "x_1",
            "x_2^-1",
            "x_1 x_2",
            "x_2 x_1^-1 x_2",
            "x_1^-1 x_2^-1 x_1 x_2",
        ]
        .iter()
        .map(|s| w(s))
        .collect();
        let r = check_cone_axioms(&MagnusOrder::natural(), &sample, ConeMode::Bi);
        assert!(r.is_clean(), "{:?}", r.violations);
        assert!(r.checked > 0);
        let bad = check_cone_axioms(&LexOrder, &sample, ConeMode::Bi);
        assert!(!bad.is_clean());
        let empty = check_cone_axioms(&MagnusOrder::natural(), &[], ConeMode::Bi);
        assert_eq!(empty, Report::default());
    }

    #[test]
    fn gt_absence_examples() {
        let m = MagnusOrder::natural();
        assert_eq!(check_gt_absence(&m, &w("x_1"), &[w("x_2"), w("x_1 x_2^-1")]), Ok(true));
        assert!(matches!(
            check_gt_absence(&m, &Word::identity(), &[w("x_2")]),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn preserved_by_examples() {
        let m = MagnusOrder::natural();
        let conj = GeneratorMap::from_images([(Generator::x(1), w("x_2 x_1 x_2^-1"))]);
        let pairs = vec![(w("1"), w("x_1")), (w("x_2"), w("x_1")), (w("x_1 x_2"), w("x_2 x_1"))];
        assert!(check_order_preserved_by(&conj, &m, &pairs).is_clean());
        let swap = GeneratorMap::from_images([(Generator::x(1), w("x_2")), (Generator::x(2), w("x_1"))]);
        let r = check_order_preserved_by(&swap, &m, &[(w("x_2"), w("x_1"))]);
        assert_eq!(r.violations.len(), 1);
    }

    fn word_strategy(gens: u32, max_len: usize) -> impl Strategy<Value = Word> {
        prop::collection::vec((1..=gens, prop::bool::ANY), 0..=max_len).prop_map(|v| {
            crate::words::reduce(v.into_iter().map(|(i, inv)| crate::words::Letter {
                gen: Generator::x(i),
                inverse: inv,
            }))
        })
    }

    proptest! {
        #[test]
        fn expansion_is_multiplicative(u in word_strategy(3, 8), v in word_strategy(3, 8), d in 0usize..=5) {
            prop_assert_eq!(magnus_expand(&u.multiply(&v), d), magnus_expand(&u, d).mul(&magnus_expand(&v, d)));
        }

        #[test]
        fn run_length_expansion_matches_naive(u in word_strategy(2, 8), d in 0usize..=5) {
            prop_assert_eq!(magnus_expand(&u, d), naive_expand(&u, d));
        }

        #[test]
        fn magnus_order_is_bi_invariant(a in word_strategy(2, 6), b in word_strategy(2, 6), c in word_strategy(2, 6)) {
            let m = MagnusOrder::natural();
            let ab = m.compare(&a, &b).unwrap();
            prop_assert_eq!(m.compare(&c.multiply(&a), &c.multiply(&b)).unwrap(), ab);
            prop_assert_eq!(m.compare(&a.multiply(&c), &b.multiply(&c)).unwrap(), ab);
            prop_assert_eq!(m.compare(&b, &a).unwrap(), ab.reverse());
        }
    }
}
