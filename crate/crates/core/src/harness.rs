//! Seeded property suites over every module, shared by the CLI, the
//! acceptance tests and the benches.
//!
//! Samples are drawn sequentially from one seeded generator and then
//! evaluated with the configured [`Exec`], so reports are identical for the
//! sequential and parallel paths.

use std::cmp::Ordering;
use std::collections::{HashMap, HashSet, VecDeque};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::braid::{
    check_delta_relation, delta_word, gamma_delta_conjugator, is_pure, make_gt_certificate, mirror,
    mirror_respects_relations, verify_certificate, verify_generalized_torsion, BraidGroup, BraidWord, Conjugator,
    Relation, StepStatus,
};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::knorder::{
    fgen_compare, kn_compare, kn_datum, psi_action, psi_action_inverse, semidirect_compare, ActionLabel, FGen, FWord,
    FreeSemidirect, KnElement, KnFactor, SemidirectElem,
};
use crate::magnus::{
    check_cone_axioms_with, check_gt_absence, check_order_preserved, magnus_compare, magnus_expand, ord_name, ConeMode,
    Escalation, Group, MagnusOrder, OrderedGroup, Report, Violation,
};
use crate::series::{NaturalOrder, RankOrder, Series};
use crate::surface::{is_trivial, surface_expand, SurfaceElem, SurfaceGroup, SurfacePresentation};
use crate::words::{abelianize, apply_map, reduce, Generator, GeneratorMap, Letter, Word};

pub const REPORT_SCHEMA: &str = "braidorder.suite-report/1";

/// Violations listed per section; the count is always exact.
pub const MAX_LISTED: usize = 25;

/// Largest tolerated share of comparisons that hit the degree cap.
pub const MAX_UNDECIDED_RATE: f64 = 0.01;

pub const SUITES: &[&str] = &[
    "homomorphism",
    "cone-axioms",
    "bi-invariance",
    "automorphism-invariance",
    "relabeling-invariance",
    "surface-word-problem",
    "surface-order",
    "psi-order",
    "kn-oracle",
    "delta",
    "certificates",
    "gt-dichotomy",
    "negative-controls",
];

/// Suite parameters. `None` selects the suite's own default.
#[derive(Debug, Clone, Copy, Default)]
pub struct SuiteConfig {
    pub seed: u64,
    pub samples: Option<usize>,
    pub genus: Option<u32>,
    pub strands: Option<u32>,
    pub esc: Escalation,
    pub exec: Exec,
}

impl SuiteConfig {
    pub fn seeded(seed: u64) -> Self {
        SuiteConfig {
            seed,
            ..Default::default()
        }
    }

    fn rng(&self, stream: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(stream);
        rng
    }

    fn samples_or(&self, default: usize) -> usize {
        self.samples.unwrap_or(default)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Section {
    pub name: String,
    pub expect_failure: bool,
    pub checked: usize,
    pub undecided: usize,
    pub violation_count: usize,
    pub violations: Vec<Violation>,
    pub passed: bool,
}

impl Section {
    pub fn new(name: impl Into<String>, expect_failure: bool, report: Report) -> Self {
        let clean = report.is_clean();
        let undecided_ok = (report.undecided as f64) <= MAX_UNDECIDED_RATE * report.checked as f64;
        let passed = if expect_failure { !clean } else { clean && undecided_ok };
        let violation_count = report.violations.len();
        let mut violations = report.violations;
        violations.truncate(MAX_LISTED);
        Section {
            name: name.into(),
            expect_failure,
            checked: report.checked,
            undecided: report.undecided,
            violation_count,
            violations,
            passed,
        }
    }
}

/// The JSON report of one suite run.
#[derive(Debug, Clone, Serialize)]
pub struct SuiteOutcome {
    pub schema: &'static str,
    pub suite: String,
    pub seed: u64,
    pub checked: usize,
    pub undecided: usize,
    pub violation_count: usize,
    pub violations: Vec<Violation>,
    pub sections: Vec<Section>,
    pub passed: bool,
}

impl SuiteOutcome {
    fn new(suite: &str, seed: u64, sections: Vec<Section>) -> Self {
        let violations = sections
            .iter()
            .flat_map(|s| s.violations.iter().cloned())
            .take(MAX_LISTED)
            .collect();
        SuiteOutcome {
            schema: REPORT_SCHEMA,
            suite: suite.into(),
            seed,
            checked: sections.iter().map(|s| s.checked).sum(),
            undecided: sections.iter().map(|s| s.undecided).sum(),
            violation_count: sections.iter().map(|s| s.violation_count).sum(),
            violations,
            passed: sections.iter().all(|s| s.passed),
            sections,
        }
    }

    pub fn section(&self, name: &str) -> Option<&Section> {
        self.sections.iter().find(|s| s.name == name)
    }
}

pub fn run_suite(name: &str, cfg: &SuiteConfig) -> Result<SuiteOutcome> {
    let sections = match name {
        "homomorphism" => homomorphism(cfg),
        "cone-axioms" => cone_axioms(cfg),
        "bi-invariance" => bi_invariance(cfg),
        "automorphism-invariance" => automorphism_invariance(cfg),
        "relabeling-invariance" => relabeling_invariance(cfg),
        "surface-word-problem" => surface_word_problem(cfg)?,
        "surface-order" => surface_order(cfg)?,
        "psi-order" => psi_order(cfg)?,
        "kn-oracle" => kn_oracle(cfg)?,
        "delta" => delta(cfg)?,
        "certificates" => certificates(cfg)?,
        "gt-dichotomy" => gt_dichotomy(cfg)?,
        "negative-controls" => negative_controls(cfg)?,
        _ => {
            return Err(Error::Precondition(format!(
                "unknown suite `{name}`; known: {}",
                SUITES.join(", ")
            )))
        }
    };
    Ok(SuiteOutcome::new(name, cfg.seed, sections))
}

// ---------------------------------------------------------------- sampling

/// A reduced word of exactly `len` letters over `x_1..x_rank`.
pub fn random_word(rng: &mut impl Rng, rank: u32, len: usize) -> Word {
    let gens: Vec<Generator> = (1..=rank).map(Generator::x).collect();
    random_word_over(rng, &gens, len)
}

/// A reduced word of exactly `len` letters over `gens`.
pub fn random_word_over(rng: &mut impl Rng, gens: &[Generator], len: usize) -> Word {
    let mut letters: Vec<Letter<Generator>> = Vec::with_capacity(len);
    while letters.len() < len {
        let l = Letter::new(gens[rng.random_range(0..gens.len())], if rng.random() { 1 } else { -1 });
        if letters.last().is_some_and(|p| p.gen == l.gen && p.inverse != l.inverse) {
            continue;
        }
        letters.push(l);
    }
    Word::from_letters(letters)
}

/// A reduced word with length uniform in `0..=max_len`.
pub fn random_word_upto(rng: &mut impl Rng, gens: &[Generator], max_len: usize) -> Word {
    let len = rng.random_range(0..=max_len);
    random_word_over(rng, gens, len)
}

fn x_gens(rank: u32) -> Vec<Generator> {
    (1..=rank).map(Generator::x).collect()
}

fn word_pairs(rng: &mut impl Rng, rank: u32, max_len: usize, count: usize) -> Vec<(Word, Word)> {
    let gens = x_gens(rank);
    (0..count)
        .map(|_| {
            (
                random_word_upto(rng, &gens, max_len),
                random_word_upto(rng, &gens, max_len),
            )
        })
        .collect()
}

/// An elementary automorphism of `F_rank` inducing the identity on `H1`:
/// `x_i ↦ x_j^e x_i x_j^-e`, or `x_i ↦ x_i [x_j, x_k]` with `i, j, k` distinct.
pub fn random_elementary_h1_trivial(rng: &mut impl Rng, rank: u32) -> GeneratorMap {
    assert!(rank >= 2);
    let i = rng.random_range(1..=rank);
    let other = |rng: &mut dyn rand::RngCore, not: &[u32]| loop {
        let j = rng.random_range(1..=rank);
        if !not.contains(&j) {
            break j;
        }
    };
    let xi = Word::gen(Generator::x(i));
    let image = if rank >= 3 && rng.random_bool(0.5) {
        let j = other(rng, &[i]);
        let k = other(rng, &[i, j]);
        let c = Word::commutator(&Word::gen(Generator::x(j)), &Word::gen(Generator::x(k)));
        xi.multiply(&c)
    } else {
        let j = other(rng, &[i]);
        let e = if rng.random() { 1 } else { -1 };
        xi.conjugate_by(&Word::power_of(Generator::x(j), e))
    };
    GeneratorMap::from_images([(Generator::x(i), image)])
}

/// A composite of one to three elementary `H1`-trivial automorphisms.
pub fn random_h1_trivial_automorphism(rng: &mut impl Rng, rank: u32) -> GeneratorMap {
    let steps = rng.random_range(1..=3);
    (0..steps).fold(GeneratorMap::identity(), |acc, _| {
        acc.compose(&random_elementary_h1_trivial(rng, rank))
    })
}

fn random_surface(rng: &mut impl Rng, p: &SurfacePresentation, max_len: usize) -> SurfaceElem {
    let gens: Vec<Generator> = p.generators().collect();
    p.elem(random_word_upto(rng, &gens, max_len))
}

fn random_fgen(rng: &mut impl Rng, i: u32, n: u32, p: &SurfacePresentation, gamma_len: usize) -> FGen {
    let j = rng.random_range(i + 1..=n);
    FGen::new(i, j, random_surface(rng, p, gamma_len)).expect("i < j")
}

/// A word over `ℱ_{i,n}` built from a small pool of generators, so that
/// letters repeat and cancel.
fn random_fword(rng: &mut impl Rng, pool: &[FGen], max_len: usize) -> FWord {
    let len = rng.random_range(0..=max_len);
    reduce((0..len).map(|_| {
        let f = pool[rng.random_range(0..pool.len())].clone();
        Letter::new(f, if rng.random() { 1 } else { -1 })
    }))
}

fn fgen_pools(rng: &mut impl Rng, n: u32, p: &SurfacePresentation) -> Vec<Vec<FGen>> {
    (1..n)
        .map(|i| (0..4).map(|_| random_fgen(rng, i, n, p, 2)).collect())
        .collect()
}

fn random_kn(rng: &mut impl Rng, n: u32, pools: &[Vec<FGen>]) -> KnElement {
    let comps = pools.iter().map(|pool| random_fword(rng, pool, 4)).collect();
    KnElement::new(n, comps).expect("components drawn from their own family")
}

// ------------------------------------------------------------- free groups

fn homomorphism(cfg: &SuiteConfig) -> Vec<Section> {
    let pairs = word_pairs(&mut cfg.rng(1), 3, 8, cfg.samples_or(1000));
    let d = 4;
    let report = Report::merged(cfg.exec.map(&pairs, |(u, v)| {
        let mut r = Report::default();
        r.checked += 1;
        let lhs = magnus_expand(&u.multiply(v), d);
        let rhs = magnus_expand(u, d).mul(&magnus_expand(v, d));
        if lhs != rhs {
            r.violation(vec![u.to_string(), v.to_string()], rhs.to_string(), lhs.to_string());
        }
        r
    }));
    vec![Section::new("M(uv) = M(u) M(v), F3, d = 4", false, report)]
}

fn cone_axioms(cfg: &SuiteConfig) -> Vec<Section> {
    let pairs = cfg.samples_or(10_000);
    let size = (pairs as f64).sqrt().ceil() as usize;
    let order = MagnusOrder::natural();
    [2u32, 3]
        .iter()
        .map(|&rank| {
            let mut rng = cfg.rng(10 + rank as u64);
            let gens = x_gens(rank);
            let sample: Vec<Word> = (0..size).map(|_| random_word_upto(&mut rng, &gens, 8)).collect();
            let report = check_cone_axioms_with(cfg.exec, &order, &sample, ConeMode::Bi);
            Section::new(format!("cone axioms, F{rank}, {size}² pairs"), false, report)
        })
        .collect()
}

/// Left and right invariance and antisymmetry of `order` on sampled triples.
fn invariance_sections<G: OrderedGroup>(
    exec: Exec,
    label: &str,
    order: &G,
    triples: &[(G::Elem, G::Elem, G::Elem)],
) -> Vec<Section> {
    let rows = exec.map(triples, |(a, b, c)| {
        let mut left = Report::default();
        let mut right = Report::default();
        let mut anti = Report::default();
        let inputs = || vec![a.to_string(), b.to_string(), c.to_string()];
        let ab = match order.compare(a, b) {
            Ok(o) => o,
            Err(e) => {
                left.expect(inputs, Ordering::Equal, Err(e));
                return (left, right, anti);
            }
        };
        left.expect(inputs, ab, order.compare(&order.multiply(c, a), &order.multiply(c, b)));
        right.expect(inputs, ab, order.compare(&order.multiply(a, c), &order.multiply(b, c)));
        anti.expect(inputs, ab.reverse(), order.compare(b, a));
        (left, right, anti)
    });
    let (mut l, mut r, mut s) = (Report::default(), Report::default(), Report::default());
    for (a, b, c) in rows {
        l.merge(a);
        r.merge(b);
        s.merge(c);
    }
    vec![
        Section::new(format!("left invariance, {label}"), false, l),
        Section::new(format!("right invariance, {label}"), false, r),
        Section::new(format!("antisymmetry, {label}"), false, s),
    ]
}

fn bi_invariance(cfg: &SuiteConfig) -> Vec<Section> {
    let mut rng = cfg.rng(20);
    let gens = x_gens(3);
    let triples: Vec<(Word, Word, Word)> = (0..cfg.samples_or(10_000))
        .map(|_| {
            (
                random_word_upto(&mut rng, &gens, 6),
                random_word_upto(&mut rng, &gens, 6),
                random_word_upto(&mut rng, &gens, 6),
            )
        })
        .collect();
    let order = MagnusOrder {
        esc: cfg.esc,
        ..MagnusOrder::natural()
    };
    invariance_sections(cfg.exec, "Magnus order on F3", &order, &triples)
}

/// Each map is checked on `per_map` pairs of the pool, cycling through it.
fn preserved_under_maps(
    exec: Exec,
    maps: &[GeneratorMap],
    pool: &[(Word, Word)],
    per_map: usize,
    esc: Escalation,
) -> Report {
    let order = MagnusOrder {
        esc,
        ..MagnusOrder::natural()
    };
    Report::merged(exec.map_indexed(maps.len(), |k| {
        let chunk: Vec<(Word, Word)> = (0..per_map)
            .map(|t| pool[(k * per_map + t) % pool.len()].clone())
            .collect();
        let phi = &maps[k];
        check_order_preserved(Exec::Sequential, |w| apply_map(phi, w), &order, &order, &chunk)
    }))
}

fn automorphism_invariance(cfg: &SuiteConfig) -> Vec<Section> {
    let count = cfg.samples_or(1000);
    let mut rng = cfg.rng(30);
    let maps: Vec<GeneratorMap> = (0..count)
        .map(|_| random_h1_trivial_automorphism(&mut rng, 3))
        .collect();
    let pool = word_pairs(&mut rng, 3, 6, count);
    let mut h1 = Report::default();
    for phi in &maps {
        h1.checked += 1;
        if !crate::words::is_h1_trivial(phi, &x_gens(3)) {
            h1.violation(vec![format!("{phi:?}")], "H1-trivial", "not H1-trivial");
        }
    }
    vec![
        Section::new("sampled maps are H1-trivial", false, h1),
        Section::new(
            "H1-trivial automorphisms preserve the Magnus order, F3",
            false,
            preserved_under_maps(cfg.exec, &maps, &pool, 10, cfg.esc),
        ),
    ]
}

fn permutations(k: u32) -> Vec<Vec<u32>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(k - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, k);
            out.push(q);
        }
    }
    out.sort();
    out
}

/// Compares `(a, b)` under the natural order against `(ψa, ψb)` under `target`.
fn permutation_report<V: crate::series::VariableOrder + Sync>(
    exec: Exec,
    images: &[u32],
    target: &V,
    pairs: &[(Word, Word)],
    esc: Escalation,
) -> Report {
    let psi = GeneratorMap::from_images(
        images
            .iter()
            .enumerate()
            .map(|(k, &t)| (Generator::x(k as u32 + 1), Word::gen(Generator::x(t)))),
    );
    Report::merged(exec.map(pairs, |(a, b)| {
        let mut r = Report::default();
        let before = magnus_compare(a, b, &NaturalOrder, esc);
        let (pa, pb) = (psi.apply(a), psi.apply(b));
        match before {
            Ok(o) => r.expect(
                || vec![format!("{images:?}"), a.to_string(), b.to_string()],
                o,
                magnus_compare(&pa, &pb, target, esc),
            ),
            Err(e) => r.expect(|| vec![a.to_string(), b.to_string()], Ordering::Equal, Err(e)),
        }
        r
    }))
}

fn relabeling_invariance(cfg: &SuiteConfig) -> Vec<Section> {
    let count = cfg.samples_or(1000);
    let mut rng = cfg.rng(40);
    let mut sections = Vec::new();
    let mut perm_report = Report::default();
    for k in 1..=4u32 {
        let pairs = word_pairs(&mut rng, k, 6, count);
        for perm in permutations(k) {
            // X_i ↦ X_{perm[i]}, into the order X_{perm[1]} < X_{perm[2]} < ⋯
            let target = RankOrder::from_ascending(perm.iter().copied());
            perm_report.merge(permutation_report(cfg.exec, &perm, &target, &pairs, cfg.esc));
        }
    }
    sections.push(Section::new(
        "order-preserving permutations of ≤ 4 variables preserve comparisons",
        false,
        perm_report,
    ));
    let pairs = word_pairs(&mut rng, 4, 6, count);
    let mut inj = Report::default();
    for _ in 0..8 {
        let mut targets: Vec<u32> = (1..=9).collect();
        while targets.len() > 4 {
            targets.remove(rng.random_range(0..targets.len()));
        }
        inj.merge(permutation_report(cfg.exec, &targets, &NaturalOrder, &pairs, cfg.esc));
    }
    sections.push(Section::new(
        "monotone relabelings into a larger alphabet preserve comparisons",
        false,
        inj,
    ));
    sections
}

// ----------------------------------------------------------------- surface

fn surface_word_problem(cfg: &SuiteConfig) -> Result<Vec<Section>> {
    let genus = cfg.genus.unwrap_or(2);
    let p = SurfacePresentation::new(genus)?;
    let gens: Vec<Generator> = p.generators().collect();
    let count = cfg.samples_or(1000);
    let mut rng = cfg.rng(50);
    let mut sections = Vec::new();

    let r = p.relator();
    let mut cyc = Report::default();
    for base in [r.clone(), r.inverse()] {
        let letters = base.letters().to_vec();
        for s in 0..letters.len() {
            let rot = reduce(letters[s..].iter().chain(&letters[..s]).cloned());
            cyc.checked += 1;
            if !is_trivial(&rot, &p) {
                cyc.violation(vec![rot.to_string()], "trivial", "nontrivial");
            }
        }
    }
    sections.push(Section::new(
        "relator and its cyclic conjugates are trivial",
        false,
        cyc,
    ));

    let products: Vec<Word> = (0..count)
        .map(|_| {
            let k = rng.random_range(1..=3);
            (0..k).fold(Word::identity(), |acc, _| {
                let h = random_word_upto(&mut rng, &gens, 5);
                let rr = if rng.random() { r.clone() } else { r.inverse() };
                acc.multiply(&rr.conjugate_by(&h))
            })
        })
        .collect();
    let prod = Report::merged(cfg.exec.map(&products, |w| {
        let mut rep = Report::default();
        rep.checked += 1;
        if !is_trivial(w, &p) {
            rep.violation(vec![w.to_string()], "trivial", "nontrivial");
        }
        rep
    }));
    sections.push(Section::new("products of conjugates of r^±1 are trivial", false, prod));

    let mut nonzero = Vec::with_capacity(count);
    while nonzero.len() < count {
        let len = rng.random_range(1..=10);
        let w = random_word_over(&mut rng, &gens, len);
        if !abelianize(&w).is_zero() {
            nonzero.push(w);
        }
    }
    let nz = Report::merged(cfg.exec.map(&nonzero, |w| {
        let mut rep = Report::default();
        rep.checked += 1;
        if is_trivial(w, &p) {
            rep.violation(vec![w.to_string()], "nontrivial", "trivial");
        }
        rep
    }));
    sections.push(Section::new(
        "words with nonzero abelianization are nontrivial",
        false,
        nz,
    ));

    let short = all_words(&gens, 4);
    let esc = cfg.esc;
    let agree = Report::merged(cfg.exec.map(&short, |w| {
        let mut rep = Report::default();
        rep.checked += 1;
        let e = p.elem(w.clone());
        let dehn = is_trivial(w, &p);
        let mut series_nontrivial = false;
        for d in esc.degrees() {
            match surface_expand(&e, d.max(2)) {
                Ok(s) if s != Series::one(d.max(2)) => {
                    series_nontrivial = true;
                    break;
                }
                Ok(_) => {}
                Err(err) => {
                    rep.violation(vec![w.to_string()], "expansion", err.to_string());
                    return rep;
                }
            }
            if dehn {
                break;
            }
        }
        if dehn && series_nontrivial {
            rep.violation(vec![w.to_string()], "trivial (Dehn)", "nontrivial (series)");
        } else if !dehn && !series_nontrivial {
            rep.undecided += 1;
        }
        rep
    }));
    sections.push(Section::new(
        format!(
            "series triviality agrees with Dehn's algorithm, all {} words of length ≤ 4",
            short.len()
        ),
        false,
        agree,
    ));
    Ok(sections)
}

/// Every reduced word of length `≤ max_len` over `gens`.
pub fn all_words(gens: &[Generator], max_len: usize) -> Vec<Word> {
    let letters: Vec<Letter<Generator>> = gens
        .iter()
        .flat_map(|g| [Letter::new(*g, 1), Letter::new(*g, -1)])
        .collect();
    let mut out = vec![Word::identity()];
    let mut frontier = vec![Word::identity()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &frontier {
            for l in &letters {
                if w.letters()
                    .last()
                    .is_some_and(|p| p.gen == l.gen && p.inverse != l.inverse)
                {
                    continue;
                }
                let mut ls = w.letters().to_vec();
                ls.push(l.clone());
                next.push(Word::from_letters(ls));
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

fn surface_order(cfg: &SuiteConfig) -> Result<Vec<Section>> {
    let genera = match cfg.genus {
        Some(g) => vec![g],
        None => vec![1, 2],
    };
    let mut sections = Vec::new();
    for g in genera {
        let group = SurfaceGroup::new(g, cfg.esc)?;
        let mut rng = cfg.rng(60 + g as u64);
        let triples: Vec<_> = (0..cfg.samples_or(1000))
            .map(|_| {
                let p = &group.presentation;
                (
                    random_surface(&mut rng, p, 6),
                    random_surface(&mut rng, p, 6),
                    random_surface(&mut rng, p, 6),
                )
            })
            .collect();
        sections.extend(invariance_sections(
            cfg.exec,
            &format!("π₁ genus {g}"),
            &group,
            &triples,
        ));
    }
    Ok(sections)
}

// ----------------------------------------------------------------- K_n

fn psi_order(cfg: &SuiteConfig) -> Result<Vec<Section>> {
    let n = cfg.strands.unwrap_or(4);
    let genus = cfg.genus.unwrap_or(2);
    if n < 2 {
        return Err(Error::Precondition("psi-order needs n >= 2".into()));
    }
    let p = SurfacePresentation::new(genus)?;
    let per_cell = cfg.samples_or(50);
    let mut rng = cfg.rng(70);
    let esc = cfg.esc;

    // (section, label, a, b)
    let mut cases: Vec<(usize, ActionLabel, FGen, FGen)> = Vec::new();
    for fam in 1..n {
        for j in fam + 1..=n {
            for k in fam + 1..=n {
                for l in ActionLabel::all(n, genus) {
                    let section = if j != k {
                        0
                    } else if l.i != fam && l.i != j {
                        1
                    } else if l.i == fam {
                        2
                    } else {
                        3
                    };
                    for _ in 0..per_cell {
                        let a = FGen::new(fam, j, random_surface(&mut rng, &p, 3))?;
                        let b = FGen::new(fam, k, random_surface(&mut rng, &p, 3))?;
                        cases.push((section, l, a, b));
                    }
                }
            }
        }
    }
    let rows = cfg.exec.map(&cases, |(section, l, a, b)| {
        let mut r = Report::default();
        let inputs = || vec![l.to_string(), a.to_string(), b.to_string()];
        match fgen_compare(a, b, esc) {
            Ok(o) => r.expect(inputs, o, fgen_compare(&psi_action(*l, a), &psi_action(*l, b), esc)),
            Err(e) => r.expect(inputs, Ordering::Equal, Err(e)),
        }
        let mut bij = Report::default();
        bij.checked += 1;
        if psi_action_inverse(*l, &psi_action(*l, a)) != *a || psi_action(*l, &psi_action_inverse(*l, a)) != *a {
            bij.violation(vec![l.to_string(), a.to_string()], a.to_string(), "not inverted");
        }
        (*section, r, bij)
    });
    let mut parts = vec![Report::default(); 4];
    let mut bij = Report::default();
    for (s, r, b) in rows {
        parts[s].merge(r);
        bij.merge(b);
    }
    let names = [
        "case 1: j ≠ k",
        "case 2: label strand ∉ {i, j}",
        "case 2: label strand = i (left invariance)",
        "case 2: label strand = j (right invariance)",
    ];
    let mut sections: Vec<Section> = names
        .iter()
        .zip(parts)
        .map(|(name, r)| {
            Section::new(
                format!("Ψ preserves the generator order, {name}, n = {n}, g = {genus}"),
                false,
                r,
            )
        })
        .collect();
    sections.push(Section::new("Ψ is a bijection of each family", false, bij));
    Ok(sections)
}

fn kn_oracle(cfg: &SuiteConfig) -> Result<Vec<Section>> {
    let n = cfg.strands.unwrap_or(4);
    let genus = cfg.genus.unwrap_or(1);
    let p = SurfacePresentation::new(genus)?;
    let esc = cfg.esc;
    let mut rng = cfg.rng(80);
    let pools = fgen_pools(&mut rng, n, &p);
    let count = cfg.samples_or(1000);
    let pairs: Vec<(KnElement, KnElement)> = (0..count)
        .map(|_| {
            let a = random_kn(&mut rng, n, &pools);
            let mut b = random_kn(&mut rng, n, &pools);
            // Share a random number of top components so lower positions decide.
            let keep = rng.random_range(0..n as usize);
            let mut comps = b.components().to_vec();
            comps[keep..].clone_from_slice(&a.components()[keep..]);
            if rng.random_bool(0.8) {
                b = KnElement::new(n, comps).expect("same families");
            }
            (a, b)
        })
        .collect();
    let datum = kn_datum(n, esc);
    let rows = cfg.exec.map(&pairs, |(a, b)| {
        let mut oracle = Report::default();
        let mut dom = Report::default();
        let mut anti = Report::default();
        let inputs = || vec![a.to_string(), b.to_string()];
        let got = kn_compare(a, b, esc);
        match semidirect_compare(&datum, a.components(), b.components()) {
            Ok(o) => oracle.expect(inputs, o, got.clone()),
            Err(e) => oracle.expect(inputs, Ordering::Equal, Err(e)),
        }
        if let Ok(o) = got {
            anti.expect(inputs, o.reverse(), kn_compare(b, a, esc));
            // Changing components below the greatest differing one never matters.
            if let Some(top) = (0..a.components().len())
                .rev()
                .find(|&k| a.components()[k] != b.components()[k])
            {
                if top > 0 {
                    let mut comps = a.components().to_vec();
                    comps[0] = comps[0].multiply(&b.components()[0]).inverse();
                    let a2 = KnElement::new(n, comps).expect("same families");
                    dom.expect(inputs, o, kn_compare(&a2, b, esc));
                }
            }
        }
        (oracle, dom, anti)
    });
    let (mut oracle, mut dom, mut anti) = (Report::default(), Report::default(), Report::default());
    for (a, b, c) in rows {
        oracle.merge(a);
        dom.merge(b);
        anti.merge(c);
    }
    let mut sections = vec![
        Section::new(
            format!("kn_compare = semidirect_compare, n = {n}, g = {genus}"),
            false,
            oracle,
        ),
        Section::new("greatest differing index dominates", false, dom),
        Section::new("antisymmetry of kn_compare", false, anti),
    ];

    let factor = KnFactor { i: 1, esc };
    let sample: Vec<FWord> = (0..24).map(|_| random_fword(&mut rng, &pools[0], 4)).collect();
    sections.push(Section::new(
        "cone axioms of the factor order at position 1",
        false,
        check_cone_axioms_with(cfg.exec, &factor, &sample, ConeMode::Bi),
    ));

    let toy = conjugation_toy(esc)?;
    let toy_sample: Vec<SemidirectElem> = (0..40)
        .map(|_| {
            let inner_len = rng.random_range(0..=4);
            SemidirectElem {
                inner: random_word(&mut rng, 2, inner_len),
                outer: Word::power_of(Generator::new('t', 1), rng.random_range(-2..=2)),
            }
        })
        .collect();
    sections.push(Section::new(
        "cone axioms of F2 ⋊ Z, t acting by conjugation",
        false,
        check_cone_axioms_with(cfg.exec, &toy, &toy_sample, ConeMode::Bi),
    ));
    Ok(sections)
}

/// `F_2 ⋊ ℤ` with `t` acting by conjugation by `x_1 x_2`.
pub fn conjugation_toy(esc: Escalation) -> Result<FreeSemidirect> {
    let w = Word::gen(Generator::x(1)).multiply(&Word::gen(Generator::x(2)));
    let conj = |h: &Word| {
        GeneratorMap::from_images((1..=2).map(|i| (Generator::x(i), Word::gen(Generator::x(i)).conjugate_by(h))))
    };
    FreeSemidirect::new(2, vec![(conj(&w), conj(&w.inverse()))], esc)
}

// ------------------------------------------------------------------ braids

fn delta(cfg: &SuiteConfig) -> Result<Vec<Section>> {
    let mut rel = Report::default();
    let mut mir = Report::default();
    for n in 2..=7 {
        rel.merge(check_delta_relation(n)?);
        mir.merge(mirror_respects_relations(n)?);
    }
    let mut rng = cfg.rng(90);
    let mut inv = Report::default();
    let mut perm = Report::default();
    for _ in 0..cfg.samples_or(1000) {
        let n = rng.random_range(2..=7);
        let u = random_braid(&mut rng, n, 8);
        let v = random_braid(&mut rng, n, 8);
        inv.checked += 1;
        if mirror(&mirror(&u)) != u {
            inv.violation(vec![u.to_string()], u.to_string(), mirror(&mirror(&u)).to_string());
        }
        perm.checked += 1;
        let (pu, pv, puv) = (u.permutation(), v.permutation(), u.multiply(&v).permutation());
        let composed: Vec<u32> = (0..n as usize).map(|k| pv[pu[k] as usize]).collect();
        if composed != puv {
            perm.violation(
                vec![u.to_string(), v.to_string()],
                format!("{composed:?}"),
                format!("{puv:?}"),
            );
        }
    }
    Ok(vec![
        Section::new("Δ σ_i Δ⁻¹ = σ_{n-i}, n = 2..7", false, rel),
        Section::new("mirror respects the braid relations, n = 2..7", false, mir),
        Section::new("mirror is an involution", false, inv),
        Section::new("permutations compose", false, perm),
    ])
}

pub fn random_braid(rng: &mut impl Rng, n: u32, max_len: usize) -> BraidWord {
    let len = rng.random_range(0..=max_len);
    let letters = (0..len)
        .map(|_| (rng.random_range(1..n), if rng.random() { 1 } else { -1 }))
        .collect();
    BraidWord::new(n, letters).expect("indices in range")
}

fn certificates(cfg: &SuiteConfig) -> Result<Vec<Section>> {
    let jobs: Vec<(u32, u32)> = (2..=7u32).flat_map(|n| (1..n).map(move |i| (n, i))).collect();
    let rows = cfg.exec.map(&jobs, |&(n, i)| {
        let mut r = Report::default();
        r.checked += 1;
        match make_gt_certificate(n, i) {
            Ok(c) => {
                let assumed = c.steps.iter().filter(|s| s.status == StepStatus::Assumed).count();
                if !c.valid || !verify_certificate(&c).unwrap_or(false) || assumed != 2 {
                    r.violation(vec![format!("n={n} i={i}")], "valid", "invalid");
                }
            }
            Err(e) => r.violation(vec![format!("n={n} i={i}")], "valid", e.to_string()),
        }
        r
    });
    let mut sections = vec![Section::new(
        "certificates for n = 2..7, all i",
        false,
        Report::merged(rows),
    )];

    let oracle = BraidRewriteOracle::new(3, 10);
    let mut bfs = Report::default();
    for i in 1..3 {
        let c = make_gt_certificate(3, i)?;
        for step in c.steps.iter().filter(|s| s.status == StepStatus::Checked) {
            let (Some(lhs), rhs) = (&step.lhs, &step.rhs) else {
                continue;
            };
            let inputs = vec![format!("i={i}"), step.claim.clone()];
            bfs.checked += 1;
            let failure = match step.relation {
                Some(Relation::Equal) => (!oracle.equal(lhs, rhs.as_ref().expect("equal steps carry both sides")))
                    .then_some(("connected by relator moves", "not connected within cap")),
                Some(Relation::NotEqual) => oracle
                    .equal(lhs, rhs.as_ref().expect("unequal steps carry both sides"))
                    .then_some(("not connected", "connected by relator moves")),
                Some(Relation::Pure) => (!is_pure(lhs)).then_some(("pure", "not pure")),
                _ => None,
            };
            if let Some((expected, got)) = failure {
                bfs.violation(inputs, expected, got);
            }
        }
    }
    sections.push(Section::new(
        "n = 3 certificate steps re-verified by the rewrite oracle",
        false,
        bfs,
    ));
    Ok(sections)
}

/// Word problem in `B_n` by breadth-first search over relator moves,
/// restricted to freely reduced words of bounded length. A found path
/// proves equality; no path within the cap is inconclusive in principle.
pub struct BraidRewriteOracle {
    n: u32,
    cap: usize,
    /// `(p, q)`: a subword `p` may be replaced by `q`, `p q⁻¹` a cyclic
    /// conjugate of a relator or its inverse.
    moves: Vec<(Vec<i8>, Vec<i8>)>,
}

fn inv_word(w: &[i8]) -> Vec<i8> {
    w.iter().rev().map(|x| -x).collect()
}

fn free_reduce(w: &[i8]) -> Vec<i8> {
    let mut out: Vec<i8> = Vec::with_capacity(w.len());
    for &x in w {
        if out.last() == Some(&-x) {
            out.pop();
        } else {
            out.push(x);
        }
    }
    out
}

impl BraidRewriteOracle {
    pub fn new(n: u32, cap: usize) -> Self {
        let mut relators: Vec<Vec<i8>> = Vec::new();
        for i in 1..n as i8 {
            for j in i + 1..n as i8 {
                if j == i + 1 {
                    relators.push(vec![i, j, i, -j, -i, -j]);
                } else {
                    relators.push(vec![i, j, -i, -j]);
                }
            }
        }
        let mut moves = HashSet::new();
        for r in relators {
            for base in [r.clone(), inv_word(&r)] {
                let len = base.len();
                for s in 0..len {
                    let c: Vec<i8> = (0..len).map(|k| base[(s + k) % len]).collect();
                    for split in 0..=len {
                        let p = c[..split].to_vec();
                        let q = inv_word(&c[split..]);
                        moves.insert((p, q));
                    }
                }
            }
        }
        let mut moves: Vec<_> = moves.into_iter().collect();
        moves.sort();
        BraidRewriteOracle { n, cap, moves }
    }

    fn encode(&self, b: &BraidWord) -> Vec<i8> {
        assert_eq!(b.n(), self.n);
        free_reduce(&b.letters().iter().map(|&(i, e)| i as i8 * e).collect::<Vec<_>>())
    }

    fn neighbours(&self, w: &[i8]) -> Vec<Vec<i8>> {
        let mut out = Vec::new();
        for (p, q) in &self.moves {
            for at in 0..=w.len().saturating_sub(p.len()) {
                if w[at..].starts_with(p) {
                    let mut v = w[..at].to_vec();
                    v.extend_from_slice(q);
                    v.extend_from_slice(&w[at + p.len()..]);
                    let v = free_reduce(&v);
                    if v.len() <= self.cap {
                        out.push(v);
                    }
                }
            }
        }
        out
    }

    /// Bidirectional search between `u` and `v`.
    pub fn equal(&self, u: &BraidWord, v: &BraidWord) -> bool {
        let (a, b) = (self.encode(u), self.encode(v));
        if a == b {
            return true;
        }
        let mut seen: [HashMap<Vec<i8>, ()>; 2] = [HashMap::new(), HashMap::new()];
        let mut queues = [VecDeque::from([a.clone()]), VecDeque::from([b.clone()])];
        seen[0].insert(a, ());
        seen[1].insert(b, ());
        loop {
            let side = if queues[0].len() <= queues[1].len() { 0 } else { 1 };
            let side = if queues[side].is_empty() { 1 - side } else { side };
            if queues[side].is_empty() {
                return false;
            }
            let layer = queues[side].len();
            for _ in 0..layer {
                let w = queues[side].pop_front().expect("non-empty layer");
                for nb in self.neighbours(&w) {
                    if seen[1 - side].contains_key(&nb) {
                        return true;
                    }
                    if seen[side].insert(nb.clone(), ()).is_none() {
                        queues[side].push_back(nb);
                    }
                }
            }
        }
    }

    /// Partition of all reduced words of length `≤ cap` into classes
    /// connected by relator moves; returns a class id per word.
    pub fn components(&self) -> HashMap<Vec<i8>, usize> {
        let letters: Vec<i8> = (1..self.n as i8).flat_map(|i| [i, -i]).collect();
        let mut all: Vec<Vec<i8>> = vec![vec![]];
        let mut frontier: Vec<Vec<i8>> = vec![vec![]];
        for _ in 0..self.cap {
            let mut next = Vec::new();
            for w in &frontier {
                for &x in &letters {
                    if w.last() == Some(&-x) {
                        continue;
                    }
                    let mut v = w.clone();
                    v.push(x);
                    next.push(v);
                }
            }
            all.extend(next.iter().cloned());
            frontier = next;
        }
        let mut class: HashMap<Vec<i8>, usize> = HashMap::with_capacity(all.len());
        let mut next_id = 0;
        for w in all {
            if class.contains_key(&w) {
                continue;
            }
            let id = next_id;
            next_id += 1;
            class.insert(w.clone(), id);
            let mut queue = VecDeque::from([w]);
            while let Some(x) = queue.pop_front() {
                for nb in self.neighbours(&x) {
                    if let std::collections::hash_map::Entry::Vacant(e) = class.entry(nb.clone()) {
                        e.insert(id);
                        queue.push_back(nb);
                    }
                }
            }
        }
        class
    }

    pub fn class_of(classes: &HashMap<Vec<i8>, usize>, b: &BraidWord) -> Option<usize> {
        let w = free_reduce(&b.letters().iter().map(|&(i, e)| i as i8 * e).collect::<Vec<_>>());
        classes.get(&w).copied()
    }
}

fn gt_dichotomy(cfg: &SuiteConfig) -> Result<Vec<Section>> {
    let count = cfg.samples_or(1000);
    let mut sections = Vec::new();

    let mut rng = cfg.rng(100);
    let free = MagnusOrder {
        esc: cfg.esc,
        ..MagnusOrder::natural()
    };
    let gens = x_gens(2);
    let free_jobs: Vec<(Word, Vec<Word>)> = (0..count)
        .map(|_| {
            let len = rng.random_range(1..=6);
            let g = random_word_over(&mut rng, &gens, len);
            let k = rng.random_range(1..=3);
            (g, (0..k).map(|_| random_word_upto(&mut rng, &gens, 5)).collect())
        })
        .collect();
    sections.push(Section::new(
        "conjugates keep the sign of g, F2",
        false,
        sign_invariant_report(cfg.exec, &free, &free_jobs),
    ));

    let genus = cfg.genus.unwrap_or(2);
    let surface = SurfaceGroup::new(genus, cfg.esc)?;
    let sgens: Vec<Generator> = surface.presentation.generators().collect();
    let surface_jobs: Vec<(SurfaceElem, Vec<SurfaceElem>)> = (0..count)
        .map(|_| {
            let g = loop {
                let len = rng.random_range(1..=4);
                let e = surface.presentation.elem(random_word_over(&mut rng, &sgens, len));
                if !e.is_trivial() {
                    break e;
                }
            };
            let k = rng.random_range(1..=3);
            let hs = (0..k)
                .map(|_| random_surface(&mut rng, &surface.presentation, 3))
                .collect();
            (g, hs)
        })
        .collect();
    sections.push(Section::new(
        format!("conjugates keep the sign of g, π₁ genus {genus}"),
        false,
        sign_invariant_report(cfg.exec, &surface, &surface_jobs),
    ));

    let mut braid = Report::default();
    for n in 2..=7u32 {
        let grp = BraidGroup { n };
        for i in 1..n {
            let g = BraidWord::sigma(n, i, 2)?;
            let cs = vec![Conjugator::By(grp.identity()), gamma_delta_conjugator(n)?];
            braid.checked += 1;
            if !verify_generalized_torsion(&grp, &g, &cs)? {
                braid.violation(vec![format!("n={n} i={i}")], "generalized torsion", "not verified");
            }
        }
    }
    sections.push(Section::new(
        "σ_i² with conjugators {1, ΓΔ} is generalized torsion",
        false,
        braid,
    ));

    let not_torsion = Report::merged(cfg.exec.map(&free_jobs, |(g, hs)| {
        let mut r = Report::default();
        r.checked += 1;
        let cs: Vec<Conjugator<Word>> = hs.iter().cloned().map(Conjugator::By).collect();
        if verify_generalized_torsion(&free, g, &cs).unwrap_or(true) {
            r.violation(vec![g.to_string()], "not generalized torsion", "verified as torsion");
        }
        r
    }));
    sections.push(Section::new(
        "free-group samples are never generalized torsion",
        false,
        not_torsion,
    ));
    Ok(sections)
}

fn sign_invariant_report<G: OrderedGroup>(exec: Exec, group: &G, jobs: &[(G::Elem, Vec<G::Elem>)]) -> Report {
    Report::merged(exec.map(jobs, |(g, hs)| {
        let mut r = Report::default();
        r.checked += 1;
        match check_gt_absence(group, g, hs) {
            Ok(true) => {}
            Ok(false) => r.violation(vec![g.to_string()], "sign kept", "sign changed"),
            Err(Error::UndecidedAtCap { .. }) => r.undecided += 1,
            Err(e) => r.violation(vec![g.to_string()], "sign kept", e.to_string()),
        }
        r
    }))
}

// ------------------------------------------------------- negative controls

/// Lexicographic order on stored letters: a total order on words that is
/// not invariant under multiplication.
#[derive(Debug, Clone, Copy, Default)]
pub struct LetterLexOrder;

impl Group for LetterLexOrder {
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

impl OrderedGroup for LetterLexOrder {
    fn compare(&self, a: &Word, b: &Word) -> Result<Ordering> {
        let key = |w: &Word| -> Vec<(u32, bool)> { w.letters().iter().map(|l| (l.gen.index, l.inverse)).collect() };
        Ok(key(a).cmp(&key(b)))
    }
}

fn negative_controls(cfg: &SuiteConfig) -> Result<Vec<Section>> {
    let count = cfg.samples_or(200);
    let mut rng = cfg.rng(110);
    let gens = x_gens(2);
    let sample: Vec<Word> = (0..30).map(|_| random_word_upto(&mut rng, &gens, 6)).collect();
    let mut sections = vec![Section::new(
        "letter-lex comparator fails the cone axioms",
        true,
        check_cone_axioms_with(cfg.exec, &LetterLexOrder, &sample, ConeMode::Bi),
    )];

    let pool = word_pairs(&mut rng, 3, 6, count);
    let flip = GeneratorMap::from_images([(Generator::x(1), Word::power_of(Generator::x(1), -1))]);
    sections.push(Section::new(
        "abelianization-changing map x_1 ↦ x_1^-1 breaks the order",
        true,
        preserved_under_maps(cfg.exec, &[flip], &pool, pool.len(), cfg.esc),
    ));

    let pairs = word_pairs(&mut rng, 2, 6, count);
    sections.push(Section::new(
        "non-monotone permutation X_1 ↔ X_2 breaks the order",
        true,
        permutation_report(cfg.exec, &[2, 1], &NaturalOrder, &pairs, cfg.esc),
    ));

    let mut tampered = Report::default();
    let mut c = make_gt_certificate(4, 1)?;
    c.steps[1].rhs = Some(BraidWord::sigma(4, 1, 2)?);
    tampered.checked += 1;
    if !verify_certificate(&c)? {
        tampered.violation(vec!["n=4 i=1".into(), c.steps[1].claim.clone()], "valid", "invalid");
    }
    sections.push(Section::new("tampered certificate is rejected", true, tampered));

    let delta3 = delta_word(3)?;
    let mut wrong_conj = Report::default();
    let g = BraidWord::sigma(3, 1, 2)?;
    let cs = [Conjugator::By(BraidWord::identity(3)), Conjugator::By(delta3)];
    wrong_conj.checked += 1;
    if !verify_generalized_torsion(&BraidGroup { n: 3 }, &g, &cs)? {
        wrong_conj.violation(
            vec![g.to_string(), "{1, Δ}".into()],
            "generalized torsion",
            "product nontrivial",
        );
    }
    sections.push(Section::new(
        "dropping Γ from the conjugator loses the torsion",
        true,
        wrong_conj,
    ));
    Ok(sections)
}

/// `LT`/`EQ`/`GT` for a verdict, or the error text.
pub fn verdict_name(r: &Result<Ordering>) -> String {
    match r {
        Ok(o) => ord_name(*o).to_string(),
        Err(e) => e.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(seed: u64, samples: usize) -> SuiteConfig {
        SuiteConfig {
            samples: Some(samples),
            ..SuiteConfig::seeded(seed)
        }
    }

    #[test]
    fn random_words_are_reduced_with_exact_length() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for len in 0..20 {
            let w = random_word(&mut rng, 2, len);
            assert_eq!(w.len(), len);
        }
    }

    #[test]
    fn elementary_maps_are_h1_trivial_automorphisms() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let phi = random_h1_trivial_automorphism(&mut rng, 3);
            assert!(crate::words::is_h1_trivial(&phi, &x_gens(3)));
        }
    }

    #[test]
    fn permutations_are_exhaustive() {
        assert_eq!(permutations(3).len(), 6);
        assert_eq!(permutations(4).len(), 24);
        assert_eq!(permutations(1), vec![vec![1]]);
    }

    #[test]
    fn all_words_counts() {
        assert_eq!(all_words(&x_gens(2), 3).len(), 1 + 4 + 12 + 36);
    }

    #[test]
    fn unknown_suite_is_an_error() {
        assert!(matches!(
            run_suite("nope", &SuiteConfig::default()),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn small_suites_pass_and_are_deterministic() {
        for name in [
            "homomorphism",
            "bi-invariance",
            "automorphism-invariance",
            "delta",
            "negative-controls",
        ] {
            let a = run_suite(name, &small(9, 30)).unwrap();
            assert!(a.passed, "{name}: {:#?}", a.sections);
            let b = run_suite(
                name,
                &SuiteConfig {
                    exec: Exec::Sequential,
                    ..small(9, 30)
                },
            )
            .unwrap();
            assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
        }
    }

    #[test]
    fn rewrite_oracle_small_cases() {
        let o = BraidRewriteOracle::new(3, 10);
        let b = |s: &str| BraidWord::parse(s, 3).unwrap();
        assert!(o.equal(&b("s1 s2 s1"), &b("s2 s1 s2")));
        assert!(o.equal(&b("s1 s1^-1"), &b("1")));
        assert!(o.equal(&b("s1 s2 s1 s2^-1 s1^-1"), &b("s2")));
        assert!(!o.equal(&b("s1"), &b("s2")));
    }
}
