//! Independent oracles checked against the library's decision procedures.

use std::cmp::Ordering;
use std::collections::HashMap;

use braidorder::braid::{artin_action, braid_equal, braid_is_trivial, BraidWord};
use braidorder::harness::{all_words, random_braid, random_word_upto, BraidRewriteOracle};
use braidorder::magnus::{magnus_compare, magnus_expand};
use braidorder::series::NaturalOrder;
use braidorder::surface::{is_trivial, pi1_compare, SurfacePresentation};
use braidorder::{Escalation, Generator, Word};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn x_gens(rank: u32) -> Vec<Generator> {
    (1..=rank).map(Generator::x).collect()
}

fn all_braids(n: u32, max_len: usize) -> Vec<BraidWord> {
    let letters: Vec<(u32, i8)> = (1..n).flat_map(|i| [(i, 1), (i, -1)]).collect();
    let mut out = vec![BraidWord::identity(n)];
    let mut frontier = vec![Vec::<(u32, i8)>::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &frontier {
            for &(i, e) in &letters {
                if w.last() == Some(&(i, -e)) {
                    continue;
                }
                let mut v = w.clone();
                v.push((i, e));
                next.push(v);
            }
        }
        out.extend(next.iter().map(|w| BraidWord::new(n, w.clone()).unwrap()));
        frontier = next;
    }
    out
}

/// The Artin action agrees with relator-move connectivity on every braid
/// word of length ≤ 6 in B_3, with moves allowed through words of length ≤ 10.
#[test]
fn artin_action_is_faithful_on_short_b3_words() {
    let oracle = BraidRewriteOracle::new(3, 10);
    let classes = oracle.components();
    let id_class = BraidRewriteOracle::class_of(&classes, &BraidWord::identity(3)).unwrap();
    let words = all_braids(3, 6);
    assert_eq!(words.len(), 1 + 4 + 12 + 36 + 108 + 324 + 972);
    let mut trivial = 0;
    for w in &words {
        let by_moves = BraidRewriteOracle::class_of(&classes, w).unwrap() == id_class;
        assert_eq!(braid_is_trivial(w), by_moves, "{w}");
        trivial += by_moves as usize;
    }
    // The empty word, the braid relator's cyclic conjugates and their inverses.
    assert!(trivial > 1);

    let short = all_braids(3, 3);
    for u in &short {
        for v in &short {
            let same = BraidRewriteOracle::class_of(&classes, u) == BraidRewriteOracle::class_of(&classes, v);
            assert_eq!(braid_equal(u, v), same, "{u} vs {v}");
        }
    }
}

#[test]
fn rewrite_search_agrees_with_artin_action_in_b4() {
    let oracle = BraidRewriteOracle::new(4, 9);
    let commutator = BraidWord::parse("s1 s3 s1^-1 s3^-1", 4).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for k in 0..100 {
        let u = random_braid(&mut rng, 4, 3);
        let v = if k % 2 == 0 {
            u.multiply(&commutator)
        } else {
            random_braid(&mut rng, 4, 3)
        };
        assert_eq!(oracle.equal(&u, &v), braid_equal(&u, &v), "{u} vs {v}");
    }
}

/// Distinct reduced words of length ≤ 6 over two generators have distinct
/// expansions at degree 6.
#[test]
fn magnus_expansion_is_injective_on_short_words() {
    let words = all_words(&x_gens(2), 6);
    assert_eq!(words.len(), 1 + 4 + 12 + 36 + 108 + 324 + 972);
    let mut seen: HashMap<String, &Word> = HashMap::new();
    for w in &words {
        let key = serde_json::to_string(&magnus_expand(w, 6)).unwrap();
        if let Some(prev) = seen.insert(key, w) {
            panic!("{prev} and {w} share an expansion");
        }
    }
}

/// The order is total and transitive on sampled free-group triples, and
/// `Equal` coincides with equality of reduced words.
#[test]
fn magnus_order_is_total_and_transitive() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let gens = x_gens(3);
    let esc = Escalation::default();
    for _ in 0..1000 {
        let a = random_word_upto(&mut rng, &gens, 7);
        let b = random_word_upto(&mut rng, &gens, 7);
        let c = random_word_upto(&mut rng, &gens, 7);
        let ab = magnus_compare(&a, &b, &NaturalOrder, esc).unwrap();
        let bc = magnus_compare(&b, &c, &NaturalOrder, esc).unwrap();
        let ac = magnus_compare(&a, &c, &NaturalOrder, esc).unwrap();
        assert_eq!(ab == Ordering::Equal, a == b);
        if ab == bc {
            assert_eq!(ac, ab, "{a} {b} {c}");
        }
    }
}

/// `pi1_compare` returns `Equal` exactly on pairs that Dehn's algorithm
/// identifies.
#[test]
fn surface_equal_matches_dehn_on_samples() {
    let p = SurfacePresentation::new(2).unwrap();
    let gens: Vec<Generator> = p.generators().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let r = p.relator();
    for k in 0..500 {
        let a = random_word_upto(&mut rng, &gens, 5);
        // Half the time insert a relator so that the words are equal.
        let b = if k % 2 == 0 {
            let h = random_word_upto(&mut rng, &gens, 3);
            a.multiply(&r.conjugate_by(&h))
        } else {
            random_word_upto(&mut rng, &gens, 5)
        };
        let equal = is_trivial(&a.multiply(&b.inverse()), &p);
        let verdict = pi1_compare(&p.elem(a.clone()), &p.elem(b.clone()), Escalation::default()).unwrap();
        assert_eq!(verdict == Ordering::Equal, equal, "{a} vs {b}");
    }
}

fn braid_strategy(n: u32, max_len: usize) -> impl Strategy<Value = BraidWord> {
    prop::collection::vec((1..n, prop::bool::ANY), 0..=max_len).prop_map(move |ls| {
        BraidWord::new(n, ls.into_iter().map(|(i, p)| (i, if p { 1 } else { -1 })).collect()).unwrap()
    })
}

proptest! {
    #[test]
    fn artin_action_is_a_homomorphism(a in braid_strategy(4, 8), b in braid_strategy(4, 8)) {
        let ab = artin_action(&a.multiply(&b));
        let composed = artin_action(&a).compose(&artin_action(&b));
        for i in 1..=4 {
            let g = Generator::x(i);
            prop_assert_eq!(ab.image(&g), composed.image(&g));
        }
    }

    #[test]
    fn braid_times_inverse_is_trivial(a in braid_strategy(5, 10)) {
        prop_assert!(braid_is_trivial(&a.multiply(&a.inverse())));
        prop_assert!(braid_equal(&a.inverse().inverse(), &a));
    }
}
