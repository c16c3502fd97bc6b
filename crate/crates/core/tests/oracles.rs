mod common;

use std::collections::BTreeSet;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use verba::group::{bi_invariance_check, verbal_subgroup, wlength_table, FiniteGroup};
use verba::magnus::{magnus_depth, MagnusDepth, MagnusLimits, MagnusSeries};
use verba::verbal::{beta_word, enumerate_w_words, gamma_word, WordTemplate, DEFAULT_ENUMERATION_BUDGET};
use verba::word::random_word;
use verba::Word;

use common::{brute_w_words, closure_levels, magnus_oracle, small_groups};

#[test]
fn magnus_matches_polynomial_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..150 {
        let len = rng.gen_range(0..=14);
        let w = random_word(&mut rng, 3, len);
        let degree = 4;
        let oracle = magnus_oracle(&w, degree);
        if w.is_identity() {
            assert_eq!(oracle.len(), 1);
            continue;
        }
        let series = MagnusSeries::expand(&w, degree, MagnusLimits::default()).unwrap();
        for k in 0..=degree {
            let ours: Vec<(Vec<u32>, BigInt)> = series.homogeneous_part(k);
            let theirs: Vec<(Vec<u32>, BigInt)> = oracle
                .iter()
                .filter(|(m, _)| m.len() == k)
                .map(|(m, c)| (m.clone(), BigInt::from(*c)))
                .collect();
            assert_eq!(ours, theirs, "word {w:?}, degree {k}");
        }
    }
}

#[test]
fn magnus_depths_of_brackets() {
    for n in 1..=5 {
        assert_eq!(magnus_depth(gamma_word(n).unwrap().body(), 6).unwrap(), MagnusDepth::Exact(n));
    }
    assert_eq!(magnus_depth(beta_word(2).unwrap().body(), 6).unwrap(), MagnusDepth::Exact(4));
    let c = Word::generator(1).commutator(&Word::generator(2));
    assert_eq!(magnus_depth(&c.pow(3), 6).unwrap(), MagnusDepth::Exact(2));
}

fn templates() -> Vec<WordTemplate> {
    vec![
        gamma_word(2).unwrap(),
        WordTemplate::from_word("x^2", Word::generator(1).pow(2)),
        WordTemplate::from_word("x^3", Word::generator(1).pow(3)),
    ]
}

#[test]
fn bfs_matches_iterated_closure() {
    for g in small_groups() {
        let mut ts = templates();
        if g.order() <= 24 {
            ts.push(gamma_word(3).unwrap());
        }
        for t in &ts {
            let words = brute_w_words(&g, t);
            assert_eq!(enumerate_w_words(&g, t, DEFAULT_ENUMERATION_BUDGET).unwrap(), words);
            let table = wlength_table(&g, t, DEFAULT_ENUMERATION_BUDGET).unwrap();
            assert_eq!(table.distances(), closure_levels(&g, &words).as_slice(), "{} {}", g.spec(), t.name());
        }
    }
}

#[test]
fn a5_gamma3_is_everything() {
    let g = FiniteGroup::alternating(5).unwrap();
    let t = gamma_word(3).unwrap();
    let table = wlength_table(&g, &t, DEFAULT_ENUMERATION_BUDGET).unwrap();
    assert_eq!(table.distances(), closure_levels(&g, &brute_w_words(&g, &t)).as_slice());
    assert_eq!(table.reachable().count(), 60);
}

#[test]
fn metric_properties() {
    for g in small_groups() {
        let t = gamma_word(2).unwrap();
        let table = wlength_table(&g, &t, DEFAULT_ENUMERATION_BUDGET).unwrap();
        assert!(bi_invariance_check(&g, &table, 1000, 3), "{}", g.spec());
        let members: Vec<_> = table.reachable().collect();
        // normal subgroup
        for a in g.elements() {
            for &m in &members {
                assert!(table.distance(g.conjugate(m, a)).is_some());
            }
        }
        for &m in &members {
            assert_eq!(table.distance(m), table.distance(g.inverse(m)));
        }
        if g.order() <= 24 {
            for &a in &members {
                for &b in &members {
                    let d = table.distance(g.mul(a, b)).unwrap();
                    assert!(d <= table.distance(a).unwrap() + table.distance(b).unwrap());
                }
            }
        }
    }
}

#[test]
fn verbal_subgroup_examples() {
    let s5 = FiniteGroup::symmetric(5).unwrap();
    assert_eq!(verbal_subgroup(&s5, &gamma_word(2).unwrap(), DEFAULT_ENUMERATION_BUDGET).unwrap().len(), 60);
    let s3 = FiniteGroup::symmetric(3).unwrap();
    let squares = WordTemplate::from_word("x^2", Word::generator(1).pow(2));
    let v = verbal_subgroup(&s3, &squares, DEFAULT_ENUMERATION_BUDGET).unwrap();
    let a3: BTreeSet<_> = ["0 1 2", "1 2 0", "2 0 1"].iter().map(|s| s3.element_by_description(s).unwrap()).collect();
    assert_eq!(v, a3);
    let c6 = FiniteGroup::from_table("C6", verba::group::cyclic_table(6)).unwrap();
    assert_eq!(verbal_subgroup(&c6, &gamma_word(2).unwrap(), DEFAULT_ENUMERATION_BUDGET).unwrap().len(), 1);
    for t in [gamma_word(2).unwrap(), gamma_word(3).unwrap()] {
        let w = brute_w_words(&c6, &t);
        assert_eq!(w, BTreeSet::from([c6.identity()]));
    }
}

#[test]
fn group_orders() {
    assert_eq!(FiniteGroup::load("S5").unwrap().order(), 120);
    assert_eq!(FiniteGroup::load("SL2_5").unwrap().order(), 120);
    assert_eq!(FiniteGroup::load("SL2_13").unwrap().order(), 2184);
    assert!(FiniteGroup::load("SL2_4").is_err());
    assert!(FiniteGroup::load("S9").is_err());
}
