//! The census and the action checked against brute-force canonical labelling.

mod common;

use common::{abelian_class_count, oracle_action, oracle_census};
use origami::{census, ClassAction};

fn compare(d: usize) {
    let oracle = oracle_census(d);
    let c = census(d).unwrap();
    assert_eq!(c.len(), oracle.classes.len(), "degree {d}");
    let map: Vec<usize> = c.classes().iter().map(|k| oracle.class_of(&k.rep)).collect();
    let mut hit = vec![false; map.len()];
    for (k, &o) in c.classes().iter().zip(&map) {
        assert!(!hit[o], "two classes share an oracle class at {}", k.rep);
        hit[o] = true;
        assert_eq!(k.abelian, oracle.classes[o].abelian, "{}", k.rep);
        assert_eq!(k.size, oracle.classes[o].size, "{}", k.rep);
    }

    // the oracle shears the other way
    let a = ClassAction::compute(&c).unwrap();
    let oa = oracle_action(&oracle);
    let t_inv = a.phi_t().inverse();
    for (id, &o) in map.iter().enumerate() {
        assert_eq!(map[t_inv.apply(id)], oa[o][0], "T at {}", c.classes()[id].rep);
        assert_eq!(map[a.phi_s().apply(id)], oa[o][1], "S at {}", c.classes()[id].rep);
        assert_eq!(map[a.mirror().apply(id)], oa[o][2], "mirror at {}", c.classes()[id].rep);
    }
}

#[test]
fn census_and_action_match_oracle_up_to_degree_5() {
    for d in 1..=5 {
        compare(d);
    }
}

#[test]
fn census_and_action_match_oracle_in_degree_6() {
    compare(6);
}

#[test]
fn abelian_counts_match_translation_pairs() {
    for d in 1..=7 {
        let c = census(d).unwrap();
        assert_eq!(c.counts().0, abelian_class_count(d), "degree {d}");
    }
}

#[test]
fn degree_7_counts_match_full_oracle() {
    let oracle = oracle_census(7);
    let ab = oracle.classes.iter().filter(|k| k.abelian).count();
    let c = census(7).unwrap();
    assert_eq!(c.counts(), (ab, oracle.classes.len() - ab));
    assert_eq!(c.counts(), (2785, 26574));
}
