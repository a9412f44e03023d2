mod common;

use bassorder::lattice::Lattice;
use bassorder::units::{ideals_equivalent, norm_one_units};
use common::*;

use bassorder::base_ring::RingElement;
use bassorder::orders::Order;

#[test]
fn reference_orders_are_eichler() {
    let k = q5();
    for (name, gens, a, b) in REFERENCE_ORDERS {
        let o = order(&sqrt5_algebra(), &gens);
        assert!(o.lattice.is_order(), "{name}");
        assert_eq!(o.discriminant(), &k.canonical_ring(&RingElement::new(a, b)), "{name}");
        for p in [2, 3, 5] {
            let pr = prime(&k, p);
            let cls = o.classify(&pr).unwrap();
            assert_eq!(cls.label(), "A1", "{name} at {p}");
            assert_eq!(cls.s, o.disc_valuation(&pr), "{name} at {p}");
        }
    }
}

#[test]
fn reference_chain_is_nested() {
    let orders: Vec<_> = (0..4).map(reference_order).collect();
    for w in orders.windows(2) {
        assert!(w[0].lattice.contains_lattice(&w[1].lattice));
    }
}

#[test]
fn listed_ideals_that_need_amending() {
    assert_eq!(listed_failures(&reference_6u(), &reference_order(2)), ["J3"]);
    assert_eq!(
        listed_failures(&reference_30(), &reference_order(3)),
        ["I1,4", "I4,1", "I4,3", "J1,3", "J1,5", "J2,1", "J3,2", "J3,5", "J5,2"]
    );
}

fn check_table(refs: &[RefIdeal], o: &Order, parents: &[(&str, Lattice)]) -> Vec<Lattice> {
    let (ideals, bad) = table_problems(refs, o, parents, false);
    assert!(bad.is_empty(), "{bad:?}");
    ideals
}

#[test]
fn reference_classes_disc_6() {
    let o = reference_order(1);
    let j = &r6_classes()[1].1;
    assert!(j.left_order() == o.lattice);
    assert_eq!(norm_one_units(&o.lattice).unwrap().order(), 6);
    assert_eq!(norm_one_units(&j.right_order()).unwrap().order(), 4);
    assert!(!ideals_equivalent(&o.lattice, j).unwrap());
}

fn table_6u() -> Vec<(&'static str, Lattice)> {
    let ideals = check_table(&reference_6u(), &reference_order(2), &r6_classes());
    reference_6u().iter().map(|r| r.name).zip(ideals).collect()
}

#[test]
fn reference_classes_disc_6_sqrt5() {
    assert_eq!(table_6u().len(), 6);
}

#[test]
fn reference_classes_disc_30() {
    let parents = table_6u();
    let ideals = check_table(&reference_30(), &reference_order(3), &parents);
    assert_eq!(ideals.len(), 26);
    let mut units: Vec<usize> = ideals.iter().map(|l| norm_one_units(&l.right_order()).unwrap().order()).collect();
    units.sort();
    assert_eq!(units.iter().filter(|&&u| u == 4).count(), 2);
    assert_eq!(units.iter().filter(|&&u| u == 2).count(), 24);
}

/// The computed chain and the reference orders differ, so only counts and
/// unit multisets are compared.
#[test]
fn computed_classes_match_reference_counts() {
    let sets = classes30();
    let counts: Vec<usize> = sets.iter().map(|(s, _)| s.len()).collect();
    assert_eq!(counts, [1, 1, 2, 6, 26]);
    let mut ours: Vec<usize> = sets[3].0.classes.iter().map(|c| c.right_unit_count()).collect();
    ours.sort();
    let mut theirs: Vec<usize> = reference_6u().iter().map(|r| r.right_units).collect();
    theirs.sort();
    assert_eq!(ours, theirs);
}
