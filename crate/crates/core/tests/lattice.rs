mod common;

use bassorder::base_ring::RingElement;
use bassorder::lattice::Lattice;
use bassorder::quaternion::QuatElement;
use common::*;
use proptest::prelude::*;

fn ring() -> impl Strategy<Value = RingElement> {
    (-4i64..=4, -4i64..=4).prop_map(|(a, b)| RingElement::new(a, b))
}

fn nonzero_ring() -> impl Strategy<Value = RingElement> {
    ring().prop_filter("nonzero", |x| !x.is_zero())
}

fn combine(alg: &bassorder::quaternion::Algebra, c: &RingElement, x: &QuatElement, y: &QuatElement) -> QuatElement {
    x + &alg.scale(&c.to_scalar(), y)
}

#[test]
fn hnf_of_known_order() {
    let o = r1();
    let l = &o.lattice;
    assert_eq!(Lattice::from_generators(&l.alg, l.basis()).unwrap(), *l);
    assert!(l.is_order());
    assert_eq!(l.left_order(), *l);
    assert_eq!(l.right_order(), *l);
}

#[test]
fn rank_deficient_generators_fail() {
    let alg = sqrt5_algebra();
    assert!(Lattice::from_generators(&alg, &alg.parse_many(&["1", "i", "j"]).unwrap()).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// HNF is idempotent and does not see elementary row operations.
    #[test]
    fn hnf_canonical(ops in prop::collection::vec((0usize..4, 0usize..4, ring()), 1..8)) {
        let o = r1();
        let alg = o.alg().clone();
        let mut rows = o.lattice.basis().to_vec();
        for (i, j, c) in ops {
            if i != j {
                rows[i] = combine(&alg, &c, &rows[i], &rows[j]);
            }
        }
        rows.reverse();
        let l = Lattice::from_generators(&alg, &rows).unwrap();
        prop_assert_eq!(&l, &o.lattice);
        prop_assert_eq!(Lattice::from_generators(&alg, l.basis()).unwrap(), l);
    }

    /// [L:N] = [L:M][M:N].
    #[test]
    fn index_multiplicative(c1 in nonzero_ring(), c2 in nonzero_ring(), i in 0usize..4, j in 0usize..4) {
        let o = r1();
        let alg = o.alg().clone();
        let k = &alg.field;
        let l = o.lattice.clone();
        let mut rows = l.basis().to_vec();
        rows[i] = alg.scale(&c1.to_scalar(), &rows[i]);
        let m = Lattice::from_generators(&alg, &rows).unwrap();
        let mut rows = m.basis().to_vec();
        rows[j] = alg.scale(&c2.to_scalar(), &rows[j]);
        let n = Lattice::from_generators(&alg, &rows).unwrap();
        let lm = m.index_in(&l).unwrap();
        let mn = n.index_in(&m).unwrap();
        let ln = n.index_in(&l).unwrap();
        prop_assert_eq!(ln, k.canonical_ring(&k.mul_ring(&lm, &mn)));
    }

    /// Both duals are involutions.
    #[test]
    fn dual_involution(c in nonzero_ring(), i in 0usize..4) {
        let o = r1();
        let alg = o.alg().clone();
        let mut rows = o.lattice.basis().to_vec();
        rows[i] = alg.scale(&c.to_scalar(), &rows[i]);
        let l = Lattice::from_generators(&alg, &rows).unwrap();
        prop_assert_eq!(l.dual_conj().dual_conj(), l.clone());
        prop_assert_eq!(l.dual_tr().dual_tr(), l);
    }

    /// A sublattice is absorbed by sums and intersections.
    #[test]
    fn sum_and_intersection(c in nonzero_ring(), i in 0usize..4) {
        let o = r1();
        let alg = o.alg().clone();
        let mut rows = o.lattice.basis().to_vec();
        rows[i] = alg.scale(&c.to_scalar(), &rows[i]);
        let m = Lattice::from_generators(&alg, &rows).unwrap();
        prop_assert_eq!(o.lattice.sum(&m), o.lattice.clone());
        prop_assert_eq!(o.lattice.intersection(&m), m.clone());
        prop_assert!(o.lattice.contains_lattice(&m));
    }
}
