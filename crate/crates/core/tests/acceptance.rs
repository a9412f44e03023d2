//! Acceptance suite for the Q(√5) worked example; one line per criterion.

mod common;

use std::time::{Duration, Instant};

use bassorder::base_ring::RingElement;
use bassorder::ideals::{
    ideal_classes, psi_global, psi_local, psi_methods_agree, table_unit_index, IdealClassSet, StepReport,
};
use bassorder::lattice::Lattice;
use bassorder::orders::{
    certified_precision, default_genus, quasi_good_basis, suborder_chain, table_residuals, ChainStep, Kind,
};
use common::*;
use num_traits::{One, Signed};

/// Listed entries known not to be left ideals of their order.
const KNOWN_LISTED: [&str; 10] = ["J3", "I1,4", "I4,1", "I4,3", "J1,3", "J1,5", "J2,1", "J3,2", "J3,5", "J5,2"];

struct Outcome {
    criterion: usize,
    ok: bool,
    detail: String,
}

fn sorted(mut v: Vec<usize>) -> Vec<usize> {
    v.sort_unstable();
    v
}

fn same_unit(a: &RingElement, b: &RingElement) -> bool {
    let k = q5();
    let r = k.div(&a.to_scalar(), &b.to_scalar()).unwrap();
    r.is_integral() && k.norm_rat(&r).abs().is_one()
}

fn criterion_1(chain: &[ChainStep], took: Duration) -> Outcome {
    let k = q5();
    let want = [
        RingElement::from_int(1),
        RingElement::from_int(2),
        RingElement::from_int(6),
        RingElement::new(-6, 12),
        RingElement::from_int(30),
    ];
    let discs_ok = chain.len() == 5 && chain.iter().zip(&want).all(|(s, w)| same_unit(s.order.discriminant(), w));
    let eichler = chain.iter().all(|s| {
        [2, 3, 5].iter().all(|p| {
            let pr = prime(&k, *p);
            s.order.classify(&pr).is_ok_and(|c| c.kind == Kind::A1)
        })
    });
    Outcome {
        criterion: 1,
        ok: discs_ok && eichler && took < Duration::from_secs(30),
        detail: format!("chain (1)->(2)->(6)->(6√5)->(30), all A1, {:.2?}", took),
    }
}

fn criterion_2() -> Outcome {
    let k = q5();
    let mut bad = Vec::new();
    for (n, (name, _, a, b)) in REFERENCE_ORDERS.iter().enumerate() {
        let o = reference_order(n);
        let ok = o.lattice.is_order()
            && o.discriminant() == &k.canonical_ring(&RingElement::new(*a, *b))
            && [2, 3, 5].iter().all(|p| {
                let pr = prime(&k, *p);
                o.classify(&pr).is_ok_and(|c| c.kind == Kind::A1 && c.s == o.disc_valuation(&pr))
            });
        if !ok {
            bad.push(*name);
        }
    }
    Outcome { criterion: 2, ok: bad.is_empty(), detail: format!("reference orders R(2), R(6), R(6√5), R(30) {bad:?}") }
}

fn criterion_3(sets: &[(IdealClassSet, Option<StepReport>)], took: Duration) -> Outcome {
    let counts: Vec<usize> = sets.iter().map(|(s, _)| s.len()).collect();
    Outcome {
        criterion: 3,
        ok: counts == [1, 1, 2, 6, 26] && took < Duration::from_secs(300),
        detail: format!("class numbers {counts:?} in {:.2?}", took),
    }
}

fn criterion_4(sets: &[(IdealClassSet, Option<StepReport>)]) -> Outcome {
    let units: Vec<Vec<usize>> =
        sets.iter().map(|(s, _)| sorted(s.classes.iter().map(|c| c.right_unit_count()).collect())).collect();
    let ok = units[0] == [120] && units[1] == [24] && units[2] == [4, 6] && units[3] == [2, 2, 2, 2, 4, 4];
    Outcome { criterion: 4, ok, detail: format!("unit counts {:?}", &units[..4]) }
}

fn criterion_5(chain: &[ChainStep], sets: &[(IdealClassSet, Option<StepReport>)]) -> Outcome {
    let mut idx = Vec::new();
    let mut formula = Vec::new();
    for (st, w) in sets[1..].iter().zip(chain.windows(2)) {
        let pr = w[1].prime.as_ref().unwrap();
        let from = w[0].order.classify(pr).unwrap();
        let to = w[1].order.classify(pr).unwrap();
        idx.push(st.1.as_ref().unwrap().unit_index);
        formula.push(table_unit_index(&from, &to, pr.q() as usize, pr.f));
    }
    let ok = idx == [5, 10, 6, 5] && formula.iter().zip(&idx).all(|(f, i)| *f == Some(*i));
    Outcome { criterion: 5, ok, detail: format!("unit indexes {idx:?}, q+1, q+1, q+1, q for q = 4, 9, 5") }
}

fn criterion_6(sets: &[(IdealClassSet, Option<StepReport>)]) -> Outcome {
    let at6: Vec<usize> = sets[2].1.as_ref().unwrap().parents.iter().map(|p| p.psi_size).collect();
    let at6u: Vec<usize> = sets[3].1.as_ref().unwrap().parents.iter().map(|p| p.psi_size).collect();
    let ok = at6 == [10] && at6u.len() == 2 && at6u.iter().all(|n| *n == 6);
    Outcome { criterion: 6, ok, detail: format!("|Ψ| = {at6:?} at (6), {at6u:?} at (6√5)") }
}

fn criterion_7(sets: &[(IdealClassSet, Option<StepReport>)]) -> Outcome {
    let flags: Vec<Option<bool>> =
        sets[1..].iter().flat_map(|(_, r)| r.as_ref().unwrap().parents.iter().map(|p| p.methods_agree)).collect();
    let ok = flags.iter().all(|f| *f == Some(true));
    Outcome { criterion: 7, ok, detail: format!("Ψ by local units and by colon lattice agree on {} parents", flags.len()) }
}

fn criterion_8(sets: &[(IdealClassSet, Option<StepReport>)]) -> Outcome {
    let ok = sets[1..].iter().all(|(_, r)| r.as_ref().unwrap().parents.iter().all(|p| p.identity_holds()));
    let line = sets[2].1.as_ref().unwrap().parents[0].identity_line();
    Outcome { criterion: 8, ok: ok && line == "10 = 4 + 6", detail: format!("class number identity, disc 6: {line}") }
}

fn criterion_9(sets: &[(IdealClassSet, Option<StepReport>)]) -> Outcome {
    let top = sets[0].0.classes[0].ideal.norm_ideal();
    let last = &sets[4].0;
    let ok = last.classes.len() == 26
        && last.classes.iter().all(|c| c.ideal.norm_ideal() == top && c.ideal.left_order() == last.order.lattice);
    Outcome { criterion: 9, ok, detail: "norm preserved for all 26 representatives".into() }
}

fn criterion_10() -> Outcome {
    let o6u = reference_order(2);
    let o30 = reference_order(3);
    let (_, listed6u) = table_problems(&reference_6u(), &o6u, &r6_classes(), true);
    let (amended6u, fixed6u) = table_problems(&reference_6u(), &o6u, &r6_classes(), false);
    let parents: Vec<(&str, Lattice)> = reference_6u().iter().map(|r| r.name).zip(amended6u).collect();
    let (_, listed30) = table_problems(&reference_30(), &o30, &parents, true);
    let (_, fixed30) = table_problems(&reference_30(), &o30, &parents, false);
    let mut not_left: Vec<&str> = listed_failures(&reference_6u(), &o6u);
    not_left.extend(listed_failures(&reference_30(), &o30));
    let listed: Vec<String> = listed6u.into_iter().chain(listed30).collect();
    // the listed tables carry entries that are not left ideals; the amended
    // tables must pass every check
    assert_eq!(not_left, KNOWN_LISTED, "unexpected set of listed failures");
    assert!(fixed6u.is_empty() && fixed30.is_empty(), "amended tables fail: {fixed6u:?} {fixed30:?}");
    Outcome {
        criterion: 10,
        ok: listed.is_empty(),
        detail: format!(
            "{} of 32 listed reference ideals are not left ideals of their order: {}; the amended tables pass",
            not_left.len(),
            not_left.join(", ")
        ),
    }
}

fn criterion_11(chain: &[ChainStep], sets: &[(IdealClassSet, Option<StepReport>)]) -> Outcome {
    let k = q5();
    let mut bad: Vec<String> = Vec::new();
    let mut lattices: Vec<Lattice> = chain.iter().map(|s| s.order.lattice.clone()).collect();
    lattices.extend(sets.iter().flat_map(|(s, _)| s.classes.iter().map(|c| c.ideal.clone())));
    for l in &lattices {
        let mut rev = l.basis().to_vec();
        rev.reverse();
        if Lattice::from_generators(&l.alg, l.basis()).ok().as_ref() != Some(l)
            || Lattice::from_generators(&l.alg, &rev).ok().as_ref() != Some(l)
        {
            bad.push("hnf".into());
        }
        if l.dual_conj().dual_conj() != *l || l.dual_tr().dual_tr() != *l {
            bad.push("dual".into());
        }
    }
    let steps: Vec<RingElement> =
        chain.windows(2).map(|w| w[0].order.index_of(&w[1].order).unwrap()).collect();
    let prod = steps.iter().fold(RingElement::one(), |a, b| k.mul_ring(&a, b));
    let whole = chain[0].order.index_of(&chain[4].order).unwrap();
    if k.canonical_ring(&prod) != whole {
        bad.push("index".into());
    }
    let mut min_prec = u32::MAX;
    for st in chain {
        for p in [2, 3, 5] {
            let pr = prime(&k, p);
            let cls = st.order.classify(&pr).unwrap();
            match quasi_good_basis(&st.order, &pr, &cls) {
                Ok(qg) => {
                    let res = table_residuals(st.order.alg(), &pr, &cls, &qg.elements).unwrap();
                    let cert = certified_precision(&st.order.lattice, &pr, &res, qg.precision);
                    if cert != qg.precision || qg.precision < st.order.disc_valuation(&pr) + 1 {
                        bad.push(format!("quasi-good at {p}"));
                    }
                    min_prec = min_prec.min(qg.precision);
                }
                Err(e) => bad.push(format!("quasi-good at {p}: {e}")),
            }
        }
    }
    for (s, _) in sets {
        if !s.classes.iter().all(|c| c.right_units.is_closed(s.order.alg())) {
            bad.push("unit closure".into());
        }
    }
    let (order, sub) = (&chain[1].order, &chain[2].order);
    let pr = chain[2].prime.as_ref().unwrap();
    let ideal = &sets[1].0.classes[0].ideal;
    let brute = brute_psi(ideal, order, sub, pr);
    let local = psi_local(ideal, order, sub, pr).unwrap();
    let global = psi_global(ideal, order, sub, pr).unwrap();
    if brute.len() != 10 || !psi_methods_agree(&brute, &local) || !psi_methods_agree(&brute, &global) {
        bad.push("sublattice oracle".into());
    }
    bad.dedup();
    Outcome {
        criterion: 11,
        ok: bad.is_empty(),
        detail: format!(
            "{} lattices: hnf, index, duals; quasi-good precision ≥ {min_prec}; unit closure; brute force |Ψ| = {} {bad:?}",
            lattices.len(),
            brute.len()
        ),
    }
}

fn main() {
    let top = r1();
    let genus = default_genus(&top.alg().field, &RingElement::from_int(30)).unwrap();
    let t = Instant::now();
    let chain = suborder_chain(&top, &genus).unwrap();
    let chain_time = t.elapsed();

    let t = Instant::now();
    let mut sets = vec![(IdealClassSet::principal(&chain[0].order).unwrap(), None)];
    for st in &chain[1..] {
        let p = st.prime.as_ref().unwrap();
        let (next, rep) = ideal_classes(&st.order, &sets.last().unwrap().0, p, true).unwrap();
        sets.push((next, Some(rep)));
    }
    let class_time = t.elapsed() + chain_time;

    let outcomes = [
        criterion_1(&chain, chain_time),
        criterion_2(),
        criterion_3(&sets, class_time),
        criterion_4(&sets),
        criterion_5(&chain, &sets),
        criterion_6(&sets),
        criterion_7(&sets),
        criterion_8(&sets),
        criterion_9(&sets),
        criterion_10(),
        criterion_11(&chain, &sets),
    ];
    let mut unexpected = 0;
    for o in &outcomes {
        println!("{} criterion {}: {}", if o.ok { "PASS" } else { "FAIL" }, o.criterion, o.detail);
        // criterion 10 fails on the listed tables and is checked above
        if !o.ok && o.criterion != 10 {
            unexpected += 1;
        }
    }
    if unexpected > 0 {
        std::process::exit(1);
    }
}
