#![allow(dead_code)]

use std::sync::{Arc, OnceLock};

use bassorder::base_ring::{factor_prime, BaseField, FieldScalar, PrimeIdeal, RingElement};
use bassorder::ideals::{ideal_classes, IdealClassSet, StepReport};
use bassorder::lattice::{subspaces, Lattice};
use bassorder::orders::{default_genus, suborder_chain, ChainStep, Order};
use bassorder::quaternion::{Algebra, QuatElement};
use bassorder::units::{ideals_equivalent, norm_one_units};

pub fn q5() -> BaseField {
    BaseField::quadratic(5).unwrap()
}

pub fn algebra(d: u64, a: i64, b: i64) -> Arc<Algebra> {
    let k = BaseField::quadratic(d).unwrap();
    Arc::new(Algebra::new(k, RingElement::from_int(a), RingElement::from_int(b)).unwrap())
}

pub fn sqrt5_algebra() -> Arc<Algebra> {
    algebra(5, -1, -1)
}

pub fn prime(k: &BaseField, p: u64) -> PrimeIdeal {
    factor_prime(k, p).unwrap().remove(0)
}

pub fn order(alg: &Arc<Algebra>, gens: &[&str]) -> Order {
    let mut g = vec![QuatElement::one()];
    g.extend(alg.parse_many(gens).unwrap());
    Order::from_generators(alg, &g).unwrap()
}

pub fn lattice(alg: &Arc<Algebra>, gens: &[&str]) -> Lattice {
    Lattice::from_generators(alg, &alg.parse_many(gens).unwrap()).unwrap()
}

/// The maximal order R(1) of (-1,-1) over Q(√5).
pub fn r1() -> Order {
    order(
        &sqrt5_algebra(),
        &["(1+w^-1 i+w j)/2", "(w^-1 i + j + w k)/2", "(w i + w^-1 j + k)/2", "(i + w j + w^-1 k)/2"],
    )
}

/// Hurwitz order of (-1,-1) over Q.
pub fn hurwitz() -> Order {
    order(&algebra(1, -1, -1), &["i", "j", "(1+i+j+k)/2"])
}

/// M2(Z) inside (1,1)_Q.
pub fn m2z() -> Order {
    order(&algebra(1, 1, 1), &["(1+i)/2", "(j+k)/2", "(j-k)/2"])
}

pub fn chain30() -> &'static Vec<ChainStep> {
    static CHAIN: OnceLock<Vec<ChainStep>> = OnceLock::new();
    CHAIN.get_or_init(|| {
        let top = r1();
        let genus = default_genus(&top.alg().field, &RingElement::from_int(30)).unwrap();
        suborder_chain(&top, &genus).unwrap()
    })
}

/// Class sets along the chain with step reports, both Ψ methods compared.
pub fn classes30() -> &'static Vec<(IdealClassSet, Option<StepReport>)> {
    static SETS: OnceLock<Vec<(IdealClassSet, Option<StepReport>)>> = OnceLock::new();
    SETS.get_or_init(|| {
        let chain = chain30();
        let mut out = vec![(IdealClassSet::principal(&chain[0].order).unwrap(), None)];
        for st in &chain[1..] {
            let p = st.prime.as_ref().unwrap();
            let (next, rep) = ideal_classes(&st.order, &out.last().unwrap().0, p, true).unwrap();
            out.push((next, Some(rep)));
        }
        out
    })
}

/// Reference orders R(2), R(6), R(6√5), R(30) over Q(√5), with √5 = 2w - 1.
pub const REFERENCE_ORDERS: [(&str, [&str; 3], i64, i64); 4] = [
    ("R(2)", ["i", "j", "(1+i+j+k)/2"], 2, 0),
    ("R(6)", ["i+2k", "3k", "(1+i+j+k)/2"], 6, 0),
    ("R(6√5)", ["i+2k", "3(2w-1)k", "(1+i+j+7k)/2"], -6, 12),
    ("R(30)", ["i+2k", "15k", "(1+i+j+7k)/2"], 30, 0),
];

/// A reference ideal: name, parent name, generators as listed, and the
/// amended generators when the listed ones do not give a left ideal.
pub struct RefIdeal {
    pub name: &'static str,
    pub parent: &'static str,
    pub listed: [&'static str; 4],
    pub amended: Option<[&'static str; 4]>,
    /// |O_r(I)^{×,1}| when stated, else 0.
    pub right_units: usize,
}

impl RefIdeal {
    pub fn generators(&self) -> [&'static str; 4] {
        self.amended.unwrap_or(self.listed)
    }
}

macro_rules! ideal {
    ($n:expr, $p:expr, $l:expr, $u:expr) => {
        RefIdeal { name: $n, parent: $p, listed: $l, amended: None, right_units: $u }
    };
    ($n:expr, $p:expr, $l:expr, $a:expr, $u:expr) => {
        RefIdeal { name: $n, parent: $p, listed: $l, amended: Some($a), right_units: $u }
    };
}

/// Class representatives for R(6√5); parents are the two classes of R(6).
pub fn reference_6u() -> Vec<RefIdeal> {
    vec![
        ideal!("I1", "I", ["i+2k", "3(2w-1)k", "1", "(1+i+j+7k)/2"], 2),
        ideal!("I4", "I", ["i+2k", "3(2w-1)k", "j+14k", "(1+i+j+19k)/2"], 2),
        ideal!("J1", "J", ["i+(w-1)k", "3(2w-1)k", "j-(w+7)k", "(1-i-j+(18+(2w-1))k)/2"], 2),
        ideal!("J2", "J", ["i+(w-1)k", "3(2w-1)k", "j-(w+4)k", "(1-i-j+(6+(2w-1))k)/2"], 4),
        ideal!(
            "J3",
            "J",
            ["i+(w-1)k", "3(2w-1)k", "j-(w+1)k", "(1-i+j+(6-(2w-1))k)/2"],
            ["i+(w-1)k", "3(2w-1)k", "j-(w+1)k", "(1-i+j+(6-3(2w-1))k)/2"],
            2
        ),
        ideal!("J5", "J", ["i+(w-1)k", "3(2w-1)k", "j-(w-5)k", "(1-i-j+(2w-1)k)/2"], 4),
    ]
}

/// Class representatives for R(30); parents are the classes of R(6√5).
pub fn reference_30() -> Vec<RefIdeal> {
    vec![
        ideal!("I1,1", "I1", ["i+2k", "15k", "1", "(1+i+j+7k)/2"], 0),
        ideal!("I1,2", "I1", ["i+2k", "15k", "j+2(1+3w)k", "(1+i+j+(7-6(2w-1))k)/2"], 0),
        ideal!("I1,3", "I1", ["i+2k", "15k", "j-(1+3w)k", "(1+i+j+(-8+3(2w-1))k)/2"], 0),
        ideal!(
            "I1,4",
            "I1",
            ["i+2k", "15k", "j-(4-3w)k", "(1+i+j+(8+3(2w-1))k)/2"],
            ["i+2k", "15k", "j-(4-3w)k", "(1+i+j-(8+3(2w-1))k)/2"],
            0
        ),
        ideal!("I1,5", "I1", ["i+2k", "15k", "j-(7+6w)k", "(1+i+j+(7+6(2w-1))k)/2"], 0),
        ideal!(
            "I4,1",
            "I4",
            ["i+2k", "15k", "j+2(2-3w)k", "(1+i+j-(11+6(2w-1))k)/2"],
            ["i+2k", "15k", "j-2(2-3w)k", "(1+i+j-(11+6(2w-1))k)/2"],
            0
        ),
        ideal!("I4,2", "I4", ["i+2k", "15k", "j-(7+3w)k", "(1+i+j+(4+3(2w-1))k)/2"], 0),
        ideal!(
            "I4,3",
            "I4",
            ["i+2k", "15k", "j+(5+3w)k", "(1+i+j+(1-6(2w-1))k)/2"],
            ["i+2k", "15k", "j+(5+3w)k", "(1+i+j+(4-3(2w-1))k)/2"],
            0
        ),
        ideal!("I4,4", "I4", ["i+2k", "15k", "j+2(1-3w)k", "(1+i+j+(19+6(2w-1))k)/2"], 0),
        ideal!("I4,5", "I4", ["i+2k", "15k", "j+14k", "(1+i+j+19k)/2"], 0),
        ideal!("J1,1", "J1", ["i+(2-5w)k", "15k", "j+5(1+w)k", "(1+i+j+(2-5(2w-1))k)/2"], 0),
        ideal!("J1,2", "J1", ["i+(2-5w)k", "15k", "j+(2-4w)k", "(1+i+j+(17+4(2w-1))k)/2"], 0),
        ideal!(
            "J1,3",
            "J1",
            ["i+(2-5w)k", "15k", "j+(2-w)k", "(1+i+j-(13+2(2w-1))k)/2"],
            ["i+(2-5w)k", "15k", "j+(-1+2w)k", "(1+i+j-(13+2(2w-1))k)/2"],
            0
        ),
        ideal!("J1,4", "J1", ["i+(2-5w)k", "15k", "j-(4+7w)k", "(1+i+j+(2+7(2w-1))k)/2"], 0),
        ideal!(
            "J1,5",
            "J1",
            ["i+(2-5w)k", "15k", "j-(1+7w)k", "(1+i+j+(2+(2w-1))k)/2"],
            ["i+(2-5w)k", "15k", "j-(7+w)k", "(1+i+j+(2+(2w-1))k)/2"],
            0
        ),
        ideal!(
            "J2,1",
            "J2",
            ["i+(2-5w)k", "15k", "j+(5-7w)k", "(1+i+j-(4+5(2w-1))k)/2"],
            ["i+(2-5w)k", "15k", "j-(7-5w)k", "(1+i+j-(4+5(2w-1))k)/2"],
            0
        ),
        ideal!("J2,2", "J2", ["i+(2-5w)k", "15k", "j+(5-4w)k", "(1+i+j+(11+4(2w-1))k)/2"], 0),
        ideal!("J2,3", "J2", ["i+(2-5w)k", "15k", "j+2(1+w)k", "(1+i+j+(11-2(2w-1))k)/2"], 0),
        ideal!("J3,1", "J3", ["i+(2-5w)k", "15k", "j-(4-5w)k", "(1+i+j-(10+5(2w-1))k)/2"], 0),
        ideal!(
            "J3,2",
            "J3",
            ["i+(2-5w)k", "15k", "j-(7+4w)k", "(1-i+j+(5+4(2w-1))k)/2"],
            ["i+(2-5w)k", "15k", "j-(7+4w)k", "(1+i+j+(5+4(2w-1))k)/2"],
            0
        ),
        ideal!("J3,3", "J3", ["i+(2-5w)k", "15k", "j+(5+2w)k", "(1+i+j+(5-2(2w-1))k)/2"], 0),
        ideal!("J3,4", "J3", ["i+(2-5w)k", "15k", "j+(2-7w)k", "(1+i+j+(20+7(2w-1))k)/2"], 0),
        ideal!(
            "J3,5",
            "J3",
            ["i+(2-5w)k", "15k", "j+(1+w)k", "(1+i+j-(10-(2w-1))k)/2"],
            ["i+(2-5w)k", "15k", "j-(1+w)k", "(1+i+j-(10-(2w-1))k)/2"],
            0
        ),
        ideal!("J5,1", "J5", ["i+(2-5w)k", "15k", "j+(2+5w)k", "(1+i+j+(8-5(2w-1))k)/2"], 0),
        ideal!(
            "J5,2",
            "J5",
            ["i+(2-5w)k", "15k", "j-(1+4w)k", "(1+i+j+(15+4(2w-1))k)/2"],
            ["i+(2-5w)k", "15k", "j-(1+4w)k", "(1+i+j+(-7+4(2w-1))k)/2"],
            0
        ),
        ideal!("J5,3", "J5", ["i+(2-5w)k", "15k", "j-2(2-w)k", "(1-i+j-(6-3(2w-1))k)/2"], 0),
    ]
}

pub fn reference_order(idx: usize) -> Order {
    order(&sqrt5_algebra(), &REFERENCE_ORDERS[idx].1)
}

/// Ideals as listed; the names whose listed generators fail.
pub fn listed_failures(refs: &[RefIdeal], o: &Order) -> Vec<&'static str> {
    let alg = sqrt5_algebra();
    refs.iter()
        .filter(|r| lattice(&alg, &r.listed).left_order() != o.lattice)
        .map(|r| r.name)
        .collect()
}

/// The two classes of R(6).
pub fn r6_classes() -> Vec<(&'static str, Lattice)> {
    let alg = sqrt5_algebra();
    vec![
        ("I", reference_order(1).lattice),
        ("J", lattice(&alg, &["i+(w-1)k", "j-(w+1)k", "3k", "1+(w/2)(3-i-j-3k)"])),
    ]
}

/// Problems with a reference table: not a left ideal of `o`, wrong norm, not
/// inside the parent, wrong unit count, or two equivalent entries.
pub fn table_problems(
    refs: &[RefIdeal],
    o: &Order,
    parents: &[(&str, Lattice)],
    listed: bool,
) -> (Vec<Lattice>, Vec<String>) {
    let alg = sqrt5_algebra();
    let ideals: Vec<Lattice> =
        refs.iter().map(|r| lattice(&alg, &if listed { r.listed } else { r.generators() })).collect();
    let mut bad = Vec::new();
    for (r, l) in refs.iter().zip(&ideals) {
        if l.left_order() != o.lattice {
            bad.push(format!("{} is not a left ideal", r.name));
            continue;
        }
        if l.norm_ideal() != FieldScalar::one() {
            bad.push(format!("{} has norm {:?}", r.name, l.norm_ideal()));
        }
        let parent = &parents.iter().find(|(n, _)| *n == r.parent).expect("parent listed").1;
        if !parent.contains_lattice(l) {
            bad.push(format!("{} is not inside {}", r.name, r.parent));
        }
        if r.right_units > 0 && norm_one_units(&l.right_order()).unwrap().order() != r.right_units {
            bad.push(format!("{} has the wrong unit count", r.name));
        }
    }
    for a in 0..ideals.len() {
        for b in a + 1..ideals.len() {
            if ideals_equivalent(&ideals[a], &ideals[b]).unwrap() {
                bad.push(format!("{} ~ {}", refs[a].name, refs[b].name));
            }
        }
    }
    (ideals, bad)
}

/// Every J between 3I and I with [I : J] = 9, left order R(6), norm N(I) and
/// R(2)·J = I, by listing hyperplanes of I/3I.
pub fn brute_psi(ideal: &Lattice, order: &Order, sub: &Order, prime: &PrimeIdeal) -> Vec<Lattice> {
    let rf = prime.residue_field();
    let pi_i = ideal.scale(&prime.pi_scalar());
    let norm = ideal.norm_ideal();
    let basis = ideal.basis();
    let alg = ideal.alg.clone();
    let mut out = Vec::new();
    for hyper in subspaces(&rf, 4, 3) {
        let mut gens: Vec<QuatElement> = pi_i.basis().to_vec();
        for row in &hyper {
            let lift = row.iter().zip(basis).fold(QuatElement::zero(), |acc, (c, b)| &acc + &alg.scale(&c.to_scalar(), b));
            gens.push(lift);
        }
        let j = Lattice::from_generators(&alg, &gens).unwrap();
        if j.left_order() == sub.lattice && j.norm_ideal() == norm && order.lattice.product(&j) == *ideal {
            out.push(j);
        }
    }
    out
}
