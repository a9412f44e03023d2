use std::collections::VecDeque;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::base_ring::{factor_prime, BaseField, PrimeIdeal, RingElement};

use super::search::SuborderMethod;
use super::search::maximal_suborder_by;
use super::{Eps, Kind, LocalFormClass, Order, OrderError};

/// Target class at each prime dividing the discriminant.
pub type GenusSpec = Vec<(PrimeIdeal, LocalFormClass)>;

/// Genus graph edges: classes of maximal suborders.
pub fn children(cls: &LocalFormClass, prime: &PrimeIdeal) -> Vec<LocalFormClass> {
    let mut out = Vec::new();
    if cls.dyadic {
        match cls.kind {
            Kind::A1 => {
                out.push(LocalFormClass::a1(cls.s + 1, true));
                if cls.s == 0 {
                    out.push(LocalFormClass::a2(2, true));
                }
            }
            Kind::A2 => out.push(LocalFormClass::a2(cls.s + 2, true)),
            _ => {}
        }
        return out;
    }
    let rf = prime.residue_field();
    let minus_one_square = rf.is_square(&rf.neg(&RingElement::one()));
    match cls.kind {
        Kind::A1 => {
            out.push(LocalFormClass::a1(cls.s + 1, false));
            if cls.s == 0 {
                out.push(LocalFormClass::a2(2, false));
            }
            if cls.s == 1 {
                out.push(LocalFormClass::b(if minus_one_square { Eps::One } else { Eps::Delta }));
            }
        }
        Kind::A2 => {
            out.push(LocalFormClass::a2(cls.s + 2, false));
            if cls.s == 1 {
                out.push(LocalFormClass::b(if minus_one_square { Eps::Delta } else { Eps::One }));
            }
        }
        Kind::B => {
            let e = cls.eps1.unwrap_or(Eps::One);
            out.push(LocalFormClass::c(2, Eps::One, e));
            out.push(LocalFormClass::c(2, Eps::Delta, e));
        }
        Kind::C => {
            let (e1, e2) = (cls.eps1.unwrap_or(Eps::One), cls.eps2.unwrap_or(Eps::One));
            let e2 = if e1 == Eps::Delta { e2.flip() } else { e2 };
            out.push(LocalFormClass::c(cls.s + 1, e1, e2));
        }
        _ => {}
    }
    out
}

pub fn beneath(upper: &LocalFormClass, lower: &LocalFormClass, prime: &PrimeIdeal) -> bool {
    children(upper, prime).contains(lower)
}

/// Shortest descent from one class to another.
fn class_path(from: &LocalFormClass, to: &LocalFormClass, prime: &PrimeIdeal) -> Option<Vec<LocalFormClass>> {
    let limit = to.disc_valuation();
    let mut queue = VecDeque::from([vec![*from]]);
    while let Some(path) = queue.pop_front() {
        let last = path.last().expect("nonempty");
        if last == to {
            return Some(path[1..].to_vec());
        }
        for c in children(last, prime) {
            if c.disc_valuation() <= limit {
                let mut next = path.clone();
                next.push(c);
                queue.push_back(next);
            }
        }
    }
    None
}

fn small_factors(n: &BigInt) -> Vec<u64> {
    let mut n = n.abs();
    let mut out = Vec::new();
    let mut p = 2u64;
    while !n.is_zero() && n > BigInt::from(1) {
        let pb = BigInt::from(p);
        if &pb * &pb > n {
            out.push(n.to_u64().expect("small prime"));
            break;
        }
        if n.is_multiple_of(&pb) {
            out.push(p);
            while n.is_multiple_of(&pb) {
                n /= &pb;
            }
        }
        p += 1;
    }
    out
}

/// Eichler genus of the given discriminant: class A1 at each prime divisor.
pub fn default_genus(field: &BaseField, disc: &RingElement) -> Result<GenusSpec, OrderError> {
    let mut out = Vec::new();
    for p in small_factors(&field.norm_int(disc)) {
        for prime in factor_prime(field, p)? {
            let v = prime.valuation(&disc.to_scalar()).unwrap_or(0);
            if v > 0 {
                out.push((prime.clone(), LocalFormClass::a1(v as u32, prime.is_dyadic())));
            }
        }
    }
    Ok(out)
}

/// One order of a chain, with the step that produced it.
#[derive(Clone, Debug)]
pub struct ChainStep {
    pub order: Order,
    pub prime: Option<PrimeIdeal>,
    pub class: Option<LocalFormClass>,
    pub method: Option<SuborderMethod>,
}

/// Chain of maximal suborders from `top` down to the requested genus.
pub fn suborder_chain(top: &Order, genus: &GenusSpec) -> Result<Vec<ChainStep>, OrderError> {
    suborder_chain_by(top, genus, SuborderMethod::Table)
}

pub fn suborder_chain_by(top: &Order, genus: &GenusSpec, prefer: SuborderMethod) -> Result<Vec<ChainStep>, OrderError> {
    let mut steps = vec![ChainStep { order: top.clone(), prime: None, class: None, method: None }];
    for (prime, target) in genus {
        let current = steps.last().expect("nonempty").order.classify(prime)?;
        let path = class_path(&current, target, prime)
            .ok_or_else(|| OrderError::Unreachable(format!("{current} to {target} at {}", prime.p)))?;
        for cls in path {
            let (sub, method) = maximal_suborder_by(&steps.last().expect("nonempty").order, prime, &cls, prefer)?;
            steps.push(ChainStep { order: sub, prime: Some(prime.clone()), class: Some(cls), method: Some(method) });
        }
    }
    Ok(steps)
}
