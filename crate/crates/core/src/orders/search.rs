use serde::{Deserialize, Serialize};

use crate::base_ring::{PrimeIdeal, RingElement};
use crate::lattice::subspaces;

use super::residue::{ResVec, ResidueAlgebra};
use super::{beneath, table_suborder, LocalFormClass, Order, OrderError};

/// How a suborder step was produced.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SuborderMethod {
    Table,
    Search,
}

/// Subalgebras of O/πO containing 1 of codimension 1 and 2, maximal ones only.
fn maximal_subalgebras(ra: &ResidueAlgebra) -> Vec<Vec<ResVec>> {
    let embed = |rows: &[ResVec]| -> Vec<ResVec> {
        let mut out = vec![ra.one()];
        for r in rows {
            let mut v = vec![RingElement::zero()];
            v.extend(r.iter().cloned());
            out.push(v);
        }
        out
    };
    let codim1: Vec<Vec<ResVec>> =
        subspaces(&ra.rf, 3, 2).iter().map(|s| embed(s)).filter(|s| ra.is_subalgebra(s)).collect();
    let mut out = codim1.clone();
    for s in subspaces(&ra.rf, 3, 1) {
        let cand = embed(&s);
        if !ra.is_subalgebra(&cand) {
            continue;
        }
        let inside = codim1.iter().any(|big| cand.iter().all(|v| ra.in_span(big, v)));
        if !inside {
            out.push(cand);
        }
    }
    out
}

/// Every maximal suborder of O at the prime.
pub fn maximal_suborders(order: &Order, prime: &PrimeIdeal) -> Result<Vec<Order>, OrderError> {
    let ra = ResidueAlgebra::new(order, prime)?;
    maximal_subalgebras(&ra).iter().map(|rows| ra.lift_suborder(rows, prime)).collect()
}

/// Maximal suborder of the requested local class: table substitution on a
/// quasi-good basis, else a search through residue subalgebras.
pub fn maximal_suborder(
    order: &Order,
    prime: &PrimeIdeal,
    target: &LocalFormClass,
) -> Result<(Order, SuborderMethod), OrderError> {
    maximal_suborder_by(order, prime, target, SuborderMethod::Table)
}

/// As `maximal_suborder`; `Search` skips the tables.
pub fn maximal_suborder_by(
    order: &Order,
    prime: &PrimeIdeal,
    target: &LocalFormClass,
    prefer: SuborderMethod,
) -> Result<(Order, SuborderMethod), OrderError> {
    let current = order.classify(prime)?;
    if !beneath(&current, target, prime) {
        return Err(OrderError::NotBeneath { source_class: current.to_string(), target: target.to_string() });
    }
    if prefer == SuborderMethod::Table {
        if let Ok((sub, _)) = table_suborder(order, prime, &current, target) {
            if sub.classify(prime).ok().as_ref() == Some(target) {
                return Ok((sub, SuborderMethod::Table));
            }
        }
    }
    Ok((search_suborder(order, prime, target)?, SuborderMethod::Search))
}

pub(crate) fn search_suborder(order: &Order, prime: &PrimeIdeal, target: &LocalFormClass) -> Result<Order, OrderError> {
    let ra = ResidueAlgebra::new(order, prime)?;
    for rows in maximal_subalgebras(&ra) {
        let sub = ra.lift_suborder(&rows, prime)?;
        if sub.classify(prime).ok().as_ref() == Some(target) {
            return Ok(sub);
        }
    }
    Err(OrderError::Unreachable(target.to_string()))
}
