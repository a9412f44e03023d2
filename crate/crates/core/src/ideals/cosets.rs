use std::collections::HashSet;

use crate::base_ring::{rat, FieldScalar, LocalContext, ParamTag, PrimeIdeal, RingElement};
use crate::lattice::rf_rref;
use crate::orders::{quasi_good_basis, table_suborder, Eps, Kind, LocalFormClass, Order, ResidueAlgebra};
use crate::quaternion::QuatElement;

use super::IdealError;

type ResVec = Vec<RingElement>;

fn span_elements(ra: &ResidueAlgebra, span: &[ResVec]) -> Vec<ResVec> {
    let q = ra.q();
    let total = q.pow(span.len() as u32);
    (0..total)
        .map(|mut idx| {
            let mut v = vec![RingElement::zero(); 4];
            for row in span {
                let c = &ra.rf.reps[idx % q];
                idx /= q;
                for t in 0..4 {
                    v[t] = ra.rf.add(&v[t], &ra.rf.mul(c, &row[t]));
                }
            }
            v
        })
        .collect()
}

struct CosetData {
    ra: ResidueAlgebra,
    units: Vec<ResVec>,
    sub_units: Vec<ResVec>,
}

fn coset_data(order: &Order, sub: &Order, prime: &PrimeIdeal) -> Result<CosetData, IdealError> {
    let ra = ResidueAlgebra::new(order, prime)?;
    let rows = sub.lattice.basis().iter().map(|b| ra.reduce(b)).collect::<Result<Vec<_>, _>>()?;
    let span = rf_rref(&ra.rf, rows);
    let sub_units: Vec<ResVec> = span_elements(&ra, &span).into_iter().filter(|v| ra.is_unit(v)).collect();
    let units: Vec<ResVec> = ra.elements().into_iter().filter(|v| ra.is_unit(v)).collect();
    Ok(CosetData { ra, units, sub_units })
}

/// [O_p^× : O'_p^×] computed in O/πO.
pub fn unit_index(order: &Order, sub: &Order, prime: &PrimeIdeal) -> Result<usize, IdealError> {
    let d = coset_data(order, sub, prime)?;
    Ok(d.units.len() / d.sub_units.len())
}

/// Representatives of O'_p^× \ O_p^× by enumeration of (O/πO)^×.
pub fn unit_coset_reps_brute(order: &Order, sub: &Order, prime: &PrimeIdeal) -> Result<Vec<QuatElement>, IdealError> {
    let d = coset_data(order, sub, prime)?;
    let mut covered: HashSet<ResVec> = HashSet::new();
    let mut reps = Vec::new();
    let one = d.ra.one();
    for a in std::iter::once(&one).chain(d.units.iter()) {
        if covered.contains(a) {
            continue;
        }
        for s in &d.sub_units {
            covered.insert(d.ra.mul(s, a));
        }
        reps.push(d.ra.lift(a));
    }
    Ok(reps)
}

/// Index [O_p^× : O'_p^×] predicted by the coset tables.
pub fn table_unit_index(from: &LocalFormClass, to: &LocalFormClass, q: usize, f: u32) -> Option<usize> {
    use Kind::*;
    let idx = match (from.kind, to.kind) {
        (A1, A1) if from.s == 0 => q + 1,
        (A1, A1) => q,
        (A1, A2) if !from.dyadic || f % 2 == 1 => q * (q - 1),
        (A1, B) => q - 1,
        (A2, A2) => q * q,
        (A2, B) if !from.dyadic => q + 1,
        (B, C) | (C, C) => q,
        _ => return None,
    };
    Some(idx)
}

/// Representatives read from the coset tables, for a suborder built by the
/// table substitution on the canonical quasi-good basis.
pub fn table_coset_reps(order: &Order, sub: &Order, prime: &PrimeIdeal) -> Result<Vec<QuatElement>, IdealError> {
    use Kind::*;
    let from = order.classify(prime)?;
    let to = sub.classify(prime)?;
    let (built, _) = table_suborder(order, prime, &from, &to).map_err(|_| IdealError::RowMissing)?;
    if built.lattice != sub.lattice {
        return Err(IdealError::RowMissing);
    }
    let qg = quasi_good_basis(order, prime, &from)?;
    let alg = order.alg();
    let k = &alg.field;
    let e = &qg.elements;
    let reps: Vec<FieldScalar> = prime.residue_field().reps.iter().map(|r| r.to_scalar()).collect();
    let q = reps.len();
    let one = QuatElement::one();
    let sc = |c: &FieldScalar, x: &QuatElement| alg.scale(c, x);
    let half = FieldScalar::new(rat(1, 2), rat(0, 1));
    let mut out = Vec::new();
    match (from.dyadic, from.kind, to.kind) {
        (false, A1, A1) => {
            if from.s == 0 {
                out.push(e[1].clone());
            }
            let diff = &e[1] - &e[2];
            for a in &reps {
                out.push(&one + &sc(&k.mul(a, &half), &diff));
            }
        }
        (false, A1, A2) => {
            let ctx = LocalContext::new(prime, 2);
            let beta = ctx.solve_table_parameters(ParamTag::Beta).map_err(|_| IdealError::RowMissing)?;
            let (b0, b1) = (beta[0].to_scalar(), beta[1].to_scalar());
            let delta = ctx.delta().to_scalar();
            let rf = prime.residue_field();
            // orthogonal to β₀e₁ + β₁e₃
            let u = &sc(&b1, &e[1]) - &sc(&b0, &e[3]);
            out.push(e[2].clone());
            for g1 in &reps {
                for g2 in &reps {
                    let val = &(&FieldScalar::one() - &k.mul(&delta, &k.mul(g1, g1))) + &k.mul(g2, g2);
                    if rf.reduce(&val).map_or(true, |r| r.is_zero()) {
                        continue;
                    }
                    out.push(&(&one + &sc(g1, &u)) + &sc(g2, &e[2]));
                }
            }
        }
        (false, A1, B) => {
            out.push(one.clone());
            for a in &reps[2..] {
                out.push(&sc(a, &one) + &e[3]);
            }
        }
        (_, A2, A2) => {
            for a in &reps {
                for b in &reps {
                    out.push(&(&one + &sc(a, &e[1])) + &sc(b, &e[2]));
                }
            }
        }
        (false, A2, B) => {
            out.push(one.clone());
            for a in &reps {
                out.push(&sc(a, &one) + &e[3]);
            }
        }
        (false, B, C) | (false, C, C) => {
            // g = <1, δπ, δπ²> from B uses e3
            let use_e3 = from.kind == B && to.eps1 == Some(Eps::Delta) && to.eps2 == Some(Eps::Delta);
            let t = if use_e3 { &e[3] } else { &e[2] };
            out.push(one.clone());
            for a in &reps[..q - 1] {
                out.push(&sc(a, &one) + t);
            }
        }
        (true, A1, A1) => {
            if from.s == 0 {
                out.push(&e[1] + &e[2]);
            }
            for a in &reps {
                out.push(&one + &sc(a, &e[2]));
            }
        }
        (true, A1, A2) if prime.f % 2 == 1 => {
            for a in &reps {
                for b in reps.iter().filter(|b| !b.is_zero()) {
                    out.push(alg.mul(&(&one + &sc(a, &e[2])), &(&e[1] + &sc(b, &e[2]))));
                }
            }
        }
        _ => return Err(IdealError::RowMissing),
    }
    out.iter().map(|x| order.lattice.globalize(prime, 1, x).map_err(IdealError::from)).collect()
}

/// Checks that the candidates are units of O_p lying in distinct cosets and
/// exhaust the index.
pub fn validate_coset_reps(
    order: &Order,
    sub: &Order,
    prime: &PrimeIdeal,
    reps: &[QuatElement],
) -> Result<bool, IdealError> {
    let d = coset_data(order, sub, prime)?;
    let mut covered: HashSet<ResVec> = HashSet::new();
    for a in reps {
        let v = d.ra.reduce(a)?;
        if !d.ra.is_unit(&v) || covered.contains(&v) {
            return Ok(false);
        }
        for s in &d.sub_units {
            covered.insert(d.ra.mul(s, &v));
        }
    }
    Ok(reps.len() * d.sub_units.len() == d.units.len())
}

/// Table representatives when they validate, else the enumeration.
pub fn unit_coset_reps(order: &Order, sub: &Order, prime: &PrimeIdeal) -> Result<Vec<QuatElement>, IdealError> {
    if let Ok(reps) = table_coset_reps(order, sub, prime) {
        if validate_coset_reps(order, sub, prime, &reps)? {
            return Ok(reps);
        }
    }
    unit_coset_reps_brute(order, sub, prime)
}
