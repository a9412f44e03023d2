//! Norm-one unit groups of orders in totally definite algebras, by exact
//! short vector enumeration of Tr_{K/Q}∘N.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::base_ring::{FieldScalar, RingElement};
use crate::lattice::Lattice;
use crate::quaternion::{Algebra, QuatElement};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum UnitError {
    #[error("norm form is not positive definite")]
    NotDefinite,
}

/// Exact Fincke–Pohst enumeration for Q(x) = xᵀAx.
#[derive(Clone, Debug)]
pub struct ShortVectorEnumerator {
    q: Vec<BigRational>,
    mu: Vec<Vec<BigRational>>,
}

impl ShortVectorEnumerator {
    pub fn new(a: &[Vec<BigRational>]) -> Result<Self, UnitError> {
        let n = a.len();
        let mut q = vec![BigRational::zero(); n];
        let mut mu = vec![vec![BigRational::zero(); n]; n];
        for i in 0..n {
            let mut qi = a[i][i].clone();
            for k in 0..i {
                qi -= &mu[k][i] * &mu[k][i] * &q[k];
            }
            if !qi.is_positive() {
                return Err(UnitError::NotDefinite);
            }
            for j in i + 1..n {
                let mut m = a[i][j].clone();
                for k in 0..i {
                    m -= &mu[k][i] * &mu[k][j] * &q[k];
                }
                mu[i][j] = m / &qi;
            }
            q[i] = qi;
        }
        Ok(ShortVectorEnumerator { q, mu })
    }

    /// All nonzero x with Q(x) ≤ bound.
    pub fn enumerate(&self, bound: &BigRational) -> Vec<Vec<i64>> {
        let n = self.q.len();
        let mut out = Vec::new();
        let mut x = vec![0i64; n];
        self.recurse(n, bound.clone(), &mut x, &mut out);
        out.retain(|v| v.iter().any(|c| *c != 0));
        out
    }

    fn recurse(&self, level: usize, rest: BigRational, x: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if level == 0 {
            out.push(x.clone());
            return;
        }
        let i = level - 1;
        let mut center = BigRational::zero();
        for j in i + 1..x.len() {
            if x[j] != 0 {
                center -= &self.mu[i][j] * BigRational::from_integer(BigInt::from(x[j]));
            }
        }
        // float hint for the range, then exact filtering
        let c = center.to_f64().unwrap_or(0.0);
        let r = (rest.to_f64().unwrap_or(0.0) / self.q[i].to_f64().unwrap_or(1.0)).max(0.0).sqrt();
        let lo = (c - r).floor() as i64 - 1;
        let hi = (c + r).ceil() as i64 + 1;
        for v in lo..=hi {
            let d = BigRational::from_integer(BigInt::from(v)) - &center;
            let used = &self.q[i] * &d * &d;
            if used > rest {
                continue;
            }
            x[i] = v;
            self.recurse(i, &rest - &used, x, out);
        }
        x[i] = 0;
    }
}

/// ℤ-basis {b_i, ω b_i} and the matrix of Tr_{K/Q}∘N on it.
pub fn norm_form(lattice: &Lattice) -> (Vec<QuatElement>, Vec<Vec<BigRational>>) {
    let alg = &lattice.alg;
    let k = &alg.field;
    let mut z: Vec<QuatElement> = lattice.basis().to_vec();
    if !k.is_rational() {
        let w = RingElement::new(0, 1).to_scalar();
        z.extend(lattice.basis().iter().map(|b| alg.scale(&w, b)));
    }
    let half = BigRational::new(BigInt::from(1), BigInt::from(2));
    let a = z
        .iter()
        .map(|x| z.iter().map(|y| k.trace_rat(&alg.trace_form(x, y)) * &half).collect())
        .collect();
    (z, a)
}

fn combine(alg: &Algebra, z: &[QuatElement], x: &[i64]) -> QuatElement {
    z.iter().zip(x).filter(|(_, c)| **c != 0).fold(QuatElement::zero(), |acc, (b, c)| {
        &acc + &alg.scale(&FieldScalar::from_int(*c), b)
    })
}

/// Elements of the lattice with reduced norm exactly g.
pub fn elements_of_norm(lattice: &Lattice, g: &FieldScalar) -> Result<Vec<QuatElement>, UnitError> {
    let alg = &lattice.alg;
    let (z, a) = norm_form(lattice);
    let en = ShortVectorEnumerator::new(&a)?;
    let bound = alg.field.trace_rat(g);
    Ok(en
        .enumerate(&bound)
        .iter()
        .map(|x| combine(alg, &z, x))
        .filter(|x| alg.norm(x) == *g)
        .collect())
}

/// Sign representative modulo ±1: first nonzero coordinate positive.
pub fn sign_normalize(x: &QuatElement) -> QuatElement {
    for c in &x.0 {
        for r in [&c.a, &c.b] {
            if r.is_positive() {
                return x.clone();
            }
            if r.is_negative() {
                return -x;
            }
        }
    }
    x.clone()
}

/// O^{×,1} modulo ±1.
#[derive(Clone, Debug, Serialize)]
pub struct UnitGroup {
    pub elements: Vec<QuatElement>,
}

impl UnitGroup {
    /// |O^{×,1}|.
    pub fn order(&self) -> usize {
        2 * self.elements.len()
    }

    /// Units lying in the given lattice.
    pub fn restrict(&self, lattice: &Lattice) -> UnitGroup {
        UnitGroup { elements: self.elements.iter().filter(|u| lattice.contains(u)).cloned().collect() }
    }

    /// Closure under products and inverses modulo ±1.
    pub fn is_closed(&self, alg: &Algebra) -> bool {
        let set: std::collections::HashSet<&QuatElement> = self.elements.iter().collect();
        self.elements.iter().all(|x| {
            set.contains(&sign_normalize(&alg.conj(x)))
                && self.elements.iter().all(|y| set.contains(&sign_normalize(&alg.mul(x, y))))
        })
    }
}

pub fn norm_one_units(order: &Lattice) -> Result<UnitGroup, UnitError> {
    let mut elements: Vec<QuatElement> = elements_of_norm(order, &FieldScalar::one())?
        .iter()
        .map(sign_normalize)
        .collect();
    elements.sort_by(|a, b| format!("{a:?}").cmp(&format!("{b:?}")));
    elements.dedup();
    // 1 first
    if let Some(pos) = elements.iter().position(|u| *u == QuatElement::one()) {
        let one = elements.remove(pos);
        elements.insert(0, one);
    }
    Ok(UnitGroup { elements })
}

/// Some x with j·x = i, when the two lattices are right-equivalent.
pub fn equivalence_witness(i: &Lattice, j: &Lattice) -> Result<Option<QuatElement>, UnitError> {
    let k = i.field();
    let ratio = k.div(&i.norm_ideal(), &j.norm_ideal()).expect("nonzero norms");
    let g = k.canonical(&ratio);
    let colon = Lattice::right_colon(i, j);
    for x in elements_of_norm(&colon, &g)? {
        if j.right_mul(&x).is_ok_and(|jx| jx == *i) {
            return Ok(Some(x));
        }
    }
    Ok(None)
}

pub fn ideals_equivalent(i: &Lattice, j: &Lattice) -> Result<bool, UnitError> {
    Ok(equivalence_witness(i, j)?.is_some())
}
