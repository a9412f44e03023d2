use crate::base_ring::{FieldScalar, PrimeIdeal, ResidueField, RingElement};
use crate::lattice::rf_rref;
use crate::linalg::{inverse, Matrix};
use crate::quaternion::QuatElement;

use super::{Order, OrderError};

pub type ResVec = Vec<RingElement>;

/// O/πO with coordinates in the basis {1, x1, x2, x3}.
#[derive(Clone, Debug)]
pub struct ResidueAlgebra {
    pub rf: ResidueField,
    pub basis: [QuatElement; 4],
    inv: Matrix,
    /// table[a][b] = coordinates of x_a·x_b
    table: Vec<Vec<ResVec>>,
    order: Order,
}

impl ResidueAlgebra {
    pub fn new(order: &Order, prime: &PrimeIdeal) -> Result<Self, OrderError> {
        let k = &order.alg().field;
        let basis = order.basis_with_one();
        let m: Matrix = basis.iter().map(|b| b.0.to_vec()).collect();
        let inv = inverse(k, &m).ok_or(OrderError::NotAnOrder)?;
        let mut out = ResidueAlgebra {
            rf: prime.residue_field(),
            basis,
            inv,
            table: Vec::new(),
            order: order.clone(),
        };
        let mut table = Vec::with_capacity(4);
        for a in 0..4 {
            let mut row = Vec::with_capacity(4);
            for b in 0..4 {
                let x = order.alg().mul(&out.basis[a], &out.basis[b]);
                row.push(out.reduce(&x)?);
            }
            table.push(row);
        }
        out.table = table;
        Ok(out)
    }

    pub fn q(&self) -> usize {
        self.rf.q()
    }

    pub fn order(&self) -> &Order {
        &self.order
    }

    /// Exact coordinates in the basis.
    pub fn coordinates(&self, x: &QuatElement) -> [FieldScalar; 4] {
        let k = &self.order.alg().field;
        std::array::from_fn(|j| (0..4).fold(FieldScalar::zero(), |acc, t| &acc + &k.mul(&x.0[t], &self.inv[t][j])))
    }

    /// Residue coordinates of a p-integral element.
    pub fn reduce(&self, x: &QuatElement) -> Result<ResVec, OrderError> {
        self.coordinates(x).iter().map(|c| Ok(self.rf.reduce(c)?)).collect()
    }

    pub fn lift(&self, v: &[RingElement]) -> QuatElement {
        let alg = self.order.alg();
        (0..4).fold(QuatElement::zero(), |acc, n| &acc + &alg.scale(&v[n].to_scalar(), &self.basis[n]))
    }

    pub fn mul(&self, x: &[RingElement], y: &[RingElement]) -> ResVec {
        let rf = &self.rf;
        let mut out = vec![RingElement::zero(); 4];
        for a in 0..4 {
            if x[a].is_zero() {
                continue;
            }
            for b in 0..4 {
                if y[b].is_zero() {
                    continue;
                }
                let c = rf.mul(&x[a], &y[b]);
                for t in 0..4 {
                    if !self.table[a][b][t].is_zero() {
                        out[t] = rf.add(&out[t], &rf.mul(&c, &self.table[a][b][t]));
                    }
                }
            }
        }
        out
    }

    pub fn one(&self) -> ResVec {
        vec![RingElement::one(), RingElement::zero(), RingElement::zero(), RingElement::zero()]
    }

    /// Reduced norm of the residue class, via the lift.
    pub fn norm(&self, x: &[RingElement]) -> RingElement {
        let n = self.order.alg().norm(&self.lift(x));
        self.rf.reduce(&n).expect("integral norm")
    }

    pub fn is_unit(&self, x: &[RingElement]) -> bool {
        !self.norm(x).is_zero()
    }

    /// All q^4 residue classes.
    pub fn elements(&self) -> Vec<ResVec> {
        let q = self.q();
        let total = q.pow(4);
        (0..total)
            .map(|mut idx| {
                (0..4)
                    .map(|_| {
                        let r = self.rf.reps[idx % q].clone();
                        idx /= q;
                        r
                    })
                    .collect()
            })
            .collect()
    }

    /// True when the span of `rows` is closed under multiplication.
    pub fn is_subalgebra(&self, rows: &[ResVec]) -> bool {
        let span = rf_rref(&self.rf, rows.to_vec());
        for x in &span {
            for y in &span {
                let mut test = span.clone();
                test.push(self.mul(x, y));
                if rf_rref(&self.rf, test).len() != span.len() {
                    return false;
                }
            }
        }
        true
    }

    pub fn in_span(&self, span: &[ResVec], v: &[RingElement]) -> bool {
        let mut test = span.to_vec();
        test.push(v.to_vec());
        rf_rref(&self.rf, test).len() == rf_rref(&self.rf, span.to_vec()).len()
    }

    /// Global order π·O + lifts of the given residue vectors.
    pub fn lift_suborder(&self, rows: &[ResVec], prime: &PrimeIdeal) -> Result<Order, OrderError> {
        let alg = self.order.alg();
        let pi = prime.pi_scalar();
        let mut gens: Vec<QuatElement> = self.basis.iter().map(|b| alg.scale(&pi, b)).collect();
        gens.extend(rows.iter().map(|r| self.lift(r)));
        Order::from_generators(alg, &gens)
    }
}
