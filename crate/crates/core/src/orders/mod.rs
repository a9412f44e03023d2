//! Local classification of Bass orders and construction of maximal suborders.

mod chain;
mod classify;
mod quasigood;
mod residue;
mod search;
mod tables;

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::base_ring::{BaseRingError, FieldScalar, PrimeIdeal, RingElement};
use crate::lattice::{Lattice, LatticeError};
use crate::quaternion::{Algebra, QuatElement};

pub use chain::{beneath, children, default_genus, suborder_chain, suborder_chain_by, ChainStep, GenusSpec};
pub use classify::{classify_local_order, local_form, ternary_form};
pub use quasigood::{certified_precision, odd_form_entries, quasi_good_basis, table_residuals, QuasiGoodBasis};
pub use residue::ResidueAlgebra;
pub use search::{maximal_suborder, maximal_suborder_by, maximal_suborders, SuborderMethod};
pub use tables::{substitute, table_suborder, templates, SuborderTemplate, Sym};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OrderError {
    #[error("lattice is not an order")]
    NotAnOrder,
    #[error("no table row matches: {0}")]
    NotBass(String),
    #[error("prime 2 is only supported when inert")]
    UnsupportedPrime,
    #[error("{target} is not beneath {source_class}")]
    NotBeneath { source_class: String, target: String },
    #[error("parameter failure: {0}")]
    ParameterFailure(String),
    #[error("diagonalization failed")]
    DiagonalizationFailed,
    #[error("determinant mismatch")]
    DeterminantMismatch,
    #[error("target unreachable: {0}")]
    Unreachable(String),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Base(#[from] BaseRingError),
}

/// Square class of a unit at an odd prime.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Eps {
    One,
    Delta,
}

impl Eps {
    pub fn flip(self) -> Eps {
        match self {
            Eps::One => Eps::Delta,
            Eps::Delta => Eps::One,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Kind {
    A1,
    A2,
    B,
    C,
    D,
    E,
    F,
    G,
}

/// Row of the ternary form classification at one prime.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LocalFormClass {
    pub kind: Kind,
    pub s: u32,
    pub dyadic: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps1: Option<Eps>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps2: Option<Eps>,
    /// δ₁ ∈ {1,3} or δ₂ ∈ {1,5} for diagonal dyadic rows.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unit: Option<u8>,
}

impl LocalFormClass {
    fn odd(kind: Kind, s: u32, eps1: Option<Eps>, eps2: Option<Eps>) -> Self {
        LocalFormClass { kind, s, dyadic: false, eps1, eps2, unit: None }
    }

    pub fn a1(s: u32, dyadic: bool) -> Self {
        LocalFormClass { kind: Kind::A1, s, dyadic, eps1: None, eps2: None, unit: None }
    }

    pub fn a2(s: u32, dyadic: bool) -> Self {
        LocalFormClass { kind: Kind::A2, s, dyadic, eps1: None, eps2: None, unit: None }
    }

    pub fn b(eps1: Eps) -> Self {
        Self::odd(Kind::B, 1, Some(eps1), None)
    }

    pub fn c(s: u32, eps1: Eps, eps2: Eps) -> Self {
        Self::odd(Kind::C, s, Some(eps1), Some(eps2))
    }

    pub fn dyadic_diagonal(kind: Kind, s: u32, unit: u8) -> Self {
        LocalFormClass { kind, s, dyadic: true, eps1: None, eps2: None, unit: Some(unit) }
    }

    /// Default class at primes not dividing the discriminant.
    pub fn maximal(prime: &PrimeIdeal) -> Self {
        Self::a1(0, prime.is_dyadic())
    }

    pub fn label(&self) -> String {
        format!("{:?}", self.kind)
    }

    /// Valuation of the reduced discriminant.
    pub fn disc_valuation(&self) -> u32 {
        match (self.dyadic, self.kind) {
            (_, Kind::A1 | Kind::A2) => self.s,
            (false, Kind::B) => 2,
            (false, _) => self.s + 1,
            // ⟨1, u, δ2^s⟩ with v(u) ∈ {0, 1}
            (true, Kind::B) => self.s + 1,
            (true, Kind::D) => self.s + 1,
            (true, _) => self.s + 2,
        }
    }

    /// Sign of the local algebra: +1 matrix, -1 division.
    pub fn hilbert_sign(&self, prime: &PrimeIdeal) -> Option<i32> {
        let pow = |s: u32| if s.is_multiple_of(2) { 1 } else { -1 };
        if self.dyadic {
            let u = self.unit;
            return Some(match self.kind {
                Kind::A1 => 1,
                Kind::A2 => pow(self.s),
                Kind::B => if u? == 1 { -1 } else { 1 },
                Kind::C => if u? == 1 { pow(self.s) } else { pow(self.s + 1) },
                Kind::D => if u? == 1 { pow(self.s + 1) } else { pow(self.s) },
                Kind::E => if u? == 1 { -1 } else { 1 },
                Kind::F => if u? == 1 { 1 } else { -1 },
                Kind::G => if u? == 1 { pow(self.s + 1) } else { pow(self.s) },
            });
        }
        let rf = prime.residue_field();
        let minus_one = if rf.is_square(&rf.neg(&RingElement::one())) { 1 } else { -1 };
        let leg = |e: Eps| match e {
            Eps::One => 1,
            Eps::Delta => -1,
        };
        match self.kind {
            Kind::A1 => Some(1),
            Kind::A2 => Some(pow(self.s)),
            Kind::B => Some(minus_one * leg(self.eps1?)),
            Kind::C => {
                let e1 = leg(self.eps1?);
                Some(if self.s.is_multiple_of(2) { 1 } else { e1 } * minus_one * leg(self.eps2?))
            }
            _ => None,
        }
    }

    /// Parameter ranges of the classification tables.
    pub fn is_valid(&self) -> bool {
        if self.dyadic {
            let unit_ok = |set: &[u8]| self.unit.is_some_and(|u| set.contains(&u));
            return match self.kind {
                Kind::A1 => true,
                Kind::A2 => self.s >= 1,
                Kind::B => unit_ok(&[1, 3]),
                Kind::C => self.s >= 1 && unit_ok(&[1, 3]),
                Kind::D => self.s >= 3 && unit_ok(&[1, 3]),
                Kind::E => self.s >= 3 && unit_ok(&[1, 5]),
                Kind::F | Kind::G => self.s >= 4 && unit_ok(&[1, 5]),
            };
        }
        match self.kind {
            Kind::A1 => self.eps1.is_none() && self.eps2.is_none(),
            Kind::A2 => self.s >= 1,
            Kind::B => self.s == 1 && self.eps1.is_some(),
            Kind::C => self.s >= 2 && self.eps1.is_some() && self.eps2.is_some(),
            _ => false,
        }
    }
}

impl fmt::Display for LocalFormClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let e = |x: Eps| if x == Eps::One { "1" } else { "δ" };
        match (self.dyadic, self.kind) {
            (_, Kind::A1) => write!(f, "A1 s={}", self.s),
            (_, Kind::A2) => write!(f, "A2 s={}", self.s),
            (false, Kind::B) => write!(f, "B ε1={}", e(self.eps1.unwrap_or(Eps::One))),
            (false, _) => write!(
                f,
                "{:?} s={} ε1={} ε2={}",
                self.kind,
                self.s,
                e(self.eps1.unwrap_or(Eps::One)),
                e(self.eps2.unwrap_or(Eps::One))
            ),
            (true, _) => write!(f, "{:?} s={} u={}", self.kind, self.s, self.unit.unwrap_or(1)),
        }
    }
}

/// Order together with its reduced discriminant.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Order {
    pub lattice: Lattice,
    discriminant: RingElement,
}

impl Order {
    pub fn new(lattice: Lattice) -> Result<Self, OrderError> {
        if !lattice.is_order() {
            return Err(OrderError::NotAnOrder);
        }
        let d = lattice.discriminant().ok_or(OrderError::NotAnOrder)?;
        let discriminant = lattice.field().canonical_ring(&d);
        Ok(Order { lattice, discriminant })
    }

    pub fn from_generators(alg: &Arc<Algebra>, gens: &[QuatElement]) -> Result<Self, OrderError> {
        Order::new(Lattice::from_generators(alg, gens)?)
    }

    /// The ring O[gens]: the span of 1 and the generators closed under products.
    pub fn generated_by(alg: &Arc<Algebra>, gens: &[QuatElement]) -> Result<Self, OrderError> {
        let mut base = vec![QuatElement::one()];
        base.extend(gens.iter().cloned());
        let mut all = base.clone();
        for x in &base {
            for y in &base {
                all.push(alg.mul(x, y));
            }
        }
        let mut lat = Lattice::from_generators(alg, &all)?;
        for _ in 0..64 {
            let next = lat.sum(&lat.product(&lat));
            if next == lat {
                return Order::new(lat);
            }
            lat = next;
        }
        Err(OrderError::NotAnOrder)
    }

    pub fn alg(&self) -> &Arc<Algebra> {
        &self.lattice.alg
    }

    pub fn discriminant(&self) -> &RingElement {
        &self.discriminant
    }

    /// Basis {1, x1, x2, x3}.
    pub fn basis_with_one(&self) -> [QuatElement; 4] {
        let b = self.lattice.basis_scalar_last();
        debug_assert!(b[3] == QuatElement::one());
        [b[3].clone(), b[0].clone(), b[1].clone(), b[2].clone()]
    }

    pub fn contains(&self, x: &QuatElement) -> bool {
        self.lattice.contains(x)
    }

    pub fn disc_valuation(&self, prime: &PrimeIdeal) -> u32 {
        prime.valuation(&self.discriminant.to_scalar()).unwrap_or(0) as u32
    }

    pub fn classify(&self, prime: &PrimeIdeal) -> Result<LocalFormClass, OrderError> {
        classify_local_order(self, prime)
    }

    /// Index [self : sub] as a normalized generator.
    pub fn index_of(&self, sub: &Order) -> Result<RingElement, OrderError> {
        Ok(sub.lattice.index_in(&self.lattice)?)
    }

    pub fn scalar_multiple(&self, s: &FieldScalar) -> Lattice {
        self.lattice.scale(s)
    }
}
