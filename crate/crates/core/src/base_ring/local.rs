use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::field::{FieldScalar, RingElement};
use super::prime::{PrimeIdeal, ResidueField};
use super::BaseRingError;

/// Parameters solved by Hensel lifting for the suborder tables.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ParamTag {
    /// α₀² - α₁² = π
    Alpha,
    /// β₀² + β₁² = δ
    Beta,
    /// μ² = -1
    Mu,
    /// ν² = -δ
    Nu,
    /// dyadic constants μ₁..μ₈
    Dyadic(u8),
}

pub type TableParams = Vec<RingElement>;

/// (c, r) with c·μ_k² = r.
const DYADIC_CONSTANTS: [(i64, i64); 8] = [(1, -7), (3, -13), (25, 1), (9, 1), (3, -5), (1, -15), (3, -29), (3, -533)];

/// Truncated arithmetic in O_p / π^N.
#[derive(Clone, Debug)]
pub struct LocalContext {
    pub prime: PrimeIdeal,
    pub n: u32,
    pub residue: ResidueField,
    /// Fixed non-residue (odd p).
    pub delta: Option<RingElement>,
}

impl LocalContext {
    pub fn new(prime: &PrimeIdeal, n: u32) -> Self {
        let residue = prime.residue_field();
        let delta = if prime.is_dyadic() { None } else { residue.non_residue() };
        LocalContext { prime: prime.clone(), n, residue, delta }
    }

    pub fn with_precision(&self, n: u32) -> Self {
        LocalContext { n, ..self.clone() }
    }

    pub fn delta(&self) -> RingElement {
        self.delta.clone().unwrap_or_else(RingElement::one)
    }

    pub fn reduce(&self, x: &FieldScalar) -> Result<RingElement, BaseRingError> {
        self.prime.reduce(x, self.n)
    }

    pub fn reduce_ring(&self, x: &RingElement) -> RingElement {
        self.prime.reduce(&x.to_scalar(), self.n).expect("ring elements are integral")
    }

    pub fn valuation(&self, x: &FieldScalar) -> Option<i64> {
        self.prime.valuation(x)
    }

    pub fn mul(&self, x: &RingElement, y: &RingElement) -> RingElement {
        self.reduce_ring(&self.prime.field.mul_ring(x, y))
    }

    /// Inverse of a p-adic unit, reduced.
    pub fn inv(&self, x: &FieldScalar) -> Result<RingElement, BaseRingError> {
        if !self.prime.is_unit(x) {
            return Err(BaseRingError::NotIntegral);
        }
        self.reduce(&self.prime.field.inv(x)?)
    }

    /// x ≡ y mod π^N.
    pub fn congruent(&self, x: &FieldScalar, y: &FieldScalar) -> bool {
        let d = x - y;
        d.is_zero() || self.valuation(&d).is_none_or(|v| v >= self.n as i64)
    }

    /// Square root modulo π^N of a square unit.
    pub fn hensel_sqrt(&self, a: &FieldScalar) -> Result<RingElement, BaseRingError> {
        if !self.prime.is_integral(a) {
            return Err(BaseRingError::NotIntegral);
        }
        if self.congruent(a, &FieldScalar::zero()) {
            return Ok(RingElement::zero());
        }
        if !self.prime.is_unit(a) {
            return Err(BaseRingError::NotASquare);
        }
        if self.prime.is_dyadic() {
            self.dyadic_sqrt(a)
        } else {
            self.odd_sqrt(a)
        }
    }

    fn odd_sqrt(&self, a: &FieldScalar) -> Result<RingElement, BaseRingError> {
        let field = &self.prime.field;
        let a0 = self.residue.reduce(a)?;
        let mut x = self.residue.sqrt(&a0).ok_or(BaseRingError::NotASquare)?;
        for _ in 0..64 {
            let xs = x.to_scalar();
            let err = &field.mul(&xs, &xs) - a;
            if self.congruent(&err, &FieldScalar::zero()) {
                return Ok(self.reduce_ring(&x));
            }
            let step = field.div(&err, &xs.scale(&BigRational::from_integer(BigInt::from(2))))?;
            x = self.reduce(&(&xs - &step))?;
        }
        Err(BaseRingError::NotASquare)
    }

    fn dyadic_sqrt(&self, a: &FieldScalar) -> Result<RingElement, BaseRingError> {
        let field = &self.prime.field;
        let start = self.n.min(3);
        let ctx0 = self.with_precision(start);
        let side: i64 = 1 << start;
        let mut sol = None;
        'search: for b in 0..if field.is_rational() { 1 } else { side } {
            for c in 0..side {
                let x = RingElement::new(c, b);
                let xs = x.to_scalar();
                if ctx0.congruent(&field.mul(&xs, &xs), a) {
                    sol = Some(x);
                    break 'search;
                }
            }
        }
        let mut x = sol.ok_or(BaseRingError::NotASquare)?;
        for k in start..self.n {
            // x² ≡ a mod 2^k, lift to 2^(k+1)
            let xs = x.to_scalar();
            let diff = a - &field.mul(&xs, &xs);
            let two_k = BigRational::from_integer(BigInt::from(2).pow(k));
            let quot = field.div(&diff.scale(&two_k.recip()), &xs)?;
            let t = self.prime.reduce(&quot, 1)?;
            let shift = t.scale(&BigInt::from(2).pow(k - 1));
            x = self.reduce_ring(&(&x + &shift));
        }
        // canonical choice among the 2q solutions
        let top = BigInt::from(2).pow(self.n - 1);
        let mut best: Option<RingElement> = None;
        for base in [x.clone(), -x.clone()] {
            for t in &self.residue.reps {
                let cand = self.reduce_ring(&(&base + &t.scale(&top)));
                let cs = cand.to_scalar();
                if !self.congruent(&field.mul(&cs, &cs), a) {
                    continue;
                }
                if best.as_ref().is_none_or(|b| (&cand.b, &cand.a) < (&b.b, &b.a)) {
                    best = Some(cand);
                }
            }
        }
        best.ok_or(BaseRingError::NotASquare)
    }

    /// Solve the defining equation of a table parameter modulo π^N.
    pub fn solve_table_parameters(&self, which: ParamTag) -> Result<TableParams, BaseRingError> {
        let dyadic = self.prime.is_dyadic();
        let floor = if dyadic { 4 } else { 1 };
        if self.n < floor {
            return Err(BaseRingError::PrecisionTooLow(self.n));
        }
        let unavailable = || BaseRingError::ParameterUnavailable(format!("{which:?}"));
        match which {
            ParamTag::Dyadic(k) => {
                if !dyadic || !(1..=8).contains(&k) {
                    return Err(unavailable());
                }
                let (c, r) = DYADIC_CONSTANTS[(k - 1) as usize];
                let target = FieldScalar::from_rat(BigRational::new(BigInt::from(r), BigInt::from(c)));
                Ok(vec![self.hensel_sqrt(&target)?])
            }
            _ if dyadic => Err(unavailable()),
            ParamTag::Alpha => {
                let a1 = self.reduce_ring(&RingElement::from_int(-1));
                let target = &self.prime.pi_scalar() + &FieldScalar::one();
                let mut a0 = self.hensel_sqrt(&target)?;
                if self.residue.reduce_ring(&a0) != self.residue.reduce_ring(&a1) {
                    a0 = self.reduce_ring(&-a0);
                }
                Ok(vec![a0, a1])
            }
            ParamTag::Beta => {
                let field = &self.prime.field;
                let delta = self.delta();
                for b1 in &self.residue.reps {
                    let rest = &delta - &field.mul_ring(b1, b1);
                    let r0 = self.residue.reduce_ring(&rest);
                    if r0.is_zero() || !self.residue.is_square(&r0) {
                        continue;
                    }
                    let b0 = self.hensel_sqrt(&rest.to_scalar())?;
                    return Ok(vec![b0, b1.clone()]);
                }
                Err(unavailable())
            }
            ParamTag::Mu => {
                let t = FieldScalar::from_int(-1);
                if !self.residue.is_square(&self.residue.reduce(&t)?) {
                    return Err(unavailable());
                }
                Ok(vec![self.hensel_sqrt(&t)?])
            }
            ParamTag::Nu => {
                let t = -self.delta().to_scalar();
                if !self.residue.is_square(&self.residue.reduce(&t)?) {
                    return Err(unavailable());
                }
                Ok(vec![self.hensel_sqrt(&t)?])
            }
        }
    }

    /// Residue of a p-integral element, as its representative.
    pub fn residue_of(&self, x: &FieldScalar) -> Result<RingElement, BaseRingError> {
        self.residue.reduce(x)
    }

    pub fn is_zero_mod(&self, x: &FieldScalar) -> bool {
        self.congruent(x, &FieldScalar::zero())
    }
}
