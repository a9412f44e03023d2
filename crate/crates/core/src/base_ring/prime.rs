use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::field::{vp_int, BaseField, FieldScalar, RingElement};
use super::BaseRingError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Splitting {
    Inert,
    Ramified,
    Split,
}

/// Prime ideal of O with a fixed uniformizer.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PrimeIdeal {
    #[serde(skip)]
    pub field: BaseField,
    pub p: u64,
    pub e_ram: u32,
    pub f: u32,
    pub splitting: Splitting,
    pub pi: RingElement,
    /// ω ≡ root mod π (split and ramified primes).
    #[serde(skip)]
    root: Option<BigInt>,
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut i = 2;
    while i * i <= p {
        if p.is_multiple_of(i) {
            return false;
        }
        i += 1;
    }
    true
}

/// Primes of O above the rational prime p.
pub fn factor_prime(field: &BaseField, p: u64) -> Result<Vec<PrimeIdeal>, BaseRingError> {
    if !is_prime(p) {
        return Err(BaseRingError::NotPrime(p));
    }
    let pi_int = RingElement::from_int(p);
    if field.is_rational() {
        return Ok(vec![PrimeIdeal {
            field: field.clone(),
            p,
            e_ram: 1,
            f: 1,
            splitting: Splitting::Inert,
            pi: pi_int,
            root: None,
        }]);
    }
    let (t, m) = field.omega_relation();
    let pb = BigInt::from(p);
    let roots: Vec<BigInt> = (0..p)
        .map(BigInt::from)
        .filter(|r| (r * r - &t * r - &m).mod_floor(&pb).is_zero())
        .collect();
    let make = |splitting, e_ram, f, pi: RingElement, root: Option<BigInt>| PrimeIdeal {
        field: field.clone(),
        p,
        e_ram,
        f,
        splitting,
        pi,
        root,
    };
    match roots.len() {
        0 => Ok(vec![make(Splitting::Inert, 1, 2, pi_int, None)]),
        1 => {
            if p == 2 {
                return Err(BaseRingError::UnsupportedPrime);
            }
            Ok(vec![make(Splitting::Ramified, 2, 1, field.sqrt_d(), Some(roots[0].clone()))])
        }
        _ => {
            if p == 2 {
                return Err(BaseRingError::UnsupportedPrime);
            }
            let mut out = Vec::new();
            for r in roots {
                let g = field.gcd(&pi_int, &RingElement { a: -&r, b: BigInt::one() })?;
                out.push(make(Splitting::Split, 1, 1, g, Some(r)));
            }
            Ok(out)
        }
    }
}

impl PrimeIdeal {
    pub fn q(&self) -> u64 {
        self.p.pow(self.f)
    }

    pub fn is_dyadic(&self) -> bool {
        self.p == 2
    }

    pub fn pi_scalar(&self) -> FieldScalar {
        self.pi.to_scalar()
    }

    pub fn pi_pow(&self, n: u32) -> RingElement {
        self.field.pow_ring(&self.pi, n)
    }

    /// Lift of the root of X² - tX - m modulo p^k matching ω mod π.
    fn root_mod(&self, k: u32) -> BigInt {
        let (t, m) = self.field.omega_relation();
        let pk = BigInt::from(self.p).pow(k);
        let mut r = self.root.clone().expect("split prime has a root");
        // Newton on X² - tX - m, derivative 2X - t is a unit for split primes
        for _ in 0..=k.max(1).ilog2() + 2 {
            let fval = &r * &r - &t * &r - &m;
            let der = (BigInt::from(2) * &r - &t).mod_floor(&pk);
            let inv = mod_inverse(&der, &pk).expect("simple root");
            r = (&r - fval * inv).mod_floor(&pk);
        }
        r
    }

    /// Valuation at this prime; None for zero.
    pub fn valuation(&self, x: &FieldScalar) -> Option<i64> {
        if x.is_zero() {
            return None;
        }
        let den = x.denominator();
        let y = x.scale_int(&den).to_ring().expect("cleared denominators");
        let vd = vp_int(&den, self.p) * self.e_ram as i64;
        Some(self.valuation_ring(&y) - vd)
    }

    pub fn valuation_ring(&self, y: &RingElement) -> i64 {
        assert!(!y.is_zero());
        let field = &self.field;
        if field.is_rational() {
            return vp_int(&y.a, self.p);
        }
        match self.splitting {
            Splitting::Inert => {
                let va = if y.a.is_zero() { i64::MAX } else { vp_int(&y.a, self.p) };
                let vb = if y.b.is_zero() { i64::MAX } else { vp_int(&y.b, self.p) };
                va.min(vb)
            }
            Splitting::Ramified => vp_int(&field.norm_int(y), self.p),
            Splitting::Split => {
                let bound = vp_int(&field.norm_int(y), self.p) as u32 + 1;
                let r = self.root_mod(bound);
                let img = &y.a + &y.b * r;
                if img.is_zero() {
                    return bound as i64;
                }
                vp_int(&img, self.p).min(bound as i64)
            }
        }
    }

    pub fn is_integral(&self, x: &FieldScalar) -> bool {
        self.valuation(x).is_none_or(|v| v >= 0)
    }

    pub fn is_unit(&self, x: &FieldScalar) -> bool {
        self.valuation(x) == Some(0)
    }

    /// Canonical representative in O of x mod π^n; x must be integral here.
    pub fn reduce(&self, x: &FieldScalar, n: u32) -> Result<RingElement, BaseRingError> {
        if x.is_zero() {
            return Ok(RingElement::zero());
        }
        if !self.is_integral(x) {
            return Err(BaseRingError::NotIntegral);
        }
        let modulus = self.pi_pow(n);
        if n == 0 {
            return Ok(RingElement::zero());
        }
        let den = x.denominator();
        let y = x.scale_int(&den).to_ring().expect("cleared denominators");
        let vd = vp_int(&den, self.p) as u32;
        let pb = BigInt::from(self.p);
        let dprime = &den / pb.pow(vd);
        let pn = pb.pow(n);
        let inv = mod_inverse(&dprime.mod_floor(&pn), &pn).expect("coprime to p");
        let lifted = match self.splitting {
            Splitting::Split if !self.field.is_rational() => {
                let pk = pb.pow(n + vd);
                let r = self.root_mod(n + vd);
                let img = (&y.a + &y.b * r).mod_floor(&pk);
                let pv = pb.pow(vd);
                debug_assert!((&img % &pv).is_zero());
                RingElement::from_int(((img / pv) * inv).mod_floor(&pn))
            }
            _ => {
                debug_assert!(vd == 0 || self.field.is_rational());
                if self.field.is_rational() {
                    let pv = pb.pow(vd);
                    RingElement::from_int(((&y.a / pv) * inv).mod_floor(&pn))
                } else {
                    RingElement { a: (&y.a * &inv).mod_floor(&pn), b: (&y.b * &inv).mod_floor(&pn) }
                }
            }
        };
        Ok(self.field.rem_canonical(&lifted, &modulus))
    }

    pub fn residue_field(&self) -> ResidueField {
        ResidueField::new(self.clone())
    }
}

pub fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.extended_gcd(m);
    if e.gcd.abs().is_one() {
        Some((e.x * e.gcd.signum()).mod_floor(m))
    } else {
        None
    }
}

/// Residue field O/π with an ordered list of representatives.
#[derive(Clone, Debug)]
pub struct ResidueField {
    pub prime: PrimeIdeal,
    pub reps: Vec<RingElement>,
}

impl ResidueField {
    fn new(prime: PrimeIdeal) -> Self {
        let field = &prime.field;
        let mut all: Vec<RingElement> = if field.is_rational() {
            (0..prime.p).map(RingElement::from_int).collect()
        } else {
            let (n, m, k) = field.ideal_zhnf(&prime.pi);
            let _ = m;
            let n = n.to_u64().expect("small residue field");
            let k = k.to_u64().expect("small residue field");
            let mut v = Vec::new();
            for b in 0..k {
                for a in 0..n {
                    v.push(field.rem_canonical(&RingElement::new(a, b), &prime.pi));
                }
            }
            v
        };
        all.sort_by(|x, y| (&x.b, &x.a).cmp(&(&y.b, &y.a)));
        all.dedup();
        let one = RingElement::one();
        let zero = RingElement::zero();
        let rest: Vec<RingElement> = all.iter().filter(|x| **x != one && **x != zero).cloned().collect();
        let mut reps = vec![one];
        if prime.is_dyadic() {
            reps.push(zero);
            let (roots, others): (Vec<_>, Vec<_>) = rest.into_iter().partition(|x| {
                prime.f.is_multiple_of(2) && {
                    let v = field.mul_ring(x, x) + x.clone() + RingElement::one();
                    field.rem_canonical(&v, &prime.pi).is_zero()
                }
            });
            reps.extend(others);
            reps.extend(roots);
        } else {
            let minus_one = field.rem_canonical(&RingElement::from_int(-1), &prime.pi);
            reps.push(minus_one.clone());
            reps.extend(rest.into_iter().filter(|x| *x != minus_one));
            reps.push(zero);
        }
        ResidueField { prime, reps }
    }

    pub fn q(&self) -> usize {
        self.reps.len()
    }

    pub fn reduce_ring(&self, x: &RingElement) -> RingElement {
        self.prime.field.rem_canonical(x, &self.prime.pi)
    }

    pub fn reduce(&self, x: &FieldScalar) -> Result<RingElement, BaseRingError> {
        self.prime.reduce(x, 1)
    }

    pub fn add(&self, x: &RingElement, y: &RingElement) -> RingElement {
        self.reduce_ring(&(x + y))
    }

    pub fn sub(&self, x: &RingElement, y: &RingElement) -> RingElement {
        self.reduce_ring(&(x - y))
    }

    pub fn mul(&self, x: &RingElement, y: &RingElement) -> RingElement {
        self.reduce_ring(&self.prime.field.mul_ring(x, y))
    }

    pub fn neg(&self, x: &RingElement) -> RingElement {
        self.reduce_ring(&-x)
    }

    pub fn inv(&self, x: &RingElement) -> Option<RingElement> {
        let x = self.reduce_ring(x);
        self.reps.iter().find(|r| self.mul(&x, r) == RingElement::one()).cloned()
    }

    pub fn is_square(&self, x: &RingElement) -> bool {
        let x = self.reduce_ring(x);
        self.reps.iter().any(|r| self.mul(r, r) == x)
    }

    /// First representative (in list order) whose square is x.
    pub fn sqrt(&self, x: &RingElement) -> Option<RingElement> {
        let x = self.reduce_ring(x);
        self.reps.iter().find(|r| self.mul(r, r) == x).cloned()
    }

    /// Index of the residue class of x in the representative list.
    pub fn index_of(&self, x: &RingElement) -> usize {
        let x = self.reduce_ring(x);
        self.reps.iter().position(|r| *r == x).expect("representatives cover k")
    }

    /// First non-square representative (odd p).
    pub fn non_residue(&self) -> Option<RingElement> {
        self.reps.iter().find(|r| !r.is_zero() && !self.is_square(r)).cloned()
    }
}
