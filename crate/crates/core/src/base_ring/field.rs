use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::BaseRingError;

/// Norm-Euclidean real quadratic fields accepted by [`BaseField::quadratic`].
pub const NORM_EUCLIDEAN: [u64; 16] = [2, 3, 5, 6, 7, 11, 13, 17, 19, 21, 29, 33, 37, 41, 57, 73];

pub fn int(n: i64) -> BigInt {
    BigInt::from(n)
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: &BigInt) -> BigRational {
    BigRational::from_integer(n.clone())
}

/// p-adic valuation of a nonzero integer.
pub fn vp_int(n: &BigInt, p: u64) -> i64 {
    debug_assert!(!n.is_zero());
    let p = BigInt::from(p);
    let mut n = n.clone();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return v;
        }
        n = q;
        v += 1;
    }
}

pub fn vp_rat(x: &BigRational, p: u64) -> Option<i64> {
    if x.is_zero() {
        return None;
    }
    Some(vp_int(x.numer(), p) - vp_int(x.denom(), p))
}

/// Exact square root of a nonnegative rational, if it is a square.
pub fn rat_sqrt(x: &BigRational) -> Option<BigRational> {
    if x.is_negative() {
        return None;
    }
    let n = x.numer().sqrt();
    let d = x.denom().sqrt();
    if &(&n * &n) == x.numer() && &(&d * &d) == x.denom() {
        Some(BigRational::new(n, d))
    } else {
        None
    }
}

/// Element a + bω of the ring of integers.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RingElement {
    pub a: BigInt,
    pub b: BigInt,
}

/// Element a + bω of the field, coordinates in lowest terms.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FieldScalar {
    pub a: BigRational,
    pub b: BigRational,
}

impl RingElement {
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>) -> Self {
        RingElement { a: a.into(), b: b.into() }
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        RingElement { a: n.into(), b: BigInt::zero() }
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn to_scalar(&self) -> FieldScalar {
        FieldScalar { a: rat_int(&self.a), b: rat_int(&self.b) }
    }

    pub fn scale(&self, n: &BigInt) -> Self {
        RingElement { a: &self.a * n, b: &self.b * n }
    }
}

impl FieldScalar {
    pub fn new(a: BigRational, b: BigRational) -> Self {
        FieldScalar { a, b }
    }

    pub fn from_int(n: i64) -> Self {
        FieldScalar { a: rat(n, 1), b: BigRational::zero() }
    }

    pub fn from_rat(r: BigRational) -> Self {
        FieldScalar { a: r, b: BigRational::zero() }
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.a.is_one() && self.b.is_zero()
    }

    pub fn is_integral(&self) -> bool {
        self.a.is_integer() && self.b.is_integer()
    }

    /// Least positive integer D with D·x integral.
    pub fn denominator(&self) -> BigInt {
        self.a.denom().lcm(self.b.denom())
    }

    pub fn to_ring(&self) -> Option<RingElement> {
        if self.is_integral() {
            Some(RingElement { a: self.a.to_integer(), b: self.b.to_integer() })
        } else {
            None
        }
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        FieldScalar { a: &self.a * r, b: &self.b * r }
    }

    pub fn scale_int(&self, n: &BigInt) -> Self {
        self.scale(&rat_int(n))
    }
}

macro_rules! additive {
    ($t:ty) => {
        impl Add for $t {
            type Output = $t;
            fn add(self, o: $t) -> $t {
                Self { a: self.a + o.a, b: self.b + o.b }
            }
        }
        impl<'a> Add<&'a $t> for &'a $t {
            type Output = $t;
            fn add(self, o: &$t) -> $t {
                <$t>::from_parts(&self.a + &o.a, &self.b + &o.b)
            }
        }
        impl Sub for $t {
            type Output = $t;
            fn sub(self, o: $t) -> $t {
                Self { a: self.a - o.a, b: self.b - o.b }
            }
        }
        impl<'a> Sub<&'a $t> for &'a $t {
            type Output = $t;
            fn sub(self, o: &$t) -> $t {
                <$t>::from_parts(&self.a - &o.a, &self.b - &o.b)
            }
        }
        impl Neg for $t {
            type Output = $t;
            fn neg(self) -> $t {
                Self { a: -self.a, b: -self.b }
            }
        }
        impl<'a> Neg for &'a $t {
            type Output = $t;
            fn neg(self) -> $t {
                <$t>::from_parts(-&self.a, -&self.b)
            }
        }
    };
}

impl RingElement {
    fn from_parts(a: BigInt, b: BigInt) -> Self {
        RingElement { a, b }
    }
}

impl FieldScalar {
    fn from_parts(a: BigRational, b: BigRational) -> Self {
        FieldScalar { a, b }
    }
}

additive!(RingElement);
additive!(FieldScalar);

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.a, self.b)
    }
}

impl fmt::Display for FieldScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            write!(f, "{}", self.a)
        } else if self.a.is_zero() {
            write!(f, "({})w", self.b)
        } else {
            write!(f, "{}+({})w", self.a, self.b)
        }
    }
}

pub fn rat_to_string(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn rat_from_str(s: &str) -> Option<BigRational> {
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s.trim(), "1"),
    };
    let n: BigInt = n.parse().ok()?;
    let d: BigInt = d.parse().ok()?;
    if d.is_zero() {
        return None;
    }
    Some(BigRational::new(n, d))
}

fn int_to_json(n: &BigInt) -> serde_json::Value {
    match n.to_i64() {
        Some(v) => serde_json::Value::from(v),
        None => serde_json::Value::String(n.to_string()),
    }
}

fn int_from_json(v: &serde_json::Value) -> Option<BigInt> {
    match v {
        serde_json::Value::Number(n) => n.as_i64().map(BigInt::from),
        serde_json::Value::String(s) => s.parse().ok(),
        _ => None,
    }
}

impl Serialize for RingElement {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        serde_json::Value::Array(vec![int_to_json(&self.a), int_to_json(&self.b)]).serialize(s)
    }
}

impl<'de> Deserialize<'de> for RingElement {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        let arr = v.as_array().filter(|a| a.len() == 2);
        let parsed = arr.and_then(|a| Some(RingElement { a: int_from_json(&a[0])?, b: int_from_json(&a[1])? }));
        parsed.ok_or_else(|| serde::de::Error::custom("expected [a, b] integer pair"))
    }
}

impl Serialize for FieldScalar {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        [rat_to_string(&self.a), rat_to_string(&self.b)].serialize(s)
    }
}

impl<'de> Deserialize<'de> for FieldScalar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v: [String; 2] = Deserialize::deserialize(d)?;
        match (rat_from_str(&v[0]), rat_from_str(&v[1])) {
            (Some(a), Some(b)) => Ok(FieldScalar { a, b }),
            _ => Err(serde::de::Error::custom("expected [\"num/den\", \"num/den\"]")),
        }
    }
}

/// ℚ (d = 1) or ℚ(√d) with ω² = tω + m.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BaseField {
    pub d: u64,
    t: BigInt,
    m: BigInt,
    pub narrow_class_one: bool,
    unit: RingElement,
    unit_inv: RingElement,
    unit_norm: i64,
}

impl Serialize for BaseField {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.d.serialize(s)
    }
}

impl BaseField {
    pub fn rational() -> Self {
        BaseField {
            d: 1,
            t: BigInt::zero(),
            m: BigInt::zero(),
            narrow_class_one: true,
            unit: RingElement::from_int(-1),
            unit_inv: RingElement::from_int(-1),
            unit_norm: 1,
        }
    }

    pub fn quadratic(d: u64) -> Result<Self, BaseRingError> {
        if d == 1 {
            return Ok(Self::rational());
        }
        if !NORM_EUCLIDEAN.contains(&d) {
            return Err(BaseRingError::UnsupportedField(d));
        }
        let (t, m) = if d % 4 == 1 { (int(1), BigInt::from((d - 1) / 4)) } else { (int(0), BigInt::from(d)) };
        let mut k = BaseField {
            d,
            t,
            m,
            narrow_class_one: false,
            unit: RingElement::one(),
            unit_inv: RingElement::one(),
            unit_norm: 1,
        };
        let eps = k.find_fundamental_unit();
        let n = k.norm(&eps.to_scalar()).a.to_integer().to_i64().unwrap_or(1);
        k.unit_inv = k.mul_ring(&k.conj_ring(&eps), &RingElement::from_int(n));
        k.unit = eps;
        k.unit_norm = n;
        k.narrow_class_one = n == -1;
        Ok(k)
    }

    pub fn from_d(d: u64) -> Result<Self, BaseRingError> {
        Self::quadratic(d)
    }

    pub fn is_rational(&self) -> bool {
        self.d == 1
    }

    pub fn degree(&self) -> u32 {
        if self.is_rational() {
            1
        } else {
            2
        }
    }

    /// ω² = t·ω + m.
    pub fn omega_relation(&self) -> (BigInt, BigInt) {
        (self.t.clone(), self.m.clone())
    }

    pub fn fundamental_unit(&self) -> &RingElement {
        &self.unit
    }

    pub fn fundamental_unit_norm(&self) -> i64 {
        self.unit_norm
    }

    fn find_fundamental_unit(&self) -> RingElement {
        // x² - d·y² = ±4 (d ≡ 1 mod 4) or ±1 with a + bω, smallest b > 0
        let d = BigInt::from(self.d);
        let four = self.d % 4 == 1;
        let c = if four { int(4) } else { int(1) };
        let mut y = BigInt::one();
        loop {
            for s in [-1i64, 1] {
                let rhs = &d * &y * &y + &c * s;
                if rhs.is_negative() {
                    continue;
                }
                let x = rhs.sqrt();
                if &x * &x == rhs {
                    let e = if four {
                        if !(&x - &y).is_even() {
                            continue;
                        }
                        RingElement { a: (&x - &y) / 2, b: y.clone() }
                    } else {
                        RingElement { a: x.clone(), b: y.clone() }
                    };
                    return e;
                }
            }
            y += 1;
        }
    }

    pub fn mul(&self, x: &FieldScalar, y: &FieldScalar) -> FieldScalar {
        let bb = &x.b * &y.b;
        FieldScalar {
            a: &x.a * &y.a + &bb * rat_int(&self.m),
            b: &x.a * &y.b + &x.b * &y.a + &bb * rat_int(&self.t),
        }
    }

    pub fn mul_ring(&self, x: &RingElement, y: &RingElement) -> RingElement {
        let bb = &x.b * &y.b;
        RingElement { a: &x.a * &y.a + &bb * &self.m, b: &x.a * &y.b + &x.b * &y.a + &bb * &self.t }
    }

    pub fn conj(&self, x: &FieldScalar) -> FieldScalar {
        FieldScalar { a: &x.a + &x.b * rat_int(&self.t), b: -&x.b }
    }

    pub fn conj_ring(&self, x: &RingElement) -> RingElement {
        RingElement { a: &x.a + &x.b * &self.t, b: -&x.b }
    }

    /// Field norm as a scalar with zero ω-part.
    pub fn norm(&self, x: &FieldScalar) -> FieldScalar {
        FieldScalar::from_rat(self.norm_rat(x))
    }

    pub fn norm_rat(&self, x: &FieldScalar) -> BigRational {
        &x.a * &x.a + &x.a * &x.b * rat_int(&self.t) - &x.b * &x.b * rat_int(&self.m)
    }

    pub fn norm_int(&self, x: &RingElement) -> BigInt {
        &x.a * &x.a + &x.a * &x.b * &self.t - &x.b * &x.b * &self.m
    }

    /// Trace down to ℚ.
    pub fn trace_rat(&self, x: &FieldScalar) -> BigRational {
        if self.is_rational() {
            x.a.clone()
        } else {
            &x.a * rat(2, 1) + &x.b * rat_int(&self.t)
        }
    }

    pub fn inv(&self, x: &FieldScalar) -> Result<FieldScalar, BaseRingError> {
        if x.is_zero() {
            return Err(BaseRingError::DivisionByZero);
        }
        let n = self.norm_rat(x);
        Ok(self.conj(x).scale(&n.recip()))
    }

    pub fn div(&self, x: &FieldScalar, y: &FieldScalar) -> Result<FieldScalar, BaseRingError> {
        Ok(self.mul(x, &self.inv(y)?))
    }

    pub fn pow(&self, x: &FieldScalar, e: u32) -> FieldScalar {
        let mut r = FieldScalar::one();
        for _ in 0..e {
            r = self.mul(&r, x);
        }
        r
    }

    pub fn pow_ring(&self, x: &RingElement, e: u32) -> RingElement {
        let mut r = RingElement::one();
        for _ in 0..e {
            r = self.mul_ring(&r, x);
        }
        r
    }

    /// Coordinates (u, v) with x = u + v√d.
    pub fn sqrt_d_coords(&self, x: &FieldScalar) -> (BigRational, BigRational) {
        if self.d % 4 == 1 && !self.is_rational() {
            let half = &x.b * rat(1, 2);
            (&x.a + &half, half)
        } else {
            (x.a.clone(), x.b.clone())
        }
    }

    pub fn from_sqrt_d_coords(&self, u: &BigRational, v: &BigRational) -> FieldScalar {
        if self.d % 4 == 1 && !self.is_rational() {
            FieldScalar { a: u - v, b: v * rat(2, 1) }
        } else {
            FieldScalar { a: u.clone(), b: v.clone() }
        }
    }

    /// Element √d (ω coordinates).
    pub fn sqrt_d(&self) -> RingElement {
        if self.d % 4 == 1 {
            RingElement::new(-1, 2)
        } else {
            RingElement::new(0, 1)
        }
    }

    /// Signs of the two real embeddings (first uses +√d).
    pub fn signs(&self, x: &FieldScalar) -> (i32, i32) {
        let (u, v) = self.sqrt_d_coords(x);
        (self.sign_embedding(&u, &v), self.sign_embedding(&u, &(-&v)))
    }

    fn sign_embedding(&self, u: &BigRational, v: &BigRational) -> i32 {
        let su = sgn(u);
        let sv = sgn(v);
        if sv == 0 || su == sv {
            return if su != 0 { su } else { sv };
        }
        if su == 0 {
            return sv;
        }
        let lhs = u * u;
        let rhs = v * v * rat(self.d as i64, 1);
        match lhs.cmp(&rhs) {
            Ordering::Greater => su,
            Ordering::Less => sv,
            Ordering::Equal => 0,
        }
    }

    pub fn is_totally_positive(&self, x: &FieldScalar) -> bool {
        let (s1, s2) = self.signs(x);
        if self.is_rational() {
            s1 > 0
        } else {
            s1 > 0 && s2 > 0
        }
    }

    /// Sign of |σ1(x)| - |σ2(x)|.
    fn embedding_balance(&self, x: &FieldScalar) -> i32 {
        let (u, v) = self.sqrt_d_coords(x);
        sgn(&u) * sgn(&v)
    }

    /// Canonical associate of x under the unit group.
    pub fn canonical(&self, x: &FieldScalar) -> FieldScalar {
        self.canonical_with_unit(x).0
    }

    /// Returns (canonical associate, unit u with u·x = associate).
    pub fn canonical_with_unit(&self, x: &FieldScalar) -> (FieldScalar, FieldScalar) {
        if x.is_zero() {
            return (x.clone(), FieldScalar::one());
        }
        if self.is_rational() {
            return if x.a.is_negative() { (-x, FieldScalar::from_int(-1)) } else { (x.clone(), FieldScalar::one()) };
        }
        let eps = self.unit.to_scalar();
        let eps_inv = self.unit_inv.to_scalar();
        let mut c = x.clone();
        let mut u = FieldScalar::one();
        if self.unit_norm == -1 && self.norm_rat(&c).is_negative() {
            c = self.mul(&c, &eps);
            u = eps.clone();
        }
        if self.signs(&c).0 < 0 {
            c = -c;
            u = -u;
        }
        let (eta, eta_inv) = if self.unit_norm == -1 {
            (self.mul(&eps, &eps), self.mul(&eps_inv, &eps_inv))
        } else {
            (eps, eps_inv)
        };
        // balance |σ1/σ2| into [1, η1²)
        while self.embedding_balance(&c) < 0 {
            c = self.mul(&c, &eta);
            u = self.mul(&u, &eta);
        }
        loop {
            let down = self.mul(&c, &eta_inv);
            if self.embedding_balance(&down) >= 0 {
                c = down;
                u = self.mul(&u, &eta_inv);
            } else {
                break;
            }
        }
        (c, u)
    }

    pub fn canonical_ring(&self, x: &RingElement) -> RingElement {
        self.canonical(&x.to_scalar()).to_ring().expect("associate of an integer is integral")
    }

    /// Z-basis {(n,0),(m,k)} of the ideal cO, 0 <= m < n, k > 0.
    pub fn ideal_zhnf(&self, c: &RingElement) -> (BigInt, BigInt, BigInt) {
        let omega = RingElement::new(0, 1);
        let v1 = c.clone();
        let v2 = self.mul_ring(c, &omega);
        let (g, s, t) = ext_gcd(&v1.b, &v2.b);
        let (mut m, mut k);
        let n;
        if g.is_zero() {
            // cO ⊂ Z forces c = 0 when K ≠ Q
            let n0 = v1.a.abs().gcd(&v2.a.abs());
            return (n0, BigInt::zero(), BigInt::zero());
        } else {
            m = &s * &v1.a + &t * &v2.a;
            k = g.clone();
            let w = &v1.scale(&(&v2.b / &g)) - &v2.scale(&(&v1.b / &g));
            n = w.a.abs();
        }
        if k.is_negative() {
            k = -k;
            m = -m;
        }
        if !n.is_zero() {
            m = m.mod_floor(&n);
        }
        (n, m, k)
    }

    /// Canonical remainder of x modulo cO.
    pub fn rem_canonical(&self, x: &RingElement, c: &RingElement) -> RingElement {
        if self.is_rational() {
            let n = c.a.abs();
            return RingElement::from_int(x.a.mod_floor(&n));
        }
        let (n, m, k) = self.ideal_zhnf(c);
        let qb = x.b.div_floor(&k);
        let a = &x.a - &qb * &m;
        let b = &x.b - &qb * &k;
        RingElement { a: a.mod_floor(&n), b }
    }

    /// Exact quotient x / c in O, if it exists.
    pub fn div_exact(&self, x: &RingElement, c: &RingElement) -> Option<RingElement> {
        if c.is_zero() {
            return None;
        }
        self.div(&x.to_scalar(), &c.to_scalar()).ok()?.to_ring()
    }

    pub fn divides(&self, c: &RingElement, x: &RingElement) -> bool {
        if c.is_zero() {
            return x.is_zero();
        }
        self.div_exact(x, c).is_some()
    }

    /// Euclidean division with |N(r)| < |N(c)|.
    pub fn euclid_div(&self, x: &RingElement, c: &RingElement) -> Result<(RingElement, RingElement), BaseRingError> {
        if c.is_zero() {
            return Err(BaseRingError::DivisionByZero);
        }
        let xi = self.div(&x.to_scalar(), &c.to_scalar())?;
        let a0 = xi.a.round().to_integer();
        let b0 = xi.b.round().to_integer();
        let nc = self.norm_int(c).abs();
        for radius in 0..=8i64 {
            let mut best: Option<(BigInt, RingElement, RingElement)> = None;
            for da in -radius..=radius {
                for db in -radius..=radius {
                    if da.abs().max(db.abs()) != radius {
                        continue;
                    }
                    let q = RingElement { a: &a0 + da, b: &b0 + db };
                    let r = x - &self.mul_ring(&q, c);
                    let nr = self.norm_int(&r).abs();
                    if nr < nc && best.as_ref().is_none_or(|(bn, _, _)| &nr < bn) {
                        best = Some((nr, q, r));
                    }
                }
            }
            if let Some((_, q, r)) = best {
                return Ok((q, r));
            }
        }
        Err(BaseRingError::EuclidFailed)
    }

    pub fn gcd(&self, x: &RingElement, y: &RingElement) -> Result<RingElement, BaseRingError> {
        let mut a = x.clone();
        let mut b = y.clone();
        while !b.is_zero() {
            let (_, r) = self.euclid_div(&a, &b)?;
            a = b;
            b = r;
        }
        Ok(self.canonical_ring(&a))
    }

    /// Generator of the fractional ideal spanned by the given scalars.
    pub fn ideal_gcd(&self, xs: &[FieldScalar]) -> Result<FieldScalar, BaseRingError> {
        let mut den = BigInt::one();
        for x in xs {
            den = den.lcm(&x.denominator());
        }
        let mut g = RingElement::zero();
        for x in xs {
            let y = x.scale_int(&den).to_ring().expect("cleared denominators");
            g = self.gcd(&g, &y)?;
        }
        Ok(g.to_scalar().scale(&BigRational::new(BigInt::one(), den)))
    }

    /// Exact square root in O, if x is a perfect square.
    pub fn sqrt_exact(&self, x: &RingElement) -> Option<RingElement> {
        if x.is_zero() {
            return Some(x.clone());
        }
        if self.is_rational() {
            if x.a.is_negative() {
                return None;
            }
            let s = x.a.sqrt();
            return if &s * &s == x.a { Some(RingElement::from_int(s)) } else { None };
        }
        let (u, v) = self.sqrt_d_coords(&x.to_scalar());
        let d = rat(self.d as i64, 1);
        let n = &u * &u - &v * &v * &d;
        let r = rat_sqrt(&n)?;
        for cand in [(&u + &r) * rat(1, 2), (&u - &r) * rat(1, 2)] {
            let s = match rat_sqrt(&cand) {
                Some(s) => s,
                None => continue,
            };
            let t = if s.is_zero() {
                match rat_sqrt(&(&u / &d)) {
                    Some(t) => t,
                    None => continue,
                }
            } else {
                &v / (&s * rat(2, 1))
            };
            let y = self.from_sqrt_d_coords(&s, &t);
            if let Some(r) = y.to_ring() {
                if &self.mul_ring(&r, &r) == x {
                    return Some(r);
                }
            }
        }
        None
    }

    /// Generator h with (h)² = (x), normalized.
    pub fn ideal_sqrt(&self, x: &RingElement) -> Option<RingElement> {
        let units: Vec<RingElement> = if self.is_rational() {
            vec![RingElement::one(), RingElement::from_int(-1)]
        } else {
            vec![
                RingElement::one(),
                RingElement::from_int(-1),
                self.unit.clone(),
                -self.unit.clone(),
            ]
        };
        for u in units {
            if let Some(h) = self.sqrt_exact(&self.mul_ring(&u, x)) {
                return Some(self.canonical_ring(&h));
            }
        }
        None
    }
}

fn sgn(x: &BigRational) -> i32 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

/// (g, s, t) with g = s·a + t·b, g >= 0.
pub fn ext_gcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    let e = a.extended_gcd(b);
    let (mut g, mut s, mut t) = (e.gcd, e.x, e.y);
    if g.is_negative() {
        g = -g;
        s = -s;
        t = -t;
    }
    (g, s, t)
}

impl Mul for &RingElement {
    type Output = RingElement;
    /// Integer scaling only when one side has zero ω-part.
    fn mul(self, o: &RingElement) -> RingElement {
        assert!(self.b.is_zero() || o.b.is_zero(), "use BaseField::mul_ring for general products");
        if self.b.is_zero() {
            o.scale(&self.a)
        } else {
            self.scale(&o.a)
        }
    }
}
