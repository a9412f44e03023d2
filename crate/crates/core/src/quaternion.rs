//! The quaternion algebra (a,b)_K.

use std::ops::{Add, Neg, Sub};

use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::base_ring::{rat, BaseField, FieldScalar, PrimeIdeal, RingElement};
use crate::orders::LocalFormClass;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QuaternionError {
    #[error("structure constants must be nonzero")]
    Degenerate,
    #[error("class {0} has no ramification entry")]
    UnknownClass(String),
    #[error("cannot parse quaternion expression: {0}")]
    Parse(String),
}

/// Element x0 + x1 i + x2 j + x3 k.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuatElement(pub [FieldScalar; 4]);

impl QuatElement {
    pub fn zero() -> Self {
        QuatElement(std::array::from_fn(|_| FieldScalar::zero()))
    }

    pub fn one() -> Self {
        Self::scalar(FieldScalar::one())
    }

    pub fn scalar(s: FieldScalar) -> Self {
        let mut x = Self::zero();
        x.0[0] = s;
        x
    }

    pub fn basis(n: usize) -> Self {
        let mut x = Self::zero();
        x.0[n] = FieldScalar::one();
        x
    }

    pub fn from_ints(c: [i64; 4]) -> Self {
        QuatElement(c.map(FieldScalar::from_int))
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|c| c.is_zero())
    }

    /// Scale by a rational number.
    pub fn scale_rat(&self, r: &BigRational) -> Self {
        QuatElement(std::array::from_fn(|n| self.0[n].scale(r)))
    }

    /// Least common denominator of all coordinates.
    pub fn denominator(&self) -> num_bigint::BigInt {
        use num_integer::Integer;
        self.0.iter().fold(num_bigint::BigInt::one(), |d, c| d.lcm(&c.denominator()))
    }
}

impl Add for &QuatElement {
    type Output = QuatElement;
    fn add(self, o: &QuatElement) -> QuatElement {
        QuatElement(std::array::from_fn(|n| &self.0[n] + &o.0[n]))
    }
}

impl Sub for &QuatElement {
    type Output = QuatElement;
    fn sub(self, o: &QuatElement) -> QuatElement {
        QuatElement(std::array::from_fn(|n| &self.0[n] - &o.0[n]))
    }
}

impl Neg for &QuatElement {
    type Output = QuatElement;
    fn neg(self) -> QuatElement {
        QuatElement(std::array::from_fn(|n| -&self.0[n]))
    }
}

impl std::fmt::Display for QuatElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let names = ["", "i", "j", "k"];
        let mut first = true;
        for (c, name) in self.0.iter().zip(names) {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if name.is_empty() {
                write!(f, "({c})")?;
            } else {
                write!(f, "({c}){name}")?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// (a,b)_K with i² = a, j² = b, k = ij = -ji.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Algebra {
    pub field: BaseField,
    pub a: RingElement,
    pub b: RingElement,
    #[serde(skip)]
    a_s: FieldScalar,
    #[serde(skip)]
    b_s: FieldScalar,
    #[serde(skip)]
    ab_s: FieldScalar,
}

impl Algebra {
    pub fn new(field: BaseField, a: RingElement, b: RingElement) -> Result<Self, QuaternionError> {
        if a.is_zero() || b.is_zero() {
            return Err(QuaternionError::Degenerate);
        }
        let a_s = a.to_scalar();
        let b_s = b.to_scalar();
        let ab_s = field.mul(&a_s, &b_s);
        Ok(Algebra { field, a, b, a_s, b_s, ab_s })
    }

    /// Totally definite: a and b totally negative.
    pub fn is_totally_definite(&self) -> bool {
        self.field.is_totally_positive(&-self.a_s.clone()) && self.field.is_totally_positive(&-self.b_s.clone())
    }

    pub fn scale(&self, s: &FieldScalar, x: &QuatElement) -> QuatElement {
        QuatElement(std::array::from_fn(|n| self.field.mul(s, &x.0[n])))
    }

    pub fn mul(&self, x: &QuatElement, y: &QuatElement) -> QuatElement {
        let k = &self.field;
        let m = |p: &FieldScalar, q: &FieldScalar| k.mul(p, q);
        let [x0, x1, x2, x3] = &x.0;
        let [y0, y1, y2, y3] = &y.0;
        let z0 = &(&(&m(x0, y0) + &m(&self.a_s, &m(x1, y1))) + &m(&self.b_s, &m(x2, y2))) - &m(&self.ab_s, &m(x3, y3));
        let z1 = &(&(&m(x0, y1) + &m(x1, y0)) - &m(&self.b_s, &m(x2, y3))) + &m(&self.b_s, &m(x3, y2));
        let z2 = &(&(&m(x0, y2) + &m(x2, y0)) + &m(&self.a_s, &m(x1, y3))) - &m(&self.a_s, &m(x3, y1));
        let z3 = &(&(&m(x0, y3) + &m(x3, y0)) + &m(x1, y2)) - &m(x2, y1);
        QuatElement([z0, z1, z2, z3])
    }

    pub fn conj(&self, x: &QuatElement) -> QuatElement {
        QuatElement([x.0[0].clone(), -&x.0[1], -&x.0[2], -&x.0[3]])
    }

    pub fn trace(&self, x: &QuatElement) -> FieldScalar {
        x.0[0].scale(&rat(2, 1))
    }

    pub fn norm(&self, x: &QuatElement) -> FieldScalar {
        let k = &self.field;
        let [x0, x1, x2, x3] = &x.0;
        let sq = |c: &FieldScalar| k.mul(c, c);
        &(&(&sq(x0) - &k.mul(&self.a_s, &sq(x1))) - &k.mul(&self.b_s, &sq(x2))) + &k.mul(&self.ab_s, &sq(x3))
    }

    /// Tr(x ȳ).
    pub fn trace_form(&self, x: &QuatElement, y: &QuatElement) -> FieldScalar {
        let k = &self.field;
        let [x0, x1, x2, x3] = &x.0;
        let [y0, y1, y2, y3] = &y.0;
        let s = &(&(&k.mul(x0, y0) - &k.mul(&self.a_s, &k.mul(x1, y1))) - &k.mul(&self.b_s, &k.mul(x2, y2)))
            + &k.mul(&self.ab_s, &k.mul(x3, y3));
        s.scale(&rat(2, 1))
    }

    /// (conjugate, trace, norm).
    pub fn conj_trace_norm(&self, x: &QuatElement) -> (QuatElement, FieldScalar, FieldScalar) {
        (self.conj(x), self.trace(x), self.norm(x))
    }

    pub fn inv(&self, x: &QuatElement) -> Option<QuatElement> {
        let n = self.norm(x);
        if n.is_zero() {
            return None;
        }
        Some(self.scale(&self.field.inv(&n).ok()?, &self.conj(x)))
    }

    pub fn pow(&self, x: &QuatElement, e: u32) -> QuatElement {
        (0..e).fold(QuatElement::one(), |acc, _| self.mul(&acc, x))
    }

    /// Parse expressions over w (the ring generator), s (√d), i, j, k with
    /// + - * / ^ and parentheses; juxtaposition multiplies.
    pub fn parse(&self, text: &str) -> Result<QuatElement, QuaternionError> {
        let tokens = tokenize(text)?;
        let mut p = Parser { alg: self, tokens, pos: 0 };
        let v = p.expr()?;
        if p.pos != p.tokens.len() {
            return Err(QuaternionError::Parse(text.to_string()));
        }
        Ok(v)
    }

    pub fn parse_many(&self, items: &[&str]) -> Result<Vec<QuatElement>, QuaternionError> {
        items.iter().map(|s| self.parse(s)).collect()
    }
}

/// Local algebra sign read off the classification tables: +1 split, -1 division.
pub fn algebra_ramification(
    alg: &Algebra,
    prime: &PrimeIdeal,
    cls: &LocalFormClass,
) -> Result<i32, QuaternionError> {
    let _ = alg;
    cls.hilbert_sign(prime).ok_or_else(|| QuaternionError::UnknownClass(cls.label()))
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(i64),
    Sym(char),
    Op(char),
}

fn tokenize(text: &str) -> Result<Vec<Tok>, QuaternionError> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let mut n = 0;
    while n < chars.len() {
        let c = chars[n];
        if c.is_whitespace() {
            n += 1;
        } else if c.is_ascii_digit() {
            let mut v: i64 = 0;
            while n < chars.len() && chars[n].is_ascii_digit() {
                v = v * 10 + chars[n].to_digit(10).unwrap() as i64;
                n += 1;
            }
            out.push(Tok::Num(v));
        } else if "wsijk".contains(c) {
            out.push(Tok::Sym(c));
            n += 1;
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Op(c));
            n += 1;
        } else {
            return Err(QuaternionError::Parse(text.to_string()));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    alg: &'a Algebra,
    tokens: Vec<Tok>,
    pos: usize,
}

impl Parser<'_> {
    fn err(&self) -> QuaternionError {
        QuaternionError::Parse(format!("{:?}", self.tokens))
    }

    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos)
    }

    fn expr(&mut self) -> Result<QuatElement, QuaternionError> {
        let mut acc = match self.peek() {
            Some(Tok::Op('-')) => {
                self.pos += 1;
                -&self.term()?
            }
            Some(Tok::Op('+')) => {
                self.pos += 1;
                self.term()?
            }
            _ => self.term()?,
        };
        while let Some(Tok::Op(c)) = self.peek() {
            let c = *c;
            if c != '+' && c != '-' {
                break;
            }
            self.pos += 1;
            let t = self.term()?;
            acc = if c == '+' { &acc + &t } else { &acc - &t };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<QuatElement, QuaternionError> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some(Tok::Op('*')) => {
                    self.pos += 1;
                    let f = self.power()?;
                    acc = self.alg.mul(&acc, &f);
                }
                Some(Tok::Op('/')) => {
                    self.pos += 1;
                    let f = self.power()?;
                    let inv = self.alg.inv(&f).ok_or_else(|| self.err())?;
                    acc = self.alg.mul(&acc, &inv);
                }
                Some(Tok::Num(_)) | Some(Tok::Sym(_)) | Some(Tok::Op('(')) => {
                    let f = self.power()?;
                    acc = self.alg.mul(&acc, &f);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<QuatElement, QuaternionError> {
        let base = self.atom()?;
        if let Some(Tok::Op('^')) = self.peek() {
            self.pos += 1;
            let neg = matches!(self.peek(), Some(Tok::Op('-')));
            if neg {
                self.pos += 1;
            }
            let e = match self.peek() {
                Some(Tok::Num(e)) => *e as u32,
                _ => return Err(self.err()),
            };
            self.pos += 1;
            let mut v = self.alg.pow(&base, e);
            if neg {
                v = self.alg.inv(&v).ok_or_else(|| self.err())?;
            }
            return Ok(v);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<QuatElement, QuaternionError> {
        let tok = self.peek().cloned().ok_or_else(|| self.err())?;
        self.pos += 1;
        match tok {
            Tok::Num(v) => Ok(QuatElement::from_ints([v, 0, 0, 0])),
            Tok::Sym('w') => Ok(QuatElement::scalar(RingElement::new(0, 1).to_scalar())),
            Tok::Sym('s') => Ok(QuatElement::scalar(self.alg.field.sqrt_d().to_scalar())),
            Tok::Sym('i') => Ok(QuatElement::basis(1)),
            Tok::Sym('j') => Ok(QuatElement::basis(2)),
            Tok::Sym('k') => Ok(QuatElement::basis(3)),
            Tok::Op('(') => {
                let v = self.expr()?;
                if self.peek() != Some(&Tok::Op(')')) {
                    return Err(self.err());
                }
                self.pos += 1;
                Ok(v)
            }
            _ => Err(self.err()),
        }
    }
}
