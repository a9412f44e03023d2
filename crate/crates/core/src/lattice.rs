//! Full-rank O-lattices in B with canonical Hermite normal form bases.

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::base_ring::{BaseField, BaseRingError, FieldScalar, PrimeIdeal, ResidueField, RingElement};
use crate::linalg::{det, inverse, Matrix};
use crate::quaternion::{Algebra, QuatElement};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("generators do not span a rank 4 module")]
    RankDeficient,
    #[error("lattice is not contained in the outer lattice")]
    NotASublattice,
    #[error("coefficient is not integral at the prime")]
    CoefficientNotIntegral,
    #[error("no local generator found")]
    NotPrincipal,
    #[error("index does not match")]
    IndexMismatch,
    #[error(transparent)]
    Base(#[from] BaseRingError),
}

/// Rank 4 O-lattice with its canonical basis.
#[derive(Clone, Debug)]
pub struct Lattice {
    pub alg: Arc<Algebra>,
    basis: [QuatElement; 4],
}

impl PartialEq for Lattice {
    fn eq(&self, o: &Self) -> bool {
        self.basis == o.basis
    }
}

impl Eq for Lattice {}

impl std::hash::Hash for Lattice {
    fn hash<H: std::hash::Hasher>(&self, h: &mut H) {
        self.basis.hash(h)
    }
}

impl Serialize for Lattice {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.basis.serialize(s)
    }
}

/// Plain basis rows, used when reading lattices back.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LatticeRows(pub [QuatElement; 4]);

fn scaled_rows(gens: &[QuatElement]) -> (BigInt, Vec<Vec<RingElement>>) {
    let mut den = BigInt::one();
    for g in gens {
        den = den.lcm(&g.denominator());
    }
    let rows = gens
        .iter()
        .map(|g| g.0.iter().map(|c| c.scale_int(&den).to_ring().expect("cleared denominators")).collect())
        .collect();
    (den, rows)
}

fn row_sub(k: &BaseField, a: &mut [RingElement], q: &RingElement, b: &[RingElement]) {
    for (x, y) in a.iter_mut().zip(b) {
        if !y.is_zero() && !q.is_zero() {
            *x = &*x - &k.mul_ring(q, y);
        }
    }
}

/// Hermite normal form over O, columns processed in the given order.
fn hnf_rows(k: &BaseField, mut rows: Vec<Vec<RingElement>>, cols: [usize; 4]) -> Result<Vec<Vec<RingElement>>, LatticeError> {
    rows.retain(|r| r.iter().any(|c| !c.is_zero()));
    let mut top = 0;
    for &col in &cols {
        loop {
            let nz: Vec<usize> = (top..rows.len()).filter(|&r| !rows[r][col].is_zero()).collect();
            if nz.is_empty() {
                return Err(LatticeError::RankDeficient);
            }
            let best = *nz
                .iter()
                .min_by_key(|&&r| num_traits::Signed::abs(&k.norm_int(&rows[r][col])))
                .expect("nonempty");
            rows.swap(top, best);
            if nz.len() == 1 {
                break;
            }
            let piv = rows[top].clone();
            for r in top + 1..rows.len() {
                if rows[r][col].is_zero() {
                    continue;
                }
                let (q, _) = k.euclid_div(&rows[r][col], &piv[col])?;
                row_sub(k, &mut rows[r], &q, &piv);
            }
        }
        let (_, unit) = k.canonical_with_unit(&rows[top][col].to_scalar());
        let unit = unit.to_ring().expect("units are integral");
        for c in rows[top].iter_mut() {
            *c = k.mul_ring(c, &unit);
        }
        let piv = rows[top].clone();
        for r in 0..top {
            let x = &rows[r][col];
            if x.is_zero() {
                continue;
            }
            let rem = k.rem_canonical(x, &piv[col]);
            let q = k.div_exact(&(x - &rem), &piv[col]).expect("exact quotient");
            row_sub(k, &mut rows[r], &q, &piv);
        }
        top += 1;
    }
    rows.truncate(4);
    Ok(rows)
}

fn rows_to_basis(den: &BigInt, rows: Vec<Vec<RingElement>>) -> [QuatElement; 4] {
    let inv = BigRational::new(BigInt::one(), den.clone());
    let mut it = rows.into_iter().map(|r| {
        QuatElement(std::array::from_fn(|n| r[n].to_scalar().scale(&inv)))
    });
    std::array::from_fn(|_| it.next().expect("four rows"))
}

impl Lattice {
    /// Canonical basis of the O-span of the generators.
    pub fn from_generators(alg: &Arc<Algebra>, gens: &[QuatElement]) -> Result<Self, LatticeError> {
        let (den, rows) = scaled_rows(gens);
        let rows = hnf_rows(&alg.field, rows, [0, 1, 2, 3])?;
        Ok(Lattice { alg: alg.clone(), basis: rows_to_basis(&den, rows) })
    }

    pub fn basis(&self) -> &[QuatElement; 4] {
        &self.basis
    }

    pub fn field(&self) -> &BaseField {
        &self.alg.field
    }

    /// Basis with the K-part reduced last: for orders the last row is 1.
    pub fn basis_scalar_last(&self) -> [QuatElement; 4] {
        let (den, rows) = scaled_rows(&self.basis);
        let rows = hnf_rows(&self.alg.field, rows, [1, 2, 3, 0]).expect("full rank");
        rows_to_basis(&den, rows)
    }

    /// Coordinates of x in the canonical basis.
    pub fn coordinates(&self, x: &QuatElement) -> [FieldScalar; 4] {
        let k = &self.alg.field;
        let mut c: [FieldScalar; 4] = std::array::from_fn(|_| FieldScalar::zero());
        for col in 0..4 {
            let mut v = x.0[col].clone();
            for r in 0..col {
                v = &v - &k.mul(&c[r], &self.basis[r].0[col]);
            }
            c[col] = k.div(&v, &self.basis[col].0[col]).expect("nonzero pivot");
        }
        c
    }

    /// Coordinates in an arbitrary K-basis.
    pub fn coordinates_in(k: &BaseField, basis: &[QuatElement; 4], x: &QuatElement) -> Option<[FieldScalar; 4]> {
        let m: Matrix = basis.iter().map(|b| b.0.to_vec()).collect();
        let inv = inverse(k, &m)?;
        Some(std::array::from_fn(|j| {
            (0..4).fold(FieldScalar::zero(), |acc, t| &acc + &k.mul(&x.0[t], &inv[t][j]))
        }))
    }

    pub fn contains(&self, x: &QuatElement) -> bool {
        self.coordinates(x).iter().all(|c| c.is_integral())
    }

    pub fn contains_lattice(&self, other: &Lattice) -> bool {
        other.basis.iter().all(|b| self.contains(b))
    }

    pub fn sum(&self, other: &Lattice) -> Lattice {
        let gens: Vec<_> = self.basis.iter().chain(other.basis.iter()).cloned().collect();
        Lattice::from_generators(&self.alg, &gens).expect("sum of full rank lattices")
    }

    /// Span of all products x·y.
    pub fn product(&self, other: &Lattice) -> Lattice {
        let mut gens = Vec::with_capacity(16);
        for x in &self.basis {
            for y in &other.basis {
                gens.push(self.alg.mul(x, y));
            }
        }
        Lattice::from_generators(&self.alg, &gens).expect("product of full rank lattices")
    }

    pub fn left_mul(&self, x: &QuatElement) -> Result<Lattice, LatticeError> {
        let gens: Vec<_> = self.basis.iter().map(|b| self.alg.mul(x, b)).collect();
        Lattice::from_generators(&self.alg, &gens)
    }

    pub fn right_mul(&self, x: &QuatElement) -> Result<Lattice, LatticeError> {
        let gens: Vec<_> = self.basis.iter().map(|b| self.alg.mul(b, x)).collect();
        Lattice::from_generators(&self.alg, &gens)
    }

    pub fn scale(&self, s: &FieldScalar) -> Lattice {
        let gens: Vec<_> = self.basis.iter().map(|b| self.alg.scale(s, b)).collect();
        Lattice::from_generators(&self.alg, &gens).expect("nonzero scalar")
    }

    /// Product of the pivots.
    pub fn det(&self) -> FieldScalar {
        let k = &self.alg.field;
        (0..4).fold(FieldScalar::one(), |acc, n| k.mul(&acc, &self.basis[n].0[n]))
    }

    /// [outer : self] as a normalized generator.
    pub fn index_in(&self, outer: &Lattice) -> Result<RingElement, LatticeError> {
        if !outer.contains_lattice(self) {
            return Err(LatticeError::NotASublattice);
        }
        let k = &self.alg.field;
        let r = k.div(&self.det(), &outer.det())?;
        let r = r.to_ring().ok_or(LatticeError::NotASublattice)?;
        Ok(k.canonical_ring(&r))
    }

    /// (Tr(b_i b̄_j)).
    pub fn gram_conj(&self) -> Matrix {
        self.basis.iter().map(|x| self.basis.iter().map(|y| self.alg.trace_form(x, y)).collect()).collect()
    }

    fn gram_tr(&self) -> Matrix {
        self.basis
            .iter()
            .map(|x| self.basis.iter().map(|y| self.alg.trace(&self.alg.mul(x, y))).collect())
            .collect()
    }

    fn dual_from(&self, gram: &Matrix) -> [QuatElement; 4] {
        let k = &self.alg.field;
        let inv = inverse(k, gram).expect("nondegenerate trace form");
        std::array::from_fn(|j| {
            (0..4).fold(QuatElement::zero(), |acc, t| &acc + &self.alg.scale(&inv[j][t], &self.basis[t]))
        })
    }

    /// Basis {f_j} with Tr(b_i f̄_j) = δ_ij.
    pub fn dual_basis_conj(&self) -> [QuatElement; 4] {
        self.dual_from(&self.gram_conj())
    }

    /// Dual for the pairing Tr(x ȳ).
    pub fn dual_conj(&self) -> Lattice {
        Lattice::from_generators(&self.alg, &self.dual_basis_conj()).expect("dual basis")
    }

    /// Dual {y : Tr(yL) ⊆ O}.
    pub fn dual_tr(&self) -> Lattice {
        let gens = self.dual_from(&self.gram_tr());
        Lattice::from_generators(&self.alg, &gens).expect("dual basis")
    }

    pub fn intersection(&self, other: &Lattice) -> Lattice {
        self.dual_conj().sum(&other.dual_conj()).dual_conj()
    }

    /// {x : x·l1 ⊆ l2}.
    pub fn left_colon(l2: &Lattice, l1: &Lattice) -> Lattice {
        l1.product(&l2.dual_tr()).dual_tr()
    }

    /// {x : l1·x ⊆ l2}.
    pub fn right_colon(l2: &Lattice, l1: &Lattice) -> Lattice {
        l2.dual_tr().product(l1).dual_tr()
    }

    pub fn left_order(&self) -> Lattice {
        Lattice::left_colon(self, self)
    }

    pub fn right_order(&self) -> Lattice {
        Lattice::right_colon(self, self)
    }

    /// Canonical generator of the ideal spanned by norms.
    pub fn norm_ideal(&self) -> FieldScalar {
        let mut vals = Vec::new();
        for (n, x) in self.basis.iter().enumerate() {
            vals.push(self.alg.norm(x));
            for y in &self.basis[n + 1..] {
                vals.push(self.alg.trace_form(x, y));
            }
        }
        let k = &self.alg.field;
        k.canonical(&k.ideal_gcd(&vals).expect("nonzero norms"))
    }

    pub fn is_order(&self) -> bool {
        if !self.contains(&QuatElement::one()) {
            return false;
        }
        self.basis.iter().all(|x| self.basis.iter().all(|y| self.contains(&self.alg.mul(x, y))))
    }

    /// Reduced discriminant of an order.
    pub fn discriminant(&self) -> Option<RingElement> {
        let k = &self.alg.field;
        let d = det(k, &self.gram_conj()).to_ring()?;
        k.ideal_sqrt(&d)
    }

    /// Minimal-valuation Gram entry recipe, verified against the left order.
    pub fn local_generator(&self, left_order: &Lattice, prime: &PrimeIdeal) -> Result<QuatElement, LatticeError> {
        let mut gens: Vec<QuatElement> = Vec::new();
        if self.contains(&QuatElement::one()) {
            gens.push(QuatElement::one());
        }
        gens.extend(self.basis.iter().cloned());
        let mut best: Option<(i64, usize, usize)> = None;
        for i in 0..gens.len() {
            for j in i..gens.len() {
                let g = self.alg.trace_form(&gens[i], &gens[j]);
                if let Some(v) = prime.valuation(&g) {
                    if best.is_none_or(|(bv, _, _)| v < bv) {
                        best = Some((v, i, j));
                    }
                }
            }
        }
        let mut candidates = Vec::new();
        if let Some((_, i, j)) = best {
            candidates.push(if i == j { gens[i].clone() } else { &gens[i] + &gens[j] });
        }
        // fallback: short combinations of the basis
        for c in 0..81usize {
            let digits = [c % 3, (c / 3) % 3, (c / 9) % 3, (c / 27) % 3];
            let x = (0..4).fold(QuatElement::zero(), |acc, n| {
                let t = FieldScalar::from_int(digits[n] as i64 - 1);
                &acc + &self.alg.scale(&t, &self.basis[n])
            });
            if !x.is_zero() {
                candidates.push(x);
            }
        }
        for x in candidates {
            if self.generates_locally(left_order, &x, prime) {
                return Ok(x);
            }
        }
        Err(LatticeError::NotPrincipal)
    }

    /// True when O·x ⊆ self with index prime to p.
    pub fn generates_locally(&self, left_order: &Lattice, x: &QuatElement, prime: &PrimeIdeal) -> bool {
        if self.alg.norm(x).is_zero() {
            return false;
        }
        let Ok(ox) = left_order.right_mul(x) else { return false };
        match ox.index_in(self) {
            Ok(idx) => prime.valuation(&idx.to_scalar()) == Some(0),
            Err(_) => false,
        }
    }

    /// p^e Λ + ⟨w̃_i⟩ with w̃_i ≡ w_i mod π^e Λ_p.
    pub fn glue_local(&self, prime: &PrimeIdeal, e: u32, local_basis: &[QuatElement]) -> Result<Lattice, LatticeError> {
        if e == 0 {
            return Ok(self.clone());
        }
        let pe = prime.pi_pow(e).to_scalar();
        let mut gens: Vec<QuatElement> = self.basis.iter().map(|b| self.alg.scale(&pe, b)).collect();
        for w in local_basis {
            gens.push(self.globalize(prime, e, w)?);
        }
        Lattice::from_generators(&self.alg, &gens)
    }

    /// Element of self congruent to w modulo π^n at p.
    pub fn globalize(&self, prime: &PrimeIdeal, n: u32, w: &QuatElement) -> Result<QuatElement, LatticeError> {
        let coords = self.coordinates(w);
        let mut acc = QuatElement::zero();
        for (c, b) in coords.iter().zip(&self.basis) {
            if !prime.is_integral(c) {
                return Err(LatticeError::CoefficientNotIntegral);
            }
            let r = prime.reduce(c, n)?;
            acc = &acc + &self.alg.scale(&r.to_scalar(), b);
        }
        Ok(acc)
    }

    /// Lattices J with inner ⊆ J ⊆ self and [self:J] = p^e, optionally
    /// stable under left multiplication by the given elements.
    pub fn intermediate_sublattices(
        &self,
        inner: &Lattice,
        prime: &PrimeIdeal,
        e: u32,
        stable_under: &[QuatElement],
    ) -> Result<Vec<Lattice>, LatticeError> {
        if e == 0 {
            return Ok(vec![self.clone()]);
        }
        let rf = prime.residue_field();
        let pi = prime.pi_scalar();
        // π·self ⊆ inner is required to work in self/π·self
        for b in &self.basis {
            if !inner.contains(&self.alg.scale(&pi, b)) {
                return Err(LatticeError::IndexMismatch);
            }
        }
        let w = self.residue_rows(&rf, inner.basis())?;
        let w = rf_rref(&rf, w);
        let dim_w = w.len();
        if 4 - dim_w != 2 * e as usize {
            return Err(LatticeError::IndexMismatch);
        }
        let pivots: Vec<usize> = w.iter().map(|r| r.iter().position(|c| !c.is_zero()).expect("nonzero row")).collect();
        let comp: Vec<Vec<RingElement>> = (0..4)
            .filter(|c| !pivots.contains(c))
            .map(|c| (0..4).map(|n| if n == c { RingElement::one() } else { RingElement::zero() }).collect())
            .collect();
        let maps: Vec<Vec<Vec<RingElement>>> = stable_under
            .iter()
            .map(|m| {
                let imgs: Vec<QuatElement> = self.basis.iter().map(|b| self.alg.mul(m, b)).collect();
                self.residue_rows(&rf, &imgs)
            })
            .collect::<Result<_, _>>()?;
        let mut out = Vec::new();
        for sub in subspaces(&rf, comp.len(), e as usize) {
            // vectors of V spanned by W and the chosen subspace
            let mut span: Vec<Vec<RingElement>> = w.clone();
            for s in &sub {
                let v = (0..4)
                    .map(|n| {
                        let mut acc = RingElement::zero();
                        for (t, cv) in s.iter().zip(&comp) {
                            acc = rf.add(&acc, &rf.mul(t, &cv[n]));
                        }
                        acc
                    })
                    .collect();
                span.push(v);
            }
            let span = rf_rref(&rf, span);
            let stable = maps.iter().all(|m| {
                span.iter().all(|v| {
                    let img: Vec<RingElement> = (0..4)
                        .map(|c| {
                            let mut acc = RingElement::zero();
                            for (n, vn) in v.iter().enumerate() {
                                acc = rf.add(&acc, &rf.mul(vn, &m[n][c]));
                            }
                            acc
                        })
                        .collect();
                    let mut test = span.clone();
                    test.push(img);
                    rf_rref(&rf, test).len() == span.len()
                })
            });
            if !stable {
                continue;
            }
            let mut gens: Vec<QuatElement> = inner.basis().to_vec();
            for v in span.iter() {
                let x = (0..4).fold(QuatElement::zero(), |acc, n| {
                    &acc + &self.alg.scale(&v[n].to_scalar(), &self.basis[n])
                });
                gens.push(x);
            }
            out.push(Lattice::from_generators(&self.alg, &gens)?);
        }
        Ok(out)
    }

    /// Coordinates mod π of elements of self.
    fn residue_rows(&self, rf: &ResidueField, xs: &[QuatElement]) -> Result<Vec<Vec<RingElement>>, LatticeError> {
        xs.iter()
            .map(|x| {
                self.coordinates(x)
                    .iter()
                    .map(|c| rf.reduce(c).map_err(|_| LatticeError::NotASublattice))
                    .collect()
            })
            .collect()
    }

    pub fn to_rows(&self) -> LatticeRows {
        LatticeRows(self.basis.clone())
    }
}

/// Row-reduced echelon basis over the residue field.
pub fn rf_rref(rf: &ResidueField, mut rows: Vec<Vec<RingElement>>) -> Vec<Vec<RingElement>> {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut top = 0;
    for col in 0..ncols {
        let Some(p) = (top..rows.len()).find(|&r| !rf.reduce_ring(&rows[r][col]).is_zero()) else {
            continue;
        };
        rows.swap(top, p);
        let inv = rf.inv(&rows[top][col]).expect("nonzero residue");
        rows[top] = rows[top].iter().map(|c| rf.mul(c, &inv)).collect();
        for r in 0..rows.len() {
            if r == top {
                continue;
            }
            let f = rf.reduce_ring(&rows[r][col]);
            if f.is_zero() {
                continue;
            }
            let pr = rows[top].clone();
            rows[r] = rows[r].iter().zip(&pr).map(|(a, b)| rf.sub(a, &rf.mul(&f, b))).collect();
        }
        top += 1;
    }
    rows.truncate(top);
    rows.into_iter().map(|r| r.iter().map(|c| rf.reduce_ring(c)).collect()).collect()
}

/// All d-dimensional subspaces of k^n, as echelon bases.
pub fn subspaces(rf: &ResidueField, n: usize, d: usize) -> Vec<Vec<Vec<RingElement>>> {
    let mut out = Vec::new();
    let mut pivots = Vec::new();
    choose(n, d, 0, &mut pivots, &mut |piv| {
        // free slots: row r, column c > piv[r], c not a pivot
        let mut slots = Vec::new();
        for (r, &p) in piv.iter().enumerate() {
            for c in p + 1..n {
                if !piv.contains(&c) {
                    slots.push((r, c));
                }
            }
        }
        let q = rf.q();
        let total = q.pow(slots.len() as u32);
        for mut idx in 0..total {
            let mut m = vec![vec![RingElement::zero(); n]; d];
            for (r, &p) in piv.iter().enumerate() {
                m[r][p] = RingElement::one();
            }
            for &(r, c) in &slots {
                m[r][c] = rf.reps[idx % q].clone();
                idx /= q;
            }
            out.push(m);
        }
    });
    out
}

fn choose(n: usize, d: usize, start: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
    if cur.len() == d {
        f(cur);
        return;
    }
    for c in start..n {
        cur.push(c);
        choose(n, d, c + 1, cur, f);
        cur.pop();
    }
}
