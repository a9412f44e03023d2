use serde::Serialize;

use crate::base_ring::{BaseField, FieldScalar, LocalContext, PrimeIdeal, RingElement};
use crate::lattice::Lattice;
use crate::linalg::{det, inverse, Matrix};
use crate::quaternion::{Algebra, QuatElement};

use super::classify::gram_with_one;
use super::{Eps, Kind, LocalFormClass, Order, OrderError};

/// Basis {1, e1, e2, e3} congruent to a good basis modulo p·O_p.
#[derive(Clone, Debug, Serialize)]
pub struct QuasiGoodBasis {
    pub elements: [QuatElement; 4],
    pub class: LocalFormClass,
    /// Largest k (up to the working precision) with every product relation
    /// holding modulo π^k·O_p.
    pub precision: u32,
}

/// Diagonal entries (a, b) of the form ⟨1, a, b⟩ of an odd class.
pub fn odd_form_entries(cls: &LocalFormClass, prime: &PrimeIdeal) -> Result<(RingElement, RingElement), OrderError> {
    let k = &prime.field;
    let ctx = LocalContext::new(prime, 1);
    let pi = prime.pi.clone();
    let eps = |e: Option<Eps>| match e {
        Some(Eps::Delta) => ctx.delta(),
        _ => RingElement::one(),
    };
    let pow = |s: u32| prime.pi_pow(s);
    let out = match cls.kind {
        Kind::A1 => (RingElement::from_int(-1), pow(cls.s)),
        Kind::A2 => (-ctx.delta(), pow(cls.s)),
        Kind::B => (pi.clone(), k.mul_ring(&eps(cls.eps1), &pi)),
        Kind::C => (k.mul_ring(&eps(cls.eps1), &pi), k.mul_ring(&eps(cls.eps2), &pow(cls.s))),
        _ => return Err(OrderError::UnsupportedPrime),
    };
    Ok(out)
}

struct Local<'a> {
    k: &'a BaseField,
    prime: &'a PrimeIdeal,
    n: u32,
}

impl Local<'_> {
    fn val(&self, x: &FieldScalar) -> i64 {
        self.prime.valuation(x).unwrap_or(i64::MAX / 4)
    }

    fn red(&self, x: &FieldScalar) -> Result<FieldScalar, OrderError> {
        Ok(self.prime.reduce(x, self.n + 2)?.to_scalar())
    }

    fn div(&self, x: &FieldScalar, y: &FieldScalar) -> Result<FieldScalar, OrderError> {
        Ok(self.k.div(x, y)?)
    }

    fn bil(&self, g: &Matrix, x: &[FieldScalar], y: &[FieldScalar]) -> FieldScalar {
        let mut acc = FieldScalar::zero();
        for i in 0..x.len() {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..y.len() {
                if !y[j].is_zero() && !g[i][j].is_zero() {
                    acc = &acc + &self.k.mul(&self.k.mul(&x[i], &g[i][j]), &y[j]);
                }
            }
        }
        acc
    }

    fn gram(&self, g: &Matrix, vs: &[Vec<FieldScalar>]) -> Matrix {
        vs.iter().map(|x| vs.iter().map(|y| self.bil(g, x, y)).collect()).collect()
    }

    fn combine(&self, vs: &[Vec<FieldScalar>], c: &[FieldScalar]) -> Vec<FieldScalar> {
        let mut out = vec![FieldScalar::zero(); vs[0].len()];
        for (v, ci) in vs.iter().zip(c) {
            for t in 0..out.len() {
                out[t] = &out[t] + &self.k.mul(ci, &v[t]);
            }
        }
        out
    }

    /// Coefficients c with q(c) ≡ τ mod π^(v+n), where q(c) = cᵀHc (or half of
    /// it) and v = v(τ). Returns c and an index with c_j a unit.
    fn represent(&self, h: &Matrix, tau: &FieldScalar, v: i64, half: bool) -> Result<(Vec<FieldScalar>, usize), OrderError> {
        let m = h.len();
        let scale = self.k.inv(&self.prime.pi_pow(v as u32).to_scalar())?;
        let mut hs: Matrix = h.iter().map(|r| r.iter().map(|x| self.k.mul(x, &scale)).collect()).collect();
        let tau = self.k.mul(tau, &scale);
        let two = FieldScalar::from_int(2);
        if half {
            for row in hs.iter_mut() {
                for x in row.iter_mut() {
                    *x = self.div(x, &two)?;
                }
            }
        }
        let integral = (0..m).all(|i| {
            (0..m).all(|j| {
                let x = if i == j { hs[i][j].clone() } else { &hs[i][j] + &hs[i][j] };
                self.prime.is_integral(&x)
            })
        });
        if !integral {
            return Err(OrderError::DiagonalizationFailed);
        }
        let q = |c: &[FieldScalar]| -> FieldScalar {
            let mut acc = FieldScalar::zero();
            for i in 0..m {
                for j in 0..m {
                    if !c[i].is_zero() && !c[j].is_zero() {
                        acc = &acc + &self.k.mul(&self.k.mul(&c[i], &hs[i][j]), &c[j]);
                    }
                }
            }
            acc
        };
        // ∂q/∂c_i
        let dq = |c: &[FieldScalar], i: usize| -> FieldScalar {
            let mut acc = FieldScalar::zero();
            for j in 0..m {
                acc = &acc + &self.k.mul(&hs[i][j], &c[j]);
            }
            &acc + &acc
        };
        let rf = self.prime.residue_field();
        let q_res = rf.q();
        let total = q_res.pow(m as u32);
        for idx in 1..total {
            let mut t = idx;
            let mut c = Vec::with_capacity(m);
            for _ in 0..m {
                c.push(rf.reps[t % q_res].to_scalar());
                t /= q_res;
            }
            let err = &q(&c) - &tau;
            if self.val(&err) < 1 {
                continue;
            }
            let Some(i) = (0..m).find(|&i| self.val(&dq(&c, i)) == 0) else { continue };
            let Some(j) = (0..m).find(|&j| self.val(&c[j]) == 0) else { continue };
            for _ in 0..4 * (self.n + 4) {
                let err = &q(&c) - &tau;
                if self.val(&err) > self.n as i64 {
                    return Ok((c, j));
                }
                let step = self.div(&err, &dq(&c, i))?;
                c[i] = self.red(&(&c[i] - &step))?;
            }
            return Err(OrderError::DiagonalizationFailed);
        }
        Err(OrderError::DiagonalizationFailed)
    }

    /// Vectors orthogonal to span(xs), replacing the basis vectors at `drop`.
    fn complement(&self, g: &Matrix, vs: &[Vec<FieldScalar>], xs: &[Vec<FieldScalar>], drop: &[usize]) -> Result<Vec<Vec<FieldScalar>>, OrderError> {
        let gx = self.gram(g, xs);
        let inv = inverse(self.k, &gx).ok_or(OrderError::DiagonalizationFailed)?;
        let mut out = Vec::new();
        for (l, v) in vs.iter().enumerate() {
            if drop.contains(&l) {
                continue;
            }
            let rhs: Vec<FieldScalar> = xs.iter().map(|x| self.bil(g, x, v)).collect();
            let mut w = v.clone();
            for (a, x) in xs.iter().enumerate() {
                let mut coef = FieldScalar::zero();
                for b in 0..xs.len() {
                    coef = &coef + &self.k.mul(&inv[a][b], &rhs[b]);
                }
                if !self.prime.is_integral(&coef) {
                    return Err(OrderError::DiagonalizationFailed);
                }
                for t in 0..w.len() {
                    w[t] = &w[t] - &self.k.mul(&coef, &x[t]);
                }
            }
            out.push(w);
        }
        Ok(out)
    }
}

fn unit_vectors(n: usize) -> Vec<Vec<FieldScalar>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { FieldScalar::one() } else { FieldScalar::zero() }).collect())
        .collect()
}

/// Columns x1, x2 matching 1 and a, then the orthogonal remainder.
fn odd_columns(lc: &Local, g: &Matrix, targets: &[FieldScalar; 2]) -> Result<Vec<Vec<FieldScalar>>, OrderError> {
    let mut vs = unit_vectors(3);
    let mut cols = Vec::new();
    for t in targets {
        let h = lc.gram(g, &vs);
        let (c, j) = lc.represent(&h, t, lc.val(t), false)?;
        let x = lc.combine(&vs, &c);
        vs = lc.complement(g, &vs, std::slice::from_ref(&x), &[j])?;
        cols.push(x);
    }
    cols.push(vs.pop().expect("one vector left"));
    Ok(cols)
}

/// Columns x, y of the normalized even block, then the orthogonal remainder.
fn dyadic_columns(lc: &Local, g: &Matrix, anisotropic: bool) -> Result<Vec<Vec<FieldScalar>>, OrderError> {
    let k = lc.k;
    let vs = unit_vectors(3);
    let half = |x: &[FieldScalar]| k.div(&lc.bil(g, x, x), &FieldScalar::from_int(2));
    let tau1 = if anisotropic { FieldScalar::one() } else { FieldScalar::zero() };
    let (c, _) = lc.represent(g, &tau1, 0, true)?;
    let x = lc.combine(&vs, &c);
    let (l, bxz) = vs
        .iter()
        .enumerate()
        .map(|(l, v)| (l, lc.bil(g, &x, v)))
        .find(|(_, b)| lc.val(b) == 0)
        .ok_or(OrderError::DiagonalizationFailed)?;
    let z: Vec<FieldScalar> = vs[l].iter().map(|t| k.div(t, &bxz)).collect::<Result<_, _>>()?;
    let q0 = half(&z)?;
    let q1 = half(&x)?;
    // g(r) = q(z + r x) - τ₂·B(x, z + r x)², B(x, z + r x) = 1 + 2 r q1
    let tau2 = tau1.clone();
    let two = FieldScalar::from_int(2);
    let four = FieldScalar::from_int(4);
    let gfun = |r: &FieldScalar| -> FieldScalar {
        let bxy = &FieldScalar::one() + &k.mul(&two, &k.mul(r, &q1));
        let qy = &(&q0 + r) + &k.mul(&k.mul(r, r), &q1);
        &qy - &k.mul(&tau2, &k.mul(&bxy, &bxy))
    };
    let dg = |r: &FieldScalar| -> FieldScalar {
        let bxy = &FieldScalar::one() + &k.mul(&two, &k.mul(r, &q1));
        &bxy - &k.mul(&k.mul(&tau2, &four), &k.mul(&q1, &bxy))
    };
    let rf = lc.prime.residue_field();
    let mut r = rf
        .reps
        .iter()
        .map(|t| t.to_scalar())
        .find(|t| lc.val(&gfun(t)) >= 1)
        .ok_or(OrderError::DiagonalizationFailed)?;
    for _ in 0..4 * (lc.n + 4) {
        let err = gfun(&r);
        if lc.val(&err) > lc.n as i64 {
            break;
        }
        let d = dg(&r);
        if lc.val(&d) != 0 {
            return Err(OrderError::DiagonalizationFailed);
        }
        r = lc.red(&(&r - &lc.div(&err, &d)?))?;
    }
    let y0: Vec<FieldScalar> = z.iter().zip(&x).map(|(zt, xt)| zt + &k.mul(&r, xt)).collect();
    let bxy = lc.bil(g, &x, &y0);
    let y: Vec<FieldScalar> = y0.iter().map(|t| k.div(t, &bxy)).collect::<Result<_, _>>()?;
    let block = vec![x.clone(), y.clone()];
    // any remaining basis vector completing {x, y} to a basis
    for drop_pair in [[0usize, 1], [0, 2], [1, 2]] {
        let keep = (0..3).find(|t| !drop_pair.contains(t)).expect("three indices");
        let m = vec![x.clone(), y.clone(), vs[keep].clone()];
        if lc.val(&det(k, &m)) == 0 {
            let mut w = lc.complement(g, &vs, &block, &drop_pair)?;
            return Ok(vec![x, y, w.pop().expect("one vector")]);
        }
    }
    Err(OrderError::DiagonalizationFailed)
}

/// Product relations of a good basis for the class, as residuals that must
/// vanish.
pub fn table_residuals(
    alg: &Algebra,
    prime: &PrimeIdeal,
    cls: &LocalFormClass,
    e: &[QuatElement; 4],
) -> Result<Vec<QuatElement>, OrderError> {
    let k = &alg.field;
    let m = |x: usize, y: usize| alg.mul(&e[x], &e[y]);
    let sc = |s: &FieldScalar, x: &QuatElement| alg.scale(s, x);
    let one = QuatElement::one();
    let out = if !cls.dyadic {
        let (a, b) = odd_form_entries(cls, prime)?;
        let (a, b) = (a.to_scalar(), b.to_scalar());
        let ab = k.mul(&a, &b);
        vec![
            &m(1, 1) + &sc(&ab, &one),
            &m(2, 2) + &sc(&b, &one),
            &m(3, 3) + &sc(&a, &one),
            &m(1, 2) + &sc(&b, &e[3]),
            &m(2, 3) + &e[1],
            &m(3, 1) + &sc(&a, &e[2]),
            &m(2, 1) - &sc(&b, &e[3]),
            &m(3, 2) - &e[1],
            &m(1, 3) - &sc(&a, &e[2]),
        ]
    } else {
        let t = prime.pi_pow(cls.s).to_scalar();
        let one_minus_e3 = &one - &e[3];
        let mut rels = vec![
            &m(1, 2) - &sc(&t, &one_minus_e3),
            &m(2, 1) - &sc(&t, &e[3]),
        ];
        match cls.kind {
            Kind::A1 => rels.extend([
                m(1, 1),
                m(2, 2),
                m(2, 3),
                &m(3, 2) - &e[2],
                &m(3, 3) - &e[3],
                m(3, 1),
                &m(1, 3) - &e[1],
            ]),
            Kind::A2 => {
                let e12 = &e[1] + &e[2];
                rels.extend([
                    &m(1, 1) + &sc(&t, &one),
                    &m(2, 2) + &sc(&t, &one),
                    &m(2, 3) + &e[1],
                    &m(3, 2) - &e12,
                    &(&m(3, 3) - &e[3]) + &one,
                    &m(3, 1) + &e[2],
                    &m(1, 3) - &e12,
                ])
            }
            _ => return Err(OrderError::UnsupportedPrime),
        }
        rels
    };
    Ok(out)
}

/// Minimum valuation of the coordinates of the residuals in the order basis.
pub fn certified_precision(lattice: &Lattice, prime: &PrimeIdeal, residuals: &[QuatElement], cap: u32) -> u32 {
    let mut best = cap as i64;
    for r in residuals {
        for c in lattice.coordinates(r) {
            if let Some(v) = prime.valuation(&c) {
                best = best.min(v);
            }
        }
    }
    best.max(0) as u32
}

/// Working precision for a step from an order of discriminant valuation m.
pub fn working_precision(order: &Order, prime: &PrimeIdeal) -> u32 {
    order.disc_valuation(prime) + if prime.is_dyadic() { 8 } else { 6 }
}

pub fn quasi_good_basis(order: &Order, prime: &PrimeIdeal, cls: &LocalFormClass) -> Result<QuasiGoodBasis, OrderError> {
    let alg = order.alg();
    let k = &alg.field;
    let n = working_precision(order, prime);
    let lc = Local { k, prime, n };
    let ctx = LocalContext::new(prime, n);
    let (e, g) = gram_with_one(order);
    let ginv = inverse(k, &g).ok_or(OrderError::NotAnOrder)?;
    // f_i = Σ_j (G⁻¹)_ij e_j satisfies Tr(f_i ē_j) = δ_ij
    let f: Vec<QuatElement> = (0..4)
        .map(|i| (0..4).fold(QuatElement::zero(), |acc, j| &acc + &alg.scale(&ginv[i][j], &e[j])))
        .collect();
    let m_e: Matrix = (1..4).map(|i| (1..4).map(|j| ginv[i][j].clone()).collect()).collect();

    let (scale, cols, target_det) = if !cls.dyadic {
        let (a, b) = odd_form_entries(cls, prime)?;
        let (a, b) = (a.to_scalar(), b.to_scalar());
        let ab = k.mul(&a, &b);
        let two_ab = k.mul(&FieldScalar::from_int(2), &ab);
        let am: Matrix = m_e.iter().map(|r| r.iter().map(|x| k.mul(x, &two_ab)).collect()).collect();
        let cols = odd_columns(&lc, &am, &[FieldScalar::one(), a])?;
        // det M = 8⁻¹(ab)⁻²
        let td = k.inv(&k.mul(&FieldScalar::from_int(8), &k.mul(&ab, &ab)))?;
        (k.mul(&FieldScalar::from_int(4), &ab), cols, td)
    } else {
        let two_s = prime.pi_pow(cls.s).to_scalar();
        let (c, anisotropic, td) = match cls.kind {
            Kind::A1 => (-two_s.clone(), false, FieldScalar::one()),
            Kind::A2 => (k.mul(&FieldScalar::from_int(3), &two_s), true, k.inv(&FieldScalar::from_int(9))?),
            _ => return Err(OrderError::UnsupportedPrime),
        };
        // 2^(1-2s)
        let td = k.div(&k.mul(&td, &FieldScalar::from_int(2)), &k.mul(&two_s, &two_s))?;
        let am: Matrix = m_e.iter().map(|r| r.iter().map(|x| k.mul(x, &c)).collect()).collect();
        let cols = dyadic_columns(&lc, &am, anisotropic)?;
        (c, cols, td)
    };

    // f'_i = Σ_l C_li f_l
    let mut fp: Vec<QuatElement> = cols
        .iter()
        .map(|col| col.iter().enumerate().fold(QuatElement::zero(), |acc, (l, c)| &acc + &alg.scale(c, &f[l + 1])))
        .collect();
    let mp: Matrix = fp.iter().map(|x| fp.iter().map(|y| alg.trace_form(x, y)).collect()).collect();
    let ratio = k.div(&det(k, &mp), &target_det)?;
    if !prime.is_unit(&ratio) {
        return Err(OrderError::DeterminantMismatch);
    }
    let u = ctx.hensel_sqrt(&ratio).map_err(|_| OrderError::DeterminantMismatch)?;
    let u_inv = ctx.inv(&u.to_scalar())?;
    fp[2] = alg.scale(&u_inv.to_scalar(), &fp[2]);

    let prod = |j: usize, l: usize| alg.scale(&scale, &alg.mul(&fp[j], &alg.conj(&fp[l])));
    let raw = [prod(1, 2), prod(2, 0), prod(0, 1)];
    let mut elements = [QuatElement::one(), QuatElement::zero(), QuatElement::zero(), QuatElement::zero()];
    for (i, x) in raw.iter().enumerate() {
        elements[i + 1] = order.lattice.globalize(prime, n, x).map_err(|_| OrderError::DiagonalizationFailed)?;
    }
    let coords: Matrix = elements.iter().map(|x| order.lattice.coordinates(x).to_vec()).collect();
    if !prime.is_unit(&det(k, &coords)) {
        return Err(OrderError::DiagonalizationFailed);
    }
    let residuals = table_residuals(alg, prime, cls, &elements)?;
    let precision = certified_precision(&order.lattice, prime, &residuals, n);
    if precision == 0 {
        return Err(OrderError::DiagonalizationFailed);
    }
    Ok(QuasiGoodBasis { elements, class: *cls, precision })
}
