use crate::base_ring::{BaseField, FieldScalar, PrimeIdeal, ResidueField, RingElement};
use crate::linalg::{inverse, Matrix};

use super::{Eps, LocalFormClass, Order, OrderError};

/// Gram matrix of the basis {1, x1, x2, x3} under Tr(x ȳ).
pub(crate) fn gram_with_one(order: &Order) -> ([crate::quaternion::QuatElement; 4], Matrix) {
    let alg = order.alg();
    let e = order.basis_with_one();
    let g = e.iter().map(|x| e.iter().map(|y| alg.trace_form(x, y)).collect()).collect();
    (e, g)
}

/// d·M_E for the trace-adapted dual basis of {1, x1, x2, x3}.
pub fn ternary_form(order: &Order) -> Matrix {
    let k = &order.alg().field;
    let (_, g) = gram_with_one(order);
    let inv = inverse(k, &g).expect("nondegenerate");
    let d = order.discriminant().to_scalar();
    (1..4).map(|i| (1..4).map(|j| k.mul(&d, &inv[i][j])).collect()).collect()
}

/// Jordan component of a form over the local ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Component {
    /// u·π^v
    Line { val: i64, unit: FieldScalar },
    /// π^v·[[a, b], [b, c]] with b a unit
    Block { val: i64, a: FieldScalar, b: FieldScalar, c: FieldScalar },
}

impl Component {
    pub fn val(&self) -> i64 {
        match self {
            Component::Line { val, .. } | Component::Block { val, .. } => *val,
        }
    }
}

fn pi_power(k: &BaseField, prime: &PrimeIdeal, v: i64) -> FieldScalar {
    let p = prime.pi_pow(v.unsigned_abs() as u32).to_scalar();
    if v >= 0 {
        p
    } else {
        k.inv(&p).expect("nonzero")
    }
}

/// Jordan splitting of a symmetric matrix at the prime.
pub fn local_form(k: &BaseField, prime: &PrimeIdeal, m: &Matrix) -> Result<Vec<Component>, OrderError> {
    let mut g = m.clone();
    let n = g.len();
    let mut active: Vec<usize> = (0..n).collect();
    let mut out = Vec::new();
    let val = |x: &FieldScalar| prime.valuation(x);
    while !active.is_empty() {
        let mut best: Option<(i64, usize, usize)> = None;
        for (ai, &i) in active.iter().enumerate() {
            for &j in &active[ai..] {
                if let Some(v) = val(&g[i][j]) {
                    // ties favour diagonal entries
                    let better = match best {
                        None => true,
                        Some((bv, bi, bj)) => v < bv || (v == bv && i == j && bi != bj),
                    };
                    if better {
                        best = Some((v, i, j));
                    }
                }
            }
        }
        let (v, i, j) = best.ok_or(OrderError::NotBass("degenerate form".into()))?;
        let diag_hit = i == j;
        if diag_hit || !prime.is_dyadic() {
            let i = if diag_hit {
                i
            } else {
                // e_i += e_j makes the diagonal reach the minimum
                for t in 0..n {
                    g[i][t] = &g[i][t] + &g[j][t];
                }
                for t in 0..n {
                    g[t][i] = &g[t][i] + &g[t][j];
                }
                i
            };
            let piv = g[i][i].clone();
            if val(&piv) != Some(v) {
                return Err(OrderError::DiagonalizationFailed);
            }
            for &t in &active {
                if t == i || g[t][i].is_zero() {
                    continue;
                }
                let c = k.div(&g[t][i], &piv)?;
                for u in 0..n {
                    let x = k.mul(&c, &g[i][u]);
                    g[t][u] = &g[t][u] - &x;
                }
                for u in 0..n {
                    let x = k.mul(&c, &g[u][i]);
                    g[u][t] = &g[u][t] - &x;
                }
            }
            out.push(Component::Line { val: v, unit: k.div(&piv, &pi_power(k, prime, v))? });
            active.retain(|&t| t != i);
        } else {
            let (a, b, c) = (g[i][i].clone(), g[i][j].clone(), g[j][j].clone());
            let det = &k.mul(&a, &c) - &k.mul(&b, &b);
            for &t in &active {
                if t == i || t == j {
                    continue;
                }
                let (r1, r2) = (g[i][t].clone(), g[j][t].clone());
                if r1.is_zero() && r2.is_zero() {
                    continue;
                }
                // [a b; b c]·(x, y) = (r1, r2)
                let x = k.div(&(&k.mul(&c, &r1) - &k.mul(&b, &r2)), &det)?;
                let y = k.div(&(&k.mul(&a, &r2) - &k.mul(&b, &r1)), &det)?;
                for u in 0..n {
                    let s = &k.mul(&x, &g[i][u]) + &k.mul(&y, &g[j][u]);
                    g[t][u] = &g[t][u] - &s;
                }
                for u in 0..n {
                    let s = &k.mul(&x, &g[u][i]) + &k.mul(&y, &g[u][j]);
                    g[u][t] = &g[u][t] - &s;
                }
            }
            let sc = k.inv(&pi_power(k, prime, v))?;
            out.push(Component::Block { val: v, a: k.mul(&a, &sc), b: k.mul(&b, &sc), c: k.mul(&c, &sc) });
            active.retain(|&t| t != i && t != j);
        }
    }
    out.sort_by_key(|c| c.val());
    Ok(out)
}

fn square_class(rf: &ResidueField, u: &FieldScalar) -> Result<Eps, OrderError> {
    let r = rf.reduce(u)?;
    Ok(if rf.is_square(&r) { Eps::One } else { Eps::Delta })
}

/// Absolute trace of a residue to the prime field, as zero/nonzero.
fn arf_trivial(rf: &ResidueField, t: &RingElement) -> bool {
    let mut acc = RingElement::zero();
    let mut pow = rf.reduce_ring(t);
    for _ in 0..rf.prime.f {
        acc = rf.add(&acc, &pow);
        pow = rf.mul(&pow, &pow);
    }
    acc.is_zero()
}

pub fn classify_local_order(order: &Order, prime: &PrimeIdeal) -> Result<LocalFormClass, OrderError> {
    let k = &order.alg().field;
    let form = ternary_form(order);
    classify_form(k, prime, &form)
}

/// Match a ternary form to a row of the classification tables.
pub fn classify_form(k: &BaseField, prime: &PrimeIdeal, form: &Matrix) -> Result<LocalFormClass, OrderError> {
    let comps = local_form(k, prime, form)?;
    let rf = prime.residue_field();
    let v0 = comps[0].val();
    if prime.is_dyadic() {
        return match comps.as_slice() {
            [Component::Block { val, a, b, c }, Component::Line { val: t, .. }] if *val == v0 && t - v0 >= 1 => {
                let s = (t - v0 - 1) as u32;
                // with an odd line at the adjacent scale the block's Arf
                // invariant can walk, and A1 is the only row
                if s == 0 {
                    return Ok(LocalFormClass::a1(0, true));
                }
                let two = FieldScalar::from_int(2);
                let qa = k.div(a, &two)?;
                let qc = k.div(c, &two)?;
                let ratio = k.div(&k.mul(&qa, &qc), &k.mul(b, b))?;
                let t = rf.reduce(&ratio)?;
                if arf_trivial(&rf, &t) {
                    Ok(LocalFormClass::a1(s, true))
                } else {
                    Ok(LocalFormClass::a2(s, true))
                }
            }
            _ => Err(OrderError::NotBass(format!("dyadic diagonal form {comps:?}"))),
        };
    }
    let lines: Vec<(i64, FieldScalar)> = comps
        .iter()
        .map(|c| match c {
            Component::Line { val, unit } => (val - v0, unit.clone()),
            Component::Block { .. } => unreachable!("odd primes split into lines"),
        })
        .collect();
    let lam = |n: usize| k.div(&lines[n].1, &lines[0].1);
    let (b, c) = (lines[1].0, lines[2].0);
    match (b, c) {
        (0, 0) => Ok(LocalFormClass::a1(0, false)),
        (0, s) => {
            let minus = -lam(1)?;
            match square_class(&rf, &minus)? {
                Eps::One => Ok(LocalFormClass::a1(s as u32, false)),
                Eps::Delta => Ok(LocalFormClass::a2(s as u32, false)),
            }
        }
        (1, 1) => Ok(LocalFormClass::b(square_class(&rf, &k.mul(&lam(1)?, &lam(2)?))?)),
        (1, s) => Ok(LocalFormClass::c(s as u32, square_class(&rf, &lam(1)?)?, square_class(&rf, &lam(2)?)?)),
        _ => Err(OrderError::NotBass(format!("valuations (0, {b}, {c})"))),
    }
}
