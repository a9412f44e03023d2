use std::collections::HashMap;

use serde::Serialize;

use crate::base_ring::{FieldScalar, LocalContext, ParamTag, PrimeIdeal, RingElement};
use crate::quaternion::QuatElement;

use super::quasigood::{quasi_good_basis, working_precision, QuasiGoodBasis};
use super::{Eps, Kind, LocalFormClass, Order, OrderError};

/// Symbols appearing in the coefficient templates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Sym {
    Pi,
    Delta,
    DeltaInv,
    Alpha0,
    Alpha1,
    Beta0,
    Beta1,
    Mu,
    Nu,
    NuInv,
    /// dyadic μ_k
    Dy(u8),
}

/// coefficient · Π symbols · e_index, with e_0 = 1.
pub type Term = (i64, &'static [Sym], usize);

#[derive(Clone, Debug, Serialize)]
pub struct SuborderTemplate {
    pub name: &'static str,
    pub d: [&'static [Term]; 3],
}

use Sym::*;

const fn t(name: &'static str, d1: &'static [Term], d2: &'static [Term], d3: &'static [Term]) -> SuborderTemplate {
    SuborderTemplate { name, d: [d1, d2, d3] }
}

const E1: &[Term] = &[(1, &[], 1)];
const E2: &[Term] = &[(1, &[], 2)];
const E3: &[Term] = &[(1, &[], 3)];
const PI_E1: &[Term] = &[(1, &[Pi], 1)];
const PI_E2: &[Term] = &[(1, &[Pi], 2)];
const PI_E3: &[Term] = &[(1, &[Pi], 3)];
const DPI_E2: &[Term] = &[(1, &[Delta, Pi], 2)];

const ODD_A1_A1: SuborderTemplate = t(
    "<1,-1,p^s> -> <1,-1,p^(s+1)>",
    &[(1, &[Alpha0], 1), (1, &[Alpha1], 2)],
    &[(1, &[Alpha1], 1), (1, &[Alpha0], 2)],
    E3,
);
const ODD_A1_A2: SuborderTemplate = t(
    "<1,-1,1> -> <1,-d,p^2>",
    &[(1, &[Pi, Beta1], 1), (-1, &[Pi, Beta0], 3)],
    PI_E2,
    &[(1, &[Beta0], 1), (1, &[Beta1], 3)],
);
const ODD_A1_B_MU: SuborderTemplate = t("<1,-1,p> -> <1,p,p>", &[(1, &[Mu, Pi], 3)], &[(1, &[Mu], 1)], E2);
const ODD_A1_B_NU: SuborderTemplate = t("<1,-1,p> -> <1,p,dp>", &[(1, &[Nu, Pi], 3)], &[(1, &[Nu], 1)], E2);
const ODD_A2_A2: SuborderTemplate = t("<1,-d,p^s> -> <1,-d,p^(s+2)>", PI_E1, PI_E2, E3);
const ODD_A2_B_MU: SuborderTemplate = t("<1,-d,p> -> <1,p,dp>", &[(1, &[Mu, Pi], 3)], &[(1, &[Mu], 1)], E2);
const ODD_A2_B_NU: SuborderTemplate =
    t("<1,-d,p> -> <1,p,p>", &[(1, &[NuInv, Pi], 3)], &[(1, &[NuInv], 1)], E2);
const ODD_B1_C11: SuborderTemplate = t("<1,p,p> -> <1,p,p^2>", PI_E2, E1, E3);
const ODD_B1_CD1: SuborderTemplate = t(
    "<1,p,p> -> <1,dp,p^2>",
    &[(-1, &[Pi, Beta1], 2), (1, &[Pi, Beta0], 3)],
    E1,
    &[(1, &[Beta0], 2), (1, &[Beta1], 3)],
);
const ODD_BD_C1D: SuborderTemplate = t("<1,p,dp> -> <1,p,dp^2>", PI_E2, E1, E3);
const ODD_BD_CDD: SuborderTemplate = t("<1,p,dp> -> <1,dp,dp^2>", PI_E3, E1, E2);
const ODD_C11: SuborderTemplate = t("<1,p,p^s> -> <1,p,p^(s+1)>", PI_E2, E1, E3);
const ODD_CD1: SuborderTemplate = t("<1,dp,p^s> -> <1,dp,dp^(s+1)>", DPI_E2, E1, E3);
const ODD_C1D: SuborderTemplate = t("<1,p,dp^s> -> <1,p,dp^(s+1)>", PI_E2, E1, E3);
const ODD_CDD: SuborderTemplate = t("<1,dp,dp^s> -> <1,dp,p^(s+1)>", DPI_E2, &[(1, &[DeltaInv], 1)], E3);

const DY_H_H: SuborderTemplate = t("H+<2^s> -> H+<2^(s+1)>", E1, &[(2, &[], 2)], E3);
const DY_J_J: SuborderTemplate = t("J+<2^s> -> J+<2^(s+2)>", &[(2, &[], 1)], &[(2, &[], 2)], E3);
const DY_H_J_D1: &[Term] = &[(2, &[Dy(1)], 0), (-4, &[], 1), (-6, &[], 2), (-4, &[Dy(1)], 3)];
const DY_H_J_D2: &[Term] = &[(-2, &[Dy(1)], 0), (6, &[], 1), (4, &[], 2), (4, &[Dy(1)], 3)];
/// Readings of the H+<1> -> J+<4> row, tried in order.
const DY_H_J: [SuborderTemplate; 4] = [
    t(
        "H+<1> -> J+<4> (d3 = -2 - m1 e1 - m1 e2 + 5 e3)",
        DY_H_J_D1,
        DY_H_J_D2,
        &[(-2, &[], 0), (-1, &[Dy(1)], 1), (-1, &[Dy(1)], 2), (5, &[], 3)],
    ),
    t(
        "H+<1> -> J+<4> (d3 = -2 - m1 e1 + m1 e2 + 5 e3)",
        DY_H_J_D1,
        DY_H_J_D2,
        &[(-2, &[], 0), (-1, &[Dy(1)], 1), (1, &[Dy(1)], 2), (5, &[], 3)],
    ),
    t(
        "H+<1> -> J+<4> (d3 = -2 + m1 e1 - m1 e2 + 5 e3)",
        DY_H_J_D1,
        DY_H_J_D2,
        &[(-2, &[], 0), (1, &[Dy(1)], 1), (-1, &[Dy(1)], 2), (5, &[], 3)],
    ),
    t(
        "H+<1> -> J+<4> (d3 = -2 + m1 e1 + m1 e2 + 5 e3)",
        DY_H_J_D1,
        DY_H_J_D2,
        &[(-2, &[], 0), (1, &[Dy(1)], 1), (1, &[Dy(1)], 2), (5, &[], 3)],
    ),
];

/// Templates for an edge of the genus graph, in the order they are tried.
pub fn templates(from: &LocalFormClass, to: &LocalFormClass, minus_one_square: bool) -> Vec<SuborderTemplate> {
    use Kind::*;
    let e = |c: &LocalFormClass| (c.eps1.unwrap_or(Eps::One), c.eps2.unwrap_or(Eps::One));
    if from.dyadic {
        return match (from.kind, to.kind) {
            (A1, A1) if to.s == from.s + 1 => vec![DY_H_H],
            (A2, A2) if to.s == from.s + 2 => vec![DY_J_J],
            (A1, A2) if from.s == 0 && to.s == 2 => DY_H_J.to_vec(),
            _ => vec![],
        };
    }
    let row = match (from.kind, to.kind) {
        (A1, A1) if to.s == from.s + 1 => Some(ODD_A1_A1),
        (A1, A2) if from.s == 0 && to.s == 2 => Some(ODD_A1_A2),
        (A1, B) if from.s == 1 => Some(if minus_one_square { ODD_A1_B_MU } else { ODD_A1_B_NU }),
        (A2, A2) if to.s == from.s + 2 => Some(ODD_A2_A2),
        (A2, B) if from.s == 1 => Some(if minus_one_square { ODD_A2_B_MU } else { ODD_A2_B_NU }),
        (B, C) if to.s == 2 => match (e(from).0, e(to).0) {
            (Eps::One, Eps::One) => Some(ODD_B1_C11),
            (Eps::One, Eps::Delta) => Some(ODD_B1_CD1),
            (Eps::Delta, Eps::One) => Some(ODD_BD_C1D),
            (Eps::Delta, Eps::Delta) => Some(ODD_BD_CDD),
        },
        (C, C) if to.s == from.s + 1 => match e(from) {
            (Eps::One, Eps::One) => Some(ODD_C11),
            (Eps::Delta, Eps::One) => Some(ODD_CD1),
            (Eps::One, Eps::Delta) => Some(ODD_C1D),
            (Eps::Delta, Eps::Delta) => Some(ODD_CDD),
        },
        _ => None,
    };
    row.into_iter().collect()
}

struct Params {
    ctx: LocalContext,
    cache: HashMap<Sym, RingElement>,
}

impl Params {
    fn value(&mut self, s: Sym) -> Result<RingElement, OrderError> {
        if let Some(v) = self.cache.get(&s) {
            return Ok(v.clone());
        }
        let ctx = &self.ctx;
        let k = &ctx.prime.field;
        let param = |tag: ParamTag, i: usize| -> Result<RingElement, OrderError> {
            ctx.solve_table_parameters(tag).map(|v| v[i].clone()).map_err(|e| OrderError::ParameterFailure(e.to_string()))
        };
        let v = match s {
            Pi => ctx.prime.pi.clone(),
            Delta => ctx.delta(),
            DeltaInv => ctx.inv(&ctx.delta().to_scalar())?,
            Alpha0 => param(ParamTag::Alpha, 0)?,
            Alpha1 => param(ParamTag::Alpha, 1)?,
            Beta0 => param(ParamTag::Beta, 0)?,
            Beta1 => param(ParamTag::Beta, 1)?,
            Mu => param(ParamTag::Mu, 0)?,
            Nu => param(ParamTag::Nu, 0)?,
            NuInv => {
                let nu = param(ParamTag::Nu, 0)?;
                ctx.inv(&nu.to_scalar())?
            }
            Dy(i) => param(ParamTag::Dyadic(i), 0)?,
        };
        let v = ctx.reduce_ring(&v);
        let _ = k;
        self.cache.insert(s, v.clone());
        Ok(v)
    }
}

/// d1, d2, d3 of a template evaluated on a quasi-good basis.
pub fn substitute(
    order: &Order,
    prime: &PrimeIdeal,
    basis: &QuasiGoodBasis,
    template: &SuborderTemplate,
) -> Result<[QuatElement; 3], OrderError> {
    let alg = order.alg();
    let k = &alg.field;
    let mut params = Params { ctx: LocalContext::new(prime, working_precision(order, prime)), cache: HashMap::new() };
    let mut out = [QuatElement::zero(), QuatElement::zero(), QuatElement::zero()];
    for (slot, terms) in out.iter_mut().zip(template.d.iter()) {
        for (c, syms, idx) in terms.iter() {
            let mut coef = FieldScalar::from_int(*c);
            for s in syms.iter() {
                coef = k.mul(&coef, &params.value(*s)?.to_scalar());
            }
            *slot = &*slot + &alg.scale(&coef, &basis.elements[*idx]);
        }
    }
    Ok(out)
}

/// Maximal suborder of the target class from the suborder tables, when a
/// template applies and its output certifies.
pub fn table_suborder(
    order: &Order,
    prime: &PrimeIdeal,
    from: &LocalFormClass,
    to: &LocalFormClass,
) -> Result<(Order, SuborderTemplate), OrderError> {
    let rf = prime.residue_field();
    let minus_one_square = !prime.is_dyadic() && rf.is_square(&rf.neg(&RingElement::one()));
    let cands = templates(from, to, minus_one_square);
    if cands.is_empty() {
        return Err(OrderError::NotBeneath { source_class: from.to_string(), target: to.to_string() });
    }
    let basis = quasi_good_basis(order, prime, from)?;
    let want = prime.pi_pow(to.disc_valuation() - from.disc_valuation());
    for tpl in cands {
        let d = substitute(order, prime, &basis, &tpl)?;
        let gens = [QuatElement::one(), d[0].clone(), d[1].clone(), d[2].clone()];
        let Ok(lat) = order.lattice.glue_local(prime, 1, &gens) else { continue };
        let Ok(sub) = Order::new(lat) else { continue };
        let Ok(idx) = order.index_of(&sub) else { continue };
        let ratio = prime.field.canonical(&prime.field.div(&sub.discriminant().to_scalar(), &order.discriminant().to_scalar())?);
        if ratio != prime.field.canonical(&want.to_scalar()) || idx.is_zero() {
            continue;
        }
        if sub.classify(prime).ok().as_ref() == Some(to) {
            return Ok((sub, tpl));
        }
    }
    Err(OrderError::NotBass(format!("no template certifies {from} -> {to}")))
}
