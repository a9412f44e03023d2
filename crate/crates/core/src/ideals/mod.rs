//! Left ideal classes of suborders, one prime step at a time.

mod cosets;

use std::collections::HashSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::base_ring::{FieldScalar, PrimeIdeal};
use crate::lattice::{Lattice, LatticeError};
use crate::orders::{Order, OrderError};
use crate::quaternion::QuatElement;
use crate::units::{norm_one_units, UnitError, UnitGroup};

pub use cosets::{
    table_coset_reps, table_unit_index, unit_coset_reps, unit_coset_reps_brute, unit_index, validate_coset_reps,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IdealError {
    #[error("no coset representatives for this step")]
    RowMissing,
    #[error("psi methods disagree: {0}")]
    MethodDisagreement(String),
    #[error("class number identity fails: {0}")]
    IdentityViolated(String),
    #[error("suborder is not contained in the order")]
    NotASuborder,
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Order(#[from] OrderError),
    #[error(transparent)]
    Units(#[from] UnitError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PsiMethod {
    LocalUnits,
    ColonLattice,
}

/// Exponent e with [O : O'] = p^e.
pub fn step_exponent(order: &Order, sub: &Order, prime: &PrimeIdeal) -> Result<u32, IdealError> {
    let idx = order.index_of(sub)?;
    Ok(prime.valuation(&idx.to_scalar()).unwrap_or(0) as u32)
}

/// Ψ(I) from local unit cosets: J = O'_p α x_p glued into I.
pub fn psi_local(ideal: &Lattice, order: &Order, sub: &Order, prime: &PrimeIdeal) -> Result<Vec<Lattice>, IdealError> {
    let e = step_exponent(order, sub, prime)?;
    let x = ideal.local_generator(&order.lattice, prime)?;
    let reps = unit_coset_reps(order, sub, prime)?;
    let alg = order.alg();
    let sub_basis = sub.lattice.basis();
    let mut out = Vec::with_capacity(reps.len());
    for a in &reps {
        let ax = alg.mul(a, &x);
        let local: Vec<QuatElement> = sub_basis.iter().map(|b| alg.mul(b, &ax)).collect();
        out.push(ideal.glue_local(prime, e, &local)?);
    }
    Ok(out)
}

/// {y : y·O ⊆ O'}.
pub fn colon_order(order: &Order, sub: &Order) -> Lattice {
    Lattice::left_colon(&sub.lattice, &order.lattice)
}

/// Ψ(I) from the lattices between Λ_I and I.
pub fn psi_global(ideal: &Lattice, order: &Order, sub: &Order, prime: &PrimeIdeal) -> Result<Vec<Lattice>, IdealError> {
    let e = step_exponent(order, sub, prime)?;
    let lam = colon_order(order, sub).product(ideal);
    let cands = ideal.intermediate_sublattices(&lam, prime, e, sub.lattice.basis())?;
    let norm = ideal.norm_ideal();
    Ok(cands
        .into_iter()
        .filter(|j| j.norm_ideal() == norm && j.left_order() == sub.lattice && order.lattice.product(j) == *ideal)
        .collect())
}

pub fn psi_set(
    ideal: &Lattice,
    order: &Order,
    sub: &Order,
    prime: &PrimeIdeal,
    method: PsiMethod,
) -> Result<Vec<Lattice>, IdealError> {
    match method {
        PsiMethod::LocalUnits => psi_local(ideal, order, sub, prime),
        PsiMethod::ColonLattice => psi_global(ideal, order, sub, prime),
    }
}

/// True when both methods give the same set of lattices.
pub fn psi_methods_agree(a: &[Lattice], b: &[Lattice]) -> bool {
    let sa: HashSet<&Lattice> = a.iter().collect();
    let sb: HashSet<&Lattice> = b.iter().collect();
    sa == sb && sa.len() == a.len() && sb.len() == b.len()
}

/// Orbits of the right action J ↦ J·u; each orbit lists indices into `psi`.
pub fn orbits(psi: &[Lattice], units: &UnitGroup) -> Result<Vec<Vec<usize>>, IdealError> {
    let mut seen = vec![false; psi.len()];
    let mut out = Vec::new();
    for start in 0..psi.len() {
        if seen[start] {
            continue;
        }
        let mut orbit = vec![start];
        seen[start] = true;
        for u in &units.elements {
            let img = psi[start].right_mul(u)?;
            if let Some(pos) = psi.iter().position(|j| *j == img) {
                if !seen[pos] {
                    seen[pos] = true;
                    orbit.push(pos);
                }
            }
        }
        orbit.sort();
        out.push(orbit);
    }
    Ok(out)
}

/// Class representative with its bookkeeping.
#[derive(Clone, Debug)]
pub struct IdealClass {
    pub ideal: Lattice,
    pub norm: FieldScalar,
    /// O_r(I)^{×,1} modulo ±1.
    pub right_units: UnitGroup,
    pub parent: Option<usize>,
}

impl IdealClass {
    pub fn right_unit_count(&self) -> usize {
        self.right_units.order()
    }
}

#[derive(Clone, Debug)]
pub struct IdealClassSet {
    pub order: Order,
    pub classes: Vec<IdealClass>,
}

impl IdealClassSet {
    /// Class set of an order known to have class number one.
    pub fn principal(order: &Order) -> Result<Self, IdealError> {
        let units = norm_one_units(&order.lattice)?;
        let cls = IdealClass {
            ideal: order.lattice.clone(),
            norm: order.lattice.norm_ideal(),
            right_units: units,
            parent: None,
        };
        Ok(IdealClassSet { order: order.clone(), classes: vec![cls] })
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }
}

/// Per-parent record of one step.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParentReport {
    pub parent: usize,
    pub psi_size: usize,
    pub parent_units: usize,
    pub orbit_sizes: Vec<usize>,
    pub stabilizer_units: Vec<usize>,
    pub methods_agree: Option<bool>,
}

impl ParentReport {
    /// #Ψ(I) = Σ [O_r(I)^× : O_r(J)^×] with indexes from norm-one counts.
    pub fn identity_terms(&self) -> Vec<usize> {
        self.stabilizer_units.iter().map(|u| self.parent_units / u).collect()
    }

    pub fn identity_holds(&self) -> bool {
        self.identity_terms().iter().sum::<usize>() == self.psi_size
    }

    pub fn identity_line(&self) -> String {
        let mut terms = self.identity_terms();
        terms.sort_unstable();
        let terms: Vec<String> = terms.iter().map(|t| t.to_string()).collect();
        format!("{} = {}", self.psi_size, terms.join(" + "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepReport {
    pub prime: u64,
    pub unit_index: usize,
    pub parents: Vec<ParentReport>,
}

/// Cl(O') from Cl(O) for a maximal suborder O' at the prime.
pub fn ideal_classes(
    sub: &Order,
    parent: &IdealClassSet,
    prime: &PrimeIdeal,
    cross_check: bool,
) -> Result<(IdealClassSet, StepReport), IdealError> {
    let order = &parent.order;
    if !order.lattice.contains_lattice(&sub.lattice) {
        return Err(IdealError::NotASuborder);
    }
    let mut classes = Vec::new();
    let mut reports = Vec::new();
    for (pi, cls) in parent.classes.iter().enumerate() {
        let psi = psi_local(&cls.ideal, order, sub, prime)?;
        let agree = if cross_check {
            let other = psi_global(&cls.ideal, order, sub, prime)?;
            let ok = psi_methods_agree(&psi, &other);
            if !ok {
                return Err(IdealError::MethodDisagreement(format!(
                    "parent {pi}: {} local vs {} global",
                    psi.len(),
                    other.len()
                )));
            }
            Some(ok)
        } else {
            None
        };
        let orbs = orbits(&psi, &cls.right_units)?;
        let mut report = ParentReport {
            parent: pi,
            psi_size: psi.len(),
            parent_units: cls.right_units.order(),
            orbit_sizes: orbs.iter().map(|o| o.len()).collect(),
            stabilizer_units: Vec::new(),
            methods_agree: agree,
        };
        for orb in &orbs {
            let j = psi[orb[0]].clone();
            let right_units = cls.right_units.restrict(&j.right_order());
            report.stabilizer_units.push(right_units.order());
            classes.push(IdealClass { norm: j.norm_ideal(), ideal: j, right_units, parent: Some(pi) });
        }
        if !report.identity_holds() {
            return Err(IdealError::IdentityViolated(report.identity_line()));
        }
        reports.push(report);
    }
    let unit_index = unit_index(order, sub, prime)?;
    Ok((IdealClassSet { order: sub.clone(), classes }, StepReport { prime: prime.p, unit_index, parents: reports }))
}
