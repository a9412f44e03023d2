//! Command line jobs, JSON artifacts and verification reports.

use std::collections::hash_map::DefaultHasher;
use std::fmt::Write as _;
use std::fs;
use std::hash::{Hash, Hasher};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use num_traits::{Signed, Zero};
use serde::{de::DeserializeOwned, Deserialize, Serialize};
use thiserror::Error;

use crate::base_ring::{factor_prime, BaseField, BaseRingError, FieldScalar, PrimeIdeal, RingElement};
use crate::ideals::{
    ideal_classes, orbits, psi_global, psi_local, psi_methods_agree, unit_index, IdealClass, IdealClassSet, IdealError,
    ParentReport, StepReport,
};
use crate::lattice::{Lattice, LatticeError};
use crate::orders::{
    default_genus, maximal_suborder_by, suborder_chain_by, ChainStep, Eps, GenusSpec, Kind, LocalFormClass, Order,
    OrderError, SuborderMethod,
};
use crate::quaternion::{Algebra, QuatElement, QuaternionError};
use crate::units::{norm_one_units, UnitError};

pub const CACHE_ENV: &str = "BASSORDER_CACHE_DIR";
pub const ORDERS_FILE: &str = "orders.json";
pub const CLASSES_FILE: &str = "classes.json";
pub const VERIFY_FILE: &str = "verify.txt";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid spec: {0}")]
    InvalidSpec(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("computation failed: {0}")]
    Computation(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::InvalidSpec(_) => 2,
            CliError::Unsupported(_) => 3,
            CliError::Verification(_) => 4,
            CliError::Computation(_) | CliError::Io(_) => 1,
        }
    }
}

impl From<BaseRingError> for CliError {
    fn from(e: BaseRingError) -> Self {
        match e {
            BaseRingError::UnsupportedField(_) | BaseRingError::NarrowClassNumber(_) | BaseRingError::UnsupportedPrime => {
                CliError::Unsupported(e.to_string())
            }
            BaseRingError::NotPrime(_) => CliError::InvalidSpec(e.to_string()),
            _ => CliError::Computation(e.to_string()),
        }
    }
}

impl From<OrderError> for CliError {
    fn from(e: OrderError) -> Self {
        match e {
            OrderError::UnsupportedPrime => CliError::Unsupported(e.to_string()),
            OrderError::Base(b) => b.into(),
            OrderError::NotAnOrder | OrderError::NotBeneath { .. } | OrderError::Unreachable(_) => {
                CliError::InvalidSpec(e.to_string())
            }
            _ => CliError::Computation(e.to_string()),
        }
    }
}

impl From<IdealError> for CliError {
    fn from(e: IdealError) -> Self {
        match e {
            IdealError::MethodDisagreement(_) | IdealError::IdentityViolated(_) => CliError::Verification(e.to_string()),
            IdealError::Order(o) => o.into(),
            IdealError::NotASuborder => CliError::InvalidSpec(e.to_string()),
            _ => CliError::Computation(e.to_string()),
        }
    }
}

impl From<LatticeError> for CliError {
    fn from(e: LatticeError) -> Self {
        CliError::Computation(e.to_string())
    }
}

impl From<UnitError> for CliError {
    fn from(e: UnitError) -> Self {
        CliError::Computation(e.to_string())
    }
}

impl From<QuaternionError> for CliError {
    fn from(e: QuaternionError) -> Self {
        CliError::InvalidSpec(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::InvalidSpec(e.to_string())
    }
}

/// Class label at one prime, e.g. `{"prime": "3", "class": "A1 s=1"}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GenusLabel {
    pub prime: String,
    pub class: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MethodFlags {
    /// `table` tries the tables first, `search` goes straight to residue subalgebras.
    pub suborder: SuborderMethod,
    /// Compute Ψ both ways and compare.
    pub cross_check: bool,
}

impl Default for MethodFlags {
    fn default() -> Self {
        MethodFlags { suborder: SuborderMethod::Table, cross_check: true }
    }
}

fn default_output() -> PathBuf {
    PathBuf::from(".")
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct JobSpec {
    pub d: u64,
    pub a: String,
    pub b: String,
    /// Generators of the starting order.
    pub generators: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub disc: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub genus: Vec<GenusLabel>,
    #[serde(default)]
    pub methods: MethodFlags,
    #[serde(default = "default_output")]
    pub output: PathBuf,
}

pub const PRESETS: &[&str] = &["sqrt5"];

impl JobSpec {
    /// The maximal order of (-1,-1) over Q(√5) with target discriminant 30.
    pub fn preset(name: &str) -> Result<Self, CliError> {
        match name {
            "sqrt5" => Ok(JobSpec {
                d: 5,
                a: "-1".into(),
                b: "-1".into(),
                generators: vec![
                    "(1 + w^-1 i + w j)/2".into(),
                    "(w^-1 i + j + w k)/2".into(),
                    "(w i + w^-1 j + k)/2".into(),
                    "(i + w j + w^-1 k)/2".into(),
                ],
                disc: Some("30".into()),
                genus: Vec::new(),
                methods: MethodFlags::default(),
                output: default_output(),
            }),
            _ => Err(CliError::InvalidSpec(format!("unknown preset {name}, known: {}", PRESETS.join(", ")))),
        }
    }
}

/// A spec with everything parsed.
#[derive(Clone, Debug)]
pub struct Job {
    pub spec: JobSpec,
    pub field: BaseField,
    pub alg: Arc<Algebra>,
    pub top: Order,
    pub genus: GenusSpec,
}

fn parse_scalar(field: &BaseField, text: &str) -> Result<FieldScalar, CliError> {
    let aux = Algebra::new(field.clone(), RingElement::one(), RingElement::one())?;
    let x = aux.parse(text)?;
    if x.0[1..].iter().any(|c| !c.is_zero()) {
        return Err(CliError::InvalidSpec(format!("{text} is not a scalar")));
    }
    Ok(x.0[0].clone())
}

fn parse_integer(field: &BaseField, text: &str) -> Result<RingElement, CliError> {
    parse_scalar(field, text)?
        .to_ring()
        .ok_or_else(|| CliError::InvalidSpec(format!("{text} is not integral")))
}

/// `p` or `p#i` for the i-th prime above p.
pub fn parse_prime(field: &BaseField, text: &str) -> Result<PrimeIdeal, CliError> {
    let (p, idx) = match text.split_once('#') {
        Some((p, i)) => (p.trim(), i.trim()),
        None => (text.trim(), "0"),
    };
    let p: u64 = p.parse().map_err(|_| CliError::InvalidSpec(format!("bad prime {text}")))?;
    let idx: usize = idx.parse().map_err(|_| CliError::InvalidSpec(format!("bad prime index {text}")))?;
    let primes = factor_prime(field, p)?;
    primes
        .get(idx)
        .cloned()
        .ok_or_else(|| CliError::InvalidSpec(format!("no prime #{idx} above {p}")))
}

pub fn prime_label(field: &BaseField, prime: &PrimeIdeal) -> String {
    let idx = factor_prime(field, prime.p).ok().and_then(|ps| ps.iter().position(|q| q.pi == prime.pi)).unwrap_or(0);
    if idx == 0 {
        prime.p.to_string()
    } else {
        format!("{}#{idx}", prime.p)
    }
}

/// Reads the display form of a class: `A1 s=1`, `B e1=d`, `C s=2 e1=1 e2=d`, `D s=3 u=1`.
pub fn parse_class(text: &str, prime: &PrimeIdeal) -> Result<LocalFormClass, CliError> {
    let bad = || CliError::InvalidSpec(format!("bad class label {text:?}"));
    let mut toks = text.split(|c: char| c.is_whitespace() || c == ',').filter(|t| !t.is_empty());
    let kind = match toks.next().ok_or_else(bad)? {
        "A1" => Kind::A1,
        "A2" => Kind::A2,
        "B" => Kind::B,
        "C" => Kind::C,
        "D" => Kind::D,
        "E" => Kind::E,
        "F" => Kind::F,
        "G" => Kind::G,
        _ => return Err(bad()),
    };
    let eps = |v: &str| match v {
        "1" => Ok(Eps::One),
        "d" | "δ" | "delta" => Ok(Eps::Delta),
        _ => Err(bad()),
    };
    let dyadic = prime.is_dyadic();
    let mut cls = LocalFormClass { kind, s: if kind == Kind::B { 1 } else { 0 }, dyadic, eps1: None, eps2: None, unit: None };
    for t in toks {
        let (k, v) = t.split_once('=').ok_or_else(bad)?;
        match k {
            "s" => cls.s = v.parse().map_err(|_| bad())?,
            "e1" | "ε1" => cls.eps1 = Some(eps(v)?),
            "e2" | "ε2" => cls.eps2 = Some(eps(v)?),
            "u" => cls.unit = Some(v.parse().map_err(|_| bad())?),
            _ => return Err(bad()),
        }
    }
    if !cls.is_valid() {
        return Err(CliError::InvalidSpec(format!("{text:?} is not a class at {}", prime.p)));
    }
    if dyadic && !matches!(kind, Kind::A1 | Kind::A2) {
        return Err(CliError::Unsupported(format!("dyadic class {cls}")));
    }
    Ok(cls)
}

impl Job {
    pub fn resolve(spec: JobSpec) -> Result<Self, CliError> {
        let field = BaseField::quadratic(spec.d)?;
        let a = parse_integer(&field, &spec.a)?;
        let b = parse_integer(&field, &spec.b)?;
        let alg = Arc::new(Algebra::new(field.clone(), a, b)?);
        if spec.generators.is_empty() {
            return Err(CliError::InvalidSpec("no generators for the starting order".into()));
        }
        let gens = spec.generators.iter().map(|g| alg.parse(g)).collect::<Result<Vec<_>, _>>()?;
        let top = Order::generated_by(&alg, &gens)?;
        let mut genus = Vec::new();
        for l in &spec.genus {
            let prime = parse_prime(&field, &l.prime)?;
            let cls = parse_class(&l.class, &prime)?;
            genus.push((prime, cls));
        }
        if let Some(text) = &spec.disc {
            let disc = parse_integer(&field, text)?;
            if disc.is_zero() {
                return Err(CliError::InvalidSpec("discriminant is zero".into()));
            }
            if genus.is_empty() {
                genus = default_genus(&field, &disc)?;
            } else {
                check_disc(&field, &disc, &genus)?;
            }
        }
        Ok(Job { spec, field, alg, top, genus })
    }

    fn cache_key(&self, what: &str) -> String {
        let mut h = DefaultHasher::new();
        (what, &self.spec.d, &self.spec.a, &self.spec.b, &self.spec.generators).hash(&mut h);
        for (p, c) in &self.genus {
            (p.p, prime_label(&self.field, p), c.to_string()).hash(&mut h);
        }
        self.spec.methods.suborder.hash(&mut h);
        format!("{what}-{:016x}.json", h.finish())
    }
}

fn check_disc(field: &BaseField, disc: &RingElement, genus: &GenusSpec) -> Result<(), CliError> {
    let mut norm = num_bigint::BigInt::from(1);
    for (prime, cls) in genus {
        let v = prime.valuation(&disc.to_scalar()).unwrap_or(0);
        if v != cls.disc_valuation() as i64 {
            return Err(CliError::InvalidSpec(format!("class {cls} at {} does not match the discriminant", prime.p)));
        }
        norm *= num_bigint::BigInt::from(prime.q()).pow(v as u32);
    }
    if field.norm_int(disc).abs() != norm {
        return Err(CliError::InvalidSpec("genus labels do not cover the discriminant".into()));
    }
    Ok(())
}

/// Prints a ring element as `a + b w`.
pub fn show_ring(x: &RingElement) -> String {
    match (x.a.is_zero(), x.b.is_zero()) {
        (_, true) => x.a.to_string(),
        (true, false) => format!("{}w", x.b),
        (false, false) if x.b.is_negative() => format!("{} - {}w", x.a, -&x.b),
        _ => format!("{} + {}w", x.a, x.b),
    }
}

// ---- artifacts

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraRecord {
    pub d: u64,
    pub a: RingElement,
    pub b: RingElement,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalRecord {
    pub prime: String,
    pub valuation: u32,
    pub label: String,
    pub class: LocalFormClass,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepRecord {
    pub prime: String,
    pub method: SuborderMethod,
    /// Generator of [parent : order].
    pub index: RingElement,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderRecord {
    pub id: usize,
    pub parent: Option<usize>,
    pub basis: [QuatElement; 4],
    pub discriminant: RingElement,
    pub local: Vec<LocalRecord>,
    pub step: Option<StepRecord>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrdersArtifact {
    pub algebra: AlgebraRecord,
    pub orders: Vec<OrderRecord>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassRecord {
    pub id: usize,
    pub basis: [QuatElement; 4],
    pub norm: FieldScalar,
    /// |O_r(I)^{×,1}|.
    pub right_units: usize,
    pub parent: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelRecord {
    pub order: usize,
    pub class_number: usize,
    pub step: Option<StepReport>,
    pub classes: Vec<ClassRecord>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassesArtifact {
    pub algebra: AlgebraRecord,
    pub orders: Vec<OrderRecord>,
    pub levels: Vec<LevelRecord>,
}

pub fn to_json<T: Serialize>(x: &T) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(x).map_err(|e| CliError::Computation(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

pub fn from_json<T: DeserializeOwned>(s: &str) -> Result<T, CliError> {
    Ok(serde_json::from_str(s)?)
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::InvalidSpec(format!("{}: {e}", path.display())))?;
    from_json(&text)
}

fn write_artifact<T: Serialize>(dir: &Path, name: &str, x: &T) -> Result<PathBuf, CliError> {
    fs::create_dir_all(dir)?;
    let path = dir.join(name);
    fs::write(&path, to_json(x)?)?;
    Ok(path)
}

fn algebra_record(alg: &Algebra) -> AlgebraRecord {
    AlgebraRecord { d: alg.field.d, a: alg.a.clone(), b: alg.b.clone() }
}

fn algebra_from_record(r: &AlgebraRecord) -> Result<Arc<Algebra>, CliError> {
    let field = BaseField::quadratic(r.d)?;
    Ok(Arc::new(Algebra::new(field, r.a.clone(), r.b.clone())?))
}

/// Primes dividing the discriminant, then any extra ones.
fn relevant_primes(field: &BaseField, order: &Order, extra: &[PrimeIdeal]) -> Result<Vec<PrimeIdeal>, CliError> {
    let mut out: Vec<PrimeIdeal> = default_genus(field, order.discriminant())?.into_iter().map(|(p, _)| p).collect();
    for p in extra {
        if !out.iter().any(|q| q.pi == p.pi) {
            out.push(p.clone());
        }
    }
    out.sort_by_key(|p| (p.p, prime_label(field, p)));
    Ok(out)
}

pub fn order_record(
    field: &BaseField,
    id: usize,
    order: &Order,
    parent: Option<(usize, &Order)>,
    step: Option<(&PrimeIdeal, SuborderMethod)>,
    extra: &[PrimeIdeal],
) -> Result<OrderRecord, CliError> {
    let mut local = Vec::new();
    for prime in relevant_primes(field, order, extra)? {
        let cls = order.classify(&prime)?;
        local.push(LocalRecord {
            prime: prime_label(field, &prime),
            valuation: order.disc_valuation(&prime),
            label: cls.label(),
            class: cls,
        });
    }
    let step = match (step, parent) {
        (Some((prime, method)), Some((_, up))) => {
            Some(StepRecord { prime: prime_label(field, prime), method, index: up.index_of(order)? })
        }
        _ => None,
    };
    Ok(OrderRecord {
        id,
        parent: parent.map(|(i, _)| i),
        basis: order.lattice.basis().clone(),
        discriminant: order.discriminant().clone(),
        local,
        step,
    })
}

fn chain_records(job: &Job, chain: &[ChainStep]) -> Result<Vec<OrderRecord>, CliError> {
    let extra: Vec<PrimeIdeal> = job.genus.iter().map(|(p, _)| p.clone()).collect();
    let mut out = Vec::new();
    for (i, st) in chain.iter().enumerate() {
        let parent = if i == 0 { None } else { Some((i - 1, &chain[i - 1].order)) };
        let step = st.prime.as_ref().zip(st.method);
        out.push(order_record(&job.field, i, &st.order, parent, step, &extra)?);
    }
    Ok(out)
}

fn order_from_record(alg: &Arc<Algebra>, rec: &OrderRecord) -> Result<Order, CliError> {
    Ok(Order::new(Lattice::from_generators(alg, &rec.basis)?)?)
}

/// Chain for the job, read from the cache directory when present.
pub fn compute_chain(job: &Job) -> Result<Vec<ChainStep>, CliError> {
    let cache = std::env::var_os(CACHE_ENV).map(PathBuf::from);
    let key = job.cache_key("chain");
    if let Some(dir) = &cache {
        if let Ok(art) = read_json::<OrdersArtifact>(&dir.join(&key)) {
            if let Ok(chain) = chain_from_artifact(job, &art) {
                return Ok(chain);
            }
        }
    }
    let chain = suborder_chain_by(&job.top, &job.genus, job.spec.methods.suborder)?;
    if let Some(dir) = &cache {
        let art = OrdersArtifact { algebra: algebra_record(&job.alg), orders: chain_records(job, &chain)? };
        // a failed cache write is not fatal
        let _ = write_artifact(dir, &key, &art);
    }
    Ok(chain)
}

fn chain_from_artifact(job: &Job, art: &OrdersArtifact) -> Result<Vec<ChainStep>, CliError> {
    if art.algebra != algebra_record(&job.alg) || art.orders.first().map(|o| &o.basis) != Some(job.top.lattice.basis()) {
        return Err(CliError::InvalidSpec("cache mismatch".into()));
    }
    let mut out = Vec::new();
    for rec in &art.orders {
        let order = order_from_record(&job.alg, rec)?;
        if order.lattice.basis() != &rec.basis {
            return Err(CliError::InvalidSpec("cache mismatch".into()));
        }
        let (prime, class, method) = match &rec.step {
            Some(s) => {
                let prime = parse_prime(&job.field, &s.prime)?;
                let cls = order.classify(&prime)?;
                (Some(prime), Some(cls), Some(s.method))
            }
            None => (None, None, None),
        };
        out.push(ChainStep { order, prime, class, method });
    }
    Ok(out)
}

/// Class sets along the chain, one per order.
pub fn compute_classes(chain: &[ChainStep], cross_check: bool) -> Result<Vec<(IdealClassSet, Option<StepReport>)>, CliError> {
    let mut out = vec![(IdealClassSet::principal(&chain[0].order)?, None)];
    for st in &chain[1..] {
        let prime = st.prime.as_ref().expect("steps below the top carry a prime");
        let (next, rep) = ideal_classes(&st.order, &out.last().expect("nonempty").0, prime, cross_check)?;
        out.push((next, Some(rep)));
    }
    Ok(out)
}

fn class_records(set: &IdealClassSet) -> Vec<ClassRecord> {
    set.classes
        .iter()
        .enumerate()
        .map(|(id, c)| ClassRecord {
            id,
            basis: c.ideal.basis().clone(),
            norm: c.norm.clone(),
            right_units: c.right_unit_count(),
            parent: c.parent,
        })
        .collect()
}

// ---- commands

#[derive(Debug, Parser)]
#[command(name = "bassorder", version, about = "Bass suborders and left ideal classes of quaternion orders")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Local class labels of the starting order.
    Classify {
        #[command(flatten)]
        job: JobArgs,
        /// Extra primes to classify at (`p` or `p#i`).
        #[arg(long = "prime")]
        primes: Vec<String>,
    },
    /// One maximal suborder of the given class at a prime.
    Suborder {
        #[command(flatten)]
        job: JobArgs,
        #[arg(long)]
        prime: String,
        /// Target class, e.g. "A1 s=1".
        #[arg(long)]
        class: String,
    },
    /// Chain of maximal suborders down to the target genus.
    Chain {
        #[command(flatten)]
        job: JobArgs,
    },
    /// Left ideal class representatives along the chain.
    IdealClasses {
        #[command(flatten)]
        job: JobArgs,
    },
    /// Re-check the artifacts in a directory and write verify.txt.
    Verify {
        /// Directory holding orders.json and/or classes.json.
        dir: PathBuf,
    },
}

#[derive(Debug, Clone, Default, Args)]
pub struct JobArgs {
    /// JSON job spec.
    #[arg(long)]
    pub spec: Option<PathBuf>,
    /// Built-in job ("sqrt5").
    #[arg(long)]
    pub preset: Option<String>,
    /// Base field Q(√d); 1 for Q.
    #[arg(long)]
    pub d: Option<u64>,
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub b: Option<String>,
    /// Generator of the starting order, repeatable (ω is written w).
    #[arg(long = "gen", allow_hyphen_values = true)]
    pub generators: Vec<String>,
    /// Target reduced discriminant.
    #[arg(long, allow_hyphen_values = true)]
    pub disc: Option<String>,
    /// Class at a prime, `p=LABEL` or `p#i=LABEL`; repeatable.
    #[arg(long)]
    pub genus: Vec<String>,
    /// Skip the tables and search residue subalgebras.
    #[arg(long)]
    pub search: bool,
    /// Compute Ψ by local units only.
    #[arg(long)]
    pub no_cross_check: bool,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

impl JobArgs {
    pub fn to_spec(&self) -> Result<JobSpec, CliError> {
        let mut spec = match (&self.spec, &self.preset) {
            (Some(_), Some(_)) => return Err(CliError::InvalidSpec("give --spec or --preset, not both".into())),
            (Some(path), None) => read_json::<JobSpec>(path)?,
            (None, Some(name)) => JobSpec::preset(name)?,
            (None, None) => JobSpec {
                d: self.d.ok_or_else(|| CliError::InvalidSpec("missing --d".into()))?,
                a: self.a.clone().ok_or_else(|| CliError::InvalidSpec("missing --a".into()))?,
                b: self.b.clone().ok_or_else(|| CliError::InvalidSpec("missing --b".into()))?,
                generators: Vec::new(),
                disc: None,
                genus: Vec::new(),
                methods: MethodFlags::default(),
                output: default_output(),
            },
        };
        if let Some(d) = self.d {
            spec.d = d;
        }
        if let Some(a) = &self.a {
            spec.a = a.clone();
        }
        if let Some(b) = &self.b {
            spec.b = b.clone();
        }
        if !self.generators.is_empty() {
            spec.generators = self.generators.clone();
        }
        if !self.genus.is_empty() {
            spec.disc = None;
            spec.genus = self
                .genus
                .iter()
                .map(|g| {
                    g.split_once('=')
                        .map(|(p, c)| GenusLabel { prime: p.trim().into(), class: c.trim().into() })
                        .ok_or_else(|| CliError::InvalidSpec(format!("bad genus entry {g:?}")))
                })
                .collect::<Result<_, _>>()?;
        }
        if let Some(disc) = &self.disc {
            spec.disc = Some(disc.clone());
        }
        if self.search {
            spec.methods.suborder = SuborderMethod::Search;
        }
        if self.no_cross_check {
            spec.methods.cross_check = false;
        }
        if let Some(o) = &self.output {
            spec.output = o.clone();
        }
        Ok(spec)
    }
}

/// Runs one command; the returned text is the summary for stdout.
pub fn run(cli: &Cli) -> Result<String, CliError> {
    match &cli.command {
        Command::Classify { job, primes } => {
            let job = Job::resolve(job.to_spec()?)?;
            let extra = primes.iter().map(|p| parse_prime(&job.field, p)).collect::<Result<Vec<_>, _>>()?;
            let rec = order_record(&job.field, 0, &job.top, None, None, &extra)?;
            let mut out = order_summary(&rec);
            let art = OrdersArtifact { algebra: algebra_record(&job.alg), orders: vec![rec] };
            let path = write_artifact(&job.spec.output, ORDERS_FILE, &art)?;
            let _ = writeln!(out, "wrote {}", path.display());
            Ok(out)
        }
        Command::Suborder { job, prime, class } => {
            let job = Job::resolve(job.to_spec()?)?;
            let prime = parse_prime(&job.field, prime)?;
            let cls = parse_class(class, &prime)?;
            let (sub, method) = maximal_suborder_by(&job.top, &prime, &cls, job.spec.methods.suborder)?;
            let extra = [prime.clone()];
            let recs = vec![
                order_record(&job.field, 0, &job.top, None, None, &extra)?,
                order_record(&job.field, 1, &sub, Some((0, &job.top)), Some((&prime, method)), &extra)?,
            ];
            let mut out: String = recs.iter().map(order_summary).collect();
            let path = write_artifact(&job.spec.output, ORDERS_FILE, &OrdersArtifact { algebra: algebra_record(&job.alg), orders: recs })?;
            let _ = writeln!(out, "wrote {}", path.display());
            Ok(out)
        }
        Command::Chain { job } => {
            let job = Job::resolve(job.to_spec()?)?;
            let chain = compute_chain(&job)?;
            let recs = chain_records(&job, &chain)?;
            let mut out: String = recs.iter().map(order_summary).collect();
            let path = write_artifact(&job.spec.output, ORDERS_FILE, &OrdersArtifact { algebra: algebra_record(&job.alg), orders: recs })?;
            let _ = writeln!(out, "wrote {}", path.display());
            Ok(out)
        }
        Command::IdealClasses { job } => {
            let job = Job::resolve(job.to_spec()?)?;
            if !job.field.narrow_class_one {
                return Err(CliError::Unsupported(format!("Q(√{}) has narrow class number above one", job.field.d)));
            }
            let chain = compute_chain(&job)?;
            let recs = chain_records(&job, &chain)?;
            let sets = compute_classes(&chain, job.spec.methods.cross_check)?;
            let mut out = String::new();
            let mut levels = Vec::new();
            for (i, (set, rep)) in sets.iter().enumerate() {
                let _ = writeln!(out, "R{i} disc {}: {} classes", show_ring(chain[i].order.discriminant()), set.len());
                levels.push(LevelRecord { order: i, class_number: set.len(), step: rep.clone(), classes: class_records(set) });
            }
            let algebra = algebra_record(&job.alg);
            let p1 = write_artifact(&job.spec.output, ORDERS_FILE, &OrdersArtifact { algebra: algebra.clone(), orders: recs.clone() })?;
            let p2 = write_artifact(&job.spec.output, CLASSES_FILE, &ClassesArtifact { algebra, orders: recs, levels })?;
            let _ = writeln!(out, "wrote {}\nwrote {}", p1.display(), p2.display());
            Ok(out)
        }
        Command::Verify { dir } => {
            let report = verify_dir(dir)?;
            fs::write(dir.join(VERIFY_FILE), &report.text)?;
            if report.failures > 0 {
                return Err(CliError::Verification(format!("{} checks failed, see {}", report.failures, dir.join(VERIFY_FILE).display())));
            }
            Ok(report.text)
        }
    }
}

fn order_summary(rec: &OrderRecord) -> String {
    let local: Vec<String> = rec.local.iter().map(|l| format!("{}: {}", l.prime, l.class)).collect();
    let method = rec.step.as_ref().map(|s| format!(" [{} at {}]", serde_json::to_value(s.method).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default(), s.prime)).unwrap_or_default();
    format!("R{} disc {}{}; {}\n", rec.id, show_ring(&rec.discriminant), method, local.join(", "))
}

// ---- verification

#[derive(Clone, Debug, Default)]
pub struct VerifyReport {
    pub text: String,
    pub failures: usize,
}

impl VerifyReport {
    fn check(&mut self, ok: bool, line: impl AsRef<str>) {
        let _ = writeln!(self.text, "{} {}", if ok { "ok  " } else { "FAIL" }, line.as_ref());
        if !ok {
            self.failures += 1;
        }
    }

    fn fail(&mut self, line: impl AsRef<str>) {
        self.check(false, line)
    }
}

/// Checks whatever artifacts the directory holds.
pub fn verify_dir(dir: &Path) -> Result<VerifyReport, CliError> {
    let orders_path = dir.join(ORDERS_FILE);
    let classes_path = dir.join(CLASSES_FILE);
    if !orders_path.exists() && !classes_path.exists() {
        return Err(CliError::InvalidSpec(format!("no artifacts in {}", dir.display())));
    }
    let mut rep = VerifyReport::default();
    if orders_path.exists() {
        let text = fs::read_to_string(&orders_path)?;
        let art: OrdersArtifact = from_json(&text)?;
        rep.check(to_json(&art)? == text, format!("{ORDERS_FILE} round trip"));
        verify_orders(&art.algebra, &art.orders, &mut rep)?;
    }
    if classes_path.exists() {
        let text = fs::read_to_string(&classes_path)?;
        let art: ClassesArtifact = from_json(&text)?;
        rep.check(to_json(&art)? == text, format!("{CLASSES_FILE} round trip"));
        verify_classes(&art, &mut rep)?;
    }
    let _ = writeln!(rep.text, "{}", if rep.failures == 0 { "PASS".to_string() } else { format!("FAIL ({} checks)", rep.failures) });
    Ok(rep)
}

pub fn verify_orders(algebra: &AlgebraRecord, recs: &[OrderRecord], rep: &mut VerifyReport) -> Result<Vec<Order>, CliError> {
    let alg = algebra_from_record(algebra)?;
    let field = alg.field.clone();
    let mut orders: Vec<Order> = Vec::new();
    for rec in recs {
        let lat = Lattice::from_generators(&alg, &rec.basis)?;
        rep.check(lat.basis() == &rec.basis, format!("R{} basis is canonical", rec.id));
        let order = match Order::new(lat) {
            Ok(o) => o,
            Err(e) => {
                rep.fail(format!("R{}: {e}", rec.id));
                return Ok(orders);
            }
        };
        rep.check(
            order.discriminant() == &rec.discriminant,
            format!("R{} discriminant {}", rec.id, show_ring(&rec.discriminant)),
        );
        for l in &rec.local {
            let prime = parse_prime(&field, &l.prime)?;
            let cls = order.classify(&prime)?;
            rep.check(
                cls == l.class && order.disc_valuation(&prime) == l.valuation,
                format!("R{} class at {}: {}", rec.id, l.prime, l.class),
            );
        }
        if let (Some(pid), Some(step)) = (rec.parent, &rec.step) {
            match orders.get(pid) {
                Some(up) => {
                    let inside = up.lattice.contains_lattice(&order.lattice);
                    rep.check(inside, format!("R{} inside R{pid}", rec.id));
                    if inside {
                        let prime = parse_prime(&field, &step.prime)?;
                        let idx = up.index_of(&order)?;
                        let v = prime.valuation(&idx.to_scalar()).unwrap_or(0);
                        let norm_ok = (1..=2).contains(&v)
                            && field.norm_int(&idx).abs() == field.norm_int(&prime.pi).abs().pow(v as u32);
                        rep.check(idx == step.index && norm_ok, format!("R{} index over R{pid} at {}", rec.id, step.prime));
                    }
                }
                None => rep.fail(format!("R{} parent R{pid} missing", rec.id)),
            }
        }
        orders.push(order);
    }
    Ok(orders)
}

fn rebuild_class(alg: &Arc<Algebra>, rec: &ClassRecord) -> Result<IdealClass, CliError> {
    let ideal = Lattice::from_generators(alg, &rec.basis)?;
    let right_units = norm_one_units(&ideal.right_order())?;
    Ok(IdealClass { norm: ideal.norm_ideal(), ideal, right_units, parent: rec.parent })
}

pub fn verify_classes(art: &ClassesArtifact, rep: &mut VerifyReport) -> Result<(), CliError> {
    let alg = algebra_from_record(&art.algebra)?;
    let field = alg.field.clone();
    let orders = verify_orders(&art.algebra, &art.orders, rep)?;
    if orders.len() != art.orders.len() {
        return Ok(());
    }
    let mut prev: Option<IdealClassSet> = None;
    for (lv, level) in art.levels.iter().enumerate() {
        let Some(order) = orders.get(level.order) else {
            rep.fail(format!("level {lv}: order R{} missing", level.order));
            return Ok(());
        };
        let classes = level.classes.iter().map(|c| rebuild_class(&alg, c)).collect::<Result<Vec<_>, _>>()?;
        rep.check(level.class_number == classes.len(), format!("level {lv}: class number {}", level.class_number));
        for (c, r) in classes.iter().zip(&level.classes) {
            let ok = c.ideal.basis() == &r.basis
                && c.ideal.left_order() == order.lattice
                && c.norm == r.norm
                && c.right_unit_count() == r.right_units;
            rep.check(ok, format!("level {lv} class {}: left ideal of R{}, norm {}, {} units", r.id, level.order, r.norm, r.right_units));
        }
        let set = IdealClassSet { order: order.clone(), classes };
        match &prev {
            None => {
                let principal = set.len() == 1 && set.classes[0].ideal == order.lattice;
                rep.check(principal, format!("level {lv}: starting order is its only class"));
            }
            Some(parent) => {
                let Some(step) = &art.orders[level.order].step else {
                    rep.fail(format!("level {lv}: no step record"));
                    return Ok(());
                };
                let prime = parse_prime(&field, &step.prime)?;
                verify_step(lv, parent, &set, &prime, level.step.as_ref(), rep)?;
            }
        }
        prev = Some(set);
    }
    Ok(())
}

fn verify_step(
    lv: usize,
    parent: &IdealClassSet,
    set: &IdealClassSet,
    prime: &PrimeIdeal,
    stored: Option<&StepReport>,
    rep: &mut VerifyReport,
) -> Result<(), CliError> {
    let (order, sub) = (&parent.order, &set.order);
    let idx = unit_index(order, sub, prime)?;
    if let Some(s) = stored {
        rep.check(s.unit_index == idx, format!("level {lv}: unit index {idx} at {}", prime.p));
    }
    let mut claimed = vec![false; set.len()];
    for (pi, pc) in parent.classes.iter().enumerate() {
        let local = psi_local(&pc.ideal, order, sub, prime)?;
        let global = psi_global(&pc.ideal, order, sub, prime)?;
        let agree = psi_methods_agree(&local, &global);
        rep.check(agree, format!("level {lv} parent {pi}: |Psi| = {} by local units and by colon lattices", local.len()));
        let orbs = orbits(&local, &pc.right_units)?;
        let mut report = ParentReport {
            parent: pi,
            psi_size: local.len(),
            parent_units: pc.right_units.order(),
            orbit_sizes: orbs.iter().map(|o| o.len()).collect(),
            stabilizer_units: Vec::new(),
            methods_agree: Some(agree),
        };
        // each orbit must hold exactly one stored child
        let mut hits = vec![0usize; orbs.len()];
        for (ci, c) in set.classes.iter().enumerate().filter(|(_, c)| c.parent == Some(pi)) {
            claimed[ci] = true;
            let pos = local.iter().position(|j| *j == c.ideal);
            match pos.and_then(|p| orbs.iter().position(|o| o.contains(&p))) {
                Some(o) => hits[o] += 1,
                None => rep.fail(format!("level {lv} class {ci}: not in Psi of parent {pi}")),
            }
            rep.check(c.norm == pc.norm, format!("level {lv} class {ci}: norm equals parent norm"));
        }
        rep.check(hits.iter().all(|&h| h == 1), format!("level {lv} parent {pi}: {} orbits, one class each", orbs.len()));
        for orb in &orbs {
            let j = &local[orb[0]];
            report.stabilizer_units.push(pc.right_units.restrict(&j.right_order()).order());
        }
        rep.check(report.identity_holds(), format!("level {lv} parent {pi}: {}", report.identity_line()));
        if let Some(s) = stored {
            let same = s.parents.get(pi).is_some_and(|p| p.psi_size == report.psi_size && p.parent_units == report.parent_units);
            rep.check(same, format!("level {lv} parent {pi}: stored report matches"));
        }
    }
    rep.check(claimed.iter().all(|&c| c), format!("level {lv}: every class has a parent"));
    Ok(())
}
