//! Theorem-check registry, instance families and sweep drivers.
//!
//! Each [`CheckId`] maps a parameter bag to a [`CheckReport`]. Exact checks
//! decide their hypotheses and conclusions with certified rational
//! enclosures ([`crate::bounds`]); estimate checks report `lhs / rhs_shape`
//! as an empirical implied constant. Nothing here touches `std`: timing and
//! parallelism live in the companion crate.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

use crate::field::Prime;
use crate::incidence::{Plane, Point3};
use crate::rational::RationalSet;
use crate::sets::ResidueSet;
use crate::{Error, Result};

mod checks;
mod family;

pub use family::{FamilyKind, InstanceFamily};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CheckId {
    Plunnecke,
    MishaInc,
    AaEnergy,
    EpIneq,
    ChangeQg,
    TkSubgroup,
    HolderQ,
    ExpSum,
    QShiftEk,
    QCap,
    Eqa,
    TkSmallProd,
    TkReal,
    QgEk,
    QCapM,
    EqaM,
    QmShift,
    Abc,
    Expander,
    TwoThirds,
    BourgainTk,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    AssertExact,
    EstimateConstant,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::AssertExact => "assert_exact",
            Mode::EstimateConstant => "estimate_constant",
        }
    }

    pub fn parse(s: &str) -> Option<Mode> {
        [Mode::AssertExact, Mode::EstimateConstant].into_iter().find(|m| m.name() == s)
    }
}

impl CheckId {
    pub const ALL: [CheckId; 21] = [
        CheckId::Plunnecke,
        CheckId::MishaInc,
        CheckId::AaEnergy,
        CheckId::EpIneq,
        CheckId::ChangeQg,
        CheckId::TkSubgroup,
        CheckId::HolderQ,
        CheckId::ExpSum,
        CheckId::QShiftEk,
        CheckId::QCap,
        CheckId::Eqa,
        CheckId::TkSmallProd,
        CheckId::TkReal,
        CheckId::QgEk,
        CheckId::QCapM,
        CheckId::EqaM,
        CheckId::QmShift,
        CheckId::Abc,
        CheckId::Expander,
        CheckId::TwoThirds,
        CheckId::BourgainTk,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CheckId::Plunnecke => "PLUNNECKE",
            CheckId::MishaInc => "MISHA_INC",
            CheckId::AaEnergy => "AA_ENERGY",
            CheckId::EpIneq => "EP_INEQ",
            CheckId::ChangeQg => "CHANGE_QG",
            CheckId::TkSubgroup => "TK_SUBGROUP",
            CheckId::HolderQ => "HOLDER_Q",
            CheckId::ExpSum => "EXP_SUM",
            CheckId::QShiftEk => "Q_SHIFT_EK",
            CheckId::QCap => "Q_CAP",
            CheckId::Eqa => "EQA",
            CheckId::TkSmallProd => "TK_SMALL_PROD",
            CheckId::TkReal => "TK_REAL",
            CheckId::QgEk => "QG_EK",
            CheckId::QCapM => "Q_CAP_M",
            CheckId::EqaM => "EQA_M",
            CheckId::QmShift => "QM_SHIFT",
            CheckId::Abc => "ABC",
            CheckId::Expander => "EXPANDER",
            CheckId::TwoThirds => "TWO_THIRDS",
            CheckId::BourgainTk => "BOURGAIN_TK",
        }
    }

    pub fn parse(s: &str) -> Result<CheckId> {
        CheckId::ALL.into_iter().find(|c| c.name() == s).ok_or_else(|| Error::UnknownCheck(s.to_string()))
    }

    pub fn mode(self) -> Mode {
        use CheckId::*;
        match self {
            MishaInc | AaEnergy | ChangeQg | ExpSum | QCap | Eqa | Expander | TwoThirds | BourgainTk => {
                Mode::EstimateConstant
            }
            _ => Mode::AssertExact,
        }
    }

    /// One-line description of the instantiated statement.
    pub fn title(self) -> &'static str {
        match self {
            CheckId::Plunnecke => {
                "Plünnecke–Ruzsa: a subset X of A with |X+B1+…+Bh| ≤ α1…αh|X|, and the large-X variant"
            }
            CheckId::MishaInc => "point–plane incidences against |P|²/p + |P|^{3/2} + k|P|",
            CheckId::AaEnergy => "E+(Q) against M²|Q|⁴/p + M^{3/2}|Q|³/|A|^{1/2} when |QA| ≤ M|Q|",
            CheckId::EpIneq => "(Σ_{x∈P} r^k_{A−A}(x))² ≤ |A|^k Σ r^k_{A−A} r_{P−P}, and the fourth-power form",
            CheckId::ChangeQg => "(Σ_{x∈P} r^k_{A−A})⁴ against |A|^{2k} E_{2k}(AB)(|P|⁴/p + |P|³/|B|^{1/2})",
            CheckId::TkSubgroup => "T_{2^k}(Γ) for a multiplicative subgroup",
            CheckId::HolderQ => "T_{2^k}(Q) for a Γ-invariant set",
            CheckId::ExpSum => "max_{ξ≠0}|Γ̂(ξ)| against |Γ|p^{−δ/2^{7+2/δ}}",
            CheckId::QShiftEk => "E_{2^{k+1}}(Q) for Γ-invariant Q, both forms",
            CheckId::QCap => "max_{x≠0}|Q1 ∩ (Q2+x)| for Γ-invariant sets",
            CheckId::Eqa => "E+(A,Q) and E×(A,Q+α) for Γ-invariant Q",
            CheckId::TkSmallProd => "T_{2^k}(A) when |AB| ≤ M|A| over F_p",
            CheckId::TkReal => "T_{2^k}(A) when |AB| ≤ M|A| over the rationals",
            CheckId::QgEk => "E_{2^{k+1}}(Q) when |QΓ^{k+1}| ≤ M|Q|: dichotomy and the chosen-k form",
            CheckId::QCapM => "max_{x≠0}|Q1 ∩ (Q2+x)| under small products with Γ",
            CheckId::EqaM => "|A+Q| and |A(Q+α)| lower bounds when |QΓ| ≤ M|Q|",
            CheckId::QmShift => "max_{x≠0}|Q ∩ (Q'+x)| when |QΓ|, |Q'Γ| ≤ M|Q|",
            CheckId::Abc => "asymmetric sum–product: four lower bounds in |AB|, |A+C|, |(A+α)C|, energies",
            CheckId::Expander => "growth of R[A]φ(A) over the rationals",
            CheckId::TwoThirds => "max_{x≠0}|Γ ∩ (Γ+x)| against |Γ|^{2/3}, and R[Γ] ⊆ Q[Γ] ∩ (1−Q[Γ])",
            CheckId::BourgainTk => "T_k(Γ) against the equidistributed value |Γ|^{2k}/p (narrative)",
        }
    }
}

impl fmt::Display for CheckId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A parameter or detail value.
#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Int(i64),
    Big(BigUint),
    Real(f64),
    Rational(BigRational),
    Bool(bool),
    Text(String),
    Set(Vec<u64>),
    Sets(Vec<Vec<u64>>),
    RationalSet(Vec<BigRational>),
    Points(Vec<Point3>),
    Planes(Vec<Plane>),
}

impl From<i64> for Value {
    fn from(v: i64) -> Self {
        Value::Int(v)
    }
}

impl From<BigUint> for Value {
    fn from(v: BigUint) -> Self {
        Value::Big(v)
    }
}

impl From<f64> for Value {
    fn from(v: f64) -> Self {
        Value::Real(v)
    }
}

impl From<bool> for Value {
    fn from(v: bool) -> Self {
        Value::Bool(v)
    }
}

impl From<&str> for Value {
    fn from(v: &str) -> Self {
        Value::Text(v.to_string())
    }
}

impl From<&ResidueSet> for Value {
    fn from(v: &ResidueSet) -> Self {
        Value::Set(v.members().to_vec())
    }
}

impl From<&RationalSet> for Value {
    fn from(v: &RationalSet) -> Self {
        Value::RationalSet(v.members().to_vec())
    }
}

impl From<BigRational> for Value {
    fn from(v: BigRational) -> Self {
        Value::Rational(v)
    }
}

pub type Details = BTreeMap<String, Value>;

/// Named inputs of a check, in key order.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Params(BTreeMap<String, Value>);

fn malformed(key: &str, what: &str) -> Error {
    Error::MalformedParams(format!("field `{key}`: {what}"))
}

impl Params {
    pub fn new() -> Self {
        Params(BTreeMap::new())
    }

    pub fn with(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.insert(key, value);
        self
    }

    pub fn insert(&mut self, key: &str, value: impl Into<Value>) {
        self.0.insert(key.to_string(), value.into());
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.0.get(key)
    }

    pub fn contains(&self, key: &str) -> bool {
        self.0.contains_key(key)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &Value)> {
        self.0.iter()
    }

    fn need(&self, key: &str) -> Result<&Value> {
        self.0.get(key).ok_or_else(|| malformed(key, "missing"))
    }

    pub fn int(&self, key: &str) -> Result<i64> {
        match self.need(key)? {
            Value::Int(v) => Ok(*v),
            Value::Big(v) => v.to_i64().ok_or_else(|| malformed(key, "out of range")),
            _ => Err(malformed(key, "expected an integer")),
        }
    }

    pub fn int_or(&self, key: &str, default: i64) -> Result<i64> {
        if self.contains(key) {
            self.int(key)
        } else {
            Ok(default)
        }
    }

    pub fn prime(&self) -> Result<Prime> {
        let p = self.int("p")?;
        if p < 2 {
            return Err(malformed("p", "not a prime"));
        }
        Prime::new(p as u64).map_err(|_| malformed("p", "not a prime"))
    }

    pub fn set(&self, key: &str) -> Result<ResidueSet> {
        let p = self.prime()?;
        match self.need(key)? {
            Value::Set(xs) => {
                ResidueSet::new(p, xs.iter().copied()).map_err(|_| malformed(key, "residue out of range"))
            }
            _ => Err(malformed(key, "expected a set")),
        }
    }

    pub fn sets(&self, key: &str) -> Result<Vec<ResidueSet>> {
        let p = self.prime()?;
        match self.need(key)? {
            Value::Sets(list) => list
                .iter()
                .map(|xs| ResidueSet::new(p, xs.iter().copied()).map_err(|_| malformed(key, "residue out of range")))
                .collect(),
            _ => Err(malformed(key, "expected a list of sets")),
        }
    }

    pub fn rational_set(&self, key: &str) -> Result<RationalSet> {
        match self.need(key)? {
            Value::RationalSet(xs) => Ok(RationalSet::new(xs.iter().cloned())),
            Value::Set(xs) => Ok(RationalSet::new(xs.iter().map(|&x| BigRational::from_integer(x.into())))),
            _ => Err(malformed(key, "expected a rational set")),
        }
    }

    pub fn rational(&self, key: &str) -> Result<BigRational> {
        match self.need(key)? {
            Value::Rational(q) => Ok(q.clone()),
            Value::Int(v) => Ok(BigRational::from_integer((*v).into())),
            _ => Err(malformed(key, "expected a rational")),
        }
    }

    pub fn text(&self, key: &str) -> Result<&str> {
        match self.need(key)? {
            Value::Text(s) => Ok(s),
            _ => Err(malformed(key, "expected text")),
        }
    }

    pub fn points(&self, key: &str) -> Result<&[Point3]> {
        match self.need(key)? {
            Value::Points(v) => Ok(v),
            _ => Err(malformed(key, "expected points")),
        }
    }

    pub fn planes(&self, key: &str) -> Result<&[Plane]> {
        match self.need(key)? {
            Value::Planes(v) => Ok(v),
            _ => Err(malformed(key, "expected planes")),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckSpec {
    pub check_id: CheckId,
    pub params: Params,
    pub mode: Mode,
}

impl CheckSpec {
    /// A spec in the registry's mode for `check_id`.
    pub fn new(check_id: CheckId, params: Params) -> Self {
        CheckSpec { check_id, params, mode: check_id.mode() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    ReportOnly,
    HypothesisSkipped,
    /// The check itself could not run (malformed input, budget).
    Error,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::ReportOnly => "report-only",
            Verdict::HypothesisSkipped => "hypothesis-skipped",
            Verdict::Error => "error",
        }
    }

    pub fn parse(s: &str) -> Option<Verdict> {
        [Verdict::Pass, Verdict::Fail, Verdict::ReportOnly, Verdict::HypothesisSkipped, Verdict::Error]
            .into_iter()
            .find(|v| v.name() == s)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Lhs {
    Exact(BigUint),
    Real(f64),
}

impl Lhs {
    pub fn to_f64(&self) -> f64 {
        match self {
            Lhs::Exact(v) => v.to_f64().unwrap_or(f64::INFINITY),
            Lhs::Real(v) => *v,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckReport {
    pub check_id: CheckId,
    pub params: Params,
    pub lhs: Option<Lhs>,
    pub rhs_shape: Option<f64>,
    pub implied_constant: Option<f64>,
    pub verdict: Verdict,
    pub details: Details,
    pub elapsed_ms: Option<u64>,
}

impl CheckReport {
    pub fn detail(&self, key: &str) -> Option<&Value> {
        self.details.get(key)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct HarnessConfig {
    /// The absolute constant used inside gates and right-hand sides.
    pub c_star: BigRational,
    pub two_thirds_ceiling: f64,
    pub misha_ceiling: f64,
    /// Largest `|A|` for the exhaustive Plünnecke subset search.
    pub plunnecke_max: usize,
    /// Largest `k` tried when a statement asks to choose `k`.
    pub max_k_search: u32,
}

impl Default for HarnessConfig {
    fn default() -> Self {
        HarnessConfig {
            c_star: BigRational::one(),
            two_thirds_ceiling: 4.0,
            misha_ceiling: 8.0,
            plunnecke_max: 14,
            max_k_search: 64,
        }
    }
}

pub fn run_check(spec: &CheckSpec, config: &HarnessConfig) -> Result<CheckReport> {
    if spec.mode != spec.check_id.mode() {
        return Err(Error::MalformedParams(format!(
            "{} runs in {} mode, not {}",
            spec.check_id,
            spec.check_id.mode().name(),
            spec.mode.name()
        )));
    }
    checks::dispatch(spec, config)
}

/// [`run_check`] with errors folded into an [`Verdict::Error`] report, as sweeps need.
pub fn run_check_captured(spec: &CheckSpec, config: &HarnessConfig) -> CheckReport {
    run_check(spec, config).unwrap_or_else(|e| {
        let mut details = Details::new();
        details.insert("error".into(), Value::Text(e.to_string()));
        CheckReport {
            check_id: spec.check_id,
            params: spec.params.clone(),
            lhs: None,
            rhs_shape: None,
            implied_constant: None,
            verdict: Verdict::Error,
            details,
            elapsed_ms: None,
        }
    })
}

/// Every instance of `family` for each check, in order.
pub fn instances(family: &InstanceFamily, checks: &[CheckId]) -> Vec<CheckSpec> {
    checks.iter().flat_map(|&c| family.instances(c)).collect()
}

/// Sequential sweep; the companion crate offers an order-preserving parallel one.
pub fn sweep(family: &InstanceFamily, checks: &[CheckId], config: &HarnessConfig) -> Vec<CheckReport> {
    instances(family, checks).iter().map(|s| run_check_captured(s, config)).collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct Summary {
    pub check_id: CheckId,
    pub count: usize,
    pub pass: usize,
    pub fail: usize,
    pub report_only: usize,
    pub skipped: usize,
    pub errors: usize,
    pub min_constant: Option<f64>,
    pub max_constant: Option<f64>,
}

impl Summary {
    fn empty(check_id: CheckId) -> Self {
        Summary {
            check_id,
            count: 0,
            pass: 0,
            fail: 0,
            report_only: 0,
            skipped: 0,
            errors: 0,
            min_constant: None,
            max_constant: None,
        }
    }
}

/// One row per check id present, in registry order.
pub fn summarize(reports: &[CheckReport]) -> Vec<Summary> {
    let mut rows: BTreeMap<CheckId, Summary> = BTreeMap::new();
    for r in reports {
        let s = rows.entry(r.check_id).or_insert_with(|| Summary::empty(r.check_id));
        s.count += 1;
        match r.verdict {
            Verdict::Pass => s.pass += 1,
            Verdict::Fail => s.fail += 1,
            Verdict::ReportOnly => s.report_only += 1,
            Verdict::HypothesisSkipped => s.skipped += 1,
            Verdict::Error => s.errors += 1,
        }
        if let Some(c) = r.implied_constant.filter(|c| c.is_finite()) {
            s.min_constant = Some(s.min_constant.map_or(c, |m| m.min(c)));
            s.max_constant = Some(s.max_constant.map_or(c, |m| m.max(c)));
        }
    }
    rows.into_values().collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct GlobalConstant {
    pub check_id: CheckId,
    pub value: f64,
    pub admissible: usize,
    pub family: String,
}

/// The largest implied constant of `check_id` over `family`.
pub fn estimate_global_constant(
    check_id: CheckId,
    family: &InstanceFamily,
    config: &HarnessConfig,
) -> Result<GlobalConstant> {
    if check_id.mode() != Mode::EstimateConstant {
        return Err(Error::NotEstimateMode(check_id.name()));
    }
    let mut best: Option<f64> = None;
    let mut admissible = 0;
    for spec in family.instances(check_id) {
        let report = run_check_captured(&spec, config);
        if let Some(c) = report.implied_constant.filter(|c| c.is_finite()) {
            admissible += 1;
            best = Some(best.map_or(c, |b| b.max(c)));
        }
    }
    let value = best.ok_or(Error::NoAdmissibleInstances)?;
    Ok(GlobalConstant { check_id, value, admissible, family: family.fingerprint() })
}
