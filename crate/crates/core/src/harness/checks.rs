//! One function per registry entry.
//!
//! Gates are recorded as `gate.<name>` booleans and conclusions as
//! `holds.<name>`. An undecided comparison (enclosures never separated) is a
//! failed gate and a failed conclusion, and is flagged with `<key>.undecided`.

use alloc::format;
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::{CheckId, CheckReport, CheckSpec, Details, HarnessConfig, Lhs, Params, Value, Verdict};
use crate::bounds::{decide_le, minimal_constant, rat, Decision, Expr};
use crate::energy::{additive_energy, e_energy, multiplicative_energy, t_energy};
use crate::fourier::max_nontrivial_coefficient;
use crate::incidence::{count_incidences, max_collinear, misha_shape, PlaneSet, PointSet3};
use crate::rational::{combine_rational, expander_statistic, iterated_sumset, Phi};
use crate::sets::{combine, rep_function, ResidueSet, SetOp};
use crate::subgroup::{
    invariant_set, power_product, shift_intersection_profile, subgroup_of_order, subgroup_quotient_set,
    subgroup_ratio_set, Subgroup,
};
use crate::{Error, Result};

pub(super) fn dispatch(spec: &CheckSpec, cfg: &HarnessConfig) -> Result<CheckReport> {
    let p = &spec.params;
    let draft = match spec.check_id {
        CheckId::Plunnecke => plunnecke(p, cfg),
        CheckId::MishaInc => misha(p, cfg),
        CheckId::AaEnergy => aa_energy(p),
        CheckId::EpIneq => ep_ineq(p),
        CheckId::ChangeQg => change_qg(p),
        CheckId::TkSubgroup => tk_subgroup(p, cfg),
        CheckId::HolderQ => holder_q(p, cfg),
        CheckId::ExpSum => exp_sum(p),
        CheckId::QShiftEk => q_shift(p, cfg),
        CheckId::QCap => q_cap(p, cfg),
        CheckId::Eqa => eqa(p, cfg),
        CheckId::TkSmallProd => tk_small_prod(p, cfg),
        CheckId::TkReal => tk_real(p, cfg),
        CheckId::QgEk => qg(p, cfg),
        CheckId::QCapM => q_cap_m(p, cfg),
        CheckId::EqaM => eqa_m(p, cfg),
        CheckId::QmShift => qm_shift(p, cfg),
        CheckId::Abc => abc(p, cfg),
        CheckId::Expander => expander(p),
        CheckId::TwoThirds => two_thirds(p, cfg),
        CheckId::BourgainTk => bourgain(p),
    }?;
    Ok(CheckReport {
        check_id: spec.check_id,
        params: spec.params.clone(),
        lhs: draft.lhs,
        rhs_shape: draft.rhs_shape,
        implied_constant: draft.implied,
        verdict: draft.verdict,
        details: draft.details,
        elapsed_ms: None,
    })
}

struct Draft {
    lhs: Option<Lhs>,
    rhs_shape: Option<f64>,
    implied: Option<f64>,
    verdict: Verdict,
    details: Details,
}

impl Draft {
    fn new() -> Self {
        Draft {
            lhs: None,
            rhs_shape: None,
            implied: None,
            verdict: Verdict::HypothesisSkipped,
            details: Details::new(),
        }
    }

    fn put(&mut self, key: &str, value: impl Into<Value>) {
        self.details.insert(key.to_string(), value.into());
    }

    fn flag(&mut self, key: &str, ok: bool) -> bool {
        self.put(&format!("gate.{key}"), ok);
        ok
    }

    fn record(&mut self, key: &str, d: Decision) -> bool {
        self.put(key, d.holds());
        if d == Decision::Undecided {
            self.put(&format!("{key}.undecided"), true);
        }
        d.holds()
    }

    /// Gate `lhs ≤ rhs`.
    fn gate(&mut self, key: &str, lhs: &Expr, rhs: &Expr) -> bool {
        self.record(&format!("gate.{key}"), decide_le(lhs, rhs))
    }

    /// Conclusion `lhs ≤ rhs`.
    fn holds(&mut self, key: &str, lhs: &Expr, rhs: &Expr) -> bool {
        self.record(&format!("holds.{key}"), decide_le(lhs, rhs))
    }

    fn exact(&mut self, admitted: bool, holds: bool) {
        self.verdict = match (admitted, holds) {
            (false, _) => Verdict::HypothesisSkipped,
            (true, true) => Verdict::Pass,
            (true, false) => Verdict::Fail,
        };
    }

    fn estimate(&mut self, lhs: Lhs, shape: f64) {
        let ratio = lhs.to_f64() / shape;
        self.lhs = Some(lhs);
        self.rhs_shape = Some(shape);
        self.implied = ratio.is_finite().then_some(ratio);
        self.verdict = Verdict::ReportOnly;
    }

    fn min_c(&mut self, key: &str, c: Option<BigRational>) {
        match c {
            Some(c) => self.put(key, c),
            None => self.put(key, "none"),
        }
    }
}

fn z(x: usize) -> Expr {
    Expr::int(x as u64)
}

fn zb(x: &BigUint) -> Expr {
    Expr::big(x)
}

fn two(e: i64) -> Expr {
    Expr::int(2u64).powi(e)
}

fn cst(c: &BigRational) -> Expr {
    Expr::rational(c.clone())
}

fn ratio(n: usize, d: usize) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// `max(1, n/d)`: the smallest admissible `M ≥ 1` with `n ≤ M d`.
fn growth(n: usize, d: usize) -> BigRational {
    ratio(n, d).max(BigRational::one())
}

fn malformed(key: &str, what: &str) -> Error {
    Error::MalformedParams(format!("field `{key}`: {what}"))
}

fn k_param(params: &Params, lo: i64, hi: i64) -> Result<i64> {
    let k = params.int("k")?;
    if k < lo || k > hi {
        return Err(malformed("k", &format!("expected {lo} ≤ k ≤ {hi}")));
    }
    Ok(k)
}

fn subgroup_param(params: &Params) -> Result<Subgroup> {
    let p = params.prime()?;
    let d = params.int("order")?;
    if d < 1 {
        return Err(malformed("order", "must be positive"));
    }
    subgroup_of_order(p, d as u64).map_err(|_| malformed("order", "must divide p − 1"))
}

fn invariant_param(params: &Params, gamma: &Subgroup, key: &str) -> Result<ResidueSet> {
    let reps = params.set(key)?;
    if reps.contains(0) {
        return Err(malformed(key, "coset representatives must be nonzero"));
    }
    Ok(invariant_set(gamma, &reps)?.members().clone())
}

fn alpha_param(params: &Params) -> Result<u64> {
    let p = params.prime()?.get() as i64;
    Ok(params.int("alpha")?.rem_euclid(p) as u64)
}

fn nonzero_free(s: &ResidueSet) -> bool {
    !s.contains(0)
}

/// `p^{-δ/2^{7+2/δ}}` with `p^δ = |Γ|`, evaluated as `|Γ|^{-1/2^{7+2/δ}}`.
fn exp_sum_saving(order: usize, p: u64) -> f64 {
    let delta = libm::log(order as f64) / libm::log(p as f64);
    libm::pow(order as f64, -1.0 / libm::pow(2.0, 7.0 + 2.0 / delta))
}

// ---------------------------------------------------------------------------

fn plunnecke(params: &Params, cfg: &HarnessConfig) -> Result<Draft> {
    let a = params.set("A")?;
    let bs = params.sets("Bs")?;
    let delta = if params.contains("delta") { params.rational("delta")? } else { rat(1, 2) };
    if delta <= BigRational::zero() || delta >= BigRational::one() {
        return Err(malformed("delta", "expected 0 < δ < 1"));
    }
    if a.len() > cfg.plunnecke_max {
        return Err(Error::BudgetExceeded { estimated: 1u128 << a.len(), budget: 1u128 << cfg.plunnecke_max });
    }
    let mut d = Draft::new();
    let ok = d.flag("nonempty_a", !a.is_empty()) & d.flag("h_positive", !bs.is_empty());
    if !ok {
        return Ok(d);
    }
    let h = bs.len() as u32;
    let mut sum = bs[0].clone();
    for b in &bs[1..] {
        sum = combine(&sum, b, SetOp::Sum)?;
    }
    let mut growth_product = BigUint::one();
    for b in &bs {
        growth_product *= combine(&a, b, SetOp::Sum)?.len();
    }
    let n = a.len();
    let na_h = BigUint::from(n).pow(h);
    let (num, den) = (delta.numer().to_biguint().unwrap(), delta.denom().to_biguint().unwrap());
    let num_h = num.pow(h);
    let den_h = den.pow(h);

    // Rows of a ⊕ S as bitmaps; |X + S| is the popcount of their union.
    let p = a.modulus().get() as usize;
    let words = p.div_ceil(64);
    let rows: Vec<Vec<u64>> = a
        .iter()
        .map(|x| {
            let mut row = vec![0u64; words];
            for s in sum.translate(x).iter() {
                row[s as usize / 64] |= 1 << (s % 64);
            }
            row
        })
        .collect();
    let size_of = |idx: &[usize]| -> usize {
        let mut acc = vec![0u64; words];
        for &i in idx {
            for (w, r) in acc.iter_mut().zip(&rows[i]) {
                *w |= r;
            }
        }
        acc.iter().map(|w| w.count_ones() as usize).sum()
    };

    // Largest subsets first, lexicographic within a size, so X = A is tried first.
    let mut first: Option<(Vec<usize>, usize)> = None;
    let mut large: Option<(Vec<usize>, usize)> = None;
    let mut searched = 0u64;
    'sizes: for size in (1..=n).rev() {
        let admissible_large = BigUint::from(size) * &den >= (&den - &num) * BigUint::from(n);
        let mut idx: Vec<usize> = (0..size).collect();
        loop {
            searched += 1;
            let s = size_of(&idx);
            let lhs = BigUint::from(s) * &na_h;
            if first.is_none() && lhs <= &growth_product * size {
                first = Some((idx.clone(), s));
            }
            if large.is_none() && admissible_large && &lhs * &num_h <= &den_h * &growth_product * size {
                large = Some((idx.clone(), s));
            }
            if first.is_some() && large.is_some() {
                break 'sizes;
            }
            // next combination
            let mut i = size;
            while i > 0 && idx[i - 1] == n - size + i - 1 {
                i -= 1;
            }
            if i == 0 {
                break;
            }
            idx[i - 1] += 1;
            for j in i..size {
                idx[j] = idx[j - 1] + 1;
            }
        }
    }
    let members = |idx: &[usize]| Value::Set(idx.iter().map(|&i| a.members()[i]).collect());
    let alpha = BigRational::new(growth_product.clone().into(), na_h.clone().into());
    d.put("alpha_product", alpha.clone());
    d.put("subsets_searched", searched as i64);
    d.put("holds.witness", first.is_some());
    d.put("holds.witness_large", large.is_some());
    if let Some((idx, s)) = &first {
        d.put("witness", members(idx));
        d.lhs = Some(Lhs::Exact(BigUint::from(*s)));
        d.rhs_shape = Some(alpha.to_f64().unwrap_or(f64::NAN) * idx.len() as f64);
    }
    if let Some((idx, s)) = &large {
        d.put("witness_large", members(idx));
        d.put("witness_large_sumset", BigUint::from(*s));
    }
    d.exact(true, first.is_some() && large.is_some());
    Ok(d)
}

fn misha(params: &Params, cfg: &HarnessConfig) -> Result<Draft> {
    let p = params.prime()?;
    let points = PointSet3::new(p, params.points("points")?.iter().copied())
        .map_err(|_| malformed("points", "coordinates out of range"))?;
    let planes = PlaneSet::new(p, params.planes("planes")?.iter().copied())
        .map_err(|_| malformed("planes", "zero normal or out of range"))?;
    let mut d = Draft::new();
    d.put("odd_p", p.is_odd());
    d.put("equal_sizes", points.len() == planes.len());
    d.put("points", points.len() as i64);
    d.put("planes", planes.len() as i64);
    if !d.flag("nonempty", !points.is_empty()) {
        return Ok(d);
    }
    let incidences = count_incidences(&points, &planes)?;
    let k = max_collinear(&points);
    d.put("max_collinear", k as i64);
    d.estimate(Lhs::Exact(incidences), misha_shape(points.len(), p, k));
    d.put("within_ceiling", d.implied.is_some_and(|c| c <= cfg.misha_ceiling));
    Ok(d)
}

fn aa_energy(params: &Params) -> Result<Draft> {
    let p = params.prime()?;
    let q = params.set("Q")?;
    let a = params.set("A")?;
    let mut d = Draft::new();
    let ok = d.flag("a_not_zero", !a.nonzero().is_empty()) & d.flag("q_not_zero", !q.nonzero().is_empty());
    if !ok {
        return Ok(d);
    }
    let qa = combine(&q, &a, SetOp::Product)?;
    let m = growth(qa.len(), q.len());
    let mf = m.to_f64().unwrap();
    let (nq, na) = (q.len() as f64, a.len() as f64);
    let shape =
        mf * mf * libm::pow(nq, 4.0) / p.get() as f64 + libm::pow(mf, 1.5) * libm::pow(nq, 3.0) / libm::sqrt(na);
    d.put("qa_size", qa.len() as i64);
    d.put("M", m);
    d.estimate(Lhs::Exact(additive_energy(&q, &q)?), shape);
    Ok(d)
}

fn ep_ineq(params: &Params) -> Result<Draft> {
    let a = params.set("A")?;
    let pset = params.set("P")?;
    let k = k_param(params, 0, 16)? as u32;
    let mut d = Draft::new();
    if !d.flag("k_positive", k >= 1) {
        return Ok(d);
    }
    let r = rep_function(&a, &a, SetOp::Difference)?;
    let rk = r.pointwise_pow(k);
    let s: BigUint = pset.iter().map(|x| rk.get(x).clone()).sum();
    let rpp = rep_function(&pset, &pset, SetOp::Difference)?;
    let na_k = BigUint::from(a.len()).pow(k);
    let lhs1 = &s * &s;
    let rhs1 = &na_k * rk.inner(&rpp)?;
    let lhs2 = lhs1.pow(2);
    let rhs2 = &na_k * &na_k * r.power_sum(2 * k) * additive_energy(&pset, &pset)?;
    let (h1, h2) = (lhs1 <= rhs1, lhs2 <= rhs2);
    d.put("holds.first", h1);
    d.put("holds.fourth_power", h2);
    d.put("rhs_first", rhs1.clone());
    d.put("lhs_fourth_power", lhs2);
    d.put("rhs_fourth_power", rhs2);
    d.rhs_shape = rhs1.to_f64();
    d.lhs = Some(Lhs::Exact(lhs1));
    d.exact(true, h1 && h2);
    Ok(d)
}

fn change_qg(params: &Params) -> Result<Draft> {
    let p = params.prime()?;
    let a = params.set("A")?;
    let b = params.set("B")?;
    let pset = params.set("P")?;
    let k = k_param(params, 0, 8)? as u32;
    let mut d = Draft::new();
    let ok = d.flag("k_positive", k >= 1)
        & d.flag("b_in_units", nonzero_free(&b))
        & d.flag("p_in_units", nonzero_free(&pset))
        & d.flag("nonempty", !a.is_empty() && !b.is_empty() && !pset.is_empty());
    if !ok {
        return Ok(d);
    }
    let r = rep_function(&a, &a, SetOp::Difference)?.pointwise_pow(k);
    let s: BigUint = pset.iter().map(|x| r.get(x).clone()).sum();
    let ab = combine(&a, &b, SetOp::Product)?;
    let e2k = e_energy(&ab, 2 * k)?;
    let lhs = s.pow(4);
    let scale = BigUint::from(a.len()).pow(2 * k) * &e2k;
    let np = pset.len() as f64;
    let tail = libm::pow(np, 4.0) / p.get() as f64 + libm::pow(np, 3.0) / libm::sqrt(b.len() as f64);
    let exact_part = BigRational::new(lhs.clone().into(), scale.clone().into()).to_f64().unwrap_or(f64::INFINITY);
    d.put("e2k_ab", e2k);
    d.lhs = Some(Lhs::Exact(lhs));
    d.rhs_shape = scale.to_f64().map(|s| s * tail);
    d.implied = Some(exact_part / tail).filter(|c| c.is_finite());
    d.verdict = Verdict::ReportOnly;
    Ok(d)
}

/// Minimal `C ≥ 1` for a conclusion whose right side is nondecreasing in `C`.
fn monotone_min_c(lhs: &Expr, rhs: impl Fn(&Expr) -> Expr) -> Option<BigRational> {
    minimal_constant(lhs, rhs)
}

/// `T_{2^k}(Γ)` bound with `size` the set measured in the first term and
/// `tail` the factor multiplying the second term.
fn tk_gamma_rhs(k: i64, c: &Expr, order: usize, p: u64, main: Expr, tail: Expr) -> Expr {
    let l = z(order).log2();
    let t1 = two(4 * k + 6) * c.clone() * l.clone().powi(4) * main / Expr::int(p);
    let t2 = Expr::int(16u64).powi(k * k) * c.clone().powi(k - 1) * l.powi(4 * (k - 1)) * tail;
    t1 + t2
}

fn tk_gates(d: &mut Draft, k: i64, order: usize, c: &BigRational) -> bool {
    let k_ok = d.flag("k_at_least_2", k >= 2);
    // 2^{64k} C⁴ ≤ |Γ|
    let size_ok = d.gate("size", &(two(64 * k) * cst(c).powi(4)), &z(order));
    k_ok && size_ok
}

fn tk_subgroup(params: &Params, cfg: &HarnessConfig) -> Result<Draft> {
    let p = params.prime()?;
    let gamma = subgroup_param(params)?;
    let k = k_param(params, 0, 6)?;
    let g = gamma.members();
    let n = g.len();
    let mut d = Draft::new();
    let admitted = tk_gates(&mut d, k, n, &cfg.c_star);
    let t = t_energy(g, 1 << k)?;
    let e = additive_energy(g, g)?;
    let top = (1i64 << (k + 1)) as i64;
    let rhs = |c: &Expr| tk_gamma_rhs(k, c, n, p.get(), z(n).powi(top), z(n).pow(rat(2 * top - k - 7, 2)) * zb(&e));
    let lhs = zb(&t);
    let r = rhs(&cst(&cfg.c_star));
    let holds = d.holds("bound", &lhs, &r);
    if k >= 1 {
        d.min_c("minimal_c_star", monotone_min_c(&lhs, rhs));
    }
    d.put("energy", e);
    d.rhs_shape = Some(r.eval_f64());
    d.lhs = Some(Lhs::Exact(t));
    d.exact(admitted, holds);
    Ok(d)
}

fn holder_q(params: &Params, cfg: &HarnessConfig) -> Result<Draft> {
    let p = params.prime()?;
    let gamma = subgroup_param(params)?;
    let q = invariant_param(params, &gamma, "reps")?;
    let k = k_param(params, 0, 6)?;
    let n = gamma.order() as usize;
    let mut d = Draft::new();
    let admitted = tk_gates(&mut d, k, n, &cfg.c_star);
    let t = t_energy(&q, 1 << k)?;
    let e = additive_energy(gamma.members(), gamma.members())?;
    let top = 1i64 << (k + 1);
    let nq = q.len();
    let rhs = |c: &Expr| {
        tk_gamma_rhs(k, c, n, p.get(), z(nq).powi(top), z(n).pow(rat(-(k + 7), 2)) * zb(&e) * z(nq).powi(top))
    };
    let lhs = zb(&t);
    let r = rhs(&cst(&cfg.c_star));
    let holds = d.holds("bound", &lhs, &r);
    if k >= 1 {
        d.min_c("minimal_c_star", monotone_min_c(&lhs, rhs));
    }
    d.put("q_size", nq as i64);
    d.rhs_shape = Some(r.eval_f64());
    d.lhs = Some(Lhs::Exact(t));
    d.exact(admitted, holds);
    Ok(d)
}

fn exp_sum(params: &Params) -> Result<Draft> {
    let p = params.prime()?;
    let gamma = subgroup_param(params)?;
    let n = gamma.order() as usize;
    let mut d = Draft::new();
    if !d.flag("delta_positive", n >= 2) {
        return Ok(d);
    }
    let rho = max_nontrivial_coefficient(gamma.members());
    let delta = libm::log(n as f64) / libm::log(p.get() as f64);
    d.put("delta", delta);
    d.put("trivial_ratio", rho / n as f64);
    d.estimate(Lhs::Real(rho), n as f64 * exp_sum_saving(n, p.get()));
    Ok(d)
}

fn q_shift(params: &Params, cfg: &HarnessConfig) -> Result<Draft> {
    let p = params.prime()?;
    let gamma = subgroup_param(params)?;
    let q = invariant_param(params, &gamma, "reps")?;
    let k = k_param(params, 0, 5)?;
    let (n, nq) = (gamma.order() as usize, q.len());
    let mut d = Draft::new();
    let c = cst(&cfg.c_star);
    // |Q|²|Γ| ≤ p²
    let standing = d.flag("q_gamma_size", (nq * nq) as u128 * n as u128 <= (p.get() as u128).pow(2))
        & d.flag("q_nonempty", nq >= 1);
    let size_ok = d.gate("size", &(two(64 * k) * c.clone().powi(4)), &z(n));
    let log_ok = d.flag("log_defined", k >= 1 || nq >= 2);
    let first_admitted = standing && size_ok && log_ok;
    // |Γ|^{(k+2)/2} ≥ |Q| log^{4k}|Q|
    let second_admitted = standing
        && d.flag("k_positive", k >= 1)
        && d.gate("choose_k", &(z(nq) * z(nq).log2().powi(4 * k)), &z(n).pow(rat(k + 2, 2)));
    if nq == 0 {
        return Ok(d);
    }
    let l = 1i64 << (k + 1);
    let energy = e_energy(&q, l as u32)?;
    let lhs = zb(&energy);
    let lq = z(nq).log2();
    let rhs1 = |c: &Expr| {
        two((1 << (k + 2)) + 3)
            * lq.clone().powi(l)
            * z(nq).powi(l)
            * (two(4 * k + 6) * lq.clone().powi(4)
                + Expr::int(16u64).powi(k * k)
                    * c.clone().powi(k - 1)
                    * lq.clone().powi(4 * (k - 1))
                    * z(n).pow(rat(-(k + 1), 2))
                    * Expr::int(p.get()))
    };
    let rhs2 = |c: &Expr| (Expr::int(256u64) * c.clone()).powi(k + 1) * z(nq).powi(l) * z(n).pow(rat(1, 2));
    let mut holds = true;
    let mut minimal: Option<BigRational> = Some(BigRational::one());
    let mut fold = |m: Option<BigRational>| {
        minimal = match (minimal.take(), m) {
            (Some(a), Some(b)) => Some(a.max(b)),
            _ => None,
        }
    };
    if log_ok {
        let h = d.holds("first", &lhs, &rhs1(&c));
        let m1 = if k == 0 {
            // C^{-1} makes the bound decreasing in C: the best choice is C = 1.
            decide_le(&lhs, &rhs1(&Expr::int(1u64))).holds().then(BigRational::one)
        } else {
            monotone_min_c(&lhs, rhs1)
        };
        d.min_c("minimal_c_star.first", m1.clone());
        if first_admitted {
            holds &= h;
            fold(m1);
        }
    }
    if k >= 1 {
        let h = d.holds("second", &lhs, &rhs2(&c));
        let m2 = monotone_min_c(&lhs, rhs2);
        d.min_c("minimal_c_star.second", m2.clone());
        if second_admitted {
            holds &= h;
            fold(m2);
        }
    }
    let admitted = first_admitted || second_admitted;
    if admitted {
        d.min_c("minimal_c_star", minimal);
    }
    d.lhs = Some(Lhs::Exact(energy));
    d.rhs_shape = Some(if log_ok { rhs1(&c) } else { rhs2(&c) }.eval_f64());
    d.exact(admitted, holds);
    Ok(d)
}

/// Smallest `k ≥ 1` with `|Γ|^{(k+2)/2} ≥ size · log^{4k} size`.
fn choose_k(order: usize, size: usize, max_k: u32) -> Option<i64> {
    (1..=max_k as i64)
        .find(|&k| decide_le(&(z(size) * z(size).log2().powi(4 * k)), &z(order).pow(rat(k + 2, 2))).holds())
}

fn q_cap(params: &Params, cfg: &HarnessConfig) -> Result<Draft> {
    let p = params.prime()?;
    let gamma = subgroup_param(params)?;
    let q1 = invariant_param(params, &gamma, "reps1")?;
    let q2 = invariant_param(params, &gamma, "reps2")?;
    let n = gamma.order() as usize;
    let pp = (p.get() as u128).pow(2);
    let mut d = Draft::new();
    let ok = d.flag("q1_gamma_size", (q1.len() as u128).pow(2) * n as u128 <= pp)
        & d.flag("q2_gamma_size", (q2.len() as u128).pow(2) * n as u128 <= pp)
        & d.flag("delta_positive", n >= 2)
        & d.flag("log_defined", q1.len().max(q2.len()) >= 2 && !q1.is_empty() && !q2.is_empty());
    if !ok {
        return Ok(d);
    }
    let profile = shift_intersection_profile(&q1, &q2)?;
    let qmax = q1.len().max(q2.len());
    let root = libm::sqrt((q1.len() * q2.len()) as f64);
    let shape1 = root * libm::log2(qmax as f64) * exp_sum_saving(n, p.get());
    d.put("argmax", profile.argmax as i64);
    d.put("shape_log_form", shape1);
    d.put("ratio_log_form", profile.max as f64 / shape1);
    let shape = match choose_k(n, qmax, cfg.max_k_search) {
        Some(k) => {
            let s = root * libm::pow(n as f64, -0.25 * libm::pow(2.0, -(k as f64)));
            d.put("k", k);
            d.put("form", "chosen-k");
            s
        }
        None => {
            d.put("form", "log");
            shape1
        }
    };
    d.estimate(Lhs::Exact(BigUint::from(profile.max)), shape);
    Ok(d)
}

fn eqa(params: &Params, cfg: &HarnessConfig) -> Result<Draft> {
    let p = params.prime()?;
    let gamma = subgroup_param(params)?;
    let q = invariant_param(params, &gamma, "reps")?;
    let a = params.set("A")?;
    let alpha = alpha_param(params)?;
    let n = gamma.order() as usize;
    let nq = q.len();
    let mut d = Draft::new();
    let ok = d.flag("q_gamma_size", (nq as u128).pow(2) * n as u128 <= (p.get() as u128).pow(2))
        & d.flag("delta_positive", n >= 2)
        & d.flag("log_defined", nq >= 2)
        & d.flag("alpha_nonzero", alpha != 0)
        & d.flag("a_nonempty", !a.is_empty());
    if !ok {
        return Ok(d);
    }
    let e_add = additive_energy(&a, &q)?;
    let shifted = q.translate(alpha);
    let e_mul = multiplicative_energy(&a, &shifted)?;
    let (fa, fq) = (a.len() as f64, nq as f64);
    let shape = fq * fa * fa * exp_sum_saving(n, p.get()) * libm::log2(fq) + fa * fq;
    let r_add = e_add.to_f64().unwrap() / shape;
    let r_mul = e_mul.to_f64().unwrap() / shape;
    d.put("energy_mult", e_mul.clone());
    d.put("ratio_add", r_add);
    d.put("ratio_mult", r_mul);
    d.put("sumset", combine(&a, &q, SetOp::Sum)?.len() as i64);
    d.put("product_set", combine(&a, &shifted, SetOp::Product)?.len() as i64);
    if let Some(k) = choose_k(n, nq, cfg.max_k_search) {
        let s = fq * fa * fa * libm::pow(n as f64, -0.25 * libm::pow(2.0, -(k as f64))) + fa * fq;
        d.put("k", k);
        d.put("ratio_add_chosen_k", e_add.to_f64().unwrap() / s);
        d.put("ratio_mult_chosen_k", e_mul.to_f64().unwrap() / s);
    }
    d.lhs = Some(Lhs::Exact(e_add));
    d.rhs_shape = Some(shape);
    d.implied = Some(r_add.max(r_mul));
    d.verdict = Verdict::ReportOnly;
    Ok(d)
}

fn tk_small_prod(params: &Params, cfg: &HarnessConfig) -> Result<Draft> {
    let p = params.prime()?;
    let a = params.set("A")?;
    let b = params.set("B")?;
    let k = k_param(params, 0, 5)?;
    let mut d = Draft::new();
    let na = a.len();
    let m = growth(combine(&a, &b, SetOp::Product)?.len(), na.max(1));
    d.put("M", m.clone());
    let basic = d.flag("k_at_least_2", k >= 2) & d.flag("log_defined", na >= 2) & d.flag("b_nonempty", !b.is_empty());
    let mm = cst(&m);
    let la = z(na).log2();
    let c = cst(&cfg.c_star);
    let top = 1i64 << (k + 1);
    // 2^{16k} M^{2^{k+1}} C² log⁸|A| ≤ |B|
    let size_ok = basic
        && d.gate("size", &(two(16 * k) * mm.clone().powi(top) * c.clone().powi(2) * la.clone().powi(8)), &z(b.len()));
    if !basic {
        return Ok(d);
    }
    let t = t_energy(&a, 1 << k)?;
    let e = additive_energy(&a, &a)?;
    let rhs = |c: &Expr| {
        two(4 * k + 6) * c.clone() * la.clone().powi(4) * mm.clone().powi(top / 2) * z(na).powi(top)
            / Expr::int(p.get())
            + Expr::int(16u64).powi(k * k)
                * c.clone().powi(k - 1)
                * mm.clone().powi(top)
                * la.clone().powi(4 * (k - 1))
                * z(na).powi(top - 4)
                * z(b.len()).pow(rat(-(k - 1), 2))
                * zb(&e)
    };
    let lhs = zb(&t);
    let r = rhs(&c);
    let holds = d.holds("bound", &lhs, &r);
    d.min_c("minimal_c_star", monotone_min_c(&lhs, rhs));
    d.rhs_shape = Some(r.eval_f64());
    d.lhs = Some(Lhs::Exact(t));
    d.exact(size_ok, holds);
    Ok(d)
}

fn tk_real(params: &Params, cfg: &HarnessConfig) -> Result<Draft> {
    let a = params.rational_set("A")?;
    let b = params.rational_set("B")?;
    let k = k_param(params, 0, 4)?;
    let mut d = Draft::new();
    let na = a.len();
    let admitted =
        d.flag("k_at_least_2", k >= 2) & d.flag("log_defined", na >= 2) & d.flag("b_nonempty", !b.is_empty());
    if !admitted {
        return Ok(d);
    }
    let m = growth(combine_rational(&a, &b, SetOp::Product)?.len(), na);
    d.put("M", m.clone());
    let la = z(na).log2();
    let top = 1i64 << (k + 1);
    let t = t_energy(&a, 1 << k)?;
    let m_exp = rat(3 * ((1 << k) - 1), 2);
    let rhs = |c: &Expr| {
        Expr::int(16u64).powi(k * k)
            * c.clone().powi(k - 1)
            * cst(&m).pow(m_exp.clone())
            * la.clone().powi(4 * (k - 1))
            * z(na).powi(top - 1)
            * z(b.len()).pow(rat(-k, 2))
    };
    let lhs = zb(&t);
    let r = rhs(&cst(&cfg.c_star));
    let holds = d.holds("bound", &lhs, &r);
    d.min_c("minimal_c_star", monotone_min_c(&lhs, rhs));

    // Multiple sumsets under a small product or quotient set, report-only.
    let aa = combine_rational(&a, &a, SetOp::Product)?.len();
    let a_over_a = combine_rational(&a, &a, SetOp::Quotient)?.len();
    let m_self = growth(aa.min(a_over_a), na).to_f64().unwrap();
    let sumset = iterated_sumset(&a, 1 << k)?.len();
    let fk = k as f64;
    let shape = libm::pow(na as f64, 1.0 + fk / 2.0)
        * libm::pow(m_self, -1.5 * (libm::pow(2.0, fk) - 1.0))
        * libm::pow(libm::log2(na as f64), -4.0 * (fk - 1.0));
    d.put("multiple_sumset", sumset as i64);
    d.put("multiple_sumset_ratio", sumset as f64 / shape);

    d.rhs_shape = Some(r.eval_f64());
    d.lhs = Some(Lhs::Exact(t));
    d.exact(true, holds);
    Ok(d)
}

fn qg(params: &Params, cfg: &HarnessConfig) -> Result<Draft> {
    let p = params.prime()?;
    let gamma = params.set("Gamma")?;
    let q = params.set("Q")?;
    let k = k_param(params, 0, 4)?;
    let mut d = Draft::new();
    if !d.flag("nonempty", !q.is_empty() && !gamma.is_empty()) {
        return Ok(d);
    }
    let powers: Vec<usize> =
        (0..=k as u32 + 1).map(|j| power_product(&q, &gamma, j).map(|s| s.len())).collect::<Result<_>>()?;
    let ku = k as usize;
    let nq = q.len();
    let ng = gamma.len();
    let q_k = if k >= 1 { powers[ku - 1] } else { nq };
    let m = ratio(powers[ku + 1], nq);
    d.put("M", m.clone());
    d.put("q_k", q_k as i64);
    let pp = (p.get() as u128).pow(2);
    let p_ok = d.flag("p_square", powers[ku + 1] as u128 * powers[ku] as u128 * ng as u128 <= pp)
        & d.flag("p_linear", q_k as u128 * ng as u128 <= p.get() as u128);

    let l = 1u32 << (k + 1);
    let energy = e_energy(&q, l)?;
    let lhs = zb(&energy);
    let factor = |c: &Expr, qk: usize| {
        cst(&m).powi((1 << k) + 1) * two(3 * k + 1) * c.clone().pow(rat(k + 4, 4)) * z(qk).log2().powi(k)
    };
    let branch1 = |c: &Expr| factor(c, q_k) * z(nq).powi(l as i64 + 1) * z(ng).pow(rat(-k - 4, 8));
    let branch2 = BigUint::from(2u8) * BigUint::from(q_k).pow(l);
    let c = cst(&cfg.c_star);
    let b1 = d.holds("branch_energy", &lhs, &branch1(&c));
    let b2 = energy <= branch2;
    d.put("holds.branch_trivial", b2);
    let dichotomy = b1 || b2;
    d.put(
        "branch",
        if b2 {
            "trivial"
        } else if b1 {
            "energy"
        } else {
            "neither"
        },
    );
    // |Γ|^{k/8+1/2} ≥ |Q| · M^{2^k+1} 2^{3k+1} C^{(k+4)/4} log^k Q^{(k)}
    let chosen = d.gate("choose_k", &(z(nq) * factor(&c, q_k)), &z(ng).pow(rat(k + 4, 8)));
    let mut holds = dichotomy;
    if p_ok && chosen {
        holds &= b2;
    }
    let minimal = if b2 { Some(BigRational::one()) } else { monotone_min_c(&lhs, branch1) };
    if p_ok {
        d.min_c("minimal_c_star", minimal);
    }

    // Variant of the chosen-k form with |QΓ^k| in place of Q^{(k)} and no
    // conditions involving p; evaluated alongside, never decides the verdict.
    let q_k_alt = powers[ku];
    let alt_gate = decide_le(&(z(nq) * factor(&c, q_k_alt)), &z(ng).pow(rat(k + 4, 8)));
    d.record("alias.variant.gate", alt_gate);
    d.put("alias.variant.holds", energy <= BigUint::from(2u8) * BigUint::from(q_k_alt).pow(l));

    d.rhs_shape = Some(branch1(&c).eval_f64().min(branch2.to_f64().unwrap_or(f64::INFINITY)));
    d.lhs = Some(Lhs::Exact(energy));
    d.exact(p_ok, holds);
    Ok(d)
}

fn q_cap_m(params: &Params, cfg: &HarnessConfig) -> Result<Draft> {
    let p = params.prime()?;
    let gamma = params.set("Gamma")?;
    let q1 = params.set("Q1")?;
    let q2 = params.set("Q2")?;
    let k = k_param(params, 0, 4)?;
    let mut d = Draft::new();
    if !d.flag("nonempty", !q1.is_empty() && !q2.is_empty() && !gamma.is_empty()) {
        return Ok(d);
    }
    let ku = k as u32;
    let sizes = |q: &ResidueSet| -> Result<[usize; 4]> {
        Ok([
            power_product(q, &gamma, 1)?.len(),
            power_product(q, &gamma, ku)?.len(),
            power_product(q, &gamma, ku + 1)?.len(),
            power_product(q, &gamma, ku + 2)?.len(),
        ])
    };
    let (s1, s2) = (sizes(&q1)?, sizes(&q2)?);
    let m_star = growth(s1[0], q1.len()).max(growth(s2[0], q2.len()));
    let m = growth(s1[3], q1.len()).max(growth(s2[3], q2.len()));
    d.put("M_star", m_star.clone());
    d.put("M", m.clone());
    let ng = gamma.len() as u128;
    let pp = (p.get() as u128).pow(2);
    let c = cst(&cfg.c_star);
    let mut admitted = true;
    for (j, (q, s)) in [(&q1, s1), (&q2, s2)].into_iter().enumerate() {
        let tag = j + 1;
        admitted &= d.flag(&format!("p_square_{tag}"), s[3] as u128 * s[2] as u128 * ng <= pp);
        admitted &= d.flag(&format!("p_linear_{tag}"), s[1] as u128 * ng <= p.get() as u128);
        let rhs = z(q.len())
            * cst(&m_star)
            * cst(&m).powi((1 << k) + 1)
            * two(3 * k + 1)
            * c.clone().pow(rat(k + 4, 4))
            * z(s[1]).log2().powi(k);
        admitted &= d.gate(&format!("condition_{tag}"), &rhs, &z(gamma.len()).pow(rat(k + 4, 8)));
    }
    let profile = shift_intersection_profile(&q1, &q2)?;
    let lhs = Expr::int(profile.max);
    let bound = Expr::int(2u64)
        * cst(&m_star)
        * cst(&m)
        * z(q1.len() * q2.len()).pow(rat(1, 2))
        * z(gamma.len()).pow(-rat(1, 2) / BigRational::from_integer((1i64 << k).into()));
    let holds = d.holds("bound", &lhs, &bound);
    if admitted {
        d.min_c("minimal_c_star", holds.then(BigRational::one));
    }
    d.rhs_shape = Some(bound.eval_f64());
    d.lhs = Some(Lhs::Exact(BigUint::from(profile.max)));
    d.exact(admitted, holds);
    Ok(d)
}

/// `2^{-(4+k)} M^{-(k+3)} |Γ|^{2^{-k}/2}`, the second entry of the minimum.
fn eqa_m_floor(k: i64, m: &BigRational, order: usize, nq: usize, na: usize) -> Expr {
    let tail =
        two(-(4 + k)) * cst(m).powi(-(k + 3)) * z(order).pow(rat(1, 2) / BigRational::from_integer((1i64 << k).into()));
    two(-3) * z(nq) * z(na).min(tail)
}

fn eqa_m(params: &Params, cfg: &HarnessConfig) -> Result<Draft> {
    let p = params.prime()?;
    let gamma = params.set("Gamma")?;
    let q = params.set("Q")?;
    let a = params.set("A")?;
    let alpha = alpha_param(params)?;
    let k = k_param(params, 0, 4)?;
    let mut d = Draft::new();
    if !(d.flag("nonempty", !q.is_empty() && !gamma.is_empty()) & d.flag("k_positive", k >= 1)) {
        return Ok(d);
    }
    let nq = q.len();
    let m = growth(combine(&q, &gamma, SetOp::Product)?.len(), nq);
    d.put("M", m.clone());
    let two_m = Expr::int(2u64) * cst(&m);
    let c = cst(&cfg.c_star);
    let p_ok = d.gate("p_linear", &(two_m.clone().powi(k + 1) * z(nq) * z(gamma.len())), &Expr::int(p.get()));
    let cond_rhs =
        z(nq) * two_m.clone().powi((k + 3) * (1 << k)) * c.pow(rat(k + 4, 4)) * (two_m.powi(k) * z(nq)).log2().powi(k);
    let cond = d.gate("condition", &cond_rhs, &z(gamma.len()).pow(rat(k + 4, 8)));
    let admitted = p_ok && cond;
    let floor = eqa_m_floor(k, &m, gamma.len(), nq, a.len());
    let sumset = combine(&a, &q, SetOp::Sum)?.len();
    let mut holds = d.holds("sumset", &floor, &z(sumset));
    d.put("sumset_size", sumset as i64);
    if d.flag("alpha_nonzero", alpha != 0) {
        let product = combine(&a, &q.translate(alpha), SetOp::Product)?.len();
        holds &= d.holds("product_set", &floor, &z(product));
        d.put("product_set_size", product as i64);
    }
    if admitted {
        d.min_c("minimal_c_star", holds.then(BigRational::one));
    }
    d.rhs_shape = Some(floor.eval_f64());
    d.lhs = Some(Lhs::Exact(BigUint::from(sumset)));
    d.exact(admitted, holds);
    Ok(d)
}

fn qm_shift(params: &Params, cfg: &HarnessConfig) -> Result<Draft> {
    let p = params.prime()?;
    let gamma = params.set("Gamma")?;
    let q = params.set("Q")?;
    let q2 = params.set("Qp")?;
    let k = k_param(params, 0, 4)?;
    let mut d = Draft::new();
    let basic = d.flag("nonempty", !q.is_empty() && !gamma.is_empty())
        & d.flag("equal_sizes", q.len() == q2.len())
        & d.flag("k_positive", k >= 1);
    if !basic {
        return Ok(d);
    }
    let nq = q.len();
    let ng = gamma.len();
    let m = growth(combine(&q, &gamma, SetOp::Product)?.len(), nq)
        .max(growth(combine(&q2, &gamma, SetOp::Product)?.len(), nq));
    d.put("M", m.clone());
    let c = cst(&cfg.c_star);
    let p_ok = d.gate("p_linear", &((Expr::int(2u64) * cst(&m)).powi(k + 1) * z(nq) * z(ng)), &Expr::int(p.get()));
    let inner_exp = rat(k, 2 * (k + 4)) / BigRational::from_integer((1i64 << k).into());
    let cond_rhs =
        z(nq) * cst(&m).powi((k + 3) * (1 << k)) * c.pow(rat(k + 4, 4)) * (z(ng).pow(inner_exp) * z(nq)).log2().powi(k);
    let cond = d.gate("condition", &cond_rhs, &z(ng).pow(rat(k, 8) + rat(1, 2 * (k + 4))));
    let admitted = p_ok && cond;
    let profile = shift_intersection_profile(&q, &q2)?;
    let saving = -rat(1, 2 * (k + 4)) / BigRational::from_integer((1i64 << k).into());
    let bound = Expr::int(4u64) * cst(&m) * z(nq) * z(ng).pow(saving);
    let lhs = Expr::int(profile.max);
    let holds = d.holds("bound", &lhs, &bound);
    if admitted {
        d.min_c("minimal_c_star", holds.then(BigRational::one));
    }
    d.rhs_shape = Some(bound.eval_f64());
    d.lhs = Some(Lhs::Exact(BigUint::from(profile.max)));
    d.exact(admitted, holds);
    Ok(d)
}

fn abc(params: &Params, cfg: &HarnessConfig) -> Result<Draft> {
    let p = params.prime()?;
    let a = params.set("A")?;
    let b = params.set("B")?;
    let cset = params.set("C")?;
    let alpha = alpha_param(params)?;
    let k = k_param(params, 0, 6)?;
    let mut d = Draft::new();
    let basic = d.flag("nonempty", !a.is_empty() && !b.is_empty()) & d.flag("k_positive", k >= 1);
    if !basic {
        return Ok(d);
    }
    let (na, nb, nc) = (a.len(), b.len(), cset.len());
    let c = cst(&cfg.c_star);
    let two_k = BigRational::from_integer((1i64 << k).into());
    // |A| |B|^{1 + (k+1)2^{-k}/(2(k+4))} ≤ p
    let p_ok = d.gate(
        "p_linear",
        &(z(na) * z(nb).pow(BigRational::one() + rat(k + 1, 2 * (k + 4)) / &two_k)),
        &Expr::int(p.get()),
    );
    let cond_rhs = z(na) * c.pow(rat(k + 4, 4)) * z(na * nb).log2().powi(k);
    let cond = d.gate("condition", &cond_rhs, &z(nb).pow(rat(k, 8) + rat(1, 2 * (k + 4))));
    d.put("gate.variant_alias", cond);
    let cond_energy = d.gate("condition_energy", &cond_rhs, &z(nb).pow(rat(k, 8) - rat(1, 4) + rat(1, 4 * (k + 4))));
    let alpha_ok = d.flag("alpha_nonzero", alpha != 0);
    let c_ok = d.flag("c_nonempty", nc >= 1);

    let ab = combine(&a, &b, SetOp::Product)?.len();
    let floor = |den: i64, shift: i64| two(-shift) * z(na) * z(nc).min(z(nb).pow(rat(1, den * (k + 4)) / &two_k));
    let mut admitted = false;
    let mut holds = true;
    let mut conclude = |d: &mut Draft, key: &str, gate: bool, lhs: Expr, rhs: Expr| {
        let h = d.holds(key, &rhs, &lhs);
        if gate {
            admitted = true;
            holds &= h;
        }
    };
    let a_plus_c = combine(&a, &cset, SetOp::Sum)?.len();
    conclude(&mut d, "sum", p_ok && cond, z(ab.max(a_plus_c)), floor(2, 3));
    d.put("sumset_size", a_plus_c as i64);
    let shifted = a.translate(alpha);
    if alpha_ok {
        let prod = combine(&shifted, &cset, SetOp::Product)?.len();
        conclude(&mut d, "product", p_ok && cond, z(ab.max(prod)), floor(2, 3));
        d.put("product_set_size", prod as i64);
    }
    if c_ok {
        let e_add = additive_energy(&a, &cset)?;
        let sq = BigUint::from(na * nc).pow(2);
        let lhs = z(ab) + Expr::rational(BigRational::new(sq.clone().into(), e_add.clone().into()));
        conclude(&mut d, "energy_sum", p_ok && cond_energy, lhs, floor(4, 4));
        d.put("energy_add", e_add);
        if alpha_ok {
            let e_mul = multiplicative_energy(&shifted, &cset)?;
            let lhs = z(ab) + Expr::rational(BigRational::new(sq.into(), e_mul.clone().into()));
            conclude(&mut d, "energy_product", p_ok && cond_energy, lhs, floor(4, 4));
            d.put("energy_mult", e_mul);
        }
    }
    if admitted {
        d.min_c("minimal_c_star", holds.then(BigRational::one));
    }
    d.put("product_ab", ab as i64);
    d.lhs = Some(Lhs::Exact(BigUint::from(ab.max(a_plus_c))));
    d.rhs_shape = Some(floor(2, 3).eval_f64());
    d.exact(admitted, holds);
    Ok(d)
}

fn expander(params: &Params) -> Result<Draft> {
    let a = params.rational_set("A")?;
    let phi_name = if params.contains("phi") { params.text("phi")? } else { "id" };
    let phi = Phi::parse(phi_name).ok_or_else(|| malformed("phi", "expected id, cube or plus-inverse"))?;
    let mut d = Draft::new();
    if !d.flag("size", a.len() >= 3) {
        return Ok(d);
    }
    let stat = match expander_statistic(&a, phi) {
        Ok(s) => s,
        Err(Error::NotInjectiveOnA) => {
            d.flag("injective", false);
            return Ok(d);
        }
        Err(Error::PhiDomain(_)) => {
            d.flag("domain", false);
            return Ok(d);
        }
        Err(e) => return Err(e),
    };
    let n = a.len() as f64;
    d.put("size_r", stat.size_r as i64);
    d.put("exponent", stat.exponent);
    d.put("excess", stat.exponent - 2.0);
    // |R[A]| ≥ |A|² / (C log|A|)
    d.put("r_log_constant", n * n / (stat.size_r as f64 * libm::log2(n)));
    d.estimate(Lhs::Exact(BigUint::from(stat.size_r_phi_a)), n * n);
    let quadratic = stat.size_r_phi_a >= a.len() * a.len();
    d.put("holds.quadratic", quadratic);
    if !quadratic {
        d.verdict = Verdict::Fail;
    }
    Ok(d)
}

fn two_thirds(params: &Params, cfg: &HarnessConfig) -> Result<Draft> {
    let p = params.prime()?;
    let gamma = subgroup_param(params)?;
    let n = gamma.order() as usize;
    let mut d = Draft::new();
    if !d.flag("order_at_least_2", n >= 2) {
        return Ok(d);
    }
    let r = subgroup_ratio_set(&gamma)?;
    let q = subgroup_quotient_set(&gamma)?;
    let cap = q.intersection(&q.one_minus())?;
    let contained = r.is_subset(&cap);
    let cube = (q.len() as u128) <= (n as u128).pow(3);
    let invariant = combine(&q, gamma.members(), SetOp::Product)? == q;
    d.put("holds.containment", contained);
    d.put("holds.cube", cube);
    d.put("holds.invariant", invariant);
    d.put("size_r", r.len() as i64);
    d.put("size_q", q.len() as i64);
    d.put("size_q_cap", cap.len() as i64);
    let exact_ok = contained && cube && invariant;
    // |Γ| < p^{3/4}
    let small = d.flag("below_three_quarters", (n as u128).pow(4) < (p.get() as u128).pow(3));
    if !small {
        d.verdict = if exact_ok { Verdict::HypothesisSkipped } else { Verdict::Fail };
        return Ok(d);
    }
    let profile = shift_intersection_profile(gamma.members(), gamma.members())?;
    d.put("argmax", profile.argmax as i64);
    d.estimate(Lhs::Exact(BigUint::from(profile.max)), libm::pow(n as f64, 2.0 / 3.0));
    d.put("within_ceiling", d.implied.is_some_and(|c| c <= cfg.two_thirds_ceiling));
    if !exact_ok {
        d.verdict = Verdict::Fail;
    }
    Ok(d)
}

fn bourgain(params: &Params) -> Result<Draft> {
    let p = params.prime()?;
    let gamma = subgroup_param(params)?;
    let k = k_param(params, 1, 16)? as u32;
    let n = gamma.order() as usize;
    let mut d = Draft::new();
    let t = t_energy(gamma.members(), k)?;
    let shape = libm::pow(n as f64, 2.0 * k as f64) / p.get() as f64;
    d.put(
        "narrative",
        "for a subgroup ΓΓ = Γ, so every τ > 0 applies; the ratio is T_k(Γ) over its equidistributed value \
         |Γ|^{2k}/p, and TK_SUBGROUP gives the explicit bound for k a power of two",
    );
    let normalized = BigRational::new(t.clone().into(), BigUint::from(n).pow(2 * k).into());
    d.put("normalized", normalized.to_f64().unwrap_or(f64::NAN));
    d.estimate(Lhs::Exact(t), shape);
    Ok(d)
}
