//! Seeded instance generators, one stream per check.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::seq::{index, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{CheckId, CheckSpec, Params, Value};
use crate::field::{divisors, primes_between, Prime};
use crate::incidence::{canonical_plane, energy_incidence_instance, Plane, Point3};
use crate::rational::RationalSet;
use crate::sets::ResidueSet;
use crate::subgroup::{all_subgroups, subgroup_of_order};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FamilyKind {
    /// A handful of quick instances per check.
    Default,
    SmallRandom,
    /// Every subgroup of every prime in range, for subgroup-indexed checks.
    Subgroups,
    Empty,
}

impl FamilyKind {
    pub fn name(self) -> &'static str {
        match self {
            FamilyKind::Default => "default",
            FamilyKind::SmallRandom => "small-random",
            FamilyKind::Subgroups => "subgroups",
            FamilyKind::Empty => "empty",
        }
    }

    pub fn parse(s: &str) -> Option<FamilyKind> {
        [FamilyKind::Default, FamilyKind::SmallRandom, FamilyKind::Subgroups, FamilyKind::Empty]
            .into_iter()
            .find(|k| k.name() == s)
    }
}

#[derive(Clone, Debug)]
pub struct InstanceFamily {
    pub kind: FamilyKind,
    pub seed: u64,
    /// Upper end of the prime range; each check has its own default.
    pub p_max: Option<u64>,
    /// Instances per check for the random kinds.
    pub count: Option<usize>,
}

impl InstanceFamily {
    pub fn new(kind: FamilyKind, seed: u64) -> Self {
        InstanceFamily { kind, seed, p_max: None, count: None }
    }

    pub fn fingerprint(&self) -> String {
        let p = self.p_max.map_or_else(|| String::from("auto"), |p| format!("{p}"));
        let n = self.count.map_or_else(|| String::from("auto"), |n| format!("{n}"));
        format!("{}:seed={}:p_max={}:count={}", self.kind.name(), self.seed, p, n)
    }

    pub fn instances(&self, check: CheckId) -> Vec<CheckSpec> {
        let count = match self.kind {
            FamilyKind::Empty => return Vec::new(),
            FamilyKind::Default => self.count.unwrap_or(8),
            FamilyKind::SmallRandom | FamilyKind::Subgroups => self.count.unwrap_or(100),
        };
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(CheckId::ALL.iter().position(|&c| c == check).unwrap() as u64);
        let mut g = Gen { rng, p_max: self.p_max };
        let params: Vec<Params> = if self.kind == FamilyKind::Subgroups && subgroup_indexed(check) {
            g.subgroup_sweep(check)
        } else {
            (0..count).map(|i| g.instance(check, i)).collect()
        };
        params.into_iter().map(|p| CheckSpec::new(check, p)).collect()
    }
}

fn subgroup_indexed(check: CheckId) -> bool {
    matches!(
        check,
        CheckId::TkSubgroup
            | CheckId::HolderQ
            | CheckId::ExpSum
            | CheckId::QShiftEk
            | CheckId::QCap
            | CheckId::Eqa
            | CheckId::TwoThirds
            | CheckId::BourgainTk
    )
}

struct Gen {
    rng: ChaCha8Rng,
    p_max: Option<u64>,
}

impl Gen {
    fn prime(&mut self, lo: u64, hi: u64) -> Prime {
        let hi = self.p_max.map_or(hi, |m| m.max(lo));
        *primes_between(lo, hi).choose(&mut self.rng).expect("prime range is never empty")
    }

    /// Random subset of `[lo, p)` with `1 ≤ size ≤ max`.
    fn subset(&mut self, p: Prime, lo: u64, max: usize) -> ResidueSet {
        let span = (p.get() - lo) as usize;
        let m = self.rng.gen_range(1..=max.min(span).max(1));
        let picked = index::sample(&mut self.rng, span, m.min(span));
        ResidueSet::new(p, picked.iter().map(|i| i as u64 + lo)).unwrap()
    }

    fn order(&mut self, p: Prime) -> u64 {
        *divisors(p.get() - 1).choose(&mut self.rng).unwrap()
    }

    fn nonzero(&mut self, p: Prime) -> u64 {
        self.rng.gen_range(1..p.get())
    }

    /// Coset representatives for a Γ-invariant set.
    fn reps(&mut self, p: Prime, order: u64, max: usize) -> ResidueSet {
        let cosets = ((p.get() - 1) / order) as usize;
        self.subset(p, 1, max.min(cosets))
    }

    fn subgroup_sweep(&mut self, check: CheckId) -> Vec<Params> {
        let (lo, hi) = match check {
            CheckId::TwoThirds => (101, 499),
            CheckId::ExpSum => (3, 199),
            CheckId::QCap => (3, 101),
            _ => (3, 61),
        };
        let hi = self.p_max.map_or(hi, |m| m.max(lo));
        let mut out = Vec::new();
        for p in primes_between(lo, hi) {
            for gamma in all_subgroups(p) {
                out.push(self.subgroup_params(check, p, gamma.order()));
            }
        }
        out
    }

    fn subgroup_params(&mut self, check: CheckId, p: Prime, order: u64) -> Params {
        let base = Params::new().with("p", p.get() as i64).with("order", order as i64);
        match check {
            CheckId::TkSubgroup => base.with("k", self.rng.gen_range(0..=3)),
            CheckId::HolderQ => {
                let reps = self.reps(p, order, 3);
                base.with("reps", &reps).with("k", self.rng.gen_range(0..=3))
            }
            CheckId::QShiftEk => {
                let reps = self.reps(p, order, 3);
                base.with("reps", &reps).with("k", self.rng.gen_range(0..=3))
            }
            CheckId::QCap => {
                let r1 = self.reps(p, order, 3);
                let r2 = self.reps(p, order, 3);
                base.with("reps1", &r1).with("reps2", &r2)
            }
            CheckId::Eqa => {
                let reps = self.reps(p, order, 3);
                let a = self.subset(p, 0, 10);
                let alpha = self.nonzero(p) as i64;
                base.with("reps", &reps).with("A", &a).with("alpha", alpha)
            }
            CheckId::BourgainTk => base.with("k", self.rng.gen_range(2..=4)),
            _ => base,
        }
    }

    fn instance(&mut self, check: CheckId, i: usize) -> Params {
        match check {
            CheckId::Plunnecke => {
                let p = self.prime(5, 31);
                let a = self.subset(p, 0, 10);
                let h = self.rng.gen_range(1..=2);
                let bs: Vec<Vec<u64>> = (0..h).map(|_| self.subset(p, 0, 6).members().to_vec()).collect();
                Params::new().with("p", p.get() as i64).with("A", &a).with("Bs", Value::Sets(bs))
            }
            CheckId::MishaInc => self.misha(i),
            CheckId::AaEnergy => {
                let p = self.prime(11, 101);
                let (q, a) = if i % 2 == 0 {
                    // Q invariant under a subgroup containing A, so |QA| = |Q|.
                    let order = self.order(p);
                    let gamma = subgroup_of_order(p, order).unwrap();
                    let reps = self.reps(p, order, 3);
                    let q = crate::subgroup::invariant_set(&gamma, &reps).unwrap().members().clone();
                    let a = self.subset_of(gamma.members(), 8);
                    (q, a)
                } else {
                    (self.subset(p, 1, 20), self.subset(p, 1, 6))
                };
                Params::new().with("p", p.get() as i64).with("Q", &q).with("A", &a)
            }
            CheckId::EpIneq => {
                let p = self.prime(3, 31);
                let a = self.subset(p, 0, 10);
                let pset = self.subset(p, 0, 10);
                let k = self.rng.gen_range(1..=4);
                Params::new().with("p", p.get() as i64).with("A", &a).with("P", &pset).with("k", k)
            }
            CheckId::ChangeQg => {
                let p = self.prime(7, 31);
                let a = self.subset(p, 0, 6);
                let b = self.subset(p, 1, 4);
                let pset = self.subset(p, 1, 6);
                let k = self.rng.gen_range(1..=2);
                Params::new().with("p", p.get() as i64).with("A", &a).with("B", &b).with("P", &pset).with("k", k)
            }
            CheckId::TkSubgroup | CheckId::HolderQ | CheckId::QShiftEk | CheckId::Eqa | CheckId::BourgainTk => {
                let p = self.prime(3, 61);
                let order = self.order(p);
                self.subgroup_params(check, p, order)
            }
            CheckId::ExpSum | CheckId::QCap => {
                let p = self.prime(3, 199);
                let order = self.order(p);
                self.subgroup_params(check, p, order)
            }
            CheckId::TwoThirds => {
                let p = self.prime(101, 199);
                let order = self.order(p);
                self.subgroup_params(check, p, order)
            }
            CheckId::TkSmallProd => {
                let p = self.prime(5, 61);
                let (a, b) = if i % 2 == 0 {
                    let order = self.order(p);
                    let gamma = subgroup_of_order(p, order).unwrap();
                    (self.subset_of(gamma.members(), 8), gamma.members().clone())
                } else {
                    (self.subset(p, 0, 8), self.subset(p, 0, 8))
                };
                let k = self.rng.gen_range(2..=3);
                Params::new().with("p", p.get() as i64).with("A", &a).with("B", &b).with("k", k)
            }
            CheckId::TkReal => {
                let a = self.rational_family(i, 7);
                let b = self.rational_family(i + 1, 7);
                let k = self.rng.gen_range(2..=3);
                Params::new().with("A", &a).with("B", &b).with("k", k)
            }
            CheckId::QgEk => {
                let p = self.prime(5, 101);
                if i == 0 {
                    let pm1 = p.get() - 1;
                    let s = ResidueSet::new(p, [1, pm1]).unwrap();
                    return Params::new().with("p", p.get() as i64).with("Gamma", &s).with("Q", &s).with("k", 0);
                }
                let gamma = self.gamma_like(p, i);
                let q = self.subset(p, 1, 6);
                let k = self.rng.gen_range(0..=2);
                Params::new().with("p", p.get() as i64).with("Gamma", &gamma).with("Q", &q).with("k", k)
            }
            CheckId::QCapM => {
                let p = self.prime(5, 101);
                let gamma = self.gamma_like(p, i);
                let q1 = self.subset(p, 1, 6);
                let q2 = self.subset(p, 1, 6);
                let k = self.rng.gen_range(0..=2);
                Params::new()
                    .with("p", p.get() as i64)
                    .with("Gamma", &gamma)
                    .with("Q1", &q1)
                    .with("Q2", &q2)
                    .with("k", k)
            }
            CheckId::EqaM => {
                let p = self.prime(5, 101);
                let gamma = self.gamma_like(p, i);
                let q = self.subset(p, 1, 6);
                let a = self.subset(p, 0, 8);
                let alpha = self.nonzero(p) as i64;
                let k = self.rng.gen_range(1..=2);
                Params::new()
                    .with("p", p.get() as i64)
                    .with("Gamma", &gamma)
                    .with("Q", &q)
                    .with("A", &a)
                    .with("alpha", alpha)
                    .with("k", k)
            }
            CheckId::QmShift => {
                let p = self.prime(5, 101);
                let gamma = self.gamma_like(p, i);
                let q = self.subset(p, 1, 6);
                let picked = index::sample(&mut self.rng, p.get() as usize - 1, q.len());
                let q2 = ResidueSet::new(p, picked.iter().map(|x| x as u64 + 1)).unwrap();
                let k = self.rng.gen_range(1..=2);
                Params::new().with("p", p.get() as i64).with("Gamma", &gamma).with("Q", &q).with("Qp", &q2).with("k", k)
            }
            CheckId::Abc => {
                let p = self.prime(5, 101);
                let (a, b) = match i {
                    0 => (ResidueSet::new(p, [1]).unwrap(), ResidueSet::new(p, [1]).unwrap()),
                    1 => (ResidueSet::new(p, [1]).unwrap(), ResidueSet::new(p, [1, 2]).unwrap()),
                    _ => (self.subset(p, 1, 4), self.subset(p, 1, 6)),
                };
                let c = self.subset(p, 0, 6);
                let alpha = self.nonzero(p) as i64;
                let k = if i < 2 { 1 } else { self.rng.gen_range(1..=3) };
                Params::new()
                    .with("p", p.get() as i64)
                    .with("A", &a)
                    .with("B", &b)
                    .with("C", &c)
                    .with("alpha", alpha)
                    .with("k", k)
            }
            CheckId::Expander => {
                let a = self.rational_family(i, 8);
                let a = if a.len() < 3 { RationalSet::interval(3) } else { a };
                let phi = crate::rational::Phi::ALL[i % crate::rational::Phi::ALL.len()];
                Params::new().with("A", &a).with("phi", phi.name())
            }
        }
    }

    fn subset_of(&mut self, s: &ResidueSet, max: usize) -> ResidueSet {
        let m = self.rng.gen_range(1..=max.min(s.len()));
        let picked = index::sample(&mut self.rng, s.len(), m);
        ResidueSet::new(s.modulus(), picked.iter().map(|j| s.members()[j])).unwrap()
    }

    /// A subgroup on even draws, a small random set of units otherwise.
    fn gamma_like(&mut self, p: Prime, i: usize) -> ResidueSet {
        if i % 2 == 0 {
            let order = self.order(p);
            subgroup_of_order(p, order).unwrap().members().clone()
        } else {
            self.subset(p, 1, 8)
        }
    }

    /// Arithmetic progressions, geometric progressions and random fractions,
    /// all positive so every `φ` is defined.
    fn rational_family(&mut self, i: usize, max: usize) -> RationalSet {
        let n = self.rng.gen_range(2..=max) as i64;
        let big = |x: i64| BigInt::from(x);
        match i % 3 {
            0 => {
                let (a, d) = (self.rng.gen_range(1..=5), self.rng.gen_range(1..=3));
                RationalSet::from_integers((0..n).map(|j| a + d * j))
            }
            1 => {
                let r = self.rng.gen_range(2..=3i64);
                RationalSet::from_integers((0..n).map(|j| r.pow(j as u32)))
            }
            _ => RationalSet::new((0..n).map(|_| {
                let num = self.rng.gen_range(1..=20);
                let den = self.rng.gen_range(1..=6);
                BigRational::new(big(num), big(den))
            })),
        }
    }

    fn misha(&mut self, i: usize) -> Params {
        let p = self.prime(3, 13);
        let m = p.get();
        let (mut points, planes): (Vec<Point3>, Vec<Plane>) = match i % 3 {
            0 => {
                let cap = if i % 4 == 0 { 2000 } else { 60 };
                let n = self.rng.gen_range(1..=cap.min((m * m * m) as usize));
                let pts = index::sample(&mut self.rng, (m * m * m) as usize, n)
                    .iter()
                    .map(|x| {
                        let x = x as u64;
                        [x % m, x / m % m, x / (m * m)]
                    })
                    .collect();
                let pls = (0..n)
                    .map(|_| {
                        let mut pl = [0u64; 4];
                        for c in pl.iter_mut() {
                            *c = self.rng.gen_range(0..m);
                        }
                        if pl[..3] == [0, 0, 0] {
                            pl[0] = 1;
                        }
                        pl
                    })
                    .collect();
                (pts, pls)
            }
            1 => {
                let p = Prime::new(m).unwrap();
                let q = self.subset(p, 1, 5);
                let a = self.subset(p, 1, 3);
                let (pts, pls) = energy_incidence_instance(&q, &a).unwrap();
                (pts.points().to_vec(), pls.planes().to_vec())
            }
            _ => {
                // A full line plus a few stragglers, against planes through it.
                let mut pts: Vec<Point3> = (0..m).map(|t| [t, t, 0]).collect();
                pts.push([0, 0, 1 % m]);
                let pls = (0..pts.len() as u64).map(|c| [1, m - 1, c % m, 0]).collect();
                (pts, pls)
            }
        };
        let p = Prime::new(m).unwrap();
        let mut planes: Vec<Plane> = planes.into_iter().map(|pl| canonical_plane(p, pl).unwrap()).collect();
        planes.sort();
        planes.dedup();
        points.sort();
        points.dedup();
        points.shuffle(&mut self.rng);
        planes.shuffle(&mut self.rng);
        let n = points.len().min(planes.len());
        points.truncate(n);
        planes.truncate(n);
        Params::new().with("p", m as i64).with("points", Value::Points(points)).with("planes", Value::Planes(planes))
    }
}
