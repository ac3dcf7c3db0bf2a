//! Point–plane incidences in `F_p³`.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_bigint::BigUint;

use crate::field::{add_mod, inverse_mod, mul_mod, sub_mod, Prime};
use crate::sets::{combine, ResidueSet, SetOp};
use crate::{Error, Result};

pub type Point3 = [u64; 3];

/// A plane `ax + by + cz = d`, stored as `[a, b, c, d]`.
pub type Plane = [u64; 4];

fn check_coords(p: Prime, coords: &[u64]) -> Result<()> {
    match coords.iter().find(|&&c| c >= p.get()) {
        Some(&value) => Err(Error::ResidueOutOfRange { value, modulus: p.get() }),
        None => Ok(()),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointSet3 {
    modulus: Prime,
    points: Vec<Point3>,
}

impl PointSet3 {
    pub fn new<I: IntoIterator<Item = Point3>>(modulus: Prime, points: I) -> Result<Self> {
        let mut points: Vec<Point3> = points.into_iter().collect();
        for pt in &points {
            check_coords(modulus, pt)?;
        }
        points.sort_unstable();
        points.dedup();
        Ok(PointSet3 { modulus, points })
    }

    /// All of `F_p³`.
    pub fn full(modulus: Prime) -> Self {
        let m = modulus.get();
        let points = (0..m).flat_map(|x| (0..m).flat_map(move |y| (0..m).map(move |z| [x, y, z]))).collect();
        PointSet3 { modulus, points }
    }

    pub fn modulus(&self) -> Prime {
        self.modulus
    }

    pub fn points(&self) -> &[Point3] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Scales `[a, b, c, d]` so the first nonzero of `(a, b, c)` is one.
pub fn canonical_plane(p: Prime, plane: [u64; 4]) -> Result<Plane> {
    let m = p.get();
    check_coords(p, &plane)?;
    let lead = plane[..3].iter().copied().find(|&c| c != 0).ok_or(Error::ZeroNormal)?;
    let inv = inverse_mod(lead, m).expect("nonzero mod a prime");
    Ok(plane.map(|c| mul_mod(c, inv, m)))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlaneSet {
    modulus: Prime,
    planes: Vec<Plane>,
}

impl PlaneSet {
    pub fn new<I: IntoIterator<Item = [u64; 4]>>(modulus: Prime, planes: I) -> Result<Self> {
        let mut out = planes.into_iter().map(|pl| canonical_plane(modulus, pl)).collect::<Result<Vec<_>>>()?;
        out.sort_unstable();
        out.dedup();
        Ok(PlaneSet { modulus, planes: out })
    }

    /// Every plane of `F_p³`: `p(p² + p + 1)` of them.
    pub fn full(modulus: Prime) -> Self {
        let m = modulus.get();
        let mut planes = Vec::new();
        for b in 0..m {
            for c in 0..m {
                for d in 0..m {
                    planes.push([1, b, c, d]);
                }
            }
        }
        for c in 0..m {
            for d in 0..m {
                planes.push([0, 1, c, d]);
            }
        }
        for d in 0..m {
            planes.push([0, 0, 1, d]);
        }
        planes.sort_unstable();
        PlaneSet { modulus, planes }
    }

    pub fn modulus(&self) -> Prime {
        self.modulus
    }

    pub fn planes(&self) -> &[Plane] {
        &self.planes
    }

    pub fn len(&self) -> usize {
        self.planes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.planes.is_empty()
    }
}

#[inline]
pub fn on_plane(m: u64, pt: &Point3, pl: &Plane) -> bool {
    let lhs = add_mod(add_mod(mul_mod(pl[0], pt[0], m), mul_mod(pl[1], pt[1], m), m), mul_mod(pl[2], pt[2], m), m);
    lhs == pl[3]
}

pub fn count_incidences(points: &PointSet3, planes: &PlaneSet) -> Result<BigUint> {
    if points.modulus != planes.modulus {
        return Err(Error::ModulusMismatch { left: points.modulus.get(), right: planes.modulus.get() });
    }
    let m = points.modulus.get();
    let mut total = 0u64;
    for pt in &points.points {
        total += planes.planes.iter().filter(|pl| on_plane(m, pt, pl)).count() as u64;
    }
    Ok(BigUint::from(total))
}

/// The largest number of points on one line.
pub fn max_collinear(points: &PointSet3) -> usize {
    let n = points.len();
    if n <= 2 {
        return n;
    }
    let m = points.modulus.get();
    let mut best = 2;
    let mut directions: BTreeMap<Point3, usize> = BTreeMap::new();
    for (i, base) in points.points.iter().enumerate() {
        directions.clear();
        for other in &points.points[i + 1..] {
            let d = [sub_mod(other[0], base[0], m), sub_mod(other[1], base[1], m), sub_mod(other[2], base[2], m)];
            let lead = d.iter().copied().find(|&c| c != 0).expect("points are distinct");
            let inv = inverse_mod(lead, m).expect("nonzero mod a prime");
            *directions.entry(d.map(|c| mul_mod(c, inv, m))).or_default() += 1;
        }
        if let Some(&c) = directions.values().max() {
            best = best.max(c + 1);
        }
    }
    best
}

/// The incidence problem attached to `E+(Q)` with multiplier set `A`:
/// points `Q × QA × (A*)⁻¹` and the planes `x + y/a − q̃z = q'` indexed by
/// `(q', a, q̃) ∈ Q × A* × QA`.
pub fn energy_incidence_instance(q: &ResidueSet, a: &ResidueSet) -> Result<(PointSet3, PlaneSet)> {
    let p = q.modulus();
    let m = p.get();
    let a_star = a.nonzero();
    if a_star.is_empty() {
        return Err(Error::DegenerateInput("A is contained in {0}"));
    }
    if q.nonzero().is_empty() {
        return Err(Error::DegenerateInput("Q is contained in {0}"));
    }
    let qa = combine(q, a, SetOp::Product)?;
    let inv_a = a_star.inverses();
    let mut points = Vec::with_capacity(q.len() * qa.len() * inv_a.len());
    for q1 in q.iter() {
        for t in qa.iter() {
            for z in inv_a.iter() {
                points.push([q1, t, z]);
            }
        }
    }
    let mut planes = Vec::with_capacity(points.len());
    for q3 in q.iter() {
        for ai in inv_a.iter() {
            for t in qa.iter() {
                planes.push([1, ai, sub_mod(0, t, m), q3]);
            }
        }
    }
    Ok((PointSet3::new(p, points)?, PlaneSet::new(p, planes)?))
}

/// `|P|²/p + |P|^{3/2} + k|P|`.
pub fn misha_shape(n: usize, p: Prime, k: usize) -> f64 {
    let n = n as f64;
    n * n / p.get() as f64 + libm::pow(n, 1.5) + k as f64 * n
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::energy::additive_energy;
    use num_traits::ToPrimitive;

    fn p(m: u64) -> Prime {
        Prime::new(m).unwrap()
    }

    #[test]
    fn plane_canonical_form() {
        assert_eq!(canonical_plane(p(7), [0, 3, 6, 2]).unwrap(), [0, 1, 2, 3]);
        assert_eq!(canonical_plane(p(7), [0, 0, 0, 2]), Err(Error::ZeroNormal));
        let s = PlaneSet::new(p(7), [[2, 4, 6, 1], [1, 2, 3, 4]]).unwrap();
        assert_eq!(s.len(), 1);
    }

    #[test]
    fn incidence_examples() {
        let m = p(5);
        let pts = PointSet3::new(m, [[1, 2, 3]]).unwrap();
        let pls = PlaneSet::new(m, [[1, 1, 1, 1]]).unwrap();
        assert_eq!(count_incidences(&pts, &pls).unwrap(), BigUint::from(1u8));
        assert_eq!(count_incidences(&PointSet3::new(m, []).unwrap(), &pls).unwrap(), BigUint::from(0u8));
        let two = p(2);
        let all = PlaneSet::full(two);
        assert_eq!(all.len(), 14);
        assert_eq!(count_incidences(&PointSet3::full(two), &all).unwrap(), BigUint::from(56u8));
    }

    #[test]
    fn full_space_incidences() {
        for m in [2u64, 3, 5] {
            let planes = PlaneSet::full(p(m));
            assert_eq!(planes.len() as u64, m * (m * m + m + 1));
            assert_eq!(PlaneSet::new(p(m), planes.planes().iter().copied()).unwrap(), planes);
            let i = count_incidences(&PointSet3::full(p(m)), &planes).unwrap();
            assert_eq!(i, BigUint::from(planes.len() as u64 * m * m));
        }
    }

    fn collinear_oracle(points: &PointSet3) -> usize {
        let m = points.modulus().get();
        let pts = points.points();
        let n = pts.len();
        if n <= 2 {
            return n;
        }
        let mut best = 2;
        for i in 0..n {
            for j in i + 1..n {
                let count = (0..n)
                    .filter(|&l| {
                        // pts[l] − pts[i] parallel to pts[j] − pts[i]: all 2×2 minors vanish
                        let u: Vec<u64> = (0..3).map(|c| sub_mod(pts[j][c], pts[i][c], m)).collect();
                        let v: Vec<u64> = (0..3).map(|c| sub_mod(pts[l][c], pts[i][c], m)).collect();
                        (0..3).all(|a| (a + 1..3).all(|b| mul_mod(u[a], v[b], m) == mul_mod(u[b], v[a], m)))
                    })
                    .count();
                best = best.max(count);
            }
        }
        best
    }

    #[test]
    fn collinear_examples() {
        let m = p(11);
        assert_eq!(max_collinear(&PointSet3::new(m, [[3, 3, 3]]).unwrap()), 1);
        let axis = PointSet3::new(m, (0..11).map(|t| [t, 0, 0])).unwrap();
        assert_eq!(max_collinear(&axis), 11);
        let mut seed = 12345u64;
        for _ in 0..10 {
            let mut pts = Vec::new();
            while pts.len() < 20 {
                seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                pts.push([(seed >> 33) % 11, (seed >> 40) % 11, (seed >> 50) % 11]);
                pts.sort_unstable();
                pts.dedup();
            }
            let set = PointSet3::new(m, pts).unwrap();
            assert_eq!(max_collinear(&set), collinear_oracle(&set));
        }
    }

    #[test]
    fn energy_instance_lifts_quadruples() {
        let m = p(7);
        let one = ResidueSet::new(m, [1]).unwrap();
        let (pts, pls) = energy_incidence_instance(&one, &one).unwrap();
        assert_eq!((pts.len(), pls.len()), (1, 1));
        assert_eq!(count_incidences(&pts, &pls).unwrap(), BigUint::from(1u8));

        let m = p(13);
        let q = ResidueSet::new(m, [1, 3, 4, 9]).unwrap();
        let a = ResidueSet::new(m, [0, 1, 3, 5]).unwrap();
        let (pts, pls) = energy_incidence_instance(&q, &a).unwrap();
        let qa = combine(&q, &a, SetOp::Product).unwrap();
        assert_eq!(pts.len(), 3 * q.len() * qa.len());
        assert_eq!(pls.len(), pts.len());
        let i = count_incidences(&pts, &pls).unwrap().to_u64().unwrap();
        let e = additive_energy(&q, &q).unwrap().to_u64().unwrap();
        assert!(i >= 9 * e);

        let zero = ResidueSet::new(m, [0]).unwrap();
        assert!(matches!(energy_incidence_instance(&q, &zero), Err(Error::DegenerateInput(_))));
        assert!(matches!(energy_incidence_instance(&zero, &a), Err(Error::DegenerateInput(_))));
    }

    #[test]
    fn misha_p2_constant() {
        let two = p(2);
        let pts = PointSet3::full(two);
        let k = max_collinear(&pts);
        assert_eq!(k, 2);
        let c = 56.0 / misha_shape(pts.len(), two, k);
        assert!((c - 0.7928932188134525).abs() < 1e-12);
    }
}
