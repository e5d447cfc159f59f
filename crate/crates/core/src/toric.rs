//! Smooth complete toric varieties.
//!
//! Everything here is exact combinatorics on the fan. For a divisor
//! `D = Σ aᵢ Dᵢ` the sections of `mD` are the lattice points of `m·P_D`,
//! `P_D = {u : ⟨u, vᵢ⟩ ≥ −aᵢ}`, and for an invariant flag given by an ordered
//! maximal cone `(v_{ρ₁}, …, v_{ρₙ})` the flag valuation of the section `χᵘ`
//! is the unimodular affine map `u ↦ (⟨u, v_{ρₖ}⟩ + a_{ρₖ})ₖ`.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;
use crate::polytope::{HalfSpace, Polytope};
use crate::rational::{common_denominator, q, serde_qs, QVec, Q};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "ToricRepr")]
pub struct ToricVariety {
    dim: usize,
    rays: Vec<Vec<i64>>,
    max_cones: Vec<Vec<usize>>,
}

#[derive(Deserialize)]
struct ToricRepr {
    dim: usize,
    rays: Vec<Vec<i64>>,
    max_cones: Vec<Vec<usize>>,
}

impl TryFrom<ToricRepr> for ToricVariety {
    type Error = Error;
    fn try_from(r: ToricRepr) -> Result<Self> {
        ToricVariety::new(r.dim, r.rays, r.max_cones)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ToricDivisor {
    #[serde(with = "serde_qs")]
    pub coeffs: Vec<Q>,
}

impl ToricDivisor {
    pub fn new(coeffs: Vec<Q>) -> Self {
        ToricDivisor { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        ToricDivisor {
            coeffs: coeffs.iter().map(|&c| q(c)).collect(),
        }
    }

    pub fn scaled(&self, c: &Q) -> ToricDivisor {
        ToricDivisor {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    pub fn plus(&self, other: &ToricDivisor) -> ToricDivisor {
        ToricDivisor {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }
}

/// Invariant flag `X ⊇ D_{ρ₁} ⊇ D_{ρ₁} ∩ D_{ρ₂} ⊇ ⋯ ⊇ {fixed point of the cone}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ToricFlag {
    pub cone: usize,
    pub ray_order: Vec<usize>,
}

/// Level sets of a graded linear series by monomial exponents.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GradedSeries {
    pub levels: BTreeMap<u32, Vec<QVec>>,
}

impl GradedSeries {
    pub fn dim_at(&self, m: u32) -> Option<usize> {
        self.levels.get(&m).map(Vec::len)
    }
}

fn det_i64(rows: &[Vec<i64>]) -> Q {
    let m: Vec<Vec<Q>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| q(x)).collect())
        .collect();
    linalg::det(&m)
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

impl ToricVariety {
    /// Validates a smooth complete fan: distinct primitive rays, unimodular
    /// maximal cones of full size, and every wall shared by exactly two
    /// maximal cones lying on opposite sides.
    pub fn new(
        dim: usize,
        rays: Vec<Vec<i64>>,
        max_cones: Vec<Vec<usize>>,
    ) -> Result<ToricVariety> {
        let bad = |m: String| Err(Error::InvalidModel(m));
        if dim == 0 {
            return bad("toric variety must have dimension ≥ 1".into());
        }
        for (i, r) in rays.iter().enumerate() {
            if r.len() != dim {
                return bad(format!("ray {i} has length {}, expected {dim}", r.len()));
            }
            if r.iter().fold(0, |g, &x| gcd(g, x)) != 1 {
                return bad(format!("ray {i} is not primitive"));
            }
        }
        if rays.iter().collect::<BTreeSet<_>>().len() != rays.len() {
            return bad("rays must be distinct".into());
        }
        let mut sorted_cones = BTreeSet::new();
        for (c, cone) in max_cones.iter().enumerate() {
            if cone.len() != dim || cone.iter().collect::<BTreeSet<_>>().len() != dim {
                return bad(format!("cone {c} must have {dim} distinct rays"));
            }
            if let Some(&i) = cone.iter().find(|&&i| i >= rays.len()) {
                return bad(format!("cone {c} references missing ray {i}"));
            }
            let rows: Vec<Vec<i64>> = cone.iter().map(|&i| rays[i].clone()).collect();
            if det_i64(&rows).abs() != Q::one() {
                return bad(format!("cone {c} is not unimodular"));
            }
            let mut s = cone.clone();
            s.sort_unstable();
            if !sorted_cones.insert(s) {
                return bad(format!("cone {c} is repeated"));
            }
        }
        if max_cones.is_empty() {
            return bad("fan has no maximal cones".into());
        }
        let x = ToricVariety {
            dim,
            rays,
            max_cones,
        };
        x.check_complete()?;
        Ok(x)
    }

    fn check_complete(&self) -> Result<()> {
        for (c, cone) in self.max_cones.iter().enumerate() {
            let dual = self.dual_basis(c);
            for (k, &dropped) in cone.iter().enumerate() {
                let wall: BTreeSet<usize> =
                    cone.iter().copied().filter(|&i| i != dropped).collect();
                let neighbours: Vec<usize> = (0..self.max_cones.len())
                    .filter(|&o| o != c && wall.iter().all(|i| self.max_cones[o].contains(i)))
                    .collect();
                if neighbours.len() != 1 {
                    return Err(Error::InvalidModel(format!(
                        "fan is not complete: wall of cone {c} opposite ray {dropped} lies in {} other cones",
                        neighbours.len()
                    )));
                }
                let other = &self.max_cones[neighbours[0]];
                let opposite = other
                    .iter()
                    .find(|i| !wall.contains(i))
                    .expect("one new ray");
                let side = crate::rational::dot(&dual[k], &self.ray_q(*opposite));
                if !side.is_negative() {
                    return Err(Error::InvalidModel(format!(
                        "cones {c} and {} overlap",
                        neighbours[0]
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rays(&self) -> &[Vec<i64>] {
        &self.rays
    }

    pub fn max_cones(&self) -> &[Vec<usize>] {
        &self.max_cones
    }

    pub fn num_rays(&self) -> usize {
        self.rays.len()
    }

    fn ray_q(&self, i: usize) -> Vec<Q> {
        self.rays[i].iter().map(|&x| q(x)).collect()
    }

    /// Rows `mₖ` with `⟨mₖ, v_{σ(j)}⟩ = δₖⱼ` for the rays of cone `c`.
    fn dual_basis(&self, c: usize) -> Vec<Vec<Q>> {
        let a: Vec<Vec<Q>> = self.max_cones[c].iter().map(|&i| self.ray_q(i)).collect();
        // solve A · mₖ = eₖ
        (0..self.dim)
            .map(|k| {
                let mut e = vec![Q::zero(); self.dim];
                e[k] = Q::one();
                linalg::solve(&a, &e).expect("unimodular cone")
            })
            .collect()
    }

    pub fn divisor(&self, coeffs: Vec<Q>) -> Result<ToricDivisor> {
        self.check_divisor(&ToricDivisor {
            coeffs: coeffs.clone(),
        })?;
        Ok(ToricDivisor { coeffs })
    }

    pub fn check_divisor(&self, d: &ToricDivisor) -> Result<()> {
        if d.coeffs.len() != self.rays.len() {
            return Err(Error::DimensionMismatch {
                expected: self.rays.len(),
                found: d.coeffs.len(),
            });
        }
        Ok(())
    }

    /// `K_X = −Σ Dᵢ`.
    pub fn canonical_divisor(&self) -> ToricDivisor {
        ToricDivisor {
            coeffs: vec![-Q::one(); self.rays.len()],
        }
    }

    pub fn check_flag(&self, flag: &ToricFlag) -> Result<()> {
        let cone = self
            .max_cones
            .get(flag.cone)
            .ok_or_else(|| Error::InvalidFlag(format!("no maximal cone {}", flag.cone)))?;
        let a: BTreeSet<_> = cone.iter().collect();
        let b: BTreeSet<_> = flag.ray_order.iter().collect();
        if a != b || flag.ray_order.len() != cone.len() {
            return Err(Error::InvalidFlag(format!(
                "ray order {:?} is not a permutation of cone {:?}",
                flag.ray_order, cone
            )));
        }
        Ok(())
    }

    /// A flag whose first strata are cut out by `prefix` (which must lie in
    /// a common maximal cone).
    pub fn flag_through(&self, prefix: &[usize]) -> Result<ToricFlag> {
        let cone = self.cone_containing(prefix)?;
        let mut order = prefix.to_vec();
        order.extend(self.max_cones[cone].iter().filter(|i| !prefix.contains(i)));
        Ok(ToricFlag {
            cone,
            ray_order: order,
        })
    }

    fn cone_containing(&self, rays: &[usize]) -> Result<usize> {
        if rays.iter().any(|&i| i >= self.rays.len())
            || rays.iter().collect::<BTreeSet<_>>().len() != rays.len()
        {
            return Err(Error::ReducibleStratum);
        }
        self.max_cones
            .iter()
            .position(|c| rays.iter().all(|i| c.contains(i)))
            .ok_or(Error::ReducibleStratum)
    }

    pub fn section_polytope(&self, d: &ToricDivisor) -> Result<Polytope> {
        self.check_divisor(d)?;
        let hs: Vec<HalfSpace> = self
            .rays
            .iter()
            .zip(&d.coeffs)
            .map(|(r, a)| HalfSpace::new(QVec(r.iter().map(|&x| q(-x)).collect()), a.clone()))
            .collect();
        Polytope::from_halfspaces(&hs, self.dim)
    }

    /// Lattice points of `m·P_D` in lexicographic order.
    pub fn sections(&self, d: &ToricDivisor, m: u32) -> Result<Vec<QVec>> {
        self.check_divisor(d)?;
        let scaled: Vec<Q> = d.coeffs.iter().map(|a| a * q(i64::from(m))).collect();
        if m == 0 || !scaled.iter().all(|x| x.is_integer()) {
            return Err(Error::NonIntegralMultiple(format!("{m}·D")));
        }
        let bounds: Vec<i64> = scaled
            .iter()
            .map(|x| x.to_integer().to_i64().expect("small coefficient"))
            .collect();
        let p = self.section_polytope(d)?;
        if p.is_empty() {
            return Ok(Vec::new());
        }
        let mq = q(i64::from(m));
        let lo: Vec<i64> = (0..self.dim)
            .map(|j| {
                p.vertices()
                    .iter()
                    .map(|v| (&v[j] * &mq).floor().to_integer())
                    .min()
                    .unwrap()
            })
            .map(|x: BigInt| x.to_i64().unwrap())
            .collect();
        let hi: Vec<i64> = (0..self.dim)
            .map(|j| {
                p.vertices()
                    .iter()
                    .map(|v| (&v[j] * &mq).ceil().to_integer())
                    .max()
                    .unwrap()
            })
            .map(|x: BigInt| x.to_i64().unwrap())
            .collect();
        let mut out = Vec::new();
        let mut u = lo.clone();
        'outer: loop {
            if self
                .rays
                .iter()
                .zip(&bounds)
                .all(|(r, &b)| r.iter().zip(&u).map(|(x, y)| x * y).sum::<i64>() >= -b)
            {
                out.push(QVec::from_ints(&u));
            }
            for j in (0..self.dim).rev() {
                if u[j] < hi[j] {
                    u[j] += 1;
                    u[j + 1..].copy_from_slice(&lo[j + 1..]);
                    continue 'outer;
                }
            }
            break;
        }
        Ok(out)
    }

    /// Rows and shift of the flag's valuation map `u ↦ A u + b`.
    pub fn valuation_map(
        &self,
        flag: &ToricFlag,
        d: &ToricDivisor,
    ) -> Result<(Vec<Vec<Q>>, Vec<Q>)> {
        self.check_flag(flag)?;
        self.check_divisor(d)?;
        let rows = flag.ray_order.iter().map(|&i| self.ray_q(i)).collect();
        let shift = flag
            .ray_order
            .iter()
            .map(|&i| d.coeffs[i].clone())
            .collect();
        Ok((rows, shift))
    }

    /// Valuation vector of the section with exponent `u` (a point of `P_D`,
    /// or of `m·P_D` paired with `m·D`).
    pub fn flag_valuation(
        &self,
        flag: &ToricFlag,
        exponent: &QVec,
        d: &ToricDivisor,
    ) -> Result<QVec> {
        let p = self.section_polytope(d)?;
        if !p.contains_point(exponent) {
            return Err(Error::ExponentOutsidePolytope);
        }
        let (rows, shift) = self.valuation_map(flag, d)?;
        Ok(QVec(
            rows.iter()
                .zip(&shift)
                .map(|(r, s)| exponent.dot(r) + s)
                .collect(),
        ))
    }

    pub fn okounkov_body(&self, d: &ToricDivisor, flag: &ToricFlag) -> Result<Polytope> {
        let p = self.section_polytope(d)?;
        if p.is_empty() {
            return Err(Error::NoSections);
        }
        let (rows, shift) = self.valuation_map(flag, d)?;
        p.affine_image(&rows, &shift)
    }

    /// `(1/m)·conv` of the valuation vectors of all monomial sections of `mD`.
    pub fn okounkov_body_bruteforce(
        &self,
        d: &ToricDivisor,
        flag: &ToricFlag,
        m: u32,
    ) -> Result<Polytope> {
        let md = d.scaled(&q(i64::from(m)));
        let secs = self.sections(d, m)?;
        if secs.is_empty() {
            return Err(Error::NoSections);
        }
        let (rows, shift) = self.valuation_map(flag, &md)?;
        let vals: Vec<QVec> = secs
            .iter()
            .map(|u| QVec(rows.iter().zip(&shift).map(|(r, s)| u.dot(r) + s).collect()))
            .collect();
        Polytope::hull(&vals)?.scale(&Q::new(BigInt::one(), BigInt::from(m)))
    }

    /// Indices of rays whose divisors meet in `stratum` must lie in one cone.
    pub fn check_stratum(&self, stratum: &[usize]) -> Result<()> {
        self.cone_containing(stratum).map(|_| ())
    }

    /// Images of the restriction maps to the stratum `⋂_{j∈S} D_j`: the
    /// monomials not vanishing on it, i.e. lattice points of `m·P_D` on the
    /// face `⟨u, v_j⟩ = −m a_j (j ∈ S)`. They restrict to distinct characters
    /// of the stratum's torus, so each level's size is the image dimension.
    pub fn restricted_series(
        &self,
        d: &ToricDivisor,
        stratum: &[usize],
        levels: &[u32],
    ) -> Result<GradedSeries> {
        self.check_stratum(stratum)?;
        let mut out = GradedSeries::default();
        for &m in levels {
            let mq = q(i64::from(m));
            let pts: Vec<QVec> = self
                .sections(d, m)?
                .into_iter()
                .filter(|u| {
                    stratum
                        .iter()
                        .all(|&j| u.dot(&self.ray_q(j)) == -(&d.coeffs[j] * &mq))
                })
                .collect();
            out.levels.insert(m, pts);
        }
        Ok(out)
    }

    /// Restricted volume `vol_{X|V}(D)` as `v!·vol_v` of the face of `P_D`
    /// over `V`, read through a flag that runs through `V`.
    pub fn restricted_volume(&self, d: &ToricDivisor, stratum: &[usize]) -> Result<Q> {
        let flag = self.flag_through(stratum)?;
        let p = self.section_polytope(d)?;
        if p.is_empty() {
            return Ok(Q::zero());
        }
        let body = self.okounkov_body(d, &flag)?;
        let face = body.slice_prefix_zero(stratum.len())?;
        let v = self.dim - stratum.len();
        Ok(face.volume_in_dim(v)? * factorial(v))
    }

    pub fn volume(&self, d: &ToricDivisor) -> Result<Q> {
        self.restricted_volume(d, &[])
    }

    pub fn is_psef(&self, d: &ToricDivisor) -> Result<bool> {
        Ok(!self.section_polytope(d)?.is_empty())
    }

    pub fn is_big(&self, d: &ToricDivisor) -> Result<bool> {
        Ok(self.section_polytope(d)?.dim() == Some(self.dim))
    }

    /// Support-function test: the local data `m_σ` of each maximal cone must
    /// satisfy the inequalities of the remaining rays (strictly for ample).
    fn convexity(&self, d: &ToricDivisor, strict: bool) -> Result<bool> {
        self.check_divisor(d)?;
        for cone in &self.max_cones {
            let a: Vec<Vec<Q>> = cone.iter().map(|&i| self.ray_q(i)).collect();
            let b: Vec<Q> = cone.iter().map(|&i| -d.coeffs[i].clone()).collect();
            let m_sigma = linalg::solve(&a, &b).expect("unimodular");
            for j in (0..self.rays.len()).filter(|j| !cone.contains(j)) {
                let val = crate::rational::dot(&m_sigma, &self.ray_q(j)) + &d.coeffs[j];
                if val.is_negative() || (strict && val.is_zero()) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    pub fn is_nef(&self, d: &ToricDivisor) -> Result<bool> {
        self.convexity(d, false)
    }

    pub fn is_ample(&self, d: &ToricDivisor) -> Result<bool> {
        self.convexity(d, true)
    }

    /// `D ~_ℚ D'`: the difference is `div(χᵘ)` for a rational `u`.
    pub fn linearly_equivalent(&self, a: &ToricDivisor, b: &ToricDivisor) -> Result<bool> {
        self.check_divisor(a)?;
        self.check_divisor(b)?;
        let rows: Vec<Vec<Q>> = (0..self.rays.len()).map(|i| self.ray_q(i)).collect();
        let diff: Vec<Q> = a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x - y).collect();
        Ok(linalg::solve_any(&rows, &diff).is_some())
    }

    /// Smallest positive integer clearing the denominators of `D`.
    pub fn denominator(d: &ToricDivisor) -> u32 {
        common_denominator(&d.coeffs)
            .to_u32()
            .expect("small denominator")
    }

    pub fn product(&self, other: &ToricVariety) -> ToricVariety {
        let n = self.dim + other.dim;
        let mut rays: Vec<Vec<i64>> = Vec::new();
        for r in &self.rays {
            let mut v = r.clone();
            v.resize(n, 0);
            rays.push(v);
        }
        for r in &other.rays {
            let mut v = vec![0; self.dim];
            v.extend(r);
            rays.push(v);
        }
        let off = self.rays.len();
        let mut max_cones = Vec::new();
        for a in &self.max_cones {
            for b in &other.max_cones {
                let mut c = a.clone();
                c.extend(b.iter().map(|i| i + off));
                max_cones.push(c);
            }
        }
        ToricVariety {
            dim: n,
            rays,
            max_cones,
        }
    }
}

pub(crate) fn factorial(k: usize) -> Q {
    (1..=k).fold(Q::one(), |acc, i| acc * q(i as i64))
}

/// The projection `Y × F → Y` of a product fan.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductFibration {
    pub base: ToricVariety,
    pub fiber: ToricVariety,
    pub total: ToricVariety,
}

impl ProductFibration {
    pub fn new(base: ToricVariety, fiber: ToricVariety) -> Self {
        let total = base.product(&fiber);
        ProductFibration { base, fiber, total }
    }

    /// `f*D_Y`: base-ray divisors pull back to the corresponding product rays.
    pub fn pullback(&self, d: &ToricDivisor) -> ToricDivisor {
        let mut coeffs = d.coeffs.clone();
        coeffs.resize(self.total.num_rays(), Q::zero());
        ToricDivisor { coeffs }
    }

    /// `D|_F` up to linear equivalence: vertical divisors restrict trivially.
    pub fn restrict_to_fiber(&self, d: &ToricDivisor) -> ToricDivisor {
        ToricDivisor {
            coeffs: d.coeffs[self.base.num_rays()..].to_vec(),
        }
    }

    pub fn pullback_matrix(&self) -> Vec<Vec<Q>> {
        let nb = self.base.num_rays();
        (0..self.total.num_rays())
            .map(|i| {
                (0..nb)
                    .map(|j| if i == j { Q::one() } else { Q::zero() })
                    .collect()
            })
            .collect()
    }

    pub fn restriction_matrix(&self) -> Vec<Vec<Q>> {
        let nb = self.base.num_rays();
        (0..self.fiber.num_rays())
            .map(|i| {
                (0..self.total.num_rays())
                    .map(|j| if j == nb + i { Q::one() } else { Q::zero() })
                    .collect()
            })
            .collect()
    }

    /// Fiber-type flag: base rays first, then fiber rays.
    pub fn composite_flag(
        &self,
        base_flag: &ToricFlag,
        fiber_flag: &ToricFlag,
    ) -> Result<ToricFlag> {
        self.base.check_flag(base_flag)?;
        self.fiber.check_flag(fiber_flag)?;
        let off = self.base.num_rays();
        let mut ray_order = base_flag.ray_order.clone();
        ray_order.extend(fiber_flag.ray_order.iter().map(|i| i + off));
        Ok(ToricFlag {
            cone: base_flag.cone * self.fiber.max_cones().len() + fiber_flag.cone,
            ray_order,
        })
    }

    /// Ray indices (in the total fan) cutting out the fiber over the base
    /// flag's fixed point.
    pub fn fiber_stratum(&self, base_flag: &ToricFlag) -> Vec<usize> {
        base_flag.ray_order.clone()
    }
}

/// Standard fans used throughout the tests and fixtures.
pub mod fans {
    use super::ToricVariety;

    /// ℙ¹ with rays `e₁, −e₁`.
    pub fn line() -> ToricVariety {
        ToricVariety::new(1, vec![vec![1], vec![-1]], vec![vec![0], vec![1]]).unwrap()
    }

    /// ℙ² with rays `e₁, e₂, −e₁−e₂`.
    pub fn plane() -> ToricVariety {
        ToricVariety::new(
            2,
            vec![vec![1, 0], vec![0, 1], vec![-1, -1]],
            vec![vec![0, 1], vec![1, 2], vec![2, 0]],
        )
        .unwrap()
    }

    /// ℙⁿ.
    pub fn projective_space(n: usize) -> ToricVariety {
        let mut rays: Vec<Vec<i64>> = (0..n)
            .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
            .collect();
        rays.push(vec![-1; n]);
        let cones = (0..=n)
            .map(|skip| (0..=n).filter(|&i| i != skip).collect())
            .collect();
        ToricVariety::new(n, rays, cones).unwrap()
    }

    /// Hirzebruch surface `F_a` with rays `e₁, e₂, −e₁ + a e₂, −e₂`.
    pub fn hirzebruch(a: i64) -> ToricVariety {
        ToricVariety::new(
            2,
            vec![vec![1, 0], vec![0, 1], vec![-1, a], vec![0, -1]],
            vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![3, 0]],
        )
        .unwrap()
    }

    /// Blow-up of ℙ² at the fixed point of cone(e₁, e₂): rays
    /// `e₁, e₁+e₂, e₂, −e₁−e₂`; the exceptional curve is ray 1.
    pub fn blown_up_plane() -> ToricVariety {
        ToricVariety::new(
            2,
            vec![vec![1, 0], vec![1, 1], vec![0, 1], vec![-1, -1]],
            vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![3, 0]],
        )
        .unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::fans::*;
    use super::*;
    use crate::rational::qr;

    fn pts(p: &[&[i64]]) -> Polytope {
        Polytope::hull(&p.iter().map(|x| QVec::from_ints(x)).collect::<Vec<_>>()).unwrap()
    }

    fn std_flag() -> ToricFlag {
        ToricFlag {
            cone: 0,
            ray_order: vec![0, 1],
        }
    }

    fn line_line() -> ProductFibration {
        ProductFibration::new(line(), line())
    }

    #[test]
    fn rejects_bad_fans() {
        assert!(ToricVariety::new(2, vec![vec![1, 0], vec![0, 1]], vec![vec![0, 1]]).is_err());
        assert!(ToricVariety::new(
            2,
            vec![vec![2, 0], vec![0, 1], vec![-1, -1]],
            vec![vec![0, 1], vec![1, 2], vec![2, 0]]
        )
        .is_err());
        // singular cone
        assert!(ToricVariety::new(
            2,
            vec![vec![1, 0], vec![1, 2], vec![-1, -1]],
            vec![vec![0, 1], vec![1, 2], vec![2, 0]]
        )
        .is_err());
        assert!(ToricVariety::new(1, vec![vec![1], vec![1]], vec![vec![0], vec![1]]).is_err());
    }

    #[test]
    fn section_polytope_examples() {
        let x = plane();
        let d = ToricDivisor::from_ints(&[0, 0, 3]);
        assert_eq!(
            x.section_polytope(&d).unwrap(),
            pts(&[&[0, 0], &[3, 0], &[0, 3]])
        );
        let ll = line_line().total;
        // aF₁ + bF₂ with a = 2 on ray −e₁ and b = 3 on ray −e₂
        let d = ToricDivisor::from_ints(&[0, 2, 0, 3]);
        assert_eq!(
            ll.section_polytope(&d).unwrap(),
            pts(&[&[0, 0], &[2, 0], &[0, 3], &[2, 3]])
        );
        assert_eq!(
            x.section_polytope(&ToricDivisor::from_ints(&[0, 0, 0]))
                .unwrap(),
            pts(&[&[0, 0]])
        );
        assert!(x
            .section_polytope(&ToricDivisor::from_ints(&[0, 0, -1]))
            .unwrap()
            .is_empty());
    }

    #[test]
    fn section_counts() {
        let x = plane();
        assert_eq!(
            x.sections(&ToricDivisor::from_ints(&[0, 0, 1]), 2)
                .unwrap()
                .len(),
            6
        );
        assert_eq!(
            x.sections(&ToricDivisor::from_ints(&[0, 0, 0]), 7).unwrap(),
            vec![QVec::from_ints(&[0, 0])]
        );
        let ll = line_line().total;
        assert_eq!(
            ll.sections(&ToricDivisor::from_ints(&[0, 1, 0, 1]), 3)
                .unwrap()
                .len(),
            16
        );
        let half = ToricDivisor::new(vec![q(0), q(0), qr(1, 2)]);
        assert!(matches!(
            x.sections(&half, 1),
            Err(Error::NonIntegralMultiple(_))
        ));
        assert_eq!(x.sections(&half, 2).unwrap().len(), 3);
    }

    #[test]
    fn valuation_image_is_simplex() {
        let x = plane();
        let d = ToricDivisor::from_ints(&[0, 0, 2]);
        let vals: Vec<QVec> = x
            .sections(&d, 1)
            .unwrap()
            .iter()
            .map(|u| x.flag_valuation(&std_flag(), u, &d).unwrap())
            .collect();
        let expected: BTreeSet<QVec> = (0..=2)
            .flat_map(|t| (0..=2 - t).map(move |y| QVec::from_ints(&[t, y])))
            .collect();
        assert_eq!(vals.into_iter().collect::<BTreeSet<_>>(), expected);
        // fixed-point vertex of the flag cone maps to 0
        assert_eq!(
            x.flag_valuation(&std_flag(), &QVec::from_ints(&[0, 0]), &d)
                .unwrap(),
            QVec::zeros(2)
        );
        let z = ToricDivisor::from_ints(&[0, 0, 0]);
        assert_eq!(
            x.flag_valuation(&std_flag(), &QVec::zeros(2), &z).unwrap(),
            QVec::zeros(2)
        );
        assert_eq!(
            x.flag_valuation(&std_flag(), &QVec::from_ints(&[5, 0]), &d),
            Err(Error::ExponentOutsidePolytope)
        );
    }

    #[test]
    fn bodies_and_oracle() {
        let x = plane();
        for deg in 1..=3 {
            let d = ToricDivisor::from_ints(&[0, 0, deg]);
            let body = x.okounkov_body(&d, &std_flag()).unwrap();
            assert_eq!(body, pts(&[&[0, 0], &[deg, 0], &[0, deg]]));
            assert_eq!(body.volume_in_dim(2).unwrap(), qr(deg * deg, 2));
            let brute = x.okounkov_body_bruteforce(&d, &std_flag(), 20).unwrap();
            assert_eq!(brute, body);
        }
        let fs = line_line();
        let d = ToricDivisor::from_ints(&[0, 2, 0, 3]);
        let flag = fs
            .composite_flag(
                &ToricFlag {
                    cone: 0,
                    ray_order: vec![0],
                },
                &ToricFlag {
                    cone: 0,
                    ray_order: vec![0],
                },
            )
            .unwrap();
        let body = fs.total.okounkov_body(&d, &flag).unwrap();
        assert_eq!(body, pts(&[&[0, 0], &[2, 0], &[0, 3], &[2, 3]]));
        assert_eq!(
            fs.total.okounkov_body_bruteforce(&d, &flag, 5).unwrap(),
            body
        );
        let z = ToricDivisor::from_ints(&[0, 0, 0]);
        assert_eq!(x.okounkov_body(&z, &std_flag()).unwrap(), pts(&[&[0, 0]]));
        assert_eq!(
            x.okounkov_body(&ToricDivisor::from_ints(&[0, 0, -1]), &std_flag()),
            Err(Error::NoSections)
        );
    }

    #[test]
    fn bruteforce_is_inside_for_rational_divisor() {
        let x = plane();
        let d = ToricDivisor::new(vec![q(0), qr(1, 3), qr(1, 2)]);
        let exact = x.okounkov_body(&d, &std_flag()).unwrap();
        for m in [6, 12, 18] {
            let brute = x.okounkov_body_bruteforce(&d, &std_flag(), m).unwrap();
            assert!(exact.contains(&brute).contained);
        }
    }

    #[test]
    fn restricted_series_examples() {
        let x = plane();
        let d = ToricDivisor::from_ints(&[0, 0, 2]);
        assert_eq!(
            x.restricted_series(&d, &[0], &[1]).unwrap().dim_at(1),
            Some(3)
        );
        let z = ToricDivisor::from_ints(&[0, 0, 0]);
        let s = x.restricted_series(&z, &[0], &[1, 2, 3]).unwrap();
        assert!(s.levels.values().all(|l| l.len() == 1));
        let ll = line_line().total;
        let b = 3;
        let d = ToricDivisor::from_ints(&[0, 2, 0, b]);
        let s = ll.restricted_series(&d, &[0], &[1, 2, 4]).unwrap();
        for (&m, lvl) in &s.levels {
            assert_eq!(lvl.len() as i64, b * i64::from(m) + 1);
        }
        assert_eq!(
            x.restricted_series(&d, &[0, 2, 1], &[1]),
            Err(Error::ReducibleStratum)
        );
    }

    #[test]
    fn restricted_volume_examples() {
        let ll = line_line().total;
        let d = ToricDivisor::from_ints(&[0, 2, 0, 3]);
        assert_eq!(ll.restricted_volume(&d, &[0]).unwrap(), q(3));
        assert_eq!(ll.restricted_volume(&d, &[]).unwrap(), q(12));
        assert_eq!(
            ll.restricted_volume(&ToricDivisor::from_ints(&[0, 0, 0, 0]), &[])
                .unwrap(),
            q(0)
        );
        // finite-level ratios approach the limit from the series
        let s = ll.restricted_series(&d, &[0], &[50]).unwrap();
        let ratio = q(s.dim_at(50).unwrap() as i64) / q(50);
        assert!((ratio - q(3)).abs() <= qr(1, 50));
    }

    #[test]
    fn cone_tests_on_plane_and_blowup() {
        let x = plane();
        let h = ToricDivisor::from_ints(&[0, 0, 1]);
        assert!(x.is_ample(&h).unwrap() && x.is_nef(&h).unwrap() && x.is_big(&h).unwrap());
        let z = ToricDivisor::from_ints(&[0, 0, 0]);
        assert!(
            x.is_nef(&z).unwrap()
                && !x.is_ample(&z).unwrap()
                && x.is_psef(&z).unwrap()
                && !x.is_big(&z).unwrap()
        );
        let b = blown_up_plane();
        // 2H + E: big, not nef
        let d = ToricDivisor::from_ints(&[0, 1, 0, 2]);
        assert!(b.is_big(&d).unwrap() && !b.is_nef(&d).unwrap());
        // H − E is the fiber class D₀
        let f = ToricDivisor::from_ints(&[1, 0, 0, 0]);
        assert!(b.is_nef(&f).unwrap() && !b.is_big(&f).unwrap());
        assert!(b
            .linearly_equivalent(&f, &ToricDivisor::from_ints(&[0, -1, 0, 1]))
            .unwrap());
    }

    #[test]
    fn flag_independent_volume() {
        let b = blown_up_plane();
        let d = ToricDivisor::from_ints(&[0, 1, 0, 2]);
        let vols: BTreeSet<Q> = (0..4)
            .flat_map(|c| {
                let cone = b.max_cones()[c].clone();
                [vec![cone[0], cone[1]], vec![cone[1], cone[0]]]
                    .into_iter()
                    .map(move |order| ToricFlag {
                        cone: c,
                        ray_order: order,
                    })
            })
            .map(|f| b.okounkov_body(&d, &f).unwrap().volume_in_dim(2).unwrap())
            .collect();
        assert_eq!(vols.into_iter().collect::<Vec<_>>(), vec![q(2)]);
    }

    #[test]
    fn product_fibration_construction() {
        let fs = line_line();
        assert_eq!(fs.total.dim(), 2);
        assert_eq!(fs.total.max_cones().len(), 4);
        let pf = ProductFibration::new(plane(), line());
        assert_eq!(pf.total.dim(), 3);
        assert_eq!(pf.fiber.dim(), 1);
        // f*D_Y has polytope P_{D_Y} × {0}
        let dy = ToricDivisor::from_ints(&[0, 0, 2]);
        let pulled = pf.total.section_polytope(&pf.pullback(&dy)).unwrap();
        assert_eq!(pulled, plane().section_polytope(&dy).unwrap().embed(0, 1));
        let r: Vec<Vec<Q>> = pf.restriction_matrix();
        let p = pf.pullback_matrix();
        let comp = (0..r.len()).all(|i| {
            (0..p[0].len()).all(|j| {
                (0..p.len())
                    .map(|k| &r[i][k] * &p[k][j])
                    .sum::<Q>()
                    .is_zero()
            })
        });
        assert!(comp);
    }

    #[test]
    fn valuation_is_additive_and_injective() {
        let b = blown_up_plane();
        let d = ToricDivisor::from_ints(&[0, 1, 0, 2]);
        let flag = ToricFlag {
            cone: 0,
            ray_order: vec![1, 0],
        };
        for m in 1..=5u32 {
            let vals: BTreeSet<QVec> = b
                .sections(&d, m)
                .unwrap()
                .iter()
                .map(|u| {
                    b.flag_valuation(&flag, u, &d.scaled(&q(i64::from(m))))
                        .unwrap()
                })
                .collect();
            assert_eq!(vals.len(), b.sections(&d, m).unwrap().len());
        }
        let s1 = QVec::from_ints(&[0, 0]);
        let s2 = QVec::from_ints(&[1, 0]);
        let d2 = d.scaled(&q(2));
        let v1 = b.flag_valuation(&flag, &s1, &d).unwrap();
        let v2 = b.flag_valuation(&flag, &s2, &d).unwrap();
        assert_eq!(
            b.flag_valuation(&flag, &(&s1 + &s2), &d2).unwrap(),
            &v1 + &v2
        );
    }
}
