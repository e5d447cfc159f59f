//! Smooth projective surfaces given by numerical data.
//!
//! A model is a Néron–Severi lattice with its intersection form plus declared
//! generators of the pseudoeffective and nef cones and the finitely many
//! negative curves that matter. Bodies are computed for flags `(C, x)` with
//! `x` a general point of the curve `C`.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;
use crate::polytope::Polytope;
use crate::rational::{dot, format_q, q, serde_qmat, serde_qs, QVec, Q};

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Abundance {
    /// Flag curve index (as a string key) ↦ degree of the Iitaka map on it.
    pub iitaka_degree_on: BTreeMap<String, u32>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "SurfaceRepr", into = "SurfaceRepr")]
pub struct SurfaceLattice {
    rank: usize,
    gram: Vec<Vec<Q>>,
    effective_generators: Vec<Vec<Q>>,
    nef_generators: Vec<Vec<Q>>,
    negative_curves: Vec<usize>,
    canonical_class: Vec<Q>,
    abundance: Option<Abundance>,
    declared_kappa: BTreeMap<String, i64>,
    psef_facets: OnceLock<Vec<Vec<Q>>>,
}

impl PartialEq for SurfaceLattice {
    fn eq(&self, other: &Self) -> bool {
        SurfaceRepr::from(self.clone()) == SurfaceRepr::from(other.clone())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
struct SurfaceRepr {
    rank: usize,
    gram: Vec<Vec<i64>>,
    #[serde(with = "serde_qmat")]
    effective_generators: Vec<Vec<Q>>,
    #[serde(with = "serde_qmat")]
    nef_generators: Vec<Vec<Q>>,
    negative_curves: Vec<usize>,
    #[serde(with = "serde_qs")]
    canonical_class: Vec<Q>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    abundance: Option<Abundance>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    declared_kappa: BTreeMap<String, i64>,
}

impl TryFrom<SurfaceRepr> for SurfaceLattice {
    type Error = Error;
    fn try_from(r: SurfaceRepr) -> Result<Self> {
        SurfaceLattice::new(
            r.rank,
            r.gram,
            r.effective_generators,
            r.nef_generators,
            r.negative_curves,
            r.canonical_class,
            r.abundance,
            r.declared_kappa,
        )
    }
}

impl From<SurfaceLattice> for SurfaceRepr {
    fn from(s: SurfaceLattice) -> Self {
        use num_traits::ToPrimitive;
        SurfaceRepr {
            rank: s.rank,
            gram: s
                .gram
                .iter()
                .map(|r| r.iter().map(|x| x.to_integer().to_i64().unwrap()).collect())
                .collect(),
            effective_generators: s.effective_generators,
            nef_generators: s.nef_generators,
            negative_curves: s.negative_curves,
            canonical_class: s.canonical_class,
            abundance: s.abundance,
            declared_kappa: s.declared_kappa,
        }
    }
}

/// `D = P + N` with `P` nef, `N` effective on a negative-definite support
/// and `P·Cᵢ = 0` along the support.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ZariskiPair {
    #[serde(with = "serde_qs")]
    pub positive: Vec<Q>,
    #[serde(with = "serde_qs")]
    pub negative: Vec<Q>,
    /// Indices into the negative-curve list, ascending.
    pub support: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ConeTests {
    pub is_psef: bool,
    pub is_nef: bool,
    pub is_big: bool,
    pub is_ample: bool,
}

/// Breakpoints `(tᵢ, β(tᵢ))` of the upper boundary of a surface body over
/// `[ν, μ]`; the lower boundary is `y = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BodyProfile {
    pub points: Vec<(Q, Q)>,
}

impl BodyProfile {
    pub fn polytope(&self) -> Polytope {
        let mut pts = Vec::new();
        for (t, b) in &self.points {
            pts.push(QVec(vec![t.clone(), Q::zero()]));
            pts.push(QVec(vec![t.clone(), b.clone()]));
        }
        Polytope::hull(&pts).expect("profile is nonempty")
    }

    /// Drops interior points where the slope does not change.
    fn simplify(mut self) -> Self {
        let mut i = 1;
        while i + 1 < self.points.len() {
            let (t0, b0) = &self.points[i - 1];
            let (t1, b1) = &self.points[i];
            let (t2, b2) = &self.points[i + 1];
            if (b1 - b0) * (t2 - t1) == (b2 - b1) * (t1 - t0) {
                self.points.remove(i);
            } else {
                i += 1;
            }
        }
        if self.points.len() == 2 && self.points[0] == self.points[1] {
            self.points.pop();
        }
        self
    }
}

pub const DEFAULT_EPSILON: (i64, i64) = (1, 64);
const MAX_RETRIES: usize = 10;

impl SurfaceLattice {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        rank: usize,
        gram: Vec<Vec<i64>>,
        effective_generators: Vec<Vec<Q>>,
        nef_generators: Vec<Vec<Q>>,
        negative_curves: Vec<usize>,
        canonical_class: Vec<Q>,
        abundance: Option<Abundance>,
        declared_kappa: BTreeMap<String, i64>,
    ) -> Result<SurfaceLattice> {
        let bad = |m: String| Err(Error::InvalidModel(m));
        if rank == 0 {
            return bad("rank must be ≥ 1".into());
        }
        if gram.len() != rank || gram.iter().any(|r| r.len() != rank) {
            return bad(format!("gram must be {rank}×{rank}"));
        }
        for i in 0..rank {
            for j in 0..rank {
                if gram[i][j] != gram[j][i] {
                    return bad("gram is not symmetric".into());
                }
            }
        }
        let gram: Vec<Vec<Q>> = gram
            .iter()
            .map(|r| r.iter().map(|&x| q(x)).collect())
            .collect();
        if linalg::inertia(&gram) != (1, rank - 1, 0) {
            return bad(format!(
                "intersection form must have signature (1, {})",
                rank - 1
            ));
        }
        for (name, list) in [
            ("effective", &effective_generators),
            ("nef", &nef_generators),
        ] {
            if list.is_empty() {
                return bad(format!("no {name} generators"));
            }
            if let Some(g) = list.iter().find(|g| g.len() != rank) {
                return bad(format!(
                    "{name} generator of length {}, expected {rank}",
                    g.len()
                ));
            }
        }
        if canonical_class.len() != rank {
            return bad("canonical class has wrong length".into());
        }
        let s = SurfaceLattice {
            rank,
            gram,
            effective_generators,
            nef_generators,
            negative_curves,
            canonical_class,
            abundance,
            declared_kappa,
            psef_facets: OnceLock::new(),
        };
        for (i, n) in s.nef_generators.iter().enumerate() {
            for (j, e) in s.effective_generators.iter().enumerate() {
                if s.intersect(n, e).is_negative() {
                    return bad(format!(
                        "nef generator {i} pairs negatively with effective generator {j}"
                    ));
                }
            }
        }
        for &c in &s.negative_curves {
            let Some(g) = s.effective_generators.get(c) else {
                return bad(format!("negative curve {c} is not an effective generator"));
            };
            if !s.intersect(g, g).is_negative() {
                return bad(format!(
                    "negative curve {c} has nonnegative self-intersection"
                ));
            }
        }
        if let Some(a) = &s.abundance {
            for (k, &deg) in &a.iitaka_degree_on {
                let ok = k
                    .parse::<usize>()
                    .is_ok_and(|i| i < s.effective_generators.len());
                if !ok || deg == 0 {
                    return bad(format!("abundance entry {k:?} must name an effective generator with positive degree"));
                }
            }
        }
        Ok(s)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn gram(&self) -> &[Vec<Q>] {
        &self.gram
    }

    pub fn effective_generators(&self) -> &[Vec<Q>] {
        &self.effective_generators
    }

    pub fn nef_generators(&self) -> &[Vec<Q>] {
        &self.nef_generators
    }

    pub fn negative_curves(&self) -> &[usize] {
        &self.negative_curves
    }

    pub fn canonical_class(&self) -> &[Q] {
        &self.canonical_class
    }

    pub fn abundance(&self) -> Option<&Abundance> {
        self.abundance.as_ref()
    }

    /// Declared Iitaka dimension of a class, keyed by its comma-joined
    /// coefficients (`"2,2"`).
    pub fn declared_kappa(&self, d: &[Q]) -> Option<i64> {
        self.declared_kappa.get(&class_key(d)).copied()
    }

    /// The same lattice with the negative curves listed in another order.
    pub fn with_negative_curve_order(&self, order: Vec<usize>) -> SurfaceLattice {
        let mut s = self.clone();
        s.negative_curves = order;
        s
    }

    pub fn check_class(&self, d: &[Q]) -> Result<()> {
        if d.len() != self.rank {
            return Err(Error::DimensionMismatch {
                expected: self.rank,
                found: d.len(),
            });
        }
        Ok(())
    }

    pub fn check_curve(&self, c: usize) -> Result<()> {
        if c >= self.effective_generators.len() {
            return Err(Error::InvalidFlag(format!("no effective generator {c}")));
        }
        Ok(())
    }

    pub fn intersect(&self, a: &[Q], b: &[Q]) -> Q {
        dot(a, &linalg::mat_vec(&self.gram, b))
    }

    pub fn try_intersect(&self, a: &[Q], b: &[Q]) -> Result<Q> {
        self.check_class(a)?;
        self.check_class(b)?;
        Ok(self.intersect(a, b))
    }

    /// Inward normals `a` of the declared pseudoeffective cone, as
    /// `⟨a, x⟩ ≤ 0`.
    fn psef_facets(&self) -> &[Vec<Q>] {
        self.psef_facets.get_or_init(|| {
            let mut pts = vec![QVec::zeros(self.rank)];
            pts.extend(self.effective_generators.iter().map(|g| QVec(g.clone())));
            let hull = Polytope::hull(&pts).expect("nonempty");
            hull.to_hrep()
                .iter()
                .filter(|h| h.offset.is_zero())
                .map(|h| h.normal.0.clone())
                .collect()
        })
    }

    pub fn is_psef(&self, d: &[Q]) -> bool {
        self.psef_facets().iter().all(|a| !dot(a, d).is_positive())
    }

    pub fn is_nef(&self, d: &[Q]) -> bool {
        self.effective_generators
            .iter()
            .all(|g| !self.intersect(d, g).is_negative())
    }

    pub fn is_ample(&self, d: &[Q]) -> bool {
        self.effective_generators
            .iter()
            .all(|g| self.intersect(d, g).is_positive())
            && self.intersect(d, d).is_positive()
    }

    pub fn is_big(&self, d: &[Q]) -> Result<bool> {
        if !self.is_psef(d) {
            return Ok(false);
        }
        let z = self.zariski_decompose(d)?;
        Ok(self.intersect(&z.positive, &z.positive).is_positive())
    }

    pub fn cone_tests(&self, d: &[Q]) -> Result<ConeTests> {
        self.check_class(d)?;
        Ok(ConeTests {
            is_psef: self.is_psef(d),
            is_nef: self.is_nef(d),
            is_big: self.is_big(d)?,
            is_ample: self.is_ample(d),
        })
    }

    fn curve(&self, neg_index: usize) -> &[Q] {
        &self.effective_generators[self.negative_curves[neg_index]]
    }

    /// `N = Σ xᵢ Cᵢ` on `support` with `N·Cᵢ = D·Cᵢ`; `None` when the support's
    /// Gram matrix is not negative definite.
    fn negative_part_on(&self, d: &[Q], support: &[usize]) -> Option<Vec<Q>> {
        if support.is_empty() {
            return Some(vec![Q::zero(); self.rank]);
        }
        let g: Vec<Vec<Q>> = support
            .iter()
            .map(|&i| {
                support
                    .iter()
                    .map(|&j| self.intersect(self.curve(i), self.curve(j)))
                    .collect()
            })
            .collect();
        if linalg::inertia(&g) != (0, support.len(), 0) {
            return None;
        }
        let rhs: Vec<Q> = support
            .iter()
            .map(|&i| self.intersect(d, self.curve(i)))
            .collect();
        let x = linalg::solve(&g, &rhs)?;
        let mut n = vec![Q::zero(); self.rank];
        for (xi, &i) in x.iter().zip(support) {
            for (nk, ck) in n.iter_mut().zip(self.curve(i)) {
                *nk += xi * ck;
            }
        }
        Some(n)
    }

    /// Runs the support-enlarging iteration starting from `support`.
    fn zariski_from(&self, d: &[Q], mut support: Vec<usize>) -> Result<ZariskiPair> {
        loop {
            let n = self
                .negative_part_on(d, &support)
                .ok_or(Error::ConeDataIncomplete)?;
            let p: Vec<Q> = d.iter().zip(&n).map(|(a, b)| a - b).collect();
            let added: Vec<usize> = (0..self.negative_curves.len())
                .filter(|i| {
                    !support.contains(i) && self.intersect(&p, self.curve(*i)).is_negative()
                })
                .collect();
            if added.is_empty() {
                if !self.is_nef(&p) {
                    return Err(Error::ConeDataIncomplete);
                }
                support.sort_unstable();
                return Ok(ZariskiPair {
                    positive: p,
                    negative: n,
                    support,
                });
            }
            support.extend(added);
        }
    }

    pub fn zariski_decompose(&self, d: &[Q]) -> Result<ZariskiPair> {
        self.check_class(d)?;
        if !self.is_psef(d) {
            return Err(Error::NotPseudoEffective);
        }
        let mut z = self.zariski_from(d, Vec::new())?;
        // report the support in terms of the declared negative-curve indices
        // so that permuted declarations compare equal
        z.support = z.support.iter().map(|&i| self.negative_curves[i]).collect();
        z.support.sort_unstable();
        Ok(z)
    }

    pub fn volume(&self, d: &[Q]) -> Result<Q> {
        self.check_class(d)?;
        if !self.is_psef(d) {
            return Ok(Q::zero());
        }
        let z = self.zariski_decompose(d)?;
        Ok(self.intersect(&z.positive, &z.positive))
    }

    /// `sup {t : D − tC psef}`.
    pub fn mu(&self, d: &[Q], c: &[Q]) -> Result<Q> {
        let mut best: Option<Q> = None;
        for a in self.psef_facets() {
            let ac = dot(a, c);
            if ac.is_negative() {
                let t = dot(a, d) / ac;
                if best.as_ref().is_none_or(|b| &t < b) {
                    best = Some(t);
                }
            }
        }
        best.ok_or(Error::ConeDataIncomplete)
    }

    /// Coefficient of `C` in the negative part of `D` (zero when `C` is not a
    /// negative curve).
    fn order_along(&self, z: &ZariskiPair, curve: usize) -> Result<Q> {
        if !self.negative_curves.contains(&curve) {
            return Ok(Q::zero());
        }
        let basis: Vec<Vec<Q>> = z
            .support
            .iter()
            .map(|&i| self.effective_generators[i].clone())
            .collect();
        if basis.is_empty() {
            return Ok(Q::zero());
        }
        let x = linalg::solve_any(&linalg::transpose(&basis), &z.negative)
            .ok_or(Error::ConeDataIncomplete)?;
        Ok(z.support
            .iter()
            .zip(&x)
            .find(|(&i, _)| i == curve)
            .map_or_else(Q::zero, |(_, v)| v.clone()))
    }

    /// Exact breakpoints of the body of `D` for the flag centred at a general
    /// point of the effective generator `curve`.
    pub fn body_profile(&self, d: &[Q], curve: usize) -> Result<BodyProfile> {
        self.check_class(d)?;
        self.check_curve(curve)?;
        if !self.is_psef(d) {
            return Err(Error::NotPseudoEffective);
        }
        let c = self.effective_generators[curve].clone();
        let z0 = self.zariski_decompose(d)?;
        let nu = self.order_along(&z0, curve)?;
        let mu = self.mu(d, &c)?;
        if mu < nu {
            return Err(Error::ConeDataIncomplete);
        }
        let at = |t: &Q| -> Vec<Q> { d.iter().zip(&c).map(|(a, b)| a - t * b).collect() };
        let neg_pos = |i: usize| self.negative_curves.iter().position(|&k| k == i).unwrap();
        let mut t = nu.clone();
        let mut support: Vec<usize> = self
            .zariski_decompose(&at(&t))?
            .support
            .iter()
            .map(|&i| neg_pos(i))
            .collect();
        let mut points = Vec::new();
        loop {
            // P^S(s) = D − sC − N^S(s) is affine in s; evaluate at t and t + 1
            let p_here = {
                let dt = at(&t);
                let n = self
                    .negative_part_on(&dt, &support)
                    .ok_or(Error::ConeDataIncomplete)?;
                dt.iter().zip(&n).map(|(a, b)| a - b).collect::<Vec<Q>>()
            };
            points.push((t.clone(), self.intersect(&p_here, &c)));
            if t == mu {
                break;
            }
            let p_next = {
                let dt = at(&(&t + Q::one()));
                let n = self
                    .negative_part_on(&dt, &support)
                    .ok_or(Error::ConeDataIncomplete)?;
                dt.iter().zip(&n).map(|(a, b)| a - b).collect::<Vec<Q>>()
            };
            let mut next = mu.clone();
            let mut grow = Vec::new();
            for i in (0..self.negative_curves.len()).filter(|i| !support.contains(i)) {
                let v0 = self.intersect(&p_here, self.curve(i));
                let v1 = self.intersect(&p_next, self.curve(i)) - &v0;
                if v1.is_negative() {
                    if v0.is_zero() {
                        grow.push(i);
                    } else {
                        let root = &t - &v0 / &v1;
                        if root < next {
                            next = root;
                        }
                    }
                }
            }
            if !grow.is_empty() {
                support.extend(grow);
                points.pop();
                continue;
            }
            t = next;
        }
        Ok(BodyProfile { points }.simplify())
    }

    pub fn okounkov_body(&self, d: &[Q], curve: usize) -> Result<Polytope> {
        Ok(self.body_profile(d, curve)?.polytope())
    }

    /// `⋂_{ε>0} Δ(D + εA)`, from bodies at `ε, ε/2` extrapolated to `0` and
    /// checked at `ε/4` and against the direct body of `D`.
    pub fn limiting_body(
        &self,
        d: &[Q],
        curve: usize,
        a: &[Q],
        epsilon: Option<Q>,
    ) -> Result<Polytope> {
        self.check_class(a)?;
        if !self.is_ample(a) {
            return Err(Error::NotAmple);
        }
        let direct = self.okounkov_body(d, curve)?;
        let mut eps =
            epsilon.unwrap_or_else(|| Q::new(DEFAULT_EPSILON.0.into(), DEFAULT_EPSILON.1.into()));
        if !eps.is_positive() {
            return Err(Error::NegativeScale(format_q(&eps)));
        }
        let two = q(2);
        let shifted = |e: &Q| -> Vec<Q> { d.iter().zip(a).map(|(x, y)| x + e * y).collect() };
        for _ in 0..=MAX_RETRIES {
            let p1 = self.body_profile(&shifted(&eps), curve)?;
            let p2 = self.body_profile(&shifted(&(&eps / &two)), curve)?;
            let p3 = self.body_profile(&shifted(&(&eps / q(4))), curve)?;
            if p1.points.len() == p2.points.len() && p2.points.len() == p3.points.len() {
                let lin = |x: &Q, y: &Q| -> Q { &two * y - x };
                let limit: Vec<(Q, Q)> = p1
                    .points
                    .iter()
                    .zip(&p2.points)
                    .map(|((t1, b1), (t2, b2))| (lin(t1, t2), lin(b1, b2)))
                    .collect();
                let consistent = p2.points.iter().zip(&p3.points).zip(&limit).all(
                    |(((t2, b2), (t3, b3)), (t0, b0))| &two * t3 == t2 + t0 && &two * b3 == b2 + b0,
                );
                if consistent && limit.iter().all(|(_, b)| !b.is_negative()) {
                    let body = BodyProfile { points: limit }.polytope();
                    if body == direct {
                        return Ok(body);
                    }
                }
            }
            eps /= &two;
        }
        Err(Error::ChamberCrossing)
    }

    /// `(ν_BDPP, κ_vol)`: the first from the Zariski positive part, the second
    /// from the lowest-order term of the polynomial `ε ↦ vol(D + εA)`.
    pub fn numerical_dims(&self, d: &[Q], a: &[Q]) -> Result<(usize, usize)> {
        self.check_class(d)?;
        self.check_class(a)?;
        if !self.is_psef(d) {
            return Err(Error::NotPseudoEffective);
        }
        if !self.is_ample(a) {
            return Err(Error::NotAmple);
        }
        let z = self.zariski_decompose(d)?;
        let nu = if self.intersect(&z.positive, &z.positive).is_positive() {
            2
        } else if z.positive.iter().any(|x| !x.is_zero()) {
            1
        } else {
            0
        };
        let kvol = volume_growth(2, |e| {
            self.volume(&d.iter().zip(a).map(|(x, y)| x + e * y).collect::<Vec<_>>())
        })?;
        if kvol != nu {
            return Err(Error::InvalidModel(format!(
                "numerical dimensions disagree: ν = {nu}, κ_vol = {kvol}"
            )));
        }
        Ok((nu, kvol))
    }

    /// A small ample class: the first combination of nef generators with
    /// coefficients in `1..=3` that is ample.
    pub fn default_ample(&self) -> Result<Vec<Q>> {
        let k = self.nef_generators.len();
        let mut found = None;
        let mut coeffs = vec![1i64; k];
        'search: loop {
            let cand: Vec<Q> = (0..self.rank)
                .map(|j| {
                    self.nef_generators
                        .iter()
                        .zip(&coeffs)
                        .map(|(g, &c)| &g[j] * q(c))
                        .sum()
                })
                .collect();
            if self.is_ample(&cand) {
                found = Some(cand);
                break;
            }
            for i in 0..k {
                if coeffs[i] < 3 {
                    coeffs[i] += 1;
                    coeffs[..i].iter_mut().for_each(|c| *c = 1);
                    continue 'search;
                }
            }
            break;
        }
        found.ok_or(Error::NotAmple)
    }

    pub fn iitaka_degree_on(&self, curve: usize) -> Option<u32> {
        self.abundance
            .as_ref()?
            .iitaka_degree_on
            .get(&curve.to_string())
            .copied()
    }

    /// `Δ^lim / α` for a positive multiple of `K` whose Iitaka map has degree
    /// `α` on the flag curve.
    pub fn valuative_body_abundant(&self, d: &[Q], curve: usize, a: &[Q]) -> Result<Polytope> {
        let alpha = self
            .iitaka_degree_on(curve)
            .ok_or(Error::ValuativeUndeterminable)?;
        if !positive_multiple(d, &self.canonical_class) {
            return Err(Error::ValuativeUndeterminable);
        }
        self.limiting_body(d, curve, a, None)?
            .scale(&Q::new(1.into(), alpha.into()))
    }
}

/// `true` when `d = c·k` for some rational `c > 0`.
pub(crate) fn positive_multiple(d: &[Q], k: &[Q]) -> bool {
    let Some(j) = k.iter().position(|x| !x.is_zero()) else {
        return false;
    };
    let c = &d[j] / &k[j];
    c.is_positive() && d.iter().zip(k).all(|(x, y)| *x == &c * y)
}

pub(crate) fn class_key(d: &[Q]) -> String {
    d.iter().map(format_q).collect::<Vec<_>>().join(",")
}

/// `n − (lowest nonzero degree)` of the polynomial `ε ↦ vol(ε)`, fitted
/// exactly through `n + 1` points and confirmed at one more, halving the
/// sample scale on disagreement.
pub(crate) fn volume_growth(n: usize, mut vol: impl FnMut(&Q) -> Result<Q>) -> Result<usize> {
    let mut scale = Q::new(1.into(), 8.into());
    for _ in 0..=MAX_RETRIES {
        let xs: Vec<Q> = (0..=n)
            .map(|i| &scale / Q::from_integer(num_bigint::BigInt::from(1u64 << i)))
            .collect();
        let ys = xs.iter().map(&mut vol).collect::<Result<Vec<_>>>()?;
        let coeffs = linalg::interpolate(&xs, &ys);
        let check = &xs[n] / q(2);
        if linalg::eval_poly(&coeffs, &check) == vol(&check)? {
            return Ok(match coeffs.iter().position(|c| !c.is_zero()) {
                Some(k) => n - k,
                None => 0,
            });
        }
        scale /= q(2);
    }
    Err(Error::ChamberCrossing)
}

/// Surfaces used by the fixtures and tests.
pub mod models {
    use std::collections::BTreeMap;

    use super::{Abundance, SurfaceLattice};
    use crate::rational::{q, Q};

    fn v(xs: &[i64]) -> Vec<Q> {
        xs.iter().map(|&x| q(x)).collect()
    }

    /// ℙ² blown up at a point, basis `(H, E)`.
    pub fn blown_up_plane() -> SurfaceLattice {
        SurfaceLattice::new(
            2,
            vec![vec![1, 0], vec![0, -1]],
            vec![v(&[0, 1]), v(&[1, -1])],
            vec![v(&[1, 0]), v(&[1, -1])],
            vec![0],
            v(&[-3, 1]),
            None,
            BTreeMap::new(),
        )
        .unwrap()
    }

    /// ℙ² blown up at two points, basis `(H, E₁, E₂)`; negative curves
    /// `E₁, E₂` and the line through both points.
    pub fn blown_up_plane_twice() -> SurfaceLattice {
        SurfaceLattice::new(
            3,
            vec![vec![1, 0, 0], vec![0, -1, 0], vec![0, 0, -1]],
            vec![v(&[0, 1, 0]), v(&[0, 0, 1]), v(&[1, -1, -1])],
            vec![v(&[1, 0, 0]), v(&[1, -1, 0]), v(&[1, 0, -1])],
            vec![0, 1, 2],
            v(&[-3, 1, 1]),
            None,
            BTreeMap::new(),
        )
        .unwrap()
    }

    /// `C × C'` for curves of genus `g₁, g₂`, basis `(f₁, f₂)` of fibres of
    /// the two projections (`f₁` is the fibre over a point of the first
    /// factor).
    pub fn curve_product(
        g1: i64,
        g2: i64,
        kappa: Option<i64>,
        alpha: Option<u32>,
    ) -> SurfaceLattice {
        let k = v(&[2 * g1 - 2, 2 * g2 - 2]);
        let mut declared = BTreeMap::new();
        if let Some(kp) = kappa {
            declared.insert(super::class_key(&k), kp);
        }
        let abundance = alpha.map(|a| Abundance {
            iitaka_degree_on: BTreeMap::from([("0".to_string(), a)]),
        });
        SurfaceLattice::new(
            2,
            vec![vec![0, 1], vec![1, 0]],
            vec![v(&[1, 0]), v(&[0, 1])],
            vec![v(&[1, 0]), v(&[0, 1])],
            vec![],
            k,
            abundance,
            declared,
        )
        .unwrap()
    }

    /// Minimal surface of general type with `K² = 4` fibred over an elliptic
    /// curve with genus-2 fibres; basis `(F, H)` with `K = F + H`.
    pub fn general_type_over_elliptic() -> SurfaceLattice {
        SurfaceLattice::new(
            2,
            vec![vec![0, 2], vec![2, 0]],
            vec![v(&[1, 0]), v(&[0, 1])],
            vec![v(&[1, 0]), v(&[0, 1])],
            vec![],
            v(&[1, 1]),
            Some(Abundance {
                iitaka_degree_on: BTreeMap::from([("0".to_string(), 1)]),
            }),
            BTreeMap::from([("1,1".to_string(), 2)]),
        )
        .unwrap()
    }

    /// Surface with `κ = 1`, `K` nef, `K² = 0`, `K·F = 2` over an elliptic
    /// curve; basis `(F, E)` with `K = E` and the Iitaka map of degree 2 on
    /// the fibre `F`.
    pub fn kodaira_one_over_elliptic() -> SurfaceLattice {
        SurfaceLattice::new(
            2,
            vec![vec![0, 2], vec![2, 0]],
            vec![v(&[1, 0]), v(&[0, 1])],
            vec![v(&[1, 0]), v(&[0, 1])],
            vec![],
            v(&[0, 1]),
            Some(Abundance {
                iitaka_degree_on: BTreeMap::from([("0".to_string(), 2)]),
            }),
            BTreeMap::from([("0,1".to_string(), 1)]),
        )
        .unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::models::*;
    use super::*;
    use crate::rational::qr;
    use proptest::prelude::*;

    fn v(xs: &[i64]) -> Vec<Q> {
        xs.iter().map(|&x| q(x)).collect()
    }

    fn ipts(p: &[&[i64]]) -> Polytope {
        Polytope::hull(&p.iter().map(|x| QVec::from_ints(x)).collect::<Vec<_>>()).unwrap()
    }

    /// Valuations `(mult_p, order at a general point of E)` of the basis
    /// `x^i w^j z^k` of degree-`deg` plane forms, with `w = y − x` so that the
    /// general point is `w = 0` on `E`; `shift` adds a fixed multiple of `E`.
    fn plane_blowup_oracle(deg: i64, shift: i64, m: i64) -> Polytope {
        let mut vals = Vec::new();
        for i in 0..=deg * m {
            for j in 0..=deg * m - i {
                vals.push(QVec(vec![qr(i + j + shift * m, m), qr(j, m)]));
            }
        }
        Polytope::hull(&vals).unwrap()
    }

    #[test]
    fn validation() {
        let e = BTreeMap::new();
        // signature (2, 0)
        assert!(SurfaceLattice::new(
            2,
            vec![vec![1, 0], vec![0, 1]],
            vec![v(&[1, 0])],
            vec![v(&[1, 0])],
            vec![],
            v(&[0, 0]),
            None,
            e.clone()
        )
        .is_err());
        // nef generator pairing negatively with an effective one
        assert!(SurfaceLattice::new(
            2,
            vec![vec![1, 0], vec![0, -1]],
            vec![v(&[0, 1])],
            vec![v(&[0, 1])],
            vec![],
            v(&[0, 0]),
            None,
            e.clone()
        )
        .is_err());
        // declared negative curve of square 0
        assert!(SurfaceLattice::new(
            2,
            vec![vec![0, 1], vec![1, 0]],
            vec![v(&[1, 0])],
            vec![v(&[1, 0])],
            vec![0],
            v(&[0, 0]),
            None,
            e
        )
        .is_err());
    }

    #[test]
    fn intersections() {
        let s = blown_up_plane();
        assert_eq!(s.intersect(&v(&[1, 0]), &v(&[1, 0])), q(1));
        assert_eq!(s.intersect(&v(&[1, 0]), &v(&[0, 1])), q(0));
        let g = curve_product(2, 2, None, None);
        assert_eq!(g.intersect(&v(&[2, 2]), &v(&[2, 2])), q(8));
        assert!(s.try_intersect(&v(&[1]), &v(&[1, 0])).is_err());
    }

    #[test]
    fn cone_test_examples() {
        let s = blown_up_plane();
        assert_eq!(
            s.cone_tests(&v(&[1, -1])).unwrap(),
            ConeTests {
                is_psef: true,
                is_nef: true,
                is_big: false,
                is_ample: false
            }
        );
        assert_eq!(
            s.cone_tests(&v(&[2, 1])).unwrap(),
            ConeTests {
                is_psef: true,
                is_nef: false,
                is_big: true,
                is_ample: false
            }
        );
        assert!(!s.cone_tests(&v(&[-1, 0])).unwrap().is_psef);
        assert!(s.cone_tests(&v(&[2, -1])).unwrap().is_ample);
    }

    #[test]
    fn zariski_examples() {
        let s = blown_up_plane();
        let z = s.zariski_decompose(&v(&[1, 0])).unwrap();
        assert_eq!((z.positive, z.negative), (v(&[1, 0]), v(&[0, 0])));
        let z = s.zariski_decompose(&v(&[2, 1])).unwrap();
        assert_eq!(
            (z.positive.clone(), z.negative.clone(), z.support.clone()),
            (v(&[2, 0]), v(&[0, 1]), vec![0])
        );
        let z = s.zariski_decompose(&v(&[0, 1])).unwrap();
        assert_eq!((z.positive, z.negative), (v(&[0, 0]), v(&[0, 1])));
        assert_eq!(
            s.zariski_decompose(&v(&[-1, 0])),
            Err(Error::NotPseudoEffective)
        );
    }

    #[test]
    fn zariski_needs_declared_curves() {
        // drop the negative curve: 2H + E cannot be decomposed
        let s = blown_up_plane().with_negative_curve_order(vec![]);
        assert_eq!(
            s.zariski_decompose(&v(&[2, 1])),
            Err(Error::ConeDataIncomplete)
        );
    }

    #[test]
    fn zariski_on_two_point_blowup() {
        let s = blown_up_plane_twice();
        // E₁ and E₂ are fixed components of H + 2E₁ + E₂
        let d = v(&[1, 2, 1]);
        let z = s.zariski_decompose(&d).unwrap();
        assert_eq!(z.positive, v(&[1, 0, 0]));
        assert_eq!(z.negative, v(&[0, 2, 1]));
        // 3H − 2E₁ − 2E₂ has the line L with L·D = −1 in its negative part
        let d = v(&[3, -2, -2]);
        let z = s.zariski_decompose(&d).unwrap();
        assert_eq!(z.support, vec![2]);
        assert_eq!(z.positive, v(&[2, -1, -1]));
        for order in [vec![2, 1, 0], vec![1, 0, 2], vec![0, 2, 1]] {
            let t = s.with_negative_curve_order(order);
            for d in [
                v(&[1, 2, 1]),
                v(&[3, -2, -2]),
                v(&[2, 1, -1]),
                v(&[1, 1, 1]),
            ] {
                assert_eq!(
                    t.zariski_decompose(&d).unwrap(),
                    s.zariski_decompose(&d).unwrap()
                );
            }
        }
    }

    #[test]
    fn volumes() {
        let s = blown_up_plane();
        assert_eq!(s.volume(&v(&[2, 1])).unwrap(), q(4));
        assert_eq!(s.volume(&v(&[0, 1])).unwrap(), q(0));
        assert_eq!(s.volume(&v(&[-1, 0])).unwrap(), q(0));
        assert_eq!(
            curve_product(2, 2, None, None).volume(&v(&[2, 2])).unwrap(),
            q(8)
        );
    }

    #[test]
    fn body_examples() {
        let s = blown_up_plane();
        assert_eq!(
            s.okounkov_body(&v(&[1, 0]), 0).unwrap(),
            ipts(&[&[0, 0], &[1, 0], &[1, 1]])
        );
        assert_eq!(s.okounkov_body(&v(&[0, 1]), 0).unwrap(), ipts(&[&[1, 0]]));
        let g = curve_product(2, 2, None, None);
        assert_eq!(
            g.okounkov_body(&v(&[2, 2]), 0).unwrap(),
            ipts(&[&[0, 0], &[2, 0], &[0, 2], &[2, 2]])
        );
        assert_eq!(
            general_type_over_elliptic()
                .okounkov_body(&v(&[1, 1]), 0)
                .unwrap(),
            ipts(&[&[0, 0], &[1, 0], &[0, 2], &[1, 2]])
        );
        assert_eq!(
            kodaira_one_over_elliptic()
                .okounkov_body(&v(&[0, 1]), 0)
                .unwrap(),
            ipts(&[&[0, 0], &[0, 2]])
        );
    }

    #[test]
    fn bodies_match_monomial_oracle() {
        let s = blown_up_plane();
        for m in 1..=8 {
            assert_eq!(
                plane_blowup_oracle(1, 0, m),
                s.okounkov_body(&v(&[1, 0]), 0).unwrap()
            );
            assert_eq!(
                plane_blowup_oracle(2, 1, m),
                s.okounkov_body(&v(&[2, 1]), 0).unwrap()
            );
            assert_eq!(
                plane_blowup_oracle(3, 0, m),
                s.okounkov_body(&v(&[3, 0]), 0).unwrap()
            );
        }
    }

    #[test]
    fn body_with_chamber_break() {
        // flag along the line L on the two-point blowup: D − tL crosses into
        // the chambers where E₁ and E₂ enter the negative part
        let s = blown_up_plane_twice();
        let d = v(&[3, -1, -1]);
        let p = s.body_profile(&d, 2).unwrap();
        assert!(p.points.len() >= 3);
        let body = p.polytope();
        assert_eq!(body.volume_in_dim(2).unwrap() * q(2), s.volume(&d).unwrap());
    }

    #[test]
    fn limiting_bodies() {
        let s = blown_up_plane();
        let a = v(&[2, -1]);
        for d in [v(&[1, 0]), v(&[2, 1]), v(&[3, -1])] {
            assert_eq!(
                s.limiting_body(&d, 0, &a, None).unwrap(),
                s.okounkov_body(&d, 0).unwrap()
            );
        }
        assert_eq!(
            s.limiting_body(&v(&[0, 1]), 0, &a, None).unwrap(),
            ipts(&[&[1, 0]])
        );
        let x = general_type_over_elliptic();
        let body = x
            .limiting_body(&v(&[1, 1]), 0, &x.default_ample().unwrap(), None)
            .unwrap();
        assert_eq!(body, ipts(&[&[0, 0], &[1, 0], &[0, 2], &[1, 2]]));
        assert_eq!(
            s.limiting_body(&v(&[1, 0]), 0, &v(&[1, 0]), None),
            Err(Error::NotAmple)
        );
    }

    #[test]
    fn numerical_dimensions() {
        let s = blown_up_plane();
        let a = v(&[2, -1]);
        assert_eq!(s.numerical_dims(&v(&[1, 0]), &a).unwrap(), (2, 2));
        assert_eq!(s.numerical_dims(&v(&[1, -1]), &a).unwrap(), (1, 1));
        assert_eq!(s.numerical_dims(&v(&[0, 1]), &a).unwrap(), (0, 0));
        let g = curve_product(2, 2, None, None);
        assert_eq!(g.numerical_dims(&v(&[1, 0]), &v(&[1, 1])).unwrap(), (1, 1));
        assert_eq!(g.numerical_dims(&v(&[0, 0]), &v(&[1, 1])).unwrap(), (0, 0));
        assert_eq!(
            s.numerical_dims(&v(&[-1, 0]), &a),
            Err(Error::NotPseudoEffective)
        );
    }

    #[test]
    fn valuative_bodies_under_abundance() {
        let x = kodaira_one_over_elliptic();
        let a = x.default_ample().unwrap();
        assert_eq!(
            x.limiting_body(&v(&[0, 1]), 0, &a, None).unwrap(),
            ipts(&[&[0, 0], &[0, 2]])
        );
        assert_eq!(
            x.valuative_body_abundant(&v(&[0, 1]), 0, &a).unwrap(),
            ipts(&[&[0, 0], &[0, 1]])
        );
        let g = curve_product(2, 2, Some(2), Some(1));
        let body = g
            .valuative_body_abundant(&v(&[2, 2]), 0, &v(&[1, 1]))
            .unwrap();
        assert_eq!(body, ipts(&[&[0, 0], &[2, 0], &[0, 2], &[2, 2]]));
        assert_eq!(
            blown_up_plane().valuative_body_abundant(&v(&[1, 0]), 0, &v(&[2, -1])),
            Err(Error::ValuativeUndeterminable)
        );
        assert_eq!(
            x.valuative_body_abundant(&v(&[1, 0]), 0, &a),
            Err(Error::ValuativeUndeterminable)
        );
    }

    #[test]
    fn json_round_trip() {
        for s in [
            blown_up_plane(),
            blown_up_plane_twice(),
            kodaira_one_over_elliptic(),
            curve_product(2, 2, Some(2), Some(1)),
        ] {
            let js = serde_json::to_string(&s).unwrap();
            let back: SurfaceLattice = serde_json::from_str(&js).unwrap();
            assert_eq!(back, s);
        }
        let bad = r#"{"rank":2,"gram":[[1,0],[0,1]],"effective_generators":[[1,0]],"nef_generators":[[1,0]],"negative_curves":[],"canonical_class":[0,0]}"#;
        assert!(serde_json::from_str::<SurfaceLattice>(bad).is_err());
    }

    fn big_classes() -> impl Strategy<Value = Vec<Q>> {
        (1i64..6, -3i64..4, -3i64..4).prop_map(|(h, e1, e2)| v(&[h, e1, e2]))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn zariski_invariants(d in big_classes()) {
            let s = blown_up_plane_twice();
            prop_assume!(s.is_psef(&d));
            let z = s.zariski_decompose(&d).unwrap();
            prop_assert!(s.is_nef(&z.positive));
            prop_assert_eq!(s.intersect(&z.positive, &z.negative), q(0));
            for &c in &z.support {
                prop_assert_eq!(s.intersect(&z.positive, &s.effective_generators()[c]), q(0));
            }
            prop_assert!(s.is_psef(&z.negative));
        }

        #[test]
        fn body_volume_identity(d in big_classes(), curve in 0usize..3) {
            let s = blown_up_plane_twice();
            prop_assume!(s.is_big(&d).unwrap());
            let body = s.okounkov_body(&d, curve).unwrap();
            prop_assert_eq!(body.volume_in_dim(2).unwrap() * q(2), s.volume(&d).unwrap());
            let bigger: Vec<Q> = d.iter().zip(v(&[2, -1, -1])).map(|(x, y)| x + qr(1, 4) * y).collect();
            prop_assert!(s.okounkov_body(&bigger, curve).unwrap().contains(&body).contained);
        }
    }

    #[test]
    fn rational_bodies_scale() {
        let s = blown_up_plane();
        let d = v(&[2, 1]);
        let half: Vec<Q> = d.iter().map(|x| x * qr(1, 2)).collect();
        assert_eq!(
            s.okounkov_body(&half, 0).unwrap(),
            s.okounkov_body(&d, 0).unwrap().scale(&qr(1, 2)).unwrap()
        );
    }
}
