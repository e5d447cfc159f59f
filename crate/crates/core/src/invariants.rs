//! Bodies, volumes and Iitaka-type dimensions, independent of the backend.
//!
//! Strata are addressed through a flag: `X_k` is the codimension-`k` member
//! of the flag, so `k = 0` is the variety itself.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize, Serializer};

use crate::curve::CurveModel;
use crate::error::{Error, Result};
use crate::linalg;
use crate::polytope::Polytope;
use crate::rational::{q, serde_qs, Q};
use crate::surface::{ConeTests, SurfaceLattice};
use crate::toric::{factorial, ToricDivisor, ToricFlag, ToricVariety};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum VarietyModel {
    Toric(ToricVariety),
    Surface(SurfaceLattice),
    Curve(CurveModel),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfaceFlag {
    pub curve: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveFlag {
    pub point: String,
}

impl Default for CurveFlag {
    fn default() -> Self {
        CurveFlag {
            point: "general".into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Flag {
    Toric(ToricFlag),
    Surface(SurfaceFlag),
    Curve(CurveFlag),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Divisor {
    #[serde(with = "serde_qs")]
    pub coeffs: Vec<Q>,
}

impl Divisor {
    pub fn new(coeffs: Vec<Q>) -> Self {
        Divisor { coeffs }
    }
}

/// An integer invariant that may be left undeclared by the model.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Declared {
    Value(i64),
    Undeclared,
}

impl Serialize for Declared {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Declared::Value(v) => s.serialize_i64(*v),
            Declared::Undeclared => s.serialize_str("undeclared"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DimsReport {
    pub dim: usize,
    pub kappa: Declared,
    pub nu_bdpp: usize,
    pub kappa_vol: usize,
    pub kappa_sigma: Declared,
}

impl DimsReport {
    /// `κ ≤ ν_BDPP ≤ κ_vol ≤ dim`, skipping undeclared entries.
    pub fn chain_holds(&self) -> bool {
        let k_ok = match self.kappa {
            Declared::Value(k) => k <= self.nu_bdpp as i64,
            Declared::Undeclared => true,
        };
        k_ok && self.nu_bdpp <= self.kappa_vol && self.kappa_vol <= self.dim
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NakayamaVerdict {
    Certified,
    False,
}

fn toric_div(d: &[Q]) -> ToricDivisor {
    ToricDivisor::new(d.to_vec())
}

impl VarietyModel {
    pub fn kind(&self) -> &'static str {
        match self {
            VarietyModel::Toric(_) => "toric",
            VarietyModel::Surface(_) => "surface",
            VarietyModel::Curve(_) => "curve",
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            VarietyModel::Toric(x) => x.dim(),
            VarietyModel::Surface(_) => 2,
            VarietyModel::Curve(_) => 1,
        }
    }

    /// Length of a divisor coefficient vector.
    pub fn class_len(&self) -> usize {
        match self {
            VarietyModel::Toric(x) => x.num_rays(),
            VarietyModel::Surface(s) => s.rank(),
            VarietyModel::Curve(_) => 1,
        }
    }

    pub fn check_divisor(&self, d: &[Q]) -> Result<()> {
        if d.len() != self.class_len() {
            return Err(Error::DimensionMismatch {
                expected: self.class_len(),
                found: d.len(),
            });
        }
        Ok(())
    }

    pub fn check_flag(&self, flag: &Flag) -> Result<()> {
        match (self, flag) {
            (VarietyModel::Toric(x), Flag::Toric(f)) => x.check_flag(f),
            (VarietyModel::Surface(s), Flag::Surface(f)) => s.check_curve(f.curve),
            (VarietyModel::Curve(_), Flag::Curve(f)) if f.point == "general" => Ok(()),
            _ => Err(Error::InvalidFlag(format!(
                "flag does not fit a {} model",
                self.kind()
            ))),
        }
    }

    /// A default flag: the first maximal cone in its listed order, the first
    /// effective generator, or a general point.
    pub fn default_flag(&self) -> Flag {
        match self {
            VarietyModel::Toric(x) => Flag::Toric(ToricFlag {
                cone: 0,
                ray_order: x.max_cones()[0].clone(),
            }),
            VarietyModel::Surface(_) => Flag::Surface(SurfaceFlag { curve: 0 }),
            VarietyModel::Curve(_) => Flag::Curve(CurveFlag::default()),
        }
    }

    pub fn canonical_class(&self) -> Vec<Q> {
        match self {
            VarietyModel::Toric(x) => x.canonical_divisor().coeffs,
            VarietyModel::Surface(s) => s.canonical_class().to_vec(),
            VarietyModel::Curve(c) => c.canonical_class(),
        }
    }

    /// A small ample class; on toric models the first ample vector with
    /// coefficients in `0..=3`, ordered by total weight.
    pub fn default_ample(&self) -> Result<Vec<Q>> {
        match self {
            VarietyModel::Toric(x) => {
                let r = x.num_rays();
                for total in 1..=3 * r {
                    let mut found = None;
                    compositions(r, total, 3, &mut |c| {
                        if found.is_none() {
                            let d = ToricDivisor::new(c.iter().map(|&v| q(v)).collect());
                            if x.is_ample(&d).unwrap_or(false) {
                                found = Some(d.coeffs);
                            }
                        }
                    });
                    if let Some(d) = found {
                        return Ok(d);
                    }
                }
                Err(Error::NotAmple)
            }
            VarietyModel::Surface(s) => s.default_ample(),
            VarietyModel::Curve(_) => Ok(vec![Q::one()]),
        }
    }

    pub fn cone_tests(&self, d: &[Q]) -> Result<ConeTests> {
        self.check_divisor(d)?;
        match self {
            VarietyModel::Toric(x) => {
                let t = toric_div(d);
                Ok(ConeTests {
                    is_psef: x.is_psef(&t)?,
                    is_nef: x.is_nef(&t)?,
                    is_big: x.is_big(&t)?,
                    is_ample: x.is_ample(&t)?,
                })
            }
            VarietyModel::Surface(s) => s.cone_tests(d),
            VarietyModel::Curve(_) => {
                let sign = d[0].signum();
                let pos = sign.is_positive();
                Ok(ConeTests {
                    is_psef: !sign.is_negative(),
                    is_nef: !sign.is_negative(),
                    is_big: pos,
                    is_ample: pos,
                })
            }
        }
    }

    /// `a ≡ b`: linear equivalence on toric models, numerical equality of
    /// classes otherwise.
    pub fn equivalent(&self, a: &[Q], b: &[Q]) -> Result<bool> {
        self.check_divisor(a)?;
        self.check_divisor(b)?;
        match self {
            VarietyModel::Toric(x) => x.linearly_equivalent(&toric_div(a), &toric_div(b)),
            _ => Ok(a == b),
        }
    }

    fn require_psef(&self, d: &[Q]) -> Result<()> {
        if !self.cone_tests(d)?.is_psef {
            return Err(Error::NotPseudoEffective);
        }
        Ok(())
    }

    /// Valuative body.
    pub fn body_val(&self, d: &[Q], flag: &Flag) -> Result<Polytope> {
        self.check_divisor(d)?;
        self.check_flag(flag)?;
        match (self, flag) {
            (VarietyModel::Toric(x), Flag::Toric(f)) => x.okounkov_body(&toric_div(d), f),
            (VarietyModel::Surface(s), Flag::Surface(f)) => {
                if d.iter().all(Zero::is_zero) {
                    Ok(Polytope::point(crate::rational::QVec::zeros(2)))
                } else if s.is_big(d)? {
                    s.okounkov_body(d, f.curve)
                } else if !s.is_psef(d) {
                    Err(Error::NoSections)
                } else {
                    s.valuative_body_abundant(d, f.curve, &s.default_ample()?)
                }
            }
            (VarietyModel::Curve(c), _) => c.okounkov_body(d),
            _ => unreachable!("flag checked"),
        }
    }

    /// Limiting body `⋂_{ε>0} Δ(D + εA)`. On toric models it coincides with
    /// the valuative body of a pseudoeffective class.
    pub fn body_lim(&self, d: &[Q], flag: &Flag, a: &[Q], epsilon: Option<Q>) -> Result<Polytope> {
        self.check_divisor(d)?;
        self.check_divisor(a)?;
        self.check_flag(flag)?;
        if !self.cone_tests(a)?.is_ample {
            return Err(Error::NotAmple);
        }
        self.require_psef(d)?;
        match (self, flag) {
            (VarietyModel::Toric(_), _) | (VarietyModel::Curve(_), _) => self.body_val(d, flag),
            (VarietyModel::Surface(s), Flag::Surface(f)) => s.limiting_body(d, f.curve, a, epsilon),
            _ => unreachable!("flag checked"),
        }
    }

    pub fn volume(&self, d: &[Q]) -> Result<Q> {
        self.check_divisor(d)?;
        match self {
            VarietyModel::Toric(x) => x.volume(&toric_div(d)),
            VarietyModel::Surface(s) => s.volume(d),
            VarietyModel::Curve(c) => c.volume(d),
        }
    }

    fn stratum_dim(&self, k: usize) -> Result<usize> {
        self.dim()
            .checked_sub(k)
            .ok_or_else(|| Error::InvalidFlag(format!("flag has no member of codimension {k}")))
    }

    /// `vol⁺_{X|X_k}(D)` as `v!·vol_v` of the slice `x₁ = ⋯ = x_k = 0` of the
    /// limiting body. Toric models also take the limit of
    /// `vol_{X|X_k}(D + εA)` directly and require agreement.
    pub fn restricted_volume_plus(&self, d: &[Q], flag: &Flag, k: usize, a: &[Q]) -> Result<Q> {
        let v = self.stratum_dim(k)?;
        let body = self.body_lim(d, flag, a, None)?;
        let via_body = body.slice_prefix_zero(k)?.volume_in_dim(v)? * factorial(v);
        if let (VarietyModel::Toric(x), Flag::Toric(f)) = (self, flag) {
            let stratum = &f.ray_order[..k];
            let direct = epsilon_limit(v, |e| {
                let shifted: Vec<Q> = d.iter().zip(a).map(|(p, r)| p + e * r).collect();
                x.restricted_volume(&toric_div(&shifted), stratum)
            })?;
            if direct != via_body {
                return Err(Error::InvalidModel(format!(
                    "restricted volume routes disagree: {via_body} from the body, {direct} from the ε-limit"
                )));
            }
        }
        Ok(via_body)
    }

    pub fn dims(&self, d: &[Q], a: &[Q]) -> Result<DimsReport> {
        self.check_divisor(d)?;
        self.check_divisor(a)?;
        self.require_psef(d)?;
        if !self.cone_tests(a)?.is_ample {
            return Err(Error::NotAmple);
        }
        let dim = self.dim();
        match self {
            VarietyModel::Toric(x) => {
                let kappa = x.section_polytope(&toric_div(d))?.dim().expect("psef") as i64;
                let nu = self
                    .body_lim(d, &self.default_flag(), a, None)?
                    .dim()
                    .expect("nonempty");
                let kvol = crate::surface::volume_growth(dim, |e| {
                    let shifted: Vec<Q> = d.iter().zip(a).map(|(p, r)| p + e * r).collect();
                    x.volume(&toric_div(&shifted))
                })?;
                Ok(DimsReport {
                    dim,
                    kappa: Declared::Value(kappa),
                    nu_bdpp: nu,
                    kappa_vol: kvol,
                    kappa_sigma: Declared::Undeclared,
                })
            }
            VarietyModel::Surface(s) => {
                let (nu, kvol) = s.numerical_dims(d, a)?;
                let kappa = s
                    .declared_kappa(d)
                    .map_or(Declared::Undeclared, Declared::Value);
                Ok(DimsReport {
                    dim,
                    kappa,
                    nu_bdpp: nu,
                    kappa_vol: kvol,
                    kappa_sigma: Declared::Undeclared,
                })
            }
            VarietyModel::Curve(c) => {
                let k = c.kappa(d)?.expect("psef");
                Ok(DimsReport {
                    dim,
                    kappa: Declared::Value(k as i64),
                    nu_bdpp: k,
                    kappa_vol: k,
                    kappa_sigma: Declared::Value(k as i64),
                })
            }
        }
    }

    /// `dim Δ^val`, or `None` (κ = −∞) without sections.
    pub fn kappa_via_body(&self, d: &[Q], flag: &Flag) -> Result<Option<usize>> {
        match self.body_val(d, flag) {
            Ok(b) => Ok(b.dim()),
            Err(Error::NoSections) => Ok(None),
            Err(e) => Err(e),
        }
    }

    pub fn nu_via_body(&self, d: &[Q], flag: &Flag, a: &[Q]) -> Result<usize> {
        Ok(self
            .body_lim(d, flag, a, None)?
            .dim()
            .expect("limiting body of a psef class is nonempty"))
    }

    /// Whether `X_k` is a Nakayama subvariety of `D`: restriction of sections
    /// is injective at every level and `dim X_k = κ(D)`.
    pub fn is_nakayama(&self, d: &[Q], flag: &Flag, k: usize) -> Result<NakayamaVerdict> {
        let v = self.stratum_dim(k)?;
        self.check_divisor(d)?;
        self.check_flag(flag)?;
        let verdict = |ok: bool| {
            if ok {
                NakayamaVerdict::Certified
            } else {
                NakayamaVerdict::False
            }
        };
        match (self, flag) {
            (VarietyModel::Toric(x), Flag::Toric(f)) => {
                let p = x.section_polytope(&toric_div(d))?;
                if p.is_empty() {
                    return Ok(NakayamaVerdict::False);
                }
                // sections are injective on X_k exactly when no monomial
                // vanishes on it, i.e. P_D lies on the face cut out by X_k
                let on_face = f.ray_order[..k].iter().all(|&j| {
                    let ray: Vec<Q> = x.rays()[j].iter().map(|&r| q(r)).collect();
                    p.vertices().iter().all(|u| u.dot(&ray) == -d[j].clone())
                });
                Ok(verdict(on_face && p.dim() == Some(v)))
            }
            (VarietyModel::Curve(c), _) => {
                let kappa = c.kappa(d)?;
                Ok(verdict(kappa == Some(v)))
            }
            (VarietyModel::Surface(s), _) => {
                if k == 0 {
                    return Ok(verdict(s.is_big(d)?));
                }
                match s.declared_kappa(d) {
                    Some(kp) if kp != v as i64 => Ok(NakayamaVerdict::False),
                    _ => Err(Error::Unsupported(
                        "restriction injectivity on a curve of an abstract surface".into(),
                    )),
                }
            }
            _ => unreachable!("flag checked"),
        }
    }

    /// Codimension of the flag member of dimension `κ(D)`, with a note on how
    /// the Nakayama property was established; `None` when it fails.
    pub fn nakayama_member(&self, d: &[Q], flag: &Flag) -> Result<Option<(usize, &'static str)>> {
        self.check_divisor(d)?;
        self.check_flag(flag)?;
        let kappa = match self {
            VarietyModel::Toric(x) => x.section_polytope(&toric_div(d))?.dim(),
            VarietyModel::Curve(c) => c.kappa(d)?,
            VarietyModel::Surface(s) => {
                if d.iter().all(Zero::is_zero) {
                    return Ok(Some((2, "zero divisor: the flag point")));
                }
                if s.is_big(d)? {
                    return Ok(Some((0, "big divisor: the surface itself")));
                }
                let Flag::Surface(f) = flag else {
                    unreachable!("flag checked")
                };
                let declared = s.declared_kappa(d).or_else(|| {
                    crate::surface::positive_multiple(d, s.canonical_class())
                        .then(|| s.declared_kappa(s.canonical_class()))
                        .flatten()
                });
                return Ok(match (declared, s.iitaka_degree_on(f.curve)) {
                    (Some(1), Some(_)) => {
                        Some((1, "declared: Iitaka map finite on the flag curve"))
                    }
                    _ => None,
                });
            }
        };
        let Some(kappa) = kappa else {
            return Ok(None);
        };
        let k = self.dim() - kappa;
        Ok(
            (self.is_nakayama(d, flag, k)? == NakayamaVerdict::Certified)
                .then_some((k, "certified")),
        )
    }

    /// `dim X_k = ν_BDPP(D)` and `vol⁺_{X|X_k}(D) > 0`.
    pub fn is_positive_volume_subvariety(
        &self,
        d: &[Q],
        flag: &Flag,
        k: usize,
        a: &[Q],
    ) -> Result<bool> {
        let v = self.stratum_dim(k)?;
        let dims = self.dims(d, a)?;
        if dims.nu_bdpp != v {
            return Ok(false);
        }
        Ok(self.restricted_volume_plus(d, flag, k, a)?.is_positive())
    }

    /// Codimension of the flag member of dimension `ν_BDPP(D)`, if it is a
    /// positive volume subvariety.
    pub fn positive_volume_member(&self, d: &[Q], flag: &Flag, a: &[Q]) -> Result<Option<usize>> {
        let nu = self.dims(d, a)?.nu_bdpp;
        let k = self.dim() - nu;
        Ok(self
            .is_positive_volume_subvariety(d, flag, k, a)?
            .then_some(k))
    }
}

/// Exact value at `0` of a function that is polynomial of degree `≤ deg` on
/// small `ε > 0`.
fn epsilon_limit(deg: usize, mut f: impl FnMut(&Q) -> Result<Q>) -> Result<Q> {
    let mut scale = Q::new(1.into(), 8.into());
    for _ in 0..=10 {
        let xs: Vec<Q> = (0..=deg)
            .map(|i| &scale / Q::from_integer(num_bigint::BigInt::from(1u64 << i)))
            .collect();
        let ys = xs.iter().map(&mut f).collect::<Result<Vec<_>>>()?;
        let coeffs = linalg::interpolate(&xs, &ys);
        let check = &xs[deg] / q(2);
        if linalg::eval_poly(&coeffs, &check) == f(&check)? {
            return Ok(coeffs.first().cloned().unwrap_or_else(Q::zero));
        }
        scale /= q(2);
    }
    Err(Error::ChamberCrossing)
}

/// Calls `f` on every vector of `len` entries in `0..=cap` summing to `total`.
fn compositions(len: usize, total: usize, cap: i64, f: &mut impl FnMut(&[i64])) {
    fn rec(buf: &mut Vec<i64>, len: usize, left: i64, cap: i64, f: &mut impl FnMut(&[i64])) {
        if buf.len() == len - 1 {
            if left <= cap {
                buf.push(left);
                f(buf);
                buf.pop();
            }
            return;
        }
        for x in (0..=left.min(cap)).rev() {
            buf.push(x);
            rec(buf, len, left - x, cap, f);
            buf.pop();
        }
    }
    if len > 0 {
        rec(&mut Vec::with_capacity(len), len, total as i64, cap, f);
    }
}
