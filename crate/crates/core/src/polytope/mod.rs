//! Exact rational convex polytopes.
//!
//! The vertex list is canonical (extreme points only, lexicographically
//! sorted). The half-space description is a cache with primitive integer
//! normals, sorted lexicographically; equalities of lower-dimensional bodies
//! appear as opposite pairs.

mod hull;
mod volume;

use std::collections::BTreeSet;
use std::fmt;
use std::sync::OnceLock;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;
use crate::rational::{dot, format_q, primitive_scale, QVec, Q};

pub(crate) use hull::hull_data;

/// `{x : ⟨normal, x⟩ ≤ offset}`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HalfSpace {
    pub normal: QVec,
    pub offset: Q,
}

impl HalfSpace {
    pub fn new(normal: QVec, offset: Q) -> HalfSpace {
        assert!(!normal.is_zero(), "half-space normal must be nonzero");
        HalfSpace { normal, offset }
    }

    /// Rescales so the normal is a primitive integer vector.
    pub fn normalized(&self) -> HalfSpace {
        let c = primitive_scale(&self.normal.0);
        HalfSpace {
            normal: self.normal.scaled(&c),
            offset: &self.offset * &c,
        }
    }

    /// `⟨normal, x⟩ − offset`; positive means violated.
    pub fn excess(&self, x: &QVec) -> Q {
        self.normal.dot(&x.0) - &self.offset
    }

    pub fn contains(&self, x: &QVec) -> bool {
        !self.excess(x).is_positive()
    }
}

impl fmt::Display for HalfSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}·x ≤ {}", self.normal, format_q(&self.offset))
    }
}

/// Result of a containment test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Containment {
    pub contained: bool,
    /// Largest constraint violation (0 when contained).
    pub margin: Q,
}

/// A bounded convex polytope with rational vertices, possibly empty.
#[derive(Clone)]
pub struct Polytope {
    ambient_dim: usize,
    vertices: Vec<QVec>,
    dim: Option<usize>,
    hrep: OnceLock<Vec<HalfSpace>>,
}

impl PartialEq for Polytope {
    fn eq(&self, other: &Self) -> bool {
        self.ambient_dim == other.ambient_dim && self.vertices == other.vertices
    }
}

impl Eq for Polytope {}

impl fmt::Debug for Polytope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Polytope")
            .field("ambient_dim", &self.ambient_dim)
            .field(
                "vertices",
                &self
                    .vertices
                    .iter()
                    .map(ToString::to_string)
                    .collect::<Vec<_>>(),
            )
            .finish()
    }
}

impl fmt::Display for Polytope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "∅ ⊂ ℚ^{}", self.ambient_dim);
        }
        let vs: Vec<String> = self.vertices.iter().map(ToString::to_string).collect();
        write!(f, "conv{{{}}}", vs.join(", "))
    }
}

fn canonical_hrep(hs: impl IntoIterator<Item = HalfSpace>) -> Vec<HalfSpace> {
    let set: BTreeSet<HalfSpace> = hs.into_iter().map(|h| h.normalized()).collect();
    set.into_iter().collect()
}

fn check_dims(points: &[QVec]) -> Result<usize> {
    let n = points.first().ok_or(Error::EmptyPointSet)?.dim();
    if let Some(p) = points.iter().find(|p| p.dim() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: p.dim(),
        });
    }
    Ok(n)
}

/// Calls `f` on every `k`-subset of `0..n` in lexicographic order.
pub(crate) fn for_each_combination(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx);
        let Some(i) = (0..k).rev().find(|&i| idx[i] != i + n - k) else {
            return;
        };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

impl Polytope {
    /// Convex hull of a nonempty point set.
    pub fn hull(points: &[QVec]) -> Result<Polytope> {
        let n = check_dims(points)?;
        let uniq: Vec<QVec> = points
            .iter()
            .cloned()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let data = hull_data(&uniq);
        let mut vertices: Vec<QVec> = data.vertices.iter().map(|&i| uniq[i].clone()).collect();
        vertices.sort();
        let frame = &data.frame;
        let hs = frame
            .equalities()
            .into_iter()
            .flat_map(|(a, b)| {
                let neg: Vec<Q> = a.iter().map(|x| -x).collect();
                [
                    HalfSpace::new(QVec(a), b.clone()),
                    HalfSpace::new(QVec(neg), -b),
                ]
            })
            .chain(
                data.facets
                    .iter()
                    .map(|(a, b)| HalfSpace::new(QVec(frame.lift_normal(a)), b.clone())),
            );
        let hrep = OnceLock::new();
        let _ = hrep.set(canonical_hrep(hs));
        Ok(Polytope {
            ambient_dim: n,
            vertices,
            dim: Some(frame.dim()),
            hrep,
        })
    }

    pub fn point(p: QVec) -> Polytope {
        Polytope::hull(&[p]).expect("single point")
    }

    pub fn empty(ambient_dim: usize) -> Polytope {
        Polytope {
            ambient_dim,
            vertices: Vec::new(),
            dim: None,
            hrep: OnceLock::new(),
        }
    }

    /// Vertex enumeration of a bounded `{x : ⟨aᵢ, x⟩ ≤ bᵢ}` in ℚⁿ by basic
    /// solutions. An infeasible system yields the empty polytope.
    pub fn from_halfspaces(halfspaces: &[HalfSpace], n: usize) -> Result<Polytope> {
        if let Some(h) = halfspaces.iter().find(|h| h.normal.dim() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: h.normal.dim(),
            });
        }
        if n == 0 {
            return Ok(Polytope::empty(0));
        }
        let hs = canonical_hrep(halfspaces.iter().cloned());
        let mut spans = false;
        let mut points = BTreeSet::new();
        for_each_combination(hs.len(), n, |idx| {
            let a: Vec<Vec<Q>> = idx.iter().map(|&i| hs[i].normal.0.clone()).collect();
            let b: Vec<Q> = idx.iter().map(|&i| hs[i].offset.clone()).collect();
            if let Some(x) = linalg::solve(&a, &b) {
                spans = true;
                let x = QVec(x);
                if hs.iter().all(|h| h.contains(&x)) {
                    points.insert(x);
                }
            }
        });
        if !spans {
            return Err(Error::Unbounded);
        }
        if points.is_empty() {
            return Ok(Polytope::empty(n));
        }
        Polytope::hull(&points.into_iter().collect::<Vec<_>>())
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn vertices(&self) -> &[QVec] {
        &self.vertices
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Dimension of the affine hull; `None` for the empty set.
    pub fn dim(&self) -> Option<usize> {
        self.dim
    }

    /// Dimension of the affine hull, with the empty set counted as `-1`.
    pub fn dim_signed(&self) -> i64 {
        self.dim.map_or(-1, |d| d as i64)
    }

    pub fn is_point(&self) -> bool {
        self.vertices.len() == 1
    }

    pub fn to_hrep(&self) -> &[HalfSpace] {
        self.hrep.get_or_init(|| {
            if self.is_empty() {
                // 0 ≤ x₁ ≤ −1
                let mut e = QVec::zeros(self.ambient_dim.max(1));
                e.0[0] = Q::one();
                return vec![HalfSpace::new(-&e, Q::zero()), HalfSpace::new(e, -Q::one())];
            }
            Polytope::hull(&self.vertices)
                .expect("nonempty")
                .to_hrep()
                .to_vec()
        })
    }

    pub fn contains_point(&self, x: &QVec) -> bool {
        !self.is_empty() && self.to_hrep().iter().all(|h| h.contains(x))
    }

    /// Tests `other ⊆ self`; the margin is the largest excess of a vertex of
    /// `other` over a normalized half-space of `self`.
    pub fn contains(&self, other: &Polytope) -> Containment {
        if other.is_empty() {
            return Containment {
                contained: true,
                margin: Q::zero(),
            };
        }
        if self.is_empty() {
            return Containment {
                contained: false,
                margin: Q::one(),
            };
        }
        let mut margin = Q::zero();
        for h in self.to_hrep() {
            for v in &other.vertices {
                let e = h.excess(v);
                if e > margin {
                    margin = e;
                }
            }
        }
        Containment {
            contained: margin.is_zero(),
            margin,
        }
    }

    fn same_dim(&self, other: &Polytope) -> Result<()> {
        if self.ambient_dim != other.ambient_dim {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim,
                found: other.ambient_dim,
            });
        }
        Ok(())
    }

    pub fn minkowski_sum(&self, other: &Polytope) -> Result<Polytope> {
        self.same_dim(other)?;
        if self.is_empty() || other.is_empty() {
            return Ok(Polytope::empty(self.ambient_dim));
        }
        let sums: Vec<QVec> = self
            .vertices
            .iter()
            .flat_map(|p| other.vertices.iter().map(move |q| p + q))
            .collect();
        Polytope::hull(&sums)
    }

    /// Dilation about the origin.
    pub fn scale(&self, lambda: &Q) -> Result<Polytope> {
        if lambda.is_negative() {
            return Err(Error::NegativeScale(format_q(lambda)));
        }
        if self.is_empty() {
            return Ok(self.clone());
        }
        if lambda.is_zero() {
            return Ok(Polytope::point(QVec::zeros(self.ambient_dim)));
        }
        let vertices = self.vertices.iter().map(|v| v.scaled(lambda)).collect();
        Ok(Polytope {
            ambient_dim: self.ambient_dim,
            vertices,
            dim: self.dim,
            hrep: OnceLock::new(),
        })
    }

    /// Pads every vertex with zero coordinates.
    pub fn embed(&self, zeros_before: usize, zeros_after: usize) -> Polytope {
        let n = zeros_before + self.ambient_dim + zeros_after;
        let vertices = self
            .vertices
            .iter()
            .map(|v| {
                let mut c = vec![Q::zero(); zeros_before];
                c.extend(v.0.iter().cloned());
                c.resize(n, Q::zero());
                QVec(c)
            })
            .collect::<Vec<_>>();
        if vertices.is_empty() {
            return Polytope::empty(n);
        }
        Polytope::hull(&vertices).expect("nonempty")
    }

    /// Image under `x ↦ M x + shift` (`M` given by rows).
    pub fn affine_image(&self, m: &[Vec<Q>], shift: &[Q]) -> Result<Polytope> {
        if self.is_empty() {
            return Ok(Polytope::empty(m.len()));
        }
        let pts: Vec<QVec> = self
            .vertices
            .iter()
            .map(|v| {
                QVec(
                    m.iter()
                        .zip(shift)
                        .map(|(row, s)| dot(row, &v.0) + s)
                        .collect(),
                )
            })
            .collect();
        Polytope::hull(&pts)
    }

    /// `P ∩ {x₁ = ⋯ = x_k = 0}` in the same ambient space.
    pub fn slice_prefix_zero(&self, k: usize) -> Result<Polytope> {
        let n = self.ambient_dim;
        if k > n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: k,
            });
        }
        if k == 0 || self.is_empty() {
            return Ok(self.clone());
        }
        let mut rest = Vec::new();
        for h in self.to_hrep() {
            let normal = QVec(h.normal.0[k..].to_vec());
            if normal.is_zero() {
                if h.offset.is_negative() {
                    return Ok(Polytope::empty(n));
                }
            } else {
                rest.push(HalfSpace::new(normal, h.offset.clone()));
            }
        }
        if k == n {
            return Ok(Polytope::point(QVec::zeros(n)));
        }
        if rest.is_empty() {
            return Err(Error::Unbounded);
        }
        Ok(Polytope::from_halfspaces(&rest, n - k)?.embed(k, 0))
    }

    /// Coordinates along which the vertices are not all equal.
    pub fn moving_coordinates(&self) -> Vec<usize> {
        let Some(first) = self.vertices.first() else {
            return Vec::new();
        };
        (0..self.ambient_dim)
            .filter(|&j| self.vertices.iter().any(|v| v[j] != first[j]))
            .collect()
    }

    /// `k`-dimensional volume. Zero when `dim < k`; bodies of dimension `k`
    /// must have an affine hull parallel to a coordinate subspace.
    pub fn volume_in_dim(&self, k: usize) -> Result<Q> {
        if k > self.ambient_dim {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim,
                found: k,
            });
        }
        let Some(d) = self.dim else {
            return Ok(Q::zero());
        };
        if d > k {
            return Err(Error::BodyExceedsDimension { dim: d, k });
        }
        if d < k {
            return Ok(Q::zero());
        }
        if k == 0 {
            return Ok(Q::one());
        }
        let coords = self.moving_coordinates();
        if coords.len() != k {
            return Err(Error::NonCoordinateAffineHull);
        }
        let pts: Vec<QVec> = self
            .vertices
            .iter()
            .map(|v| QVec(coords.iter().map(|&j| v[j].clone()).collect()))
            .collect();
        Ok(volume::full_dim_volume(&pts))
    }

    /// Volume in its own dimension (after dropping constant coordinates).
    pub fn intrinsic_volume(&self) -> Result<Q> {
        match self.dim {
            None => Ok(Q::zero()),
            Some(d) => self.volume_in_dim(d),
        }
    }

    pub fn vertex_strings(&self) -> Vec<Vec<String>> {
        self.vertices.iter().map(QVec::to_strings).collect()
    }
}

#[derive(Serialize, Deserialize)]
struct PolytopeRepr {
    ambient_dim: usize,
    vertices: Vec<QVec>,
}

impl Serialize for Polytope {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PolytopeRepr {
            ambient_dim: self.ambient_dim,
            vertices: self.vertices.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Polytope {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = PolytopeRepr::deserialize(d)?;
        if r.vertices.is_empty() {
            return Ok(Polytope::empty(r.ambient_dim));
        }
        if let Some(v) = r.vertices.iter().find(|v| v.dim() != r.ambient_dim) {
            return Err(serde::de::Error::custom(format!(
                "vertex of length {} in ambient dimension {}",
                v.dim(),
                r.ambient_dim
            )));
        }
        Polytope::hull(&r.vertices).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests;
