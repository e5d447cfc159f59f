//! Exact convex-hull engine.
//!
//! Points are first placed in their affine hull: the RREF of the difference
//! vectors picks pivot coordinates onto which the hull projects bijectively.
//! Facets of the projected full-dimensional set are the extreme rays of the
//! cone `{(a, b) : ⟨a, y⟩ − b ≤ 0 for every point y}`, enumerated by the
//! double-description method with the combinatorial adjacency test.

use num_traits::{Signed, Zero};

use crate::linalg::{self, Matrix};
use crate::rational::{dot, primitive_scale, QVec, Q};

/// Affine hull of a finite point set, with a coordinate chart.
#[derive(Clone, Debug)]
pub(crate) struct AffineFrame {
    pub base: QVec,
    /// RREF basis of the direction space; row `k` has a leading 1 at `pivots[k]`.
    pub basis: Matrix,
    pub pivots: Vec<usize>,
}

impl AffineFrame {
    pub fn of(points: &[QVec]) -> AffineFrame {
        let base = points[0].clone();
        let diffs: Matrix = points[1..].iter().map(|p| (p - &base).0).collect();
        let (basis, pivots) = if diffs.is_empty() {
            (Vec::new(), Vec::new())
        } else {
            linalg::rref(&diffs)
        };
        AffineFrame {
            base,
            basis,
            pivots,
        }
    }

    pub fn dim(&self) -> usize {
        self.pivots.len()
    }

    pub fn project(&self, x: &QVec) -> Vec<Q> {
        self.pivots.iter().map(|&p| x[p].clone()).collect()
    }

    /// Affine equations `⟨normal, x⟩ = offset` cutting out the affine hull,
    /// one per non-pivot coordinate.
    pub fn equalities(&self) -> Vec<(Vec<Q>, Q)> {
        let n = self.base.dim();
        (0..n)
            .filter(|j| !self.pivots.contains(j))
            .map(|j| {
                let mut normal = vec![Q::zero(); n];
                normal[j] = Q::from_integer(1.into());
                let mut offset = self.base[j].clone();
                for (row, &p) in self.basis.iter().zip(&self.pivots) {
                    normal[p] = -row[j].clone();
                    offset -= &row[j] * &self.base[p];
                }
                (normal, offset)
            })
            .collect()
    }

    /// Lifts a half-space on pivot coordinates to the ambient space.
    pub fn lift_normal(&self, a: &[Q]) -> Vec<Q> {
        let mut normal = vec![Q::zero(); self.base.dim()];
        for (x, &p) in a.iter().zip(&self.pivots) {
            normal[p] = x.clone();
        }
        normal
    }
}

/// Result of a hull computation over a deduplicated point list.
#[derive(Clone, Debug)]
pub(crate) struct HullData {
    pub frame: AffineFrame,
    /// Indices (into the input) of the extreme points.
    pub vertices: Vec<usize>,
    /// Facets `⟨a, y⟩ ≤ b` on the frame's pivot coordinates.
    pub facets: Vec<(Vec<Q>, Q)>,
}

/// `points` must be nonempty and free of duplicates.
pub(crate) fn hull_data(points: &[QVec]) -> HullData {
    let frame = AffineFrame::of(points);
    let d = frame.dim();
    if d == 0 {
        return HullData {
            frame,
            vertices: vec![0],
            facets: Vec::new(),
        };
    }
    let ys: Vec<Vec<Q>> = points.iter().map(|p| frame.project(p)).collect();
    let (facets, candidates) = full_dim_facets(&ys);
    let vertices = candidates
        .into_iter()
        .filter(|&i| {
            let tight: Matrix = facets
                .iter()
                .filter(|(a, b)| dot(a, &ys[i]) == *b)
                .map(|(a, _)| a.clone())
                .collect();
            !tight.is_empty() && linalg::rank(&tight) == d
        })
        .collect();
    HullData {
        frame,
        vertices,
        facets,
    }
}

fn directions(d: usize) -> Vec<Vec<i64>> {
    if d > 5 {
        let mut out = Vec::new();
        for i in 0..d {
            for s in [1, -1] {
                let mut v = vec![0; d];
                v[i] = s;
                out.push(v);
            }
        }
        out.push(vec![1; d]);
        out.push(vec![-1; d]);
        return out;
    }
    let mut out = vec![vec![]];
    for _ in 0..d {
        out = out
            .into_iter()
            .flat_map(|v: Vec<i64>| {
                [-1, 0, 1].into_iter().map(move |s| {
                    let mut w = v.clone();
                    w.push(s);
                    w
                })
            })
            .collect();
    }
    out.retain(|v| v.iter().any(|&x| x != 0));
    out
}

/// Facets of a full-dimensional point set in ℚᵈ, plus the indices of the
/// points that can possibly be vertices.
fn full_dim_facets(ys: &[Vec<Q>]) -> (Vec<(Vec<Q>, Q)>, Vec<usize>) {
    let d = ys[0].len();
    // seed with direction maximizers (lex-least among ties, hence vertices)
    let mut seed: Vec<usize> = Vec::new();
    for dir in directions(d) {
        let dirq: Vec<Q> = dir.iter().map(|&x| Q::from_integer(x.into())).collect();
        let mut best: Option<(Q, usize)> = None;
        for (i, y) in ys.iter().enumerate() {
            let v = dot(&dirq, y);
            let better = match &best {
                None => true,
                Some((bv, bi)) => v > *bv || (v == *bv && ys[i] < ys[*bi]),
            };
            if better {
                best = Some((v, i));
            }
        }
        let i = best.expect("nonempty").1;
        if !seed.contains(&i) {
            seed.push(i);
        }
    }
    let (mut dd, chosen) = DoubleDescription::start(ys, &mut seed);
    for &i in seed.iter() {
        dd.add(&ys[i], i);
    }
    let mut candidates = chosen;
    candidates.extend(seed);
    let seeded: Vec<(Vec<Q>, Q)> = dd.facets();
    let outside: Vec<usize> = (0..ys.len())
        .filter(|i| !candidates.contains(i))
        .filter(|&i| seeded.iter().any(|(a, b)| dot(a, &ys[i]) > *b))
        .collect();
    for &i in &outside {
        dd.add(&ys[i], i);
    }
    candidates.extend(outside);
    candidates.sort_unstable();
    (dd.facets(), candidates)
}

#[derive(Clone, Debug)]
struct BitSet(Vec<u64>);

impl BitSet {
    fn new() -> Self {
        BitSet(Vec::new())
    }
    fn insert(&mut self, i: usize) {
        let w = i / 64;
        if self.0.len() <= w {
            self.0.resize(w + 1, 0);
        }
        self.0[w] |= 1 << (i % 64);
    }
    fn and(&self, other: &BitSet) -> BitSet {
        BitSet(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }
    fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }
    fn is_subset(&self, other: &BitSet) -> bool {
        self.0
            .iter()
            .enumerate()
            .all(|(i, w)| w & !other.0.get(i).copied().unwrap_or(0) == 0)
    }
}

struct Ray {
    v: Vec<Q>,
    zeros: BitSet,
}

struct DoubleDescription {
    cone_dim: usize,
    rays: Vec<Ray>,
}

fn normalized(v: Vec<Q>) -> Vec<Q> {
    let c = primitive_scale(&v);
    v.into_iter().map(|x| x * &c).collect()
}

fn constraint_row(y: &[Q]) -> Vec<Q> {
    let mut row = y.to_vec();
    row.push(-Q::from_integer(1.into()));
    row
}

impl DoubleDescription {
    /// Builds the initial simplicial cone from `d + 1` affinely independent
    /// points, preferring seed points and falling back to all of `ys`. The
    /// chosen points are removed from `seed` and returned.
    fn start(ys: &[Vec<Q>], seed: &mut Vec<usize>) -> (DoubleDescription, Vec<usize>) {
        let d = ys[0].len();
        let mut chosen: Vec<usize> = Vec::new();
        let mut diffs: Matrix = Vec::new();
        let pool: Vec<usize> = seed.iter().copied().chain(0..ys.len()).collect();
        for i in pool {
            if chosen.len() == d + 1 {
                break;
            }
            if chosen.contains(&i) {
                continue;
            }
            if chosen.is_empty() {
                chosen.push(i);
                continue;
            }
            let diff: Vec<Q> = ys[i]
                .iter()
                .zip(&ys[chosen[0]])
                .map(|(a, b)| a - b)
                .collect();
            let mut trial = diffs.clone();
            trial.push(diff);
            if linalg::rank(&trial) == trial.len() {
                diffs = trial;
                chosen.push(i);
            }
        }
        assert_eq!(chosen.len(), d + 1, "points must be full-dimensional");
        seed.retain(|i| !chosen.contains(i));
        let a: Matrix = chosen.iter().map(|&i| constraint_row(&ys[i])).collect();
        let mut rays = Vec::new();
        for j in 0..=d {
            let mut rhs = vec![Q::zero(); d + 1];
            rhs[j] = -Q::from_integer(1.into());
            let v = linalg::solve(&a, &rhs).expect("independent rows");
            let mut zeros = BitSet::new();
            for (k, &i) in chosen.iter().enumerate() {
                if k != j {
                    zeros.insert(i);
                }
            }
            rays.push(Ray {
                v: normalized(v),
                zeros,
            });
        }
        (
            DoubleDescription {
                cone_dim: d + 1,
                rays,
            },
            chosen,
        )
    }

    fn add(&mut self, y: &[Q], idx: usize) {
        let c = constraint_row(y);
        let vals: Vec<Q> = self.rays.iter().map(|r| dot(&c, &r.v)).collect();
        let plus: Vec<usize> = (0..self.rays.len())
            .filter(|&i| vals[i].is_positive())
            .collect();
        if plus.is_empty() {
            for (r, v) in self.rays.iter_mut().zip(&vals) {
                if v.is_zero() {
                    r.zeros.insert(idx);
                }
            }
            return;
        }
        let minus: Vec<usize> = (0..self.rays.len())
            .filter(|&i| vals[i].is_negative())
            .collect();
        let mut new_rays = Vec::new();
        for &p in &plus {
            for &m in &minus {
                let z = self.rays[p].zeros.and(&self.rays[m].zeros);
                if z.count() + 2 < self.cone_dim {
                    continue;
                }
                let adjacent = self
                    .rays
                    .iter()
                    .enumerate()
                    .all(|(t, r)| t == p || t == m || !z.is_subset(&r.zeros));
                if !adjacent {
                    continue;
                }
                let v: Vec<Q> = self.rays[m]
                    .v
                    .iter()
                    .zip(&self.rays[p].v)
                    .map(|(rm, rp)| &vals[p] * rm - &vals[m] * rp)
                    .collect();
                let mut zeros = z;
                zeros.insert(idx);
                new_rays.push(Ray {
                    v: normalized(v),
                    zeros,
                });
            }
        }
        let old = std::mem::take(&mut self.rays);
        for (mut r, v) in old.into_iter().zip(&vals) {
            if v.is_positive() {
                continue;
            }
            if v.is_zero() {
                r.zeros.insert(idx);
            }
            self.rays.push(r);
        }
        self.rays.extend(new_rays);
    }

    fn facets(&self) -> Vec<(Vec<Q>, Q)> {
        let d = self.cone_dim - 1;
        self.rays
            .iter()
            .map(|r| (r.v[..d].to_vec(), r.v[d].clone()))
            .collect()
    }
}
