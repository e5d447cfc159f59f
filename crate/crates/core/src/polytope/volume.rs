//! Exact volume by a recursive fan triangulation: each face is coned from its
//! lexicographically smallest vertex over the facets not containing it.

use num_traits::{Signed, Zero};

use super::hull::hull_data;
use crate::linalg;
use crate::rational::{dot, QVec, Q};

/// Simplices (as index lists into `points`) triangulating `conv(points)`.
pub(crate) fn fan_triangulation(points: &[QVec]) -> Vec<Vec<usize>> {
    let all: Vec<usize> = (0..points.len()).collect();
    fan(points, &all)
}

fn fan(points: &[QVec], idx: &[usize]) -> Vec<Vec<usize>> {
    let local: Vec<QVec> = idx.iter().map(|&i| points[i].clone()).collect();
    let data = hull_data(&local);
    let verts: Vec<usize> = data.vertices.iter().map(|&i| idx[i]).collect();
    if data.frame.dim() == 0 {
        return vec![vec![verts[0]]];
    }
    let apex = *verts
        .iter()
        .min_by(|&&a, &&b| points[a].cmp(&points[b]))
        .expect("vertex");
    let mut out = Vec::new();
    for (a, b) in &data.facets {
        let on_facet: Vec<usize> = verts
            .iter()
            .copied()
            .filter(|&v| dot(a, &data.frame.project(&points[v])) == *b)
            .collect();
        if on_facet.contains(&apex) {
            continue;
        }
        for mut simplex in fan(points, &on_facet) {
            simplex.insert(0, apex);
            out.push(simplex);
        }
    }
    out
}

fn factorial(k: usize) -> Q {
    (1..=k).fold(Q::from_integer(1.into()), |acc, i| {
        acc * Q::from_integer(i.into())
    })
}

/// Volume of a full-dimensional point set in ℚᵏ.
pub(crate) fn full_dim_volume(points: &[QVec]) -> Q {
    let k = points[0].dim();
    let total = fan_triangulation(points).iter().fold(Q::zero(), |acc, s| {
        let rows: Vec<Vec<Q>> = s[1..]
            .iter()
            .map(|&i| (&points[i] - &points[s[0]]).0)
            .collect();
        acc + linalg::det(&rows).abs()
    });
    total / factorial(k)
}
