use proptest::prelude::*;

use super::*;
use crate::rational::{q, qr};

fn pt(xs: &[i64]) -> QVec {
    QVec::from_ints(xs)
}

fn poly(pts: &[&[i64]]) -> Polytope {
    Polytope::hull(&pts.iter().map(|p| pt(p)).collect::<Vec<_>>()).unwrap()
}

fn square(s: i64) -> Polytope {
    poly(&[&[0, 0], &[s, 0], &[0, s], &[s, s]])
}

fn hs(normal: &[i64], offset: i64) -> HalfSpace {
    HalfSpace::new(pt(normal), q(offset))
}

#[test]
fn hull_drops_interior_points() {
    let p = Polytope::hull(&[
        pt(&[0, 0]),
        pt(&[1, 0]),
        pt(&[0, 1]),
        QVec(vec![qr(1, 2), qr(1, 4)]),
    ])
    .unwrap();
    assert_eq!(p.vertices(), &[pt(&[0, 0]), pt(&[0, 1]), pt(&[1, 0])]);
    assert_eq!(Polytope::hull(p.vertices()).unwrap(), p);
}

#[test]
fn hull_of_single_point_and_errors() {
    let p = poly(&[&[0, 0]]);
    assert_eq!(p.dim(), Some(0));
    assert!(p.is_point());
    assert_eq!(Polytope::hull(&[]), Err(Error::EmptyPointSet));
    assert!(matches!(
        Polytope::hull(&[pt(&[0]), pt(&[0, 1])]),
        Err(Error::DimensionMismatch { .. })
    ));
}

#[test]
fn hull_of_degree_two_valuations_is_half_simplex() {
    // exponents (i, j) of the 10 degree-2... here: all monomials x^i y^j z^k with i+j+k = 2
    let mut pts = Vec::new();
    for i in 0..=2 {
        for j in 0..=(2 - i) {
            pts.push(QVec(vec![qr(i, 2), qr(j, 2)]));
        }
    }
    let p = Polytope::hull(&pts).unwrap();
    assert_eq!(p.vertices(), &[pt(&[0, 0]), pt(&[0, 1]), pt(&[1, 0])]);
}

#[test]
fn collinear_points_give_segment() {
    let p = poly(&[&[0, 0, 0], &[1, 0, 0], &[3, 0, 0], &[2, 0, 0]]);
    assert_eq!(p.vertices(), &[pt(&[0, 0, 0]), pt(&[3, 0, 0])]);
    assert_eq!(p.dim(), Some(1));
}

#[test]
fn hrep_examples() {
    assert_eq!(
        square(1).to_hrep(),
        &[
            hs(&[-1, 0], 0),
            hs(&[0, -1], 0),
            hs(&[0, 1], 1),
            hs(&[1, 0], 1)
        ]
    );
    let p = poly(&[&[2, 3]]);
    assert_eq!(p.to_hrep().len(), 4);
    let t = poly(&[&[0, 0], &[1, 0], &[1, 1]]);
    assert_eq!(
        t.to_hrep(),
        &[hs(&[-1, 1], 0), hs(&[0, -1], 0), hs(&[1, 0], 1)]
    );
}

#[test]
fn hrep_of_lower_dimensional_body_has_equalities() {
    let seg = poly(&[&[0, 0, 5], &[0, 3, 5]]);
    let h = seg.to_hrep();
    // x = 0 and z = 5 as pairs, plus the two endpoints
    assert_eq!(h.len(), 6);
    assert!(seg
        .vertices()
        .iter()
        .all(|v| h.iter().all(|hh| hh.contains(v))));
    assert!(!seg.contains_point(&pt(&[0, 4, 5])));
    assert!(!seg.contains_point(&pt(&[1, 1, 5])));
}

#[test]
fn from_halfspaces_round_trip() {
    let tri = poly(&[&[0, 0], &[1, 0], &[0, 1]]);
    assert_eq!(Polytope::from_halfspaces(tri.to_hrep(), 2).unwrap(), tri);
    let infeasible = [hs(&[1], 0), hs(&[-1], -1)];
    assert!(Polytope::from_halfspaces(&infeasible, 1)
        .unwrap()
        .is_empty());
    assert_eq!(
        Polytope::from_halfspaces(&[hs(&[1, 0], 1)], 2),
        Err(Error::Unbounded)
    );
}

#[test]
fn minkowski_examples() {
    let a = poly(&[&[0], &[1]]);
    let b = poly(&[&[0], &[2]]);
    assert_eq!(a.minkowski_sum(&b).unwrap(), poly(&[&[0], &[3]]));
    assert_eq!(
        square(1).minkowski_sum(&poly(&[&[0, 0]])).unwrap(),
        square(1)
    );
    let h = poly(&[&[0, 0], &[2, 0]]);
    let v = poly(&[&[0, 0], &[0, 2]]);
    assert_eq!(h.minkowski_sum(&v).unwrap(), square(2));
    assert!(matches!(
        a.minkowski_sum(&square(1)),
        Err(Error::DimensionMismatch { .. })
    ));
}

#[test]
fn volume_examples() {
    assert_eq!(
        poly(&[&[0, 0], &[1, 0], &[0, 1]]).volume_in_dim(2).unwrap(),
        qr(1, 2)
    );
    assert_eq!(
        poly(&[&[0, 0], &[3, 0], &[0, 5], &[3, 5]])
            .volume_in_dim(2)
            .unwrap(),
        q(15)
    );
    assert_eq!(
        poly(&[&[0, 0], &[1, 0], &[1, 1]]).volume_in_dim(2).unwrap(),
        qr(1, 2)
    );
    let cube = poly(&[
        &[0, 0, 0],
        &[2, 0, 0],
        &[0, 2, 0],
        &[0, 0, 2],
        &[2, 2, 0],
        &[2, 0, 2],
        &[0, 2, 2],
        &[2, 2, 2],
    ]);
    assert_eq!(cube.volume_in_dim(3).unwrap(), q(8));
    let oct = poly(&[
        &[1, 0, 0],
        &[-1, 0, 0],
        &[0, 1, 0],
        &[0, -1, 0],
        &[0, 0, 1],
        &[0, 0, -1],
    ]);
    assert_eq!(oct.volume_in_dim(3).unwrap(), qr(4, 3));
}

#[test]
fn volume_dimension_rules() {
    assert_eq!(
        square(1).volume_in_dim(1),
        Err(Error::BodyExceedsDimension { dim: 2, k: 1 })
    );
    let seg = poly(&[&[0, 0], &[0, 2]]);
    assert_eq!(seg.volume_in_dim(2).unwrap(), q(0));
    assert_eq!(seg.volume_in_dim(1).unwrap(), q(2));
    let diag = poly(&[&[0, 0], &[1, 1]]);
    assert_eq!(diag.volume_in_dim(1), Err(Error::NonCoordinateAffineHull));
    assert_eq!(Polytope::empty(2).volume_in_dim(2).unwrap(), q(0));
}

#[test]
fn dim_examples() {
    assert_eq!(poly(&[&[4, 4]]).dim(), Some(0));
    assert_eq!(poly(&[&[0, 0, 0], &[3, 0, 0]]).dim(), Some(1));
    assert_eq!(square(2).dim(), Some(2));
    assert_eq!(Polytope::empty(3).dim(), None);
}

#[test]
fn containment_examples() {
    let tri = poly(&[&[0, 0], &[1, 0], &[0, 1]]);
    assert_eq!(
        square(1).contains(&tri),
        Containment {
            contained: true,
            margin: q(0)
        }
    );
    assert_eq!(square(1).contains(&square(1)).margin, q(0));
    let c = poly(&[&[0], &[1]]).contains(&poly(&[&[0], &[2]]));
    assert_eq!(
        c,
        Containment {
            contained: false,
            margin: q(1)
        }
    );
}

#[test]
fn slice_examples() {
    assert_eq!(
        square(1).slice_prefix_zero(1).unwrap(),
        poly(&[&[0, 0], &[0, 1]])
    );
    assert_eq!(square(1).slice_prefix_zero(0).unwrap(), square(1));
    let simplex = poly(&[&[0, 0], &[2, 0], &[0, 2]]);
    assert_eq!(
        simplex.slice_prefix_zero(1).unwrap(),
        poly(&[&[0, 0], &[0, 2]])
    );
    let shifted = poly(&[&[1, 0], &[2, 1]]);
    assert!(shifted.slice_prefix_zero(1).unwrap().is_empty());
    assert_eq!(square(1).slice_prefix_zero(2).unwrap(), poly(&[&[0, 0]]));
}

#[test]
fn scale_and_embed_examples() {
    let seg = poly(&[&[0], &[2]]);
    assert_eq!(seg.scale(&qr(1, 2)).unwrap(), poly(&[&[0], &[1]]));
    assert_eq!(seg.scale(&q(1)).unwrap(), seg);
    assert_eq!(square(1).scale(&q(3)).unwrap(), square(3));
    assert_eq!(seg.scale(&q(0)).unwrap(), poly(&[&[0]]));
    assert!(seg.scale(&q(-1)).is_err());
    assert_eq!(seg.embed(0, 1), poly(&[&[0, 0], &[2, 0]]));
    assert_eq!(seg.embed(1, 0), poly(&[&[0, 0], &[0, 2]]));
    assert_eq!(poly(&[&[0]]).embed(0, 2), poly(&[&[0, 0, 0]]));
}

#[test]
fn json_round_trip() {
    let p = poly(&[&[0, 0], &[1, 0], &[0, 1]]).scale(&qr(1, 3)).unwrap();
    let s = serde_json::to_string(&p).unwrap();
    assert_eq!(
        s,
        r#"{"ambient_dim":2,"vertices":[["0","0"],["0","1/3"],["1/3","0"]]}"#
    );
    let back: Polytope = serde_json::from_str(&s).unwrap();
    assert_eq!(back, p);
}

fn arb_points(dim: usize, max: usize) -> impl Strategy<Value = Vec<QVec>> {
    prop::collection::vec(prop::collection::vec((-6i64..=6, 1i64..=3), dim), 1..max).prop_map(
        |pts| {
            pts.into_iter()
                .map(|c| QVec(c.into_iter().map(|(n, d)| qr(n, d)).collect()))
                .collect()
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hull_is_idempotent(pts in arb_points(3, 12)) {
        let p = Polytope::hull(&pts).unwrap();
        prop_assert_eq!(Polytope::hull(p.vertices()).unwrap(), p.clone());
        for x in &pts {
            prop_assert!(p.contains_point(x));
        }
        for v in p.vertices() {
            prop_assert!(p.to_hrep().iter().all(|h| h.excess(v) <= Q::zero()));
        }
    }

    #[test]
    fn minkowski_identities(a in arb_points(2, 7), b in arb_points(2, 7), c in arb_points(2, 5)) {
        let (a, b, c) = (Polytope::hull(&a).unwrap(), Polytope::hull(&b).unwrap(), Polytope::hull(&c).unwrap());
        let lhs = a.minkowski_sum(&b).unwrap().minkowski_sum(&c).unwrap();
        let rhs = a.minkowski_sum(&b.minkowski_sum(&c).unwrap()).unwrap();
        prop_assert_eq!(&lhs, &rhs);
        prop_assert_eq!(a.minkowski_sum(&b).unwrap(), b.minkowski_sum(&a).unwrap());
        let lam = qr(3, 2);
        prop_assert_eq!(
            a.minkowski_sum(&b).unwrap().scale(&lam).unwrap(),
            a.scale(&lam).unwrap().minkowski_sum(&b.scale(&lam).unwrap()).unwrap()
        );
    }

    #[test]
    fn containment_implies_volume_order(a in arb_points(2, 8), b in arb_points(2, 8)) {
        let (a, b) = (Polytope::hull(&a).unwrap(), Polytope::hull(&b).unwrap());
        let s = a.minkowski_sum(&b).unwrap();
        let shifted = s.minkowski_sum(&Polytope::point(-&b.vertices()[0])).unwrap();
        prop_assert!(shifted.contains(&a).contained);
        if let Some(k) = shifted.dim() {
            if a.dim() == Some(k) && shifted.moving_coordinates().len() == k {
                prop_assert!(shifted.volume_in_dim(k).unwrap() >= a.volume_in_dim(k).unwrap());
            }
        }
    }
}
