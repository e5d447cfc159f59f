//! Plot data for bodies: exact CSV vertex lists and SVG drawings of bodies
//! of ambient dimension at most 3.

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::polytope::Polytope;
use crate::rational::{format_q, q, to_f64, QVec, Q};

/// Header `x1,…,xn` and one row of exact coordinates per vertex.
pub fn csv(body: &Polytope) -> String {
    let n = body.ambient_dim();
    let mut out = (1..=n)
        .map(|i| format!("x{i}"))
        .collect::<Vec<_>>()
        .join(",");
    out.push('\n');
    for v in body.vertices() {
        out.push_str(&v.0.iter().map(format_q).collect::<Vec<_>>().join(","));
        out.push('\n');
    }
    out
}

/// Decimal rendering with 12 significant digits, trailing zeros dropped.
pub fn sig12(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return "0".into();
    }
    let mag = x.abs().log10().floor() as i32;
    let prec = (11 - mag).max(0) as usize;
    let s = format!("{x:.prec$}");
    let s = if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    };
    if s == "-0" {
        "0".into()
    } else {
        s
    }
}

/// Plane coordinates: `(x, 0)`, `(x, y)`, or the oblique view
/// `(x + z/2, y + z/3)`.
fn project(v: &QVec) -> [Q; 2] {
    let c = &v.0;
    match c.len() {
        0 => [Q::zero(), Q::zero()],
        1 => [c[0].clone(), Q::zero()],
        2 => [c[0].clone(), c[1].clone()],
        _ => [&c[0] + &c[2] / q(2), &c[1] + &c[2] / q(3)],
    }
}

fn cross(o: &[Q; 2], a: &[Q; 2], b: &[Q; 2]) -> Q {
    (&a[0] - &o[0]) * (&b[1] - &o[1]) - (&a[1] - &o[1]) * (&b[0] - &o[0])
}

/// Convex hull of plane points in counter-clockwise order, starting from the
/// lexicographically least point.
fn plane_hull(mut pts: Vec<[Q; 2]>) -> Vec<[Q; 2]> {
    pts.sort();
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut lower: Vec<[Q; 2]> = Vec::new();
    for p in &pts {
        while lower.len() >= 2
            && !cross(&lower[lower.len() - 2], &lower[lower.len() - 1], p).is_positive()
        {
            lower.pop();
        }
        lower.push(p.clone());
    }
    let mut upper: Vec<[Q; 2]> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2
            && !cross(&upper[upper.len() - 2], &upper[upper.len() - 1], p).is_positive()
        {
            upper.pop();
        }
        upper.push(p.clone());
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// SVG drawing of the (projected) body as a closed path.
pub fn svg(body: &Polytope) -> Result<String> {
    if body.ambient_dim() > 3 {
        return Err(Error::Unsupported(format!(
            "svg output needs ambient dimension ≤ 3, got {}",
            body.ambient_dim()
        )));
    }
    let outline = plane_hull(body.vertices().iter().map(project).collect());
    let pts: Vec<(f64, f64)> = outline
        .iter()
        .map(|p| (to_f64(&p[0]), to_f64(&p[1])))
        .collect();
    let (mut x0, mut x1, mut y0, mut y1) = (0.0f64, 1.0f64, 0.0f64, 1.0f64);
    for &(x, y) in &pts {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    let pad = 0.05 * (x1 - x0).max(y1 - y0);
    let (w, h) = (x1 - x0 + 2.0 * pad, y1 - y0 + 2.0 * pad);
    let stroke = sig12(w.max(h) / 200.0);
    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{} {} {} {}\">\n",
        sig12(x0 - pad),
        sig12(-(y1 + pad)),
        sig12(w),
        sig12(h)
    ));
    out.push_str("<g transform=\"scale(1,-1)\">\n");
    match pts.len() {
        0 => {}
        1 => out.push_str(&format!(
            "<circle cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"black\"/>\n",
            sig12(pts[0].0),
            sig12(pts[0].1),
            stroke
        )),
        _ => {
            let mut d = String::new();
            for (i, &(x, y)) in pts.iter().enumerate() {
                d.push_str(if i == 0 { "M " } else { " L " });
                d.push_str(&format!("{} {}", sig12(x), sig12(y)));
            }
            d.push_str(" Z");
            out.push_str(&format!(
                "<path d=\"{d}\" fill=\"#9ecae1\" fill-opacity=\"0.6\" stroke=\"black\" stroke-width=\"{stroke}\"/>\n"
            ));
        }
    }
    out.push_str("</g>\n</svg>\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn body(pts: &[&[i64]]) -> Polytope {
        Polytope::hull(&pts.iter().map(|p| QVec::from_ints(p)).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn csv_rows() {
        let tri = body(&[&[0, 0], &[2, 0], &[0, 2]]);
        let text = csv(&tri);
        assert_eq!(text.lines().count(), 4);
        assert_eq!(text.lines().next(), Some("x1,x2"));
        let pt = Polytope::point(QVec(vec![q(1), Q::new(1.into(), 2.into())]));
        assert_eq!(csv(&pt), "x1,x2\n1,1/2\n");
    }

    #[test]
    fn svg_square_is_closed_path() {
        let sq = body(&[&[0, 0], &[2, 0], &[0, 2], &[2, 2]]);
        let s = svg(&sq).unwrap();
        assert!(s.contains("d=\"M 0 0 L 2 0 L 2 2 L 0 2 Z\""), "{s}");
        assert_eq!(s, svg(&sq).unwrap());
    }

    #[test]
    fn svg_projects_solids() {
        let cube = body(&[
            &[0, 0, 0],
            &[1, 0, 0],
            &[0, 1, 0],
            &[0, 0, 1],
            &[1, 1, 0],
            &[1, 0, 1],
            &[0, 1, 1],
            &[1, 1, 1],
        ]);
        let s = svg(&cube).unwrap();
        assert_eq!(s.matches(" L ").count(), 5);
        let four = body(&[&[0, 0, 0, 0], &[1, 0, 0, 0]]);
        assert!(svg(&four).is_err());
    }

    #[test]
    fn twelve_digits() {
        assert_eq!(sig12(1.0 / 3.0), "0.333333333333");
        assert_eq!(sig12(200.0 / 3.0), "66.6666666667");
        assert_eq!(sig12(-2.5), "-2.5");
        assert_eq!(sig12(0.0), "0");
    }
}
