//! Convex hull of rate points together with the origin, for two and three
//! users.
//!
//! Point sets are tiny (at most seven corners plus the origin), so the 3-D
//! hull is found by testing every triple as a candidate supporting plane
//! rather than with an incremental algorithm.

use serde::{Deserialize, Serialize};

use crate::channel::RatePoint;
use crate::error::{Error, Result};

/// Relative tolerance for orientation tests.
const ORIENT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HullVertex {
    Origin,
    /// Label of an input point: its position in the input slice, or its
    /// profile index for [`CornerSet::hull`](super::CornerSet::hull).
    Point(usize),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Facet {
    pub vertices: [HullVertex; 3],
    /// Unit outward normal.
    pub normal: [f64; 3],
}

impl Facet {
    /// Facet on the outer (Pareto) surface rather than on a coordinate plane.
    pub fn is_frontier(&self) -> bool {
        !self.vertices.contains(&HullVertex::Origin) && self.normal.iter().all(|&c| c >= -ORIENT_TOL)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Hull {
    /// Two users: the upper-right frontier chain, from the top-most hull
    /// vertex to the right-most one.
    Chain(Vec<HullVertex>),
    /// Three users: triangulated hull boundary.
    Facets(Vec<Facet>),
}

impl Hull {
    pub fn vertices(&self) -> Vec<HullVertex> {
        let mut out: Vec<HullVertex> = match self {
            Hull::Chain(chain) => chain.clone(),
            Hull::Facets(facets) => facets.iter().flat_map(|f| f.vertices).collect(),
        };
        out.sort();
        out.dedup();
        out
    }

    pub fn contains_vertex(&self, v: HullVertex) -> bool {
        self.vertices().contains(&v)
    }
}

/// Hull of `points` plus the origin. Vertices are labelled by input position.
pub fn convex_hull(points: &[RatePoint]) -> Result<Hull> {
    let labels: Vec<usize> = (0..points.len()).collect();
    convex_hull_labelled(points, &labels)
}

pub(crate) fn convex_hull_labelled(points: &[RatePoint], labels: &[usize]) -> Result<Hull> {
    let dim = points.first().map_or(0, |p| p.len());
    if points.iter().any(|p| p.len() != dim) {
        return Err(Error::invalid("hull points have mixed dimensions"));
    }
    if points.len() < 2 {
        return Err(Error::invalid(format!("hull needs at least 2 points, got {}", points.len())));
    }
    if points.iter().all(|p| **p == *points[0]) {
        return Err(Error::Degenerate("all hull points coincide".into()));
    }
    let mut ids = vec![HullVertex::Origin];
    ids.extend(labels.iter().map(|&l| HullVertex::Point(l)));
    match dim {
        2 => {
            let mut pts = vec![[0.0, 0.0]];
            pts.extend(points.iter().map(|p| [p[0], p[1]]));
            Ok(Hull::Chain(frontier_chain(&pts, &ids)))
        }
        3 => {
            let mut pts = vec![[0.0; 3]];
            pts.extend(points.iter().map(|p| [p[0], p[1], p[2]]));
            Ok(Hull::Facets(facets_3d(&pts, &ids)?))
        }
        users => Err(Error::UnsupportedDimension { op: "convex hull", users }),
    }
}

fn cross2(o: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

fn scale_of<const D: usize>(pts: &[[f64; D]]) -> f64 {
    pts.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs())).max(f64::MIN_POSITIVE)
}

/// Counter-clockwise strict hull (collinear points dropped), as positions
/// into `pts`.
fn monotone_chain(pts: &[[f64; 2]]) -> Vec<usize> {
    let tol = ORIENT_TOL * scale_of(pts).powi(2);
    let mut order: Vec<usize> = (0..pts.len()).collect();
    order.sort_by(|&i, &j| pts[i][0].total_cmp(&pts[j][0]).then(pts[i][1].total_cmp(&pts[j][1])));
    order.dedup_by(|i, j| pts[*i] == pts[*j]);
    if order.len() < 3 {
        return order;
    }
    let mut hull: Vec<usize> = Vec::with_capacity(2 * order.len());
    for pass in [order.clone(), order.iter().rev().copied().collect()] {
        let start = hull.len();
        for &i in &pass {
            while hull.len() >= start + 2 && cross2(pts[hull[hull.len() - 2]], pts[hull[hull.len() - 1]], pts[i]) <= tol
            {
                hull.pop();
            }
            hull.push(i);
        }
        hull.pop();
    }
    hull
}

fn frontier_chain(pts: &[[f64; 2]], ids: &[HullVertex]) -> Vec<HullVertex> {
    let ccw = monotone_chain(pts);
    let top = *ccw
        .iter()
        .max_by(|&&i, &&j| pts[i][1].total_cmp(&pts[j][1]).then(pts[i][0].total_cmp(&pts[j][0])))
        .expect("non-empty hull");
    let right = *ccw
        .iter()
        .max_by(|&&i, &&j| pts[i][0].total_cmp(&pts[j][0]).then(pts[i][1].total_cmp(&pts[j][1])))
        .expect("non-empty hull");
    // counter-clockwise from the right-most vertex reaches the top-most one
    // along the upper-right boundary
    let start = ccw.iter().position(|&i| i == right).unwrap();
    let mut chain = Vec::new();
    for k in 0..ccw.len() {
        let i = ccw[(start + k) % ccw.len()];
        chain.push(i);
        if i == top {
            break;
        }
    }
    chain.reverse();
    chain.into_iter().map(|i| ids[i]).collect()
}

fn sub(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn cross3(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn norm(a: [f64; 3]) -> f64 {
    dot(a, a).sqrt()
}

/// Triangulated boundary of a 3-D point set. Points within tolerance of a
/// face plane count as on the face, and those lying on a face's edges are
/// kept as vertices.
fn facets_3d(pts: &[[f64; 3]], ids: &[HullVertex]) -> Result<Vec<Facet>> {
    let scale = scale_of(pts);
    let n = pts.len();
    let mut faces: Vec<(Vec<usize>, [f64; 3])> = Vec::new();

    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let normal = cross3(sub(pts[j], pts[i]), sub(pts[k], pts[i]));
                let len = norm(normal);
                if len <= ORIENT_TOL * scale * scale {
                    continue;
                }
                let unit = normal.map(|c| c / len);
                let tol = ORIENT_TOL * scale;
                let side: Vec<f64> = pts.iter().map(|&p| dot(unit, sub(p, pts[i]))).collect();
                let outward = if side.iter().all(|&s| s <= tol) {
                    unit
                } else if side.iter().all(|&s| s >= -tol) {
                    unit.map(|c| -c)
                } else {
                    continue;
                };
                let on_plane: Vec<usize> = (0..n).filter(|&m| side[m].abs() <= tol).collect();
                if on_plane.len() == n {
                    return Err(Error::Degenerate("hull points are coplanar".into()));
                }
                if !faces.iter().any(|(members, _)| *members == on_plane) {
                    faces.push((on_plane, outward));
                }
            }
        }
    }
    if faces.is_empty() {
        return Err(Error::Degenerate("hull points are collinear".into()));
    }

    let mut facets = Vec::new();
    for (members, normal) in faces {
        let ring = face_ring(pts, &members, normal);
        for tri in fan(pts, &ring) {
            facets.push(Facet { vertices: tri.map(|i| ids[i]), normal });
        }
    }
    Ok(facets)
}

/// Boundary of one planar face, counter-clockwise about `normal`, with
/// points lying on edges included.
fn face_ring(pts: &[[f64; 3]], members: &[usize], normal: [f64; 3]) -> Vec<usize> {
    let origin = pts[members[0]];
    let far =
        *members.iter().max_by(|&&a, &&b| norm(sub(pts[a], origin)).total_cmp(&norm(sub(pts[b], origin)))).unwrap();
    let u = {
        let d = sub(pts[far], origin);
        d.map(|c| c / norm(d))
    };
    let w = cross3(normal, u);
    let flat: Vec<[f64; 2]> = members
        .iter()
        .map(|&m| {
            let d = sub(pts[m], origin);
            [dot(d, u), dot(d, w)]
        })
        .collect();

    let strict = monotone_chain(&flat);
    let tol = ORIENT_TOL * scale_of(&flat);
    let mut ring = Vec::new();
    for e in 0..strict.len() {
        let (s, t) = (strict[e], strict[(e + 1) % strict.len()]);
        ring.push(s);
        let (ps, pt) = (flat[s], flat[t]);
        let len2 = (pt[0] - ps[0]).powi(2) + (pt[1] - ps[1]).powi(2);
        let mut between: Vec<(f64, usize)> = (0..flat.len())
            .filter(|&m| m != s && m != t)
            .filter_map(|m| {
                let q = flat[m];
                let along = ((q[0] - ps[0]) * (pt[0] - ps[0]) + (q[1] - ps[1]) * (pt[1] - ps[1])) / len2;
                let off = cross2(ps, pt, q).abs() / len2.sqrt();
                (off <= tol && along > 0.0 && along < 1.0).then_some((along, m))
            })
            .collect();
        between.sort_by(|a, b| a.0.total_cmp(&b.0));
        ring.extend(between.into_iter().map(|(_, m)| m));
    }
    ring.into_iter().map(|k| members[k]).collect()
}

/// Fan triangulation of a convex ring, anchored where no triangle is
/// degenerate when such an anchor exists.
fn fan(pts: &[[f64; 3]], ring: &[usize]) -> Vec<[usize; 3]> {
    let area = |a: usize, b: usize, c: usize| norm(cross3(sub(pts[b], pts[a]), sub(pts[c], pts[a])));
    let scale = scale_of(pts);
    let flat = |t: &[usize; 3]| area(t[0], t[1], t[2]) <= ORIENT_TOL * scale * scale;
    let m = ring.len();
    let fan_at = |anchor: usize| -> Vec<[usize; 3]> {
        (1..m - 1).map(|k| [ring[anchor], ring[(anchor + k) % m], ring[(anchor + k + 1) % m]]).collect()
    };
    (0..m)
        .map(fan_at)
        .find(|tris| !tris.iter().any(flat))
        .unwrap_or_else(|| fan_at(0).into_iter().filter(|t| !flat(t)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::ChannelGains;
    use crate::region::enumerate_corners;

    fn rp(v: &[f64]) -> RatePoint {
        RatePoint::new(v.to_vec())
    }

    #[test]
    fn interference_limited_drops_b() {
        let g = ChannelGains::two_user(1.0, 10.0, 1.0, 10.0, 1.0).unwrap();
        let hull = enumerate_corners(&g).unwrap().hull().unwrap();
        assert_eq!(hull, Hull::Chain(vec![HullVertex::Point(2), HullVertex::Point(1)]));
    }

    #[test]
    fn noise_limited_keeps_b() {
        let g = ChannelGains::two_user(2.0, 0.2, 1.0, 0.1, 1.0).unwrap();
        let hull = enumerate_corners(&g).unwrap().hull().unwrap();
        assert_eq!(hull, Hull::Chain(vec![HullVertex::Point(2), HullVertex::Point(3), HullVertex::Point(1)]));
    }

    #[test]
    fn collinear_middle_point_is_dropped() {
        let hull = convex_hull(&[rp(&[0.0, 1.0]), rp(&[0.5, 0.5]), rp(&[1.0, 0.0])]).unwrap();
        assert_eq!(hull, Hull::Chain(vec![HullVertex::Point(0), HullVertex::Point(2)]));
    }

    #[test]
    fn hull_errors() {
        assert!(matches!(convex_hull(&[rp(&[1.0, 1.0]), rp(&[1.0, 1.0])]), Err(Error::Degenerate(_))));
        assert!(convex_hull(&[rp(&[1.0, 1.0])]).is_err());
        assert!(matches!(
            convex_hull(&[rp(&[1.0; 4]), rp(&[0.5; 4])]),
            Err(Error::UnsupportedDimension { users: 4, .. })
        ));
        assert!(convex_hull(&[rp(&[1.0, 1.0]), rp(&[1.0, 1.0, 1.0])]).is_err());
    }

    #[test]
    fn unit_cube_corner_hull() {
        // axis points of a noise-free channel: the region is the unit cube
        let g = ChannelGains::new(vec![vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0]], 1.0).unwrap();
        let corners = enumerate_corners(&g).unwrap();
        let Hull::Facets(facets) = corners.hull().unwrap() else { panic!("expected facets") };
        // six square faces, two triangles each
        assert_eq!(facets.len(), 12);
        let total: f64 = facets
            .iter()
            .map(|f| {
                let p = |v: HullVertex| match v {
                    HullVertex::Origin => [0.0; 3],
                    HullVertex::Point(k) => {
                        let r = corners.rate(k).unwrap();
                        [r[0], r[1], r[2]]
                    }
                };
                let [a, b, c] = f.vertices.map(p);
                norm(cross3(sub(b, a), sub(c, a))) / 2.0
            })
            .sum();
        assert!((total - 6.0).abs() < 1e-12);
        assert_eq!(facets.iter().filter(|f| f.is_frontier()).count(), 6);
    }

    #[test]
    fn three_user_hull_uses_only_inputs_and_origin() {
        let g = ChannelGains::new(vec![vec![2.0, 0.3, 0.1], vec![0.2, 1.5, 0.4], vec![0.1, 0.2, 1.0]], 1.0).unwrap();
        let corners = enumerate_corners(&g).unwrap();
        let hull = corners.hull().unwrap();
        for v in hull.vertices() {
            match v {
                HullVertex::Origin => {}
                HullVertex::Point(k) => assert!((1..=7).contains(&k)),
            }
        }
        let Hull::Facets(facets) = &hull else { panic!() };
        // every corner lies on the inner side of every facet plane
        for f in facets {
            let anchor = match f.vertices[0] {
                HullVertex::Origin => [0.0; 3],
                HullVertex::Point(k) => {
                    let r = corners.rate(k).unwrap();
                    [r[0], r[1], r[2]]
                }
            };
            for (_, r) in corners.iter() {
                assert!(dot(f.normal, sub([r[0], r[1], r[2]], anchor)) <= 1e-9);
            }
        }
    }

    #[test]
    fn coplanar_points_are_degenerate() {
        let pts = [rp(&[1.0, 0.0, 0.0]), rp(&[0.0, 1.0, 0.0]), rp(&[1.0, 1.0, 0.0])];
        assert!(matches!(convex_hull(&pts), Err(Error::Degenerate(_))));
    }

    #[test]
    fn square_face_with_edge_midpoint_keeps_it() {
        let pts = [
            rp(&[1.0, 0.0, 0.0]),
            rp(&[0.0, 1.0, 0.0]),
            rp(&[1.0, 1.0, 0.0]),
            rp(&[0.5, 0.0, 0.0]),
            rp(&[0.0, 0.0, 1.0]),
        ];
        let hull = convex_hull(&pts).unwrap();
        assert!(hull.contains_vertex(HullVertex::Point(3)));
    }
}
