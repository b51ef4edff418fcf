use std::f64::consts::PI;

use super::hyperboloid::Point;
use super::{ArcEmbedding, MetricModel, Placement, Sheet};
use crate::error::{domain, Error, Result};
use crate::growth::{GrowthEvent, TouchKind};
use crate::spheremap::{ArcJson, ArcKind, MapJson, SphereMap, VertexJson};

/// The double of a regular right-angled `(2g+2)`-gon; its polygon vertices are the cone points.
#[derive(Debug, Clone)]
pub struct RegularDoubledPolygonModel {
    genus: u32,
    circumradius: f64,
    side: f64,
    points: Vec<Point>,
}

impl RegularDoubledPolygonModel {
    pub fn new(g: u32) -> Result<Self> {
        if g < 2 {
            return domain(format!("regular model needs genus at least 2, got {g}"));
        }
        let n = 2 * g as usize + 2;
        let circumradius = (1.0 / (PI / n as f64).tan()).acosh();
        let side = 2.0 * (2f64.sqrt() * (PI / n as f64).cos()).acosh();
        let points = (0..n).map(|k| Point::polar(circumradius, 2.0 * PI * k as f64 / n as f64)).collect();
        Ok(Self { genus: g, circumradius, side, points })
    }

    pub fn circumradius(&self) -> f64 {
        self.circumradius
    }

    pub fn side_length(&self) -> f64 {
        self.side
    }

    /// Polygon vertex `i` (1-based) on the hyperboloid.
    pub fn point(&self, i: usize) -> &Point {
        &self.points[i - 1]
    }

    /// Polygon sides as 1-based vertex pairs `(i, i+1)`.
    pub fn sides(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.n_points();
        (1..=n).map(move |i| (i, i % n + 1))
    }

    pub fn interior_angle(&self, i: usize) -> f64 {
        let n = self.n_points();
        let prev = (i + n - 2) % n + 1;
        let next = i % n + 1;
        self.point(i).angle(self.point(prev), self.point(next))
    }

    /// Closed form for vertices `m` steps apart.
    pub fn step_distance(&self, m: usize) -> f64 {
        if m % self.n_points() == 0 {
            return 0.0;
        }
        let n = self.n_points() as f64;
        let (c, s) = (self.circumradius.cosh(), self.circumradius.sinh());
        (c * c - s * s * (2.0 * PI * m as f64 / n).cos()).max(1.0).acosh()
    }

    fn offset(&self, i: usize, j: usize) -> usize {
        let n = self.n_points();
        (j + n - i) % n
    }

    /// Key of the dart at `i` towards `j` in the counter-clockwise order at `i`: the side
    /// to `i+1`, top diagonals by increasing offset, the side to `i−1`, bottom diagonals
    /// by decreasing offset.
    fn rotation_key(&self, i: usize, j: usize, sheet: Option<Sheet>) -> usize {
        let n = self.n_points();
        let o = self.offset(i, j);
        match (o, sheet) {
            (1, _) => 0,
            (o, _) if o == n - 1 => n,
            (o, Some(Sheet::Top)) => 1 + o,
            (o, _) => n + 1 + (n - o),
        }
    }

    /// Whether chords `a` and `b` of the polygon interleave.
    fn crosses(&self, a: (usize, usize), b: (usize, usize)) -> bool {
        let k = self.offset(a.0, a.1);
        let (x, y) = (self.offset(a.0, b.0), self.offset(a.0, b.1));
        let on = |o: usize| o == 0 || o == k;
        !on(x) && !on(y) && (x < k) != (y < k)
    }
}

impl MetricModel for RegularDoubledPolygonModel {
    fn genus(&self) -> u32 {
        self.genus
    }

    fn name(&self) -> String {
        format!("regular-{}", self.genus)
    }

    fn pair_distance(&self, i: usize, j: usize) -> f64 {
        if i == j {
            return 0.0;
        }
        self.point(i).distance(self.point(j))
    }

    fn loop_radius(&self, i: usize) -> f64 {
        self.sides()
            .filter(|&(a, b)| a != i && b != i)
            .map(|(a, b)| self.point(i).segment_distance(self.point(a), self.point(b)))
            .fold(f64::INFINITY, f64::min)
    }

    fn area(&self) -> f64 {
        let n = self.n_points();
        let angle_sum: f64 = (1..=n).map(|i| self.interior_angle(i)).sum();
        2.0 * ((n as f64 - 2.0) * PI - angle_sum)
    }

    fn realize_arcs(&self, events: &[GrowthEvent]) -> Result<Vec<ArcEmbedding>> {
        let mut out: Vec<ArcEmbedding> = Vec::with_capacity(events.len());
        for e in events {
            let (i, j) = match e.touch() {
                TouchKind::SelfTouch => {
                    return Err(Error::Embedding(format!(
                        "event {}: loops are not realized on the regular model",
                        e.m
                    )))
                }
                TouchKind::PairTouch => (e.i, e.j.expect("pair event has two points")),
            };
            let placement = if self.offset(i, j) == 1 || self.offset(j, i) == 1 {
                Placement::Side
            } else {
                let blocked = |sheet: Sheet| {
                    out.iter()
                        .any(|p| p.placement == Placement::Diagonal { sheet } && self.crosses((i, j), (p.i, p.j)))
                };
                if !blocked(Sheet::Top) {
                    Placement::Diagonal { sheet: Sheet::Top }
                } else if !blocked(Sheet::Bottom) {
                    Placement::Diagonal { sheet: Sheet::Bottom }
                } else {
                    return Err(Error::Embedding(format!("event {}: diagonal {i}-{j} crosses both sheets", e.m)));
                }
            };
            out.push(ArcEmbedding { arc: e.m as u32, kind: ArcKind::Edge, i, j, placement });
        }
        Ok(out)
    }

    fn arc_map(&self, events: &[GrowthEvent]) -> Result<SphereMap> {
        let arcs = self.realize_arcs(events)?;
        let n = self.n_points();
        let mut slots: Vec<Vec<(usize, u32)>> = vec![Vec::new(); n + 1];
        let mut arc_json = Vec::new();
        for a in &arcs {
            let sheet = match a.placement {
                Placement::Diagonal { sheet } => Some(sheet),
                _ => None,
            };
            let (x, y) = (2 * a.arc, 2 * a.arc + 1);
            slots[a.i].push((self.rotation_key(a.i, a.j, sheet), x));
            slots[a.j].push((self.rotation_key(a.j, a.i, sheet), y));
            arc_json.push(ArcJson { id: a.arc, darts: [x, y], kind: ArcKind::Edge });
        }
        let vertices = (1..=n)
            .map(|v| {
                slots[v].sort_unstable();
                VertexJson { id: v as u32, cone: true, rotation: slots[v].iter().map(|s| s.1).collect() }
            })
            .collect();
        SphereMap::from_description(&MapJson { genus: self.genus, vertices, arcs: arc_json })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::sphere_area;
    use approx::assert_abs_diff_eq;

    fn expected_area(g: u32) -> f64 {
        sphere_area(g).unwrap()
    }

    #[test]
    fn genus_two_constants() {
        let m = RegularDoubledPolygonModel::new(2).unwrap();
        assert_abs_diff_eq!(m.circumradius(), 3f64.sqrt().acosh(), epsilon = 1e-12);
        assert_abs_diff_eq!(m.side_length(), 2f64.acosh(), epsilon = 1e-12);
        assert_abs_diff_eq!(m.side_length().cosh(), 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(m.circumradius(), 1.1462158347805889, epsilon = 1e-12);
        assert_abs_diff_eq!(m.area(), 2.0 * PI, epsilon = 1e-9);
    }

    #[test]
    fn right_angles_and_area() {
        for g in 2..=12 {
            let m = RegularDoubledPolygonModel::new(g).unwrap();
            for i in 1..=m.n_points() {
                assert_abs_diff_eq!(m.interior_angle(i), PI / 2.0, epsilon = 1e-9);
            }
            assert!((m.area() - expected_area(g)).abs() <= 1e-6 * expected_area(g));
            assert_abs_diff_eq!(m.pair_distance(1, 2), m.side_length(), epsilon = 1e-9);
        }
        let m = RegularDoubledPolygonModel::new(3).unwrap();
        assert_abs_diff_eq!(m.circumradius().cosh(), 2.414213562373095, epsilon = 1e-9);
    }

    #[test]
    fn rejects_small_genus() {
        assert!(RegularDoubledPolygonModel::new(1).is_err());
    }

    #[test]
    fn step_distances_match_closed_form_and_increase() {
        for g in 2..=8 {
            let m = RegularDoubledPolygonModel::new(g).unwrap();
            let n = m.n_points();
            for i in 1..=n {
                for j in 1..=n {
                    let steps = m.offset(i, j).min(m.offset(j, i));
                    assert_abs_diff_eq!(m.pair_distance(i, j), m.step_distance(steps), epsilon = 1e-9);
                    assert_abs_diff_eq!(m.pair_distance(i, j), m.pair_distance(j, i), epsilon = 1e-12);
                }
            }
            for s in 1..n / 2 {
                assert!(m.step_distance(s) < m.step_distance(s + 1));
            }
            for a in 1..=n {
                for b in 1..=n {
                    for c in 1..=n {
                        assert!(m.pair_distance(a, c) <= m.pair_distance(a, b) + m.pair_distance(b, c) + 1e-9);
                    }
                }
            }
        }
    }

    #[test]
    fn loop_radius_matches_reflection_and_sampling() {
        for g in 2..=6 {
            let m = RegularDoubledPolygonModel::new(g).unwrap();
            for i in 1..=m.n_points() {
                let p = m.point(i);
                let mut by_reflection = f64::INFINITY;
                let mut by_sampling = f64::INFINITY;
                for (a, b) in m.sides().filter(|&(a, b)| a != i && b != i) {
                    let (pa, pb) = (m.point(a), m.point(b));
                    let n = super::super::hyperboloid::line_normal(pa, pb);
                    by_reflection = by_reflection.min(p.distance(&p.reflect(&n)) / 2.0);
                    for k in 0..=4000 {
                        by_sampling = by_sampling.min(p.distance(&pa.lerp(pb, k as f64 / 4000.0)));
                    }
                }
                let r = m.loop_radius(i);
                assert_abs_diff_eq!(r, by_sampling, epsilon = 1e-6);
                assert!(r >= by_reflection - 1e-9);
                if g == 2 {
                    assert_abs_diff_eq!(r, m.side_length(), epsilon = 1e-9);
                }
                assert!(r > m.side_length() / 2.0);
            }
        }
    }
}
