//! Points of the hyperbolic plane on the upper sheet of `−x₀² + x₁² + x₂² = −1`.

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point(pub [f64; 3]);

pub fn minkowski(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    -a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Unit spacelike normal of the geodesic through `a` and `b`.
pub fn line_normal(a: &Point, b: &Point) -> [f64; 3] {
    let (a, b) = (a.0, b.0);
    let c = [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]];
    let n = [-c[0], c[1], c[2]];
    let len = minkowski(&n, &n).sqrt();
    [n[0] / len, n[1] / len, n[2] / len]
}

impl Point {
    pub fn polar(r: f64, theta: f64) -> Self {
        Point([r.cosh(), r.sinh() * theta.cos(), r.sinh() * theta.sin()])
    }

    pub fn distance(&self, other: &Point) -> f64 {
        (-minkowski(&self.0, &other.0)).max(1.0).acosh()
    }

    /// Mirror image across the geodesic with unit normal `n`.
    pub fn reflect(&self, n: &[f64; 3]) -> Point {
        let t = 2.0 * minkowski(&self.0, n);
        Point([self.0[0] - t * n[0], self.0[1] - t * n[1], self.0[2] - t * n[2]])
    }

    /// Distance to the geodesic segment `[a, b]`.
    pub fn segment_distance(&self, a: &Point, b: &Point) -> f64 {
        let n = line_normal(a, b);
        let h = minkowski(&self.0, &n);
        let f = [self.0[0] - h * n[0], self.0[1] - h * n[1], self.0[2] - h * n[2]];
        let scale = (-minkowski(&f, &f)).sqrt();
        let foot = Point([f[0] / scale, f[1] / scale, f[2] / scale]);
        let along = foot.distance(a) + foot.distance(b);
        if along <= a.distance(b) * (1.0 + 1e-12) + 1e-12 {
            h.abs().asinh()
        } else {
            self.distance(a).min(self.distance(b))
        }
    }

    /// Angle at `self` between the geodesics towards `a` and `b`.
    pub fn angle(&self, a: &Point, b: &Point) -> f64 {
        let tangent = |q: &Point| {
            let c = minkowski(&self.0, &q.0);
            [q.0[0] + c * self.0[0], q.0[1] + c * self.0[1], q.0[2] + c * self.0[2]]
        };
        let (ta, tb) = (tangent(a), tangent(b));
        let cos = minkowski(&ta, &tb) / (minkowski(&ta, &ta) * minkowski(&tb, &tb)).sqrt();
        cos.clamp(-1.0, 1.0).acos()
    }

    /// Point at fraction `t` along the geodesic from `self` to `other`.
    pub fn lerp(&self, other: &Point, t: f64) -> Point {
        let d = self.distance(other);
        if d == 0.0 {
            return *self;
        }
        let (wa, wb) = (((1.0 - t) * d).sinh() / d.sinh(), (t * d).sinh() / d.sinh());
        Point([
            wa * self.0[0] + wb * other.0[0],
            wa * self.0[1] + wb * other.0[1],
            wa * self.0[2] + wb * other.0[2],
        ])
    }
}
