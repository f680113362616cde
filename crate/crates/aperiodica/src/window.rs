//! Windows (acceptance domains) W in internal space: membership with an
//! exact inside/boundary/outside trichotomy where the arithmetic allows,
//! Haar volume, the Fourier transform of the indicator function, and the
//! inflation-admissibility set W_Q.

use crate::error::{Error, Result};
use crate::exact::{GoldenRational, Rational};
use crate::scheme::{CutProjectScheme, InternalPoint};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::f64::consts::PI;

/// Relative tolerance for boundary classification when only float
/// coordinates are available. Exact inputs never use it.
pub const BOUNDARY_EPS: f64 = 1e-12;

/// A scalar window endpoint: exact golden/rational, or a plain float.
#[derive(Debug, Clone, PartialEq)]
pub enum Scalar {
    Exact(GoldenRational),
    Approx(f64),
}

impl Scalar {
    pub fn golden(a: i64, b: i64) -> Self {
        Scalar::Exact(GoldenRational::from_integers(a, b))
    }

    pub fn value(&self) -> f64 {
        match self {
            Scalar::Exact(g) => g.value(),
            Scalar::Approx(x) => *x,
        }
    }

    pub fn exact(&self) -> Option<&GoldenRational> {
        match self {
            Scalar::Exact(g) => Some(g),
            Scalar::Approx(_) => None,
        }
    }
}

/// A coset rep + p^k Z_p^m of the standard compact subgroups.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coset {
    /// representative, reduced mod p^k componentwise into [0, p^k)
    pub rep: Vec<BigInt>,
    pub k: usize,
}

impl Coset {
    pub fn new(p: u64, rep: Vec<BigInt>, k: usize) -> Self {
        let m = BigInt::from(p).pow(k as u32);
        let rep = rep
            .into_iter()
            .map(|r| {
                let mut r = r % &m;
                if r.is_negative() {
                    r += &m;
                }
                r
            })
            .collect();
        Coset { rep, k }
    }

    /// Cosets of Z_p^m are nested or disjoint: self contains other iff
    /// other is finer and the reps agree at self's level.
    pub fn contains_coset(&self, p: u64, other: &Coset) -> bool {
        other.k >= self.k && self.contains_rep(p, &other.rep)
    }

    pub fn contains_rep(&self, p: u64, x: &[BigInt]) -> bool {
        let m = BigInt::from(p).pow(self.k as u32);
        self.rep
            .iter()
            .zip(x)
            .all(|(r, v)| ((v - r) % &m).is_zero())
    }
}

/// The window variants: interval, axis box, convex polygon, ball, and
/// p-adic coset union. All satisfy W1 structurally and are regular (W3):
/// their boundaries have Haar measure zero by construction.
#[derive(Debug, Clone)]
pub enum Window {
    Interval { a: Scalar, b: Scalar },
    Box { lo: Vec<f64>, hi: Vec<f64> },
    /// convex polygon in R^2, vertices in counterclockwise order
    Polytope { vertices: Vec<Vec<f64>> },
    Ball { center: Vec<f64>, radius: f64 },
    CosetUnion { p: u64, dim: usize, cosets: Vec<Coset> },
}

/// Membership trichotomy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Containment {
    Inside,
    Boundary,
    Outside,
}

/// Result of the W2 scan: lattice points whose star hits the boundary.
#[derive(Debug, Clone)]
pub struct GenericityReport {
    pub search_radius: f64,
    pub is_generic_up_to: bool,
    pub witnesses: Vec<Vec<i64>>,
}

impl Window {
    pub fn interval_golden(a: (i64, i64), b: (i64, i64)) -> Self {
        Window::Interval { a: Scalar::golden(a.0, a.1), b: Scalar::golden(b.0, b.1) }
    }

    /// Structural W1 check: nonempty, compact, closure of its interior.
    pub fn validate(&self) -> Result<()> {
        match self {
            Window::Interval { a, b } => {
                let ok = match (a.exact(), b.exact()) {
                    (Some(ea), Some(eb)) => ea < eb,
                    _ => a.value() < b.value(),
                };
                if !ok {
                    return Err(Error::DegenerateWindow("interval needs a < b".into()));
                }
            }
            Window::Box { lo, hi } => {
                if lo.len() != hi.len() || lo.is_empty() {
                    return Err(Error::DegenerateWindow("box needs matching lo/hi".into()));
                }
                if lo.iter().zip(hi).any(|(l, h)| l >= h) {
                    return Err(Error::DegenerateWindow("box needs lo < hi per axis".into()));
                }
            }
            Window::Polytope { vertices } => {
                if vertices.len() < 3 || vertices.iter().any(|v| v.len() != 2) {
                    return Err(Error::DegenerateWindow(
                        "polytope needs at least 3 planar vertices".into(),
                    ));
                }
                if polygon_area(vertices) <= 0.0 {
                    return Err(Error::DegenerateWindow(
                        "polygon must be counterclockwise and full-dimensional".into(),
                    ));
                }
            }
            Window::Ball { radius, .. } => {
                if *radius <= 0.0 {
                    return Err(Error::DegenerateWindow("ball needs radius > 0".into()));
                }
            }
            Window::CosetUnion { cosets, .. } => {
                if cosets.is_empty() {
                    return Err(Error::DegenerateWindow("coset union is empty".into()));
                }
            }
        }
        Ok(())
    }

    pub fn ambient_dim(&self) -> usize {
        match self {
            Window::Interval { .. } => 1,
            Window::Box { lo, .. } => lo.len(),
            Window::Polytope { .. } => 2,
            Window::Ball { center, .. } => center.len(),
            Window::CosetUnion { dim, .. } => *dim,
        }
    }

    /// Canonicalize a coset union: absorb nested cosets, drop duplicates.
    pub fn coset_union(p: u64, dim: usize, cosets: Vec<Coset>) -> Self {
        let mut sorted = cosets;
        sorted.sort_by_key(|c| c.k);
        let mut kept: Vec<Coset> = Vec::new();
        for c in sorted {
            if !kept.iter().any(|k| k.contains_coset(p, &c)) {
                kept.push(c);
            }
        }
        Window::CosetUnion { p, dim, cosets: kept }
    }

    /// Exact trichotomy for intervals against golden points and for
    /// coset unions; float comparison with BOUNDARY_EPS otherwise.
    pub fn contains(&self, u: &InternalPoint) -> Result<Containment> {
        if u.dim() != self.ambient_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim(),
                got: u.dim(),
            });
        }
        Ok(match (self, u) {
            (Window::Interval { a, b }, InternalPoint::Golden(v)) => {
                match (a.exact(), b.exact()) {
                    (Some(ea), Some(eb)) => {
                        let x = &v[0];
                        match (x.cmp(ea), x.cmp(eb)) {
                            (Ordering::Less, _) | (_, Ordering::Greater) => Containment::Outside,
                            (Ordering::Equal, _) | (_, Ordering::Equal) => Containment::Boundary,
                            _ => Containment::Inside,
                        }
                    }
                    _ => classify_interval_f64(a.value(), b.value(), v[0].value()),
                }
            }
            (Window::Interval { a, b }, InternalPoint::Real(v)) => {
                classify_interval_f64(a.value(), b.value(), v[0])
            }
            (Window::Box { lo, hi }, u) => {
                let v = u.to_floats().ok_or_else(|| {
                    Error::Unsupported("box window needs real coordinates".into())
                })?;
                let mut state = Containment::Inside;
                for i in 0..lo.len() {
                    match classify_interval_f64(lo[i], hi[i], v[i]) {
                        Containment::Outside => return Ok(Containment::Outside),
                        Containment::Boundary => state = Containment::Boundary,
                        Containment::Inside => {}
                    }
                }
                state
            }
            (Window::Polytope { vertices }, u) => {
                let v = u.to_floats().ok_or_else(|| {
                    Error::Unsupported("polytope window needs real coordinates".into())
                })?;
                classify_polygon(vertices, &v)
            }
            (Window::Ball { center, radius }, u) => {
                let v = u.to_floats().ok_or_else(|| {
                    Error::Unsupported("ball window needs real coordinates".into())
                })?;
                let d2: f64 = center
                    .iter()
                    .zip(&v)
                    .map(|(c, x)| (x - c) * (x - c))
                    .sum();
                let d = d2.sqrt();
                let eps = BOUNDARY_EPS * radius.max(1.0);
                if (d - radius).abs() <= eps {
                    Containment::Boundary
                } else if d < *radius {
                    Containment::Inside
                } else {
                    Containment::Outside
                }
            }
            (Window::CosetUnion { p, cosets, .. }, InternalPoint::PAdic(v)) => {
                // clopen sets: the truncated union has no boundary points;
                // the limit-point boundary of infinite unions is handled by
                // genericity_report
                let reps: Vec<BigInt> = v.iter().map(|x| x.representative().clone()).collect();
                if cosets.iter().any(|c| c.contains_rep(*p, &reps)) {
                    Containment::Inside
                } else {
                    Containment::Outside
                }
            }
            _ => {
                return Err(Error::Unsupported(
                    "point type does not match the window's internal space".into(),
                ))
            }
        })
    }

    /// Haar volume: Lebesgue measure for Euclidean variants, normalized
    /// Haar (mu(Z_p^m) = 1) for coset unions.
    pub fn haar_volume(&self) -> f64 {
        match self {
            Window::Interval { a, b } => b.value() - a.value(),
            Window::Box { lo, hi } => lo.iter().zip(hi).map(|(l, h)| h - l).product(),
            Window::Polytope { vertices } => polygon_area(vertices),
            Window::Ball { center, radius } => ball_volume(center.len(), *radius),
            Window::CosetUnion { p, dim, cosets } => cosets
                .iter()
                .map(|c| (*p as f64).powi(-((dim * c.k) as i32)))
                .sum(),
        }
    }

    /// Fourier transform of the indicator at a dual point: closed form
    /// for intervals, boxes, and coset unions; per-segment closed form
    /// for polygons; adaptive quadrature for balls (abs error <= 1e-9).
    pub fn indicator_ft(&self, xi: &DualPoint) -> Result<Complex64> {
        match (self, xi) {
            (Window::Interval { a, b }, DualPoint::Real(s)) => {
                Ok(interval_ft(a.value(), b.value(), s[0]))
            }
            (Window::Box { lo, hi }, DualPoint::Real(s)) => {
                let mut out = Complex64::new(1.0, 0.0);
                for i in 0..lo.len() {
                    out *= interval_ft(lo[i], hi[i], s[i]);
                }
                Ok(out)
            }
            (Window::Polytope { vertices }, DualPoint::Real(s)) => Ok(polygon_ft(vertices, s)),
            (Window::Ball { center, radius }, DualPoint::Real(s)) => {
                Ok(ball_ft(center, *radius, s))
            }
            (Window::CosetUnion { p, dim, cosets }, DualPoint::PAdic(xi)) => {
                if xi.len() != *dim {
                    return Err(Error::DimensionMismatch { expected: *dim, got: xi.len() });
                }
                Ok(coset_union_ft(*p, *dim, cosets, xi))
            }
            _ => Err(Error::Unsupported(
                "dual point type does not match the window's internal space".into(),
            )),
        }
    }

    /// Smallest |xi| beyond which w(xi) = |ft/vol|^2 stays below `floor`
    /// (used to bound dual-lattice enumeration).
    pub fn ft_decay_radius(&self, floor: f64) -> f64 {
        let vol = self.haar_volume();
        match self {
            Window::Interval { a, b } => {
                let l = b.value() - a.value();
                1.0 / (PI * l * floor.sqrt())
            }
            Window::Box { lo, hi } => {
                // some axis carries |xi_i| >= |xi|/sqrt(m); bound that sinc
                let m = lo.len() as f64;
                let lmin = lo
                    .iter()
                    .zip(hi)
                    .map(|(l, h)| h - l)
                    .fold(f64::INFINITY, f64::min);
                m.sqrt() / (PI * lmin * floor.sqrt())
            }
            _ => {
                // scan outward along the axes until the envelope drops
                let dim = self.ambient_dim();
                let mut r = 1.0;
                while r < 1e6 {
                    let mut worst: f64 = 0.0;
                    for axis in 0..dim {
                        for step in 1..=8 {
                            let mut s = vec![0.0; dim];
                            s[axis] = r * (1.0 + step as f64 / 8.0);
                            if let Ok(v) = self.indicator_ft(&DualPoint::Real(s)) {
                                worst = worst.max((v.norm() / vol).powi(2));
                            }
                        }
                    }
                    if worst < floor * 0.1 {
                        return r * 2.0;
                    }
                    r *= 2.0;
                }
                r
            }
        }
    }

    /// Float bounding box of the window (Euclidean variants).
    pub fn bounding_box(&self) -> Option<(Vec<f64>, Vec<f64>)> {
        match self {
            Window::Interval { a, b } => Some((vec![a.value()], vec![b.value()])),
            Window::Box { lo, hi } => Some((lo.clone(), hi.clone())),
            Window::Polytope { vertices } => {
                let mut lo = vertices[0].clone();
                let mut hi = vertices[0].clone();
                for v in vertices {
                    for i in 0..2 {
                        lo[i] = lo[i].min(v[i]);
                        hi[i] = hi[i].max(v[i]);
                    }
                }
                Some((lo, hi))
            }
            Window::Ball { center, radius } => Some((
                center.iter().map(|c| c - radius).collect(),
                center.iter().map(|c| c + radius).collect(),
            )),
            Window::CosetUnion { .. } => None,
        }
    }

    /// JSON echo of the window for output headers.
    pub fn descriptor_json(&self) -> serde_json::Value {
        match self {
            Window::Interval { a, b } => serde_json::json!({
                "variant": "interval",
                "a": match a { Scalar::Exact(g) => g.to_string(), Scalar::Approx(x) => x.to_string() },
                "b": match b { Scalar::Exact(g) => g.to_string(), Scalar::Approx(x) => x.to_string() },
            }),
            Window::Box { lo, hi } => serde_json::json!({ "variant": "box", "lo": lo, "hi": hi }),
            Window::Polytope { vertices } => {
                serde_json::json!({ "variant": "polytope", "vertices": vertices })
            }
            Window::Ball { center, radius } => {
                serde_json::json!({ "variant": "ball", "center": center, "radius": radius })
            }
            Window::CosetUnion { p, dim, cosets } => serde_json::json!({
                "variant": "coset_union",
                "p": p,
                "dim": dim,
                "cosets": cosets.iter().map(|c| serde_json::json!({
                    "rep": c.rep.iter().map(|r| r.to_string()).collect::<Vec<_>>(),
                    "k": c.k,
                })).collect::<Vec<_>>(),
            }),
        }
    }

    /// W2 scan: report lattice points with physical norm <= R whose star
    /// lies on the boundary. Exact for golden intervals; for coset-union
    /// windows the boundary candidate is the limit point supplied by the
    /// caller (see construct::robinson_window).
    pub fn genericity_report(
        &self,
        scheme: &CutProjectScheme,
        search_radius: f64,
    ) -> Result<GenericityReport> {
        let mut witnesses = Vec::new();
        crate::construct::for_each_lattice_point_in_ball(scheme, self, search_radius, |coords| {
            let star = scheme.star_map(coords);
            if let Ok(Containment::Boundary) = self.contains(&star) {
                witnesses.push(coords.to_vec());
            }
        })?;
        Ok(GenericityReport {
            search_radius,
            is_generic_up_to: witnesses.is_empty(),
            witnesses,
        })
    }
}

fn classify_interval_f64(a: f64, b: f64, x: f64) -> Containment {
    let eps = BOUNDARY_EPS * (a.abs().max(b.abs()).max(1.0));
    if (x - a).abs() <= eps || (x - b).abs() <= eps {
        Containment::Boundary
    } else if x > a && x < b {
        Containment::Inside
    } else {
        Containment::Outside
    }
}

fn classify_polygon(vertices: &[Vec<f64>], x: &[f64]) -> Containment {
    // convex CCW polygon: inside iff strictly left of every edge
    let n = vertices.len();
    let mut state = Containment::Inside;
    for i in 0..n {
        let a = &vertices[i];
        let b = &vertices[(i + 1) % n];
        let cross = (b[0] - a[0]) * (x[1] - a[1]) - (b[1] - a[1]) * (x[0] - a[0]);
        let scale = ((b[0] - a[0]).powi(2) + (b[1] - a[1]).powi(2)).sqrt().max(1.0);
        let eps = BOUNDARY_EPS * scale * (1.0 + x[0].abs() + x[1].abs());
        if cross < -eps {
            return Containment::Outside;
        }
        if cross.abs() <= eps {
            state = Containment::Boundary;
        }
    }
    state
}

fn polygon_area(vertices: &[Vec<f64>]) -> f64 {
    let n = vertices.len();
    let mut s = 0.0;
    for i in 0..n {
        let a = &vertices[i];
        let b = &vertices[(i + 1) % n];
        s += a[0] * b[1] - b[0] * a[1];
    }
    s / 2.0
}

/// Volume of the n-ball of radius r.
pub fn ball_volume(dim: usize, r: f64) -> f64 {
    // V_n = pi^{n/2} / Gamma(n/2 + 1) * r^n
    let n = dim as f64;
    let log_v = 0.5 * n * PI.ln() - ln_gamma(0.5 * n + 1.0) + n * r.ln();
    log_v.exp()
}

fn ln_gamma(x: f64) -> f64 {
    statrs::function::gamma::ln_gamma(x)
}

/// Transform of the indicator of [a, b] at frequency s:
/// l * e^{-2 pi i s c} * sinc(pi s l), c = midpoint, l = length.
fn interval_ft(a: f64, b: f64, s: f64) -> Complex64 {
    let l = b - a;
    let c = 0.5 * (a + b);
    let phase = Complex64::from_polar(1.0, -2.0 * PI * s * c);
    phase * l * sinc(PI * s * l)
}

fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-8 {
        1.0 - x * x / 6.0
    } else {
        x.sin() / x
    }
}

/// Polygon transform by slicing perpendicular to xi: the cross-section
/// chord length is piecewise linear in the slice parameter, so each
/// segment integrates in closed form.
fn polygon_ft(vertices: &[Vec<f64>], s: &[f64]) -> Complex64 {
    let smag = (s[0] * s[0] + s[1] * s[1]).sqrt();
    if smag < 1e-14 {
        return Complex64::new(polygon_area(vertices), 0.0);
    }
    let dir = [s[0] / smag, s[1] / smag];
    let mut params: Vec<f64> = vertices.iter().map(|v| v[0] * dir[0] + v[1] * dir[1]).collect();
    params.sort_by(|a, b| a.partial_cmp(b).unwrap());
    params.dedup_by(|a, b| (*a - *b).abs() < 1e-13);
    let mut out = Complex64::new(0.0, 0.0);
    for win in params.windows(2) {
        let (t0, t1) = (win[0], win[1]);
        if t1 - t0 < 1e-13 {
            continue;
        }
        let c0 = chord_length(vertices, &dir, t0 + 1e-9 * (t1 - t0));
        let c1 = chord_length(vertices, &dir, t1 - 1e-9 * (t1 - t0));
        // chord(t) = alpha + beta t on [t0, t1]
        let beta = (c1 - c0) / (t1 - t0);
        let alpha = c0 - beta * t0;
        out += linear_segment_ft(alpha, beta, t0, t1, smag);
    }
    out
}

fn chord_length(vertices: &[Vec<f64>], dir: &[f64; 2], t: f64) -> f64 {
    // intersect polygon boundary with the line x . dir = t, measure the
    // span along the perpendicular direction
    let perp = [-dir[1], dir[0]];
    let n = vertices.len();
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        let a = &vertices[i];
        let b = &vertices[(i + 1) % n];
        let ta = a[0] * dir[0] + a[1] * dir[1];
        let tb = b[0] * dir[0] + b[1] * dir[1];
        if (ta - t) * (tb - t) > 0.0 {
            continue;
        }
        if (tb - ta).abs() < 1e-15 {
            continue;
        }
        let lam = (t - ta) / (tb - ta);
        let px = a[0] + lam * (b[0] - a[0]);
        let py = a[1] + lam * (b[1] - a[1]);
        let u = px * perp[0] + py * perp[1];
        lo = lo.min(u);
        hi = hi.max(u);
    }
    if hi > lo {
        hi - lo
    } else {
        0.0
    }
}

/// Integral of (alpha + beta t) e^{-2 pi i w t} dt over [t0, t1].
fn linear_segment_ft(alpha: f64, beta: f64, t0: f64, t1: f64, w: f64) -> Complex64 {
    let om = 2.0 * PI * w;
    let iom = Complex64::new(0.0, -om);
    let e = |t: f64| Complex64::from_polar(1.0, -om * t);
    // antiderivative of (alpha + beta t) e^{iom t}: ((alpha + beta t)/iom - beta/iom^2) e^{iom t}
    let f = |t: f64| (Complex64::new(alpha + beta * t, 0.0) / iom - beta / (iom * iom)) * e(t);
    f(t1) - f(t0)
}

/// Ball transform by slicing perpendicular to xi with adaptive Simpson
/// quadrature on the cross-section profile (abs error <= 1e-9).
fn ball_ft(center: &[f64], radius: f64, s: &[f64]) -> Complex64 {
    let dim = center.len();
    let smag = (s.iter().map(|x| x * x).sum::<f64>()).sqrt();
    if smag < 1e-14 {
        return Complex64::new(ball_volume(dim, radius), 0.0);
    }
    let phase = Complex64::from_polar(
        1.0,
        -2.0 * PI * s.iter().zip(center).map(|(a, b)| a * b).sum::<f64>(),
    );
    if dim == 1 {
        return phase * 2.0 * radius * sinc(2.0 * PI * smag * radius);
    }
    // cross-section at offset t: (dim-1)-ball of radius sqrt(r^2 - t^2)
    let cs = |t: f64| ball_volume(dim - 1, (radius * radius - t * t).max(0.0).sqrt());
    let re = adaptive_simpson(
        &|t| cs(t) * (2.0 * PI * smag * t).cos(),
        -radius,
        radius,
        1e-10,
        24,
    );
    // odd part vanishes by symmetry
    phase * Complex64::new(re, 0.0)
}

/// Adaptive Simpson quadrature of f over [a, b].
pub fn integrate(f: &dyn Fn(f64) -> f64, a: f64, b: f64, eps: f64) -> f64 {
    adaptive_simpson(f, a, b, eps, 30)
}

fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, eps: f64, depth: u32) -> f64 {
    let c = 0.5 * (a + b);
    let (fa, fb, fc) = (f(a), f(b), f(c));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fc + fb);
    simpson_rec(f, a, b, fa, fb, fc, whole, eps, depth)
}

#[allow(clippy::too_many_arguments)]
fn simpson_rec(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fb: f64,
    fc: f64,
    whole: f64,
    eps: f64,
    depth: u32,
) -> f64 {
    let c = 0.5 * (a + b);
    let d = 0.5 * (a + c);
    let e = 0.5 * (c + b);
    let (fd, fe) = (f(d), f(e));
    let left = (c - a) / 6.0 * (fa + 4.0 * fd + fc);
    let right = (b - c) / 6.0 * (fc + 4.0 * fe + fb);
    if depth == 0 || (left + right - whole).abs() <= 15.0 * eps {
        left + right + (left + right - whole) / 15.0
    } else {
        simpson_rec(f, a, c, fa, fc, fd, left, eps / 2.0, depth - 1)
            + simpson_rec(f, c, b, fc, fb, fe, right, eps / 2.0, depth - 1)
    }
}

/// Character sum over a coset union: the coset a + p^k Z_p^m contributes
/// p^{-mk} e^{2 pi i {xi . a}} when every component of xi kills p^k Z_p
/// (denominator exponent <= k), and 0 otherwise.
fn coset_union_ft(p: u64, dim: usize, cosets: &[Coset], xi: &[Rational]) -> Complex64 {
    let exps: Vec<i64> = xi
        .iter()
        .map(|x| denominator_exponent(x, p))
        .collect();
    let emax = exps.iter().copied().max().unwrap_or(0);
    let mut out = Complex64::new(0.0, 0.0);
    for c in cosets {
        if emax > c.k as i64 {
            continue;
        }
        // {xi . a} mod 1
        let mut frac = Rational::zero();
        for (x, a) in xi.iter().zip(&c.rep) {
            frac += x * Rational::from(a.clone());
        }
        let frac = frac.fract().to_f64().unwrap_or(0.0);
        out += Complex64::from_polar((p as f64).powi(-((dim * c.k) as i32)), 2.0 * PI * frac);
    }
    out
}

/// Exponent e with denominator = p^e (0 for p-adic integers); panics on
/// non p-power denominators, which never arise from dual enumeration.
fn denominator_exponent(x: &Rational, p: u64) -> i64 {
    let mut d = x.denom().abs();
    let p = BigInt::from(p);
    let one = BigInt::from(1);
    let mut e = 0;
    while d > one {
        let (q, r) = num_integer::Integer::div_rem(&d, &p);
        assert!(r.is_zero(), "dual point denominator is not a p-power");
        d = q;
        e += 1;
    }
    e
}

///// A point of the dual group: a real frequency vector, or (for Z_p^m) a
/// vector of p-power-denominator rationals taken mod 1.
#[derive(Debug, Clone, PartialEq)]
pub enum DualPoint {
    Real(Vec<f64>),
    PAdic(Vec<Rational>),
}

/// A contraction factor Q* acting on the internal space.
#[derive(Debug, Clone)]
pub enum Contraction {
    Golden(GoldenRational),
    Float(f64),
}

impl Contraction {
    pub fn value(&self) -> f64 {
        match self {
            Contraction::Golden(g) => g.value(),
            Contraction::Float(x) => *x,
        }
    }

    fn is_contractive(&self) -> bool {
        match self {
            Contraction::Golden(g) => {
                let one = GoldenRational::from_integers(1, 0);
                g.abs() < one
            }
            Contraction::Float(x) => x.abs() < 1.0,
        }
    }
}

/// The admissible translation window W_Q = { u : Q* W + u subset W } for
/// a contractive scalar Q*. Exact golden interval arithmetic when both
/// the window endpoints and Q* are exact.
pub fn window_q(w: &Window, qstar: &Contraction) -> Result<Window> {
    if !qstar.is_contractive() {
        return Err(Error::NotContractive);
    }
    match w {
        Window::Interval { a, b } => match (a.exact(), b.exact(), qstar) {
            (Some(ea), Some(eb), Contraction::Golden(q)) => {
                let qa = q.clone() * ea.clone();
                let qb = q.clone() * eb.clone();
                let (qmin, qmax) = if qa < qb { (qa, qb) } else { (qb, qa) };
                let lo = ea.clone() - qmin;
                let hi = eb.clone() - qmax;
                if lo >= hi {
                    return Err(Error::Incompatible);
                }
                Ok(Window::Interval { a: Scalar::Exact(lo), b: Scalar::Exact(hi) })
            }
            _ => {
                let (av, bv, q) = (a.value(), b.value(), qstar.value());
                let (qmin, qmax) = ((q * av).min(q * bv), (q * av).max(q * bv));
                let (lo, hi) = (av - qmin, bv - qmax);
                if lo >= hi {
                    return Err(Error::Incompatible);
                }
                Ok(Window::Interval { a: Scalar::Approx(lo), b: Scalar::Approx(hi) })
            }
        },
        Window::Ball { center, radius } => {
            let q = qstar.value();
            // Q* W = ball(q c, |q| r); W_Q = ball(c - q c, (1 - |q|) r)
            let r = (1.0 - q.abs()) * radius;
            if r <= 0.0 {
                return Err(Error::Incompatible);
            }
            Ok(Window::Ball {
                center: center.iter().map(|c| c - q * c).collect(),
                radius: r,
            })
        }
        _ => Err(Error::Unsupported(
            "W_Q is implemented for intervals and balls only".into(),
        )),
    }
}

/// Intersect two coset-union windows (same p, same dim). Two cosets of
/// Z_p^m are nested or disjoint, so the intersection is the finer coset
/// when the reps agree at the coarser level.
pub fn intersect_coset_unions(p: u64, dim: usize, a: &[Coset], b: &[Coset]) -> Vec<Coset> {
    let mut out = Vec::new();
    for ca in a {
        for cb in b {
            let (coarse, fine) = if ca.k <= cb.k { (ca, cb) } else { (cb, ca) };
            if coarse.contains_rep(p, &fine.rep) {
                out.push(fine.clone());
            }
        }
    }
    match Window::coset_union(p, dim, out) {
        Window::CosetUnion { cosets, .. } => cosets,
        _ => unreachable!(),
    }
}

// ---------------------------------------------------------------------------
// Descriptors (JSON external interface)
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CosetDescriptor {
    pub rep: Vec<i64>,
    pub k: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "snake_case")]
pub enum WindowDescriptor {
    Interval { a: String, b: String },
    Box { lo: Vec<f64>, hi: Vec<f64> },
    Polytope { vertices: Vec<Vec<f64>> },
    Ball { center: Vec<f64>, radius: f64 },
    CosetUnion { p: u64, dim: usize, cosets: Vec<CosetDescriptor> },
}

fn parse_scalar(s: &str) -> Result<Scalar> {
    let t = s.trim();
    if t.contains("tau") {
        return crate::scheme::parse_golden_rational(t)
            .map(Scalar::Exact)
            .ok_or_else(|| Error::Config(format!("unparseable golden endpoint {t:?}")));
    }
    if let Some(g) = crate::scheme::parse_golden_rational(t) {
        return Ok(Scalar::Exact(g));
    }
    t.parse::<f64>()
        .map(Scalar::Approx)
        .map_err(|_| Error::Config(format!("unparseable endpoint {t:?}")))
}

pub fn window_from_descriptor(desc: &WindowDescriptor) -> Result<Window> {
    let w = match desc {
        WindowDescriptor::Interval { a, b } => Window::Interval {
            a: parse_scalar(a)?,
            b: parse_scalar(b)?,
        },
        WindowDescriptor::Box { lo, hi } => Window::Box { lo: lo.clone(), hi: hi.clone() },
        WindowDescriptor::Polytope { vertices } => Window::Polytope { vertices: vertices.clone() },
        WindowDescriptor::Ball { center, radius } => Window::Ball {
            center: center.clone(),
            radius: *radius,
        },
        WindowDescriptor::CosetUnion { p, dim, cosets } => {
            crate::exact::padic::check_prime(*p)?;
            Window::coset_union(
                *p,
                *dim,
                cosets
                    .iter()
                    .map(|c| Coset::new(*p, c.rep.iter().map(|&x| BigInt::from(x)).collect(), c.k))
                    .collect(),
            )
        }
    };
    w.validate()?;
    Ok(w)
}
