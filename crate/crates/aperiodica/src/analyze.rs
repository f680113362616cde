//! Geometric and dynamical diagnostics on finite point-set samples:
//! Delone radii, the Meyer difference-set check, patch census and
//! repetitivity, Weyl uniform distribution, self-similarities with
//! their invariant densities, the patch metric, and the torus beta-map.

use crate::construct::{enumerate_model_set, min_gap_of, PointSet};
use crate::error::{Error, Result};
use crate::exact::{GoldenInt, GoldenRational};
use crate::scheme::{CutProjectScheme, InternalPoint, LatticeCoords};
use crate::window::{
    intersect_coset_unions, window_q, Containment, Contraction, Coset, Window,
};
use num_bigint::BigInt;
use statrs::distribution::{ChiSquared, ContinuousCDF};
use std::collections::{HashMap, HashSet};

// ---------------------------------------------------------------------------
// Delone radii
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy)]
pub struct DeloneRadii {
    /// packing radius: half the minimum pairwise gap
    pub packing: f64,
    /// covering radius over the collar-trimmed interior
    pub covering: f64,
}

/// Uniform grid over the points for nearest-distance queries.
struct NeighborGrid<'a> {
    cell: f64,
    dim: usize,
    map: HashMap<Vec<i64>, Vec<usize>>,
    pts: &'a [Vec<f64>],
}

impl<'a> NeighborGrid<'a> {
    fn new(pts: &'a [Vec<f64>], cell: f64) -> Self {
        let dim = pts[0].len();
        let mut map: HashMap<Vec<i64>, Vec<usize>> = HashMap::new();
        for (i, p) in pts.iter().enumerate() {
            let key: Vec<i64> = p.iter().map(|&x| (x / cell).floor() as i64).collect();
            map.entry(key).or_default().push(i);
        }
        NeighborGrid { cell, dim, map, pts }
    }

    fn nearest_distance(&self, q: &[f64]) -> f64 {
        let base: Vec<i64> = q.iter().map(|&x| (x / self.cell).floor() as i64).collect();
        let mut best = f64::INFINITY;
        let mut ring = 0i64;
        loop {
            let mut found_cell = false;
            let mut key = vec![0i64; self.dim];
            self.scan_ring(&base, ring, 0, &mut key, q, &mut best, &mut found_cell);
            // points in farther rings are at least (ring) * cell away
            if best <= ring as f64 * self.cell {
                return best;
            }
            if ring as f64 * self.cell > 1e6 {
                return best;
            }
            ring += 1;
            let _ = found_cell;
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn scan_ring(
        &self,
        base: &[i64],
        ring: i64,
        axis: usize,
        key: &mut Vec<i64>,
        q: &[f64],
        best: &mut f64,
        found: &mut bool,
    ) {
        if axis == self.dim {
            if key.iter().zip(base).map(|(k, b)| (k - b).abs()).max() != Some(ring) {
                return;
            }
            if let Some(idx) = self.map.get(key) {
                *found = true;
                for &i in idx {
                    let d2: f64 = self.pts[i]
                        .iter()
                        .zip(q)
                        .map(|(a, b)| (a - b) * (a - b))
                        .sum();
                    *best = best.min(d2.sqrt());
                }
            }
            return;
        }
        for off in -ring..=ring {
            key[axis] = base[axis] + off;
            self.scan_ring(base, ring, axis + 1, key, q, best, found);
        }
    }
}

fn covering_radius(pts: &[Vec<f64>], interior: f64, step: f64) -> f64 {
    let dim = pts[0].len();
    let grid = NeighborGrid::new(pts, step.max(1e-9) * 2.0);
    let n = (interior / step).floor() as i64;
    let mut worst: f64 = 0.0;
    let mut idx = vec![-n; dim];
    loop {
        let q: Vec<f64> = idx.iter().map(|&i| i as f64 * step).collect();
        if crate::linalg::norm(&q) <= interior {
            worst = worst.max(grid.nearest_distance(&q));
        }
        let mut carry = 0;
        loop {
            if carry == dim {
                return worst;
            }
            idx[carry] += 1;
            if idx[carry] <= n {
                break;
            }
            idx[carry] = -n;
            carry += 1;
        }
    }
}

/// (r, R): each ball of radius r holds at most one point; each ball of
/// radius R at least one. The covering mesh excludes a boundary collar
/// (estimated, then refined once) to avoid edge bias.
pub fn delone_radii(ps: &PointSet) -> Result<DeloneRadii> {
    if ps.len() < 2 {
        return Err(Error::TooFewPoints(ps.len()));
    }
    let pts: Vec<Vec<f64>> = ps.points.iter().map(|r| r.physical.clone()).collect();
    let gap = min_gap_of(&pts).unwrap();
    let packing = gap / 2.0;
    let d = ps.scheme.d;
    let mean_spacing =
        (crate::window::ball_volume(d, ps.region_radius) / ps.len() as f64).powf(1.0 / d as f64);
    let step = (gap / 2.0).min(mean_spacing / 2.0);
    // pass 1 with a generous collar, pass 2 with the estimate
    let collar = 4.0 * mean_spacing;
    let first = covering_radius(&pts, (ps.region_radius - collar).max(step), step);
    let covering = covering_radius(
        &pts,
        (ps.region_radius - 1.5 * first).max(step),
        step,
    );
    Ok(DeloneRadii { packing, covering })
}

// ---------------------------------------------------------------------------
// Meyer check
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct MeyerReport {
    /// minimum positive gap of the difference set
    pub min_gap: f64,
    /// exact value when the scheme is golden and one-dimensional
    pub exact_gap: Option<GoldenRational>,
    /// distinct difference vectors considered
    pub difference_count: usize,
}

/// Min positive gap of Lambda - Lambda (uniform discreteness of the
/// difference set). Exact golden arithmetic for 1-d golden schemes.
pub fn meyer_check(ps: &PointSet) -> Result<MeyerReport> {
    if ps.len() < 2 {
        return Err(Error::TooFewPoints(ps.len()));
    }
    if ps.scheme.d == 1 && ps.scheme.physical_golden(&ps.points[0].coords).is_some() {
        // exact route: differences as elements of Z[tau]
        let vals: Vec<GoldenRational> = ps
            .points
            .iter()
            .map(|r| ps.scheme.physical_golden(&r.coords).unwrap()[0].clone())
            .collect();
        let mut diffs: HashSet<(BigInt, BigInt)> = HashSet::new();
        for i in 0..vals.len() {
            for j in 0..vals.len() {
                if i == j {
                    continue;
                }
                let d = vals[i].clone() - vals[j].clone();
                diffs.insert((d.num.a.clone(), d.num.b.clone()));
            }
        }
        let mut sorted: Vec<GoldenRational> = diffs
            .iter()
            .map(|(a, b)| GoldenRational::from_int(GoldenInt { a: a.clone(), b: b.clone() }))
            .collect();
        sorted.sort();
        let mut best: Option<GoldenRational> = None;
        for w in sorted.windows(2) {
            let gap = w[1].clone() - w[0].clone();
            if !gap.is_zero() && best.as_ref().map_or(true, |b| &gap < b) {
                best = Some(gap);
            }
        }
        let exact = best.ok_or(Error::TooFewPoints(1))?;
        Ok(MeyerReport {
            min_gap: exact.value(),
            exact_gap: Some(exact),
            difference_count: sorted.len(),
        })
    } else {
        // float route: deduplicate difference vectors, then min gap
        let mut seen: HashSet<Vec<i64>> = HashSet::new();
        let mut diffs: Vec<Vec<f64>> = Vec::new();
        for i in 0..ps.len() {
            for j in 0..ps.len() {
                if i == j {
                    continue;
                }
                let d: Vec<f64> = ps.points[i]
                    .physical
                    .iter()
                    .zip(&ps.points[j].physical)
                    .map(|(a, b)| a - b)
                    .collect();
                let key: Vec<i64> = d.iter().map(|&x| (x * 1e9).round() as i64).collect();
                if seen.insert(key) {
                    diffs.push(d);
                }
            }
        }
        let min_gap = min_gap_of(&diffs).ok_or(Error::TooFewPoints(diffs.len()))?;
        Ok(MeyerReport { min_gap, exact_gap: None, difference_count: diffs.len() })
    }
}

// ---------------------------------------------------------------------------
// Patch census / repetitivity
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct PatchClass {
    /// lattice-coordinate offsets of the patch, anchored at the point
    pub offsets: Vec<LatticeCoords>,
    pub count: usize,
    /// one anchor where this class occurs
    pub exemplar: LatticeCoords,
}

#[derive(Debug, Clone)]
pub struct PatchCensus {
    pub radius: f64,
    pub classes: Vec<PatchClass>,
    pub anchors: usize,
}

fn patch_key(ps: &PointSet, anchor: usize, r: f64) -> Vec<LatticeCoords> {
    let a = &ps.points[anchor];
    let mut key: Vec<LatticeCoords> = Vec::new();
    for p in &ps.points {
        let d2: f64 = p
            .physical
            .iter()
            .zip(&a.physical)
            .map(|(x, y)| (x - y) * (x - y))
            .sum();
        if d2.sqrt() <= r + 1e-9 {
            key.push(p.coords.iter().zip(&a.coords).map(|(c, b)| c - b).collect());
        }
    }
    key.sort();
    key
}

/// Translation classes (exact, via lattice coordinates) of the patches
/// Lambda cap B_r(x), anchored at interior points x.
pub fn patch_census(ps: &PointSet, r: f64) -> Result<PatchCensus> {
    if r <= 0.0 {
        return Err(Error::InvalidParameter("patch radius must be positive".into()));
    }
    let mut classes: HashMap<Vec<LatticeCoords>, (usize, LatticeCoords)> = HashMap::new();
    let mut anchors = 0;
    for i in 0..ps.len() {
        if crate::linalg::norm(&ps.points[i].physical) > ps.region_radius - r {
            continue;
        }
        anchors += 1;
        let key = patch_key(ps, i, r);
        let e = classes.entry(key).or_insert_with(|| (0, ps.points[i].coords.clone()));
        e.0 += 1;
    }
    let mut classes: Vec<PatchClass> = classes
        .into_iter()
        .map(|(offsets, (count, exemplar))| PatchClass { offsets, count, exemplar })
        .collect();
    classes.sort_by(|a, b| b.count.cmp(&a.count).then(a.offsets.cmp(&b.offsets)));
    Ok(PatchCensus { radius: r, classes, anchors })
}

/// Smallest tested radius such that every interior ball of that radius
/// contains a translate of the patch (sample-based upper bound).
pub fn repetitivity_radius(ps: &PointSet, patch: &[LatticeCoords], r: f64) -> Result<f64> {
    let mut occurrences: Vec<Vec<f64>> = Vec::new();
    let want: Vec<LatticeCoords> = {
        let mut w = patch.to_vec();
        w.sort();
        w
    };
    for i in 0..ps.len() {
        if crate::linalg::norm(&ps.points[i].physical) > ps.region_radius - r {
            continue;
        }
        if patch_key(ps, i, r) == want {
            occurrences.push(ps.points[i].physical.clone());
        }
    }
    if occurrences.is_empty() {
        return Err(Error::PatchAbsent);
    }
    let d = ps.scheme.d;
    let mean_spacing = (crate::window::ball_volume(d, ps.region_radius) / ps.len() as f64)
        .powf(1.0 / d as f64);
    let step = mean_spacing / 2.0;
    let collar = 4.0 * mean_spacing * (ps.len() as f64 / occurrences.len() as f64).powf(1.0 / d as f64);
    let interior = (ps.region_radius - r - collar).max(step);
    Ok(covering_radius(&occurrences, interior, step))
}

// ---------------------------------------------------------------------------
// Weyl uniform distribution
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct WeylReport {
    pub bins: usize,
    pub n: usize,
    pub chi_square: f64,
    pub p_value: f64,
    /// 1-d star discrepancy against the uniform law on W
    pub discrepancy: f64,
}

fn interval_bounds(w: &Window) -> Result<(f64, f64)> {
    match w {
        Window::Interval { a, b } => Ok((a.value(), b.value())),
        _ => Err(Error::Unsupported("interval window required".into())),
    }
}

fn star_values_1d(ps: &PointSet) -> Result<Vec<f64>> {
    (0..ps.len())
        .map(|i| {
            ps.star(i)
                .to_floats()
                .and_then(|v| v.first().copied())
                .ok_or_else(|| Error::Unsupported("1-d Euclidean stars required".into()))
        })
        .collect()
}

/// Chi-square over equal-volume bins of Lambda_R^* plus the empirical
/// star discrepancy, for interval windows.
pub fn weyl_test(ps: &PointSet, window: &Window, bins: usize) -> Result<WeylReport> {
    let (a, b) = interval_bounds(window)?;
    let mut stars = star_values_1d(ps)?;
    let n = stars.len();
    if n < bins * 5 {
        return Err(Error::TooFewPoints(n));
    }
    let len = b - a;
    let mut counts = vec![0usize; bins];
    for &u in &stars {
        let idx = (((u - a) / len) * bins as f64).floor() as i64;
        counts[idx.clamp(0, bins as i64 - 1) as usize] += 1;
    }
    let expected = n as f64 / bins as f64;
    let chi_square: f64 = counts
        .iter()
        .map(|&c| (c as f64 - expected).powi(2) / expected)
        .sum();
    let dist = ChiSquared::new((bins - 1) as f64)
        .map_err(|e| Error::InvalidParameter(e.to_string()))?;
    let p_value = 1.0 - dist.cdf(chi_square);
    // star discrepancy of the normalized values
    stars.sort_by(|x, y| x.partial_cmp(y).unwrap());
    let mut discrepancy: f64 = 0.0;
    for (i, &u) in stars.iter().enumerate() {
        let f = ((u - a) / len).clamp(0.0, 1.0);
        discrepancy = discrepancy
            .max(((i + 1) as f64 / n as f64 - f).abs())
            .max((f - i as f64 / n as f64).abs());
    }
    Ok(WeylReport { bins, n, chi_square, p_value, discrepancy })
}

/// Weyl average: (1/card) sum f*(x*) against (1/vol W) int_W f*, both
/// reported with their gap.
pub fn weyl_average(
    ps: &PointSet,
    window: &Window,
    f: &dyn Fn(f64) -> f64,
) -> Result<(f64, f64, f64)> {
    let (a, b) = interval_bounds(window)?;
    let stars = star_values_1d(ps)?;
    if stars.is_empty() {
        return Err(Error::TooFewPoints(0));
    }
    let avg = stars.iter().map(|&u| f(u)).sum::<f64>() / stars.len() as f64;
    let integral = crate::window::integrate(&|u| f(u), a, b, 1e-12) / (b - a);
    Ok((avg, integral, (avg - integral).abs()))
}

/// Fraction of the sample's stars lying in a p-adic coset.
pub fn coset_fraction(ps: &PointSet, coset: &Coset) -> Result<f64> {
    if ps.is_empty() {
        return Err(Error::TooFewPoints(0));
    }
    let mut hits = 0usize;
    for i in 0..ps.len() {
        match ps.star(i) {
            InternalPoint::PAdic(v) => {
                let p = v[0].prime();
                let reps: Vec<BigInt> = v.iter().map(|x| x.representative().clone()).collect();
                if coset.contains_rep(p, &reps) {
                    hits += 1;
                }
            }
            _ => return Err(Error::Unsupported("p-adic stars required".into())),
        }
    }
    Ok(hits as f64 / ps.len() as f64)
}

// ---------------------------------------------------------------------------
// Self-similarity
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct SelfSimilarity {
    /// the physical similarity factor Q (scalar in Z[tau])
    pub q: GoldenInt,
    /// induced internal contraction Q* (the Galois conjugate)
    pub qstar: GoldenRational,
    /// action of Q on the lattice basis (unimodular integer matrix)
    pub matrix: Vec<Vec<i64>>,
    pub window_q: Window,
    /// T_Q cap B_s: admissible translations
    pub t_q: PointSet,
}

/// Build the self-similarity data for a scalar Q in Z[tau]: check that
/// Q L = L via an exact unimodular matrix on the basis, that |Q| > 1
/// and |Q*| < 1, compute W_Q and enumerate T_Q on the ball of radius s.
pub fn find_self_similarity(
    scheme: &CutProjectScheme,
    window: &Window,
    q: &GoldenInt,
    s: f64,
) -> Result<SelfSimilarity> {
    let one = GoldenRational::from_integers(1, 0);
    let qr = GoldenRational::from_int(q.clone());
    if qr.abs() <= one {
        return Err(Error::InvalidParameter(
            "self-similarity needs an expansive Q (|q| > 1)".into(),
        ));
    }
    let matrix = golden_scalar_action(scheme, q)?;
    let qstar = qr.conjugate();
    let wq = window_q(window, &Contraction::Golden(qstar.clone()))?;
    let t_q = enumerate_model_set(scheme, &wq, s)?;
    Ok(SelfSimilarity { q: q.clone(), qstar, matrix, window_q: wq, t_q })
}

/// The integer matrix M with q . gen_j = sum_i M[i][j] gen_i, verified
/// exactly; errors when multiplication by q does not preserve L or the
/// matrix is not unimodular.
fn golden_scalar_action(scheme: &CutProjectScheme, q: &GoldenInt) -> Result<Vec<Vec<i64>>> {
    let e = scheme
        .embed_matrix()
        .ok_or(Error::NotLatticeAutomorphism)?;
    if e.len() != scheme.rank {
        return Err(Error::NotLatticeAutomorphism);
    }
    let inv = crate::linalg::invert(&e).ok_or(Error::NotLatticeAutomorphism)?;
    let qv = q.value();
    let qsv = GoldenRational::from_int(q.conjugate()).value();
    let mut cols: Vec<Vec<i64>> = Vec::with_capacity(scheme.rank);
    for j in 0..scheme.rank {
        let mut unit = vec![0i64; scheme.rank];
        unit[j] = 1;
        // target embedding of q . gen_j: multiply physical part by q,
        // internal part by q*
        let p = scheme.physical(&unit);
        let s = scheme
            .star_floats(&unit)
            .ok_or(Error::NotLatticeAutomorphism)?;
        let mut target: Vec<f64> = p.iter().map(|x| x * qv).collect();
        target.extend(s.iter().map(|x| x * qsv));
        let coeffs = crate::linalg::mat_vec(&inv, &target);
        let mut col = Vec::with_capacity(scheme.rank);
        for c in coeffs {
            let r = c.round();
            if (c - r).abs() > 1e-6 {
                return Err(Error::NotLatticeAutomorphism);
            }
            col.push(r as i64);
        }
        cols.push(col);
    }
    // exact verification in golden arithmetic when available
    for (j, col) in cols.iter().enumerate() {
        let mut unit = vec![0i64; scheme.rank];
        unit[j] = 1;
        if let Some(pj) = scheme.physical_golden(&unit) {
            let lhs: Vec<GoldenRational> = pj
                .iter()
                .map(|g| g.clone() * GoldenRational::from_int(q.clone()))
                .collect();
            let rhs = scheme
                .physical_golden(col)
                .expect("golden basis");
            if lhs != rhs {
                return Err(Error::NotLatticeAutomorphism);
            }
        }
    }
    let det = crate::exact::intmat::determinant(
        &cols
            .iter()
            .map(|c| c.iter().map(|&x| BigInt::from(x)).collect())
            .collect::<Vec<_>>(),
    );
    if det != BigInt::from(1) && det != BigInt::from(-1) {
        return Err(Error::NotLatticeAutomorphism);
    }
    Ok(cols)
}

/// Exact check of Q Lambda + v subset Lambda on a sample: returns the
/// number of failures (must be zero for correct T_Q elements).
pub fn verify_self_similarity(
    scheme: &CutProjectScheme,
    window: &Window,
    sim: &SelfSimilarity,
    sample_radius: f64,
) -> Result<usize> {
    let sample = enumerate_model_set(scheme, window, sample_radius)?;
    let mut failures = 0usize;
    for v in &sim.t_q.points {
        for x in &sample.points {
            // coords of q x + v through the verified basis action
            let mut img = v.coords.clone();
            for (j, &xj) in x.coords.iter().enumerate() {
                for i in 0..img.len() {
                    img[i] += sim.matrix[j][i] * xj;
                }
            }
            if window.contains(&scheme.star_map(&img))? == Containment::Outside {
                failures += 1;
            }
        }
    }
    Ok(failures)
}

// ---------------------------------------------------------------------------
// Invariant density
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct InvariantDensity {
    pub window: (f64, f64),
    /// piecewise-constant density values per grid cell, integral 1
    pub values: Vec<f64>,
    pub iterations: usize,
    /// L1 distance between the last two iterates
    pub l1_gap: f64,
    /// total mass after the final iterate (should be 1 to rounding)
    pub mass: f64,
}

/// Iterate mu -> (1/#T) sum_v (t_v)_* mu on a piecewise-constant grid
/// until the successive L1 gap drops below `tol`. The affine images
/// t_v(u) = q* u + v* stay inside W because v* lies in W_Q, so mass is
/// preserved exactly up to float rounding.
pub fn invariant_density(
    sim: &SelfSimilarity,
    window: &Window,
    grid: usize,
    tol: f64,
    max_iters: usize,
) -> Result<InvariantDensity> {
    let (a, b) = interval_bounds(window)?;
    if grid < 2 {
        return Err(Error::InvalidParameter("grid too coarse".into()));
    }
    if sim.t_q.is_empty() {
        return Err(Error::TooFewPoints(0));
    }
    let h = (b - a) / grid as f64;
    let q = sim.qstar.value();
    let vstars: Vec<f64> = (0..sim.t_q.len())
        .map(|i| {
            sim.t_q
                .star(i)
                .to_floats()
                .map(|v| v[0])
                .ok_or_else(|| Error::Unsupported("Euclidean stars required".into()))
        })
        .collect::<Result<_>>()?;
    let mut dens = vec![1.0 / (b - a); grid];
    let mut l1_gap;
    for iter in 1..=max_iters {
        let mut next = vec![0.0f64; grid];
        let scale = 1.0 / vstars.len() as f64;
        for &v in &vstars {
            for (i, &dv) in dens.iter().enumerate() {
                if dv == 0.0 {
                    continue;
                }
                let mass = dv * h * scale;
                let x0 = a + i as f64 * h;
                let x1 = x0 + h;
                let (mut y0, mut y1) = (q * x0 + v, q * x1 + v);
                if y0 > y1 {
                    std::mem::swap(&mut y0, &mut y1);
                }
                deposit(&mut next, a, h, grid, y0, y1, mass);
            }
        }
        let gap: f64 = dens
            .iter()
            .zip(&next)
            .map(|(x, y)| (x - y).abs() * h)
            .sum();
        dens = next;
        l1_gap = gap;
        let _ = l1_gap;
        if gap < tol {
            let mass = dens.iter().sum::<f64>() * h;
            return Ok(InvariantDensity {
                window: (a, b),
                values: dens,
                iterations: iter,
                l1_gap,
                mass,
            });
        }
    }
    Err(Error::NoConvergence(max_iters))
}

/// Spread `mass` uniformly over [y0, y1] into the grid cells.
fn deposit(next: &mut [f64], a: f64, h: f64, grid: usize, y0: f64, y1: f64, mass: f64) {
    let len = y1 - y0;
    if len <= 0.0 {
        let idx = (((y0 - a) / h).floor() as i64).clamp(0, grid as i64 - 1) as usize;
        next[idx] += mass / h;
        return;
    }
    let i0 = ((y0 - a) / h).floor() as i64;
    let i1 = ((y1 - a) / h).floor() as i64;
    for i in i0..=i1 {
        let cell = i.clamp(0, grid as i64 - 1) as usize;
        let c0 = a + i as f64 * h;
        let c1 = c0 + h;
        let overlap = (y1.min(c1) - y0.max(c0)).max(0.0);
        if overlap > 0.0 {
            next[cell] += mass * (overlap / len) / h;
        }
    }
}

// ---------------------------------------------------------------------------
// Patch metric and beta map
// ---------------------------------------------------------------------------

/// True iff some |v| < eps makes (v + S) cap K equal S' cap K exactly
/// (pairs matched within 1e-9), where K is the centered ball of
/// radius k.
pub fn patch_metric(s: &PointSet, sp: &PointSet, k: f64, eps: f64) -> bool {
    let tol = 1e-9;
    let inside = |p: &[f64]| crate::linalg::norm(p) <= k + tol;
    let a: Vec<&Vec<f64>> = s
        .points
        .iter()
        .map(|r| &r.physical)
        .filter(|p| inside(p))
        .collect();
    let b: Vec<&Vec<f64>> = sp
        .points
        .iter()
        .map(|r| &r.physical)
        .filter(|p| inside(p))
        .collect();
    let mut candidates: Vec<Vec<f64>> = vec![vec![0.0; s.scheme.d]];
    for x in &a {
        for y in &b {
            let v: Vec<f64> = y.iter().zip(x.iter()).map(|(p, q)| p - q).collect();
            if crate::linalg::norm(&v) < eps {
                candidates.push(v);
            }
        }
    }
    'cand: for v in &candidates {
        if crate::linalg::norm(v) >= eps {
            continue;
        }
        // (v + S) cap K must equal B as a set
        let mut matched = vec![false; b.len()];
        for x in s.points.iter().map(|r| &r.physical) {
            let y: Vec<f64> = x.iter().zip(v).map(|(p, q)| p + q).collect();
            if !inside(&y) {
                continue;
            }
            let hit = b.iter().position(|t| {
                t.iter().zip(&y).map(|(p, q)| (p - q).abs()).fold(0.0, f64::max) <= tol
            });
            match hit {
                Some(i) => matched[i] = true,
                None => continue 'cand,
            }
        }
        if matched.iter().all(|&m| m) {
            return true;
        }
    }
    false
}

/// Proximity score on a fixed schedule: for each K = 1, 2, 4, ... up to
/// the common region, the smallest eps from {1, 1/2, 1/4, ...} for which
/// patch_metric holds; returns (largest passing K, its smallest eps).
pub fn patch_proximity(s: &PointSet, sp: &PointSet) -> Option<(f64, f64)> {
    let kmax = s.region_radius.min(sp.region_radius);
    let mut best = None;
    let mut k = 1.0;
    while k <= kmax {
        let mut passing = None;
        let mut eps = 1.0;
        for _ in 0..20 {
            if patch_metric(s, sp, k, eps) {
                passing = Some(eps);
                eps /= 2.0;
            } else {
                break;
            }
        }
        if let Some(e) = passing {
            best = Some((k, e));
        }
        k *= 2.0;
    }
    best
}

#[derive(Debug, Clone)]
pub struct BetaReport {
    /// center of the intersection (midpoint / coset representative)
    pub center: InternalPoint,
    pub diameter: f64,
    /// exact golden interval when available
    pub exact_interval: Option<(GoldenRational, GoldenRational)>,
}

/// The torus beta-map surrogate: the intersection over the sample of
/// W - x*, exact for golden intervals and p-adic coset unions.
pub fn beta_map(ps: &PointSet, window: &Window) -> Result<BetaReport> {
    if ps.is_empty() {
        return Err(Error::TooFewPoints(0));
    }
    match window {
        Window::Interval { a, b } => {
            match (a.exact(), b.exact(), ps.star(0)) {
                (Some(ea), Some(eb), InternalPoint::Golden(_)) => {
                    let mut min_star: Option<GoldenRational> = None;
                    let mut max_star: Option<GoldenRational> = None;
                    for i in 0..ps.len() {
                        let InternalPoint::Golden(v) = ps.star(i) else {
                            return Err(Error::Incompatible);
                        };
                        let x = v[0].clone();
                        if min_star.as_ref().map_or(true, |m| &x < m) {
                            min_star = Some(x.clone());
                        }
                        if max_star.as_ref().map_or(true, |m| &x > m) {
                            max_star = Some(x);
                        }
                    }
                    let lo = ea.clone() - min_star.unwrap();
                    let hi = eb.clone() - max_star.unwrap();
                    if lo > hi {
                        return Err(Error::EmptyIntersection);
                    }
                    let two = BigInt::from(2);
                    let mid = GoldenRational::new(
                        (lo.clone() + hi.clone()).num,
                        (lo.clone() + hi.clone()).den * two,
                    );
                    Ok(BetaReport {
                        center: InternalPoint::Golden(vec![mid]),
                        diameter: (hi.clone() - lo.clone()).value(),
                        exact_interval: Some((lo, hi)),
                    })
                }
                _ => {
                    let (av, bv) = (a.value(), b.value());
                    let stars = star_values_1d(ps)?;
                    let lo = av - stars.iter().cloned().fold(f64::INFINITY, f64::min);
                    let hi = bv - stars.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                    if lo > hi + 1e-12 {
                        return Err(Error::EmptyIntersection);
                    }
                    Ok(BetaReport {
                        center: InternalPoint::Real(vec![0.5 * (lo + hi)]),
                        diameter: (hi - lo).max(0.0),
                        exact_interval: None,
                    })
                }
            }
        }
        Window::Box { lo, hi } => {
            let m = lo.len();
            let mut lows = vec![f64::NEG_INFINITY; m];
            let mut highs = vec![f64::INFINITY; m];
            for i in 0..ps.len() {
                let s = ps.star(i).to_floats().ok_or(Error::Incompatible)?;
                for j in 0..m {
                    lows[j] = lows[j].max(lo[j] - s[j]);
                    highs[j] = highs[j].min(hi[j] - s[j]);
                }
            }
            if lows.iter().zip(&highs).any(|(l, h)| l > h) {
                return Err(Error::EmptyIntersection);
            }
            let center: Vec<f64> = lows.iter().zip(&highs).map(|(l, h)| 0.5 * (l + h)).collect();
            let diam: f64 = lows
                .iter()
                .zip(&highs)
                .map(|(l, h)| (h - l) * (h - l))
                .sum::<f64>()
                .sqrt();
            Ok(BetaReport {
                center: InternalPoint::Real(center),
                diameter: diam,
                exact_interval: None,
            })
        }
        Window::CosetUnion { p, dim, cosets } => {
            // W - x* has cosets (c - x) + p^k; fold intersections
            let mut acc: Option<Vec<Coset>> = None;
            for i in 0..ps.len() {
                let InternalPoint::PAdic(v) = ps.star(i) else {
                    return Err(Error::Incompatible);
                };
                let shifted: Vec<Coset> = cosets
                    .iter()
                    .map(|c| {
                        let rep: Vec<BigInt> = c
                            .rep
                            .iter()
                            .zip(&v)
                            .map(|(r, x)| r - x.representative())
                            .collect();
                        Coset::new(*p, rep, c.k)
                    })
                    .collect();
                acc = Some(match acc {
                    None => shifted,
                    Some(prev) => intersect_coset_unions(*p, *dim, &prev, &shifted),
                });
                if acc.as_ref().unwrap().is_empty() {
                    return Err(Error::EmptyIntersection);
                }
            }
            let cosets = acc.unwrap();
            let kmin = cosets.iter().map(|c| c.k).min().unwrap();
            // diameter of the union: coset radius, or rep separation
            let mut diameter = (*p as f64).powi(-(kmin as i32));
            for i in 0..cosets.len() {
                for j in i + 1..cosets.len() {
                    let d = cosets[i]
                        .rep
                        .iter()
                        .zip(&cosets[j].rep)
                        .map(|(x, y)|

                            match crate::exact::padic::padic_valuation(
                                &num_rational::BigRational::from(x - y),
                                *p,
                            )
                            .unwrap()
                            {
                                None => 0.0,
                                Some(vv) => (*p as f64).powi(-(vv as i32)),
                            })
                        .fold(0.0, f64::max);
                    diameter = diameter.max(d);
                }
            }
            let depth = ps.scheme.padic_depth.max(kmin);
            let center = InternalPoint::PAdic(
                cosets[0]
                    .rep
                    .iter()
                    .map(|r| crate::exact::PAdicApprox::from_bigint(*p, depth, r).unwrap())
                    .collect(),
            );
            Ok(BetaReport { center, diameter, exact_interval: None })
        }
        _ => Err(Error::Unsupported(
            "beta map is implemented for intervals, boxes, and coset unions".into(),
        )),
    }
}
