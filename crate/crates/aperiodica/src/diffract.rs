//! Diffraction: autocorrelation of finite samples, predicted Bragg
//! spectra from the window's Fourier transform (Euclidean dual-lattice
//! and p-adic character routes), measured structure factors, and the
//! comparison between the two.

use crate::construct::PointSet;
use crate::error::{Error, Result};
use crate::scheme::{CutProjectScheme, LatticeCoords};
use crate::window::{ball_volume, DualPoint, Window};
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::One;
use std::collections::HashMap;
use std::f64::consts::PI;

const DUAL_BUDGET: f64 = 5e7;

// ---------------------------------------------------------------------------
// Autocorrelation
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct AutocorrelationTerm {
    /// exact lattice coordinates of the difference z = x - y
    pub coords: LatticeCoords,
    pub z: Vec<f64>,
    /// eta(z): sum of omega_x conj(omega_y) over matching pairs, per
    /// unit volume of the sampled region
    pub eta: Complex64,
}

#[derive(Debug, Clone)]
pub struct Autocorrelation {
    pub volume: f64,
    pub terms: Vec<AutocorrelationTerm>,
}

/// Finite-sample autocorrelation: eta(z) = (1/vol B_s) sum over pairs
/// with x - y = z (an exact lattice difference), restricted to
/// |z| <= max_z.
pub fn autocorrelation(ps: &PointSet, max_z: f64) -> Result<Autocorrelation> {
    if ps.is_empty() {
        return Err(Error::TooFewPoints(0));
    }
    let volume = ball_volume(ps.scheme.d, ps.region_radius);
    let mut acc: HashMap<LatticeCoords, Complex64> = HashMap::new();
    for x in &ps.points {
        for y in &ps.points {
            let dist: f64 = x
                .physical
                .iter()
                .zip(&y.physical)
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt();
            if dist > max_z {
                continue;
            }
            let dc: LatticeCoords = x.coords.iter().zip(&y.coords).map(|(a, b)| a - b).collect();
            *acc.entry(dc).or_insert(Complex64::new(0.0, 0.0)) += x.weight * y.weight.conj();
        }
    }
    let mut terms: Vec<AutocorrelationTerm> = acc
        .into_iter()
        .map(|(coords, s)| AutocorrelationTerm {
            z: ps.scheme.physical(&coords),
            coords,
            eta: s / volume,
        })
        .collect();
    terms.sort_by(|a, b| {
        crate::linalg::norm(&a.z)
            .partial_cmp(&crate::linalg::norm(&b.z))
            .unwrap()
            .then(a.coords.cmp(&b.coords))
    });
    Ok(Autocorrelation { volume, terms })
}

// ---------------------------------------------------------------------------
// Predicted Bragg spectrum
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct BraggPeak {
    /// physical wave vector
    pub k: Vec<f64>,
    /// internal frequency at which the window transform is evaluated
    pub internal: DualPoint,
    /// normalized weight w(k) = |chi_hat(-pi_int k) / vol W|^2, in [0,1]
    pub w: f64,
    /// intensity density^2 * w(k)
    pub intensity: f64,
}

#[derive(Debug, Clone)]
pub struct Spectrum {
    pub peaks: Vec<BraggPeak>,
    /// point density of the model set (vol W / covolume)
    pub density: f64,
    pub k_cutoff: f64,
    pub floor: f64,
}

impl Spectrum {
    /// peaks sorted by decreasing intensity
    pub fn ranked(&self) -> Vec<&BraggPeak> {
        let mut v: Vec<&BraggPeak> = self.peaks.iter().collect();
        v.sort_by(|a, b| {
            b.intensity
                .partial_cmp(&a.intensity)
                .unwrap()
                .then(a.k.partial_cmp(&b.k).unwrap())
        });
        v
    }
}

/// Predict the pure-point spectrum below `k_cutoff`, keeping peaks with
/// w(k) >= floor. Euclidean internal spaces enumerate the dual lattice;
/// p-adic ones enumerate characters with p-power denominators.
pub fn bragg_predict(
    scheme: &CutProjectScheme,
    window: &Window,
    k_cutoff: f64,
    floor: f64,
) -> Result<Spectrum> {
    if k_cutoff <= 0.0 || floor <= 0.0 || floor > 1.0 {
        return Err(Error::InvalidParameter(
            "need k_cutoff > 0 and floor in (0, 1]".into(),
        ));
    }
    let density = window.haar_volume() / scheme.covolume;
    let peaks = if scheme.internal.is_euclidean() {
        bragg_euclidean(scheme, window, k_cutoff, floor)?
    } else {
        bragg_padic(scheme, window, k_cutoff, floor, 6)?
    };
    let mut peaks = peaks;
    for p in &mut peaks {
        p.intensity = density * density * p.w;
    }
    Ok(Spectrum { peaks, density, k_cutoff, floor })
}

/// p-adic character depth can be chosen explicitly (default 6 above).
pub fn bragg_predict_padic_depth(
    scheme: &CutProjectScheme,
    window: &Window,
    k_cutoff: f64,
    floor: f64,
    depth: usize,
) -> Result<Spectrum> {
    let density = window.haar_volume() / scheme.covolume;
    let mut peaks = bragg_padic(scheme, window, k_cutoff, floor, depth)?;
    for p in &mut peaks {
        p.intensity = density * density * p.w;
    }
    Ok(Spectrum { peaks, density, k_cutoff, floor })
}

fn bragg_euclidean(
    scheme: &CutProjectScheme,
    window: &Window,
    k_cutoff: f64,
    floor: f64,
) -> Result<Vec<BraggPeak>> {
    let dual = scheme.dual_lattice()?;
    let e = scheme.embed_matrix().ok_or_else(|| {
        Error::Unsupported("Euclidean Bragg prediction needs an embedding matrix".into())
    })?;
    let d = scheme.d;
    let m = scheme.internal.dim();
    let decay = window.ft_decay_radius(floor);
    let vol = window.haar_volume();
    if vol <= 0.0 {
        return Err(Error::DegenerateWindow("zero-volume window".into()));
    }
    // coefficient bounds: n_i = sum_j E[j][i] k_j with |k_phys| <= cutoff
    // componentwise and |k_int| <= decay
    let mut bounds = Vec::with_capacity(scheme.rank);
    let mut count = 1.0f64;
    for i in 0..scheme.rank {
        let mut b = 0.0;
        for (j, row) in e.iter().enumerate() {
            b += row[i].abs() * if j < d { k_cutoff } else { decay };
        }
        let n = b.floor() as i64;
        count *= (2 * n + 1) as f64;
        bounds.push(n);
    }
    if count > DUAL_BUDGET {
        return Err(Error::BudgetExceeded(format!(
            "dual enumeration would visit {count:.2e} points"
        )));
    }
    let mut peaks = Vec::new();
    let mut idx: Vec<i64> = bounds.iter().map(|&b| -b).collect();
    loop {
        let full = dual.point(&idx);
        let kphys = &full[..d];
        let kint = &full[d..];
        if crate::linalg::norm(kphys) <= k_cutoff && crate::linalg::norm(kint) <= decay {
            let neg: Vec<f64> = kint.iter().map(|x| -x).collect();
            let ft = window.indicator_ft(&DualPoint::Real(neg.clone()))?;
            let w = (ft / vol).norm_sqr();
            if w >= floor {
                peaks.push(BraggPeak {
                    k: kphys.to_vec(),
                    internal: DualPoint::Real(neg),
                    w,
                    intensity: 0.0,
                });
            }
        }
        let mut carry = 0;
        loop {
            if carry == scheme.rank {
                return Ok(peaks);
            }
            idx[carry] += 1;
            if idx[carry] <= bounds[carry] {
                break;
            }
            idx[carry] = -bounds[carry];
            carry += 1;
        }
        let _ = m;
    }
}

fn bragg_padic(
    scheme: &CutProjectScheme,
    window: &Window,
    k_cutoff: f64,
    floor: f64,
    depth: usize,
) -> Result<Vec<BraggPeak>> {
    let (p, m) = match &window {
        Window::CosetUnion { p, dim, .. } => (*p, *dim),
        _ => {
            return Err(Error::Unsupported(
                "p-adic Bragg prediction needs a coset-union window".into(),
            ))
        }
    };
    if m != scheme.d {
        return Err(Error::DimensionMismatch { expected: scheme.d, got: m });
    }
    let vol = window.haar_volume();
    if vol <= 0.0 {
        return Err(Error::DegenerateWindow("zero-volume window".into()));
    }
    let q = (p as i64).pow(depth as u32);
    if (q as f64).powi(m as i32) * (2.0 * k_cutoff + 1.0).powi(m as i32) > DUAL_BUDGET {
        return Err(Error::BudgetExceeded(
            "p-adic character enumeration exceeds the budget".into(),
        ));
    }
    let qden = BigRational::new(num_bigint::BigInt::one(), q.into());
    let mut peaks = Vec::new();
    // all xi in (Z[1/p]/Z)^m with denominator exponent <= depth
    let mut digits = vec![0i64; m];
    loop {
        let xi: Vec<BigRational> = digits
            .iter()
            .map(|&a| &qden * BigRational::from_integer(a.into()))
            .collect();
        let ft = window.indicator_ft(&DualPoint::PAdic(xi.clone()))?;
        let w = (ft / vol).norm_sqr();
        if w >= floor {
            // peaks at k = n - xi for every integer shift n with |k| <= cutoff
            let frac: Vec<f64> = digits.iter().map(|&a| a as f64 / q as f64).collect();
            let nmax = k_cutoff.ceil() as i64 + 1;
            let mut shift = vec![-nmax; m];
            loop {
                let k: Vec<f64> = shift
                    .iter()
                    .zip(&frac)
                    .map(|(&n, &f)| n as f64 - f)
                    .collect();
                if crate::linalg::norm(&k) <= k_cutoff {
                    peaks.push(BraggPeak {
                        k,
                        internal: DualPoint::PAdic(xi.clone()),
                        w,
                        intensity: 0.0,
                    });
                }
                let mut carry = 0;
                loop {
                    if carry == m {
                        break;
                    }
                    shift[carry] += 1;
                    if shift[carry] <= nmax {
                        break;
                    }
                    shift[carry] = -nmax;
                    carry += 1;
                }
                if carry == m {
                    break;
                }
            }
        }
        let mut carry = 0;
        loop {
            if carry == m {
                return Ok(peaks);
            }
            digits[carry] += 1;
            if digits[carry] < q {
                break;
            }
            digits[carry] = 0;
            carry += 1;
        }
    }
}

// ---------------------------------------------------------------------------
// Measured structure factor
// ---------------------------------------------------------------------------

fn worker_count(jobs: usize) -> usize {
    let hw = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1);
    let cap = std::env::var("APERIODICA_THREADS")
        .ok()
        .and_then(|s| s.parse::<usize>().ok())
        .filter(|&n| n >= 1)
        .unwrap_or(hw);
    hw.min(cap).min(jobs.max(1))
}

/// Raw exponential sums S(k) = sum omega_x e^{-2 pi i k . x}, one per
/// requested wave vector; parallel over k.
pub fn exponential_sums(ps: &PointSet, ks: &[Vec<f64>]) -> Vec<Complex64> {
    let workers = worker_count(ks.len());
    let chunk = ks.len().div_ceil(workers.max(1)).max(1);
    let mut out = vec![Complex64::new(0.0, 0.0); ks.len()];
    std::thread::scope(|scope| {
        let mut handles = Vec::new();
        for (ci, kchunk) in ks.chunks(chunk).enumerate() {
            handles.push((
                ci,
                scope.spawn(move || {
                    kchunk
                        .iter()
                        .map(|k| {
                            let mut s = Complex64::new(0.0, 0.0);
                            for r in &ps.points {
                                let phase: f64 =
                                    k.iter().zip(&r.physical).map(|(a, b)| a * b).sum();
                                s += r.weight * Complex64::from_polar(1.0, -2.0 * PI * phase);
                            }
                            s
                        })
                        .collect::<Vec<_>>()
                }),
            ));
        }
        for (ci, h) in handles {
            let vals = h.join().expect("structure factor worker");
            out[ci * chunk..ci * chunk + vals.len()].copy_from_slice(&vals);
        }
    });
    out
}

/// Measured intensities I(k) = |S(k)|^2 / vol(B_s).
pub fn structure_factor(ps: &PointSet, ks: &[Vec<f64>]) -> Vec<f64> {
    let vol = ball_volume(ps.scheme.d, ps.region_radius);
    exponential_sums(ps, ks)
        .into_iter()
        .map(|s| s.norm_sqr() / vol)
        .collect()
}

// ---------------------------------------------------------------------------
// Comparison
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct PeakComparison {
    pub k: Vec<f64>,
    pub predicted_w: f64,
    pub measured_w: f64,
    pub relative_error: f64,
}

#[derive(Debug, Clone)]
pub struct SpectrumComparison {
    pub peaks: Vec<PeakComparison>,
    /// max over the background mesh of |S(k)/S(0)|^2
    pub background_ratio: f64,
    pub background_mesh: usize,
}

/// Compare the top `top_n` predicted peaks against the sample: measured
/// weight is |S(k)/N|^2 at the exact predicted position (w(0) = 1 by
/// construction). The background is probed on a mesh that stays at
/// least 5 resolution widths (2/R each) away from every predicted peak,
/// including k = 0.
pub fn compare_spectra(
    predicted: &Spectrum,
    ps: &PointSet,
    top_n: usize,
    background_mesh: usize,
) -> Result<SpectrumComparison> {
    if ps.is_empty() {
        return Err(Error::TooFewPoints(0));
    }
    let d = ps.scheme.d;
    let n = ps.points.iter().map(|r| r.weight.norm()).sum::<f64>();
    if n == 0.0 {
        return Err(Error::TooFewPoints(0));
    }
    let ranked = predicted.ranked();
    let top: Vec<&BraggPeak> = ranked.iter().take(top_n).copied().collect();
    let ks: Vec<Vec<f64>> = top.iter().map(|p| p.k.clone()).collect();
    let sums = exponential_sums(ps, &ks);
    let peaks: Vec<PeakComparison> = top
        .iter()
        .zip(&sums)
        .map(|(p, s)| {
            let measured = (s / n).norm_sqr();
            PeakComparison {
                k: p.k.clone(),
                predicted_w: p.w,
                measured_w: measured,
                relative_error: (measured - p.w).abs() / p.w,
            }
        })
        .collect();
    // background mesh avoiding every predicted peak (the full list, not
    // just the top slice) by 5 resolution widths
    let res = 2.0 / ps.region_radius;
    let guard = 5.0 * res;
    let mut mesh: Vec<Vec<f64>> = Vec::new();
    let mut t = 0usize;
    let mut counter = 0u64;
    while mesh.len() < background_mesh && t < background_mesh * 50 {
        t += 1;
        counter = counter.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407 + t as u64);
        let mut k = Vec::with_capacity(d);
        let mut c = counter;
        for _ in 0..d {
            c = c.wrapping_mul(6364136223846793005).wrapping_add(1);
            let u = (c >> 11) as f64 / (1u64 << 53) as f64;
            k.push((2.0 * u - 1.0) * predicted.k_cutoff);
        }
        let clear = predicted.peaks.iter().all(|p| {
            let dist: f64 = p
                .k
                .iter()
                .zip(&k)
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt();
            dist >= guard
        });
        if clear {
            mesh.push(k);
        }
    }
    let sums = exponential_sums(ps, &mesh);
    let background_ratio = sums
        .iter()
        .map(|s| (s / n).norm_sqr())
        .fold(0.0, f64::max);
    Ok(SpectrumComparison { peaks, background_ratio, background_mesh: mesh.len() })
}

// ---------------------------------------------------------------------------
// Stochastic expectation
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct StochasticSpectrum {
    /// Bragg part: the input peaks with intensities scaled by m1^2
    pub spectrum: Spectrum,
    /// constant diffuse background density d (m2 - m1^2)
    pub diffuse: f64,
}

/// Expected diffraction of an i.i.d. weighting with moments m1, m2: the
/// Bragg intensities scale by m1^2 and a flat background of density
/// `density * (m2 - m1^2)` appears.
pub fn stochastic_expectation(
    predicted: &Spectrum,
    m1: f64,
    m2: f64,
) -> Result<StochasticSpectrum> {
    if m2 < m1 * m1 - 1e-15 {
        return Err(Error::InvalidParameter(
            "second moment below the squared mean".into(),
        ));
    }
    let mut spectrum = predicted.clone();
    for p in &mut spectrum.peaks {
        p.intensity *= m1 * m1;
    }
    Ok(StochasticSpectrum {
        spectrum,
        diffuse: predicted.density * (m2 - m1 * m1),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{enumerate_model_set, occupy_stochastic, RobinsonConfig};
    use crate::exact::TAU_F64;
    use crate::scheme::{make_fibonacci_scheme, make_robinson_scheme};
    use crate::window::Coset;

    fn fib_window() -> Window {
        Window::interval_golden((-1, 0), (-1, 1))
    }

    #[test]
    fn autocorrelation_basics() {
        let s = make_fibonacci_scheme();
        let ps = enumerate_model_set(&s, &fib_window(), 60.0).unwrap();
        let ac = autocorrelation(&ps, 3.0).unwrap();
        // eta(0) is the finite-sample point density
        let zero = ac
            .terms
            .iter()
            .find(|t| t.coords.iter().all(|&c| c == 0))
            .unwrap();
        assert!((zero.eta.re - ps.density()).abs() < 1e-12);
        assert!(zero.eta.im.abs() < 1e-15);
        // symmetry eta(-z) = conj(eta(z))
        for t in &ac.terms {
            let neg: Vec<i64> = t.coords.iter().map(|&c| -c).collect();
            let mate = ac.terms.iter().find(|u| u.coords == neg).unwrap();
            assert!((mate.eta - t.eta.conj()).norm() < 1e-15);
        }
        // z values are differences of two tile lengths: spacings from {1, tau}
        for t in &ac.terms {
            assert!(t.z[0].abs() <= 3.0 + 1e-9);
        }
    }

    #[test]
    fn fibonacci_bragg_positions() {
        let s = make_fibonacci_scheme();
        let spec = bragg_predict(&s, &fib_window(), 3.0, 1e-3).unwrap();
        // k = 0 is present with w = 1
        let zero = spec
            .peaks
            .iter()
            .find(|p| p.k[0].abs() < 1e-12)
            .expect("k = 0 peak");
        assert!((zero.w - 1.0).abs() < 1e-12);
        assert!((zero.intensity - spec.density * spec.density).abs() < 1e-12);
        // density tau/sqrt(5)
        assert!((spec.density - TAU_F64 / 5.0f64.sqrt()).abs() < 1e-12);
        // all peaks live on (Z + Z tau)/sqrt(5): (a + b tau) = k sqrt(5)
        for p in &spec.peaks {
            let x = p.k[0] * 5.0f64.sqrt();
            // solve x = a + b tau with small integers
            let mut ok = false;
            for b in -20i64..=20 {
                let a = x - b as f64 * TAU_F64;
                if (a - a.round()).abs() < 1e-9 {
                    ok = true;
                    break;
                }
            }
            assert!(ok, "peak at {x} not in Z[tau]/sqrt5");
        }
        // symmetry: peaks come in +/- pairs with equal weights
        for p in &spec.peaks {
            let mate = spec
                .peaks
                .iter()
                .find(|q| (q.k[0] + p.k[0]).abs() < 1e-9)
                .unwrap();
            assert!((mate.w - p.w).abs() < 1e-12);
        }
    }

    #[test]
    fn fibonacci_measured_matches_predicted() {
        let s = make_fibonacci_scheme();
        let w = fib_window();
        let spec = bragg_predict(&s, &w, 3.0, 1e-3).unwrap();
        let ps = enumerate_model_set(&s, &w, 300.0).unwrap();
        let cmp = compare_spectra(&spec, &ps, 10, 200).unwrap();
        assert_eq!(cmp.peaks.len(), 10);
        for p in &cmp.peaks {
            assert!(
                p.relative_error < 0.02,
                "k {:?} pred {} meas {}",
                p.k,
                p.predicted_w,
                p.measured_w
            );
        }
        assert!(cmp.background_ratio < 0.01, "{}", cmp.background_ratio);
        assert!(cmp.background_mesh >= 150);
    }

    #[test]
    fn robinson_bragg_oracle() {
        // chi_hat at xi = (1/2, 0): 1/4 - sum_{k>=2} 4^{-k} = 1/6, so
        // w = (1/6)^2 / (1/3)^2 = 1/4, up to depth truncation
        let cfg = RobinsonConfig::with_defaults(12).unwrap();
        let (w, _) = crate::construct::robinson_window(&cfg).unwrap();
        let s = make_robinson_scheme(12);
        let spec = bragg_predict_padic_depth(&s, &w, 1.2, 1e-3, 3).unwrap();
        let half = spec
            .peaks
            .iter()
            .find(|p| (p.k[0] + 0.5).abs() < 1e-12 && p.k[1].abs() < 1e-12)
            .expect("half-integer peak");
        assert!((half.w - 0.25).abs() < 1e-4, "{}", half.w);
        // integer positions carry w = 1
        let one = spec
            .peaks
            .iter()
            .find(|p| (p.k[0] - 1.0).abs() < 1e-12 && p.k[1].abs() < 1e-12)
            .expect("integer peak");
        assert!((one.w - 1.0).abs() < 1e-12);
        // measured agreement on a modest patch
        let ps = enumerate_model_set(&s, &w, 80.0).unwrap();
        let cmp = compare_spectra(&spec, &ps, 5, 100).unwrap();
        for p in &cmp.peaks {
            assert!(p.relative_error < 0.05, "{:?}", p);
        }
    }

    #[test]
    fn structure_factor_zero_peak() {
        let s = make_fibonacci_scheme();
        let ps = enumerate_model_set(&s, &fib_window(), 50.0).unwrap();
        let i0 = structure_factor(&ps, &[vec![0.0]])[0];
        let vol = ball_volume(1, 50.0);
        assert!((i0 - (ps.len() as f64).powi(2) / vol).abs() < 1e-9);
    }

    #[test]
    fn threads_env_is_respected() {
        // smoke test: results identical whatever the worker count
        let s = make_fibonacci_scheme();
        let ps = enumerate_model_set(&s, &fib_window(), 40.0).unwrap();
        let ks: Vec<Vec<f64>> = (0..37).map(|i| vec![i as f64 * 0.05]).collect();
        std::env::set_var("APERIODICA_THREADS", "1");
        let a = structure_factor(&ps, &ks);
        std::env::set_var("APERIODICA_THREADS", "4");
        let b = structure_factor(&ps, &ks);
        std::env::remove_var("APERIODICA_THREADS");
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x, y);
        }
    }

    #[test]
    fn stochastic_bernoulli_law() {
        let s = make_fibonacci_scheme();
        let w = fib_window();
        let spec = bragg_predict(&s, &w, 3.0, 1e-3).unwrap();
        let p = 0.5;
        let expected = stochastic_expectation(&spec, p, p).unwrap();
        assert!((expected.diffuse - spec.density * p * (1.0 - p)).abs() < 1e-12);
        // invalid moments rejected
        assert!(stochastic_expectation(&spec, 0.9, 0.5).is_err());
        // measured: average |S(k)/N_full|^2 over seeds approaches p^2 w(k)
        let ps = enumerate_model_set(&s, &w, 300.0).unwrap();
        let nfull = ps.len() as f64;
        let ranked = spec.ranked();
        let top: Vec<Vec<f64>> = ranked.iter().take(3).map(|q| q.k.clone()).collect();
        let mut acc = vec![0.0; top.len()];
        let seeds = 12;
        for seed in 0..seeds {
            let sub = occupy_stochastic(&ps, p, seed).unwrap();
            for (i, sm) in exponential_sums(&sub, &top).iter().enumerate() {
                acc[i] += (sm / nfull).norm_sqr() / seeds as f64;
            }
        }
        for (i, q) in ranked.iter().take(3).enumerate() {
            let want = p * p * q.w;
            assert!(
                (acc[i] - want).abs() / want < 0.08,
                "k {:?}: {} vs {}",
                q.k,
                acc[i],
                want
            );
        }
    }

    #[test]
    fn budget_guard() {
        let s = make_fibonacci_scheme();
        let err = bragg_predict(&s, &fib_window(), 1e6, 1e-12);
        assert!(matches!(err, Err(Error::BudgetExceeded(_))));
    }

    #[test]
    fn padic_window_required_for_padic_scheme() {
        let s = make_robinson_scheme(8);
        let w = fib_window();
        assert!(bragg_predict(&s, &w, 2.0, 1e-3).is_err());
        // and the coset route needs matching dimensions
        let w1 = Window::coset_union(2, 1, vec![Coset::new(2, vec![0.into()], 0)]);
        assert!(bragg_predict(&s, &w1, 2.0, 1e-3).is_err());
    }
}
