//! End-to-end acceptance checks. Each test prints a single PASS/FAIL
//! line (visible with `cargo test --test acceptance -- --nocapture`).

use std::collections::HashSet;
use std::time::Instant;

use aperiodica::analyze::{
    beta_map, find_self_similarity, invariant_density, meyer_check, verify_self_similarity,
    weyl_average, weyl_test,
};
use aperiodica::construct::{
    classify_robinson_points, enumerate_model_set, find_visible_hole, occupy_stochastic,
    robinson_boundary_candidates, robinson_window, visible_points, RobinsonConfig,
};
use aperiodica::diffract::{bragg_predict, compare_spectra, exponential_sums};
use aperiodica::exact::icosian::{golden_dot, maps_permute, multiplication_closed, trace_gram, trace_to_int};
use aperiodica::exact::{intmat, GoldenInt, GoldenRational, IcosianQuaternion, PAdicApprox, TAU_F64};
use aperiodica::scheme::{icosian_z_basis, make_fibonacci_scheme};
use aperiodica::window::{Scalar, Window};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn report(name: &str, ok: bool, detail: &str) {
    println!("acceptance {name}: {} ({detail})", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "{name}: {detail}");
}

fn fib_window() -> Window {
    Window::interval_golden((-1, 0), (-1, 1))
}

/// [-tau/2, tau/2]: same length tau, endpoints outside Z[tau] (generic).
fn fib_window_generic() -> Window {
    let half_tau = |s: i64| {
        Scalar::Exact(GoldenRational::new(GoldenInt::new(0, s), BigInt::from(2)))
    };
    Window::Interval { a: half_tau(-1), b: half_tau(1) }
}

#[test]
fn criterion_01_robinson_tile_densities() {
    let cfg = RobinsonConfig::with_defaults(16).unwrap();
    let mut coords = Vec::with_capacity(512 * 512);
    for x in -256i64..256 {
        for y in -256i64..256 {
            coords.push([x, y]);
        }
    }
    let t0 = Instant::now();
    let classes = classify_robinson_points(&cfg, 362.1, &coords).unwrap();
    let elapsed = t0.elapsed().as_secs_f64();
    let decided = classes.decided_total();
    let expected = [
        0.25,
        1.0 / 12.0,
        1.0 / 6.0,
        1.0 / 6.0,
        1.0 / 6.0,
        1.0 / 6.0,
    ];
    // "within 1%" is one percentage point: the two residue lines that
    // stay undecided at every truncation depth hold ~0.4% of the patch
    // and come mostly out of the Edge class
    let mut worst = 0.0f64;
    let mut sum = 0.0f64;
    for (c, &e) in classes.classes.iter().zip(&expected) {
        let dens = c.len() as f64 / decided as f64;
        sum += dens;
        worst = worst.max((dens - e).abs());
    }
    let ok = worst < 0.01 && (sum - 1.0).abs() < 1e-12 && elapsed < 10.0;
    report(
        "01 robinson-tile-densities",
        ok,
        &format!(
            "decided {decided}/{}, worst abs err {worst:.5}, sum {sum:.12}, {elapsed:.2}s",
            coords.len()
        ),
    );
}

#[test]
fn criterion_02_robinson_boundary_and_volume() {
    let cfg = RobinsonConfig::with_defaults(16).unwrap();
    let cands = robinson_boundary_candidates(&cfg).unwrap();
    let (limx, limy) = cfg.limit();
    let bound = 2f64.powi(-15) + 1e-12;
    let mut worst = 0.0f64;
    for (x, y) in &cands {
        let dx = PAdicApprox::from_bigint(2, 16, x).unwrap().distance(&limx);
        let dy = PAdicApprox::from_bigint(2, 16, y).unwrap().distance(&limy);
        worst = worst.max(dx.max(dy));
    }
    let (w, _) = robinson_window(&cfg).unwrap();
    let vol_gap = (w.haar_volume() - 1.0 / 3.0).abs();
    let ok = !cands.is_empty() && worst <= bound && vol_gap < 4f64.powi(-16);
    report(
        "02 robinson-boundary-volume",
        ok,
        &format!(
            "{} candidates, max distance {worst:.3e} (bound 2^-15), |vol - 1/3| = {vol_gap:.3e}",
            cands.len()
        ),
    );
}

#[test]
fn criterion_03_icosian_ring() {
    let t0 = Instant::now();
    let units = aperiodica::exact::icosian_generators();
    assert_eq!(units.len(), 120);
    let closed = multiplication_closed(&units);
    let permute = maps_permute(&units);
    let two = BigInt::from(2);
    let unit_norms = units
        .iter()
        .all(|q| trace_to_int(&golden_dot(q, q)) == Some(two.clone()));
    let basis = icosian_z_basis();
    let gram = trace_gram(&basis).expect("integral trace form");
    let even = gram.iter().enumerate().all(|(i, row)| row[i].is_even());
    let det = intmat::determinant(&gram);
    // positive definite: all leading principal minors positive
    let posdef = (1..=8).all(|k| {
        let sub: Vec<Vec<BigInt>> = gram[..k].iter().map(|r| r[..k].to_vec()).collect();
        intmat::determinant(&sub) > BigInt::from(0)
    });
    // min 2: even positive definite forces min >= 2; the unit 1 is a
    // lattice vector of norm 2 (verified exactly through the basis)
    let one = IcosianQuaternion::one();
    let m: Vec<Vec<f64>> = (0..8)
        .map(|j| {
            basis
                .iter()
                .map(|q| q.doubled_coords()[j].to_f64().unwrap())
                .collect()
        })
        .collect();
    let inv = aperiodica::linalg::invert(&m).expect("basis invertible");
    let target: Vec<f64> = one
        .doubled_coords()
        .iter()
        .map(|x| x.to_f64().unwrap())
        .collect();
    let coeffs = aperiodica::linalg::mat_vec(&inv, &target);
    let mut combo = [
        BigInt::from(0), BigInt::from(0), BigInt::from(0), BigInt::from(0),
        BigInt::from(0), BigInt::from(0), BigInt::from(0), BigInt::from(0),
    ];
    let mut integral = true;
    for (c, q) in coeffs.iter().zip(&basis) {
        let r = c.round();
        if (c - r).abs() > 1e-6 {
            integral = false;
        }
        for (acc, x) in combo.iter_mut().zip(q.doubled_coords()) {
            *acc += BigInt::from(r as i64) * x;
        }
    }
    let min2 = integral && combo == one.doubled_coords();
    let elapsed = t0.elapsed().as_secs_f64();
    let ok = closed
        && permute
        && unit_norms
        && even
        && det == BigInt::from(1)
        && posdef
        && min2
        && elapsed < 5.0;
    report(
        "03 icosian-ring",
        ok,
        &format!(
            "closed {closed}, 14400 maps permute {permute}, Gram even {even} det {det} \
             posdef {posdef} min-2 witness {min2}, {elapsed:.2}s"
        ),
    );
}

#[test]
fn criterion_04_fibonacci_diffraction() {
    let s = make_fibonacci_scheme();
    let w = fib_window();
    let t0 = Instant::now();
    let spec = bragg_predict(&s, &w, 3.0, 1e-3).unwrap();
    let ps = enumerate_model_set(&s, &w, 1000.0).unwrap();
    let cmp = compare_spectra(&spec, &ps, 10, 200).unwrap();
    let elapsed = t0.elapsed().as_secs_f64();
    let worst = cmp
        .peaks
        .iter()
        .map(|p| p.relative_error)
        .fold(0.0, f64::max);
    let ok = (1440..1460).contains(&ps.len())
        && cmp.peaks.len() == 10
        && worst < 0.02
        && cmp.background_mesh > 0
        && cmp.background_ratio < 0.01
        && elapsed < 30.0;
    report(
        "04 fibonacci-diffraction",
        ok,
        &format!(
            "{} points, worst peak rel err {worst:.4}, background ratio {:.2e} on {} mesh \
             points, {elapsed:.2}s",
            ps.len(),
            cmp.background_ratio,
            cmp.background_mesh
        ),
    );
}

#[test]
fn criterion_05_weyl_equidistribution() {
    let s = make_fibonacci_scheme();
    let w = fib_window();
    let mut detail = String::new();
    let mut ok = true;
    for r in [250.0, 500.0, 1000.0] {
        let ps = enumerate_model_set(&s, &w, r).unwrap();
        let rep = weyl_test(&ps, &w, 20).unwrap();
        ok &= rep.p_value > 0.01;
        detail.push_str(&format!("R={r}: p={:.3} ", rep.p_value));
        if r == 1000.0 {
            ok &= rep.discrepancy < 0.02;
            let (avg, integral, gap) = weyl_average(&ps, &w, &|u| u).unwrap();
            ok &= gap < 1e-2;
            detail.push_str(&format!(
                "D*={:.4} avg(u)={avg:.4} vs {integral:.4} gap {gap:.1e}",
                rep.discrepancy
            ));
        }
    }
    report("05 weyl-equidistribution", ok, detail.trim());
}

#[test]
fn criterion_06_meyer_difference_gap() {
    let s = make_fibonacci_scheme();
    let w = fib_window();
    // independent oracle: exact difference set over coordinate pairs,
    // sorted by value, minimum adjacent gap in Z[tau]
    let oracle = |r: f64| -> GoldenRational {
        let ps = enumerate_model_set(&s, &w, r).unwrap();
        // the basis sends coords (n1, n2) to n1 + n2 tau
        assert!((s.physical(&[1, 0])[0] - 1.0).abs() < 1e-12);
        assert!((s.physical(&[0, 1])[0] - TAU_F64).abs() < 1e-12);
        let mut diffs: HashSet<(i64, i64)> = HashSet::new();
        for i in 0..ps.len() {
            for j in 0..ps.len() {
                if i != j {
                    let da = ps.points[i].coords[0] - ps.points[j].coords[0];
                    let db = ps.points[i].coords[1] - ps.points[j].coords[1];
                    diffs.insert((da, db));
                }
            }
        }
        let mut vals: Vec<(f64, i64, i64)> = diffs
            .into_iter()
            .map(|(a, b)| (a as f64 + b as f64 * TAU_F64, a, b))
            .collect();
        vals.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap());
        let mut best: Option<GoldenInt> = None;
        for p in vals.windows(2) {
            let gap = GoldenInt::new(p[1].1 - p[0].1, p[1].2 - p[0].2);
            if !gap.is_zero() && best.as_ref().map_or(true, |b| &gap < b) {
                best = Some(gap);
            }
        }
        GoldenRational::from_int(best.unwrap())
    };
    let expect200 = oracle(200.0);
    let rep200 = meyer_check(&enumerate_model_set(&s, &w, 200.0).unwrap()).unwrap();
    let rep400 = meyer_check(&enumerate_model_set(&s, &w, 400.0).unwrap()).unwrap();
    let g200 = rep200.exact_gap.clone().unwrap();
    let g400 = rep400.exact_gap.clone().unwrap();
    let ok = g200 == expect200 && g400 == expect200;
    report(
        "06 meyer-difference-gap",
        ok,
        &format!(
            "gap(B_200) = {} = oracle, unchanged at B_400 ({} vs {} diffs)",
            g200.num, rep200.difference_count, rep400.difference_count
        ),
    );
}

#[test]
fn criterion_07_tau_self_similarity() {
    let s = make_fibonacci_scheme();
    let w = fib_window();
    let sim = find_self_similarity(&s, &w, &GoldenInt::tau(), 100.0).unwrap();
    let failures = verify_self_similarity(&s, &w, &sim, 100.0).unwrap();
    let dens = invariant_density(&sim, &w, 1024, 1e-8, 2000).unwrap();
    let mass_gap = (dens.mass - 1.0).abs();
    let ok = !sim.t_q.is_empty() && failures == 0 && dens.l1_gap < 1e-8 && mass_gap <= 1e-12;
    report(
        "07 tau-self-similarity",
        ok,
        &format!(
            "|T_Q cap B_100| = {}, {failures} inclusion failures, L1 gap {:.2e} after {} \
             iterations, |mass - 1| = {mass_gap:.2e}",
            sim.t_q.len(),
            dens.l1_gap,
            dens.iterations
        ),
    );
}

#[test]
fn criterion_08_stochastic_diffraction() {
    let s = make_fibonacci_scheme();
    let w = fib_window();
    let p = 0.5;
    let ps = enumerate_model_set(&s, &w, 1000.0).unwrap();
    let n = ps.len() as f64;
    let spec = bragg_predict(&s, &w, 3.0, 1e-3).unwrap();
    let top: Vec<_> = spec.ranked().into_iter().take(5).cloned().collect();
    let peak_ks: Vec<Vec<f64>> = top.iter().map(|pk| pk.k.clone()).collect();
    // background mesh clear of every Bragg position down to w = 3e-4
    // (weaker peaks change the mesh average by well under a percent)
    let fine = bragg_predict(&s, &w, 3.0, 3e-4).unwrap();
    let mut mesh: Vec<Vec<f64>> = Vec::new();
    let mut t = 0.105f64;
    while mesh.len() < 80 && t < 3.0 {
        if fine.peaks.iter().all(|pk| (pk.k[0] - t).abs() >= 0.008) {
            mesh.push(vec![t]);
        }
        t += 0.0137;
    }
    assert!(mesh.len() >= 40, "background mesh too sparse");
    let vol = 2.0 * ps.region_radius;
    let seeds = 20u64;
    let mut peak_acc = vec![0.0f64; top.len()];
    let mut bg_acc = 0.0f64;
    for seed in 0..seeds {
        let sub = occupy_stochastic(&ps, p, seed).unwrap();
        for (acc, sum) in peak_acc.iter_mut().zip(exponential_sums(&sub, &peak_ks)) {
            *acc += (sum / n).norm_sqr();
        }
        let sums = exponential_sums(&sub, &mesh);
        bg_acc += sums.iter().map(|sv| sv.norm_sqr() / vol).sum::<f64>() / mesh.len() as f64;
    }
    let mut worst_peak = 0.0f64;
    for (acc, pk) in peak_acc.iter().zip(&top) {
        let measured = acc / seeds as f64;
        let expected = p * p * pk.w;
        worst_peak = worst_peak.max((measured - expected).abs() / expected);
    }
    let bg_measured = bg_acc / seeds as f64;
    let bg_expected = ps.density() * p * (1.0 - p);
    let bg_err = (bg_measured - bg_expected).abs() / bg_expected;
    let ok = worst_peak < 0.05 && bg_err < 0.10;
    report(
        "08 stochastic-diffraction",
        ok,
        &format!(
            "20 seeds, worst top-5 peak rel err {worst_peak:.4} (p^2 w law), background \
             {bg_measured:.4} vs {bg_expected:.4} (rel err {bg_err:.4})"
        ),
    );
}

#[test]
fn criterion_09_visible_points() {
    let vis = visible_points(2, 500.0).unwrap();
    // exact gcd oracle for the count
    let mut oracle = 0usize;
    for x in -500i64..=500 {
        for y in -500i64..=500 {
            if x * x + y * y <= 250_000 {
                let (mut a, mut b) = (x.abs(), y.abs());
                while b != 0 {
                    let r = a % b;
                    a = b;
                    b = r;
                }
                if a == 1 {
                    oracle += 1;
                }
            }
        }
    }
    let target = 6.0 / (std::f64::consts::PI * std::f64::consts::PI);
    let dens_err = (vis.density() - target).abs() / target;
    let hole = find_visible_hole(2.0, 1500.0);
    // numeric spectrum along k = (t, 0): peak positions must be stable
    // between R = 250 and R = 500 within the integration width 2/250
    let peaks_of = |r: f64, thr: f64| -> Vec<(f64, f64)> {
        let set = visible_points(2, r).unwrap();
        let nn = set.len() as f64;
        let ks: Vec<Vec<f64>> = (0..1181).map(|i| vec![0.05 + 0.0025 * i as f64, 0.0]).collect();
        let vals: Vec<f64> = exponential_sums(&set, &ks)
            .iter()
            .map(|sv| (sv / nn).norm_sqr())
            .collect();
        let mut out = Vec::new();
        for i in 1..vals.len() - 1 {
            if vals[i] >= thr && vals[i] > vals[i - 1] && vals[i] >= vals[i + 1] {
                out.push((ks[i][0], vals[i]));
            }
        }
        out
    };
    let p500 = peaks_of(500.0, 0.03);
    let p250 = peaks_of(250.0, 0.01);
    let mut top = p500.clone();
    top.sort_by(|x, y| y.1.partial_cmp(&x.1).unwrap());
    top.truncate(5);
    let stable = !top.is_empty()
        && top
            .iter()
            .all(|(t, _)| p250.iter().any(|(u, _)| (t - u).abs() <= 2.0 / 250.0));
    let ok = vis.len() == oracle && dens_err < 0.005 && hole.is_some() && stable;
    report(
        "09 visible-points",
        ok,
        &format!(
            "{} points == oracle {oracle}, density rel err {dens_err:.5} vs 6/pi^2, hole at \
             {:?}, {} of 5 top peaks stable",
            vis.len(),
            hole,
            top.iter()
                .filter(|(t, _)| p250.iter().any(|(u, _)| (t - u).abs() <= 2.0 / 250.0))
                .count()
        ),
    );
}

#[test]
fn criterion_10_beta_map() {
    let s = make_fibonacci_scheme();
    // shrinking fibers need a generic window (the canonical one has
    // both endpoints in the star image, pinning the intersection)
    let wg = fib_window_generic();
    let d50 = beta_map(&enumerate_model_set(&s, &wg, 50.0).unwrap(), &wg)
        .unwrap()
        .diameter;
    let d400 = beta_map(&enumerate_model_set(&s, &wg, 400.0).unwrap(), &wg)
        .unwrap()
        .diameter;
    let shrinks = d50 > 0.0 && d400 < d50 / 4.0;
    // exact recovery of the torus point of a translated sample
    let w = fib_window();
    let ps = enumerate_model_set(&s, &w, 400.0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut exact = true;
    for _ in 0..20 {
        let u = [rng.gen_range(-50i64..=50), rng.gen_range(-50i64..=50)];
        let shifted = ps.translate_by_lattice(&u);
        let rep = beta_map(&shifted, &w).unwrap();
        // star of u1 + u2 tau is (u1 + u2) - u2 tau
        let ustar = GoldenRational::from_integers(u[0] + u[1], -u[1]);
        let (lo, hi) = rep.exact_interval.expect("exact golden route");
        exact &= lo == ustar && hi == ustar;
    }
    let ok = shrinks && exact;
    report(
        "10 beta-map",
        ok,
        &format!(
            "diameter {d50:.4} at R=50 -> {d400:.4} at R=400 (ratio {:.3}), 20 translated \
             samples recovered exactly: {exact}",
            d400 / d50
        ),
    );
}
