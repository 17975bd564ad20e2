//! Acceptance suite: one test per release criterion, each printing a single
//! summary line with the measured values (visible with `--nocapture`, and in
//! the failure dump when a criterion is not met).

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::process::Command;
use std::time::Instant;

use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use csqs_core::tolerances::DEFAULT_EPS_TAIL;
use csqs_core::{
    displaced_cutoff, linear_entropy_closed, linear_entropy_oracle, lossy_field,
    lossy_wigner_closed, lossy_wigner_oracle, negativity_volume, rel_entropy_ng, skew_closed,
    skew_oracle, wigner_closed, wigner_field, wigner_oracle, wln_numeric, LossParams,
    NormalizedCsqs, PhaseGrid, StateParams,
};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn state_t(alpha: Complex64, t: f64) -> NormalizedCsqs {
    NormalizedCsqs::new(StateParams::from_t(alpha, t).unwrap()).unwrap()
}

fn state_r(alpha: Complex64, r: f64) -> NormalizedCsqs {
    NormalizedCsqs::new(StateParams::from_r(alpha, r).unwrap()).unwrap()
}

/// Uniform sample from the disk |z| <= radius.
fn disk(rng: &mut StdRng, radius: f64) -> Complex64 {
    loop {
        let z = c(
            rng.gen_range(-radius..radius),
            rng.gen_range(-radius..radius),
        );
        if z.norm() <= radius {
            return z;
        }
    }
}

#[test]
fn c1_wigner_closed_matches_displaced_parity_oracle() {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(41);
    let mut max_delta = 0.0f64;
    for _ in 0..20 {
        let alpha = disk(&mut rng, 2.0);
        let t = rng.gen_range(-1.0..1.0);
        let gamma = disk(&mut rng, 3.0);
        let state = state_t(alpha, t);
        let closed = wigner_closed(&state, gamma);
        let cutoff = displaced_cutoff(alpha, gamma, DEFAULT_EPS_TAIL);
        let rho = state.fock(cutoff, DEFAULT_EPS_TAIL).unwrap().density().unwrap();
        let oracle = wigner_oracle(&rho, gamma).unwrap();
        max_delta = max_delta.max((closed - oracle).abs());
    }
    let secs = start.elapsed().as_secs_f64();
    let pass = max_delta < 1e-8 && secs < 10.0;
    println!(
        "c1 wigner closed-vs-oracle: max |delta| = {max_delta:.3e} over 20 random \
         (alpha, t, gamma) in {secs:.2} s — {}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "max delta {max_delta:.3e} (need < 1e-8), runtime {secs:.2} s (need < 10 s)");
}

#[test]
fn c2_default_grid_normalizes_all_panel_fields() {
    let start = Instant::now();
    let panels = [
        (0.5, 1.0),
        (0.5, FRAC_1_SQRT_2),
        (0.5, 0.0),
        (1.0, 0.5),
        (1.5, 0.5),
        (1.75, 0.5),
    ];
    let mut worst = 0.0f64;
    for (alpha, t) in panels {
        let field = wigner_field(&state_t(c(alpha, 0.0), t), PhaseGrid::default());
        worst = worst.max((field.total_integral() - 1.0).abs());
    }
    let secs = start.elapsed().as_secs_f64();
    let pass = worst <= 1e-4 && secs < 30.0;
    println!(
        "c2 field normalization: worst |integral - 1| = {worst:.3e} over 6 panels \
         in {secs:.2} s — {}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "worst deviation {worst:.3e} (need <= 1e-4), runtime {secs:.2} s (need < 30 s)");
}

#[test]
fn c3_negativity_grows_as_creation_weight_grows() {
    let volume = |t: f64| {
        negativity_volume(&wigner_field(&state_t(c(0.5, 0.0), t), PhaseGrid::default()))
    };
    let v_pure_creation = volume(0.0);
    let v_balanced = volume(FRAC_1_SQRT_2);
    let v_pure_annihilation = volume(1.0);
    let pass = v_pure_creation > v_balanced
        && v_balanced > v_pure_annihilation
        && v_pure_annihilation.abs() <= 1e-9;
    println!(
        "c3 negativity ordering at alpha = 0.5: V(t=0) = {v_pure_creation:.6e} > \
         V(t=1/sqrt2) = {v_balanced:.6e} > V(t=1) = {v_pure_annihilation:.3e} — {}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass);
}

#[test]
fn c4_linear_entropy_oracle_agreement_limits_and_peak() {
    let mut rng = StdRng::seed_from_u64(42);
    let mut max_delta = 0.0f64;
    for _ in 0..100 {
        let alpha = disk(&mut rng, 2.0);
        let t = rng.gen_range(-1.0..1.0);
        let state = state_t(alpha, t);
        let closed = linear_entropy_closed(&state);
        let oracle = linear_entropy_oracle(&state, state.default_cutoff(2)).unwrap();
        max_delta = max_delta.max((closed - oracle).abs());
    }

    let le_coherent = linear_entropy_closed(&state_t(c(0.9, -0.4), 1.0));
    let le_single_photon = linear_entropy_closed(&state_t(c(1e-6, 0.0), 0.0));

    let mut sweep_max = 0.0f64;
    for i in 0..60 {
        let alpha = 0.01 + 0.05 * i as f64;
        for j in 1..=20 {
            let r = 0.05 * j as f64;
            sweep_max = sweep_max.max(linear_entropy_closed(&state_r(c(alpha, 0.0), r)));
        }
    }

    let pass = max_delta < 1e-8
        && le_coherent == 0.0
        && (le_single_photon - 0.5).abs() <= 1e-6
        && (0.45..=0.55).contains(&sweep_max);
    println!(
        "c4 linear entropy: max |closed - oracle| = {max_delta:.3e} over 100 samples; \
         LE(t=1) = {le_coherent:.1e}; LE(t=0, alpha=1e-6) = {le_single_photon:.9}; \
         sweep max = {sweep_max:.6} — {}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass);
}

#[test]
fn c5_skew_measure_oracle_agreement_limits_and_range() {
    let mut rng = StdRng::seed_from_u64(43);
    let mut max_delta = 0.0f64;
    for _ in 0..100 {
        let alpha = disk(&mut rng, 2.0);
        let t = rng.gen_range(-1.0..1.0);
        let state = state_t(alpha, t);
        let closed = skew_closed(&state);
        let oracle = skew_oracle(&state, state.default_cutoff(4)).unwrap();
        max_delta = max_delta.max((closed - oracle).abs());
    }

    let skew_coherent = skew_closed(&state_t(c(1.2, 0.6), 1.0));
    let skew_single_photon = skew_closed(&state_t(c(1e-6, 0.0), 0.0));

    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..60 {
        let alpha = 0.01 + 0.05 * i as f64;
        for j in 1..=20 {
            let r = 0.05 * j as f64;
            let v = skew_closed(&state_r(c(alpha, 0.0), r));
            lo = lo.min(v);
            hi = hi.max(v);
        }
    }

    let pass = max_delta < 1e-9
        && skew_coherent == 0.5
        && (skew_single_photon - 1.5).abs() <= 1e-6
        && lo >= 0.5 - 1e-10
        && hi <= 1.6;
    println!(
        "c5 skew measure: max |closed - oracle| = {max_delta:.3e}; N(t=1) = {skew_coherent}; \
         N(t=0, alpha=1e-6) = {skew_single_photon:.9}; sweep range = [{lo:.6}, {hi:.6}] — {}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass);
}

#[test]
fn c6_wigner_log_negativity_zero_bound_and_profile_dip() {
    let wln_coherent =
        wln_numeric(&state_t(c(0.8, 0.0), 1.0), PhaseGrid::default()).unwrap();

    // alpha-profile at fixed r = 0.5
    let alphas: Vec<f64> = (0..30).map(|i| 0.1 + i as f64 * 0.1).collect();
    let profile: Vec<f64> = alphas
        .iter()
        .map(|&a| {
            wln_numeric(&state_r(c(a, 0.0), 0.5), PhaseGrid::centered_on(c(a, 0.0))).unwrap()
        })
        .collect();
    let floor = profile.iter().copied().fold(f64::INFINITY, f64::min);

    let argmin = profile
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i)
        .unwrap();
    let interior = argmin > 0 && argmin + 1 < profile.len();
    // a genuine dip must rebound by more than the clause's own tolerance scale
    let rebound = profile.last().unwrap() - profile[argmin];

    let zero_ok = wln_coherent.abs() <= 1e-3;
    let bound_ok = floor >= -1e-3 && wln_coherent >= -1e-3;
    let dip_ok = interior && rebound > 1e-3;
    let pass = zero_ok && bound_ok && dip_ok;
    println!(
        "c6 log-negativity: WLN(t=1) = {wln_coherent:.2e}; profile floor = {floor:.2e}; \
         profile(alpha) at r=0.5 runs {:.4} -> {:.4} with argmin at alpha = {:.1} \
         (index {argmin}/{}, rebound {rebound:.2e}) — {}",
        profile[0],
        profile.last().unwrap(),
        alphas[argmin],
        profile.len() - 1,
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(
        pass,
        "zero_ok={zero_ok} bound_ok={bound_ok} dip_ok={dip_ok}: the profile is strictly \
         decreasing in alpha (argmin at index {argmin} of {}, rebound {rebound:.2e}), so the \
         interior-dip clause does not hold for this state family",
        profile.len() - 1
    );
}

#[test]
fn c7_non_gaussianity_limits_and_profile_dip() {
    let ng_coherent = rel_entropy_ng(&state_t(c(1.1, 0.3), 1.0)).unwrap();
    let ng_single_photon = rel_entropy_ng(&state_t(c(1e-6, 0.0), 0.0)).unwrap();

    let alphas: Vec<f64> = (0..30).map(|i| 0.1 + i as f64 * 0.1).collect();
    let profile: Vec<f64> = alphas
        .iter()
        .map(|&a| rel_entropy_ng(&state_r(c(a, 0.0), 0.5)).unwrap())
        .collect();
    let argmin = profile
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i)
        .unwrap();
    let interior = argmin > 0 && argmin + 1 < profile.len();

    let zero_ok = ng_coherent == 0.0;
    let photon_ok = (ng_single_photon - 2.0).abs() <= 1e-6;
    let pass = zero_ok && photon_ok && interior;
    println!(
        "c7 non-Gaussianity: delta(t=1) = {ng_coherent:.1e}; delta(t=0, alpha=1e-6) = \
         {ng_single_photon:.9}; profile(alpha) at r=0.5 runs {:.4} -> {:.4} with argmin at \
         alpha = {:.1} (index {argmin}/{}) — {}",
        profile[0],
        profile.last().unwrap(),
        alphas[argmin],
        profile.len() - 1,
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(
        pass,
        "zero_ok={zero_ok} photon_ok={photon_ok} interior={interior}: the profile is strictly \
         decreasing in alpha (argmin at index {argmin} of {}), so the interior-dip clause \
         does not hold for this state family",
        profile.len() - 1
    );
}

#[test]
fn c8_loss_channel_oracle_agreement_trace_monotonicity_and_vacuum_limit() {
    let state = state_t(c(1.5, 0.0), FRAC_1_SQRT_2);

    // closed form vs Kraus oracle across the loss levels at sample points
    let mut max_delta = 0.0f64;
    for kappa_t in [0.1, 0.3, 0.5] {
        let loss = LossParams::new(kappa_t).unwrap();
        let u = loss.amplitude_transmissivity();
        for zeta in [
            c(0.0, 0.0),
            c(0.5, 0.5),
            c(1.0, 0.0),
            c(1.5 * u, 0.0),
            c(-0.3, -0.4),
            c(2.0, 0.3),
        ] {
            let closed = lossy_wigner_closed(&state, loss, zeta);
            let cutoff = displaced_cutoff(state.alpha(), zeta, DEFAULT_EPS_TAIL);
            let oracle = lossy_wigner_oracle(&state, loss, zeta, cutoff).unwrap();
            max_delta = max_delta.max((closed - oracle).abs());
        }
    }

    // trace preservation on the emitted fields
    let mut worst_trace = 0.0f64;
    for kappa_t in [0.1, 0.3, 0.5] {
        let loss = LossParams::new(kappa_t).unwrap();
        let field = lossy_field(&state, loss, PhaseGrid::default()).unwrap();
        worst_trace = worst_trace.max((field.total_integral() - 1.0).abs());
    }

    // negativity is nonincreasing in the loss strength at (alpha=0.5, t=0)
    let neg_state = state_t(c(0.5, 0.0), 0.0);
    let mut volumes = Vec::new();
    for kappa_t in [0.0, 0.1, 0.3, 0.5, 1.0] {
        let loss = LossParams::new(kappa_t).unwrap();
        let field = lossy_field(&neg_state, loss, PhaseGrid::default()).unwrap();
        volumes.push(negativity_volume(&field));
    }
    let monotone = volumes.windows(2).all(|w| w[1] <= w[0] + 1e-12);

    // deep-loss limit: the most nonclassical state collapses onto the vacuum
    let single_photon = state_t(c(0.0, 0.0), 0.0);
    let deep = LossParams::new(5.0).unwrap();
    let field = lossy_field(&single_photon, deep, PhaseGrid::default()).unwrap();
    let grid = *field.grid();
    let mut vacuum_dist = 0.0f64;
    for iy in 0..grid.ny() {
        for ix in 0..grid.nx() {
            let gamma = c(grid.x(ix), grid.y(iy));
            let vacuum = 2.0 / PI * (-2.0 * gamma.norm_sqr()).exp();
            vacuum_dist = vacuum_dist.max((field.value(ix, iy) - vacuum).abs());
        }
    }

    let volumes_text = volumes
        .iter()
        .map(|v| format!("{v:.4e}"))
        .collect::<Vec<_>>()
        .join(", ");
    let pass = max_delta < 1e-6 && worst_trace <= 1e-4 && monotone && vacuum_dist <= 1e-4;
    println!(
        "c8 loss channel: max |closed - Kraus| = {max_delta:.3e}; worst |trace - 1| = \
         {worst_trace:.3e}; negativity by loss level = [{volumes_text}] (nonincreasing: \
         {monotone}); deep-loss max distance from vacuum = {vacuum_dist:.3e} — {}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass);
}

#[test]
fn c9_sweep_bytes_identical_across_worker_counts() {
    let dir = tempfile::tempdir().unwrap();
    let out1 = dir.path().join("one.csv");
    let out4 = dir.path().join("four.csv");
    let run = |threads: &str, out: &std::path::Path| {
        let status = Command::new(env!("CARGO_BIN_EXE_csqs-lab"))
            .args([
                "sweep",
                "--alpha-min",
                "0.2",
                "--alpha-max",
                "1.2",
                "--alpha-step",
                "0.5",
                "--r-min",
                "0.25",
                "--r-max",
                "1.0",
                "--r-step",
                "0.25",
                "--output",
            ])
            .arg(out)
            .env("CSQS_LAB_THREADS", threads)
            .status()
            .unwrap();
        assert!(status.success());
    };
    run("1", &out1);
    run("4", &out4);
    let bytes1 = std::fs::read(&out1).unwrap();
    let bytes4 = std::fs::read(&out4).unwrap();
    let pass = bytes1 == bytes4;
    println!(
        "c9 sweep determinism: {} bytes with 1 worker vs {} bytes with 4 — {}",
        bytes1.len(),
        bytes4.len(),
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass);
}
