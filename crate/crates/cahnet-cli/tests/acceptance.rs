//! Acceptance suite: one test per shipping criterion, each printing a
//! single pass/fail line (run with `--nocapture` to see them on
//! success).
//!
//! These criteria gate the crate as a whole: exact reproduction of the
//! reference bit-allocation table, greedy-vs-exhaustive optimality on
//! random instances, Monte Carlo agreement with every analytical law,
//! queueing-delay sufficiency of the minimum powers, the extreme-case
//! shortcuts, and byte-level reproducibility of the CLI's CSV output.

use std::path::{Path, PathBuf};
use std::process::Command;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp};

use cahnet::channel::{build_codebook, quantize};
use cahnet::config::ScenarioConfig;
use cahnet::control::{
    exhaustive_allocate, greedy_allocate, greedy_allocate_with_cap, interference_bound,
    min_safe_distance, Shortcut,
};
use cahnet::delay::{avg_rate, min_power, scenario_min_powers};
use cahnet::montecarlo::{run_interference_mc, run_queue_sim};
use cahnet::numerics::{null_space_unit_vector, sample_complex_gaussian};
use cahnet::Error;

fn report(criterion: u32, name: &str, ok: bool, detail: &str) {
    println!(
        "acceptance {criterion} ({name}): {} — {detail}",
        if ok { "pass" } else { "fail" }
    );
    assert!(ok, "acceptance criterion {criterion} failed: {detail}");
}

fn reference_powers(config: &ScenarioConfig) -> Vec<f64> {
    scenario_min_powers(config)
        .expect("reference scenario solves")
        .iter()
        .map(|s| s.p_star)
        .collect()
}

const AIC_GRID: [f64; 4] = [0.01, 0.02, 0.03, 0.04];
const REFERENCE_SPLITS: [[u32; 3]; 4] = [[1, 6, 9], [0, 3, 5], [0, 1, 3], [0, 0, 1]];

#[test]
fn criterion_1_bit_totals() {
    let config = ScenarioConfig::default();
    let powers = reference_powers(&config);
    let expected_totals = [16u32, 8, 4, 1];
    let mut detail = String::new();
    let mut ok = true;
    for (&aic, &expected) in AIC_GRID.iter().zip(&expected_totals) {
        let ga = greedy_allocate(&powers, &config.sigma_cross, config.n_t, aic)
            .expect("grid point is feasible");
        let ea = exhaustive_allocate(&powers, &config.sigma_cross, config.n_t, aic, 32)
            .expect("grid point is feasible");
        let ga_total = ga.allocation.total_bits();
        let ea_total = ea.allocation.total_bits();
        ok &= ga_total == expected && ea_total == ga_total;
        detail.push_str(&format!(
            "aic {aic}: GA {ga_total}/EA {ea_total} (want {expected}); "
        ));
    }
    report(1, "bit totals on the reference grid", ok, detail.trim_end());
}

#[test]
fn criterion_2_per_link_splits() {
    // Soft criterion: a split mismatch with a matching total is a
    // warning, not a failure (splits depend on power precision and
    // tie-breaking).
    let config = ScenarioConfig::default();
    let powers = reference_powers(&config);
    let mut matched = 0;
    for (&aic, expected) in AIC_GRID.iter().zip(&REFERENCE_SPLITS) {
        let ga = greedy_allocate(&powers, &config.sigma_cross, config.n_t, aic)
            .expect("grid point is feasible");
        if ga.allocation.bits == expected {
            matched += 1;
        } else {
            println!(
                "acceptance 2 warning: split at aic {aic} is {:?}, reference {expected:?} \
                 (total matches: {})",
                ga.allocation.bits,
                ga.allocation.total_bits() == expected.iter().sum::<u32>()
            );
        }
    }
    report(
        2,
        "per-link splits on the reference grid",
        true,
        &format!("{matched}/4 splits match the reference exactly"),
    );
}

#[test]
fn criterion_3_greedy_equals_exhaustive() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xACCE97);
    let mut checked = 0;
    let mut agreements = 0;
    while checked < 500 {
        let k = rng.gen_range(1..=3usize);
        let powers: Vec<f64> = (0..k).map(|_| rng.gen_range(0.5..50.0)).collect();
        let sigma: Vec<f64> = (0..k)
            .map(|_| 10f64.powf(rng.gen_range(-5.0..-2.0)))
            .collect();
        let aic = 10f64.powf(rng.gen_range(-4.0..-1.3));
        let ga = match greedy_allocate_with_cap(&powers, &sigma, 4, aic, 14) {
            Ok(result) => result,
            // Instance needs more than 14 total bits: outside the
            // criterion's domain, draw another.
            Err(Error::BitCapExceeded { .. }) => continue,
            Err(other) => panic!("unexpected greedy failure: {other}"),
        };
        let ea = exhaustive_allocate(&powers, &sigma, 4, aic, 14)
            .expect("exhaustive agrees on feasibility");
        checked += 1;
        if ga.allocation.total_bits() == ea.allocation.total_bits() {
            agreements += 1;
        }
    }
    report(
        3,
        "greedy total equals exhaustive total",
        agreements == 500,
        &format!("{agreements}/500 random instances agree"),
    );
}

#[test]
fn criterion_4_bound_validity_and_tightness() {
    let config = ScenarioConfig::default();
    let powers = reference_powers(&config);
    let trials = 100_000;
    let mut ok = true;
    let mut detail = String::new();
    for &aic in &AIC_GRID {
        let ga = greedy_allocate(&powers, &config.sigma_cross, config.n_t, aic)
            .expect("grid point is feasible");
        let ea = exhaustive_allocate(&powers, &config.sigma_cross, config.n_t, aic, 32)
            .expect("grid point is feasible");
        let ga_stats =
            run_interference_mc(&config, &ga.allocation.bits, &powers, trials, 4101).unwrap();
        let ea_stats =
            run_interference_mc(&config, &ea.allocation.bits, &powers, trials, 4102).unwrap();
        for (stats, bound) in [
            (&ga_stats, ga.allocation.bound_value),
            (&ea_stats, ea.allocation.bound_value),
        ] {
            ok &= stats.mean_sum_interference <= bound + 3.0 * stats.ci_halfwidth;
            ok &= stats.mean_sum_interference >= 0.5 * bound;
            ok &= stats.mean_sum_interference <= aic + 3.0 * stats.ci_halfwidth;
        }
        let ratio = ga_stats.mean_sum_interference / ea_stats.mean_sum_interference;
        ok &= (0.9..=1.1).contains(&ratio);
        detail.push_str(&format!(
            "aic {aic}: GA {:.5} / EA {:.5}, ratio {ratio:.3}, bounds {:.5}/{:.5}; ",
            ga_stats.mean_sum_interference,
            ea_stats.mean_sum_interference,
            ga.allocation.bound_value,
            ea.allocation.bound_value
        ));
    }
    report(
        4,
        "interference bound validity and tightness",
        ok,
        detail.trim_end(),
    );
}

/// Composite Simpson integration on [a, b] with n (even) panels.
fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    assert!(n.is_multiple_of(2));
    let h = (b - a) / n as f64;
    let mut sum = f(a) + f(b);
    for i in 1..n {
        let weight = if i % 2 == 1 { 4.0 } else { 2.0 };
        sum += weight * f(a + i as f64 * h);
    }
    sum * h / 3.0
}

#[test]
fn criterion_5_distributional_oracles() {
    let samples = 100_000;
    let mut rng = ChaCha8Rng::seed_from_u64(0x0D15);
    let mut ok = true;
    let mut detail = String::new();

    // E[‖g‖²] = n_t·σ² for a complex Gaussian vector.
    let sigma_sq = 0.7;
    let mut norm_sum = 0.0;
    for _ in 0..samples {
        norm_sum += sample_complex_gaussian(4, sigma_sq, &mut rng)
            .unwrap()
            .norm_sq();
    }
    let norm_mean = norm_sum / samples as f64;
    let norm_expected = 4.0 * sigma_sq;
    ok &= (norm_mean - norm_expected).abs() <= 0.02 * norm_expected;
    detail.push_str(&format!("E[‖g‖²] {norm_mean:.4} vs {norm_expected:.4}; "));

    // E[a] at B = 3: bounded by 2^(−B/3) and within 5% of the numeric
    // order-statistic mean ∫₀¹ (1−t³)^(2^B) dt.
    let bits = 3u32;
    let mut error_sum = 0.0;
    for _ in 0..samples {
        let g = sample_complex_gaussian(4, 1.0, &mut rng).unwrap();
        let codebook = build_codebook(4, bits, &mut rng).unwrap();
        error_sum += quantize(&g, &codebook).unwrap().error_magnitude;
    }
    let error_mean = error_sum / samples as f64;
    let geometric_bound = (-f64::from(bits) / 3.0).exp2();
    let order_statistic = simpson(|t| (1.0 - t * t * t).powi(1 << bits), 0.0, 1.0, 2000);
    ok &= error_mean <= geometric_bound;
    ok &= (error_mean - order_statistic).abs() <= 0.05 * order_statistic;
    detail.push_str(&format!(
        "E[a] {error_mean:.4} vs ∫ {order_statistic:.4} (bound {geometric_bound:.4}); "
    ));

    // E[|sᴴw|²] = 1/(n_t − 1) with the codeword as the only constraint.
    let mut overlap_sum = 0.0;
    for _ in 0..samples {
        let g = sample_complex_gaussian(4, 1.0, &mut rng).unwrap();
        let codebook = build_codebook(4, 1, &mut rng).unwrap();
        let q = quantize(&g, &codebook).unwrap();
        let beam =
            null_space_unit_vector(4, &[codebook.entries()[q.index].clone()], &mut rng).unwrap();
        overlap_sum += q
            .error_direction
            .expect("random match is never exact")
            .inner(&beam)
            .norm_sqr();
    }
    let overlap_mean = overlap_sum / samples as f64;
    ok &= (overlap_mean - 1.0 / 3.0).abs() <= 0.03 / 3.0;
    detail.push_str(&format!("E[|sᴴw|²] {overlap_mean:.4} vs 0.3333"));

    report(5, "distributional oracles", ok, &detail);
}

#[test]
fn criterion_6_ergodic_rate_closed_form() {
    let w = 5e4;
    let draws = 1_000_000;
    let mut rng = ChaCha8Rng::seed_from_u64(0xE1);
    let mut ok = true;
    let mut detail = String::new();
    for _ in 0..5 {
        let p = rng.gen_range(1.0..50.0);
        let sigma_sq = 10f64.powf(rng.gen_range(-3.0..-1.0));
        let exp = Exp::new(1.0 / (p * sigma_sq)).unwrap();
        let mut sum = 0.0;
        for _ in 0..draws {
            let gamma: f64 = exp.sample(&mut rng);
            sum += w * (1.0 + gamma).log2();
        }
        let empirical = sum / draws as f64;
        let closed_form = avg_rate(p, sigma_sq, w).unwrap();
        let relative = (empirical - closed_form).abs() / closed_form;
        ok &= relative <= 0.005;
        detail.push_str(&format!(
            "(P {p:.1}, σ² {sigma_sq:.4}): MC {empirical:.1} vs E1 form {closed_form:.1} \
             (rel {relative:.2e}); "
        ));
    }
    report(6, "ergodic rate closed form", ok, detail.trim_end());
}

#[test]
fn criterion_7_delay_sufficiency() {
    let config = ScenarioConfig::default();
    let intervals = 1_000_000;
    let mut ok = true;
    let mut detail = String::new();

    // At minimum power every link meets 1.15 × its budget.
    for (i, spec) in config.link_delay_specs().iter().enumerate() {
        let solution = min_power(spec, config.sigma_direct[i], config.w).unwrap();
        let delay = run_queue_sim(
            spec,
            solution.p_star,
            config.sigma_direct[i],
            config.w,
            intervals,
            42,
        )
        .unwrap();
        ok &= delay <= 1.15 * spec.d;
        detail.push_str(&format!(
            "link {}: {delay:.3} vs 1.15·D {:.2}; ",
            i + 1,
            1.15 * spec.d
        ));
    }

    // At half power at least one link blows its budget or goes unstable.
    let mut any_violation = false;
    for (i, spec) in config.link_delay_specs().iter().enumerate() {
        let solution = min_power(spec, config.sigma_direct[i], config.w).unwrap();
        match run_queue_sim(
            spec,
            0.5 * solution.p_star,
            config.sigma_direct[i],
            config.w,
            intervals,
            42,
        ) {
            Ok(delay) => any_violation |= delay > 1.15 * spec.d,
            Err(Error::UnstableQueue { .. }) => any_violation = true,
            Err(other) => panic!("unexpected queue failure: {other}"),
        }
    }
    ok &= any_violation;
    detail.push_str(&format!("half power violates: {any_violation}"));

    report(
        7,
        "queueing-delay sufficiency of minimum power",
        ok,
        &detail,
    );
}

#[test]
fn criterion_8_extreme_cases() {
    let config = ScenarioConfig::default();
    let powers = reference_powers(&config);
    let mut ok = true;
    let mut detail = String::new();

    // Loose budget: at or above Ī₀ the greedy allocator shortcuts.
    let i0 = interference_bound(&[0, 0, 0], &powers, &config.sigma_cross, config.n_t).unwrap();
    let loose = greedy_allocate(&powers, &config.sigma_cross, config.n_t, i0 * 1.01).unwrap();
    ok &= loose.shortcut == Shortcut::LooseAic && loose.allocation.bits == vec![0, 0, 0];
    detail.push_str(&format!(
        "loose aic {:.4}: bits {:?} via {}; ",
        i0 * 1.01,
        loose.allocation.bits,
        loose.shortcut.label()
    ));

    // Zero budget: infeasible.
    let zero = greedy_allocate(&powers, &config.sigma_cross, config.n_t, 0.0);
    let infeasible = matches!(&zero, Err(e) if e.is_infeasible());
    ok &= infeasible;
    detail.push_str(&format!("zero aic infeasible: {infeasible}; "));

    // Distance round trip: path-loss variances at the minimum safe
    // distance reproduce the budget exactly.
    let aic = 0.01;
    let alpha = 2.0;
    let d = min_safe_distance(&powers, config.n_t, aic, alpha).unwrap();
    let sigma = d.powf(-alpha);
    let i0_at_d = interference_bound(&[0, 0, 0], &powers, &[sigma; 3], config.n_t).unwrap();
    let round_trip = (i0_at_d - aic).abs() <= 1e-9 * aic;
    ok &= round_trip;
    detail.push_str(&format!(
        "distance {d:.3} round-trips Ī₀ {i0_at_d:.12} vs aic {aic}"
    ));

    report(8, "extreme cases", ok, &detail);
}

fn cli_binary() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cahnet"))
}

fn bundled_config() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs/default.toml")
}

#[test]
fn criterion_9_byte_identical_csv() {
    let dir = std::env::temp_dir();
    let first = dir.join("cahnet-acceptance-fig2-a.csv");
    let second = dir.join("cahnet-acceptance-fig2-b.csv");
    for out in [&first, &second] {
        let status = cli_binary()
            .args([
                "--config",
                bundled_config().to_str().unwrap(),
                "reproduce-fig2",
                "--aic-list",
                "0.02",
                "--trials",
                "10000",
                "--seed",
                "42",
                "--out",
                out.to_str().unwrap(),
            ])
            .stdout(std::process::Stdio::null())
            .status()
            .expect("binary runs");
        assert!(status.success(), "reproduce-fig2 failed");
    }
    let a = std::fs::read(&first).unwrap();
    let b = std::fs::read(&second).unwrap();
    let identical = a == b;
    let _ = std::fs::remove_file(&first);
    let _ = std::fs::remove_file(&second);
    report(
        9,
        "seeded CSV reproducibility",
        identical && !a.is_empty(),
        &format!(
            "two seeded reproduce-fig2 runs: {} bytes, identical: {identical}",
            a.len()
        ),
    );
}
