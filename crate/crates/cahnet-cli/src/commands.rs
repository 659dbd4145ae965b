//! The five subcommands: single-scenario control, Monte Carlo
//! validation, the bit-allocation table sweep, the interference sweep,
//! and the queueing-delay check.

use std::fmt::Write as _;

use cahnet::config::ScenarioConfig;
use cahnet::control::{
    exhaustive_allocate, greedy_allocate, interference_bound, total_cost, ControlResult, Shortcut,
    DEFAULT_BIT_CAP,
};
use cahnet::delay::{scenario_min_powers, PowerSolution};
use cahnet::montecarlo::{run_interference_mc, run_queue_sim};
use cahnet::{Error, Result};

use crate::report::{emit_csv, render_table, RunManifest};
use crate::Method;

/// Success exit code.
pub const EXIT_OK: u8 = 0;
/// Exit code signalling that at least one grid point was infeasible
/// (marked in the table rather than aborting the sweep).
pub const EXIT_INFEASIBLE: u8 = 2;

fn allocate(
    method: Method,
    powers: &[f64],
    sigma_cross: &[f64],
    n_t: u32,
    aic: f64,
) -> Result<ControlResult> {
    match method {
        Method::Ga => greedy_allocate(powers, sigma_cross, n_t, aic),
        Method::Ea => exhaustive_allocate(powers, sigma_cross, n_t, aic, DEFAULT_BIT_CAP),
    }
}

fn powers_of(solutions: &[PowerSolution]) -> Vec<f64> {
    solutions.iter().map(|s| s.p_star).collect()
}

/// One CSV row shared by `control`, `reproduce-table1`, and the loose
/// appended row: aic, method, per-link bits, total, bound, cost,
/// shortcut.
fn allocation_csv_row(
    aic: f64,
    method: Method,
    result: &ControlResult,
    mu: f64,
    phi: f64,
) -> String {
    let mut row = format!("{aic},{}", method.label());
    for b in &result.allocation.bits {
        let _ = write!(row, ",{b}");
    }
    let _ = write!(
        row,
        ",{},{},{},{}",
        result.allocation.total_bits(),
        result.allocation.bound_value,
        total_cost(&result.allocation, mu, phi),
        result.shortcut.label()
    );
    row
}

/// A marker row for an infeasible grid point.
fn infeasible_csv_row(aic: f64, method: Method, k: usize, err: &Error) -> String {
    let marker = match err {
        Error::ZeroBudget { .. } => Shortcut::ZeroAicInfeasible.label(),
        _ => "infeasible",
    };
    let mut row = format!("{aic},{}", method.label());
    for _ in 0..k {
        row.push_str(",-");
    }
    let _ = write!(row, ",-,-,-,{marker}");
    row
}

fn allocation_table_header(k: usize) -> Vec<String> {
    let mut headers = vec!["aic".to_string(), "method".to_string()];
    for i in 1..=k {
        headers.push(format!("b{i}"));
    }
    headers.extend(
        ["total_bits", "bound", "cost", "shortcut"]
            .iter()
            .map(|s| s.to_string()),
    );
    headers
}

fn allocation_text_row(
    aic: f64,
    method: Method,
    result: &ControlResult,
    mu: f64,
    phi: f64,
) -> Vec<String> {
    let mut row = vec![format!("{aic:.6}"), method.label().to_string()];
    for b in &result.allocation.bits {
        row.push(b.to_string());
    }
    row.push(result.allocation.total_bits().to_string());
    row.push(format!("{:.6}", result.allocation.bound_value));
    row.push(format!("{:.2}", total_cost(&result.allocation, mu, phi)));
    row.push(result.shortcut.label().to_string());
    row
}

fn infeasible_text_row(aic: f64, method: Method, k: usize, err: &Error) -> Vec<String> {
    let marker = match err {
        Error::ZeroBudget { .. } => Shortcut::ZeroAicInfeasible.label(),
        _ => "infeasible",
    };
    let mut row = vec![format!("{aic:.6}"), method.label().to_string()];
    row.extend(std::iter::repeat_n("-".to_string(), k + 3));
    row.push(marker.to_string());
    row
}

/// `control`: solve one scenario end to end and print the plan.
pub fn cmd_control(
    config: &ScenarioConfig,
    manifest: &RunManifest,
    aic_override: Option<f64>,
    method: Method,
) -> Result<u8> {
    let aic = aic_override.unwrap_or(config.aic);
    let solutions = scenario_min_powers(config)?;
    let powers = powers_of(&solutions);
    let result = allocate(method, &powers, &config.sigma_cross, config.n_t, aic)?;

    let rows: Vec<Vec<String>> = solutions
        .iter()
        .enumerate()
        .map(|(i, s)| {
            vec![
                (i + 1).to_string(),
                format!("{:.6}", s.p_star),
                format!("{:.6}", s.r_bar),
                result.allocation.bits[i].to_string(),
            ]
        })
        .collect();
    print!(
        "{}",
        render_table(&["link", "p_star", "r_bar", "bits"], &rows)
    );
    println!(
        "total_bits {}   bound {:.6}   aic {:.6}   cost {:.2}   shortcut {}",
        result.allocation.total_bits(),
        result.allocation.bound_value,
        aic,
        total_cost(&result.allocation, config.mu, config.phi),
        result.shortcut.label()
    );

    if manifest.output_path.is_some() {
        let mut csv = manifest.metadata_lines();
        let headers = allocation_table_header(config.k);
        let _ = writeln!(csv, "{}", headers.join(","));
        let _ = writeln!(
            csv,
            "{}",
            allocation_csv_row(aic, method, &result, config.mu, config.phi)
        );
        emit_csv(manifest, &csv)?;
    }
    Ok(EXIT_OK)
}

/// `mc`: solve the scenario, then validate the allocation by Monte
/// Carlo against the analytical bound.
pub fn cmd_mc(
    config: &ScenarioConfig,
    manifest: &RunManifest,
    method: Method,
    trials: u64,
    seed: u64,
) -> Result<u8> {
    let solutions = scenario_min_powers(config)?;
    let powers = powers_of(&solutions);
    let result = allocate(method, &powers, &config.sigma_cross, config.n_t, config.aic)?;
    let bits = &result.allocation.bits;
    let stats = run_interference_mc(config, bits, &powers, trials, seed)?;
    let bound = result.allocation.bound_value;

    let bits_list = bits
        .iter()
        .map(u32::to_string)
        .collect::<Vec<_>>()
        .join(",");
    println!(
        "method {}   aic {:.6}   bits {}   trials {}   seed {}",
        method.label(),
        config.aic,
        bits_list,
        trials,
        seed
    );
    println!(
        "empirical_mean_interference {:.6e}   ci_halfwidth {:.2e}   analytical_bound {:.6e}",
        stats.mean_sum_interference, stats.ci_halfwidth, bound
    );
    let rows: Vec<Vec<String>> = (0..config.k)
        .map(|i| {
            vec![
                (i + 1).to_string(),
                format!("{:.2}", stats.mean_rate[i]),
                format!("{:.4}", stats.mean_snr[i]),
                format!("{:.4}", stats.mean_quant_error[i]),
            ]
        })
        .collect();
    print!(
        "{}",
        render_table(
            &["link", "mean_rate", "mean_snr", "mean_quant_error"],
            &rows
        )
    );

    if manifest.output_path.is_some() {
        let mut csv = manifest.metadata_lines();
        let _ = writeln!(
            csv,
            "aic,method,empirical_mean_interference,ci_halfwidth,analytical_bound"
        );
        let _ = writeln!(
            csv,
            "{},{},{},{},{}",
            config.aic,
            method.label(),
            stats.mean_sum_interference,
            stats.ci_halfwidth,
            bound
        );
        emit_csv(manifest, &csv)?;
    }
    Ok(EXIT_OK)
}

/// `reproduce-table1`: the bit-allocation table over an AIC grid, both
/// allocators per grid point, plus an appended loose-budget row at the
/// zero-bit threshold Ī₀.
pub fn cmd_reproduce_table1(
    config: &ScenarioConfig,
    manifest: &RunManifest,
    aic_list: &[f64],
) -> Result<u8> {
    let solutions = scenario_min_powers(config)?;
    let powers = powers_of(&solutions);
    let k = config.k;
    let mut text_rows = Vec::new();
    let mut csv_rows = Vec::new();
    let mut any_infeasible = false;

    for &aic in aic_list {
        for method in [Method::Ga, Method::Ea] {
            match allocate(method, &powers, &config.sigma_cross, config.n_t, aic) {
                Ok(result) => {
                    text_rows.push(allocation_text_row(
                        aic, method, &result, config.mu, config.phi,
                    ));
                    csv_rows.push(allocation_csv_row(
                        aic, method, &result, config.mu, config.phi,
                    ));
                }
                Err(err) if err.is_infeasible() => {
                    any_infeasible = true;
                    text_rows.push(infeasible_text_row(aic, method, k, &err));
                    csv_rows.push(infeasible_csv_row(aic, method, k, &err));
                }
                Err(err) => return Err(err),
            }
        }
    }

    // The loose-budget threshold: at aic = Ī₀ the greedy allocator
    // shortcuts to all-zero bits.
    let i0 = interference_bound(&vec![0; k], &powers, &config.sigma_cross, config.n_t)?;
    let loose = greedy_allocate(&powers, &config.sigma_cross, config.n_t, i0)?;
    text_rows.push(allocation_text_row(
        i0,
        Method::Ga,
        &loose,
        config.mu,
        config.phi,
    ));
    csv_rows.push(allocation_csv_row(
        i0,
        Method::Ga,
        &loose,
        config.mu,
        config.phi,
    ));

    let headers = allocation_table_header(k);
    let header_refs: Vec<&str> = headers.iter().map(String::as_str).collect();
    print!("{}", render_table(&header_refs, &text_rows));

    if manifest.output_path.is_some() {
        let mut csv = manifest.metadata_lines();
        let _ = writeln!(csv, "{}", headers.join(","));
        for row in &csv_rows {
            let _ = writeln!(csv, "{row}");
        }
        emit_csv(manifest, &csv)?;
    }
    Ok(if any_infeasible {
        EXIT_INFEASIBLE
    } else {
        EXIT_OK
    })
}

/// `reproduce-fig2`: empirical mean interference vs analytical bound
/// over the AIC grid, one Monte Carlo run per (aic, method).
pub fn cmd_reproduce_fig2(
    config: &ScenarioConfig,
    manifest: &RunManifest,
    aic_list: &[f64],
    trials: u64,
    seed: u64,
) -> Result<u8> {
    let solutions = scenario_min_powers(config)?;
    let powers = powers_of(&solutions);
    let mut csv = manifest.metadata_lines();
    let _ = writeln!(
        csv,
        "aic,method,empirical_mean_interference,ci_halfwidth,analytical_bound"
    );
    let mut text_rows = Vec::new();
    for &aic in aic_list {
        for method in [Method::Ga, Method::Ea] {
            let result = allocate(method, &powers, &config.sigma_cross, config.n_t, aic)?;
            let stats =
                run_interference_mc(config, &result.allocation.bits, &powers, trials, seed)?;
            let _ = writeln!(
                csv,
                "{},{},{},{},{}",
                aic,
                method.label(),
                stats.mean_sum_interference,
                stats.ci_halfwidth,
                result.allocation.bound_value
            );
            text_rows.push(vec![
                format!("{aic:.6}"),
                method.label().to_string(),
                format!("{:.6e}", stats.mean_sum_interference),
                format!("{:.2e}", stats.ci_halfwidth),
                format!("{:.6e}", result.allocation.bound_value),
            ]);
        }
    }
    if manifest.output_path.is_some() {
        print!(
            "{}",
            render_table(
                &[
                    "aic",
                    "method",
                    "empirical_mean_interference",
                    "ci_halfwidth",
                    "analytical_bound"
                ],
                &text_rows
            )
        );
    }
    emit_csv(manifest, &csv)?;
    Ok(EXIT_OK)
}

/// `queue-check`: simulate every link's queue at (scaled) minimum power
/// and verdict the mean delay against the (scaled) budget.
pub fn cmd_queue_check(
    config: &ScenarioConfig,
    manifest: &RunManifest,
    intervals: u64,
    seed: u64,
    power_scale: f64,
    delay_scale: f64,
) -> Result<u8> {
    if power_scale <= 0.0 || !power_scale.is_finite() {
        return Err(Error::config(
            "power-scale",
            format!("must be positive, got {power_scale}"),
        ));
    }
    if delay_scale <= 0.0 || !delay_scale.is_finite() {
        return Err(Error::config(
            "delay-scale",
            format!("must be positive, got {delay_scale}"),
        ));
    }
    let solutions = scenario_min_powers(config)?;
    let specs = config.link_delay_specs();
    let mut text_rows = Vec::new();
    let mut csv_rows = Vec::new();
    for i in 0..config.k {
        let power = solutions[i].p_star * power_scale;
        let budget = specs[i].d * delay_scale;
        let outcome = run_queue_sim(
            &specs[i],
            power,
            config.sigma_direct[i],
            config.w,
            intervals,
            seed,
        );
        let (delay_text, delay_csv, verdict) = match outcome {
            Ok(delay) => {
                let verdict = if delay <= 1.15 * budget {
                    "pass"
                } else {
                    "fail"
                };
                (format!("{delay:.4}"), format!("{delay}"), verdict)
            }
            Err(Error::UnstableQueue { .. }) => ("-".to_string(), "-".to_string(), "unstable"),
            Err(err) => return Err(err),
        };
        text_rows.push(vec![
            (i + 1).to_string(),
            format!("{:.6}", solutions[i].r_bar),
            format!("{power:.6}"),
            delay_text,
            format!("{budget:.2}"),
            verdict.to_string(),
        ]);
        csv_rows.push(format!(
            "{},{},{},{},{},{}",
            i + 1,
            solutions[i].r_bar,
            power,
            delay_csv,
            budget,
            verdict
        ));
    }
    print!(
        "{}",
        render_table(
            &["link", "r_bar", "p_star", "mean_delay", "budget", "verdict"],
            &text_rows
        )
    );
    if manifest.output_path.is_some() {
        let mut csv = manifest.metadata_lines();
        let _ = writeln!(csv, "link,r_bar,p_star,mean_delay,budget,verdict");
        for row in &csv_rows {
            let _ = writeln!(csv, "{row}");
        }
        emit_csv(manifest, &csv)?;
    }
    Ok(EXIT_OK)
}
