//! Recompute the reference tables and print them next to the printed values.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use anyhow::{Context, Result};

use gardner_core::lambda_opt::scan_with;
use gardner_core::problems::preset_of;
use gardner_core::reference::{
    ConservationRow, GENERATION_CONSERVATION, KINK_CONSERVATION, KINK_ERRORS, PULSE_CONSERVATION,
    PULSE_ERRORS,
};
use gardner_core::{
    linf_error, ExperimentPreset, PhiReflection, PresetName, Quadrature, RunOptions, ScanSpec,
};

enum Style {
    Error,
    Invariant,
    Lambda,
}

struct Table {
    text: String,
}

impl Table {
    fn new(title: &str) -> Self {
        let mut text = String::new();
        let _ = writeln!(text, "{title}");
        let _ = writeln!(
            text,
            "{:<8}{:<24}{:>16}{:>16}{:>11}",
            "", "column", "computed", "printed", "rel.dev"
        );
        Self { text }
    }

    fn group(&mut self, label: &str) {
        let _ = writeln!(self.text, "{label}");
    }

    fn cell(&mut self, column: &str, computed: f64, printed: f64, style: Style) {
        let (c, p) = match style {
            Style::Error => (format!("{computed:.5e}"), format!("{printed:.5e}")),
            Style::Invariant => (format!("{computed:.7}"), format!("{printed:.4}")),
            Style::Lambda => (format!("{computed:.6}"), format!("{printed:.5}")),
        };
        let dev = (computed - printed) / printed.abs();
        let _ = writeln!(
            self.text,
            "{:<8}{column:<24}{c:>16}{p:>16}{:>10.2}%",
            "",
            dev * 100.0
        );
    }
}

/// Errors at each of `times` for one value of `lambda`.
fn errors_at(
    preset: &ExperimentPreset,
    lambda: f64,
    times: &[f64],
    reflection: PhiReflection,
) -> Result<Vec<f64>> {
    let p = preset.clone().with_lambda(lambda);
    let options = RunOptions {
        reflection,
        snapshot_times: times.to_vec(),
        diagnostics_every: 0,
        ..RunOptions::default()
    };
    let exact = p.exact.clone().context("preset has no exact solution")?;
    let out = gardner_core::run(&p, &options)?;
    out.snapshots
        .iter()
        .map(|s| Ok(linf_error(s, exact.as_ref(), &p.grid, lambda)?))
        .collect()
}

struct ErrorRow {
    n: usize,
    lambda_opt: f64,
    /// `(lambda = 0, optimal lambda)` at the intermediate and final time.
    printed: [(f64, f64); 2],
}

fn error_table(
    name: PresetName,
    title: &str,
    times: [f64; 2],
    rows: &[ErrorRow],
    reflection: PhiReflection,
) -> Result<Table> {
    let mut table = Table::new(title);
    for row in rows {
        let preset = preset_of(name).with_n(row.n)?.with_t_end(times[1]);
        let spec = ScanSpec::new(times[1]);
        let result = scan_with(&preset, &spec, reflection)?;
        let base = errors_at(&preset, 0.0, &times, reflection)?;
        let best = errors_at(&preset, result.lambda_star, &times, reflection)?;
        table.group(&format!("N = {}", row.n));
        table.cell("lambda*", result.lambda_star, row.lambda_opt, Style::Lambda);
        for (k, t) in times.iter().enumerate() {
            table.cell(
                &format!("L_inf({t}) lambda=0"),
                base[k],
                row.printed[k].0,
                Style::Error,
            );
            table.cell(
                &format!("L_inf({t}) lambda*"),
                best[k],
                row.printed[k].1,
                Style::Error,
            );
        }
    }
    Ok(table)
}

fn conservation_table(
    preset: &ExperimentPreset,
    title: &str,
    rows: &[ConservationRow],
    by_time: bool,
    quadrature: Quadrature,
    reflection: PhiReflection,
) -> Result<Table> {
    let mut table = Table::new(title);
    let mut runs = Vec::new();
    if by_time {
        let times: Vec<f64> = rows.iter().map(|r| r.key).collect();
        let options = RunOptions {
            reflection,
            quadrature,
            snapshot_times: Vec::new(),
            diagnostics_every: 1,
        };
        let out = gardner_core::run(preset, &options)?;
        for t in times {
            let rec = out
                .diagnostics
                .iter()
                .find(|d| (d.time - t).abs() < 1e-9)
                .with_context(|| format!("no diagnostics at t = {t}"))?;
            runs.push((out.diagnostics[0], *rec));
        }
    } else {
        for row in rows {
            let p = preset.clone().with_n(row.key as usize)?;
            let options = RunOptions {
                reflection,
                quadrature,
                snapshot_times: Vec::new(),
                diagnostics_every: 0,
            };
            let out = gardner_core::run(&p, &options)?;
            runs.push((out.diagnostics[0], *out.final_record()));
        }
    }
    for (row, (first, last)) in rows.iter().zip(runs) {
        if by_time {
            table.group(&format!("t = {}", row.key));
        } else {
            table.group(&format!("N = {}", row.key));
        }
        table.cell("M0", first.m, row.m0, Style::Invariant);
        table.cell("E0", first.e, row.e0, Style::Invariant);
        table.cell("H0", first.h_quantity, row.h0, Style::Invariant);
        table.cell(
            &format!("C(M) at t={}", last.time),
            last.c_m,
            row.c_m,
            Style::Error,
        );
        table.cell(
            &format!("C(E) at t={}", last.time),
            last.c_e,
            row.c_e,
            Style::Error,
        );
        table.cell(
            &format!("C(H) at t={}", last.time),
            last.c_h,
            row.c_h,
            Style::Error,
        );
    }
    Ok(table)
}

pub fn cmd_table(
    id: u8,
    quadrature: Quadrature,
    reflection: PhiReflection,
    out: Option<&Path>,
) -> Result<u8> {
    let table = match id {
        1 => {
            let rows: Vec<ErrorRow> = PULSE_ERRORS
                .iter()
                .map(|r| ErrorRow {
                    n: r.n,
                    lambda_opt: r.lambda_opt,
                    printed: [(r.linf_2_5, r.linf_2_5_opt), (r.linf_5, r.linf_5_opt)],
                })
                .collect();
            error_table(
                PresetName::Pulse,
                "Table 1: pulse, L_inf errors at lambda = 0 and at lambda* (optimised at t = 5)",
                [2.5, 5.0],
                &rows,
                reflection,
            )?
        }
        2 => conservation_table(
            &preset_of(PresetName::Pulse),
            &format!("Table 2: pulse, invariants and relative changes at t = 5 ({quadrature} quadrature)"),
            &PULSE_CONSERVATION,
            false,
            quadrature,
            reflection,
        )?,
        3 => {
            let rows: Vec<ErrorRow> = KINK_ERRORS
                .iter()
                .map(|r| ErrorRow {
                    n: r.n,
                    lambda_opt: r.lambda_opt,
                    printed: [(r.linf_4, r.linf_4_opt), (r.linf_12, r.linf_12_opt)],
                })
                .collect();
            error_table(
                PresetName::Kink,
                "Table 3: kink, L_inf errors at lambda = 0 and at lambda* (optimised at t = 12)",
                [4.0, 12.0],
                &rows,
                reflection,
            )?
        }
        4 => conservation_table(
            &preset_of(PresetName::Kink),
            &format!("Table 4: kink, invariants and relative changes at t = 12 ({quadrature} quadrature)"),
            &KINK_CONSERVATION,
            false,
            quadrature,
            reflection,
        )?,
        5 => conservation_table(
            &preset_of(PresetName::Generation),
            &format!("Table 5: wave generation, invariants and relative changes ({quadrature} quadrature)"),
            &GENERATION_CONSERVATION,
            true,
            quadrature,
            reflection,
        )?,
        other => anyhow::bail!("unknown table {other}"),
    };
    print!("{}", table.text);
    if let Some(path) = out {
        fs::write(path, &table.text).with_context(|| format!("cannot write {}", path.display()))?;
    }
    Ok(0)
}
