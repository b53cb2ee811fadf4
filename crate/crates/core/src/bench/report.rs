use std::fmt::Write;
use std::str::FromStr;

use super::{BenchmarkReport, Configuration};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    /// One row per (configuration, run): `config,run,iterations,solve_ms,precond_ms`.
    Csv,
    /// One row per history sample: `config,run,k,error_opt,error_feas,gamma`.
    HistoryCsv,
    Json,
    /// 2×2 table, rows by step selection and columns by preconditioner.
    Markdown,
}

impl FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(ReportFormat::Csv),
            "history-csv" | "history_csv" => Ok(ReportFormat::HistoryCsv),
            "json" => Ok(ReportFormat::Json),
            "markdown" | "markdown-table" | "md" => Ok(ReportFormat::Markdown),
            other => Err(Error::InvalidArgument(format!(
                "unsupported report format `{other}`"
            ))),
        }
    }
}

pub fn emit_report(report: &BenchmarkReport, format: ReportFormat) -> Result<String> {
    if report.records.is_empty() && report.runs.is_empty() {
        return Err(Error::InvalidArgument("report has no records".into()));
    }
    let mut out = String::new();
    match format {
        ReportFormat::Csv => {
            out.push_str("config,run,iterations,solve_ms,precond_ms\n");
            for r in &report.records {
                writeln!(
                    out,
                    "{},{},{},{},{}",
                    r.config, r.run, r.iterations, r.solve_ms, r.precond_ms
                )
                .expect("write to string");
            }
        }
        ReportFormat::HistoryCsv => {
            out.push_str("config,run,k,error_opt,error_feas,gamma\n");
            for r in &report.records {
                for h in &r.history {
                    let opt = h.error_opt.map(|e| e.to_string()).unwrap_or_default();
                    writeln!(
                        out,
                        "{},{},{},{},{},{}",
                        r.config, r.run, h.k, opt, h.error_feas, h.gamma
                    )
                    .expect("write to string");
                }
            }
        }
        ReportFormat::Json => {
            out = serde_json::to_string_pretty(report).map_err(|e| Error::Format(e.to_string()))?;
        }
        ReportFormat::Markdown => markdown(report, &mut out),
    }
    Ok(out)
}

fn markdown(report: &BenchmarkReport, out: &mut String) {
    let cell = |c: Configuration| match report.summary(c) {
        Some(s) => format!(
            "{:.1} it, {:.3} ms (+{:.3} ms precond)",
            s.mean_iterations, s.mean_solve_ms, s.mean_precond_ms
        ),
        None => "n/a".to_string(),
    };
    writeln!(
        out,
        "{} ({} runs, tol {:e})\n",
        report.problem,
        report.runs.len(),
        report.tol
    )
    .expect("write to string");
    out.push_str("| step selection | no preconditioner | QR preconditioner |\n");
    out.push_str("|---|---|---|\n");
    writeln!(
        out,
        "| off | {} | {} |",
        cell(Configuration::Plain),
        cell(Configuration::Qr)
    )
    .expect("write to string");
    writeln!(
        out,
        "| on | {} | {} |",
        cell(Configuration::Step),
        cell(Configuration::QrStep)
    )
    .expect("write to string");
    if report.invalid_runs > 0 {
        writeln!(
            out,
            "\n{} run(s) excluded after reference solver failure.",
            report.invalid_runs
        )
        .expect("write to string");
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bench::{RunInfo, RunRecord};
    use crate::problem::SpectralData;
    use crate::solver::{HistoryEntry, Status};

    fn record(config: Configuration, history: Vec<HistoryEntry>) -> RunRecord {
        RunRecord {
            config,
            run: 0,
            status: Status::Converged,
            iterations: 12,
            solve_ms: 0.5,
            solve_ms_min: 0.25,
            precond_ms: 0.0,
            spectral: SpectralData {
                lambda_max: 1.0,
                lambda_min: 1.0,
                sigma: 2.0,
                sigma_min: None,
                converged: true,
            },
            step_events: vec![],
            max_step_product: 1.0,
            history,
        }
    }

    fn report(records: Vec<RunRecord>) -> BenchmarkReport {
        let mut r = BenchmarkReport {
            problem: "toy".into(),
            seed: 1,
            k_max: 100,
            tol: 1e-4,
            runs: vec![RunInfo {
                run: 0,
                seed: 1,
                initial_condition: vec![0.1, -0.2],
                reference_iterations: 40,
            }],
            records,
            summaries: vec![],
            invalid_runs: 0,
            warnings: vec![],
        };
        r.summaries = Configuration::ALL
            .iter()
            .filter_map(|&c| super::super::summarize(c, &r.records))
            .collect();
        r
    }

    #[test]
    fn header_only_history() {
        let r = report(vec![record(Configuration::Plain, vec![])]);
        let csv = emit_report(&r, ReportFormat::HistoryCsv).unwrap();
        assert_eq!(csv, "config,run,k,error_opt,error_feas,gamma\n");
        let csv = emit_report(&r, ReportFormat::Csv).unwrap();
        assert_eq!(csv.lines().nth(1), Some("plain,0,12,0.5,0"));
    }

    #[test]
    fn markdown_has_four_cells() {
        let r = report(
            Configuration::ALL
                .iter()
                .map(|&c| record(c, vec![]))
                .collect(),
        );
        let md = emit_report(&r, ReportFormat::Markdown).unwrap();
        let rows: Vec<&str> = md.lines().filter(|l| l.starts_with("| o")).collect();
        assert_eq!(rows.len(), 2);
        assert!(rows.iter().all(|l| l.matches(" it, ").count() == 2));
    }

    #[test]
    fn json_round_trip() {
        let h = vec![HistoryEntry {
            k: 1,
            error_opt: Some(0.1 + 0.2),
            error_feas: 1e-300,
            gamma: 1.0 / 3.0,
        }];
        let r = report(vec![record(Configuration::QrStep, h)]);
        let text = emit_report(&r, ReportFormat::Json).unwrap();
        let back: BenchmarkReport = serde_json::from_str(&text).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn unsupported_format() {
        assert!("xml".parse::<ReportFormat>().is_err());
        assert_eq!(
            "markdown-table".parse::<ReportFormat>().unwrap(),
            ReportFormat::Markdown
        );
    }
}
