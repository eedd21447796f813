//! Report files on disk and bit-stable CSV tables.
//!
//! CSV rendering is pinned: 17 significant decimal digits, LF line endings,
//! one header row. Re-exporting the same report is byte-identical.

use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::runner::{RunReport, TaskOutcome};

/// Fixed 17-significant-digit decimal rendering used by every CSV emitter.
pub fn format_sig17(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn write_report(report: &RunReport, path: &Path) -> Result<()> {
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent)?;
    }
    std::fs::write(path, report.to_json())?;
    Ok(())
}

pub fn read_report(path: &Path) -> Result<RunReport> {
    let text = std::fs::read_to_string(path)?;
    serde_json::from_str(&text)
        .map_err(|e| Error::Report(format!("cannot parse report {}: {e}", path.display())))
}

struct CsvTable {
    suffix: String,
    header: &'static str,
    rows: Vec<String>,
}

fn num_row(values: &[f64]) -> String {
    values.iter().map(|v| format_sig17(*v)).collect::<Vec<_>>().join(",")
}

fn tables_of(outcome: &TaskOutcome) -> Vec<CsvTable> {
    match outcome {
        TaskOutcome::Estimators { estimates } => vec![CsvTable {
            suffix: "estimates".into(),
            header: "estimator,value,sample_size",
            rows: estimates
                .iter()
                .map(|e| format!("{:?},{},{}", e.kind, format_sig17(e.value), e.sample_size))
                .collect(),
        }],
        TaskOutcome::ScalingCheck(rec) => vec![CsvTable {
            suffix: "scaling".into(),
            header: "estimator,rho,base_value,scaled_value,rel_err,witnesses_match",
            rows: rec
                .rows
                .iter()
                .map(|r| {
                    format!(
                        "{},{},{},{},{},{}",
                        r.estimator,
                        format_sig17(r.rho),
                        format_sig17(r.base_value),
                        format_sig17(r.scaled_value),
                        format_sig17(r.rel_err),
                        r.witnesses_match
                    )
                })
                .collect(),
        }],
        TaskOutcome::NuProfile(profile) => vec![profile_table("profile", profile)],
        TaskOutcome::Degree(d) => vec![CsvTable {
            suffix: "degree".into(),
            header: "rho,psi,log_residual",
            rows: d
                .rho_grid
                .iter()
                .zip(&d.psi_values)
                .zip(&d.log_residuals)
                .map(|((rho, psi), res)| num_row(&[*rho, *psi, *res]))
                .collect(),
        }],
        TaskOutcome::Spherical(rec) => vec![CsvTable {
            suffix: "spheres".into(),
            header: "rho0,psi_sphere",
            rows: rec.sphere_values.iter().map(|(r, v)| num_row(&[*r, *v])).collect(),
        }],
        TaskOutcome::ZeroPropagation(rec) => vec![CsvTable {
            suffix: "propagation".into(),
            header: "rho,psi_sphere,psi_ball,tol_zero",
            rows: rec
                .rows
                .iter()
                .map(|r| num_row(&[r.rho, r.sphere_value, r.ball_value, r.tol_zero]))
                .collect(),
        }],
        TaskOutcome::CondensingRate(table) => vec![rate_table("rate", table)],
        TaskOutcome::Classify(rec) => vec![
            CsvTable {
                suffix: "principal_spheres".into(),
                header: "rho,psi,tol_zero",
                rows: rec
                    .principal_sphere_rows
                    .iter()
                    .map(|(r, v, t)| num_row(&[*r, *v, *t]))
                    .collect(),
            },
            rate_table("ball_rate", &rec.ball_rate),
            rate_table("sphere_rate", &rec.sphere_rate),
        ],
        TaskOutcome::Improving(rec) => rec
            .per_set
            .iter()
            .enumerate()
            .map(|(i, s)| profile_table(format!("set{i}_profile"), &s.profile))
            .collect(),
        TaskOutcome::ImprovingCorollary(rec) => {
            let mut tables: Vec<CsvTable> = rec
                .improving
                .per_set
                .iter()
                .enumerate()
                .map(|(i, s)| profile_table(format!("set{i}_profile"), &s.profile))
                .collect();
            tables.push(rate_table("ball_rate", &rec.classification.ball_rate));
            tables
        }
        TaskOutcome::Comparability(rec) => vec![CsvTable {
            suffix: "summary".into(),
            header: "domination_holds,nu_dominated,nu_dominating,correction,ordering_holds",
            rows: vec![format!(
                "{},{},{},{},{}",
                rec.domination_holds,
                rec.nu_dominated.map_or(String::new(), format_sig17),
                rec.nu_dominating.map_or(String::new(), format_sig17),
                format_sig17(rec.correction),
                rec.ordering_holds.map_or(String::new(), |b| b.to_string()),
            )],
        }],
        TaskOutcome::Contrast(rec) => vec![contrast_table(rec)],
        TaskOutcome::DerivativeSuite(rec) => vec![
            CsvTable {
                suffix: "remainder".into(),
                header: "radius,ratio",
                rows: rec
                    .remainder
                    .radii
                    .iter()
                    .zip(&rec.remainder.ratios)
                    .map(|(r, v)| num_row(&[*r, *v]))
                    .collect(),
            },
            contrast_table(&rec.derivative_contrast),
            rate_table("ball_rate", &rec.ball_rate),
            rate_table("sphere_rate", &rec.sphere_rate),
        ],
    }
}

fn profile_table(suffix: impl Into<String>, profile: &crate::estimators::NuProfile) -> CsvTable {
    CsvTable {
        suffix: suffix.into(),
        header: "delta,nu_hat",
        rows: profile
            .deltas
            .iter()
            .zip(&profile.values)
            .map(|(d, v)| num_row(&[*d, *v]))
            .collect(),
    }
}

fn rate_table(suffix: &str, table: &crate::analysis::RateTable) -> CsvTable {
    CsvTable {
        suffix: suffix.into(),
        header: "radius,psi_image,psi_set,rate",
        rows: table
            .rows
            .iter()
            .map(|r| num_row(&[r.radius, r.psi_image, r.psi_set, r.rate]))
            .collect(),
    }
}

fn contrast_table(rec: &crate::analysis::ContrastRecord) -> CsvTable {
    CsvTable {
        suffix: "contrast".into(),
        header: "net_size,image_chi,base_chi,ratio",
        rows: rec
            .rows
            .iter()
            .map(|r| {
                format!(
                    "{},{},{},{}",
                    r.net_size,
                    format_sig17(r.image_chi),
                    format_sig17(r.base_chi),
                    format_sig17(r.ratio)
                )
            })
            .collect(),
    }
}

/// Writes every table of the named task into `dir`, one CSV per table, named
/// `<task>_<table>.csv`. Returns the written paths in order.
pub fn export_csv(report: &RunReport, task_name: &str, dir: &Path) -> Result<Vec<PathBuf>> {
    let task = report
        .tasks
        .iter()
        .find(|t| t.name == task_name)
        .ok_or_else(|| Error::Report(format!("no task named {task_name:?} in the report")))?;
    let record = task
        .record
        .as_ref()
        .ok_or_else(|| Error::Report(format!("task {task_name:?} has no record (it errored)")))?;
    std::fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    for table in tables_of(record) {
        let mut text = String::new();
        text.push_str(table.header);
        text.push('\n');
        for row in &table.rows {
            text.push_str(row);
            text.push('\n');
        }
        let path = dir.join(format!("{task_name}_{}.csv", table.suffix));
        std::fs::write(&path, text)?;
        written.push(path);
    }
    Ok(written)
}
