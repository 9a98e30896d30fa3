use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use super::ConvergenceReport;
use crate::error::Result;
use crate::roughdata::GENERATOR_VERSION;

pub const CSV_HEADER: &str = "s,tau,err_total,err_z_l2,err_zt_hm2,wall_time,status";

/// Files written next to each other by [`write_report`].
#[derive(Clone, Debug, PartialEq)]
pub struct ReportPaths {
    pub csv: PathBuf,
    pub plot: PathBuf,
    pub meta: PathBuf,
}

impl ReportPaths {
    /// `foo.csv` → `foo_plot.py`, `foo.meta`.
    pub fn for_csv(csv: &Path) -> Self {
        let stem = csv.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "convergence".into());
        ReportPaths {
            csv: csv.to_path_buf(),
            plot: csv.with_file_name(format!("{stem}_plot.py")),
            meta: csv.with_file_name(format!("{stem}.meta")),
        }
    }
}

fn num(v: f64) -> String {
    format!("{v:e}")
}

/// CSV with a header row, `.` decimals and LF line endings.
pub fn csv_string(report: &ConvergenceReport) -> String {
    let mut out = String::new();
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in &report.rows {
        let (t, z, zt) = match r.error {
            Some(e) => (num(e.total), num(e.z_l2), num(e.zt_hm2)),
            None => ("NaN".into(), "NaN".into(), "NaN".into()),
        };
        let _ = writeln!(out, "{},{},{t},{z},{zt},{:.6},{}", num(r.s), num(r.tau), r.wall_time, r.status);
    }
    out
}

fn meta_string(report: &ConvergenceReport) -> String {
    let stamp = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs());
    let mut out = String::new();
    let _ = writeln!(out, "seed={}", report.seed);
    let _ = writeln!(out, "M={}", report.grid_size);
    let _ = writeln!(out, "T={}", num(report.final_time));
    let _ = writeln!(out, "reference={}", report.reference);
    let _ = writeln!(out, "generator={GENERATOR_VERSION}");
    let _ = writeln!(out, "version={}", env!("CARGO_PKG_VERSION"));
    let _ = writeln!(out, "workers={}", report.workers);
    let _ = writeln!(out, "timestamp={stamp}");
    for f in &report.fits {
        match f.order {
            Some(p) => {
                let _ = writeln!(out, "order[s={}]={p:.6} (points={})", num(f.s), f.points);
            }
            None => {
                let _ = writeln!(out, "order[s={}]=insufficient points ({})", num(f.s), f.points);
            }
        }
    }
    out
}

/// Matplotlib script plotting error against τ on log-log axes with a
/// reference slope `s/2` per regularity.
pub fn plot_script(csv_name: &str) -> String {
    format!(
        r#"#!/usr/bin/env python3
# log-log error vs step size; dashed lines have slope s/2
import csv
import collections
import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

rows = collections.defaultdict(list)
with open("{csv_name}") as fh:
    for r in csv.DictReader(fh):
        if r["status"] == "ok":
            rows[float(r["s"])].append((float(r["tau"]), float(r["err_total"])))

fig, ax = plt.subplots()
for s, pts in sorted(rows.items()):
    pts.sort()
    taus = [p[0] for p in pts]
    errs = [p[1] for p in pts]
    line, = ax.loglog(taus, errs, "o-", label=f"s = {{s:g}}")
    ref = [errs[-1] * (t / taus[-1]) ** (s / 2) for t in taus]
    ax.loglog(taus, ref, "--", color=line.get_color(), label=f"O(tau^{{s / 2:g}})")
ax.set_xlabel("tau")
ax.set_ylabel("error")
ax.legend()
fig.savefig("{csv_name}".rsplit(".", 1)[0] + ".png", dpi=150)
"#
    )
}

pub fn write_report(report: &ConvergenceReport, csv: &Path) -> Result<ReportPaths> {
    let paths = ReportPaths::for_csv(csv);
    fs::write(&paths.csv, csv_string(report))?;
    let name = paths.csv.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    fs::write(&paths.plot, plot_script(&name))?;
    fs::write(&paths.meta, meta_string(report))?;
    Ok(paths)
}
