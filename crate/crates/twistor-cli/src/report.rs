//! Report records and writers. Artifacts are byte-stable for a fixed
//! configuration and seed: records are sorted, sample order is
//! deterministic, and wall-clock timing stays out of the serialized forms.

use serde::Serialize;
use std::io::Write;
use twistor_geom::sigma::MinimalityReport;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize)]
pub struct SampleRecord {
    pub sample_index: usize,
    pub t: f64,
    pub residual: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckRecord {
    pub check_id: String,
    pub manifold: String,
    pub structure: String,
    pub tolerance: f64,
    pub max_residual: f64,
    pub pass: bool,
    pub samples: Vec<SampleRecord>,
    #[serde(skip)]
    pub wall_time_ms: f64,
}

impl CheckRecord {
    pub fn from_samples(
        check_id: &str,
        manifold: &str,
        structure: &str,
        tolerance: f64,
        residuals: Vec<(f64, f64)>, // (t, residual)
    ) -> CheckRecord {
        let samples: Vec<SampleRecord> = residuals
            .into_iter()
            .enumerate()
            .map(|(i, (t, r))| SampleRecord {
                sample_index: i,
                t,
                residual: r,
                pass: r <= tolerance,
            })
            .collect();
        let max_residual = samples.iter().map(|s| s.residual).fold(0.0, f64::max);
        CheckRecord {
            check_id: check_id.to_string(),
            manifold: manifold.to_string(),
            structure: structure.to_string(),
            tolerance,
            max_residual,
            pass: max_residual <= tolerance,
            samples,
            wall_time_ms: 0.0,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub schema: u32,
    pub command: String,
    pub manifold: String,
    pub structure: String,
    pub seed: u64,
    pub t: Vec<f64>,
    pub records: Vec<CheckRecord>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub minimality: Vec<MinimalityReport>,
}

impl Report {
    pub fn new(command: &str, cfg: &crate::config::Scenario) -> Report {
        Report {
            schema: SCHEMA_VERSION,
            command: command.to_string(),
            manifold: cfg.manifold.clone(),
            structure: cfg.structure.clone(),
            seed: cfg.seed,
            t: cfg.t.clone(),
            records: Vec::new(),
            minimality: Vec::new(),
        }
    }

    pub fn finalize(&mut self) {
        self.records.sort_by(|a, b| {
            (a.check_id.as_str(), a.manifold.as_str(), a.structure.as_str()).cmp(&(
                b.check_id.as_str(),
                b.manifold.as_str(),
                b.structure.as_str(),
            ))
        });
    }

    pub fn all_pass(&self) -> bool {
        self.records.iter().all(|r| r.pass)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serialization");
        s.push('\n');
        s
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("check_id,manifold,structure,t,sample_index,residual,tolerance,pass\n");
        for r in &self.records {
            if r.samples.is_empty() {
                out.push_str(&format!(
                    "{},{},{},,,{:e},{:e},{}\n",
                    r.check_id, r.manifold, r.structure, r.max_residual, r.tolerance, r.pass
                ));
            }
            for s in &r.samples {
                out.push_str(&format!(
                    "{},{},{},{},{},{:e},{:e},{}\n",
                    r.check_id,
                    r.manifold,
                    r.structure,
                    s.t,
                    s.sample_index,
                    s.residual,
                    r.tolerance,
                    s.pass
                ));
            }
        }
        out
    }

    pub fn to_markdown(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "# Verification report (`{}`)\n\nschema {}, seed {}, t = {:?}\n\n",
            self.command, self.schema, self.seed, self.t
        ));
        out.push_str("| check | manifold | structure | max residual | tolerance | result |\n");
        out.push_str("|---|---|---|---|---|---|\n");
        for r in &self.records {
            out.push_str(&format!(
                "| {} | {} | {} | {:.3e} | {:.1e} | {} |\n",
                r.check_id,
                r.manifold,
                r.structure,
                r.max_residual,
                r.tolerance,
                if r.pass { "pass" } else { "FAIL" }
            ));
        }
        if !self.minimality.is_empty() {
            out.push_str("\n## Minimality verdicts\n\n");
            out.push_str(
                "| manifold | structure | class | max trace | analytic | numeric |\n|---|---|---|---|---|---|\n",
            );
            for m in &self.minimality {
                out.push_str(&format!(
                    "| {} | {} | {} | {:.3e} | {} | {} |\n",
                    m.manifold,
                    m.structure,
                    m.class.as_str(),
                    m.max_abs_trace,
                    m.analytic_minimal
                        .map_or("n/a".to_string(), |b| b.to_string()),
                    m.numeric_minimal
                ));
            }
        }
        out
    }

    pub fn render(&self, format: crate::config::OutputFormat) -> String {
        match format {
            crate::config::OutputFormat::Json => self.to_json(),
            crate::config::OutputFormat::Csv => self.to_csv(),
            crate::config::OutputFormat::Markdown => self.to_markdown(),
        }
    }

    /// Human-readable one-line-per-check summary for the terminal.
    pub fn print_summary(&self, mut w: impl Write) {
        for r in &self.records {
            let _ = writeln!(
                w,
                "[{}] {:<40} {:<18} {:<28} max residual {:.3e} (tol {:.1e})",
                if r.pass { "pass" } else { "FAIL" },
                r.check_id,
                r.manifold,
                r.structure,
                r.max_residual,
                r.tolerance
            );
        }
        let _ = writeln!(
            w,
            "{} checks, {} failed",
            self.records.len(),
            self.records.iter().filter(|r| !r.pass).count()
        );
    }
}
