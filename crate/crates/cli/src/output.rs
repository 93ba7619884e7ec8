//! CSV and JSON rendering. Floats are written in shortest round-trip form,
//! so identical inputs give byte-identical output.

use serde::Serialize;

use crate::commands::{CurvatureRow, FluidRow, HorizonsOutput, TransformOutput};
use crate::verify::VerifyReport;

/// Shortest representation that parses back to the same `f64`; scientific
/// notation outside `[1e-4, 1e16)`.
pub fn fmt_f64(x: f64) -> String {
    let a = x.abs();
    if a == 0.0 || (1e-4..1e16).contains(&a) || !a.is_finite() {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

pub trait CsvRecord {
    const HEADER: &'static str;
    fn fields(&self) -> Vec<String>;
}

fn floats(v: &[f64]) -> Vec<String> {
    v.iter().map(|x| fmt_f64(*x)).collect()
}

impl CsvRecord for HorizonsOutput {
    const HEADER: &'static str = "r_plus,r_minus,extremal_margin";
    fn fields(&self) -> Vec<String> {
        floats(&[self.r_plus, self.r_minus, self.extremal_margin])
    }
}

impl CsvRecord for TransformOutput {
    const HEADER: &'static str = "r,mu,paper_closed_form,sqrt_variant";
    fn fields(&self) -> Vec<String> {
        floats(&[self.r, self.mu, self.paper_closed_form, self.sqrt_variant])
    }
}

impl CsvRecord for CurvatureRow {
    const HEADER: &'static str = "r,mu,f1,f2,R_mumu,R_nunu,R_thth,R_phph,scalar";
    fn fields(&self) -> Vec<String> {
        floats(&[
            self.r,
            self.mu,
            self.f1,
            self.f2,
            self.r_mumu,
            self.r_nunu,
            self.r_thth,
            self.r_phph,
            self.scalar,
        ])
    }
}

impl CsvRecord for FluidRow {
    const HEADER: &'static str = "r,mu,rho,pressure,res_mumu,res_nunu,res_thth,res_phph";
    fn fields(&self) -> Vec<String> {
        floats(&[
            self.r,
            self.mu,
            self.rho,
            self.pressure,
            self.res_mumu,
            self.res_nunu,
            self.res_thth,
            self.res_phph,
        ])
    }
}

pub fn to_csv<T: CsvRecord>(rows: &[T]) -> String {
    let mut out = String::with_capacity(64 * (rows.len() + 1));
    out.push_str(T::HEADER);
    out.push('\n');
    for row in rows {
        out.push_str(&row.fields().join(","));
        out.push('\n');
    }
    out
}

/// Check table; notes are not part of the CSV form.
pub fn verify_csv(report: &VerifyReport) -> String {
    let mut out = String::from("name,max_abs_residual,threshold,pass\n");
    for c in &report.checks {
        out.push_str(&format!(
            "{},{},{},{}\n",
            c.name,
            fmt_f64(c.max_abs_residual),
            fmt_f64(c.threshold),
            c.pass
        ));
    }
    out
}

pub fn to_json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("output records contain only finite numbers and strings");
    s.push('\n');
    s
}
