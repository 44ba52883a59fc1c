use std::fmt::Write;

use serde::Serialize;

use super::config::{ExperimentConfig, Format};
use super::run::{csv_field, execute, exit_code, CheckResult, RunError, SummaryRow};
use crate::numfmt::sci;

/// Bundled example configs, by tag.
pub const EXAMPLES: [(&str, &str); 8] = [
    ("sign-operator", include_str!("../../gallery/sign-operator.json")),
    ("unit-ball", include_str!("../../gallery/unit-ball.json")),
    ("strictness", include_str!("../../gallery/strictness.json")),
    ("lipschitz", include_str!("../../gallery/lipschitz.json")),
    ("triangle", include_str!("../../gallery/triangle.json")),
    ("box-normal-cone", include_str!("../../gallery/box-normal-cone.json")),
    ("affine", include_str!("../../gallery/affine.json")),
    ("sum", include_str!("../../gallery/sum.json")),
];

pub fn tags() -> Vec<&'static str> {
    EXAMPLES.iter().map(|(t, _)| *t).collect()
}

/// The bundled config of `tag`.
pub fn config(tag: &str) -> Option<ExperimentConfig> {
    EXAMPLES.iter().find(|(t, _)| *t == tag).map(|(_, text)| ExperimentConfig::parse(text, None).expect("bundled configs parse"))
}

#[derive(Debug, Clone, PartialEq)]
pub struct GalleryRun {
    pub rows: Vec<(String, CheckResult)>,
}

#[derive(Serialize)]
struct JsonRow {
    example: String,
    #[serde(flatten)]
    row: SummaryRow,
}

impl GalleryRun {
    pub fn exit_code(&self) -> i32 {
        let results: Vec<CheckResult> = self.rows.iter().map(|(_, r)| r.clone()).collect();
        exit_code(&results)
    }

    /// The table of example × theorem × status.
    pub fn render(&self, format: Option<Format>) -> String {
        match format {
            None => self.table(),
            Some(Format::Csv) => {
                let mut out = format!("example,{}\n", SummaryRow::CSV_HEADER);
                for (tag, r) in &self.rows {
                    let _ = writeln!(out, "{},{}", csv_field(tag), SummaryRow::of(r).csv());
                }
                out
            }
            Some(Format::Json) => {
                let rows: Vec<JsonRow> = self.rows.iter().map(|(tag, r)| JsonRow { example: tag.clone(), row: SummaryRow::of(r) }).collect();
                crate::json::to_string(&rows).expect("rows serialize")
            }
        }
    }

    fn table(&self) -> String {
        let header = ["example", "check", "theorem_id", "status", "distance", "note"];
        let cells: Vec<[String; 6]> = self
            .rows
            .iter()
            .map(|(tag, r)| {
                [tag.clone(), r.label.clone(), r.theorem_id.as_str().into(), r.report.status.name().into(), sci(r.report.distance), r.note()]
            })
            .collect();
        let mut width = header.map(str::len);
        for row in &cells {
            for (w, c) in width.iter_mut().zip(row) {
                *w = (*w).max(c.chars().count());
            }
        }
        let line = |row: &[String]| {
            let mut s = String::new();
            for (k, (c, w)) in row.iter().zip(&width).enumerate() {
                if k + 1 == row.len() {
                    s.push_str(c);
                } else {
                    let _ = write!(s, "{c:<w$}  ");
                }
            }
            s.trim_end().to_string()
        };
        let mut out = line(&header.map(String::from));
        out.push('\n');
        for row in &cells {
            out.push_str(&line(row));
            out.push('\n');
        }
        let count = |name: &str| self.rows.iter().filter(|(_, r)| r.report.status.name() == name).count();
        let _ = writeln!(
            out,
            "\n{} checks: {} pass, {} fail, {} premise_failed, {} inconclusive",
            self.rows.len(),
            count("pass"),
            count("fail"),
            count("premise_failed"),
            count("inconclusive")
        );
        out
    }
}

/// Runs the bundled examples, or only the one tagged `only`.
pub fn run(only: Option<&str>) -> Result<GalleryRun, RunError> {
    let selected: Vec<&str> = match only {
        Some(tag) if !tags().contains(&tag) => {
            return Err(RunError::Config(super::config::ConfigError(format!("unknown gallery tag {tag}; known tags: {}", tags().join(", ")))));
        }
        Some(tag) => vec![tag],
        None => tags(),
    };
    let mut rows = Vec::new();
    for tag in selected {
        let cfg = config(tag).expect("tag is known");
        for r in execute(&cfg)? {
            rows.push((tag.to_string(), r));
        }
    }
    Ok(GalleryRun { rows })
}
