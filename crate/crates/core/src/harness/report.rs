use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::flags::Flags;
use crate::io::{create, fmt_f64};

/// One measured value.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub check: String,
    pub params: String,
    pub f_id: String,
    /// Empty for single-function measurements.
    pub g_id: String,
    pub value: f64,
    pub flags: Flags,
}

/// One budgeted statistic of a check group.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub check: String,
    /// Budget key suffix, e.g. `lowhigh` for `bilinear.lowhigh`.
    pub stat: String,
    pub params: String,
    pub value: f64,
    pub budget: f64,
    /// `max_all / max_base - 1` under corpus doubling, where it applies.
    pub growth: Option<f64>,
    pub pass: bool,
    pub flags: Flags,
}

impl Summary {
    pub fn key(&self) -> String {
        format!("{}.{}", self.check, self.stat)
    }
}

/// Rows and summaries of one check group, plus its wall time.
#[derive(Clone, Debug, Default)]
pub struct GroupReport {
    pub name: String,
    pub rows: Vec<Row>,
    pub summaries: Vec<Summary>,
    /// Errors raised while the group ran; a group with errors fails.
    pub errors: Vec<String>,
    pub seconds: f64,
}

impl GroupReport {
    pub fn pass(&self) -> bool {
        self.errors.is_empty() && self.summaries.iter().all(|s| s.pass)
    }
}

/// Everything a suite run produced, in registry order.
#[derive(Clone, Debug, Default)]
pub struct ExperimentReport {
    pub config_hash: String,
    pub groups: Vec<GroupReport>,
}

#[derive(Serialize)]
struct JsonRow<'a> {
    check: &'a str,
    params: &'a str,
    f_id: &'a str,
    g_id: &'a str,
    value: f64,
    flags: String,
    config_hash: &'a str,
}

#[derive(Serialize)]
struct JsonSummary<'a> {
    check: &'a str,
    stat: &'a str,
    params: &'a str,
    value: f64,
    budget: f64,
    growth: Option<f64>,
    pass: bool,
    flags: String,
    config_hash: &'a str,
}

#[derive(Serialize)]
struct JsonGroup<'a> {
    name: &'a str,
    pass: bool,
    errors: &'a [String],
}

#[derive(Serialize)]
struct JsonReport<'a> {
    config_hash: &'a str,
    pass: bool,
    groups: Vec<JsonGroup<'a>>,
    summaries: Vec<JsonSummary<'a>>,
    rows: Vec<JsonRow<'a>>,
}

fn csv_err(e: csv::Error) -> Error {
    Error::Format(e.to_string())
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(fmt_f64).unwrap_or_default()
}

impl ExperimentReport {
    pub fn pass(&self) -> bool {
        self.groups.iter().all(|g| g.pass())
    }

    pub fn rows(&self) -> impl Iterator<Item = &Row> {
        self.groups.iter().flat_map(|g| &g.rows)
    }

    pub fn summaries(&self) -> impl Iterator<Item = &Summary> {
        self.groups.iter().flat_map(|g| &g.summaries)
    }

    pub fn group(&self, name: &str) -> Option<&GroupReport> {
        self.groups.iter().find(|g| g.name == name)
    }

    /// First summary with the given `check.stat` key and, if given, params.
    pub fn summary(&self, key: &str, params: Option<&str>) -> Option<&Summary> {
        self.summaries()
            .find(|s| s.key() == key && params.is_none_or(|p| s.params == p))
    }

    pub fn write_rows_csv(&self, w: impl Write) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["check", "params", "f_id", "g_id", "value", "flags", "config_hash"])
            .map_err(csv_err)?;
        for r in self.rows() {
            out.write_record([
                r.check.as_str(),
                &r.params,
                &r.f_id,
                &r.g_id,
                &fmt_f64(r.value),
                &r.flags.to_string(),
                &self.config_hash,
            ])
            .map_err(csv_err)?;
        }
        out.flush().map_err(|e| Error::Format(e.to_string()))
    }

    pub fn write_summary_csv(&self, w: impl Write) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record([
            "check", "stat", "params", "value", "budget", "growth", "pass", "flags", "config_hash",
        ])
        .map_err(csv_err)?;
        for g in &self.groups {
            for s in &g.summaries {
                out.write_record([
                    s.check.as_str(),
                    &s.stat,
                    &s.params,
                    &fmt_f64(s.value),
                    &fmt_f64(s.budget),
                    &fmt_opt(s.growth),
                    if s.pass { "pass" } else { "fail" },
                    &s.flags.to_string(),
                    &self.config_hash,
                ])
                .map_err(csv_err)?;
            }
            for e in &g.errors {
                out.write_record([g.name.as_str(), "error", e, "", "", "", "fail", "", &self.config_hash])
                    .map_err(csv_err)?;
            }
        }
        out.flush().map_err(|e| Error::Format(e.to_string()))
    }

    pub fn write_json(&self, w: impl Write, with_rows: bool) -> Result<()> {
        let hash = self.config_hash.as_str();
        let report = JsonReport {
            config_hash: hash,
            pass: self.pass(),
            groups: self
                .groups
                .iter()
                .map(|g| JsonGroup {
                    name: &g.name,
                    pass: g.pass(),
                    errors: &g.errors,
                })
                .collect(),
            summaries: self
                .summaries()
                .map(|s| JsonSummary {
                    check: &s.check,
                    stat: &s.stat,
                    params: &s.params,
                    value: s.value,
                    budget: s.budget,
                    growth: s.growth,
                    pass: s.pass,
                    flags: s.flags.to_string(),
                    config_hash: hash,
                })
                .collect(),
            rows: if with_rows {
                self.rows()
                    .map(|r| JsonRow {
                        check: &r.check,
                        params: &r.params,
                        f_id: &r.f_id,
                        g_id: &r.g_id,
                        value: r.value,
                        flags: r.flags.to_string(),
                        config_hash: hash,
                    })
                    .collect()
            } else {
                Vec::new()
            },
        };
        serde_json::to_writer_pretty(w, &report).map_err(|e| Error::Format(e.to_string()))
    }

    /// Writes `rows.csv`, `summary.csv` and `report.json` into `dir`; returns the paths.
    pub fn write_dir(&self, dir: &Path) -> Result<Vec<PathBuf>> {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        let paths = [dir.join("rows.csv"), dir.join("summary.csv"), dir.join("report.json")];
        self.write_rows_csv(create(&paths[0])?)?;
        self.write_summary_csv(create(&paths[1])?)?;
        self.write_json(create(&paths[2])?, true)?;
        Ok(paths.to_vec())
    }

    /// Human-readable digest: one line per summary.
    pub fn digest(&self) -> String {
        let mut s = String::new();
        for g in &self.groups {
            for m in &g.summaries {
                let growth = m.growth.map(|v| format!(" growth={v:+.3}")).unwrap_or_default();
                s += &format!(
                    "{} {}.{} [{}] value={:.4e} budget={:.3e}{growth}\n",
                    if m.pass { "PASS" } else { "FAIL" },
                    m.check,
                    m.stat,
                    m.params,
                    m.value,
                    m.budget
                );
            }
            for e in &g.errors {
                s += &format!("FAIL {} error: {e}\n", g.name);
            }
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn report() -> ExperimentReport {
        ExperimentReport {
            config_hash: "abc".into(),
            groups: vec![GroupReport {
                name: "demo".into(),
                rows: vec![Row {
                    check: "demo".into(),
                    params: "s=1,p=2".into(),
                    f_id: "h_0".into(),
                    g_id: String::new(),
                    value: 0.1,
                    flags: Flags::LOSSY,
                }],
                summaries: vec![Summary {
                    check: "demo".into(),
                    stat: "ratio".into(),
                    params: "s=1,p=2".into(),
                    value: 0.1,
                    budget: 1.0,
                    growth: Some(0.0),
                    pass: true,
                    flags: Flags::NONE,
                }],
                errors: vec![],
                seconds: 0.5,
            }],
        }
    }

    #[test]
    fn csv_quotes_commas_and_keeps_precision() {
        let mut buf = Vec::new();
        report().write_rows_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(
            text,
            "check,params,f_id,g_id,value,flags,config_hash\n\
             demo,\"s=1,p=2\",h_0,,1.0000000000000001e-1,lossy,abc\n"
        );
    }

    #[test]
    fn json_keys_follow_declaration_order() {
        let mut buf = Vec::new();
        report().write_json(&mut buf, true).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let pos = |k: &str| text.find(k).unwrap();
        assert!(pos("\"config_hash\"") < pos("\"pass\"") && pos("\"summaries\"") < pos("\"rows\""));
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["rows"][0]["flags"], "lossy");
    }
}
