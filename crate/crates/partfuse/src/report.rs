//! Metric reports as TSV and as a text table with strategies as rows and
//! classes plus total as columns ("-" where a class is absent from the
//! ground truth).

use std::fmt::Write as _;

use partfuse_core::metrics::MetricReport;

pub const TSV_HEADER: &str = "class\tpq\tpart_pq\ttp\tfp\tfn";

/// One strategy's scores, in the shape shared by TSV files and tables.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreRow {
    pub name: String,
    pub classes: Vec<ClassCell>,
    pub total_pq: Option<f64>,
    pub total_part_pq: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassCell {
    pub class: String,
    /// `(pq, part_pq, tp, fp, fn)`; `None` for "-".
    pub scores: Option<(f64, f64, usize, usize, usize)>,
}

impl ScoreRow {
    pub fn from_report(name: &str, report: &MetricReport) -> Self {
        Self {
            name: name.to_string(),
            classes: report
                .rows
                .iter()
                .map(|r| ClassCell {
                    class: r.name.clone(),
                    scores: r.scores.map(|s| (s.pq, s.part_pq, s.tp, s.fp, s.fn_)),
                })
                .collect(),
            total_pq: report.total_pq,
            total_part_pq: report.total_part_pq,
        }
    }

    /// Values use the shortest decimal form that reads back to the same
    /// double.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from(TSV_HEADER);
        out.push('\n');
        let (mut tp, mut fp, mut fn_) = (0, 0, 0);
        for c in &self.classes {
            match c.scores {
                Some((pq, ppq, t, f, n)) => {
                    writeln!(out, "{}\t{pq}\t{ppq}\t{t}\t{f}\t{n}", c.class).expect("string write");
                    tp += t;
                    fp += f;
                    fn_ += n;
                }
                None => writeln!(out, "{}\t-\t-\t-\t-\t-", c.class).expect("string write"),
            }
        }
        let cell = |v: Option<f64>| v.map_or("-".to_string(), |v| v.to_string());
        writeln!(
            out,
            "total\t{}\t{}\t{tp}\t{fp}\t{fn_}",
            cell(self.total_pq),
            cell(self.total_part_pq)
        )
        .expect("string write");
        out
    }

    pub fn from_tsv(name: &str, text: &str) -> Result<Self, String> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        if lines.next().map(str::trim_end) != Some(TSV_HEADER) {
            return Err(format!(
                "missing TSV header `{}`",
                TSV_HEADER.replace('\t', "\\t")
            ));
        }
        let mut classes = Vec::new();
        let mut total = None;
        for (n, line) in lines.enumerate() {
            let f: Vec<&str> = line.split('\t').collect();
            if f.len() != 6 {
                return Err(format!("line {}: expected 6 columns, found {}", n + 2, f.len()));
            }
            let real = |s: &str| -> Result<Option<f64>, String> {
                if s == "-" {
                    return Ok(None);
                }
                let v: f64 = s
                    .parse()
                    .map_err(|_| format!("line {}: bad number `{s}`", n + 2))?;
                if !(0.0..=1.0).contains(&v) {
                    return Err(format!("line {}: score {v} outside [0, 1]", n + 2));
                }
                Ok(Some(v))
            };
            let count = |s: &str| -> Result<usize, String> {
                s.parse().map_err(|_| format!("line {}: bad count `{s}`", n + 2))
            };
            if f[0] == "total" {
                total = Some((real(f[1])?, real(f[2])?));
                continue;
            }
            let scores = match (real(f[1])?, real(f[2])?) {
                (Some(pq), Some(ppq)) => Some((pq, ppq, count(f[3])?, count(f[4])?, count(f[5])?)),
                (None, None) => None,
                _ => {
                    return Err(format!(
                        "line {}: pq and part_pq must both be present or both be `-`",
                        n + 2
                    ))
                }
            };
            classes.push(ClassCell {
                class: f[0].to_string(),
                scores,
            });
        }
        let (total_pq, total_part_pq) = total.ok_or("missing total row")?;
        Ok(Self {
            name: name.to_string(),
            classes,
            total_pq,
            total_part_pq,
        })
    }
}

fn cell(v: Option<f64>, percent: bool) -> String {
    match v {
        None => "-".into(),
        Some(v) if percent => format!("{:.1}", 100.0 * v),
        Some(v) => format!("{v:.3}"),
    }
}

/// Two blocks, PartPQ then PQ. Rows must share one class list.
pub fn render_table(rows: &[ScoreRow], percent: bool) -> Result<String, String> {
    let Some(first) = rows.first() else {
        return Err("nothing to tabulate".into());
    };
    let classes: Vec<&str> = first.classes.iter().map(|c| c.class.as_str()).collect();
    for r in rows {
        let cs: Vec<&str> = r.classes.iter().map(|c| c.class.as_str()).collect();
        if cs != classes {
            return Err(format!(
                "`{}` has classes {:?}, expected {:?}",
                r.name, cs, classes
            ));
        }
    }
    let mut header: Vec<String> = vec!["strategy".into()];
    header.extend(classes.iter().map(|c| c.to_string()));
    header.push("total".into());

    let mut out = String::new();
    for (title, pick) in [("PartPQ", 1usize), ("PQ", 0)] {
        let body: Vec<Vec<String>> = rows
            .iter()
            .map(|r| {
                let mut line = vec![r.name.clone()];
                for c in &r.classes {
                    line.push(cell(c.scores.map(|s| if pick == 1 { s.1 } else { s.0 }), percent));
                }
                line.push(cell(
                    if pick == 1 { r.total_part_pq } else { r.total_pq },
                    percent,
                ));
                line
            })
            .collect();
        let widths: Vec<usize> = (0..header.len())
            .map(|i| {
                body.iter()
                    .map(|l| l[i].len())
                    .chain([header[i].len()])
                    .max()
                    .unwrap_or(0)
            })
            .collect();
        let fmt_line = |line: &[String]| {
            line.iter()
                .enumerate()
                .map(|(i, s)| {
                    if i == 0 {
                        format!("{s:<w$}", w = widths[i])
                    } else {
                        format!("{s:>w$}", w = widths[i])
                    }
                })
                .collect::<Vec<_>>()
                .join("  ")
        };
        if !out.is_empty() {
            out.push('\n');
        }
        writeln!(out, "{title}{}", if percent { " (%)" } else { "" }).expect("string write");
        writeln!(out, "{}", fmt_line(&header)).expect("string write");
        for l in &body {
            writeln!(out, "{}", fmt_line(l)).expect("string write");
        }
    }
    Ok(out)
}
