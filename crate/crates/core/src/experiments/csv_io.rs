//! Versioned CSV for sweep results.

use std::io::{BufRead, BufReader, Read, Write};

use crate::error::{Error, Result};

pub const SCHEMA_VERSION: u32 = 1;
pub const COLUMNS: [&str; 9] = [
    "swept_name",
    "swept_value",
    "policy",
    "mode",
    "metric",
    "value",
    "std_error",
    "n",
    "error",
];
const MAGIC: &str = "# fran-tradeoff-csv";

/// One `(grid point, policy, mode, metric)` record.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub swept_name: String,
    pub swept_value: f64,
    pub policy: String,
    pub mode: String,
    pub metric: String,
    /// `inf` when a queue is unstable, `nan` for other failures.
    pub value: f64,
    /// Zero for analytic rows.
    pub std_error: f64,
    pub n: usize,
    pub error: String,
}

fn fmt_f64(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{v}")
    }
}

fn parse_f64(column: &str, s: &str) -> Result<f64> {
    match s {
        "nan" => Ok(f64::NAN),
        "inf" => Ok(f64::INFINITY),
        "-inf" => Ok(f64::NEG_INFINITY),
        _ => s
            .parse()
            .map_err(|_| Error::Parse(format!("column {column}: not a number: {s:?}"))),
    }
}

pub fn write_csv<W: Write>(out: W, figure: &str, rows: &[ResultRow]) -> Result<()> {
    let mut out = out;
    writeln!(out, "{MAGIC} schema={SCHEMA_VERSION} figure={figure}")?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(COLUMNS)?;
    for r in rows {
        w.write_record([
            r.swept_name.clone(),
            fmt_f64(r.swept_value),
            r.policy.clone(),
            r.mode.clone(),
            r.metric.clone(),
            fmt_f64(r.value),
            fmt_f64(r.std_error),
            r.n.to_string(),
            r.error.clone(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Figure id and rows of a results file. Files written under another schema
/// version, or missing a column, are rejected.
pub fn read_csv<R: Read>(input: R) -> Result<(String, Vec<ResultRow>)> {
    let mut reader = BufReader::new(input);
    let mut first = String::new();
    reader.read_line(&mut first)?;
    let rest = first
        .trim_end()
        .strip_prefix(MAGIC)
        .ok_or_else(|| Error::Schema("missing fran-tradeoff-csv header line".into()))?;
    let mut schema = None;
    let mut figure = String::new();
    for field in rest.split_whitespace() {
        if let Some(v) = field.strip_prefix("schema=") {
            schema = v.parse::<u32>().ok();
        } else if let Some(v) = field.strip_prefix("figure=") {
            figure = v.to_string();
        }
    }
    match schema {
        Some(SCHEMA_VERSION) => {}
        Some(v) => {
            return Err(Error::Schema(format!(
                "schema version {v} is not supported (expected {SCHEMA_VERSION})"
            )))
        }
        None => return Err(Error::Schema("header has no schema version".into())),
    }
    let mut r = csv::Reader::from_reader(reader);
    let headers = r.headers()?.clone();
    let mut index = [0usize; 9];
    for (slot, col) in index.iter_mut().zip(COLUMNS) {
        *slot = headers
            .iter()
            .position(|h| h == col)
            .ok_or_else(|| Error::Schema(format!("missing column {col}")))?;
    }
    let mut rows = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        let get = |i: usize| rec.get(index[i]).unwrap_or("");
        rows.push(ResultRow {
            swept_name: get(0).to_string(),
            swept_value: parse_f64(COLUMNS[1], get(1))?,
            policy: get(2).to_string(),
            mode: get(3).to_string(),
            metric: get(4).to_string(),
            value: parse_f64(COLUMNS[5], get(5))?,
            std_error: parse_f64(COLUMNS[6], get(6))?,
            n: get(7)
                .parse()
                .map_err(|_| Error::Parse(format!("column n: not a count: {:?}", get(7))))?,
            error: get(8).to_string(),
        });
    }
    Ok((figure, rows))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(value: f64, error: &str) -> ResultRow {
        ResultRow {
            swept_name: "density_ratio".into(),
            swept_value: 5.0,
            policy: "max_rsrp".into(),
            mode: "analytic".into(),
            metric: "latency|xi=0.005".into(),
            value,
            std_error: 0.0,
            n: 0,
            error: error.into(),
        }
    }

    #[test]
    fn round_trip() {
        let rows = vec![
            row(1.25, ""),
            row(f64::INFINITY, "F queue unstable, with a comma"),
            row(0.1 + 0.2, ""),
        ];
        let mut buf = Vec::new();
        write_csv(&mut buf, "fig2", &rows).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("# fran-tradeoff-csv schema=1 figure=fig2\n"));
        assert!(text.contains("swept_name,swept_value,policy,mode,metric,value,std_error,n,error"));
        let (fig, back) = read_csv(&buf[..]).unwrap();
        assert_eq!(fig, "fig2");
        assert_eq!(back, rows);
        let nan = vec![row(f64::NAN, "x")];
        let mut buf = Vec::new();
        write_csv(&mut buf, "fig4", &nan).unwrap();
        assert!(read_csv(&buf[..]).unwrap().1[0].value.is_nan());
    }

    #[test]
    fn rejects_other_schema_and_missing_columns() {
        let text = "# fran-tradeoff-csv schema=2 figure=fig2\nswept_name\n";
        assert!(matches!(read_csv(text.as_bytes()), Err(Error::Schema(_))));
        let text = "swept_name,value\n";
        assert!(matches!(read_csv(text.as_bytes()), Err(Error::Schema(_))));
        let text = "# fran-tradeoff-csv schema=1 figure=fig2\nswept_name,swept_value,policy,mode,metric,std_error,n,error\n";
        match read_csv(text.as_bytes()) {
            Err(Error::Schema(m)) => assert!(m.contains("value")),
            other => panic!("{other:?}"),
        }
    }
}
