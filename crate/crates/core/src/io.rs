//! File formats: graph JSON, graph directories and CSV output.
//!
//! A graph file is `{"k": int, "weights_upper": [...]}` with the strict upper
//! triangle in row-major order. A full `"weights"` matrix is accepted on
//! input and checked for symmetry. Numbers written to CSV or printed use 12
//! significant digits.

use std::fs;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::graphon::WeightedGraph;

/// Formats `x` with 12 significant digits, trailing zeros removed.
pub fn fmt_num(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    let sci = format!("{x:.11e}");
    let (mantissa, exp) = sci.split_once('e').unwrap();
    let exp: i32 = exp.parse().unwrap();
    if !(-5..12).contains(&exp) {
        return format!("{}e{exp}", strip_zeros(mantissa));
    }
    let decimals = (11 - exp) as usize;
    strip_zeros(&format!("{x:.decimals$}")).to_string()
}

fn strip_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub(crate) struct GraphFile {
    k: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    weights_upper: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    weights: Option<Vec<Vec<f64>>>,
}

impl TryFrom<GraphFile> for WeightedGraph {
    type Error = Error;

    fn try_from(f: GraphFile) -> Result<Self> {
        match (f.weights_upper, f.weights) {
            (Some(u), None) => WeightedGraph::from_upper(f.k, &u),
            (None, Some(rows)) => {
                if rows.len() != f.k {
                    return Err(Error::Shape(format!(
                        "\"weights\" has {} rows but k = {}",
                        rows.len(),
                        f.k
                    )));
                }
                WeightedGraph::from_rows(&rows)
            }
            _ => Err(Error::Parse {
                context: "graph".into(),
                detail: "expected exactly one of \"weights_upper\" or \"weights\"".into(),
            }),
        }
    }
}

impl Serialize for WeightedGraph {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        GraphFile {
            k: self.nodes(),
            weights_upper: Some(self.upper()),
            weights: None,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for WeightedGraph {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let f = GraphFile::deserialize(d)?;
        WeightedGraph::try_from(f).map_err(serde::de::Error::custom)
    }
}

fn io_err(path: &Path, source: std::io::Error) -> Error {
    Error::Io {
        path: path.display().to_string(),
        source,
    }
}

/// Parses JSON text; errors carry line and column.
pub fn parse_json<T: DeserializeOwned>(text: &str, context: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse {
        context: format!("{context} (line {}, column {})", e.line(), e.column()),
        detail: e.to_string(),
    })
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    parse_json(&text, &path.display().to_string())
}

/// Writes pretty-printed JSON followed by a newline.
pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| Error::Parse {
        context: path.display().to_string(),
        detail: e.to_string(),
    })?;
    text.push('\n');
    fs::write(path, text).map_err(|e| io_err(path, e))
}

/// Parses a graph, keeping validation failures as invariant or range errors.
pub fn graph_from_json(text: &str, context: &str) -> Result<WeightedGraph> {
    let f: GraphFile = parse_json(text, context)?;
    WeightedGraph::try_from(f).map_err(|e| e.in_context(context))
}

pub fn load_graph(path: &Path) -> Result<WeightedGraph> {
    let f: GraphFile = read_json(path)?;
    WeightedGraph::try_from(f).map_err(|e| e.in_context(&path.display().to_string()))
}

pub fn save_graph(g: &WeightedGraph, path: &Path) -> Result<()> {
    write_json(path, g)
}

/// Loads every `*.json` file of `dir` in file-name order.
pub fn load_graph_dir(dir: &Path) -> Result<Vec<(PathBuf, WeightedGraph)>> {
    let mut paths: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|e| io_err(dir, e))?
        .map(|e| e.map(|e| e.path()).map_err(|err| io_err(dir, err)))
        .collect::<Result<Vec<_>>>()?;
    paths.retain(|p| p.is_file() && p.extension().is_some_and(|x| x == "json"));
    paths.sort();
    if paths.is_empty() {
        return Err(Error::Domain(format!("no graph files in {}", dir.display())));
    }
    paths
        .into_iter()
        .map(|p| {
            let g = load_graph(&p)?;
            Ok((p, g))
        })
        .collect()
}

/// Renders a table with a header row as CSV text.
pub fn csv_string<S: AsRef<str>>(header: &[S], rows: &[Vec<String>]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let csv_err = |e: csv::Error| Error::Parse {
        context: "csv output".into(),
        detail: e.to_string(),
    };
    w.write_record(header.iter().map(|h| h.as_ref()))
        .map_err(csv_err)?;
    for r in rows {
        w.write_record(r).map_err(csv_err)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Parse {
        context: "csv output".into(),
        detail: e.to_string(),
    })?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// CSV of a numeric matrix with an optional leading `id` column.
pub fn matrix_csv(names: &[String], rows: &[Vec<f64>], ids: Option<&[String]>) -> Result<String> {
    let mut header: Vec<String> = Vec::with_capacity(names.len() + 1);
    if ids.is_some() {
        header.push("id".into());
    }
    header.extend(names.iter().cloned());
    let body: Vec<Vec<String>> = rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut out = Vec::with_capacity(r.len() + 1);
            if let Some(ids) = ids {
                out.push(ids[i].clone());
            }
            out.extend(r.iter().map(|&x| fmt_num(x)));
            out
        })
        .collect();
    csv_string(&header, &body)
}
