//! File formats.
//!
//! Edge lists: a header line `n <N>`, then one `u v` pair per line with
//! `0 <= u < v < N`. Lines starting with `#` are comments; blank lines are
//! skipped.
//!
//! Step graphons are JSON objects `{"weights": [...], "values": [[...], ...]}`
//! whose entries are decimal strings, `"p/q"` strings, or JSON numbers.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::scalar::{parse_rational, Rational, Scalar};
use crate::stepgraphon::StepGraphon;

pub fn parse_graph(text: &str) -> Result<Graph> {
    let mut graph: Option<Graph> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |msg: String| Error::Parse { line: line_no, msg };
        let mut fields = line.split_whitespace();
        match graph.as_mut() {
            None => {
                let (Some("n"), Some(count), None) = (fields.next(), fields.next(), fields.next()) else {
                    return Err(err(format!("expected header `n <N>`, found `{line}`")));
                };
                let n = count.parse().map_err(|_| err(format!("bad vertex count `{count}`")))?;
                graph = Some(Graph::empty(n));
            }
            Some(g) => {
                let (Some(a), Some(b), None) = (fields.next(), fields.next(), fields.next()) else {
                    return Err(err(format!("expected `u v`, found `{line}`")));
                };
                let u: usize = a.parse().map_err(|_| err(format!("bad vertex `{a}`")))?;
                let v: usize = b.parse().map_err(|_| err(format!("bad vertex `{b}`")))?;
                if u >= v {
                    return Err(err(format!("edge `{u} {v}` must satisfy u < v")));
                }
                g.try_insert(u, v).map_err(|e| err(e.to_string()))?;
            }
        }
    }
    graph.ok_or(Error::Parse {
        line: 1,
        msg: "missing header `n <N>`".into(),
    })
}

pub fn format_graph(g: &Graph) -> String {
    let mut out = format!("n {}\n", g.order());
    for (u, v) in g.edges() {
        writeln!(out, "{u} {v}").unwrap();
    }
    out
}

pub fn read_graph(path: impl AsRef<Path>) -> Result<Graph> {
    parse_graph(&fs::read_to_string(path)?)
}

pub fn write_graph(g: &Graph, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, format_graph(g))?;
    Ok(())
}

#[derive(Serialize, Deserialize)]
struct GraphonJson {
    weights: Vec<Value>,
    values: Vec<Vec<Value>>,
}

fn exact_entry(v: &Value) -> Result<Rational> {
    let text = match v {
        Value::String(s) => s.clone(),
        Value::Number(n) => n.to_string(),
        other => return Err(Error::InvalidGraphon(format!("entry {other} is not a number"))),
    };
    parse_rational(&text).ok_or_else(|| Error::InvalidGraphon(format!("cannot parse `{text}` as a number")))
}

/// Parses a step graphon; entries are read exactly, then converted to `S`.
pub fn parse_graphon<S: Scalar>(text: &str) -> Result<StepGraphon<S>> {
    let raw: GraphonJson = serde_json::from_str(text)?;
    let weights = raw
        .weights
        .iter()
        .map(|v| exact_entry(v).map(|q| S::from_rational(&q)))
        .collect::<Result<Vec<S>>>()?;
    let values = raw
        .values
        .iter()
        .map(|row| {
            row.iter()
                .map(|v| exact_entry(v).map(|q| S::from_rational(&q)))
                .collect()
        })
        .collect::<Result<Vec<Vec<S>>>>()?;
    StepGraphon::new(weights, values)
}

pub fn format_graphon<S: Scalar>(w: &StepGraphon<S>) -> String {
    let raw = GraphonJson {
        weights: w.weights().iter().map(|x| Value::String(x.to_text())).collect(),
        values: w
            .values()
            .iter()
            .map(|row| row.iter().map(|x| Value::String(x.to_text())).collect())
            .collect(),
    };
    serde_json::to_string_pretty(&raw).expect("serializable")
}

pub fn read_graphon<S: Scalar>(path: impl AsRef<Path>) -> Result<StepGraphon<S>> {
    parse_graphon(&fs::read_to_string(path)?)
}

pub fn write_graphon<S: Scalar>(w: &StepGraphon<S>, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, format_graphon(w))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::turan_graph;
    use crate::scalar::rational as q;

    #[test]
    fn parses_path() {
        let g = parse_graph("n 3\n0 1\n1 2").unwrap();
        assert_eq!(g, Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap());
        let g = parse_graph("# a comment\nn 3\n\n# another\n0 2\n").unwrap();
        assert_eq!(g.size(), 1);
    }

    #[test]
    fn errors_name_the_line() {
        let cases = [
            ("n 2\n0 0", 2),
            ("n 2\n0 2", 2),
            ("n 3\n0 1\n0 1", 3),
            ("n 3\n0 1\n1 x", 3),
            ("n 3\n2 1", 2),
            ("0 1", 1),
            ("n 3\n0 1 2", 2),
        ];
        for (text, line) in cases {
            match parse_graph(text) {
                Err(Error::Parse { line: l, .. }) => assert_eq!(l, line, "{text:?}"),
                other => panic!("{text:?} gave {other:?}"),
            }
        }
        assert!(parse_graph("").is_err());
    }

    #[test]
    fn file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t24.el");
        let g = turan_graph(2, 4).unwrap();
        write_graph(&g, &path).unwrap();
        assert_eq!(read_graph(&path).unwrap(), g);
    }

    #[test]
    fn graphon_json_exact_and_float() {
        let text = r#"{"weights": ["1/3", "0.5", 0.16666666666666666], "values": [["0","1",0.5],["1","1/4","0"],[0.5,"0","1"]]}"#;
        assert!(
            parse_graphon::<Rational>(text).is_err(),
            "float weights are not exactly 1/6"
        );
        let exact =
            r#"{"weights": ["1/3", "0.5", "1/6"], "values": [["0","1","0.5"],["1","1/4","0"],["1/2","0","1"]]}"#;
        let w = parse_graphon::<Rational>(exact).unwrap();
        assert_eq!(w.weights(), &[q(1, 3), q(1, 2), q(1, 6)]);
        assert_eq!(*w.value(1, 1), q(1, 4));
        let f = parse_graphon::<f64>(text).unwrap();
        assert!((f.weights()[2] - 1.0 / 6.0).abs() < 1e-15);
        assert_eq!(parse_graphon::<Rational>(&format_graphon(&w)).unwrap(), w);
        assert_eq!(parse_graphon::<f64>(&format_graphon(&f)).unwrap(), f);
    }

    #[test]
    fn graphon_json_validates() {
        assert!(parse_graphon::<f64>(r#"{"weights": ["1"], "values": [["2"]]}"#).is_err());
        assert!(parse_graphon::<f64>(r#"{"weights": ["1"], "values": [[true]]}"#).is_err());
        assert!(parse_graphon::<f64>(r#"{"weights": ["1/2","1/2"], "values": [["0","1"],["0","0"]]}"#).is_err());
    }
}
