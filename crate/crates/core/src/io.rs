//! Text formats.
//!
//! Filtered complex files:
//!
//! ```text
//! # comment
//! n 2            # number of function components, once, before any vertex
//! v 0.0 1.5      # vertex 0
//! v 1.0 0.5      # vertex 1
//! s 0 1          # simplex on vertices 0 and 1; faces are added automatically
//! ```
//!
//! Diagram files are CSV with header `k,birth,death,multiplicity`; a death
//! of `inf` marks a cornerpoint at infinity. Coordinates are written in the
//! shortest form that parses back to the same `f64`.

use std::fmt::Write as _;
use std::io::{Read, Write};

use crate::complex::{build_complex, MultiFilteredComplex, Simplex};
use crate::error::{Error, Result};
use crate::foliation::AdmissiblePair;
use crate::matching::LeafReport;
use crate::persistence::{Cornerpoint, Death, PersistenceDiagram};
use crate::rank_invariant::RankGrid;

pub const DIAGRAM_HEADER: [&str; 4] = ["k", "birth", "death", "multiplicity"];
pub const INFINITY_TOKEN: &str = "inf";

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

fn parse_finite(token: &str, line: usize) -> Result<f64> {
    let x: f64 = token.parse().map_err(|_| parse_err(line, format!("`{token}` is not a number")))?;
    if !x.is_finite() {
        return Err(parse_err(line, format!("`{token}` is not finite")));
    }
    Ok(x)
}

pub fn parse_complex(text: &str) -> Result<MultiFilteredComplex> {
    let mut n: Option<usize> = None;
    let mut values: Vec<Vec<f64>> = Vec::new();
    let mut generators: Vec<(usize, Simplex)> = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        let mut tokens = line.split_whitespace();
        let Some(tag) = tokens.next() else { continue };
        let rest: Vec<&str> = tokens.collect();
        match tag {
            "n" => {
                if n.is_some() {
                    return Err(parse_err(line_no, "duplicate `n` header"));
                }
                let [count] = rest[..] else {
                    return Err(parse_err(line_no, "`n` takes exactly one integer"));
                };
                let count: usize =
                    count.parse().map_err(|_| parse_err(line_no, format!("bad component count `{count}`")))?;
                if count == 0 {
                    return Err(parse_err(line_no, "component count must be positive"));
                }
                n = Some(count);
            }
            "v" => {
                let Some(n) = n else {
                    return Err(parse_err(line_no, "vertex before the `n` header"));
                };
                if rest.len() != n {
                    return Err(parse_err(line_no, format!("expected {n} values, found {}", rest.len())));
                }
                values.push(rest.iter().map(|t| parse_finite(t, line_no)).collect::<Result<_>>()?);
            }
            "s" => {
                let ids = rest
                    .iter()
                    .map(|t| t.parse::<usize>().map_err(|_| parse_err(line_no, format!("bad vertex id `{t}`"))))
                    .collect::<Result<Vec<_>>>()?;
                let s = Simplex::new(ids).map_err(|e| parse_err(line_no, e.to_string()))?;
                generators.push((line_no, s));
            }
            other => return Err(parse_err(line_no, format!("unknown line tag `{other}`"))),
        }
    }

    let n = n.ok_or_else(|| parse_err(0, "missing `n` header"))?;
    for (line_no, s) in &generators {
        if let Some(&v) = s.vertices().iter().find(|&&v| v >= values.len()) {
            return Err(parse_err(*line_no, format!("vertex {v} is not declared")));
        }
    }
    let mut gens: Vec<Simplex> = (0..values.len()).map(Simplex::vertex).collect();
    gens.extend(generators.into_iter().map(|(_, s)| s));
    build_complex(n, &values, &gens)
}

pub fn read_complex(path: &std::path::Path) -> Result<MultiFilteredComplex> {
    parse_complex(&std::fs::read_to_string(path)?)
}

/// Writes every vertex and every simplex of dimension ≥ 1.
pub fn format_complex(c: &MultiFilteredComplex) -> String {
    let mut out = format!("n {}\n", c.n());
    for v in 0..c.num_vertices() {
        out.push('v');
        for x in c.vertex_value(v) {
            let _ = write!(out, " {x}");
        }
        out.push('\n');
    }
    for s in c.simplices().iter().filter(|s| s.dimension() > 0) {
        out.push('s');
        for v in s.vertices() {
            let _ = write!(out, " {v}");
        }
        out.push('\n');
    }
    out
}

/// A parsed diagram file. `degree` is `None` when the file has no rows.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagramFile {
    pub degree: Option<usize>,
    pub diagram: PersistenceDiagram,
}

pub fn write_diagram<W: Write>(out: W, d: &PersistenceDiagram) -> Result<()> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    let csv_err = |e: csv::Error| Error::Io(e.to_string());
    w.write_record(DIAGRAM_HEADER).map_err(csv_err)?;
    for p in d.points() {
        w.write_record([
            d.degree().to_string(),
            p.birth.to_string(),
            p.death.to_string(),
            p.multiplicity.to_string(),
        ])
        .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

pub fn format_diagram(d: &PersistenceDiagram) -> String {
    let mut buf = Vec::new();
    write_diagram(&mut buf, d).expect("writing to memory");
    String::from_utf8(buf).expect("ascii output")
}

pub fn read_diagram<R: Read>(input: R) -> Result<DiagramFile> {
    let mut r = csv::ReaderBuilder::new().has_headers(true).trim(csv::Trim::All).from_reader(input);
    let headers = r.headers().map_err(|e| parse_err(1, e.to_string()))?.clone();
    if headers.iter().collect::<Vec<_>>() != DIAGRAM_HEADER {
        return Err(parse_err(1, format!("expected header `{}`", DIAGRAM_HEADER.join(","))));
    }
    let mut degree = None;
    let mut points = Vec::new();
    for (i, record) in r.records().enumerate() {
        let line = i + 2;
        let record = record.map_err(|e| parse_err(line, e.to_string()))?;
        if record.len() != 4 {
            return Err(parse_err(line, "expected 4 fields"));
        }
        let k: usize = record[0].parse().map_err(|_| parse_err(line, "bad degree"))?;
        if degree.is_some_and(|d| d != k) {
            return Err(parse_err(line, "all rows must share one degree"));
        }
        degree = Some(k);
        let birth = parse_finite(&record[1], line)?;
        let death = if &record[2] == INFINITY_TOKEN {
            Death::Infinity
        } else {
            Death::Finite(parse_finite(&record[2], line)?)
        };
        let mult: u64 = record[3].parse().map_err(|_| parse_err(line, "bad multiplicity"))?;
        points.push(Cornerpoint::new(birth, death, mult).map_err(|e| parse_err(line, e.to_string()))?);
    }
    Ok(DiagramFile { degree, diagram: PersistenceDiagram::new(degree.unwrap_or(0), points) })
}

pub fn parse_diagram(text: &str) -> Result<DiagramFile> {
    read_diagram(text.as_bytes())
}

/// `k,u,v,rank` rows for every grid point with `u < v`.
pub fn format_rank_grid(g: &RankGrid) -> String {
    let mut out = String::from("k,u,v,rank\n");
    for (u, v, r) in g.entries() {
        let _ = writeln!(out, "{},{u},{v},{r}", g.degree());
    }
    out
}

fn pair_header(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("l{i}")).chain((1..=n).map(|i| format!("b{i}"))).collect()
}

fn pair_fields(p: &AdmissiblePair) -> Vec<String> {
    p.l().iter().chain(p.b()).map(f64::to_string).collect()
}

/// One row per admissible pair: `l1..ln,b1..bn`.
pub fn format_pairs(pairs: &[AdmissiblePair]) -> String {
    let n = pairs.first().map_or(0, AdmissiblePair::n);
    let mut out = pair_header(n).join(",");
    out.push('\n');
    for p in pairs {
        out.push_str(&pair_fields(p).join(","));
        out.push('\n');
    }
    out
}

/// Per-leaf report: `l1..ln,b1..bn,min_l,leaf_dmatch,weighted`.
pub fn format_leaf_report(reports: &[LeafReport]) -> String {
    let n = reports.first().map_or(0, |r| r.pair.n());
    let mut header = pair_header(n);
    header.extend(["min_l", "leaf_dmatch", "weighted"].map(String::from));
    let mut out = header.join(",");
    out.push('\n');
    let cost = |c: crate::matching::ExtendedCost| c.finite().map_or(INFINITY_TOKEN.to_string(), |x| x.to_string());
    for r in reports {
        let mut fields = pair_fields(&r.pair);
        fields.push(r.min_l.to_string());
        fields.push(cost(r.leaf_distance));
        fields.push(cost(r.weighted));
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}
