//! Plain CSV formats for networks, scores, Lorenz curves and phi scans.
//!
//! Floats are written with 17 significant digits so files round-trip exactly.

use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::netmodel::{Edge, RealizedNetwork};

/// Format a float with 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn write_edge_list<W: Write>(mut w: W, g: &RealizedNetwork) -> Result<()> {
    writeln!(w, "i,j,weight")?;
    for e in g.edges() {
        writeln!(w, "{},{},{}", e.i, e.j, fmt_f64(e.weight))?;
    }
    Ok(())
}

fn parse_field<T: std::str::FromStr>(field: Option<&str>, line: usize, name: &str) -> Result<T> {
    field
        .map(str::trim)
        .and_then(|f| f.parse().ok())
        .ok_or_else(|| Error::Config(format!("line {line}: bad or missing {name}")))
}

fn data_lines<R: BufRead>(r: R, header: &str) -> Result<Vec<(usize, String)>> {
    let mut out = Vec::new();
    for (k, line) in r.lines().enumerate() {
        let line = line?;
        if k == 0 {
            if line.trim() != header {
                return Err(Error::Config(format!("line 1: expected header `{header}`")));
            }
            continue;
        }
        if !line.trim().is_empty() {
            out.push((k + 1, line));
        }
    }
    Ok(out)
}

/// Read an edge list. Without `n` the population is one past the largest
/// index seen.
pub fn read_edge_list<R: BufRead>(r: R, n: Option<usize>, seed: u64) -> Result<RealizedNetwork> {
    let mut edges = Vec::new();
    for (line, text) in data_lines(r, "i,j,weight")? {
        let mut f = text.split(',');
        let i: usize = parse_field(f.next(), line, "i")?;
        let j: usize = parse_field(f.next(), line, "j")?;
        let weight: f64 = parse_field(f.next(), line, "weight")?;
        edges.push(Edge {
            i: i.min(j),
            j: i.max(j),
            weight,
        });
    }
    let n = n.unwrap_or_else(|| edges.iter().map(|e| e.j + 1).max().unwrap_or(0));
    RealizedNetwork::from_edges(n, edges, seed)
}

/// Write per-agent scores; the group column is empty when there are no groups.
pub fn write_scores<W: Write>(mut w: W, scores: &[f64], groups: Option<&[usize]>) -> Result<()> {
    writeln!(w, "agent,group,score")?;
    for (k, s) in scores.iter().enumerate() {
        let g = groups.map(|g| g[k].to_string()).unwrap_or_default();
        writeln!(w, "{k},{g},{}", fmt_f64(*s))?;
    }
    Ok(())
}

pub fn read_scores<R: BufRead>(r: R) -> Result<Vec<f64>> {
    data_lines(r, "agent,group,score")?
        .into_iter()
        .map(|(line, text)| parse_field(text.split(',').nth(2), line, "score"))
        .collect()
}

pub fn write_lorenz<W: Write>(mut w: W, points: &[f64]) -> Result<()> {
    writeln!(w, "k,share")?;
    for (k, p) in points.iter().enumerate() {
        writeln!(w, "{},{}", k + 1, fmt_f64(*p))?;
    }
    Ok(())
}

/// One row of a phi scan: the derivative for members of `group`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanRow {
    pub phi: f64,
    pub group: usize,
    pub derivative: f64,
}

pub fn write_phi_scan<W: Write>(mut w: W, rows: &[ScanRow]) -> Result<()> {
    writeln!(w, "phi,group,derivative")?;
    for r in rows {
        writeln!(w, "{},{},{}", fmt_f64(r.phi), r.group, fmt_f64(r.derivative))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn edge_list_round_trip() {
        let edges = vec![
            Edge { i: 0, j: 2, weight: 0.1 },
            Edge { i: 1, j: 3, weight: 1.0 / 3.0 },
        ];
        let g = RealizedNetwork::from_edges(5, edges, 7).unwrap();
        let mut buf = Vec::new();
        write_edge_list(&mut buf, &g).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("i,j,weight\n0,2,1.0000000000000001e-1\n"));
        let back = read_edge_list(buf.as_slice(), Some(5), 7).unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(read_edge_list("a,b,c\n".as_bytes(), None, 0).is_err());
        let err = read_edge_list("i,j,weight\n0,x,1\n".as_bytes(), None, 0).unwrap_err();
        assert!(err.to_string().contains("line 2"));
    }

    #[test]
    fn scores_with_and_without_groups() {
        let mut buf = Vec::new();
        write_scores(&mut buf, &[0.5, 0.25], Some(&[0, 1])).unwrap();
        assert_eq!(read_scores(buf.as_slice()).unwrap(), vec![0.5, 0.25]);
        let mut buf = Vec::new();
        write_scores(&mut buf, &[2.0], None).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "agent,group,score\n0,,2.0000000000000000e0\n");
    }

    proptest! {
        #[test]
        fn seventeen_digits_round_trip(x in any::<f64>().prop_filter("finite", |x| x.is_finite())) {
            prop_assert_eq!(fmt_f64(x).parse::<f64>().unwrap(), x);
        }
    }
}
