//! Plain-text formats.
//!
//! * edge list: optional `# nodes=N` header, then one `src<TAB>dst` link per line
//! * flow list: one `src<TAB>dst` ordered pair per line
//! * routing matrix CSV: `L,J` header, then `L` lines of `J` comma-separated numbers
//!
//! Node indices are 0-based. Readers accept any whitespace between columns;
//! writers always emit a single TAB.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::linalg::DenseMatrix;

use super::{RoutingMatrix, Topology};

fn parse_err(origin: &str, line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        path: origin.to_string(),
        line,
        message: message.into(),
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn parse_pair(origin: &str, lineno: usize, line: &str) -> Result<(usize, usize)> {
    let mut fields = line.split_whitespace();
    let mut next = |what: &str| -> Result<usize> {
        let tok = fields
            .next()
            .ok_or_else(|| parse_err(origin, lineno, format!("missing {what} node")))?;
        tok.parse()
            .map_err(|_| parse_err(origin, lineno, format!("invalid {what} node `{tok}`")))
    };
    let pair = (next("source")?, next("destination")?);
    if fields.next().is_some() {
        return Err(parse_err(origin, lineno, "expected exactly two columns"));
    }
    Ok(pair)
}

/// Parses an edge list (see module docs). `origin` labels error messages.
pub fn parse_edge_list(text: &str, origin: &str) -> Result<Topology> {
    let mut declared = None;
    let mut edges = Vec::new();
    let mut max_node = None;
    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            if let Some(n) = comment.trim().strip_prefix("nodes=") {
                let n: usize = n
                    .trim()
                    .parse()
                    .map_err(|_| parse_err(origin, lineno, format!("invalid node count `{n}`")))?;
                declared = Some(n);
            }
            continue;
        }
        let (u, v) = parse_pair(origin, lineno, line)?;
        if let Some(n) = declared {
            if u >= n || v >= n {
                return Err(parse_err(
                    origin,
                    lineno,
                    format!("link ({u}, {v}) exceeds declared node count {n}"),
                ));
            }
        }
        max_node = max_node.max(Some(u.max(v)));
        edges.push((u, v));
    }
    let node_count = declared.unwrap_or_else(|| max_node.map_or(0, |m| m + 1));
    Topology::new(node_count, edges).map_err(|e| parse_err(origin, 0, e.to_string()))
}

/// Parses a flow list into ordered pairs.
pub fn parse_flow_list(text: &str, origin: &str) -> Result<Vec<(usize, usize)>> {
    let mut flows = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        flows.push(parse_pair(origin, i + 1, line)?);
    }
    Ok(flows)
}

/// Parses a routing-matrix CSV; the header must match the body exactly.
pub fn parse_routing_matrix(text: &str, origin: &str) -> Result<RoutingMatrix> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| parse_err(origin, 1, "empty file: expected `L,J` header"))?;
    let dims: Vec<&str> = header.trim().split(',').map(str::trim).collect();
    let (rows, cols) = match dims.as_slice() {
        [l, j] => {
            let l: usize = l
                .parse()
                .map_err(|_| parse_err(origin, 1, format!("invalid link count `{l}`")))?;
            let j: usize = j
                .parse()
                .map_err(|_| parse_err(origin, 1, format!("invalid flow count `{j}`")))?;
            (l, j)
        }
        _ => return Err(parse_err(origin, 1, "expected header `L,J`")),
    };
    if rows == 0 {
        return Err(parse_err(
            origin,
            1,
            "routing matrix needs at least one link",
        ));
    }
    let mut data = Vec::with_capacity(rows * cols);
    let mut seen = 0;
    for (i, raw) in lines {
        let lineno = i + 1;
        let line = raw.trim();
        if seen == rows {
            if line.is_empty() {
                continue;
            }
            return Err(parse_err(origin, lineno, format!("more than {rows} rows")));
        }
        let before = data.len();
        if cols > 0 {
            for tok in line.split(',') {
                let tok = tok.trim();
                let v: f64 = tok
                    .parse()
                    .map_err(|_| parse_err(origin, lineno, format!("invalid number `{tok}`")))?;
                if !v.is_finite() || v < 0.0 {
                    return Err(parse_err(
                        origin,
                        lineno,
                        format!("entry `{tok}` must be finite and nonnegative"),
                    ));
                }
                data.push(v);
            }
        } else if !line.is_empty() {
            return Err(parse_err(origin, lineno, "expected an empty row for J = 0"));
        }
        let got = data.len() - before;
        if got != cols {
            return Err(parse_err(
                origin,
                lineno,
                format!("row has {got} columns, header says {cols}"),
            ));
        }
        seen += 1;
    }
    if seen != rows {
        return Err(parse_err(
            origin,
            text.lines().count() + 1,
            format!("header says {rows} rows, found {seen}"),
        ));
    }
    let m =
        DenseMatrix::from_vec(rows, cols, data).map_err(|e| parse_err(origin, 0, e.to_string()))?;
    RoutingMatrix::new(m)
}

pub fn load_topology(path: impl AsRef<Path>) -> Result<Topology> {
    let path = path.as_ref();
    parse_edge_list(&read(path)?, &path.display().to_string())
}

pub fn load_flows(path: impl AsRef<Path>) -> Result<Vec<(usize, usize)>> {
    let path = path.as_ref();
    parse_flow_list(&read(path)?, &path.display().to_string())
}

pub fn load_routing_matrix(path: impl AsRef<Path>) -> Result<RoutingMatrix> {
    let path = path.as_ref();
    parse_routing_matrix(&read(path)?, &path.display().to_string())
}

pub fn render_edge_list(topology: &Topology) -> String {
    let mut out = format!("# nodes={}\n", topology.node_count());
    for &(u, v) in topology.edges() {
        let _ = writeln!(out, "{u}\t{v}");
    }
    out
}

pub fn render_flow_list(topology: &Topology) -> String {
    let mut out = String::new();
    for &(s, d) in topology.flows() {
        let _ = writeln!(out, "{s}\t{d}");
    }
    out
}

/// Shortest round-trip formatting, so 0/1 matrices print as `0`/`1`.
pub fn render_routing_matrix(a: &RoutingMatrix) -> String {
    let m = a.matrix();
    let mut out = format!("{},{}\n", m.rows(), m.cols());
    for r in m.row_iter() {
        for (j, v) in r.iter().enumerate() {
            if j > 0 {
                out.push(',');
            }
            let _ = write!(out, "{v}");
        }
        out.push('\n');
    }
    out
}
