use std::collections::HashMap;
use std::fmt;
use std::io::{BufRead, Write};
use std::str::FromStr;

use super::{Graph, VertexId};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    /// Whitespace-separated `u v` per line; `#` and `%` lines are comments.
    EdgeList,
    /// Matrix Market coordinate format, `general` or `symmetric`.
    MatrixMarket,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "edgelist" | "el" | "txt" => Ok(Format::EdgeList),
            "matrix-market" | "mm" | "mtx" => Ok(Format::MatrixMarket),
            other => Err(Error::UnknownFormat(other.to_string())),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::EdgeList => "edgelist",
            Format::MatrixMarket => "matrix-market",
        })
    }
}

/// Assigns dense ids in order of first appearance.
#[derive(Default)]
struct Remap {
    ids: HashMap<u64, VertexId>,
    labels: Vec<u64>,
}

impl Remap {
    fn id(&mut self, label: u64) -> VertexId {
        let next = self.labels.len() as VertexId;
        *self.ids.entry(label).or_insert_with(|| {
            self.labels.push(label);
            next
        })
    }
}

fn parse_id(tok: Option<&str>, line: usize, what: &str) -> Result<u64> {
    let tok = tok.ok_or_else(|| Error::parse(line, format!("missing {what}")))?;
    tok.parse::<u64>()
        .map_err(|_| Error::parse(line, format!("invalid {what} `{tok}`")))
}

/// Reads and normalizes a graph. The remap table is [`Graph::labels`].
pub fn load_graph<R: BufRead>(reader: R, format: Format) -> Result<Graph> {
    let (labels, edges) = match format {
        Format::EdgeList => read_edge_list(reader)?,
        Format::MatrixMarket => read_matrix_market(reader)?,
    };
    if labels.is_empty() {
        return Err(Error::EmptyInput);
    }
    Graph::from_labelled_edges(labels, edges)
}

type RawEdges = (Vec<u64>, Vec<(VertexId, VertexId)>);

fn read_edge_list<R: BufRead>(reader: R) -> Result<RawEdges> {
    let mut remap = Remap::default();
    let mut edges = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = i + 1;
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') || t.starts_with('%') {
            continue;
        }
        let mut toks = t.split_whitespace();
        let u = parse_id(toks.next(), lineno, "source vertex")?;
        let v = parse_id(toks.next(), lineno, "target vertex")?;
        if let Some(extra) = toks.next() {
            return Err(Error::parse(lineno, format!("unexpected token `{extra}`")));
        }
        edges.push((remap.id(u), remap.id(v)));
    }
    Ok((remap.labels, edges))
}

fn read_matrix_market<R: BufRead>(reader: R) -> Result<RawEdges> {
    let mut lines = reader.lines().enumerate();
    let (_, header) = lines.next().ok_or(Error::EmptyInput)?;
    let header = header?;
    let fields: Vec<String> = header
        .split_whitespace()
        .map(|s| s.to_ascii_lowercase())
        .collect();
    if fields.len() != 5 || fields[0] != "%%matrixmarket" || fields[1] != "matrix" {
        return Err(Error::parse(
            1,
            "expected `%%MatrixMarket matrix ...` header",
        ));
    }
    if fields[2] != "coordinate" {
        return Err(Error::parse(1, "only coordinate matrices are supported"));
    }
    let value_columns = match fields[3].as_str() {
        "pattern" => 0,
        "real" | "integer" => 1,
        other => return Err(Error::parse(1, format!("unsupported field `{other}`"))),
    };
    match fields[4].as_str() {
        "general" | "symmetric" => {}
        other => return Err(Error::parse(1, format!("unsupported symmetry `{other}`"))),
    }

    let mut remap = Remap::default();
    let mut edges = Vec::new();
    let mut size: Option<(u64, usize)> = None;
    let mut last_line = 1;
    for (i, line) in lines {
        let line = line?;
        let lineno = i + 1;
        last_line = lineno;
        let t = line.trim();
        if t.is_empty() || t.starts_with('%') {
            continue;
        }
        let mut toks = t.split_whitespace();
        let Some((dim, nnz)) = size else {
            let rows = parse_id(toks.next(), lineno, "row count")?;
            let cols = parse_id(toks.next(), lineno, "column count")?;
            let nnz = parse_id(toks.next(), lineno, "entry count")?;
            if rows != cols {
                return Err(Error::parse(lineno, "adjacency matrix must be square"));
            }
            size = Some((rows, nnz as usize));
            continue;
        };
        if edges.len() == nnz {
            return Err(Error::parse(lineno, format!("more than {nnz} entries")));
        }
        let u = parse_id(toks.next(), lineno, "row index")?;
        let v = parse_id(toks.next(), lineno, "column index")?;
        for idx in [u, v] {
            if idx == 0 || idx > dim {
                return Err(Error::parse(
                    lineno,
                    format!("index {idx} outside 1..={dim}"),
                ));
            }
        }
        for _ in 0..value_columns {
            let tok = toks
                .next()
                .ok_or_else(|| Error::parse(lineno, "missing value"))?;
            tok.parse::<f64>()
                .map_err(|_| Error::parse(lineno, format!("invalid value `{tok}`")))?;
        }
        if let Some(extra) = toks.next() {
            return Err(Error::parse(lineno, format!("unexpected token `{extra}`")));
        }
        edges.push((remap.id(u), remap.id(v)));
    }
    match size {
        None => Err(Error::EmptyInput),
        Some((_, nnz)) if edges.len() != nnz => Err(Error::parse(
            last_line,
            format!("expected {nnz} entries, found {}", edges.len()),
        )),
        Some(_) => Ok((remap.labels, edges)),
    }
}

/// Writes `g` as an edge list under its original labels.
///
/// When plain `u v` lines would not reproduce the dense numbering on reload
/// (isolated vertices, or labels first appearing out of order), every vertex
/// is first declared by a self-loop line, which the loader drops after
/// assigning the id.
pub fn write_edge_list<W: Write>(g: &Graph, mut w: W) -> Result<()> {
    let mut seen = 0usize;
    let mut in_order = true;
    'scan: for u in g.vertices() {
        for &v in g.neighbors(u).iter().filter(|&&v| v > u) {
            for x in [u, v] {
                match (x as usize).cmp(&seen) {
                    std::cmp::Ordering::Less => {}
                    std::cmp::Ordering::Equal => seen += 1,
                    std::cmp::Ordering::Greater => {
                        in_order = false;
                        break 'scan;
                    }
                }
            }
        }
    }
    if !in_order || seen != g.n() {
        writeln!(w, "# vertex declarations")?;
        for v in g.vertices() {
            let l = g.label(v);
            writeln!(w, "{l} {l}")?;
        }
    }
    for u in g.vertices() {
        for &v in g.neighbors(u).iter().filter(|&&v| v > u) {
            writeln!(w, "{} {}", g.label(u), g.label(v))?;
        }
    }
    w.flush()?;
    Ok(())
}

/// One `label<TAB>coreness` line per vertex, by ascending label.
pub fn write_coreness<W: Write>(g: &Graph, coreness: &[u32], mut w: W) -> Result<()> {
    assert_eq!(coreness.len(), g.n(), "coreness length must equal n");
    // ascending original id, independent of the internal numbering
    let mut order: Vec<VertexId> = g.vertices().collect();
    order.sort_unstable_by_key(|&v| g.label(v));
    for v in order {
        writeln!(w, "{}\t{}", g.label(v), coreness[v as usize])?;
    }
    w.flush()?;
    Ok(())
}

/// Inverse of [`write_coreness`]: `(label, coreness)` pairs in file order.
pub fn read_coreness<R: BufRead>(reader: R) -> Result<Vec<(u64, u32)>> {
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = i + 1;
        if line.trim().is_empty() {
            continue;
        }
        let mut toks = line.split('\t');
        let label = parse_id(toks.next().map(str::trim), lineno, "vertex id")?;
        let core = parse_id(toks.next().map(str::trim), lineno, "coreness")?;
        if toks.next().is_some() {
            return Err(Error::parse(
                lineno,
                "expected exactly two tab-separated fields",
            ));
        }
        let core = u32::try_from(core).map_err(|_| Error::parse(lineno, "coreness too large"))?;
        out.push((label, core));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::G1_EDGES;

    fn el(s: &str) -> Result<Graph> {
        load_graph(s.as_bytes(), Format::EdgeList)
    }

    #[test]
    fn g1_fixture() {
        let g = el(G1_EDGES).unwrap();
        assert_eq!((g.n(), g.m()), (6, 7));
        let mut by_label: Vec<(u64, usize)> =
            g.vertices().map(|v| (g.label(v), g.deg(v))).collect();
        by_label.sort_unstable();
        let degrees: Vec<usize> = by_label.into_iter().map(|(_, d)| d).collect();
        assert_eq!(degrees, vec![1, 1, 2, 3, 2, 5]);
    }

    #[test]
    fn self_loop_and_duplicate() {
        let g = el("0 0\n0 1\n1 0").unwrap();
        assert_eq!((g.n(), g.m()), (2, 1));
    }

    #[test]
    fn remap_first_appearance() {
        let g = el("7 9\n9 7\n# comment").unwrap();
        assert_eq!((g.n(), g.m()), (2, 1));
        assert_eq!(g.labels(), &[7, 9]);
    }

    #[test]
    fn malformed_line_reports_number() {
        match el("0 1\n% c\n2 x\n") {
            Err(Error::Parse { line: 3, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
        match el("0 1\n2\n") {
            Err(Error::Parse { line: 2, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn empty_input_is_error() {
        assert!(matches!(el(""), Err(Error::EmptyInput)));
        assert!(matches!(el("# only\n%comments\n"), Err(Error::EmptyInput)));
    }

    #[test]
    fn matrix_market_symmetric() {
        let src = "%%MatrixMarket matrix coordinate pattern symmetric\n% c\n4 4 3\n2 1\n3 2\n4 2\n";
        let g = load_graph(src.as_bytes(), Format::MatrixMarket).unwrap();
        assert_eq!((g.n(), g.m()), (4, 3));
        assert_eq!(g.labels(), &[2, 1, 3, 4]);
        assert_eq!(g.deg(0), 3);
    }

    #[test]
    fn matrix_market_general_with_values() {
        let src = "%%MatrixMarket matrix coordinate real general\n3 3 4\n1 2 0.5\n2 1 0.5\n2 3 1\n3 3 2\n";
        let g = load_graph(src.as_bytes(), Format::MatrixMarket).unwrap();
        assert_eq!((g.n(), g.m()), (3, 2));
    }

    #[test]
    fn matrix_market_errors() {
        let mm = |s: &str| load_graph(s.as_bytes(), Format::MatrixMarket);
        assert!(matches!(mm("1 2\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(
            mm("%%MatrixMarket matrix coordinate pattern general\n3 3 2\n1 2\n"),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            mm("%%MatrixMarket matrix coordinate pattern general\n3 3 1\n1 4\n"),
            Err(Error::Parse { line: 3, .. })
        ));
        assert!(matches!(
            mm("%%MatrixMarket matrix array real general\n3 3\n"),
            Err(Error::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn coreness_lines() {
        // dense order is 0,5,1,2,3,4
        let g = el(G1_EDGES).unwrap();
        let mut buf = Vec::new();
        write_coreness(&g, &[1, 2, 1, 2, 2, 2], &mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf.clone()).unwrap(),
            "0\t1\n1\t1\n2\t2\n3\t2\n4\t2\n5\t2\n"
        );
        let back = read_coreness(buf.as_slice()).unwrap();
        let cores: Vec<u32> = back.iter().map(|&(_, c)| c).collect();
        assert_eq!(cores, vec![1, 1, 2, 2, 2, 2]);
    }

    #[test]
    fn empty_graph_coreness_is_empty() {
        let mut buf = Vec::new();
        write_coreness(&Graph::empty(), &[], &mut buf).unwrap();
        assert!(buf.is_empty());
    }

    #[test]
    fn read_coreness_rejects_garbage() {
        assert!(matches!(
            read_coreness("0\t1\n1 x\n".as_bytes()),
            Err(Error::Parse { line: 2, .. })
        ));
    }

    #[test]
    fn edge_list_reload_is_identical() {
        let g = el("10 3\n3 7\n# x\n7 10\n3 99\n").unwrap();
        let mut buf = Vec::new();
        write_edge_list(&g, &mut buf).unwrap();
        assert_eq!(el(std::str::from_utf8(&buf).unwrap()).unwrap(), g);

        // isolated vertices survive via declarations
        let h = Graph::from_edges(5, [(3, 1), (0, 4)]).unwrap();
        let mut buf = Vec::new();
        write_edge_list(&h, &mut buf).unwrap();
        assert_eq!(el(std::str::from_utf8(&buf).unwrap()).unwrap(), h);
    }
}
