//! Edge-list and graph-document text formats.
//!
//! An edge list holds one `u v` or `u v w` line per edge; `#` starts a
//! comment line. The vertex count is the largest id plus one, so isolated
//! trailing vertices and all attributes except `weight` are lost.
//!
//! A graph document keeps everything. Its layout:
//!
//! ```text
//! graphdoc 1
//! directed false
//! vertices 3
//! edges 2
//! 0 1
//! 1 2
//! attribute vertex text "name"
//! "a"
//! "b"
//! "c"
//! end
//! ```
//!
//! Each `attribute <scope> <type> <name>` header is followed by one value
//! per graph (1), vertex or edge. Names and text values are JSON string
//! literals; numbers use the shortest decimal that parses back to the same
//! bits (`NaN`, `inf`, `-inf` included); booleans are `true`/`false`.

use std::io::{BufRead, Write};

use crate::attributes::{AttrType, Column, Scope};
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};

pub const GRAPHDOC_VERSION: u32 = 1;
pub const WEIGHT_ATTRIBUTE: &str = "weight";

fn parse_id(tok: &str, line: usize) -> Result<VertexId> {
    if tok.starts_with('-') {
        return Err(Error::parse(line, format!("negative vertex id '{tok}'")));
    }
    tok.parse()
        .map_err(|_| Error::parse(line, format!("invalid vertex id '{tok}'")))
}

fn parse_f64(tok: &str, line: usize) -> Result<f64> {
    tok.parse()
        .map_err(|_| Error::parse(line, format!("invalid number '{tok}'")))
}

/// Reads an edge list. A third column becomes the numeric edge attribute
/// `weight`; every data line must have the same number of columns.
pub fn read_edgelist(source: impl BufRead, directed: bool) -> Result<Graph> {
    let mut pairs = Vec::new();
    let mut weights = Vec::new();
    let mut columns = None;
    let mut n: u64 = 0;
    for (i, line) in source.lines().enumerate() {
        let line = line?;
        let lineno = i + 1;
        let body = line.trim();
        if body.is_empty() || body.starts_with('#') {
            continue;
        }
        let toks: Vec<&str> = body.split_whitespace().collect();
        if !(2..=3).contains(&toks.len()) {
            return Err(Error::parse(
                lineno,
                format!("expected 2 or 3 columns, found {}", toks.len()),
            ));
        }
        match columns {
            None => columns = Some(toks.len()),
            Some(c) if c != toks.len() => {
                return Err(Error::parse(
                    lineno,
                    format!("found {} columns after lines with {c}", toks.len()),
                ))
            }
            _ => {}
        }
        let u = parse_id(toks[0], lineno)?;
        let v = parse_id(toks[1], lineno)?;
        let top = u.max(v);
        if top == u64::MAX {
            return Err(Error::parse(lineno, "vertex id too large"));
        }
        n = n.max(top + 1);
        pairs.push((u, v));
        if let Some(w) = toks.get(2) {
            weights.push(parse_f64(w, lineno)?);
        }
    }
    let mut g = Graph::from_edges(n, directed, &pairs)?;
    if columns == Some(3) {
        g.set_attribute(Scope::Edge, WEIGHT_ATTRIBUTE, weights)?;
    }
    Ok(g)
}

/// Writes `u v` lines in edge order, with a weight column when the graph
/// has a numeric `weight` edge attribute.
pub fn write_edgelist(g: &Graph, mut sink: impl Write) -> Result<()> {
    let weights = g
        .attribute(Scope::Edge, WEIGHT_ATTRIBUTE)
        .ok()
        .and_then(Column::as_numeric);
    for (e, (u, v)) in g.edges().enumerate() {
        match weights {
            Some(w) => writeln!(sink, "{u} {v} {:?}", w[e])?,
            None => writeln!(sink, "{u} {v}")?,
        }
    }
    sink.flush()?;
    Ok(())
}

fn json_string(s: &str) -> String {
    serde_json::to_string(s).expect("strings always serialize")
}

pub fn write_graphdoc(g: &Graph, mut sink: impl Write) -> Result<()> {
    writeln!(sink, "graphdoc {GRAPHDOC_VERSION}")?;
    writeln!(sink, "directed {}", g.is_directed())?;
    writeln!(sink, "vertices {}", g.vertex_count())?;
    writeln!(sink, "edges {}", g.edge_count())?;
    for (u, v) in g.edges() {
        writeln!(sink, "{u} {v}")?;
    }
    for scope in Scope::ALL {
        for (name, col) in g.attributes().iter(scope) {
            writeln!(
                sink,
                "attribute {scope} {} {}",
                col.attr_type().tag(),
                json_string(name)
            )?;
            match col {
                Column::Numeric(xs) => {
                    for x in xs {
                        writeln!(sink, "{x:?}")?;
                    }
                }
                Column::Text(xs) => {
                    for x in xs {
                        writeln!(sink, "{}", json_string(x))?;
                    }
                }
                Column::Boolean(xs) => {
                    for x in xs {
                        writeln!(sink, "{x}")?;
                    }
                }
            }
        }
    }
    writeln!(sink, "end")?;
    sink.flush()?;
    Ok(())
}

struct Lines<R> {
    inner: std::io::Lines<R>,
    number: usize,
}

impl<R: BufRead> Lines<R> {
    fn next_line(&mut self, what: &str) -> Result<String> {
        self.number += 1;
        match self.inner.next() {
            Some(line) => Ok(line?),
            None => Err(Error::parse(
                self.number,
                format!("unexpected end of document, expected {what}"),
            )),
        }
    }

    fn keyword<'a>(&self, line: &'a str, key: &str) -> Result<&'a str> {
        line.strip_prefix(key)
            .and_then(|rest| rest.strip_prefix(' '))
            .ok_or_else(|| Error::parse(self.number, format!("expected '{key} ...'")))
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::parse(self.number, msg)
    }
}

pub fn read_graphdoc(source: impl BufRead) -> Result<Graph> {
    let mut lines = Lines {
        inner: source.lines(),
        number: 0,
    };
    let header = lines.next_line("header")?;
    let version = lines.keyword(&header, "graphdoc")?;
    if version != GRAPHDOC_VERSION.to_string() {
        return Err(lines.err(format!("unsupported graphdoc version '{version}'")));
    }
    let line = lines.next_line("directed flag")?;
    let directed = match lines.keyword(&line, "directed")? {
        "true" => true,
        "false" => false,
        other => return Err(lines.err(format!("invalid directed flag '{other}'"))),
    };
    let line = lines.next_line("vertex count")?;
    let n: u64 = lines
        .keyword(&line, "vertices")?
        .parse()
        .map_err(|_| lines.err("invalid vertex count"))?;
    let line = lines.next_line("edge count")?;
    let m: u64 = lines
        .keyword(&line, "edges")?
        .parse()
        .map_err(|_| lines.err("invalid edge count"))?;
    let mut pairs = Vec::new();
    for _ in 0..m {
        let line = lines.next_line("edge")?;
        let mut toks = line.split(' ');
        let (Some(u), Some(v), None) = (toks.next(), toks.next(), toks.next()) else {
            return Err(lines.err("expected 'u v'"));
        };
        let (u, v) = (parse_id(u, lines.number)?, parse_id(v, lines.number)?);
        if u >= n || v >= n {
            return Err(lines.err(format!("edge ({u}, {v}) outside {n} vertices")));
        }
        pairs.push((u, v));
    }
    let mut g = Graph::from_edges(n, directed, &pairs)?;
    loop {
        let line = lines.next_line("attribute or end")?;
        if line == "end" {
            break;
        }
        let rest = lines.keyword(&line, "attribute")?;
        let mut parts = rest.splitn(3, ' ');
        let (Some(scope), Some(tag), Some(name)) = (parts.next(), parts.next(), parts.next())
        else {
            return Err(lines.err("expected 'attribute <scope> <type> <name>'"));
        };
        let scope = match scope {
            "graph" => Scope::Graph,
            "vertex" => Scope::Vertex,
            "edge" => Scope::Edge,
            other => return Err(lines.err(format!("unknown attribute scope '{other}'"))),
        };
        let ty = AttrType::from_tag(tag)
            .ok_or_else(|| lines.err(format!("unknown attribute type '{tag}'")))?;
        let name: String = serde_json::from_str(name)
            .map_err(|e| lines.err(format!("bad attribute name: {e}")))?;
        if g.attribute(scope, &name).is_ok() {
            return Err(lines.err(format!("duplicate {scope} attribute '{name}'")));
        }
        let count = g.scope_len(scope);
        let col = match ty {
            AttrType::Numeric => {
                let mut xs = Vec::new();
                for _ in 0..count {
                    let line = lines.next_line("numeric value")?;
                    xs.push(parse_f64(&line, lines.number)?);
                }
                Column::Numeric(xs)
            }
            AttrType::Text => {
                let mut xs = Vec::new();
                for _ in 0..count {
                    let line = lines.next_line("text value")?;
                    xs.push(
                        serde_json::from_str(&line)
                            .map_err(|e| lines.err(format!("bad text value: {e}")))?,
                    );
                }
                Column::Text(xs)
            }
            AttrType::Boolean => {
                let mut xs = Vec::new();
                for _ in 0..count {
                    let line = lines.next_line("boolean value")?;
                    xs.push(match line.as_str() {
                        "true" => true,
                        "false" => false,
                        _ => return Err(lines.err(format!("invalid boolean '{line}'"))),
                    });
                }
                Column::Boolean(xs)
            }
        };
        g.set_attribute(scope, &name, col)?;
    }
    if let Some(extra) = lines.inner.next() {
        lines.number += 1;
        if !extra?.trim().is_empty() {
            return Err(lines.err("content after 'end'"));
        }
    }
    Ok(g)
}

/// Structural and attribute equality: directedness, vertex count, edge
/// arrays in order, and every attribute column.
pub fn same_graph(a: &Graph, b: &Graph) -> bool {
    a.is_directed() == b.is_directed()
        && a.vertex_count() == b.vertex_count()
        && a.sources() == b.sources()
        && a.targets() == b.targets()
        && a.attributes() == b.attributes()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn roundtrip(g: &Graph) -> Graph {
        let mut buf = Vec::new();
        write_graphdoc(g, &mut buf).unwrap();
        read_graphdoc(buf.as_slice()).unwrap()
    }

    #[test]
    fn edgelist_examples() {
        let g = read_edgelist("0 1\n1 2\n".as_bytes(), false).unwrap();
        assert_eq!(g.vertex_count(), 3);
        assert_eq!(g.sources(), &[0, 1]);
        assert_eq!(g.targets(), &[1, 2]);
        let w = read_edgelist("# c\n0 1 2.5\n\n".as_bytes(), true).unwrap();
        assert_eq!(w.edge_weights("weight").unwrap(), &[2.5]);
        let mut out = Vec::new();
        write_edgelist(&w, &mut out).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), "0 1 2.5\n");
    }

    #[test]
    fn edgelist_errors_carry_line_numbers() {
        let e = read_edgelist("0 1\n# x\n1 x\n".as_bytes(), false).unwrap_err();
        assert!(matches!(e, Error::Parse { line: 3, .. }), "{e}");
        let e = read_edgelist("0 -1\n".as_bytes(), false).unwrap_err();
        assert!(matches!(e, Error::Parse { line: 1, .. }));
        let e = read_edgelist("0 1\n1 2 3\n".as_bytes(), false).unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, .. }));
        assert!(read_edgelist("0\n".as_bytes(), false).is_err());
    }

    #[test]
    fn graphdoc_examples() {
        let mut g = Graph::from_edges(3, false, &[(0, 1)]).unwrap();
        g.set_attribute(Scope::Vertex, "name", vec!["a", "b \"quoted\"\n", "ü"])
            .unwrap();
        g.set_attribute(Scope::Edge, "w", vec![0.1]).unwrap();
        g.set_attribute(Scope::Graph, "ok", vec![true]).unwrap();
        let back = roundtrip(&g);
        assert!(same_graph(&g, &back));
        assert_eq!(
            back.edge_weights("w").unwrap()[0].to_bits(),
            0.1f64.to_bits()
        );
        let iso = Graph::new(3, true);
        assert_eq!(roundtrip(&iso).vertex_count(), 3);
        let mut odd = Graph::new(1, false);
        odd.set_attribute(Scope::Vertex, "x y", vec![f64::NAN])
            .unwrap();
        odd.set_attribute(Scope::Graph, "neg", vec![-0.0]).unwrap();
        assert!(same_graph(&odd, &roundtrip(&odd)));
    }

    #[test]
    fn graphdoc_schema_errors() {
        let bad_tag = "graphdoc 1\ndirected false\nvertices 1\nedges 0\nattribute vertex complex \"a\"\n1\nend\n";
        let e = read_graphdoc(bad_tag.as_bytes()).unwrap_err();
        assert!(matches!(e, Error::Parse { line: 5, .. }), "{e}");
        let truncated = "graphdoc 1\ndirected false\nvertices 2\nedges 1\n";
        assert!(matches!(
            read_graphdoc(truncated.as_bytes()),
            Err(Error::Parse { line: 5, .. })
        ));
        let outside = "graphdoc 1\ndirected false\nvertices 1\nedges 1\n0 1\nend\n";
        assert!(read_graphdoc(outside.as_bytes()).is_err());
        assert!(read_graphdoc("graphdoc 2\n".as_bytes()).is_err());
    }
}
