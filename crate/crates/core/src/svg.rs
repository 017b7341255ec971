//! Static SVG 1.1 rendering of a laid-out graph.

use std::fmt::Write;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::layout::Point;

#[derive(Debug, Clone)]
pub struct SvgStyle {
    pub width: f64,
    pub height: f64,
    pub margin: f64,
    pub vertex_radius: f64,
    pub vertex_fill: String,
    pub edge_stroke: String,
    pub edge_width: f64,
    pub labels: bool,
}

impl Default for SvgStyle {
    fn default() -> Self {
        SvgStyle {
            width: 400.0,
            height: 400.0,
            margin: 20.0,
            vertex_radius: 5.0,
            vertex_fill: "#4c72b0".into(),
            edge_stroke: "#555555".into(),
            edge_width: 1.0,
            labels: false,
        }
    }
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            _ => out.push(c),
        }
    }
    out
}

/// Renders one `<circle>` per vertex and one `<line>` per edge, with the
/// bounding box of `coords` fitted into the viewport minus the margin.
/// Directed edges end in an arrow marker and stop at the target's rim.
/// Numbers are printed with three decimals, so output is byte-stable.
pub fn render_svg(g: &Graph, coords: &[Point], style: &SvgStyle) -> Result<String> {
    if coords.len() as u64 != g.vertex_count() {
        return Err(Error::param(format!(
            "{} coordinates for {} vertices",
            coords.len(),
            g.vertex_count()
        )));
    }
    if coords.iter().flatten().any(|x| !x.is_finite()) {
        return Err(Error::param("coordinates must be finite"));
    }
    let (w, h, pad) = (style.width, style.height, style.margin);
    let mut lo = [f64::INFINITY; 2];
    let mut hi = [f64::NEG_INFINITY; 2];
    for p in coords {
        for a in 0..2 {
            lo[a] = lo[a].min(p[a]);
            hi[a] = hi[a].max(p[a]);
        }
    }
    let span = [(hi[0] - lo[0]).max(0.0), (hi[1] - lo[1]).max(0.0)];
    let avail = [(w - 2.0 * pad).max(0.0), (h - 2.0 * pad).max(0.0)];
    let scale = match (span[0] > 0.0, span[1] > 0.0) {
        (false, false) => 1.0,
        (true, false) => avail[0] / span[0],
        (false, true) => avail[1] / span[1],
        (true, true) => (avail[0] / span[0]).min(avail[1] / span[1]),
    };
    // centre the drawing; y grows downward in SVG
    let map = |p: &Point| -> Point {
        [
            w / 2.0 + (p[0] - (lo[0] + hi[0]) / 2.0) * scale,
            h / 2.0 - (p[1] - (lo[1] + hi[1]) / 2.0) * scale,
        ]
    };
    let pts: Vec<Point> = coords.iter().map(map).collect();

    let mut s = String::new();
    s.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{w:.3}\" height=\"{h:.3}\" viewBox=\"0 0 {w:.3} {h:.3}\">"
    );
    if g.is_directed() {
        let _ = writeln!(
            s,
            "<defs><marker id=\"arrow\" viewBox=\"0 0 10 10\" refX=\"10\" refY=\"5\" markerWidth=\"6\" markerHeight=\"6\" orient=\"auto\"><path d=\"M 0 0 L 10 5 L 0 10 z\" fill=\"{}\"/></marker></defs>",
            escape(&style.edge_stroke)
        );
    }
    let _ = writeln!(
        s,
        "<g id=\"edges\" stroke=\"{}\" stroke-width=\"{:.3}\">",
        escape(&style.edge_stroke),
        style.edge_width
    );
    for (u, v) in g.edges() {
        let a = pts[u as usize];
        let mut b = pts[v as usize];
        if g.is_directed() {
            let (dx, dy) = (b[0] - a[0], b[1] - a[1]);
            let len = dx.hypot(dy);
            if len > style.vertex_radius {
                let t = (len - style.vertex_radius) / len;
                b = [a[0] + dx * t, a[1] + dy * t];
            }
            let _ = writeln!(
                s,
                "<line x1=\"{:.3}\" y1=\"{:.3}\" x2=\"{:.3}\" y2=\"{:.3}\" marker-end=\"url(#arrow)\"/>",
                a[0], a[1], b[0], b[1]
            );
        } else {
            let _ = writeln!(
                s,
                "<line x1=\"{:.3}\" y1=\"{:.3}\" x2=\"{:.3}\" y2=\"{:.3}\"/>",
                a[0], a[1], b[0], b[1]
            );
        }
    }
    s.push_str("</g>\n");
    let _ = writeln!(
        s,
        "<g id=\"vertices\" fill=\"{}\">",
        escape(&style.vertex_fill)
    );
    for p in &pts {
        let _ = writeln!(
            s,
            "<circle cx=\"{:.3}\" cy=\"{:.3}\" r=\"{:.3}\"/>",
            p[0], p[1], style.vertex_radius
        );
    }
    s.push_str("</g>\n");
    if style.labels {
        s.push_str("<g id=\"labels\" font-family=\"sans-serif\" font-size=\"10\" text-anchor=\"middle\">\n");
        for (v, p) in pts.iter().enumerate() {
            let _ = writeln!(
                s,
                "<text x=\"{:.3}\" y=\"{:.3}\">{v}</text>",
                p[0],
                p[1] - style.vertex_radius - 2.0
            );
        }
        s.push_str("</g>\n");
    }
    s.push_str("</svg>\n");
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn count(doc: &roxmltree::Document, tag: &str) -> usize {
        doc.descendants().filter(|n| n.has_tag_name(tag)).count()
    }

    #[test]
    fn empty_graph_is_valid() {
        let s = render_svg(&Graph::new(0, false), &[], &SvgStyle::default()).unwrap();
        let doc = roxmltree::Document::parse(&s).unwrap();
        assert_eq!(count(&doc, "circle"), 0);
        assert_eq!(count(&doc, "g"), 2);
    }

    #[test]
    fn single_edge() {
        let g = Graph::from_edges(2, false, &[(0, 1)]).unwrap();
        let s = render_svg(&g, &[[0.0, 0.0], [1.0, 1.0]], &SvgStyle::default()).unwrap();
        let doc = roxmltree::Document::parse(&s).unwrap();
        assert_eq!(count(&doc, "circle"), 2);
        assert_eq!(count(&doc, "line"), 1);
        assert!(!s.contains("marker"));
    }

    #[test]
    fn directed_edge_has_marker() {
        let g = Graph::from_edges(2, true, &[(0, 1)]).unwrap();
        let style = SvgStyle {
            labels: true,
            vertex_fill: "a<b".into(),
            ..Default::default()
        };
        let s = render_svg(&g, &[[0.0, 0.0], [3.0, 0.0]], &style).unwrap();
        let doc = roxmltree::Document::parse(&s).unwrap();
        let line = doc.descendants().find(|n| n.has_tag_name("line")).unwrap();
        assert_eq!(line.attribute("marker-end"), Some("url(#arrow)"));
        assert_eq!(count(&doc, "marker"), 1);
        assert_eq!(count(&doc, "text"), 2);
    }

    #[test]
    fn byte_stable_and_checked() {
        let g = Graph::from_edges(3, false, &[(0, 1), (1, 2)]).unwrap();
        let c = [[0.1, 0.2], [0.3, -0.4], [5.0, 5.0]];
        let a = render_svg(&g, &c, &SvgStyle::default()).unwrap();
        assert_eq!(a, render_svg(&g, &c, &SvgStyle::default()).unwrap());
        assert!(render_svg(&g, &c[..2], &SvgStyle::default()).is_err());
    }
}
