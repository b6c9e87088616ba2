//! Diagrams: DOT for the dual graph, SVG for planar partitions.

use std::fmt::Write;

use num_traits::ToPrimitive;
use toricdegen::{Partition, Point};

use crate::error::CliError;

/// Nodes are pieces, edges are walls (shared facets).
pub fn dual_graph_dot(g: &Partition) -> String {
    let mut out = String::from("graph dual {\n");
    for i in 0..g.pieces().len() {
        let _ = writeln!(out, "  p{i} [label=\"{i}\"];");
    }
    let mut edges: Vec<(usize, usize)> = g.walls().into_iter().map(|(i, j, _)| (i.min(j), i.max(j))).collect();
    edges.sort();
    edges.dedup();
    for (i, j) in edges {
        let _ = writeln!(out, "  p{i} -- p{j};");
    }
    out.push_str("}\n");
    out
}

const SCALE: f64 = 40.0;
const MARGIN: f64 = 20.0;
const FILLS: [&str; 6] = ["#8dd3c7", "#ffffb3", "#bebada", "#fb8072", "#80b1d3", "#fdb462"];

fn coords(p: &Point) -> (f64, f64) {
    let f = |i: usize| p.0[i].to_f64().unwrap_or(0.0);
    (f(0), f(1))
}

/// Vertices of a planar polygon in counter-clockwise order.
fn cyclic(vertices: &[Point]) -> Vec<(f64, f64)> {
    let mut pts: Vec<(f64, f64)> = vertices.iter().map(coords).collect();
    let n = pts.len() as f64;
    let cx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let cy = pts.iter().map(|p| p.1).sum::<f64>() / n;
    pts.sort_by(|a, b| {
        let ta = (a.1 - cy).atan2(a.0 - cx);
        let tb = (b.1 - cy).atan2(b.0 - cx);
        ta.total_cmp(&tb)
    });
    pts
}

/// Each piece as a labelled polygon. Only compact planar bases are drawn.
pub fn partition_svg(g: &Partition) -> Result<String, CliError> {
    if g.rank() != 2 || !g.ambient().is_compact() {
        return Err(CliError::Input("SVG output needs a compact 2-dimensional polytope".into()));
    }
    let all = cyclic(g.ambient().vertices());
    let (min_x, max_x) = all.iter().fold((f64::MAX, f64::MIN), |(a, b), p| (a.min(p.0), b.max(p.0)));
    let (min_y, max_y) = all.iter().fold((f64::MAX, f64::MIN), |(a, b), p| (a.min(p.1), b.max(p.1)));
    let width = (max_x - min_x) * SCALE + 2.0 * MARGIN;
    let height = (max_y - min_y) * SCALE + 2.0 * MARGIN;
    // y grows upwards in the lattice, downwards in SVG
    let map = |(x, y): (f64, f64)| ((x - min_x) * SCALE + MARGIN, (max_y - y) * SCALE + MARGIN);

    let mut out = String::new();
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" viewBox=\"0 0 {width} {height}\">"
    );
    for (i, piece) in g.pieces().iter().enumerate() {
        let points: Vec<String> = cyclic(piece.vertices())
            .into_iter()
            .map(|p| {
                let (x, y) = map(p);
                format!("{x},{y}")
            })
            .collect();
        let _ = writeln!(
            out,
            "  <polygon id=\"piece-{i}\" points=\"{}\" fill=\"{}\" stroke=\"black\"/>",
            points.join(" "),
            FILLS[i % FILLS.len()]
        );
    }
    for (i, piece) in g.pieces().iter().enumerate() {
        let pts = cyclic(piece.vertices());
        let n = pts.len() as f64;
        let (x, y) = map((pts.iter().map(|p| p.0).sum::<f64>() / n, pts.iter().map(|p| p.1).sum::<f64>() / n));
        let _ = writeln!(out, "  <text x=\"{x}\" y=\"{y}\" text-anchor=\"middle\">{i}</text>");
    }
    for (i, j, face) in g.walls() {
        let ends: Vec<String> = g.faces()[face]
            .polytope
            .vertices()
            .iter()
            .map(|p| {
                let (x, y) = map(coords(p));
                format!("{x},{y}")
            })
            .collect();
        let _ = writeln!(
            out,
            "  <polyline class=\"wall\" data-pieces=\"{i} {j}\" points=\"{}\" stroke=\"black\" stroke-width=\"2\"/>",
            ends.join(" ")
        );
    }
    out.push_str("</svg>\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use toricdegen::{LatticePolytope, LatticeVector};

    fn strip() -> Partition {
        let p = LatticePolytope::from_i64_vertices(&[&[0, 0], &[3, 0], &[0, 1], &[3, 1]]).unwrap();
        Partition::from_hyperplanes(p, &LatticeVector::from_i64(&[1, 0]), &[BigInt::from(1), BigInt::from(2)]).unwrap()
    }

    #[test]
    fn strip_dual_graph_is_a_path() {
        let dot = dual_graph_dot(&strip());
        assert_eq!(dot.matches(" -- ").count(), 2);
        assert!(!dot.contains("p0 -- p2"));
    }

    #[test]
    fn svg_has_a_polygon_per_piece_and_a_wall_per_adjacency() {
        let svg = partition_svg(&strip()).unwrap();
        assert_eq!(svg.matches("<polygon").count(), 3);
        assert_eq!(svg.matches("class=\"wall\"").count(), 2);
    }

    #[test]
    fn svg_refuses_unbounded_bases() {
        let line = LatticePolytope::from_halfspaces(1, &[]).unwrap();
        let g = Partition::from_hyperplanes(line, &LatticeVector::from_i64(&[1]), &[BigInt::from(0)]).unwrap();
        assert!(partition_svg(&g).is_err());
    }
}
