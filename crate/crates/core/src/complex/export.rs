use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

use super::nerve::intersect_sorted;
use super::Cover;
use crate::{ensure, Result};

/// Vertex of a nerve 1-skeleton with plotting attributes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NerveVertex {
    pub id: usize,
    pub count: usize,
    /// `ln(|U_i| + 1)`
    pub size: f64,
    /// Label histogram when labels were supplied.
    pub labels: BTreeMap<String, usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NerveEdge {
    pub u: usize,
    pub v: usize,
    pub count: usize,
    /// `ln(|U_i ∩ U_j| + 1)`
    pub thickness: f64,
    /// `1 / |U_i ∩ U_j|`
    pub length: f64,
}

/// The 1-skeleton of a cover's nerve annotated for plotting.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NerveGraph {
    pub vertices: Vec<NerveVertex>,
    pub edges: Vec<NerveEdge>,
}

impl NerveGraph {
    pub fn from_cover(cover: &Cover, labels: Option<&[String]>) -> Result<Self> {
        if let Some(l) = labels {
            ensure!(
                l.len() == cover.n(),
                Parameter,
                "got {} labels for {} points",
                l.len(),
                cover.n()
            );
        }
        let members = cover.members();
        let alive: Vec<usize> = cover.nonempty().collect();
        let vertices = alive
            .iter()
            .map(|&i| {
                let mut hist = BTreeMap::new();
                if let Some(l) = labels {
                    for &x in &members[i] {
                        *hist.entry(l[x].clone()).or_insert(0) += 1;
                    }
                }
                NerveVertex {
                    id: i,
                    count: members[i].len(),
                    size: (members[i].len() as f64 + 1.0).ln(),
                    labels: hist,
                }
            })
            .collect();
        let mut edges = Vec::new();
        for (a, &i) in alive.iter().enumerate() {
            for &j in &alive[a + 1..] {
                let count = intersect_sorted(&members[i], &members[j]).len();
                if count > 0 {
                    edges.push(NerveEdge {
                        u: i,
                        v: j,
                        count,
                        thickness: (count as f64 + 1.0).ln(),
                        length: 1.0 / count as f64,
                    });
                }
            }
        }
        Ok(Self { vertices, edges })
    }

    fn label_string(hist: &BTreeMap<String, usize>) -> String {
        hist.iter().map(|(k, v)| format!("{k}:{v}")).collect::<Vec<_>>().join(";")
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph nerve {\n");
        for v in &self.vertices {
            let _ = write!(s, "  {} [count={}, size={}", v.id, v.count, v.size);
            if !v.labels.is_empty() {
                let _ = write!(s, ", labels=\"{}\"", Self::label_string(&v.labels));
            }
            s.push_str("];\n");
        }
        for e in &self.edges {
            let _ = writeln!(
                s,
                "  {} -- {} [count={}, penwidth={}, len={}];",
                e.u, e.v, e.count, e.thickness, e.length
            );
        }
        s.push_str("}\n");
        s
    }

    pub fn to_graphml(&self) -> String {
        let mut s = String::from(
            "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n\
             <graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n\
             \x20 <key id=\"count\" for=\"all\" attr.name=\"count\" attr.type=\"int\"/>\n\
             \x20 <key id=\"size\" for=\"node\" attr.name=\"size\" attr.type=\"double\"/>\n\
             \x20 <key id=\"labels\" for=\"node\" attr.name=\"labels\" attr.type=\"string\"/>\n\
             \x20 <key id=\"thickness\" for=\"edge\" attr.name=\"thickness\" attr.type=\"double\"/>\n\
             \x20 <key id=\"length\" for=\"edge\" attr.name=\"length\" attr.type=\"double\"/>\n\
             \x20 <graph id=\"nerve\" edgedefault=\"undirected\">\n",
        );
        for v in &self.vertices {
            let _ = writeln!(
                s,
                "    <node id=\"n{}\"><data key=\"count\">{}</data><data key=\"size\">{}</data>{}</node>",
                v.id,
                v.count,
                v.size,
                if v.labels.is_empty() {
                    String::new()
                } else {
                    format!("<data key=\"labels\">{}</data>", xml_escape(&Self::label_string(&v.labels)))
                }
            );
        }
        for e in &self.edges {
            let _ = writeln!(
                s,
                "    <edge source=\"n{}\" target=\"n{}\"><data key=\"count\">{}</data><data key=\"thickness\">{}</data><data key=\"length\">{}</data></edge>",
                e.u, e.v, e.count, e.thickness, e.length
            );
        }
        s.push_str("  </graph>\n</graphml>\n");
        s
    }
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn attributes_follow_plotting_conventions() {
        let c = Cover::new(5, vec![vec![0, 1, 2], vec![2, 3], vec![], vec![3, 4]]).unwrap();
        let labels: Vec<String> = ["a", "a", "b", "b", "c"].iter().map(|s| s.to_string()).collect();
        let g = NerveGraph::from_cover(&c, Some(&labels)).unwrap();
        assert_eq!(g.vertices.len(), 3);
        assert!((g.vertices[0].size - 4f64.ln()).abs() < 1e-15);
        assert_eq!(g.vertices[0].labels.get("a"), Some(&2));
        assert_eq!(g.edges.len(), 2);
        assert_eq!((g.edges[0].u, g.edges[0].v, g.edges[0].count), (0, 1, 1));
        assert!((g.edges[0].thickness - 2f64.ln()).abs() < 1e-15);
        assert_eq!(g.edges[0].length, 1.0);
    }

    #[test]
    fn partition_exports_isolated_vertices() {
        let c = Cover::new(4, vec![vec![0, 1], vec![2, 3]]).unwrap();
        let g = NerveGraph::from_cover(&c, None).unwrap();
        let dot = g.to_dot();
        assert!(dot.contains("  0 [count=2"));
        assert!(!dot.contains("--"));
        let xml = g.to_graphml();
        assert_eq!(xml.matches("<node ").count(), 2);
        assert_eq!(xml.matches("<edge ").count(), 0);
    }

    #[test]
    fn label_count_mismatch_is_rejected() {
        let c = Cover::new(2, vec![vec![0, 1]]).unwrap();
        assert!(NerveGraph::from_cover(&c, Some(&["x".to_string()])).is_err());
    }
}
