//! Graphviz export. Interior tree vertices are filled dots, hybrid vertices
//! empty dots, leaves their taxon. Arcs of a highlighted subgraph (a display
//! witness, say) are drawn dashed and the rest solid.

use std::collections::BTreeSet;
use std::fmt::Write;

use crate::model::{Arc, MulTree, XNetwork};

#[derive(Clone, Debug, Default)]
pub struct DotStyle {
    pub name: Option<String>,
    pub highlight: BTreeSet<Arc>,
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

pub fn network_to_dot(n: &XNetwork, style: &DotStyle) -> String {
    let g = n.graph();
    let mut out = String::new();
    let name = style.name.as_deref().unwrap_or("network");
    writeln!(out, "digraph \"{}\" {{", escape(name)).unwrap();
    writeln!(out, "  node [shape=point, width=0.08];").unwrap();
    for v in g.vertices() {
        let attrs = match n.label(v) {
            Some(l) => format!("shape=plaintext, label=\"{}\"", escape(l)),
            None if g.is_hybrid(v) => "shape=circle, width=0.12, label=\"\", color=black, fillcolor=white, style=filled".to_string(),
            None => "color=black".to_string(),
        };
        writeln!(out, "  {} [{}];", v.0, attrs).unwrap();
    }
    for a in g.arcs() {
        if style.highlight.contains(&a) {
            writeln!(out, "  {} -> {} [style=dashed, penwidth=2];", a.tail.0, a.head.0).unwrap();
        } else {
            writeln!(out, "  {} -> {};", a.tail.0, a.head.0).unwrap();
        }
    }
    out.push_str("}\n");
    out
}

pub fn multree_to_dot(m: &MulTree, style: &DotStyle) -> String {
    let g = m.tree();
    let mut out = String::new();
    let name = style.name.as_deref().unwrap_or("multree");
    writeln!(out, "digraph \"{}\" {{", escape(name)).unwrap();
    writeln!(out, "  node [shape=point, width=0.08];").unwrap();
    for v in g.vertices() {
        if let Some(l) = m.label(v) {
            writeln!(out, "  {} [shape=plaintext, label=\"{}\"];", v.0, escape(l)).unwrap();
        } else {
            writeln!(out, "  {};", v.0).unwrap();
        }
    }
    for a in g.arcs() {
        if style.highlight.contains(&a) {
            writeln!(out, "  {} -> {} [style=dashed, penwidth=2];", a.tail.0, a.head.0).unwrap();
        } else {
            writeln!(out, "  {} -> {};", a.tail.0, a.head.0).unwrap();
        }
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::parse_enewick;

    #[test]
    fn hybrids_are_hollow() {
        let n = parse_enewick("((((1,2))#H1,3),#H1);").unwrap();
        let dot = network_to_dot(&n, &DotStyle::default());
        assert!(dot.starts_with("digraph"));
        assert_eq!(dot.matches("fillcolor=white").count(), 1);
        assert_eq!(dot.matches("->").count(), n.graph().arc_count());
    }
}
