use crate::graph::Graph;

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for ch in s.chars() {
        match ch {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            _ => out.push(ch),
        }
    }
    out.push('"');
    out
}

/// Graphviz text: one node statement per vertex and one labelled edge
/// statement per edge, both in id order.
pub fn to_dot(g: &Graph, name: &str) -> String {
    let mut out = format!("digraph {} {{\n", quote(name));
    for v in g.vertex_names() {
        out.push_str(&format!("  {};\n", quote(v)));
    }
    for (e, s, d) in g.edge_triples() {
        out.push_str(&format!("  {} -> {} [label={}];\n", quote(s), quote(d), quote(e)));
    }
    out.push_str("}\n");
    out
}
