//! The small graphs and coverings used throughout the tests and the CLI
//! self-test: `L1`, `B2`, the directed cycles `Cn`, and `D2` (the double
//! cover of `B2`).

use crate::covering::GraphMorphism;
use crate::graph::Graph;

/// One vertex `u`, one loop `e`.
pub fn l1() -> Graph {
    Graph::new(["u"], [("e", "u", "u")]).unwrap()
}

/// The figure-eight: one vertex `u`, loops `x` and `y`.
pub fn b2() -> Graph {
    Graph::new(["u"], [("x", "u", "u"), ("y", "u", "u")]).unwrap()
}

/// Vertices `0..n`, edges `e_i: i → i+1 mod n`.
pub fn cycle(n: usize) -> Graph {
    assert!(n > 0);
    let vertices: Vec<String> = (0..n).map(|i| i.to_string()).collect();
    let edges: Vec<(String, String, String)> = (0..n)
        .map(|i| (format!("e{i}"), i.to_string(), ((i + 1) % n).to_string()))
        .collect();
    Graph::new(vertices, edges).unwrap()
}

/// Vertices `0, 1`; `x0: 0→1`, `x1: 1→0`, `y0: 0→0`, `y1: 1→1`.
pub fn d2() -> Graph {
    Graph::new(
        ["0", "1"],
        [("x0", "0", "1"), ("x1", "1", "0"), ("y0", "0", "0"), ("y1", "1", "1")],
    )
    .unwrap()
}

/// `Cn → L1`, wrapping the cycle around the loop.
pub fn cn_to_l1(n: usize) -> GraphMorphism {
    let c = cycle(n);
    GraphMorphism::new(c, l1(), vec![0; n], vec![0; n]).unwrap()
}

pub fn c2_to_l1() -> GraphMorphism {
    cn_to_l1(2)
}

/// `D2 → B2`, `x_i ↦ x`, `y_i ↦ y`.
pub fn d2_to_b2() -> GraphMorphism {
    let d = d2();
    let b = b2();
    let edge_map = d
        .edge_names()
        .iter()
        .map(|name| b.edge(&name[..1]).unwrap())
        .collect();
    GraphMorphism::new(d, b, vec![0, 0], edge_map).unwrap()
}

pub fn identity_b2() -> GraphMorphism {
    GraphMorphism::identity(&b2())
}

/// The four fixture coverings with a base vertex each, named for reports.
pub fn coverings() -> Vec<(&'static str, GraphMorphism, usize)> {
    vec![
        ("identity on B2", identity_b2(), 0),
        ("C2 -> L1", c2_to_l1(), 0),
        ("C3 -> L1", cn_to_l1(3), 0),
        ("D2 -> B2", d2_to_b2(), 0),
    ]
}
