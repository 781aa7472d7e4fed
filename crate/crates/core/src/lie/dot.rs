//! Graphviz rendering of the `e` and `f` actions.

use std::fmt::Write;

use super::ActionTruncation;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Operator {
    E,
    F,
}

fn node(n: usize, i: usize) -> String {
    format!("c{n}_{i}")
}

fn quote(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Levels `0..=N` left to right, one node per class labelled by its
/// descriptor and one labelled edge per nonzero matrix entry.
pub fn emit_dot(action: &ActionTruncation, op: Operator) -> String {
    let age = action.age();
    let top = action.max_level();
    let name = match op {
        Operator::E => "e",
        Operator::F => "f",
    };
    let mut out = String::new();
    writeln!(out, "digraph {name} {{").unwrap();
    writeln!(out, "  rankdir=LR;").unwrap();
    writeln!(out, "  node [shape=box];").unwrap();
    for n in 0..=top {
        writeln!(out, "  subgraph level_{n} {{").unwrap();
        writeln!(out, "    rank=same;").unwrap();
        for (i, c) in action.levels().level(n).iter().enumerate() {
            writeln!(out, "    {} [label=\"{}\"];", node(n, i), quote(&age.describe(&c.rep))).unwrap();
        }
        writeln!(out, "  }}").unwrap();
    }
    for n in 0..=top {
        let (m, target) = match op {
            Operator::E if n < top => (action.e(n), n + 1),
            Operator::F if n >= 1 => (action.f(n), n - 1),
            _ => continue,
        };
        for (row, col, v) in m.expect("matrix within the truncation").entries() {
            writeln!(out, "  {} -> {} [label=\"{}\"];", node(n, col), node(target, row), quote(&v.to_string()))
                .unwrap();
        }
    }
    out.push_str("}\n");
    out
}
