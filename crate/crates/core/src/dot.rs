//! Graphviz export of `BS_n` and of the prism factor graph.

use std::fmt::Write;

use crate::error::{Error, Result};
use crate::ham::factor_graph;
use crate::perm::Permutation;

pub const MAX_BS_DOT_N: usize = 4;
pub const MAX_FACTOR_DOT_N: usize = 9;

/// `BS_n` with vertices labelled by their image (`"1324"`) and edges tagged
/// `gen=i`. Vertices and edges come out in lexicographic order.
pub fn bs_graph_dot(n: usize) -> Result<String> {
    if !(2..=MAX_BS_DOT_N).contains(&n) {
        return Err(Error::SizeOutOfRange {
            n,
            min: 2,
            max: MAX_BS_DOT_N,
        });
    }
    let mut out = format!("graph BS{n} {{\n");
    let verts: Vec<Permutation> = Permutation::all(n)?.collect();
    for p in &verts {
        writeln!(out, "  \"{}\";", p.label()).unwrap();
    }
    for p in &verts {
        for g in 1..n {
            let q = p.apply_gen(g)?;
            if p < &q {
                writeln!(out, "  \"{}\" -- \"{}\" [gen={g}];", p.label(), q.label()).unwrap();
            }
        }
    }
    out.push_str("}\n");
    Ok(out)
}

/// The factor graph `Γ_n`, one node per prism pair `"a,b"`.
pub fn factor_graph_dot(n: usize) -> Result<String> {
    if !(5..=MAX_FACTOR_DOT_N).contains(&n) {
        return Err(Error::SizeOutOfRange {
            n,
            min: 5,
            max: MAX_FACTOR_DOT_N,
        });
    }
    let g = factor_graph(n)?;
    let label = |q: &crate::prisms::PrismId| format!("{},{}", q.pair().0, q.pair().1);
    let mut out = format!("graph Gamma{n} {{\n");
    for q in g.vertices() {
        writeln!(out, "  \"{}\";", label(q)).unwrap();
    }
    for (a, b) in g.edges() {
        writeln!(out, "  \"{}\" -- \"{}\";", label(&a), label(&b)).unwrap();
    }
    out.push_str("}\n");
    Ok(out)
}
