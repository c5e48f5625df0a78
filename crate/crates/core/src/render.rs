//! Graphviz and ASCII renderings.

use std::fmt::Write;

use crate::diagram::{Diagram, ROOT};
use crate::dynamics::orbit_range;
use crate::error::{Error, Result};
use crate::pathspec::PathSpec;

/// DOT digraph, one rank per level, edges labeled by ordinal.
pub fn to_dot(d: &Diagram) -> String {
    let id = |n: usize, v: usize| format!("n{n}_{v}");
    let mut s = String::from("digraph bratteli {\n  rankdir=TB;\n  node [shape=circle];\n");
    let _ = writeln!(s, "  {} [label=\"{ROOT}\"];", id(0, 0));
    for n in 1..=d.depth() {
        let _ = write!(s, "  {{ rank=same;");
        for v in 0..d.width(n) {
            let _ = write!(s, " {};", id(n, v));
        }
        s.push_str(" }\n");
        for v in 0..d.width(n) {
            let _ = writeln!(s, "  {} [label=\"{}\"];", id(n, v), d.name(n, v).replace('"', "\\\""));
        }
    }
    for n in 1..=d.depth() {
        for v in 0..d.width(n) {
            for (o, &src) in d.in_edges(n, v).iter().enumerate() {
                let _ = writeln!(s, "  {} -> {} [label=\"{}\"];", id(n - 1, src), id(n, v), o + 1);
            }
        }
    }
    s.push_str("}\n");
    s
}

/// Rows 0..=rows, one column per time in lo..=hi: `|` where T^m x is minimal
/// into level j (a j-symbol starts), `-` inside a symbol, blank outside the
/// reachable orbit. A last row marks time 0 with `^`.
pub fn array(x: &PathSpec, rows: usize, lo: i64, hi: i64, d: &Diagram) -> Result<String> {
    if lo > 0 || hi < 0 {
        return Err(Error::BadArgument("window must contain 0".into()));
    }
    let r = x.resolve_full(d);
    if r.horizon() < rows {
        return Err(r.failure.unwrap_or(Error::LevelOutOfRange(rows)));
    }
    let (glo, _, entries) = orbit_range(d, &r.path, lo, hi);
    let width = (hi - lo + 1) as usize;
    let label_w = rows.to_string().len();
    let mut out = String::new();
    for j in 0..=rows {
        let mut line = vec![' '; width];
        for (i, p) in entries.iter().enumerate() {
            let col = (glo - lo) as usize + i;
            line[col] = if p.minimal_depth() >= j { '|' } else { '-' };
        }
        let _ = writeln!(out, "{j:>label_w$} {}", line.iter().collect::<String>().trim_end());
    }
    let mut mark = vec![' '; width];
    mark[(-lo) as usize] = '^';
    let _ = writeln!(out, "{:>label_w$} {}", "", mark.iter().collect::<String>().trim_end());
    Ok(out)
}
