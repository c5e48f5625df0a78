//! JSON text form of a diagram. Level 0 (the root) is implicit.

use serde::{Deserialize, Serialize};

use crate::diagram::{Diagram, Vertex, ROOT};
use crate::error::{Error, Result};

#[derive(Serialize, Deserialize)]
struct DiagramDoc {
    depth: usize,
    levels: Vec<LevelDoc>,
}

#[derive(Serialize, Deserialize)]
struct LevelDoc {
    vertices: Vec<VertexDoc>,
}

#[derive(Serialize, Deserialize)]
struct VertexDoc {
    name: String,
    #[serde(rename = "in")]
    in_edges: Vec<String>,
}

pub fn to_json(d: &Diagram) -> String {
    let doc = DiagramDoc {
        depth: d.depth(),
        levels: (1..=d.depth())
            .map(|n| LevelDoc {
                vertices: d
                    .level(n)
                    .iter()
                    .map(|v| VertexDoc {
                        name: v.name.clone(),
                        in_edges: v.in_edges.iter().map(|&s| d.name(n - 1, s).to_string()).collect(),
                    })
                    .collect(),
            })
            .collect(),
    };
    serde_json::to_string_pretty(&doc).expect("diagram serializes")
}

// line/column of the first quoted occurrence of `needle` at or after byte `from`
fn locate_in(text: &str, needle: &str, from: usize) -> (usize, usize, usize) {
    let quoted = format!("\"{needle}\"");
    let at = text[from.min(text.len())..]
        .find(&quoted)
        .map(|i| i + from)
        .unwrap_or(0);
    let line = text[..at].matches('\n').count() + 1;
    let col = at - text[..at].rfind('\n').map(|i| i + 1).unwrap_or(0) + 1;
    (line, col, at)
}

pub fn from_json(text: &str) -> Result<Diagram> {
    let doc: DiagramDoc = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        column: e.column(),
        msg: e.to_string(),
    })?;
    if doc.depth != doc.levels.len() {
        let (line, column, _) = locate_in(text, "depth", 0);
        return Err(Error::Parse {
            line,
            column,
            msg: format!("depth {} but {} levels listed", doc.depth, doc.levels.len()),
        });
    }
    let mut prev: Vec<String> = vec![ROOT.to_string()];
    let mut cursor = 0;
    let mut levels = Vec::new();
    for (k, lvl) in doc.levels.iter().enumerate() {
        let n = k + 1;
        let mut verts = Vec::new();
        for v in &lvl.vertices {
            let (_, _, at) = locate_in(text, &v.name, cursor);
            cursor = at;
            let mut ins = Vec::new();
            for s in &v.in_edges {
                match prev.iter().position(|p| p == s) {
                    Some(i) => ins.push(i),
                    None => {
                        let (line, column, _) = locate_in(text, s, cursor);
                        return Err(Error::Parse {
                            line,
                            column,
                            msg: format!(
                                "vertex `{}` at level {n} lists `{s}`, which is not a level-{} vertex",
                                v.name,
                                n - 1
                            ),
                        });
                    }
                }
            }
            verts.push(Vertex::new(v.name.clone(), ins));
        }
        prev = lvl.vertices.iter().map(|v| v.name.clone()).collect();
        levels.push(verts);
    }
    Diagram::new(levels).map_err(|e| {
        let (line, column, _) = locate_in(text, "levels", 0);
        Error::Parse {
            line,
            column,
            msg: e.to_string(),
        }
    })
}
