//! Basic blocks, codings by vertices and block-level tests.

use std::fmt;

use serde::Serialize;

use crate::diagram::{vertex_coding, Diagram, FinitePath};
use crate::error::{Error, Result};
use crate::pathspec::PathSpec;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Alphabet {
    /// Root-to-level-k paths, indexed by `FinitePath::letter`.
    Paths(usize),
    /// Vertex indices at level j.
    Vertices(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Block {
    pub alphabet: Alphabet,
    pub letters: Vec<u64>,
}

impl Block {
    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn names(&self, d: &Diagram) -> Vec<String> {
        self.letters
            .iter()
            .map(|&l| match self.alphabet {
                Alphabet::Vertices(j) => d.name(j, l as usize).to_string(),
                Alphabet::Paths(k) => decode_letter(d, k, l).display(d).to_string(),
            })
            .collect()
    }

    pub fn display<'a>(&'a self, d: &'a Diagram) -> BlockDisplay<'a> {
        BlockDisplay { b: self, d }
    }
}

pub struct BlockDisplay<'a> {
    b: &'a Block,
    d: &'a Diagram,
}

impl fmt::Display for BlockDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.b.names(self.d).join(" "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DottedBlock {
    pub block: Block,
    pub dot: u64,
}

/// Path with the given index in A_k.
pub fn decode_letter(d: &Diagram, k: usize, id: u64) -> FinitePath {
    let mut v = (0..d.width(k))
        .rev()
        .find(|&v| d.letter_offset(k, v) <= id)
        .unwrap_or(0);
    let mut dot = id - d.letter_offset(k, v);
    let mut verts = vec![0; k + 1];
    let mut ords = vec![0; k];
    for n in (1..=k).rev() {
        verts[n] = v;
        let deg = d.in_degree(n, v);
        let o = (0..deg).rev().find(|&o| d.edge_offset(n, v, o) <= dot).unwrap_or(0);
        dot -= d.edge_offset(n, v, o);
        ords[n - 1] = o;
        v = d.in_edges(n, v)[o];
    }
    FinitePath { verts, ords }
}

fn check_level(d: &Diagram, n: usize, v: usize) -> Result<()> {
    if n > d.depth() {
        return Err(Error::LevelOutOfRange(n));
    }
    if v >= d.width(n) {
        return Err(Error::BadArgument(format!("no vertex {v} at level {n}")));
    }
    Ok(())
}

/// B_k(v) for v at level n > k.
pub fn basic_block(d: &Diagram, n: usize, v: usize, k: usize) -> Result<Block> {
    check_level(d, n, v)?;
    if k >= n {
        return Err(Error::BadArgument(format!("k={k} must be below the vertex level {n}")));
    }
    let mut letters = Vec::with_capacity(d.dim(n, v) as usize);
    for u in vertex_coding(d, k, n, v) {
        let off = d.letter_offset(k, u);
        letters.extend(off..off + d.dim(k, u));
    }
    Ok(Block {
        alphabet: Alphabet::Paths(k),
        letters,
    })
}

/// C_j(w) for w at level n > j.
pub fn coding_by_vertices(d: &Diagram, n: usize, w: usize, j: usize) -> Result<Block> {
    check_level(d, n, w)?;
    if j >= n {
        return Err(Error::BadArgument(format!("j={j} must be below the vertex level {n}")));
    }
    Ok(Block {
        alphabet: Alphabet::Vertices(j),
        letters: vertex_coding(d, j, n, w).into_iter().map(|u| u as u64).collect(),
    })
}

/// Letterwise truncation A_k -> A_i.
pub fn factor_block(d: &Diagram, b: &Block, i: usize) -> Result<Block> {
    let k = match b.alphabet {
        Alphabet::Paths(k) => k,
        Alphabet::Vertices(_) => return Err(Error::BadArgument("factor map acts on path blocks".into())),
    };
    if i > k {
        return Err(Error::BadArgument(format!("cannot factor A_{k} onto A_{i}")));
    }
    let letters = b
        .letters
        .iter()
        .map(|&l| decode_letter(d, k, l).letter(d, i))
        .collect();
    Ok(Block {
        alphabet: Alphabet::Paths(i),
        letters,
    })
}

pub fn dotted_basic_block(x: &PathSpec, n: usize, k: usize, d: &Diagram) -> Result<DottedBlock> {
    let p = x.resolve(d, n)?;
    let block = basic_block(d, n, p.end(), k)?;
    Ok(DottedBlock { block, dot: p.dot(d, n) })
}

/// Smallest p such that w is a power of its length-p prefix.
pub fn primitive_root_len<T: PartialEq>(w: &[T]) -> usize {
    let n = w.len();
    if n == 0 {
        return 0;
    }
    let pi = prefix_function(w);
    let p = n - pi[n - 1];
    if n % p == 0 {
        p
    } else {
        n
    }
}

/// Knuth-Morris-Pratt failure function.
pub fn prefix_function<T: PartialEq>(w: &[T]) -> Vec<usize> {
    let mut pi = vec![0; w.len()];
    for i in 1..w.len() {
        let mut k = pi[i - 1];
        while k > 0 && w[i] != w[k] {
            k = pi[k - 1];
        }
        if w[i] == w[k] {
            k += 1;
        }
        pi[i] = k;
    }
    pi
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UniformOrder {
    /// Common repeating block, coded by level-(n-1) vertices.
    pub period: Block,
    /// Exponent of the period at each level-n vertex.
    pub powers: Vec<usize>,
}

/// Whether every (n-1)-basic block at level n is a power of one block.
pub fn uniform_order_test(d: &Diagram, n: usize) -> Result<Option<UniformOrder>> {
    if n == 0 || n > d.depth() {
        return Err(Error::LevelOutOfRange(n));
    }
    let codings: Vec<Vec<usize>> = (0..d.width(n)).map(|v| d.in_edges(n, v).to_vec()).collect();
    let root_len = primitive_root_len(&codings[0]);
    let root = &codings[0][..root_len];
    let mut powers = Vec::new();
    for c in &codings {
        if c.len() % root_len != 0 || c.chunks(root_len).any(|ch| ch != root) {
            return Ok(None);
        }
        powers.push(c.len() / root_len);
    }
    Ok(Some(UniformOrder {
        period: Block {
            alphabet: Alphabet::Vertices(n - 1),
            letters: root.iter().map(|&u| u as u64).collect(),
        },
        powers,
    }))
}

/// Equal k-basic blocks at two vertices of level n. Basic blocks expand the
/// level-k codings by disjoint letter ranges, so comparing codings suffices.
pub fn k_equivalent_vertices(d: &Diagram, n: usize, v: usize, w: usize, k: usize) -> Result<bool> {
    check_level(d, n, v)?;
    check_level(d, n, w)?;
    if k >= n {
        return Err(Error::BadArgument(format!("k={k} must be below level {n}")));
    }
    Ok(v == w || vertex_coding(d, k, n, v) == vertex_coding(d, k, n, w))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Determinism {
    pub deterministic: bool,
    /// Vertex name, level, repeated ordinal and two targets sharing it.
    pub first_violation: Option<String>,
}

/// Whether every vertex below the root has outgoing edges with pairwise distinct ordinals.
pub fn deterministic_test(d: &Diagram) -> Determinism {
    for n in 1..d.depth() {
        for s in 0..d.width(n) {
            let mut seen: Vec<(usize, usize)> = Vec::new();
            for (t, o) in d.out_edges(n, s) {
                if let Some(&(t0, _)) = seen.iter().find(|&&(_, o0)| o0 == o) {
                    return Determinism {
                        deterministic: false,
                        first_violation: Some(format!(
                            "`{}` at level {n} has two outgoing edges labeled {}, into `{}` and `{}`",
                            d.name(n, s),
                            o + 1,
                            d.name(n + 1, t0),
                            d.name(n + 1, t)
                        )),
                    };
                }
                seen.push((t, o));
            }
        }
    }
    Determinism {
        deterministic: true,
        first_violation: None,
    }
}
