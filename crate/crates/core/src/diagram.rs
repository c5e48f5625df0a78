//! Ordered Bratteli diagrams truncated at a finite depth.

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

pub const ROOT: &str = "root";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vertex {
    pub name: String,
    /// Source indices at the previous level; position p carries ordinal p+1.
    pub in_edges: Vec<usize>,
}

impl Vertex {
    pub fn new(name: impl Into<String>, in_edges: Vec<usize>) -> Self {
        Vertex {
            name: name.into(),
            in_edges,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Diagram {
    levels: Vec<Vec<Vertex>>,
    dims: Vec<Vec<u64>>,
    // edge_off[n][v][o] = sum of source dimensions over ordinals before o
    edge_off: Vec<Vec<Vec<u64>>>,
    // letter offsets into A_n: off[n][v] = sum of dims of vertices before v
    letter_off: Vec<Vec<u64>>,
    index: Vec<HashMap<String, usize>>,
}

impl PartialEq for Diagram {
    fn eq(&self, other: &Self) -> bool {
        self.levels == other.levels
    }
}
impl Eq for Diagram {}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Extremal {
    Min,
    Max,
}

impl Diagram {
    /// Builds a diagram from levels 1..=N; the root is added implicitly.
    pub fn new(levels: Vec<Vec<Vertex>>) -> Result<Diagram> {
        if levels.is_empty() {
            return Err(Error::Invalid("a diagram needs at least one level".into()));
        }
        let mut all = Vec::with_capacity(levels.len() + 1);
        all.push(vec![Vertex::new(ROOT, vec![])]);
        all.extend(levels);
        let mut index = Vec::with_capacity(all.len());
        for (n, lvl) in all.iter().enumerate() {
            if lvl.is_empty() {
                return Err(Error::Invalid(format!("level {n} has no vertices")));
            }
            let mut map = HashMap::new();
            for (i, v) in lvl.iter().enumerate() {
                if map.insert(v.name.clone(), i).is_some() {
                    return Err(Error::Invalid(format!(
                        "duplicate vertex name `{}` at level {n}",
                        v.name
                    )));
                }
                if n > 0 {
                    let w = all[n - 1].len();
                    if let Some(&s) = v.in_edges.iter().find(|&&s| s >= w) {
                        return Err(Error::Invalid(format!(
                            "vertex `{}` at level {n} references source {s} but level {} has {w} vertices",
                            v.name,
                            n - 1
                        )));
                    }
                }
            }
            index.push(map);
        }
        let mut dims: Vec<Vec<u64>> = vec![vec![1]];
        let mut edge_off = vec![vec![vec![]]];
        for n in 1..all.len() {
            let mut dn = Vec::with_capacity(all[n].len());
            let mut offs = Vec::with_capacity(all[n].len());
            for v in &all[n] {
                let mut acc: u64 = 0;
                let mut off = Vec::with_capacity(v.in_edges.len() + 1);
                for &s in &v.in_edges {
                    off.push(acc);
                    acc = acc
                        .checked_add(dims[n - 1][s])
                        .ok_or_else(|| Error::Invalid("dimension overflow".into()))?;
                }
                off.push(acc);
                dn.push(acc);
                offs.push(off);
            }
            dims.push(dn);
            edge_off.push(offs);
        }
        let mut letter_off = Vec::with_capacity(all.len());
        for dn in &dims {
            let mut acc = 0u64;
            let mut o = Vec::with_capacity(dn.len());
            for &x in dn {
                o.push(acc);
                acc = acc.saturating_add(x);
            }
            letter_off.push(o);
        }
        Ok(Diagram {
            levels: all,
            dims,
            edge_off,
            letter_off,
            index,
        })
    }

    /// Builds from vertex names: each level is a list of (name, source names).
    pub fn from_names(levels: &[Vec<(&str, Vec<&str>)>]) -> Result<Diagram> {
        let mut out: Vec<Vec<Vertex>> = Vec::new();
        let mut prev: HashMap<&str, usize> = HashMap::from([(ROOT, 0)]);
        for (n, lvl) in levels.iter().enumerate() {
            let mut verts = Vec::new();
            for (name, srcs) in lvl {
                let mut ins = Vec::new();
                for s in srcs {
                    let i = prev.get(s).ok_or_else(|| Error::Invalid(format!(
                        "vertex `{name}` at level {} references unknown source `{s}`",
                        n + 1
                    )))?;
                    ins.push(*i);
                }
                verts.push(Vertex::new(*name, ins));
            }
            prev = lvl.iter().enumerate().map(|(i, (nm, _))| (*nm, i)).collect();
            out.push(verts);
        }
        Diagram::new(out)
    }

    pub fn depth(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn width(&self, n: usize) -> usize {
        self.levels[n].len()
    }

    pub fn widths(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.len()).collect()
    }

    pub fn level(&self, n: usize) -> &[Vertex] {
        &self.levels[n]
    }

    pub fn vertex(&self, n: usize, v: usize) -> &Vertex {
        &self.levels[n][v]
    }

    pub fn name(&self, n: usize, v: usize) -> &str {
        &self.levels[n][v].name
    }

    pub fn in_edges(&self, n: usize, v: usize) -> &[usize] {
        &self.levels[n][v].in_edges
    }

    pub fn in_degree(&self, n: usize, v: usize) -> usize {
        self.levels[n][v].in_edges.len()
    }

    pub fn find(&self, n: usize, name: &str) -> Option<usize> {
        self.index.get(n)?.get(name).copied()
    }

    /// Looks a vertex up by `name` (first level holding it) or `level:name`.
    pub fn locate(&self, name: &str) -> Result<(usize, usize)> {
        if let Some((l, nm)) = name.split_once(':') {
            if let Ok(n) = l.parse::<usize>() {
                return self
                    .find(n, nm)
                    .map(|v| (n, v))
                    .ok_or_else(|| Error::UnknownVertex(name.to_string()));
            }
        }
        (0..self.levels.len())
            .find_map(|n| self.find(n, name).map(|v| (n, v)))
            .ok_or_else(|| Error::UnknownVertex(name.to_string()))
    }

    pub fn dim(&self, n: usize, v: usize) -> u64 {
        self.dims[n][v]
    }

    /// Number of paths from the root into the ordinal-o edge's source, summed over earlier ordinals.
    pub fn edge_offset(&self, n: usize, v: usize, o: usize) -> u64 {
        self.edge_off[n][v][o]
    }

    pub fn letter_offset(&self, n: usize, v: usize) -> u64 {
        self.letter_off[n][v]
    }

    /// Total number of root-to-level-n paths (|A_n|).
    pub fn alphabet_size(&self, n: usize) -> u64 {
        self.dims[n].iter().sum()
    }

    /// Outgoing edges of (n, s) as (target, ordinal index) pairs, ordered by target.
    pub fn out_edges(&self, n: usize, s: usize) -> Vec<(usize, usize)> {
        if n >= self.depth() {
            return vec![];
        }
        let mut out = Vec::new();
        for (t, v) in self.levels[n + 1].iter().enumerate() {
            for (o, &src) in v.in_edges.iter().enumerate() {
                if src == s {
                    out.push((t, o));
                }
            }
        }
        out
    }

    /// Copy of the first `n` levels.
    pub fn truncated(&self, n: usize) -> Result<Diagram> {
        if n == 0 || n > self.depth() {
            return Err(Error::LevelOutOfRange(n));
        }
        Diagram::new(self.levels[1..=n].to_vec())
    }
}

/// A path from the root: `verts[i]` is the vertex at level i, `ords[i]` the
/// 0-based ordinal of the edge into `verts[i + 1]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct FinitePath {
    pub verts: Vec<usize>,
    pub ords: Vec<usize>,
}

impl FinitePath {
    pub fn root() -> Self {
        FinitePath {
            verts: vec![0],
            ords: vec![],
        }
    }

    pub fn len(&self) -> usize {
        self.ords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ords.is_empty()
    }

    pub fn end(&self) -> usize {
        *self.verts.last().unwrap()
    }

    pub fn vertex_at(&self, n: usize) -> usize {
        self.verts[n]
    }

    pub fn truncate(&self, n: usize) -> FinitePath {
        FinitePath {
            verts: self.verts[..=n].to_vec(),
            ords: self.ords[..n].to_vec(),
        }
    }

    pub fn push(&mut self, target: usize, ord: usize) {
        self.verts.push(target);
        self.ords.push(ord);
    }

    /// Checks that consecutive edges compose inside `d`.
    pub fn check(&self, d: &Diagram) -> Result<()> {
        if self.verts.len() != self.ords.len() + 1 || self.verts[0] != 0 {
            return Err(Error::Invalid("malformed path".into()));
        }
        if self.len() > d.depth() {
            return Err(Error::LevelOutOfRange(self.len()));
        }
        for n in 1..=self.len() {
            let t = self.verts[n];
            if t >= d.width(n) {
                return Err(Error::Invalid(format!("vertex index {t} out of range at level {n}")));
            }
            let ins = d.in_edges(n, t);
            match ins.get(self.ords[n - 1]) {
                Some(&s) if s == self.verts[n - 1] => {}
                _ => {
                    return Err(Error::Invalid(format!(
                        "edge {} into `{}` does not leave the previous vertex",
                        self.ords[n - 1] + 1,
                        d.name(n, t)
                    )))
                }
            }
        }
        Ok(())
    }

    /// Whether every edge up to level n is minimal (or maximal).
    pub fn is_extremal_to(&self, d: &Diagram, n: usize, which: Extremal) -> bool {
        (1..=n).all(|i| match which {
            Extremal::Min => self.ords[i - 1] == 0,
            Extremal::Max => self.ords[i - 1] + 1 == d.in_degree(i, self.verts[i]),
        })
    }

    /// Largest n such that the path is minimal into level n.
    pub fn minimal_depth(&self) -> usize {
        self.ords.iter().take_while(|&&o| o == 0).count()
    }

    /// Number of paths into `verts[n]` preceding this one's level-n prefix.
    pub fn dot(&self, d: &Diagram, n: usize) -> u64 {
        (1..=n)
            .map(|i| d.edge_offset(i, self.verts[i], self.ords[i - 1]))
            .sum()
    }

    /// Index of the level-n truncation inside the alphabet A_n.
    pub fn letter(&self, d: &Diagram, n: usize) -> u64 {
        d.letter_offset(n, self.verts[n]) + self.dot(d, n)
    }

    /// Alphabet indices for levels 0..=k in one pass.
    pub fn letters_upto(&self, d: &Diagram, k: usize) -> Vec<u64> {
        let mut out = Vec::with_capacity(k + 1);
        let mut dot = 0u64;
        out.push(0);
        for i in 1..=k {
            dot += d.edge_offset(i, self.verts[i], self.ords[i - 1]);
            out.push(d.letter_offset(i, self.verts[i]) + dot);
        }
        out
    }

    pub fn ordinals_1based(&self) -> Vec<usize> {
        self.ords.iter().map(|o| o + 1).collect()
    }

    pub fn display<'a>(&'a self, d: &'a Diagram) -> PathDisplay<'a> {
        PathDisplay { p: self, d }
    }
}

pub struct PathDisplay<'a> {
    p: &'a FinitePath,
    d: &'a Diagram,
}

impl fmt::Display for PathDisplay<'_> {
    /// Letter name: vertex names joined with '.', with `#o` when parallel edges need it.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.p.is_empty() {
            return write!(f, "{ROOT}");
        }
        for n in 1..=self.p.len() {
            if n > 1 {
                write!(f, ".")?;
            }
            let t = self.p.verts[n];
            write!(f, "{}", self.d.name(n, t))?;
            let s = self.p.verts[n - 1];
            let parallel = self.d.in_edges(n, t).iter().filter(|&&x| x == s).count();
            if parallel > 1 {
                write!(f, "#{}", self.p.ords[n - 1] + 1)?;
            }
        }
        Ok(())
    }
}

/// All root-to-v paths in successor order (deepest differing edge decides).
pub fn paths_into(d: &Diagram, n: usize, v: usize) -> Vec<FinitePath> {
    if n == 0 {
        return vec![FinitePath::root()];
    }
    let mut out = Vec::new();
    for (o, &s) in d.in_edges(n, v).iter().enumerate() {
        for mut p in paths_into(d, n - 1, s) {
            p.push(v, o);
            out.push(p);
        }
    }
    out
}

pub fn dimension(d: &Diagram, n: usize, v: usize) -> u64 {
    d.dim(n, v)
}

pub fn extremal_path_into(d: &Diagram, n: usize, v: usize, which: Extremal) -> FinitePath {
    let mut verts = vec![0; n + 1];
    let mut ords = vec![0; n];
    let mut cur = v;
    for i in (1..=n).rev() {
        verts[i] = cur;
        let o = match which {
            Extremal::Min => 0,
            Extremal::Max => d.in_degree(i, cur) - 1,
        };
        ords[i - 1] = o;
        cur = d.in_edges(i, cur)[o];
    }
    FinitePath { verts, ords }
}

/// Sources at level `from` of the ordered level-`from`-to-v segments.
pub fn vertex_coding(d: &Diagram, from: usize, n: usize, v: usize) -> Vec<usize> {
    if n == from {
        return vec![v];
    }
    let mut out = Vec::new();
    for &s in d.in_edges(n, v) {
        out.extend(vertex_coding(d, from, n - 1, s));
    }
    out
}

/// Number of level-`from`-to-(n, v) segments for every vertex at level n.
fn segment_counts(d: &Diagram, from: usize, to: usize) -> Vec<Vec<u64>> {
    let mut c: Vec<Vec<u64>> = vec![vec![]; to + 1];
    c[from] = vec![1; d.width(from)];
    for n in from + 1..=to {
        c[n] = (0..d.width(n))
            .map(|v| d.in_edges(n, v).iter().map(|&s| c[n - 1][s]).sum())
            .collect();
    }
    c
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub properly_ordered_at_horizon: bool,
    pub simplicity_evidence: bool,
    pub width_profile: Vec<usize>,
    /// Levels of a telescoping, starting at 1, whose consecutive connection matrices are positive.
    pub simplicity_levels: Vec<usize>,
    pub violations: Vec<String>,
}

/// Vertices at level 1 reached by following `which` edges up from every level-N vertex.
fn extremal_roots(d: &Diagram, which: Extremal) -> Vec<usize> {
    let n = d.depth();
    let mut set: Vec<usize> = (0..d.width(n)).collect();
    for i in (2..=n).rev() {
        let mut next: Vec<usize> = set
            .iter()
            .filter(|&&v| d.in_degree(i, v) > 0)
            .map(|&v| {
                let ins = d.in_edges(i, v);
                match which {
                    Extremal::Min => ins[0],
                    Extremal::Max => ins[ins.len() - 1],
                }
            })
            .collect();
        next.sort_unstable();
        next.dedup();
        set = next;
    }
    set
}

// every level-`from` vertex reaches every level-`to` vertex
fn full_connection(d: &Diagram, from: usize, to: usize) -> bool {
    (0..d.width(from)).all(|s| {
        let mut reach = vec![false; d.width(from)];
        reach[s] = true;
        for n in from + 1..=to {
            reach = (0..d.width(n))
                .map(|v| d.in_edges(n, v).iter().any(|&x| reach[x]))
                .collect();
        }
        reach.iter().all(|&r| r)
    })
}

pub fn validate(d: &Diagram) -> ValidationReport {
    let n = d.depth();
    let mut violations = Vec::new();
    for i in 1..=n {
        for v in 0..d.width(i) {
            if d.in_degree(i, v) == 0 {
                violations.push(format!("vertex `{}` at level {i} has no in-edges", d.name(i, v)));
            }
        }
    }
    for i in 0..n {
        let mut used = vec![false; d.width(i)];
        for v in d.level(i + 1) {
            for &s in &v.in_edges {
                used[s] = true;
            }
        }
        for (s, u) in used.iter().enumerate() {
            if !u {
                violations.push(format!("vertex `{}` at level {i} is the source of no edge", d.name(i, s)));
            }
        }
    }
    let structural = violations.is_empty();
    let mut proper = structural;
    if structural {
        for which in [Extremal::Min, Extremal::Max] {
            let roots = extremal_roots(d, which);
            if roots.len() != 1 {
                proper = false;
                let names: Vec<&str> = roots.iter().map(|&v| d.name(1, v)).collect();
                violations.push(format!(
                    "{} paths into level {n} do not share their first edge (level-1 vertices {})",
                    if which == Extremal::Min { "minimal" } else { "maximal" },
                    names.join(", ")
                ));
            }
        }
    }
    let mut simplicity_levels = vec![];
    let mut simple = false;
    if structural && n >= 1 {
        simplicity_levels.push(1);
        let mut from = 1;
        let mut to = 2;
        while to <= n {
            if full_connection(d, from, to) {
                simplicity_levels.push(to);
                from = to;
            }
            to += 1;
        }
        simple = simplicity_levels.len() >= 2 || (n == 1 && d.width(1) == 1);
        if !simple {
            violations.push("no window of levels starting at 1 has a positive connection matrix".into());
        }
    }
    ValidationReport {
        properly_ordered_at_horizon: proper,
        simplicity_evidence: simple,
        width_profile: d.widths(),
        simplicity_levels,
        violations,
    }
}

fn check_levels(d: &Diagram, levels: &[usize]) -> Result<()> {
    if levels.first() != Some(&0) {
        return Err(Error::BadArgument("telescoping levels must start at 0".into()));
    }
    if levels.len() < 2 {
        return Err(Error::BadArgument("telescoping needs at least one level after 0".into()));
    }
    for w in levels.windows(2) {
        if w[1] <= w[0] {
            return Err(Error::BadArgument("telescoping levels must increase strictly".into()));
        }
    }
    let last = *levels.last().unwrap();
    if last > d.depth() {
        return Err(Error::LevelOutOfRange(last));
    }
    Ok(())
}

/// Collapses `d` onto the listed levels, composing edges and keeping path order.
pub fn telescope(d: &Diagram, levels: &[usize]) -> Result<Diagram> {
    check_levels(d, levels)?;
    let mut out = Vec::new();
    for w in levels.windows(2) {
        let (a, b) = (w[0], w[1]);
        let lvl = (0..d.width(b))
            .map(|v| Vertex::new(d.name(b, v), vertex_coding(d, a, b, v)))
            .collect();
        out.push(lvl);
    }
    Diagram::new(out)
}

/// Image of a path under telescoping; the result reaches the deepest listed level within p.
pub fn telescope_path(d: &Diagram, levels: &[usize], p: &FinitePath) -> Result<FinitePath> {
    check_levels(d, levels)?;
    let mut q = FinitePath::root();
    for w in levels.windows(2) {
        let (a, b) = (w[0], w[1]);
        if b > p.len() {
            break;
        }
        let counts = segment_counts(d, a, b);
        let mut idx = 0u64;
        for i in a + 1..=b {
            let v = p.verts[i];
            for &s in &d.in_edges(i, v)[..p.ords[i - 1]] {
                idx += counts[i - 1][s];
            }
        }
        q.push(p.verts[b], idx as usize);
    }
    Ok(q)
}

/// Inverse of `telescope_path`.
pub fn lift_path(d: &Diagram, levels: &[usize], q: &FinitePath) -> Result<FinitePath> {
    check_levels(d, levels)?;
    if q.len() >= levels.len() {
        return Err(Error::LevelOutOfRange(q.len()));
    }
    let top = levels[q.len()];
    let mut verts = vec![0usize; top + 1];
    let mut ords = vec![0usize; top];
    for l in (1..=q.len()).rev() {
        let (a, b) = (levels[l - 1], levels[l]);
        let counts = segment_counts(d, a, b);
        let mut idx = q.ords[l - 1] as u64;
        let mut v = q.verts[l];
        for i in (a + 1..=b).rev() {
            verts[i] = v;
            let mut chosen = None;
            for (o, &s) in d.in_edges(i, v).iter().enumerate() {
                let c = counts[i - 1][s];
                if idx < c {
                    chosen = Some((o, s));
                    break;
                }
                idx -= c;
            }
            let (o, s) = chosen.ok_or_else(|| Error::Invalid("ordinal out of range in lift".into()))?;
            ords[i - 1] = o;
            v = s;
        }
        if v != q.verts[l - 1] {
            return Err(Error::Invalid("lifted segment does not meet the previous vertex".into()));
        }
    }
    Ok(FinitePath { verts, ords })
}
