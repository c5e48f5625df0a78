//! Constructors for the explicit diagram families, plus splitting and reordering.

use crate::diagram::{Diagram, FinitePath, Vertex};
use crate::error::{Error, Result};
use crate::pathspec::{PathSpec, SuffixRule, Track};

pub fn gj_name(j: usize, i: usize) -> String {
    format!("v{j}_{i}")
}

/// Morse component of a 1-based column: columns 2i and 2i+1 belong to MC(i).
pub fn mc_component(col: usize) -> Option<usize> {
    (col >= 2).then_some(col / 2)
}

fn root_level(names: &[String]) -> Vec<Vertex> {
    names.iter().map(|n| Vertex::new(n.clone(), vec![0])).collect()
}

/// In-edge order into v(n+1, t) (columns 1-based), before any reordering.
fn gj_in_edges(n: usize, t: usize) -> Vec<usize> {
    let mut ins: Vec<usize> = (0..2 * n).collect();
    if t % 2 == 1 && t >= 3 && (t - 1) / 2 < n {
        // into v(n+1, 2j+1) the sources v(n, 2j) and v(n, 2j+1) trade labels
        let j = (t - 1) / 2;
        ins.swap(2 * j - 1, 2 * j);
    }
    ins
}

pub fn gj(n: usize) -> Result<Diagram> {
    if n < 2 {
        return Err(Error::BadArgument("gj needs depth at least 2".into()));
    }
    let mut levels = vec![root_level(&[gj_name(1, 1), gj_name(1, 2)])];
    for j in 2..=n {
        levels.push(
            (1..=2 * j)
                .map(|t| Vertex::new(gj_name(j, t), gj_in_edges(j - 1, t)))
                .collect(),
        );
    }
    Diagram::new(levels)
}

/// gj with the in-edge order made left to right at v(j, 2i+1), j >= 4, even i < j-1.
pub fn dm2ww(n: usize) -> Result<Diagram> {
    if n < 5 {
        return Err(Error::BadArgument("dm2ww needs depth at least 5".into()));
    }
    let g = gj(n)?;
    let mut levels: Vec<Vec<Vertex>> = (1..=n).map(|j| g.level(j).to_vec()).collect();
    for j in 4..=n {
        for i in (2..j - 1).step_by(2) {
            levels[j - 1][2 * i].in_edges = (0..2 * (j - 1)).collect();
        }
    }
    Diagram::new(levels)
}

/// The pair down both sides of MC(k): minimal to level k, then
/// v(j, 2k) resp. v(j, 2k+1) for every j > k.
pub fn gj_mc_pair(k: usize) -> (PathSpec, PathSpec) {
    let prefix = vec![1; k + 1];
    let x = PathSpec::new(
        prefix.clone(),
        Some(&gj_name(k + 1, 2 * k)),
        SuffixRule::Track(Track::Column(2 * k)),
    );
    let y = PathSpec::new(
        prefix,
        Some(&gj_name(k + 1, 2 * k + 1)),
        SuffixRule::Track(Track::Column(2 * k + 1)),
    );
    (x, y)
}

/// Replaces (n, v) by two adjacent vertices holding its first t and remaining
/// in-edges; every downstream occurrence of v becomes the pair.
pub fn split_vertex(d: &Diagram, n: usize, v: usize, t: usize) -> Result<Diagram> {
    if n == 0 || n > d.depth() || v >= d.width(n) {
        return Err(Error::BadArgument(format!("no vertex {v} at level {n}")));
    }
    let deg = d.in_degree(n, v);
    if t == 0 || t >= deg {
        return Err(Error::BadArgument(format!("split point {t} outside 1..{deg}")));
    }
    let mut levels: Vec<Vec<Vertex>> = (1..=d.depth()).map(|j| d.level(j).to_vec()).collect();
    let old = levels[n - 1][v].clone();
    let first = Vertex::new(format!("{}'", old.name), old.in_edges[..t].to_vec());
    let second = Vertex::new(format!("{}''", old.name), old.in_edges[t..].to_vec());
    levels[n - 1].splice(v..=v, [first, second]);
    if n < d.depth() {
        for w in levels[n].iter_mut() {
            let mut ins = Vec::with_capacity(w.in_edges.len() + 1);
            for &s in &w.in_edges {
                match s.cmp(&v) {
                    std::cmp::Ordering::Less => ins.push(s),
                    std::cmp::Ordering::Equal => ins.extend([v, v + 1]),
                    std::cmp::Ordering::Greater => ins.push(s + 1),
                }
            }
            w.in_edges = ins;
        }
    }
    Diagram::new(levels)
}

/// Image of a path of `d` in `split_vertex(d, n, v, t)`.
pub fn split_path(d: &Diagram, n: usize, v: usize, t: usize, p: &FinitePath) -> FinitePath {
    let mut q = p.clone();
    if p.len() < n {
        return q;
    }
    let at = p.verts[n];
    let second = at == v && p.ords[n - 1] >= t;
    if at > v || second {
        q.verts[n] = at + 1;
    }
    if second {
        q.ords[n - 1] -= t;
    }
    if p.len() > n {
        let ins = d.in_edges(n + 1, p.verts[n + 1]);
        let o = p.ords[n];
        let before = ins[..o].iter().filter(|&&s| s == v).count();
        q.ords[n] = o + before + usize::from(at == v && second);
    }
    q
}

/// One split performed by `gj_modified`: (level, vertex name, t).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Split {
    pub level: usize,
    pub name: String,
    pub t: usize,
}

/// gj(N) with every left Morse vertex v(j, 2i), j >= 2, i < j, split so the
/// first part has the dimension of v(j-1, 1).
pub fn gj_modified_with_splits(n: usize) -> Result<(Diagram, Vec<Split>)> {
    if n < 3 {
        return Err(Error::BadArgument("gj_modified needs depth at least 3".into()));
    }
    let mut d = gj(n)?;
    let mut splits = Vec::new();
    for j in 2..=n {
        let target = d.dim(j - 1, d.find(j - 1, &gj_name(j - 1, 1)).unwrap());
        for i in 1..j {
            let name = gj_name(j, 2 * i);
            let v = d.find(j, &name).unwrap();
            let mut acc = 0;
            let mut t = None;
            for (o, &s) in d.in_edges(j, v).iter().enumerate() {
                acc += d.dim(j - 1, s);
                if acc == target {
                    t = Some(o + 1);
                    break;
                }
                if acc > target {
                    break;
                }
            }
            let t = t.ok_or_else(|| Error::Invalid(format!("no in-edge boundary splits `{name}`")))?;
            d = split_vertex(&d, j, v, t)?;
            splits.push(Split { level: j, name, t });
        }
    }
    Ok((d, splits))
}

pub fn gj_modified(n: usize) -> Result<Diagram> {
    Ok(gj_modified_with_splits(n)?.0)
}

/// Carries a gj(N) path into gj_modified(N), split by split.
pub fn gj_modified_path(n: usize, p: &FinitePath) -> Result<FinitePath> {
    let (_, splits) = gj_modified_with_splits(n)?;
    let mut d = gj(n)?;
    let mut q = p.clone();
    for s in splits {
        let v = d.find(s.level, &s.name).unwrap();
        q = split_path(&d, s.level, v, s.t, &q);
        d = split_vertex(&d, s.level, v, s.t)?;
    }
    Ok(q)
}

pub fn odometer_single(radices: &[usize]) -> Result<Diagram> {
    if radices.is_empty() || radices.iter().any(|&q| q < 2) {
        return Err(Error::BadArgument("radices must be at least 2".into()));
    }
    Diagram::new(
        radices
            .iter()
            .enumerate()
            .map(|(n, &q)| vec![Vertex::new(format!("o{}", n + 1), vec![0; q])])
            .collect(),
    )
}

/// Complete connections; the edge from v(n, i) always has ordinal i.
pub fn odometer_suo(counts: &[usize]) -> Result<Diagram> {
    if counts.is_empty() || counts.iter().any(|&q| q < 2) {
        return Err(Error::BadArgument("vertex counts must be at least 2".into()));
    }
    let mut levels = Vec::new();
    let mut prev = 1;
    for (n, &q) in counts.iter().enumerate() {
        levels.push(
            (1..=q)
                .map(|i| Vertex::new(gj_name(n + 1, i), (0..prev).collect()))
                .collect(),
        );
        prev = q;
    }
    Diagram::new(levels)
}

/// The suo pair for depth k: minimal into v(k+1, 1), and minimal to v(k, 1)
/// then into v(k+1, 2); both continue through column 2 afterwards.
pub fn suo_pair(k: usize) -> (PathSpec, PathSpec) {
    let x = PathSpec::new(vec![1; k + 1], Some(&gj_name(k + 1, 1)), SuffixRule::Track(Track::Column(2)));
    let y = PathSpec::new(vec![1; k + 1], Some(&gj_name(k + 1, 2)), SuffixRule::Track(Track::Column(2)));
    (x, y)
}

/// Cycles `pattern` out to length n.
pub fn cycle(pattern: &[usize], n: usize) -> Vec<usize> {
    pattern.iter().copied().cycle().take(n).collect()
}

fn fig1_pair_names(t: usize, level: usize) -> (String, String) {
    match t {
        0 => ("u".into(), "v".into()),
        1 => ("a".into(), "b".into()),
        2 => ("A".into(), "B".into()),
        3 => ("C".into(), "D".into()),
        _ => (format!("P{level}"), format!("Q{level}")),
    }
}

/// Period-two family: two-vertex levels X, Y at odd levels, and the four
/// vertices X^2, X^3, XYY, YYX between them.
pub fn fig1_family(n: usize) -> Result<Diagram> {
    if n < 3 {
        return Err(Error::BadArgument("fig1 needs depth at least 3".into()));
    }
    let (x, y) = fig1_pair_names(0, 1);
    let mut levels = vec![root_level(&[x, y])];
    for level in 2..=n {
        if level % 2 == 0 {
            let (x, y) = fig1_pair_names((level - 2) / 2, level - 1);
            levels.push(vec![
                Vertex::new(format!("{x}^2"), vec![0, 0]),
                Vertex::new(format!("{x}^3"), vec![0, 0, 0]),
                Vertex::new(format!("{x}{y}{y}"), vec![0, 1, 1]),
                Vertex::new(format!("{y}{y}{x}"), vec![1, 1, 0]),
            ]);
        } else {
            let (x, y) = fig1_pair_names((level - 1) / 2, level);
            // first = (X^2)(XYY)(X^3), second = (X^3)(YYX)(X^2)
            levels.push(vec![Vertex::new(x, vec![0, 2, 1]), Vertex::new(y, vec![1, 3, 0])]);
        }
    }
    Diagram::new(levels)
}

/// The two marked paths: minimal into b at level 3, then ordinals 2,2,1,2,1,...
/// through the first-branch vertices (x) and second-branch vertices (y).
pub fn fig1_marked_pair() -> (PathSpec, PathSpec) {
    let tail = SuffixRule::Periodic {
        word: vec![1, 2],
        origin: Some(5),
    };
    let x = PathSpec::new(vec![1, 1, 1, 2, 2], Some("A"), tail.clone());
    let y = PathSpec::new(vec![1, 1, 1, 2, 2], Some("B"), tail);
    (x, y)
}

pub const KITE_DEPTH: usize = 10;

/// The nondeterministic kite with a single-vertex tail down to `KITE_DEPTH`.
pub fn kite_nondet() -> Result<Diagram> {
    kite_nondet_depth(KITE_DEPTH)
}

pub fn kite_nondet_depth(n: usize) -> Result<Diagram> {
    if n < 4 {
        return Err(Error::BadArgument("the kite needs depth at least 4".into()));
    }
    let mut levels = vec![
        root_level(&["a".into(), "b".into(), "c".into()]),
        vec![
            Vertex::new("u", vec![0, 1]),
            Vertex::new("v", vec![0, 1]),
            Vertex::new("w", vec![1, 2]),
        ],
        vec![Vertex::new("A", vec![0, 2]), Vertex::new("B", vec![2, 1])],
        vec![Vertex::new("AB", vec![0, 1])],
    ];
    for l in 5..=n {
        levels.push(vec![Vertex::new(format!("t{l}"), vec![0, 0])]);
    }
    Diagram::new(levels)
}

/// Marked kite paths x = 0auA.., x' = 0avB.., x'' = 0bwB.., each minimal below AB.
pub fn kite_marked() -> [PathSpec; 3] {
    [
        PathSpec::new(vec![1, 1, 1, 1], Some("AB"), SuffixRule::Min),
        PathSpec::new(vec![1, 1, 2, 2], Some("AB"), SuffixRule::Min),
        PathSpec::new(vec![1, 1, 1, 2], Some("AB"), SuffixRule::Min),
    ]
}

/// Deterministic diagram with the given nonincreasing widths, then a
/// single-vertex tail with two parallel edges per level.
pub fn kite_deterministic(profile: &[usize], n: usize) -> Result<Diagram> {
    if profile.is_empty() || profile.contains(&0) {
        return Err(Error::BadArgument("width profile must be nonempty and positive".into()));
    }
    if let Some(w) = profile.windows(2).position(|w| w[1] > w[0]) {
        return Err(Error::BadArgument(format!(
            "width increases from level {} to {}: some label 1 would repeat",
            w + 1,
            w + 2
        )));
    }
    if n < profile.len() {
        return Err(Error::BadArgument("depth shorter than the profile".into()));
    }
    let name = |l: usize, i: usize| format!("k{l}_{i}");
    let mut levels = vec![(1..=profile[0]).map(|i| Vertex::new(name(1, i), vec![0])).collect::<Vec<_>>()];
    let mut prev = profile[0];
    for l in 2..=n {
        let w = profile.get(l - 1).copied().unwrap_or(1);
        let lvl = if prev == 1 && w == 1 {
            vec![Vertex::new(name(l, 1), vec![0, 0])]
        } else {
            // target t lists the sources cyclically from t, so each source's labels differ
            (0..w)
                .map(|t| Vertex::new(name(l, t + 1), (0..prev).map(|s| (t + s) % prev).collect()))
                .collect()
        };
        levels.push(lvl);
        prev = w;
    }
    Diagram::new(levels)
}
