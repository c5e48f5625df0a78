//! Vershik successor and predecessor, dot indices and orbit windows.

use serde::Serialize;

use crate::diagram::{Diagram, Extremal, FinitePath};
use crate::error::{Error, Result};
use crate::pathspec::{PathSpec, SuffixRule};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Direction {
    Succ,
    Pred,
}

/// One Vershik step on a finite path; the path's length is the horizon.
/// Returns the level whose edge changed.
pub fn step_path(d: &Diagram, p: &mut FinitePath, dir: Direction) -> Result<usize> {
    let n = p.len();
    let bumpable = |i: usize, p: &FinitePath| match dir {
        Direction::Succ => p.ords[i - 1] + 1 < d.in_degree(i, p.verts[i]),
        Direction::Pred => p.ords[i - 1] > 0,
    };
    let i = (1..=n).find(|&i| bumpable(i, p)).ok_or(Error::HorizonExceeded(n))?;
    match dir {
        Direction::Succ => p.ords[i - 1] += 1,
        Direction::Pred => p.ords[i - 1] -= 1,
    }
    let mut cur = d.in_edges(i, p.verts[i])[p.ords[i - 1]];
    for l in (1..i).rev() {
        p.verts[l] = cur;
        let o = match dir {
            Direction::Succ => 0,
            Direction::Pred => d.in_degree(l, cur) - 1,
        };
        p.ords[l - 1] = o;
        cur = d.in_edges(l, cur)[o];
    }
    Ok(i)
}

/// T or T^{-1} on a spec. The stepped prefix is pinned to its end vertex and
/// the suffix rule keeps its original phase.
pub fn step(x: &PathSpec, dir: Direction, horizon: usize, d: &Diagram) -> Result<PathSpec> {
    let mut p = x.resolve(d, horizon)?;
    let changed = step_path(d, &mut p, dir)?;
    let keep = changed.max(x.prefix.len());
    let suffix = match &x.suffix {
        SuffixRule::Periodic { word, origin } => SuffixRule::Periodic {
            word: word.clone(),
            origin: Some(origin.unwrap_or(x.prefix.len())),
        },
        s => s.clone(),
    };
    let q = p.truncate(keep);
    let mut out = PathSpec::from_path(d, &q, SuffixRule::Stop);
    out.suffix = suffix;
    Ok(out)
}

/// Number of paths into v_n(x) that precede x's level-n prefix.
pub fn dot_index(x: &PathSpec, n: usize, d: &Diagram) -> Result<u64> {
    Ok(x.resolve(d, n)?.dot(d, n))
}

/// Truncations to level k of T^m x for m in lo..=hi, computed by stepping.
pub fn k_coding_window(x: &PathSpec, k: usize, lo: i64, hi: i64, d: &Diagram) -> Result<Vec<FinitePath>> {
    let w = OrbitWindow::compute(x, lo, hi, d)?;
    Ok(w.entries.iter().map(|p| p.truncate(k)).collect())
}

/// Orbit segment T^lo x .. T^hi x, each entry resolved to the spec's horizon.
#[derive(Clone, Debug, Serialize)]
pub struct OrbitWindow {
    pub center: PathSpec,
    pub lo: i64,
    pub hi: i64,
    pub entries: Vec<FinitePath>,
}

impl OrbitWindow {
    pub fn compute(x: &PathSpec, lo: i64, hi: i64, d: &Diagram) -> Result<OrbitWindow> {
        if lo > 0 || hi < 0 {
            return Err(Error::BadArgument("window must contain 0".into()));
        }
        let r = x.resolve_full(d);
        let (got_lo, got_hi, entries) = orbit_range(d, &r.path, lo, hi);
        if got_lo != lo || got_hi != hi {
            return Err(r.failure.unwrap_or(Error::HorizonExceeded(r.path.len())));
        }
        Ok(OrbitWindow {
            center: x.clone(),
            lo,
            hi,
            entries,
        })
    }

    pub fn at(&self, m: i64) -> &FinitePath {
        &self.entries[(m - self.lo) as usize]
    }
}

/// The largest sub-window of lo..=hi around 0 reachable without leaving the
/// path's levels; returns (lo', hi', entries).
pub fn orbit_range(d: &Diagram, p: &FinitePath, lo: i64, hi: i64) -> (i64, i64, Vec<FinitePath>) {
    let mut back = Vec::new();
    let mut cur = p.clone();
    let mut got_lo = 0;
    while got_lo > lo {
        if step_path(d, &mut cur, Direction::Pred).is_err() {
            break;
        }
        got_lo -= 1;
        back.push(cur.clone());
    }
    back.reverse();
    let mut entries = back;
    entries.push(p.clone());
    let mut cur = p.clone();
    let mut got_hi = 0;
    while got_hi < hi {
        if step_path(d, &mut cur, Direction::Succ).is_err() {
            break;
        }
        got_hi += 1;
        entries.push(cur.clone());
    }
    (got_lo, got_hi, entries)
}

/// Whether the path is minimal (resp. maximal) into level n.
pub fn is_extremal_into(p: &FinitePath, d: &Diagram, n: usize, which: Extremal) -> bool {
    p.is_extremal_to(d, n, which)
}
