//! Bounded class evidence over candidate pairs, the two exact certificates,
//! telescoping checks and kite-shape checks.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::blocks::{deterministic_test, uniform_order_test};
use crate::diagram::{extremal_path_into, lift_path, telescope, telescope_path, vertex_coding, Diagram, Extremal, FinitePath};
use crate::dynamics::{step_path, Direction};
use crate::error::{Error, Result};
use crate::families::{gj_name, mc_component};
use crate::hcode::{self, block_starts, is_block_start, LevelHash, Placed};
use crate::pairs::{Cut, CutMethod, CutSlot, EvidenceKind, PairEvidence, Window};
use crate::pathspec::{PathSpec, SuffixRule, Track};

#[derive(Clone, Debug, Serialize)]
pub struct SearchParams {
    /// Largest depth k searched for.
    pub max_depth: usize,
    /// Candidates are resolved and compared down to this level.
    pub horizon: usize,
    /// Orbit window radius: times -window..=window.
    pub window: i64,
    pub prefix_bound: usize,
    pub rules: Vec<SuffixRule>,
    /// Shortest common window accepted as evidence of equal codings.
    pub min_window: u64,
    pub max_pairs: usize,
    /// Witnesses whose cuts are evaluated; the rest only count.
    pub max_cut_pairs: usize,
    /// Witness records kept per k (all are counted).
    pub keep_per_k: usize,
    /// The k subset used for the WW flag; all tested k when empty.
    pub ww_ks: Vec<usize>,
}

impl SearchParams {
    pub fn new(d: &Diagram, max_depth: usize, horizon: usize, window: i64) -> SearchParams {
        SearchParams {
            max_depth,
            horizon,
            window,
            prefix_bound: 4.min(horizon),
            rules: default_rules(d, horizon, max_depth),
            min_window: (window as u64).max(1),
            max_pairs: 20_000_000,
            max_cut_pairs: 200_000,
            keep_per_k: 16,
            ww_ks: vec![],
        }
    }

    pub fn check(&self, d: &Diagram) -> Result<()> {
        if self.horizon == 0 || self.horizon > d.depth() {
            return Err(Error::BadArgument(format!(
                "horizon {} outside 1..={}",
                self.horizon,
                d.depth()
            )));
        }
        if self.max_depth == 0 || self.max_depth >= self.horizon {
            return Err(Error::BadArgument("need 1 <= max depth < horizon".into()));
        }
        if self.window <= 0 || self.min_window == 0 || self.rules.is_empty() {
            return Err(Error::BadArgument("window, minimum window and rule set must be positive".into()));
        }
        if self.prefix_bound > self.horizon {
            return Err(Error::BadArgument("prefix bound exceeds the horizon".into()));
        }
        Ok(())
    }
}

/// min, max, const:1..=3 and track:col:c for c up to min(width, 2K+3).
pub fn default_rules(d: &Diagram, horizon: usize, max_depth: usize) -> Vec<SuffixRule> {
    let mut rules = vec![SuffixRule::Min, SuffixRule::Max];
    rules.extend((1..=3).map(SuffixRule::Const));
    let w = (1..=horizon.min(d.depth())).map(|n| d.width(n)).max().unwrap_or(1);
    if w > 1 {
        rules.extend((1..=w.min(2 * max_depth + 3)).map(|c| SuffixRule::Track(Track::Column(c))));
    }
    rules
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Candidate {
    pub spec: PathSpec,
    /// Resolved truncation to the horizon.
    #[serde(skip)]
    pub path: FinitePath,
    /// Deepest unique resolution; its orbit bounds the compared times.
    #[serde(skip)]
    pub full: FinitePath,
}

fn all_paths_to(d: &Diagram, n: usize) -> Vec<FinitePath> {
    let mut cur = vec![FinitePath::root()];
    for l in 1..=n {
        let mut next = Vec::new();
        for p in &cur {
            for (t, o) in d.out_edges(l - 1, p.end()) {
                let mut q = p.clone();
                q.push(t, o);
                next.push(q);
            }
        }
        cur = next;
    }
    cur
}

/// Pinned prefixes of length <= bound crossed with the rules, kept when they
/// resolve to the horizon, deduplicated by the deepest resolution.
pub fn candidates(d: &Diagram, params: &SearchParams) -> Vec<Candidate> {
    let mut specs = Vec::new();
    for l in 0..=params.prefix_bound {
        for p in all_paths_to(d, l) {
            for r in &params.rules {
                specs.push(PathSpec::from_path(d, &p, r.clone()));
            }
        }
    }
    let resolved: Vec<FinitePath> = specs.par_iter().map(|s| s.resolve_full(d).path).collect();
    let mut seen: HashMap<FinitePath, ()> = HashMap::new();
    let mut out = Vec::new();
    for (spec, full) in specs.into_iter().zip(resolved) {
        if full.len() >= params.horizon && seen.insert(full.clone(), ()).is_none() {
            out.push(Candidate {
                spec,
                path: full.truncate(params.horizon),
                full,
            });
        }
    }
    out
}

/// Leading levels on which two paths agree, at most `cap`.
fn agreement(p: &FinitePath, q: &FinitePath, cap: usize) -> usize {
    (1..=cap)
        .find(|&l| p.verts[l] != q.verts[l] || p.ords[l - 1] != q.ords[l - 1])
        .map_or(cap, |l| l - 1)
}

/// Joint orbit scan of two paths over a window, clipped where either leaves its levels.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PairScan {
    /// Minimum over the scanned times of the number of agreeing leading levels.
    pub agree: usize,
    /// A time where the minimum is attained.
    pub at: i64,
    /// Times actually scanned.
    pub window: Window,
    /// Scan stopped early because agreement fell below the floor.
    pub stopped: bool,
}

pub fn scan_pair(d: &Diagram, p: &FinitePath, q: &FinitePath, w: Window, cap: usize, floor: usize) -> PairScan {
    let cap = cap.min(p.len()).min(q.len());
    let mut agree = agreement(p, q, cap);
    let mut at = 0;
    let mut lo = 0;
    let mut hi = 0;
    if agree < floor {
        return PairScan {
            agree,
            at,
            window: Window::new(0, 0),
            stopped: true,
        };
    }
    for (dir, limit) in [(Direction::Succ, w.hi), (Direction::Pred, -w.lo)] {
        let (mut a, mut b) = (p.clone(), q.clone());
        let mut m = 0i64;
        while m < limit {
            if step_path(d, &mut a, dir).is_err() || step_path(d, &mut b, dir).is_err() {
                break;
            }
            m += 1;
            let t = if dir == Direction::Succ { m } else { -m };
            let c = agreement(&a, &b, cap);
            if c < agree {
                agree = c;
                at = t;
                if agree < floor {
                    let window = if dir == Direction::Succ { Window::new(0, m) } else { Window::new(-m, hi) };
                    return PairScan {
                        agree,
                        at,
                        window,
                        stopped: true,
                    };
                }
            }
        }
        if dir == Direction::Succ {
            hi = m;
        } else {
            lo = -m;
        }
    }
    PairScan {
        agree,
        at,
        window: Window::new(lo, hi),
        stopped: false,
    }
}

/// Depth of a pair within a window: Some((k, difference time, scanned window))
/// when the k-codings agree over the scan and the (k+1)-truncations differ.
pub fn pair_depth(d: &Diagram, p: &FinitePath, q: &FinitePath, w: Window) -> Option<(usize, i64, Window)> {
    let cap = p.len().min(q.len());
    let s = scan_pair(d, p, q, w, cap, 0);
    (s.agree < cap).then_some((s.agree, s.at, s.window))
}

/// First cut time for each j in 1..=jmax (index j), equal dots first, then the window.
pub fn pair_cuts(d: &Diagram, p: &FinitePath, q: &FinitePath, jmax: usize, w: Window) -> Vec<Option<(i64, CutMethod)>> {
    let jmax = jmax.min(p.len()).min(q.len());
    let mut out: Vec<Option<(i64, CutMethod)>> = vec![None; jmax + 1];
    let mut need_scan = false;
    for (j, slot) in out.iter_mut().enumerate().skip(1) {
        let (a, b) = (p.dot(d, j), q.dot(d, j));
        if a == b {
            *slot = Some((-(a as i64), CutMethod::EqualDots));
        } else {
            need_scan = true;
        }
    }
    if !need_scan {
        return out;
    }
    let record = |out: &mut Vec<Option<(i64, CutMethod)>>, a: &FinitePath, b: &FinitePath, m: i64| {
        let md = a.minimal_depth().min(b.minimal_depth()).min(jmax);
        for slot in out.iter_mut().take(md + 1).skip(1) {
            match slot {
                Some((t, _)) if t.abs() <= m.abs() => {}
                _ => *slot = Some((m, CutMethod::WindowScan)),
            }
        }
    };
    record(&mut out, p, q, 0);
    for (dir, limit) in [(Direction::Succ, w.hi), (Direction::Pred, -w.lo)] {
        let (mut a, mut b) = (p.clone(), q.clone());
        let mut m = 0i64;
        while m < limit {
            if step_path(d, &mut a, dir).is_err() || step_path(d, &mut b, dir).is_err() {
                break;
            }
            m += 1;
            let t = if dir == Direction::Succ { m } else { -m };
            record(&mut out, &a, &b, t);
        }
    }
    out
}

fn to_slots(d: &Diagram, p: &FinitePath, q: &FinitePath, cuts: &[Option<(i64, CutMethod)>], from: usize) -> Vec<CutSlot> {
    (from..cuts.len())
        .map(|j| CutSlot {
            j,
            cut: cuts[j].map(|(m, method)| Cut {
                j,
                m,
                method,
                vertices: (d.name(j, p.verts[j]).into(), d.name(j, q.verts[j]).into()),
            }),
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct WitnessRecord {
    pub x: PathSpec,
    pub y: PathSpec,
    pub k: usize,
    pub difference_time: i64,
    pub window: Window,
    pub cuts: Vec<CutSlot>,
}

#[derive(Clone, Debug, Serialize)]
pub struct DepthSummary {
    pub k: usize,
    pub witness_count: usize,
    /// Witnesses with a cut at every tested j > k.
    pub long_cut_count: usize,
    /// Witnesses with no k+1 cut in the window.
    pub no_next_cut_count: usize,
    /// Witnesses missing a cut at some tested j.
    pub with_pair_cutoff_count: usize,
    pub examples: Vec<WitnessRecord>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CutCell {
    pub k: usize,
    pub j: usize,
    /// Some depth-k witness has a j cut at this time.
    pub time: Option<i64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SearchBounds {
    pub max_depth: usize,
    pub horizon: usize,
    pub window: i64,
    pub min_window: u64,
    pub prefix_bound: usize,
    pub rules: Vec<String>,
    pub candidates: usize,
    pub pairs_compared: usize,
    /// Pairs whose common window was shorter than `min_window`.
    pub pairs_unchecked: usize,
    pub witnesses_without_cut_check: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassFlags {
    /// Every universal below holds only within `bounds`.
    pub scope: String,
    pub w_evidence: bool,
    pub w0_evidence: bool,
    pub ww_evidence: bool,
    pub ww_ks: Vec<usize>,
    /// "refuted" when some depth-k witness has a k+1 cut.
    pub u0: String,
    /// Per k: smallest J with no depth-k witness cut at any j in J..=horizon.
    pub u_cutoffs: Vec<(usize, Option<usize>)>,
    pub u_cutoff_evidence: bool,
    pub u1_witness: bool,
    pub u2_witness: bool,
    /// Per k: a j with no depth-k witness cut.
    pub dm2_ks: Vec<(usize, usize)>,
    pub dm2_consistent: bool,
    /// k at which every depth-k witness misses some cut.
    pub h2_ks: Vec<usize>,
    pub h2_consistent: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct EvidenceReport {
    pub bounds: SearchBounds,
    pub incomplete: bool,
    pub depths: Vec<DepthSummary>,
    pub cut_table: Vec<CutCell>,
    pub flags: ClassFlags,
}

/// A depth-k witness found in the candidate search.
#[derive(Clone, Debug)]
pub struct FoundPair {
    pub x: usize,
    pub y: usize,
    pub k: usize,
    /// Common times of the two truncated orbits, over which the codings were compared.
    pub range: Window,
}

#[derive(Clone, Debug, Default)]
pub struct SearchOutcome {
    pub found: Vec<FoundPair>,
    pub compared: usize,
    /// Pairs whose common range was shorter than `min_window`.
    pub unchecked: usize,
    /// The pair budget ran out.
    pub incomplete: bool,
}

/// Coding hashes for levels 1..=top and every candidate located in its orbit.
pub struct Codings<'a> {
    d: &'a Diagram,
    hashes: Vec<LevelHash>,
    placed: Vec<Placed>,
    dots: Vec<Vec<u64>>,
}

impl<'a> Codings<'a> {
    pub fn new(d: &'a Diagram, paths: &[&FinitePath], top: usize) -> Codings<'a> {
        Codings {
            d,
            hashes: (1..=top).map(|k| LevelHash::new(d, k)).collect(),
            placed: paths.iter().map(|p| Placed::new(d, p)).collect(),
            dots: paths.iter().map(|p| (0..=p.len()).map(|j| p.dot(d, j)).collect()).collect(),
        }
    }

    fn same(&self, k: usize, a: usize, b: usize, lo: i64, hi: i64) -> bool {
        hcode::same_on(&self.hashes[k - 1], self.d, &self.placed[a], &self.placed[b], lo, hi)
    }

    pub fn range(&self, a: usize, b: usize) -> Window {
        let (lo, hi) = hcode::common(&self.placed[a], &self.placed[b]);
        Window::new(lo, hi)
    }

    /// Largest k <= top with equal k-codings over the common range, testing
    /// downward from `from`.
    fn depth_down(&self, a: usize, b: usize, from: usize) -> usize {
        let w = self.range(a, b);
        (1..=from).rev().find(|&k| self.same(k, a, b, w.lo, w.hi)).unwrap_or(0)
    }

    fn depth_up(&self, a: usize, b: usize) -> usize {
        let w = self.range(a, b);
        let top = self.hashes.len();
        (1..=top).find(|&k| !self.same(k, a, b, w.lo, w.hi)).map_or(top, |k| k - 1)
    }

    /// Time nearest 0 where the k-codings differ.
    pub fn difference(&self, k: usize, a: usize, b: usize) -> Option<i64> {
        let w = self.range(a, b);
        hcode::nearest_difference(&self.hashes[k - 1], self.d, &self.placed[a], &self.placed[b], w.lo, w.hi)
    }

    /// A j cut: equal level-j dots, else a scan of `w` for common level-j block starts.
    pub fn cut_at(&self, a: usize, b: usize, j: usize, w: Window) -> Option<(i64, CutMethod)> {
        let (da, db) = (self.dots[a][j], self.dots[b][j]);
        if da == db {
            return Some((-(da as i64), CutMethod::EqualDots));
        }
        let r = self.range(a, b);
        let (lo, hi) = (w.lo.max(r.lo), w.hi.min(r.hi));
        if lo > hi {
            return None;
        }
        let (pa, pb) = (&self.placed[a], &self.placed[b]);
        let mut starts = Vec::new();
        let base = |p: &Placed, m: i64| (p.dot as i64 + m) as u64;
        block_starts(self.d, pa.level, pa.vertex, 0, base(pa, lo), base(pa, hi), j, usize::MAX, &mut starts);
        let mut best: Option<i64> = None;
        for s in starts {
            let m = s as i64 - pa.dot as i64;
            if is_block_start(self.d, pb.level, pb.vertex, base(pb, m), j) && best.is_none_or(|t| m.abs() < t.abs()) {
                best = Some(m);
            }
        }
        best.map(|m| (m, CutMethod::WindowScan))
    }

    /// Highest j <= jmax with a j cut, and its time.
    fn cut_top(&self, a: usize, b: usize, jmax: usize, w: Window) -> Option<(usize, i64)> {
        (1..=jmax).rev().find_map(|j| self.cut_at(a, b, j, w).map(|(m, _)| (j, m)))
    }
}

/// Pairs of `members` split by their window keys, tagged with the number of
/// leading levels on which the keys agree. Pairs agreeing on every level are tagged `keys[0].len()`.
fn key_pairs(members: &[usize], keys: &[Vec<u64>], level: usize, out: &mut Vec<(u32, u32, u8)>, cap: usize) -> bool {
    let top = keys[members[0]].len();
    if level == top {
        for (i, &a) in members.iter().enumerate() {
            for &b in &members[i + 1..] {
                if out.len() >= cap {
                    return false;
                }
                out.push((a as u32, b as u32, level as u8));
            }
        }
        return true;
    }
    let mut groups: HashMap<u64, Vec<usize>> = HashMap::new();
    for &m in members {
        groups.entry(keys[m][level]).or_default().push(m);
    }
    let mut gs: Vec<Vec<usize>> = groups.into_values().collect();
    gs.sort();
    if level > 0 {
        for (i, g) in gs.iter().enumerate() {
            for h in &gs[i + 1..] {
                for &a in g {
                    for &b in h {
                        if out.len() >= cap {
                            return false;
                        }
                        out.push((a as u32, b as u32, level as u8));
                    }
                }
            }
        }
    }
    gs.iter().filter(|g| g.len() > 1).all(|g| key_pairs(g, keys, level + 1, out, cap))
}

/// Every candidate pair with equal k-codings and different (k+1)-codings over
/// the common range of their truncated orbits, for 1 <= k <= K.
///
/// Candidates whose orbit covers the whole window are grouped by window hashes
/// first; every pair that shares a level-1 letter at time 0 is then settled on
/// its full common range.
pub fn search_pairs<'a>(d: &'a Diagram, cands: &[Candidate], params: &SearchParams) -> (Codings<'a>, SearchOutcome) {
    let top = params.max_depth + 1;
    let paths: Vec<&FinitePath> = cands.iter().map(|c| &c.full).collect();
    let cod = Codings::new(d, &paths, top);
    let r = params.window;
    let mut groups: HashMap<u64, Vec<usize>> = HashMap::new();
    for (i, c) in cands.iter().enumerate() {
        groups.entry(c.full.letter(d, 1)).or_default().push(i);
    }
    let mut groups: Vec<Vec<usize>> = groups.into_values().collect();
    groups.sort();
    let full_window = |i: usize| {
        let (lo, hi) = cod.placed[i].range();
        lo <= -r && hi >= r
    };
    let keys: Vec<Vec<u64>> = (0..cands.len())
        .into_par_iter()
        .map(|i| {
            if !full_window(i) {
                return vec![];
            }
            cod.hashes.iter().map(|h| hcode::window_key(h, d, &cod.placed[i], -r, r)).collect()
        })
        .collect();
    let mut work: Vec<(u32, u32, u8)> = Vec::new();
    let mut complete = true;
    for g in &groups {
        let (wide, narrow): (Vec<usize>, Vec<usize>) = g.iter().partition(|&&i| full_window(i));
        if wide.len() > 1 {
            complete &= key_pairs(&wide, &keys, 0, &mut work, params.max_pairs);
        }
        for (i, &a) in narrow.iter().enumerate() {
            for &b in wide.iter().chain(&narrow[i + 1..]) {
                if work.len() >= params.max_pairs {
                    complete = false;
                    break;
                }
                // 0 marks a pair settled from level 1 upward
                work.push((a as u32, b as u32, 0));
            }
        }
    }
    let results: Vec<Option<std::result::Result<FoundPair, ()>>> = work
        .par_iter()
        .map(|&(a, b, tag)| {
            let (a, b) = (a as usize, b as usize);
            let range = cod.range(a, b);
            if range.len() < params.min_window {
                return Some(Err(()));
            }
            let k = if tag == 0 { cod.depth_up(a, b) } else { cod.depth_down(a, b, tag as usize) };
            (k >= 1 && k <= params.max_depth).then(|| {
                let (x, y) = if a < b { (a, b) } else { (b, a) };
                Ok(FoundPair { x, y, k, range })
            })
        })
        .collect();
    let unchecked = results.iter().filter(|r| matches!(r, Some(Err(())))).count();
    let mut found: Vec<FoundPair> = results.into_iter().flatten().flatten().collect();
    found.sort_by_key(|f| (f.k, f.x, f.y));
    let out = SearchOutcome {
        found,
        compared: work.len(),
        unchecked,
        incomplete: !complete,
    };
    (cod, out)
}

pub fn class_evidence(d: &Diagram, params: &SearchParams) -> Result<EvidenceReport> {
    params.check(d)?;
    let cands = candidates(d, params);
    let (cod, res) = search_pairs(d, &cands, params);
    let w = Window::symmetric(params.window);
    let jmax = params.horizon;
    let evaluated = res.found.len().min(params.max_cut_pairs);
    let tops: Vec<Option<(usize, i64)>> = res.found[..evaluated]
        .par_iter()
        .map(|f| cod.cut_top(f.x, f.y, jmax, w))
        .collect();
    let t = |i: usize| tops[i].map_or(0, |c| c.0);
    let mut depths = Vec::new();
    let mut cut_table = Vec::new();
    for k in 1..=params.max_depth {
        let all: Vec<usize> = (0..res.found.len()).filter(|&i| res.found[i].k == k).collect();
        let idx: Vec<usize> = all.iter().copied().filter(|&i| i < evaluated).collect();
        let examples = idx
            .iter()
            .take(params.keep_per_k)
            .map(|&i| {
                let f = &res.found[i];
                let cuts: Vec<Option<(i64, CutMethod)>> =
                    (0..=jmax).map(|j| if j == 0 { None } else { cod.cut_at(f.x, f.y, j, w) }).collect();
                WitnessRecord {
                    x: cands[f.x].spec.clone(),
                    y: cands[f.y].spec.clone(),
                    k,
                    difference_time: cod.difference(k + 1, f.x, f.y).unwrap_or(0),
                    window: f.range,
                    cuts: to_slots(d, &cands[f.x].full, &cands[f.y].full, &cuts, k + 1),
                }
            })
            .collect();
        depths.push(DepthSummary {
            k,
            witness_count: all.len(),
            long_cut_count: idx.iter().filter(|&&i| t(i) >= jmax).count(),
            no_next_cut_count: idx.iter().filter(|&&i| t(i) < k + 1).count(),
            with_pair_cutoff_count: idx.iter().filter(|&&i| t(i) < jmax).count(),
            examples,
        });
        for j in k + 1..=jmax {
            let time = idx.iter().find_map(|&i| tops[i].filter(|c| c.0 >= j).map(|c| c.1));
            cut_table.push(CutCell { k, j, time });
        }
    }
    let flags = flags_from(&depths, &cut_table, params, jmax);
    Ok(EvidenceReport {
        bounds: SearchBounds {
            max_depth: params.max_depth,
            horizon: params.horizon,
            window: params.window,
            min_window: params.min_window,
            prefix_bound: params.prefix_bound,
            rules: params.rules.iter().map(|r| r.to_string()).collect(),
            candidates: cands.len(),
            pairs_compared: res.compared,
            pairs_unchecked: res.unchecked,
            witnesses_without_cut_check: res.found.len() - evaluated,
        },
        incomplete: res.incomplete || evaluated < res.found.len(),
        depths,
        cut_table,
        flags,
    })
}

/// Recomputes the class flags from per-k summaries and the cut table.
pub fn flags_from(depths: &[DepthSummary], cut_table: &[CutCell], params: &SearchParams, jmax: usize) -> ClassFlags {
    let cell = |k: usize, j: usize| cut_table.iter().any(|c| c.k == k && c.j == j && c.time.is_some());
    let count = |k: usize| depths.iter().find(|s| s.k == k).map_or(0, |s| s.witness_count);
    let ks: Vec<usize> = depths.iter().map(|s| s.k).collect();
    let all_j = |k: usize| count(k) > 0 && (k + 1..=jmax).all(|j| cell(k, j));
    let ww_ks = if params.ww_ks.is_empty() { ks.clone() } else { params.ww_ks.clone() };
    let u0_refuted = ks.iter().any(|&k| cell(k, k + 1));
    let u_cutoffs: Vec<(usize, Option<usize>)> = ks
        .iter()
        .map(|&k| {
            let mut cutoff = None;
            for j in (k + 1..=jmax).rev() {
                if cell(k, j) {
                    break;
                }
                cutoff = Some(j);
            }
            (k, cutoff)
        })
        .collect();
    let dm2_ks: Vec<(usize, usize)> = ks
        .iter()
        .filter_map(|&k| (k + 1..=jmax).find(|&j| !cell(k, j)).map(|j| (k, j)))
        .collect();
    let h2_ks: Vec<usize> = depths
        .iter()
        .filter(|s| s.witness_count > 0 && s.with_pair_cutoff_count == s.witness_count)
        .map(|s| s.k)
        .collect();
    let with_w: Vec<&DepthSummary> = depths.iter().filter(|s| s.witness_count > 0).collect();
    ClassFlags {
        scope: format!(
            "consistent within bounds: k <= {}, j <= {}, window {}, prefix <= {}",
            params.max_depth, jmax, params.window, params.prefix_bound
        ),
        w_evidence: ks.iter().all(|&k| all_j(k)),
        w0_evidence: depths.iter().all(|s| s.long_cut_count > 0),
        ww_evidence: ww_ks.iter().all(|&k| all_j(k)),
        ww_ks,
        u0: if u0_refuted { "refuted".into() } else { "consistent".into() },
        u_cutoff_evidence: u_cutoffs.iter().all(|(_, c)| c.is_some()),
        u_cutoffs,
        u1_witness: depths.iter().any(|s| s.no_next_cut_count > 0),
        u2_witness: !with_w.is_empty() && with_w.iter().all(|s| s.no_next_cut_count > 0),
        dm2_consistent: !dm2_ks.is_empty(),
        dm2_ks,
        h2_consistent: !h2_ks.is_empty(),
        h2_ks,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct U0Certificate {
    pub levels: usize,
    pub reason: String,
}

/// Exact certificate for diagrams with one vertex at every level: a depth-k
/// pair has distinct (k+1)-truncations at every time, so never a k+1 cut.
pub fn u0_certificate(d: &Diagram) -> Option<U0Certificate> {
    (1..=d.depth()).all(|n| d.width(n) == 1).then(|| U0Certificate {
        levels: d.depth(),
        reason: "one vertex at every level: two paths that agree to level k and differ at k+1 \
                 differ at level k+1 at every time, so no k+1 cut exists"
            .into(),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct UoPairWitness {
    pub x: PathSpec,
    pub y: PathSpec,
    pub n: usize,
    pub same_coding_window: Window,
    pub difference_time: i64,
    pub cut: Cut,
}

impl UoPairWitness {
    pub fn evidence(&self) -> PairEvidence {
        PairEvidence {
            x: self.x.clone(),
            y: self.y.clone(),
            kind: EvidenceKind::DepthWitness {
                k: self.n,
                difference_time: self.difference_time,
                window: self.same_coding_window,
            },
        }
    }
}

/// Two paths minimal into distinct vertices at level n+1; exists when level
/// n+1 is uniformly ordered with more than one vertex.
pub fn uo_pair_witness(d: &Diagram, n: usize) -> Option<UoPairWitness> {
    if n + 1 > d.depth() || d.width(n + 1) < 2 {
        return None;
    }
    uniform_order_test(d, n + 1).ok()??;
    let (px, py) = (
        extremal_path_into(d, n + 1, 0, Extremal::Min),
        extremal_path_into(d, n + 1, 1, Extremal::Min),
    );
    let w = Window::symmetric(2 * d.dim(n + 1, 0).max(d.dim(n + 1, 1)) as i64);
    let suffixes = [
        SuffixRule::Track(Track::Column(2)),
        SuffixRule::Track(Track::Column(1)),
        SuffixRule::Min,
        SuffixRule::Const(1),
    ];
    for s in suffixes {
        let (x, y) = (PathSpec::from_path(d, &px, s.clone()), PathSpec::from_path(d, &py, s));
        let (Ok(rx), Ok(ry)) = (x.resolve(d, d.depth()), y.resolve(d, d.depth())) else {
            continue;
        };
        let Some((k, at, window)) = pair_depth(d, &rx, &ry, w) else {
            continue;
        };
        if k != n || window.len() < 2 {
            continue;
        }
        let cut = Cut {
            j: n + 1,
            m: 0,
            method: CutMethod::WindowScan,
            vertices: (d.name(n + 1, 0).into(), d.name(n + 1, 1).into()),
        };
        return Some(UoPairWitness {
            x,
            y,
            n,
            same_coding_window: window,
            difference_time: at,
            cut,
        });
    }
    None
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KiteShape {
    pub widths: Vec<usize>,
    pub last_multi_vertex_level: Option<usize>,
    pub nonincreasing: bool,
    pub strictly_increasing: bool,
    pub eventually_one: bool,
    pub deterministic: bool,
}

pub fn kite_shape_check(d: &Diagram) -> KiteShape {
    let widths: Vec<usize> = (1..=d.depth()).map(|n| d.width(n)).collect();
    KiteShape {
        last_multi_vertex_level: widths.iter().rposition(|&w| w > 1).map(|i| i + 1),
        nonincreasing: widths.windows(2).all(|w| w[1] <= w[0]),
        strictly_increasing: widths.windows(2).all(|w| w[1] > w[0]),
        eventually_one: widths.last() == Some(&1),
        deterministic: deterministic_test(d).deterministic,
        widths,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TelescopeRecord {
    pub levels: Vec<usize>,
    pub k: usize,
    pub j: usize,
    pub image_depth: Option<usize>,
    /// l_k: the largest l with n_l <= k.
    pub expected_image_depth: usize,
    /// l_j, and whether the image pair has an l_j cut.
    pub image_cut_level: usize,
    pub image_has_cut: bool,
    pub lifted_depth: Option<usize>,
    /// [n_l, n_{l+1}) for l the image depth.
    pub lifted_depth_range: (usize, usize),
    /// n_{l_j}, and whether the lifted pair has a cut there.
    pub lifted_cut_level: usize,
    pub lifted_has_cut: bool,
    pub parts: [bool; 4],
    pub window: Window,
    /// The scanned windows were shorter than requested.
    pub window_short: bool,
}

impl TelescopeRecord {
    pub fn all_pass(&self) -> bool {
        self.parts.iter().all(|&b| b)
    }
}

/// l with n_l <= k < n_{l+1}.
pub fn level_index(levels: &[usize], k: usize) -> usize {
    levels.iter().rposition(|&n| n <= k).unwrap_or(0)
}

/// Checks the depth and cut correspondence on one verified pair.
pub fn telescope_correspondence(
    d: &Diagram,
    levels: &[usize],
    pair: (&FinitePath, &FinitePath),
    k: usize,
    j: usize,
    w: Window,
) -> Result<TelescopeRecord> {
    let (p, q) = pair;
    let (dk, _, win) = pair_depth(d, p, q, w).ok_or_else(|| Error::BadArgument("pair has no depth in the window".into()))?;
    if dk != k {
        return Err(Error::BadArgument(format!("pair has depth {dk} in the window, not {k}")));
    }
    if pair_cuts(d, p, q, j, w)[j].is_none() {
        return Err(Error::BadArgument(format!("pair has no {j} cut in the window")));
    }
    let t = telescope(d, levels)?;
    let (tp, tq) = (telescope_path(d, levels, p)?, telescope_path(d, levels, q)?);
    let lk = level_index(levels, k);
    let lj = level_index(levels, j);
    let image = pair_depth(&t, &tp, &tq, w);
    let image_depth = image.map(|x| x.0);
    let image_has_cut = lj == 0 || pair_cuts(&t, &tp, &tq, lj, w).get(lj).copied().flatten().is_some();
    let l = image_depth.unwrap_or(lk);
    let range = (levels[l], levels.get(l + 1).copied().unwrap_or(usize::MAX));
    let (lp, lq) = (lift_path(d, levels, &tp)?, lift_path(d, levels, &tq)?);
    let lifted = pair_depth(d, &lp, &lq, w);
    let lifted_depth = lifted.map(|x| x.0);
    let nlj = levels[lj];
    let lifted_has_cut = nlj == 0 || pair_cuts(d, &lp, &lq, nlj, w)[nlj].is_some();
    let window_short = image.is_some_and(|x| x.2.len() < win.len()) || lifted.is_some_and(|x| x.2.len() < win.len());
    let parts = [
        image_depth == Some(lk),
        image_has_cut,
        lifted_depth.is_some_and(|x| range.0 <= x && x < range.1),
        lifted_has_cut,
    ];
    Ok(TelescopeRecord {
        levels: levels.to_vec(),
        k,
        j,
        image_depth,
        expected_image_depth: lk,
        image_cut_level: lj,
        image_has_cut,
        lifted_depth,
        lifted_depth_range: range,
        lifted_cut_level: nlj,
        lifted_has_cut,
        parts,
        window: win,
        window_short,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct SnePair {
    pub x: PathSpec,
    pub y: PathSpec,
}

#[derive(Clone, Debug, Serialize)]
pub struct SneLevel {
    pub k: usize,
    pub witness_count: usize,
    pub examples: Vec<SnePair>,
    /// Pairs produced by the same-labels-and-Morse-component rule, when the diagram is gj-like.
    pub generator_count: Option<usize>,
    /// Pairs found by exactly one of the two methods.
    pub mismatches: Vec<SnePair>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SneReport {
    pub horizon: usize,
    pub candidates: usize,
    pub levels: Vec<SneLevel>,
    pub scope: String,
}

/// Whether the diagram's names follow the gj scheme at every level.
fn gj_like(d: &Diagram) -> bool {
    (1..=d.depth()).all(|n| (0..d.width(n)).all(|v| d.name(n, v) == gj_name(n, v + 1)))
}

/// Candidate pairs that are k-equivalent up to the horizon, for each k <= K.
pub fn sne_evidence(d: &Diagram, params: &SearchParams) -> Result<SneReport> {
    params.check(d)?;
    let n = params.horizon;
    let cands = candidates(d, params);
    let gj = gj_like(d);
    let mut levels = Vec::new();
    for k in 1..=params.max_depth {
        let mut blind = kequiv_pairs(d, &cands, k, n);
        blind.sort_unstable();
        let (generator_count, mismatches) = if gj {
            let mut gen = Vec::new();
            for a in 0..cands.len() {
                for b in a + 1..cands.len() {
                    let (p, q) = (&cands[a].path, &cands[b].path);
                    let enter = {
                        let (s, t) = (p.verts[k + 1] + 1, q.verts[k + 1] + 1);
                        s != t && mc_component(s) == Some(k) && mc_component(t) == Some(k)
                    };
                    if enter && p.ords == q.ords && p.truncate(k) == q.truncate(k) {
                        gen.push((a, b));
                    }
                }
            }
            let mis: Vec<SnePair> = blind
                .iter()
                .filter(|e| gen.binary_search(e).is_err())
                .chain(gen.iter().filter(|e| blind.binary_search(e).is_err()))
                .map(|&(a, b)| SnePair {
                    x: cands[a].spec.clone(),
                    y: cands[b].spec.clone(),
                })
                .collect();
            (Some(gen.len()), mis)
        } else {
            (None, vec![])
        };
        levels.push(SneLevel {
            k,
            witness_count: blind.len(),
            examples: blind
                .iter()
                .take(params.keep_per_k)
                .map(|&(a, b)| SnePair {
                    x: cands[a].spec.clone(),
                    y: cands[b].spec.clone(),
                })
                .collect(),
            generator_count,
            mismatches,
        });
    }
    Ok(SneReport {
        horizon: n,
        candidates: cands.len(),
        levels,
        scope: format!(
            "k-equivalence checked to level {n} over {} candidates (prefix <= {})",
            cands.len(),
            params.prefix_bound
        ),
    })
}

/// Every k-equivalent candidate pair, as resolved paths.
pub fn k_equivalent_pairs(d: &Diagram, params: &SearchParams, k: usize) -> Result<Vec<(Candidate, Candidate)>> {
    params.check(d)?;
    let cands = candidates(d, params);
    Ok(kequiv_pairs(d, &cands, k, params.horizon)
        .into_iter()
        .map(|(a, b)| (cands[a].clone(), cands[b].clone()))
        .collect())
}

/// Index pairs (a < b) of candidates that agree to level k and have equal
/// dots and level-k codings at every level in (k, n].
fn kequiv_pairs(d: &Diagram, cands: &[Candidate], k: usize, n: usize) -> Vec<(usize, usize)> {
    let mut codes: HashMap<Vec<usize>, usize> = HashMap::new();
    let mut groups: HashMap<Vec<u64>, Vec<usize>> = HashMap::new();
    for (i, c) in cands.iter().enumerate() {
        let p = &c.path;
        let mut key = p.letters_upto(d, k);
        for l in k + 1..=n {
            let next = codes.len();
            let id = *codes.entry(vertex_coding(d, k, l, p.verts[l])).or_insert(next);
            key.extend([p.dot(d, l), id as u64]);
        }
        groups.entry(key).or_default().push(i);
    }
    let mut out = Vec::new();
    for g in groups.values() {
        for a in 0..g.len() {
            for b in a + 1..g.len() {
                // distinct deeper resolutions can share the truncation
                if cands[g[a]].path != cands[g[b]].path {
                    out.push((g[a], g[b]));
                }
            }
        }
    }
    out.sort_unstable();
    out
}
