//! Pair analysis over explicit orbit windows.

use serde::Serialize;

use crate::blocks::dotted_basic_block;
use crate::diagram::{vertex_coding, Diagram};
use crate::dynamics::OrbitWindow;
use crate::error::Result;
use crate::pathspec::PathSpec;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Window {
    pub lo: i64,
    pub hi: i64,
}

impl Window {
    pub fn new(lo: i64, hi: i64) -> Self {
        Window { lo, hi }
    }

    pub fn symmetric(r: i64) -> Self {
        Window { lo: -r, hi: r }
    }

    pub fn len(&self) -> u64 {
        (self.hi - self.lo + 1) as u64
    }

    pub fn is_empty(&self) -> bool {
        self.hi < self.lo
    }

    pub fn contains(&self, m: i64) -> bool {
        self.lo <= m && m <= self.hi
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CutMethod {
    /// Equal dot indices v at level j, so T^{-v} is minimal into level j for both.
    EqualDots,
    /// Found by scanning the orbit window.
    WindowScan,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Cut {
    pub j: usize,
    pub m: i64,
    pub method: CutMethod,
    /// Level-j vertices of T^m x and T^m x' at the cut.
    pub vertices: (String, String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CutSlot {
    pub j: usize,
    pub cut: Option<Cut>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "type")]
pub enum EvidenceKind {
    SameKCoding { k: usize, window: Window },
    DepthWitness { k: usize, difference_time: i64, window: Window },
    Cut { j: usize, time: i64, method: CutMethod, window: Window },
    LongCuts { k: usize, j_range: (usize, usize), cuts: Vec<CutSlot>, window: Window },
    KEquivalentUpTo { k: usize, level: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairEvidence {
    pub x: PathSpec,
    pub y: PathSpec,
    pub kind: EvidenceKind,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum DepthOutcome {
    Witness { evidence: PairEvidence },
    None { reason: String },
}

impl DepthOutcome {
    pub fn depth(&self) -> Option<usize> {
        match self {
            DepthOutcome::Witness {
                evidence: PairEvidence {
                    kind: EvidenceKind::DepthWitness { k, .. },
                    ..
                },
            } => Some(*k),
            _ => None,
        }
    }
}

fn windows(x: &PathSpec, y: &PathSpec, w: Window, d: &Diagram) -> Result<(OrbitWindow, OrbitWindow)> {
    Ok((OrbitWindow::compute(x, w.lo, w.hi, d)?, OrbitWindow::compute(y, w.lo, w.hi, d)?))
}

/// Whether the level-k truncations of T^m x and T^m x' agree for all m in the window.
pub fn same_k_coding_window(x: &PathSpec, y: &PathSpec, k: usize, w: Window, d: &Diagram) -> Result<bool> {
    let (a, b) = windows(x, y, w, d)?;
    Ok(first_difference(&a, &b, k, d).is_none())
}

fn first_difference(a: &OrbitWindow, b: &OrbitWindow, k: usize, d: &Diagram) -> Option<i64> {
    (a.lo..=a.hi).find(|&m| a.at(m).letter(d, k) != b.at(m).letter(d, k))
}

/// Largest k <= kmax with equal k-codings over the window and a time where
/// the (k+1)-truncations differ.
pub fn depth_witness(x: &PathSpec, y: &PathSpec, kmax: usize, w: Window, d: &Diagram) -> Result<DepthOutcome> {
    let (a, b) = windows(x, y, w, d)?;
    if a.at(0) == b.at(0) {
        return Ok(DepthOutcome::None {
            reason: format!("pair not distinct: equal paths to level {}", a.at(0).len()),
        });
    }
    let top = (kmax + 1).min(a.at(0).len()).min(b.at(0).len());
    for l in 1..=top {
        if let Some(m) = first_difference(&a, &b, l, d) {
            return Ok(DepthOutcome::Witness {
                evidence: PairEvidence {
                    x: x.clone(),
                    y: y.clone(),
                    kind: EvidenceKind::DepthWitness {
                        k: l - 1,
                        difference_time: m,
                        window: w,
                    },
                },
            });
        }
    }
    Ok(DepthOutcome::None {
        reason: format!("codings agree up to level {top} on window {}..{}", w.lo, w.hi),
    })
}

/// A time at which both orbit points are minimal into level j.
pub fn find_cut(x: &PathSpec, y: &PathSpec, j: usize, w: Window, d: &Diagram) -> Result<Option<Cut>> {
    let (px, py) = (x.resolve(d, j)?, y.resolve(d, j)?);
    let (dx, dy) = (px.dot(d, j), py.dot(d, j));
    if dx == dy {
        return Ok(Some(Cut {
            j,
            m: -(dx as i64),
            method: CutMethod::EqualDots,
            vertices: (d.name(j, px.end()).into(), d.name(j, py.end()).into()),
        }));
    }
    let (a, b) = windows(x, y, w, d)?;
    Ok(scan_cut(&a, &b, j, d))
}

fn scan_cut(a: &OrbitWindow, b: &OrbitWindow, j: usize, d: &Diagram) -> Option<Cut> {
    (a.lo..=a.hi)
        .find(|&m| a.at(m).minimal_depth() >= j && b.at(m).minimal_depth() >= j)
        .map(|m| Cut {
            j,
            m,
            method: CutMethod::WindowScan,
            vertices: (d.name(j, a.at(m).verts[j]).into(), d.name(j, b.at(m).verts[j]).into()),
        })
}

/// Cuts for every j in (k, jmax].
pub fn long_cuts_report(
    x: &PathSpec,
    y: &PathSpec,
    k: usize,
    jmax: usize,
    w: Window,
    d: &Diagram,
) -> Result<PairEvidence> {
    let mut cuts = Vec::new();
    for j in k + 1..=jmax {
        cuts.push(CutSlot {
            j,
            cut: find_cut(x, y, j, w, d)?,
        });
    }
    Ok(PairEvidence {
        x: x.clone(),
        y: y.clone(),
        kind: EvidenceKind::LongCuts {
            k,
            j_range: (k + 1, jmax),
            cuts,
            window: w,
        },
    })
}

impl PairEvidence {
    /// All j in the report have a cut.
    pub fn all_cut(&self) -> bool {
        match &self.kind {
            EvidenceKind::LongCuts { cuts, .. } => cuts.iter().all(|c| c.cut.is_some()),
            _ => false,
        }
    }
}

/// Agreement to level k and equal dotted k-basic blocks at every level in (k, n].
pub fn k_equivalent_up_to(x: &PathSpec, y: &PathSpec, k: usize, n: usize, d: &Diagram) -> Result<bool> {
    let (px, py) = (x.resolve(d, n)?, y.resolve(d, n)?);
    if px.truncate(k) != py.truncate(k) {
        return Ok(false);
    }
    // equal k-basic blocks iff equal level-k codings; dots compared directly
    for l in k + 1..=n {
        if px.dot(d, l) != py.dot(d, l)
            || vertex_coding(d, k, l, px.verts[l]) != vertex_coding(d, k, l, py.verts[l])
        {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Same check through explicit dotted blocks; slower, used as a cross-check.
pub fn k_equivalent_by_blocks(x: &PathSpec, y: &PathSpec, k: usize, n: usize, d: &Diagram) -> Result<bool> {
    if x.resolve(d, k)? != y.resolve(d, k)? {
        return Ok(false);
    }
    for l in k + 1..=n {
        if dotted_basic_block(x, l, k, d)? != dotted_basic_block(y, l, k, d)? {
            return Ok(false);
        }
    }
    Ok(true)
}
