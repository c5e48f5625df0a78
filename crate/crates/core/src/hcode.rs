//! Polynomial hashes of k-coding words composed along the diagram, so that any
//! stretch of a truncated orbit's k-coding hashes in O(depth) without stepping.
//!
//! The word of vertex (n, v) over the level-k alphabet lists the k-truncations
//! of the paths into (n, v) in order; it is the concatenation of the words of
//! its sources in edge order. H(w) = sum w_t B^t mod 2^61-1.

use crate::diagram::{Diagram, FinitePath};

const P: u64 = (1 << 61) - 1;
const BASE: u64 = 0x1d3f_52a9_87c1_6b05 % P;

fn mul(a: u64, b: u64) -> u64 {
    let r = (a as u128) * (b as u128);
    let lo = (r as u64) & P;
    let hi = (r >> 61) as u64;
    let s = lo + hi;
    if s >= P {
        s - P
    } else {
        s
    }
}

fn add(a: u64, b: u64) -> u64 {
    let s = a + b;
    if s >= P {
        s - P
    } else {
        s
    }
}

fn sub(a: u64, b: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + P - b
    }
}

fn pow(mut b: u64, mut e: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mul(r, b);
        }
        b = mul(b, b);
        e >>= 1;
    }
    r
}

struct Node {
    /// Start of each source block, plus the total length at the end.
    offs: Vec<u64>,
    /// Hash of the sources before each block, plus the full hash.
    pre: Vec<u64>,
    /// B^offs.
    pw: Vec<u64>,
}

/// Hash tables for one coding level k, covering levels k..=depth.
pub struct LevelHash {
    k: usize,
    /// prefix[v][t]: hash of the first t letters of the level-k word of v.
    prefix: Vec<Vec<u64>>,
    /// nodes[n - k - 1][v] for n > k.
    nodes: Vec<Vec<Node>>,
}

impl LevelHash {
    pub fn new(d: &Diagram, k: usize) -> LevelHash {
        let prefix = (0..d.width(k))
            .map(|v| {
                let off = d.letter_offset(k, v);
                let mut h = Vec::with_capacity(d.dim(k, v) as usize + 1);
                let (mut acc, mut bt) = (0, 1);
                h.push(0);
                for t in 0..d.dim(k, v) {
                    acc = add(acc, mul(bt, (off + t + 1) % P));
                    bt = mul(bt, BASE);
                    h.push(acc);
                }
                h
            })
            .collect::<Vec<_>>();
        let mut full: Vec<u64> = prefix.iter().map(|h| *h.last().unwrap()).collect();
        let mut nodes = Vec::new();
        for n in k + 1..=d.depth() {
            let lvl: Vec<Node> = (0..d.width(n))
                .map(|v| {
                    let mut offs = vec![0];
                    let mut pre = vec![0];
                    let mut pw = vec![1];
                    for &s in d.in_edges(n, v) {
                        let o = *offs.last().unwrap();
                        let h = add(*pre.last().unwrap(), mul(*pw.last().unwrap(), full[s]));
                        let o2 = o + d.dim(n - 1, s);
                        offs.push(o2);
                        pre.push(h);
                        pw.push(pow(BASE, o2));
                    }
                    Node { offs, pre, pw }
                })
                .collect();
            full = lvl.iter().map(|nd| *nd.pre.last().unwrap()).collect();
            nodes.push(lvl);
        }
        LevelHash { k, prefix, nodes }
    }

    fn node(&self, n: usize, v: usize) -> &Node {
        &self.nodes[n - self.k - 1][v]
    }

    /// Hash of the first i letters of the word of (n, v).
    fn prefix_hash(&self, mut n: usize, mut v: usize, mut i: u64, d: &Diagram) -> u64 {
        let mut acc = 0;
        let mut scale = 1;
        while n > self.k {
            let nd = self.node(n, v);
            let c = nd.offs.partition_point(|&o| o <= i) - 1;
            if c == nd.offs.len() - 1 {
                return add(acc, mul(scale, nd.pre[c]));
            }
            acc = add(acc, mul(scale, nd.pre[c]));
            scale = mul(scale, nd.pw[c]);
            i -= nd.offs[c];
            v = d.in_edges(n, v)[c];
            n -= 1;
        }
        add(acc, mul(scale, self.prefix[v][i as usize]))
    }

    /// B^lo times the hash of letters lo..hi (exclusive) of the word of (n, v).
    fn raw(&self, n: usize, v: usize, lo: u64, hi: u64, d: &Diagram) -> u64 {
        sub(self.prefix_hash(n, v, hi, d), self.prefix_hash(n, v, lo, d))
    }
}

/// A path located in the word of its end vertex.
#[derive(Clone, Copy, Debug)]
pub struct Placed {
    pub level: usize,
    pub vertex: usize,
    pub dot: u64,
    pub len: u64,
}

impl Placed {
    pub fn new(d: &Diagram, p: &FinitePath) -> Placed {
        let n = p.len();
        Placed {
            level: n,
            vertex: p.end(),
            dot: p.dot(d, n),
            len: d.dim(n, p.end()),
        }
    }

    /// Times covered by the orbit of the truncation.
    pub fn range(&self) -> (i64, i64) {
        (-(self.dot as i64), (self.len - 1 - self.dot) as i64)
    }
}

pub fn common(a: &Placed, b: &Placed) -> (i64, i64) {
    let (alo, ahi) = a.range();
    let (blo, bhi) = b.range();
    (alo.max(blo), ahi.min(bhi))
}

/// Whether the k-codings agree at every time in lo..=hi (inside both ranges).
pub fn same_on(h: &LevelHash, d: &Diagram, a: &Placed, b: &Placed, lo: i64, hi: i64) -> bool {
    if lo > hi {
        return true;
    }
    let (ia, ib) = ((a.dot as i64 + lo) as u64, (b.dot as i64 + lo) as u64);
    let ha = h.raw(a.level, a.vertex, ia, (a.dot as i64 + hi + 1) as u64, d);
    let hb = h.raw(b.level, b.vertex, ib, (b.dot as i64 + hi + 1) as u64, d);
    // ha = B^ia H, hb = B^ib H
    if ia >= ib {
        ha == mul(hb, pow(BASE, ia - ib))
    } else {
        hb == mul(ha, pow(BASE, ib - ia))
    }
}

/// Hash of the k-coding at times lo..=hi, independent of position.
pub fn window_key(h: &LevelHash, d: &Diagram, a: &Placed, lo: i64, hi: i64) -> u64 {
    let i = (a.dot as i64 + lo) as u64;
    let r = h.raw(a.level, a.vertex, i, (a.dot as i64 + hi + 1) as u64, d);
    mul(r, pow(pow(BASE, P - 2), i))
}

/// Time nearest 0 in lo..=hi where the k-codings differ, by bisection.
pub fn nearest_difference(h: &LevelHash, d: &Diagram, a: &Placed, b: &Placed, lo: i64, hi: i64) -> Option<i64> {
    let fwd = if same_on(h, d, a, b, 0.max(lo), hi) {
        None
    } else {
        // smallest t >= max(0, lo) with a difference at t
        let (mut l, mut r) = (0.max(lo), hi);
        while l < r {
            let m = l + (r - l) / 2;
            if same_on(h, d, a, b, 0.max(lo), m) {
                l = m + 1;
            } else {
                r = m;
            }
        }
        Some(l)
    };
    let back = if lo > -1 || same_on(h, d, a, b, lo, (-1i64).min(hi)) {
        None
    } else {
        let (mut l, mut r) = (lo, (-1i64).min(hi));
        while l < r {
            let m = l + (r - l + 1) / 2;
            if same_on(h, d, a, b, m, (-1i64).min(hi)) {
                r = m - 1;
            } else {
                l = m;
            }
        }
        Some(l)
    };
    match (fwd, back) {
        (Some(f), Some(b)) => Some(if -b < f { b } else { f }),
        (f, b) => f.or(b),
    }
}

/// Whether position q of the word of (n, v) starts a level-j block.
pub fn is_block_start(d: &Diagram, mut n: usize, mut v: usize, mut q: u64, j: usize) -> bool {
    while n > j {
        let ins = d.in_edges(n, v);
        let mut o = 0;
        let mut found = false;
        for &s in ins {
            let len = d.dim(n - 1, s);
            if q < o + len {
                q -= o;
                v = s;
                found = true;
                break;
            }
            o += len;
        }
        if !found {
            return false;
        }
        n -= 1;
    }
    q == 0
}

/// Starts of level-j blocks of the word of (n, v) inside lo..=hi, ascending,
/// offset by base. Stops after `cap` entries.
pub fn block_starts(d: &Diagram, n: usize, v: usize, base: u64, lo: u64, hi: u64, j: usize, cap: usize, out: &mut Vec<u64>) {
    if out.len() >= cap {
        return;
    }
    if n == j {
        if base >= lo && base <= hi {
            out.push(base);
        }
        return;
    }
    let mut o = base;
    for &s in d.in_edges(n, v) {
        let len = d.dim(n - 1, s);
        if o > hi {
            break;
        }
        if o + len > lo {
            block_starts(d, n - 1, s, o, lo, hi, j, cap, out);
        }
        o += len;
    }
}
