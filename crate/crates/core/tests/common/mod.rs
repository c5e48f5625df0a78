//! Brute-force oracles shared by the integration tests. None of these use the
//! library's stepping, resolution or parsing code.
#![allow(dead_code)]

use bvtk::diagram::{paths_into, validate, Diagram, FinitePath, Vertex};
use rand::Rng;

/// The orbit of a path inside its level-N vertex, listed by enumeration.
pub struct Orbit {
    pub paths: Vec<FinitePath>,
    pub index: usize,
}

pub fn orbit_of(d: &Diagram, p: &FinitePath) -> Orbit {
    let paths = paths_into(d, p.len(), p.end());
    let index = paths.iter().position(|q| q == p).expect("path not found among paths into its end");
    Orbit { paths, index }
}

fn agree(p: &FinitePath, q: &FinitePath) -> usize {
    let n = p.len().min(q.len());
    (1..=n)
        .find(|&l| p.verts[l] != q.verts[l] || p.ords[l - 1] != q.ords[l - 1])
        .map_or(n, |l| l - 1)
}

/// Common times of two orbits as (lo, hi) relative to the paths.
pub fn common_times(a: &Orbit, b: &Orbit) -> (i64, i64) {
    let lo = -(a.index.min(b.index) as i64);
    let hi = ((a.paths.len() - 1 - a.index).min(b.paths.len() - 1 - b.index)) as i64;
    (lo, hi)
}

fn at<'a>(o: &'a Orbit, m: i64) -> &'a FinitePath {
    &o.paths[(o.index as i64 + m) as usize]
}

/// Depth over all common times, clipped to [lo, hi].
pub fn depth_oracle(d: &Diagram, p: &FinitePath, q: &FinitePath, lo: i64, hi: i64) -> Option<usize> {
    let (a, b) = (orbit_of(d, p), orbit_of(d, q));
    let (clo, chi) = common_times(&a, &b);
    let k = (clo.max(lo)..=chi.min(hi)).map(|m| agree(at(&a, m), at(&b, m))).min()?;
    (k < p.len().min(q.len())).then_some(k)
}

/// Whether both orbits are minimal into level j at a common time in [lo, hi].
pub fn cut_oracle(d: &Diagram, p: &FinitePath, q: &FinitePath, j: usize, lo: i64, hi: i64) -> bool {
    let (a, b) = (orbit_of(d, p), orbit_of(d, q));
    let (clo, chi) = common_times(&a, &b);
    let minimal = |x: &FinitePath| x.ords[..j].iter().all(|&o| o == 0);
    (clo.max(lo)..=chi.min(hi)).any(|m| minimal(at(&a, m)) && minimal(at(&b, m)))
}

/// Smallest p <= n/2 with w[i] = w[i+p] throughout, by direct scan.
pub fn period_oracle<T: PartialEq>(w: &[T]) -> Option<usize> {
    (1..=w.len() / 2).find(|&p| (0..w.len() - p).all(|i| w[i] == w[i + p]))
}

/// Random small diagram that validates: depth 2..=max_depth, widths <= 3, in-degree <= 3.
pub fn random_diagram<R: Rng>(rng: &mut R, max_depth: usize) -> Diagram {
    loop {
        let depth = rng.gen_range(2..=max_depth);
        let mut prev = 1;
        let mut levels = Vec::new();
        for n in 1..=depth {
            let w = rng.gen_range(1..=3);
            let lvl: Vec<Vertex> = (0..w)
                .map(|v| {
                    let deg = if n == 1 { 1 } else { rng.gen_range(1..=3) };
                    let ins = (0..deg).map(|_| rng.gen_range(0..prev)).collect();
                    Vertex::new(format!("r{n}_{v}"), ins)
                })
                .collect();
            levels.push(lvl);
            prev = w;
        }
        let Ok(d) = Diagram::new(levels) else { continue };
        let r = validate(&d);
        if r.violations.is_empty() && r.properly_ordered_at_horizon && r.simplicity_evidence {
            return d;
        }
    }
}

/// Every root-to-level-n path.
pub fn all_paths(d: &Diagram, n: usize) -> Vec<FinitePath> {
    (0..d.width(n)).flat_map(|v| paths_into(d, n, v)).collect()
}

/// Images of the two-letter substitution on every DD-free upper word long
/// enough to cover w, counted by distinct (offset, full-block letters).
pub fn factorization_oracle(w: &str, e: &str, dimg: &str) -> usize {
    let l = e.len();
    let n = w.len();
    let mut found: Vec<(usize, Vec<(char, usize)>)> = Vec::new();
    for r in 0..l {
        let start = if r > 0 { l - r } else { 0 };
        let blocks = (n + start).div_ceil(l).max(1);
        for mask in 0u32..(1 << blocks) {
            let letters: Vec<char> = (0..blocks).map(|i| if mask >> i & 1 == 1 { 'D' } else { 'E' }).collect();
            if letters.windows(2).any(|x| x == ['D', 'D']) {
                continue;
            }
            let img: String = letters.iter().map(|&c| if c == 'E' { e } else { dimg }).collect();
            if img.len() < start + n || &img[start..start + n] != w {
                continue;
            }
            let full: Vec<(char, usize)> = letters
                .iter()
                .enumerate()
                .filter_map(|(i, &c)| {
                    let s = (i * l) as i64 - start as i64;
                    (s >= 0 && s as usize + l <= n).then_some((c, s as usize))
                })
                .collect();
            if !found.contains(&(r, full.clone())) {
                found.push((r, full));
            }
        }
    }
    found.len()
}
