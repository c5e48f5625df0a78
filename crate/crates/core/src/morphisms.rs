//! Substitutions on small alphabets: the tau family, Thue-Morse words, the
//! tilde reduction of gj codings, periodicity and desubstitution.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::blocks::prefix_function;
use crate::diagram::{vertex_coding, Diagram};
use crate::error::{Error, Result};
use crate::families::gj_name;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Morphism {
    pub images: BTreeMap<char, String>,
}

impl Morphism {
    pub fn new(pairs: &[(char, &str)]) -> Result<Morphism> {
        if pairs.iter().any(|(_, w)| w.is_empty()) {
            return Err(Error::BadArgument("images must be nonempty".into()));
        }
        Ok(Morphism {
            images: pairs.iter().map(|&(c, w)| (c, w.to_string())).collect(),
        })
    }

    pub fn apply(&self, w: &str) -> Result<String> {
        let mut out = String::new();
        for c in w.chars() {
            out.push_str(self.images.get(&c).ok_or_else(|| Error::UnknownLetter(c.to_string()))?);
        }
        Ok(out)
    }

    /// self after other: w -> self(other(w)).
    pub fn compose(&self, other: &Morphism) -> Result<Morphism> {
        let mut images = BTreeMap::new();
        for (&c, w) in &other.images {
            images.insert(c, self.apply(w)?);
        }
        Ok(Morphism { images })
    }
}

/// tau_j: E -> E E D E^{2j-5}, D -> E D E^{2j-4}.
pub fn tau(j: usize) -> Result<Morphism> {
    if j < 3 {
        return Err(Error::BadArgument("tau_j needs j >= 3".into()));
    }
    let e = format!("EED{}", "E".repeat(2 * j - 5));
    let d = format!("ED{}", "E".repeat(2 * j - 4));
    Morphism::new(&[('E', &e), ('D', &d)])
}

pub fn apply(m: &Morphism, w: &str) -> Result<String> {
    m.apply(w)
}

/// Maps a word of level-j gj vertices to {D, E}: v(j, 3) -> D, all else -> E.
pub fn phi_factor(d: &Diagram, j: usize, w: &[usize]) -> Result<String> {
    if j < 2 || j > d.depth() {
        return Err(Error::LevelOutOfRange(j));
    }
    let three = d.find(j, &gj_name(j, 3));
    Ok(w.iter().map(|&v| if Some(v) == three { 'D' } else { 'E' }).collect())
}

/// Prefix of length l of the fixed point of a -> ab, b -> ba.
pub fn ptm_word(l: usize) -> String {
    (0..l)
        .map(|i: usize| if i.count_ones() % 2 == 0 { 'a' } else { 'b' })
        .collect()
}

/// Expand-and-erase pipeline from C_{n-1}(v(n,1)) down to level 2: symbols
/// v(j,2), v(j,3) are kept (as a, b), everything else becomes 0 and expands
/// to a run of 0s of the same length.
pub fn tilde_reduction(d: &Diagram, n: usize) -> Result<String> {
    if n < 3 || n > d.depth() {
        return Err(Error::BadArgument(format!("tilde reduction needs 3 <= n <= depth, got {n}")));
    }
    let col = |j: usize, i: usize| d.find(j, &gj_name(j, i));
    let v1 = col(n, 1).ok_or_else(|| Error::UnknownVertex(gj_name(n, 1)))?;
    // Some(v) keeps vertex v at the current level, None is a 0
    let keep = |j: usize, v: usize| Some(v) == col(j, 2) || Some(v) == col(j, 3);
    let mut cur: Vec<Option<usize>> = d
        .in_edges(n, v1)
        .iter()
        .map(|&v| keep(n - 1, v).then_some(v))
        .collect();
    for j in (3..n).rev() {
        let zeros = d.in_degree(j, 0);
        let mut next = Vec::with_capacity(cur.len() * zeros);
        for s in &cur {
            match s {
                Some(v) => next.extend(d.in_edges(j, *v).iter().map(|&u| keep(j - 1, u).then_some(u))),
                None => next.extend(std::iter::repeat(None).take(zeros)),
            }
        }
        cur = next;
    }
    let a = col(2, 2);
    Ok(cur
        .iter()
        .map(|s| match s {
            None => '0',
            Some(v) if Some(*v) == a => 'a',
            Some(_) => 'b',
        })
        .collect())
}

/// C_2(v(n,1)) of a gj-like diagram (all level-j in-degrees equal).
pub fn gj_level2_coding(d: &Diagram, n: usize) -> Result<Vec<usize>> {
    let v1 = d.find(n, &gj_name(n, 1)).ok_or_else(|| Error::UnknownVertex(gj_name(n, 1)))?;
    Ok(vertex_coding(d, 2, n, v1))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PowerForm<T> {
    pub period: Vec<T>,
    pub exponent: usize,
    pub tail: Vec<T>,
}

/// w = P^k Q with k >= 2, Q a proper prefix of P, |P| minimal; None if no such form.
pub fn power_form<T: PartialEq + Clone>(w: &[T]) -> Option<PowerForm<T>> {
    let n = w.len();
    if n < 2 {
        return None;
    }
    let pi = prefix_function(w);
    let p = n - pi[n - 1];
    if 2 * p > n {
        return None;
    }
    let k = n / p;
    Some(PowerForm {
        period: w[..p].to_vec(),
        exponent: k,
        tail: w[k * p..].to_vec(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum ParseResult {
    /// Upper letters of the blocks lying wholly inside the word, with start indices.
    Unique { offset: usize, factorization: Vec<(char, usize)> },
    Ambiguous { count: usize },
    NoParse,
}

fn check_de(w: &str) -> Result<()> {
    match w.chars().find(|&c| c != 'D' && c != 'E') {
        Some(c) => Err(Error::UnknownLetter(c.to_string())),
        None => Ok(()),
    }
}

/// All ways to cut w into tau_j images (partial blocks allowed at both ends),
/// with no two adjacent upper D letters. Each is (offset, full-block letters).
pub fn factorizations(w: &str, j: usize) -> Result<Vec<(usize, Vec<(char, usize)>)>> {
    check_de(w)?;
    let m = tau(j)?;
    let e = m.images[&'E'].as_bytes().to_vec();
    let dd = m.images[&'D'].as_bytes().to_vec();
    let l = e.len();
    let w = w.as_bytes();
    let n = w.len();
    let mut out = Vec::new();
    for r in 0..l {
        // blocks start at r + i*l (and r - l for the partial head when r > 0)
        let mut starts: Vec<isize> = Vec::new();
        let mut s = r as isize - if r > 0 { l as isize } else { 0 };
        while (s as usize) < n || s < 0 {
            starts.push(s);
            s += l as isize;
        }
        // candidate letters per block
        let mut options: Vec<Vec<char>> = Vec::new();
        for &s in &starts {
            let mut opts = Vec::new();
            for (c, img) in [('E', &e), ('D', &dd)] {
                let ok = (0..l).all(|t| {
                    let i = s + t as isize;
                    i < 0 || i as usize >= n || w[i as usize] == img[t]
                });
                if ok {
                    opts.push(c);
                }
            }
            options.push(opts);
        }
        if options.iter().any(|o| o.is_empty()) {
            continue;
        }
        let full: Vec<bool> = starts.iter().map(|&s| s >= 0 && s as usize + l <= n).collect();
        // enumerate assignments avoiding DD; partial blocks are existential
        let mut partial_seqs: Vec<Vec<char>> = vec![vec![]];
        for (b, opts) in options.iter().enumerate() {
            let mut next = Vec::new();
            for seq in &partial_seqs {
                for &c in opts {
                    if c == 'D' && seq.last() == Some(&'D') {
                        continue;
                    }
                    let mut s2 = seq.clone();
                    s2.push(c);
                    next.push(s2);
                }
            }
            partial_seqs = next;
            let _ = b;
        }
        let mut seen: Vec<Vec<(char, usize)>> = Vec::new();
        for seq in partial_seqs {
            let f: Vec<(char, usize)> = seq
                .iter()
                .zip(&starts)
                .zip(&full)
                .filter(|(_, &f)| f)
                .map(|((&c, &s), _)| (c, s as usize))
                .collect();
            if !seen.contains(&f) {
                seen.push(f);
            }
        }
        for f in seen {
            out.push((r, f));
        }
    }
    Ok(out)
}

/// Desubstitution of w for tau_j: anchored on blocks D E^q D with
/// q in {2j-3, 2j-4, 2j-2}, cross-checked against the full enumeration.
pub fn desubstitute(w: &str, j: usize) -> Result<ParseResult> {
    check_de(w)?;
    let l = 2 * j - 2;
    let m = tau(j)?;
    let all = factorizations(w, j)?;
    let anchored = anchor_offset(w, l);
    match (anchored, all.len()) {
        (_, 0) => Ok(ParseResult::NoParse),
        (Some(r), 1) if all[0].0 == r => Ok(ParseResult::Unique {
            offset: r,
            factorization: all[0].1.clone(),
        }),
        (None, 1) => Ok(ParseResult::Unique {
            offset: all[0].0,
            factorization: all[0].1.clone(),
        }),
        (Some(_), 1) => Err(Error::Invalid(format!(
            "anchor and enumeration disagree on the alignment of {w} under {:?}",
            m.images
        ))),
        (_, c) => Ok(ParseResult::Ambiguous { count: c }),
    }
}

/// Offset (mod l) forced by the first D E^q D anchor, if any.
fn anchor_offset(w: &str, l: usize) -> Option<usize> {
    let ds: Vec<usize> = w.char_indices().filter(|&(_, c)| c == 'D').map(|(i, _)| i).collect();
    for p in ds.windows(2) {
        let q = p[1] - p[0] - 1;
        // D at index 2 of an E image, or index 1 of a D image
        let pos_in_block = if q == l - 1 || q == l - 2 {
            2
        } else if q == l {
            1
        } else {
            continue;
        };
        return Some((p[0] + l - pos_in_block) % l);
    }
    None
}
