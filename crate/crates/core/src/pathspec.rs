//! Finite descriptions of infinite paths: an explicit prefix plus a suffix rule.
//!
//! Text form: `prefix=o1,o2,...[@vertex];suffix=<rule>` where rule is one of
//! `const:c`, `per:w` (digits, or comma separated), `min`, `max`,
//! `track:col:<i>` or `track:name:<template with {j}>`. Comma-separated words
//! may end with a comma. The suffix part may be
//! omitted, in which case the path stops at the end of its prefix.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::diagram::{Diagram, FinitePath};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Track {
    /// Stay in column i (1-based) at every level.
    Column(usize),
    /// Vertex named by the template, `{j}` replaced by the level.
    Name(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum SuffixRule {
    Const(usize),
    /// Ordinals cycle through `word`, starting at level `origin + 1`.
    Periodic { word: Vec<usize>, origin: Option<usize> },
    Min,
    Max,
    Track(Track),
    Stop,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PathSpec {
    /// 1-based ordinals for levels 1..=prefix.len().
    pub prefix: Vec<usize>,
    /// Optional vertex the prefix must end at.
    pub end: Option<String>,
    pub suffix: SuffixRule,
}

impl Serialize for PathSpec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl Serialize for SuffixRule {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl PathSpec {
    pub fn new(prefix: Vec<usize>, end: Option<&str>, suffix: SuffixRule) -> Self {
        PathSpec {
            prefix,
            end: end.map(str::to_string),
            suffix,
        }
    }

    /// Spec for an explicit finite path, pinned to its end vertex.
    pub fn from_path(d: &Diagram, p: &FinitePath, suffix: SuffixRule) -> Self {
        let suffix = match suffix {
            SuffixRule::Periodic { word, origin: None } => SuffixRule::Periodic {
                word,
                origin: Some(p.len()),
            },
            s => s,
        };
        PathSpec {
            prefix: p.ordinals_1based(),
            end: (!p.is_empty()).then(|| d.name(p.len(), p.end()).to_string()),
            suffix,
        }
    }

    fn origin(&self) -> usize {
        match &self.suffix {
            SuffixRule::Periodic { origin: Some(o), .. } => *o,
            _ => self.prefix.len(),
        }
    }

    /// Whether the edge (s at n-1) -> (t at n) with 0-based ordinal o is allowed at level n.
    fn allows(&self, d: &Diagram, n: usize, t: usize, o: usize) -> bool {
        let p = self.prefix.len();
        if n <= p {
            if self.prefix[n - 1] != o + 1 {
                return false;
            }
            if n == p {
                if let Some(e) = &self.end {
                    return d.name(n, t) == e;
                }
            }
            return true;
        }
        match &self.suffix {
            SuffixRule::Const(c) => o + 1 == *c,
            SuffixRule::Periodic { word, .. } => {
                let i = (n - 1 - self.origin()) % word.len();
                o + 1 == word[i]
            }
            SuffixRule::Min => o == 0,
            SuffixRule::Max => o + 1 == d.in_degree(n, t),
            SuffixRule::Track(Track::Column(c)) => t + 1 == *c,
            SuffixRule::Track(Track::Name(tmpl)) => d.name(n, t) == tmpl.replace("{j}", &n.to_string()),
            SuffixRule::Stop => false,
        }
    }

    fn lookahead_depth(&self, d: &Diagram) -> usize {
        match self.suffix {
            SuffixRule::Stop => self.prefix.len().min(d.depth()),
            _ => d.depth(),
        }
    }

    /// Resolves as deep as the rule picks a unique edge, looking ahead to the
    /// diagram's depth so that only continuable edges count.
    pub fn resolve_full(&self, d: &Diagram) -> Resolved {
        if let SuffixRule::Periodic { word, .. } = &self.suffix {
            if word.is_empty() || word.contains(&0) {
                return Resolved {
                    path: FinitePath::root(),
                    failure: Some(Error::BadArgument("periodic word must hold ordinals >= 1".into())),
                };
            }
        }
        if let SuffixRule::Track(Track::Column(0)) | SuffixRule::Const(0) = self.suffix {
            return Resolved {
                path: FinitePath::root(),
                failure: Some(Error::BadArgument("ordinals and columns are 1-based".into())),
            };
        }
        if self.prefix.len() > d.depth() {
            return Resolved {
                path: FinitePath::root(),
                failure: Some(Error::LevelOutOfRange(self.prefix.len())),
            };
        }
        let h = self.lookahead_depth(d);
        // good[n][v]: an allowed chain leaves (n, v) and reaches level h
        let mut good: Vec<Vec<bool>> = vec![vec![]; h + 1];
        good[h] = vec![true; d.width(h)];
        for n in (1..=h).rev() {
            let mut g = vec![false; d.width(n - 1)];
            for t in 0..d.width(n) {
                if !good[n][t] {
                    continue;
                }
                for (o, &s) in d.in_edges(n, t).iter().enumerate() {
                    if self.allows(d, n, t, o) {
                        g[s] = true;
                    }
                }
            }
            good[n - 1] = g;
        }
        let mut path = FinitePath::root();
        for n in 1..=h {
            let s = path.end();
            let mut choice = None;
            let mut count = 0;
            for t in 0..d.width(n) {
                if !good[n][t] {
                    continue;
                }
                for (o, &src) in d.in_edges(n, t).iter().enumerate() {
                    if src == s && self.allows(d, n, t, o) {
                        count += 1;
                        choice = Some((t, o));
                    }
                }
            }
            match (count, choice) {
                (1, Some((t, o))) => path.push(t, o),
                (0, _) => {
                    return Resolved {
                        path,
                        failure: Some(Error::Resolve {
                            level: n,
                            msg: "no allowed edge continues to the diagram's depth".into(),
                        }),
                    }
                }
                _ => {
                    return Resolved {
                        path,
                        failure: Some(Error::Resolve {
                            level: n,
                            msg: format!("{count} allowed edges, the rule does not pick one"),
                        }),
                    }
                }
            }
        }
        let failure = (h < d.depth()).then(|| Error::Resolve {
            level: h + 1,
            msg: "path stops at the end of its prefix".into(),
        });
        Resolved { path, failure }
    }

    /// The unique truncation to level n.
    pub fn resolve(&self, d: &Diagram, n: usize) -> Result<FinitePath> {
        if n > d.depth() {
            return Err(Error::LevelOutOfRange(n));
        }
        self.resolve_full(d).to(n)
    }
}

/// Outcome of resolving a spec: the deepest unique path and why it stops.
#[derive(Clone, Debug)]
pub struct Resolved {
    pub path: FinitePath,
    pub failure: Option<Error>,
}

impl Resolved {
    pub fn to(&self, n: usize) -> Result<FinitePath> {
        if n <= self.path.len() {
            Ok(self.path.truncate(n))
        } else {
            Err(self.failure.clone().unwrap_or(Error::LevelOutOfRange(n)))
        }
    }

    pub fn horizon(&self) -> usize {
        self.path.len()
    }
}

impl fmt::Display for SuffixRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SuffixRule::Const(c) => write!(f, "const:{c}"),
            SuffixRule::Periodic { word, .. } => {
                if word.iter().all(|&w| w < 10) {
                    let s: String = word.iter().map(|w| w.to_string()).collect();
                    write!(f, "per:{s}")
                } else {
                    // a lone number keeps a trailing comma so it is not read as digits
                    let s: Vec<String> = word.iter().map(|w| w.to_string()).collect();
                    let tail = if word.len() == 1 { "," } else { "" };
                    write!(f, "per:{}{tail}", s.join(","))
                }
            }
            SuffixRule::Min => write!(f, "min"),
            SuffixRule::Max => write!(f, "max"),
            SuffixRule::Track(Track::Column(c)) => write!(f, "track:col:{c}"),
            SuffixRule::Track(Track::Name(t)) => write!(f, "track:name:{t}"),
            SuffixRule::Stop => Ok(()),
        }
    }
}

impl fmt::Display for PathSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p: Vec<String> = self.prefix.iter().map(|o| o.to_string()).collect();
        write!(f, "prefix={}", p.join(","))?;
        if let Some(e) = &self.end {
            write!(f, "@{e}")?;
        }
        if self.suffix != SuffixRule::Stop {
            write!(f, ";suffix={}", self.suffix)?;
        }
        Ok(())
    }
}

fn perr(column: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line: 1,
        column,
        msg: msg.into(),
    }
}

fn parse_num(s: &str, col: usize) -> Result<usize> {
    s.trim().parse().map_err(|_| perr(col, format!("expected a number, found `{s}`")))
}

impl FromStr for SuffixRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "min" {
            return Ok(SuffixRule::Min);
        }
        if s == "max" {
            return Ok(SuffixRule::Max);
        }
        if let Some(c) = s.strip_prefix("const:") {
            return Ok(SuffixRule::Const(parse_num(c, 7)?));
        }
        if let Some(w) = s.strip_prefix("per:") {
            let word = if w.contains(',') {
                w.strip_suffix(',')
                    .unwrap_or(w)
                    .split(',')
                    .map(|x| parse_num(x, 5))
                    .collect::<Result<Vec<_>>>()?
            } else {
                w.chars()
                    .map(|c| c.to_digit(10).map(|x| x as usize).ok_or_else(|| perr(5, "bad digit")))
                    .collect::<Result<Vec<_>>>()?
            };
            if word.is_empty() {
                return Err(perr(5, "empty periodic word"));
            }
            return Ok(SuffixRule::Periodic { word, origin: None });
        }
        if let Some(t) = s.strip_prefix("track:") {
            let (rule, param) = t
                .split_once(':')
                .ok_or_else(|| perr(7, "track needs `<rule-name>:<param>`"))?;
            return match rule {
                "col" => Ok(SuffixRule::Track(Track::Column(parse_num(param, 11)?))),
                "name" => Ok(SuffixRule::Track(Track::Name(param.to_string()))),
                other => Err(perr(7, format!("unknown track rule `{other}`"))),
            };
        }
        Err(perr(1, format!("unknown suffix rule `{s}`")))
    }
}

impl FromStr for PathSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (pre, suf) = match s.split_once(';') {
            Some((a, b)) => (a, Some(b)),
            None => (s, None),
        };
        let body = pre
            .trim()
            .strip_prefix("prefix=")
            .ok_or_else(|| perr(1, "expected `prefix=`"))?;
        let (ords, end) = match body.split_once('@') {
            Some((a, e)) => (a, Some(e.trim().to_string())),
            None => (body, None),
        };
        let prefix = if ords.trim().is_empty() {
            vec![]
        } else {
            ords.split(',').map(|x| parse_num(x, 8)).collect::<Result<Vec<_>>>()?
        };
        if prefix.contains(&0) {
            return Err(perr(8, "ordinals are 1-based"));
        }
        let suffix = match suf {
            None => SuffixRule::Stop,
            Some(t) => {
                let col = pre.len() + 2;
                let r = t
                    .trim()
                    .strip_prefix("suffix=")
                    .ok_or_else(|| perr(col, "expected `suffix=`"))?;
                r.parse().map_err(|e| match e {
                    Error::Parse { column, msg, .. } => perr(col + 7 + column - 1, msg),
                    e => e,
                })?
            }
        };
        Ok(PathSpec { prefix, end, suffix })
    }
}
