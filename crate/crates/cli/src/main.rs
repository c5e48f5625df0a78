use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use bvtk::analysis::{class_evidence, sne_evidence, telescope_correspondence, SearchParams};
use bvtk::blocks::{basic_block, coding_by_vertices};
use bvtk::codec::{from_json, to_json};
use bvtk::dynamics::{dot_index, OrbitWindow};
use bvtk::families;
use bvtk::morphisms::{desubstitute, ptm_word, tau, tilde_reduction};
use bvtk::pairs::{depth_witness, long_cuts_report, same_k_coding_window, DepthOutcome, EvidenceKind, PairEvidence, Window};
use bvtk::render::{array, to_dot};
use bvtk::{Diagram, Error, PathSpec};
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "bvtk", version, about = "Bratteli-Vershik toolkit")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Orbit window of a path: truncations to level k, or dot indices.
    Orbit {
        #[arg(long)]
        spec: PathSpec,
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long, value_parser = parse_window, allow_hyphen_values = true)]
        window: Window,
        /// Print level-n dot indices instead of truncations.
        #[arg(long)]
        dots: Option<usize>,
        diagram: PathBuf,
    },
    /// k-basic block of a vertex.
    Blocks {
        #[command(flatten)]
        at: VertexArg,
        #[arg(long)]
        k: usize,
        diagram: PathBuf,
    },
    /// Coding of a vertex by level-j vertices.
    Coding {
        #[command(flatten)]
        at: VertexArg,
        #[arg(long)]
        j: usize,
        diagram: PathBuf,
    },
    /// Coding agreement, depth and cuts of a pair, as JSON.
    Pair {
        #[arg(long)]
        x: PathSpec,
        #[arg(long)]
        y: PathSpec,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        jmax: usize,
        #[arg(long, value_parser = parse_window, allow_hyphen_values = true)]
        window: Window,
        diagram: PathBuf,
    },
    /// Writes a family diagram as JSON.
    Family(FamilyArgs),
    #[command(subcommand)]
    Morphism(MorphismCmd),
    /// Bounded class evidence report.
    Classify {
        #[arg(long)]
        max_depth: usize,
        #[arg(long)]
        horizon: usize,
        #[arg(long)]
        window: i64,
        #[command(flatten)]
        search: SearchArgs,
        diagram: PathBuf,
    },
    /// k-equivalent candidate pairs for k <= max-k.
    Sne {
        #[arg(long)]
        max_k: usize,
        #[arg(long)]
        horizon: usize,
        #[command(flatten)]
        search: SearchArgs,
        diagram: PathBuf,
    },
    /// Depth and cut correspondence of one pair under telescoping.
    Telcheck {
        #[arg(long, value_delimiter = ',')]
        levels: Vec<usize>,
        #[arg(long, num_args = 2, value_names = ["X", "Y"])]
        pair: Vec<PathSpec>,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        j: usize,
        #[arg(long, default_value_t = 200)]
        window: i64,
        diagram: PathBuf,
    },
    Render(RenderArgs),
}

#[derive(Args)]
struct VertexArg {
    #[arg(long)]
    vertex: String,
    /// Needed only when the name occurs at several levels.
    #[arg(long)]
    level: Option<usize>,
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long)]
    prefix_bound: Option<usize>,
    #[arg(long)]
    min_window: Option<u64>,
    #[arg(long)]
    max_pairs: Option<usize>,
    #[arg(long)]
    keep: Option<usize>,
}

#[derive(Args)]
struct FamilyArgs {
    #[arg(value_parser = ["gj", "gj-mod", "odometer", "fig1", "dm2ww", "kite", "kite-det"])]
    name: String,
    #[arg(long)]
    levels: Option<usize>,
    /// Odometer with one vertex per level.
    #[arg(long, value_delimiter = ',')]
    radices: Vec<usize>,
    /// Vertex counts per level (odometer), or the width profile (kite-det).
    #[arg(long, value_delimiter = ',')]
    counts: Vec<usize>,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum MorphismCmd {
    /// Prefix of the Thue-Morse word.
    Ptm {
        #[arg(long)]
        length: usize,
    },
    /// Images of tau_j, or tau_j applied to a word.
    Tau {
        #[arg(long)]
        j: usize,
        #[arg(long)]
        apply: Option<String>,
    },
    /// Desubstitution of a D/E word under tau_j.
    Desub {
        #[arg(long)]
        j: usize,
        word: String,
    },
    /// Tilde reduction of C_{n-1}(v(n,1)) in a gj diagram.
    Tilde {
        #[arg(long)]
        n: usize,
        diagram: PathBuf,
    },
}

#[derive(Args)]
struct RenderArgs {
    /// Graphviz output for the diagram.
    #[arg(long, conflicts_with = "array", required_unless_present = "array")]
    dot: bool,
    /// Boundary grid of a path's orbit.
    #[arg(long, requires = "spec")]
    array: bool,
    #[arg(long)]
    spec: Option<PathSpec>,
    #[arg(long, default_value_t = 3)]
    rows: usize,
    #[arg(long, value_parser = parse_window, allow_hyphen_values = true, default_value = "-20..20")]
    window: Window,
    diagram: PathBuf,
}

fn parse_window(s: &str) -> Result<Window, String> {
    let (a, b) = s.split_once("..").ok_or("expected a..b")?;
    let lo: i64 = a.trim().parse().map_err(|e| format!("{a}: {e}"))?;
    let hi: i64 = b.trim().parse().map_err(|e| format!("{b}: {e}"))?;
    if lo > hi {
        return Err(format!("empty window {lo}..{hi}"));
    }
    Ok(Window::new(lo, hi))
}

fn load(p: &Path) -> Result<Diagram, String> {
    let text = fs::read_to_string(p).map_err(|e| format!("{}: {e}", p.display()))?;
    from_json(&text).map_err(|e| format!("{}: {e}", p.display()))
}

fn locate(d: &Diagram, at: &VertexArg) -> Result<(usize, usize), String> {
    let levels: Vec<usize> = match at.level {
        Some(n) => vec![n],
        None => (1..=d.depth()).collect(),
    };
    let hits: Vec<(usize, usize)> = levels
        .into_iter()
        .filter(|&n| n <= d.depth())
        .filter_map(|n| d.find(n, &at.vertex).map(|v| (n, v)))
        .collect();
    match hits[..] {
        [one] => Ok(one),
        [] => Err(Error::UnknownVertex(at.vertex.clone()).to_string()),
        _ => Err(format!("vertex `{}` occurs at several levels; pass --level", at.vertex)),
    }
}

fn params(d: &Diagram, k: usize, horizon: usize, window: i64, s: &SearchArgs) -> SearchParams {
    let mut p = SearchParams::new(d, k, horizon, window);
    if let Some(b) = s.prefix_bound {
        p.prefix_bound = b;
    }
    if let Some(m) = s.min_window {
        p.min_window = m;
    }
    if let Some(m) = s.max_pairs {
        p.max_pairs = m;
    }
    if let Some(m) = s.keep {
        p.keep_per_k = m;
    }
    p
}

fn json<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("report serializes")
}

fn family(a: &FamilyArgs) -> bvtk::Result<Diagram> {
    let levels = |def: usize| a.levels.unwrap_or(def);
    match a.name.as_str() {
        "gj" => families::gj(levels(6)),
        "gj-mod" => families::gj_modified(levels(6)),
        "dm2ww" => families::dm2ww(levels(7)),
        "fig1" => families::fig1_family(levels(7)),
        "kite" => families::kite_nondet_depth(levels(families::KITE_DEPTH)),
        "kite-det" => {
            let profile = if a.counts.is_empty() { vec![3, 2, 2, 1] } else { a.counts.clone() };
            families::kite_deterministic(&profile, levels(profile.len() + 4))
        }
        "odometer" => match (a.radices.is_empty(), a.counts.is_empty()) {
            (false, true) => families::odometer_single(&a.radices),
            (true, false) => families::odometer_suo(&a.counts),
            (true, true) => families::odometer_single(&families::cycle(&[2, 3], levels(6))),
            (false, false) => Err(Error::BadArgument("give --radices or --counts, not both".into())),
        },
        _ => unreachable!("clap restricts the names"),
    }
}

fn run(cli: Cli) -> Result<String, String> {
    let e = |x: Error| x.to_string();
    let out = match cli.cmd {
        Cmd::Orbit {
            spec,
            k,
            window,
            dots,
            diagram,
        } => {
            let d = load(&diagram)?;
            let w = OrbitWindow::compute(&spec, window.lo, window.hi, &d).map_err(e)?;
            let mut s = String::new();
            if let Some(n) = dots {
                if n > w.at(0).len() {
                    return Err(e(Error::LevelOutOfRange(n)));
                }
                // dot of x itself, as a cross-check
                dot_index(&spec, n, &d).map_err(e)?;
            }
            for m in w.lo..=w.hi {
                let p = w.at(m);
                let line = match dots {
                    Some(n) => p.dot(&d, n).to_string(),
                    None => {
                        if k > p.len() {
                            return Err(e(Error::LevelOutOfRange(k)));
                        }
                        p.truncate(k).display(&d).to_string()
                    }
                };
                s += &format!("{m} {line}\n");
            }
            s
        }
        Cmd::Blocks { at, k, diagram } => {
            let d = load(&diagram)?;
            let (n, v) = locate(&d, &at)?;
            basic_block(&d, n, v, k).map_err(e)?.display(&d).to_string() + "\n"
        }
        Cmd::Coding { at, j, diagram } => {
            let d = load(&diagram)?;
            let (n, v) = locate(&d, &at)?;
            coding_by_vertices(&d, n, v, j).map_err(e)?.display(&d).to_string() + "\n"
        }
        Cmd::Pair {
            x,
            y,
            k,
            jmax,
            window,
            diagram,
        } => {
            let d = load(&diagram)?;
            let mut records = Vec::new();
            if same_k_coding_window(&x, &y, k, window, &d).map_err(e)? {
                records.push(PairEvidence {
                    x: x.clone(),
                    y: y.clone(),
                    kind: EvidenceKind::SameKCoding { k, window },
                });
            }
            match depth_witness(&x, &y, jmax.max(k), window, &d).map_err(e)? {
                DepthOutcome::Witness { evidence } => records.push(evidence),
                DepthOutcome::None { reason } => eprintln!("no depth witness: {reason}"),
            }
            records.push(long_cuts_report(&x, &y, k, jmax, window, &d).map_err(e)?);
            json(&records) + "\n"
        }
        Cmd::Family(a) => {
            let d = family(&a).map_err(e)?;
            let text = to_json(&d) + "\n";
            match &a.output {
                Some(p) => {
                    fs::write(p, text).map_err(|x| format!("{}: {x}", p.display()))?;
                    String::new()
                }
                None => text,
            }
        }
        Cmd::Morphism(m) => match m {
            MorphismCmd::Ptm { length } => ptm_word(length) + "\n",
            MorphismCmd::Tau { j, apply } => {
                let t = tau(j).map_err(e)?;
                match apply {
                    Some(w) => t.apply(&w).map_err(e)? + "\n",
                    None => t.images.iter().map(|(c, w)| format!("{c} -> {w}\n")).collect(),
                }
            }
            MorphismCmd::Desub { j, word } => json(&desubstitute(&word, j).map_err(e)?) + "\n",
            MorphismCmd::Tilde { n, diagram } => tilde_reduction(&load(&diagram)?, n).map_err(e)? + "\n",
        },
        Cmd::Classify {
            max_depth,
            horizon,
            window,
            search,
            diagram,
        } => {
            let d = load(&diagram)?;
            let p = params(&d, max_depth, horizon, window, &search);
            json(&class_evidence(&d, &p).map_err(e)?) + "\n"
        }
        Cmd::Sne {
            max_k,
            horizon,
            search,
            diagram,
        } => {
            let d = load(&diagram)?;
            let p = params(&d, max_k, horizon, 1, &search);
            json(&sne_evidence(&d, &p).map_err(e)?) + "\n"
        }
        Cmd::Telcheck {
            levels,
            pair,
            k,
            j,
            window,
            diagram,
        } => {
            let d = load(&diagram)?;
            let (px, py) = (pair[0].resolve(&d, d.depth()).map_err(e)?, pair[1].resolve(&d, d.depth()).map_err(e)?);
            let r = telescope_correspondence(&d, &levels, (&px, &py), k, j, Window::symmetric(window)).map_err(e)?;
            json(&r) + "\n"
        }
        Cmd::Render(r) => {
            let d = load(&r.diagram)?;
            if r.dot {
                to_dot(&d)
            } else {
                let spec = r.spec.expect("clap requires --spec");
                array(&spec, r.rows, r.window.lo, r.window.hi, &d).map_err(e)?
            }
        }
    };
    Ok(out)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(s) => {
            print!("{s}");
            ExitCode::SUCCESS
        }
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::FAILURE
        }
    }
}
