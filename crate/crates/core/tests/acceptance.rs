//! Acceptance checks. Runs without the libtest harness and prints one line per
//! criterion; exits nonzero if any fails.

mod common;

use std::collections::{HashMap, HashSet};
use std::time::Instant;

use bvtk::analysis::{
    candidates, k_equivalent_pairs, pair_cuts, pair_depth, search_pairs, sne_evidence,
    telescope_correspondence, u0_certificate, SearchParams,
};
use bvtk::blocks::{coding_by_vertices, dotted_basic_block, k_equivalent_vertices};
use bvtk::diagram::{paths_into, telescope, telescope_path, validate, vertex_coding, Diagram, FinitePath};
use bvtk::dynamics::{step_path, Direction};
use bvtk::families::*;
use bvtk::morphisms::{desubstitute, factorizations, gj_level2_coding, phi_factor, power_form, ptm_word, tau, tilde_reduction, ParseResult};
use bvtk::pairs::{depth_witness, find_cut, long_cuts_report, same_k_coding_window, Window};
use bvtk::pathspec::{PathSpec, SuffixRule};
use common::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e2s<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn gj_ptm_reduction() -> Outcome {
    let d = gj(8).map_err(e2s)?;
    let mut lens = Vec::new();
    for n in 4..=8 {
        let t = tilde_reduction(&d, n).map_err(e2s)?;
        let segs = vertex_coding(&d, 2, n, 0).len();
        ensure(t.len() == segs, || format!("n={n}: reduced word has {} letters, not {segs}", t.len()))?;
        let kept: String = t.chars().filter(|&c| c != '0').collect();
        ensure(kept == ptm_word(kept.len()), || format!("n={n}: erased word is not a Thue-Morse prefix"))?;
        lens.push(kept.len());
    }
    Ok(format!("kept lengths {lens:?} for n=4..8"))
}

fn aperiodicity() -> Outcome {
    let d = gj(8).map_err(e2s)?;
    for n in 4..=8 {
        let c = gj_level2_coding(&d, n).map_err(e2s)?;
        ensure(power_form(&c).is_none(), || format!("n={n}: level-2 coding has a power form"))?;
        ensure(period_oracle(&c).is_none(), || format!("n={n}: oracle finds a period"))?;
    }
    let mut rng = StdRng::seed_from_u64(7);
    let mut periodic = 0;
    for _ in 0..200 {
        let len = rng.gen_range(0..=64);
        let w: Vec<u8> = if rng.gen_bool(0.5) {
            let p = rng.gen_range(1..=6);
            let base: Vec<u8> = (0..p).map(|_| rng.gen_range(0..2)).collect();
            (0..len).map(|i| base[i % p]).collect()
        } else {
            (0..len).map(|_| rng.gen_range(0..3)).collect()
        };
        let got = power_form(&w).map(|f| f.period.len());
        let want = period_oracle(&w);
        ensure(got == want, || format!("power form {got:?} vs oracle {want:?} on {w:?}"))?;
        if let Some(f) = power_form(&w) {
            periodic += 1;
            let mut re: Vec<u8> = f.period.repeat(f.exponent);
            re.extend(&f.tail);
            ensure(re == w && f.exponent >= 2 && f.tail.len() < f.period.len(), || format!("bad power form on {w:?}"))?;
        }
    }
    Ok(format!("n=4..8 aperiodic; 200 random words agree ({periodic} periodic)"))
}

/// Equal ordinals down to `upto`; from the first level where the vertices
/// differ, the two paths sit in columns 2k and 2k+1.
fn gj_depth_rule(p: &FinitePath, q: &FinitePath, k: usize, upto: usize) -> bool {
    let Some(l) = (1..=upto).find(|&n| p.verts[n] != q.verts[n]) else {
        return false;
    };
    let mc = (l..=upto).all(|n| {
        let cols = [p.verts[n] + 1, q.verts[n] + 1];
        cols.contains(&(2 * k)) && cols.contains(&(2 * k + 1))
    });
    mc && p.ords[..upto] == q.ords[..upto]
}

fn gj_depth_characterization() -> Outcome {
    let d = gj(8).map_err(e2s)?;
    let mut notes = Vec::new();
    for k in [2, 3] {
        let (x, y) = gj_mc_pair(k);
        let r = 2 * d.dim(k + 2, 0) as i64;
        let w = Window::symmetric(r);
        ensure(same_k_coding_window(&x, &y, k, w, &d).map_err(e2s)?, || format!("k={k}: codings differ"))?;
        let out = depth_witness(&x, &y, k + 2, w, &d).map_err(e2s)?;
        ensure(out.depth() == Some(k), || format!("k={k}: depth outcome {out:?}"))?;
        let rep = long_cuts_report(&x, &y, k, 7, w, &d).map_err(e2s)?;
        ensure(rep.all_cut(), || format!("k={k}: missing cuts"))?;
    }
    notes.push("MC pairs k=2,3 ok".to_string());
    // exhaustive, both directions: depth-k witnesses among candidates are
    // exactly the candidate pairs obeying the rule
    let params = SearchParams::new(&d, 3, 7, d.dim(6, 0) as i64);
    let cands = candidates(&d, &params);
    let (_, res) = search_pairs(&d, &cands, &params);
    ensure(!res.incomplete, || "pair budget exhausted".into())?;
    let mut bad = Vec::new();
    let mut per_k = [0usize; 4];
    let mut got: HashSet<(usize, usize, usize)> = HashSet::new();
    for f in &res.found {
        per_k[f.k] += 1;
        got.insert((f.x, f.y, f.k));
        if f.k >= 2 && !gj_depth_rule(&cands[f.x].full, &cands[f.y].full, f.k, 7) {
            bad.push(format!("k={} {} / {}", f.k, cands[f.x].spec, cands[f.y].spec));
        }
    }
    let mut missed = Vec::new();
    for a in 0..cands.len() {
        for b in a + 1..cands.len() {
            for k in [2, 3] {
                if gj_depth_rule(&cands[a].full, &cands[b].full, k, 7) && !got.contains(&(a, b, k)) {
                    missed.push(format!("k={k} {} / {}", cands[a].spec, cands[b].spec));
                }
            }
        }
    }
    ensure(per_k[2] > 0 && per_k[3] > 0, || format!("search found no depth-2/3 witnesses: {per_k:?}"))?;
    ensure(bad.is_empty(), || format!("{} witnesses break the rule, e.g. {}", bad.len(), bad[0]))?;
    ensure(missed.is_empty(), || format!("{} rule pairs not found, e.g. {}", missed.len(), missed[0]))?;
    notes.push(format!(
        "{} candidates, {} pairs, {} with a short common range, witnesses by k {:?}",
        cands.len(),
        res.compared,
        res.unchecked,
        &per_k[1..]
    ));
    Ok(notes.join("; "))
}

fn recognizability() -> Outcome {
    let d = gj(8).map_err(e2s)?;
    let top = d.find(8, &gj_name(8, 1)).unwrap();
    let mut factors_checked = 0;
    let mut rng = StdRng::seed_from_u64(11);
    for j in 3..=6 {
        let lower = phi_factor(&d, j - 1, &vertex_coding(&d, j - 1, 8, top)).map_err(e2s)?;
        let l = 2 * j - 2;
        let m = tau(j).map_err(e2s)?;
        let (e, dd) = (m.images[&'E'].clone(), m.images[&'D'].clone());
        ensure(!lower.contains("DD"), || format!("j={j}: DD occurs"))?;
        let len = 3 * l;
        let mut seen = HashSet::new();
        for s in 0..=lower.len().saturating_sub(len) {
            let f = &lower[s..s + len];
            if !seen.insert(f.to_string()) {
                continue;
            }
            let r = desubstitute(f, j).map_err(e2s)?;
            ensure(matches!(r, ParseResult::Unique { .. }), || format!("j={j}: {f} parses as {r:?}"))?;
            let count = factorization_oracle(f, &e, &dd);
            ensure(count <= 1, || format!("j={j}: oracle counts {count} parses of {f}"))?;
            factors_checked += 1;
        }
        for _ in 0..100 {
            let n = rng.gen_range(3..=50);
            let mut u = String::new();
            for _ in 0..n {
                let c = if u.ends_with('D') || rng.gen_bool(0.6) { 'E' } else { 'D' };
                u.push(c);
            }
            let w = m.apply(&u).map_err(e2s)?;
            let got = factorizations(&w, j).map_err(e2s)?;
            let letters = |r: &ParseResult| match r {
                ParseResult::Unique { offset: 0, factorization } => {
                    Some(factorization.iter().map(|&(c, _)| c).collect::<String>())
                }
                _ => None,
            };
            let r = desubstitute(&w, j).map_err(e2s)?;
            ensure(letters(&r).as_deref() == Some(u.as_str()), || {
                format!("j={j}: round trip of {u} gave {r:?} ({} parses)", got.len())
            })?;
        }
    }
    Ok(format!("{factors_checked} distinct factors unique; 400 round trips"))
}

fn fig1_example() -> Outcome {
    let d = fig1_family(9).map_err(e2s)?;
    for n in (3..=9).step_by(2) {
        let a = coding_by_vertices(&d, n, 0, 1).map_err(e2s)?;
        let b = coding_by_vertices(&d, n, 1, 1).map_err(e2s)?;
        ensure(a == b, || format!("level {n}: level-1 codings differ"))?;
    }
    let (x, y) = fig1_marked_pair();
    let px = x.resolve(&d, 9).map_err(e2s)?;
    let ords: Vec<usize> = px.ordinals_1based()[3..].to_vec();
    ensure(ords == [2, 2, 1, 2, 1, 2], || format!("marked ordinals {ords:?}"))?;
    for n in 3..=4 {
        let (a, b) = (dotted_basic_block(&x, n, 1, &d).map_err(e2s)?, dotted_basic_block(&y, n, 1, &d).map_err(e2s)?);
        ensure(a == b, || format!("level {n}: dotted blocks differ"))?;
    }
    let py = y.resolve(&d, 9).map_err(e2s)?;
    let mut dots = Vec::new();
    for n in 5..=9 {
        let (a, b) = (px.dot(&d, n), py.dot(&d, n));
        ensure(a != b, || format!("level {n}: dots agree ({a})"))?;
        dots.push((a, b));
    }
    Ok(format!("codings equal at 3,5,7,9; dots at 5..9 {dots:?}"))
}

fn splitting() -> Outcome {
    let g = gj(8).map_err(e2s)?;
    let (m, splits) = gj_modified_with_splits(8).map_err(e2s)?;
    let names = |d: &Diagram, n: usize, v: usize| -> Vec<String> {
        vertex_coding(d, 1, n, v).iter().map(|&u| d.name(1, u).to_string()).collect()
    };
    for s in &splits {
        let (j, v) = (s.level, g.find(s.level, &s.name).unwrap());
        let a = m.find(j, &format!("{}'", s.name)).unwrap();
        let b = m.find(j, &format!("{}''", s.name)).unwrap();
        let (ca, cb) = (names(&m, j, a), names(&m, j, b));
        let whole = names(&g, j, v);
        let mut cat = ca.clone();
        cat.extend(cb.clone());
        ensure(cat == whole, || format!("{}: concatenation fails", s.name))?;
        ensure(ca.len() < whole.len() && whole.starts_with(&ca), || format!("{}: not a proper prefix", s.name))?;
        let right = gj_name(j, v + 2);
        let rv = m.find(j, &right).unwrap();
        let lr = vertex_coding(&m, 1, j, rv).len();
        ensure(lr > ca.len() && lr > cb.len(), || format!("{right} not longer than both parts"))?;
    }
    let rep = validate(&m);
    ensure(rep.properly_ordered_at_horizon, || format!("not properly ordered: {:?}", rep.violations))?;
    let params = SearchParams::new(&g, 2, 7, 64);
    let before = k_equivalent_pairs(&g, &params, 1).map_err(e2s)?;
    ensure(!before.is_empty(), || "no 1-equivalent pairs in the unsplit diagram".into())?;
    let mut survivors = 0;
    for (a, b) in &before {
        let (pa, pb) = (gj_modified_path(8, &a.path).map_err(e2s)?, gj_modified_path(8, &b.path).map_err(e2s)?);
        let (sa, sb) = (
            PathSpec::from_path(&m, &pa, SuffixRule::Stop),
            PathSpec::from_path(&m, &pb, SuffixRule::Stop),
        );
        if bvtk::pairs::k_equivalent_up_to(&sa, &sb, 1, 7, &m).map_err(e2s)? {
            survivors += 1;
        }
    }
    ensure(survivors == 0, || format!("{survivors} former witnesses stay 1-equivalent"))?;
    let sne = sne_evidence(&m, &SearchParams::new(&m, 2, 7, 64)).map_err(e2s)?;
    let k1 = sne.levels[0].witness_count;
    Ok(format!(
        "{} splits; {} former 1-equivalent pairs all broken; blind search k=1 finds {k1}",
        splits.len(),
        before.len()
    ))
}

fn odometers() -> Outcome {
    ensure(u0_certificate(&odometer_single(&cycle(&[2, 3], 8)).map_err(e2s)?).is_some(), || {
        "no certificate for the single-vertex odometer".into()
    })?;
    let mut notes = Vec::new();
    for k in 1..=3 {
        let n = k + 6;
        let d = odometer_suo(&cycle(&[2, 3], n)).map_err(e2s)?;
        ensure(u0_certificate(&d).is_none(), || "certificate on a multi-vertex odometer".into())?;
        let (x, y) = suo_pair(k);
        let (px, py) = (x.resolve(&d, n).map_err(e2s)?, y.resolve(&d, n).map_err(e2s)?);
        let big = 3 * d.dim(k + 2, 0) as i64;
        let w = Window::symmetric(big);
        let (depth, _, win) = pair_depth(&d, &px, &py, w).ok_or("no depth")?;
        ensure(depth == k && win.len() >= big as u64, || format!("k={k}: depth {depth} on {win:?}"))?;
        let cuts = pair_cuts(&d, &px, &py, k + 2, w);
        ensure(cuts[k + 1].map(|c| c.0) == Some(0), || format!("k={k}: k+1 cut {:?}", cuts[k + 1]))?;
        ensure(cuts[k + 2].is_none(), || format!("k={k}: unexpected k+2 cut {:?}", cuts[k + 2]))?;
        let (mut a, mut b) = (px.clone(), py.clone());
        let mut sampled = 1;
        ensure(a.verts[k + 1] != b.verts[k + 1], || "diverge at 0".into())?;
        for dir in [Direction::Succ, Direction::Pred] {
            a = px.clone();
            b = py.clone();
            for _ in 0..big {
                if step_path(&d, &mut a, dir).is_err() || step_path(&d, &mut b, dir).is_err() {
                    break;
                }
                sampled += 1;
                ensure(a.verts[k + 1] != b.verts[k + 1], || format!("k={k}: level-{} vertices meet", k + 1))?;
            }
        }
        notes.push(format!("k={k} window {} sampled {sampled}", win.len()));
    }
    Ok(notes.join(", "))
}

fn kite() -> Outcome {
    let d = kite_nondet().map_err(e2s)?;
    let [x, x1, _] = kite_marked();
    let cut = find_cut(&x, &x1, 2, Window::new(0, 16), &d).map_err(e2s)?;
    ensure(cut.as_ref().map(|c| c.m) == Some(0), || format!("2 cut {cut:?}"))?;
    let mut params = SearchParams::new(&d, 2, KITE_DEPTH, 64);
    params.min_window = 16;
    params.rules = vec![
        SuffixRule::Min,
        SuffixRule::Max,
        SuffixRule::Const(1),
        SuffixRule::Const(2),
        SuffixRule::Periodic { word: vec![1, 2], origin: None },
        SuffixRule::Periodic { word: vec![2, 1], origin: None },
    ];
    let cands = candidates(&d, &params);
    let at4: HashSet<FinitePath> = cands.iter().map(|c| c.path.truncate(4)).collect();
    let all4: usize = (0..d.width(4)).map(|v| paths_into(&d, 4, v).len()).sum();
    ensure(at4.len() == all4, || format!("{} of {all4} level-4 paths covered", at4.len()))?;
    let (_, res) = search_pairs(&d, &cands, &params);
    ensure(!res.incomplete, || "pair budget exhausted".into())?;
    ensure(res.found.is_empty(), || {
        let f = &res.found[0];
        format!("depth-{} witness {} / {}", f.k, cands[f.x].spec, cands[f.y].spec)
    })?;
    Ok(format!(
        "2 cut at m=0; {} candidates, {} pairs, no depth-1/2 witness ({} pairs share under 16 times)",
        cands.len(),
        res.compared,
        res.unchecked
    ))
}

fn telescoping() -> Outcome {
    let mut rng = StdRng::seed_from_u64(2024);
    let mut done = 0;
    let mut tries = 0;
    while done < 100 {
        tries += 1;
        if tries > 20_000 {
            return Err(format!("only {done} instances after {tries} draws"));
        }
        let d = random_diagram(&mut rng, 5);
        let n = d.depth();
        let mut levels = vec![0];
        for l in 1..n {
            if rng.gen_bool(0.5) {
                levels.push(l);
            }
        }
        levels.push(n);
        let paths = all_paths(&d, n);
        if paths.len() < 2 {
            continue;
        }
        let a = &paths[rng.gen_range(0..paths.len())];
        let b = &paths[rng.gen_range(0..paths.len())];
        let Some(k) = depth_oracle(&d, a, b, i64::MIN, i64::MAX) else { continue };
        let js: Vec<usize> = (k + 1..=n).filter(|&j| cut_oracle(&d, a, b, j, i64::MIN, i64::MAX)).collect();
        if js.is_empty() {
            continue;
        }
        let j = js[rng.gen_range(0..js.len())];
        let w = Window::symmetric(10_000);
        let rec = telescope_correspondence(&d, &levels, (a, b), k, j, w).map_err(e2s)?;
        // independent recomputation on the telescoped diagram
        let t = telescope(&d, &levels).map_err(e2s)?;
        let (ta, tb) = (telescope_path(&d, &levels, a).map_err(e2s)?, telescope_path(&d, &levels, b).map_err(e2s)?);
        let lk = levels.iter().rposition(|&x| x <= k).unwrap();
        let lj = levels.iter().rposition(|&x| x <= j).unwrap();
        let oracle_depth = depth_oracle(&t, &ta, &tb, i64::MIN, i64::MAX);
        let oracle_cut = lj == 0 || cut_oracle(&t, &ta, &tb, lj, i64::MIN, i64::MAX);
        ensure(rec.all_pass(), || format!("parts {:?} on levels {levels:?}, k={k}, j={j}", rec.parts))?;
        ensure(oracle_depth == Some(lk) && rec.image_depth == Some(lk), || {
            format!("image depth {:?}/{oracle_depth:?}, expected {lk}", rec.image_depth)
        })?;
        ensure(oracle_cut && rec.image_cut_level == lj, || format!("image cut level {lj} missing"))?;
        ensure(rec.lifted_cut_level == levels[lj], || "lifted cut level".into())?;
        done += 1;
    }
    Ok(format!("100 instances from {tries} draws"))
}

fn dm2ww_example() -> Outcome {
    let d = dm2ww(9).map_err(e2s)?;
    let g = gj(9).map_err(e2s)?;
    for j in 2..=9 {
        let (a, b) = (d.find(j, &gj_name(j, 3)).unwrap(), g.find(j, &gj_name(j, 3)).unwrap());
        ensure(vertex_coding(&d, j - 1, j, a) == vertex_coding(&g, j - 1, j, b), || format!("C(v({j},3)) changed"))?;
    }
    let levels = [0, 2, 4, 6, 8];
    let t = telescope(&d, &levels).map_err(e2s)?;
    let mut notes = Vec::new();
    for k in [1, 3, 5] {
        let (x, y) = gj_mc_pair(k);
        let w = Window::symmetric(d.dim(k + 2, 0) as i64);
        let (px, py) = (x.resolve(&d, 9).map_err(e2s)?, y.resolve(&d, 9).map_err(e2s)?);
        let (depth, _, _) = pair_depth(&d, &px, &py, w).ok_or("no depth")?;
        ensure(depth == k, || format!("k={k}: depth {depth}"))?;
        let cuts = pair_cuts(&d, &px, &py, 8, w);
        ensure((k + 1..=8).all(|j| cuts[j].is_some()), || format!("k={k}: missing cuts"))?;
        let (tx, ty) = (telescope_path(&d, &levels, &px).map_err(e2s)?, telescope_path(&d, &levels, &py).map_err(e2s)?);
        let (td, _, _) = pair_depth(&t, &tx, &ty, w).ok_or("no telescoped depth")?;
        ensure(td == k / 2, || format!("k={k}: telescoped depth {td}"))?;
        let tc = pair_cuts(&t, &tx, &ty, 4, w);
        ensure((td + 1..=4).all(|l| tc[l].is_some()), || format!("k={k}: telescoped cuts missing"))?;
        notes.push(format!("k={k}->{td}"));
    }
    // even depths: blind search over candidates
    let params = SearchParams::new(&d, 4, 8, d.dim(6, 0) as i64);
    let cands = candidates(&d, &params);
    let (_, res) = search_pairs(&d, &cands, &params);
    ensure(!res.incomplete, || "pair budget exhausted".into())?;
    let (found, compared, unchecked) = (&res.found, res.compared, res.unchecked);
    let even: Vec<_> = found.iter().filter(|f| f.k % 2 == 0).collect();
    ensure(even.is_empty(), || {
        let f = even[0];
        format!(
            "{} even-depth witnesses, e.g. depth {} {} / {}",
            even.len(),
            f.k,
            cands[f.x].spec,
            cands[f.y].spec
        )
    })?;
    let odd: usize = found.iter().filter(|f| f.k % 2 == 1).count();
    notes.push(format!(
        "{} candidates, {compared} pairs ({unchecked} short), {odd} odd-depth witnesses, none even",
        cands.len()
    ));
    Ok(notes.join("; "))
}

fn widths() -> Outcome {
    for n in 2..=8 {
        let w = validate(&gj(n).map_err(e2s)?).width_profile;
        let want: Vec<usize> = std::iter::once(1).chain((1..=n).map(|j| 2 * j)).collect();
        ensure(w == want, || format!("gj({n}) widths {w:?}"))?;
    }
    let f = validate(&fig1_family(9).map_err(e2s)?);
    ensure(f.width_profile.iter().all(|&w| w <= 4), || format!("fig1 widths {:?}", f.width_profile))?;
    Ok("gj widths 1,2,4,..,2N for N<=8; fig1 widths <= 4".into())
}

fn families() -> Vec<(&'static str, Diagram)> {
    vec![
        ("gj(5)", gj(5).unwrap()),
        ("gj_modified(4)", gj_modified(4).unwrap()),
        ("dm2ww(6)", dm2ww(6).unwrap()),
        ("odometer_single", odometer_single(&[2, 3, 2, 3, 2]).unwrap()),
        ("odometer_suo", odometer_suo(&[2, 3, 2, 3, 2]).unwrap()),
        ("fig1(7)", fig1_family(7).unwrap()),
        ("kite(8)", kite_nondet_depth(8).unwrap()),
        ("kite_det", kite_deterministic(&[3, 2, 2, 1], 8).unwrap()),
    ]
}

fn structural_invariants() -> Outcome {
    let mut counts = [0usize; 4];
    for (name, d) in families() {
        let n = d.depth();
        // successor coherence and the dot-increment law, level by level
        for l in 1..=n {
            for v in 0..d.width(l) {
                let ps = paths_into(&d, l, v);
                for (i, p) in ps.iter().enumerate() {
                    let mut q = p.clone();
                    let r = step_path(&d, &mut q, Direction::Succ);
                    if i + 1 < ps.len() {
                        ensure(r.is_ok() && q == ps[i + 1], || format!("{name}: successor breaks at level {l}"))?;
                        ensure(q.dot(&d, l) == p.dot(&d, l) + 1, || format!("{name}: dot law at level {l}"))?;
                        counts[0] += 1;
                        counts[3] += 1;
                    } else {
                        ensure(r.is_err(), || format!("{name}: maximal path has a successor"))?;
                    }
                }
            }
        }
        // factor maps commute with taking basic blocks
        for l in 2..=n.min(5) {
            for v in 0..d.width(l) {
                for k in 1..l {
                    let b = bvtk::blocks::basic_block(&d, l, v, k).map_err(e2s)?;
                    for i in 1..k {
                        let f = bvtk::blocks::factor_block(&d, &b, i).map_err(e2s)?;
                        let direct = bvtk::blocks::basic_block(&d, l, v, i).map_err(e2s)?;
                        ensure(f == direct, || format!("{name}: factor map at ({l},{v}) k={k} i={i}"))?;
                        counts[1] += 1;
                    }
                }
            }
        }
        // k-equivalence implies cuts
        let top = n.min(5);
        let paths = all_paths(&d, top);
        for k in 1..top {
            let mut groups: HashMap<(Vec<u64>, Vec<Vec<usize>>), Vec<usize>> = HashMap::new();
            for (i, p) in paths.iter().enumerate() {
                let dots = (k + 1..=top).map(|l| p.dot(&d, l)).chain(p.letters_upto(&d, k)).collect();
                let codes = (k + 1..=top).map(|l| vertex_coding(&d, k, l, p.verts[l])).collect();
                groups.entry((dots, codes)).or_default().push(i);
            }
            for g in groups.values() {
                for a in 0..g.len().min(6) {
                    for b in a + 1..g.len().min(6) {
                        let (p, q) = (&paths[g[a]], &paths[g[b]]);
                        let equiv = (k + 1..=top).all(|l| {
                            p.dot(&d, l) == q.dot(&d, l)
                                && k_equivalent_vertices(&d, l, p.verts[l], q.verts[l], k).unwrap()
                        }) && p.truncate(k) == q.truncate(k);
                        if !equiv {
                            continue;
                        }
                        for j in k + 1..=top {
                            ensure(cut_oracle(&d, p, q, j, i64::MIN, i64::MAX), || {
                                format!("{name}: {k}-equivalent pair without a {j} cut")
                            })?;
                        }
                        counts[2] += 1;
                    }
                }
            }
        }
    }
    Ok(format!(
        "successor steps {}, factor commutations {}, k-equivalent pairs with cuts {}, dot increments {}",
        counts[0], counts[1], counts[2], counts[3]
    ))
}

fn main() {
    let criteria: Vec<(&str, fn() -> Outcome)> = vec![
        ("gj reduction to Thue-Morse", gj_ptm_reduction),
        ("aperiodic level-2 codings", aperiodicity),
        ("gj depth characterization", gj_depth_characterization),
        ("recognizability", recognizability),
        ("period-two example", fig1_example),
        ("splitting", splitting),
        ("odometers", odometers),
        ("kite", kite),
        ("telescoping correspondence", telescoping),
        ("reordered gj", dm2ww_example),
        ("width profiles", widths),
        ("structural invariants", structural_invariants),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let r = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let secs = t.elapsed().as_secs_f64();
        match r {
            Ok(msg) => println!("criterion {:>2} {name}: PASS ({msg}) [{secs:.1}s]", i + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {:>2} {name}: FAIL ({msg}) [{secs:.1}s]", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
