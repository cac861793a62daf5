//! Desk-scale acceptance run: each criterion prints one PASS/FAIL line and
//! the process exits non-zero if any of them fails.

use std::sync::atomic::{AtomicUsize, Ordering as AtomicOrdering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use kempe_core::coloring::{is_proper, Coloring, ListAssignment};
use kempe_core::degenerate::{degree_bounded_ordering, minimal_degree_bound, list_ordering, RecolorSetting, Recolorer};
use kempe_core::delta::{delta_equalize, is_three_prism};
use kempe_core::error::KempeError;
use kempe_core::fixtures;
use kempe_core::gen;
use kempe_core::graph::Graph;
use kempe_core::kempe::{apply_move, verify_sequence, KempeMove, MoveSequence};
use kempe_core::lvm::lvm_sequence;
use kempe_core::mad::{mad_equalize, mad_oracle};
use kempe_core::oracle::{build_reconf, build_reconf_with, is_frozen, Budget, ReconfGraph};
use kempe_core::ordering::{OrderingKind, VertexOrdering};
use kempe_core::small_graphs;
use kempe_core::treewidth::{chordal_equalize, peo, tw_equalize};
use num_rational::Ratio;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

struct Verdict {
    pass: bool,
    detail: String,
}

fn first<T: std::fmt::Debug>(items: &[T]) -> String {
    items.first().map(|x| format!("first: {x:?}")).unwrap_or_default()
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict { pass, detail: detail.into() }
}

/// Coloring-index pairs to test: all of them for small classes, otherwise
/// every pair through node 0 plus `extra` random pairs.
fn sample_pairs(count: usize, extra: usize, seed: u64) -> Vec<(usize, usize)> {
    if count <= 30 {
        return (0..count).flat_map(|i| (0..count).map(move |j| (i, j))).collect();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pairs: Vec<(usize, usize)> = (0..count).flat_map(|j| [(0, j), (j, 0)]).collect();
    pairs.extend((0..extra).map(|_| (rng.gen_range(0..count), rng.gen_range(0..count))));
    pairs
}

fn criterion_1() -> Verdict {
    let start = Instant::now();
    let g = fixtures::prism();
    let rg = match build_reconf(&g, 3) {
        Ok(rg) => rg,
        Err(e) => return verdict(false, format!("oracle failed: {e}")),
    };
    let (l, r) = (fixtures::prism_frozen_left(), fixtures::prism_frozen_right());
    let frozen = is_frozen(&g, &l) && is_frozen(&g, &r);
    let distinct = rg.same_class(&l, &r) == Some(false);
    let elapsed = start.elapsed();
    verdict(
        rg.num_classes >= 2 && frozen && distinct && elapsed < Duration::from_secs(5),
        format!("classes = {}, both frozen = {frozen}, distinct classes = {distinct}, {elapsed:.2?}", rg.num_classes),
    )
}

fn criterion_2() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut violations = Vec::new();
    let mut longest = 0.0f64;
    for trial in 0..200 {
        let n = rng.gen_range(1..=12);
        let omega = rng.gen_range(1..=5);
        let (h, ord) = gen::chordal(&mut rng, n, omega);
        let clique = h.vertices().map(|v| ord.higher_degree(&h, v) + 1).max().unwrap_or(1);
        let p = clique + rng.gen_range(0..=1);
        let a = gen::random_coloring(&mut rng, &h, p, None).expect("chordal graphs are clique-colorable");
        let b = gen::random_coloring(&mut rng, &h, p, None).expect("chordal graphs are clique-colorable");
        match chordal_equalize(&h, &ord, &a, &b, p) {
            Ok(seq) => {
                let replay = verify_sequence(&h, &a, &seq, None);
                if replay.as_ref() != Ok(&b) || seq.len() > n {
                    violations.push(format!("trial {trial}: length {} for n = {n}, replay {replay:?}", seq.len()));
                }
                longest = longest.max(seq.len() as f64 / n as f64);
            }
            Err(e) => violations.push(format!("trial {trial}: {e}")),
        }
    }
    verdict(
        violations.is_empty(),
        format!("200 instances, max length/n = {longest:.2}, violations = {} {}", violations.len(), first(&violations)),
    )
}

fn criterion_3() -> Verdict {
    let graphs: Vec<Graph> = (1..=7).flat_map(small_graphs::connected_graphs).collect();
    let failures = Mutex::new(Vec::new());
    let pairs_checked = AtomicUsize::new(0);
    let climbs = AtomicUsize::new(0);
    let worst = Mutex::new(0.0f64);
    graphs.par_iter().enumerate().for_each(|(gi, g)| {
        let n = g.n();
        let (d, ord) = minimal_degree_bound(g);
        let k = d;
        let rg = match build_reconf_with(g, k, &Budget::unbounded_palette(200_000)) {
            Ok(rg) => rg,
            Err(e) => {
                failures.lock().unwrap().push(format!("graph {gi}: oracle {e}"));
                return;
            }
        };
        if rg.num_classes != 1 {
            failures.lock().unwrap().push(format!("graph {gi}: {} classes with k = d = {k}", rg.num_classes));
        }
        let rec = match Recolorer::new(g, &ord, RecolorSetting::Degree { k, d }) {
            Ok(r) => r,
            Err(e) => {
                failures.lock().unwrap().push(format!("graph {gi}: {e}"));
                return;
            }
        };
        let mut local_worst = 0.0f64;
        for (i, j) in sample_pairs(rg.nodes.len(), 300, gi as u64) {
            let (a, b) = (&rg.nodes[i], &rg.nodes[j]);
            pairs_checked.fetch_add(1, AtomicOrdering::Relaxed);
            match rec.equalize(a, b) {
                Ok(eq) => {
                    let len = eq.combined.len();
                    local_worst = local_worst.max(len as f64 / (n * n) as f64);
                    if verify_sequence(g, a, &eq.combined, None).as_ref() != Ok(b) || len > 4 * n * n {
                        failures.lock().unwrap().push(format!("graph {gi}: pair ({i},{j}) length {len}"));
                    }
                    climbs.fetch_add(eq.trace.non_decreasing_steps, AtomicOrdering::Relaxed);
                    if eq.trace.multi_bad_neighbor_branches > 0 {
                        failures.lock().unwrap().push(format!("graph {gi}: several bad neighbours at one branch"));
                    }
                }
                Err(e) => failures.lock().unwrap().push(format!("graph {gi}: pair ({i},{j}) {e}")),
            }
        }
        let mut w = worst.lock().unwrap();
        *w = w.max(local_worst);
    });
    let failures = failures.into_inner().unwrap();
    verdict(
        failures.is_empty(),
        format!(
            "{} graphs, {} pairs, max length/n^2 = {:.3} (bound 4), non-decreasing bad-vertex steps = {}, failures = {} {}",
            graphs.len(),
            pairs_checked.into_inner(),
            worst.into_inner().unwrap(),
            climbs.into_inner(),
            failures.len(),
            first(&failures)
        ),
    )
}

fn recolor_counts(g: &Graph, start: &Coloring, seq: &MoveSequence) -> Vec<usize> {
    let mut counts = vec![0; g.n()];
    let mut cur = start.clone();
    for m in &seq.moves {
        let next = apply_move(g, &cur, *m).expect("replayable");
        for v in cur.diff(&next) {
            counts[v] += 1;
        }
        cur = next;
    }
    counts
}

fn criterion_4() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut violations = Vec::new();
    let mut done = 0;
    while done < 1000 {
        let n = rng.gen_range(1..=12);
        let p = rng.gen_range(0.05..0.5);
        let g = gen::connected_gnp(&mut rng, n, p);
        let palette = g.max_degree() + 1 + rng.gen_range(0..=3);
        let slack = rng.gen_range(0..=1);
        let lists = gen::degree_lists(&mut rng, &g, palette, slack);
        let mut order: Vec<usize> = g.vertices().collect();
        order.shuffle(&mut rng);
        let ord = VertexOrdering::new(order, OrderingKind::Arbitrary).unwrap();
        let Some(col) = gen::random_coloring(&mut rng, &g, palette, Some(&lists)) else { continue };
        let v = rng.gen_range(0..n);
        let used = col.used_on(ord.higher_neighbors(&g, v).into_iter().chain([v]));
        let options: Vec<usize> = lists.list(v).iter().copied().filter(|&c| !used[c]).collect();
        let Some(&c) = options.choose(&mut rng) else { continue };
        done += 1;
        let rec = Recolorer::new(&g, &ord, RecolorSetting::List(lists.clone())).unwrap();
        match rec.target_recolor(&col, v, c) {
            Ok((out, seq)) => {
                let bound = ord.lower_degree(&g, v) + 1;
                let counts = recolor_counts(&g, &col, &seq);
                let replay = verify_sequence(&g, &col, &seq, Some(&lists));
                if seq.len() > bound || counts.iter().any(|&x| x > 1) || replay != Ok(out.clone()) || out.get(v) != c {
                    violations.push(format!("n = {n}, v = {v}: {} moves, bound {bound}, counts {counts:?}", seq.len()));
                }
            }
            Err(e) => violations.push(format!("n = {n}, v = {v}: {e}")),
        }
    }
    verdict(violations.is_empty(), format!("1000 calls, violations = {} {}", violations.len(), first(&violations)))
}

fn criterion_5() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut violations = Vec::new();
    let mut worst = 0.0f64;
    let mut runs = 0;
    let mut repairs = 0;
    for trial in 0..200 {
        let n = rng.gen_range(2..=12);
        let w = rng.gen_range(1..=3);
        let keep = rng.gen_range(0.6..=1.0);
        let (g, td) = gen::partial_ktree(&mut rng, n, w, keep);
        let width = td.width().max(1);
        let k = td.width() + 1;
        for _ in 0..3 {
            let a = gen::random_coloring(&mut rng, &g, k, None).expect("partial k-trees are (w+1)-colorable");
            let b = gen::random_coloring(&mut rng, &g, k, None).expect("partial k-trees are (w+1)-colorable");
            runs += 1;
            match tw_equalize(&g, Some(&td), &a, &b, k) {
                Ok(out) => {
                    repairs += out.fit_alpha.repairs + out.fit_beta.repairs;
                    let len = out.sequence.len();
                    worst = worst.max(len as f64 / (width * n * n) as f64);
                    let replay = verify_sequence(&g, &a, &out.sequence, None);
                    if replay.as_ref() != Ok(&b) || len > 8 * width * n * n {
                        violations.push(format!("trial {trial}: length {len}, n = {n}, width = {width}"));
                    }
                }
                Err(e) => violations.push(format!("trial {trial}: {e}")),
            }
        }
    }
    verdict(
        violations.is_empty(),
        format!("{runs} runs, max length/(width n^2) = {worst:.3} (bound 8), fill repairs = {repairs}, violations = {} {}", violations.len(), first(&violations)),
    )
}

fn criterion_6() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut violations = Vec::new();
    let mut instances = 0;
    let mut worst = 0.0f64;
    while instances < 150 {
        let k = rng.gen_range(3..=4usize);
        let n = rng.gen_range(2..=12);
        let p = rng.gen_range(0.05..0.45);
        let g = gen::connected_gnp(&mut rng, n, p);
        let mad = mad_oracle(&g).unwrap();
        if mad > Ratio::new(2 * k as i64 - 1, 2) {
            continue;
        }
        instances += 1;
        for _ in 0..3 {
            let a = gen::random_coloring(&mut rng, &g, k, None).expect("mad < k gives (k-1)-degenerate graphs");
            let b = gen::random_coloring(&mut rng, &g, k, None).expect("mad < k gives (k-1)-degenerate graphs");
            match mad_equalize(&g, k, 0.5, &a, &b) {
                Ok(out) => {
                    let t = out.layering.t() as u32;
                    let bound = (n * n) as f64 * (2.0 * (k as f64 - 1.0)).powi(t as i32) + n as f64;
                    let len = out.sequence.len();
                    worst = worst.max(len as f64 / bound);
                    let replay = verify_sequence(&g, &a, &out.sequence, None);
                    if replay.as_ref() != Ok(&b) || len as f64 > bound {
                        violations.push(format!("n = {n}, k = {k}: length {len}, bound {bound}"));
                    }
                }
                Err(e) => violations.push(format!("n = {n}, k = {k}, mad = {mad}: {e}")),
            }
        }
    }
    verdict(
        violations.is_empty(),
        format!("{instances} graphs x 3 pairs, max length/bound = {worst:.4}, violations = {} {}", violations.len(), first(&violations)),
    )
}

fn criterion_7() -> Verdict {
    let mut failures = Vec::new();
    let mut fallbacks = 0;
    let mut pairs = 0;
    let mut graphs = 0;
    for n in [4, 6, 8] {
        for g in small_graphs::connected_regular_graphs(n, 3) {
            if is_three_prism(&g) {
                continue;
            }
            graphs += 1;
            let rg = build_reconf(&g, 3).expect("small");
            if rg.num_classes > 1 {
                failures.push(format!("n = {n}: oracle found {} classes", rg.num_classes));
            }
            for a in &rg.nodes {
                for b in &rg.nodes {
                    pairs += 1;
                    match delta_equalize(&g, 3, a, b) {
                        Ok(out) => {
                            if out.is_fallback() {
                                fallbacks += 1;
                            }
                            if verify_sequence(&g, a, &out.sequence, None).as_ref() != Ok(b) {
                                failures.push(format!("n = {n}: replay mismatch"));
                            }
                        }
                        Err(e) => failures.push(format!("n = {n}: {e}")),
                    }
                }
            }
        }
    }
    verdict(
        failures.is_empty() && fallbacks == 0,
        format!("{graphs} graphs, {pairs} pairs, fallbacks = {fallbacks}, failures = {} {}", failures.len(), first(&failures)),
    )
}

type Method = fn(&Graph, usize, &Coloring, &Coloring) -> Result<MoveSequence, KempeError>;

fn run_degenerate(g: &Graph, k: usize, a: &Coloring, b: &Coloring) -> Result<MoveSequence, KempeError> {
    let (d, ord) = minimal_degree_bound(g);
    if d > k {
        return Err(KempeError::PaletteTooSmall { needed: d, k });
    }
    let ord = degree_bounded_ordering(g, d).unwrap_or(ord);
    Ok(Recolorer::new(g, &ord, RecolorSetting::Degree { k, d })?.equalize(a, b)?.combined)
}

fn run_list(g: &Graph, k: usize, a: &Coloring, b: &Coloring) -> Result<MoveSequence, KempeError> {
    let lists = ListAssignment::full(g.n(), k);
    let ord = list_ordering(g, &lists)?;
    Ok(Recolorer::new(g, &ord, RecolorSetting::List(lists))?.equalize(a, b)?.combined)
}

fn run_chordal(g: &Graph, k: usize, a: &Coloring, b: &Coloring) -> Result<MoveSequence, KempeError> {
    let ord = peo(g)?;
    chordal_equalize(g, &ord, a, b, k)
}

const METHODS: [(&str, Method); 7] = [
    ("lvm", |g, k, a, b| lvm_sequence(g, a, b, k)),
    ("degenerate", run_degenerate),
    ("list", run_list),
    ("mad", |g, k, a, b| Ok(mad_equalize(g, k, 0.5, a, b)?.sequence)),
    ("treewidth", |g, k, a, b| Ok(tw_equalize(g, None, a, b, k)?.sequence)),
    ("delta", |g, k, a, b| Ok(delta_equalize(g, k, a, b)?.sequence)),
    ("chordal", run_chordal),
];

fn check_against_oracle(g: &Graph, k: usize, rg: &ReconfGraph, seed: u64, emitted: &AtomicUsize) -> Vec<String> {
    let mut problems = Vec::new();
    let mut distances: Vec<Option<Vec<usize>>> = vec![None; rg.nodes.len()];
    for (i, j) in sample_pairs(rg.nodes.len(), 60, seed) {
        let (a, b) = (&rg.nodes[i], &rg.nodes[j]);
        let dist = distances[i].get_or_insert_with(|| rg.distances_from(i))[j];
        for (name, method) in METHODS {
            match method(g, k, a, b) {
                Ok(seq) => {
                    emitted.fetch_add(1, AtomicOrdering::Relaxed);
                    let ok = verify_sequence(g, a, &seq, None).as_ref() == Ok(b);
                    if !ok || dist == usize::MAX || seq.len() < dist {
                        problems.push(format!("{name} on n = {}, k = {k}: length {} vs distance {dist}", g.n(), seq.len()));
                    }
                }
                Err(e) if e.is_precondition() => {}
                Err(e) => problems.push(format!("{name} on n = {}, k = {k}: {e}", g.n())),
            }
        }
    }
    problems
}

fn criterion_8() -> Verdict {
    let graphs: Vec<Graph> = (1..=6).flat_map(small_graphs::all_graphs).collect();
    let emitted = AtomicUsize::new(0);
    let problems: Vec<String> = graphs
        .par_iter()
        .enumerate()
        .flat_map_iter(|(gi, g)| {
            let emitted = &emitted;
            (1..=3).flat_map(move |k| {
                let rg = build_reconf(g, k).expect("small");
                check_against_oracle(g, k, &rg, (gi * 4 + k) as u64, emitted)
            })
        })
        .collect();
    verdict(
        problems.is_empty(),
        format!("{} graphs, k <= 3, {} sequences checked, problems = {} {}", graphs.len(), emitted.into_inner(), problems.len(), first(&problems)),
    )
}

fn criterion_9() -> Verdict {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut failures = 0;
    let mut trials = 0;
    while trials < 10_000 {
        let n = rng.gen_range(1..=12);
        let p = rng.gen_range(0.1..0.6);
        let g = gen::gnp(&mut rng, n, p);
        let k = g.max_degree() + 1 + rng.gen_range(0..=1);
        let Some(col) = gen::random_coloring(&mut rng, &g, k, None) else { continue };
        if k < 2 {
            continue;
        }
        trials += 1;
        let v = rng.gen_range(0..n);
        let mut c = rng.gen_range(1..=k);
        if c == col.get(v) {
            c = c % k + 1;
        }
        let once = apply_move(&g, &col, KempeMove::new(v, c)).expect("valid move");
        let twice = apply_move(&g, &once, KempeMove::new(v, col.get(v))).expect("valid move");
        if !is_proper(&g, &once, None) || twice != col || once.get(v) != c {
            failures += 1;
        }
    }
    let elapsed = start.elapsed();
    verdict(failures == 0 && elapsed < Duration::from_secs(10), format!("{trials} trials, failures = {failures}, {elapsed:.2?}"))
}

fn main() {
    let criteria: [(&str, fn() -> Verdict); 9] = [
        ("3-prism obstruction", criterion_1),
        ("chordal bound", criterion_2),
        ("degree mode exhaustive", criterion_3),
        ("list mode per-call bound", criterion_4),
        ("bounded treewidth", criterion_5),
        ("bounded mad", criterion_6),
        ("cubic graphs", criterion_7),
        ("oracle consistency", criterion_8),
        ("chain involution and properness", criterion_9),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let v = run();
        println!(
            "criterion {} ({name}): {}  {} [{:.2?}]",
            i + 1,
            if v.pass { "PASS" } else { "FAIL" },
            v.detail,
            start.elapsed()
        );
        if !v.pass {
            failed += 1;
        }
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
