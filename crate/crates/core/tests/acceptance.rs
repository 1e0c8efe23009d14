//! Acceptance suite: one line per criterion, nonzero exit if any fails.

use std::collections::HashMap;
use std::path::PathBuf;
use std::time::Instant;

use ncwalk::eval::{completeness_ratio, dedup_isomorphic, DEFAULT_ISOMORPHISM_BUDGET};
use ncwalk::generators::{complete, path, random_connected, random_graph, star};
use ncwalk::graph::{GraphCollection, LabeledGraph};
use ncwalk::graph_kernel::{gram_matrix, ncw_kernel, ncw_unlabeled_fast, rw_kernel, wl_subtree_kernel};
use ncwalk::node_kernel::{node_kernel_oracle_between, node_partition_from_kernels, walk_node_kernels};
use ncwalk::product::{count_walks, direct_product};
use ncwalk::refine::{
    morgan_ec, tree_root_to_leaf_sequences, unfolding_tree, walk_labels_oracle, walk_partition, wl_refine,
    Labeling, UnfoldingTree,
};
use ncwalk::walks::{common_walk_pairs, label_sequences, Budget};
use ncwalk::{parse_tudataset, Alpha, GraphKernelSpec, GramOptions, NodeKernelParams};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

type Outcome = Result<String, String>;

fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

fn mutag() -> GraphCollection {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/MUTAG");
    parse_tudataset(dir, "MUTAG").expect("MUTAG dataset")
}

fn random_labeled(rng: &mut StdRng, max_n: usize, max_labels: u32) -> LabeledGraph {
    let n = rng.random_range(1..=max_n);
    let p = rng.random_range(0.1..0.7);
    let labels = rng.random_range(1..=max_labels);
    random_graph(rng, n, p, labels)
}

fn criterion_1() -> Outcome {
    let mut rng = StdRng::seed_from_u64(1);
    let mut checked = 0;
    for pair in 0..200 {
        let g = random_labeled(&mut rng, 8, 3);
        let h = random_labeled(&mut rng, 8, 3);
        let len = rng.random_range(0..=4);
        let counts = count_walks(&direct_product(&g, &h), len);
        for i in 0..=len {
            let expected = common_walk_pairs(&g, &h, i, &mut Budget::default()).map_err(|e| e.to_string())?;
            if counts.sums[i] != expected as f64 {
                return Err(format!("pair {pair}, length {i}: product {} vs enumeration {expected}", counts.sums[i]));
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} (pair, length) counts equal"))
}

fn criterion_2() -> Outcome {
    let mut rng = StdRng::seed_from_u64(2);
    for pair in 0..200 {
        let g = random_labeled(&mut rng, 12, 3);
        let h = random_labeled(&mut rng, 12, 3);
        let len = rng.random_range(0..=5);
        let ncw = ncw_kernel(&g, &h, &GraphKernelSpec::ncw(len, Alpha::Finite(0.0), 1.0)).map_err(|e| e.to_string())?;
        let rw = rw_kernel(&g, &h, &GraphKernelSpec::rw(len)).map_err(|e| e.to_string())?;
        if !rel_close(ncw, rw, 1e-9) {
            return Err(format!("random pair {pair} (l = {len}): NCW {ncw} vs RW {rw}"));
        }
    }
    let c = mutag();
    let len = 3;
    let opts = GramOptions::default();
    let ncw = gram_matrix(&c, &GraphKernelSpec::ncw(len, Alpha::Finite(0.0), 1.0), &opts).map_err(|e| e.to_string())?;
    let rw = gram_matrix(&c, &GraphKernelSpec::rw(len), &opts).map_err(|e| e.to_string())?;
    let mut worst: f64 = 0.0;
    for ((i, j), &a) in ncw.values.indexed_iter() {
        let b = rw.get(i, j);
        worst = worst.max((a - b).abs() / a.abs().max(b.abs()).max(1.0));
    }
    if worst > 1e-9 {
        return Err(format!("MUTAG Gram relative error {worst:e}"));
    }
    Ok(format!("200 random pairs and the {0}x{0} MUTAG Gram matrix agree (max rel err {worst:e})", c.len()))
}

fn criterion_3() -> Outcome {
    let mut rng = StdRng::seed_from_u64(3);
    let len = 5;
    for graph in 0..100 {
        let g = random_labeled(&mut rng, 30, 3);
        let k = walk_node_kernels(&g, &NodeKernelParams::new(len, Alpha::Infinite).with_wl())
            .map_err(|e| e.to_string())?;
        let wl = wl_refine(&g, Some(len));
        for i in 0..=len {
            let ours = node_partition_from_kernels(&k, i).map_err(|e| e.to_string())?;
            let reference = &wl.steps[i.min(wl.steps.len() - 1)];
            if &ours != reference {
                return Err(format!("graph {graph}, iteration {i}: partitions differ"));
            }
        }
    }
    Ok("100 graphs, iterations 0..=5 match WL".into())
}

fn extended_connectivity(g: &LabeledGraph, upto: usize) -> Vec<Vec<u64>> {
    let mut ec = vec![(0..g.node_count()).map(|v| g.degree(v) as u64).collect::<Vec<_>>()];
    while ec.len() < upto {
        ec.push(g.adjacency_matvec(ec.last().unwrap()).expect("matching dimension"));
    }
    ec
}

fn criterion_4() -> Outcome {
    let mut rng = StdRng::seed_from_u64(4);
    for graph in 0..100 {
        let n = rng.random_range(1..=12);
        let p = rng.random_range(0.1..0.6);
        let g = random_graph(&mut rng, n, p, 1);
        let ec = extended_connectivity(&g, 4);
        for (idx, values) in ec.iter().enumerate() {
            let i = idx + 1;
            let oracle = walk_labels_oracle(&g, i, false, &mut Budget::default()).map_err(|e| e.to_string())?;
            if Labeling::from_values(values.iter().copied()) != oracle {
                return Err(format!("graph {graph}: ec^({i}) partition differs from walk-count partition"));
            }
        }
        let morgan = morgan_ec(&g).map_err(|e| e.to_string())?;
        let wp = walk_partition(&g, morgan.history.len()).map_err(|e| e.to_string())?;
        for (idx, values) in morgan.history.iter().enumerate() {
            if *values != wp.column(idx + 1) {
                return Err(format!("graph {graph}: ec history step {} differs from A^k 1", idx + 1));
            }
        }
    }
    Ok("100 unlabeled graphs, i = 1..=4, history equals walk-count columns".into())
}

fn criterion_5() -> Outcome {
    let mut rng = StdRng::seed_from_u64(5);
    let mut nodes = 0;
    for graph in 0..50 {
        let g = random_labeled(&mut rng, 10, 3);
        for len in 0..=3 {
            for v in 0..g.node_count() {
                let tree = unfolding_tree(&g, v, len, &mut Budget::default()).map_err(|e| e.to_string())?;
                let walks = label_sequences(&g, v, len, &mut Budget::default()).map_err(|e| e.to_string())?;
                let mut from_tree = tree_root_to_leaf_sequences(&tree);
                // an isolated root is a leaf before full depth but starts no walk of this length
                from_tree.retain(|s| s.len() == len + 1);
                if from_tree != walks {
                    return Err(format!("graph {graph}, node {v}, length {len}"));
                }
                nodes += 1;
            }
        }
    }
    Ok(format!("{nodes} (node, length) multisets equal"))
}

fn criterion_6() -> Outcome {
    let s = star(3);
    let wp = walk_partition(&s, 2).map_err(|e| e.to_string())?;
    let (w1, w2) = (wp.column(1), wp.column(2));
    if w1[0] == w1[1] || w2[0] != w2[1] {
        return Err(format!("K1,3 counts: length 1 {w1:?}, length 2 {w2:?}"));
    }
    let mut rng = StdRng::seed_from_u64(6);
    let mut tried = 0;
    for attempt in 0..200_000 {
        let n = rng.random_range(4..=8);
        let extra = rng.random_range(0.0..0.5);
        let g = random_connected(&mut rng, n, extra);
        tried += 1;
        let wl = wl_refine(&g, None).last().clone();
        let walk = walk_partition(&g, n).map_err(|e| e.to_string())?.labeling();
        if wl.refines(&walk).map_err(|e| e.to_string())? && wl.num_classes() > walk.num_classes() {
            return Ok(format!(
                "K1,3 witness holds; graph #{attempt} with {n} nodes and edges {:?} has {} WL classes vs {} walk classes",
                g.edges(),
                wl.num_classes(),
                walk.num_classes()
            ));
        }
    }
    Err(format!("no strict refinement found in {tried} connected graphs"))
}

fn criterion_7() -> Outcome {
    let c = mutag();
    let dedup = dedup_isomorphic(&c, DEFAULT_ISOMORPHISM_BUDGET);
    let d = dedup.collection;
    let opts = GramOptions::default();
    let mut rows = Vec::new();
    let mut prev: Option<(f64, f64, f64)> = None;
    for len in 0..=5 {
        let ratio = |spec: GraphKernelSpec| -> Result<f64, String> {
            Ok(completeness_ratio(&gram_matrix(&d, &spec, &opts).map_err(|e| e.to_string())?, None))
        };
        let ncw = ratio(GraphKernelSpec::ncw(len, Alpha::Finite(1000.0), 0.0))?;
        let wl = ratio(GraphKernelSpec::wl(len))?;
        let rw = ratio(GraphKernelSpec::rw(len))?;
        rows.push(format!("l={len} ncw={ncw:.4} wl={wl:.4} rw={rw:.4}"));
        if ncw != wl {
            return Err(format!("l = {len}: NCW {ncw} vs WL {wl}"));
        }
        if rw > ncw {
            return Err(format!("l = {len}: RW {rw} exceeds NCW {ncw}"));
        }
        if let Some((pn, pw, pr)) = prev {
            if ncw < pn || wl < pw || rw < pr {
                return Err(format!("ratios decrease at l = {len}: {}", rows.join("; ")));
            }
        }
        prev = Some((ncw, wl, rw));
    }
    Ok(format!(
        "{} of {} graphs kept ({} undecided); {}",
        d.len(),
        c.len(),
        dedup.undecided.len(),
        rows.join("; ")
    ))
}

fn canonical_tree(t: &UnfoldingTree) -> String {
    let mut children: Vec<String> = t.children.iter().map(canonical_tree).collect();
    children.sort();
    format!("{}({})", t.label.0, children.concat())
}

/// WL subtree kernel by counting node pairs with isomorphic unfolding trees.
fn wl_oracle(g: &LabeledGraph, h: &LabeledGraph, len: usize) -> Result<f64, String> {
    let mut total = 0.0;
    for depth in 0..=len {
        let mut hist: HashMap<String, (f64, f64)> = HashMap::new();
        for (side, graph) in [g, h].into_iter().enumerate() {
            for v in 0..graph.node_count() {
                let t = unfolding_tree(graph, v, depth, &mut Budget::default()).map_err(|e| e.to_string())?;
                let e = hist.entry(canonical_tree(&t)).or_default();
                if side == 0 {
                    e.0 += 1.0;
                } else {
                    e.1 += 1.0;
                }
            }
        }
        total += hist.values().map(|(a, b)| a * b).sum::<f64>();
    }
    Ok(total)
}

/// The node-centric walk kernel by enumerating walks for every node pair.
fn ncw_oracle(g: &LabeledGraph, h: &LabeledGraph, len: usize, alpha: f64, beta: f64) -> Result<f64, String> {
    let oracle = |a: &LabeledGraph, u: usize, b: &LabeledGraph, v: usize, i: usize| {
        node_kernel_oracle_between(a, u, b, v, i, &mut Budget::default()).map_err(|e| e.to_string())
    };
    let mut total = 0.0;
    for i in 0..=len {
        for u in 0..g.node_count() {
            for v in 0..h.node_count() {
                if g.label(u) != h.label(v) {
                    continue;
                }
                let (k, kp) = oracle(g, u, h, v, i)?;
                let (_, kuu) = oracle(g, u, g, u, i)?;
                let (_, kvv) = oracle(h, v, h, v, i)?;
                let weight = if beta == 0.0 { 1.0 } else { k.powf(beta) };
                total += (-alpha * (kuu + kvv - 2.0 * kp)).exp() * weight;
            }
        }
    }
    Ok(total)
}

fn criterion_8() -> Outcome {
    let triangle = complete(3);
    let p2 = path(2);
    let p3 = path(3);
    let rw_oracle: u64 = (0..=1)
        .map(|i| common_walk_pairs(&p2, &p2, i, &mut Budget::default()).unwrap())
        .sum();
    let e = |r: ncwalk::Result<f64>| r.map_err(|e| e.to_string());
    let cases = [
        ("RW(P2,P2; l=1)", 8.0, rw_oracle as f64, e(rw_kernel(&p2, &p2, &GraphKernelSpec::rw(1)))?),
        ("WL(P3,P3; l=1)", 14.0, wl_oracle(&p3, &p3, 1)?, wl_subtree_kernel(&p3, &p3, 1)),
        (
            "NCW(K3,K3; 0,1; l=1)",
            45.0,
            ncw_oracle(&triangle, &triangle, 1, 0.0, 1.0)?,
            e(ncw_kernel(&triangle, &triangle, &GraphKernelSpec::ncw(1, Alpha::Finite(0.0), 1.0)))?,
        ),
        (
            "NCW(K3,K3; 1000,0; l=1)",
            18.0,
            ncw_oracle(&triangle, &triangle, 1, 1000.0, 0.0)?,
            e(ncw_kernel(&triangle, &triangle, &GraphKernelSpec::ncw(1, Alpha::Finite(1000.0), 0.0)))?,
        ),
    ];
    let mut report = Vec::new();
    for (name, stated, oracle, computed) in cases {
        if stated != oracle || oracle != computed {
            return Err(format!("{name}: stated {stated}, oracle {oracle}, computed {computed}"));
        }
        report.push(format!("{name} = {computed}"));
    }
    Ok(report.join(", "))
}

fn criterion_9() -> Outcome {
    let mut rng = StdRng::seed_from_u64(9);
    let mut worst: f64 = 0.0;
    for pair in 0..100 {
        let gen = |rng: &mut StdRng| {
            let n = rng.random_range(1..=15);
            let p = rng.random_range(0.05..0.6);
            random_graph(rng, n, p, 1)
        };
        let g = gen(&mut rng);
        let h = gen(&mut rng);
        let spec = GraphKernelSpec::ncw(
            rng.random_range(0..=5),
            Alpha::Finite([0.0, 0.1, 1.0, 1000.0][rng.random_range(0..4)]),
            [0.0, 0.5, 1.0, 2.0][rng.random_range(0..4)],
        );
        let fast = ncw_unlabeled_fast(&g, &h, &spec).map_err(|e| e.to_string())?;
        let slow = ncw_kernel(&g, &h, &spec).map_err(|e| e.to_string())?;
        if !rel_close(fast, slow, 1e-9) {
            return Err(format!("pair {pair} ({spec:?}): fast {fast} vs product {slow}"));
        }
        worst = worst.max((fast - slow).abs() / fast.abs().max(slow.abs()).max(1.0));
    }
    Ok(format!("100 pairs agree (max rel err {worst:e})"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("walk bijection: product walk sums equal enumerated pair counts", criterion_1),
        ("NCW(alpha=0, beta=1) equals the RW kernel", criterion_2),
        ("NCWWL with alpha=inf reproduces WL partitions", criterion_3),
        ("Morgan extended connectivity equals walk-count partitions", criterion_4),
        ("unfolding tree sequences equal walk sequences", criterion_5),
        ("walk partition does not refine; stable WL strictly refines it", criterion_6),
        ("completeness relations on deduplicated MUTAG", criterion_7),
        ("hand-value fixtures", criterion_8),
        ("unlabeled fast path equals the product computation", criterion_9),
    ];
    let mut failed = 0;
    for (idx, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS criterion {}: {name} ({secs:.1}s) [{detail}]", idx + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {}: {name} ({secs:.1}s) [{detail}]", idx + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
