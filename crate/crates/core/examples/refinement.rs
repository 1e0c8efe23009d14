//! Node refinement: WL colors, Morgan's extended connectivity and walk
//! partitions on a few small graphs.

use ncwalk::generators::star;
use ncwalk::graph::LabeledGraph;
use ncwalk::refine::{morgan_ec, walk_partition, wl_refine};

fn show(name: &str, g: &LabeledGraph) -> ncwalk::Result<()> {
    println!("== {name} ({} nodes, {} edges)", g.node_count(), g.edge_count());
    let wl = wl_refine(g, None);
    for (i, step) in wl.steps.iter().enumerate() {
        println!("  wl {i}: {:?}", step.as_slice());
    }
    let ec = morgan_ec(g)?;
    println!("  morgan history: {:?}", ec.history);
    println!("  morgan final:   {:?}", ec.final_ec);
    let wp = walk_partition(g, g.node_count())?;
    println!(
        "  classes: stable wl {}, walk partition {}",
        wl.last().num_classes(),
        wp.labeling().num_classes()
    );
    Ok(())
}

fn main() -> ncwalk::Result<()> {
    let s = star(3);
    let wp = walk_partition(&s, 2)?;
    println!("K1,3 walk counts per node (lengths 0, 1, 2):");
    for (v, row) in wp.rows.iter().enumerate() {
        println!("  node {v}: {row:?}");
    }
    show("star K1,3", &s)?;

    // an 8-node graph where walk counts cannot split what WL splits
    let g = LabeledGraph::unlabeled(8, [(0, 1), (0, 3), (0, 4), (1, 2), (2, 7), (3, 6), (4, 5), (6, 7)])?;
    show("walk-count blind spot", &g)?;
    Ok(())
}
