//! Direct product graphs and the walk bijection: walks in `G × H` are pairs
//! of walks with equal label sequences.

use ncwalk::graph::{LabelId, LabeledGraph};
use ncwalk::product::{count_walks, direct_product};
use ncwalk::walks::{common_walk_pairs, Budget};

fn main() -> ncwalk::Result<()> {
    let (a, b) = (LabelId(0), LabelId(1));
    let g = LabeledGraph::new(vec![a, a, b, b], [(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)])?;
    let h = LabeledGraph::new(vec![a, b, a], [(0, 1), (1, 2)])?;

    let p = direct_product(&g, &h);
    println!("G x H: {} nodes, {} edges", p.node_count(), p.edge_count());
    for (idx, (u, v)) in p.pairs().enumerate() {
        let nbrs: Vec<_> = p.neighbors(idx).iter().map(|&q| p.pair(q as usize)).collect();
        println!("  ({u},{v}) -> {nbrs:?}");
    }

    let len = 4;
    let counts = count_walks(&p, len);
    println!("length  product walks  enumerated pairs");
    for i in 0..=len {
        let pairs = common_walk_pairs(&g, &h, i, &mut Budget::default())?;
        println!("{i:>6}  {:>13}  {pairs:>16}", counts.sums[i]);
    }
    Ok(())
}
