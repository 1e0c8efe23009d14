//! Isomorphism testing and deduplication with certificates.

use ncwalk::eval::{dedup_isomorphic, find_isomorphism, IsomorphismOutcome};
use ncwalk::generators::{cycle, path};
use ncwalk::graph::{disjoint_union, GraphCollection, LabeledGraph};

fn main() -> ncwalk::Result<()> {
    let c6 = cycle(6);
    let (two_triangles, _) = disjoint_union(&cycle(3), &cycle(3));
    println!("C6 vs 2xC3: {:?}", find_isomorphism(&c6, &two_triangles, 10_000));

    let shuffled = LabeledGraph::unlabeled(4, [(2, 0), (0, 3), (3, 1)])?;
    if let IsomorphismOutcome::Isomorphic(m) = find_isomorphism(&path(4), &shuffled, 10_000) {
        println!("P4 maps onto the relabeled path via {m:?}");
    }

    let c = GraphCollection::new(vec![path(4), c6, shuffled, two_triangles, cycle(6)]);
    let d = dedup_isomorphic(&c, 10_000);
    println!("kept {:?} of {} graphs", d.kept, c.len());
    for cert in &d.certificates {
        println!("  {:?} mapping {:?} valid: {}", cert.pair, cert.mapping, cert.validate(&c));
    }
    Ok(())
}
