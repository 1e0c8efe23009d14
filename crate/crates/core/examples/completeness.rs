//! Completeness ratios on a deduplicated dataset: the fraction of graphs a
//! kernel tells apart from every other graph, for growing walk length.

use std::path::PathBuf;

use ncwalk::eval::{completeness_ratio, dedup_isomorphic, DEFAULT_ISOMORPHISM_BUDGET};
use ncwalk::graph_kernel::{gram_matrix, GramOptions, GraphKernelSpec};
use ncwalk::node_kernel::Alpha;
use ncwalk::tudataset::parse_tudataset;

fn main() -> ncwalk::Result<()> {
    let dataset = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/MUTAG"));
    let c = parse_tudataset(&dataset, dataset.file_name().and_then(|n| n.to_str()).unwrap_or("MUTAG"))?;
    let d = dedup_isomorphic(&c, DEFAULT_ISOMORPHISM_BUDGET);
    println!("{} graphs, {} after removing isomorphic copies", c.len(), d.collection.len());

    let opts = GramOptions::default();
    println!(" l      WL     NCW      RW");
    for len in 0..=5 {
        let ratio = |spec| -> ncwalk::Result<f64> { Ok(completeness_ratio(&gram_matrix(&d.collection, &spec, &opts)?, None)) };
        println!(
            "{len:>2}  {:.4}  {:.4}  {:.4}",
            ratio(GraphKernelSpec::wl(len))?,
            ratio(GraphKernelSpec::ncw(len, Alpha::Finite(1000.0), 0.0))?,
            ratio(GraphKernelSpec::rw(len))?,
        );
    }
    Ok(())
}
