//! Loads a TUDataset directory and writes a Gram matrix as CSV and in the
//! precomputed-kernel format `<class> 0:<id> 1:<v> ...` read by SVM tools.
//!
//! ```text
//! cargo run --release --example gram_export -- data/MUTAG out/
//! ```

use std::fs::{self, File};
use std::path::PathBuf;

use ncwalk::eval::normalize_gram;
use ncwalk::graph_kernel::{gram_matrix, GramOptions, GraphKernelSpec};
use ncwalk::node_kernel::Alpha;
use ncwalk::tudataset::parse_tudataset;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let dataset = PathBuf::from(args.next().unwrap_or_else(|| "data/MUTAG".into()));
    let out = PathBuf::from(args.next().unwrap_or_else(|| "gram_out".into()));
    let name = dataset.file_name().and_then(|n| n.to_str()).ok_or("bad dataset path")?.to_string();

    let c = parse_tudataset(&dataset, &name)?;
    println!("{name}: {} graphs, {} node labels", c.len(), c.dictionary.len());
    fs::create_dir_all(&out)?;

    for (tag, spec) in [
        ("ncw", GraphKernelSpec::ncw(3, Alpha::Finite(0.1), 1.0)),
        ("wl", GraphKernelSpec::wl(3)),
        ("rw", GraphKernelSpec::rw(3)),
    ] {
        let gm = normalize_gram(&gram_matrix(&c, &spec, &GramOptions::default())?)?;
        gm.write_csv(File::create(out.join(format!("{name}_{tag}.csv")))?)?;
        gm.write_precomputed(
            File::create(out.join(format!("{name}_{tag}.svm")))?,
            c.class_labels.as_deref(),
        )?;
        println!("  {tag}: wrote {0}x{0} matrix, sanity probe {1}", gm.len(), gm.passes_sanity_probe());
    }
    Ok(())
}
