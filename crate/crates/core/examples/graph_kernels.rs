//! Every graph kernel on a handful of small graphs.

use ncwalk::generators::{complete, cycle, path, star};
use ncwalk::graph_kernel::{graph_kernel, GraphKernelSpec, KernelKind};
use ncwalk::node_kernel::Alpha;

fn main() -> ncwalk::Result<()> {
    let graphs = [("P4", path(4)), ("C4", cycle(4)), ("K1,3", star(3)), ("K3", complete(3))];
    let specs = [
        GraphKernelSpec::ncw(2, Alpha::Finite(0.0), 1.0),
        GraphKernelSpec::ncw(2, Alpha::Finite(1000.0), 0.0),
        GraphKernelSpec::ncw_wl(2, Alpha::Infinite, 0.0),
        GraphKernelSpec::rw(2),
        GraphKernelSpec::rw_weighted(vec![1.0, 0.5, 0.25]),
        GraphKernelSpec::wl(2),
        GraphKernelSpec::vl(),
        GraphKernelSpec::el(),
    ];
    for spec in &specs {
        match spec.kind {
            KernelKind::Ncw | KernelKind::NcwWl => {
                println!("{} (l = {}, alpha = {}, beta = {})", spec.kind, spec.len, spec.alpha, spec.beta)
            }
            KernelKind::Rw => println!("{} (lambda = {:?})", spec.kind, spec.lambda),
            KernelKind::Wl => println!("{} (l = {})", spec.kind, spec.len),
            _ => println!("{}", spec.kind),
        }
        print!("{:>6}", "");
        for (name, _) in &graphs {
            print!("{name:>9}");
        }
        println!();
        for (a, g) in &graphs {
            print!("{a:>6}");
            for (_, h) in &graphs {
                print!("{:>9.3}", graph_kernel(g, h, spec)?);
            }
            println!();
        }
        println!();
    }
    Ok(())
}
