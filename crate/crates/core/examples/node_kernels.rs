//! Node-pair kernels within one graph: walk counts `k_i(u, v)` and the
//! Gaussian similarity of accumulated counts, with and without WL
//! re-encoding.

use ncwalk::generators::path;
use ncwalk::node_kernel::{node_partition_from_kernels, walk_node_kernels, Alpha, NodeKernelParams};
use ncwalk::refine::wl_refine;

fn main() -> ncwalk::Result<()> {
    let g = path(5);
    let len = 3;

    let k = walk_node_kernels(&g, &NodeKernelParams::new(len, Alpha::Finite(0.05)))?;
    println!("P5, alpha = 0.05, iteration {len}");
    println!("   u  v      k_i    k_hat");
    for (u, v, ki, kh) in k.upper_entries(len) {
        println!("  {u:>2} {v:>2} {ki:>8} {kh:>8.4}");
    }

    let exact = walk_node_kernels(&g, &NodeKernelParams::new(len, Alpha::Infinite).with_wl())?;
    let wl = wl_refine(&g, Some(len));
    for i in 0..=len {
        let ours = node_partition_from_kernels(&exact, i)?;
        let reference = &wl.steps[i.min(wl.steps.len() - 1)];
        println!("iteration {i}: {:?} (wl: {:?})", ours.as_slice(), reference.as_slice());
    }
    Ok(())
}
