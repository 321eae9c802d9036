//! What the packed panels look like, and how the kernel's shuffles finish the
//! component transpose.
//!
//!     cargo run --example packing_layout

use hgemm::gemm::{pack_a, pack_b, stage2_shuffles, BlockingConfig, KernelPath};
use hgemm::{QuatMatrix, Quaternion};

fn main() {
    let cfg = BlockingConfig::new(2, 2, 4);
    let p = Quaternion::new(1.0, 2.0, 3.0, 4.0);
    let q = Quaternion::new(5.0, 6.0, 7.0, 8.0);

    let a = QuatMatrix::from_fn(2, 1, |i, _| [p, q][i]);
    let b = QuatMatrix::from_fn(1, 2, |_, j| [p, q][j]);
    let pa = pack_a(a.view(), Quaternion::E0, &cfg);
    let pb = pack_b(b.view(), &cfg);
    println!("A = [p; q] packs to {:?}", pa.as_slice());
    println!("B = [p, q] packs to {:?}", pb.as_slice());

    for path in [KernelPath::Portable, KernelPath::Avx] {
        if !path.is_available() {
            println!("{path:?}: not available on this CPU");
            continue;
        }
        let (av, bv) = stage2_shuffles(path, [pa.as_slice()[0], pa.as_slice()[1]], [pb.as_slice()[0], pb.as_slice()[1]]);
        println!("{path:?}:");
        for (c, name) in ["w", "x", "y", "z"].iter().enumerate() {
            println!("  A^{name} = {:?}   B^{name} = {:?}", av[c].0, bv[c].0);
        }
    }

    let ragged = QuatMatrix::from_fn(3, 2, |i, k| Quaternion::new((i + 1) as f64, k as f64, 0.0, 0.0));
    let big = BlockingConfig::new(4, 2, 4);
    let padded = pack_a(ragged.view(), Quaternion::E0, &big);
    println!("a 3x2 block packs into {} slabs of {} slots; row 4 is zero padding", padded.slabs(), 2 * padded.kc());
}
