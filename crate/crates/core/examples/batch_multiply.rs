//! Four quaternion multiply-accumulates at once in structure-of-arrays form.
//!
//!     cargo run --example batch_multiply

use hgemm::matrix::random_quaternion;
use hgemm::{batch_fmaq, hmul, QuadBatch, Quaternion};

fn main() {
    let ps: [Quaternion; 4] = std::array::from_fn(|i| random_quaternion(i as u64));
    let qs: [Quaternion; 4] = std::array::from_fn(|i| random_quaternion(10 + i as u64));
    let acc = QuadBatch::splat(Quaternion::E0);

    let out = batch_fmaq(acc, QuadBatch::from_quaternions(ps), QuadBatch::from_quaternions(qs));
    println!("lanes as components: w = {:?}", out.w);
    for (k, r) in out.to_quaternions().iter().enumerate() {
        let scalar = Quaternion::E0 + hmul(ps[k], qs[k]);
        println!("lane {k}: {r}  matches scalar: {}", r.to_array().map(f64::to_bits) == scalar.to_array().map(f64::to_bits));
    }
}
