//! Hamilton products, conjugates, inverses and the 2x2 complex representation.
//!
//!     cargo run --example quaternion_algebra

use hgemm::{hmul, inverse, to_complex2x2, Quaternion};

fn main() {
    let basis = [("1", Quaternion::E0), ("i", Quaternion::E1), ("j", Quaternion::E2), ("k", Quaternion::E3)];
    println!("multiplication table (row * column):");
    print!("{:>4}", "");
    for (name, _) in &basis {
        print!("{name:>18}");
    }
    println!();
    for (rn, r) in &basis {
        print!("{rn:>4}");
        for (_, c) in &basis {
            print!("{:>18}", hmul(*r, *c).to_string());
        }
        println!();
    }

    let p = Quaternion::new(1.0, 2.0, 3.0, 4.0);
    let q = Quaternion::new(5.0, 6.0, 7.0, 8.0);
    println!("\np = {p}\nq = {q}");
    println!("p q = {}", p * q);
    println!("q p = {}   (not commutative)", q * p);
    println!("conj(p) = {}, |p| = {:.6}", p.conj(), p.norm());
    println!("|p q| = {:.12}, |p||q| = {:.12}", (p * q).norm(), p.norm() * q.norm());

    let pinv = inverse(p).expect("p is nonzero");
    println!("p^-1 = {pinv}\np p^-1 = {}", p * pinv);
    println!("inverse of zero: {:?}", inverse(Quaternion::ZERO));

    let chi = to_complex2x2(p);
    println!("\nchi(p) = {chi:?}");
    let prod = chi.matmul(&to_complex2x2(q));
    let (u0, u1) = (prod.get(0, 0), prod.get(0, 1));
    println!("top row of chi(p) chi(q) reads back as {}", Quaternion::new(u0.re, u0.im, u1.re, u1.im));
}
