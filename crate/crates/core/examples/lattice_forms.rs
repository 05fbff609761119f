//! Hermite and Smith normal forms of a small integer matrix.

use torific::lattice::IntMatrix;

fn main() {
    let m = IntMatrix::from_rows(3, &[[2i64, 4, 4], [-6, 6, 12], [10, -4, -16]]);
    let (h, u) = m.hnf();
    println!("HNF {:?}", h.to_rows());
    println!("U·M == H: {}", u.mul(&m) == h);
    let (d, _, _) = m.snf();
    println!(
        "SNF diagonal {:?}",
        (0..3).map(|i| d[(i, i)]).collect::<Vec<_>>()
    );
    println!(
        "left kernel of (4,6,13)^T: {:?}",
        IntMatrix::from_rows(1, &[[4i64], [6], [13]])
            .left_kernel()
            .to_rows()
    );
}
