//! `y^p = x^{p-1}(1+y)` over `F_p` parametrized by `x = t^p/(1-t^{p-1})`,
//! and the pseudo-convergent truncations of `ζ = Σ x^{1-1/p^i}`.

use torific::builtin::artin_schreier;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for p in [2, 3] {
        let r = artin_schreier(p, 64)?;
        println!("p = {p}");
        println!("  x = {}", r.x);
        println!("  residual = {}", r.residual);
        println!("  zeta {}", r.zeta);
        println!(
            "  limits differing by x agree at prefix scale: {}",
            r.breadth_one
        );
        println!("  limits differing by x^(1-1/p) agree: {}", r.breadth_half);
    }
    Ok(())
}
