//! Nested regular cones around the weight vector `(1, π)`.

use torific::group::GroupContext;
use torific::toric::{jacobi_perron_refine, Cone, WeightVector};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let ctx = GroupContext::integers_plus_pi();
    let w = WeightVector::new(vec![ctx.parse_element("1")?, ctx.parse_element("pi")?])?;
    let start = Cone::new(vec![vec![1, 0], vec![0, 1]])?;
    for (k, c) in jacobi_perron_refine(&start, &w, 5)?.iter().enumerate() {
        println!("step {k}: {c}");
    }
    Ok(())
}
