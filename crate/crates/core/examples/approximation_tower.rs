//! Branch equations of the truncations of `x^{3/2} + x^{7/4} + x^{15/8}` and
//! the pseudo-convergence of a test element's images.

use num_rational::BigRational;
use torific::tower::{approximation_tower, PuiseuxTerm};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let terms: Vec<PuiseuxTerm> = [(3, 2), (7, 4), (15, 8)]
        .iter()
        .map(|&(p, q)| {
            PuiseuxTerm::new(
                BigRational::from_integer(1.into()),
                BigRational::new(p.into(), q.into()),
            )
        })
        .collect();
    let report = approximation_tower(&terms, 3, &BigRational::from_integer(20.into()), None)?;
    print!("{report}");
    println!("inclusions: {:?}", report.inclusions);
    Ok(())
}
