//! A regular fan compatible with the relations of `<4,6,13>`, its audit, and
//! the cone `σ_w` of the weight vector.

use torific::group::{GroupContext, GroupElement};
use torific::semigroup::Semigroup;
use torific::toric::{audit_fan, find_sigma_w, regular_subdivision, Constraint, WeightVector};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let lattice = Semigroup::numerical(&[4, 6, 13])?.relation_lattice();
    let mut constraints: Vec<Constraint> = lattice
        .basis
        .iter()
        .cloned()
        .map(Constraint::Hyperplane)
        .collect();
    constraints.push(Constraint::Cone(vec![vec![4, 6, 13]]));
    let fan = regular_subdivision(3, &constraints, 500)?;
    println!(
        "{} regular cones on {} rays",
        fan.cones.len(),
        fan.rays().len()
    );
    let audit = audit_fan(&fan, &constraints)?;
    println!("audit passed: {}", audit.passed());

    let ctx = GroupContext::integers();
    let w = WeightVector::new(
        [4, 6, 13]
            .iter()
            .map(|&v| GroupElement::new(ctx.clone(), vec![v]))
            .collect(),
    )?;
    println!("sigma_w = {}", find_sigma_w(&fan, &w, 1)?);
    Ok(())
}
