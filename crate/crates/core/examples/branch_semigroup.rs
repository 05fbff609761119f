//! The value semigroup of the branch `(t^4, t^6 + t^7)`, from its
//! characteristic exponents and by brute force.

use torific::field::Field;
use torific::group::{GroupContext, GroupElement};
use torific::semigroup::{
    branch_semigroup_from_char_exponents, branch_values_oracle, lattice_restriction_check,
    minimal_generators, Semigroup,
};
use torific::series::HahnSeries;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let formula = branch_semigroup_from_char_exponents(&[4, 6, 7])?;
    println!("from characteristic exponents: {formula}");

    let ctx = GroupContext::integers();
    let f = Field::Rationals;
    let g = |e| GroupElement::new(ctx.clone(), vec![e]);
    let cut = g(31);
    let x = HahnSeries::monomial(ctx.clone(), f, f.one(), g(4), cut.clone())?;
    let y = HahnSeries::from_terms(ctx.clone(), f, [(g(6), f.one()), (g(7), f.one())], cut)?;
    let values = branch_values_oracle(&x, &y, 8, &g(30))?;
    println!("brute force: {}", minimal_generators(&values)?);

    let small = Semigroup::numerical(&[4, 6])?.relation_lattice();
    let big = formula.relation_lattice();
    println!("relations of <4,6>: {small}");
    println!(
        "relations of <4,6,13>: {big}, saturated: {}",
        big.is_saturated()
    );
    println!(
        "restriction matches: {}",
        lattice_restriction_check(&small, &big)?
    );
    println!("Frobenius number: {:?}", formula.frobenius_number());
    Ok(())
}
