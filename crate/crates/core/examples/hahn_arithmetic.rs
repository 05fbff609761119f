//! Truncated Hahn series with exponents in `Z + Zπ`.

use torific::field::Field;
use torific::group::GroupContext;
use torific::series::HahnSeries;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let ctx = GroupContext::integers_plus_pi();
    let f = Field::Rationals;
    let cutoff = ctx.parse_element("20")?;
    let one = HahnSeries::one(ctx.clone(), f, cutoff.clone())?;
    let t_pi = HahnSeries::monomial(
        ctx.clone(),
        f,
        f.one(),
        ctx.parse_element("pi")?,
        cutoff.clone(),
    )?;
    let t_one = HahnSeries::monomial(ctx.clone(), f, f.one(), ctx.parse_element("1")?, cutoff)?;
    let a = one.add(&t_pi)?;
    println!("a = {a}");
    println!("a^3 = {}", a.pow(3)?);
    let inv = a.inv_unit()?;
    println!(
        "1/a has {} terms below t^20, a * (1/a) = {}",
        inv.terms().len(),
        a.mul(&inv)?
    );
    let b = t_one.sub(&t_pi.pow(2)?.shift(&ctx.parse_element("-5")?)?)?;
    println!("b = {b}, valuation {}", b.valuation());
    Ok(())
}
