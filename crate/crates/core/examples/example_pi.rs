//! The embedding of `u2^2 = u1^3 + u3` with values `(2, 3, 6+π)` through the
//! chart `<(2,3,9), (1,2,3), (2,3,10)>`, and the automorphism relating it to
//! the chart through `(3,5,9)`.

use torific::builtin::{
    example_pi_chart, example_pi_fan, example_pi_presentation, example_pi_units,
};
use torific::toric::find_sigma_w;
use torific::torific::{
    automorphism_intertwine_check, embed_in_chart, kaplansky_embed_fg, verify_embedding,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let p = example_pi_presentation();
    let cutoff = p.ctx().parse_element("10+3pi")?;
    let fan = example_pi_fan(1, 2)?;
    let e = kaplansky_embed_fg(&p, &fan, &cutoff)?;

    println!("sigma_w = {}", e.sigma_w);
    for line in e.map.display_lines() {
        println!("  {line}");
    }
    for t in &e.transforms {
        println!("strict transform: {t}");
    }
    for (i, x) in e.xi.iter().enumerate() {
        println!("xi_{} = {x}", i + 1);
    }
    let cusp = e.xi[0].pow(3)?.sub(&e.xi[1].pow(2)?)?;
    println!("xi_1^3 - xi_2^2 = {cusp}");
    println!("checks pass: {}", verify_embedding(&p, &e, 0)?.passed());

    let sigma = find_sigma_w(&fan, &p.weight_vector()?, 2)?;
    let other = embed_in_chart(&p, &example_pi_chart(3, 5)?, sigma, &cutoff)?;
    println!("second chart xi_1 = {}", other.xi[0]);
    let units = example_pi_units(1, &cutoff)?;
    let report = automorphism_intertwine_check(&e, &other, &units)?;
    println!("u(1) = 1 + t^π, u(π) = 1 intertwines: {}", report.passed());
    Ok(())
}
