//! The worked examples shipped with the library and the CLI.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::field::{Coeff, Field};
use crate::group::{Ctx, GroupContext, GroupElement};
use crate::poly::Polynomial;
use crate::pseudo::{check_pseudo_convergent, limit_difference_check, PseudoSequence};
use crate::series::{substitute, unit_at, HahnSeries};
use crate::toric::{regular_subdivision, Cone, Constraint, Fan};
use crate::torific::{Relation, TorificPresentation};

pub const EXAMPLES: &[&str] = &["pi", "cusp", "branch-4-6-13", "artin-schreier"];

fn q(n: i64) -> Coeff {
    Coeff::from_integer(n.into())
}

/// `u2^2 - u1^3 - u3` with values `(2, 3, 6+π)`.
pub fn example_pi_presentation() -> TorificPresentation {
    let ctx = GroupContext::integers_plus_pi();
    let f = Field::Rationals;
    let g = |a, b| GroupElement::new(ctx.clone(), vec![a, b]);
    let rel = Relation {
        m: vec![0, 2, 0],
        n: vec![3, 0, 0],
        lambda: q(1),
        tail: Polynomial::monomial(3, f, vec![0, 0, 1], q(-1)),
    };
    TorificPresentation::new(ctx.clone(), f, vec![g(2, 0), g(3, 0), g(6, 1)], vec![rel])
        .expect("valid presentation")
}

/// `⟨(2,3,9), (a,b,3a), (2,3,10)⟩`, regular when `2b - 3a = 1`.
pub fn example_pi_chart(a: i64, b: i64) -> Result<Cone> {
    if 2 * b - 3 * a != 1 {
        return Err(Error::Precondition(format!(
            "need 2b - 3a = 1, got a = {a}, b = {b}"
        )));
    }
    Cone::new(vec![vec![2, 3, 9], vec![a, b, 3 * a], vec![2, 3, 10]])
}

pub fn example_pi_fan(a: i64, b: i64) -> Result<Fan> {
    Fan::from_cones(vec![example_pi_chart(a, b)?])
}

/// `u(1) = (1+t^π)^n`, `u(π) = 1`.
pub fn example_pi_units(n: u32, cutoff: &GroupElement) -> Result<Vec<HahnSeries>> {
    let ctx = cutoff.ctx().clone();
    let f = Field::Rationals;
    let one_plus = one_plus_t_pi(&ctx, cutoff)?;
    Ok(vec![
        one_plus.pow(n)?,
        HahnSeries::one(ctx, f, cutoff.clone())?,
    ])
}

fn one_plus_t_pi(ctx: &Ctx, cutoff: &GroupElement) -> Result<HahnSeries> {
    let f = Field::Rationals;
    HahnSeries::from_terms(
        ctx.clone(),
        f,
        vec![
            (ctx.zero(), q(1)),
            (GroupElement::new(ctx.clone(), vec![0, 1]), q(1)),
        ],
        cutoff.clone(),
    )
}

/// The three conditions `(1 + u(π)t^π)^{A_i} u(γ_i) t^{γ_i} = (1+t^π)^{A'_i} t^{γ_i}`
/// for the charts through `(a,b,3a)` and `(a',b',3a')`, checked below the cutoff.
pub fn example_pi_unit_equations(
    units: &[HahnSeries],
    ab: (i64, i64),
    ab2: (i64, i64),
    cutoff: &GroupElement,
) -> Result<Vec<bool>> {
    let ctx = cutoff.ctx().clone();
    let pi = GroupElement::new(ctx.clone(), vec![0, 1]);
    let one = HahnSeries::one(ctx.clone(), Field::Rationals, cutoff.clone())?;
    let base = one.add(&unit_at(units, &pi)?.shift(&pi)?)?;
    let rhs_base = one_plus_t_pi(&ctx, cutoff)?;
    let gammas = [(2, 0), (3, 0), (6, 1)];
    let a = [ab.0, ab.1, 3 * ab.0];
    let a2 = [ab2.0, ab2.1, 3 * ab2.0];
    let mut out = Vec::new();
    for i in 0..3 {
        let g = GroupElement::new(ctx.clone(), vec![gammas[i].0, gammas[i].1]);
        let lhs = base
            .pow_signed(a[i])?
            .mul(&unit_at(units, &g)?)?
            .shift(&g)?;
        let rhs = rhs_base.pow_signed(a2[i])?.shift(&g)?;
        out.push(lhs.agrees_below(&rhs, cutoff)?);
    }
    Ok(out)
}

/// `u2^2 - u1^3` with values `(2, 3)`.
pub fn cusp_presentation() -> TorificPresentation {
    let ctx = GroupContext::integers();
    let f = Field::Rationals;
    let g = |a| GroupElement::new(ctx.clone(), vec![a]);
    let rel = Relation {
        m: vec![0, 2],
        n: vec![3, 0],
        lambda: q(1),
        tail: Polynomial::zero(2, f),
    };
    TorificPresentation::new(ctx.clone(), f, vec![g(2), g(3)], vec![rel])
        .expect("valid presentation")
}

/// The branch `(t^4, t^6 + t^7)`: `u2^2 - u1^3 - u3` and `u3^2 - 4u1^5u2 - u1^7`.
pub fn branch_presentation() -> TorificPresentation {
    let ctx = GroupContext::integers();
    let f = Field::Rationals;
    let g = |a| GroupElement::new(ctx.clone(), vec![a]);
    let r1 = Relation {
        m: vec![0, 2, 0],
        n: vec![3, 0, 0],
        lambda: q(1),
        tail: Polynomial::monomial(3, f, vec![0, 0, 1], q(-1)),
    };
    let r2 = Relation {
        m: vec![0, 0, 2],
        n: vec![5, 1, 0],
        lambda: q(4),
        tail: Polynomial::monomial(3, f, vec![7, 0, 0], q(-1)),
    };
    TorificPresentation::new(ctx.clone(), f, vec![g(4), g(6), g(13)], vec![r1, r2])
        .expect("valid presentation")
}

/// Regular subdivision of the quadrant compatible with the presentation.
pub fn auto_fan(p: &TorificPresentation, max_steps: usize) -> Result<(Fan, Vec<Constraint>)> {
    let constraints = p.fan_constraints();
    let fan = regular_subdivision(p.b(), &constraints, max_steps)?;
    Ok((fan, constraints))
}

pub fn builtin_presentation(name: &str) -> Result<(TorificPresentation, Option<Fan>)> {
    match name {
        "pi" => Ok((example_pi_presentation(), Some(example_pi_fan(1, 2)?))),
        "cusp" => Ok((cusp_presentation(), None)),
        "branch-4-6-13" => Ok((branch_presentation(), None)),
        _ => Err(Error::Parse(format!(
            "unknown example {name:?}; known: {}",
            EXAMPLES.join(", ")
        ))),
    }
}

#[derive(Debug, Clone)]
pub struct ArtinSchreierReport {
    pub p: u64,
    pub x: HahnSeries,
    pub y: HahnSeries,
    /// `y^p - x^{p-1}(1+y)` after substitution.
    pub residual: HahnSeries,
    /// Truncations of `ζ = Σ x^{1-1/p^i}`, exponents in `ℤ[1/p^6]`.
    pub zeta: PseudoSequence,
    /// Two limits differing by `x` are equivalent at prefix scale.
    pub breadth_one: bool,
    /// Two limits differing by `x^{1-1/p}`, the first gauge, are not.
    pub breadth_half: bool,
}

impl ArtinSchreierReport {
    pub fn passed(&self) -> bool {
        self.residual.is_zero() && self.breadth_one && !self.breadth_half
    }
}

pub const ZETA_DEPTH: u32 = 6;

/// `x = t^p/(1-t^{p-1})`, `y = t^{p-1}/(1-t^{p-1})` over `F_p`, below `t^cutoff`.
pub fn artin_schreier(p: u64, cutoff: i64) -> Result<ArtinSchreierReport> {
    let field = Field::prime(p)?;
    let ctx = GroupContext::integers();
    let cut = GroupElement::new(ctx.clone(), vec![cutoff]);
    let pi = p as i64;
    let mono = |e: i64, c: i64| {
        HahnSeries::monomial(
            ctx.clone(),
            field,
            field.from_i64(c),
            GroupElement::new(ctx.clone(), vec![e]),
            cut.clone(),
        )
    };
    let denom = mono(0, 1)?.sub(&mono(pi - 1, 1)?)?.inv_unit()?;
    let x = mono(pi, 1)?.mul(&denom)?;
    let y = mono(pi - 1, 1)?.mul(&denom)?;
    let eq = Polynomial::var(2, field, 1).pow(p as u32).sub(
        &Polynomial::var(2, field, 0)
            .pow(p as u32 - 1)
            .mul(&Polynomial::one(2, field).add(&Polynomial::var(2, field, 1))),
    );
    let residual = substitute(&eq, &[x.clone(), y.clone()])?;

    let scale = pi.pow(ZETA_DEPTH);
    let zctx = GroupContext::rational(BigRational::new(BigInt::from(1), BigInt::from(scale)));
    let zcut = GroupElement::new(zctx.clone(), vec![4 * scale]);
    let zterm = |i: u32| {
        (
            GroupElement::new(zctx.clone(), vec![scale - scale / pi.pow(i)]),
            field.one(),
        )
    };
    let partial =
        |k: u32| HahnSeries::from_terms(zctx.clone(), field, (1..=k).map(zterm), zcut.clone());
    let entries = (0..=ZETA_DEPTH).map(partial).collect::<Result<Vec<_>>>()?;
    let zeta = check_pseudo_convergent(entries)?;
    let z = partial(ZETA_DEPTH)?;
    let bump = |num: i64| {
        HahnSeries::monomial(
            zctx.clone(),
            field,
            field.one(),
            GroupElement::new(zctx.clone(), vec![num]),
            zcut.clone(),
        )
    };
    let breadth_one = limit_difference_check(&z, &z.add(&bump(scale)?)?, &zeta)?;
    let breadth_half = limit_difference_check(&z, &z.add(&bump(scale - scale / pi)?)?, &zeta)?;
    Ok(ArtinSchreierReport {
        p,
        x,
        y,
        residual,
        zeta,
        breadth_one,
        breadth_half,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::toric::{audit_fan, find_sigma_w};
    use crate::torific::{
        automorphism_intertwine_check, embed_in_chart, kaplansky_embed_fg, verify_embedding,
    };

    #[test]
    fn artin_schreier_residual_vanishes() {
        for p in [2, 3] {
            let r = artin_schreier(p, 64).unwrap();
            assert!(r.residual.is_zero(), "p = {p}: {}", r.residual);
            assert!(r.passed());
            let last = r.zeta.last_gauge().rational_value().unwrap();
            let expected = BigRational::new(BigInt::from(p.pow(6) - 1), BigInt::from(p.pow(6)));
            assert_eq!(last, expected);
        }
    }

    #[test]
    fn artin_schreier_wrong_equation_is_nonzero() {
        // negative control: y^p - x^{p-1} alone does not vanish
        let r = artin_schreier(2, 64).unwrap();
        let f = Field::prime(2).unwrap();
        let eq = Polynomial::var(2, f, 1)
            .pow(2)
            .sub(&Polynomial::var(2, f, 0));
        assert!(!substitute(&eq, &[r.x, r.y]).unwrap().is_zero());
    }

    #[test]
    fn example_pi_automorphism() {
        let p = example_pi_presentation();
        let cutoff = p.ctx().parse_element("10+3pi").unwrap();
        let fan = example_pi_fan(1, 2).unwrap();
        let e1 = kaplansky_embed_fg(&p, &fan, &cutoff).unwrap();
        let sigma = find_sigma_w(&fan, &p.weight_vector().unwrap(), 2).unwrap();
        let e2 = embed_in_chart(&p, &example_pi_chart(3, 5).unwrap(), sigma, &cutoff).unwrap();
        assert!(verify_embedding(&p, &e2, 1).unwrap().passed());
        let units = example_pi_units(1, &cutoff).unwrap();
        assert!(automorphism_intertwine_check(&e1, &e2, &units)
            .unwrap()
            .passed());
        let trivial = example_pi_units(0, &cutoff).unwrap();
        assert!(!automorphism_intertwine_check(&e1, &e2, &trivial)
            .unwrap()
            .passed());
        assert!(automorphism_intertwine_check(&e1, &e1, &trivial)
            .unwrap()
            .passed());
        assert_eq!(
            example_pi_unit_equations(&units, (1, 2), (3, 5), &cutoff).unwrap(),
            vec![true; 3]
        );
        assert_eq!(
            example_pi_unit_equations(&trivial, (1, 2), (3, 5), &cutoff).unwrap(),
            vec![false; 3]
        );
    }

    #[test]
    fn branch_embedding_auto_fan() {
        let p = branch_presentation();
        let (fan, constraints) = auto_fan(&p, 500).unwrap();
        assert!(audit_fan(&fan, &constraints).unwrap().passed());
        let cutoff = GroupElement::new(p.ctx().clone(), vec![30]);
        let e = kaplansky_embed_fg(&p, &fan, &cutoff).unwrap();
        assert_eq!(e.sigma_w.rays(), &[vec![4, 6, 13]]);
        // this chart's center is the parametrization (t^4, t^6 + t^7) rescaled by t -> t/2
        let c = Coeff::new(1.into(), 2.into());
        let f = Field::Rationals;
        let expected: Vec<Coeff> = [(4, 1), (6, 1), (13, 2)]
            .iter()
            .map(|&(g, k)| f.mul(&q(k), &f.pow(&c, g).unwrap()))
            .collect();
        assert_eq!(e.rho, expected);
        let report = verify_embedding(&p, &e, 3).unwrap();
        assert!(report.passed(), "{:?}", report.failures);
    }

    #[test]
    fn cusp_is_monomial() {
        let p = cusp_presentation();
        let (fan, _) = auto_fan(&p, 500).unwrap();
        let cutoff = GroupElement::new(p.ctx().clone(), vec![40]);
        let e = kaplansky_embed_fg(&p, &fan, &cutoff).unwrap();
        assert_eq!(e.xi[0].to_string(), "t^2 + O(t^40)");
        assert_eq!(e.xi[1].to_string(), "t^3 + O(t^40)");
        assert!(e.residuals.iter().all(|v| v.is_infinite()));
        assert_eq!(
            e.center.iter().map(|(_, c)| c.clone()).collect::<Vec<_>>(),
            vec![q(1)]
        );
    }

    #[test]
    fn example_pi_auto_fan() {
        let p = example_pi_presentation();
        let (fan, constraints) = auto_fan(&p, 500).unwrap();
        assert!(audit_fan(&fan, &constraints).unwrap().passed());
        let cutoff = p.ctx().parse_element("10+3pi").unwrap();
        let e = kaplansky_embed_fg(&p, &fan, &cutoff).unwrap();
        assert!(verify_embedding(&p, &e, 5).unwrap().passed());
    }
}
