//! Seeded property suites shared by the `properties` and `acceptance` targets.
#![allow(dead_code)]

use std::cmp::Ordering;

use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestRng, TestRunner};

use torific::builtin::{auto_fan, branch_presentation, example_pi_presentation};
use torific::field::{Coeff, Field};
use torific::group::{Ctx, GroupContext, GroupElement};
use torific::lattice::IntMatrix;
use torific::poly::Polynomial;
use torific::series::{HahnSeries, Valuation};
use torific::toric::{find_sigma_w, monomial_map_from_cone, MonomialMap};
use torific::torific::{center_coordinates, rho, strict_transform, Relation, TorificPresentation};

const SEED: [u8; 32] = *b"hahn-series-property-suite-seed!";

pub fn runner(cases: u32) -> TestRunner {
    let config = Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    };
    TestRunner::new_with_rng(config, TestRng::from_seed(RngAlgorithm::ChaCha, &SEED))
}

fn q(n: i64) -> Coeff {
    Coeff::from_integer(n.into())
}

fn fail(msg: impl Into<String>) -> TestCaseError {
    TestCaseError::fail(msg.into())
}

fn lib<T>(r: torific::error::Result<T>) -> Result<T, TestCaseError> {
    r.map_err(|e| fail(e.to_string()))
}

type RawSeries = (Vec<(i64, i64, i64)>, (i64, i64));

fn raw_series() -> impl Strategy<Value = RawSeries> {
    (
        prop::collection::vec((0..4i64, 0..3i64, -4..=4i64), 0..6),
        (3..9i64, 0..3i64),
    )
}

fn build(ctx: &Ctx, field: Field, raw: &RawSeries) -> Result<HahnSeries, TestCaseError> {
    let g = |a, b| GroupElement::new(ctx.clone(), vec![a, b]);
    let terms = raw.0.iter().map(|&(a, b, c)| (g(a, b), q(c)));
    lib(HahnSeries::from_terms(
        ctx.clone(),
        field,
        terms,
        g(raw.1 .0, raw.1 .1),
    ))
}

fn field_of(prime: bool) -> Field {
    if prime {
        Field::prime(5).unwrap()
    } else {
        Field::Rationals
    }
}

/// Equality below the smaller of the two cutoffs.
fn same(a: &HahnSeries, b: &HahnSeries, what: &str) -> Result<(), TestCaseError> {
    let bound = lib(a.cutoff().min(b.cutoff()))?;
    if lib(a.agrees_below(b, &bound))? {
        Ok(())
    } else {
        Err(fail(format!("{what}: {a} vs {b}")))
    }
}

pub fn ring_axioms(cases: u32) -> Result<(), String> {
    let strategy = (raw_series(), raw_series(), raw_series(), any::<bool>());
    runner(cases)
        .run(&strategy, |(ra, rb, rc, prime)| {
            let ctx = GroupContext::integers_plus_pi();
            let f = field_of(prime);
            let (a, b, c) = (
                build(&ctx, f, &ra)?,
                build(&ctx, f, &rb)?,
                build(&ctx, f, &rc)?,
            );
            same(&lib(a.add(&b))?, &lib(b.add(&a))?, "a+b = b+a")?;
            same(&lib(a.mul(&b))?, &lib(b.mul(&a))?, "ab = ba")?;
            same(
                &lib(lib(a.add(&b))?.add(&c))?,
                &lib(a.add(&lib(b.add(&c))?))?,
                "(a+b)+c",
            )?;
            same(
                &lib(lib(a.mul(&b))?.mul(&c))?,
                &lib(a.mul(&lib(b.mul(&c))?))?,
                "(ab)c",
            )?;
            let lhs = lib(a.mul(&lib(b.add(&c))?))?;
            let rhs = lib(lib(a.mul(&b))?.add(&lib(a.mul(&c))?))?;
            same(&lhs, &rhs, "a(b+c)")?;
            let zero = HahnSeries::zero(ctx.clone(), f, a.cutoff().clone());
            same(&lib(a.add(&a.neg()))?, &zero, "a-a")?;
            same(&lib(a.add(&zero))?, &a, "a+0")?;
            let one = lib(HahnSeries::one(ctx.clone(), f, a.cutoff().clone()))?;
            same(&lib(a.mul(&one))?, &a, "a*1")?;
            Ok(())
        })
        .map_err(|e| e.to_string())
}

pub fn valuation_multiplicative(cases: u32) -> Result<(), String> {
    let strategy = (raw_series(), raw_series(), any::<bool>());
    runner(cases)
        .run(&strategy, |(ra, rb, prime)| {
            let ctx = GroupContext::integers_plus_pi();
            let f = field_of(prime);
            let (a, b) = (build(&ctx, f, &ra)?, build(&ctx, f, &rb)?);
            let (Valuation::Finite(va), Valuation::Finite(vb)) = (a.valuation(), b.valuation())
            else {
                return Ok(());
            };
            let ab = lib(a.mul(&b))?;
            let sum = lib(va.add(&vb))?;
            if lib(sum.compare(ab.cutoff()))? != Ordering::Less {
                return Ok(());
            }
            match ab.valuation() {
                Valuation::Finite(v) if v == sum => Ok(()),
                other => Err(fail(format!("v({a} * {b}) = {other}, expected {sum}"))),
            }
        })
        .map_err(|e| e.to_string())
}

pub fn inverse_round_trip(cases: u32) -> Result<(), String> {
    let strategy = (raw_series(), 1..5i64, any::<bool>());
    runner(cases)
        .run(&strategy, |(mut ra, lead, prime)| {
            ra.0.retain(|t| (t.0, t.1) != (0, 0));
            ra.0.push((0, 0, lead));
            let ctx = GroupContext::integers_plus_pi();
            let f = field_of(prime);
            let a = build(&ctx, f, &ra)?;
            let inv = lib(a.inv_unit())?;
            let one = lib(HahnSeries::one(ctx.clone(), f, a.cutoff().clone()))?;
            same(&lib(a.mul(&inv))?, &one, "a * a^-1")?;
            same(&lib(inv.inv_unit())?, &a, "(a^-1)^-1")?;
            Ok(())
        })
        .map_err(|e| e.to_string())
}

pub fn order_axioms(cases: u32) -> Result<(), String> {
    let coords = || (-20..=20i64, -6..=6i64);
    runner(cases)
        .run(&(coords(), coords(), coords()), |(x, y, z)| {
            let ctx = GroupContext::integers_plus_pi();
            let g = |(a, b): (i64, i64)| GroupElement::new(ctx.clone(), vec![a, b]);
            let (a, b, c) = (g(x), g(y), g(z));
            let ab = lib(a.compare(&b))?;
            if ab != lib(b.compare(&a))?.reverse() {
                return Err(fail(format!("antisymmetry fails for {a}, {b}")));
            }
            if (ab == Ordering::Equal) != (x == y) {
                return Err(fail(format!("{a} and {b} compare equal but differ")));
            }
            let bc = lib(b.compare(&c))?;
            if ab != Ordering::Greater
                && bc != Ordering::Greater
                && lib(a.compare(&c))? == Ordering::Greater
            {
                return Err(fail(format!("transitivity fails for {a} <= {b} <= {c}")));
            }
            if lib(lib(a.add(&c))?.compare(&lib(b.add(&c))?))? != ab {
                return Err(fail(format!("translation by {c} changes {a} vs {b}")));
            }
            let (fa, fb) = (
                x.0 as f64 + x.1 as f64 * std::f64::consts::PI,
                y.0 as f64 + y.1 as f64 * std::f64::consts::PI,
            );
            if (fa - fb).abs() > 1e-9 && fa.partial_cmp(&fb) != Some(ab) {
                return Err(fail(format!("{a} vs {b} disagrees with floating point")));
            }
            Ok(())
        })
        .map_err(|e| e.to_string())
}

fn matrix() -> impl Strategy<Value = (usize, Vec<Vec<i64>>)> {
    (1..=4usize, 1..=4usize).prop_flat_map(|(r, c)| {
        (
            Just(c),
            prop::collection::vec(prop::collection::vec(-9..=9i64, c), r),
        )
    })
}

fn unimodular(u: &IntMatrix) -> bool {
    u.rows() == u.cols() && u.det().abs() == 1
}

fn check_hnf(m: &IntMatrix) -> Result<(), String> {
    let (h, u) = m.hnf();
    if !unimodular(&u) || u.mul(m) != h {
        return Err(format!("U*M != H for\n{m}"));
    }
    let mut last_pivot: Option<usize> = None;
    let mut seen_zero = false;
    for i in 0..h.rows() {
        let Some(p) = (0..h.cols()).find(|&j| h[(i, j)] != 0) else {
            seen_zero = true;
            continue;
        };
        if seen_zero || last_pivot.is_some_and(|l| p <= l) || h[(i, p)] <= 0 {
            return Err(format!("not in echelon form:\n{h}"));
        }
        if (0..i).any(|k| h[(k, p)] < 0 || h[(k, p)] >= h[(i, p)]) {
            return Err(format!("entries above a pivot are not reduced:\n{h}"));
        }
        last_pivot = Some(p);
    }
    Ok(())
}

fn check_snf(m: &IntMatrix) -> Result<(), String> {
    let (d, u, v) = m.snf();
    if !unimodular(&u) || !unimodular(&v) || u.mul(m).mul(&v) != d {
        return Err(format!("U*M*V != D for\n{m}"));
    }
    let n = d.rows().min(d.cols());
    for i in 0..d.rows() {
        for j in 0..d.cols() {
            if i != j && d[(i, j)] != 0 {
                return Err(format!("not diagonal:\n{d}"));
            }
        }
    }
    for i in 0..n {
        if d[(i, i)] < 0 {
            return Err(format!("negative diagonal entry:\n{d}"));
        }
        if i + 1 < n {
            let (a, b) = (d[(i, i)], d[(i + 1, i + 1)]);
            let divides = if a == 0 { b == 0 } else { b % a == 0 };
            if !divides {
                return Err(format!("divisibility chain broken:\n{d}"));
            }
        }
    }
    Ok(())
}

pub fn normal_forms(cases: u32) -> Result<(), String> {
    runner(cases)
        .run(&matrix(), |(cols, rows)| {
            let m = IntMatrix::from_rows(cols, &rows);
            check_hnf(&m).map_err(fail)?;
            check_snf(&m).map_err(fail)
        })
        .map_err(|e| e.to_string())
}

/// Regular charts of the auto fans of the two shipped three-generator
/// presentations that contain the weight vector.
fn charts() -> Vec<MonomialMap> {
    let mut out = Vec::new();
    for p in [example_pi_presentation(), branch_presentation()] {
        let (fan, _) = auto_fan(&p, 500).unwrap();
        let w = p.weight_vector().unwrap();
        out.extend(
            fan.cones
                .iter()
                .filter_map(|c| monomial_map_from_cone(c, &w).ok()),
        );
    }
    assert!(!out.is_empty());
    out
}

fn raw_poly() -> impl Strategy<Value = Vec<(Vec<u32>, i64)>> {
    prop::collection::vec(
        (
            prop::collection::vec(0..3u32, 3),
            prop_oneof![-3..=-1i64, 1..=3i64],
        ),
        1..4,
    )
}

fn poly(raw: &[(Vec<u32>, i64)]) -> Polynomial {
    Polynomial::from_terms(
        3,
        Field::Rationals,
        raw.iter().map(|(e, c)| (e.clone(), q(*c))),
    )
    .unwrap()
}

pub fn strict_transform_multiplicative(cases: u32) -> Result<(), String> {
    let charts = charts();
    let strategy = (raw_poly(), raw_poly(), 0..charts.len());
    runner(cases)
        .run(&strategy, |(rf, rg, k)| {
            let (f, g) = (poly(&rf), poly(&rg));
            if f.is_zero() || g.is_zero() {
                return Ok(());
            }
            let map = &charts[k];
            let (sf, sg) = (
                lib(strict_transform(&f, map))?,
                lib(strict_transform(&g, map))?,
            );
            let sfg = lib(strict_transform(&f.mul(&g), map))?;
            let factor: Vec<u32> = sf
                .factor
                .iter()
                .zip(&sg.factor)
                .map(|(a, b)| a + b)
                .collect();
            if sfg.factor != factor {
                return Err(fail(format!(
                    "factor of ({f})({g}) is {:?}, expected {factor:?}",
                    sfg.factor
                )));
            }
            let lhs = sfg.transform.scale(&sfg.unit);
            let rhs = sf
                .transform
                .scale(&sf.unit)
                .mul(&sg.transform.scale(&sg.unit));
            if lhs != rhs {
                return Err(fail(format!("transform of ({f})({g}) is not the product")));
            }
            Ok(())
        })
        .map_err(|e| e.to_string())
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// For `u2^p = λ u1^q` with values `(p, q)`, the center of the chart through
/// `σ_w` gives `ρ` with `ρ^m = λ ρ^n`.
pub fn rho_binomial_consistency(cases: u32) -> Result<(), String> {
    let strategy = (2..9i64, 2..9i64, prop_oneof![-5..=-1i64, 1..=5i64], 1..4i64);
    runner(cases)
        .run(&strategy, |(p, qq, num, den)| {
            if gcd(p, qq) != 1 {
                return Ok(());
            }
            let ctx = GroupContext::integers();
            let f = Field::Rationals;
            let lambda = Coeff::new(num.into(), den.into());
            let g = |a| GroupElement::new(ctx.clone(), vec![a]);
            let rel = Relation {
                m: vec![0, p as u32],
                n: vec![qq as u32, 0],
                lambda: lambda.clone(),
                tail: Polynomial::zero(2, f),
            };
            let pres = lib(TorificPresentation::new(
                ctx.clone(),
                f,
                vec![g(p), g(qq)],
                vec![rel.clone()],
            ))?;
            let (fan, _) = lib(auto_fan(&pres, 500))?;
            let w = lib(pres.weight_vector())?;
            let sigma = lib(find_sigma_w(&fan, &w, 1))?;
            let chart = fan
                .cones
                .iter()
                .find(|c| sigma.rays().iter().all(|r| c.rays().contains(r)))
                .ok_or_else(|| fail("no chart contains sigma_w"))?;
            let map = lib(monomial_map_from_cone(chart, &w))?;
            let center = lib(center_coordinates(&pres, &map))?;
            let r = lib(rho(&map, &center, f))?;
            let mono = |e: &[u32]| {
                r.iter()
                    .zip(e)
                    .fold(q(1), |acc, (x, &k)| (0..k).fold(acc, |acc, _| acc * x))
            };
            if r.iter().any(|x| x == &q(0)) || mono(&rel.m) != lambda * mono(&rel.n) {
                return Err(fail(format!("rho = {r:?} fails u2^{p} = lambda u1^{qq}")));
            }
            Ok(())
        })
        .map_err(|e| e.to_string())
}

pub struct Suite {
    pub name: &'static str,
    pub run: fn(u32) -> Result<(), String>,
    pub cases: u32,
}

pub const SUITES: &[Suite] = &[
    Suite {
        name: "ring axioms",
        run: ring_axioms,
        cases: 1000,
    },
    Suite {
        name: "valuation multiplicative",
        run: valuation_multiplicative,
        cases: 500,
    },
    Suite {
        name: "inverse round trip",
        run: inverse_round_trip,
        cases: 300,
    },
    Suite {
        name: "order axioms",
        run: order_axioms,
        cases: 1000,
    },
    Suite {
        name: "normal forms",
        run: normal_forms,
        cases: 500,
    },
    Suite {
        name: "strict transform multiplicative",
        run: strict_transform_multiplicative,
        cases: 300,
    },
    Suite {
        name: "rho binomial consistency",
        run: rho_binomial_consistency,
        cases: 100,
    },
];
