//! Approximation towers of a rank one branch `y(x)` given by finitely many
//! Puiseux terms.
//!
//! Level `a` keeps the terms whose denominators divide `D_a`, the `a`-th
//! distinct value of the running lcm of denominators. Its equation is the
//! product of `y - y_a` over the `D_a` conjugates, expanded by power sums.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::group::{parse_rational, Ctx, GroupContext, GroupElement};
use crate::poly::Polynomial;
use crate::pseudo::{check_pseudo_convergent, PseudoSequence};
use crate::semigroup::{minimal_generators, Semigroup};
use crate::series::{substitute, HahnSeries, Valuation};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PuiseuxTerm {
    pub coeff: BigRational,
    pub exp: BigRational,
}

impl PuiseuxTerm {
    pub fn new(coeff: BigRational, exp: BigRational) -> Self {
        PuiseuxTerm { coeff, exp }
    }
}

/// `[["1","3/2"],["1","7/4"]]`
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PuiseuxFile(pub Vec<(String, String)>);

impl PuiseuxFile {
    pub fn build(&self) -> Result<Vec<PuiseuxTerm>> {
        self.0
            .iter()
            .map(|(c, e)| Ok(PuiseuxTerm::new(parse_rational(c)?, parse_rational(e)?)))
            .collect()
    }
}

/// Formats `x^{3/2} + 2*x^{7/4}`.
pub fn display_puiseux(terms: &[PuiseuxTerm]) -> String {
    if terms.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (k, t) in terms.iter().enumerate() {
        let neg = t.coeff.is_negative();
        if k > 0 {
            out.push_str(if neg { " - " } else { " + " });
        } else if neg {
            out.push('-');
        }
        let c = t.coeff.abs();
        if !c.is_one() {
            out.push_str(&format!("{c}*"));
        }
        if t.exp.is_integer() {
            out.push_str(&format!("x^{}", t.exp));
        } else {
            out.push_str(&format!("x^{{{}}}", t.exp));
        }
    }
    out
}

#[derive(Debug, Clone)]
pub struct TowerLevel {
    pub denominator: i64,
    pub truncation: Vec<PuiseuxTerm>,
    /// In the variables `x, y`.
    pub equation: Polynomial,
    /// `ord_x f_a(x, y(x))`, infinite once the truncation is the whole input.
    pub gamma: Valuation,
    pub semigroup: Semigroup,
    /// Image of the test element under `x ↦ t^N, y ↦ y_a(t)`.
    pub image: HahnSeries,
}

#[derive(Debug, Clone)]
pub struct TowerReport {
    /// Exponents are counted in units of `1/N`, `N` the lcm of all denominators.
    pub ctx: Ctx,
    pub n: i64,
    pub levels: Vec<TowerLevel>,
    /// 1-based index of the level whose equation is the test element.
    pub test_level: usize,
    pub pseudo: Option<PseudoSequence>,
    /// `ν(ξ^{(a+1)} - ξ^{(a)}) ≥ γ_a`
    pub inclusions: Vec<bool>,
    /// More levels were requested than the denominators provide.
    pub stabilized: bool,
}

impl TowerReport {
    /// Finite `γ_a` strictly increase and the final level is exact.
    pub fn gammas_increasing(&self) -> Result<bool> {
        for w in self.levels.windows(2) {
            if w[0].gamma.compare(&w[1].gamma)? != std::cmp::Ordering::Less {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// First level whose `γ_a` exceeds `target`.
    pub fn first_level_beyond(&self, target: &GroupElement) -> Result<Option<usize>> {
        for (a, l) in self.levels.iter().enumerate() {
            let beyond = match l.gamma.finite() {
                Some(g) => g.compare(target)? == std::cmp::Ordering::Greater,
                None => true,
            };
            if beyond {
                return Ok(Some(a + 1));
            }
        }
        Ok(None)
    }
}

impl fmt::Display for TowerReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = vec!["x".to_string(), "y".to_string()];
        for (a, l) in self.levels.iter().enumerate() {
            writeln!(
                f,
                "level {}: D = {}, y = {}, f = {}, gamma = {}, semigroup {} (units of 1/{})",
                a + 1,
                l.denominator,
                display_puiseux(&l.truncation),
                l.equation.display_with(&names),
                l.gamma,
                semigroup_units(&l.semigroup),
                self.n
            )?;
        }
        if let Some(p) = &self.pseudo {
            writeln!(f, "test element f_{}: {p}", self.test_level)?;
        }
        if self.stabilized {
            writeln!(f, "finitely generated: tower stabilizes")?;
        }
        Ok(())
    }
}

/// Generators in units of the context weight, `<8,12,26,53>`.
pub fn semigroup_units(s: &Semigroup) -> String {
    let g: Vec<String> = s
        .generators()
        .iter()
        .map(|e| e.coords()[0].to_string())
        .collect();
    format!("<{}>", g.join(","))
}

type SPoly = BTreeMap<i64, BigRational>;

fn spoly_mul(a: &SPoly, b: &SPoly) -> SPoly {
    let mut out = SPoly::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e = out.entry(ea + eb).or_insert_with(BigRational::zero);
            *e += ca * cb;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// `Π_{ζ^D = 1} (y - Y(ζ s))` with `x = s^D`, as a polynomial in `x, y`.
fn conjugate_product(y: &SPoly, d: i64) -> Result<Polynomial> {
    let dz = BigRational::from_integer(BigInt::from(d));
    let du = d as usize;
    // power sums p_m = D Σ_{D | n} [s^n] Y^m s^n
    let mut p: Vec<SPoly> = vec![SPoly::new()];
    let mut ym: SPoly = [(0, BigRational::one())].into_iter().collect();
    for _ in 1..=du {
        ym = spoly_mul(&ym, y);
        p.push(
            ym.iter()
                .filter(|(e, _)| *e % d == 0)
                .map(|(e, c)| (*e, c * &dz))
                .collect(),
        );
    }
    // Newton identities: k e_k = Σ_{i=1}^k (-1)^{i-1} e_{k-i} p_i
    let mut el: Vec<SPoly> = vec![[(0, BigRational::one())].into_iter().collect()];
    for k in 1..=du {
        let mut acc = SPoly::new();
        for i in 1..=k {
            let sign = if i % 2 == 1 {
                BigRational::one()
            } else {
                -BigRational::one()
            };
            for (e, c) in spoly_mul(&el[k - i], &p[i]) {
                *acc.entry(e).or_insert_with(BigRational::zero) += c * &sign;
            }
        }
        let kq = BigRational::from_integer(BigInt::from(k as i64));
        acc.retain(|_, c| !c.is_zero());
        el.push(acc.into_iter().map(|(e, c)| (e, c / &kq)).collect());
    }
    let mut terms = Vec::new();
    for (k, ek) in el.iter().enumerate() {
        let sign = if k % 2 == 0 {
            BigRational::one()
        } else {
            -BigRational::one()
        };
        for (e, c) in ek {
            if e % d != 0 {
                return Err(Error::Precondition(format!(
                    "conjugate product has the fractional exponent {e}/{d}"
                )));
            }
            terms.push((vec![(e / d) as u32, (du - k) as u32], c * &sign));
        }
    }
    Polynomial::from_terms(2, Field::Rationals, terms)
}

fn series_of(
    ctx: &Ctx,
    terms: &[PuiseuxTerm],
    n: i64,
    cutoff: &GroupElement,
) -> Result<HahnSeries> {
    let nq = BigRational::from_integer(BigInt::from(n));
    HahnSeries::from_terms(
        ctx.clone(),
        Field::Rationals,
        terms.iter().map(|t| {
            let e = (&t.exp * &nq).to_integer();
            (
                GroupElement::new(ctx.clone(), vec![i64::try_from(e).unwrap_or(i64::MAX)]),
                t.coeff.clone(),
            )
        }),
        cutoff.clone(),
    )
}

/// Builds up to `levels` levels. `cutoff` is an exponent of `x`;
/// `test_level` picks the equation used as test element, by default the
/// penultimate level.
pub fn approximation_tower(
    terms: &[PuiseuxTerm],
    levels: usize,
    cutoff: &BigRational,
    test_level: Option<usize>,
) -> Result<TowerReport> {
    if terms.is_empty() {
        return Err(Error::Precondition("empty Puiseux series".into()));
    }
    if levels == 0 {
        return Err(Error::Precondition("at least one level is required".into()));
    }
    for (k, t) in terms.iter().enumerate() {
        if t.coeff.is_zero() {
            return Err(Error::Precondition(format!(
                "term {k} has zero coefficient"
            )));
        }
        if !t.exp.is_positive() {
            return Err(Error::Precondition(format!(
                "term {k} has nonpositive exponent {}",
                t.exp
            )));
        }
        if k > 0 && terms[k - 1].exp >= t.exp {
            return Err(Error::Precondition(
                "exponents must strictly increase".into(),
            ));
        }
    }
    let as_i64 = |b: &BigInt| {
        i64::try_from(b).map_err(|_| Error::ResourceCap("denominator overflow".into()))
    };
    let mut dens: Vec<i64> = Vec::new();
    let mut running = 1i64;
    for t in terms {
        running = running.lcm(&as_i64(t.exp.denom())?);
        if dens.last() != Some(&running) {
            dens.push(running);
        }
    }
    let n = *dens.last().unwrap();
    let ctx = GroupContext::rational(BigRational::new(BigInt::one(), BigInt::from(n)));
    let cut_units = cutoff * BigRational::from_integer(BigInt::from(n));
    let cut = GroupElement::new(ctx.clone(), vec![as_i64(&cut_units.ceil().to_integer())?]);
    let stabilized = levels > dens.len();
    let count = levels.min(dens.len());
    let test_level = test_level.unwrap_or(count.saturating_sub(1).max(1));
    if test_level == 0 || test_level > count {
        return Err(Error::Precondition(format!(
            "test level {test_level} outside 1..={count}"
        )));
    }
    let x = HahnSeries::monomial(
        ctx.clone(),
        Field::Rationals,
        BigRational::one(),
        GroupElement::new(ctx.clone(), vec![n]),
        cut.clone(),
    )?;
    let y_full = series_of(&ctx, terms, n, &cut)?;
    let mut values = vec![
        GroupElement::new(ctx.clone(), vec![n]),
        y_full
            .terms()
            .first()
            .map(|(e, _)| e.clone())
            .ok_or_else(|| Error::CutoffTooSmall(format!("y vanishes below x^{cutoff}")))?,
    ];
    let mut truncations = Vec::new();
    let mut equations = Vec::new();
    let mut gammas = Vec::new();
    let mut semigroups = Vec::new();
    for &d in &dens[..count] {
        let kept: Vec<PuiseuxTerm> = terms
            .iter()
            .filter(|t| d % as_i64(t.exp.denom()).unwrap_or(0) == 0)
            .cloned()
            .collect();
        let dq = BigRational::from_integer(BigInt::from(d));
        let ys: SPoly = kept
            .iter()
            .map(|t| {
                (
                    as_i64(&(&t.exp * &dq).to_integer()).unwrap_or(0),
                    t.coeff.clone(),
                )
            })
            .collect();
        let f = conjugate_product(&ys, d)?;
        let gamma = if kept.len() == terms.len() {
            Valuation::Infinity
        } else {
            let v = substitute(&f, &[x.clone(), y_full.clone()])?.valuation();
            if v.is_infinite() {
                return Err(Error::CutoffTooSmall(format!(
                    "f_D={d}(x, y) vanishes below x^{cutoff}"
                )));
            }
            v
        };
        semigroups.push(minimal_generators(&values)?);
        if let Some(g) = gamma.finite() {
            values.push(g.clone());
        }
        truncations.push(kept);
        equations.push(f);
        gammas.push(gamma);
    }
    let test = equations[test_level - 1].clone();
    let mut out_levels = Vec::with_capacity(count);
    for (a, kept) in truncations.into_iter().enumerate() {
        let ya = series_of(&ctx, &kept, n, &cut)?;
        let image = substitute(&test, &[x.clone(), ya])?;
        out_levels.push(TowerLevel {
            denominator: dens[a],
            truncation: kept,
            equation: equations[a].clone(),
            gamma: gammas[a].clone(),
            semigroup: semigroups[a].clone(),
            image,
        });
    }
    let mut inclusions = Vec::new();
    for w in out_levels.windows(2) {
        let d = w[1].image.sub(&w[0].image)?.valuation();
        inclusions.push(match w[0].gamma.finite() {
            Some(g) => d.at_least(g)?,
            None => d.is_infinite(),
        });
    }
    let pseudo = if out_levels.len() >= 3 {
        Some(check_pseudo_convergent(
            out_levels.iter().map(|l| l.image.clone()).collect(),
        )?)
    } else {
        None
    };
    Ok(TowerReport {
        ctx,
        n,
        levels: out_levels,
        test_level,
        pseudo,
        inclusions,
        stabilized,
    })
}
