//! Truncated Hahn series `k[[t^Φ≥0]]`.
//!
//! A [`HahnSeries`] is a finite sum `Σ a_δ t^δ` together with an exclusive
//! cutoff: every coefficient of an exponent below the cutoff is exact, and
//! nothing is known at or above it. Every operation returns the tightest
//! cutoff under which its coefficients are still exact.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Coeff, Field};
use crate::group::{same_ctx, Ctx, GroupElement};
use crate::poly::Polynomial;
use crate::semigroup;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Valuation {
    Finite(GroupElement),
    Infinity,
}

impl Valuation {
    pub fn finite(&self) -> Option<&GroupElement> {
        match self {
            Valuation::Finite(g) => Some(g),
            Valuation::Infinity => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Valuation::Infinity)
    }

    /// Certified comparison; infinity is above every group element.
    pub fn compare(&self, other: &Valuation) -> Result<Ordering> {
        match (self, other) {
            (Valuation::Infinity, Valuation::Infinity) => Ok(Ordering::Equal),
            (Valuation::Infinity, _) => Ok(Ordering::Greater),
            (_, Valuation::Infinity) => Ok(Ordering::Less),
            (Valuation::Finite(a), Valuation::Finite(b)) => a.compare(b),
        }
    }

    pub fn at_least(&self, bound: &GroupElement) -> Result<bool> {
        Ok(match self {
            Valuation::Infinity => true,
            Valuation::Finite(g) => g.compare(bound)? != Ordering::Less,
        })
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(g) => write!(f, "{g}"),
            Valuation::Infinity => write!(f, "INFINITY"),
        }
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct HahnSeries {
    ctx: Ctx,
    field: Field,
    terms: Vec<(GroupElement, Coeff)>,
    cutoff: GroupElement,
}

/// Sorts by the certified group order; the first comparison error wins.
pub(crate) fn sort_elements<T>(items: &mut [T], key: impl Fn(&T) -> &GroupElement) -> Result<()> {
    let mut err = None;
    items.sort_by(|a, b| match key(a).compare(key(b)) {
        Ok(o) => o,
        Err(e) => {
            err.get_or_insert(e);
            Ordering::Equal
        }
    });
    err.map_or(Ok(()), Err)
}

impl HahnSeries {
    pub fn zero(ctx: Ctx, field: Field, cutoff: GroupElement) -> Self {
        HahnSeries {
            ctx,
            field,
            terms: Vec::new(),
            cutoff,
        }
    }

    /// Builds a series from arbitrary terms: merges equal exponents, drops
    /// zero coefficients and exponents at or above the cutoff, and rejects
    /// negative exponents.
    pub fn from_terms(
        ctx: Ctx,
        field: Field,
        terms: impl IntoIterator<Item = (GroupElement, Coeff)>,
        cutoff: GroupElement,
    ) -> Result<Self> {
        if !same_ctx(&ctx, cutoff.ctx()) {
            return Err(Error::ContextMismatch);
        }
        let mut merged: HashMap<Vec<i64>, (GroupElement, Coeff)> = HashMap::new();
        for (e, c) in terms {
            if !same_ctx(&ctx, e.ctx()) {
                return Err(Error::ContextMismatch);
            }
            let c = field.reduce(&c)?;
            let entry = merged
                .entry(e.coords().to_vec())
                .or_insert_with(|| (e.clone(), Coeff::zero()));
            entry.1 = field.add(&entry.1, &c);
        }
        let mut kept = Vec::with_capacity(merged.len());
        for (_, (e, c)) in merged {
            if c.is_zero() {
                continue;
            }
            if !e.is_nonnegative()? {
                return Err(Error::NegativeExponent(e.to_string()));
            }
            if e.compare(&cutoff)? == Ordering::Less {
                kept.push((e, c));
            }
        }
        sort_elements(&mut kept, |t| &t.0)?;
        Ok(HahnSeries {
            ctx,
            field,
            terms: kept,
            cutoff,
        })
    }

    pub fn monomial(
        ctx: Ctx,
        field: Field,
        coeff: Coeff,
        exp: GroupElement,
        cutoff: GroupElement,
    ) -> Result<Self> {
        Self::from_terms(ctx, field, [(exp, coeff)], cutoff)
    }

    pub fn constant(ctx: Ctx, field: Field, coeff: Coeff, cutoff: GroupElement) -> Result<Self> {
        let zero = ctx.zero();
        Self::monomial(ctx, field, coeff, zero, cutoff)
    }

    pub fn one(ctx: Ctx, field: Field, cutoff: GroupElement) -> Result<Self> {
        Self::constant(ctx, field, field.one(), cutoff)
    }

    pub fn ctx(&self) -> &Ctx {
        &self.ctx
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn terms(&self) -> &[(GroupElement, Coeff)] {
        &self.terms
    }

    pub fn cutoff(&self) -> &GroupElement {
        &self.cutoff
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exp: &GroupElement) -> Coeff {
        self.terms
            .iter()
            .find(|(e, _)| e == exp)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(Coeff::zero)
    }

    fn check(&self, other: &Self) -> Result<()> {
        if !same_ctx(&self.ctx, &other.ctx) {
            return Err(Error::ContextMismatch);
        }
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        Ok(())
    }

    /// Restricts to a smaller cutoff (a larger one is clamped to the current).
    pub fn truncate(&self, cutoff: &GroupElement) -> Result<Self> {
        let cutoff = self.cutoff.min(cutoff)?;
        let mut terms = Vec::new();
        for (e, c) in &self.terms {
            if e.compare(&cutoff)? == Ordering::Less {
                terms.push((e.clone(), c.clone()));
            }
        }
        Ok(HahnSeries {
            ctx: self.ctx.clone(),
            field: self.field,
            terms,
            cutoff,
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let cutoff = self.cutoff.min(&other.cutoff)?;
        Self::from_terms(
            self.ctx.clone(),
            self.field,
            self.terms.iter().chain(&other.terms).cloned(),
            cutoff,
        )
    }

    pub fn neg(&self) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| (e.clone(), self.field.neg(c)))
            .collect();
        HahnSeries {
            terms,
            ..self.clone()
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: &Coeff) -> Result<Self> {
        let k = self.field.reduce(k)?;
        Self::from_terms(
            self.ctx.clone(),
            self.field,
            self.terms
                .iter()
                .map(|(e, c)| (e.clone(), self.field.mul(c, &k))),
            self.cutoff.clone(),
        )
    }

    /// Multiplies by `t^shift` exactly; the cutoff moves with the exponents.
    pub fn shift(&self, shift: &GroupElement) -> Result<Self> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for (e, c) in &self.terms {
            terms.push((e.add(shift)?, c.clone()));
        }
        Self::from_terms(self.ctx.clone(), self.field, terms, self.cutoff.add(shift)?)
    }

    /// Lower bound for the valuation: the valuation, or the cutoff for a
    /// series that vanishes below its cutoff.
    fn order_bound(&self) -> GroupElement {
        self.terms
            .first()
            .map(|t| t.0.clone())
            .unwrap_or_else(|| self.cutoff.clone())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let cutoff = self
            .cutoff
            .min(&other.cutoff)?
            .min(&self.order_bound().add(&other.cutoff)?)?
            .min(&other.order_bound().add(&self.cutoff)?)?;
        let mut products = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e = e1.add(e2)?;
                // other's terms are sorted, so the rest are past the cutoff too
                if e.compare(&cutoff)? != Ordering::Less {
                    break;
                }
                products.push((e, self.field.mul(c1, c2)));
            }
        }
        Self::from_terms(self.ctx.clone(), self.field, products, cutoff)
    }

    pub fn pow(&self, n: u32) -> Result<Self> {
        let mut acc = Self::one(self.ctx.clone(), self.field, self.cutoff.clone())?;
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// Integer power, using [`Self::inv_unit`] for negative exponents.
    pub fn pow_signed(&self, n: i64) -> Result<Self> {
        if n >= 0 {
            self.pow(n as u32)
        } else {
            self.inv_unit()?.pow((-n) as u32)
        }
    }

    pub fn valuation(&self) -> Valuation {
        match self.terms.first() {
            Some((e, _)) => Valuation::Finite(e.clone()),
            None => Valuation::Infinity,
        }
    }

    /// Leading coefficient and exponent.
    pub fn initial_form(&self) -> Result<(Coeff, GroupElement)> {
        self.terms
            .first()
            .map(|(e, c)| (c.clone(), e.clone()))
            .ok_or(Error::ZeroSeries)
    }

    pub fn is_unit(&self) -> bool {
        matches!(self.terms.first(), Some((e, _)) if e.is_zero())
    }

    /// Inverse of a unit by the geometric series `c⁻¹ Σ (-h/c)^k`, where
    /// `a = c + h` and `h` has positive valuation.
    pub fn inv_unit(&self) -> Result<Self> {
        if !self.is_unit() {
            return Err(Error::NotAUnit(format!("{self}")));
        }
        let c_inv = self.field.inv(&self.terms[0].1)?;
        let h = HahnSeries {
            terms: self.terms[1..].to_vec(),
            ..self.clone()
        };
        let ratio = h.scale(&self.field.neg(&c_inv))?;
        let mut acc = Self::one(self.ctx.clone(), self.field, self.cutoff.clone())?;
        let mut power = acc.clone();
        loop {
            power = power.mul(&ratio)?;
            if power.is_zero() {
                break;
            }
            acc = acc.add(&power)?;
        }
        acc.scale(&c_inv)
    }

    /// Exact equality of all coefficients below `bound`, which must not
    /// exceed either cutoff.
    pub fn agrees_below(&self, other: &Self, bound: &GroupElement) -> Result<bool> {
        self.check(other)?;
        if self.cutoff.compare(bound)? == Ordering::Less
            || other.cutoff.compare(bound)? == Ordering::Less
        {
            return Err(Error::CutoffTooSmall(format!("comparison below {bound}")));
        }
        Ok(self.truncate(bound)?.terms == other.truncate(bound)?.terms)
    }

    pub fn to_literal(&self) -> SeriesLiteral {
        SeriesLiteral {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (c.to_string(), e.coords().to_vec()))
                .collect(),
            cutoff: self.cutoff.coords().to_vec(),
        }
    }

    pub fn from_literal(ctx: Ctx, field: Field, lit: &SeriesLiteral) -> Result<Self> {
        let check = |v: &Vec<i64>| {
            if v.len() == ctx.rank() {
                Ok(GroupElement::new(ctx.clone(), v.clone()))
            } else {
                Err(Error::Parse(format!(
                    "exponent {v:?} does not have rank {}",
                    ctx.rank()
                )))
            }
        };
        let terms = lit
            .terms
            .iter()
            .map(|(c, e)| Ok((check(e)?, field.parse(c)?)))
            .collect::<Result<Vec<_>>>()?;
        Self::from_terms(ctx.clone(), field, terms, check(&lit.cutoff)?)
    }
}

/// `{"terms":[["1",[0,0]],["1",[0,1]]],"cutoff":[20,0]}`
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct SeriesLiteral {
    pub terms: Vec<(String, Vec<i64>)>,
    pub cutoff: Vec<i64>,
}

/// Evaluates a polynomial at series arguments. The result is exact below
/// the cutoff implied by the arguments' cutoffs.
pub fn substitute(f: &Polynomial, images: &[HahnSeries]) -> Result<HahnSeries> {
    if images.len() != f.nvars() {
        return Err(Error::Precondition(format!(
            "{} images for {} variables",
            images.len(),
            f.nvars()
        )));
    }
    let first = images
        .first()
        .ok_or_else(|| Error::Precondition("substitution needs at least one variable".into()))?;
    if images.iter().any(|s| s.field != f.field()) || first.field != f.field() {
        return Err(Error::FieldMismatch);
    }
    let mut cutoff = first.cutoff.clone();
    for s in images {
        first.check(s)?;
        cutoff = cutoff.min(&s.cutoff)?;
    }
    let ctx = first.ctx.clone();
    let field = f.field();
    let mut powers: Vec<Vec<HahnSeries>> = images
        .iter()
        .map(|s| Ok(vec![HahnSeries::one(ctx.clone(), field, s.cutoff.clone())?]))
        .collect::<Result<_>>()?;
    let mut acc = HahnSeries::zero(ctx.clone(), field, cutoff);
    for (exps, c) in f.terms() {
        let mut term = HahnSeries::constant(ctx.clone(), field, c.clone(), acc.cutoff.clone())?;
        for (i, &k) in exps.iter().enumerate() {
            while powers[i].len() <= k as usize {
                let next = powers[i].last().unwrap().mul(&images[i])?;
                powers[i].push(next);
            }
            term = term.mul(&powers[i][k as usize])?;
        }
        acc = acc.add(&term)?;
    }
    Ok(acc)
}

/// Like [`substitute`], but fails if the result is not exact below `required`.
pub fn substitute_to(
    f: &Polynomial,
    images: &[HahnSeries],
    required: &GroupElement,
) -> Result<HahnSeries> {
    let s = substitute(f, images)?;
    if s.cutoff.compare(required)? == Ordering::Less {
        return Err(Error::CutoffUnderflow {
            attainable: s.cutoff.to_string(),
        });
    }
    s.truncate(required)
}

/// `u(φ) = Π u(e_i)^{φ_i}` for the group morphism given on the coordinate basis.
pub fn unit_at(units: &[HahnSeries], phi: &GroupElement) -> Result<HahnSeries> {
    let first = units
        .first()
        .ok_or_else(|| Error::Precondition("no unit images".into()))?;
    let mut unit = HahnSeries::one(first.ctx.clone(), first.field, first.cutoff.clone())?;
    for (u, &k) in units.iter().zip(phi.coords()) {
        if k != 0 {
            unit = unit.mul(&u.pow_signed(k)?)?;
        }
    }
    Ok(unit)
}

/// Applies the automorphism `Σ c_φ t^φ ↦ Σ c_φ u(φ) t^φ` where `u` is the
/// group morphism with `u(e_i) = units[i]` on the coordinate basis.
pub fn apply_group_automorphism(units: &[HahnSeries], s: &HahnSeries) -> Result<HahnSeries> {
    if units.len() != s.ctx.rank() {
        return Err(Error::Precondition(format!(
            "{} unit images for a rank {} group",
            units.len(),
            s.ctx.rank()
        )));
    }
    for u in units {
        s.check(u)?;
        if !u.is_unit() {
            return Err(Error::NotAUnit(u.to_string()));
        }
    }
    let mut acc = HahnSeries::zero(s.ctx.clone(), s.field, s.cutoff.clone());
    for (phi, c) in &s.terms {
        let unit = unit_at(units, phi)?.scale(c)?;
        acc = acc.add(&unit.shift(phi)?)?;
    }
    for (e, _) in &acc.terms {
        if !e.is_nonnegative()? {
            return Err(Error::NegativeExponent(e.to_string()));
        }
    }
    acc.truncate(&s.cutoff)
}

/// Checks that every exponent of `output` is an exponent of `input` plus a
/// nonnegative combination of the positive exponents occurring in `units`.
pub fn exponent_shift_guard(
    input: &HahnSeries,
    output: &HahnSeries,
    units: &[HahnSeries],
) -> Result<bool> {
    let mut gens: Vec<GroupElement> = Vec::new();
    for u in units {
        for (e, _) in u.terms.iter().skip(1) {
            if !gens.contains(e) {
                gens.push(e.clone());
            }
        }
    }
    'outer: for (e, _) in &output.terms {
        for (phi, _) in &input.terms {
            let d = e.sub(phi)?;
            if d.is_zero() {
                continue 'outer;
            }
            if d.is_positive()? && semigroup::combination(&gens, &d)?.is_some() {
                continue 'outer;
            }
        }
        return Ok(false);
    }
    Ok(true)
}

fn fmt_exp(e: &GroupElement) -> String {
    let s = e.to_string();
    if s.chars().all(|c| c.is_ascii_digit()) || s == "π" {
        s
    } else {
        format!("{{{s}}}")
    }
}

impl fmt::Display for HahnSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (i, (e, c)) in self.terms.iter().enumerate() {
            let neg = c < &Coeff::zero();
            let abs = if neg { -c.clone() } else { c.clone() };
            let power = match fmt_exp(e) {
                x if x == "1" => "t".to_string(),
                x => format!("t^{x}"),
            };
            let mono = if e.is_zero() {
                abs.to_string()
            } else if abs == num_traits::One::one() {
                power
            } else {
                format!("{abs}*{power}")
            };
            let sign = match (i, neg) {
                (0, true) => "-",
                (0, false) => "",
                (_, true) => " - ",
                (_, false) => " + ",
            };
            parts.push(format!("{sign}{mono}"));
        }
        if parts.is_empty() {
            parts.push("0".into());
        }
        write!(f, "{} + O(t^{})", parts.concat(), fmt_exp(&self.cutoff))
    }
}

impl fmt::Debug for HahnSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupContext;
    use num_rational::BigRational;

    fn q(n: i64) -> Coeff {
        BigRational::from_integer(n.into())
    }

    fn zt(ctx: &Ctx, terms: &[(i64, i64)], cut: i64, field: Field) -> HahnSeries {
        HahnSeries::from_terms(
            ctx.clone(),
            field,
            terms
                .iter()
                .map(|&(c, e)| (GroupElement::new(ctx.clone(), vec![e]), q(c))),
            GroupElement::new(ctx.clone(), vec![cut]),
        )
        .unwrap()
    }

    fn pit(ctx: &Ctx, terms: &[(i64, i64, i64)], cut: (i64, i64)) -> HahnSeries {
        HahnSeries::from_terms(
            ctx.clone(),
            Field::Rationals,
            terms
                .iter()
                .map(|&(c, a, b)| (GroupElement::new(ctx.clone(), vec![a, b]), q(c))),
            GroupElement::new(ctx.clone(), vec![cut.0, cut.1]),
        )
        .unwrap()
    }

    #[test]
    fn add_examples() {
        let z = GroupContext::integers();
        let f = Field::Rationals;
        let a = zt(&z, &[(1, 2), (1, 3)], 10, f);
        let b = zt(&z, &[(-1, 3)], 10, f);
        assert_eq!(a.add(&b).unwrap(), zt(&z, &[(1, 2)], 10, f));
        assert_eq!(zt(&z, &[], 10, f).add(&a).unwrap(), a);
        let f2 = Field::prime(2).unwrap();
        let t = zt(&z, &[(1, 1)], 10, f2);
        assert!(t.add(&t).unwrap().is_zero());
    }

    #[test]
    fn mul_examples() {
        let z = GroupContext::integers();
        let f = Field::Rationals;
        let n = 6;
        let one_minus_t = zt(&z, &[(1, 0), (-1, 1)], 100, f);
        let geom = zt(&z, &(0..n).map(|k| (1, k)).collect::<Vec<_>>(), 100, f);
        assert_eq!(
            one_minus_t.mul(&geom).unwrap(),
            zt(&z, &[(1, 0), (-1, n)], 100, f)
        );
        let p = GroupContext::integers_plus_pi();
        let s = pit(&p, &[(1, 0, 0), (1, 0, 1)], (20, 0));
        assert_eq!(
            s.mul(&s).unwrap(),
            pit(&p, &[(1, 0, 0), (2, 0, 1), (1, 0, 2)], (20, 0))
        );
    }

    #[test]
    fn inverse_examples() {
        let z = GroupContext::integers();
        let f = Field::Rationals;
        let inv = zt(&z, &[(1, 0), (-1, 1)], 5, f).inv_unit().unwrap();
        assert_eq!(inv, zt(&z, &[(1, 0), (1, 1), (1, 2), (1, 3), (1, 4)], 5, f));
        let two = zt(&z, &[(2, 0)], 5, f);
        assert_eq!(
            two.inv_unit().unwrap().initial_form().unwrap().0,
            BigRational::new(1.into(), 2.into())
        );
        let p = GroupContext::integers_plus_pi();
        let u = pit(&p, &[(1, 0, 0), (1, 0, 1)], (0, 3));
        assert_eq!(
            u.inv_unit().unwrap(),
            pit(&p, &[(1, 0, 0), (-1, 0, 1), (1, 0, 2)], (0, 3))
        );
        assert!(matches!(
            zt(&z, &[(1, 1)], 5, f).inv_unit(),
            Err(Error::NotAUnit(_))
        ));
    }

    #[test]
    fn valuation_examples() {
        let z = GroupContext::integers();
        let f = Field::Rationals;
        assert_eq!(
            zt(&z, &[(1, 3), (1, 5)], 10, f).valuation(),
            Valuation::Finite(GroupElement::new(z.clone(), vec![3]))
        );
        assert_eq!(zt(&z, &[], 10, f).valuation(), Valuation::Infinity);
        let p = GroupContext::integers_plus_pi();
        let a = pit(&p, &[(1, 2, 0), (1, 2, 1)], (20, 0));
        assert!(a.sub(&a).unwrap().valuation().is_infinite());
        let (c, e) = zt(&z, &[(3, 2), (1, 4)], 10, f).initial_form().unwrap();
        assert_eq!((c, e.coords()[0]), (q(3), 2));
        assert_eq!(zt(&z, &[], 10, f).initial_form(), Err(Error::ZeroSeries));
    }

    #[test]
    fn negative_exponents_rejected() {
        let p = GroupContext::integers_plus_pi();
        let r = HahnSeries::from_terms(
            p.clone(),
            Field::Rationals,
            [(GroupElement::new(p.clone(), vec![1, -1]), q(1))],
            GroupElement::new(p.clone(), vec![10, 0]),
        );
        assert!(matches!(r, Err(Error::NegativeExponent(_))));
    }

    #[test]
    fn substitute_cusp_and_underflow() {
        let z = GroupContext::integers();
        let f = Field::Rationals;
        let u1 = Polynomial::var(2, f, 0);
        let u2 = Polynomial::var(2, f, 1);
        let cusp = u2.pow(2).sub(&u1.pow(3));
        let x = zt(&z, &[(1, 2)], 20, f);
        let y = zt(&z, &[(1, 3)], 20, f);
        assert!(substitute(&cusp, &[x.clone(), y.clone()])
            .unwrap()
            .is_zero());
        let short = zt(&z, &[(1, 3)], 8, f);
        let err =
            substitute_to(&cusp, &[x, short], &GroupElement::new(z.clone(), vec![20])).unwrap_err();
        assert_eq!(
            err,
            Error::CutoffUnderflow {
                attainable: "8".into()
            }
        );
        let s = zt(&z, &[(1, 1), (5, 4)], 20, f);
        assert_eq!(
            substitute(&Polynomial::var(1, f, 0), std::slice::from_ref(&s)).unwrap(),
            s
        );
    }

    #[test]
    fn automorphism_identity_and_unit_factor() {
        let p = GroupContext::integers_plus_pi();
        let cut = (20, 0);
        let one = pit(&p, &[(1, 0, 0)], cut);
        let s = pit(&p, &[(3, 1, 0), (1, 0, 1), (-2, 2, 1)], cut);
        assert_eq!(
            apply_group_automorphism(&[one.clone(), one.clone()], &s).unwrap(),
            s
        );
        let u1 = pit(&p, &[(1, 0, 0), (1, 0, 1)], cut);
        let t = pit(&p, &[(1, 1, 0)], cut);
        let image = apply_group_automorphism(&[u1.clone(), one.clone()], &t).unwrap();
        assert_eq!(
            image,
            u1.shift(&GroupElement::new(p.clone(), vec![1, 0]))
                .unwrap()
                .truncate(&t.cutoff)
                .unwrap()
        );
        let a = u1.mul(&pit(&p, &[(1, 2, 0)], cut)).unwrap();
        let (c, e) = apply_group_automorphism(&[u1.clone(), one.clone()], &a)
            .unwrap()
            .initial_form()
            .unwrap();
        assert_eq!((c, e.coords().to_vec()), (q(1), vec![2, 0]));
        assert!(exponent_shift_guard(&t, &image, &[u1, one]).unwrap());
    }

    #[test]
    fn literal_round_trip() {
        let p = GroupContext::integers_plus_pi();
        let json = r#"{"terms":[["1",[0,0]],["1",[0,1]]],"cutoff":[20,0]}"#;
        let lit: SeriesLiteral = serde_json::from_str(json).unwrap();
        let s = HahnSeries::from_literal(p, Field::Rationals, &lit).unwrap();
        assert_eq!(s.to_string(), "1 + t^π + O(t^20)");
        assert_eq!(serde_json::to_string(&s.to_literal()).unwrap(), json);
    }
}
