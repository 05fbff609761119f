//! Finitely generated value semigroups `Γ ⊂ Φ≥0`.

use std::cmp::Ordering;
use std::collections::HashSet;
use std::fmt;

use num_integer::Integer;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{same_ctx, Ctx, GroupContext, GroupElement};
use crate::lattice::IntMatrix;
use crate::series::{sort_elements, HahnSeries};

/// Nonnegative integer combination of `gens` equal to `target`, if any.
///
/// Depth-first search from the last generator down; every generator is
/// positive in an archimedean order, so the multiplicity of each is bounded
/// by `floor(target / γ_i)` and the search terminates.
pub fn combination(gens: &[GroupElement], target: &GroupElement) -> Result<Option<Vec<u64>>> {
    for g in gens {
        if !g.is_positive()? {
            return Err(Error::Precondition(format!(
                "generator {g} is not positive"
            )));
        }
    }
    if target.is_zero() {
        return Ok(Some(vec![0; gens.len()]));
    }
    if !target.is_positive()? {
        return Ok(None);
    }
    let mut witness = vec![0u64; gens.len()];
    let mut dead = HashSet::new();
    if search(gens, gens.len(), target, &mut witness, &mut dead)? {
        Ok(Some(witness))
    } else {
        Ok(None)
    }
}

fn search(
    gens: &[GroupElement],
    upto: usize,
    rest: &GroupElement,
    witness: &mut [u64],
    dead: &mut HashSet<(usize, Vec<i64>)>,
) -> Result<bool> {
    if rest.is_zero() {
        return Ok(true);
    }
    if upto == 0 || dead.contains(&(upto, rest.coords().to_vec())) {
        return Ok(false);
    }
    let i = upto - 1;
    let max = gens[i].floor_div(rest)?;
    for k in (0..=max.max(0)).rev() {
        let r = rest.sub(&gens[i].scale(k))?;
        if search(gens, i, &r, witness, dead)? {
            witness[i] = k as u64;
            return Ok(true);
        }
    }
    dead.insert((upto, rest.coords().to_vec()));
    Ok(false)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Semigroup {
    ctx: Ctx,
    generators: Vec<GroupElement>,
}

impl Semigroup {
    /// Accepts generators in increasing order, each outside the semigroup
    /// generated by its predecessors.
    pub fn new(ctx: Ctx, generators: Vec<GroupElement>) -> Result<Self> {
        for (i, g) in generators.iter().enumerate() {
            if !same_ctx(&ctx, g.ctx()) {
                return Err(Error::ContextMismatch);
            }
            if i > 0 && g.compare(&generators[i - 1])? != Ordering::Greater {
                return Err(Error::Precondition(
                    "generators must be strictly increasing".into(),
                ));
            }
            if combination(&generators[..i], g)?.is_some() {
                return Err(Error::Precondition(format!("generator {g} is not minimal")));
            }
        }
        Ok(Semigroup { ctx, generators })
    }

    /// Numerical semigroup in `ℤ` with the given integer generators.
    pub fn numerical(gens: &[i64]) -> Result<Self> {
        let ctx = GroupContext::integers();
        let gens = gens
            .iter()
            .map(|&g| GroupElement::new(ctx.clone(), vec![g]))
            .collect();
        Self::new(ctx, gens)
    }

    pub fn ctx(&self) -> &Ctx {
        &self.ctx
    }

    pub fn generators(&self) -> &[GroupElement] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn membership(&self, g: &GroupElement) -> Result<Option<Vec<u64>>> {
        combination(&self.generators, g)
    }

    pub fn contains(&self, g: &GroupElement) -> Result<bool> {
        Ok(self.membership(g)?.is_some())
    }

    pub fn relation_lattice(&self) -> RelationLattice {
        RelationLattice::of(&self.generators)
    }

    /// Integer generators of a numerical semigroup in `ℤ`.
    pub fn integer_generators(&self) -> Option<Vec<i64>> {
        (self.ctx.rank() == 1).then(|| self.generators.iter().map(|g| g.coords()[0]).collect())
    }

    /// Largest integer outside a numerical semigroup; `None` when the
    /// generators are not coprime or the rank is not 1.
    pub fn frobenius_number(&self) -> Option<i64> {
        let gens = self.integer_generators()?;
        frobenius_number(&gens)
    }
}

impl fmt::Display for Semigroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = self.generators.iter().map(|g| g.to_string()).collect();
        write!(f, "<{}>", gens.join(","))
    }
}

/// Frobenius number by exhaustive scan: the scan stops once `min(gens)`
/// consecutive members are found, after which everything is a member.
pub fn frobenius_number(gens: &[i64]) -> Option<i64> {
    let g = gens.iter().fold(0i64, |a, &b| a.gcd(&b));
    if g != 1 || gens.iter().any(|&x| x <= 0) {
        return None;
    }
    let m = *gens.iter().min()?;
    let mut member = vec![true];
    let mut run = 0;
    let mut last_gap = -1i64;
    let mut n = 0usize;
    while run < m {
        n += 1;
        let hit = gens
            .iter()
            .any(|&x| n as i64 >= x && member[n - x as usize]);
        member.push(hit);
        if hit {
            run += 1;
        } else {
            run = 0;
            last_gap = n as i64;
        }
    }
    Some(last_gap)
}

/// Keeps, in increasing order, every value not generated by those kept
/// before it.
pub fn minimal_generators(values: &[GroupElement]) -> Result<Semigroup> {
    let first = values
        .first()
        .ok_or_else(|| Error::Precondition("empty value set".into()))?;
    let ctx = first.ctx().clone();
    let mut vals: Vec<GroupElement> = Vec::new();
    for v in values {
        if !v.is_zero() && !vals.contains(v) {
            if !v.is_positive()? {
                return Err(Error::Precondition(format!("value {v} is negative")));
            }
            vals.push(v.clone());
        }
    }
    sort_elements(&mut vals, |v| v)?;
    let mut kept: Vec<GroupElement> = Vec::new();
    for v in vals {
        if combination(&kept, &v)?.is_none() {
            kept.push(v);
        }
    }
    Semigroup::new(ctx, kept)
}

/// Integer kernel of `ℤ^b → Φ, e_i ↦ γ_i` in Hermite form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RelationLattice {
    pub generators: Vec<Vec<i64>>,
    pub basis: Vec<Vec<i64>>,
    pub elementary_divisors: Vec<i64>,
}

impl RelationLattice {
    pub fn of(gens: &[GroupElement]) -> Self {
        let r = gens.first().map_or(0, |g| g.ctx().rank());
        let coords: Vec<Vec<i64>> = gens.iter().map(|g| g.coords().to_vec()).collect();
        let kernel = IntMatrix::from_rows(r, &coords).left_kernel();
        let elementary_divisors = if kernel.rows() == 0 {
            Vec::new()
        } else {
            kernel
                .elementary_divisors()
                .into_iter()
                .map(|d| d as i64)
                .collect()
        };
        RelationLattice {
            generators: coords,
            basis: kernel.to_rows(),
            elementary_divisors,
        }
    }

    pub fn b(&self) -> usize {
        self.generators.len()
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn is_saturated(&self) -> bool {
        self.elementary_divisors.iter().all(|&d| d == 1)
    }

    /// Every basis row annihilates the generator vector.
    pub fn annihilates(&self) -> bool {
        self.basis.iter().all(|row| {
            let r = self.generators.first().map_or(0, |g| g.len());
            (0..r).all(|k| {
                row.iter()
                    .zip(&self.generators)
                    .map(|(a, g)| (*a as i128) * g[k] as i128)
                    .sum::<i128>()
                    == 0
            })
        })
    }
}

impl fmt::Display for RelationLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .basis
            .iter()
            .map(|r| {
                format!(
                    "({})",
                    r.iter()
                        .map(|x| x.to_string())
                        .collect::<Vec<_>>()
                        .join(",")
                )
            })
            .collect();
        write!(f, "{{{}}}", rows.join(", "))
    }
}

/// Checks `L_big ∩ (ℤ^{b_small} × 0) = L_small`. The small generator list
/// must be a prefix of the big one.
pub fn lattice_restriction_check(small: &RelationLattice, big: &RelationLattice) -> Result<bool> {
    let bs = small.b();
    if bs > big.b() || small.generators[..] != big.generators[..bs] {
        return Err(Error::Precondition(
            "the smaller generator list is not a coordinate prefix of the larger".into(),
        ));
    }
    let bb = big.b();
    let restricted = if big.basis.is_empty() {
        Vec::new()
    } else {
        let basis = IntMatrix::from_rows(bb, &big.basis);
        let tail: Vec<Vec<i64>> = big.basis.iter().map(|r| r[bs..].to_vec()).collect();
        let combos = IntMatrix::from_rows(bb - bs, &tail).left_kernel();
        let inter = combos.mul(&basis);
        (0..inter.rows())
            .map(|i| inter.row_i64(i)[..bs].to_vec())
            .collect::<Vec<_>>()
    };
    Ok(hermite(bs, &restricted) == hermite(bs, &small.basis))
}

fn hermite(cols: usize, rows: &[Vec<i64>]) -> Vec<Vec<i64>> {
    if rows.is_empty() {
        return Vec::new();
    }
    let h = IntMatrix::from_rows(cols, rows).hnf().0;
    h.to_rows()
        .into_iter()
        .filter(|r| r.iter().any(|&x| x != 0))
        .collect()
}

/// Generators of the semigroup of a plane branch from its characteristic
/// exponents `β_0 < β_1 < … < β_g`.
pub fn branch_semigroup_from_char_exponents(beta: &[i64]) -> Result<Semigroup> {
    if beta.is_empty() || beta.iter().any(|&b| b <= 0) || beta.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Precondition(
            "characteristic exponents must be positive and increasing".into(),
        ));
    }
    let e: Vec<i64> = beta
        .iter()
        .scan(0i64, |g, &b| {
            *g = g.gcd(&b);
            Some(*g)
        })
        .collect();
    if *e.last().unwrap() != 1 {
        return Err(Error::Precondition(format!(
            "characteristic exponents {beta:?} are not coprime"
        )));
    }
    if e.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::Precondition(
            "gcds of characteristic exponents must strictly decrease".into(),
        ));
    }
    let mut bar = vec![beta[0]];
    if beta.len() > 1 {
        bar.push(beta[1]);
    }
    for i in 1..beta.len().saturating_sub(1) {
        let n = e[i - 1] / e[i];
        bar.push(n * bar[i] + beta[i + 1] - beta[i]);
    }
    Semigroup::numerical(&bar)
}

/// Valuations of all `P(x, y)` with `deg P ≤ degree_bound` that are at
/// most `value_bound`, by echelon reduction of the monomials `x^i y^j`.
pub fn branch_values_oracle(
    x: &HahnSeries,
    y: &HahnSeries,
    degree_bound: u32,
    value_bound: &GroupElement,
) -> Result<Vec<GroupElement>> {
    for s in [x, y] {
        if !s.valuation().at_least(&s.ctx().zero())? || s.is_unit() {
            return Err(Error::Precondition(
                "parametrization must have positive valuation".into(),
            ));
        }
    }
    let mut echelon: Vec<HahnSeries> = Vec::new();
    let mut xi = HahnSeries::one(x.ctx().clone(), x.field(), x.cutoff().min(y.cutoff())?)?;
    for i in 0..=degree_bound {
        let mut mono = xi.clone();
        for _ in 0..=(degree_bound - i) {
            if mono.cutoff().compare(value_bound)? != Ordering::Greater {
                return Err(Error::CutoffTooSmall(format!("values up to {value_bound}")));
            }
            let mut v = mono.clone();
            while let Ok((c, e)) = v.initial_form() {
                let Some(p) = echelon.iter().find(|p| p.terms()[0].0 == e) else {
                    break;
                };
                let k = v.field().mul(&c, &v.field().inv(&p.terms()[0].1)?);
                v = v.sub(&p.scale(&k)?)?;
            }
            if !v.is_zero() {
                echelon.push(v);
            }
            mono = mono.mul(y)?;
        }
        xi = xi.mul(x)?;
    }
    let mut out = Vec::new();
    for p in &echelon {
        let e = &p.terms()[0].0;
        if e.compare(value_bound)? != Ordering::Greater {
            out.push(e.clone());
        }
    }
    sort_elements(&mut out, |e| e)?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;
    use num_rational::BigRational;

    fn z(n: i64) -> GroupElement {
        GroupElement::new(GroupContext::integers(), vec![n])
    }

    fn zs(v: &[i64]) -> Vec<GroupElement> {
        let ctx = GroupContext::integers();
        v.iter()
            .map(|&n| GroupElement::new(ctx.clone(), vec![n]))
            .collect()
    }

    fn series(terms: &[i64], cutoff: i64) -> HahnSeries {
        let ctx = GroupContext::integers();
        HahnSeries::from_terms(
            ctx.clone(),
            Field::Rationals,
            terms.iter().map(|&e| {
                (
                    GroupElement::new(ctx.clone(), vec![e]),
                    BigRational::from_integer(1.into()),
                )
            }),
            GroupElement::new(ctx.clone(), vec![cutoff]),
        )
        .unwrap()
    }

    fn ints(v: &[GroupElement]) -> Vec<i64> {
        v.iter().map(|g| g.coords()[0]).collect()
    }

    #[test]
    fn membership_examples() {
        let s23 = Semigroup::numerical(&[2, 3]).unwrap();
        let ctx = s23.ctx().clone();
        assert!(!s23
            .contains(&GroupElement::new(ctx.clone(), vec![1]))
            .unwrap());
        let s = Semigroup::numerical(&[4, 6, 13]).unwrap();
        let c = s.ctx().clone();
        assert_eq!(
            s.membership(&GroupElement::new(c.clone(), vec![13]))
                .unwrap(),
            Some(vec![0, 0, 1])
        );
        assert_eq!(
            s.membership(&GroupElement::new(c.clone(), vec![5]))
                .unwrap(),
            None
        );
        assert_eq!(s.frobenius_number(), Some(15));
        assert!(Semigroup::numerical(&[2, 4]).is_err());
    }

    #[test]
    fn minimal_generator_examples() {
        assert_eq!(
            minimal_generators(&zs(&[2, 3, 4, 5, 6]))
                .unwrap()
                .integer_generators(),
            Some(vec![2, 3])
        );
        let vals = zs(&[4, 6, 8, 10, 12, 13, 14, 16, 17, 18, 19]);
        assert_eq!(
            minimal_generators(&vals).unwrap().integer_generators(),
            Some(vec![4, 6, 13])
        );
        assert_eq!(
            minimal_generators(&[z(1)]).unwrap().integer_generators(),
            Some(vec![1])
        );
    }

    #[test]
    fn relation_lattice_examples() {
        let l = Semigroup::numerical(&[2, 3]).unwrap().relation_lattice();
        assert_eq!(l.basis, vec![vec![3, -2]]);
        let l = Semigroup::numerical(&[4, 6, 13])
            .unwrap()
            .relation_lattice();
        assert!(l.annihilates() && l.is_saturated());
        let expected = RelationLattice {
            basis: vec![vec![3, -2, 0], vec![5, 1, -2]],
            ..l.clone()
        };
        assert_eq!(hermite(3, &l.basis), hermite(3, &expected.basis));
        assert!(Semigroup::numerical(&[1])
            .unwrap()
            .relation_lattice()
            .basis
            .is_empty());
    }

    #[test]
    fn restriction_examples() {
        let small = RelationLattice::of(&zs(&[2, 3]));
        let big = RelationLattice::of(&zs(&[2, 3, 7]));
        assert_eq!(lattice_restriction_check(&small, &big), Ok(true));
        assert_eq!(lattice_restriction_check(&small, &small), Ok(true));
        let other = RelationLattice::of(&zs(&[4, 6, 13]));
        assert!(matches!(
            lattice_restriction_check(&small, &other),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn char_exponent_examples() {
        let g = |b: &[i64]| {
            branch_semigroup_from_char_exponents(b)
                .unwrap()
                .integer_generators()
                .unwrap()
        };
        assert_eq!(g(&[2, 3]), vec![2, 3]);
        assert_eq!(g(&[4, 6, 7]), vec![4, 6, 13]);
        assert_eq!(g(&[1]), vec![1]);
        assert_eq!(g(&[6, 9, 22]), vec![6, 9, 31]);
        assert!(branch_semigroup_from_char_exponents(&[4, 6]).is_err());
    }

    #[test]
    fn oracle_examples() {
        let vals = branch_values_oracle(&series(&[2], 40), &series(&[3], 40), 6, &z(12)).unwrap();
        assert_eq!(ints(&vals), vec![0, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12]);
        let vals =
            branch_values_oracle(&series(&[4], 60), &series(&[6, 7], 60), 8, &z(30)).unwrap();
        assert_eq!(
            minimal_generators(&vals).unwrap().integer_generators(),
            Some(vec![4, 6, 13])
        );
        let y0 = HahnSeries::zero(GroupContext::integers(), Field::Rationals, z(40));
        let vals = branch_values_oracle(&series(&[1], 40), &y0, 10, &z(10)).unwrap();
        assert_eq!(ints(&vals), (0..=10).collect::<Vec<_>>());
    }
}
