//! Torific embeddings of finitely generated presentations into Hahn series.
//!
//! A presentation lists the values `γ_1 … γ_b` of the generators and the
//! relations `F = u^m - λ u^n + tail`. Given a fan compatible with the
//! relations, [`kaplansky_embed_fg`] locates `σ_w`, moves to the chart of a
//! maximal cone containing it, solves for the center of the strict
//! transform and lifts it to series `ξ_i(t)`.

use std::cmp::Ordering;
use std::fmt;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Coeff, Field};
use crate::group::{same_ctx, Ctx, GroupDescriptor, GroupElement};
use crate::lattice::IntMatrix;
use crate::poly::Polynomial;
use crate::series::{
    apply_group_automorphism, exponent_shift_guard, substitute, HahnSeries, Valuation,
};
use crate::toric::{
    find_sigma_w, monomial_map_from_cone, Cone, Constraint, Fan, MonomialMap, WeightVector,
};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation {
    pub m: Vec<u32>,
    pub n: Vec<u32>,
    pub lambda: Coeff,
    pub tail: Polynomial,
}

impl Relation {
    /// `u^m - λ u^n`
    pub fn binomial(&self) -> Polynomial {
        let b = self.m.len();
        let f = self.tail.field();
        Polynomial::monomial(b, f, self.m.clone(), f.one()).sub(&Polynomial::monomial(
            b,
            f,
            self.n.clone(),
            self.lambda.clone(),
        ))
    }

    /// `u^m - λ u^n + tail`
    pub fn polynomial(&self) -> Polynomial {
        self.binomial().add(&self.tail)
    }
}

#[derive(Debug, Clone)]
pub struct TorificPresentation {
    ctx: Ctx,
    field: Field,
    gamma: Vec<GroupElement>,
    relations: Vec<Relation>,
}

fn weight_of(gamma: &[GroupElement], exps: &[u32]) -> Result<GroupElement> {
    let mut acc = gamma[0].ctx().zero();
    for (g, &k) in gamma.iter().zip(exps) {
        acc = acc.add(&g.scale(k as i64))?;
    }
    Ok(acc)
}

impl TorificPresentation {
    /// Checks that every binomial is homogeneous for the weights, `λ ≠ 0`,
    /// and every tail monomial has strictly larger weight.
    pub fn new(
        ctx: Ctx,
        field: Field,
        gamma: Vec<GroupElement>,
        relations: Vec<Relation>,
    ) -> Result<Self> {
        if gamma.is_empty() {
            return Err(Error::PresentationDefect("no generators".into()));
        }
        let b = gamma.len();
        for g in &gamma {
            if !same_ctx(&ctx, g.ctx()) {
                return Err(Error::ContextMismatch);
            }
            if !g.is_positive()? {
                return Err(Error::PresentationDefect(format!(
                    "generator value {g} is not positive"
                )));
            }
        }
        for (l, rel) in relations.iter().enumerate() {
            if rel.m.len() != b || rel.n.len() != b || rel.tail.nvars() != b {
                return Err(Error::PresentationDefect(format!(
                    "relation {l} does not have {b} variables"
                )));
            }
            if rel.tail.field() != field {
                return Err(Error::FieldMismatch);
            }
            if field.reduce(&rel.lambda)?.is_zero() {
                return Err(Error::PresentationDefect(format!("relation {l} has λ = 0")));
            }
            let wm = weight_of(&gamma, &rel.m)?;
            if wm != weight_of(&gamma, &rel.n)? {
                return Err(Error::PresentationDefect(format!(
                    "relation {l}: the binomial is not homogeneous"
                )));
            }
            for (e, _) in rel.tail.terms() {
                if weight_of(&gamma, e)?.compare(&wm)? != Ordering::Greater {
                    return Err(Error::PresentationDefect(format!(
                        "relation {l}: tail monomial {e:?} does not have weight above {wm}"
                    )));
                }
            }
        }
        Ok(TorificPresentation {
            ctx,
            field,
            gamma,
            relations,
        })
    }

    pub fn ctx(&self) -> &Ctx {
        &self.ctx
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn gamma(&self) -> &[GroupElement] {
        &self.gamma
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn b(&self) -> usize {
        self.gamma.len()
    }

    pub fn weight(&self, exps: &[u32]) -> Result<GroupElement> {
        weight_of(&self.gamma, exps)
    }

    pub fn weight_vector(&self) -> Result<WeightVector> {
        WeightVector::new(self.gamma.clone())
    }

    /// Rank of the subgroup generated by the `γ_i`.
    pub fn rational_rank(&self) -> usize {
        let rows: Vec<Vec<i64>> = self.gamma.iter().map(|g| g.coords().to_vec()).collect();
        IntMatrix::from_rows(self.ctx.rank(), &rows).rank()
    }

    /// Hyperplanes a torific uniformizer must respect: the relation
    /// hyperplanes `(m - n)^⊥` and the tail hyperplanes `(m' - m)^⊥`.
    pub fn fan_constraints(&self) -> Vec<Constraint> {
        let diff = |a: &[u32], b: &[u32]| {
            a.iter()
                .zip(b)
                .map(|(&x, &y)| x as i64 - y as i64)
                .collect::<Vec<_>>()
        };
        let mut out: Vec<Constraint> = Vec::new();
        for rel in &self.relations {
            let h = Constraint::Hyperplane(diff(&rel.m, &rel.n));
            if !out.contains(&h) {
                out.push(h);
            }
            for (e, _) in rel.tail.terms() {
                let h = Constraint::Hyperplane(diff(e, &rel.m));
                if !out.contains(&h) {
                    out.push(h);
                }
            }
        }
        out
    }

    pub fn to_file(&self) -> PresentationFile {
        PresentationFile {
            group: self.ctx.descriptor(),
            field: self.field.to_string(),
            gamma: self.gamma.iter().map(|g| g.coords().to_vec()).collect(),
            relations: self
                .relations
                .iter()
                .map(|r| RelationFile {
                    m: r.m.clone(),
                    n: r.n.clone(),
                    lambda: r.lambda.to_string(),
                    tail: r
                        .tail
                        .terms()
                        .map(|(e, c)| (c.to_string(), e.clone()))
                        .collect(),
                })
                .collect(),
        }
    }
}

/// Interchange format for presentations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PresentationFile {
    pub group: GroupDescriptor,
    pub field: String,
    pub gamma: Vec<Vec<i64>>,
    pub relations: Vec<RelationFile>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RelationFile {
    pub m: Vec<u32>,
    pub n: Vec<u32>,
    pub lambda: String,
    #[serde(default)]
    pub tail: Vec<(String, Vec<u32>)>,
}

/// Parses `Q`, `F_p` or `Fp`.
pub fn parse_field(s: &str) -> Result<Field> {
    let s = s.trim();
    if s == "Q" || s.eq_ignore_ascii_case("rationals") {
        return Ok(Field::Rationals);
    }
    let digits = s
        .strip_prefix("F_")
        .or_else(|| s.strip_prefix('F'))
        .ok_or_else(|| Error::Parse(format!("unknown field {s:?}")))?;
    let p = digits
        .parse::<u64>()
        .map_err(|_| Error::Parse(format!("unknown field {s:?}")))?;
    Field::prime(p)
}

impl PresentationFile {
    pub fn build(&self, precision_ceiling: u32) -> Result<TorificPresentation> {
        let ctx = self.group.build(precision_ceiling)?;
        let field = parse_field(&self.field)?;
        let b = self.gamma.len();
        let gamma = self
            .gamma
            .iter()
            .map(|c| {
                if c.len() == ctx.rank() {
                    Ok(GroupElement::new(ctx.clone(), c.clone()))
                } else {
                    Err(Error::Parse(format!(
                        "generator value {c:?} does not have rank {}",
                        ctx.rank()
                    )))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        let relations = self
            .relations
            .iter()
            .map(|r| {
                let tail = r
                    .tail
                    .iter()
                    .map(|(c, e)| Ok((e.clone(), field.parse(c)?)))
                    .collect::<Result<Vec<_>>>()?;
                Ok(Relation {
                    m: r.m.clone(),
                    n: r.n.clone(),
                    lambda: field.parse(&r.lambda)?,
                    tail: Polynomial::from_terms(b, field, tail)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        TorificPresentation::new(ctx, field, gamma, relations)
    }
}

/// `F(y^A) = unit · y^factor · transform`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrictTransform {
    pub factor: Vec<u32>,
    pub unit: Coeff,
    pub transform: Polynomial,
}

impl StrictTransform {
    pub fn display_factor(&self) -> String {
        let parts: Vec<String> = self
            .factor
            .iter()
            .enumerate()
            .filter(|(_, &k)| k > 0)
            .map(|(j, &k)| {
                if k == 1 {
                    format!("y{}", j + 1)
                } else {
                    format!("y{}^{k}", j + 1)
                }
            })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }
}

impl fmt::Display for StrictTransform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = self.transform.default_names("y");
        write!(
            f,
            "({}) * {} * ({})",
            self.unit,
            self.display_factor(),
            self.transform.display_with(&names)
        )
    }
}

/// Substitutes `u_i = Π_j y_j^{a^j_i}` and removes the largest monomial
/// factor. The result is normalized so that the monomial free of active
/// coordinates with the largest passive degree has coefficient 1.
pub fn strict_transform(f: &Polynomial, map: &MonomialMap) -> Result<StrictTransform> {
    if f.is_zero() {
        return Err(Error::Precondition(
            "strict transform of the zero polynomial".into(),
        ));
    }
    let b = map.b();
    if f.nvars() != b {
        return Err(Error::Precondition(format!(
            "polynomial in {} variables for a rank {b} chart",
            f.nvars()
        )));
    }
    if map.rays.iter().flatten().any(|&x| x < 0) {
        return Err(Error::Precondition(
            "chart rays must lie in the quadrant".into(),
        ));
    }
    let mut terms: Vec<(Vec<u32>, Coeff)> = Vec::new();
    for (e, c) in f.terms() {
        let y: Vec<u32> = (0..b)
            .map(|j| (0..b).map(|i| e[i] * map.exponent(i, j) as u32).sum())
            .collect();
        terms.push((y, c.clone()));
    }
    let factor: Vec<u32> = (0..b)
        .map(|j| terms.iter().map(|(y, _)| y[j]).min().unwrap())
        .collect();
    let shifted: Vec<(Vec<u32>, Coeff)> = terms
        .into_iter()
        .map(|(y, c)| (y.iter().zip(&factor).map(|(a, b)| a - b).collect(), c))
        .collect();
    let transform = Polynomial::from_terms(b, f.field(), shifted)?;
    let active = map.active();
    let passive = map.passive();
    let pick = transform
        .terms()
        .filter(|(e, _)| active.iter().all(|&j| e[j] == 0))
        .max_by_key(|(e, _)| (passive.iter().map(|&j| e[j]).sum::<u32>(), (*e).clone()))
        .or_else(|| transform.terms().last())
        .map(|(_, c)| c.clone())
        .expect("nonzero transform");
    let field = f.field();
    let transform = transform.scale(&field.inv(&pick)?);
    Ok(StrictTransform {
        factor,
        unit: pick,
        transform,
    })
}

/// Solves the torus system obtained by setting the active coordinates to
/// zero in the transformed binomials: `Π_{j passive} y_j^{E_ℓj} = λ_ℓ`.
pub fn center_coordinates(
    p: &TorificPresentation,
    map: &MonomialMap,
) -> Result<Vec<(usize, Coeff)>> {
    let passive = map.passive();
    let b = map.b();
    let field = p.field;
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for rel in &p.relations {
        let row: Vec<i64> = passive
            .iter()
            .map(|&j| {
                (0..b)
                    .map(|i| (rel.m[i] as i64 - rel.n[i] as i64) * map.exponent(i, j))
                    .sum()
            })
            .collect();
        rows.push(row);
        rhs.push(rel.lambda.clone());
    }
    for (l, rel) in p.relations.iter().enumerate() {
        for &j in &map.active() {
            let d: i64 = (0..b)
                .map(|i| (rel.m[i] as i64 - rel.n[i] as i64) * map.exponent(i, j))
                .sum();
            if d != 0 {
                return Err(Error::FanDefect(format!(
                    "relation {l} is not homogeneous along the active coordinate y{}",
                    j + 1
                )));
            }
        }
    }
    let k = passive.len();
    if k == 0 {
        return Ok(Vec::new());
    }
    if rows.is_empty() {
        return Err(Error::PresentationDefect(
            "the center is not isolated: no relations".into(),
        ));
    }
    let e = IntMatrix::from_rows(k, &rows);
    let (d, u, v) = e.snf();
    let rank = (0..k.min(rows.len())).filter(|&i| d[(i, i)] != 0).count();
    if rank < k {
        return Err(Error::PresentationDefect(format!(
            "the center is not isolated: torus system of rank {rank} in {k} unknowns"
        )));
    }
    // z = y^{V^{-1}}: the system becomes z_i^{d_i} = Π_ℓ λ_ℓ^{U_iℓ}
    let mut z = Vec::with_capacity(k);
    for i in 0..rows.len() {
        let mut mu = field.one();
        for (l, lam) in rhs.iter().enumerate() {
            let exp = i64::try_from(u[(i, l)])
                .map_err(|_| Error::ResourceCap("exponent overflow".into()))?;
            mu = field.mul(&mu, &field.pow(lam, exp)?);
        }
        if i < k {
            let di = d[(i, i)] as u64;
            let root = field.root(&mu, di).ok_or_else(|| {
                Error::ExtensionRequired(format!("{di}-th root of {mu} in {field}"))
            })?;
            z.push(root);
        } else if mu != field.one() {
            return Err(Error::PresentationDefect(
                "the torus system is inconsistent".into(),
            ));
        }
    }
    let mut out = Vec::with_capacity(k);
    for (row, &j) in passive.iter().enumerate() {
        let mut c = field.one();
        for (col, zc) in z.iter().enumerate() {
            let exp = i64::try_from(v[(row, col)])
                .map_err(|_| Error::ResourceCap("exponent overflow".into()))?;
            c = field.mul(&c, &field.pow(zc, exp)?);
        }
        out.push((j, c));
    }
    Ok(out)
}

/// `ρ_i = Π_{j passive} c_j^{a^j_i}`.
pub fn rho(map: &MonomialMap, center: &[(usize, Coeff)], field: Field) -> Result<Vec<Coeff>> {
    (0..map.b())
        .map(|i| {
            let mut r = field.one();
            for (j, c) in center {
                r = field.mul(&r, &field.pow(c, map.exponent(i, *j))?);
            }
            Ok(r)
        })
        .collect()
}

#[derive(Debug, Clone)]
pub struct EmbeddingResult {
    pub xi: Vec<HahnSeries>,
    pub rho: Vec<Coeff>,
    pub center: Vec<(usize, Coeff)>,
    pub residuals: Vec<Valuation>,
    pub cutoff: GroupElement,
    pub sigma_w: Cone,
    pub chart: Cone,
    pub map: MonomialMap,
    pub transforms: Vec<StrictTransform>,
    pub newton_steps: usize,
}

const NEWTON_STEP_CAP: usize = 10_000;

pub fn kaplansky_embed_fg(
    p: &TorificPresentation,
    fan: &Fan,
    cutoff: &GroupElement,
) -> Result<EmbeddingResult> {
    if !same_ctx(&p.ctx, cutoff.ctx()) {
        return Err(Error::ContextMismatch);
    }
    let w = p.weight_vector()?;
    let r = p.rational_rank();
    let sigma_w = find_sigma_w(fan, &w, r)?;
    let chart = fan
        .cones
        .iter()
        .find(|c| sigma_w.rays().iter().all(|ray| c.rays().contains(ray)))
        .cloned()
        .ok_or_else(|| Error::FanDefect(format!("no maximal cone contains {sigma_w}")))?;
    embed_in_chart(p, &chart, sigma_w, cutoff)
}

/// The embedding through a given regular maximal cone.
pub fn embed_in_chart(
    p: &TorificPresentation,
    chart: &Cone,
    sigma_w: Cone,
    cutoff: &GroupElement,
) -> Result<EmbeddingResult> {
    let w = p.weight_vector()?;
    let map = monomial_map_from_cone(chart, &w)?;
    let b = p.b();
    let field = p.field;
    let transforms = p
        .relations
        .iter()
        .map(|rel| strict_transform(&rel.polynomial(), &map))
        .collect::<Result<Vec<_>>>()?;
    let center = center_coordinates(p, &map)?;
    let rho_v = rho(&map, &center, field)?;
    let passive = map.passive();
    if transforms.len() != passive.len() {
        return Err(Error::PresentationDefect(format!(
            "{} relations for {} passive coordinates",
            transforms.len(),
            passive.len()
        )));
    }
    let ctx = p.ctx.clone();
    let mut point = vec![field.zero(); b];
    for (j, c) in &center {
        point[*j] = c.clone();
    }
    for t in &transforms {
        if !t.transform.evaluate(&point)?.is_zero() {
            return Err(Error::PresentationDefect(
                "the center does not lie on the strict transform".into(),
            ));
        }
    }
    let jac: Vec<Vec<Coeff>> = transforms
        .iter()
        .map(|t| {
            passive
                .iter()
                .map(|&j| t.transform.derivative(j).evaluate(&point))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    // only checks that the center is a smooth point
    invert(&jac, field)?;
    let derivs: Vec<Vec<Polynomial>> = transforms
        .iter()
        .map(|t| passive.iter().map(|&j| t.transform.derivative(j)).collect())
        .collect();
    let mono = |j: usize| {
        HahnSeries::monomial(
            ctx.clone(),
            field,
            field.one(),
            map.y_values[j].clone(),
            cutoff.clone(),
        )
    };
    let mut ys: Vec<HahnSeries> = (0..b)
        .map(|j| {
            if passive.contains(&j) {
                HahnSeries::constant(ctx.clone(), field, point[j].clone(), cutoff.clone())
            } else {
                mono(j)
            }
        })
        .collect::<Result<_>>()?;
    let mut last: Option<GroupElement> = None;
    let mut steps = 0;
    loop {
        let g = transforms
            .iter()
            .map(|t| substitute(&t.transform, &ys))
            .collect::<Result<Vec<_>>>()?;
        if g.iter().all(|s| s.is_zero()) {
            break;
        }
        steps += 1;
        if steps > NEWTON_STEP_CAP {
            return Err(Error::ResourceCap(format!(
                "Newton solve exceeded {NEWTON_STEP_CAP} steps"
            )));
        }
        let jser = derivs
            .iter()
            .map(|row| {
                row.iter()
                    .map(|d| substitute(d, &ys))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let jinv = invert_series(&jser)?;
        let mut min_val: Option<GroupElement> = None;
        for (row, &j) in passive.iter().enumerate() {
            let mut delta = HahnSeries::zero(ctx.clone(), field, cutoff.clone());
            for (col, gs) in g.iter().enumerate() {
                delta = delta.add(&gs.mul(&jinv[row][col])?)?;
            }
            if let Some((e, _)) = delta.terms().first() {
                min_val = Some(match min_val {
                    Some(m) => m.min(e)?,
                    None => e.clone(),
                });
            }
            ys[j] = ys[j].sub(&delta)?;
        }
        if let (Some(prev), Some(cur)) = (&last, &min_val) {
            if cur.compare(prev)? != Ordering::Greater {
                return Err(Error::PresentationDefect(format!(
                    "Newton update stalled at valuation {cur}"
                )));
            }
        }
        if min_val.is_none() {
            return Err(Error::PresentationDefect("singular Newton update".into()));
        }
        last = min_val;
    }
    let mut xi = Vec::with_capacity(b);
    for i in 0..b {
        let mut s = HahnSeries::one(ctx.clone(), field, cutoff.clone())?;
        for (j, y) in ys.iter().enumerate() {
            s = s.mul(&y.pow(map.exponent(i, j) as u32)?)?;
        }
        xi.push(s);
    }
    let residuals = residuals(p, &xi)?;
    Ok(EmbeddingResult {
        xi,
        rho: rho_v,
        center,
        residuals,
        cutoff: cutoff.clone(),
        sigma_w,
        chart: chart.clone(),
        map,
        transforms,
        newton_steps: steps,
    })
}

/// `ν_t(F_ℓ(ξ(t)))` by direct substitution.
pub fn residuals(p: &TorificPresentation, xi: &[HahnSeries]) -> Result<Vec<Valuation>> {
    p.relations
        .iter()
        .map(|r| Ok(substitute(&r.polynomial(), xi)?.valuation()))
        .collect()
}

/// Inverse of a matrix of series whose constant part is invertible.
fn invert_series(m: &[Vec<HahnSeries>]) -> Result<Vec<Vec<HahnSeries>>> {
    let n = m.len();
    let first = &m[0][0];
    let (ctx, field, cutoff) = (first.ctx().clone(), first.field(), first.cutoff().clone());
    let mut a: Vec<Vec<HahnSeries>> = Vec::with_capacity(n);
    for (i, row) in m.iter().enumerate() {
        let mut r = row.clone();
        for j in 0..n {
            r.push(if i == j {
                HahnSeries::one(ctx.clone(), field, cutoff.clone())?
            } else {
                HahnSeries::zero(ctx.clone(), field, cutoff.clone())
            });
        }
        a.push(r);
    }
    for col in 0..n {
        let piv = (col..n).find(|&r| a[r][col].is_unit()).ok_or_else(|| {
            Error::PresentationDefect("the strict transform is singular at the center".into())
        })?;
        a.swap(col, piv);
        let inv = a[col][col].inv_unit()?;
        a[col] = a[col].iter().map(|x| x.mul(&inv)).collect::<Result<_>>()?;
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let k = a[r][col].clone();
                let pivot = a[col].clone();
                for (x, p) in a[r].iter_mut().zip(&pivot) {
                    *x = x.sub(&k.mul(p)?)?;
                }
            }
        }
    }
    Ok(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

fn invert(m: &[Vec<Coeff>], field: Field) -> Result<Vec<Vec<Coeff>>> {
    let n = m.len();
    let mut a: Vec<Vec<Coeff>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { field.one() } else { field.zero() }));
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero()).ok_or_else(|| {
            Error::PresentationDefect("the strict transform is singular at the center".into())
        })?;
        a.swap(col, piv);
        let inv = field.inv(&a[col][col])?;
        for x in a[col].iter_mut() {
            *x = field.mul(x, &inv);
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let k = a[r][col].clone();
                let pivot = a[col].clone();
                for (x, p) in a[r].iter_mut().zip(&pivot) {
                    *x = field.sub(x, &field.mul(&k, p));
                }
            }
        }
    }
    Ok(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub residuals_ok: Vec<bool>,
    pub initial_forms_ok: Vec<bool>,
    pub binomials_ok: Vec<bool>,
    pub graded_samples: usize,
    pub graded_ok: bool,
    pub failures: Vec<String>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Residuals vanish below the cutoff, `in(ξ_i) = ρ_i t^{γ_i}`,
/// `ρ^m = λ ρ^n` for every relation, and initial forms multiply on random
/// monomials whose value lies below the cutoff.
pub fn verify_embedding(
    p: &TorificPresentation,
    e: &EmbeddingResult,
    seed: u64,
) -> Result<VerificationReport> {
    let field = p.field;
    let mut failures = Vec::new();
    let mut residuals_ok = Vec::new();
    for (l, v) in residuals(p, &e.xi)?.iter().enumerate() {
        let ok = v.at_least(&e.cutoff)?;
        if !ok {
            failures.push(format!(
                "relation {l}: residual valuation {v} below cutoff {}",
                e.cutoff
            ));
        }
        residuals_ok.push(ok);
    }
    let mut initial_forms_ok = Vec::new();
    for (i, x) in e.xi.iter().enumerate() {
        let ok = match x.initial_form() {
            Ok((c, g)) => c == e.rho[i] && g == p.gamma[i],
            Err(_) => false,
        };
        if !ok {
            failures.push(format!(
                "xi_{}: initial form differs from ({}, {})",
                i + 1,
                e.rho[i],
                p.gamma[i]
            ));
        }
        initial_forms_ok.push(ok);
    }
    let rho_pow = |exps: &[u32]| -> Result<Coeff> {
        let mut acc = field.one();
        for (r, &k) in e.rho.iter().zip(exps) {
            acc = field.mul(&acc, &field.pow(r, k as i64)?);
        }
        Ok(acc)
    };
    let mut binomials_ok = Vec::new();
    for (l, rel) in p.relations.iter().enumerate() {
        let ok = rho_pow(&rel.m)? == field.mul(&rel.lambda, &rho_pow(&rel.n)?);
        if !ok {
            failures.push(format!("relation {l}: rho^m != lambda rho^n"));
        }
        binomials_ok.push(ok);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut graded_ok = true;
    let mut samples = 0;
    let mut attempts = 0;
    while samples < 50 && attempts < 5000 {
        attempts += 1;
        let exps: Vec<u32> = (0..p.b()).map(|_| rng.gen_range(0..4)).collect();
        let value = p.weight(&exps)?;
        if value.compare(&e.cutoff)? != Ordering::Less {
            continue;
        }
        samples += 1;
        let mut prod = HahnSeries::one(p.ctx.clone(), field, e.cutoff.clone())?;
        for (x, &k) in e.xi.iter().zip(&exps) {
            prod = prod.mul(&x.pow(k)?)?;
        }
        let ok = matches!(prod.initial_form(), Ok((c, g)) if g == value && c == rho_pow(&exps)?);
        if !ok {
            graded_ok = false;
            failures.push(format!(
                "monomial {exps:?}: initial form is not rho^e t^(w(e))"
            ));
        }
    }
    Ok(VerificationReport {
        residuals_ok,
        initial_forms_ok,
        binomials_ok,
        graded_samples: samples,
        graded_ok,
        failures,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IntertwineReport {
    pub per_generator: Vec<bool>,
    pub well_ordering_guard: bool,
}

impl IntertwineReport {
    pub fn passed(&self) -> bool {
        self.well_ordering_guard && self.per_generator.iter().all(|&b| b)
    }
}

/// Whether the automorphism given by `units` maps each `ξ_i` of the first
/// embedding to that of the second, below the common cutoff.
pub fn automorphism_intertwine_check(
    e1: &EmbeddingResult,
    e2: &EmbeddingResult,
    units: &[HahnSeries],
) -> Result<IntertwineReport> {
    if e1.xi.len() != e2.xi.len() {
        return Err(Error::Precondition(
            "embeddings of different presentations".into(),
        ));
    }
    let cutoff = e1.cutoff.min(&e2.cutoff)?;
    let mut per_generator = Vec::new();
    let mut guard = true;
    for (a, b) in e1.xi.iter().zip(&e2.xi) {
        let image = apply_group_automorphism(units, a)?;
        per_generator.push(image.agrees_below(b, &cutoff)?);
        guard &= exponent_shift_guard(a, &image, units)?;
    }
    Ok(IntertwineReport {
        per_generator,
        well_ordering_guard: guard,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupContext;

    fn q(n: i64) -> Coeff {
        Coeff::from_integer(n.into())
    }

    fn pi_presentation() -> TorificPresentation {
        let ctx = GroupContext::integers_plus_pi();
        let f = Field::Rationals;
        let g = |a, b| GroupElement::new(ctx.clone(), vec![a, b]);
        let tail = Polynomial::monomial(3, f, vec![0, 0, 1], q(-1));
        let rel = Relation {
            m: vec![0, 2, 0],
            n: vec![3, 0, 0],
            lambda: q(1),
            tail,
        };
        TorificPresentation::new(ctx.clone(), f, vec![g(2, 0), g(3, 0), g(6, 1)], vec![rel])
            .unwrap()
    }

    fn pi_map() -> MonomialMap {
        let p = pi_presentation();
        let cone = Cone::new(vec![vec![2, 3, 9], vec![1, 2, 3], vec![2, 3, 10]]).unwrap();
        monomial_map_from_cone(&cone, &p.weight_vector().unwrap()).unwrap()
    }

    #[test]
    fn strict_transforms_example_pi() {
        let f = Field::Rationals;
        let map = pi_map();
        let u = |i| Polynomial::var(3, f, i);
        let cusp = u(0).pow(3).sub(&u(1).pow(2));
        let st = strict_transform(&cusp, &map).unwrap();
        assert_eq!(st.factor, vec![6, 3, 6]);
        assert_eq!(st.transform.to_string(), "u2 - 1");
        assert_eq!(st.unit, q(-1));
        let full = u(1).pow(2).sub(&u(0).pow(3)).sub(&u(2));
        let st = strict_transform(&full, &map).unwrap();
        assert_eq!(st.factor, vec![6, 3, 6]);
        let y = |i| Polynomial::var(3, f, i);
        let expected = y(1)
            .sub(&Polynomial::one(3, f))
            .sub(&y(0).pow(3).mul(&y(2).pow(4)));
        assert_eq!(st.transform, expected);
    }

    #[test]
    fn identity_chart_transform() {
        let ctx = GroupContext::integers();
        let w = WeightVector::new(vec![GroupElement::new(ctx, vec![5])]).unwrap();
        let map = monomial_map_from_cone(&Cone::new(vec![vec![1]]).unwrap(), &w).unwrap();
        let st = strict_transform(&Polynomial::var(1, Field::Rationals, 0), &map).unwrap();
        assert_eq!(
            (st.factor, st.transform.to_string()),
            (vec![1], "1".to_string())
        );
    }

    #[test]
    fn center_and_rho() {
        let p = pi_presentation();
        let map = pi_map();
        let c = center_coordinates(&p, &map).unwrap();
        assert_eq!(c, vec![(1, q(1))]);
        assert_eq!(
            rho(&map, &c, Field::Rationals).unwrap(),
            vec![q(1), q(1), q(1)]
        );
        let two = rho(&map, &[(1, q(2))], Field::Rationals).unwrap();
        assert_eq!(two, vec![q(2), q(4), q(8)]);
    }

    #[test]
    fn example_pi_embedding() {
        let p = pi_presentation();
        let ctx = p.ctx().clone();
        let fan = Fan::from_cones(vec![Cone::new(vec![
            vec![2, 3, 9],
            vec![1, 2, 3],
            vec![2, 3, 10],
        ])
        .unwrap()])
        .unwrap();
        let cutoff = ctx.parse_element("10+3pi").unwrap();
        let e = kaplansky_embed_fg(&p, &fan, &cutoff).unwrap();
        assert_eq!(e.xi[0].to_string(), "t^2 + t^{2+π} + O(t^{10+3π})");
        assert_eq!(
            e.xi[1].to_string(),
            "t^3 + 2*t^{3+π} + t^{3+2π} + O(t^{10+3π})"
        );
        assert!(e.residuals.iter().all(|v| v.is_infinite()));
        let report = verify_embedding(&p, &e, 7).unwrap();
        assert!(report.passed(), "{:?}", report.failures);
        assert_eq!(report.graded_samples, 50);
    }

    #[test]
    fn perturbed_embedding_fails() {
        let p = pi_presentation();
        let ctx = p.ctx().clone();
        let fan = Fan::from_cones(vec![Cone::new(vec![
            vec![2, 3, 9],
            vec![1, 2, 3],
            vec![2, 3, 10],
        ])
        .unwrap()])
        .unwrap();
        let mut e = kaplansky_embed_fg(&p, &fan, &ctx.parse_element("10+3pi").unwrap()).unwrap();
        let bump = HahnSeries::monomial(
            ctx.clone(),
            Field::Rationals,
            q(1),
            ctx.parse_element("2+pi").unwrap(),
            e.cutoff.clone(),
        )
        .unwrap();
        e.xi[0] = e.xi[0].sub(&bump).unwrap().sub(&bump).unwrap();
        let report = verify_embedding(&p, &e, 7).unwrap();
        assert_eq!(report.residuals_ok, vec![false]);
    }

    #[test]
    fn presentation_validation() {
        let ctx = GroupContext::integers();
        let f = Field::Rationals;
        let g = |a| GroupElement::new(ctx.clone(), vec![a]);
        let bad = Relation {
            m: vec![0, 2],
            n: vec![2, 0],
            lambda: q(1),
            tail: Polynomial::zero(2, f),
        };
        assert!(TorificPresentation::new(ctx.clone(), f, vec![g(2), g(3)], vec![bad]).is_err());
        let low_tail = Relation {
            m: vec![0, 2],
            n: vec![3, 0],
            lambda: q(1),
            tail: Polynomial::var(2, f, 1),
        };
        assert!(
            TorificPresentation::new(ctx.clone(), f, vec![g(2), g(3)], vec![low_tail]).is_err()
        );
        let file = pi_presentation().to_file();
        let json = serde_json::to_string(&file).unwrap();
        let back: PresentationFile = serde_json::from_str(&json).unwrap();
        assert_eq!(back.build(4096).unwrap().to_file(), file);
    }
}
