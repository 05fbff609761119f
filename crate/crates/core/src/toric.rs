//! Rational cones and fans in the dual lattice `ℤ̌^b`, regular
//! subdivisions by stellar steps, and the cone `σ_w` of a weight vector.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_integer::Integer;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::GroupElement;
use crate::lattice::{gcd_all, IntMatrix};
use crate::semigroup::RelationLattice;

pub const MAX_AMBIENT_DIM: usize = 4;
pub const DEFAULT_STELLAR_BUDGET: usize = 500;

fn dot(a: &[i64], b: &[i64]) -> i128 {
    a.iter().zip(b).map(|(x, y)| *x as i128 * *y as i128).sum()
}

fn primitive(v: &[i128]) -> Vec<i64> {
    let g = v.iter().fold(0i128, |g, &x| g.gcd(&x));
    v.iter()
        .map(|&x| i64::try_from(x / g.max(1)).expect("ray exceeds i64"))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Cone {
    rays: Vec<Vec<i64>>,
}

impl Cone {
    /// Rays must be nonzero, primitive and of equal length.
    pub fn new(rays: Vec<Vec<i64>>) -> Result<Self> {
        let b = rays.first().map_or(0, |r| r.len());
        for r in &rays {
            if r.len() != b {
                return Err(Error::Parse("rays of different lengths".into()));
            }
            if gcd_all(r) != 1 {
                return Err(Error::Precondition(format!("ray {r:?} is not primitive")));
            }
        }
        Ok(Cone { rays })
    }

    pub fn rays(&self) -> &[Vec<i64>] {
        &self.rays
    }

    pub fn ambient_dim(&self) -> usize {
        self.rays.first().map_or(0, |r| r.len())
    }

    pub fn dim(&self) -> usize {
        self.matrix().rank()
    }

    fn matrix(&self) -> IntMatrix {
        IntMatrix::from_rows(self.ambient_dim(), &self.rays)
    }

    pub fn is_simplicial(&self) -> bool {
        self.dim() == self.rays.len()
    }

    /// Simplicial and the rays extend to a basis of `ℤ^b`.
    pub fn is_regular(&self) -> bool {
        if self.rays.len() == self.ambient_dim() {
            return self.matrix().det().abs() == 1;
        }
        self.is_simplicial() && self.matrix().elementary_divisors().iter().all(|&d| d == 1)
    }

    /// Multiplicity of a full-dimensional simplicial cone.
    pub fn multiplicity(&self) -> i128 {
        self.matrix().det().abs()
    }

    /// Coordinates of `v` in the ray basis of a full-dimensional simplicial
    /// cone, as `(numerators, positive denominator)`.
    pub fn coordinates(&self, v: &[i64]) -> Option<(Vec<i128>, i128)> {
        let a = self.matrix();
        let det = a.det();
        if det == 0 || a.rows() != a.cols() {
            return None;
        }
        let adj = a.adjugate();
        let s = det.signum();
        let num = (0..a.cols())
            .map(|i| {
                s * (0..a.rows())
                    .map(|j| v[j] as i128 * adj[(j, i)])
                    .sum::<i128>()
            })
            .collect();
        Some((num, det.abs()))
    }

    pub fn contains(&self, v: &[i64]) -> bool {
        self.coordinates(v)
            .is_some_and(|(num, _)| num.iter().all(|&x| x >= 0))
    }

    /// `m·a ≥ 0` for every ray: `m` lies in the dual cone.
    pub fn dual_contains(&self, m: &[i64]) -> bool {
        self.rays.iter().all(|r| dot(r, m) >= 0)
    }

    fn sorted(&self) -> Vec<Vec<i64>> {
        let mut r = self.rays.clone();
        r.sort();
        r
    }

    /// First set of columns (lexicographically) with a nonzero maximal minor.
    fn basis_columns(&self) -> Option<Vec<usize>> {
        let b = self.ambient_dim();
        let d = self.rays.len();
        subsets(b, d)
            .into_iter()
            .find(|cols| self.restrict(cols).det() != 0)
    }

    fn restrict(&self, cols: &[usize]) -> IntMatrix {
        let rows: Vec<Vec<i64>> = self
            .rays
            .iter()
            .map(|r| cols.iter().map(|&c| r[c]).collect())
            .collect();
        IntMatrix::from_rows(cols.len(), &rows)
    }
}

impl fmt::Display for Cone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rays: Vec<String> = self
            .rays
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
        write!(f, "<{}>", rays.join(", "))
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    if n < k {
        return Vec::new();
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out.sort();
    out
}

/// `w = (γ_1, …, γ_b)` with every entry positive.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightVector {
    entries: Vec<GroupElement>,
}

impl WeightVector {
    pub fn new(entries: Vec<GroupElement>) -> Result<Self> {
        for e in &entries {
            if !e.is_positive()? {
                return Err(Error::Precondition(format!(
                    "weight entry {e} is not positive"
                )));
            }
        }
        if entries.is_empty() {
            return Err(Error::Precondition("empty weight vector".into()));
        }
        Ok(WeightVector { entries })
    }

    pub fn entries(&self) -> &[GroupElement] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `Σ v_i γ_i`; its zero test is exact on coordinates.
    pub fn dot(&self, v: &[i64]) -> Result<GroupElement> {
        let mut acc = self.entries[0].ctx().zero();
        for (g, &k) in self.entries.iter().zip(v) {
            acc = acc.add(&g.scale(k))?;
        }
        Ok(acc)
    }

    /// `Σ v_i γ_i` for wide integer coefficients.
    fn dot_wide(&self, v: &[i128]) -> Result<GroupElement> {
        let narrow: Vec<i64> = v
            .iter()
            .map(|&x| {
                i64::try_from(x).map_err(|_| Error::ResourceCap("coefficient exceeds i64".into()))
            })
            .collect::<Result<_>>()?;
        self.dot(&narrow)
    }

    /// Coordinates of `w` in the ray basis of a simplicial cone, scaled by
    /// the positive multiplicity of the chosen minor.
    fn coordinates_in(&self, cone: &Cone) -> Result<(Vec<GroupElement>, i128)> {
        let cols = cone
            .basis_columns()
            .ok_or_else(|| Error::FanDefect(format!("cone {cone} is not simplicial")))?;
        let a = cone.restrict(&cols);
        let det = a.det();
        let adj = a.adjugate();
        let mut lambda = Vec::with_capacity(cols.len());
        for i in 0..cols.len() {
            let col: Vec<i128> = (0..cols.len())
                .map(|j| det.signum() * adj[(j, i)])
                .collect();
            let w: Vec<GroupElement> = cols.iter().map(|&c| self.entries[c].clone()).collect();
            lambda.push(WeightVector { entries: w }.dot_wide(&col)?);
        }
        // the minor only sees some coordinates; check the rest reproduce w
        let d = det.abs();
        for c in 0..self.entries.len() {
            let mut acc = self.entries[0].ctx().zero();
            for (l, r) in lambda.iter().zip(&cone.rays) {
                acc = acc.add(&l.scale(r[c]))?;
            }
            if acc != self.entries[c].scale(d as i64) {
                return Err(Error::FanDefect(format!("w is not in the span of {cone}")));
            }
        }
        Ok((lambda, d))
    }
}

impl fmt::Display for WeightVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let e: Vec<String> = self.entries.iter().map(|g| g.to_string()).collect();
        write!(f, "({})", e.join(","))
    }
}

/// Generators of `W = (∩ H_ℓ) ∩ ℝ̌^b_{≥0}`: the minimal-support nonnegative
/// vectors orthogonal to every row of the lattice.
pub fn weight_cone(lattice: &RelationLattice) -> Result<Cone> {
    let b = lattice.b();
    if b > MAX_AMBIENT_DIM + 4 {
        return Err(Error::ResourceCap(format!("ambient dimension {b}")));
    }
    let mut rays: Vec<Vec<i64>> = Vec::new();
    for k in 1..=b {
        for support in subsets(b, k) {
            let rows: Vec<Vec<i64>> = lattice
                .basis
                .iter()
                .map(|r| support.iter().map(|&c| r[c]).collect())
                .collect();
            let kernel = if rows.is_empty() {
                IntMatrix::identity(k)
            } else {
                IntMatrix::from_rows(k, &rows).transpose().left_kernel()
            };
            if kernel.rows() != 1 {
                continue;
            }
            let v = kernel.row_i64(0);
            let sign = if v.iter().all(|&x| x > 0) {
                1
            } else if v.iter().all(|&x| x < 0) {
                -1
            } else {
                continue;
            };
            let mut ray = vec![0i64; b];
            for (&c, &x) in support.iter().zip(&v) {
                ray[c] = sign * x;
            }
            if !rays.iter().any(|r| {
                support.iter().all(|&c| r[c] != 0) && r.iter().filter(|&&x| x != 0).count() < k
            }) {
                rays.push(ray);
            }
        }
    }
    let expected = b - lattice.rank();
    let cone = Cone::new(rays)?;
    if cone.dim() != expected {
        return Err(Error::Precondition(format!(
            "weight cone has dimension {} instead of {expected}",
            cone.dim()
        )));
    }
    Ok(cone)
}

/// Something a fan must be compatible with.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Constraint {
    /// The hyperplane `{x : n·x = 0}` given by its normal.
    Hyperplane(Vec<i64>),
    /// A simplicial cone given by its rays.
    Cone(Vec<Vec<i64>>),
}

impl Constraint {
    /// Hyperplanes such that a cone on one side of each of them meets the
    /// constraint in a face.
    fn hyperplanes(&self) -> Result<Vec<Vec<i64>>> {
        match self {
            Constraint::Hyperplane(n) => Ok(vec![n.clone()]),
            Constraint::Cone(rays) => {
                let c = Cone::new(rays.clone())?;
                if !c.is_simplicial() {
                    return Err(Error::Precondition(format!(
                        "constraint {c} is not simplicial"
                    )));
                }
                let b = c.ambient_dim();
                let d = rays.len();
                let mut out = c.matrix().transpose().left_kernel().to_rows();
                if d >= 2 {
                    for i in 0..d {
                        let others: Vec<Vec<i64>> = (0..d)
                            .filter(|&j| j != i)
                            .map(|j| rays[j].clone())
                            .collect();
                        let kernel = IntMatrix::from_rows(b, &others).transpose().left_kernel();
                        let n = kernel
                            .to_rows()
                            .into_iter()
                            .find(|n| dot(n, &rays[i]) != 0)
                            .expect("simplicial cone has facet normals");
                        out.push(n);
                    }
                }
                Ok(out)
            }
        }
    }

    fn rays_to_insert(&self) -> Vec<Vec<i64>> {
        match self {
            Constraint::Cone(rays) if rays.len() == 1 => rays.clone(),
            _ => Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fan {
    pub b: usize,
    pub cones: Vec<Cone>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub trace: Vec<String>,
}

impl Fan {
    /// The quadrant as a single regular cone.
    pub fn quadrant(b: usize) -> Self {
        let rays = (0..b)
            .map(|i| (0..b).map(|j| i64::from(i == j)).collect())
            .collect();
        Fan {
            b,
            cones: vec![Cone { rays }],
            trace: Vec::new(),
        }
    }

    pub fn from_cones(cones: Vec<Cone>) -> Result<Self> {
        let b = cones.first().map_or(0, |c| c.ambient_dim());
        if cones
            .iter()
            .any(|c| c.ambient_dim() != b || c.rays.len() != b)
        {
            return Err(Error::FanDefect(
                "maximal cones must be full-dimensional simplicial".into(),
            ));
        }
        Ok(Fan {
            b,
            cones,
            trace: Vec::new(),
        })
    }

    pub fn rays(&self) -> Vec<Vec<i64>> {
        let set: BTreeSet<Vec<i64>> = self
            .cones
            .iter()
            .flat_map(|c| c.rays.iter().cloned())
            .collect();
        set.into_iter().collect()
    }

    /// Stellar subdivision at the primitive vector `p`: every cone containing
    /// `p` is replaced by the cones obtained by swapping `p` for a ray with a
    /// positive coefficient. Returns whether anything changed.
    pub fn stellar(&mut self, p: &[i64]) -> bool {
        let mut changed = false;
        let mut out = Vec::with_capacity(self.cones.len() + 4);
        for cone in &self.cones {
            match cone.coordinates(p) {
                Some((num, _))
                    if num.iter().all(|&x| x >= 0)
                        && num.iter().filter(|&&x| x > 0).count() > 1 =>
                {
                    changed = true;
                    for (i, &x) in num.iter().enumerate() {
                        if x > 0 {
                            let mut rays = cone.rays.clone();
                            rays[i] = p.to_vec();
                            out.push(Cone { rays });
                        }
                    }
                }
                _ => out.push(cone.clone()),
            }
        }
        self.cones = out;
        changed
    }

    fn sort(&mut self) {
        self.cones.sort_by_key(|c| c.sorted());
    }
}

impl fmt::Display for Fan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.cones {
            writeln!(f, "{c}")?;
        }
        Ok(())
    }
}

struct Budget {
    used: usize,
    cap: usize,
}

impl Budget {
    fn spend(&mut self) -> Result<()> {
        self.used += 1;
        if self.used > self.cap {
            return Err(Error::ResourceCap(format!(
                "stellar subdivision budget of {} steps exceeded",
                self.cap
            )));
        }
        Ok(())
    }
}

/// A regular fan with support the quadrant `ℝ̌^b_{≥0}` compatible with every
/// constraint. Hyperplanes are cut by splitting crossing edges, ray
/// constraints become rays of the fan, and each remaining singular cone is
/// refined at the lattice point of its fundamental parallelepiped with the
/// smallest coefficient sum.
pub fn regular_subdivision(b: usize, constraints: &[Constraint], max_steps: usize) -> Result<Fan> {
    if b == 0 || b > MAX_AMBIENT_DIM {
        return Err(Error::ResourceCap(format!(
            "ambient dimension {b} outside 1..={MAX_AMBIENT_DIM}"
        )));
    }
    let mut fan = Fan::quadrant(b);
    let mut budget = Budget {
        used: 0,
        cap: max_steps,
    };
    let mut planes = Vec::new();
    for c in constraints {
        check_len(c, b)?;
        planes.extend(c.hyperplanes()?);
    }
    for n in &planes {
        if n.iter().all(|&x| x == 0) {
            continue;
        }
        while let Some(p) = crossing_point(&fan, n) {
            budget.spend()?;
            fan.trace.push(format!("split {n:?} at {p:?}"));
            fan.stellar(&p);
        }
    }
    for c in constraints {
        for r in c.rays_to_insert() {
            if r.iter().any(|&x| x < 0) {
                return Err(Error::Precondition(format!(
                    "ray {r:?} is outside the quadrant"
                )));
            }
            if fan.stellar(&r) {
                budget.spend()?;
                fan.trace.push(format!("insert ray {r:?}"));
            }
        }
    }
    while let Some(idx) = fan.cones.iter().position(|c| c.multiplicity() > 1) {
        let p = parallelepiped_point(&fan.cones[idx])?;
        budget.spend()?;
        fan.trace
            .push(format!("refine {} at {p:?}", fan.cones[idx]));
        fan.stellar(&p);
    }
    fan.sort();
    Ok(fan)
}

fn check_len(c: &Constraint, b: usize) -> Result<()> {
    let ok = match c {
        Constraint::Hyperplane(n) => n.len() == b,
        Constraint::Cone(rays) => !rays.is_empty() && rays.iter().all(|r| r.len() == b),
    };
    if ok {
        Ok(())
    } else {
        Err(Error::Parse(format!(
            "constraint {c:?} does not live in dimension {b}"
        )))
    }
}

fn crossing_point(fan: &Fan, n: &[i64]) -> Option<Vec<i64>> {
    for cone in &fan.cones {
        for a in &cone.rays {
            for c in &cone.rays {
                let (na, nc) = (dot(n, a), dot(n, c));
                if na > 0 && nc < 0 {
                    let p: Vec<i128> = a
                        .iter()
                        .zip(c)
                        .map(|(&x, &y)| na * y as i128 - nc * x as i128)
                        .collect();
                    return Some(primitive(&p));
                }
            }
        }
    }
    None
}

/// The nonzero lattice point `Σ λ_i v_i` with `0 ≤ λ_i < 1` minimizing
/// `Σ λ_i`, ties broken by the coordinate vector.
fn parallelepiped_point(cone: &Cone) -> Result<Vec<i64>> {
    let a = cone.matrix();
    let det = a.det().abs();
    if det > 1_000_000 {
        return Err(Error::ResourceCap(format!(
            "cone {cone} has multiplicity {det}"
        )));
    }
    let (d, _, v) = a.snf();
    let v_inv = {
        let adj = v.adjugate();
        let s = v.det();
        let mut m = adj;
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                m[(i, j)] *= s;
            }
        }
        m
    };
    let n = cone.rays.len();
    let divisors: Vec<i128> = (0..n).map(|i| d[(i, i)].abs()).collect();
    let mut best: Option<(i128, Vec<i64>)> = None;
    let mut y = vec![0i128; n];
    loop {
        // x = y·V⁻¹ runs over coset representatives of ℤ^b / row lattice
        let x: Vec<i64> = (0..n)
            .map(|j| (0..n).map(|i| y[i] * v_inv[(i, j)]).sum::<i128>() as i64)
            .collect();
        let (num, den) = cone.coordinates(&x).expect("full-dimensional cone");
        let frac: Vec<i128> = num.iter().map(|&l| l.mod_floor(&den)).collect();
        if frac.iter().any(|&l| l != 0) {
            let point: Vec<i64> = (0..n)
                .map(|j| {
                    (frac
                        .iter()
                        .zip(&cone.rays)
                        .map(|(&l, r)| l * r[j] as i128)
                        .sum::<i128>()
                        / den) as i64
                })
                .collect();
            let s: i128 = frac.iter().sum();
            let better = match &best {
                None => true,
                Some((bs, bp)) => (s, &point) < (*bs, bp),
            };
            if better {
                best = Some((s, point));
            }
        }
        let mut k = 0;
        while k < n {
            y[k] += 1;
            if y[k] < divisors[k] {
                break;
            }
            y[k] = 0;
            k += 1;
        }
        if k == n {
            break;
        }
    }
    best.map(|(_, p)| p)
        .ok_or_else(|| Error::FanDefect(format!("no interior lattice point in {cone}")))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FanAudit {
    pub cones: usize,
    pub regular: bool,
    pub volume_identity: bool,
    pub facets_matched: bool,
    pub samples_covered: bool,
    pub constraints_compatible: bool,
    pub defects: Vec<String>,
}

impl FanAudit {
    pub fn passed(&self) -> bool {
        self.regular
            && self.volume_identity
            && self.facets_matched
            && self.samples_covered
            && self.constraints_compatible
    }
}

/// Independent checks that `fan` is a regular subdivision of the quadrant
/// compatible with the constraints.
pub fn audit_fan(fan: &Fan, constraints: &[Constraint]) -> Result<FanAudit> {
    let b = fan.b;
    let mut defects = Vec::new();
    let regular = fan
        .cones
        .iter()
        .all(|c| c.rays.len() == b && c.multiplicity() == 1);
    if !regular {
        defects.push("non-regular maximal cone".into());
    }
    // Σ |det| / Π (1·v) equals 1 exactly when the cones tile the quadrant
    let mut volume = BigRational::from_integer(0.into());
    for c in &fan.cones {
        let mut prod = num_bigint::BigInt::from(1);
        for r in &c.rays {
            let s: i64 = r.iter().sum();
            if s <= 0 || r.iter().any(|&x| x < 0) {
                defects.push(format!("ray {r:?} outside the quadrant"));
            }
            prod *= s;
        }
        volume += BigRational::new(c.multiplicity().into(), prod);
    }
    let volume_identity = volume == BigRational::from_integer(1.into());
    if !volume_identity {
        defects.push(format!("volume sum {volume} differs from 1"));
    }
    let facets_matched = audit_facets(fan, &mut defects);
    let samples_covered = audit_samples(fan, &mut defects);
    let mut constraints_compatible = true;
    for c in constraints {
        for n in c.hyperplanes()? {
            for cone in &fan.cones {
                let signs: BTreeSet<Ordering> =
                    cone.rays.iter().map(|r| dot(&n, r).cmp(&0)).collect();
                if signs.contains(&Ordering::Less) && signs.contains(&Ordering::Greater) {
                    constraints_compatible = false;
                    defects.push(format!("{cone} crosses hyperplane {n:?}"));
                }
            }
        }
        for r in c.rays_to_insert() {
            for cone in &fan.cones {
                if cone.contains(&r) && !cone.rays.contains(&r) {
                    constraints_compatible = false;
                    defects.push(format!("ray {r:?} is interior to {cone}"));
                }
            }
        }
    }
    Ok(FanAudit {
        cones: fan.cones.len(),
        regular,
        volume_identity,
        facets_matched,
        samples_covered,
        constraints_compatible,
        defects,
    })
}

type Facet = Vec<Vec<i64>>;

fn audit_facets(fan: &Fan, defects: &mut Vec<String>) -> bool {
    let b = fan.b;
    // facet rays -> (cone index, the ray opposite the facet)
    let mut facets: BTreeMap<Facet, Vec<(usize, Vec<i64>)>> = BTreeMap::new();
    for (k, c) in fan.cones.iter().enumerate() {
        for skip in 0..c.rays.len() {
            let mut f: Vec<Vec<i64>> = (0..c.rays.len())
                .filter(|&i| i != skip)
                .map(|i| c.rays[i].clone())
                .collect();
            f.sort();
            facets.entry(f).or_default().push((k, c.rays[skip].clone()));
        }
    }
    let mut ok = true;
    for (f, owners) in &facets {
        let boundary = (0..b).any(|j| f.iter().all(|r| r[j] == 0));
        let normal = if b == 1 {
            vec![1]
        } else {
            let k = IntMatrix::from_rows(b, f).transpose().left_kernel();
            if k.rows() != 1 {
                defects.push(format!("degenerate facet {f:?}"));
                ok = false;
                continue;
            }
            k.row_i64(0)
        };
        match (boundary, owners.len()) {
            (true, 1) => {}
            (false, 2) => {
                let s0 = dot(&normal, &owners[0].1).signum();
                let s1 = dot(&normal, &owners[1].1).signum();
                if s0 * s1 != -1 {
                    defects.push(format!("cones on the same side of facet {f:?}"));
                    ok = false;
                }
            }
            _ if b == 1 => {}
            (_, n) => {
                defects.push(format!("facet {f:?} has {n} adjacent cones"));
                ok = false;
            }
        }
    }
    ok
}

fn audit_samples(fan: &Fan, defects: &mut Vec<String>) -> bool {
    let side: i64 = match fan.b {
        1 | 2 => 12,
        3 => 7,
        _ => 4,
    };
    let mut missed: Vec<Vec<i64>> = Vec::new();
    let mut x = vec![0i64; fan.b];
    loop {
        if x.iter().any(|&v| v != 0) && !fan.cones.iter().any(|c| c.contains(&x)) {
            missed.push(x.clone());
        }
        let mut k = 0;
        while k < fan.b {
            x[k] += 1;
            if x[k] <= side {
                break;
            }
            x[k] = 0;
            k += 1;
        }
        if k == fan.b {
            break;
        }
    }
    match missed.len() {
        0 => return true,
        1 => defects.push(format!("sample {:?} not covered", missed[0])),
        n => defects.push(format!("{n} samples not covered, first {:?}", missed[0])),
    }
    false
}

/// The unique cone of the fan (a face of a maximal cone) containing `w` in
/// its relative interior, required to have dimension `r`.
pub fn find_sigma_w(fan: &Fan, w: &WeightVector, r: usize) -> Result<Cone> {
    let mut found: BTreeSet<Vec<Vec<i64>>> = BTreeSet::new();
    let mut faces = Vec::new();
    for cone in &fan.cones {
        if cone.ambient_dim() != w.len() {
            return Err(Error::FanDefect(
                "fan and weight vector dimensions differ".into(),
            ));
        }
        let (lambda, _) = w.coordinates_in(cone)?;
        let mut support = Vec::new();
        let mut inside = true;
        for (i, l) in lambda.iter().enumerate() {
            if l.is_zero() {
                continue;
            }
            if l.is_positive()? {
                support.push(i);
            } else {
                inside = false;
                break;
            }
        }
        if inside {
            let face = Cone {
                rays: support.iter().map(|&i| cone.rays[i].clone()).collect(),
            };
            if found.insert(face.sorted()) {
                faces.push(face);
            }
        }
    }
    match faces.len() {
        0 => Err(Error::FanDefect(format!(
            "no cone of the fan contains w = {w}"
        ))),
        1 => {
            let face = faces.pop().unwrap();
            if face.rays.len() != r {
                return Err(Error::FanDefect(format!(
                    "the cone {face} containing w has dimension {} instead of {r}",
                    face.rays.len()
                )));
            }
            Ok(face)
        }
        n => Err(Error::FanDefect(format!(
            "{n} distinct cones contain w in their relative interior"
        ))),
    }
}

/// `u_i = Π_j y_j^{a^j_i}` for a regular maximal cone, with the values
/// `ν(y_j)` read off from the weight vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonomialMap {
    pub rays: Vec<Vec<i64>>,
    pub y_values: Vec<GroupElement>,
}

impl MonomialMap {
    /// Exponent of `y_j` in `u_i`.
    pub fn exponent(&self, i: usize, j: usize) -> i64 {
        self.rays[j][i]
    }

    pub fn b(&self) -> usize {
        self.rays.len()
    }

    /// Indices `j` with `ν(y_j) > 0`; they span `σ_w`.
    pub fn active(&self) -> Vec<usize> {
        (0..self.b())
            .filter(|&j| !self.y_values[j].is_zero())
            .collect()
    }

    pub fn passive(&self) -> Vec<usize> {
        (0..self.b())
            .filter(|&j| self.y_values[j].is_zero())
            .collect()
    }

    /// `u_1 = y_1^2*y_2*y_3^2`-style rendering.
    pub fn display_lines(&self) -> Vec<String> {
        (0..self.b())
            .map(|i| {
                let factors: Vec<String> = (0..self.b())
                    .filter(|&j| self.exponent(i, j) != 0)
                    .map(|j| match self.exponent(i, j) {
                        1 => format!("y{}", j + 1),
                        e => format!("y{}^{e}", j + 1),
                    })
                    .collect();
                let rhs = if factors.is_empty() {
                    "1".into()
                } else {
                    factors.join("*")
                };
                format!("u{} = {rhs}", i + 1)
            })
            .collect()
    }
}

pub fn monomial_map_from_cone(cone: &Cone, w: &WeightVector) -> Result<MonomialMap> {
    if cone.rays.len() != cone.ambient_dim() || !cone.is_regular() {
        return Err(Error::FanDefect(format!(
            "{cone} is not a regular maximal cone"
        )));
    }
    let (lambda, _) = w.coordinates_in(cone)?;
    for l in &lambda {
        if !l.is_nonnegative()? {
            return Err(Error::FanDefect(format!("w = {w} lies outside {cone}")));
        }
    }
    Ok(MonomialMap {
        rays: cone.rays.clone(),
        y_values: lambda,
    })
}

/// Nested regular cones `σ_0 ⊃ σ_1 ⊃ …` around `w`: each step pivots on the
/// ray with the smallest coordinate and adds to it the integer parts of the
/// other coordinates divided by the smallest.
pub fn jacobi_perron_refine(start: &Cone, w: &WeightVector, steps: usize) -> Result<Vec<Cone>> {
    if !start.is_regular() {
        return Err(Error::Precondition(format!("{start} is not regular")));
    }
    let mut cones = vec![start.clone()];
    if start.rays.len() == 1 {
        cones.resize(steps + 1, start.clone());
        return Ok(cones);
    }
    let mut cur = start.clone();
    let (mut lambda, _) = w.coordinates_in(&cur)?;
    for _ in 0..steps {
        for l in &lambda {
            if !l.is_positive()? {
                return Err(Error::Precondition(format!(
                    "w = {w} lies on a face of {cur}"
                )));
            }
        }
        let mut p = 0;
        for i in 1..lambda.len() {
            if lambda[i].compare(&lambda[p])? == Ordering::Less {
                p = i;
            }
        }
        let mut rays = cur.rays.clone();
        let mut next_lambda = lambda.clone();
        for i in 0..lambda.len() {
            if i == p {
                continue;
            }
            let n = lambda[p].floor_div(&lambda[i])?;
            for (x, y) in rays[p].iter_mut().zip(&cur.rays[i]) {
                *x = x
                    .checked_add(
                        n.checked_mul(*y)
                            .ok_or_else(|| Error::ResourceCap("ray overflow".into()))?,
                    )
                    .ok_or_else(|| Error::ResourceCap("ray overflow".into()))?;
            }
            next_lambda[i] = lambda[i].sub(&lambda[p].scale(n))?;
        }
        cur = Cone { rays };
        lambda = next_lambda;
        cones.push(cur.clone());
    }
    Ok(cones)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProjectionReport {
    /// Row `j`: the projected ray `j` of the larger cone in the ray basis
    /// of the smaller one.
    pub e: Vec<Vec<i64>>,
    pub degree: i64,
}

/// Drops trailing coordinates of the rays of `big` and checks that the
/// image lies in `small` with the same dimension.
pub fn projection_compatibility(small: &Cone, big: &Cone) -> Result<ProjectionReport> {
    let ba = small.ambient_dim();
    if big.ambient_dim() < ba {
        return Err(Error::Precondition(
            "the larger cone lives in a smaller space".into(),
        ));
    }
    if !small.is_simplicial() {
        return Err(Error::Precondition(format!("{small} is not simplicial")));
    }
    let cols = small.basis_columns().expect("simplicial");
    let a = small.restrict(&cols);
    let det = a.det();
    let adj = a.adjugate();
    let mut e = Vec::new();
    let mut projected = Vec::new();
    for ray in &big.rays {
        let proj = &ray[..ba];
        let coeffs: Vec<i128> = (0..cols.len())
            .map(|i| {
                (0..cols.len())
                    .map(|j| proj[cols[j]] as i128 * adj[(j, i)])
                    .sum()
            })
            .collect();
        if coeffs.iter().any(|c| c % det != 0) {
            return Err(Error::FanDefect(format!(
                "projection of {ray:?} is not integral over {small}"
            )));
        }
        let coeffs: Vec<i64> = coeffs.iter().map(|c| (c / det) as i64).collect();
        let rebuilt: Vec<i64> = (0..ba)
            .map(|k| coeffs.iter().zip(&small.rays).map(|(c, r)| c * r[k]).sum())
            .collect();
        if rebuilt != proj || coeffs.iter().any(|&c| c < 0) {
            return Err(Error::FanDefect(format!(
                "projection of {ray:?} is not in {small}"
            )));
        }
        e.push(coeffs);
        projected.push(proj.to_vec());
    }
    let rank = IntMatrix::from_rows(ba, &projected).rank();
    if rank != small.rays.len() {
        return Err(Error::FanDefect(format!(
            "projected cone has dimension {rank}"
        )));
    }
    let degree = if e.len() == e[0].len() {
        IntMatrix::from_rows(e[0].len(), &e).det().abs() as i64
    } else {
        IntMatrix::from_rows(e[0].len(), &e)
            .elementary_divisors()
            .iter()
            .product::<i128>() as i64
    };
    Ok(ProjectionReport { e, degree })
}
